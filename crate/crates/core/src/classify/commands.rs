//! Subcommand bodies. Each returns a JSON value and a plain-text rendering.

use serde_json::{json, Value};

use super::config::Config;
use super::expr::{parse_ratfunc, parse_unipoly};
use super::families::classify_order;
use super::invariants::invariants_of;
use super::mapexpr::{affine_string, parse_aut, parse_map, parse_surface, MapExpr};
use crate::birmaps::OrderResult;
use crate::curves::{p1p1_curve_genus, plane_curve_genus};
use crate::delpezzo::fixed_locus;
use crate::error::{Error, Result};
use crate::jonquieres::{is_involution_block, jonq_power, root_search, SearchConfig};
use crate::picard::{orbit_criteria, orbit_sizes, orbits, weyl_word, exceptional_classes, LatticeIsometry, PicLattice};

pub struct Output {
    pub json: Value,
    pub text: String,
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// A map from `--map`, or from `--surface` with `--aut`.
pub fn resolve_map(map: Option<&str>, surface: Option<&str>, aut: Option<&str>, cfg: &Config) -> Result<MapExpr> {
    let m = match (map, surface, aut) {
        (Some(m), None, None) => parse_map(m)?,
        (None, Some(s), Some(a)) => {
            let surface = parse_surface(s)?;
            let aut = parse_aut(a, &surface)?;
            MapExpr::Surface { surface, aut }
        }
        (Some(a), Some(s), None) => {
            let surface = parse_surface(s)?;
            let aut = parse_aut(a, &surface)?;
            MapExpr::Surface { surface, aut }
        }
        _ => return Err(Error::Parse("give --map, or --surface with --aut".into())),
    };
    cfg.check_conductor(m.conductor())?;
    Ok(m)
}

pub fn classify(n: u64, family_size: usize, cfg: &Config) -> Result<Output> {
    let r = classify_order(n, family_size, cfg)?;
    let mut text = format!("order {n}: {} conjugacy class(es)\n", r.count);
    for p in &r.representatives {
        let on = p.surface.as_ref().map(|s| format!(" on {s}")).unwrap_or_default();
        text += &format!("  {}: {}{on} (order {})\n", p.name, p.map, p.verified_order);
    }
    for c in &r.certificates {
        let tag = if c.cited.is_some() { "checked, cited" } else { "checked" };
        text += &format!("  {} vs {}: {} [{tag}] {} | {}\n", c.pair[0], c.pair[1], c.invariant, c.values[0], c.values[1]);
    }
    Ok(Output { json: to_json(&r), text })
}

pub fn invariants(m: &MapExpr, cfg: &Config) -> Result<Output> {
    let r = invariants_of(m, cfg.order_cap, cfg.degree_bound)?;
    let mut text = format!("{m}\norder {}\n", r.order);
    for p in &r.powers {
        for c in &p.curves {
            let g = c.genus.map(|g| g.to_string()).unwrap_or("?".into());
            let j = c.j_invariant.as_ref().map(|j| format!(", j = {j}")).unwrap_or_default();
            text += &format!("  power {}: {} (genus {g}{j})\n", p.power, c.equation);
        }
    }
    if !r.has_nonrational_curve() {
        text += "  no non-rational fixed curves\n";
    }
    let mut json = to_json(&r);
    json["map"] = json!(m.to_string());
    Ok(Output { json, text })
}

pub fn compose(f: &MapExpr, g: &MapExpr) -> Result<Output> {
    let h = f.compose(g)?;
    Ok(Output {
        json: json!({"f": f.to_string(), "g": g.to_string(), "composite": h.to_string(), "kind": h.kind()}),
        text: format!("{h}\n"),
    })
}

pub fn order(m: &MapExpr, cfg: &Config) -> Result<Output> {
    match m.order(cfg.order_cap, cfg.degree_bound)? {
        OrderResult::Finite(n) => Ok(Output {
            json: json!({"map": m.to_string(), "order": n}),
            text: format!("{n}\n"),
        }),
        OrderResult::ExceedsCap => Err(Error::CapExceeded(format!(
            "order above {} (or degree above {})",
            cfg.order_cap, cfg.degree_bound
        ))),
    }
}

pub fn fixed_curve(m: &MapExpr) -> Result<Output> {
    let mut comps = Vec::new();
    let mut text = String::new();
    let report = match m {
        MapExpr::Plane(p) => Some((p.fixed_curve()?, true)),
        MapExpr::Jonq(j) => Some((j.to_birmap_p2().fixed_curve()?, true)),
        MapExpr::P1P1(p) => Some((p.fixed_curve()?, false)),
        MapExpr::Surface { surface, aut } => {
            let fl = fixed_locus(aut, &surface.surface)?;
            for c in &fl {
                text += &format!("  {}\n", serde_json::to_string(c).unwrap());
            }
            comps = fl.iter().map(to_json).collect();
            None
        }
    };
    let mut residual = false;
    if let Some((rep, plane)) = report {
        residual = rep.residual;
        for (f, mult) in &rep.components {
            let genus = if plane { plane_curve_genus(f) } else { p1p1_curve_genus(f) };
            text += &format!("  {f} (multiplicity {mult}, genus {})\n", genus.map(|g| g.to_string()).unwrap_or("?".into()));
            comps.push(json!({"equation": f.to_string(), "multiplicity": mult, "genus": genus}));
        }
    }
    if comps.is_empty() {
        text += "  no fixed curve\n";
    }
    Ok(Output {
        json: json!({"map": m.to_string(), "components": comps, "residual": residual}),
        text: format!("{m}\n{text}"),
    })
}

pub fn root(g: &str, n: u64, degree_bound: Option<usize>, cfg: &Config) -> Result<Output> {
    let g = parse_unipoly(g)?;
    let sc = SearchConfig {
        degree_bound: degree_bound.unwrap_or(cfg.root_degree_bound),
        ..SearchConfig::default()
    };
    match root_search(&g, n, &sc)? {
        Some(hit) => {
            let phi_n = hit.phi.power(n);
            let ok = is_involution_block(phi_n.vertical(), &g) && phi_n.horizontal()[1].is_zero();
            let ord = hit.phi.order(cfg.order_cap.max(2 * n));
            Ok(Output {
                json: json!({
                    "found": true,
                    "nu": hit.nu.to_string(),
                    "phi": affine_string(&hit.phi),
                    "order": match ord {
                        OrderResult::Finite(k) => Some(k),
                        OrderResult::ExceedsCap => None,
                    },
                    "candidates_tried": hit.candidates_tried,
                    "phi_n_equals_involution": ok,
                }),
                text: format!("nu = {}\nphi = {}\norder {ord}\n", hit.nu, affine_string(&hit.phi)),
            })
        }
        None => Ok(Output {
            json: json!({"found": false, "degree_bound": sc.degree_bound}),
            text: format!("no root found with degree bound {}\n", sc.degree_bound),
        }),
    }
}

pub fn power(nu: &str, g: &str, n: u64) -> Result<Output> {
    let nu = parse_ratfunc(nu)?;
    let g = parse_unipoly(g)?;
    let v = jonq_power(&nu, &g, n)?;
    let ok = is_involution_block(&v, &g);
    Ok(Output {
        json: json!({"vertical": v.to_string(), "phi_n_equals_involution": ok}),
        text: format!("{v}\nphi^{n} is the involution: {ok}\n"),
    })
}

/// A JSON matrix, a JSON list of matrices, or Weyl words separated by `;`
/// or newlines.
pub fn parse_isometries(text: &str, l: &PicLattice) -> Result<Vec<LatticeIsometry>> {
    let t = text.trim();
    if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| Error::Parse(format!("isometry JSON: {e}")))?;
        let mats: Vec<Vec<Vec<i64>>> = if v.get(0).and_then(|r| r.get(0)).is_some_and(|x| x.is_array()) {
            serde_json::from_value(v)
        } else {
            serde_json::from_value(v).map(|m| vec![m])
        }
        .map_err(|e| Error::Parse(format!("isometry JSON: {e}")))?;
        return mats.into_iter().map(|m| LatticeIsometry::new(m, l)).collect();
    }
    let words: Vec<&str> = t.split([';', '\n']).map(str::trim).filter(|w| !w.is_empty()).collect();
    if words.is_empty() {
        return Err(Error::Parse("empty isometry file".into()));
    }
    words.into_iter().map(|w| weyl_word(w, l)).collect()
}

pub fn picard(r: usize, isometry_text: &str) -> Result<Output> {
    let l = PicLattice::new(r)?;
    let gens = parse_isometries(isometry_text, &l)?;
    let report = orbit_criteria(&gens, &l)?;
    let sizes = orbit_sizes(&orbits(&gens, &exceptional_classes(&l))?);
    let mut json = to_json(&report);
    json["orbit_sizes"] = json!(sizes);
    json["exceptional_classes"] = json!(exceptional_classes(&l).len());
    let text = format!(
        "r = {r}, degree {}, invariant rank {}\norbit sizes {:?}\n{}\n",
        report.degree,
        report.invariant_rank,
        sizes,
        if !report.hypothesis_met {
            "hypothesis not met".to_string()
        } else if report.passed {
            "orbit sizes divisible by the degree; orbit sums are negative multiples of K".to_string()
        } else {
            "check FAILED".to_string()
        }
    );
    Ok(Output { json, text })
}
