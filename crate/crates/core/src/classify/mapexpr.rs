//! Parsed maps: plane maps, maps of `P^1 x P^1`, de Jonquieres elements in
//! affine form, and monomial automorphisms of named surfaces.

use std::fmt;

use serde::Serialize;

use super::expr::{ast_frac, ast_poly, parse_map_raw, parse_poly, Frac, RawMap};
use crate::birmaps::{BirMapP1P1, BirMapP2, OrderResult};
use crate::delpezzo::{aut_order_capped, preserves, MonomialAut, WeightedHypersurface, COORDS};
use crate::error::{Error, Result};
use crate::jonquieres::{JonqElement, Mobius2};
use crate::polys::{MultiPoly, RatFunc, UniPoly};
use crate::scalars::CycNumber;

/// A surface given by name: `SF`, `S15`, `DP1(F4, F6)` or `CUBIC(F)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedSurface {
    pub name: String,
    pub surface: WeightedHypersurface,
}

impl Serialize for NamedSurface {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name)
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut depth = 0i32;
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

pub fn parse_surface(text: &str) -> Result<NamedSurface> {
    let t = text.trim();
    let upper = t.to_ascii_uppercase();
    let surface = if upper == "SF" {
        WeightedHypersurface::fermat_cubic()
    } else if upper == "S15" {
        WeightedHypersurface::s15()
    } else if let Some(args) = call_args(t, "DP1") {
        let parts = split_top_level(args);
        if parts.len() != 2 {
            return Err(Error::Parse("DP1 takes two forms F4, F6".into()));
        }
        WeightedHypersurface::dp1(&parse_poly(parts[0])?, &parse_poly(parts[1])?)?
    } else if let Some(args) = call_args(t, "CUBIC") {
        WeightedHypersurface::cubic(&parse_poly(args)?)?
    } else {
        return Err(Error::Parse(format!("unknown surface {t:?}; expected SF, S15, DP1(F4, F6) or CUBIC(F)")));
    };
    Ok(NamedSurface { name: t.to_string(), surface })
}

fn call_args<'a>(t: &'a str, head: &str) -> Option<&'a str> {
    let (h, rest) = t.split_at(t.find('(')?);
    if !h.trim().eq_ignore_ascii_case(head) || !rest.ends_with(')') {
        return None;
    }
    Some(&rest[1..rest.len() - 1])
}

#[derive(Clone, Debug, PartialEq)]
pub enum MapExpr {
    Plane(BirMapP2),
    P1P1(BirMapP1P1),
    Jonq(JonqElement),
    Surface { surface: NamedSurface, aut: MonomialAut },
}

fn renames<'a>(src: &'a [String], to: &[&'a str]) -> Vec<(&'a str, &'a str)> {
    src.iter().map(|s| s.as_str()).zip(to.iter().copied()).collect()
}

pub fn parse_map(text: &str) -> Result<MapExpr> {
    let raw = parse_map_raw(text)?;
    if raw.affine {
        return parse_affine(&raw).map(MapExpr::Jonq);
    }
    match (raw.source.len(), raw.source[0].len()) {
        (1, 3) => {
            let ren = renames(&raw.source[0], &["x", "y", "z"]);
            let c: Vec<MultiPoly> = raw.target[0].iter().map(|a| ast_poly(a, &ren)).collect::<Result<_>>()?;
            Ok(MapExpr::Plane(BirMapP2::new([c[0].clone(), c[1].clone(), c[2].clone()])?))
        }
        (2, 2) if raw.source[1].len() == 2 => {
            let mut src = raw.source[0].clone();
            src.extend(raw.source[1].iter().cloned());
            let ren = renames(&src, &["x1", "x2", "y1", "y2"]);
            let g = |i: usize, j: usize| ast_poly(&raw.target[i][j], &ren);
            Ok(MapExpr::P1P1(BirMapP1P1::new([g(0, 0)?, g(0, 1)?], [g(1, 0)?, g(1, 1)?])?))
        }
        (1, 4) => Err(Error::Parse("maps on four coordinates need a surface (--surface)".into())),
        _ => Err(Error::Parse(format!(
            "expected (x:y:z), ((x1:x2),(y1:y2)) or (x,y) as source, got {} group(s)",
            raw.source.len()
        ))),
    }
}

fn to_ratfunc(p: &MultiPoly) -> Result<RatFunc> {
    RatFunc::from_multipoly(p, &MultiPoly::one())
}

// (x, y) -> ((a x + b)/(c x + d), (A y + B)/(C y + D))
fn parse_affine(raw: &RawMap) -> Result<JonqElement> {
    let src: Vec<String> = raw.source.iter().map(|g| g[0].clone()).collect();
    let ren = renames(&src, &["x", "y"]);
    let fx = ast_frac(&raw.target[0][0], &ren)?;
    let fy = ast_frac(&raw.target[1][0], &ren)?;
    let not_jonq = || Error::Domain("not a de Jonquieres map: expected ((a x + b)/(c x + d), (A y + B)/(C y + D))".into());
    if fx.num.has_var("y") || fx.den.has_var("y") || fx.num.degree_in("x") > 1 || fx.den.degree_in("x") > 1 {
        return Err(not_jonq());
    }
    let lin = |p: &MultiPoly, v: &str| -> Result<[MultiPoly; 2]> {
        if p.degree_in(v) > 1 {
            return Err(not_jonq());
        }
        let mut c = p.coeffs_in(v);
        c.resize(2, MultiPoly::zero());
        Ok([c[1].clone(), c[0].clone()])
    };
    let scalar = |p: &MultiPoly| p.constant_value().unwrap_or_default();
    let [a, b] = lin(&fx.num, "x")?;
    let [c, d] = lin(&fx.den, "x")?;
    let h = [scalar(&a), scalar(&b), scalar(&c), scalar(&d)];
    let [va, vb] = lin(&fy.num, "y")?;
    let [vc, vd] = lin(&fy.den, "y")?;
    let v = Mobius2::new([to_ratfunc(&va)?, to_ratfunc(&vb)?, to_ratfunc(&vc)?, to_ratfunc(&vd)?])?;
    JonqElement::new(v, h)
}

/// `(w:x:y:z) -> (s0*p0 : ...)` with each entry a scalar times a coordinate.
pub fn parse_aut(text: &str, surface: &NamedSurface) -> Result<MonomialAut> {
    let raw = parse_map_raw(text)?;
    if raw.affine || raw.source.len() != 1 || raw.source[0].len() != 4 {
        return Err(Error::Parse("expected (w:x:y:z) -> (. : . : . : .)".into()));
    }
    let ren = renames(&raw.source[0], &COORDS);
    let mut perm = [0usize; 4];
    let mut scales = [(); 4].map(|_| CycNumber::one());
    for i in 0..4 {
        let p = ast_poly(&raw.target[0][i], &ren)?;
        let terms = p.term_list();
        let bad = || Error::Domain(format!("entry {} is not a scalar times a coordinate", i + 1));
        if terms.len() != 1 || terms[0].0.len() != 1 || terms[0].0[0].1 != 1 {
            return Err(bad());
        }
        perm[i] = COORDS.iter().position(|c| *c == terms[0].0[0].0).ok_or_else(bad)?;
        scales[i] = terms[0].1.clone();
    }
    let aut = MonomialAut::new(perm, scales)?;
    if preserves(&aut, &surface.surface)?.is_none() {
        return Err(Error::Domain(format!("{aut} does not preserve {}", surface.name)));
    }
    Ok(aut)
}

// num/den, dropping a constant denominator
fn quotient(num: MultiPoly, den: MultiPoly) -> String {
    match den.constant_value() {
        Some(c) => num.scale(&c.inv().unwrap()).to_string(),
        None => format!("({num})/({den})"),
    }
}

/// `(x,y) -> (A, B)` form of a de Jonquieres element.
pub fn affine_string(j: &JonqElement) -> String {
    let h = j.horizontal();
    let xp = |a: &CycNumber, b: &CycNumber| &MultiPoly::var("x").scale(a) + &MultiPoly::constant(b.clone());
    let e = j.vertical().entries();
    let mut l = UniPoly::one();
    for r in e {
        let g = l.gcd(r.den());
        l = (&l * r.den()).div_exact(&g).unwrap();
    }
    let poly = |r: &RatFunc| {
        let p = (&l * r.num()).div_exact(r.den()).unwrap();
        MultiPoly::from_unipoly(&p, "x")
    };
    let y = MultiPoly::var("y");
    let ypart = |a: &RatFunc, b: &RatFunc| &(&y * &poly(a)) + &poly(b);
    format!(
        "(x,y) -> ({}, {})",
        quotient(xp(&h[0], &h[1]), xp(&h[2], &h[3])),
        quotient(ypart(&e[0], &e[1]), ypart(&e[2], &e[3]))
    )
}

impl fmt::Display for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapExpr::Plane(m) => write!(f, "{m}"),
            MapExpr::P1P1(m) => write!(f, "{m}"),
            MapExpr::Jonq(j) => write!(f, "{}", affine_string(j)),
            MapExpr::Surface { aut, .. } => write!(f, "{aut}"),
        }
    }
}

impl Serialize for MapExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl MapExpr {
    pub fn kind(&self) -> &'static str {
        match self {
            MapExpr::Plane(_) => "plane",
            MapExpr::P1P1(_) => "p1xp1",
            MapExpr::Jonq(_) => "jonquieres",
            MapExpr::Surface { .. } => "surface",
        }
    }

    pub fn surface_name(&self) -> Option<&str> {
        match self {
            MapExpr::Surface { surface, .. } => Some(&surface.name),
            _ => None,
        }
    }

    pub fn order(&self, cap: u64, degree_bound: u32) -> Result<OrderResult> {
        Ok(match self {
            MapExpr::Plane(m) => m.order(cap, degree_bound),
            MapExpr::P1P1(m) => m.order(cap, degree_bound),
            MapExpr::Jonq(j) => j.order(cap),
            MapExpr::Surface { surface, aut } => match aut_order_capped(aut, &surface.surface, cap) {
                Ok(n) => OrderResult::Finite(n),
                Err(Error::CapExceeded(_)) => OrderResult::ExceedsCap,
                Err(e) => return Err(e),
            },
        })
    }

    pub fn power(&self, k: u64) -> Result<MapExpr> {
        Ok(match self {
            MapExpr::Plane(m) => MapExpr::Plane(m.power(k)?),
            MapExpr::P1P1(m) => MapExpr::P1P1(m.power(k)?),
            MapExpr::Jonq(j) => MapExpr::Jonq(j.power(k)),
            MapExpr::Surface { surface, aut } => MapExpr::Surface {
                surface: surface.clone(),
                aut: aut.power(k),
            },
        })
    }

    /// `self o other`, both of the same kind.
    pub fn compose(&self, other: &MapExpr) -> Result<MapExpr> {
        Ok(match (self, other) {
            (MapExpr::Plane(a), MapExpr::Plane(b)) => MapExpr::Plane(a.compose(b)?),
            (MapExpr::P1P1(a), MapExpr::P1P1(b)) => MapExpr::P1P1(a.compose(b)?),
            (MapExpr::Jonq(a), MapExpr::Jonq(b)) => MapExpr::Jonq(a.compose(b)),
            (MapExpr::Surface { surface, aut: a }, MapExpr::Surface { aut: b, surface: s2 }) if surface == s2 => {
                MapExpr::Surface {
                    surface: surface.clone(),
                    aut: a.compose(b),
                }
            }
            _ => return Err(Error::Domain(format!("cannot compose a {} map with a {} map", self.kind(), other.kind()))),
        })
    }

    /// Largest conductor among the scalars in the map.
    pub fn conductor(&self) -> u32 {
        let polys: Vec<MultiPoly> = match self {
            MapExpr::Plane(m) => m.components().to_vec(),
            MapExpr::P1P1(m) => m.x_pair().iter().chain(m.y_pair().iter()).cloned().collect(),
            MapExpr::Jonq(j) => {
                let mut v: Vec<MultiPoly> = j.horizontal().iter().map(|c| MultiPoly::constant(c.clone())).collect();
                for e in j.vertical().entries() {
                    v.push(e.numerator());
                    v.push(e.denominator());
                }
                v
            }
            MapExpr::Surface { aut, surface } => {
                let mut v: Vec<MultiPoly> = aut.scales.iter().map(|c| MultiPoly::constant(c.clone())).collect();
                v.push(surface.surface.equation.clone());
                v
            }
        };
        polys.iter().flat_map(|p| p.coefficients().map(|c| c.conductor()).collect::<Vec<_>>()).max().unwrap_or(1)
    }
}

/// A fraction in `x` as a rational function.
pub fn frac_to_ratfunc(f: &Frac) -> Result<RatFunc> {
    RatFunc::from_multipoly(&f.num, &f.den)
}
