//! Conjugacy invariants: non-rational curves fixed by the powers of a map.

use serde::Serialize;

use super::mapexpr::MapExpr;
use crate::birmaps::{FixedCurveReport, OrderResult};
use crate::curves::{p1p1_curve_genus, plane_cubic_j, plane_curve_genus, quadratic_genus};
use crate::delpezzo::{fixed_locus, FixedComponent};
use crate::error::{Error, Result};
use crate::jonquieres::JonqElement;
use crate::polys::{MultiPoly, RatFunc, UniPoly};
use crate::scalars::{divisors, CycNumber};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveInvariant {
    pub equation: String,
    /// `None` when the genus could not be read off.
    pub genus: Option<u32>,
    pub j_invariant: Option<CycNumber>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerRecord {
    pub power: u64,
    pub curves: Vec<CurveInvariant>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantRecord {
    pub kind: &'static str,
    pub order: u64,
    pub powers: Vec<PowerRecord>,
}

pub type Signature = Vec<(u64, Vec<(Option<u32>, Option<CycNumber>)>)>;

impl InvariantRecord {
    /// The record without equations, for comparing conjugate maps.
    pub fn signature(&self) -> Signature {
        self.powers
            .iter()
            .map(|p| {
                let mut c: Vec<_> = p.curves.iter().map(|c| (c.genus, c.j_invariant.clone())).collect();
                c.sort();
                (p.power, c)
            })
            .collect()
    }

    pub fn curves_at(&self, power: u64) -> &[CurveInvariant] {
        self.powers
            .iter()
            .find(|p| p.power == power)
            .map(|p| p.curves.as_slice())
            .unwrap_or(&[])
    }

    pub fn has_nonrational_curve(&self) -> bool {
        self.powers.iter().any(|p| !p.curves.is_empty())
    }
}

fn keep(genus: Option<u32>) -> bool {
    genus != Some(0)
}

fn plane_curves(rep: &FixedCurveReport) -> Vec<CurveInvariant> {
    rep.components
        .iter()
        .filter(|(f, _)| f.total_degree() >= 3)
        .filter_map(|(f, _)| {
            let genus = plane_curve_genus(f);
            keep(genus).then(|| CurveInvariant {
                equation: f.to_string(),
                genus,
                j_invariant: if genus == Some(1) && f.total_degree() == 3 { plane_cubic_j(f) } else { None },
            })
        })
        .collect()
}

fn p1p1_curves(rep: &FixedCurveReport) -> Vec<CurveInvariant> {
    rep.components
        .iter()
        .filter_map(|(f, _)| {
            let genus = p1p1_curve_genus(f);
            keep(genus).then(|| CurveInvariant {
                equation: f.to_string(),
                genus,
                j_invariant: None,
            })
        })
        .collect()
}

fn clear(e: &[RatFunc]) -> Vec<UniPoly> {
    let mut l = UniPoly::one();
    for r in e {
        let d = r.den();
        l = l.div_exact(&l.gcd(d)).unwrap() * d.clone();
    }
    e.iter().map(|r| r.num().clone() * l.div_exact(r.den()).unwrap()).collect()
}

/// Over a fixed base point set, the fixed curve of `y -> V(x)(y)` is
/// `c y^2 + (d - a) y - b = 0`; nothing non-rational otherwise.
fn jonq_curves(j: &JonqElement) -> Vec<CurveInvariant> {
    let h = j.horizontal();
    let base_identity = h[1].is_zero() && h[2].is_zero() && h[0] == h[3];
    if !base_identity {
        return vec![];
    }
    let e = j.vertical().entries();
    let p = clear(&[e[2].clone(), &e[3] - &e[0], -&e[1]]);
    if p[0].is_zero() {
        return vec![];
    }
    let genus = quadratic_genus(&p[0], &p[1], &p[2]);
    if !keep(genus) {
        return vec![];
    }
    let y = MultiPoly::var("y");
    let eq = &(&(&MultiPoly::from_unipoly(&p[0], "x") * &y.pow(2)) + &(&MultiPoly::from_unipoly(&p[1], "x") * &y))
        + &MultiPoly::from_unipoly(&p[2], "x");
    vec![CurveInvariant {
        equation: eq.to_string(),
        genus,
        j_invariant: None,
    }]
}

fn surface_curves(comps: &[FixedComponent]) -> Vec<CurveInvariant> {
    comps
        .iter()
        .filter_map(|c| match c {
            FixedComponent::Curve {
                linear_equations,
                equation,
                genus,
                j_invariant,
                ..
            } if keep(*genus) => {
                let lin: Vec<String> = linear_equations.iter().map(|l| format!("{l} = 0")).collect();
                Some(CurveInvariant {
                    equation: format!("{}, {equation} = 0", lin.join(", ")),
                    genus: *genus,
                    j_invariant: j_invariant.clone(),
                })
            }
            _ => None,
        })
        .collect()
}

/// Non-rational curves fixed by `m`.
pub fn fixed_nonrational_curves(m: &MapExpr) -> Result<Vec<CurveInvariant>> {
    Ok(match m {
        MapExpr::Plane(p) => plane_curves(&p.fixed_curve()?),
        MapExpr::P1P1(p) => p1p1_curves(&p.fixed_curve()?),
        MapExpr::Jonq(j) => jonq_curves(j),
        MapExpr::Surface { surface, aut } => surface_curves(&fixed_locus(aut, &surface.surface)?),
    })
}

/// Order and, for every proper divisor `k` of it, the non-rational curves
/// fixed by `m^k`.
pub fn invariants_of(m: &MapExpr, cap: u64, degree_bound: u32) -> Result<InvariantRecord> {
    let order = match m.order(cap, degree_bound)? {
        OrderResult::Finite(n) => n,
        OrderResult::ExceedsCap => {
            return Err(Error::CapExceeded(format!("order above {cap} (or degree above {degree_bound})")))
        }
    };
    let mut powers = Vec::new();
    for k in divisors(order) {
        if k == order {
            continue;
        }
        let p = m.power(k)?;
        powers.push(PowerRecord {
            power: k,
            curves: fixed_nonrational_curves(&p)?,
        });
    }
    Ok(InvariantRecord {
        kind: m.kind(),
        order,
        powers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::mapexpr::{parse_aut, parse_map, parse_surface};

    fn inv(s: &str) -> InvariantRecord {
        invariants_of(&parse_map(s).unwrap(), 64, 512).unwrap()
    }

    #[test]
    fn jonquieres_involution() {
        let r = inv("(x,y) -> (x, (x^6 - 1)/y)");
        assert_eq!(r.order, 2);
        assert_eq!(r.signature(), vec![(1, vec![(Some(2), None)])]);
        // the same map written in P^2
        let MapExpr::Jonq(j) = parse_map("(x,y) -> (x, (x^6 - 1)/y)").unwrap() else { panic!() };
        let plane = MapExpr::Plane(j.to_birmap_p2());
        let r2 = invariants_of(&plane, 64, 512).unwrap();
        assert_eq!(r2.signature(), r.signature());
    }

    #[test]
    fn surface_and_linear() {
        let sf = parse_surface("SF").unwrap();
        let aut = parse_aut("(w:x:y:z) -> (w : zeta(3)*y : z : x)", &sf).unwrap();
        let r = invariants_of(&MapExpr::Surface { surface: sf, aut }, 64, 512).unwrap();
        assert_eq!(r.order, 9);
        assert_eq!(r.signature(), vec![(1, vec![]), (3, vec![(Some(1), Some(CycNumber::zero()))])]);
        let r = inv("(x:y:z) -> (x : y : zeta(7)*z)");
        assert_eq!(r.order, 7);
        assert!(!r.has_nonrational_curve());
    }

    #[test]
    fn p1p1_swap() {
        let r = inv("((x1:x2),(y1:y2)) -> ((y1:y2),(x1:x2))");
        assert_eq!(r.order, 2);
        assert!(!r.has_nonrational_curve());
    }
}
