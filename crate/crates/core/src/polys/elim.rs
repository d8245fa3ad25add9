//! Existence of common zeros of polynomial systems in two variables,
//! by resultant elimination followed by gcd computations over
//! `K[u]/(h)` with splitting whenever a zero divisor turns up.

use super::{MultiPoly, UniPoly};
use crate::scalars::CycNumber;

type Coeffs = Vec<UniPoly>;

fn to_coeffs(p: &MultiPoly, u: &str, v: &str) -> Coeffs {
    p.coeffs_in(v)
        .into_iter()
        .map(|c| c.to_unipoly(u).expect("expected a polynomial in two variables"))
        .collect()
}

fn trim(c: &mut Coeffs) {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
}

/// True when the polynomials (in variables `u`, `v` only) have a common
/// zero in the affine plane over the algebraic closure.
pub fn has_common_zero_affine(polys: &[MultiPoly], u: &str, v: &str) -> bool {
    let mut ps: Vec<MultiPoly> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    if ps.is_empty() {
        return true;
    }
    if ps.iter().any(|p| p.is_constant()) {
        return false;
    }
    loop {
        let (with_v, without_v): (Vec<MultiPoly>, Vec<MultiPoly>) =
            ps.iter().cloned().partition(|p| p.degree_in(v) > 0);
        let mut g0 = UniPoly::zero();
        for p in &without_v {
            g0 = g0.gcd(&p.to_unipoly(u).unwrap());
        }
        if !without_v.is_empty() && g0.degree() == 0 {
            return false;
        }
        if with_v.is_empty() {
            return true;
        }
        let h = if !without_v.is_empty() {
            g0
        } else if with_v.len() == 1 {
            // a single curve has infinitely many points
            return true;
        } else {
            let r = with_v[0].resultant(&with_v[1], v);
            if r.is_zero() {
                let g = with_v[0].gcd(&with_v[1]);
                let mut next = vec![g];
                next.extend(with_v[2..].iter().cloned());
                ps = next;
                continue;
            }
            let r = r.to_unipoly(u).unwrap();
            if r.degree() == 0 {
                return false;
            }
            r
        };
        let h = h.squarefree_part();
        let cs: Vec<Coeffs> = ps.iter().map(|p| to_coeffs(p, u, v)).collect();
        return d5_common(&h, cs);
    }
}

fn reduce(c: &Coeffs, h: &UniPoly) -> Coeffs {
    let mut out: Coeffs = c.iter().map(|a| a.divrem(h).unwrap().1).collect();
    trim(&mut out);
    out
}

enum Inv {
    Zero,
    Unit(UniPoly),
    Split(UniPoly, UniPoly),
}

fn classify_elem(a: &UniPoly, h: &UniPoly) -> Inv {
    if a.is_zero() {
        return Inv::Zero;
    }
    let (g, s, _) = a.ext_gcd(h);
    if g.degree() == 0 {
        return Inv::Unit(s.divrem(h).unwrap().1);
    }
    if g.degree() == h.degree() {
        return Inv::Zero;
    }
    let other = h.div_exact(&g).unwrap();
    Inv::Split(g, other)
}

fn d5_common(h: &UniPoly, polys: Vec<Coeffs>) -> bool {
    if h.degree() < 1 {
        return false;
    }
    let mut list: Vec<Coeffs> = polys.iter().map(|c| reduce(c, h)).collect();
    // make every leading coefficient a unit or split
    loop {
        let mut changed = false;
        for i in 0..list.len() {
            while let Some(lc) = list[i].last().cloned() {
                match classify_elem(&lc, h) {
                    Inv::Zero => {
                        list[i].pop();
                        trim(&mut list[i]);
                        changed = true;
                    }
                    Inv::Unit(_) => break,
                    Inv::Split(a, b) => {
                        return d5_common(&a, list.clone()) || d5_common(&b, list);
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    list.retain(|c| !c.is_empty());
    if list.is_empty() {
        return true;
    }
    if list.iter().any(|c| c.len() == 1) {
        return false;
    }
    if list.len() == 1 {
        return true;
    }
    list.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let a = list.remove(0);
    let b = list.remove(0);
    let r = prem_monic(&a, &b, h);
    let mut next = vec![b, r];
    next.extend(list);
    d5_common(h, next)
}

// a mod b in (K[u]/h)[v], with lc(b) a unit mod h.
fn prem_monic(a: &Coeffs, b: &Coeffs, h: &UniPoly) -> Coeffs {
    let inv = match classify_elem(b.last().unwrap(), h) {
        Inv::Unit(i) => i,
        _ => unreachable!("leading coefficient must be a unit"),
    };
    let db = b.len() - 1;
    let mut r = a.clone();
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let coef = (&lr * &inv).divrem(h).unwrap().1;
        let shift = r.len() - 1 - db;
        for (j, bj) in b.iter().enumerate() {
            let t = (&coef * bj).divrem(h).unwrap().1;
            r[j + shift] = (&r[j + shift] - &t).divrem(h).unwrap().1;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Common zero in `P^2` of homogeneous polynomials in `x, y, z`.
pub fn has_common_zero_p2(polys: &[MultiPoly]) -> bool {
    let one = MultiPoly::one();
    let zero = MultiPoly::zero();
    let chart: Vec<MultiPoly> = polys
        .iter()
        .map(|p| p.substitute(&[("z", one.clone())]))
        .collect();
    if has_common_zero_affine(&chart, "x", "y") {
        return true;
    }
    // the line z = 0 with y = 1
    let line: Vec<UniPoly> = polys
        .iter()
        .map(|p| {
            p.substitute(&[("z", zero.clone()), ("y", one.clone())])
                .to_unipoly("x")
                .unwrap()
        })
        .collect();
    let mut g = UniPoly::zero();
    for l in &line {
        g = g.gcd(l);
    }
    if g.is_zero() || g.degree() > 0 {
        return true;
    }
    // the point (1:0:0)
    polys.iter().all(|p| {
        p.eval(&[
            ("x", CycNumber::one()),
            ("y", CycNumber::zero()),
            ("z", CycNumber::zero()),
        ])
        .unwrap()
        .is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::expr::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn affine_systems() {
        assert!(has_common_zero_affine(&[p("x - 1"), p("y - 2")], "x", "y"));
        assert!(!has_common_zero_affine(&[p("x^2 - 1"), p("y"), p("x*y - 1")], "x", "y"));
        assert!(has_common_zero_affine(&[p("x^2 - 1"), p("y - x"), p("y - 1")], "x", "y"));
        assert!(!has_common_zero_affine(&[p("x^2 - 1"), p("y - x"), p("y - 2")], "x", "y"));
        // same x-coordinate, different y
        assert!(!has_common_zero_affine(&[p("y^2 - 1"), p("(y - 1)*x + (y + 1)*(x - 1)"), p("x - 1/2")], "x", "y"));
        assert!(has_common_zero_affine(&[p("x*y"), p("x*(y - 1)")], "x", "y"));
    }

    #[test]
    fn projective_cubic_singularities() {
        let sing = |f: &str| {
            let f = p(f);
            has_common_zero_p2(&[f.derivative("x"), f.derivative("y"), f.derivative("z")])
        };
        assert!(!sing("x^3 + y^3 + z^3"));
        assert!(sing("y^2*z - x^3"));
        assert!(!sing("y^2*z - x^3 - x*z^2"));
        assert!(sing("y^2*z - x^3 - x^2*z"));
        assert!(sing("x*y*z"));
    }
}
