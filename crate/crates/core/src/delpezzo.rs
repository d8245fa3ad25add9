//! Weighted hypersurfaces in `P(a_w, a_x, a_y, a_z)` (cubic surfaces
//! `w^3 = F(x, y, z)` and degree-one surfaces `w^2 = z^3 + F4 z + F6`),
//! monomial automorphisms, fixed loci, smoothness and diagonal
//! automorphism groups.

use std::fmt;

use serde::Serialize;

use crate::curves::{cubic_poly_j, dp1_trace_to_weierstrass, j_invariant, plane_cubic_j, plane_curve_genus};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, rref, smith_invariants};
use crate::polys::elim::{has_common_zero_affine, has_common_zero_p2};
use crate::polys::{MultiPoly, UniPoly};
use crate::scalars::{nth_roots, CycNumber};

pub const COORDS: [&str; 4] = ["w", "x", "y", "z"];

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedHypersurface {
    pub weights: [u32; 4],
    pub equation: MultiPoly,
    pub degree: u32,
}

fn weighted_degree(p: &MultiPoly, weights: &[u32; 4]) -> Option<u32> {
    let mut d = None;
    for (pw, _) in p.term_list() {
        let e: u32 = pw
            .iter()
            .map(|(v, e)| weights[COORDS.iter().position(|c| c == v).unwrap()] * e)
            .sum();
        match d {
            None => d = Some(e),
            Some(f) if f != e => return None,
            _ => {}
        }
    }
    d
}

impl WeightedHypersurface {
    pub fn new(weights: [u32; 4], equation: MultiPoly) -> Result<Self> {
        if equation.is_zero() {
            return Err(Error::Domain("zero equation".into()));
        }
        for v in equation.vars() {
            if !COORDS.contains(&v.as_str()) {
                return Err(Error::Domain(format!("unexpected variable {v}")));
            }
        }
        let degree = weighted_degree(&equation, &weights)
            .ok_or_else(|| Error::Domain("equation is not weighted homogeneous".into()))?;
        Ok(WeightedHypersurface { weights, equation, degree })
    }

    /// `w^3 + x^3 + y^3 + z^3 = 0`.
    pub fn fermat_cubic() -> Self {
        let m = -CycNumber::one();
        let f = ["x", "y", "z"]
            .iter()
            .fold(MultiPoly::zero(), |acc, v| &acc + &MultiPoly::var(v).pow(3).scale(&m));
        Self::cubic(&f).unwrap()
    }

    /// `w^3 = F(x, y, z)`.
    pub fn cubic(f: &MultiPoly) -> Result<Self> {
        if !f.is_homogeneous() || f.total_degree() != 3 || f.has_var("w") {
            return Err(Error::Domain("F must be a ternary cubic form".into()));
        }
        Self::new([1, 1, 1, 1], &MultiPoly::var("w").pow(3) - f)
    }

    /// `w^2 = z^3 + F4(x, y) z + F6(x, y)` in `P(3, 1, 1, 2)`.
    pub fn dp1(f4: &MultiPoly, f6: &MultiPoly) -> Result<Self> {
        check_binary(f4, 4)?;
        check_binary(f6, 6)?;
        let z = MultiPoly::var("z");
        let rhs = &(&z.pow(3) + &(f4 * &z)) + f6;
        Self::new([3, 1, 1, 2], &MultiPoly::var("w").pow(2) - &rhs)
    }

    /// `w^2 = z^3 + x (x^5 + y^5)`.
    pub fn s15() -> Self {
        let f6 = MultiPoly::var("x").pow(6) + &MultiPoly::var("x") * &MultiPoly::var("y").pow(5);
        Self::dp1(&MultiPoly::zero(), &f6).unwrap()
    }

    /// `w^2 = z^3 + lambda x^4 z + x (mu x^5 + y^5)`.
    pub fn order5_family(lambda: &CycNumber, mu: &CycNumber) -> Result<Self> {
        let x = MultiPoly::var("x");
        let f4 = x.pow(4).scale(lambda);
        let f6 = &x.pow(6).scale(mu) + &(&x * &MultiPoly::var("y").pow(5));
        Self::dp1(&f4, &f6)
    }
}

fn check_binary(f: &MultiPoly, d: u32) -> Result<()> {
    if f.is_zero() {
        return Ok(());
    }
    if f.vars().iter().any(|v| v != "x" && v != "y") || !f.is_homogeneous() || f.total_degree() != d {
        return Err(Error::Domain(format!("{f} is not a binary form of degree {d} in x, y")));
    }
    Ok(())
}

/// `(w, x, y, z) -> (s_i * p_{perm(i)})_i`.
#[derive(Clone, PartialEq, Eq)]
pub struct MonomialAut {
    pub perm: [usize; 4],
    pub scales: [CycNumber; 4],
}

impl MonomialAut {
    pub fn new(perm: [usize; 4], scales: [CycNumber; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &p in &perm {
            if p > 3 || seen[p] {
                return Err(Error::Domain("not a permutation".into()));
            }
            seen[p] = true;
        }
        if scales.iter().any(|s| s.is_zero()) {
            return Err(Error::Domain("zero scale".into()));
        }
        Ok(MonomialAut { perm, scales })
    }

    pub fn diagonal(scales: [CycNumber; 4]) -> Self {
        Self::new([0, 1, 2, 3], scales).unwrap()
    }

    pub fn permutation(perm: [usize; 4]) -> Result<Self> {
        Self::new(perm, [(); 4].map(|_| CycNumber::one()))
    }

    pub fn identity() -> Self {
        Self::permutation([0, 1, 2, 3]).unwrap()
    }

    /// `self o b`.
    pub fn compose(&self, b: &MonomialAut) -> MonomialAut {
        let perm = [0, 1, 2, 3].map(|i| b.perm[self.perm[i]]);
        let scales = [0, 1, 2, 3].map(|i| &self.scales[i] * &b.scales[self.perm[i]]);
        MonomialAut { perm, scales }
    }

    pub fn inverse(&self) -> MonomialAut {
        let mut perm = [0; 4];
        let mut scales = [(); 4].map(|_| CycNumber::one());
        for i in 0..4 {
            // image_i = s_i p_{pi(i)} so p_{pi(i)} = image_i / s_i
            perm[self.perm[i]] = i;
            scales[self.perm[i]] = self.scales[i].inv().unwrap();
        }
        MonomialAut { perm, scales }
    }

    pub fn power(&self, k: u64) -> MonomialAut {
        let mut acc = Self::identity();
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn check_weights(&self, weights: &[u32; 4]) -> Result<()> {
        for i in 0..4 {
            if weights[self.perm[i]] != weights[i] {
                return Err(Error::Domain(format!(
                    "coordinate {} of weight {} is sent to {} of weight {}",
                    COORDS[self.perm[i]], weights[self.perm[i]], COORDS[i], weights[i]
                )));
            }
        }
        Ok(())
    }

    /// Identity of weighted projective space: scales `(l^a_i)` for one `l`.
    pub fn is_identity_weighted(&self, weights: &[u32; 4]) -> bool {
        if self.perm != [0, 1, 2, 3] {
            return false;
        }
        let Some(k) = weights.iter().position(|&a| a == 1) else {
            // no weight-one coordinate: search l among roots
            return roots_for_identity(&self.scales, weights);
        };
        let l = &self.scales[k];
        (0..4).all(|i| self.scales[i] == l.pow(weights[i] as i64))
    }

    /// Substitute into a polynomial in `w, x, y, z`.
    pub fn apply(&self, f: &MultiPoly) -> MultiPoly {
        let sub: Vec<(&str, MultiPoly)> = (0..4)
            .map(|i| (COORDS[i], MultiPoly::var(COORDS[self.perm[i]]).scale(&self.scales[i])))
            .collect();
        f.substitute(&sub)
    }

    pub fn eval(&self, p: &[CycNumber; 4]) -> [CycNumber; 4] {
        [0, 1, 2, 3].map(|i| &self.scales[i] * &p[self.perm[i]])
    }
}

fn roots_for_identity(scales: &[CycNumber; 4], weights: &[u32; 4]) -> bool {
    let Some(cands) = nth_roots(&scales[0], weights[0]) else { return false };
    cands
        .iter()
        .any(|l| (0..4).all(|i| scales[i] == l.pow(weights[i] as i64)))
}

impl fmt::Display for MonomialAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..4)
            .map(|i| {
                let v = COORDS[self.perm[i]];
                let s = &self.scales[i];
                if s.is_one() {
                    v.to_string()
                } else if (-s).is_one() {
                    format!("-{v}")
                } else if s.is_compound() {
                    format!("({s})*{v}")
                } else {
                    format!("{s}*{v}")
                }
            })
            .collect();
        write!(f, "(w:x:y:z) -> ({})", parts.join(" : "))
    }
}

impl fmt::Debug for MonomialAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for MonomialAut {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `Some(lambda)` when `aut^* F = lambda F`, `None` otherwise.
pub fn preserves(aut: &MonomialAut, s: &WeightedHypersurface) -> Result<Option<CycNumber>> {
    aut.check_weights(&s.weights)?;
    let g = aut.apply(&s.equation);
    let (m, c) = s.equation.term_list().swap_remove(0);
    let Some((_, lead)) = g.term_list().into_iter().find(|(n, _)| *n == m) else {
        return Ok(None);
    };
    let lambda = &lead / &c;
    if g == s.equation.scale(&lambda) {
        Ok(Some(lambda))
    } else {
        Ok(None)
    }
}

pub fn aut_order(aut: &MonomialAut, s: &WeightedHypersurface) -> Result<u64> {
    aut_order_capped(aut, s, 10_000)
}

pub fn aut_order_capped(aut: &MonomialAut, s: &WeightedHypersurface, cap: u64) -> Result<u64> {
    aut.check_weights(&s.weights)?;
    let mut h = aut.clone();
    for k in 1..=cap {
        if h.is_identity_weighted(&s.weights) {
            return Ok(k);
        }
        h = aut.compose(&h);
    }
    Err(Error::CapExceeded(format!("order above {cap}")))
}

/// One piece of the fixed locus.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixedComponent {
    Point {
        coords: Vec<CycNumber>,
    },
    Points {
        count: usize,
        linear_equations: Vec<MultiPoly>,
    },
    Curve {
        linear_equations: Vec<MultiPoly>,
        equation: MultiPoly,
        parameter_weights: Vec<u32>,
        genus: Option<u32>,
        j_invariant: Option<CycNumber>,
    },
    /// A linear space contained in the surface.
    Linear {
        linear_equations: Vec<MultiPoly>,
        dimension: usize,
    },
    FullSurface,
}

impl FixedComponent {
    pub fn is_curve(&self) -> bool {
        matches!(self, FixedComponent::Curve { .. })
    }
}

fn cycles(perm: &[usize; 4]) -> Vec<Vec<usize>> {
    let mut seen = [false; 4];
    let mut out = Vec::new();
    for s in 0..4 {
        if seen[s] {
            continue;
        }
        let mut c = vec![];
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            c.push(i);
            i = perm[i];
        }
        out.push(c);
    }
    out
}

// basis of {p : s_i p_{pi(i)} = l^{a_i} p_i}, one weight block at a time
fn eigenspace(aut: &MonomialAut, weights: &[u32; 4], l: &CycNumber) -> Vec<(u32, [CycNumber; 4])> {
    let mut out = Vec::new();
    let mut ws: Vec<u32> = weights.to_vec();
    ws.sort();
    ws.dedup();
    for a in ws {
        let idx: Vec<usize> = (0..4).filter(|&i| weights[i] == a).collect();
        let la = l.pow(a as i64);
        let rows: Vec<Vec<CycNumber>> = idx
            .iter()
            .map(|&i| {
                idx.iter()
                    .map(|&j| {
                        let mut c = CycNumber::zero();
                        if aut.perm[i] == j {
                            c = &c + &aut.scales[i];
                        }
                        if i == j {
                            c = &c - &la;
                        }
                        c
                    })
                    .collect()
            })
            .collect();
        for v in nullspace(&rows, idx.len()) {
            let mut full = [(); 4].map(|_| CycNumber::zero());
            for (k, &i) in idx.iter().enumerate() {
                full[i] = v[k].clone();
            }
            out.push((a, full));
        }
    }
    out
}

fn span_key(basis: &[(u32, [CycNumber; 4])]) -> Vec<Vec<CycNumber>> {
    let mut m: Vec<Vec<CycNumber>> = basis.iter().map(|(_, v)| v.to_vec()).collect();
    let piv = rref(&mut m);
    m.truncate(piv.len());
    m
}

fn contained(a: &[Vec<CycNumber>], b: &[Vec<CycNumber>]) -> bool {
    // rows of a lie in the span of b
    let mut m: Vec<Vec<CycNumber>> = b.to_vec();
    let r = b.len();
    m.extend(a.iter().cloned());
    rref(&mut m).len() == r
}

fn linear_equations(basis: &[Vec<CycNumber>]) -> Vec<MultiPoly> {
    let ann = nullspace(basis, 4);
    ann.into_iter()
        .map(|v| {
            let mut p = MultiPoly::zero();
            for i in 0..4 {
                p = &p + &MultiPoly::var(COORDS[i]).scale(&v[i]);
            }
            p.monic()
        })
        .collect()
}

/// Fixed locus: for each eigenvalue pattern, the eigenspace intersected
/// with the surface.
pub fn fixed_locus(aut: &MonomialAut, s: &WeightedHypersurface) -> Result<Vec<FixedComponent>> {
    aut.check_weights(&s.weights)?;
    if aut.is_identity_weighted(&s.weights) {
        return Ok(vec![FixedComponent::FullSurface]);
    }
    let mut lambdas: Vec<CycNumber> = Vec::new();
    for c in cycles(&aut.perm) {
        let a = s.weights[c[0]];
        let mut prod = CycNumber::one();
        for &i in &c {
            prod = &prod * &aut.scales[i];
        }
        let roots = nth_roots(&prod, a * c.len() as u32)
            .ok_or_else(|| Error::Unsupported("scales outside roots of unity".into()))?;
        for r in roots {
            if !lambdas.contains(&r) {
                lambdas.push(r);
            }
        }
    }
    let mut spaces: Vec<(Vec<Vec<CycNumber>>, Vec<(u32, [CycNumber; 4])>)> = Vec::new();
    for l in &lambdas {
        let basis = eigenspace(aut, &s.weights, l);
        if basis.is_empty() {
            continue;
        }
        let key = span_key(&basis);
        if spaces.iter().any(|(k, _)| *k == key) {
            continue;
        }
        spaces.push((key, basis));
    }
    // drop spaces inside bigger ones
    let keep: Vec<usize> = (0..spaces.len())
        .filter(|&i| {
            !(0..spaces.len()).any(|j| {
                j != i && spaces[j].0.len() > spaces[i].0.len() && contained(&spaces[i].0, &spaces[j].0)
            })
        })
        .collect();
    let mut out = Vec::new();
    for i in keep {
        let (key, basis) = &spaces[i];
        if let Some(c) = restrict(s, key, basis)? {
            out.push(c);
        }
    }
    Ok(out)
}

fn param_names(basis: &[(u32, [CycNumber; 4])]) -> Vec<String> {
    basis
        .iter()
        .enumerate()
        .map(|(j, (_, v))| {
            let nz: Vec<usize> = (0..4).filter(|&i| !v[i].is_zero()).collect();
            if nz.len() == 1 && v[nz[0]].is_one() {
                COORDS[nz[0]].to_string()
            } else {
                format!("t{j}")
            }
        })
        .collect()
}

fn restrict(
    s: &WeightedHypersurface,
    key: &[Vec<CycNumber>],
    basis: &[(u32, [CycNumber; 4])],
) -> Result<Option<FixedComponent>> {
    let k = basis.len();
    if k == 1 {
        let p = &basis[0].1;
        let pt: Vec<(&str, CycNumber)> = COORDS.iter().copied().zip(p.iter().cloned()).collect();
        if s.equation.eval(&pt)?.is_zero() {
            return Ok(Some(FixedComponent::Point { coords: p.to_vec() }));
        }
        return Ok(None);
    }
    let names = param_names(basis);
    let sub: Vec<(&str, MultiPoly)> = (0..4)
        .map(|i| {
            let mut img = MultiPoly::zero();
            for (j, (_, v)) in basis.iter().enumerate() {
                img = &img + &MultiPoly::var(&names[j]).scale(&v[i]);
            }
            (COORDS[i], img)
        })
        .collect();
    let f = s.equation.substitute(&sub);
    let eqs = linear_equations(key);
    if f.is_zero() {
        return Ok(Some(FixedComponent::Linear {
            linear_equations: eqs,
            dimension: k - 1,
        }));
    }
    let weights: Vec<u32> = basis.iter().map(|(a, _)| *a).collect();
    match k {
        2 => {
            let count = weighted_binary_zeros(&f, &names, &weights);
            if count == 0 {
                return Ok(None);
            }
            Ok(Some(FixedComponent::Points {
                count,
                linear_equations: eqs,
            }))
        }
        3 => {
            let (genus, j) = curve_invariants(&f, &names, &weights);
            Ok(Some(FixedComponent::Curve {
                linear_equations: eqs,
                equation: f.monic(),
                parameter_weights: weights,
                genus,
                j_invariant: j,
            }))
        }
        _ => Ok(Some(FixedComponent::FullSurface)),
    }
}

// number of points of P(a, b) on a weighted binary form
fn weighted_binary_zeros(f: &MultiPoly, names: &[String], weights: &[u32]) -> usize {
    let (t1, t2) = (names[0].as_str(), names[1].as_str());
    let (a, b) = (weights[0], weights[1]);
    let mut count = 0;
    let at_inf = f.substitute(&[(t2, MultiPoly::zero()), (t1, MultiPoly::one())]);
    if at_inf.is_zero() {
        count += 1;
    }
    let u = f.substitute(&[(t2, MultiPoly::one())]).to_unipoly(t1).unwrap();
    let sq = u.squarefree_part();
    let mut deg = sq.degree().max(0) as usize;
    if !sq.is_zero() && sq.coeff(0).is_zero() {
        count += 1;
        deg -= 1;
    }
    let orbit = (b / num_integer::gcd(a, b)) as usize;
    count + deg / orbit
}

fn curve_invariants(f: &MultiPoly, names: &[String], weights: &[u32]) -> (Option<u32>, Option<CycNumber>) {
    let tmp = ["q0", "q1", "q2"];
    let to_tmp: Vec<(&str, &str)> = names.iter().map(|n| n.as_str()).zip(tmp).collect();
    let g = f.rename(&to_tmp);
    if weights.iter().all(|&a| a == 1) {
        let h = g.rename(&[("q0", "x"), ("q1", "y"), ("q2", "z")]);
        let genus = plane_curve_genus(&h);
        let j = if h.total_degree() == 3 && genus == Some(1) { plane_cubic_j(&h) } else { None };
        return (genus, j);
    }
    // a parameter of weight d/2 appearing as c t^2 + G(others)
    let total = weighted_total(&g, &tmp, weights);
    for i in 0..3 {
        if 2 * weights[i] != total || g.degree_in(tmp[i]) != 2 {
            continue;
        }
        let cs = g.coeffs_in(tmp[i]);
        if cs.len() != 3 || !cs[1].is_zero() || !cs[2].is_constant() {
            continue;
        }
        let rest: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let (wa, wb) = (weights[rest[0]], weights[rest[1]]);
        let (va, vb) = (tmp[rest[0]], tmp[rest[1]]);
        let gpart = &cs[0];
        if wa == 1 && wb == 1 {
            // w^2 = G(x, y): branch points are the odd roots of G
            let u = gpart.substitute(&[(vb, MultiPoly::one())]).to_unipoly(va).unwrap();
            let d = gpart.degree_in_group(&[va, vb]);
            let mut branch = u.odd_part().degree().max(0) as u32;
            if (d - u.degree().max(0) as u32) % 2 == 1 {
                branch += 1;
            }
            if branch < 2 {
                return (None, None);
            }
            return (Some(branch / 2 - 1), None);
        }
        let (lo, hi) = if wa == 1 { (va, vb) } else { (vb, va) };
        let whi = weights[tmp.iter().position(|t| *t == hi).unwrap()];
        if (wa == 1 || wb == 1) && whi == 2 && total == 6 && gpart.degree_in(hi) == 3 {
            // w^2 + G(x, z) with G cubic in z: dehomogenize x = 1
            let c = gpart.substitute(&[(lo, MultiPoly::one())]).to_unipoly(hi).unwrap();
            let sgn = -&cs[2].constant_value().unwrap().inv().unwrap();
            let c = c.scale(&sgn);
            let j = if c.coeff(3).is_one() && c.coeff(2).is_zero() {
                dp1_trace_to_weierstrass(&c.coeff(1), &c.coeff(0)).ok().map(|e| j_invariant(&e))
            } else {
                cubic_poly_j(&c.coeff(3), &c.coeff(2), &c.coeff(1), &c.coeff(0))
            };
            return (j.as_ref().map(|_| 1), j);
        }
    }
    (None, None)
}

fn weighted_total(g: &MultiPoly, names: &[&str], weights: &[u32]) -> u32 {
    g.term_list()
        .first()
        .map(|(pw, _)| {
            pw.iter()
                .map(|(v, e)| weights[names.iter().position(|n| n == v).unwrap()] * e)
                .sum()
        })
        .unwrap_or(0)
}

/// Weierstrass data `(a, b)` of `y^2 z - x^3 - a x z^2 - b z^3` up to scale.
pub fn weierstrass_form(f: &MultiPoly) -> Option<(CycNumber, CycNumber)> {
    let mut y2z = None;
    let mut x3 = None;
    let mut xz2 = CycNumber::zero();
    let mut z3 = CycNumber::zero();
    for (pw, c) in f.term_list() {
        let key: Vec<(&str, u32)> = pw.iter().map(|(v, e)| (v.as_str(), *e)).collect();
        match key.as_slice() {
            [("y", 2), ("z", 1)] => y2z = Some(c),
            [("x", 3)] => x3 = Some(c),
            [("x", 1), ("z", 2)] => xz2 = c,
            [("z", 3)] => z3 = c,
            _ => return None,
        }
    }
    let (l, x3) = (y2z?, x3?);
    if &x3 + &l != CycNumber::zero() {
        return None;
    }
    let inv = (-&l).inv().unwrap();
    Some((&xz2 * &inv, &z3 * &inv))
}

/// The plane cubic `F = 0` (hence `w^3 = F`) is smooth.
pub fn smooth_cubic_surface(f: &MultiPoly) -> Result<bool> {
    if !f.is_homogeneous() || f.total_degree() != 3 || f.vars().iter().any(|v| !["x", "y", "z"].contains(&v.as_str())) {
        return Err(Error::Domain("F must be a ternary cubic form in x, y, z".into()));
    }
    if let Some((a, b)) = weierstrass_form(f) {
        let d = &(&CycNumber::from_int(4) * &a.pow(3)) + &(&CycNumber::from_int(27) * &b.pow(2));
        return Ok(!d.is_zero());
    }
    Ok(!has_common_zero_p2(&[f.derivative("x"), f.derivative("y"), f.derivative("z")]))
}

/// Jacobian criterion for `w^2 = z^3 + F4 z + F6` in `P(3, 1, 1, 2)`.
pub fn smooth_dp1(f4: &MultiPoly, f6: &MultiPoly) -> Result<bool> {
    if f4.is_zero() && f6.is_zero() {
        return Err(Error::Domain("F4 and F6 are both zero".into()));
    }
    check_binary(f4, 4)?;
    check_binary(f6, 6)?;
    // w = 0 on the singular locus; the remaining partials
    let z = MultiPoly::var("z");
    let p = &z.pow(2).scale(&CycNumber::from_int(3)) + f4;
    let q = &(&f4.derivative("x") * &z) + &f6.derivative("x");
    let r = &(&f4.derivative("y") * &z) + &f6.derivative("y");
    let sys = [p, q, r];
    let chart: Vec<MultiPoly> = sys.iter().map(|g| g.substitute(&[("x", MultiPoly::one())])).collect();
    if has_common_zero_affine(&chart, "y", "z") {
        return Ok(false);
    }
    let mut g = UniPoly::zero();
    for e in &sys {
        let u = e
            .substitute(&[("x", MultiPoly::zero()), ("y", MultiPoly::one())])
            .to_unipoly("z")
            .unwrap();
        g = g.gcd(&u);
    }
    Ok(!(g.is_zero() || g.degree() > 0))
}

/// Multiple roots of `F6` are not roots of `F4`.
pub fn dp1_necessary_condition(f4: &MultiPoly, f6: &MultiPoly) -> bool {
    if f6.is_zero() {
        return f4.is_zero() || f4.squarefree_factors().iter().all(|(_, k)| *k == 1);
    }
    !has_common_zero_binary(&[f6.derivative("x"), f6.derivative("y"), f4.clone()])
}

fn has_common_zero_binary(fs: &[MultiPoly]) -> bool {
    let mut g = UniPoly::zero();
    for f in fs {
        g = g.gcd(&f.substitute(&[("y", MultiPoly::one())]).to_unipoly("x").unwrap());
    }
    if g.is_zero() || g.degree() > 0 {
        return true;
    }
    fs.iter().all(|f| {
        f.eval(&[("x", CycNumber::one()), ("y", CycNumber::zero())]).unwrap().is_zero()
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AutGroupReport {
    pub generators: Vec<MonomialAut>,
    pub structure: Vec<u64>,
    pub order: u64,
}

/// All `(w, x, y, z) -> (l_w w, x, l_y y, l_z z)` preserving
/// `w^2 = z^3 + F4 z + F6`.
pub fn dp1_diagonal_auts(f4: &MultiPoly, f6: &MultiPoly) -> Result<AutGroupReport> {
    if !smooth_dp1(f4, f6)? {
        return Err(Error::Domain("surface is singular".into()));
    }
    // exponents (a, b, d) of (l_y, l_z, l_w) in Q/Z
    let mut rows: Vec<Vec<i64>> = vec![vec![0, -3, 2]];
    for (pw, _) in f6.term_list() {
        let j = pw.iter().find(|(v, _)| v == "y").map(|(_, e)| *e as i64).unwrap_or(0);
        rows.push(vec![j, -3, 0]);
    }
    for (pw, _) in f4.term_list() {
        let j = pw.iter().find(|(v, _)| v == "y").map(|(_, e)| *e as i64).unwrap_or(0);
        rows.push(vec![j, -2, 0]);
    }
    let inv = smith_invariants(&rows);
    if inv.len() < 3 {
        return Err(Error::Unsupported("infinite diagonal automorphism group".into()));
    }
    let structure: Vec<u64> = inv.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect();
    let order: u64 = structure.iter().product();
    let e = *inv.last().unwrap();
    let mut sols: Vec<[i64; 3]> = Vec::new();
    for a in 0..e {
        for b in 0..e {
            for d in 0..e {
                if rows.iter().all(|r| (r[0] * a + r[1] * b + r[2] * d).rem_euclid(e) == 0) {
                    sols.push([a, b, d]);
                }
            }
        }
    }
    if sols.len() as u64 != order {
        return Err(Error::Verification("solution count disagrees with invariant factors".into()));
    }
    let ord = |s: &[i64; 3]| {
        let g = num_integer::gcd(num_integer::gcd(s[0], s[1]), num_integer::gcd(s[2], e));
        e / g
    };
    sols.sort_by_key(|s| (std::cmp::Reverse(ord(s)), *s));
    let mut gens: Vec<[i64; 3]> = Vec::new();
    let mut group: Vec<[i64; 3]> = vec![[0, 0, 0]];
    for s in &sols {
        if group.len() as u64 == order {
            break;
        }
        if group.contains(s) {
            continue;
        }
        gens.push(*s);
        // closure
        let mut frontier = group.clone();
        while let Some(g) = frontier.pop() {
            for h in &gens {
                let n = [0, 1, 2].map(|k| (g[k] + h[k]).rem_euclid(e));
                if !group.contains(&n) {
                    group.push(n);
                    frontier.push(n);
                }
            }
        }
    }
    let root = |k: i64| CycNumber::root_of_unity(e as u32, k);
    let generators = gens
        .iter()
        .map(|g| MonomialAut::diagonal([root(g[2]), CycNumber::one(), root(g[0]), root(g[1])]))
        .collect();
    Ok(AutGroupReport { generators, structure, order })
}

/// The subgroup fixing the fibration: `(-w, x, y, zeta_3 z)` when `F4 = 0`,
/// the Bertini involution otherwise.
pub fn gs_subgroup(f4: &MultiPoly) -> AutGroupReport {
    let m1 = -CycNumber::one();
    let one = CycNumber::one;
    if f4.is_zero() {
        AutGroupReport {
            generators: vec![MonomialAut::diagonal([m1, one(), one(), CycNumber::root_of_unity(3, 1)])],
            structure: vec![6],
            order: 6,
        }
    } else {
        AutGroupReport {
            generators: vec![bertini()],
            structure: vec![2],
            order: 2,
        }
    }
}

pub fn bertini() -> MonomialAut {
    let one = CycNumber::one;
    MonomialAut::diagonal([-CycNumber::one(), one(), one(), one()])
}

/// `(w : zeta_3^i y : z : x)`.
pub fn rho(i: i64) -> MonomialAut {
    let one = CycNumber::one;
    MonomialAut::new([0, 2, 3, 1], [one(), CycNumber::root_of_unity(3, i), one(), one()]).unwrap()
}

/// `(w : x : zeta_5 y : zeta_3 z)`.
pub fn theta() -> MonomialAut {
    let one = CycNumber::one;
    MonomialAut::diagonal([one(), one(), CycNumber::root_of_unity(5, 1), CycNumber::root_of_unity(3, 1)])
}

/// Whether two diagonal scale tuples agree as multisets after one
/// overall scalar.
pub fn scalar_equivalent(a: &[CycNumber; 4], b: &[CycNumber; 4]) -> bool {
    let mut sb = b.to_vec();
    sb.sort();
    b.iter().any(|t| {
        let c = t / &a[0];
        let mut sa: Vec<CycNumber> = a.iter().map(|x| x * &c).collect();
        sa.sort();
        sa == sb
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RhoClass {
    Rho1,
    Rho2,
}

/// Conjugate an order-9 automorphism of the Fermat cubic to `rho(1)` or
/// `rho(2)`; returns the class and `c` with `c g c^-1 = rho`.
pub fn fermat_order9_normalize(g: &MonomialAut) -> Result<(RhoClass, MonomialAut)> {
    let sf = WeightedHypersurface::fermat_cubic();
    if preserves(g, &sf)?.is_none() {
        return Err(Error::Domain("map does not preserve the Fermat cubic".into()));
    }
    let ord = aut_order(g, &sf)?;
    let cyc = cycles(&g.perm);
    let three_cycle = cyc.iter().any(|c| c.len() == 3);
    if !three_cycle {
        return Err(Error::Domain("the permutation part is not a 3-cycle".into()));
    }
    if ord == 3 {
        return Err(Error::Domain("order 3: abc = 1".into()));
    }
    if ord != 9 {
        return Err(Error::Domain(format!("order {ord}, expected 9")));
    }
    let target = [0usize, 2, 3, 1];
    let mut perms = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut s = p;
                    s.sort();
                    if s == [0, 1, 2, 3] {
                        perms.push(p);
                    }
                }
            }
        }
    }
    for p in perms {
        let tau = MonomialAut::permutation(p)?;
        let h = tau.compose(g).compose(&tau.inverse());
        if h.perm != target {
            continue;
        }
        // divide by the scale of w
        let s0 = h.scales[0].inv()?;
        let s = h.scales.clone().map(|c| &c * &s0);
        let (a, b, c) = (s[1].clone(), s[2].clone(), s[3].clone());
        let one = CycNumber::one;
        let dmat = MonomialAut::diagonal([one(), one(), (&b * &c).inv()?, c.inv()?]);
        let conj = dmat.compose(&tau);
        let res = conj.compose(g).compose(&conj.inverse());
        let abc = &(&a * &b) * &c;
        let class = if abc == CycNumber::root_of_unity(3, 1) {
            RhoClass::Rho1
        } else if abc == CycNumber::root_of_unity(3, 2) {
            RhoClass::Rho2
        } else {
            return Err(Error::Domain("order 3: abc = 1".into()));
        };
        let expect = rho(if class == RhoClass::Rho1 { 1 } else { 2 });
        let diff = res.compose(&expect.inverse());
        if !diff.is_identity_weighted(&sf.weights) {
            return Err(Error::Verification("conjugation check failed".into()));
        }
        if preserves(&conj, &sf)?.is_none() {
            return Err(Error::Verification("conjugator is not an automorphism".into()));
        }
        return Ok((class, conj));
    }
    Err(Error::Domain("permutation part is not conjugate to a 3-cycle".into()))
}
