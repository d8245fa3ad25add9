//! Birational self-maps of `P^2` and `P^1 x P^1` given by coordinate
//! polynomials, with composition, order, fixed curves and the projection
//! of an automorphism of `P^1 x P^1` to a linear map of `P^2`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polys::MultiPoly;
use crate::scalars::{self, CycNumber};

pub const DEFAULT_ORDER_CAP: u64 = 64;
pub const DEFAULT_DEGREE_BOUND: u32 = 512;

const P2_VARS: [&str; 3] = ["x", "y", "z"];
const XS: [&str; 2] = ["x1", "x2"];
const YS: [&str; 2] = ["y1", "y2"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrderResult {
    Finite(u64),
    ExceedsCap,
}

impl fmt::Display for OrderResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderResult::Finite(n) => write!(f, "{n}"),
            OrderResult::ExceedsCap => write!(f, "exceeds cap"),
        }
    }
}

/// Divide a tuple by its gcd and scale so the first nonzero entry has
/// graded-lex leading coefficient 1.
fn clean(cs: &mut [MultiPoly]) {
    let mut g = MultiPoly::zero();
    for c in cs.iter() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if !g.is_constant() {
        for c in cs.iter_mut() {
            *c = c.div_exact(&g).unwrap();
        }
    }
    if let Some(first) = cs.iter().find(|c| !c.is_zero()) {
        let lc = first.leading_coeff();
        if !lc.is_one() {
            let inv = lc.inv().unwrap();
            for c in cs.iter_mut() {
                *c = c.scale(&inv);
            }
        }
    }
}

fn check_vars(p: &MultiPoly, allowed: &[&str]) -> Result<()> {
    for v in p.vars() {
        if !allowed.contains(&v.as_str()) {
            return Err(Error::Domain(format!("unexpected variable {v}")));
        }
    }
    Ok(())
}

/// `(x:y:z) -> (f1:f2:f3)`.
#[derive(Clone, PartialEq, Eq)]
pub struct BirMapP2 {
    c: [MultiPoly; 3],
}

impl BirMapP2 {
    pub fn new(components: [MultiPoly; 3]) -> Result<Self> {
        let mut c = components;
        if c.iter().all(|p| p.is_zero()) {
            return Err(Error::Domain("all components are zero".into()));
        }
        let mut d = None;
        for p in c.iter().filter(|p| !p.is_zero()) {
            check_vars(p, &P2_VARS)?;
            if !p.is_homogeneous() {
                return Err(Error::Domain(format!("component {p} is not homogeneous")));
            }
            match d {
                None => d = Some(p.total_degree()),
                Some(e) if e != p.total_degree() => {
                    return Err(Error::Domain("components have different degrees".into()))
                }
                _ => {}
            }
        }
        clean(&mut c);
        let m = BirMapP2 { c };
        if m.degree() == 0 {
            return Err(Error::Domain("constant map".into()));
        }
        if m.degree() == 1 && m.linear_matrix().map(|a| det3(&a).is_zero()).unwrap_or(true) {
            return Err(Error::Domain("singular linear map".into()));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        BirMapP2 {
            c: P2_VARS.map(MultiPoly::var),
        }
    }

    /// Linear map with matrix `a` acting on column vectors.
    pub fn linear(a: &[[CycNumber; 3]; 3]) -> Result<Self> {
        let c = [0, 1, 2].map(|i| {
            let mut p = MultiPoly::zero();
            for (j, v) in P2_VARS.iter().enumerate() {
                p = &p + &MultiPoly::var(v).scale(&a[i][j]);
            }
            p
        });
        Self::new(c)
    }

    pub fn diagonal(d: [CycNumber; 3]) -> Result<Self> {
        let z = CycNumber::zero();
        let [a, b, c] = d;
        Self::linear(&[
            [a, z.clone(), z.clone()],
            [z.clone(), b, z.clone()],
            [z.clone(), z, c],
        ])
    }

    pub fn components(&self) -> &[MultiPoly; 3] {
        &self.c
    }

    pub fn degree(&self) -> u32 {
        self.c.iter().filter(|p| !p.is_zero()).map(|p| p.total_degree()).next().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Coefficient matrix of a degree-one map.
    pub fn linear_matrix(&self) -> Option<[[CycNumber; 3]; 3]> {
        if self.degree() != 1 {
            return None;
        }
        Some([0, 1, 2].map(|i| {
            P2_VARS.map(|v| {
                self.c[i]
                    .derivative(v)
                    .constant_value()
                    .unwrap_or_default()
            })
        }))
    }

    /// `self o g`.
    pub fn compose(&self, g: &BirMapP2) -> Result<BirMapP2> {
        let sub: Vec<(&str, MultiPoly)> = P2_VARS
            .iter()
            .zip(g.c.iter())
            .map(|(v, p)| (*v, p.clone()))
            .collect();
        let mut c = self.c.clone().map(|p| p.substitute(&sub));
        if c.iter().all(|p| p.is_zero()) {
            return Err(Error::Domain("composition collapses".into()));
        }
        clean(&mut c);
        let m = BirMapP2 { c };
        if m.degree() == 0 {
            return Err(Error::Domain("composition collapses to a constant map".into()));
        }
        Ok(m)
    }

    pub fn power(&self, k: u64) -> Result<BirMapP2> {
        let mut acc = Self::identity();
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn order(&self, cap: u64, degree_bound: u32) -> OrderResult {
        let mut h = self.clone();
        for k in 1..=cap {
            if h.is_identity() {
                return OrderResult::Finite(k);
            }
            if h.degree() > degree_bound {
                return OrderResult::ExceedsCap;
            }
            h = match self.compose(&h) {
                Ok(m) => m,
                Err(_) => return OrderResult::ExceedsCap,
            };
        }
        OrderResult::ExceedsCap
    }

    /// Image of a point where the map is defined.
    pub fn eval(&self, p: &[CycNumber; 3]) -> Result<[CycNumber; 3]> {
        let pt: Vec<(&str, CycNumber)> = P2_VARS.iter().copied().zip(p.iter().cloned()).collect();
        let r0 = self.c[0].eval(&pt)?;
        let r1 = self.c[1].eval(&pt)?;
        let r2 = self.c[2].eval(&pt)?;
        if r0.is_zero() && r1.is_zero() && r2.is_zero() {
            return Err(Error::Domain("point of indeterminacy".into()));
        }
        Ok([r0, r1, r2])
    }

    pub fn fixed_curve(&self) -> Result<FixedCurveReport> {
        if self.is_identity() {
            return Err(Error::Domain("the identity fixes everything".into()));
        }
        let v = P2_VARS.map(MultiPoly::var);
        let mut g = MultiPoly::zero();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let m = &(&v[i] * &self.c[j]) - &(&v[j] * &self.c[i]);
            g = g.gcd(&m);
        }
        Ok(FixedCurveReport {
            components: split_factors(&g),
            residual: true,
        })
    }
}

fn det3(a: &[[CycNumber; 3]; 3]) -> CycNumber {
    let t = |i: usize, j: usize, k: usize| &(&a[0][i] * &a[1][j]) * &a[2][k];
    let pos = &(&t(0, 1, 2) + &t(1, 2, 0)) + &t(2, 0, 1);
    let neg = &(&t(2, 1, 0) + &t(0, 2, 1)) + &t(1, 0, 2);
    &pos - &neg
}

/// Split a polynomial into distinct factors with multiplicities: the
/// squarefree decomposition, with monomial factors pulled out and binary
/// forms split into linear factors when their roots are cyclotomic.
pub fn split_factors(p: &MultiPoly) -> Vec<(MultiPoly, u32)> {
    let mut out: Vec<(MultiPoly, u32)> = Vec::new();
    let mut push = |f: MultiPoly, k: u32| {
        let f = f.monic();
        if let Some(e) = out.iter_mut().find(|(g, _)| *g == f) {
            e.1 += k;
        } else {
            out.push((f, k));
        }
    };
    for (f, k) in p.squarefree_factors() {
        let mut f = f;
        for v in f.vars().to_vec() {
            let e = f.min_degree_in(&v);
            if e > 0 {
                push(MultiPoly::var(&v), e * k);
                f = f.div_exact(&MultiPoly::var(&v).pow(e)).unwrap();
            }
        }
        if f.is_constant() {
            continue;
        }
        let vars = f.vars().to_vec();
        if vars.len() == 2 && f.is_homogeneous() {
            let (a, b) = (vars[0].as_str(), vars[1].as_str());
            let u = f.substitute(&[(b, MultiPoly::one())]).to_unipoly(a).unwrap();
            let (roots, _) = u.cyclotomic_roots();
            let mut f = f.clone();
            for r in roots {
                let lin = &MultiPoly::var(a) - &MultiPoly::var(b).scale(&r);
                push(lin.clone(), k);
                f = f.div_exact(&lin).unwrap();
            }
            if !f.is_constant() {
                push(f, k);
            }
            continue;
        }
        if vars.len() == 1 {
            let u = f.to_unipoly(&vars[0]).unwrap();
            let (roots, _) = u.cyclotomic_roots();
            let mut f = f.clone();
            for r in roots {
                let lin = &MultiPoly::var(&vars[0]) - &MultiPoly::constant(r);
                push(lin.clone(), k);
                f = f.div_exact(&lin).unwrap();
            }
            if !f.is_constant() {
                push(f, k);
            }
            continue;
        }
        push(f, k);
    }
    out.sort_by(|a, b| a.0.total_degree().cmp(&b.0.total_degree()).then_with(|| a.0.to_string().cmp(&b.0.to_string())));
    out
}

impl fmt::Display for BirMapP2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(x:y:z) -> ({} : {} : {})", self.c[0], self.c[1], self.c[2])
    }
}

impl fmt::Debug for BirMapP2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Fixed-curve components with multiplicities. `residual` marks that
/// isolated fixed points are not enumerated.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedCurveReport {
    pub components: Vec<(MultiPoly, u32)>,
    pub residual: bool,
}

/// `((x1:x2),(y1:y2)) -> ((f1:f2),(g1:g2))`.
#[derive(Clone, PartialEq, Eq)]
pub struct BirMapP1P1 {
    x: [MultiPoly; 2],
    y: [MultiPoly; 2],
}

fn bidegree(p: &MultiPoly) -> Option<(u32, u32)> {
    if p.is_zero() {
        return None;
    }
    if !p.is_homogeneous_in(&XS) || !p.is_homogeneous_in(&YS) {
        return None;
    }
    Some((p.degree_in_group(&XS), p.degree_in_group(&YS)))
}

fn pair_bidegree(pair: &[MultiPoly; 2]) -> Result<(u32, u32)> {
    let mut d = None;
    for p in pair.iter().filter(|p| !p.is_zero()) {
        check_vars(p, &["x1", "x2", "y1", "y2"])?;
        let b = bidegree(p).ok_or_else(|| Error::Domain(format!("{p} is not bihomogeneous")))?;
        match d {
            None => d = Some(b),
            Some(e) if e != b => return Err(Error::Domain("pair has unequal bidegrees".into())),
            _ => {}
        }
    }
    d.ok_or_else(|| Error::Domain("pair is identically zero".into()))
}

/// Eigen-decomposition data of a 2x2 matrix acting on `(a:b)`.
pub type Mat2 = [[CycNumber; 2]; 2];

impl BirMapP1P1 {
    pub fn new(x: [MultiPoly; 2], y: [MultiPoly; 2]) -> Result<Self> {
        let mut x = x;
        let mut y = y;
        pair_bidegree(&x)?;
        pair_bidegree(&y)?;
        clean(&mut x);
        clean(&mut y);
        let m = BirMapP1P1 { x, y };
        let (bx, by) = m.bidegrees();
        if bx == (0, 0) || by == (0, 0) {
            return Err(Error::Domain("a coordinate pair is constant".into()));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        BirMapP1P1 {
            x: XS.map(MultiPoly::var),
            y: YS.map(MultiPoly::var),
        }
    }

    /// Automorphism `(u, v) -> (A u, B v)`, or `(A v, B u)` when `swap`.
    pub fn from_matrices(a: &Mat2, b: &Mat2, swap: bool) -> Result<Self> {
        let (ax, bx) = if swap { (YS, XS) } else { (XS, YS) };
        let lin = |m: &Mat2, vs: [&str; 2], i: usize| {
            &MultiPoly::var(vs[0]).scale(&m[i][0]) + &MultiPoly::var(vs[1]).scale(&m[i][1])
        };
        Self::new([lin(a, ax, 0), lin(a, ax, 1)], [lin(b, bx, 0), lin(b, bx, 1)])
    }

    pub fn x_pair(&self) -> &[MultiPoly; 2] {
        &self.x
    }

    pub fn y_pair(&self) -> &[MultiPoly; 2] {
        &self.y
    }

    pub fn bidegrees(&self) -> ((u32, u32), (u32, u32)) {
        (pair_bidegree(&self.x).unwrap(), pair_bidegree(&self.y).unwrap())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// `Some(false)` for `(A u, B v)`, `Some(true)` for `(A v, B u)`.
    pub fn automorphism_kind(&self) -> Option<bool> {
        match self.bidegrees() {
            ((1, 0), (0, 1)) => Some(false),
            ((0, 1), (1, 0)) => Some(true),
            _ => None,
        }
    }

    pub fn is_automorphism(&self) -> bool {
        self.automorphism_kind().is_some()
    }

    /// The blocks `(A, B)` of an automorphism.
    pub fn matrices(&self) -> Option<(Mat2, Mat2, bool)> {
        let swap = self.automorphism_kind()?;
        let (ax, bx) = if swap { (YS, XS) } else { (XS, YS) };
        let m = |pair: &[MultiPoly; 2], vs: [&str; 2]| {
            [0, 1].map(|i| vs.map(|v| pair[i].derivative(v).constant_value().unwrap_or_default()))
        };
        Some((m(&self.x, ax), m(&self.y, bx), swap))
    }

    pub fn compose(&self, g: &BirMapP1P1) -> Result<BirMapP1P1> {
        let sub = [
            ("x1", g.x[0].clone()),
            ("x2", g.x[1].clone()),
            ("y1", g.y[0].clone()),
            ("y2", g.y[1].clone()),
        ];
        let mut x = self.x.clone().map(|p| p.substitute(&sub));
        let mut y = self.y.clone().map(|p| p.substitute(&sub));
        if x.iter().all(|p| p.is_zero()) || y.iter().all(|p| p.is_zero()) {
            return Err(Error::Domain("composition collapses".into()));
        }
        clean(&mut x);
        clean(&mut y);
        let m = BirMapP1P1 { x, y };
        let (bx, by) = m.bidegrees();
        if bx == (0, 0) || by == (0, 0) {
            return Err(Error::Domain("composition collapses to a constant pair".into()));
        }
        Ok(m)
    }

    pub fn power(&self, k: u64) -> Result<BirMapP1P1> {
        let mut acc = Self::identity();
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn degree(&self) -> u32 {
        let ((a, b), (c, d)) = self.bidegrees();
        a.max(b).max(c).max(d)
    }

    pub fn order(&self, cap: u64, degree_bound: u32) -> OrderResult {
        let mut h = self.clone();
        for k in 1..=cap {
            if h.is_identity() {
                return OrderResult::Finite(k);
            }
            if h.degree() > degree_bound {
                return OrderResult::ExceedsCap;
            }
            h = match self.compose(&h) {
                Ok(m) => m,
                Err(_) => return OrderResult::ExceedsCap,
            };
        }
        OrderResult::ExceedsCap
    }

    pub fn eval(&self, p: &[[CycNumber; 2]; 2]) -> Result<[[CycNumber; 2]; 2]> {
        let pt = [
            ("x1", p[0][0].clone()),
            ("x2", p[0][1].clone()),
            ("y1", p[1][0].clone()),
            ("y2", p[1][1].clone()),
        ];
        let a = [self.x[0].eval(&pt)?, self.x[1].eval(&pt)?];
        let b = [self.y[0].eval(&pt)?, self.y[1].eval(&pt)?];
        if a.iter().all(|c| c.is_zero()) || b.iter().all(|c| c.is_zero()) {
            return Err(Error::Domain("point of indeterminacy".into()));
        }
        Ok([a, b])
    }

    pub fn fixed_curve(&self) -> Result<FixedCurveReport> {
        if self.is_identity() {
            return Err(Error::Domain("the identity fixes everything".into()));
        }
        let mx = &(&MultiPoly::var("x1") * &self.x[1]) - &(&MultiPoly::var("x2") * &self.x[0]);
        let my = &(&MultiPoly::var("y1") * &self.y[1]) - &(&MultiPoly::var("y2") * &self.y[0]);
        let g = mx.gcd(&my);
        Ok(FixedCurveReport {
            components: split_factors(&g),
            residual: true,
        })
    }
}

impl fmt::Display for BirMapP1P1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "((x1:x2),(y1:y2)) -> (({} : {}),({} : {}))",
            self.x[0], self.x[1], self.y[0], self.y[1]
        )
    }
}

impl fmt::Debug for BirMapP1P1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn proportional(a: &[CycNumber; 2], b: &[CycNumber; 2]) -> bool {
    (&(&a[0] * &b[1]) - &(&a[1] * &b[0])).is_zero()
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [0, 1].map(|i| [0, 1].map(|j| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j])))
}

fn apply(a: &Mat2, v: &[CycNumber; 2]) -> [CycNumber; 2] {
    [0, 1].map(|i| &(&a[i][0] * &v[0]) + &(&a[i][1] * &v[1]))
}

fn normalize_point(v: [CycNumber; 2]) -> [CycNumber; 2] {
    if v[0].is_zero() {
        [CycNumber::zero(), CycNumber::one()]
    } else {
        let inv = v[0].inv().unwrap();
        [CycNumber::one(), &v[1] * &inv]
    }
}

// For finite projective order the eigenvalue ratio w is a root of unity
// with w + 2 + 1/w = tr^2/det; then l1 = tr/(1 + w), l2 = w l1.
fn eigenvalues_by_ratio(tr: &CycNumber, det: &CycNumber) -> Option<Vec<CycNumber>> {
    let one = CycNumber::one();
    if tr.is_zero() {
        let s = scalars::sqrt_cyc(&-det)?;
        return Some(vec![s.clone(), -s]);
    }
    let q = &(&(tr * tr) / det) - &CycNumber::from_int(2);
    // the order of w divides 2c, or is 3, 4 or 6
    let m = 12 * q.conductor() as i64;
    let w = &(0..m)
        .map(|e| CycNumber::root_of_unity(m as u32, e))
        .find(|w| (w + &w.inv().unwrap()) == q)?;
    let l1 = tr / &(&one + w);
    let l2 = &l1 * w;
    Some(if l1 == l2 { vec![l1] } else { vec![l1, l2] })
}

/// Projective eigenvectors of a 2x2 matrix, `(1:0)` first when present.
pub fn eigenvectors(a: &Mat2) -> Result<Vec<[CycNumber; 2]>> {
    let (one, zero) = (CycNumber::one(), CycNumber::zero());
    if a[0][1].is_zero() && a[1][0].is_zero() && a[0][0] == a[1][1] {
        return Ok(vec![[one.clone(), zero.clone()], [zero, one]]);
    }
    let tr = &a[0][0] + &a[1][1];
    let det = &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0]);
    let chi = crate::polys::UniPoly::new(vec![det.clone(), -&tr, one.clone()]);
    let (mut roots, rest) = chi.cyclotomic_roots();
    if rest.degree() > 0 {
        roots = eigenvalues_by_ratio(&tr, &det)
            .ok_or_else(|| Error::Unsupported("eigenvalues outside cyclotomic fields".into()))?;
    }
    let mut out = Vec::new();
    for l in roots {
        let r0 = [&a[0][0] - &l, a[0][1].clone()];
        let r1 = [a[1][0].clone(), &a[1][1] - &l];
        let v = if !(r0[0].is_zero() && r0[1].is_zero()) {
            [r0[1].clone(), -&r0[0]]
        } else {
            [r1[1].clone(), -&r1[0]]
        };
        let v = normalize_point(v);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out.sort_by(|p: &[CycNumber; 2], q: &[CycNumber; 2]| {
        let key = |v: &[CycNumber; 2]| (v[0].is_zero(), !v[1].is_zero(), v[1].clone());
        key(p).cmp(&key(q))
    });
    Ok(out)
}

/// A fixed point of an automorphism of `P^1 x P^1`.
pub fn find_fixed_point(f: &BirMapP1P1) -> Result<[[CycNumber; 2]; 2]> {
    let (a, b, swap) = f
        .matrices()
        .ok_or_else(|| Error::Domain("not an automorphism of P1 x P1".into()))?;
    if !swap {
        let u = eigenvectors(&a)?.remove(0);
        let v = eigenvectors(&b)?.remove(0);
        return Ok([u, v]);
    }
    // (u, v) -> (A v, B u) fixes (c, B c) for c fixed by A B
    let c = eigenvectors(&mat_mul(&a, &b))?.remove(0);
    let bc = normalize_point(apply(&b, &c));
    Ok([c, bc])
}

/// Conjugate an automorphism to a linear map of `P^2` through a fixed
/// point: move it to `((1:0),(1:0))`, then project by
/// `(x1 y2 : x2 y1 : x2 y2)`.
pub fn segre_project(f: &BirMapP1P1, p: &[[CycNumber; 2]; 2]) -> Result<BirMapP2> {
    let (a, b, swap) = f
        .matrices()
        .ok_or_else(|| Error::Domain("not an automorphism of P1 x P1".into()))?;
    let img = f.eval(p)?;
    if !proportional(&img[0], &p[0]) || !proportional(&img[1], &p[1]) {
        return Err(Error::Domain("point is not fixed".into()));
    }
    // M sends (1:0) to the point
    let frame = |v: &[CycNumber; 2]| -> Mat2 {
        if v[0].is_zero() {
            [[v[0].clone(), CycNumber::one()], [v[1].clone(), CycNumber::zero()]]
        } else {
            [[v[0].clone(), CycNumber::zero()], [v[1].clone(), CycNumber::one()]]
        }
    };
    let inv2 = |m: &Mat2| -> Mat2 {
        [
            [m[1][1].clone(), -&m[0][1]],
            [-&m[1][0], m[0][0].clone()],
        ]
    };
    let (mu, mv) = (frame(&p[0]), frame(&p[1]));
    // conjugated blocks: h = L^-1 f L with L = (mu, mv)
    let (ha, hb) = if swap {
        (mat_mul(&inv2(&mu), &mat_mul(&a, &mv)), mat_mul(&inv2(&mv), &mat_mul(&b, &mu)))
    } else {
        (mat_mul(&inv2(&mu), &mat_mul(&a, &mu)), mat_mul(&inv2(&mv), &mat_mul(&b, &mv)))
    };
    let h = BirMapP1P1::from_matrices(&ha, &hb, swap)?;
    let sub = [
        ("x1", MultiPoly::var("x")),
        ("x2", MultiPoly::var("z")),
        ("y1", MultiPoly::var("y")),
        ("y2", MultiPoly::var("z")),
    ];
    let hx = h.x.clone().map(|q| q.substitute(&sub));
    let hy = h.y.clone().map(|q| q.substitute(&sub));
    let m = BirMapP2::new([&hx[0] * &hy[1], &hx[1] * &hy[0], &hx[1] * &hy[1]])?;
    if m.degree() != 1 {
        return Err(Error::Verification(format!("projection has degree {}", m.degree())));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::expr::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    fn p2(a: &str, b: &str, c: &str) -> BirMapP2 {
        BirMapP2::new([p(a), p(b), p(c)]).unwrap()
    }

    fn z(n: u32, k: i64) -> CycNumber {
        CycNumber::root_of_unity(n, k)
    }

    #[test]
    fn quadratic_involution() {
        let s = p2("y*z", "x*z", "x*y");
        assert!(s.compose(&s).unwrap().is_identity());
        assert_eq!(s.order(64, 512), OrderResult::Finite(2));
        let fc = s.fixed_curve().unwrap();
        assert!(fc.components.is_empty());
        assert!(fc.residual);
        // the isolated fixed points are where the minors vanish
        let one = CycNumber::one();
        let img = s.eval(&[one.clone(), one.clone(), one.clone()]).unwrap();
        assert_eq!(img, [one.clone(), one.clone(), one]);
    }

    #[test]
    fn order_five_map() {
        let g = p2("x*(z - y)", "z*(x - y)", "x*z");
        assert!(g.power(5).unwrap().is_identity());
        assert!(!g.power(4).unwrap().is_identity());
        assert_eq!(g.order(64, 512), OrderResult::Finite(5));
    }

    #[test]
    fn linear_maps() {
        let d = BirMapP2::diagonal([CycNumber::one(), CycNumber::one(), z(7, 1)]).unwrap();
        assert_eq!(d.order(64, 512), OrderResult::Finite(7));
        let a = BirMapP2::diagonal([z(3, 1), CycNumber::one(), CycNumber::one()]).unwrap();
        let ab = a.compose(&d).unwrap();
        assert_eq!(ab.order(64, 512), OrderResult::Finite(21));
        assert_eq!(ab.linear_matrix().unwrap()[2][2], &z(7, 1) / &z(3, 1));
        assert!(BirMapP2::new([p("x"), p("x"), p("y")]).is_err());
        let f = BirMapP2::diagonal([CycNumber::one(), CycNumber::one(), -CycNumber::one()]).unwrap();
        let fc = f.fixed_curve().unwrap();
        assert_eq!(fc.components, vec![(p("z"), 1)]);
        assert!(BirMapP2::identity().fixed_curve().is_err());
        let inf = p2("x", "y + x", "z");
        assert_eq!(inf.order(10, 512), OrderResult::ExceedsCap);
    }

    #[test]
    fn normalization_and_collapse() {
        let m = p2("2*x*z", "2*y*z", "2*z^2");
        assert!(m.is_identity());
        assert!(BirMapP2::new([p("x"), p("x"), p("x")]).is_err());
        assert!(BirMapP2::new([p("x^2"), p("y"), p("z")]).is_err());
    }

    #[test]
    fn jonquieres_involution_fixed_curve() {
        // y -> prod(x - b) / (y prod(x - a)), here a = {0, 1}, b = {2, 3}
        let a = p("x1*(x1 - x2)");
        let b = p("(x1 - 2*x2)*(x1 - 3*x2)");
        let f = BirMapP1P1::new(
            [p("x1"), p("x2")],
            [&p("y2") * &b, &p("y1") * &a],
        )
        .unwrap();
        assert!(f.compose(&f).unwrap().is_identity());
        let fc = f.fixed_curve().unwrap();
        let expect = (&(&p("y1^2") * &a) - &(&p("y2^2") * &b)).monic();
        assert_eq!(fc.components, vec![(expect.clone(), 1)]);
        assert_eq!(crate::curves::p1p1_curve_genus(&expect), Some(1));
    }

    #[test]
    fn segre_examples() {
        let one = CycNumber::one();
        let zero = CycNumber::zero();
        let diag = |a: CycNumber| [[a, zero.clone()], [zero.clone(), one.clone()]];
        let f = BirMapP1P1::from_matrices(&diag(z(3, 1)), &diag(z(5, 1)), false).unwrap();
        assert_eq!(f.order(64, 512), OrderResult::Finite(15));
        let pt = [[zero.clone(), one.clone()], [zero.clone(), one.clone()]];
        let m = segre_project(&f, &pt).unwrap();
        assert_eq!(m.degree(), 1);
        assert_eq!(m.order(64, 512), OrderResult::Finite(15));
        let id = BirMapP1P1::identity();
        let fp = find_fixed_point(&id).unwrap();
        assert!(segre_project(&id, &fp).unwrap().is_identity());
        let sw = BirMapP1P1::from_matrices(&diag(one.clone()), &diag(one.clone()), true).unwrap();
        let fp = find_fixed_point(&sw).unwrap();
        assert_eq!(fp[0], [one.clone(), zero.clone()]);
        let m = segre_project(&sw, &fp).unwrap();
        assert_eq!(m.order(64, 512), OrderResult::Finite(2));
        assert!(segre_project(&f, &[[one.clone(), one.clone()], [one.clone(), zero.clone()]]).is_err());
    }

    #[test]
    fn fixed_points_swap() {
        let one = CycNumber::one();
        let zero = CycNumber::zero();
        let a = [[one.clone(), zero.clone()], [zero.clone(), one.clone()]];
        let b = [[z(3, 1), zero.clone()], [zero.clone(), one.clone()]];
        let f = BirMapP1P1::from_matrices(&a, &b, true).unwrap();
        let fp = find_fixed_point(&f).unwrap();
        let img = f.eval(&fp).unwrap();
        assert!(proportional(&img[0], &fp[0]) && proportional(&img[1], &fp[1]));
        assert_eq!(f.order(64, 512), OrderResult::Finite(6));
        assert_eq!(segre_project(&f, &fp).unwrap().order(64, 512), OrderResult::Finite(6));
        let g = BirMapP1P1::from_matrices(&b, &a, false).unwrap();
        assert_eq!(find_fixed_point(&g).unwrap()[0], [one, zero]);
    }
}
