//! The de Jonquieres group `PGL(2, C(x)) x| PGL(2, C)` acting by
//! `(x, y) -> (A x, V(x) y)`, tori `J_g` preserving `y^2 = g(x)`, twisted
//! powers and explicit roots of de Jonquieres involutions.

use std::fmt;

use num_integer::Integer;

use crate::birmaps::{BirMapP1P1, BirMapP2, OrderResult};
use crate::error::{Error, Result};
use crate::linalg::nullspace;
use crate::polys::{MultiPoly, RatFunc, UniPoly};
use crate::scalars::{self, CycNumber};

/// A 2x2 matrix over `C(x)` up to scalars, normalized so the first nonzero
/// entry in row-major order is 1.
#[derive(Clone, PartialEq, Eq)]
pub struct Mobius2 {
    e: [RatFunc; 4],
}

impl Mobius2 {
    pub fn new(e: [RatFunc; 4]) -> Result<Self> {
        let det = &(&e[0] * &e[3]) - &(&e[1] * &e[2]);
        if det.is_zero() {
            return Err(Error::Domain("matrix with zero determinant".into()));
        }
        Ok(Self::normalized(e))
    }

    // coprime polynomial entries, first nonzero entry monic
    fn normalized(e: [RatFunc; 4]) -> Self {
        let mut den = UniPoly::one();
        for r in &e {
            if r.den().degree() > 0 {
                let g = den.gcd(r.den());
                den = &den * &r.den().div_exact(&g).unwrap();
            }
        }
        let mut ps = e.map(|r| {
            if den.degree() > 0 {
                r.num() * &den.div_exact(r.den()).unwrap()
            } else {
                r.num().clone()
            }
        });
        let mut g = UniPoly::zero();
        for p in ps.iter().filter(|p| !p.is_zero()) {
            g = if g.is_zero() { p.monic() } else { g.gcd(p) };
            if g.degree() == 0 {
                break;
            }
        }
        if g.degree() > 0 {
            ps = ps.map(|p| p.div_exact(&g).unwrap());
        }
        let lc = ps.iter().find(|p| !p.is_zero()).unwrap().lc();
        if !lc.is_one() {
            let inv = lc.inv().unwrap();
            ps = ps.map(|p| p.scale(&inv));
        }
        Mobius2 {
            e: ps.map(RatFunc::from_poly),
        }
    }

    pub fn identity() -> Self {
        Mobius2 {
            e: [RatFunc::one(), RatFunc::zero(), RatFunc::zero(), RatFunc::one()],
        }
    }

    pub fn from_polys(a: &UniPoly, b: &UniPoly, c: &UniPoly, d: &UniPoly) -> Result<Self> {
        Self::new([a, b, c, d].map(|p| RatFunc::from_poly(p.clone())))
    }

    pub fn entries(&self) -> &[RatFunc; 4] {
        &self.e
    }

    pub fn det(&self) -> RatFunc {
        &(&self.e[0] * &self.e[3]) - &(&self.e[1] * &self.e[2])
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn mul(&self, o: &Mobius2) -> Mobius2 {
        let (a, b) = (&self.e, &o.e);
        let e = [
            &(&a[0] * &b[0]) + &(&a[1] * &b[2]),
            &(&a[0] * &b[1]) + &(&a[1] * &b[3]),
            &(&a[2] * &b[0]) + &(&a[3] * &b[2]),
            &(&a[2] * &b[1]) + &(&a[3] * &b[3]),
        ];
        Self::normalized(e)
    }

    /// Projective inverse (the adjugate).
    pub fn inverse(&self) -> Mobius2 {
        let e = &self.e;
        Self::normalized([e[3].clone(), -&e[1], -&e[2], e[0].clone()])
    }

    /// Entries composed with the Moebius transformation `m` of `x`.
    pub fn substitute_x(&self, m: &[CycNumber; 4]) -> Result<Mobius2> {
        let mut out = Vec::with_capacity(4);
        for r in &self.e {
            out.push(r.mobius_substitute(m)?);
        }
        Self::new(out.try_into().unwrap())
    }

    /// Entries evaluated at `x = t`, as a scalar matrix.
    pub fn eval(&self, t: &CycNumber) -> Result<[CycNumber; 4]> {
        let mut out = Vec::with_capacity(4);
        for r in &self.e {
            out.push(r.eval(t)?);
        }
        Ok(out.try_into().unwrap())
    }
}

impl fmt::Display for Mobius2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.e[0], self.e[1], self.e[2], self.e[3])
    }
}

impl fmt::Debug for Mobius2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn normalize_scalar(m: [CycNumber; 4]) -> Result<[CycNumber; 4]> {
    let det = &(&m[0] * &m[3]) - &(&m[1] * &m[2]);
    if det.is_zero() {
        return Err(Error::Domain("horizontal block is singular".into()));
    }
    let first = m.iter().find(|c| !c.is_zero()).unwrap().clone();
    if first.is_one() {
        return Ok(m);
    }
    let inv = first.inv()?;
    Ok(m.map(|c| &c * &inv))
}

fn mat_mul(a: &[CycNumber; 4], b: &[CycNumber; 4]) -> [CycNumber; 4] {
    [
        &(&a[0] * &b[0]) + &(&a[1] * &b[2]),
        &(&a[0] * &b[1]) + &(&a[1] * &b[3]),
        &(&a[2] * &b[0]) + &(&a[3] * &b[2]),
        &(&a[2] * &b[1]) + &(&a[3] * &b[3]),
    ]
}

/// `(x, y) -> ((a x + b)/(c x + d), V(x) y)`.
#[derive(Clone, PartialEq, Eq)]
pub struct JonqElement {
    vertical: Mobius2,
    horizontal: [CycNumber; 4],
}

impl JonqElement {
    pub fn new(vertical: Mobius2, horizontal: [CycNumber; 4]) -> Result<Self> {
        Ok(JonqElement {
            vertical,
            horizontal: normalize_scalar(horizontal)?,
        })
    }

    pub fn identity() -> Self {
        JonqElement {
            vertical: Mobius2::identity(),
            horizontal: [CycNumber::one(), CycNumber::zero(), CycNumber::zero(), CycNumber::one()],
        }
    }

    pub fn vertical(&self) -> &Mobius2 {
        &self.vertical
    }

    pub fn horizontal(&self) -> &[CycNumber; 4] {
        &self.horizontal
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// `self o h`: apply `h` first.
    pub fn compose(&self, h: &JonqElement) -> JonqElement {
        let v = self
            .vertical
            .substitute_x(&h.horizontal)
            .expect("Moebius substitution keeps the determinant nonzero")
            .mul(&h.vertical);
        JonqElement {
            vertical: v,
            horizontal: normalize_scalar(mat_mul(&self.horizontal, &h.horizontal)).unwrap(),
        }
    }

    pub fn inverse(&self) -> JonqElement {
        let a = &self.horizontal;
        let ainv = normalize_scalar([a[3].clone(), -&a[1], -&a[2], a[0].clone()]).unwrap();
        let v = self.vertical.substitute_x(&ainv).unwrap().inverse();
        JonqElement {
            vertical: v,
            horizontal: ainv,
        }
    }

    pub fn power(&self, k: u64) -> JonqElement {
        let mut acc = Self::identity();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    pub fn order(&self, cap: u64) -> OrderResult {
        let mut h = self.clone();
        for k in 1..=cap {
            if h.is_identity() {
                return OrderResult::Finite(k);
            }
            h = self.compose(&h);
        }
        OrderResult::ExceedsCap
    }

    /// Image of an affine point where defined.
    pub fn eval(&self, x: &CycNumber, y: &CycNumber) -> Result<(CycNumber, CycNumber)> {
        let a = &self.horizontal;
        let den = &(&a[2] * x) + &a[3];
        let xn = (&(&a[0] * x) + &a[1]).try_div(&den)?;
        let v = self.vertical.eval(x)?;
        let yd = &(&v[2] * y) + &v[3];
        let yn = (&(&v[0] * y) + &v[1]).try_div(&yd)?;
        Ok((xn, yn))
    }

    // vertical entries over a common denominator, as polynomials in x
    fn vertical_polys(&self) -> ([UniPoly; 4], usize) {
        let mut den = UniPoly::one();
        for r in self.vertical.entries() {
            let g = den.gcd(r.den());
            den = &den * &r.den().div_exact(&g).unwrap();
        }
        let ps = self
            .vertical
            .entries()
            .clone()
            .map(|r| (r.num() * &den.div_exact(r.den()).unwrap()).clone());
        let e = ps.iter().map(|p| p.degree().max(0) as usize).max().unwrap();
        (ps, e)
    }

    pub fn to_birmap_p1p1(&self) -> BirMapP1P1 {
        let (ps, e) = self.vertical_polys();
        let hom = |p: &UniPoly| homogenize(p, e, "x1", "x2");
        let a = &self.horizontal;
        let lin = |s: &CycNumber, t: &CycNumber| {
            &MultiPoly::var("x1").scale(s) + &MultiPoly::var("x2").scale(t)
        };
        let y1 = MultiPoly::var("y1");
        let y2 = MultiPoly::var("y2");
        BirMapP1P1::new(
            [lin(&a[0], &a[1]), lin(&a[2], &a[3])],
            [
                &(&hom(&ps[0]) * &y1) + &(&hom(&ps[1]) * &y2),
                &(&hom(&ps[2]) * &y1) + &(&hom(&ps[3]) * &y2),
            ],
        )
        .expect("a de Jonquieres element gives a valid map")
    }

    pub fn to_birmap_p2(&self) -> BirMapP2 {
        let (ps, e) = self.vertical_polys();
        let hom = |p: &UniPoly| homogenize(p, e, "x", "z");
        let a = &self.horizontal;
        let (x, y, z) = (MultiPoly::var("x"), MultiPoly::var("y"), MultiPoly::var("z"));
        let l1 = &x.scale(&a[0]) + &z.scale(&a[1]);
        let l2 = &x.scale(&a[2]) + &z.scale(&a[3]);
        let n = &(&hom(&ps[0]) * &y) + &(&hom(&ps[1]) * &z);
        let d = &(&hom(&ps[2]) * &y) + &(&hom(&ps[3]) * &z);
        BirMapP2::new([&l1 * &d, &n * &l2, &l2 * &d]).expect("a de Jonquieres element gives a valid map")
    }
}

impl fmt::Display for JonqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.horizontal;
        write!(
            f,
            "(V = {}, A = [[{}, {}], [{}, {}]])",
            self.vertical, a[0], a[1], a[2], a[3]
        )
    }
}

impl fmt::Debug for JonqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn homogenize(p: &UniPoly, e: usize, a: &str, b: &str) -> MultiPoly {
    let mut out = MultiPoly::zero();
    for (i, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            out = &out
                + &MultiPoly::monomial(c.clone(), &[(a, i as u32), (b, (e - i) as u32)]);
        }
    }
    out
}

fn check_invariant(g: &UniPoly, n: u64) -> Result<()> {
    let xi = CycNumber::root_of_unity(n as u32, 1);
    if g.scale_var(&xi) != *g {
        return Err(Error::Domain(format!(
            "g = {} is not invariant under x -> zeta({n}) x",
            MultiPoly::from_unipoly(g, "x")
        )));
    }
    Ok(())
}

fn torus_matrix(nu: &RatFunc, g: &UniPoly) -> Result<Mobius2> {
    let gr = RatFunc::from_poly(g.clone());
    Mobius2::new([nu.clone(), gr, RatFunc::one(), nu.clone()])
        .map_err(|_| Error::Domain("a factor has zero determinant (nu^2 = g)".into()))
}

/// `((nu g; 1 nu), x -> zeta_n x)`.
pub fn twisted_element(nu: &RatFunc, g: &UniPoly, n: u64) -> Result<JonqElement> {
    let xi = CycNumber::root_of_unity(n as u32, 1);
    JonqElement::new(
        torus_matrix(nu, g)?,
        [xi, CycNumber::zero(), CycNumber::zero(), CycNumber::one()],
    )
}

/// `(x, y) -> (x, g(x)/y)`.
pub fn involution(g: &UniPoly) -> JonqElement {
    JonqElement::new(
        torus_matrix(&RatFunc::zero(), g).unwrap(),
        [CycNumber::one(), CycNumber::zero(), CycNumber::zero(), CycNumber::one()],
    )
    .unwrap()
}

/// The vertical part of `((nu g; 1 nu), x -> zeta_n x)^n`.
pub fn jonq_power(nu: &RatFunc, g: &UniPoly, n: u64) -> Result<Mobius2> {
    check_invariant(g, n)?;
    let mut acc = Mobius2::identity();
    for i in 0..n {
        let xi = CycNumber::root_of_unity(n as u32, i as i64);
        let m = torus_matrix(&nu.scale_var(&xi), g)?;
        acc = m.mul(&acc);
    }
    Ok(acc)
}

pub fn is_involution_block(m: &Mobius2, g: &UniPoly) -> bool {
    *m == torus_matrix(&RatFunc::zero(), g).unwrap()
}

/// `alpha + beta sqrt(g)`.
#[derive(Clone, PartialEq, Eq)]
pub struct TorusElement {
    pub alpha: RatFunc,
    pub beta: RatFunc,
    g: UniPoly,
}

impl TorusElement {
    pub fn new(alpha: RatFunc, beta: RatFunc, g: UniPoly) -> Result<Self> {
        if alpha.is_zero() && beta.is_zero() {
            return Err(Error::Domain("zero torus element".into()));
        }
        if g.degree() < 1 || g.odd_part().degree() < 1 {
            return Err(Error::Domain("g must not be a square".into()));
        }
        Ok(TorusElement { alpha, beta, g })
    }

    pub fn g(&self) -> &UniPoly {
        &self.g
    }

    /// The projective representative: `beta = 1`, or `alpha = 1` if `beta = 0`.
    pub fn canonical(&self) -> TorusElement {
        let s = if self.beta.is_zero() { &self.alpha } else { &self.beta };
        let inv = s.inv().unwrap();
        TorusElement {
            alpha: &self.alpha * &inv,
            beta: &self.beta * &inv,
            g: self.g.clone(),
        }
    }

    pub fn matrix(&self) -> Result<Mobius2> {
        let gr = RatFunc::from_poly(self.g.clone());
        Mobius2::new([self.alpha.clone(), &self.beta * &gr, self.beta.clone(), self.alpha.clone()])
    }

    pub fn mul(&self, t: &TorusElement) -> Result<TorusElement> {
        if self.g != t.g {
            return Err(Error::Domain("torus elements for different g".into()));
        }
        let gr = RatFunc::from_poly(self.g.clone());
        let a = &(&self.alpha * &t.alpha) + &(&(&self.beta * &t.beta) * &gr);
        let b = &(&self.alpha * &t.beta) + &(&t.alpha * &self.beta);
        TorusElement::new(a, b, self.g.clone())
    }

    /// `x -> a x` in both coordinates, `sqrt(g)` fixed.
    pub fn scale_var(&self, a: &CycNumber) -> TorusElement {
        TorusElement {
            alpha: self.alpha.scale_var(a),
            beta: self.beta.scale_var(a),
            g: self.g.clone(),
        }
    }

    pub fn is_invariant(&self, n: u64) -> bool {
        let xi = CycNumber::root_of_unity(n as u32, 1);
        self.alpha.scale_var(&xi) == self.alpha && self.beta.scale_var(&xi) == self.beta
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*sqrt({})", self.alpha, self.beta, MultiPoly::from_unipoly(&self.g, "x"))
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn torus_mul(s: &TorusElement, t: &TorusElement) -> Result<TorusElement> {
    s.mul(t)
}

/// `t sigma(t) ... sigma^(n-1)(t)` with `sigma: x -> zeta_n x`.
pub fn torus_norm(t: &TorusElement, n: u64) -> Result<TorusElement> {
    check_invariant(&t.g, n)?;
    let mut acc = t.clone();
    for i in 1..n {
        acc = acc.mul(&t.scale_var(&CycNumber::root_of_unity(n as u32, i as i64)))?;
    }
    if !acc.is_invariant(n) {
        return Err(Error::Verification("norm is not invariant".into()));
    }
    Ok(acc)
}

/// `(x, y) -> (zeta_2m x, (H y - H H~)/(y + H))` with `H = h(x^m)`,
/// `H~ = h(-x^m)`; its `2m`-th power is `(x, -H H~/y)`.
pub fn root_construct(h: &RatFunc, m: u64) -> Result<JonqElement> {
    if m.is_multiple_of(2) || m == 0 {
        return Err(Error::Domain(format!("m = {m} must be odd")));
    }
    let hm = h.inflate(m as usize);
    let hm_neg = hm.scale_var(&CycNumber::root_of_unity(2, 1));
    if (&hm + &hm_neg).is_zero() {
        return Err(Error::Domain("degenerate: h(x^m) + h(-x^m) = 0".into()));
    }
    let prod = &hm * &hm_neg;
    let n = 2 * m;
    let v = Mobius2::new([hm.clone(), -&prod, RatFunc::one(), hm.clone()])?;
    let xi = CycNumber::root_of_unity(n as u32, 1);
    let alpha = JonqElement::new(v, [xi, CycNumber::zero(), CycNumber::zero(), CycNumber::one()])?;
    let target = JonqElement::new(
        Mobius2::new([RatFunc::zero(), -&prod, RatFunc::one(), RatFunc::zero()])?,
        [CycNumber::one(), CycNumber::zero(), CycNumber::zero(), CycNumber::one()],
    )?;
    if alpha.power(n) != target {
        return Err(Error::Verification("alpha^(2m) is not the involution".into()));
    }
    if alpha.order(4 * m) != OrderResult::Finite(4 * m) {
        return Err(Error::Verification("alpha does not have order 4m".into()));
    }
    Ok(alpha)
}

/// Pulls `psi = (V(x), x -> l x)` back along `x -> x^t` for odd `t` prime
/// to the order `k` of `l`: the result is `(V(x^t), x -> xi x)` with
/// `xi^t = l` and `xi` of order `k t`. If `psi^k = (x, g/y)` then the
/// `k t`-th power of the result is `(x, g(x^t)/y)`.
pub fn inflate_root(psi: &JonqElement, t: u64) -> Result<JonqElement> {
    let h = psi.horizontal();
    if !h[1].is_zero() || !h[2].is_zero() {
        return Err(Error::Domain("horizontal part must be x -> l x".into()));
    }
    let l = &h[0] / &h[3];
    let k = l
        .order_of()?
        .ok_or_else(|| Error::Domain("horizontal scale is not a root of unity".into()))?;
    if t.is_multiple_of(2) || t.gcd(&k) != 1 {
        return Err(Error::Domain(format!("t = {t} must be odd and prime to {k}")));
    }
    let tinv = (1..=k).find(|u| (u * t) % k == 1 % k).unwrap_or(1);
    let xi = &l.pow(tinv as i64) * &CycNumber::root_of_unity(t as u32, 1);
    let v = psi.vertical().entries().clone().map(|e| e.inflate(t as usize));
    JonqElement::new(Mobius2::new(v)?, [xi, CycNumber::zero(), CycNumber::zero(), CycNumber::one()])
}

/// `-h(x^m) h(-x^m)` as a polynomial, for polynomial `h`.
pub fn involution_curve(h: &RatFunc, m: u64) -> RatFunc {
    let hm = h.inflate(m as usize);
    let hm_neg = hm.scale_var(&CycNumber::root_of_unity(2, 1));
    -(&hm * &hm_neg)
}

#[derive(Clone, Debug)]
pub struct RootHit {
    pub nu: RatFunc,
    pub phi: JonqElement,
    pub candidates_tried: u64,
}

/// Search parameters for [`root_search`].
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub degree_bound: usize,
    pub max_candidates: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            degree_bound: 3,
            max_candidates: 200_000,
        }
    }
}

fn coefficient_pool(n: u64) -> Vec<CycNumber> {
    let mut pool: Vec<CycNumber> = [0, 1, -1, 2, -2].iter().map(|&k| CycNumber::from_int(k)).collect();
    for k in 1..n {
        let z = CycNumber::root_of_unity(n as u32, k as i64);
        if !pool.contains(&z) {
            pool.push(z);
        }
    }
    pool
}

// odometer over coefficient indices, leading coefficient nonzero
fn polys_of_degree(pool: &[CycNumber], d: usize, monic: bool) -> impl Iterator<Item = UniPoly> + '_ {
    let len = d + 1;
    let base = pool.len();
    let lead_choices: Vec<usize> = if monic { vec![1] } else { (1..base).collect() };
    let total_rest = base.pow(d as u32);
    lead_choices.into_iter().flat_map(move |lead| {
        (0..total_rest).map(move |mut idx| {
            let mut c = vec![CycNumber::zero(); len];
            c[d] = pool[lead].clone();
            for k in (0..d).rev() {
                let digit = idx / base.pow(k as u32);
                idx %= base.pow(k as u32);
                c[k] = pool[digit].clone();
            }
            UniPoly::new(c)
        })
    })
}

/// Search `nu` with `jonq_power(nu, g, n)` equal to the involution block.
/// `None` means nothing was found within the bounds.
pub fn root_search(g: &UniPoly, n: u64, cfg: &SearchConfig) -> Result<Option<RootHit>> {
    if g.degree() < 1 || !g.is_squarefree() {
        return Err(Error::Domain("g must be squarefree and nonconstant".into()));
    }
    check_invariant(g, n)?;
    let pool = coefficient_pool(n);
    // evaluation point for the cheap filter
    let x0 = (3..)
        .map(|k| CycNumber::from_ratio(k, 7))
        .find(|t| !g.eval(t).is_zero())
        .unwrap();
    let g0 = g.eval(&x0);
    let pts: Vec<CycNumber> = (0..n)
        .map(|i| &CycNumber::root_of_unity(n as u32, i as i64) * &x0)
        .collect();
    let target = torus_matrix(&RatFunc::zero(), g)?;
    let mut tried = 0u64;
    let test = |nu: RatFunc| -> Option<RootHit> {
        // numeric filter: the product of (nu(p) g0; 1 nu(p)) must be antidiagonal
        let mut a = [CycNumber::one(), CycNumber::zero(), CycNumber::zero(), CycNumber::one()];
        for p in &pts {
            let v = nu.eval(p).ok()?;
            a = mat_mul(&[v.clone(), g0.clone(), CycNumber::one(), v], &a);
        }
        if !a[0].is_zero() || !a[3].is_zero() {
            return None;
        }
        let m = jonq_power(&nu, g, n).ok()?;
        if m != target {
            return None;
        }
        let phi = twisted_element(&nu, g, n).ok()?;
        Some(RootHit {
            nu,
            phi,
            candidates_tried: 0,
        })
    };
    for d in 0..=cfg.degree_bound {
        let polys: Box<dyn Iterator<Item = UniPoly>> = if d == 0 {
            Box::new(pool.clone().into_iter().map(UniPoly::constant))
        } else {
            Box::new(polys_of_degree(&pool, d, false))
        };
        for p in polys {
            if tried >= cfg.max_candidates {
                return Ok(None);
            }
            tried += 1;
            if let Some(hit) = test(RatFunc::from_poly(p)) {
                return verify_hit(hit, g, n, tried).map(Some);
            }
        }
    }
    for dq in 1..=cfg.degree_bound {
        for q in polys_of_degree(&pool, dq, true) {
            for dp in 0..=cfg.degree_bound {
                for p in polys_of_degree(&pool, dp, false) {
                    if tried >= cfg.max_candidates {
                        return Ok(None);
                    }
                    let Ok(nu) = RatFunc::new(p, q.clone()) else { continue };
                    if nu.den().degree() < 1 {
                        continue;
                    }
                    tried += 1;
                    if let Some(hit) = test(nu) {
                        return verify_hit(hit, g, n, tried).map(Some);
                    }
                }
            }
        }
    }
    Ok(None)
}

fn verify_hit(mut hit: RootHit, g: &UniPoly, n: u64, tried: u64) -> Result<RootHit> {
    hit.candidates_tried = tried;
    if hit.phi.power(n) != involution(g) {
        return Err(Error::Verification("phi^n is not the involution".into()));
    }
    if hit.phi.order(2 * n) != OrderResult::Finite(2 * n) {
        return Err(Error::Verification("phi does not have order 2n".into()));
    }
    Ok(hit)
}

/// A root of the involution `(x, g/y)` of order `2k`, for `g` invariant under
/// `x -> zeta_k x`, squarefree of even degree with `g(0) != 0` and roots
/// whose square roots are cyclotomic. Builds `a + b sqrt(g)` of norm `x`,
/// then a norm-one element `T`, then `nu = T1 g / (T0 - 1)`.
pub fn root_by_norm(g: &UniPoly, k: u64) -> Result<JonqElement> {
    check_invariant(g, k)?;
    let deg = g.degree();
    if deg < 2 || deg % 2 == 1 || !g.is_squarefree() || g.coeff(0).is_zero() {
        return Err(Error::Domain("g must be squarefree of even degree with g(0) != 0".into()));
    }
    let s = (deg / 2) as usize;
    let (roots, rest) = g.cyclotomic_roots();
    if rest.degree() > 0 {
        return Err(Error::Unsupported("roots of g are not cyclotomic".into()));
    }
    let sq0 = scalars::sqrt_cyc(&g.coeff(0))
        .ok_or_else(|| Error::Unsupported("sqrt g(0) is not cyclotomic".into()))?;
    // unknowns: X_0..X_s, Y, Z_0..Z_{s-1}
    let cols = 2 * s + 2;
    let mut rows = Vec::new();
    let mut r0 = vec![CycNumber::zero(); cols];
    r0[0] = CycNumber::one();
    r0[s + 1] = -&sq0;
    rows.push(r0);
    for a in &roots {
        let sa = scalars::sqrt_cyc(a).ok_or_else(|| Error::Unsupported("sqrt of a root is not cyclotomic".into()))?;
        let mut r = vec![CycNumber::zero(); cols];
        let mut pw = CycNumber::one();
        for i in 0..=s {
            r[i] = pw.clone();
            if i < s {
                r[s + 2 + i] = -&(&sa * &pw);
            }
            pw = &pw * a;
        }
        rows.push(r);
    }
    let ns = nullspace(&rows, cols);
    let v = ns.first().ok_or_else(|| Error::Verification("no norm solution".into()))?;
    let xp = UniPoly::new(v[0..=s].to_vec());
    let y = v[s + 1].clone();
    let zp = UniPoly::new(v[s + 2..].to_vec());
    let gr = RatFunc::from_poly(g.clone());
    let x = RatFunc::x();
    let a = RatFunc::new(xp, zp.clone())?;
    let b = RatFunc::new(UniPoly::constant(y), zp)?;
    if &(&a * &a) - &(&(&b * &b) * &gr) != x {
        return Err(Error::Verification("norm equation failed".into()));
    }
    let c = CycNumber::root_of_unity(2 * k as u32, 1);
    let xi = CycNumber::root_of_unity(k as u32, 1);
    let a1 = a.scale_var(&xi);
    let b1 = b.scale_var(&xi);
    let denom = x.scale(&xi).inv()?.scale(&c);
    let t0 = &(&(&a * &a1) - &(&(&b * &b1) * &gr)) * &denom;
    let t1 = &(&(&a1 * &b) - &(&a * &b1)) * &denom;
    let t0m = &t0 - &RatFunc::one();
    if t0m.is_zero() {
        return Err(Error::Verification("norm-one element is trivial".into()));
    }
    let nu = &(&t1 * &gr) / &t0m;
    let m = jonq_power(&nu, g, k)?;
    if !is_involution_block(&m, g) {
        return Err(Error::Verification("phi^k is not the involution".into()));
    }
    twisted_element(&nu, g, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::expr::{parse_poly, parse_ratfunc};

    fn u(s: &str) -> UniPoly {
        parse_poly(s).unwrap().to_unipoly("x").unwrap()
    }

    fn r(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }

    fn one() -> CycNumber {
        CycNumber::one()
    }

    fn zero() -> CycNumber {
        CycNumber::zero()
    }

    fn elem(v: [&str; 4], h: [CycNumber; 4]) -> JonqElement {
        JonqElement::new(Mobius2::new(v.map(r)).unwrap(), h).unwrap()
    }

    fn samples() -> Vec<JonqElement> {
        vec![
            elem(["x", "1", "1", "x + 1"], [one(), CycNumber::from_int(2), zero(), one()]),
            elem(["1", "x^2 - 1", "1", "0"], [CycNumber::root_of_unity(3, 1), zero(), zero(), one()]),
            elem(["x - 1", "0", "0", "1"], [zero(), one(), one(), zero()]),
            elem(["1/x", "2", "x", "3"], [one(), one(), zero(), one()]),
        ]
    }

    #[test]
    fn identity_horizontal_product() {
        let a = elem(["1", "0", "0", "1"], [one(), CycNumber::from_int(2), zero(), one()]);
        let b = elem(["1", "0", "0", "1"], [CycNumber::from_int(3), zero(), zero(), one()]);
        let ab = a.compose(&b);
        assert!(ab.vertical().is_identity());
        assert_eq!(ab.horizontal(), &[one(), CycNumber::from_ratio(2, 3), zero(), CycNumber::from_ratio(1, 3)]);
    }

    #[test]
    fn group_axioms() {
        let s = samples();
        for a in &s {
            assert!(a.compose(&a.inverse()).is_identity());
            assert!(a.inverse().compose(a).is_identity());
            assert_eq!(&a.compose(&JonqElement::identity()), a);
            for b in &s {
                for c in &s {
                    assert_eq!(a.compose(&b.compose(c)), a.compose(b).compose(c));
                }
            }
        }
    }

    #[test]
    fn birmap_homomorphism() {
        let s = samples();
        for a in &s {
            for b in &s {
                let ab = a.compose(b);
                assert_eq!(ab.to_birmap_p1p1(), a.to_birmap_p1p1().compose(&b.to_birmap_p1p1()).unwrap());
                assert_eq!(ab.to_birmap_p2(), a.to_birmap_p2().compose(&b.to_birmap_p2()).unwrap());
            }
        }
        assert!(JonqElement::identity().to_birmap_p2().is_identity());
        assert!(JonqElement::identity().to_birmap_p1p1().is_identity());
    }

    #[test]
    fn involution_map() {
        // y -> prod(x - b) / (y prod(x - a)) with a = {0, 1}, b = {2, 3}
        let inv = elem(["0", "(x - 2)*(x - 3)", "x*(x - 1)", "0"], [one(), zero(), zero(), one()]);
        let m = inv.to_birmap_p1p1();
        let expect = BirMapP1P1::new(
            [parse_poly("x1").unwrap(), parse_poly("x2").unwrap()],
            [
                parse_poly("y2*(x1 - 2*x2)*(x1 - 3*x2)").unwrap(),
                parse_poly("y1*x1*(x1 - x2)").unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(m, expect);
        assert_eq!(inv.order(10), OrderResult::Finite(2));
    }

    #[test]
    fn order_four_without_twist() {
        // (x, y) -> (i x, g/y) with g = x^4 + 1: its square is (-x, y)
        let g = u("x^4 + 1");
        let phi = twisted_element(&RatFunc::zero(), &g, 4).unwrap();
        let m = phi.to_birmap_p1p1();
        assert!(m.power(4).unwrap().is_identity());
        let sq = m.power(2).unwrap();
        assert_eq!(sq.y_pair(), &[parse_poly("y1").unwrap(), parse_poly("y2").unwrap()]);
        assert_eq!(m.order(10, 512), OrderResult::Finite(4));
    }

    #[test]
    fn power_formula() {
        let g = u("x^2 - 1");
        assert!(!is_involution_block(&jonq_power(&RatFunc::zero(), &g, 2).unwrap(), &g));
        assert!(jonq_power(&RatFunc::zero(), &g, 2).unwrap().is_identity());
        assert!(jonq_power(&r("x"), &u("x^3 + 1"), 2).is_err());
        // the twisted product matches iteration
        let cases = [("x + 1", "x^2 - 1", 2), ("x^2 + 2", "x^6 - 4", 3), ("1/(x + 2)", "x^4 + 3", 4), ("2*x", "x^6 + x^3 - 1", 3), ("x^2 - x", "x^6 - 2", 6)];
        for (nu, g, n) in cases {
            let (nu, g) = (r(nu), u(g));
            let phi = twisted_element(&nu, &g, n).unwrap();
            let it = phi.power(n);
            assert_eq!(&jonq_power(&nu, &g, n).unwrap(), it.vertical());
            assert!(it.horizontal()[1].is_zero() && it.horizontal()[0] == it.horizontal()[3]);
        }
        // a degenerate factor
        assert!(jonq_power(&r("x"), &u("x^2"), 2).is_err());
    }

    #[test]
    fn square_of_twisted() {
        let nu = r("x + 3");
        let g = u("x^4 - 2");
        let xi = CycNumber::root_of_unity(4, 1);
        let phi = twisted_element(&nu, &g, 4).unwrap();
        let sq = phi.power(2);
        let gr = RatFunc::from_poly(g.clone());
        let m1 = Mobius2::new([nu.clone(), gr.clone(), RatFunc::one(), nu.clone()]).unwrap();
        let nu2 = nu.scale_var(&xi);
        let m2 = Mobius2::new([nu2.clone(), gr, RatFunc::one(), nu2]).unwrap();
        assert_eq!(sq.vertical(), &m1.mul(&m2));
    }

    #[test]
    fn torus_arithmetic() {
        let g = u("x^3 - x + 1");
        let t = |a: &str, b: &str| TorusElement::new(r(a), r(b), g.clone()).unwrap();
        let p = torus_mul(&t("x", "0"), &t("x + 1", "0")).unwrap();
        assert_eq!(p.alpha, r("x^2 + x"));
        let s = t("0", "1").mul(&t("0", "1")).unwrap();
        assert_eq!(s.alpha, RatFunc::from_poly(g.clone()));
        assert_eq!(s.canonical(), t("1", "0"));
        let a = t("x + 2", "1/x");
        let b = t("x^2", "3");
        assert_eq!(a.mul(&b).unwrap().matrix().unwrap(), a.matrix().unwrap().mul(&b.matrix().unwrap()));
        let gx = u("x^2 + 5");
        let n = torus_norm(&TorusElement::new(r("x"), RatFunc::zero(), gx.clone()).unwrap(), 2).unwrap();
        assert_eq!(n.alpha, r("-x^2"));
        let q = TorusElement::new(r("x + 1"), r("x^2 - 3"), gx.clone()).unwrap();
        let w = TorusElement::new(r("2"), r("1/(x - 1)"), gx.clone()).unwrap();
        let nq = torus_norm(&q, 2).unwrap();
        assert!(nq.is_invariant(2));
        let lhs = torus_norm(&q.mul(&w).unwrap(), 2).unwrap();
        let rhs = nq.mul(&torus_norm(&w, 2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(torus_norm(&t("x", "1"), 2).is_err());
    }

    #[test]
    fn constructed_roots() {
        let a = root_construct(&r("x + 1"), 1).unwrap();
        assert_eq!(a.vertical(), &Mobius2::new([r("x + 1"), r("x^2 - 1"), r("1"), r("x + 1")]).unwrap());
        let sq = a.power(2);
        assert_eq!(sq, involution(&u("x^2 - 1")));
        assert!(root_construct(&r("x"), 1).is_err());
        assert!(root_construct(&r("x"), 2).is_err());
        let b = root_construct(&r("x^2 + 2"), 3).unwrap();
        assert_eq!(b.order(24), OrderResult::Finite(12));
        let inv = involution_curve(&r("x^2 + 2"), 3);
        assert_eq!(b.power(6), involution(inv.num()));
        assert_eq!(inv, r("-(x^6 + 2)^2"));
    }

    #[test]
    fn searches() {
        let cfg = SearchConfig::default();
        let hit = root_search(&u("x^2 - 1"), 1, &cfg);
        assert!(hit.is_ok());
        let hit = root_search(&u("x^3 - 2"), 1, &cfg).unwrap().unwrap();
        assert!(hit.nu.is_zero());
        for (h, m) in [("x + 1", 1), ("x + 2", 3), ("x^2 + x + 1", 1)] {
            let g = involution_curve(&r(h), m);
            let hit = root_search(g.num(), 2 * m, &cfg).unwrap().expect("found");
            assert_eq!(hit.phi.power(2 * m), involution(g.num()));
        }
        let none = root_search(&u("x^2 - 1"), 2, &SearchConfig { degree_bound: 0, max_candidates: 100 }).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn norm_roots() {
        for (g, k) in [("x^4 - 1", 4), ("x^8 - 1", 4), ("x^8 - 1", 8), ("x^2 - 1", 2)] {
            let g = u(g);
            let phi = root_by_norm(&g, k).unwrap();
            assert_eq!(phi.power(k), involution(&g));
            assert_eq!(phi.order(4 * k), OrderResult::Finite(2 * k));
        }
    }
}
