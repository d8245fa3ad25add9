//! Exact scalars: rationals and elements of cyclotomic fields.
//!
//! A [`CycNumber`] is stored at its minimal conductor `N` (never `2 mod 4`)
//! as a vector of `phi(N)` coefficients over a common denominator, in the
//! power basis `1, t, ..., t^(phi(N)-1)` of `Q[t]/Phi_N(t)` with `t = zeta_N`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn totient(n: u32) -> u32 {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

struct Projection {
    // rows of the RREF of the embedded basis of Q(zeta_d) inside Q(zeta_M)
    rref: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    // transform with transform * basis = rref
    transform: Vec<Vec<Rational>>,
}

#[derive(Default)]
struct Cache {
    cyclo: HashMap<u32, Rc<Vec<i64>>>,
    proj: HashMap<(u32, u32), Rc<Projection>>,
}

thread_local! {
    static CACHE: RefCell<Cache> = RefCell::new(Cache::default());
}

fn poly_div_exact_i64(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let ql = num.len() + 1 - dl;
    let mut q = vec![0i64; ql];
    let lead = *den.last().unwrap();
    for i in (0..ql).rev() {
        let c = rem[i + dl - 1] / lead;
        q[i] = c;
        for j in 0..dl {
            rem[i + j] -= c * den[j];
        }
    }
    q
}

/// Coefficients of the cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(n: u32) -> Rc<Vec<i64>> {
    if let Some(p) = CACHE.with(|c| c.borrow().cyclo.get(&n).cloned()) {
        return p;
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in divisors(n as u64) {
        let d = d as u32;
        if d < n {
            let f = cyclotomic_poly(d);
            p = poly_div_exact_i64(&p, &f);
        }
    }
    let rc = Rc::new(p);
    CACHE.with(|c| c.borrow_mut().cyclo.insert(n, rc.clone()));
    rc
}

fn reduce_mod_cyclo(v: &mut Vec<BigInt>, n: u32) {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    for i in (deg..v.len()).rev() {
        if v[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[i]);
        for j in 0..deg {
            if phi[j] != 0 {
                v[i - deg + j] -= &c * phi[j];
            }
        }
    }
    v.truncate(deg);
    while v.len() < deg {
        v.push(BigInt::zero());
    }
}

fn lift_vec(num: &[BigInt], from: u32, to: u32) -> Vec<BigInt> {
    if from == to {
        return num.to_vec();
    }
    let step = (to / from) as usize;
    let mut v = vec![BigInt::zero(); (num.len().saturating_sub(1)) * step + 1];
    for (j, c) in num.iter().enumerate() {
        v[j * step] = c.clone();
    }
    reduce_mod_cyclo(&mut v, to);
    v
}

fn projection(m: u32, d: u32) -> Rc<Projection> {
    if let Some(p) = CACHE.with(|c| c.borrow().proj.get(&(m, d)).cloned()) {
        return p;
    }
    let pd = totient(d) as usize;
    let pm = totient(m) as usize;
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(pd);
    for j in 0..pd {
        let mut e = vec![BigInt::zero(); pd];
        e[j] = BigInt::one();
        let img = lift_vec(&e, d, m);
        rows.push(img.into_iter().map(Rational::from_integer).collect());
    }
    let mut transform: Vec<Vec<Rational>> = (0..pd)
        .map(|i| {
            (0..pd)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..pm {
        if r == pd {
            break;
        }
        let Some(p) = (r..pd).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        transform.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for x in transform[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..pd {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for k in 0..pm {
                    let t = &f * &rows[r][k];
                    rows[i][k] -= t;
                }
                for k in 0..pd {
                    let t = &f * &transform[r][k];
                    transform[i][k] -= t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let rc = Rc::new(Projection {
        rref: rows,
        pivots,
        transform,
    });
    CACHE.with(|c| c.borrow_mut().proj.insert((m, d), rc.clone()));
    rc
}

/// An element of `Q(zeta_N)` held at its minimal conductor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNumber {
    conductor: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNumber {
    pub fn zero() -> Self {
        CycNumber {
            conductor: 1,
            num: vec![BigInt::zero()],
            den: BigInt::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        CycNumber {
            conductor: 1,
            num: vec![BigInt::from(n)],
            den: BigInt::one(),
        }
    }

    pub fn from_rational(q: &Rational) -> Self {
        CycNumber {
            conductor: 1,
            num: vec![q.numer().clone()],
            den: q.denom().clone(),
        }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&rat(n, d))
    }

    /// `zeta_n^k` where `zeta_n = exp(2 pi i / n)`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n > 0, "root of unity of order 0");
        let k = k.rem_euclid(n as i64) as u64;
        if n % 4 == 2 {
            // zeta_{2m} = -zeta_m^((m+1)/2) for odd m
            let m = n / 2;
            let e = (k * (m as u64).div_ceil(2)) % m as u64;
            let base = Self::root_of_unity(m, e as i64);
            return if k % 2 == 1 { -base } else { base };
        }
        let mut v = vec![BigInt::zero(); k as usize + 1];
        v[k as usize] = BigInt::one();
        reduce_mod_cyclo(&mut v, n);
        Self::build(n, v, BigInt::one())
    }

    /// Build from rational coefficients in the power basis of `Q(zeta_n)`;
    /// `coeffs` may be longer than `phi(n)` and is reduced.
    pub fn from_coeffs(n: u32, coeffs: &[Rational]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("conductor must be positive".into()));
        }
        if n % 4 == 2 {
            let mut acc = Self::zero();
            for (k, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    acc = acc + Self::from_rational(c) * Self::root_of_unity(n, k as i64);
                }
            }
            return Ok(acc);
        }
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let mut v: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        if v.is_empty() {
            v.push(BigInt::zero());
        }
        reduce_mod_cyclo(&mut v, n);
        Ok(Self::build(n, v, den))
    }

    fn build(n: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        let mut g = den.clone();
        for c in &num {
            if !c.is_zero() {
                g = g.gcd(c);
                if g.is_one() {
                    break;
                }
            }
        }
        if den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= &g;
        }
        let mut out = CycNumber {
            conductor: n,
            num,
            den,
        };
        out.minimize();
        out
    }

    fn minimize(&mut self) {
        if self.conductor == 1 {
            return;
        }
        if self.num[1..].iter().all(|c| c.is_zero()) {
            self.conductor = 1;
            self.num.truncate(1);
            if self.num[0].is_zero() {
                self.den = BigInt::one();
            }
            return;
        }
        let m = self.conductor;
        for d in divisors(m as u64) {
            let d = d as u32;
            if d == 1 || d == m || d % 4 == 2 {
                continue;
            }
            if let Some(v) = self.project(d) {
                self.conductor = d;
                let mut den = BigInt::one();
                for c in &v {
                    den = den.lcm(c.denom());
                }
                let scale = &self.den;
                let num: Vec<BigInt> = v
                    .iter()
                    .map(|c| c.numer() * (&den / c.denom()))
                    .collect();
                let total_den = den * scale;
                *self = CycNumber {
                    conductor: d,
                    num,
                    den: total_den,
                };
                self.normalize_content();
                return;
            }
        }
    }

    fn normalize_content(&mut self) {
        let mut g = self.den.clone();
        for c in &self.num {
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
            self.den /= &g;
        }
    }

    // Coordinates (times self.den) in Q(zeta_d) if the value lies there.
    fn project(&self, d: u32) -> Option<Vec<Rational>> {
        let p = projection(self.conductor, d);
        let e: Vec<Rational> = p
            .pivots
            .iter()
            .map(|&c| Rational::from_integer(self.num[c].clone()))
            .collect();
        for (k, target) in self.num.iter().enumerate() {
            let mut s = Rational::zero();
            for (i, ei) in e.iter().enumerate() {
                let r = &p.rref[i][k];
                if !r.is_zero() && !ei.is_zero() {
                    s += ei * r;
                }
            }
            if s != Rational::from_integer(target.clone()) {
                return None;
            }
        }
        let pd = e.len();
        let mut c = vec![Rational::zero(); pd];
        for (i, ei) in e.iter().enumerate() {
            if ei.is_zero() {
                continue;
            }
            for (j, cj) in c.iter_mut().enumerate() {
                let t = &p.transform[i][j];
                if !t.is_zero() {
                    *cj += ei * t;
                }
            }
        }
        Some(c)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Image in `F_p` under `zeta_N -> w`, where `w` has order `N` mod `p`;
    /// `None` when `p` divides the denominator.
    pub(crate) fn reduce_mod(&self, p: u64, w: u64) -> Option<u64> {
        let pb = BigInt::from(p);
        let red = |b: &BigInt| -> u64 { b.mod_floor(&pb).to_u64().expect("reduced below p") };
        let d = red(&self.den);
        if d == 0 {
            return None;
        }
        let mut acc = 0u64;
        let mut pw = 1u64;
        for c in &self.num {
            acc = ((acc as u128 + red(c) as u128 * pw as u128) % p as u128) as u64;
            pw = mulmod(pw, w, p);
        }
        Some(mulmod(acc, powmod(d, p - 2, p), p))
    }

    /// Coefficients in the power basis at the minimal conductor.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.num[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.num[0].is_one() && self.den.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.conductor == 1 {
            Some(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn lift(&self, m: u32) -> Vec<Rational> {
        assert_eq!(m % self.conductor, 0);
        lift_vec(&self.num, self.conductor, m)
            .into_iter()
            .map(|c| Rational::new(c, self.den.clone()))
            .collect()
    }

    fn common(a: &Self, b: &Self) -> (u32, Vec<BigInt>, Vec<BigInt>) {
        let m = lcm_u32(a.conductor, b.conductor);
        (
            m,
            lift_vec(&a.num, a.conductor, m),
            lift_vec(&b.num, b.conductor, m),
        )
    }

    fn add_ref(&self, other: &Self, sign: i32) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if sign > 0 { other.clone() } else { -other.clone() };
        }
        if self.conductor == 1 && other.conductor == 1 {
            let a = Rational::new(self.num[0].clone(), self.den.clone());
            let b = Rational::new(other.num[0].clone(), other.den.clone());
            return Self::from_rational(&if sign > 0 { a + b } else { a - b });
        }
        let (m, va, vb) = Self::common(self, other);
        let num: Vec<BigInt> = va
            .iter()
            .zip(vb.iter())
            .map(|(x, y)| {
                let l = x * &other.den;
                let r = y * &self.den;
                if sign > 0 {
                    l + r
                } else {
                    l - r
                }
            })
            .collect();
        Self::build(m, num, &self.den * &other.den)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.conductor == 1 {
            let num = self.num.iter().map(|c| c * &other.num[0]).collect();
            let mut out = CycNumber {
                conductor: self.conductor,
                num,
                den: &self.den * &other.den,
            };
            out.normalize_content();
            if out.den.is_negative() {
                out.den = -out.den;
                for c in out.num.iter_mut() {
                    *c = -&*c;
                }
            }
            return out;
        }
        if self.conductor == 1 {
            return other.mul_ref(self);
        }
        let (m, va, vb) = Self::common(self, other);
        let mut prod = vec![BigInt::zero(); va.len() + vb.len() - 1];
        for (i, x) in va.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in vb.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        reduce_mod_cyclo(&mut prod, m);
        Self::build(m, prod, &self.den * &other.den)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(&q.recip()));
        }
        // extended Euclid for a(t) against Phi_N(t) over Q
        let n = self.conductor;
        let phi: Vec<Rational> = cyclotomic_poly(n)
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        let a: Vec<Rational> = self.coeffs();
        let u = rat_poly_inverse_mod(&a, &phi);
        Self::from_coeffs(n, &u)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative order as a root of unity, `None` if not a root of unity.
    pub fn order_of(&self) -> Result<Option<u64>> {
        if self.is_zero() {
            return Err(Error::Domain("order of zero".into()));
        }
        let n = self.conductor as u64;
        let l = if n % 2 == 1 { 2 * n } else { n };
        if !self.pow(l as i64).is_one() {
            return Ok(None);
        }
        for d in divisors(l) {
            if self.pow(d as i64).is_one() {
                return Ok(Some(d));
            }
        }
        unreachable!()
    }

    /// Image under the Galois automorphism `zeta_N -> zeta_N^k`, `gcd(k,N)=1`.
    pub fn galois(&self, k: i64) -> Self {
        let n = self.conductor;
        let mut acc = Self::zero();
        for (j, c) in self.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = acc + Self::from_rational(c) * Self::root_of_unity(n, k * j as i64);
            }
        }
        acc
    }

    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Complex approximation, for diagnostics and numeric filters only.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs().iter().enumerate() {
            let v = rational_to_f64(c);
            let ang = 2.0 * std::f64::consts::PI * j as f64 / n;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b != 0.0 => a / b,
        _ => {
            let bits = q.numer().bits().max(q.denom().bits()) as i64 - 60;
            let shift = bits.max(0) as usize;
            let a = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let b = (q.denom() >> shift).to_f64().unwrap_or(1.0);
            a / b
        }
    }
}

fn rp_trim(v: &mut Vec<Rational>) {
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
}

fn rp_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    rp_trim(&mut r);
    let mut bb = b.to_vec();
    rp_trim(&mut bb);
    let db = bb.len() - 1;
    if r.len() - 1 < db || (r.len() == 1 && r[0].is_zero()) {
        return (vec![Rational::zero()], r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    let lead = bb[db].clone();
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        if !c.is_zero() {
            for j in 0..=db {
                let t = &c * &bb[j];
                r[i + j] -= t;
            }
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    rp_trim(&mut r);
    (q, r)
}

fn rp_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    rp_trim(&mut out);
    out
}

fn rp_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    rp_trim(&mut out);
    out
}

fn rat_poly_inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
    // invariant: s_i * a = r_i mod m
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    rp_trim(&mut r1);
    let mut s0 = vec![Rational::zero()];
    let mut s1 = vec![Rational::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = rp_divrem(&r0, &r1);
        let s = rp_sub(&s0, &rp_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant
    let c = r0[0].recip();
    s0.into_iter().map(|x| x * &c).collect()
}

impl Default for CycNumber {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialOrd for CycNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycNumber {
    /// Total order for canonical sorting: by conductor, then coefficients.
    fn cmp(&self, other: &Self) -> Ordering {
        self.conductor
            .cmp(&other.conductor)
            .then_with(|| self.coeffs().cmp(&other.coeffs()))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl std::ops::$tr<&CycNumber> for &CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: &CycNumber) -> CycNumber {
                let f: fn(&CycNumber, &CycNumber) -> CycNumber = $body;
                f(self, rhs)
            }
        }
        impl std::ops::$tr<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                (&self).$m(&rhs)
            }
        }
        impl std::ops::$tr<&CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: &CycNumber) -> CycNumber {
                (&self).$m(rhs)
            }
        }
        impl std::ops::$tr<CycNumber> for &CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_ref(b, 1));
forward_binop!(Sub, sub, |a, b| a.add_ref(b, -1));
forward_binop!(Mul, mul, |a, b| a.mul_ref(b));
forward_binop!(Div, div, |a, b| a.try_div(b).expect("division by zero"));

impl std::ops::Neg for CycNumber {
    type Output = CycNumber;
    fn neg(mut self) -> CycNumber {
        for c in self.num.iter_mut() {
            *c = -&*c;
        }
        self
    }
}

impl std::ops::Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -self.clone()
    }
}

impl std::ops::AddAssign<&CycNumber> for CycNumber {
    fn add_assign(&mut self, rhs: &CycNumber) {
        *self = &*self + rhs;
    }
}

impl std::ops::SubAssign<&CycNumber> for CycNumber {
    fn sub_assign(&mut self, rhs: &CycNumber) {
        *self = &*self - rhs;
    }
}

impl std::ops::MulAssign<&CycNumber> for CycNumber {
    fn mul_assign(&mut self, rhs: &CycNumber) {
        *self = &*self * rhs;
    }
}

impl From<i64> for CycNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for CycNumber {
    fn from(q: Rational) -> Self {
        Self::from_rational(&q)
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl CycNumber {
    /// Number of nonzero power-basis terms.
    pub fn term_count(&self) -> usize {
        self.num.iter().filter(|c| !c.is_zero()).count()
    }

    /// True when the printed form needs parentheses as a factor.
    pub fn is_compound(&self) -> bool {
        if self.term_count() > 1 {
            return true;
        }
        // a lone negative term, printed with a leading minus
        self.coeffs().iter().any(|c| c.is_negative())
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = self.conductor;
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let zeta = match k {
                0 => String::new(),
                1 => format!("zeta({n})"),
                _ => format!("zeta({n})^{k}"),
            };
            if k == 0 {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{zeta}")?;
            } else {
                write!(f, "{}*{zeta}", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for CycNumber {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        crate::classify::expr::parse_scalar(s)
    }
}

impl serde::Serialize for CycNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Square root of a rational inside a cyclotomic field, via Gauss sums.
pub fn sqrt_rational(q: &Rational) -> Option<CycNumber> {
    if q.is_zero() {
        return Some(CycNumber::zero());
    }
    let neg = q.is_negative();
    let a = q.abs();
    // a = (num * den) / den^2
    let m = a.numer() * a.denom();
    let (square, free) = split_square(&m);
    let mut out = CycNumber::from_rational(&Rational::new(square, a.denom().clone()));
    let mut sign_flips = neg;
    let mut rest = free;
    let mut p = BigInt::from(2);
    while rest > BigInt::one() {
        if (&rest % &p).is_zero() {
            rest /= &p;
            let pu: u32 = p.to_string().parse().ok()?;
            if pu > 2000 {
                return None;
            }
            let s = if pu == 2 {
                CycNumber::root_of_unity(8, 1) + CycNumber::root_of_unity(8, -1)
            } else {
                // sqrt(p*) with p* = (-1)^((p-1)/2) p
                let mut g = CycNumber::zero();
                for x in 1..pu {
                    let ls = legendre(x as u64, pu as u64);
                    g = g + CycNumber::from_int(ls) * CycNumber::root_of_unity(pu, x as i64);
                }
                if pu % 4 == 3 {
                    sign_flips = !sign_flips;
                }
                g
            };
            out = out * s;
        } else {
            p += 1;
        }
    }
    if sign_flips {
        out = out * CycNumber::root_of_unity(4, 1);
    }
    Some(out)
}

fn split_square(m: &BigInt) -> (BigInt, BigInt) {
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut rest = m.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= &p;
        }
        if e % 2 == 1 {
            free *= &p;
        }
        p += 1;
    }
    free *= rest;
    (square, free)
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else if r == 0 {
        0
    } else {
        -1
    }
}

/// Square root of a scalar when one is found among `r * zeta` forms:
/// the input must be a rational times a root of unity.
pub fn sqrt_cyc(a: &CycNumber) -> Option<CycNumber> {
    let (r, omega_order, omega_exp) = rational_times_root(a)?;
    let s = sqrt_rational(&r)?;
    let w = CycNumber::root_of_unity(2 * omega_order as u32, omega_exp as i64);
    Some(s * w)
}

/// Decompose `a = r * zeta_m^e` with `r` rational, when possible.
pub fn rational_times_root(a: &CycNumber) -> Option<(Rational, u64, u64)> {
    if a.is_zero() {
        return None;
    }
    if let Some(q) = a.to_rational() {
        return Some((q, 1, 0));
    }
    let n = a.conductor() as u64;
    let m = if n % 2 == 1 { 2 * n } else { n };
    for e in 0..m {
        let w = CycNumber::root_of_unity(m as u32, -(e as i64));
        if let Some(q) = (a * &w).to_rational() {
            return Some((q, m, e));
        }
    }
    None
}

/// All `s`-th roots of `a` when `a` is a rational times a root of unity
/// and the rational part has a rational `s`-th root up to sign.
pub fn nth_roots(a: &CycNumber, s: u32) -> Option<Vec<CycNumber>> {
    if a.is_zero() {
        return Some(vec![CycNumber::zero()]);
    }
    let (r, m, e) = rational_times_root(a)?;
    let (r, m, e) = if r.is_negative() {
        // -1 = zeta_2, fold into the root of unity part
        let m2 = num_integer::lcm(m, 2);
        let e2 = (e * (m2 / m) + m2 / 2) % m2;
        (-r, m2, e2)
    } else {
        (r, m, e)
    };
    let base = rational_nth_root(&r, s)?;
    // omega^(1/s) = zeta_{m s}^e
    let ms = (m * s as u64) as u32;
    let w = CycNumber::root_of_unity(ms, e as i64);
    let z = CycNumber::root_of_unity(s, 1);
    let b = CycNumber::from_rational(&base) * w;
    let mut out = Vec::with_capacity(s as usize);
    let mut cur = b;
    for _ in 0..s {
        out.push(cur.clone());
        cur = &cur * &z;
    }
    Some(out)
}

fn rational_nth_root(r: &Rational, s: u32) -> Option<Rational> {
    let a = int_nth_root(r.numer(), s)?;
    let b = int_nth_root(r.denom(), s)?;
    Some(Rational::new(a, b))
}

fn int_nth_root(n: &BigInt, s: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(s);
    if num_traits::pow(r.clone(), s as usize) == *n {
        Some(r)
    } else {
        None
    }
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycNumber {
        CycNumber::root_of_unity(n, k)
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(105).iter().map(|c| c.abs()).max(), Some(2));
    }

    #[test]
    fn zeta3_squared_minus_conj() {
        assert!((z(3, 1).pow(2) - z(3, 1).conj()).is_zero());
    }

    #[test]
    fn zero_sum_of_primitive_fifth_root_powers() {
        let mut s = CycNumber::zero();
        for k in 0..5 {
            s = s + z(5, k);
        }
        assert!(s.is_zero());
        assert_eq!(s.conductor(), 1);
    }

    #[test]
    fn zeta12_cubed_is_i() {
        let v = z(12, 1).pow(3);
        assert_eq!(v.conductor(), 4);
        assert_eq!(v, z(4, 1));
    }

    #[test]
    fn conductor_drops_when_possible() {
        let v = z(12, 4);
        assert_eq!(v.conductor(), 3);
        let w = z(8, 1) + z(8, 7);
        assert_eq!(w.conductor(), 8);
        assert_eq!(&w * &w, CycNumber::from_int(2));
        let u = z(6, 1);
        assert_eq!(u.conductor(), 3);
        assert_eq!(u.pow(6), CycNumber::one());
        assert_eq!(u.pow(3), CycNumber::from_int(-1));
    }

    #[test]
    fn orders() {
        assert_eq!(z(9, 3).order_of().unwrap(), Some(3));
        assert_eq!(z(6, 1).order_of().unwrap(), Some(6));
        assert_eq!(z(15, 1).order_of().unwrap(), Some(15));
        assert_eq!(CycNumber::from_int(-1).order_of().unwrap(), Some(2));
        assert_eq!(CycNumber::from_int(2).order_of().unwrap(), None);
        let v = z(5, 1) + z(5, 4);
        assert_eq!(v.order_of().unwrap(), None);
        assert!(CycNumber::zero().order_of().is_err());
    }

    #[test]
    fn inverse_and_division() {
        let a = z(7, 1) + CycNumber::from_int(3) + z(7, 3);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert!(CycNumber::zero().inv().is_err());
    }

    #[test]
    fn galois_conjugates() {
        let a = z(5, 1) + CycNumber::from_int(2) * z(5, 2);
        let mut prod = CycNumber::one();
        for k in 1..5 {
            prod = prod * a.galois(k);
        }
        assert!(prod.is_rational());
    }

    #[test]
    fn gauss_sums() {
        for q in [-1i64, 2, -2, 3, 5, -7, 12, -15, 50] {
            let r = sqrt_rational(&rat(q, 1)).unwrap();
            assert_eq!(&r * &r, CycNumber::from_int(q), "sqrt {q}");
        }
        let r = sqrt_rational(&rat(-3, 4)).unwrap();
        assert_eq!(&r * &r, CycNumber::from_ratio(-3, 4));
    }

    #[test]
    fn roots_of_root_of_unity() {
        let a = CycNumber::from_int(-8) * z(3, 1);
        let rs = nth_roots(&a, 3).unwrap();
        assert_eq!(rs.len(), 3);
        for r in rs {
            assert_eq!(r.pow(3), a);
        }
    }

    #[test]
    fn display() {
        assert_eq!(z(3, 1).to_string(), "zeta(3)");
        assert_eq!(z(3, 2).to_string(), "-1 - zeta(3)");
        assert_eq!(CycNumber::from_ratio(-3, 2).to_string(), "-3/2");
    }
}
