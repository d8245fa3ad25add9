use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalars::{self, CycNumber, Rational};

/// Dense univariate polynomial, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    c: Vec<CycNumber>,
}

impl UniPoly {
    pub fn new(mut c: Vec<CycNumber>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn zero() -> Self {
        UniPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(CycNumber::one())
    }

    pub fn constant(a: CycNumber) -> Self {
        Self::new(vec![a])
    }

    pub fn x() -> Self {
        Self::new(vec![CycNumber::zero(), CycNumber::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| CycNumber::from_int(v)).collect())
    }

    /// `c * x^k`.
    pub fn monomial(c: CycNumber, k: usize) -> Self {
        let mut v = vec![CycNumber::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[CycNumber] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> CycNumber {
        self.c.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn constant_value(&self) -> Option<CycNumber> {
        if self.is_constant() {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> CycNumber {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.lc().is_one() {
            return self.clone();
        }
        self.scale(&self.lc().inv().unwrap())
    }

    pub fn scale(&self, a: &CycNumber) -> Self {
        Self::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn eval(&self, t: &CycNumber) -> CycNumber {
        let mut acc = CycNumber::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * t) + a;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * &CycNumber::from_int(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
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

    /// `p(a x)`.
    pub fn scale_var(&self, a: &CycNumber) -> Self {
        let mut pw = CycNumber::one();
        let mut out = Vec::with_capacity(self.c.len());
        for x in &self.c {
            out.push(x * &pw);
            pw = &pw * a;
        }
        Self::new(out)
    }

    /// `p(x^m)`.
    pub fn inflate(&self, m: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![CycNumber::zero(); (self.c.len() - 1) * m + 1];
        for (k, a) in self.c.iter().enumerate() {
            v[k * m] = a.clone();
        }
        Self::new(v)
    }

    /// Largest `s` such that `p` is a polynomial in `x^s` (0 for constants).
    pub fn exponent_gcd(&self) -> usize {
        let mut g = 0usize;
        for (k, a) in self.c.iter().enumerate() {
            if !a.is_zero() && k > 0 {
                g = g.gcd(&k);
            }
        }
        g
    }

    /// Inverse of `inflate`, valid when `s` divides every exponent.
    pub fn deflate(&self, s: usize) -> Self {
        Self::new(self.c.iter().step_by(s).cloned().collect())
    }

    /// Composition `p(q(x))`.
    pub fn compose(&self, q: &UniPoly) -> Self {
        let mut acc = Self::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * q) + &Self::constant(a.clone());
        }
        acc
    }

    /// Homogeneous substitution: `sum p_k u^k v^(n-k)` for given `u`, `v`.
    pub fn homogeneous_compose(&self, u: &UniPoly, v: &UniPoly, n: usize) -> Self {
        let mut upow = vec![Self::one()];
        let mut vpow = vec![Self::one()];
        for _ in 0..n {
            upow.push(upow.last().unwrap() * u);
            vpow.push(vpow.last().unwrap() * v);
        }
        let mut acc = Self::zero();
        for (k, a) in self.c.iter().enumerate() {
            if !a.is_zero() {
                acc = &acc + &(&upow[k] * &vpow[n - k]).scale(a);
            }
        }
        acc
    }

    pub fn divrem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        if d.is_zero() {
            return Err(Error::Domain("division by zero polynomial".into()));
        }
        if self.degree() < d.degree() {
            return Ok((Self::zero(), self.clone()));
        }
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        let inv = d.lc().inv()?;
        let mut q = vec![CycNumber::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = &r[i + dd] * &inv;
            if !coef.is_zero() {
                for j in 0..=dd {
                    let t = &coef * &d.c[j];
                    r[i + j] -= &t;
                }
            }
            q[i] = coef;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn div_exact(&self, d: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::NotExact("univariate division has a remainder".into()));
        }
        Ok(q)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        if super::modp::certainly_coprime(self, other) {
            return Self::one();
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).unwrap();
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).unwrap();
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv().unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Yun squarefree decomposition: `(factor, multiplicity)`, monic factors.
    pub fn yun(&self) -> Vec<(UniPoly, u32)> {
        let mut out = Vec::new();
        if self.degree() < 1 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).unwrap();
        let mut c = df.div_exact(&a0).unwrap();
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).unwrap();
            c = d.div_exact(&a).unwrap();
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> UniPoly {
        let mut acc = Self::one();
        for (f, _) in self.yun() {
            acc = &acc * &f;
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.degree() < 1 || self.gcd(&self.derivative()).degree() == 0
    }

    /// Product of the squarefree factors of odd multiplicity.
    pub fn odd_part(&self) -> UniPoly {
        let mut acc = Self::one();
        for (f, k) in self.yun() {
            if k % 2 == 1 {
                acc = &acc * &f;
            }
        }
        acc
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().all(|a| a.is_rational())
    }

    /// Rational roots (each once), for rational coefficients.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        if self.degree() < 1 || !self.is_rational() {
            return out;
        }
        let mut p = self.squarefree_part();
        if p.coeff(0).is_zero() {
            out.push(Rational::zero());
            p = p.div_exact(&Self::x()).unwrap();
        }
        // integer coefficients
        let mut den = BigInt::one();
        for a in &p.c {
            den = den.lcm(a.to_rational().unwrap().denom());
        }
        let ints: Vec<BigInt> = p
            .c
            .iter()
            .map(|a| {
                let q = a.to_rational().unwrap();
                q.numer() * (&den / q.denom())
            })
            .collect();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let mut candidates: Vec<Rational> = Vec::new();
        match (small_divisors(&a0), small_divisors(&an)) {
            (Some(ps), Some(qs)) => {
                for pp in &ps {
                    for qq in &qs {
                        let r = Rational::new(pp.clone(), qq.clone());
                        candidates.push(r.clone());
                        candidates.push(-r);
                    }
                }
            }
            _ => {
                for r in numeric_real_roots(&p) {
                    if let Some(q) = approx_rational(r) {
                        candidates.push(q);
                    }
                }
            }
        }
        candidates.sort();
        candidates.dedup();
        for r in candidates {
            if p.degree() < 1 {
                break;
            }
            let rc = CycNumber::from_rational(&r);
            if p.eval(&rc).is_zero() {
                out.push(r);
                let lin = Self::new(vec![-rc, CycNumber::one()]);
                p = p.div_exact(&lin).unwrap();
            }
        }
        out.sort();
        out
    }

    /// Roots found inside cyclotomic fields, each listed once, with the
    /// cofactor whose roots were not found.
    pub fn cyclotomic_roots(&self) -> (Vec<CycNumber>, UniPoly) {
        let mut roots = Vec::new();
        if self.degree() < 1 {
            return (roots, self.clone());
        }
        let mut p = self.squarefree_part();
        if p.coeff(0).is_zero() {
            roots.push(CycNumber::zero());
            p = p.div_exact(&Self::x()).unwrap();
        }
        // binomial-like shapes first: roots of p(x) = q(x^s) are s-th roots of roots of q
        let s0 = p.exponent_gcd();
        if p.degree() >= 1 && s0 > 1 {
            let (gr, _) = p.deflate(s0).cyclotomic_roots();
            for r in gr {
                for t in scalars::nth_roots(&r, s0 as u32).unwrap_or_default() {
                    if p.degree() >= 1 && p.eval(&t).is_zero() {
                        roots.push(t.clone());
                        p = p.div_exact(&Self::new(vec![-t, CycNumber::one()])).unwrap();
                    }
                }
            }
        }
        for r in p.rational_roots() {
            let rc = CycNumber::from_rational(&r);
            roots.push(rc.clone());
            p = p
                .div_exact(&Self::new(vec![-rc, CycNumber::one()]))
                .unwrap();
        }
        if p.degree() >= 1 {
            let s = p.exponent_gcd();
            if s > 1 {
                let g = p.deflate(s);
                let (gr, _) = g.cyclotomic_roots();
                for r in gr {
                    if let Some(rs) = scalars::nth_roots(&r, s as u32) {
                        for t in rs {
                            if p.eval(&t).is_zero() {
                                roots.push(t.clone());
                                p = p
                                    .div_exact(&Self::new(vec![-t, CycNumber::one()]))
                                    .unwrap();
                            }
                        }
                    }
                }
            } else if p.degree() == 1 {
                let t = -(&p.coeff(0) / &p.coeff(1));
                roots.push(t);
                p = Self::one();
            } else if p.degree() == 2 {
                // quadratic formula when the discriminant has a known root
                let (a, b, c) = (p.coeff(2), p.coeff(1), p.coeff(0));
                let disc = &(&b * &b) - &(&CycNumber::from_int(4) * &(&a * &c));
                if let Some(s) = scalars::sqrt_cyc(&disc) {
                    let two_a = &CycNumber::from_int(2) * &a;
                    for t in [(&(-&b) + &s) / &two_a, (&(-&b) - &s) / &two_a] {
                        if p.degree() >= 1 && p.eval(&t).is_zero() {
                            roots.push(t.clone());
                            p = p
                                .div_exact(&Self::new(vec![-t, CycNumber::one()]))
                                .unwrap();
                        }
                    }
                }
            }
        }
        if p.degree() >= 1 && p.is_rational() {
            // cyclotomic factors of rational polynomials
            let bound = 4 * p.degree() as u32 + 4;
            for m in 3..=bound {
                if p.degree() < 1 {
                    break;
                }
                if m % 4 == 2 || scalars::totient(m) as i64 > p.degree() {
                    continue;
                }
                let phi = UniPoly::from_ints(&scalars::cyclotomic_poly(m));
                if p.divrem(&phi).unwrap().1.is_zero() {
                    let mut found = Vec::new();
                    for k in 1..m {
                        if k.gcd(&m) == 1 {
                            found.push(CycNumber::root_of_unity(m, k as i64));
                        }
                    }
                    p = p.div_exact(&phi).unwrap();
                    roots.extend(found);
                }
            }
        }
        (roots, p)
    }
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let v = n.to_u64()?;
    if v == 0 || v > 1_000_000_000_000 {
        return None;
    }
    Some(scalars::divisors(v).into_iter().map(BigInt::from).collect())
}

fn approx_rational(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    // continued fraction with bounded denominators
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if k1 > 1_000_000_000 {
            break;
        }
        if ((h1 as f64) / (k1 as f64) - x).abs() < 1e-9 * (1.0 + x.abs()) {
            return Some(Rational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = v - a;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if k1 != 0 {
        Some(Rational::new(BigInt::from(h1), BigInt::from(k1)))
    } else {
        None
    }
}

// Durand-Kerner iteration, returning approximately real roots.
fn numeric_real_roots(p: &UniPoly) -> Vec<f64> {
    let n = p.degree() as usize;
    if n == 0 {
        return Vec::new();
    }
    let coeffs: Vec<(f64, f64)> = p.c.iter().map(|a| a.to_f64_pair()).collect();
    let lead = coeffs[n];
    let div = |a: (f64, f64), b: (f64, f64)| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let monic: Vec<(f64, f64)> = coeffs.iter().map(|&a| div(a, lead)).collect();
    let eval = |z: (f64, f64)| {
        let mut acc = (0.0, 0.0);
        for a in monic.iter().rev() {
            acc = mul(acc, z);
            acc = (acc.0 + a.0, acc.1 + a.1);
        }
        acc
    };
    let radius = 1.0 + monic.iter().take(n).map(|a| (a.0 * a.0 + a.1 * a.1).sqrt()).fold(0.0, f64::max);
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64;
            (radius * 0.5 * ang.cos(), radius * 0.5 * ang.sin())
        })
        .collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = (1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den = mul(den, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let step = div(eval(z[i]), den);
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
            delta = delta.max(step.0.abs() + step.1.abs());
        }
        if delta < 1e-14 {
            break;
        }
    }
    z.into_iter()
        .filter(|w| w.1.abs() < 1e-7 * (1.0 + w.0.abs()))
        .map(|w| w.0)
        .collect()
}

impl std::ops::Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.c.len().max(rhs.c.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            v.push(match (self.c.get(k), rhs.c.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        UniPoly::new(v)
    }
}

impl std::ops::Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &(-rhs)
    }
}

impl std::ops::Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        if let Some(a) = rhs.constant_value() {
            return self.scale(&a);
        }
        if let Some(a) = self.constant_value() {
            return rhs.scale(&a);
        }
        let mut v = vec![CycNumber::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += &(a * b);
                }
            }
        }
        UniPoly::new(v)
    }
}

impl std::ops::Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.c.iter().map(|a| -a).collect())
    }
}

impl std::ops::Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

impl std::ops::Add for UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: UniPoly) -> UniPoly {
        &self + &rhs
    }
}

impl std::ops::Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: UniPoly) -> UniPoly {
        &self - &rhs
    }
}

impl std::ops::Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: UniPoly) -> UniPoly {
        &self * &rhs
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::MultiPoly::from_unipoly(self, "x"))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_division() {
        let a = UniPoly::from_ints(&[-1, 0, 1]);
        let b = UniPoly::from_ints(&[1, 1]);
        assert_eq!(a.gcd(&b), b);
        let (q, r) = a.divrem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, UniPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn yun_factorization() {
        let f = &UniPoly::from_ints(&[1, 1]).pow(3) * &UniPoly::from_ints(&[-2, 1]);
        let y = f.yun();
        assert_eq!(y, vec![(UniPoly::from_ints(&[-2, 1]), 1), (UniPoly::from_ints(&[1, 1]), 3)]);
        assert_eq!(f.squarefree_part(), UniPoly::from_ints(&[-2, -1, 1]));
    }

    #[test]
    fn roots_found() {
        let f = &UniPoly::from_ints(&[-1, 0, 0, 0, 1]) * &UniPoly::from_ints(&[3, 2]);
        let (r, rest) = f.cyclotomic_roots();
        assert_eq!(r.len(), 5);
        assert!(rest.degree() < 1);
        for t in r {
            assert!(f.eval(&t).is_zero());
        }
        let g = UniPoly::from_ints(&[1, 1, 1, 1, 1]);
        let (r, rest) = g.cyclotomic_roots();
        assert_eq!(r.len(), 4);
        assert!(rest.degree() < 1);
    }

    #[test]
    fn rational_roots_large_constant() {
        let f = &UniPoly::from_ints(&[-1_000_000_007, 1]) * &UniPoly::from_ints(&[5, 3]);
        let f = &f * &UniPoly::from_ints(&[1_000_003, 0, 1]);
        let r = f.rational_roots();
        assert_eq!(r, vec![crate::scalars::rat(-5, 3), crate::scalars::rat(1_000_000_007, 1)]);
    }
}
