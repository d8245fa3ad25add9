use std::fmt;

use super::{MultiPoly, UniPoly};
use crate::error::{Error, Result};
use crate::scalars::CycNumber;

/// Univariate rational function in `x`, reduced with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: UniPoly,
    den: UniPoly,
}

impl RatFunc {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = if den.degree() > 0 { num.gcd(&den) } else { UniPoly::one() };
        let (mut n, mut d) = if g.degree() > 0 {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        } else {
            (num, den)
        };
        let lc = d.lc();
        if !lc.is_one() {
            let inv = lc.inv()?;
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(RatFunc { num: n, den: d })
    }

    pub fn zero() -> Self {
        RatFunc {
            num: UniPoly::zero(),
            den: UniPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(CycNumber::one())
    }

    pub fn constant(c: CycNumber) -> Self {
        RatFunc {
            num: UniPoly::constant(c),
            den: UniPoly::one(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(CycNumber::from_int(n))
    }

    pub fn x() -> Self {
        Self::from_poly(UniPoly::x())
    }

    pub fn from_poly(p: UniPoly) -> Self {
        RatFunc {
            num: p,
            den: UniPoly::one(),
        }
    }

    /// From a polynomial in `x` (MultiPoly accessor).
    pub fn from_multipoly(num: &MultiPoly, den: &MultiPoly) -> Result<Self> {
        Self::new(num.to_unipoly("x")?, den.to_unipoly("x")?)
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn numerator(&self) -> MultiPoly {
        MultiPoly::from_unipoly(&self.num, "x")
    }

    pub fn denominator(&self) -> MultiPoly {
        MultiPoly::from_unipoly(&self.den, "x")
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.degree() == 0 && self.num == self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree() < 1 && self.den.degree() == 0
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == 0
    }

    pub fn constant_value(&self) -> Option<CycNumber> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// `max(deg num, deg den)`.
    pub fn degree(&self) -> i64 {
        self.num.degree().max(self.den.degree())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero rational function".into()));
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        Ok(RatFunc {
            num: self.num.pow(e as u32),
            den: self.den.pow(e as u32),
        })
    }

    pub fn scale(&self, c: &CycNumber) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn eval(&self, t: &CycNumber) -> Result<CycNumber> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::Domain("pole at evaluation point".into()));
        }
        Ok(&self.num.eval(t) / &d)
    }

    /// `f(a x)`.
    pub fn scale_var(&self, a: &CycNumber) -> Self {
        Self::new(self.num.scale_var(a), self.den.scale_var(a)).unwrap()
    }

    /// `f(x^m)`.
    pub fn inflate(&self, m: usize) -> Self {
        RatFunc {
            num: self.num.inflate(m),
            den: self.den.inflate(m),
        }
    }

    /// Composition `f(g(x))`.
    pub fn compose(&self, g: &RatFunc) -> Result<Self> {
        let n = self.num.degree().max(self.den.degree()).max(0) as usize;
        let a = self.num.homogeneous_compose(&g.num, &g.den, n);
        let b = self.den.homogeneous_compose(&g.num, &g.den, n);
        Self::new(a, b)
    }

    /// `f((a x + b)/(c x + d))`.
    pub fn mobius_substitute(&self, m: &[CycNumber; 4]) -> Result<Self> {
        let u = UniPoly::new(vec![m[1].clone(), m[0].clone()]);
        let v = UniPoly::new(vec![m[3].clone(), m[2].clone()]);
        let n = self.num.degree().max(self.den.degree()).max(0) as usize;
        Self::new(
            self.num.homogeneous_compose(&u, &v, n),
            self.den.homogeneous_compose(&u, &v, n),
        )
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den).unwrap()
    }
}

impl std::ops::Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl std::ops::Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl std::ops::Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl std::ops::Div<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self * &rhs.inv().expect("division by zero rational function")
    }
}

impl std::ops::Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl std::ops::Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.numerator();
        if self.is_polynomial() {
            // denominator is the constant 1
            return write!(f, "{n}");
        }
        let d = self.denominator();
        let wrap = |p: &MultiPoly| {
            if p.num_terms() > 1 || p.constant_value().is_some_and(|c| c.is_compound()) {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&n), wrap(&d))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for RatFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
