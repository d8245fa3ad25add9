//! Polynomials over cyclotomic scalars: sparse multivariate, dense
//! univariate, and univariate rational functions.

pub mod elim;
mod modp;
mod multipoly;
mod ratfunc;
mod unipoly;

pub use multipoly::{bareiss_det, var_rank, Mono, MultiPoly};
pub use ratfunc::RatFunc;
pub use unipoly::UniPoly;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::expr::parse_poly;
    use crate::scalars::CycNumber;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        assert_eq!(p("x^2 - y^2").gcd(&p("x^2 + 2*x*y + y^2")), p("x + y"));
    }

    #[test]
    fn exact_division() {
        assert_eq!(p("x^3 - y^3").div_exact(&p("x - y")).unwrap(), p("x^2 + x*y + y^2"));
        assert!(p("x^3 + 1").div_exact(&p("x - 1")).is_err());
    }

    #[test]
    fn multivariate_gcd_cases() {
        let g = p("x*y - z^2 + 3*x");
        let a = &g * &p("x + y + z");
        let b = &g * &p("x - 2*y + z^3");
        assert_eq!(a.gcd(&b), g.monic());
        let h = p("x1*y2 - x2*y1");
        let a = &h * &p("x1^2*y1 + x2^2*y2");
        let b = &h * &p("x1*y1 - 3*x2*y2");
        assert_eq!(a.gcd(&b), h.monic());
        assert!(p("x^2 + 1").gcd(&p("y^3 - 2")).is_one());
        let c = p("(1 + zeta(3))*x*y + zeta(3)");
        assert_eq!((&c * &p("x - y")).gcd(&(&c * &p("x + y"))), c.monic());
    }

    #[test]
    fn squarefree() {
        let f = &p("x - y").pow(2) * &p("x + z");
        let parts = f.squarefree_factors();
        assert_eq!(parts.len(), 2);
        assert_eq!(f.squarefree_part(), p("(x - y)*(x + z)").monic());
        let g = p("x^2*y^3");
        assert_eq!(g.squarefree_part(), p("x*y"));
    }

    #[test]
    fn resultants() {
        assert_eq!(p("x - 1").resultant(&p("x + 1"), "x"), p("2"));
        let f = p("x^3 + a*x + b");
        let r = f.resultant(&f.derivative("x"), "x");
        assert_eq!(r, p("4*a^3 + 27*b^2"));
        assert_eq!(p("x^2 + 1").resultant(&p("x - 1"), "x"), p("2"));
    }

    #[test]
    fn substitution() {
        let f = p("x^2 + y");
        let g = f.substitute(&[("x", p("y + 1")), ("y", p("x"))]);
        assert_eq!(g, p("y^2 + 2*y + 1 + x"));
        assert_eq!(
            p("x*y + zeta(3)").eval(&[("x", CycNumber::from_int(2)), ("y", CycNumber::from_int(3))]).unwrap(),
            CycNumber::from_int(6) + CycNumber::root_of_unity(3, 1)
        );
    }

    #[test]
    fn variable_order_and_trim() {
        let f = p("y1 + x + w - x + z2");
        assert_eq!(f.vars(), &["w".to_string(), "y1".to_string(), "z2".to_string()]);
        assert_eq!(p("x*y - y*x + 3").vars().len(), 0);
        assert_eq!(p("x^2*y + x*y^2 + x^3").to_string(), "x^3 + x^2*y + x*y^2");
    }
}
