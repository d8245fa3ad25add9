//! Reduction of cyclotomic polynomials to `F_p[x]` with `p = 1 mod N`, used
//! as a fast coprimality test before exact Euclid.

use std::cell::RefCell;
use std::collections::HashMap;

use super::UniPoly;
use crate::scalars::{mulmod, powmod, CycNumber};

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

thread_local! {
    static PRIMES: RefCell<HashMap<u64, (u64, u64)>> = RefCell::new(HashMap::new());
}

/// A prime `p = 1 mod n` near `2^61` and an element of order exactly `n`.
pub(crate) fn prime_and_root(n: u64) -> (u64, u64) {
    if let Some(v) = PRIMES.with(|c| c.borrow().get(&n).copied()) {
        return v;
    }
    let mut p = ((1u64 << 61) / n) * n + 1;
    while !is_prime(p) {
        p -= n;
    }
    let fs = prime_factors(n);
    let w = (2..)
        .map(|g| powmod(g, (p - 1) / n, p))
        .find(|&w| fs.iter().all(|&q| powmod(w, n / q, p) != 1))
        .unwrap();
    PRIMES.with(|c| c.borrow_mut().insert(n, (p, w)));
    (p, w)
}

fn reduce(f: &UniPoly, n: u64, p: u64, w: u64) -> Option<Vec<u64>> {
    f.coeffs()
        .iter()
        .map(|c| c.reduce_mod(p, powmod(w, n / c.conductor() as u64, p)))
        .collect()
}

fn degree_of_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = powmod(*b.last().unwrap(), p - 2, p);
        while a.len() >= b.len() {
            let q = mulmod(*a.last().unwrap(), inv, p);
            let off = a.len() - b.len();
            for (i, &bi) in b.iter().enumerate() {
                a[off + i] = (a[off + i] + p - mulmod(q, bi, p)) % p;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True when `a` and `b` are certainly coprime: their images mod a prime
/// that keeps both leading coefficients have a constant gcd.
pub(crate) fn certainly_coprime(a: &UniPoly, b: &UniPoly) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let n = a
        .coeffs()
        .iter()
        .chain(b.coeffs())
        .fold(1u64, |l, c| num_integer::lcm(l, c.conductor() as u64));
    let (p, w) = prime_and_root(n);
    let (Some(ra), Some(rb)) = (reduce(a, n, p, w), reduce(b, n, p, w)) else {
        return false;
    };
    if ra.last() == Some(&0) || rb.last() == Some(&0) {
        return false;
    }
    degree_of_gcd(ra, rb, p) == 0
}

/// Multivariate version over exponent vectors of a common variable list.
/// For each variable the others are specialised at fixed points mod p; a
/// constant image gcd with both degrees kept means that variable does not
/// occur in the gcd.
pub(crate) fn certainly_coprime_multi(
    a: &[(&[u32], &CycNumber)],
    b: &[(&[u32], &CycNumber)],
    nvars: usize,
) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    let n = a
        .iter()
        .chain(b)
        .fold(1u64, |l, (_, c)| num_integer::lcm(l, c.conductor() as u64));
    let (p, w) = prime_and_root(n);
    let mut ra = Vec::with_capacity(a.len());
    let mut rb = Vec::with_capacity(b.len());
    for (src, dst) in [(a, &mut ra), (b, &mut rb)] {
        for (m, c) in src {
            let Some(r) = c.reduce_mod(p, powmod(w, n / c.conductor() as u64, p)) else {
                return false;
            };
            dst.push((*m, r));
        }
    }
    let points: Vec<u64> = (0..nvars as u64).map(|j| 1_000_003 + 7919 * j).collect();
    let image = |terms: &[(&[u32], u64)], v: usize| -> (Vec<u64>, usize) {
        let deg = terms.iter().map(|(m, _)| m[v] as usize).max().unwrap();
        let mut out = vec![0u64; deg + 1];
        for (m, c) in terms {
            let mut t = *c;
            for (j, &e) in m.iter().enumerate() {
                if j != v && e > 0 {
                    t = mulmod(t, powmod(points[j], e as u64, p), p);
                }
            }
            let k = m[v] as usize;
            out[k] = (out[k] + t) % p;
        }
        (out, deg)
    };
    (0..nvars).all(|v| {
        let (ia, da) = image(&ra, v);
        let (ib, db) = image(&rb, v);
        ia[da] != 0 && ib[db] != 0 && degree_of_gcd(ia, ib, p) == 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::expr::parse_unipoly;

    #[test]
    fn coprimality() {
        let u = |s: &str| parse_unipoly(s).unwrap();
        assert!(certainly_coprime(&u("x^2 + 1"), &u("x - 1")));
        assert!(!certainly_coprime(&u("x^2 - 1"), &u("x - 1")));
        assert!(!certainly_coprime(&u("x^2 + 1"), &u("x - zeta(4)")));
        assert!(certainly_coprime(&u("x^2 + 1"), &u("x - zeta(8)")));
        let (p, w) = prime_and_root(24);
        assert_eq!(p % 24, 1);
        assert_eq!(powmod(w, 24, p), 1);
        assert_ne!(powmod(w, 12, p), 1);
        assert_ne!(powmod(w, 8, p), 1);
    }

    #[test]
    fn multivariate_coprimality() {
        use crate::classify::expr::parse_poly;
        use crate::polys::MultiPoly;
        let check = |f: &str, g: &str| {
            let (f, g) = (parse_poly(f).unwrap(), parse_poly(g).unwrap());
            let (vars, f, g) = MultiPoly::aligned(&f, &g);
            let tf: Vec<_> = f.terms().map(|(m, c)| (m.0.as_slice(), c)).collect();
            let tg: Vec<_> = g.terms().map(|(m, c)| (m.0.as_slice(), c)).collect();
            certainly_coprime_multi(&tf, &tg, vars.len())
        };
        assert!(check("x^2 + y^2 - z^2", "x*y - z^2"));
        assert!(!check("x^2 - y^2", "x*z + y*z"));
        assert!(!check("x*y + z", "x*y*y + y*z"));
    }
}
