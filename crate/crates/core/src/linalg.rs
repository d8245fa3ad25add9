//! Small dense linear algebra: null spaces over cyclotomic fields and
//! Smith invariant factors of integer matrices.

use crate::scalars::CycNumber;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<CycNumber>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A basis of `{v : m v = 0}` for a matrix with `cols` columns.
pub fn nullspace(m: &[Vec<CycNumber>], cols: usize) -> Vec<Vec<CycNumber>> {
    let mut a: Vec<Vec<CycNumber>> = m.to_vec();
    let pivots = rref(&mut a);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![CycNumber::zero(); cols];
        v[free] = CycNumber::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&a[r][free];
        }
        out.push(v);
    }
    out
}

pub fn rank(m: &[Vec<CycNumber>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Nonzero invariant factors `d1 | d2 | ...` of an integer matrix.
pub fn smith_invariants(m: &[Vec<i64>]) -> Vec<i64> {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        let mut done = true;
        let p = a[t][t];
        for i in t + 1..rows {
            let q = a[i][t].div_euclid(p);
            if q != 0 {
                for j in t..cols {
                    a[i][j] -= q * a[t][j];
                }
            }
            if a[i][t] != 0 {
                done = false;
            }
        }
        for j in t + 1..cols {
            let q = a[t][j].div_euclid(p);
            if q != 0 {
                for i in t..rows {
                    a[i][j] -= q * a[i][t];
                }
            }
            if a[t][j] != 0 {
                done = false;
            }
        }
        if !done {
            continue;
        }
        // divisibility of the rest by the pivot
        let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % p != 0);
        if let Some((i, _)) = bad {
            for j in t..cols {
                a[t][j] += a[i][j];
            }
            continue;
        }
        out.push(p.abs() as i64);
        t += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> CycNumber {
        CycNumber::from_int(n)
    }

    #[test]
    fn null_spaces() {
        let m = vec![vec![c(1), c(2), c(3)], vec![c(2), c(4), c(6)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &m {
                let s = r.iter().zip(v).fold(CycNumber::zero(), |acc, (a, b)| &acc + &(a * b));
                assert!(s.is_zero());
            }
        }
        assert_eq!(rank(&m), 1);
        let z = CycNumber::root_of_unity(3, 1);
        let m = vec![vec![z.clone(), c(1)], vec![c(1), z.pow(2)]];
        assert_eq!(nullspace(&m, 2).len(), 1);
    }

    #[test]
    fn smith() {
        assert_eq!(smith_invariants(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
        assert_eq!(smith_invariants(&[vec![6, 0], vec![0, 4]]), vec![2, 12]);
        assert_eq!(smith_invariants(&[vec![0, 0]]), Vec::<i64>::new());
    }
}
