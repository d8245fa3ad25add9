//! The lattice `Z^{1,r}` of a plane blown up in `r` points: exceptional
//! classes, Weyl reflections, invariant sublattices and orbits.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::smith_invariants;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PicLattice {
    pub r: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DivisorClass {
    pub coords: Vec<i64>,
}

impl DivisorClass {
    pub fn new(coords: Vec<i64>) -> Self {
        DivisorClass { coords }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn add(&self, o: &DivisorClass) -> DivisorClass {
        DivisorClass::new(self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> DivisorClass {
        DivisorClass::new(self.coords.iter().map(|a| a * k).collect())
    }
}

impl PicLattice {
    pub fn new(r: usize) -> Result<Self> {
        if !(1..=8).contains(&r) {
            return Err(Error::Domain(format!("r = {r} outside 1..8")));
        }
        Ok(PicLattice { r })
    }

    pub fn dim(&self) -> usize {
        self.r + 1
    }

    /// The pull-back of a line.
    pub fn h(&self) -> DivisorClass {
        self.e(0)
    }

    /// `e(0)` is the line class, `e(i)` for `i >= 1` the exceptional curve `E_i`.
    pub fn e(&self, i: usize) -> DivisorClass {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        DivisorClass::new(v)
    }

    /// Canonical class `-3H + E_1 + ... + E_r`.
    pub fn k(&self) -> DivisorClass {
        let mut v = vec![1; self.dim()];
        v[0] = -3;
        DivisorClass::new(v)
    }

    pub fn degree(&self) -> i64 {
        9 - self.r as i64
    }

    pub fn inner(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
        if a.rank() != self.dim() || b.rank() != self.dim() {
            return Err(Error::Domain("rank mismatch".into()));
        }
        Ok(form(a, b))
    }

    pub fn class(&self, coords: Vec<i64>) -> Result<DivisorClass> {
        if coords.len() != self.dim() {
            return Err(Error::Domain(format!("expected {} coordinates", self.dim())));
        }
        Ok(DivisorClass::new(coords))
    }

    /// `e_i - e_{i+1}` for `1 <= i < r`, and `e_0 - e_1 - e_2 - e_3` for `i = 0`.
    pub fn simple_root(&self, i: usize) -> Result<DivisorClass> {
        let mut v = vec![0; self.dim()];
        if i == 0 {
            if self.r < 3 {
                return Err(Error::Domain("s0 needs r >= 3".into()));
            }
            v[..4].copy_from_slice(&[1, -1, -1, -1]);
        } else if i < self.r {
            v[i] = 1;
            v[i + 1] = -1;
        } else {
            return Err(Error::Domain(format!("no simple root s{i} for r = {}", self.r)));
        }
        Ok(DivisorClass::new(v))
    }
}

fn form(a: &DivisorClass, b: &DivisorClass) -> i64 {
    a.coords[0] * b.coords[0] - a.coords[1..].iter().zip(&b.coords[1..]).map(|(x, y)| x * y).sum::<i64>()
}

pub fn inner(a: &DivisorClass, b: &DivisorClass, l: &PicLattice) -> Result<i64> {
    l.inner(a, b)
}

/// All `D` with `D.D = -1` and `D.K = -1`.
pub fn exceptional_classes(l: &PicLattice) -> Vec<DivisorClass> {
    let mut out = Vec::new();
    // sum d_i = 1 - 3 d0 and sum d_i^2 = d0^2 + 1
    for d0 in -6i64..=6 {
        let mut cur = vec![d0];
        search(l.r, 1 - 3 * d0, d0 * d0 + 1, &mut cur, &mut out);
    }
    out.sort();
    out
}

fn search(r: usize, sum: i64, sq: i64, cur: &mut Vec<i64>, out: &mut Vec<DivisorClass>) {
    let left = r + 1 - cur.len();
    if left == 0 {
        if sum == 0 && sq == 0 {
            out.push(DivisorClass::new(cur.clone()));
        }
        return;
    }
    // Cauchy-Schwarz on the remaining coordinates
    if sum * sum > left as i64 * sq {
        return;
    }
    let b = (sq as f64).sqrt() as i64 + 1;
    for d in -b..=b {
        if d * d > sq {
            continue;
        }
        cur.push(d);
        search(r, sum - d, sq - d * d, cur, out);
        cur.pop();
    }
}

/// An integer matrix acting on column vectors, preserving the form and `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticeIsometry {
    pub matrix: Vec<Vec<i64>>,
}

impl LatticeIsometry {
    pub fn new(matrix: Vec<Vec<i64>>, l: &PicLattice) -> Result<Self> {
        let n = l.dim();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Domain(format!("expected a {n}x{n} matrix")));
        }
        let g = LatticeIsometry { matrix };
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (g.apply(&l.e(i)), g.apply(&l.e(j)));
                if form(&a, &b) != form(&l.e(i), &l.e(j)) {
                    return Err(Error::Domain("matrix does not preserve the intersection form".into()));
                }
            }
        }
        if g.apply(&l.k()) != l.k() {
            return Err(Error::Domain("matrix does not fix K".into()));
        }
        Ok(g)
    }

    pub fn identity(l: &PicLattice) -> Self {
        let n = l.dim();
        LatticeIsometry {
            matrix: (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, d: &DivisorClass) -> DivisorClass {
        DivisorClass::new(
            self.matrix
                .iter()
                .map(|row| row.iter().zip(&d.coords).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// `self o other`.
    pub fn compose(&self, o: &LatticeIsometry) -> LatticeIsometry {
        let n = self.dim();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| self.matrix[i][k] * o.matrix[k][j]).sum()).collect())
            .collect();
        LatticeIsometry { matrix }
    }

    /// `J M^T J`.
    pub fn inverse(&self) -> LatticeIsometry {
        let n = self.dim();
        let s = |i: usize| if i == 0 { 1 } else { -1 };
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| s(i) * self.matrix[j][i] * s(j)).collect())
            .collect();
        LatticeIsometry { matrix }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == (i == j) as i64))
    }

    pub fn order(&self, cap: u64) -> Option<u64> {
        let mut p = self.clone();
        for k in 1..=cap {
            if p.is_identity() {
                return Some(k);
            }
            p = self.compose(&p);
        }
        None
    }
}

/// `x -> x + (x.root) root`.
pub fn weyl_reflection(root: &DivisorClass, l: &PicLattice) -> Result<LatticeIsometry> {
    if l.inner(root, root)? != -2 || l.inner(root, &l.k())? != 0 {
        return Err(Error::Domain("not a root: need root.root = -2 and root.K = 0".into()));
    }
    let n = l.dim();
    let jr: Vec<i64> = (0..n).map(|j| if j == 0 { root.coords[0] } else { -root.coords[j] }).collect();
    let matrix = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64 + root.coords[i] * jr[j]).collect())
        .collect();
    Ok(LatticeIsometry { matrix })
}

/// Product of simple reflections written left to right, the rightmost
/// acting first, e.g. `s1 s2 s0`.
pub fn weyl_word(word: &str, l: &PicLattice) -> Result<LatticeIsometry> {
    let mut g = LatticeIsometry::identity(l);
    for tok in word.split_whitespace() {
        let i: usize = tok
            .strip_prefix('s')
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad Weyl letter {tok:?}")))?;
        g = g.compose(&weyl_reflection(&l.simple_root(i)?, l)?);
    }
    Ok(g)
}

/// Rank of the sublattice fixed by every generator.
pub fn invariant_rank(gens: &[LatticeIsometry], l: &PicLattice) -> usize {
    let n = l.dim();
    let mut rows = Vec::new();
    for g in gens {
        for i in 0..n {
            rows.push((0..n).map(|j| g.matrix[i][j] - (i == j) as i64).collect::<Vec<_>>());
        }
    }
    if rows.is_empty() {
        return n;
    }
    n - smith_invariants(&rows).len()
}

/// Orbits of the group generated by `gens` on `classes`, in order of
/// first appearance.
pub fn orbits(gens: &[LatticeIsometry], classes: &[DivisorClass]) -> Result<Vec<Vec<DivisorClass>>> {
    let set: HashSet<&DivisorClass> = classes.iter().collect();
    for g in gens {
        for c in classes {
            if !set.contains(&g.apply(c)) {
                return Err(Error::Domain("isometry does not permute the given classes".into()));
            }
        }
    }
    let mut seen: HashSet<DivisorClass> = HashSet::new();
    let mut out = Vec::new();
    for c in classes {
        if seen.contains(c) {
            continue;
        }
        let mut orbit = vec![c.clone()];
        seen.insert(c.clone());
        let mut i = 0;
        while i < orbit.len() {
            for g in gens {
                let d = g.apply(&orbit[i]);
                if seen.insert(d.clone()) {
                    orbit.push(d);
                }
            }
            i += 1;
        }
        out.push(orbit);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitInfo {
    pub size: usize,
    /// Orbit sum equals `a K`.
    pub a: Option<i64>,
    pub divisible_by_degree: bool,
    pub classes: Vec<DivisorClass>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitReport {
    pub r: usize,
    pub degree: i64,
    pub invariant_rank: usize,
    pub hypothesis_met: bool,
    pub orbits: Vec<OrbitInfo>,
    /// Group order when it was enumerated.
    pub group_order: Option<u64>,
    /// Degree divides the group order; asserted only for cyclic groups.
    pub order_divisible: Option<bool>,
    pub passed: bool,
}

const GROUP_CAP: usize = 20_000;

fn group_order(gens: &[LatticeIsometry], l: &PicLattice) -> Option<u64> {
    let mut seen: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    let id = LatticeIsometry::identity(l);
    seen.insert(id.matrix.clone());
    let mut frontier = vec![id];
    while let Some(h) = frontier.pop() {
        for g in gens {
            let n = g.compose(&h);
            if seen.insert(n.matrix.clone()) {
                if seen.len() > GROUP_CAP {
                    return None;
                }
                frontier.push(n);
            }
        }
    }
    Some(seen.len() as u64)
}

/// Orbit sizes on exceptional classes are multiples of `K^2` when the
/// invariant rank is one, and each orbit sums to a negative integer
/// multiple of `K`.
pub fn orbit_criteria(gens: &[LatticeIsometry], l: &PicLattice) -> Result<OrbitReport> {
    for g in gens {
        LatticeIsometry::new(g.matrix.clone(), l)?;
    }
    let rank = invariant_rank(gens, l);
    let degree = l.degree();
    let mut report = OrbitReport {
        r: l.r,
        degree,
        invariant_rank: rank,
        hypothesis_met: rank == 1,
        orbits: vec![],
        group_order: group_order(gens, l),
        order_divisible: None,
        passed: false,
    };
    if rank != 1 {
        return Ok(report);
    }
    let k = l.k();
    let mut ok = true;
    for orbit in orbits(gens, &exceptional_classes(l))? {
        let sum = orbit.iter().skip(1).fold(orbit[0].clone(), |acc, c| acc.add(c));
        let (q, rem) = form(&sum, &k).div_rem(&degree);
        let a = (rem == 0 && k.scale(q) == sum).then_some(q);
        let divisible = orbit.len() as i64 % degree == 0;
        ok &= divisible && a.is_some_and(|a| a < 0);
        report.orbits.push(OrbitInfo {
            size: orbit.len(),
            a,
            divisible_by_degree: divisible,
            classes: orbit,
        });
    }
    if let (Some(n), true) = (report.group_order, gens.len() == 1) {
        let d = n as i64 % degree == 0;
        report.order_divisible = Some(d);
        ok &= d;
    }
    report.passed = ok;
    Ok(report)
}

/// Orbit-size histogram, largest first.
pub fn orbit_sizes(orbits: &[Vec<DivisorClass>]) -> Vec<usize> {
    let mut v: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
    v.sort_by(|a, b| b.cmp(a));
    v
}

pub fn orbit_size_counts(orbits: &[Vec<DivisorClass>]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for o in orbits {
        *m.entry(o.len()).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(r: usize) -> PicLattice {
        PicLattice::new(r).unwrap()
    }

    #[test]
    fn products() {
        let l = lat(6);
        assert_eq!(l.inner(&l.k(), &l.k()).unwrap(), 3);
        assert_eq!(l.inner(&l.e(1), &l.e(1)).unwrap(), -1);
        assert_eq!(l.inner(&l.k(), &l.e(1)).unwrap(), -1);
        assert!(l.inner(&lat(5).k(), &l.k()).is_err());
        for r in 1..=8 {
            let l = lat(r);
            assert_eq!(l.inner(&l.k(), &l.k()).unwrap(), 9 - r as i64);
        }
        assert!(PicLattice::new(0).is_err() && PicLattice::new(9).is_err());
    }

    #[test]
    fn exceptional_counts() {
        let counts: Vec<usize> = (1..=8).map(|r| exceptional_classes(&lat(r)).len()).collect();
        assert_eq!(counts, vec![1, 3, 6, 10, 16, 27, 56, 240]);
        let l = lat(8);
        for d in exceptional_classes(&l) {
            assert_eq!(l.inner(&d, &l.k().add(&d)).unwrap(), -2);
        }
        assert_eq!(exceptional_classes(&lat(1)), vec![lat(1).e(1)]);
    }

    #[test]
    fn reflections() {
        let l = lat(4);
        let s = weyl_reflection(&l.simple_root(1).unwrap(), &l).unwrap();
        assert_eq!(s.apply(&l.e(1)), l.e(2));
        assert_eq!(s.apply(&l.e(2)), l.e(1));
        assert!(s.compose(&s).is_identity());
        assert_eq!(s.order(10), Some(2));
        assert!(weyl_reflection(&l.e(1), &l).is_err());
        let c = weyl_word("s1 s2 s3 s0", &l).unwrap();
        assert_eq!(c.order(100), Some(5));
        assert!(LatticeIsometry::new(c.matrix.clone(), &l).is_ok());
        assert!(c.compose(&c.inverse()).is_identity());
        assert!(LatticeIsometry::new(c.inverse().matrix, &l).is_ok());
        let bad = vec![vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 1]];
        assert!(LatticeIsometry::new(bad, &lat(2)).is_err());
        assert!(weyl_word("s4", &l).is_err());
        assert!(weyl_word("t1", &l).is_err());
    }

    #[test]
    fn ranks_and_orbits() {
        let l = lat(4);
        assert_eq!(invariant_rank(&[LatticeIsometry::identity(&l)], &l), 5);
        let l2 = lat(2);
        let t = weyl_reflection(&l2.simple_root(1).unwrap(), &l2).unwrap();
        assert_eq!(invariant_rank(std::slice::from_ref(&t), &l2), 2);
        let o = orbits(&[t], &exceptional_classes(&l2)).unwrap();
        assert_eq!(orbit_sizes(&o), vec![2, 1]);
        let c = weyl_word("s1 s2 s3 s0", &l).unwrap();
        assert_eq!(invariant_rank(std::slice::from_ref(&c), &l), 1);
        let o = orbits(std::slice::from_ref(&c), &exceptional_classes(&l)).unwrap();
        assert_eq!(orbit_sizes(&o), vec![5, 5]);
        let id = orbits(&[LatticeIsometry::identity(&l)], &exceptional_classes(&l)).unwrap();
        assert!(id.iter().all(|o| o.len() == 1));
        assert!(orbits(&[c], &[l.e(1)]).is_err());
    }

    #[test]
    fn orbit_reports() {
        let l = lat(4);
        let c = weyl_word("s1 s2 s3 s0", &l).unwrap();
        let rep = orbit_criteria(&[c], &l).unwrap();
        assert!(rep.hypothesis_met && rep.passed);
        assert_eq!(rep.orbits.iter().map(|o| (o.size, o.a)).collect::<Vec<_>>(), vec![(5, Some(-1)), (5, Some(-1))]);
        assert_eq!(rep.group_order, Some(5));
        let rep = orbit_criteria(&[LatticeIsometry::identity(&l)], &l).unwrap();
        assert!(!rep.hypothesis_met);
        // three orthogonal A2 Coxeter elements in E6
        let l = lat(6);
        let alpha = l.class(vec![1, -1, -1, -1, 0, 0, 0]).unwrap();
        let beta = l.class(vec![1, 0, 0, 0, -1, -1, -1]).unwrap();
        let refl = |d: &DivisorClass| weyl_reflection(d, &l).unwrap();
        let g = weyl_word("s1 s2 s4 s5", &l).unwrap().compose(&refl(&alpha)).compose(&refl(&beta));
        assert_eq!(g.order(10), Some(3));
        let rep = orbit_criteria(&[g], &l).unwrap();
        assert_eq!(rep.invariant_rank, 1);
        assert!(rep.passed);
        assert!(rep.orbits.iter().all(|o| o.size % 3 == 0));
    }

    #[test]
    fn conjugated_coxeter_elements() {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        // u c u^-1 with c a product of all simple reflections has no fixed
        // vector orthogonal to K
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for r in 3..=8 {
            let l = lat(r);
            let mut letters: Vec<String> = (0..r).map(|i| format!("s{i}")).collect();
            for _ in 0..12 {
                letters.shuffle(&mut rng);
                let u: Vec<String> = (0..rng.gen_range(0..5)).map(|_| format!("s{}", rng.gen_range(0..r))).collect();
                let mut w = u.clone();
                w.extend(letters.iter().cloned());
                w.extend(u.iter().rev().cloned());
                let g = weyl_word(&w.join(" "), &l).unwrap();
                assert_eq!(invariant_rank(std::slice::from_ref(&g), &l), 1);
                let rep = orbit_criteria(&[g], &l).unwrap();
                assert!(rep.passed, "r = {r}, word {w:?}");
            }
        }
    }
}
