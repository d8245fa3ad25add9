use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;


use super::unipoly::UniPoly;
use crate::error::{Error, Result};
use crate::scalars::CycNumber;

const FIXED_ORDER: [&str; 8] = ["w", "x", "y", "z", "x1", "x2", "y1", "y2"];

/// Sort key realising the canonical variable order: the fixed names first,
/// then everything else alphabetically.
pub fn var_rank(name: &str) -> (usize, String) {
    match FIXED_ORDER.iter().position(|v| *v == name) {
        Some(i) => (i, String::new()),
        None => (FIXED_ORDER.len(), name.to_string()),
    }
}

fn sort_vars(vars: &mut Vec<String>) {
    vars.sort_by_key(|a| var_rank(a));
    vars.dedup();
}

/// Exponent vector, ordered graded-lex.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over cyclotomic scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Mono, CycNumber>,
}

impl Default for MultiPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(CycNumber::one())
    }

    pub fn constant(c: CycNumber) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono(Vec::new()), c);
        }
        MultiPoly {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(CycNumber::from_int(n))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Mono(vec![1]), CycNumber::one());
        MultiPoly {
            vars: vec![name.to_string()],
            terms,
        }
    }

    /// Monomial `c * prod v_i^e_i`.
    pub fn monomial(c: CycNumber, powers: &[(&str, u32)]) -> Self {
        let mut p = Self::constant(c);
        for (v, e) in powers {
            p = &p * &Self::var(v).pow(*e);
        }
        p
    }

    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Vec<u32>, CycNumber)>) -> Self {
        let mut acc: HashMap<Vec<u32>, CycNumber> = HashMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len());
            let slot = acc.entry(e).or_insert_with(CycNumber::zero);
            *slot = &*slot + &c;
        }
        let raw = MultiPoly {
            vars: vars.to_vec(),
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (Mono(e), c))
                .collect(),
        };
        raw.canonical()
    }

    // Reorder variables canonically and drop unused ones.
    fn canonical(self) -> Self {
        let mut used: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|m| m.0[*i] > 0))
            .map(|(_, v)| v.clone())
            .collect();
        sort_vars(&mut used);
        if used == self.vars {
            return self;
        }
        self.remap(&used)
    }

    // Re-express over `target` (must contain every used variable).
    fn remap(&self, target: &[String]) -> Self {
        let idx: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| target.iter().position(|t| t == v))
            .collect();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    e[idx[i].expect("variable missing in remap")] = k;
                }
            }
            terms.insert(Mono(e), c.clone());
        }
        MultiPoly {
            vars: target.to_vec(),
            terms,
        }
    }

    pub(crate) fn aligned(a: &Self, b: &Self) -> (Vec<String>, Self, Self) {
        if a.vars == b.vars {
            return (a.vars.clone(), a.clone(), b.clone());
        }
        let mut vars = a.vars.clone();
        vars.extend(b.vars.iter().cloned());
        sort_vars(&mut vars);
        (vars.clone(), a.remap(&vars), b.remap(&vars))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn has_var(&self, v: &str) -> bool {
        self.vars.iter().any(|x| x == v)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &CycNumber)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn constant_value(&self) -> Option<CycNumber> {
        if self.is_zero() {
            Some(CycNumber::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    fn var_index(&self, v: &str) -> Option<usize> {
        self.vars.iter().position(|x| x == v)
    }

    pub fn degree_in(&self, v: &str) -> u32 {
        match self.var_index(v) {
            None => 0,
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
        }
    }

    pub fn min_degree_in(&self, v: &str) -> u32 {
        match self.var_index(v) {
            None => 0,
            Some(i) => self.terms.keys().map(|m| m.0[i]).min().unwrap_or(0),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Degree in the given group of variables jointly.
    pub fn degree_in_group(&self, group: &[&str]) -> u32 {
        let idx: Vec<usize> = group.iter().filter_map(|v| self.var_index(v)).collect();
        self.terms
            .keys()
            .map(|m| idx.iter().map(|&i| m.0[i]).sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Homogeneous jointly in `group` (other variables unrestricted).
    pub fn is_homogeneous_in(&self, group: &[&str]) -> bool {
        let idx: Vec<usize> = group.iter().filter_map(|v| self.var_index(v)).collect();
        let mut it = self
            .terms
            .keys()
            .map(|m| idx.iter().map(|&i| m.0[i]).sum::<u32>());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn leading(&self) -> Option<(&Mono, &CycNumber)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> CycNumber {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_default()
    }

    /// Scale so the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().unwrap()),
        }
    }

    pub fn scale(&self, c: &CycNumber) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
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

    fn add_sub(&self, other: &Self, sign: bool) -> Self {
        let (vars, a, b) = Self::aligned(self, other);
        let mut terms = a.terms;
        for (m, c) in b.terms {
            match terms.get_mut(&m) {
                Some(x) => {
                    *x = if sign { &*x + &c } else { &*x - &c };
                    if x.is_zero() {
                        terms.remove(&m);
                    }
                }
                None => {
                    terms.insert(m, if sign { c } else { -c });
                }
            }
        }
        MultiPoly { vars, terms }.canonical()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (vars, a, b) = Self::aligned(self, other);
        let mut acc: HashMap<Vec<u32>, CycNumber> = HashMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let e: Vec<u32> = ma.0.iter().zip(mb.0.iter()).map(|(x, y)| x + y).collect();
                let p = ca * cb;
                match acc.get_mut(&e) {
                    Some(s) => *s += &p,
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        MultiPoly {
            vars,
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (Mono(e), c))
                .collect(),
        }
        .canonical()
    }

    pub fn derivative(&self, v: &str) -> Self {
        let Some(i) = self.var_index(v) else {
            return Self::zero();
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0[i] > 0 {
                let mut e = m.0.clone();
                e[i] -= 1;
                terms.insert(Mono(e), c * &CycNumber::from_int(m.0[i] as i64));
            }
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
        .canonical()
    }

    /// Coefficients of `v^0, v^1, ...` as polynomials in the other variables.
    pub fn coeffs_in(&self, v: &str) -> Vec<MultiPoly> {
        let Some(i) = self.var_index(v) else {
            return vec![self.clone()];
        };
        let d = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Vec<u32>, CycNumber)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e[i] as usize;
            e[i] = 0;
            buckets[k].push((e, c.clone()));
        }
        buckets
            .into_iter()
            .map(|b| {
                MultiPoly {
                    vars: self.vars.clone(),
                    terms: b.into_iter().map(|(e, c)| (Mono(e), c)).collect(),
                }
                .canonical()
            })
            .collect()
    }

    pub fn from_coeffs_in(v: &str, coeffs: &[MultiPoly]) -> Self {
        let x = Self::var(v);
        let mut acc = Self::zero();
        let mut pw = Self::one();
        for (k, c) in coeffs.iter().enumerate() {
            if k > 0 {
                pw = &pw * &x;
            }
            if !c.is_zero() {
                acc = &acc + &(c * &pw);
            }
        }
        acc
    }

    /// Substitute polynomials for variables simultaneously.
    pub fn substitute(&self, assignment: &[(&str, MultiPoly)]) -> Self {
        let repl: Vec<Option<&MultiPoly>> = self
            .vars
            .iter()
            .map(|v| assignment.iter().find(|(n, _)| n == v).map(|(_, p)| p))
            .collect();
        let mut powers: Vec<Vec<MultiPoly>> = vec![vec![Self::one()]; self.vars.len()];
        let mut acc = Self::zero();
        // group the work per term, caching powers of each replacement
        let mut pieces: Vec<MultiPoly> = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = match repl[i] {
                    Some(p) => p.clone(),
                    None => Self::var(&self.vars[i]),
                };
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &base;
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            pieces.push(t);
        }
        for p in pieces {
            acc = &acc + &p;
        }
        acc
    }

    pub fn subs_scalar(&self, v: &str, c: &CycNumber) -> Self {
        self.substitute(&[(v, Self::constant(c.clone()))])
    }

    /// Evaluate at a full point given by variable values.
    pub fn eval(&self, point: &[(&str, CycNumber)]) -> Result<CycNumber> {
        let vals: Vec<CycNumber> = self
            .vars
            .iter()
            .map(|v| {
                point
                    .iter()
                    .find(|(n, _)| n == v)
                    .map(|(_, c)| c.clone())
                    .ok_or_else(|| Error::Domain(format!("no value for variable {v}")))
            })
            .collect::<Result<_>>()?;
        let mut acc = CycNumber::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &vals[i].pow(e as i64);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Exact division; fails when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Domain("division by zero polynomial".into()));
        }
        if let Some(c) = other.constant_value() {
            return Ok(self.scale(&c.inv()?));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (vars, mut r, b) = Self::aligned(self, other);
        let (lm, lc) = b.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let lc_inv = lc.inv()?;
        let mut q_terms: BTreeMap<Mono, CycNumber> = BTreeMap::new();
        while let Some((m, c)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return Err(Error::NotExact("polynomial division has a remainder".into()));
            }
            let e = Mono(m.0.iter().zip(lm.0.iter()).map(|(x, y)| x - y).collect());
            let coef = &c * &lc_inv;
            // r -= coef * x^e * b
            for (bm, bc) in &b.terms {
                let key = Mono(bm.0.iter().zip(e.0.iter()).map(|(x, y)| x + y).collect());
                let p = &coef * bc;
                match r.terms.get_mut(&key) {
                    Some(x) => {
                        *x -= &p;
                        if x.is_zero() {
                            r.terms.remove(&key);
                        }
                    }
                    None => {
                        r.terms.insert(key, -p);
                    }
                }
            }
            q_terms.insert(e, coef);
        }
        Ok(MultiPoly {
            vars,
            terms: q_terms,
        }
        .canonical())
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_ok()
    }

    /// Greatest common divisor, normalised to graded-lex leading coefficient 1.
    pub fn gcd(&self, other: &Self) -> Self {
        gcd(self, other)
    }

    /// Gcd of the coefficients with respect to `v`.
    pub fn content_in(&self, v: &str) -> Self {
        let mut g = Self::zero();
        for c in self.coeffs_in(v) {
            g = gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn to_unipoly(&self, v: &str) -> Result<UniPoly> {
        if self.vars.iter().any(|x| x != v) {
            return Err(Error::Domain(format!("polynomial is not univariate in {v}")));
        }
        let coeffs: Vec<CycNumber> = self
            .coeffs_in(v)
            .into_iter()
            .map(|c| c.constant_value().unwrap())
            .collect();
        Ok(UniPoly::new(coeffs))
    }

    pub fn from_unipoly(p: &UniPoly, v: &str) -> Self {
        let vars = vec![v.to_string()];
        Self::from_terms(
            &vars,
            p.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (vec![k as u32], c.clone())),
        )
    }

    /// Squarefree decomposition: pairwise coprime squarefree factors with
    /// multiplicities, constant factors dropped.
    pub fn squarefree_factors(&self) -> Vec<(MultiPoly, u32)> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        sqf_rec(self, &mut out);
        out.into_iter()
            .filter(|(_, p)| !p.is_constant())
            .map(|(k, p)| (p.monic(), k))
            .collect()
    }

    pub fn squarefree_part(&self) -> Self {
        let mut acc = Self::one();
        for (f, _) in self.squarefree_factors() {
            acc = &acc * &f;
        }
        acc
    }

    /// Resultant with respect to `v`, the Sylvester determinant.
    pub fn resultant(&self, other: &Self, v: &str) -> Self {
        resultant(self, other, v)
    }

    /// Rename variables; the mapping must be injective on used variables.
    pub fn rename(&self, pairs: &[(&str, &str)]) -> Self {
        let vars: Vec<String> = self
            .vars
            .iter()
            .map(|v| {
                pairs
                    .iter()
                    .find(|(a, _)| a == v)
                    .map(|(_, b)| b.to_string())
                    .unwrap_or_else(|| v.clone())
            })
            .collect();
        let set: BTreeSet<&String> = vars.iter().collect();
        assert_eq!(set.len(), vars.len(), "rename collides");
        MultiPoly {
            vars,
            terms: self.terms.clone(),
        }
        .canonical()
    }

    /// Collect all coefficients.
    pub fn coefficients(&self) -> impl Iterator<Item = &CycNumber> {
        self.terms.values()
    }

    /// Exponent of `v` in a term, by term monomial.
    pub fn exponent(&self, m: &Mono, v: &str) -> u32 {
        self.var_index(v).map(|i| m.0[i]).unwrap_or(0)
    }

    /// Terms as (variable -> exponent) maps, for callers outside the module.
    pub fn term_list(&self) -> Vec<(Vec<(String, u32)>, CycNumber)> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let pw = self
                    .vars
                    .iter()
                    .zip(m.0.iter())
                    .filter(|(_, e)| **e > 0)
                    .map(|(v, e)| (v.clone(), *e))
                    .collect();
                (pw, c.clone())
            })
            .collect()
    }

    /// Homogenize with `v` to total degree in the other variables.
    pub fn homogenize(&self, v: &str, degree: u32) -> Self {
        let mut acc = Self::zero();
        for (pw, c) in self.term_list() {
            let d: u32 = pw.iter().filter(|(n, _)| n != v).map(|(_, e)| e).sum();
            let extra: u32 = pw.iter().filter(|(n, _)| n == v).map(|(_, e)| e).sum();
            let refs: Vec<(&str, u32)> = pw.iter().map(|(n, e)| (n.as_str(), *e)).collect();
            let t = Self::monomial(c, &refs);
            assert!(d + extra <= degree, "homogenize degree too small");
            acc = &acc + &(&t * &Self::var(v).pow(degree - d - extra));
        }
        acc
    }

    /// Homogenize in a group: `group` are affine variables of one factor,
    /// `hv` the homogenizing variable, to total group degree `degree`.
    pub fn homogenize_group(&self, group: &[&str], hv: &str, degree: u32) -> Self {
        let mut acc = Self::zero();
        for (pw, c) in self.term_list() {
            let d: u32 = pw
                .iter()
                .filter(|(n, _)| group.contains(&n.as_str()) || n == hv)
                .map(|(_, e)| e)
                .sum();
            let refs: Vec<(&str, u32)> = pw.iter().map(|(n, e)| (n.as_str(), *e)).collect();
            let t = Self::monomial(c, &refs);
            assert!(d <= degree, "homogenize degree too small");
            acc = &acc + &(&t * &Self::var(hv).pow(degree - d));
        }
        acc
    }
}

fn sqf_rec(p: &MultiPoly, out: &mut BTreeMap<u32, MultiPoly>) {
    if p.is_constant() {
        return;
    }
    let v = p.vars.last().unwrap().clone();
    let cont = p.content_in(&v);
    let pp = p.div_exact(&cont).unwrap();
    sqf_rec(&cont, out);
    // Yun on the primitive part with respect to v
    let dp = pp.derivative(&v);
    let a0 = gcd(&pp, &dp);
    let mut b = pp.div_exact(&a0).unwrap();
    let mut c = dp.div_exact(&a0).unwrap();
    let mut d = &c - &b.derivative(&v);
    let mut i = 1;
    while !b.is_constant() {
        let a = gcd(&b, &d);
        if !a.is_constant() {
            let slot = out.entry(i).or_insert_with(MultiPoly::one);
            *slot = &*slot * &a;
        }
        b = b.div_exact(&a).unwrap();
        c = d.div_exact(&a).unwrap();
        d = &c - &b.derivative(&v);
        i += 1;
    }
}

// ---------------------------------------------------------------------------
// gcd

fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if a == b {
        return a.monic();
    }
    let (vars, a, b) = MultiPoly::aligned(a, b);
    {
        let ta: Vec<_> = a.terms.iter().map(|(m, c)| (m.0.as_slice(), c)).collect();
        let tb: Vec<_> = b.terms.iter().map(|(m, c)| (m.0.as_slice(), c)).collect();
        if super::modp::certainly_coprime_multi(&ta, &tb, vars.len()) {
            return MultiPoly::one();
        }
    }
    if vars.len() == 1 {
        let v = &vars[0];
        let g = a.to_unipoly(v).unwrap().gcd(&b.to_unipoly(v).unwrap());
        return MultiPoly::from_unipoly(&g, v);
    }
    if let Some(g) = homogeneous_gcd(&a, &b) {
        return g;
    }
    let v = vars.last().unwrap().clone();
    if !a.terms.keys().any(|m| m.0[vars.len() - 1] > 0) {
        return gcd(&a.canonical(), &b.content_in(&v));
    }
    if !b.terms.keys().any(|m| m.0[vars.len() - 1] > 0) {
        return gcd(&a.content_in(&v), &b.canonical());
    }
    let a = a.canonical();
    let b = b.canonical();
    let ca = a.content_in(&v);
    let cb = b.content_in(&v);
    let pa = a.div_exact(&ca).unwrap();
    let pb = b.div_exact(&cb).unwrap();
    let c = gcd(&ca, &cb);
    let g = prs_gcd(&pa.coeffs_in(&v), &pb.coeffs_in(&v));
    let g = MultiPoly::from_coeffs_in(&v, &g);
    (&c * &g).monic()
}

// Dehomogenise in the P2 or P1xP1 variable set, take the gcd, rehomogenise.
fn homogeneous_gcd(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
    let all_in = |vs: &[&str]| {
        a.vars.iter().chain(b.vars.iter()).all(|v| vs.contains(&v.as_str()))
    };
    if all_in(&["x", "y", "z"]) && a.is_homogeneous() && b.is_homogeneous() && (a.has_var("z") || b.has_var("z")) {
        let pz = a.min_degree_in("z").min(b.min_degree_in("z"));
        let one = MultiPoly::one();
        let ad = a.substitute(&[("z", one.clone())]);
        let bd = b.substitute(&[("z", one)]);
        let g = gcd(&ad, &bd);
        let hg = g.homogenize("z", g.total_degree());
        return Some((&hg * &MultiPoly::var("z").pow(pz)).monic());
    }
    let gx = ["x1", "x2"];
    let gy = ["y1", "y2"];
    if all_in(&["x1", "x2", "y1", "y2"])
        && a.is_homogeneous_in(&gx)
        && b.is_homogeneous_in(&gx)
        && a.is_homogeneous_in(&gy)
        && b.is_homogeneous_in(&gy)
        && (a.has_var("x2") || b.has_var("x2") || a.has_var("y2") || b.has_var("y2"))
    {
        let px = a.min_degree_in("x2").min(b.min_degree_in("x2"));
        let py = a.min_degree_in("y2").min(b.min_degree_in("y2"));
        let one = MultiPoly::one();
        let ad = a.substitute(&[("x2", one.clone()), ("y2", one.clone())]);
        let bd = b.substitute(&[("x2", one.clone()), ("y2", one)]);
        let g = gcd(&ad, &bd);
        let dx = g.degree_in("x1");
        let dy = g.degree_in("y1");
        let hg = g
            .homogenize_group(&["x1"], "x2", dx)
            .homogenize_group(&["y1"], "y2", dy);
        let m = &MultiPoly::var("x2").pow(px) * &MultiPoly::var("y2").pow(py);
        return Some((&hg * &m).monic());
    }
    None
}

fn rp_trim(v: &mut Vec<MultiPoly>) {
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
}

fn rp_deg(v: &[MultiPoly]) -> usize {
    v.len() - 1
}

fn rp_is_zero(v: &[MultiPoly]) -> bool {
    v.len() == 1 && v[0].is_zero()
}

// Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b, coefficients in R.
fn prem(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let db = rp_deg(b);
    let lb = &b[db];
    let mut r = a.to_vec();
    let delta = rp_deg(a) as i64 - db as i64;
    let mut steps = 0;
    while !rp_is_zero(&r) && rp_deg(&r) >= db {
        let dr = rp_deg(&r);
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Vec<MultiPoly> = r.iter().map(|c| c * lb).collect();
        for (j, bj) in b.iter().enumerate() {
            next[j + shift] = &next[j + shift] - &(&lr * bj);
        }
        next.truncate(dr);
        if next.is_empty() {
            next.push(MultiPoly::zero());
        }
        rp_trim(&mut next);
        r = next;
        steps += 1;
    }
    let extra = delta + 1 - steps;
    if extra > 0 {
        let f = lb.pow(extra as u32);
        r = r.iter().map(|c| c * &f).collect();
    }
    r
}

fn rp_content(v: &[MultiPoly]) -> MultiPoly {
    let mut g = MultiPoly::zero();
    for c in v {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

// Subresultant PRS gcd of primitive polynomials in R[v].
fn prs_gcd(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let (mut a, mut b) = if rp_deg(a) >= rp_deg(b) {
        (a.to_vec(), b.to_vec())
    } else {
        (b.to_vec(), a.to_vec())
    };
    let mut g = MultiPoly::one();
    let mut h = MultiPoly::one();
    loop {
        let delta = (rp_deg(&a) - rp_deg(&b)) as u32;
        let r = prem(&a, &b);
        if rp_is_zero(&r) {
            break;
        }
        if rp_deg(&r) == 0 {
            return vec![MultiPoly::one()];
        }
        let div = &g * &h.pow(delta);
        a = b;
        b = r.iter().map(|c| c.div_exact(&div).unwrap()).collect();
        g = a[rp_deg(&a)].clone();
        // h = g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).div_exact(&h.pow(delta - 1)).unwrap()
        };
    }
    let c = rp_content(&b);
    b.iter().map(|x| x.div_exact(&c).unwrap()).collect()
}

// ---------------------------------------------------------------------------
// resultant

fn resultant(a: &MultiPoly, b: &MultiPoly, v: &str) -> MultiPoly {
    let ca = a.coeffs_in(v);
    let cb = b.coeffs_in(v);
    let m = ca.len() - 1;
    let n = cb.len() - 1;
    if a.is_zero() || b.is_zero() {
        return MultiPoly::zero();
    }
    let size = m + n;
    if size == 0 {
        return MultiPoly::one();
    }
    let mut mat = vec![vec![MultiPoly::zero(); size]; size];
    for i in 0..n {
        for (k, c) in ca.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in cb.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Fraction-free determinant over the polynomial ring.
pub fn bareiss_det(mut m: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one();
    }
    let mut negate = false;
    let mut prev = MultiPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return MultiPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).unwrap();
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

// ---------------------------------------------------------------------------
// operators and printing

impl std::ops::Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.add_sub(rhs, true)
    }
}

impl std::ops::Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.add_sub(rhs, false)
    }
}

impl std::ops::Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.mul_ref(rhs)
    }
}

impl std::ops::Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl std::ops::Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl std::ops::Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl std::ops::Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&CycNumber::from_int(-1))
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&CycNumber::from_int(-1))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(m.0.iter())
                .filter(|(_, e)| **e > 0)
                .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            let mono = mono.join("*");
            let (neg, body) = match c.to_rational() {
                Some(q) => {
                    let neg = q < num_traits::Zero::zero();
                    let a = if neg { -q } else { q };
                    let s = if a.denom() == &num_bigint::BigInt::from(1) {
                        a.numer().to_string()
                    } else {
                        format!("{}/{}", a.numer(), a.denom())
                    };
                    if mono.is_empty() {
                        (neg, s)
                    } else if a == num_traits::One::one() {
                        (neg, mono.clone())
                    } else {
                        (neg, format!("{s}*{mono}"))
                    }
                }
                None => {
                    let s = if c.is_compound() {
                        format!("({c})")
                    } else {
                        c.to_string()
                    };
                    if mono.is_empty() {
                        (false, s)
                    } else {
                        (false, format!("{s}*{mono}"))
                    }
                }
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{body}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
