//! Conjugacy classes of elements of order `n`: counts, representatives and
//! separating certificates.

use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use super::config::Config;
use super::invariants::{invariants_of, InvariantRecord};
use super::mapexpr::{parse_surface, MapExpr, NamedSurface};
use crate::birmaps::BirMapP2;
use crate::delpezzo::{bertini, rho, scalar_equivalent, theta, MonomialAut, WeightedHypersurface};
use crate::error::{Error, Result};
use crate::jonquieres::{inflate_root, involution, involution_curve, root_by_norm, root_construct, twisted_element};
use crate::polys::{MultiPoly, RatFunc, UniPoly};
use crate::scalars::CycNumber;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassCount {
    Finite(u64),
    Infinite,
}

impl fmt::Display for ClassCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassCount::Finite(n) => write!(f, "{n}"),
            ClassCount::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for ClassCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ClassCount::Finite(n) => s.serialize_u64(*n),
            ClassCount::Infinite => s.serialize_str("infinite"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Representative {
    pub name: String,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    pub map: String,
    pub verified_order: u64,
    #[serde(skip)]
    pub expr: MapExpr,
    #[serde(skip)]
    pub record: InvariantRecord,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub pair: [String; 2],
    pub invariant: String,
    pub values: [Value; 2],
    /// The two values were computed here and are unequal.
    pub checked: bool,
    /// The argument that turns the separation into non-conjugacy, when it
    /// is not a computation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cited: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub order: u64,
    pub count: ClassCount,
    pub representatives: Vec<Representative>,
    pub certificates: Vec<Certificate>,
}

pub const DEFAULT_FAMILY_SIZE: usize = 3;

fn representative(name: String, expr: MapExpr, n: u64, cfg: &Config) -> Result<Representative> {
    let record = invariants_of(&expr, cfg.order_cap.max(n), cfg.degree_bound)?;
    if record.order != n {
        return Err(Error::Verification(format!("{name} has order {}, expected {n}", record.order)));
    }
    Ok(Representative {
        name,
        kind: expr.kind(),
        surface: expr.surface_name().map(String::from),
        map: expr.to_string(),
        verified_order: record.order,
        expr,
        record,
    })
}

fn certificate(a: &Representative, b: &Representative, invariant: &str, va: Value, vb: Value, cited: Option<&str>) -> Result<Certificate> {
    if va == vb {
        return Err(Error::Verification(format!("{invariant} does not separate {} and {}", a.name, b.name)));
    }
    Ok(Certificate {
        pair: [a.name.clone(), b.name.clone()],
        invariant: invariant.to_string(),
        values: [va, vb],
        checked: true,
        cited: cited.map(String::from),
    })
}

fn curves_json(r: &InvariantRecord) -> Value {
    let mut out = Vec::new();
    for p in &r.powers {
        for c in &p.curves {
            out.push(json!({"power": p.power, "genus": c.genus, "j_invariant": c.j_invariant}));
        }
    }
    Value::Array(out)
}

/// `(x:y:zeta_n z)`.
pub fn alpha(n: u64) -> Result<BirMapP2> {
    let one = CycNumber::one;
    BirMapP2::diagonal([one(), one(), CycNumber::root_of_unity(n as u32, 1)])
}

// x^d - a
fn binomial(d: u64, a: i64) -> UniPoly {
    let mut c = vec![CycNumber::zero(); d as usize + 1];
    c[0] = CycNumber::from_int(-a);
    c[d as usize] = CycNumber::one();
    UniPoly::new(c)
}

// prod_{i <= j} (x^l - i^(2l)): roots i^2 zeta_l^t with square roots in Q(zeta_2l)
// x + c
fn linear(c: i64) -> RatFunc {
    RatFunc::from_poly(UniPoly::new(vec![CycNumber::from_int(c), CycNumber::one()]))
}

fn product_family(l: u64, j: u64) -> UniPoly {
    (1..=j).fold(UniPoly::one(), |acc, i| &acc * &binomial(l, (i as i64).pow(2 * l as u32)))
}

fn even_family(n: u64, size: usize, cfg: &Config) -> Result<ClassReport> {
    let k = n / 2;
    let mut reps = Vec::new();
    for i in 0..size as u64 {
        let (g, name, phi) = if k % 2 == 1 {
            // g = x^D - 1, D a multiple of lcm(k, 2), nu = 0
            let step = k.lcm(&2);
            let d = step * (4_u64.div_ceil(step) + i);
            let g = binomial(d, 1);
            let phi = if k == 1 { involution(&g) } else { twisted_element(&RatFunc::zero(), &g, k)? };
            (g, format!("root[g=x^{d}-1]"), phi)
        } else {
            // k = k1 t with k1 a power of two and t odd; build a root for
            // k1 and pull it back along x -> x^t
            let t = k >> k.trailing_zeros();
            let k1 = k / t;
            let (g1, base) = if k1 == 2 {
                let h = (1..=2 * (i as i64 + 1)).fold(RatFunc::one(), |acc, c| &acc * &linear(c));
                let g1 = involution_curve(&h, 1).num().clone();
                (g1, root_construct(&h, 1)?)
            } else {
                let g1 = product_family(k1, i + 1);
                let base = root_by_norm(&g1, k1)?;
                (g1, base)
            };
            let g = g1.inflate(t as usize);
            let phi = if t == 1 { base } else { inflate_root(&base, t)? };
            (g.clone(), format!("root[g={}]", MultiPoly::from_unipoly(&g, "x")), phi)
        };
        if phi.power(k) != involution(&g) {
            return Err(Error::Verification(format!("power {k} of {name} is not the involution")));
        }
        reps.push(representative(name, MapExpr::Jonq(phi), n, cfg)?);
    }
    let mut certs = Vec::new();
    let genus = |r: &Representative| -> Value {
        r.record.curves_at(k).iter().map(|c| json!(c.genus)).next().unwrap_or(Value::Null)
    };
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            certs.push(certificate(
                &reps[i],
                &reps[j],
                &format!("genus of the curve fixed by the power {k}"),
                genus(&reps[i]),
                genus(&reps[j]),
                None,
            )?);
        }
    }
    Ok(ClassReport {
        order: n,
        count: ClassCount::Infinite,
        representatives: reps,
        certificates: certs,
    })
}

fn j_certificates(reps: &[Representative], invariant: &str) -> Result<Vec<Certificate>> {
    let j = |r: &Representative| r.record.curves_at(1).first().map(|c| json!(c.j_invariant)).unwrap_or(Value::Null);
    let mut certs = Vec::new();
    for a in 0..reps.len() {
        for b in a + 1..reps.len() {
            certs.push(certificate(&reps[a], &reps[b], invariant, j(&reps[a]), j(&reps[b]), None)?);
        }
    }
    Ok(certs)
}

fn order3_family(size: usize, cfg: &Config) -> Result<ClassReport> {
    let mut reps = Vec::new();
    for t in 0..size as i64 {
        // F = y^2 z - x^3 - x z^2 - t z^3
        let f = super::expr::parse_poly(&format!("y^2*z - x^3 - x*z^2 - ({t})*z^3"))?;
        let surface = NamedSurface {
            name: format!("CUBIC({f})"),
            surface: WeightedHypersurface::cubic(&f)?,
        };
        let one = CycNumber::one;
        let aut = MonomialAut::diagonal([CycNumber::root_of_unity(3, 1), one(), one(), one()]);
        reps.push(representative(format!("cubic[a=1,b={t}]"), MapExpr::Surface { surface, aut }, 3, cfg)?);
    }
    let certs = j_certificates(&reps, "j-invariant of the fixed elliptic curve")?;
    Ok(ClassReport {
        order: 3,
        count: ClassCount::Infinite,
        representatives: reps,
        certificates: certs,
    })
}

fn order5_family(size: usize, cfg: &Config) -> Result<ClassReport> {
    let mut reps = Vec::new();
    for t in 0..size as i64 {
        let lambda = CycNumber::one();
        let mu = CycNumber::from_int(t);
        let s = WeightedHypersurface::order5_family(&lambda, &mu)?;
        let x = MultiPoly::var("x");
        let f4 = x.pow(4);
        let f6 = &x.pow(6).scale(&mu) + &(&x * &MultiPoly::var("y").pow(5));
        if !crate::delpezzo::smooth_dp1(&f4, &f6)? {
            return Err(Error::Verification(format!("order-5 surface with mu = {t} is singular")));
        }
        let surface = NamedSurface {
            name: format!("DP1({f4}, {f6})"),
            surface: s,
        };
        let one = CycNumber::one;
        let aut = MonomialAut::diagonal([one(), one(), CycNumber::root_of_unity(5, 1), one()]);
        reps.push(representative(format!("dp1[lambda=1,mu={t}]"), MapExpr::Surface { surface, aut }, 5, cfg)?);
    }
    let certs = j_certificates(&reps, "j-invariant of the fixed elliptic curve y = 0")?;
    Ok(ClassReport {
        order: 5,
        count: ClassCount::Infinite,
        representatives: reps,
        certificates: certs,
    })
}

fn scales_json(a: &[CycNumber; 4]) -> Value {
    Value::Array(a.iter().map(|c| json!(c)).collect())
}

fn order9(cfg: &Config) -> Result<ClassReport> {
    let sf = parse_surface("SF")?;
    let a9 = representative("alpha_9".into(), MapExpr::Plane(alpha(9)?), 9, cfg)?;
    let r1 = representative("rho_1".into(), MapExpr::Surface { surface: sf.clone(), aut: rho(1) }, 9, cfg)?;
    let r2 = representative("rho_2".into(), MapExpr::Surface { surface: sf, aut: rho(2) }, 9, cfg)?;
    let inv = "non-rational curves fixed by the powers";
    let mut certs = vec![
        certificate(&a9, &r1, inv, curves_json(&a9.record), curves_json(&r1.record), None)?,
        certificate(&a9, &r2, inv, curves_json(&a9.record), curves_json(&r2.record), None)?,
    ];
    let (c1, c2) = (rho(1).power(3).scales, rho(2).power(3).scales);
    if scalar_equivalent(&c1, &c2) {
        return Err(Error::Verification("cubes of rho_1 and rho_2 agree up to scalar".into()));
    }
    certs.push(certificate(
        &r1,
        &r2,
        "eigenvalues of the diagonal cube, up to an overall scalar",
        scales_json(&c1),
        scales_json(&c2),
        Some("non-conjugacy in the Cremona group follows from the equivariant link decomposition, not from this computation"),
    )?);
    Ok(ClassReport {
        order: 9,
        count: ClassCount::Finite(3),
        representatives: vec![a9, r1, r2],
        certificates: certs,
    })
}

pub const THETA_POWERS: [u64; 8] = [1, 2, 4, 7, 8, 11, 13, 14];

fn order15(cfg: &Config) -> Result<ClassReport> {
    let s15 = parse_surface("S15")?;
    let a15 = representative("alpha_15".into(), MapExpr::Plane(alpha(15)?), 15, cfg)?;
    let mut reps = vec![a15];
    for k in THETA_POWERS {
        let aut = theta().power(k);
        reps.push(representative(format!("theta^{k}"), MapExpr::Surface { surface: s15.clone(), aut }, 15, cfg)?);
    }
    let mut certs = Vec::new();
    for r in &reps[1..] {
        // the 5-torsion of <theta> is generated by the cube
        if r.record.curves_at(3).iter().all(|c| c.genus != Some(1)) {
            return Err(Error::Verification(format!("the cube of {} fixes no elliptic curve", r.name)));
        }
        certs.push(certificate(
            &reps[0],
            r,
            "non-rational curves fixed by the powers",
            curves_json(&reps[0].record),
            curves_json(&r.record),
            None,
        )?);
    }
    // theta^k inside <theta, Bertini> = Z/30: distinct elements
    let b = bertini();
    for i in 1..reps.len() {
        for j in i + 1..reps.len() {
            let (MapExpr::Surface { aut: a, .. }, MapExpr::Surface { aut: c, .. }) = (&reps[i].expr, &reps[j].expr) else {
                unreachable!()
            };
            let w = WeightedHypersurface::s15().weights;
            if a.compose(&c.inverse()).is_identity_weighted(&w) || a.compose(&c.inverse()).compose(&b).is_identity_weighted(&w) {
                return Err(Error::Verification("theta powers coincide".into()));
            }
            certs.push(certificate(
                &reps[i],
                &reps[j],
                "diagonal scales in the automorphism group of S15",
                scales_json(&a.scales),
                scales_json(&c.scales),
                Some("that distinct powers of theta are not conjugate in the Cremona group rests on the equivariant link argument"),
            )?);
        }
    }
    Ok(ClassReport {
        order: 15,
        count: ClassCount::Finite(9),
        representatives: reps,
        certificates: certs,
    })
}

/// Conjugacy classes of elements of order `n` in the Cremona group.
pub fn classify_order(n: u64, family_size: usize, cfg: &Config) -> Result<ClassReport> {
    match n {
        0 => Err(Error::Domain("order must be positive".into())),
        n if n % 2 == 0 => even_family(n, family_size, cfg),
        3 => order3_family(family_size, cfg),
        5 => order5_family(family_size, cfg),
        9 => order9(cfg),
        15 => order15(cfg),
        n => {
            let r = representative(format!("alpha_{n}"), MapExpr::Plane(alpha(n)?), n, cfg)?;
            Ok(ClassReport {
                order: n,
                count: ClassCount::Finite(1),
                representatives: vec![r],
                certificates: vec![],
            })
        }
    }
}

/// The classification table alone.
pub fn class_count(n: u64) -> Result<ClassCount> {
    Ok(match n {
        0 => return Err(Error::Domain("order must be positive".into())),
        n if n % 2 == 0 || n == 3 || n == 5 => ClassCount::Infinite,
        9 => ClassCount::Finite(3),
        15 => ClassCount::Finite(9),
        _ => ClassCount::Finite(1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        let cfg = Config::default();
        let r = classify_order(7, 3, &cfg).unwrap();
        assert_eq!(r.count, ClassCount::Finite(1));
        assert_eq!(r.representatives[0].map, "(x:y:z) -> (x : y : zeta(7)*z)");
        let r = classify_order(9, 3, &cfg).unwrap();
        assert_eq!(r.count, ClassCount::Finite(3));
        assert!(r.certificates.iter().all(|c| c.values[0] != c.values[1]));
        assert!(classify_order(0, 3, &cfg).is_err());
        assert_eq!(classify_order(1, 3, &cfg).unwrap().count, ClassCount::Finite(1));
    }

    #[test]
    fn order_four_genera() {
        let r = classify_order(4, 3, &Config::default()).unwrap();
        assert_eq!(r.count, ClassCount::Infinite);
        let g: Vec<Option<u32>> = r.representatives.iter().map(|p| p.record.curves_at(2)[0].genus).collect();
        assert_eq!(g, vec![Some(1), Some(3), Some(5)]);
    }

    #[test]
    fn families_three_and_five() {
        let cfg = Config::default();
        let r = classify_order(3, 3, &cfg).unwrap();
        assert_eq!(r.certificates.len(), 3);
        let r = classify_order(5, 3, &cfg).unwrap();
        assert_eq!(r.certificates.len(), 3);
    }
}
