//! Genus, Hasse-Witt invariants and the ordinariness criterion.
//!
//! `lambda_m = sum_{n=1}^{q^d-2} deg_u B_n(u) mod m`, and `lambda_m^+` is the
//! same sum over zero-class `n`. `K_m` is ordinary exactly when every
//! `deg_u B_n mod m` reaches [`target_degree`](crate::digits::target_degree).

use serde::Serialize;

use crate::bpoly::{b_poly, u_degree, CoeffDomain, Mode, UPoly};
use crate::degree::Degree;
use crate::digits::{digit_profile, target_from};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::poly::Modulus;

/// `(g_m, g_m^+)` for any monic irreducible `m` of degree `d`:
/// `2g = (dq-d-q)(q^d-1)/(q-1) - (d-2)` and `2g^+ = (d-2)((q^d-1)/(q-1) - 1)`.
pub fn genus(f: &FieldCtx, d: u32) -> Result<(u64, u64)> {
    if d == 0 {
        return Err(Error::OutOfRange("d must be >= 1".into()));
    }
    let q = f.q() as i128;
    let qd = f.q_pow(d)? as i128;
    let d = d as i128;
    let r = (qd - 1) / (q - 1);
    let two_g = (d * q - d - q) * r - (d - 2);
    let two_gp = (d - 2) * (r - 1);
    if two_g % 2 != 0 || two_gp % 2 != 0 {
        return Err(Error::ParityViolation);
    }
    if two_g < 0 || two_gp < 0 {
        return Err(Error::Internal(format!("negative genus 2g={two_g}, 2g+={two_gp}")));
    }
    Ok(((two_g / 2) as u64, (two_gp / 2) as u64))
}

/// An exponent where `deg B_n mod m` falls short of its target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Defect {
    pub n: u64,
    pub target: u64,
    pub actual: u64,
}

/// Full invariants of one modulus. Field order is the serialized key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantsReport {
    pub p: u64,
    pub e: u32,
    pub q: u64,
    pub field_modulus: String,
    pub m: String,
    pub d: u32,
    pub g: u64,
    pub g_plus: u64,
    pub lambda: u64,
    pub lambda_plus: u64,
    pub ordinary: bool,
    pub ordinary_plus: bool,
    pub supersingular: bool,
    pub defects: Vec<Defect>,
    pub defects_plus: Vec<Defect>,
}

impl InvariantsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HwOptions {
    /// Evaluate one exponent per orbit of `n -> p*n mod (q^d - 1)`.
    pub orbit: bool,
    /// Re-derive both ordinariness flags with the early-exit scan.
    pub cross_check: bool,
}

impl Default for HwOptions {
    fn default() -> Self {
        HwOptions { orbit: true, cross_check: true }
    }
}

/// Orbits of `n -> p*n mod order` on `1..order`, each listed from its least
/// element, ordered by that element.
pub fn frobenius_orbits(order: u64, p: u64) -> Vec<Vec<u64>> {
    if order < 2 {
        return Vec::new();
    }
    let mut seen = vec![false; order as usize];
    let mut out = Vec::new();
    for n in 1..order {
        if seen[n as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut k = n;
        while !seen[k as usize] {
            seen[k as usize] = true;
            orbit.push(k);
            k = ((k as u128 * p as u128) % order as u128) as u64;
        }
        out.push(orbit);
    }
    out
}

fn residue_degree(n: u64, m: &Modulus) -> Result<u64> {
    let b = b_poly(n, Mode::Residue(m))?;
    match u_degree(&b) {
        Degree::Finite(k) => Ok(k),
        // the constant coefficient s_0(n) = 1 keeps B_n nonzero
        Degree::NegInf => Err(Error::Internal(format!("B_{n}(u) reduced to zero"))),
    }
}

/// `(deg_u B_n mod m, zero_class, target)` for every `1 <= n <= q^d - 2`.
fn degree_table(m: &Modulus, orbit: bool) -> Result<Vec<(u64, bool, u64, u64)>> {
    let f = m.field();
    let d = m.degree();
    let order = m.group_order();
    let mut rows = Vec::with_capacity(order.saturating_sub(1) as usize);
    let push = |n: u64, deg: u64, rows: &mut Vec<(u64, bool, u64, u64)>| -> Result<()> {
        let prof = digit_profile(n, f, d)?;
        rows.push((n, prof.zero_class, target_from(prof.ell, prof.zero_class, f.q()), deg));
        Ok(())
    };
    if orbit {
        for members in frobenius_orbits(order, f.p()) {
            let deg = residue_degree(members[0], m)?;
            for &n in &members {
                push(n, deg, &mut rows)?;
            }
        }
        rows.sort_unstable_by_key(|r| r.0);
    } else {
        for n in 1..order {
            let deg = residue_degree(n, m)?;
            push(n, deg, &mut rows)?;
        }
    }
    Ok(rows)
}

pub fn hasse_witt(m: &Modulus) -> Result<InvariantsReport> {
    hasse_witt_with(m, HwOptions::default())
}

pub fn hasse_witt_with(m: &Modulus, opts: HwOptions) -> Result<InvariantsReport> {
    let f = m.field();
    let d = m.degree();
    let (g, g_plus) = genus(f, d)?;
    let rows = degree_table(m, opts.orbit)?;

    let (mut lambda, mut lambda_plus) = (0u64, 0u64);
    let (mut defects, mut defects_plus) = (Vec::new(), Vec::new());
    for &(n, zero_class, target, actual) in &rows {
        if actual > target {
            return Err(Error::Internal(format!(
                "deg B_{n} = {actual} exceeds its bound {target}"
            )));
        }
        lambda += actual;
        if zero_class {
            lambda_plus += actual;
        }
        if actual < target {
            let defect = Defect { n, target, actual };
            defects.push(defect);
            if zero_class {
                defects_plus.push(defect);
            }
        }
    }

    let shortfall: u64 = defects.iter().map(|x| x.target - x.actual).sum();
    let shortfall_plus: u64 = defects_plus.iter().map(|x| x.target - x.actual).sum();
    if lambda + shortfall != g || lambda_plus + shortfall_plus != g_plus {
        return Err(Error::Internal(format!(
            "target sums disagree with genus: lambda={lambda} shortfall={shortfall} g={g}"
        )));
    }

    let report = InvariantsReport {
        p: f.p(),
        e: f.e(),
        q: f.q(),
        field_modulus: f.field_modulus_string(),
        m: m.to_text(),
        d,
        g,
        g_plus,
        lambda,
        lambda_plus,
        ordinary: lambda == g,
        ordinary_plus: lambda_plus == g_plus,
        supersingular: lambda == 0,
        defects,
        defects_plus,
    };

    if opts.cross_check {
        let full = is_ordinary(m)?;
        let plus = is_ordinary_plus(m)?;
        let first = report.defects.first().map(|x| x.n);
        let first_plus = report.defects_plus.first().map(|x| x.n);
        if full.ordinary != report.ordinary
            || plus.ordinary != report.ordinary_plus
            || full.witness != first
            || plus.witness != first_plus
        {
            return Err(Error::Internal(format!(
                "early-exit test disagrees with lambda = g for {}",
                report.m
            )));
        }
    }
    Ok(report)
}

/// Outcome of the early-exit ordinariness test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrdinaryCheck {
    pub ordinary: bool,
    /// Least defective exponent when not ordinary.
    pub witness: Option<u64>,
}

fn first_defect(m: &Modulus, zero_class_only: bool) -> Result<OrdinaryCheck> {
    let f = m.field();
    for n in 1..m.group_order() {
        let prof = digit_profile(n, f, m.degree())?;
        if zero_class_only && !prof.zero_class {
            continue;
        }
        let target = target_from(prof.ell, prof.zero_class, f.q());
        if residue_degree(n, m)? < target {
            return Ok(OrdinaryCheck { ordinary: false, witness: Some(n) });
        }
    }
    Ok(OrdinaryCheck { ordinary: true, witness: None })
}

/// Whether `K_m` is ordinary, scanning `n` upwards and stopping at the
/// first defect.
pub fn is_ordinary(m: &Modulus) -> Result<OrdinaryCheck> {
    first_defect(m, false)
}

/// Whether `K_m^+` is ordinary (zero-class exponents only).
pub fn is_ordinary_plus(m: &Modulus) -> Result<OrdinaryCheck> {
    first_defect(m, true)
}

/// `(Zbar_m(u), Zbar_m^+(u))`: products of `B_n(u) mod m` over all `n` and
/// over zero-class `n`.
pub fn z_bar(m: &Modulus) -> Result<(UPoly, UPoly)> {
    let dom = CoeffDomain::Residue(m.clone());
    let mut all = UPoly::one(dom.clone());
    let mut plus = UPoly::one(dom);
    let q = m.field().q();
    for n in 1..m.group_order() {
        let b = b_poly(n, Mode::Residue(m))?;
        all = all.mul_residue(&b)?;
        if n % (q - 1) == 0 {
            plus = plus.mul_residue(&b)?;
        }
    }
    Ok((all, plus))
}

/// One identity and its outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Digit-sum identities at `(q, d)`: the symmetry
/// `l(n) + l(q^d-1-n) = (q-1)d`, both floor sums against their closed forms,
/// and the genera as sums of target degrees.
pub fn verify_identities(f: &FieldCtx, d: u32) -> Result<Vec<IdentityCheck>> {
    let q = f.q();
    let qd = f.q_pow(d)?;
    let (g, g_plus) = genus(f, d)?;
    let mut symmetry_bad = None;
    let (mut zero_sum, mut other_sum) = (0u128, 0u128);
    let (mut target_sum, mut target_sum_plus) = (0u128, 0u128);
    for n in 1..qd.saturating_sub(1) {
        let a = digit_profile(n, f, d)?;
        let b = digit_profile(qd - 1 - n, f, d)?;
        if symmetry_bad.is_none() && a.ell + b.ell != (q - 1) * d as u64 {
            symmetry_bad = Some(n);
        }
        let fl = (a.ell / (q - 1)) as u128;
        let t = target_from(a.ell, a.zero_class, q) as u128;
        target_sum += t;
        if a.zero_class {
            zero_sum += fl;
            target_sum_plus += t;
        } else {
            other_sum += fl;
        }
    }

    let (q128, qd128, d128) = (q as u128, qd as u128, d as u128);
    let r = (qd128 - 1) / (q128 - 1);
    // 2 * sum = d (r - 1)
    let lhs18 = 2 * zero_sum;
    let rhs18 = d128 * (r - 1);
    // 2 (q-1) * sum = (d-1)(q-2)(q^d-1)
    let lhs19 = 2 * (q128 - 1) * other_sum;
    let rhs19 = (d128 - 1) * (q128 - 2) * (qd128 - 1);

    Ok(vec![
        IdentityCheck {
            name: "digit-symmetry".into(),
            passed: symmetry_bad.is_none(),
            detail: match symmetry_bad {
                None => format!("l(n) + l(q^d-1-n) = {} for all n", (q - 1) * d as u64),
                Some(n) => format!("fails at n = {n}"),
            },
        },
        IdentityCheck {
            name: "floor-sum-zero-class".into(),
            passed: lhs18 == rhs18,
            detail: format!("sum = {zero_sum}, closed form = {}/2", rhs18),
        },
        IdentityCheck {
            name: "floor-sum-other".into(),
            passed: lhs19 == rhs19,
            detail: format!("sum = {other_sum}, closed form = {rhs19}/{}", 2 * (q128 - 1)),
        },
        IdentityCheck {
            name: "genus-as-target-sum".into(),
            passed: target_sum == g as u128,
            detail: format!("sum of targets = {target_sum}, g = {g}"),
        },
        IdentityCheck {
            name: "genus-plus-as-target-sum".into(),
            passed: target_sum_plus == g_plus as u128,
            detail: format!("zero-class sum of targets = {target_sum_plus}, g+ = {g_plus}"),
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::poly::irreducible_enumerate;

    fn f3() -> FieldCtx {
        make_field(3, 1, None).unwrap()
    }

    #[test]
    fn genus_examples() {
        let f = f3();
        assert_eq!(genus(&f, 3).unwrap(), (19, 6));
        assert_eq!(genus(&f, 1).unwrap(), (0, 0));
        assert_eq!(genus(&f, 2).unwrap(), (2, 0));
        assert!(genus(&f, 40).is_err());
    }

    #[test]
    fn headline_modulus() {
        let f = f3();
        let m = Modulus::parse("T^3+2*T+1", &f).unwrap();
        let r = hasse_witt(&m).unwrap();
        assert_eq!((r.g, r.lambda, r.g_plus, r.lambda_plus), (19, 18, 6, 6));
        assert!(!r.ordinary && r.ordinary_plus && !r.supersingular);
        assert_eq!(r.defects.len(), 1);
        assert!(r.defects_plus.is_empty());
        let json = r.to_json();
        assert!(json.starts_with(
            r#"{"p":3,"e":1,"q":3,"field_modulus":"x","m":"T^3+2*T+1","d":3,"g":19,"g_plus":6,"lambda":18,"lambda_plus":6,"ordinary":false,"ordinary_plus":true,"supersingular":false,"defects":[{"n":"#
        ));
    }

    #[test]
    fn quadratics_over_f3() {
        let f = f3();
        for m in irreducible_enumerate(&f, 2).unwrap() {
            let r = hasse_witt(&m).unwrap();
            assert_eq!((r.lambda, r.g, r.lambda_plus), (2, 2, 0));
            assert!(r.ordinary && r.ordinary_plus);
        }
    }

    #[test]
    fn degree_one() {
        for (p, e) in [(2u64, 1u32), (3, 1), (2, 2)] {
            let f = make_field(p, e, None).unwrap();
            for m in irreducible_enumerate(&f, 1).unwrap() {
                let r = hasse_witt(&m).unwrap();
                assert_eq!((r.g, r.lambda), (0, 0));
                assert!(r.ordinary && r.supersingular);
                let (z, zp) = z_bar(&m).unwrap();
                assert_eq!(u_degree(&z), Degree::Finite(0));
                assert_eq!(u_degree(&zp), Degree::Finite(0));
            }
        }
    }

    #[test]
    fn witness_exponents_over_f4() {
        let f = make_field(2, 2, None).unwrap();
        for m in irreducible_enumerate(&f, 2).unwrap() {
            assert_eq!(is_ordinary(&m).unwrap(), OrdinaryCheck { ordinary: false, witness: Some(10) });
            assert!(is_ordinary_plus(&m).unwrap().ordinary);
        }
    }

    #[test]
    fn orbit_and_naive_agree() {
        for (p, e, d) in [(2u64, 1u32, 3u32), (3, 1, 2), (2, 2, 2), (2, 1, 4)] {
            let f = make_field(p, e, None).unwrap();
            for m in irreducible_enumerate(&f, d).unwrap() {
                let a = hasse_witt_with(&m, HwOptions { orbit: true, cross_check: true }).unwrap();
                let b = hasse_witt_with(&m, HwOptions { orbit: false, cross_check: false }).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn z_bar_degrees() {
        let f = f3();
        let m = Modulus::parse("T^3+2*T+1", &f).unwrap();
        let (z, zp) = z_bar(&m).unwrap();
        assert_eq!(u_degree(&z), Degree::Finite(18));
        assert_eq!(u_degree(&zp), Degree::Finite(6));
        assert_eq!(z.coeffs()[0], crate::poly::FqPoly::one());
        assert_eq!(zp.coeffs()[0], crate::poly::FqPoly::one());
    }

    #[test]
    fn identities_at_27() {
        let checks = verify_identities(&f3(), 3).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        assert!(checks[1].detail.starts_with("sum = 18"));
        assert!(checks[2].detail.starts_with("sum = 13"));
        let f2 = make_field(2, 1, None).unwrap();
        let checks = verify_identities(&f2, 5).unwrap();
        assert!(checks.iter().all(|c| c.passed));
        assert!(checks[2].detail.starts_with("sum = 0"));
    }

    #[test]
    fn orbits_partition_range() {
        let orbits = frobenius_orbits(26, 3);
        let mut all: Vec<u64> = orbits.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (1..26).collect::<Vec<_>>());
        assert_eq!(orbits[0], vec![1, 3, 9]);
        assert!(frobenius_orbits(1, 2).is_empty());
    }
}
