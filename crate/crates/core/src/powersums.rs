//! Power sums `s_i(n) = sum_{a in A, a monic, deg a = i} a^n`.
//!
//! [`s_exact`] is computed by brute force in `A` and is the reference for
//! everything else; [`s_mod`] works directly in `A/mA`.

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::poly::{monic_enumerate, residue_pow, FqPoly, Modulus};

/// Default ceiling on the estimated cost of an exact power sum.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Environment variable overriding the exact-mode cost ceiling.
pub const BUDGET_ENV: &str = "CARLITZ_HW_BUDGET";

/// Cost ceiling for exact computations in `A`, in coefficient operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    /// Reads [`BUDGET_ENV`], falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(v) => v.trim().parse().map(Budget).map_err(|_| Error::Parse {
                pos: 0,
                msg: format!("{BUDGET_ENV} must be a decimal integer, got '{v}'"),
            }),
            Err(_) => Ok(Budget::default()),
        }
    }
}

/// `q^i * ceil(log2 n) * (i*n + 1)`.
pub fn exact_cost(q: u64, i: u32, n: u64) -> u128 {
    let log = (64 - n.leading_zeros()).max(1) as u128;
    let bases = (q as u128).saturating_pow(i);
    bases.saturating_mul(log).saturating_mul(i as u128 * n as u128 + 1)
}

fn check_budget(f: &FieldCtx, i: u32, n: u64, budget: Budget) -> Result<()> {
    let cost = exact_cost(f.q(), i, n);
    if cost > budget.0 as u128 {
        return Err(Error::CostCeilingExceeded { cost, budget: budget.0 });
    }
    Ok(())
}

/// Exact `s_i(n)` in `A` by enumerating monic polynomials of degree `i`.
pub fn s_exact(i: u32, n: u64, f: &FieldCtx, budget: Budget) -> Result<FqPoly> {
    check_budget(f, i, n, budget)?;
    let mut acc = FqPoly::zero();
    for a in monic_enumerate(f, i)? {
        acc = acc.add(&a.pow(n, f), f);
    }
    Ok(acc)
}

/// `s_i(n) mod m` computed in `A/mA`, for `0 <= i < d`, `1 <= n <= q^d - 2`.
pub fn s_mod(i: u32, n: u64, m: &Modulus) -> Result<FqPoly> {
    let d = m.degree();
    if i >= d {
        return Err(Error::OutOfRange(format!("i = {i} must be below d = {d}")));
    }
    if n == 0 || n >= m.group_order() {
        return Err(Error::OutOfRange(format!(
            "n = {n} outside [1, {}]",
            m.group_order() as i128 - 1
        )));
    }
    s_mod_unchecked(i, n, m)
}

pub(crate) fn s_mod_unchecked(i: u32, n: u64, m: &Modulus) -> Result<FqPoly> {
    let f = m.field();
    let mut acc = FqPoly::zero();
    for a in monic_enumerate(f, i)? {
        let power = residue_pow(&a, n, m);
        if power.is_zero() {
            return Err(Error::Internal(format!(
                "{} is a zero divisor modulo {}",
                a.format(f),
                m.to_text()
            )));
        }
        acc = acc.add(&power, f);
    }
    Ok(acc)
}

fn binomial_mod_p(n: u64, k: u64, f: &FieldCtx) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let p = f.p();
    let (mut num, mut den) = (f.from_int(1), f.from_int(1));
    for j in 0..k {
        num = f.mul(num, f.from_int(n - j));
        den = f.mul(den, f.from_int(j + 1));
    }
    // n < p here, so the denominator is a unit
    let v = f.mul(num, f.inv(den)?).code();
    debug_assert!(v < p);
    Ok(v)
}

/// Closed form `s_1(n) = -C(b, p-1-a) * (T^p - T)^(a+b-(p-1))` for
/// `n = a + b*p` over a prime field, on the window `p-1 <= a+b < 2(p-1)`.
pub fn s1_closed_form(n: u64, f: &FieldCtx) -> Result<FqPoly> {
    if !f.is_prime_field() {
        return Err(Error::NotPrimeField);
    }
    let p = f.p();
    let (a, b) = (n % p, n / p);
    if b > p - 1 || a + b < p - 1 || a + b >= 2 * (p - 1) {
        return Err(Error::OutOfWindow(n));
    }
    let c = binomial_mod_p(b, p - 1 - a, f)?;
    let artin = FqPoly::monomial(f.from_int(1), p as usize).sub(&FqPoly::t(), f);
    let power = artin.pow(a + b - (p - 1), f);
    Ok(power.scale(f.neg(f.from_int(c)), f))
}

/// `f_n(T) = 1 + s_1(n) = 1 + sum_{alpha in F_q} (T + alpha)^n`, exact.
pub fn f_poly(n: u64, f: &FieldCtx, budget: Budget) -> Result<FqPoly> {
    Ok(s_exact(1, n, f, budget)?.add(&FqPoly::one(), f))
}

/// Checks the three symmetries of `f_n` for zero-class `n`:
/// translation `f_n(T+alpha) = f_n(T)`, scaling `f_n(alpha T) = f_n(T)`
/// and reciprocity `T^n f_n(1/T) = f_n(T)`.
pub fn f_symmetries_hold(n: u64, f: &FieldCtx, budget: Budget) -> Result<bool> {
    let g = f_poly(n, f, budget)?;
    for alpha in f.enumerate() {
        if g.compose_linear(crate::field::FqElem::ONE, alpha, f) != g {
            return Ok(false);
        }
        if !alpha.is_zero() && g.compose_linear(alpha, crate::field::FqElem::ZERO, f) != g {
            return Ok(false);
        }
    }
    Ok(g.reversed(n as usize + 1) == g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::Degree;
    use crate::digits::{digit_sum, gekeler_degree_bound};
    use crate::field::{make_field, FqElem};
    use crate::poly::irreducible_enumerate;

    fn f3() -> FieldCtx {
        make_field(3, 1, None).unwrap()
    }

    fn poly(codes: &[u64]) -> FqPoly {
        FqPoly::from_coeffs(codes.iter().map(|&c| FqElem::from_code(c)).collect())
    }

    #[test]
    fn exact_examples() {
        let f = f3();
        let b = Budget::default();
        for n in [0, 1, 7, 100] {
            assert_eq!(s_exact(0, n, &f, b).unwrap(), FqPoly::one());
        }
        assert_eq!(s_exact(1, 5, &f, b).unwrap(), poly(&[0, 1, 0, 2]));
        assert!(s_exact(2, 5, &f, b).unwrap().is_zero());
        assert_eq!(s_exact(1, 8, &f, b).unwrap(), poly(&[2, 0, 2, 0, 2, 0, 2]));
        assert_eq!(s_exact(1, 2, &f, b).unwrap(), poly(&[2]));
    }

    #[test]
    fn cost_ceiling() {
        let f = f3();
        assert!(matches!(
            s_exact(3, 1000, &f, Budget(10)),
            Err(Error::CostCeilingExceeded { .. })
        ));
        assert_eq!(exact_cost(3, 1, 5), 3 * 3 * 6);
    }

    #[test]
    fn residue_examples() {
        let f = f3();
        let m = Modulus::parse("T^3+2*T+1", &f).unwrap();
        assert_eq!(s_mod(0, 7, &m).unwrap(), FqPoly::one());
        // oracle: reduce the exact value
        let oracle = m.reduce(&s_exact(1, 5, &f, Budget::default()).unwrap());
        assert_eq!(oracle, poly(&[1]));
        assert_eq!(s_mod(1, 5, &m).unwrap(), oracle);
        assert!(matches!(s_mod(3, 5, &m), Err(Error::OutOfRange(_))));
        assert!(matches!(s_mod(1, 26, &m), Err(Error::OutOfRange(_))));
        assert!(matches!(s_mod(1, 0, &m), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn witness_exponent_vanishes_over_f4() {
        let f = make_field(2, 2, None).unwrap();
        for m in irreducible_enumerate(&f, 2).unwrap() {
            assert!(s_mod(1, 10, &m).unwrap().is_zero());
        }
        assert!(s_exact(1, 10, &f, Budget::default()).unwrap().is_zero());
    }

    #[test]
    fn residue_matches_exact() {
        let b = Budget::default();
        for (p, e, d) in [(2u64, 1u32, 3u32), (3, 1, 2), (3, 1, 3), (2, 2, 2), (5, 1, 2)] {
            let f = make_field(p, e, None).unwrap();
            for m in irreducible_enumerate(&f, d).unwrap().iter().take(3) {
                for n in 1..m.group_order() {
                    for i in 0..d {
                        let exact = s_exact(i, n, &f, b).unwrap();
                        assert_eq!(m.reduce(&exact), s_mod(i, n, m).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_twist() {
        for (p, e, d) in [(2u64, 1u32, 3u32), (3, 1, 2), (2, 2, 2), (3, 1, 3)] {
            let f = make_field(p, e, None).unwrap();
            let m = &irreducible_enumerate(&f, d).unwrap()[0];
            for n in 1..m.group_order() {
                let twisted = (p * n) % m.group_order();
                for i in 0..d {
                    let lhs = s_mod(i, twisted, m).unwrap();
                    let rhs = m.pow(&s_mod(i, n, m).unwrap(), p);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn degree_law_small() {
        let budget = Budget::default();
        for p in [2u64, 3, 5] {
            let f = make_field(p, 1, None).unwrap();
            for n in 0..60 {
                for i in 0..=3 {
                    let s = s_exact(i, n, &f, budget).unwrap();
                    assert_eq!(s.degree(), gekeler_degree_bound(i, n, &f), "p={p} i={i} n={n}");
                    let vanishes = digit_sum(n, p) / (p - 1) < i as u64;
                    assert_eq!(s.is_zero(), vanishes);
                }
            }
        }
    }

    #[test]
    fn closed_form_window() {
        let b = Budget::default();
        for p in [2u64, 3, 5, 7] {
            let f = make_field(p, 1, None).unwrap();
            for n in 0..p * p {
                match s1_closed_form(n, &f) {
                    Ok(cf) => assert_eq!(cf, s_exact(1, n, &f, b).unwrap(), "p={p} n={n}"),
                    Err(Error::OutOfWindow(_)) => {}
                    Err(other) => panic!("{other}"),
                }
            }
        }
        let f = f3();
        assert_eq!(s1_closed_form(5, &f).unwrap(), poly(&[0, 1, 0, 2]));
        assert_eq!(s1_closed_form(4, &f).unwrap(), poly(&[2]));
        assert!(matches!(s1_closed_form(8, &f), Err(Error::OutOfWindow(8))));
        let f4 = make_field(2, 2, None).unwrap();
        assert!(matches!(s1_closed_form(3, &f4), Err(Error::NotPrimeField)));
    }

    #[test]
    fn f_poly_examples() {
        let f = f3();
        let b = Budget::default();
        assert_eq!(f_poly(8, &f, b).unwrap(), poly(&[0, 0, 2, 0, 2, 0, 2]));
        assert_eq!(f_poly(8, &f, b).unwrap().degree(), Degree::Finite(6));
        let f4 = make_field(2, 2, None).unwrap();
        assert_eq!(f_poly(10, &f4, b).unwrap(), FqPoly::one());
        for n in (2..=40).step_by(2) {
            assert!(f_symmetries_hold(n, &f, b).unwrap(), "n={n}");
        }
    }
}
