//! Base-`q` digit combinatorics of exponents.

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::field::FieldCtx;

/// Base-`q` digits of `n` restricted to `d` places.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitProfile {
    pub n: u64,
    /// `a_0, ..., a_{d-1}`, ascending.
    pub digits: Vec<u64>,
    /// `l(n) = sum a_i`.
    pub ell: u64,
    /// `(q - 1) | n`.
    pub zero_class: bool,
}

/// Base-`q` digits of `n`, ascending, without leading zeros (empty for 0).
pub fn base_digits(mut n: u64, q: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % q);
        n /= q;
    }
    out
}

/// `l(n)` over all base-`q` places.
pub fn digit_sum(n: u64, q: u64) -> u64 {
    base_digits(n, q).iter().sum()
}

fn check_range(n: u64, f: &FieldCtx, d: u32) -> Result<u64> {
    let qd = f.q_pow(d)?;
    if n == 0 || n + 2 > qd {
        return Err(Error::OutOfRange(format!("n = {n} outside [1, {}]", qd as i128 - 2)));
    }
    Ok(qd)
}

pub fn digit_profile(n: u64, f: &FieldCtx, d: u32) -> Result<DigitProfile> {
    check_range(n, f, d)?;
    let mut digits = base_digits(n, f.q());
    digits.resize(d as usize, 0);
    let ell = digits.iter().sum();
    Ok(DigitProfile { n, digits, ell, zero_class: n.is_multiple_of(f.q() - 1) })
}

/// `floor(l(n)/(q-1)) - 1` for zero-class `n`, `floor(l(n)/(q-1))` otherwise.
pub fn target_degree(n: u64, f: &FieldCtx, d: u32) -> Result<u64> {
    let prof = digit_profile(n, f, d)?;
    Ok(target_from(prof.ell, prof.zero_class, f.q()))
}

pub(crate) fn target_from(ell: u64, zero_class: bool, q: u64) -> u64 {
    let base = ell / (q - 1);
    if zero_class {
        // zero-class n >= 1 has ell >= q - 1
        base - 1
    } else {
        base
    }
}

/// One application of `rho` on a digit vector: strips `q - 1` units from
/// the lowest occupied places. Returns `None` when `l(n) < q - 1`.
fn rho_digits(digits: &mut [u64], q: u64) -> Option<u64> {
    let ell: u64 = digits.iter().sum();
    if ell < q - 1 {
        return None;
    }
    let mut left = q - 1;
    for a in digits.iter_mut() {
        let take = left.min(*a);
        *a -= take;
        left -= take;
        if left == 0 {
            break;
        }
    }
    Some(digits.iter().rev().fold(0u64, |acc, &a| acc * q + a))
}

/// `rho(n), rho^(2)(n), ...`, ending with the first `NegInf`.
pub fn rho_sequence(n: u64, f: &FieldCtx) -> Vec<Degree> {
    let q = f.q();
    let mut digits = base_digits(n, q);
    let mut out = Vec::new();
    loop {
        match rho_digits(&mut digits, q) {
            Some(v) => out.push(Degree::Finite(v)),
            None => {
                out.push(Degree::NegInf);
                return out;
            }
        }
    }
}

/// `rho^(1)(n) + ... + rho^(i)(n)`; `0` for `i = 0`.
pub fn gekeler_degree_bound(i: u32, n: u64, f: &FieldCtx) -> Degree {
    let seq = rho_sequence(n, f);
    (0..i as usize)
        .map(|k| seq.get(k).copied().unwrap_or(Degree::NegInf))
        .fold(Degree::Finite(0), |acc, x| acc + x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use proptest::prelude::*;

    fn f3() -> FieldCtx {
        make_field(3, 1, None).unwrap()
    }

    /// `rho` straight from the integer definition: expand `n = sum q^{e_i}`
    /// with ascending `e_i` and subtract the first `q - 1` terms.
    fn rho_integer(n: u64, q: u64) -> Option<u64> {
        let mut es = Vec::new();
        for (j, a) in base_digits(n, q).into_iter().enumerate() {
            es.extend(std::iter::repeat_n(j as u32, a as usize));
        }
        if (es.len() as u64) < q - 1 {
            return None;
        }
        Some(n - es.iter().take((q - 1) as usize).map(|&e| q.pow(e)).sum::<u64>())
    }

    #[test]
    fn profile_examples() {
        let f = f3();
        let p5 = digit_profile(5, &f, 3).unwrap();
        assert_eq!((p5.digits.clone(), p5.ell, p5.zero_class), (vec![2, 1, 0], 3, false));
        let p8 = digit_profile(8, &f, 3).unwrap();
        assert_eq!((p8.digits.clone(), p8.ell, p8.zero_class), (vec![2, 2, 0], 4, true));
        for (q, e, d) in [(3u64, 1u32, 3u32), (2, 1, 4), (4, 1, 2)] {
            let f = if q == 4 { make_field(2, 2, None).unwrap() } else { make_field(q, e, None).unwrap() };
            let top = f.q_pow(d).unwrap() - 2;
            assert_eq!(digit_profile(top, &f, d).unwrap().ell, d as u64 * (f.q() - 1) - 1);
        }
        assert!(matches!(digit_profile(0, &f, 3), Err(Error::OutOfRange(_))));
        assert!(matches!(digit_profile(26, &f, 3), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn target_examples() {
        let f = f3();
        assert_eq!(target_degree(5, &f, 3).unwrap(), 1);
        assert_eq!(target_degree(8, &f, 3).unwrap(), 1);
        assert_eq!(target_degree(2, &f, 3).unwrap(), 0);
    }

    #[test]
    fn rho_examples() {
        let f = f3();
        assert_eq!(rho_sequence(5, &f), vec![Degree::Finite(3), Degree::NegInf]);
        assert_eq!(
            rho_sequence(8, &f),
            vec![Degree::Finite(6), Degree::Finite(0), Degree::NegInf]
        );
        assert_eq!(rho_sequence(1, &f), vec![Degree::NegInf]);
        assert_eq!(gekeler_degree_bound(0, 5, &f), Degree::Finite(0));
        assert_eq!(gekeler_degree_bound(1, 5, &f), Degree::Finite(3));
        assert_eq!(gekeler_degree_bound(2, 5, &f), Degree::NegInf);
        assert_eq!(gekeler_degree_bound(2, 8, &f), Degree::Finite(6));
        assert_eq!(gekeler_degree_bound(5, 8, &f), Degree::NegInf);
    }

    #[test]
    fn digit_symmetry_exhaustive() {
        for (p, e, d) in [(2u64, 1u32, 4u32), (3, 1, 3), (2, 2, 3), (5, 1, 2)] {
            let f = make_field(p, e, None).unwrap();
            let qd = f.q_pow(d).unwrap();
            for n in 1..=qd - 2 {
                let a = digit_profile(n, &f, d).unwrap();
                let b = digit_profile(qd - 1 - n, &f, d).unwrap();
                assert_eq!(a.ell + b.ell, (f.q() - 1) * d as u64);
                assert_eq!(a.ell.is_multiple_of(f.q() - 1), a.zero_class);
            }
        }
    }

    proptest! {
        #[test]
        fn rho_digit_vector_matches_integer_definition(
            q in prop_oneof![Just(2u64), Just(3), Just(4), Just(5), Just(7), Just(9)],
            n in 0u64..200_000,
        ) {
            let mut digits = base_digits(n, q);
            prop_assert_eq!(rho_digits(&mut digits, q), rho_integer(n, q));
        }
    }
}
