//! The generating polynomials `C_n(u) = sum_i s_i(n) u^i` and `B_n(u)`.
//!
//! For `n` not divisible by `q - 1`, `B_n = C_n`. For zero-class `n` the
//! coefficients of `B_n` are the partial sums `sum_{j<=i} s_j(n)`, which is
//! `C_n(u) / (1 - u)` because `C_n(1) = 0`.

use std::fmt;

use crate::degree::Degree;
use crate::digits::digit_profile;
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::poly::{FqPoly, Modulus};
use crate::powersums::{s_exact, s_mod_unchecked, Budget};

/// Where the coefficients of a [`UPoly`] live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffDomain {
    /// Exact polynomials in `A`.
    Exact,
    /// Residues modulo the recorded modulus.
    Residue(Modulus),
}

/// A polynomial in `u` whose coefficients are polynomials in `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<FqPoly>,
    domain: CoeffDomain,
}

/// How to compute power sums: exactly in `A` (with the degree `d` fixing
/// the index range), or reduced modulo `m`.
#[derive(Clone, Copy, Debug)]
pub enum Mode<'a> {
    Exact { field: &'a FieldCtx, d: u32, budget: Budget },
    Residue(&'a Modulus),
}

impl Mode<'_> {
    fn field(&self) -> &FieldCtx {
        match self {
            Mode::Exact { field, .. } => field,
            Mode::Residue(m) => m.field(),
        }
    }

    fn degree(&self) -> u32 {
        match self {
            Mode::Exact { d, .. } => *d,
            Mode::Residue(m) => m.degree(),
        }
    }

    fn domain(&self) -> CoeffDomain {
        match self {
            Mode::Exact { .. } => CoeffDomain::Exact,
            Mode::Residue(m) => CoeffDomain::Residue((*m).clone()),
        }
    }

    fn power_sum(&self, i: u32, n: u64) -> Result<FqPoly> {
        match self {
            Mode::Exact { field, budget, .. } => s_exact(i, n, field, *budget),
            Mode::Residue(m) => s_mod_unchecked(i, n, m),
        }
    }
}

impl UPoly {
    pub fn new(mut coeffs: Vec<FqPoly>, domain: CoeffDomain) -> Self {
        while coeffs.last().is_some_and(FqPoly::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs, domain }
    }

    pub fn one(domain: CoeffDomain) -> Self {
        UPoly { coeffs: vec![FqPoly::one()], domain }
    }

    pub fn coeffs(&self) -> &[FqPoly] {
        &self.coeffs
    }

    pub fn domain(&self) -> &CoeffDomain {
        &self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `P(1) = sum of coefficients`.
    pub fn eval_one(&self, f: &FieldCtx) -> FqPoly {
        let s = self.coeffs.iter().fold(FqPoly::zero(), |acc, c| acc.add(c, f));
        match &self.domain {
            CoeffDomain::Exact => s,
            CoeffDomain::Residue(m) => m.reduce(&s),
        }
    }

    /// Product of two residue-mode polynomials over the same modulus.
    pub fn mul_residue(&self, other: &UPoly) -> Result<UPoly> {
        let m = match (&self.domain, &other.domain) {
            (CoeffDomain::Residue(a), CoeffDomain::Residue(b)) if a == b => a,
            _ => return Err(Error::Internal("residue product over mismatched domains".into())),
        };
        if self.is_zero() || other.is_zero() {
            return Ok(UPoly::new(Vec::new(), self.domain.clone()));
        }
        let f = m.field();
        let mut out = vec![FqPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&m.mul(a, b), f);
            }
        }
        Ok(UPoly::new(out, self.domain.clone()))
    }

    pub fn display<'a>(&'a self, f: &'a FieldCtx) -> impl fmt::Display + 'a {
        UDisplay { poly: self, field: f }
    }
}

struct UDisplay<'a> {
    poly: &'a UPoly,
    field: &'a FieldCtx,
}

/// `u-degree; coeff0; coeff1; ...`
impl fmt::Display for UDisplay<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", u_degree(self.poly))?;
        for c in &self.poly.coeffs {
            write!(out, "; {}", c.display(self.field))?;
        }
        Ok(())
    }
}

/// Index of the last nonzero coefficient; `NegInf` for zero.
pub fn u_degree(p: &UPoly) -> Degree {
    match p.coeffs.len() {
        0 => Degree::NegInf,
        k => Degree::Finite(k as u64 - 1),
    }
}

/// Power sums `s_0(n), ..., s_k(n)`, `k = floor(l(n)/(q-1))`; the higher
/// ones vanish identically.
fn power_sums(n: u64, mode: &Mode<'_>) -> Result<(Vec<FqPoly>, bool)> {
    let f = mode.field();
    let prof = digit_profile(n, f, mode.degree())?;
    let top = prof.ell / (f.q() - 1);
    let sums = (0..=top as u32).map(|i| mode.power_sum(i, n)).collect::<Result<Vec<_>>>()?;
    Ok((sums, prof.zero_class))
}

/// `C_n(u)` for `1 <= n <= q^d - 2`.
pub fn c_poly(n: u64, mode: Mode<'_>) -> Result<UPoly> {
    let (sums, _) = power_sums(n, &mode)?;
    Ok(UPoly::new(sums, mode.domain()))
}

fn partial_sums(sums: &[FqPoly], len: usize, f: &FieldCtx) -> Vec<FqPoly> {
    let mut out = Vec::with_capacity(len);
    let mut acc = FqPoly::zero();
    for i in 0..len {
        if let Some(s) = sums.get(i) {
            acc = acc.add(s, f);
        }
        out.push(acc.clone());
    }
    out
}

/// Divides `C(u)` by `(1 - u)` with Horner's scheme from the top degree.
/// Returns the quotient coefficients and the remainder `C(1)`.
pub fn divide_by_one_minus_u(c: &[FqPoly], f: &FieldCtx) -> (Vec<FqPoly>, FqPoly) {
    if c.is_empty() {
        return (Vec::new(), FqPoly::zero());
    }
    // C(u) = (u - 1) H(u) + R, so C / (1 - u) = -H with the same remainder
    let k = c.len() - 1;
    let mut h = vec![FqPoly::zero(); k];
    let mut carry = FqPoly::zero();
    for j in (1..=k).rev() {
        carry = c[j].add(&carry, f);
        h[j - 1] = carry.clone();
    }
    let rem = c[0].add(&carry, f);
    (h.into_iter().map(|x| x.neg(f)).collect(), rem)
}

/// `B_n(u)` per the partial-sum definition. In exact mode the result is
/// cross-checked against division of `C_n(u)` by `(1 - u)`.
pub fn b_poly(n: u64, mode: Mode<'_>) -> Result<UPoly> {
    let f = mode.field();
    let d = mode.degree() as usize;
    let (sums, zero_class) = power_sums(n, &mode)?;
    let coeffs = if zero_class {
        let mut v = partial_sums(&sums, d.saturating_sub(1), f);
        if let CoeffDomain::Residue(m) = mode.domain() {
            v = v.iter().map(|c| m.reduce(c)).collect();
        }
        v
    } else {
        sums.clone()
    };
    let b = UPoly::new(coeffs, mode.domain());

    if zero_class && matches!(mode, Mode::Exact { .. }) {
        let (quot, rem) = divide_by_one_minus_u(&sums, f);
        if !rem.is_zero() {
            return Err(Error::NonzeroDivisionRemainder(n));
        }
        if UPoly::new(quot, CoeffDomain::Exact) != b {
            return Err(Error::Internal(format!(
                "partial sums and division disagree for B_{n}(u)"
            )));
        }
    }
    Ok(b)
}
