//! Arithmetic in the coefficient field `F_q = F_p[x]/(f(x))`.
//!
//! Elements are stored as packed base-`p` codes: the element
//! `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` has code `sum c_j p^j`. Code order
//! is therefore ascending lexicographic coefficient order with `c_0`
//! varying fastest, which is the enumeration order used throughout.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{monic_enumerate, FqPoly};

/// Default bound on `q`, `q^d` and every exponent.
pub const DEFAULT_LIMIT: u64 = 1 << 40;

/// Largest limit accepted by [`FieldCtx::with_limit`].
pub const MAX_LIMIT: u64 = 1 << 62;

/// Fields up to this size (with `e > 1`) get log/antilog tables.
const TABLE_MAX_Q: u64 = 1 << 16;

const MAX_E: usize = 62;

/// An element of `F_q`, as a packed base-`p` code in `[0, q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElem(u64);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn code(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Caller guarantees `code < q` for the field in use.
    pub(crate) fn from_code(code: u64) -> FqElem {
        FqElem(code)
    }
}

#[derive(Debug)]
struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The finite field `F_q`, `q = p^e`. Immutable once built.
#[derive(Clone)]
pub struct FieldCtx {
    p: u64,
    e: u32,
    q: u64,
    /// Monic defining polynomial over `F_p`, ascending, length `e + 1`.
    modulus: Vec<u64>,
    limit: u64,
    tables: Option<Arc<LogTables>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut k = 3u64;
    while k.saturating_mul(k) <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

/// Distinct prime factors in ascending order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2u64;
    while k.saturating_mul(k) <= n {
        if n.is_multiple_of(k) {
            out.push(k);
            while n.is_multiple_of(k) {
                n /= k;
            }
        }
        k += if k == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `base^exp` if it does not exceed `limit`.
pub fn checked_pow_within(base: u64, exp: u32, limit: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
        if acc > limit {
            return None;
        }
    }
    Some(acc)
}

/// Builds `F_{p^e}` with the default limit.
///
/// With `field_modulus == None` the defining polynomial is the first monic
/// irreducible of degree `e` over `F_p` in enumeration order (`a_0` fastest).
/// For `e = 1` the modulus is the degenerate `x`.
pub fn make_field(p: u64, e: u32, field_modulus: Option<&[u64]>) -> Result<FieldCtx> {
    FieldCtx::with_limit(p, e, field_modulus, DEFAULT_LIMIT)
}

impl FieldCtx {
    pub fn with_limit(p: u64, e: u32, field_modulus: Option<&[u64]>, limit: u64) -> Result<Self> {
        if limit > MAX_LIMIT {
            return Err(Error::Overflow(format!("limit {limit} exceeds 2^62")));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidFieldModulus("extension degree must be >= 1".into()));
        }
        let q = checked_pow_within(p, e, limit)
            .ok_or_else(|| Error::Overflow(format!("q = {p}^{e} exceeds limit {limit}")))?;

        let prime = FieldCtx { p, e: 1, q: p, modulus: vec![0, 1], limit, tables: None };
        if e == 1 {
            if let Some(m) = field_modulus {
                if m.len() != 2 || m[1] != 1 || m[0] >= p {
                    return Err(Error::InvalidFieldModulus(
                        "a prime field takes no modulus other than a monic linear".into(),
                    ));
                }
            }
            return Ok(prime);
        }

        let modulus = match field_modulus {
            Some(m) => {
                if m.len() != e as usize + 1 {
                    return Err(Error::InvalidFieldModulus(format!(
                        "expected degree {e}, got {} coefficients",
                        m.len()
                    )));
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(Error::CoefficientOutOfRange(format!("{c} not in [0, {p})")));
                }
                if m[e as usize] != 1 {
                    return Err(Error::InvalidFieldModulus("field modulus must be monic".into()));
                }
                let poly = FqPoly::from_coeffs(m.iter().map(|&c| FqElem(c)).collect());
                if !poly.is_irreducible(&prime)? {
                    return Err(Error::ReducibleFieldModulus);
                }
                m.to_vec()
            }
            None => {
                let mut found = None;
                for cand in monic_enumerate(&prime, e)? {
                    if cand.is_irreducible(&prime)? {
                        found = Some(cand.coeffs().iter().map(|c| c.code()).collect::<Vec<_>>());
                        break;
                    }
                }
                found.ok_or_else(|| Error::Internal("no irreducible of degree e found".into()))?
            }
        };

        let mut ctx = FieldCtx { p, e, q, modulus, limit, tables: None };
        if q <= TABLE_MAX_Q {
            ctx.tables = Some(Arc::new(ctx.build_tables()));
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }

    /// Ascending coefficients of the defining polynomial (length `e + 1`).
    pub fn field_modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The defining polynomial in the variable `x`, e.g. `x^2+x+1`.
    pub fn field_modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (k, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            terms.push(match (c, k) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        terms.join("+")
    }

    /// `q^k` if within the configured limit.
    pub fn q_pow(&self, k: u32) -> Result<u64> {
        checked_pow_within(self.q, k, self.limit)
            .ok_or_else(|| Error::Overflow(format!("{}^{k} exceeds limit {}", self.q, self.limit)))
    }

    pub fn elem(&self, code: u64) -> Result<FqElem> {
        if code >= self.q {
            return Err(Error::CoefficientOutOfRange(format!("{code} not in [0, {})", self.q)));
        }
        Ok(FqElem(code))
    }

    /// Element from coefficients over `F_p` in the basis `1, x, ..., x^{e-1}`.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FqElem> {
        if coeffs.len() > self.e as usize {
            return Err(Error::CoefficientOutOfRange(format!(
                "{} coefficients for an extension of degree {}",
                coeffs.len(),
                self.e
            )));
        }
        let mut code = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::CoefficientOutOfRange(format!("{c} not in [0, {})", self.p)));
            }
            code = code * self.p + c;
        }
        Ok(FqElem(code))
    }

    /// Length-`e` coefficient vector of `a`.
    pub fn coeffs(&self, a: FqElem) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.e as usize);
        let mut v = a.0;
        for _ in 0..self.e {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    /// Image of `k` under `Z -> F_p -> F_q`.
    pub fn from_int(&self, k: u64) -> FqElem {
        FqElem(k % self.p)
    }

    pub fn enumerate(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(FqElem)
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.e == 1 {
            let s = a.0 + b.0;
            return FqElem(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return FqElem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut code = 0u64;
        let mut place = 1u64;
        for _ in 0..self.e {
            let s = (x % self.p + y % self.p) % self.p;
            code += s * place;
            place = place.wrapping_mul(self.p);
            x /= self.p;
            y /= self.p;
        }
        FqElem(code)
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        if self.e == 1 {
            return FqElem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut code = 0u64;
        let mut place = 1u64;
        for _ in 0..self.e {
            let d = x % self.p;
            code += ((self.p - d) % self.p) * place;
            place = place.wrapping_mul(self.p);
            x /= self.p;
        }
        FqElem(code)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        if self.e == 1 {
            return FqElem(((a.0 as u128 * b.0 as u128) % self.p as u128) as u64);
        }
        if let Some(t) = &self.tables {
            let order = (self.q - 1) as usize;
            let mut k = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
            if k >= order {
                k -= order;
            }
            return FqElem(t.exp[k] as u64);
        }
        self.mul_general(a, b)
    }

    /// Multiplication by schoolbook product and reduction; the reference path.
    pub(crate) fn mul_general(&self, a: FqElem, b: FqElem) -> FqElem {
        let e = self.e as usize;
        let p = self.p as u128;
        let mut x = [0u64; MAX_E];
        let mut y = [0u64; MAX_E];
        self.unpack(a, &mut x);
        self.unpack(b, &mut y);
        let mut prod = [0u128; 2 * MAX_E];
        for i in 0..e {
            if x[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + x[i] as u128 * y[j] as u128) % p;
            }
        }
        for k in (e..2 * e - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..e {
                let sub = c * self.modulus[j] as u128 % p;
                prod[k - e + j] = (prod[k - e + j] + p - sub) % p;
            }
        }
        let mut code = 0u64;
        for k in (0..e).rev() {
            code = code * self.p + prod[k] as u64;
        }
        FqElem(code)
    }

    fn unpack(&self, a: FqElem, out: &mut [u64; MAX_E]) {
        let mut v = a.0;
        for slot in out.iter_mut().take(self.e as usize) {
            *slot = v % self.p;
            v /= self.p;
        }
    }

    /// Square-and-multiply.
    pub fn pow(&self, a: FqElem, mut k: u64) -> FqElem {
        let mut base = a;
        let mut acc = FqElem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.tables {
            let order = (self.q - 1) as usize;
            let l = t.log[a.0 as usize] as usize;
            return Ok(FqElem(t.exp[(order - l) % order] as u64));
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn frobenius(&self, a: FqElem) -> FqElem {
        if self.e == 1 {
            return a;
        }
        self.pow(a, self.p)
    }

    fn build_tables(&self) -> LogTables {
        let order = self.q - 1;
        let factors = prime_factors(order);
        let slow_pow = |a: FqElem, mut k: u64| {
            let mut base = a;
            let mut acc = FqElem::ONE;
            while k > 0 {
                if k & 1 == 1 {
                    acc = self.mul_general(acc, base);
                }
                base = self.mul_general(base, base);
                k >>= 1;
            }
            acc
        };
        let gen = (1..self.q)
            .map(FqElem)
            .find(|&g| factors.iter().all(|&r| slow_pow(g, order / r) != FqElem::ONE))
            .expect("the unit group of a finite field is cyclic");
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut cur = FqElem::ONE;
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = cur.0 as u32;
            log[cur.0 as usize] = k as u32;
            cur = self.mul_general(cur, gen);
        }
        LogTables { exp, log }
    }

    /// Parses an element literal: a decimal in `[0, p)`, or for `e > 1` a
    /// bracketed ascending coefficient list such as `[1,0,1]`.
    pub fn parse_elem(&self, text: &str) -> Result<FqElem> {
        let t = text.trim();
        if let Some(inner) = t.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or_else(|| Error::Parse {
                pos: t.len(),
                msg: "unterminated coefficient list".into(),
            })?;
            let mut coeffs = Vec::new();
            for (k, piece) in inner.split(',').enumerate() {
                let v: u64 = piece.trim().parse().map_err(|_| Error::Parse {
                    pos: k,
                    msg: format!("bad coefficient '{}'", piece.trim()),
                })?;
                coeffs.push(v);
            }
            return self.from_coeffs(&coeffs);
        }
        let v: u64 = t
            .parse()
            .map_err(|_| Error::Parse { pos: 0, msg: format!("bad field element '{t}'") })?;
        if v >= self.p {
            return Err(Error::CoefficientOutOfRange(format!("{v} not in [0, {})", self.p)));
        }
        Ok(FqElem(v))
    }

    pub fn format_elem(&self, a: FqElem) -> String {
        if self.e == 1 {
            return a.0.to_string();
        }
        let parts: Vec<String> = self.coeffs(a).iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f4() -> FieldCtx {
        make_field(2, 2, None).unwrap()
    }

    #[test]
    fn prime_field_context() {
        let f = make_field(3, 1, None).unwrap();
        assert_eq!(f.q(), 3);
        assert_eq!(f.field_modulus(), &[0, 1]);
        assert_eq!(f.field_modulus_string(), "x");
    }

    #[test]
    fn default_modulus_for_f4() {
        let f = f4();
        assert_eq!(f.field_modulus(), &[1, 1, 1]);
        assert_eq!(f.field_modulus_string(), "x^2+x+1");
        assert_eq!(f.q(), 4);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(make_field(2, 2, Some(&[1, 0, 1])), Err(Error::ReducibleFieldModulus)));
        assert!(matches!(make_field(4, 1, None), Err(Error::NotPrime(4))));
        assert!(matches!(make_field(2, 41, None), Err(Error::Overflow(_))));
        assert!(matches!(make_field(3, 2, Some(&[1, 0, 2])), Err(Error::InvalidFieldModulus(_))));
    }

    #[test]
    fn small_products() {
        let f3 = make_field(3, 1, None).unwrap();
        assert_eq!(f3.mul(FqElem(2), FqElem(2)), FqElem(1));
        let f = f4();
        let x = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.mul(x, x), f.from_coeffs(&[1, 1]).unwrap());
    }

    #[test]
    fn enumeration_order() {
        let f3 = make_field(3, 1, None).unwrap();
        let all: Vec<_> = f3.enumerate().collect();
        assert_eq!(all, vec![FqElem(0), FqElem(1), FqElem(2)]);
        let sum = all.iter().fold(FqElem::ZERO, |acc, &a| f3.add(acc, a));
        assert_eq!(sum, FqElem::ZERO);
        let f = f4();
        let shown: Vec<_> = f.enumerate().map(|a| f.coeffs(a)).collect();
        assert_eq!(shown, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn unit_group_order_and_frobenius_period() {
        for (p, e) in [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (5, 2), (2, 4)] {
            let f = make_field(p, e, None).unwrap();
            for a in f.enumerate() {
                if !a.is_zero() {
                    assert_eq!(f.pow(a, f.q() - 1), FqElem::ONE);
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FqElem::ONE);
                }
                assert_eq!(f.pow(a, f.q()), a);
            }
        }
        assert!(matches!(f4().inv(FqElem::ZERO), Err(Error::DivisionByZero)));
    }

    #[test]
    fn tables_agree_with_general_path() {
        for (p, e) in [(2, 2), (2, 5), (3, 3), (7, 2)] {
            let f = make_field(p, e, None).unwrap();
            assert!(f.tables.is_some());
            for a in f.enumerate() {
                for b in f.enumerate() {
                    assert_eq!(f.mul(a, b), f.mul_general(a, b));
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = make_field(3, 11, None).unwrap();
        assert!(f.tables.is_none());
        let a = f.from_coeffs(&[1, 2, 0, 1]).unwrap();
        assert_eq!(f.mul(a, f.inv(a).unwrap()), FqElem::ONE);
        assert_eq!(f.pow(a, f.q()), a);
    }

    #[test]
    fn literal_syntax() {
        let f = f4();
        let a = f.parse_elem("[1,1]").unwrap();
        assert_eq!(f.format_elem(a), "[1,1]");
        assert_eq!(f.parse_elem("1").unwrap(), FqElem::ONE);
        assert!(f.parse_elem("2").is_err());
        assert!(f.parse_elem("[1,0,1]").is_err());
        let f3 = make_field(3, 1, None).unwrap();
        assert_eq!(f3.format_elem(FqElem(2)), "2");
        assert!(f3.parse_elem("3").is_err());
    }

    #[test]
    fn primes_and_factors() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
    }

    fn field_strategy() -> impl Strategy<Value = (u64, u32)> {
        prop_oneof![Just((3, 1)), Just((2, 3)), Just((3, 2)), Just((5, 2)), Just((3, 12))]
    }

    proptest! {
        #[test]
        fn field_axioms((p, e) in field_strategy(), ra in any::<u64>(), rb in any::<u64>(), rc in any::<u64>()) {
            let f = make_field(p, e, None).unwrap();
            let (a, b, c) = (FqElem(ra % f.q()), FqElem(rb % f.q()), FqElem(rc % f.q()));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
            prop_assert_eq!(f.frobenius(a), f.pow(a, p));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            prop_assert_eq!(f.parse_elem(&f.format_elem(a)).unwrap(), a);
        }
    }
}
