//! The polynomial ring `A = F_q[T]` and residue arithmetic in `A/mA`.

use std::fmt;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::field::{prime_factors, FieldCtx, FqElem};

/// Largest exponent accepted by the text parser.
const MAX_PARSE_EXPONENT: u64 = 1 << 20;

/// A polynomial in `T` with ascending coefficients; no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqPoly {
    coeffs: Vec<FqElem>,
}

fn trim(v: &mut Vec<FqElem>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl FqPoly {
    pub fn from_coeffs(mut coeffs: Vec<FqElem>) -> Self {
        trim(&mut coeffs);
        FqPoly { coeffs }
    }

    pub fn zero() -> Self {
        FqPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        FqPoly { coeffs: vec![FqElem::ONE] }
    }

    pub fn constant(c: FqElem) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `T`.
    pub fn t() -> Self {
        FqPoly { coeffs: vec![FqElem::ZERO, FqElem::ONE] }
    }

    pub fn monomial(c: FqElem, k: usize) -> Self {
        let mut coeffs = vec![FqElem::ZERO; k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FqElem {
        self.coeffs.get(k).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInf,
            n => Degree::Finite(n as u64 - 1),
        }
    }

    pub fn leading(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FqElem::ONE
    }

    pub fn add(&self, other: &Self, f: &FieldCtx) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n).map(|k| f.add(self.coeff(k), other.coeff(k))).collect();
        Self::from_coeffs(out)
    }

    pub fn neg(&self, f: &FieldCtx) -> Self {
        FqPoly { coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }

    pub fn sub(&self, other: &Self, f: &FieldCtx) -> Self {
        self.add(&other.neg(f), f)
    }

    pub fn scale(&self, c: FqElem, f: &FieldCtx) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self, f: &FieldCtx) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::from_coeffs(out)
    }

    /// Euclidean division: `self = quot * b + rem` with `deg rem < deg b`.
    pub fn divrem(&self, b: &Self, f: &FieldCtx) -> Result<(Self, Self)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.coeffs.len() < b.coeffs.len() {
            return Ok((Self::zero(), self.clone()));
        }
        let lead_inv = f.inv(b.leading())?;
        let db = b.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FqElem::ZERO; rem.len() - db];
        for k in (db..rem.len()).rev() {
            let c = rem[k];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, lead_inv);
            quot[k - db] = factor;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                rem[k - db + j] = f.sub(rem[k - db + j], f.mul(factor, bj));
            }
        }
        rem.truncate(db);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    pub fn rem(&self, b: &Self, f: &FieldCtx) -> Result<Self> {
        Ok(self.divrem(b, f)?.1)
    }

    pub fn make_monic(&self, f: &FieldCtx) -> Result<Self> {
        let inv = f.inv(self.leading())?;
        Ok(self.scale(inv, f))
    }

    /// Monic greatest common divisor (zero for `gcd(0, 0)`).
    pub fn gcd(&self, other: &Self, f: &FieldCtx) -> Result<Self> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.make_monic(f)
        }
    }

    pub fn eval(&self, x: FqElem, f: &FieldCtx) -> FqElem {
        self.coeffs.iter().rev().fold(FqElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self(a*T + b)` by Horner's rule.
    pub fn compose_linear(&self, a: FqElem, b: FqElem, f: &FieldCtx) -> Self {
        let lin = FqPoly::from_coeffs(vec![b, a]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, &c| acc.mul(&lin, f).add(&Self::constant(c), f))
    }

    /// Coefficient reversal against a fixed length: `T^(len-1) * self(1/T)`.
    pub fn reversed(&self, len: usize) -> Self {
        let mut v = self.coeffs.clone();
        v.resize(len.max(v.len()), FqElem::ZERO);
        Self::from_coeffs(v.into_iter().take(len).rev().collect())
    }

    /// `self^(p^j)`: raises every coefficient to `p^j` and spreads exponents.
    fn frobenius_spread(&self, j: u32, f: &FieldCtx) -> Vec<(usize, FqElem)> {
        let stride = (f.p() as usize).pow(j);
        let twist = j % f.e();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, &c)| {
                let mut v = c;
                for _ in 0..twist {
                    v = f.frobenius(v);
                }
                (k * stride, v)
            })
            .collect()
    }

    fn mul_sparse(&self, sparse: &[(usize, FqElem)], f: &FieldCtx) -> Self {
        if self.is_zero() || sparse.is_empty() {
            return Self::zero();
        }
        let top = sparse.iter().map(|&(k, _)| k).max().unwrap_or(0);
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + top];
        for &(k, b) in sparse {
            for (i, &a) in self.coeffs.iter().enumerate() {
                out[i + k] = f.add(out[i + k], f.mul(a, b));
            }
        }
        Self::from_coeffs(out)
    }

    fn pow_dense(&self, mut n: u64, f: &FieldCtx) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// Exact power in `A`.
    ///
    /// Uses `a^n = prod_j (a^{n_j})^{p^j}` over the base-`p` digits `n_j`;
    /// each `p^j`-th power is a sparse coefficient spread.
    pub fn pow(&self, mut n: u64, f: &FieldCtx) -> Self {
        if n == 0 {
            return Self::one();
        }
        if self.is_zero() {
            return Self::zero();
        }
        let p = f.p();
        let mut acc = Self::one();
        let mut j = 0u32;
        while n > 0 {
            let digit = n % p;
            if digit > 0 {
                let small = self.pow_dense(digit, f);
                if j == 0 {
                    acc = acc.mul(&small, f);
                } else {
                    acc = acc.mul_sparse(&small.frobenius_spread(j, f), f);
                }
            }
            n /= p;
            j += 1;
        }
        acc
    }

    /// Gcd/Frobenius irreducibility test (Rabin). Accepts non-monic input.
    pub fn is_irreducible(&self, f: &FieldCtx) -> Result<bool> {
        let k = match self.degree() {
            Degree::Finite(k) if k >= 1 => k as usize,
            _ => return Err(Error::DegreeTooSmall),
        };
        if k == 1 {
            return Ok(true);
        }
        let g = self.make_monic(f)?;
        let t = Self::t();
        // frob[j] = T^{q^j} mod g
        let mut frob = Vec::with_capacity(k + 1);
        frob.push(t.clone());
        for j in 1..=k {
            let next = powmod_monic(&frob[j - 1], f.q(), &g, f);
            frob.push(next);
        }
        if frob[k] != t {
            return Ok(false);
        }
        for r in prime_factors(k as u64) {
            let h = frob[k / r as usize].sub(&t, f);
            if h.gcd(&g, f)?.degree() != Degree::Finite(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Parses the polynomial grammar: `+`-separated terms `c*T^k`, `c*T`,
    /// `T^k`, `T`, `c` (implicit `cT^k` also accepted), or a compact
    /// ascending list `c0,c1,...`. Whitespace is ignored; `-` subtracts.
    pub fn parse(text: &str, f: &FieldCtx) -> Result<Self> {
        let chars: Vec<(usize, char)> =
            text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::Parse { pos: 0, msg: "empty polynomial".into() });
        }
        let mut depth = 0i32;
        let mut top_comma = false;
        let mut has_t = false;
        for &(pos, c) in &chars {
            match c {
                '[' => depth += 1,
                ']' => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(Error::Parse { pos, msg: "unbalanced ']'".into() });
                    }
                }
                ',' if depth == 0 => top_comma = true,
                'T' => has_t = true,
                _ => {}
            }
        }
        if depth != 0 {
            return Err(Error::Parse { pos: text.len(), msg: "unbalanced '['".into() });
        }
        if top_comma && !has_t {
            return parse_list(&chars, f);
        }

        let mut acc: Vec<FqElem> = Vec::new();
        let mut start = 0usize;
        let mut negative = false;
        let mut depth = 0i32;
        let mut terms: Vec<(bool, &[(usize, char)])> = Vec::new();
        for (idx, &(_, c)) in chars.iter().enumerate() {
            match c {
                '[' => depth += 1,
                ']' => depth -= 1,
                '+' | '-' if depth == 0 => {
                    if idx == start {
                        if idx == 0 {
                            negative = c == '-';
                            start = idx + 1;
                            continue;
                        }
                        return Err(Error::Parse {
                            pos: chars[idx].0,
                            msg: "empty term".into(),
                        });
                    }
                    terms.push((negative, &chars[start..idx]));
                    negative = c == '-';
                    start = idx + 1;
                }
                _ => {}
            }
        }
        if start >= chars.len() {
            return Err(Error::Parse { pos: text.len(), msg: "trailing operator".into() });
        }
        terms.push((negative, &chars[start..]));

        for (neg, term) in terms {
            let (coef, k) = parse_term(term, f)?;
            let coef = if neg { f.neg(coef) } else { coef };
            let k = k as usize;
            if acc.len() <= k {
                acc.resize(k + 1, FqElem::ZERO);
            }
            acc[k] = f.add(acc[k], coef);
        }
        Ok(Self::from_coeffs(acc))
    }

    /// Descending human form, e.g. `T^3+2*T+1`.
    pub fn format(&self, f: &FieldCtx) -> String {
        Display { poly: self, field: f, var: 'T' }.to_string()
    }

    pub fn display<'a>(&'a self, f: &'a FieldCtx) -> impl fmt::Display + 'a {
        Display { poly: self, field: f, var: 'T' }
    }
}

struct Display<'a> {
    poly: &'a FqPoly,
    field: &'a FieldCtx,
    var: char,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (k, &c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, "+")?;
            }
            first = false;
            let lit = self.field.format_elem(c);
            match k {
                0 => write!(out, "{lit}")?,
                _ => {
                    if c != FqElem::ONE {
                        write!(out, "{lit}*")?;
                    }
                    if k == 1 {
                        write!(out, "{}", self.var)?;
                    } else {
                        write!(out, "{}^{k}", self.var)?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn slice_str(chars: &[(usize, char)]) -> String {
    chars.iter().map(|&(_, c)| c).collect()
}

fn parse_list(chars: &[(usize, char)], f: &FieldCtx) -> Result<FqPoly> {
    let mut coeffs = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for idx in 0..=chars.len() {
        let c = chars.get(idx).map(|&(_, c)| c);
        match c {
            Some('[') => depth += 1,
            Some(']') => depth -= 1,
            Some(',') if depth == 0 => {}
            None => {}
            _ => continue,
        }
        if matches!(c, Some('[') | Some(']')) {
            continue;
        }
        let piece = &chars[start..idx];
        let pos = chars.get(start).map(|p| p.0).unwrap_or(0);
        if piece.is_empty() {
            return Err(Error::Parse { pos, msg: "empty list entry".into() });
        }
        coeffs.push(f.parse_elem(&slice_str(piece)).map_err(|e| relocate(e, pos))?);
        start = idx + 1;
    }
    Ok(FqPoly::from_coeffs(coeffs))
}

fn relocate(err: Error, pos: usize) -> Error {
    match err {
        Error::Parse { msg, .. } => Error::Parse { pos, msg },
        other => other,
    }
}

fn parse_term(term: &[(usize, char)], f: &FieldCtx) -> Result<(FqElem, u64)> {
    let pos = term[0].0;
    let t_idx = term.iter().position(|&(_, c)| c == 'T');
    let Some(t_idx) = t_idx else {
        let coef = f.parse_elem(&slice_str(term)).map_err(|e| relocate(e, pos))?;
        return Ok((coef, 0));
    };
    let mut prefix = &term[..t_idx];
    if let Some(&(_, '*')) = prefix.last() {
        prefix = &prefix[..prefix.len() - 1];
        if prefix.is_empty() {
            return Err(Error::Parse { pos, msg: "missing coefficient before '*'".into() });
        }
    }
    let coef = if prefix.is_empty() {
        FqElem::ONE
    } else {
        f.parse_elem(&slice_str(prefix)).map_err(|e| relocate(e, pos))?
    };
    let suffix = &term[t_idx + 1..];
    let k = if suffix.is_empty() {
        1
    } else {
        let spos = suffix[0].0;
        if suffix[0].1 != '^' || suffix.len() < 2 {
            return Err(Error::Parse { pos: spos, msg: "expected '^' after T".into() });
        }
        let digits = slice_str(&suffix[1..]);
        let k: u64 = digits
            .parse()
            .map_err(|_| Error::Parse { pos: spos + 1, msg: format!("bad exponent '{digits}'") })?;
        if k > MAX_PARSE_EXPONENT {
            return Err(Error::OutOfRange(format!("exponent {k} too large")));
        }
        k
    };
    Ok((coef, k))
}

/// `a mod g` for monic `g`.
fn rem_monic(mut a: Vec<FqElem>, g: &[FqElem], f: &FieldCtx) -> Vec<FqElem> {
    let dg = g.len() - 1;
    while a.len() > dg {
        let c = a.pop().expect("nonempty");
        if c.is_zero() {
            continue;
        }
        let base = a.len() - dg;
        for j in 0..dg {
            a[base + j] = f.sub(a[base + j], f.mul(c, g[j]));
        }
    }
    trim(&mut a);
    a
}

fn mulmod_monic(a: &FqPoly, b: &FqPoly, g: &FqPoly, f: &FieldCtx) -> FqPoly {
    FqPoly { coeffs: rem_monic(a.mul(b, f).coeffs, &g.coeffs, f) }
}

fn powmod_monic(a: &FqPoly, mut n: u64, g: &FqPoly, f: &FieldCtx) -> FqPoly {
    let mut base = FqPoly { coeffs: rem_monic(a.coeffs.clone(), &g.coeffs, f) };
    let mut acc = FqPoly { coeffs: rem_monic(vec![FqElem::ONE], &g.coeffs, f) };
    while n > 0 {
        if n & 1 == 1 {
            acc = mulmod_monic(&acc, &base, g, f);
        }
        n >>= 1;
        if n > 0 {
            base = mulmod_monic(&base, &base, g, f);
        }
    }
    acc
}

/// Lazy enumeration of the monic polynomials of a fixed degree, in
/// ascending lexicographic order with `a_0` varying fastest.
pub struct MonicIter {
    digits: Vec<u64>,
    q: u64,
    remaining: u64,
}

impl Iterator for MonicIter {
    type Item = FqPoly;

    fn next(&mut self) -> Option<FqPoly> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let mut coeffs: Vec<FqElem> = Vec::with_capacity(self.digits.len() + 1);
        // digits are always < q, so codes are valid
        coeffs.extend(self.digits.iter().map(|&d| FqElem::from_code(d)));
        coeffs.push(FqElem::ONE);
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < self.q {
                break;
            }
            *d = 0;
        }
        Some(FqPoly { coeffs })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for MonicIter {}

/// The `q^i` monic polynomials of degree `i`.
pub fn monic_enumerate(f: &FieldCtx, i: u32) -> Result<MonicIter> {
    let count = f.q_pow(i)?;
    Ok(MonicIter { digits: vec![0; i as usize], q: f.q(), remaining: count })
}

/// A monic irreducible modulus `m` of degree `d >= 1`, with its field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus {
    m: FqPoly,
    d: u32,
    group_order: u64,
    field: FieldCtx,
}

impl Modulus {
    pub fn new(m: FqPoly, f: &FieldCtx) -> Result<Self> {
        let d = match m.degree() {
            Degree::Finite(d) if d >= 1 => d as u32,
            _ => return Err(Error::NotIrreducible(m.format(f))),
        };
        if !m.is_monic() {
            return Err(Error::NotMonic(m.format(f)));
        }
        let qd = f.q_pow(d)?;
        if !m.is_irreducible(f)? {
            return Err(Error::NotIrreducible(m.format(f)));
        }
        Ok(Modulus { m, d, group_order: qd - 1, field: f.clone() })
    }

    pub fn parse(text: &str, f: &FieldCtx) -> Result<Self> {
        Self::new(FqPoly::parse(text, f)?, f)
    }

    pub fn poly(&self) -> &FqPoly {
        &self.m
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// `q^d - 1`, the order of `(A/mA)^x`.
    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn reduce(&self, a: &FqPoly) -> FqPoly {
        FqPoly { coeffs: rem_monic(a.coeffs.clone(), &self.m.coeffs, &self.field) }
    }

    pub fn mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        mulmod_monic(a, b, &self.m, &self.field)
    }

    pub fn pow(&self, a: &FqPoly, n: u64) -> FqPoly {
        powmod_monic(a, n, &self.m, &self.field)
    }

    pub fn to_text(&self) -> String {
        self.m.format(&self.field)
    }
}

/// `a^n mod m` by square-and-multiply.
pub fn residue_pow(a: &FqPoly, n: u64, m: &Modulus) -> FqPoly {
    m.pow(a, n)
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1i64;
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            n /= k;
            if n.is_multiple_of(k) {
                return 0;
            }
            result = -result;
        }
        k += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of monic irreducibles of degree `d` over `F_q`.
pub fn necklace_count(q: u64, d: u32) -> u128 {
    let mut total: i128 = 0;
    for r in 1..=d as u64 {
        if (d as u64).is_multiple_of(r) {
            total += mobius(r) as i128 * (q as i128).pow(d / r as u32);
        }
    }
    (total / d as i128) as u128
}

/// Every monic irreducible of degree `d`, in enumeration order.
pub fn irreducible_enumerate(f: &FieldCtx, d: u32) -> Result<Vec<Modulus>> {
    if d == 0 {
        return Err(Error::DegreeTooSmall);
    }
    let qd = f.q_pow(d)?;
    let mut out = Vec::new();
    for cand in monic_enumerate(f, d)? {
        if cand.is_irreducible(f)? {
            out.push(Modulus { m: cand, d, group_order: qd - 1, field: f.clone() });
        }
    }
    if out.len() as u128 != necklace_count(f.q(), d) {
        return Err(Error::Internal(format!(
            "found {} irreducibles of degree {d}, expected {}",
            out.len(),
            necklace_count(f.q(), d)
        )));
    }
    Ok(out)
}
