//! Exact arithmetic in GF(p) and GF(p^k).
//!
//! Elements are stored as a single machine word: the base-`p` digits of the
//! encoding are the coefficients of the canonical polynomial representative,
//! lowest degree first. For `GF(4)` with modulus `x^2+x+1` the encodings
//! `0, 1, 2, 3` are the polynomials `0, 1, x, x+1`.
//!
//! Matrices and subspaces store raw [`Fe`] values next to a shared
//! [`FieldSpec`]; [`FieldElement`] bundles the two for standalone use and
//! checks that operands come from the same field.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};

/// Canonical encoding of a field element. Only meaningful together with the
/// [`FieldSpec`] it was produced by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Extension fields up to this order get precomputed add/mul tables.
const TABLE_LIMIT: u64 = 256;

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

struct Inner {
    p: u64,
    degree: usize,
    /// `degree + 1` coefficients, low to high, monic; empty for prime fields.
    modulus: Vec<u64>,
    order: u64,
    tables: Option<Tables>,
}

/// A finite field GF(p^k). Cheap to clone; equality compares
/// characteristic, degree and modulus.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.degree == other.0.degree && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.degree.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({self})")
    }
}

/// Renders the same syntax accepted by [`FieldSpec::parse`].
impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.degree == 1 {
            write!(f, "{}", self.0.p)
        } else {
            let coeffs: Vec<String> = self.0.modulus.iter().map(u64::to_string).collect();
            write!(f, "{}^{}:{}", self.0.p, self.0.degree, coeffs.join(","))
        }
    }
}

impl FieldSpec {
    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return domain(format!("{p} is not prime"));
        }
        Ok(FieldSpec(Arc::new(Inner {
            p,
            degree: 1,
            modulus: Vec::new(),
            order: p,
            tables: None,
        })))
    }

    /// GF(p^k) where `k = modulus.len() - 1`. The modulus is given low to
    /// high degree, must be monic and irreducible over GF(p).
    pub fn extension(p: u64, modulus: &[u64]) -> Result<Self> {
        if !is_prime(p) {
            return domain(format!("{p} is not prime"));
        }
        if modulus.len() < 3 {
            return domain("an extension modulus needs degree at least 2");
        }
        let degree = modulus.len() - 1;
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return domain(format!("modulus coefficient {c} is not reduced mod {p}"));
        }
        if modulus[degree] != 1 {
            return domain("modulus must be monic");
        }
        let order = u32::try_from(degree)
            .ok()
            .and_then(|d| p.checked_pow(d))
            .ok_or_else(|| Error::Domain(format!("{p}^{degree} does not fit in a machine word")))?;
        if !poly::is_irreducible(modulus, p) {
            return domain(format!("modulus {modulus:?} is reducible over GF({p})"));
        }
        let mut inner = Inner {
            p,
            degree,
            modulus: modulus.to_vec(),
            order,
            tables: None,
        };
        if order <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(FieldSpec(Arc::new(inner)))
    }

    /// Prime fields of any order, plus GF(4), GF(8) and GF(9) with fixed
    /// moduli `x^2+x+1`, `x^3+x+1` and `x^2+1`.
    pub fn builtin(order: u64) -> Result<Self> {
        match order {
            4 => Self::extension(2, &[1, 1, 1]),
            8 => Self::extension(2, &[1, 1, 0, 1]),
            9 => Self::extension(3, &[1, 0, 1]),
            q if is_prime(q) => Self::prime(q),
            q => domain(format!("no built-in field of order {q}")),
        }
    }

    /// Parses `"p"`, `"p^k"` (built-in modulus) or `"p^k:c0,c1,...,ck"`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let parse_int = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("invalid integer {s:?} in field spec {text:?}")))
        };
        let (power, modulus) = match text.split_once(':') {
            Some((power, modulus)) => (power, Some(modulus)),
            None => (text, None),
        };
        let (p, k) = match power.split_once('^') {
            Some((p, k)) => (parse_int(p)?, parse_int(k)?),
            None => (parse_int(power)?, 1),
        };
        match (k, modulus) {
            (0, _) => Err(Error::Parse(format!("extension degree must be ≥ 1 in {text:?}"))),
            (1, None) => Self::prime(p),
            (1, Some(_)) => Err(Error::Parse(format!("prime field {text:?} takes no modulus"))),
            (k, None) => {
                let order = p
                    .checked_pow(k as u32)
                    .ok_or_else(|| Error::Parse(format!("{text:?} overflows a machine word")))?;
                if !is_prime(p) {
                    return domain(format!("{p} is not prime"));
                }
                Self::builtin(order)
            }
            (k, Some(modulus)) => {
                let coeffs = modulus.split(',').map(parse_int).collect::<Result<Vec<_>>>()?;
                if coeffs.len() as u64 != k + 1 {
                    return Err(Error::Parse(format!(
                        "degree-{k} modulus needs {} coefficients, got {}",
                        k + 1,
                        coeffs.len()
                    )));
                }
                Self::extension(p, &coeffs)
            }
        }
    }

    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Field order `q = p^k`.
    #[inline]
    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        (self.0.degree > 1).then_some(self.0.modulus.as_slice())
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.degree == 1
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let f = &*self.0;
        if f.degree == 1 {
            return Fe(add_mod(a.0, b.0, f.p));
        }
        if let Some(t) = &f.tables {
            return Fe(t.add[(a.0 * f.order + b.0) as usize] as u64);
        }
        let (x, y) = (self.digits(a), self.digits(b));
        let sum: Vec<u64> = x.iter().zip(&y).map(|(&u, &v)| add_mod(u, v, f.p)).collect();
        self.encode_digits(&sum)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let f = &*self.0;
        if f.degree == 1 {
            return if a.0 == 0 { a } else { Fe(f.p - a.0) };
        }
        let d: Vec<u64> = self
            .digits(a)
            .into_iter()
            .map(|u| if u == 0 { 0 } else { f.p - u })
            .collect();
        self.encode_digits(&d)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let f = &*self.0;
        if f.degree == 1 {
            return Fe(mul_mod(a.0, b.0, f.p));
        }
        if let Some(t) = &f.tables {
            return Fe(t.mul[(a.0 * f.order + b.0) as usize] as u64);
        }
        let prod = poly::mul_mod(&self.digits(a), &self.digits(b), &f.modulus, f.p);
        self.encode_digits(&prod)
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.0.tables {
            return Ok(Fe(t.inv[a.0 as usize] as u64));
        }
        // a^(q-2) = a^-1 in a field of order q.
        Ok(self.pow(a, self.0.order - 2))
    }

    pub fn pow(&self, a: Fe, mut exp: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Embeds an integer via its residue mod p.
    pub fn from_int(&self, n: u64) -> Fe {
        Fe(n % self.0.p)
    }

    /// Validates a raw encoding.
    pub fn element(&self, value: u64) -> Result<Fe> {
        if value < self.0.order {
            Ok(Fe(value))
        } else {
            domain(format!("{value} is not an element encoding of GF({})", self.0.order))
        }
    }

    /// Coefficients of the canonical representative, low degree first,
    /// always of length `k`.
    pub fn digits(&self, a: Fe) -> Vec<u64> {
        let f = &*self.0;
        let mut out = Vec::with_capacity(f.degree);
        let mut v = a.0;
        for _ in 0..f.degree {
            out.push(v % f.p);
            v /= f.p;
        }
        out
    }

    /// Inverse of [`FieldSpec::digits`]; rejects wrong lengths and
    /// unreduced coefficients.
    pub fn from_digits(&self, coeffs: &[u64]) -> Result<Fe> {
        if coeffs.len() != self.0.degree {
            return domain(format!("expected {} coefficients, got {}", self.0.degree, coeffs.len()));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.0.p) {
            return domain(format!("coefficient {c} is not reduced mod {}", self.0.p));
        }
        Ok(self.encode_digits(coeffs))
    }

    fn encode_digits(&self, coeffs: &[u64]) -> Fe {
        Fe(coeffs.iter().rev().fold(0, |acc, &c| acc * self.0.p + c))
    }

    /// Every element exactly once, in increasing encoding order (which is
    /// lexicographic on the coefficient sequence read from the top degree).
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.0.order).map(Fe)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.0.order).map(Fe)
    }

    /// Wraps a raw encoding together with this field.
    pub fn wrap(&self, value: Fe) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value,
        }
    }

    /// Human-readable form: the integer for prime fields, the polynomial in
    /// `x` for extensions.
    pub fn format(&self, a: Fe) -> String {
        if self.0.degree == 1 {
            return a.0.to_string();
        }
        let digits = self.digits(a);
        let terms: Vec<String> = digits
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
                match i {
                    0 => coeff,
                    1 => format!("{coeff}x"),
                    _ => format!("{coeff}x^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

/// `a + b mod p` for reduced `a, b`.
#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    match a.overflowing_add(b) {
        (s, false) if s < p => s,
        (s, _) => s.wrapping_sub(p),
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        a * b % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

fn build_tables(f: &Inner) -> Tables {
    let q = f.order as usize;
    let digits = |v: u64| {
        let mut out = Vec::with_capacity(f.degree);
        let mut v = v;
        for _ in 0..f.degree {
            out.push(v % f.p);
            v /= f.p;
        }
        out
    };
    let encode = |c: &[u64]| c.iter().rev().fold(0u64, |acc, &d| acc * f.p + d) as u32;
    let all: Vec<Vec<u64>> = (0..f.order).map(digits).collect();
    let mut add = vec![0u32; q * q];
    let mut mul = vec![0u32; q * q];
    for a in 0..q {
        for b in 0..q {
            let s: Vec<u64> = all[a].iter().zip(&all[b]).map(|(&x, &y)| add_mod(x, y, f.p)).collect();
            add[a * q + b] = encode(&s);
            mul[a * q + b] = encode(&poly::mul_mod(&all[a], &all[b], &f.modulus, f.p));
        }
    }
    let mut inv = vec![0u32; q];
    for a in 1..q {
        inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).expect("field has inverses") as u32;
    }
    Tables { add, mul, inv }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Dense polynomials over GF(p), coefficients low to high.
mod poly {
    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub(super) fn rem_monic(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            for (i, &c) in m.iter().enumerate() {
                let sub = ((lead as u128 * c as u128) % p as u128) as u64;
                r[shift + i] = ((r[shift + i] as u128 + p as u128 - sub as u128) % p as u128) as u64;
            }
            trim(&mut r);
        }
        r
    }

    /// `a * b mod m`, padded to exactly `deg m` coefficients.
    pub(super) fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut prod = vec![0u64; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let t = (x as u128 * y as u128 + prod[i + j] as u128) % p as u128;
                prod[i + j] = t as u64;
            }
        }
        let mut r = rem_monic(&prod, m, p);
        r.resize(m.len() - 1, 0);
        r
    }

    /// Trial division by every monic polynomial of degree 1..=deg/2.
    pub(super) fn is_irreducible(m: &[u64], p: u64) -> bool {
        let deg = m.len() - 1;
        for d in 1..=deg / 2 {
            let count = p.pow(d as u32);
            for low in 0..count {
                let mut divisor = Vec::with_capacity(d + 1);
                let mut v = low;
                for _ in 0..d {
                    divisor.push(v % p);
                    v /= p;
                }
                divisor.push(1);
                if rem_monic(m, &divisor, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

/// A field element bundled with its field, for standalone arithmetic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: FieldSpec,
    value: Fe,
}

impl FieldElement {
    pub fn from_coeffs(field: &FieldSpec, coeffs: &[u64]) -> Result<Self> {
        Ok(field.wrap(field.from_digits(coeffs)?))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn value(&self) -> Fe {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u64> {
        self.field.digits(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return domain(format!("field mismatch: GF({}) vs GF({})", self.field, other.field));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> Self {
        self.field.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.field.wrap(self.field.inv(self.value)?))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in GF({})", self.field.format(self.value), self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

/// Every element of the field as a [`FieldElement`].
pub fn enumerate_elements(field: &FieldSpec) -> Vec<FieldElement> {
    field.elements().map(|v| field.wrap(v)).collect()
}
