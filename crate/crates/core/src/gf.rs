//! Arithmetic in GF(p) and GF(p^r).
//!
//! Elements are encoded as integers in `[0, q)`: base-p digit `i` of the
//! encoding is the coefficient of `x^i` in the polynomial basis modulo the
//! field's defining polynomial. Prime fields use plain residues.
//!
//! The defining polynomial of GF(p^r) is the lexicographically smallest monic
//! irreducible of degree `r`, comparing coefficients from the constant term
//! upward. No compatibility between different extension fields is needed.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Extension fields up to this order get log/antilog tables.
const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic {0} outside the supported range 2..=61")]
    CharacteristicOutOfRange(u64),
    #[error("extension degree {0} outside the supported range 1..=4")]
    DegreeOutOfRange(u32),
    #[error("field order {p}^{r} overflows")]
    Overflow { p: u64, r: u32 },
    #[error("element {value} does not belong to GF({q})")]
    Mismatch { value: u64, q: u64 },
    #[error("zero has no inverse")]
    ZeroInverse,
}

/// Which field operation [`FieldSpec::arith`] performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
}

/// A canonical field element. It remembers the order of its field so that
/// values from different fields cannot be silently combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    value: u64,
    q: u64,
}

impl FieldElem {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn order(self) -> u64 {
        self.q
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Debug)]
struct Inner {
    p: u64,
    r: u32,
    q: u64,
    /// Coefficients of the monic modulus, constant term first, length r + 1.
    /// Empty for prime fields.
    modulus: Vec<u64>,
    tables: Option<LogTables>,
}

#[derive(Debug)]
struct LogTables {
    exp: Vec<u64>,
    log: Vec<u64>,
}

/// A finite field GF(p^r). Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}", self.0.q)?;
        if self.0.r > 1 {
            write!(f, "; modulus {:?}", self.0.modulus)?;
        }
        write!(f, ")")
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.r == other.0.r && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

/// Serialized form of a field: `{p, r, modulus}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub r: u32,
    pub modulus: Vec<u64>,
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.descriptor().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let desc = FieldDescriptor::deserialize(d)?;
        let field = make_field(desc.p, desc.r).map_err(serde::de::Error::custom)?;
        if field.modulus() != desc.modulus.as_slice() {
            return Err(serde::de::Error::custom("modulus differs from the canonical choice"));
        }
        Ok(field)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds GF(p^r) with the lexicographically smallest monic irreducible modulus.
pub fn make_field(p: u64, r: u32) -> Result<FieldSpec, GfError> {
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if p > 61 {
        return Err(GfError::CharacteristicOutOfRange(p));
    }
    if !(1..=4).contains(&r) {
        return Err(GfError::DegreeOutOfRange(r));
    }
    let q = p
        .checked_pow(r)
        .filter(|&q| q < (1 << 63))
        .ok_or(GfError::Overflow { p, r })?;
    let modulus = if r == 1 { Vec::new() } else { smallest_irreducible(p, r as usize) };
    let mut inner = Inner { p, r, q, modulus, tables: None };
    if r > 1 && q <= TABLE_LIMIT {
        inner.tables = Some(build_tables(&inner));
    }
    Ok(FieldSpec(Arc::new(inner)))
}

/// Smallest monic irreducible of degree `r` over GF(p), constant term compared first.
fn smallest_irreducible(p: u64, r: usize) -> Vec<u64> {
    let total = p.pow(r as u32);
    for k in 0..total {
        // c_0 is the most significant digit of k so that iteration order is
        // lexicographic with the constant term compared first.
        let mut coeffs = vec![0u64; r + 1];
        let mut rest = k;
        for i in (0..r).rev() {
            coeffs[i] = rest % p;
            rest /= p;
        }
        coeffs[r] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for k in 0..count {
            let mut g = vec![0u64; d + 1];
            let mut rest = k;
            for c in g.iter_mut().take(d) {
                *c = rest % p;
                rest /= p;
            }
            g[d] = 1;
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut rem = f.to_vec();
    let dg = g.len() - 1;
    // g is monic
    while rem.len() > dg {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - dg;
        if lead != 0 {
            for (i, &gc) in g.iter().enumerate() {
                rem[shift + i] = (rem[shift + i] + p - (lead * gc) % p) % p;
            }
        }
        rem.pop();
    }
    rem
}

fn build_tables(inner: &Inner) -> LogTables {
    let q = inner.q;
    'candidate: for g in 2..q {
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut log = vec![u64::MAX; q as usize];
        let mut x = 1u64;
        for k in 0..q - 1 {
            if log[x as usize] != u64::MAX {
                continue 'candidate;
            }
            log[x as usize] = k;
            exp.push(x);
            x = poly_mul(inner, x, g);
        }
        if x == 1 {
            return LogTables { exp, log };
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}

fn digits(mut v: u64, p: u64, r: u32) -> [u64; 4] {
    let mut out = [0u64; 4];
    for d in out.iter_mut().take(r as usize) {
        *d = v % p;
        v /= p;
    }
    out
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn poly_mul(inner: &Inner, a: u64, b: u64) -> u64 {
    let (p, r) = (inner.p, inner.r as usize);
    let da = digits(a, p, inner.r);
    let db = digits(b, p, inner.r);
    let mut prod = [0u64; 8];
    for i in 0..r {
        if da[i] == 0 {
            continue;
        }
        for j in 0..r {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        }
    }
    for k in (r..2 * r - 1).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        // x^r = -(m_0 + ... + m_{r-1} x^{r-1})
        for i in 0..r {
            let m = inner.modulus[i];
            prod[k - r + i] = (prod[k - r + i] + (p - c) * m) % p;
        }
    }
    undigits(&prod[..r], p)
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn r(&self) -> u32 {
        self.0.r
    }

    pub fn order(&self) -> u64 {
        self.0.q
    }

    /// Monic modulus, constant term first; empty for prime fields.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// True for GF(2), where callers may switch to bit-packed storage.
    pub fn is_gf2(&self) -> bool {
        self.0.q == 2
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.r == 1
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.0.p, r: self.0.r, modulus: self.0.modulus.clone() }
    }

    pub fn elem(&self, value: u64) -> Result<FieldElem, GfError> {
        if value < self.0.q {
            Ok(FieldElem { value, q: self.0.q })
        } else {
            Err(GfError::Mismatch { value, q: self.0.q })
        }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { value: 0, q: self.0.q }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem { value: 1, q: self.0.q }
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.0.q).map(move |value| FieldElem { value, q: self.0.q })
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, v: i64) -> u64 {
        v.rem_euclid(self.0.p as i64) as u64
    }

    fn check(&self, a: FieldElem) -> Result<(), GfError> {
        if a.q == self.0.q && a.value < self.0.q {
            Ok(())
        } else {
            Err(GfError::Mismatch { value: a.value, q: self.0.q })
        }
    }

    pub fn arith(&self, a: FieldElem, b: FieldElem, op: Op) -> Result<FieldElem, GfError> {
        self.check(a)?;
        self.check(b)?;
        let value = match op {
            Op::Add => self.add(a.value, b.value),
            Op::Sub => self.sub(a.value, b.value),
            Op::Mul => self.mul(a.value, b.value),
        };
        Ok(FieldElem { value, q: self.0.q })
    }

    pub fn inverse(&self, a: FieldElem) -> Result<FieldElem, GfError> {
        self.check(a)?;
        self.inv(a.value).map(|value| FieldElem { value, q: self.0.q })
    }

    pub fn pow_elem(&self, a: FieldElem, e: u64) -> Result<FieldElem, GfError> {
        self.check(a)?;
        Ok(FieldElem { value: self.pow(a.value, e), q: self.0.q })
    }

    // Raw operations on encodings. Callers guarantee canonical inputs; these
    // are the inner loops of the linear algebra.

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let inner = &*self.0;
        if inner.r == 1 {
            let s = a + b;
            if s >= inner.p {
                s - inner.p
            } else {
                s
            }
        } else if inner.p == 2 {
            a ^ b
        } else {
            let (da, db) = (digits(a, inner.p, inner.r), digits(b, inner.p, inner.r));
            let mut out = [0u64; 4];
            for i in 0..inner.r as usize {
                out[i] = (da[i] + db[i]) % inner.p;
            }
            undigits(&out[..inner.r as usize], inner.p)
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        let inner = &*self.0;
        if inner.r == 1 {
            if a == 0 {
                0
            } else {
                inner.p - a
            }
        } else if inner.p == 2 {
            a
        } else {
            let da = digits(a, inner.p, inner.r);
            let mut out = [0u64; 4];
            for i in 0..inner.r as usize {
                out[i] = (inner.p - da[i]) % inner.p;
            }
            undigits(&out[..inner.r as usize], inner.p)
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let inner = &*self.0;
        if inner.r == 1 {
            return a * b % inner.p;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        match &inner.tables {
            Some(t) => {
                let k = (t.log[a as usize] + t.log[b as usize]) % (inner.q - 1);
                t.exp[k as usize]
            }
            None => poly_mul(inner, a, b),
        }
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64, GfError> {
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        let inner = &*self.0;
        if let Some(t) = &inner.tables {
            let k = (inner.q - 1 - t.log[a as usize]) % (inner.q - 1);
            return Ok(t.exp[k as usize]);
        }
        Ok(self.pow(a, inner.q - 2))
    }

    /// The `k`-th element of the canonical F_p-basis of F_q (the monomial x^k).
    pub fn basis_elem(&self, k: u32) -> u64 {
        self.0.p.pow(k)
    }
}
