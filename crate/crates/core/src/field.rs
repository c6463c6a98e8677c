//! Prime and extension finite fields GF(p^k).
//!
//! Elements are stored *packed*: the coefficient vector `(c_0, .., c_{k-1})`
//! of the polynomial-basis representation becomes the integer
//! `c_0 + c_1 p + .. + c_{k-1} p^{k-1}`. The packed form doubles as the
//! canonical encoding of an element (it is what gets hashed, printed and
//! serialized), and the raw `u64` API on [`FiniteField`] works on it directly.
//!
//! Fields with at most [`TABLE_LIMIT`] elements also carry discrete log and
//! antilog tables; larger fields fall back to polynomial-basis arithmetic.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

use crate::numtheory::{factor, is_prime};
use crate::poly::Polynomial;

/// Largest field order that gets log/antilog tables.
pub const TABLE_LIMIT: u64 = 1 << 20;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 32;

static NEXT_FIELD_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("field order {p}^{k} exceeds the supported maximum 2^32")]
    TooLarge { p: u64, k: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different field contexts")]
    FieldMismatch,
    #[error("field of order {order} is not GF(q^(2m)) for q = {q}, m = {m}")]
    OrderMismatch { order: u64, q: u64, m: u32 },
    #[error("{l} does not divide {order} - 1")]
    NotDivisor { l: u64, order: u64 },
    #[error("GF({sub}) is not a subfield of GF({ambient})")]
    NotSubfield { sub: u64, ambient: u64 },
    #[error("element {0} is not in the field")]
    OutOfRange(u64),
}

#[derive(Debug)]
struct LogTables {
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)`, doubled so sums of logs need no reduction.
    exp: Vec<u32>,
}

/// Immutable context for GF(p^k).
#[derive(Debug)]
pub struct FiniteField {
    id: u64,
    p: u64,
    degree: u32,
    order: u64,
    /// Monic modulus, constant term first, length `degree + 1`.
    modulus: Vec<u64>,
    primitive: u64,
    tables: Option<LogTables>,
}

impl FiniteField {
    /// Builds GF(p^k) with the lexicographically first monic irreducible modulus.
    ///
    /// Candidates are ordered by their coefficient vector read constant term
    /// first, so `(c_0, c_1, .., c_{k-1})` is compared left to right.
    pub fn new(p: u64, k: u32) -> Result<Arc<FiniteField>, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::DegreeZero);
        }
        let order = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(FieldError::TooLarge { p, k })?;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            first_irreducible(p, k)?
        };
        let mut field = FiniteField {
            id: NEXT_FIELD_ID.fetch_add(1, Ordering::Relaxed),
            p,
            degree: k,
            order,
            modulus,
            primitive: 0,
            tables: None,
        };
        field.primitive = field.find_primitive();
        if order <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(Arc::new(field))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// Packed value of the primitive element.
    pub fn primitive_raw(&self) -> u64 {
        self.primitive
    }

    pub fn contains(&self, a: u64) -> bool {
        a < self.order
    }

    /// Coefficient vector of a packed element, constant term first.
    pub fn digits(&self, mut a: u64) -> Vec<u64> {
        let mut out = vec![0; self.degree as usize];
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    pub fn pack(&self, digits: &[u64]) -> u64 {
        digits
            .iter()
            .rev()
            .fold(0, |acc, &d| acc * self.p + d % self.p)
    }

    /// The image of the integer `c` under Z -> GF(p).
    pub fn from_int(&self, c: i64) -> u64 {
        c.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.degree == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        while a > 0 || b > 0 {
            let mut d = a % self.p + b % self.p;
            if d >= self.p {
                d -= self.p;
            }
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        if self.degree == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut a = a;
        let (mut out, mut place) = (0, 1);
        while a > 0 {
            let d = a % self.p;
            if d != 0 {
                out += (self.p - d) * place;
            }
            place *= self.p;
            a /= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    /// Multiplication, via the log tables when present.
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize] as u64
                }
            }
            None => self.mul_poly_basis(a, b),
        }
    }

    /// Schoolbook multiplication of the basis polynomials reduced by the modulus.
    pub fn mul_poly_basis(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.degree == 1 {
            return ((a as u128 * b as u128) % self.p as u128) as u64;
        }
        if self.p == 2 {
            return self.mul_binary(a, b);
        }
        let k = self.degree as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (j, &mc) in self.modulus[..k].iter().enumerate() {
                let idx = top - k + j;
                prod[idx] = (prod[idx] + (self.p - c) * mc) % self.p;
            }
            prod[top] = 0;
        }
        self.pack(&prod[..k])
    }

    fn mul_binary(&self, a: u64, b: u64) -> u64 {
        let k = self.degree;
        let reduce = self.pack(&self.modulus[..k as usize]);
        let (mut a, mut b, mut out) = (a, b, 0u64);
        while b != 0 {
            if b & 1 == 1 {
                out ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> k & 1 == 1 {
                a ^= (1 << k) | reduce;
            }
        }
        out
    }

    pub fn inv(&self, a: u64) -> Result<u64, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => {
                let l = t.log[a as usize] as u64;
                t.exp[((self.order - 1 - l) % (self.order - 1)) as usize] as u64
            }
            None => self.pow(a, self.order - 2),
        })
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            let l = (t.log[a as usize] as u128 * e as u128 % (self.order - 1) as u128) as usize;
            return t.exp[l] as u64;
        }
        let (mut base, mut e, mut acc) = (a, e, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Power with a signed exponent; negative exponents invert first.
    pub fn pow_signed(&self, a: u64, e: i64) -> Result<u64, FieldError> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// Discrete log to the primitive element, when tables exist.
    pub fn log(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        self.tables.as_ref().map(|t| t.log[a as usize] as u64)
    }

    /// `g^i` for the primitive element `g`.
    pub fn exp(&self, i: u64) -> u64 {
        match &self.tables {
            Some(t) => t.exp[(i % (self.order - 1)) as usize] as u64,
            None => self.pow(self.primitive, i),
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: u64) -> Result<u64, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let mut ord = self.order - 1;
        for (r, _) in factor(self.order - 1) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == 1 {
                ord /= r;
            }
        }
        Ok(ord)
    }

    pub fn element(self: &Arc<Self>, raw: u64) -> Result<FieldElement, FieldError> {
        if !self.contains(raw) {
            return Err(FieldError::OutOfRange(raw));
        }
        Ok(FieldElement { field: Arc::clone(self), raw })
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement { field: Arc::clone(self), raw: 0 }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        FieldElement { field: Arc::clone(self), raw: 1 }
    }

    /// First element, in increasing packed order, of multiplicative order `q - 1`.
    pub fn primitive_element(self: &Arc<Self>) -> FieldElement {
        FieldElement { field: Arc::clone(self), raw: self.primitive }
    }

    /// `beta = alpha^(q^m - 1)`, a primitive `(q^m + 1)`-th root of unity in GF(q^(2m)).
    pub fn root_of_unity(self: &Arc<Self>, q: u64, m: u32) -> Result<FieldElement, FieldError> {
        let qm = q.checked_pow(m);
        match qm.and_then(|x| x.checked_mul(x)) {
            Some(sq) if sq == self.order => {}
            _ => return Err(FieldError::OrderMismatch { order: self.order, q, m }),
        }
        let raw = self.pow(self.primitive, qm.unwrap() - 1);
        Ok(FieldElement { field: Arc::clone(self), raw })
    }

    /// The `l`-th roots of unity, sorted by discrete log.
    pub fn unit_group(self: &Arc<Self>, l: u64) -> Result<Vec<FieldElement>, FieldError> {
        Ok(self
            .unit_group_raw(l)?
            .into_iter()
            .map(|raw| FieldElement { field: Arc::clone(self), raw })
            .collect())
    }

    pub fn unit_group_raw(&self, l: u64) -> Result<Vec<u64>, FieldError> {
        if l == 0 || !(self.order - 1).is_multiple_of(l) {
            return Err(FieldError::NotDivisor { l, order: self.order });
        }
        let step = (self.order - 1) / l;
        Ok((0..l).map(|j| self.exp(j * step)).collect())
    }

    fn find_primitive(&self) -> u64 {
        if self.order == 2 {
            return 1;
        }
        let factors = factor(self.order - 1);
        (1..self.order)
            .find(|&a| {
                factors
                    .iter()
                    .all(|&(r, _)| self.pow(a, (self.order - 1) / r) != 1)
            })
            .expect("the multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&self) -> LogTables {
        let n = (self.order - 1) as usize;
        let mut log = vec![0u32; self.order as usize];
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut x = 1u64;
        for i in 0..n {
            exp[i] = x as u32;
            log[x as usize] = i as u32;
            x = self.mul_poly_basis(x, self.primitive);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        if n == 0 {
            exp[0] = 1;
        }
        LogTables { log, exp }
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.degree)
    }
}

fn first_irreducible(p: u64, k: u32) -> Result<Vec<u64>, FieldError> {
    let prime = FiniteField::new(p, 1)?;
    let k = k as usize;
    let mut low = vec![0u64; k];
    loop {
        // Lexicographic successor of (c_0, .., c_{k-1}) with c_0 most significant.
        let mut coeffs = low.clone();
        coeffs.push(1);
        let f = Polynomial::from_raw(&prime, coeffs.clone());
        if low[0] != 0 && f.is_irreducible() {
            return Ok(coeffs);
        }
        let mut i = k;
        loop {
            i -= 1;
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            assert!(i > 0, "an irreducible polynomial of every degree exists");
        }
    }
}

/// An element together with the field it belongs to.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<FiniteField>,
    raw: u64,
}

impl FieldElement {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn raw(&self) -> u64 {
        self.raw
    }

    pub fn coeffs(&self) -> Vec<u64> {
        self.field.digits(self.raw)
    }

    pub fn is_zero(&self) -> bool {
        self.raw == 0
    }

    fn check(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field.id != other.field.id {
            return Err(FieldError::FieldMismatch);
        }
        Ok(())
    }

    fn with(&self, raw: u64) -> FieldElement {
        FieldElement { field: Arc::clone(&self.field), raw }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.add(self.raw, other.raw)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.sub(self.raw, other.raw)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.mul(self.raw, other.raw)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.div(self.raw, other.raw)?))
    }

    pub fn neg(&self) -> FieldElement {
        self.with(self.field.neg(self.raw))
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        Ok(self.with(self.field.inv(self.raw)?))
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement, FieldError> {
        Ok(self.with(self.field.pow_signed(self.raw, e)?))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.id == other.field.id && self.raw == other.raw
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Coefficient tuple, constant term first.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree == 1 {
            return write!(f, "{}", self.raw);
        }
        let digits: Vec<String> = self.coeffs().iter().map(|d| d.to_string()).collect();
        write!(f, "({})", digits.join(","))
    }
}

/// A field embedding GF(q) -> GF(Q) for GF(q) a subfield of GF(Q).
///
/// The image of the base generator is the smallest-log root of the base
/// modulus in the ambient field, so the map is a ring homomorphism.
#[derive(Debug)]
pub struct SubfieldEmbedding {
    base: Arc<FiniteField>,
    ambient: Arc<FiniteField>,
    to_ambient: Vec<u64>,
    from_ambient: HashMap<u64, u64>,
}

impl SubfieldEmbedding {
    pub fn new(base: &Arc<FiniteField>, ambient: &Arc<FiniteField>) -> Result<Self, FieldError> {
        let not_sub = FieldError::NotSubfield { sub: base.order, ambient: ambient.order };
        if base.p != ambient.p || !ambient.degree.is_multiple_of(base.degree) {
            return Err(not_sub);
        }
        let q = base.order;
        let step = (ambient.order - 1) / (q - 1);
        // The base-field generator image: a root of the base modulus lying in the subfield.
        let root = if base.degree == 1 {
            0
        } else {
            (0..q - 1)
                .map(|j| ambient.exp(j * step))
                .find(|&r| {
                    let mut acc = 0;
                    for &c in base.modulus.iter().rev() {
                        acc = ambient.add(ambient.mul(acc, r), c);
                    }
                    acc == 0
                })
                .ok_or(not_sub)?
        };
        let to_ambient: Vec<u64> = (0..q)
            .map(|a| {
                let mut acc = 0;
                for c in base.digits(a).into_iter().rev() {
                    acc = ambient.add(ambient.mul(acc, root), c);
                }
                acc
            })
            .collect();
        let from_ambient = to_ambient.iter().enumerate().map(|(a, &e)| (e, a as u64)).collect();
        Ok(SubfieldEmbedding {
            base: Arc::clone(base),
            ambient: Arc::clone(ambient),
            to_ambient,
            from_ambient,
        })
    }

    pub fn base(&self) -> &Arc<FiniteField> {
        &self.base
    }

    pub fn ambient(&self) -> &Arc<FiniteField> {
        &self.ambient
    }

    #[inline]
    pub fn embed(&self, a: u64) -> u64 {
        self.to_ambient[a as usize]
    }

    /// Base-field preimage of an ambient element, if it lies in the subfield.
    pub fn restrict(&self, a: u64) -> Option<u64> {
        self.from_ambient.get(&a).copied()
    }
}
