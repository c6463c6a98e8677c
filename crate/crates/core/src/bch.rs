//! BCH codes `C(q, n, delta, h)` of length `n = q^m + 1`.
//!
//! The generator is `lcm(g_h, g_{h+1}, .., g_{h+delta-2})` over GF(q), where
//! `g_s` is the minimal polynomial of `beta^s` and `beta` is a primitive
//! `n`-th root of unity in GF(q^(2m)). Codewords are coefficient vectors of
//! multiples of the generator, constant term first.

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::cosets::{coset, CosetError, CyclotomicCoset};
use crate::field::{FieldElement, FieldError, FiniteField, SubfieldEmbedding, MAX_ORDER};
use crate::numtheory::prime_power;
use crate::poly::{minimal_polynomial, PolyError, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BchError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("m must be at least 1")]
    ZeroM,
    #[error("designed distance must be at least 2, got {0}")]
    DeltaTooSmall(u64),
    #[error("h = {h} is outside [0, {max}]")]
    HOutOfRange { h: u64, max: u64 },
    #[error("GF({q}^{m}) squared exceeds the supported field size")]
    TooLarge { q: u64, m: u32 },
    #[error("parity-check fast path needs delta = 3, got {0}")]
    UnsupportedDelta(u64),
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0} is not an element of the base field")]
    NotInBaseField(u64),
    #[error("divisibility and syndrome membership disagree")]
    MembershipDisagreement,
    #[error("generator degree {generator} disagrees with defining-set size {cosets}")]
    DimensionDisagreement { generator: usize, cosets: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Coset(#[from] CosetError),
}

/// An antiprimitive BCH code together with the fields it was built in.
#[derive(Debug)]
pub struct BchCode {
    q: u64,
    m: u32,
    n: u64,
    delta: u64,
    h: u64,
    base: Arc<FiniteField>,
    ambient: Arc<FiniteField>,
    embedding: SubfieldEmbedding,
    beta: FieldElement,
    cosets: Vec<CyclotomicCoset>,
    defining_set: Vec<u64>,
    generator: Polynomial,
    dimension: usize,
}

impl BchCode {
    /// Builds `C(q, q^m + 1, delta, h)`.
    pub fn build(q: u64, m: u32, delta: u64, h: u64) -> Result<BchCode, BchError> {
        let (p, s) = prime_power(q).ok_or(BchError::NotPrimePower(q))?;
        if m == 0 {
            return Err(BchError::ZeroM);
        }
        if delta < 2 {
            return Err(BchError::DeltaTooSmall(delta));
        }
        let too_large = BchError::TooLarge { q, m };
        let qm = q.checked_pow(m).ok_or(too_large.clone())?;
        if qm.checked_mul(qm).is_none_or(|o| o > MAX_ORDER) {
            return Err(too_large);
        }
        let n = qm + 1;
        if h > qm {
            return Err(BchError::HOutOfRange { h, max: qm });
        }
        let base = FiniteField::new(p, s)?;
        let ambient = FiniteField::new(p, 2 * s * m)?;
        let embedding = SubfieldEmbedding::new(&base, &ambient)?;
        let beta = ambient.root_of_unity(q, m)?;

        let mut cosets: Vec<CyclotomicCoset> = Vec::new();
        for j in 0..delta - 1 {
            let c = coset(q, n, (h + j) % n)?;
            if !cosets.iter().any(|d| d.leader() == c.leader()) {
                cosets.push(c);
            }
        }
        let mut generator = Polynomial::one(&base);
        for c in &cosets {
            let g = minimal_polynomial(&embedding, &beta, c)?;
            generator = generator.lcm(&g)?;
        }
        let mut defining_set: Vec<u64> =
            cosets.iter().flat_map(|c| c.elements().iter().copied()).collect();
        defining_set.sort_unstable();
        let deg = generator.degree().unwrap_or(0);
        if deg != defining_set.len() {
            return Err(BchError::DimensionDisagreement { generator: deg, cosets: defining_set.len() });
        }
        Ok(BchCode {
            q,
            m,
            n,
            delta,
            h,
            base,
            ambient,
            embedding,
            beta,
            cosets,
            dimension: n as usize - defining_set.len(),
            defining_set,
            generator,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// The BCH bound: every nonzero codeword has weight at least `delta`.
    pub fn bch_bound(&self) -> u64 {
        self.delta
    }

    pub fn base_field(&self) -> &Arc<FiniteField> {
        &self.base
    }

    pub fn ambient_field(&self) -> &Arc<FiniteField> {
        &self.ambient
    }

    pub fn embedding(&self) -> &SubfieldEmbedding {
        &self.embedding
    }

    pub fn beta(&self) -> &FieldElement {
        &self.beta
    }

    /// Distinct cosets making up the defining set, in construction order.
    pub fn defining_cosets(&self) -> &[CyclotomicCoset] {
        &self.cosets
    }

    pub fn defining_set(&self) -> &[u64] {
        &self.defining_set
    }

    pub fn generator(&self) -> &Polynomial {
        &self.generator
    }

    /// `n - sum |C_s|` over the distinct defining cosets.
    pub fn dimension_from_cosets(&self) -> usize {
        self.n as usize - self.cosets.iter().map(|c| c.size()).sum::<usize>()
    }

    /// LCD test via self-reciprocity of the generator.
    pub fn is_lcd(&self) -> bool {
        self.generator.is_self_reciprocal().unwrap_or(false)
    }

    /// Column `i` of the two-row parity-check matrix as packed ambient elements.
    #[inline]
    pub fn column(&self, i: u64) -> (u64, u64) {
        let f = &self.ambient;
        let e = (self.h as u128 * i as u128 % self.n as u128) as u64;
        let e1 = ((self.h + 1) as u128 * i as u128 % self.n as u128) as u64;
        (f.pow(self.beta.raw(), e), f.pow(self.beta.raw(), e1))
    }

    /// Rows `(beta^(h i))_i` and `(beta^((h+1) i))_i`; only for `delta = 3`.
    pub fn parity_check_rows(&self) -> Result<[Vec<FieldElement>; 2], BchError> {
        if self.delta != 3 {
            return Err(BchError::UnsupportedDelta(self.delta));
        }
        let mut r0 = Vec::with_capacity(self.len());
        let mut r1 = Vec::with_capacity(self.len());
        for i in 0..self.n {
            let (a, b) = self.column(i);
            r0.push(self.ambient.element(a)?);
            r1.push(self.ambient.element(b)?);
        }
        Ok([r0, r1])
    }

    fn check_vector(&self, v: &[u64]) -> Result<(), BchError> {
        if v.len() != self.len() {
            return Err(BchError::LengthMismatch { expected: self.len(), got: v.len() });
        }
        if let Some(&bad) = v.iter().find(|&&c| !self.base.contains(c)) {
            return Err(BchError::NotInBaseField(bad));
        }
        Ok(())
    }

    /// Both parity-check dot products of `v`; only for `delta = 3`.
    pub fn syndrome(&self, v: &[u64]) -> Result<(u64, u64), BchError> {
        if self.delta != 3 {
            return Err(BchError::UnsupportedDelta(self.delta));
        }
        self.check_vector(v)?;
        let f = &self.ambient;
        let mut s = (0, 0);
        for (i, &c) in v.iter().enumerate().filter(|(_, &c)| c != 0) {
            let (a, b) = self.column(i as u64);
            let ec = self.embedding.embed(c);
            s = (f.add(s.0, f.mul(ec, a)), f.add(s.1, f.mul(ec, b)));
        }
        Ok(s)
    }

    /// Non-systematic encoding `message(x) * g(x)`, padded to length `n`.
    pub fn encode(&self, message: &[u64]) -> Result<Vec<u64>, BchError> {
        if message.len() != self.dimension {
            return Err(BchError::LengthMismatch { expected: self.dimension, got: message.len() });
        }
        if let Some(&bad) = message.iter().find(|&&c| !self.base.contains(c)) {
            return Err(BchError::NotInBaseField(bad));
        }
        let msg = Polynomial::from_raw(&self.base, message.to_vec());
        let mut word = msg.mul(&self.generator)?.coeffs().to_vec();
        word.resize(self.len(), 0);
        Ok(word)
    }

    /// Membership by divisibility, cross-checked against the syndrome when `delta = 3`.
    pub fn is_codeword(&self, v: &[u64]) -> Result<bool, BchError> {
        self.check_vector(v)?;
        let word = Polynomial::from_raw(&self.base, v.to_vec());
        let divisible = word.rem(&self.generator)?.is_zero();
        if self.delta == 3 {
            let by_syndrome = self.syndrome(v)? == (0, 0);
            if by_syndrome != divisible {
                return Err(BchError::MembershipDisagreement);
            }
        }
        Ok(divisible)
    }

    pub fn random_message<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.dimension).map(|_| rng.gen_range(0..self.q)).collect()
    }

    /// Encodes random messages and checks the reversed codewords stay in the code.
    pub fn reverse_closed_check<R: Rng + ?Sized>(
        &self,
        trials: usize,
        rng: &mut R,
    ) -> Result<bool, BchError> {
        for _ in 0..trials {
            let mut c = self.encode(&self.random_message(rng))?;
            c.reverse();
            if !self.is_codeword(&c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
