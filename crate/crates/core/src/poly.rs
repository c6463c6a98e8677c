//! Dense univariate polynomials over a [`FiniteField`].

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cosets::CyclotomicCoset;
use crate::field::{FieldElement, FieldError, FiniteField, SubfieldEmbedding};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomials over different field contexts")]
    FieldMismatch,
    #[error("gcd/lcm of two zero polynomials")]
    BothZero,
    #[error("reciprocal needs a nonzero constant term")]
    ZeroConstantTerm,
    #[error("coefficient {0} of the minimal polynomial is not in the base field")]
    CoefficientNotInBaseField(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Coefficients are packed field elements, index = exponent. The zero
/// polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Clone)]
pub struct Polynomial {
    field: Arc<FiniteField>,
    coeffs: Vec<u64>,
}

impl Polynomial {
    /// Builds from packed coefficients, trimming leading zeros.
    pub fn from_raw(field: &Arc<FiniteField>, mut coeffs: Vec<u64>) -> Polynomial {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Polynomial { field: Arc::clone(field), coeffs }
    }

    pub fn from_elements(
        field: &Arc<FiniteField>,
        coeffs: &[FieldElement],
    ) -> Result<Polynomial, PolyError> {
        if coeffs.iter().any(|c| c.field().id() != field.id()) {
            return Err(PolyError::FieldMismatch);
        }
        Ok(Self::from_raw(field, coeffs.iter().map(|c| c.raw()).collect()))
    }

    pub fn zero(field: &Arc<FiniteField>) -> Polynomial {
        Self::from_raw(field, Vec::new())
    }

    pub fn one(field: &Arc<FiniteField>) -> Polynomial {
        Self::from_raw(field, vec![1])
    }

    /// `x^e`.
    pub fn monomial(field: &Arc<FiniteField>, e: usize) -> Polynomial {
        let mut c = vec![0; e + 1];
        c[e] = 1;
        Self::from_raw(field, c)
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(field: &Arc<FiniteField>, n: usize) -> Polynomial {
        let mut c = vec![0; n + 1];
        c[n] = 1;
        c[0] = field.neg(1);
        Self::from_raw(field, c)
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    /// Packed coefficients, constant term first.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        let raw = self.coeffs.get(i).copied().unwrap_or(0);
        self.field.element(raw).expect("coefficients are field elements")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    fn check(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.field.id() != other.field.id() {
            return Err(PolyError::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let f = &self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                f.add(a, b)
            })
            .collect();
        Ok(Self::from_raw(f, c))
    }

    pub fn neg(&self) -> Polynomial {
        let c = self.coeffs.iter().map(|&a| self.field.neg(a)).collect();
        Self::from_raw(&self.field, c)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: u64) -> Polynomial {
        let c = self.coeffs.iter().map(|&a| self.field.mul(a, s)).collect();
        Self::from_raw(&self.field, c)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let f = &self.field;
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Ok(Self::from_raw(f, c))
    }

    /// Returns `(quotient, remainder)` with `self = quotient * divisor + remainder`.
    pub fn divmod(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        self.check(divisor)?;
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let f = &self.field;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let lead_inv = f.inv(divisor.leading())?;
        let mut quot = vec![0u64; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            let factor = f.mul(c, lead_inv);
            quot[top - dd] = factor;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(factor, dc));
            }
        }
        rem.truncate(dd);
        Ok((Self::from_raw(f, quot), Self::from_raw(f, rem)))
    }

    pub fn rem(&self, divisor: &Polynomial) -> Result<Polynomial, PolyError> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Scales to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lead) => self.scale(self.field.inv(lead).expect("leading coefficient is nonzero")),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::BothZero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Monic least common multiple.
    pub fn lcm(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        let g = self.gcd(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let (q, _) = self.mul(other)?.divmod(&g)?;
        Ok(q.monic())
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `base^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Polynomial) -> Result<Polynomial, PolyError> {
        let mut base = self.rem(modulus)?;
        let mut acc = Self::one(&self.field).rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?.rem(modulus)?;
            }
            base = base.mul(&base)?.rem(modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Irreducibility over the coefficient field GF(Q): `gcd(f, x^(Q^j) - x) = 1`
    /// for every `1 <= j <= deg/2`. Constants are not irreducible.
    pub fn is_irreducible(&self) -> bool {
        let Some(deg) = self.degree() else { return false };
        if deg == 0 {
            return false;
        }
        let f = &self.field;
        let x = Self::monomial(f, 1);
        let mut frob = x.clone();
        for _ in 0..deg / 2 {
            frob = frob.pow_mod(f.order(), self).expect("modulus is nonzero");
            let g = frob.sub(&x).and_then(|d| self.gcd(&d)).expect("same field");
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// `f*(x) = f_0^{-1} x^deg f(1/x)`.
    pub fn reciprocal(&self) -> Result<Polynomial, PolyError> {
        let c0 = self.coeffs.first().copied().unwrap_or(0);
        if c0 == 0 {
            return Err(PolyError::ZeroConstantTerm);
        }
        let inv = self.field.inv(c0)?;
        let c = self.coeffs.iter().rev().map(|&a| self.field.mul(a, inv)).collect();
        Ok(Self::from_raw(&self.field, c))
    }

    pub fn is_self_reciprocal(&self) -> Result<bool, PolyError> {
        Ok(self.reciprocal()? == *self)
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.field.id() == other.field.id() && self.coeffs == other.coeffs
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

/// Terms from the highest degree down; coefficients are packed values.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev().filter(|(_, &c)| c != 0) {
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

/// Minimal polynomial of `beta^s` over the base field of `embedding`:
/// the product of `(x - beta^i)` over the cyclotomic coset of `s`, expanded in
/// the ambient field and pulled back coefficient by coefficient.
pub fn minimal_polynomial(
    embedding: &SubfieldEmbedding,
    beta: &FieldElement,
    coset: &CyclotomicCoset,
) -> Result<Polynomial, PolyError> {
    let amb = embedding.ambient();
    if beta.field().id() != amb.id() {
        return Err(PolyError::FieldMismatch);
    }
    let mut prod = vec![1u64];
    for &i in coset.elements() {
        let root = amb.pow(beta.raw(), i);
        let mut next = vec![0u64; prod.len() + 1];
        for (j, &c) in prod.iter().enumerate() {
            next[j + 1] = amb.add(next[j + 1], c);
            next[j] = amb.sub(next[j], amb.mul(c, root));
        }
        prod = next;
    }
    let q = embedding.base().order();
    let coeffs = prod
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            if amb.pow(c, q) != c {
                return Err(PolyError::CoefficientNotInBaseField(j));
            }
            embedding.restrict(c).ok_or(PolyError::CoefficientNotInBaseField(j))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Polynomial::from_raw(embedding.base(), coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosets::{all_leaders, coset};
    use proptest::prelude::*;

    fn gf(p: u64, k: u32) -> Arc<FiniteField> {
        FiniteField::new(p, k).unwrap()
    }

    fn poly(f: &Arc<FiniteField>, c: &[u64]) -> Polynomial {
        Polynomial::from_raw(f, c.to_vec())
    }

    #[test]
    fn frobenius_square_over_gf2() {
        let f = gf(2, 1);
        let x1 = poly(&f, &[1, 1]);
        assert_eq!(x1.mul(&x1).unwrap(), poly(&f, &[1, 0, 1]));
    }

    #[test]
    fn geometric_sum_division() {
        let f = gf(2, 1);
        let (q, r) = Polynomial::x_pow_minus_one(&f, 5).divmod(&poly(&f, &[1, 1])).unwrap();
        assert_eq!(q, poly(&f, &[1, 1, 1, 1, 1]));
        assert!(r.is_zero());
        assert_eq!(
            poly(&f, &[1]).divmod(&Polynomial::zero(&f)).unwrap_err(),
            PolyError::DivisionByZero
        );
    }

    #[test]
    fn gcd_cases() {
        let f = gf(3, 1);
        let g = poly(&f, &[2, 2]); // 2x + 2
        assert_eq!(g.gcd(&Polynomial::zero(&f)).unwrap(), poly(&f, &[1, 1]));
        // gcd(x^2 - 1, x - 1) = x - 1
        let a = poly(&f, &[2, 0, 1]);
        let b = poly(&f, &[2, 1]);
        assert_eq!(a.gcd(&b).unwrap(), poly(&f, &[2, 1]));
        assert_eq!(
            Polynomial::zero(&f).gcd(&Polynomial::zero(&f)).unwrap_err(),
            PolyError::BothZero
        );
    }

    #[test]
    fn mismatched_fields() {
        let a = Polynomial::one(&gf(2, 1));
        let b = Polynomial::one(&gf(2, 1));
        assert_eq!(a.mul(&b).unwrap_err(), PolyError::FieldMismatch);
    }

    #[test]
    fn reciprocals() {
        let f2 = gf(2, 1);
        let p = poly(&f2, &[1, 1, 1]);
        assert!(p.is_self_reciprocal().unwrap());
        let f3 = gf(3, 1);
        // x + 2: f* = 2^{-1}(1 + 2x) = 2 + x.
        let p = poly(&f3, &[2, 1]);
        assert_eq!(p.reciprocal().unwrap(), poly(&f3, &[2, 1]));
        assert!(p.is_self_reciprocal().unwrap());
        assert!(!poly(&f3, &[1, 1, 0, 1]).is_self_reciprocal().unwrap());
        assert_eq!(poly(&f3, &[0, 1]).reciprocal().unwrap_err(), PolyError::ZeroConstantTerm);
    }

    fn min_poly(q: u64, m: u32, s: u64) -> Polynomial {
        let (p, e) = crate::numtheory::prime_power(q).unwrap();
        let base = gf(p, e);
        let amb = gf(p, 2 * e * m);
        let emb = SubfieldEmbedding::new(&base, &amb).unwrap();
        let n = q.pow(m) + 1;
        let beta = amb.root_of_unity(q, m).unwrap();
        minimal_polynomial(&emb, &beta, &coset(q, n, s).unwrap()).unwrap()
    }

    #[test]
    fn minimal_polynomial_examples() {
        let f2 = gf(2, 1);
        let g0 = min_poly(2, 2, 0);
        assert_eq!(g0.coeffs(), &[1, 1]); // x - 1 over GF(2)
        let g1 = min_poly(2, 2, 1);
        // Oracle: (x^5 - 1)/(x - 1), irreducible by the quartic enumeration in field tests.
        let (quot, _) = Polynomial::x_pow_minus_one(&f2, 5).divmod(&poly(&f2, &[1, 1])).unwrap();
        assert_eq!(g1.coeffs(), quot.coeffs());
        assert!(g1.is_irreducible());
        let g5 = min_poly(3, 2, 5);
        assert_eq!(g5.coeffs(), &[1, 1]); // x + 1
    }

    #[test]
    fn minimal_polynomials_divide_and_multiply_to_x_n_minus_one() {
        for &(q, m) in &[(2u64, 1u32), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (4, 1), (4, 2), (5, 1), (7, 1), (8, 1)] {
            let (p, e) = crate::numtheory::prime_power(q).unwrap();
            let base = gf(p, e);
            let amb = gf(p, 2 * e * m);
            let emb = SubfieldEmbedding::new(&base, &amb).unwrap();
            let n = q.pow(m) + 1;
            let beta = amb.root_of_unity(q, m).unwrap();
            let xn1 = Polynomial::x_pow_minus_one(&base, n as usize);
            let mut product = Polynomial::one(&base);
            for c in all_leaders(q, n).unwrap() {
                let g = minimal_polynomial(&emb, &beta, &c).unwrap();
                assert_eq!(g.degree(), Some(c.size()));
                assert_eq!(g.leading(), 1);
                assert!(g.is_irreducible(), "q={q} m={m} s={}", c.leader());
                assert!(xn1.rem(&g).unwrap().is_zero());
                product = product.mul(&g).unwrap();
            }
            assert_eq!(product, xn1);
        }
    }

    #[test]
    fn lcm_of_disjoint_cosets_is_product() {
        // Root-set oracle: lcm has exactly the union of the two root sets.
        let (q, m) = (3u64, 2u32);
        let base = gf(3, 1);
        let amb = gf(3, 4);
        let emb = SubfieldEmbedding::new(&base, &amb).unwrap();
        let beta = amb.root_of_unity(q, m).unwrap();
        let n = 10;
        for h in 0..n {
            let ch = coset(q, n, h).unwrap();
            let ch1 = coset(q, n, (h + 1) % n).unwrap();
            let gh = minimal_polynomial(&emb, &beta, &ch).unwrap();
            let gh1 = minimal_polynomial(&emb, &beta, &ch1).unwrap();
            let l = gh.lcm(&gh1).unwrap();
            let mut roots: Vec<u64> = ch.elements().to_vec();
            roots.extend_from_slice(ch1.elements());
            roots.sort();
            roots.dedup();
            assert_eq!(l.degree(), Some(roots.len()));
            for i in 0..n {
                let root = amb.pow(beta.raw(), i);
                let lifted: Vec<u64> = l.coeffs().iter().map(|&c| emb.embed(c)).collect();
                let val = lifted.iter().rev().fold(0, |acc, &c| amb.add(amb.mul(acc, root), c));
                assert_eq!(val == 0, roots.contains(&i));
            }
        }
    }

    fn arb_poly(f: Arc<FiniteField>, max_len: usize) -> impl Strategy<Value = Polynomial> {
        let q = f.order();
        proptest::collection::vec(0..q, 0..max_len).prop_map(move |c| Polynomial::from_raw(&f, c))
    }

    proptest! {
        #[test]
        fn mul_then_divide_round_trips(
            a in arb_poly(gf(5, 1), 8),
            b in arb_poly(gf(5, 1), 6),
        ) {
            let b = Polynomial::from_raw(a.field(), b.coeffs().to_vec());
            prop_assume!(!b.is_zero());
            let (q, r) = a.mul(&b).unwrap().divmod(&b).unwrap();
            prop_assert_eq!(q, a);
            prop_assert!(r.is_zero());
        }

        #[test]
        fn divmod_identity(c1 in proptest::collection::vec(0u64..4, 0..10), c2 in proptest::collection::vec(0u64..4, 1..6)) {
            let f = gf(2, 2);
            let a = Polynomial::from_raw(&f, c1);
            let b = Polynomial::from_raw(&f, c2);
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
            prop_assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
        }

        #[test]
        fn reciprocal_is_an_involution(c in proptest::collection::vec(1u64..7, 1..8)) {
            let f = gf(7, 1);
            let a = Polynomial::from_raw(&f, c);
            let back = a.reciprocal().unwrap().reciprocal().unwrap();
            prop_assert_eq!(back.monic(), a.monic());
        }
    }
}
