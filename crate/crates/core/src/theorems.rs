//! Executable distance predicates for `C(q, q^m + 1, 3, h)`.
//!
//! Every statement is a pure function of its integer inputs. [`verify`] routes
//! a code to every statement that applies, intersects their predictions, and
//! measures the code to see whether they hold.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bch::{BchCode, BchError};
use crate::distance::{min_distance, Distance, DistanceError, DistanceReport, Method, SearchConfig};
use crate::exec;
use crate::field::{FieldElement, FieldError, FiniteField};
use crate::numtheory::{gcd, mod_inverse, prime_power};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "T3.1")]
    T3_1,
    #[serde(rename = "C3.1")]
    C3_1,
    #[serde(rename = "P3.2")]
    P3_2,
    #[serde(rename = "P3.3")]
    P3_3,
    #[serde(rename = "T3.4")]
    T3_4,
    #[serde(rename = "P3.5")]
    P3_5,
    #[serde(rename = "T4.1")]
    T4_1,
    #[serde(rename = "T4.2")]
    T4_2,
    #[serde(rename = "P4.3")]
    P4_3,
    #[serde(rename = "T4.4")]
    T4_4,
    #[serde(rename = "T4.5")]
    T4_5,
    #[serde(rename = "C4.1")]
    C4_1,
    #[serde(rename = "T4.6")]
    T4_6,
    #[serde(rename = "L2.3")]
    L2_3,
    #[serde(rename = "L2.4")]
    L2_4,
}

impl TheoremId {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T3_1 => "T3.1",
            TheoremId::C3_1 => "C3.1",
            TheoremId::P3_2 => "P3.2",
            TheoremId::P3_3 => "P3.3",
            TheoremId::T3_4 => "T3.4",
            TheoremId::P3_5 => "P3.5",
            TheoremId::T4_1 => "T4.1",
            TheoremId::T4_2 => "T4.2",
            TheoremId::P4_3 => "P4.3",
            TheoremId::T4_4 => "T4.4",
            TheoremId::T4_5 => "T4.5",
            TheoremId::C4_1 => "C4.1",
            TheoremId::T4_6 => "T4.6",
            TheoremId::L2_3 => "L2.3",
            TheoremId::L2_4 => "L2.4",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoremError {
    #[error("{id} does not apply: {reason}")]
    RegimeMismatch { id: TheoremId, reason: String },
    #[error("q^{i} - 1 is not invertible modulo {n}")]
    NotInvertible { i: u32, n: u64 },
    #[error("gcd({i}, {sm}) != 1")]
    GcdViolation { i: u32, sm: u32 },
    #[error("E(x, y) needs x != y")]
    EqualArguments,
    #[error("unit group of size {size} exceeds the search cap {cap}")]
    CapExceeded { size: u64, cap: u64 },
    #[error("q^m + 1 does not fit in 64 bits for q = {q}, m = {m}")]
    TooLarge { q: u64, m: u32 },
    #[error("{q} is not a prime power")]
    NotPrimePower { q: u64 },
    #[error("predictions for (q={q}, m={m}, h={h}) are mutually inconsistent: {detail}")]
    Inconsistent { q: u64, m: u32, h: u64, detail: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Bch(#[from] BchError),
    #[error(transparent)]
    Distance(#[from] DistanceError),
}

/// A claimed value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prediction {
    Exact(u64),
    AtLeast(u64),
    /// Both ends inclusive. "5 or 6" is `Range(5, 6)` and stays that way.
    Range(u64, u64),
    /// An exact integer that is not a distance (gcd closed forms).
    Value(BigUint),
    Inapplicable,
}

impl Prediction {
    fn interval(&self) -> Option<(u64, Option<u64>)> {
        match *self {
            Prediction::Exact(x) => Some((x, Some(x))),
            Prediction::AtLeast(x) => Some((x, None)),
            Prediction::Range(a, b) => Some((a, Some(b))),
            _ => None,
        }
    }

    fn from_interval(lo: u64, hi: Option<u64>) -> Prediction {
        match hi {
            Some(h) if h == lo => Prediction::Exact(lo),
            Some(h) => Prediction::Range(lo, h),
            None => Prediction::AtLeast(lo),
        }
    }

    /// Intersection of two distance claims, `None` when they contradict.
    pub fn intersect(&self, other: &Prediction) -> Option<Prediction> {
        match (self.interval(), other.interval()) {
            (None, _) => Some(other.clone()),
            (_, None) => Some(self.clone()),
            (Some((a, ah)), Some((b, bh))) => {
                let lo = a.max(b);
                let hi = match (ah, bh) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                match hi {
                    Some(h) if h < lo => None,
                    _ => Some(Prediction::from_interval(lo, hi)),
                }
            }
        }
    }

    /// Largest weight a search must reach to settle this claim.
    pub fn search_ceiling(&self) -> Option<u64> {
        self.interval().map(|(lo, hi)| hi.unwrap_or(lo))
    }

    pub fn is_distance_claim(&self) -> bool {
        self.interval().is_some()
    }
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prediction::Exact(x) => write!(f, "{x}"),
            Prediction::AtLeast(x) => write!(f, ">={x}"),
            Prediction::Range(a, b) => write!(f, "{a}..{b}"),
            Prediction::Value(v) => write!(f, "{v}"),
            Prediction::Inapplicable => write!(f, "n/a"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Match,
    Mismatch,
    Untested,
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Agreement::Match => "match",
            Agreement::Mismatch => "mismatch",
            Agreement::Untested => "untested",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inputs {
    Code { q: u64, m: u32, h: u64, aux: Option<u32> },
    Gcd { p: u64, i: u32, s: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Measurement {
    Code { d: Distance, k: u64 },
    Value(BigUint),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremVerdict {
    pub theorem_id: TheoremId,
    pub inputs: Inputs,
    pub predicted: Prediction,
    pub predicted_k: Option<u64>,
    /// The statement leaves the exact value open; a match here is a
    /// measurement inside the stated range, not a confirmation.
    pub open_case: bool,
    pub measured: Option<Measurement>,
    pub agrees: Agreement,
}

impl TheoremVerdict {
    fn code(id: TheoremId, q: u64, m: u32, h: u64, aux: Option<u32>, predicted: Prediction) -> Self {
        TheoremVerdict {
            theorem_id: id,
            inputs: Inputs::Code { q, m, h, aux },
            predicted,
            predicted_k: None,
            open_case: false,
            measured: None,
            agrees: Agreement::Untested,
        }
    }

    fn with_k(mut self, k: u64) -> Self {
        self.predicted_k = Some(k);
        self
    }

    fn open(mut self, open: bool) -> Self {
        self.open_case = open;
        self
    }

    /// Records a measurement and grades the claim against it.
    pub fn record(&mut self, measured: Measurement) {
        self.agrees = judge(&self.predicted, self.predicted_k, &measured);
        self.measured = Some(measured);
    }
}

fn judge(pred: &Prediction, pred_k: Option<u64>, measured: &Measurement) -> Agreement {
    match measured {
        Measurement::Value(v) => match pred {
            Prediction::Value(p) if p == v => Agreement::Match,
            Prediction::Value(_) => Agreement::Mismatch,
            _ => Agreement::Untested,
        },
        Measurement::Code { d, k } => {
            if pred_k.is_some_and(|pk| pk != *k) {
                return Agreement::Mismatch;
            }
            let Some((plo, phi)) = pred.interval() else {
                return Agreement::Untested;
            };
            let (mlo, mhi) = match *d {
                Distance::Exact(x) => (x, Some(x)),
                Distance::Above(w) => (w + 1, None),
                Distance::NoNonzeroCodewords => return Agreement::Untested,
            };
            let inside = mlo >= plo
                && match (mhi, phi) {
                    (_, None) => true,
                    (Some(a), Some(b)) => a <= b,
                    (None, Some(_)) => false,
                };
            let disjoint = phi.is_some_and(|b| mlo > b) || mhi.is_some_and(|a| a < plo);
            if inside {
                Agreement::Match
            } else if disjoint {
                Agreement::Mismatch
            } else {
                Agreement::Untested
            }
        }
    }
}

fn big_pow(p: u64, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

fn code_len(q: u64, m: u32) -> Result<u64, TheoremError> {
    q.checked_pow(m)
        .and_then(|x| x.checked_add(1))
        .filter(|&n| n <= 1 << 62)
        .ok_or(TheoremError::TooLarge { q, m })
}

/// `gcd(p^i + 1, p^s + 1)` from its closed form.
pub fn gcd_plus_plus(p: u64, i: u32, s: u32) -> BigUint {
    let m = gcd(i as u64, s as u64) as u32;
    if (i / m) % 2 == 1 && (s / m) % 2 == 1 {
        big_pow(p, m) + 1u32
    } else if p.is_multiple_of(2) {
        BigUint::one()
    } else {
        BigUint::from(2u32)
    }
}

/// `gcd(p^i - 1, p^s + 1)` from its closed form.
pub fn gcd_minus_plus(p: u64, i: u32, s: u32) -> BigUint {
    let m = gcd(i as u64, s as u64) as u32;
    if (i / m).is_multiple_of(2) {
        big_pow(p, m) + 1u32
    } else if p.is_multiple_of(2) {
        BigUint::one()
    } else {
        BigUint::from(2u32)
    }
}

/// Closed form against a direct big-integer gcd, for either lemma.
pub fn gcd_lemma_verdict(id: TheoremId, p: u64, i: u32, s: u32) -> Result<TheoremVerdict, TheoremError> {
    let (predicted, direct) = match id {
        TheoremId::L2_3 => (gcd_plus_plus(p, i, s), (big_pow(p, i) + 1u32).gcd(&(big_pow(p, s) + 1u32))),
        TheoremId::L2_4 => (gcd_minus_plus(p, i, s), (big_pow(p, i) - 1u32).gcd(&(big_pow(p, s) + 1u32))),
        _ => {
            return Err(TheoremError::RegimeMismatch { id, reason: "not a gcd lemma".into() });
        }
    };
    let mut v = TheoremVerdict {
        theorem_id: id,
        inputs: Inputs::Gcd { p, i, s },
        predicted: Prediction::Value(predicted),
        predicted_k: None,
        open_case: false,
        measured: None,
        agrees: Agreement::Untested,
    };
    v.record(Measurement::Value(direct));
    Ok(v)
}

/// `d = 3` iff `gcd(2h+1, q+1, q^m+1) != 1`.
pub fn d3_criterion(q: u64, m: u32, h: u64) -> bool {
    // gcd(g, q^m + 1) = gcd(g, (q^m + 1) mod g), so q^m + 1 never has to be
    // formed, however large m is.
    let g = gcd(2 * h + 1, q + 1);
    let r = (crate::numtheory::pow_mod(q, m as u64, g) + 1) % g;
    gcd(g, r) != 1
}

/// The same criterion in the form "m odd and gcd(2h+1, q+1) != 1".
pub fn d3_criterion_corollary(q: u64, m: u32, h: u64) -> bool {
    m % 2 == 1 && gcd(2 * h + 1, q + 1) != 1
}

/// Distance for odd `q` and odd `m`: 3 or 4, nothing else.
pub fn odd_odd_distance(q: u64, m: u32, h: u64) -> Result<u64, TheoremError> {
    if q.is_multiple_of(2) || m.is_multiple_of(2) {
        return Err(TheoremError::RegimeMismatch {
            id: TheoremId::T3_4,
            reason: format!("needs q and m odd, got q={q}, m={m}"),
        });
    }
    Ok(if gcd(2 * h + 1, q + 1) != 1 { 3 } else { 4 })
}

/// `true` when `gcd(h, n) >= 3` or `gcd(h+1, n) >= 3` certifies `d = 4`
/// (odd `q`, even `m`). `false` means unknown, not `d != 4`.
pub fn d4_sufficient_q_odd_m_even(q: u64, m: u32, h: u64) -> Result<bool, TheoremError> {
    if q.is_multiple_of(2) || m % 2 == 1 {
        return Err(TheoremError::RegimeMismatch {
            id: TheoremId::P3_5,
            reason: format!("needs q odd and m even, got q={q}, m={m}"),
        });
    }
    let n = code_len(q, m)?;
    let h = h % n;
    Ok(gcd(h, n) >= 3 || gcd(h + 1, n) >= 3)
}

/// Does some `0 <= i < 2m` satisfy `(h+1) 3^i = 2h (mod 3^m+1)`?
pub fn ternary_six_certificate(m: u32, h: u64) -> Result<bool, TheoremError> {
    let n = code_len(3, m)?;
    let h = h % n;
    let target = (2 * h as u128 % n as u128) as u64;
    let mut x = (h + 1) % n;
    for _ in 0..2 * m {
        if x == target {
            return Ok(true);
        }
        x = (x as u128 * 3 % n as u128) as u64;
    }
    Ok(false)
}

fn ternary_case(m: u32, h: u64, n: u64) -> Prediction {
    if m % 2 == 1 {
        // Read with the q + 1 factor: gcd(2h+1, 4, 3^m+1) is always 1, so every
        // odd-m ternary code has d = 4.
        let g = gcd(gcd(2 * h + 1, 4), n);
        return Prediction::Exact(if g != 1 { 3 } else { 4 });
    }
    if gcd(h, n) >= 3 || gcd(h + 1, n) >= 3 {
        Prediction::Exact(4)
    } else if m % 4 == 2 {
        Prediction::Exact(5)
    } else {
        Prediction::AtLeast(5)
    }
}

/// Ternary case split, upgraded to at-least-6 when the six-certificate holds
/// in the `m = 0 mod 4` branch.
pub fn ternary_distance(m: u32, h: u64) -> Result<Prediction, TheoremError> {
    let n = code_len(3, m)?;
    let h = h % n;
    let base = ternary_case(m, h, n);
    if base == Prediction::AtLeast(5) && ternary_six_certificate(m, h)? {
        return Ok(Prediction::AtLeast(6));
    }
    Ok(base)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseFamily {
    pub h: u64,
    pub n: u64,
    pub k: u64,
    pub d: Prediction,
}

/// Parameters for even `q` with `h = (q^i - 1)^{-1} mod q^m + 1`.
pub fn even_q_inverse_family(q: u64, m: u32, i: u32) -> Result<InverseFamily, TheoremError> {
    let id = TheoremId::T4_4;
    if q % 2 == 1 {
        return Err(TheoremError::RegimeMismatch { id, reason: format!("needs q even, got {q}") });
    }
    if i == 0 || i >= 2 * m {
        return Err(TheoremError::RegimeMismatch { id, reason: format!("needs 1 <= i <= 2m-1, got i={i}") });
    }
    let n = code_len(q, m)?;
    let qi = crate::numtheory::pow_mod(q, i as u64, n);
    let a = (qi + n - 1) % n;
    let h = mod_inverse(a, n).filter(|_| gcd(a, n) == 1).ok_or(TheoremError::NotInvertible { i, n })?;
    let d = if m % 2 == 1 {
        Prediction::Exact(3)
    } else if q > 2 {
        Prediction::Exact(4)
    } else if m % 4 == 2 {
        Prediction::Exact(5)
    } else {
        Prediction::Range(5, 6)
    };
    Ok(InverseFamily { h, n, k: n - 2 * m as u64, d })
}

/// `C(2, 2^m + 1, 3, 1)` with `m = 0 mod 4`.
pub fn binary_refined_distance(m: u32) -> Result<Prediction, TheoremError> {
    if m == 0 || !m.is_multiple_of(4) {
        return Err(TheoremError::RegimeMismatch {
            id: TheoremId::T4_5,
            reason: format!("needs m = 0 mod 4, got {m}"),
        });
    }
    Ok(if !m.is_multiple_of(16) { Prediction::Exact(5) } else { Prediction::Range(5, 6) })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfFamily {
    pub q: u64,
    pub h: u64,
    pub n: u64,
    pub k: u64,
    pub d: Prediction,
    /// Exact value not settled by the statement.
    pub open_case: bool,
    /// `[q^m + 1, q^m - 3, 5]` over `GF(q^m)`, whose subfield subcode this is.
    pub parent: (u64, u64, u64),
    /// `n - m (n - k_parent)`, a floor for any subfield subcode dimension.
    pub delsarte_floor: i64,
}

/// Parameters for `q = 2^s`, `h = (q^m - 2^i) / 2`.
pub fn half_family_params(s: u32, m: u32, i: u32) -> Result<HalfFamily, TheoremError> {
    let id = TheoremId::T4_6;
    let sm = s * m;
    if s == 0 || m < 2 || i == 0 || i >= sm {
        return Err(TheoremError::RegimeMismatch {
            id,
            reason: format!("needs s >= 1, m >= 2, 0 < i < sm; got s={s}, m={m}, i={i}"),
        });
    }
    if gcd(i as u64, sm as u64) != 1 {
        return Err(TheoremError::GcdViolation { i, sm });
    }
    let q = 1u64.checked_shl(s).filter(|_| s < 63).ok_or(TheoremError::TooLarge { q: u64::MAX, m })?;
    let n = code_len(q, m)?;
    let qm = n - 1;
    let h = (qm - (1u64 << i)) / 2;
    let parent = (n, qm - 3, 5);
    let delsarte_floor = n as i64 - m as i64 * (n - parent.1) as i64;
    let (k, d, open_case) = if s == 1 && matches!((m, i), (2, 1) | (3, 1) | (3, 2)) {
        (1, Prediction::Exact(n), false)
    } else if sm % 4 == 2 {
        (n - 4 * m as u64, Prediction::Exact(5), false)
    } else {
        (n - 4 * m as u64, Prediction::AtLeast(5), true)
    };
    Ok(HalfFamily { q, h, n, k, d, open_case, parent, delsarte_floor })
}

/// `D(x, y) = x^h y^h (y - x)`.
pub fn d_fn(x: &FieldElement, y: &FieldElement, h: u64) -> Result<FieldElement, TheoremError> {
    let f = x.field();
    if f.id() != y.field().id() {
        return Err(FieldError::FieldMismatch.into());
    }
    let raw = f.mul(f.mul(f.pow(x.raw(), h), f.pow(y.raw(), h)), f.sub(y.raw(), x.raw()));
    Ok(f.element(raw)?)
}

/// `E(x, y) = (x^(2h+1) - y^(2h+1)) / (x - y)`.
pub fn e_fn(x: &FieldElement, y: &FieldElement, h: u64) -> Result<FieldElement, TheoremError> {
    let f = x.field();
    if f.id() != y.field().id() {
        return Err(FieldError::FieldMismatch.into());
    }
    if x.raw() == y.raw() {
        return Err(TheoremError::EqualArguments);
    }
    Ok(f.element(e_raw(f, x.raw(), y.raw(), h))?)
}

fn e_raw(f: &FiniteField, x: u64, y: u64, h: u64) -> u64 {
    let e = 2 * h + 1;
    let num = f.sub(f.pow(x, e), f.pow(y, e));
    f.div(num, f.sub(x, y)).expect("x != y")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitGroup {
    /// `U_{q^m + 1}`.
    Full,
    /// `U_{q + 1}`.
    Small,
}

pub const DEFAULT_QUADRUPLE_CAP: u64 = 50;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadruple {
    pub x: FieldElement,
    pub y: FieldElement,
    pub z: FieldElement,
    pub w: FieldElement,
}

/// Pairwise distinct `x, y, z, w` in the group with
/// `E(x,z) / E(x,w) = E(y,z) / E(y,w)`, tested in cross-multiplied form.
pub fn quadruple_search(
    q: u64,
    m: u32,
    h: u64,
    group: UnitGroup,
    cap: u64,
) -> Result<Option<Quadruple>, TheoremError> {
    let (p, s) = prime_power(q).ok_or(TheoremError::NotPrimePower { q })?;
    let n = code_len(q, m)?;
    let h = h % n;
    let (id, l) = match group {
        UnitGroup::Full => (TheoremId::P3_2, n),
        UnitGroup::Small => (TheoremId::P3_3, q + 1),
    };
    match group {
        UnitGroup::Full if gcd(2 * h + 1, n) != 1 => {
            return Err(TheoremError::RegimeMismatch { id, reason: "needs gcd(2h+1, q^m+1) = 1".into() });
        }
        UnitGroup::Small if m.is_multiple_of(2) || gcd(2 * h + 1, q + 1) != 1 => {
            return Err(TheoremError::RegimeMismatch {
                id,
                reason: "needs m odd and gcd(2h+1, q+1) = 1".into(),
            });
        }
        _ => {}
    }
    if l > cap {
        return Err(TheoremError::CapExceeded { size: l, cap });
    }
    let field = FiniteField::new(p, s * 2 * m)?;
    let units = field.unit_group_raw(l)?;
    let holds = |x: u64, y: u64, z: u64, w: u64| {
        field.mul(e_raw(&field, x, z, h), e_raw(&field, y, w, h))
            == field.mul(e_raw(&field, y, z, h), e_raw(&field, x, w, h))
    };
    let wrap = |f: &Arc<FiniteField>, t: [u64; 4]| -> Result<Quadruple, TheoremError> {
        Ok(Quadruple { x: f.element(t[0])?, y: f.element(t[1])?, z: f.element(t[2])?, w: f.element(t[3])? })
    };

    if q % 2 == 1 {
        // (x, 1/x, 1, -1) for x in U_{q+1} other than +-1.
        let minus_one = field.neg(1);
        let in_group = |a: u64| field.pow(a, l) == 1;
        let candidate = field
            .unit_group_raw(q + 1)?
            .into_iter()
            .find(|&x| x != 1 && x != minus_one);
        if let Some(x) = candidate {
            let xi = field.inv(x)?;
            let t = [x, xi, 1, minus_one];
            if t.iter().all(|&a| in_group(a)) && holds(x, xi, 1, minus_one) {
                return Ok(Some(wrap(&field, t)?));
            }
        }
    }

    let len = units.len();
    // e[a * len + b] = E(u_a, u_b) for a != b.
    let mut e = vec![0u64; len * len];
    for a in 0..len {
        for b in 0..len {
            if a != b {
                e[a * len + b] = e_raw(&field, units[a], units[b], h);
            }
        }
    }
    let ee = |a: usize, b: usize| e[a * len + b];
    for x in 0..len {
        for y in (0..len).filter(|&y| y != x) {
            for z in (0..len).filter(|&z| z != x && z != y) {
                for w in (0..len).filter(|&w| w != x && w != y && w != z) {
                    if field.mul(ee(x, z), ee(y, w)) == field.mul(ee(y, z), ee(x, w)) {
                        return Ok(Some(wrap(&field, [units[x], units[y], units[z], units[w]])?));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Every statement that makes a claim about `C(q, q^m + 1, 3, h)`, unmeasured.
/// `h` is reduced modulo `q^m + 1` first.
pub fn applicable(q: u64, m: u32, h: u64) -> Result<Vec<TheoremVerdict>, TheoremError> {
    let (p, s) = prime_power(q).ok_or(TheoremError::NotPrimePower { q })?;
    let n = code_len(q, m)?;
    let h = h % n;
    let mut out = Vec::new();
    let three_or_more = |is3: bool| if is3 { Prediction::Exact(3) } else { Prediction::AtLeast(4) };

    out.push(TheoremVerdict::code(TheoremId::T3_1, q, m, h, None, three_or_more(d3_criterion(q, m, h))));
    out.push(TheoremVerdict::code(
        TheoremId::C3_1,
        q,
        m,
        h,
        None,
        three_or_more(d3_criterion_corollary(q, m, h)),
    ));

    if q % 2 == 1 && m % 2 == 1 {
        let d = odd_odd_distance(q, m, h)?;
        out.push(TheoremVerdict::code(TheoremId::T3_4, q, m, h, None, Prediction::Exact(d)));
    }
    if q % 2 == 1 && m.is_multiple_of(2) && d4_sufficient_q_odd_m_even(q, m, h)? {
        out.push(TheoremVerdict::code(TheoremId::P3_5, q, m, h, None, Prediction::Exact(4)));
    }
    if q % 2 == 1 && (h == 0 || h == n / 2) {
        out.push(
            TheoremVerdict::code(TheoremId::T4_1, q, m, h, None, Prediction::Exact(4))
                .with_k(n - 1 - 2 * m as u64),
        );
    }
    if q == 3 {
        let base = ternary_case(m, h, n);
        let upgrade = base == Prediction::AtLeast(5) && ternary_six_certificate(m, h)?;
        out.push(TheoremVerdict::code(TheoremId::T4_2, q, m, h, None, base));
        if upgrade {
            out.push(TheoremVerdict::code(TheoremId::P4_3, q, m, h, None, Prediction::AtLeast(6)));
        }
    }
    if p == 2 {
        for i in 1..2 * m {
            match even_q_inverse_family(q, m, i) {
                Ok(fam) if fam.h == h => {
                    let open = matches!(fam.d, Prediction::Range(..));
                    out.push(
                        TheoremVerdict::code(TheoremId::T4_4, q, m, h, Some(i), fam.d)
                            .with_k(fam.k)
                            .open(open),
                    );
                    break;
                }
                _ => {}
            }
        }
        if q == 2 && h == 1 && m.is_multiple_of(4) {
            let d = binary_refined_distance(m)?;
            let open = matches!(d, Prediction::Range(..));
            out.push(TheoremVerdict::code(TheoremId::T4_5, q, m, h, None, d).with_k(n - 2 * m as u64).open(open));
        }
        if m >= 2 {
            for i in (1..s * m).filter(|&i| gcd(i as u64, (s * m) as u64) == 1) {
                let fam = half_family_params(s, m, i)?;
                if fam.h == h {
                    out.push(
                        TheoremVerdict::code(TheoremId::T4_6, q, m, h, Some(i), fam.d)
                            .with_k(fam.k)
                            .open(fam.open_case),
                    );
                    break;
                }
            }
        }
        // The MDS parent family lives over GF(Q) with Q = 2^t and length Q + 1.
        if m == 1 && s >= 2 {
            let t = s;
            for i in (1..t).filter(|&i| gcd(i as u64, t as u64) == 1) {
                if (q - (1u64 << i)) / 2 == h {
                    out.push(
                        TheoremVerdict::code(TheoremId::C4_1, q, m, h, Some(i), Prediction::Exact(5))
                            .with_k(q - 3),
                    );
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Intersection of every distance claim in `verdicts`.
pub fn combine(q: u64, m: u32, h: u64, verdicts: &[TheoremVerdict]) -> Result<Prediction, TheoremError> {
    let mut acc = Prediction::Inapplicable;
    for v in verdicts {
        acc = acc.intersect(&v.predicted).ok_or_else(|| TheoremError::Inconsistent {
            q,
            m,
            h,
            detail: verdicts
                .iter()
                .map(|v| format!("{} says {}", v.theorem_id, v.predicted))
                .collect::<Vec<_>>()
                .join(", "),
        })?;
    }
    let ks: Vec<u64> = verdicts.iter().filter_map(|v| v.predicted_k).collect();
    if ks.windows(2).any(|w| w[0] != w[1]) {
        return Err(TheoremError::Inconsistent { q, m, h, detail: format!("dimension claims {ks:?}") });
    }
    Ok(acc)
}

#[derive(Debug, Clone)]
pub struct Verification {
    pub q: u64,
    pub m: u32,
    pub h: u64,
    pub n: u64,
    pub k: u64,
    pub verdicts: Vec<TheoremVerdict>,
    pub predicted: Prediction,
    pub report: DistanceReport,
    pub agrees: Agreement,
    pub open_case: bool,
}

impl Verification {
    pub fn theorem_ids(&self) -> Vec<TheoremId> {
        self.verdicts.iter().map(|v| v.theorem_id).collect()
    }
}

/// Predicts, measures, and grades `C(q, q^m + 1, 3, h)`.
///
/// Without `w_max` the search goes exactly as far as the combined prediction
/// needs: its value, the top of its range, or its lower bound.
pub fn verify(
    q: u64,
    m: u32,
    h: u64,
    w_max: Option<u64>,
    method: Method,
    config: &SearchConfig,
) -> Result<Verification, TheoremError> {
    let n = code_len(q, m)?;
    let h = h % n;
    let mut verdicts = applicable(q, m, h)?;
    let predicted = combine(q, m, h, &verdicts)?;
    let code = BchCode::build(q, m, 3, h)?;
    let w = w_max.or(predicted.search_ceiling()).unwrap_or(3).max(2);
    let report = min_distance(&code, w, method, config)?;
    let k = code.dimension() as u64;
    for v in verdicts.iter_mut() {
        v.record(Measurement::Code { d: report.d, k });
    }
    let agrees = if verdicts.iter().any(|v| v.agrees == Agreement::Mismatch) {
        Agreement::Mismatch
    } else if verdicts.iter().any(|v| v.agrees == Agreement::Match) {
        Agreement::Match
    } else {
        Agreement::Untested
    };
    let open_case = verdicts.iter().any(|v| v.open_case);
    Ok(Verification { q, m, h, n, k, verdicts, predicted, report, agrees, open_case })
}

/// `verify` over every `(q, m, h)` with `q` in `q_list`, `1 <= m <= m_max`,
/// `0 <= h <= q^m`, ordered by that tuple.
pub fn sweep(
    q_list: &[u64],
    m_max: u32,
    method: Method,
    config: &SearchConfig,
) -> Result<Vec<Verification>, TheoremError> {
    let mut tuples = Vec::new();
    for &q in q_list {
        for m in 1..=m_max {
            let n = code_len(q, m)?;
            tuples.extend((0..n).map(|h| (q, m, h)));
        }
    }
    tuples.sort_unstable();
    tuples.dedup();
    let inner = SearchConfig { parallel: false, ..*config };
    exec::map_ordered(tuples.len(), config.parallel, |t| {
        let (q, m, h) = tuples[t];
        verify(q, m, h, None, method, &inner)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_lemma_examples() {
        assert_eq!(gcd_plus_plus(2, 3, 9), BigUint::from(9u32));
        assert_eq!(gcd_minus_plus(2, 2, 3), BigUint::from(3u32));
        assert_eq!(gcd_plus_plus(3, 1, 2), BigUint::from(2u32));
        let v = gcd_lemma_verdict(TheoremId::L2_4, 2, 2, 3).unwrap();
        assert_eq!(v.agrees, Agreement::Match);
        assert!(gcd_lemma_verdict(TheoremId::T3_1, 2, 2, 3).is_err());
    }

    #[test]
    fn d3_examples() {
        assert!(!d3_criterion(3, 1, 1));
        assert!(!d3_criterion(3, 1, 4));
        assert!(d3_criterion(5, 1, 1));
    }

    #[test]
    fn odd_odd_examples() {
        assert_eq!(odd_odd_distance(3, 1, 0).unwrap(), 4);
        assert_eq!(odd_odd_distance(5, 1, 1).unwrap(), 3);
        assert_eq!(odd_odd_distance(3, 3, 1).unwrap(), 4);
        assert!(odd_odd_distance(4, 1, 1).is_err());
        assert!(odd_odd_distance(3, 2, 1).is_err());
    }

    #[test]
    fn d4_sufficient_examples() {
        assert!(d4_sufficient_q_odd_m_even(3, 2, 0).unwrap());
        assert!(!d4_sufficient_q_odd_m_even(5, 2, 2).unwrap());
        assert!(d4_sufficient_q_odd_m_even(3, 2, 4).unwrap());
        assert!(d4_sufficient_q_odd_m_even(3, 3, 4).is_err());
    }

    #[test]
    fn ternary_examples() {
        assert_eq!(ternary_distance(1, 1).unwrap(), Prediction::Exact(4));
        assert_eq!(ternary_distance(2, 1).unwrap(), Prediction::Exact(5));
        assert_eq!(ternary_distance(4, 4).unwrap(), Prediction::AtLeast(5));
        assert_eq!(ternary_distance(4, 3).unwrap(), Prediction::AtLeast(5));
        // Odd m never gives 3 over GF(3), whatever gcd(2h+1, 3^m+1) is.
        assert_eq!(ternary_distance(3, 3).unwrap(), Prediction::Exact(4));
    }

    #[test]
    fn six_certificate_scan() {
        // (h+1) 3^i = 2h mod 82 forces h + 1 even, so h odd.
        for h in 0..82u64 {
            if ternary_six_certificate(4, h).unwrap() {
                assert_eq!(h % 2, 1, "h={h}");
                let i = (0..8).find(|&i| (h + 1) * 3u64.pow(i) % 82 == 2 * h % 82);
                assert!(i.is_some());
            }
        }
    }

    #[test]
    fn inverse_family_examples() {
        let f = even_q_inverse_family(2, 2, 1).unwrap();
        assert_eq!((f.h, f.n, f.k, f.d), (1, 5, 1, Prediction::Exact(5)));
        let f = even_q_inverse_family(4, 2, 1).unwrap();
        assert_eq!((f.h, f.n, f.k, f.d), (6, 17, 13, Prediction::Exact(4)));
        let f = even_q_inverse_family(2, 3, 1).unwrap();
        assert_eq!((f.h, f.n, f.k, f.d), (1, 9, 3, Prediction::Exact(3)));
        assert_eq!(even_q_inverse_family(2, 4, 1).unwrap().d, Prediction::Range(5, 6));
        assert_eq!(even_q_inverse_family(2, 3, 2).unwrap_err(), TheoremError::NotInvertible { i: 2, n: 9 });
        assert!(even_q_inverse_family(3, 2, 1).is_err());
        assert!(even_q_inverse_family(2, 2, 4).is_err());
    }

    #[test]
    fn binary_refined_examples() {
        assert_eq!(binary_refined_distance(4).unwrap(), Prediction::Exact(5));
        assert_eq!(binary_refined_distance(8).unwrap(), Prediction::Exact(5));
        assert_eq!(binary_refined_distance(16).unwrap(), Prediction::Range(5, 6));
        assert!(binary_refined_distance(6).is_err());
    }

    #[test]
    fn half_family_examples() {
        let f = half_family_params(1, 5, 1).unwrap();
        assert_eq!((f.q, f.h, f.n, f.k), (2, 15, 33, 13));
        assert_eq!(f.d, Prediction::AtLeast(5));
        assert!(f.open_case);
        let f = half_family_params(2, 2, 1).unwrap();
        assert_eq!((f.q, f.h, f.n, f.k), (4, 7, 17, 9));
        assert!(f.open_case);
        let f = half_family_params(3, 2, 1).unwrap();
        assert_eq!((f.q, f.h, f.n, f.k, f.d.clone()), (8, 31, 65, 57, Prediction::Exact(5)));
        assert_eq!(f.parent, (65, 61, 5));
        for (m, i) in [(2, 1), (3, 1), (3, 2)] {
            let f = half_family_params(1, m, i).unwrap();
            assert_eq!((f.k, f.d), (1, Prediction::Exact(f.n)));
        }
        assert_eq!(half_family_params(1, 4, 2).unwrap_err(), TheoremError::GcdViolation { i: 2, sm: 4 });
        assert!(half_family_params(1, 1, 1).is_err());
    }

    #[test]
    fn delsarte_floor_holds() {
        for (s, m) in [(1u32, 2u32), (1, 3), (1, 4), (1, 5), (2, 2), (2, 3), (3, 2)] {
            for i in (1..s * m).filter(|&i| gcd(i as u64, (s * m) as u64) == 1) {
                let f = half_family_params(s, m, i).unwrap();
                assert!(f.k as i64 >= f.delsarte_floor);
                if f.k > 1 {
                    assert_eq!(f.k as i64, f.delsarte_floor, "s={s} m={m} i={i}");
                }
            }
        }
    }

    #[test]
    fn prediction_algebra() {
        let a = Prediction::AtLeast(4);
        assert_eq!(a.intersect(&Prediction::Range(5, 6)), Some(Prediction::Range(5, 6)));
        assert_eq!(Prediction::Range(5, 6).intersect(&Prediction::Exact(5)), Some(Prediction::Exact(5)));
        assert_eq!(Prediction::Exact(3).intersect(&a), None);
        assert_eq!(a.intersect(&Prediction::Inapplicable), Some(a.clone()));
        assert_eq!(Prediction::Range(5, 6).to_string(), "5..6");
        assert_eq!(a.to_string(), ">=4");
        assert_eq!(Prediction::Range(5, 6).search_ceiling(), Some(6));
    }

    #[test]
    fn judging() {
        let m = |d| Measurement::Code { d, k: 3 };
        let r = Prediction::Range(5, 6);
        assert_eq!(judge(&r, None, &m(Distance::Exact(5))), Agreement::Match);
        assert_eq!(judge(&r, None, &m(Distance::Exact(7))), Agreement::Mismatch);
        assert_eq!(judge(&r, None, &m(Distance::Above(6))), Agreement::Mismatch);
        assert_eq!(judge(&r, None, &m(Distance::Above(5))), Agreement::Untested);
        assert_eq!(judge(&Prediction::AtLeast(5), None, &m(Distance::Above(5))), Agreement::Match);
        assert_eq!(judge(&Prediction::AtLeast(5), Some(4), &m(Distance::Exact(5))), Agreement::Mismatch);
        assert_eq!(judge(&r, None, &m(Distance::NoNonzeroCodewords)), Agreement::Untested);
    }

    #[test]
    fn e_of_x_and_minus_x() {
        let f = FiniteField::new(3, 4).unwrap();
        for x in f.unit_group(10).unwrap() {
            for h in 0..6u64 {
                let e = e_fn(&x, &x.neg(), h).unwrap();
                assert_eq!(e, x.pow(2 * h as i64).unwrap());
            }
        }
        let one = f.one();
        assert_eq!(e_fn(&one, &one, 1).unwrap_err(), TheoremError::EqualArguments);
        assert!(d_fn(&one, &one, 3).unwrap().is_zero());
    }

    #[test]
    fn canonical_quadruple() {
        let quad = quadruple_search(3, 1, 1, UnitGroup::Small, DEFAULT_QUADRUPLE_CAP).unwrap().unwrap();
        assert_eq!(quad.y, quad.x.inv().unwrap());
        assert_eq!(quad.z.raw(), 1);
        assert_eq!(quad.w, quad.z.neg());
        assert_eq!(quad.x.field().multiplicative_order(quad.x.raw()).unwrap(), 4);
    }

    #[test]
    fn quadruple_guards() {
        // U_3 has only three elements.
        assert_eq!(quadruple_search(2, 1, 0, UnitGroup::Small, 50).unwrap(), None);
        assert!(matches!(
            quadruple_search(2, 6, 0, UnitGroup::Full, 50),
            Err(TheoremError::CapExceeded { size: 65, cap: 50 })
        ));
        assert!(quadruple_search(3, 2, 1, UnitGroup::Small, 50).is_err());
        assert!(quadruple_search(5, 1, 1, UnitGroup::Full, 50).is_err());
    }

    #[test]
    fn routing() {
        let ids = |q, m, h| applicable(q, m, h).unwrap().iter().map(|v| v.theorem_id).collect::<Vec<_>>();
        assert_eq!(ids(3, 1, 1), vec![TheoremId::T3_1, TheoremId::C3_1, TheoremId::T3_4, TheoremId::T4_2]);
        assert!(ids(2, 4, 1).contains(&TheoremId::T4_5));
        assert!(ids(2, 5, 15).contains(&TheoremId::T4_6));
        assert!(ids(16, 1, 7).contains(&TheoremId::C4_1));
        assert!(ids(5, 2, 0).contains(&TheoremId::T4_1));
        assert!(ids(4, 2, 6).contains(&TheoremId::T4_4));
    }

    #[test]
    fn verify_examples() {
        let cfg = SearchConfig::default();
        let v = verify(3, 1, 1, None, Method::MitmSyndrome, &cfg).unwrap();
        assert_eq!((v.predicted.clone(), v.report.d, v.agrees), (Prediction::Exact(4), Distance::Exact(4), Agreement::Match));
        let v = verify(5, 1, 1, None, Method::MitmSyndrome, &cfg).unwrap();
        assert_eq!((v.report.d, v.agrees), (Distance::Exact(3), Agreement::Match));
        let v = verify(2, 4, 1, None, Method::MitmSyndrome, &cfg).unwrap();
        assert!(v.theorem_ids().contains(&TheoremId::T4_5));
        assert_eq!((v.predicted.clone(), v.report.d, v.agrees), (Prediction::Exact(5), Distance::Exact(5), Agreement::Match));
        let v = verify(2, 2, 0, None, Method::MitmSyndrome, &cfg).unwrap();
        assert_eq!((v.k, v.report.d, v.agrees), (0, Distance::NoNonzeroCodewords, Agreement::Untested));
    }

    #[test]
    fn sweep_is_ordered_and_consistent() {
        let cfg = SearchConfig::default();
        let runs = sweep(&[3, 2], 2, Method::MitmSyndrome, &cfg).unwrap();
        let keys: Vec<_> = runs.iter().map(|v| (v.q, v.m, v.h)).collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
        assert_eq!(runs.len(), 3 + 5 + 4 + 10);
        assert!(runs.iter().all(|v| v.agrees != Agreement::Mismatch));
        let seq = sweep(&[2, 3], 2, Method::SupportEnum, &SearchConfig::sequential()).unwrap();
        for (a, b) in runs.iter().zip(&seq) {
            assert_eq!(a.report.d, b.report.d);
            assert_eq!(a.report.witness, b.report.witness);
        }
    }
}
