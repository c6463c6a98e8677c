//! Exact minimum distance at desk scale, plus Singleton and sphere-packing
//! classification.
//!
//! Three independent searches are provided:
//!
//! * **message-enum** walks every nonzero message and encodes it. It is exact
//!   and works for any designed distance.
//! * **support-enum** walks weights upward from the BCH bound and tests every
//!   support and scalar-normalized coefficient pattern against the two-row
//!   parity check.
//! * **mitm-syndrome** splits weight `w` into `ceil(w/2) + floor(w/2)`, tabulates
//!   the syndromes of all normalized half-words on one side, and probes the
//!   table with the negated syndromes of arbitrary half-words on the other.
//!   Both halves range over all `n` positions; a match counts only when the
//!   supports are disjoint.
//!
//! All three report the same witness: the minimum-weight codeword whose first
//! nonzero coefficient is 1 and whose `(support, coefficients)` is
//! lexicographically smallest. That makes reports independent of thread count.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bch::{BchCode, BchError};
use crate::exec;
use crate::field::FiniteField;
use crate::numtheory::{binomial, binomial_u64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    MessageEnum,
    SupportEnum,
    MitmSyndrome,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::MessageEnum, Method::SupportEnum, Method::MitmSyndrome];

    pub fn name(self) -> &'static str {
        match self {
            Method::MessageEnum => "message-enum",
            Method::SupportEnum => "support-enum",
            Method::MitmSyndrome => "mitm-syndrome",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "message-enum" | "message" => Ok(Method::MessageEnum),
            "support-enum" | "support" => Ok(Method::SupportEnum),
            "mitm-syndrome" | "mitm" => Ok(Method::MitmSyndrome),
            _ => Err(format!("unknown method `{s}` (message-enum, support-enum, mitm-syndrome)")),
        }
    }
}

/// Search guardrails. The budgets bound work, not semantics.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    /// Largest `q^k` message-enum will walk.
    pub message_budget: u64,
    /// Largest `C(n, w) (q-1)^(w-1)` support-enum will walk at one weight.
    pub support_budget: u64,
    /// Largest half-table (either side) mitm-syndrome will build or probe.
    pub mitm_budget: u64,
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            message_budget: 10_000_000,
            support_budget: 1_000_000_000,
            mitm_budget: 100_000_000,
            parallel: true,
        }
    }
}

impl SearchConfig {
    pub fn sequential() -> Self {
        SearchConfig { parallel: false, ..Self::default() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistanceError {
    #[error("{method} at weight {w} needs {cost} steps, budget is {budget}")]
    BudgetExceeded { method: Method, w: u64, cost: u64, budget: u64 },
    #[error("syndrome searches need delta = 3, got {0}")]
    UnsupportedDelta(u64),
    #[error("w_max = {w_max} is below delta - 1 = {floor}")]
    WmaxTooSmall { w_max: u64, floor: u64 },
    #[error("invalid code parameters [n={n}, k={k}, d={d}] over GF({q})")]
    InvalidParams { n: u64, k: u64, d: u64, q: u64 },
    #[error(transparent)]
    Bch(#[from] BchError),
}

/// Measured minimum distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distance {
    Exact(u64),
    /// Every weight up to and including this one was ruled out.
    Above(u64),
    /// The code is `{0}`.
    NoNonzeroCodewords,
}

impl Distance {
    pub fn exact(self) -> Option<u64> {
        match self {
            Distance::Exact(d) => Some(d),
            _ => None,
        }
    }

    /// Smallest value the true distance can take.
    pub fn lower_bound(self) -> Option<u64> {
        match self {
            Distance::Exact(d) => Some(d),
            Distance::Above(w) => Some(w + 1),
            Distance::NoNonzeroCodewords => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Exact(d) => write!(f, "{d}"),
            Distance::Above(w) => write!(f, ">{w}"),
            Distance::NoNonzeroCodewords => write!(f, "none"),
        }
    }
}

/// A codeword given by its support and the (packed) base-field values there.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Witness {
    pub support: Vec<usize>,
    pub coeffs: Vec<u64>,
}

impl Witness {
    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn to_vector(&self, n: usize) -> Vec<u64> {
        let mut v = vec![0; n];
        for (&i, &c) in self.support.iter().zip(&self.coeffs) {
            v[i] = c;
        }
        v
    }

    /// Scales so the first coefficient is 1.
    fn normalized(support: Vec<usize>, mut coeffs: Vec<u64>, base: &FiniteField) -> Witness {
        if let Some(&first) = coeffs.first() {
            if first != 1 {
                let inv = base.inv(first).expect("witness coefficients are nonzero");
                for c in coeffs.iter_mut() {
                    *c = base.mul(*c, inv);
                }
            }
        }
        Witness { support, coeffs }
    }

    fn from_vector(v: &[u64], base: &FiniteField) -> Witness {
        let (support, coeffs) = v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
            .unzip();
        Self::normalized(support, coeffs, base)
    }
}

#[derive(Debug, Clone)]
pub struct DistanceReport {
    pub q: u64,
    pub m: u32,
    pub delta: u64,
    pub h: u64,
    pub n: u64,
    pub k: u64,
    pub method: Method,
    /// Highest weight exhaustively confirmed or ruled out.
    pub w_explored: u64,
    pub d: Distance,
    pub witness: Option<Witness>,
    pub elapsed: Duration,
}

/// Minimum distance of `code` searching weights up to `w_max` (message-enum
/// ignores `w_max` and is always exact).
pub fn min_distance(
    code: &BchCode,
    w_max: u64,
    method: Method,
    config: &SearchConfig,
) -> Result<DistanceReport, DistanceError> {
    let start = Instant::now();
    let delta = code.delta();
    if w_max + 1 < delta {
        return Err(DistanceError::WmaxTooSmall { w_max, floor: delta - 1 });
    }
    if method != Method::MessageEnum && delta != 3 {
        return Err(DistanceError::UnsupportedDelta(delta));
    }
    let (d, witness, explored) = if code.dimension() == 0 {
        (Distance::NoNonzeroCodewords, None, code.n())
    } else {
        match method {
            Method::MessageEnum => {
                let w = message_enum(code, config)?;
                (Distance::Exact(w.weight() as u64), Some(w.clone()), w.weight() as u64)
            }
            Method::SupportEnum | Method::MitmSyndrome => {
                let cols = ColumnTable::new(code);
                let top = w_max.min(code.n());
                let mut found = None;
                for w in delta..=top {
                    let hit = if method == Method::SupportEnum {
                        support_enum_at(&cols, w as usize, config)?
                    } else {
                        mitm_at(&cols, w as usize, config)?
                    };
                    if let Some(wit) = hit {
                        found = Some((w, wit));
                        break;
                    }
                }
                match found {
                    Some((w, wit)) => (Distance::Exact(w), Some(wit), w),
                    None => (Distance::Above(w_max), None, w_max),
                }
            }
        }
    };
    Ok(DistanceReport {
        q: code.q(),
        m: code.m(),
        delta,
        h: code.h(),
        n: code.n(),
        k: code.dimension() as u64,
        method,
        w_explored: explored,
        d,
        witness,
        elapsed: start.elapsed(),
    })
}

fn message_enum(code: &BchCode, config: &SearchConfig) -> Result<Witness, DistanceError> {
    let q = code.q();
    let k = code.dimension();
    let total = q
        .checked_pow(k as u32)
        .filter(|&t| t <= config.message_budget)
        .ok_or(DistanceError::BudgetExceeded {
            method: Method::MessageEnum,
            w: code.n(),
            cost: q.checked_pow(k as u32).unwrap_or(u64::MAX),
            budget: config.message_budget,
        })?;
    let base = code.base_field();
    let g = code.generator().coeffs();
    let n = code.len();
    let chunks = total.min(256);
    let per = total.div_ceil(chunks);

    let best = exec::min_over(chunks as usize, config.parallel, |c| {
        let lo = (c as u64 * per).max(1);
        let hi = ((c as u64 + 1) * per).min(total);
        if lo >= hi {
            return None;
        }
        let mut msg = vec![0u64; k];
        let mut x = lo;
        for d in msg.iter_mut() {
            *d = x % q;
            x /= q;
        }
        let mut word = vec![0u64; n];
        for (j, &mj) in msg.iter().enumerate().filter(|(_, &v)| v != 0) {
            for (t, &gt) in g.iter().enumerate() {
                word[j + t] = base.add(word[j + t], base.mul(mj, gt));
            }
        }
        let mut best: Option<(usize, Witness)> = None;
        for idx in lo..hi {
            let weight = word.iter().filter(|&&c| c != 0).count();
            if best.as_ref().is_none_or(|(bw, _)| weight <= *bw) {
                let cand = (weight, Witness::from_vector(&word, base));
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
            if idx + 1 == hi {
                break;
            }
            // Odometer step: bump digit j, carrying through digits equal to q - 1.
            let mut j = 0;
            loop {
                let old = msg[j];
                let new = if old + 1 == q { 0 } else { old + 1 };
                msg[j] = new;
                let diff = base.sub(new, old);
                for (t, &gt) in g.iter().enumerate() {
                    word[j + t] = base.add(word[j + t], base.mul(diff, gt));
                }
                if new != 0 {
                    break;
                }
                j += 1;
            }
        }
        best
    });
    Ok(best.expect("a nonzero code has a nonzero codeword").1)
}

/// Precomputed `c * (beta^(h i), beta^((h+1) i))` for every position `i` and
/// nonzero base element `c`, as packed ambient values.
struct ColumnTable<'a> {
    n: usize,
    /// Number of nonzero base-field elements.
    units: usize,
    base: &'a FiniteField,
    ambient: &'a FiniteField,
    cols: Vec<(u64, u64)>,
}

impl<'a> ColumnTable<'a> {
    fn new(code: &'a BchCode) -> Self {
        let amb = code.ambient_field();
        let units = (code.q() - 1) as usize;
        let mut cols = Vec::with_capacity(code.len() * units);
        for i in 0..code.n() {
            let (a, b) = code.column(i);
            for c in 1..code.q() {
                let e = code.embedding().embed(c);
                cols.push((amb.mul(e, a), amb.mul(e, b)));
            }
        }
        ColumnTable { n: code.len(), units, base: code.base_field(), ambient: amb, cols }
    }

    /// Column for position `i` scaled by the base element packed as `c` (nonzero).
    #[inline]
    fn get(&self, i: usize, c: u64) -> (u64, u64) {
        self.cols[i * self.units + c as usize - 1]
    }

    #[inline]
    fn add(&self, s: (u64, u64), t: (u64, u64)) -> (u64, u64) {
        (self.ambient.add(s.0, t.0), self.ambient.add(s.1, t.1))
    }

    #[inline]
    fn key(&self, s: (u64, u64)) -> u64 {
        s.0 | s.1 << 32
    }

    fn neg_key(&self, s: (u64, u64)) -> u64 {
        self.key((self.ambient.neg(s.0), self.ambient.neg(s.1)))
    }
}

fn units_pow(units: usize, e: usize) -> u64 {
    (units as u64).checked_pow(e as u32).unwrap_or(u64::MAX)
}

fn support_enum_at(
    cols: &ColumnTable,
    w: usize,
    config: &SearchConfig,
) -> Result<Option<Witness>, DistanceError> {
    let n = cols.n;
    let cost = binomial_u64(n as u64, w as u64).saturating_mul(units_pow(cols.units, w - 1));
    if cost > config.support_budget {
        return Err(DistanceError::BudgetExceeded {
            method: Method::SupportEnum,
            w: w as u64,
            cost,
            budget: config.support_budget,
        });
    }
    // Supports starting at s1 are all smaller than those starting later, so the
    // first s1 with any hit holds the lexicographic minimum.
    Ok(exec::find_first(n + 1 - w, config.parallel, |s1| {
        let mut support = vec![s1];
        let mut coeffs = vec![1u64];
        let mut best = None;
        support_dfs(cols, w, cols.get(s1, 1), &mut support, &mut coeffs, &mut best);
        best
    }))
}

fn support_dfs(
    cols: &ColumnTable,
    w: usize,
    sum: (u64, u64),
    support: &mut Vec<usize>,
    coeffs: &mut Vec<u64>,
    best: &mut Option<Witness>,
) {
    if support.len() == w {
        if sum == (0, 0) {
            let cand = Witness { support: support.clone(), coeffs: coeffs.clone() };
            if best.as_ref().is_none_or(|b| cand < *b) {
                *best = Some(cand);
            }
        }
        return;
    }
    if let Some(b) = best {
        if support.as_slice() > &b.support[..support.len()] {
            return;
        }
    }
    let remaining = w - support.len();
    let start = support.last().unwrap() + 1;
    for pos in start..=cols.n - remaining {
        for c in 1..=cols.units as u64 {
            support.push(pos);
            coeffs.push(c);
            support_dfs(cols, w, cols.add(sum, cols.get(pos, c)), support, coeffs, best);
            support.pop();
            coeffs.pop();
        }
    }
}

/// Mixed-radix packing of a half-word: positions in base `n`, coefficient
/// indices in base `q - 1`.
#[derive(Clone, Copy)]
struct HalfCodec {
    n: u64,
    units: u64,
    len: usize,
}

impl HalfCodec {
    fn encode(&self, support: &[usize], coeffs: &[u64]) -> u64 {
        let mut r = 0u64;
        for &c in coeffs.iter().rev() {
            r = r * self.units + (c - 1);
        }
        for &p in support.iter().rev() {
            r = r * self.n + p as u64;
        }
        r
    }

    fn decode(&self, mut r: u64, support: &mut Vec<usize>, coeffs: &mut Vec<u64>) {
        support.clear();
        coeffs.clear();
        for _ in 0..self.len {
            support.push((r % self.n) as usize);
            r /= self.n;
        }
        for _ in 0..self.len {
            coeffs.push(r % self.units + 1);
            r /= self.units;
        }
    }
}

/// Calls `visit(support, coeffs, syndrome)` for every `len`-subset whose
/// smallest position is `first`, with the first coefficient pinned to 1 when
/// `normalized`, else ranging over all units.
fn for_each_half<F>(cols: &ColumnTable, len: usize, first: usize, normalized: bool, visit: &mut F)
where
    F: FnMut(&[usize], &[u64], (u64, u64)),
{
    fn rec<F: FnMut(&[usize], &[u64], (u64, u64))>(
        cols: &ColumnTable,
        len: usize,
        sum: (u64, u64),
        support: &mut Vec<usize>,
        coeffs: &mut Vec<u64>,
        visit: &mut F,
    ) {
        if support.len() == len {
            visit(support, coeffs, sum);
            return;
        }
        let remaining = len - support.len();
        let start = support.last().unwrap() + 1;
        for pos in start..=cols.n - remaining {
            for c in 1..=cols.units as u64 {
                support.push(pos);
                coeffs.push(c);
                rec(cols, len, cols.add(sum, cols.get(pos, c)), support, coeffs, visit);
                support.pop();
                coeffs.pop();
            }
        }
    }
    if first + len > cols.n {
        return;
    }
    let first_coeffs: Vec<u64> = if normalized { vec![1] } else { (1..=cols.units as u64).collect() };
    let mut support = Vec::with_capacity(len);
    let mut coeffs = Vec::with_capacity(len);
    for c in first_coeffs {
        support.push(first);
        coeffs.push(c);
        rec(cols, len, cols.get(first, c), &mut support, &mut coeffs, visit);
        support.pop();
        coeffs.pop();
    }
}

fn mitm_at(
    cols: &ColumnTable,
    w: usize,
    config: &SearchConfig,
) -> Result<Option<Witness>, DistanceError> {
    let n = cols.n;
    let (a, b) = (w.div_ceil(2), w / 2);
    let cost_a = binomial_u64(n as u64, a as u64).saturating_mul(units_pow(cols.units, a - 1));
    let cost_b = binomial_u64(n as u64, b as u64).saturating_mul(units_pow(cols.units, b));
    let cost = cost_a.max(cost_b);
    if cost > config.mitm_budget {
        return Err(DistanceError::BudgetExceeded {
            method: Method::MitmSyndrome,
            w: w as u64,
            cost,
            budget: config.mitm_budget,
        });
    }
    let codec_a = HalfCodec { n: n as u64, units: cols.units as u64, len: a };

    let mut table: Vec<(u64, u64)> = exec::flat_map_ordered(n, config.parallel, |first| {
        let mut out = Vec::new();
        for_each_half(cols, a, first, true, &mut |s, c, syn| {
            out.push((cols.key(syn), codec_a.encode(s, c)));
        });
        out
    });
    sort_table(&mut table, config.parallel);

    let best = exec::min_over(n, config.parallel, |first| {
        let mut best: Option<Witness> = None;
        let mut sa = Vec::with_capacity(a);
        let mut ca = Vec::with_capacity(a);
        for_each_half(cols, b, first, false, &mut |sb, cb, syn| {
            let target = cols.neg_key(syn);
            let lo = table.partition_point(|e| e.0 < target);
            for &(key, rank) in &table[lo..] {
                if key != target {
                    break;
                }
                codec_a.decode(rank, &mut sa, &mut ca);
                if sa.iter().any(|p| sb.contains(p)) {
                    continue;
                }
                let mut merged: Vec<(usize, u64)> =
                    sa.iter().copied().zip(ca.iter().copied()).collect();
                merged.extend(sb.iter().copied().zip(cb.iter().copied()));
                merged.sort_unstable();
                let (support, coeffs) = merged.into_iter().unzip();
                let cand = Witness::normalized(support, coeffs, cols.base);
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        });
        best
    });
    Ok(best)
}

fn sort_table(table: &mut [(u64, u64)], parallel: bool) {
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::slice::ParallelSliceMut;
        table.par_sort_unstable();
        return;
    }
    let _ = parallel;
    table.sort_unstable();
}

/// Sphere-packing evaluation for an `[n, k, d]_q` code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundVerdict {
    pub n: u64,
    pub k: u64,
    pub d: u64,
    pub q: u64,
    /// `sum_{i <= (d-1)/2} C(n, i) (q-1)^i`.
    pub sphere_packing_lhs: BigUint,
    /// The same sum with `d + 1` in place of `d`.
    pub next_lhs: BigUint,
    /// `q^(n-k)`.
    pub rhs: BigUint,
    /// Certified distance-optimal: an `[n, k, d+1]` code would violate the bound.
    /// Sufficient, not necessary.
    pub distance_optimal: bool,
    pub singleton_defect: i64,
}

fn ball_volume(n: u64, radius: u64, q: u64) -> BigUint {
    let mut acc = BigUint::default();
    let mut qp = BigUint::one();
    for i in 0..=radius.min(n) {
        acc += binomial(n, i) * &qp;
        qp *= q - 1;
    }
    acc
}

pub fn sphere_packing_check(n: u64, k: u64, d: u64, q: u64) -> Result<BoundVerdict, DistanceError> {
    if q < 2 || d < 1 || d > n || k < 1 || k > n {
        return Err(DistanceError::InvalidParams { n, k, d, q });
    }
    let lhs = ball_volume(n, (d - 1) / 2, q);
    let next_lhs = ball_volume(n, d / 2, q);
    let rhs = BigUint::from(q).pow((n - k) as u32);
    Ok(BoundVerdict {
        n,
        k,
        d,
        q,
        distance_optimal: next_lhs > rhs,
        sphere_packing_lhs: lhs,
        next_lhs,
        rhs,
        singleton_defect: n as i64 - k as i64 + 1 - d as i64,
    })
}

impl BoundVerdict {
    pub fn satisfied(&self) -> bool {
        self.sphere_packing_lhs <= self.rhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingletonClass {
    Mds,
    Amds,
    /// Singleton defect of 2 or more.
    Defect(u64),
    /// `d > n - k + 1`: no such code exists.
    Impossible,
}

impl fmt::Display for SingletonClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingletonClass::Mds => write!(f, "MDS"),
            SingletonClass::Amds => write!(f, "AMDS"),
            SingletonClass::Defect(s) => write!(f, "defect {s}"),
            SingletonClass::Impossible => write!(f, "impossible"),
        }
    }
}

pub fn classify_singleton(n: u64, k: u64, d: u64) -> SingletonClass {
    match (n + 1).checked_sub(k + d) {
        None => SingletonClass::Impossible,
        Some(0) => SingletonClass::Mds,
        Some(1) => SingletonClass::Amds,
        Some(s) => SingletonClass::Defect(s),
    }
}
