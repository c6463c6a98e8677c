//! q-cyclotomic cosets modulo n.

use std::fmt;

use thiserror::Error;

use crate::numtheory::gcd;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CosetError {
    #[error("gcd({n}, {q}) != 1")]
    NotCoprime { n: u64, q: u64 },
    #[error("{s} is not in Z_{n}")]
    OutOfRange { s: u64, n: u64 },
}

/// The orbit of `s` under `x -> q x mod n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicCoset {
    q: u64,
    n: u64,
    leader: u64,
    /// Iteration order `s, sq, sq^2, ..` starting from the requested `s`.
    orbit: Vec<u64>,
    elements: Vec<u64>,
}

impl CyclotomicCoset {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn leader(&self) -> u64 {
        self.leader
    }

    /// Members in increasing order.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn orbit(&self) -> &[u64] {
        &self.orbit
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, s: u64) -> bool {
        self.elements.binary_search(&s).is_ok()
    }
}

/// `C_s = {s, sq, sq^2, ..} mod n`, printed in orbit order.
impl fmt::Display for CyclotomicCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self.orbit.iter().map(|x| x.to_string()).collect();
        write!(f, "C_{} = {{{}}} (size {})", self.orbit[0], members.join(","), self.size())
    }
}

fn check(q: u64, n: u64) -> Result<(), CosetError> {
    if n == 0 || gcd(n, q) != 1 {
        return Err(CosetError::NotCoprime { n, q });
    }
    Ok(())
}

#[inline]
fn step(x: u64, q: u64, n: u64) -> u64 {
    (x as u128 * q as u128 % n as u128) as u64
}

pub fn coset(q: u64, n: u64, s: u64) -> Result<CyclotomicCoset, CosetError> {
    check(q, n)?;
    if s >= n {
        return Err(CosetError::OutOfRange { s, n });
    }
    let mut orbit = vec![s];
    let mut x = step(s, q, n);
    while x != s {
        orbit.push(x);
        x = step(x, q, n);
    }
    let mut elements = orbit.clone();
    elements.sort_unstable();
    Ok(CyclotomicCoset { q, n, leader: elements[0], orbit, elements })
}

/// Partition of Z_n into cosets, one per leader, in increasing leader order.
pub fn all_leaders(q: u64, n: u64) -> Result<Vec<CyclotomicCoset>, CosetError> {
    check(q, n)?;
    let mut seen = vec![false; n as usize];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s as usize] {
            continue;
        }
        let c = coset(q, n, s)?;
        for &e in c.elements() {
            seen[e as usize] = true;
        }
        out.push(c);
    }
    Ok(out)
}
