//! Fibonacci-cube combinatorics for the open-boundary PXP chain.
//!
//! Basis strings of length `L` with no two adjacent excitations are indexed by
//! their Zeckendorf expansion: site `k` (1-based, leftmost first) carries the
//! digit of `F_{k+1}`, so that `0 <= index < F_{L+2}`. Fibonacci numbers use
//! `F_1 = F_2 = 1`.

mod construct;

pub use construct::{
    gray_order, k2_step, pxp_direct, pxp_gray, pxp_k2_product, pxp_recursive, MAX_SITES,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::BinaryGraph;
use crate::scalar::Real;

/// `F_n` with `F_0 = 0`, `F_1 = F_2 = 1`.
pub fn fibonacci(n: usize) -> Result<u64> {
    if n == 0 {
        return Ok(0);
    }
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 1..n {
        let next = a.checked_add(b).ok_or(Error::FibonacciOverflow(n))?;
        a = b;
        b = next;
    }
    Ok(b)
}

pub(crate) fn fib(n: usize) -> usize {
    fibonacci(n).expect("Fibonacci index within range") as usize
}

/// Occupation string of the PXP chain (`false` = empty, `true` = excited).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PxpConfig {
    sites: Vec<bool>,
}

impl PxpConfig {
    pub fn new(sites: Vec<bool>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidSize("a configuration needs at least one site".into()));
        }
        if let Some(k) = sites.windows(2).position(|w| w[0] && w[1]) {
            return Err(Error::ConstraintViolation(k + 1, k + 2));
        }
        Ok(Self { sites })
    }

    pub fn empty(len: usize) -> Self {
        Self { sites: vec![false; len] }
    }

    /// Parses `0`/`1` or `∘`/`•` strings.
    pub fn parse(s: &str) -> Result<Self> {
        let sites = s
            .chars()
            .map(|c| match c {
                '0' | '∘' | 'o' => Ok(false),
                '1' | '•' | 'x' => Ok(true),
                other => Err(Error::Parse(format!("unexpected site symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sites)
    }

    pub fn sites(&self) -> &[bool] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Number of excited sites.
    pub fn excitations(&self) -> usize {
        self.sites.iter().filter(|&&s| s).count()
    }

    /// Flips `site` if the result respects the constraint.
    pub fn flipped(&self, site: usize) -> Option<Self> {
        let left = site > 0 && self.sites[site - 1];
        let right = site + 1 < self.sites.len() && self.sites[site + 1];
        if left || right {
            return None;
        }
        let mut sites = self.sites.clone();
        sites[site] = !sites[site];
        Some(Self { sites })
    }

    pub fn reversed(&self) -> Self {
        Self { sites: self.sites.iter().rev().copied().collect() }
    }

    pub fn hamming(&self, other: &Self) -> usize {
        self.sites.iter().zip(&other.sites).filter(|(a, b)| a != b).count()
    }
}

impl fmt::Display for PxpConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.sites {
            f.write_str(if s { "•" } else { "∘" })?;
        }
        Ok(())
    }
}

/// Zeckendorf string of `n` with `len` sites.
pub fn zeckendorf_encode(n: u64, len: usize) -> Result<PxpConfig> {
    if len == 0 {
        return Err(Error::InvalidSize("length must be at least 1".into()));
    }
    let bound = fibonacci(len + 2)?;
    if n >= bound {
        return Err(Error::ZeckendorfRange { n, len, bound });
    }
    let mut sites = vec![false; len];
    let mut rest = n;
    for k in (2..=len + 1).rev() {
        let f = fibonacci(k)?;
        if f <= rest {
            sites[k - 2] = true;
            rest -= f;
        }
    }
    debug_assert_eq!(rest, 0);
    Ok(PxpConfig { sites })
}

/// Inverse of [`zeckendorf_encode`].
pub fn zeckendorf_decode(config: &PxpConfig) -> Result<u64> {
    let cfg = PxpConfig::new(config.sites.clone())?;
    let mut n = 0u64;
    for (k, &s) in cfg.sites.iter().enumerate() {
        if s {
            n += fibonacci(k + 2)?;
        }
    }
    Ok(n)
}

/// Decoding without re-validation, for strings already known to be valid.
pub(crate) fn zeckendorf_index(sites: &[bool]) -> usize {
    sites.iter().enumerate().filter(|(_, &s)| s).map(|(k, _)| fib(k + 2)).sum()
}

/// All valid configurations of `len` sites in Zeckendorf order.
pub fn zeckendorf_basis(len: usize) -> Result<Vec<PxpConfig>> {
    let dim = fibonacci(len + 2)?;
    (0..dim).map(|n| zeckendorf_encode(n, len)).collect()
}

/// Diagonal ±1 operator, stored by its signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignDiagonal {
    signs: Vec<i8>,
}

impl SignDiagonal {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter("sign entries must be +1 or -1".into()));
        }
        Ok(Self { signs })
    }

    /// Signs `(-1)^{colour}` from a two-colouring.
    pub fn from_coloring(coloring: &[u8]) -> Self {
        Self { signs: coloring.iter().map(|&c| if c % 2 == 0 { 1 } else { -1 }).collect() }
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// `Q H Q = -H`, checked exactly: every edge joins opposite signs.
    pub fn anticommutes_with(&self, g: &BinaryGraph) -> bool {
        g.n_vertices() == self.signs.len() && g.edges().all(|(i, j)| self.signs[i] != self.signs[j])
    }

    pub fn apply<T: Real>(&self, v: &[T]) -> Vec<T> {
        v.iter().zip(&self.signs).map(|(&x, &s)| if s > 0 { x } else { -x }).collect()
    }
}

/// Sublattice sign of the `L`-site chain in Zeckendorf order, built by the
/// block recursion `Q_{L+1} = diag(Q_L, -Q_{L-1})`.
pub fn q_sign(len: usize) -> Result<SignDiagonal> {
    if len == 0 {
        return Err(Error::InvalidSize("length must be at least 1".into()));
    }
    let mut prev: Vec<i8> = vec![1, -1];
    if len == 1 {
        return SignDiagonal::new(prev);
    }
    let mut cur: Vec<i8> = vec![1, -1, -1];
    for _ in 2..len {
        let mut next = cur.clone();
        next.extend(prev.iter().map(|s| -s));
        prev = std::mem::replace(&mut cur, next);
    }
    SignDiagonal::new(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_values() {
        assert_eq!(fibonacci(0).unwrap(), 0);
        assert_eq!(fibonacci(1).unwrap(), 1);
        assert_eq!(fibonacci(2).unwrap(), 1);
        assert_eq!(fibonacci(8).unwrap(), 21);
        assert_eq!(fibonacci(10).unwrap(), 55);
        assert_eq!(fibonacci(93).unwrap(), 12_200_160_415_121_876_738);
        assert_eq!(fibonacci(94), Err(Error::FibonacciOverflow(94)));
    }

    #[test]
    fn encode_examples() {
        assert_eq!(zeckendorf_encode(0, 3).unwrap().to_string(), "∘∘∘");
        assert_eq!(zeckendorf_encode(7, 4).unwrap().to_string(), "∘•∘•");
        assert_eq!(zeckendorf_encode(1, 3).unwrap().to_string(), "•∘∘");
        assert!(zeckendorf_encode(20, 6).is_ok());
        assert!(matches!(zeckendorf_encode(21, 6), Err(Error::ZeckendorfRange { .. })));
        assert!(zeckendorf_encode(0, 0).is_err());
    }

    #[test]
    fn encode_is_unique_expansion() {
        // brute force: every valid string of length 4 decodes to a distinct
        // value below F_6, and greedy encoding hits each one
        let mut seen = std::collections::BTreeSet::new();
        for mask in 0u32..16 {
            let sites: Vec<bool> = (0..4).map(|k| mask >> k & 1 == 1).collect();
            if let Ok(cfg) = PxpConfig::new(sites) {
                let value: u64 = cfg
                    .sites()
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| s)
                    .map(|(k, _)| [1u64, 2, 3, 5][k])
                    .sum();
                assert!(seen.insert(value));
                assert_eq!(zeckendorf_encode(value, 4).unwrap(), cfg);
            }
        }
        assert_eq!(seen.len(), 8);
        assert_eq!(*seen.iter().max().unwrap(), 7);
    }

    #[test]
    fn decode_examples_and_roundtrip() {
        assert_eq!(zeckendorf_decode(&PxpConfig::parse("∘∘∘").unwrap()).unwrap(), 0);
        assert_eq!(zeckendorf_decode(&PxpConfig::parse("•∘∘").unwrap()).unwrap(), 1);
        let top = fibonacci(8).unwrap() - 1;
        assert_eq!(zeckendorf_decode(&zeckendorf_encode(top, 6).unwrap()).unwrap(), top);
        for n in 0..fibonacci(8).unwrap() {
            let cfg = zeckendorf_encode(n, 6).unwrap();
            assert_eq!(zeckendorf_decode(&cfg).unwrap(), n);
        }
    }

    #[test]
    fn constraint_is_enforced() {
        assert_eq!(PxpConfig::parse("0110"), Err(Error::ConstraintViolation(2, 3)));
        assert!(PxpConfig::parse("").is_err());
        assert!(PxpConfig::parse("01a").is_err());
    }

    #[test]
    fn q_sign_seeds_and_parity() {
        assert_eq!(q_sign(1).unwrap().signs(), &[1, -1]);
        assert_eq!(q_sign(2).unwrap().signs(), &[1, -1, -1]);
        for len in 1..=12 {
            let q = q_sign(len).unwrap();
            let basis = zeckendorf_basis(len).unwrap();
            assert_eq!(q.len(), basis.len());
            for (s, cfg) in q.signs().iter().zip(&basis) {
                let want = if cfg.excitations() % 2 == 0 { 1 } else { -1 };
                assert_eq!(*s, want);
            }
        }
    }

    #[test]
    fn sign_diagonal_rejects_zero() {
        assert!(SignDiagonal::new(vec![1, 0]).is_err());
    }
}
