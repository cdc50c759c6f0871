//! Random bipartite graphs on a Hamiltonian-path backbone.
//!
//! Vertices `1..=D` (0-based internally) always carry the path
//! `1-2-...-D`. Every other pair `(i, j)`, `i < j`, with `j - i` odd is
//! visited once in lexicographic order and receives an edge when a single
//! uniform draw from ChaCha8 falls below `p`. Odd distance keeps the index
//! parity a valid two-colouring.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fib_basis::SignDiagonal;
use crate::graph::BinaryGraph;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    #[serde(rename = "D")]
    pub d: usize,
    #[serde(rename = "Dprime")]
    pub d_prime: usize,
    pub p: f64,
    pub seed: u64,
}

impl EnsembleParams {
    pub fn new(d: usize, d_prime: usize, p: f64, seed: u64) -> Result<Self> {
        let params = Self { d, d_prime, p, seed };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidParameter(format!("D = {} must be at least 2", self.d)));
        }
        if self.d_prime < 1 || self.d_prime > self.d {
            return Err(Error::InvalidParameter(format!(
                "Dprime = {} must lie in 1..={}",
                self.d_prime, self.d
            )));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParameter(format!("p = {} must lie in [0, 1]", self.p)));
        }
        Ok(())
    }

    /// Same ensemble, different member.
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("params serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let params: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        params.validate()?;
        Ok(params)
    }
}

/// Path graph `1-2-...-D`.
pub fn backbone(d: usize) -> Result<BinaryGraph> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("backbone needs D >= 2, got {d}")));
    }
    BinaryGraph::from_edges(d, (1..d).map(|k| (k - 1, k)))
}

/// Number of non-backbone candidate pairs (`j - i` odd and at least 3).
pub fn candidate_count(d: usize) -> usize {
    (3..d).step_by(2).map(|gap| d - gap).sum()
}

fn sample_with(d: usize, p: f64, seed: u64, with_backbone: bool) -> Result<BinaryGraph> {
    let mut g = if with_backbone { backbone(d)? } else { BinaryGraph::new(d) };
    let min_gap = if with_backbone { 3 } else { 1 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..d {
        for j in (i + min_gap..d).step_by(2) {
            let u: f64 = rng.gen();
            if u < p {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

/// One member of the ensemble; `D'` plays no role for the single graph.
pub fn sample_hl(params: &EnsembleParams) -> Result<BinaryGraph> {
    params.validate()?;
    sample_with(params.d, params.p, params.seed, true)
}

/// Same draw policy without the backbone: every odd-distance pair,
/// including nearest neighbours, is a candidate. The result may be
/// disconnected.
pub fn sample_without_backbone(d: usize, p: f64, seed: u64) -> Result<BinaryGraph> {
    EnsembleParams::new(d.max(2), 1, p, seed)?;
    sample_with(d, p, seed, false)
}

/// Breadth-first two-colouring of a connected graph; `Ok(None)` for an odd
/// cycle.
pub fn bipartite_check(g: &BinaryGraph) -> Result<Option<Vec<u8>>> {
    g.two_coloring()
}

/// Sign operator `(-1)^i` from index parity.
pub fn parity_sign(d: usize) -> SignDiagonal {
    SignDiagonal::from_coloring(&(0..d).map(|i| (i % 2) as u8).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backbone_shapes() {
        assert_eq!(backbone(2).unwrap().edge_count(), 1);
        assert_eq!(backbone(5).unwrap().edge_count(), 4);
        assert!(backbone(1).is_err());
        let c = bipartite_check(&backbone(6).unwrap()).unwrap().unwrap();
        assert_eq!(c, vec![0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn probability_limits() {
        let p0 = sample_hl(&EnsembleParams::new(20, 14, 0.0, 3).unwrap()).unwrap();
        assert_eq!(p0, backbone(20).unwrap());
        let p1 = sample_hl(&EnsembleParams::new(20, 14, 1.0, 3).unwrap()).unwrap();
        // brute-force count of odd-distance pairs
        let mut odd = 0;
        for i in 0..20 {
            for j in i + 1..20 {
                if (j - i) % 2 == 1 {
                    odd += 1;
                }
            }
        }
        assert_eq!(p1.edge_count(), odd);
        assert_eq!(p1.edge_count(), 19 + candidate_count(20));
    }

    #[test]
    fn samples_are_parity_bipartite() {
        for seed in 0..100 {
            let g = sample_hl(&EnsembleParams::new(20, 14, 0.4, seed).unwrap()).unwrap();
            assert!(g.edges().all(|(i, j)| (j - i) % 2 == 1));
            let c = bipartite_check(&g).unwrap().unwrap();
            assert!(c.iter().enumerate().all(|(i, &ci)| ci as usize == i % 2));
            assert!(parity_sign(20).anticommutes_with(&g));
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let params = EnsembleParams::new(40, 34, 0.4, 12345).unwrap();
        let a = sample_hl(&params).unwrap().to_edge_list();
        let b = sample_hl(&params).unwrap().to_edge_list();
        assert_eq!(a, b);
        let c = sample_hl(&params.with_seed(12346)).unwrap().to_edge_list();
        assert_ne!(a, c);
    }

    #[test]
    fn odd_cycle_fails() {
        let tri = BinaryGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(bipartite_check(&tri).unwrap(), None);
    }

    #[test]
    fn params_json() {
        let params = EnsembleParams::new(40, 34, 0.4, 7).unwrap();
        let text = params.to_json();
        assert_eq!(text, r#"{"D":40,"Dprime":34,"p":0.4,"seed":7}"#);
        assert_eq!(EnsembleParams::from_json(&text).unwrap(), params);
        assert!(EnsembleParams::from_json(r#"{"D":4,"Dprime":5,"p":0.4,"seed":7}"#).is_err());
        assert!(EnsembleParams::new(4, 2, 1.5, 0).is_err());
    }

    #[test]
    fn no_backbone_variant() {
        let g = sample_without_backbone(20, 0.0, 1).unwrap();
        assert_eq!(g.edge_count(), 0);
        let g = sample_without_backbone(20, 1.0, 1).unwrap();
        assert_eq!(g.edge_count(), 19 + candidate_count(20));
    }
}
