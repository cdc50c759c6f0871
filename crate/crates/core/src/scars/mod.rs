//! Sparse-eigenvector motifs, the exact scars they generate, their
//! occurrence rates, and the √2 states of the PXP chain.

mod build;
mod certificates;
mod pipeline;
mod sqrt2;

pub use build::{build_scars, census, cutoff_eigenvectors, schmidt_rank, CensusCounterexample, CensusReport, ScarState, SCAR_TOL, SPAN_TOL};
pub use certificates::{
    canonical_diamond, certificates_jsonl, find_certificates, find_diamonds, find_triangles, CertificateKind,
    SubgraphCertificate,
};
pub use pipeline::{analyze_sample, ClassCounts, SampleAnalysis};
pub use sqrt2::{sqrt2_analysis, Sqrt2Report, Sqrt2State};

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::{sample_hl, sample_without_backbone, EnsembleParams};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgraphRow {
    pub p_edge: f64,
    pub n_samples: usize,
    pub frac_triangle: f64,
    pub frac_diamond: f64,
}

/// Fraction of sampled `H_L` containing at least one triangle and at least
/// one diamond. Sample `k` uses seed `seed + k`.
pub fn subgraph_probability(
    d: usize,
    p_grid: &[f64],
    n_samples: usize,
    seed: u64,
    with_backbone: bool,
) -> Result<Vec<SubgraphRow>> {
    let mut rows = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let base = EnsembleParams::new(d, d, p, seed)?;
        let hits: Vec<Result<(bool, bool)>> = (0..n_samples as u64)
            .into_par_iter()
            .map(|k| {
                let s = seed.wrapping_add(k);
                let g = if with_backbone {
                    sample_hl(&base.with_seed(s))?
                } else {
                    sample_without_backbone(d, p, s)?
                };
                Ok((!find_triangles(&g, d).is_empty(), !find_diamonds(&g, d).is_empty()))
            })
            .collect();
        let hits = hits.into_iter().collect::<Result<Vec<_>>>()?;
        let n = n_samples.max(1) as f64;
        rows.push(SubgraphRow {
            p_edge: p,
            n_samples,
            frac_triangle: hits.iter().filter(|h| h.0).count() as f64 / n,
            frac_diamond: hits.iter().filter(|h| h.1).count() as f64 / n,
        });
    }
    Ok(rows)
}

pub fn subgraph_csv(rows: &[SubgraphRow]) -> String {
    let mut out = String::from("p_edge,n_samples,frac_triangle,frac_diamond\n");
    for r in rows {
        let _ = writeln!(out, "{:.16e},{},{:.16e},{:.16e}", r.p_edge, r.n_samples, r.frac_triangle, r.frac_diamond);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::couple;
    use crate::entanglement::{rank1_scan, DEFAULT_RANK1_THRESHOLD};
    use crate::graph::BinaryGraph;
    use crate::spectral::{diagonalize_coupled, eigh};

    #[test]
    fn bare_backbone_has_no_motifs() {
        let rows = subgraph_probability(20, &[0.0], 20, 3, true).unwrap();
        assert_eq!(rows[0].frac_triangle, 0.0);
        assert_eq!(rows[0].frac_diamond, 0.0);
        assert!(subgraph_csv(&rows).starts_with("p_edge,n_samples,frac_triangle,frac_diamond\n"));
    }

    fn graph_with_motifs() -> BinaryGraph {
        // a 4-cycle (triangle certificate 0~2) grafted onto a path
        let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 7), (1, 4)];
        BinaryGraph::from_edges(8, edges).unwrap()
    }

    #[test]
    fn built_scars_are_exact() {
        let g = graph_with_motifs();
        let certs = find_certificates(&g, 6);
        assert!(certs.iter().any(|c| c.satisfies_cutoff));
        let h = couple(&g, 6).unwrap();
        let partners = eigh(&g.to_dense::<f64>()).unwrap();
        let scars = build_scars(&h, &partners, &certs).unwrap();
        assert!(!scars.is_empty());
        assert_eq!(scars.len() % 2, 0);
        for s in &scars {
            assert!(s.residual <= SCAR_TOL);
            assert!((s.entropy - 2f64.ln()).abs() < 1e-9);
        }
        // degenerate ± pairs
        for s in scars.iter().filter(|s| s.inversion == 1) {
            assert!(scars.iter().any(|t| t.inversion == -1 && (t.energy - s.energy).abs() < 1e-12));
        }
        let cs = diagonalize_coupled::<f64>(&h).unwrap();
        let mut recs = rank1_scan(&cs, h.basis(), DEFAULT_RANK1_THRESHOLD).unwrap();
        let report = census(&cs, h.basis(), &partners, &mut recs, &certs).unwrap();
        assert!(report.n_classified > 0);
        assert_eq!(report.n_unexplained(), 0);
    }

    #[test]
    fn degenerate_partners_are_orthogonalized() {
        let g = graph_with_motifs();
        let certs = find_triangles(&g, 8);
        let h = couple(&g, 8).unwrap();
        let partners = eigh(&g.to_dense::<f64>()).unwrap();
        let scars = build_scars(&h, &partners, &certs).unwrap();
        // the eigenspace holding c loses exactly the direction of c
        assert_eq!(scars.len(), certs.len() * 2 * (8 - 1));
        assert!(scars.iter().any(|s| partners.energy(s.partner).abs() < 1e-8));
    }
}
