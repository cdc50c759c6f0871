use serde::{Deserialize, Serialize};

use crate::coupling::couple;
use crate::ensemble::{sample_hl, EnsembleParams};
use crate::entanglement::{product_resolution_scan, rank1_scan, EntanglementRecord, ScarClass};
use crate::error::Result;
use crate::graph::BinaryGraph;
use crate::scalar::Real;
use crate::spectral::{diagonalize_coupled, eigh, CoupledSpectrum};

use super::{build_scars, census, find_certificates, CensusReport, ScarState, SubgraphCertificate};

/// Everything computed for one ensemble sample.
#[derive(Clone, Debug)]
pub struct SampleAnalysis<T> {
    pub params: EnsembleParams,
    pub h_l: BinaryGraph,
    pub records: Vec<EntanglementRecord<T>>,
    pub certificates: Vec<SubgraphCertificate>,
    pub scars: Vec<ScarState<T>>,
    pub census: CensusReport,
    /// `None` in the product resolution used at `D' = D`.
    pub spectrum: Option<CoupledSpectrum<T>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub none: usize,
    pub rank1: usize,
    pub triangle: usize,
    pub diamond: usize,
}

impl ClassCounts {
    pub fn of<T>(records: &[EntanglementRecord<T>]) -> Self {
        let mut c = Self::default();
        for r in records {
            match r.scar_class {
                ScarClass::None => c.none += 1,
                ScarClass::Rank1 => c.rank1 += 1,
                ScarClass::Triangle => c.triangle += 1,
                ScarClass::Diamond => c.diamond += 1,
            }
        }
        c
    }

    pub fn add(&mut self, other: &Self) {
        self.none += other.none;
        self.rank1 += other.rank1;
        self.triangle += other.triangle;
        self.diamond += other.diamond;
    }
}

/// Samples `H_L`, diagonalizes the coupled Hamiltonian by sector, scans the
/// entanglement of every eigenstate, builds the certified scars and runs the
/// census over the scan.
pub fn analyze_sample<T: Real>(params: &EnsembleParams, threshold: T) -> Result<SampleAnalysis<T>> {
    let h_l = sample_hl(params)?;
    let certificates = find_certificates(&h_l, params.d_prime);
    if params.d_prime == params.d {
        let records = product_resolution_scan(&h_l)?;
        return Ok(SampleAnalysis {
            params: *params,
            h_l,
            records,
            certificates,
            scars: Vec::new(),
            census: CensusReport::default(),
            spectrum: None,
        });
    }
    let h = couple(&h_l, params.d_prime)?;
    let spectrum = diagonalize_coupled::<T>(&h)?;
    let mut records = rank1_scan(&spectrum, h.basis(), threshold)?;
    let partners = eigh(&h_l.to_dense::<T>())?;
    let scars = build_scars(&h, &partners, &certificates)?;
    let mut report = census(&spectrum, h.basis(), &partners, &mut records, &certificates)?;
    report.n_scars = scars.len();
    Ok(SampleAnalysis { params: *params, h_l, records, certificates, scars, census: report, spectrum: Some(spectrum) })
}
