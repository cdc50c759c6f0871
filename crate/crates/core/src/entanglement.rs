//! Left/right entanglement of coupled-basis states.

use std::fmt;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupling::{couple, CoupledBasis, CoupledHamiltonian, Sector};
use crate::ensemble::{sample_hl, EnsembleParams};
use crate::error::{Error, Result};
use crate::graph::BinaryGraph;
use crate::linalg::{symmetric_eigen, DenseMatrix};
use crate::spectral::{diagonalize_coupled, eigvalsh, group_levels, CoupledSpectrum};
use crate::scalar::Real;

pub const DEFAULT_RANK1_THRESHOLD: f64 = 0.8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScarClass {
    None,
    Rank1,
    Triangle,
    Diamond,
}

impl fmt::Display for ScarClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScarClass::None => "none",
            ScarClass::Rank1 => "rank1",
            ScarClass::Triangle => "triangle",
            ScarClass::Diamond => "diamond",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglementRecord<T> {
    pub energy: T,
    pub entropy: T,
    /// Descending squared Schmidt values.
    pub schmidt_sq: Vec<T>,
    /// `+1`/`-1`, or `0` when the state has no definite inversion.
    pub inversion: i8,
    /// Multiplicity of the energy in the full spectrum.
    pub degeneracy_size: usize,
    pub lambda1_sq: T,
    /// `-λ₁² ln λ₁²`, the entropy of the leading Schmidt term alone.
    pub rank1_entropy: T,
    pub scar_class: ScarClass,
    /// Position within its sector's spectrum, if it came from one.
    pub sector_index: Option<usize>,
}

/// `ψ_ij` with zeros on the forbidden block.
pub fn coefficient_matrix<T: Real>(v: &[T], basis: &CoupledBasis) -> DenseMatrix<T> {
    let mut psi = DenseMatrix::zeros(basis.d(), basis.d());
    for (k, &(i, j)) in basis.pairs().iter().enumerate() {
        psi[(i, j)] = v[k];
    }
    psi
}

/// Squared Schmidt values (eigenvalues of `ψψᵀ`), descending, clamped at 0.
pub fn schmidt_weights<T: Real>(psi: &DenseMatrix<T>) -> Result<Vec<T>> {
    let rho = psi.matmul(&psi.transpose());
    let mut w = eigvalsh(&symmetrize(rho))?;
    w.reverse();
    w.iter_mut().for_each(|x| *x = x.max(T::zero()));
    Ok(w)
}

/// Squared Schmidt values with the matching left Schmidt vectors (rows).
pub fn schmidt_decomposition<T: Real>(psi: &DenseMatrix<T>) -> Result<(Vec<T>, DenseMatrix<T>)> {
    let rho = symmetrize(psi.matmul(&psi.transpose()));
    let (mut w, vecs) = symmetric_eigen(&rho)?;
    let n = w.len();
    w.reverse();
    w.iter_mut().for_each(|x| *x = x.max(T::zero()));
    let left = DenseMatrix::from_fn(n, n, |r, c| vecs[(n - 1 - r, c)]);
    Ok((w, left))
}

fn symmetrize<T: Real>(m: DenseMatrix<T>) -> DenseMatrix<T> {
    let n = m.rows();
    DenseMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)]) * T::half())
}

/// `-Σ w ln w` with `0 ln 0 = 0`.
pub fn entropy_of_weights<T: Real>(w: &[T]) -> T {
    w.iter().filter(|&&x| x > T::zero()).map(|&x| -x * x.ln()).sum()
}

/// `+1` for `ψ = ψᵀ`, `-1` for `ψ = -ψᵀ`, else `0`.
pub fn inversion_parity<T: Real>(psi: &DenseMatrix<T>) -> i8 {
    let tol = T::of(1e-8).max(T::epsilon() * T::of(1e4));
    let n = psi.rows();
    let (mut sym, mut anti) = (T::zero(), T::zero());
    for i in 0..n {
        for j in 0..n {
            sym = sym.max((psi[(i, j)] - psi[(j, i)]).abs());
            anti = anti.max((psi[(i, j)] + psi[(j, i)]).abs());
        }
    }
    if sym <= tol {
        1
    } else if anti <= tol {
        -1
    } else {
        0
    }
}

fn record_from<T: Real>(psi: &DenseMatrix<T>, energy: T) -> Result<EntanglementRecord<T>> {
    let schmidt_sq = schmidt_weights(psi)?;
    let lambda1_sq = schmidt_sq.first().copied().unwrap_or_else(T::zero);
    Ok(EntanglementRecord {
        energy,
        entropy: entropy_of_weights(&schmidt_sq),
        inversion: inversion_parity(psi),
        degeneracy_size: 1,
        lambda1_sq,
        rank1_entropy: entropy_of_weights(&[lambda1_sq]),
        scar_class: ScarClass::None,
        sector_index: None,
        schmidt_sq,
    })
}

/// Entanglement record of a normalized coupled-basis vector; the energy is
/// left at zero.
pub fn entropy_of<T: Real>(v: &[T], basis: &CoupledBasis) -> Result<EntanglementRecord<T>> {
    if v.len() != basis.len() {
        return Err(Error::InvalidSize(format!("vector of length {} for basis of {}", v.len(), basis.len())));
    }
    record_from(&coefficient_matrix(v, basis), T::zero())
}

/// One record per eigenstate, plus sector first, each ascending. States in a
/// multiplet of their own sector are not classified; the others are flagged
/// `rank1` when `λ₁² >= threshold`.
pub fn rank1_scan<T: Real>(
    spectrum: &CoupledSpectrum<T>,
    basis: &CoupledBasis,
    threshold: T,
) -> Result<Vec<EntanglementRecord<T>>> {
    let mut out = Vec::with_capacity(spectrum.len());
    for sector in Sector::both() {
        let (s, _) = spectrum.sector(sector);
        let records: Vec<Result<EntanglementRecord<T>>> = (0..s.len())
            .into_par_iter()
            .map(|k| {
                let v = spectrum.full_vector(sector, k);
                let mut rec = record_from(&coefficient_matrix(&v, basis), s.energy(k))?;
                rec.inversion = sector.sign();
                rec.sector_index = Some(k);
                rec.degeneracy_size = spectrum.multiplicity(s.energy(k));
                if s.degeneracy_size(k) == 1 && rec.lambda1_sq >= threshold {
                    rec.scar_class = ScarClass::Rank1;
                }
                Ok(rec)
            })
            .collect();
        for r in records {
            out.push(r?);
        }
    }
    Ok(out)
}

/// Without a cutoff every `φ_a ⊗ φ_b` is an eigenstate; records in that
/// product resolution (ascending energy, `a` then `b` on ties).
pub fn product_resolution_scan<T: Real>(h_l: &BinaryGraph) -> Result<Vec<EntanglementRecord<T>>> {
    let (vals, _) = symmetric_eigen(&h_l.to_dense::<T>())?;
    let mut items: Vec<(T, usize, usize)> = Vec::new();
    for (a, &ea) in vals.iter().enumerate() {
        for (b, &eb) in vals.iter().enumerate() {
            items.push((ea + eb, a, b));
        }
    }
    items.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite").then((x.1, x.2).cmp(&(y.1, y.2))));
    let energies: Vec<T> = items.iter().map(|x| x.0).collect();
    let norm = energies.iter().fold(T::zero(), |m, e| m.max(e.abs()));
    let tol = T::of(1e-8) * norm.max(T::one());
    let mut mult = vec![0; energies.len()];
    for g in group_levels(&energies, tol) {
        for k in g.clone() {
            mult[k] = g.len();
        }
    }
    Ok(items
        .iter()
        .zip(mult)
        .map(|(&(e, a, b), m)| EntanglementRecord {
            energy: e,
            entropy: T::zero(),
            schmidt_sq: vec![T::one()],
            inversion: if a == b { 1 } else { 0 },
            degeneracy_size: m,
            lambda1_sq: T::one(),
            rank1_entropy: T::zero(),
            scar_class: ScarClass::Rank1,
            sector_index: None,
        })
        .collect())
}

pub const SCAN_CSV_HEADER: &str = "sample_id,energy,entropy,inversion,degeneracy_size,lambda1_sq,scar_class";

/// Scan rows without the header.
pub fn scan_csv_rows<T: Real>(sample_id: usize, records: &[EntanglementRecord<T>]) -> String {
    let mut out = String::new();
    for r in records {
        let _ = writeln!(
            out,
            "{},{:.16e},{:.16e},{},{},{:.16e},{}",
            sample_id,
            r.energy.as_f64(),
            r.entropy.as_f64(),
            r.inversion,
            r.degeneracy_size,
            r.lambda1_sq.as_f64(),
            r.scar_class
        );
    }
    out
}

/// Largest `|⟨ψ|φ_a ⊗ φ_b⟩|²` over eigenstates `ψ` of the constrained
/// Hamiltonian and products of `H_L` eigenvectors, which are the eigenstates
/// of the unconstrained sum. Only the constrained sectors are diagonalized,
/// so vectors living purely on forbidden states never enter.
pub fn max_overlap<T: Real>(h: &CoupledHamiltonian) -> Result<T> {
    let (_, phi) = symmetric_eigen(&h.h_l().to_dense::<T>())?;
    let spectrum = diagonalize_coupled::<T>(h)?;
    max_overlap_with(&spectrum, h.basis(), &phi)
}

/// [`max_overlap`] for an existing spectrum; `phi` holds `H_L` eigenvectors
/// as rows.
pub fn max_overlap_with<T: Real>(
    spectrum: &CoupledSpectrum<T>,
    basis: &CoupledBasis,
    phi: &DenseMatrix<T>,
) -> Result<T> {
    let phi_t = phi.transpose();
    let mut best = T::zero();
    for sector in Sector::both() {
        let (s, _) = spectrum.sector(sector);
        for k in 0..s.len() {
            let psi = coefficient_matrix(&spectrum.full_vector(sector, k), basis);
            let m = phi.matmul(&psi).matmul(&phi_t);
            best = best.max(m.max_abs() * m.max_abs());
        }
    }
    Ok(best)
}

/// `max_a |⟨u₁|φ_a⟩|` for the leading left Schmidt vector `u₁` of `v`.
pub fn leading_factor_overlap<T: Real>(v: &[T], basis: &CoupledBasis, phi: &DenseMatrix<T>) -> Result<T> {
    let (_, left) = schmidt_decomposition(&coefficient_matrix(v, basis))?;
    let u1 = left.row(0);
    Ok((0..phi.rows()).map(|a| crate::scalar::dot(phi.row(a), u1).abs()).fold(T::zero(), T::max))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapPoint {
    #[serde(rename = "D")]
    pub d: usize,
    #[serde(rename = "Dprime")]
    pub d_prime: usize,
    pub p: f64,
    pub samples: usize,
    pub mean: f64,
    pub stderr: f64,
}

/// Mean and standard error of [`max_overlap`] on a `(D', p)` grid. Sample
/// `k` at every grid point uses seed `seed + k`.
pub fn overlap_sweep(d: usize, d_primes: &[usize], ps: &[f64], samples: usize, seed: u64) -> Result<Vec<OverlapPoint>> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let mut rows = Vec::with_capacity(d_primes.len() * ps.len());
    for &p in ps {
        for &dp in d_primes {
            let base = EnsembleParams::new(d, dp, p, seed)?;
            let values: Vec<Result<f64>> = (0..samples as u64)
                .into_par_iter()
                .map(|k| {
                    let g = sample_hl(&base.with_seed(seed.wrapping_add(k)))?;
                    max_overlap::<f64>(&couple(&g, dp)?)
                })
                .collect();
            let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
            let (mean, stderr) = mean_stderr(&values);
            rows.push(OverlapPoint { d, d_prime: dp, p, samples, mean, stderr });
        }
    }
    Ok(rows)
}

pub fn mean_stderr(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    if x.len() < 2 {
        return (mean, 0.0);
    }
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn overlap_csv(rows: &[OverlapPoint]) -> String {
    let mut out = String::from("D,Dprime,p,samples,mean,stderr\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{:.16e},{},{:.16e},{:.16e}", r.d, r.d_prime, r.p, r.samples, r.mean, r.stderr);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::EnsembleParams;

    fn params(d: usize, dp: usize, p: f64, seed: u64) -> EnsembleParams {
        EnsembleParams::new(d, dp, p, seed).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy_of_weights(&[1.0f64]), 0.0);
        assert!((entropy_of_weights(&[0.5f64, 0.5]) - 2f64.ln()).abs() < 1e-15);
        let s = entropy_of_weights(&[4.0 / 13.0, 9.0f64 / 13.0]);
        assert!((s - 0.6172).abs() < 5e-5);
        assert_eq!(entropy_of_weights(&[1.0f64, 0.0]), 0.0);
    }

    #[test]
    fn product_state_has_zero_entropy() {
        let basis = CoupledBasis::new(4, 4).unwrap();
        let a = [0.5f64, 0.5, 0.5, 0.5];
        let b = [0.6f64, 0.0, 0.8, 0.0];
        let v: Vec<f64> = basis.pairs().iter().map(|&(i, j)| a[i] * b[j]).collect();
        let rec = entropy_of(&v, &basis).unwrap();
        assert!(rec.entropy.abs() < 1e-12);
        assert!((rec.lambda1_sq - 1.0).abs() < 1e-12);
        assert_eq!(rec.inversion, 0);
    }

    #[test]
    fn bell_like_state() {
        let basis = CoupledBasis::new(3, 2).unwrap();
        let mut v = vec![0.0f64; basis.len()];
        let r = 0.5f64.sqrt();
        v[basis.index_of(0, 1).unwrap()] = r;
        v[basis.index_of(1, 0).unwrap()] = -r;
        let rec = entropy_of(&v, &basis).unwrap();
        assert!((rec.entropy - 2f64.ln()).abs() < 1e-12);
        assert_eq!(rec.inversion, -1);
        assert!((rec.schmidt_sq[0] - 0.5).abs() < 1e-12 && (rec.schmidt_sq[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn scan_invariants() {
        let g = sample_hl(&params(12, 8, 0.4, 3)).unwrap();
        let h = couple(&g, 8).unwrap();
        let cs = diagonalize_coupled::<f64>(&h).unwrap();
        let recs = rank1_scan(&cs, h.basis(), DEFAULT_RANK1_THRESHOLD).unwrap();
        assert_eq!(recs.len(), h.dim());
        for sector in Sector::both() {
            let (s, _) = cs.sector(sector);
            for k in 0..s.len() {
                let psi = coefficient_matrix(&cs.full_vector(sector, k), h.basis());
                assert_eq!(inversion_parity(&psi), sector.sign());
                for i in 8..12 {
                    for j in 8..12 {
                        assert_eq!(psi[(i, j)], 0.0);
                    }
                }
            }
        }
        for r in &recs {
            let total: f64 = r.schmidt_sq.iter().sum();
            assert!((total - 1.0).abs() < 1e-10);
            assert!(r.entropy >= 0.0);
        }
        // antisymmetric states have paired Schmidt values
        for r in recs.iter().filter(|r| r.inversion == -1) {
            let w = &r.schmidt_sq;
            for pair in w.chunks(2) {
                if pair.len() == 2 {
                    assert!((pair[0] - pair[1]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn threshold_one_only_products() {
        let g = sample_hl(&params(10, 7, 0.5, 8)).unwrap();
        let h = couple(&g, 7).unwrap();
        let cs = diagonalize_coupled::<f64>(&h).unwrap();
        let recs = rank1_scan(&cs, h.basis(), 1.0 + 1e-12).unwrap();
        assert!(recs.iter().all(|r| r.scar_class == ScarClass::None));
    }

    #[test]
    fn partner_entropies_agree() {
        let g = sample_hl(&params(12, 9, 0.4, 21)).unwrap();
        let h = couple(&g, 9).unwrap();
        let cs = diagonalize_coupled::<f64>(&h).unwrap();
        let recs = rank1_scan(&cs, h.basis(), 0.8).unwrap();
        for r in recs.iter().filter(|r| r.degeneracy_size == 1) {
            let partner = recs
                .iter()
                .filter(|q| q.degeneracy_size == 1)
                .find(|q| (q.energy + r.energy).abs() < 1e-8)
                .expect("±E partner");
            assert!((partner.entropy - r.entropy).abs() < 1e-8);
        }
    }

    #[test]
    fn no_cutoff_overlap_is_one() {
        let g = sample_hl(&params(8, 8, 0.4, 2)).unwrap();
        let v = max_overlap::<f64>(&couple(&g, 8).unwrap()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let v = max_overlap::<f64>(&couple(&g, 5).unwrap()).unwrap();
        assert!(v < 1.0 && v > 0.0);
    }

    #[test]
    fn product_resolution_counts() {
        let g = sample_hl(&params(6, 6, 0.5, 2)).unwrap();
        let recs = product_resolution_scan::<f64>(&g).unwrap();
        assert_eq!(recs.len(), 36);
        assert!(recs.iter().all(|r| r.scar_class == ScarClass::Rank1 && r.entropy == 0.0));
    }

    #[test]
    fn sweep_shape() {
        let rows = overlap_sweep(8, &[8, 6], &[0.3, 0.5], 3, 1).unwrap();
        assert_eq!(rows.len(), 4);
        assert!((rows[0].mean - 1.0).abs() < 1e-12);
        assert!(overlap_csv(&rows).lines().count() == 5);
    }

    #[test]
    fn csv_rows() {
        let basis = CoupledBasis::new(2, 2).unwrap();
        let rec = entropy_of(&[1.0f64, 0.0, 0.0, 0.0], &basis).unwrap();
        let row = scan_csv_rows(3, &[rec]);
        assert!(row.starts_with("3,0.0000000000000000e0,"));
        assert!(row.trim_end().ends_with(",1,1,1.0000000000000000e0,none"));
    }
}
