//! Exact diagonalization wrapper and level-spacing-ratio statistics.

use std::fmt::Write as _;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::coupling::{sector_split, CoupledHamiltonian, Sector, SectorBasis};
use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, symmetric_eigenvalues, DenseMatrix};
use crate::scalar::Real;

/// Spacings below this are treated as exact degeneracies.
pub const MIN_SPACING: f64 = 1e-10;
pub const DEFAULT_BINS: usize = 25;
/// `4 - 2√3`.
pub const GOE_MEAN_R: f64 = 0.535_898_384_862_245_4;
/// `2 ln 2 - 1`.
pub const POISSON_MEAN_R: f64 = 0.386_294_361_119_890_6;

#[derive(Clone, Debug)]
pub struct SpectralResult<T> {
    energies: Vec<T>,
    vectors: DenseMatrix<T>,
    sector: Option<Sector>,
    groups: Vec<Range<usize>>,
    group_of: Vec<usize>,
    norm: T,
}

fn check_symmetric<T: Real>(m: &DenseMatrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::InvalidSize(format!("{}x{} matrix is not square", m.rows(), m.cols())));
    }
    let scale = m.max_abs().max(T::one());
    let tol = T::of(1e-12).max(T::epsilon() * T::of(16.0)) * scale;
    if let Some((v, i, j)) = m.symmetry_violation(tol) {
        return Err(Error::NotSymmetric(v.as_f64(), i, j));
    }
    Ok(scale)
}

fn degeneracy_tol<T: Real>(norm: T) -> T {
    T::of(1e-8).max(T::epsilon() * T::of(1e3)) * norm.max(T::one())
}

/// Full eigendecomposition. Each eigenvector is normalized with its
/// largest-magnitude component positive; degenerate levels are grouped.
pub fn eigh<T: Real>(m: &DenseMatrix<T>) -> Result<SpectralResult<T>> {
    check_symmetric(m)?;
    let (energies, mut vectors) = symmetric_eigen(m)?;
    for k in 0..energies.len() {
        let row = vectors.row_mut(k);
        let mut best = T::zero();
        let mut sign = T::one();
        for &x in row.iter() {
            if x.abs() > best {
                best = x.abs();
                sign = if x < T::zero() { -T::one() } else { T::one() };
            }
        }
        if sign < T::zero() {
            row.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(SpectralResult::from_parts(energies, vectors, None))
}

/// Ascending eigenvalues only.
pub fn eigvalsh<T: Real>(m: &DenseMatrix<T>) -> Result<Vec<T>> {
    check_symmetric(m)?;
    symmetric_eigenvalues(m)
}

/// Index ranges of levels closer than `tol` to their neighbour.
pub fn group_levels<T: Real>(energies: &[T], tol: T) -> Vec<Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for k in 1..=energies.len() {
        if k == energies.len() || energies[k] - energies[k - 1] > tol {
            groups.push(start..k);
            start = k;
        }
    }
    groups
}

impl<T: Real> SpectralResult<T> {
    fn from_parts(energies: Vec<T>, vectors: DenseMatrix<T>, sector: Option<Sector>) -> Self {
        let norm = energies
            .first()
            .zip(energies.last())
            .map(|(a, b)| a.abs().max(b.abs()))
            .unwrap_or_else(T::zero);
        let groups = group_levels(&energies, degeneracy_tol(norm));
        let mut group_of = vec![0; energies.len()];
        for (g, r) in groups.iter().enumerate() {
            for k in r.clone() {
                group_of[k] = g;
            }
        }
        Self { energies, vectors, sector, groups, group_of, norm }
    }

    pub fn with_sector(mut self, sector: Sector) -> Self {
        self.sector = Some(sector);
        self
    }

    pub fn energies(&self) -> &[T] {
        &self.energies
    }

    pub fn energy(&self, k: usize) -> T {
        self.energies[k]
    }

    /// Unit eigenvector `k`.
    pub fn vector(&self, k: usize) -> &[T] {
        self.vectors.row(k)
    }

    pub fn vectors(&self) -> &DenseMatrix<T> {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn sector(&self) -> Option<Sector> {
        self.sector
    }

    /// Spectral norm (largest |E|).
    pub fn norm(&self) -> T {
        self.norm
    }

    pub fn degeneracy_groups(&self) -> &[Range<usize>] {
        &self.groups
    }

    pub fn group_of(&self, k: usize) -> Range<usize> {
        self.groups[self.group_of[k]].clone()
    }

    pub fn degeneracy_size(&self, k: usize) -> usize {
        self.group_of(k).len()
    }

    /// `max_k |H v_k - E_k v_k|`.
    pub fn max_residual(&self, m: &DenseMatrix<T>) -> T {
        (0..self.len())
            .map(|k| {
                let v = self.vector(k);
                let e = self.energies[k];
                m.matvec(v).iter().zip(v).map(|(&a, &b)| (a - e * b) * (a - e * b)).sum::<T>().sqrt()
            })
            .fold(T::zero(), T::max)
    }

    /// `max |V Vᵀ - 1|`.
    pub fn orthonormality_error(&self) -> T {
        let v = &self.vectors;
        let gram = v.matmul(&v.transpose());
        let mut worst = T::zero();
        for i in 0..gram.rows() {
            for j in 0..gram.cols() {
                let want = if i == j { T::one() } else { T::zero() };
                worst = worst.max((gram[(i, j)] - want).abs());
            }
        }
        worst
    }
}

/// Both inversion sectors of a coupled Hamiltonian, diagonalized separately.
#[derive(Clone, Debug)]
pub struct CoupledSpectrum<T> {
    pub plus: SpectralResult<T>,
    pub minus: SpectralResult<T>,
    pub plus_basis: SectorBasis,
    pub minus_basis: SectorBasis,
}

impl<T: Real> CoupledSpectrum<T> {
    pub fn sector(&self, sector: Sector) -> (&SpectralResult<T>, &SectorBasis) {
        match sector {
            Sector::Plus => (&self.plus, &self.plus_basis),
            Sector::Minus => (&self.minus, &self.minus_basis),
        }
    }

    /// Eigenvector `k` of `sector` in the full coupled basis.
    pub fn full_vector(&self, sector: Sector, k: usize) -> Vec<T> {
        let (s, b) = self.sector(sector);
        b.embed(s.vector(k))
    }

    /// Merged ascending spectrum of both sectors.
    pub fn energies(&self) -> Vec<T> {
        merge_sorted(self.plus.energies(), self.minus.energies())
    }

    pub fn len(&self) -> usize {
        self.plus.len() + self.minus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Multiplicity of `energy` in the merged spectrum.
    pub fn multiplicity(&self, energy: T) -> usize {
        let tol = degeneracy_tol(self.plus.norm().max(self.minus.norm()));
        let count = |s: &SpectralResult<T>| s.energies().iter().filter(|&&e| (e - energy).abs() <= tol).count();
        count(&self.plus) + count(&self.minus)
    }
}

fn merge_sorted<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let mut all: Vec<T> = a.iter().chain(b).copied().collect();
    all.sort_by(|x, y| x.partial_cmp(y).expect("finite energies"));
    all
}

/// Diagonalizes both inversion sectors (concurrently).
pub fn diagonalize_coupled<T: Real>(h: &CoupledHamiltonian) -> Result<CoupledSpectrum<T>> {
    let split = sector_split::<T>(h)?;
    let (plus, minus) = rayon::join(|| eigh(&split.plus), || eigh(&split.minus));
    Ok(CoupledSpectrum {
        plus: plus?.with_sector(Sector::Plus),
        minus: minus?.with_sector(Sector::Minus),
        plus_basis: split.plus_basis,
        minus_basis: split.minus_basis,
    })
}

/// Eigenvalues of one sector, or of both merged when `sector` is `None`.
pub fn coupled_energies<T: Real>(h: &CoupledHamiltonian, sector: Option<Sector>) -> Result<Vec<T>> {
    let split = sector_split::<T>(h)?;
    match sector {
        Some(Sector::Plus) => eigvalsh(&split.plus),
        Some(Sector::Minus) => eigvalsh(&split.minus),
        None => Ok(merge_sorted(&eigvalsh(&split.plus)?, &eigvalsh(&split.minus)?)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub density: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelStatistics {
    pub r_values: Vec<f64>,
    pub mean_r: f64,
    pub histogram: Vec<HistogramBin>,
    pub n_dropped: usize,
    pub n_levels: usize,
    pub n_samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub mean_r: f64,
    pub n_levels: usize,
    pub n_samples: usize,
    pub n_dropped: usize,
}

fn histogram(r: &[f64], bins: usize) -> Vec<HistogramBin> {
    let width = 1.0 / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in r {
        counts[((x / width) as usize).min(bins - 1)] += 1;
    }
    let total = r.len().max(1) as f64;
    counts
        .iter()
        .enumerate()
        .map(|(b, &count)| HistogramBin {
            lo: b as f64 * width,
            hi: (b + 1) as f64 * width,
            count,
            density: count as f64 / (total * width),
        })
        .collect()
}

/// Ratios of consecutive spacings of an ascending spectrum from a single
/// symmetry sector. A ratio is skipped when either spacing is below
/// [`MIN_SPACING`]; such spacings are counted in `n_dropped`.
pub fn spacing_ratios<T: Real>(energies: &[T]) -> Result<LevelStatistics> {
    if energies.len() < 3 {
        return Err(Error::InvalidSize(format!("need at least 3 levels, got {}", energies.len())));
    }
    let gaps: Vec<f64> = energies.windows(2).map(|w| (w[1] - w[0]).as_f64()).collect();
    if gaps.iter().any(|&g| g < -MIN_SPACING) {
        return Err(Error::InvalidParameter("energies must be ascending".into()));
    }
    let n_dropped = gaps.iter().filter(|&&g| g < MIN_SPACING).count();
    let r_values: Vec<f64> = gaps
        .windows(2)
        .filter(|w| w[0] >= MIN_SPACING && w[1] >= MIN_SPACING)
        .map(|w| w[0].min(w[1]) / w[0].max(w[1]))
        .collect();
    Ok(LevelStatistics::from_ratios(r_values, n_dropped, energies.len(), 1))
}

impl LevelStatistics {
    pub fn from_ratios(r_values: Vec<f64>, n_dropped: usize, n_levels: usize, n_samples: usize) -> Self {
        let mean_r = if r_values.is_empty() {
            f64::NAN
        } else {
            r_values.iter().sum::<f64>() / r_values.len() as f64
        };
        let histogram = histogram(&r_values, DEFAULT_BINS);
        Self { r_values, mean_r, histogram, n_dropped, n_levels, n_samples }
    }

    /// Merges per-sample statistics in the given order.
    pub fn pool(items: &[LevelStatistics]) -> Self {
        let r: Vec<f64> = items.iter().flat_map(|s| s.r_values.iter().copied()).collect();
        Self::from_ratios(
            r,
            items.iter().map(|s| s.n_dropped).sum(),
            items.iter().map(|s| s.n_levels).sum(),
            items.iter().map(|s| s.n_samples).sum(),
        )
    }

    pub fn rebin(&mut self, bins: usize) {
        self.histogram = histogram(&self.r_values, bins.max(1));
    }

    pub fn summary(&self) -> LevelSummary {
        LevelSummary {
            mean_r: self.mean_r,
            n_levels: self.n_levels,
            n_samples: self.n_samples,
            n_dropped: self.n_dropped,
        }
    }

    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count,density\n");
        for b in &self.histogram {
            let _ = writeln!(out, "{:.16e},{:.16e},{},{:.16e}", b.lo, b.hi, b.count, b.density);
        }
        out
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary()).expect("summary serializes")
    }
}

fn check_unit<T: Real>(r: T) -> Result<()> {
    if !(r >= T::zero() && r <= T::one()) {
        return Err(Error::InvalidParameter(format!("ratio {r} outside [0, 1]")));
    }
    Ok(())
}

/// GOE surmise `27/4 (r + r²) / (1 + r + r²)^{5/2}`, normalized on `[0, 1]`.
pub fn wigner_dyson_pdf<T: Real>(r: T) -> Result<T> {
    check_unit(r)?;
    let q = T::one() + r + r * r;
    Ok(T::of(27.0 / 4.0) * (r + r * r) / (q * q * q.sqrt()))
}

/// `2 / (1 + r)²` on `[0, 1]`.
pub fn poisson_pdf<T: Real>(r: T) -> Result<T> {
    check_unit(r)?;
    Ok(T::two() / ((T::one() + r) * (T::one() + r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(f: impl Fn(f64) -> f64, n: usize) -> f64 {
        let h = 1.0 / n as f64;
        let mut s = f(0.0) + f(1.0);
        for k in 1..n {
            s += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn small_spectra() {
        let m = DenseMatrix::<f64>::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let s = eigh(&m).unwrap();
        assert!((s.energy(0) + 1.0).abs() < 1e-15 && (s.energy(1) - 1.0).abs() < 1e-15);
        let h3 = DenseMatrix::<f64>::from_rows(&[vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]]);
        let s = eigh(&h3).unwrap();
        let r2 = 2f64.sqrt();
        for (a, b) in s.energies().iter().zip([-r2, 0.0, r2]) {
            assert!((a - b).abs() < 1e-14);
        }
        for k in 0..3 {
            let v = s.vector(k);
            let big = v.iter().fold(0.0f64, |m, x| if x.abs() > m.abs() { *x } else { m });
            assert!(big > 0.0);
        }
        assert!(s.max_residual(&h3) < 1e-14);
        assert!(s.orthonormality_error() < 1e-14);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DenseMatrix::<f64>::from_rows(&[vec![0.0, 1.0], vec![0.5, 0.0]]);
        assert!(matches!(eigh(&m), Err(Error::NotSymmetric(..))));
        assert!(eigh(&DenseMatrix::<f64>::zeros(2, 3)).is_err());
    }

    #[test]
    fn grouping() {
        let m = DenseMatrix::<f64>::from_fn(4, 4, |i, j| if i == j { 0.0 } else { 1.0 });
        let s = eigh(&m).unwrap();
        assert_eq!(s.degeneracy_groups(), &[0..3, 3..4]);
        assert_eq!(s.degeneracy_size(1), 3);
        assert_eq!(s.degeneracy_size(3), 1);
    }

    #[test]
    fn ratio_examples() {
        let s = spacing_ratios(&[0.0, 1.0, 3.0]).unwrap();
        assert_eq!(s.r_values, vec![0.5]);
        let ladder: Vec<f64> = (0..50).map(|k| k as f64 * 0.3).collect();
        let s = spacing_ratios(&ladder).unwrap();
        assert!(s.r_values.iter().all(|&r| (r - 1.0).abs() < 1e-12));
        assert!(spacing_ratios(&[0.0, 1.0]).is_err());
        let s = spacing_ratios(&[0.0, 1.0, 1.0, 2.0, 4.0]).unwrap();
        assert_eq!(s.n_dropped, 1);
        assert_eq!(s.r_values, vec![0.5]);
    }

    #[test]
    fn histogram_normalized() {
        let r: Vec<f64> = (0..1000).map(|k| (k as f64 * 0.618_033_988_7) % 1.0).collect();
        let s = LevelStatistics::from_ratios(r, 0, 1002, 1);
        let integral: f64 = s.histogram.iter().map(|b| b.density * (b.hi - b.lo)).sum();
        assert!((integral - 1.0).abs() < 1e-12);
        assert_eq!(s.histogram.len(), 25);
        assert!(s.histogram_csv().starts_with("bin_lo,bin_hi,count,density\n"));
        let pooled = LevelStatistics::pool(&[s.clone(), s.clone()]);
        assert_eq!(pooled.n_samples, 2);
        assert!((pooled.mean_r - s.mean_r).abs() < 1e-12);
        assert!(pooled.summary_json().contains("\"n_levels\": 2004"));
    }

    #[test]
    fn coupled_sectors_match_full() {
        use crate::coupling::couple;
        use crate::ensemble::{sample_hl, EnsembleParams};
        let h = sample_hl(&EnsembleParams::new(10, 7, 0.4, 5).unwrap()).unwrap();
        let c = couple(&h, 7).unwrap();
        let cs = diagonalize_coupled::<f64>(&c).unwrap();
        let full = eigvalsh(&c.to_dense::<f64>()).unwrap();
        let merged = cs.energies();
        assert_eq!(merged.len(), full.len());
        for (a, b) in merged.iter().zip(&full) {
            assert!((a - b).abs() < 1e-10);
        }
        let dense = c.to_dense::<f64>();
        for sector in Sector::both() {
            let (s, _) = cs.sector(sector);
            for k in 0..s.len() {
                let v = cs.full_vector(sector, k);
                let hv = dense.matvec(&v);
                let r: f64 = hv.iter().zip(&v).map(|(a, b)| (a - s.energy(k) * b).powi(2)).sum();
                assert!(r.sqrt() < 1e-10);
            }
        }
        let only = coupled_energies::<f64>(&c, None).unwrap();
        for (a, b) in only.iter().zip(&full) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn density_oracles() {
        let n = 20_000;
        let norm_goe = simpson(|r| wigner_dyson_pdf(r).unwrap(), n);
        let norm_poi = simpson(|r| poisson_pdf(r).unwrap(), n);
        assert!((norm_goe - 1.0).abs() < 1e-10 && (norm_poi - 1.0).abs() < 1e-10);
        let mean_goe = simpson(|r| r * wigner_dyson_pdf(r).unwrap(), n);
        let mean_poi = simpson(|r| r * poisson_pdf(r).unwrap(), n);
        assert!((mean_goe - (4.0 - 2.0 * 3f64.sqrt())).abs() < 1e-10);
        assert!((mean_goe - GOE_MEAN_R).abs() < 1e-10);
        assert!((mean_poi - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-10);
        assert!((mean_poi - POISSON_MEAN_R).abs() < 1e-10);
        assert_eq!(wigner_dyson_pdf(0.0).unwrap(), 0.0);
        assert!(wigner_dyson_pdf(1.5).is_err());
        assert!(poisson_pdf(-0.1f32).is_err());
        assert!(poisson_pdf(f64::NAN).is_err());
    }
}
