//! Inversion-symmetric and antisymmetric sectors.

use serde::{Deserialize, Serialize};

use super::{CoupledBasis, CoupledHamiltonian, InversionMap};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Plus,
    Minus,
}

impl Sector {
    pub fn sign(self) -> i8 {
        match self {
            Sector::Plus => 1,
            Sector::Minus => -1,
        }
    }

    pub fn both() -> [Sector; 2] {
        [Sector::Plus, Sector::Minus]
    }
}

/// Orthonormal basis of one sector: diagonal states `|i,i>` (plus sector
/// only), then `(|i,j> ± |j,i>)/√2` for `i < j` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorBasis {
    sector: Sector,
    full_dim: usize,
    /// `(a, b)` full indices; `a == b` for a diagonal state, else `a` is the
    /// `(i, j)` state and `b` its mirror.
    states: Vec<(usize, usize)>,
    /// Full index to (sector state, sign of its coefficient).
    lookup: Vec<(usize, i8)>,
}

impl SectorBasis {
    pub fn new(basis: &CoupledBasis, sector: Sector) -> Self {
        let mut states = Vec::new();
        if sector == Sector::Plus {
            for i in 0..basis.d_prime() {
                let a = basis.index_of(i, i).expect("diagonal below cutoff");
                states.push((a, a));
            }
        }
        for (a, &(i, j)) in basis.pairs().iter().enumerate() {
            if i < j {
                states.push((a, basis.index_of(j, i).expect("swap-closed")));
            }
        }
        let mut lookup = vec![(usize::MAX, 0i8); basis.len()];
        for (s, &(a, b)) in states.iter().enumerate() {
            lookup[a] = (s, 1);
            if a != b {
                lookup[b] = (s, sector.sign());
            }
        }
        Self { sector, full_dim: basis.len(), states, lookup }
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn full_dim(&self) -> usize {
        self.full_dim
    }

    /// Full-basis vector of sector coordinates `x`.
    pub fn embed<T: Real>(&self, x: &[T]) -> Vec<T> {
        let r = T::FRAC_1_SQRT_2();
        let mut out = vec![T::zero(); self.full_dim];
        for (&(a, b), &c) in self.states.iter().zip(x) {
            if a == b {
                out[a] = c;
            } else {
                out[a] = c * r;
                out[b] = if self.sector == Sector::Plus { c * r } else { -c * r };
            }
        }
        out
    }

    /// Sector coordinates of a full-basis vector (orthogonal projection).
    pub fn project<T: Real>(&self, v: &[T]) -> Vec<T> {
        let r = T::FRAC_1_SQRT_2();
        self.states
            .iter()
            .map(|&(a, b)| {
                if a == b {
                    v[a]
                } else if self.sector == Sector::Plus {
                    (v[a] + v[b]) * r
                } else {
                    (v[a] - v[b]) * r
                }
            })
            .collect()
    }

    /// Block of `h` in this sector.
    pub fn block<T: Real>(&self, h: &CoupledHamiltonian) -> DenseMatrix<T> {
        let n = self.len();
        let r = T::FRAC_1_SQRT_2();
        let mut m = DenseMatrix::zeros(n, n);
        let g = h.graph();
        for (t, &(a, b)) in self.states.iter().enumerate() {
            let parts: &[(usize, T)] = if a == b {
                &[(a, T::one())][..]
            } else {
                &[(a, r), (b, if self.sector == Sector::Plus { r } else { -r })][..]
            };
            for &(src, coeff) in parts {
                for &dst in g.neighbors(src) {
                    let (s, sign) = self.lookup[dst];
                    if sign == 0 {
                        // diagonal state, absent from the minus sector
                        continue;
                    }
                    let (sa, sb) = self.states[s];
                    let weight = if sa == sb { T::one() } else { r };
                    let w = if sign > 0 { weight } else { -weight };
                    m[(s, t)] += coeff * w;
                }
            }
        }
        m
    }
}

/// Both sector blocks with their bases.
#[derive(Clone, Debug)]
pub struct SectorSplit<T> {
    pub plus: DenseMatrix<T>,
    pub minus: DenseMatrix<T>,
    pub plus_basis: SectorBasis,
    pub minus_basis: SectorBasis,
}

impl<T: Real> SectorSplit<T> {
    pub fn block(&self, sector: Sector) -> (&DenseMatrix<T>, &SectorBasis) {
        match sector {
            Sector::Plus => (&self.plus, &self.plus_basis),
            Sector::Minus => (&self.minus, &self.minus_basis),
        }
    }
}

pub fn sector_split<T: Real>(h: &CoupledHamiltonian) -> Result<SectorSplit<T>> {
    if !InversionMap::new(h.basis()).commutes_with(h) {
        return Err(Error::InversionBroken);
    }
    let plus_basis = SectorBasis::new(h.basis(), Sector::Plus);
    let minus_basis = SectorBasis::new(h.basis(), Sector::Minus);
    Ok(SectorSplit {
        plus: plus_basis.block(h),
        minus: minus_basis.block(h),
        plus_basis,
        minus_basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::couple;
    use crate::ensemble::{sample_hl, EnsembleParams};
    use crate::linalg::symmetric_eigenvalues;

    #[test]
    fn sector_sizes() {
        let h = sample_hl(&EnsembleParams::new(20, 14, 0.4, 1).unwrap()).unwrap();
        let c = couple(&h, 14).unwrap();
        let s = sector_split::<f64>(&c).unwrap();
        assert_eq!((c.dim(), s.plus.rows(), s.minus.rows()), (364, 189, 175));
        let small = CoupledBasis::new(5, 3).unwrap();
        assert_eq!(SectorBasis::new(&small, Sector::Plus).len(), 12);
        assert_eq!(SectorBasis::new(&small, Sector::Minus).len(), 9);
    }

    #[test]
    fn blocks_reproduce_full_spectrum() {
        let h = sample_hl(&EnsembleParams::new(9, 6, 0.5, 11).unwrap()).unwrap();
        let c = couple(&h, 6).unwrap();
        let s = sector_split::<f64>(&c).unwrap();
        assert!(s.plus.symmetry_violation(0.0).is_none());
        assert!(s.minus.symmetry_violation(0.0).is_none());
        let mut both = symmetric_eigenvalues(&s.plus).unwrap();
        both.extend(symmetric_eigenvalues(&s.minus).unwrap());
        both.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let full = symmetric_eigenvalues(&c.to_dense::<f64>()).unwrap();
        for (a, b) in both.iter().zip(&full) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn embed_project_roundtrip() {
        let b = CoupledBasis::new(6, 4).unwrap();
        for sector in Sector::both() {
            let sb = SectorBasis::new(&b, sector);
            let x: Vec<f64> = (0..sb.len()).map(|k| (k as f64).sin()).collect();
            let full = sb.embed(&x);
            let inv = crate::coupling::inversion_map(&b);
            let mirrored = inv.apply(&full);
            for (u, v) in full.iter().zip(&mirrored) {
                assert!((u - sector.sign() as f64 * v).abs() < 1e-15);
            }
            let back = sb.project(&full);
            for (u, v) in x.iter().zip(&back) {
                assert!((u - v).abs() < 1e-14);
            }
        }
    }
}
