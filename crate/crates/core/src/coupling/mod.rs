//! Two copies of `H_L` coupled by the cutoff projector.
//!
//! The product state `|i>|j>` survives unless both `i` and `j` exceed `D'`
//! (1-based labels). Internally labels are 0-based, so the forbidden block is
//! `i >= D' && j >= D'`. Allowed pairs are stored in lexicographic order.

mod path;
mod sectors;

pub use path::{hamiltonian_path_order, validate_path};
pub use sectors::{sector_split, Sector, SectorBasis, SectorSplit};

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::BinaryGraph;
use crate::linalg::DenseMatrix;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoupledBasis {
    d: usize,
    d_prime: usize,
    pairs: Vec<(usize, usize)>,
    /// `d * d` grid of linear indices, `usize::MAX` where forbidden.
    grid: Vec<usize>,
}

impl CoupledBasis {
    pub fn new(d: usize, d_prime: usize) -> Result<Self> {
        if d == 0 || d_prime == 0 || d_prime > d {
            return Err(Error::InvalidParameter(format!(
                "cutoff D' = {d_prime} must satisfy 1 <= D' <= D = {d}"
            )));
        }
        let mut pairs = Vec::with_capacity(dimension(d, d_prime));
        let mut grid = vec![usize::MAX; d * d];
        for i in 0..d {
            for j in 0..d {
                if i < d_prime || j < d_prime {
                    grid[i * d + j] = pairs.len();
                    pairs.push((i, j));
                }
            }
        }
        Ok(Self { d, d_prime, pairs, grid })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn d_prime(&self) -> usize {
        self.d_prime
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// 0-based `(left, right)` labels of state `k`.
    pub fn pair(&self, k: usize) -> (usize, usize) {
        self.pairs[k]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn is_allowed(&self, i: usize, j: usize) -> bool {
        i < self.d && j < self.d && (i < self.d_prime || j < self.d_prime)
    }

    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.d || j >= self.d {
            return None;
        }
        let k = self.grid[i * self.d + j];
        (k != usize::MAX).then_some(k)
    }

    /// `linear_index,i,j` rows, 1-based.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("linear_index,i,j\n");
        for (k, (i, j)) in self.pairs.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", k + 1, i + 1, j + 1);
        }
        out
    }
}

/// `D^2 - (D - D')^2`.
pub fn dimension(d: usize, d_prime: usize) -> usize {
    d * d - (d - d_prime.min(d)) * (d - d_prime.min(d))
}

/// Coupled Hamiltonian as a 0/1 graph over the allowed pairs.
#[derive(Clone, Debug)]
pub struct CoupledHamiltonian {
    basis: CoupledBasis,
    h_l: BinaryGraph,
    graph: BinaryGraph,
}

impl CoupledHamiltonian {
    pub fn basis(&self) -> &CoupledBasis {
        &self.basis
    }

    pub fn h_l(&self) -> &BinaryGraph {
        &self.h_l
    }

    pub fn graph(&self) -> &BinaryGraph {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_dense<T: Real>(&self) -> DenseMatrix<T> {
        self.graph.to_dense()
    }

    pub fn apply<T: Real>(&self, x: &[T]) -> Vec<T> {
        self.graph.apply(x)
    }
}

/// Builds `Π (H_L ⊗ 1 + 1 ⊗ H_R) Π` with `H_R = H_L`.
pub fn couple(h_l: &BinaryGraph, d_prime: usize) -> Result<CoupledHamiltonian> {
    let basis = CoupledBasis::new(h_l.n_vertices(), d_prime)?;
    let mut graph = BinaryGraph::new(basis.len());
    for (a, &(i, j)) in basis.pairs().iter().enumerate() {
        for &k in h_l.neighbors(i) {
            if let Some(b) = basis.index_of(k, j) {
                if a < b {
                    graph.add_edge(a, b)?;
                }
            }
        }
        for &l in h_l.neighbors(j) {
            if let Some(b) = basis.index_of(i, l) {
                if a < b {
                    graph.add_edge(a, b)?;
                }
            }
        }
    }
    Ok(CoupledHamiltonian { basis, h_l: h_l.clone(), graph })
}

/// Left-right swap `(i, j) -> (j, i)` as a permutation of basis indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionMap {
    perm: Vec<usize>,
}

impl InversionMap {
    pub fn new(basis: &CoupledBasis) -> Self {
        let perm = basis
            .pairs()
            .iter()
            .map(|&(i, j)| basis.index_of(j, i).expect("allowed set is swap-closed"))
            .collect();
        Self { perm }
    }

    pub fn image(&self, k: usize) -> usize {
        self.perm[k]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_involution(&self) -> bool {
        self.perm.iter().enumerate().all(|(k, &p)| self.perm[p] == k)
    }

    pub fn fixed_points(&self) -> usize {
        self.perm.iter().enumerate().filter(|(k, &p)| *k == p).count()
    }

    pub fn two_cycles(&self) -> usize {
        (self.perm.len() - self.fixed_points()) / 2
    }

    pub fn apply<T: Real>(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); x.len()];
        for (k, &p) in self.perm.iter().enumerate() {
            out[p] = x[k];
        }
        out
    }

    /// Exact check of `I H I = H` on the integer matrix.
    pub fn commutes_with(&self, h: &CoupledHamiltonian) -> bool {
        let g = h.graph();
        g.n_vertices() == self.perm.len()
            && g.edges().all(|(a, b)| g.has_edge(self.perm[a], self.perm[b]))
    }
}

pub fn inversion_map(basis: &CoupledBasis) -> InversionMap {
    InversionMap::new(basis)
}

/// `H_L ⊗ 1 + 1 ⊗ H_R` on the full `D^2` product space (index `i * D + j`)
/// together with the product states removed by the cutoff.
#[derive(Clone, Debug)]
pub struct Unconstrained {
    d: usize,
    graph: BinaryGraph,
    forbidden: Vec<(usize, usize)>,
}

impl Unconstrained {
    pub fn graph(&self) -> &BinaryGraph {
        &self.graph
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// 0-based forbidden pairs in lexicographic order.
    pub fn forbidden(&self) -> &[(usize, usize)] {
        &self.forbidden
    }

    /// Same matrix with every row and column of a forbidden state set to 0.
    pub fn nulled(&self) -> Result<BinaryGraph> {
        let mut bad = vec![false; self.d * self.d];
        for &(i, j) in &self.forbidden {
            bad[i * self.d + j] = true;
        }
        BinaryGraph::from_edges(
            self.graph.n_vertices(),
            self.graph.edges().filter(|&(a, b)| !bad[a] && !bad[b]),
        )
    }

    /// Nulled matrix restricted to the allowed pairs of `basis`.
    pub fn restrict(&self, basis: &CoupledBasis) -> Result<BinaryGraph> {
        let nulled = self.nulled()?;
        let mut out = BinaryGraph::new(basis.len());
        for (a, b) in nulled.edges() {
            let (ia, ib) = (basis.index_of(a / self.d, a % self.d), basis.index_of(b / self.d, b % self.d));
            if let (Some(x), Some(y)) = (ia, ib) {
                out.add_edge(x, y)?;
            }
        }
        Ok(out)
    }
}

pub fn unconstrained(h_l: &BinaryGraph, d_prime: usize) -> Result<Unconstrained> {
    let d = h_l.n_vertices();
    let basis = CoupledBasis::new(d, d_prime)?;
    let mut graph = BinaryGraph::new(d * d);
    for i in 0..d {
        for j in 0..d {
            let a = i * d + j;
            for &k in h_l.neighbors(i) {
                if a < k * d + j {
                    graph.add_edge(a, k * d + j)?;
                }
            }
            for &l in h_l.neighbors(j) {
                if a < i * d + l {
                    graph.add_edge(a, i * d + l)?;
                }
            }
        }
    }
    let forbidden = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .filter(|&(i, j)| !basis.is_allowed(i, j))
        .collect();
    Ok(Unconstrained { d, graph, forbidden })
}

/// Full coupled state as a `D^2` product-space vector.
pub fn embed_product<T: Real>(basis: &CoupledBasis, v: &[T]) -> Vec<T> {
    let d = basis.d();
    let mut out = vec![T::zero(); d * d];
    for (k, &(i, j)) in basis.pairs().iter().enumerate() {
        out[i * d + j] = v[k];
    }
    out
}
