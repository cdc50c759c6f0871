//! Simple undirected graphs whose adjacency matrices double as Hamiltonians.
//!
//! Vertices are 0-based internally. The text interchange formats (edge list
//! and dense CSV) use 1-based labels.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Real;

/// Symmetric 0/1 adjacency matrix without self loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryGraph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    neighbors: Vec<Vec<usize>>,
}

impl BinaryGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self { n, words, bits: vec![0; n * words], neighbors: vec![Vec::new(); n] }
    }

    /// Builds a graph from 0-based edges. Duplicate edges are ignored.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::new(n);
        for (i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    /// Adds the edge `{i, j}` (0-based). Returns whether it was new.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<bool> {
        if i == j {
            return Err(Error::InvalidParameter(format!("self loop at vertex {}", i + 1)));
        }
        if i >= self.n || j >= self.n {
            return Err(Error::InvalidParameter(format!(
                "edge ({}, {}) outside a graph with {} vertices",
                i + 1,
                j + 1,
                self.n
            )));
        }
        if self.has_edge(i, j) {
            return Ok(false);
        }
        self.set_bit(i, j);
        self.set_bit(j, i);
        insert_sorted(&mut self.neighbors[i], j);
        insert_sorted(&mut self.neighbors[j], i);
        Ok(true)
    }

    fn set_bit(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1u64 << (j % 64);
    }

    #[inline]
    pub fn n_vertices(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    /// Sorted neighbours of `i`.
    #[inline]
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    /// Adjacency row of `i` as a bitset of `words_per_row()` words.
    #[inline]
    pub fn row_bits(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub fn words_per_row(&self) -> usize {
        self.words
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            self.neighbors[i].iter().copied().filter(move |&j| j > i).map(move |j| (i, j))
        })
    }

    pub fn to_dense<T: Real>(&self) -> DenseMatrix<T> {
        let mut m = DenseMatrix::zeros(self.n, self.n);
        for (i, j) in self.edges() {
            m[(i, j)] = T::one();
            m[(j, i)] = T::one();
        }
        m
    }

    /// Exact integer product `H x`.
    pub fn apply_i64(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.n);
        self.neighbors.iter().map(|nb| nb.iter().map(|&j| x[j]).sum()).collect()
    }

    pub fn apply<T: Real>(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        self.neighbors.iter().map(|nb| nb.iter().map(|&j| x[j]).sum()).collect()
    }

    /// Relabels vertices so that new vertex `k` is old vertex `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n {
            return Err(Error::InvalidSize(format!(
                "permutation of length {} for {} vertices",
                order.len(),
                self.n
            )));
        }
        let mut new_of_old = vec![usize::MAX; self.n];
        for (new, &old) in order.iter().enumerate() {
            if old >= self.n || new_of_old[old] != usize::MAX {
                return Err(Error::InvalidParameter("order is not a permutation".into()));
            }
            new_of_old[old] = new;
        }
        Self::from_edges(self.n, self.edges().map(|(i, j)| (new_of_old[i], new_of_old[j])))
    }

    /// Two-colouring by breadth-first layering. `None` if an odd cycle exists.
    pub fn two_coloring(&self) -> Result<Option<Vec<u8>>> {
        if self.n == 0 {
            return Ok(Some(Vec::new()));
        }
        let mut color = vec![u8::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        color[0] = 0;
        queue.push_back(0);
        let mut seen = 1;
        let mut bipartite = true;
        while let Some(v) = queue.pop_front() {
            for &w in &self.neighbors[v] {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    seen += 1;
                    queue.push_back(w);
                } else if color[w] == color[v] {
                    bipartite = false;
                }
            }
        }
        if seen != self.n {
            return Err(Error::Disconnected);
        }
        Ok(bipartite.then_some(color))
    }

    /// One `i j` pair per line (1-based, `i < j`), sorted lexicographically.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (i, j) in self.edges() {
            let _ = writeln!(out, "{} {}", i + 1, j + 1);
        }
        out
    }

    /// Parses the edge-list format. Without `n`, the vertex count is the
    /// largest label present.
    pub fn from_edge_list(text: &str, n: Option<usize>) -> Result<Self> {
        let mut edges = Vec::new();
        let mut max_label = 0;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let mut next = || -> Result<usize> {
                let tok = parts
                    .next()
                    .ok_or_else(|| Error::Parse(format!("line {}: expected two labels", lineno + 1)))?;
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad label {tok:?}", lineno + 1)))?;
                if v == 0 {
                    return Err(Error::Parse(format!("line {}: labels are 1-based", lineno + 1)));
                }
                Ok(v)
            };
            let (i, j) = (next()?, next()?);
            max_label = max_label.max(i).max(j);
            edges.push((i - 1, j - 1));
        }
        Self::from_edges(n.unwrap_or(max_label), edges)
    }

    /// Dense 0/1 matrix as comma separated rows.
    pub fn to_dense_csv(&self) -> String {
        let mut out = String::with_capacity(self.n * self.n * 2);
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    out.push(',');
                }
                out.push(if self.has_edge(i, j) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

fn insert_sorted(v: &mut Vec<usize>, x: usize) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}
