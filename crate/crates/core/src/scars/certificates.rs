//! Motifs of `H_L` that carry sparse integer eigenvectors.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::graph::BinaryGraph;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Triangle,
    Diamond,
}

/// `(e_a - e_b)/√2` at energy 0, or `(e_a + σ e_b - e_c - σ e_d)/2` at
/// energy `σ`. Vertices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgraphCertificate {
    pub kind: CertificateKind,
    pub vertices: Vec<usize>,
    /// `±1` for diamonds, `0` for triangles.
    pub sigma: i8,
    pub eigenvalue: i8,
    pub satisfies_cutoff: bool,
}

#[derive(Serialize)]
struct CertificateJson {
    kind: CertificateKind,
    vertices: Vec<usize>,
    sigma: Option<i8>,
    eigenvalue: i8,
    satisfies_cutoff: bool,
}

impl SubgraphCertificate {
    /// Integer entries of the unnormalized vector.
    pub fn sparse_entries(&self) -> Vec<(usize, i64)> {
        let v = &self.vertices;
        match self.kind {
            CertificateKind::Triangle => vec![(v[0], 1), (v[1], -1)],
            CertificateKind::Diamond => {
                let s = self.sigma as i64;
                vec![(v[0], 1), (v[1], s), (v[2], -1), (v[3], -s)]
            }
        }
    }

    /// Exact check `H v = E v` in integers.
    pub fn verify(&self, g: &BinaryGraph) -> bool {
        let mut x = vec![0i64; g.n_vertices()];
        for (k, c) in self.sparse_entries() {
            if k >= x.len() {
                return false;
            }
            x[k] = c;
        }
        let hx = g.apply_i64(&x);
        hx.iter().zip(&x).all(|(&a, &b)| a == self.eigenvalue as i64 * b)
    }

    /// Normalized dense vector of length `n`.
    pub fn vector<T: Real>(&self, n: usize) -> Vec<T> {
        let entries = self.sparse_entries();
        let scale = T::one() / T::of_usize(entries.len()).sqrt();
        let mut v = vec![T::zero(); n];
        for (k, c) in entries {
            v[k] = T::of(c as f64) * scale;
        }
        v
    }

    pub fn energy<T: Real>(&self) -> T {
        T::of(self.eigenvalue as f64)
    }

    /// One JSON line with 1-based vertices.
    pub fn to_json_line(&self) -> String {
        let j = CertificateJson {
            kind: self.kind,
            vertices: self.vertices.iter().map(|v| v + 1).collect(),
            sigma: (self.kind == CertificateKind::Diamond).then_some(self.sigma),
            eigenvalue: self.eigenvalue,
            satisfies_cutoff: self.satisfies_cutoff,
        };
        serde_json::to_string(&j).expect("certificate serializes")
    }
}

pub fn certificates_jsonl(certs: &[SubgraphCertificate]) -> String {
    certs.iter().map(|c| c.to_json_line() + "\n").collect()
}

/// Non-adjacent pairs `a < b` with identical adjacency columns.
pub fn find_triangles(g: &BinaryGraph, d_prime: usize) -> Vec<SubgraphCertificate> {
    let mut buckets: HashMap<&[u64], Vec<usize>> = HashMap::new();
    for v in 0..g.n_vertices() {
        buckets.entry(g.row_bits(v)).or_default().push(v);
    }
    let mut out = BTreeSet::new();
    for members in buckets.values() {
        for (x, &a) in members.iter().enumerate() {
            for &b in &members[x + 1..] {
                let cert = SubgraphCertificate {
                    kind: CertificateKind::Triangle,
                    vertices: vec![a.min(b), a.max(b)],
                    sigma: 0,
                    eigenvalue: 0,
                    satisfies_cutoff: a < d_prime && b < d_prime,
                };
                if !g.has_edge(a, b) && cert.verify(g) {
                    out.insert(cert);
                }
            }
        }
    }
    out.into_iter().collect()
}

fn columns_match_outside(g: &BinaryGraph, x: usize, y: usize, mask: &[u64]) -> bool {
    g.row_bits(x)
        .iter()
        .zip(g.row_bits(y))
        .zip(mask)
        .all(|((&p, &q), &m)| (p ^ q) & !m == 0)
}

/// The smallest of the four role-preserving relabelings.
pub fn canonical_diamond(a: usize, b: usize, c: usize, d: usize) -> [usize; 4] {
    [[a, b, c, d], [b, a, d, c], [c, d, a, b], [d, c, b, a]]
        .into_iter()
        .min()
        .expect("four candidates")
}

/// Edges `a-b`, `c-d` with no edges across, such that every other vertex
/// sees `a` and `c` alike and `b` and `d` alike. Both signs are emitted.
pub fn find_diamonds(g: &BinaryGraph, d_prime: usize) -> Vec<SubgraphCertificate> {
    let n = g.n_vertices();
    let words = g.words_per_row();
    let oriented: Vec<(usize, usize)> = g.edges().flat_map(|(i, j)| [(i, j), (j, i)]).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut mask = vec![0u64; words];
    for &(a, b) in &oriented {
        for &(c, d) in &oriented {
            if c <= a || [a, b].contains(&c) || [a, b].contains(&d) {
                continue;
            }
            if g.has_edge(a, c) || g.has_edge(a, d) || g.has_edge(b, c) || g.has_edge(b, d) {
                continue;
            }
            mask.iter_mut().for_each(|w| *w = 0);
            for v in [a, b, c, d] {
                mask[v / 64] |= 1 << (v % 64);
            }
            if !columns_match_outside(g, a, c, &mask) || !columns_match_outside(g, b, d, &mask) {
                continue;
            }
            let canon = canonical_diamond(a, b, c, d);
            if !seen.insert(canon) {
                continue;
            }
            for sigma in [-1i8, 1] {
                let cert = SubgraphCertificate {
                    kind: CertificateKind::Diamond,
                    vertices: canon.to_vec(),
                    sigma,
                    eigenvalue: sigma,
                    satisfies_cutoff: canon.iter().all(|&v| v < d_prime),
                };
                debug_assert!(cert.verify(g));
                if cert.verify(g) {
                    out.push(cert);
                }
            }
        }
    }
    debug_assert!(n == 0 || out.iter().all(|c| c.vertices.iter().all(|&v| v < n)));
    out.sort();
    out
}

/// Triangles followed by diamonds.
pub fn find_certificates(g: &BinaryGraph, d_prime: usize) -> Vec<SubgraphCertificate> {
    let mut all = find_triangles(g, d_prime);
    all.extend(find_diamonds(g, d_prime));
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{backbone, sample_hl, EnsembleParams};

    fn graph(n: usize, edges: &[(usize, usize)]) -> BinaryGraph {
        BinaryGraph::from_edges(n, edges.iter().map(|&(a, b)| (a - 1, b - 1))).unwrap()
    }

    #[test]
    fn four_cycle_triangles() {
        let g = graph(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        let t = find_triangles(&g, 4);
        let pairs: Vec<Vec<usize>> = t.iter().map(|c| c.vertices.clone()).collect();
        assert_eq!(pairs, vec![vec![0, 2], vec![1, 3]]);
        assert!(find_diamonds(&g, 4).is_empty());
    }

    #[test]
    fn path_has_none() {
        for d in 4..=20 {
            let g = backbone(d).unwrap();
            assert!(find_triangles(&g, d).is_empty());
        }
    }

    #[test]
    fn complete_bipartite() {
        // K_{2,3}: vertices 1,2 on one side
        let g = graph(5, &[(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]);
        let t = find_triangles(&g, 5);
        assert!(t.iter().any(|c| c.vertices == vec![0, 1]));
    }

    #[test]
    fn two_disjoint_edges() {
        let g = graph(4, &[(1, 2), (3, 4)]);
        // labelings (1,2,3,4) and (1,2,4,3) are both valid, each with σ = ±1
        let d = find_diamonds(&g, 4);
        assert_eq!(d.len(), 4);
        let mut ev: Vec<i8> = d.iter().map(|c| c.eigenvalue).collect();
        ev.sort();
        assert_eq!(ev, vec![-1, -1, 1, 1]);
        assert!(d.iter().all(|c| c.verify(&g)));
    }

    #[test]
    fn template_with_shared_neighbour() {
        // a=1,b=2,c=3,d=4, v=5 attached to a and c, w=6 attached to b and d, v-w edge
        let g = graph(6, &[(1, 2), (3, 4), (5, 1), (5, 3), (6, 2), (6, 4), (5, 6)]);
        let d = find_diamonds(&g, 6);
        assert!(d.iter().any(|c| c.vertices == vec![0, 1, 2, 3] && c.sigma == 1));
        assert!(d.iter().all(|c| c.verify(&g)));
        // breaking the symmetry on one side kills it
        let g = graph(6, &[(1, 2), (3, 4), (5, 1), (6, 2), (6, 4)]);
        assert!(find_diamonds(&g, 6).iter().all(|c| c.vertices != vec![0, 1, 2, 3]));
    }

    #[test]
    fn cutoff_flag_and_json() {
        let g = graph(4, &[(1, 2), (3, 4)]);
        let d = find_diamonds(&g, 3);
        assert!(d.iter().all(|c| !c.satisfies_cutoff));
        assert_eq!(
            d[1].to_json_line(),
            r#"{"kind":"diamond","vertices":[1,2,3,4],"sigma":1,"eigenvalue":1,"satisfies_cutoff":false}"#
        );
        let g = graph(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        let t = find_triangles(&g, 4);
        assert_eq!(
            t[0].to_json_line(),
            r#"{"kind":"triangle","vertices":[1,3],"sigma":null,"eigenvalue":0,"satisfies_cutoff":true}"#
        );
    }

    fn brute_triangles(g: &BinaryGraph) -> BTreeSet<(usize, usize)> {
        let n = g.n_vertices();
        let mut out = BTreeSet::new();
        for a in 0..n {
            for b in a + 1..n {
                if !g.has_edge(a, b) && (0..n).all(|v| g.has_edge(v, a) == g.has_edge(v, b)) {
                    out.insert((a, b));
                }
            }
        }
        out
    }

    fn brute_diamonds(g: &BinaryGraph) -> BTreeSet<[usize; 4]> {
        let n = g.n_vertices();
        let mut out = BTreeSet::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let q = [a, b, c, d];
                        let distinct = (0..4).all(|x| (x + 1..4).all(|y| q[x] != q[y]));
                        if !distinct {
                            continue;
                        }
                        let shape = g.has_edge(a, b)
                            && g.has_edge(c, d)
                            && !g.has_edge(a, c)
                            && !g.has_edge(a, d)
                            && !g.has_edge(b, c)
                            && !g.has_edge(b, d);
                        let rest = (0..n)
                            .filter(|v| !q.contains(v))
                            .all(|v| g.has_edge(v, a) == g.has_edge(v, c) && g.has_edge(v, b) == g.has_edge(v, d));
                        if shape && rest {
                            out.insert(canonical_diamond(a, b, c, d));
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn complete_on_small_graphs() {
        for d in 4..=8 {
            for seed in 0..40 {
                for p in [0.2, 0.5, 0.9] {
                    let g = sample_hl(&EnsembleParams::new(d, d, p, seed).unwrap()).unwrap();
                    let t: BTreeSet<(usize, usize)> =
                        find_triangles(&g, d).iter().map(|c| (c.vertices[0], c.vertices[1])).collect();
                    assert_eq!(t, brute_triangles(&g));
                    let found = find_diamonds(&g, d);
                    let q: BTreeSet<[usize; 4]> = found
                        .iter()
                        .map(|c| [c.vertices[0], c.vertices[1], c.vertices[2], c.vertices[3]])
                        .collect();
                    assert_eq!(q, brute_diamonds(&g));
                    assert_eq!(found.len(), 2 * q.len());
                }
            }
        }
    }
}
