//! Three routes to the PXP adjacency matrix plus the Gray-code ordering.

use super::{fib, zeckendorf_basis, zeckendorf_index, PxpConfig};
use crate::error::{Error, Result};
use crate::graph::BinaryGraph;

/// Largest chain handled by the dense-bitset graph (F_22 = 17711 vertices).
pub const MAX_SITES: usize = 20;

fn check_len(len: usize, min: usize) -> Result<()> {
    if len < min || len > MAX_SITES {
        return Err(Error::InvalidSize(format!(
            "chain length {len} outside supported range {min}..={MAX_SITES}"
        )));
    }
    Ok(())
}

/// Flip graph of the constrained chain, vertices in Zeckendorf order.
pub fn pxp_direct(len: usize) -> Result<BinaryGraph> {
    check_len(len, 1)?;
    let basis = zeckendorf_basis(len)?;
    let mut g = BinaryGraph::new(basis.len());
    for (a, cfg) in basis.iter().enumerate() {
        for site in 0..len {
            if let Some(next) = cfg.flipped(site) {
                let b = zeckendorf_index(next.sites());
                if a < b {
                    g.add_edge(a, b)?;
                }
            }
        }
    }
    Ok(g)
}

/// Block recursion `H(L+1) = [[H(L), P], [Pᵀ, H(L-1)]]`, seeded with the
/// one-site matrix and the (trivial) zero-site matrix.
pub fn pxp_recursive(len: usize) -> Result<BinaryGraph> {
    check_len(len, 1)?;
    let mut older = BinaryGraph::new(1);
    let mut cur = BinaryGraph::from_edges(2, [(0, 1)])?;
    for _ in 1..len {
        let upper = cur.n_vertices();
        let lower = older.n_vertices();
        let mut next = BinaryGraph::new(upper + lower);
        for (i, j) in cur.edges() {
            next.add_edge(i, j)?;
        }
        for (i, j) in older.edges() {
            next.add_edge(upper + i, upper + j)?;
        }
        // P has ones on its leading diagonal
        for k in 0..lower {
            next.add_edge(k, upper + k)?;
        }
        older = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

fn int_matmul(a: &[i64], b: &[i64], n: usize, k: usize, m: usize) -> Vec<i64> {
    let mut out = vec![0i64; n * m];
    for i in 0..n {
        for l in 0..k {
            let x = a[i * k + l];
            if x != 0 {
                for j in 0..m {
                    out[i * m + j] += x * b[l * m + j];
                }
            }
        }
    }
    out
}

/// One duplication-and-projection step: given the `L`-site matrix, returns
/// `Πᵀ (H □ K₂) Π` with `Π = diag(1, P)` and `P` of shape `F_{L+2} × F_{L+1}`.
pub fn k2_step(h: &BinaryGraph, len: usize) -> Result<BinaryGraph> {
    let n = fib(len + 2);
    let keep = fib(len + 1);
    if h.n_vertices() != n {
        return Err(Error::InvalidSize(format!(
            "expected {n} vertices for {len} sites, got {}",
            h.n_vertices()
        )));
    }
    let big = 2 * n;
    let out = n + keep;
    let mut prod = vec![0i64; big * big];
    for (i, j) in h.edges() {
        for off in [0, n] {
            prod[(i + off) * big + j + off] = 1;
            prod[(j + off) * big + i + off] = 1;
        }
    }
    for i in 0..n {
        prod[i * big + n + i] = 1;
        prod[(n + i) * big + i] = 1;
    }
    let mut pi = vec![0i64; big * out];
    for i in 0..n {
        pi[i * out + i] = 1;
    }
    for k in 0..keep {
        pi[(n + k) * out + n + k] = 1;
    }
    let mut pi_t = vec![0i64; out * big];
    for r in 0..big {
        for c in 0..out {
            pi_t[c * big + r] = pi[r * out + c];
        }
    }
    let right = int_matmul(&prod, &pi, big, big, out);
    let full = int_matmul(&pi_t, &right, out, big, out);
    let mut g = BinaryGraph::new(out);
    for i in 0..out {
        for j in i + 1..out {
            match full[i * out + j] {
                0 => {}
                1 => {
                    g.add_edge(i, j)?;
                }
                v => return Err(Error::InvalidParameter(format!("entry {v} at ({i},{j}) is not 0/1"))),
            }
        }
    }
    Ok(g)
}

/// The `(L+1)`-site matrix reached by iterating [`k2_step`] from one site.
pub fn pxp_k2_product(len: usize) -> Result<BinaryGraph> {
    check_len(len + 1, 2)?;
    let mut h = BinaryGraph::from_edges(2, [(0, 1)])?;
    for sites in 1..=len {
        h = k2_step(&h, sites)?;
    }
    Ok(h)
}

/// Recursive Gray ordering `B_L = (∘ ⊗ rev B_{L-1}, •∘ ⊗ rev B_{L-2})`.
pub fn gray_order(len: usize) -> Result<Vec<PxpConfig>> {
    check_len(len, 1)?;
    let parse = |s: &str| PxpConfig::parse(s).expect("seed string");
    let mut older: Vec<PxpConfig> = ["0", "1"].iter().map(|s| parse(s)).collect();
    if len == 1 {
        return Ok(older);
    }
    let mut cur: Vec<PxpConfig> = ["01", "00", "10"].iter().map(|s| parse(s)).collect();
    for _ in 2..len {
        let mut next = Vec::with_capacity(cur.len() + older.len());
        for c in cur.iter().rev() {
            let mut sites = vec![false];
            sites.extend_from_slice(c.sites());
            next.push(PxpConfig::new(sites)?);
        }
        for c in older.iter().rev() {
            let mut sites = vec![true, false];
            sites.extend_from_slice(c.sites());
            next.push(PxpConfig::new(sites)?);
        }
        older = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// [`pxp_direct`] relabelled so that vertex `k` is the `k`-th Gray state.
pub fn pxp_gray(len: usize) -> Result<BinaryGraph> {
    let order: Vec<usize> = gray_order(len)?.iter().map(|c| zeckendorf_index(c.sites())).collect();
    pxp_direct(len)?.permuted(&order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&str]) -> BinaryGraph {
        let n = rows.len();
        let mut g = BinaryGraph::new(n);
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in r.chars().enumerate() {
                if c == '1' && i < j {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        g
    }

    fn printed_h3() -> BinaryGraph {
        from_rows(&["011", "100", "100"])
    }

    fn printed_h4() -> BinaryGraph {
        from_rows(&["01110", "10001", "10000", "10001", "01010"])
    }

    #[test]
    fn printed_matrices() {
        assert_eq!(pxp_direct(1).unwrap().edge_count(), 1);
        assert_eq!(pxp_direct(2).unwrap(), printed_h3());
        assert_eq!(pxp_direct(3).unwrap(), printed_h4());
        assert_eq!(pxp_recursive(2).unwrap(), printed_h3());
        assert_eq!(pxp_recursive(3).unwrap(), printed_h4());
        assert_eq!(pxp_k2_product(1).unwrap(), printed_h3());
        assert_eq!(pxp_k2_product(2).unwrap(), printed_h4());
    }

    #[test]
    fn constructions_agree() {
        for len in 1..=12 {
            let direct = pxp_direct(len).unwrap();
            assert_eq!(direct.n_vertices(), fib(len + 2));
            assert_eq!(pxp_recursive(len).unwrap(), direct, "L={len}");
        }
        for len in 2..=11 {
            assert_eq!(pxp_k2_product(len).unwrap(), pxp_direct(len + 1).unwrap(), "L={len}");
        }
    }

    #[test]
    fn vertex_counts_up_to_sixteen() {
        for len in 1..=16 {
            assert_eq!(pxp_recursive(len).unwrap().n_vertices(), fib(len + 2));
        }
        assert_eq!(pxp_direct(6).unwrap().n_vertices(), 21);
    }

    #[test]
    fn gray_seeds() {
        let b3: Vec<String> = gray_order(3).unwrap().iter().map(|c| c.to_string()).collect();
        assert_eq!(b3, ["∘•∘", "∘∘∘", "∘∘•", "•∘•", "•∘∘"]);
        let b1: Vec<String> = gray_order(1).unwrap().iter().map(|c| c.to_string()).collect();
        assert_eq!(b1, ["∘", "•"]);
    }

    #[test]
    fn gray_is_hamiltonian_path() {
        for len in 1..=12 {
            let order = gray_order(len).unwrap();
            assert_eq!(order.len(), fib(len + 2));
            let mut seen: Vec<usize> = order.iter().map(|c| zeckendorf_index(c.sites())).collect();
            for w in order.windows(2) {
                assert_eq!(w[0].hamming(&w[1]), 1);
            }
            seen.sort_unstable();
            assert!(seen.iter().enumerate().all(|(k, &v)| k == v));
            let g = pxp_gray(len).unwrap();
            for k in 1..g.n_vertices() {
                assert!(g.has_edge(k - 1, k));
            }
        }
    }

    #[test]
    fn gray_six_skew_entries() {
        let g = pxp_gray(6).unwrap();
        let skew: Vec<(usize, usize)> =
            g.edges().map(|(i, j)| (i + 1, j + 1)).filter(|(i, j)| i + j == 21).collect();
        assert_eq!(skew, [(8, 13), (9, 12), (10, 11)]);
    }

    #[test]
    fn bad_lengths() {
        assert!(pxp_direct(0).is_err());
        assert!(pxp_direct(MAX_SITES + 1).is_err());
        assert!(pxp_k2_product(0).is_err());
        assert!(k2_step(&BinaryGraph::new(4), 2).is_err());
    }
}
