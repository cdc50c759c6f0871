//! A Hamiltonian path through the allowed grid along backbone steps.

use super::CoupledBasis;
use crate::error::{Error, Result};

/// Rows `i < D'` are swept in full, alternating direction so that the last of
/// them ends at column 0; the remaining rows then zig-zag over `j < D'`.
/// Consecutive states differ by one in exactly one label.
pub fn hamiltonian_path_order(basis: &CoupledBasis) -> Result<Vec<usize>> {
    let (d, dp) = (basis.d(), basis.d_prime());
    let mut order = Vec::with_capacity(basis.len());
    for i in 0..dp {
        let reversed = (dp - 1 - i) % 2 == 0;
        let cols: Box<dyn Iterator<Item = usize>> =
            if reversed { Box::new((0..d).rev()) } else { Box::new(0..d) };
        for j in cols {
            order.push(basis.index_of(i, j).expect("rows below the cutoff are complete"));
        }
    }
    for i in dp..d {
        let forward = (i - dp) % 2 == 0;
        let cols: Box<dyn Iterator<Item = usize>> =
            if forward { Box::new(0..dp) } else { Box::new((0..dp).rev()) };
        for j in cols {
            order.push(basis.index_of(i, j).expect("columns below the cutoff are allowed"));
        }
    }
    validate_path(basis, &order)?;
    Ok(order)
}

/// Checks that `order` visits every state once through backbone steps.
pub fn validate_path(basis: &CoupledBasis, order: &[usize]) -> Result<()> {
    if order.len() != basis.len() {
        return Err(Error::PathBroken(order.len(), basis.len()));
    }
    let mut seen = vec![false; basis.len()];
    for (k, &s) in order.iter().enumerate() {
        if s >= basis.len() || std::mem::replace(&mut seen[s], true) {
            return Err(Error::PathBroken(k, s));
        }
        if k > 0 {
            let ((a, b), (c, e)) = (basis.pair(order[k - 1]), basis.pair(s));
            if a.abs_diff(c) + b.abs_diff(e) != 1 {
                return Err(Error::PathBroken(k - 1, k));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::couple;
    use crate::fib_basis::pxp_gray;

    #[test]
    fn paths_exist() {
        for (d, dp) in [(5, 3), (4, 2), (6, 6), (7, 1), (40, 34), (3, 1)] {
            let b = CoupledBasis::new(d, dp).unwrap();
            let order = hamiltonian_path_order(&b).unwrap();
            assert_eq!(order.len(), b.len());
        }
    }

    #[test]
    fn full_grid_is_boustrophedon() {
        let b = CoupledBasis::new(3, 3).unwrap();
        let order = hamiltonian_path_order(&b).unwrap();
        let pairs: Vec<_> = order.iter().map(|&k| b.pair(k)).collect();
        assert_eq!(
            pairs,
            [(0, 2), (0, 1), (0, 0), (1, 0), (1, 1), (1, 2), (2, 2), (2, 1), (2, 0)]
        );
    }

    #[test]
    fn broken_paths_rejected() {
        let b = CoupledBasis::new(3, 2).unwrap();
        let mut order = hamiltonian_path_order(&b).unwrap();
        order.swap(0, 1);
        assert!(validate_path(&b, &order).is_err());
        assert!(validate_path(&b, &order[1..]).is_err());
    }

    #[test]
    fn gray_pxp_grid_skew_diagonal() {
        // three-site chains in Gray order coupled at D' = F_4 = 3
        let c = couple(&pxp_gray(3).unwrap(), 3).unwrap();
        let order = hamiltonian_path_order(c.basis()).unwrap();
        let relabelled = c.graph().permuted(&order).unwrap();
        for k in 1..relabelled.n_vertices() {
            assert!(relabelled.has_edge(k - 1, k));
        }
        let skew: Vec<(usize, usize)> = relabelled
            .edges()
            .map(|(i, j)| (i + 1, j + 1))
            .filter(|(i, j)| i + j == 21)
            .collect();
        assert_eq!(skew, [(6, 15), (7, 14), (8, 13), (9, 12), (10, 11)]);
    }
}
