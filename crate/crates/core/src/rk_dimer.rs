//! The `2 × L` quantum dimer ladder at the Rokhsar-Kivelson point.
//!
//! A ladder of `L` rungs has `F_{L+1}` dimer coverings. Square `k` between
//! rungs `k` and `k+1` is identified with PXP site `k` (occupied when the two
//! rungs hold a horizontal dimer pair), so all matrices live on the PXP
//! chain of `L - 1` sites.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::entanglement::{entropy_of_weights, schmidt_weights};
use crate::error::{Error, Result};
use crate::fib_basis::{fib, fibonacci, pxp_direct, zeckendorf_basis, zeckendorf_index, PxpConfig, SignDiagonal};
use crate::linalg::DenseMatrix;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rung {
    Vertical,
    /// Left end of a horizontal pair with the next rung.
    PairStart,
    /// Right end of a horizontal pair with the previous rung.
    PairEnd,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LadderConfig {
    rungs: Vec<Rung>,
}

impl LadderConfig {
    pub fn new(rungs: Vec<Rung>) -> Result<Self> {
        if rungs.len() < 2 {
            return Err(Error::InvalidSize("a ladder needs at least two rungs".into()));
        }
        for (k, r) in rungs.iter().enumerate() {
            let ok = match r {
                Rung::Vertical => true,
                Rung::PairStart => rungs.get(k + 1) == Some(&Rung::PairEnd),
                Rung::PairEnd => k > 0 && rungs[k - 1] == Rung::PairStart,
            };
            if !ok {
                return Err(Error::ConstraintViolation(k + 1, k + 2));
            }
        }
        Ok(Self { rungs })
    }

    pub fn rungs(&self) -> &[Rung] {
        &self.rungs
    }

    pub fn len(&self) -> usize {
        self.rungs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rungs.is_empty()
    }

    pub fn horizontal_pairs(&self) -> usize {
        self.rungs.iter().filter(|&&r| r == Rung::PairStart).count()
    }

    pub fn to_pxp(&self) -> PxpConfig {
        let sites = self.rungs[..self.rungs.len() - 1].iter().map(|&r| r == Rung::PairStart).collect();
        PxpConfig::new(sites).expect("valid ladders map to valid strings")
    }

    pub fn from_pxp(cfg: &PxpConfig) -> Self {
        let mut rungs = vec![Rung::Vertical; cfg.len() + 1];
        for (k, &s) in cfg.sites().iter().enumerate() {
            if s {
                rungs[k] = Rung::PairStart;
                rungs[k + 1] = Rung::PairEnd;
            }
        }
        Self { rungs }
    }
}

impl fmt::Display for LadderConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rungs {
            f.write_str(match r {
                Rung::Vertical => "|",
                Rung::PairStart => "[",
                Rung::PairEnd => "]",
            })?;
        }
        Ok(())
    }
}

fn check_rungs(l_plaq: usize) -> Result<usize> {
    if l_plaq < 2 {
        return Err(Error::InvalidSize(format!("ladder length {l_plaq} must be at least 2")));
    }
    Ok(l_plaq - 1)
}

/// All coverings, ordered like the Zeckendorf basis of the PXP image.
pub fn dimer_pxp_map(l_plaq: usize) -> Result<Vec<LadderConfig>> {
    let n = check_rungs(l_plaq)?;
    Ok(zeckendorf_basis(n)?.iter().map(LadderConfig::from_pxp).collect())
}

/// Flippable squares of a PXP string: `Σ_k P_{k-1} P_{k+1}` with empty
/// projectors `P` and `P_0 = P_{n+1} = 1`.
pub fn flippable_count(cfg: &PxpConfig) -> usize {
    let s = cfg.sites();
    (0..s.len())
        .filter(|&k| !(k > 0 && s[k - 1]) && !(k + 1 < s.len() && s[k + 1]))
        .count()
}

/// Diagonal of `H_pot` in the Zeckendorf basis.
pub fn potential_diagonal<T: Real>(l_plaq: usize, v: T) -> Result<Vec<T>> {
    let n = check_rungs(l_plaq)?;
    Ok(zeckendorf_basis(n)?.iter().map(|c| v * T::of_usize(flippable_count(c))).collect())
}

/// `H_RK + H_pot` in the Zeckendorf basis.
pub fn rk_hamiltonian<T: Real>(l_plaq: usize, v: T) -> Result<DenseMatrix<T>> {
    let n = check_rungs(l_plaq)?;
    let mut h = pxp_direct(n)?.to_dense::<T>();
    for (k, x) in potential_diagonal(l_plaq, v)?.into_iter().enumerate() {
        h[(k, k)] = x;
    }
    Ok(h)
}

/// `W_s / √F_{L+1}` with `W_s = (-1)^{horizontal pairs}`.
pub fn rk_ground_state<T: Real>(l_plaq: usize) -> Result<Vec<T>> {
    let n = check_rungs(l_plaq)?;
    let amp = T::one() / T::of_usize(fib(n + 2)).sqrt();
    Ok(zeckendorf_basis(n)?
        .iter()
        .map(|c| if c.excitations() % 2 == 0 { amp } else { -amp })
        .collect())
}

/// Parity sign of the ladder states, mapping the signed state to the uniform one.
pub fn ladder_sign(l_plaq: usize) -> Result<SignDiagonal> {
    let n = check_rungs(l_plaq)?;
    SignDiagonal::new(zeckendorf_basis(n)?.iter().map(|c| if c.excitations() % 2 == 0 { 1 } else { -1 }).collect())
}

fn check_even(l_plaq: usize) -> Result<()> {
    if l_plaq < 4 || l_plaq % 2 == 1 {
        return Err(Error::InvalidParameter(format!("ladder length {l_plaq} must be even and at least 4")));
    }
    Ok(())
}

/// The two non-zero reduced-density eigenvalues `F_{L/2}²/F_{L+1}` and
/// `F_{L/2+1}²/F_{L+1}`.
pub fn rk_weights(l_plaq: usize) -> Result<[f64; 2]> {
    check_even(l_plaq)?;
    let total = fibonacci(l_plaq + 1)? as f64;
    let a = fibonacci(l_plaq / 2)? as f64;
    let b = fibonacci(l_plaq / 2 + 1)? as f64;
    Ok([a * a / total, b * b / total])
}

pub fn rk_entropy_exact(l_plaq: usize) -> Result<f64> {
    Ok(entropy_of_weights(&rk_weights(l_plaq)?))
}

/// Large-`L` limit of [`rk_entropy_exact`].
pub fn rk_entropy_asymptote() -> f64 {
    let s5 = 5f64.sqrt();
    let phi = (1.0 + s5) / 2.0;
    (5f64.ln() + 2.0 * phi.ln() - (3.0 + s5) * (phi / s5).ln()) / (5.0 + s5)
}

/// Coefficient matrix of a PXP-basis state across the cut after rung
/// `L/2`. The cut square is shared: rows are strings of squares
/// `1..=L/2`, columns strings of squares `L/2..`, and both must agree on it.
pub fn middle_cut_matrix<T: Real>(l_plaq: usize, state: &[T]) -> Result<DenseMatrix<T>> {
    check_even(l_plaq)?;
    let n = l_plaq - 1;
    let half = l_plaq / 2;
    let left = zeckendorf_basis(half)?;
    let right = zeckendorf_basis(n - half + 1)?;
    if state.len() != fib(n + 2) {
        return Err(Error::InvalidSize(format!("state of length {} for {n} sites", state.len())));
    }
    Ok(DenseMatrix::from_fn(left.len(), right.len(), |r, c| {
        let (a, b) = (left[r].sites(), right[c].sites());
        if a[half - 1] != b[0] {
            return T::zero();
        }
        let mut sites = a.to_vec();
        sites.extend_from_slice(&b[1..]);
        if sites.windows(2).any(|w| w[0] && w[1]) {
            return T::zero();
        }
        state[zeckendorf_index(&sites)]
    }))
}

/// Entropy of the RK state from its numerical Schmidt spectrum, computed on
/// the unsigned partner.
pub fn rk_entropy_numeric(l_plaq: usize) -> Result<f64> {
    let signed = rk_ground_state::<f64>(l_plaq)?;
    let unsigned = ladder_sign(l_plaq)?.apply(&signed);
    let w = schmidt_weights(&middle_cut_matrix(l_plaq, &unsigned)?)?;
    Ok(entropy_of_weights(&w))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RkRow {
    pub l_plaq: usize,
    pub entropy_exact: f64,
    pub entropy_numeric: f64,
    pub abs_diff: f64,
}

pub fn rk_table(sizes: impl IntoIterator<Item = usize>) -> Result<Vec<RkRow>> {
    sizes
        .into_iter()
        .map(|l| {
            let e = rk_entropy_exact(l)?;
            let n = rk_entropy_numeric(l)?;
            Ok(RkRow { l_plaq: l, entropy_exact: e, entropy_numeric: n, abs_diff: (e - n).abs() })
        })
        .collect()
}

pub fn rk_csv(rows: &[RkRow]) -> String {
    let mut out = String::from("L_plaq,entropy_exact,entropy_numeric,abs_diff\n");
    for r in rows {
        let _ = writeln!(out, "{},{:.16e},{:.16e},{:.16e}", r.l_plaq, r.entropy_exact, r.entropy_numeric, r.abs_diff);
    }
    out
}
