//! Householder tridiagonalization followed by implicit-shift QL iteration.
//!
//! Eigenvectors are accumulated as *rows* so that every rotation and every
//! reflection touches contiguous memory. Only the lower triangle of the input
//! is read.

use super::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::{axpy, dot, Real};

const MAX_SWEEPS: usize = 60;

/// Lower-triangular Householder reduction `A = Q T Q^T`.
struct Reduction<T> {
    /// Row `i` holds the reflection vector `u_i` in its first `i` entries.
    work: DenseMatrix<T>,
    /// `H_i = |u_i|^2 / 2`; zero means no reflection was applied at step `i`.
    scale: Vec<T>,
    diag: Vec<T>,
    off: Vec<T>,
}

fn tridiagonalize<T: Real>(mut a: DenseMatrix<T>) -> Reduction<T> {
    let n = a.rows();
    let mut off = vec![T::zero(); n];
    let mut hs = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    let mut u = vec![T::zero(); n];

    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = T::zero();
        if l == 0 {
            off[i] = a[(i, l)];
            hs[i] = h;
            continue;
        }
        let scale: T = a.row(i)[..i].iter().map(|x| x.abs()).sum();
        if scale == T::zero() {
            off[i] = a[(i, l)];
            hs[i] = h;
            continue;
        }
        for x in &mut a.row_mut(i)[..i] {
            *x /= scale;
            h += *x * *x;
        }
        let f = a[(i, l)];
        let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
        off[i] = scale * g;
        h -= f * g;
        a[(i, l)] = f - g;
        u[..i].copy_from_slice(&a.row(i)[..i]);

        // p = A u over the leading i x i block, lower triangle only
        p[..i].iter_mut().for_each(|x| *x = T::zero());
        for j in 0..i {
            let row = &a.row(j)[..=j];
            p[j] += dot(row, &u[..=j]);
            axpy(u[j], &row[..j], &mut p[..j]);
        }
        let mut up = T::zero();
        for j in 0..i {
            p[j] /= h;
            up += p[j] * u[j];
        }
        let k = up / (h + h);
        for j in 0..i {
            p[j] -= k * u[j];
        }
        // A <- A - q u^T - u q^T
        for j in 0..i {
            let (uj, qj) = (u[j], p[j]);
            let row = &mut a.row_mut(j)[..=j];
            for ((x, &qk), &uk) in row.iter_mut().zip(&p[..=j]).zip(&u[..=j]) {
                *x -= uj * qk + qj * uk;
            }
        }
        hs[i] = h;
    }

    let diag = (0..n).map(|i| a[(i, i)]).collect();
    Reduction { work: a, scale: hs, diag, off }
}

/// Implicit QL on a symmetric tridiagonal matrix. `off[i]` couples `i-1` and
/// `i` on entry. When `rows` is given, rotations are applied to its rows.
fn tridiagonal_ql<T: Real>(
    d: &mut [T],
    e: &mut [T],
    mut rows: Option<&mut DenseMatrix<T>>,
) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    let two = T::two();
    // absolute floor: without it a large null space is chased down to underflow
    let tnorm = d.iter().zip(e.iter()).map(|(a, b)| a.abs() + b.abs()).fold(T::zero(), T::max);
    let floor = T::epsilon() * tnorm;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence(l));
            }

            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            let shifted = if g >= T::zero() { g + r } else { g - r };
            g = d[m] - d[l] + e[l] / shifted;
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = rows.as_deref_mut() {
                    rotate_rows(z, i, s, c);
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

#[inline]
fn rotate_rows<T: Real>(z: &mut DenseMatrix<T>, i: usize, s: T, c: T) {
    let n = z.cols;
    let (lo, hi) = z.data.split_at_mut((i + 1) * n);
    let zi = &mut lo[i * n..];
    let zj = &mut hi[..n];
    for (a, b) in zi.iter_mut().zip(zj.iter_mut()) {
        let f = *b;
        *b = s * *a + c * f;
        *a = c * *a - s * f;
    }
}

/// Applies `Q = P_{n-1} ... P_1` to every row of `vectors`.
fn back_transform<T: Real>(red: &Reduction<T>, vectors: &mut DenseMatrix<T>) {
    const BLOCK: usize = 8;
    let n = vectors.cols;
    let nrows = vectors.rows;
    let mut start = 0;
    while start < nrows {
        let stop = (start + BLOCK).min(nrows);
        for i in 1..n {
            let h = red.scale[i];
            if h == T::zero() {
                continue;
            }
            let u = &red.work.row(i)[..i];
            for r in start..stop {
                let w = &mut vectors.data[r * n..r * n + i];
                let s = dot(u, w) / h;
                axpy(-s, u, w);
            }
        }
        start = stop;
    }
}

fn sort_ascending<T: Real>(values: &mut Vec<T>, vectors: Option<&mut DenseMatrix<T>>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("NaN eigenvalue"));
    *values = order.iter().map(|&k| values[k]).collect();
    if let Some(v) = vectors {
        let n = v.cols;
        let mut data = Vec::with_capacity(v.data.len());
        for &k in &order {
            data.extend_from_slice(&v.data[k * n..(k + 1) * n]);
        }
        v.data = data;
    }
}

/// Eigenvalues (ascending) and eigenvectors of a symmetric matrix. Row `k` of
/// the returned matrix is the unit eigenvector for eigenvalue `k`.
pub fn symmetric_eigen<T: Real>(m: &DenseMatrix<T>) -> Result<(Vec<T>, DenseMatrix<T>)> {
    assert!(m.is_square(), "eigendecomposition needs a square matrix");
    let n = m.rows();
    let red = tridiagonalize(m.clone());
    let mut d = red.diag.clone();
    let mut e = red.off.clone();
    let mut z = DenseMatrix::identity(n);
    tridiagonal_ql(&mut d, &mut e, Some(&mut z))?;
    back_transform(&red, &mut z);
    sort_ascending(&mut d, Some(&mut z));
    Ok((d, z))
}

/// Eigenvalues only, ascending.
pub fn symmetric_eigenvalues<T: Real>(m: &DenseMatrix<T>) -> Result<Vec<T>> {
    assert!(m.is_square(), "eigendecomposition needs a square matrix");
    let red = tridiagonalize(m.clone());
    let mut d = red.diag;
    let mut e = red.off;
    tridiagonal_ql(&mut d, &mut e, None)?;
    sort_ascending(&mut d, None);
    Ok(d)
}
