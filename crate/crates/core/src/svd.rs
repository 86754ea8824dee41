//! Singular value decomposition of small dense complex matrices.
//!
//! One-sided Jacobi: unitary plane rotations are applied on the right until
//! all column pairs are orthogonal. The column norms are then the singular
//! values, the normalized columns the left vectors, and the accumulated
//! rotations the right vectors, so `a = u * diag(sigma) * v^H`.
//!
//! Every matrix this engine factors is tiny (tens of rows at most), where
//! Jacobi is both fast and accurate to a few ulps, and the fixed sweep
//! order keeps results bit-deterministic.

use num_complex::Complex64;

const MAX_SWEEPS: usize = 64;
/// Column pair (p, q) counts as orthogonal when |<p,q>|^2 <= TOL^2 |p|^2 |q|^2.
const ORTHO_TOL: f64 = 1e-15;

pub(crate) struct Svd {
    /// Left singular vectors, one column per singular value.
    pub u: Vec<Vec<Complex64>>,
    /// Singular values in descending order.
    pub sigma: Vec<f64>,
    /// Right singular vectors, one column per singular value.
    pub v: Vec<Vec<Complex64>>,
}

fn col_dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn col_norm_sq(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// Right-multiply columns p and q by the unitary plane rotation:
/// `col_p <- c col_p - s ph col_q`, `col_q <- s col_p + c ph col_q`.
fn rotate_columns(
    m: &mut [Vec<Complex64>],
    p: usize,
    q: usize,
    c: f64,
    s: f64,
    rephase: Complex64,
) {
    debug_assert!(p < q);
    let (head, tail) = m.split_at_mut(q);
    let sr = s * rephase;
    let cr = c * rephase;
    for (x, y) in head[p].iter_mut().zip(tail[0].iter_mut()) {
        let xp = *x;
        let yq = *y;
        *x = c * xp - sr * yq;
        *y = s * xp + cr * yq;
    }
}

/// Decompose a row-major `rows x cols` matrix. Returns min(rows, cols)
/// singular triplets, zeros included.
pub(crate) fn jacobi_svd(matrix: &[Vec<Complex64>]) -> Svd {
    let rows = matrix.len();
    let cols = if rows == 0 { 0 } else { matrix[0].len() };
    // Work on columns.
    let mut a: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..rows).map(|i| matrix[i][j]).collect())
        .collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| {
            (0..cols)
                .map(|i| {
                    if i == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha = col_norm_sq(&a[p]);
                let beta = col_norm_sq(&a[q]);
                let gamma = col_dot(&a[p], &a[q]);
                let g = gamma.norm();
                if g * g <= ORTHO_TOL * ORTHO_TOL * alpha * beta {
                    continue;
                }
                rotated = true;
                // Rephase column q so <p,q> becomes real positive, then a
                // real Jacobi rotation diagonalizes [[alpha, g], [g, beta]].
                let rephase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                rotate_columns(&mut a, p, q, c, s, rephase);
                rotate_columns(&mut v, p, q, c, s, rephase);
            }
        }
        if !rotated {
            break;
        }
    }

    // Norms are the singular values; order descending (stable, so equal
    // values keep their column order).
    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = a.iter().map(|col| col_norm_sq(col).sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let keep = rows.min(cols);
    let mut u = Vec::with_capacity(keep);
    let mut sigma = Vec::with_capacity(keep);
    let mut vout = Vec::with_capacity(keep);
    for &j in order.iter().take(keep) {
        let n = norms[j];
        sigma.push(n);
        if n > 1e-200 {
            u.push(a[j].iter().map(|x| x / n).collect());
        } else {
            u.push(vec![Complex64::new(0.0, 0.0); rows]);
        }
        vout.push(v[j].clone());
    }
    Svd { u, sigma, v: vout }
}
