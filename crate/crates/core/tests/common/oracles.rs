//! Independent reference computations used to check the library.
//!
//! None of these go through the Jacobi solver or the spectral calculus.

#![allow(dead_code)]

use frame_rkhs::FrameSystem;
use ndarray::{Array1, Array2};

/// Largest eigenvalue of a symmetric PSD matrix by power iteration, returned
/// as the final Rayleigh quotient.
pub fn power_iteration(a: &Array2<f64>, steps: usize) -> f64 {
    let n = a.nrows();
    let mut v = Array1::from_shape_fn(n, |i| 1.0 + 0.01 * i as f64);
    v /= v.dot(&v).sqrt();
    for _ in 0..steps {
        let w = a.dot(&v);
        let norm = w.dot(&w).sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        v = w / norm;
    }
    v.dot(&a.dot(&v))
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: &Array2<f64>, b: &Array1<f64>) -> Array1<f64> {
    let n = a.nrows();
    let mut m = a.clone();
    let mut x = b.clone();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[[i, col]].abs().total_cmp(&m[[j, col]].abs()))
            .unwrap();
        if pivot != col {
            for k in 0..n {
                m.swap([col, k], [pivot, k]);
            }
            x.swap(col, pivot);
        }
        for row in (col + 1)..n {
            let f = m[[row, col]] / m[[col, col]];
            for k in col..n {
                m[[row, k]] -= f * m[[col, k]];
            }
            x[row] -= f * x[col];
        }
    }
    for row in (0..n).rev() {
        let mut s = x[row];
        for k in (row + 1)..n {
            s -= m[[row, k]] * x[k];
        }
        x[row] = s / m[[row, row]];
    }
    x
}

/// Smallest eigenvalue of a symmetric positive definite matrix by inverse
/// iteration (Rayleigh quotient of the final iterate).
pub fn inverse_iteration(a: &Array2<f64>, steps: usize) -> f64 {
    let n = a.nrows();
    let mut v = Array1::from_shape_fn(n, |i| if i % 2 == 0 { 1.0f64 } else { -1.0 });
    v /= v.dot(&v).sqrt();
    for _ in 0..steps {
        let w = solve(a, &v);
        v = &w / w.dot(&w).sqrt();
    }
    v.dot(&a.dot(&v))
}

/// Orthonormal basis of the span of the frame vectors in the weighted inner
/// product, by modified Gram–Schmidt with one re-orthogonalization pass.
/// Vectors whose residual falls below `rel_tol` times their norm are dropped.
pub fn gram_schmidt_basis(fs: &FrameSystem, rel_tol: f64) -> Vec<Array1<f64>> {
    let w = Array1::from(fs.grid().weights().to_vec());
    let inner = |a: &Array1<f64>, b: &Array1<f64>| (a * b * &w).sum();
    let mut basis: Vec<Array1<f64>> = Vec::new();
    for n in 0..fs.len() {
        let original = fs.vector(n).to_owned();
        let norm0 = inner(&original, &original).sqrt();
        if norm0 == 0.0 {
            continue;
        }
        let mut v = original;
        for _ in 0..2 {
            for e in &basis {
                let p = inner(e, &v);
                v = v - e * p;
            }
        }
        let norm = inner(&v, &v).sqrt();
        if norm > rel_tol * norm0 {
            basis.push(v / norm);
        }
    }
    basis
}

/// `Σ_k e_k(s) e_k(t)` over a weighted orthonormal basis of the span.
pub fn gram_schmidt_kernel(fs: &FrameSystem, rel_tol: f64) -> Array2<f64> {
    let m = fs.n_points();
    let mut k = Array2::zeros((m, m));
    for e in gram_schmidt_basis(fs, rel_tol) {
        for s in 0..m {
            for t in 0..m {
                k[[s, t]] += e[s] * e[t];
            }
        }
    }
    k
}

/// Orthogonal projection of `f` onto the span, via the Gram–Schmidt basis.
pub fn project_onto_span(fs: &FrameSystem, f: &[f64], rel_tol: f64) -> Vec<f64> {
    let w = fs.grid().weights();
    let mut out = vec![0.0; f.len()];
    for e in gram_schmidt_basis(fs, rel_tol) {
        let p: f64 = (0..f.len()).map(|i| w[i] * e[i] * f[i]).sum();
        for i in 0..f.len() {
            out[i] += p * e[i];
        }
    }
    out
}

/// Brute-force `Σ_i Σ_j c_i c_j k[i][j]`.
pub fn double_sum(k: &Array2<f64>, c: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..c.len() {
        for j in 0..c.len() {
            s += c[i] * c[j] * k[[i, j]];
        }
    }
    s
}

/// Brute-force Gramian `Σ_i w_i φ_m(t_i) φ_n(t_i)`.
pub fn gramian_by_loops(fs: &FrameSystem) -> Array2<f64> {
    let (n, m) = (fs.len(), fs.n_points());
    let w = fs.grid().weights();
    let phi = fs.vectors();
    let mut g = Array2::zeros((n, n));
    for a in 0..n {
        for b in 0..n {
            let mut s = 0.0;
            for i in 0..m {
                s += w[i] * phi[[a, i]] * phi[[b, i]];
            }
            g[[a, b]] = s;
        }
    }
    g
}

/// Coefficients `(e1, e2, e3)` of `det(λI − A) = λ³ − e1 λ² + e2 λ − e3`
/// for a 3×3 matrix: trace, sum of principal 2×2 minors, determinant.
pub fn char_poly_3x3(a: &Array2<f64>) -> (f64, f64, f64) {
    let e1 = a[[0, 0]] + a[[1, 1]] + a[[2, 2]];
    let minor = |i: usize, j: usize| a[[i, i]] * a[[j, j]] - a[[i, j]] * a[[j, i]];
    let e2 = minor(0, 1) + minor(0, 2) + minor(1, 2);
    let e3 = a[[0, 0]] * (a[[1, 1]] * a[[2, 2]] - a[[1, 2]] * a[[2, 1]])
        - a[[0, 1]] * (a[[1, 0]] * a[[2, 2]] - a[[1, 2]] * a[[2, 0]])
        + a[[0, 2]] * (a[[1, 0]] * a[[2, 1]] - a[[1, 1]] * a[[2, 0]]);
    (e1, e2, e3)
}

/// Matrix square root of the weighted frame operator, `S^{1/2}`, built from
/// the symmetric matrix `A = W^{1/2} Φᵀ Φ W^{1/2}` by Denman–Beavers
/// iteration. No eigendecomposition is involved. Requires `A` to be positive
/// definite, i.e. the system must span the grid functions.
pub fn frame_operator_sqrt(fs: &FrameSystem) -> Array2<f64> {
    let m = fs.n_points();
    let w = fs.grid().weights();
    let phi = fs.vectors();
    let a = Array2::from_shape_fn((m, m), |(i, j)| {
        let mut s = 0.0;
        for n in 0..fs.len() {
            s += phi[[n, i]] * phi[[n, j]];
        }
        s * w[i].sqrt() * w[j].sqrt()
    });
    let root = denman_beavers(&a, 100);
    // S^{1/2} = W^{-1/2} A^{1/2} W^{1/2}
    Array2::from_shape_fn((m, m), |(i, j)| root[[i, j]] * w[j].sqrt() / w[i].sqrt())
}

/// Inverse of a square matrix, one column solve at a time.
pub fn invert(a: &Array2<f64>) -> Array2<f64> {
    let n = a.nrows();
    let mut out = Array2::zeros((n, n));
    for j in 0..n {
        let mut e = Array1::zeros(n);
        e[j] = 1.0;
        out.column_mut(j).assign(&solve(a, &e));
    }
    out
}

/// Principal square root of an SPD matrix by Denman–Beavers iteration.
pub fn denman_beavers(a: &Array2<f64>, steps: usize) -> Array2<f64> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = Array2::eye(n);
    for _ in 0..steps {
        let yi = invert(&y);
        let zi = invert(&z);
        let y_next = (&y + &zi) * 0.5;
        let z_next = (&z + &yi) * 0.5;
        let delta = (&y_next - &y).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        y = y_next;
        z = z_next;
        if delta < 1e-15 {
            break;
        }
    }
    y
}

pub fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    (a - b).iter().fold(0.0, |m, v| m.max(v.abs()))
}
