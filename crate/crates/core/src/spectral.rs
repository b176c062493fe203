//! Dense symmetric eigensystems and the spectral calculus built on them.
//!
//! Everything that needs `G⁻¹`, `G^{-1/2}` or a rank count goes through a
//! [`SpectralDecomposition`] produced by [`sym_eig`], a cyclic Jacobi solver.
//! Inverses are Moore–Penrose pseudo-inverses: an eigenvalue counts as part of
//! the range when `|λ| > rank_tol · max|λ|`, everything else maps to zero.

use ndarray::Array2;

use crate::error::{FrameError, Result};

/// Default relative threshold separating the range of a matrix from its kernel.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Eigenvalues in `[-PSD_JITTER, 0)` are treated as zero by [`inv_sqrt`].
pub const PSD_JITTER: f64 = 1e-12;

/// Sweep limit for the Jacobi solver.
pub const MAX_SWEEPS: usize = 100;

/// The solver stops once the off-diagonal Frobenius norm is below this
/// fraction of the input's Frobenius norm.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// A real symmetric matrix with finite entries.
///
/// Construction symmetrizes its input as `(A + Aᵀ)/2`, so `a[i][j] == a[j][i]`
/// holds bit-for-bit afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    data: Array2<f64>,
}

impl SymMatrix {
    pub fn new(a: Array2<f64>) -> Result<Self> {
        let (rows, cols) = a.dim();
        if rows == 0 || rows != cols {
            return Err(FrameError::InvalidMatrix(format!(
                "expected a non-empty square matrix, got {rows}x{cols}"
            )));
        }
        if let Some(bad) = a.iter().find(|v| !v.is_finite()) {
            return Err(FrameError::InvalidMatrix(format!("non-finite entry {bad}")));
        }
        let mut data = a;
        for i in 0..rows {
            for j in (i + 1)..rows {
                let avg = 0.5 * (data[[i, j]] + data[[j, i]]);
                data[[i, j]] = avg;
                data[[j, i]] = avg;
            }
        }
        Ok(Self { data })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(Array2::eye(n))
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        Self::new(Array2::from_shape_fn((n, n), |(i, j)| f(i, j)))
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn into_array(self) -> Array2<f64> {
        self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Eigenvalues in non-increasing order with matching orthonormal eigenvectors
/// (column `k` of `eigenvectors` belongs to `eigenvalues[k]`).
///
/// Each eigenvector is normalized so that its largest-magnitude component
/// (first one, on ties) is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Array2<f64>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Array2<f64> {
        &self.eigenvectors
    }

    pub fn source_dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// Largest eigenvalue magnitude; the reference scale for `rank_tol`.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Whether eigenvalue `k` belongs to the numerical range.
    pub fn is_retained(&self, k: usize, rank_tol: f64) -> bool {
        let radius = self.spectral_radius();
        radius > 0.0 && self.eigenvalues[k].abs() > rank_tol * radius
    }

    /// Number of eigenvalues with `|λ| > rank_tol · max|λ|`; zero for the zero matrix.
    pub fn rank(&self, rank_tol: f64) -> usize {
        (0..self.eigenvalues.len())
            .filter(|&k| self.is_retained(k, rank_tol))
            .count()
    }

    /// `Q · diag(f(λ)) · Qᵀ` where `f` is applied to retained eigenvalues and
    /// the rest of the spectrum maps to zero.
    pub fn map_retained(&self, rank_tol: f64, f: impl Fn(f64) -> f64) -> Result<SymMatrix> {
        check_rank_tol(rank_tol)?;
        let mapped: Vec<f64> = (0..self.eigenvalues.len())
            .map(|k| {
                if self.is_retained(k, rank_tol) {
                    f(self.eigenvalues[k])
                } else {
                    0.0
                }
            })
            .collect();
        self.with_spectrum(&mapped)
    }

    /// `Q · diag(λ) · Qᵀ`.
    pub fn reconstruct(&self) -> SymMatrix {
        self.with_spectrum(&self.eigenvalues)
            .expect("eigenvalues of a finite matrix are finite")
    }

    /// Orthogonal projector onto the retained eigenspace.
    pub fn range_projector(&self, rank_tol: f64) -> Result<SymMatrix> {
        self.map_retained(rank_tol, |_| 1.0)
    }

    fn with_spectrum(&self, values: &[f64]) -> Result<SymMatrix> {
        let q = &self.eigenvectors;
        let scaled = q * &ndarray::Array1::from(values.to_vec());
        SymMatrix::new(scaled.dot(&q.t()))
    }
}

fn check_rank_tol(rank_tol: f64) -> Result<()> {
    if rank_tol >= 0.0 && rank_tol.is_finite() {
        Ok(())
    } else {
        Err(FrameError::InvalidArgument(format!(
            "rank_tol must be a finite non-negative number, got {rank_tol}"
        )))
    }
}

/// Cyclic Jacobi eigendecomposition.
///
/// Rotations visit the pairs `(p, q)`, `p < q`, in row-major order. The solver
/// stops when the off-diagonal Frobenius norm drops to
/// `OFF_DIAGONAL_TOL · ‖A‖_F`, and fails after `MAX_SWEEPS` sweeps.
pub fn sym_eig(a: &SymMatrix) -> Result<SpectralDecomposition> {
    let n = a.dim();
    let mut m: Vec<f64> = a.as_array().iter().copied().collect();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let frobenius = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = OFF_DIAGONAL_TOL * frobenius;
    let off_norm = |m: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i * n + j] * m[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&m) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, n, p, q);
            }
        }
        sweeps += 1;
        converged = off_norm(&m) <= threshold;
    }
    if !converged {
        return Err(FrameError::NoConvergence { sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j * n + j].total_cmp(&m[i * n + i]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| m[k * n + k]).collect();
    let mut eigenvectors = Array2::zeros((n, n));
    for (col, &k) in order.iter().enumerate() {
        let mut lead = 0;
        for row in 0..n {
            if v[row * n + k].abs() > v[lead * n + k].abs() {
                lead = row;
            }
        }
        let sign = if v[lead * n + k] < 0.0 { -1.0 } else { 1.0 };
        for row in 0..n {
            eigenvectors[[row, col]] = sign * v[row * n + k];
        }
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

// One Jacobi rotation annihilating m[p][q]; m <- Jᵀ m J, v <- v J.
fn rotate(m: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = m[p * n + p];
    let aqq = m[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    // Smaller root of t² + 2θt − 1 = 0; θ = ±∞ means apq is negligible.
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    for k in 0..n {
        let akp = m[k * n + p];
        let akq = m[k * n + q];
        m[k * n + p] = c * akp - s * akq;
        m[k * n + q] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = m[p * n + k];
        let aqk = m[q * n + k];
        m[p * n + k] = c * apk - s * aqk;
        m[q * n + k] = s * apk + c * aqk;
    }
    m[p * n + q] = 0.0;
    m[q * n + p] = 0.0;

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
    }
}

/// Moore–Penrose pseudo-inverse through the spectrum: retained eigenvalues
/// are inverted, the rest map to zero. A matrix with nothing retained yields
/// the zero matrix (check [`SpectralDecomposition::rank`] for that case).
pub fn pinv(d: &SpectralDecomposition, rank_tol: f64) -> Result<SymMatrix> {
    d.map_retained(rank_tol, |l| 1.0 / l)
}

/// Pseudo-inverse square root of a positive semidefinite matrix.
///
/// Retained eigenvalues in `[-PSD_JITTER, 0)` are clamped to zero; anything
/// more negative is rejected.
pub fn inv_sqrt(d: &SpectralDecomposition, rank_tol: f64) -> Result<SymMatrix> {
    check_rank_tol(rank_tol)?;
    for k in 0..d.source_dim() {
        let l = d.eigenvalues()[k];
        if d.is_retained(k, rank_tol) && l < -PSD_JITTER {
            return Err(FrameError::NotPositiveSemidefinite(l));
        }
    }
    d.map_retained(rank_tol, |l| if l > 0.0 { 1.0 / l.sqrt() } else { 0.0 })
}

/// Square root of a positive semidefinite matrix, same clamping as [`inv_sqrt`].
pub fn sqrt_psd(d: &SpectralDecomposition, rank_tol: f64) -> Result<SymMatrix> {
    check_rank_tol(rank_tol)?;
    for k in 0..d.source_dim() {
        let l = d.eigenvalues()[k];
        if d.is_retained(k, rank_tol) && l < -PSD_JITTER {
            return Err(FrameError::NotPositiveSemidefinite(l));
        }
    }
    d.map_retained(rank_tol, |l| l.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn max_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
        (a - b).iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let d = sym_eig(&SymMatrix::identity(3).unwrap()).unwrap();
        assert_eq!(d.eigenvalues(), &[1.0, 1.0, 1.0]);
        let q = d.eigenvectors();
        assert!(max_diff(&q.t().dot(q), &Array2::eye(3)) <= 1e-15);
    }

    #[test]
    fn two_by_two_closed_form() {
        let a = SymMatrix::new(array![[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let d = sym_eig(&a).unwrap();
        assert!((d.eigenvalues()[0] - 3.0).abs() < 1e-14);
        assert!((d.eigenvalues()[1] - 1.0).abs() < 1e-14);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let q = d.eigenvectors();
        assert!((q[[0, 0]].abs() - r).abs() < 1e-14 && (q[[0, 0]] - q[[1, 0]]).abs() < 1e-14);
        assert!((q[[0, 1]].abs() - r).abs() < 1e-14 && (q[[0, 1]] + q[[1, 1]]).abs() < 1e-14);
    }

    #[test]
    fn construction_symmetrizes_and_rejects_bad_input() {
        let a = SymMatrix::new(array![[1.0, 2.0], [4.0, 1.0]]).unwrap();
        assert_eq!(a.as_array()[[0, 1]], 3.0);
        assert_eq!(a.as_array()[[1, 0]], 3.0);
        assert!(matches!(
            SymMatrix::new(array![[1.0, f64::NAN], [0.0, 1.0]]),
            Err(FrameError::InvalidMatrix(_))
        ));
        assert!(SymMatrix::new(Array2::zeros((2, 3))).is_err());
        assert!(SymMatrix::new(Array2::zeros((0, 0))).is_err());
    }

    #[test]
    fn pinv_of_identity_and_singular_diagonal() {
        let d = sym_eig(&SymMatrix::identity(4).unwrap()).unwrap();
        assert!(max_diff(pinv(&d, 1e-10).unwrap().as_array(), &Array2::eye(4)) < 1e-15);

        let d = sym_eig(&SymMatrix::new(array![[2.0, 0.0], [0.0, 0.0]]).unwrap()).unwrap();
        let p = pinv(&d, 1e-10).unwrap();
        assert!(max_diff(p.as_array(), &array![[0.5, 0.0], [0.0, 0.0]]) < 1e-15);
        assert_eq!(d.rank(1e-10), 1);
    }

    #[test]
    fn pinv_of_zero_matrix_is_zero_with_rank_zero() {
        let d = sym_eig(&SymMatrix::new(Array2::zeros((3, 3))).unwrap()).unwrap();
        assert_eq!(d.rank(1e-10), 0);
        assert_eq!(pinv(&d, 1e-10).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn inv_sqrt_examples() {
        let d = sym_eig(&SymMatrix::identity(2).unwrap()).unwrap();
        assert!(max_diff(inv_sqrt(&d, 1e-10).unwrap().as_array(), &Array2::eye(2)) < 1e-15);

        let d = sym_eig(&SymMatrix::new(array![[4.0, 0.0], [0.0, 9.0]]).unwrap()).unwrap();
        let r = inv_sqrt(&d, 1e-10).unwrap();
        assert!(max_diff(r.as_array(), &array![[0.5, 0.0], [0.0, 1.0 / 3.0]]) < 1e-15);

        let d = sym_eig(&SymMatrix::new(array![[4.0, 0.0], [0.0, 0.0]]).unwrap()).unwrap();
        let r = inv_sqrt(&d, 1e-10).unwrap();
        assert!(max_diff(r.as_array(), &array![[0.5, 0.0], [0.0, 0.0]]) < 1e-15);
    }

    #[test]
    fn inv_sqrt_rejects_negative_spectrum() {
        let d = sym_eig(&SymMatrix::new(array![[1.0, 0.0], [0.0, -1.0]]).unwrap()).unwrap();
        assert!(matches!(
            inv_sqrt(&d, 1e-10),
            Err(FrameError::NotPositiveSemidefinite(_))
        ));
        // The general pseudo-inverse still handles indefinite input.
        let p = pinv(&d, 1e-10).unwrap();
        assert!(max_diff(p.as_array(), &array![[1.0, 0.0], [0.0, -1.0]]) < 1e-15);
    }

    #[test]
    fn negative_rank_tol_is_rejected() {
        let d = sym_eig(&SymMatrix::identity(2).unwrap()).unwrap();
        assert!(matches!(
            pinv(&d, -1.0),
            Err(FrameError::InvalidArgument(_))
        ));
    }

    #[test]
    fn eigenvalues_come_sorted_descending() {
        let a = SymMatrix::new(array![[1.0, 0.0, 0.0], [0.0, 5.0, 0.0], [0.0, 0.0, -2.0]]).unwrap();
        let d = sym_eig(&a).unwrap();
        assert_eq!(d.eigenvalues(), &[5.0, 1.0, -2.0]);
        assert_eq!(d.spectral_radius(), 5.0);
    }
}
