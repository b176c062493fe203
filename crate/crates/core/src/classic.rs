//! Built-in systems: monomials on (0, 1) and their Hilbert-matrix Gramian,
//! the Mercedes frame, and seeded random frames and measures for testing.
//!
//! The monomials `φₙ(t) = tⁿ`, `n = 0, 1, …`, have Gramian
//! `G_{nm} = ∫₀¹ x^{n+m} dx = 1/(n+m+1)` in `L²(0, 1)`, the Hilbert matrix.
//! Its norm approaches π from below as the truncation grows while its
//! smallest eigenvalue collapses to zero, so the monomials have an upper
//! frame bound but no lower one.

use ndarray::Array2;

use crate::error::{FrameError, Result};
use crate::frame::{build_gramian, FrameSystem, Gramian, Grid};
use crate::gp::{AtomicMeasure, SigmaFrame};
use crate::normal::NormalStream;
use crate::spectral::{sym_eig, SymMatrix};

/// Smallest-to-largest singular value ratio enforced by [`random_riesz_frame`].
pub const RIESZ_MIN_RATIO: f64 = 0.05;

/// `φₙ(t) = tⁿ` for `n = 0..n_funcs` on the midpoint grid
/// `tᵢ = (i + ½)/m_points` with weights `1/m_points`.
pub fn monomial_frame(n_funcs: usize, m_points: usize) -> Result<FrameSystem> {
    if n_funcs < 1 || m_points < 2 {
        return Err(FrameError::InvalidArgument(format!(
            "monomial frame needs n_funcs >= 1 and m_points >= 2, got {n_funcs} and {m_points}"
        )));
    }
    let h = 1.0 / m_points as f64;
    let points: Vec<f64> = (0..m_points).map(|i| (i as f64 + 0.5) * h).collect();
    let vectors = Array2::from_shape_fn((n_funcs, m_points), |(n, i)| points[i].powi(n as i32));
    FrameSystem::new(Grid::new(points, vec![h; m_points])?, vectors)
}

/// The `n × n` Hilbert matrix `1/(i + j + 1)`, indices from zero.
pub fn hilbert_gramian_exact(n: usize) -> Result<Gramian> {
    if n < 1 {
        return Err(FrameError::InvalidArgument(
            "Hilbert matrix size must be >= 1".into(),
        ));
    }
    let m = SymMatrix::from_fn(n, |i, j| 1.0 / (i + j + 1) as f64)?;
    Ok(Gramian::from_matrix(m))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HilbertRow {
    pub n: usize,
    pub lambda_max: f64,
    pub lambda_min: f64,
    /// `π − λ_max`.
    pub gap_to_pi: f64,
}

/// Extreme eigenvalues of the Hilbert matrices of the requested sizes,
/// sorted by size with duplicates removed.
pub fn hilbert_spectrum_report(sizes: &[usize]) -> Result<Vec<HilbertRow>> {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
        .into_iter()
        .map(|n| {
            let d = hilbert_gramian_exact(n)?.spectrum()?;
            Ok(HilbertRow {
                n,
                lambda_max: d.max_eigenvalue(),
                lambda_min: d.min_eigenvalue(),
                gap_to_pi: std::f64::consts::PI - d.max_eigenvalue(),
            })
        })
        .collect()
}

/// Rows that break the norm bound: `λ_max ≥ π`, or `λ_max` not strictly
/// larger than in the previous row.
pub fn hilbert_violations(rows: &[HilbertRow]) -> Vec<usize> {
    let mut bad = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        let monotone = k == 0 || row.lambda_max > rows[k - 1].lambda_max;
        if row.gap_to_pi <= 0.0 || !monotone {
            bad.push(row.n);
        }
    }
    bad
}

/// Three unit vectors at 120° on a two-point unit-weight grid `{1, 2}`.
pub fn mercedes_frame() -> FrameSystem {
    let h = 3.0f64.sqrt() / 2.0;
    let rows = [vec![1.0, 0.0], vec![-0.5, h], vec![-0.5, -h]];
    FrameSystem::from_rows(Grid::unit(vec![1.0, 2.0]).expect("valid grid"), &rows)
        .expect("valid frame")
}

/// A seeded `m × m` Riesz basis on the unit-weight grid `0..m`.
///
/// Candidates are `I + Z/(3√m)` with `Z` standard normal, drawn from stream 0
/// of the seeded [`NormalStream`], and re-drawn until the smallest singular
/// value is at least [`RIESZ_MIN_RATIO`] times the largest.
pub fn random_riesz_frame(m: usize, seed: u64) -> Result<FrameSystem> {
    if m < 1 {
        return Err(FrameError::InvalidArgument(
            "random frame needs m >= 1".into(),
        ));
    }
    let mut rng = NormalStream::new(seed, 0);
    let scale = 1.0 / (3.0 * (m as f64).sqrt());
    loop {
        let z = rng.normals(m * m);
        let a = Array2::from_shape_fn((m, m), |(i, j)| {
            let shift = if i == j { 1.0 } else { 0.0 };
            shift + scale * z[i * m + j]
        });
        let fs = FrameSystem::new(Grid::indices(m)?, a)?;
        let d = build_gramian(&fs).spectrum()?;
        // Singular values of Φ are square roots of the Gramian eigenvalues.
        if d.min_eigenvalue() >= RIESZ_MIN_RATIO * RIESZ_MIN_RATIO * d.max_eigenvalue() {
            return Ok(fs);
        }
    }
}

/// `m + extra` standard-normal vectors on the grid `0..m` with weights
/// uniform in `[0.5, 2)`; spans the ambient space with probability one.
pub fn random_redundant_frame(m: usize, extra: usize, seed: u64) -> Result<FrameSystem> {
    random_low_rank_frame(m, m + extra, m, seed)
}

/// `n` vectors on the weighted grid `0..m` spanning a random subspace of
/// dimension `rank` (with probability one), built as a product of two
/// standard-normal factors.
pub fn random_low_rank_frame(m: usize, n: usize, rank: usize, seed: u64) -> Result<FrameSystem> {
    if m < 1 || n < 1 || rank < 1 || rank > m.min(n) {
        return Err(FrameError::InvalidArgument(format!(
            "need 1 <= rank <= min(m, n), got m={m} n={n} rank={rank}"
        )));
    }
    let mut rng = NormalStream::new(seed, 1);
    let weights: Vec<f64> = (0..m).map(|_| 0.5 + 1.5 * rng.next_uniform()).collect();
    let grid = Grid::new((0..m).map(|i| i as f64).collect(), weights)?;
    let vectors = if rank == m {
        let z = rng.normals(n * m);
        Array2::from_shape_vec((n, m), z).expect("shape matches")
    } else {
        let left = Array2::from_shape_vec((n, rank), rng.normals(n * rank)).expect("shape");
        let right = Array2::from_shape_vec((rank, m), rng.normals(rank * m)).expect("shape");
        left.dot(&right)
    };
    FrameSystem::new(grid, vectors)
}

/// Seeded atomic measure with `j` atoms at `k + U[0, ½)`, `k = 0..j`, shifted
/// to be centred at zero, and masses uniform in `[0.1, 2.1)`.
pub fn random_atomic_measure(j: usize, seed: u64) -> Result<AtomicMeasure> {
    if j < 1 {
        return Err(FrameError::InvalidArgument(
            "measure needs at least one atom".into(),
        ));
    }
    let mut rng = NormalStream::new(seed, 2);
    let centre = (j as f64 - 1.0) / 2.0;
    let atoms = (0..j)
        .map(|k| {
            let u = k as f64 - centre + 0.5 * rng.next_uniform();
            let mass = 0.1 + 2.0 * rng.next_uniform();
            (u, mass)
        })
        .collect();
    AtomicMeasure::new(atoms)
}

/// A seeded orthogonal `m × m` matrix: eigenvectors of a symmetric matrix
/// with standard-normal entries.
pub fn random_orthogonal(m: usize, seed: u64) -> Result<Array2<f64>> {
    if m < 1 {
        return Err(FrameError::InvalidArgument(
            "orthogonal matrix needs m >= 1".into(),
        ));
    }
    let mut rng = NormalStream::new(seed, 3);
    let z = rng.normals(m * m);
    let a = SymMatrix::from_fn(m, |i, j| z[i * m + j])?;
    Ok(sym_eig(&a)?.eigenvectors().clone())
}

/// An orthonormal basis of `L²(σ)`: `fₙ(u_j) = Q[n, j] / √σ_j` for a seeded
/// orthogonal `Q`.
pub fn random_sigma_onb(measure: &AtomicMeasure, seed: u64) -> Result<SigmaFrame> {
    let j = measure.len();
    let q = random_orthogonal(j, seed)?;
    let masses = measure.masses();
    let vectors = Array2::from_shape_fn((j, j), |(n, k)| q[[n, k]] / masses[k].sqrt());
    SigmaFrame::new(measure.clone(), vectors)
}
