//! Frame systems sampled on a finite grid, with their analysis, synthesis
//! and frame operators, the Gramian, and frame-bound estimates.
//!
//! The ambient Hilbert space is the space of real functions on a [`Grid`]
//! with inner product `⟨f, g⟩ = Σᵢ wᵢ f(tᵢ) g(tᵢ)`. A [`FrameSystem`] stores
//! `N` vectors as the rows of an `N × M` table `Φ`; column `t` of that table
//! is the vector `l(t) = (φₙ(t))ₙ`.
//!
//! ```
//! use frame_rkhs::classic::mercedes_frame;
//! use frame_rkhs::frame::{compute_frame_bounds, synthesis, CoeffSeq};
//!
//! let fs = mercedes_frame();
//! let bounds = compute_frame_bounds(&fs, 1e-10).unwrap();
//! assert!((bounds.lower - 1.5).abs() < 1e-12 && (bounds.upper - 1.5).abs() < 1e-12);
//!
//! // The three vectors sum to zero.
//! let f = synthesis(&fs, &CoeffSeq::new(vec![1.0, 1.0, 1.0]).unwrap()).unwrap();
//! assert!(f.iter().all(|v| v.abs() < 1e-15));
//! ```

use ndarray::{Array2, ArrayView1};

use crate::error::{check_len, FrameError, Result};
use crate::spectral::{sym_eig, SpectralDecomposition, SymMatrix};

/// `|B₁ − 1|` and `|B₂ − 1|` must both stay below this for a Parseval frame.
pub const PARSEVAL_TOL: f64 = 1e-9;

/// Sample points with positive quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl Grid {
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(FrameError::InvalidGrid("grid has no points".into()));
        }
        check_len(points.len(), weights.len())?;
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(FrameError::InvalidGrid(format!("non-finite point {p}")));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(FrameError::InvalidGrid(format!(
                "weights must be positive and finite, got {w}"
            )));
        }
        let mut sorted = points.clone();
        sorted.sort_by(f64::total_cmp);
        if let Some(pair) = sorted.windows(2).find(|p| p[0] == p[1]) {
            return Err(FrameError::InvalidGrid(format!(
                "duplicate point {}",
                pair[0]
            )));
        }
        Ok(Self { points, weights })
    }

    /// Grid with every weight equal to one.
    pub fn unit(points: Vec<f64>) -> Result<Self> {
        let weights = vec![1.0; points.len()];
        Self::new(points, weights)
    }

    /// Unit-weight grid labelled `0, 1, …, m-1`.
    pub fn indices(m: usize) -> Result<Self> {
        Self::unit((0..m).map(|i| i as f64).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weighted inner product of two grid functions.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> Result<f64> {
        check_len(self.len(), f.len())?;
        check_len(self.len(), g.len())?;
        Ok(self
            .weights
            .iter()
            .zip(f.iter().zip(g))
            .map(|(w, (a, b))| w * a * b)
            .sum())
    }

    pub fn norm_sq(&self, f: &[f64]) -> Result<f64> {
        self.inner(f, f)
    }

    pub(crate) fn weight_array(&self) -> ArrayView1<'_, f64> {
        ArrayView1::from(&self.weights[..])
    }
}

/// `N` real vectors sampled on a grid; row `n` holds `φₙ(t₁), …, φₙ(t_M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSystem {
    grid: Grid,
    vectors: Array2<f64>,
}

impl FrameSystem {
    pub fn new(grid: Grid, vectors: Array2<f64>) -> Result<Self> {
        if vectors.nrows() == 0 {
            return Err(FrameError::InvalidArgument(
                "a frame system needs at least one vector".into(),
            ));
        }
        check_len(grid.len(), vectors.ncols())?;
        if vectors.iter().any(|v| !v.is_finite()) {
            return Err(FrameError::InvalidMatrix(
                "frame vectors contain a non-finite sample".into(),
            ));
        }
        Ok(Self { grid, vectors })
    }

    /// Builds a system from row vectors; every row must have one value per grid point.
    pub fn from_rows(grid: Grid, rows: &[Vec<f64>]) -> Result<Self> {
        let m = grid.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(FrameError::DimensionMismatch {
                expected: m,
                found: bad.len(),
            });
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let vectors = Array2::from_shape_vec((rows.len(), m), flat)
            .map_err(|e| FrameError::InvalidMatrix(e.to_string()))?;
        Self::new(grid, vectors)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn vectors(&self) -> &Array2<f64> {
        &self.vectors
    }

    /// Number of frame vectors `N`.
    pub fn len(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.nrows() == 0
    }

    /// Number of grid points `M`.
    pub fn n_points(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn vector(&self, n: usize) -> ArrayView1<'_, f64> {
        self.vectors.row(n)
    }

    /// Same system with every vector multiplied by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        Self::new(self.grid.clone(), &self.vectors * alpha)
    }

    /// `Φ · W`, the matrix of the analysis operator acting on grid values.
    pub fn analysis_matrix(&self) -> Array2<f64> {
        &self.vectors * &self.grid.weight_array()
    }

    /// `Φᵀ Φ W`, the matrix of the frame operator `T*T` acting on grid values.
    pub fn frame_operator_matrix(&self) -> Array2<f64> {
        self.vectors.t().dot(&self.analysis_matrix())
    }
}

/// A finite coefficient sequence, one entry per frame vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq(Vec<f64>);

impl CoeffSeq {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(FrameError::InvalidArgument(
                "coefficients must be finite".into(),
            ));
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// The canonical basis sequence `δ_k` of length `n`.
    pub fn delta(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(FrameError::InvalidIndex { index: k, len: n });
        }
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        Ok(Self(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &CoeffSeq) -> Result<f64> {
        check_len(self.len(), other.len())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }
}

/// The Gramian `G_{mn} = ⟨φ_m, φ_n⟩` of a frame system.
#[derive(Debug, Clone, PartialEq)]
pub struct Gramian {
    matrix: SymMatrix,
    n_points: Option<usize>,
}

impl Gramian {
    /// Wraps a matrix that did not come from sampled vectors (e.g. an exact Hilbert matrix).
    pub fn from_matrix(matrix: SymMatrix) -> Self {
        Self {
            matrix,
            n_points: None,
        }
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Grid size of the originating system, if any.
    pub fn n_points(&self) -> Option<usize> {
        self.n_points
    }

    pub fn spectrum(&self) -> Result<SpectralDecomposition> {
        sym_eig(&self.matrix)
    }
}

/// Frame-bound estimates: `B₁‖f‖² ≤ Σₙ|⟨φₙ, f⟩|² ≤ B₂‖f‖²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub rank: usize,
    pub spans_ambient: bool,
    pub is_frame: bool,
    pub is_parseval: bool,
    pub rank_tol: f64,
}

impl FrameBounds {
    /// Bounds from a Gramian spectrum over an ambient space of dimension `ambient_dim`.
    pub fn from_spectrum(d: &SpectralDecomposition, ambient_dim: usize, rank_tol: f64) -> Self {
        let rank = d.rank(rank_tol);
        let upper = d.max_eigenvalue().max(0.0);
        let spans_ambient = rank == ambient_dim;
        let lower = if spans_ambient && rank > 0 {
            d.eigenvalues()[rank - 1]
        } else {
            0.0
        };
        let is_frame = spans_ambient && lower > 0.0;
        let is_parseval = is_frame && (lower - 1.0).abs().max((upper - 1.0).abs()) <= PARSEVAL_TOL;
        Self {
            lower,
            upper,
            rank,
            spans_ambient,
            is_frame,
            is_parseval,
            rank_tol,
        }
    }
}

/// `G = Φ W Φᵀ`.
pub fn build_gramian(fs: &FrameSystem) -> Gramian {
    let g = fs.analysis_matrix().dot(&fs.vectors.t());
    Gramian {
        matrix: SymMatrix::new(g).expect("Gramian of finite vectors is finite and square"),
        n_points: Some(fs.n_points()),
    }
}

/// Analysis operator `T f = (⟨φₙ, f⟩)ₙ`.
pub fn analysis(fs: &FrameSystem, f: &[f64]) -> Result<CoeffSeq> {
    check_len(fs.n_points(), f.len())?;
    let coeffs = fs.analysis_matrix().dot(&ArrayView1::from(f));
    Ok(CoeffSeq(coeffs.to_vec()))
}

/// Synthesis operator `T* c = Σₙ cₙ φₙ`, returned as grid values.
pub fn synthesis(fs: &FrameSystem, c: &CoeffSeq) -> Result<Vec<f64>> {
    check_len(fs.len(), c.len())?;
    Ok(fs.vectors.t().dot(&ArrayView1::from(c.as_slice())).to_vec())
}

/// Frame operator `T*T f = Σₙ ⟨φₙ, f⟩ φₙ`.
pub fn frame_operator_apply(fs: &FrameSystem, f: &[f64]) -> Result<Vec<f64>> {
    synthesis(fs, &analysis(fs, f)?)
}

/// `(G c)ₙ = Σ_m G_{nm} c_m`, which is `T T* c` when `g` comes from the same system.
pub fn gram_apply(g: &Gramian, c: &CoeffSeq) -> Result<CoeffSeq> {
    check_len(g.dim(), c.len())?;
    let out = g.matrix.as_array().dot(&ArrayView1::from(c.as_slice()));
    Ok(CoeffSeq(out.to_vec()))
}

/// Frame bounds from the spectrum of the Gramian.
///
/// `B₂ = λ_max(G)`. The system spans the ambient space when the numerical rank
/// equals the grid size; only then is `B₁` the smallest retained eigenvalue,
/// otherwise it is zero. The non-zero spectra of `TT*` and `T*T` coincide, so
/// these are the bounds of the frame operator as well.
pub fn compute_frame_bounds(fs: &FrameSystem, rank_tol: f64) -> Result<FrameBounds> {
    if !(rank_tol >= 0.0 && rank_tol.is_finite()) {
        return Err(FrameError::InvalidArgument(format!(
            "rank_tol must be a finite non-negative number, got {rank_tol}"
        )));
    }
    let d = build_gramian(fs).spectrum()?;
    Ok(FrameBounds::from_spectrum(&d, fs.n_points(), rank_tol))
}

/// `l(t) = (φₙ(t))ₙ` at grid index `t_index`.
pub fn eval_l(fs: &FrameSystem, t_index: usize) -> Result<CoeffSeq> {
    if t_index >= fs.n_points() {
        return Err(FrameError::InvalidIndex {
            index: t_index,
            len: fs.n_points(),
        });
    }
    Ok(CoeffSeq(fs.vectors.column(t_index).to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic::mercedes_frame;
    use ndarray::array;

    fn standard_basis() -> FrameSystem {
        FrameSystem::new(Grid::indices(2).unwrap(), Array2::eye(2)).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(vec![], vec![]).is_err());
        assert!(Grid::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(Grid::new(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        assert!(Grid::new(vec![0.0, 1.0], vec![1.0, -2.0]).is_err());
        assert!(Grid::new(vec![0.5, 0.5], vec![1.0, 1.0]).is_err());
        assert!(Grid::new(vec![f64::NAN], vec![1.0]).is_err());
        assert!(Grid::new(vec![0.0, 1.0], vec![0.3, 2.0]).is_ok());
    }

    #[test]
    fn frame_system_validation() {
        let g = Grid::indices(2).unwrap();
        assert!(FrameSystem::new(g.clone(), Array2::zeros((0, 2))).is_err());
        assert!(FrameSystem::new(g.clone(), Array2::zeros((1, 3))).is_err());
        assert!(FrameSystem::new(g.clone(), array![[1.0, f64::INFINITY]]).is_err());
        assert!(FrameSystem::from_rows(g, &[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn gramian_examples() {
        let g = build_gramian(&standard_basis());
        assert_eq!(g.matrix().as_array(), &Array2::<f64>::eye(2));

        let g = build_gramian(&mercedes_frame());
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 } else { -0.5 };
                assert!((g.matrix().as_array()[[i, j]] - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn analysis_examples() {
        let c = analysis(&standard_basis(), &[3.0, -1.0]).unwrap();
        assert_eq!(c.as_slice(), &[3.0, -1.0]);

        let c = analysis(&mercedes_frame(), &[1.0, 0.0]).unwrap();
        let expected = [1.0, -0.5, -0.5];
        for (a, b) in c.as_slice().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }

        let c = analysis(&mercedes_frame(), &[0.0, 0.0]).unwrap();
        assert!(c.as_slice().iter().all(|v| *v == 0.0));

        assert!(matches!(
            analysis(&mercedes_frame(), &[1.0]),
            Err(FrameError::DimensionMismatch {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn synthesis_examples() {
        let c = CoeffSeq::new(vec![3.0, -1.0]).unwrap();
        assert_eq!(synthesis(&standard_basis(), &c).unwrap(), vec![3.0, -1.0]);

        let fs = mercedes_frame();
        let f = synthesis(&fs, &CoeffSeq::new(vec![1.0, 1.0, 1.0]).unwrap()).unwrap();
        assert!(f.iter().all(|v| v.abs() < 1e-15));

        for k in 0..3 {
            let f = synthesis(&fs, &CoeffSeq::delta(3, k).unwrap()).unwrap();
            assert_eq!(f, fs.vector(k).to_vec());
        }
        assert!(synthesis(&fs, &CoeffSeq::zeros(2)).is_err());
    }

    #[test]
    fn frame_operator_examples() {
        let f = [0.25, -4.0];
        assert_eq!(
            frame_operator_apply(&standard_basis(), &f).unwrap(),
            f.to_vec()
        );

        let s = frame_operator_apply(&mercedes_frame(), &f).unwrap();
        assert!((s[0] - 1.5 * f[0]).abs() < 1e-14 && (s[1] - 1.5 * f[1]).abs() < 1e-14);

        let z = frame_operator_apply(&mercedes_frame(), &[0.0, 0.0]).unwrap();
        assert_eq!(z, vec![0.0, 0.0]);
    }

    #[test]
    fn gram_apply_examples() {
        let fs = mercedes_frame();
        let g = build_gramian(&fs);
        let out = gram_apply(&g, &CoeffSeq::new(vec![1.0, 1.0, 1.0]).unwrap()).unwrap();
        assert!(out.as_slice().iter().all(|v| v.abs() < 1e-15));

        let first = gram_apply(&g, &CoeffSeq::delta(3, 0).unwrap()).unwrap();
        assert_eq!(
            first.as_slice(),
            g.matrix().as_array().column(0).to_vec().as_slice()
        );

        let id = Gramian::from_matrix(SymMatrix::identity(3).unwrap());
        let c = CoeffSeq::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(gram_apply(&id, &c).unwrap(), c);
        assert!(gram_apply(&id, &CoeffSeq::zeros(2)).is_err());
    }

    #[test]
    fn frame_bounds_examples() {
        let b = compute_frame_bounds(&standard_basis(), 1e-10).unwrap();
        assert_eq!((b.lower, b.upper, b.rank), (1.0, 1.0, 2));
        assert!(b.is_frame && b.is_parseval);

        let b = compute_frame_bounds(&mercedes_frame(), 1e-10).unwrap();
        assert!((b.lower - 1.5).abs() < 1e-14 && (b.upper - 1.5).abs() < 1e-14);
        assert!(b.is_frame && !b.is_parseval && b.spans_ambient);
        assert_eq!(b.rank, 2);
    }

    #[test]
    fn all_zero_system_is_not_a_frame() {
        let fs = FrameSystem::new(Grid::indices(3).unwrap(), Array2::zeros((2, 3))).unwrap();
        let b = compute_frame_bounds(&fs, 1e-10).unwrap();
        assert_eq!((b.lower, b.upper, b.rank), (0.0, 0.0, 0));
        assert!(!b.is_frame && !b.spans_ambient);
    }

    #[test]
    fn non_spanning_system_has_zero_lower_bound() {
        let fs = FrameSystem::new(Grid::indices(3).unwrap(), array![[1.0, 1.0, 0.0]]).unwrap();
        let b = compute_frame_bounds(&fs, 1e-10).unwrap();
        assert_eq!(b.lower, 0.0);
        assert!((b.upper - 2.0).abs() < 1e-15);
        assert!(!b.is_frame);
    }

    #[test]
    fn eval_l_examples() {
        assert_eq!(
            eval_l(&standard_basis(), 0).unwrap().as_slice(),
            &[1.0, 0.0]
        );
        let l = eval_l(&mercedes_frame(), 0).unwrap();
        assert_eq!(l.as_slice(), &[1.0, -0.5, -0.5]);
        assert!(matches!(
            eval_l(&mercedes_frame(), 2),
            Err(FrameError::InvalidIndex { index: 2, len: 2 })
        ));
    }
}
