//! Gaussian processes driven by a frame in `L²(σ)` for an atomic measure σ.
//!
//! A Gaussian field `X_φ` with `E|X_φ|² = ‖φ̂‖²_σ` is compared with its
//! Karhunen–Loève synthesis from a real frame `{fₙ}` of `L²(σ)`:
//!
//! ```text
//! Y_φ = Σₙ cₙ Bₙ,    cₙ = ⟨fₙ, φ̂⟩_σ,    Bₙ i.i.d. N(0, 1),
//! ```
//!
//! so `E|Y_φ|² = Σₙ |cₙ|²`. With frame bounds `a ≤ b` of `{fₙ}` this gives
//! `a E|X_φ|² ≤ E|Y_φ|² ≤ b E|X_φ|²`, with equality exactly for Parseval
//! frames.
//!
//! ```
//! use frame_rkhs::classic::{random_atomic_measure, random_sigma_onb};
//! use frame_rkhs::gp::{theoretical_variances, ComplexVector, GaussianModel};
//!
//! let measure = random_atomic_measure(4, 1).unwrap();
//! let model = GaussianModel::new(random_sigma_onb(&measure, 1).unwrap(), 1e-10).unwrap();
//! let phat = ComplexVector::new(vec![1.0, 0.0, 2.0, -1.0], vec![0.5, 0.5, 0.0, 0.0]).unwrap();
//! let v = theoretical_variances(&model, &phat).unwrap();
//! assert!((v.ey2 - v.ex2).abs() <= 1e-12 * v.ex2);
//! ```

use ndarray::{Array2, ArrayView1};

use crate::error::{check_len, FrameError, Result};
use crate::frame::{build_gramian, compute_frame_bounds, FrameBounds, FrameSystem, Grid};
use crate::normal::NormalStream;

/// Default relative slack for [`sandwich_check`].
pub const DEFAULT_SANDWICH_SLACK: f64 = 1e-10;

/// A finite positive measure `σ = Σ_j σ_j δ_{u_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    grid: Grid,
}

impl AtomicMeasure {
    /// Atoms as `(location, mass)` pairs; locations distinct, masses positive.
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        let (points, masses) = atoms.into_iter().unzip();
        let grid = Grid::new(points, masses).map_err(|e| match e {
            FrameError::InvalidGrid(msg) => FrameError::InvalidArgument(format!("measure: {msg}")),
            other => other,
        })?;
        Ok(Self { grid })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn locations(&self) -> &[f64] {
        self.grid.points()
    }

    pub fn masses(&self) -> &[f64] {
        self.grid.weights()
    }

    /// `∫ dσ(u) / (1 + u²) = Σ_j σ_j / (1 + u_j²)`.
    pub fn tempered_mass(&self) -> f64 {
        self.locations()
            .iter()
            .zip(self.masses())
            .map(|(u, m)| m / (1.0 + u * u))
            .sum()
    }

    /// The atoms as a grid whose weights are the masses.
    pub fn as_grid(&self) -> &Grid {
        &self.grid
    }
}

/// Real functions `fₙ` sampled at the atoms of σ (an `N × J` table).
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaFrame {
    frame: FrameSystem,
    measure: AtomicMeasure,
}

impl SigmaFrame {
    pub fn new(measure: AtomicMeasure, vectors: Array2<f64>) -> Result<Self> {
        let frame = FrameSystem::new(measure.as_grid().clone(), vectors)?;
        Ok(Self { frame, measure })
    }

    pub fn measure(&self) -> &AtomicMeasure {
        &self.measure
    }

    pub fn vectors(&self) -> &Array2<f64> {
        self.frame.vectors()
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    /// The same vectors viewed as a frame system on the atom grid.
    pub fn as_frame_system(&self) -> &FrameSystem {
        &self.frame
    }
}

/// Complex values stored as separate real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl ComplexVector {
    pub fn new(re: Vec<f64>, im: Vec<f64>) -> Result<Self> {
        check_len(re.len(), im.len())?;
        if re.iter().chain(&im).any(|v| !v.is_finite()) {
            return Err(FrameError::InvalidArgument(
                "complex vector has non-finite parts".into(),
            ));
        }
        Ok(Self { re, im })
    }

    pub fn real(re: Vec<f64>) -> Result<Self> {
        let im = vec![0.0; re.len()];
        Self::new(re, im)
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            re: vec![0.0; len],
            im: vec![0.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn re(&self) -> &[f64] {
        &self.re
    }

    pub fn im(&self) -> &[f64] {
        &self.im
    }

    pub fn get(&self, k: usize) -> (f64, f64) {
        (self.re[k], self.im[k])
    }

    /// `Σ_k |z_k|²`.
    pub fn norm_sq(&self) -> f64 {
        self.re.iter().chain(&self.im).map(|v| v * v).sum()
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            re: self.re.iter().map(|v| alpha * v).collect(),
            im: self.im.iter().map(|v| alpha * v).collect(),
        }
    }
}

/// A σ-frame together with its frame bounds `a ≤ b`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianModel {
    frame: SigmaFrame,
    bounds: FrameBounds,
}

impl GaussianModel {
    pub fn new(frame: SigmaFrame, rank_tol: f64) -> Result<Self> {
        let bounds = sigma_frame_bounds(&frame, rank_tol)?;
        Ok(Self { frame, bounds })
    }

    pub fn frame(&self) -> &SigmaFrame {
        &self.frame
    }

    pub fn measure(&self) -> &AtomicMeasure {
        self.frame.measure()
    }

    pub fn bounds(&self) -> &FrameBounds {
        &self.bounds
    }

    /// Lower frame bound `a`.
    pub fn a(&self) -> f64 {
        self.bounds.lower
    }

    /// Upper frame bound `b`.
    pub fn b(&self) -> f64 {
        self.bounds.upper
    }

    pub fn rank_tol(&self) -> f64 {
        self.bounds.rank_tol
    }

    pub fn is_frame(&self) -> bool {
        self.bounds.is_frame
    }
}

/// `φ̂(u_j) = Σᵢ wᵢ e^{i xᵢ u_j} φ(xᵢ)` at every atom `u_j`.
pub fn fourier_at_atoms(
    x_grid: &Grid,
    phi: &[f64],
    measure: &AtomicMeasure,
) -> Result<ComplexVector> {
    check_len(x_grid.len(), phi.len())?;
    let mut re = Vec::with_capacity(measure.len());
    let mut im = Vec::with_capacity(measure.len());
    for &u in measure.locations() {
        let (mut sr, mut si) = (0.0, 0.0);
        for ((&x, &w), &p) in x_grid.points().iter().zip(x_grid.weights()).zip(phi) {
            let (s, c) = (x * u).sin_cos();
            sr += w * c * p;
            si += w * s * p;
        }
        re.push(sr);
        im.push(si);
    }
    ComplexVector::new(re, im)
}

/// Frame bounds of `{fₙ}` in `L²(σ)`; `a = lower`, `b = upper`.
pub fn sigma_frame_bounds(sf: &SigmaFrame, rank_tol: f64) -> Result<FrameBounds> {
    compute_frame_bounds(sf.as_frame_system(), rank_tol)
}

/// `cₙ = ⟨fₙ, φ̂⟩_σ = Σ_j σ_j fₙ(u_j) φ̂(u_j)`.
pub fn kl_coefficients(model: &GaussianModel, phat: &ComplexVector) -> Result<ComplexVector> {
    let fs = model.frame.as_frame_system();
    check_len(fs.n_points(), phat.len())?;
    let weighted = fs.analysis_matrix();
    let re = weighted.dot(&ArrayView1::from(phat.re())).to_vec();
    let im = weighted.dot(&ArrayView1::from(phat.im())).to_vec();
    ComplexVector::new(re, im)
}

/// Second moments of `X_φ` and `Y_φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Variances {
    /// `E|X_φ|² = ‖φ̂‖²_σ`.
    pub ex2: f64,
    /// `E|Y_φ|² = Σₙ |cₙ|²`.
    pub ey2: f64,
}

pub fn theoretical_variances(model: &GaussianModel, phat: &ComplexVector) -> Result<Variances> {
    let grid = model.measure().as_grid();
    let ex2 = grid.norm_sq(phat.re())? + grid.norm_sq(phat.im())?;
    let ey2 = kl_coefficients(model, phat)?.norm_sq();
    Ok(Variances { ex2, ey2 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichReport {
    pub ex2: f64,
    /// `a · E|X_φ|²`.
    pub lower: f64,
    pub ey2: f64,
    /// `b · E|X_φ|²`.
    pub upper: f64,
    /// Absolute slack used on both sides.
    pub slack: f64,
    pub holds: bool,
}

/// Checks `a·ex2 − s ≤ ey2 ≤ b·ex2 + s` with `s = slack · max(1, b·ex2)`.
pub fn sandwich_check(
    model: &GaussianModel,
    phat: &ComplexVector,
    slack: f64,
) -> Result<SandwichReport> {
    if !model.is_frame() {
        return Err(FrameError::NotAFrame);
    }
    let v = theoretical_variances(model, phat)?;
    let lower = model.a() * v.ex2;
    let upper = model.b() * v.ex2;
    let abs_slack = slack * upper.max(1.0);
    Ok(SandwichReport {
        ex2: v.ex2,
        lower,
        ey2: v.ey2,
        upper,
        slack: abs_slack,
        holds: lower - abs_slack <= v.ey2 && v.ey2 <= upper + abs_slack,
    })
}

/// A probe `φ̂` on which the frame is furthest from Parseval: `T* v` for the
/// Gramian eigenvector `v` whose eigenvalue `λ` maximizes `|λ − 1|` among
/// the retained ones, normalized to `‖φ̂‖_σ = 1`. For it, `E|Y|² = λ E|X|²`.
pub fn extremal_phat(model: &GaussianModel) -> Result<ComplexVector> {
    let fs = model.frame.as_frame_system();
    let rank_tol = model.rank_tol();
    let d = build_gramian(fs).spectrum()?;
    let best = (0..d.source_dim())
        .filter(|&k| d.is_retained(k, rank_tol))
        .max_by(|&i, &j| {
            let di = (d.eigenvalues()[i] - 1.0).abs();
            let dj = (d.eigenvalues()[j] - 1.0).abs();
            di.total_cmp(&dj)
        })
        .ok_or(FrameError::ZeroSpan)?;
    let v = d.eigenvectors().column(best);
    let f = fs.vectors().t().dot(&v).to_vec();
    let norm = model.measure().as_grid().norm_sq(&f)?.sqrt();
    ComplexVector::real(f.iter().map(|x| x / norm).collect())
}

/// Realizations of `Y_φ = Σₙ cₙ Bₙ`.
#[derive(Debug, Clone, PartialEq)]
pub struct KLSampleSet {
    pub seed: u64,
    pub samples_re: Vec<f64>,
    pub samples_im: Vec<f64>,
    pub coefficients: ComplexVector,
}

impl KLSampleSet {
    pub fn len(&self) -> usize {
        self.samples_re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples_re.is_empty()
    }
}

/// Draws `s` realizations of `Y_φ`.
///
/// Sample `k` uses its own normal stream `(seed, k)` (see [`crate::normal`]),
/// taking `N` consecutive draws as `B₁, …, B_N`; a sample set therefore does
/// not depend on generation order.
pub fn sample_kl(
    model: &GaussianModel,
    phat: &ComplexVector,
    s: usize,
    seed: u64,
) -> Result<KLSampleSet> {
    if s < 1 {
        return Err(FrameError::InvalidArgument(
            "need at least one sample".into(),
        ));
    }
    let c = kl_coefficients(model, phat)?;
    let n = c.len();
    let mut samples_re = Vec::with_capacity(s);
    let mut samples_im = Vec::with_capacity(s);
    for k in 0..s {
        let mut stream = NormalStream::new(seed, k as u64);
        let (mut yr, mut yi) = (0.0, 0.0);
        for i in 0..n {
            let b = stream.next_normal();
            yr += c.re()[i] * b;
            yi += c.im()[i] * b;
        }
        samples_re.push(yr);
        samples_im.push(yi);
    }
    Ok(KLSampleSet {
        seed,
        samples_re,
        samples_im,
        coefficients: c,
    })
}

/// Sample mean of `|Y|²`.
pub fn empirical_variance(ks: &KLSampleSet) -> f64 {
    if ks.is_empty() {
        return 0.0;
    }
    let total: f64 = ks
        .samples_re
        .iter()
        .zip(&ks.samples_im)
        .map(|(r, i)| r * r + i * i)
        .sum();
    total / ks.len() as f64
}
