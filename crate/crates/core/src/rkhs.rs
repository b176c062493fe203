//! Reproducing kernels induced by a frame system.
//!
//! For a system `{φₙ}` on a grid, the span of the vectors is a reproducing
//! kernel Hilbert space with kernel
//!
//! ```text
//! K^G(s, t) = l(s)ᵀ G⁺ l(t),     l(t) = (φₙ(t))ₙ,
//! ```
//!
//! where `G⁺` is the spectral pseudo-inverse of the Gramian. The same kernel
//! comes out of the canonical tight frame `ψₙ = (T*T)^{-1/2} φₙ` as
//! `Σₙ ψₙ(s) ψₙ(t)`. Kernel sections are reproducing in the weighted inner
//! product of the grid: `f(t) = Σ_s w_s K(s, t) f(s)` for every `f` in the span.
//!
//! Verifiers return residuals; the caller decides what is small enough.

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{check_len, FrameError, Result};
use crate::frame::{analysis, build_gramian, synthesis, CoeffSeq, FrameSystem, Grid};
use crate::spectral::{inv_sqrt, pinv, sym_eig, SpectralDecomposition, SymMatrix};

/// Kernel values `K(t_s, t_t)` over all pairs of grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    grid: Grid,
    values: Array2<f64>,
}

impl KernelMatrix {
    pub fn new(grid: Grid, values: Array2<f64>) -> Result<Self> {
        let m = grid.len();
        if values.dim() != (m, m) {
            return Err(FrameError::DimensionMismatch {
                expected: m,
                found: values.nrows(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(FrameError::InvalidMatrix(
                "kernel has non-finite entries".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// The kernel section `K_t = K(·, t)`.
    pub fn section(&self, t_index: usize) -> Result<Vec<f64>> {
        if t_index >= self.grid.len() {
            return Err(FrameError::InvalidIndex {
                index: t_index,
                len: self.grid.len(),
            });
        }
        Ok(self.values.column(t_index).to_vec())
    }

    /// `Σᵢⱼ cᵢ cⱼ K(tᵢ, tⱼ)`.
    pub fn quadratic_form(&self, c: &[f64]) -> Result<f64> {
        check_len(self.grid.len(), c.len())?;
        let c = ArrayView1::from(c);
        Ok(c.dot(&self.values.dot(&c)))
    }

    pub fn spectrum(&self) -> Result<SpectralDecomposition> {
        sym_eig(&SymMatrix::new(self.values.clone())?)
    }

    /// Largest elementwise asymmetry `|K(s,t) − K(t,s)|`.
    pub fn asymmetry(&self) -> f64 {
        max_abs(&(&self.values - &self.values.t()))
    }
}

/// The canonical tight frame `ψₙ = (T*T)^{-1/2} φₙ`, sampled on the same grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalTightFrame {
    frame: FrameSystem,
}

impl CanonicalTightFrame {
    pub fn frame(&self) -> &FrameSystem {
        &self.frame
    }

    pub fn grid(&self) -> &Grid {
        self.frame.grid()
    }

    pub fn vectors(&self) -> &Array2<f64> {
        self.frame.vectors()
    }

    pub fn into_frame(self) -> FrameSystem {
        self.frame
    }
}

/// The Lax–Milgram operator `L = (T*T)⁺` of a frame system.
///
/// `L` is stored through its symmetric kernel `k_L`, acting on grid functions
/// by `(L f)(s) = Σ_t k_L(s, t) w_t f(t)`; that is the form in which an
/// operator self-adjoint for the weighted inner product has a symmetric table.
/// On a unit-weight grid the kernel is the plain matrix of `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxMilgramOperator {
    grid: Grid,
    kernel: Array2<f64>,
}

impl LaxMilgramOperator {
    pub fn kernel(&self) -> &Array2<f64> {
        &self.kernel
    }

    /// The matrix of `L` acting on grid values, `k_L · W`.
    pub fn matrix(&self) -> Array2<f64> {
        &self.kernel * &ArrayView1::from(self.grid.weights())
    }

    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        check_len(self.grid.len(), f.len())?;
        let wf: Array1<f64> = f
            .iter()
            .zip(self.grid.weights())
            .map(|(a, w)| a * w)
            .collect();
        Ok(self.kernel.dot(&wf).to_vec())
    }
}

fn max_abs(a: &Array2<f64>) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn gramian_spectrum(fs: &FrameSystem, rank_tol: f64) -> Result<SpectralDecomposition> {
    let d = build_gramian(fs).spectrum()?;
    if d.rank(rank_tol) == 0 {
        return Err(FrameError::ZeroSpan);
    }
    Ok(d)
}

/// `K(s, t) = Σₙ φₙ(s) φₙ(t) = l(s)ᵀ l(t)`.
pub fn naive_kernel(fs: &FrameSystem) -> KernelMatrix {
    let phi = fs.vectors();
    KernelMatrix {
        grid: fs.grid().clone(),
        values: phi.t().dot(phi),
    }
}

/// `K^G(s, t) = l(s)ᵀ G⁺ l(t)`.
pub fn rk_kernel(fs: &FrameSystem, rank_tol: f64) -> Result<KernelMatrix> {
    let d = gramian_spectrum(fs, rank_tol)?;
    let g_pinv = pinv(&d, rank_tol)?;
    let phi = fs.vectors();
    Ok(KernelMatrix {
        grid: fs.grid().clone(),
        values: phi.t().dot(&g_pinv.as_array().dot(phi)),
    })
}

/// `ψₙ(t) = (G^{-1/2} l(t))ₙ`.
pub fn canonical_tight(fs: &FrameSystem, rank_tol: f64) -> Result<CanonicalTightFrame> {
    let d = gramian_spectrum(fs, rank_tol)?;
    let root = inv_sqrt(&d, rank_tol)?;
    let psi = root.as_array().dot(fs.vectors());
    Ok(CanonicalTightFrame {
        frame: FrameSystem::new(fs.grid().clone(), psi)?,
    })
}

/// `Σₙ ψₙ(s) ψₙ(t)`, which agrees with [`rk_kernel`] of the originating system.
pub fn kernel_from_tight(ctf: &CanonicalTightFrame) -> KernelMatrix {
    naive_kernel(&ctf.frame)
}

/// `max_t |f(t) − ⟨K_t, f⟩|`.
///
/// Zero (up to rounding) when `k` is the kernel of the span and `f` lies in
/// it. For other `f` the result is the sup-norm of the component of `f`
/// orthogonal to the span.
pub fn verify_reproducing(fs: &FrameSystem, k: &KernelMatrix, f: &[f64]) -> Result<f64> {
    let m = fs.n_points();
    check_len(m, f.len())?;
    check_len(m, k.grid().len())?;
    let wf: Array1<f64> = f
        .iter()
        .zip(fs.grid().weights())
        .map(|(a, w)| a * w)
        .collect();
    let reproduced = k.values().t().dot(&wf);
    Ok(f.iter()
        .zip(reproduced.iter())
        .fold(0.0, |r, (a, b)| r.max((a - b).abs())))
}

/// `L = (T*T)⁺`, with kernel `k_L = Φᵀ (G⁺)² Φ`.
pub fn lax_milgram(fs: &FrameSystem, rank_tol: f64) -> Result<LaxMilgramOperator> {
    let d = gramian_spectrum(fs, rank_tol)?;
    let g_pinv_sq = d.map_retained(rank_tol, |l| 1.0 / (l * l))?;
    let phi = fs.vectors();
    let kernel = phi.t().dot(&g_pinv_sq.as_array().dot(phi));
    Ok(LaxMilgramOperator {
        grid: fs.grid().clone(),
        kernel,
    })
}

/// `|Σₙ ⟨f, φₙ⟩ ⟨φₙ, L g⟩ − ⟨f, g⟩|`.
pub fn verify_lax_identity(
    fs: &FrameSystem,
    lax: &LaxMilgramOperator,
    f: &[f64],
    g: &[f64],
) -> Result<f64> {
    let tf = analysis(fs, f)?;
    let tlg = analysis(fs, &lax.apply(g)?)?;
    let form = tf.dot(&tlg)?;
    Ok((form - fs.grid().inner(f, g)?).abs())
}

/// `(‖T* c‖², cᵀ G c)`; the two agree for every `c`.
pub fn isometry_check(fs: &FrameSystem, c: &CoeffSeq) -> Result<(f64, f64)> {
    let lhs = fs.grid().norm_sq(&synthesis(fs, c)?)?;
    let g = build_gramian(fs);
    let cv = ArrayView1::from(c.as_slice());
    let rhs = cv.dot(&g.matrix().as_array().dot(&cv));
    Ok((lhs, rhs))
}

/// Partial isometry `U` (an `N × M` matrix) of the polar decomposition
/// `T = U (T*T)^{1/2}`, computed as `G^{-1/2} Φ W`.
///
/// Eigenvector signs are solver-dependent, so only sign-invariant facts about
/// `U` are meaningful: `U*U` is the orthogonal projector onto the span and the
/// non-zero singular values are all one.
pub fn polar_unitary(fs: &FrameSystem, rank_tol: f64) -> Result<Array2<f64>> {
    let ctf = canonical_tight(fs, rank_tol)?;
    Ok(ctf.vectors() * &ArrayView1::from(fs.grid().weights()))
}

/// Largest residual of every finite identity checked by [`verify_identities`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    pub rank: usize,
    /// `max |G_ij − ⟨δ_i, TT* δ_j⟩|`.
    pub gramian_vs_tt_star: f64,
    /// `max |⟨T f, c⟩ − ⟨f, T* c⟩|` over grid deltas and coefficient deltas.
    pub adjoint: f64,
    /// Reproducing residual over the frame vectors, relative to `max(1, ‖φₙ‖)`.
    pub reproducing: f64,
    /// `max |K^G − Σ ψₙ ψₙ|`.
    pub tight_kernel: f64,
    /// Most negative kernel eigenvalue relative to the largest one (zero if none).
    pub kernel_psd_violation: f64,
    /// Distance of the tight frame's Gramian eigenvalues from `{0, 1}`.
    pub tight_parseval: f64,
    /// Relative isometry defect over `c = δₙ` and `c = (1, …, 1)`.
    pub isometry: f64,
    /// Lax–Milgram identity over pairs of frame vectors, relative to `‖f‖‖g‖`.
    pub lax_identity: f64,
    /// `max |L S − P|` with `P` the projector onto the span.
    pub lax_projector: f64,
    /// `max |U*U − P|`.
    pub polar: f64,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.gramian_vs_tt_star,
            self.adjoint,
            self.reproducing,
            self.tight_kernel,
            self.kernel_psd_violation,
            self.tight_parseval,
            self.isometry,
            self.lax_identity,
            self.lax_projector,
            self.polar,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Runs the finite identity suite on one frame system.
pub fn verify_identities(fs: &FrameSystem, rank_tol: f64) -> Result<IdentityReport> {
    let n = fs.len();
    let m = fs.n_points();
    let grid = fs.grid();
    let g = build_gramian(fs);
    let rank = gramian_spectrum(fs, rank_tol)?.rank(rank_tol);

    let mut gramian_vs_tt_star: f64 = 0.0;
    for j in 0..n {
        let tt = analysis(fs, &synthesis(fs, &CoeffSeq::delta(n, j)?)?)?;
        for i in 0..n {
            let entry = tt.as_slice()[i];
            gramian_vs_tt_star =
                gramian_vs_tt_star.max((g.matrix().as_array()[[i, j]] - entry).abs());
        }
    }

    let mut adjoint: f64 = 0.0;
    for t in 0..m {
        let mut f = vec![0.0; m];
        f[t] = 1.0;
        let tf = analysis(fs, &f)?;
        for k in 0..n {
            let c = CoeffSeq::delta(n, k)?;
            let lhs = tf.dot(&c)?;
            let rhs = grid.inner(&f, &synthesis(fs, &c)?)?;
            adjoint = adjoint.max((lhs - rhs).abs());
        }
    }

    let kg = rk_kernel(fs, rank_tol)?;
    let mut reproducing: f64 = 0.0;
    for k in 0..n {
        let f = fs.vector(k).to_vec();
        let scale = grid.norm_sq(&f)?.sqrt().max(1.0);
        reproducing = reproducing.max(verify_reproducing(fs, &kg, &f)? / scale);
    }

    let ctf = canonical_tight(fs, rank_tol)?;
    let tight_kernel = max_abs(&(kg.values() - kernel_from_tight(&ctf).values()));

    let kspec = kg.spectrum()?;
    let kernel_psd_violation = if kspec.spectral_radius() > 0.0 {
        (-kspec.min_eigenvalue() / kspec.spectral_radius()).max(0.0)
    } else {
        0.0
    };

    let tight_parseval = build_gramian(ctf.frame())
        .spectrum()?
        .eigenvalues()
        .iter()
        .map(|l| l.abs().min((l - 1.0).abs()))
        .fold(0.0, f64::max);

    let mut isometry: f64 = 0.0;
    let mut probes: Vec<CoeffSeq> = (0..n)
        .map(|k| CoeffSeq::delta(n, k))
        .collect::<Result<_>>()?;
    probes.push(CoeffSeq::new(vec![1.0; n])?);
    for c in &probes {
        let (lhs, rhs) = isometry_check(fs, c)?;
        isometry = isometry.max((lhs - rhs).abs() / rhs.abs().max(1.0));
    }

    let lax = lax_milgram(fs, rank_tol)?;
    let mut lax_identity: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let f = fs.vector(a).to_vec();
            let h = fs.vector(b).to_vec();
            let scale = (grid.norm_sq(&f)? * grid.norm_sq(&h)?).sqrt();
            if scale > 0.0 {
                lax_identity = lax_identity.max(verify_lax_identity(fs, &lax, &f, &h)? / scale);
            }
        }
    }

    let projector = kg.values() * &ArrayView1::from(grid.weights());
    let ls = lax.matrix().dot(&fs.frame_operator_matrix());
    let lax_projector = max_abs(&(&ls - &projector));

    let u = polar_unitary(fs, rank_tol)?;
    // Adjoint in the weighted inner product: U* = W⁻¹ Uᵀ.
    let utu = u.t().dot(&u);
    let u_star_u = Array2::from_shape_fn((m, m), |(i, j)| utu[[i, j]] / grid.weights()[i]);
    let polar = max_abs(&(&u_star_u - &projector));

    Ok(IdentityReport {
        rank,
        gramian_vs_tt_star,
        adjoint,
        reproducing,
        tight_kernel,
        kernel_psd_violation,
        tight_parseval,
        isometry,
        lax_identity,
        lax_projector,
        polar,
    })
}
