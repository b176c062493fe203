//! Finite frames, the reproducing kernels they induce, and Gaussian processes
//! synthesized from them.
//!
//! A finite system of vectors `{φₙ}` realized as functions on a grid
//! determines
//!
//! * its analysis, synthesis and frame operators and its Gramian `G` ([`frame`]);
//! * frame bounds `B₁ ≤ B₂` read off the spectrum of `G` ([`frame::compute_frame_bounds`]);
//! * the reproducing kernel `K^G(s, t) = l(s)ᵀ G⁺ l(t)` of its span, the
//!   canonical tight frame `(T*T)^{-1/2} φₙ` and the Lax–Milgram operator ([`rkhs`]).
//!
//! [`gp`] carries the same machinery over to `L²(σ)` for an atomic measure σ
//! and samples Karhunen–Loève sums whose variance sits between `a‖φ̂‖²` and
//! `b‖φ̂‖²`. [`classic`] has the monomial / Hilbert-matrix system and small
//! fixtures; [`spectral`] is the Jacobi eigensolver everything is built on.
//!
//! ```
//! use frame_rkhs::classic::mercedes_frame;
//! use frame_rkhs::rkhs::{rk_kernel, verify_reproducing};
//!
//! let fs = mercedes_frame();
//! let k = rk_kernel(&fs, 1e-10).unwrap();
//! // Evaluation on a two-point unit-weight grid is represented by δ_t.
//! assert!((k.values()[[0, 0]] - 1.0).abs() < 1e-12 && k.values()[[0, 1]].abs() < 1e-12);
//! assert!(verify_reproducing(&fs, &k, &[0.3, -2.0]).unwrap() < 1e-12);
//! ```

pub mod classic;
pub mod error;
pub mod frame;
pub mod gp;
pub mod normal;
pub mod rkhs;
pub mod spectral;

pub use error::{FrameError, Result};
pub use frame::{CoeffSeq, FrameBounds, FrameSystem, Gramian, Grid};
pub use spectral::{SpectralDecomposition, SymMatrix, DEFAULT_RANK_TOL};
