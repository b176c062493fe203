//! Subcommand implementations. Each returns the human report and the exit
//! code it should end with; failures come back as [`CliError`].

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use frame_rkhs::classic::{hilbert_spectrum_report, hilbert_violations};
use frame_rkhs::frame::compute_frame_bounds;
use frame_rkhs::gp::{empirical_variance, sample_kl, sandwich_check, DEFAULT_SANDWICH_SLACK};
use frame_rkhs::rkhs::{
    canonical_tight, naive_kernel, rk_kernel, verify_identities, verify_reproducing,
};
use frame_rkhs::{FrameSystem, DEFAULT_RANK_TOL};
use serde::Serialize;

use crate::error::CliError;
use crate::files::{read_json, write_json, FrameFile, KernelFile, KernelKind, ModelFile};
use crate::format::g6;

pub const DEFAULT_SAMPLES: usize = 200_000;
pub const HILBERT_VIOLATION_EXIT: u8 = 4;
pub const SANDWICH_FAILURE_EXIT: u8 = 5;

/// Flags shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Options {
    pub rank_tol: f64,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub samples: usize,
    pub naive: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            rank_tol: DEFAULT_RANK_TOL,
            out: None,
            seed: 0,
            samples: DEFAULT_SAMPLES,
            naive: false,
        }
    }
}

impl Options {
    fn validate(&self) -> Result<(), CliError> {
        if !(self.rank_tol.is_finite() && (0.0..1.0).contains(&self.rank_tol)) {
            return Err(CliError::InvalidArgument(format!(
                "--rank-tol must lie in [0, 1), got {}",
                self.rank_tol
            )));
        }
        if self.samples < 1 {
            return Err(CliError::InvalidArgument(
                "--samples must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn write_out<T: Serialize>(&self, value: &T, report: &mut String) -> Result<(), CliError> {
        if let Some(path) = &self.out {
            write_json(path, value)?;
            let _ = writeln!(report, "wrote {}", path.display());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub report: String,
    pub exit_code: u8,
}

impl Outcome {
    fn ok(report: String) -> Self {
        Outcome {
            report,
            exit_code: 0,
        }
    }
}

fn load_frame(path: &Path) -> Result<FrameSystem, CliError> {
    read_json::<FrameFile>(path)?.to_system(path)
}

fn row(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(g6).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct AnalysisOut {
    n: usize,
    m: usize,
    rank: usize,
    rank_tol: f64,
    lower: f64,
    upper: f64,
    spans_ambient: bool,
    is_frame: bool,
    is_parseval: bool,
}

pub fn analyze(path: &Path, opts: &Options) -> Result<Outcome, CliError> {
    opts.validate()?;
    let fs = load_frame(path)?;
    let b = compute_frame_bounds(&fs, opts.rank_tol)?;
    let mut r = String::new();
    let _ = writeln!(
        r,
        "N={} M={} rank={} rank_tol={}",
        fs.len(),
        fs.n_points(),
        b.rank,
        g6(b.rank_tol)
    );
    let _ = writeln!(r, "frame={} spans={}", b.is_frame, b.spans_ambient);
    let _ = writeln!(
        r,
        "B1={} B2={} parseval={}",
        g6(b.lower),
        g6(b.upper),
        b.is_parseval
    );
    opts.write_out(
        &AnalysisOut {
            n: fs.len(),
            m: fs.n_points(),
            rank: b.rank,
            rank_tol: b.rank_tol,
            lower: b.lower,
            upper: b.upper,
            spans_ambient: b.spans_ambient,
            is_frame: b.is_frame,
            is_parseval: b.is_parseval,
        },
        &mut r,
    )?;
    Ok(Outcome::ok(r))
}

pub fn kernel(path: &Path, opts: &Options) -> Result<Outcome, CliError> {
    opts.validate()?;
    let fs = load_frame(path)?;
    let (k, kind) = if opts.naive {
        (naive_kernel(&fs), KernelKind::Naive)
    } else {
        (rk_kernel(&fs, opts.rank_tol)?, KernelKind::Rkhs)
    };
    let d = k.spectrum()?;
    let psd_violation = (-d.min_eigenvalue()).max(0.0);
    let mut residual: f64 = 0.0;
    for n in 0..fs.len() {
        let phi = fs.vector(n).to_vec();
        let scale = fs.grid().norm_sq(&phi)?.sqrt().max(1.0);
        residual = residual.max(verify_reproducing(&fs, &k, &phi)? / scale);
    }
    let mut r = String::new();
    let _ = writeln!(
        r,
        "kind={} M={} rank={} rank_tol={}",
        kind.as_str(),
        fs.n_points(),
        d.rank(opts.rank_tol),
        g6(opts.rank_tol)
    );
    let _ = writeln!(
        r,
        "max_psd_violation={} max_reproducing_residual={}",
        g6(psd_violation),
        g6(residual)
    );
    if opts.out.is_none() {
        for row_values in k.values().rows() {
            let _ = writeln!(r, "{}", row(row_values.iter().copied()));
        }
    }
    opts.write_out(&KernelFile::from_kernel(&k, kind, opts.rank_tol), &mut r)?;
    Ok(Outcome::ok(r))
}

#[derive(Serialize)]
struct HilbertOut {
    n: usize,
    lambda_max: f64,
    lambda_min: f64,
    gap_to_pi: f64,
}

pub fn hilbert(sizes: &[usize], opts: &Options) -> Result<Outcome, CliError> {
    opts.validate()?;
    if sizes.is_empty() {
        return Err(CliError::InvalidArgument(
            "--sizes needs at least one size".into(),
        ));
    }
    let rows = hilbert_spectrum_report(sizes)?;
    let mut r = String::from("n lambda_max lambda_min pi_minus_lambda_max\n");
    for h in &rows {
        let _ = writeln!(
            r,
            "{} {} {} {}",
            h.n,
            g6(h.lambda_max),
            g6(h.lambda_min),
            g6(h.gap_to_pi)
        );
    }
    let violations = hilbert_violations(&rows);
    for h in rows.iter().filter(|h| violations.contains(&h.n)) {
        let _ = writeln!(r, "violation: n={} lambda_max={}", h.n, g6(h.lambda_max));
    }
    let out: Vec<HilbertOut> = rows
        .iter()
        .map(|h| HilbertOut {
            n: h.n,
            lambda_max: h.lambda_max,
            lambda_min: h.lambda_min,
            gap_to_pi: h.gap_to_pi,
        })
        .collect();
    opts.write_out(&out, &mut r)?;
    let exit_code = if violations.is_empty() {
        0
    } else {
        HILBERT_VIOLATION_EXIT
    };
    Ok(Outcome {
        report: r,
        exit_code,
    })
}

#[derive(Serialize)]
struct GpOut {
    seed: u64,
    samples: usize,
    a: f64,
    b: f64,
    ex2: f64,
    ey2: f64,
    ey2_empirical: f64,
    sandwich_holds: bool,
}

pub fn gp_sim(path: &Path, opts: &Options) -> Result<Outcome, CliError> {
    opts.validate()?;
    let (model, phat) = read_json::<ModelFile>(path)?.to_model(path, opts.rank_tol)?;
    let s = sandwich_check(&model, &phat, DEFAULT_SANDWICH_SLACK)?;
    let ks = sample_kl(&model, &phat, opts.samples, opts.seed)?;
    let empirical = empirical_variance(&ks);
    let rel_error = if s.ey2 > 0.0 {
        (empirical - s.ey2).abs() / s.ey2
    } else {
        empirical
    };
    let mc_tol = 4.0 * (2.0 / opts.samples as f64).sqrt();

    let mut r = String::new();
    let _ = writeln!(
        r,
        "J={} N={} samples={} seed={}",
        model.measure().len(),
        model.frame().len(),
        opts.samples,
        opts.seed
    );
    let _ = writeln!(r, "a={} b={}", g6(model.a()), g6(model.b()));
    let _ = writeln!(
        r,
        "ex2={} ey2={} ey2_empirical={}",
        g6(s.ex2),
        g6(s.ey2),
        g6(empirical)
    );
    let _ = writeln!(
        r,
        "mc_rel_error={} mc_tolerance={}",
        g6(rel_error),
        g6(mc_tol)
    );
    let _ = writeln!(r, "sandwich={}", if s.holds { "holds" } else { "fails" });
    opts.write_out(
        &GpOut {
            seed: opts.seed,
            samples: opts.samples,
            a: model.a(),
            b: model.b(),
            ex2: s.ex2,
            ey2: s.ey2,
            ey2_empirical: empirical,
            sandwich_holds: s.holds,
        },
        &mut r,
    )?;
    let exit_code = if s.holds { 0 } else { SANDWICH_FAILURE_EXIT };
    Ok(Outcome {
        report: r,
        exit_code,
    })
}

pub fn canonical(path: &Path, opts: &Options) -> Result<Outcome, CliError> {
    opts.validate()?;
    let fs = load_frame(path)?;
    let ctf = canonical_tight(&fs, opts.rank_tol)?;
    let mut r = String::new();
    let _ = writeln!(
        r,
        "N={} M={} rank_tol={}",
        fs.len(),
        fs.n_points(),
        g6(opts.rank_tol)
    );
    for (n, psi) in ctf.vectors().rows().into_iter().enumerate() {
        let _ = writeln!(r, "psi[{n}] {}", row(psi.iter().copied()));
    }
    opts.write_out(
        &FrameFile::from_system(ctf.frame(), Some(opts.rank_tol)),
        &mut r,
    )?;
    Ok(Outcome::ok(r))
}

#[derive(Serialize)]
struct VerifyOut {
    rank: usize,
    gramian_vs_tt_star: f64,
    adjoint: f64,
    reproducing: f64,
    tight_kernel: f64,
    kernel_psd_violation: f64,
    tight_parseval: f64,
    isometry: f64,
    lax_identity: f64,
    lax_projector: f64,
    polar: f64,
    max_residual: f64,
}

pub fn verify(path: &Path, opts: &Options) -> Result<Outcome, CliError> {
    opts.validate()?;
    let fs = load_frame(path)?;
    let v = verify_identities(&fs, opts.rank_tol)?;
    let out = VerifyOut {
        rank: v.rank,
        gramian_vs_tt_star: v.gramian_vs_tt_star,
        adjoint: v.adjoint,
        reproducing: v.reproducing,
        tight_kernel: v.tight_kernel,
        kernel_psd_violation: v.kernel_psd_violation,
        tight_parseval: v.tight_parseval,
        isometry: v.isometry,
        lax_identity: v.lax_identity,
        lax_projector: v.lax_projector,
        polar: v.polar,
        max_residual: v.max_residual(),
    };
    let mut r = String::new();
    let _ = writeln!(r, "rank={} rank_tol={}", v.rank, g6(opts.rank_tol));
    for (name, value) in [
        ("gramian_vs_tt_star", out.gramian_vs_tt_star),
        ("adjoint", out.adjoint),
        ("reproducing", out.reproducing),
        ("tight_kernel", out.tight_kernel),
        ("kernel_psd_violation", out.kernel_psd_violation),
        ("tight_parseval", out.tight_parseval),
        ("isometry", out.isometry),
        ("lax_identity", out.lax_identity),
        ("lax_projector", out.lax_projector),
        ("polar", out.polar),
        ("max_residual", out.max_residual),
    ] {
        let _ = writeln!(r, "{name}={}", g6(value));
    }
    opts.write_out(&out, &mut r)?;
    Ok(Outcome::ok(r))
}
