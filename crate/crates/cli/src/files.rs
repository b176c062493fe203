//! JSON file schemas, validation with field-level diagnostics, and exact
//! (17 significant digit) serialization.

use std::fs;
use std::io;
use std::path::Path;

use frame_rkhs::gp::{fourier_at_atoms, AtomicMeasure, ComplexVector, GaussianModel, SigmaFrame};
use frame_rkhs::rkhs::KernelMatrix;
use frame_rkhs::{FrameSystem, Grid};
use ndarray::Array2;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub grid: GridSpec,
    pub vectors: Vec<Vec<f64>>,
    /// Present on files produced by `canonical`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Rkhs,
    Naive,
}

impl KernelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            KernelKind::Rkhs => "rkhs",
            KernelKind::Naive => "naive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelFile {
    pub grid: GridSpec,
    pub matrix: Vec<Vec<f64>>,
    pub kind: KernelKind,
    pub rank_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub u: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhatSpec {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiXSpec {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub atoms: Vec<Atom>,
    pub frame: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phat: Option<PhatSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_x: Option<PhiXSpec>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::schema(path, e.to_string()))
}

/// Writes every `f64` as `d.dddddddddddddddde±x`: 17 significant digits,
/// which always parses back to the same bits.
struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value
        .serialize(&mut ser)
        .expect("in-memory serialization of finite values");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    fs::write(path, to_json_string(value)).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn rows_to_array(
    path: &Path,
    field: &str,
    rows: &[Vec<f64>],
    cols: usize,
) -> Result<Array2<f64>, CliError> {
    if rows.is_empty() {
        return Err(CliError::schema(
            path,
            format!("{field}: needs at least one row"),
        ));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(CliError::schema(
                path,
                format!(
                    "{field}[{i}]: expected {cols} entries (one per grid point), found {}",
                    row.len()
                ),
            ));
        }
    }
    Ok(Array2::from_shape_fn((rows.len(), cols), |(i, j)| {
        rows[i][j]
    }))
}

impl GridSpec {
    pub fn from_grid(grid: &Grid) -> Self {
        GridSpec {
            points: grid.points().to_vec(),
            weights: grid.weights().to_vec(),
        }
    }

    pub fn to_grid(&self, path: &Path, field: &str) -> Result<Grid, CliError> {
        if self.weights.len() != self.points.len() {
            return Err(CliError::schema(
                path,
                format!(
                    "{field}.weights: expected {} entries (one per point), found {}",
                    self.points.len(),
                    self.weights.len()
                ),
            ));
        }
        if let Some(i) = self.weights.iter().position(|w| *w <= 0.0) {
            return Err(CliError::schema(
                path,
                format!("{field}.weights[{i}]: must be positive"),
            ));
        }
        Grid::new(self.points.clone(), self.weights.clone())
            .map_err(|e| CliError::schema(path, format!("{field}: {e}")))
    }
}

impl FrameFile {
    pub fn from_system(fs: &FrameSystem, rank_tol: Option<f64>) -> Self {
        FrameFile {
            grid: GridSpec::from_grid(fs.grid()),
            vectors: fs
                .vectors()
                .rows()
                .into_iter()
                .map(|r| r.to_vec())
                .collect(),
            rank_tol,
        }
    }

    pub fn to_system(&self, path: &Path) -> Result<FrameSystem, CliError> {
        let grid = self.grid.to_grid(path, "grid")?;
        let vectors = rows_to_array(path, "vectors", &self.vectors, grid.len())?;
        FrameSystem::new(grid, vectors).map_err(|e| CliError::schema(path, format!("vectors: {e}")))
    }
}

impl KernelFile {
    pub fn from_kernel(k: &KernelMatrix, kind: KernelKind, rank_tol: f64) -> Self {
        KernelFile {
            grid: GridSpec::from_grid(k.grid()),
            matrix: k.values().rows().into_iter().map(|r| r.to_vec()).collect(),
            kind,
            rank_tol,
        }
    }
}

impl ModelFile {
    /// Builds the model and the probe `φ̂` on the atoms, either given directly
    /// or as the discrete Fourier transform of `phi_x`.
    pub fn to_model(
        &self,
        path: &Path,
        rank_tol: f64,
    ) -> Result<(GaussianModel, ComplexVector), CliError> {
        let measure = AtomicMeasure::new(self.atoms.iter().map(|a| (a.u, a.mass)).collect())
            .map_err(|e| CliError::schema(path, format!("atoms: {e}")))?;
        let j = measure.len();
        let vectors = rows_to_array(path, "frame", &self.frame, j)?;
        let sf = SigmaFrame::new(measure, vectors)
            .map_err(|e| CliError::schema(path, format!("frame: {e}")))?;
        let phat = match (&self.phat, &self.phi_x) {
            (Some(p), None) => {
                for (name, v) in [("re", &p.re), ("im", &p.im)] {
                    if v.len() != j {
                        return Err(CliError::schema(
                            path,
                            format!(
                                "phat.{name}: expected {j} entries (one per atom), found {}",
                                v.len()
                            ),
                        ));
                    }
                }
                ComplexVector::new(p.re.clone(), p.im.clone())
                    .map_err(|e| CliError::schema(path, format!("phat: {e}")))?
            }
            (None, Some(px)) => {
                let grid = px.grid.to_grid(path, "phi_x.grid")?;
                if px.values.len() != grid.len() {
                    return Err(CliError::schema(
                        path,
                        format!(
                            "phi_x.values: expected {} entries (one per grid point), found {}",
                            grid.len(),
                            px.values.len()
                        ),
                    ));
                }
                fourier_at_atoms(&grid, &px.values, sf.measure())
                    .map_err(|e| CliError::schema(path, format!("phi_x: {e}")))?
            }
            _ => {
                return Err(CliError::schema(
                    path,
                    "model: exactly one of `phat` or `phi_x` is required",
                ))
            }
        };
        Ok((GaussianModel::new(sf, rank_tol)?, phat))
    }
}
