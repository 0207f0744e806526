//! On-disk formats.
//!
//! A channel file is a JSON object with one key per line and one Kraus
//! operator per line:
//!
//! ```text
//! {
//!   "schema_version": 1,
//!   "n": 2,
//!   "name": "pinching",
//!   "seed": null,
//!   "kraus": [
//!     [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0]]],
//!     [[[0.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]
//!   ]
//! }
//! ```
//!
//! Matrices are row-major nested arrays and every complex entry is a
//! `[re, im]` pair. An empty `kraus` list is the zero map.

use std::fmt::Write as _;
use std::path::Path;

use gns_core::numerics::{Complex64, ComplexMatrix};
use gns_core::CpMap;
use serde::Deserialize;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelFile {
    pub n: usize,
    pub kraus: Vec<ComplexMatrix>,
    pub name: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Deserialize)]
struct RawChannel {
    schema_version: u32,
    n: usize,
    kraus: Vec<RawMatrix>,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    seed: Option<u64>,
}

impl ChannelFile {
    pub fn from_map(p: &CpMap, name: Option<String>, seed: Option<u64>) -> Self {
        Self {
            n: p.n(),
            kraus: p.kraus().to_vec(),
            name,
            seed,
        }
    }

    pub fn to_map(&self) -> Result<CpMap, CliError> {
        CpMap::new(self.n, self.kraus.clone()).map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawChannel = serde_json::from_str(text)
            .map_err(|e| CliError::Input(format!("malformed channel file: {e}")))?;
        if raw.schema_version != SCHEMA_VERSION {
            return Err(CliError::Input(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                raw.schema_version
            )));
        }
        if raw.n == 0 {
            return Err(CliError::Input("n must be positive".into()));
        }
        let kraus = raw
            .kraus
            .iter()
            .enumerate()
            .map(|(r, m)| {
                matrix_from_raw(m, Some((raw.n, raw.n)))
                    .map_err(|e| CliError::Input(format!("Kraus operator {r}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            n: raw.n,
            kraus,
            name: raw.name,
            seed: raw.seed,
        })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"schema_version\": {SCHEMA_VERSION},");
        let _ = writeln!(out, "  \"n\": {},", self.n);
        let _ = writeln!(
            out,
            "  \"name\": {},",
            serde_json::to_string(&self.name).unwrap()
        );
        let _ = writeln!(
            out,
            "  \"seed\": {},",
            serde_json::to_string(&self.seed).unwrap()
        );
        if self.kraus.is_empty() {
            out.push_str("  \"kraus\": []\n");
        } else {
            out.push_str("  \"kraus\": [\n");
            for (r, t) in self.kraus.iter().enumerate() {
                let sep = if r + 1 == self.kraus.len() { "" } else { "," };
                let _ = writeln!(
                    out,
                    "    {}{sep}",
                    serde_json::to_string(&matrix_to_raw(t)).unwrap()
                );
            }
            out.push_str("  ]\n");
        }
        out.push_str("}\n");
        out
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.render())
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
    }
}

fn matrix_to_raw(m: &ComplexMatrix) -> RawMatrix {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn matrix_from_raw(
    raw: &RawMatrix,
    shape: Option<(usize, usize)>,
) -> Result<ComplexMatrix, String> {
    let rows = raw.len();
    let cols = raw.first().map_or(0, Vec::len);
    if let Some((r, c)) = shape {
        if rows != r {
            return Err(format!("expected {r} rows, found {rows}"));
        }
        if rows > 0 && cols != c {
            return Err(format!("expected {c} columns, found {cols}"));
        }
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in raw.iter().enumerate() {
        if row.len() != cols {
            return Err(format!(
                "ragged matrix: row {i} has {} entries, row 0 has {cols}",
                row.len()
            ));
        }
        for &[re, im] in row {
            if !(re.is_finite() && im.is_finite()) {
                return Err(format!("non-finite entry in row {i}"));
            }
            data.push(Complex64::new(re, im));
        }
    }
    ComplexMatrix::from_vec(rows, cols, data).map_err(|e| e.to_string())
}

/// A bare matrix file, used for the witness isometry.
///
/// `{"rows": r, "cols": c, "data": [[[re, im], ...], ...]}` with one matrix
/// row per line. `rows` and `cols` are explicit so that `r x 0` matrices
/// survive the round trip.
pub fn render_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"rows\": {},", m.rows());
    let _ = writeln!(out, "  \"cols\": {},", m.cols());
    if m.rows() == 0 {
        out.push_str("  \"data\": []\n");
    } else {
        out.push_str("  \"data\": [\n");
        for i in 0..m.rows() {
            let row: Vec<[f64; 2]> = m.row(i).iter().map(|z| [z.re, z.im]).collect();
            let sep = if i + 1 == m.rows() { "" } else { "," };
            let _ = writeln!(out, "    {}{sep}", serde_json::to_string(&row).unwrap());
        }
        out.push_str("  ]\n");
    }
    out.push_str("}\n");
    out
}

#[derive(Deserialize)]
struct RawMatrixFile {
    rows: usize,
    cols: usize,
    data: RawMatrix,
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, CliError> {
    let raw: RawMatrixFile = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("malformed matrix file: {e}")))?;
    if raw.cols == 0 {
        if raw.data.len() != raw.rows || raw.data.iter().any(|r| !r.is_empty()) {
            return Err(CliError::Input(
                "matrix data does not match declared shape".into(),
            ));
        }
        return Ok(ComplexMatrix::zeros(raw.rows, 0));
    }
    matrix_from_raw(&raw.data, Some((raw.rows, raw.cols))).map_err(CliError::Input)
}
