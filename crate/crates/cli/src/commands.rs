use std::path::Path;
use std::time::Instant;

use gns_core::numerics::ComplexMatrix;
use gns_core::{channel, compose, gns, CpMap, RankPolicy};

use crate::error::CliError;
use crate::files::{render_matrix, ChannelFile};
use crate::report::Report;

/// Default ceiling on `n` for the two-step Gram (`n⁴ × n⁴` dense).
pub const DEFAULT_MAX_N: usize = 4;

/// Advisory trace-preservation / unitality checks use this entrywise bound.
const ADVISORY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Pinching,
    Identity,
    Random,
    Zero,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Pinching => "pinching",
            Kind::Identity => "identity",
            Kind::Random => "random",
            Kind::Zero => "zero",
        }
    }
}

pub fn make(
    kind: Kind,
    n: usize,
    count: Option<usize>,
    seed: Option<u64>,
) -> Result<ChannelFile, CliError> {
    if n == 0 {
        return Err(CliError::Input("n must be positive".into()));
    }
    if kind != Kind::Random && (count.is_some() || seed.is_some()) {
        return Err(CliError::Input(format!(
            "{} takes no Kraus count or seed",
            kind.name()
        )));
    }
    let map = match kind {
        Kind::Pinching => CpMap::pinching(n),
        Kind::Identity => CpMap::identity(n),
        Kind::Zero => CpMap::zero(n),
        Kind::Random => {
            let count =
                count.ok_or_else(|| CliError::Input("random needs a Kraus count".into()))?;
            if count == 0 {
                return Err(CliError::Input("Kraus count must be positive".into()));
            }
            CpMap::random(n, count, seed.unwrap_or(0))
        }
    };
    let seed = (kind == Kind::Random).then(|| seed.unwrap_or(0));
    Ok(ChannelFile::from_map(&map, Some(kind.name().into()), seed))
}

fn load(path: &Path) -> Result<CpMap, CliError> {
    ChannelFile::read(path)?.to_map()
}

fn args(paths: &[&Path]) -> Vec<String> {
    paths.iter().map(|p| p.display().to_string()).collect()
}

pub fn index(path: &Path, policy: RankPolicy) -> Result<Report, CliError> {
    let start = Instant::now();
    let p = load(path)?;
    let r = channel::index(&p, policy)?;
    let mut report = Report::new("index", args(&[path]), policy)
        .field("n", p.n())
        .field("kraus_count", p.kraus_count())
        .field("d_span", r.d_span)
        .field("d_choi", r.d_choi)
        .field("d_gram", r.d_gram)
        .field("agree", r.agree)
        .field("trace_preserving", p.is_trace_preserving(ADVISORY_TOL))
        .field("unital", p.is_unital(ADVISORY_TOL));
    report.pass = r.agree;
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

pub fn verify_theorem1(path: &Path, policy: RankPolicy) -> Result<Report, CliError> {
    let start = Instant::now();
    let p = load(path)?;
    let r = gns::verify_theorem1(&p, policy)?;
    let mut report = Report::new("verify-theorem1", args(&[path]), policy)
        .field("n", p.n())
        .field("gram_residual", r.gram_residual)
        .field("tolerance", r.tolerance)
        .field("rank_f", r.rank_f)
        .field("d_p", r.d_p);
    report.pass = r.pass;
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

pub fn verify_compose(
    first: &Path,
    second: &Path,
    policy: RankPolicy,
    max_n: usize,
) -> Result<Report, CliError> {
    let start = Instant::now();
    let p1 = load(first)?;
    let p2 = load(second)?;
    if p1.n() != p2.n() {
        return Err(CliError::Input(format!(
            "channels act on M_{} and M_{}",
            p1.n(),
            p2.n()
        )));
    }
    if p1.n() > max_n {
        return Err(CliError::Input(format!(
            "n = {} exceeds the cap {max_n}; pass --max-n to raise it",
            p1.n()
        )));
    }
    let r = compose::verify_factorization(&p1, &p2, policy)?;
    let mut report = Report::new("verify-compose", args(&[first, second]), policy)
        .field("n", p1.n())
        .field("residual", r.residual)
        .field("tolerance", r.tolerance)
        .field("rank_12", r.rank_12)
        .field("d1", r.d1)
        .field("d2", r.d2)
        .field("d1_times_d2", r.d1 * r.d2);
    report.pass = r.pass;
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Computes the isometry and returns it with the report; the caller decides
/// where the matrix goes.
pub fn witness(path: &Path, policy: RankPolicy) -> Result<(Report, ComplexMatrix), CliError> {
    let start = Instant::now();
    let p = load(path)?;
    let w = gns::morita_witness(&p, policy)?;
    let tolerance = gns::EQUALITY_TOL_ABS;
    let mut report = Report::new("witness", args(&[path]), policy)
        .field("n", p.n())
        .field("d", w.d)
        .field("rows", w.isometry.rows())
        .field("cols", w.isometry.cols())
        .field("residual", w.residual)
        .field("tolerance", tolerance);
    report.pass = w.residual <= tolerance;
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok((report, w.isometry))
}

pub fn write_witness(path: &Path, policy: RankPolicy, out: &Path) -> Result<Report, CliError> {
    let (report, v) = witness(path, policy)?;
    std::fs::write(out, render_matrix(&v))
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", out.display())))?;
    Ok(report.field("isometry_file", out.display().to_string()))
}
