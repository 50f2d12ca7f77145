//! Concurrence sweeps over width, momentum correlation and rapidity.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use relspin::distributions::RadialProfile;
use relspin::{
    concurrence, marginal_entropy, reduce_spin_density, BipartiteState, BoostError, DistributionError,
    EntanglementError, IntegrationError, IntegratorSpec, MomentumDistribution, Rapidity,
};
use serde::{Deserialize, Serialize};
use tempfile::NamedTempFile;
use thiserror::Error;

use crate::config::{ConfigError, SweepConfig, XValue};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// One `(σ/m, x, ξ)` grid point. Failed points carry `error` and no values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub sigma_over_m: f64,
    #[serde(with = "x_text")]
    pub x_or_delta: XValue,
    pub xi: f64,
    pub concurrence: Option<f64>,
    pub error_bound: Option<f64>,
    pub entropy_marginal: Option<f64>,
    pub backend: String,
    pub seed: u64,
    pub wall_time_ms: Option<u64>,
    /// Concurrence falls below that of a smaller `x` at the same `(σ/m, ξ)`
    /// by more than the combined error bounds.
    pub monotone_violation: bool,
    pub error: Option<String>,
}

mod x_text {
    use super::XValue;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &XValue, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<XValue, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    /// Rows whose integrator missed its target tolerance.
    pub non_converged: usize,
    pub failed: usize,
}

#[derive(Debug, Clone)]
struct RowFailure {
    message: String,
    non_converged: bool,
}

impl From<BoostError> for RowFailure {
    fn from(e: BoostError) -> Self {
        let non_converged = matches!(
            e,
            BoostError::Integration(IntegrationError::NonConvergent { .. })
                | BoostError::Distribution(DistributionError::Integration(IntegrationError::NonConvergent { .. }))
        );
        Self { message: e.to_string(), non_converged }
    }
}

impl From<EntanglementError> for RowFailure {
    fn from(e: EntanglementError) -> Self {
        Self { message: e.to_string(), non_converged: false }
    }
}

impl From<DistributionError> for RowFailure {
    fn from(e: DistributionError) -> Self {
        BoostError::from(e).into()
    }
}

/// Rest-frame singlet for one series.
pub fn series_state(sigma_over_m: f64, x: XValue, spec: &IntegratorSpec) -> Result<BipartiteState, BoostError> {
    let dist = match x {
        XValue::Correlation(x) => MomentumDistribution::entangled_gaussian(sigma_over_m, x)?,
        XValue::Delta => MomentumDistribution::delta_correlated(RadialProfile::gaussian(sigma_over_m)?),
    };
    BipartiteState::prepare(&dist, relspin::BellState::PsiMinus.vector(), spec)
}

struct Point {
    concurrence: f64,
    error_bound: f64,
    entropy: f64,
}

fn evaluate(state: &BipartiteState, xi: f64, spec: &IntegratorSpec) -> Result<Point, RowFailure> {
    let xi = Rapidity::along_z(xi).map_err(|e| RowFailure { message: e.to_string(), non_converged: false })?;
    let rho = reduce_spin_density(state, xi, spec)?;
    let c = concurrence(&rho)?;
    Ok(Point { concurrence: c.value, error_bound: c.error_bound, entropy: marginal_entropy(&rho)? })
}

/// Evaluates every grid point and writes the CSV to `config.output_path`.
pub fn run_fig1_sweep(config: &SweepConfig) -> Result<SweepOutcome, SweepError> {
    config.validate()?;
    let outcome = compute_sweep(config);
    write_csv(&config.output_path, config, &outcome.records)?;
    Ok(outcome)
}

/// Evaluates every grid point in `(σ/m, x, ξ)` order without writing.
pub fn compute_sweep(config: &SweepConfig) -> SweepOutcome {
    let spec = &config.integrator;
    let series: Vec<(f64, XValue)> =
        config.sigma_over_m.iter().flat_map(|&s| config.x.iter().map(move |&x| (s, x))).collect();
    let states: Vec<Result<BipartiteState, RowFailure>> =
        series.par_iter().map(|&(s, x)| series_state(s, x, spec).map_err(RowFailure::from)).collect();
    let xi = config.xi_grid.points();
    let tasks: Vec<(usize, f64)> = (0..series.len()).flat_map(|k| xi.iter().map(move |&v| (k, v))).collect();

    let results: Vec<(Result<Point, RowFailure>, Option<u64>)> = tasks
        .par_iter()
        .map(|&(k, v)| {
            let start = Instant::now();
            let r = match &states[k] {
                Ok(state) => evaluate(state, v, spec),
                Err(e) => Err(e.clone()),
            };
            let ms = config.record_timing.then(|| start.elapsed().as_millis() as u64);
            (r, ms)
        })
        .collect();

    let mut outcome = SweepOutcome { records: Vec::with_capacity(tasks.len()), non_converged: 0, failed: 0 };
    for (&(k, v), (r, ms)) in tasks.iter().zip(results) {
        let (sigma_over_m, x) = series[k];
        let mut record = SweepRecord {
            sigma_over_m,
            x_or_delta: x,
            xi: v,
            concurrence: None,
            error_bound: None,
            entropy_marginal: None,
            backend: spec.backend.label().to_owned(),
            seed: spec.seed,
            wall_time_ms: ms,
            monotone_violation: false,
            error: None,
        };
        match r {
            Ok(p) => {
                record.concurrence = Some(p.concurrence);
                record.error_bound = Some(p.error_bound);
                record.entropy_marginal = Some(p.entropy);
            }
            Err(f) => {
                outcome.failed += 1;
                outcome.non_converged += usize::from(f.non_converged);
                record.error = Some(f.message);
            }
        }
        outcome.records.push(record);
    }
    flag_monotone_violations(&mut outcome.records);
    outcome
}

/// Marks rows whose concurrence drops below that of a smaller `x` at the
/// same `(σ/m, ξ)` by more than the two error bounds.
pub fn flag_monotone_violations(records: &mut [SweepRecord]) {
    let value = |r: &SweepRecord| r.concurrence.zip(r.error_bound);
    let flags: Vec<bool> = records
        .iter()
        .map(|r| {
            let Some((c, e)) = value(r) else { return false };
            records.iter().any(|o| {
                o.sigma_over_m == r.sigma_over_m
                    && o.xi == r.xi
                    && o.x_or_delta.ordinal() < r.x_or_delta.ordinal()
                    && value(o).is_some_and(|(co, eo)| c < co - (e + eo))
            })
        })
        .collect();
    for (r, f) in records.iter_mut().zip(flags) {
        r.monotone_violation = f;
    }
}

/// Opens a temporary file next to `path`, for a later atomic rename.
pub(crate) fn temp_beside(path: &Path) -> std::io::Result<NamedTempFile> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    NamedTempFile::new_in(dir)
}

/// Writes metadata comments, the header and all records, then renames the
/// file into place.
pub fn write_csv(path: &Path, config: &SweepConfig, records: &[SweepRecord]) -> Result<(), SweepError> {
    let mut tmp = temp_beside(path)?;
    writeln!(tmp, "# relspin-cli {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(tmp, "# seed: {}", config.integrator.seed)?;
    writeln!(tmp, "# integrator: {}", config.integrator.describe())?;
    writeln!(tmp, "# config_sha256: {}", config.hash())?;
    {
        let mut w = csv::Writer::from_writer(tmp.as_file_mut());
        for r in records {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<SweepRecord>, SweepError> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    Ok(reader.deserialize().collect::<Result<_, _>>()?)
}
