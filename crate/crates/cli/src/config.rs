//! Scenario configuration: a schema-versioned TOML file describing the
//! system, the horizon, the timing source of every stage, and output
//! paths.
//!
//! Timing rows are either explicit values or a named generator. All
//! random generation runs on a seeded ChaCha8 stream so identical
//! configs produce identical traces; the algorithm and seed are echoed
//! into the trace header.

use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use maxplus_queues::{ServiceProfile, SystemSpec};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const PRNG_ALGORITHM: &str = "chacha8";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    Gg1,
    TandemInfinite,
    TandemFinite,
    ClosedTandem,
}

impl SystemKind {
    pub fn label(self) -> &'static str {
        match self {
            SystemKind::Gg1 => "gg1",
            SystemKind::TandemInfinite => "tandem_infinite",
            SystemKind::TandemFinite => "tandem_finite",
            SystemKind::ClosedTandem => "closed_tandem",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentationChoice {
    Scalar,
    Matrix,
    Des,
}

impl RepresentationChoice {
    pub fn label(self) -> &'static str {
        match self {
            RepresentationChoice::Scalar => "scalar",
            RepresentationChoice::Matrix => "matrix",
            RepresentationChoice::Des => "des",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema: u32,
    pub system: SystemSection,
    pub run: RunSection,
    pub timing: TimingSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub verify: VerifySection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub kind: SystemKind,
    pub servers: Option<usize>,
    pub buffers: Option<Vec<usize>>,
    pub customers: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub horizon: usize,
    pub representation: Option<RepresentationChoice>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingSection {
    pub seed: Option<u64>,
    pub rows: Vec<TimingRow>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimingRow {
    Explicit { values: Vec<f64> },
    Constant { value: f64 },
    Uniform { lo: f64, hi: f64 },
    Exponential { rate: f64 },
}

impl TimingRow {
    fn is_random(&self) -> bool {
        matches!(self, TimingRow::Uniform { .. } | TimingRow::Exponential { .. })
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub expected_trace: Option<PathBuf>,
}

/// A parsed and validated scenario, ready to run.
#[derive(Debug)]
pub struct Scenario {
    pub spec: SystemSpec,
    pub profile: ServiceProfile,
    pub horizon: usize,
    pub representation: Option<RepresentationChoice>,
    pub kind: SystemKind,
    pub seed: Option<u64>,
    pub uses_random_timing: bool,
    pub trace_path: Option<PathBuf>,
    pub expected_trace: Option<PathBuf>,
}

pub fn load(path: &Path) -> CliResult<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
    let config: ScenarioConfig = toml::from_str(&text)
        .map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))?;
    realize(config)
}

fn input(field: &str, msg: String) -> CliError {
    CliError::Input(format!("{field}: {msg}"))
}

/// Validates the raw sections and expands the timing rows into a
/// concrete profile.
pub fn realize(config: ScenarioConfig) -> CliResult<Scenario> {
    if config.schema != SCHEMA_VERSION {
        return Err(input(
            "schema",
            format!("expected version {SCHEMA_VERSION}, got {}", config.schema),
        ));
    }

    let spec = build_spec(&config.system)?;
    let horizon = config.run.horizon;

    let expected_rows = spec.profile_rows();
    if config.timing.rows.len() != expected_rows {
        let hint = if spec.is_closed() {
            "one per server"
        } else {
            "the arrival row plus one per server"
        };
        return Err(input(
            "timing.rows",
            format!(
                "expected {expected_rows} rows ({hint}), got {}",
                config.timing.rows.len()
            ),
        ));
    }

    let uses_random_timing = config.timing.rows.iter().any(TimingRow::is_random);
    if uses_random_timing && config.timing.seed.is_none() {
        return Err(input(
            "timing.seed",
            "required when any timing row is a random generator".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.timing.seed.unwrap_or(0));
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(expected_rows);
    for (idx, row) in config.timing.rows.iter().enumerate() {
        rows.push(expand_row(row, idx, horizon, &mut rng)?);
    }
    let profile = ServiceProfile::new(rows)
        .map_err(|e| input("timing.rows", e.to_string()))?;

    Ok(Scenario {
        spec,
        profile,
        horizon,
        representation: config.run.representation,
        kind: config.system.kind,
        seed: config.timing.seed,
        uses_random_timing,
        trace_path: config.output.trace,
        expected_trace: config.verify.expected_trace,
    })
}

fn build_spec(system: &SystemSection) -> CliResult<SystemSpec> {
    let servers = system.servers;
    let buffers = system.buffers.clone();
    let customers = system.customers;

    let reject_buffers = |kind: &str| -> CliResult<()> {
        if buffers.is_some() {
            return Err(input(
                "system.buffers",
                format!("not applicable to kind \"{kind}\""),
            ));
        }
        Ok(())
    };
    let reject_customers = |kind: &str| -> CliResult<()> {
        if customers.is_some() {
            return Err(input(
                "system.customers",
                format!("not applicable to kind \"{kind}\""),
            ));
        }
        Ok(())
    };

    let spec = match system.kind {
        SystemKind::Gg1 => {
            if let Some(n) = servers {
                if n != 1 {
                    return Err(input("system.servers", "gg1 has exactly one server".into()));
                }
            }
            reject_buffers("gg1")?;
            reject_customers("gg1")?;
            SystemSpec::Gg1
        }
        SystemKind::TandemInfinite => {
            let n = servers.ok_or_else(|| input("system.servers", "required".into()))?;
            reject_buffers("tandem_infinite")?;
            reject_customers("tandem_infinite")?;
            SystemSpec::TandemInfinite { servers: n }
        }
        SystemKind::TandemFinite => {
            let n = servers.ok_or_else(|| input("system.servers", "required".into()))?;
            let b = system
                .buffers
                .clone()
                .ok_or_else(|| input("system.buffers", "required".into()))?;
            reject_customers("tandem_finite")?;
            SystemSpec::TandemFinite {
                servers: n,
                buffers: b,
            }
        }
        SystemKind::ClosedTandem => {
            let n = servers.ok_or_else(|| input("system.servers", "required".into()))?;
            let c = customers.ok_or_else(|| input("system.customers", "required".into()))?;
            reject_buffers("closed_tandem")?;
            SystemSpec::ClosedTandem {
                servers: n,
                customers: c,
            }
        }
    };
    spec.validate()
        .map_err(|e| input("system", e.to_string()))?;
    Ok(spec)
}

fn expand_row(
    row: &TimingRow,
    idx: usize,
    horizon: usize,
    rng: &mut ChaCha8Rng,
) -> CliResult<Vec<f64>> {
    let field = format!("timing.rows[{idx}]");
    match row {
        TimingRow::Explicit { values } => {
            if values.len() != horizon {
                return Err(input(
                    &format!("{field}.values"),
                    format!("expected {horizon} entries, got {}", values.len()),
                ));
            }
            for (k, &v) in values.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(input(
                        &format!("{field}.values[{k}]"),
                        format!("{v} is not a finite non-negative duration"),
                    ));
                }
            }
            Ok(values.clone())
        }
        TimingRow::Constant { value } => {
            if !value.is_finite() || *value < 0.0 {
                return Err(input(
                    &format!("{field}.value"),
                    format!("{value} is not a finite non-negative duration"),
                ));
            }
            Ok(vec![*value; horizon])
        }
        TimingRow::Uniform { lo, hi } => {
            if !lo.is_finite() || !hi.is_finite() || *lo < 0.0 || hi < lo {
                return Err(input(
                    &format!("{field}"),
                    format!("uniform bounds need 0 <= lo <= hi, got lo={lo} hi={hi}"),
                ));
            }
            Ok((0..horizon)
                .map(|_| lo + (hi - lo) * rng.gen::<f64>())
                .collect())
        }
        TimingRow::Exponential { rate } => {
            if !rate.is_finite() || *rate <= 0.0 {
                return Err(input(
                    &format!("{field}.rate"),
                    format!("rate must be positive and finite, got {rate}"),
                ));
            }
            // Inverse CDF on the unit interval: u in [0, 1) keeps the
            // logarithm argument in (0, 1].
            Ok((0..horizon)
                .map(|_| -(1.0 - rng.gen::<f64>()).ln() / rate)
                .collect())
        }
    }
}
