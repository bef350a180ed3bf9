//! Queueing-system descriptions and their per-customer transition matrices.
//!
//! A [`SystemSpec`] names the topology, a [`ServiceProfile`] carries the
//! timing data, and the `build_*` functions assemble the transition
//! matrix (or matrix pair, for closed loops) of a single customer index.
//! Matrices are rebuilt on demand rather than materialized for the whole
//! horizon; each one is cheap and the horizon can be long.

use crate::error::{Error, Result};
use crate::linalg::MaxPlusMatrix;
use crate::semiring::{big_otimes, MaxPlusScalar, E, EPS};

/// Topology of a supported queueing system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemSpec {
    /// Single server fed by an arrival stream, infinite buffer.
    Gg1,
    /// `servers` queues in series, all buffers infinite.
    TandemInfinite { servers: usize },
    /// `servers` queues in series; `buffers[i]` is the capacity in front
    /// of server `i + 2` (the first server's input buffer is infinite and
    /// the last server is never blocked).
    TandemFinite { servers: usize, buffers: Vec<usize> },
    /// A loop of `servers` queues around which `customers` circulate,
    /// all initially queued at the first server.
    ClosedTandem { servers: usize, customers: usize },
}

impl SystemSpec {
    /// Number of service stages (excludes the arrival stage of open systems).
    pub fn servers(&self) -> usize {
        match self {
            SystemSpec::Gg1 => 1,
            SystemSpec::TandemInfinite { servers }
            | SystemSpec::TandemFinite { servers, .. }
            | SystemSpec::ClosedTandem { servers, .. } => *servers,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, SystemSpec::ClosedTandem { .. })
    }

    /// Number of rows the matching [`ServiceProfile`] must have: one per
    /// server, plus the arrival row for open systems.
    pub fn profile_rows(&self) -> usize {
        if self.is_closed() {
            self.servers()
        } else {
            self.servers() + 1
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SystemSpec::Gg1 => Ok(()),
            SystemSpec::TandemInfinite { servers } => {
                if *servers == 0 {
                    return Err(Error::InvalidInput("tandem needs at least one server".into()));
                }
                Ok(())
            }
            SystemSpec::TandemFinite { servers, buffers } => {
                if *servers == 0 {
                    return Err(Error::InvalidInput("tandem needs at least one server".into()));
                }
                if buffers.len() != servers - 1 {
                    return Err(Error::InvalidInput(format!(
                        "finite tandem with {} servers needs {} buffer capacities, got {}",
                        servers,
                        servers - 1,
                        buffers.len()
                    )));
                }
                Ok(())
            }
            SystemSpec::ClosedTandem { servers, customers } => {
                if *servers == 0 {
                    return Err(Error::InvalidInput("closed loop needs at least one server".into()));
                }
                if *customers == 0 {
                    return Err(Error::InvalidInput(
                        "closed loop needs at least one circulating customer".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Per-customer timing data: one row per stage, one column per customer.
///
/// For open systems row 0 holds the interarrival times and rows `1..=n`
/// the service times; closed systems have no arrival row. Rows are
/// stored 0-based either way; the model functions interpret them.
#[derive(Debug, Clone, PartialEq)]
pub struct ServiceProfile {
    rows: Vec<Vec<f64>>,
    horizon: usize,
}

impl ServiceProfile {
    /// Validates rectangularity and that every duration is finite and
    /// non-negative.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("profile must have at least one row".into()));
        }
        let horizon = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != horizon {
                return Err(Error::InvalidInput(format!(
                    "profile row {i} has {} entries, expected {horizon}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "profile entry ({i}, {}) = {v} must be a finite non-negative duration",
                        j + 1
                    )));
                }
            }
        }
        Ok(ServiceProfile { rows, horizon })
    }

    /// Number of customers covered by the timing data.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    /// Timing entry for stage `i` (0-based row) and customer `k` (1-based).
    pub fn tau(&self, i: usize, k: usize) -> MaxPlusScalar {
        MaxPlusScalar::finite(self.rows[i][k - 1])
    }

    /// Sum of the durations in a row; used for busy-time metrics.
    pub fn row_total(&self, i: usize) -> f64 {
        self.rows[i].iter().sum()
    }

    pub(crate) fn check_customer(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.horizon {
            return Err(Error::IndexOutOfRange {
                index: k,
                horizon: self.horizon,
            });
        }
        Ok(())
    }

    pub(crate) fn check_rows(&self, expected: usize, what: &str) -> Result<()> {
        if self.rows.len() != expected {
            return Err(Error::InvalidInput(format!(
                "{what} expects {expected} profile rows, got {}",
                self.rows.len()
            )));
        }
        Ok(())
    }
}

/// Transition data of one customer index: a single matrix for open
/// systems, or the (recurrence, delay) pair for closed loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransitionMatrix {
    Open(MaxPlusMatrix),
    Closed {
        recurrence: MaxPlusMatrix,
        delay: MaxPlusMatrix,
    },
}

/// Cumulative product τ_{i} ⊗ τ_{i−1} ⊗ ⋯ ⊗ τ_{j} of profile rows
/// `j..=i` at customer `k`.
fn stage_product(profile: &ServiceProfile, j: usize, i: usize, k: usize) -> MaxPlusScalar {
    big_otimes((j..=i).map(|m| profile.tau(m, k)))
}

/// 2x2 transition matrix of the single-queue system:
/// `[[τ0, eps], [τ1 ⊗ τ0, τ1]]`.
pub fn build_gg1_matrix(profile: &ServiceProfile, k: usize) -> Result<MaxPlusMatrix> {
    profile.check_rows(2, "single queue")?;
    build_tandem_matrix(profile, k)
}

/// Lower triangular transition matrix of the infinite-buffer tandem:
/// entry (i, j) is the cumulative product of the stage times from row j
/// up to row i, and `eps` above the diagonal.
pub fn build_tandem_matrix(profile: &ServiceProfile, k: usize) -> Result<MaxPlusMatrix> {
    profile.check_customer(k)?;
    let dim = profile.row_count();
    Ok(MaxPlusMatrix::from_fn(dim, dim, |i, j| {
        if j <= i {
            stage_product(profile, j, i, k)
        } else {
            EPS
        }
    }))
}

/// Transition matrix of the zero-buffer tandem: the infinite-buffer
/// matrix with the superdiagonal entries of the service rows set to `e`.
/// The arrival row keeps `eps` there (the input buffer is infinite).
pub fn build_zero_buffer_matrix(profile: &ServiceProfile, k: usize) -> Result<MaxPlusMatrix> {
    let mut m = build_tandem_matrix(profile, k)?;
    let n = profile.row_count() - 1;
    for i in 1..n {
        m.set(i, i + 1, E);
    }
    Ok(m)
}

/// Matrix pair of the closed loop: the lower triangular recurrence part
/// and the delay part, which is `eps` outside its last column.
pub fn build_closed_matrices(
    profile: &ServiceProfile,
    k: usize,
) -> Result<(MaxPlusMatrix, MaxPlusMatrix)> {
    profile.check_customer(k)?;
    let n = profile.row_count();
    let recurrence = MaxPlusMatrix::from_fn(n, n, |i, j| {
        if j <= i {
            stage_product(profile, j, i, k)
        } else {
            EPS
        }
    });
    let delay = MaxPlusMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            stage_product(profile, 0, i, k)
        } else {
            EPS
        }
    });
    Ok((recurrence, delay))
}

/// Dispatches to the matrix builder matching the topology. Finite
/// buffers have a matrix form only when every capacity is zero.
pub fn transition_matrix(
    spec: &SystemSpec,
    profile: &ServiceProfile,
    k: usize,
) -> Result<TransitionMatrix> {
    spec.validate()?;
    profile.check_rows(spec.profile_rows(), "system")?;
    match spec {
        SystemSpec::Gg1 => Ok(TransitionMatrix::Open(build_gg1_matrix(profile, k)?)),
        SystemSpec::TandemInfinite { .. } => {
            Ok(TransitionMatrix::Open(build_tandem_matrix(profile, k)?))
        }
        SystemSpec::TandemFinite { buffers, .. } => {
            if buffers.iter().any(|&b| b > 0) {
                return Err(Error::UnsupportedTopology(
                    "no matrix form for positive buffer capacities; use the direct recursion"
                        .into(),
                ));
            }
            Ok(TransitionMatrix::Open(build_zero_buffer_matrix(profile, k)?))
        }
        SystemSpec::ClosedTandem { .. } => {
            let (recurrence, delay) = build_closed_matrices(profile, k)?;
            Ok(TransitionMatrix::Closed { recurrence, delay })
        }
    }
}
