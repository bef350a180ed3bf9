//! The linear recursions, scalar and matrix form.
//!
//! Every engine walks the customer index forward, resolving delayed
//! references (previous customer, the blocking term `k − b − 1`, the
//! circulation term `k − c`) through [`InitialConditions`]: time `e` at
//! customer zero, `eps` before that. Delayed states are read back from
//! the trace built so far, which holds every value the delay lines need.

use crate::error::{Error, Result};
use crate::linalg::MaxPlusVector;
use crate::model::{transition_matrix, ServiceProfile, SystemSpec, TransitionMatrix};
use crate::semiring::MaxPlusScalar;
use crate::trace::{DepartureTrace, InitialConditions};

fn check_horizon(profile: &ServiceProfile, horizon: usize) -> Result<()> {
    if horizon == 0 {
        return Err(Error::InvalidInput("horizon must be at least 1".into()));
    }
    if horizon > profile.horizon() {
        return Err(Error::InvalidInput(format!(
            "horizon {horizon} exceeds the {} customers in the profile",
            profile.horizon()
        )));
    }
    Ok(())
}

/// Single queue: A(k) = α_k ⊗ A(k−1), D(k) = τ_k ⊗ (A(k) ⊕ D(k−1)).
pub fn run_gg1_scalar(profile: &ServiceProfile, horizon: usize) -> Result<DepartureTrace> {
    profile.check_rows(2, "single queue")?;
    run_tandem_scalar(profile, horizon)
}

/// Infinite-buffer tandem:
/// D_0(k) = τ_{0k} ⊗ D_0(k−1), D_i(k) = τ_{ik} ⊗ (D_{i−1}(k) ⊕ D_i(k−1)).
pub fn run_tandem_scalar(profile: &ServiceProfile, horizon: usize) -> Result<DepartureTrace> {
    check_horizon(profile, horizon)?;
    let init = InitialConditions::default();
    let stages = profile.row_count();
    let mut rows: Vec<Vec<MaxPlusScalar>> = vec![Vec::with_capacity(horizon); stages];
    for k in 1..=horizon {
        let arrival = profile
            .tau(0, k)
            .otimes(init.resolve(&rows[0], k as i64 - 1));
        rows[0].push(arrival);
        for i in 1..stages {
            let upstream = rows[i - 1][k - 1];
            let previous = init.resolve(&rows[i], k as i64 - 1);
            rows[i].push(profile.tau(i, k).otimes(upstream.oplus(previous)));
        }
    }
    Ok(DepartureTrace::new(0, rows, horizon))
}

/// Finite-buffer tandem with manufacturing blocking:
/// the interior stages gain the delayed term D_{i+1}(k − b_{i+1} − 1),
/// which holds a completed customer on its server until the downstream
/// stage has released enough predecessors.
pub fn run_finite_buffer_scalar(
    spec: &SystemSpec,
    profile: &ServiceProfile,
    horizon: usize,
) -> Result<DepartureTrace> {
    let buffers = match spec {
        SystemSpec::TandemFinite { buffers, .. } => buffers.clone(),
        _ => {
            return Err(Error::InvalidInput(
                "finite-buffer recursion expects a finite tandem".into(),
            ))
        }
    };
    spec.validate()?;
    profile.check_rows(spec.profile_rows(), "finite tandem")?;
    check_horizon(profile, horizon)?;

    let n = spec.servers();
    let init = InitialConditions::default();
    let mut rows: Vec<Vec<MaxPlusScalar>> = vec![Vec::with_capacity(horizon); n + 1];
    for k in 1..=horizon {
        let arrival = profile
            .tau(0, k)
            .otimes(init.resolve(&rows[0], k as i64 - 1));
        rows[0].push(arrival);
        for i in 1..=n {
            let upstream = rows[i - 1][k - 1];
            let previous = init.resolve(&rows[i], k as i64 - 1);
            let mut departure = profile.tau(i, k).otimes(upstream.oplus(previous));
            if i < n {
                // buffers[i - 1] is the capacity in front of stage i + 1.
                let delay = k as i64 - buffers[i - 1] as i64 - 1;
                departure = departure.oplus(init.resolve(&rows[i + 1], delay));
            }
            rows[i].push(departure);
        }
    }
    Ok(DepartureTrace::new(0, rows, horizon))
}

/// Matrix form of whichever topology the spec names: D(k) = T_k ⊗ D(k−1)
/// for open systems, D(k) = R_k ⊗ D(k−1) ⊕ S_k ⊗ D(k−c) for closed loops.
/// Finite buffers are supported only with all capacities zero.
pub fn run_matrix_recursion(
    spec: &SystemSpec,
    profile: &ServiceProfile,
    horizon: usize,
) -> Result<DepartureTrace> {
    spec.validate()?;
    profile.check_rows(spec.profile_rows(), "system")?;
    check_horizon(profile, horizon)?;

    let dim = profile.row_count();
    let first_server = if spec.is_closed() { 1 } else { 0 };
    let customers = match spec {
        SystemSpec::ClosedTandem { customers, .. } => *customers,
        _ => 0,
    };

    let mut states: Vec<MaxPlusVector> = Vec::with_capacity(horizon);
    let state_at = |states: &[MaxPlusVector], k: i64| -> MaxPlusVector {
        if k < 0 {
            MaxPlusVector::all_eps(dim)
        } else if k == 0 {
            MaxPlusVector::all_e(dim)
        } else {
            states[(k - 1) as usize].clone()
        }
    };

    for k in 1..=horizon {
        let next = match transition_matrix(spec, profile, k)? {
            TransitionMatrix::Open(t) => t.mat_vec(&state_at(&states, k as i64 - 1))?,
            TransitionMatrix::Closed { recurrence, delay } => {
                let recur = recurrence.mat_vec(&state_at(&states, k as i64 - 1))?;
                let looped = delay.mat_vec(&state_at(&states, k as i64 - customers as i64))?;
                recur.oplus(&looped)?
            }
        };
        states.push(next);
    }

    let rows = (0..dim)
        .map(|i| states.iter().map(|s| s.get(i)).collect())
        .collect();
    Ok(DepartureTrace::new(first_server, rows, horizon))
}
