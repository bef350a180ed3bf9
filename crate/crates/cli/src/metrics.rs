//! Observables derived from a departure trace.
//!
//! Everything is defined over the departure times alone: per-customer
//! sojourn (open systems, last departure minus arrival epoch), the
//! interdeparture gaps at the last server, throughput as customers per
//! unit of the final departure time, and — when the trace records total
//! service times — the busy fraction of each server. Fields without a
//! defined value (closed traces have no arrival row; a zero final
//! departure gives no rates) serialize as null.

use std::collections::BTreeMap;

use serde::Serialize;

use maxplus_queues::MaxPlusScalar;

use crate::error::{CliError, CliResult};
use crate::tracefile::StoredTrace;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub sojourn: Option<Vec<f64>>,
    pub interdeparture: Vec<f64>,
    pub throughput: Option<f64>,
    pub busy_fraction: Option<Vec<f64>>,
}

fn finite(entries: &BTreeMap<(usize, usize), MaxPlusScalar>, server: usize, k: usize) -> CliResult<f64> {
    let value = entries
        .get(&(server, k))
        .copied()
        .ok_or_else(|| CliError::Input(format!("trace is missing entry ({server}, {k})")))?;
    value
        .as_finite()
        .ok_or_else(|| CliError::Input(format!("entry ({server}, {k}) is eps; metrics need finite times")))
}

pub fn compute(trace: &StoredTrace) -> CliResult<MetricsReport> {
    let horizon = trace.horizon();
    if horizon == 0 {
        return Ok(MetricsReport {
            sojourn: None,
            interdeparture: Vec::new(),
            throughput: None,
            busy_fraction: None,
        });
    }

    let servers: Vec<usize> = trace.servers().collect();
    let first = *servers.first().expect("non-empty trace has servers");
    let last = *servers.last().expect("non-empty trace has servers");
    let open = first == 0;

    let sojourn = if open && last > 0 {
        let mut values = Vec::with_capacity(horizon);
        for k in 1..=horizon {
            values.push(finite(&trace.entries, last, k)? - finite(&trace.entries, 0, k)?);
        }
        Some(values)
    } else {
        None
    };

    // The gap before the first departure uses the convention that every
    // server departs customer zero at time zero.
    let mut interdeparture = Vec::with_capacity(horizon);
    let mut previous = 0.0;
    for k in 1..=horizon {
        let d = finite(&trace.entries, last, k)?;
        interdeparture.push(d - previous);
        previous = d;
    }

    let final_departure = finite(&trace.entries, last, horizon)?;
    let throughput = if final_departure > 0.0 {
        Some(horizon as f64 / final_departure)
    } else {
        None
    };

    let service_servers: Vec<usize> = servers.iter().copied().filter(|&s| s > 0).collect();
    let busy_fraction = if final_departure > 0.0
        && !service_servers.is_empty()
        && service_servers
            .iter()
            .all(|s| trace.service_totals.contains_key(s))
    {
        Some(
            service_servers
                .iter()
                .map(|s| trace.service_totals[s] / final_departure)
                .collect(),
        )
    } else {
        None
    };

    Ok(MetricsReport {
        sojourn,
        interdeparture,
        throughput,
        busy_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use maxplus_queues::MaxPlusScalar;

    fn stored(entries: &[(usize, usize, f64)], totals: &[(usize, f64)]) -> StoredTrace {
        StoredTrace {
            entries: entries
                .iter()
                .map(|&(s, k, v)| ((s, k), MaxPlusScalar::finite(v)))
                .collect(),
            service_totals: totals.iter().copied().collect(),
        }
    }

    #[test]
    fn gg1_no_waiting() {
        // Arrivals every 2, unit service: each customer sojourns 1.
        let mut entries = Vec::new();
        for k in 1..=10usize {
            entries.push((0, k, 2.0 * k as f64));
            entries.push((1, k, 2.0 * k as f64 + 1.0));
        }
        let report = compute(&stored(&entries, &[(1, 10.0)])).unwrap();
        assert_eq!(report.sojourn.unwrap(), vec![1.0; 10]);
        assert_eq!(report.interdeparture[0], 3.0);
        assert_eq!(&report.interdeparture[1..], &[2.0; 9][..]);
        assert_eq!(report.throughput, Some(10.0 / 21.0));
        assert_eq!(report.busy_fraction, Some(vec![10.0 / 21.0]));
    }

    #[test]
    fn zero_services_have_no_rates() {
        let entries = [(0, 1, 0.0), (1, 1, 0.0)];
        let report = compute(&stored(&entries, &[(1, 0.0)])).unwrap();
        assert_eq!(report.sojourn.unwrap(), vec![0.0]);
        assert_eq!(report.throughput, None);
        assert_eq!(report.busy_fraction, None);
    }

    #[test]
    fn closed_trace_has_no_sojourn() {
        let entries = [(1, 1, 1.0), (1, 2, 2.0), (2, 1, 3.0), (2, 2, 5.0)];
        let report = compute(&stored(&entries, &[(1, 2.0), (2, 4.0)])).unwrap();
        assert_eq!(report.sojourn, None);
        assert_eq!(report.interdeparture, vec![3.0, 2.0]);
        assert_eq!(report.throughput, Some(2.0 / 5.0));
        assert_eq!(report.busy_fraction, Some(vec![2.0 / 5.0, 4.0 / 5.0]));
    }

    #[test]
    fn missing_totals_null_out_busy_fraction() {
        let entries = [(0, 1, 1.0), (1, 1, 2.0)];
        let report = compute(&stored(&entries, &[])).unwrap();
        assert_eq!(report.busy_fraction, None);
        assert!(report.throughput.is_some());
    }

    #[test]
    fn empty_trace_is_all_null() {
        let report = compute(&StoredTrace::default()).unwrap();
        assert_eq!(report.sojourn, None);
        assert!(report.interdeparture.is_empty());
        assert_eq!(report.throughput, None);
        assert_eq!(report.busy_fraction, None);
    }

    #[test]
    fn eps_entries_are_rejected() {
        let mut trace = stored(&[(0, 1, 1.0)], &[]);
        trace
            .entries
            .insert((1, 1), maxplus_queues::EPS);
        assert!(compute(&trace).is_err());
    }
}
