//! Cross-representation agreement checking.
//!
//! For a given system this runs every representation that applies —
//! direct recursion, matrix recursion, explicit solution, and the
//! discrete-event simulation — and compares departure times entrywise
//! on the overlap of their domains. Disagreement is a reported outcome,
//! not an error.

use std::collections::BTreeMap;

use crate::closed_form::{
    closed_system_example_closed_form, gg1_closed_form, tandem_closed_form,
    zero_buffer_two_server_closed_form, ClosedFormResult,
};
use crate::des::{departures, simulate};
use crate::error::{Error, Result};
use crate::model::{ServiceProfile, SystemSpec};
use crate::recursion::{run_finite_buffer_scalar, run_gg1_scalar, run_matrix_recursion,
    run_tandem_scalar};
use crate::semiring::MaxPlusScalar;
use crate::trace::DepartureTrace;

pub const SCALAR_RECURSION: &str = "scalar-recursion";
pub const MATRIX_RECURSION: &str = "matrix-recursion";
pub const CLOSED_FORM: &str = "closed-form";
pub const DES_ORACLE: &str = "des";

/// Departure times one representation produced, keyed (server, customer).
#[derive(Debug, Clone)]
pub struct RepTrace {
    pub name: String,
    pub entries: BTreeMap<(usize, usize), MaxPlusScalar>,
}

impl RepTrace {
    pub fn from_trace(name: &str, trace: &DepartureTrace) -> Self {
        RepTrace {
            name: name.to_string(),
            entries: trace.entries().map(|(s, k, v)| ((s, k), v)).collect(),
        }
    }

    pub fn from_closed_form(result: &ClosedFormResult) -> Self {
        RepTrace {
            name: CLOSED_FORM.to_string(),
            entries: result.iter().map(|(s, k, v)| ((s, k), v)).collect(),
        }
    }
}

/// First disagreeing entry between two representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub left: String,
    pub right: String,
    pub server: usize,
    pub customer: usize,
    pub left_value: MaxPlusScalar,
    pub right_value: MaxPlusScalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    /// All shared entries equal; `overlap` counts them.
    Agree { overlap: usize },
    Disagree(Mismatch),
    NoOverlap,
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        !matches!(self, Comparison::Disagree(_))
    }
}

/// A representation that does not apply to the requested system, and why.
#[derive(Debug, Clone)]
pub struct Skipped {
    pub name: String,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub traces: Vec<RepTrace>,
    pub skipped: Vec<Skipped>,
}

impl EquivalenceReport {
    /// Adds an externally produced trace (e.g. one loaded from disk) to
    /// the comparison set.
    pub fn add_reference(
        &mut self,
        name: &str,
        entries: BTreeMap<(usize, usize), MaxPlusScalar>,
    ) {
        self.traces.push(RepTrace {
            name: name.to_string(),
            entries,
        });
    }

    pub fn compare(&self, a: usize, b: usize) -> Comparison {
        let (left, right) = (&self.traces[a], &self.traces[b]);
        let mut overlap = 0;
        for (&(server, customer), &lv) in &left.entries {
            if let Some(&rv) = right.entries.get(&(server, customer)) {
                if lv != rv {
                    return Comparison::Disagree(Mismatch {
                        left: left.name.clone(),
                        right: right.name.clone(),
                        server,
                        customer,
                        left_value: lv,
                        right_value: rv,
                    });
                }
                overlap += 1;
            }
        }
        if overlap == 0 {
            Comparison::NoOverlap
        } else {
            Comparison::Agree { overlap }
        }
    }

    /// Full pairwise comparison matrix, indexed like `traces`.
    pub fn pairwise(&self) -> Vec<Vec<Comparison>> {
        let n = self.traces.len();
        (0..n)
            .map(|a| (0..n).map(|b| self.compare(a, b)).collect())
            .collect()
    }

    pub fn first_mismatch(&self) -> Option<Mismatch> {
        let n = self.traces.len();
        for a in 0..n {
            for b in a + 1..n {
                if let Comparison::Disagree(m) = self.compare(a, b) {
                    return Some(m);
                }
            }
        }
        None
    }

    pub fn all_agree(&self) -> bool {
        self.first_mismatch().is_none()
    }
}

/// Runs every representation that applies to `spec` and collects their
/// departure times for comparison. Representations without a derived
/// form for the topology are listed as skipped, not failed.
pub fn verify_equivalence(
    spec: &SystemSpec,
    profile: &ServiceProfile,
    horizon: usize,
) -> Result<EquivalenceReport> {
    spec.validate()?;
    let mut traces = Vec::new();
    let mut skipped = Vec::new();

    match spec {
        SystemSpec::Gg1 => {
            traces.push(RepTrace::from_trace(
                SCALAR_RECURSION,
                &run_gg1_scalar(profile, horizon)?,
            ));
            traces.push(RepTrace::from_trace(
                MATRIX_RECURSION,
                &run_matrix_recursion(spec, profile, horizon)?,
            ));
            traces.push(RepTrace::from_closed_form(&gg1_closed_form(
                profile, horizon,
            )?));
        }
        SystemSpec::TandemInfinite { .. } => {
            traces.push(RepTrace::from_trace(
                SCALAR_RECURSION,
                &run_tandem_scalar(profile, horizon)?,
            ));
            traces.push(RepTrace::from_trace(
                MATRIX_RECURSION,
                &run_matrix_recursion(spec, profile, horizon)?,
            ));
            match tandem_closed_form(profile, horizon) {
                Ok(cf) => traces.push(RepTrace::from_closed_form(&cf)),
                Err(Error::EnumerationBudget { required, budget }) => skipped.push(Skipped {
                    name: CLOSED_FORM.to_string(),
                    reason: format!(
                        "chain enumeration needs {required} chains, over the budget of {budget}"
                    ),
                }),
                Err(e) => return Err(e),
            }
        }
        SystemSpec::TandemFinite { servers, buffers } => {
            traces.push(RepTrace::from_trace(
                SCALAR_RECURSION,
                &run_finite_buffer_scalar(spec, profile, horizon)?,
            ));
            if buffers.iter().all(|&b| b == 0) {
                traces.push(RepTrace::from_trace(
                    MATRIX_RECURSION,
                    &run_matrix_recursion(spec, profile, horizon)?,
                ));
                if *servers == 2 {
                    traces.push(RepTrace::from_closed_form(
                        &zero_buffer_two_server_closed_form(profile, horizon)?,
                    ));
                } else {
                    skipped.push(Skipped {
                        name: CLOSED_FORM.to_string(),
                        reason: "zero-buffer solution is derived for two servers only".to_string(),
                    });
                }
            } else {
                skipped.push(Skipped {
                    name: MATRIX_RECURSION.to_string(),
                    reason: "no matrix form for positive buffer capacities".to_string(),
                });
                skipped.push(Skipped {
                    name: CLOSED_FORM.to_string(),
                    reason: "no solved form for positive buffer capacities".to_string(),
                });
            }
        }
        SystemSpec::ClosedTandem { servers, customers } => {
            traces.push(RepTrace::from_trace(
                MATRIX_RECURSION,
                &run_matrix_recursion(spec, profile, horizon)?,
            ));
            if *servers == 2 && *customers == 2 {
                traces.push(RepTrace::from_closed_form(
                    &closed_system_example_closed_form(profile, horizon)?,
                ));
            } else {
                skipped.push(Skipped {
                    name: CLOSED_FORM.to_string(),
                    reason:
                        "closed-loop solution is derived for two servers and two customers only"
                            .to_string(),
                });
            }
        }
    }

    traces.push(RepTrace::from_trace(
        DES_ORACLE,
        &departures(&simulate(spec, profile, horizon)?),
    ));

    Ok(EquivalenceReport { traces, skipped })
}
