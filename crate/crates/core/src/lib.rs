//! Max-plus algebra models of queueing systems.
//!
//! Single queues, open tandem lines (with infinite or finite buffers
//! and manufacturing blocking) and closed loops of queues are all linear
//! systems over the max-plus semiring. This crate provides:
//!
//! - exact scalar/vector/matrix arithmetic over that semiring
//!   ([`semiring`], [`linalg`]),
//! - system descriptions and their per-customer transition matrices
//!   ([`model`]),
//! - the scalar and matrix recursions producing full departure-time
//!   traces ([`recursion`]),
//! - the explicit solution formulas as an independent computation path
//!   ([`closed_form`]),
//! - a conventional discrete-event simulator of the same physics, used
//!   as the ground-truth oracle ([`des`]),
//! - cross-representation agreement checking ([`verify`]).
//!
//! All representations of a system must agree entrywise on departure
//! times; for integer-valued timing data the agreement is exact.

pub mod closed_form;
pub mod des;
pub mod error;
pub mod linalg;
pub mod model;
pub mod recursion;
pub mod semiring;
pub mod trace;
pub mod verify;

pub use closed_form::{
    closed_system_example_closed_form, gg1_closed_form, tandem_closed_form,
    zero_buffer_two_server_closed_form, ClosedFormResult, DEFAULT_CHAIN_BUDGET,
};
pub use des::{departures, simulate, EventKind, EventLog, EventRecord, StationRecord};
pub use error::{Error, Result};
pub use linalg::{MaxPlusMatrix, MaxPlusVector};
pub use model::{
    build_closed_matrices, build_gg1_matrix, build_tandem_matrix, build_zero_buffer_matrix,
    transition_matrix, ServiceProfile, SystemSpec, TransitionMatrix,
};
pub use recursion::{
    run_finite_buffer_scalar, run_gg1_scalar, run_matrix_recursion, run_tandem_scalar,
};
pub use semiring::{big_oplus, big_otimes, MaxPlusScalar, E, EPS};
pub use trace::{DepartureTrace, InitialConditions};
pub use verify::{verify_equivalence, Comparison, EquivalenceReport, Mismatch, RepTrace};
