//! Subcommand implementations. Each returns the process exit code so
//! `main` stays a thin dispatcher.

use std::fmt::Write as _;
use std::path::Path;

use maxplus_queues::{
    departures, run_finite_buffer_scalar, run_gg1_scalar, run_matrix_recursion,
    run_tandem_scalar, simulate, transition_matrix, verify_equivalence, Comparison,
    DepartureTrace, SystemSpec, TransitionMatrix,
};

use crate::config::{self, RepresentationChoice, Scenario, SystemKind};
use crate::error::{CliError, CliResult};
use crate::metrics;
use crate::tracefile;

fn pick_representation(scenario: &Scenario) -> CliResult<RepresentationChoice> {
    let choice = scenario.representation.unwrap_or({
        if scenario.spec.is_closed() {
            RepresentationChoice::Matrix
        } else {
            RepresentationChoice::Scalar
        }
    });
    if choice == RepresentationChoice::Scalar && scenario.spec.is_closed() {
        return Err(CliError::Unsupported(
            "closed loops have no scalar recursion here; use the matrix representation".into(),
        ));
    }
    Ok(choice)
}

fn run_representation(
    scenario: &Scenario,
    choice: RepresentationChoice,
) -> CliResult<DepartureTrace> {
    let horizon = scenario.horizon;
    let trace = match choice {
        RepresentationChoice::Scalar => match &scenario.spec {
            SystemSpec::Gg1 => run_gg1_scalar(&scenario.profile, horizon)?,
            SystemSpec::TandemInfinite { .. } => run_tandem_scalar(&scenario.profile, horizon)?,
            SystemSpec::TandemFinite { .. } => {
                run_finite_buffer_scalar(&scenario.spec, &scenario.profile, horizon)?
            }
            SystemSpec::ClosedTandem { .. } => unreachable!("rejected by pick_representation"),
        },
        RepresentationChoice::Matrix => {
            run_matrix_recursion(&scenario.spec, &scenario.profile, horizon)?
        }
        RepresentationChoice::Des => {
            departures(&simulate(&scenario.spec, &scenario.profile, horizon)?)
        }
    };
    Ok(trace)
}

pub fn cmd_simulate(
    config_path: &Path,
    output_override: Option<&Path>,
    events_path: Option<&Path>,
) -> CliResult<i32> {
    let scenario = config::load(config_path)?;
    let choice = pick_representation(&scenario)?;
    let trace_path = output_override
        .map(Path::to_path_buf)
        .or_else(|| scenario.trace_path.clone())
        .ok_or_else(|| {
            CliError::Input("output.trace: required for simulate (or pass --output)".into())
        })?;

    let trace = if scenario.horizon == 0 {
        None
    } else {
        Some(run_representation(&scenario, choice)?)
    };
    let contents = tracefile::render(&scenario, choice.label(), trace.as_ref());
    tracefile::write(&trace_path, &contents)?;

    if let Some(events_path) = events_path {
        let log = simulate(&scenario.spec, &scenario.profile, scenario.horizon)?;
        let mut out = String::from("time,server,customer,event\n");
        for ev in log.events() {
            let _ = writeln!(out, "{},{},{},{}", ev.time, ev.server, ev.customer, ev.kind.label());
        }
        std::fs::write(events_path, out).map_err(|e| {
            CliError::Input(format!("cannot write {}: {e}", events_path.display()))
        })?;
    }

    println!(
        "wrote {}: {} servers={} horizon={} representation={}",
        trace_path.display(),
        scenario.kind.label(),
        scenario.spec.servers(),
        scenario.horizon,
        choice.label()
    );
    Ok(0)
}

pub fn cmd_verify(config_path: &Path) -> CliResult<i32> {
    let scenario = config::load(config_path)?;
    if scenario.horizon == 0 {
        return Err(CliError::Input(
            "run.horizon: verify needs at least one customer".into(),
        ));
    }
    let mut report = verify_equivalence(&scenario.spec, &scenario.profile, scenario.horizon)?;
    if let Some(path) = &scenario.expected_trace {
        let stored = tracefile::read(path)?;
        report.add_reference("reference", stored.entries);
    }

    println!("representations:");
    for (idx, trace) in report.traces.iter().enumerate() {
        println!(
            "  [{}] {} ({} entries)",
            idx + 1,
            trace.name,
            trace.entries.len()
        );
    }
    for skip in &report.skipped {
        println!("  skipped {}: {}", skip.name, skip.reason);
    }

    let matrix = report.pairwise();
    let mut header = String::from("     ");
    for idx in 1..=report.traces.len() {
        let _ = write!(header, " [{idx}]");
    }
    println!("agreement matrix:");
    println!("{header}");
    for (a, row) in matrix.iter().enumerate() {
        let mut line = format!("  [{}]", a + 1);
        for cell in row {
            let mark = match cell {
                Comparison::Agree { .. } => '=',
                Comparison::Disagree(_) => 'x',
                Comparison::NoOverlap => '.',
            };
            let _ = write!(line, "  {mark} ");
        }
        println!("{}", line.trim_end());
    }

    match report.first_mismatch() {
        None => {
            println!("result: all representations agree");
            Ok(0)
        }
        Some(m) => {
            println!(
                "result: {} and {} disagree at server {} customer {}: {} vs {}",
                m.left, m.right, m.server, m.customer, m.left_value, m.right_value
            );
            Ok(1)
        }
    }
}

pub fn cmd_metrics(trace_path: &Path) -> CliResult<i32> {
    let stored = tracefile::read(trace_path)?;
    let report = metrics::compute(&stored)?;
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Input(format!("cannot serialize metrics: {e}")))?;
    println!("{json}");
    Ok(0)
}

pub fn cmd_show_matrix(config_path: &Path, customer: usize) -> CliResult<i32> {
    let scenario = config::load(config_path)?;
    if customer == 0 || customer > scenario.horizon {
        return Err(CliError::Input(format!(
            "customer {customer} out of range 1..={}",
            scenario.horizon
        )));
    }
    match transition_matrix(&scenario.spec, &scenario.profile, customer)? {
        TransitionMatrix::Open(t) => {
            let label = if scenario.kind == SystemKind::TandemFinite {
                "T~"
            } else {
                "T"
            };
            println!("{label}_{customer} =");
            print!("{}", t.render());
        }
        TransitionMatrix::Closed { recurrence, delay } => {
            println!("R_{customer} =");
            print!("{}", recurrence.render());
            println!("S_{customer} =");
            print!("{}", delay.render());
        }
    }
    Ok(0)
}
