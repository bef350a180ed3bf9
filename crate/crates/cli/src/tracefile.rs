//! The departure-trace CSV format.
//!
//! Data rows are `server,k,departure` sorted by (server, k), with `eps`
//! for the additive identity and full-precision times otherwise. Leading
//! `#` comment lines carry reproducibility metadata: the system shape,
//! the PRNG name and seed when timing was generated, and the per-server
//! total service time that the metrics command needs for busy fractions.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use maxplus_queues::{DepartureTrace, MaxPlusScalar, EPS};

use crate::config::{Scenario, PRNG_ALGORITHM};
use crate::error::{CliError, CliResult};

pub const HEADER: &str = "server,k,departure";

/// A trace read back from disk.
#[derive(Debug, Clone, Default)]
pub struct StoredTrace {
    pub entries: BTreeMap<(usize, usize), MaxPlusScalar>,
    /// Total service time per server, from `# service_total` lines.
    pub service_totals: BTreeMap<usize, f64>,
}

impl StoredTrace {
    pub fn servers(&self) -> impl Iterator<Item = usize> + '_ {
        let mut seen = self
            .entries
            .keys()
            .map(|&(s, _)| s)
            .collect::<Vec<_>>();
        seen.dedup();
        seen.into_iter()
    }

    pub fn horizon(&self) -> usize {
        self.entries.keys().map(|&(_, k)| k).max().unwrap_or(0)
    }
}

/// Renders the trace (possibly empty) plus its metadata lines.
pub fn render(scenario: &Scenario, representation: &str, trace: Option<&DepartureTrace>) -> String {
    let mut out = String::new();
    out.push_str("# maxplus-queues trace v1\n");
    let mut system = format!(
        "# system kind={} servers={} horizon={}",
        scenario.kind.label(),
        scenario.spec.servers(),
        scenario.horizon
    );
    if let maxplus_queues::SystemSpec::TandemFinite { buffers, .. } = &scenario.spec {
        let list: Vec<String> = buffers.iter().map(|b| b.to_string()).collect();
        let _ = write!(system, " buffers={}", list.join(","));
    }
    if let maxplus_queues::SystemSpec::ClosedTandem { customers, .. } = &scenario.spec {
        let _ = write!(system, " customers={customers}");
    }
    out.push_str(&system);
    out.push('\n');
    let _ = writeln!(out, "# representation {representation}");
    if scenario.uses_random_timing {
        let _ = writeln!(
            out,
            "# prng algorithm={PRNG_ALGORITHM} seed={}",
            scenario.seed.expect("random timing implies a seed")
        );
    }
    let first_service_row = usize::from(!scenario.spec.is_closed());
    for server in 1..=scenario.spec.servers() {
        let _ = writeln!(
            out,
            "# service_total server={server} value={}",
            scenario.profile.row_total(first_service_row + server - 1)
        );
    }
    out.push_str(HEADER);
    out.push('\n');
    if let Some(trace) = trace {
        for (server, k, value) in trace.entries() {
            let _ = writeln!(out, "{server},{k},{value}");
        }
    }
    out
}

pub fn write(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

/// Parses a trace CSV, rejecting schema violations: wrong header,
/// malformed fields, duplicate or non-contiguous (server, k) pairs.
pub fn read(path: &Path) -> CliResult<StoredTrace> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read trace {}: {e}", path.display())))?;
    parse(&text).map_err(|msg| CliError::Input(format!("trace {}: {msg}", path.display())))
}

fn parse(text: &str) -> Result<StoredTrace, String> {
    let mut lines = text.lines().enumerate();
    let mut service_totals = BTreeMap::new();

    let mut header_seen = false;
    let mut entries: BTreeMap<(usize, usize), MaxPlusScalar> = BTreeMap::new();
    for (lineno, line) in &mut lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(rest) = comment.trim().strip_prefix("service_total ") {
                let (server, value) = parse_service_total(rest)
                    .ok_or_else(|| format!("line {}: malformed service_total", lineno + 1))?;
                service_totals.insert(server, value);
            }
            continue;
        }
        if !header_seen {
            if line != HEADER {
                return Err(format!(
                    "line {}: expected header \"{HEADER}\", got \"{line}\"",
                    lineno + 1
                ));
            }
            header_seen = true;
            continue;
        }
        let mut fields = line.split(',');
        let server = next_field(&mut fields, "server", lineno)?
            .parse::<usize>()
            .map_err(|_| format!("line {}: server is not an integer", lineno + 1))?;
        let k = next_field(&mut fields, "k", lineno)?
            .parse::<usize>()
            .map_err(|_| format!("line {}: k is not an integer", lineno + 1))?;
        let raw = next_field(&mut fields, "departure", lineno)?;
        if fields.next().is_some() {
            return Err(format!("line {}: too many fields", lineno + 1));
        }
        if k == 0 {
            return Err(format!("line {}: customer index must start at 1", lineno + 1));
        }
        let value = if raw == "eps" {
            EPS
        } else {
            let v = raw
                .parse::<f64>()
                .map_err(|_| format!("line {}: departure is not a number", lineno + 1))?;
            if !v.is_finite() {
                return Err(format!("line {}: departure must be finite or eps", lineno + 1));
            }
            MaxPlusScalar::finite(v)
        };
        if entries.insert((server, k), value).is_some() {
            return Err(format!("line {}: duplicate entry ({server}, {k})", lineno + 1));
        }
    }
    if !header_seen {
        return Err(format!("missing header \"{HEADER}\""));
    }

    check_rectangular(&entries)?;
    Ok(StoredTrace {
        entries,
        service_totals,
    })
}

fn next_field<'a>(
    fields: &mut std::str::Split<'a, char>,
    name: &str,
    lineno: usize,
) -> Result<&'a str, String> {
    fields
        .next()
        .ok_or_else(|| format!("line {}: missing {name} field", lineno + 1))
}

fn parse_service_total(rest: &str) -> Option<(usize, f64)> {
    let mut server = None;
    let mut value = None;
    for token in rest.split_whitespace() {
        if let Some(s) = token.strip_prefix("server=") {
            server = s.parse().ok();
        } else if let Some(v) = token.strip_prefix("value=") {
            value = v.parse().ok();
        }
    }
    Some((server?, value?))
}

/// Every server must cover customers 1..=K for a shared K.
fn check_rectangular(entries: &BTreeMap<(usize, usize), MaxPlusScalar>) -> Result<(), String> {
    if entries.is_empty() {
        return Ok(());
    }
    let horizon = entries.keys().map(|&(_, k)| k).max().unwrap_or(0);
    let servers: Vec<usize> = {
        let mut s: Vec<usize> = entries.keys().map(|&(srv, _)| srv).collect();
        s.dedup();
        s
    };
    for &server in &servers {
        for k in 1..=horizon {
            if !entries.contains_key(&(server, k)) {
                return Err(format!(
                    "server {server} is missing customer {k} (horizon {horizon})"
                ));
            }
        }
    }
    for pair in servers.windows(2) {
        if pair[1] != pair[0] + 1 {
            return Err(format!(
                "server indices must be contiguous, got {} then {}",
                pair[0], pair[1]
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let text = "# maxplus-queues trace v1\n# service_total server=1 value=6\nserver,k,departure\n0,1,1\n0,2,3\n1,1,4\n1,2,5\n";
        let stored = parse(text).unwrap();
        assert_eq!(stored.horizon(), 2);
        assert_eq!(
            stored.entries[&(1, 2)],
            MaxPlusScalar::finite(5.0)
        );
        assert_eq!(stored.service_totals[&1], 6.0);
    }

    #[test]
    fn header_only_is_empty() {
        let stored = parse("server,k,departure\n").unwrap();
        assert!(stored.entries.is_empty());
        assert_eq!(stored.horizon(), 0);
    }

    #[test]
    fn eps_values_parse() {
        let stored = parse("server,k,departure\n1,1,eps\n").unwrap();
        assert!(stored.entries[&(1, 1)].is_eps());
    }

    #[test]
    fn schema_violations_are_rejected() {
        assert!(parse("server,k\n").is_err());
        assert!(parse("server,k,departure\n1,1\n").is_err());
        assert!(parse("server,k,departure\n1,1,2,3\n").is_err());
        assert!(parse("server,k,departure\n1,0,2\n").is_err());
        assert!(parse("server,k,departure\n1,1,abc\n").is_err());
        assert!(parse("server,k,departure\n1,1,2\n1,1,3\n").is_err());
        assert!(parse("server,k,departure\n1,1,2\n1,3,4\n").is_err(), "gap in k");
        assert!(parse("server,k,departure\n0,1,1\n2,1,2\n").is_err(), "gap in servers");
        assert!(parse("").is_err(), "missing header");
    }
}
