//! Departure-time traces shared by every evaluation path.

use crate::semiring::{MaxPlusScalar, E, EPS};

/// Boundary convention of the recursions: every stage departs "customer
/// zero" at time `e`, and references before that resolve to `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InitialConditions {
    pub at_zero: MaxPlusScalar,
    pub before_zero: MaxPlusScalar,
}

impl Default for InitialConditions {
    fn default() -> Self {
        InitialConditions {
            at_zero: E,
            before_zero: EPS,
        }
    }
}

impl InitialConditions {
    /// Looks up `history[k - 1]` for `k >= 1`, falling back to the
    /// boundary values for `k <= 0`. `history` holds customers `1..`.
    pub fn resolve(&self, history: &[MaxPlusScalar], k: i64) -> MaxPlusScalar {
        if k < 0 {
            self.before_zero
        } else if k == 0 {
            self.at_zero
        } else {
            history[(k - 1) as usize]
        }
    }
}

/// Departure times indexed by stage and customer.
///
/// Stage indices start at 0 for open systems (stage 0 is the arrival
/// stream) and at 1 for closed loops. Customer indices are 1-based; the
/// k = 0 boundary lives in [`InitialConditions`], not in the trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepartureTrace {
    first_server: usize,
    horizon: usize,
    rows: Vec<Vec<MaxPlusScalar>>,
    init: InitialConditions,
}

impl DepartureTrace {
    pub fn new(first_server: usize, rows: Vec<Vec<MaxPlusScalar>>, horizon: usize) -> Self {
        assert!(!rows.is_empty(), "trace needs at least one stage");
        for row in &rows {
            assert_eq!(row.len(), horizon, "every stage must cover the horizon");
        }
        DepartureTrace {
            first_server,
            horizon,
            rows,
            init: InitialConditions::default(),
        }
    }

    pub fn first_server(&self) -> usize {
        self.first_server
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Largest stage index present.
    pub fn last_server(&self) -> usize {
        self.first_server + self.rows.len() - 1
    }

    pub fn servers(&self) -> impl Iterator<Item = usize> {
        self.first_server..=self.last_server()
    }

    pub fn init(&self) -> InitialConditions {
        self.init
    }

    /// Departure time of customer `k` (1-based) at `server`.
    pub fn get(&self, server: usize, k: usize) -> MaxPlusScalar {
        assert!(
            (self.first_server..=self.last_server()).contains(&server),
            "server {server} not in trace"
        );
        assert!(k >= 1 && k <= self.horizon, "customer {k} not in trace");
        self.rows[server - self.first_server][k - 1]
    }

    pub fn server_row(&self, server: usize) -> &[MaxPlusScalar] {
        &self.rows[server - self.first_server]
    }

    /// Entries sorted by (server, customer).
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, MaxPlusScalar)> + '_ {
        self.rows.iter().enumerate().flat_map(move |(r, row)| {
            row.iter()
                .enumerate()
                .map(move |(j, &v)| (self.first_server + r, j + 1, v))
        })
    }
}
