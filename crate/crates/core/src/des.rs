//! Discrete-event simulation of the same physical systems.
//!
//! This simulator is the ground-truth oracle for the algebraic
//! representations, so it is written against a state machine of servers,
//! buffers and circulating customers with a time-ordered event queue —
//! not against the recursions it is meant to check. It uses ordinary
//! `max`/`+` arithmetic on `f64` times.
//!
//! Blocking follows the manufacturing rule: a server that finishes while
//! the downstream station is full keeps holding the customer, and the
//! transfer happens at the exact instant the downstream station releases
//! a predecessor.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::model::{ServiceProfile, SystemSpec};
use crate::semiring::MaxPlusScalar;
use crate::trace::DepartureTrace;

/// Per-(station, service ordinal) timestamps collected by the simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationRecord {
    /// When the customer joined the station (queue or server).
    pub arrival: f64,
    /// When its service started.
    pub start: f64,
    /// When its service completed.
    pub completion: f64,
    /// When it actually left the station; equals `completion` unless the
    /// customer was held by blocking.
    pub departure: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Arrival,
    ServiceStart,
    Completion,
    Departure,
}

impl EventKind {
    pub fn label(self) -> &'static str {
        match self {
            EventKind::Arrival => "arrival",
            EventKind::ServiceStart => "service-start",
            EventKind::Completion => "completion",
            EventKind::Departure => "departure",
        }
    }
}

/// One line of the chronological debug stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRecord {
    pub time: f64,
    pub server: usize,
    pub customer: usize,
    pub kind: EventKind,
}

/// Everything the simulation observed.
#[derive(Debug, Clone)]
pub struct EventLog {
    first_server: usize,
    horizon: usize,
    /// External arrival epochs (open systems only).
    arrivals: Vec<f64>,
    /// `stations[i][k-1]` is the k-th service at station `first_server + i`.
    stations: Vec<Vec<StationRecord>>,
    events: Vec<EventRecord>,
}

impl EventLog {
    pub fn first_server(&self) -> usize {
        self.first_server
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn station_count(&self) -> usize {
        self.stations.len()
    }

    pub fn arrivals(&self) -> &[f64] {
        &self.arrivals
    }

    /// Record of the k-th service (1-based) at the given station index
    /// (1-based).
    pub fn record(&self, station: usize, k: usize) -> &StationRecord {
        &self.stations[station - 1][k - 1]
    }

    pub fn events(&self) -> &[EventRecord] {
        &self.events
    }
}

/// Projects the departure columns into the trace shape the recursion
/// engines emit; open systems gain the arrival row as stage 0.
pub fn departures(log: &EventLog) -> DepartureTrace {
    let mut rows: Vec<Vec<MaxPlusScalar>> = Vec::new();
    if log.first_server == 0 {
        rows.push(log.arrivals.iter().map(|&t| MaxPlusScalar::finite(t)).collect());
    }
    for station in &log.stations {
        rows.push(station.iter().map(|r| MaxPlusScalar::finite(r.departure)).collect());
    }
    DepartureTrace::new(log.first_server, rows, log.horizon)
}

/// Wall-clock keyed heap entry. Ties are broken upstream-to-downstream,
/// then by scheduling order, so simultaneous events play out in a fixed,
/// FIFO-respecting sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Pending {
    time: f64,
    station: usize,
    seq: u64,
    action: Action,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Action {
    /// External arrival of the given customer at station 1.
    ExternalArrival { customer: usize },
    /// Service completion at `Pending::station`.
    Completion,
}

impl Eq for Pending {}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.station.cmp(&other.station))
            .then(self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Station {
    /// Customer currently occupying the server, if any.
    serving: Option<usize>,
    /// Completed service of the occupying customer, waiting for space
    /// downstream.
    blocked: bool,
    queue: VecDeque<usize>,
    /// Waiting-room capacity in front of this station; `None` = infinite.
    buffer: Option<usize>,
    /// Services started so far.
    started: usize,
    /// Arrivals recorded so far.
    arrived: usize,
    records: Vec<StationRecord>,
}

impl Station {
    fn new(buffer: Option<usize>, horizon: usize) -> Self {
        Station {
            serving: None,
            blocked: false,
            queue: VecDeque::new(),
            buffer,
            started: 0,
            arrived: 0,
            records: Vec::with_capacity(horizon),
        }
    }

    fn occupancy(&self) -> usize {
        self.queue.len() + usize::from(self.serving.is_some())
    }

    /// Whether one more customer fits (buffer slots plus the server).
    fn has_space(&self) -> bool {
        match self.buffer {
            None => true,
            Some(b) => self.occupancy() < b + 1,
        }
    }
}

struct Simulation<'a> {
    profile: &'a ServiceProfile,
    horizon: usize,
    /// Stage index of the first profile row used for service times.
    service_row_offset: usize,
    closed: bool,
    customers: usize,
    stations: Vec<Station>,
    heap: BinaryHeap<std::cmp::Reverse<Pending>>,
    seq: u64,
    events: Vec<EventRecord>,
    arrivals: Vec<f64>,
}

impl<'a> Simulation<'a> {
    fn schedule(&mut self, time: f64, station: usize, action: Action) {
        self.seq += 1;
        self.heap.push(std::cmp::Reverse(Pending {
            time,
            station,
            seq: self.seq,
            action,
        }));
    }

    fn log(&mut self, time: f64, server: usize, customer: usize, kind: EventKind) {
        self.events.push(EventRecord {
            time,
            server,
            customer,
            kind,
        });
    }

    fn service_time(&self, station: usize, ordinal: usize) -> f64 {
        let row = station - 1 + self.service_row_offset;
        self.profile.row(row)[ordinal - 1]
    }

    /// Station a customer moves to after leaving `station`, if any.
    fn downstream(&self, station: usize) -> Option<usize> {
        let n = self.stations.len();
        if station < n {
            Some(station + 1)
        } else if self.closed {
            Some(1)
        } else {
            None
        }
    }

    fn upstream(&self, station: usize) -> Option<usize> {
        if station > 1 {
            Some(station - 1)
        } else if self.closed {
            Some(self.stations.len())
        } else {
            None
        }
    }

    /// Customer joins `station` at time `t`: recorded as an arrival (up
    /// to the horizon) and either served at once or queued.
    fn arrive(&mut self, station: usize, customer: usize, t: f64) {
        debug_assert!(
            self.stations[station - 1].has_space(),
            "arrival into a full station violates the blocking protocol"
        );
        let st = &mut self.stations[station - 1];
        st.arrived += 1;
        if st.arrived <= self.horizon {
            st.records.push(StationRecord {
                arrival: t,
                start: f64::NAN,
                completion: f64::NAN,
                departure: f64::NAN,
            });
        }
        st.queue.push_back(customer);
        self.log(t, station, customer, EventKind::Arrival);
        self.try_start(station, t);
    }

    /// Starts the next service at `station` if the server is free and
    /// work remains within the horizon.
    fn try_start(&mut self, station: usize, t: f64) {
        let st = &self.stations[station - 1];
        if st.serving.is_some() || st.queue.is_empty() || st.started >= self.horizon {
            return;
        }
        let st = &mut self.stations[station - 1];
        let customer = st.queue.pop_front().expect("queue checked non-empty");
        st.serving = Some(customer);
        st.blocked = false;
        st.started += 1;
        let ordinal = st.started;
        st.records[ordinal - 1].start = t;
        let duration = self.service_time(station, ordinal);
        let completion = t + duration;
        self.stations[station - 1].records[ordinal - 1].completion = completion;
        self.log(t, station, customer, EventKind::ServiceStart);
        self.schedule(completion, station, Action::Completion);
    }

    /// Service completed at `station`: leave immediately if the
    /// downstream station has space (or none exists), else hold the
    /// server blocked.
    fn complete(&mut self, station: usize, t: f64) {
        let customer = self.stations[station - 1]
            .serving
            .expect("completion fired on an idle server");
        self.log(t, station, customer, EventKind::Completion);
        let can_leave = match self.downstream(station) {
            None => true,
            Some(next) => self.stations[next - 1].has_space(),
        };
        if can_leave {
            self.depart(station, t);
        } else {
            self.stations[station - 1].blocked = true;
        }
    }

    /// Customer leaves `station` at time `t`; the freed position lets a
    /// blocked upstream neighbour transfer at the same instant.
    fn depart(&mut self, station: usize, t: f64) {
        let st = &mut self.stations[station - 1];
        let customer = st.serving.take().expect("departure from an idle server");
        st.blocked = false;
        let ordinal = st
            .records
            .iter()
            .position(|r| r.departure.is_nan())
            .expect("every started service has an open record");
        st.records[ordinal].departure = t;
        self.log(t, station, customer, EventKind::Departure);

        if let Some(next) = self.downstream(station) {
            self.arrive(next, customer, t);
        }

        if let Some(prev) = self.upstream(station) {
            if self.stations[prev - 1].blocked && self.stations[station - 1].has_space() {
                self.depart(prev, t);
            }
        }

        self.try_start(station, t);
    }

    fn assert_invariants(&self) {
        for (idx, st) in self.stations.iter().enumerate() {
            if let Some(b) = st.buffer {
                assert!(
                    st.occupancy() <= b + 1,
                    "station {} exceeded its capacity",
                    idx + 1
                );
            }
        }
        if self.closed {
            let in_flight: usize = self.stations.iter().map(Station::occupancy).sum();
            assert_eq!(in_flight, self.customers, "closed loop lost a customer");
        }
    }

    fn run(mut self) -> EventLog {
        while let Some(std::cmp::Reverse(ev)) = self.heap.pop() {
            match ev.action {
                Action::ExternalArrival { customer } => {
                    self.arrivals.push(ev.time);
                    self.arrive(1, customer, ev.time);
                }
                Action::Completion => self.complete(ev.station, ev.time),
            }
            self.assert_invariants();
        }
        for (idx, st) in self.stations.iter().enumerate() {
            assert_eq!(
                st.records.len(),
                self.horizon,
                "station {} did not serve the whole horizon",
                idx + 1
            );
            assert!(
                st.records.iter().all(|r| !r.departure.is_nan()),
                "station {} left unfinished services",
                idx + 1
            );
        }
        EventLog {
            first_server: if self.closed { 1 } else { 0 },
            horizon: self.horizon,
            arrivals: self.arrivals,
            stations: self.stations.into_iter().map(|s| s.records).collect(),
            events: self.events,
        }
    }
}

/// Event-driven FIFO simulation of the system named by `spec`, feeding
/// `horizon` customers (or `horizon` circulations per station for closed
/// loops) with the profile's timing data.
pub fn simulate(spec: &SystemSpec, profile: &ServiceProfile, horizon: usize) -> Result<EventLog> {
    spec.validate()?;
    profile.check_rows(spec.profile_rows(), "system")?;
    if horizon > profile.horizon() {
        return Err(Error::InvalidInput(format!(
            "horizon {horizon} exceeds the {} customers in the profile",
            profile.horizon()
        )));
    }

    let n = spec.servers();
    let closed = spec.is_closed();
    let customers = match spec {
        SystemSpec::ClosedTandem { customers, .. } => *customers,
        _ => 0,
    };
    let buffer_of = |station: usize| -> Option<usize> {
        match spec {
            // Station 1 takes external arrivals (or the whole closed
            // population); only interior finite buffers constrain flow.
            SystemSpec::TandemFinite { buffers, .. } if station >= 2 => {
                Some(buffers[station - 2])
            }
            _ => None,
        }
    };

    let mut sim = Simulation {
        profile,
        horizon,
        service_row_offset: usize::from(!closed),
        closed,
        customers,
        stations: (1..=n).map(|s| Station::new(buffer_of(s), horizon)).collect(),
        heap: BinaryHeap::new(),
        seq: 0,
        events: Vec::new(),
        arrivals: Vec::new(),
    };

    if closed {
        for customer in 1..=customers {
            sim.arrive(1, customer, 0.0);
        }
    } else {
        let mut epoch = 0.0;
        for k in 1..=horizon {
            epoch += profile.row(0)[k - 1];
            sim.schedule(epoch, 0, Action::ExternalArrival { customer: k });
        }
    }

    Ok(sim.run())
}
