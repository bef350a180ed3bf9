//! Cross-representation invariants on randomized systems.
//!
//! Timing data is integer-valued so every representation computes exact
//! sums and maxima, making entrywise equality the right assertion.

use maxplus_queues::{
    big_otimes, build_closed_matrices, build_tandem_matrix, build_zero_buffer_matrix, departures,
    run_finite_buffer_scalar, run_gg1_scalar, run_matrix_recursion, run_tandem_scalar, simulate,
    tandem_closed_form, verify_equivalence, zero_buffer_two_server_closed_form,
    closed_system_example_closed_form, gg1_closed_form, MaxPlusScalar, ServiceProfile, SystemSpec,
    E, EPS,
};
use proptest::prelude::*;

fn duration_row(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0u32..=9u32).prop_map(f64::from), k)
}

fn open_profile(max_servers: usize, max_horizon: usize) -> impl Strategy<Value = ServiceProfile> {
    (1..=max_servers, 1..=max_horizon).prop_flat_map(|(n, k)| {
        prop::collection::vec(duration_row(k), n + 1)
            .prop_map(|rows| ServiceProfile::new(rows).unwrap())
    })
}

fn closed_case(
    max_servers: usize,
    max_horizon: usize,
) -> impl Strategy<Value = (SystemSpec, ServiceProfile)> {
    (1..=max_servers, 1..=max_horizon).prop_flat_map(|(n, k)| {
        (
            prop::collection::vec(duration_row(k), n).prop_map(|rows| {
                ServiceProfile::new(rows).unwrap()
            }),
            1..=2 * n,
        )
            .prop_map(move |(profile, customers)| {
                (
                    SystemSpec::ClosedTandem {
                        servers: n,
                        customers,
                    },
                    profile,
                )
            })
    })
}

fn finite_case(
    max_servers: usize,
    max_horizon: usize,
    max_buffer: usize,
) -> impl Strategy<Value = (SystemSpec, ServiceProfile)> {
    (1..=max_servers, 1..=max_horizon).prop_flat_map(move |(n, k)| {
        (
            prop::collection::vec(duration_row(k), n + 1)
                .prop_map(|rows| ServiceProfile::new(rows).unwrap()),
            prop::collection::vec(0..=max_buffer, n - 1),
        )
            .prop_map(move |(profile, buffers)| {
                (
                    SystemSpec::TandemFinite {
                        servers: n,
                        buffers,
                    },
                    profile,
                )
            })
    })
}

proptest! {
    #[test]
    fn matrix_equals_scalar_on_open_tandems(p in open_profile(8, 100)) {
        let horizon = p.horizon();
        let n = p.row_count() - 1;
        let spec = SystemSpec::TandemInfinite { servers: n };
        let scalar = run_tandem_scalar(&p, horizon).unwrap();
        let matrix = run_matrix_recursion(&spec, &p, horizon).unwrap();
        prop_assert_eq!(scalar, matrix);
    }

    #[test]
    fn zero_buffer_matrix_equals_direct_recursion(p in open_profile(6, 60)) {
        let horizon = p.horizon();
        let n = p.row_count() - 1;
        let spec = SystemSpec::TandemFinite { servers: n, buffers: vec![0; n - 1] };
        let direct = run_finite_buffer_scalar(&spec, &p, horizon).unwrap();
        let matrix = run_matrix_recursion(&spec, &p, horizon).unwrap();
        prop_assert_eq!(direct, matrix);
    }

    #[test]
    fn departures_monotone_and_causal(p in open_profile(6, 60)) {
        let horizon = p.horizon();
        let t = run_tandem_scalar(&p, horizon).unwrap();
        for server in t.servers() {
            let row = t.server_row(server);
            for k in 1..row.len() {
                prop_assert!(row[k] >= row[k - 1], "monotone in k failed");
            }
        }
        for server in 1..=t.last_server() {
            for k in 1..=horizon {
                prop_assert!(
                    t.get(server, k) >= t.get(server - 1, k),
                    "causality failed at ({server}, {k})"
                );
            }
        }
    }

    #[test]
    fn blocking_only_delays((spec, p) in finite_case(6, 60, 3)) {
        let horizon = p.horizon();
        let finite = run_finite_buffer_scalar(&spec, &p, horizon).unwrap();
        let infinite = run_tandem_scalar(&p, horizon).unwrap();
        for server in finite.servers() {
            for k in 1..=horizon {
                prop_assert!(
                    finite.get(server, k) >= infinite.get(server, k),
                    "finite buffers produced an earlier departure at ({server}, {k})"
                );
            }
        }
    }

    #[test]
    fn gg1_closed_form_equals_recursion(p in open_profile(1, 200)) {
        let horizon = p.horizon();
        let recursion = run_gg1_scalar(&p, horizon).unwrap();
        let solved = gg1_closed_form(&p, horizon).unwrap();
        for (server, k, value) in solved.iter() {
            prop_assert_eq!(value, recursion.get(server, k));
        }
    }

    #[test]
    fn tandem_closed_form_equals_recursion(p in open_profile(4, 8)) {
        let horizon = p.horizon();
        let n = p.row_count() - 1;
        let recursion = run_tandem_scalar(&p, horizon).unwrap();
        let solved = tandem_closed_form(&p, horizon).unwrap();
        for k in 1..=horizon {
            prop_assert_eq!(solved.get(n, k).unwrap(), recursion.get(n, k));
        }
    }

    #[test]
    fn zero_buffer_closed_form_equals_recursion(p in open_profile(2, 100)) {
        prop_assume!(p.row_count() == 3);
        let horizon = p.horizon();
        let spec = SystemSpec::TandemFinite { servers: 2, buffers: vec![0] };
        let recursion = run_finite_buffer_scalar(&spec, &p, horizon).unwrap();
        let solved = zero_buffer_two_server_closed_form(&p, horizon).unwrap();
        for (server, k, value) in solved.iter() {
            prop_assert_eq!(value, recursion.get(server, k));
        }
        // The second server departs exactly one service after the first.
        for k in 1..=horizon {
            prop_assert_eq!(
                recursion.get(2, k),
                p.tau(2, k).otimes(recursion.get(1, k))
            );
        }
    }

    #[test]
    fn closed_loop_solution_matches_on_its_domain(p in open_profile(1, 100)) {
        // Reuse the two-row open generator as a two-server closed profile.
        let horizon = p.horizon();
        let spec = SystemSpec::ClosedTandem { servers: 2, customers: 2 };
        let recursion = run_matrix_recursion(&spec, &p, horizon).unwrap();
        let solved = closed_system_example_closed_form(&p, horizon).unwrap();
        for (server, k, value) in solved.iter() {
            prop_assert_eq!(value, recursion.get(server, k), "at ({}, {})", server, k);
        }
    }

    #[test]
    fn closed_loop_satisfies_its_own_equation((spec, p) in closed_case(5, 50)) {
        let horizon = p.horizon();
        let n = p.row_count();
        let trace = run_matrix_recursion(&spec, &p, horizon).unwrap();
        // Post-hoc re-check of the last stage's recursion on the trace.
        for k in 1..=horizon {
            let upstream = if n == 1 {
                // Single-server loop: the "previous stage" is the delay line.
                continue;
            } else {
                trace.get(n - 1, k)
            };
            let previous = if k >= 2 { trace.get(n, k - 1) } else { E };
            prop_assert_eq!(
                trace.get(n, k),
                p.tau(n - 1, k).otimes(upstream.oplus(previous))
            );
        }
    }

    #[test]
    fn des_matches_recursions_on_all_topologies(
        open in open_profile(5, 40),
        finite in finite_case(5, 40, 3),
        closed in closed_case(5, 40),
    ) {
        let horizon = open.horizon();
        let n = open.row_count() - 1;
        let spec = SystemSpec::TandemInfinite { servers: n };
        let sim = departures(&simulate(&spec, &open, horizon).unwrap());
        prop_assert_eq!(run_tandem_scalar(&open, horizon).unwrap(), sim);

        let (spec, p) = finite;
        let horizon = p.horizon();
        let sim = departures(&simulate(&spec, &p, horizon).unwrap());
        prop_assert_eq!(run_finite_buffer_scalar(&spec, &p, horizon).unwrap(), sim);

        let (spec, p) = closed;
        let horizon = p.horizon();
        let sim = departures(&simulate(&spec, &p, horizon).unwrap());
        prop_assert_eq!(run_matrix_recursion(&spec, &p, horizon).unwrap(), sim);
    }

    #[test]
    fn verify_report_agrees_on_random_systems((spec, p) in finite_case(4, 30, 2)) {
        let report = verify_equivalence(&spec, &p, p.horizon()).unwrap();
        prop_assert!(report.all_agree(), "{:?}", report.first_mismatch());
    }
}

proptest! {
    // Structural checks on the transition matrices themselves.
    #[test]
    fn tandem_matrix_entries_are_stage_products(p in open_profile(5, 10)) {
        let n = p.row_count() - 1;
        for k in 1..=p.horizon() {
            let t = build_tandem_matrix(&p, k).unwrap();
            for i in 0..=n {
                for j in 0..=n {
                    let expected = if j <= i {
                        // Independent of the builder: literal fold.
                        big_otimes((j..=i).map(|m| p.tau(m, k)))
                    } else {
                        EPS
                    };
                    prop_assert_eq!(t.get(i, j), expected);
                }
            }
            // Column zero spelled out once more against a plain sum.
            for i in 0..=n {
                let sum: f64 = (0..=i).map(|m| p.row(m)[k - 1]).sum();
                prop_assert_eq!(t.get(i, 0), MaxPlusScalar::finite(sum));
            }
        }
    }

    #[test]
    fn zero_buffer_mask_is_exactly_the_interior_superdiagonal(p in open_profile(5, 10)) {
        let n = p.row_count() - 1;
        for k in 1..=p.horizon() {
            let t = build_tandem_matrix(&p, k).unwrap();
            let tz = build_zero_buffer_matrix(&p, k).unwrap();
            let mut diff = Vec::new();
            for i in 0..=n {
                for j in 0..=n {
                    if t.get(i, j) != tz.get(i, j) {
                        diff.push((i, j));
                    }
                }
            }
            let expected: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
            prop_assert_eq!(diff, expected);
        }
    }

    #[test]
    fn closed_matrices_follow_the_block_rules(p in open_profile(5, 10)) {
        // Interpret all rows as service stages of a closed loop.
        let n = p.row_count();
        for k in 1..=p.horizon() {
            let (r, s) = build_closed_matrices(&p, k).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let expected = if j <= i {
                        big_otimes((j..=i).map(|m| p.tau(m, k)))
                    } else {
                        EPS
                    };
                    prop_assert_eq!(r.get(i, j), expected);
                    let expected_s = if j == n - 1 {
                        big_otimes((0..=i).map(|m| p.tau(m, k)))
                    } else {
                        EPS
                    };
                    prop_assert_eq!(s.get(i, j), expected_s);
                }
            }
        }
    }
}
