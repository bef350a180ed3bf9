//! Explicit solution formulas, evaluated directly.
//!
//! Each function here computes departure times from the solved form of
//! the corresponding recursion — sums over index chains, alternating
//! ⊕/⊗ products — without ever running the recursion itself. That makes
//! agreement between the two paths a genuine cross-check rather than a
//! tautology.
//!
//! A result carries only the (server, customer) pairs its formula is
//! claimed valid for. In particular the two-server closed-loop solution
//! for the first server starts at the second customer; evaluated at the
//! first it would double-count the initial service, so that point is
//! excluded from the domain.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::ServiceProfile;
use crate::semiring::{big_oplus, big_otimes, MaxPlusScalar, EPS};

/// Ceiling on the number of index chains [`tandem_closed_form`] will
/// enumerate before refusing.
pub const DEFAULT_CHAIN_BUDGET: u128 = 5_000_000;

/// Departure times on the sub-domain where a formula applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormResult {
    values: BTreeMap<(usize, usize), MaxPlusScalar>,
}

impl ClosedFormResult {
    fn new() -> Self {
        ClosedFormResult {
            values: BTreeMap::new(),
        }
    }

    fn insert(&mut self, server: usize, k: usize, value: MaxPlusScalar) {
        self.values.insert((server, k), value);
    }

    pub fn get(&self, server: usize, k: usize) -> Option<MaxPlusScalar> {
        self.values.get(&(server, k)).copied()
    }

    /// Entries sorted by (server, customer).
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, MaxPlusScalar)> + '_ {
        self.values.iter().map(|(&(s, k), &v)| (s, k, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

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

/// Solved form of the single queue:
/// A(k) = α_1 ⊗ ⋯ ⊗ α_k,
/// D(k) = ⊕_{i=1..k} α_1 ⊗ ⋯ ⊗ α_i ⊗ τ_i ⊗ ⋯ ⊗ τ_k.
pub fn gg1_closed_form(profile: &ServiceProfile, horizon: usize) -> Result<ClosedFormResult> {
    profile.check_rows(2, "single queue")?;
    check_horizon(profile, horizon)?;
    let mut result = ClosedFormResult::new();
    for k in 1..=horizon {
        let arrival = big_otimes((1..=k).map(|j| profile.tau(0, j)));
        result.insert(0, k, arrival);
        let departure = big_oplus((1..=k).map(|i| {
            let head = big_otimes((1..=i).map(|j| profile.tau(0, j)));
            let tail = big_otimes((i..=k).map(|j| profile.tau(1, j)));
            head.otimes(tail)
        }));
        result.insert(1, k, departure);
    }
    Ok(result)
}

/// Number of weakly increasing chains of length `n` drawn from `1..=k`,
/// i.e. C(k + n − 1, n), saturating.
fn chain_count(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for m in 1..=n {
        let factor = (k + m - 1) as u128;
        acc = acc.saturating_mul(factor) / m as u128;
    }
    acc
}

/// Solved form of the infinite-buffer tandem, as a sum over weakly
/// increasing index chains i_1 ≤ ⋯ ≤ i_n with adjacent stage products
/// sharing their boundary index. Only the last server's departures have
/// a printed solution, so only stage `n` appears in the result.
pub fn tandem_closed_form(profile: &ServiceProfile, horizon: usize) -> Result<ClosedFormResult> {
    tandem_closed_form_with_budget(profile, horizon, DEFAULT_CHAIN_BUDGET)
}

/// As [`tandem_closed_form`] with an explicit enumeration budget.
pub fn tandem_closed_form_with_budget(
    profile: &ServiceProfile,
    horizon: usize,
    budget: u128,
) -> Result<ClosedFormResult> {
    if profile.row_count() < 2 {
        return Err(Error::InvalidInput(
            "open tandem profile needs an arrival row and at least one service row".into(),
        ));
    }
    check_horizon(profile, horizon)?;
    let n = profile.row_count() - 1;

    let required: u128 = (1..=horizon).map(|k| chain_count(n, k)).sum();
    if required > budget {
        return Err(Error::EnumerationBudget { required, budget });
    }

    let mut result = ClosedFormResult::new();
    for k in 1..=horizon {
        let mut best = EPS;
        // i_1 runs over 1..=k with the arrival-row product accumulated
        // as it grows.
        let mut head = crate::semiring::E;
        for i1 in 1..=k {
            head = head.otimes(profile.tau(0, i1));
            extend_chain(profile, n, k, 1, i1, head, &mut best);
        }
        result.insert(n, k, best);
    }
    Ok(result)
}

/// Depth-first extension of a chain: `stage` has its segment starting at
/// `start`; every end index up to `k` is tried with a running product.
/// At the last stage the segment must end at `k`.
fn extend_chain(
    profile: &ServiceProfile,
    n: usize,
    k: usize,
    stage: usize,
    start: usize,
    acc: MaxPlusScalar,
    best: &mut MaxPlusScalar,
) {
    if stage == n {
        let tail = big_otimes((start..=k).map(|j| profile.tau(n, j)));
        *best = best.oplus(acc.otimes(tail));
        return;
    }
    let mut prod = crate::semiring::E;
    for end in start..=k {
        prod = prod.otimes(profile.tau(stage, end));
        extend_chain(profile, n, k, stage + 1, end, acc.otimes(prod), best);
    }
}

/// Solved form of the two-server zero-buffer tandem:
/// D_1(k) = ⊕_{i=1..k} ∏_{j≤i} τ_{0j} ⊗ τ_{1i} ⊗ ∏_{j=i+1..k} (τ_{1j} ⊕ τ_{2,j−1}),
/// D_2(k) = τ_{2k} ⊗ D_1(k). Empty products are `e`.
pub fn zero_buffer_two_server_closed_form(
    profile: &ServiceProfile,
    horizon: usize,
) -> Result<ClosedFormResult> {
    if profile.row_count() != 3 {
        return Err(Error::UnsupportedTopology(
            "the zero-buffer solution is derived for exactly two servers".into(),
        ));
    }
    check_horizon(profile, horizon)?;
    let mut result = ClosedFormResult::new();
    for k in 1..=horizon {
        let d1 = big_oplus((1..=k).map(|i| {
            let head = big_otimes((1..=i).map(|j| profile.tau(0, j)));
            let tail = big_otimes(
                (i + 1..=k).map(|j| profile.tau(1, j).oplus(profile.tau(2, j - 1))),
            );
            head.otimes(profile.tau(1, i)).otimes(tail)
        }));
        result.insert(1, k, d1);
        result.insert(2, k, profile.tau(2, k).otimes(d1));
    }
    Ok(result)
}

/// Solved form of the closed loop with two servers and two circulating
/// customers:
/// D_1(k) = τ_{11} ⊗ ∏_{i=1..k−2} (τ_{1,i+1} ⊕ τ_{2i}) ⊗ τ_{1k} for k ≥ 2,
/// D_2(k) = τ_{11} ⊗ ∏_{i=1..k−1} (τ_{1,i+1} ⊕ τ_{2i}) ⊗ τ_{2k} for k ≥ 1.
///
/// The first server's formula is excluded at k = 1, where it degenerates
/// to τ_{11} ⊗ τ_{11} and no longer matches the recursion.
pub fn closed_system_example_closed_form(
    profile: &ServiceProfile,
    horizon: usize,
) -> Result<ClosedFormResult> {
    if profile.row_count() != 2 {
        return Err(Error::UnsupportedTopology(
            "the closed-loop solution is derived for exactly two servers".into(),
        ));
    }
    check_horizon(profile, horizon)?;
    let mixed = |i: usize| profile.tau(0, i + 1).oplus(profile.tau(1, i));
    let mut result = ClosedFormResult::new();
    for k in 1..=horizon {
        if k >= 2 {
            let middle = big_otimes((1..=k - 2).map(mixed));
            let d1 = profile.tau(0, 1).otimes(middle).otimes(profile.tau(0, k));
            result.insert(1, k, d1);
        }
        let middle = big_otimes((1..=k - 1).map(mixed));
        let d2 = profile.tau(0, 1).otimes(middle).otimes(profile.tau(1, k));
        result.insert(2, k, d2);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::MaxPlusScalar;

    fn profile(rows: &[&[f64]]) -> ServiceProfile {
        ServiceProfile::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn fin(v: f64) -> MaxPlusScalar {
        MaxPlusScalar::finite(v)
    }

    #[test]
    fn gg1_solution_hand_values() {
        let p = profile(&[&[1.0, 2.0, 1.0], &[3.0, 1.0, 2.0]]);
        let r = gg1_closed_form(&p, 3).unwrap();
        // max over i of the arrival prefix plus the service suffix:
        // max(1+3+1+2, 3+1+2, 4+2) = 7.
        assert_eq!(r.get(1, 3), Some(fin(7.0)));
        assert_eq!(r.get(0, 3), Some(fin(4.0)));
        assert_eq!(r.get(1, 1), Some(fin(4.0)));
    }

    #[test]
    fn gg1_zero_service_tracks_arrivals() {
        let p = profile(&[&[2.0; 4], &[0.0; 4]]);
        let r = gg1_closed_form(&p, 4).unwrap();
        for k in 1..=4 {
            assert_eq!(r.get(0, k), Some(fin(2.0 * k as f64)));
            assert_eq!(r.get(1, k), Some(fin(2.0 * k as f64)));
        }
    }

    #[test]
    fn gg1_single_customer() {
        let p = profile(&[&[5.0], &[2.0]]);
        let r = gg1_closed_form(&p, 1).unwrap();
        assert_eq!(r.get(1, 1), Some(fin(7.0)));
    }

    #[test]
    fn tandem_chain_enumeration_hand_value() {
        let p = profile(&[&[1.0, 1.0], &[2.0, 2.0], &[3.0, 3.0]]);
        let r = tandem_closed_form(&p, 2).unwrap();
        // chains (i1, i2) in {(1,1), (1,2), (2,2)}:
        //   (1,1): 1 + 2 + (3+3) = 9
        //   (1,2): 1 + (2+2) + 3 = 8
        //   (2,2): (1+1) + 2 + 3 = 7
        assert_eq!(r.get(2, 2), Some(fin(9.0)));
        assert_eq!(r.get(2, 1), Some(fin(6.0)));
        assert_eq!(r.get(1, 1), None, "only the last stage is solved");
    }

    #[test]
    fn tandem_single_server_matches_gg1_solution() {
        let p = profile(&[&[1.0, 2.0, 1.0], &[3.0, 1.0, 2.0]]);
        let tandem = tandem_closed_form(&p, 3).unwrap();
        let gg1 = gg1_closed_form(&p, 3).unwrap();
        for k in 1..=3 {
            assert_eq!(tandem.get(1, k), gg1.get(1, k));
        }
    }

    #[test]
    fn tandem_all_zero_services() {
        let p = profile(&[&[0.0; 3], &[0.0; 3], &[0.0; 3]]);
        let r = tandem_closed_form(&p, 3).unwrap();
        for k in 1..=3 {
            assert_eq!(r.get(2, k), Some(fin(0.0)));
        }
    }

    #[test]
    fn tandem_budget_is_enforced() {
        let p = ServiceProfile::new(vec![vec![1.0; 30]; 7]).unwrap();
        let err = tandem_closed_form_with_budget(&p, 30, 1000).unwrap_err();
        assert!(matches!(err, Error::EnumerationBudget { required, budget: 1000 } if required > 1000));
    }

    #[test]
    fn chain_count_small_cases() {
        assert_eq!(chain_count(1, 5), 5);
        assert_eq!(chain_count(2, 2), 3);
        assert_eq!(chain_count(4, 8), 330);
    }

    #[test]
    fn zero_buffer_solution_hand_values() {
        let p = profile(&[&[1.0; 3], &[1.0; 3], &[5.0; 3]]);
        let r = zero_buffer_two_server_closed_form(&p, 3).unwrap();
        assert_eq!(r.get(1, 3), Some(fin(12.0)));
        assert_eq!(r.get(2, 3), Some(fin(17.0)));
        // First customer: D_1(1) = τ_01 ⊗ τ_11, the trailing product empty.
        assert_eq!(r.get(1, 1), Some(fin(2.0)));
        assert_eq!(r.get(2, 1), Some(fin(7.0)));
    }

    #[test]
    fn zero_buffer_fast_downstream_reduces_to_infinite() {
        // With τ_2 never the bottleneck the blocking maxima pick τ_1.
        let p = profile(&[&[1.0, 2.0, 1.0], &[3.0, 3.0, 3.0], &[0.0, 0.0, 0.0]]);
        let blocked = zero_buffer_two_server_closed_form(&p, 3).unwrap();
        let open = crate::recursion::run_tandem_scalar(&p, 3).unwrap();
        for k in 1..=3 {
            assert_eq!(blocked.get(1, k), Some(open.get(1, k)));
        }
    }

    #[test]
    fn zero_buffer_rejects_wrong_shape() {
        let p = profile(&[&[1.0], &[1.0]]);
        assert!(matches!(
            zero_buffer_two_server_closed_form(&p, 1),
            Err(Error::UnsupportedTopology(_))
        ));
    }

    #[test]
    fn closed_loop_solution_hand_values() {
        let p = profile(&[&[1.0; 3], &[2.0; 3]]);
        let r = closed_system_example_closed_form(&p, 3).unwrap();
        assert_eq!(r.get(1, 3), Some(fin(4.0)));
        assert_eq!(r.get(2, 3), Some(fin(7.0)));
        assert_eq!(r.get(2, 1), Some(fin(3.0)));
        assert_eq!(r.get(1, 1), None, "first-server solution starts at k = 2");
        // k = 2 leaves the middle product empty.
        assert_eq!(r.get(1, 2), Some(fin(2.0)));
    }

    #[test]
    fn closed_loop_idle_second_server() {
        // τ_2 ≡ 0 and constant τ_1: the first server is the bottleneck
        // and departs every t time units.
        let t = 3.0;
        let p = profile(&[&[t; 5], &[0.0; 5]]);
        let r = closed_system_example_closed_form(&p, 5).unwrap();
        for k in 2..=5 {
            assert_eq!(r.get(1, k), Some(fin(t * k as f64)));
        }
    }

    #[test]
    fn closed_loop_rejects_wrong_shape() {
        let p = profile(&[&[1.0], &[1.0], &[1.0]]);
        assert!(matches!(
            closed_system_example_closed_form(&p, 1),
            Err(Error::UnsupportedTopology(_))
        ));
    }
}
