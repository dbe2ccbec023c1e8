//! Generative property tests for the pure algebra: grant allocation,
//! fairness, link-budget linearity, hyper-period reduction, and the
//! event-queue ordering contract.

use proptest::prelude::*;

use xhaul_sim::interleave::{hyper_period, is_stable, max_tau, HyperPeriod, InterleaveConfig, OfdmTechConfig};
use xhaul_sim::linkbudget::{baseband_rate, freq_domain_rate, passband_rate, FronthaulParams};
use xhaul_sim::orchestrator::{
    grants_with_sharing, proportional_grants, ConstraintVector, RateMatrix,
};
use xhaul_sim::sim::{EventQueue, StatAccumulator};
use xhaul_sim::smgw::{excess_share_grants, fair_targets, fairness_index, CycleRequest, LoadClass};

fn requests(amounts: &[f64]) -> Vec<CycleRequest> {
    amounts
        .iter()
        .enumerate()
        .map(|(enb_id, &amount)| CycleRequest {
            enb_id,
            operator_id: 0,
            amount,
            cycle_index: 0,
        })
        .collect()
}

proptest! {
    // Grant conservation and no-over-grant for the excess-share policy.
    #[test]
    fn excess_share_bounded(
        amounts in prop::collection::vec(0.0f64..250_000.0, 1..12),
        limit in 0.0f64..100_000.0,
    ) {
        let grants = excess_share_grants(&requests(&amounts), limit).unwrap();
        let granted: f64 = grants.iter().map(|g| g.amount).sum();
        prop_assert!(granted <= amounts.len() as f64 * limit + 1e-6);
        for (g, r) in grants.iter().zip(&amounts) {
            prop_assert!(g.amount <= r + 1e-9);
            prop_assert!(g.amount >= 0.0);
        }
    }

    // Raising one eNB's request never decreases its own grant.
    #[test]
    fn excess_share_monotone(
        amounts in prop::collection::vec(0.0f64..250_000.0, 1..12),
        limit in 0.0f64..100_000.0,
        bump in 0.0f64..100_000.0,
        which in any::<prop::sample::Index>(),
    ) {
        let idx = which.index(amounts.len());
        let grants = excess_share_grants(&requests(&amounts), limit).unwrap();
        let mut bumped = amounts.clone();
        bumped[idx] += bump;
        let grants2 = excess_share_grants(&requests(&bumped), limit).unwrap();
        prop_assert!(grants2[idx].amount >= grants[idx].amount - 1e-9);
    }

    // Fairness index: identity, nonnegativity, scale invariance.
    #[test]
    fn fairness_index_properties(
        omega in prop::collection::vec(0.1f64..200.0, 1..10),
        tau in prop::collection::vec(0.0f64..200.0, 1..10),
        scale in 0.01f64..100.0,
    ) {
        prop_assert_eq!(fairness_index(&omega, &omega).unwrap(), 0.0);
        let n = omega.len().min(tau.len());
        let omega = &omega[..n];
        let tau = &tau[..n];
        let f = fairness_index(tau, omega).unwrap();
        prop_assert!(f >= 0.0);
        let tau_s: Vec<f64> = tau.iter().map(|x| x * scale).collect();
        let omega_s: Vec<f64> = omega.iter().map(|x| x * scale).collect();
        let f_s = fairness_index(&tau_s, &omega_s).unwrap();
        prop_assert!((f - f_s).abs() < 1e-9);
    }

    // Fair targets never exceed loads in the congested case and always
    // reproduce loads when everything fits.
    #[test]
    fn fair_targets_bounds(
        loads in prop::collection::vec(0.0f64..300e6, 1..24),
        uplink in 100e6..2e9,
    ) {
        let targets = fair_targets(&loads, uplink);
        let total: f64 = loads.iter().sum();
        for (t, load) in targets.iter().zip(&loads) {
            prop_assert!(t.target >= 0.0);
            if total <= uplink || t.class == LoadClass::Light {
                prop_assert!((t.target - load).abs() < 1e-9);
            } else {
                prop_assert!(t.target <= load + 1e-9);
            }
        }
        // Congested case: the target sum never exceeds the uplink unless
        // the light demand alone does not congest it.
        if total > uplink {
            let target_sum: f64 = targets.iter().map(|t| t.target).sum();
            prop_assert!(target_sum <= uplink + 1e-6);
        }
    }

    // Proportional grants: feasibility, caps, and proportionality in
    // the congested branch.
    #[test]
    fn proportional_grant_properties(
        rows in prop::collection::vec(prop::collection::vec(0.0f64..100.0, 3), 1..6),
        limits in prop::collection::vec(0.0f64..150.0, 3),
    ) {
        let r = RateMatrix::from_rows(&rows).unwrap();
        let k = ConstraintVector::new(limits.clone()).unwrap();
        let g = proportional_grants(&r, &k).unwrap();
        for o in 0..3 {
            prop_assert!(g.column_sum(o) <= limits[o] + 1e-6);
            let req_sum = r.column_sum(o);
            for s in 0..rows.len() {
                prop_assert!(g.get(s, o) <= r.get(s, o) + 1e-9);
            }
            if req_sum > limits[o] {
                // Congested: grants proportional to requests.
                for s in 0..rows.len() {
                    for s2 in 0..rows.len() {
                        if r.get(s2, o) > 1e-9 {
                            let lhs = g.get(s, o) * r.get(s2, o);
                            let rhs = g.get(s2, o) * r.get(s, o);
                            prop_assert!((lhs - rhs).abs() <= 1e-6 * (1.0 + lhs.abs()));
                        }
                    }
                }
            }
        }
    }

    // Sharing never reduces anyone's grant relative to the plain
    // proportional allocation.
    #[test]
    fn sharing_only_adds(
        rows in prop::collection::vec(prop::collection::vec(0.0f64..100.0, 2), 1..6),
        limits in prop::collection::vec(10.0f64..150.0, 2),
    ) {
        let r = RateMatrix::from_rows(&rows).unwrap();
        let k = ConstraintVector::new(limits).unwrap();
        let base = proportional_grants(&r, &k).unwrap();
        let shared = grants_with_sharing(&r, &k, 1, 0).unwrap();
        for s in 0..rows.len() {
            for o in 0..2 {
                prop_assert!(shared.get(s, o) >= base.get(s, o) - 1e-9);
            }
        }
        // The augmented column stays within K_e + zeta.
        let zeta = (k.get(1) - r.column_sum(1)).max(0.0);
        prop_assert!(shared.column_sum(0) <= k.get(0) + zeta + 1e-6);
    }

    // All three I/Q rate calculators are linear in RRU count and
    // antennas.
    #[test]
    fn linkbudget_linearity(
        rrus in 1u32..8,
        antennas in 1u32..8,
        factor in 2u32..4,
    ) {
        let p = FronthaulParams { num_rrus: rrus, antennas, ..FronthaulParams::default() };
        let scaled = FronthaulParams { num_rrus: rrus * factor, ..p };
        let f = factor as f64;
        prop_assert!((passband_rate(&scaled) - f * passband_rate(&p)).abs() < 1e-3);
        prop_assert!((baseband_rate(&scaled) - f * baseband_rate(&p)).abs() < 1e-3);
        prop_assert!(
            (freq_domain_rate(&scaled).unwrap() - f * freq_domain_rate(&p).unwrap()).abs() < 1e-3
        );
    }

    // Hyper-period reduction returns the reduced fraction for exact
    // rational period pairs.
    #[test]
    fn hyper_period_reduces_rationals(
        p in 1u64..200,
        q in 1u64..200,
        unit in 1.0f64..100.0,
    ) {
        let g = gcd(p, q);
        let t_long = p as f64 * unit;
        let t_short = q as f64 * unit;
        if t_long >= t_short {
            match hyper_period(t_long, t_short) {
                HyperPeriod::Commensurable { short_cycles, long_cycles } => {
                    prop_assert_eq!(short_cycles, p / g);
                    prop_assert_eq!(long_cycles, q / g);
                }
                HyperPeriod::Incommensurable => prop_assert!(false, "rational pair not reduced"),
            }
        }
    }

    // max_tau is exactly the stability boundary of is_stable.
    #[test]
    fn max_tau_is_stability_boundary(
        t_l in 40e-6f64..120e-6,
        t_d_frac in 0.3f64..1.0,
        tau_l_frac in 0.0f64..0.9,
        guard in 0.0f64..4e-6,
    ) {
        let t_d = t_d_frac * t_l;
        let tau_l = tau_l_frac * t_l.min(t_d);
        if let Some(bound) = max_tau(t_l, t_d, tau_l, guard) {
            let mk = |tau_d: f64| InterleaveConfig {
                tech_long: OfdmTechConfig::new("l", t_l, tau_l),
                tech_short: OfdmTechConfig::new("d", t_d, tau_d),
                guard,
                phase_offset: 0.0,
            };
            prop_assert!(is_stable(&mk((bound - 1e-9).max(0.0))).stable);
            prop_assert!(!is_stable(&mk(bound + 1e-7 + 0.01 * t_d)).stable);
        }
    }

    // Events dequeue sorted by time with FIFO tie-breaking.
    #[test]
    fn event_queue_ordering(times in prop::collection::vec(0.0f64..100.0, 1..64)) {
        let mut q = EventQueue::new();
        for (i, t) in times.iter().enumerate() {
            q.schedule(*t, i).unwrap();
        }
        let mut popped = Vec::new();
        while let Some((t, i)) = q.pop() {
            popped.push((t, i));
        }
        for w in popped.windows(2) {
            prop_assert!(w[0].0 <= w[1].0);
            if w[0].0 == w[1].0 {
                prop_assert!(w[0].1 < w[1].1, "FIFO tie-break violated");
            }
        }
        prop_assert_eq!(popped.len(), times.len());
    }

    // Accumulator mean and variance agree with direct computation.
    #[test]
    fn stat_accumulator_matches_naive(samples in prop::collection::vec(-1e3f64..1e3, 2..200)) {
        let mut acc = StatAccumulator::new();
        for s in &samples {
            acc.record(*s);
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
        prop_assert!((acc.mean() - mean).abs() < 1e-6 * (1.0 + mean.abs()));
        prop_assert!((acc.variance() - var).abs() < 1e-4 * (1.0 + var.abs()));
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
