//! Feasibility analysis and simulation of time-sharing one FFT
//! computation module between two OFDM technologies with different
//! symbol periods.
//!
//! Analysis side: hyper-period reduction, the stability inequality
//! (with and without guard time), and the interleaving fit check.
//! Simulation side: a non-preemptive FIFO single server fed by the two
//! periodic symbol streams.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum InterleaveError {
    #[error("{name}: symbol period must be positive, got {period}")]
    BadPeriod { name: String, period: f64 },
    #[error("{name}: computation duration {tau} must satisfy 0 <= tau < period {period}")]
    BadComputeDuration { name: String, tau: f64, period: f64 },
    #[error("guard time must be nonnegative, got {0}")]
    BadGuard(f64),
    #[error("horizon must be positive, got {0}")]
    BadHorizon(f64),
}

/// One OFDM technology: symbol period T and FFT computation duration tau.
#[derive(Debug, Clone, PartialEq)]
pub struct OfdmTechConfig {
    pub name: String,
    /// OFDM symbol period T [s].
    pub symbol_period: f64,
    /// FFT computation duration tau [s].
    pub compute_duration: f64,
}

impl OfdmTechConfig {
    pub fn new(name: &str, symbol_period: f64, compute_duration: f64) -> Self {
        OfdmTechConfig {
            name: name.to_owned(),
            symbol_period,
            compute_duration,
        }
    }

    /// A computation must fit inside its own symbol period. tau = 0 is
    /// accepted as the degenerate lower end of sweep grids.
    pub fn validate(&self) -> Result<(), InterleaveError> {
        if !(self.symbol_period > 0.0) {
            return Err(InterleaveError::BadPeriod {
                name: self.name.clone(),
                period: self.symbol_period,
            });
        }
        if !(self.compute_duration >= 0.0 && self.compute_duration < self.symbol_period) {
            return Err(InterleaveError::BadComputeDuration {
                name: self.name.clone(),
                tau: self.compute_duration,
                period: self.symbol_period,
            });
        }
        Ok(())
    }
}

/// Interleaving setup: the long-period technology (T_L), the
/// short-period technology (T_D), and the per-computation guard time.
#[derive(Debug, Clone, PartialEq)]
pub struct InterleaveConfig {
    pub tech_long: OfdmTechConfig,
    pub tech_short: OfdmTechConfig,
    /// Guard time appended to every computation [s].
    pub guard: f64,
    /// Start offset of the short-period stream relative to the long one.
    pub phase_offset: f64,
}

impl InterleaveConfig {
    /// Build a config, swapping the technologies if needed so that
    /// `tech_long` carries the longer symbol period.
    pub fn new(
        tech_a: OfdmTechConfig,
        tech_b: OfdmTechConfig,
        guard: f64,
    ) -> Result<Self, InterleaveError> {
        tech_a.validate()?;
        tech_b.validate()?;
        if !(guard >= 0.0) {
            return Err(InterleaveError::BadGuard(guard));
        }
        let (tech_long, tech_short) = if tech_a.symbol_period >= tech_b.symbol_period {
            (tech_a, tech_b)
        } else {
            (tech_b, tech_a)
        };
        Ok(InterleaveConfig {
            tech_long,
            tech_short,
            guard,
            phase_offset: 0.0,
        })
    }

    /// Computation duration factor tau_L / tau_D.
    pub fn beta(&self) -> f64 {
        self.tech_long.compute_duration / self.tech_short.compute_duration
    }
}

/// Hyper-period of the two symbol streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperPeriod {
    /// k cycles of the short period equal l cycles of the long period.
    Commensurable { short_cycles: u64, long_cycles: u64 },
    /// No small integer ratio matches the periods within tolerance.
    Incommensurable,
}

/// Largest cycle count considered a meaningful hyper-period.
const HYPER_PERIOD_CYCLE_CAP: u64 = 10_000;

/// Find the smallest positive integers (k, l) with k * T_D = l * T_L,
/// i.e. reduce T_L / T_D to a rational k / l.
///
/// The ratio is matched by continued-fraction convergents within a
/// relative tolerance of 1e-9; ratios needing more than 10^4 cycles
/// are reported incommensurable.
pub fn hyper_period(t_long: f64, t_short: f64) -> HyperPeriod {
    assert!(t_long > 0.0 && t_short > 0.0, "periods must be positive");
    let target = t_long / t_short;
    let tol = 1e-9 * target;
    // Continued-fraction convergents p/q of `target`.
    let mut x = target;
    let (mut p_prev, mut p) = (1u64, x.floor() as u64);
    let (mut q_prev, mut q) = (0u64, 1u64);
    for _ in 0..64 {
        if q <= HYPER_PERIOD_CYCLE_CAP
            && p <= HYPER_PERIOD_CYCLE_CAP
            && (target - p as f64 / q as f64).abs() <= tol
        {
            return HyperPeriod::Commensurable {
                short_cycles: p,
                long_cycles: q,
            };
        }
        let frac = x - x.floor();
        if frac <= f64::EPSILON {
            break;
        }
        x = 1.0 / frac;
        let a = x.floor() as u64;
        let p_next = match a.checked_mul(p).and_then(|v| v.checked_add(p_prev)) {
            Some(v) => v,
            None => break,
        };
        let q_next = match a.checked_mul(q).and_then(|v| v.checked_add(q_prev)) {
            Some(v) => v,
            None => break,
        };
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        if q > HYPER_PERIOD_CYCLE_CAP && p > HYPER_PERIOD_CYCLE_CAP {
            break;
        }
    }
    HyperPeriod::Incommensurable
}

/// Stability verdict with the slack left in the inequality
/// tau_D * T_L + tau_L * T_D <= T_D * T_L - theta * (T_L + T_D).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stability {
    pub stable: bool,
    /// Right-hand side minus left-hand side [s^2]; nonnegative when
    /// stable.
    pub slack: f64,
}

/// Check the interleaving stability inequality for a configuration.
pub fn is_stable(cfg: &InterleaveConfig) -> Stability {
    let t_l = cfg.tech_long.symbol_period;
    let t_d = cfg.tech_short.symbol_period;
    let tau_l = cfg.tech_long.compute_duration;
    let tau_d = cfg.tech_short.compute_duration;
    let lhs = tau_d * t_l + tau_l * t_d;
    let rhs = t_d * t_l - cfg.guard * (t_l + t_d);
    let slack = rhs - lhs;
    // Boundary configurations land at slack 0 up to rounding.
    let eps = 1e-9 * t_d * t_l;
    Stability {
        stable: slack >= -eps,
        slack,
    }
}

/// Largest stable computation duration for the short-period technology:
/// (T_D * T_L - theta * (T_L + T_D) - tau_L * T_D) / T_L.
///
/// Returns None when no nonnegative duration is feasible.
pub fn max_tau(t_long: f64, t_short: f64, tau_long: f64, guard: f64) -> Option<f64> {
    let bound = (t_short * t_long - guard * (t_long + t_short) - tau_long * t_short) / t_long;
    if bound >= 0.0 {
        Some(bound)
    } else {
        None
    }
}

/// Fit check for interleaving the larger computation on the shorter
/// period's cycles: max(tau) <= 2 * min(T_L, T_D) - 2 * min(tau).
pub fn interleave_fit(cfg: &InterleaveConfig) -> bool {
    let tau_max = cfg
        .tech_long
        .compute_duration
        .max(cfg.tech_short.compute_duration);
    let tau_min = cfg
        .tech_long
        .compute_duration
        .min(cfg.tech_short.compute_duration);
    let t_min = cfg
        .tech_long
        .symbol_period
        .min(cfg.tech_short.symbol_period);
    tau_max <= 2.0 * t_min - 2.0 * tau_min
}

/// Feasibility of sharing one module across any number of technologies:
/// the guard-inclusive duty cycles must sum to at most one. This is the
/// natural generalization of the two-technology inequality, provided as
/// an extension rather than a claim from the source analysis.
pub fn multi_tech_feasible(techs: &[OfdmTechConfig], guard: f64) -> bool {
    techs
        .iter()
        .map(|t| (t.compute_duration + guard) / t.symbol_period)
        .sum::<f64>()
        <= 1.0
}

/// Outcome of the interleaving simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterleaveStats {
    /// Mean enqueue-to-service-start wait of the long-period stream [s].
    pub avg_wait_long: f64,
    /// Mean wait of the short-period stream [s].
    pub avg_wait_short: f64,
    /// Fraction of the horizon spent computing (guard excluded).
    pub utilization: f64,
    /// Fraction of the horizon the module is occupied, guard included.
    pub busy_fraction: f64,
    pub unstable: bool,
    /// Computations finishing after the next symbol of their own
    /// technology arrived.
    pub deadline_misses_long: u64,
    pub deadline_misses_short: u64,
    pub jobs_long: u64,
    pub jobs_short: u64,
}

fn overlap(lo: f64, hi: f64, win_lo: f64, win_hi: f64) -> f64 {
    (hi.min(win_hi) - lo.max(win_lo)).max(0.0)
}

/// Simulate FIFO interleaving of the two symbol streams on one
/// non-preemptive computation module over `horizon` seconds.
///
/// Each technology enqueues one computation per symbol period; the
/// module serves them in arrival order (long-period stream first on
/// ties), appending the guard time to every job. Instability is
/// detected behaviorally: the module never idles in the second half of
/// the horizon while the backlog keeps growing across the last two
/// quarters.
pub fn simulate_interleaving(
    cfg: &InterleaveConfig,
    horizon: f64,
) -> Result<InterleaveStats, InterleaveError> {
    if !(horizon > 0.0) {
        return Err(InterleaveError::BadHorizon(horizon));
    }
    if !(cfg.guard >= 0.0) {
        return Err(InterleaveError::BadGuard(cfg.guard));
    }
    cfg.tech_long.validate()?;
    // The short-period tau may exceed its own period in overload sweeps;
    // only require it nonnegative here.
    if cfg.tech_short.compute_duration < 0.0 || cfg.tech_short.symbol_period <= 0.0 {
        return Err(InterleaveError::BadComputeDuration {
            name: cfg.tech_short.name.clone(),
            tau: cfg.tech_short.compute_duration,
            period: cfg.tech_short.symbol_period,
        });
    }

    let periods = [cfg.tech_long.symbol_period, cfg.tech_short.symbol_period];
    let taus = [
        cfg.tech_long.compute_duration,
        cfg.tech_short.compute_duration,
    ];
    let mut next = [0.0, cfg.phase_offset.max(0.0)];
    let mut free_at = 0.0f64;
    let mut wait_sum = [0.0f64; 2];
    let mut jobs = [0u64; 2];
    let mut misses = [0u64; 2];
    let mut comp_busy = 0.0;
    let mut guard_busy = 0.0;
    let mut idle_in_second_half = false;
    let half = 0.5 * horizon;
    let q4_start = 0.75 * horizon;
    let mut max_backlog_q3 = 0.0f64;
    let mut max_backlog_q4 = 0.0f64;

    loop {
        // Earliest next symbol; long-period stream wins ties.
        let tech = if next[0] <= next[1] { 0 } else { 1 };
        let arrival = next[tech];
        if arrival > horizon {
            break;
        }
        next[tech] += periods[tech];

        if arrival > free_at && overlap(free_at, arrival, half, horizon) > 0.0 {
            idle_in_second_half = true;
        }
        let start = free_at.max(arrival);
        let comp_end = start + taus[tech];
        free_at = comp_end + cfg.guard;

        wait_sum[tech] += start - arrival;
        jobs[tech] += 1;
        comp_busy += overlap(start, comp_end, 0.0, horizon);
        guard_busy += overlap(comp_end, free_at, 0.0, horizon);
        if comp_end > arrival + periods[tech] + 1e-9 * periods[tech] {
            misses[tech] += 1;
        }

        // Unfinished work in the module right after this arrival.
        let backlog = free_at - arrival;
        if arrival >= q4_start {
            max_backlog_q4 = max_backlog_q4.max(backlog);
        } else if arrival >= half {
            max_backlog_q3 = max_backlog_q3.max(backlog);
        }
    }

    let growth_tol = 0.5 * (taus[0].max(taus[1]) + cfg.guard);
    let unstable =
        !idle_in_second_half && max_backlog_q4 > max_backlog_q3 + growth_tol;

    let avg = |sum: f64, n: u64| if n > 0 { sum / n as f64 } else { 0.0 };
    Ok(InterleaveStats {
        avg_wait_long: avg(wait_sum[0], jobs[0]),
        avg_wait_short: avg(wait_sum[1], jobs[1]),
        utilization: comp_busy / horizon,
        busy_fraction: (comp_busy + guard_busy) / horizon,
        unstable,
        deadline_misses_long: misses[0],
        deadline_misses_short: misses[1],
        jobs_long: jobs[0],
        jobs_short: jobs[1],
    })
}

/// Canonical LTE-side configuration of the evaluation scenarios:
/// T_L = 71.4 us with tau_L at 20% of the period.
pub fn lte_tech() -> OfdmTechConfig {
    OfdmTechConfig::new("lte", 71.4e-6, 14.28e-6)
}

/// DOCSIS-side configuration with the computation duration expressed as
/// the sweep factor beta: tau_D = beta * T_L.
pub fn docsis_tech(t_d: f64, beta: f64, t_l: f64) -> OfdmTechConfig {
    OfdmTechConfig::new("docsis", t_d, beta * t_l)
}
