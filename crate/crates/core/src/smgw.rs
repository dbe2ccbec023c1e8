//! Sm-GW uplink grant scheduling: equal-share limits, traffic-adaptive
//! excess-share grants, fair-target throughputs, the throughput
//! fairness index, and the request-allocate-transmit cycle simulation.

use std::collections::VecDeque;

use thiserror::Error;

use crate::sim::{run_until, EventQueue, RngStream, StatAccumulator};
use crate::traffic::{TwoStateBurstParams, TwoStateSource};

#[derive(Debug, Error, PartialEq)]
pub enum SmgwError {
    #[error("scheduler config invalid: {0}")]
    BadConfig(&'static str),
    #[error("duplicate eNB id {0} in request set")]
    DuplicateEnb(usize),
    #[error("negative request amount {amount} for eNB {enb_id}")]
    NegativeRequest { enb_id: usize, amount: f64 },
    #[error("negative equal-share limit {0}")]
    NegativeLimit(f64),
    #[error("observed and target vectors differ in length ({observed} vs {targets})")]
    LengthMismatch { observed: usize, targets: usize },
    #[error("fairness index undefined for all-zero targets")]
    DegenerateTargets,
    #[error(transparent)]
    Traffic(#[from] crate::traffic::TrafficError),
}

/// Gateway scheduling configuration for one operator egress.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchedulerConfig {
    /// Available uplink bitrate G toward the operator [bit/s].
    pub uplink_rate: f64,
    /// Scheduling cycle W [s].
    pub cycle: f64,
    /// Number of connected eNBs.
    pub num_enbs: usize,
}

impl SchedulerConfig {
    pub fn validate(&self) -> Result<(), SmgwError> {
        if !(self.uplink_rate > 0.0) {
            return Err(SmgwError::BadConfig("uplink_rate must be positive"));
        }
        if !(self.cycle > 0.0) {
            return Err(SmgwError::BadConfig("cycle must be positive"));
        }
        if self.num_enbs == 0 {
            return Err(SmgwError::BadConfig("num_enbs must be at least 1"));
        }
        Ok(())
    }
}

/// Per-eNB uplink request for one cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleRequest {
    pub enb_id: usize,
    pub operator_id: usize,
    /// Requested data amount [bits].
    pub amount: f64,
    pub cycle_index: u64,
}

/// Per-eNB uplink grant for one cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleGrant {
    pub enb_id: usize,
    pub operator_id: usize,
    /// Granted data amount [bits].
    pub amount: f64,
    pub cycle_index: u64,
}

/// Equal-share per-cycle limit: G * W / N [bits].
pub fn equal_share_limit(cfg: &SchedulerConfig) -> Result<f64, SmgwError> {
    cfg.validate()?;
    Ok(cfg.uplink_rate * cfg.cycle / cfg.num_enbs as f64)
}

/// Excess-share grant allocation for one (Sm-GW, operator, cycle).
///
/// Lightly loaded eNBs (request <= limit) are granted in full; their
/// unused allocation accumulates in an excess pool that is shared
/// equally among the highly loaded eNBs, each capped at its request.
pub fn excess_share_grants(
    requests: &[CycleRequest],
    limit: f64,
) -> Result<Vec<CycleGrant>, SmgwError> {
    if limit < 0.0 {
        return Err(SmgwError::NegativeLimit(limit));
    }
    let mut seen = std::collections::HashSet::new();
    for r in requests {
        if r.amount < 0.0 {
            return Err(SmgwError::NegativeRequest {
                enb_id: r.enb_id,
                amount: r.amount,
            });
        }
        if !seen.insert(r.enb_id) {
            return Err(SmgwError::DuplicateEnb(r.enb_id));
        }
    }
    let mut pool = 0.0;
    let mut heavy = 0usize;
    for r in requests {
        if r.amount <= limit {
            pool += limit - r.amount;
        } else {
            heavy += 1;
        }
    }
    let heavy_share = if heavy > 0 { pool / heavy as f64 } else { 0.0 };
    Ok(requests
        .iter()
        .map(|r| {
            let amount = if r.amount <= limit {
                r.amount
            } else {
                r.amount.min(limit + heavy_share)
            };
            CycleGrant {
                enb_id: r.enb_id,
                operator_id: r.operator_id,
                amount,
                cycle_index: r.cycle_index,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadClass {
    Light,
    Heavy,
}

/// Fair target throughput for one eNB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FairTarget {
    pub enb_id: usize,
    /// Target throughput [bit/s].
    pub target: f64,
    pub class: LoadClass,
}

/// Fair target throughputs for the given per-eNB load levels.
///
/// eNBs with load below G/N are lightly loaded and targeted at their
/// full load. If the total load fits in G every eNB is targeted at its
/// load; otherwise the highly loaded eNBs share the bitrate left over
/// by the light ones equally, capped at their own load.
pub fn fair_targets(loads: &[f64], uplink_rate: f64) -> Vec<FairTarget> {
    let n = loads.len();
    if n == 0 {
        return Vec::new();
    }
    let threshold = uplink_rate / n as f64;
    let total: f64 = loads.iter().sum();
    let light_sum: f64 = loads.iter().filter(|t| **t < threshold).sum();
    let heavy_count = loads.iter().filter(|t| **t >= threshold).count();
    loads
        .iter()
        .enumerate()
        .map(|(enb_id, &load)| {
            let class = if load < threshold {
                LoadClass::Light
            } else {
                LoadClass::Heavy
            };
            let target = if total <= uplink_rate || class == LoadClass::Light {
                load
            } else {
                load.min(((uplink_rate - light_sum) / heavy_count as f64).max(0.0))
            };
            FairTarget {
                enb_id,
                target,
                class,
            }
        })
        .collect()
}

/// Normalized-distance throughput fairness index:
/// sqrt(sum (tau_n - omega_n)^2) / sqrt(sum omega_n^2).
///
/// Zero means every eNB hits its fair target exactly.
pub fn fairness_index(observed: &[f64], targets: &[f64]) -> Result<f64, SmgwError> {
    if observed.len() != targets.len() {
        return Err(SmgwError::LengthMismatch {
            observed: observed.len(),
            targets: targets.len(),
        });
    }
    let denom: f64 = targets.iter().map(|o| o * o).sum();
    if denom == 0.0 {
        return Err(SmgwError::DegenerateTargets);
    }
    let num: f64 = observed
        .iter()
        .zip(targets)
        .map(|(t, o)| (t - o) * (t - o))
        .sum();
    Ok((num / denom).sqrt())
}

/// Inputs of the request/grant message overhead estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverheadParams {
    pub message_bytes: f64,
    pub link_rate: f64,
    pub distance_m: f64,
    pub cycle: f64,
    pub propagation_speed: f64,
    pub processing_delay: f64,
}

impl Default for OverheadParams {
    fn default() -> Self {
        OverheadParams {
            message_bytes: 70.0,
            link_rate: 1e9,
            distance_m: 500.0,
            cycle: 1e-3,
            propagation_speed: 3e8,
            processing_delay: 0.5e-6,
        }
    }
}

/// Fraction of each cycle consumed by the request and grant messages,
/// the round-trip propagation, and the schedule processing delay.
pub fn scheduling_overhead_fraction(p: &OverheadParams) -> f64 {
    let tx = 8.0 * p.message_bytes / p.link_rate;
    let rtt = 2.0 * p.distance_m / p.propagation_speed;
    (2.0 * tx + rtt + p.processing_delay) / p.cycle
}

/// Gateway scheduling discipline for the cycle simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchedulerMode {
    /// FIFO with tail-drop at the gateway queue; no grants.
    None,
    /// Per-cycle equal-share cap.
    Equal,
    /// Traffic-adaptive excess-share grants.
    Excess,
}

/// Scenario for the request-allocate-transmit cycle simulation.
#[derive(Debug, Clone)]
pub struct GatewayScenario {
    pub mode: SchedulerMode,
    /// Uplink bitrate G [bit/s].
    pub uplink_rate: f64,
    /// Cycle duration W [s].
    pub cycle: f64,
    /// Offered mean rate per eNB [bit/s]; also the ground truth for
    /// fair-target classification.
    pub enb_loads: Vec<f64>,
    /// Two-state source shape (sojourns, switching, ratio, packets);
    /// the per-eNB target rate comes from `enb_loads`.
    pub traffic: TwoStateBurstParams,
    /// Gateway FIFO capacity [bits]; tail-drop in mode `None`.
    pub gateway_queue_bits: f64,
    /// Per-eNB queue capacity [bits] in the granted modes.
    pub enb_queue_bits: f64,
    pub horizon: f64,
    pub warmup_fraction: f64,
    pub seed: u64,
}

impl GatewayScenario {
    pub fn new(mode: SchedulerMode, enb_loads: Vec<f64>, seed: u64) -> Self {
        GatewayScenario {
            mode,
            uplink_rate: 1e9,
            cycle: 1e-3,
            enb_loads,
            traffic: TwoStateBurstParams::with_target_rate(1.0),
            gateway_queue_bits: 20e6 * 8.0,
            enb_queue_bits: 50e6 * 8.0,
            horizon: 10.0,
            warmup_fraction: 0.1,
            seed,
        }
    }
}

/// Per-eNB outcome of a gateway simulation.
#[derive(Debug, Clone, Copy)]
pub struct EnbStats {
    pub enb_id: usize,
    pub offered_rate: f64,
    pub carried_rate: f64,
    pub mean_delay: f64,
    pub dropped_packets: u64,
    pub class: LoadClass,
}

/// Aggregate outcome of a gateway simulation.
#[derive(Debug, Clone)]
pub struct GatewayStats {
    pub per_enb: Vec<EnbStats>,
    /// Mean carried rate over lightly / highly loaded eNBs.
    pub light_throughput: f64,
    pub heavy_throughput: f64,
    pub light_mean_delay: f64,
    pub heavy_mean_delay: f64,
    /// Fairness index of carried rates against the fair targets derived
    /// from the configured loads.
    pub fairness: f64,
    /// True when the 95% CI half-widths of the class delay and
    /// throughput statistics are within 5% of their means.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
enum Ev {
    Arrival { enb: usize },
    CycleStart,
    EgressDone,
}

/// A contiguous run of bits moved toward the gateway egress; `last`
/// marks the fragment carrying a packet's final bit.
struct Segment {
    enb: usize,
    gen_time: f64,
    bits: f64,
    last: bool,
}

struct QueuedPacket {
    gen_time: f64,
    remaining: f64,
}

struct Gateway {
    scenario: GatewayScenario,
    limit: f64,
    sources: Vec<TwoStateSource>,
    pending_bits: Vec<f64>,
    enb_queues: Vec<VecDeque<QueuedPacket>>,
    enb_queue_fill: Vec<f64>,
    gw_queue: VecDeque<Segment>,
    gw_fill: f64,
    egress_busy: bool,
    cycle_index: u64,
    measure_from: f64,
    carried_bits: Vec<f64>,
    dropped: Vec<u64>,
    delay_sum: Vec<f64>,
    delay_count: Vec<u64>,
    delay_light: StatAccumulator,
    delay_heavy: StatAccumulator,
    tput_light: StatAccumulator,
    tput_heavy: StatAccumulator,
    cycle_bits_light: f64,
    cycle_bits_heavy: f64,
    classes: Vec<LoadClass>,
}

impl Gateway {
    fn granted_mode(&self) -> bool {
        self.scenario.mode != SchedulerMode::None
    }

    fn start_egress_if_idle(&mut self, queue: &mut EventQueue<Ev>, now: f64) {
        if self.egress_busy {
            return;
        }
        if let Some(seg) = self.gw_queue.front() {
            let tx = seg.bits / self.scenario.uplink_rate;
            self.egress_busy = true;
            queue
                .schedule(now + tx, Ev::EgressDone)
                .expect("egress completion scheduling");
        }
    }

    fn on_arrival(&mut self, queue: &mut EventQueue<Ev>, now: f64, enb: usize) {
        let bits = self.pending_bits[enb];
        if self.granted_mode() {
            if self.enb_queue_fill[enb] + bits <= self.scenario.enb_queue_bits {
                self.enb_queue_fill[enb] += bits;
                self.enb_queues[enb].push_back(QueuedPacket {
                    gen_time: now,
                    remaining: bits,
                });
            } else {
                self.dropped[enb] += 1;
            }
        } else if self.gw_fill + bits <= self.scenario.gateway_queue_bits {
            self.gw_fill += bits;
            self.gw_queue.push_back(Segment {
                enb,
                gen_time: now,
                bits,
                last: true,
            });
            self.start_egress_if_idle(queue, now);
        } else {
            self.dropped[enb] += 1;
        }
        // Schedule this eNB's next arrival.
        let a = self.sources[enb].next_arrival();
        self.pending_bits[enb] = a.bits;
        queue
            .schedule(a.time, Ev::Arrival { enb })
            .expect("arrival scheduling");
    }

    fn on_cycle_start(&mut self, queue: &mut EventQueue<Ev>, now: f64) {
        // Per-cycle class throughput samples for convergence tracking.
        if now >= self.measure_from && self.cycle_index > 0 {
            self.tput_light
                .record(self.cycle_bits_light / self.scenario.cycle);
            self.tput_heavy
                .record(self.cycle_bits_heavy / self.scenario.cycle);
        }
        self.cycle_bits_light = 0.0;
        self.cycle_bits_heavy = 0.0;

        if self.granted_mode() {
            let requests: Vec<CycleRequest> = (0..self.enb_queues.len())
                .map(|enb| CycleRequest {
                    enb_id: enb,
                    operator_id: 0,
                    amount: self.enb_queue_fill[enb],
                    cycle_index: self.cycle_index,
                })
                .collect();
            let grants: Vec<f64> = match self.scenario.mode {
                SchedulerMode::Equal => requests
                    .iter()
                    .map(|r| r.amount.min(self.limit))
                    .collect(),
                SchedulerMode::Excess => excess_share_grants(&requests, self.limit)
                    .expect("cycle requests are well-formed")
                    .into_iter()
                    .map(|g| g.amount)
                    .collect(),
                SchedulerMode::None => unreachable!(),
            };
            for (enb, mut grant) in grants.into_iter().enumerate() {
                while grant > 0.0 {
                    let Some(pkt) = self.enb_queues[enb].front_mut() else {
                        break;
                    };
                    let take = pkt.remaining.min(grant);
                    let last = take >= pkt.remaining;
                    let gen_time = pkt.gen_time;
                    pkt.remaining -= take;
                    if last {
                        self.enb_queues[enb].pop_front();
                    }
                    self.enb_queue_fill[enb] = (self.enb_queue_fill[enb] - take).max(0.0);
                    grant -= take;
                    self.gw_queue.push_back(Segment {
                        enb,
                        gen_time,
                        bits: take,
                        last,
                    });
                }
            }
            self.start_egress_if_idle(queue, now);
        }
        self.cycle_index += 1;
        queue
            .schedule(now + self.scenario.cycle, Ev::CycleStart)
            .expect("cycle scheduling");
    }

    fn on_egress_done(&mut self, queue: &mut EventQueue<Ev>, now: f64) {
        let seg = self.gw_queue.pop_front().expect("egress completed a segment");
        if !self.granted_mode() {
            self.gw_fill = (self.gw_fill - seg.bits).max(0.0);
        }
        if now >= self.measure_from {
            self.carried_bits[seg.enb] += seg.bits;
            match self.classes[seg.enb] {
                LoadClass::Light => self.cycle_bits_light += seg.bits,
                LoadClass::Heavy => self.cycle_bits_heavy += seg.bits,
            }
            if seg.last {
                let delay = now - seg.gen_time;
                self.delay_sum[seg.enb] += delay;
                self.delay_count[seg.enb] += 1;
                match self.classes[seg.enb] {
                    LoadClass::Light => self.delay_light.record(delay),
                    LoadClass::Heavy => self.delay_heavy.record(delay),
                }
            }
        }
        self.egress_busy = false;
        self.start_egress_if_idle(queue, now);
    }
}

/// Run the gateway cycle simulation and report per-eNB and per-class
/// throughput, delay, and fairness statistics.
pub fn run_gateway_cycle(scenario: &GatewayScenario) -> Result<GatewayStats, SmgwError> {
    let cfg = SchedulerConfig {
        uplink_rate: scenario.uplink_rate,
        cycle: scenario.cycle,
        num_enbs: scenario.enb_loads.len(),
    };
    let limit = equal_share_limit(&cfg)?;
    if !(scenario.horizon > 0.0) {
        return Err(SmgwError::BadConfig("horizon must be positive"));
    }
    if !(0.0..1.0).contains(&scenario.warmup_fraction) {
        return Err(SmgwError::BadConfig("warmup_fraction must be in [0, 1)"));
    }

    let threshold = scenario.uplink_rate / scenario.enb_loads.len() as f64;
    let classes: Vec<LoadClass> = scenario
        .enb_loads
        .iter()
        .map(|t| {
            if *t < threshold {
                LoadClass::Light
            } else {
                LoadClass::Heavy
            }
        })
        .collect();

    let mut sources = Vec::with_capacity(scenario.enb_loads.len());
    for (enb, load) in scenario.enb_loads.iter().enumerate() {
        let params = TwoStateBurstParams {
            target_mean_rate: *load,
            ..scenario.traffic
        };
        sources.push(TwoStateSource::new(
            params,
            RngStream::new(scenario.seed, enb as u64),
        )?);
    }

    let n = scenario.enb_loads.len();
    let mut gw = Gateway {
        scenario: scenario.clone(),
        limit,
        sources,
        pending_bits: vec![0.0; n],
        enb_queues: (0..n).map(|_| VecDeque::new()).collect(),
        enb_queue_fill: vec![0.0; n],
        gw_queue: VecDeque::new(),
        gw_fill: 0.0,
        egress_busy: false,
        cycle_index: 0,
        measure_from: scenario.warmup_fraction * scenario.horizon,
        carried_bits: vec![0.0; n],
        dropped: vec![0; n],
        delay_sum: vec![0.0; n],
        delay_count: vec![0; n],
        delay_light: StatAccumulator::new(),
        delay_heavy: StatAccumulator::new(),
        tput_light: StatAccumulator::new(),
        tput_heavy: StatAccumulator::new(),
        cycle_bits_light: 0.0,
        cycle_bits_heavy: 0.0,
        classes,
    };

    let mut queue = EventQueue::new();
    for enb in 0..n {
        let a = gw.sources[enb].next_arrival();
        gw.pending_bits[enb] = a.bits;
        queue.schedule(a.time, Ev::Arrival { enb }).unwrap();
    }
    queue.schedule(0.0, Ev::CycleStart).unwrap();

    run_until(&mut queue, scenario.horizon, |queue, now, ev| match ev {
        Ev::Arrival { enb } => gw.on_arrival(queue, now, enb),
        Ev::CycleStart => gw.on_cycle_start(queue, now),
        Ev::EgressDone => gw.on_egress_done(queue, now),
    })
    .expect("horizon is ahead of the clock");

    let window = scenario.horizon - gw.measure_from;
    let carried: Vec<f64> = gw.carried_bits.iter().map(|b| b / window).collect();
    let targets = fair_targets(&scenario.enb_loads, scenario.uplink_rate);
    let target_rates: Vec<f64> = targets.iter().map(|t| t.target).collect();
    let fairness = fairness_index(&carried, &target_rates)?;

    let class_mean = |class: LoadClass| {
        let vals: Vec<f64> = carried
            .iter()
            .zip(&gw.classes)
            .filter(|(_, c)| **c == class)
            .map(|(r, _)| *r)
            .collect();
        if vals.is_empty() {
            0.0
        } else {
            vals.iter().sum::<f64>() / vals.len() as f64
        }
    };

    let per_enb = (0..n)
        .map(|enb| EnbStats {
            enb_id: enb,
            offered_rate: scenario.enb_loads[enb],
            carried_rate: carried[enb],
            mean_delay: if gw.delay_count[enb] > 0 {
                gw.delay_sum[enb] / gw.delay_count[enb] as f64
            } else {
                0.0
            },
            dropped_packets: gw.dropped[enb],
            class: gw.classes[enb],
        })
        .collect();

    let converged = gw.delay_light.converged()
        && gw.tput_light.converged()
        && (gw.tput_heavy.count() == 0 || gw.tput_heavy.converged());

    Ok(GatewayStats {
        per_enb,
        light_throughput: class_mean(LoadClass::Light),
        heavy_throughput: class_mean(LoadClass::Heavy),
        light_mean_delay: gw.delay_light.mean(),
        heavy_mean_delay: gw.delay_heavy.mean(),
        fairness,
        converged,
    })
}
