//! Traffic source models: a two-state (low/heavy) bursty source with
//! uniformly distributed sojourn times, and a self-similar source built
//! from superposed on/off processes with Pareto period lengths.
//!
//! Sources are pull-based: `next_arrival` advances the source's own
//! clock and returns the next packet, which callers turn into events.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::sim::RngStream;

#[derive(Debug, Error, PartialEq)]
pub enum TrafficError {
    #[error("switch probabilities must lie in [0, 1], got ({low}, {heavy})")]
    BadSwitchProbability { low: f64, heavy: f64 },
    #[error("switch probabilities must not both be zero")]
    NoSwitching,
    #[error("sojourn bounds must satisfy 0 <= lo < hi, got [{lo}, {hi}]")]
    BadSojournRange { lo: f64, hi: f64 },
    #[error("heavy:low rate ratio must exceed 1, got {0}")]
    BadRateRatio(f64),
    #[error("target mean rate must be positive, got {0}")]
    BadTargetRate(f64),
    #[error("mean packet size must be positive, got {0}")]
    BadPacketSize(f64),
    #[error("hurst parameter must lie in [0.5, 1), got {0}")]
    BadHurst(f64),
    #[error("load must lie in (0, 1], got {0}")]
    BadLoad(f64),
    #[error("link rate must be positive, got {0}")]
    BadLinkRate(f64),
    #[error("on/off source count must be positive")]
    NoSources,
}

/// One packet arrival.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arrival {
    /// Absolute source time [s].
    pub time: f64,
    /// Packet size [bits].
    pub bits: f64,
}

/// Packet size distribution; sizes are in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PacketSizeDist {
    Fixed(f64),
    Exponential { mean_bits: f64 },
}

impl PacketSizeDist {
    pub fn mean_bits(&self) -> f64 {
        match self {
            PacketSizeDist::Fixed(b) => *b,
            PacketSizeDist::Exponential { mean_bits } => *mean_bits,
        }
    }

    fn draw(&self, rng: &mut RngStream) -> f64 {
        match self {
            PacketSizeDist::Fixed(b) => *b,
            PacketSizeDist::Exponential { mean_bits } => rng.exponential(*mean_bits),
        }
    }
}

/// Default packet size for the backhaul scenarios: 1500 bytes.
pub const DEFAULT_PACKET_BITS: f64 = 1500.0 * 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BurstState {
    Low,
    Heavy,
}

/// Two-state bursty source parameters.
///
/// The source alternates low and heavy traffic states. Sojourn times
/// are Uniform(sojourn_lo, sojourn_hi); at the end of a sojourn the
/// state switches with the configured per-state probability. Within a
/// state, packets arrive as a Poisson process at the state's rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStateBurstParams {
    pub sojourn_lo: f64,
    pub sojourn_hi: f64,
    pub p_switch_from_low: f64,
    pub p_switch_from_heavy: f64,
    pub rate_ratio_heavy_to_low: f64,
    /// Long-run average rate the source must produce [bit/s].
    pub target_mean_rate: f64,
    pub packet_size: PacketSizeDist,
}

impl TwoStateBurstParams {
    /// Defaults: 1-4 ms sojourns, 70%/30% switching, 4:1 rate ratio,
    /// fixed 1500-byte packets.
    pub fn with_target_rate(target_mean_rate: f64) -> Self {
        TwoStateBurstParams {
            sojourn_lo: 1e-3,
            sojourn_hi: 4e-3,
            p_switch_from_low: 0.7,
            p_switch_from_heavy: 0.3,
            rate_ratio_heavy_to_low: 4.0,
            target_mean_rate,
            packet_size: PacketSizeDist::Fixed(DEFAULT_PACKET_BITS),
        }
    }

    pub fn validate(&self) -> Result<(), TrafficError> {
        let (pl, ph) = (self.p_switch_from_low, self.p_switch_from_heavy);
        if !(0.0..=1.0).contains(&pl) || !(0.0..=1.0).contains(&ph) {
            return Err(TrafficError::BadSwitchProbability { low: pl, heavy: ph });
        }
        if pl == 0.0 && ph == 0.0 {
            return Err(TrafficError::NoSwitching);
        }
        if !(self.sojourn_lo >= 0.0 && self.sojourn_lo < self.sojourn_hi) {
            return Err(TrafficError::BadSojournRange {
                lo: self.sojourn_lo,
                hi: self.sojourn_hi,
            });
        }
        if !(self.rate_ratio_heavy_to_low > 1.0) {
            return Err(TrafficError::BadRateRatio(self.rate_ratio_heavy_to_low));
        }
        if !(self.target_mean_rate > 0.0) {
            return Err(TrafficError::BadTargetRate(self.target_mean_rate));
        }
        if !(self.packet_size.mean_bits() > 0.0) {
            return Err(TrafficError::BadPacketSize(self.packet_size.mean_bits()));
        }
        Ok(())
    }

    /// Stationary probability of the heavy state.
    ///
    /// Sojourn lengths are identically distributed in both states, and
    /// the number of sojourns spent in a state before switching is
    /// geometric, so the mean dwell is proportional to 1/p_switch and
    /// P(heavy) = p_low / (p_low + p_heavy).
    pub fn stationary_heavy_probability(&self) -> f64 {
        self.p_switch_from_low / (self.p_switch_from_low + self.p_switch_from_heavy)
    }

    /// Per-state bitrates (low, heavy) solving
    /// pi_low * r + pi_heavy * ratio * r = target_mean_rate.
    pub fn state_rates(&self) -> Result<(f64, f64), TrafficError> {
        self.validate()?;
        let pi_h = self.stationary_heavy_probability();
        let pi_l = 1.0 - pi_h;
        let denom = pi_l + self.rate_ratio_heavy_to_low * pi_h;
        let low = self.target_mean_rate / denom;
        if !(low > 0.0) {
            return Err(TrafficError::BadTargetRate(self.target_mean_rate));
        }
        Ok((low, self.rate_ratio_heavy_to_low * low))
    }
}

/// Decide the state after a sojourn ends, given a uniform draw `u`.
fn switched_state(state: BurstState, params: &TwoStateBurstParams, u: f64) -> BurstState {
    let p = match state {
        BurstState::Low => params.p_switch_from_low,
        BurstState::Heavy => params.p_switch_from_heavy,
    };
    if u < p {
        match state {
            BurstState::Low => BurstState::Heavy,
            BurstState::Heavy => BurstState::Low,
        }
    } else {
        state
    }
}

/// Two-state bursty packet source.
pub struct TwoStateSource {
    params: TwoStateBurstParams,
    rate_low: f64,
    rate_heavy: f64,
    state: BurstState,
    sojourn_end: f64,
    clock: f64,
    rng: RngStream,
}

impl TwoStateSource {
    pub fn new(params: TwoStateBurstParams, mut rng: RngStream) -> Result<Self, TrafficError> {
        let (rate_low, rate_heavy) = params.state_rates()?;
        // Start from the stationary state distribution.
        let state = if rng.bernoulli(params.stationary_heavy_probability()) {
            BurstState::Heavy
        } else {
            BurstState::Low
        };
        let sojourn_end = rng.uniform(params.sojourn_lo, params.sojourn_hi).unwrap();
        Ok(TwoStateSource {
            params,
            rate_low,
            rate_heavy,
            state,
            sojourn_end,
            clock: 0.0,
            rng,
        })
    }

    pub fn state(&self) -> BurstState {
        self.state
    }

    pub fn sojourn_end(&self) -> f64 {
        self.sojourn_end
    }

    fn current_rate(&self) -> f64 {
        match self.state {
            BurstState::Low => self.rate_low,
            BurstState::Heavy => self.rate_heavy,
        }
    }

    pub fn next_arrival(&mut self) -> Arrival {
        loop {
            let pkt_rate = self.current_rate() / self.params.packet_size.mean_bits();
            let dt = self.rng.exponential(1.0 / pkt_rate);
            if self.clock + dt <= self.sojourn_end {
                self.clock += dt;
                let bits = self.params.packet_size.draw(&mut self.rng);
                return Arrival {
                    time: self.clock,
                    bits,
                };
            }
            // Sojourn over; possibly switch state and start a new one.
            // Poisson arrivals are memoryless, so the pending gap is
            // simply redrawn at the new state's rate.
            self.clock = self.sojourn_end;
            let u = self.rng.unit();
            self.state = switched_state(self.state, &self.params, u);
            let sojourn = self
                .rng
                .uniform(self.params.sojourn_lo, self.params.sojourn_hi)
                .unwrap();
            self.sojourn_end = self.clock + sojourn;
        }
    }
}

/// Self-similar source parameters.
///
/// hurst = 0.5 degenerates to a Poisson process; hurst in (0.5, 1)
/// yields long-range-dependent arrivals from `num_sources` superposed
/// on/off processes whose on and off periods are Pareto distributed
/// with shape 3 - 2H.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfSimilarParams {
    pub hurst: f64,
    /// Offered load as a fraction of `link_rate`.
    pub load: f64,
    pub link_rate: f64,
    pub packet_size: PacketSizeDist,
    pub num_sources: usize,
    /// Mean on-period length [s] of each on/off component.
    pub mean_on: f64,
}

impl SelfSimilarParams {
    pub fn new(hurst: f64, load: f64, link_rate: f64, packet_size: PacketSizeDist) -> Self {
        SelfSimilarParams {
            hurst,
            load,
            link_rate,
            packet_size,
            num_sources: 32,
            mean_on: 5e-3,
        }
    }

    pub fn validate(&self) -> Result<(), TrafficError> {
        if !(0.5..1.0).contains(&self.hurst) {
            return Err(TrafficError::BadHurst(self.hurst));
        }
        if !(self.load > 0.0 && self.load <= 1.0) {
            return Err(TrafficError::BadLoad(self.load));
        }
        if !(self.link_rate > 0.0) {
            return Err(TrafficError::BadLinkRate(self.link_rate));
        }
        if !(self.packet_size.mean_bits() > 0.0) {
            return Err(TrafficError::BadPacketSize(self.packet_size.mean_bits()));
        }
        if self.num_sources == 0 {
            return Err(TrafficError::NoSources);
        }
        Ok(())
    }

    /// Aggregate mean offered rate [bit/s].
    pub fn offered_rate(&self) -> f64 {
        self.load * self.link_rate
    }

    /// Pareto shape for the on/off period lengths.
    pub fn pareto_shape(&self) -> f64 {
        3.0 - 2.0 * self.hurst
    }
}

struct OnOffComponent {
    clock: f64,
    /// End of the current on-period; the component is off when
    /// clock >= on_end.
    on_end: f64,
}

impl OnOffComponent {
    /// Advance to this component's next packet arrival and return its
    /// absolute time.
    fn next_packet(
        &mut self,
        rng: &mut RngStream,
        peak_pkt_rate: f64,
        shape: f64,
        xm_on: f64,
        xm_off: f64,
    ) -> f64 {
        loop {
            if self.clock < self.on_end {
                let dt = rng.exponential(1.0 / peak_pkt_rate);
                if self.clock + dt <= self.on_end {
                    self.clock += dt;
                    return self.clock;
                }
                self.clock = self.on_end;
            }
            let off = rng.pareto(shape, xm_off);
            self.clock += off;
            self.on_end = self.clock + rng.pareto(shape, xm_on);
        }
    }
}

/// Heap entry ordered by (time, source index) for deterministic merging.
struct Pending {
    time: f64,
    src: usize,
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .partial_cmp(&self.time)
            .unwrap()
            .then_with(|| other.src.cmp(&self.src))
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.src == other.src
    }
}

impl Eq for Pending {}

enum SourceKind {
    Poisson {
        pkt_rate: f64,
        clock: f64,
    },
    OnOff {
        components: Vec<OnOffComponent>,
        /// Confirmed next-arrival time per component.
        heap: BinaryHeap<Pending>,
        peak_pkt_rate: f64,
        shape: f64,
        xm_on: f64,
        xm_off: f64,
    },
}

/// Self-similar (or Poisson, at H = 0.5) packet source.
pub struct SelfSimilarSource {
    params: SelfSimilarParams,
    kind: SourceKind,
    rng: RngStream,
}

impl SelfSimilarSource {
    pub fn new(params: SelfSimilarParams, mut rng: RngStream) -> Result<Self, TrafficError> {
        params.validate()?;
        let mean_pkt = params.packet_size.mean_bits();
        let kind = if params.hurst == 0.5 {
            SourceKind::Poisson {
                pkt_rate: params.offered_rate() / mean_pkt,
                clock: 0.0,
            }
        } else {
            let shape = params.pareto_shape();
            // Equal mean on and off periods: each component is on half
            // the time, so its peak rate is twice its mean rate.
            let xm_on = params.mean_on * (shape - 1.0) / shape;
            let xm_off = xm_on;
            let per_source_rate = params.offered_rate() / params.num_sources as f64;
            let peak_pkt_rate = 2.0 * per_source_rate / mean_pkt;
            let mut components = Vec::with_capacity(params.num_sources);
            let mut heap = BinaryHeap::with_capacity(params.num_sources);
            for src in 0..params.num_sources {
                let on_end = if rng.bernoulli(0.5) {
                    rng.pareto(shape, xm_on)
                } else {
                    0.0
                };
                let mut comp = OnOffComponent { clock: 0.0, on_end };
                let t = comp.next_packet(&mut rng, peak_pkt_rate, shape, xm_on, xm_off);
                components.push(comp);
                heap.push(Pending { time: t, src });
            }
            SourceKind::OnOff {
                components,
                heap,
                peak_pkt_rate,
                shape,
                xm_on,
                xm_off,
            }
        };
        Ok(SelfSimilarSource { params, kind, rng })
    }

    pub fn params(&self) -> &SelfSimilarParams {
        &self.params
    }

    pub fn next_arrival(&mut self) -> Arrival {
        let rng = &mut self.rng;
        let size = &self.params.packet_size;
        match &mut self.kind {
            SourceKind::Poisson { pkt_rate, clock } => {
                *clock += rng.exponential(1.0 / *pkt_rate);
                Arrival {
                    time: *clock,
                    bits: size.draw(rng),
                }
            }
            SourceKind::OnOff {
                components,
                heap,
                peak_pkt_rate,
                shape,
                xm_on,
                xm_off,
            } => {
                let Pending { time, src } = heap.pop().expect("component heap never empties");
                let next = components[src].next_packet(rng, *peak_pkt_rate, *shape, *xm_on, *xm_off);
                heap.push(Pending { time: next, src });
                Arrival {
                    time,
                    bits: size.draw(rng),
                }
            }
        }
    }
}
