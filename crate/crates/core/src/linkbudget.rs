//! Closed-form calculators for fronthaul I/Q data rates, QAM-symbol
//! caching overheads, and cache memory budgets.
//!
//! All functions are pure and linear in their multiplicative
//! parameters.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LinkBudgetError {
    #[error("symbol duration must be positive, got {0}")]
    NonPositiveSymbolDuration(f64),
    #[error("LTE grid needs at least 72 subcarriers (6 RBs), got {0}")]
    GridTooSmall(u32),
    #[error("allocated fraction must be in (0, 1], got {0}")]
    BadAllocatedFraction(f64),
}

/// Fronthaul link parameters.
///
/// Defaults describe a single-RRU 20 MHz LTE cell with two antennas;
/// the default symbol duration is the useful (CP-free) OFDM symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FronthaulParams {
    /// Number of RRUs sharing the link (N).
    pub num_rrus: u32,
    /// Tx/Rx antennas per RRU (W).
    pub antennas: u32,
    /// Carrier frequency f_c [Hz].
    pub carrier_freq: f64,
    /// Baseband sampling frequency f_s [Hz].
    pub sampling_freq: f64,
    /// Bits per I or Q component (K).
    pub bits_per_component: u32,
    /// Baseband oversampling factor.
    pub oversample: f64,
    /// Occupied subcarriers (B_sub).
    pub subcarriers_used: u32,
    /// OFDM symbol duration T_s [s].
    pub symbol_duration: f64,
}

impl Default for FronthaulParams {
    fn default() -> Self {
        FronthaulParams {
            num_rrus: 1,
            antennas: 2,
            carrier_freq: 2e9,
            sampling_freq: 30.72e6,
            bits_per_component: 10,
            oversample: 2.0,
            subcarriers_used: 1200,
            symbol_duration: 66.7e-6,
        }
    }
}

/// Passband time-domain I/Q rate: N * W * 2 f_c * K [bit/s].
pub fn passband_rate(p: &FronthaulParams) -> f64 {
    p.num_rrus as f64 * p.antennas as f64 * 2.0 * p.carrier_freq * p.bits_per_component as f64
}

/// Baseband time-domain I/Q rate: N * W * (oversample * f_s) * 2K [bit/s].
pub fn baseband_rate(p: &FronthaulParams) -> f64 {
    p.num_rrus as f64
        * p.antennas as f64
        * (p.oversample * p.sampling_freq)
        * (2.0 * p.bits_per_component as f64)
}

/// Frequency-domain QAM-symbol rate: N * W * B_sub / T_s * 2K [bit/s].
///
/// One vector of B_sub complex QAM symbols ships per OFDM symbol.
pub fn freq_domain_rate(p: &FronthaulParams) -> Result<f64, LinkBudgetError> {
    if p.symbol_duration <= 0.0 {
        return Err(LinkBudgetError::NonPositiveSymbolDuration(p.symbol_duration));
    }
    Ok(p.num_rrus as f64
        * p.antennas as f64
        * p.subcarriers_used as f64
        * (1.0 / p.symbol_duration)
        * (2.0 * p.bits_per_component as f64))
}

/// LTE resource-grid shape used by the overhead calculators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LteGrid {
    /// Occupied subcarriers: 1200 for 20 MHz, 72 for 1.4 MHz.
    pub subcarriers: u32,
    pub symbols_per_subframe: u32,
    pub subframes_per_frame: u32,
}

impl LteGrid {
    pub fn new(subcarriers: u32) -> Result<Self, LinkBudgetError> {
        if subcarriers < 72 {
            return Err(LinkBudgetError::GridTooSmall(subcarriers));
        }
        Ok(LteGrid {
            subcarriers,
            symbols_per_subframe: 14,
            subframes_per_frame: 10,
        })
    }
}

/// Cacheable-overhead fractions of the LTE downlink grid, assuming full
/// resource allocation over the whole bandwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LteCacheOverheads {
    /// Reference-signal tones: 8 per RB-subframe, bandwidth independent.
    pub rs: f64,
    /// PBCH/MIB: central 6 RBs over 4 symbols once per radio frame,
    /// minus the RS tones already counted.
    pub pbch: f64,
    /// PSS/SSS: central 6 RBs over 2 symbols, twice per radio frame.
    pub sch: f64,
    /// SIB1/SIB2: 8 RBs over one subframe every two radio frames, minus
    /// the corresponding RS tones.
    pub sib: f64,
}

impl LteCacheOverheads {
    pub fn total(&self) -> f64 {
        self.rs + self.pbch + self.sch + self.sib
    }

    /// Rescale to a partial resource allocation: with only `fraction` of
    /// the grid carrying traffic, the always-on cached channels make up
    /// a proportionally larger share of what crosses the fronthaul.
    pub fn with_allocated_fraction(&self, fraction: f64) -> Result<Self, LinkBudgetError> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(LinkBudgetError::BadAllocatedFraction(fraction));
        }
        let scale = |o: f64| (o / fraction).min(1.0);
        Ok(LteCacheOverheads {
            rs: scale(self.rs),
            pbch: scale(self.pbch),
            sch: scale(self.sch),
            sib: scale(self.sib),
        })
    }
}

/// Per-channel cacheable overheads for an LTE grid.
pub fn lte_cache_overheads(grid: &LteGrid) -> LteCacheOverheads {
    let subc = grid.subcarriers as f64;
    let syms = grid.symbols_per_subframe as f64;
    let frames = grid.subframes_per_frame as f64;
    let rs = 8.0 / (12.0 * syms);
    let pbch = (6.0 * 12.0 * 4.0 - 8.0 * 6.0) / (subc * syms * frames);
    let sch = (6.0 * 12.0 * 4.0) / (subc * syms * frames);
    let sib = (8.0 * 12.0 * syms - 8.0 * 8.0) / (subc * syms * 2.0 * frames);
    LteCacheOverheads { rs, pbch, sch, sib }
}

/// DOCSIS 3.1 downstream grid parameters for pilot/guard caching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DocsisGrid {
    pub total_subcarriers: u32,
    pub guard_subcarriers: u32,
    pub continuous_pilots: u32,
    pub scattered_pilots: u32,
}

impl Default for DocsisGrid {
    /// 192 MHz channel, 8K FFT at 25 kHz spacing.
    fn default() -> Self {
        DocsisGrid {
            total_subcarriers: 7680,
            guard_subcarriers: 80,
            continuous_pilots: 88,
            scattered_pilots: 60,
        }
    }
}

impl DocsisGrid {
    pub fn cacheable_subcarriers(&self) -> u32 {
        self.guard_subcarriers + self.continuous_pilots + self.scattered_pilots
    }
}

/// Fraction of DOCSIS subcarriers that are redundant and cacheable.
pub fn docsis_cache_overhead(grid: &DocsisGrid) -> f64 {
    grid.cacheable_subcarriers() as f64 / grid.total_subcarriers as f64
}

/// Channels whose QAM symbols can be cached at the remote node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CacheChannel {
    Rs,
    Pbch,
    Sch,
    Sib,
    DocsisPilots,
}

impl CacheChannel {
    pub fn label(&self) -> &'static str {
        match self {
            CacheChannel::Rs => "RS",
            CacheChannel::Pbch => "PBCH",
            CacheChannel::Sch => "SCH",
            CacheChannel::Sib => "SIB",
            CacheChannel::DocsisPilots => "DOCSIS-pilots",
        }
    }
}

/// Cache budget for one channel: symbol count and the bits to hold it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheBudget {
    pub channel: CacheChannel,
    pub cached_symbol_count: u64,
    pub memory_bits: u64,
}

/// Memory to cache `count` complex QAM symbols: count * 2 * K bits.
pub fn symbol_memory_bits(count: u64, bits_per_component: u32) -> u64 {
    count * 2 * bits_per_component as u64
}

/// Cached QAM-symbol counts per channel.
///
/// Defaults are the 20 MHz LTE grid counts: 200 RS tones (2 per RB for
/// 100 RBs), 240 PBCH symbols (6 RBs x 4 symbols minus RS), 288 SCH
/// symbols, 1280 SIB symbols (8 RBs x 14 symbols minus RS), and 228
/// DOCSIS guard/pilot subcarriers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheSymbolCounts {
    pub rs: u64,
    pub pbch: u64,
    pub sch: u64,
    pub sib: u64,
    pub docsis_pilots: u64,
}

impl Default for CacheSymbolCounts {
    fn default() -> Self {
        CacheSymbolCounts {
            rs: 2 * 100,
            pbch: 6 * 12 * 4 - 8 * 6,
            sch: 6 * 12 * 4,
            sib: 8 * 12 * 14 - 8 * 8,
            docsis_pilots: 80 + 88 + 60,
        }
    }
}

/// Per-channel and total cache memory.
#[derive(Debug, Clone, PartialEq)]
pub struct CacheMemoryReport {
    pub channels: Vec<CacheBudget>,
    pub total_bits: u64,
}

pub fn cache_memory(counts: &CacheSymbolCounts, bits_per_component: u32) -> CacheMemoryReport {
    let channels = vec![
        (CacheChannel::Rs, counts.rs),
        (CacheChannel::Pbch, counts.pbch),
        (CacheChannel::Sch, counts.sch),
        (CacheChannel::Sib, counts.sib),
        (CacheChannel::DocsisPilots, counts.docsis_pilots),
    ]
    .into_iter()
    .map(|(channel, count)| CacheBudget {
        channel,
        cached_symbol_count: count,
        memory_bits: symbol_memory_bits(count, bits_per_component),
    })
    .collect::<Vec<_>>();
    let total_bits = channels.iter().map(|c| c.memory_bits).sum();
    CacheMemoryReport {
        channels,
        total_bits,
    }
}

/// SIB cache memory as printed in the source material, which disagrees
/// with its own formula (the formula gives 25,600 bits). Kept so reports
/// can surface both values.
pub const PRINTED_SIB_MEMORY_BITS: u64 = 5760;

/// Printed total cache memory, consistent with summing RS + PBCH + SCH +
/// pilot memories while leaving the SIB contribution out.
pub const PRINTED_TOTAL_MEMORY_BITS: u64 = 19_120;

/// Bit-inflation factor of frequency-domain I/Q transport relative to
/// the payload: (1/code_rate) * (1/qam_bits) * 2 * K.
pub fn inflation_factor(code_rate: f64, qam_bits: u32, iq_bits_per_component: u32) -> f64 {
    debug_assert!(code_rate > 0.0 && code_rate <= 1.0);
    debug_assert!(qam_bits > 0);
    (1.0 / code_rate) * (1.0 / qam_bits as f64) * 2.0 * iq_bits_per_component as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn passband_rate_defaults_80_gbps() {
        let p = FronthaulParams::default();
        assert_relative_eq!(passband_rate(&p), 80e9, epsilon = 1e-3);
    }

    #[test]
    fn passband_rate_edge_cases() {
        let mut p = FronthaulParams::default();
        p.num_rrus = 0;
        assert_eq!(passband_rate(&p), 0.0);
        let mut p = FronthaulParams::default();
        p.antennas = 4;
        assert_relative_eq!(passband_rate(&p), 160e9, epsilon = 1e-3);
    }

    #[test]
    fn baseband_rate_defaults_2_4576_gbps() {
        let p = FronthaulParams::default();
        assert_relative_eq!(baseband_rate(&p), 2.4576e9, epsilon = 1e-3);
    }

    #[test]
    fn baseband_rate_scaling() {
        let mut p = FronthaulParams::default();
        p.oversample = 1.0;
        assert_relative_eq!(baseband_rate(&p), 2.4576e9 / 2.0, epsilon = 1e-3);
        let mut p = FronthaulParams::default();
        p.bits_per_component = 12;
        assert_relative_eq!(baseband_rate(&p), 2.94912e9, epsilon = 1e-3);
    }

    #[test]
    fn freq_domain_rate_defaults_720_mbps() {
        let p = FronthaulParams::default();
        let r = freq_domain_rate(&p).unwrap();
        // 1 * 2 * 1200 / 66.7us * 20 = 719.64 Mb/s, printed as 720.
        assert_relative_eq!(r, 719.640_179_910e6, epsilon = 1e3);
        assert!((r - 720e6).abs() < 0.5e6);
    }

    #[test]
    fn freq_domain_savings_vs_baseband_70_percent() {
        let p = FronthaulParams::default();
        let rb = baseband_rate(&p);
        let rf = freq_domain_rate(&p).unwrap();
        let savings = (rb - rf) / rb;
        assert!((savings - 0.70).abs() < 0.01, "savings={savings}");
    }

    #[test]
    fn freq_domain_rate_linear_in_subcarriers() {
        let mut p = FronthaulParams::default();
        p.subcarriers_used = 600;
        let r = freq_domain_rate(&p).unwrap();
        assert!((r - 360e6).abs() < 0.5e6);
    }

    #[test]
    fn freq_domain_rate_zero_symbol_duration_is_error() {
        let mut p = FronthaulParams::default();
        p.symbol_duration = 0.0;
        assert_eq!(
            freq_domain_rate(&p).unwrap_err(),
            LinkBudgetError::NonPositiveSymbolDuration(0.0)
        );
    }

    #[test]
    fn rate_ordering_for_defaults() {
        let p = FronthaulParams::default();
        let rp = passband_rate(&p);
        let rb = baseband_rate(&p);
        let rf = freq_domain_rate(&p).unwrap();
        assert!(rf < rb && rb < rp);
    }

    #[test]
    fn lte_overheads_20_mhz() {
        let grid = LteGrid::new(1200).unwrap();
        let o = lte_cache_overheads(&grid);
        assert_relative_eq!(o.rs, 8.0 / 168.0, epsilon = 1e-12);
        assert!((o.rs - 0.047).abs() < 1e-3);
        assert_relative_eq!(o.pbch, 240.0 / 168_000.0, epsilon = 1e-12);
        assert!((o.pbch - 0.00142).abs() < 1e-5);
        assert_relative_eq!(o.sch, 288.0 / 168_000.0, epsilon = 1e-12);
        assert!((o.sch - 0.00171).abs() < 1e-5);
        assert_relative_eq!(o.sib, 1280.0 / 336_000.0, epsilon = 1e-12);
        assert!((o.sib - 0.00381).abs() < 1e-5);
    }

    #[test]
    fn lte_overheads_1_4_mhz() {
        let grid = LteGrid::new(72).unwrap();
        let o = lte_cache_overheads(&grid);
        assert!((o.pbch - 0.023).abs() < 1e-3);
        assert!((o.sch - 0.028).abs() < 1e-3);
        assert!((o.sib - 0.063).abs() < 1e-3);
    }

    #[test]
    fn grid_below_six_rbs_rejected() {
        assert_eq!(
            LteGrid::new(71).unwrap_err(),
            LinkBudgetError::GridTooSmall(71)
        );
    }

    #[test]
    fn docsis_overhead_defaults() {
        let g = DocsisGrid::default();
        let o = docsis_cache_overhead(&g);
        assert_relative_eq!(o, 228.0 / 7680.0, epsilon = 1e-12);
        assert!((o - 0.029).abs() < 1e-3);
    }

    #[test]
    fn docsis_overhead_edges() {
        let mut g = DocsisGrid::default();
        g.guard_subcarriers = 0;
        g.continuous_pilots = 0;
        g.scattered_pilots = 0;
        assert_eq!(docsis_cache_overhead(&g), 0.0);
        // 4K grid, same pilot counts.
        let g = DocsisGrid {
            total_subcarriers: 3840,
            ..DocsisGrid::default()
        };
        assert_relative_eq!(docsis_cache_overhead(&g), 0.059375, epsilon = 1e-12);
    }

    #[test]
    fn allocated_fraction_scales_overheads() {
        let o = lte_cache_overheads(&LteGrid::new(1200).unwrap());
        let half = o.with_allocated_fraction(0.5).unwrap();
        assert_relative_eq!(half.rs, o.rs * 2.0, epsilon = 1e-12);
        assert!(o.with_allocated_fraction(0.0).is_err());
        assert!(o.with_allocated_fraction(1.5).is_err());
        // Overheads saturate at 1.
        let tiny = o.with_allocated_fraction(1e-6).unwrap();
        assert_eq!(tiny.rs, 1.0);
    }

    #[test]
    fn cache_memory_paper_counts() {
        let report = cache_memory(&CacheSymbolCounts::default(), 10);
        let bits: Vec<u64> = report.channels.iter().map(|c| c.memory_bits).collect();
        assert_eq!(bits, vec![4000, 4800, 5760, 25_600, 4560]);
        assert_eq!(report.total_bits, 44_720);
    }

    #[test]
    fn cache_memory_zero_count() {
        assert_eq!(symbol_memory_bits(0, 10), 0);
    }

    #[test]
    fn printed_totals_are_flagged_constants() {
        // The printed total matches RS + PBCH + SCH + pilots, i.e. the
        // printed SIB number is not part of the printed sum.
        assert_eq!(PRINTED_TOTAL_MEMORY_BITS, 4000 + 4800 + 5760 + 4560);
        assert_ne!(PRINTED_SIB_MEMORY_BITS, symbol_memory_bits(1280, 10));
    }

    #[test]
    fn inflation_factor_values() {
        let f = inflation_factor(0.9, 12, 10);
        assert_relative_eq!(f, 200.0 / 108.0, epsilon = 1e-12);
        assert!((f - 1.852).abs() < 5e-4);
        assert_relative_eq!(inflation_factor(1.0, 20, 10), 1.0, epsilon = 1e-12);
        assert_relative_eq!(inflation_factor(0.5, 10, 10), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn rates_double_with_rrus_and_antennas() {
        let p = FronthaulParams::default();
        let doubled = FronthaulParams {
            num_rrus: 2,
            ..p
        };
        assert_relative_eq!(passband_rate(&doubled), 2.0 * passband_rate(&p));
        assert_relative_eq!(baseband_rate(&doubled), 2.0 * baseband_rate(&p));
        assert_relative_eq!(
            freq_domain_rate(&doubled).unwrap(),
            2.0 * freq_domain_rate(&p).unwrap()
        );
    }
}
