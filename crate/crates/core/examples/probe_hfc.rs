//! Scratch calibration probe for the acceptance scenarios.

use std::time::Instant;

use xhaul_sim::hfc::*;
use xhaul_sim::smgw::*;
use xhaul_sim::traffic::PacketSizeDist;

fn smgw_probe() {
    let t0 = Instant::now();
    // Criterion: mode none at T_L=30 / T_H=140 -> heavy observed ~76.
    let mut loads = vec![30e6; 10];
    loads.extend(vec![140e6; 10]);
    let mut scn = GatewayScenario::new(SchedulerMode::None, loads.clone(), 1001);
    scn.horizon = 12.0;
    let stats = run_gateway_cycle(&scn).unwrap();
    println!(
        "none 30/140: light {:.2} heavy {:.2} Mb/s fair {:.4} conv {} ({:?})",
        stats.light_throughput / 1e6,
        stats.heavy_throughput / 1e6,
        stats.fairness,
        stats.converged,
        t0.elapsed()
    );

    // Mode equal at same loads.
    let mut scn = GatewayScenario::new(SchedulerMode::Equal, loads.clone(), 1002);
    scn.horizon = 8.0;
    let stats = run_gateway_cycle(&scn).unwrap();
    println!(
        "equal: light {:.2} heavy {:.2} fair {:.4}",
        stats.light_throughput / 1e6,
        stats.heavy_throughput / 1e6,
        stats.fairness
    );

    // Mode excess across T_L grid with T_H = 80.
    for t_l in [5e6, 15e6, 25e6, 35e6, 45e6] {
        let mut loads = vec![t_l; 10];
        loads.extend(vec![80e6; 10]);
        let mut scn = GatewayScenario::new(SchedulerMode::Excess, loads, 1003);
        scn.horizon = 8.0;
        let t1 = Instant::now();
        let stats = run_gateway_cycle(&scn).unwrap();
        println!(
            "excess T_L={:>2}: light {:.2} heavy {:.2} fair {:.4} light_delay {:.3} ms conv {} ({:?})",
            t_l / 1e6,
            stats.light_throughput / 1e6,
            stats.heavy_throughput / 1e6,
            stats.fairness,
            stats.light_mean_delay * 1e3,
            stats.converged,
            t1.elapsed()
        );
    }
}

fn hfc_probe() {
    // Full 200-CM scenario, kilobit packets.
    let base = HfcScenario {
        horizon: 40.0,
        log_cable_delays: true,
        packet_size: PacketSizeDist::Exponential {
            mean_bits: KILOBIT_MEAN_PACKET_BITS,
        },
        ..HfcScenario::new(NodeKind::Rphy, 777)
    };
    let t0 = Instant::now();
    let rphy = run_hfc(&base).unwrap();
    println!(
        "rphy 200cm: docsis {:.4} ms (ci {:.4}) lte {:.4} ms tput {:.1}/{:.1} Mb/s stable {} conv {} ({:?})",
        rphy.docsis_mean_delay * 1e3,
        rphy.docsis_delay_ci * 1e3,
        rphy.lte_mean_delay * 1e3,
        rphy.cable_throughput / 1e6,
        rphy.lte_throughput / 1e6,
        rphy.stable,
        rphy.converged,
        t0.elapsed()
    );
    let rfft = run_hfc(&HfcScenario {
        node_kind: NodeKind::Rfft,
        ..base.clone()
    })
    .unwrap();
    println!(
        "rfft 200cm: docsis {:.4} ms, paired gap {:.2} us",
        rfft.docsis_mean_delay * 1e3,
        paired_delay_gap(&rfft, &rphy) * 1e6
    );

    // Distance delta.
    let far = run_hfc(&HfcScenario {
        distance_km: 50.0,
        node_kind: NodeKind::Rfft,
        ..base.clone()
    })
    .unwrap();
    println!(
        "distance delta: {:.4} ms (rfft 10km {:.4} / 50km {:.4})",
        (far.docsis_mean_delay - rfft.docsis_mean_delay) * 1e3,
        rfft.docsis_mean_delay * 1e3,
        far.docsis_mean_delay * 1e3
    );

    // Stability frontier sweep.
    for rho_l in [0.93, 0.94, 0.95, 0.96, 0.97, 0.98] {
        let t1 = Instant::now();
        let scn = HfcScenario {
            lte_load: rho_l,
            horizon: 60.0,
            log_cable_delays: false,
            node_kind: NodeKind::Rfft,
            ..base.clone()
        };
        let s = run_hfc(&scn).unwrap();
        println!(
            "frontier rho_l={rho_l}: stable {} docsis {:.3} ms lte {:.3} ms lte_tput {:.2} G ({:?})",
            s.stable,
            s.docsis_mean_delay * 1e3,
            s.lte_mean_delay * 1e3,
            s.lte_throughput / 1e9,
            t1.elapsed()
        );
    }
}

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    if which != "hfc" {
        smgw_probe();
    }
    if which != "smgw" {
        hfc_probe();
    }
}
