//! Grid sweep of the split parameters, Pareto frontier with witnesses and
//! the equal-rate point.

use pcn_region::{equal_rate_point, sweep_region, ChannelConfig, Gains, Grid};

fn main() {
    let ch = ChannelConfig::unit_power(Gains::uniform(10.0)).validate().unwrap();
    for n in [5, 9, 17] {
        let region = sweep_region(&ch, &Grid::uniform(n)).unwrap();
        println!("grid {n:>2}: {} frontier points, equal rate {:.6}", region.len(), equal_rate_point(&region).unwrap());
    }
    let region = sweep_region(&ch, &Grid::uniform(9)).unwrap();
    let witnesses = region.witnesses.clone().unwrap_or_default();
    for (p, w) in region.frontier.iter().zip(&witnesses) {
        println!(
            "  ({:.4}, {:.4}) at alpha={:.3} beta={:.3} gamma={:.3} delta={:.3}",
            p.r1, p.r2, w.alpha, w.beta, w.gamma, w.delta
        );
    }
}
