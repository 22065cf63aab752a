//! Interference-channel baseline: the strong-interference pentagon and the
//! refusal outside that regime.

use pcn_region::{equal_rate_point, ifc_frontier, ifc_region, ChannelConfig, Gains};

fn main() {
    let strong = ChannelConfig::unit_power(Gains::from_links([1.0, 10.0, 1.0, 10.0, 10.0, 1.0])).validate().unwrap();
    let region = ifc_region(&strong).unwrap();
    println!("R1 <= {:.6}, R2 <= {:.6}, R1 + R2 <= {:.6}", region.bound_r1, region.bound_r2, region.bound_sum);
    let frontier = ifc_frontier(&region);
    for p in &frontier.frontier {
        println!("  ({:.6}, {:.6})", p.r1, p.r2);
    }
    println!("equal rate {:.6}", equal_rate_point(&frontier).unwrap());

    let weak = ChannelConfig::unit_power(Gains::from_links([10.0, 10.0, 10.0, 1.0, 1.0, 10.0])).validate().unwrap();
    match ifc_region(&weak) {
        Ok(_) => println!("unexpected baseline"),
        Err(e) => println!("refused: {e}"),
    }
}
