//! Exact elimination of the split rates, redundancy removal and the
//! equivalence check with the two-rate region.

use pcn_region::fme::{
    eliminate, int, reduce_region1, region1_system, region2_system, regions_equal, remove_redundant, snap, ExactBounds,
    R11, R12,
};

fn main() {
    let k = ExactBounds::uniform(int(1));
    let sys = region1_system(&k);
    println!("split-rate system:\n{sys}");

    let step = eliminate(&sys, R11);
    println!("after eliminating {R11} ({} trace entries, replays {}):\n{}", step.trace.len(), step.replays(&sys), step.system);
    let projected = eliminate(&step.system, R12).system;
    let reduced = remove_redundant(&projected).unwrap();
    println!("projection without redundant rows:\n{reduced}");

    let cmp = regions_equal(&reduce_region1(&k), &region2_system(&k)).unwrap();
    println!("equals the two-rate region: {}", cmp.equal);

    let s = snap(0.3333333333333333).unwrap();
    println!("snap(0.333...) = {} (error {:.1e})", s.value, s.error);
}
