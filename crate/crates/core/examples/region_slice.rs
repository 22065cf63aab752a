//! Closed-form terms, phi bounds and the pentagon slice at one split.

use pcn_region::gaussian::{pdf_terms, phi2_ratio_form};
use pcn_region::{compute_phis, pdf_region_slice, ChannelConfig, Gains, SplitParams};

fn main() {
    let ch = ChannelConfig::unit_power(Gains::from_links([10.0, 10.0, 1.0, 10.0, 10.0, 10.0])).validate().unwrap();
    let s = SplitParams::new(0.5, 0.5, 0.5, 0.5).unwrap();

    let terms = pdf_terms(&ch, &s);
    println!("terms: {terms:#?}");
    let phis = compute_phis(&ch, &s);
    println!("phi1 = {:.6}, phi2 = {:.6}, phi3 = {:.6}", phis.phi1, phis.phi2, phis.phi3);

    let slice = pdf_region_slice(&ch, &s);
    println!("R1 <= {:.6}, R2 <= {:.6}, R1 + R2 <= {:.6}", slice.bound_r1, slice.bound_r2, slice.bound_sum);
    for c in slice.corners() {
        println!("corner ({:.6}, {:.6})", c.r1, c.r2);
    }
    if let Some((y4_without, _)) = phi2_ratio_form(&ch, &s) {
        println!("phi2 Y4 side without the private X2 power: {y4_without:.6}, with it: {:.6}", terms.phi2_y4);
    }
}
