//! Capacity function anchors and channel validation with a full violation report.

use pcn_region::{capacity_fn, validate_config, ChannelConfig, Gains, Link};

fn main() {
    for snr in [0.0, 1.0, 3.0, 15.0, 1e6] {
        println!("C({snr}) = {:.12}", capacity_fn(snr).unwrap());
    }
    println!("C(-1) -> {}", capacity_fn(-1.0).unwrap_err());

    let mut gains = Gains::uniform(2.0);
    gains.set(Link::H23, -1.0);
    let bad = ChannelConfig::new(gains, [1.0, 0.0, f64::NAN], [1.0, 1.0, 1.0]);
    match validate_config(&bad) {
        Ok(_) => println!("unexpectedly valid"),
        Err(report) => println!("rejected:\n{report}"),
    }

    let ok = validate_config(&ChannelConfig::unit_power(Gains::uniform(10.0))).unwrap();
    println!("valid channel, h13 = {}, P1 = {}", ok.h(Link::H13), ok.p1());
}
