//! Closed forms against log-determinant mutual information of the jointly
//! Gaussian network.

use pcn_region::gaussian::{pdf_terms, PdfTerms};
use pcn_region::oracle::{build_covariance, conditional_mi, oracle_terms};
use pcn_region::scenario::relative_deviation;
use pcn_region::verify::oracle_agreement;
use pcn_region::{ChannelConfig, Gains, SplitParams};

fn main() {
    let ch = ChannelConfig::unit_power(Gains::uniform(10.0)).validate().unwrap();
    let s = SplitParams::new(0.3, 0.6, 0.2, 0.7).unwrap();
    let closed = pdf_terms(&ch, &s);
    let oracle = oracle_terms(&ch, &s).unwrap();
    for ((name, c), o) in PdfTerms::NAMES.iter().zip(closed.as_array()).zip(oracle.as_array()) {
        println!("{name:>8}: closed {c:.12}  oracle {o:.12}  rel {:.1e}", relative_deviation(c, o));
    }

    let cov = build_covariance(&ch, &s);
    let mi = conditional_mi(&cov, &["Y4"], &["X1", "X2"], &["U1", "U2", "X3"]).unwrap();
    println!("I(Y4; X1, X2 | U1, U2, X3) = {mi:.12}");

    let run = oracle_agreement(1, 200);
    println!("200 random draws: max relative deviation {:.2e}, passed {}", run.max_relative_deviation, run.passed());
}
