//! Discrete mutual information and the region of a random factored law.

use pcn_region::discrete::{conditional_mi_pmf, eval_region1, eval_region2, symmetric_noise_channel, JointPmf};
use pcn_region::io::pmf_csv;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    // Binary symmetric channel with crossover 0.11 and a uniform input.
    let x = JointPmf::uniform(&["X"], &[2]).unwrap();
    let bsc = x.with_channel(&[("Y", 2)], symmetric_noise_channel(2, 0.11, |s: &[usize]| s[0])).unwrap();
    println!("I(X; Y) = {:.12} bits", conditional_mi_pmf(&bsc, &["X"], &["Y"], &[] as &[&str]).unwrap());
    print!("{}", pmf_csv(&bsc));

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = pcn_region::discrete::random_factored_pmf(&mut rng);
    let bounds = eval_region1(&p).unwrap();
    println!("bounds: {bounds:#?}");
    let (r1, r2, sum) = bounds.reduced();
    println!("reduced: R1 <= {r1:.6}, R2 <= {r2:.6}, R1 + R2 <= {sum:.6}");
    for q in &eval_region2(&bounds).frontier {
        println!("  ({:.6}, {:.6})", q.r1, q.r2);
    }
}
