// Majority's greedy success approaches `1/2 + arcsin(√(1−s²))/π` as `n = 2k+1` grows.

use qbool_learn::strategies::{maj_conditional_success, maj_greedy_closed_form, maj_greedy_limit};
use qbool_learn::Overlap;

pub fn run_example() -> qbool_learn::Result<()> {
    let s = Overlap::new(0.5)?;
    let limit = maj_greedy_limit(s);
    println!("limit {limit:.12}");
    let mut previous = f64::INFINITY;
    for k in 1..=12 {
        let p = maj_greedy_closed_form(k, s);
        let err = (p - limit).abs();
        println!("k={k:<2} n={:<2} p={p:.12} |p-limit|={err:.3e}", 2 * k + 1);
        assert!(err < previous);
        previous = err;
    }
    // conditional success depends only on the number of ones up to complement
    for j in 0..=3 {
        let a = maj_conditional_success(3, j, s);
        let b = maj_conditional_success(3, 7 - j, s);
        assert!((a - b).abs() < 1e-15);
    }
    Ok(())
}

fn main() -> qbool_learn::Result<()> {
    run_example()
}
