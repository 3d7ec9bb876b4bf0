// Monte Carlo simulation of the greedy strategy against its exact value.

use qbool_learn::strategies::{greedy_prob, sample_greedy};
use qbool_learn::{BoolFunc, Descriptor, Overlap};

pub fn run_example() -> qbool_learn::Result<()> {
    let trials = 200_000;
    for (desc, n, s) in [("parity:11", 2, 0.6), ("maj", 5, 0.4), ("or", 4, 0.8)] {
        let f = BoolFunc::from_descriptor(&desc.parse::<Descriptor>()?, Some(n))?;
        let s = Overlap::new(s)?;
        let exact = greedy_prob(&f, s);
        let outcome = sample_greedy(&f, s, trials, 2024)?;
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        let z = (outcome.frequency - exact) / sigma;
        println!("{desc:<10} s={:.2} exact={exact:.6} sampled={:.6} z={z:+.2}", s.value(), outcome.frequency);
        assert!(z.abs() < 5.0);
    }
    Ok(())
}

fn main() -> qbool_learn::Result<()> {
    run_example()
}
