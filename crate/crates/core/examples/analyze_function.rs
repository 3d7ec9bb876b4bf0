// Greedy, PGM and Helstrom success probabilities for one function, plus its affine certificate.
//
// `cargo run --example analyze_function`

use qbool_learn::certify::certify_affine;
use qbool_learn::{strategies, BoolFunc, Descriptor, Overlap};

pub fn run_example() -> qbool_learn::Result<()> {
    let s = Overlap::new(0.5)?;
    for (desc, n) in [("maj", 3), ("parity:101", 3), ("and", 4), ("raw:3:96", 3)] {
        let f = BoolFunc::from_descriptor(&desc.parse::<Descriptor>()?, Some(n))?;
        let report = strategies::analyze(&f, s)?;
        let certificate = certify_affine(&f)?;
        println!(
            "{desc:<11} tt={:<4} greedy={:.9} pgm={:.9} global={:.9} gap={:.3e} {:?}",
            f.to_hex(),
            report.p_greedy,
            report.p_pgm,
            report.p_global,
            report.gap,
            certificate.verdict,
        );
    }
    Ok(())
}

fn main() -> qbool_learn::Result<()> {
    run_example()
}
