// The generalized Gram matrix, its square root blocks, and the commutator that vanishes
// exactly when the pretty good measurement is optimal.

use qbool_learn::certify::pgm_optimality_residual;
use qbool_learn::ensemble::{generalized_gram, sqrt_gram_blocks, tau_of};
use qbool_learn::linalg::commutator_residual;
use qbool_learn::strategies::{global_prob, pgm_prob};
use qbool_learn::{BoolFunc, Descriptor, Overlap};

pub fn run_example() -> qbool_learn::Result<()> {
    for (desc, n) in [("parity:111", 3), ("maj", 3), ("and", 3)] {
        let f = BoolFunc::from_descriptor(&desc.parse::<Descriptor>()?, Some(n))?;
        println!("{desc}");
        for s in [0.3, 0.5, 0.7] {
            let s = Overlap::new(s)?;
            let g = generalized_gram(&f, s);
            let tau = tau_of(&g)?;
            let blocks = sqrt_gram_blocks(&g)?;
            let residual = commutator_residual(&g.matrix, &tau)?;
            assert!((residual - pgm_optimality_residual(&f, s)?).abs() < 1e-12);
            println!(
                "  s={:.1} blocks {}+{}  [G,tau]={residual:.3e}  pgm={:.9} global={:.9}",
                s.value(),
                blocks.x.dim(),
                blocks.z.dim(),
                pgm_prob(&f, s)?,
                global_prob(&f, s)?,
            );
        }
    }
    Ok(())
}

fn main() -> qbool_learn::Result<()> {
    run_example()
}
