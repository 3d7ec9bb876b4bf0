// The exact affine certificate and the numerical residuals that mirror it.
//
// `f = MAJ3(x2, x3, x4) ⊕ x1` has a flip coordinate but fails the counting condition;
// its Gram relation fails for both `f` and the reduced majority.

use qbool_learn::certify::{
    certify_affine, flip_coordinate, gram_relation_residual, pgm_optimality_residual, reduced_relation_check,
};
use qbool_learn::{BoolFunc, Descriptor, Overlap};

pub fn run_example() -> qbool_learn::Result<()> {
    let s = Overlap::new(0.5)?;
    let maj = BoolFunc::from_descriptor(&Descriptor::Maj, Some(3))?;
    let twisted = BoolFunc::from_fn(4, |x| maj.eval(x & 0b111) ^ (x & 0b1000 != 0))?;
    let parity = BoolFunc::from_descriptor(&"parity:1101".parse()?, None)?;

    for (name, f) in [("maj3(x2,x3,x4)^x1", &twisted), ("parity:1101", &parity)] {
        let c = certify_affine(f)?;
        let flip = flip_coordinate(f)?;
        let reduced = reduced_relation_check(f, 1, s)?;
        println!("{name}: {:?} stage={:?}", c.verdict, c.failure_stage);
        println!("  flip coordinate {:?} (multiplicity {})", flip.coordinate, flip.multiplicity);
        println!("  gram relation     {:.3e}", gram_relation_residual(f, s)?);
        println!("  pgm commutator    {:.3e}", pgm_optimality_residual(f, s)?);
        println!("  reduced: parent {:.3e} child {:.3e}", reduced.parent_residual, reduced.child_residual);
        if let Some(w) = c.witness {
            println!("  witness x={} y={} L={} counts {} vs {}", w.x, w.y, w.length, w.count0, w.count1);
        }
        if let Some(a) = c.coefficients {
            println!("  b0={} b={:?}", u8::from(a.b0), a.b.iter().map(|&b| u8::from(b)).collect::<Vec<_>>());
        }
    }
    Ok(())
}

fn main() -> qbool_learn::Result<()> {
    run_example()
}
