// Classify every 3-bit Boolean function: balance, counting condition, affine verdict.

use qbool_learn::certify::{balanced_or_constant, certify_affine, counting_condition};
use qbool_learn::{Balance, BoolFunc, Verdict};

pub fn run_example() -> qbool_learn::Result<()> {
    let n = 3;
    let (mut affine, mut balanced, mut counting) = (0, 0, 0);
    let mut first_witness = None;
    for bits in 0..1u64 << (1 << n) {
        let f = BoolFunc::from_table_bits(n, bits)?;
        if certify_affine(&f)?.verdict == Verdict::Affine {
            affine += 1;
        }
        if balanced_or_constant(&f) == Balance::Balanced {
            balanced += 1;
        }
        match counting_condition(&f) {
            None => counting += 1,
            Some(w) if first_witness.is_none() => first_witness = Some((f.to_hex(), w)),
            Some(_) => {}
        }
    }
    println!("functions: {}", 1 << (1 << n));
    println!("balanced:  {balanced}");
    println!("counting condition holds: {counting}");
    println!("affine:    {affine} (expected {})", 1 << (n + 1));
    if let Some((hex, w)) = first_witness {
        println!("first witness: tt={hex} x={} y={} L={} counts {} vs {}", w.x, w.y, w.length, w.count0, w.count1);
    }
    assert_eq!(affine, 1 << (n + 1));
    Ok(())
}

fn main() -> qbool_learn::Result<()> {
    run_example()
}
