// Greedy versus global success for AND and majority as `n` grows at fixed overlap.
//
// The AND gap shrinks with `n`; majority stays bounded away from 1.

use qbool_learn::strategies::{analyze, and_greedy_closed_form, maj_greedy_closed_form, maj_greedy_limit};
use qbool_learn::{BoolFunc, Descriptor, Overlap};

pub fn run_example() -> qbool_learn::Result<()> {
    let s = Overlap::new(0.5)?;
    println!("n  and_greedy        and_gap      maj_greedy        maj_gap");
    for n in 3..=7 {
        let and = BoolFunc::from_descriptor(&Descriptor::And, Some(n))?;
        let a = analyze(&and, s)?;
        assert!((a.p_greedy - and_greedy_closed_form(n, s)).abs() < 1e-12);
        let maj = if n % 2 == 1 {
            let f = BoolFunc::from_descriptor(&Descriptor::Maj, Some(n))?;
            let m = analyze(&f, s)?;
            assert!((m.p_greedy - maj_greedy_closed_form((n - 1) / 2, s)).abs() < 1e-12);
            format!("{:.12}  {:.3e}", m.p_greedy, m.gap)
        } else {
            "-".to_string()
        };
        println!("{n}  {:.12}  {:.3e}    {maj}", a.p_greedy, a.gap);
    }
    println!("majority limit at s=0.5: {:.12}", maj_greedy_limit(s));
    Ok(())
}

fn main() -> qbool_learn::Result<()> {
    run_example()
}
