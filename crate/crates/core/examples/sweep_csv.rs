// Drive the sweep command from code and read back its CSV.

use qbool_learn::cli::{run_sweep, Command, RunConfig};

pub fn run_example() -> qbool_learn::Result<()> {
    let cfg = RunConfig {
        descriptor: Some("and".parse()?),
        n: Some("3..6".parse()?),
        s: Some("0.3:0.7:3".parse()?),
        ..RunConfig::new(Command::Sweep)
    };
    let csv = run_sweep(&cfg)?;
    print!("{csv}");
    for line in csv.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().expect("numeric column")).collect();
        let (greedy, global, closed) = (cols[2], cols[3], cols[7]);
        assert!(global >= greedy - 1e-9 && (greedy - closed).abs() < 1e-12);
    }
    Ok(())
}

fn main() -> qbool_learn::Result<()> {
    run_example()
}
