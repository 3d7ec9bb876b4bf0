// The dense symmetric toolkit underneath the quantum computations: eigendecomposition,
// trace norm, PSD square root and Kronecker products.

use qbool_learn::linalg::{kron, psd_sqrt, sym_eigen, trace_norm};
use qbool_learn::SymMatrix;

pub fn run_example() -> qbool_learn::Result<()> {
    let a = SymMatrix::from_rows(&[vec![2.0, -1.0, 0.0], vec![-1.0, 2.0, -1.0], vec![0.0, -1.0, 2.0]])?;
    let eig = sym_eigen(&a)?;
    println!("eigenvalues {:?}", eig.eigenvalues);
    println!("reconstruction error {:.3e}", (&eig.reconstruct() - &a).max_abs());

    let root = psd_sqrt(&a)?;
    let squared = root.sandwich(&SymMatrix::identity(3))?;
    println!("sqrt^2 error {:.3e}", (&squared - &a).max_abs());

    let b = SymMatrix::from_rows(&[vec![1.0, 0.5], vec![0.5, -3.0]])?;
    let ab = kron(&a, &b)?;
    let product = trace_norm(&a)? * trace_norm(&b)?;
    println!("trace norm of kron {:.12} vs product {:.12}", trace_norm(&ab)?, product);
    Ok(())
}

fn main() -> qbool_learn::Result<()> {
    run_example()
}
