//! Quantum objects of the encoding: single-qubit states, product states, the two
//! preimage mixtures and their Gram matrices.
//!
//! All states are real. The encoding uses the symmetric parametrization
//! `ψ0 = (c, d)`, `ψ1 = (c, −d)` with `c = √((1+s)/2)`, `d = √((1−s)/2)`, so
//! `⟨ψ0|ψ1⟩ = s` and `⟨ψ_x|ψ_y⟩ = s^{d(x,y)}`.

use serde::Serialize;

use crate::boolfunc::{distance, BitString, BoolFunc};
use crate::error::{Error, Result};
use crate::linalg::{kron, kron_power, psd_sqrt, Matrix, SymMatrix};

/// Tolerance on the block identities of the Gram square root.
pub const SQRT_BLOCK_TOLERANCE: f64 = 1e-8;

/// Overlap `s = ⟨ψ0|ψ1⟩`, strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Overlap(f64);

impl Overlap {
    pub fn new(s: f64) -> Result<Self> {
        if s.is_finite() && s > 0.0 && s < 1.0 {
            Ok(Overlap(s))
        } else {
            Err(Error::InvalidOverlap(s))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `s^0 ..= s^max_power`.
    pub fn powers(self, max_power: usize) -> Vec<f64> {
        (0..=max_power as i32).map(|k| self.0.powi(k)).collect()
    }
}

impl TryFrom<f64> for Overlap {
    type Error = Error;
    fn try_from(s: f64) -> Result<Self> {
        Overlap::new(s)
    }
}

/// The two encoding states `(ψ0, ψ1)`.
pub fn encoding_states(s: Overlap) -> ([f64; 2], [f64; 2]) {
    let c = ((1.0 + s.0) / 2.0).sqrt();
    let d = ((1.0 - s.0) / 2.0).sqrt();
    ([c, d], [c, -d])
}

/// `⊗_i ψ_{x_i}` as a `2^n` vector, `x_1` on the most significant tensor factor.
pub fn product_state(x: &BitString, s: Overlap) -> Vec<f64> {
    product_state_of(x.len(), x.index(), s)
}

pub(crate) fn product_state_of(n: usize, idx: u32, s: Overlap) -> Vec<f64> {
    let (psi0, psi1) = encoding_states(s);
    let mut state = vec![1.0];
    for i in 1..=n {
        let factor = if idx & (1 << (n - i)) != 0 { psi1 } else { psi0 };
        state = state.iter().flat_map(|&a| [a * factor[0], a * factor[1]]).collect();
    }
    state
}

/// The average single-qubit state `ρ = ½|ψ0⟩⟨ψ0| + ½|ψ1⟩⟨ψ1|`.
pub fn single_qubit_average(s: Overlap) -> SymMatrix {
    let (psi0, psi1) = encoding_states(s);
    (&SymMatrix::outer(&psi0) + &SymMatrix::outer(&psi1)).scale(0.5)
}

/// `ρ^{⊗n}`, the average of all `2^n` product states.
pub fn average_state(s: Overlap, n: usize) -> Result<SymMatrix> {
    kron_power(&single_qubit_average(s), n)
}

/// Gram matrix of the listed inputs: entry `(a, b)` is `s^{d(rows[a], rows[b])}`.
fn gram_block(rows: &[u32], powers: &[f64]) -> SymMatrix {
    SymMatrix::from_fn(rows.len(), |a, b| powers[distance(rows[a], rows[b]) as usize])
}

fn cross_block(rows: &[u32], cols: &[u32], powers: &[f64]) -> Matrix {
    Matrix::from_fn(rows.len(), cols.len(), |a, b| powers[distance(rows[a], cols[b]) as usize])
}

/// Gram matrix of all `2^n` product states in index order.
pub fn full_gram(n: usize, s: Overlap) -> SymMatrix {
    let all: Vec<u32> = (0..1u32 << n).collect();
    gram_block(&all, &s.powers(n))
}

/// The two-state ensemble induced by the preimages of `f`.
#[derive(Debug, Clone)]
pub struct BooleanEnsemble {
    pub f: BoolFunc,
    pub s: Overlap,
    /// Uniform mixture over the preimage of 0; the zero matrix if that preimage is empty.
    pub sigma0: SymMatrix,
    pub sigma1: SymMatrix,
    pub p0: f64,
    pub p1: f64,
    pub gamma0: SymMatrix,
    pub gamma1: SymMatrix,
    /// Rows indexed by the preimage of 0, columns by the preimage of 1.
    pub gamma_cross: Matrix,
}

impl BooleanEnsemble {
    /// `p0σ0 − p1σ1`.
    pub fn helstrom_operator(&self) -> SymMatrix {
        &self.sigma0.scale(self.p0) - &self.sigma1.scale(self.p1)
    }

    /// `p0σ0 + p1σ1`.
    pub fn mixture(&self) -> SymMatrix {
        &self.sigma0.scale(self.p0) + &self.sigma1.scale(self.p1)
    }
}

pub fn build_ensemble(f: &BoolFunc, s: Overlap) -> BooleanEnsemble {
    let n = f.n();
    let dim = f.size();
    let pre = f.preimages();
    let mixture = |xs: &[u32]| {
        let mut sigma = SymMatrix::zeros(dim);
        if !xs.is_empty() {
            let weight = 1.0 / xs.len() as f64;
            for &x in xs {
                sigma.add_outer(weight, &product_state_of(n, x, s));
            }
        }
        sigma
    };
    let powers = s.powers(n);
    BooleanEnsemble {
        f: f.clone(),
        s,
        sigma0: mixture(&pre.zeros),
        sigma1: mixture(&pre.ones),
        p0: pre.zeros.len() as f64 / dim as f64,
        p1: pre.ones.len() as f64 / dim as f64,
        gamma0: gram_block(&pre.zeros, &powers),
        gamma1: gram_block(&pre.ones, &powers),
        gamma_cross: cross_block(&pre.zeros, &pre.ones, &powers),
    }
}

/// Gram blocks `(Γ0, Γ1, Γ')` without building any `2^n`-dimensional state.
pub fn gram_blocks(f: &BoolFunc, s: Overlap) -> (SymMatrix, SymMatrix, Matrix) {
    let pre = f.preimages();
    let powers = s.powers(f.n());
    (gram_block(&pre.zeros, &powers), gram_block(&pre.ones, &powers), cross_block(&pre.zeros, &pre.ones, &powers))
}

/// Generalized Gram matrix `(1/2^n)[[Γ0, Γ'], [Γ'ᵀ, Γ1]]` of the ensemble.
#[derive(Debug, Clone)]
pub struct GeneralizedGram {
    pub matrix: SymMatrix,
    /// `(|S0|, |S1|)`; one of them is 0 for a constant function.
    pub block_sizes: (usize, usize),
    /// Input index labelling each row: preimage of 0 first, each part in index order.
    pub order: Vec<u32>,
    pub n: usize,
}

impl GeneralizedGram {
    /// `2^n · G`, the Gram matrix without the prior weights.
    pub fn unweighted(&self) -> SymMatrix {
        self.matrix.scale((1u64 << self.n) as f64)
    }
}

pub fn generalized_gram(f: &BoolFunc, s: Overlap) -> GeneralizedGram {
    let pre = f.preimages();
    let block_sizes = (pre.zeros.len(), pre.ones.len());
    let order: Vec<u32> = pre.zeros.into_iter().chain(pre.ones).collect();
    let weight = 1.0 / f.size() as f64;
    let powers: Vec<f64> = s.powers(f.n()).iter().map(|p| p * weight).collect();
    GeneralizedGram { matrix: gram_block(&order, &powers), block_sizes, order, n: f.n() }
}

/// Block-diagonal part of `√G` on the two preimage blocks.
pub fn tau_of(g: &GeneralizedGram) -> Result<SymMatrix> {
    let root = psd_sqrt(&g.matrix)?;
    Ok(block_diagonal(&root, g.block_sizes.0))
}

fn block_diagonal(m: &SymMatrix, split: usize) -> SymMatrix {
    SymMatrix::from_fn(m.dim(), |i, j| if (i < split) == (j < split) { m.get(i, j) } else { 0.0 })
}

/// Blocks of `√Γ` where `Γ = 2^n · G`: `√Γ = [[X, Y], [Yᵀ, Z]]`.
#[derive(Debug, Clone)]
pub struct SqrtGramBlocks {
    pub x: SymMatrix,
    pub z: SymMatrix,
    pub y: Matrix,
}

/// Computes the blocks and verifies `X² + YYᵀ = Γ0`, `XY + YZ = Γ'`, `Z² + YᵀY = Γ1`.
pub fn sqrt_gram_blocks(g: &GeneralizedGram) -> Result<SqrtGramBlocks> {
    let gamma = g.unweighted();
    let root = psd_sqrt(&gamma)?;
    let (k0, k1) = g.block_sizes;
    let x = root.principal_block(0, k0);
    let z = root.principal_block(k0, k1);
    let y = root.to_matrix().block(0, k0, k0, k1);

    let full = gamma.to_matrix();
    let gamma0 = full.block(0, 0, k0, k0);
    let gamma1 = full.block(k0, k0, k1, k1);
    let cross = full.block(0, k0, k0, k1);
    let (xm, zm, yt) = (x.to_matrix(), z.to_matrix(), y.transpose());

    let residuals = [
        ("X² + YYᵀ = Γ0", xm.matmul(&xm)?.try_add(&y.matmul(&yt)?)?.try_sub(&gamma0)?),
        ("XY + YZ = Γ'", xm.matmul(&y)?.try_add(&y.matmul(&zm)?)?.try_sub(&cross)?),
        ("Z² + YᵀY = Γ1", zm.matmul(&zm)?.try_add(&yt.matmul(&y)?)?.try_sub(&gamma1)?),
    ];
    for (name, r) in residuals {
        let err = r.max_abs();
        if err > SQRT_BLOCK_TOLERANCE {
            return Err(Error::Accuracy(format!("{name} off by {err:e}")));
        }
    }
    Ok(SqrtGramBlocks { x, z, y })
}

/// `(ψ0 ⊗ ψ1)`-style tensor of two states; used by tests and examples.
pub fn kron_states(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().flat_map(|&u| b.iter().map(move |&v| u * v)).collect()
}

/// `ρ^{⊗n}` built as a Kronecker power of the single-qubit pseudo-inverse root.
pub(crate) fn average_pinv_sqrt(s: Overlap, n: usize) -> Result<SymMatrix> {
    let single = crate::linalg::pinv_sqrt(&single_qubit_average(s))?;
    (1..n).try_fold(single.clone(), |acc, _| kron(&acc, &single))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{sym_eigenvalues, Matrix};

    fn func(d: &str, n: usize) -> BoolFunc {
        BoolFunc::from_descriptor(&d.parse().unwrap(), Some(n)).unwrap()
    }

    fn ov(s: f64) -> Overlap {
        Overlap::new(s).unwrap()
    }

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn overlap_bounds() {
        for bad in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(Overlap::new(bad).is_err());
        }
        assert!(Overlap::try_from(0.3).is_ok());
    }

    #[test]
    fn encoding_state_examples() {
        for s in [0.05, 0.3, 0.6, 0.95] {
            let (a, b) = encoding_states(ov(s));
            assert!((dot(&a, &b) - s).abs() <= 1e-15);
            assert!((dot(&a, &a) - 1.0).abs() <= 1e-15);
            assert!((dot(&b, &b) - 1.0).abs() <= 1e-15);
        }
        let (a, _) = encoding_states(ov(0.6));
        assert!((a[0] - 0.8f64.sqrt()).abs() < 1e-15);
        assert!((a[1] - 0.2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn product_state_examples() {
        let s = ov(0.37);
        let (psi0, psi1) = encoding_states(s);
        let x: BitString = "01".parse().unwrap();
        assert_eq!(product_state(&x, s), kron_states(&psi0, &psi1));
        for n in 1..=6 {
            for (xi, yi) in [(0u32, 0u32), (1, 2), (5, 3), (7, 0)] {
                let (xi, yi) = (xi % (1 << n), yi % (1 << n));
                let px = product_state_of(n, xi, s);
                let py = product_state_of(n, yi, s);
                let expected = 0.37f64.powi(distance(xi, yi) as i32);
                assert!((dot(&px, &py) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ensemble_examples() {
        let e = build_ensemble(&func("const0", 2), ov(0.5));
        assert_eq!((e.p0, e.p1), (1.0, 0.0));
        assert_eq!(e.sigma1, SymMatrix::zeros(4));
        assert!((e.sigma0.trace() - 1.0).abs() < 1e-12);
        let e = build_ensemble(&func("parity:11", 2), ov(0.5));
        assert_eq!((e.p0, e.p1), (0.5, 0.5));
        let e = build_ensemble(&func("maj", 3), ov(0.4));
        assert!((e.mixture().trace() - 1.0).abs() < 1e-12);
        assert!(e.gamma0.dim() == 4 && e.gamma_cross.rows() == 4 && e.gamma_cross.cols() == 4);
        for i in 0..4 {
            assert_eq!(e.gamma0.get(i, i), 1.0);
            assert_eq!(e.gamma1.get(i, i), 1.0);
        }
    }

    #[test]
    fn helstrom_operator_expansion() {
        let s = ov(0.45);
        for d in ["maj", "and", "or", "raw:3:5c"] {
            let f = func(d, 3);
            let e = build_ensemble(&f, s);
            let mut direct = SymMatrix::zeros(8);
            for x in 0..8u32 {
                let sign = if f.eval(x) { -1.0 } else { 1.0 };
                direct.add_outer(sign / 8.0, &product_state_of(3, x, s));
            }
            assert!((&e.helstrom_operator() - &direct).max_abs() < 1e-12);
        }
    }

    #[test]
    fn average_state_examples() {
        let s = ov(0.5);
        assert!((average_state(s, 1).unwrap().trace() - 1.0).abs() < 1e-15);
        let e = build_ensemble(&func("maj", 3), s);
        assert!((&average_state(s, 3).unwrap() - &e.mixture()).max_abs() < 1e-10);
        let ev = sym_eigenvalues(&average_state(ov(0.3), 1).unwrap()).unwrap();
        assert!((ev[0] - 0.65).abs() < 1e-15 && (ev[1] - 0.35).abs() < 1e-15);
    }

    #[test]
    fn generalized_gram_examples() {
        let s = 0.3;
        let g = generalized_gram(&func("parity:1", 1), ov(s));
        let expected = SymMatrix::from_rows(&[vec![0.5, 0.5 * s], vec![0.5 * s, 0.5]]).unwrap();
        assert!((&g.matrix - &expected).max_abs() < 1e-16);
        assert_eq!(g.block_sizes, (1, 1));

        let f = func("raw:3:d4", 3);
        let g = generalized_gram(&f, ov(0.55));
        assert!((g.matrix.trace() - 1.0).abs() < 1e-14);
        let from_gram = sym_eigenvalues(&g.matrix).unwrap();
        let from_state = sym_eigenvalues(&average_state(ov(0.55), 3).unwrap()).unwrap();
        for (a, b) in from_gram.iter().zip(&from_state) {
            assert!((a - b).abs() < 1e-9);
        }
        // S0 rows first, each part in index order
        let pre = f.preimages();
        assert_eq!(g.order, [pre.zeros, pre.ones].concat());
    }

    #[test]
    fn tau_examples() {
        // diagonal G: no off-diagonal blocks, τ = √G
        let g = GeneralizedGram {
            matrix: SymMatrix::from_diag(&[0.25, 0.5, 0.25]),
            block_sizes: (2, 1),
            order: vec![0, 1, 2],
            n: 2,
        };
        assert_eq!(tau_of(&g).unwrap(), psd_sqrt(&g.matrix).unwrap());

        // n=1, f(x)=x: √(½[[1,s],[s,1]]) has equal diagonal entries (√(1+s)+√(1−s))/(2√2)
        let s = 0.5f64;
        let tau = tau_of(&generalized_gram(&func("parity:1", 1), ov(s))).unwrap();
        let expected = ((1.0 + s).sqrt() + (1.0 - s).sqrt()) / (2.0 * 2f64.sqrt());
        assert!((tau.get(0, 0) - expected).abs() < 1e-14);
        assert!((tau.get(1, 1) - expected).abs() < 1e-14);
        assert_eq!(tau.get(0, 1), 0.0);

        let tau = tau_of(&generalized_gram(&func("maj", 3), ov(0.6))).unwrap();
        assert!(*sym_eigenvalues(&tau).unwrap().last().unwrap() > -1e-12);
    }

    #[test]
    fn sqrt_blocks_for_affine_intertwine() {
        let f = func("parity:101", 3);
        let blocks = sqrt_gram_blocks(&generalized_gram(&f, ov(0.5))).unwrap();
        let (g0, g1, _) = gram_blocks(&f, ov(0.5));
        let lhs = blocks.y.matmul(&g1.to_matrix()).unwrap();
        let rhs = g0.to_matrix().matmul(&blocks.y).unwrap();
        assert!(lhs.try_sub(&rhs).unwrap().max_abs() < 1e-7);
    }

    #[test]
    fn sqrt_blocks_diagonal_gram() {
        let g = GeneralizedGram {
            matrix: SymMatrix::from_diag(&[0.25; 4]),
            block_sizes: (2, 2),
            order: vec![0, 1, 2, 3],
            n: 2,
        };
        let blocks = sqrt_gram_blocks(&g).unwrap();
        assert_eq!(blocks.y, Matrix::zeros(2, 2));
    }
}
