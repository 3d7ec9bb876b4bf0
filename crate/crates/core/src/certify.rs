//! Exact combinatorial certificate of affineness plus the numerical residuals that
//! accompany it.
//!
//! The exact chain runs on integers only: balance, the path-counting condition on the
//! hypercube, a coordinate whose flip swaps the two preimages, and recursion on the
//! function with that coordinate factored out. Its verdict is always cross-checked
//! against direct affine detection.

use serde::Serialize;

use crate::boolfunc::{coordinate_mask, distance, AffineCoefficients, BitString, BoolFunc};
use crate::ensemble::{generalized_gram, gram_blocks, tau_of, Overlap};
use crate::error::{Error, Result};
use crate::linalg::commutator_residual;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Balance {
    Constant,
    Balanced,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Affine,
    NotAffine,
}

/// Condition of the exact chain that rejected a function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Stage {
    Balance,
    Counting,
    Flip,
    Recursion,
}

/// `x ∈ S0`, `y ∈ S1` and a length `L` at which the numbers of intermediate vertices
/// `w` with `d(x,w) + d(w,y) = L` differ between the two preimages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountingWitness {
    pub x: BitString,
    pub y: BitString,
    #[serde(rename = "L")]
    pub length: u32,
    pub count0: usize,
    pub count1: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineCertificate {
    pub verdict: Verdict,
    pub coefficients: Option<AffineCoefficients>,
    pub witness: Option<CountingWitness>,
    pub failure_stage: Option<Stage>,
}

impl AffineCertificate {
    fn affine(coefficients: AffineCoefficients) -> Self {
        AffineCertificate {
            verdict: Verdict::Affine,
            coefficients: Some(coefficients),
            witness: None,
            failure_stage: None,
        }
    }

    fn rejected(stage: Stage, witness: Option<CountingWitness>) -> Self {
        AffineCertificate { verdict: Verdict::NotAffine, coefficients: None, witness, failure_stage: Some(stage) }
    }
}

pub fn balanced_or_constant(f: &BoolFunc) -> Balance {
    let ones = f.ones();
    let zeros = f.size() - ones;
    if ones == 0 || zeros == 0 {
        Balance::Constant
    } else if ones == zeros {
        Balance::Balanced
    } else {
        Balance::Neither
    }
}

/// Path-counting condition: for every `x ∈ S0`, `y ∈ S1` and `L ∈ 0..=2n`, the number of
/// `u ∈ S0` with `d(x,u) + d(u,y) = L` equals the number of such `v ∈ S1`.
///
/// Returns the first violation in `(x, y, L)` order, or `None` if the condition holds
/// (vacuously so for constant functions).
pub fn counting_condition(f: &BoolFunc) -> Option<CountingWitness> {
    let n = f.n();
    let pre = f.preimages();
    let mut counts = vec![0i64; 2 * n + 1];
    for &x in &pre.zeros {
        for &y in &pre.ones {
            counts.iter_mut().for_each(|c| *c = 0);
            // +1 for S0 members, −1 for S1 members; any nonzero bucket is a violation
            for w in 0..f.size() as u32 {
                let l = (distance(x, w) + distance(w, y)) as usize;
                counts[l] += if f.eval(w) { -1 } else { 1 };
            }
            if let Some(length) = counts.iter().position(|&c| c != 0) {
                let count_in = |part: &[u32]| {
                    part.iter().filter(|&&w| (distance(x, w) + distance(w, y)) as usize == length).count()
                };
                return Some(CountingWitness {
                    x: BitString::new(n, x).expect("index within range"),
                    y: BitString::new(n, y).expect("index within range"),
                    length: length as u32,
                    count0: count_in(&pre.zeros),
                    count1: count_in(&pre.ones),
                });
            }
        }
    }
    None
}

/// Coordinates whose flip maps `S0` onto `S1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipCoordinates {
    /// Smallest passing coordinate (1-based), if any.
    pub coordinate: Option<usize>,
    /// Number of passing coordinates.
    pub multiplicity: usize,
}

/// Test every coordinate `i` for `x ∈ S0 ⟺ x^{(i)} ∈ S1`. Requires a balanced function.
pub fn flip_coordinate(f: &BoolFunc) -> Result<FlipCoordinates> {
    if balanced_or_constant(f) != Balance::Balanced {
        return Err(Error::Precondition(format!("{f} is not balanced")));
    }
    let n = f.n();
    let passing: Vec<usize> = (1..=n)
        .filter(|&i| {
            let mask = coordinate_mask(n, i);
            (0..f.size() as u32).all(|x| f.eval(x) != f.eval(x ^ mask))
        })
        .collect();
    Ok(FlipCoordinates { coordinate: passing.first().copied(), multiplicity: passing.len() })
}

/// `min { d(x, y) : x ∈ S0, y ∈ S1 }`.
pub fn min_cross_distance(f: &BoolFunc) -> Result<u32> {
    let pre = f.preimages();
    pre.zeros
        .iter()
        .flat_map(|&x| pre.ones.iter().map(move |&y| distance(x, y)))
        .min()
        .ok_or_else(|| Error::Precondition("constant function has an empty preimage".into()))
}

/// `‖Γ0Γ' − Γ'Γ1‖_F`.
pub fn gram_relation_residual(f: &BoolFunc, s: Overlap) -> Result<f64> {
    if f.is_constant() {
        return Err(Error::Precondition("Gram relation needs a non-constant function".into()));
    }
    let (g0, g1, cross) = gram_blocks(f, s);
    let lhs = g0.to_matrix().matmul(&cross)?;
    let rhs = cross.matmul(&g1.to_matrix())?;
    Ok(lhs.try_sub(&rhs)?.frobenius_norm())
}

/// `‖[G, τ]‖_F` for the generalized Gram matrix `G` and its block-diagonal root part `τ`.
/// Vanishes exactly when the pretty good measurement is optimal.
pub fn pgm_optimality_residual(f: &BoolFunc, s: Overlap) -> Result<f64> {
    let g = generalized_gram(f, s);
    let tau = tau_of(&g)?;
    commutator_residual(&g.matrix, &tau)
}

/// Gram relation residuals of `f` and of `g` where `f = g ⊕ x_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedRelation {
    pub parent_residual: f64,
    pub child_residual: f64,
}

pub fn reduced_relation_check(f: &BoolFunc, i: usize, s: Overlap) -> Result<ReducedRelation> {
    let g = f.xor_decompose(i).ok_or_else(|| Error::Precondition(format!("{f} does not factor as g ⊕ x_{i}")))?;
    let child_residual = if g.is_constant() { 0.0 } else { gram_relation_residual(&g, s)? };
    Ok(ReducedRelation { parent_residual: gram_relation_residual(f, s)?, child_residual })
}

/// Run the exact chain and cross-check it against [`BoolFunc::is_affine`].
pub fn certify_affine(f: &BoolFunc) -> Result<AffineCertificate> {
    let certificate = chain(f);
    let direct = f.is_affine();
    match (&certificate.coefficients, &direct) {
        (Some(a), Some(b)) if a == b => Ok(certificate),
        (None, None) => Ok(certificate),
        _ => Err(Error::Inconsistency(format!(
            "{f}: exact chain says {:?}, direct check says {}",
            certificate.verdict,
            if direct.is_some() { "affine" } else { "not affine" }
        ))),
    }
}

fn chain(f: &BoolFunc) -> AffineCertificate {
    let n = f.n();
    match balanced_or_constant(f) {
        Balance::Constant => return AffineCertificate::affine(AffineCoefficients::new(f.eval(0), vec![false; n])),
        Balance::Neither => return AffineCertificate::rejected(Stage::Balance, None),
        Balance::Balanced => {}
    }
    if let Some(witness) = counting_condition(f) {
        return AffineCertificate::rejected(Stage::Counting, Some(witness));
    }
    let Some(i) = flip_coordinate(f).ok().and_then(|c| c.coordinate) else {
        return AffineCertificate::rejected(Stage::Flip, None);
    };
    if n == 1 {
        return AffineCertificate::affine(AffineCoefficients::new(f.eval(0), vec![true]));
    }
    let Some(g) = f.xor_decompose(i) else {
        return AffineCertificate::rejected(Stage::Flip, None);
    };
    match chain(&g).coefficients {
        Some(inner) => {
            let mut b = inner.b;
            b.insert(i - 1, true);
            AffineCertificate::affine(AffineCoefficients::new(inner.b0, b))
        }
        None => AffineCertificate::rejected(Stage::Recursion, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn func(d: &str, n: usize) -> BoolFunc {
        BoolFunc::from_descriptor(&d.parse().unwrap(), Some(n)).unwrap()
    }

    fn ov(s: f64) -> Overlap {
        Overlap::new(s).unwrap()
    }

    #[test]
    fn balance_examples() {
        assert_eq!(balanced_or_constant(&func("and", 3)), Balance::Neither);
        assert_eq!(balanced_or_constant(&func("maj", 3)), Balance::Balanced);
        assert_eq!(balanced_or_constant(&func("const1", 3)), Balance::Constant);
    }

    #[test]
    fn counting_examples() {
        assert_eq!(counting_condition(&func("const0", 3)), None);
        assert_eq!(counting_condition(&func("parity:111", 3)), None);
        let w = counting_condition(&func("maj", 3)).expect("majority violates counting");
        assert_ne!(w.count0, w.count1);
        let maj = func("maj", 3);
        assert!(!maj.eval(w.x.index()) && maj.eval(w.y.index()));
    }

    #[test]
    fn flip_examples() {
        let r = flip_coordinate(&func("parity:10", 2)).unwrap();
        assert_eq!((r.coordinate, r.multiplicity), (Some(1), 1));
        let r = flip_coordinate(&func("parity:11", 2)).unwrap();
        assert_eq!((r.coordinate, r.multiplicity), (Some(1), 2));
        assert_eq!(flip_coordinate(&func("maj", 3)).unwrap().coordinate, None);
        assert!(flip_coordinate(&func("and", 3)).is_err());
    }

    #[test]
    fn min_distance_examples() {
        assert_eq!(min_cross_distance(&func("and", 2)), Ok(1));
        assert_eq!(min_cross_distance(&func("parity:1111", 4)), Ok(1));
        assert!(min_cross_distance(&func("const0", 2)).is_err());
    }

    #[test]
    fn gram_relation_examples() {
        assert!(gram_relation_residual(&func("parity:11", 2), ov(0.5)).unwrap() < 1e-12);
        assert!(gram_relation_residual(&func("maj", 3), ov(0.5)).unwrap() > 1e-6);
        assert!(gram_relation_residual(&func("const1", 2), ov(0.5)).is_err());
    }

    #[test]
    fn pgm_residual_examples() {
        assert!(pgm_optimality_residual(&func("parity:111", 3), ov(0.5)).unwrap() < 1e-8);
        assert!(pgm_optimality_residual(&func("maj", 3), ov(0.5)).unwrap() > 1e-6);
        assert!(pgm_optimality_residual(&func("const0", 3), ov(0.5)).unwrap() < 1e-12);
    }

    #[test]
    fn reduced_relation_examples() {
        let r = reduced_relation_check(&func("parity:111", 3), 1, ov(0.5)).unwrap();
        assert!(r.parent_residual < 1e-10 && r.child_residual < 1e-10);

        // MAJ3(x2, x3, x4) ⊕ x1
        let maj = func("maj", 3);
        let f = BoolFunc::from_fn(4, |x| maj.eval(x & 0b111) ^ (x & 0b1000 != 0)).unwrap();
        let r = reduced_relation_check(&f, 1, ov(0.5)).unwrap();
        assert!(r.parent_residual > 1e-6 && r.child_residual > 1e-6);

        // g affine ⟹ f = g ⊕ x_2 affine
        let g = func("parity:101", 3);
        let f = BoolFunc::from_fn(4, |x| g.eval(((x >> 1) & 0b100) | (x & 0b11)) ^ (x & 0b0100 != 0)).unwrap();
        let r = reduced_relation_check(&f, 2, ov(0.5)).unwrap();
        assert!(r.parent_residual < 1e-10 && r.child_residual < 1e-10);

        assert!(reduced_relation_check(&func("and", 3), 1, ov(0.5)).is_err());
    }

    #[test]
    fn certificate_examples() {
        let c = certify_affine(&func("and", 4)).unwrap();
        assert_eq!((c.verdict, c.failure_stage), (Verdict::NotAffine, Some(Stage::Balance)));
        let c = certify_affine(&func("parity:1011", 4)).unwrap();
        assert_eq!(c.verdict, Verdict::Affine);
        assert_eq!(c.coefficients.unwrap().m, 3);
        let c = certify_affine(&func("maj", 3)).unwrap();
        assert_eq!(c.failure_stage, Some(Stage::Counting));
        assert!(c.witness.is_some());
        let c = certify_affine(&func("const1", 2)).unwrap();
        assert_eq!(c.coefficients, Some(AffineCoefficients::new(true, vec![false, false])));
        let c = certify_affine(&func("parity:1", 1).complement()).unwrap();
        assert_eq!(c.coefficients, Some(AffineCoefficients::new(true, vec![true])));
    }

    #[test]
    fn certificate_agrees_with_direct_check_on_all_three_bit_functions() {
        let mut affine = 0;
        for bits in 0..256u64 {
            let f = BoolFunc::from_table_bits(3, bits).unwrap();
            if certify_affine(&f).unwrap().verdict == Verdict::Affine {
                affine += 1;
            }
        }
        assert_eq!(affine, 16);
    }
}
