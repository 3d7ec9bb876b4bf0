//! Success probabilities of the greedy, pretty-good and globally optimal measurements.
//!
//! Under the symmetric parametrization the optimal single-qubit measurement is the
//! basis `(1, ±1)/√2`, and measuring `|ψ_x⟩` qubit by qubit returns `x` with each bit
//! flipped independently with probability `1 − p`, `p = (1 + √(1−s²))/2`. The greedy
//! value is therefore a classical noise-stability quantity; only the global and PGM
//! values need `2^n`-dimensional linear algebra.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boolfunc::{distance, BoolFunc};
use crate::ensemble::{average_pinv_sqrt, average_state, build_ensemble, full_gram, Overlap};
use crate::error::{Error, Result};
use crate::linalg::{psd_sqrt, sym_eigenvalues, trace_norm, SymMatrix};

/// Tolerance for identities that hold exactly in theory but are computed through
/// eigendecompositions.
pub const THEOREM_TOLERANCE: f64 = 1e-9;

/// Tolerance for purely classical closed forms.
pub const CLASSICAL_TOLERANCE: f64 = 1e-12;

/// Largest `n` for which [`analyze`] uses the exact double sum instead of the Walsh path.
pub const EXACT_GREEDY_MAX_BITS: usize = 6;

/// Optimal measurement of a single qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleQubitStats {
    /// Success probability `(1 + √(1−s²))/2`.
    pub p: f64,
    /// Measurement basis vectors `(1, 1)/√2` (outcome 0) and `(1, −1)/√2` (outcome 1).
    pub basis: [[f64; 2]; 2],
}

impl SingleQubitStats {
    /// Bit-flip rate `1 − p`.
    pub fn flip_rate(&self) -> f64 {
        1.0 - self.p
    }

    /// Correlation `2p − 1 = √(1−s²)` between a bit and its measured value.
    pub fn correlation(&self) -> f64 {
        2.0 * self.p - 1.0
    }
}

pub fn single_qubit_success(s: Overlap) -> SingleQubitStats {
    let s = s.value();
    SingleQubitStats {
        p: 0.5 * (1.0 + (1.0 - s * s).sqrt()),
        basis: [[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]],
    }
}

/// Greedy success probability by the exact `O(4^n)` double sum over `(x, y)`.
pub fn greedy_prob(f: &BoolFunc, s: Overlap) -> f64 {
    let n = f.n();
    let p = single_qubit_success(s).p;
    // weight[d] = p^{n−d} (1−p)^d
    let weight: Vec<f64> = (0..=n as i32).map(|d| p.powi(n as i32 - d) * (1.0 - p).powi(d)).collect();
    let size = f.size() as u32;
    let mut total = 0.0;
    for x in 0..size {
        let fx = f.eval(x);
        let mut acc = 0.0;
        for y in 0..size {
            if f.eval(y) == fx {
                acc += weight[distance(x, y) as usize];
            }
        }
        total += acc;
    }
    total / f.size() as f64
}

/// Greedy success probability as noise stability: `½(1 + Σ_S (2p−1)^{|S|} ĥ(S)²)`.
pub fn greedy_prob_fast(f: &BoolFunc, s: Overlap) -> f64 {
    let rho = single_qubit_success(s).correlation();
    let powers: Vec<f64> = (0..=f.n() as i32).map(|k| rho.powi(k)).collect();
    let stability: f64 = f
        .walsh_spectrum()
        .iter()
        .enumerate()
        .map(|(subset, c)| powers[(subset as u32).count_ones() as usize] * c * c)
        .sum();
    0.5 * (1.0 + stability)
}

/// Helstrom optimum `½ + ½‖p0σ0 − p1σ1‖₁` on the `2^n`-dimensional states.
pub fn global_prob(f: &BoolFunc, s: Overlap) -> Result<f64> {
    let ensemble = build_ensemble(f, s);
    Ok(0.5 + 0.5 * trace_norm(&ensemble.helstrom_operator())?)
}

/// Helstrom optimum through the Gram matrix: the nonzero spectrum of `ΨDΨᵀ` equals that
/// of `Γ^{1/2} D Γ^{1/2}` with `Γ = ΨᵀΨ` and `D = diag((−1)^{f(x)})`.
pub fn global_prob_gram(f: &BoolFunc, s: Overlap) -> Result<f64> {
    if f.is_constant() {
        return Err(Error::Precondition("Gram route needs a non-constant function".into()));
    }
    let root = psd_sqrt(&full_gram(f.n(), s))?;
    let sign = |x: usize| if f.eval(x as u32) { -1.0 } else { 1.0 };
    let dim = f.size();
    let rm = root.to_matrix();
    let inner = SymMatrix::from_fn(dim, |i, j| {
        rm.row(i).iter().zip(rm.row(j)).enumerate().map(|(k, (a, b))| a * sign(k) * b).sum()
    });
    let mass: f64 = sym_eigenvalues(&inner)?.iter().map(|m| m.abs()).sum();
    Ok(0.5 + 0.5 * mass / dim as f64)
}

/// Success probability of the pretty good measurement of `{(p0, σ0), (p1, σ1)}`.
///
/// The average state is `ρ^{⊗n}`, so its pseudo-inverse root is formed as the
/// Kronecker power of the single-qubit one.
pub fn pgm_prob(f: &BoolFunc, s: Overlap) -> Result<f64> {
    let ensemble = build_ensemble(f, s);
    let root = average_pinv_sqrt(s, f.n())?;
    let m0 = root.sandwich(&ensemble.sigma0)?.scale(ensemble.p0);
    let m1 = root.sandwich(&ensemble.sigma1)?.scale(ensemble.p1);

    // M0 + M1 must be the projector onto the support of the average state.
    let support = root.sandwich(&average_state(s, f.n())?)?;
    let err = (&(&m0 + &m1) - &support).max_abs();
    if err > 1e-8 {
        return Err(Error::Accuracy(format!("PGM operators miss the support projector by {err:e}")));
    }
    Ok(ensemble.p0 * m0.trace_product(&ensemble.sigma0)? + ensemble.p1 * m1.trace_product(&ensemble.sigma1)?)
}

/// Greedy and global value for an affine function with `m` active bits: `½ + ½(1−s²)^{m/2}`.
pub fn affine_closed_form(m: usize, s: Overlap) -> f64 {
    if m == 0 {
        return 1.0;
    }
    // t = ‖|ψ0⟩⟨ψ0| − |ψ1⟩⟨ψ1|‖₁ = 2√(1−s²)
    let t = 2.0 * (1.0 - s.value().powi(2)).sqrt();
    0.5 + t.powi(m as i32) / 2f64.powi(m as i32 + 1)
}

/// Greedy value for `AND` on `n` bits: `1 − (1 − pⁿ)/2^{n−1}`.
pub fn and_greedy_closed_form(n: usize, s: Overlap) -> f64 {
    let p = single_qubit_success(s).p;
    1.0 - (1.0 - p.powi(n as i32)) / 2f64.powi(n as i32 - 1)
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k.min(n - k)).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Probability that majority on `2k+1` noisy bits is correct given `j` ones in the input.
/// `Y1 ~ Binom(j, p)` counts surviving ones, `Y2 ~ Binom(2k+1−j, 1−p)` flipped zeros.
pub fn maj_conditional_success(k: usize, j: usize, s: Overlap) -> f64 {
    let n = 2 * k + 1;
    let p = single_qubit_success(s).p;
    let q = 1.0 - p;
    let zeros = n - j;
    let mut total = 0.0;
    for a in 0..=j {
        let pa = binomial(j, a) * p.powi(a as i32) * q.powi((j - a) as i32);
        let b_range = if j <= k { 0..=zeros.min(k.saturating_sub(a)) } else { (k + 1).saturating_sub(a)..=zeros };
        if j <= k && a > k {
            continue;
        }
        for b in b_range {
            total += pa * binomial(zeros, b) * q.powi(b as i32) * p.powi((zeros - b) as i32);
        }
    }
    total
}

/// Greedy value for majority on `n = 2k+1` bits, folding `γ_j = γ_{2k+1−j}`.
pub fn maj_greedy_closed_form(k: usize, s: Overlap) -> f64 {
    let n = 2 * k + 1;
    (0..=k).map(|j| binomial(n, j) * maj_conditional_success(k, j, s)).sum::<f64>() / 4f64.powi(k as i32)
}

/// Large-`n` limit of the majority greedy value: `½ + arcsin(√(1−s²))/π`.
pub fn maj_greedy_limit(s: Overlap) -> f64 {
    0.5 + (1.0 - s.value().powi(2)).sqrt().asin() / PI
}

/// Outcome of a Monte Carlo run of the greedy strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleOutcome {
    pub trials: u64,
    pub successes: u64,
    pub frequency: f64,
}

/// Simulate the greedy strategy: draw `x` uniformly, flip each bit with probability
/// `1 − p`, count `f(y) = f(x)`.
///
/// The stream is ChaCha8 (`rand_chacha`) seeded through `SeedableRng::seed_from_u64`;
/// per trial it draws one `u32` below `2^n` for `x`, then one `f64` per bit in
/// coordinate order `x_1..x_n`, flipping when the draw is below `1 − p`.
pub fn sample_greedy(f: &BoolFunc, s: Overlap, trials: u64, seed: u64) -> Result<SampleOutcome> {
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let n = f.n();
    let flip = single_qubit_success(s).flip_rate();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut successes = 0u64;
    for _ in 0..trials {
        let x: u32 = rng.gen_range(0..1u32 << n);
        let mut y = x;
        for i in 1..=n {
            if rng.gen::<f64>() < flip {
                y ^= 1 << (n - i);
            }
        }
        successes += u64::from(f.eval(x) == f.eval(y));
    }
    Ok(SampleOutcome { trials, successes, frequency: successes as f64 / trials as f64 })
}

/// Which computation produced a reported number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactDoubleSum,
    WalshNoiseStability,
    HelstromTraceNorm,
    PgmOperators,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MethodTags {
    pub greedy: Method,
    pub global: Method,
    pub pgm: Method,
}

/// Greedy, global and PGM values for one `(f, s)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyReport {
    pub p_greedy: f64,
    pub p_global: f64,
    pub p_pgm: f64,
    /// `p_global − p_greedy`.
    pub gap: f64,
    /// `p_greedy − p_global²`, the Barnum–Knill margin.
    pub bk_slack: f64,
    pub methods: MethodTags,
}

impl StrategyReport {
    /// Names of violated invariants at tolerance `tol`.
    pub fn violations(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        for (name, v) in [("p_greedy", self.p_greedy), ("p_global", self.p_global), ("p_pgm", self.p_pgm)] {
            if !(-CLASSICAL_TOLERANCE..=1.0 + CLASSICAL_TOLERANCE).contains(&v) {
                out.push(format!("{name} = {v} outside [0, 1]"));
            }
        }
        if self.p_pgm > self.p_global + tol {
            out.push(format!("p_pgm {} exceeds p_global {}", self.p_pgm, self.p_global));
        }
        if self.p_global.powi(2) > self.p_pgm + tol {
            out.push(format!("p_global² {} exceeds p_pgm {}", self.p_global.powi(2), self.p_pgm));
        }
        if (self.p_pgm - self.p_greedy).abs() > tol {
            out.push(format!("|p_pgm − p_greedy| = {:e}", (self.p_pgm - self.p_greedy).abs()));
        }
        out
    }
}

/// Compute all three probabilities and enforce the report invariants at the default tolerance.
pub fn analyze(f: &BoolFunc, s: Overlap) -> Result<StrategyReport> {
    analyze_with_tolerance(f, s, THEOREM_TOLERANCE)
}

pub fn analyze_with_tolerance(f: &BoolFunc, s: Overlap, tol: f64) -> Result<StrategyReport> {
    let report = evaluate(f, s)?;
    let violations = report.violations(tol);
    if violations.is_empty() {
        Ok(report)
    } else {
        Err(Error::InvariantViolation(format!("{f} at s={}: {}", s.value(), violations.join("; "))))
    }
}

/// Like [`analyze`] but returns the report without checking invariants.
pub fn evaluate(f: &BoolFunc, s: Overlap) -> Result<StrategyReport> {
    let (p_greedy, greedy_method) = if f.n() <= EXACT_GREEDY_MAX_BITS {
        (greedy_prob(f, s), Method::ExactDoubleSum)
    } else {
        (greedy_prob_fast(f, s), Method::WalshNoiseStability)
    };
    let p_global = global_prob(f, s)?;
    let p_pgm = pgm_prob(f, s)?;
    Ok(StrategyReport {
        p_greedy,
        p_global,
        p_pgm,
        gap: p_global - p_greedy,
        bk_slack: p_greedy - p_global * p_global,
        methods: MethodTags { greedy: greedy_method, global: Method::HelstromTraceNorm, pgm: Method::PgmOperators },
    })
}
