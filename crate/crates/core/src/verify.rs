//! Named invariant checks over whole populations of Boolean functions.
//!
//! Every `n` up to the cap is enumerated exhaustively when `n ≤ 4`; larger `n` use a
//! seeded random sample plus the named families. Each check records its worst measured
//! value against a fixed bound.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::boolfunc::{hamming, BitString, BoolFunc, Descriptor};
use crate::certify::{
    balanced_or_constant, certify_affine, counting_condition, flip_coordinate, gram_relation_residual,
    min_cross_distance, pgm_optimality_residual, Balance, CountingWitness,
};
use crate::ensemble::{encoding_states, Overlap};
use crate::error::{Error, Result};
use crate::linalg::{trace_norm, SymMatrix};
use crate::strategies::{
    affine_closed_form, and_greedy_closed_form, evaluate, global_prob, global_prob_gram, greedy_prob, greedy_prob_fast,
    maj_greedy_closed_form, maj_greedy_limit, pgm_prob, single_qubit_success, CLASSICAL_TOLERANCE, THEOREM_TOLERANCE,
};

/// Largest `n` enumerated exhaustively.
pub const EXHAUSTIVE_MAX_BITS: usize = 4;

/// Largest cap accepted by [`run_suite`].
pub const VERIFY_MAX_BITS: usize = 8;

/// Overlap at which the equivalence of the affine criteria is checked.
pub const EQUIVALENCE_OVERLAP: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Checks run for every `1 ≤ n ≤ max_n`.
    pub max_n: usize,
    pub grid: Vec<Overlap>,
    /// Tolerance for theorem identities.
    pub tol: f64,
    /// Seed for the random population above the exhaustive range.
    pub seed: u64,
    pub random_per_n: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_n: EXHAUSTIVE_MAX_BITS,
            grid: [0.3, 0.5, 0.7].into_iter().map(|s| Overlap::new(s).expect("grid inside (0,1)")).collect(),
            tol: THEOREM_TOLERANCE,
            seed: 0,
            random_per_n: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    AtMost,
    AtLeast,
    LessThan,
    GreaterThan,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
            Comparison::LessThan => "<",
            Comparison::GreaterThan => ">",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    /// Worst value observed; `None` if the population was empty.
    pub worst: Option<f64>,
    pub comparison: Comparison,
    pub bound: f64,
    pub samples: usize,
    pub passed: bool,
}

impl Check {
    fn new(name: &'static str, stat: Stat, comparison: Comparison, bound: f64) -> Self {
        let worst = match comparison {
            Comparison::AtMost | Comparison::LessThan => stat.max(),
            Comparison::AtLeast | Comparison::GreaterThan => stat.min(),
        };
        let passed = match (worst, comparison) {
            (None, _) => true,
            (Some(w), Comparison::AtMost) => w <= bound,
            (Some(w), Comparison::AtLeast) => w >= bound,
            (Some(w), Comparison::LessThan) => w < bound,
            (Some(w), Comparison::GreaterThan) => w > bound,
        };
        Check { name, worst, comparison, bound, samples: stat.count, passed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub max_n: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Running extremes of a sampled quantity. NaN samples poison both extremes.
#[derive(Debug, Clone, Copy)]
struct Stat {
    max: f64,
    min: f64,
    count: usize,
}

impl Default for Stat {
    fn default() -> Self {
        Stat { max: f64::NEG_INFINITY, min: f64::INFINITY, count: 0 }
    }
}

impl Stat {
    fn push(&mut self, v: f64) {
        if v.is_nan() {
            self.max = f64::NAN;
            self.min = f64::NAN;
        } else {
            self.max = self.max.max(v);
            self.min = self.min.min(v);
        }
        self.count += 1;
    }

    fn merge(mut self, other: Stat) -> Stat {
        if self.max.is_nan() || other.max.is_nan() {
            self.max = f64::NAN;
            self.min = f64::NAN;
        } else {
            self.max = self.max.max(other.max);
            self.min = self.min.min(other.min);
        }
        self.count += other.count;
        self
    }

    fn max(&self) -> Option<f64> {
        (self.count > 0).then_some(self.max)
    }

    fn min(&self) -> Option<f64> {
        (self.count > 0).then_some(self.min)
    }
}

/// Per-population statistics, one field per check.
#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    range_excess: Stat,
    bk_slack: Stat,
    pgm_over_global: Stat,
    greedy_pgm: Stat,
    fast_path: Stat,
    dual_path: Stat,
    complement: Stat,
    affine_closed: Stat,
    certificate_mismatch: Stat,
    witness_invalid: Stat,
    flip_mismatch: Stat,
    cross_distance: Stat,
    gram_affine: Stat,
    gram_nonaffine: Stat,
    commutator_affine: Stat,
    commutator_nonaffine: Stat,
    gap_affine: Stat,
    gap_nonaffine: Stat,
    reduced_child: Stat,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            range_excess: self.range_excess.merge(o.range_excess),
            bk_slack: self.bk_slack.merge(o.bk_slack),
            pgm_over_global: self.pgm_over_global.merge(o.pgm_over_global),
            greedy_pgm: self.greedy_pgm.merge(o.greedy_pgm),
            fast_path: self.fast_path.merge(o.fast_path),
            dual_path: self.dual_path.merge(o.dual_path),
            complement: self.complement.merge(o.complement),
            affine_closed: self.affine_closed.merge(o.affine_closed),
            certificate_mismatch: self.certificate_mismatch.merge(o.certificate_mismatch),
            witness_invalid: self.witness_invalid.merge(o.witness_invalid),
            flip_mismatch: self.flip_mismatch.merge(o.flip_mismatch),
            cross_distance: self.cross_distance.merge(o.cross_distance),
            gram_affine: self.gram_affine.merge(o.gram_affine),
            gram_nonaffine: self.gram_nonaffine.merge(o.gram_nonaffine),
            commutator_affine: self.commutator_affine.merge(o.commutator_affine),
            commutator_nonaffine: self.commutator_nonaffine.merge(o.commutator_nonaffine),
            gap_affine: self.gap_affine.merge(o.gap_affine),
            gap_nonaffine: self.gap_nonaffine.merge(o.gap_nonaffine),
            reduced_child: self.reduced_child.merge(o.reduced_child),
        }
    }
}

/// Re-derive a counting witness from the definition, independently of the certifier.
pub fn witness_is_valid(f: &BoolFunc, w: &CountingWitness) -> bool {
    let n = f.n();
    if w.x.len() != n || w.y.len() != n || f.eval(w.x.index()) || !f.eval(w.y.index()) {
        return false;
    }
    let mut counts = [0usize; 2];
    for idx in 0..f.size() as u32 {
        let v = BitString::new(n, idx).expect("index within range");
        let (Ok(a), Ok(b)) = (hamming(&w.x, &v), hamming(&v, &w.y)) else { return false };
        if a + b == w.length {
            counts[usize::from(f.eval(idx))] += 1;
        }
    }
    counts == [w.count0, w.count1] && counts[0] != counts[1]
}

/// Functions checked at arity `n`.
pub fn population(n: usize, cfg: &VerifyConfig) -> Result<Vec<BoolFunc>> {
    if n <= EXHAUSTIVE_MAX_BITS {
        return (0..1u64 << (1 << n)).map(|bits| BoolFunc::from_table_bits(n, bits)).collect();
    }
    let mut out = Vec::new();
    for d in [Descriptor::And, Descriptor::Or, Descriptor::Maj, Descriptor::Parity(None)] {
        if d == Descriptor::Maj && n.is_multiple_of(2) {
            continue;
        }
        out.push(BoolFunc::from_descriptor(&d, Some(n))?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (n as u64).rotate_left(32));
    for _ in 0..cfg.random_per_n {
        out.push(BoolFunc::new(n, (0..1usize << n).map(|_| rng.gen::<bool>()).collect())?);
    }
    Ok(out)
}

fn tally_function(f: &BoolFunc, cfg: &VerifyConfig) -> Result<Tally> {
    let mut t = Tally::default();
    let complement = f.complement();
    let direct = f.is_affine();

    for &s in &cfg.grid {
        let r = evaluate(f, s)?;
        for p in [r.p_greedy, r.p_global, r.p_pgm] {
            t.range_excess.push((p - 1.0).max(-p).max(0.0));
        }
        t.bk_slack.push(r.bk_slack);
        t.pgm_over_global.push(r.p_pgm - r.p_global);
        t.greedy_pgm.push((r.p_pgm - r.p_greedy).abs());
        t.fast_path.push((greedy_prob(f, s) - greedy_prob_fast(f, s)).abs());
        if !f.is_constant() {
            t.dual_path.push((global_prob(f, s)? - global_prob_gram(f, s)?).abs());
        }
        let c = evaluate(&complement, s)?;
        t.complement.push(
            [(r.p_greedy, c.p_greedy), (r.p_global, c.p_global), (r.p_pgm, c.p_pgm)]
                .iter()
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        );
        if let Some(a) = &direct {
            let closed = affine_closed_form(a.m, s);
            t.affine_closed.push((closed - r.p_greedy).abs().max((closed - r.p_global).abs()));
        }
    }

    let certificate = certify_affine(f);
    t.certificate_mismatch.push(if certificate.is_ok() { 0.0 } else { 1.0 });
    if let Some(w) = counting_condition(f) {
        t.witness_invalid.push(if witness_is_valid(f, &w) { 0.0 } else { 1.0 });
    }
    if let (Some(a), Balance::Balanced) = (&direct, balanced_or_constant(f)) {
        let flip = flip_coordinate(f)?;
        let first = a.b.iter().position(|&b| b).map(|i| i + 1);
        t.flip_mismatch.push(if flip.multiplicity == a.m && flip.coordinate == first { 0.0 } else { 1.0 });
    }

    if f.is_constant() {
        return Ok(t);
    }
    t.cross_distance.push((f64::from(min_cross_distance(f)?) - 1.0).abs());

    let s = Overlap::new(EQUIVALENCE_OVERLAP)?;
    let gram = gram_relation_residual(f, s)?;
    let commutator = pgm_optimality_residual(f, s)?;
    let r = evaluate(f, s)?;
    if direct.is_some() {
        t.gram_affine.push(gram);
        t.commutator_affine.push(commutator);
        t.gap_affine.push(r.gap.abs());
    } else {
        t.gram_nonaffine.push(gram);
        t.commutator_nonaffine.push(commutator);
        t.gap_nonaffine.push(r.gap.abs());
    }
    if gram < 1e-10 && f.n() >= 2 {
        for i in 1..=f.n() {
            if let Some(g) = f.xor_decompose(i) {
                let child = if g.is_constant() { 0.0 } else { gram_relation_residual(&g, s)? };
                t.reduced_child.push(child);
            }
        }
    }
    Ok(t)
}

fn family_checks(cfg: &VerifyConfig) -> Result<(Stat, Stat, Stat, Stat, Stat)> {
    let mut single = Stat::default();
    let mut and = Stat::default();
    let mut maj = Stat::default();
    for &s in &cfg.grid {
        let stats = single_qubit_success(s);
        let (a, b) = encoding_states(s);
        let diff = &SymMatrix::outer(&a) - &SymMatrix::outer(&b);
        single.push((stats.p - (0.5 + 0.25 * trace_norm(&diff)?)).abs());
        for n in 1..=6 {
            let f = BoolFunc::from_descriptor(&Descriptor::And, Some(n))?;
            and.push((and_greedy_closed_form(n, s) - greedy_prob(&f, s)).abs());
        }
        for k in 1..=3 {
            let f = BoolFunc::from_descriptor(&Descriptor::Maj, Some(2 * k + 1))?;
            maj.push((maj_greedy_closed_form(k, s) - greedy_prob(&f, s)).abs());
        }
    }

    let s = Overlap::new(EQUIVALENCE_OVERLAP)?;
    let limit = maj_greedy_limit(s);
    let errors: Vec<f64> = (1..=4).map(|k| (maj_greedy_closed_form(k, s) - limit).abs()).collect();
    let mut steps = Stat::default();
    errors.windows(2).for_each(|w| steps.push(w[1] - w[0]));

    let mut pgm_grid = Stat::default();
    for s in [0.2, 0.5, 0.8] {
        let s = Overlap::new(s)?;
        for n in 1..=cfg.max_n.min(3) {
            for bits in 0..1u64 << (1 << n) {
                let f = BoolFunc::from_table_bits(n, bits)?;
                pgm_grid.push((pgm_prob(&f, s)? - greedy_prob(&f, s)).abs());
            }
        }
    }
    Ok((single, and, maj, steps, pgm_grid))
}

/// Run every check for `1 ≤ n ≤ cfg.max_n`.
pub fn run_suite(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.max_n == 0 || cfg.max_n > VERIFY_MAX_BITS {
        return Err(Error::Precondition(format!("verify needs 1 <= n <= {VERIFY_MAX_BITS}, got {}", cfg.max_n)));
    }
    if cfg.grid.is_empty() {
        return Err(Error::Precondition("verify needs at least one overlap".into()));
    }
    let mut tally = Tally::default();
    let mut affine_count = Stat::default();
    for n in 1..=cfg.max_n {
        let functions = population(n, cfg)?;
        let parts: Vec<Tally> = functions.par_iter().map(|f| tally_function(f, cfg)).collect::<Result<_>>()?;
        tally = parts.into_iter().fold(tally, Tally::merge);
        if n <= EXHAUSTIVE_MAX_BITS {
            let count = functions.iter().filter(|f| f.is_affine().is_some()).count();
            affine_count.push((count as f64 - (1u64 << (n + 1)) as f64).abs());
        }
    }
    let (single, and, maj, steps, pgm_grid) = family_checks(cfg)?;
    let tol = cfg.tol;

    use Comparison::*;
    let checks = vec![
        Check::new("single_qubit_trace_norm", single, AtMost, CLASSICAL_TOLERANCE),
        Check::new("probabilities_in_unit_interval", tally.range_excess, AtMost, CLASSICAL_TOLERANCE),
        Check::new("barnum_knill_lower", tally.bk_slack, AtLeast, -tol),
        Check::new("pgm_below_global", tally.pgm_over_global, AtMost, tol),
        Check::new("greedy_equals_pgm", tally.greedy_pgm, AtMost, tol),
        Check::new("greedy_equals_pgm_wide_grid", pgm_grid, AtMost, tol),
        Check::new("greedy_fast_path", tally.fast_path, AtMost, 1e-10),
        Check::new("dual_path_helstrom", tally.dual_path, AtMost, 1e-8),
        Check::new("complement_symmetry", tally.complement, AtMost, CLASSICAL_TOLERANCE),
        Check::new("affine_closed_form", tally.affine_closed, AtMost, tol),
        Check::new("and_closed_form", and, AtMost, CLASSICAL_TOLERANCE),
        Check::new("maj_closed_form", maj, AtMost, CLASSICAL_TOLERANCE),
        Check::new("maj_limit_approach_step", steps, LessThan, 0.0),
        Check::new("certificate_agrees_with_direct", tally.certificate_mismatch, AtMost, 0.0),
        Check::new("counting_witness_validity", tally.witness_invalid, AtMost, 0.0),
        Check::new("affine_count", affine_count, AtMost, 0.0),
        Check::new("flip_coordinate_multiplicity", tally.flip_mismatch, AtMost, 0.0),
        Check::new("min_cross_distance", tally.cross_distance, AtMost, 0.0),
        Check::new("gram_relation_affine", tally.gram_affine, LessThan, 1e-10),
        Check::new("gram_relation_nonaffine", tally.gram_nonaffine, GreaterThan, 1e-6),
        Check::new("pgm_commutator_affine", tally.commutator_affine, LessThan, 1e-7),
        Check::new("pgm_commutator_nonaffine", tally.commutator_nonaffine, GreaterThan, 1e-7),
        Check::new("gap_affine", tally.gap_affine, LessThan, tol),
        Check::new("gap_nonaffine", tally.gap_nonaffine, AtLeast, tol),
        Check::new("reduced_relation_child", tally.reduced_child, LessThan, 1e-10),
    ];
    Ok(VerifyReport { max_n: cfg.max_n, checks })
}
