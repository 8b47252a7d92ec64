//! Hole-density along polynomial orbits, convergence probes and the
//! equidistribution comparison.

use crate::error::{Error, Result};
use crate::ntcore::aset::{est2_bound, max_shift_correlation, sampled_shift_correlation, ShiftDirection, DEFAULT_SHIFT_LIMIT};
use crate::ntcore::perm::is_permutation_mod;
use crate::ntcore::poly::IntPolynomial;
use crate::ntcore::residue::ResidueSet;
use crate::orbitstats::average::OrbitEvaluator;
use crate::orbitstats::cylinder::{CylinderFunction, IntervalValue, Rational};
use crate::words::freq::window_histogram;
use crate::words::meta::ConstructionKind;
use crate::words::pair::ViablePair;

/// Shifts examined when a level is too long for the exact maximum.
pub const SAMPLED_SHIFTS: u64 = 4096;

/// `max_a |{i < n_t : x_t(P(i) + a) = ?}|` at one level.
#[derive(Clone, Debug, PartialEq)]
pub struct QuestionDensity {
    pub level: usize,
    pub n: u64,
    pub max: u64,
    pub argmax: u64,
    /// False for the sampled fallback, where `max` is only a lower bound.
    pub exact: bool,
    /// For residue-tower pairs built from A-sets: `n·(2/3)^{ln ω(n)}`.
    pub est2: Option<f64>,
}

impl QuestionDensity {
    pub fn within_est2(&self) -> Option<bool> {
        self.est2.map(|b| self.max as f64 <= b)
    }
}

pub fn shift_question_density(pair: &ViablePair, t: usize, poly: &IntPolynomial) -> Result<QuestionDensity> {
    shift_question_density_bounded(pair, t, poly, DEFAULT_SHIFT_LIMIT)
}

/// As [`shift_question_density`], with the exact path limited to `n_t ≤ limit`.
pub fn shift_question_density_bounded(
    pair: &ViablePair,
    t: usize,
    poly: &IntPolynomial,
    limit: u64,
) -> Result<QuestionDensity> {
    if t > pair.top_index() {
        return Err(Error::InvalidInput(format!("level {t} not materialised")));
    }
    let lvl = pair.level(t);
    let n = lvl.n;
    let mut weights = vec![0u64; n as usize];
    for i in 0..n {
        weights[poly.eval_mod(i as i128, n) as usize] += 1;
    }
    let holes = ResidueSet::from_iter(n, lvl.word.hole_positions());
    let sm = if n <= limit {
        max_shift_correlation(&weights, &holes, ShiftDirection::Add)
    } else {
        let step = n.div_ceil(SAMPLED_SHIFTS);
        let shifts: Vec<u64> = (0..n).step_by(step as usize).collect();
        sampled_shift_correlation(&weights, &holes, ShiftDirection::Add, &shifts)
    };
    let est2 = match pair.meta().map(|m| m.kind) {
        Some(ConstructionKind::B) if t > 0 => Some(est2_bound(n)?),
        _ => None,
    };
    Ok(QuestionDensity { level: t, n, max: sm.max, argmax: sm.argmax, exact: sm.exact, est2 })
}

/// `ε = (2C+1)·max_a density / n_t`.
pub fn window_hole_density(density: &QuestionDensity, radius: u32) -> Rational {
    Rational::new((2 * radius as i128 + 1) * density.max as i128, density.n as i128)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSample {
    pub shift: i128,
    pub n: u64,
    pub value: IntervalValue,
}

/// Worst-case oscillation between two consecutive grid points.
#[derive(Clone, Debug, PartialEq)]
pub struct Oscillation {
    pub shift: i128,
    pub from: u64,
    pub to: u64,
    pub oscillation: Rational,
    /// `sup|F|·(8ε + 2n_t/min(N, N'))`, valid at every grid pair.
    pub finite_bound: Rational,
    pub finite_holds: bool,
    /// `8ε` once both points exceed `(1/ε + 1)·n_t`; for `ε = 0`, exact
    /// agreement at multiples of `n_t`. `None` where it does not apply.
    pub asymptotic_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub level: usize,
    pub density: QuestionDensity,
    pub epsilon: Rational,
    pub samples: Vec<ProbeSample>,
    pub oscillations: Vec<Oscillation>,
}

impl ProbeReport {
    /// All applicable bounds hold.
    pub fn bounds_hold(&self) -> bool {
        self.oscillations.iter().all(|o| o.finite_holds && o.asymptotic_holds != Some(false))
    }

    pub fn max_oscillation(&self, shift: i128) -> Option<Rational> {
        self.oscillations.iter().filter(|o| o.shift == shift).map(|o| o.oscillation).max()
    }
}

/// Averages along `P` for every shift and grid point, with the oscillation
/// between consecutive grid points checked against the hole density of level `t`.
pub fn convergence_probe(
    pair: &ViablePair,
    poly: &IntPolynomial,
    f: &CylinderFunction,
    shifts: &[i128],
    grid: &[u64],
    t: usize,
) -> Result<ProbeReport> {
    if grid.is_empty() || grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("N grid must be positive and strictly increasing".into()));
    }
    let density = shift_question_density(pair, t, poly)?;
    let eps = window_hole_density(&density, f.radius());
    let n_t = density.n;
    let sup = f.sup_abs();
    let zero = Rational::from_integer(0);
    let eval = OrbitEvaluator::new(pair, f);
    let mut samples = Vec::new();
    let mut oscillations = Vec::new();
    for &r in shifts {
        let values = grid.iter().map(|&n| eval.average(poly, r, n)).collect::<Result<Vec<_>>>()?;
        for (i, w) in grid.windows(2).enumerate() {
            let osc = values[i].worst_gap(&values[i + 1]);
            let finite_bound = sup * (eps * 8 + Rational::new(2 * n_t as i128, w[0] as i128));
            let asymptotic_holds = if eps == zero {
                (w[0] % n_t == 0 && w[1] % n_t == 0).then_some(osc == zero)
            } else {
                let threshold = (eps.recip() + 1) * n_t as i128;
                (Rational::from_integer(w[0] as i128) > threshold).then(|| osc <= sup * eps * 8)
            };
            oscillations.push(Oscillation {
                shift: r,
                from: w[0],
                to: w[1],
                oscillation: osc,
                finite_holds: osc <= finite_bound,
                finite_bound,
                asymptotic_holds,
            });
        }
        samples.extend(grid.iter().zip(values).map(|(&n, value)| ProbeSample { shift: r, n, value }));
    }
    Ok(ProbeReport { level: t, density, epsilon: eps, samples, oscillations })
}

/// `Σ_{m<n_t} F(σ^{P(m)+r}x)` against `Σ_{m<n_t} F(σ^{m+r}x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PermutationIdentity {
    pub level: usize,
    pub shift: i128,
    pub along_poly: IntervalValue,
    pub plain: IntervalValue,
    /// Largest possible difference of the two sums.
    pub worst_gap: Rational,
    /// `(2C+1)·?_t·(max F − min F)`.
    pub bound: Rational,
    pub holds: bool,
}

/// For `P` a permutation mod `n_t`, residues whose window is resolved at
/// level `t` contribute identically to both sums, so they differ by at most
/// one table range per hole-touching window.
pub fn permutation_identity(
    pair: &ViablePair,
    poly: &IntPolynomial,
    f: &CylinderFunction,
    t: usize,
    r: i128,
) -> Result<PermutationIdentity> {
    if t > pair.top_index() {
        return Err(Error::InvalidInput(format!("level {t} not materialised")));
    }
    let lvl = pair.level(t);
    if !is_permutation_mod(poly, lvl.n)? {
        return Err(Error::Hypothesis(format!("{} is not a permutation mod {}", poly.render("m"), lvl.n)));
    }
    let eval = OrbitEvaluator::new(pair, f);
    let along_poly = eval.sum(poly, r, lvl.n)?;
    let plain = eval.sum(&IntPolynomial::identity(), r, lvl.n)?;
    let worst_gap = along_poly.worst_gap(&plain);
    let bound = (f.max() - f.min()) * ((2 * f.radius() as i128 + 1) * lvl.word.hole_count() as i128);
    Ok(PermutationIdentity { level: t, shift: r, holds: worst_gap <= bound, along_poly, plain, worst_gap, bound })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquidistributionReport {
    /// Average along `P` over one period of the top level.
    pub along_poly: IntervalValue,
    /// Window-frequency estimate of `∫ F dμ`.
    pub measure_estimate: IntervalValue,
    pub tolerance: Rational,
    pub distance: Rational,
    pub passed: bool,
    /// Exact identity at every level `t ≥ 1`, shift 0.
    pub identities: Vec<PermutationIdentity>,
}

impl EquidistributionReport {
    pub fn ok(&self) -> bool {
        self.passed && self.identities.iter().all(|i| i.holds)
    }
}

/// Compares the orbit average along `P` at `N = n_T` with the block-frequency
/// estimate of the invariant measure. `P` must permute `Z/n_T`.
pub fn equidistribution_check(
    pair: &ViablePair,
    poly: &IntPolynomial,
    f: &CylinderFunction,
    tol: Rational,
) -> Result<EquidistributionReport> {
    let top = pair.top();
    if !is_permutation_mod(poly, top.n)? {
        return Err(Error::Hypothesis(format!("{} is not a permutation mod {}", poly.render("m"), top.n)));
    }
    let along_poly = OrbitEvaluator::new(pair, f).average(poly, 0, top.n)?;
    let (counts, unresolved) = window_histogram(&top.word, f.radius());
    let resolved_sum: i128 = counts.iter().enumerate().map(|(c, &k)| k as i128 * f.numer(c as u32)).sum();
    let d = top.n as i128 * f.denom();
    let u = unresolved as i128;
    let measure_estimate = IntervalValue {
        low: Rational::new(resolved_sum + u * f.min_numer(), d),
        high: Rational::new(resolved_sum + u * f.max_numer(), d),
        resolved: top.n - unresolved,
        unresolved,
    };
    let distance = along_poly.distance(&measure_estimate);
    let identities = (1..=pair.top_index())
        .map(|t| permutation_identity(pair, poly, f, t, 0))
        .collect::<Result<Vec<_>>>()?;
    Ok(EquidistributionReport {
        passed: distance <= tol,
        along_poly,
        measure_estimate,
        tolerance: tol,
        distance,
        identities,
    })
}
