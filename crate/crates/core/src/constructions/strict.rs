//! Strict-constants planning: derives the towers demanded by the growth
//! conditions, reports the required magnitudes, and decides how many
//! levels fit the materialisation budget.
//!
//! The summed conditions are split into a geometric budget: the term for
//! level t must stay below `(1/10)·2^{-t}` (construction A, t ≥ 1) or
//! `(1/10)·2^{-(t+1)}` (construction B, t ≥ 0), so the sums stay below 1/10.

use crate::error::{Error, Result};
use crate::ntcore::arith::{factorize, is_prime};
use crate::ntcore::primes::{find_ntlem_primes, find_primes, ntlem_params, DEFAULT_SEARCH_SPAN};

/// One checked (or derived) requirement.
#[derive(Clone, Debug, PartialEq)]
pub struct StrictCheck {
    /// Level `t+1` whose modulus or prime the requirement constrains.
    pub level: usize,
    pub condition: &'static str,
    pub requirement: String,
    /// `None` when only the required magnitude is known.
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Blocked {
    pub level: usize,
    pub condition: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StrictPlan {
    pub levels_requested: usize,
    /// Exact moduli `n_0, n_1, ...` as far as they fit in 64 bits.
    pub moduli: Vec<u64>,
    /// Primes added at each level (exact part only).
    pub primes: Vec<Vec<u64>>,
    /// `log10 n_t` for every requested level, exact or a lower bound.
    pub log10_moduli: Vec<f64>,
    pub checks: Vec<StrictCheck>,
    /// First level that cannot be materialised, if any.
    pub blocked: Option<Blocked>,
}

impl StrictPlan {
    /// Number of levels (beyond `n_0`) that can be built.
    pub fn buildable_levels(&self) -> usize {
        match &self.blocked {
            Some(b) => b.level - 1,
            None => self.levels_requested,
        }
    }

    pub fn into_error(self) -> Error {
        match self.blocked {
            Some(b) => Error::StrictInfeasible {
                condition: b.condition,
                detail: b.detail,
            },
            None => Error::InvalidInput("plan is not blocked".into()),
        }
    }

    pub fn first_failure(&self) -> Option<&StrictCheck> {
        self.checks.iter().find(|c| c.holds == Some(false))
    }
}

fn log10_u128(x: u128) -> f64 {
    (x as f64).log10()
}

fn budget_detail(level: usize, log10_n: f64, budget: u64, why: &str) -> Blocked {
    Blocked {
        level,
        condition: "materialization budget".into(),
        detail: format!(
            "n_{level} >= 10^{log10_n:.2} exceeds the budget {budget} ({why})"
        ),
    }
}

/// Strict tower for construction A: `n_{t+1} = n_t·p_{t+1}` with primes
/// satisfying the gcd condition for `(k, l)`, strictly increasing, and
///
/// * `φ(n_{t+1})/n_{t+1} > 9/10`,
/// * `8k·n_t/√p_{t+1} < (1/10)·2^{-t}` for `t ≥ 1`,
/// * `p_{t+1} > 30·n_t^k`.
///
/// Each prime is the smallest admissible one above all floors.
pub fn plan_strict_a(k: u64, l: u64, levels: usize, budget: u64) -> Result<StrictPlan> {
    let params = ntlem_params(k, l)?;
    let mut plan = StrictPlan {
        levels_requested: levels,
        moduli: vec![1],
        primes: Vec::new(),
        log10_moduli: vec![0.0],
        checks: Vec::new(),
        blocked: None,
    };
    let mut exact: Option<(u128, u128)> = Some((1, 1)); // (n, φ(n))
    let mut log_n = 0.0f64;
    let mut prev_p: u64 = 1;
    let mut hole_sum = 0.0f64;

    for t in 0..levels {
        let level = t + 1;
        let k_f = k as f64;
        // required log10 p from the growth conditions
        let log_pow = 30f64.log10() + k_f * log_n;
        let log_sum = if t >= 1 {
            2.0 * ((80.0 * 2f64.powi(t as i32) * k_f).log10() + log_n)
        } else {
            0.0
        };
        let exact_floor = exact.and_then(|(n, phi)| {
            let pow = n.checked_pow(k as u32)?.checked_mul(30)?.checked_add(1)?;
            let sum = if t >= 1 {
                let x = 80u128.checked_mul(1u128 << t)?.checked_mul(k as u128)?.checked_mul(n)?;
                x.checked_mul(x)?.checked_add(1)?
            } else {
                0
            };
            // p > 10φ/(10φ - 9n)
            let num = 10 * phi;
            let den = (10 * phi).checked_sub(9 * n).filter(|d| *d > 0)?;
            let phi_floor = num / den + 1;
            let f = pow.max(sum).max(phi_floor).max(prev_p as u128 + 1);
            u64::try_from(f).ok()
        });

        match (exact, exact_floor) {
            (Some((n, phi)), Some(floor)) => {
                let p = find_ntlem_primes(&params, 1, floor)?[0];
                plan.checks.push(StrictCheck {
                    level,
                    condition: "prime_growth",
                    requirement: format!("p_{level} > 30·n_{t}^{k} = {}", n.pow(k as u32) * 30),
                    holds: Some((p as u128) > 30 * n.pow(k as u32)),
                });
                if t >= 1 {
                    let term = 8.0 * k_f * n as f64 / (p as f64).sqrt();
                    hole_sum += term;
                    plan.checks.push(StrictCheck {
                        level,
                        condition: "hole_budget",
                        requirement: format!(
                            "8k·n_{t}/sqrt(p_{level}) = {term:.3e} < {:.3e}",
                            0.1 * 0.5f64.powi(t as i32)
                        ),
                        holds: Some(term < 0.1 * 0.5f64.powi(t as i32)),
                    });
                }
                let (n1, phi1) = (n * p as u128, phi * (p as u128 - 1));
                plan.checks.push(StrictCheck {
                    level,
                    condition: "totient_ratio",
                    requirement: format!("φ(n_{level})/n_{level} > 9/10"),
                    holds: Some(10 * phi1 > 9 * n1),
                });
                plan.checks.push(StrictCheck {
                    level,
                    condition: "gcd",
                    requirement: format!(
                        "gcd(p_{level}-1, {}) = {}",
                        params.gcd_modulus, params.gcd_target
                    ),
                    holds: Some(params.admits_prime(p)),
                });
                prev_p = p;
                log_n += (p as f64).log10();
                plan.primes.push(vec![p]);
                plan.log10_moduli.push(log_n);
                if plan.blocked.is_none() && n1 > budget as u128 {
                    plan.blocked = Some(budget_detail(level, log10_u128(n1), budget, "prime growth forces it"));
                }
                match u64::try_from(n1) {
                    Ok(v) => {
                        plan.moduli.push(v);
                        exact = Some((n1, phi1));
                    }
                    Err(_) => exact = None,
                }
            }
            _ => {
                let log_p = log_pow.max(log_sum);
                plan.checks.push(StrictCheck {
                    level,
                    condition: "prime_growth",
                    requirement: format!("p_{level} > 10^{log_p:.2}"),
                    holds: None,
                });
                log_n += log_p;
                plan.log10_moduli.push(log_n);
                exact = None;
                if plan.blocked.is_none() {
                    plan.blocked = Some(budget_detail(level, log_n, budget, "prime growth forces it"));
                }
            }
        }
    }
    if levels >= 2 {
        plan.checks.push(StrictCheck {
            level: levels,
            condition: "hole_budget",
            requirement: format!("sum of 8k·n_t/sqrt(p_(t+1)) over found primes = {hole_sum:.3e} < 1/10"),
            holds: Some(hole_sum < 0.1),
        });
    }
    Ok(plan)
}

/// Strict tower for construction B: squarefree moduli whose primes satisfy
/// `l | p-1` and `p > (12kl)²`, built by adding the smallest unused such
/// primes until, at level `t+1`,
///
/// * `2^{-ω/4} + (2n_t + n_{t+1}^{1/k})·k^ω/φ(n_{t+1}) < (1/10)·2^{-(t+1)}`,
/// * `φ(n_{t+1})/n_{t+1} > 9/10`,
/// * `n_{t+1} > 10·n_t^k`.
///
/// Magnitudes are tracked in log space, so the plan is available even
/// when no level fits the budget (which is always the case in practice:
/// the first condition alone needs ω(n_1) ≥ 18).
pub fn plan_strict_b(k: u64, l: u64, levels: usize, budget: u64) -> Result<StrictPlan> {
    if k < 2 || !l.is_multiple_of(k) {
        return Err(Error::Hypothesis(format!("construction B needs k | l and k > 1 (k={k}, l={l})")));
    }
    let floor = (12u128 * k as u128 * l as u128).pow(2);
    let floor = u64::try_from(floor).map_err(|_| Error::Overflow("prime floor"))?;
    const MAX_PRIMES: usize = 20_000;
    let mut pool: Vec<u64> = Vec::new();
    let next_prime = |pool: &mut Vec<u64>, idx: usize| -> Result<u64> {
        while pool.len() <= idx {
            let from = pool.last().map_or(floor + 1, |p| p + 1);
            pool.extend(find_primes(|p| (p - 1) % l == 0, 256, from, DEFAULT_SEARCH_SPAN)?);
        }
        Ok(pool[idx])
    };

    let mut plan = StrictPlan {
        levels_requested: levels,
        moduli: vec![1],
        primes: Vec::new(),
        log10_moduli: vec![0.0],
        checks: Vec::new(),
        blocked: None,
    };
    let (k_f, l10) = (k as f64, |x: f64| x.log10());
    let mut used = 0usize;
    let mut log_n = 0.0f64;
    let mut log_phi = 0.0f64;
    let mut ln_ratio = 0.0f64; // ln(φ(n)/n)
    let mut exact_n: Option<u128> = Some(1);
    let mut sum = 0.0f64;

    for t in 0..levels {
        let level = t + 1;
        let target = 0.1 * 0.5f64.powi(level as i32);
        let log_prev = log_n;
        let mut added = Vec::new();
        loop {
            if used >= MAX_PRIMES {
                return Err(Error::StrictInfeasible {
                    condition: "omega_budget".into(),
                    detail: format!("more than {MAX_PRIMES} primes needed by level {level}"),
                });
            }
            let p = next_prime(&mut pool, used)?;
            used += 1;
            added.push(p);
            log_n += l10(p as f64);
            log_phi += l10((p - 1) as f64);
            ln_ratio += (1.0 - 1.0 / p as f64).ln();
            let omega = used as f64;
            // (2n_t + n_{t+1}^{1/k}) · k^ω / φ(n_{t+1}), in log space
            let log_num = {
                let (a, b) = (l10(2.0) + log_prev, log_n / k_f);
                let (hi, lo) = if a > b { (a, b) } else { (b, a) };
                hi + l10(1.0 + 10f64.powf(lo - hi))
            };
            let second = 10f64.powf(log_num + omega * l10(k_f) - log_phi);
            let term = 2f64.powf(-omega / 4.0) + second;
            let grows = log_n > 1.0 + k_f * log_prev;
            if term < target && grows {
                sum += term;
                plan.checks.push(StrictCheck {
                    level,
                    condition: "omega_budget",
                    requirement: format!("level term {term:.3e} < {target:.3e} with ω(n_{level}) = {used}"),
                    holds: Some(true),
                });
                plan.checks.push(StrictCheck {
                    level,
                    condition: "modulus_growth",
                    requirement: format!("n_{level} = 10^{log_n:.2} > 10·n_{t}^{k}"),
                    holds: Some(true),
                });
                let ratio_ok = ln_ratio > (0.9f64).ln();
                plan.checks.push(StrictCheck {
                    level,
                    condition: "totient_ratio",
                    requirement: format!("φ(n_{level})/n_{level} = {:.6} > 9/10", ln_ratio.exp()),
                    holds: Some(ratio_ok),
                });
                if !ratio_ok {
                    return Err(Error::StrictInfeasible {
                        condition: "totient_ratio".into(),
                        detail: format!("φ(n_{level})/n_{level} fell to {:.6}", ln_ratio.exp()),
                    });
                }
                break;
            }
        }
        plan.checks.push(StrictCheck {
            level,
            condition: "prime_floor",
            requirement: format!("every new prime p satisfies {l} | p-1 and p > {floor}"),
            holds: Some(added.iter().all(|&p| is_prime(p) && p > floor && (p - 1) % l == 0)),
        });
        exact_n = exact_n.and_then(|n| added.iter().try_fold(n, |acc, &p| acc.checked_mul(p as u128)));
        match exact_n.and_then(|n| u64::try_from(n).ok()) {
            Some(n) => plan.moduli.push(n),
            None => exact_n = None,
        }
        plan.primes.push(added);
        plan.log10_moduli.push(log_n);
        if plan.blocked.is_none() && log_n > (budget as f64).log10() {
            plan.blocked = Some(budget_detail(
                level,
                log_n,
                budget,
                &format!("the omega budget needs ω(n_{level}) >= {used} primes above {floor}"),
            ));
        }
    }
    if levels > 0 {
        plan.checks.push(StrictCheck {
            level: levels,
            condition: "omega_budget",
            requirement: format!("sum over levels = {sum:.3e} < 1/10"),
            holds: Some(sum < 0.1),
        });
    }
    plan.moduli.truncate(
        plan.primes
            .iter()
            .scan(Some(1u128), |acc, ps| {
                *acc = acc.and_then(|n| ps.iter().try_fold(n, |a, &p| a.checked_mul(p as u128)));
                Some(acc.and_then(|n| u64::try_from(n).ok()))
            })
            .take_while(Option::is_some)
            .count()
            + 1,
    );
    Ok(plan)
}

/// Checks a construction-A prime list against the strict conditions,
/// returning every check (first failure via [`StrictPlan::first_failure`]).
pub fn check_strict_a_primes(k: u64, l: u64, primes: &[u64]) -> Result<Vec<StrictCheck>> {
    let params = ntlem_params(k, l)?;
    let mut checks = Vec::new();
    let mut n: f64 = 1.0;
    let mut ratio = 1.0f64;
    let mut sum = 0.0;
    for (t, &p) in primes.iter().enumerate() {
        let level = t + 1;
        checks.push(StrictCheck {
            level,
            condition: "gcd",
            requirement: format!("gcd(p_{level}-1, {}) = {}", params.gcd_modulus, params.gcd_target),
            holds: Some(params.admits_prime(p)),
        });
        if t > 0 {
            checks.push(StrictCheck {
                level,
                condition: "increasing",
                requirement: format!("p_{level} > p_{t}"),
                holds: Some(p > primes[t - 1]),
            });
        }
        checks.push(StrictCheck {
            level,
            condition: "prime_growth",
            requirement: format!("p_{level} > 30·n_{t}^{k}"),
            holds: Some(p as f64 > 30.0 * n.powi(k as i32)),
        });
        if t >= 1 {
            let term = 8.0 * k as f64 * n / (p as f64).sqrt();
            sum += term;
            checks.push(StrictCheck {
                level,
                condition: "hole_budget",
                requirement: format!("8k·n_{t}/sqrt(p_{level}) = {term:.3e}"),
                holds: Some(term < 0.1 * 0.5f64.powi(t as i32)),
            });
        }
        ratio *= 1.0 - 1.0 / p as f64;
        checks.push(StrictCheck {
            level,
            condition: "totient_ratio",
            requirement: format!("φ(n_{level})/n_{level} = {ratio:.6} > 9/10"),
            holds: Some(ratio > 0.9),
        });
        n *= p as f64;
    }
    if primes.len() >= 2 {
        checks.push(StrictCheck {
            level: primes.len(),
            condition: "hole_budget",
            requirement: format!("sum = {sum:.3e} < 1/10"),
            holds: Some(sum < 0.1),
        });
    }
    Ok(checks)
}

/// Growth requirements of the block-pair construction on a given tower
/// `n_0 = 1, n_1, ...`: `n_{t+1} > (M+1)(10n_t)^d` and
/// `Σ 2n_t/n_{t+1} < 1/5`.
pub fn check_iwanik_growth(lead_magnitude: u64, degree: usize, moduli: &[u64]) -> Vec<StrictCheck> {
    let mut checks = Vec::new();
    let mut sum = 0.0;
    for (t, w) in moduli.windows(2).enumerate() {
        let (n, n1) = (w[0] as f64, w[1] as f64);
        let need = (lead_magnitude as f64 + 1.0) * (10.0 * n).powi(degree as i32);
        checks.push(StrictCheck {
            level: t + 1,
            condition: "growth",
            requirement: format!("n_{} = {} > (M+1)(10n_{t})^{degree} = {need:.3e}", t + 1, w[1]),
            holds: Some(n1 > need),
        });
        sum += 2.0 * n / n1;
    }
    checks.push(StrictCheck {
        level: moduli.len().saturating_sub(1),
        condition: "reciprocal_sum",
        requirement: format!("sum of 2n_t/n_(t+1) = {sum:.4} < 1/5"),
        holds: Some(sum < 0.2),
    });
    checks
}

/// Whether `n` is squarefree with `l | p-1` for every prime factor.
pub(crate) fn check_b_modulus(n: u64, l: u64) -> Result<()> {
    let f = factorize(n)?;
    if !f.is_squarefree() {
        return Err(Error::Hypothesis(format!("tower modulus {n} is not squarefree")));
    }
    if let Some(p) = f.primes().find(|p| (p - 1) % l != 0) {
        return Err(Error::Hypothesis(format!(
            "tower modulus {n}: l={l} does not divide p-1 for p={p}"
        )));
    }
    Ok(())
}
