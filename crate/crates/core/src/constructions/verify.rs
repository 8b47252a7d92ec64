use num_rational::Ratio;

use crate::constructions::config::ConstructionConfig;
use crate::constructions::iwanik::{build_iwanik, zero_quota, IwanikBlocks};
use crate::constructions::residue_towers::{build_construction_a, build_construction_b};
use crate::constructions::strict::{check_iwanik_growth, check_strict_a_primes};
use crate::error::Result;
use crate::ntcore::aset::build_a_set;
use crate::ntcore::arith::{factorize, iroot, pow_mod};
use crate::ntcore::counting::power_residues;
use crate::ntcore::poly::IntPolynomial;
use crate::ntcore::primes::ntlem_params;
use crate::words::meta::{ConstructionKind, ConstructionMeta, FillPolicy, Mode};
use crate::words::pair::ViablePair;

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantCheck {
    pub name: String,
    pub level: Option<usize>,
    pub passed: bool,
    /// Asserted checks decide the verdict; the rest are reported only.
    pub asserted: bool,
    pub ratio: Option<Ratio<u128>>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantReport {
    pub kind: Option<ConstructionKind>,
    pub mode: Option<Mode>,
    pub checks: Vec<InvariantCheck>,
}

impl InvariantReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.asserted)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvariantCheck> {
        self.checks.iter().filter(|c| c.asserted && !c.passed)
    }

    pub fn find(&self, name: &str, level: Option<usize>) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.name == name && c.level == level)
    }

    fn push(&mut self, name: &str, level: Option<usize>, passed: bool, asserted: bool, detail: String) {
        self.checks.push(InvariantCheck {
            name: name.into(),
            level,
            passed,
            asserted,
            ratio: None,
            detail,
        });
    }

    fn push_ratio(&mut self, name: &str, level: usize, ratio: Ratio<u128>, floor: Ratio<u128>, asserted: bool) {
        self.checks.push(InvariantCheck {
            name: name.into(),
            level: Some(level),
            passed: ratio >= floor,
            asserted,
            ratio: Some(ratio),
            detail: format!("{}/{} (lower bound {}/{})", ratio.numer(), ratio.denom(), floor.numer(), floor.denom()),
        });
    }
}

/// Configuration that rebuilds a pair from its recorded metadata.
pub fn config_from_meta(meta: &ConstructionMeta) -> Option<ConstructionConfig> {
    let fill = meta.fill().unwrap_or(FillPolicy::Zero);
    let tower = meta.tower.get(1..)?.to_vec();
    let levels = tower.len();
    Some(match (meta.kind, meta.mode) {
        (ConstructionKind::A, Mode::Relaxed) => {
            let primes = meta.tower.windows(2).map(|w| w[1] / w[0]).collect();
            ConstructionConfig::relaxed_a(meta.k?, meta.l?, primes, fill)
        }
        (ConstructionKind::A, Mode::Strict) => ConstructionConfig::strict_a(meta.k?, meta.l?, levels, fill),
        (ConstructionKind::B, Mode::Relaxed) => ConstructionConfig::relaxed_b(meta.k?, meta.l?, tower, fill),
        (ConstructionKind::B, Mode::Strict) => ConstructionConfig::strict_b(meta.k?, meta.l?, levels, fill),
        (ConstructionKind::Iwanik, mode) => {
            ConstructionConfig::iwanik(IntPolynomial::new(meta.poly.clone()), tower, mode)
        }
    })
}

/// Re-checks a constructed pair: hole locations, refinement, checkpoints,
/// replay determinism and the quantitative lower bounds (asserted in
/// strict mode, reported in relaxed mode).
pub fn verify_construction_invariants(pair: &ViablePair) -> Result<InvariantReport> {
    let mut report = InvariantReport {
        kind: pair.meta().map(|m| m.kind),
        mode: pair.meta().map(|m| m.mode),
        checks: Vec::new(),
    };
    let viability = pair.viability_check();
    report.push(
        "viability",
        None,
        viability.viable,
        true,
        match viability.violation {
            Some(v) => format!("{:?} at level {} position {}", v.kind, v.level, v.position),
            None => "refinement and boundary resolution hold".into(),
        },
    );
    let Some(meta) = pair.meta() else {
        report.push("metadata", None, false, false, "no construction metadata; only generic checks ran".into());
        return Ok(report);
    };
    let strict = meta.mode == Mode::Strict;
    report.push(
        "tower",
        None,
        meta.tower == pair.moduli(),
        true,
        format!("recorded {:?}, levels {:?}", meta.tower, pair.moduli()),
    );

    let replay = config_from_meta(meta).map(|cfg| match meta.kind {
        ConstructionKind::A => build_construction_a(&cfg).map(|p| (p, None)),
        ConstructionKind::B => build_construction_b(&cfg).map(|p| (p, None)),
        ConstructionKind::Iwanik => build_iwanik(&cfg).map(|(p, b)| (p, Some(b))),
    });
    let blocks = match replay {
        Some(Ok((rebuilt, blocks))) => {
            report.push("replay", None, &rebuilt == pair, true, "rebuilding from the metadata reproduces the pair".into());
            blocks
        }
        Some(Err(e)) => {
            report.push("replay", None, false, true, format!("rebuild failed: {e}"));
            None
        }
        None => {
            report.push("replay", None, false, true, "metadata is incomplete".into());
            None
        }
    };

    match meta.kind {
        ConstructionKind::A | ConstructionKind::B => {
            let (k, l) = (meta.k.unwrap_or(0), meta.l.unwrap_or(0));
            check_residue_tower(&mut report, pair, meta.kind, k, l, strict)?;
        }
        ConstructionKind::Iwanik => {
            if let Some(blocks) = &blocks {
                check_blocks(&mut report, blocks, strict);
            }
        }
    }
    Ok(report)
}

fn check_residue_tower(
    report: &mut InvariantReport,
    pair: &ViablePair,
    kind: ConstructionKind,
    k: u64,
    l: u64,
    strict: bool,
) -> Result<()> {
    let expected: Vec<u64> = pair.moduli()[1..].iter().map(|&n| iroot(n, k as u32)).collect();
    report.push(
        "checkpoints",
        None,
        pair.checkpoints() == expected,
        true,
        format!("C_t = floor(n_(t+1)^(1/{k})) = {expected:?}"),
    );
    let k_reduced = if kind == ConstructionKind::A { Some(ntlem_params(k, l)?.k_reduced) } else { None };
    for (t, lvl) in pair.levels().iter().enumerate().skip(1) {
        let holes = lvl.word.hole_positions();
        let f = factorize(lvl.n)?;
        let phi = f.phi() as u128;
        match kind {
            ConstructionKind::A => {
                let r = power_residues(lvl.n, k, true);
                let bad = holes.iter().find(|&&h| !r.contains(h));
                report.push(
                    "holes_in_unit_powers",
                    Some(t),
                    bad.is_none(),
                    true,
                    match bad {
                        Some(h) => format!("hole at {h} is not a unit {k}-th power residue"),
                        None => format!("{} holes, all unit {k}-th power residues", holes.len()),
                    },
                );
                // ?_t / (φ(n_t)/k'^t)
                let kr = (k_reduced.unwrap() as u128).pow(t as u32);
                report.push_ratio("hole_count", t, Ratio::new(holes.len() as u128 * kr, phi), Ratio::new(9, 10), strict);
            }
            _ => {
                let a = build_a_set(lvl.n, k, l)?.set;
                let bad = holes.iter().find(|&&h| !a.contains(h));
                report.push(
                    "holes_in_a_set",
                    Some(t),
                    bad.is_none(),
                    true,
                    match bad {
                        Some(h) => format!("hole at {h} lies outside A_{t}"),
                        None => format!("{} holes, all inside A_{t} (|A_{t}| = {})", holes.len(), a.len()),
                    },
                );
                let open_power = (0..=iroot(lvl.n, k as u32))
                    .map(|i| pow_mod(i, k, lvl.n))
                    .find(|&pos| lvl.word.get(pos).is_hole());
                report.push(
                    "powers_filled",
                    Some(t),
                    open_power.is_none(),
                    true,
                    match open_power {
                        Some(p) => format!("power position {p} is still a hole"),
                        None => "no hole at any i^k with i <= n^(1/k)".into(),
                    },
                );
                // ?_t · k^ω / φ(n_t)
                let kw = (k as u128).pow(f.omega());
                report.push_ratio("hole_count", t, Ratio::new(holes.len() as u128 * kw, phi), Ratio::new(9, 10), strict);
            }
        }
    }
    if kind == ConstructionKind::A {
        let primes: Vec<u64> = pair.moduli().windows(2).map(|w| w[1] / w[0]).collect();
        for c in check_strict_a_primes(k, l, &primes)? {
            report.push(c.condition, Some(c.level), c.holds.unwrap_or(false), strict || c.condition == "gcd", c.requirement);
        }
    }
    Ok(())
}

fn check_blocks(report: &mut InvariantReport, blocks: &IwanikBlocks, strict: bool) {
    for (t, step) in blocks.steps.iter().enumerate() {
        let (lo, hi) = (&blocks.levels[t], &blocks.levels[t + 1]);
        let m = step.m as usize;
        let endpoints = step.eps[0] == 0 && step.eps[m - 1] == 1 && step.eps_prime[0] == 0 && step.eps_prime[m - 1] == 1;
        report.push("endpoints", Some(t), endpoints, true, "sign words start with 0 and end with 1".into());
        let interior = (1..m - 1).all(|i| step.eps_prime[i] == 1 - step.eps[i]);
        report.push("interior_complement", Some(t), interior, true, "eps' is the interior complement of eps".into());
        let zeros = step.eps.iter().filter(|&&e| e == 0).count() as u64;
        report.push(
            "zero_quota",
            Some(t),
            zeros == zero_quota(step.m),
            true,
            format!("{zeros} zeros, quota {}", zero_quota(step.m)),
        );
        report.push(
            "difference_growth",
            Some(t + 1),
            hi.diff.len() >= (step.m - 2) * lo.diff.len(),
            true,
            format!("|A_{}| = {} >= ({} - 2)·{}", t + 1, hi.diff.len(), step.m, lo.diff.len()),
        );
        let pins_ok = step.pins.iter().all(|&(b, s)| step.eps[b as usize] == s);
        report.push("pins", Some(t), pins_ok, true, format!("{} pinned blocks", step.pins.len()));
    }
    for (t, lvl) in blocks.levels.iter().enumerate().skip(1) {
        report.push_ratio("difference_density", t, Ratio::new(lvl.diff.len() as u128, lvl.n as u128), Ratio::new(4, 5), strict);
    }
    let moduli: Vec<u64> = blocks.levels.iter().map(|b| b.n).collect();
    for c in check_iwanik_growth(blocks.poly.leading_magnitude(), blocks.poly.degree(), &moduli) {
        report.push(c.condition, Some(c.level), c.holds.unwrap_or(false), strict, c.requirement);
    }
}
