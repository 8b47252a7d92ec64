//! Subcommand implementations: parse inputs, call the library, render results.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use thiserror::Error;
use toeplitz_core::constructions::{
    build_construction_a, build_construction_b, build_iwanik, config_from_meta, verify_construction_invariants,
    ConstructionConfig, IwanikBlocks,
};
use toeplitz_core::ntcore::{
    build_a_set, dickson, is_permutation_mod, lift_criterion, power_residues, rho, rho_max, weil_count, IntPolynomial,
};
use toeplitz_core::orbitstats::{
    almost_prime_obstruction, ap_frequency, checkpoint_report, convergence_probe, cylinder_witness_search,
    density_verdict, equidistribution_check, iwanik_ap_check, residues_covered, IntervalValue, OrbitEvaluator,
    Rational, SignVerdict,
};
use toeplitz_core::words::{read_tpv, to_tpv_string, FillPolicy, Mode, ViablePair};

use crate::args::*;
use crate::format::*;
use crate::poly::{parse_polynomial, PolyError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] toeplitz_core::Error),
    #[error("polynomial '{text}': {source}")]
    Poly { text: String, source: PolyError },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    /// The command ran but its verdict is negative; the report was already written.
    #[error("{0}")]
    Verdict(String),
}

impl CliError {
    /// Process exit status: 1 for negative verdicts, 2 for input errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verdict(_) => 1,
            CliError::Core(
                toeplitz_core::Error::WeilViolation { .. }
                | toeplitz_core::Error::StrictInfeasible { .. }
                | toeplitz_core::Error::PinConflict { .. }
                | toeplitz_core::Error::SearchExhausted { .. },
            ) => 1,
            _ => 2,
        }
    }

    /// `<class>:<kind>` prefix for standard error.
    pub fn tag(&self) -> String {
        let class = if self.exit_code() == 1 { "verdict" } else { "input" };
        let kind = match self {
            CliError::Core(e) => e.kind(),
            CliError::Poly { .. } => "polynomial",
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Csv(_) => "io",
            CliError::Verdict(_) => "failed",
        };
        format!("{class}:{kind}")
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn poly_arg(text: &str) -> CliResult<IntPolynomial> {
    parse_polynomial(text).map_err(|source| CliError::Poly { text: text.into(), source })
}

fn load_pair(path: &Path) -> CliResult<ViablePair> {
    if !path.exists() {
        return Err(CliError::Io {
            path: path.display().to_string(),
            source: io::Error::new(io::ErrorKind::NotFound, "no such file"),
        });
    }
    Ok(read_tpv(path)?)
}

/// Writes to the file if given, otherwise to standard output.
fn emit(output: Option<&PathBuf>, bytes: &[u8]) -> CliResult {
    match output {
        Some(path) => fs::write(path, bytes).map_err(io_err(path)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(io_err(Path::new("<stdout>")))
        }
    }
}

fn emit_json(output: Option<&PathBuf>, mut report: Value) -> CliResult {
    report["report_version"] = json!(REPORT_VERSION);
    let mut text = serde_json::to_string_pretty(&report).expect("json values serialise");
    text.push('\n');
    emit(output, text.as_bytes())
}

fn strictly_increasing(xs: &[u64], what: &str) -> CliResult {
    if xs.is_empty() || xs[0] == 0 || xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(usage(format!("{what} must be positive and strictly increasing")));
    }
    Ok(())
}

fn mode_of(m: &ModeArgs) -> Mode {
    if m.strict {
        Mode::Strict
    } else {
        Mode::Relaxed
    }
}

pub fn run(cli: Cli) -> CliResult {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| usage(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::ConstructA(a) => construct_tower(a, true),
        Command::ConstructB(a) => construct_tower(a, false),
        Command::ConstructIwanik(a) => construct_iwanik(a),
        Command::Nt(c) => nt(c),
        Command::Average(a) => average(a),
        Command::Checkpoints(a) => checkpoints(a),
        Command::Probe(a) => probe(a),
        Command::Equi(a) => equi(a),
        Command::Density(a) => density(a),
        Command::Ap(a) => ap(a),
        Command::Verify(a) => verify(a),
    }
}

fn construct_tower(a: ConstructTowerArgs, is_a: bool) -> CliResult {
    let fill = match a.fill {
        FillName::Zero => FillPolicy::Zero,
        FillName::One => FillPolicy::One,
        FillName::Seeded => FillPolicy::Seeded(a.seed.ok_or_else(|| usage("--fill seeded needs --seed"))?),
    };
    let overrides = if is_a { &a.primes } else { &a.tower };
    let misplaced = if is_a { &a.tower } else { &a.primes };
    if !misplaced.is_empty() {
        return Err(usage(if is_a { "construct-a takes --primes, not --tower" } else { "construct-b takes --tower, not --primes" }));
    }
    let cfg = match (mode_of(&a.mode), is_a) {
        (Mode::Strict, _) if !overrides.is_empty() => {
            return Err(usage("--strict derives every constant; drop --primes/--tower"));
        }
        (Mode::Strict, _) => {
            let levels = a.levels.ok_or_else(|| usage("--strict needs --levels"))?;
            if is_a {
                ConstructionConfig::strict_a(a.k, a.l, levels, fill)
            } else {
                ConstructionConfig::strict_b(a.k, a.l, levels, fill)
            }
        }
        (Mode::Relaxed, true) => ConstructionConfig::relaxed_a(a.k, a.l, a.primes.clone(), fill),
        (Mode::Relaxed, false) => ConstructionConfig::relaxed_b(a.k, a.l, a.tower.clone(), fill),
    };
    let cfg = match a.budget {
        Some(b) => cfg.with_budget(b),
        None => cfg,
    };
    let pair = if is_a { build_construction_a(&cfg)? } else { build_construction_b(&cfg)? };
    emit(a.output.as_ref(), to_tpv_string(&pair).as_bytes())
}

fn construct_iwanik(a: ConstructIwanikArgs) -> CliResult {
    let poly = poly_arg(&a.poly)?;
    let cfg = ConstructionConfig::iwanik(poly, a.tower, mode_of(&a.mode));
    let cfg = match a.budget {
        Some(b) => cfg.with_budget(b),
        None => cfg,
    };
    let (pair, _) = build_iwanik(&cfg)?;
    emit(a.output.as_ref(), to_tpv_string(&pair).as_bytes())
}

fn join(xs: impl IntoIterator<Item = u64>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn nt(c: NtCommand) -> CliResult {
    let text = match c {
        NtCommand::Rho { k, n, big_n, a } => {
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            match a {
                Some(a) => rho(k, big_n.unwrap_or(n), n, a).to_string(),
                None => {
                    if big_n.is_some_and(|b| b != n) {
                        return Err(usage("the maximum over a is taken over one full period; omit --N or pass --a"));
                    }
                    rho_max(k, n).to_string()
                }
            }
        }
        NtCommand::Residues { n, k, units, poly } => {
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            match (k, poly) {
                (Some(k), None) => {
                    let set = power_residues(n, k, units);
                    format!("{} [{}]", set.len(), join(set.iter()))
                }
                (None, Some(p)) => {
                    let cov = residues_covered(&poly_arg(&p)?, n)?;
                    format!("{} of {} [missing: {}]", cov.attained.len(), n, join(cov.missing.iter().copied()))
                }
                _ => return Err(usage("nt residues needs exactly one of --k or --poly")),
            }
        }
        NtCommand::Perm { poly, n, lift } => {
            let p = poly_arg(&poly)?;
            if lift {
                let ok = lift_criterion(&p, n)?;
                format!("{} mod {}²: {}", p.render("m"), n, if ok { "PERMUTATION" } else { "NOT-PERMUTATION" })
            } else {
                let ok = is_permutation_mod(&p, n)?;
                format!("{} mod {}: {}", p.render("m"), n, if ok { "PERMUTATION" } else { "NOT-PERMUTATION" })
            }
        }
        NtCommand::Dickson { n, alpha } => {
            let p = dickson(n, alpha)?;
            format!("{} {:?}", p.render("x"), p.coefficients())
        }
        NtCommand::Weil { p, k, l, a } => {
            let w = weil_count(p, k, l, a)?;
            let status = if w.asserted { "OK" } else { "NOT-ASSERTED" };
            format!("{} (bound {:.6}) {}", w.count, w.bound, status)
        }
        NtCommand::Aset { n, k, l, list } => {
            let s = build_a_set(n, k, l)?;
            let mut text = format!(
                "|A| = {} (omega {}, phi {}, lower bound {:.6}, {})",
                s.len(),
                s.omega,
                s.phi,
                s.est1_bound,
                if s.strict { "bound guaranteed" } else { "bound not guaranteed" }
            );
            if list {
                text.push_str(&format!("\n[{}]", join(s.set.iter())));
            }
            text
        }
    };
    emit(None, format!("{text}\n").as_bytes())
}

fn series_gnuplot(path: &Path, title: &str, rows: &[SeriesRow]) -> CliResult {
    fs::write(path, gnuplot_script(title, rows)).map_err(io_err(path))
}

fn average(a: AverageArgs) -> CliResult {
    let pair = load_pair(&a.pair)?;
    let poly = poly_arg(&a.poly)?;
    let f = parse_cylinder(&a.cylinder).map_err(usage)?;
    strictly_increasing(&a.big_n, "--N")?;
    let eval = OrbitEvaluator::new(&pair, &f);
    let mut values: Vec<(i128, u64, IntervalValue)> = Vec::new();
    for &shift in &a.shift {
        for &n in &a.big_n {
            values.push((shift, n, eval.average(&poly, shift, n)?));
        }
    }
    let rows: Vec<SeriesRow> =
        values.iter().map(|(shift, n, v)| SeriesRow { shift: *shift, n: *n, value: v, extra: vec![] }).collect();
    let mut buf = Vec::new();
    write_series_csv(&mut buf, &rows, &[])?;
    emit(a.output.as_ref(), &buf)?;
    if let Some(path) = &a.gnuplot {
        series_gnuplot(path, &format!("averages of {} along {}", a.cylinder, poly.render("m")), &rows)?;
    }
    Ok(())
}

fn sign_label(s: SignVerdict) -> &'static str {
    match s {
        SignVerdict::Positive => "positive",
        SignVerdict::Negative => "negative",
        SignVerdict::Undetermined => "undetermined",
    }
}

fn checkpoints(a: CheckpointArgs) -> CliResult {
    let pair = load_pair(&a.pair)?;
    let poly = a.poly.as_deref().map(poly_arg).transpose()?;
    let rep = checkpoint_report(&pair, poly.as_ref())?;
    let entries: Vec<Value> = rep
        .entries
        .iter()
        .map(|e| {
            json!({
                "level": e.level,
                "checkpoint": e.checkpoint,
                "average": e.average.as_ref().map(interval_json),
                "sign": sign_label(e.sign),
                "expected": sign_label(e.expected),
                "gap": rational_json(&e.gap),
                "matches": e.matches_expected(),
            })
        })
        .collect();
    emit_json(
        a.output.as_ref(),
        json!({
            "command": "checkpoints",
            "poly": rep.poly.render("m"),
            "entries": entries,
            "signs_as_expected": rep.signs_as_expected(),
            "alternates": rep.alternates(),
            "min_gap": rep.min_gap().as_ref().map(rational_json),
        }),
    )
}

fn probe(a: ProbeArgs) -> CliResult {
    let pair = load_pair(&a.pair)?;
    let poly = poly_arg(&a.poly)?;
    let f = parse_cylinder(&a.cylinder).map_err(usage)?;
    strictly_increasing(&a.big_n, "--N")?;
    let t = a.level.unwrap_or(pair.top_index());
    let rep = convergence_probe(&pair, &poly, &f, &a.shifts, &a.big_n, t)?;
    let rows: Vec<SeriesRow> = rep
        .samples
        .iter()
        .map(|s| {
            // oscillation from the previous grid point of the same shift
            let osc = rep.oscillations.iter().find(|o| o.shift == s.shift && o.to == s.n);
            let extra = match osc {
                Some(o) => vec![
                    rational_text(&o.oscillation),
                    rational_text(&o.finite_bound),
                    o.finite_holds.to_string(),
                    o.asymptotic_holds.map_or(String::new(), |b| b.to_string()),
                ],
                None => vec![String::new(); 4],
            };
            SeriesRow { shift: s.shift, n: s.n, value: &s.value, extra }
        })
        .collect();
    let mut buf = Vec::new();
    write_series_csv(&mut buf, &rows, &["oscillation", "finite_bound", "finite_holds", "asymptotic_holds"])?;
    emit(a.output.as_ref(), &buf)?;
    if let Some(path) = &a.gnuplot {
        series_gnuplot(path, &format!("averages of {} along {}", a.cylinder, poly.render("m")), &rows)?;
    }
    eprintln!(
        "level {} epsilon {} ({})",
        rep.level,
        rational_text(&rep.epsilon),
        if rep.density.exact { "exact" } else { "sampled" }
    );
    if rep.bounds_hold() {
        Ok(())
    } else {
        Err(CliError::Verdict("an oscillation exceeds its bound".into()))
    }
}

fn equi(a: EquiArgs) -> CliResult {
    let pair = load_pair(&a.pair)?;
    let poly = poly_arg(&a.poly)?;
    let f = parse_cylinder(&a.cylinder).map_err(usage)?;
    let tol = parse_rational(&a.tol).map_err(usage)?;
    if tol < Rational::from_integer(0) {
        return Err(usage("--tol must be non-negative"));
    }
    let rep = equidistribution_check(&pair, &poly, &f, tol)?;
    let identities: Vec<Value> = rep
        .identities
        .iter()
        .map(|id| {
            json!({
                "level": id.level,
                "shift": id.shift.to_string(),
                "along_poly": interval_json(&id.along_poly),
                "plain": interval_json(&id.plain),
                "worst_gap": rational_json(&id.worst_gap),
                "bound": rational_json(&id.bound),
                "holds": id.holds,
            })
        })
        .collect();
    emit_json(
        a.output.as_ref(),
        json!({
            "command": "equi",
            "poly": poly.render("m"),
            "cylinder": a.cylinder,
            "along_poly": interval_json(&rep.along_poly),
            "measure_estimate": interval_json(&rep.measure_estimate),
            "tolerance": rational_json(&rep.tolerance),
            "distance": rational_json(&rep.distance),
            "passed": rep.passed,
            "identities": identities,
            "ok": rep.ok(),
        }),
    )?;
    if rep.ok() {
        Ok(())
    } else {
        Err(CliError::Verdict("orbit average differs from the measure estimate".into()))
    }
}

fn density(a: DensityArgs) -> CliResult {
    if let Some(l) = a.almost_prime {
        let o = almost_prime_obstruction(l, &a.tower)?;
        return emit_json(
            a.output.as_ref(),
            json!({
                "command": "density",
                "almost_prime": l,
                "verdict": "NOT-DENSE",
                "witness": o.witness,
                "big_omega": o.big_omega,
                "minimal_witness": o.minimal_witness,
                "uncovered_residue": o.uncovered_residue,
            }),
        );
    }
    let (Some(pair_path), Some(poly_text)) = (&a.pair, &a.poly) else {
        return Err(usage("density needs --pair and --poly, or --almost-prime with --tower"));
    };
    let pair = load_pair(pair_path)?;
    let poly = poly_arg(poly_text)?;
    let t = a.level.unwrap_or(pair.top_index());
    let rep = density_verdict(&pair, &poly, t)?;
    let witness = cylinder_witness_search(&pair, &poly, a.witness_radius)?;
    emit_json(
        a.output.as_ref(),
        json!({
            "command": "density",
            "poly": poly.render("m"),
            "verdict": rep.verdict.label(),
            "level": rep.level,
            "n": rep.n,
            "essential_periods": rep.essential_periods,
            "obstruction": rep.obstruction.as_ref().map(|c| json!({"modulus": c.modulus, "missing": c.missing})),
            "permutation_mod_n": rep.permutation_mod_n,
            "certificate_unknown": rep.certificate_unknown,
            "witness_search": {
                "max_radius": witness.max_radius,
                "cylinders": witness.cylinders,
                "missing": witness.missing.iter().map(|(r, w)| json!({"radius": r, "window": w})).collect::<Vec<_>>(),
                "ok": witness.ok(),
            },
        }),
    )
}

fn ap_pairs(blocks: &IwanikBlocks, t: Option<usize>, s: Option<usize>) -> CliResult<Vec<(usize, usize)>> {
    let h = blocks.height();
    Ok(match (t, s) {
        (Some(t), Some(s)) => vec![(t, s)],
        (None, None) => (0..h).flat_map(|t| (t + 1..=h).map(move |s| (t, s))).collect(),
        _ => return Err(usage("pass both --t and --s, or neither")),
    })
}

fn ap(a: ApArgs) -> CliResult {
    if let (Some(b), Some(c)) = (&a.block, &a.word) {
        let v = ap_frequency(&parse_bits(b).map_err(usage)?, &parse_bits(c).map_err(usage)?)?;
        return emit_json(
            a.output.as_ref(),
            json!({ "command": "ap", "block": b, "word": c, "value": ratio_u64_json(*v.numer(), *v.denom()) }),
        );
    }
    let blocks = if let Some(path) = &a.pair {
        let pair = load_pair(path)?;
        let cfg = pair
            .meta()
            .and_then(config_from_meta)
            .filter(|c| c.poly.is_some())
            .ok_or_else(|| usage("pair file does not carry block-pair construction metadata"))?;
        build_iwanik(&cfg)?.1
    } else if let Some(p) = &a.poly {
        build_iwanik(&ConstructionConfig::iwanik(poly_arg(p)?, a.tower.clone(), Mode::Relaxed))?.1
    } else {
        return Err(usage("ap needs --block/--word, --pair, or --poly with --tower"));
    };
    let mut reports = Vec::new();
    let mut all = true;
    for (t, s) in ap_pairs(&blocks, a.t, a.s)? {
        let rep = iwanik_ap_check(&blocks, t, s)?;
        all &= rep.all_match();
        let entries: Vec<Value> = rep
            .entries
            .iter()
            .map(|e| {
                json!({
                    "eps": e.eps,
                    "eps_prime": e.eps_prime,
                    "value": ratio_u64_json(*e.value.numer(), *e.value.denom()),
                    "expected": ratio_u64_json(*e.expected.numer(), *e.expected.denom()),
                    "matches": e.matches(),
                })
            })
            .collect();
        reports.push(json!({
            "t": t,
            "s": s,
            "entries": entries,
            "max_deviation": rational_json(&rep.max_deviation),
            "all_match": rep.all_match(),
        }));
    }
    emit_json(
        a.output.as_ref(),
        json!({ "command": "ap", "poly": blocks.poly.render("m"), "reports": reports, "all_match": all }),
    )?;
    if all {
        Ok(())
    } else {
        Err(CliError::Verdict("aligned frequencies differ from the closed form".into()))
    }
}

fn verify(a: PairArg) -> CliResult {
    let pair = load_pair(&a.pair)?;
    let rep = verify_construction_invariants(&pair)?;
    let checks: Vec<Value> = rep
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "level": c.level,
                "passed": c.passed,
                "asserted": c.asserted,
                "ratio": c.ratio.map(|r| json!({
                    "exact": format!("{}/{}", r.numer(), r.denom()),
                    "decimal": format!("{:.9}", *r.numer() as f64 / *r.denom() as f64),
                })),
                "detail": c.detail,
            })
        })
        .collect();
    emit_json(
        None,
        json!({
            "command": "verify",
            "kind": rep.kind,
            "mode": rep.mode,
            "checks": checks,
            "ok": rep.ok(),
        }),
    )?;
    if rep.ok() {
        Ok(())
    } else {
        let names: Vec<String> = rep.failures().map(|c| c.name.clone()).collect();
        Err(CliError::Verdict(format!("invariants failed: {}", names.join(", "))))
    }
}
