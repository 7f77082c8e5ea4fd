use std::fmt;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use bdheight::asymptotics::{
    bound_constants, check_concentration, check_mean_sandwich, check_mean_sandwich_for, check_peak_bounds_for,
    check_tail_bound, convergence_table, f_rho, solve_alpha, stirling_ratio, BoundReport, CheckStatus,
    OffsetRounding, LARGE_N_THRESHOLD,
};
use bdheight::exactdist::height_distribution;
use bdheight::oracle::height_dist_oracle_with;
use bdheight::oracle::OracleConfig;
use bdheight::simulate::{pilot, run_batch, SimulationConfig, SimulationMode};
use bdheight::{par, ModelParams};

use crate::artifact::{fmt_num, fmt_opt, read_manifest, Artifact, Format, Table};
use crate::{Cli, Command, Mode, Output, Rates, Rounding};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Check(_) => ExitCode::from(1),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Check(m) => f.write_str(m),
        }
    }
}

impl From<bdheight::Error> for CliError {
    fn from(e: bdheight::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// A rendered artifact plus whether its checks passed.
struct Run {
    artifact: Artifact,
    format: Format,
    output: Option<std::path::PathBuf>,
    ok: bool,
    failure: Option<String>,
}

pub fn execute(cli: Cli, raw_args: &[String]) -> CliResult<ExitCode> {
    if let Command::Replay { artifact } = &cli.command {
        return replay(artifact);
    }
    let run = run_command(cli, strip_output(raw_args))?;
    let text = run.artifact.render(run.format);
    match &run.output {
        Some(path) => fs::write(path, &text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if run.ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::Check(run.failure.unwrap_or_else(|| "check failed".into())))
    }
}

fn strip_output(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        if a == "--output" || a == "-o" {
            skip = true;
        } else if !a.starts_with("--output=") {
            out.push(a.clone());
        }
    }
    out
}

fn params_of(n: usize, rates: &Rates) -> CliResult<ModelParams> {
    Ok(match (rates.rho, rates.nu, rates.mu) {
        (Some(rho), None, None) => ModelParams::from_rho(n, rho)?,
        (None, Some(nu), Some(mu)) => ModelParams::new(n, nu, mu)?,
        _ => return Err(CliError::Usage("give either --rho or both --nu and --mu".into())),
    })
}

fn run_command(cli: Cli, args: Vec<String>) -> CliResult<Run> {
    let finish = |artifact: Artifact, out: Output, ok: bool, failure: Option<String>| Run {
        artifact,
        format: out.format,
        output: out.output,
        ok,
        failure,
    };
    match cli.command {
        Command::Dist { n, rates, out } => {
            let p = params_of(n, &rates)?;
            Ok(finish(dist(&p, args), out, true, None))
        }
        Command::Alpha { rho, out } => Ok(finish(alpha(rho, args)?, out, true, None)),
        Command::Verify {
            rho,
            n,
            strict,
            offset_rounding,
            oracle_max_n,
            corrupt_c2,
            out,
        } => {
            let opts = VerifyOptions {
                strict,
                rounding: match offset_rounding {
                    Rounding::Floor => OffsetRounding::Floor,
                    Rounding::Ceil => OffsetRounding::Ceil,
                },
                oracle_max_n,
                corrupt_c2,
            };
            let (artifact, failures) = verify(&rho, &n, &opts, args)?;
            let ok = failures.is_empty();
            let msg = (!ok).then(|| format!("{} asserted check(s) failed:\n{}", failures.len(), failures.join("\n")));
            Ok(finish(artifact, out, ok, msg))
        }
        Command::Simulate {
            n,
            rates,
            samples,
            seed,
            mode,
            workers,
            delta,
            max_steps,
            assert,
            out,
        } => {
            let p = params_of(n, &rates)?;
            let mode = match mode {
                Mode::Ladder => SimulationMode::Ladder,
                Mode::JumpChain => SimulationMode::JumpChain,
                Mode::FullCtmc => SimulationMode::FullCtmc,
            };
            let mut cfg = SimulationConfig::new(p, samples, seed)
                .mode(mode)
                .dkw_delta(delta)
                .max_steps(max_steps);
            if let Some(w) = workers {
                cfg = cfg.workers(w);
            }
            cfg.validate()?;
            let (artifact, dkw_pass, sup, eps) = simulate(&cfg, args)?;
            let ok = dkw_pass || !assert;
            let msg = (!ok).then(|| format!("DKW check failed: sup distance {sup} > {eps}"));
            Ok(finish(artifact, out, ok, msg))
        }
        Command::Sweep { rho, n, out } => Ok(finish(sweep(rho, &n, args)?, out, true, None)),
        Command::Replay { .. } => unreachable!("handled by execute"),
    }
}

fn dist(p: &ModelParams, args: Vec<String>) -> Artifact {
    let d = height_distribution(p);
    let survival: Vec<f64> = (1..=p.n()).map(|k| d.survival(k)).collect();
    let rows = (1..=p.n())
        .map(|k| {
            vec![
                k.to_string(),
                fmt_num(survival[k - 1]),
                fmt_num(d.pmf[k - 1]),
                fmt_num(d.log_survival[k - 1]),
            ]
        })
        .collect();
    Artifact {
        command: "dist",
        args,
        params: serde_json::to_value(p).expect("serializable"),
        seed: None,
        data: json!({
            "n": p.n(),
            "rho": p.rho(),
            "mean": d.mean,
            "variance": d.variance,
            "survival": survival,
            "log_survival": d.log_survival,
            "pmf": d.pmf,
        }),
        table: Table {
            header: vec!["k", "survival", "pmf", "log_survival"],
            rows,
            meta: vec![
                ("mean".into(), fmt_num(d.mean)),
                ("variance".into(), fmt_num(d.variance)),
            ],
        },
    }
}

fn alpha(rho: f64, args: Vec<String>) -> CliResult<Artifact> {
    if rho <= 0.0 {
        return Err(CliError::Usage(format!("rho must be positive, got {rho}")));
    }
    let f = f_rho(rho)?;
    let data = if rho < 1.0 {
        let s = solve_alpha(rho)?;
        let c = bound_constants(rho)?;
        json!({
            "rho": rho, "f": f, "alpha": s.alpha, "residual": s.residual,
            "iterations": s.iterations, "bracket": [s.bracket.0, s.bracket.1],
            "c1": c.c1, "c2": c.c2, "c3": c.c3, "note": Value::Null,
        })
    } else {
        json!({
            "rho": rho, "f": f, "alpha": Value::Null, "residual": Value::Null,
            "iterations": Value::Null, "bracket": Value::Null,
            "c1": Value::Null, "c2": Value::Null, "c3": Value::Null,
            "note": "rho >= 1: f(rho) = 1; alpha and the bound constants are not applicable",
        })
    };
    let cell = |key: &str| data[key].as_f64().map(fmt_num).unwrap_or_else(|| "n/a".into());
    let row = ["rho", "f", "alpha", "residual", "c1", "c2", "c3"].iter().map(|k| cell(k)).collect();
    Ok(Artifact {
        command: "alpha",
        args,
        params: json!({ "rho": rho }),
        seed: None,
        table: Table {
            header: vec!["rho", "f", "alpha", "residual", "c1", "c2", "c3"],
            rows: vec![row],
            meta: data["note"].as_str().map(|s| vec![("note".into(), s.to_string())]).unwrap_or_default(),
        },
        data,
    })
}

pub struct VerifyOptions {
    pub strict: bool,
    pub rounding: OffsetRounding,
    pub oracle_max_n: usize,
    pub corrupt_c2: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct VerifyEntry {
    check: String,
    n: usize,
    rho: f64,
    value: f64,
    lower: Option<f64>,
    upper: Option<f64>,
    margin: f64,
    status: CheckStatus,
    /// False for informational entries (small N without --strict).
    asserted: bool,
}

impl VerifyEntry {
    fn from_report(r: &BoundReport, asserted: bool) -> Self {
        let check = serde_json::to_value(r.id).expect("serializable");
        Self {
            check: check.as_str().unwrap_or_default().to_string(),
            n: r.n,
            rho: r.rho,
            value: r.value,
            lower: r.lower,
            upper: r.upper,
            margin: r.margin,
            status: r.status,
            asserted,
        }
    }

    fn simple(check: &str, n: usize, rho: f64, value: f64, lower: Option<f64>, upper: Option<f64>, asserted: bool) -> Self {
        let margin = lower
            .map_or(f64::INFINITY, |lo| value - lo)
            .min(upper.map_or(f64::INFINITY, |hi| hi - value));
        Self {
            check: check.into(),
            n,
            rho,
            value,
            lower,
            upper,
            margin,
            status: if margin >= 0.0 { CheckStatus::Pass } else { CheckStatus::Fail },
            asserted,
        }
    }

    fn is_failure(&self) -> bool {
        self.asserted && self.status == CheckStatus::Fail
    }

    fn describe(&self) -> String {
        format!(
            "{} at N={} rho={}: value {} not in [{}, {}] (margin {})",
            self.check,
            self.n,
            self.rho,
            self.value,
            fmt_opt(self.lower),
            fmt_opt(self.upper),
            self.margin
        )
    }
}

fn verify(rhos: &[f64], ns: &[usize], opts: &VerifyOptions, args: Vec<String>) -> CliResult<(Artifact, Vec<String>)> {
    if rhos.is_empty() || ns.is_empty() {
        return Err(CliError::Usage("verify needs non-empty --rho and --n grids".into()));
    }
    for &rho in rhos {
        if rho <= 0.0 {
            return Err(CliError::Usage(format!("rho must be positive, got {rho}")));
        }
    }
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        return Err(CliError::Usage(format!("verify needs N >= 2, got {n}")));
    }

    let cases: Vec<(f64, usize)> = rhos.iter().flat_map(|&r| ns.iter().map(move |&n| (r, n))).collect();
    let per_case = par::map(&cases, |&(rho, n)| verify_case(rho, n, opts));
    let mut entries = Vec::new();
    for r in per_case {
        entries.extend(r?);
    }

    for &rho in rhos.iter().filter(|&&r| r < 1.0) {
        let eligible: Vec<usize> = ns
            .iter()
            .copied()
            .filter(|&n| opts.strict || n >= LARGE_N_THRESHOLD)
            .collect();
        if eligible.len() < 2 {
            continue;
        }
        let ratios = eligible
            .iter()
            .map(|&n| stirling_ratio(n, rho))
            .collect::<Result<Vec<_>, _>>()?;
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        entries.push(VerifyEntry::simple(
            "stirling_order_band",
            *eligible.last().unwrap(),
            rho,
            hi / lo,
            None,
            Some(10.0),
            true,
        ));
    }

    let oracle_ns: Vec<usize> = (1..=opts.oracle_max_n).collect();
    for &rho in rhos {
        let sups = par::map(&oracle_ns, |&n| -> Result<f64, bdheight::Error> {
            let p = ModelParams::from_rho(n, rho)?;
            let d = height_distribution(&p);
            let s = height_dist_oracle_with(&p, OracleConfig { max_n: opts.oracle_max_n.max(1) })?;
            Ok((1..=n).map(|k| (s[k - 1] - d.survival(k)).abs()).fold(0.0, f64::max))
        });
        let mut worst = 0.0f64;
        for s in sups {
            worst = worst.max(s?);
        }
        entries.push(VerifyEntry::simple(
            "oracle_equivalence",
            opts.oracle_max_n,
            rho,
            worst,
            None,
            Some(1e-10),
            true,
        ));
    }

    let failures: Vec<String> = entries.iter().filter(|e| e.is_failure()).map(|e| e.describe()).collect();
    let count = |pred: &dyn Fn(&VerifyEntry) -> bool| entries.iter().filter(|e| pred(e)).count();
    let summary = json!({
        "checks": entries.len(),
        "asserted": count(&|e| e.asserted),
        "passed": count(&|e| e.asserted && e.status == CheckStatus::Pass),
        "failed": failures.len(),
        "not_applicable": count(&|e| e.status == CheckStatus::NotApplicable),
        "informational": count(&|e| !e.asserted),
    });
    let rows = entries
        .iter()
        .map(|e| {
            vec![
                e.check.clone(),
                e.n.to_string(),
                fmt_num(e.rho),
                fmt_num(e.value),
                fmt_opt(e.lower),
                fmt_opt(e.upper),
                fmt_num(e.margin),
                serde_json::to_value(e.status).unwrap().as_str().unwrap().to_string(),
                e.asserted.to_string(),
            ]
        })
        .collect();
    let artifact = Artifact {
        command: "verify",
        args,
        params: json!({
            "rho": rhos, "n": ns, "strict": opts.strict,
            "offset_rounding": opts.rounding, "oracle_max_n": opts.oracle_max_n,
            "corrupt_c2": opts.corrupt_c2,
        }),
        seed: None,
        data: json!({ "checks": entries, "summary": summary }),
        table: Table {
            header: vec!["check", "n", "rho", "value", "lower", "upper", "margin", "status", "asserted"],
            rows,
            meta: vec![("failed".into(), failures.len().to_string())],
        },
    };
    Ok((artifact, failures))
}

fn verify_case(rho: f64, n: usize, opts: &VerifyOptions) -> CliResult<Vec<VerifyEntry>> {
    let asserted = opts.strict || n >= LARGE_N_THRESHOLD;
    let p = ModelParams::from_rho(n, rho)?;
    let d = height_distribution(&p);
    let mut out = Vec::new();
    if rho >= 1.0 {
        out.push(VerifyEntry::from_report(&check_mean_sandwich(n, rho, d.mean)?, asserted));
        return Ok(out);
    }
    let mut c = bound_constants(rho)?;
    if let Some(factor) = opts.corrupt_c2 {
        c.c2 *= factor;
    }
    let peak = check_peak_bounds_for(n, &c, opts.rounding)?;
    out.push(VerifyEntry::from_report(&peak.growth, asserted));
    out.push(VerifyEntry::from_report(&peak.decay, asserted));
    out.push(VerifyEntry::from_report(&check_mean_sandwich_for(n, &c, d.mean)?, asserted));
    out.push(VerifyEntry::from_report(&check_tail_bound(&d)?, asserted));
    out.push(VerifyEntry::from_report(&check_concentration(&d)?, asserted));
    Ok(out)
}

fn simulate(cfg: &SimulationConfig, args: Vec<String>) -> CliResult<(Artifact, bool, f64, f64)> {
    let p = cfg.params;
    warn_if_impractical(cfg);
    let s = run_batch(cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    let d = height_distribution(&p);
    let mut below = 0u64;
    let rows = (1..=p.n())
        .map(|k| {
            below += s.counts[k - 1];
            vec![
                k.to_string(),
                s.counts[k - 1].to_string(),
                fmt_num(s.empirical_pmf[k - 1]),
                fmt_num(d.pmf[k - 1]),
                fmt_num(below as f64 / s.n_samples as f64),
                fmt_num(d.cdf(k)),
            ]
        })
        .collect();
    let exact_cdf: Vec<f64> = (1..=p.n()).map(|k| d.cdf(k)).collect();
    let summary = serde_json::to_value(&s).expect("serializable");
    let meta = vec![
        ("n_samples".into(), s.n_samples.to_string()),
        ("empirical_mean".into(), fmt_num(s.empirical_mean)),
        ("empirical_variance".into(), fmt_num(s.empirical_variance)),
        ("exact_mean".into(), fmt_num(d.mean)),
        ("exact_variance".into(), fmt_num(d.variance)),
        ("sup_distance".into(), fmt_num(s.sup_distance)),
        ("dkw_epsilon".into(), fmt_num(s.dkw_epsilon)),
        ("dkw_pass".into(), s.dkw_pass.to_string()),
        ("mean_busy_duration".into(), fmt_opt(s.mean_busy_duration)),
    ];
    let artifact = Artifact {
        command: "simulate",
        args,
        params: json!({
            "model": p, "n_samples": cfg.n_samples, "mode": cfg.mode,
            "dkw_delta": cfg.dkw_delta, "max_steps": cfg.max_steps,
        }),
        seed: Some(cfg.seed),
        data: json!({
            "summary": summary,
            "exact_pmf": d.pmf,
            "exact_cdf": exact_cdf,
            "exact_mean": d.mean,
            "exact_variance": d.variance,
        }),
        table: Table {
            header: vec!["k", "count", "empirical_pmf", "exact_pmf", "empirical_cdf", "exact_cdf"],
            rows,
            meta,
        },
    };
    Ok((artifact, s.dkw_pass, s.sup_distance, s.dkw_epsilon))
}

/// Walking samplers cost about (1 + rho)^N steps per excursion; estimate
/// from a pilot before committing to a batch.
fn warn_if_impractical(cfg: &SimulationConfig) {
    const PILOT_CAP: u64 = 1_000_000;
    const PRACTICAL_STEPS: f64 = 1e10;
    let p = &cfg.params;
    if cfg.mode == SimulationMode::Ladder {
        let projected = p.n() as f64 * cfg.n_samples as f64;
        if projected > 1e11 {
            eprintln!("warning: up to {projected:.1e} level draws requested; this will be slow");
        }
        return;
    }
    let est = pilot(p, cfg.mode, cfg.seed, 100, PILOT_CAP.min(cfg.max_steps));
    let projected = est.projected_steps(cfg.n_samples);
    if est.capped > 0 {
        eprintln!(
            "warning: {} of {} pilot excursions exceeded {} steps; a {} batch at N = {} is impractical \
             (use --mode ladder)",
            est.capped,
            est.excursions,
            PILOT_CAP.min(cfg.max_steps),
            serde_json::to_value(cfg.mode).expect("serializable").as_str().unwrap_or("walking"),
            p.n()
        );
    } else if projected > PRACTICAL_STEPS {
        eprintln!("warning: projected {projected:.1e} jump steps for this batch");
    }
}

fn sweep(rho: f64, ns: &[usize], args: Vec<String>) -> CliResult<Artifact> {
    if rho <= 0.0 {
        return Err(CliError::Usage(format!("rho must be positive, got {rho}")));
    }
    let rows = convergence_table(rho, ns)?;
    let table_rows = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                fmt_num(r.mean_over_n),
                fmt_num(r.var_over_n),
                fmt_num(r.f),
                fmt_num(r.var_limit),
                fmt_num(r.mean_gap),
                fmt_num(r.var_rel_gap),
            ]
        })
        .collect();
    Ok(Artifact {
        command: "sweep",
        args,
        params: json!({ "rho": rho, "n": ns }),
        seed: None,
        data: json!({ "rows": rows }),
        table: Table {
            header: vec!["n", "mean_over_n", "var_over_n", "f", "var_limit", "mean_gap", "var_rel_gap"],
            rows: table_rows,
            meta: vec![],
        },
    })
}

fn replay(path: &Path) -> CliResult<ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let manifest = read_manifest(&text).ok_or_else(|| CliError::Usage("no manifest found".into()))?;
    let args: Vec<String> = serde_json::from_value(manifest["args"].clone())
        .map_err(|e| CliError::Usage(format!("bad manifest args: {e}")))?;
    let cli = Cli::try_parse_from(std::iter::once("bdheight".to_string()).chain(args.iter().cloned()))
        .map_err(|e| CliError::Usage(format!("manifest args do not parse: {e}")))?;
    if matches!(cli.command, Command::Replay { .. }) {
        return Err(CliError::Usage("refusing to replay a replay".into()));
    }
    let run = match run_command(cli, args) {
        Ok(run) => run,
        Err(CliError::Check(m)) => return Err(CliError::Check(m)),
        Err(e) => return Err(e),
    };
    let again = run.artifact.render(run.format);
    let same = again == text;
    println!("{}", json!({ "artifact": path.display().to_string(), "reproduced": same }));
    if same {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::Check("replayed artifact differs from the recorded one".into()))
    }
}
