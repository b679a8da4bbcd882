//! `rsk`: command-line front end for the reduction toolkit. Evaluates
//! kernel operators and norms on grid functions, resolves optimal target
//! spaces, and runs the named verification checks.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use rsk_core::grid::{Grid, GridFn};
use rsk_core::norms::{
    eval_norm, young_exp, young_exp_exp, young_power, young_power_log, NormSpec,
};
use rsk_core::profiles::{l_phi_profile, linear_profile, power_profile, PhiFunction, Profile};
use rsk_core::targets::{linf_criterion, resolve_target, Verdict};
use rsk_core::verify::{
    suite_names, target_row_report, theorem_suite, KernelKind, KernelOp, RatioReport, SuiteConfig,
};

#[derive(Parser)]
#[command(name = "rsk", version, about = "1-D reduction toolkit for Sobolev-type embeddings")]
struct Cli {
    #[command(flatten)]
    grid: GridArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct GridArgs {
    /// grid points per octave (env RSK_GRID_K, default 16)
    #[arg(long, global = true)]
    grid_k: Option<u32>,
    /// left grid cutoff (env RSK_TMIN, default 2^-40)
    #[arg(long, global = true)]
    t_min: Option<f64>,
    /// seed for the deterministic test families
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Apply a kernel operator to a grid function and write the image
    EvalOp {
        /// kernel kind: h (upper) or r (lower/averaging)
        #[arg(long, default_value = "h")]
        op: String,
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// function spec (indicator:b, power:theta, logpow:theta,gamma,
        /// const:v, file:path.json)
        #[arg(long = "fn")]
        function: String,
        /// output path for the image JSON (stdout when omitted)
        #[arg(long)]
        output: Option<String>,
    },
    /// Evaluate a rearrangement-invariant norm of a grid function
    EvalNorm {
        /// norm spec (lp:p, lorentz:p,q, lz:p,q,a, glz:p,q,a,b,
        /// orlicz:exp,g | orlicz:power,p[,b] | orlicz:expexp,g)
        #[arg(long)]
        family: String,
        #[arg(long = "fn")]
        function: String,
    },
    /// Resolve the optimal target space and run its numeric band check
    OptimalTarget {
        #[arg(long)]
        base: String,
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// skip the numeric band check and only print the resolution
        #[arg(long)]
        no_check: bool,
    },
    /// Run one named verification check, print report lines
    Check {
        #[arg(long)]
        name: String,
        /// write JSON lines here instead of stdout
        #[arg(long)]
        output: Option<String>,
    },
    /// Run the whole check registry (or one entry with --name)
    Suite {
        #[arg(long, default_value = "all")]
        name: String,
        #[arg(long)]
        output: Option<String>,
    },
    /// Band-check a grid of (base, profile, m) target rows, write CSV
    Sweep {
        /// base norm specs (repeatable)
        #[arg(long = "base", required = true)]
        bases: Vec<String>,
        /// profiles (repeatable)
        #[arg(long = "profile", required = true)]
        profiles: Vec<String>,
        /// orders (repeatable)
        #[arg(long = "m", required = true)]
        ms: Vec<u32>,
        #[arg(long)]
        output: Option<String>,
    },
}

fn parse_scalar(s: &str) -> Result<f64> {
    let s = s.trim();
    if s == "inf" || s == "infinity" {
        return Ok(f64::INFINITY);
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num.parse().context("bad fraction numerator")?;
        let d: f64 = den.parse().context("bad fraction denominator")?;
        if d == 0.0 {
            bail!("zero denominator in {s}");
        }
        return Ok(n / d);
    }
    Ok(s.parse()?)
}

fn parse_norm(s: &str) -> Result<NormSpec> {
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    let parts: Vec<&str> = if rest.is_empty() { vec![] } else { rest.split(',').collect() };
    let scalars = |n: usize| -> Result<Vec<f64>> {
        if parts.len() != n {
            bail!("{kind} wants {n} parameters, got {}", parts.len());
        }
        parts.iter().map(|p| parse_scalar(p)).collect()
    };
    let spec = match kind {
        "lp" | "lebesgue" => NormSpec::lebesgue(scalars(1)?[0])?,
        "lorentz" => {
            let v = scalars(2)?;
            NormSpec::lorentz(v[0], v[1])?
        }
        "lz" | "lorentz-zygmund" => {
            let v = scalars(3)?;
            NormSpec::lorentz_zygmund(v[0], v[1], v[2])?
        }
        "glz" => {
            let v = scalars(4)?;
            NormSpec::glz(v[0], v[1], v[2], v[3])?
        }
        "orlicz" => {
            if parts.is_empty() {
                bail!("orlicz wants a gauge: exp,g | expexp,g | power,p[,b]");
            }
            let nums: Vec<f64> = parts[1..]
                .iter()
                .map(|p| parse_scalar(p))
                .collect::<Result<_>>()?;
            let young = match (parts[0], nums.as_slice()) {
                ("exp", [g]) => young_exp(*g)?,
                ("expexp", [g]) => young_exp_exp(*g)?,
                ("power", [p]) => young_power(*p)?,
                ("power", [p, b]) => young_power_log(*p, *b)?,
                _ => bail!("bad orlicz gauge {rest}"),
            };
            NormSpec::Orlicz { young }
        }
        other => bail!("unknown norm family {other}"),
    };
    Ok(spec)
}

fn parse_profile(s: &str) -> Result<Profile> {
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    Ok(match kind {
        "power" => power_profile(parse_scalar(rest)?)?,
        "linear" => linear_profile(),
        "gauss" => l_phi_profile(PhiFunction::Gauss),
        "boltzmann" => l_phi_profile(PhiFunction::boltzmann(parse_scalar(rest)?)?),
        other => bail!("unknown profile {other}"),
    })
}

fn parse_fn(s: &str, grid: &Grid) -> Result<GridFn> {
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    Ok(match kind {
        "indicator" => GridFn::indicator(grid, parse_scalar(rest)?),
        "power" => {
            let theta = parse_scalar(rest)?;
            GridFn::sample(grid, &|t| t.powf(-theta))
        }
        "logpow" => {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 2 {
                bail!("logpow wants theta,gamma");
            }
            let theta = parse_scalar(parts[0])?;
            let gamma = parse_scalar(parts[1])?;
            GridFn::sample(grid, &|t| t.powf(-theta) * (2.0 / t).ln().powf(gamma))
        }
        "const" => GridFn::constant(grid.clone(), parse_scalar(rest)?),
        "file" => {
            let text = fs::read_to_string(rest).with_context(|| format!("reading {rest}"))?;
            GridFn::from_json(&serde_json::from_str(&text)?)?
        }
        other => bail!("unknown function spec {other}"),
    })
}

fn env_override<T: std::str::FromStr>(name: &str) -> Option<T> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn resolved_config(args: &GridArgs) -> SuiteConfig {
    let mut cfg = SuiteConfig::default();
    if let Some(k) = args.grid_k.or_else(|| env_override("RSK_GRID_K")) {
        cfg.grid_k = k;
    }
    if let Some(t) = args.t_min.or_else(|| env_override("RSK_TMIN")) {
        cfg.t_min = t;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    eprintln!(
        "config: grid_k={} t_min={:e} seed={} band=[{:e},{:e}] family_size={}",
        cfg.grid_k, cfg.t_min, cfg.seed, cfg.band_lo, cfg.band_hi, cfg.family_size
    );
    cfg
}

fn emit(lines: &[String], output: &Option<String>) -> Result<()> {
    let text = lines.join("\n") + "\n";
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {path}"))?,
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

/// 0 all pass, 1 any fail, 2 otherwise any unstable
fn reports_exit(reports: &[RatioReport]) -> ExitCode {
    if reports.iter().any(|r| r.verdict == "fail") {
        ExitCode::from(1)
    } else if reports.iter().any(|r| r.verdict == "unstable") {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = resolved_config(&cli.grid);
    let grid = cfg.grid();
    match cli.cmd {
        Cmd::EvalOp { op, profile, m, function, output } => {
            let kind = match op.as_str() {
                "h" => KernelKind::H,
                "r" => KernelKind::R,
                other => bail!("unknown operator {other} (expected h or r)"),
            };
            let f = parse_fn(&function, &grid)?;
            let image = KernelOp { kind, profile: parse_profile(&profile)?, m }.apply(&f);
            emit(&[image.to_json().to_string()], &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::EvalNorm { family, function } => {
            let spec = parse_norm(&family)?;
            let f = parse_fn(&function, &grid)?;
            let v = eval_norm(&spec, &f);
            if v.is_finite() {
                println!("{v:.12e}");
            } else {
                println!("inf");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::OptimalTarget { base, profile, m, no_check } => {
            let x = parse_norm(&base)?;
            let p = parse_profile(&profile)?;
            let sym = resolve_target(&x, &p, m)?;
            println!("{}", sym.label());
            if sym.verdict == Verdict::LInfinity {
                let cert = linf_criterion(&x, &p, m)?;
                println!("bounded: {} ({})", cert.finite, cert.diagnosis);
            }
            if no_check || sym.verdict == Verdict::NoTable {
                return Ok(ExitCode::SUCCESS);
            }
            let report = target_row_report(&p, &x, m, &cfg)?;
            println!("{}", report.json_line());
            Ok(reports_exit(&[report]))
        }
        Cmd::Check { name, output } => {
            let reports = theorem_suite(&name, &cfg)?;
            let lines: Vec<String> = reports.iter().map(|r| r.json_line()).collect();
            emit(&lines, &output)?;
            Ok(reports_exit(&reports))
        }
        Cmd::Suite { name, output } => {
            if name != "all" && !suite_names().contains(&name.as_str()) {
                bail!("unknown suite entry {name}");
            }
            let reports = theorem_suite(&name, &cfg)?;
            let lines: Vec<String> = reports.iter().map(|r| r.json_line()).collect();
            emit(&lines, &output)?;
            Ok(reports_exit(&reports))
        }
        Cmd::Sweep { bases, profiles, ms, output } => {
            let mut rows: Vec<(NormSpec, Profile, u32)> = Vec::new();
            for b in &bases {
                for p in &profiles {
                    for &m in &ms {
                        rows.push((parse_norm(b)?, parse_profile(p)?, m));
                    }
                }
            }
            let mut reports: Vec<Option<Result<RatioReport, rsk_core::RskError>>> =
                (0..rows.len()).map(|_| None).collect();
            std::thread::scope(|scope| {
                let mut handles = Vec::new();
                for (x, p, m) in &rows {
                    let cfg = cfg.clone();
                    handles.push(scope.spawn(move || target_row_report(p, x, *m, &cfg)));
                }
                for (slot, h) in reports.iter_mut().zip(handles) {
                    *slot = Some(h.join().expect("sweep worker panicked"));
                }
            });
            let mut lines = vec![format!("base,profile,m,{}", RatioReport::csv_header())];
            let mut all = Vec::new();
            for ((x, p, m), rep) in rows.iter().zip(reports) {
                match rep.unwrap() {
                    Ok(r) => {
                        lines.push(format!("{},{},{m},{}", x.label(), p.label(), r.csv_row()));
                        all.push(r);
                    }
                    Err(e) => {
                        lines.push(format!("{},{},{m},no-target: {e},,,,,,,,,", x.label(), p.label()));
                    }
                }
            }
            emit(&lines, &output)?;
            Ok(reports_exit(&all))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
