use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use symrank::cc::{build_algorithm, select_plan_with, verify_algorithm, PlanOptions, Strategy, VerifyMode};
use symrank::export::{export_algorithm, import_algorithm};
use symrank::ff::FieldSpec;
use symrank::tower::{
    audit, bound_table, capacity_slack, delta_genus_lower, paper_capacity, parse_known_values, pointwise_bound,
    rat_str, step_capacity, step_data, tower_for, uniform_slope, BoundReport, BoundSource, KnownValues, Mode,
    TowerStep,
};

#[derive(Parser)]
#[command(name = "symrank", version, about = "Symmetric bilinear multiplication algorithms and tensor-rank bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Default,
    Search,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Certified,
    Paper,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Certified => Mode::Certified,
            ModeArg::Paper => Mode::Paper,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyArg {
    /// Exhaustive up to 2^20 pairs, random beyond.
    Auto,
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build a multiplication algorithm for F_{q^n} over F_q.
    Construct {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4, value_parser = max_degree)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Default)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=3))]
        max_multiplicity: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an exported algorithm against schoolbook multiplication.
    Verify {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = VerifyArg::Auto)]
        mode: VerifyArg,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Upper bound on the symmetric rank for one n.
    Bound {
        #[arg(long, value_parser = tower_q)]
        q: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Certified)]
        mode: ModeArg,
        #[arg(long)]
        known_values: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounds for a range of n.
    Table {
        #[arg(long, value_parser = tower_q)]
        q: u64,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Certified)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        known_values: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest (bound - intercept)/n over a range, against the stated constant.
    Slope {
        #[arg(long, value_parser = tower_q)]
        q: u64,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Certified)]
        mode: ModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check the inequality chains behind the uniform constants.
    Audit {
        #[arg(long, value_parser = tower_q)]
        q: u64,
        #[arg(long, default_value_t = 20)]
        i_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Data for one tower step.
    Tower {
        #[arg(long, value_parser = tower_q)]
        q: u64,
        #[arg(long)]
        i: u32,
        #[arg(long, default_value_t = 0)]
        s: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn max_degree(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(d @ (1 | 2 | 4)) => Ok(d),
        _ => Err("max degree must be 1, 2 or 4".into()),
    }
}

fn tower_q(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(q @ (2 | 3)) => Ok(q),
        _ => Err("tower bounds are available for q = 2 and q = 3 only".into()),
    }
}

/// Failure modes mapped to exit codes.
enum Failure {
    Config(String),
    Check(String),
}

impl From<symrank::Error> for Failure {
    fn from(e: symrank::Error) -> Failure {
        Failure::Config(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn write_out(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Config(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Config(format!("cannot write output: {e}"))),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))
}

fn load_known(path: Option<&Path>) -> Result<Option<KnownValues>, Failure> {
    path.map(|p| Ok(parse_known_values(&read(p)?)?)).transpose()
}

fn construct(q: u64, n: usize, max_degree: usize, strategy: StrategyArg, max_multiplicity: u64, out: Option<&Path>) -> Outcome {
    if n < 1 {
        return Err(Failure::Config("n must be at least 1".into()));
    }
    let field = FieldSpec::of_order(q)?;
    let opts = PlanOptions {
        max_degree,
        strategy: match strategy {
            StrategyArg::Default => Strategy::Default,
            StrategyArg::Search => Strategy::Search,
        },
        max_multiplicity: max_multiplicity as usize,
    };
    let plan = select_plan_with(&field, n, &opts)?;
    let alg = build_algorithm(&plan)?;
    eprintln!("q = {q}, n = {n}: rank {}", alg.rank());
    write_out(out, &export_algorithm(&alg))
}

fn verify(input: &Path, mode: VerifyArg, samples: u64, seed: u64, out: Option<&Path>) -> Outcome {
    let alg = import_algorithm(&read(input)?)?;
    let mode = match mode {
        VerifyArg::Auto => VerifyMode::auto(&alg, samples, seed),
        VerifyArg::Exhaustive => VerifyMode::Exhaustive,
        VerifyArg::Random => VerifyMode::Random { count: samples, seed },
    };
    let report = verify_algorithm(&alg, mode);
    let mode_name = match report.mode {
        VerifyMode::Exhaustive => "exhaustive",
        VerifyMode::Random { .. } => "random",
    };
    let ok_pairs = report.pairs_checked - report.failure_count;
    let summary = format!(
        "{ok_pairs}/{} pairs ok ({mode_name}, seed {seed}), rank {}",
        report.pairs_checked, report.rank
    );
    println!("{summary}");
    if let Some(path) = out {
        let doc = json!({
            "mode": mode_name,
            "seed": seed,
            "pairs_checked": report.pairs_checked,
            "failure_count": report.failure_count,
            "failures": report.failures.iter().map(|(x, y)| json!({"x": x, "y": y})).collect::<Vec<_>>(),
            "commutativity_failures": report.commutativity_failures,
            "rank": report.rank,
            "rank_floor": report.rank_floor,
            "ok": report.ok(),
        });
        write_out(Some(path), &pretty(&doc))?;
    }
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{} failing pairs, {} non-commuting, rank {} vs floor {}",
            report.failure_count, report.commutativity_failures, report.rank, report.rank_floor
        )))
    }
}

fn check_reports(reports: &[BoundReport]) -> Outcome {
    match reports.iter().find(|r| !r.consistent()) {
        Some(r) => Err(Failure::Check(format!("derivation for n = {} does not re-verify", r.n))),
        None => Ok(()),
    }
}

fn csv_rows(reports: &[BoundReport]) -> String {
    let mut s = String::from("n,mode,step_i,step_s,genus_used,bound_rational,bound_floor\n");
    for r in reports {
        let (i, st, g) = match (&r.source, r.chosen()) {
            (BoundSource::Tower, Some(c)) => (c.step.i.to_string(), c.step.s.to_string(), c.genus.to_string()),
            _ => Default::default(),
        };
        s.push_str(&format!("{},{},{i},{st},{g},{},{}\n", r.n, r.mode, rat_str(&r.bound), r.bound_floor));
    }
    s
}

fn tower_json(q: u64, i: u32, s: u32) -> Result<Value, Failure> {
    let step = TowerStep::new(tower_for(q)?, i, s)?;
    let d = step_data(&step);
    let delta = delta_genus_lower(&step)?;
    Ok(json!({
        "step": {"tower": step.tower.to_string(), "i": step.i, "s": step.s, "label": step.label()},
        "genus_exact": d.genus_exact.as_ref().map(ToString::to_string),
        "genus_lower": d.genus_lower.to_string(),
        "genus_upper": d.genus_upper.to_string(),
        "genus_used": d.genus_used().to_string(),
        "weighted_place_sum_lower": d.weighted_place_sum_lower.as_ref().map(ToString::to_string),
        "exact_counts": d.exact_counts,
        "capacity_certified": step_capacity(&step, Mode::Certified)?.to_string(),
        "capacity_paper": paper_capacity(&step).to_string(),
        "delta_genus_lower": delta.value.to_string(),
        "delta_genus_clamped": delta.clamped,
        "slack_certified": capacity_slack(&step, Mode::Certified)?.to_string(),
        "slack_paper": capacity_slack(&step, Mode::Paper)?.to_string(),
    }))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Construct {
            q,
            n,
            max_degree,
            strategy,
            max_multiplicity,
            out,
        } => construct(q, n, max_degree, strategy, max_multiplicity, out.as_deref()),
        Command::Verify {
            input,
            mode,
            samples,
            seed,
            out,
        } => verify(&input, mode, samples, seed, out.as_deref()),
        Command::Bound {
            q,
            n,
            mode,
            known_values,
            out,
        } => {
            let known = load_known(known_values.as_deref())?;
            let r = pointwise_bound(q, n, mode.into(), known.as_ref())?;
            eprintln!("q = {q}, n = {n} ({}): bound {} -> {}", r.mode, rat_str(&r.bound), r.bound_floor);
            write_out(out.as_deref(), &pretty(&r.to_json()))?;
            check_reports(std::slice::from_ref(&r))
        }
        Command::Table {
            q,
            from,
            to,
            mode,
            format,
            known_values,
            out,
        } => {
            if from > to {
                return Err(Failure::Config("--from must not exceed --to".into()));
            }
            let known = load_known(known_values.as_deref())?;
            let reports = bound_table(q, from, to, mode.into(), known.as_ref())?;
            let text = match format {
                Format::Json => pretty(&Value::Array(reports.iter().map(BoundReport::to_json).collect())),
                Format::Csv => csv_rows(&reports),
            };
            write_out(out.as_deref(), &text)?;
            check_reports(&reports)
        }
        Command::Slope { q, from, to, mode, out } => {
            let r = uniform_slope(q, from, to, mode.into())?;
            eprintln!("slope {} at n = {} (target {}, matched: {})", rat_str(&r.slope), r.argmax, rat_str(&r.target), r.matched);
            write_out(out.as_deref(), &pretty(&r.to_json()))
        }
        Command::Audit { q, i_max, out } => {
            let r = audit(q, i_max)?;
            let counts: Vec<String> = r.counts().iter().map(|(k, v)| format!("{k} {v}")).collect();
            eprintln!("q = {q}, i <= {i_max}: {} checks ({})", r.entries.len(), counts.join(", "));
            write_out(out.as_deref(), &pretty(&r.to_json()))?;
            if r.consistent() {
                Ok(())
            } else {
                Err(Failure::Check("audit verdicts do not re-verify".into()))
            }
        }
        Command::Tower { q, i, s, out } => write_out(out.as_deref(), &pretty(&tower_json(q, i, s)?)),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
