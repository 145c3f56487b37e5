use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use permlab::asymptotics::{approx_one_point, approx_two_decreasing, approx_two_increasing, kstar};
use permlab::corner::{
    chain_exact_corner_prob, chain_limit_prob, pi_jump, rho, sample_corner_walk, theta_limit,
    trajectory_csv, CornerChain, CornerEvent, CornerPoint,
};
use permlab::exact::{conditional_corner_prob, count_lambda, count_sbox, event_count, event_prob};
use permlab::perm::EventSpec;
use permlab::sampler::{estimate_event, heatmap, sample_many};
use permlab::verify::verify;
use permlab::{catalan, Error, Execution};

const EXIT_LIBRARY: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "permlab", version, about = "Exact and asymptotic point probabilities for 312-avoiding permutations")]
struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads for sampling (output does not depend on it).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact counts of 312-avoiders with specified points.
    Count(CountArgs),
    /// Exact probabilities under the uniform measure.
    Prob(ProbArgs),
    /// Leading-order approximations, with the exact value for comparison.
    Approx(ApproxArgs),
    /// Uniform random 312-avoiders, one per line.
    Sample(SampleArgs),
    /// Monte Carlo frequency of a point event.
    Estimate(EstimateArgs),
    /// Occupancy counts of (i/N, sigma_i/N) over many samples.
    Heatmap(HeatmapArgs),
    /// A corner random walk trajectory.
    Walk(WalkArgs),
    /// Corner limit probabilities.
    Corner(CornerArgs),
    /// Compare every closed form with brute force for N up to --max-n.
    Verify(VerifyArgs),
    /// The rate function on a grid or at one point.
    Kstar(KstarArgs),
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    n: usize,
    /// Constraint sigma_i = j written i:j; repeatable.
    #[arg(long = "point", value_parser = parse_pair)]
    points: Vec<(usize, usize)>,
    /// Count the boxed set at i:j instead.
    #[arg(long, value_parser = parse_pair, conflicts_with_all = ["points", "lambda"])]
    sbox: Option<(usize, usize)>,
    /// Count permutations whose corner rectangle holds exactly this chain (a:b,...).
    #[arg(long, conflicts_with = "points")]
    lambda: Option<String>,
}

#[derive(Args)]
struct ProbArgs {
    #[arg(long)]
    n: usize,
    #[arg(long = "point", value_parser = parse_pair)]
    points: Vec<(usize, usize)>,
    /// Condition on sigma_{N-t+1} = j, given as t:j, and ask for --chain above it.
    #[arg(long, value_parser = parse_pair, requires = "chain", conflicts_with = "points")]
    given: Option<(usize, usize)>,
    #[arg(long)]
    chain: Option<String>,
}

#[derive(Args)]
struct ApproxArgs {
    #[arg(long)]
    n: usize,
    /// One or two points i:j.
    #[arg(long = "point", value_parser = parse_pair, required = true)]
    points: Vec<(usize, usize)>,
    /// Skip the exact evaluation.
    #[arg(long)]
    no_exact: bool,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long = "point", value_parser = parse_pair)]
    points: Vec<(usize, usize)>,
    #[arg(long)]
    samples: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct HeatmapArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    bins: usize,
    /// Write PREFIX.csv and PREFIX.json instead of printing.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WalkArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    max_a: usize,
    #[arg(long)]
    max_b: usize,
}

#[derive(Args)]
struct CornerArgs {
    /// rho(a, b)
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    rho: Option<Vec<usize>>,
    /// pi(-a, b)
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pi: Option<Vec<usize>>,
    /// Product of rho over the chain increments (a:b,...).
    #[arg(long)]
    chain_limit: Option<String>,
    /// Product of pi over the chain increments (a:b,...).
    #[arg(long)]
    chain_exact: Option<String>,
    /// Points (-a, b) required to be ones, written a:b; repeatable.
    #[arg(long = "one", value_parser = parse_pair)]
    ones: Vec<(usize, usize)>,
    /// Points (-a, b) required to be zeros, written a:b; repeatable.
    #[arg(long = "zero", value_parser = parse_pair)]
    zeros: Vec<(usize, usize)>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 8)]
    max_n: usize,
}

#[derive(Args)]
struct KstarArgs {
    /// Grid resolution: evaluates s, t in {0, 1/G, ..., 1}.
    #[arg(long, default_value_t = 10, conflicts_with = "at")]
    grid: usize,
    /// A single point s:t.
    #[arg(long, value_parser = parse_unit_pair)]
    at: Option<(f64, f64)>,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn parse_unit_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected s:t, got {s:?}"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

enum Failure {
    Library(Error),
    Verify(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

type Outcome = Result<String, Failure>;

fn chain_arg(s: &str) -> Result<CornerChain, Failure> {
    Ok(s.parse::<CornerChain>()?)
}

fn corner_points(pairs: &[(usize, usize)]) -> Result<Vec<CornerPoint>, Failure> {
    Ok(pairs.iter().map(|&(a, b)| CornerPoint::from_depth(a, b)).collect::<permlab::Result<_>>()?)
}

fn emit(format: Format, value: Value, csv_header: &str, csv_row: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => value.to_string(),
        Format::Csv => format!("{csv_header}\n{}", csv_row()),
    }
}

fn prob_out(format: Format, p: &permlab::ExactProb) -> String {
    match format {
        Format::Json => serde_json::to_string(p).expect("probabilities serialize"),
        Format::Csv => format!("num,den\n{},{}", p.numer(), p.denom()),
    }
}

fn count(args: CountArgs, format: Format) -> Outcome {
    let c = if let Some((i, j)) = args.sbox {
        count_sbox(args.n, i, j)?
    } else if let Some(chain) = &args.lambda {
        count_lambda(args.n, &chain_arg(chain)?)?
    } else {
        event_count(args.n, &EventSpec::new(args.points)?)?
    };
    let total = catalan(args.n);
    Ok(emit(
        format,
        json!({"count": c.to_string(), "total": total.to_string()}),
        "count,total",
        || format!("{c},{total}"),
    ))
}

fn prob(args: ProbArgs, format: Format) -> Outcome {
    let p = match (args.given, &args.chain) {
        (Some((t, j)), Some(chain)) => conditional_corner_prob(args.n, t, j, &chain_arg(chain)?)?,
        _ => event_prob(args.n, &EventSpec::new(args.points)?)?,
    };
    Ok(prob_out(format, &p))
}

fn approx(args: ApproxArgs, format: Format) -> Outcome {
    let n = args.n;
    let mut pts = args.points.clone();
    pts.sort_unstable();
    let value = match pts[..] {
        [(i, j)] => approx_one_point(n, i, j)?,
        [(i1, j1), (i2, j2)] if j2 < j1 => approx_two_decreasing(n, i1, i2, j1, j2)?,
        [(i1, j1), (i2, j2)] => approx_two_increasing(n, i1, i2, j1, j2)?,
        _ => {
            return Err(Failure::Library(Error::Unsupported(
                "approximations exist for one or two points".into(),
            )))
        }
    };
    let exact = if args.no_exact { None } else { Some(event_prob(n, &EventSpec::new(pts)?)?.to_f64()) };
    let rel = exact.map(|e| e / value - 1.0);
    let show = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:e}"));
    Ok(emit(
        format,
        json!({"approx": value, "exact": exact, "rel_err": rel}),
        "approx,exact,rel_err",
        || format!("{value:e},{},{}", show(exact), show(rel)),
    ))
}

fn sample(args: SampleArgs, format: Format, exec: Execution) -> Outcome {
    let perms = sample_many(args.n, args.count, args.seed, exec)?;
    Ok(match format {
        Format::Json => Value::from(perms.iter().map(|p| p.values().to_vec()).collect::<Vec<_>>()).to_string(),
        Format::Csv => perms
            .iter()
            .map(|p| p.values().iter().map(usize::to_string).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn estimate(args: EstimateArgs, format: Format, exec: Execution) -> Outcome {
    let e = estimate_event(args.n, &EventSpec::new(args.points)?, args.samples, args.seed, exec)?;
    Ok(emit(
        format,
        json!({"estimate": e.estimate, "stderr": e.stderr, "hits": e.hits, "samples": e.samples}),
        "estimate,stderr,hits,samples",
        || format!("{},{},{},{}", e.estimate, e.stderr, e.hits, e.samples),
    ))
}

fn heat(args: HeatmapArgs, format: Format, exec: Execution) -> Outcome {
    let h = heatmap(args.n, args.samples, args.seed, args.bins, exec)?;
    if let Some(prefix) = args.out {
        let csv = prefix.with_extension("csv");
        let side = prefix.with_extension("json");
        fs::write(&csv, h.to_csv()).map_err(|e| Failure::Io(format!("{}: {e}", csv.display())))?;
        fs::write(&side, h.sidecar().to_string()).map_err(|e| Failure::Io(format!("{}: {e}", side.display())))?;
        return Ok(json!({"csv": csv.display().to_string(), "sidecar": side.display().to_string()}).to_string());
    }
    Ok(match format {
        Format::Csv => h.to_csv().trim_end().to_string(),
        Format::Json => {
            let mut v = h.sidecar();
            v["counts"] = json!(h.counts);
            v.to_string()
        }
    })
}

fn walk(args: WalkArgs, format: Format) -> Outcome {
    let w = sample_corner_walk(args.seed, (args.max_a, args.max_b))?;
    Ok(match format {
        Format::Csv => trajectory_csv(&w).trim_end().to_string(),
        Format::Json => Value::from(w.iter().map(|p| json!([p.neg_i(), p.j()])).collect::<Vec<_>>()).to_string(),
    })
}

fn corner(args: CornerArgs, format: Format) -> Outcome {
    let p = if let Some(ab) = &args.rho {
        rho(ab[0], ab[1])?
    } else if let Some(ab) = &args.pi {
        pi_jump(ab[0], ab[1])?
    } else if let Some(c) = &args.chain_limit {
        chain_limit_prob(&chain_arg(c)?)
    } else if let Some(c) = &args.chain_exact {
        chain_exact_corner_prob(&chain_arg(c)?)
    } else {
        theta_limit(&CornerEvent::new(corner_points(&args.ones)?, corner_points(&args.zeros)?)?)?
    };
    Ok(prob_out(format, &p))
}

fn run_verify(args: VerifyArgs, format: Option<Format>) -> Outcome {
    let report = verify(args.max_n)?;
    let text = match format {
        None => report.to_string().trim_end().to_string(),
        Some(Format::Csv) => report.to_csv().trim_end().to_string(),
        Some(Format::Json) => json!({"passed": report.passed(), "rows": report.rows}).to_string(),
    };
    if report.passed() {
        Ok(text)
    } else {
        Err(Failure::Verify(text))
    }
}

fn run_kstar(args: KstarArgs, format: Format) -> Outcome {
    let points: Vec<(f64, f64)> = match args.at {
        Some(p) => vec![p],
        None => {
            let g = args.grid.max(1);
            let ticks: Vec<f64> = (0..=g).map(|k| k as f64 / g as f64).collect();
            ticks.iter().flat_map(|&s| ticks.iter().map(move |&t| (s, t))).collect()
        }
    };
    let rows = points
        .iter()
        .map(|&(s, t)| Ok((s, t, kstar(s, t)?)))
        .collect::<permlab::Result<Vec<_>>>()?;
    Ok(match format {
        Format::Json => {
            Value::from(rows.iter().map(|&(s, t, k)| json!({"s": s, "t": t, "kstar": k})).collect::<Vec<_>>())
                .to_string()
        }
        Format::Csv => {
            let mut out = String::from("s,t,kstar");
            for (s, t, k) in rows {
                out.push_str(&format!("\n{s},{t},{k}"));
            }
            out
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = match Execution::with_workers(cli.workers) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let json = cli.format.unwrap_or(Format::Json);
    let csv = cli.format.unwrap_or(Format::Csv);
    let result = match cli.command {
        Command::Count(a) => count(a, json),
        Command::Prob(a) => prob(a, json),
        Command::Approx(a) => approx(a, json),
        Command::Sample(a) => sample(a, csv, exec),
        Command::Estimate(a) => estimate(a, json, exec),
        Command::Heatmap(a) => heat(a, csv, exec),
        Command::Walk(a) => walk(a, csv),
        Command::Corner(a) => corner(a, json),
        Command::Verify(a) => run_verify(a, cli.format),
        Command::Kstar(a) => run_kstar(a, csv),
    };
    match result {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_LIBRARY)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_LIBRARY)
        }
        Err(Failure::Verify(table)) => {
            println!("{table}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
