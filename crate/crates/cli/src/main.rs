use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use nc_core::conics::{
    classify_by_lambda, classify_pair, hyperbola_pair, line_empty_pair, parabola_pair, standard_pair, ConicPair, Side,
};
use nc_core::dpc::{classify_dpc, dpc_from_hypersphere, hypersphere_from_dpc, Dpc, DpcKind, Hypersphere};
use nc_core::harness::{
    asgeirsson_check, generate_pairs, report_csv, run_grid, ClassFilter, QuadratureSpec, TrialReport, TrialStatus,
};
use nc_core::io::{lines_csv, parse_pair, samples_csv, surface_csv, PairRecord};
use nc_core::lines::{verify_rulsurf, Quadric};
use nc_core::solutions::{builtin_solutions, uhe_certificate, Solution};
use nc_core::{rng, Vec33};

const DEFAULT_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "nc", version, about = "Conjugate conics and mean value checks in R^{2,2}")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Base seed for all random draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Pass threshold; defaults to NC_DEFAULT_TOL or 1e-9.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Omit the `# generated:` line from CSV reports.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Hypersphere <-> DPC conversions.
    Dpc {
        #[command(subcommand)]
        op: DpcOp,
    },
    /// Generate, classify and sample conic pairs.
    Pair {
        #[command(subcommand)]
        op: PairOp,
    },
    /// Mean value experiments.
    Mv {
        #[command(subcommand)]
        op: MvOp,
    },
    /// Sweep over random circle pairs centered anywhere.
    Asgeirsson {
        /// Number of random (a, b, c, d, r) tuples.
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value = "builtin")]
        solutions: String,
    },
    /// Ruled surface checks.
    Ruled {
        #[command(subcommand)]
        op: RuledOp,
    },
    /// X-ray solution checks.
    Xray {
        #[command(subcommand)]
        op: XrayOp,
    },
}

#[derive(Subcommand)]
enum DpcOp {
    /// Hypersphere JSON to coordinates.
    Encode {
        /// Hypersphere as JSON, e.g. {"kind":"proper","center":[0,0,0,0],"radius_sq":1}.
        #[arg(long, conflicts_with = "input")]
        json: Option<String>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Coordinates to hypersphere JSON.
    Decode {
        /// Six comma-separated coordinates s0..s5.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        coords: Vec<f64>,
    },
}

#[derive(Subcommand)]
enum PairOp {
    /// Random pairs of a class.
    Gen {
        #[arg(long, default_value = "any")]
        class: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Classify a pair by subspaces and by λ roots.
    Classify {
        #[arg(long = "in", conflicts_with = "pair")]
        input: Option<PathBuf>,
        #[arg(long)]
        pair: Option<String>,
    },
    /// CSV samples of both sides.
    Sample {
        #[arg(long = "in", conflicts_with = "pair")]
        input: Option<PathBuf>,
        #[arg(long)]
        pair: Option<String>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum MvOp {
    /// Pairs x solutions grid.
    Run {
        /// standard, hyperbola, parabola, line_empty, random:<class>:<count> or a JSON file.
        #[arg(long, default_value = "standard")]
        pairs: String,
        /// builtin, comma-separated builtin ids, or a JSON file with a list of solutions.
        #[arg(long, default_value = "builtin")]
        solutions: String,
    },
}

#[derive(Subcommand)]
enum RuledOp {
    Verify {
        #[arg(long, default_value = "standard")]
        pair: String,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// CSV of the sampled rulings.
        #[arg(long)]
        lines_out: Option<PathBuf>,
        /// CSV of points on the rulings.
        #[arg(long)]
        surface_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum XrayOp {
    Check {
        /// Random evaluation points per solution.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<nc_core::Error> for Failure {
    fn from(e: nc_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Res<T> = Result<T, Failure>;

fn read(path: &PathBuf) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn tolerance(g: &Global) -> Res<f64> {
    if let Some(t) = g.tol {
        return Ok(t);
    }
    match std::env::var("NC_DEFAULT_TOL") {
        Ok(s) => s
            .parse()
            .map_err(|_| Failure::Usage(format!("NC_DEFAULT_TOL is not a number: {s}"))),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn emit(g: &Global, text: &str) -> Res<()> {
    match &g.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            let nl = if text.ends_with('\n') { "" } else { "\n" };
            match write!(out, "{text}{nl}").and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Io(format!("stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn timestamp(g: &Global) -> Option<u64> {
    (!g.no_timestamp).then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0))
}

fn named_pair(name: &str) -> Option<ConicPair> {
    match name {
        "standard" => Some(standard_pair()),
        "hyperbola" => Some(hyperbola_pair()),
        "parabola" => Some(parabola_pair()),
        "line_empty" => Some(line_empty_pair()),
        _ => None,
    }
}

fn parse_pairs_json(text: &str) -> Res<Vec<ConicPair>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Failure::Usage(format!("malformed JSON: {e}")))?;
    let records: Vec<PairRecord> = if value.is_array() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value(value).map(|r| vec![r])
    }
    .map_err(|e| Failure::Usage(format!("malformed pair: {e}")))?;
    records.iter().map(|r| r.to_pair().map_err(Failure::from)).collect()
}

/// Named pair, random batch or JSON file.
fn pair_source(spec: &str, seed: u64) -> Res<Vec<(String, ConicPair)>> {
    if let Some(p) = named_pair(spec) {
        return Ok(vec![(spec.to_string(), p)]);
    }
    if let Some(rest) = spec.strip_prefix("random:") {
        let mut parts = rest.split(':');
        let filter: ClassFilter = parts.next().unwrap_or("any").parse()?;
        let count: usize = parts
            .next()
            .unwrap_or("1")
            .parse()
            .map_err(|_| Failure::Usage(format!("bad count in {spec}")))?;
        return Ok(generate_pairs(seed, count, filter)
            .into_iter()
            .enumerate()
            .map(|(i, p)| (format!("random_{i}"), p))
            .collect());
    }
    let pairs = parse_pairs_json(&read(&PathBuf::from(spec))?)?;
    Ok(pairs.into_iter().enumerate().map(|(i, p)| (format!("pair_{i}"), p)).collect())
}

/// A pair from a file holding one record or a one-element list, or by name.
fn single_pair(input: &Option<PathBuf>, name: &Option<String>) -> Res<ConicPair> {
    match (input, name) {
        (Some(path), _) => {
            let mut pairs = parse_pairs_json(&read(path)?)?;
            if pairs.len() != 1 {
                return Err(Failure::Usage(format!("expected one pair, found {}", pairs.len())));
            }
            Ok(pairs.remove(0))
        }
        (None, Some(n)) => named_pair(n).ok_or_else(|| Failure::Usage(format!("unknown pair {n}"))),
        (None, None) => Ok(standard_pair()),
    }
}

fn solution_source(spec: &str) -> Res<Vec<(String, Solution)>> {
    let builtins = builtin_solutions();
    if spec == "builtin" {
        return Ok(builtins);
    }
    let path = PathBuf::from(spec);
    if path.exists() {
        let sols: Vec<Solution> = serde_json::from_str(&read(&path)?)
            .map_err(|e| Failure::Usage(format!("malformed solutions: {e}")))?;
        for s in &sols {
            s.validate()?;
        }
        return Ok(sols.into_iter().enumerate().map(|(i, s)| (format!("sol_{i}"), s)).collect());
    }
    spec.split(',')
        .map(|id| {
            builtins
                .iter()
                .find(|(n, _)| n == id)
                .cloned()
                .ok_or_else(|| Failure::Usage(format!("unknown solution {id}")))
        })
        .collect()
}

fn kind_name(k: DpcKind) -> &'static str {
    match k {
        DpcKind::Proper => "proper",
        DpcKind::Plane => "plane",
        DpcKind::Empty => "empty",
    }
}

fn trial_failed(r: &TrialReport, tol: f64) -> bool {
    r.status == TrialStatus::Ok && !(r.rel_diff <= tol)
}

/// Runs the command and returns the number of failed checks.
fn run(cli: Cli) -> Res<usize> {
    let g = &cli.global;
    let format = g.format;
    match cli.command {
        Command::Dpc { op } => match op {
            DpcOp::Encode { json, input } => {
                let text = match (json, input) {
                    (Some(j), _) => j,
                    (None, Some(p)) => read(&p)?,
                    (None, None) => return Err(Failure::Usage("dpc encode needs --json or --in".into())),
                };
                let h: Hypersphere =
                    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("malformed hypersphere: {e}")))?;
                let d = dpc_from_hypersphere(&h)?;
                let out = match format {
                    Some(Format::Csv) => format!(
                        "s0,s1,s2,s3,s4,s5\n{}\n",
                        d.0 .0.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(",")
                    ),
                    _ => pretty(&json!({ "dpc": d.0 .0, "kind": kind_name(classify_dpc(&d)) })),
                };
                emit(g, &out)?;
                Ok(0)
            }
            DpcOp::Decode { coords } => {
                if coords.len() != 6 {
                    return Err(Failure::Usage(format!("expected 6 coordinates, got {}", coords.len())));
                }
                let d = Dpc::new(Vec33::from_slice(&coords))?;
                let h = hypersphere_from_dpc(&d)?;
                emit(g, &pretty(&serde_json::to_value(h).expect("hypersphere serializes")))?;
                Ok(0)
            }
        },
        Command::Pair { op } => match op {
            PairOp::Gen { class, count } => {
                let filter: ClassFilter = class.parse()?;
                let records: Vec<PairRecord> = generate_pairs(g.seed, count, filter)
                    .iter()
                    .map(PairRecord::from_pair)
                    .collect();
                emit(g, &serde_json::to_string_pretty(&records).expect("pairs serialize"))?;
                Ok(0)
            }
            PairOp::Classify { input, pair } => {
                let p = single_pair(&input, &pair)?;
                let c = classify_pair(&p)?;
                let roots = |side: Side| classify_by_lambda(&p.conic(side)).map(|l| l.roots);
                let (ra, rb) = (roots(Side::S)?, roots(Side::Sp)?);
                let agree = nc_core::conics::pair_class_from_roots(ra, rb) == Some(c.class);
                let sides: Vec<_> = c
                    .sides
                    .iter()
                    .map(|s| {
                        json!({
                            "intersection_dim": s.intersection.dim(),
                            "signature": [s.signature.pos, s.signature.neg, s.signature.zero],
                            "plane_class": s.plane.map(|pl| format!("{:?}", pl.metric_class).to_lowercase()),
                        })
                    })
                    .collect();
                let line = match c.class {
                    nc_core::conics::PairClass::LineEmpty { line } => Some(if line == Side::S { "S" } else { "Sp" }),
                    _ => None,
                };
                let v = json!({
                    "class": c.class.name(),
                    "line_side": line,
                    "sides": sides,
                    "lambda_roots": [format!("{ra:?}").to_lowercase(), format!("{rb:?}").to_lowercase()],
                    "classifiers_agree": agree,
                });
                emit(g, &pretty(&v))?;
                Ok(usize::from(!agree))
            }
            PairOp::Sample { input, pair, samples } => {
                let p = single_pair(&input, &pair)?;
                emit(g, &samples_csv(&p, samples)?)?;
                Ok(0)
            }
        },
        Command::Mv { op } => match op {
            MvOp::Run { pairs, solutions } => {
                let tol = tolerance(g)?;
                let pairs = pair_source(&pairs, g.seed)?;
                let sols = solution_source(&solutions)?;
                let rows: Vec<TrialReport> = run_grid(&pairs, &sols, &QuadratureSpec::default())
                    .into_iter()
                    .collect::<Result<_, _>>()?;
                let failed = rows.iter().filter(|r| trial_failed(r, tol)).count();
                let out = match format {
                    Some(Format::Json) => serde_json::to_string_pretty(&rows).expect("reports serialize"),
                    _ => report_csv(&rows, timestamp(g)),
                };
                emit(g, &out)?;
                eprintln!("{} trials, {failed} above rel_diff {tol:e}", rows.len());
                Ok(failed)
            }
        },
        Command::Asgeirsson { count, solutions } => {
            let tol = tolerance(g)?;
            let sols = solution_source(&solutions)?;
            let spec = QuadratureSpec::default();
            let mut rows = Vec::new();
            for i in 0..count {
                let mut r = rng::stream(g.seed, i as u64);
                let t: Vec<f64> = (0..4).map(|_| rng::uniform(&mut r, -2.0, 2.0)).collect();
                let radius = rng::uniform(&mut r, 0.2, 2.0);
                for (id, u) in &sols {
                    let mut rep = asgeirsson_check(u, t[0], t[1], t[2], t[3], radius, &spec)?;
                    rep.pair_id = format!("tuple_{i}");
                    rep.solution_id = id.clone();
                    rows.push(rep);
                }
            }
            let failed = rows
                .iter()
                .filter(|r| r.status != TrialStatus::Ok || !(r.rel_diff <= tol))
                .count();
            let out = match format {
                Some(Format::Json) => serde_json::to_string_pretty(&rows).expect("reports serialize"),
                _ => report_csv(&rows, timestamp(g)),
            };
            emit(g, &out)?;
            eprintln!("{} trials, {failed} failed at rel_diff {tol:e}", rows.len());
            Ok(failed)
        }
        Command::Ruled { op } => match op {
            RuledOp::Verify {
                pair,
                samples,
                lines_out,
                surface_out,
            } => {
                let p = match named_pair(&pair) {
                    Some(p) => p,
                    None => parse_pair(&read(&PathBuf::from(&pair))?)?,
                };
                let r = verify_rulsurf(&p, samples)?;
                if let Some(path) = lines_out {
                    write_file(&path, &lines_csv(&r))?;
                }
                if let Some(path) = surface_out {
                    write_file(&path, &surface_csv(&r))?;
                }
                let quadric = r.quadric.map(|f| f.quadric);
                let v = json!({
                    "class": r.class.name(),
                    "rulings": r.rulings.len(),
                    "at_infinity": r.at_infinity,
                    "too_far": r.too_far,
                    "cross_max": r.cross_max,
                    "cross_ok": r.cross_ok(),
                    "skew_ok": r.skew_ok(),
                    "quadric_ok": r.quadric_ok(),
                    "regulus_ok": r.regulus_ok(),
                    "quadric": quadric.map(|q| q.q),
                    "quadric_residual": r.quadric.map(|f| f.max_residual),
                    "deviation_from_h0": quadric.map(|q| q.max_deviation(&Quadric::h0())),
                    "hyperboloid": quadric.map(|q| q.is_hyperboloid(1e-6)),
                    "hyperbolic_paraboloid": quadric.map(|q| q.is_hyperbolic_paraboloid(1e-6)),
                    "regulus_max": r.regulus_max,
                    "passed": r.passed(),
                });
                emit(g, &pretty(&v))?;
                Ok(usize::from(!r.passed()))
            }
        },
        Command::Xray { op } => match op {
            XrayOp::Check { samples } => {
                let mut failed = 0;
                let mut certs = Vec::new();
                for (i, (id, u)) in builtin_solutions().into_iter().enumerate() {
                    if !id.starts_with("xray") {
                        continue;
                    }
                    let c = uhe_certificate(&u, samples, rng::derive(g.seed, i as u64));
                    let ok = c.max_residual[0] <= 1e-4 && (c.order - 2.0).abs() <= 0.2;
                    failed += usize::from(!ok);
                    certs.push(json!({ "id": id, "certificate": c, "passed": ok }));
                }
                emit(g, &pretty(&serde_json::Value::Array(certs)))?;
                Ok(failed)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(n) => {
            eprintln!("{n} check(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
