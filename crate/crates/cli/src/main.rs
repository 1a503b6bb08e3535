//! `brickdist`: command-line sweeps over the annealed distinguishability
//! engine. Every run prints one table (CSV or flat JSON) whose bytes depend
//! only on the resolved parameters; timing goes to stderr.
//!
//! Exit codes: 0 success, 2 configuration error (bad flags, bad config file,
//! invalid geometry or profile), 3 resource guard (state-vector size cap,
//! evaluation at the critical ratio).

mod config;
mod output;
mod range;

use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use brickdist::distance::{infinite_time_mixed, infinite_time_pure, DistanceSeries};
use brickdist::haar::{
    folded_gate_check, haar_moment_check, mc_distance_grid, pair_product_pair, w_pair, StatePair,
};
use brickdist::markov::{
    build_dissipative, critical_a, markov_distance, open_longtime_distance, perturbed_eigenvalue,
    second_eigenvalue_numeric, DissipationSchedule,
};
use brickdist::profiles::{
    parse_profile_spec, rational_from_decimal, uniform_one, w_self_profile,
    w_state_profile_from_omega, OverlapProfile,
};
use brickdist::{CircuitGeometry, Error as CoreError};

use config::Resolver;
use output::{Cell, OutputRecord};
use range::{parse_f64_range, parse_u32_range, parse_u64_range};

#[derive(Parser)]
#[command(
    name = "brickdist",
    version,
    about = "Initial-state distinguishability in random brickwork circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact annealed squared distance against circuit depth
    ExactSweep(SweepArgs),
    /// Stationary (deep-circuit) distance against cut position
    InfiniteTime(SweepArgs),
    /// Dissipative-chain sweep over the edge-damping amplitude
    Markov(SweepArgs),
    /// Preset survey datasets (1: stationary profiles, 2: product-pair
    /// relaxation, 3: excitation-pair relaxation, 4: dissipative memory loss)
    Figure(FigureArgs),
    /// Monte Carlo cross-check of the exact engine on small chains
    McValidate(SweepArgs),
}

/// Every tunable flag. Each command consumes the subset it documents and
/// rejects meaningless combinations; values left unset fall back to the
/// config file (`--config`), then to per-command defaults.
#[derive(Args, Debug, Clone, Default)]
struct SweepArgs {
    /// Local dimension (q >= 2)
    #[arg(long)]
    q: Option<u32>,
    /// Chain length 2L (even, >= 4)
    #[arg(long = "two-l")]
    two_l: Option<u32>,
    /// Cut position; range `a..b[..step]` where the command sweeps cuts
    #[arg(long)]
    x: Option<String>,
    /// Initial pair: `pair:beta=0.7[,gamma=..]`, `w:omega=0.7`,
    /// `w:c1=..,c2=..`, `mixed:cross=..,s=..,sp=..`, or `table:@file`
    #[arg(long)]
    profile: Option<String>,
    /// Circuit depth; range `a..b[..step]` for depth sweeps
    #[arg(long)]
    t: Option<String>,
    /// Dissipation amplitude; range `a..b[..step]` for amplitude sweeps
    #[arg(long)]
    a: Option<String>,
    /// Dissipation-schedule exponent
    #[arg(long)]
    exponent: Option<f64>,
    /// Dissipative-chain steps T
    #[arg(long)]
    depth: Option<u64>,
    /// Monte Carlo realizations
    #[arg(long)]
    n: Option<u64>,
    /// Monte Carlo base seed (realization r uses substream r)
    #[arg(long)]
    seed: Option<u64>,
    /// Write the table to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv (default) or json
    #[arg(long)]
    format: Option<String>,
    /// Significant digits for floating-point columns (default 12)
    #[arg(long)]
    precision: Option<usize>,
    /// `key = value` defaults file; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// Which preset dataset
    #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
    which: u8,
    #[command(flatten)]
    rest: SweepArgs,
}

#[derive(Clone, Copy, Debug)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("format '{other}' is not one of csv, json"),
        }
    }
}

struct OutputOptions {
    format: Format,
    precision: usize,
    out: Option<PathBuf>,
}

fn resolve_common(args: &SweepArgs) -> Result<(Resolver, OutputOptions)> {
    let res = Resolver::new(args.config.as_ref())?;
    let format = match res.string("format", args.format.as_ref()) {
        None => Format::Csv,
        Some(f) => Format::parse(&f)?,
    };
    let precision = res.typed("precision", args.precision)?.unwrap_or(12);
    ensure!(
        (1..=17).contains(&precision),
        "precision {precision} must lie in 1..=17"
    );
    let out = args
        .out
        .clone()
        .or_else(|| res.string("out", None).map(PathBuf::from));
    Ok((res, OutputOptions { format, precision, out }))
}

fn main() {
    let started = std::time::Instant::now();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => eprintln!("wall clock: {:.3} s", started.elapsed().as_secs_f64()),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(exit_code_for(&err));
        }
    }
}

/// 3 for resource guards (state-vector cap, critical-ratio pole), 2 for
/// everything else a run can reject.
fn exit_code_for(err: &anyhow::Error) -> i32 {
    let guard = err.chain().any(|cause| {
        cause.downcast_ref::<CoreError>().is_some_and(|e| {
            matches!(e, CoreError::SizeGuard { .. } | CoreError::CriticalRatio)
        })
    });
    if guard {
        3
    } else {
        2
    }
}

fn run(cli: Cli) -> Result<()> {
    let (record, opts) = match cli.command {
        Command::ExactSweep(args) => cmd_exact_sweep(&args)?,
        Command::InfiniteTime(args) => cmd_infinite_time(&args)?,
        Command::Markov(args) => cmd_markov(&args)?,
        Command::Figure(args) => cmd_figure(args.which, &args.rest)?,
        Command::McValidate(args) => cmd_mc_validate(&args)?,
    };
    emit(&record, &opts)
}

fn emit(record: &OutputRecord, opts: &OutputOptions) -> Result<()> {
    let payload = match opts.format {
        Format::Csv => record.to_csv(),
        Format::Json => record.to_json(),
    };
    match &opts.out {
        Some(path) => std::fs::write(path, payload)
            .with_context(|| format!("cannot write '{}'", path.display()))?,
        None => {
            use std::io::Write as _;
            std::io::stdout().write_all(payload.as_bytes())?;
        }
    }
    Ok(())
}

/// Cross profile plus the matching self profiles for the depth-resolved
/// commands. Product-like and tabulated crosses pair with unit self
/// profiles; the excitation profile carries its own non-flat self overlap;
/// the mixed stationary descriptor has no depth dependence to sweep.
fn walk_profile_triple(
    spec: &str,
    two_l: u32,
) -> Result<(OverlapProfile, OverlapProfile, OverlapProfile)> {
    let cross = parse_profile_spec(spec, two_l)
        .with_context(|| format!("profile '{spec}'"))?;
    match &cross {
        OverlapProfile::MixedLongTime { .. } => {
            bail!("profile '{spec}' only defines the stationary value; use infinite-time")
        }
        OverlapProfile::WState { .. } => {
            let selfp = w_self_profile(two_l);
            Ok((cross, selfp.clone(), selfp))
        }
        _ => Ok((cross, uniform_one(), uniform_one())),
    }
}

fn require<T>(value: Option<T>, what: &str) -> Result<T> {
    value.with_context(|| format!("missing required parameter: {what}"))
}

fn cmd_exact_sweep(args: &SweepArgs) -> Result<(OutputRecord, OutputOptions)> {
    let (res, opts) = resolve_common(args)?;
    let q = res.typed("q", args.q)?.unwrap_or(2);
    let two_l = require(res.typed("two-l", args.two_l)?, "--two-l")?;
    let x_spec = require(res.string("x", args.x.as_ref()), "--x")?;
    let xs = parse_u32_range(&x_spec)?;
    ensure!(
        xs.len() == 1,
        "exact-sweep takes a single cut; the figure presets sweep several"
    );
    let x = xs[0];
    let profile_spec = require(res.string("profile", args.profile.as_ref()), "--profile")?;
    let t_spec = res
        .string("t", args.t.as_ref())
        .unwrap_or_else(|| "0..100".to_string());
    let times = parse_u64_range(&t_spec)?;

    let geom = CircuitGeometry::new(q, two_l, x)?;
    let (cross, self_a, self_b) = walk_profile_triple(&profile_spec, two_l)?;
    let series = DistanceSeries::compute(&geom, cross, self_a, self_b, &times)?;

    let rows = series
        .times
        .iter()
        .zip(&series.values)
        .map(|(&t, &v)| vec![Cell::UInt(t), Cell::Float(v), Cell::Str("exact".into())])
        .collect();
    let record = OutputRecord {
        command: "exact-sweep",
        config: vec![
            ("q".into(), q.to_string()),
            ("two-l".into(), two_l.to_string()),
            ("x".into(), x.to_string()),
            ("profile".into(), profile_spec),
            ("t".into(), t_spec),
            ("precision".into(), opts.precision.to_string()),
        ],
        columns: vec!["t", "delta_sq", "provenance"],
        rows,
        precision: opts.precision,
    };
    Ok((record, opts))
}

fn cmd_infinite_time(args: &SweepArgs) -> Result<(OutputRecord, OutputOptions)> {
    let (res, opts) = resolve_common(args)?;
    let q = res.typed("q", args.q)?.unwrap_or(2);
    let two_l = require(res.typed("two-l", args.two_l)?, "--two-l")?;
    let x_spec = res
        .string("x", args.x.as_ref())
        .unwrap_or_else(|| format!("0..{two_l}"));
    let xs = parse_u32_range(&x_spec)?;
    let profile_spec = require(res.string("profile", args.profile.as_ref()), "--profile")?;
    let profile = parse_profile_spec(&profile_spec, two_l)
        .with_context(|| format!("profile '{profile_spec}'"))?;

    let mut rows = Vec::with_capacity(xs.len());
    for &x in &xs {
        let value = match &profile {
            OverlapProfile::MixedLongTime { .. } => infinite_time_mixed(q, two_l, x, &profile)?,
            pure => infinite_time_pure(q, two_l, x, pure.evaluate_f64(two_l)?)?,
        };
        rows.push(vec![
            Cell::UInt(u64::from(x)),
            Cell::Float(value),
            Cell::Str("closed-form".into()),
        ]);
    }
    let record = OutputRecord {
        command: "infinite-time",
        config: vec![
            ("q".into(), q.to_string()),
            ("two-l".into(), two_l.to_string()),
            ("x".into(), x_spec),
            ("profile".into(), profile_spec),
            ("precision".into(), opts.precision.to_string()),
        ],
        columns: vec!["x", "delta_sq_infinity", "provenance"],
        rows,
        precision: opts.precision,
    };
    Ok((record, opts))
}

fn cmd_markov(args: &SweepArgs) -> Result<(OutputRecord, OutputOptions)> {
    let (res, opts) = resolve_common(args)?;
    let q = res.typed("q", args.q)?.unwrap_or(2);
    let two_l = require(res.typed("two-l", args.two_l)?, "--two-l")?;
    let x_spec = require(res.string("x", args.x.as_ref()), "--x")?;
    let xs = parse_u32_range(&x_spec)?;
    ensure!(xs.len() == 1, "markov takes a single cut");
    let x = xs[0];
    let profile_spec = require(res.string("profile", args.profile.as_ref()), "--profile")?;
    let a_spec = res
        .string("a", args.a.as_ref())
        .unwrap_or_else(|| "0..1..0.05".to_string());
    let amplitudes = parse_f64_range(&a_spec)?;
    let exponent = res.typed("exponent", args.exponent)?.unwrap_or(1.0);
    let depth = res
        .typed("depth", args.depth)?
        .unwrap_or(10 * u64::from(two_l));

    let geom = CircuitGeometry::new(q, two_l, x)?;
    let (cross, self_a, self_b) = walk_profile_triple(&profile_spec, two_l)?;
    let a_c = critical_a(q, two_l, x)?;

    let mut rows = Vec::with_capacity(amplitudes.len());
    for &a in &amplitudes {
        let sched = DissipationSchedule::new(a, exponent, depth)?;
        let matrix = build_dissipative(&geom, &sched)?;
        let delta = markov_distance(&geom, &matrix, depth, &cross, &self_a, &self_b)?;
        let lambda_numeric = second_eigenvalue_numeric(&matrix);
        let lambda_perturbative = perturbed_eigenvalue(&geom, &sched)?;
        rows.push(vec![
            Cell::Float(a),
            Cell::Float(delta),
            Cell::Float(lambda_numeric),
            Cell::Float(lambda_perturbative),
            Cell::Float(a_c),
            Cell::Str("closed-form".into()),
        ]);
    }
    let record = OutputRecord {
        command: "markov",
        config: vec![
            ("q".into(), q.to_string()),
            ("two-l".into(), two_l.to_string()),
            ("x".into(), x.to_string()),
            ("profile".into(), profile_spec),
            ("a".into(), a_spec),
            ("exponent".into(), exponent.to_string()),
            ("depth".into(), depth.to_string()),
            ("precision".into(), opts.precision.to_string()),
        ],
        columns: vec![
            "a",
            "delta_sq_T",
            "lambda_numeric",
            "lambda_perturbative",
            "a_c",
            "provenance",
        ],
        rows,
        precision: opts.precision,
    };
    Ok((record, opts))
}

fn cmd_figure(which: u8, args: &SweepArgs) -> Result<(OutputRecord, OutputOptions)> {
    let overridden = args.q.is_some()
        || args.two_l.is_some()
        || args.x.is_some()
        || args.profile.is_some()
        || args.t.is_some()
        || args.a.is_some()
        || args.exponent.is_some()
        || args.depth.is_some()
        || args.n.is_some()
        || args.seed.is_some();
    ensure!(
        !overridden,
        "figure presets are fixed; only --out, --format, --precision, and --config apply"
    );
    let (_, opts) = resolve_common(args)?;
    let record = match which {
        1 => figure_stationary_profiles(&opts)?,
        2 => figure_relaxation(false, &opts)?,
        3 => figure_relaxation(true, &opts)?,
        4 => figure_dissipative(&opts)?,
        _ => unreachable!("clap range guard"),
    };
    Ok((record, opts))
}

/// Preset 1: stationary distance against cut position at 2L = 200 for five
/// squared global overlaps.
fn figure_stationary_profiles(opts: &OutputOptions) -> Result<OutputRecord> {
    let (q, two_l) = (2, 200);
    let omegas = [0.1, 0.3, 0.5, 0.7, 0.9];
    let mut rows = Vec::with_capacity(omegas.len() * (two_l as usize + 1));
    for &omega in &omegas {
        for x in 0..=two_l {
            rows.push(vec![
                Cell::Float(omega),
                Cell::UInt(u64::from(x)),
                Cell::Float(infinite_time_pure(q, two_l, x, omega)?),
                Cell::Str("closed-form".into()),
            ]);
        }
    }
    Ok(OutputRecord {
        command: "figure",
        config: vec![
            ("figure".into(), "1".into()),
            ("q".into(), q.to_string()),
            ("two-l".into(), two_l.to_string()),
            ("omega".into(), "0.1,0.3,0.5,0.7,0.9".into()),
            ("x".into(), format!("0..{two_l}")),
            ("precision".into(), opts.precision.to_string()),
        ],
        columns: vec!["omega", "x", "delta_sq_infinity", "provenance"],
        rows,
        precision: opts.precision,
    })
}

/// Presets 2 and 3: depth-resolved curves at 2L = 200 for six cuts, for the
/// product pair (beta = 0.7) or the excitation pair (omega = 0.7).
fn figure_relaxation(excitation: bool, opts: &OutputOptions) -> Result<OutputRecord> {
    let (q, two_l) = (2, 200u32);
    let xs = [11u32, 51, 91, 111, 151, 191];
    let times: Vec<u64> = (0..=400).collect();
    let (cross, self_a, self_b) = if excitation {
        let cross = w_state_profile_from_omega(rational_from_decimal("0.7")?, two_l)?;
        let selfp = w_self_profile(two_l);
        (cross, selfp.clone(), selfp)
    } else {
        let cross = parse_profile_spec("pair:beta=0.7", two_l)?;
        (cross, uniform_one(), uniform_one())
    };
    let curves: Result<Vec<(u32, DistanceSeries)>, CoreError> = xs
        .par_iter()
        .map(|&x| {
            let geom = CircuitGeometry::new(q, two_l, x)?;
            let series = DistanceSeries::compute(
                &geom,
                cross.clone(),
                self_a.clone(),
                self_b.clone(),
                &times,
            )?;
            Ok((x, series))
        })
        .collect();
    let mut rows = Vec::with_capacity(xs.len() * times.len());
    for (x, series) in curves? {
        for (&t, &v) in series.times.iter().zip(&series.values) {
            rows.push(vec![
                Cell::UInt(u64::from(x)),
                Cell::UInt(t),
                Cell::Float(v),
                Cell::Str("exact".into()),
            ]);
        }
    }
    Ok(OutputRecord {
        command: "figure",
        config: vec![
            ("figure".into(), if excitation { "3".into() } else { "2".into() }),
            ("q".into(), q.to_string()),
            ("two-l".into(), two_l.to_string()),
            (
                "profile".into(),
                if excitation { "w:omega=0.7".into() } else { "pair:beta=0.7".into() },
            ),
            ("x".into(), "11,51,91,111,151,191".into()),
            ("t".into(), "0..400".into()),
            ("precision".into(), opts.precision.to_string()),
        ],
        columns: vec!["x", "t", "delta_sq", "provenance"],
        rows,
        precision: opts.precision,
    })
}

/// Preset 4: deep-circuit distance under edge dissipation at 2L = 100,
/// omega = 0.7, for three cuts, swept over the damping amplitude. The
/// `markov` command provides the step-resolved numeric route for odd cuts.
fn figure_dissipative(opts: &OutputOptions) -> Result<OutputRecord> {
    let (q, two_l, omega) = (2, 100u32, 0.7);
    let xs = [75u32, 90, 100];
    let amplitudes = parse_f64_range("0..2..0.02")?;
    let mut rows = Vec::with_capacity(xs.len() * amplitudes.len());
    for &x in &xs {
        let a_c = critical_a(q, two_l, x)?;
        for &a in &amplitudes {
            rows.push(vec![
                Cell::UInt(u64::from(x)),
                Cell::Float(a),
                Cell::Float(open_longtime_distance(q, two_l, x, a, omega)?),
                Cell::Float(a_c),
                Cell::Str("closed-form".into()),
            ]);
        }
    }
    Ok(OutputRecord {
        command: "figure",
        config: vec![
            ("figure".into(), "4".into()),
            ("q".into(), q.to_string()),
            ("two-l".into(), two_l.to_string()),
            ("omega".into(), omega.to_string()),
            ("x".into(), "75,90,100".into()),
            ("a".into(), "0..2..0.02".into()),
            ("precision".into(), opts.precision.to_string()),
        ],
        columns: vec!["x", "a", "delta_sq_longtime", "a_c", "provenance"],
        rows,
        precision: opts.precision,
    })
}

/// Build the concrete state pair a profile spec describes. Only the two
/// constructible families make sense here; the library parser does the
/// validation, then the matching constructor realizes the states.
fn mc_pair_from_spec(spec: &str, q: u32, two_l: u32) -> Result<StatePair> {
    let profile =
        parse_profile_spec(spec, two_l).with_context(|| format!("profile '{spec}'"))?;
    match profile {
        OverlapProfile::PairProduct { beta, gamma } => {
            ensure!(
                beta == gamma,
                "the product-pair constructor realizes gamma = beta; drop gamma or set it equal"
            );
            Ok(pair_product_pair(q, two_l, &beta)?)
        }
        OverlapProfile::WState { c1, c2, .. } => {
            ensure!(q == 2, "excitation pairs are defined on qubits (q = 2)");
            Ok(w_pair(two_l, c1, c2)?)
        }
        _ => bail!(
            "Monte Carlo validation needs a constructible pair: pair:beta=... or w:omega=... / w:c1=...,c2=..."
        ),
    }
}

fn cmd_mc_validate(args: &SweepArgs) -> Result<(OutputRecord, OutputOptions)> {
    let (res, opts) = resolve_common(args)?;
    let q = res.typed("q", args.q)?.unwrap_or(2);
    let two_ls = match res.typed("two-l", args.two_l)? {
        Some(v) => vec![v],
        None => vec![6, 8],
    };
    let x_spec = res.string("x", args.x.as_ref());
    let t_spec = res.string("t", args.t.as_ref());
    let xs = match &x_spec {
        Some(s) => parse_u32_range(s)?,
        None => vec![1, 3, 5],
    };
    let ts = match &t_spec {
        Some(s) => parse_u64_range(s)?,
        None => (0..=4).collect(),
    };
    let n = res.typed("n", args.n)?.unwrap_or(20_000);
    let seed = res.typed("seed", args.seed)?.unwrap_or(2024);
    let profile_specs: Vec<String> = match res.string("profile", args.profile.as_ref()) {
        Some(spec) => vec![spec],
        None => {
            ensure!(
                q == 2,
                "the default validation grid includes a qubit excitation pair; \
                 pass --profile pair:beta=... for q != 2"
            );
            vec!["pair:beta=0.7".to_string(), "w:omega=0.7".to_string()]
        }
    };

    let mut rows = Vec::new();
    for &two_l in &two_ls {
        for spec in &profile_specs {
            let pair = mc_pair_from_spec(spec, q, two_l)?;
            let grid = mc_distance_grid(&pair, &xs, &ts, n, seed)?;
            for (xi, &x) in grid.xs.iter().enumerate() {
                let geom = CircuitGeometry::new(q, two_l, x)?;
                for (ti, &t) in grid.ts.iter().enumerate() {
                    let est = grid.cells[xi][ti];
                    let reference = brickdist::distance::annealed_distance_sq(
                        &geom,
                        t,
                        &pair.cross,
                        &pair.self_a,
                        &pair.self_b,
                    )?;
                    let diff = est.mean - reference;
                    // deviations below the shared f64 round-off floor are
                    // not statistical information, whatever the stderr says
                    let z = if diff.abs() <= 1e-12 {
                        0.0
                    } else if est.stderr > 0.0 {
                        diff / est.stderr
                    } else {
                        f64::INFINITY
                    };
                    rows.push(vec![
                        Cell::Str("grid".into()),
                        Cell::UInt(u64::from(two_l)),
                        Cell::Str(spec.clone()),
                        Cell::UInt(u64::from(x)),
                        Cell::UInt(t),
                        Cell::Float(est.mean),
                        Cell::Float(est.stderr),
                        Cell::Float(reference),
                        Cell::Float(z),
                        Cell::Str("mc".into()),
                    ]);
                }
            }
        }
    }

    // ensemble-level checks: the folded two-site gate average and the
    // matrix-entry moments of the unitary sampler
    let folded = folded_gate_check(q, n, seed)?;
    let folded_z = if folded.mean_residual_stderr > 0.0 {
        folded.mean_residual / folded.mean_residual_stderr
    } else {
        0.0
    };
    rows.push(vec![
        Cell::Str("folded-gate".into()),
        Cell::Null,
        Cell::Null,
        Cell::Null,
        Cell::Null,
        Cell::Float(folded.mean_residual),
        Cell::Float(folded.mean_residual_stderr),
        Cell::Float(0.0),
        Cell::Float(folded_z),
        Cell::Str("mc".into()),
    ]);
    let moments = haar_moment_check((q * q) as usize, n, seed)?;
    let moment_z = if moments.abs2_stderr > 0.0 {
        (moments.abs2_mean - moments.expected_abs2) / moments.abs2_stderr
    } else {
        0.0
    };
    rows.push(vec![
        Cell::Str("haar-moment".into()),
        Cell::Null,
        Cell::Null,
        Cell::Null,
        Cell::Null,
        Cell::Float(moments.abs2_mean),
        Cell::Float(moments.abs2_stderr),
        Cell::Float(moments.expected_abs2),
        Cell::Float(moment_z),
        Cell::Str("mc".into()),
    ]);

    let join_u32 = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    let record = OutputRecord {
        command: "mc-validate",
        config: vec![
            ("q".into(), q.to_string()),
            ("two-l".into(), join_u32(&two_ls)),
            ("x".into(), join_u32(&xs)),
            (
                "t".into(),
                ts.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
            ),
            ("profile".into(), profile_specs.join(";")),
            ("n".into(), n.to_string()),
            ("seed".into(), seed.to_string()),
            ("precision".into(), opts.precision.to_string()),
        ],
        columns: vec![
            "check",
            "two_l",
            "profile",
            "x",
            "t",
            "value",
            "stderr",
            "reference",
            "z",
            "provenance",
        ],
        rows,
        precision: opts.precision,
    };
    Ok((record, opts))
}
