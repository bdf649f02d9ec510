//! Command-line front end. [`run`] parses an argument vector, executes one
//! subcommand and returns the process exit code:
//! 0 on success, 1 on a failed check or runtime error, 2 on a usage error.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use locfree_core::braid::{bounds_report, inequality_report};
use locfree_core::counting::spectrum::{charpoly_eval, charpoly_scale, cosine_formula, spectrum_numeric};
use locfree_core::counting::{growth_rate, limit_growth_rate, log_volume_estimate, volume_sequence, CountVariant};
use locfree_core::numfmt::sig12;
use locfree_core::oracle::{distribution_csv, exact_distribution, verify_counts, DEFAULT_BUDGET};
use locfree_core::walk::{
    roof_support_enumerate, run_walk, simulate_roof_chain, snapshot_csv, Boundary, WalkMode, WalkParams, WalkReport,
};
use locfree_core::Error;

#[derive(Parser, Debug)]
#[command(name = "locfree", version, about = "Counting, random walks and bounds for locally free groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact number of elements of each length K = 1..=k-max.
    Count(CountArgs),
    /// Successive-ratio logarithmic volume log(V(K)/V(K-1)) for K = 2..=k-max.
    Volume(CountArgs),
    /// Eigenvalues of the n×n transfer matrix.
    Spectrum(SpectrumArgs),
    /// Seeded random walk with drift, roof, entropy and heap statistics.
    Walk(WalkArgs),
    /// The roof Markov chain, or exhaustive roof-support counts.
    RoofChain(RoofChainArgs),
    /// Compare exact formulas against brute-force enumeration.
    OracleVerify(OracleArgs),
    /// Volume and drift bounds for the braid group at finite n.
    BraidBounds(BraidArgs),
    /// The discrepancy l·v - h and its closed form over α in (-1/2, 1/2).
    Inequality(InequalityArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Group,
    Semigroup,
    Projective,
    Restricted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Group,
    Semigroup,
}

impl From<ModeArg> for WalkMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Group => WalkMode::Group,
            ModeArg::Semigroup => WalkMode::Semigroup,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BoundaryArg {
    Open,
    Periodic,
}

#[derive(Args, Debug)]
struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Order r >= 2 of every generator; required iff --variant restricted.
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    n: u32,
    #[arg(long = "k-max")]
    k_max: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long)]
    n: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct WalkArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    steps: u64,
    #[arg(long)]
    trials: u32,
    #[arg(long)]
    seed: u64,
    /// Steps discarded before the stationary window [default: 10·n].
    #[arg(long = "burn-in")]
    burn_in: Option<u64>,
    /// Record the top-level profile of trial 0 every this many steps (0 = off).
    /// With CSV output the snapshot table replaces the summary row.
    #[arg(long = "snapshot-every", default_value_t = 0)]
    snapshot_every: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct RoofChainArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 1_000_000)]
    steps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Steps discarded before averaging [default: 10·n].
    #[arg(long = "burn-in")]
    burn_in: Option<u64>,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Open)]
    boundary: BoundaryArg,
    /// Instead of simulating, count roof supports on 1..=n columns (n <= 30).
    #[arg(long)]
    supports: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long = "n-max", default_value_t = 4)]
    n_max: u32,
    #[arg(long = "k-max", default_value_t = 7)]
    k_max: u32,
    /// Cap on stored states; exceeding it is an error.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Export the exact walk distribution for --mode, --n, --steps instead.
    #[arg(long)]
    distribution: bool,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    steps: Option<u32>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct BraidArgs {
    #[arg(long)]
    n: u32,
    /// Roof-change asymmetry α, |α| < 1/2.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Measured drift l [default: upper bound (2-α)/(3-α)].
    #[arg(long)]
    drift: Option<f64>,
    /// Measured entropy h [default: log(3-α)].
    #[arg(long)]
    entropy: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct InequalityArgs {
    #[arg(long, allow_negative_numbers = true)]
    volume: f64,
    #[arg(long, allow_negative_numbers = true)]
    drift: f64,
    #[arg(long, allow_negative_numbers = true)]
    entropy: f64,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Usage(String),
    Check(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::IndexOutOfRange { .. } | Error::WindowTooLong { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Resolved flags of one invocation, in a fixed order.
struct Flags {
    command: &'static str,
    pairs: Vec<(&'static str, String)>,
}

impl Flags {
    fn new(command: &'static str) -> Self {
        Flags {
            command,
            pairs: Vec::new(),
        }
    }

    fn with(mut self, name: &'static str, value: impl ToString) -> Self {
        self.pairs.push((name, value.to_string()));
        self
    }

    /// A flag without a value.
    fn switch(mut self, name: &'static str) -> Self {
        self.pairs.push((name, String::new()));
        self
    }

    fn header(&self) -> String {
        let mut s = format!("# locfree {}", self.command);
        for (k, v) in &self.pairs {
            if v.is_empty() {
                write!(s, " --{k}").unwrap();
            } else {
                write!(s, " --{k} {v}").unwrap();
            }
        }
        s.push('\n');
        s
    }

    fn json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        for (k, v) in &self.pairs {
            let value = if v.is_empty() { json!(true) } else { json!(v) };
            m.insert((*k).into(), value);
        }
        Value::Object(m)
    }
}

/// What a subcommand produced: CSV text without the flag comment, and the
/// JSON payload without the flag record.
struct Rendered {
    csv: String,
    json: Value,
}

fn emit(flags: &Flags, output: &Output, r: Rendered, stdout: &mut dyn Write) -> Outcome<()> {
    let text = match output.format {
        Format::Csv => flags.header() + &r.csv,
        Format::Json => {
            let mut obj = match r.json {
                Value::Object(m) => m,
                other => {
                    let mut m = Map::new();
                    m.insert("rows".into(), other);
                    m
                }
            };
            obj.insert("flags".into(), flags.json());
            serde_json::to_string_pretty(&Value::Object(obj)).unwrap() + "\n"
        }
    };
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Runtime(format!("cannot write output: {e}"))),
    }
}

fn parse_variant(v: VariantArg, r: Option<u32>) -> Outcome<CountVariant> {
    match (v, r) {
        (VariantArg::Restricted, None) => Err(usage("--variant restricted needs --r <u32> (r >= 2)")),
        (VariantArg::Restricted, Some(r)) if r < 2 => Err(usage(format!("--r {r} is invalid: the order must be >= 2"))),
        (VariantArg::Restricted, Some(r)) => Ok(CountVariant::Restricted(r)),
        (_, Some(_)) => Err(usage("--r is only valid with --variant restricted")),
        (VariantArg::Group, None) => Ok(CountVariant::Group),
        (VariantArg::Semigroup, None) => Ok(CountVariant::Semigroup),
        (VariantArg::Projective, None) => Ok(CountVariant::Projective),
    }
}

fn check_range<T: PartialOrd + std::fmt::Display>(flag: &str, value: T, lo: T, hi: T, hint: &str) -> Outcome<()> {
    if value < lo || value > hi {
        Err(usage(format!("--{flag} {value} is out of range [{lo}, {hi}]: {hint}")))
    } else {
        Ok(())
    }
}

const MAX_COUNT_N: u32 = 512;
const MAX_K: u32 = 20_000;

fn count_flags(name: &'static str, a: &CountArgs, variant: CountVariant) -> Flags {
    let mut f = Flags::new(name).with("variant", variant_name(a.variant));
    if let CountVariant::Restricted(r) = variant {
        f = f.with("r", r);
    }
    f.with("n", a.n).with("k-max", a.k_max).with("format", format_name(a.output.format))
}

fn variant_name(v: VariantArg) -> &'static str {
    match v {
        VariantArg::Group => "group",
        VariantArg::Semigroup => "semigroup",
        VariantArg::Projective => "projective",
        VariantArg::Restricted => "restricted",
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn cmd_count(a: &CountArgs, stdout: &mut dyn Write) -> Outcome<()> {
    let variant = parse_variant(a.variant, a.r)?;
    check_range("n", a.n, 1, MAX_COUNT_N, "number of generators")?;
    check_range("k-max", a.k_max, 1, MAX_K, "largest word length")?;
    let counts = volume_sequence(a.n, a.k_max, variant)?;
    let label = variant.label();
    let mut csv = String::from("variant,n,K,count\n");
    let mut rows = Vec::new();
    for (k, c) in counts.iter().enumerate() {
        writeln!(csv, "{label},{},{},{c}", a.n, k + 1).unwrap();
        rows.push(json!({"variant": label, "n": a.n, "K": k + 1, "count": c.to_string()}));
    }
    let flags = count_flags("count", a, variant);
    emit(&flags, &a.output, Rendered { csv, json: json!({ "rows": rows }) }, stdout)
}

fn cmd_volume(a: &CountArgs, stdout: &mut dyn Write) -> Outcome<()> {
    let variant = parse_variant(a.variant, a.r)?;
    check_range("n", a.n, 1, MAX_COUNT_N, "number of generators")?;
    check_range("k-max", a.k_max, 2, MAX_K, "a ratio needs K >= 2")?;
    let est = log_volume_estimate(a.n, a.k_max, variant)?;
    let label = variant.label();
    let mut csv = String::from("variant,n,K,log_ratio\n");
    let mut rows = Vec::new();
    for (i, r) in est.log_ratios.iter().enumerate() {
        writeln!(csv, "{label},{},{},{}", a.n, i + 2, sig12(*r)).unwrap();
        rows.push(json!({"variant": label, "n": a.n, "K": i + 2, "log_ratio": sig12(*r).parse::<f64>().unwrap()}));
    }
    let finite = growth_rate(a.n, variant)?.ln();
    let limit = limit_growth_rate(variant)?.ln();
    let flags = count_flags("volume", a, variant);
    let payload = json!({
        "rows": rows,
        "log_volume_finite_n": sig12(finite).parse::<f64>().unwrap(),
        "log_volume_limit": sig12(limit).parse::<f64>().unwrap(),
    });
    emit(&flags, &a.output, Rendered { csv, json: payload }, stdout)
}

fn cmd_spectrum(a: &SpectrumArgs, stdout: &mut dyn Write) -> Outcome<()> {
    check_range("n", a.n, 1, 200, "exact characteristic polynomials get slow beyond this")?;
    let eig = spectrum_numeric(a.n)?;
    let plus2 = cosine_formula(a.n, 2);
    let plus1 = cosine_formula(a.n, 1);
    let mut csv = String::from("n,k,eigenvalue,cosine_n_plus_2,cosine_n_plus_1,relative_residual\n");
    let mut rows = Vec::new();
    for (k, &l) in eig.iter().enumerate() {
        let residual = charpoly_eval(a.n, l) / charpoly_scale(a.n, l).max(1.0);
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            a.n,
            k + 1,
            sig12(l),
            sig12(plus2[k]),
            sig12(plus1[k]),
            sig12(residual)
        )
        .unwrap();
        rows.push(json!({
            "k": k + 1,
            "eigenvalue": l,
            "cosine_n_plus_2": plus2[k],
            "cosine_n_plus_1": plus1[k],
            "relative_residual": residual,
        }));
    }
    let flags = Flags::new("spectrum")
        .with("n", a.n)
        .with("format", format_name(a.output.format));
    emit(&flags, &a.output, Rendered { csv, json: json!({ "n": a.n, "rows": rows }) }, stdout)
}

fn cmd_walk(a: &WalkArgs, stdout: &mut dyn Write) -> Outcome<()> {
    let max_n = match a.mode {
        ModeArg::Group => 1024,
        ModeArg::Semigroup => 2048,
    };
    check_range("n", a.n, 1, max_n, "the letter sampler keeps its bias below 2^-53 only up to here")?;
    check_range("steps", a.steps, 1, u64::MAX, "number of steps per trial")?;
    check_range("trials", a.trials, 1, u32::MAX, "number of independent trials")?;
    let burn_in = a.burn_in.unwrap_or(10 * a.n as u64);
    if burn_in >= a.steps {
        return Err(usage(format!(
            "--burn-in {burn_in} leaves no stationary window in --steps {}; lower --burn-in or raise --steps",
            a.steps
        )));
    }
    let params = WalkParams {
        n: a.n,
        steps: a.steps,
        trials: a.trials,
        seed: a.seed,
        mode: a.mode.into(),
        burn_in,
        snapshot_every: (a.snapshot_every > 0).then_some(a.snapshot_every),
        retain_roof_sizes: false,
    };
    let run = run_walk(&params)?;
    let report = WalkReport::from_run(&run)?;
    let snapshots = run.trials[0].snapshots.clone();
    let flags = Flags::new("walk")
        .with("mode", params.mode.name())
        .with("n", a.n)
        .with("steps", a.steps)
        .with("trials", a.trials)
        .with("seed", a.seed)
        .with("burn-in", burn_in)
        .with("snapshot-every", a.snapshot_every)
        .with("format", format_name(a.output.format));
    let mut json = serde_json::to_value(&report).unwrap();
    let csv = match &snapshots {
        Some(rows) => {
            json["snapshots"] = serde_json::to_value(rows).unwrap();
            snapshot_csv(rows)
        }
        None => {
            let obj = json.as_object().unwrap();
            let keys: Vec<&String> = obj.keys().collect();
            let values: Vec<String> = obj
                .values()
                .map(|v| match v {
                    Value::Null => String::new(),
                    Value::String(s) => s.clone(),
                    Value::Number(x) => match x.as_f64() {
                        Some(f) if x.is_f64() => sig12(f),
                        _ => x.to_string(),
                    },
                    other => other.to_string(),
                })
                .collect();
            format!(
                "{}\n{}\n",
                keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(","),
                values.join(",")
            )
        }
    };
    emit(&flags, &a.output, Rendered { csv, json }, stdout)
}

fn cmd_roof_chain(a: &RoofChainArgs, stdout: &mut dyn Write) -> Outcome<()> {
    let boundary = match a.boundary {
        BoundaryArg::Open => Boundary::Open,
        BoundaryArg::Periodic => Boundary::Periodic,
    };
    if a.supports {
        check_range("n", a.n, 1, 30, "exhaustive enumeration is limited to 30 columns")?;
        let mut csv = String::from("n,colored,count,growth_ratio\n");
        let mut rows = Vec::new();
        for m in 1..=a.n {
            for colored in [false, true] {
                let c = roof_support_enumerate(m, colored)?;
                let ratio = c.growth_ratio.unwrap_or(f64::NAN);
                writeln!(csv, "{m},{},{},{}", colored as u8, c.count, sig12(ratio)).unwrap();
                rows.push(serde_json::to_value(&c).unwrap());
            }
        }
        let flags = Flags::new("roof-chain")
            .with("n", a.n)
            .switch("supports")
            .with("format", format_name(a.output.format));
        return emit(&flags, &a.output, Rendered { csv, json: json!({ "rows": rows }) }, stdout);
    }
    check_range("n", a.n, 1, 1_000_000, "number of columns")?;
    let burn_in = a.burn_in.unwrap_or(10 * a.n as u64);
    let stats = simulate_roof_chain(a.n, a.steps, burn_in, a.seed, boundary)?;
    let boundary_name = match boundary {
        Boundary::Open => "open",
        Boundary::Periodic => "periodic",
    };
    let csv = format!(
        "n,boundary,steps,burn_in,density\n{},{boundary_name},{},{burn_in},{}\n",
        a.n,
        a.steps,
        sig12(stats.density)
    );
    let flags = Flags::new("roof-chain")
        .with("n", a.n)
        .with("steps", a.steps)
        .with("seed", a.seed)
        .with("burn-in", burn_in)
        .with("boundary", boundary_name)
        .with("format", format_name(a.output.format));
    let json = serde_json::to_value(&stats).unwrap();
    emit(&flags, &a.output, Rendered { csv, json }, stdout)
}

fn cmd_oracle(a: &OracleArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome<()> {
    if a.distribution {
        let (Some(mode), Some(n), Some(steps)) = (a.mode, a.n, a.steps) else {
            return Err(usage("--distribution needs --mode, --n and --steps"));
        };
        check_range("n", n, 1, 6, "exact distributions grow exponentially in n")?;
        check_range("steps", steps, 1, 16, "exact distributions grow exponentially in steps")?;
        let mode: WalkMode = mode.into();
        let d = exact_distribution(n, steps, mode, a.budget)?;
        let csv = distribution_csv(&d);
        let rows: Vec<Value> = csv
            .lines()
            .skip(1)
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                json!({"key_hex": f[0], "numerator": f[1], "denominator": f[2]})
            })
            .collect();
        let flags = Flags::new("oracle-verify")
            .switch("distribution")
            .with("mode", mode.name())
            .with("n", n)
            .with("steps", steps)
            .with("budget", a.budget)
            .with("format", format_name(a.output.format));
        return emit(&flags, &a.output, Rendered { csv, json: json!({ "rows": rows }) }, stdout);
    }
    check_range("n-max", a.n_max, 1, 6, "ball enumeration grows exponentially in n")?;
    check_range("k-max", a.k_max, 1, 12, "ball enumeration grows exponentially in K")?;
    let checks = verify_counts(a.n_max, a.k_max, a.budget)?;
    let mut csv = String::from("check,formula,oracle,pass\n");
    let mut rows = Vec::new();
    let mut failed = 0;
    for c in &checks {
        let pass = c.passed();
        if !pass {
            failed += 1;
            let _ = writeln!(stderr, "mismatch: {}: formula {} oracle {}", c.what, c.formula, c.oracle);
        }
        writeln!(csv, "{},{},{},{}", c.what.replace(' ', ";").replace(",", ""), c.formula, c.oracle, pass as u8).unwrap();
        rows.push(json!({"check": c.what, "formula": c.formula, "oracle": c.oracle, "pass": pass}));
    }
    let flags = Flags::new("oracle-verify")
        .with("n-max", a.n_max)
        .with("k-max", a.k_max)
        .with("budget", a.budget)
        .with("format", format_name(a.output.format));
    let payload = json!({"checks": checks.len(), "failed": failed, "rows": rows});
    emit(&flags, &a.output, Rendered { csv, json: payload }, stdout)?;
    if failed > 0 {
        return Err(Failure::Check(format!("{failed} of {} comparisons failed", checks.len())));
    }
    Ok(())
}

fn cmd_braid(a: &BraidArgs, stdout: &mut dyn Write) -> Outcome<()> {
    check_range("n", a.n, 2, 200, "braid bounds need n >= 2")?;
    let report = bounds_report(a.n, a.alpha, a.drift, a.entropy)?;
    let json = serde_json::to_value(&report).unwrap();
    let obj = json.as_object().unwrap();
    let csv = format!(
        "{}\n{}\n",
        obj.keys().cloned().collect::<Vec<_>>().join(","),
        obj.values().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    );
    let mut flags = Flags::new("braid-bounds").with("n", a.n).with("alpha", a.alpha);
    if let Some(l) = a.drift {
        flags = flags.with("drift", l);
    }
    if let Some(h) = a.entropy {
        flags = flags.with("entropy", h);
    }
    let flags = flags.with("format", format_name(a.output.format));
    emit(&flags, &a.output, Rendered { csv, json }, stdout)
}

fn cmd_inequality(a: &InequalityArgs, stdout: &mut dyn Write) -> Outcome<()> {
    let r = inequality_report(a.volume, a.drift, a.entropy)?;
    let csv = format!(
        "v,l,h,epsilon,grid_points,grid_min_alpha,grid_min_epsilon,grid_all_positive\n{},{},{},{},{},{},{},{}\n",
        sig12(r.v),
        sig12(r.l),
        sig12(r.h),
        sig12(r.epsilon),
        r.grid_points,
        sig12(r.grid_min_alpha),
        sig12(r.grid_min_epsilon),
        r.grid_all_positive as u8
    );
    let json = json!({
        "v": sig12(r.v).parse::<f64>().unwrap(),
        "l": sig12(r.l).parse::<f64>().unwrap(),
        "h": sig12(r.h).parse::<f64>().unwrap(),
        "epsilon": sig12(r.epsilon).parse::<f64>().unwrap(),
        "grid_points": r.grid_points,
        "grid_min_alpha": sig12(r.grid_min_alpha).parse::<f64>().unwrap(),
        "grid_min_epsilon": sig12(r.grid_min_epsilon).parse::<f64>().unwrap(),
        "grid_all_positive": r.grid_all_positive,
    });
    let flags = Flags::new("inequality")
        .with("volume", a.volume)
        .with("drift", a.drift)
        .with("entropy", a.entropy)
        .with("format", format_name(a.output.format));
    emit(&flags, &a.output, Rendered { csv, json }, stdout)?;
    if !r.grid_all_positive {
        return Err(Failure::Check("closed-form discrepancy is not positive on the whole grid".into()));
    }
    Ok(())
}

/// Runs one command line, writing results to `stdout` and diagnostics to
/// `stderr`. `argv[0]` is the program name.
pub fn run_with(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Count(a) => cmd_count(a, stdout),
        Command::Volume(a) => cmd_volume(a, stdout),
        Command::Spectrum(a) => cmd_spectrum(a, stdout),
        Command::Walk(a) => cmd_walk(a, stdout),
        Command::RoofChain(a) => cmd_roof_chain(a, stdout),
        Command::OracleVerify(a) => cmd_oracle(a, stdout, stderr),
        Command::BraidBounds(a) => cmd_braid(a, stdout),
        Command::Inequality(a) => cmd_inequality(a, stdout),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(stderr, "check failed: {msg}");
            1
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
