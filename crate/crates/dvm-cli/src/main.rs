//! Command-line front end for the delay Vandermonde toolkit: vector
//! multiplies, operation-count and error tables, a priori bounds, and the
//! wideband beamformer, all with deterministic machine-readable output.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::{Complex, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use dvm_core::{
    beam_powers, beamform, bound_dvm, bound_dvm_unchecked, bound_sdvm, bound_sdvm_unchecked,
    build_plan, dvm_multiply, emit_complexity_table, emit_error_table, sdvm_multiply, synthesize,
    ArrayConfig, BoundParams, DvmError, Node, Real, SourcePosition, SourceSpec, TableFormat,
    Variant,
};

#[derive(Parser)]
#[command(
    name = "dvm",
    version,
    about = "Delay Vandermonde matrix toolkit",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply a delay Vandermonde matrix by a vector
    Multiply(MultiplyArgs),
    /// Emit the operation-count table for sizes 4 through --max-size
    Complexity(ComplexityArgs),
    /// Emit the measured single-vs-double forward-error table
    Errors(ErrorsArgs),
    /// Evaluate the a priori relative error bound for one input vector
    Bound(BoundArgs),
    /// Synthesize a source frame and form all beams at the listed bins
    Beamform(BeamformArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Precision {
    Single,
    Double,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for TableFormat {
    fn from(f: Format) -> TableFormat {
        match f {
            Format::Csv => TableFormat::Csv,
            Format::Json => TableFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Scaled,
    Dvm,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Scaled => Variant::Scaled,
            VariantArg::Dvm => Variant::Dvm,
        }
    }
}

/// Node selection shared by the subcommands that need one: either an angle
/// (the node is `e^{-j theta}`) or an explicit complex value.
#[derive(Args)]
struct NodeArgs {
    /// Node angle in radians, as a float or `pi/<int>`
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Real part of an explicit node value
    #[arg(long, requires = "alpha_im", conflicts_with = "theta", allow_hyphen_values = true)]
    alpha_re: Option<f64>,
    /// Imaginary part of an explicit node value
    #[arg(long, requires = "alpha_re", conflicts_with = "theta", allow_hyphen_values = true)]
    alpha_im: Option<f64>,
}

impl NodeArgs {
    fn node(&self) -> Result<Node, Failure> {
        match (self.theta, self.alpha_re, self.alpha_im) {
            (Some(theta), _, _) => Ok(Node::from_angle(theta)),
            (None, Some(re), Some(im)) => Ok(Node::from_value(Complex64::new(re, im))?),
            _ => Err(Failure::Validation(
                "provide --theta or both --alpha-re and --alpha-im".into(),
            )),
        }
    }

    fn theta_json(&self) -> serde_json::Value {
        match self.theta {
            Some(t) => json!(t),
            None => serde_json::Value::Null,
        }
    }
}

#[derive(Args)]
struct MultiplyArgs {
    /// Matrix size N (power of two, at least 2)
    #[arg(long)]
    size: usize,
    #[command(flatten)]
    node: NodeArgs,
    /// Use the scaled variant (rows k = 0..N-1) instead of the delay variant
    #[arg(long)]
    scaled: bool,
    /// Working precision of the multiply
    #[arg(long, value_enum, default_value_t = Precision::Double)]
    precision: Precision,
    /// Input vector file with one `re,im` pair per line
    #[arg(long, conflicts_with = "random")]
    input: Option<PathBuf>,
    /// Draw the input vector from the seeded generator instead of a file
    #[arg(long)]
    random: bool,
    /// Seed for --random
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Compute on a degenerate node without the exit-3 interception
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct ComplexityArgs {
    /// Which matrix variant to tabulate
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Largest size N in the table (power of two, at least 4)
    #[arg(long)]
    max_size: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ErrorsArgs {
    /// Largest size N in the table (power of two, at least 4)
    #[arg(long)]
    max_size: usize,
    #[command(flatten)]
    node: NodeArgs,
    /// Seed for the random test vectors
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    /// Matrix size N (power of two, at least 2)
    #[arg(long)]
    size: usize,
    #[command(flatten)]
    node: NodeArgs,
    /// Bound the scaled variant instead of the delay variant
    #[arg(long)]
    scaled: bool,
    /// Precision whose unit roundoff enters the bound
    #[arg(long, value_enum, default_value_t = Precision::Double)]
    precision: Precision,
    /// Constant c in the per-operation rounding model mu = c * u
    #[arg(long, default_value_t = 1.0)]
    constant: f64,
    /// Input vector file with one `re,im` pair per line
    #[arg(long, conflicts_with = "random")]
    input: Option<PathBuf>,
    /// Draw the input vector from the seeded generator instead of a file
    #[arg(long)]
    random: bool,
    /// Seed for --random
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evaluate on a degenerate node instead of refusing with exit 3
    #[arg(long)]
    raw: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BeamformArgs {
    /// Number of antennas N (power of two, at least 2)
    #[arg(long, default_value_t = 16)]
    antennas: usize,
    /// Temporal DFT size M (power of two, at least 2)
    #[arg(long, default_value_t = 8)]
    dft_size: usize,
    /// Beam index the synthesized source sits on (1..=antennas)
    #[arg(long)]
    source_beam: usize,
    /// Temporal bins the source occupies and the output reports
    #[arg(long, value_delimiter = ',', required = true)]
    bins: Vec<usize>,
    /// RMS of the circularly symmetric noise added per frame entry
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Seed for the noise generator
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Element spacing in meters
    #[arg(long, default_value_t = 0.005)]
    spacing: f64,
    /// Propagation speed in meters per second
    #[arg(long, default_value_t = 3.0e8)]
    wave_speed: f64,
    /// Sample period in seconds
    #[arg(long, default_value_t = 1.0e-9)]
    sample_period: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Failure carrying the process exit code: 2 validation, 3 degeneracy, 4 I/O.
enum Failure {
    Validation(String),
    Degenerate(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Degenerate(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Degenerate(m) | Failure::Io(m) => m,
        }
    }
}

impl From<DvmError> for Failure {
    fn from(e: DvmError) -> Failure {
        match &e {
            DvmError::DegenerateNode { .. } => Failure::Degenerate(e.to_string()),
            DvmError::Io(_) => Failure::Io(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

fn parse_angle(s: &str) -> Result<f64, String> {
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let magnitude = if body == "pi" {
        std::f64::consts::PI
    } else if let Some(den) = body.strip_prefix("pi/") {
        let d: i64 = den
            .parse()
            .map_err(|_| format!("expected an integer after pi/ in {s:?}"))?;
        if d == 0 {
            return Err("angle denominator cannot be zero".into());
        }
        std::f64::consts::PI / d as f64
    } else {
        body.parse::<f64>()
            .map_err(|_| format!("expected radians or pi/<int>, got {s:?}"))?
    };
    Ok(if negative { -magnitude } else { magnitude })
}

fn parse_vector(path: &Path) -> Result<Vec<Complex64>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let parsed = line.split_once(',').and_then(|(re, im)| {
            let re: f64 = re.trim().parse().ok()?;
            let im: f64 = im.trim().parse().ok()?;
            Some(Complex64::new(re, im))
        });
        match parsed {
            Some(v) => out.push(v),
            None => {
                return Err(Failure::Validation(format!(
                    "{}: line {}: expected `re,im`, got {:?}",
                    path.display(),
                    i + 1,
                    raw
                )))
            }
        }
    }
    Ok(out)
}

fn random_vector(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn load_input(
    n: usize,
    input: &Option<PathBuf>,
    random: bool,
    seed: u64,
) -> Result<Vec<Complex64>, Failure> {
    let z = match input {
        Some(path) => parse_vector(path)?,
        None if random => random_vector(n, seed),
        None => {
            return Err(Failure::Validation(
                "provide --input or --random".into(),
            ))
        }
    };
    if z.len() != n {
        return Err(Failure::Validation(format!(
            "input vector has {} entries, the size is {n}",
            z.len()
        )));
    }
    Ok(z)
}

fn write_artifact(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// One output value in both its shortest round-trip text form (CSV) and a
/// widened numeric form (JSON).
struct Entry {
    re_text: String,
    im_text: String,
    re: f64,
    im: f64,
}

fn multiply_entries<T: Real>(
    n: usize,
    node: Node,
    z: &[Complex64],
    scaled: bool,
) -> Result<Vec<Entry>, DvmError> {
    let plan = build_plan::<T>(n, node)?;
    let x: Vec<Complex<T>> = z
        .iter()
        .map(|v| Complex::new(T::from_f64(v.re), T::from_f64(v.im)))
        .collect();
    let y = if scaled {
        sdvm_multiply(&plan, &x)?
    } else {
        dvm_multiply(&plan, &x)?
    };
    Ok(y
        .into_iter()
        .map(|v| Entry {
            re_text: format!("{}", v.re),
            im_text: format!("{}", v.im),
            re: <T as Real>::to_f64(v.re),
            im: <T as Real>::to_f64(v.im),
        })
        .collect())
}

fn cmd_multiply(args: MultiplyArgs) -> Result<ExitCode, Failure> {
    let node = args.node.node()?;
    let z = load_input(args.size, &args.input, args.random, args.seed)?;
    let entries = match args.precision {
        Precision::Single => multiply_entries::<f32>(args.size, node, &z, args.scaled)?,
        Precision::Double => multiply_entries::<f64>(args.size, node, &z, args.scaled)?,
    };
    let degenerate = node.is_degenerate(args.size);
    let algorithm = if args.scaled { "sdvm" } else { "dvm" };

    let text = match args.format {
        Format::Csv => {
            let mut s = String::new();
            for e in &entries {
                s.push_str(&format!("{},{}\n", e.re_text, e.im_text));
            }
            s
        }
        Format::Json => {
            let rows: Vec<_> = entries
                .iter()
                .map(|e| json!({"re": e.re, "im": e.im}))
                .collect();
            let doc = json!({
                "meta": {
                    "n": args.size,
                    "theta": args.node.theta_json(),
                    "algorithm": algorithm,
                    "degenerate": degenerate,
                },
                "rows": rows,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
        }
    };
    write_artifact(&args.output, &text)?;

    if degenerate && !args.raw {
        eprintln!(
            "warning: node is degenerate at size {}: a power of the node below {} equals 1; \
             the factored result is unreliable (pass --raw to accept it)",
            args.size, args.size
        );
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_complexity(args: ComplexityArgs) -> Result<ExitCode, Failure> {
    let table = emit_complexity_table(args.max_size, args.variant.into(), args.format.into())?;
    write_artifact(&args.output, &table)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_errors(args: ErrorsArgs) -> Result<ExitCode, Failure> {
    let node = args.node.node()?;
    let table = emit_error_table(args.max_size, node, args.seed, args.format.into())?;
    write_artifact(&args.output, &table)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bound(args: BoundArgs) -> Result<ExitCode, Failure> {
    let node = args.node.node()?;
    let z = load_input(args.size, &args.input, args.random, args.seed)?;
    let params = match args.precision {
        Precision::Single => BoundParams::single(args.constant, args.size)?,
        Precision::Double => BoundParams::double(args.constant, args.size)?,
    };
    let value = match (args.scaled, args.raw) {
        (true, false) => bound_sdvm(args.size, node, &z, params)?,
        (true, true) => bound_sdvm_unchecked(args.size, node, &z, params)?,
        (false, false) => bound_dvm(args.size, node, &z, params)?,
        (false, true) => bound_dvm_unchecked(args.size, node, &z, params)?,
    };
    let text = match args.format {
        Format::Csv => format!("{value}\n"),
        Format::Json => {
            let doc = json!({
                "meta": {
                    "n": args.size,
                    "theta": args.node.theta_json(),
                    "variant": if args.scaled { "scaled" } else { "dvm" },
                    "constant": args.constant,
                },
                "bound": value,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
        }
    };
    write_artifact(&args.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_beamform(args: BeamformArgs) -> Result<ExitCode, Failure> {
    let config = ArrayConfig::new(
        args.antennas,
        args.spacing,
        args.wave_speed,
        args.dft_size,
        args.sample_period,
    )?;
    let sources: Vec<SourceSpec> = args
        .bins
        .iter()
        .map(|&m| SourceSpec {
            position: SourcePosition::Beam(args.source_beam),
            amplitude: Complex64::new(1.0, 0.0),
            temporal_bin: m,
        })
        .collect();
    let frame = synthesize(&config, &sources, args.noise, args.seed)?;
    let beams = beamform(&frame, &config)?;
    let powers = beam_powers(&beams);

    let flagged: Vec<usize> = args
        .bins
        .iter()
        .copied()
        .filter(|&m| beams.degenerate_bins[m])
        .collect();

    let text = match args.format {
        Format::Csv => {
            let mut s = String::from("bin,beam,re,im,magnitude\n");
            for &m in &args.bins {
                for k in 0..config.n_antennas {
                    let v = beams.entry(k, m);
                    let mag = powers[k * config.dft_size + m].sqrt();
                    s.push_str(&format!("{m},{},{},{},{mag}\n", k + 1, v.re, v.im));
                }
            }
            s
        }
        Format::Json => {
            let mut rows = Vec::new();
            for &m in &args.bins {
                for k in 0..config.n_antennas {
                    let v = beams.entry(k, m);
                    rows.push(json!({
                        "bin": m,
                        "beam": k + 1,
                        "re": v.re,
                        "im": v.im,
                        "magnitude": powers[k * config.dft_size + m].sqrt(),
                    }));
                }
            }
            let doc = json!({
                "meta": {
                    "antennas": config.n_antennas,
                    "dft_size": config.dft_size,
                    "source_beam": args.source_beam,
                    "bins": args.bins,
                    "noise": args.noise,
                    "seed": args.seed,
                    "degenerate_bins": flagged,
                },
                "rows": rows,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
        }
    };
    write_artifact(&args.output, &text)?;

    if !flagged.is_empty() && matches!(args.format, Format::Csv) {
        eprintln!(
            "note: bin(s) {flagged:?} have degenerate nodes; their columns were \
             computed with the dense path where applicable"
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Multiply(args) => cmd_multiply(args),
        Command::Complexity(args) => cmd_complexity(args),
        Command::Errors(args) => cmd_errors(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Beamform(args) => cmd_beamform(args),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
