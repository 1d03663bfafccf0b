//! Command-line front end: encode polynomials into dictionary states,
//! count or search their level sets, and run the no-consecutive-ones
//! presets. Every command is deterministic under --seed.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qoracle::{
    amplitude_estimation, build_canonical_oracle, build_naive_oracle, classical_count, encode,
    fib_canonical_poly, fib_good_set, fib_heuristic_circuit, fib_reference, grover_search,
    quantum_count_with_layout, render_histogram, render_state, run, DictionaryLayout, Error,
    GroverConfig, PolynomialSpec, SUPPORT_THRESHOLD,
};

#[derive(Parser)]
#[command(
    name = "qoracle",
    about = "Compile binary polynomials into quantum oracles; search, estimate, count, render",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a polynomial into a key/value dictionary state and render it
    Encode(EncodeArgs),
    /// Quantum counting of the keys matching a value
    Count(CountArgs),
    /// Count or enumerate binary strings without consecutive ones
    Fib(FibArgs),
    /// Amplified search for the keys matching a value
    Search(SearchArgs),
}

#[derive(Args)]
struct PolyArgs {
    /// Polynomial text, e.g. "2*x0 + x1 - 5*x2 + 2*x3"
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,

    /// Polynomial as JSON: {"n": 2, "terms": [{"c": 1, "vars": [0, 1]}]}
    #[arg(long, value_name = "JSON")]
    poly_json: Option<String>,

    /// Widen the key register to N variables
    #[arg(long)]
    n: Option<usize>,

    /// Value-register width override (auto-sized when omitted)
    #[arg(long)]
    m_value: Option<usize>,

    /// Size the value register without a sign bit
    #[arg(long)]
    unsigned: bool,
}

impl PolyArgs {
    fn resolve(&self) -> Result<(PolynomialSpec, DictionaryLayout), CliError> {
        let poly = match (&self.poly, &self.poly_json) {
            (Some(text), None) => PolynomialSpec::parse(text)?,
            (None, Some(json)) => PolynomialSpec::from_json(json)?,
            _ => {
                return Err(Error::InvalidArgument(
                    "provide exactly one of --poly or --poly-json".into(),
                )
                .into())
            }
        };
        let poly = match self.n {
            Some(n) => poly.with_num_vars(n)?,
            None => poly,
        };
        if poly.num_vars == 0 {
            return Err(Error::InvalidArgument(
                "polynomial has no variables; pass --n to size the key register".into(),
            )
            .into());
        }
        let layout = match self.m_value {
            Some(m) => DictionaryLayout::new(poly.num_vars, m, !self.unsigned)?,
            None if self.unsigned => DictionaryLayout::auto_unsigned(&poly)?,
            None => DictionaryLayout::auto(&poly)?,
        };
        Ok((poly, layout))
    }
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    poly: PolyArgs,

    /// Order pixel rows by signed value, most negative on top
    #[arg(long)]
    signed_rows: bool,

    /// Integer pixel upscaling for the PPM output
    #[arg(long, default_value_t = 16)]
    scale: usize,

    /// Write the statevector JSON here
    #[arg(long, value_name = "FILE")]
    out_state: Option<PathBuf>,

    /// Write the pixel graph (binary PPM) here
    #[arg(long, value_name = "FILE")]
    out_ppm: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    poly: PolyArgs,

    /// Value whose key count is estimated
    #[arg(long = "match", allow_negative_numbers = true, default_value_t = 0)]
    match_value: i64,

    /// Result-register width (estimate granularity)
    #[arg(long, default_value_t = 5)]
    m_result: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FibMethod {
    /// Superposition circuit whose support is exactly the good strings
    Heuristic,
    /// Explicit phase-flip oracle from the classical predicate
    Naive,
    /// Dictionary encoding of the adjacent-pair counter
    Canonical,
}

#[derive(Args)]
struct FibArgs {
    /// Binary string length
    #[arg(long)]
    n: usize,

    #[arg(long, value_enum)]
    method: FibMethod,

    /// Result-register width for the counting methods
    #[arg(long, default_value_t = 5)]
    m_result: usize,

    #[arg(long, default_value_t = 1024)]
    shots: u64,

    #[arg(long, default_value_t = 7)]
    seed: u64,

    /// Write the histogram CSV here instead of stdout (heuristic method)
    #[arg(long, value_name = "FILE")]
    out_csv: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    poly: PolyArgs,

    /// Value whose keys are amplified
    #[arg(long = "match", allow_negative_numbers = true, default_value_t = 0)]
    match_value: i64,

    /// Assumed number of solutions (fixes the iteration count)
    #[arg(long)]
    num_solutions: u64,

    #[arg(long, default_value_t = 1024)]
    shots: u64,

    #[arg(long, default_value_t = 7)]
    seed: u64,
}

enum CliError {
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(
                Error::Parse { .. } | Error::Aliasing { .. } | Error::InvalidArgument(_),
            ) => 2,
            CliError::Lib(Error::ResourceLimit { .. } | Error::ResultRegisterLimit { .. }) => 3,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Io(e) => e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Encode(args) => cmd_encode(args),
        Command::Count(args) => cmd_count(args),
        Command::Fib(args) => cmd_fib(args),
        Command::Search(args) => cmd_search(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

/// Write through a temp file in the same directory, then rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

fn cmd_encode(args: EncodeArgs) -> Result<(), CliError> {
    let (poly, layout) = args.poly.resolve()?;
    let encoded = encode(&poly, &layout)?;

    println!(
        "layout: {} key qubits, {} value qubits ({})",
        layout.key_qubits,
        layout.value_qubits,
        if layout.signed { "signed" } else { "unsigned" }
    );
    if poly.num_vars <= 24 {
        let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
        for key in 0..1usize << poly.num_vars {
            *counts.entry(poly.evaluate_key(key)).or_insert(0) += 1;
        }
        println!("value counts:");
        for (value, count) in counts {
            println!("  {value}: {count}");
        }
    }

    if let Some(path) = &args.out_state {
        write_atomic(path, encoded.state.to_json().as_bytes())?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = &args.out_ppm {
        let graph = render_state(&encoded, args.signed_rows);
        write_atomic(path, &graph.to_ppm(args.scale.max(1)))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_count(args: CountArgs) -> Result<(), CliError> {
    let (poly, layout) = args.poly.resolve()?;
    let result = quantum_count_with_layout(&poly, &layout, args.match_value, args.m_result)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&result).expect("serializable")
    );
    if poly.num_vars <= 24 {
        eprintln!(
            "classical count: {}",
            classical_count(&poly, args.match_value)?
        );
    }
    Ok(())
}

fn cmd_fib(args: FibArgs) -> Result<(), CliError> {
    let n = args.n;
    if n < 1 {
        return Err(Error::InvalidArgument("string length must be at least 1".into()).into());
    }
    let reference = fib_reference(n);
    match args.method {
        FibMethod::Heuristic => {
            let state = run(&fib_heuristic_circuit(n)?)?;
            let support = state.nonzero_support(SUPPORT_THRESHOLD).len();
            let histogram = state.sample(args.shots, args.seed);
            let csv = render_histogram(&histogram, n);
            match &args.out_csv {
                Some(path) => {
                    write_atomic(path, csv.as_bytes())?;
                    eprintln!("wrote {}", path.display());
                }
                None => print!("{csv}"),
            }
            eprintln!("support size: {support} (reference count {reference})");
        }
        FibMethod::Naive => {
            let good = fib_good_set(n);
            let oracle = build_naive_oracle(&good, n)?;
            let config = GroverConfig::uniform(oracle)?;
            let result = amplitude_estimation(&config, args.m_result)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&result).expect("serializable")
            );
            eprintln!(
                "good set size: {} (reference count {reference})",
                good.len()
            );
        }
        FibMethod::Canonical => {
            let poly = fib_canonical_poly(n)?;
            let layout = DictionaryLayout::auto_unsigned(&poly)?;
            let result = quantum_count_with_layout(&poly, &layout, 0, args.m_result)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&result).expect("serializable")
            );
            eprintln!("reference count {reference}");
        }
    }
    Ok(())
}

fn cmd_search(args: SearchArgs) -> Result<(), CliError> {
    let (poly, layout) = args.poly.resolve()?;
    if poly.num_vars <= 24 && classical_count(&poly, args.match_value)? == 0 {
        eprintln!(
            "warning: no key evaluates to {}; the output stays uniform",
            args.match_value
        );
    }
    let oracle = build_canonical_oracle(&poly, &layout, args.match_value)?;
    let config = GroverConfig::uniform(oracle)?;
    let outcome = grover_search(&config, args.num_solutions, args.shots, args.seed)?;

    println!("iterations: {}", outcome.iterations);
    println!("success probability: {}", outcome.success_probability);
    println!("samples:");
    for (basis, count) in &outcome.histogram {
        let key = qoracle::BasisIndex(layout.key_of(basis.0));
        let value = qoracle::BasisIndex(layout.raw_value_of(basis.0));
        println!(
            "key={} value={} count={}",
            key.bitstring(layout.key_qubits),
            value.bitstring(layout.value_qubits),
            count
        );
    }
    Ok(())
}
