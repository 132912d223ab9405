//! Command-line front end: `solve`, `verify`, `gen` and `bench`.
//!
//! Exit codes: 0 on success, 1 for malformed input, 2 when an algorithm's
//! precondition fails (for example the FPTAS on a non-additive model), 3 when an
//! exhaustive routine would exceed the enumeration cap.

pub mod bench;
pub mod schema;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fairteam::additive::{fptas, nondiscriminatory_additive};
use fairteam::exact::{optimal_fair_bruteforce, optimal_nondiscriminatory_bruteforce};
use fairteam::fairness::is_fair_definitional;
use fairteam::instances::{
    random_instance, subset_sum_instance, worked_example, RandomKind, SubsetSumSpec, WorkedExample,
};
use fairteam::submodular::{constant_approx, SubmodApproxParams};
use fairteam::{Instance, Semantics, SolveResult, DEFAULT_ENUM_CAP};

use schema::{to_canonical_json, ContractFile, InstanceFile, Metadata, SolveOutput, VerdictOutput};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Schema(String),
    Precondition(String),
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 1,
            CliError::Precondition(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "invalid input: {m}"),
            CliError::Precondition(m) => write!(f, "precondition failed: {m}"),
            CliError::Cap(m) => write!(f, "{m}"),
        }
    }
}

impl From<fairteam::Error> for CliError {
    fn from(e: fairteam::Error) -> Self {
        use fairteam::Error as E;
        match e {
            E::EnumerationCap { .. } => CliError::Cap(e.to_string()),
            E::InvalidInstance(_) | E::InvalidContract(_) | E::AgentOutOfRange { .. } => {
                CliError::Schema(e.to_string())
            }
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fairteam", version, about = "Design and check revenue-optimal fair team contracts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a contract for an instance and print it as JSON.
    Solve(SolveArgs),
    /// Check whether a contract is fair and print the verdict as JSON.
    Verify(VerifyArgs),
    /// Write an instance file.
    Gen(GenArgs),
    /// Run algorithms over generated instances and emit CSV rows.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Exact,
    ExactNd,
    NdGreedy,
    Fptas,
    SubmodularApprox,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::ExactNd => "exact-nd",
            Algorithm::NdGreedy => "nd-greedy",
            Algorithm::Fptas => "fptas",
            Algorithm::SubmodularApprox => "submodular-approx",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct AlgoOptions {
    /// Accuracy of the FPTAS, in (0, 1].
    #[arg(long, default_value_t = 0.2)]
    pub gamma: f64,
    #[arg(long, default_value_t = SubmodApproxParams::default().delta)]
    pub delta: f64,
    #[arg(long, default_value_t = SubmodApproxParams::default().tau)]
    pub tau: f64,
    #[arg(long, default_value_t = SubmodApproxParams::default().eta)]
    pub eta: f64,
    #[arg(long, default_value_t = SubmodApproxParams::default().beta)]
    pub beta: f64,
    #[arg(long, default_value_t = SubmodApproxParams::default().lambda)]
    pub lambda: f64,
    /// Choose among the approximation's candidate teams by fair revenue.
    #[arg(long)]
    pub rescore: bool,
    /// Largest number of agents exhaustive routines may enumerate.
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    pub enum_cap: usize,
}

impl AlgoOptions {
    fn submodular_params(&self) -> SubmodApproxParams {
        SubmodApproxParams {
            delta: self.delta,
            tau: self.tau,
            eta: self.eta,
            beta: self.beta,
            lambda: self.lambda,
            rescore: self.rescore,
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Instance JSON file.
    instance: PathBuf,
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    #[command(flatten)]
    options: AlgoOptions,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Optimistic,
    Pessimistic,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Instance JSON file.
    instance: PathBuf,
    /// Contract JSON file with `team` and `alpha`; solve output works as is.
    #[arg(long)]
    contract: PathBuf,
    /// How to judge swaps with several equilibria.
    #[arg(long, value_enum, default_value = "pessimistic")]
    semantics: SemanticsArg,
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    enum_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Additive,
    Coverage,
    E1,
    E2,
    E3,
    SubsetSum,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    /// Number of agents for random families.
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Costs are drawn up to this multiple of each agent's own reward.
    #[arg(long, default_value_t = 0.5)]
    cost_scale: f64,
    /// Comma-separated positive weights for `subset-sum`.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<u64>,
    /// Subset size for `subset-sum`.
    #[arg(long)]
    k: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "additive")]
    pub kind: BenchKind,
    /// Comma-separated agent counts.
    #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
    pub sizes: Vec<usize>,
    /// Number of seeds per size.
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed_start: u64,
    #[arg(long, default_value_t = 0.5)]
    pub cost_scale: f64,
    /// Comma-separated algorithms.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "nd-greedy,fptas")]
    pub algorithms: Vec<Algorithm>,
    #[command(flatten)]
    pub options: AlgoOptions,
    /// CSV file to append to; stdout when absent. The header is written only to a new or empty file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchKind {
    Additive,
    Coverage,
}

impl From<BenchKind> for RandomKind {
    fn from(k: BenchKind) -> Self {
        match k {
            BenchKind::Additive => RandomKind::Additive,
            BenchKind::Coverage => RandomKind::Coverage,
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Solve(a) => solve(&a, out, err),
        Command::Verify(a) => verify(&a, out),
        Command::Gen(a) => generate(&a, out),
        Command::Bench(a) => bench::run(&a, out),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))
}

pub fn load_instance(path: &Path, enum_cap: usize) -> Result<Instance, CliError> {
    let file: InstanceFile = schema::parse(&read(path)?, &path.display().to_string())?;
    Ok(file.to_instance()?.with_enum_cap(enum_cap))
}

/// Runs one algorithm on `inst`.
pub fn solve_with(inst: &Instance, algorithm: Algorithm, options: &AlgoOptions) -> Result<SolveResult, CliError> {
    let result = match algorithm {
        Algorithm::Exact => optimal_fair_bruteforce(inst)?,
        Algorithm::ExactNd => optimal_nondiscriminatory_bruteforce(inst)?,
        Algorithm::NdGreedy => nondiscriminatory_additive(inst)?,
        Algorithm::Fptas => fptas(inst, options.gamma)?,
        Algorithm::SubmodularApprox => constant_approx(inst, &options.submodular_params())?,
    };
    Ok(result)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Schema(format!("cannot write output: {e}")))
}

fn solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let inst = load_instance(&args.instance, args.options.enum_cap)?;
    for w in inst.warnings() {
        let _ = writeln!(err, "warning: {w}");
    }
    let result = solve_with(&inst, args.algorithm, &args.options)?;
    emit(out, &to_canonical_json(&SolveOutput::from(&result)))
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let inst = load_instance(&args.instance, args.enum_cap)?;
    let file: ContractFile = schema::parse(&read(&args.contract)?, &args.contract.display().to_string())?;
    let contract = file.to_contract(inst.n())?;
    let (semantics, label) = match args.semantics {
        SemanticsArg::Optimistic => (Semantics::Optimistic, "optimistic"),
        SemanticsArg::Pessimistic => (Semantics::Pessimistic, "pessimistic"),
    };
    let verdict = is_fair_definitional(&inst, &contract, semantics)?;
    emit(out, &to_canonical_json(&VerdictOutput::new(&verdict, label)))
}

fn generate(args: &GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (inst, metadata) = match args.kind {
        GenKind::Additive | GenKind::Coverage => {
            let kind = if args.kind == GenKind::Additive { RandomKind::Additive } else { RandomKind::Coverage };
            let inst = random_instance(kind, args.n, args.seed, args.cost_scale)?;
            let name = format!(
                "{}-n{}-s{}",
                if kind == RandomKind::Additive { "additive" } else { "coverage" },
                args.n,
                args.seed
            );
            (inst, Metadata { name: Some(name), seed: Some(args.seed) })
        }
        GenKind::E1 | GenKind::E2 | GenKind::E3 => {
            let which = match args.kind {
                GenKind::E1 => WorkedExample::E1,
                GenKind::E2 => WorkedExample::E2,
                _ => WorkedExample::E3,
            };
            (worked_example(which), Metadata { name: Some(which.to_string()), seed: None })
        }
        GenKind::SubsetSum => {
            let k = args.k.ok_or_else(|| CliError::Schema("subset-sum needs --k".into()))?;
            let spec = SubsetSumSpec::new(args.weights.clone(), k)?;
            let (inst, threshold) = subset_sum_instance(&spec)?;
            let name = format!("subset-sum-k{k}-threshold-{threshold}");
            (inst, Metadata { name: Some(name), seed: None })
        }
    };
    let text = to_canonical_json(&InstanceFile::from_instance(&inst, Some(metadata)));
    match &args.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Schema(format!("cannot write {}: {e}", path.display())))
        }
        None => emit(out, &text),
    }
}
