use clap::{Args, Parser, Subcommand};
use qs_fractal::dim_opt::LinearConstraint;
use qs_fractal::qs_system::DEFAULT_MAX_DIGITS;
use qs_fractal::scalar::parse_list;
use qs_fractal::Scalar;
use serde::Serialize;

use crate::output::Format;

/// A comma-separated list given as a single flag value.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct List<T>(pub Vec<T>);

fn numbers<T: std::str::FromStr>(s: &str) -> Result<List<T>, String> {
    if s.trim().is_empty() {
        return Ok(List(Vec::new()));
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<T>()
                .map_err(|_| format!("'{t}' is not a valid number"))
        })
        .collect::<Result<_, _>>()
        .map(List)
}

pub fn digits(s: &str) -> Result<List<usize>, String> {
    numbers(s)
}

pub fn positions(s: &str) -> Result<List<u64>, String> {
    numbers(s)
}

pub fn floats(s: &str) -> Result<List<f64>, String> {
    let v: List<f64> = numbers(s)?;
    match v.0.iter().find(|x| !x.is_finite()) {
        Some(x) => Err(format!("{x} is not finite")),
        None => Ok(v),
    }
}

pub fn scalars(s: &str) -> Result<List<Scalar>, String> {
    parse_list(s).map(List).map_err(|e| e.to_string())
}

pub fn scalar(s: &str) -> Result<Scalar, String> {
    s.parse::<Scalar>().map_err(|e| e.to_string())
}

pub fn constraint(s: &str) -> Result<LinearConstraint, String> {
    LinearConstraint::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "qsfrac",
    version,
    about = "Q_s-representations, digit statistics and fractal dimensions"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Upper bound on the number of digits any command will generate.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DIGITS)]
    pub max_digits: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First n digits of x.
    Encode(EncodeArgs),
    /// Value of a finite or eventually periodic digit sequence.
    Decode(DecodeArgs),
    /// Cylinder interval of a digit prefix.
    Cylinder(CylinderArgs),
    /// Digit counts, frequencies and running means.
    Stats(StatsArgs),
    /// Running means of the oscillating number along its two checkpoint families.
    Oscillation(OscillationArgs),
    /// Hausdorff dimensions.
    #[command(subcommand)]
    Dim(DimCommand),
    /// Constrained dimension maximization.
    #[command(subcommand)]
    Opt(OptCommand),
    /// Real roots of a x³ + b x² + c x + d.
    Cubic(CubicArgs),
    /// Digits of a constructed number.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Seeded Monte Carlo experiments.
    #[command(subcommand)]
    Simulate(SimulateCommand),
}

#[derive(Debug, Args, Serialize)]
pub struct EncodeArgs {
    /// Digit weights, e.g. 1/3,1/3,1/3 (decimals select the float backend).
    #[arg(long, value_parser = scalars)]
    pub q: List<Scalar>,
    /// Number in [0, 1).
    #[arg(long, value_parser = scalar)]
    pub x: Scalar,
    /// Number of digits.
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct DecodeArgs {
    #[arg(long, value_parser = scalars)]
    pub q: List<Scalar>,
    /// Digits, or the preperiod when --period is given.
    #[arg(long, value_parser = digits, default_value = "")]
    pub digits: List<usize>,
    /// Repeating block.
    #[arg(long, value_parser = digits)]
    pub period: Option<List<usize>>,
}

#[derive(Debug, Args, Serialize)]
pub struct CylinderArgs {
    #[arg(long, value_parser = scalars)]
    pub q: List<Scalar>,
    #[arg(long, value_parser = digits, default_value = "")]
    pub digits: List<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct StatsArgs {
    /// Digit weights; with --x the digits are those of x.
    #[arg(long, value_parser = scalars)]
    pub q: Option<List<Scalar>>,
    #[arg(long, value_parser = scalar, requires = "q", requires = "n")]
    pub x: Option<Scalar>,
    /// Number of digits of x to use.
    #[arg(long)]
    pub n: Option<u64>,
    /// Explicit digits (the preperiod when --period is given).
    #[arg(long, value_parser = digits, conflicts_with = "x")]
    pub digits: Option<List<usize>>,
    /// Repeating block: report the exact limiting frequencies and mean.
    #[arg(long, value_parser = digits, conflicts_with_all = ["x", "checkpoints"])]
    pub period: Option<List<usize>>,
    /// Alphabet size when --q is not given.
    #[arg(long)]
    pub s: Option<usize>,
    /// 1-based positions at which to report running statistics.
    #[arg(long, value_parser = positions)]
    pub checkpoints: Option<List<u64>>,
}

#[derive(Debug, Args, Serialize)]
pub struct OscillationArgs {
    #[arg(long, default_value_t = 0)]
    pub c: usize,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    /// Number of rounds.
    #[arg(long, default_value_t = 20)]
    pub k: u32,
}

#[derive(Debug, Subcommand)]
pub enum DimCommand {
    /// Besicovitch–Eggleston dimension of the set with frequencies tau.
    Be(DimBeArgs),
    /// Dimension of the set using only the digits in --subset.
    Moran(DimMoranArgs),
    /// Dimension k/(k+1) of A_k.
    Ak(DimAkArgs),
    /// Lower bound on the dimension of the level set r(x) = theta.
    LevelBound(DimLevelArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct DimBeArgs {
    /// Digit weights; uniform over the length of --tau when omitted.
    #[arg(long, value_parser = scalars)]
    pub q: Option<List<Scalar>>,
    #[arg(long, value_parser = scalars)]
    pub tau: List<Scalar>,
}

#[derive(Debug, Args, Serialize)]
pub struct DimMoranArgs {
    #[arg(long, value_parser = scalars)]
    pub q: List<Scalar>,
    #[arg(long, value_parser = digits)]
    pub subset: List<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct DimAkArgs {
    #[arg(long)]
    pub k: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct DimLevelArgs {
    #[arg(long, value_parser = scalars)]
    pub q: List<Scalar>,
    #[arg(long)]
    pub theta: f64,
}

#[derive(Debug, Subcommand)]
pub enum OptCommand {
    /// Base 3, r = ν₀: maximize under 2τ₁ + 3τ₂ = 1.
    M0,
    /// Base 3, r = ν₁: forces τ₂ = 0.
    M1,
    /// Base 3, r = ν₂: only τ = (1, 0, 0) is admissible.
    M2,
    /// Maximize under one linear constraint "c0,c1,...=b".
    Constrained(OptConstrainedArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct OptConstrainedArgs {
    /// Digit weights; uniform over the constraint length when omitted.
    #[arg(long, value_parser = scalars)]
    pub q: Option<List<Scalar>>,
    #[arg(long, value_parser = constraint)]
    pub constraint: LinearConstraint,
}

#[derive(Debug, Args, Serialize)]
pub struct CubicArgs {
    /// Coefficients a,b,c,d, e.g. 31,-23,9,-1.
    #[arg(value_parser = floats, allow_hyphen_values = true)]
    pub coeffs: List<f64>,
}

#[derive(Debug, Subcommand)]
pub enum ConstructCommand {
    /// d c d d c c …, rounds of doubling length.
    Oscillating(ConstructOscArgs),
    /// A member of A_k with seeded free digits.
    Ak(ConstructAkArgs),
    /// 0.123456789101112…
    Champernowne(ConstructLenArgs),
    /// 0.235711131719…
    CopelandErdos(ConstructLenArgs),
    /// The repeating block 0 1 … s−1.
    Cyclic(ConstructCyclicArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructLenArgs {
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructOscArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub c: usize,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 2)]
    pub s: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructAkArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: u64,
    #[arg(long, default_value_t = 2)]
    pub s: usize,
    /// Seed of the free-digit generator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructCyclicArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub s: usize,
}

#[derive(Debug, Subcommand)]
pub enum SimulateCommand {
    /// Digit frequencies of random numbers against the weights.
    Borel(SimulateArgs),
    /// Distribution of the running mean across trials.
    MeanDist(MeanDistArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_parser = scalars)]
    pub q: List<Scalar>,
    /// Digits per trial.
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Digit law; defaults to the weights, which is Lebesgue measure.
    #[arg(long, value_parser = floats)]
    pub measure: Option<List<f64>>,
}

#[derive(Debug, Args, Serialize)]
pub struct MeanDistArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub sim: SimulateArgs,
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
}
