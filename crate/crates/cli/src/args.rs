//! Flag definitions and the small value parsers they rely on.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "dunkl-lab", version, about = "Numerical lab for radial Dunkl processes of types A and B")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulate an ensemble and write a scaled one-point histogram.
    Simulate(SimulateArgs),
    /// Compute the peak set (log-gas minimizer) and its identity residuals.
    Fekete(FeketeArgs),
    /// Run verification suites; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Print the intertwiner image of a monomial symmetric polynomial.
    Intertwine(IntertwineArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum RootType {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// Divide by √(βt).
    #[value(name = "beta_t")]
    BetaT,
    /// Divide by √(βνt); type B only.
    #[value(name = "beta_nu_t")]
    BetaNuT,
    /// Leave positions unscaled.
    None,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long = "type", value_enum, default_value = "A")]
    pub root_type: RootType,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    /// Bessel index; required for type B and rejected for type A.
    #[arg(long)]
    pub nu: Option<f64>,
    /// Final time.
    #[arg(long = "t", default_value_t = 1.0)]
    pub t_final: f64,
    #[arg(long, default_value_t = dunkl_lab::sde::DT_RELAXATION)]
    pub dt: f64,
    /// Number of independent paths; scientific notation such as 1e5 is accepted.
    #[arg(long, value_parser = parse_count, default_value = "10000")]
    pub paths: usize,
    #[arg(long, default_value_t = dunkl_lab::sde::DEFAULT_SEED)]
    pub seed: u64,
    /// Comma-separated starting positions; defaults to a unit lattice.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub init: Option<Values>,
    #[arg(long, value_enum, default_value = "beta_t")]
    pub scale: Scale,
    /// Histogram range and width as lo:hi:width; defaults to the data range at width 0.01.
    #[arg(long, value_parser = parse_bins, allow_hyphen_values = true)]
    pub bins: Option<Bins>,
    /// Add the exact β=2 density from the origin as a second column.
    #[arg(long)]
    pub exact: bool,
    /// Output directory for histogram.csv and manifest.json.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct FeketeArgs {
    #[arg(long = "type", value_enum)]
    pub root_type: RootType,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub nu: Option<f64>,
    /// JSON output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Freezing,
    Logdisc,
    Intertwine,
    Limits,
    Jack,
    Kernel,
    Fke,
    Bounds,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Freezing,
        Suite::Logdisc,
        Suite::Intertwine,
        Suite::Limits,
        Suite::Jack,
        Suite::Kernel,
        Suite::Fke,
        Suite::Bounds,
    ];
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suites to run; repeat or comma-separate. All suites by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub suite: Vec<Suite>,
    /// Largest particle number used by the size-dependent suites.
    #[arg(long, default_value_t = 3)]
    pub n_max: usize,
    /// Monte Carlo samples for the kernel suite.
    #[arg(long, value_parser = parse_count, default_value = "100000")]
    pub paths: usize,
    /// Random chamber points per configuration in the fke suite.
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    #[arg(long, default_value_t = dunkl_lab::sde::DEFAULT_SEED)]
    pub seed: u64,
    /// JSON report file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisArg {
    Jack,
    Monomial,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitArg {
    None,
    Beta,
    Nu,
}

#[derive(Args, Debug)]
pub struct IntertwineArgs {
    #[arg(long = "type", value_enum, default_value = "A")]
    pub root_type: RootType,
    /// Partition as comma-separated parts; the empty string is the constant 1.
    #[arg(long, value_parser = parse_partition, default_value = "")]
    pub lambda: Parts,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long, value_enum, default_value = "monomial")]
    pub basis: BasisArg,
    #[arg(long, value_enum, default_value = "none")]
    pub limit: LimitArg,
}

/// Comma-separated reals.
#[derive(Clone, Debug, PartialEq)]
pub struct Values(pub Vec<f64>);

/// Comma-separated nonnegative integers.
#[derive(Clone, Debug, PartialEq)]
pub struct Parts(pub Vec<usize>);

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Bins {
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
}

pub fn parse_count(s: &str) -> Result<usize, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(v >= 1.0 && v.fract() == 0.0 && v <= 1e15) {
        return Err(format!("`{s}` is not a positive integer"));
    }
    Ok(v as usize)
}

pub fn parse_list(s: &str) -> Result<Values, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect::<Result<_, _>>()
        .map(Values)
}

pub fn parse_bins(s: &str) -> Result<Bins, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, width] = parts.as_slice() else {
        return Err(format!("`{s}` is not of the form lo:hi:width"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
    let bins = Bins { lo: num(lo)?, hi: num(hi)?, width: num(width)? };
    if !(bins.lo < bins.hi && bins.width > 0.0) {
        return Err("bins need lo < hi and a positive width".into());
    }
    Ok(bins)
}

pub fn parse_partition(s: &str) -> Result<Parts, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("`{t}` is not a nonnegative integer")))
        .collect::<Result<_, _>>()
        .map(Parts)
}
