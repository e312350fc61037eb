use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "curvelab",
    version,
    about = "Weitzenböck curvature terms and sectional-curvature certificates"
)]
pub struct Cli {
    /// Write the JSON report here (atomically) instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split an operator into scalar, traceless Ricci, Weyl and ∧⁴ parts.
    Decompose(DecomposeArgs),
    /// Build K(R, ρ) on an exterior or symmetric power.
    Kterm(KtermArgs),
    /// Run one of the built-in verification suites.
    Verify(VerifyArgs),
    /// Certify or refute a sectional-curvature bound.
    Certify(CertifyArgs),
}

/// Where the curvature operator comes from.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Operator JSON file, or `-` for stdin.
    #[arg(value_name = "INPUT", conflicts_with = "fixture")]
    pub input: Option<PathBuf>,

    /// Named operator: identity, hodge-star, s2xs2, RU, RL, RW, RW4.
    #[arg(long, requires = "n")]
    pub fixture: Option<String>,

    /// Dimension for `--fixture`.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rep {
    /// ∧ᵖℝⁿ
    Wedge,
    /// Symᵖℝⁿ
    Sym,
    /// Symᵖ₀ℝⁿ
    Sym0,
}

#[derive(Debug, Args)]
pub struct KtermArgs {
    #[arg(long, value_enum)]
    pub rep: Rep,

    #[arg(long)]
    pub p: usize,

    /// Include the harmonic basis (columns over normalized monomials) for `sym0`.
    #[arg(long)]
    pub with_basis: bool,

    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    #[value(name = "thmB", alias = "thmb")]
    ThmB,
    Integral,
    Lemmas,
    Gpowers,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,

    /// Dimension (defaults: 4; ignored by `lemmas`).
    #[arg(long)]
    pub n: Option<usize>,

    /// Largest degree (defaults: 4, or 8 for `lemmas`).
    #[arg(long)]
    pub pmax: Option<usize>,

    /// Random operators per degree.
    #[arg(long, default_value_t = 10)]
    pub trials: usize,

    #[arg(long, default_value_t = curvelab_core::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// The bound `k`.
    #[arg(long, allow_hyphen_values = true)]
    pub k: f64,

    /// Ask for `sec > k` instead of `sec ≥ k`.
    #[arg(long)]
    pub strict: bool,

    /// Test the upper bound `sec ≤ k` instead.
    #[arg(long)]
    pub upper: bool,

    /// Largest degree of the hierarchy table outside dimension 4.
    #[arg(long, default_value_t = 6)]
    pub pmax: usize,

    #[arg(long, default_value_t = curvelab_core::certify::DEFAULT_RESTARTS)]
    pub restarts: usize,

    #[arg(long, default_value_t = curvelab_core::DEFAULT_SEED)]
    pub seed: u64,

    #[command(flatten)]
    pub input: InputArgs,
}
