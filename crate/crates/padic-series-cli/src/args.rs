//! Argument model and validation. Parse errors and out-of-range values are
//! usage errors (exit code 2); scan or certification failures are exit 1.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use padic_series::{is_prime_u64, Sign, DEFAULT_K_CAP};

/// Documented default caps; `--allow-large` lifts them.
pub const N_CAP: i64 = 10_000;
pub const PRIME_CAP: u64 = 1_000_000;
pub const X_CAP: i64 = 1_000;

/// An inclusive integer range, written `a..b`, or a single value `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl FromStr for IntRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_one = |t: &str| -> Result<i64, String> {
            t.trim()
                .parse::<i64>()
                .map_err(|_| format!("expected an integer, got {t:?}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse_one(a)?, parse_one(b)?),
            None => {
                let v = parse_one(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(IntRange { lo, hi })
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

/// Which signs a sweep covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpsilonSelection {
    One,
    MinusOne,
    Both,
}

impl EpsilonSelection {
    pub fn signs(self) -> Vec<Sign> {
        match self {
            EpsilonSelection::One => vec![Sign::Plus],
            EpsilonSelection::MinusOne => vec![Sign::Minus],
            EpsilonSelection::Both => vec![Sign::Plus, Sign::Minus],
        }
    }
}

impl FromStr for EpsilonSelection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" | "+1" => Ok(EpsilonSelection::One),
            "-1" => Ok(EpsilonSelection::MinusOne),
            "both" => Ok(EpsilonSelection::Both),
            other => Err(format!("expected 1, -1 or both, got {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output format; each subcommand has a natural default
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to a file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Lift the documented range caps (k <= 64, N <= 10^4, p <= 10^6, |x| <= 10^3)
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Parser, Debug)]
#[command(
    name = "padic-series",
    version,
    about = "Exact factorial-series identities, p-adic convergence traces, and integer sequences"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit the generated polynomial families U, V core, A as JSON lines
    Polys(PolysArgs),
    /// Certify the finite-sum identity exactly over a parameter grid
    Verify(VerifyArgs),
    /// Trace the p-adic convergence of one series member
    Sum(SumArgs),
    /// Print the derived integer sequences, optionally against pinned references
    Seq(SeqArgs),
    /// Factorial valuations from the base-p digit sum
    Valuation(ValuationArgs),
    /// Left-factorial (Kurepa) scans: gcd form and p-adic digit form
    Kurepa(KurepaArgs),
}

#[derive(Args, Debug)]
pub struct PolysArgs {
    /// Degree indices to emit, e.g. 3 or 1..5
    #[arg(long, default_value = "1..5", allow_hyphen_values = true)]
    pub k: IntRange,
    /// Sign epsilon: 1 or -1
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub epsilon: Sign,
    /// Factorial shift nu
    #[arg(long, default_value_t = 0)]
    pub nu: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value = "1..8", allow_hyphen_values = true)]
    pub k: IntRange,
    #[arg(long, default_value = "1..3", allow_hyphen_values = true)]
    pub alpha: IntRange,
    #[arg(long, default_value = "0..2", allow_hyphen_values = true)]
    pub beta: IntRange,
    #[arg(long, default_value = "0..3", allow_hyphen_values = true)]
    pub nu: IntRange,
    /// 1, -1 or both
    #[arg(long, default_value = "both", allow_hyphen_values = true)]
    pub epsilon: EpsilonSelection,
    /// Series arguments, e.g. -5..5
    #[arg(long, default_value = "-5..5", allow_hyphen_values = true)]
    pub x: IntRange,
    /// Partial-sum lengths
    #[arg(long = "N", default_value = "1..12", allow_hyphen_values = true)]
    pub n: IntRange,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SumArgs {
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value_t = 1)]
    pub alpha: u32,
    #[arg(long, default_value_t = 0)]
    pub beta: u32,
    #[arg(long, default_value_t = 0)]
    pub nu: u32,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub epsilon: Sign,
    /// Integer series argument
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub x: i64,
    /// The prime to trace in
    #[arg(long)]
    pub p: u64,
    /// Trace partial sums N = 1 ..= this bound
    #[arg(long = "N", default_value_t = 50)]
    pub n: u64,
    /// p-adic digits carried by the truncated arithmetic; distances
    /// divisible by p^precision print as "inf"
    #[arg(long, default_value_t = padic_series::DEFAULT_PRECISION)]
    pub precision: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeqName {
    U,
    V,
    UBar,
    VBar,
    Bell,
    All,
}

#[derive(Args, Debug)]
pub struct SeqArgs {
    /// Which sequence to print
    #[arg(long, value_enum, default_value_t = SeqName::All)]
    pub name: SeqName,
    /// How many terms (sequence index k runs 1..=k; bell is indexed from 0)
    #[arg(long, default_value_t = 8)]
    pub k: u32,
    /// Also print the pinned reference values and a match column; exit 1 on
    /// any mismatch
    #[arg(long)]
    pub compare_oeis: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ValuationArgs {
    /// Indices n to report, e.g. 0..50
    #[arg(long, default_value = "0..50", allow_hyphen_values = true)]
    pub n: IntRange,
    /// The prime p
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct KurepaArgs {
    /// Scan gcd(!n, n!) = 2 for n up to --max (the default mode)
    #[arg(long)]
    pub gcd: bool,
    /// Scan the 0-th p-adic digit of sum j! over odd primes p up to --max
    #[arg(long)]
    pub digit: bool,
    /// Upper bound of the scan
    #[arg(long, default_value_t = 1000)]
    pub max: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Post-parse validation: caps and primality. Violations are usage errors.
pub fn validate(config: &RunConfig) -> Result<(), String> {
    let k_cap = DEFAULT_K_CAP as i64;
    match &config.command {
        Command::Polys(a) => {
            check_range("k", &a.k, 1, k_cap, a.output.allow_large)?;
        }
        Command::Verify(a) => {
            check_range("k", &a.k, 1, k_cap, a.output.allow_large)?;
            check_range("alpha", &a.alpha, 1, k_cap, a.output.allow_large)?;
            check_range("beta", &a.beta, 0, k_cap, a.output.allow_large)?;
            check_range("nu", &a.nu, 0, k_cap, a.output.allow_large)?;
            check_range("N", &a.n, 1, N_CAP, a.output.allow_large)?;
            if !a.output.allow_large && (a.x.lo < -X_CAP || a.x.hi > X_CAP) {
                return Err(format!(
                    "x range {} exceeds |x| <= {X_CAP}; pass --allow-large to override",
                    a.x
                ));
            }
        }
        Command::Sum(a) => {
            check_scalar("k", a.k as i64, 1, k_cap, a.output.allow_large)?;
            check_scalar("alpha", a.alpha as i64, 1, k_cap, a.output.allow_large)?;
            check_scalar("beta", a.beta as i64, 0, k_cap, a.output.allow_large)?;
            check_scalar("nu", a.nu as i64, 0, k_cap, a.output.allow_large)?;
            check_scalar("N", a.n as i64, 1, N_CAP, a.output.allow_large)?;
            check_prime(a.p, a.output.allow_large)?;
            check_scalar(
                "precision",
                a.precision as i64,
                1,
                1024,
                a.output.allow_large,
            )?;
            if !a.output.allow_large && a.x.abs() > X_CAP {
                return Err(format!(
                    "|x| = {} exceeds {X_CAP}; pass --allow-large to override",
                    a.x.abs()
                ));
            }
        }
        Command::Seq(a) => {
            check_scalar("k", a.k as i64, 1, k_cap, a.output.allow_large)?;
        }
        Command::Valuation(a) => {
            check_range("n", &a.n, 0, N_CAP, a.output.allow_large)?;
            check_prime(a.p, a.output.allow_large)?;
        }
        Command::Kurepa(a) => {
            if a.gcd && a.digit {
                return Err("--gcd and --digit are mutually exclusive".into());
            }
            if a.digit {
                check_scalar(
                    "max",
                    a.max as i64,
                    3,
                    PRIME_CAP as i64,
                    a.output.allow_large,
                )?;
            } else {
                check_scalar("max", a.max as i64, 2, N_CAP, a.output.allow_large)?;
            }
        }
    }
    Ok(())
}

fn check_range(
    name: &str,
    r: &IntRange,
    min: i64,
    cap: i64,
    allow_large: bool,
) -> Result<(), String> {
    if r.lo < min {
        return Err(format!("{name} range {r} goes below the minimum {min}"));
    }
    if !allow_large && r.hi > cap {
        return Err(format!(
            "{name} range {r} exceeds the cap {cap}; pass --allow-large to override"
        ));
    }
    Ok(())
}

fn check_scalar(name: &str, v: i64, min: i64, cap: i64, allow_large: bool) -> Result<(), String> {
    if v < min {
        return Err(format!("{name} = {v} is below the minimum {min}"));
    }
    if !allow_large && v > cap {
        return Err(format!(
            "{name} = {v} exceeds the cap {cap}; pass --allow-large to override"
        ));
    }
    Ok(())
}

fn check_prime(p: u64, allow_large: bool) -> Result<(), String> {
    if !is_prime_u64(p) {
        return Err(format!("{p} is not prime"));
    }
    if !allow_large && p > PRIME_CAP {
        return Err(format!(
            "prime {p} exceeds the cap {PRIME_CAP}; pass --allow-large to override"
        ));
    }
    Ok(())
}
