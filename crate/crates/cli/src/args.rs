use clap::{Parser, Subcommand, ValueEnum};
use hookparity::partitions::DEFAULT_ENUMERATION_CAP;

#[derive(Parser, Debug)]
#[command(
    name = "hookparity",
    version,
    about = "Parity of t-hook counts in integer partitions"
)]
pub struct Cli {
    /// Working precision in decimal digits.
    #[arg(
        long,
        global = true,
        env = "HOOKPARITY_PRECISION",
        default_value_t = 50,
        value_parser = clap::value_parser!(u32).range(15..)
    )]
    pub precision: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,

    /// Fixed number of k-terms in the exact formula.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub cutoff: Option<u64>,

    /// Largest n that brute-force enumeration accepts.
    #[arg(long = "enum-cap", global = true, default_value_t = DEFAULT_ENUMERATION_CAP as u64)]
    pub enum_cap: u64,

    /// Worker threads for the parallel kernels.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Brute,
    Series,
    Rademacher,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    DedekindReciprocity,
    TransformationLaw,
    OracleEquivalence,
    Lemma32,
    SignPeriods,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// A_t(n) with p_t^e(n) and p_t^o(n) by one or all methods.
    Exact {
        #[arg(short = 't')]
        t: u32,
        #[arg(short = 'n')]
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
    },
    /// Reproduce one of the four reference tables.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        which: u8,
    },
    /// Signs of A_t(n) on a window and their period.
    Signs {
        #[arg(short = 't')]
        t: u32,
        n_start: u64,
        n_end: u64,
    },
    /// δ_t^e(n) and δ_t^o(n) as decimals.
    Delta {
        #[arg(short = 't')]
        t: u32,
        #[arg(short = 'n')]
        n: u64,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(0..=1000))]
        digits: u32,
    },
    /// Run an invariant suite; exits 2 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}
