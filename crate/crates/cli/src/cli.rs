use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "digitlab", version, about = "Certified digit expansions, subword complexity and Diophantine bound experiments")]
#[command(args_override_self = true)]
pub struct Cli {
    /// Emit a JSON record.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit a CSV table.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Directory for the digit cache.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Working precision in bits for certified real arithmetic.
    #[arg(long, global = true, default_value_t = 200)]
    pub precision_bits: u32,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// key=value file with default options for the subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certified digits of a number.
    Digits(DigitsArgs),
    /// Block complexity p(n) of a digit prefix.
    Complexity(ComplexityArgs),
    /// Checks p(n) >= n + 1 on a digit prefix.
    MorseHedlund(ComplexityArgs),
    /// Number of digit changes nbdc(n).
    Nbdc(NbdcArgs),
    /// Best repetitions of prefixes and the periodic approximants they give.
    Repetition(RepetitionArgs),
    /// Evaluates a named bound formula: `bounds t2 r=3 delta=1`.
    Bounds(BoundsArgs),
    /// Twisted heights, small-point searches, the gap experiment and the index.
    #[command(subcommand)]
    Twisted(TwistedCommand),
    /// Digits and terms of a gap series.
    GapSeries(GapSeriesArgs),
    /// Approximants from runs of equal digits, optionally with the Liouville check.
    Runs(RunsArgs),
    /// Solutions of the Ridout system grouped by direction.
    Ridout(RidoutArgs),
    /// Solutions with the decaying exponent eps(y) and their growth.
    Cugiani(CugianiArgs),
    /// Finite-range diagnostics for the asymptotic statements.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Args, Debug, Clone)]
pub struct SubjectArgs {
    /// Minimal polynomial, constant term first, e.g. [-2,0,1].
    #[arg(long, allow_hyphen_values = true)]
    pub minpoly: Option<String>,
    /// Isolating interval of the root.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true, requires = "minpoly")]
    pub interval: Option<Vec<String>>,
    /// Rational added to the root.
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<String>,
    /// Digit source: `alg [c0,..] lo hi`, `gap b=2 n=geom:2 a=const:1` or `champernowne`.
    #[arg(long, conflicts_with_all = ["minpoly", "input"])]
    pub source: Option<String>,
    /// Digits stored in a cache file; the source and base come from its header.
    #[arg(long, conflicts_with = "minpoly")]
    pub input: Option<PathBuf>,
    /// Digit base (default 2).
    #[arg(long, short = 'b')]
    pub base: Option<u32>,
    /// Number of digits (default 2^20, or the whole input file).
    #[arg(short = 'N', long = "digits")]
    pub n: Option<usize>,
}

#[derive(Args, Debug)]
pub struct DigitsArgs {
    #[command(flatten)]
    pub subject: SubjectArgs,
}

#[derive(Args, Debug)]
pub struct ComplexityArgs {
    #[command(flatten)]
    pub subject: SubjectArgs,
    #[arg(long, default_value_t = 100)]
    pub n_max: usize,
    /// Count factors by direct enumeration instead of the suffix automaton.
    #[arg(long)]
    pub naive: bool,
}

#[derive(Args, Debug)]
pub struct NbdcArgs {
    #[command(flatten)]
    pub subject: SubjectArgs,
    /// Largest n; defaults to N - 1.
    #[arg(long)]
    pub n_max: Option<usize>,
}

#[derive(Args, Debug)]
pub struct RepetitionArgs {
    #[command(flatten)]
    pub subject: SubjectArgs,
    /// Prefix length for a single factorization.
    #[arg(long, conflicts_with = "sequence")]
    pub ell: Option<usize>,
    /// Tabulate the factorization for every prefix length 2..=ell.
    #[arg(long, requires = "ell")]
    pub all: bool,
    /// Build the doubling sequence of approximants.
    #[arg(long)]
    pub sequence: bool,
    /// Exponent v of the quality inequality, in (0, 1/11).
    #[arg(long, default_value = "1/20")]
    pub v: String,
    /// Complexity exponent u (default v + eta(v)).
    #[arg(long)]
    pub u: Option<String>,
    #[arg(long, default_value = "1")]
    pub c3: String,
    #[arg(long, default_value_t = 8)]
    pub count: usize,
    /// Digit budget of the sequence search.
    #[arg(long, default_value_t = 1 << 13)]
    pub max_digits: usize,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Formula name, e.g. t2, ridout_subspace_count, B, m.
    pub name: String,
    /// Parameters as key=value.
    pub params: Vec<String>,
    /// Use base-2 logarithms instead of natural ones.
    #[arg(long)]
    pub log2: bool,
}

#[derive(Args, Debug)]
pub struct SystemArgs {
    /// JSON file: {"n": 2, "forms": {"inf": [[1,0],[1,1]]}, "c": {"inf": ["1/2","-1/2"]}}.
    #[arg(long)]
    pub system: PathBuf,
}

#[derive(Args, Debug)]
pub struct QArgs {
    /// Q = base^exp.
    #[arg(long)]
    pub q: String,
    #[arg(long, default_value = "1")]
    pub q_exp: String,
}

#[derive(Subcommand, Debug)]
pub enum TwistedCommand {
    /// H_Q(x) of one point.
    Height {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        q: QArgs,
        /// Coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Primitive points of the box with H_Q(x) <= Q^(-delta).
    Search {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        q: QArgs,
        #[arg(long)]
        delta: String,
        #[arg(long = "box", default_value_t = 100)]
        box_: u64,
        /// Test every point of the box.
        #[arg(long)]
        brute: bool,
    },
    /// Upper estimates of the successive infima over the box.
    Infima {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        q: QArgs,
        #[arg(long = "box", default_value_t = 100)]
        box_: u64,
    },
    /// Collinearity of small points over the window [Q0, Q0^(1+delta/2)).
    Gap {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        q0: String,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long = "box", default_value_t = 1000)]
        box_: u64,
    },
    /// The gap experiment on random determinant-one systems drawn from --seed.
    GapSuite {
        #[arg(long, default_value_t = 100)]
        systems: usize,
        #[arg(long, default_value = "1/2")]
        delta: String,
        #[arg(long, default_value = "17")]
        q0: String,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long = "box", default_value_t = 1000)]
        box_: u64,
    },
    /// Index of a multihomogeneous polynomial at a point.
    Index {
        #[command(flatten)]
        poly: PolyArgs,
    },
    /// Hypotheses and conclusion of Roth's lemma.
    Roth {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        theta: String,
    },
}

#[derive(Args, Debug)]
pub struct PolyArgs {
    /// JSON file: {"r": [1, 1], "terms": [["1", [1,0,0,1]], ["-1", [0,1,1,0]]]}; omit for the determinant.
    #[arg(long)]
    pub poly: Option<PathBuf>,
    /// Weights r_1,..,r_m.
    #[arg(long)]
    pub weights: String,
    /// One point per block as `a:b`, comma separated, e.g. 1:0,1:0.
    #[arg(long, allow_hyphen_values = true)]
    pub points: String,
}

#[derive(Args, Debug)]
pub struct GapSeriesArgs {
    /// Exponent eta of n_j = 2^floor(j^eta).
    #[arg(long, conflicts_with = "spec")]
    pub eta: Option<String>,
    /// Full series spec, e.g. `b=2 n=geom:2 a=const:1`.
    #[arg(long)]
    pub spec: Option<String>,
    #[arg(long, short = 'b', default_value_t = 2)]
    pub base: u32,
    #[arg(short = 'N', long = "digits", default_value_t = 1024)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct RunsArgs {
    #[command(flatten)]
    pub subject: SubjectArgs,
    /// All runs with n_j <= this.
    #[arg(long, conflicts_with = "count")]
    pub max_n: Option<usize>,
    /// The first runs.
    #[arg(long)]
    pub count: Option<usize>,
    /// Also report U = 1 + 3 H((b-1) x) and check n_(j+1) <= 2 d n_j beyond it.
    #[arg(long)]
    pub liouville: bool,
}

#[derive(Args, Debug)]
pub struct PlaceArgs {
    /// Exponent at infinity (default 2 + eps).
    #[arg(long)]
    pub f_inf: Option<String>,
    /// Exponents on x at primes, `p:f`, comma separated.
    #[arg(long)]
    pub s1: Option<String>,
    /// Exponents on y at primes, `p:f`, comma separated.
    #[arg(long)]
    pub s2: Option<String>,
}

#[derive(Args, Debug)]
pub struct RidoutArgs {
    #[command(flatten)]
    pub subject: SubjectArgs,
    #[command(flatten)]
    pub places: PlaceArgs,
    #[arg(long, default_value = "1/2")]
    pub eps: String,
    #[arg(long, default_value_t = 10_000)]
    pub y_max: u64,
}

#[derive(Args, Debug)]
pub struct CugianiArgs {
    #[command(flatten)]
    pub subject: SubjectArgs,
    #[command(flatten)]
    pub places: PlaceArgs,
    /// Iteration depth of the logarithms in eps(y).
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value = "1")]
    pub c: String,
    #[arg(long, default_value_t = 10_000)]
    pub y_max: u64,
}

#[derive(Subcommand, Debug)]
pub enum ExperimentCommand {
    /// p(n) / (n (log n)^eta) and its running supremum.
    ComplexityGrowth {
        #[command(flatten)]
        subject: SubjectArgs,
        #[arg(long, default_value = "0.09")]
        eta: f64,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
    },
    /// nbdc(n) on a dyadic grid with the fitted exponent of log n.
    DigitChanges {
        #[command(flatten)]
        subject: SubjectArgs,
        /// Degree used in the display (default: degree of the algebraic input).
        #[arg(long)]
        degree: Option<u64>,
    },
    /// nbdc growth of the eta-gap series against the algebraic display.
    GapSeriesChanges {
        #[arg(long, default_value = "4/5")]
        eta: String,
        #[arg(long, short = 'b', default_value_t = 2)]
        base: u32,
        #[arg(short = 'N', long = "digits", default_value_t = 1 << 20)]
        n: usize,
        /// Constant of the display (default: fitted on sqrt(2) - 1 in the same base and range).
        #[arg(long)]
        c1: Option<f64>,
        #[arg(long, default_value = "2,3,4,5,10")]
        degrees: String,
    },
}
