use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

/// Eisenstein–Kronecker numbers and Kronecker theta expansions for CM curves.
#[derive(Parser, Serialize, Debug)]
#[command(name = "ektheta", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON artifact here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized sample points.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

/// Curve selector: a catalog row twisted by `u`, or raw invariants.
#[derive(Args, Serialize, Debug, Clone)]
pub struct CurveArgs {
    /// Catalog label such as "Z[i]" or "Z[(1+sqrt(-7))/2]".
    #[arg(long, visible_alias = "curve", conflicts_with_all = ["g2", "g3"])]
    pub catalog: Option<String>,
    /// Twist parameter for catalog rows.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub u: String,
    #[arg(long, allow_hyphen_values = true, requires = "g3")]
    pub g2: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "g2")]
    pub g3: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub e2star: Option<String>,
    /// Squarefree d with CM by an order of Q(sqrt(-d)), for raw invariants.
    #[arg(long)]
    pub cm: Option<u32>,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct Bits {
    /// Working precision in bits.
    #[arg(long = "prec", env = "EKTHETA_PREC", default_value_t = 256)]
    pub bits: u32,
}

#[derive(Subcommand, Serialize, Debug)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// The table of CM curves over Q.
    Catalog {
        /// Also instantiate every row at this u.
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Exact expansions at the origin.
    Expand {
        #[arg(value_enum)]
        what: ExpandTarget,
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 10)]
        order: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The formal logarithm λ(t).
    FormalLog {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 20)]
        order: u32,
    },
    /// Θ(z, w) composed with the formal logarithm.
    Compose {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 10)]
        order: u32,
        /// Use the e2*-corrected theta function.
        #[arg(long)]
        starred: bool,
    },
    /// p-adic denominator exponents of the starred composed expansion.
    Valuations {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 30)]
        order: u32,
        /// Heatmap destination (columns m,n,denom_exponent).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Fit the diagonal band by least squares.
        #[arg(long)]
        fit_diagonal: bool,
        /// Smallest total degree used by the fit.
        #[arg(long, default_value_t = 10)]
        fit_from: u32,
    },
    /// An Eisenstein–Kronecker number e*_{a,b}(z0, w0), or K_a(z0, w0, s) with --s.
    Ek {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 0)]
        a: u32,
        #[arg(long, default_value_t = 1)]
        b: u32,
        /// Torsion point "x,y" meaning x·ω1 + y·ω2.
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        z0: String,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        w0: String,
        /// Evaluate K_a(z0, w0, s) at s = "re" or "re,im" instead.
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        #[arg(long, default_value_t = 1e-20)]
        err: f64,
        #[command(flatten)]
        prec: Bits,
    },
    /// Partial Hecke L-value of a character of an imaginary quadratic field.
    HeckeL {
        /// Q(sqrt(-d)) with class number one.
        #[arg(long)]
        d: u32,
        /// Conductor "x,y" meaning x + y·ω.
        #[arg(long, allow_hyphen_values = true)]
        conductor: String,
        /// Infinity type "m,n".
        #[arg(long, default_value = "0,1")]
        infinity: String,
        /// Finite part on a residue "x,y=re,im"; repeat for every class prime to f.
        #[arg(long = "value", allow_hyphen_values = true)]
        values: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 1e-20)]
        err: f64,
        #[command(flatten)]
        prec: Bits,
    },
    /// Numerical verification suites.
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// The p-adic measure attached to Θ* at the origin.
    Measure {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        prime: u64,
        /// Absolute p-adic precision N.
        #[arg(long = "prec", default_value_t = 2)]
        n: u32,
        /// Truncation order in S and T.
        #[arg(long, default_value_t = 12)]
        order: u32,
        /// Restrict to Z_p^× × Z_p^×.
        #[arg(long)]
        restrict: bool,
        /// Emit moments ∫x^{b−1}y^a for a ≤ a_max, 1 ≤ b ≤ b_max, given as "a_max,b_max".
        #[arg(long)]
        moments: Option<String>,
        /// Include the measure coefficients.
        #[arg(long)]
        json: bool,
    },
    /// Unit-restricted moments against the interpolation formula.
    VerifyInterpolation {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        prime: u64,
        #[arg(long = "prec", default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 11)]
        amax: u32,
        #[arg(long, default_value_t = 12)]
        bmax: u32,
    },
}

#[derive(Subcommand, Serialize, Debug)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyCommand {
    /// Θ(z, w) = exp(zw̄/A)·K_1(z, w, 1) at random points.
    Kronecker {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long, default_value_t = 1e-18)]
        tol: f64,
        #[command(flatten)]
        prec: Bits,
    },
    /// Laurent coefficients of Θ_{z0,w0} against EK numbers.
    GeneratingFunction {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        z0: String,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        w0: String,
        #[arg(long, default_value_t = 4)]
        amax: u32,
        #[arg(long, default_value_t = 4)]
        bmax: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        prec: Bits,
    },
    /// Distribution relation for ideals (a), (b) of the CM order.
    Distribution {
        #[command(flatten)]
        curve: CurveArgs,
        /// Generator "x,y" meaning x + y·ω.
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        epsilon: String,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        z0: String,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        w0: String,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        prec: Bits,
    },
    /// Functional equation of K_a(z0, w0, s).
    FunctionalEquation {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 0)]
        a: u32,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        z0: String,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        w0: String,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 1e-15)]
        err: f64,
        #[arg(long, default_value_t = 1e-15)]
        tol: f64,
        #[command(flatten)]
        prec: Bits,
    },
    /// v_p ≥ 0 for every coefficient of the starred composed expansion.
    Integrality {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 30)]
        order: u32,
    },
    /// Kummer congruences for the unit-restricted measure.
    Kummer {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        prime: u64,
        #[arg(long = "prec", default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 20)]
        max_exponent: u32,
    },
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy)]
#[serde(rename_all = "kebab-case")]
pub enum ExpandTarget {
    Kronecker,
    Theta,
    Sigma,
    Wp,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
}
