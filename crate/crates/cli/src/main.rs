//! `ltensor`: command-line front end for Dirichlet L-function, Cramér-series,
//! tensor-square, and key-equation computations.
//!
//! Exit codes: 0 success/PASS, 1 FAIL or computation failure, 2 input error.

// `!(x > 0.0)` comparisons deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::ZeroCache;
use config::{Format, Settings};

/// An error with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn compute(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<ltensor_core::Error> for CliError {
    fn from(e: ltensor_core::Error) -> Self {
        use ltensor_core::Error as E;
        match e {
            E::Input(_) | E::Params(_) | E::Domain(_) | E::Pole(_) => CliError::input(e.to_string()),
            _ => CliError::compute(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "ltensor",
    version,
    about = "Dirichlet L-functions, Cramér series and tensor squares"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Abscissa parameter α of the contour, 0 < α < 1.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Contour height ε (below the first zero ordinate).
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Sector angle θ, 0 < θ < π/4; chosen automatically when omitted.
    #[arg(long, global = true)]
    theta: Option<f64>,
    /// Prime limit P of truncated prime sums.
    #[arg(long, global = true)]
    prime_limit: Option<u64>,
    /// Inner truncation level of the tensor-square ladder sums.
    #[arg(long, global = true)]
    inner_limit: Option<u64>,
    /// Zero height T of zero-side sums.
    #[arg(long, global = true)]
    zero_height: Option<f64>,
    /// Relative tolerance of identity checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Allow points outside the admissible region (analytic continuation).
    #[arg(long, global = true)]
    continued: bool,
    /// Output format.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Directory of the zero cache.
    #[arg(long, global = true, env = "LTENSOR_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Config file of `key = value` lines; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads of the compute kernels.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

impl GlobalArgs {
    fn settings(&self) -> Settings {
        Settings {
            alpha: self.alpha,
            epsilon: self.epsilon,
            theta: self.theta,
            prime_limit: self.prime_limit,
            inner_limit: self.inner_limit,
            zero_height: self.zero_height,
            tol: self.tol,
            continued: self.continued,
            format: self.format,
            cache_dir: self.cache_dir.clone(),
            threads: self.threads,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the characters mod N with conductor, parity and Gauss sum.
    Chars { modulus: u64 },
    /// Compute (or load from the cache) the zeros of L(s, χ) up to the zero height.
    Zeros {
        label: String,
        /// Number of ordinates to print.
        #[arg(long, default_value_t = 10)]
        show: usize,
    },
    /// L(s, χ), the completed L-function and the functional-equation residual.
    LValue {
        label: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// l_χ(t) by the explicit formula and by the zero sum.
    Theta {
        label: String,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Real parts `start:stop:step`.
        #[arg(long, allow_hyphen_values = true)]
        t_grid: Option<String>,
        /// Imaginary part added to every grid point.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t_im: f64,
    },
    /// The tensor square of L(s, χ₁) and L(s, χ₂) with its ten terms.
    #[command(alias = "tensor")]
    TensorEval {
        label1: String,
        label2: String,
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        /// Real parts `start:stop:step`.
        #[arg(long)]
        s_grid: Option<String>,
        /// Imaginary part added to every grid point.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s_im: f64,
    },
    /// Check the zero-side ↔ prime-side identity for one character.
    VerifyR1 {
        label: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Check the zero-side ↔ prime-side identity for a pair of characters.
    VerifyR2 {
        label1: String,
        label2: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Tensor square over an s-grid for several (α, ε); reports the spread.
    Sweep {
        label1: String,
        label2: String,
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        #[arg(long)]
        s_grid: Option<String>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s_im: f64,
        /// Comma-separated α values.
        #[arg(long, value_delimiter = ',', default_values_t = [0.3, 0.6])]
        alphas: Vec<f64>,
        /// Comma-separated ε values (default: the configured ε, or 1).
        #[arg(long, value_delimiter = ',')]
        epsilons: Vec<f64>,
    },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let flags = cli.global.settings();
    let settings = match &cli.global.config {
        Some(path) => Settings::from_file(path)?.overridden_by(&flags),
        None => flags,
    };
    settings.check()?;
    if let Some(n) = settings.threads {
        // Read by the compute kernels' thread pool on first use.
        std::env::set_var("RAYON_NUM_THREADS", n.to_string());
    }
    let cache = ZeroCache::new(settings.cache_dir.clone());
    let fmt = |default| settings.format.unwrap_or(default);
    match &cli.command {
        Command::Chars { modulus } => commands::chars(*modulus, fmt(Format::Csv)),
        Command::Zeros { label, show } => commands::zeros(label, *show, &settings, &cache, fmt(Format::Csv)),
        Command::LValue { label, s } => commands::lvalue(label, s, fmt(Format::Json)),
        Command::Theta { label, t, t_grid, t_im } => {
            let ts = commands::points(t.as_deref(), t_grid.as_deref(), *t_im, "t")?;
            commands::theta(label, &ts, &settings, &cache, fmt(Format::Csv))
        }
        Command::TensorEval {
            label1,
            label2,
            s,
            s_grid,
            s_im,
        } => {
            let ss = commands::points(s.as_deref(), s_grid.as_deref(), *s_im, "s")?;
            commands::tensor_eval([label1, label2], &ss, &settings, &cache, fmt(Format::Json))
        }
        Command::VerifyR1 { label, w, s } => commands::verify_r1(label, w, s, &settings, &cache, fmt(Format::Json)),
        Command::VerifyR2 { label1, label2, w, s } => {
            commands::verify_r2([label1, label2], w, s, &settings, &cache, fmt(Format::Json))
        }
        Command::Sweep {
            label1,
            label2,
            s,
            s_grid,
            s_im,
            alphas,
            epsilons,
        } => {
            let ss = commands::points(s.as_deref(), s_grid.as_deref(), *s_im, "s")?;
            let eps = if epsilons.is_empty() {
                vec![settings.epsilon.unwrap_or(1.0)]
            } else {
                epsilons.clone()
            };
            commands::sweep([label1, label2], &ss, alphas, &eps, &settings, &cache, fmt(Format::Csv))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
