//! `colecole`: experiment driver for the Cole-Cole Maxwell integrator.
//!
//! Every subcommand writes CSV and checks a few hard assertions. Exit status
//! is 0 when they all hold, 1 with a JSON failure summary on stderr when one
//! does not, and 2 for invalid input.

mod cmd;
mod csv;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use colecole::stepper::Quadrature;
use serde_json::json;

#[derive(Parser)]
#[command(name = "colecole", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump SFTR, companion and cumulative weights with the convolution check.
    Weights(WeightsArgs),
    /// Temporal convergence table for the manufactured solution on [0, 1].
    Converge(ConvergeArgs),
    /// Source-free energy trace.
    Energy(EnergyArgs),
    /// Grid of the minimum over theta of the auxiliary gap function.
    ThetaScan(ThetaScanArgs),
    /// Final E, H and P of a source-free run, one CSV per component.
    Fields(FieldsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    Sftr,
    Fbdf2,
}

impl From<Scheme> for Quadrature {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::Sftr => Quadrature::Sftr,
            Scheme::Fbdf2 => Quadrature::Fbdf2,
        }
    }
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct WeightsArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    /// Highest index k written.
    #[arg(long, default_value_t = 64)]
    pub steps: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct ConvergeArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    /// Decreasing step sizes, each dividing 1.
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05,0.025")]
    pub tau: Vec<f64>,
    /// Cells in x. 96 keeps the O(h^2) spatial error below the temporal one
    /// for tau >= 1/40 in the second-order cases.
    #[arg(long, default_value_t = 96)]
    pub nx: usize,
    #[arg(long, default_value_t = 96)]
    pub ny: usize,
    #[arg(long, value_enum, default_value_t = Scheme::Sftr)]
    pub scheme: Scheme,
    /// `standard` for the six reference (alpha, theta) pairs or
    /// `alpha:theta,...`. With a sweep, --out names a directory.
    #[arg(long)]
    pub sweep: Option<String>,
    /// Fail unless the finest-pair E and H rates lie within 0.2 of this.
    #[arg(long)]
    pub expect_order: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct EnergyArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.01)]
    pub tau: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// Cells in x. 60x60 is the structured analogue of an unstructured
    /// mesh of size sqrt(2)/60 on the unit square.
    #[arg(long, default_value_t = 60)]
    pub nx: usize,
    #[arg(long, default_value_t = 60)]
    pub ny: usize,
    #[arg(long, value_enum, default_value_t = Scheme::Sftr)]
    pub scheme: Scheme,
    /// `shifts` (alpha 0.5, theta 0.3/0.4/0.5), `orders` (theta 0.5, alpha
    /// 0.1..0.9), `schemes` (both schemes at alpha 0.2/0.5/0.8/0.99) or
    /// `alpha:theta,...`. With a sweep, --out names a directory.
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct ThetaScanArgs {
    #[arg(long, default_value_t = 100)]
    pub x_points: usize,
    #[arg(long, default_value_t = 99)]
    pub alpha_points: usize,
    #[arg(long, default_value_t = 100)]
    pub theta_samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct FieldsArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.01)]
    pub tau: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value_t = 60)]
    pub nx: usize,
    #[arg(long, default_value_t = 60)]
    pub ny: usize,
    #[arg(long, value_enum, default_value_t = Scheme::Sftr)]
    pub scheme: Scheme,
    /// Directory receiving ex.csv, ey.csv, h.csv, px.csv and py.csv.
    #[arg(long)]
    pub out: PathBuf,
}

fn init_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("COLECOLE_THREADS") else {
        return Ok(());
    };
    let n: usize =
        raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            anyhow::anyhow!("COLECOLE_THREADS = `{raw}` is not a positive integer")
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let rendered = e.render().to_string();
            let message = rendered
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ");
            eprintln!("{}", json!({ "status": "error", "message": message }));
            return ExitCode::from(2);
        }
    };
    let outcome = init_threads().and_then(|()| match cli.command {
        Command::Weights(a) => cmd::weights(&a),
        Command::Converge(a) => cmd::converge(&a),
        Command::Energy(a) => cmd::energy(&a),
        Command::ThetaScan(a) => cmd::theta_scan(&a),
        Command::Fields(a) => cmd::fields(&a),
    });
    match outcome {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            let list: Vec<_> = failures
                .iter()
                .map(|f| json!({ "check": f.check, "detail": f.detail }))
                .collect();
            eprintln!("{}", json!({ "status": "fail", "failures": list }));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!(
                "{}",
                json!({ "status": "error", "message": format!("{e:#}") })
            );
            ExitCode::from(2)
        }
    }
}
