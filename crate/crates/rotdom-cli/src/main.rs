mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use commands::{Failure, Outcome};

#[derive(Parser, Debug)]
#[command(
    name = "rotdom",
    version,
    about = "Rotation domains of Salem-polynomial surface automorphisms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Salem certificate and entropy of chi_{n,m}.
    Salem(SalemArgs),
    /// Landing, orbit pattern, charpoly and multiplier checks.
    Verify(ParamArgs),
    /// Formal linearization at q_s and on Sigma_0, plus Birkhoff averages.
    Linearize(LinearizeArgs),
    /// Recurrence raster of a real slice (PGM and CSV).
    Raster(RasterArgs),
    /// Orbit of one point, written as CSV.
    Orbit(OrbitArgs),
    /// Recurrent radius on the slice through a point of Sigma_0.
    Slice(SliceArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SalemArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 256)]
    pub precision: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ParamArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub j: usize,
    #[arg(long, default_value_t = 0)]
    pub root_index: usize,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub sqrt_branch: i32,
    #[arg(long, default_value_t = 256)]
    pub precision: u32,
    /// Multiply delta by `1 + perturb` (breaks the landing condition).
    #[arg(long, allow_negative_numbers = true)]
    pub perturb: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LinearizeArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 12)]
    pub degree: usize,
    /// Base point `w` on Sigma_0 as `re,im`.
    #[arg(long, default_value = "0.31,0.77", allow_hyphen_values = true)]
    pub base: String,
    /// Replace the return map at q_s by a synthetic map with a (1,1) resonance.
    #[arg(long)]
    pub demo_resonant: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartArg {
    Sigma0,
    Affine,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RasterArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value_t = ChartArg::Sigma0)]
    pub chart: ChartArg,
    /// `x0,x1,y0,y1`.
    #[arg(long, default_value = "-2,2,0,1", allow_hyphen_values = true)]
    pub window: String,
    /// `WxH`.
    #[arg(long, default_value = "128x128")]
    pub res: String,
    /// Largest return-time candidate tried; defaults to the first one >= 10^4.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    #[arg(long, default_value = "raster.pgm")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// `t` of the start point `[t : 1 : w]`, as `re,im`.
    #[arg(long, default_value = "0.01,0", allow_hyphen_values = true)]
    pub t: String,
    /// `w` of the start point, as `re,im`.
    #[arg(long, default_value = "0.31,0.77", allow_hyphen_values = true)]
    pub w: String,
    #[arg(long, default_value_t = 400)]
    pub steps: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    #[arg(long, default_value = "orbit.csv")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SliceArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Base point `w` on Sigma_0, as `re,im`.
    #[arg(long, default_value = "0.31,0.77", allow_hyphen_values = true)]
    pub w: String,
    #[arg(long, default_value_t = 31)]
    pub budget: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    #[arg(long, default_value_t = 20)]
    pub bisections: usize,
}

/// Everything a report depends on.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum RunConfig {
    Salem(SalemArgs),
    Verify(ParamArgs),
    Linearize(LinearizeArgs),
    Raster(RasterArgs),
    Orbit(OrbitArgs),
    Slice(SliceArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match cli.command {
        Command::Salem(a) => RunConfig::Salem(a),
        Command::Verify(a) => RunConfig::Verify(a),
        Command::Linearize(a) => RunConfig::Linearize(a),
        Command::Raster(a) => RunConfig::Raster(a),
        Command::Orbit(a) => RunConfig::Orbit(a),
        Command::Slice(a) => RunConfig::Slice(a),
    };
    let outcome = commands::run(&config);
    let (report, code) = match outcome {
        Ok(Outcome { report, code }) => (report, code),
        Err(Failure { code, reason }) => {
            eprintln!("error: {reason}");
            (
                serde_json::json!({ "status": "error", "exit_code": code, "reason": reason }),
                code,
            )
        }
    };
    let doc = serde_json::json!({ "config": config, "report": report });
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&doc).expect("report serializes")
    );
    ExitCode::from(code)
}
