use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod report;
mod svg;

/// Exact service rate regions of linear coded storage systems.
#[derive(Parser)]
#[command(name = "srr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Code profile, minimal recovery sets and region parameters.
    Analyze {
        file: PathBuf,
        /// Also compute the maximum sum of squares (needs the vertex list).
        #[arg(long)]
        r2: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide whether a demand vector is in the region.
    Member {
        file: PathBuf,
        /// Comma-separated rationals, e.g. "4/3,2/3".
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value = "1")]
        mu: String,
        /// Also scale the certificate to an integer allocation.
        #[arg(long)]
        integerize: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// H- and V-representation of the region.
    Region {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value = "1")]
        mu: String,
        #[arg(long, value_enum, default_value_t = RegionMethod::Refine)]
        method: RegionMethod,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Outer bounds, their polygons and a containment verdict.
    Bounds {
        file: PathBuf,
        /// "all" or a comma-separated subset of dual,sysnode,hybrid,uniform,hyperplane,clip.
        #[arg(long, default_value = "all")]
        set: String,
        /// Extra clipped-sum weight vector; repeatable.
        #[arg(long = "b")]
        b: Vec<String>,
        /// Write a layered plot of the region and the bounds (k = 2).
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact region volume.
    Volume {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = VolumeMethod::Auto)]
        method: VolumeMethod,
        /// With auto: run both paths when a closed form applies and compare.
        #[arg(long)]
        verify: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum RegionMethod {
    Refine,
    Fm,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum VolumeMethod {
    Auto,
    ClosedForm,
    Triangulate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match cli.command {
        Command::Analyze { file, r2, output } => commands::analyze(&file, r2).and_then(|o| o.emit(output.as_deref())),
        Command::Member {
            file,
            lambda,
            mu,
            integerize,
            output,
        } => commands::member(&file, &lambda, &mu, integerize).and_then(|o| o.emit(output.as_deref())),
        Command::Region {
            file,
            format,
            mu,
            method,
            output,
        } => commands::region(&file, format, &mu, method).and_then(|o| o.emit(output.as_deref())),
        Command::Bounds {
            file,
            set,
            b,
            svg,
            output,
        } => commands::bounds(&file, &set, &b, svg.as_deref()).and_then(|o| o.emit(output.as_deref())),
        Command::Volume {
            file,
            method,
            verify,
            output,
        } => commands::volume(&file, method, verify).and_then(|o| o.emit(output.as_deref())),
    };
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("srr: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
