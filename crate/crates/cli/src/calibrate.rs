//! `treelabel calibrate`: re-measure the congestion constant and write the
//! calibration file with the full measurement grid.

use std::path::PathBuf;

use clap::Args;

use treelabel::harness::calibration::run_calibration;

use crate::config::FileConfig;
use crate::error::CliError;

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Seeds 0..N per grid cell
    #[arg(long)]
    pub seeds: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &CalibrateArgs) -> Result<(), CliError> {
    let cfg = FileConfig::load_opt(args.config.as_ref())?;
    let sizes = args
        .sizes
        .clone()
        .or(cfg.sizes)
        .unwrap_or_else(|| vec![64, 256, 1024, 4096]);
    let seeds = args.seeds.or(cfg.seeds).unwrap_or(20);
    let out = args
        .out
        .clone()
        .or(cfg.out)
        .unwrap_or_else(|| PathBuf::from("calibration.json"));

    let cal = run_calibration(&sizes, seeds);
    std::fs::write(&out, cal.to_json())?;
    println!(
        "calibrated over {} runs: max congestion/(1+log2 n) ratio = {:.4}, c_cal = {}; wrote {}",
        cal.grid.len(),
        cal.measured_max_ratio,
        cal.c_cal,
        out.display()
    );
    Ok(())
}
