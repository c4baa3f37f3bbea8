//! Resolved run configuration: grid sizes derived from one `--grid` knob,
//! slack, search horizon, output format.

use bbounds_core::bounds::CheckConfig;
use bbounds_core::GridConfig;
use clap::{Args, ValueEnum};

use crate::emit::JVal;
use crate::CliError;

pub const GRID_ENV_VAR: &str = "BB_GRID_POINTS";
const DEFAULT_GRID_POINTS: usize = 4097;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

/// Flags shared by every subcommand that runs scans.
#[derive(Debug, Args)]
pub struct RunOpts {
    /// Sup-norm scan grid points (odd, >= 17); the modulus grids scale with
    /// it. Defaults to BB_GRID_POINTS or 4097.
    #[arg(long)]
    pub grid: Option<usize>,

    /// Golden-section refinement rounds around each local maximum.
    #[arg(long, default_value_t = 3)]
    pub refine: usize,

    /// Relative slack applied by the inequality checks, in [0, 0.5).
    #[arg(long, default_value_t = 1e-2)]
    pub slack: f64,

    /// Horizon for threshold searches.
    #[arg(long = "n-max", default_value_t = 1_000_000)]
    pub n_max: u32,
}

/// Fully resolved configuration for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub check: CheckConfig,
    pub n_max: u32,
}

/// The modulus grids keep the same proportions to the scan grid that the
/// defaults have: 4097 -> (513, 2049) and (1025, 2049).
fn grid_config(points: usize, refine: usize) -> GridConfig {
    GridConfig {
        grid_points: points,
        refine_rounds: refine,
        dt_h_points: (points - 1) / 8 + 1,
        dt_x_points: (points - 1) / 2 + 1,
        classical_h_points: (points - 1) / 4 + 1,
        classical_x_points: (points - 1) / 2 + 1,
    }
}

impl RunConfig {
    pub fn resolve(opts: &RunOpts) -> Result<Self, CliError> {
        let points = match opts.grid {
            Some(p) => p,
            None => match std::env::var(GRID_ENV_VAR) {
                Ok(raw) => raw.parse().map_err(|_| {
                    CliError::Usage(format!("{GRID_ENV_VAR} must be an integer, got {raw:?}"))
                })?,
                Err(_) => DEFAULT_GRID_POINTS,
            },
        };
        let check = CheckConfig {
            grid: grid_config(points, opts.refine),
            slack: opts.slack,
        };
        check.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        if opts.n_max < 2 {
            return Err(CliError::Usage(format!(
                "--n-max must be at least 2, got {}",
                opts.n_max
            )));
        }
        Ok(RunConfig {
            check,
            n_max: opts.n_max,
        })
    }

    pub fn to_json(&self) -> JVal {
        let g = &self.check.grid;
        JVal::obj()
            .field("grid_points", JVal::UInt(g.grid_points as u64))
            .field("refine_rounds", JVal::UInt(g.refine_rounds as u64))
            .field("dt_h_points", JVal::UInt(g.dt_h_points as u64))
            .field("dt_x_points", JVal::UInt(g.dt_x_points as u64))
            .field(
                "classical_h_points",
                JVal::UInt(g.classical_h_points as u64),
            )
            .field(
                "classical_x_points",
                JVal::UInt(g.classical_x_points as u64),
            )
            .field("slack", JVal::num(self.check.slack))
            .field("n_max", JVal::UInt(u64::from(self.n_max)))
    }
}
