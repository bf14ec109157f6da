use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mass_core::craft::MoveKinds;
use mass_core::fixed::parse_decimal;
use mass_core::plan::FloorPlan;

#[derive(Debug, Parser)]
#[command(name = "mass", version, about = "Block layout planning: assignment seed plus exchange improvement")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the assignment problem on the load matrix.
    Assign {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Build the initial block layout from the assignment.
    Layout {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Write an SVG drawing of the layout.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Full pipeline: assignment, initial layout, exchange improvement.
    Optimize {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Enabled move kinds (facility2, facility3, column2, column3).
        #[arg(long, default_value = "facility2,facility3,column2,column3", value_parser = parse_moves)]
        moves: MoveKinds,
        #[arg(long, default_value_t = 1000)]
        max_iters: usize,
        /// Write the improvement trace as JSON.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
        /// Write an SVG drawing of the final layout.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Cost of a given placement.
    Evaluate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Comma-separated `NAME=ROW:COL` entries, 0-based.
        #[arg(long)]
        placement: String,
    },
    /// Exhaustive optimum over all placements (at most 8 facilities and slots).
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Load-matrix CSV file.
    #[arg(long, value_name = "PATH")]
    pub loads: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GeometryArgs {
    /// Floor size in meters, `WIDTHxHEIGHT`.
    #[arg(long, default_value = "64x22", value_parser = parse_dims)]
    pub floor: (i64, i64),
    /// Facility footprint in meters, `WIDTHxHEIGHT`.
    #[arg(long, default_value = "20x10", value_parser = parse_dims)]
    pub facility: (i64, i64),
    /// Aisle width in meters.
    #[arg(long, default_value = "2", value_parser = parse_length)]
    pub aisle: i64,
}

impl GeometryArgs {
    pub fn floor_plan(&self) -> Result<FloorPlan, String> {
        FloorPlan::new(self.floor.0, self.floor.1, self.facility.0, self.facility.1, self.aisle).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn parse_length(s: &str) -> Result<i64, String> {
    parse_decimal(s).map_err(|e| format!("invalid length `{s}`: {e:?}"))
}

fn parse_dims(s: &str) -> Result<(i64, i64), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got `{s}`"))?;
    Ok((parse_length(w)?, parse_length(h)?))
}

fn parse_moves(s: &str) -> Result<MoveKinds, String> {
    s.parse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use mass_core::fixed::SCALE;

    #[test]
    fn dimensions() {
        assert_eq!(parse_dims("64x22"), Ok((64 * SCALE, 22 * SCALE)));
        assert_eq!(parse_dims("2.5X3"), Ok((5 * SCALE / 2, 3 * SCALE)));
        assert!(parse_dims("64by22").is_err());
        assert!(parse_dims("x3").is_err());
    }
}
