//! The `mass` command-line driver.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (unreadable input,
//! parse or validation failure), 3 infeasible floor plan.

pub mod args;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use mass_core::assign::AssignError;
use mass_core::craft::{CraftError, CraftOptions};
use mass_core::loads::{parse_load_matrix, LoadError, LoadMatrix};
use mass_core::oracle::{brute_force_optimum, OracleError};
use mass_core::pipeline::{optimize, solve_assignment, PipelineError};
use mass_core::plan::{build_initial_layout, derive_grid, layout_cost, FloorPlan, Layout, PlanError, Slot};
use thiserror::Error;

use crate::args::{Cli, Command, Format, GeometryArgs};
use crate::report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read `{path}`: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write `{path}`: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Read { .. } | CliError::Write { .. } | CliError::Data(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<AssignError> for CliError {
    fn from(e: AssignError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<PlanError> for CliError {
    fn from(e: PlanError) -> Self {
        match e {
            PlanError::NoCapacity | PlanError::Infeasible { .. } => CliError::Infeasible(e.to_string()),
            PlanError::InvalidDimension(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<CraftError> for CliError {
    fn from(e: CraftError) -> Self {
        match e {
            CraftError::Plan(p) => p.into(),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Assign(e) => e.into(),
            PipelineError::Plan(e) => e.into(),
            PipelineError::Craft(e) => e.into(),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Plan(p) => p.into(),
            OracleError::Infeasible { .. } => CliError::Infeasible(e.to_string()),
            OracleError::TooLarge(_) => CliError::Data(e.to_string()),
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok((report, format)) => {
            let text = match format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "mass: {e}");
            e.exit_code()
        }
    }
}

fn read_loads(path: &Path) -> Result<LoadMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    parse_load_matrix(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn floor_plan(geometry: &GeometryArgs) -> Result<FloorPlan, CliError> {
    geometry.floor_plan().map_err(CliError::Usage)
}

/// Parses `NAME=ROW:COL,NAME=ROW:COL,...`.
fn parse_placement(spec: &str, loads: &LoadMatrix, fp: &FloorPlan) -> Result<Layout, CliError> {
    let grid = derive_grid(fp)?;
    let mut slots = vec![None; loads.len()];
    for entry in spec.split(',').map(str::trim).filter(|e| !e.is_empty()) {
        let bad = || CliError::Usage(format!("invalid placement entry `{entry}` (expected NAME=ROW:COL)"));
        let (name, pos) = entry.split_once('=').ok_or_else(bad)?;
        let (row, col) = pos.split_once(':').ok_or_else(bad)?;
        let row: usize = row.trim().parse().map_err(|_| bad())?;
        let col: usize = col.trim().parse().map_err(|_| bad())?;
        let f = loads
            .index_of(name.trim())
            .ok_or_else(|| CliError::Data(format!("unknown facility `{}` in placement", name.trim())))?;
        if slots[f].replace(Slot { row, col }).is_some() {
            return Err(CliError::Data(format!("facility `{}` placed twice", name.trim())));
        }
    }
    Ok(Layout::new(grid, slots)?)
}

fn execute(command: &Command) -> Result<(Report, Format), CliError> {
    match command {
        Command::Assign { input } => {
            let loads = read_loads(&input.loads)?;
            let (asg, cost) = solve_assignment(&loads)?;
            Ok((Report::assignment(&loads, &asg, &cost), input.format))
        }
        Command::Layout { input, geometry, svg } => {
            let loads = read_loads(&input.loads)?;
            let fp = floor_plan(geometry)?;
            let (asg, _) = solve_assignment(&loads)?;
            let layout = build_initial_layout(&asg, &fp)?;
            let cost = layout_cost(&layout, &loads, &fp)?;
            if let Some(path) = svg {
                write_file(path, &svg::render_svg(&layout, &fp, loads.names()))?;
            }
            Ok((Report::layout(&loads, &asg, &layout, &cost), input.format))
        }
        Command::Optimize { input, geometry, moves, max_iters, trace, svg } => {
            let loads = read_loads(&input.loads)?;
            let fp = floor_plan(geometry)?;
            let opts = CraftOptions { moves: *moves, max_iters: *max_iters };
            let solution = optimize(&loads, &fp, &opts)?;
            if let Some(path) = trace {
                write_file(path, &report::trace_json(&loads, &solution.trace))?;
            }
            if let Some(path) = svg {
                write_file(path, &svg::render_svg(&solution.final_layout, &fp, loads.names()))?;
            }
            Ok((Report::optimize(&loads, &solution), input.format))
        }
        Command::Evaluate { input, geometry, placement } => {
            let loads = read_loads(&input.loads)?;
            let fp = floor_plan(geometry)?;
            let layout = parse_placement(placement, &loads, &fp)?;
            let cost = layout_cost(&layout, &loads, &fp)?;
            Ok((Report::evaluate(&loads, &layout, &cost), input.format))
        }
        Command::Oracle { input, geometry } => {
            let loads = read_loads(&input.loads)?;
            let fp = floor_plan(geometry)?;
            let result = brute_force_optimum(&loads, &fp)?;
            Ok((Report::oracle(&loads, &result), input.format))
        }
    }
}
