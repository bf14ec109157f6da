//! The full optimization pipeline: assignment, initial layout, exchange
//! improvement.

use thiserror::Error;

use crate::assign::{assignment_cost, hungarian_solve, to_cost_matrix, AssignError, Assignment, AssignmentCost};
use crate::craft::{craft_improve, CraftError, CraftOptions, Trace};
use crate::loads::LoadMatrix;
use crate::plan::{build_initial_layout, layout_cost, FloorPlan, Layout, PlanError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Assign(#[from] AssignError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Craft(#[from] CraftError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub assignment: Assignment,
    pub assignment_cost: AssignmentCost,
    pub initial_layout: Layout,
    pub final_layout: Layout,
    pub trace: Trace,
}

/// Solves the assignment on the big-M cost matrix of `loads`.
pub fn solve_assignment(loads: &LoadMatrix) -> Result<(Assignment, AssignmentCost), AssignError> {
    let cm = to_cost_matrix(loads);
    let asg = hungarian_solve(&cm)?;
    let cost = assignment_cost(&cm, &asg)?;
    Ok((asg, cost))
}

/// Assignment, initial layout, then steepest-descent improvement.
pub fn optimize(loads: &LoadMatrix, fp: &FloorPlan, opts: &CraftOptions) -> Result<Solution, PipelineError> {
    let (assignment, assignment_cost) = solve_assignment(loads)?;
    let initial_layout = build_initial_layout(&assignment, fp)?;
    // Validate the layout against the loads before improving it.
    layout_cost(&initial_layout, loads, fp)?;
    let (final_layout, trace) = craft_improve(&initial_layout, loads, fp, opts)?;
    Ok(Solution { assignment, assignment_cost, initial_layout, final_layout, trace })
}
