//! Python bindings: the `mass_layout` extension module.

use std::collections::BTreeMap;

use mass_core::assign::{AssignError, Assignment};
use mass_core::craft::{CraftError, CraftOptions, MoveKinds, Trace};
use mass_core::fixed::{parse_decimal, SCALE};
use mass_core::loads::{self, parse_load_matrix, Cell, LoadError};
use mass_core::oracle::{self, OracleError};
use mass_core::pipeline::{self, PipelineError};
use mass_core::plan::{self, derive_grid, render_ascii, PlanError, Slot};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(mass_layout, MassError, PyValueError, "Invalid input or unsolvable instance.");
create_exception!(mass_layout, InfeasibleError, MassError, "The floor cannot hold every facility.");

fn data_err(e: impl ToString) -> PyErr {
    MassError::new_err(e.to_string())
}

fn plan_err(e: PlanError) -> PyErr {
    match e {
        PlanError::NoCapacity | PlanError::Infeasible { .. } => InfeasibleError::new_err(e.to_string()),
        other => data_err(other),
    }
}

fn craft_err(e: CraftError) -> PyErr {
    match e {
        CraftError::Plan(p) => plan_err(p),
        other => data_err(other),
    }
}

fn pipeline_err(e: PipelineError) -> PyErr {
    match e {
        PipelineError::Assign(e) => data_err(e),
        PipelineError::Plan(e) => plan_err(e),
        PipelineError::Craft(e) => craft_err(e),
    }
}

fn oracle_err(e: OracleError) -> PyErr {
    match e {
        OracleError::Plan(p) => plan_err(p),
        OracleError::Infeasible { .. } => InfeasibleError::new_err(e.to_string()),
        other => data_err(other),
    }
}

fn assign_err(e: AssignError) -> PyErr {
    data_err(e)
}

fn scaled(x: f64, what: &str) -> PyResult<i64> {
    if !x.is_finite() {
        return Err(data_err(format!("{what} must be finite")));
    }
    parse_decimal(&format!("{x}")).map_err(|e| data_err(format!("invalid {what} {x}: {e:?}")))
}

fn unscale(v: i128) -> f64 {
    v as f64 / SCALE as f64
}

/// Square matrix of directed loads between named facilities.
#[pyclass(frozen, module = "mass_layout")]
pub struct LoadMatrix {
    inner: loads::LoadMatrix,
}

#[pymethods]
impl LoadMatrix {
    /// `rows[i][j]` is the load from facility `i` to `j`, or `None` when vacant.
    #[new]
    fn new(names: Vec<String>, rows: Vec<Vec<Option<f64>>>) -> PyResult<Self> {
        let cells = rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| match v {
                        None => Ok(Cell::Vacant),
                        Some(x) => scaled(x, "load").map(Cell::Load),
                    })
                    .collect::<PyResult<Vec<_>>>()
            })
            .collect::<PyResult<Vec<_>>>()?;
        let inner = loads::LoadMatrix::new(names, cells).map_err(|e: LoadError| data_err(e))?;
        Ok(LoadMatrix { inner })
    }

    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        Ok(LoadMatrix { inner: parse_load_matrix(text).map_err(data_err)? })
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    fn load(&self, source: &str, target: &str) -> PyResult<Option<f64>> {
        let i = self.index(source)?;
        let j = self.index(target)?;
        Ok(self.inner.load(i, j).map(|v| unscale(i128::from(v))))
    }

    fn total_load(&self) -> f64 {
        unscale(self.inner.total_load())
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("LoadMatrix({})", self.inner.names().join(", "))
    }
}

impl LoadMatrix {
    fn index(&self, name: &str) -> PyResult<usize> {
        self.inner.index_of(name).ok_or_else(|| data_err(format!("unknown facility `{name}`")))
    }
}

/// Floor and facility geometry in meters.
#[pyclass(frozen, module = "mass_layout")]
pub struct FloorPlan {
    inner: plan::FloorPlan,
}

#[pymethods]
impl FloorPlan {
    #[new]
    #[pyo3(signature = (floor_width=64.0, floor_height=22.0, facility_width=20.0, facility_height=10.0, aisle=2.0))]
    fn new(floor_width: f64, floor_height: f64, facility_width: f64, facility_height: f64, aisle: f64) -> PyResult<Self> {
        let inner = plan::FloorPlan::new(
            scaled(floor_width, "floor width")?,
            scaled(floor_height, "floor height")?,
            scaled(facility_width, "facility width")?,
            scaled(facility_height, "facility height")?,
            scaled(aisle, "aisle")?,
        )
        .map_err(plan_err)?;
        Ok(FloorPlan { inner })
    }

    /// `(rows, cols)` of facility slots.
    fn grid(&self) -> PyResult<(usize, usize)> {
        let g = derive_grid(&self.inner).map_err(plan_err)?;
        Ok((g.rows, g.cols))
    }
}

type Placement = BTreeMap<String, (usize, usize)>;

fn placement(loads: &loads::LoadMatrix, layout: &plan::Layout) -> Placement {
    (0..layout.len())
        .filter_map(|f| layout.slot_of(f).map(|s| (loads.name(f).to_string(), (s.row, s.col))))
        .collect()
}

fn pairs(loads: &loads::LoadMatrix, asg: &Assignment) -> Vec<(String, String)> {
    (0..asg.len()).map(|i| (loads.name(i).to_string(), loads.name(asg.partner(i)).to_string())).collect()
}

fn trace_moves(loads: &loads::LoadMatrix, trace: &Trace) -> Vec<(String, Vec<String>, f64, f64)> {
    trace
        .accepted
        .iter()
        .map(|step| {
            let labels = step
                .mv
                .participants
                .iter()
                .map(|&p| if step.mv.kind.moves_columns() { format!("col{p}") } else { loads.name(p).to_string() })
                .collect();
            (step.mv.kind.as_str().to_string(), labels, step.mv.delta.as_f64(), step.cost_after.as_f64())
        })
        .collect()
}

/// Optimal pairing of facilities under the load matrix.
#[pyfunction]
fn assign<'py>(py: Python<'py>, loads: &LoadMatrix) -> PyResult<Bound<'py, PyDict>> {
    let (asg, cost) = pipeline::solve_assignment(&loads.inner).map_err(assign_err)?;
    let d = PyDict::new(py);
    d.set_item("pairs", pairs(&loads.inner, &asg))?;
    d.set_item("cost", unscale(cost.total))?;
    d.set_item("uses_vacant_cell", cost.uses_synthetic)?;
    Ok(d)
}

/// Initial block layout built from the optimal pairing.
#[pyfunction]
fn initial_layout<'py>(py: Python<'py>, loads: &LoadMatrix, plan: &FloorPlan) -> PyResult<Bound<'py, PyDict>> {
    let (asg, _) = pipeline::solve_assignment(&loads.inner).map_err(assign_err)?;
    let layout = plan::build_initial_layout(&asg, &plan.inner).map_err(plan_err)?;
    let cost = plan::layout_cost(&layout, &loads.inner, &plan.inner).map_err(plan_err)?;
    let d = PyDict::new(py);
    d.set_item("placement", placement(&loads.inner, &layout))?;
    d.set_item("cost", cost.total.as_f64())?;
    d.set_item("ascii", render_ascii(&layout, loads.inner.names()))?;
    Ok(d)
}

/// Cost of a placement given as `{name: (row, col)}`.
#[pyfunction]
fn layout_cost(loads: &LoadMatrix, plan: &FloorPlan, placement: Placement) -> PyResult<f64> {
    let grid = derive_grid(&plan.inner).map_err(plan_err)?;
    let mut slots = vec![None; loads.inner.len()];
    for (name, (row, col)) in placement {
        slots[loads.index(&name)?] = Some(Slot { row, col });
    }
    let layout = plan::Layout::new(grid, slots).map_err(plan_err)?;
    let cost = plan::layout_cost(&layout, &loads.inner, &plan.inner).map_err(plan_err)?;
    Ok(cost.total.as_f64())
}

/// Full pipeline: pairing, initial layout, exchange improvement.
#[pyfunction]
#[pyo3(signature = (loads, plan, moves=None, max_iters=1000))]
fn optimize<'py>(
    py: Python<'py>,
    loads: &LoadMatrix,
    plan: &FloorPlan,
    moves: Option<&str>,
    max_iters: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let moves = match moves {
        Some(s) => s.parse::<MoveKinds>().map_err(data_err)?,
        None => MoveKinds::all(),
    };
    let s = pipeline::optimize(&loads.inner, &plan.inner, &CraftOptions { moves, max_iters })
        .map_err(pipeline_err)?;
    let lm = &loads.inner;
    let d = PyDict::new(py);
    d.set_item("pairs", pairs(lm, &s.assignment))?;
    d.set_item("assignment_cost", unscale(s.assignment_cost.total))?;
    d.set_item("initial_cost", s.trace.initial_cost.as_f64())?;
    d.set_item("final_cost", s.trace.final_cost.as_f64())?;
    d.set_item("improvement", (s.trace.initial_cost - s.trace.final_cost).as_f64())?;
    d.set_item("moves", trace_moves(lm, &s.trace))?;
    d.set_item("initial_placement", placement(lm, &s.initial_layout))?;
    d.set_item("final_placement", placement(lm, &s.final_layout))?;
    d.set_item("initial_ascii", render_ascii(&s.initial_layout, lm.names()))?;
    d.set_item("final_ascii", render_ascii(&s.final_layout, lm.names()))?;
    Ok(d)
}

/// Exhaustive optimum over every placement (small instances only).
#[pyfunction]
fn brute_force<'py>(py: Python<'py>, loads: &LoadMatrix, plan: &FloorPlan) -> PyResult<Bound<'py, PyDict>> {
    let r = oracle::brute_force_optimum(&loads.inner, &plan.inner).map_err(oracle_err)?;
    let d = PyDict::new(py);
    d.set_item("best_cost", r.best_cost.as_f64())?;
    d.set_item("optima_count", r.optima_count)?;
    d.set_item("placement", placement(&loads.inner, &r.witness))?;
    Ok(d)
}

#[pymodule]
fn mass_layout(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<LoadMatrix>()?;
    m.add_class::<FloorPlan>()?;
    m.add_function(wrap_pyfunction!(assign, m)?)?;
    m.add_function(wrap_pyfunction!(initial_layout, m)?)?;
    m.add_function(wrap_pyfunction!(layout_cost, m)?)?;
    m.add_function(wrap_pyfunction!(optimize, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add("MassError", m.py().get_type::<MassError>())?;
    m.add("InfeasibleError", m.py().get_type::<InfeasibleError>())?;
    Ok(())
}
