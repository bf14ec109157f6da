//! Floor-plan geometry, block layouts and the load-distance objective.
//!
//! Facilities share one rectangular footprint and sit on a grid of slots
//! separated by aisles. Travel between two facilities is measured between
//! their access points on the aisle system: facilities in the same column
//! face each other across an aisle, so their distance is the aisle width;
//! facilities in different columns are reached along the aisle, one column
//! pitch (`facility_width + aisle`) per column step.

use std::fmt::Write as _;

use thiserror::Error;

use crate::assign::Assignment;
use crate::fixed::{self, LoadMeters, SCALE};
use crate::loads::LoadMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("invalid floor plan: {0}")]
    InvalidDimension(&'static str),
    #[error("no facility fits on the floor")]
    NoCapacity,
    #[error("{needed} facilities do not fit in {available} slots")]
    Infeasible { needed: usize, available: usize },
    #[error("facility {0} is not placed")]
    Unplaced(usize),
    #[error("slot (row {row}, col {col}) is outside the {rows}x{cols} grid")]
    OutOfGrid { row: usize, col: usize, rows: usize, cols: usize },
    #[error("slot (row {row}, col {col}) holds more than one facility")]
    SlotTaken { row: usize, col: usize },
    #[error("layout places {layout} facilities but the load matrix has {loads}")]
    SizeMismatch { layout: usize, loads: usize },
}

/// Floor and facility dimensions, all in units of `1 / fixed::SCALE` meters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FloorPlan {
    pub floor_width: i64,
    pub floor_height: i64,
    pub facility_width: i64,
    pub facility_height: i64,
    pub aisle: i64,
}

impl Default for FloorPlan {
    /// 64 m x 22 m floor, 20 m x 10 m facilities, 2 m aisles.
    fn default() -> Self {
        FloorPlan::from_meters(64, 22, 20, 10, 2).unwrap()
    }
}

impl FloorPlan {
    pub fn new(
        floor_width: i64,
        floor_height: i64,
        facility_width: i64,
        facility_height: i64,
        aisle: i64,
    ) -> Result<Self, PlanError> {
        if floor_width <= 0 || floor_height <= 0 {
            return Err(PlanError::InvalidDimension("floor dimensions must be positive"));
        }
        if facility_width <= 0 || facility_height <= 0 {
            return Err(PlanError::InvalidDimension("facility dimensions must be positive"));
        }
        if aisle < 0 {
            return Err(PlanError::InvalidDimension("aisle must be nonnegative"));
        }
        Ok(FloorPlan { floor_width, floor_height, facility_width, facility_height, aisle })
    }

    /// Whole-meter convenience constructor.
    pub fn from_meters(fw: i64, fh: i64, w: i64, h: i64, aisle: i64) -> Result<Self, PlanError> {
        FloorPlan::new(fw * SCALE, fh * SCALE, w * SCALE, h * SCALE, aisle * SCALE)
    }

    /// Distance between the centers of neighboring columns.
    pub fn column_pitch(&self) -> i64 {
        self.facility_width + self.aisle
    }

    pub fn row_pitch(&self) -> i64 {
        self.facility_height + self.aisle
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    pub rows: usize,
    pub cols: usize,
}

impl Grid {
    pub fn capacity(&self) -> usize {
        self.rows * self.cols
    }

    /// Slots in column-major order.
    pub fn slots(&self) -> impl Iterator<Item = Slot> + '_ {
        (0..self.cols).flat_map(move |col| (0..self.rows).map(move |row| Slot { row, col }))
    }

    pub fn contains(&self, slot: Slot) -> bool {
        slot.row < self.rows && slot.col < self.cols
    }
}

/// Number of facility rows and columns that fit on the floor, with aisles
/// between neighbors and none along the walls.
pub fn derive_grid(fp: &FloorPlan) -> Result<Grid, PlanError> {
    let cols = (fp.floor_width + fp.aisle) / fp.column_pitch();
    let rows = (fp.floor_height + fp.aisle) / fp.row_pitch();
    if rows <= 0 || cols <= 0 {
        return Err(PlanError::NoCapacity);
    }
    Ok(Grid { rows: rows as usize, cols: cols as usize })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub row: usize,
    pub col: usize,
}

/// Placement of facilities on the slot grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layout {
    grid: Grid,
    slot_of: Vec<Option<Slot>>,
}

impl Layout {
    pub fn new(grid: Grid, slot_of: Vec<Option<Slot>>) -> Result<Self, PlanError> {
        let mut taken = vec![false; grid.capacity()];
        for slot in slot_of.iter().flatten() {
            if !grid.contains(*slot) {
                return Err(PlanError::OutOfGrid { row: slot.row, col: slot.col, rows: grid.rows, cols: grid.cols });
            }
            let k = slot.col * grid.rows + slot.row;
            if std::mem::replace(&mut taken[k], true) {
                return Err(PlanError::SlotTaken { row: slot.row, col: slot.col });
            }
        }
        Ok(Layout { grid, slot_of })
    }

    /// Every facility placed, `slots[i]` holding facility `i`.
    pub fn from_slots(grid: Grid, slots: &[Slot]) -> Result<Self, PlanError> {
        Layout::new(grid, slots.iter().copied().map(Some).collect())
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.slot_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slot_of.is_empty()
    }

    pub fn slot_of(&self, facility: usize) -> Option<Slot> {
        self.slot_of.get(facility).copied().flatten()
    }

    pub fn placed_slot(&self, facility: usize) -> Result<Slot, PlanError> {
        self.slot_of(facility).ok_or(PlanError::Unplaced(facility))
    }

    pub fn occupant(&self, slot: Slot) -> Option<usize> {
        self.slot_of.iter().position(|s| *s == Some(slot))
    }

    pub fn is_complete(&self) -> bool {
        self.slot_of.iter().all(Option::is_some)
    }

    /// Facilities in a column, top to bottom.
    pub fn column(&self, col: usize) -> Vec<usize> {
        let mut members: Vec<(usize, usize)> = self
            .slot_of
            .iter()
            .enumerate()
            .filter_map(|(f, s)| s.filter(|s| s.col == col).map(|s| (s.row, f)))
            .collect();
        members.sort_unstable();
        members.into_iter().map(|(_, f)| f).collect()
    }

    pub(crate) fn set_slot(&mut self, facility: usize, slot: Slot) {
        self.slot_of[facility] = Some(slot);
    }
}

/// Initial block layout from an assignment.
///
/// The permutation is split into cycles, taken in order of their smallest
/// member. A 2-cycle occupies the top two slots of a fresh column with the
/// lower index on top; other cycles are laid out member after member down a
/// column and on into the next one. Columns fill left to right. If that
/// arrangement runs out of columns the groups are packed densely instead.
pub fn build_initial_layout(asg: &Assignment, fp: &FloorPlan) -> Result<Layout, PlanError> {
    let grid = derive_grid(fp)?;
    let n = asg.len();
    if n > grid.capacity() {
        return Err(PlanError::Infeasible { needed: n, available: grid.capacity() });
    }
    let groups = asg.cycles();
    let aligned = grid.rows >= 2;
    let order: Vec<Slot> = grid.slots().collect();

    let mut slot_of = vec![None; n];
    let mut cursor = 0usize;
    let mut fits = true;
    for group in &groups {
        if aligned && group.len() == 2 && !cursor.is_multiple_of(grid.rows) {
            cursor = cursor.next_multiple_of(grid.rows);
        }
        if cursor + group.len() > order.len() {
            fits = false;
            break;
        }
        for &f in group {
            slot_of[f] = Some(order[cursor]);
            cursor += 1;
        }
    }
    if !fits {
        let dense = groups.iter().flatten();
        slot_of = vec![None; n];
        for (&f, &slot) in dense.zip(&order) {
            slot_of[f] = Some(slot);
        }
    }
    Layout::new(grid, slot_of)
}

/// Distance between two placed facilities, in units of `1 / fixed::SCALE` m.
pub fn distance(layout: &Layout, fp: &FloorPlan, i: usize, j: usize) -> Result<i64, PlanError> {
    let a = layout.placed_slot(i)?;
    let b = layout.placed_slot(j)?;
    Ok(slot_distance(fp, a, b))
}

pub(crate) fn slot_distance(fp: &FloorPlan, a: Slot, b: Slot) -> i64 {
    if a == b {
        0
    } else if a.col == b.col {
        fp.aisle
    } else {
        fp.column_pitch() * a.col.abs_diff(b.col) as i64
    }
}

/// One present load and what it contributes to the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Contribution {
    pub from: usize,
    pub to: usize,
    pub load: i64,
    pub distance: i64,
    pub product: LoadMeters,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostReport {
    pub total: LoadMeters,
    pub contributions: Vec<Contribution>,
}

/// Load-distance objective: the sum of load times distance over every
/// present load.
pub fn layout_cost(layout: &Layout, loads: &LoadMatrix, fp: &FloorPlan) -> Result<CostReport, PlanError> {
    if layout.len() != loads.len() {
        return Err(PlanError::SizeMismatch { layout: layout.len(), loads: loads.len() });
    }
    let mut contributions = Vec::new();
    for (from, to, load) in loads.present() {
        let d = distance(layout, fp, from, to)?;
        contributions.push(Contribution { from, to, load, distance: d, product: LoadMeters::product(load, d) });
    }
    let total = contributions.iter().map(|c| c.product).sum();
    Ok(CostReport { total, contributions })
}

/// Fixed-width text drawing of the layout: one line per grid row, cells
/// separated by `|`, each column padded to its widest label, `.` for an
/// empty slot.
pub fn render_ascii(layout: &Layout, names: &[String]) -> String {
    let grid = layout.grid();
    let label = |slot: Slot| match layout.occupant(slot) {
        Some(f) => names.get(f).cloned().unwrap_or_else(|| f.to_string()),
        None => ".".to_string(),
    };
    let widths: Vec<usize> = (0..grid.cols)
        .map(|col| (0..grid.rows).map(|row| label(Slot { row, col }).chars().count()).max().unwrap_or(1))
        .collect();
    let mut out = String::new();
    for row in 0..grid.rows {
        let cells: Vec<String> = (0..grid.cols)
            .map(|col| format!("{:<w$}", label(Slot { row, col }), w = widths[col]))
            .collect();
        writeln!(out, "{}", cells.join("|")).unwrap();
    }
    out
}

/// Human-readable length, e.g. `22` or `2.5`.
pub fn format_length(v: i64) -> String {
    fixed::format_decimal(v)
}
