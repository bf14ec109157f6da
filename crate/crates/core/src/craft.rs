//! Steepest-descent exchange improvement of a block layout.
//!
//! Each round evaluates every enabled exchange, applies the single move with
//! the most negative cost change and repeats until no move strictly
//! improves the layout. Besides the facility-level two-way swaps and
//! three-way rotations, whole columns can be swapped or rotated; columns
//! have equal area so such exchanges are always feasible.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fixed::LoadMeters;
use crate::loads::LoadMatrix;
use crate::plan::{layout_cost, slot_distance, FloorPlan, Layout, PlanError, Slot};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CraftError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("move participant {0} is out of range")]
    BadParticipant(usize),
    #[error("no improvement loop converged within {limit} rounds")]
    MaxItersExceeded { limit: usize, layout: Box<Layout>, trace: Box<Trace> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    FacilitySwap,
    FacilityRotation,
    ColumnSwap,
    ColumnRotation,
}

impl MoveKind {
    pub const ALL: [MoveKind; 4] =
        [MoveKind::FacilitySwap, MoveKind::FacilityRotation, MoveKind::ColumnSwap, MoveKind::ColumnRotation];

    pub fn as_str(self) -> &'static str {
        match self {
            MoveKind::FacilitySwap => "facility2",
            MoveKind::FacilityRotation => "facility3",
            MoveKind::ColumnSwap => "column2",
            MoveKind::ColumnRotation => "column3",
        }
    }

    pub fn moves_columns(self) -> bool {
        matches!(self, MoveKind::ColumnSwap | MoveKind::ColumnRotation)
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MoveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MoveKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown move kind `{s}` (expected facility2, facility3, column2 or column3)"))
    }
}

/// Enabled move kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveKinds([bool; 4]);

impl MoveKinds {
    pub fn all() -> Self {
        MoveKinds([true; 4])
    }

    pub fn none() -> Self {
        MoveKinds([false; 4])
    }

    pub fn facility_only() -> Self {
        MoveKinds::none().with(MoveKind::FacilitySwap).with(MoveKind::FacilityRotation)
    }

    pub fn with(mut self, kind: MoveKind) -> Self {
        self.0[kind as usize] = true;
        self
    }

    pub fn contains(&self, kind: MoveKind) -> bool {
        self.0[kind as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = MoveKind> + '_ {
        MoveKind::ALL.into_iter().filter(|k| self.contains(*k))
    }
}

impl Default for MoveKinds {
    fn default() -> Self {
        MoveKinds::all()
    }
}

impl FromStr for MoveKinds {
    type Err = String;

    /// Comma-separated list, e.g. `facility2,column2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut kinds = MoveKinds::none();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            kinds = kinds.with(part.parse()?);
        }
        if kinds == MoveKinds::none() {
            return Err("no move kinds given".into());
        }
        Ok(kinds)
    }
}

/// A candidate exchange.
///
/// For swaps `participants` holds two facilities (or columns) in ascending
/// order. For rotations `[a, b, c]` sends `a` to the position of `b`, `b`
/// to that of `c` and `c` to that of `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Move {
    pub kind: MoveKind,
    pub participants: Vec<usize>,
    /// Cost after the move minus cost before.
    pub delta: LoadMeters,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AcceptedMove {
    pub mv: Move,
    pub cost_after: LoadMeters,
}

/// Record of an improvement run.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trace {
    pub initial_cost: LoadMeters,
    pub accepted: Vec<AcceptedMove>,
    pub final_cost: LoadMeters,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CraftOptions {
    pub moves: MoveKinds,
    pub max_iters: usize,
}

impl Default for CraftOptions {
    fn default() -> Self {
        CraftOptions { moves: MoveKinds::all(), max_iters: 1000 }
    }
}

fn pairs(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).flat_map(move |a| (a + 1..n).map(move |b| vec![a, b]))
}

/// Both cyclic directions of every triple, in lexicographic order.
fn rotations(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).flat_map(move |a| {
        (a + 1..n).flat_map(move |b| (b + 1..n).flat_map(move |c| [vec![a, b, c], vec![a, c, b]]))
    })
}

fn candidates(kind: MoveKind, layout: &Layout) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = match kind {
        MoveKind::FacilitySwap => pairs(layout.len()).collect(),
        MoveKind::FacilityRotation => rotations(layout.len()).collect(),
        MoveKind::ColumnSwap => pairs(layout.grid().cols).collect(),
        MoveKind::ColumnRotation => rotations(layout.grid().cols).collect(),
    };
    out.sort();
    out
}

/// New slots of every facility the move relocates.
fn relocations(layout: &Layout, kind: MoveKind, participants: &[usize]) -> Result<Vec<(usize, Slot)>, CraftError> {
    let limit = if kind.moves_columns() { layout.grid().cols } else { layout.len() };
    if let Some(&p) = participants.iter().find(|&&p| p >= limit) {
        return Err(CraftError::BadParticipant(p));
    }
    // Participant k moves to the position of participant k + 1 (cyclically).
    let target = |k: usize| participants[(k + 1) % participants.len()];
    let mut out = Vec::new();
    if kind.moves_columns() {
        for (k, &col) in participants.iter().enumerate() {
            for f in layout.column(col) {
                let slot = layout.placed_slot(f)?;
                out.push((f, Slot { row: slot.row, col: target(k) }));
            }
        }
    } else {
        for (k, &f) in participants.iter().enumerate() {
            out.push((f, layout.placed_slot(target(k))?));
        }
        for &f in participants {
            layout.placed_slot(f)?;
        }
    }
    Ok(out)
}

/// Cost change from relocating `moved`, touching only loads incident to a
/// relocated facility.
fn incremental_delta(
    layout: &Layout,
    loads: &LoadMatrix,
    fp: &FloorPlan,
    moved: &[(usize, Slot)],
) -> Result<LoadMeters, CraftError> {
    let n = layout.len();
    let mut new_slot: Vec<Option<Slot>> = vec![None; n];
    for &(f, s) in moved {
        new_slot[f] = Some(s);
    }
    let before = |f: usize| layout.placed_slot(f);
    let after = |f: usize| new_slot[f].map_or_else(|| layout.placed_slot(f), Ok);
    let mut delta = 0i128;
    for (i, j, load) in loads.present() {
        if new_slot[i].is_none() && new_slot[j].is_none() {
            continue;
        }
        let old = slot_distance(fp, before(i)?, before(j)?);
        let new = slot_distance(fp, after(i)?, after(j)?);
        delta += i128::from(load) * i128::from(new - old);
    }
    Ok(LoadMeters(delta))
}

/// Every candidate of the enabled kinds with its exact cost change. Kinds
/// come in declaration order; within a kind, participants are sorted
/// lexicographically.
pub fn enumerate_moves(
    layout: &Layout,
    loads: &LoadMatrix,
    fp: &FloorPlan,
    kinds: MoveKinds,
) -> Result<Vec<Move>, CraftError> {
    if layout.len() != loads.len() {
        return Err(PlanError::SizeMismatch { layout: layout.len(), loads: loads.len() }.into());
    }
    let mut out = Vec::new();
    for kind in kinds.iter() {
        for participants in candidates(kind, layout) {
            let moved = relocations(layout, kind, &participants)?;
            let delta = incremental_delta(layout, loads, fp, &moved)?;
            out.push(Move { kind, participants, delta });
        }
    }
    Ok(out)
}

pub fn apply_move(layout: &Layout, mv: &Move) -> Result<Layout, CraftError> {
    let moved = relocations(layout, mv.kind, &mv.participants)?;
    let mut out = layout.clone();
    for (f, slot) in moved {
        out.set_slot(f, slot);
    }
    Ok(out)
}

/// Runs steepest descent from `layout`. On hitting `max_iters` rounds the
/// best layout reached so far comes back inside
/// [`CraftError::MaxItersExceeded`].
pub fn craft_improve(
    layout: &Layout,
    loads: &LoadMatrix,
    fp: &FloorPlan,
    opts: &CraftOptions,
) -> Result<(Layout, Trace), CraftError> {
    let initial_cost = layout_cost(layout, loads, fp)?.total;
    let mut current = layout.clone();
    let mut cost = initial_cost;
    let mut accepted = Vec::new();
    loop {
        let moves = enumerate_moves(&current, loads, fp, opts.moves)?;
        // `min_by_key` keeps the first of equal keys, i.e. enumeration order.
        let best = moves.into_iter().filter(|m| m.delta < LoadMeters::ZERO).min_by_key(|m| m.delta);
        let Some(best) = best else { break };
        if accepted.len() == opts.max_iters {
            let trace = Trace { initial_cost, accepted, final_cost: cost };
            return Err(CraftError::MaxItersExceeded {
                limit: opts.max_iters,
                layout: Box::new(current),
                trace: Box::new(trace),
            });
        }
        current = apply_move(&current, &best)?;
        cost = cost + best.delta;
        accepted.push(AcceptedMove { mv: best, cost_after: cost });
    }
    Ok((current, Trace { initial_cost, accepted, final_cost: cost }))
}
