//! Exhaustive reference solvers for small instances.

use itertools::Itertools;
use thiserror::Error;

use crate::assign::{Assignment, CostMatrix};
use crate::fixed::LoadMeters;
use crate::loads::LoadMatrix;
use crate::plan::{derive_grid, layout_cost, FloorPlan, Layout, PlanError, Slot};

/// Largest instance the enumerations accept (8! = 40320 candidates).
pub const MAX_ORACLE_SIZE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance of size {0} exceeds the exhaustive-search limit of {MAX_ORACLE_SIZE}")]
    TooLarge(usize),
    #[error("{needed} facilities do not fit in {available} slots")]
    Infeasible { needed: usize, available: usize },
    #[error(transparent)]
    Plan(#[from] PlanError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult<W, C> {
    pub best_cost: C,
    /// The first optimal solution in enumeration order.
    pub witness: W,
    pub optima_count: usize,
}

fn cost_of(cm: &CostMatrix, perm: &[usize]) -> i128 {
    perm.iter().enumerate().map(|(i, &j)| cm.entry(i, j)).sum()
}

/// Minimum over all `n!` permutations; the witness is the lexicographically
/// smallest optimal permutation.
pub fn brute_force_assignment(cm: &CostMatrix) -> Result<OracleResult<Assignment, i128>, OracleError> {
    let n = cm.n();
    if n > MAX_ORACLE_SIZE {
        return Err(OracleError::TooLarge(n));
    }
    let mut best: Option<(i128, Vec<usize>)> = None;
    let mut count = 0;
    for perm in (0..n).permutations(n) {
        let cost = cost_of(cm, &perm);
        match &best {
            Some((b, _)) if cost > *b => {}
            Some((b, _)) if cost == *b => count += 1,
            _ => {
                best = Some((cost, perm));
                count = 1;
            }
        }
    }
    let (best_cost, perm) = best.expect("at least one permutation");
    Ok(OracleResult {
        best_cost,
        witness: Assignment::new(perm).expect("enumerated permutation"),
        optima_count: count,
    })
}

/// Every cost-minimizing permutation, in lexicographic order.
pub fn optimal_assignments(cm: &CostMatrix) -> Result<Vec<Assignment>, OracleError> {
    let n = cm.n();
    if n > MAX_ORACLE_SIZE {
        return Err(OracleError::TooLarge(n));
    }
    let scored: Vec<(i128, Vec<usize>)> = (0..n).permutations(n).map(|p| (cost_of(cm, &p), p)).collect();
    let best = scored.iter().map(|(c, _)| *c).min().expect("at least one permutation");
    Ok(scored
        .into_iter()
        .filter(|(c, _)| *c == best)
        .map(|(_, p)| Assignment::new(p).expect("enumerated permutation"))
        .collect())
}

/// Minimum load-distance cost over every injective placement of the
/// facilities onto the slot grid. Placements are enumerated as ordered
/// selections of slots in column-major order.
pub fn brute_force_optimum(
    loads: &LoadMatrix,
    fp: &FloorPlan,
) -> Result<OracleResult<Layout, LoadMeters>, OracleError> {
    let n = loads.len();
    let grid = derive_grid(fp)?;
    if n > MAX_ORACLE_SIZE {
        return Err(OracleError::TooLarge(n));
    }
    if grid.capacity() > MAX_ORACLE_SIZE {
        return Err(OracleError::TooLarge(grid.capacity()));
    }
    if n > grid.capacity() {
        return Err(OracleError::Infeasible { needed: n, available: grid.capacity() });
    }
    let slots: Vec<Slot> = grid.slots().collect();
    let mut best: Option<(LoadMeters, Layout)> = None;
    let mut count = 0;
    for chosen in slots.into_iter().permutations(n) {
        let layout = Layout::from_slots(grid, &chosen)?;
        let cost = layout_cost(&layout, loads, fp)?.total;
        match &best {
            Some((b, _)) if cost > *b => {}
            Some((b, _)) if cost == *b => count += 1,
            _ => {
                best = Some((cost, layout));
                count = 1;
            }
        }
    }
    let (best_cost, witness) = best.expect("at least one placement");
    Ok(OracleResult { best_cost, witness, optima_count: count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::to_cost_matrix;
    use crate::fixed::SCALE;
    use crate::loads::parse_load_matrix;

    const EXAMPLE: &str = include_str!("../tests/fixtures/example.csv");

    #[test]
    fn reference_assignment() {
        let cm = to_cost_matrix(&parse_load_matrix(EXAMPLE).unwrap());
        let r = brute_force_assignment(&cm).unwrap();
        assert_eq!(r.best_cost, 135 * i128::from(SCALE));
        assert_eq!(r.witness.partners(), &[1, 0, 3, 2, 5, 4]);
        assert_eq!(r.optima_count, 1);
    }

    #[test]
    fn trivial_assignments() {
        let one = CostMatrix::from_rows(&[vec![7]]).unwrap();
        assert_eq!(brute_force_assignment(&one).unwrap().best_cost, 7);
        let zero = CostMatrix::from_rows(&vec![vec![0; 3]; 3]).unwrap();
        let r = brute_force_assignment(&zero).unwrap();
        assert_eq!((r.best_cost, r.optima_count), (0, 6));
        assert_eq!(r.witness, Assignment::identity(3));
        assert_eq!(optimal_assignments(&zero).unwrap().len(), 6);
        let big = CostMatrix::from_rows(&vec![vec![0; 9]; 9]).unwrap();
        assert_eq!(brute_force_assignment(&big), Err(OracleError::TooLarge(9)));
    }

    #[test]
    fn reference_layout_optimum() {
        let lm = parse_load_matrix(EXAMPLE).unwrap();
        let r = brute_force_optimum(&lm, &FloorPlan::default()).unwrap();
        assert_eq!(r.best_cost, LoadMeters::from_whole(2360));
        assert_eq!(r.optima_count, 16);
    }

    #[test]
    fn single_facility_layout() {
        let lm = parse_load_matrix("facility,A\nA,-\n").unwrap();
        let r = brute_force_optimum(&lm, &FloorPlan::default()).unwrap();
        assert_eq!(r.best_cost, LoadMeters::ZERO);
        assert_eq!(r.optima_count, 6);
    }

    #[test]
    fn layout_oracle_limits() {
        let lm = parse_load_matrix("facility,A\nA,-\n").unwrap();
        let wide = FloorPlan::from_meters(200, 10, 20, 10, 2).unwrap();
        assert_eq!(brute_force_optimum(&lm, &wide), Err(OracleError::TooLarge(9)));
    }
}
