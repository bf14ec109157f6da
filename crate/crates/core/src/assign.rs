//! Hungarian assignment over a big-M cost matrix.
//!
//! The solver follows the classic matrix formulation: reduce rows and
//! columns, cover every zero with the fewest whole lines, and while fewer
//! than `n` lines suffice shift the uncovered minimum into the doubly
//! covered cells. Every entry is an exact integer, so "zero" means exactly
//! zero.

use std::fmt;

use thiserror::Error;

use crate::fixed::SCALE;
use crate::loads::LoadMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignError {
    #[error("cost matrix must be square and non-empty")]
    NotSquare,
    #[error("every line of the cover is drawn; there is no uncovered cell to adjust")]
    NoUncoveredCell,
    #[error("line cover leaves a zero uncovered")]
    CoverIncomplete,
    #[error("entry ({row}, {col}) would be negative")]
    NegativeEntry { row: usize, col: usize },
    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("partner vector is not a permutation")]
    NotPermutation,
    #[error("big-M value {big_m} does not exceed the total load {total}")]
    BigMTooSmall { big_m: i128, total: i128 },
    #[error("adjustment loop exceeded {0} rounds")]
    IterationGuardExceeded(usize),
}

/// Square matrix of exact integer assignment costs.
///
/// Cells filled with the big-M value stand for vacant load cells and are
/// flagged in the synthetic mask; the mask survives every transformation so
/// that a final assignment can report whether it relies on a vacant cell.
#[derive(Clone, PartialEq, Eq)]
pub struct CostMatrix {
    n: usize,
    entries: Vec<i128>,
    synthetic: Vec<bool>,
    big_m: Option<i128>,
}

impl fmt::Debug for CostMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CostMatrix(n={}, big_m={:?})", self.n, self.big_m)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| {
                    let v = self.entry(i, j);
                    if self.is_synthetic(i, j) { format!("{v}*") } else { v.to_string() }
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl CostMatrix {
    /// A plain matrix with no synthetic cells.
    pub fn from_rows(rows: &[Vec<i128>]) -> Result<Self, AssignError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(AssignError::NotSquare);
        }
        Ok(CostMatrix {
            n,
            entries: rows.iter().flatten().copied().collect(),
            synthetic: vec![false; n * n],
            big_m: None,
        })
    }

    /// Builds the cost matrix for `loads` with an explicit big-M value (in
    /// the same scaled units as the loads).
    pub fn from_loads_with_big_m(loads: &LoadMatrix, big_m: i128) -> Result<Self, AssignError> {
        let total = loads.total_load();
        if big_m <= total {
            return Err(AssignError::BigMTooSmall { big_m, total });
        }
        let n = loads.len();
        let mut entries = Vec::with_capacity(n * n);
        let mut synthetic = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                match loads.load(i, j) {
                    Some(v) => {
                        entries.push(i128::from(v));
                        synthetic.push(false);
                    }
                    None => {
                        entries.push(big_m);
                        synthetic.push(true);
                    }
                }
            }
        }
        Ok(CostMatrix { n, entries, synthetic, big_m: Some(big_m) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> i128 {
        self.entries[i * self.n + j]
    }

    pub fn is_synthetic(&self, i: usize, j: usize) -> bool {
        self.synthetic[i * self.n + j]
    }

    pub fn synthetic_count(&self) -> usize {
        self.synthetic.iter().filter(|&&s| s).count()
    }

    pub fn big_m(&self) -> Option<i128> {
        self.big_m
    }

    pub fn rows(&self) -> Vec<Vec<i128>> {
        self.entries.chunks(self.n).map(<[i128]>::to_vec).collect()
    }

    pub fn is_zero(&self, i: usize, j: usize) -> bool {
        self.entry(i, j) == 0
    }

    fn set(&mut self, i: usize, j: usize, v: i128) {
        self.entries[i * self.n + j] = v;
    }

    fn first_negative(&self) -> Option<(usize, usize)> {
        self.entries.iter().position(|&v| v < 0).map(|k| (k / self.n, k % self.n))
    }
}

/// Converts a load matrix into its assignment cost matrix, filling vacant
/// cells (the diagonal included) with `big_m = 1 unit-load + total load`.
pub fn to_cost_matrix(loads: &LoadMatrix) -> CostMatrix {
    let big_m = loads.total_load() + i128::from(SCALE);
    CostMatrix::from_loads_with_big_m(loads, big_m).expect("big_m exceeds the total load")
}

/// A permutation pairing each row (facility) with its assigned column.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    partner: Vec<usize>,
}

impl Assignment {
    pub fn new(partner: Vec<usize>) -> Result<Self, AssignError> {
        let mut seen = vec![false; partner.len()];
        for &p in &partner {
            if p >= partner.len() || std::mem::replace(&mut seen[p], true) {
                return Err(AssignError::NotPermutation);
            }
        }
        Ok(Assignment { partner })
    }

    pub fn identity(n: usize) -> Self {
        Assignment { partner: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    pub fn partner(&self, i: usize) -> usize {
        self.partner[i]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    /// Cycles of the permutation, each starting at its smallest member and
    /// following `partner`, ordered by that smallest member.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.partner[cur];
            }
            out.push(cycle);
        }
        out
    }
}

/// Total cost of an assignment and whether it uses any synthetic cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssignmentCost {
    pub total: i128,
    pub uses_synthetic: bool,
}

pub fn assignment_cost(cm: &CostMatrix, asg: &Assignment) -> Result<AssignmentCost, AssignError> {
    if asg.len() != cm.n {
        return Err(AssignError::SizeMismatch { expected: cm.n, actual: asg.len() });
    }
    let mut total = 0;
    let mut uses_synthetic = false;
    for (i, &j) in asg.partners().iter().enumerate() {
        total += cm.entry(i, j);
        uses_synthetic |= cm.is_synthetic(i, j);
    }
    Ok(AssignmentCost { total, uses_synthetic })
}

/// Subtracts each row minimum, then each column minimum.
pub fn reduce(cm: &CostMatrix) -> CostMatrix {
    let n = cm.n;
    let mut out = cm.clone();
    for i in 0..n {
        let min = (0..n).map(|j| out.entry(i, j)).min().unwrap();
        for j in 0..n {
            out.set(i, j, out.entry(i, j) - min);
        }
    }
    for j in 0..n {
        let min = (0..n).map(|i| out.entry(i, j)).min().unwrap();
        for i in 0..n {
            out.set(i, j, out.entry(i, j) - min);
        }
    }
    out
}

/// A set of whole rows and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineCover {
    pub covered_rows: Vec<bool>,
    pub covered_cols: Vec<bool>,
}

impl LineCover {
    pub fn k(&self) -> usize {
        self.covered_rows.iter().chain(&self.covered_cols).filter(|&&c| c).count()
    }

    pub fn rows(&self) -> Vec<usize> {
        self.covered_rows.iter().enumerate().filter(|(_, &c)| c).map(|(i, _)| i).collect()
    }

    pub fn cols(&self) -> Vec<usize> {
        self.covered_cols.iter().enumerate().filter(|(_, &c)| c).map(|(j, _)| j).collect()
    }

    pub fn covers(&self, i: usize, j: usize) -> bool {
        self.covered_rows[i] || self.covered_cols[j]
    }

    /// Whether every zero of `cm` lies on a covered line.
    pub fn covers_zeros_of(&self, cm: &CostMatrix) -> bool {
        (0..cm.n).all(|i| (0..cm.n).all(|j| !cm.is_zero(i, j) || self.covers(i, j)))
    }
}

/// Maximum matching on the zero cells, as `row -> column`.
///
/// Rows are processed in ascending order and each augmenting search scans
/// columns in ascending order.
fn max_zero_matching(cm: &CostMatrix) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let n = cm.n;
    let mut row_match = vec![None; n];
    let mut col_match = vec![None; n];

    fn augment(
        cm: &CostMatrix,
        row: usize,
        visited: &mut [bool],
        row_match: &mut [Option<usize>],
        col_match: &mut [Option<usize>],
    ) -> bool {
        for col in 0..cm.n {
            if !cm.is_zero(row, col) || visited[col] {
                continue;
            }
            visited[col] = true;
            let free = match col_match[col] {
                None => true,
                Some(other) => augment(cm, other, visited, row_match, col_match),
            };
            if free {
                row_match[row] = Some(col);
                col_match[col] = Some(row);
                return true;
            }
        }
        false
    }

    for row in 0..n {
        let mut visited = vec![false; n];
        augment(cm, row, &mut visited, &mut row_match, &mut col_match);
    }
    (row_match, col_match)
}

/// Minimum set of lines covering every zero.
///
/// Built from a maximum zero matching: mark every row and column reachable
/// from an unmatched row by alternating paths (zero edges row to column,
/// matching edges column to row). Unmarked rows plus marked columns form a
/// cover whose size equals the matching size, which is minimum.
pub fn min_line_cover(cm: &CostMatrix) -> LineCover {
    let n = cm.n;
    let (row_match, col_match) = max_zero_matching(cm);
    let mut row_marked = vec![false; n];
    let mut col_marked = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&r| row_match[r].is_none()).collect();
    for &r in &stack {
        row_marked[r] = true;
    }
    while let Some(r) = stack.pop() {
        for c in 0..n {
            if cm.is_zero(r, c) && !col_marked[c] {
                col_marked[c] = true;
                if let Some(next) = col_match[c] {
                    if !row_marked[next] {
                        row_marked[next] = true;
                        stack.push(next);
                    }
                }
            }
        }
    }
    LineCover {
        covered_rows: row_marked.iter().map(|m| !m).collect(),
        covered_cols: col_marked,
    }
}

/// Moves the minimum uncovered entry: subtracted from every uncovered cell,
/// added to every cell covered twice.
pub fn adjust(cm: &CostMatrix, cover: &LineCover) -> Result<CostMatrix, AssignError> {
    let n = cm.n;
    if cover.covered_rows.len() != n || cover.covered_cols.len() != n {
        return Err(AssignError::SizeMismatch { expected: n, actual: cover.covered_rows.len() });
    }
    let mut min: Option<(i128, usize, usize)> = None;
    for i in (0..n).filter(|&i| !cover.covered_rows[i]) {
        for j in (0..n).filter(|&j| !cover.covered_cols[j]) {
            let v = cm.entry(i, j);
            if min.is_none_or(|(m, _, _)| v < m) {
                min = Some((v, i, j));
            }
        }
    }
    let (m, mi, mj) = min.ok_or(AssignError::NoUncoveredCell)?;
    if m < 0 {
        return Err(AssignError::NegativeEntry { row: mi, col: mj });
    }
    if m == 0 {
        return Err(AssignError::CoverIncomplete);
    }
    let mut out = cm.clone();
    for i in 0..n {
        for j in 0..n {
            match (cover.covered_rows[i], cover.covered_cols[j]) {
                (false, false) => out.set(i, j, cm.entry(i, j) - m),
                (true, true) => out.set(i, j, cm.entry(i, j) + m),
                _ => {}
            }
        }
    }
    Ok(out)
}

/// Picks an `n`-zero matching: repeatedly take the zero in the row with the
/// fewest remaining zeros (ties: lowest row, then lowest column). Falls back
/// to the augmenting-path matching if the greedy choice dead-ends.
fn extract_zero_assignment(cm: &CostMatrix) -> Vec<usize> {
    let n = cm.n;
    let mut row_done = vec![false; n];
    let mut col_done = vec![false; n];
    let mut partner = vec![usize::MAX; n];
    for _ in 0..n {
        let mut best: Option<(usize, usize)> = None;
        for r in (0..n).filter(|&r| !row_done[r]) {
            let zeros = (0..n).filter(|&c| !col_done[c] && cm.is_zero(r, c)).count();
            if best.is_none_or(|(_, z)| zeros < z) {
                best = Some((r, zeros));
            }
        }
        let (r, zeros) = best.unwrap();
        if zeros == 0 {
            let (row_match, _) = max_zero_matching(cm);
            return row_match.into_iter().map(|c| c.expect("perfect zero matching")).collect();
        }
        let c = (0..n).find(|&c| !col_done[c] && cm.is_zero(r, c)).unwrap();
        partner[r] = c;
        row_done[r] = true;
        col_done[c] = true;
    }
    partner
}

/// Solves the assignment problem exactly.
pub fn hungarian_solve(cm: &CostMatrix) -> Result<Assignment, AssignError> {
    if let Some((row, col)) = cm.first_negative() {
        return Err(AssignError::NegativeEntry { row, col });
    }
    let n = cm.n;
    let guard = 10 * n * n;
    let mut work = reduce(cm);
    let mut rounds = 0;
    loop {
        let cover = min_line_cover(&work);
        if cover.k() == n {
            break;
        }
        if rounds == guard {
            return Err(AssignError::IterationGuardExceeded(guard));
        }
        work = adjust(&work, &cover)?;
        rounds += 1;
    }
    Assignment::new(extract_zero_assignment(&work))
}

/// Per-row and per-column constants added to a cost matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftVectors {
    pub rows: Vec<i128>,
    pub cols: Vec<i128>,
}

impl ShiftVectors {
    pub fn zero(n: usize) -> Self {
        ShiftVectors { rows: vec![0; n], cols: vec![0; n] }
    }

    /// The constant by which every assignment's cost changes.
    pub fn total(&self) -> i128 {
        self.rows.iter().sum::<i128>() + self.cols.iter().sum::<i128>()
    }
}

/// `entry'(i, j) = entry(i, j) + rows[i] + cols[j]`. Every assignment's cost
/// moves by the same constant, so the set of optimal assignments is
/// unchanged.
pub fn shift_costs(cm: &CostMatrix, sv: &ShiftVectors) -> Result<CostMatrix, AssignError> {
    let n = cm.n;
    for len in [sv.rows.len(), sv.cols.len()] {
        if len != n {
            return Err(AssignError::SizeMismatch { expected: n, actual: len });
        }
    }
    let mut out = cm.clone();
    for i in 0..n {
        for j in 0..n {
            let v = cm.entry(i, j) + sv.rows[i] + sv.cols[j];
            if v < 0 {
                return Err(AssignError::NegativeEntry { row: i, col: j });
            }
            out.set(i, j, v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loads::parse_load_matrix;

    const EXAMPLE: &str = include_str!("../tests/fixtures/example.csv");
    const U: i128 = SCALE as i128;

    fn example_costs() -> CostMatrix {
        to_cost_matrix(&parse_load_matrix(EXAMPLE).unwrap())
    }

    fn m(rows: &[&[i128]]) -> CostMatrix {
        CostMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn cost_matrix_shape_of_reference_instance() {
        let cm = example_costs();
        let big_m = cm.big_m().unwrap();
        assert_eq!(big_m, 216 * U);
        assert_eq!(cm.entry(0, 1), 20 * U);
        assert_eq!(cm.entry(0, 0), big_m);
        assert_eq!(cm.entry(3, 5), 40 * U);
        assert_eq!(cm.synthetic_count(), 27);
        for i in 0..6 {
            for j in 0..6 {
                if cm.is_synthetic(i, j) {
                    assert_eq!(cm.entry(i, j), big_m);
                }
            }
        }
    }

    #[test]
    fn dense_two_by_two_has_only_diagonal_synthetic() {
        let lm = LoadMatrix::from_whole_units(&["A", "B"], &[vec![None, Some(3)], vec![Some(4), None]]).unwrap();
        let cm = to_cost_matrix(&lm);
        assert_eq!(cm.synthetic_count(), 2);
        assert!(cm.is_synthetic(0, 0) && cm.is_synthetic(1, 1));
    }

    #[test]
    fn reduce_reproduces_first_iteration_entries() {
        let r = reduce(&example_costs());
        let big_m = 216 * U;
        assert_eq!(r.entry(0, 1), 0);
        assert_eq!(r.entry(0, 5), 5 * U);
        assert_eq!(r.entry(1, 0), 0);
        assert_eq!(r.entry(1, 2), 0);
        assert_eq!(r.entry(2, 3), 0);
        assert_eq!(r.entry(3, 2), 5 * U);
        assert_eq!(r.entry(3, 5), 0);
        assert_eq!(r.entry(5, 4), 0);
        assert_eq!(r.entry(0, 2), big_m - 25 * U);
        assert_eq!(r.synthetic_count(), 27);
    }

    #[test]
    fn reduce_small_and_idempotent() {
        assert_eq!(reduce(&m(&[&[1, 2], &[3, 4]])).rows(), vec![vec![0, 0], vec![0, 0]]);
        let once = reduce(&example_costs());
        assert_eq!(reduce(&once), once);
    }

    #[test]
    fn cover_of_first_iteration_has_five_lines() {
        let r = reduce(&example_costs());
        let cover = min_line_cover(&r);
        assert_eq!(cover.k(), 5);
        assert!(cover.covers_zeros_of(&r));
    }

    #[test]
    fn diagonal_zeros_need_n_lines() {
        let cm = m(&[&[0, 4, 5], &[6, 0, 7], &[8, 9, 0]]);
        assert_eq!(min_line_cover(&cm).k(), 3);
    }

    #[test]
    fn adjust_small_case() {
        let cm = m(&[&[0, 1], &[2, 3]]);
        let cover = LineCover { covered_rows: vec![true, false], covered_cols: vec![false, false] };
        assert_eq!(adjust(&cm, &cover).unwrap().rows(), vec![vec![0, 1], vec![0, 1]]);
    }

    #[test]
    fn adjust_with_full_cover_fails() {
        let cm = m(&[&[0, 1], &[2, 0]]);
        let cover = LineCover { covered_rows: vec![true, true], covered_cols: vec![false, false] };
        assert_eq!(adjust(&cm, &cover), Err(AssignError::NoUncoveredCell));
        let partial = LineCover { covered_rows: vec![true, false], covered_cols: vec![false, false] };
        assert_eq!(adjust(&cm, &partial), Err(AssignError::CoverIncomplete));
    }

    #[test]
    fn adjusting_first_iteration_reaches_six_lines() {
        let r = reduce(&example_costs());
        let cover = min_line_cover(&r);
        let next = adjust(&r, &cover).unwrap();
        // The uncovered minimum is the 5-unit cell (FIV, FIII).
        assert_eq!(next.entry(3, 2), 0);
        assert_eq!(next.entry(0, 5), 10 * U);
        assert_eq!(min_line_cover(&next).k(), 6);
    }

    #[test]
    fn solves_reference_instance() {
        let asg = hungarian_solve(&example_costs()).unwrap();
        assert_eq!(asg.partners(), &[1, 0, 3, 2, 5, 4]);
        let cost = assignment_cost(&example_costs(), &asg).unwrap();
        assert_eq!(cost, AssignmentCost { total: 135 * U, uses_synthetic: false });
    }

    #[test]
    fn zero_diagonal_gives_identity() {
        let cm = m(&[&[0, 3, 1], &[2, 0, 9], &[4, 4, 0]]);
        assert_eq!(hungarian_solve(&cm).unwrap(), Assignment::identity(3));
    }

    #[test]
    fn identity_on_reference_instance_is_all_synthetic() {
        let cm = example_costs();
        let cost = assignment_cost(&cm, &Assignment::identity(6)).unwrap();
        assert_eq!(cost.total, 6 * 216 * U);
        assert!(cost.uses_synthetic);
    }

    #[test]
    fn assignment_cost_errors_and_zero() {
        let cm = m(&[&[0, 0], &[0, 0]]);
        assert_eq!(assignment_cost(&cm, &Assignment::new(vec![1, 0]).unwrap()).unwrap().total, 0);
        assert_eq!(
            assignment_cost(&cm, &Assignment::identity(3)),
            Err(AssignError::SizeMismatch { expected: 2, actual: 3 })
        );
        assert_eq!(Assignment::new(vec![0, 0]), Err(AssignError::NotPermutation));
    }

    #[test]
    fn shift_by_zero_is_identity() {
        let cm = example_costs();
        assert_eq!(shift_costs(&cm, &ShiftVectors::zero(6)).unwrap(), cm);
    }

    #[test]
    fn shifting_one_row_keeps_optimum() {
        let cm = example_costs();
        let mut sv = ShiftVectors::zero(6);
        sv.rows[0] = 7 * U;
        let shifted = shift_costs(&cm, &sv).unwrap();
        let asg = hungarian_solve(&shifted).unwrap();
        assert_eq!(asg.partners(), &[1, 0, 3, 2, 5, 4]);
        assert_eq!(assignment_cost(&shifted, &asg).unwrap().total, 142 * U);
        assert_eq!(shifted.synthetic_count(), 27);
    }

    #[test]
    fn shift_rejects_negative_result() {
        let cm = m(&[&[1, 2], &[3, 4]]);
        let sv = ShiftVectors { rows: vec![-2, 0], cols: vec![0, 0] };
        assert_eq!(shift_costs(&cm, &sv), Err(AssignError::NegativeEntry { row: 0, col: 0 }));
    }

    #[test]
    fn big_m_must_dominate() {
        let lm = parse_load_matrix(EXAMPLE).unwrap();
        assert!(matches!(
            CostMatrix::from_loads_with_big_m(&lm, 215 * U),
            Err(AssignError::BigMTooSmall { .. })
        ));
    }

    #[test]
    fn cycles_start_at_smallest_member() {
        let asg = Assignment::new(vec![2, 0, 1, 3]).unwrap();
        assert_eq!(asg.cycles(), vec![vec![0, 2, 1], vec![3]]);
    }
}
