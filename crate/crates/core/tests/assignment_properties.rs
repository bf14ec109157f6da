use itertools::Itertools;
use mass_core::assign::{
    assignment_cost, Assignment, hungarian_solve, min_line_cover, reduce, shift_costs, to_cost_matrix, CostMatrix, ShiftVectors,
};
use mass_core::fixed::SCALE;
use mass_core::loads::{parse_load_matrix, Cell, LoadMatrix};
use mass_core::oracle::{brute_force_assignment, optimal_assignments};
use proptest::prelude::*;

const EXAMPLE: &str = include_str!("fixtures/example.csv");

/// Maximum matching on zero cells by subset DP over columns.
fn max_zero_matching_dp(cm: &CostMatrix) -> usize {
    let n = cm.n();
    // best[mask]: largest matching of the rows seen so far onto column set `mask`.
    let mut best = vec![None::<usize>; 1 << n];
    best[0] = Some(0);
    for row in 0..n {
        let mut next = best.clone();
        for (mask, v) in best.iter().enumerate() {
            let Some(v) = *v else { continue };
            for col in 0..n {
                if mask & (1 << col) == 0 && cm.entry(row, col) == 0 {
                    let m2 = mask | (1 << col);
                    if next[m2].is_none_or(|w| w < v + 1) {
                        next[m2] = Some(v + 1);
                    }
                }
            }
        }
        best = next;
    }
    best.into_iter().flatten().max().unwrap()
}

/// Smallest number of rows plus columns covering every zero, by trying
/// every row subset and covering what remains with columns.
fn min_cover_exhaustive(cm: &CostMatrix) -> usize {
    let n = cm.n();
    (0..(1usize << n))
        .map(|rows| {
            let cols = (0..n)
                .filter(|&c| (0..n).any(|r| rows & (1 << r) == 0 && cm.entry(r, c) == 0))
                .count();
            rows.count_ones() as usize + cols
        })
        .min()
        .unwrap()
}

/// Whether a perfect matching exists using only non-synthetic cells.
fn has_real_perfect_matching(cm: &CostMatrix) -> bool {
    let n = cm.n();
    let mut reach = vec![false; 1 << n];
    reach[0] = true;
    for mask in 0..(1usize << n) {
        if !reach[mask] {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) == 0 && !cm.is_synthetic(row, col) {
                reach[mask | (1 << col)] = true;
            }
        }
    }
    reach[(1 << n) - 1]
}

fn square(max_n: usize, max_v: i128) -> impl Strategy<Value = Vec<Vec<i128>>> {
    (1..=max_n).prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(0..=max_v, n), n))
}

fn sparse_loads(n: usize) -> impl Strategy<Value = LoadMatrix> {
    prop::collection::vec(prop::option::weighted(0.4, 0i64..50), n * n).prop_map(move |cells| {
        let names: Vec<String> = (0..n).map(|i| format!("F{i}")).collect();
        let rows = cells
            .chunks(n)
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .map(|(j, c)| match c {
                        Some(v) if i != j => Cell::Load(v * SCALE),
                        _ => Cell::Vacant,
                    })
                    .collect()
            })
            .collect();
        LoadMatrix::new(names, rows).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hungarian_matches_enumeration(rows in square(7, 100)) {
        let cm = CostMatrix::from_rows(&rows).unwrap();
        let asg = hungarian_solve(&cm).unwrap();
        let oracle = brute_force_assignment(&cm).unwrap();
        prop_assert_eq!(assignment_cost(&cm, &asg).unwrap().total, oracle.best_cost);
    }

    #[test]
    fn cover_size_is_konig_number(rows in square(6, 3)) {
        // Small values make zeros plentiful after reduction.
        let cm = reduce(&CostMatrix::from_rows(&rows).unwrap());
        let cover = min_line_cover(&cm);
        prop_assert!(cover.covers_zeros_of(&cm));
        prop_assert_eq!(cover.k(), max_zero_matching_dp(&cm));
        prop_assert_eq!(cover.k(), min_cover_exhaustive(&cm));
    }

    #[test]
    fn cover_of_unreduced_matrix(rows in square(6, 2)) {
        let cm = CostMatrix::from_rows(&rows).unwrap();
        let cover = min_line_cover(&cm);
        prop_assert!(cover.covers_zeros_of(&cm));
        prop_assert_eq!(cover.k(), min_cover_exhaustive(&cm));
    }

    #[test]
    fn reduction_zeroes_every_line(rows in square(7, 1000)) {
        let cm = CostMatrix::from_rows(&rows).unwrap();
        let r = reduce(&cm);
        let n = r.n();
        for i in 0..n {
            prop_assert_eq!((0..n).map(|j| r.entry(i, j)).min(), Some(0));
            prop_assert_eq!((0..n).map(|j| r.entry(j, i)).min(), Some(0));
        }
        if n <= 6 {
            prop_assert_eq!(optimal_assignments(&r).unwrap(), optimal_assignments(&cm).unwrap());
        }
    }

    #[test]
    fn shifting_preserves_optimal_set(
        (rows, a, b) in (1usize..=6).prop_flat_map(|n| (
            prop::collection::vec(prop::collection::vec(0i128..=100, n), n),
            prop::collection::vec(0i128..=50, n),
            prop::collection::vec(0i128..=50, n),
        ))
    ) {
        let cm = CostMatrix::from_rows(&rows).unwrap();
        let sv = ShiftVectors { rows: a, cols: b };
        let shifted = shift_costs(&cm, &sv).unwrap();
        prop_assert_eq!(optimal_assignments(&cm).unwrap(), optimal_assignments(&shifted).unwrap());
        for perm in (0..cm.n()).permutations(cm.n()) {
            let asg = Assignment::new(perm).unwrap();
            let before = assignment_cost(&cm, &asg).unwrap().total;
            let after = assignment_cost(&shifted, &asg).unwrap().total;
            prop_assert_eq!(after - before, sv.total());
        }
    }

    #[test]
    fn big_m_is_avoided_when_possible(lm in (2usize..=7).prop_flat_map(sparse_loads)) {
        let cm = to_cost_matrix(&lm);
        let asg = hungarian_solve(&cm).unwrap();
        let cost = assignment_cost(&cm, &asg).unwrap();
        prop_assert_eq!(cost.uses_synthetic, !has_real_perfect_matching(&cm));
    }
}

#[test]
fn big_m_value_does_not_change_reference_assignment() {
    let lm = parse_load_matrix(EXAMPLE).unwrap();
    let small = hungarian_solve(&to_cost_matrix(&lm)).unwrap();
    let huge_m = 1_000_000_000 * i128::from(SCALE);
    let large = hungarian_solve(&CostMatrix::from_loads_with_big_m(&lm, huge_m).unwrap()).unwrap();
    assert_eq!(small, large);
    assert_eq!(small.partners(), &[1, 0, 3, 2, 5, 4]);
}

#[test]
fn second_iteration_table_needs_six_lines() {
    // The second-iteration table of the worked example, with M = 216.
    let m = 216;
    let rows: Vec<Vec<i128>> = vec![
        vec![m - 20, 0, m - 25, m - 15, m - 15, 10],
        vec![0, m - 10, 0, m - 5, m - 5, m - 5],
        vec![m - 35, m - 35, m - 40, 0, m - 30, m - 30],
        vec![m - 45, m - 45, 0, m - 40, m - 40, 0],
        vec![m - 15, m - 15, m - 20, m - 10, m - 10, 0],
        vec![m - 20, m - 20, m - 25, m - 15, 0, m - 15],
    ];
    let cm = CostMatrix::from_rows(&rows).unwrap();
    let cover = min_line_cover(&cm);
    assert_eq!(cover.k(), 6);
    assert!(cover.covers_zeros_of(&cm));

    // The hand-drawn cover (columns FI, FIII, FIV, FVI and rows FI, FVI) is
    // another minimum cover of the same table.
    let hand = mass_core::assign::LineCover {
        covered_rows: vec![true, false, false, false, false, true],
        covered_cols: vec![true, false, true, true, false, true],
    };
    assert_eq!(hand.k(), 6);
    assert!(hand.covers_zeros_of(&cm));

    assert_eq!(hungarian_solve(&cm).unwrap().partners(), &[1, 0, 3, 2, 5, 4]);
}

#[test]
fn solve_terminates_on_adversarial_shapes() {
    // Large spread with a single cheap permutation hidden off the diagonal.
    for n in 2..=12 {
        let rows: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| if j == (i + 1) % n { 1 } else { 1000 + ((i * 7 + j * 13) % 17) as i128 }).collect())
            .collect();
        let cm = CostMatrix::from_rows(&rows).unwrap();
        let asg = hungarian_solve(&cm).unwrap();
        assert_eq!(assignment_cost(&cm, &asg).unwrap().total, n as i128);
    }
}
