//! The inter-facility load matrix and its CSV format.
//!
//! The CSV grammar is line oriented:
//!
//! ```text
//! # comment
//! facility,FI,FII,FIII
//! FI,-,20,
//! FII,10,-,15
//! FIII,-,-,-
//! ```
//!
//! The header starts with the literal `facility` followed by the facility
//! names. Each data row starts with a facility name from the header and then
//! holds one cell per column: a nonnegative decimal with at most six
//! fractional digits, or `-` / an empty field for a vacant cell. A numeric
//! `0` on the diagonal is normalized to vacant; any other diagonal value is
//! rejected. Off the diagonal a `0` is a present zero load, which is distinct
//! from vacant.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::fixed::{self, DecimalError};

/// Largest supported facility count.
pub const MAX_FACILITIES: usize = 64;

pub const VACANT_MARKER: &str = "-";
pub const HEADER_LABEL: &str = "facility";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("load matrix has no header row")]
    MissingHeader,
    #[error("header must start with `{HEADER_LABEL}` and name at least one facility (found {found:?})")]
    BadHeader { found: String },
    #[error("load matrix is not square: {rows} data rows for {cols} columns")]
    NonSquare { rows: usize, cols: usize },
    #[error("duplicate facility name `{0}`")]
    DuplicateName(String),
    #[error("invalid facility name {0:?} (must be non-empty, without commas or whitespace)")]
    InvalidName(String),
    #[error("negative load in row `{row}`, column `{col}`")]
    NegativeLoad { row: String, col: String },
    #[error("diagonal cell of `{0}` must be vacant")]
    DiagonalNotVacant(String),
    #[error("malformed cell on line {line}: {detail}")]
    MalformedCell { line: usize, detail: String },
    #[error("row name `{name}` on line {line} is not in the header")]
    HeaderMismatch { line: usize, name: String },
    #[error("{0} facilities exceeds the supported maximum of {MAX_FACILITIES}")]
    TooLarge(usize),
}

/// One cell of the load matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Vacant,
    /// Load in units of `1 / fixed::SCALE` unit-loads.
    Load(i64),
}

impl Cell {
    pub fn load(self) -> Option<i64> {
        match self {
            Cell::Vacant => None,
            Cell::Load(v) => Some(v),
        }
    }
}

/// A facility in a load matrix: its position and its name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FacilityId<'a> {
    pub index: usize,
    pub name: &'a str,
}

/// Square matrix of directed loads between facilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadMatrix {
    names: Vec<String>,
    cells: Vec<Cell>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c == ',' || c.is_whitespace())
}

impl LoadMatrix {
    /// Builds a matrix from names and row-major cells. Zero diagonal loads
    /// are normalized to vacant.
    pub fn new(names: Vec<String>, rows: Vec<Vec<Cell>>) -> Result<Self, LoadError> {
        let n = names.len();
        if n == 0 {
            return Err(LoadError::BadHeader { found: String::new() });
        }
        if n > MAX_FACILITIES {
            return Err(LoadError::TooLarge(n));
        }
        let mut seen = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if !valid_name(name) {
                return Err(LoadError::InvalidName(name.clone()));
            }
            if seen.insert(name.as_str(), i).is_some() {
                return Err(LoadError::DuplicateName(name.clone()));
            }
        }
        if rows.len() != n {
            return Err(LoadError::NonSquare { rows: rows.len(), cols: n });
        }
        let mut cells = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(LoadError::MalformedCell {
                    line: i + 1,
                    detail: format!("row `{}` has {} cells, expected {n}", names[i], row.len()),
                });
            }
            for (j, cell) in row.into_iter().enumerate() {
                let cell = match cell {
                    Cell::Load(v) if v < 0 => {
                        return Err(LoadError::NegativeLoad { row: names[i].clone(), col: names[j].clone() })
                    }
                    Cell::Load(0) if i == j => Cell::Vacant,
                    Cell::Load(_) if i == j => return Err(LoadError::DiagonalNotVacant(names[i].clone())),
                    c => c,
                };
                cells.push(cell);
            }
        }
        Ok(LoadMatrix { names, cells })
    }

    /// Convenience constructor from whole-unit loads, `None` meaning vacant.
    pub fn from_whole_units(names: &[&str], rows: &[Vec<Option<i64>>]) -> Result<Self, LoadError> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| match c {
                        Some(v) => Cell::Load(v * fixed::SCALE),
                        None => Cell::Vacant,
                    })
                    .collect()
            })
            .collect();
        LoadMatrix::new(names.iter().map(|s| s.to_string()).collect(), rows)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn facility(&self, i: usize) -> FacilityId<'_> {
        FacilityId { index: i, name: &self.names[i] }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn cell(&self, i: usize, j: usize) -> Cell {
        self.cells[i * self.len() + j]
    }

    pub fn load(&self, i: usize, j: usize) -> Option<i64> {
        self.cell(i, j).load()
    }

    /// Present loads as `(from, to, scaled load)` in row-major order.
    pub fn present(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        let n = self.len();
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(k, c)| c.load().map(|v| (k / n, k % n, v)))
    }

    /// Sum of all present loads, scaled.
    pub fn total_load(&self) -> i128 {
        self.present().map(|(_, _, v)| i128::from(v)).sum()
    }

    /// Serializes to the CSV format accepted by [`parse_load_matrix`].
    pub fn to_csv(&self) -> String {
        let mut out = String::from(HEADER_LABEL);
        for name in &self.names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for i in 0..self.len() {
            out.push_str(&self.names[i]);
            for j in 0..self.len() {
                match self.cell(i, j) {
                    Cell::Vacant => write!(out, ",{VACANT_MARKER}").unwrap(),
                    Cell::Load(v) => write!(out, ",{}", fixed::format_decimal(v)).unwrap(),
                }
            }
            out.push('\n');
        }
        out
    }
}

fn split_fields(line: &str) -> Vec<&str> {
    line.split(',').map(|f| f.trim()).collect()
}

/// Parses the load-matrix CSV format. Rows may appear in any order; the
/// resulting matrix follows the header order.
pub fn parse_load_matrix(text: &str) -> Result<LoadMatrix, LoadError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim_start().starts_with('#') && !l.trim().is_empty());

    let (_, header) = lines.next().ok_or(LoadError::MissingHeader)?;
    let header = split_fields(header);
    if header[0] != HEADER_LABEL || header.len() < 2 {
        return Err(LoadError::BadHeader { found: header.join(",") });
    }
    let names: Vec<String> = header[1..].iter().map(|s| s.to_string()).collect();
    let n = names.len();
    if n > MAX_FACILITIES {
        return Err(LoadError::TooLarge(n));
    }
    let mut index = HashMap::with_capacity(n);
    for (i, name) in names.iter().enumerate() {
        if !valid_name(name) {
            return Err(LoadError::InvalidName(name.clone()));
        }
        if index.insert(name.as_str(), i).is_some() {
            return Err(LoadError::DuplicateName(name.clone()));
        }
    }

    let mut rows: Vec<Option<Vec<Cell>>> = vec![None; n];
    let mut row_count = 0;
    for (line_no, line) in lines {
        let fields = split_fields(line);
        if fields.len() != n + 1 {
            return Err(LoadError::MalformedCell {
                line: line_no,
                detail: format!("expected {} fields, found {}", n + 1, fields.len()),
            });
        }
        let name = fields[0];
        let &i = index
            .get(name)
            .ok_or_else(|| LoadError::HeaderMismatch { line: line_no, name: name.to_string() })?;
        if rows[i].is_some() {
            return Err(LoadError::DuplicateName(name.to_string()));
        }
        let mut row = Vec::with_capacity(n);
        for (j, field) in fields[1..].iter().enumerate() {
            let cell = if field.is_empty() || *field == VACANT_MARKER {
                Cell::Vacant
            } else {
                match fixed::parse_decimal(field) {
                    Ok(v) => Cell::Load(v),
                    Err(DecimalError::Negative) => {
                        return Err(LoadError::NegativeLoad { row: name.to_string(), col: names[j].clone() })
                    }
                    Err(e) => {
                        return Err(LoadError::MalformedCell {
                            line: line_no,
                            detail: format!("cell {field:?} in column `{}`: {e:?}", names[j]),
                        })
                    }
                }
            };
            row.push(cell);
        }
        rows[i] = Some(row);
        row_count += 1;
    }
    if row_count != n {
        return Err(LoadError::NonSquare { rows: row_count, cols: n });
    }
    LoadMatrix::new(names, rows.into_iter().map(Option::unwrap).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed::SCALE;

    const EXAMPLE: &str = include_str!("../tests/fixtures/example.csv");

    #[test]
    fn parses_reference_instance() {
        let lm = parse_load_matrix(EXAMPLE).unwrap();
        assert_eq!(lm.len(), 6);
        let ix = |s| lm.index_of(s).unwrap();
        assert_eq!(lm.load(ix("FI"), ix("FII")), Some(20 * SCALE));
        assert_eq!(lm.load(ix("FII"), ix("FI")), Some(10 * SCALE));
        assert_eq!(lm.load(ix("FIV"), ix("FIII")), Some(50 * SCALE));
        assert_eq!(lm.load(ix("FVI"), ix("FV")), Some(15 * SCALE));
        assert_eq!(lm.present().count(), 9);
        assert_eq!(lm.total_load(), 215 * i128::from(SCALE));
        for i in 0..6 {
            assert_eq!(lm.cell(i, i), Cell::Vacant);
        }
    }

    #[test]
    fn single_facility() {
        let lm = parse_load_matrix("facility,A\nA,-\n").unwrap();
        assert_eq!(lm.len(), 1);
        assert_eq!(lm.present().count(), 0);
    }

    #[test]
    fn too_many_values_is_malformed() {
        let err = parse_load_matrix("facility,A,B,C\nA,-,1,2,3\n").unwrap_err();
        assert!(matches!(err, LoadError::MalformedCell { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn empty_field_is_vacant_and_zero_is_present() {
        let lm = parse_load_matrix("facility,A,B\nA,,0\nB,1.5,\n").unwrap();
        assert_eq!(lm.cell(0, 1), Cell::Load(0));
        assert_eq!(lm.cell(1, 0), Cell::Load(3 * SCALE / 2));
        assert_eq!(lm.cell(0, 0), Cell::Vacant);
    }

    #[test]
    fn diagonal_zero_is_normalized() {
        let lm = parse_load_matrix("facility,A,B\nA,0,1\nB,1,-\n").unwrap();
        assert_eq!(lm.cell(0, 0), Cell::Vacant);
        let err = parse_load_matrix("facility,A,B\nA,3,1\nB,1,-\n").unwrap_err();
        assert_eq!(err, LoadError::DiagonalNotVacant("A".into()));
    }

    #[test]
    fn error_paths() {
        assert_eq!(parse_load_matrix("# only a comment\n"), Err(LoadError::MissingHeader));
        assert!(matches!(parse_load_matrix("name,A\nA,-\n"), Err(LoadError::BadHeader { .. })));
        assert_eq!(
            parse_load_matrix("facility,A,A\nA,-,1\nA,1,-\n"),
            Err(LoadError::DuplicateName("A".into()))
        );
        assert_eq!(
            parse_load_matrix("facility,A,B\nA,-,1\n"),
            Err(LoadError::NonSquare { rows: 1, cols: 2 })
        );
        assert_eq!(
            parse_load_matrix("facility,A,B\nA,-,-2\nB,1,-\n"),
            Err(LoadError::NegativeLoad { row: "A".into(), col: "B".into() })
        );
        assert_eq!(
            parse_load_matrix("facility,A,B\nA,-,1\nC,1,-\n"),
            Err(LoadError::HeaderMismatch { line: 3, name: "C".into() })
        );
        assert!(matches!(
            parse_load_matrix("facility,A,B\nA,-,x\nB,1,-\n"),
            Err(LoadError::MalformedCell { line: 2, .. })
        ));
        assert!(matches!(
            parse_load_matrix("facility,A,B\nA,-,1.0000001\nB,1,-\n"),
            Err(LoadError::MalformedCell { .. })
        ));
    }

    #[test]
    fn rows_follow_header_order() {
        let lm = parse_load_matrix("facility,A,B\nB,7,-\nA,-,3\n").unwrap();
        assert_eq!(lm.load(0, 1), Some(3 * SCALE));
        assert_eq!(lm.load(1, 0), Some(7 * SCALE));
    }

    #[test]
    fn too_large() {
        let names: Vec<String> = (0..65).map(|i| format!("F{i}")).collect();
        let text = format!("facility,{}\n", names.join(","));
        assert_eq!(parse_load_matrix(&text), Err(LoadError::TooLarge(65)));
    }

    #[test]
    fn csv_round_trip_of_reference_instance() {
        let lm = parse_load_matrix(EXAMPLE).unwrap();
        assert_eq!(parse_load_matrix(&lm.to_csv()).unwrap(), lm);
    }
}
