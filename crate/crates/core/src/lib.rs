//! Facilities layout planning with a Hungarian-assignment seed.
//!
//! The pipeline reads a matrix of inter-facility loads, fills the vacant
//! cells with a large cost and solves the resulting assignment problem. The
//! assigned facility pairs are placed next to each other to form an initial
//! block layout, which is then improved by CRAFT-style exchanges until no
//! exchange lowers the total load-distance cost.
//!
//! ```
//! use mass_core::{loads::parse_load_matrix, pipeline::optimize, plan::FloorPlan, craft::CraftOptions};
//!
//! let csv = "facility,A,B,C\nA,-,5,-\nB,-,-,1\nC,4,-,-\n";
//! let loads = parse_load_matrix(csv).unwrap();
//! let fp = FloorPlan::from_meters(42, 22, 20, 10, 2).unwrap();
//! let solution = optimize(&loads, &fp, &CraftOptions::default()).unwrap();
//! assert!(solution.trace.final_cost <= solution.trace.initial_cost);
//! ```

pub mod assign;
pub mod craft;
pub mod fixed;
pub mod loads;
pub mod oracle;
pub mod pipeline;
pub mod plan;

pub use assign::{Assignment, CostMatrix};
pub use craft::{CraftOptions, Move, MoveKind, MoveKinds, Trace};
pub use fixed::LoadMeters;
pub use loads::LoadMatrix;
pub use plan::{FloorPlan, Layout, Slot};
