//! Parameter sweeps over `(g, L/T, D/T)`, their CSV/JSON output and
//! level-set extraction.

pub mod config;
pub mod contour;
pub mod emit;
pub mod run;

pub use config::{parse_config, Axis, SweepSpec, Variable};
pub use contour::{contour_boundary, Contour, Polyline};
pub use emit::{emit_csv, emit_json, rows_from_csv, rows_to_csv, rows_to_json, CSV_HEADER};
pub use run::{compute_row, run_sweep, SweepRow};
