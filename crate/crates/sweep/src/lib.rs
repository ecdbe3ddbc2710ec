//! Scenario files, single-point CRLB runs and parameter sweeps over SNR,
//! subcarrier spacing and grid size, with CSV and SVG output.

pub mod error;
pub mod output;
pub mod plot;
pub mod run;
pub mod scenario;
pub mod selfcheck;

pub use error::SweepError;
pub use output::{emit_csv, write_csv, CSV_HEADER};
pub use plot::{emit_plot, PlotColumn};
pub use run::{run_point, run_sweep, PointError, ResultRow, SchemeOutcome};
pub use scenario::{Axis, AxisPoint, PathSpec, Scenario};
