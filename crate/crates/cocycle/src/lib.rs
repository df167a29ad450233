//! Files, reports and the command line around `cocycle-core`.
//!
//! Knots come from the built-in catalog or from JSON control-point files;
//! cycles are named by kind and constituent knots. A report bundles the
//! sweep result with the closed-form prediction and the event
//! classification of each drag path.

pub mod config;
pub mod diagram_io;
pub mod knot_file;
pub mod report;

pub use config::Config;
pub use knot_file::{load_knot, resolve_knot, KnotFile};
pub use report::{run_report, CocycleReport, CycleSpec};
