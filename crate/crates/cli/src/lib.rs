//! Batch runner for boosted spin-entanglement experiments: concurrence
//! sweeps, invariance suites and plot-data export.

pub mod config;
pub mod invariance;
pub mod plotdata;
pub mod sweep;

pub use config::{ConfigError, SweepConfig, XValue, XiGrid};
pub use invariance::{run_invariance_suite, InvarianceError, InvarianceSuiteReport, SuiteOptions, SuiteVariant};
pub use plotdata::{emit_plot_data, PlotDataError, Series};
pub use sweep::{run_fig1_sweep, SweepError, SweepOutcome, SweepRecord};
