//! Time-series econometrics for cointegration analysis.
//!
//! * [`series`]: dated series, log and difference transforms, alignment.
//! * [`regression`]: OLS via pivoted QR with classical standard errors.
//! * [`unit_root`] and [`critical`]: ADF tests and response-surface critical values.
//! * [`cointegration`]: Engle-Granger tests, misuse guard, specification grid.
//! * [`ecm`]: levels regression, error-correction ARDL model, control audits.
//! * [`montecarlo`]: seeded DGPs and rejection-frequency experiments.

pub mod cointegration;
pub mod critical;
pub mod ecm;
pub mod error;
pub mod montecarlo;
pub mod regression;
pub mod series;
pub mod unit_root;

pub use cointegration::{
    engle_granger_test, run_spec_grid, CointegrationReport, EgSpec, GridReport, GuardWarning,
    Normalization, Transform, WarningCode,
};
pub use critical::{critical_value, CriticalValueTable, DeterministicSpec, Level};
pub use ecm::{audit_controls, estimate_ecm, estimate_levels, AuditReport, EcmFit, EcmSpec};
pub use error::{Error, Result};
pub use montecarlo::{
    generate, run_false_positive_experiment, run_size_experiment, DgpKind, DgpSpec,
    ExperimentResult, FalsePositiveConfig, SizeConfig, TestConfig,
};
pub use regression::{ols_fit, DesignMatrix, OlsFit};
pub use series::{align, Frequency, Period, TimeSeries, TransformKind, TransformTag};
pub use unit_root::{adf_test, UnitRootReport};
