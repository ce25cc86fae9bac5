//! Validation of raw values against concrete types.

pub mod dataset;
pub mod datetime;
pub mod engine;
pub mod external;
pub mod label;
pub mod typed;

pub use dataset::{validate_dataset, validate_samples, DatasetReport, Execution, ValidateOptions};
pub use engine::{validate_value, ValueOptions};
pub use external::{load_external_global_info, load_external_samples};
pub use label::{parse_label, validate_label, LabelSyntax};
pub use typed::{KeypointValue, MediaRef, TypedValue};
