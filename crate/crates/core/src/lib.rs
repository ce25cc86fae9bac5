//! Parser, type checker and validation engine for DSDL dataset description
//! files.
//!
//! The pipeline is `parse_document` → `resolve_schema` → `validate_dataset`.
//! Each stage reports [`Diagnostic`]s with a stable code and a slash-separated
//! location.

pub mod diagnostic;
pub mod locator;
pub mod model;
pub mod pipeline;
pub mod resolve;
pub mod stats;
pub mod syntax;
pub mod validate;
pub mod value;

pub use diagnostic::{Code, Counts, Diagnostic, Severity};
pub use value::{RawMap, RawValue};
