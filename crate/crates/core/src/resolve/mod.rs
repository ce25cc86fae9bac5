//! Import resolution, cycle detection and parameter binding.

pub mod cycle;
pub mod instantiate;
pub mod library;
pub mod schema;

pub use cycle::{check_acyclic, reference_graph};
pub use instantiate::{
    instantiate_type, substitute, AngleMeasure, Bindings, ConcreteStruct, ConcreteType,
    Instantiator, RotatedMode,
};
pub use library::{load_document, resolve_imports, LibraryEnvironment, LIBRARY_PATH_VAR};
pub use schema::{resolve_schema, ResolvedSchema};
