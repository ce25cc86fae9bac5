//! Definable entities, the builtin inventory and the definition registry.

pub mod builtins;
pub mod class_domain;
pub mod registry;
pub mod struct_class;

pub use builtins::{
    builtin, is_media_builtin, BuiltinSignature, ParamKind, ParamSpec, Shape, BUILTINS,
};
pub use class_domain::{
    lookup_class, render_index_path, ClassDomain, ClassPath, ClassRef, Selector,
};
pub use registry::{build_definitions, Definition, DefinitionRegistry, Entry, Provenance};
pub use struct_class::StructClass;
