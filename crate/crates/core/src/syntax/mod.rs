//! Text-level parsing: description files and type expressions.

pub mod document;
pub mod type_expr;

pub use document::{
    parse_document, parse_raw, Format, ParseOptions, RawDataSection, RawDocument, LOCAL,
};
pub use type_expr::{
    is_identifier, parse_sample_type_spec, parse_type_expression, ArgValue, GrammarError, TypeArg,
    TypeExpr,
};
