//! Composition of import resolution, cycle checking and instantiation.

use std::path::Path;

use crate::diagnostic::{has_errors, Code, Diagnostic};
use crate::model::builtins::builtin;
use crate::model::registry::DefinitionRegistry;
use crate::resolve::cycle::check_acyclic;
use crate::resolve::instantiate::{Bindings, ConcreteType, Instantiator};
use crate::resolve::library::{resolve_imports, LibraryEnvironment};
use crate::syntax::{parse_sample_type_spec, RawDocument, TypeExpr};
use crate::value::RawMap;

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedSchema {
    pub sample_type: Option<ConcreteType>,
    pub sample_type_expr: Option<TypeExpr>,
    pub global_info_type: Option<ConcreteType>,
    pub registry: DefinitionRegistry,
    pub meta: RawMap,
}

/// Runs every resolution stage. Returns `None` when a stage fails with
/// errors; later stages are skipped.
pub fn resolve_schema(
    doc: &RawDocument,
    file: Option<&Path>,
    env: &LibraryEnvironment,
    media_classes: &[String],
) -> (Option<ResolvedSchema>, Vec<Diagnostic>) {
    let (registry, mut diags) = resolve_imports(doc, file, env);
    if has_errors(&diags) {
        return (None, diags);
    }
    for name in registry.names() {
        if builtin(name).is_some() || media_classes.iter().any(|m| m == name) {
            diags.push(
                Diagnostic::warning(
                    Code::BuiltinShadow,
                    format!("defs/{name}"),
                    format!(
                        "definition {name:?} has the name of a builtin type; the builtin is used"
                    ),
                )
                .or_source(file),
            );
        }
    }
    let cycles = check_acyclic(&registry);
    if !cycles.is_empty() {
        diags.extend(cycles.into_iter().map(|d| d.or_source(file)));
        return (None, diags);
    }

    let mut inst = Instantiator::new(&registry).with_media_classes(media_classes.iter().cloned());
    let mut sample_type = None;
    let mut sample_type_expr = None;
    let mut global_info_type = None;
    if let Some(data) = &doc.data {
        match &data.sample_type {
            None => diags.push(
                Diagnostic::error(
                    Code::MalformedDataSection,
                    "data",
                    "the data section requires `sample-type`",
                )
                .or_source(file),
            ),
            Some(raw) => match parse_sample_type_spec(raw, "data/sample-type").and_then(|e| {
                Ok((
                    inst.instantiate(&e, &Bindings::new(), "data/sample-type")?,
                    e,
                ))
            }) {
                Ok((t, e)) => {
                    sample_type = Some(t);
                    sample_type_expr = Some(e);
                }
                Err(d) => diags.push(d.or_source(file)),
            },
        }
        if let Some(raw) = &data.global_info_type {
            match parse_sample_type_spec(raw, "data/global-info-type")
                .and_then(|e| inst.instantiate(&e, &Bindings::new(), "data/global-info-type"))
            {
                Ok(t) => global_info_type = Some(t),
                Err(d) => diags.push(d.or_source(file)),
            }
        }
    }
    diags.extend(inst.take_notes().into_iter().map(|d| d.or_source(file)));
    if has_errors(&diags) {
        return (None, diags);
    }
    drop(inst);
    (
        Some(ResolvedSchema {
            sample_type,
            sample_type_expr,
            global_info_type,
            registry,
            meta: doc.meta.clone(),
        }),
        diags,
    )
}
