//! Classification of raw definitions and the merged definition table.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use indexmap::IndexMap;

use crate::diagnostic::{Code, Diagnostic};
use crate::model::class_domain::ClassDomain;
use crate::model::struct_class::StructClass;
use crate::syntax::{is_identifier, parse_sample_type_spec};
use crate::value::RawValue;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Definition {
    Domain(Arc<ClassDomain>),
    Struct(Arc<StructClass>),
}

impl Definition {
    pub fn kind(&self) -> &'static str {
        match self {
            Definition::Domain(_) => "class_domain",
            Definition::Struct(_) => "struct",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Provenance {
    /// File the definition came from; `None` for in-memory documents.
    pub file: Option<PathBuf>,
    /// Position of the defining file in load order (0 = first loaded).
    pub load_order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub definition: Definition,
    pub provenance: Provenance,
}

/// Name → definition, in insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DefinitionRegistry {
    entries: IndexMap<String, Entry>,
}

impl DefinitionRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces; returns the replaced entry.
    pub fn insert(&mut self, name: String, entry: Entry) -> Option<Entry> {
        match self.entries.get_mut(&name) {
            Some(slot) => Some(std::mem::replace(slot, entry)),
            None => {
                self.entries.insert(name, entry);
                None
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.get(name)
    }

    pub fn domain(&self, name: &str) -> Option<&Arc<ClassDomain>> {
        match self.entries.get(name).map(|e| &e.definition) {
            Some(Definition::Domain(d)) => Some(d),
            _ => None,
        }
    }

    pub fn structure(&self, name: &str) -> Option<&Arc<StructClass>> {
        match self.entries.get(name).map(|e| &e.definition) {
            Some(Definition::Struct(s)) => Some(s),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Entry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Splits `Name[Parent1, Parent2]` into the name and its parent list.
pub fn split_definition_key(key: &str) -> Result<(String, Vec<String>), String> {
    let (name, parents) = match key.find('[') {
        Some(open) => {
            let inner = key[open + 1..]
                .strip_suffix(']')
                .ok_or_else(|| format!("unbalanced bracket in definition name {key:?}"))?;
            let parents: Vec<String> = inner.split(',').map(|p| p.trim().to_owned()).collect();
            if parents.iter().any(|p| !is_identifier(p)) {
                return Err(format!("malformed parent list in definition name {key:?}"));
            }
            (key[..open].trim(), parents)
        }
        None => (key, Vec::new()),
    };
    if !is_identifier(name) {
        return Err(format!("definition name {name:?} is not an identifier"));
    }
    Ok((name.to_owned(), parents))
}

/// Classifies every raw definition by its `$def` discriminator. Entries that
/// fail are omitted from the result and reported.
pub fn build_definitions(
    defs: &IndexMap<String, RawValue>,
    file: Option<&Path>,
    load_order: usize,
) -> (DefinitionRegistry, Vec<Diagnostic>) {
    let mut reg = DefinitionRegistry::new();
    let mut diags = Vec::new();
    for (key, body) in defs {
        let path = format!("defs/{key}");
        let (name, parents) = match split_definition_key(key) {
            Ok(v) => v,
            Err(msg) => {
                diags.push(Diagnostic::error(Code::MalformedDef, path, msg).or_source(file));
                continue;
            }
        };
        let (def, mut d) = build_one(&name, parents, body, &path);
        diags.extend(d.drain(..).map(|x| x.or_source(file)));
        if let Some(def) = def {
            let entry = Entry {
                definition: def,
                provenance: Provenance {
                    file: file.map(Path::to_path_buf),
                    load_order,
                },
            };
            if reg.insert(name.clone(), entry).is_some() {
                diags.push(
                    Diagnostic::error(
                        Code::DuplicateDef,
                        path,
                        format!("definition {name:?} is declared more than once"),
                    )
                    .or_source(file),
                );
            }
        }
    }
    (reg, diags)
}

fn build_one(
    name: &str,
    parents: Vec<String>,
    body: &RawValue,
    path: &str,
) -> (Option<Definition>, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let Some(map) = body.as_map() else {
        diags.push(Diagnostic::error(
            Code::MalformedDef,
            path,
            format!(
                "definition body must be a mapping, found {}",
                body.kind_name()
            ),
        ));
        return (None, diags);
    };
    match map.get("$def").and_then(RawValue::as_str) {
        Some("class_domain") => {
            for key in map
                .keys()
                .filter(|k| !matches!(*k, "$def" | "classes" | "skeleton"))
            {
                diags.push(Diagnostic::warning(
                    Code::MalformedDef,
                    format!("{path}/{key}"),
                    format!("key {key:?} is not part of a class domain and is ignored"),
                ));
            }
            let classes = match map.get("classes") {
                Some(RawValue::List(items)) => {
                    let mut out = Vec::with_capacity(items.len());
                    for (i, item) in items.iter().enumerate() {
                        match item.as_str() {
                            Some(s) => out.push(s.to_owned()),
                            None => diags.push(Diagnostic::error(
                                Code::MalformedDef,
                                format!("{path}/classes/{i}"),
                                format!("class names must be strings, found {}", item.kind_name()),
                            )),
                        }
                    }
                    out
                }
                Some(other) => {
                    diags.push(Diagnostic::error(
                        Code::MalformedDef,
                        format!("{path}/classes"),
                        format!("`classes` must be a list, found {}", other.kind_name()),
                    ));
                    return (None, diags);
                }
                None => {
                    diags.push(Diagnostic::error(
                        Code::MalformedDef,
                        path,
                        "a class domain requires a `classes` list",
                    ));
                    return (None, diags);
                }
            };
            let skeleton = match map.get("skeleton") {
                None | Some(RawValue::Null) => Vec::new(),
                Some(RawValue::List(edges)) => {
                    let mut out = Vec::with_capacity(edges.len());
                    for (i, e) in edges.iter().enumerate() {
                        let pair = e.as_list().and_then(|p| match p {
                            [a, b] => Some((a.as_integer()?, b.as_integer()?)),
                            _ => None,
                        });
                        match pair {
                            Some((a, b)) if a > 0 && b > 0 => out.push((a as usize, b as usize)),
                            Some((a, b)) => out.push((a.max(0) as usize, b.max(0) as usize)),
                            None => diags.push(Diagnostic::error(
                                Code::MalformedDef,
                                format!("{path}/skeleton/{i}"),
                                "skeleton edges must be pairs of integers",
                            )),
                        }
                    }
                    out
                }
                Some(other) => {
                    diags.push(Diagnostic::error(
                        Code::MalformedDef,
                        format!("{path}/skeleton"),
                        format!("`skeleton` must be a list, found {}", other.kind_name()),
                    ));
                    Vec::new()
                }
            };
            if diags.iter().any(Diagnostic::is_error) {
                return (None, diags);
            }
            match ClassDomain::new(name, parents, &classes, skeleton) {
                Ok(d) => (Some(Definition::Domain(Arc::new(d))), diags),
                Err(errs) => {
                    diags.extend(errs.into_iter().map(|e| e.under(path)));
                    (None, diags)
                }
            }
        }
        Some("struct") => {
            if !parents.is_empty() {
                diags.push(Diagnostic::error(
                    Code::MalformedDef,
                    path,
                    "only class domains may declare parents",
                ));
            }
            for key in map
                .keys()
                .filter(|k| !matches!(*k, "$def" | "$params" | "$fields" | "$optional"))
            {
                diags.push(Diagnostic::warning(
                    Code::MalformedDef,
                    format!("{path}/{key}"),
                    format!("key {key:?} is not part of a struct and is ignored"),
                ));
            }
            let params = string_list(map.get("$params"), &format!("{path}/$params"), &mut diags);
            let optional = string_list(
                map.get("$optional"),
                &format!("{path}/$optional"),
                &mut diags,
            );
            let Some(raw_fields) = map.get("$fields") else {
                diags.push(Diagnostic::error(
                    Code::MalformedDef,
                    path,
                    "a struct requires `$fields`",
                ));
                return (None, diags);
            };
            let Some(raw_fields) = raw_fields.as_map() else {
                diags.push(Diagnostic::error(
                    Code::MalformedDef,
                    format!("{path}/$fields"),
                    format!(
                        "`$fields` must be a mapping, found {}",
                        raw_fields.kind_name()
                    ),
                ));
                return (None, diags);
            };
            let mut fields = IndexMap::new();
            for (fname, fspec) in raw_fields.iter() {
                let fpath = format!("{path}/$fields/{fname}");
                if fields.contains_key(fname) {
                    diags.push(Diagnostic::error(
                        Code::MalformedDef,
                        fpath,
                        format!("field {fname:?} is declared more than once"),
                    ));
                    continue;
                }
                match parse_sample_type_spec(fspec, &fpath) {
                    Ok(expr) => {
                        for p in expr.param_refs() {
                            if !params.iter().any(|q| q == p) {
                                diags.push(Diagnostic::error(
                                    Code::UnboundParam,
                                    fpath.clone(),
                                    format!("`${p}` is not a parameter of {name}"),
                                ));
                            }
                        }
                        fields.insert(fname.to_owned(), expr);
                    }
                    Err(d) => diags.push(d),
                }
            }
            for (i, o) in optional.iter().enumerate() {
                if !fields.contains_key(o) && !raw_fields.contains_key(o) {
                    diags.push(Diagnostic::error(
                        Code::OptionalUnknownField,
                        format!("{path}/$optional/{i}"),
                        format!("optional field {o:?} is not declared in `$fields`"),
                    ));
                }
            }
            let mut seen = std::collections::HashSet::new();
            for p in &params {
                if !is_identifier(p) || !seen.insert(p) {
                    diags.push(Diagnostic::error(
                        Code::MalformedDef,
                        format!("{path}/$params"),
                        format!("parameter {p:?} is invalid or repeated"),
                    ));
                }
            }
            if diags.iter().any(Diagnostic::is_error) {
                return (None, diags);
            }
            let s = StructClass {
                name: name.to_owned(),
                params,
                fields,
                optional,
            };
            (Some(Definition::Struct(Arc::new(s))), diags)
        }
        Some(other) => {
            diags.push(Diagnostic::error(
                Code::UnknownDefKind,
                format!("{path}/$def"),
                format!("unknown definition kind {other:?}; expected struct or class_domain"),
            ));
            (None, diags)
        }
        None => {
            diags.push(Diagnostic::error(
                Code::MalformedDef,
                path,
                "definition lacks a string `$def` discriminator",
            ));
            (None, diags)
        }
    }
}

fn string_list(raw: Option<&RawValue>, path: &str, diags: &mut Vec<Diagnostic>) -> Vec<String> {
    match raw {
        None | Some(RawValue::Null) => Vec::new(),
        Some(RawValue::Str(s)) => vec![s.clone()],
        Some(RawValue::List(items)) => items
            .iter()
            .enumerate()
            .filter_map(|(i, v)| match v.as_str() {
                Some(s) => Some(s.to_owned()),
                None => {
                    diags.push(Diagnostic::error(
                        Code::MalformedDef,
                        format!("{path}/{i}"),
                        format!("expected a string, found {}", v.kind_name()),
                    ));
                    None
                }
            })
            .collect(),
        Some(other) => {
            diags.push(Diagnostic::error(
                Code::MalformedDef,
                path,
                format!("expected a list of strings, found {}", other.kind_name()),
            ));
            Vec::new()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_raw;
    use crate::syntax::Format;

    fn defs(yaml: &str) -> IndexMap<String, RawValue> {
        let v = parse_raw(yaml, Format::Yaml).unwrap();
        v.as_map()
            .unwrap()
            .iter()
            .map(|(k, v)| (k.to_owned(), v.clone()))
            .collect()
    }

    #[test]
    fn get_started_definitions() {
        let d = defs(
            "MyClassDom:\n  $def: class_domain\n  classes: [dog, cat, fish, tiger]\n\
             ImageClassificationSample:\n  $def: struct\n  $fields:\n    image: Image\n    label: Label[dom=MyClassDom]\n",
        );
        let (reg, diags) = build_definitions(&d, None, 0);
        assert!(diags.is_empty(), "{diags:?}");
        let dom = reg.domain("MyClassDom").unwrap();
        assert_eq!(
            dom.classes
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>(),
            ["dog", "cat", "fish", "tiger"]
        );
        let s = reg.structure("ImageClassificationSample").unwrap();
        assert_eq!(s.fields["label"].render(), "Label[dom=MyClassDom]");
    }

    #[test]
    fn parametric_struct() {
        let d = defs(
            "ObjectDetectionSample:\n  $def: struct\n  $params: ['cdom']\n  $fields:\n    image: Image\n    objects: List[etype=LocalObjectEntry[cdom=$cdom]]\n",
        );
        let (reg, diags) = build_definitions(&d, None, 0);
        assert!(diags.is_empty());
        assert_eq!(
            reg.structure("ObjectDetectionSample").unwrap().params,
            ["cdom"]
        );
    }

    #[test]
    fn definition_errors() {
        let code = |yaml: &str| build_definitions(&defs(yaml), None, 0).1[0].code;
        assert_eq!(
            code("S:\n  $def: struct\n  $fields: {label: Int}\n  $optional: ['labl']\n"),
            Code::OptionalUnknownField
        );
        assert_eq!(
            code("S:\n  $def: struct\n  $fields: {x: 'Label[dom=$d]'}\n"),
            Code::UnboundParam
        );
        assert_eq!(code("S:\n  $def: enum\n"), Code::UnknownDefKind);
        assert_eq!(code("S:\n  $def: struct\n"), Code::MalformedDef);
        assert_eq!(code("D:\n  $def: class_domain\n"), Code::MalformedDef);
        assert_eq!(
            code("D:\n  $def: class_domain\n  classes: [a, b]\n  skeleton: [[1, 3]]\n"),
            Code::MalformedDef
        );
    }

    #[test]
    fn parents_on_key() {
        let d = defs(
            "KpDom[BaseDom]:\n  $def: class_domain\n  classes: ['nose[person]']\n  skeleton: []\n",
        );
        let (reg, diags) = build_definitions(&d, None, 0);
        assert!(diags.is_empty());
        assert_eq!(reg.domain("KpDom").unwrap().parents, ["BaseDom"]);
    }

    #[test]
    fn idempotent() {
        let d = defs("D:\n  $def: class_domain\n  classes: [a, b.c]\n");
        assert_eq!(
            build_definitions(&d, None, 0),
            build_definitions(&d, None, 0)
        );
    }
}
