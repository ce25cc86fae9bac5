//! Description files: header, meta, definitions and the data section.

use indexmap::IndexMap;

use crate::diagnostic::{Code, Diagnostic};
use crate::value::{RawMap, RawValue};

pub const LOCAL: &str = "$local";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Yaml,
    Json,
    /// JSON first, then YAML.
    #[default]
    Auto,
}

impl Format {
    /// Picks a format from a file extension; unknown extensions use `Auto`.
    pub fn from_path(path: &std::path::Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            Some("yaml" | "yml") => Format::Yaml,
            _ => Format::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ParseOptions {
    pub format: Format,
    /// Accept any `$dsdl-version` instead of only 0.5.x.
    pub allow_any_version: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawDocument {
    pub dsdl_version: String,
    pub imports: Vec<String>,
    pub meta: RawMap,
    /// Definition keys are kept verbatim, including any `[Parent]` suffix.
    pub defs: IndexMap<String, RawValue>,
    pub data: Option<RawDataSection>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawDataSection {
    pub sample_type: Option<RawValue>,
    pub sample_path: String,
    pub samples: Option<RawValue>,
    pub global_info_type: Option<RawValue>,
    pub global_info_path: Option<String>,
    pub global_info: Option<RawValue>,
}

impl RawDataSection {
    pub fn samples_are_local(&self) -> bool {
        self.sample_path == LOCAL
    }

    pub fn global_info_is_local(&self) -> bool {
        self.global_info_path.as_deref().unwrap_or(LOCAL) == LOCAL
    }
}

/// Reads text as a raw value tree. Syntax errors carry line and column.
pub fn parse_raw(text: &str, format: Format) -> Result<RawValue, Diagnostic> {
    match format {
        Format::Json => serde_json::from_str(text).map_err(json_error),
        Format::Yaml => serde_yaml::from_str(text).map_err(yaml_error),
        Format::Auto => {
            serde_json::from_str(text).or_else(|_| serde_yaml::from_str(text).map_err(yaml_error))
        }
    }
}

fn json_error(e: serde_json::Error) -> Diagnostic {
    Diagnostic::error(
        Code::Syntax,
        "",
        format!(
            "JSON syntax error at line {}, column {}: {e}",
            e.line(),
            e.column()
        ),
    )
}

fn yaml_error(e: serde_yaml::Error) -> Diagnostic {
    let msg = match e.location() {
        Some(loc) => format!(
            "YAML syntax error at line {}, column {}: {e}",
            loc.line(),
            loc.column()
        ),
        None => format!("YAML syntax error: {e}"),
    };
    Diagnostic::error(Code::Syntax, "", msg)
}

fn version_supported(v: &str) -> bool {
    v == "0.5"
        || v.strip_prefix("0.5.")
            .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
}

fn scalar_text(v: &RawValue) -> Option<String> {
    match v {
        RawValue::Str(s) => Some(s.clone()),
        RawValue::Int(i) => Some(i.to_string()),
        RawValue::Float(f) => Some(f.to_string()),
        _ => None,
    }
}

/// Parses a description or library file. Every error found is returned.
pub fn parse_document(text: &str, options: ParseOptions) -> Result<RawDocument, Vec<Diagnostic>> {
    let root = parse_raw(text, options.format).map_err(|d| vec![d])?;
    document_from_value(root, options)
}

pub fn document_from_value(
    root: RawValue,
    options: ParseOptions,
) -> Result<RawDocument, Vec<Diagnostic>> {
    let RawValue::Map(root) = root else {
        return Err(vec![Diagnostic::error(
            Code::MalformedDocument,
            "",
            format!(
                "a description file must be a mapping, found {}",
                root.kind_name()
            ),
        )]);
    };
    let mut errors = Vec::new();
    for key in root.duplicate_keys() {
        let code = if key.starts_with('$') {
            Code::MalformedDocument
        } else {
            Code::DuplicateDef
        };
        errors.push(Diagnostic::error(
            code,
            key,
            format!("key {key:?} appears more than once"),
        ));
    }

    let dsdl_version = match root.get("$dsdl-version") {
        None => {
            errors.push(Diagnostic::error(
                Code::VersionMissing,
                "",
                "the `$dsdl-version` header is required",
            ));
            String::new()
        }
        Some(v) => match scalar_text(v).filter(|s| !s.is_empty()) {
            None => {
                errors.push(Diagnostic::error(
                    Code::VersionMissing,
                    "$dsdl-version",
                    "`$dsdl-version` must be a non-empty string",
                ));
                String::new()
            }
            Some(s) => {
                if !options.allow_any_version && !version_supported(&s) {
                    errors.push(Diagnostic::error(
                        Code::VersionUnsupported,
                        "$dsdl-version",
                        format!("version {s:?} is not supported; accepted versions are 0.5.x"),
                    ));
                }
                s
            }
        },
    };

    let mut imports = Vec::new();
    let mut meta = RawMap::new();
    let mut defs: IndexMap<String, RawValue> = IndexMap::new();
    let mut data = None;

    let mut add_def = |name: &str, body: &RawValue, path: String, errors: &mut Vec<Diagnostic>| {
        if defs.contains_key(name) {
            errors.push(Diagnostic::error(
                Code::DuplicateDef,
                path,
                format!("definition {name:?} is declared more than once in this file"),
            ));
        } else {
            defs.insert(name.to_owned(), body.clone());
        }
    };

    for (key, value) in root.iter() {
        match key {
            "$dsdl-version" => {}
            "$import" => match value {
                RawValue::Str(s) => imports.push(s.clone()),
                RawValue::List(items) => {
                    for (i, item) in items.iter().enumerate() {
                        match item.as_str() {
                            Some(s) if !s.is_empty() => imports.push(s.to_owned()),
                            _ => errors.push(Diagnostic::error(
                                Code::MalformedDocument,
                                format!("$import/{i}"),
                                "import entries must be non-empty strings",
                            )),
                        }
                    }
                }
                RawValue::Null => {}
                other => errors.push(Diagnostic::error(
                    Code::MalformedDocument,
                    "$import",
                    format!(
                        "`$import` must be a list of names, found {}",
                        other.kind_name()
                    ),
                )),
            },
            k if k.starts_with('$') => errors.push(Diagnostic::error(
                Code::UnknownDirective,
                k,
                format!("unknown directive {k:?}; the `$` prefix is reserved"),
            )),
            "meta" => match value {
                RawValue::Map(m) => meta = m.clone(),
                RawValue::Null => {}
                other => errors.push(Diagnostic::error(
                    Code::MalformedDocument,
                    "meta",
                    format!("`meta` must be a mapping, found {}", other.kind_name()),
                )),
            },
            "defs" => match value {
                RawValue::Map(m) => {
                    for (name, body) in m.iter() {
                        add_def(name, body, format!("defs/{name}"), &mut errors);
                    }
                }
                RawValue::Null => {}
                other => errors.push(Diagnostic::error(
                    Code::MalformedDocument,
                    "defs",
                    format!("`defs` must be a mapping, found {}", other.kind_name()),
                )),
            },
            "data" => match parse_data_section(value) {
                Ok(section) => data = Some(section),
                Err(mut d) => errors.append(&mut d),
            },
            // Library files place definitions at top level.
            name => add_def(name, value, name.to_owned(), &mut errors),
        }
    }

    if errors.is_empty() {
        Ok(RawDocument {
            dsdl_version,
            imports,
            meta,
            defs,
            data,
        })
    } else {
        Err(errors)
    }
}

fn optional_string(map: &RawMap, key: &str, errors: &mut Vec<Diagnostic>) -> Option<String> {
    match map.get(key) {
        None | Some(RawValue::Null) => None,
        Some(RawValue::Str(s)) => Some(s.clone()),
        Some(other) => {
            errors.push(Diagnostic::error(
                Code::MalformedDataSection,
                format!("data/{key}"),
                format!("`{key}` must be a string, found {}", other.kind_name()),
            ));
            None
        }
    }
}

fn parse_data_section(value: &RawValue) -> Result<RawDataSection, Vec<Diagnostic>> {
    let RawValue::Map(map) = value else {
        return Err(vec![Diagnostic::error(
            Code::MalformedDataSection,
            "data",
            format!("`data` must be a mapping, found {}", value.kind_name()),
        )]);
    };
    let mut errors = Vec::new();
    let sample_path =
        optional_string(map, "sample-path", &mut errors).unwrap_or_else(|| LOCAL.to_owned());
    let global_info_path = optional_string(map, "global-info-path", &mut errors);
    let present = |k: &str| map.get(k).filter(|v| !v.is_null()).cloned();
    let section = RawDataSection {
        sample_type: present("sample-type"),
        samples: present("samples"),
        global_info_type: present("global-info-type"),
        global_info: present("global-info"),
        sample_path,
        global_info_path,
    };
    if section.samples_are_local() && section.samples.is_none() && map.contains_key("sample-type") {
        errors.push(Diagnostic::error(
            Code::MalformedDataSection,
            "data/samples",
            "`samples` is required when `sample-path` is `$local`",
        ));
    }
    if errors.is_empty() {
        Ok(section)
    } else {
        Err(errors)
    }
}
