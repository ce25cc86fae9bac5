//! Located, coded findings produced by every stage of the pipeline.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Note,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Note => "note",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

macro_rules! codes {
    ($($(#[$doc:meta])* $variant:ident => $text:literal,)*) => {
        /// Stable diagnostic identifiers. The textual form is part of the
        /// machine-readable report and must not change between releases.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Code {
            $($(#[$doc])* $variant,)*
        }

        impl Code {
            pub const ALL: &'static [Code] = &[$(Code::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(Code::$variant => $text,)*
                }
            }

            pub fn parse(text: &str) -> Option<Code> {
                match text {
                    $($text => Some(Code::$variant),)*
                    _ => None,
                }
            }
        }
    };
}

codes! {
    /// Malformed JSON or YAML text.
    Syntax => "SYNTAX",
    /// Type-expression grammar violation.
    Grammar => "GRAMMAR",
    VersionMissing => "VERSION_MISSING",
    VersionUnsupported => "VERSION_UNSUPPORTED",
    UnknownDirective => "UNKNOWN_DIRECTIVE",
    /// Structural problem at document level (wrong section kinds).
    MalformedDocument => "MALFORMED_DOCUMENT",
    DuplicateDef => "DUPLICATE_DEF",
    MissingTypeKey => "MISSING_TYPE_KEY",
    UnknownDefKind => "UNKNOWN_DEF_KIND",
    MalformedDef => "MALFORMED_DEF",
    OptionalUnknownField => "OPTIONAL_UNKNOWN_FIELD",
    UnboundParam => "UNBOUND_PARAM",
    /// A definition reuses the name of a builtin type; the builtin wins.
    BuiltinShadow => "BUILTIN_SHADOW",
    ClassNotFound => "CLASS_NOT_FOUND",
    ClassIndexRange => "CLASS_INDEX_RANGE",
    ImportOverwrite => "IMPORT_OVERWRITE",
    ImportNotFound => "IMPORT_NOT_FOUND",
    ImportCycle => "IMPORT_CYCLE",
    CycleDetected => "CYCLE_DETECTED",
    UnknownType => "UNKNOWN_TYPE",
    MissingParam => "MISSING_PARAM",
    ExtraParam => "EXTRA_PARAM",
    ArgKind => "ARG_KIND",
    /// An accepted alternate parameter spelling was canonicalized.
    ParamAlias => "PARAM_ALIAS",
    MalformedDataSection => "MALFORMED_DATA_SECTION",
    TypeMismatch => "TYPE_MISMATCH",
    Arity => "ARITY",
    Range => "RANGE",
    FieldMissing => "FIELD_MISSING",
    FieldUnknown => "FIELD_UNKNOWN",
    DateFormat => "DATE_FORMAT",
    LocSyntax => "LOC_SYNTAX",
    LabelSyntax => "LABEL_SYNTAX",
    LabelDomainMismatch => "LABEL_DOMAIN_MISMATCH",
    FileNotFound => "FILE_NOT_FOUND",
    MissingSamplesKey => "MISSING_SAMPLES_KEY",
    MalformedSamples => "MALFORMED_SAMPLES",
    /// Validation of a channel stopped at the error limit.
    Truncated => "TRUNCATED",
    DataRootMissing => "DATA_ROOT_MISSING",
    AliasUndefined => "ALIAS_UNDEFINED",
    IdMapperMissing => "ID_MAPPER_MISSING",
    IdNotFound => "ID_NOT_FOUND",
    PathEscape => "PATH_ESCAPE",
    RegisterConflict => "REGISTER_CONFLICT",
    MediaOverride => "MEDIA_OVERRIDE",
    UnknownMediaClass => "UNKNOWN_MEDIA_CLASS",
    LoaderFailure => "LOADER_FAILURE",
    Io => "IO_ERROR",
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Code {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Code::parse(&text).ok_or_else(|| serde::de::Error::custom(format!("unknown code {text}")))
    }
}

/// A single finding. `path` is a slash-separated location into the document
/// or the data, e.g. `samples/3/objects/0/bbox`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("{severity} {code} {}: {message}", display_path(.path))]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub path: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

fn display_path(path: &str) -> &str {
    if path.is_empty() {
        "-"
    } else {
        path
    }
}

impl Diagnostic {
    pub fn new(
        code: Code,
        severity: Severity,
        path: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            code,
            severity,
            path: path.into(),
            message: message.into(),
            file: None,
        }
    }

    pub fn error(code: Code, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(code, Severity::Error, path, message)
    }

    pub fn warning(code: Code, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(code, Severity::Warning, path, message)
    }

    pub fn note(code: Code, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(code, Severity::Note, path, message)
    }

    pub fn with_source(mut self, source: impl Into<PathBuf>) -> Self {
        self.file = Some(source.into());
        self
    }

    /// Fills in the source file if none is set yet.
    pub fn or_source(mut self, source: Option<&std::path::Path>) -> Self {
        if self.file.is_none() {
            self.file = source.map(PathBuf::from);
        }
        self
    }

    /// Prefixes the location with `prefix`.
    pub fn under(mut self, prefix: &str) -> Self {
        self.path = join_path(prefix, &self.path);
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `severity code path message` line used by text output.
    pub fn to_line(&self) -> String {
        format!(
            "{} {} {} {}",
            self.severity,
            self.code,
            display_path(&self.path),
            self.message
        )
    }
}

/// Joins two slash-separated location fragments.
pub fn join_path(prefix: &str, rest: &str) -> String {
    match (prefix.is_empty(), rest.is_empty()) {
        (true, _) => rest.to_owned(),
        (_, true) => prefix.to_owned(),
        _ => format!("{prefix}/{rest}"),
    }
}

/// Per-severity totals plus a per-code breakdown.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub errors: usize,
    pub warnings: usize,
    pub notes: usize,
    pub by_code: BTreeMap<String, usize>,
}

impl Counts {
    pub fn tally<'a>(diags: impl IntoIterator<Item = &'a Diagnostic>) -> Self {
        let mut c = Counts::default();
        for d in diags {
            c.add(d);
        }
        c
    }

    pub fn add(&mut self, d: &Diagnostic) {
        match d.severity {
            Severity::Error => self.errors += 1,
            Severity::Warning => self.warnings += 1,
            Severity::Note => self.notes += 1,
        }
        *self.by_code.entry(d.code.as_str().to_owned()).or_default() += 1;
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
