//! The whole parse → resolve → validate run for one description file.

use std::path::{Path, PathBuf};

use crate::diagnostic::{has_errors, Code, Counts, Diagnostic};
use crate::resolve::{load_document, resolve_schema, LibraryEnvironment, ResolvedSchema};
use crate::syntax::RawDocument;
use crate::validate::{validate_dataset, DatasetReport, ValidateOptions};

#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    pub library: LibraryEnvironment,
    pub validate: ValidateOptions,
    /// Extension media classes accepted as type names.
    pub media_classes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub file: PathBuf,
    /// `None` when parsing or resolution failed.
    pub schema: Option<ResolvedSchema>,
    pub dataset: Option<DatasetReport>,
    /// Every finding, schema stages first, then dataset findings.
    pub diagnostics: Vec<Diagnostic>,
    pub counts: Counts,
}

impl CheckOutcome {
    pub fn has_errors(&self) -> bool {
        self.counts.errors > 0
    }
}

/// The description file could not be read at all.
#[derive(Debug, thiserror::Error)]
#[error("cannot read {}: {source}", path.display())]
pub struct ReadError {
    pub path: PathBuf,
    #[source]
    pub source: std::io::Error,
}

/// Result of parsing and schema resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedFile {
    pub document: Option<RawDocument>,
    pub schema: Option<ResolvedSchema>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Runs parsing and schema resolution only.
pub fn resolve_file(path: &Path, options: &PipelineOptions) -> Result<ResolvedFile, ReadError> {
    if let Err(source) = std::fs::metadata(path) {
        return Err(ReadError {
            path: path.to_owned(),
            source,
        });
    }
    let doc = match load_document(path, options.library.parse_options) {
        Ok(doc) => doc,
        Err(diags) => {
            if let Some(d) = diags.iter().find(|d| d.code == Code::Io) {
                return Err(ReadError {
                    path: path.to_owned(),
                    source: std::io::Error::other(d.message.clone()),
                });
            }
            return Ok(ResolvedFile {
                document: None,
                schema: None,
                diagnostics: diags,
            });
        }
    };
    let (schema, diags) =
        resolve_schema(&doc, Some(path), &options.library, &options.media_classes);
    Ok(ResolvedFile {
        document: Some(doc),
        schema,
        diagnostics: diags,
    })
}

pub fn check_file(path: &Path, options: &PipelineOptions) -> Result<CheckOutcome, ReadError> {
    let ResolvedFile {
        document,
        schema,
        mut diagnostics,
    } = resolve_file(path, options)?;
    let mut dataset = None;
    if let (Some(schema), Some(doc)) = (&schema, &document) {
        if let Some(data) = &doc.data {
            if !has_errors(&diagnostics) {
                let report =
                    validate_dataset(schema, data, path.parent(), Some(path), options.validate);
                diagnostics.extend(report.diagnostics.iter().cloned());
                dataset = Some(report);
            }
        }
    }
    let counts = Counts::tally(&diagnostics);
    Ok(CheckOutcome {
        file: path.to_owned(),
        schema,
        dataset,
        diagnostics,
        counts,
    })
}
