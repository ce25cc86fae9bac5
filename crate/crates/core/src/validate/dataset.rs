//! Dataset-level validation: every sample plus the global info.
//!
//! Samples are independent, so they are validated in chunks that may run
//! in parallel. Results are always assembled in document order, which keeps
//! the report identical across execution modes.

use std::path::{Path, PathBuf};

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::diagnostic::{Code, Counts, Diagnostic};
use crate::resolve::instantiate::ConcreteType;
use crate::resolve::schema::ResolvedSchema;
use crate::syntax::RawDataSection;
use crate::validate::engine::{validate_value, ValueOptions};
use crate::validate::external::{external_path, load_external_global_info, load_external_samples};
use crate::validate::typed::TypedValue;
use crate::value::RawValue;

/// Samples validated per batch; bounds the work wasted past `max_errors`.
const CHUNK: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is on, else sequential.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ValidateOptions {
    pub strict: bool,
    /// Stop a channel once this many errors were reported in it.
    pub max_errors: Option<usize>,
    pub execution: Execution,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetReport {
    pub samples: Vec<TypedValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global_info: Option<TypedValue>,
    pub diagnostics: Vec<Diagnostic>,
    pub counts: Counts,
    /// Samples in the source, including any skipped by truncation.
    pub sample_count: usize,
    pub truncated: bool,
}

impl DatasetReport {
    fn empty() -> Self {
        DatasetReport {
            samples: Vec::new(),
            global_info: None,
            diagnostics: Vec::new(),
            counts: Counts::default(),
            sample_count: 0,
            truncated: false,
        }
    }
}

type Outcome = (TypedValue, Vec<Diagnostic>);

fn check_one(raw: &RawValue, t: &ConcreteType, i: usize, opts: ValueOptions) -> Outcome {
    let mut diags = Vec::new();
    let v = validate_value(raw, t, &format!("samples/{i}"), opts, &mut diags);
    (v, diags)
}

fn check_chunk(
    chunk: &[RawValue],
    start: usize,
    t: &ConcreteType,
    opts: ValueOptions,
    exec: Execution,
) -> Vec<Outcome> {
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => chunk
            .par_iter()
            .enumerate()
            .map(|(k, raw)| check_one(raw, t, start + k, opts))
            .collect(),
        _ => chunk
            .iter()
            .enumerate()
            .map(|(k, raw)| check_one(raw, t, start + k, opts))
            .collect(),
    }
}

/// Validates `samples` in order. Returns the typed values kept and whether
/// validation stopped early.
pub fn validate_samples(
    samples: &[RawValue],
    t: &ConcreteType,
    options: ValidateOptions,
    diags: &mut Vec<Diagnostic>,
) -> (Vec<TypedValue>, bool) {
    let opts = ValueOptions {
        strict: options.strict,
    };
    let mut out = Vec::with_capacity(samples.len());
    let mut errors = 0usize;
    for (c, chunk) in samples.chunks(CHUNK).enumerate() {
        let start = c * CHUNK;
        for (k, (v, ds)) in check_chunk(chunk, start, t, opts, options.execution)
            .into_iter()
            .enumerate()
        {
            errors += ds.iter().filter(|d| d.is_error()).count();
            diags.extend(ds);
            out.push(v);
            let done = start + k + 1;
            if options.max_errors.is_some_and(|m| errors >= m) && done < samples.len() {
                diags.push(Diagnostic::note(
                    Code::Truncated,
                    "samples",
                    format!(
                        "stopped after {done} of {} samples: error limit reached",
                        samples.len()
                    ),
                ));
                return (out, true);
            }
        }
    }
    (out, false)
}

fn samples_source(
    data: &RawDataSection,
    base: Option<&Path>,
) -> Result<(Vec<RawValue>, Option<PathBuf>), Diagnostic> {
    if data.samples_are_local() {
        return match &data.samples {
            None => Ok((Vec::new(), None)),
            Some(RawValue::List(items)) => Ok((items.clone(), None)),
            Some(other) => Err(Diagnostic::error(
                Code::MalformedSamples,
                "data/samples",
                format!("`samples` must be a list, found {}", other.kind_name()),
            )),
        };
    }
    let items = load_external_samples(&data.sample_path, base)?;
    Ok((items, Some(external_path(&data.sample_path, base))))
}

fn global_info_source(
    data: &RawDataSection,
    base: Option<&Path>,
) -> Result<(Option<RawValue>, Option<PathBuf>), Diagnostic> {
    match &data.global_info_path {
        Some(p) if !data.global_info_is_local() => {
            let v = load_external_global_info(p, base)?;
            Ok((Some(v), Some(external_path(p, base))))
        }
        _ => Ok((data.global_info.clone(), None)),
    }
}

/// Validates the data section against a resolved schema. `base` is the
/// directory external files are relative to; `file` tags inline findings.
pub fn validate_dataset(
    schema: &ResolvedSchema,
    data: &RawDataSection,
    base: Option<&Path>,
    file: Option<&Path>,
    options: ValidateOptions,
) -> DatasetReport {
    let mut report = DatasetReport::empty();
    let Some(sample_type) = &schema.sample_type else {
        return report;
    };

    match samples_source(data, base) {
        Ok((raws, external)) => {
            let src = external.as_deref().or(file);
            let mut diags = Vec::new();
            let (typed, truncated) = validate_samples(&raws, sample_type, options, &mut diags);
            report
                .diagnostics
                .extend(diags.into_iter().map(|d| d.or_source(src)));
            report.samples = typed;
            report.sample_count = raws.len();
            report.truncated = truncated;
        }
        Err(d) => report.diagnostics.push(d.or_source(file)),
    }

    if let Some(gt) = &schema.global_info_type {
        match global_info_source(data, base) {
            Ok((Some(raw), external)) => {
                let src = external.as_deref().or(file);
                let mut diags = Vec::new();
                let v = validate_value(
                    &raw,
                    gt,
                    "global-info",
                    ValueOptions {
                        strict: options.strict,
                    },
                    &mut diags,
                );
                report
                    .diagnostics
                    .extend(diags.into_iter().map(|d| d.or_source(src)));
                report.global_info = Some(v);
            }
            Ok((None, _)) => report.diagnostics.push(
                Diagnostic::error(
                    Code::MalformedDataSection,
                    "data/global-info",
                    "`global-info-type` is declared but no global info is given",
                )
                .or_source(file),
            ),
            Err(d) => report.diagnostics.push(d.or_source(file)),
        }
    }

    report.counts = Counts::tally(&report.diagnostics);
    report
}
