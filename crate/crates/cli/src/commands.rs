//! The four subcommands. Each returns its rendered output and exit status;
//! nothing here prints.

use std::path::Path;

use dsdl_core::locator::{parse_locator, resolve_locator};
use dsdl_core::model::{render_index_path, ClassDomain, Definition};
use dsdl_core::pipeline::{check_file, resolve_file, ReadError};
use dsdl_core::resolve::ConcreteType;
use dsdl_core::stats::summarize;
use dsdl_core::{Code, Counts, Diagnostic};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{CliConfig, Format};

/// 0: clean, 1: findings that fail the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
}

pub struct Output {
    pub text: String,
    pub status: Status,
}

/// Errors fail the run; under strict, so do warnings.
fn status(counts: &Counts, strict: bool) -> Status {
    if counts.errors > 0 || (strict && counts.warnings > 0) {
        Status::Failed
    } else {
        Status::Ok
    }
}

fn diagnostic_lines(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| d.to_line() + "\n").collect()
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn emit<T: Serialize>(cfg: &CliConfig, report: &T, text: impl FnOnce() -> String) -> String {
    match cfg.format {
        Format::Json => json(report),
        Format::Text => text(),
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ValidateReport {
    pub file: String,
    pub ok: bool,
    pub strict: bool,
    pub sample_type: Option<String>,
    pub sample_count: usize,
    pub validated: usize,
    pub truncated: bool,
    pub counts: Counts,
    pub diagnostics: Vec<Diagnostic>,
    pub samples: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub global_info: Option<Value>,
}

pub fn validate(file: &Path, cfg: &CliConfig) -> Result<Output, ReadError> {
    let out = check_file(file, &cfg.pipeline())?;
    let st = status(&out.counts, cfg.strict);
    let ds = out.dataset.as_ref();
    let report = ValidateReport {
        file: file.display().to_string(),
        ok: st == Status::Ok,
        strict: cfg.strict,
        sample_type: out
            .schema
            .as_ref()
            .and_then(|s| s.sample_type.as_ref())
            .map(|t| t.render()),
        sample_count: ds.map_or(0, |d| d.sample_count),
        validated: ds.map_or(0, |d| d.samples.len()),
        truncated: ds.is_some_and(|d| d.truncated),
        counts: out.counts.clone(),
        diagnostics: out.diagnostics.clone(),
        samples: ds.map_or_else(Vec::new, |d| {
            d.samples
                .iter()
                .map(|s| serde_json::to_value(s).expect("sample serializes"))
                .collect()
        }),
        global_info: ds
            .and_then(|d| d.global_info.as_ref())
            .map(|g| serde_json::to_value(g).expect("global info serializes")),
    };
    let text = emit(cfg, &report, || {
        format!(
            "{}{} samples validated, {} errors, {} warnings\n",
            diagnostic_lines(&report.diagnostics),
            report.validated,
            report.counts.errors,
            report.counts.warnings
        )
    });
    Ok(Output { text, status: st })
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct DefinitionInfo {
    pub name: String,
    pub kind: String,
    /// `None` for definitions of the inspected file read from memory.
    pub file: Option<String>,
    pub load_order: usize,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct TypeNode {
    #[serde(rename = "type")]
    pub ty: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<FieldNode>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct FieldNode {
    pub name: String,
    pub optional: bool,
    #[serde(flatten)]
    pub node: TypeNode,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ClassInfo {
    pub index: usize,
    pub index_path: Vec<usize>,
    pub name: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct DomainInfo {
    pub name: String,
    pub classes: Vec<ClassInfo>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skeleton: Vec<[usize; 2]>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct InspectReport {
    pub file: String,
    pub definitions: Vec<DefinitionInfo>,
    pub sample_type: Option<TypeNode>,
    pub global_info_type: Option<TypeNode>,
    pub domains: Vec<DomainInfo>,
    pub counts: Counts,
    pub diagnostics: Vec<Diagnostic>,
}

/// Expands struct types down to their leaves. Structs are acyclic once
/// resolved, so this terminates.
fn type_node(t: &ConcreteType) -> TypeNode {
    let inner = match t {
        ConcreteType::List { etype, .. } => etype.as_ref(),
        other => other,
    };
    let fields = match inner {
        ConcreteType::Struct(s) => s
            .fields
            .iter()
            .map(|(name, ft)| FieldNode {
                name: name.clone(),
                optional: s.is_optional(name),
                node: type_node(ft),
            })
            .collect(),
        _ => Vec::new(),
    };
    TypeNode {
        ty: t.render(),
        fields,
    }
}

fn domain_info(d: &ClassDomain) -> DomainInfo {
    DomainInfo {
        name: d.name.clone(),
        classes: (0..d.len())
            .map(|i| ClassInfo {
                index: i + 1,
                index_path: d.index_path(i).to_vec(),
                name: d.classes[i].to_string(),
            })
            .collect(),
        skeleton: d.skeleton.iter().map(|&(a, b)| [a, b]).collect(),
    }
}

fn render_node(out: &mut String, node: &TypeNode, depth: usize) {
    for f in &node.fields {
        let opt = if f.optional { " (optional)" } else { "" };
        out.push_str(&format!(
            "{}{}: {}{opt}\n",
            "  ".repeat(depth),
            f.name,
            f.node.ty
        ));
        render_node(out, &f.node, depth + 1);
    }
}

fn render_inspect(r: &InspectReport) -> String {
    let mut out = diagnostic_lines(&r.diagnostics);
    out += "definitions:\n";
    for d in &r.definitions {
        out += &format!(
            "  {} {} from {} (load order {})\n",
            d.name,
            d.kind,
            d.file.as_deref().unwrap_or("<memory>"),
            d.load_order
        );
    }
    for (label, node) in [
        ("sample-type", &r.sample_type),
        ("global-info-type", &r.global_info_type),
    ] {
        if let Some(n) = node {
            out += &format!("{label}: {}\n", n.ty);
            render_node(&mut out, n, 1);
        }
    }
    for d in &r.domains {
        out += &format!("domain {} ({} classes):\n", d.name, d.classes.len());
        for c in &d.classes {
            if c.index_path.len() > 1 {
                out += &format!(
                    "  {} [{}] {}\n",
                    c.index,
                    render_index_path(&c.index_path),
                    c.name
                );
            } else {
                out += &format!("  {} {}\n", c.index, c.name);
            }
        }
        if !d.skeleton.is_empty() {
            let edges: Vec<String> = d
                .skeleton
                .iter()
                .map(|[a, b]| format!("[{a}, {b}]"))
                .collect();
            out += &format!("  skeleton: {}\n", edges.join(", "));
        }
    }
    out
}

pub fn inspect(file: &Path, cfg: &CliConfig) -> Result<Output, ReadError> {
    let resolved = resolve_file(file, &cfg.pipeline())?;
    let counts = Counts::tally(&resolved.diagnostics);
    let schema = resolved.schema.as_ref();
    let report = InspectReport {
        file: file.display().to_string(),
        definitions: schema.map_or_else(Vec::new, |s| {
            s.registry
                .iter()
                .map(|(name, e)| DefinitionInfo {
                    name: name.to_owned(),
                    kind: e.definition.kind().to_owned(),
                    file: e.provenance.file.as_ref().map(|p| p.display().to_string()),
                    load_order: e.provenance.load_order,
                })
                .collect()
        }),
        sample_type: schema.and_then(|s| s.sample_type.as_ref()).map(type_node),
        global_info_type: schema
            .and_then(|s| s.global_info_type.as_ref())
            .map(type_node),
        domains: schema.map_or_else(Vec::new, |s| {
            s.registry
                .iter()
                .filter_map(|(_, e)| match &e.definition {
                    Definition::Domain(d) => Some(domain_info(d)),
                    Definition::Struct(_) => None,
                })
                .collect()
        }),
        counts,
        diagnostics: resolved.diagnostics,
    };
    let st = status(&report.counts, cfg.strict);
    let text = emit(cfg, &report, || render_inspect(&report));
    Ok(Output { text, status: st })
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct LocatorResult {
    pub locator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub address: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<Diagnostic>,
}

/// Missing environment leaves a locator unresolved but is not a failure.
fn environment_gap(code: Code) -> bool {
    matches!(code, Code::DataRootMissing | Code::IdMapperMissing)
}

pub fn resolve_loc(locators: &[String], cfg: &CliConfig) -> Output {
    let env = cfg.resolution();
    let mut results = Vec::new();
    let mut failed = false;
    for text in locators {
        let r = match parse_locator(text) {
            Err(d) => LocatorResult {
                locator: text.clone(),
                variant: None,
                address: None,
                diagnostic: Some(d),
            },
            Ok(loc) => {
                let (address, diagnostic) = match resolve_locator(&loc, &env) {
                    Ok(a) => (Some(a), None),
                    Err(d) if environment_gap(d.code) => (
                        None,
                        Some(Diagnostic {
                            severity: dsdl_core::Severity::Note,
                            ..d
                        }),
                    ),
                    Err(d) => (None, Some(d)),
                };
                LocatorResult {
                    locator: text.clone(),
                    variant: Some(loc.variant_name().to_owned()),
                    address,
                    diagnostic,
                }
            }
        };
        failed |= r.diagnostic.as_ref().is_some_and(Diagnostic::is_error);
        results.push(r);
    }
    let text = emit(cfg, &results, || {
        let mut out = String::new();
        for r in &results {
            match (&r.variant, &r.address) {
                (Some(v), Some(a)) => out += &format!("{v} → {a}\n"),
                (Some(v), None) => out += &format!("{v}\n"),
                (None, _) => {}
            }
            if let Some(d) = &r.diagnostic {
                out += &format!("{}\n", d.to_line());
            }
        }
        out
    });
    Output {
        text,
        status: if failed { Status::Failed } else { Status::Ok },
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct FillInfo {
    pub field: String,
    pub filled: usize,
    pub total: usize,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct SummaryReport {
    pub file: String,
    pub samples: usize,
    /// Keyed by `Domain::class`.
    pub labels: Vec<(String, usize)>,
    pub fill: Vec<FillInfo>,
    pub locators: Vec<(String, usize)>,
    pub counts: Counts,
    pub diagnostics: Vec<Diagnostic>,
}

fn render_summary(r: &SummaryReport) -> String {
    let single_domain = {
        let mut doms = r
            .labels
            .iter()
            .map(|(k, _)| k.split_once("::").map_or("", |(d, _)| d));
        let first = doms.next();
        doms.all(|d| Some(d) == first)
    };
    let label = |k: &str| -> String {
        match k.split_once("::") {
            Some((_, path)) if single_domain => path.to_owned(),
            _ => k.to_owned(),
        }
    };
    let join = |items: Vec<String>| {
        if items.is_empty() {
            "(none)".to_owned()
        } else {
            items.join(", ")
        }
    };
    let mut out = diagnostic_lines(&r.diagnostics);
    out += &format!("{} samples\n", r.samples);
    out += &format!(
        "labels: {}\n",
        join(
            r.labels
                .iter()
                .map(|(k, n)| format!("{}:{n}", label(k)))
                .collect()
        )
    );
    out += &format!(
        "fill rates: {}\n",
        join(
            r.fill
                .iter()
                .map(|f| format!("{} {}/{}", f.field, f.filled, f.total))
                .collect()
        )
    );
    out += &format!(
        "locators: {}\n",
        join(r.locators.iter().map(|(k, n)| format!("{k}:{n}")).collect())
    );
    out
}

pub fn summary(file: &Path, cfg: &CliConfig) -> Result<Output, ReadError> {
    let out = check_file(file, &cfg.pipeline())?;
    let stats = match (&out.schema, &out.dataset) {
        (Some(schema), Some(ds)) => schema
            .sample_type
            .as_ref()
            .map(|t| summarize(t, &ds.samples)),
        _ => None,
    }
    .unwrap_or_default();
    let report = SummaryReport {
        file: file.display().to_string(),
        samples: stats.samples,
        labels: stats.label_frequency.into_iter().collect(),
        fill: stats
            .field_fill
            .into_iter()
            .map(|(field, r)| FillInfo {
                field,
                filled: r.filled,
                total: r.total,
            })
            .collect(),
        locators: stats.locator_forms.into_iter().collect(),
        counts: out.counts.clone(),
        diagnostics: out.diagnostics,
    };
    let st = status(&report.counts, cfg.strict);
    let text = emit(cfg, &report, || render_summary(&report));
    Ok(Output { text, status: st })
}
