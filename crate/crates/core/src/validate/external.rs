//! Samples and global info kept in separate files.

use std::path::{Path, PathBuf};

use crate::diagnostic::{Code, Diagnostic};
use crate::syntax::{parse_raw, Format};
use crate::value::RawValue;

pub const SAMPLES_KEY: &str = "samples";
pub const GLOBAL_INFO_KEY: &str = "global-info";

/// `path` joined onto `base` unless already absolute.
pub fn external_path(path: &str, base: Option<&Path>) -> PathBuf {
    let p = Path::new(path);
    match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p.to_path_buf(),
    }
}

fn read_keyed(path: &Path, key: &str, diag_path: &str) -> Result<RawValue, Diagnostic> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        let code = if e.kind() == std::io::ErrorKind::NotFound {
            Code::FileNotFound
        } else {
            Code::Io
        };
        Diagnostic::error(
            code,
            diag_path,
            format!("cannot read {}: {e}", path.display()),
        )
        .with_source(path)
    })?;
    let root = parse_raw(&text, Format::from_path(path)).map_err(|d| d.with_source(path))?;
    let missing = || {
        Diagnostic::error(
            Code::MissingSamplesKey,
            diag_path,
            format!("{} has no top-level `{key}` key", path.display()),
        )
        .with_source(path)
    };
    match root {
        RawValue::Map(mut m) => m.remove(key).ok_or_else(missing),
        _ => Err(missing()),
    }
}

/// Reads the `samples` list of an external file.
pub fn load_external_samples(path: &str, base: Option<&Path>) -> Result<Vec<RawValue>, Diagnostic> {
    let full = external_path(path, base);
    match read_keyed(&full, SAMPLES_KEY, "data/sample-path")? {
        RawValue::List(items) => Ok(items),
        other => Err(Diagnostic::error(
            Code::MalformedSamples,
            "data/sample-path",
            format!(
                "`samples` in {} must be a list, found {}",
                full.display(),
                other.kind_name()
            ),
        )
        .with_source(full)),
    }
}

/// Reads the `global-info` value of an external file.
pub fn load_external_global_info(path: &str, base: Option<&Path>) -> Result<RawValue, Diagnostic> {
    read_keyed(
        &external_path(path, base),
        GLOBAL_INFO_KEY,
        "data/global-info-path",
    )
}
