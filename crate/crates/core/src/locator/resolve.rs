//! Locator → address resolution. Consults only the supplied environment.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::diagnostic::{Code, Diagnostic};
use crate::locator::{LocatorKind, ObjectLocator};

pub const ALIAS_ENV_PREFIX: &str = "DSDL_ALIAS_";

/// Maps `(data domain, id)` to an address.
pub trait IdMapper: Send + Sync {
    fn lookup(&self, domain: &str, id: &str) -> Option<String>;
}

impl IdMapper for HashMap<(String, String), String> {
    fn lookup(&self, domain: &str, id: &str) -> Option<String> {
        self.get(&(domain.to_owned(), id.to_owned())).cloned()
    }
}

impl IdMapper for BTreeMap<(String, String), String> {
    fn lookup(&self, domain: &str, id: &str) -> Option<String> {
        self.get(&(domain.to_owned(), id.to_owned())).cloned()
    }
}

/// Where an alias binding came from, strongest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AliasSource {
    Flag,
    Config,
    Env,
}

/// Layered alias bindings. Lookup prefers flag, then config, then env.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasTable {
    layers: BTreeMap<AliasSource, BTreeMap<String, String>>,
}

impl AliasTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, source: AliasSource, name: impl Into<String>, dir: impl Into<String>) {
        self.layers
            .entry(source)
            .or_default()
            .insert(name.into(), dir.into());
    }

    /// Adds every `DSDL_ALIAS_<NAME>=dir` pair; the name is taken verbatim.
    pub fn add_env_vars<K: AsRef<str>, V: AsRef<str>>(
        &mut self,
        vars: impl IntoIterator<Item = (K, V)>,
    ) {
        for (k, v) in vars {
            if let Some(name) = k.as_ref().strip_prefix(ALIAS_ENV_PREFIX) {
                if !name.is_empty() {
                    self.set(AliasSource::Env, name, v.as_ref());
                }
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<(&str, AliasSource)> {
        self.layers
            .iter()
            .find_map(|(src, m)| m.get(name).map(|d| (d.as_str(), *src)))
    }

    /// Effective bindings after precedence, sorted by name.
    pub fn effective(&self) -> BTreeMap<&str, (&str, AliasSource)> {
        let mut out = BTreeMap::new();
        for (src, m) in self.layers.iter().rev() {
            for (k, v) in m {
                out.insert(k.as_str(), (v.as_str(), *src));
            }
        }
        out
    }
}

#[derive(Clone, Default)]
pub struct ResolutionEnvironment {
    /// Kept verbatim; joined with `/`.
    pub data_root: Option<String>,
    pub aliases: AliasTable,
    pub id_mapper: Option<Arc<dyn IdMapper>>,
}

impl fmt::Debug for ResolutionEnvironment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ResolutionEnvironment")
            .field("data_root", &self.data_root)
            .field("aliases", &self.aliases)
            .field("id_mapper", &self.id_mapper.as_ref().map(|_| "<mapper>"))
            .finish()
    }
}

impl ResolutionEnvironment {
    pub fn with_data_root(root: impl Into<String>) -> Self {
        ResolutionEnvironment {
            data_root: Some(root.into()),
            ..Default::default()
        }
    }
}

/// Normalizes separators and rejects escaping paths.
fn clean_relative(path: &str, text: &str) -> Result<String, Diagnostic> {
    let path = path.replace('\\', "/");
    if path.starts_with('/') || path.as_bytes().get(1) == Some(&b':') {
        return Err(Diagnostic::error(
            Code::PathEscape,
            "",
            format!("locator {text:?} is an absolute path"),
        ));
    }
    let mut parts = Vec::new();
    for seg in path.split('/') {
        match seg {
            "" | "." => {}
            ".." => {
                return Err(Diagnostic::error(
                    Code::PathEscape,
                    "",
                    format!("locator {text:?} contains a `..` segment"),
                ))
            }
            s => parts.push(s),
        }
    }
    if parts.is_empty() {
        return Err(Diagnostic::error(
            Code::LocSyntax,
            "",
            format!("locator {text:?} names no object"),
        ));
    }
    Ok(parts.join("/"))
}

fn join(base: &str, rest: &str) -> String {
    if base.is_empty() {
        rest.to_owned()
    } else if base.ends_with('/') || base.ends_with('\\') {
        format!("{base}{rest}")
    } else {
        format!("{base}/{rest}")
    }
}

pub fn resolve_locator(
    loc: &ObjectLocator,
    env: &ResolutionEnvironment,
) -> Result<String, Diagnostic> {
    match &loc.kind {
        LocatorKind::Relative { path } => {
            let rest = clean_relative(path, &loc.text)?;
            let root = env.data_root.as_deref().ok_or_else(|| {
                Diagnostic::error(
                    Code::DataRootMissing,
                    "",
                    format!("no data root is configured to resolve {:?}", loc.text),
                )
            })?;
            Ok(join(root, &rest))
        }
        LocatorKind::Alias { name, rest } => {
            let rest = clean_relative(rest, &loc.text)?;
            let (dir, _) = env.aliases.get(name).ok_or_else(|| {
                Diagnostic::error(
                    Code::AliasUndefined,
                    "",
                    format!("alias ${name} is not defined"),
                )
            })?;
            Ok(join(dir, &rest))
        }
        LocatorKind::ObjectId { domain, id } => {
            let mapper = env.id_mapper.as_ref().ok_or_else(|| {
                Diagnostic::error(
                    Code::IdMapperMissing,
                    "",
                    format!("no id mapper is configured to resolve {:?}", loc.text),
                )
            })?;
            mapper.lookup(domain, id).ok_or_else(|| {
                Diagnostic::error(
                    Code::IdNotFound,
                    "",
                    format!("id {id:?} is unknown in data domain {domain:?}"),
                )
            })
        }
    }
}
