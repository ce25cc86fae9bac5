//! Object locators and the unstructured-object loader contract.
//!
//! Three locator forms exist:
//!
//! * `abc/001.jpg`: relative to the data root;
//! * `$mydir1/abc/001.jpg`: relative to an aliased directory;
//! * `::cuhk.ie::abcd1234xyz`: an identifier in a data domain, resolved by an
//!   embedder-supplied mapping.

pub mod media;
pub mod resolve;

use std::fmt;

use serde::Serialize;

use crate::diagnostic::{Code, Diagnostic};
use crate::syntax::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LocatorKind {
    Relative { path: String },
    Alias { name: String, rest: String },
    ObjectId { domain: String, id: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ObjectLocator {
    #[serde(flatten)]
    pub kind: LocatorKind,
    /// Original text.
    pub text: String,
}

impl ObjectLocator {
    pub fn variant_name(&self) -> &'static str {
        match self.kind {
            LocatorKind::Relative { .. } => "relative",
            LocatorKind::Alias { .. } => "alias",
            LocatorKind::ObjectId { .. } => "object-id",
        }
    }
}

impl fmt::Display for ObjectLocator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

pub fn parse_locator(text: &str) -> Result<ObjectLocator, Diagnostic> {
    let err = |msg: String| Diagnostic::error(Code::LocSyntax, "", msg);
    if text.is_empty() {
        return Err(err("empty object locator".into()));
    }
    let kind = if let Some(rest) = text.strip_prefix("::") {
        let Some((domain, id)) = rest.split_once("::") else {
            return Err(err(format!(
                "object id locator {text:?} must have the form ::<domain>::<id>"
            )));
        };
        if domain.is_empty() || id.is_empty() {
            return Err(err(format!(
                "object id locator {text:?} has an empty domain or id"
            )));
        }
        LocatorKind::ObjectId {
            domain: domain.to_owned(),
            id: id.to_owned(),
        }
    } else if let Some(rest) = text.strip_prefix('$') {
        let Some((name, rest)) = rest.split_once('/') else {
            return Err(err(format!("alias locator {text:?} lacks a `/` remainder")));
        };
        if !is_identifier(name) {
            return Err(err(format!(
                "alias name {name:?} in {text:?} is not an identifier"
            )));
        }
        if rest.is_empty() {
            return Err(err(format!(
                "alias locator {text:?} has an empty remainder"
            )));
        }
        LocatorKind::Alias {
            name: name.to_owned(),
            rest: rest.to_owned(),
        }
    } else {
        LocatorKind::Relative {
            path: text.to_owned(),
        }
    };
    Ok(ObjectLocator {
        kind,
        text: text.to_owned(),
    })
}

pub use media::{
    load_object, register_media_class, FsReaderProvider, MediaClassRegistry, MediaLoader,
    ReaderProvider, StubLoader, StubObject,
};
pub use resolve::{
    resolve_locator, AliasSource, AliasTable, IdMapper, ResolutionEnvironment, ALIAS_ENV_PREFIX,
};
