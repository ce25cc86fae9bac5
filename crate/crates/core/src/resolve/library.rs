//! Library discovery and import merging.

use std::collections::HashSet;
use std::ffi::OsStr;
use std::path::{Path, PathBuf};

use crate::diagnostic::{Code, Diagnostic};
use crate::model::registry::{build_definitions, DefinitionRegistry};
use crate::syntax::{parse_document, Format, ParseOptions, RawDocument};

pub const LIBRARY_PATH_VAR: &str = "DSDL_LIBRARY_PATH";

/// Ordered directories searched for `$import` names after the importing
/// file's own directory.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LibraryEnvironment {
    pub search_paths: Vec<PathBuf>,
    pub parse_options: ParseOptions,
}

impl LibraryEnvironment {
    pub fn new(search_paths: Vec<PathBuf>) -> Self {
        LibraryEnvironment {
            search_paths,
            parse_options: ParseOptions::default(),
        }
    }

    /// The bundled template library shipped with this crate.
    pub fn default_library_dir() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("lib")
    }

    /// Default directory, then `DSDL_LIBRARY_PATH` entries, then `extra`.
    pub fn standard(library_path_var: Option<&OsStr>, extra: &[PathBuf]) -> Self {
        let mut paths = vec![Self::default_library_dir()];
        if let Some(v) = library_path_var {
            paths.extend(std::env::split_paths(v).filter(|p| !p.as_os_str().is_empty()));
        }
        paths.extend(extra.iter().cloned());
        Self::new(paths)
    }

    /// [`standard`](Self::standard) reading the variable from the process
    /// environment.
    pub fn from_process_env(extra: &[PathBuf]) -> Self {
        let var = std::env::var_os(LIBRARY_PATH_VAR);
        Self::standard(var.as_deref(), extra)
    }

    /// Candidate files for `name`, in lookup order.
    pub fn candidates(&self, name: &str, importer_dir: Option<&Path>) -> Vec<PathBuf> {
        let has_ext = matches!(
            Path::new(name).extension().and_then(OsStr::to_str),
            Some("yaml" | "yml" | "json")
        );
        let mut out = Vec::new();
        for dir in importer_dir
            .into_iter()
            .chain(self.search_paths.iter().map(PathBuf::as_path))
        {
            if has_ext {
                out.push(dir.join(name));
            } else {
                out.push(dir.join(format!("{name}.yaml")));
                out.push(dir.join(format!("{name}.json")));
            }
        }
        out
    }

    pub fn locate(&self, name: &str, importer_dir: Option<&Path>) -> Result<PathBuf, Vec<PathBuf>> {
        let candidates = self.candidates(name, importer_dir);
        match candidates.iter().find(|p| p.is_file()) {
            Some(p) => Ok(p.clone()),
            None => Err(candidates),
        }
    }
}

/// Reads and parses a description or library file.
pub fn load_document(path: &Path, options: ParseOptions) -> Result<RawDocument, Vec<Diagnostic>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        vec![
            Diagnostic::error(Code::Io, "", format!("cannot read {}: {e}", path.display()))
                .with_source(path),
        ]
    })?;
    let opts = ParseOptions {
        format: match options.format {
            Format::Auto => Format::from_path(path),
            f => f,
        },
        ..options
    };
    parse_document(&text, opts).map_err(|ds| ds.into_iter().map(|d| d.with_source(path)).collect())
}

struct Merger<'a> {
    env: &'a LibraryEnvironment,
    stack: Vec<PathBuf>,
    loaded: HashSet<PathBuf>,
    registry: DefinitionRegistry,
    diags: Vec<Diagnostic>,
    load_order: usize,
}

impl Merger<'_> {
    fn document(&mut self, doc: &RawDocument, file: Option<&Path>) {
        let dir = file.and_then(Path::parent);
        for (i, name) in doc.imports.iter().enumerate() {
            let path = format!("$import/{i}");
            match self.env.locate(name, dir) {
                Ok(found) => self.file(&found, &path, file),
                Err(searched) => {
                    let list = searched
                        .iter()
                        .map(|p| p.display().to_string())
                        .collect::<Vec<_>>()
                        .join(", ");
                    self.diags.push(
                        Diagnostic::error(
                            Code::ImportNotFound,
                            path,
                            format!("library {name:?} not found; searched: {list}"),
                        )
                        .or_source(file),
                    );
                }
            }
        }
        let order = self.load_order;
        self.load_order += 1;
        let (own, diags) = build_definitions(&doc.defs, file, order);
        self.diags.extend(diags);
        for (name, entry) in own.iter() {
            let new_src = describe(entry.provenance.file.as_deref());
            if let Some(old) = self.registry.insert(name.to_owned(), entry.clone()) {
                self.diags.push(
                    Diagnostic::warning(
                        Code::ImportOverwrite,
                        format!("defs/{name}"),
                        format!(
                            "definition {name:?} from {new_src} replaces the one from {}",
                            describe(old.provenance.file.as_deref())
                        ),
                    )
                    .or_source(file),
                );
            }
        }
    }

    fn file(&mut self, found: &Path, import_path: &str, importer: Option<&Path>) {
        let canon = found.canonicalize().unwrap_or_else(|_| found.to_path_buf());
        if let Some(pos) = self.stack.iter().position(|p| *p == canon) {
            let chain = self.stack[pos..]
                .iter()
                .chain(std::iter::once(&canon))
                .map(|p| p.display().to_string())
                .collect::<Vec<_>>()
                .join(" -> ");
            self.diags.push(
                Diagnostic::error(
                    Code::ImportCycle,
                    import_path,
                    format!("import cycle: {chain}"),
                )
                .or_source(importer),
            );
            return;
        }
        if self.loaded.contains(&canon) {
            return;
        }
        let doc = match load_document(found, self.env.parse_options) {
            Ok(d) => d,
            Err(ds) => {
                self.diags.extend(ds);
                return;
            }
        };
        self.stack.push(canon.clone());
        self.document(&doc, Some(found));
        self.stack.pop();
        self.loaded.insert(canon);
    }
}

fn describe(file: Option<&Path>) -> String {
    file.map_or_else(
        || "the description file".to_owned(),
        |p| p.display().to_string(),
    )
}

/// Resolves imports depth-first, merging definitions in import order and then
/// the document's own definitions. Later definitions replace earlier ones
/// with an `IMPORT_OVERWRITE` warning.
pub fn resolve_imports(
    doc: &RawDocument,
    file: Option<&Path>,
    env: &LibraryEnvironment,
) -> (DefinitionRegistry, Vec<Diagnostic>) {
    let mut m = Merger {
        env,
        stack: Vec::new(),
        loaded: HashSet::new(),
        registry: DefinitionRegistry::new(),
        diags: Vec::new(),
        load_order: 0,
    };
    if let Some(f) = file {
        m.stack
            .push(f.canonicalize().unwrap_or_else(|_| f.to_path_buf()));
    }
    m.document(doc, file);
    (m.registry, m.diags)
}
