//! Class domains: ordered, optionally hierarchical category lists.
//!
//! A class is a dot-separated path such as `vehicle.airplane`. Each segment
//! may carry a bracketed annotation (`nose[person]`) naming a class of a
//! parent domain; annotations are kept as metadata.
//!
//! Indices are 1-based. A single index selects by position in the class list;
//! a dotted index path of two or more parts walks the hierarchy, where the
//! children of each node are numbered by first appearance.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::diagnostic::{Code, Diagnostic};
use crate::syntax::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Segment {
    pub name: String,
    pub annotation: Option<String>,
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.annotation {
            Some(a) => write!(f, "{}[{}]", self.name, a),
            None => f.write_str(&self.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ClassPath {
    pub segments: Vec<Segment>,
}

impl ClassPath {
    pub fn parse(text: &str) -> Result<ClassPath, String> {
        if text.is_empty() {
            return Err("empty class name".into());
        }
        let segments = text
            .split('.')
            .map(parse_segment)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ClassPath { segments })
    }

    pub fn depth(&self) -> usize {
        self.segments.len()
    }

    /// Path text without segment annotations.
    pub fn bare(&self) -> String {
        self.segments
            .iter()
            .map(|s| s.name.as_str())
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl fmt::Display for ClassPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

fn parse_segment(text: &str) -> Result<Segment, String> {
    let (name, annotation) = match text.find('[') {
        Some(open) => {
            let Some(inner) = text[open + 1..].strip_suffix(']') else {
                return Err(format!("unbalanced bracket in class segment {text:?}"));
            };
            if inner.is_empty() || inner.contains(['[', ']']) {
                return Err(format!("malformed annotation in class segment {text:?}"));
            }
            (&text[..open], Some(inner.to_owned()))
        }
        None => (text, None),
    };
    if !is_identifier(name) {
        return Err(format!("class segment {name:?} is not an identifier"));
    }
    Ok(Segment {
        name: name.to_owned(),
        annotation,
    })
}

/// A resolved reference to one class of a domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ClassRef {
    pub domain: String,
    /// 1-based position at each level of the hierarchy.
    pub index_path: Vec<usize>,
    pub path: String,
    /// 1-based position in the flat class list.
    pub ordinal: usize,
}

impl ClassRef {
    /// `Dom::path` text.
    pub fn qualified(&self) -> String {
        format!("{}::{}", self.domain, self.path)
    }
}

impl fmt::Display for ClassRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.qualified())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct TreeNode {
    key: String,
    class: Option<usize>,
    children: Vec<TreeNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDomain {
    pub name: String,
    pub parents: Vec<String>,
    pub classes: Vec<ClassPath>,
    /// 1-based index pairs into `classes`.
    pub skeleton: Vec<(usize, usize)>,
    tree: TreeNode,
    index_paths: Vec<Vec<usize>>,
    /// Rendered class text, parallel to `classes`.
    names: Vec<String>,
    /// Full text → list position.
    by_text: HashMap<String, usize>,
    /// Annotation-free text → every list position with that text.
    by_bare: HashMap<String, Vec<usize>>,
}

impl ClassDomain {
    /// Builds a domain, checking class syntax, uniqueness and skeleton bounds.
    pub fn new(
        name: impl Into<String>,
        parents: Vec<String>,
        class_names: &[String],
        skeleton: Vec<(usize, usize)>,
    ) -> Result<ClassDomain, Vec<Diagnostic>> {
        let name = name.into();
        let mut errors = Vec::new();
        let mut classes = Vec::with_capacity(class_names.len());
        let mut seen = std::collections::HashSet::new();
        for (i, text) in class_names.iter().enumerate() {
            match ClassPath::parse(text) {
                Ok(p) => {
                    if !seen.insert(text.as_str()) {
                        errors.push(Diagnostic::error(
                            Code::MalformedDef,
                            format!("classes/{i}"),
                            format!("class {text:?} is listed more than once"),
                        ));
                    }
                    classes.push(p);
                }
                Err(msg) => errors.push(Diagnostic::error(
                    Code::MalformedDef,
                    format!("classes/{i}"),
                    msg,
                )),
            }
        }
        let n = classes.len();
        for (i, &(a, b)) in skeleton.iter().enumerate() {
            if a == 0 || b == 0 || a > n || b > n || a == b {
                errors.push(Diagnostic::error(
                    Code::MalformedDef,
                    format!("skeleton/{i}"),
                    format!("skeleton edge [{a}, {b}] must join two distinct classes in 1..={n}"),
                ));
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }

        let mut tree = TreeNode::default();
        let mut index_paths = Vec::with_capacity(n);
        for (ordinal, class) in classes.iter().enumerate() {
            let mut node = &mut tree;
            let mut ipath = Vec::with_capacity(class.depth());
            for seg in &class.segments {
                let key = seg.to_string();
                let pos = match node.children.iter().position(|c| c.key == key) {
                    Some(p) => p,
                    None => {
                        node.children.push(TreeNode {
                            key,
                            ..Default::default()
                        });
                        node.children.len() - 1
                    }
                };
                ipath.push(pos + 1);
                node = &mut node.children[pos];
            }
            node.class = Some(ordinal);
            index_paths.push(ipath);
        }
        let names: Vec<String> = classes.iter().map(ClassPath::to_string).collect();
        let by_text = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let mut by_bare: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, c) in classes.iter().enumerate() {
            by_bare.entry(c.bare()).or_default().push(i);
        }
        Ok(ClassDomain {
            name,
            parents,
            classes,
            skeleton,
            tree,
            index_paths,
            names,
            by_text,
            by_bare,
        })
    }

    /// Flat domain from plain names; panics on invalid input. For tests and
    /// programmatic construction.
    pub fn flat(name: &str, classes: &[&str]) -> ClassDomain {
        let names: Vec<String> = classes.iter().map(|s| s.to_string()).collect();
        ClassDomain::new(name, Vec::new(), &names, Vec::new()).expect("valid domain")
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_hierarchical(&self) -> bool {
        self.classes.iter().any(|c| c.depth() > 1)
    }

    /// Reference to the class at 0-based list position `i`.
    pub fn class_ref(&self, i: usize) -> ClassRef {
        ClassRef {
            domain: self.name.clone(),
            index_path: self.index_paths[i].clone(),
            path: self.names[i].clone(),
            ordinal: i + 1,
        }
    }

    pub fn index_path(&self, i: usize) -> &[usize] {
        &self.index_paths[i]
    }

    pub fn by_name(&self, name: &str) -> Result<ClassRef, Diagnostic> {
        if let Some(&i) = self.by_text.get(name) {
            return Ok(self.class_ref(i));
        }
        let matches = self.by_bare.get(name).map_or(&[][..], Vec::as_slice);
        match matches {
            [i] => Ok(self.class_ref(*i)),
            [] => Err(Diagnostic::error(
                Code::ClassNotFound,
                "",
                format!("class {name:?} is not in domain {}", self.name),
            )),
            _ => Err(Diagnostic::error(
                Code::ClassNotFound,
                "",
                format!("class {name:?} is ambiguous in domain {}", self.name),
            )),
        }
    }

    /// Looks up a 1-based index path. One part means list position.
    pub fn by_index(&self, path: &[usize]) -> Result<ClassRef, Diagnostic> {
        let range_err = |i: usize, max: usize, level: usize| {
            Diagnostic::error(
                Code::ClassIndexRange,
                "",
                format!(
                    "index {i} at level {level} is outside 1..={max} in domain {}",
                    self.name
                ),
            )
        };
        match path {
            [] => Err(Diagnostic::error(
                Code::LabelSyntax,
                "",
                "empty class index",
            )),
            [i] => {
                if *i == 0 || *i > self.classes.len() {
                    Err(range_err(*i, self.classes.len(), 1))
                } else {
                    Ok(self.class_ref(i - 1))
                }
            }
            _ => {
                let mut node = &self.tree;
                for (level, &i) in path.iter().enumerate() {
                    if i == 0 || i > node.children.len() {
                        return Err(range_err(i, node.children.len(), level + 1));
                    }
                    node = &node.children[i - 1];
                }
                match node.class {
                    Some(ordinal) => Ok(self.class_ref(ordinal)),
                    None => Err(Diagnostic::error(
                        Code::ClassNotFound,
                        "",
                        format!(
                            "index path {} addresses a category group, not a class, in domain {}",
                            render_index_path(path),
                            self.name
                        ),
                    )),
                }
            }
        }
    }
}

pub fn render_index_path(path: &[usize]) -> String {
    path.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(".")
}

/// Selector accepted by [`lookup_class`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    Name(String),
    Index(Vec<usize>),
}

impl Selector {
    /// Reads `"3.2.5"` as an index path and anything else as a name path.
    pub fn parse(text: &str) -> Selector {
        let parts: Option<Vec<usize>> = text.split('.').map(|p| p.parse().ok()).collect();
        match parts {
            Some(p) if !text.is_empty() => Selector::Index(p),
            _ => Selector::Name(text.to_owned()),
        }
    }
}

pub fn lookup_class(dom: &ClassDomain, selector: &Selector) -> Result<ClassRef, Diagnostic> {
    match selector {
        Selector::Name(n) => dom.by_name(n),
        Selector::Index(p) => dom.by_index(p),
    }
}
