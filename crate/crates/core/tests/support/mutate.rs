//! Programmatic corpus mutations, each paired with the one diagnostic it must
//! produce. Mutants are written into a scratch copy of the corpus.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use dsdl_core::pipeline::resolve_file;
use dsdl_core::resolve::{AngleMeasure, ConcreteType, RotatedMode};
use dsdl_core::{Code, Severity};
use serde_yaml::{Mapping, Value};
use tempfile::TempDir;

use super::corpus::{corpus, options, CORPUS_DIR};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    DeleteRequiredField,
    BBoxArity,
    LabelIndexRange,
    DegreeAngle,
    UnknownImport,
    DuplicateImport,
}

pub const ALL: [Mutation; 6] = [
    Mutation::DeleteRequiredField,
    Mutation::BBoxArity,
    Mutation::LabelIndexRange,
    Mutation::DegreeAngle,
    Mutation::UnknownImport,
    Mutation::DuplicateImport,
];

/// Definition both scratch libraries declare.
pub const DUP_NAME: &str = "DupProbe";
pub const DUP_LIBS: [&str; 2] = ["dup-first", "dup-second"];
pub const MISSING_LIB: &str = "no-such-library";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub code: Code,
    pub severity: Severity,
    pub path: String,
}

pub struct Mutant {
    /// Keeps the scratch corpus alive.
    pub dir: TempDir,
    pub file: PathBuf,
    pub expected: Expected,
}

#[derive(Debug, Clone)]
enum Seg {
    Key(String),
    Idx(usize),
}

fn render(segs: &[Seg]) -> String {
    let mut out = "samples/0".to_owned();
    for s in segs {
        match s {
            Seg::Key(k) => out += &format!("/{k}"),
            Seg::Idx(i) => out += &format!("/{i}"),
        }
    }
    out
}

fn copy_dir(from: &Path, to: &Path) -> io::Result<()> {
    fs::create_dir_all(to)?;
    for entry in fs::read_dir(from)? {
        let entry = entry?;
        let dest = to.join(entry.file_name());
        if entry.file_type()?.is_dir() {
            copy_dir(&entry.path(), &dest)?;
        } else {
            fs::copy(entry.path(), dest)?;
        }
    }
    Ok(())
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "json")
}

fn read(path: &Path) -> Value {
    let text = fs::read_to_string(path).unwrap();
    serde_yaml::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn write(path: &Path, v: &Value) {
    let text = if is_json(path) {
        serde_json::to_string_pretty(v).unwrap()
    } else {
        serde_yaml::to_string(v).unwrap()
    };
    fs::write(path, text).unwrap();
}

type Predicate = dyn Fn(&ConcreteType, &Value) -> bool;

/// First location in `v`, typed `t`, where `pred` holds.
fn find(t: &ConcreteType, v: &Value, pred: &Predicate, at: &mut Vec<Seg>) -> bool {
    if pred(t, v) {
        return true;
    }
    match (t, v) {
        (ConcreteType::Struct(s), Value::Mapping(m)) => {
            for (name, ft) in &s.fields {
                if let Some(child) = m.get(name.as_str()).filter(|c| !c.is_null()) {
                    at.push(Seg::Key(name.clone()));
                    if find(ft, child, pred, at) {
                        return true;
                    }
                    at.pop();
                }
            }
            false
        }
        (ConcreteType::List { etype, .. }, Value::Sequence(items)) => {
            for (i, item) in items.iter().enumerate() {
                at.push(Seg::Idx(i));
                if find(etype, item, pred, at) {
                    return true;
                }
                at.pop();
            }
            false
        }
        _ => false,
    }
}

fn navigate<'a>(mut v: &'a mut Value, segs: &[Seg]) -> &'a mut Value {
    for s in segs {
        v = match s {
            Seg::Key(k) => v.get_mut(k.as_str()).unwrap(),
            Seg::Idx(i) => v.get_mut(*i).unwrap(),
        };
    }
    v
}

/// The file holding the sample list, and the list's key path inside it.
fn samples_file(doc_path: &Path, doc: &Value) -> (PathBuf, Vec<&'static str>) {
    let data = &doc["data"];
    if data.get("samples").is_some_and(Value::is_sequence) {
        return (doc_path.to_owned(), vec!["data", "samples"]);
    }
    let rel = data["sample-path"]
        .as_str()
        .expect("samples are inline or external");
    (doc_path.parent().unwrap().join(rel), vec!["samples"])
}

fn append_import(doc: &mut Value, name: &str) -> usize {
    let map = doc.as_mapping_mut().unwrap();
    let list = map
        .entry(Value::from("$import"))
        .or_insert_with(|| Value::Sequence(Vec::new()))
        .as_sequence_mut()
        .unwrap();
    list.push(Value::from(name));
    list.len() - 1
}

fn library(fields: &[(&str, &str)]) -> Value {
    let mut f = Mapping::new();
    for (k, t) in fields {
        f.insert(Value::from(*k), Value::from(*t));
    }
    let mut def = Mapping::new();
    def.insert(Value::from("$def"), Value::from("struct"));
    def.insert(Value::from("$fields"), Value::Mapping(f));
    let mut lib = Mapping::new();
    lib.insert(Value::from("$dsdl-version"), Value::from("0.5.0"));
    lib.insert(Value::from(DUP_NAME), Value::Mapping(def));
    Value::Mapping(lib)
}

/// Applies `m` to the dataset file `rel` in a fresh copy of the corpus.
/// `None` when the file has nothing the mutation can target.
pub fn mutate(rel: &str, m: Mutation) -> Option<Mutant> {
    let dir = tempfile::tempdir().unwrap();
    copy_dir(Path::new(CORPUS_DIR), dir.path()).unwrap();
    let file = dir.path().join(rel);
    let mut doc = read(&file);

    let expected = match m {
        Mutation::UnknownImport => {
            let i = append_import(&mut doc, MISSING_LIB);
            write(&file, &doc);
            Expected {
                code: Code::ImportNotFound,
                severity: Severity::Error,
                path: format!("$import/{i}"),
            }
        }
        Mutation::DuplicateImport => {
            let libdir = file.parent().unwrap();
            write(
                &libdir.join(format!("{}.yaml", DUP_LIBS[0])),
                &library(&[("a", "Int")]),
            );
            write(
                &libdir.join(format!("{}.yaml", DUP_LIBS[1])),
                &library(&[("b", "Str")]),
            );
            for lib in DUP_LIBS {
                append_import(&mut doc, lib);
            }
            write(&file, &doc);
            Expected {
                code: Code::ImportOverwrite,
                severity: Severity::Warning,
                path: format!("defs/{DUP_NAME}"),
            }
        }
        _ => {
            let schema = resolve_file(&corpus(rel), &options()).ok()?.schema?;
            let sample_type = schema.sample_type?;
            let (sfile, keys) = samples_file(&file, &doc);
            let mut holder = if sfile == file { doc } else { read(&sfile) };
            let mut list = &mut holder;
            for k in keys {
                list = list.get_mut(k).unwrap();
            }
            let sample = list.get_mut(0)?;
            let expected = mutate_sample(&sample_type, sample, m)?;
            write(&sfile, &holder);
            expected
        }
    };
    Some(Mutant {
        dir,
        file,
        expected,
    })
}

fn mutate_sample(t: &ConcreteType, sample: &mut Value, m: Mutation) -> Option<Expected> {
    if m == Mutation::DeleteRequiredField {
        let s = t.as_struct()?;
        let map = sample.as_mapping_mut()?;
        let field = s
            .fields
            .keys()
            .find(|f| !s.is_optional(f) && map.get(f.as_str()).is_some_and(|v| !v.is_null()))?
            .clone();
        map.remove(field.as_str());
        return Some(Expected {
            code: Code::FieldMissing,
            severity: Severity::Warning,
            path: format!("samples/0/{field}"),
        });
    }

    let pred: Box<Predicate> = match m {
        Mutation::BBoxArity => Box::new(|t, v| matches!(t, ConcreteType::BBox) && v.is_sequence()),
        Mutation::LabelIndexRange => {
            Box::new(|t, v| matches!(t, ConcreteType::Label { .. }) && !v.is_null())
        }
        Mutation::DegreeAngle => Box::new(|t, v| {
            matches!(
                t,
                ConcreteType::RotatedBBox {
                    mode: RotatedMode::Xywht,
                    measure: AngleMeasure::Degree
                }
            ) && v.as_sequence().is_some_and(|s| s.len() == 5)
        }),
        _ => unreachable!(),
    };
    let mut at = Vec::new();
    if !find(t, sample, &*pred, &mut at) {
        return None;
    }
    let path = render(&at);
    let target = navigate(sample, &at);
    let (code, path) = match m {
        Mutation::BBoxArity => {
            target.as_sequence_mut().unwrap().push(Value::from(1.0));
            (Code::Arity, path)
        }
        Mutation::LabelIndexRange => {
            let label_type = {
                let mut lt = t;
                for s in &at {
                    lt = match (lt, s) {
                        (ConcreteType::Struct(st), Seg::Key(k)) => &st.fields[k.as_str()],
                        (ConcreteType::List { etype, .. }, Seg::Idx(_)) => etype,
                        _ => unreachable!(),
                    };
                }
                lt
            };
            let ConcreteType::Label { dom } = label_type else {
                unreachable!()
            };
            *target = Value::from(dom.len() as u64 + 1);
            (Code::ClassIndexRange, path)
        }
        Mutation::DegreeAngle => {
            target.as_sequence_mut().unwrap()[4] = Value::from(200.0);
            (Code::Range, format!("{path}/4"))
        }
        _ => unreachable!(),
    };
    Some(Expected {
        code,
        severity: Severity::Error,
        path,
    })
}
