//! Binding type expressions to concrete, validation-ready types.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::diagnostic::{Code, Diagnostic};
use crate::model::builtins::{builtin, BuiltinSignature, ParamKind, Shape, PARAM_ALIASES};
use crate::model::class_domain::ClassDomain;
use crate::model::registry::DefinitionRegistry;
use crate::model::struct_class::StructClass;
use crate::syntax::{ArgValue, TypeArg, TypeExpr};
use crate::validate::datetime::check_format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RotatedMode {
    /// Four corner points, 8 numbers.
    Xyxy,
    /// Center, size and angle, 5 numbers.
    Xywht,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AngleMeasure {
    Radian,
    Degree,
}

impl AngleMeasure {
    /// Exclusive bound on the absolute angle.
    pub fn limit(self) -> f64 {
        match self {
            AngleMeasure::Radian => std::f64::consts::PI,
            AngleMeasure::Degree => 180.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConcreteType {
    Bool,
    Int,
    Num,
    Str,
    Coord,
    Coord3D,
    Interval,
    BBox,
    Polygon,
    Date {
        fmt: Option<String>,
    },
    Time {
        fmt: Option<String>,
    },
    Label {
        dom: Arc<ClassDomain>,
    },
    List {
        etype: Box<ConcreteType>,
        ordered: bool,
    },
    /// Unstructured object addressed by a locator.
    Media {
        class: String,
    },
    Text,
    LabelMap {
        dom: Arc<ClassDomain>,
    },
    Keypoint {
        dom: Arc<ClassDomain>,
    },
    RotatedBBox {
        mode: RotatedMode,
        measure: AngleMeasure,
    },
    InstanceID,
    UniqueID,
    ImageShape,
    Struct(Arc<ConcreteStruct>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcreteStruct {
    pub name: String,
    /// Bound parameters in declaration order, as canonical text.
    pub args: Vec<(String, String)>,
    pub fields: IndexMap<String, ConcreteType>,
    pub optional: Vec<String>,
}

impl ConcreteStruct {
    pub fn is_optional(&self, field: &str) -> bool {
        self.optional.iter().any(|o| o == field)
    }

    pub fn render(&self) -> String {
        if self.args.is_empty() {
            return self.name.clone();
        }
        let args: Vec<String> = self.args.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}[{}]", self.name, args.join(", "))
    }
}

fn quote(s: &str) -> String {
    ArgValue::Str(s.to_owned()).render()
}

impl ConcreteType {
    /// Canonical keyed form with default-valued arguments omitted.
    pub fn render(&self) -> String {
        match self {
            ConcreteType::Bool => "Bool".into(),
            ConcreteType::Int => "Int".into(),
            ConcreteType::Num => "Num".into(),
            ConcreteType::Str => "Str".into(),
            ConcreteType::Coord => "Coord".into(),
            ConcreteType::Coord3D => "Coord3D".into(),
            ConcreteType::Interval => "Interval".into(),
            ConcreteType::BBox => "BBox".into(),
            ConcreteType::Polygon => "Polygon".into(),
            ConcreteType::Date { fmt: None } => "Date".into(),
            ConcreteType::Date { fmt: Some(f) } => format!("Date[fmt={}]", quote(f)),
            ConcreteType::Time { fmt: None } => "Time".into(),
            ConcreteType::Time { fmt: Some(f) } => format!("Time[fmt={}]", quote(f)),
            ConcreteType::Label { dom } => format!("Label[dom={}]", dom.name),
            ConcreteType::List {
                etype,
                ordered: false,
            } => format!("List[etype={}]", etype.render()),
            ConcreteType::List {
                etype,
                ordered: true,
            } => format!("List[etype={}, ordered=true]", etype.render()),
            ConcreteType::Media { class } => class.clone(),
            ConcreteType::Text => "Text".into(),
            ConcreteType::LabelMap { dom } => format!("LabelMap[dom={}]", dom.name),
            ConcreteType::Keypoint { dom } => format!("Keypoint[dom={}]", dom.name),
            ConcreteType::RotatedBBox { mode, measure } => {
                let m = match mode {
                    RotatedMode::Xyxy => "xyxy",
                    RotatedMode::Xywht => "xywht",
                };
                match measure {
                    AngleMeasure::Radian => format!("RotatedBBox[mode={}]", quote(m)),
                    AngleMeasure::Degree => format!(
                        "RotatedBBox[mode={}, measure={}]",
                        quote(m),
                        quote("degree")
                    ),
                }
            }
            ConcreteType::InstanceID => "InstanceID".into(),
            ConcreteType::UniqueID => "UniqueID".into(),
            ConcreteType::ImageShape => "ImageShape".into(),
            ConcreteType::Struct(s) => s.render(),
        }
    }

    pub fn as_struct(&self) -> Option<&ConcreteStruct> {
        match self {
            ConcreteType::Struct(s) => Some(s),
            _ => None,
        }
    }

    /// Every class domain reachable from this type, first occurrence first.
    pub fn domains(&self) -> Vec<Arc<ClassDomain>> {
        let mut out: Vec<Arc<ClassDomain>> = Vec::new();
        self.collect_domains(&mut out);
        out
    }

    fn collect_domains(&self, out: &mut Vec<Arc<ClassDomain>>) {
        match self {
            ConcreteType::Label { dom }
            | ConcreteType::LabelMap { dom }
            | ConcreteType::Keypoint { dom } => {
                if !out.iter().any(|d| d.name == dom.name) {
                    out.push(dom.clone());
                }
            }
            ConcreteType::List { etype, .. } => etype.collect_domains(out),
            ConcreteType::Struct(s) => s.fields.values().for_each(|f| f.collect_domains(out)),
            _ => {}
        }
    }
}

impl fmt::Display for ConcreteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Parameter name → closed argument.
pub type Bindings = IndexMap<String, ArgValue>;

/// Replaces every `$param` with its binding.
pub fn substitute(
    expr: &TypeExpr,
    bindings: &Bindings,
    path: &str,
) -> Result<TypeExpr, Diagnostic> {
    let mut args = Vec::with_capacity(expr.args.len());
    for arg in &expr.args {
        let value = match &arg.value {
            ArgValue::Param(p) => bindings.get(p).cloned().ok_or_else(|| {
                Diagnostic::error(
                    Code::UnboundParam,
                    path,
                    format!("parameter `${p}` has no binding"),
                )
            })?,
            ArgValue::Type(t) => ArgValue::Type(substitute(t, bindings, path)?),
            other => other.clone(),
        };
        args.push(TypeArg {
            key: arg.key.clone(),
            value,
        });
    }
    Ok(TypeExpr {
        head: expr.head.clone(),
        args,
    })
}

/// Instantiates type expressions against one registry, caching concrete
/// structs by their canonical text.
pub struct Instantiator<'a> {
    reg: &'a DefinitionRegistry,
    extra_media: BTreeSet<String>,
    cache: HashMap<String, Arc<ConcreteStruct>>,
    in_progress: Vec<String>,
    notes: Vec<Diagnostic>,
}

impl<'a> Instantiator<'a> {
    pub fn new(reg: &'a DefinitionRegistry) -> Self {
        Instantiator {
            reg,
            extra_media: BTreeSet::new(),
            cache: HashMap::new(),
            in_progress: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Additional unstructured-object class names usable as types.
    pub fn with_media_classes(mut self, names: impl IntoIterator<Item = String>) -> Self {
        self.extra_media.extend(names);
        self
    }

    /// Non-fatal findings (notes and warnings) produced so far.
    pub fn take_notes(&mut self) -> Vec<Diagnostic> {
        std::mem::take(&mut self.notes)
    }

    pub fn instantiate(
        &mut self,
        expr: &TypeExpr,
        bindings: &Bindings,
        path: &str,
    ) -> Result<ConcreteType, Diagnostic> {
        let closed = substitute(expr, bindings, path)?;
        self.closed(&closed, path)
    }

    fn closed(&mut self, expr: &TypeExpr, path: &str) -> Result<ConcreteType, Diagnostic> {
        if let Some(sig) = builtin(&expr.head) {
            return self.builtin(sig, expr, path);
        }
        if let Some(s) = self.reg.structure(&expr.head) {
            return self.structure(&s.clone(), expr, path);
        }
        if self.reg.domain(&expr.head).is_some() {
            return Err(Diagnostic::error(
                Code::ArgKind,
                path,
                format!("{} is a class domain, not a type", expr.head),
            ));
        }
        if self.extra_media.contains(&expr.head) {
            if !expr.args.is_empty() {
                return Err(Diagnostic::error(
                    Code::ExtraParam,
                    path,
                    format!("{} takes no parameters", expr.head),
                ));
            }
            return Ok(ConcreteType::Media {
                class: expr.head.clone(),
            });
        }
        Err(Diagnostic::error(
            Code::UnknownType,
            path,
            format!("unknown type {}", expr.head),
        ))
    }

    /// Assigns positional then keyed arguments to parameter slots.
    fn bind(
        &mut self,
        head: &str,
        params: &[&str],
        args: &[TypeArg],
        path: &str,
    ) -> Result<Vec<Option<ArgValue>>, Diagnostic> {
        let mut slots: Vec<Option<ArgValue>> = vec![None; params.len()];
        for (i, arg) in args.iter().enumerate() {
            let idx = match &arg.key {
                None => {
                    if i >= params.len() {
                        return Err(Diagnostic::error(
                            Code::ExtraParam,
                            path,
                            format!(
                                "{head} takes {} parameter(s), {} given",
                                params.len(),
                                args.len()
                            ),
                        ));
                    }
                    i
                }
                Some(key) => {
                    let canonical = PARAM_ALIASES
                        .iter()
                        .find(|(t, alias, _)| {
                            *t == head && alias == key && !params.contains(&key.as_str())
                        })
                        .map(|(_, alias, canon)| {
                            self.notes.push(Diagnostic::note(
                                Code::ParamAlias,
                                path,
                                format!("{head}[{alias}=...] is read as {head}[{canon}=...]"),
                            ));
                            *canon
                        })
                        .unwrap_or(key.as_str());
                    params.iter().position(|p| *p == canonical).ok_or_else(|| {
                        Diagnostic::error(
                            Code::ExtraParam,
                            path,
                            format!("{head} has no parameter {key:?}"),
                        )
                    })?
                }
            };
            if slots[idx].is_some() {
                return Err(Diagnostic::error(
                    Code::ExtraParam,
                    path,
                    format!(
                        "parameter {:?} of {head} is given more than once",
                        params[idx]
                    ),
                ));
            }
            slots[idx] = Some(arg.value.clone());
        }
        Ok(slots)
    }

    fn builtin(
        &mut self,
        sig: &BuiltinSignature,
        expr: &TypeExpr,
        path: &str,
    ) -> Result<ConcreteType, Diagnostic> {
        let names: Vec<&str> = sig.params.iter().map(|p| p.name).collect();
        let slots = self.bind(sig.name, &names, &expr.args, path)?;

        let mut domain = None;
        let mut etype = None;
        let mut strings: HashMap<&str, String> = HashMap::new();
        let mut flag = false;
        for (spec, slot) in sig.params.iter().zip(slots) {
            let Some(value) = slot else {
                if spec.required {
                    return Err(Diagnostic::error(
                        Code::MissingParam,
                        path,
                        format!("{} requires parameter {:?}", sig.name, spec.name),
                    ));
                }
                if let Some(d) = spec.default {
                    match spec.kind {
                        ParamKind::Bool => flag = d == "true",
                        _ => {
                            strings.insert(spec.name, d.to_owned());
                        }
                    }
                }
                continue;
            };
            let kind_err = |what: &str| {
                Diagnostic::error(
                    Code::ArgKind,
                    path,
                    format!(
                        "parameter {:?} of {} expects {}, found {what}",
                        spec.name,
                        sig.name,
                        spec.kind.describe()
                    ),
                )
            };
            match spec.kind {
                ParamKind::Domain => {
                    domain = Some(self.domain_arg(&value, spec.name, sig.name, path)?)
                }
                ParamKind::Type => match &value {
                    ArgValue::Type(t) => etype = Some(self.closed(t, path)?),
                    other => return Err(kind_err(&other.render())),
                },
                ParamKind::Bool => match value {
                    ArgValue::Bool(b) => flag = b,
                    other => return Err(kind_err(&other.render())),
                },
                ParamKind::Str => {
                    let s = match value {
                        ArgValue::Str(s) => s,
                        ArgValue::Type(t) if t.args.is_empty() => t.head,
                        other => return Err(kind_err(&other.render())),
                    };
                    if !spec.choices.is_empty() && !spec.choices.contains(&s.as_str()) {
                        return Err(Diagnostic::error(
                            Code::ArgKind,
                            path,
                            format!(
                                "parameter {:?} of {} must be one of {}, found {s:?}",
                                spec.name,
                                sig.name,
                                spec.choices.join(", ")
                            ),
                        ));
                    }
                    strings.insert(spec.name, s);
                }
            }
        }

        let fmt = strings.remove("fmt");
        if let Some(f) = &fmt {
            check_format(f).map_err(|m| Diagnostic::error(Code::DateFormat, path, m))?;
        }
        let dom = || domain.clone().expect("required domain bound");
        Ok(match sig.shape {
            Shape::Bool => ConcreteType::Bool,
            Shape::Int => ConcreteType::Int,
            Shape::Num => ConcreteType::Num,
            Shape::Str => ConcreteType::Str,
            Shape::Coord => ConcreteType::Coord,
            Shape::Coord3D => ConcreteType::Coord3D,
            Shape::Interval => ConcreteType::Interval,
            Shape::BBox => ConcreteType::BBox,
            Shape::Polygon => ConcreteType::Polygon,
            Shape::Date => ConcreteType::Date { fmt },
            Shape::Time => ConcreteType::Time { fmt },
            Shape::Label => ConcreteType::Label { dom: dom() },
            Shape::List => ConcreteType::List {
                etype: Box::new(etype.expect("required etype bound")),
                ordered: flag,
            },
            Shape::Media => ConcreteType::Media {
                class: sig.name.to_owned(),
            },
            Shape::Text => ConcreteType::Text,
            Shape::LabelMap => ConcreteType::LabelMap { dom: dom() },
            Shape::Keypoint => ConcreteType::Keypoint { dom: dom() },
            Shape::RotatedBBox => ConcreteType::RotatedBBox {
                mode: if strings["mode"] == "xyxy" {
                    RotatedMode::Xyxy
                } else {
                    RotatedMode::Xywht
                },
                measure: if strings["measure"] == "degree" {
                    AngleMeasure::Degree
                } else {
                    AngleMeasure::Radian
                },
            },
            Shape::InstanceID => ConcreteType::InstanceID,
            Shape::UniqueID => ConcreteType::UniqueID,
            Shape::ImageShape => ConcreteType::ImageShape,
        })
    }

    fn domain_arg(
        &self,
        value: &ArgValue,
        param: &str,
        head: &str,
        path: &str,
    ) -> Result<Arc<ClassDomain>, Diagnostic> {
        let name = match value {
            ArgValue::Type(t) if t.args.is_empty() => t.head.as_str(),
            ArgValue::Str(s) => s.as_str(),
            other => {
                return Err(Diagnostic::error(
                    Code::ArgKind,
                    path,
                    format!(
                        "parameter {param:?} of {head} expects a class domain, found {}",
                        other.render()
                    ),
                ))
            }
        };
        if let Some(d) = self.reg.domain(name) {
            return Ok(d.clone());
        }
        if self.reg.structure(name).is_some() || builtin(name).is_some() {
            return Err(Diagnostic::error(
                Code::ArgKind,
                path,
                format!(
                    "parameter {param:?} of {head} expects a class domain, but {name} is a type"
                ),
            ));
        }
        Err(Diagnostic::error(
            Code::UnknownType,
            path,
            format!("unknown class domain {name}"),
        ))
    }

    fn structure(
        &mut self,
        s: &Arc<StructClass>,
        expr: &TypeExpr,
        path: &str,
    ) -> Result<ConcreteType, Diagnostic> {
        let names: Vec<&str> = s.params.iter().map(String::as_str).collect();
        let slots = self.bind(&s.name, &names, &expr.args, path)?;
        let mut bindings = Bindings::new();
        for (name, slot) in s.params.iter().zip(slots) {
            match slot {
                Some(v) => {
                    bindings.insert(name.clone(), v);
                }
                None => {
                    return Err(Diagnostic::error(
                        Code::MissingParam,
                        path,
                        format!("{} requires parameter {name:?}", s.name),
                    ))
                }
            }
        }
        let args: Vec<(String, String)> = bindings
            .iter()
            .map(|(k, v)| (k.clone(), v.render()))
            .collect();
        let key = if args.is_empty() {
            s.name.clone()
        } else {
            let a: Vec<String> = args.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{}[{}]", s.name, a.join(", "))
        };
        if let Some(c) = self.cache.get(&key) {
            return Ok(ConcreteType::Struct(c.clone()));
        }
        if self.in_progress.contains(&s.name) {
            return Err(Diagnostic::error(
                Code::CycleDetected,
                path,
                format!(
                    "circular reference: {} -> {}",
                    self.in_progress.join(" -> "),
                    s.name
                ),
            ));
        }
        self.in_progress.push(s.name.clone());
        let mut fields = IndexMap::new();
        let mut result = Ok(());
        for (fname, fexpr) in &s.fields {
            let fpath = format!("defs/{}/$fields/{fname}", s.name);
            match self.instantiate(fexpr, &bindings, &fpath) {
                Ok(t) => {
                    fields.insert(fname.clone(), t);
                }
                Err(e) => {
                    result = Err(e);
                    break;
                }
            }
        }
        self.in_progress.pop();
        result?;
        let concrete = Arc::new(ConcreteStruct {
            name: s.name.clone(),
            args,
            fields,
            optional: s.optional.clone(),
        });
        self.cache.insert(key, concrete.clone());
        Ok(ConcreteType::Struct(concrete))
    }
}

/// One-shot instantiation with a fresh [`Instantiator`].
pub fn instantiate_type(
    expr: &TypeExpr,
    bindings: &Bindings,
    reg: &DefinitionRegistry,
) -> Result<ConcreteType, Diagnostic> {
    Instantiator::new(reg).instantiate(expr, bindings, "")
}
