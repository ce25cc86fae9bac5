//! Per-value validation, dispatched on the concrete type.

use indexmap::IndexMap;

use crate::diagnostic::{join_path, Code, Diagnostic, Severity};
use crate::locator::parse_locator;
use crate::model::class_domain::ClassDomain;
use crate::resolve::instantiate::{AngleMeasure, ConcreteStruct, ConcreteType, RotatedMode};
use crate::validate::datetime::{parse_date, parse_time};
use crate::validate::label::validate_label;
use crate::validate::typed::{KeypointValue, MediaRef, TypedValue};
use crate::value::RawValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ValueOptions {
    /// Promotes `FIELD_MISSING` to an error.
    pub strict: bool,
}

/// Validates `raw` against `t`, appending findings located under `path`.
pub fn validate_value(
    raw: &RawValue,
    t: &ConcreteType,
    path: &str,
    options: ValueOptions,
    diags: &mut Vec<Diagnostic>,
) -> TypedValue {
    let mut v = Checker {
        options,
        diags,
        path: path.to_owned(),
    };
    v.value(raw, t)
}

struct Checker<'a> {
    options: ValueOptions,
    diags: &'a mut Vec<Diagnostic>,
    path: String,
}

fn fmt_num(x: f64) -> String {
    RawValue::Float(x).to_json_string()
}

impl Checker<'_> {
    fn error(&mut self, code: Code, message: String) -> TypedValue {
        self.diags
            .push(Diagnostic::error(code, self.path.clone(), message));
        TypedValue::Invalid
    }

    fn mismatch(&mut self, expected: &str, raw: &RawValue) -> TypedValue {
        self.error(
            Code::TypeMismatch,
            format!("expected {expected}, found {}", raw.kind_name()),
        )
    }

    fn nested<T>(&mut self, seg: &str, f: impl FnOnce(&mut Self) -> T) -> T {
        let saved = std::mem::take(&mut self.path);
        self.path = join_path(&saved, seg);
        let out = f(self);
        self.path = saved;
        out
    }

    /// A list of exactly `arity` numbers (any length when `None`).
    fn numbers(&mut self, raw: &RawValue, arity: Option<usize>, what: &str) -> Option<Vec<f64>> {
        let Some(items) = raw.as_list() else {
            self.mismatch(&format!("{what} (a list of numbers)"), raw);
            return None;
        };
        if let Some(n) = arity {
            if items.len() != n {
                self.error(
                    Code::Arity,
                    format!("{what} needs {n} numbers, found {}", items.len()),
                );
                return None;
            }
        }
        let mut out = Vec::with_capacity(items.len());
        let mut ok = true;
        for (i, item) in items.iter().enumerate() {
            match item.as_f64() {
                Some(x) if x.is_finite() => out.push(x),
                _ => {
                    ok = false;
                    self.nested(&i.to_string(), |c| c.mismatch("a finite number", item));
                }
            }
        }
        ok.then_some(out)
    }

    fn value(&mut self, raw: &RawValue, t: &ConcreteType) -> TypedValue {
        match t {
            ConcreteType::Bool => match raw {
                RawValue::Bool(b) => TypedValue::Bool(*b),
                _ => self.mismatch("a boolean", raw),
            },
            ConcreteType::Int => match raw {
                RawValue::Int(i) => TypedValue::Int(*i),
                RawValue::Float(f) => match raw.as_integer() {
                    Some(i) => TypedValue::Int(i),
                    None => self.error(
                        Code::TypeMismatch,
                        format!("expected an integer, found {}", fmt_num(*f)),
                    ),
                },
                _ => self.mismatch("an integer", raw),
            },
            ConcreteType::Num => match raw.as_f64() {
                Some(x) => TypedValue::Num(x),
                None => self.mismatch("a number", raw),
            },
            ConcreteType::Str => match raw {
                RawValue::Str(s) => TypedValue::Str(s.clone()),
                _ => self.mismatch("a string", raw),
            },
            ConcreteType::Coord => match self.numbers(raw, Some(2), "Coord") {
                Some(v) => TypedValue::Coord([v[0], v[1]]),
                None => TypedValue::Invalid,
            },
            ConcreteType::Coord3D => match self.numbers(raw, Some(3), "Coord3D") {
                Some(v) => TypedValue::Coord3D([v[0], v[1], v[2]]),
                None => TypedValue::Invalid,
            },
            ConcreteType::Interval => match self.numbers(raw, Some(2), "Interval") {
                Some(v) if v[0] <= v[1] => TypedValue::Interval([v[0], v[1]]),
                Some(v) => self.error(
                    Code::Range,
                    format!(
                        "interval begin {} exceeds end {}",
                        fmt_num(v[0]),
                        fmt_num(v[1])
                    ),
                ),
                None => TypedValue::Invalid,
            },
            ConcreteType::BBox => match self.numbers(raw, Some(4), "BBox") {
                Some(v) if v[2] >= 0.0 && v[3] >= 0.0 => TypedValue::BBox([v[0], v[1], v[2], v[3]]),
                Some(v) => self.error(
                    Code::Range,
                    format!(
                        "box width and height must be non-negative, found {} and {}",
                        fmt_num(v[2]),
                        fmt_num(v[3])
                    ),
                ),
                None => TypedValue::Invalid,
            },
            ConcreteType::Polygon => self.polygon(raw),
            ConcreteType::Date { fmt } => match raw {
                RawValue::Str(s) => match parse_date(s, fmt.as_deref()) {
                    Ok(d) => TypedValue::Date(d.format("%Y-%m-%d").to_string()),
                    Err(m) => self.error(Code::DateFormat, m),
                },
                _ => self.mismatch("a date string", raw),
            },
            ConcreteType::Time { fmt } => match raw {
                RawValue::Str(s) => match parse_time(s, fmt.as_deref()) {
                    Ok(d) => TypedValue::Time(d.format("%H:%M:%S%.f").to_string()),
                    Err(m) => self.error(Code::DateFormat, m),
                },
                _ => self.mismatch("a time string", raw),
            },
            ConcreteType::Label { dom } => self.label(raw, dom),
            ConcreteType::List { etype, .. } => match raw.as_list() {
                Some(items) => TypedValue::List(
                    items
                        .iter()
                        .enumerate()
                        .map(|(i, item)| self.nested(&i.to_string(), |c| c.value(item, etype)))
                        .collect(),
                ),
                None => self.mismatch("a list", raw),
            },
            ConcreteType::Media { class } => self.media(raw, class, false),
            ConcreteType::Text => self.media(raw, "Text", true),
            ConcreteType::LabelMap { .. } => self.media(raw, "LabelMap", false),
            ConcreteType::Keypoint { dom } => self.keypoints(raw, dom),
            ConcreteType::RotatedBBox { mode, measure } => self.rotated(raw, *mode, *measure),
            ConcreteType::InstanceID => self
                .identifier(raw)
                .map_or(TypedValue::Invalid, TypedValue::InstanceId),
            ConcreteType::UniqueID => self
                .identifier(raw)
                .map_or(TypedValue::Invalid, TypedValue::UniqueId),
            ConcreteType::ImageShape => self.image_shape(raw),
            ConcreteType::Struct(s) => self.record(raw, s),
        }
    }

    fn label(&mut self, raw: &RawValue, dom: &ClassDomain) -> TypedValue {
        match validate_label(raw, Some(dom), &|_| None) {
            Ok(r) => TypedValue::Label(r),
            Err(mut d) => {
                d.path = self.path.clone();
                self.diags.push(d);
                TypedValue::Invalid
            }
        }
    }

    fn point(&mut self, raw: &RawValue) -> Option<[f64; 2]> {
        self.numbers(raw, Some(2), "polygon point")
            .map(|v| [v[0], v[1]])
    }

    fn ring(&mut self, raw: &RawValue) -> Option<Vec<[f64; 2]>> {
        let items = raw.as_list()?;
        let points: Vec<[f64; 2]> = if items.iter().all(|i| i.as_f64().is_some()) {
            if items.len() % 2 != 0 {
                self.error(
                    Code::Arity,
                    format!(
                        "flat polygon ring needs an even count of numbers, found {}",
                        items.len()
                    ),
                );
                return None;
            }
            items
                .chunks(2)
                .map(|c| [c[0].as_f64().unwrap(), c[1].as_f64().unwrap()])
                .collect()
        } else {
            let mut out = Vec::with_capacity(items.len());
            for (i, p) in items.iter().enumerate() {
                out.push(self.nested(&i.to_string(), |c| c.point(p))?);
            }
            out
        };
        if points.len() < 3 {
            self.error(
                Code::Arity,
                format!(
                    "a polygon ring needs at least 3 points, found {}",
                    points.len()
                ),
            );
            return None;
        }
        Some(points)
    }

    fn polygon(&mut self, raw: &RawValue) -> TypedValue {
        let Some(items) = raw.as_list() else {
            return self.mismatch("a polygon (a list of rings)", raw);
        };
        if items.is_empty() {
            return self.error(Code::Arity, "a polygon needs at least one ring".into());
        }
        // A flat number list or a list of `[x, y]` points is a single ring;
        // otherwise each item is a ring, either of points or flat.
        let is_numbers = |v: &RawValue| {
            v.as_list()
                .is_some_and(|p| p.iter().all(|x| x.as_f64().is_some()))
        };
        let single = items.iter().all(|i| i.as_f64().is_some())
            || (items.iter().all(is_numbers) && items[0].as_list().is_some_and(|p| p.len() == 2));
        if single {
            return match self.ring(raw) {
                Some(r) => TypedValue::Polygon(vec![r]),
                None => TypedValue::Invalid,
            };
        }
        let mut rings = Vec::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            let r = self.nested(&i.to_string(), |c| {
                if item.as_list().is_none() {
                    c.mismatch("a polygon ring (a list of points)", item);
                    return None;
                }
                c.ring(item)
            });
            match r {
                Some(r) => rings.push(r),
                None => return TypedValue::Invalid,
            }
        }
        TypedValue::Polygon(rings)
    }

    fn media(&mut self, raw: &RawValue, class: &str, inline_text: bool) -> TypedValue {
        match raw {
            RawValue::Str(s) if inline_text => TypedValue::Text(s.clone()),
            RawValue::Str(s) => match parse_locator(s) {
                Ok(locator) => TypedValue::Media(MediaRef {
                    class: class.to_owned(),
                    locator,
                    descr: None,
                }),
                Err(d) => self.error(d.code, d.message),
            },
            RawValue::Map(m) => {
                for key in m.keys().filter(|k| !matches!(*k, "$loc" | "$descr")) {
                    self.diags.push(Diagnostic::warning(
                        Code::FieldUnknown,
                        join_path(&self.path, key),
                        format!("key {key:?} is not part of an object reference and is ignored"),
                    ));
                }
                let descr = match m.get("$descr") {
                    None | Some(RawValue::Null) => None,
                    Some(RawValue::Map(d)) => Some(d.clone()),
                    Some(other) => {
                        return self.nested("$descr", |c| c.mismatch("a mapping", other));
                    }
                };
                match m.get("$loc") {
                    Some(RawValue::Str(s)) => match parse_locator(s) {
                        Ok(locator) => TypedValue::Media(MediaRef {
                            class: class.to_owned(),
                            locator,
                            descr,
                        }),
                        Err(d) => self.nested("$loc", |c| c.error(d.code, d.message)),
                    },
                    Some(other) => self.nested("$loc", |c| c.mismatch("a locator string", other)),
                    None => self.error(Code::LocSyntax, "object reference lacks `$loc`".into()),
                }
            }
            _ => self.mismatch("an object locator", raw),
        }
    }

    fn keypoints(&mut self, raw: &RawValue, dom: &ClassDomain) -> TypedValue {
        let Some(items) = raw.as_list() else {
            return self.mismatch("a keypoint list", raw);
        };
        let k = dom.len();
        let nested = !items.is_empty() && items.iter().all(|i| i.as_list().is_some());
        let flat: Vec<f64> = if nested {
            if items.len() != k {
                return self.error(
                    Code::Arity,
                    format!(
                        "expected {k} keypoint triples for {}, found {}",
                        dom.name,
                        items.len()
                    ),
                );
            }
            let mut out = Vec::with_capacity(3 * k);
            for (i, item) in items.iter().enumerate() {
                match self.nested(&i.to_string(), |c| c.numbers(item, Some(3), "keypoint")) {
                    Some(v) => out.extend(v),
                    None => return TypedValue::Invalid,
                }
            }
            out
        } else {
            if items.len() != 3 * k {
                return self.error(
                    Code::Arity,
                    format!(
                        "expected {} values (3 per keypoint of {}), found {}",
                        3 * k,
                        dom.name,
                        items.len()
                    ),
                );
            }
            match self.numbers(raw, None, "keypoints") {
                Some(v) => v,
                None => return TypedValue::Invalid,
            }
        };
        TypedValue::Keypoints(
            flat.chunks(3)
                .map(|c| KeypointValue {
                    x: c[0],
                    y: c[1],
                    v: c[2],
                })
                .collect(),
        )
    }

    fn rotated(&mut self, raw: &RawValue, mode: RotatedMode, measure: AngleMeasure) -> TypedValue {
        let (n, what) = match mode {
            RotatedMode::Xyxy => (8, "RotatedBBox xyxy"),
            RotatedMode::Xywht => (5, "RotatedBBox xywht"),
        };
        let Some(v) = self.numbers(raw, Some(n), what) else {
            return TypedValue::Invalid;
        };
        if mode == RotatedMode::Xywht {
            let limit = measure.limit();
            let t = v[4];
            if t <= -limit || t >= limit {
                let unit = match measure {
                    AngleMeasure::Radian => "radian",
                    AngleMeasure::Degree => "degree",
                };
                return self.nested("4", |c| {
                    c.error(
                        Code::Range,
                        format!(
                            "angle {} is outside the open interval (-{limit}, {limit}) {unit}s",
                            fmt_num(t)
                        ),
                    )
                });
            }
            if v[2] < 0.0 || v[3] < 0.0 {
                return self.error(
                    Code::Range,
                    "rotated box width and height must be non-negative".into(),
                );
            }
        }
        TypedValue::RotatedBBox(v)
    }

    fn identifier(&mut self, raw: &RawValue) -> Option<String> {
        match raw {
            RawValue::Int(i) => Some(i.to_string()),
            RawValue::Float(_) => match raw.as_integer() {
                Some(i) => Some(i.to_string()),
                None => {
                    self.mismatch("an integer or string identifier", raw);
                    None
                }
            },
            RawValue::Str(s) if !s.is_empty() => Some(s.clone()),
            _ => {
                self.mismatch("an integer or non-empty string identifier", raw);
                None
            }
        }
    }

    fn image_shape(&mut self, raw: &RawValue) -> TypedValue {
        let Some(v) = self.numbers(raw, Some(2), "ImageShape") else {
            return TypedValue::Invalid;
        };
        if v.iter().any(|x| x.fract() != 0.0) {
            return self.error(
                Code::TypeMismatch,
                "image dimensions must be integers".into(),
            );
        }
        if v.iter().any(|&x| x < 1.0) {
            return self.error(Code::Range, "image dimensions must be positive".into());
        }
        TypedValue::ImageShape([v[0] as u64, v[1] as u64])
    }

    fn record(&mut self, raw: &RawValue, s: &ConcreteStruct) -> TypedValue {
        let Some(map) = raw.as_map() else {
            return self.mismatch(&format!("a {} record (a mapping)", s.name), raw);
        };
        let mut out = IndexMap::with_capacity(s.fields.len());
        for (fname, ftype) in &s.fields {
            let value = match map.get(fname) {
                Some(v) if !v.is_null() => self.nested(fname, |c| c.value(v, ftype)),
                _ => {
                    if !s.is_optional(fname) {
                        let severity = if self.options.strict {
                            Severity::Error
                        } else {
                            Severity::Warning
                        };
                        self.diags.push(Diagnostic::new(
                            Code::FieldMissing,
                            severity,
                            join_path(&self.path, fname),
                            format!("required field {fname:?} of {} is missing", s.name),
                        ));
                    }
                    TypedValue::Null
                }
            };
            out.insert(fname.clone(), value);
        }
        for key in map.keys().filter(|k| !s.fields.contains_key(*k)) {
            self.diags.push(Diagnostic::warning(
                Code::FieldUnknown,
                join_path(&self.path, key),
                format!("{} declares no field {key:?}", s.name),
            ));
        }
        TypedValue::Record(out)
    }
}
