use indexmap::IndexMap;
use serde::Serialize;

use crate::locator::ObjectLocator;
use crate::model::class_domain::ClassRef;
use crate::value::RawMap;

/// A reference to an unstructured object.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MediaRef {
    pub class: String,
    pub locator: ObjectLocator,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub descr: Option<RawMap>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KeypointValue {
    pub x: f64,
    pub y: f64,
    /// Visibility flag, kept as given.
    pub v: f64,
}

/// A validated value. Records list every declared field; omitted optionals
/// are `Null`. `Invalid` stands in for a value that failed validation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum TypedValue {
    Null,
    Invalid,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Coord([f64; 2]),
    Coord3D([f64; 3]),
    Interval([f64; 2]),
    /// `[x, y, w, h]`.
    BBox([f64; 4]),
    /// Rings of `[x, y]` points.
    Polygon(Vec<Vec<[f64; 2]>>),
    /// ISO 8601 text.
    Date(String),
    Time(String),
    Label(ClassRef),
    List(Vec<TypedValue>),
    Record(IndexMap<String, TypedValue>),
    Media(MediaRef),
    Text(String),
    Keypoints(Vec<KeypointValue>),
    RotatedBBox(Vec<f64>),
    InstanceId(String),
    UniqueId(String),
    /// `[width, height]`.
    ImageShape([u64; 2]),
}

impl TypedValue {
    pub fn as_record(&self) -> Option<&IndexMap<String, TypedValue>> {
        match self {
            TypedValue::Record(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, TypedValue::Null)
    }

    /// Depth-first visit of this value and everything nested in it.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a TypedValue)) {
        f(self);
        match self {
            TypedValue::List(items) => items.iter().for_each(|i| i.walk(f)),
            TypedValue::Record(fields) => fields.values().for_each(|v| v.walk(f)),
            _ => {}
        }
    }
}
