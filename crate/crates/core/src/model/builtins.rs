//! The builtin type inventory and parameter signatures.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    /// Name of a class domain.
    Domain,
    /// A type expression.
    Type,
    Str,
    Bool,
}

impl ParamKind {
    pub fn describe(self) -> &'static str {
        match self {
            ParamKind::Domain => "a class domain",
            ParamKind::Type => "a type",
            ParamKind::Str => "a string",
            ParamKind::Bool => "a boolean",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub required: bool,
    pub default: Option<&'static str>,
    /// Allowed string values; empty means unrestricted.
    pub choices: &'static [&'static str],
}

const fn param(name: &'static str, kind: ParamKind) -> ParamSpec {
    ParamSpec {
        name,
        kind,
        required: true,
        default: None,
        choices: &[],
    }
}

const fn optional(name: &'static str, kind: ParamKind, default: Option<&'static str>) -> ParamSpec {
    ParamSpec {
        name,
        kind,
        required: false,
        default,
        choices: &[],
    }
}

/// Value shape dispatched on by the validation engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Bool,
    Int,
    Num,
    Str,
    Coord,
    Coord3D,
    Interval,
    BBox,
    Polygon,
    Date,
    Time,
    Label,
    List,
    Media,
    Text,
    LabelMap,
    Keypoint,
    RotatedBBox,
    InstanceID,
    UniqueID,
    ImageShape,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuiltinSignature {
    pub name: &'static str,
    pub params: &'static [ParamSpec],
    pub shape: Shape,
}

impl BuiltinSignature {
    pub fn param(&self, name: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.name == name)
    }
}

const fn sig(name: &'static str, shape: Shape, params: &'static [ParamSpec]) -> BuiltinSignature {
    BuiltinSignature {
        name,
        params,
        shape,
    }
}

pub const ROTATED_MODES: &[&str] = &["xyxy", "xywht"];
pub const ANGLE_MEASURES: &[&str] = &["radian", "degree"];

const DOM: &[ParamSpec] = &[param("dom", ParamKind::Domain)];
const FMT: &[ParamSpec] = &[optional("fmt", ParamKind::Str, None)];

pub const BUILTINS: &[BuiltinSignature] = &[
    sig("Bool", Shape::Bool, &[]),
    sig("Int", Shape::Int, &[]),
    sig("Num", Shape::Num, &[]),
    sig("Str", Shape::Str, &[]),
    sig("Coord", Shape::Coord, &[]),
    sig("Coord3D", Shape::Coord3D, &[]),
    sig("Interval", Shape::Interval, &[]),
    sig("BBox", Shape::BBox, &[]),
    sig("Polygon", Shape::Polygon, &[]),
    sig("Date", Shape::Date, FMT),
    sig("Time", Shape::Time, FMT),
    sig("Label", Shape::Label, DOM),
    sig(
        "List",
        Shape::List,
        &[
            param("etype", ParamKind::Type),
            optional("ordered", ParamKind::Bool, Some("false")),
        ],
    ),
    sig("Image", Shape::Media, &[]),
    sig("Video", Shape::Media, &[]),
    sig("Audio", Shape::Media, &[]),
    sig("Text", Shape::Text, &[]),
    sig("PointCloud", Shape::Media, &[]),
    sig("LabelMap", Shape::LabelMap, DOM),
    sig("InstanceMap", Shape::Media, &[]),
    sig("Keypoint", Shape::Keypoint, DOM),
    sig(
        "RotatedBBox",
        Shape::RotatedBBox,
        &[
            ParamSpec {
                choices: ROTATED_MODES,
                ..param("mode", ParamKind::Str)
            },
            ParamSpec {
                choices: ANGLE_MEASURES,
                ..optional("measure", ParamKind::Str, Some("radian"))
            },
        ],
    ),
    sig("InstanceID", Shape::InstanceID, &[]),
    sig("UniqueID", Shape::UniqueID, &[]),
    sig("ImageShape", Shape::ImageShape, &[]),
];

pub fn builtin(name: &str) -> Option<&'static BuiltinSignature> {
    BUILTINS.iter().find(|b| b.name == name)
}

/// Builtins whose values are unstructured objects addressed by locators.
pub fn is_media_builtin(name: &str) -> bool {
    builtin(name).is_some_and(|b| matches!(b.shape, Shape::Media | Shape::Text | Shape::LabelMap))
}

/// Accepted alternate parameter spellings: (type, alias, canonical).
pub const PARAM_ALIASES: &[(&str, &str, &str)] = &[("LabelMap", "cdom", "dom")];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inventory_is_complete() {
        let names: Vec<_> = BUILTINS.iter().map(|b| b.name).collect();
        for n in [
            "Bool",
            "Int",
            "Num",
            "Str",
            "Coord",
            "Coord3D",
            "Interval",
            "BBox",
            "Polygon",
            "Date",
            "Time",
            "Label",
            "List",
            "Image",
            "Video",
            "Audio",
            "Text",
            "PointCloud",
            "LabelMap",
            "Keypoint",
            "RotatedBBox",
            "InstanceID",
            "UniqueID",
            "ImageShape",
        ] {
            assert!(names.contains(&n), "{n}");
        }
    }

    #[test]
    fn defaults() {
        assert_eq!(
            builtin("List").unwrap().param("ordered").unwrap().default,
            Some("false")
        );
        assert_eq!(
            builtin("RotatedBBox")
                .unwrap()
                .param("measure")
                .unwrap()
                .default,
            Some("radian")
        );
        assert!(builtin("Label").unwrap().param("dom").unwrap().required);
    }

    #[test]
    fn media_classification() {
        assert!(is_media_builtin("Image"));
        assert!(is_media_builtin("LabelMap"));
        assert!(!is_media_builtin("Int"));
        assert!(!is_media_builtin("Nope"));
    }
}
