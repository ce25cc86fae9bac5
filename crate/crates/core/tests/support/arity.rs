use std::sync::Arc;

use dsdl_core::model::ClassDomain;
use dsdl_core::resolve::{AngleMeasure, ConcreteType, RotatedMode};
use dsdl_core::validate::{validate_value, ValueOptions};
use dsdl_core::{Code, RawValue};

pub fn ones(n: usize) -> RawValue {
    RawValue::List((0..n).map(|_| RawValue::Int(1)).collect())
}

pub fn codes(raw: &RawValue, t: &ConcreteType) -> Vec<(Code, String)> {
    let mut diags = Vec::new();
    validate_value(raw, t, "v", ValueOptions::default(), &mut diags);
    diags.into_iter().map(|d| (d.code, d.path)).collect()
}

/// Fixed-length numeric shapes and the only length each accepts.
pub fn shapes() -> Vec<(&'static str, ConcreteType, usize)> {
    vec![
        ("Coord", ConcreteType::Coord, 2),
        ("Coord3D", ConcreteType::Coord3D, 3),
        ("Interval", ConcreteType::Interval, 2),
        ("BBox", ConcreteType::BBox, 4),
        (
            "RotatedBBox xyxy",
            ConcreteType::RotatedBBox {
                mode: RotatedMode::Xyxy,
                measure: AngleMeasure::Radian,
            },
            8,
        ),
        (
            "RotatedBBox xywht",
            ConcreteType::RotatedBBox {
                mode: RotatedMode::Xywht,
                measure: AngleMeasure::Degree,
            },
            5,
        ),
        ("ImageShape", ConcreteType::ImageShape, 2),
    ]
}

pub fn keypoint_type(k: usize) -> ConcreteType {
    let names: Vec<String> = (0..k).map(|i| format!("kp{i}")).collect();
    let dom = ClassDomain::new("KP", vec![], &names, vec![]).unwrap();
    ConcreteType::Keypoint { dom: Arc::new(dom) }
}

/// Every length 0..=10 per shape, and 3K against its neighbours for
/// keypoints. Returns one message per disagreement.
pub fn failures() -> Vec<String> {
    let arity_at_root = vec![(Code::Arity, "v".to_owned())];
    let mut out = Vec::new();
    for (label, t, arity) in shapes() {
        for n in 0..=10 {
            let got = codes(&ones(n), &t);
            let want = if n == arity {
                vec![]
            } else {
                arity_at_root.clone()
            };
            if got != want {
                out.push(format!("{label} len {n}: {got:?}"));
            }
        }
    }
    for k in [1usize, 5, 17] {
        let t = keypoint_type(k);
        let mut cases = vec![
            (3 * k, true),
            (3 * k - 1, false),
            (3 * k + 1, false),
            (3 * (k + 1), false),
        ];
        if k > 1 {
            cases.push((3 * (k - 1), false));
        }
        for (n, ok) in cases {
            let got = codes(&ones(n), &t);
            let want = if ok { vec![] } else { arity_at_root.clone() };
            if got != want {
                out.push(format!("Keypoint K={k} len {n}: {got:?}"));
            }
        }
    }
    out
}
