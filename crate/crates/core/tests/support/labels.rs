use std::sync::Arc;

use dsdl_core::model::ClassDomain;
use dsdl_core::validate::validate_label;
use dsdl_core::{Code, RawValue};
use proptest::prelude::*;

/// Independent list-scan oracle for the 1-based tree path of class `i`:
/// at each level, the rank of the class's prefix among the distinct
/// prefixes under the same parent, in order of first appearance.
pub fn oracle_index_path(classes: &[String], i: usize) -> Vec<usize> {
    let segs: Vec<Vec<&str>> = classes.iter().map(|c| c.split('.').collect()).collect();
    let target = &segs[i];
    (0..target.len())
        .map(|level| {
            let parent = &target[..level];
            let mut seen: Vec<&str> = Vec::new();
            for s in &segs {
                if s.len() > level && &s[..level] == parent && !seen.contains(&s[level]) {
                    seen.push(s[level]);
                }
            }
            1 + seen.iter().position(|x| *x == target[level]).unwrap()
        })
        .collect()
}

pub fn segment() -> impl Strategy<Value = String> {
    // Small alphabet so siblings share parents often.
    "[a-e][a-z0-9_]{0,2}"
}

/// Flat, or hierarchical with 2 or 3 levels; at most 50 distinct classes.
pub fn domain_classes() -> impl Strategy<Value = Vec<String>> {
    (1usize..=3).prop_flat_map(|depth| {
        prop::collection::vec(prop::collection::vec(segment(), depth), 1..=50).prop_map(|paths| {
            let mut out: Vec<String> = Vec::new();
            for p in paths {
                let s = p.join(".");
                if !out.contains(&s) {
                    out.push(s);
                }
            }
            out
        })
    })
}

/// Name, integer, qualified name, qualified index and tree-path selectors
/// must all resolve to the class the oracle describes.
pub fn check_domain(classes: &[String]) -> Result<(), TestCaseError> {
    let dom = ClassDomain::new("Dom", vec![], classes, vec![]).unwrap();
    let holder = Arc::new(dom.clone());
    let find = move |n: &str| (n == "Dom").then(|| holder.clone());
    let none = |_: &str| -> Option<Arc<ClassDomain>> { None };
    for (i, name) in classes.iter().enumerate() {
        let ordinal = i + 1;
        let by_name = validate_label(&RawValue::Str(name.clone()), Some(&dom), &none).unwrap();
        let by_index = validate_label(&RawValue::Int(ordinal as i64), Some(&dom), &none).unwrap();
        prop_assert_eq!(&by_name, &by_index);
        prop_assert_eq!(by_name.ordinal, ordinal);
        prop_assert_eq!(&by_name.path, name);
        prop_assert_eq!(&by_name.index_path, &oracle_index_path(classes, i));

        let qualified =
            validate_label(&RawValue::Str(format!("Dom::{name}")), None, &find).unwrap();
        let indexed =
            validate_label(&RawValue::Str(format!("Dom[{ordinal}]")), None, &find).unwrap();
        prop_assert_eq!(&qualified, &by_name);
        prop_assert_eq!(&indexed, &by_name);

        if by_name.index_path.len() > 1 {
            let tree = by_name
                .index_path
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(".");
            let via_tree =
                validate_label(&RawValue::Str(format!("Dom[{tree}]")), None, &find).unwrap();
            prop_assert_eq!(&via_tree, &by_name);
        }
    }
    let past_end = validate_label(&RawValue::Int(classes.len() as i64 + 1), Some(&dom), &none);
    prop_assert_eq!(past_end.unwrap_err().code, Code::ClassIndexRange);
    Ok(())
}
