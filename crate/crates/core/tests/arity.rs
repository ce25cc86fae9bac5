mod support;

use dsdl_core::Code;
use support::arity::{codes, failures, keypoint_type, ones};

#[test]
fn lengths_match_the_table() {
    let f = failures();
    assert!(f.is_empty(), "{f:#?}");
}

#[test]
fn nested_keypoint_triples() {
    let t = keypoint_type(2);
    let nested = dsdl_core::RawValue::List(vec![ones(3), ones(3)]);
    assert!(codes(&nested, &t).is_empty());
    let short = dsdl_core::RawValue::List(vec![ones(3), ones(2)]);
    assert_eq!(codes(&short, &t)[0].0, Code::Arity);
}
