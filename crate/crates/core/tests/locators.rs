mod support;

use dsdl_core::locator::{parse_locator, resolve_locator, LocatorKind};
use dsdl_core::Code;
use proptest::prelude::*;
use support::locators::{check_noise, env, flag_over_env, EXAMPLES, NOISE};

#[test]
fn three_forms_classify() {
    for (text, variant, addr) in EXAMPLES {
        let loc = parse_locator(text).unwrap();
        assert_eq!(loc.variant_name(), variant, "{text}");
        assert_eq!(resolve_locator(&loc, &env()).unwrap(), addr, "{text}");
    }
    assert_eq!(
        parse_locator("::cuhk.ie::abcd1234xyz").unwrap().kind,
        LocatorKind::ObjectId {
            domain: "cuhk.ie".into(),
            id: "abcd1234xyz".into()
        }
    );
}

#[test]
fn flag_alias_beats_env() {
    assert_eq!(flag_over_env().unwrap(), "/from-flag/abc/001.jpg");
}

#[test]
fn malformed_object_id() {
    assert_eq!(parse_locator("::a::").unwrap_err().code, Code::LocSyntax);
    assert_eq!(parse_locator("::a").unwrap_err().code, Code::LocSyntax);
    assert_eq!(parse_locator("").unwrap_err().code, Code::LocSyntax);
}

#[test]
fn escapes_are_rejected() {
    for text in ["../x", "a/../../x", "/etc/passwd", "$mydir1/../x", "C:/x"] {
        let err = resolve_locator(&parse_locator(text).unwrap(), &env()).unwrap_err();
        assert_eq!(err.code, Code::PathEscape, "{text}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn arbitrary_text_never_panics(text in NOISE) {
        check_noise(&text)?;
    }
}
