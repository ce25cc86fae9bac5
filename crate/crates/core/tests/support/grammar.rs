use dsdl_core::syntax::{parse_type_expression, ArgValue, TypeArg, TypeExpr};
use dsdl_core::Code;
use proptest::prelude::*;

pub fn ident() -> impl Strategy<Value = String> {
    "[A-Za-z_][A-Za-z0-9_]{0,7}"
        .prop_filter("keywords read as booleans", |s| s != "true" && s != "false")
}

pub fn number() -> impl Strategy<Value = String> {
    prop_oneof![
        any::<i32>().prop_map(|i| i.to_string()),
        (any::<i16>(), 0u32..1000).prop_map(|(i, f)| format!("{i}.{f}")),
        (1u32..100, -20i32..20).prop_map(|(m, e)| format!("{m}e{e}")),
    ]
}

pub fn leaf_value() -> impl Strategy<Value = ArgValue> {
    prop_oneof![
        ident().prop_map(ArgValue::Param),
        "[ -~\u{e9}\u{4e2d}]{0,8}".prop_map(ArgValue::Str),
        number().prop_map(ArgValue::Number),
        any::<bool>().prop_map(ArgValue::Bool),
    ]
}

/// Expressions of nesting depth at most `depth`. Positional arguments come
/// first, as the grammar requires.
pub fn expr(depth: u32) -> BoxedStrategy<TypeExpr> {
    let value: BoxedStrategy<ArgValue> = if depth <= 1 {
        leaf_value().boxed()
    } else {
        prop_oneof![leaf_value(), expr(depth - 1).prop_map(ArgValue::Type)].boxed()
    };
    let positional = prop::collection::vec(value.clone(), 0..3);
    let keyed = prop::collection::vec((ident(), value), 0..3);
    (ident(), positional, keyed)
        .prop_map(|(head, pos, keyed)| {
            let mut args: Vec<TypeArg> = pos
                .into_iter()
                .map(|value| TypeArg { key: None, value })
                .collect();
            args.extend(keyed.into_iter().map(|(k, value)| TypeArg {
                key: Some(k),
                value,
            }));
            TypeExpr { head, args }
        })
        .boxed()
}

pub fn depth_of(e: &TypeExpr) -> u32 {
    1 + e
        .args
        .iter()
        .map(|a| match &a.value {
            ArgValue::Type(t) => depth_of(t),
            _ => 0,
        })
        .max()
        .unwrap_or(0)
}

/// A rendered expression with arguments, so every fault below is a real
/// grammar violation.
pub fn with_args() -> impl Strategy<Value = TypeExpr> {
    expr(5).prop_filter("needs arguments", |e| !e.args.is_empty())
}

#[derive(Debug, Clone, Copy)]
pub enum Fault {
    DropFinalBracket,
    ExtraClosingBracket,
    CommaAfterOpen,
    DigitHead,
    EqualsAfterOpen,
    TrailingComma,
}

pub fn fault() -> impl Strategy<Value = Fault> {
    prop_oneof![
        Just(Fault::DropFinalBracket),
        Just(Fault::ExtraClosingBracket),
        Just(Fault::CommaAfterOpen),
        Just(Fault::DigitHead),
        Just(Fault::EqualsAfterOpen),
        Just(Fault::TrailingComma),
    ]
}

pub fn inject(text: &str, f: Fault) -> String {
    let open = text.find('[').expect("expression has arguments");
    match f {
        Fault::DropFinalBracket => text[..text.len() - 1].to_owned(),
        Fault::ExtraClosingBracket => format!("{text}]"),
        Fault::CommaAfterOpen => format!("{},{}", &text[..=open], &text[open + 1..]),
        Fault::DigitHead => format!("9{}", &text[1..]),
        Fault::EqualsAfterOpen => format!("{}={}", &text[..=open], &text[open + 1..]),
        Fault::TrailingComma => format!("{},]", &text[..text.len() - 1]),
    }
}

pub fn check_round_trip(e: &TypeExpr) -> Result<(), TestCaseError> {
    prop_assert!(depth_of(e) <= 5);
    let text = e.render();
    prop_assert_eq!(parse_type_expression(&text), Ok(e.clone()));
    Ok(())
}

pub fn check_fault(e: &TypeExpr, f: Fault) -> Result<(), TestCaseError> {
    let text = inject(&e.render(), f);
    let err = parse_type_expression(&text).expect_err(&text);
    prop_assert!(err.offset <= text.len());
    prop_assert_eq!(err.into_diagnostic("p", &text).code, Code::Grammar);
    Ok(())
}

pub const NOISE: &str = "[\\[\\]=,$\"'a-zA-Z0-9_. \\\\-]{0,40}";

pub fn check_noise(text: &str) -> Result<(), TestCaseError> {
    if let Err(e) = parse_type_expression(text) {
        prop_assert!(e.offset <= text.len());
    }
    Ok(())
}
