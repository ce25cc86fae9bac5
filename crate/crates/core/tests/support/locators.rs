use std::collections::HashMap;
use std::sync::Arc;

use dsdl_core::locator::{parse_locator, resolve_locator, AliasSource, ResolutionEnvironment};
use dsdl_core::Code;
use proptest::prelude::*;

/// Data root `/d`, env alias `mydir1`, and one mapped object id.
pub fn env() -> ResolutionEnvironment {
    let mut env = ResolutionEnvironment::with_data_root("/d");
    env.aliases.set(AliasSource::Env, "mydir1", "/env");
    let mut ids = HashMap::new();
    ids.insert(
        ("cuhk.ie".to_owned(), "abcd1234xyz".to_owned()),
        "/ids/x".to_owned(),
    );
    env.id_mapper = Some(Arc::new(ids));
    env
}

/// Text, variant, address under [`env`].
pub const EXAMPLES: [(&str, &str, &str); 3] = [
    ("abc/001.jpg", "relative", "/d/abc/001.jpg"),
    ("$mydir1/abc/001.jpg", "alias", "/env/abc/001.jpg"),
    ("::cuhk.ie::abcd1234xyz", "object-id", "/ids/x"),
];

pub const NOISE: &str = "[:$/\\\\.a-z0-9_ \u{e9}-]{0,24}";

/// Parse errors are syntax errors; resolved addresses never climb out.
pub fn check_noise(text: &str) -> Result<(), TestCaseError> {
    match parse_locator(text) {
        Ok(loc) => {
            prop_assert_eq!(&loc.text, text);
            if let Ok(addr) = resolve_locator(&loc, &env()) {
                prop_assert!(!addr.split('/').any(|s| s == ".."), "{}", addr);
            }
        }
        Err(d) => prop_assert_eq!(d.code, Code::LocSyntax),
    }
    Ok(())
}

/// Resolves `$mydir1/...` with the same alias bound by env and by flag.
pub fn flag_over_env() -> Result<String, dsdl_core::Diagnostic> {
    let mut env = env();
    env.aliases
        .add_env_vars([("DSDL_ALIAS_mydir1", "/from-env")]);
    env.aliases.set(AliasSource::Flag, "mydir1", "/from-flag");
    resolve_locator(&parse_locator("$mydir1/abc/001.jpg")?, &env)
}
