//! Runs the built `dsdl` binary with a clean environment.
#![allow(dead_code)]

use std::path::Path;
use std::process::Command;

use dsdl_core::resolve::LIBRARY_PATH_VAR;
use dsdl_core::Diagnostic;
use serde_json::Value;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn dsdl<I, S>(args: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dsdl"));
    cmd.env_remove(LIBRARY_PATH_VAR);
    for (k, _) in std::env::vars_os() {
        if k.to_string_lossy().starts_with("DSDL_ALIAS_") {
            cmd.env_remove(k);
        }
    }
    let out = cmd.args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn on_file(sub: &str, file: &Path, extra: &[&str]) -> Run {
    let mut args: Vec<std::ffi::OsString> = vec![sub.into(), file.into()];
    args.extend(extra.iter().map(Into::into));
    dsdl(args)
}

/// Checks that a JSON report re-serializes to the same bytes and carries
/// exactly the diagnostics and counts of the text-mode run.
pub fn json_round_trip(json: &str, text: &str) -> Result<(), String> {
    let v: Value = serde_json::from_str(json).map_err(|e| format!("not JSON: {e}"))?;
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    if again != json {
        return Err("re-serialized report differs".into());
    }
    let diags: Vec<Diagnostic> =
        serde_json::from_value(v["diagnostics"].clone()).map_err(|e| e.to_string())?;
    let lines: Vec<String> = diags.iter().map(Diagnostic::to_line).collect();
    let text_lines: Vec<&str> = text.lines().take(lines.len()).collect();
    if lines != text_lines {
        return Err(format!("diagnostics differ: {lines:?} vs {text_lines:?}"));
    }
    let counts: dsdl_core::Counts =
        serde_json::from_value(v["counts"].clone()).map_err(|e| e.to_string())?;
    if counts != dsdl_core::Counts::tally(&diags) {
        return Err("counts disagree with diagnostics".into());
    }
    Ok(())
}
