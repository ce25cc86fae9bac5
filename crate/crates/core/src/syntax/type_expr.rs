//! The type-expression mini-language: `Label[dom=MyClassDom]`,
//! `List[etype=LocalObjectEntry[cdom=$cdom]]`, `Time[fmt="%H:%M"]`.
//!
//! ```text
//! TypeExpr := Ident ('[' Arg (',' Arg)* ']')?
//! Arg      := (Ident '=')? Value
//! Value    := TypeExpr | '$' Ident | string | number | bool
//! ```
//!
//! Whitespace between tokens is ignored. Positional arguments must come
//! before keyed ones. Numbers are kept as their decimal text.

use std::fmt;

use crate::diagnostic::{Code, Diagnostic};
use crate::value::RawValue;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeExpr {
    pub head: String,
    pub args: Vec<TypeArg>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeArg {
    pub key: Option<String>,
    pub value: ArgValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ArgValue {
    Type(TypeExpr),
    /// `$name` reference to an enclosing struct parameter.
    Param(String),
    Str(String),
    /// Exact decimal text of a numeric literal.
    Number(String),
    Bool(bool),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at offset {offset}")]
pub struct GrammarError {
    pub offset: usize,
    pub message: String,
}

impl GrammarError {
    pub fn into_diagnostic(self, path: &str, text: &str) -> Diagnostic {
        Diagnostic::error(
            Code::Grammar,
            path,
            format!("invalid type expression {text:?}: {self}"),
        )
    }
}

impl TypeExpr {
    pub fn named(head: impl Into<String>) -> Self {
        TypeExpr {
            head: head.into(),
            args: Vec::new(),
        }
    }

    pub fn with_arg(mut self, key: Option<&str>, value: ArgValue) -> Self {
        self.args.push(TypeArg {
            key: key.map(str::to_owned),
            value,
        });
        self
    }

    /// Canonical text form. Emits exactly what the AST holds, so positional
    /// arguments stay positional.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    fn render_into(&self, out: &mut String) {
        out.push_str(&self.head);
        if self.args.is_empty() {
            return;
        }
        out.push('[');
        for (i, arg) in self.args.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            if let Some(key) = &arg.key {
                out.push_str(key);
                out.push('=');
            }
            arg.value.render_into(out);
        }
        out.push(']');
    }

    /// Every `$param` name referenced anywhere inside the expression.
    pub fn param_refs(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params<'a>(&'a self, out: &mut Vec<&'a str>) {
        for arg in &self.args {
            match &arg.value {
                ArgValue::Param(p) => out.push(p),
                ArgValue::Type(t) => t.collect_params(out),
                _ => {}
            }
        }
    }

    /// Every identifier used as a type head or nested type argument.
    pub fn referenced_names(&self) -> Vec<&str> {
        let mut out = vec![self.head.as_str()];
        for arg in &self.args {
            if let ArgValue::Type(t) = &arg.value {
                out.extend(t.referenced_names());
            }
        }
        out
    }
}

impl ArgValue {
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    fn render_into(&self, out: &mut String) {
        match self {
            ArgValue::Type(t) => t.render_into(out),
            ArgValue::Param(p) => {
                out.push('$');
                out.push_str(p);
            }
            ArgValue::Str(s) => {
                out.push('"');
                for c in s.chars() {
                    if c == '"' || c == '\\' {
                        out.push('\\');
                    }
                    out.push(c);
                }
                out.push('"');
            }
            ArgValue::Number(n) => out.push_str(n),
            ArgValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for ArgValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_type_expression(text: &str) -> Result<TypeExpr, GrammarError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let expr = p.type_expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected {:?}", p.peek_char())));
    }
    Ok(expr)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> GrammarError {
        GrammarError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        std::str::from_utf8(&self.src[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
            .unwrap_or('\u{fffd}')
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<String, GrammarError> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.pos += 1,
            Some(_) => {
                return Err(self.error(format!("expected identifier, found {:?}", self.peek_char())))
            }
            None => return Err(self.error("expected identifier, found end of input")),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn type_expr(&mut self) -> Result<TypeExpr, GrammarError> {
        let head = self.ident()?;
        self.skip_ws();
        let mut args = Vec::new();
        if self.peek() == Some(b'[') {
            self.pos += 1;
            let mut seen_keyed = false;
            loop {
                self.skip_ws();
                match self.peek() {
                    Some(b']') if args.is_empty() => return Err(self.error("empty argument list")),
                    Some(b']') => return Err(self.error("trailing comma in argument list")),
                    None => return Err(self.error("unclosed '['")),
                    _ => {}
                }
                let arg_start = self.pos;
                let arg = self.arg()?;
                match arg.key {
                    Some(_) => seen_keyed = true,
                    None if seen_keyed => {
                        return Err(GrammarError {
                            offset: arg_start,
                            message: "positional argument after keyed argument".into(),
                        })
                    }
                    None => {}
                }
                args.push(arg);
                self.skip_ws();
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b']') => {
                        self.pos += 1;
                        break;
                    }
                    None => return Err(self.error("unclosed '['")),
                    Some(_) => {
                        return Err(self
                            .error(format!("expected ',' or ']', found {:?}", self.peek_char())))
                    }
                }
            }
        }
        Ok(TypeExpr { head, args })
    }

    fn arg(&mut self) -> Result<TypeArg, GrammarError> {
        let save = self.pos;
        if matches!(self.peek(), Some(c) if c.is_ascii_alphabetic() || c == b'_') {
            let key = self.ident()?;
            self.skip_ws();
            if self.peek() == Some(b'=') {
                self.pos += 1;
                self.skip_ws();
                let value = self.value()?;
                return Ok(TypeArg {
                    key: Some(key),
                    value,
                });
            }
            self.pos = save;
        }
        Ok(TypeArg {
            key: None,
            value: self.value()?,
        })
    }

    fn value(&mut self) -> Result<ArgValue, GrammarError> {
        match self.peek() {
            None => Err(self.error("expected value, found end of input")),
            Some(b'$') => {
                self.pos += 1;
                Ok(ArgValue::Param(self.ident()?))
            }
            Some(q @ (b'"' | b'\'')) => self.string(q),
            Some(c) if c.is_ascii_digit() || c == b'-' || c == b'+' || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let save = self.pos;
                let word = self.ident()?;
                let after = self.pos;
                self.skip_ws();
                let bracket = self.peek() == Some(b'[');
                self.pos = after;
                match word.as_str() {
                    "true" if !bracket => Ok(ArgValue::Bool(true)),
                    "false" if !bracket => Ok(ArgValue::Bool(false)),
                    _ => {
                        self.pos = save;
                        Ok(ArgValue::Type(self.type_expr()?))
                    }
                }
            }
            Some(_) => Err(self.error(format!("expected value, found {:?}", self.peek_char()))),
        }
    }

    fn string(&mut self, quote: u8) -> Result<ArgValue, GrammarError> {
        let start = self.pos;
        self.pos += 1;
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None => {
                    return Err(GrammarError {
                        offset: start,
                        message: "unterminated string".into(),
                    })
                }
                Some(b'\\') => {
                    self.pos += 1;
                    match self.peek() {
                        Some(c) => {
                            out.push(c);
                            self.pos += 1;
                        }
                        None => return Err(self.error("dangling escape")),
                    }
                }
                Some(c) if c == quote => {
                    self.pos += 1;
                    break;
                }
                Some(c) => {
                    out.push(c);
                    self.pos += 1;
                }
            }
        }
        Ok(ArgValue::Str(String::from_utf8_lossy(&out).into_owned()))
    }

    fn number(&mut self) -> Result<ArgValue, GrammarError> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        let digits = |p: &mut Self| {
            let s = p.pos;
            while matches!(p.peek(), Some(c) if c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos - s
        };
        let int_digits = digits(self);
        let mut frac_digits = 0;
        if self.peek() == Some(b'.') {
            self.pos += 1;
            frac_digits = digits(self);
            if frac_digits == 0 {
                return Err(self.error("expected digits after '.'"));
            }
        }
        if int_digits == 0 && frac_digits == 0 {
            return Err(self.error("malformed number"));
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some(b'-' | b'+')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                return Err(self.error("malformed exponent"));
            }
        }
        Ok(ArgValue::Number(
            String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
        ))
    }
}

/// Reads a field or sample type given either as an expression string or as a
/// mapping `{$type: Name, param: value, ...}`.
pub fn parse_sample_type_spec(raw: &RawValue, path: &str) -> Result<TypeExpr, Diagnostic> {
    match raw {
        RawValue::Str(text) => {
            parse_type_expression(text).map_err(|e| e.into_diagnostic(path, text))
        }
        RawValue::Map(map) => {
            let Some(ty) = map.get("$type") else {
                return Err(Diagnostic::error(
                    Code::MissingTypeKey,
                    path,
                    "type mapping lacks the `$type` key",
                ));
            };
            let mut expr = match ty {
                RawValue::Str(text) => parse_type_expression(text)
                    .map_err(|e| e.into_diagnostic(&format!("{path}/$type"), text))?,
                other => {
                    return Err(Diagnostic::error(
                        Code::Grammar,
                        format!("{path}/$type"),
                        format!("`$type` must be a string, found {}", other.kind_name()),
                    ))
                }
            };
            for (key, value) in map.iter().filter(|(k, _)| *k != "$type") {
                let arg_path = format!("{path}/{key}");
                if !is_identifier(key) {
                    return Err(Diagnostic::error(
                        Code::Grammar,
                        arg_path,
                        format!("parameter name {key:?} is not an identifier"),
                    ));
                }
                let value = mapping_arg_value(value, &arg_path)?;
                expr.args.push(TypeArg {
                    key: Some(key.to_owned()),
                    value,
                });
            }
            Ok(expr)
        }
        other => Err(Diagnostic::error(
            Code::Grammar,
            path,
            format!(
                "type specification must be a string or mapping, found {}",
                other.kind_name()
            ),
        )),
    }
}

fn mapping_arg_value(raw: &RawValue, path: &str) -> Result<ArgValue, Diagnostic> {
    Ok(match raw {
        RawValue::Str(s) => {
            if let Some(name) = s.strip_prefix('$').filter(|n| is_identifier(n)) {
                ArgValue::Param(name.to_owned())
            } else {
                match parse_type_expression(s) {
                    Ok(t) => ArgValue::Type(t),
                    Err(_) => ArgValue::Str(s.clone()),
                }
            }
        }
        RawValue::Int(i) => ArgValue::Number(i.to_string()),
        RawValue::Float(f) => ArgValue::Number(f.to_string()),
        RawValue::Bool(b) => ArgValue::Bool(*b),
        RawValue::Map(_) => ArgValue::Type(parse_sample_type_spec(raw, path)?),
        other => {
            return Err(Diagnostic::error(
                Code::Grammar,
                path,
                format!("unsupported parameter value of kind {}", other.kind_name()),
            ))
        }
    })
}
