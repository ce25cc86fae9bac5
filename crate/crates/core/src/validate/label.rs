//! Label values: `cat`, `2`, `MyClassDom::cat`, `MyClassDom[2]`.

use std::sync::Arc;

use crate::diagnostic::{Code, Diagnostic};
use crate::model::class_domain::{lookup_class, ClassDomain, ClassRef, Selector};
use crate::syntax::is_identifier;
use crate::value::RawValue;

/// Parsed label text before domain lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelSyntax {
    Bare(Selector),
    Qualified { domain: String, selector: Selector },
}

fn index_selector(text: &str) -> Option<Vec<usize>> {
    if text.is_empty() {
        return None;
    }
    text.split('.').map(|p| p.parse::<usize>().ok()).collect()
}

pub fn parse_label(raw: &RawValue) -> Result<LabelSyntax, String> {
    if let Some(i) = raw.as_integer() {
        return usize::try_from(i)
            .map(|i| LabelSyntax::Bare(Selector::Index(vec![i])))
            .map_err(|_| format!("label index {i} is negative"));
    }
    let Some(text) = raw.as_str() else {
        return Err(format!(
            "a label must be a string or an integer, found {}",
            raw.kind_name()
        ));
    };
    if text.is_empty() {
        return Err("empty label".into());
    }
    if let Some((dom, rest)) = text.split_once("::") {
        if !is_identifier(dom) || rest.is_empty() {
            return Err(format!("malformed qualified label {text:?}"));
        }
        return Ok(LabelSyntax::Qualified {
            domain: dom.to_owned(),
            selector: Selector::parse(rest),
        });
    }
    if let Some(open) = text.find('[') {
        if let Some(idx) = text[open + 1..].strip_suffix(']').and_then(index_selector) {
            let dom = &text[..open];
            if !is_identifier(dom) {
                return Err(format!("malformed qualified label {text:?}"));
            }
            return Ok(LabelSyntax::Qualified {
                domain: dom.to_owned(),
                selector: Selector::Index(idx),
            });
        }
    }
    if let Some(idx) = index_selector(text) {
        return Ok(LabelSyntax::Bare(Selector::Index(idx)));
    }
    Ok(LabelSyntax::Bare(Selector::Name(text.to_owned())))
}

/// Resolves a label against the bound domain, or, when unbound, against
/// the domain named in a qualified label via `find_domain`.
pub fn validate_label(
    raw: &RawValue,
    dom: Option<&ClassDomain>,
    find_domain: &dyn Fn(&str) -> Option<Arc<ClassDomain>>,
) -> Result<ClassRef, Diagnostic> {
    let syntax = parse_label(raw).map_err(|m| Diagnostic::error(Code::LabelSyntax, "", m))?;
    match (syntax, dom) {
        (LabelSyntax::Bare(sel), Some(d)) => lookup_class(d, &sel),
        (LabelSyntax::Bare(_), None) => Err(Diagnostic::error(
            Code::LabelSyntax,
            "",
            format!(
                "label {} needs a domain; use the Dom::name form",
                raw.to_json_string()
            ),
        )),
        (LabelSyntax::Qualified { domain, selector }, Some(d)) => {
            if domain != d.name {
                return Err(Diagnostic::error(
                    Code::LabelDomainMismatch,
                    "",
                    format!(
                        "label names domain {domain} but the field is bound to {}",
                        d.name
                    ),
                ));
            }
            lookup_class(d, &selector)
        }
        (LabelSyntax::Qualified { domain, selector }, None) => match find_domain(&domain) {
            Some(d) => lookup_class(&d, &selector),
            None => Err(Diagnostic::error(
                Code::ClassNotFound,
                "",
                format!("class domain {domain} is not defined"),
            )),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn none(_: &str) -> Option<Arc<ClassDomain>> {
        None
    }

    #[test]
    fn four_syntaxes_agree() {
        let d = ClassDomain::flat("MyClassDom", &["dog", "cat", "fish", "tiger"]);
        let cat = validate_label(&"cat".into(), Some(&d), &none).unwrap();
        assert_eq!(
            validate_label(&RawValue::Int(2), Some(&d), &none).unwrap(),
            cat
        );
        assert_eq!(
            validate_label(&"MyClassDom::cat".into(), Some(&d), &none).unwrap(),
            cat
        );
        assert_eq!(
            validate_label(&"MyClassDom[2]".into(), Some(&d), &none).unwrap(),
            cat
        );
        assert_eq!(cat.index_path, [2]);
    }

    #[test]
    fn unbound_lookup() {
        let coco = Arc::new(ClassDomain::flat("COCO", &["person", "bicycle", "cat"]));
        let names: Vec<String> = ["animal.dog.hound", "animal.cat"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let my = Arc::new(ClassDomain::new("MyDom", vec![], &names, vec![]).unwrap());
        let find = move |n: &str| match n {
            "COCO" => Some(coco.clone()),
            "MyDom" => Some(my.clone()),
            _ => None,
        };
        assert_eq!(
            validate_label(&"COCO::cat".into(), None, &find)
                .unwrap()
                .domain,
            "COCO"
        );
        assert_eq!(
            validate_label(&"COCO[3]".into(), None, &find).unwrap().path,
            "cat"
        );
        let r = validate_label(&"MyDom::animal.dog.hound".into(), None, &find).unwrap();
        assert_eq!(r.index_path.len(), 3);
        assert_eq!(
            validate_label(&"Nope::x".into(), None, &find)
                .unwrap_err()
                .code,
            Code::ClassNotFound
        );
        assert_eq!(
            validate_label(&"cat".into(), None, &find).unwrap_err().code,
            Code::LabelSyntax
        );
    }

    #[test]
    fn errors() {
        let d = ClassDomain::flat("MyClassDom", &["dog", "cat", "fish", "tiger"]);
        let code = |v: RawValue| validate_label(&v, Some(&d), &none).unwrap_err().code;
        assert_eq!(code("MyClassDom[9]".into()), Code::ClassIndexRange);
        assert_eq!(code(RawValue::Int(0)), Code::ClassIndexRange);
        assert_eq!(code(RawValue::Int(-1)), Code::LabelSyntax);
        assert_eq!(code("Other::cat".into()), Code::LabelDomainMismatch);
        assert_eq!(code("horse".into()), Code::ClassNotFound);
        assert_eq!(code("".into()), Code::LabelSyntax);
        assert_eq!(code(RawValue::Bool(true)), Code::LabelSyntax);
        assert_eq!(code(RawValue::Float(1.5)), Code::LabelSyntax);
    }
}
