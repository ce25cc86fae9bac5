//! Descriptive statistics over validated samples.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::resolve::instantiate::ConcreteType;
use crate::validate::TypedValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FillRate {
    pub filled: usize,
    pub total: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DatasetSummary {
    pub samples: usize,
    /// Keyed by `Dom::path`.
    pub label_frequency: BTreeMap<String, usize>,
    /// Top-level fields of the sample type, in declaration order.
    pub field_fill: Vec<(String, FillRate)>,
    /// Keyed by locator form: `relative`, `alias`, `object-id`.
    pub locator_forms: BTreeMap<String, usize>,
}

pub fn summarize(sample_type: &ConcreteType, samples: &[TypedValue]) -> DatasetSummary {
    let mut s = DatasetSummary {
        samples: samples.len(),
        ..Default::default()
    };
    if let Some(st) = sample_type.as_struct() {
        s.field_fill = st
            .fields
            .keys()
            .map(|name| {
                let filled = samples
                    .iter()
                    .filter(|v| {
                        v.as_record()
                            .and_then(|r| r.get(name))
                            .is_some_and(|f| !f.is_null())
                    })
                    .count();
                (
                    name.clone(),
                    FillRate {
                        filled,
                        total: samples.len(),
                    },
                )
            })
            .collect();
    }
    for sample in samples {
        sample.walk(&mut |v| match v {
            TypedValue::Label(r) => *s.label_frequency.entry(r.qualified()).or_default() += 1,
            TypedValue::Media(m) => {
                *s.locator_forms
                    .entry(m.locator.variant_name().to_owned())
                    .or_default() += 1
            }
            _ => {}
        });
    }
    s
}
