use indexmap::IndexMap;

use crate::syntax::TypeExpr;

/// A record schema. Parametric when `params` is non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructClass {
    pub name: String,
    pub params: Vec<String>,
    pub fields: IndexMap<String, TypeExpr>,
    /// Subset of field names, in declaration order.
    pub optional: Vec<String>,
}

impl StructClass {
    pub fn is_optional(&self, field: &str) -> bool {
        self.optional.iter().any(|o| o == field)
    }

    pub fn is_parametric(&self) -> bool {
        !self.params.is_empty()
    }
}
