use std::sync::Arc;

use dsdl_core::model::{Definition, DefinitionRegistry, Entry, Provenance, StructClass};
use dsdl_core::resolve::check_acyclic;
use dsdl_core::syntax::parse_type_expression;
use dsdl_core::Code;
use indexmap::IndexMap;
use proptest::prelude::*;

pub fn name(i: usize) -> String {
    format!("N{i}")
}

/// Brute force: some node reaches itself by a non-empty walk.
pub fn oracle_has_cycle(adj: &[Vec<usize>]) -> bool {
    fn reaches(adj: &[Vec<usize>], from: usize, target: usize, seen: &mut Vec<bool>) -> bool {
        for &n in &adj[from] {
            if n == target {
                return true;
            }
            if !seen[n] {
                seen[n] = true;
                if reaches(adj, n, target, seen) {
                    return true;
                }
            }
        }
        false
    }
    (0..adj.len()).any(|v| reaches(adj, v, v, &mut vec![false; adj.len()]))
}

/// Each successor becomes a field; container wrappers alternate so edges
/// through `List` are exercised too.
pub fn registry(adj: &[Vec<usize>]) -> DefinitionRegistry {
    let mut reg = DefinitionRegistry::new();
    for (i, succ) in adj.iter().enumerate() {
        let mut fields = IndexMap::new();
        fields.insert("n".to_owned(), parse_type_expression("Int").unwrap());
        for (k, &j) in succ.iter().enumerate() {
            let text = if k % 2 == 0 {
                name(j)
            } else {
                format!("List[etype={}]", name(j))
            };
            fields.insert(format!("f{k}"), parse_type_expression(&text).unwrap());
        }
        let s = StructClass {
            name: name(i),
            params: vec![],
            fields,
            optional: vec![],
        };
        reg.insert(
            name(i),
            Entry {
                definition: Definition::Struct(Arc::new(s)),
                provenance: Provenance::default(),
            },
        );
    }
    reg
}

pub fn graph() -> impl Strategy<Value = Vec<Vec<usize>>> {
    (1usize..=8).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::btree_set(0..n, 0..=3), n)
            .prop_map(|sets| sets.into_iter().map(|s| s.into_iter().collect()).collect())
    })
}

/// Detection agrees with the oracle and every reported cycle is a closed
/// walk over real edges.
pub fn check_graph(adj: &[Vec<usize>]) -> Result<(), TestCaseError> {
    let diags = check_acyclic(&registry(adj));
    prop_assert_eq!(!diags.is_empty(), oracle_has_cycle(adj));
    for d in &diags {
        prop_assert_eq!(d.code, Code::CycleDetected);
        let chain = d.message.strip_prefix("circular reference: ").unwrap();
        let nodes: Vec<usize> = chain
            .split(" -> ")
            .map(|s| s[1..].parse().unwrap())
            .collect();
        prop_assert!(nodes.len() >= 2);
        prop_assert_eq!(nodes.first(), nodes.last());
        prop_assert_eq!(&d.path, &format!("defs/N{}", nodes[0]));
        for w in nodes.windows(2) {
            prop_assert!(adj[w[0]].contains(&w[1]), "no edge {} -> {}", w[0], w[1]);
        }
    }
    Ok(())
}
