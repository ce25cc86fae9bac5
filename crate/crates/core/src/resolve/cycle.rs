//! Reference-cycle detection over struct definitions.

use indexmap::IndexMap;

use crate::diagnostic::{Code, Diagnostic};
use crate::model::builtins::builtin;
use crate::model::registry::{Definition, DefinitionRegistry};

/// Directed reference graph: each struct points at every registered
/// definition named anywhere in its field types. Builtin names resolve to the
/// builtin and contribute no edge.
pub fn reference_graph(reg: &DefinitionRegistry) -> IndexMap<&str, Vec<&str>> {
    let mut graph = IndexMap::new();
    for (name, entry) in reg.iter() {
        let mut out: Vec<&str> = Vec::new();
        if let Definition::Struct(s) = &entry.definition {
            for expr in s.fields.values() {
                for r in expr.referenced_names() {
                    if builtin(r).is_none() && !out.contains(&r) {
                        if let Some((key, _)) = reg.iter().find(|(k, _)| *k == r) {
                            out.push(key);
                        }
                    }
                }
            }
        }
        graph.insert(name, out);
    }
    graph
}

/// Reports one `CYCLE_DETECTED` per back edge found by a depth-first walk in
/// registry order. Empty means acyclic.
pub fn check_acyclic(reg: &DefinitionRegistry) -> Vec<Diagnostic> {
    let graph = reference_graph(reg);
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut marks = vec![Mark::New; graph.len()];
    let mut diags = Vec::new();

    for root in 0..graph.len() {
        if marks[root] != Mark::New {
            continue;
        }
        // Explicit stack of (node, next edge) keeps deep graphs off the call stack.
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        marks[root] = Mark::Active;
        while let Some(&mut (node, ref mut edge)) = stack.last_mut() {
            let succ = &graph[node];
            if *edge == succ.len() {
                marks[node] = Mark::Done;
                stack.pop();
                continue;
            }
            let next = graph
                .get_index_of(succ[*edge])
                .expect("edge target registered");
            *edge += 1;
            match marks[next] {
                Mark::New => {
                    marks[next] = Mark::Active;
                    stack.push((next, 0));
                }
                Mark::Active => {
                    let start = stack
                        .iter()
                        .position(|&(n, _)| n == next)
                        .expect("active node on stack");
                    let mut names: Vec<&str> = stack[start..]
                        .iter()
                        .map(|&(n, _)| graph.get_index(n).unwrap().0.as_ref())
                        .collect();
                    names.push(graph.get_index(next).unwrap().0);
                    let origin = names[0];
                    diags.push(Diagnostic::error(
                        Code::CycleDetected,
                        format!("defs/{origin}"),
                        format!("circular reference: {}", names.join(" -> ")),
                    ));
                }
                Mark::Done => {}
            }
        }
    }
    diags
}
