//! Derivation traces: every bound the engine asserts points at a node here.

use std::collections::HashSet;
use std::fmt::Write;

use serde::Serialize;

pub type TraceId = usize;

/// Conditions a conclusion depends on beyond the shipped rules.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Caveats {
    /// Valid modulo the smooth 4-dimensional Poincaré conjecture.
    pub spc4: bool,
    /// Depends on a user-supplied fact.
    pub external: bool,
}

impl Caveats {
    pub const NONE: Caveats = Caveats {
        spc4: false,
        external: false,
    };
    pub const SPC4: Caveats = Caveats {
        spc4: true,
        external: false,
    };
    pub const EXTERNAL: Caveats = Caveats {
        spc4: false,
        external: true,
    };

    pub fn union(self, other: Caveats) -> Caveats {
        Caveats {
            spc4: self.spc4 || other.spc4,
            external: self.external || other.external,
        }
    }

    pub fn is_empty(self) -> bool {
        !self.spc4 && !self.external
    }

    /// Strictly preferable to `other`. Conditions are ranked so that a
    /// conjecture weighs more than a supplied fact; the order is total so
    /// the surviving derivation never depends on rule order.
    pub fn weaker_than(self, other: Caveats) -> bool {
        self < other
    }

    pub fn tags(self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.spc4 {
            v.push("mod SPC4");
        }
        if self.external {
            v.push("external");
        }
        v
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceNode {
    pub id: TraceId,
    pub rule: &'static str,
    pub detail: String,
    pub premises: Vec<TraceId>,
    pub caveats: Caveats,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TraceArena {
    nodes: Vec<TraceNode>,
}

impl TraceArena {
    pub fn new() -> Self {
        TraceArena::default()
    }

    /// Record a derivation step. Caveats of the premises are inherited.
    pub fn add(&mut self, rule: &'static str, detail: String, premises: Vec<TraceId>, own: Caveats) -> TraceId {
        let caveats = self.caveats_of(&premises).union(own);
        let id = self.nodes.len();
        self.nodes.push(TraceNode {
            id,
            rule,
            detail,
            premises,
            caveats,
        });
        id
    }

    pub fn caveats_of(&self, premises: &[TraceId]) -> Caveats {
        premises
            .iter()
            .fold(Caveats::NONE, |acc, &p| acc.union(self.nodes[p].caveats))
    }

    pub fn get(&self, id: TraceId) -> Option<&TraceNode> {
        self.nodes.get(id)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[TraceNode] {
        &self.nodes
    }

    /// Every rule name used anywhere below `id`.
    pub fn rules_below(&self, id: TraceId) -> Vec<&'static str> {
        let mut seen = HashSet::new();
        let mut stack = vec![id];
        let mut out = Vec::new();
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            let node = &self.nodes[n];
            if !out.contains(&node.rule) {
                out.push(node.rule);
            }
            stack.extend(node.premises.iter().copied());
        }
        out
    }

    /// Indented derivation tree; shared subtrees are printed once.
    pub fn explain(&self, id: TraceId) -> Option<String> {
        self.get(id)?;
        let mut out = String::new();
        let mut seen = HashSet::new();
        self.explain_into(id, 0, &mut seen, &mut out);
        Some(out)
    }

    fn explain_into(&self, id: TraceId, depth: usize, seen: &mut HashSet<TraceId>, out: &mut String) {
        let n = &self.nodes[id];
        let tags = n.caveats.tags();
        let suffix = if tags.is_empty() {
            String::new()
        } else {
            format!(" ({})", tags.join(", "))
        };
        let indent = "  ".repeat(depth);
        if !seen.insert(id) {
            let _ = writeln!(out, "{indent}#{id} {} (see above)", n.rule);
            return;
        }
        let _ = writeln!(out, "{indent}#{id} {}: {}{suffix}", n.rule, n.detail);
        for &p in &n.premises {
            self.explain_into(p, depth + 1, seen, out);
        }
    }
}
