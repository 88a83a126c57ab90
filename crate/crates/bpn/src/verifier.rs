//! Certifies that trees really are internally disjoint S-trees. Knows nothing
//! about how they were built.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::graph::{Edge, Graph, V};
use crate::tree::{STreeFamily, Tree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    NotATree,
    MissingTerminal,
    VertexOverlap,
    EdgeOverlap,
    EdgeNotInGraph,
    WrongCount,
}

impl ViolationKind {
    pub fn label(self) -> &'static str {
        match self {
            ViolationKind::NotATree => "not-a-tree",
            ViolationKind::MissingTerminal => "missing-terminal",
            ViolationKind::VertexOverlap => "vertex-overlap",
            ViolationKind::EdgeOverlap => "edge-overlap",
            ViolationKind::EdgeNotInGraph => "edge-not-in-graph",
            ViolationKind::WrongCount => "wrong-count",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub vertices: Vec<V>,
    pub edges: Vec<Edge>,
    pub trees: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} trees={:?}", self.kind.label(), self.trees)?;
        if !self.vertices.is_empty() {
            write!(f, " vertices={:?}", self.vertices)?;
        }
        if !self.edges.is_empty() {
            write!(f, " edges={:?}", self.edges)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    fn from(violations: Vec<Violation>) -> Self {
        VerificationReport { ok: violations.is_empty(), violations }
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

fn violation(kind: ViolationKind, vertices: Vec<V>, edges: Vec<Edge>, trees: Vec<usize>) -> Violation {
    Violation { kind, vertices, edges, trees }
}

fn tree_violations(g: &Graph, t: &Tree, idx: usize, out: &mut Vec<Violation>) {
    let vs: HashSet<V> = t.vertices.iter().copied().collect();
    let not_tree = |vv: Vec<V>, ee: Vec<Edge>| violation(ViolationKind::NotATree, vv, ee, vec![idx]);
    if vs.is_empty() {
        out.push(not_tree(vec![], vec![]));
        return;
    }
    if vs.len() != t.vertices.len() {
        out.push(not_tree(vec![], vec![]));
    }
    let mut seen_edges = HashSet::new();
    let mut adj: HashMap<V, Vec<V>> = HashMap::new();
    let mut bad_shape = false;
    for &(a, b) in &t.edges {
        if !g.adjacent(a, b) {
            out.push(violation(ViolationKind::EdgeNotInGraph, vec![], vec![(a, b)], vec![idx]));
        }
        let key = (a.min(b), a.max(b));
        if a == b || !seen_edges.insert(key) || !vs.contains(&a) || !vs.contains(&b) {
            out.push(not_tree(vec![], vec![(a, b)]));
            bad_shape = true;
            continue;
        }
        // a cycle shows up as an edge whose ends are already connected
        if let Some(cycle) = path_between(&adj, a, b) {
            out.push(not_tree(cycle, vec![(a, b)]));
            bad_shape = true;
        }
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if bad_shape {
        return;
    }
    if t.edges.len() + 1 != vs.len() {
        let start = t.vertices[0];
        let mut reach = HashSet::from([start]);
        let mut q = VecDeque::from([start]);
        while let Some(u) = q.pop_front() {
            for &w in adj.get(&u).map(|x| x.as_slice()).unwrap_or(&[]) {
                if reach.insert(w) {
                    q.push_back(w);
                }
            }
        }
        let mut stray: Vec<V> = vs.difference(&reach).copied().collect();
        stray.sort_unstable();
        out.push(not_tree(stray, vec![]));
    }
}

fn path_between(adj: &HashMap<V, Vec<V>>, a: V, b: V) -> Option<Vec<V>> {
    let mut parent: HashMap<V, V> = HashMap::from([(a, a)]);
    let mut q = VecDeque::from([a]);
    while let Some(u) = q.pop_front() {
        if u == b {
            let mut path = vec![b];
            let mut c = b;
            while c != a {
                c = parent[&c];
                path.push(c);
            }
            return Some(path);
        }
        for &w in adj.get(&u).map(|x| x.as_slice()).unwrap_or(&[]) {
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(w) {
                e.insert(u);
                q.push_back(w);
            }
        }
    }
    None
}

/// Connected, acyclic, `|E| = |V| - 1`, and every edge present in `g`.
pub fn verify_tree(g: &Graph, t: &Tree) -> VerificationReport {
    let mut out = Vec::new();
    tree_violations(g, t, 0, &mut out);
    VerificationReport::from(out)
}

/// Every tree is an S-tree, pairwise vertex intersections are exactly `s`,
/// no edge is shared, and there are `expected` trees.
pub fn verify_family(g: &Graph, s: &[V], fam: &STreeFamily, expected: usize) -> VerificationReport {
    verify_trees(g, s, &fam.trees, expected)
}

pub fn verify_trees(g: &Graph, s: &[V], trees: &[Tree], expected: usize) -> VerificationReport {
    let mut out = Vec::new();
    if trees.len() != expected {
        out.push(violation(ViolationKind::WrongCount, vec![], vec![], vec![]));
    }
    let terms: HashSet<V> = s.iter().copied().collect();
    let mut owner: HashMap<V, usize> = HashMap::new();
    let mut edge_owner: HashMap<Edge, usize> = HashMap::new();
    let mut shared_v: HashMap<(usize, usize), Vec<V>> = HashMap::new();
    let mut shared_e: HashMap<(usize, usize), Vec<Edge>> = HashMap::new();
    for (i, t) in trees.iter().enumerate() {
        tree_violations(g, t, i, &mut out);
        let vs: HashSet<V> = t.vertices.iter().copied().collect();
        let mut missing: Vec<V> = terms.iter().copied().filter(|v| !vs.contains(v)).collect();
        if !missing.is_empty() {
            missing.sort_unstable();
            out.push(violation(ViolationKind::MissingTerminal, missing, vec![], vec![i]));
        }
        for &v in &vs {
            if terms.contains(&v) {
                continue;
            }
            match owner.get(&v) {
                Some(&j) if j != i => shared_v.entry((j, i)).or_default().push(v),
                Some(_) => {}
                None => {
                    owner.insert(v, i);
                }
            }
        }
        let es: HashSet<Edge> = t.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        for e in es {
            match edge_owner.get(&e) {
                Some(&j) if j != i => shared_e.entry((j, i)).or_default().push(e),
                Some(_) => {}
                None => {
                    edge_owner.insert(e, i);
                }
            }
        }
    }
    let mut sv: Vec<_> = shared_v.into_iter().collect();
    sv.sort();
    for ((a, b), mut vs) in sv {
        vs.sort_unstable();
        out.push(violation(ViolationKind::VertexOverlap, vs, vec![], vec![a, b]));
    }
    let mut se: Vec<_> = shared_e.into_iter().collect();
    se.sort();
    for ((a, b), mut es) in se {
        es.sort_unstable();
        out.push(violation(ViolationKind::EdgeOverlap, vec![], es, vec![a, b]));
    }
    VerificationReport::from(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge;

    #[test]
    fn test_single_edge_ok() {
        let g = Graph::build(3).unwrap();
        let w = g.reversal(0, 1);
        assert!(verify_tree(&g, &Tree::path(&[0, w])).ok);
        assert!(verify_tree(&g, &Tree::single(5)).ok);
    }

    #[test]
    fn test_cycle_detected() {
        let g = Graph::build(2).unwrap();
        // BP2 is one 8-cycle; take all its edges
        let t = Tree::from_edges(g.edges(), &[]);
        let r = verify_tree(&g, &t);
        assert!(r.has(ViolationKind::NotATree));
        let cyc = r.violations.iter().find(|v| v.kind == ViolationKind::NotATree).unwrap();
        assert_eq!(cyc.vertices.len(), 8);
    }

    #[test]
    fn test_edge_not_in_graph() {
        let g = Graph::build(3).unwrap();
        let far = (1..48).find(|&v| !g.adjacent(0, v)).unwrap();
        let t = Tree { vertices: vec![0, far], edges: vec![edge(0, far)] };
        assert!(verify_tree(&g, &t).has(ViolationKind::EdgeNotInGraph));
    }

    #[test]
    fn test_disconnected() {
        let g = Graph::build(3).unwrap();
        let t = Tree { vertices: vec![0, 10], edges: vec![] };
        assert!(verify_tree(&g, &t).has(ViolationKind::NotATree));
    }

    #[test]
    fn test_family_overlaps() {
        let g = Graph::build(3).unwrap();
        let a = g.reversal(0, 1);
        let b = g.reversal(a, 2);
        let t = Tree::path(&[0, a, b]);
        let s = [0, b];
        let r = verify_trees(&g, &s, &[t.clone(), t.clone()], 2);
        assert!(r.has(ViolationKind::VertexOverlap));
        assert!(r.has(ViolationKind::EdgeOverlap));
        let far = (0..48).find(|&v| !t.has_vertex(v)).unwrap();
        let r = verify_trees(&g, &[0, b, far], &[t], 1);
        assert!(r.has(ViolationKind::MissingTerminal));
        let r = verify_trees(&g, &s, &[], 1);
        assert!(r.has(ViolationKind::WrongCount));
    }
}
