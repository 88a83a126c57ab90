use std::collections::{BTreeSet, HashMap};

use crate::graph::{edge, Edge, V};

/// A vertex set and edge set, both kept sorted. Whether it really is a tree
/// is the verifier's business.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tree {
    pub vertices: Vec<V>,
    pub edges: Vec<Edge>,
}

impl Tree {
    pub fn single(v: V) -> Tree {
        Tree { vertices: vec![v], edges: Vec::new() }
    }

    pub fn from_edges(edges: impl IntoIterator<Item = Edge>, extra: &[V]) -> Tree {
        let es: BTreeSet<Edge> = edges.into_iter().map(|(a, b)| edge(a, b)).collect();
        let mut vs: BTreeSet<V> = extra.iter().copied().collect();
        for &(a, b) in &es {
            vs.insert(a);
            vs.insert(b);
        }
        Tree { vertices: vs.into_iter().collect(), edges: es.into_iter().collect() }
    }

    pub fn path(vs: &[V]) -> Tree {
        Tree::from_edges(vs.windows(2).map(|w| (w[0], w[1])), vs)
    }

    pub fn has_vertex(&self, v: V) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn has_edge(&self, a: V, b: V) -> bool {
        self.edges.binary_search(&edge(a, b)).is_ok()
    }

    pub fn map(&self, f: impl Fn(V) -> V) -> Tree {
        Tree::from_edges(
            self.edges.iter().map(|&(a, b)| (f(a), f(b))),
            &self.vertices.iter().map(|&v| f(v)).collect::<Vec<_>>(),
        )
    }

    /// Repeatedly strip leaves not in `keep`. On a tree this leaves the
    /// minimal subtree spanning `keep`.
    pub fn prune_to(&self, keep: &[V]) -> Tree {
        let mut deg: HashMap<V, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        let mut nb: HashMap<V, Vec<V>> = HashMap::new();
        for &(a, b) in &self.edges {
            *deg.get_mut(&a).unwrap() += 1;
            *deg.get_mut(&b).unwrap() += 1;
            nb.entry(a).or_default().push(b);
            nb.entry(b).or_default().push(a);
        }
        let mut gone: BTreeSet<V> = BTreeSet::new();
        let mut stack: Vec<V> = self
            .vertices
            .iter()
            .copied()
            .filter(|v| deg[v] <= 1 && !keep.contains(v))
            .collect();
        while let Some(v) = stack.pop() {
            if !gone.insert(v) {
                continue;
            }
            for &w in nb.get(&v).map(|x| x.as_slice()).unwrap_or(&[]) {
                if gone.contains(&w) {
                    continue;
                }
                let d = deg.get_mut(&w).unwrap();
                *d -= 1;
                if *d <= 1 && !keep.contains(&w) {
                    stack.push(w);
                }
            }
        }
        Tree {
            vertices: self.vertices.iter().copied().filter(|v| !gone.contains(v)).collect(),
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|(a, b)| !gone.contains(a) && !gone.contains(b))
                .collect(),
        }
    }
}

/// Trees over a common terminal set, plus the construction path taken.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct STreeFamily {
    pub s: Vec<V>,
    pub trees: Vec<Tree>,
    pub case_trace: Vec<String>,
    pub repaired: bool,
}

impl STreeFamily {
    pub fn map(&self, f: impl Fn(V) -> V + Copy) -> STreeFamily {
        STreeFamily {
            s: self.s.iter().map(|&v| f(v)).collect(),
            trees: self.trees.iter().map(|t| t.map(f)).collect(),
            case_trace: self.case_trace.clone(),
            repaired: self.repaired,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_prune() {
        // 0-1-2-3 with a branch 1-4-5
        let t = Tree::from_edges([(0, 1), (1, 2), (2, 3), (1, 4), (4, 5)], &[]);
        let p = t.prune_to(&[0, 2]);
        assert_eq!(p.vertices, vec![0, 1, 2]);
        assert_eq!(p.edges, vec![(0, 1), (1, 2)]);
        assert_eq!(t.prune_to(&[3]).vertices, vec![3]);
    }

    #[test]
    fn test_path() {
        let t = Tree::path(&[5, 2, 9]);
        assert_eq!(t.vertices, vec![2, 5, 9]);
        assert!(t.has_edge(9, 2));
        assert!(!t.has_edge(5, 9));
    }
}
