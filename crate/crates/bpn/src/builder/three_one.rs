use crate::connectivity::terminal_tree;
use crate::error::{invalid, Error, Result};
use crate::graph::{edge, Edge, Graph, SubgraphView, V};
use crate::permutation::ClusterId;
use crate::tree::{STreeFamily, Tree};

use super::finish;
use super::frame::{solve, Unit};

/// Directions `i` sorted by which of the three same-cluster terminals
/// leave towards cluster `-i` through their gamma neighbour.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IndexPartition {
    pub i1: Vec<i32>,
    pub i2: Vec<i32>,
    pub i3: Vec<i32>,
    pub i4: Vec<i32>,
}

/// Split the directions of the common cluster of `x, y, z`: `i1` has only
/// `y` flipped, `i2` both `y` and `z`, `i3` only `z`, `i4` none. Requires
/// `x` itself never flipped (true for the identity).
pub fn index_partition(g: &Graph, x: V, y: V, z: V) -> Result<IndexPartition> {
    let c = g.cluster(x);
    if g.cluster(y) != c || g.cluster(z) != c {
        return invalid("x, y, z are not in one cluster");
    }
    let flipped = |v: V, i: i32| -> Result<bool> {
        let o = g.out(g.gamma(v, i)?);
        Ok(g.cluster(o) == -i)
    };
    let mut p = IndexPartition::default();
    for i in 1..=g.n() as i32 {
        if i == c.abs() {
            continue;
        }
        if flipped(x, i)? {
            return invalid(format!("x leaves direction {i} towards the opposite cluster"));
        }
        match (flipped(y, i)?, flipped(z, i)?) {
            (true, false) => p.i1.push(i),
            (true, true) => p.i2.push(i),
            (false, true) => p.i3.push(i),
            (false, false) => p.i4.push(i),
        }
    }
    Ok(p)
}

/// A tree spanning clusters `i` and `-i` joined through a bridge edge
/// `a - a(1)` that sits in a third cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusiveTree {
    pub tree: Tree,
    pub bridge: Edge,
    pub clusters: (ClusterId, ClusterId),
}

pub fn inclusive_tree(
    g: &Graph,
    i: ClusterId,
    in_terms: &[V],
    out_terms: &[V],
    bridge_host: ClusterId,
    forbidden: &[V],
) -> Result<InclusiveTree> {
    inclusive_tree_with(g, i, in_terms, out_terms, bridge_host, |v| forbidden.contains(&v), &[])
}

pub(crate) fn inclusive_tree_with(
    g: &Graph,
    i: ClusterId,
    in_terms: &[V],
    out_terms: &[V],
    bridge_host: ClusterId,
    blocked: impl Fn(V) -> bool + Sync + Send + Copy,
    cut: &[Edge],
) -> Result<InclusiveTree> {
    if bridge_host == i || bridge_host == -i {
        return invalid("bridge host must be a third cluster");
    }
    let a = g
        .cluster_vertices(bridge_host)
        .into_iter()
        .find(|&a| {
            let b = g.reversal(a, 1);
            g.cluster(g.out(a)) == i && !blocked(a) && !blocked(b) && !blocked(g.out(a)) && !blocked(g.out(b))
        })
        .ok_or(Error::Infeasible { wanted: 1, achievable: 0 })?;
    let b = g.reversal(a, 1);
    let (ah, bh) = (g.out(a), g.out(b));
    let side = |c: ClusterId| SubgraphView::new(g, move |v| g.cluster(v) == c && !blocked(v)).without_edges(cut);
    let mut t1: Vec<V> = in_terms.to_vec();
    t1.push(ah);
    let mut t2: Vec<V> = out_terms.to_vec();
    t2.push(bh);
    let left = terminal_tree(&side(i), &t1)?;
    let right = terminal_tree(&side(-i), &t2)?;
    let mut edges = left.edges.clone();
    edges.extend_from_slice(&right.edges);
    edges.extend([edge(a, ah), edge(a, b), edge(b, bh)]);
    let tree = Tree::from_edges(edges, &[t1, t2].concat());
    Ok(InclusiveTree { tree, bridge: edge(a, b), clusters: (i, -i) })
}

/// Three terminals share a cluster, the fourth is elsewhere.
pub fn build_case_three_one(g: &Graph, s: &[V]) -> Result<STreeFamily> {
    let c = cluster_with(g, s, 3)?;
    let (mut triple, single): (Vec<V>, Vec<V>) = s.iter().partition(|&&v| g.cluster(v) == c);
    let w = single[0];
    let all = triple.clone();
    let deg = |x: V| all.iter().filter(|&&u| g.adjacent(x, u)).count();
    // a vertex adjacent to the other two (or to one) goes first
    triple.sort_by_key(|&x| (std::cmp::Reverse(deg(x)), x));
    let edges = triple.iter().map(|&x| deg(x)).sum::<usize>() / 2;
    let units: Vec<Unit> = s.iter().map(|&v| Unit::Single(v)).collect();
    let attempt = solve(g, s, &triple, &[units], |sn| {
        let pos = |v: V| sn[s.iter().position(|&u| u == v).unwrap()];
        let (x, w) = (pos(triple[0]), pos(w));
        let mut label = format!("edges={edges}/w={}", side_label(g, w));
        if edges == 0 {
            if let Ok(p) = index_partition(g, x, pos(triple[1]), pos(triple[2])) {
                label.push_str(&format!("/I=[{},{},{},{}]", p.i1.len(), p.i2.len(), p.i3.len(), p.i4.len()));
                // only the third set is populated next to a singleton first set
                if p.i1.len() == 1 && p.i2.is_empty() && !p.i3.is_empty() {
                    label.push_str("/mirrored");
                }
            }
        }
        label
    });
    finish(g, s, attempt, vec!["ThreeOne".into()])
}

/// The cluster holding exactly `k` terminals.
pub(crate) fn cluster_with(g: &Graph, s: &[V], k: usize) -> Result<ClusterId> {
    let mut cs: Vec<ClusterId> = s.iter().map(|&v| g.cluster(v)).collect();
    cs.sort_unstable();
    cs.iter()
        .copied()
        .find(|&c| cs.iter().filter(|&&d| d == c).count() == k)
        .ok_or_else(|| Error::InvalidArgument(format!("no cluster holds {k} terminals")))
}

/// Where a normalized vertex sits relative to the anchor cluster n.
pub(crate) fn side_label(g: &Graph, v: V) -> String {
    let n = g.n() as i32;
    match g.cluster(v) {
        c if c == n => "same".into(),
        c if c == -n => "opposite".into(),
        c => format!("dir{c}"),
    }
}
