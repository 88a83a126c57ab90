//! Disjoint paths, fans and set-to-set path families by unit-capacity
//! vertex-split max flow, plus terminal-connecting trees.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{invalid, Error, Result};
use crate::graph::{SubgraphView, V};
use crate::tree::Tree;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathKind {
    Pair,
    Fan,
    SetToSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathFamily {
    pub kind: PathKind,
    pub paths: Vec<Vec<V>>,
}

impl PathFamily {
    pub fn ending_at(&self, v: V) -> Option<&Vec<V>> {
        self.paths.iter().find(|p| p.last() == Some(&v))
    }

    /// The path whose second vertex is `v`.
    pub fn through_first(&self, v: V) -> Option<&Vec<V>> {
        self.paths.iter().find(|p| p.get(1) == Some(&v))
    }
}

const INF: u32 = u32::MAX / 2;

struct Net {
    to: Vec<usize>,
    cap: Vec<u32>,
    adj: Vec<Vec<usize>>,
    src: usize,
    snk: usize,
}

impl Net {
    fn new(nodes: usize) -> Net {
        Net {
            to: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nodes + 2],
            src: nodes,
            snk: nodes + 1,
        }
    }

    fn add(&mut self, a: usize, b: usize, c: u32) {
        self.adj[a].push(self.to.len());
        self.to.push(b);
        self.cap.push(c);
        self.adj[b].push(self.to.len());
        self.to.push(a);
        self.cap.push(0);
    }

    /// One BFS augmentation by one unit. Returns false if none exists.
    fn augment(&mut self) -> bool {
        let n = self.adj.len();
        let mut via = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[self.src] = true;
        let mut q = VecDeque::from([self.src]);
        while let Some(u) = q.pop_front() {
            if u == self.snk {
                break;
            }
            for &e in &self.adj[u] {
                let w = self.to[e];
                if self.cap[e] > 0 && !seen[w] {
                    seen[w] = true;
                    via[w] = e;
                    q.push_back(w);
                }
            }
        }
        if !seen[self.snk] {
            return false;
        }
        let mut v = self.snk;
        while v != self.src {
            let e = via[v];
            self.cap[e] -= 1;
            self.cap[e ^ 1] += 1;
            v = self.to[e ^ 1];
        }
        true
    }

    fn run(&mut self, limit: usize) -> usize {
        let mut f = 0;
        while f < limit && self.augment() {
            f += 1;
        }
        f
    }

    /// Flow on forward arc `e` (arcs are added in pairs, forward at even index).
    fn flow(&self, e: usize) -> u32 {
        self.cap[e ^ 1]
    }
}

/// Local indexing of the part of a view reachable from `seeds`.
struct Local {
    verts: Vec<V>,
    index: HashMap<V, usize>,
}

fn explore(h: &SubgraphView, seeds: &[V]) -> Local {
    let mut verts = Vec::new();
    let mut index = HashMap::new();
    let mut q = VecDeque::new();
    for &s in seeds {
        if h.contains(s) && !index.contains_key(&s) {
            index.insert(s, verts.len());
            verts.push(s);
            q.push_back(s);
        }
    }
    while let Some(u) = q.pop_front() {
        for w in h.neighbours(u) {
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(w) {
                e.insert(verts.len());
                verts.push(w);
                q.push_back(w);
            }
        }
    }
    Local { verts, index }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Plain,
    Origin,
    End,
}

fn inn(k: usize) -> usize {
    2 * k
}

fn out(k: usize) -> usize {
    2 * k + 1
}

/// Builds the split network. `role` decides arcs in/out of each vertex.
fn split_net(h: &SubgraphView, local: &Local, role: impl Fn(V) -> Role) -> Net {
    let mut net = Net::new(2 * local.verts.len());
    for (k, &v) in local.verts.iter().enumerate() {
        let r = role(v);
        if r == Role::Plain {
            net.add(inn(k), out(k), 1);
        }
        if r == Role::End {
            continue;
        }
        for w in h.neighbours(v) {
            let j = local.index[&w];
            if role(w) != Role::Origin {
                net.add(out(k), inn(j), 1);
            }
        }
    }
    net
}

fn decompose(net: &mut Net, local: &Local) -> Vec<Vec<V>> {
    let mut paths = Vec::new();
    loop {
        let mut node = net.src;
        let mut path: Vec<V> = Vec::new();
        let mut moved = false;
        while node != net.snk {
            let next = net.adj[node]
                .iter()
                .copied()
                .find(|&e| e % 2 == 0 && net.flow(e) > 0);
            let Some(e) = next else { break };
            // consume one unit so the walk is not repeated
            net.cap[e ^ 1] -= 1;
            moved = true;
            node = net.to[e];
            if node < 2 * local.verts.len() {
                let v = local.verts[node / 2];
                if path.last() != Some(&v) {
                    path.push(v);
                }
            }
        }
        if !moved {
            break;
        }
        paths.push(path);
    }
    paths
}

fn check_k(found: usize, k: usize) -> Result<()> {
    if found < k {
        Err(Error::Infeasible { wanted: k, achievable: found })
    } else {
        Ok(())
    }
}

fn pair_flow(h: &SubgraphView, x: V, y: V, limit: usize) -> Result<(Net, Local, usize)> {
    if x == y {
        return invalid("endpoints coincide");
    }
    if !h.contains(x) || !h.contains(y) {
        return invalid("endpoint outside the view");
    }
    let local = explore(h, &[x]);
    if !local.index.contains_key(&y) {
        return Ok((Net::new(0), local, 0));
    }
    let mut net = split_net(h, &local, |v| {
        if v == x {
            Role::Origin
        } else if v == y {
            Role::End
        } else {
            Role::Plain
        }
    });
    let (s, t) = (net.src, net.snk);
    net.add(s, out(local.index[&x]), INF);
    net.add(inn(local.index[&y]), t, INF);
    let f = net.run(limit);
    Ok((net, local, f))
}

/// `k` internally disjoint x–y paths.
pub fn disjoint_paths(h: &SubgraphView, x: V, y: V, k: usize) -> Result<PathFamily> {
    let (mut net, local, f) = pair_flow(h, x, y, k)?;
    check_k(f, k)?;
    let mut paths = decompose(&mut net, &local);
    paths.sort();
    Ok(PathFamily { kind: PathKind::Pair, paths })
}

/// Maximum number of internally disjoint x–y paths.
pub fn min_vertex_cut(h: &SubgraphView, x: V, y: V) -> usize {
    pair_flow(h, x, y, usize::MAX).map(|r| r.2).unwrap_or(0)
}

/// A `k`-fan from `x` to `targets`.
pub fn fan(h: &SubgraphView, x: V, targets: &[V], k: usize) -> Result<PathFamily> {
    fan_pinned(h, x, &[], targets, k)
}

/// A `k`-fan from `x` in which every vertex of `required` ends a path; the
/// rest of the paths end in `optional`. Each path meets the targets only at
/// its end.
pub fn fan_pinned(
    h: &SubgraphView,
    x: V,
    required: &[V],
    optional: &[V],
    k: usize,
) -> Result<PathFamily> {
    if !h.contains(x) {
        return invalid("fan origin outside the view");
    }
    if required.contains(&x) || optional.contains(&x) {
        return invalid("fan origin is a target");
    }
    let local = explore(h, &[x]);
    let is_target = |v: V| required.contains(&v) || optional.contains(&v);
    let mut net = split_net(h, &local, |v| {
        if v == x {
            Role::Origin
        } else if is_target(v) {
            Role::End
        } else {
            Role::Plain
        }
    });
    let (s, t) = (net.src, net.snk);
    net.add(s, out(local.index[&x]), INF);
    let mut req: Vec<V> = required.to_vec();
    req.sort_unstable();
    req.dedup();
    for &r in &req {
        if let Some(&j) = local.index.get(&r) {
            net.add(inn(j), t, 1);
        }
    }
    // sink arcs never lose flow, so required targets stay matched
    let f1 = net.run(req.len());
    if f1 < req.len() {
        return Err(Error::Infeasible { wanted: k, achievable: f1 });
    }
    let mut opt: Vec<V> = optional.iter().copied().filter(|v| !req.contains(v)).collect();
    opt.sort_unstable();
    opt.dedup();
    for &o in &opt {
        if let Some(&j) = local.index.get(&o) {
            net.add(inn(j), t, 1);
        }
    }
    let f = f1 + net.run(k.saturating_sub(f1));
    check_k(f, k)?;
    let mut paths = decompose(&mut net, &local);
    paths.sort();
    Ok(PathFamily { kind: PathKind::Fan, paths })
}

/// `k` fully vertex-disjoint paths from `xs` to `ys`.
pub fn set_to_set_paths(h: &SubgraphView, xs: &[V], ys: &[V], k: usize) -> Result<PathFamily> {
    let local = explore(h, xs);
    let mut net = split_net(h, &local, |v| if ys.contains(&v) { Role::End } else { Role::Plain });
    let (s, t) = (net.src, net.snk);
    let mut xs_sorted: Vec<V> = xs.iter().copied().filter(|&v| h.contains(v)).collect();
    xs_sorted.sort_unstable();
    xs_sorted.dedup();
    for &x in &xs_sorted {
        net.add(s, inn(local.index[&x]), 1);
    }
    for &y in ys {
        if let Some(&j) = local.index.get(&y) {
            net.add(inn(j), t, 1);
        }
    }
    let f = net.run(k);
    check_k(f, k)?;
    let mut paths = decompose(&mut net, &local);
    for p in &mut paths {
        // keep only the stretch after the last source vertex
        if let Some(last) = p.iter().rposition(|v| xs_sorted.binary_search(v).is_ok()) {
            p.drain(..last);
        }
    }
    paths.sort();
    Ok(PathFamily { kind: PathKind::SetToSet, paths })
}

/// Shortest path inside `h` from `from` to any vertex of `to`, ties broken
/// towards smaller ids. Returns the path starting at `from`.
pub fn shortest_path_to_set(h: &SubgraphView, from: V, to: &HashSet<V>) -> Option<Vec<V>> {
    if to.contains(&from) {
        return Some(vec![from]);
    }
    if !h.contains(from) {
        return None;
    }
    let mut parent: HashMap<V, V> = HashMap::from([(from, from)]);
    let mut q = VecDeque::from([from]);
    while let Some(u) = q.pop_front() {
        for w in h.neighbours(u) {
            if parent.contains_key(&w) {
                continue;
            }
            parent.insert(w, u);
            if to.contains(&w) {
                let mut path = vec![w];
                let mut c = w;
                while c != from {
                    c = parent[&c];
                    path.push(c);
                }
                path.reverse();
                return Some(path);
            }
            q.push_back(w);
        }
    }
    None
}

/// A tree in `h` containing all `terminals`, grown by attaching each terminal
/// in the given order along a shortest path to the partial tree.
pub fn terminal_tree(h: &SubgraphView, terminals: &[V]) -> Result<Tree> {
    let Some(&first) = terminals.first() else {
        return invalid("no terminals");
    };
    if terminals.iter().any(|&t| !h.contains(t)) {
        return Err(Error::Infeasible { wanted: terminals.len(), achievable: 0 });
    }
    let mut in_tree: HashSet<V> = HashSet::from([first]);
    let mut edges = Vec::new();
    for (k, &t) in terminals.iter().enumerate().skip(1) {
        if in_tree.contains(&t) {
            continue;
        }
        let Some(path) = shortest_path_to_set(h, t, &in_tree) else {
            return Err(Error::Infeasible { wanted: terminals.len(), achievable: k });
        };
        for w in path.windows(2) {
            edges.push((w[0], w[1]));
        }
        in_tree.extend(path);
    }
    Ok(Tree::from_edges(edges, &[first]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn test_pair_paths_cycle() {
        let g = Graph::build(2).unwrap();
        let h = SubgraphView::full(&g);
        let err = disjoint_paths(&h, 0, 5, 3).unwrap_err();
        assert_eq!(err, Error::Infeasible { wanted: 3, achievable: 2 });
        let fam = disjoint_paths(&h, 0, 5, 2).unwrap();
        assert_eq!(fam.paths.len(), 2);
        assert_eq!(fam.paths.iter().map(|p| p.len() - 1).sum::<usize>(), 8);
    }

    #[test]
    fn test_adjacent_pair() {
        let g = Graph::build(3).unwrap();
        let h = SubgraphView::full(&g);
        let y = g.reversal(0, 1);
        let fam = disjoint_paths(&h, 0, y, 1).unwrap();
        assert_eq!(fam.paths, vec![vec![0, y]]);
        assert_eq!(min_vertex_cut(&h, 0, y), 3);
    }

    #[test]
    fn test_fan_star() {
        let g = Graph::build(3).unwrap();
        let h = SubgraphView::full(&g);
        let nb: Vec<V> = g.neighbours(7).collect();
        let fam = fan(&h, 7, &nb, 3).unwrap();
        assert!(fam.paths.iter().all(|p| p.len() == 2));
    }

    #[test]
    fn test_fan_pinned_unreachable() {
        let g = Graph::build(3).unwrap();
        let c = g.cluster(0);
        let h = SubgraphView::clusters(&g, &[c]);
        let other = g.out(0);
        let nb: Vec<V> = h.neighbours(0).collect();
        assert!(fan_pinned(&h, 0, &[other], &nb, 1).is_err());
    }

    #[test]
    fn test_set_to_set_trivial() {
        let g = Graph::build(3).unwrap();
        let h = SubgraphView::full(&g);
        let fam = set_to_set_paths(&h, &[1, 2, 3], &[1, 2, 3], 3).unwrap();
        assert_eq!(fam.paths, vec![vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn test_terminal_tree_basic() {
        let g = Graph::build(3).unwrap();
        let h = SubgraphView::full(&g);
        assert_eq!(terminal_tree(&h, &[4]).unwrap(), Tree::single(4));
        let y = g.reversal(4, 2);
        let t = terminal_tree(&h, &[4, y]).unwrap();
        assert_eq!(t.edges, vec![crate::graph::edge(4, y)]);
    }
}
