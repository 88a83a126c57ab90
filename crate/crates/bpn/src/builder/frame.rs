//! Common skeleton of the cases where S is spread over several clusters.
//!
//! After normalization the anchor lies in cluster n. Tree number d (for d in
//! 1..n) lives in clusters d and -d: every terminal reaches that pair by a
//! short leg (through its gamma-d neighbour, its out-edge, an edge to another
//! terminal, or one of n - 1 disjoint paths inside its cluster when it
//! shares the cluster with a partner), and the landings are joined by a tree
//! there. Landings on both sides are joined by a bridge `a, a(1)` in
//! cluster -n or n.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::connectivity::{disjoint_paths, terminal_tree, PathFamily};
use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph, SubgraphView, V};
use crate::tree::{STreeFamily, Tree};
use crate::verifier::verify_trees;

use super::ledger::Ledger;
use super::three_one::inclusive_tree_with;

/// Terminals handled together. A pair shares a cluster and is joined by
/// disjoint paths inside it when possible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Unit {
    Single(V),
    Pair(V, V),
}

#[derive(Clone, Debug)]
struct Bundle {
    inner: Vec<V>,
    edges: Vec<Edge>,
    land: Vec<V>,
    label: String,
}

impl Bundle {
    fn new(inner: Vec<V>, edges: Vec<Edge>, land: Vec<V>, label: &str) -> Self {
        Bundle { inner, edges, land, label: label.to_string() }
    }

    fn join(a: &Bundle, b: &Bundle) -> Bundle {
        Bundle {
            inner: [a.inner.clone(), b.inner.clone()].concat(),
            edges: [a.edges.clone(), b.edges.clone()].concat(),
            land: [a.land.clone(), b.land.clone()].concat(),
            label: format!("{}+{}", a.label, b.label),
        }
    }
}

impl Unit {
    /// The same terminals, each on its own.
    pub fn singles(units: &[Unit]) -> Vec<Unit> {
        units
            .iter()
            .flat_map(|u| match *u {
                Unit::Single(t) => vec![Unit::Single(t)],
                Unit::Pair(a, b) => vec![Unit::Single(a), Unit::Single(b)],
            })
            .collect()
    }

    fn map(self, f: impl Fn(V) -> V) -> Unit {
        match self {
            Unit::Single(t) => Unit::Single(f(t)),
            Unit::Pair(a, b) => Unit::Pair(f(a), f(b)),
        }
    }
}

/// Try each unit split and each anchor in turn: move the anchor to the
/// identity, build, map back, keep the first family that verifies. `label` describes the configuration in
/// normalized coordinates.
pub(crate) fn solve(
    g: &Graph,
    s: &[V],
    anchors: &[V],
    splits: &[Vec<Unit>],
    label: impl Fn(&[V]) -> String,
) -> Result<STreeFamily> {
    let want = g.n() - 1;
    for (units, &x) in splits.iter().flat_map(|u| anchors.iter().map(move |x| (u, x))) {
        let (fwd, back) = g.normalize(x);
        let sn: Vec<V> = s.iter().map(|&v| fwd.apply(g, v)).collect();
        let un: Vec<Unit> = units.iter().map(|u| u.map(|v| fwd.apply(g, v))).collect();
        let Ok((trees, notes)) = run(g, &sn, &un) else {
            continue;
        };
        let trees: Vec<Tree> = trees.iter().map(|t| t.map(|v| back.apply(g, v))).collect();
        if !verify_trees(g, s, &trees, want).ok {
            continue;
        }
        let mut trace = vec![format!("anchor={x}"), label(&sn)];
        if units.len() == s.len() && units.iter().any(|u| matches!(u, Unit::Single(_))) && splits.len() > 1 {
            trace.push("pairs-split".into());
        }
        trace.extend(notes);
        return Ok(STreeFamily { s: s.to_vec(), trees, case_trace: trace, repaired: false });
    }
    Err(Error::Infeasible { wanted: want, achievable: 0 })
}

const SEARCH_CAP: usize = 100_000;

/// Build the n - 1 trees; `s` and `units` are in normalized coordinates.
pub(crate) fn run(g: &Graph, s: &[V], units: &[Unit]) -> Result<(Vec<Tree>, Vec<String>)> {
    let n = g.n() as i32;
    let dirs: Vec<i32> = (1..n).collect();
    let is_term = |v: V| s.contains(&v);

    let pair_paths: Vec<Option<PathFamily>> = units
        .iter()
        .map(|u| match *u {
            Unit::Pair(a, b) => {
                let c = g.cluster(a);
                let view = SubgraphView::new(g, move |v| g.cluster(v) == c && (!is_term(v) || v == a || v == b));
                disjoint_paths(&view, a, b, g.n() - 1).ok()
            }
            Unit::Single(_) => None,
        })
        .collect();

    let opts: Vec<Vec<Vec<Bundle>>> = dirs
        .iter()
        .map(|&d| {
            units
                .iter()
                .zip(&pair_paths)
                .map(|(u, pp)| match *u {
                    Unit::Single(t) => single_options(g, s, t, d),
                    Unit::Pair(a, b) => pair_options(g, s, a, b, d, pp.as_ref()),
                })
                .collect()
        })
        .collect();

    let mut search = Search {
        s,
        opts: &opts,
        owner: HashMap::new(),
        eowner: HashMap::new(),
        pick: vec![vec![None; units.len()]; dirs.len()],
        nodes: 0,
    };
    if !search.go() {
        return Err(Error::Infeasible { wanted: dirs.len(), achievable: 0 });
    }
    let chosen: Vec<Vec<&Bundle>> = (0..dirs.len())
        .map(|k| (0..units.len()).map(|u| &opts[k][u][search.pick[k][u].expect("complete")]).collect())
        .collect();

    let mut led = Ledger::new(s);
    for (k, bs) in chosen.iter().enumerate() {
        for b in bs {
            for &v in &b.inner {
                led.claim(v, k);
            }
        }
    }

    let mut trees = Vec::new();
    let mut notes = Vec::new();
    for (k, bs) in chosen.iter().enumerate() {
        let d = dirs[k];
        let mut land: Vec<V> = bs.iter().flat_map(|b| b.land.iter().copied()).collect();
        land.sort_unstable();
        land.dedup();
        let cut: Vec<Edge> = search.eowner.iter().filter(|&(_, &o)| o != k).map(|(&e, _)| e).collect();
        let (hub, how) = hub(g, &mut led, k, d, &land, &cut)?;
        for &(a, b) in &hub {
            if s.contains(&a) && s.contains(&b) {
                search.eowner.insert(edge(a, b), k);
            }
        }
        let mut edges: Vec<Edge> = bs.iter().flat_map(|b| b.edges.iter().copied()).collect();
        edges.extend(hub);
        trees.push(span(s, &edges)?);
        let labels: Vec<&str> = bs.iter().map(|b| b.label.as_str()).collect();
        notes.push(format!("T{d}:{}{how}", labels.join(",")));
    }
    Ok((trees, notes))
}

fn single_options(g: &Graph, s: &[V], t: V, d: i32) -> Vec<Bundle> {
    let is_term = |v: V| s.contains(&v);
    if g.cluster(t).abs() == d {
        return vec![Bundle::new(vec![], vec![], vec![t], "self")];
    }
    let mut out = Vec::new();
    let mut via_done = Vec::new();
    let m = g.gamma(t, d).expect("direction differs from the cluster");
    if is_term(m) {
        out.push(Bundle::new(vec![], vec![edge(t, m)], vec![], "via"));
        via_done.push(m);
    } else {
        // the out-neighbour of a gamma-d vertex always lies in cluster d or -d
        let o = g.out(m);
        let inner = if is_term(o) { vec![m] } else { vec![m, o] };
        out.push(Bundle::new(inner, vec![edge(t, m), edge(m, o)], vec![o], "gamma"));
    }
    let o = g.out(t);
    if g.cluster(o).abs() == d {
        let inner = if is_term(o) { vec![] } else { vec![o] };
        out.push(Bundle::new(inner, vec![edge(t, o)], vec![o], "out"));
    }
    for &u in s {
        if u != t && !via_done.contains(&u) && g.adjacent(t, u) {
            out.push(Bundle::new(vec![], vec![edge(t, u)], vec![], "via"));
        }
    }
    out.extend(walks(g, s, t, d));
    out
}

const WALKS: usize = 4;

/// Shortest paths inside the cluster of `t` to vertices whose out-neighbour
/// lies in cluster d or -d, skipping the one-step exits already offered.
fn walks(g: &Graph, s: &[V], t: V, d: i32) -> Vec<Bundle> {
    let c = g.cluster(t);
    let mut parent: HashMap<V, V> = HashMap::from([(t, t)]);
    let mut q = VecDeque::from([t]);
    let mut found = Vec::new();
    while let Some(u) = q.pop_front() {
        if found.len() >= WALKS {
            break;
        }
        for w in g.neighbours(u) {
            if g.cluster(w) != c || s.contains(&w) || parent.contains_key(&w) {
                continue;
            }
            parent.insert(w, u);
            q.push_back(w);
            let o = g.out(w);
            if u != t && g.cluster(o).abs() == d && !s.contains(&o) {
                let mut path = vec![w];
                let mut x = w;
                while x != t {
                    x = parent[&x];
                    path.push(x);
                }
                path.reverse();
                let mut inner: Vec<V> = path[1..].to_vec();
                inner.push(o);
                let mut edges: Vec<Edge> = path.windows(2).map(|p| edge(p[0], p[1])).collect();
                edges.push(edge(w, o));
                found.push(Bundle::new(inner, edges, vec![o], "walk"));
            }
        }
    }
    found
}

fn pair_options(g: &Graph, s: &[V], a: V, b: V, d: i32, paths: Option<&PathFamily>) -> Vec<Bundle> {
    let is_term = |v: V| s.contains(&v);
    if g.cluster(a).abs() == d {
        return vec![Bundle::new(vec![], vec![], vec![a, b], "self")];
    }
    let mut out = Vec::new();
    let m = g.gamma(a, d).expect("direction differs from the cluster");
    if m == b {
        // the two are adjacent: the direct edge serves direction d, leaving
        // through whichever out-edge reaches clusters d, -d
        for src in [b, a] {
            let o = g.out(src);
            if g.cluster(o).abs() == d {
                let inner = if is_term(o) { vec![] } else { vec![o] };
                out.push(Bundle::new(inner, vec![edge(a, b), edge(src, o)], vec![o], "pair-edge"));
            }
        }
    } else if let Some(p) = paths.and_then(|f| f.through_first(m)) {
        let o = g.out(m);
        let mut inner: Vec<V> = p[1..p.len() - 1].to_vec();
        if !is_term(o) {
            inner.push(o);
        }
        let mut edges: Vec<Edge> = p.windows(2).map(|w| edge(w[0], w[1])).collect();
        edges.push(edge(m, o));
        out.push(Bundle::new(inner, edges, vec![o], "pair"));
    }
    let sa = single_options(g, s, a, d);
    let sb = single_options(g, s, b, d);
    for x in &sa {
        for y in &sb {
            if x.land.is_empty() && y.land.is_empty() {
                continue;
            }
            out.push(Bundle::join(x, y));
        }
    }
    out
}

struct Search<'a> {
    s: &'a [V],
    opts: &'a [Vec<Vec<Bundle>>],
    owner: HashMap<V, usize>,
    eowner: HashMap<Edge, usize>,
    pick: Vec<Vec<Option<usize>>>,
    nodes: usize,
}

impl Search<'_> {
    fn fits(&self, k: usize, b: &Bundle) -> bool {
        let s = self.s;
        !b.inner.iter().any(|v| self.owner.get(v).is_some_and(|&o| o != k))
            && !b.edges.iter().any(|&(x, y)| {
                s.contains(&x) && s.contains(&y) && self.eowner.get(&edge(x, y)).is_some_and(|&o| o != k)
            })
    }

    /// Choose a bundle per unit and tree so that different trees share no
    /// inner vertex and no terminal-terminal edge. The slot with the fewest
    /// fitting bundles is filled first.
    fn go(&mut self) -> bool {
        let opts = self.opts;
        let mut best: Option<(usize, usize, Vec<usize>)> = None;
        for k in 0..opts.len() {
            for u in 0..opts[k].len() {
                if self.pick[k][u].is_some() {
                    continue;
                }
                let fit: Vec<usize> = (0..opts[k][u].len()).filter(|&i| self.fits(k, &opts[k][u][i])).collect();
                if best.as_ref().is_none_or(|b| fit.len() < b.2.len()) {
                    best = Some((k, u, fit));
                }
            }
        }
        let Some((k, u, fit)) = best else {
            return true;
        };
        for oi in fit {
            self.nodes += 1;
            if self.nodes > SEARCH_CAP {
                return false;
            }
            let b = &opts[k][u][oi];
            let s = self.s;
            let mut added_v = Vec::new();
            let mut added_e = Vec::new();
            for &v in &b.inner {
                if self.owner.insert(v, k).is_none() {
                    added_v.push(v);
                }
            }
            for &(x, y) in &b.edges {
                if s.contains(&x) && s.contains(&y) && self.eowner.insert(edge(x, y), k).is_none() {
                    added_e.push(edge(x, y));
                }
            }
            self.pick[k][u] = Some(oi);
            let complete = self.pick[k].iter().all(|p| p.is_some());
            if (!complete || self.reaches_all(k)) && self.go() {
                return true;
            }
            self.pick[k][u] = None;
            for v in added_v {
                self.owner.remove(&v);
            }
            for e in added_e {
                self.eowner.remove(&e);
            }
        }
        false
    }

    /// Every terminal of tree `k` is joined to a landing, or to the others
    /// directly, once its landings are assumed connected.
    fn reaches_all(&self, k: usize) -> bool {
        const HUB: V = V::MAX;
        let mut adj: HashMap<V, Vec<V>> = HashMap::new();
        let mut any_land = false;
        for (u, oi) in self.pick[k].iter().enumerate() {
            let b = &self.opts[k][u][oi.expect("complete")];
            for &(x, y) in &b.edges {
                adj.entry(x).or_default().push(y);
                adj.entry(y).or_default().push(x);
            }
            for &l in &b.land {
                any_land = true;
                adj.entry(HUB).or_default().push(l);
                adj.entry(l).or_default().push(HUB);
            }
        }
        let start = if any_land { HUB } else { self.s[0] };
        let mut seen = HashSet::from([start]);
        let mut q = VecDeque::from([start]);
        while let Some(x) = q.pop_front() {
            for &y in adj.get(&x).map(|v| v.as_slice()).unwrap_or(&[]) {
                if seen.insert(y) {
                    q.push_back(y);
                }
            }
        }
        self.s.iter().all(|t| seen.contains(t))
    }
}

/// Join the landings of tree `k` inside clusters `d` and `-d`.
fn hub(g: &Graph, led: &mut Ledger, k: usize, d: i32, land: &[V], cut: &[Edge]) -> Result<(Vec<Edge>, String)> {
    if land.len() <= 1 {
        return Ok((Vec::new(), String::new()));
    }
    let n = g.n() as i32;
    let pos: Vec<V> = land.iter().copied().filter(|&v| g.cluster(v) == d).collect();
    let neg: Vec<V> = land.iter().copied().filter(|&v| g.cluster(v) == -d).collect();
    let mut found: Option<(Tree, String)> = None;
    {
        let l: &Ledger = led;
        let blocked = |v: V| !(l.usable(v, k) || land.contains(&v));
        if pos.is_empty() || neg.is_empty() {
            let side = if pos.is_empty() { -d } else { d };
            let view = SubgraphView::new(g, move |v| g.cluster(v) == side && !blocked(v)).without_edges(cut);
            if let Ok(t) = terminal_tree(&view, land) {
                found = Some((t, String::new()));
            }
        } else {
            for host in [-n, n] {
                if let Ok(it) = inclusive_tree_with(g, d, &pos, &neg, host, blocked, cut) {
                    found = Some((it.tree, format!(" bridge@{host}")));
                    break;
                }
            }
        }
        if found.is_none() {
            let cs = [d, -d, n, -n];
            let view = SubgraphView::new(g, move |v| cs.contains(&g.cluster(v)) && !blocked(v)).without_edges(cut);
            if let Ok(t) = terminal_tree(&view, land) {
                found = Some((t, " detour".to_string()));
            }
        }
        if found.is_none() {
            // last resort: any vertex nobody holds yet
            let view = SubgraphView::new(g, move |v| !blocked(v)).without_edges(cut);
            if let Ok(t) = terminal_tree(&view, land) {
                found = Some((t, " wide-detour".to_string()));
            }
        }
    }
    let (t, how) = found.ok_or(Error::Infeasible { wanted: 1, achievable: 0 })?;
    for &v in &t.vertices {
        led.claim(v, k);
    }
    Ok((t.edges, how))
}

/// A spanning tree of the union of `edges`, trimmed to the terminals.
fn span(s: &[V], edges: &[Edge]) -> Result<Tree> {
    let mut adj: HashMap<V, Vec<V>> = HashMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    for list in adj.values_mut() {
        list.sort_unstable();
        list.dedup();
    }
    let mut seen = HashSet::from([s[0]]);
    let mut q = VecDeque::from([s[0]]);
    let mut kept = Vec::new();
    while let Some(x) = q.pop_front() {
        for &y in adj.get(&x).map(|v| v.as_slice()).unwrap_or(&[]) {
            if seen.insert(y) {
                kept.push(edge(x, y));
                q.push_back(y);
            }
        }
    }
    if s.iter().any(|t| !seen.contains(t)) {
        return Err(Error::Infeasible { wanted: 1, achievable: 0 });
    }
    Ok(Tree::from_edges(kept, &[s[0]]).prune_to(s))
}
