//! The burnt pancake graph with dense vertex ids.

use std::collections::{HashSet, VecDeque};
use std::sync::OnceLock;

use crate::error::{invalid, Result};
use crate::permutation::{ClusterId, SignedPerm};

/// Dense vertex id. Ids follow the lexicographic order of the signed sequences.
pub type V = u32;

/// Undirected edge, always stored as `(min, max)`.
pub type Edge = (V, V);

pub fn edge(a: V, b: V) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Largest `n` we materialize adjacency tables for.
const MATERIALIZE_MAX: usize = 5;
pub const DEFAULT_MAX_N: usize = 7;

/// Construction ceiling, overridable with `BPN_MAX_N`.
pub fn max_n() -> usize {
    std::env::var("BPN_MAX_N")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

pub struct Graph {
    n: usize,
    count: usize,
    syms: Vec<i8>,
    adj: Option<Vec<V>>,
    // block[p]: number of completions once positions 0..=p are fixed
    block: Vec<usize>,
    lower: OnceLock<Box<Graph>>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BP{}", self.n)
    }
}

impl Graph {
    pub fn build(n: usize) -> Result<Graph> {
        Self::build_with_limit(n, max_n())
    }

    pub fn build_with_limit(n: usize, n_max: usize) -> Result<Graph> {
        if n < 2 {
            return invalid(format!("n must be at least 2, got {n}"));
        }
        if n > n_max {
            return invalid(format!("n = {n} exceeds the construction ceiling {n_max}"));
        }
        Ok(Self::build_unchecked(n))
    }

    fn build_unchecked(n: usize) -> Graph {
        let mut block = vec![1usize; n];
        for p in (0..n.saturating_sub(1)).rev() {
            let rest = n - p - 1;
            block[p] = block[p + 1] * 2 * rest;
        }
        let count = block[0] * 2 * n;
        let mut g = Graph {
            n,
            count,
            syms: vec![0; count * n],
            adj: None,
            block,
            lower: OnceLock::new(),
        };
        let mut buf = vec![0i32; n];
        for v in 0..count {
            g.unrank_into(v, &mut buf);
            for (k, &s) in buf.iter().enumerate() {
                g.syms[v * n + k] = s as i8;
            }
        }
        if n <= MATERIALIZE_MAX {
            let mut adj = vec![0; count * n];
            for v in 0..count as V {
                for i in 1..=n {
                    adj[v as usize * n + i - 1] = g.reversal_computed(v, i);
                }
            }
            g.adj = Some(adj);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.count
    }

    pub fn edge_count(&self) -> usize {
        self.count * self.n / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = V> {
        0..self.count as V
    }

    fn unrank_into(&self, mut r: usize, out: &mut [i32]) {
        let n = self.n;
        let mut rest: Vec<i32> = (1..=n as i32).collect();
        for (p, slot) in out.iter_mut().enumerate() {
            let idx = r / self.block[p];
            r %= self.block[p];
            let k = rest.len();
            // sorted signed candidates: -m_k .. -m_1, m_1 .. m_k
            let s = if idx < k { -rest[k - 1 - idx] } else { rest[idx - k] };
            rest.retain(|&m| m != s.abs());
            *slot = s;
        }
    }

    fn rank_of(&self, syms: &[i32]) -> V {
        let mut used = [false; 64];
        let mut r = 0usize;
        for (p, &s) in syms.iter().enumerate() {
            let m = s.unsigned_abs() as usize;
            let mut less = 0;
            let mut greater = 0;
            let mut total = 0;
            for q in 1..=self.n {
                if !used[q] {
                    total += 1;
                    if q < m {
                        less += 1;
                    } else if q > m {
                        greater += 1;
                    }
                }
            }
            let idx = if s < 0 { greater } else { total + less };
            r += idx * self.block[p];
            used[m] = true;
        }
        r as V
    }

    pub fn symbols(&self, v: V) -> &[i8] {
        let s = v as usize * self.n;
        &self.syms[s..s + self.n]
    }

    pub fn perm(&self, v: V) -> SignedPerm {
        SignedPerm::from_vec_unchecked(self.symbols(v).iter().map(|&s| s as i32).collect())
    }

    pub fn id(&self, x: &SignedPerm) -> Option<V> {
        if x.n() != self.n {
            return None;
        }
        Some(self.rank_of(x.symbols()))
    }

    pub fn contains(&self, v: V) -> bool {
        (v as usize) < self.count
    }

    fn reversal_computed(&self, v: V, i: usize) -> V {
        let mut buf = [0i32; 64];
        let n = self.n;
        for (k, &s) in self.symbols(v).iter().enumerate() {
            buf[k] = s as i32;
        }
        buf[..i].reverse();
        for s in &mut buf[..i] {
            *s = -*s;
        }
        self.rank_of(&buf[..n])
    }

    /// `v(i)` for `1 <= i <= n`.
    pub fn reversal(&self, v: V, i: usize) -> V {
        debug_assert!(i >= 1 && i <= self.n);
        match &self.adj {
            Some(a) => a[v as usize * self.n + i - 1],
            None => self.reversal_computed(v, i),
        }
    }

    pub fn out(&self, v: V) -> V {
        self.reversal(v, self.n)
    }

    pub fn cluster(&self, v: V) -> ClusterId {
        self.symbols(v)[self.n - 1] as ClusterId
    }

    pub fn first(&self, v: V) -> i32 {
        self.symbols(v)[0] as i32
    }

    /// Neighbours in ascending id order.
    pub fn neighbours(&self, v: V) -> Nbrs {
        let mut a = [0; NBRS_CAP];
        for i in 1..=self.n {
            a[i - 1] = self.reversal(v, i);
        }
        a[..self.n].sort_unstable();
        Nbrs { a, len: self.n, pos: 0 }
    }

    /// The reversal index joining `u` and `v`, if they are adjacent.
    pub fn reversal_between(&self, u: V, v: V) -> Option<usize> {
        (1..=self.n).find(|&i| self.reversal(u, i) == v)
    }

    pub fn adjacent(&self, u: V, v: V) -> bool {
        self.contains(u) && self.contains(v) && self.reversal_between(u, v).is_some()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices().flat_map(move |v| {
            (1..=self.n).filter_map(move |i| {
                let w = self.reversal(v, i);
                (v < w).then_some((v, w))
            })
        })
    }

    pub fn gamma(&self, v: V, i: i32) -> Result<V> {
        let n = self.n as i32;
        if i < 1 || i > n || i == self.cluster(v).abs() {
            return invalid(format!("gamma direction {i} not applicable"));
        }
        let j = self
            .symbols(v)
            .iter()
            .position(|&s| (s as i32).abs() == i)
            .expect("magnitude present");
        Ok(self.reversal(v, j + 1))
    }

    /// `[x, gamma_i(x), out(gamma_i(x))]`.
    pub fn two_step_path(&self, v: V, i: i32) -> Result<[V; 3]> {
        let m = self.gamma(v, i)?;
        Ok([v, m, self.out(m)])
    }

    pub fn cluster_ids(&self) -> Vec<ClusterId> {
        let n = self.n as i32;
        (-n..=n).filter(|&c| c != 0).collect()
    }

    /// Vertices whose last symbol is `c`, ascending.
    pub fn cluster_vertices(&self, c: ClusterId) -> Vec<V> {
        let lower = self.lower();
        let mut out: Vec<V> = lower.vertices().map(|u| self.from_lower(c, u)).collect();
        out.sort_unstable();
        out
    }

    /// All edges with one end in cluster `i` and the other in cluster `j`.
    pub fn cross_edges(&self, i: ClusterId, j: ClusterId) -> Result<Vec<Edge>> {
        let n = self.n as i32;
        if i == j || i == 0 || j == 0 || i.abs() > n || j.abs() > n {
            return invalid(format!("bad cluster pair ({i}, {j})"));
        }
        let mut out: Vec<Edge> = self
            .cluster_vertices(i)
            .into_iter()
            .filter_map(|v| {
                let w = self.out(v);
                (self.cluster(w) == j).then(|| edge(v, w))
            })
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// The graph one dimension down, built on first use.
    pub fn lower(&self) -> &Graph {
        self.lower.get_or_init(|| {
            assert!(self.n >= 2, "no lower graph below n = 1");
            Box::new(Graph::build_unchecked(self.n - 1))
        })
    }

    /// Relabel a vertex of cluster `c` as a vertex of the graph one dimension down.
    pub fn to_lower(&self, v: V) -> V {
        let m = self.cluster(v).abs();
        let mut buf = [0i32; 64];
        for (k, &s) in self.symbols(v)[..self.n - 1].iter().enumerate() {
            let s = s as i32;
            buf[k] = if s.abs() > m { s - s.signum() } else { s };
        }
        self.lower().rank_of(&buf[..self.n - 1])
    }

    /// Inverse of [`Graph::to_lower`] for cluster `c`.
    pub fn from_lower(&self, c: ClusterId, u: V) -> V {
        let m = c.abs();
        let lower = self.lower();
        let mut buf = [0i32; 64];
        for (k, &s) in lower.symbols(u).iter().enumerate() {
            let s = s as i32;
            buf[k] = if s.abs() >= m { s + s.signum() } else { s };
        }
        buf[self.n - 1] = c;
        self.rank_of(&buf[..self.n])
    }

    /// Length of the shortest cycle through any of `roots`.
    pub fn girth_from(&self, roots: impl IntoIterator<Item = V>) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut dist = vec![u32::MAX; self.count];
        let mut parent = vec![V::MAX; self.count];
        let mut touched = Vec::new();
        for r in roots {
            for &t in &touched {
                dist[t as usize] = u32::MAX;
                parent[t as usize] = V::MAX;
            }
            touched.clear();
            dist[r as usize] = 0;
            touched.push(r);
            let mut q = VecDeque::from([r]);
            while let Some(u) = q.pop_front() {
                let du = dist[u as usize];
                if let Some(b) = best {
                    if 2 * du as usize + 1 >= b {
                        break;
                    }
                }
                for w in self.neighbours(u) {
                    if w == parent[u as usize] {
                        continue;
                    }
                    if dist[w as usize] == u32::MAX {
                        dist[w as usize] = du + 1;
                        parent[w as usize] = u;
                        touched.push(w);
                        q.push_back(w);
                    } else {
                        let c = (du + dist[w as usize] + 1) as usize;
                        if best.is_none_or(|b| c < b) {
                            best = Some(c);
                        }
                    }
                }
            }
        }
        best
    }

    pub fn girth(&self) -> Option<usize> {
        self.girth_from(self.vertices())
    }

    /// The left-multiplication automorphism sending `anchor` to the identity, and its inverse.
    pub fn normalize(&self, anchor: V) -> (Automorphism, Automorphism) {
        let x = self.perm(anchor);
        let g = x.inverse();
        (Automorphism::new(g), Automorphism::new(x))
    }
}

const NBRS_CAP: usize = 16;

/// Stack-allocated neighbour list.
#[derive(Clone, Copy)]
pub struct Nbrs {
    a: [V; NBRS_CAP],
    len: usize,
    pos: usize,
}

impl Iterator for Nbrs {
    type Item = V;

    fn next(&mut self) -> Option<V> {
        if self.pos < self.len {
            self.pos += 1;
            Some(self.a[self.pos - 1])
        } else {
            None
        }
    }
}

/// Vertex map `v -> g * v`.
#[derive(Clone, Debug)]
pub struct Automorphism {
    g: SignedPerm,
}

impl Automorphism {
    pub fn new(g: SignedPerm) -> Self {
        Automorphism { g }
    }

    pub fn element(&self) -> &SignedPerm {
        &self.g
    }

    pub fn apply(&self, graph: &Graph, v: V) -> V {
        let mut buf = [0i32; 64];
        let gs = self.g.symbols();
        for (k, &s) in graph.symbols(v).iter().enumerate() {
            let s = s as i32;
            buf[k] = s.signum() * gs[s.unsigned_abs() as usize - 1];
        }
        graph.rank_of(&buf[..graph.n()])
    }

    /// Image of a cluster label.
    pub fn apply_cluster(&self, c: ClusterId) -> ClusterId {
        c.signum() * self.g.symbols()[c.unsigned_abs() as usize - 1]
    }
}

/// A graph restricted to the vertices accepted by a predicate.
pub struct SubgraphView<'a> {
    g: &'a Graph,
    allow: Box<dyn Fn(V) -> bool + Send + Sync + 'a>,
    cut: Vec<Edge>,
}

impl<'a> SubgraphView<'a> {
    pub fn new(g: &'a Graph, allow: impl Fn(V) -> bool + Send + Sync + 'a) -> Self {
        SubgraphView { g, allow: Box::new(allow), cut: Vec::new() }
    }

    pub fn full(g: &'a Graph) -> Self {
        Self::new(g, |_| true)
    }

    pub fn clusters(g: &'a Graph, cs: &[ClusterId]) -> Self {
        let cs = cs.to_vec();
        Self::new(g, move |v| cs.contains(&g.cluster(v)))
    }

    /// The same view with the given edges removed.
    pub fn without_edges(mut self, edges: &[Edge]) -> Self {
        self.cut.extend(edges.iter().map(|&(a, b)| edge(a, b)));
        self
    }

    pub fn graph(&self) -> &'a Graph {
        self.g
    }

    pub fn contains(&self, v: V) -> bool {
        self.g.contains(v) && (self.allow)(v)
    }

    pub fn neighbours(&self, v: V) -> impl Iterator<Item = V> + '_ {
        self.g.neighbours(v).filter(move |&w| (self.allow)(w) && !self.cut.contains(&edge(v, w)))
    }

    pub fn vertices(&self) -> Vec<V> {
        self.g.vertices().filter(|&v| (self.allow)(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices()
            .iter()
            .map(|&v| self.neighbours(v).filter(|&w| w > v).count())
            .sum()
    }

    /// Whether the allowed vertices induce a connected subgraph.
    pub fn is_connected(&self) -> bool {
        let vs = self.vertices();
        let Some(&start) = vs.first() else {
            return true;
        };
        let mut seen = HashSet::from([start]);
        let mut q = VecDeque::from([start]);
        while let Some(u) = q.pop_front() {
            for w in self.neighbours(u) {
                if seen.insert(w) {
                    q.push_back(w);
                }
            }
        }
        seen.len() == vs.len()
    }
}
