//! Brute-force ground truth: backtracking search for the largest family of
//! internally disjoint S-trees, independent of the constructive builder.

use std::collections::{HashSet, VecDeque};

use crate::graph::{edge, Edge, Graph, V};
use crate::tree::{STreeFamily, Tree};

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub s: Vec<V>,
    pub max_idsts_found: usize,
    pub certificate: STreeFamily,
    /// True when the answer is authoritative: the target was reached or the
    /// search space was fully explored.
    pub exhausted: bool,
}

/// `delta - 1`; every vertex of BP(n) has degree n.
pub fn upper_bound_kappa4(g: &Graph) -> usize {
    let delta = g.vertices().map(|v| g.neighbours(v).count()).min().unwrap_or(0);
    delta.saturating_sub(1)
}

struct Search<'g> {
    g: &'g Graph,
    terms: Vec<V>,
    is_term: Vec<bool>,
    target: usize,
    budget: u64,
    spent: u64,
    out_of_budget: bool,
    used_v: Vec<bool>,
    used_e: HashSet<Edge>,
    placed: Vec<Tree>,
    best: Vec<Tree>,
    // size cap per tree for the current deepening round
    cap: usize,
    // symmetry break: each tree's smallest edge at terms[0] must exceed the previous one's
    floors: Vec<Edge>,
    found: bool,
}

impl<'g> Search<'g> {
    fn tick(&mut self) -> bool {
        if self.spent >= self.budget {
            self.out_of_budget = true;
            return false;
        }
        self.spent += 1;
        true
    }

    fn edge_ok(&self, a: V, b: V) -> bool {
        let e = edge(a, b);
        if self.used_e.contains(&e) {
            return false;
        }
        let s0 = self.terms[0];
        if (a == s0 || b == s0) && self.floors.last().is_some_and(|&f| e <= f) {
            return false;
        }
        true
    }

    /// Free edges left at terminal `t`, ignoring the tree being grown.
    fn free_degree(&self, t: V) -> usize {
        self.g
            .neighbours(t)
            .filter(|&w| (!self.used_v[w as usize] || self.is_term[w as usize]) && self.edge_ok(t, w))
            .count()
    }

    fn remaining_feasible(&self) -> bool {
        let need = self.target - self.placed.len();
        self.terms.iter().all(|&t| self.free_degree(t) >= need) && self.terminals_connected()
    }

    fn terminals_connected(&self) -> bool {
        let start = self.terms[0];
        let mut seen = HashSet::from([start]);
        let mut q = VecDeque::from([start]);
        while let Some(u) = q.pop_front() {
            for w in self.g.neighbours(u) {
                let free = !self.used_v[w as usize] || self.is_term[w as usize];
                if free && self.edge_ok(u, w) && seen.insert(w) {
                    q.push_back(w);
                }
            }
        }
        self.terms.iter().all(|t| seen.contains(t))
    }

    fn place_trees(&mut self) {
        if self.found || self.out_of_budget {
            return;
        }
        if self.placed.len() > self.best.len() {
            self.best = self.placed.clone();
        }
        if self.placed.len() >= self.target {
            self.found = true;
            return;
        }
        if !self.remaining_feasible() {
            return;
        }
        let mut cur = TreeState::default();
        cur.add_vertex(self.terms[0]);
        self.grow(&mut cur, 1);
    }

    /// Attach terminal `k` (and onwards) to the tree under construction.
    fn grow(&mut self, cur: &mut TreeState, k: usize) {
        if self.found || self.out_of_budget {
            return;
        }
        if k == self.terms.len() {
            let tree = Tree::from_edges(cur.edges.iter().copied(), &cur.verts);
            let s0 = self.terms[0];
            let floor = *tree.edges.iter().filter(|&&(a, b)| a == s0 || b == s0).min().unwrap();
            for &v in &cur.verts {
                if !self.is_term[v as usize] {
                    self.used_v[v as usize] = true;
                }
            }
            for &e in &cur.edges {
                self.used_e.insert(e);
            }
            self.floors.push(floor);
            self.placed.push(tree);
            self.place_trees();
            self.placed.pop();
            self.floors.pop();
            for &e in &cur.edges {
                self.used_e.remove(&e);
            }
            for &v in &cur.verts {
                if !self.is_term[v as usize] {
                    self.used_v[v as usize] = false;
                }
            }
            return;
        }
        let t = self.terms[k];
        if cur.has(t) {
            self.grow(cur, k + 1);
            return;
        }
        let mut path = vec![t];
        let mut on_path = HashSet::from([t]);
        self.extend(cur, k, &mut path, &mut on_path);
    }

    fn extend(&mut self, cur: &mut TreeState, k: usize, path: &mut Vec<V>, on_path: &mut HashSet<V>) {
        if self.found || !self.tick() {
            return;
        }
        if cur.edges.len() + path.len() > self.cap {
            return;
        }
        let u = *path.last().unwrap();
        for w in self.g.neighbours(u) {
            if on_path.contains(&w) || !self.edge_ok(u, w) {
                continue;
            }
            if cur.has(w) {
                // path reaches the tree: commit it
                let mark = cur.edges.len();
                let vmark = cur.verts.len();
                path.push(w);
                for pair in path.windows(2) {
                    cur.edges.push(edge(pair[0], pair[1]));
                }
                for &p in &path[..path.len() - 1] {
                    cur.add_vertex(p);
                }
                path.pop();
                self.grow(cur, k + 1);
                cur.truncate(mark, vmark);
                if self.found || self.out_of_budget {
                    return;
                }
                continue;
            }
            if self.used_v[w as usize] && !self.is_term[w as usize] {
                continue;
            }
            path.push(w);
            on_path.insert(w);
            self.extend(cur, k, path, on_path);
            on_path.remove(&w);
            path.pop();
            if self.found || self.out_of_budget {
                return;
            }
        }
    }
}

#[derive(Default)]
struct TreeState {
    verts: Vec<V>,
    set: HashSet<V>,
    edges: Vec<Edge>,
}

impl TreeState {
    fn add_vertex(&mut self, v: V) {
        if self.set.insert(v) {
            self.verts.push(v);
        }
    }

    fn has(&self, v: V) -> bool {
        self.set.contains(&v)
    }

    fn truncate(&mut self, edges: usize, verts: usize) {
        self.edges.truncate(edges);
        for v in self.verts.drain(verts..) {
            self.set.remove(&v);
        }
    }
}

/// Greedy lower bound: peel off BFS-grown trees until the terminals disconnect.
fn greedy(g: &Graph, terms: &[V]) -> Vec<Tree> {
    let mut used_v = vec![false; g.vertex_count()];
    let mut used_e: HashSet<Edge> = HashSet::new();
    let is_term = |v: V| terms.contains(&v);
    let mut out = Vec::new();
    loop {
        let mut in_tree: HashSet<V> = HashSet::from([terms[0]]);
        let mut edges = Vec::new();
        let mut ok = true;
        for &t in &terms[1..] {
            if in_tree.contains(&t) {
                continue;
            }
            // BFS from t to the partial tree through free vertices
            let mut parent = std::collections::HashMap::from([(t, t)]);
            let mut q = VecDeque::from([t]);
            let mut hit = None;
            'bfs: while let Some(u) = q.pop_front() {
                for w in g.neighbours(u) {
                    if parent.contains_key(&w) || used_e.contains(&edge(u, w)) {
                        continue;
                    }
                    if in_tree.contains(&w) {
                        parent.insert(w, u);
                        hit = Some(w);
                        break 'bfs;
                    }
                    if used_v[w as usize] && !is_term(w) {
                        continue;
                    }
                    parent.insert(w, u);
                    q.push_back(w);
                }
            }
            let Some(mut c) = hit else {
                ok = false;
                break;
            };
            while c != t {
                let p = parent[&c];
                edges.push(edge(c, p));
                in_tree.insert(p);
                c = p;
            }
        }
        if !ok {
            return out;
        }
        let tree = Tree::from_edges(edges, &[terms[0]]).prune_to(terms);
        for &v in &tree.vertices {
            if !is_term(v) {
                used_v[v as usize] = true;
            }
        }
        used_e.extend(tree.edges.iter().copied());
        out.push(tree);
    }
}

/// Largest number of internally disjoint S-trees found, stopping early once
/// `target` trees are in hand. `budget` caps the number of search-node
/// expansions; a budget of zero reports the greedy seed only.
pub fn max_idsts_bruteforce(g: &Graph, s: &[V], target: usize, budget: u64) -> OracleResult {
    let mut terms: Vec<V> = s.to_vec();
    terms.sort_unstable();
    terms.dedup();
    let seed = greedy(g, &terms);
    let finish = |trees: Vec<Tree>, exhausted: bool| OracleResult {
        s: terms.clone(),
        max_idsts_found: trees.len(),
        certificate: STreeFamily {
            s: terms.clone(),
            trees,
            case_trace: vec!["oracle".into()],
            repaired: false,
        },
        exhausted,
    };
    if budget == 0 {
        return finish(seed, false);
    }
    if seed.len() >= target {
        let mut t = seed;
        t.truncate(target);
        return finish(t, true);
    }
    let mut is_term = vec![false; g.vertex_count()];
    for &t in &terms {
        is_term[t as usize] = true;
    }
    let mut search = Search {
        g,
        terms: terms.clone(),
        is_term,
        target,
        budget,
        spent: 0,
        out_of_budget: false,
        used_v: vec![false; g.vertex_count()],
        used_e: HashSet::new(),
        placed: Vec::new(),
        best: seed,
        cap: 0,
        floors: Vec::new(),
        found: false,
    };
    // deepen the per-tree size cap so small families are found first
    let max_cap = g.vertex_count() - 1;
    let mut cap = terms.len().saturating_sub(1).max(1);
    loop {
        search.cap = cap;
        search.place_trees();
        if search.found || search.out_of_budget || cap >= max_cap {
            break;
        }
        cap = (cap * 3 / 2).max(cap + 1).min(max_cap);
    }
    let exhausted = search.found || !search.out_of_budget;
    let mut best = search.best;
    best.truncate(target.max(1));
    finish(best, exhausted)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kappa4Summary {
    pub subsets: usize,
    pub min_found: Option<usize>,
    pub all_exhausted: bool,
    pub equals_bound: bool,
    pub counterexample: Option<Vec<V>>,
}

/// Min over the sample of the brute-force maximum, compared against n - 1.
/// Each search stops as soon as it reaches the bound.
pub fn kappa4_exact_small(g: &Graph, sample: &[Vec<V>], budget: u64) -> Kappa4Summary {
    let bound = upper_bound_kappa4(g);
    let mut min_found: Option<usize> = None;
    let mut all_exhausted = true;
    let mut counterexample = None;
    for s in sample {
        let r = max_idsts_bruteforce(g, s, bound, budget);
        all_exhausted &= r.exhausted;
        if r.max_idsts_found < bound && counterexample.is_none() {
            counterexample = Some(s.clone());
        }
        min_found = Some(min_found.map_or(r.max_idsts_found, |m: usize| m.min(r.max_idsts_found)));
    }
    Kappa4Summary {
        subsets: sample.len(),
        min_found,
        all_exhausted,
        equals_bound: min_found.is_none_or(|m| m == bound) && counterexample.is_none(),
        counterexample,
    }
}
