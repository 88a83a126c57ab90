//! Repair for construction attempts the verifier rejects: first re-route the
//! offending trees one at a time around the others, then fall back to seeded
//! negotiated-congestion routing of the whole family.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph, V};
use crate::tree::{STreeFamily, Tree};
use crate::verifier::{verify_family, verify_trees, VerificationReport, ViolationKind};

#[derive(Clone, Copy, Debug)]
pub struct RepairBudget {
    pub restarts: usize,
    pub rounds: usize,
}

impl Default for RepairBudget {
    fn default() -> Self {
        RepairBudget { restarts: 12, rounds: 80 }
    }
}

pub fn repair(g: &Graph, s: &[V], candidate: &STreeFamily, report: &VerificationReport) -> Result<STreeFamily> {
    repair_with_budget(g, s, candidate, report, RepairBudget::default())
}

pub fn repair_with_budget(
    g: &Graph,
    s: &[V],
    candidate: &STreeFamily,
    report: &VerificationReport,
    budget: RepairBudget,
) -> Result<STreeFamily> {
    if report.ok {
        return Ok(candidate.clone());
    }
    let want = g.n() - 1;
    let done = |trees: Vec<Tree>, how: String| {
        let mut trace = candidate.case_trace.clone();
        trace.push(how);
        STreeFamily { s: s.to_vec(), trees, case_trace: trace, repaired: true }
    };
    if budget.restarts == 0 && budget.rounds == 0 {
        return Err(defect(report));
    }
    if let Some(trees) = reroute(g, s, &candidate.trees, report, want) {
        if verify_trees(g, s, &trees, want).ok {
            return Ok(done(trees, "repaired:reroute".into()));
        }
    }
    let base = seed_of(s);
    for attempt in 0..budget.restarts {
        let seed = base.wrapping_add(attempt as u64);
        if let Some(trees) = negotiate(g, s, want, seed, budget.rounds) {
            let fam = done(trees, format!("repaired:restart{attempt}"));
            if verify_family(g, s, &fam, want).ok {
                return Ok(fam);
            }
        }
    }
    Err(defect(report))
}

fn defect(report: &VerificationReport) -> Error {
    let v: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
    Error::Defect(format!("repair budget exhausted; violations: {}", v.join("; ")))
}

fn seed_of(s: &[V]) -> u64 {
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.iter().fold(0x9e37_79b9_7f4a_7c15u64, |h, &v| {
        (h ^ v as u64).wrapping_mul(0x0100_0000_01b3).rotate_left(17)
    })
}

/// Keep the trees not named in the report and rebuild the rest, one at a
/// time, in the graph left over by the others.
fn reroute(g: &Graph, s: &[V], trees: &[Tree], report: &VerificationReport, want: usize) -> Option<Vec<Tree>> {
    let mut bad: HashSet<usize> = HashSet::new();
    for v in &report.violations {
        match v.kind {
            ViolationKind::WrongCount => {}
            // blame the later tree of an overlapping pair
            ViolationKind::VertexOverlap | ViolationKind::EdgeOverlap => {
                if let Some(&t) = v.trees.iter().max() {
                    bad.insert(t);
                }
            }
            _ => bad.extend(v.trees.iter().copied()),
        }
    }
    let mut kept: Vec<Option<Tree>> = (0..want).map(|i| trees.get(i).cloned()).collect();
    for (i, slot) in kept.iter_mut().enumerate() {
        if bad.contains(&i) {
            *slot = None;
        }
    }
    for i in 0..want {
        if kept[i].is_some() {
            continue;
        }
        let others: Vec<&Tree> = kept.iter().flatten().collect();
        kept[i] = Some(residual_tree(g, s, &others)?);
    }
    Some(kept.into_iter().flatten().collect())
}

/// A tree on `s` avoiding the non-terminal vertices and all edges of `others`.
fn residual_tree(g: &Graph, s: &[V], others: &[&Tree]) -> Option<Tree> {
    let mut blocked_v: HashSet<V> = HashSet::new();
    let mut blocked_e: HashSet<Edge> = HashSet::new();
    for t in others {
        blocked_v.extend(t.vertices.iter().copied().filter(|v| !s.contains(v)));
        blocked_e.extend(t.edges.iter().copied());
    }
    let mut in_tree: HashSet<V> = HashSet::from([s[0]]);
    let mut edges = Vec::new();
    for &t in &s[1..] {
        if in_tree.contains(&t) {
            continue;
        }
        let mut parent: HashMap<V, V> = HashMap::from([(t, t)]);
        let mut q = VecDeque::from([t]);
        let mut hit = None;
        'bfs: while let Some(u) = q.pop_front() {
            for w in g.neighbours(u) {
                if parent.contains_key(&w) || blocked_v.contains(&w) || blocked_e.contains(&edge(u, w)) {
                    continue;
                }
                parent.insert(w, u);
                if in_tree.contains(&w) {
                    hit = Some(w);
                    break 'bfs;
                }
                q.push_back(w);
            }
        }
        let mut c = hit?;
        while c != t {
            let p = parent[&c];
            edges.push(edge(c, p));
            in_tree.insert(p);
            c = p;
        }
    }
    Some(Tree::from_edges(edges, &[s[0]]).prune_to(s))
}

/// Negotiated congestion: every tree is routed as a chain of cheapest paths;
/// shared vertices grow more expensive each round until nothing is shared.
fn negotiate(g: &Graph, s: &[V], want: usize, seed: u64, rounds: usize) -> Option<Vec<Tree>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = g.vertex_count();
    let is_term = |v: V| s.contains(&v);
    let mut occ = vec![0u16; nv];
    let mut hist = vec![0f64; nv];
    let mut eocc: HashMap<Edge, u16> = HashMap::new();
    let mut ehist: HashMap<Edge, f64> = HashMap::new();
    let mut trees: Vec<Option<Tree>> = vec![None; want];
    let mut pres = 0.5f64;
    let mut dist = vec![f64::INFINITY; nv];
    let mut parent = vec![V::MAX; nv];
    let mut touched: Vec<V> = Vec::new();
    for _ in 0..rounds {
        let mut order: Vec<usize> = (0..want).collect();
        order.shuffle(&mut rng);
        for k in order {
            if let Some(t) = trees[k].take() {
                adjust(&t, s, &mut occ, &mut eocc, false);
            }
            let mut terms = s.to_vec();
            terms.shuffle(&mut rng);
            let mut in_tree: HashSet<V> = HashSet::from([terms[0]]);
            let mut edges = Vec::new();
            for &t in &terms[1..] {
                if in_tree.contains(&t) {
                    continue;
                }
                for &v in &touched {
                    dist[v as usize] = f64::INFINITY;
                    parent[v as usize] = V::MAX;
                }
                touched.clear();
                dist[t as usize] = 0.0;
                touched.push(t);
                let mut heap = BinaryHeap::from([Reverse((0u64, t))]);
                let mut hit = None;
                while let Some(Reverse((dbits, u))) = heap.pop() {
                    let du = f64::from_bits(dbits);
                    if du > dist[u as usize] {
                        continue;
                    }
                    if in_tree.contains(&u) {
                        hit = Some(u);
                        break;
                    }
                    for w in g.neighbours(u) {
                        let step = if is_term(w) {
                            if is_term(u) {
                                let e = edge(u, w);
                                let o = *eocc.get(&e).unwrap_or(&0) as f64;
                                (1.0 + ehist.get(&e).copied().unwrap_or(0.0)) * (1.0 + pres * o)
                            } else {
                                1.0
                            }
                        } else {
                            (1.0 + hist[w as usize]) * (1.0 + pres * occ[w as usize] as f64)
                        };
                        let nd = du + step;
                        if nd < dist[w as usize] {
                            if dist[w as usize].is_infinite() {
                                touched.push(w);
                            }
                            dist[w as usize] = nd;
                            parent[w as usize] = u;
                            heap.push(Reverse((nd.to_bits(), w)));
                        }
                    }
                }
                let mut c = hit?;
                while c != t {
                    let p = parent[c as usize];
                    edges.push(edge(c, p));
                    in_tree.insert(p);
                    c = p;
                }
            }
            let tree = Tree::from_edges(edges, &[terms[0]]).prune_to(s);
            adjust(&tree, s, &mut occ, &mut eocc, true);
            trees[k] = Some(tree);
        }
        let mut clash = false;
        for v in g.vertices() {
            if occ[v as usize] > 1 {
                clash = true;
                hist[v as usize] += (occ[v as usize] - 1) as f64;
            }
        }
        for (e, &o) in &eocc {
            if o > 1 {
                clash = true;
                *ehist.entry(*e).or_default() += (o - 1) as f64;
            }
        }
        if !clash {
            return Some(trees.into_iter().map(|t| t.unwrap()).collect());
        }
        pres *= 1.5;
    }
    None
}

fn adjust(t: &Tree, s: &[V], occ: &mut [u16], eocc: &mut HashMap<Edge, u16>, add: bool) {
    for &v in &t.vertices {
        if !s.contains(&v) {
            if add {
                occ[v as usize] += 1;
            } else {
                occ[v as usize] -= 1;
            }
        }
    }
    for &(a, b) in &t.edges {
        if s.contains(&a) && s.contains(&b) {
            let e = eocc.entry((a, b)).or_default();
            if add {
                *e += 1;
            } else {
                *e -= 1;
            }
        }
    }
}
