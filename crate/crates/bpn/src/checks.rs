//! Structural property checks over a whole graph.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connectivity::min_vertex_cut;
use crate::graph::{Graph, SubgraphView, V};
use crate::permutation::ClusterId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl CheckReport {
    fn new(name: &str, ok: bool, detail: String) -> Self {
        CheckReport { name: name.to_string(), ok, detail }
    }
}

/// The little a cluster-level check needs to know about a graph. Lets tests
/// feed in a tampered adjacency.
pub trait ClusterAdjacency {
    fn dim(&self) -> usize;
    fn order(&self) -> usize;
    fn cluster_of(&self, v: V) -> ClusterId;
    fn rev(&self, v: V, i: usize) -> V;
}

impl ClusterAdjacency for Graph {
    fn dim(&self) -> usize {
        self.n()
    }
    fn order(&self) -> usize {
        self.vertex_count()
    }
    fn cluster_of(&self, v: V) -> ClusterId {
        self.cluster(v)
    }
    fn rev(&self, v: V, i: usize) -> V {
        self.reversal(v, i)
    }
}

pub fn check_counts(g: &Graph) -> CheckReport {
    let n = g.n();
    let fact: usize = (1..=n).product();
    let want_v = (1usize << n) * fact;
    let want_e = n * fact * (1usize << (n - 1));
    let edges = g.edges().count();
    let irregular = g.vertices().find(|&v| {
        let nb: HashSet<V> = g.neighbours(v).collect();
        nb.len() != n || nb.contains(&v)
    });
    let ok = g.vertex_count() == want_v && edges == want_e && irregular.is_none();
    CheckReport::new(
        "counts",
        ok,
        format!(
            "vertices {} (want {want_v}), edges {edges} (want {want_e}), regular {}",
            g.vertex_count(),
            irregular.is_none()
        ),
    )
}

/// Girth from every vertex up to n = 5, from a sample of roots above.
pub fn check_girth(g: &Graph, seed: u64) -> CheckReport {
    let girth = if g.n() <= 5 {
        g.girth()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let roots: Vec<V> = (0..64).map(|_| rng.gen_range(0..g.vertex_count() as V)).collect();
        g.girth_from(roots)
    };
    let want = if g.n() >= 2 { Some(8) } else { None };
    let shown = girth.map_or("none".to_string(), |x| x.to_string());
    CheckReport::new("girth", girth == want, format!("girth {shown} (want 8)"))
}

pub fn check_cross_edges(g: &Graph) -> CheckReport {
    let n = g.n();
    if n < 2 {
        return CheckReport::new("cross-edges", true, "no clusters".into());
    }
    let per_pair = (1..=n.saturating_sub(2)).product::<usize>() * (1usize << (n - 2));
    let mut counts: HashMap<(ClusterId, ClusterId), usize> = HashMap::new();
    for v in g.vertices() {
        let w = g.out(v);
        *counts.entry((g.cluster(v), g.cluster(w))).or_default() += 1;
    }
    for i in g.cluster_ids() {
        for j in g.cluster_ids() {
            if i == j {
                continue;
            }
            let got = counts.get(&(i, j)).copied().unwrap_or(0);
            let want = if i == -j { 0 } else { per_pair };
            if got != want {
                return CheckReport::new(
                    "cross-edges",
                    false,
                    format!("clusters ({i},{j}): {got} edges, want {want}"),
                );
            }
        }
    }
    CheckReport::new("cross-edges", true, format!("{per_pair} per non-opposite pair, 0 opposite"))
}

/// No two vertices of one cluster share an out-neighbour, and the closed
/// in-cluster neighbourhood of each vertex sends its out-edges to n clusters.
pub fn check_out_neighbour_facts(g: &impl ClusterAdjacency) -> CheckReport {
    let n = g.dim();
    let mut owner: HashMap<V, V> = HashMap::new();
    for v in 0..g.order() as V {
        let o = g.rev(v, n);
        if let Some(&u) = owner.get(&o) {
            if g.cluster_of(u) == g.cluster_of(v) {
                return CheckReport::new(
                    "out-neighbours",
                    false,
                    format!("vertices {u} and {v} share out-neighbour {o}"),
                );
            }
        }
        owner.insert(o, v);
    }
    for v in 0..g.order() as V {
        let mut seen = HashSet::new();
        seen.insert(g.cluster_of(g.rev(v, n)));
        for i in 1..n {
            seen.insert(g.cluster_of(g.rev(g.rev(v, i), n)));
        }
        if seen.len() != n {
            return CheckReport::new(
                "out-neighbours",
                false,
                format!("neighbourhood of {v} reaches only {} clusters", seen.len()),
            );
        }
    }
    CheckReport::new("out-neighbours", true, "unique within clusters, closed neighbourhoods spread".into())
}

/// For `x` in cluster `i` with out-neighbour in cluster `j` not `±i`, the
/// out-neighbour of `x(1)` lies in cluster `-j`.
pub fn check_out_neighbour_flip(g: &Graph) -> CheckReport {
    let mut checked = 0;
    for x in g.vertices() {
        let i = g.cluster(x);
        let xh = g.out(x);
        let j = g.cluster(xh);
        if j == i || j == -i {
            continue;
        }
        checked += 1;
        let f = g.out(g.reversal(x, 1));
        if g.cluster(f) != -j {
            return CheckReport::new("flip-opposite", false, format!("vertex {x}: landed in {}", g.cluster(f)));
        }
    }
    CheckReport::new("flip-opposite", true, format!("{checked} vertices checked"))
}

fn connected_without(g: &Graph, c: ClusterId, gone: &[V]) -> bool {
    let vs = g.cluster_vertices(c);
    let alive: Vec<V> = vs.iter().copied().filter(|v| !gone.contains(v)).collect();
    let Some(&start) = alive.first() else {
        return true;
    };
    let n = g.n();
    let mut seen = HashSet::from([start]);
    let mut q = VecDeque::from([start]);
    while let Some(u) = q.pop_front() {
        for i in 1..n {
            let w = g.reversal(u, i);
            if !gone.contains(&w) && seen.insert(w) {
                q.push_back(w);
            }
        }
    }
    seen.len() == alive.len()
}

/// Removing `x` and `x(i)` (`i < n`) from a cluster leaves it connected.
/// Exhaustive when `samples` is `None`.
pub fn check_cluster_pair_removal(g: &Graph, samples: Option<usize>, seed: u64) -> CheckReport {
    let n = g.n();
    if n < 3 {
        return CheckReport::new("pair-removal", true, "n < 3, nothing to check".into());
    }
    let pairs: Vec<(V, usize)> = match samples {
        None => g.vertices().flat_map(|v| (1..n).map(move |i| (v, i))).collect(),
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..k)
                .map(|_| (rng.gen_range(0..g.vertex_count() as V), rng.gen_range(1..n)))
                .collect()
        }
    };
    for &(x, i) in &pairs {
        if !connected_without(g, g.cluster(x), &[x, g.reversal(x, i)]) {
            return CheckReport::new("pair-removal", false, format!("cluster of {x} split by removing x, x({i})"));
        }
    }
    CheckReport::new("pair-removal", true, format!("{} pairs checked", pairs.len()))
}

/// Each cluster, relabelled, is the graph one dimension down.
pub fn check_cluster_isomorphism(g: &Graph) -> CheckReport {
    let lower = g.lower();
    for c in g.cluster_ids() {
        let vs = g.cluster_vertices(c);
        let images: HashSet<V> = vs.iter().map(|&v| g.to_lower(v)).collect();
        if images.len() != lower.vertex_count() {
            return CheckReport::new("cluster-iso", false, format!("cluster {c} not a bijection"));
        }
        for &v in &vs {
            for i in 1..g.n() {
                if g.to_lower(g.reversal(v, i)) != lower.reversal(g.to_lower(v), i) {
                    return CheckReport::new("cluster-iso", false, format!("cluster {c} breaks at vertex {v}"));
                }
            }
        }
    }
    CheckReport::new("cluster-iso", true, format!("{} clusters", 2 * g.n()))
}

/// Minimum over the chosen pairs of the max number of internally disjoint
/// paths; exhaustive over all pairs when `samples` is `None`.
pub fn check_connectivity(g: &Graph, samples: Option<usize>, seed: u64) -> CheckReport {
    let h = SubgraphView::full(g);
    let pairs: Vec<(V, V)> = match samples {
        None => {
            let nv = g.vertex_count() as V;
            (0..nv).flat_map(|a| (a + 1..nv).map(move |b| (a, b))).collect()
        }
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut all: Vec<V> = g.vertices().collect();
            (0..k)
                .map(|_| {
                    all.partial_shuffle(&mut rng, 2);
                    (all[0], all[1])
                })
                .collect()
        }
    };
    let mut min = usize::MAX;
    for &(a, b) in &pairs {
        let k = min_vertex_cut(&h, a, b);
        if k < min {
            min = k;
        }
    }
    let ok = min == g.n();
    CheckReport::new("connectivity", ok, format!("min {} over {} pairs (want {})", min, pairs.len(), g.n()))
}

/// Everything above, with sampling switched on for large n.
pub fn run_all(g: &Graph, seed: u64) -> Vec<CheckReport> {
    let n = g.n();
    let mut out = vec![check_counts(g), check_girth(g, seed), check_cross_edges(g), check_out_neighbour_facts(g)];
    if n >= 3 {
        out.push(check_out_neighbour_flip(g));
        out.push(check_cluster_pair_removal(g, if n == 3 { None } else { Some(200) }, seed));
        out.push(check_cluster_isomorphism(g));
    }
    out.push(check_connectivity(g, if n <= 3 { None } else { Some(200) }, seed));
    out
}
