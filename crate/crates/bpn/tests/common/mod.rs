#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use bpn::{Edge, Graph, Tree, V};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All k-subsets of 0..nv in lexicographic order.
pub fn subsets(nv: usize, k: usize) -> Vec<Vec<V>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > nv {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| i as V).collect());
        let mut i = k;
        while i > 0 && idx[i - 1] == nv - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn random_subsets(nv: usize, k: usize, count: usize, seed: u64) -> Vec<Vec<V>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut s = BTreeSet::new();
            while s.len() < k {
                s.insert(rng.gen_range(0..nv as V));
            }
            let mut v: Vec<V> = s.into_iter().collect();
            v.shuffle(&mut rng);
            v
        })
        .collect()
}

fn find(p: &mut HashMap<V, V>, v: V) -> V {
    let u = *p.get(&v).unwrap_or(&v);
    if u == v {
        return v;
    }
    let r = find(p, u);
    p.insert(v, r);
    r
}

/// Second opinion on a family, written with plain set algebra and
/// union-find rather than the library's walk-based checks.
pub fn naive_ok(g: &Graph, s: &[V], trees: &[Tree], expected: usize) -> bool {
    if trees.len() != expected {
        return false;
    }
    let terms: HashSet<V> = s.iter().copied().collect();
    let mut vsets = Vec::new();
    let mut esets = Vec::new();
    for t in trees {
        let vs: HashSet<V> = t.vertices.iter().copied().collect();
        if vs.is_empty() || vs.len() != t.vertices.len() || !terms.is_subset(&vs) {
            return false;
        }
        let es: HashSet<Edge> = t.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        if es.len() != t.edges.len() || es.len() + 1 != vs.len() {
            return false;
        }
        let mut p = HashMap::new();
        for &(a, b) in &es {
            if a == b || !vs.contains(&a) || !vs.contains(&b) || !g.adjacent(a, b) {
                return false;
            }
            let (ra, rb) = (find(&mut p, a), find(&mut p, b));
            if ra == rb {
                return false;
            }
            p.insert(ra, rb);
        }
        vsets.push(vs);
        esets.push(es);
    }
    for i in 0..trees.len() {
        for j in i + 1..trees.len() {
            if !vsets[i].intersection(&vsets[j]).all(|v| terms.contains(v)) {
                return false;
            }
            if esets[i].intersection(&esets[j]).next().is_some() {
                return false;
            }
        }
    }
    true
}

/// One random corruption of a family. Some mutations happen to keep it
/// valid, which is fine: both verifiers must still agree.
pub fn mutate(g: &Graph, s: &[V], trees: &[Tree], rng: &mut ChaCha8Rng) -> Vec<Tree> {
    let mut out = trees.to_vec();
    let k = rng.gen_range(0..out.len());
    let nv = g.vertex_count() as V;
    match rng.gen_range(0..8) {
        0 => {
            if !out[k].edges.is_empty() {
                let i = rng.gen_range(0..out[k].edges.len());
                out[k].edges.remove(i);
            }
        }
        1 => {
            // graft a random graph edge hanging off the tree
            let v = *out[k].vertices.choose(rng).unwrap();
            let w = g.neighbours(v).collect::<Vec<_>>()[rng.gen_range(0..g.n())];
            out[k].edges.push((v, w));
            if !out[k].vertices.contains(&w) {
                out[k].vertices.push(w);
            }
        }
        2 => {
            let a = rng.gen_range(0..nv);
            let b = rng.gen_range(0..nv);
            out[k].edges.push((a, b));
        }
        3 => {
            let t = *s.choose(rng).unwrap();
            out[k].vertices.retain(|&v| v != t);
        }
        4 => {
            let dup = out[k].clone();
            out.push(dup);
        }
        5 => {
            out.pop();
        }
        6 => {
            out[k].vertices.push(rng.gen_range(0..nv));
        }
        _ => {
            // copy an edge of one tree into another
            let j = rng.gen_range(0..out.len());
            if let Some(&e) = out[j].edges.choose(rng) {
                out[k].edges.push(e);
                for v in [e.0, e.1] {
                    if !out[k].vertices.contains(&v) {
                        out[k].vertices.push(v);
                    }
                }
            }
        }
    }
    out
}
