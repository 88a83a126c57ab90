//! JSON and DOT forms of families and graphs.

use std::fmt::Write;

use bpn::{Graph, SignedPerm, STreeFamily, SubgraphView, Tree, V};
use serde::{Deserialize, Serialize};

use crate::Fail;

#[derive(Serialize, Deserialize)]
pub struct TreeJson {
    pub vertices: Vec<Vec<i32>>,
    pub edges: Vec<[Vec<i32>; 2]>,
}

#[derive(Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: usize,
    pub s: Vec<Vec<i32>>,
    pub trees: Vec<TreeJson>,
    pub case_trace: Vec<String>,
    pub repaired: bool,
}

fn syms(g: &Graph, v: V) -> Vec<i32> {
    g.perm(v).symbols().to_vec()
}

pub fn label(g: &Graph, v: V) -> String {
    g.perm(v).to_string()
}

/// Vertex id of a text form like "-2,-1,3".
pub fn parse_vertex(g: &Graph, text: &str) -> Result<V, Fail> {
    let p: SignedPerm = text.trim().parse().map_err(|e| Fail::Usage(format!("bad vertex {text:?}: {e}")))?;
    vertex_of(g, p.symbols())
}

fn vertex_of(g: &Graph, symbols: &[i32]) -> Result<V, Fail> {
    let p = SignedPerm::new(symbols.to_vec()).map_err(|e| Fail::Usage(format!("bad vertex {symbols:?}: {e}")))?;
    g.id(&p).ok_or_else(|| Fail::Usage(format!("vertex {p} is not in BP({})", g.n())))
}

pub fn family_to_json(g: &Graph, fam: &STreeFamily) -> FamilyJson {
    FamilyJson {
        n: g.n(),
        s: fam.s.iter().map(|&v| syms(g, v)).collect(),
        trees: fam
            .trees
            .iter()
            .map(|t| TreeJson {
                vertices: t.vertices.iter().map(|&v| syms(g, v)).collect(),
                edges: t.edges.iter().map(|&(a, b)| [syms(g, a), syms(g, b)]).collect(),
            })
            .collect(),
        case_trace: fam.case_trace.clone(),
        repaired: fam.repaired,
    }
}

/// Back to ids. Unknown vertices are a malformed file, not a failed check.
pub fn family_from_json(g: &Graph, f: &FamilyJson) -> Result<STreeFamily, Fail> {
    let ids = |vs: &[Vec<i32>]| vs.iter().map(|v| vertex_of(g, v)).collect::<Result<Vec<V>, Fail>>();
    let mut trees = Vec::new();
    for t in &f.trees {
        let vertices = ids(&t.vertices)?;
        let mut edges = Vec::new();
        for [a, b] in &t.edges {
            edges.push((vertex_of(g, a)?, vertex_of(g, b)?));
        }
        trees.push(Tree { vertices, edges });
    }
    Ok(STreeFamily { s: ids(&f.s)?, trees, case_trace: f.case_trace.clone(), repaired: f.repaired })
}

const COLOURS: [&str; 8] = ["red", "blue", "darkgreen", "purple", "orange", "brown", "magenta", "teal"];

pub fn family_to_dot(g: &Graph, fam: &STreeFamily) -> String {
    let mut out = String::from("graph family {\n  node [shape=ellipse, fontsize=10];\n");
    for &v in &fam.s {
        let _ = writeln!(out, "  \"{}\" [style=filled, fillcolor=gold, shape=doublecircle];", label(g, v));
    }
    for (k, t) in fam.trees.iter().enumerate() {
        let c = COLOURS[k % COLOURS.len()];
        let _ = writeln!(out, "  subgraph cluster_t{k} {{\n    label=\"T{}\";\n    color={c};", k + 1);
        for &v in &t.vertices {
            if !fam.s.contains(&v) {
                let _ = writeln!(out, "    \"{}\";", label(g, v));
            }
        }
        for &(a, b) in &t.edges {
            let _ = writeln!(out, "    \"{}\" -- \"{}\" [color={c}];", label(g, a), label(g, b));
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
pub struct GraphJson {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ids: Option<Vec<V>>,
    pub vertices: Vec<Vec<i32>>,
    pub edges: Vec<[V; 2]>,
}

fn view_edges(h: &SubgraphView) -> Vec<[V; 2]> {
    let mut es = Vec::new();
    for v in h.vertices() {
        for w in h.neighbours(v) {
            if v < w {
                es.push([v, w]);
            }
        }
    }
    es
}

/// `ids` is listed only for a restricted view, where positions stop matching ids.
pub fn view_to_json(h: &SubgraphView, restricted: bool) -> GraphJson {
    let g = h.graph();
    let vs = h.vertices();
    GraphJson {
        n: g.n(),
        vertices: vs.iter().map(|&v| syms(g, v)).collect(),
        ids: restricted.then(|| vs.clone()),
        edges: view_edges(h),
    }
}

pub fn view_to_dot(h: &SubgraphView) -> String {
    let g = h.graph();
    let mut out = format!("graph bp{} {{\n  node [shape=ellipse, fontsize=10];\n", g.n());
    for v in h.vertices() {
        let _ = writeln!(out, "  {v} [label=\"{}\"];", label(g, v));
    }
    for [a, b] in view_edges(h) {
        let _ = writeln!(out, "  {a} -- {b};");
    }
    out.push_str("}\n");
    out
}
