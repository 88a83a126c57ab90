use crate::connectivity::terminal_tree;
use crate::error::{invalid, Result};
use crate::graph::{Graph, SubgraphView, V};
use crate::permutation::ClusterId;
use crate::tree::{STreeFamily, Tree};

use super::{build_idsts, finish};

/// All four terminals in cluster `c`: n - 2 trees come from the cluster
/// itself (one dimension down), the last one leaves through the four
/// out-edges and joins the out-neighbours outside the cluster.
pub fn build_case_all_in_one(g: &Graph, s: &[V], c: ClusterId) -> Result<STreeFamily> {
    if s.iter().any(|&v| g.cluster(v) != c) {
        return invalid(format!("terminals not all in cluster {c}"));
    }
    finish(g, s, construct(g, s, c), vec![format!("AllInOneCluster/c={c}")])
}

fn construct(g: &Graph, s: &[V], c: ClusterId) -> Result<STreeFamily> {
    let lower = g.lower();
    let s_low: Vec<V> = s.iter().map(|&v| g.to_lower(v)).collect();
    let inner = build_idsts(lower, &s_low)?;
    let mut trees: Vec<Tree> = inner.trees.iter().map(|t| t.map(|u| g.from_lower(c, u))).collect();

    let outs: Vec<V> = s.iter().map(|&v| g.out(v)).collect();
    let outside = SubgraphView::new(g, move |v| g.cluster(v) != c);
    let hub = terminal_tree(&outside, &outs)?;
    let mut edges = hub.edges.clone();
    for (&v, &o) in s.iter().zip(&outs) {
        edges.push((v, o));
    }
    trees.push(Tree::from_edges(edges, s));

    let mut trace = vec![format!("inner[{}]", inner.case_trace.join(" > "))];
    if inner.repaired {
        trace.push("inner-repaired".into());
    }
    Ok(STreeFamily { s: s.to_vec(), trees, case_trace: trace, repaired: inner.repaired })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::verify_family;

    #[test]
    fn test_bp3_cluster() {
        let g = Graph::build(3).unwrap();
        let c = g.cluster_vertices(2);
        let s = [c[0], c[2], c[5], c[7]];
        let fam = build_case_all_in_one(&g, &s, 2).unwrap();
        assert_eq!(fam.trees.len(), 2);
        assert!(verify_family(&g, &s, &fam, 2).ok);
        assert!(!fam.repaired);
        // out-neighbours are distinct and outside the cluster
        let outs: std::collections::HashSet<V> = s.iter().map(|&v| g.out(v)).collect();
        assert_eq!(outs.len(), 4);
        assert!(outs.iter().all(|&o| g.cluster(o) != 2));
    }

    #[test]
    fn test_outside_connected() {
        for n in 3..=4 {
            let g = Graph::build(n).unwrap();
            for c in g.cluster_ids() {
                assert!(SubgraphView::new(&g, |v| g.cluster(v) != c).is_connected());
            }
        }
    }
}
