use bpn::checks::{check_connectivity, run_all};
use bpn::connectivity::{disjoint_paths, min_vertex_cut};
use bpn::{Graph, SubgraphView};

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn counts_and_girth_match_closed_forms() {
    for (n, nv, ne) in [(2, 8, 8), (3, 48, 72), (4, 384, 768)] {
        let g = Graph::build(n).unwrap();
        assert_eq!(g.vertex_count(), nv);
        assert_eq!(g.edge_count(), ne);
        assert_eq!(nv, (1 << n) * factorial(n));
        assert_eq!(ne, n * factorial(n) * (1 << (n - 1)));
        assert!(g.vertices().all(|v| g.neighbours(v).count() == n));
        assert_eq!(g.girth(), Some(8));
    }
}

#[test]
fn cross_edges_between_clusters() {
    for n in 3..=4 {
        let g = Graph::build(n).unwrap();
        let want = factorial(n - 2) << (n - 2);
        for i in g.cluster_ids() {
            for j in g.cluster_ids() {
                if i == j {
                    continue;
                }
                let got = g.cross_edges(i, j).unwrap().len();
                assert_eq!(got, if i == -j { 0 } else { want }, "n={n} {i}->{j}");
            }
        }
    }
}

#[test]
fn full_suite_small() {
    for n in 2..=4 {
        let g = Graph::build(n).unwrap();
        for r in run_all(&g, 3) {
            assert!(r.ok, "n={n} {}: {}", r.name, r.detail);
        }
    }
}

#[test]
fn connectivity_bp3_exhaustive() {
    let g = Graph::build(3).unwrap();
    let r = check_connectivity(&g, None, 0);
    assert!(r.ok, "{}", r.detail);
    assert!(r.detail.contains("1128 pairs"), "{}", r.detail);
}

#[test]
fn menger_paths_are_disjoint() {
    let g = Graph::build(4).unwrap();
    let h = SubgraphView::full(&g);
    let fam = disjoint_paths(&h, 0, 383, 4).unwrap();
    assert_eq!(fam.paths.len(), 4);
    let mut inner: Vec<u32> = fam.paths.iter().flat_map(|p| p[1..p.len() - 1].iter().copied()).collect();
    let total = inner.len();
    inner.sort_unstable();
    inner.dedup();
    assert_eq!(total, inner.len());
    for p in &fam.paths {
        assert!(p.windows(2).all(|w| g.adjacent(w[0], w[1])));
    }
    assert_eq!(min_vertex_cut(&h, 0, 383), 4);
    assert!(disjoint_paths(&h, 0, 383, 5).is_err());
}

#[test]
fn ceiling_and_small_n_rejected() {
    assert!(Graph::build(1).is_err());
    assert!(Graph::build_with_limit(5, 4).is_err());
}
