mod common;

use std::collections::BTreeMap;

use bpn::builder::{build_idsts, build_idsts_3, classify, CaseTag};
use bpn::verifier::verify_family;
use bpn::{Error, Graph};

fn check_sample(n: usize, count: usize, seed: u64) -> BTreeMap<CaseTag, usize> {
    let g = Graph::build(n).unwrap();
    let mut seen = BTreeMap::new();
    for s in common::random_subsets(g.vertex_count(), 4, count, seed) {
        let fam = build_idsts(&g, &s).unwrap();
        let r = verify_family(&g, &s, &fam, n - 1);
        assert!(r.ok, "n={n} s={s:?}: {:?}", r.violations);
        assert!(common::naive_ok(&g, &s, &fam.trees, n - 1));
        *seen.entry(classify(&g, &s).unwrap()).or_default() += 1;
    }
    seen
}

#[test]
fn every_subset_of_the_eight_cycle() {
    let g = Graph::build(2).unwrap();
    let all = common::subsets(8, 4);
    assert_eq!(all.len(), 70);
    for s in all {
        let fam = build_idsts(&g, &s).unwrap();
        assert_eq!(fam.trees.len(), 1);
        assert!(verify_family(&g, &s, &fam, 1).ok);
    }
}

#[test]
fn sampled_bp3() {
    check_sample(3, 2000, 11);
}

#[test]
fn sampled_bp4_hits_every_case() {
    let seen = check_sample(4, 1500, 12);
    // AllInOneCluster is rare under uniform sampling; cover it directly
    let g = Graph::build(4).unwrap();
    let c = g.cluster_vertices(4);
    for s in [[c[0], c[1], c[2], c[3]], [c[3], c[10], c[17], c[23]]] {
        let fam = build_idsts(&g, &s).unwrap();
        assert!(verify_family(&g, &s, &fam, 3).ok);
        assert_eq!(classify(&g, &s).unwrap(), CaseTag::AllInOneCluster);
    }
    for t in [CaseTag::ThreeOne, CaseTag::TwoTwo, CaseTag::TwoOneOne, CaseTag::AllSeparate] {
        assert!(seen.contains_key(&t), "{t} never sampled");
    }
}

#[test]
fn sampled_bp5() {
    check_sample(5, 100, 13);
}

#[test]
fn three_terminal_sets() {
    let g = Graph::build(3).unwrap();
    for s in common::random_subsets(48, 3, 500, 14) {
        let fam = build_idsts_3(&g, &s).unwrap();
        assert!(verify_family(&g, &s, &fam, 2).ok, "s={s:?}");
    }
}

#[test]
fn trace_starts_with_the_case() {
    let g = Graph::build(4).unwrap();
    for s in common::random_subsets(384, 4, 50, 15) {
        let fam = build_idsts(&g, &s).unwrap();
        assert_eq!(fam.case_trace[0], classify(&g, &s).unwrap().name());
        assert!(!fam.repaired);
    }
}

#[test]
fn bad_terminal_sets() {
    let g = Graph::build(3).unwrap();
    assert!(matches!(build_idsts(&g, &[1, 2, 3]), Err(Error::InvalidArgument(_))));
    assert!(matches!(build_idsts(&g, &[1, 2, 3, 3]), Err(Error::InvalidArgument(_))));
    assert!(matches!(build_idsts(&g, &[1, 2, 3, 48]), Err(Error::InvalidArgument(_))));
    assert!(matches!(build_idsts_3(&g, &[1, 2]), Err(Error::InvalidArgument(_))));
}
