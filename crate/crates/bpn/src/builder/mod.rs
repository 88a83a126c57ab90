//! Construction of n - 1 internally disjoint S-trees for |S| = 4 (and 3),
//! dispatched on how S spreads over the clusters.

mod all_in_one;
mod all_separate;
mod frame;
mod ledger;
mod repair;
mod three_one;
mod two_one_one;
mod two_two;

use std::collections::HashMap;
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, V};
use crate::tree::{STreeFamily, Tree};
use crate::verifier::verify_family;

pub use all_in_one::build_case_all_in_one;
pub use all_separate::build_case_all_separate;
pub use repair::repair;
pub use three_one::{build_case_three_one, inclusive_tree, index_partition, IndexPartition, InclusiveTree};
pub use two_one_one::build_case_two_one_one;
pub use two_two::build_case_two_two;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    AllInOneCluster,
    ThreeOne,
    TwoTwo,
    TwoOneOne,
    AllSeparate,
}

impl CaseTag {
    pub const ALL: [CaseTag; 5] = [
        CaseTag::AllInOneCluster,
        CaseTag::ThreeOne,
        CaseTag::TwoTwo,
        CaseTag::TwoOneOne,
        CaseTag::AllSeparate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::AllInOneCluster => "AllInOneCluster",
            CaseTag::ThreeOne => "ThreeOne",
            CaseTag::TwoTwo => "TwoTwo",
            CaseTag::TwoOneOne => "TwoOneOne",
            CaseTag::AllSeparate => "AllSeparate",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_terminals(g: &Graph, s: &[V], k: usize) -> Result<()> {
    if s.len() != k {
        return invalid(format!("expected {k} terminals, got {}", s.len()));
    }
    for (i, &v) in s.iter().enumerate() {
        if !g.contains(v) {
            return invalid(format!("vertex id {v} not in the graph"));
        }
        if s[..i].contains(&v) {
            return invalid("duplicate terminal");
        }
    }
    Ok(())
}

/// Cluster sizes of S, largest first.
fn spread(g: &Graph, s: &[V]) -> Vec<usize> {
    let mut per: HashMap<i32, usize> = HashMap::new();
    for &v in s {
        *per.entry(g.cluster(v)).or_default() += 1;
    }
    let mut sizes: Vec<usize> = per.into_values().collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

pub fn classify(g: &Graph, s: &[V]) -> Result<CaseTag> {
    check_terminals(g, s, 4)?;
    Ok(match spread(g, s).as_slice() {
        [4] => CaseTag::AllInOneCluster,
        [3, 1] => CaseTag::ThreeOne,
        [2, 2] => CaseTag::TwoTwo,
        [2, 1, 1] => CaseTag::TwoOneOne,
        _ => CaseTag::AllSeparate,
    })
}

/// n - 1 internally disjoint S-trees for a 4-subset S. The output always
/// passes the verifier; an error means a defect.
pub fn build_idsts(g: &Graph, s: &[V]) -> Result<STreeFamily> {
    let tag = classify(g, s)?;
    if g.n() == 2 {
        return finish(g, s, cycle_base(g, s), vec!["Cycle".into()]);
    }
    match tag {
        CaseTag::AllInOneCluster => build_case_all_in_one(g, s, g.cluster(s[0])),
        CaseTag::ThreeOne => build_case_three_one(g, s),
        CaseTag::TwoTwo => build_case_two_two(g, s),
        CaseTag::TwoOneOne => build_case_two_one_one(g, s),
        CaseTag::AllSeparate => build_case_all_separate(g, s),
    }
}

/// n - 1 trees over a 3-subset: add a fourth terminal, build, then prune
/// every tree back to the three.
pub fn build_idsts_3(g: &Graph, s3: &[V]) -> Result<STreeFamily> {
    check_terminals(g, s3, 3)?;
    let extra = fourth_vertex(g, s3);
    let mut s4 = s3.to_vec();
    s4.push(extra);
    let fam = build_idsts(g, &s4)?;
    let trees: Vec<Tree> = fam.trees.iter().map(|t| t.prune_to(s3)).collect();
    let mut trace = vec![format!("Reduce3/extra={extra}")];
    trace.extend(fam.case_trace);
    let out = STreeFamily { s: s3.to_vec(), trees, case_trace: trace, repaired: fam.repaired };
    let report = verify_family(g, s3, &out, g.n() - 1);
    if !report.ok {
        return Err(Error::Defect(format!("pruned family failed: {:?}", report.violations)));
    }
    Ok(out)
}

/// Smallest vertex outside `s3`, preferring one in the cluster of the first
/// terminal so the extra vertex stays close to the others.
fn fourth_vertex(g: &Graph, s3: &[V]) -> V {
    let c = g.cluster(s3[0]);
    g.cluster_vertices(c)
        .into_iter()
        .find(|v| !s3.contains(v))
        .or_else(|| g.vertices().find(|v| !s3.contains(v)))
        .expect("graph has more than three vertices")
}

/// The n = 2 graph is a single 8-cycle: keep the cycle minus the longest gap
/// between consecutive terminals.
fn cycle_base(g: &Graph, s: &[V]) -> Result<STreeFamily> {
    let start = *s.iter().min().unwrap();
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = g.neighbours(start).next().unwrap();
    while cur != start {
        order.push(cur);
        let next = g.neighbours(cur).find(|&w| w != prev).unwrap();
        prev = cur;
        cur = next;
    }
    let len = order.len();
    let pos: Vec<usize> = {
        let mut p: Vec<usize> = s.iter().map(|v| order.iter().position(|w| w == v).unwrap()).collect();
        p.sort_unstable();
        p
    };
    let mut best: Option<Tree> = None;
    for k in 0..pos.len() {
        // drop the gap from pos[k] forward to the next terminal
        let from = pos[k];
        let to = pos[(k + 1) % pos.len()];
        let gap = (to + len - from) % len;
        let mut verts = Vec::new();
        let mut i = to;
        for _ in 0..=(len - gap) {
            verts.push(order[i % len]);
            i += 1;
        }
        let tree = Tree::path(&verts);
        let better = match &best {
            None => true,
            Some(b) => (tree.edges.len(), &tree.edges) < (b.edges.len(), &b.edges),
        };
        if better {
            best = Some(tree);
        }
    }
    Ok(STreeFamily { s: s.to_vec(), trees: vec![best.unwrap()], case_trace: Vec::new(), repaired: false })
}

/// Verify a construction attempt; on failure hand it to repair.
pub(crate) fn finish(
    g: &Graph,
    s: &[V],
    attempt: Result<STreeFamily>,
    trace: Vec<String>,
) -> Result<STreeFamily> {
    let want = g.n() - 1;
    match attempt {
        Ok(mut fam) => {
            let mut t = trace;
            t.append(&mut fam.case_trace);
            fam.case_trace = t;
            fam.s = s.to_vec();
            let report = verify_family(g, s, &fam, want);
            if report.ok {
                return Ok(fam);
            }
            repair(g, s, &fam, &report)
        }
        Err(e) => {
            let mut t = trace;
            t.push(format!("construction-failed: {e}"));
            let fam = STreeFamily { s: s.to_vec(), trees: Vec::new(), case_trace: t, repaired: false };
            let report = verify_family(g, s, &fam, want);
            repair(g, s, &fam, &report)
        }
    }
}
