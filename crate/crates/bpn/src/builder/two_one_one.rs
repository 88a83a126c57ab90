use crate::error::Result;
use crate::graph::{Graph, V};
use crate::tree::STreeFamily;

use super::finish;
use super::frame::{solve, Unit};
use super::three_one::{cluster_with, side_label};

/// One cluster holds two terminals, two other clusters one each.
pub fn build_case_two_one_one(g: &Graph, s: &[V]) -> Result<STreeFamily> {
    let c = cluster_with(g, s, 2)?;
    let (pair, singles): (Vec<V>, Vec<V>) = s.iter().partition(|&&v| g.cluster(v) == c);
    let mut units = vec![Unit::Pair(pair[0], pair[1])];
    units.extend(singles.iter().map(|&v| Unit::Single(v)));
    let anchors: Vec<V> = [pair.clone(), singles.clone()].concat();
    let attempt = solve(g, s, &anchors, &[units.clone(), Unit::singles(&units)], |sn| {
        let n = g.n() as i32;
        let hubbed = singles
            .iter()
            .map(|&v| sn[s.iter().position(|&u| u == v).unwrap()])
            .filter(|&v| g.cluster(v).abs() < n)
            .count();
        let sides: Vec<String> = sn.iter().map(|&v| side_label(g, v)).collect();
        format!("sides={}/singles-in-tree-clusters={hubbed}", sides.join(","))
    });
    finish(g, s, attempt, vec!["TwoOneOne".into()])
}
