use crate::error::Result;
use crate::graph::{Graph, V};
use crate::tree::STreeFamily;

use super::finish;
use super::frame::{solve, Unit};
use super::three_one::side_label;

/// Two clusters hold two terminals each. Each pair is joined by n - 1
/// disjoint paths inside its cluster, one per tree, and every path leaves
/// its cluster through its first vertex.
pub fn build_case_two_two(g: &Graph, s: &[V]) -> Result<STreeFamily> {
    let mut pairs: Vec<Vec<V>> = Vec::new();
    for &v in s {
        match pairs.iter_mut().find(|p| g.cluster(p[0]) == g.cluster(v)) {
            Some(p) => p.push(v),
            None => pairs.push(vec![v]),
        }
    }
    for p in &mut pairs {
        p.sort_unstable();
    }
    pairs.sort();
    let units: Vec<Unit> = pairs.iter().map(|p| Unit::Pair(p[0], p[1])).collect();
    let anchors: Vec<V> = pairs.concat();
    let adjacent: Vec<bool> = pairs.iter().map(|p| g.adjacent(p[0], p[1])).collect();
    let attempt = solve(g, s, &anchors, &[units.clone(), Unit::singles(&units)], |sn| {
        let sides: Vec<String> = sn.iter().map(|&v| side_label(g, v)).collect();
        format!("sides={}/adjacent={adjacent:?}", sides.join(","))
    });
    finish(g, s, attempt, vec!["TwoTwo".into()])
}
