use crate::error::Result;
use crate::graph::{Graph, V};
use crate::tree::STreeFamily;

use super::finish;
use super::frame::{solve, Unit};
use super::three_one::side_label;

/// Four terminals in four different clusters.
pub fn build_case_all_separate(g: &Graph, s: &[V]) -> Result<STreeFamily> {
    let units: Vec<Unit> = s.iter().map(|&v| Unit::Single(v)).collect();
    let attempt = solve(g, s, s, &[units], |sn| {
        let sides: Vec<String> = sn.iter().map(|&v| side_label(g, v)).collect();
        format!("sides={}", sides.join(","))
    });
    finish(g, s, attempt, vec!["AllSeparate".into()])
}
