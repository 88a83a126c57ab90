//! Build-and-verify over many terminal sets, split across workers by stride.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicBool, Ordering};

use bpn::builder::{build_idsts, build_idsts_3};
use bpn::verifier::verify_family;
use bpn::{Graph, V};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::Fail;

pub const EXHAUSTIVE_CEILING: u128 = 1_000_000;
const FAILURES_SHOWN: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sample,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub n: usize,
    pub k: usize,
    pub mode: Mode,
    pub sample_size: usize,
    pub seed: u64,
    pub jobs: usize,
    pub fail_fast: bool,
}

#[derive(Serialize, Default, Debug, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub k: usize,
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub subsets: usize,
    pub verified: usize,
    pub failed: usize,
    pub trees_each: usize,
    pub repaired: usize,
    pub repair_rate: f64,
    pub case_histogram: BTreeMap<String, usize>,
    /// Smallest failing sets, as vertex text.
    pub failures: Vec<Vec<String>>,
}

#[derive(Default)]
struct Part {
    seen: usize,
    verified: usize,
    repaired: usize,
    cases: BTreeMap<String, usize>,
    failures: BTreeSet<Vec<V>>,
}

impl Part {
    fn merge(mut self, o: Part) -> Part {
        self.seen += o.seen;
        self.verified += o.verified;
        self.repaired += o.repaired;
        for (c, m) in o.cases {
            *self.cases.entry(c).or_default() += m;
        }
        self.failures.extend(o.failures);
        while self.failures.len() > FAILURES_SHOWN {
            self.failures.pop_last();
        }
        self
    }
}

pub fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Lexicographic k-subsets of `0..nv`.
struct Combos {
    idx: Vec<usize>,
    nv: usize,
    done: bool,
}

impl Iterator for Combos {
    type Item = Vec<V>;

    fn next(&mut self) -> Option<Vec<V>> {
        if self.done {
            return None;
        }
        let cur = self.idx.iter().map(|&i| i as V).collect();
        let k = self.idx.len();
        let mut i = k;
        while i > 0 && self.idx[i - 1] == self.nv - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            self.done = true;
        } else {
            self.idx[i - 1] += 1;
            for j in i..k {
                self.idx[j] = self.idx[j - 1] + 1;
            }
        }
        Some(cur)
    }
}

fn combos(nv: usize, k: usize) -> Combos {
    Combos { idx: (0..k).collect(), nv, done: k > nv }
}

/// Seeded sample of k-sets with distinct members, in draw order.
pub fn sample(nv: usize, k: usize, count: usize, seed: u64) -> Vec<Vec<V>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut s: Vec<V> = Vec::with_capacity(k);
            while s.len() < k {
                let v = rng.gen_range(0..nv as V);
                if !s.contains(&v) {
                    s.push(v);
                }
            }
            s
        })
        .collect()
}

fn case_key(trace: &[String]) -> String {
    let head = trace.iter().find(|t| !t.starts_with("Reduce3")).map(String::as_str).unwrap_or("");
    head.split('/').next().unwrap_or("").to_string()
}

fn check_one(g: &Graph, s: &[V], part: &mut Part) -> bool {
    part.seen += 1;
    let built = if s.len() == 3 { build_idsts_3(g, s) } else { build_idsts(g, s) };
    match built {
        Ok(f) if verify_family(g, s, &f, g.n() - 1).ok => {
            part.verified += 1;
            part.repaired += f.repaired as usize;
            *part.cases.entry(case_key(&f.case_trace)).or_default() += 1;
            true
        }
        _ => {
            let mut key = s.to_vec();
            key.sort_unstable();
            part.failures.insert(key);
            if part.failures.len() > FAILURES_SHOWN {
                part.failures.pop_last();
            }
            false
        }
    }
}

pub fn validate(cfg: &SweepConfig, g: &Graph) -> Result<(), Fail> {
    if cfg.k != 3 && cfg.k != 4 {
        return Err(Fail::Usage(format!("--k must be 3 or 4, got {}", cfg.k)));
    }
    if cfg.jobs == 0 {
        return Err(Fail::Usage("--jobs must be at least 1".into()));
    }
    if cfg.mode == Mode::Exhaustive {
        let total = binomial(g.vertex_count() as u128, cfg.k as u128);
        if total > EXHAUSTIVE_CEILING {
            return Err(Fail::Usage(format!(
                "{total} subsets exceed the exhaustive ceiling of {EXHAUSTIVE_CEILING}; use --mode sample"
            )));
        }
    } else if cfg.sample_size == 0 {
        return Err(Fail::Usage("--count must be positive in sample mode".into()));
    }
    Ok(())
}

/// Worker `w` of `jobs` takes items `w, w + jobs, ...`. Merging is by sums
/// and sorted sets, so the result does not depend on scheduling.
pub fn run(cfg: &SweepConfig, g: &Graph) -> Result<Summary, Fail> {
    validate(cfg, g)?;
    let nv = g.vertex_count();
    let jobs = cfg.jobs;
    let stop = AtomicBool::new(false);
    let samples = (cfg.mode == Mode::Sample).then(|| sample(nv, cfg.k, cfg.sample_size, cfg.seed));
    let worker = |w: usize| {
        let mut part = Part::default();
        let items: Box<dyn Iterator<Item = Vec<V>>> = match &samples {
            Some(list) => Box::new(list.iter().skip(w).step_by(jobs).cloned()),
            None => Box::new(combos(nv, cfg.k).skip(w).step_by(jobs)),
        };
        for s in items {
            if cfg.fail_fast && stop.load(Ordering::Relaxed) {
                break;
            }
            if !check_one(g, &s, &mut part) {
                stop.store(true, Ordering::Relaxed);
            }
        }
        part
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Fail::Defect(format!("thread pool: {e}")))?;
    let part = pool.install(|| (0..jobs).into_par_iter().map(worker).reduce(Part::default, Part::merge));
    let failed = part.seen - part.verified;
    Ok(Summary {
        n: cfg.n,
        k: cfg.k,
        mode: Some(cfg.mode),
        seed: (cfg.mode == Mode::Sample).then_some(cfg.seed),
        subsets: part.seen,
        verified: part.verified,
        failed,
        trees_each: g.n() - 1,
        repaired: part.repaired,
        repair_rate: if part.seen == 0 { 0.0 } else { part.repaired as f64 / part.seen as f64 },
        case_histogram: part.cases,
        failures: part
            .failures
            .iter()
            .map(|s| s.iter().map(|&v| g.perm(v).to_string()).collect())
            .collect(),
    })
}
