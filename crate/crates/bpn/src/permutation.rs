//! Signed permutations: the vertices of the burnt pancake graph.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// A signed permutation of `1..=n`, stored in one-line form.
///
/// The derived order is lexicographic on the symbols, which puts `-k`
/// before `k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm(Vec<i32>);

/// Cluster label: the last symbol of a vertex.
pub type ClusterId = i32;

impl SignedPerm {
    pub fn new(symbols: Vec<i32>) -> Result<Self> {
        let n = symbols.len();
        if n == 0 {
            return invalid("empty permutation");
        }
        let mut seen = vec![false; n + 1];
        for &s in &symbols {
            let m = s.unsigned_abs() as usize;
            if s == 0 || m > n || seen[m] {
                return invalid(format!("not a signed permutation: {symbols:?}"));
            }
            seen[m] = true;
        }
        Ok(SignedPerm(symbols))
    }

    pub(crate) fn from_vec_unchecked(symbols: Vec<i32>) -> Self {
        SignedPerm(symbols)
    }

    pub fn identity(n: usize) -> Self {
        SignedPerm((1..=n as i32).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn symbols(&self) -> &[i32] {
        &self.0
    }

    /// `x(i)`: reverse the first `i` symbols and flip their signs.
    pub fn reversal(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.n() {
            return invalid(format!("reversal index {i} out of range 1..={}", self.n()));
        }
        Ok(self.reversal_unchecked(i))
    }

    pub(crate) fn reversal_unchecked(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[..i].reverse();
        for s in &mut v[..i] {
            *s = -*s;
        }
        SignedPerm(v)
    }

    pub fn out_neighbour(&self) -> Self {
        self.reversal_unchecked(self.n())
    }

    pub fn cluster(&self) -> ClusterId {
        self.0[self.n() - 1]
    }

    /// 1-based position holding the symbol of magnitude `m`.
    pub fn position_of(&self, m: i32) -> Option<usize> {
        self.0.iter().position(|s| s.abs() == m).map(|p| p + 1)
    }

    /// The in-cluster neighbour whose out-neighbour lies in cluster `i` or `-i`.
    pub fn gamma(&self, i: i32) -> Result<Self> {
        let n = self.n() as i32;
        if i < 1 || i > n || i == self.cluster().abs() {
            return invalid(format!("gamma direction {i} not applicable to {self}"));
        }
        let j = self.position_of(i).expect("magnitude present");
        Ok(self.reversal_unchecked(j))
    }

    /// `x -> gamma_i(x) -> out-neighbour of gamma_i(x)`.
    pub fn two_step_path(&self, i: i32) -> Result<[SignedPerm; 3]> {
        let mid = self.gamma(i)?;
        let end = mid.out_neighbour();
        Ok([self.clone(), mid, end])
    }

    /// `g` applied after `self`: position `p` holds `sign(x_p) * g_{|x_p|}`.
    pub fn left_multiply(g: &SignedPerm, x: &SignedPerm) -> Result<Self> {
        if g.n() != x.n() {
            return invalid(format!("size mismatch {} vs {}", g.n(), x.n()));
        }
        let v = x
            .0
            .iter()
            .map(|&s| s.signum() * g.0[s.unsigned_abs() as usize - 1])
            .collect();
        Ok(SignedPerm(v))
    }

    /// The group inverse: `left_multiply(inverse(x), x)` is the identity.
    pub fn inverse(&self) -> Self {
        let mut g = vec![0; self.n()];
        for (p, &s) in self.0.iter().enumerate() {
            g[s.unsigned_abs() as usize - 1] = s.signum() * (p as i32 + 1);
        }
        SignedPerm(g)
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for SignedPerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut v = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            match tok.parse::<i32>() {
                Ok(x) => v.push(x),
                Err(_) => return invalid(format!("bad symbol {tok:?} in {s:?}")),
            }
        }
        SignedPerm::new(v)
    }
}
