use std::collections::HashMap;

use crate::graph::V;

/// Per-call record of which tree owns each non-terminal vertex, so
/// auxiliary choices for one tree never collide with another.
#[derive(Clone, Debug, Default)]
pub(crate) struct Ledger {
    terms: Vec<V>,
    owner: HashMap<V, usize>,
}

impl Ledger {
    pub fn new(s: &[V]) -> Self {
        Ledger { terms: s.to_vec(), owner: HashMap::new() }
    }

    pub fn is_terminal(&self, v: V) -> bool {
        self.terms.contains(&v)
    }

    pub fn owner(&self, v: V) -> Option<usize> {
        self.owner.get(&v).copied()
    }

    /// Usable by tree `k`: a non-terminal that is free or already its own.
    pub fn usable(&self, v: V, k: usize) -> bool {
        !self.is_terminal(v) && self.owner(v).is_none_or(|o| o == k)
    }

    /// Claim `v` for tree `k`; false if another tree holds it. Terminals are
    /// shared by every tree and never recorded.
    pub fn claim(&mut self, v: V, k: usize) -> bool {
        if self.is_terminal(v) {
            return true;
        }
        match self.owner.get(&v) {
            Some(&o) => o == k,
            None => {
                self.owner.insert(v, k);
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_claims() {
        let mut l = Ledger::new(&[1, 2]);
        assert!(l.claim(5, 0));
        assert!(l.claim(5, 0));
        assert!(!l.claim(5, 1));
        assert!(l.claim(1, 1) && l.claim(1, 0));
        assert!(!l.usable(1, 0));
        assert!(l.usable(5, 0) && !l.usable(5, 1) && l.usable(6, 1));
        assert_eq!(l.owner(5), Some(0));
        assert_eq!(l.owner(1), None);
    }
}
