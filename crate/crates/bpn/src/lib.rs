//! Burnt pancake graphs BP(n) and families of internally disjoint Steiner
//! trees over four (or three) terminals.

pub mod builder;
pub mod checks;
pub mod connectivity;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod permutation;
pub mod tree;
pub mod verifier;

pub use error::{Error, Result};
pub use graph::{Automorphism, Edge, Graph, SubgraphView, V};
pub use permutation::{ClusterId, SignedPerm};
pub use tree::{STreeFamily, Tree};
