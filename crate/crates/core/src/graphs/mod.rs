//! Multigraphs with legs and vertex genus, and the shared combinatorics on
//! them: canonical forms, automorphisms, enumeration, edge contraction and
//! local cover conditions.

mod canon;
mod enumerate;
mod local;
mod multigraph;

use std::fmt;
use std::str::FromStr;

pub use canon::{
    automorphism_group_order, canonical_encoding, canonical_form, count_colored_automorphisms,
    is_isomorphic, vertex_automorphisms, CanonicalForm,
};
pub use enumerate::enumerate_graphs;
pub(crate) use enumerate::{dedupe, distributions, fill_adjacency, label_legs, next_permutation};
pub use local::{check_balancing, local_rh_defect};
pub use multigraph::{Leg, Multigraph};

use crate::error::{invalid, Error, Result};

/// Integer partition with parts in weakly decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return invalid("a partition needs at least one part");
        }
        if parts.contains(&0) {
            return invalid("partition parts must be positive");
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Π m_i!` over the multiplicities of equal parts.
    pub fn automorphism_order(&self) -> u128 {
        self.0
            .chunk_by(|a, b| a == b)
            .map(|run| crate::rational::factorial(run.len()))
            .product()
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of(n: u32) -> Vec<Partition> {
        fn rec(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if left == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=left.min(max)).rev() {
                cur.push(p);
                rec(left - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = vec![];
        if n > 0 {
            rec(n, n, &mut vec![], &mut out);
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `3`, `2,1` or `(2,1)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidArgument(format!("cannot parse partition `{s}`")))?;
        Partition::new(parts)
    }
}
