//! Enumeration of multigraphs up to isomorphism.
//!
//! Graphs are generated as symmetric multiplicity matrices that meet the
//! degree sequence exactly (the matrix is filled row by row, so the search
//! never leaves the feasible set), then deduplicated by canonical encoding.
//! Labeled legs are attached to unlabeled skeletons afterwards.

use std::collections::BTreeMap;

use super::canon::canonical_encoding;
use super::multigraph::{Leg, Multigraph};
use crate::error::{invalid, Result};
use crate::par;

/// Fills a symmetric multiplicity matrix (loops on the diagonal) so that
/// vertex `v` has exactly `residual[v]` edge half-edges.
pub(crate) fn fill_adjacency(
    residual: &[usize],
    allow_loops: bool,
    allow_parallel: bool,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    fn rec(
        v: usize,
        u: usize,
        res: &mut Vec<usize>,
        loops: bool,
        parallel: bool,
        edges: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let n = res.len();
        if v == n {
            out.push(edges.clone());
            return;
        }
        if u == n {
            if res[v] == 0 {
                rec(v + 1, v + 1, res, loops, parallel, edges, out);
            }
            return;
        }
        if u == v {
            // loops at v
            let max = if loops { res[v] / 2 } else { 0 };
            let max = if parallel { max } else { max.min(1) };
            for k in 0..=max {
                res[v] -= 2 * k;
                edges.extend(std::iter::repeat_n((v, v), k));
                rec(v, v + 1, res, loops, parallel, edges, out);
                edges.truncate(edges.len() - k);
                res[v] += 2 * k;
            }
            return;
        }
        // remaining capacity after u must be able to absorb res[v]
        let later: usize = res[u + 1..].iter().sum();
        let cap = res[v].min(res[u]);
        let cap = if parallel { cap } else { cap.min(1) };
        let absorb_later = if parallel { later } else { (n - u - 1).min(later) };
        let min = res[v].saturating_sub(absorb_later);
        if min > cap {
            return;
        }
        for k in min..=cap {
            res[v] -= k;
            res[u] -= k;
            edges.extend(std::iter::repeat_n((v, u), k));
            rec(v, u + 1, res, loops, parallel, edges, out);
            edges.truncate(edges.len() - k);
            res[v] += k;
            res[u] += k;
        }
    }
    let mut res = residual.to_vec();
    if res.is_empty() {
        out.push(vec![]);
        return;
    }
    let mut edges = vec![];
    // start at the diagonal of row 0
    rec(0, 0, &mut res, allow_loops, allow_parallel, &mut edges, out);
}

/// All ways to put `k` indistinguishable items into bins with capacities.
pub(crate) fn distributions(caps: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, left: usize, caps: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == caps.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let room: usize = caps[i + 1..].iter().sum();
        let lo = left.saturating_sub(room);
        for x in lo..=caps[i].min(left) {
            cur.push(x);
            rec(i + 1, left - x, caps, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(0, k, caps, &mut vec![], &mut out);
    out
}

/// Assigns labels `1..=k` to the legs in every possible way, deduplicated.
pub(crate) fn label_legs(skeletons: &[Multigraph]) -> Vec<Multigraph> {
    let labeled = par::flat_map(skeletons, |g| {
        let k = g.num_legs();
        let slots: Vec<usize> = g.legs().iter().map(|l| l.vertex).collect();
        let mut out = vec![];
        let mut perm: Vec<u32> = (1..=k as u32).collect();
        loop {
            let legs = slots.iter().zip(&perm).map(|(&vertex, &label)| Leg { vertex, label }).collect();
            out.push(g.with_legs(legs).expect("labels are distinct"));
            if !next_permutation(&mut perm) {
                break;
            }
        }
        out
    });
    dedupe(labeled)
}

pub(crate) fn next_permutation<T: Ord>(p: &mut [T]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Keeps one graph per canonical encoding, ordered by encoding.
pub(crate) fn dedupe(graphs: Vec<Multigraph>) -> Vec<Multigraph> {
    let keyed = par::map(&graphs, canonical_encoding);
    let mut seen = BTreeMap::new();
    for (k, g) in keyed.into_iter().zip(graphs) {
        seen.entry(k).or_insert(g);
    }
    seen.into_values().collect()
}

/// Connected multigraphs with the given valences (legs included), one per
/// isomorphism class, sorted by canonical encoding.
///
/// With `num_legs > 0` the legs carry the distinct labels `1..=num_legs`.
/// An infeasible degree sequence yields an empty list.
pub fn enumerate_graphs(
    num_vertices: usize,
    degree_sequence: &[usize],
    num_legs: usize,
    allow_loops: bool,
    allow_parallel: bool,
) -> Result<Vec<Multigraph>> {
    if degree_sequence.len() != num_vertices {
        return invalid(format!(
            "degree sequence has {} entries for {num_vertices} vertices",
            degree_sequence.len()
        ));
    }
    let mut degrees = degree_sequence.to_vec();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let total: usize = degrees.iter().sum();
    if num_vertices == 0 || total < num_legs || (total - num_legs) % 2 != 0 || degrees.contains(&0) {
        return Ok(vec![]);
    }
    let leg_splits = distributions(&degrees, num_legs);
    let skeletons = par::flat_map(&leg_splits, |legs_at| {
        let residual: Vec<usize> = degrees.iter().zip(legs_at).map(|(d, l)| d - l).collect();
        let mut fills = vec![];
        fill_adjacency(&residual, allow_loops, allow_parallel, &mut fills);
        let legs: Vec<(usize, u32)> = legs_at
            .iter()
            .enumerate()
            .flat_map(|(v, &c)| std::iter::repeat_n((v, 0), c))
            .collect();
        fills
            .into_iter()
            .filter_map(|edges| Multigraph::new(num_vertices, &edges, &legs).ok())
            .filter(Multigraph::is_connected)
            .collect()
    });
    let skeletons = dedupe(skeletons);
    if num_legs == 0 {
        Ok(skeletons)
    } else {
        Ok(label_legs(&skeletons))
    }
}
