//! Tropical double Hurwitz covers of the line.
//!
//! A cover is built by a left-to-right strand sweep: strands start as the
//! ends of weight `μ_i`, and at each of the `s` levels either two strands
//! merge (weights add) or one strand splits into two. The strands left after
//! the last level become the ends over `ν`. Every level carries exactly one
//! trivalent vertex, so vertex `t` of the source graph is the vertex at
//! level `t + 1`.
//!
//! Two counting conventions are offered. In the unlabeled one, ends of equal
//! weight on the same side are interchangeable; this matches the classical
//! count `H_g(μ, ν)` with automorphisms. In the labeled one, ends carry the
//! labels of the parts of `μ` and `ν` (in the order given), so the total is
//! `H_g(μ, ν) · |Aut μ| · |Aut ν|` and is a polynomial in the parts on each
//! chamber.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;

use crate::error::{invalid, Error, Result};
use crate::graphs::{check_balancing, count_colored_automorphisms, local_rh_defect, Multigraph, Partition};
use crate::par;
use crate::rational::Rational;

/// One isomorphism class of tropical double Hurwitz covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineCover {
    pub genus: u32,
    /// Weights of the left ends, in label order.
    pub mu: Vec<u32>,
    /// Weights of the right ends, in label order.
    pub nu: Vec<u32>,
    pub labeled_ends: bool,
    /// Vertex `t` sits at level `t + 1`. Every edge is stored as
    /// `(lower, upper)`; legs `0..ℓ(μ)` are the left ends, the rest the right
    /// ends, with labels `1..=ℓ(μ)+ℓ(ν)`.
    pub source: Multigraph,
    pub edge_weights: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverMultiplicity {
    pub weight_product: u128,
    pub forks: u32,
    pub wieners: u32,
    /// Brute-force order of the automorphism group of the cover.
    pub automorphisms: u128,
    pub value: Rational,
}

/// Number of levels `s = 2g - 2 + ℓ(μ) + ℓ(ν)`.
pub fn num_levels(g: u32, lmu: usize, lnu: usize) -> i64 {
    2 * g as i64 - 2 + lmu as i64 + lnu as i64
}

impl LineCover {
    pub fn num_levels(&self) -> usize {
        self.source.num_vertices()
    }

    pub fn left_leg_vertex(&self, i: usize) -> usize {
        self.source.legs()[i].vertex
    }

    pub fn right_leg_vertex(&self, j: usize) -> usize {
        self.source.legs()[self.mu.len() + j].vertex
    }

    /// Flag weights at `v`, split into left-pointing and right-pointing.
    pub fn flags(&self, v: usize) -> (Vec<u32>, Vec<u32>) {
        let (mut left, mut right) = (vec![], vec![]);
        for (e, (lo, hi)) in self.source.edges().enumerate() {
            if hi == v {
                left.push(self.edge_weights[e]);
            }
            if lo == v {
                right.push(self.edge_weights[e]);
            }
        }
        for (i, &w) in self.mu.iter().enumerate() {
            if self.left_leg_vertex(i) == v {
                left.push(w);
            }
        }
        for (j, &w) in self.nu.iter().enumerate() {
            if self.right_leg_vertex(j) == v {
                right.push(w);
            }
        }
        (left, right)
    }

    /// Checks the defining conditions of a tropical double Hurwitz cover.
    pub fn validate(&self) -> Result<()> {
        let s = num_levels(self.genus, self.mu.len(), self.nu.len());
        if s != self.num_levels() as i64 {
            return invalid(format!("{} levels, expected {s}", self.num_levels()));
        }
        if self.mu.iter().sum::<u32>() != self.nu.iter().sum::<u32>() {
            return invalid("end weights on both sides differ");
        }
        if !self.source.is_connected() || self.source.first_betti() != self.genus as usize {
            return invalid("source is disconnected or has the wrong genus");
        }
        for (e, (lo, hi)) in self.source.edges().enumerate() {
            if lo >= hi || self.edge_weights[e] == 0 {
                return invalid(format!("edge {e} is not a positive edge between increasing levels"));
            }
        }
        for v in 0..self.num_levels() {
            let (left, right) = self.flags(v);
            if left.len() + right.len() != 3 || self.source.vertex_genus(v) != 0 {
                return invalid(format!("vertex {v} is not a trivalent genus-0 vertex"));
            }
            let Some(d) = check_balancing(&[left.clone(), right.clone()]) else {
                return invalid(format!("vertex {v} is not balanced"));
            };
            let all: Vec<u32> = left.iter().chain(&right).copied().collect();
            if local_rh_defect(d, 0, 0, &all) != 1 {
                return invalid(format!("vertex {v} violates the local Riemann–Hurwitz condition"));
            }
        }
        Ok(())
    }

    /// Complete isomorphism invariant. Vertices are pinned by their levels,
    /// so it is enough to sort edges and (for unlabeled ends) the ends.
    pub fn canonical_encoding(&self) -> Vec<u32> {
        encode(self.labeled_ends, &self.mu, &self.nu, &self.source, &self.edge_weights)
    }

    /// Compact text form: `lower-upper:weight` edges, then the ends as
    /// `level:weight` (levels counted from 1).
    pub fn canonical_string(&self) -> String {
        self.to_string()
    }

    pub fn forks(&self) -> u32 {
        if self.labeled_ends {
            return 0;
        }
        let mut ends: BTreeMap<(bool, usize, u32), u32> = BTreeMap::new();
        for (i, &w) in self.mu.iter().enumerate() {
            *ends.entry((false, self.left_leg_vertex(i), w)).or_insert(0) += 1;
        }
        for (j, &w) in self.nu.iter().enumerate() {
            *ends.entry((true, self.right_leg_vertex(j), w)).or_insert(0) += 1;
        }
        ends.values().map(|&k| k * (k.saturating_sub(1)) / 2).sum()
    }

    pub fn wieners(&self) -> u32 {
        let mut groups: BTreeMap<(usize, usize, u32), u32> = BTreeMap::new();
        for (e, (lo, hi)) in self.source.edges().enumerate() {
            *groups.entry((lo, hi, self.edge_weights[e])).or_insert(0) += 1;
        }
        groups.values().map(|&k| k * (k.saturating_sub(1)) / 2).sum()
    }

    /// Automorphisms counted by backtracking over vertex and half-edge
    /// bijections that keep levels, weights, sides and (if labeled) labels.
    pub fn brute_force_automorphisms(&self) -> u128 {
        let vertex_colors: Vec<u64> = (0..self.num_levels() as u64).collect();
        let mut colors = vec![];
        for &w in &self.edge_weights {
            colors.push((1 << 32) | w as u64);
            colors.push((2 << 32) | w as u64);
        }
        let lmu = self.mu.len();
        for (j, leg) in self.source.legs().iter().enumerate() {
            let (side, w) = if j < lmu { (3u64, self.mu[j]) } else { (4u64, self.nu[j - lmu]) };
            let label = if self.labeled_ends { leg.label as u64 } else { 0 };
            colors.push((side << 32) | (label << 40) | w as u64);
        }
        count_colored_automorphisms(&self.source, &vertex_colors, &colors)
    }

    /// `∏ ω(e) / 2^(f+w)`, with the automorphism count checked against the
    /// brute-force search.
    pub fn multiplicity(&self) -> Result<CoverMultiplicity> {
        let weight_product: u128 = self.edge_weights.iter().map(|&w| w as u128).product();
        let (forks, wieners) = (self.forks(), self.wieners());
        let automorphisms = self.brute_force_automorphisms();
        if automorphisms != 1u128 << (forks + wieners) {
            return Err(Error::CrossCheck(format!(
                "cover {self}: |Aut| = {automorphisms} but f + w = {}",
                forks + wieners
            )));
        }
        Ok(CoverMultiplicity {
            weight_product,
            forks,
            wieners,
            automorphisms,
            value: Rational::new(BigInt::from(weight_product), BigInt::from(automorphisms)),
        })
    }
}

impl fmt::Display for LineCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .source
            .edges()
            .zip(&self.edge_weights)
            .map(|((a, b), w)| format!("{}-{}:{w}", a + 1, b + 1))
            .collect();
        let left: Vec<String> =
            self.mu.iter().enumerate().map(|(i, w)| format!("{}:{w}", self.left_leg_vertex(i) + 1)).collect();
        let right: Vec<String> =
            self.nu.iter().enumerate().map(|(j, w)| format!("{}:{w}", self.right_leg_vertex(j) + 1)).collect();
        write!(f, "[{}] L[{}] R[{}]", edges.join(" "), left.join(" "), right.join(" "))
    }
}

fn encode(labeled: bool, mu: &[u32], nu: &[u32], source: &Multigraph, weights: &[u32]) -> Vec<u32> {
    let mut edges: Vec<[u32; 3]> =
        source.edges().zip(weights).map(|((a, b), &w)| [a as u32, b as u32, w]).collect();
    edges.sort_unstable();
    let side = |range: std::ops::Range<usize>, ws: &[u32]| -> Vec<[u32; 2]> {
        let mut ends: Vec<[u32; 2]> =
            range.zip(ws).map(|(j, &w)| [source.legs()[j].vertex as u32, w]).collect();
        if !labeled {
            ends.sort_unstable();
        }
        ends
    };
    let lmu = mu.len();
    let mut out = vec![source.num_vertices() as u32, edges.len() as u32];
    out.extend(edges.iter().flatten());
    out.extend(side(0..lmu, mu).iter().flatten());
    out.extend(side(lmu..lmu + nu.len(), nu).iter().flatten());
    out
}

#[derive(Clone, Copy, Debug)]
enum Origin {
    Left(usize),
    Vertex(usize),
}

#[derive(Clone, Debug)]
struct Sweep {
    strands: Vec<(Origin, u32)>,
    edges: Vec<(usize, usize, u32)>,
    left_at: Vec<usize>,
    level: usize,
}

impl Sweep {
    fn attach(&mut self, strand: (Origin, u32)) {
        match strand.0 {
            Origin::Left(i) => self.left_at[i] = self.level,
            Origin::Vertex(u) => self.edges.push((u, self.level, strand.1)),
        }
    }

    /// All states reachable by one merge or split at the current level.
    fn successors(&self) -> Vec<Sweep> {
        let mut out = vec![];
        let n = self.strands.len();
        for i in 0..n {
            for j in i + 1..n {
                let mut next = self.clone();
                let (a, b) = (self.strands[i], self.strands[j]);
                next.strands.remove(j);
                next.strands.remove(i);
                next.attach(a);
                next.attach(b);
                next.strands.push((Origin::Vertex(self.level), a.1 + b.1));
                next.level += 1;
                out.push(next);
            }
        }
        for i in 0..n {
            let w = self.strands[i].1;
            for a in 1..=w / 2 {
                let mut next = self.clone();
                let strand = next.strands.remove(i);
                next.attach(strand);
                next.strands.push((Origin::Vertex(self.level), a));
                next.strands.push((Origin::Vertex(self.level), w - a));
                next.level += 1;
                out.push(next);
            }
        }
        out
    }
}

struct Problem<'a> {
    genus: u32,
    mu: &'a [u32],
    nu: &'a [u32],
    s: usize,
    labeled: bool,
}

impl Problem<'_> {
    fn feasible(&self, state: &Sweep) -> bool {
        let remaining = (self.s - state.level) as i64;
        let gap = state.strands.len() as i64 - self.nu.len() as i64;
        gap.abs() <= remaining && (gap + remaining) % 2 == 0
    }

    /// Identifies partial sweeps with the same future: edges and strands as
    /// multisets, and left ends up to swapping equal weights when unlabeled.
    fn state_key(&self, state: &Sweep) -> Vec<u32> {
        let mut edges: Vec<[u32; 3]> = state.edges.iter().map(|&(a, b, w)| [a as u32, b as u32, w]).collect();
        edges.sort_unstable();
        let mut strands: Vec<[u32; 3]> = state
            .strands
            .iter()
            .map(|&(o, w)| match o {
                Origin::Left(i) => [0, if self.labeled { i as u32 } else { 0 }, w],
                Origin::Vertex(v) => [1, v as u32, w],
            })
            .collect();
        strands.sort_unstable();
        let mut left: Vec<[u32; 2]> = state
            .left_at
            .iter()
            .enumerate()
            .map(|(i, &v)| [self.mu[i], if v == usize::MAX { u32::MAX } else { v as u32 }])
            .collect();
        if !self.labeled {
            left.sort_unstable();
        }
        let mut key = vec![edges.len() as u32];
        key.extend(edges.iter().flatten());
        key.extend(strands.iter().flatten());
        key.extend(left.iter().flatten());
        key
    }

    /// Level-by-level sweep, merging partial states with equal keys.
    fn sweep(&self, start: Sweep) -> Vec<LineCover> {
        let mut layer = vec![start];
        for _ in 0..self.s {
            let next = par::flat_map(&layer, |state| {
                state.successors().into_iter().filter(|n| self.feasible(n)).collect()
            });
            let mut seen = HashMap::new();
            layer = vec![];
            for state in next {
                let key = self.state_key(&state);
                if let Entry::Vacant(e) = seen.entry(key) {
                    e.insert(());
                    layer.push(state);
                }
            }
        }
        par::flat_map(&layer, |state| {
            let mut out = vec![];
            self.finish(state, &mut out);
            out
        })
    }

    /// Turns the remaining strands into right ends in every admissible way.
    fn finish(&self, state: &Sweep, out: &mut Vec<LineCover>) {
        let mut strand_vertices = vec![];
        for &(origin, w) in &state.strands {
            match origin {
                // an untouched end is a separate component
                Origin::Left(_) => return,
                Origin::Vertex(v) => strand_vertices.push((v, w)),
            }
        }
        let mut ws: Vec<u32> = strand_vertices.iter().map(|x| x.1).collect();
        let mut target = self.nu.to_vec();
        ws.sort_unstable();
        target.sort_unstable();
        if ws != target {
            return;
        }
        let assignments = if self.labeled {
            matchings(&strand_vertices, self.nu)
        } else {
            // any one matching; equal-weight ends are interchangeable
            matchings(&strand_vertices, self.nu).into_iter().take(1).collect()
        };
        for right_at in assignments {
            if let Some(cover) = self.build(state, &right_at) {
                out.push(cover);
            }
        }
    }

    fn build(&self, state: &Sweep, right_at: &[usize]) -> Option<LineCover> {
        let lmu = self.mu.len();
        let mut legs: Vec<(usize, usize, u32)> = vec![];
        for (i, &v) in state.left_at.iter().enumerate() {
            legs.push((0, v, self.mu[i]));
        }
        for (j, &v) in right_at.iter().enumerate() {
            legs.push((1, v, self.nu[j]));
        }
        if !self.labeled {
            // canonical representative: ends of equal weight sorted by level
            let (l, r) = legs.split_at_mut(lmu);
            sort_equal_weight_ends(l, self.mu);
            sort_equal_weight_ends(r, self.nu);
        }
        let mut edges = state.edges.clone();
        edges.sort_unstable();
        let edge_pairs: Vec<(usize, usize)> = edges.iter().map(|&(a, b, _)| (a, b)).collect();
        let leg_pairs: Vec<(usize, u32)> =
            legs.iter().enumerate().map(|(k, &(_, v, _))| (v, k as u32 + 1)).collect();
        let source = Multigraph::new(self.s, &edge_pairs, &leg_pairs).ok()?;
        if !source.is_connected() {
            return None;
        }
        Some(LineCover {
            genus: self.genus,
            mu: self.mu.to_vec(),
            nu: self.nu.to_vec(),
            labeled_ends: self.labeled,
            source,
            edge_weights: edges.iter().map(|e| e.2).collect(),
        })
    }
}

/// Within each run of equal weights, put the end vertices in increasing order.
fn sort_equal_weight_ends(legs: &mut [(usize, usize, u32)], weights: &[u32]) {
    let mut start = 0;
    while start < legs.len() {
        let mut end = start + 1;
        while end < legs.len() && weights[end] == weights[start] {
            end += 1;
        }
        let mut vs: Vec<usize> = legs[start..end].iter().map(|l| l.1).collect();
        vs.sort_unstable();
        for (l, v) in legs[start..end].iter_mut().zip(vs) {
            l.1 = v;
        }
        start = end;
    }
}

/// All bijections from labeled targets to strands with equal weights;
/// returns, per bijection, the vertex of the strand assigned to each target.
fn matchings(strands: &[(usize, u32)], targets: &[u32]) -> Vec<Vec<usize>> {
    fn rec(j: usize, strands: &[(usize, u32)], targets: &[u32], used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if j == targets.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..strands.len() {
            if !used[k] && strands[k].1 == targets[j] {
                used[k] = true;
                cur.push(strands[k].0);
                rec(j + 1, strands, targets, used, cur, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = vec![];
    rec(0, strands, targets, &mut vec![false; strands.len()], &mut vec![], &mut out);
    out
}

fn check_input(g: u32, mu: &[u32], nu: &[u32]) -> Result<usize> {
    if mu.is_empty() || nu.is_empty() || mu.contains(&0) || nu.contains(&0) {
        return invalid("end weights must be nonempty lists of positive integers");
    }
    let (a, b): (u32, u32) = (mu.iter().sum(), nu.iter().sum());
    if a != b {
        return invalid(format!("|μ| = {a} differs from |ν| = {b}"));
    }
    let s = num_levels(g, mu.len(), nu.len());
    if s <= 0 {
        return Err(Error::Degenerate(format!(
            "s = {s}: a cover without branch points has no tropical model here"
        )));
    }
    Ok(s as usize)
}

fn enumerate(g: u32, mu: &[u32], nu: &[u32], labeled: bool) -> Result<Vec<LineCover>> {
    let s = check_input(g, mu, nu)?;
    let problem = Problem { genus: g, mu, nu, s, labeled };
    let start = Sweep {
        strands: mu.iter().enumerate().map(|(i, &w)| (Origin::Left(i), w)).collect(),
        edges: vec![],
        left_at: vec![usize::MAX; mu.len()],
        level: 0,
    };
    let found = problem.sweep(start);
    let mut classes = BTreeMap::new();
    for c in found {
        classes.entry(c.canonical_encoding()).or_insert(c);
    }
    Ok(classes.into_values().collect())
}

/// Isomorphism classes of tropical double Hurwitz covers, ends of equal
/// weight interchangeable. Sorted by canonical encoding.
pub fn enumerate_line_covers(g: u32, mu: &Partition, nu: &Partition) -> Result<Vec<LineCover>> {
    enumerate(g, mu.parts(), nu.parts(), false)
}

/// Covers with labeled ends: left end `i` has weight `mu[i]`, right end `j`
/// has weight `nu[j]`. The weights need not be sorted.
pub fn enumerate_line_covers_labeled(g: u32, mu: &[u32], nu: &[u32]) -> Result<Vec<LineCover>> {
    enumerate(g, mu, nu, true)
}

fn total(covers: &[LineCover]) -> Result<Rational> {
    let values = par::map(covers, LineCover::multiplicity);
    let mut sum = Rational::from_integer(0.into());
    for v in values {
        sum += v?.value;
    }
    Ok(sum)
}

/// `H_g^trop(μ, ν)`: covers weighted by `∏ ω(e) / |Aut|`.
pub fn double_hurwitz_tropical(g: u32, mu: &Partition, nu: &Partition) -> Result<Rational> {
    total(&enumerate_line_covers(g, mu, nu)?)
}

/// The count with labeled ends, equal to `H_g(μ, ν) · |Aut μ| · |Aut ν|`.
pub fn double_hurwitz_tropical_labeled(g: u32, mu: &[u32], nu: &[u32]) -> Result<Rational> {
    total(&enumerate_line_covers_labeled(g, mu, nu)?)
}
