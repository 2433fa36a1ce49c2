//! Kontsevich's graph complex at small genus.
//!
//! A generator is a connected loop-free graph with all valences at least 3,
//! together with a total order of its edges; reordering by a permutation
//! multiplies by its sign. The differential contracts one edge at a time:
//!
//! `∂[Γ, q_1 < … < q_n] = Σ_i (-1)^(i-1) [Γ/q_i, induced order]`.
//!
//! The alternating sign is what makes `∂∘∂ = 0`; without it the two ways of
//! contracting a pair of edges add up instead of cancelling.
//!
//! Ordered graphs are represented as a [`Multigraph`] whose stored edge order
//! is the chosen order.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::graphs::{canonical_form, enumerate_graphs, vertex_automorphisms, Multigraph};
use crate::linalg::sparse_rank;
use crate::par;
use crate::rational::Rational;

/// Largest genus for which whole bases are generated.
pub const MAX_GENUS: u32 = 4;

/// Result of [`normalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    /// Canonical representative; its stored edge order is the reference order.
    pub generator: Multigraph,
    pub encoding: Vec<u8>,
    /// `+1` or `-1`, or `0` when the class vanishes.
    pub sign: i8,
}

fn permutation_sign(p: &[usize]) -> i8 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn check_generator(g: &Multigraph) -> Result<()> {
    if g.has_loops() {
        return Err(Error::Unsupported("graph-complex generators cannot have loops".into()));
    }
    if g.num_legs() > 0 || g.genus_vector().iter().any(|&x| x > 0) {
        return invalid("graph-complex generators have no legs and no vertex genus");
    }
    if (0..g.num_vertices()).any(|v| g.valence(v) < 3) {
        return invalid("graph-complex generators need every valence ≥ 3");
    }
    if !g.is_connected() {
        return invalid("graph-complex generators must be connected");
    }
    Ok(())
}

/// Whether some automorphism permutes the edges oddly, which kills the class.
pub fn has_odd_automorphism(g: &Multigraph) -> bool {
    if g.has_parallel_edges() {
        // swapping two parallel edges is a transposition
        return true;
    }
    let mut index = BTreeMap::new();
    for (e, (u, v)) in g.edges().enumerate() {
        index.insert((u.min(v), u.max(v)), e);
    }
    vertex_automorphisms(g).iter().any(|pi| {
        let image: Vec<usize> = g
            .edges()
            .map(|(u, v)| {
                let (a, b) = (pi[u], pi[v]);
                index[&(a.min(b), a.max(b))]
            })
            .collect();
        permutation_sign(&image) < 0
    })
}

/// Normal form of `[graph, order]`, where `edge_order[i]` is the edge that
/// comes `i`-th.
pub fn normalize(graph: &Multigraph, edge_order: &[usize]) -> Result<Normalized> {
    let identity: Vec<usize> = (0..graph.num_vertices()).collect();
    let ordered = graph.relabeled(&identity, edge_order)?;
    normalize_ordered(&ordered)
}

/// Normal form of a graph taken with its stored edge order.
pub fn normalize_ordered(graph: &Multigraph) -> Result<Normalized> {
    check_generator(graph)?;
    let cf = canonical_form(graph);
    let sign = if has_odd_automorphism(&cf.graph) { 0 } else { permutation_sign(&cf.edge_order) };
    Ok(Normalized { generator: cf.graph, encoding: cf.encoding, sign })
}

/// Rational combination of generators of fixed genus and edge count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphChain {
    genus: u32,
    num_edges: usize,
    terms: BTreeMap<Vec<u8>, (Multigraph, Rational)>,
}

impl GraphChain {
    pub fn zero(genus: u32, num_edges: usize) -> Self {
        GraphChain { genus, num_edges, terms: BTreeMap::new() }
    }

    /// `[graph]` with its stored edge order.
    pub fn from_graph(graph: &Multigraph) -> Result<Self> {
        let genus = graph.first_betti() as u32;
        let mut c = GraphChain::zero(genus, graph.num_edges());
        c.add_ordered(graph, &Rational::one())?;
        Ok(c)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, encoding: &[u8]) -> Rational {
        self.terms.get(encoding).map_or_else(Rational::zero, |(_, c)| c.clone())
    }

    /// Canonical generators with their coefficients, by encoding.
    pub fn terms(&self) -> impl Iterator<Item = (&Multigraph, &Rational)> {
        self.terms.values().map(|(g, c)| (g, c))
    }

    fn add_normalized(&mut self, n: Normalized, coeff: &Rational) {
        if n.sign == 0 || coeff.is_zero() {
            return;
        }
        let c = if n.sign > 0 { coeff.clone() } else { -coeff };
        let entry = self.terms.entry(n.encoding.clone()).or_insert_with(|| (n.generator, Rational::zero()));
        entry.1 += c;
        if entry.1.is_zero() {
            self.terms.remove(&n.encoding);
        }
    }

    /// Adds `coeff · [graph]` with the graph's stored edge order.
    pub fn add_ordered(&mut self, graph: &Multigraph, coeff: &Rational) -> Result<()> {
        if graph.num_edges() != self.num_edges || graph.first_betti() as u32 != self.genus {
            return invalid("generator has the wrong genus or edge count for this chain");
        }
        let n = normalize_ordered(graph)?;
        self.add_normalized(n, coeff);
        Ok(())
    }

    pub fn add(&self, other: &GraphChain) -> Result<GraphChain> {
        if (self.genus, self.num_edges) != (other.genus, other.num_edges) {
            return invalid("chains have different genus or edge count");
        }
        let mut out = self.clone();
        for (enc, (g, c)) in &other.terms {
            let n = Normalized { generator: g.clone(), encoding: enc.clone(), sign: 1 };
            out.add_normalized(n, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> GraphChain {
        let mut out = GraphChain::zero(self.genus, self.num_edges);
        for (enc, (g, x)) in &self.terms {
            let n = Normalized { generator: g.clone(), encoding: enc.clone(), sign: 1 };
            out.add_normalized(n, &(x * c));
        }
        out
    }
}

impl fmt::Display for GraphChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let edges: Vec<String> = g.edges().map(|(u, v)| format!("{u}-{v}")).collect();
            write!(f, "({c})[{}]", edges.join(" "))?;
        }
        Ok(())
    }
}

/// How the contraction terms of the differential are signed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignRule {
    /// `(-1)^(i-1)` for the `i`-th edge.
    Alternating,
    /// Every term with sign `+1`.
    Plain,
}

/// Contractions of every non-loop edge, as `(edge, Γ/edge, sign)`, before
/// any normalization.
fn contraction_terms(graph: &Multigraph, rule: SignRule) -> Result<Vec<(usize, Multigraph, i8)>> {
    let mut out = vec![];
    for e in 0..graph.num_edges() {
        if graph.is_loop(e) {
            continue;
        }
        let sign = if rule == SignRule::Alternating && e % 2 == 1 { -1 } else { 1 };
        out.push((e, graph.contract_edge(e)?, sign));
    }
    Ok(out)
}

fn boundary_of(graph: &Multigraph, coeff: &Rational, rule: SignRule, out: &mut GraphChain) -> Result<()> {
    for (_, h, sign) in contraction_terms(graph, rule)? {
        if h.has_loops() {
            continue;
        }
        let c = if sign < 0 { -coeff } else { coeff.clone() };
        out.add_normalized(normalize_ordered(&h)?, &c);
    }
    Ok(())
}

pub fn differential(c: &GraphChain) -> Result<GraphChain> {
    differential_with(c, SignRule::Alternating)
}

pub fn differential_with(c: &GraphChain, rule: SignRule) -> Result<GraphChain> {
    if c.num_edges == 0 {
        return invalid("the differential needs at least one edge");
    }
    let terms: Vec<(&Multigraph, &Rational)> = c.terms().collect();
    let parts = par::map(&terms, |(g, x)| {
        let mut out = GraphChain::zero(c.genus, c.num_edges - 1);
        boundary_of(g, x, rule, &mut out).map(|_| out)
    });
    let mut total = GraphChain::zero(c.genus, c.num_edges - 1);
    for p in parts {
        total = total.add(&p?)?;
    }
    Ok(total)
}

fn degree_sequences(total: usize, parts: usize, min: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, max: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in (min..=max.min(left)).rev() {
            if left - x < min * (parts - 1) {
                continue;
            }
            cur.push(x);
            rec(left - x, parts - 1, x, min, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(total, parts, total, min, &mut vec![], &mut out);
    out
}

fn check_genus(g: u32) -> Result<()> {
    if !(2..=MAX_GENUS).contains(&g) {
        return Err(Error::Unsupported(format!("graph complex bases are built for 2 ≤ g ≤ {MAX_GENUS}, got {g}")));
    }
    Ok(())
}

/// Canonical generators of genus `g` with `n` edges that do not vanish,
/// sorted by encoding. Their stored edge order is the reference order.
pub fn basis(g: u32, n: usize) -> Result<Vec<Multigraph>> {
    check_genus(g)?;
    let g = g as usize;
    if n < g + 1 {
        return Ok(vec![]);
    }
    let vertices = n + 1 - g;
    let mut found = BTreeMap::new();
    for degrees in degree_sequences(2 * n, vertices, 3) {
        // parallel edges always vanish
        for graph in enumerate_graphs(vertices, &degrees, 0, false, false)? {
            let norm = normalize_ordered(&graph)?;
            if norm.sign != 0 {
                found.entry(norm.encoding).or_insert(norm.generator);
            }
        }
    }
    Ok(found.into_values().collect())
}

/// Matrix of `∂: G_n → G_{n-1}` in the [`basis`] of both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialMatrix {
    pub rows: usize,
    pub cols: usize,
    /// `(row, col, value)` with nonzero values, sorted.
    pub entries: Vec<(usize, usize, Rational)>,
}

impl DifferentialMatrix {
    pub fn rank(&self) -> usize {
        sparse_rank(self.rows, self.cols, &self.entries)
    }

    /// One `row col p/q` line per entry.
    pub fn to_triplets(&self) -> String {
        let mut s = String::new();
        for (r, c, v) in &self.entries {
            s.push_str(&format!("{r} {c} {}\n", crate::rational::to_pq(v)));
        }
        s
    }
}

pub fn differential_matrix(g: u32, n: usize) -> Result<DifferentialMatrix> {
    let cols = basis(g, n)?;
    let rows = if n == 0 { vec![] } else { basis(g, n - 1)? };
    let row_index: BTreeMap<Vec<u8>, usize> =
        rows.iter().enumerate().map(|(i, r)| (canonical_form(r).encoding, i)).collect();
    let images = par::map(&cols, |b| differential(&GraphChain::from_graph(b)?));
    let mut entries = vec![];
    for (j, image) in images.into_iter().enumerate() {
        for (enc, (_, v)) in &image?.terms {
            let Some(&i) = row_index.get(enc) else {
                return Err(Error::CrossCheck("boundary term outside the basis".into()));
            };
            entries.push((i, j, v.clone()));
        }
    }
    entries.sort();
    Ok(DifferentialMatrix { rows: rows.len(), cols: cols.len(), entries })
}

/// `dim ker(∂: G_n → G_{n-1}) - rank(∂: G_{n+1} → G_n)`.
pub fn homology_dimension(g: u32, n: usize) -> Result<usize> {
    let here = differential_matrix(g, n)?;
    let above = differential_matrix(g, n + 1)?;
    Ok(here.cols - here.rank() - above.rank())
}

/// Whether `c` is a boundary, i.e. lies in the image of `∂: G_{n+1} → G_n`.
pub fn is_boundary(c: &GraphChain) -> Result<bool> {
    if c.is_zero() {
        return Ok(true);
    }
    let above = differential_matrix(c.genus, c.num_edges + 1)?;
    let rows = basis(c.genus, c.num_edges)?;
    let mut entries = above.entries.clone();
    let col = above.cols;
    for (i, r) in rows.iter().enumerate() {
        let x = c.coefficient(&canonical_form(r).encoding);
        if !x.is_zero() {
            entries.push((i, col, x));
        }
    }
    Ok(sparse_rank(rows.len(), col + 1, &entries) == above.rank())
}

/// Wheel with hub `0` and rim `1..=g`; spokes come first in the edge order,
/// then the rim edges `(i, i+1)`.
pub fn wheel_graph(g: u32) -> Result<Multigraph> {
    if g < 2 {
        return invalid("wheels need at least two spokes");
    }
    let g = g as usize;
    let mut edges: Vec<(usize, usize)> = (1..=g).map(|i| (0, i)).collect();
    edges.extend((1..=g).map(|i| (i, i % g + 1)));
    Multigraph::from_edges(g + 1, &edges)
}

/// `[W_g]` with the reference order of [`wheel_graph`].
pub fn wheel_class(g: u32) -> Result<GraphChain> {
    let w = wheel_graph(g)?;
    if w.has_loops() {
        return Ok(GraphChain::zero(g, w.num_edges()));
    }
    let mut c = GraphChain::zero(g, w.num_edges());
    if g >= 3 {
        c.add_ordered(&w, &Rational::one())?;
    }
    // W_2 has a doubled rim edge and vanishes
    Ok(c)
}

/// Checks `∂∂b = 0` for every basis generator `b` in every edge count.
/// Returns the number of generators checked.
pub fn verify_d_squared(g: u32) -> Result<usize> {
    let mut checked = 0;
    for n in (g as usize + 1)..=(3 * g as usize - 3) {
        for b in basis(g, n)? {
            let dd = differential(&differential(&GraphChain::from_graph(&b)?)?)?;
            if !dd.is_zero() {
                return Err(Error::CrossCheck(format!("∂∂ ≠ 0 on a genus-{g} generator with {n} edges: {dd}")));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn k4() -> Multigraph {
        Multigraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn signs_of_permutations() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
    }

    #[test]
    fn parallel_edges_vanish() {
        let raupe = Multigraph::from_edges(4, &[(0, 2), (0, 1), (0, 1), (1, 3), (2, 3), (2, 3)]).unwrap();
        let a = normalize(&raupe, &[0, 1, 2, 3, 4, 5]).unwrap();
        let b = normalize(&raupe, &[0, 2, 1, 3, 4, 5]).unwrap();
        assert_eq!((a.sign, b.sign), (0, 0));
    }

    #[test]
    fn transposition_flips_sign() {
        let a = normalize(&k4(), &[0, 1, 2, 3, 4, 5]).unwrap();
        let b = normalize(&k4(), &[1, 0, 2, 3, 4, 5]).unwrap();
        assert_eq!(a.encoding, b.encoding);
        assert_ne!(a.sign, 0);
        assert_eq!(a.sign, -b.sign);
    }

    #[test]
    fn rejects_bad_generators() {
        let looped = Multigraph::from_edges(2, &[(0, 0), (0, 1), (1, 1), (0, 1)]).unwrap();
        assert!(normalize_ordered(&looped).is_err());
        let path = Multigraph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(normalize_ordered(&path).is_err());
    }

    #[test]
    fn wheels() {
        assert!(wheel_class(2).unwrap().is_zero());
        assert!(wheel_class(4).unwrap().is_zero());
        let w3 = wheel_class(3).unwrap();
        assert_eq!(w3.len(), 1);
        assert!(differential(&w3).unwrap().is_zero());
        let w5 = wheel_class(5).unwrap();
        assert_eq!(w5.len(), 1);
        assert!(differential(&w5).unwrap().is_zero());
        // W_3 is K_4
        let k = normalize_ordered(&k4()).unwrap();
        let c = w3.coefficient(&k.encoding);
        assert!(c == int(1) || c == int(-1));
    }

    #[test]
    fn genus_three_homology() {
        assert_eq!(basis(3, 6).unwrap().len(), 1);
        assert_eq!(homology_dimension(3, 6).unwrap(), 1);
        assert!(!is_boundary(&wheel_class(3).unwrap()).unwrap());
    }

    #[test]
    fn genus_two_is_empty() {
        for n in 0..=5 {
            assert!(basis(2, n).unwrap().is_empty());
            assert_eq!(homology_dimension(2, n).unwrap(), 0);
        }
    }

    #[test]
    fn d_squared_small_genus() {
        assert_eq!(verify_d_squared(3).unwrap(), 1);
        // every genus-4 graph has an odd symmetry
        assert_eq!(verify_d_squared(4).unwrap(), 0);
        assert!(homology_dimension(5, 10).is_err());
    }

    #[test]
    fn matrix_triplets() {
        let m = differential_matrix(4, 9).unwrap();
        assert_eq!(m.to_triplets().lines().count(), m.entries.len());
    }

    /// Applies the contraction terms twice, keeping track of which original
    /// edges survive, so the two contraction orders of a pair can be compared
    /// without identifying isomorphic graphs.
    fn labeled_dd(g: &Multigraph, rule: SignRule) -> BTreeMap<Vec<usize>, i64> {
        let ids: Vec<usize> = (0..g.num_edges()).collect();
        let mut acc = BTreeMap::new();
        for (e, h, s1) in contraction_terms(g, rule).unwrap() {
            let mut left = ids.clone();
            left.remove(e);
            for (f, _, s2) in contraction_terms(&h, rule).unwrap() {
                let mut rest = left.clone();
                rest.remove(f);
                *acc.entry(rest).or_insert(0) += (s1 * s2) as i64;
            }
        }
        acc.retain(|_, v| *v != 0);
        acc
    }

    #[test]
    fn alternating_signs_cancel_before_quotient() {
        for g in [k4(), wheel_graph(5).unwrap()] {
            assert!(labeled_dd(&g, SignRule::Alternating).is_empty());
            assert!(!labeled_dd(&g, SignRule::Plain).is_empty());
        }
    }
}
