//! Tropical covers of the tropical elliptic curve (a circle).
//!
//! The circle carries a base point `p_0` and the branch points
//! `p_1 < … < p_{2g-2}` clockwise from it. A cover of genus `g` has a
//! trivalent source graph whose vertices map bijectively to the branch
//! points (the vertex order `Ω`); each edge wraps clockwise from one
//! endpoint (its tail) to the other, with weight `w` and `t` crossings of
//! `p_0`. An edge with `t = 0` must run from the earlier to the later
//! branch point. Balancing asks that at every vertex the weights of the
//! edges leaving clockwise add up to those arriving.
//!
//! The total is computed two ways: labeled covers summed over all vertex
//! orders with the factor `1/|Aut Γ|`, and isomorphism classes of covers
//! with `∏ w / |Aut|`, where automorphisms are counted by brute force.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::graphs::{
    automorphism_group_order, count_colored_automorphisms, enumerate_graphs, local_rh_defect, next_permutation,
    Multigraph,
};
use crate::par;
use crate::rational::Rational;

/// Connected loop-free trivalent graph of genus `g ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeynmanGraph {
    graph: Multigraph,
}

impl FeynmanGraph {
    pub fn new(graph: Multigraph) -> Result<Self> {
        if graph.num_legs() > 0 || graph.has_loops() || !graph.is_connected() {
            return invalid("a Feynman graph is connected, loop-free and has no legs");
        }
        if (0..graph.num_vertices()).any(|v| graph.valence(v) != 3 || graph.vertex_genus(v) != 0) {
            return invalid("a Feynman graph is trivalent with genus-0 vertices");
        }
        if graph.first_betti() < 2 {
            return invalid("a Feynman graph has genus at least 2");
        }
        Ok(FeynmanGraph { graph })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn genus(&self) -> usize {
        self.graph.first_betti()
    }

    pub fn automorphisms(&self) -> u128 {
        automorphism_group_order(&self.graph)
    }
}

fn trivalent_graphs(g: u32, allow_loops: bool) -> Result<Vec<Multigraph>> {
    if g < 2 {
        return invalid("genus must be at least 2");
    }
    let n = 2 * g as usize - 2;
    enumerate_graphs(n, &vec![3; n], 0, allow_loops, true)
}

/// One loop-free trivalent graph per isomorphism class.
pub fn enumerate_feynman_graphs(g: u32) -> Result<Vec<FeynmanGraph>> {
    trivalent_graphs(g, false)?.into_iter().map(FeynmanGraph::new).collect()
}

/// Connected trivalent genus-`g` graphs that do have a loop.
pub fn trivalent_graphs_with_loops(g: u32) -> Result<Vec<Multigraph>> {
    Ok(trivalent_graphs(g, true)?.into_iter().filter(Multigraph::has_loops).collect())
}

/// Position of each vertex on the circle: `order[v] = i` puts `v` over
/// `p_{i+1}`.
pub type VertexOrder = Vec<usize>;

pub fn all_orders(n: usize) -> Vec<VertexOrder> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![];
    loop {
        out.push(cur.clone());
        if !next_permutation(&mut cur) {
            return out;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeData {
    pub weight: u32,
    pub crossings: u32,
    /// The edge leaves its first endpoint clockwise.
    pub forward: bool,
}

impl EdgeData {
    pub fn degree(&self) -> u32 {
        self.weight * self.crossings
    }
}

/// Admissible data for one edge: with `a = 0` any weight up to `d` and the
/// direction forced by the order; with `a > 0` a divisor `w` of `a` with
/// `t = a / w` and either direction.
fn edge_options(ends: (usize, usize), order: &[usize], a: u32, d: u32) -> Vec<EdgeData> {
    if a == 0 {
        let (u, v) = ends;
        if order[u] == order[v] {
            return vec![];
        }
        let forward = order[u] < order[v];
        return (1..=d).map(|weight| EdgeData { weight, crossings: 0, forward }).collect();
    }
    let mut out = vec![];
    for w in (1..=a).filter(|w| a % w == 0) {
        for forward in [true, false] {
            out.push(EdgeData { weight: w, crossings: a / w, forward });
        }
    }
    out
}

/// Depth-first search over edge data, pruned by the degree budget, by the
/// local degree bound at each vertex, and by balancing once all edges at a
/// vertex are fixed.
struct Assigner<'a> {
    graph: &'a Multigraph,
    options: Vec<Vec<EdgeData>>,
    /// `Some(d)` to demand total degree exactly `d`.
    total: Option<u32>,
    bound: u32,
    last_edge_at: Vec<usize>,
}

impl Assigner<'_> {
    fn run(&self) -> Vec<Vec<EdgeData>> {
        let mut out = vec![];
        let n = self.graph.num_vertices();
        let mut cw = vec![0u32; n];
        let mut ccw = vec![0u32; n];
        self.rec(0, 0, &mut cw, &mut ccw, &mut vec![], &mut out);
        out
    }

    fn rec(
        &self,
        e: usize,
        degree: u32,
        cw: &mut Vec<u32>,
        ccw: &mut Vec<u32>,
        cur: &mut Vec<EdgeData>,
        out: &mut Vec<Vec<EdgeData>>,
    ) {
        if e == self.options.len() {
            if self.total.is_none_or(|t| t == degree) {
                out.push(cur.clone());
            }
            return;
        }
        let (u, v) = self.graph.edge(e);
        for &opt in &self.options[e] {
            let deg = degree + opt.degree();
            if self.total.is_some_and(|t| deg > t) {
                continue;
            }
            let (tail, head) = if opt.forward { (u, v) } else { (v, u) };
            cw[tail] += opt.weight;
            ccw[head] += opt.weight;
            let ok = [u, v].iter().all(|&x| {
                cw[x] <= self.bound
                    && ccw[x] <= self.bound
                    && (self.last_edge_at[x] != e || cw[x] == ccw[x])
            });
            if ok {
                cur.push(opt);
                self.rec(e + 1, deg, cw, ccw, cur, out);
                cur.pop();
            }
            cw[tail] -= opt.weight;
            ccw[head] -= opt.weight;
        }
    }
}

fn last_edges(graph: &Multigraph) -> Vec<usize> {
    let mut last = vec![usize::MAX; graph.num_vertices()];
    for (e, (u, v)) in graph.edges().enumerate() {
        last[u] = e;
        last[v] = e;
    }
    last
}

/// All balanced edge data on `graph` with vertex order `order` and total
/// degree `d`. Works for any trivalent graph, loops included.
pub fn balanced_assignments(graph: &Multigraph, order: &[usize], d: u32) -> Vec<Vec<EdgeData>> {
    let options = graph
        .edges()
        .map(|ends| {
            let mut o = edge_options(ends, order, 0, d);
            for a in 1..=d {
                o.extend(edge_options(ends, order, a, d));
            }
            o
        })
        .collect();
    Assigner { graph, options, total: Some(d), bound: d, last_edge_at: last_edges(graph) }.run()
}

/// Balanced edge data on `shape` with order `order` and multidegree `a`.
pub fn labeled_covers(shape: &FeynmanGraph, order: &[usize], a: &[u32]) -> Result<Vec<Vec<EdgeData>>> {
    let g = shape.graph();
    if a.len() != g.num_edges() || order.len() != g.num_vertices() {
        return invalid("multidegree or order has the wrong length");
    }
    let d: u32 = a.iter().sum();
    if d == 0 {
        return Ok(vec![]);
    }
    let options = g.edges().zip(a).map(|(ends, &ak)| edge_options(ends, order, ak, d)).collect();
    Ok(Assigner { graph: g, options, total: None, bound: d, last_edge_at: last_edges(g) }.run())
}

/// `N^Γ_{a,Ω}`: sum of `∏ w_k` over balanced edge data with multidegree `a`.
pub fn count_labeled_covers(shape: &FeynmanGraph, order: &[usize], a: &[u32]) -> Result<Rational> {
    let sum: u128 = labeled_covers(shape, order, a)?.iter().map(|x| weight_product(x)).sum();
    Ok(Rational::from_integer(BigInt::from(sum)))
}

fn weight_product(data: &[EdgeData]) -> u128 {
    data.iter().map(|x| x.weight as u128).product()
}

/// Labeled counts of one graph and order, keyed by multidegree.
pub fn refined_counts(shape: &FeynmanGraph, order: &[usize], d: u32) -> BTreeMap<Vec<u32>, u128> {
    let mut out = BTreeMap::new();
    for data in balanced_assignments(shape.graph(), order, d) {
        let a: Vec<u32> = data.iter().map(EdgeData::degree).collect();
        *out.entry(a).or_insert(0) += weight_product(&data);
    }
    out
}

/// Per-graph breakdown of the labeled aggregation.
#[derive(Clone, Debug)]
pub struct GraphContribution {
    pub graph: FeynmanGraph,
    pub automorphisms: u128,
    /// `(order, multidegree, N^Γ_{a,Ω})` for every nonzero count.
    pub counts: Vec<(VertexOrder, Vec<u32>, u128)>,
    /// `Σ_Ω Σ_a N^Γ_{a,Ω} / |Aut Γ|`.
    pub total: Rational,
}

pub fn labeled_aggregation_by_graph(d: u32, g: u32) -> Result<Vec<GraphContribution>> {
    if d == 0 {
        return invalid("degree must be positive");
    }
    let graphs = enumerate_feynman_graphs(g)?;
    let pairs: Vec<(usize, VertexOrder)> = (0..graphs.len())
        .flat_map(|i| all_orders(graphs[i].graph().num_vertices()).into_iter().map(move |o| (i, o)))
        .collect();
    let counts = par::map(&pairs, |(i, order)| refined_counts(&graphs[*i], order, d));
    let mut out: Vec<GraphContribution> = graphs
        .into_iter()
        .map(|graph| GraphContribution {
            automorphisms: graph.automorphisms(),
            graph,
            counts: vec![],
            total: Rational::zero(),
        })
        .collect();
    for ((i, order), by_a) in pairs.into_iter().zip(counts) {
        for (a, c) in by_a {
            out[i].counts.push((order.clone(), a, c));
        }
    }
    for c in out.iter_mut() {
        let sum: u128 = c.counts.iter().map(|x| x.2).sum();
        c.total = Rational::new(BigInt::from(sum), BigInt::from(c.automorphisms));
    }
    Ok(out)
}

/// `Σ_Γ 1/|Aut Γ| Σ_Ω Σ_{|a| = d} N^Γ_{a,Ω}`.
pub fn labeled_aggregation(d: u32, g: u32) -> Result<Rational> {
    Ok(labeled_aggregation_by_graph(d, g)?.into_iter().map(|c| c.total).sum())
}

/// An isomorphism class of covers. Vertex `i` of `source` sits over the
/// branch point `p_{i+1}`; edge data refers to the stored edge endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCover {
    pub source: Multigraph,
    pub edges: Vec<EdgeData>,
}

impl EllipticCover {
    pub fn degree(&self) -> u32 {
        self.edges.iter().map(EdgeData::degree).sum()
    }

    pub fn weight_product(&self) -> u128 {
        weight_product(&self.edges)
    }

    /// Edges as `(tail, head, weight, crossings)`, sorted.
    pub fn canonical_encoding(&self) -> Vec<[u32; 4]> {
        let mut out: Vec<[u32; 4]> = self
            .source
            .edges()
            .zip(&self.edges)
            .map(|((u, v), x)| {
                let (t, h) = if x.forward { (u, v) } else { (v, u) };
                [t as u32, h as u32, x.weight, x.crossings]
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn brute_force_automorphisms(&self) -> u128 {
        let vertex_colors: Vec<u64> = (0..self.source.num_vertices() as u64).collect();
        let mut colors = vec![];
        for x in &self.edges {
            let base = ((x.weight as u64) << 20) | ((x.crossings as u64) << 1);
            colors.push(base | x.forward as u64);
            colors.push(base | !x.forward as u64);
        }
        count_colored_automorphisms(&self.source, &vertex_colors, &colors)
    }

    /// `∏ w / |Aut|`.
    pub fn multiplicity(&self) -> Rational {
        Rational::new(BigInt::from(self.weight_product()), BigInt::from(self.brute_force_automorphisms()))
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.source.num_vertices();
        let (mut cw, mut ccw) = (vec![vec![]; n], vec![vec![]; n]);
        for ((u, v), x) in self.source.edges().zip(&self.edges) {
            if x.weight == 0 || (x.crossings == 0 && (u < v) != x.forward) || u == v {
                return invalid("edge data is inadmissible");
            }
            let (t, h) = if x.forward { (u, v) } else { (v, u) };
            cw[t].push(x.weight);
            ccw[h].push(x.weight);
        }
        for v in 0..n {
            let d: u32 = cw[v].iter().sum();
            if d != ccw[v].iter().sum::<u32>() || cw[v].len() + ccw[v].len() != 3 {
                return invalid(format!("vertex {v} is not a balanced trivalent vertex"));
            }
            let all: Vec<u32> = cw[v].iter().chain(&ccw[v]).copied().collect();
            if local_rh_defect(d, 0, 0, &all) != 1 {
                return invalid(format!("vertex {v} violates the local Riemann–Hurwitz condition"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for EllipticCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .canonical_encoding()
            .iter()
            .map(|[t, h, w, c]| format!("{}>{}:{w}/{c}", t + 1, h + 1))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Isomorphism classes of degree-`d` genus-`g` covers, sorted by encoding.
pub fn enumerate_elliptic_covers(d: u32, g: u32) -> Result<Vec<EllipticCover>> {
    if d == 0 {
        return invalid("degree must be positive");
    }
    // place every graph on the branch points in every way; vertex i of the
    // placed graph is the one over p_{i+1}
    let mut placed: BTreeMap<Vec<(usize, usize)>, Multigraph> = BTreeMap::new();
    for shape in enumerate_feynman_graphs(g)? {
        let graph = shape.graph();
        for order in all_orders(graph.num_vertices()) {
            let mut edges: Vec<(usize, usize)> = graph
                .edges()
                .map(|(u, v)| {
                    let (a, b) = (order[u], order[v]);
                    (a.min(b), a.max(b))
                })
                .collect();
            edges.sort_unstable();
            placed
                .entry(edges.clone())
                .or_insert_with(|| Multigraph::from_edges(graph.num_vertices(), &edges).expect("valid"));
        }
    }
    let graphs: Vec<Multigraph> = placed.into_values().collect();
    let found = par::flat_map(&graphs, |graph| {
        let identity: Vec<usize> = (0..graph.num_vertices()).collect();
        balanced_assignments(graph, &identity, d)
            .into_iter()
            .map(|edges| EllipticCover { source: graph.clone(), edges })
            .collect()
    });
    let mut classes = BTreeMap::new();
    for c in found {
        classes.entry(c.canonical_encoding()).or_insert(c);
    }
    Ok(classes.into_values().collect())
}

/// `Σ ∏ w / |Aut|` over isomorphism classes of covers.
pub fn direct_count(d: u32, g: u32) -> Result<Rational> {
    let covers = enumerate_elliptic_covers(d, g)?;
    Ok(par::map(&covers, EllipticCover::multiplicity).into_iter().sum())
}

/// `N^trop_{d,g}`, checked across the labeled aggregation and the direct
/// enumeration.
pub fn simple_hurwitz_tropical(d: u32, g: u32) -> Result<Rational> {
    let labeled = labeled_aggregation(d, g)?;
    let direct = direct_count(d, g)?;
    if labeled != direct {
        return Err(Error::CrossCheck(format!(
            "labeled aggregation gives {labeled}, direct enumeration gives {direct}"
        )));
    }
    Ok(direct)
}

/// Number of balanced edge data of degree `d` on trivalent genus-`g` graphs
/// with a loop, over all vertex orders. Balancing at a loop vertex forces
/// the remaining edge to weight zero, so this is always zero.
pub fn loop_graph_assignments(d: u32, g: u32) -> Result<usize> {
    let graphs = trivalent_graphs_with_loops(g)?;
    let counts = par::map(&graphs, |graph| {
        all_orders(graph.num_vertices())
            .iter()
            .map(|order| balanced_assignments(graph, order, d).len())
            .sum::<usize>()
    });
    Ok(counts.into_iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    /// Vertices `x_1..x_4` are `0..3`; edges `q_1..q_6` in order.
    fn raupe() -> FeynmanGraph {
        let g = Multigraph::from_edges(4, &[(0, 2), (0, 1), (0, 1), (1, 3), (2, 3), (2, 3)]).unwrap();
        FeynmanGraph::new(g).unwrap()
    }

    #[test]
    fn labeled_example() {
        // x_1 < x_3 < x_4 < x_2
        let order = [0, 3, 1, 2];
        let a = [0, 1, 1, 0, 0, 2];
        let covers = labeled_covers(&raupe(), &order, &a).unwrap();
        let e = |weight, crossings, forward| EdgeData { weight, crossings, forward };
        let expected = vec![
            e(2, 0, true),
            e(1, 1, false),
            e(1, 1, false),
            e(2, 0, false),
            e(3, 0, true),
            e(1, 2, false),
        ];
        assert!(covers.contains(&expected));
        assert_eq!(weight_product(&expected), 12);
        assert!(count_labeled_covers(&raupe(), &order, &a).unwrap() >= int(12));
    }

    #[test]
    fn feynman_graph_counts() {
        assert_eq!(enumerate_feynman_graphs(2).unwrap().len(), 1);
        // K_4 and the ring of two double edges
        assert_eq!(enumerate_feynman_graphs(3).unwrap().len(), 2);
        assert_eq!(trivalent_graphs(2, true).unwrap().len(), 2);
        assert!(enumerate_feynman_graphs(1).is_err());
    }

    #[test]
    fn theta_automorphisms() {
        let theta = &enumerate_feynman_graphs(2).unwrap()[0];
        assert_eq!(theta.automorphisms(), 12);
    }

    #[test]
    fn zero_multidegree_counts_nothing() {
        let r = raupe();
        assert_eq!(count_labeled_covers(&r, &[0, 1, 2, 3], &[0; 6]).unwrap(), int(0));
    }

    #[test]
    fn small_degrees() {
        assert_eq!(simple_hurwitz_tropical(1, 2).unwrap(), int(0));
        assert_eq!(simple_hurwitz_tropical(2, 2).unwrap(), int(2));
        assert_eq!(simple_hurwitz_tropical(3, 2).unwrap(), int(16));
    }

    #[test]
    fn covers_are_valid() {
        for c in enumerate_elliptic_covers(3, 2).unwrap() {
            c.validate().unwrap();
            assert_eq!(c.degree(), 3);
        }
    }

    #[test]
    fn loops_never_balance() {
        assert_eq!(loop_graph_assignments(3, 2).unwrap(), 0);
        assert_eq!(loop_graph_assignments(2, 3).unwrap(), 0);
    }
}
