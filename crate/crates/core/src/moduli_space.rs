//! Combinatorial types of tropical curves of genus `g` with `n` marked ends
//! and the face poset of the moduli cone complex.
//!
//! Vertices are the minimal ones: every vertex satisfies
//! `2 g(v) - 2 + val(v) > 0`, so genus-0 vertices are at least trivalent and
//! positive-genus vertices may have valence 1 or 2.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{invalid, Result};
use crate::graphs::{canonical_encoding, dedupe, distributions, fill_adjacency, label_legs, vertex_automorphisms, Multigraph};
use crate::par;

/// One cone of the moduli space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialType {
    pub graph: Multigraph,
    /// Number of bounded edges.
    pub dimension: usize,
    /// Whether some automorphism permutes the bounded edges nontrivially,
    /// so the cone is a quotient of an orthant.
    pub folded: bool,
}

impl CombinatorialType {
    pub fn new(graph: Multigraph) -> Self {
        let folded = acts_on_edges(&graph);
        CombinatorialType { dimension: graph.num_edges(), folded, graph }
    }
}

fn acts_on_edges(g: &Multigraph) -> bool {
    let m = g.multiplicities();
    let n = g.num_vertices();
    if (0..n).any(|u| g.loops_at(u) > 1 || (u + 1..n).any(|v| m[u][v] > 1)) {
        return true;
    }
    // with every edge class a single edge, an automorphism fixes all edges
    // exactly when it fixes every edge's endpoint pair
    vertex_automorphisms(g).iter().any(|pi| {
        g.edges().any(|(u, v)| {
            let (a, b) = (pi[u], pi[v]);
            (a.min(b), a.max(b)) != (u.min(v), u.max(v))
        })
    })
}

fn check_stable(g: u32, n: usize) -> Result<()> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return invalid(format!("(g, n) = ({g}, {n}) is not stable"));
    }
    Ok(())
}

/// Expected top dimension `3g - 3 + n`.
pub fn expected_max_dimension(g: u32, n: usize) -> Result<usize> {
    check_stable(g, n)?;
    Ok(3 * g as usize + n - 3)
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    distributions(&vec![total; parts], total)
}

/// Skeletons (legs unlabeled) with `v` vertices.
fn skeletons(g: u32, n: usize, v: usize) -> Vec<Multigraph> {
    let mut out = vec![];
    for h in 0..=g as usize {
        let betti = g as usize - h;
        let edges = v - 1 + betti;
        for genus in compositions(h, v) {
            let genus: Vec<u32> = genus.into_iter().map(|x| x as u32).collect();
            for legs_at in compositions(n, v) {
                for residual in compositions(2 * edges, v) {
                    let stable = (0..v)
                        .all(|i| 2 * genus[i] as i64 - 2 + (residual[i] + legs_at[i]) as i64 > 0);
                    if !stable {
                        continue;
                    }
                    let legs: Vec<(usize, u32)> = legs_at
                        .iter()
                        .enumerate()
                        .flat_map(|(i, &c)| std::iter::repeat_n((i, 0), c))
                        .collect();
                    let mut fills = vec![];
                    fill_adjacency(&residual, true, true, &mut fills);
                    out.extend(
                        fills
                            .into_iter()
                            .filter_map(|e| Multigraph::with_genus(v, &e, &legs, &genus).ok())
                            .filter(|m| m.is_connected()),
                    );
                }
            }
        }
    }
    dedupe(out)
}

/// One representative per isomorphism class (respecting leg labels and
/// vertex genus), sorted by decreasing dimension and then by canonical
/// encoding.
pub fn enumerate_types(g: u32, n: usize) -> Result<Vec<CombinatorialType>> {
    check_stable(g, n)?;
    let max_vertices = 2 * g as usize + n - 2;
    let counts: Vec<usize> = (1..=max_vertices).collect();
    let skel = par::flat_map(&counts, |&v| skeletons(g, n, v));
    let graphs = if n == 0 { dedupe(skel) } else { label_legs(&skel) };
    let mut keyed: Vec<(usize, Vec<u8>, Multigraph)> =
        graphs.into_iter().map(|m| (m.num_edges(), canonical_encoding(&m), m)).collect();
    keyed.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let graphs: Vec<Multigraph> = keyed.into_iter().map(|(_, _, m)| m).collect();
    Ok(par::map(&graphs, |m| CombinatorialType::new(m.clone())))
}

/// Types with their single-edge contraction relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConePoset {
    pub types: Vec<CombinatorialType>,
    /// `(lower, upper)`: `types[lower]` is `types[upper]` with one edge
    /// contracted. Sorted, without repeats.
    pub covers: Vec<(usize, usize)>,
}

impl ConePoset {
    /// Indices of types that are not a contraction of anything.
    pub fn maximal(&self) -> Vec<usize> {
        let lower: BTreeSet<usize> = self.covers.iter().map(|&(a, _)| a).collect();
        (0..self.types.len()).filter(|i| !lower.contains(i)).collect()
    }

    /// Every cover drops the dimension by exactly one.
    pub fn is_graded(&self) -> bool {
        self.covers.iter().all(|&(a, b)| self.types[a].dimension + 1 == self.types[b].dimension)
    }

    pub fn max_dimension(&self) -> usize {
        self.types.iter().map(|t| t.dimension).max().unwrap_or(0)
    }
}

/// Contracts `e` in `g`; a loop raises the genus of its vertex.
pub fn contract(g: &Multigraph, e: usize) -> Result<Multigraph> {
    if g.is_loop(e) {
        g.contract_loop(e)
    } else {
        g.contract_edge(e)
    }
}

pub fn build_poset(types: Vec<CombinatorialType>) -> Result<ConePoset> {
    let index: BTreeMap<Vec<u8>, usize> =
        types.iter().enumerate().map(|(i, t)| (canonical_encoding(&t.graph), i)).collect();
    let per_type = par::map(&types, |t| -> Result<Vec<Vec<u8>>> {
        (0..t.graph.num_edges()).map(|e| Ok(canonical_encoding(&contract(&t.graph, e)?))).collect()
    });
    let mut covers = BTreeSet::new();
    for (upper, encs) in per_type.into_iter().enumerate() {
        for enc in encs? {
            match index.get(&enc) {
                Some(&lower) => {
                    covers.insert((lower, upper));
                }
                None => return invalid("a contraction left the list of types"),
            }
        }
    }
    Ok(ConePoset { types, covers: covers.into_iter().collect() })
}

pub fn moduli_poset(g: u32, n: usize) -> Result<ConePoset> {
    build_poset(enumerate_types(g, n)?)
}

pub fn max_dimension(g: u32, n: usize) -> Result<usize> {
    Ok(enumerate_types(g, n)?.iter().map(|t| t.dimension).max().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(types: &[CombinatorialType]) -> Vec<usize> {
        types.iter().map(|t| t.dimension).collect()
    }

    #[test]
    fn four_marked_rational() {
        let p = moduli_poset(0, 4).unwrap();
        assert_eq!(dims(&p.types), vec![1, 1, 1, 0]);
        assert_eq!(p.covers, vec![(3, 0), (3, 1), (3, 2)]);
        assert!(p.types.iter().all(|t| !t.folded));
        assert_eq!(p.max_dimension(), 1);
    }

    #[test]
    fn genus_one_two_marks() {
        let p = moduli_poset(1, 2).unwrap();
        assert_eq!(dims(&p.types), vec![2, 2, 1, 1, 0]);
        let folded: Vec<usize> = p.maximal().into_iter().filter(|&i| p.types[i].folded).collect();
        assert_eq!(folded.len(), 1);
        assert_eq!(p.types[folded[0]].graph.num_vertices(), 2);
        assert!(p.is_graded());
    }

    #[test]
    fn genus_two() {
        let p = moduli_poset(2, 0).unwrap();
        let top = p.maximal();
        assert_eq!(top.len(), 2);
        assert!(top.iter().all(|&i| p.types[i].dimension == 3 && p.types[i].folded));
        assert_eq!(max_dimension(2, 0).unwrap(), 3);
    }

    #[test]
    fn five_marked_rational() {
        let p = moduli_poset(0, 5).unwrap();
        assert_eq!(p.maximal().len(), 15);
        assert_eq!(p.types.iter().filter(|t| t.dimension == 1).count(), 10);
        assert!(p.is_graded());
    }

    #[test]
    fn unstable_pairs() {
        assert!(enumerate_types(0, 2).is_err());
        assert!(enumerate_types(1, 0).is_err());
        assert!(enumerate_types(0, 3).unwrap().len() == 1);
    }
}
