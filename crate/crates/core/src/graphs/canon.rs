//! Canonical labeling and automorphisms by individualization-refinement.
//!
//! Every leaf of the search tree is scanned (no automorphism pruning), so the
//! leaves that reach the minimal encoding are exactly the canonical ordering
//! composed with every vertex automorphism. Target instances have at most a
//! dozen vertices.

use super::multigraph::{Leg, Multigraph};

/// Result of [`canonical_form`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// Equal for two graphs iff they are isomorphic (respecting leg labels
    /// and vertex genus).
    pub encoding: Vec<u8>,
    /// Old vertex index → canonical vertex index.
    pub vertex_map: Vec<usize>,
    /// Old half-edge index → canonical half-edge index.
    pub half_edge_map: Vec<usize>,
    /// Canonical edge `i` is old edge `edge_order[i]`.
    pub edge_order: Vec<usize>,
    /// The canonical representative.
    pub graph: Multigraph,
}

struct Search<'a> {
    g: &'a Multigraph,
    mult: Vec<Vec<u32>>,
    vertex_invariant: Vec<Vec<u32>>,
    best: Option<Vec<u32>>,
    best_orders: Vec<Vec<usize>>,
}

fn vertex_invariants(g: &Multigraph) -> Vec<Vec<u32>> {
    (0..g.num_vertices())
        .map(|v| {
            let mut labels: Vec<u32> =
                g.legs().iter().filter(|l| l.vertex == v).map(|l| l.label).collect();
            labels.sort_unstable();
            let mut inv = vec![
                g.vertex_genus(v),
                g.loops_at(v) as u32,
                g.valence(v) as u32,
                labels.len() as u32,
            ];
            inv.extend(labels);
            inv
        })
        .collect()
}

fn rank<T: Ord + Clone>(keys: &[T]) -> (Vec<u32>, usize) {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    let ranks = keys.iter().map(|k| sorted.binary_search(k).unwrap() as u32).collect();
    (ranks, sorted.len())
}

impl<'a> Search<'a> {
    fn new(g: &'a Multigraph) -> Self {
        let n = g.num_vertices();
        let mut mult = vec![vec![0u32; n]; n];
        for (u, v) in g.edges() {
            if u != v {
                mult[u][v] += 1;
                mult[v][u] += 1;
            }
        }
        Search { g, mult, vertex_invariant: vertex_invariants(g), best: None, best_orders: vec![] }
    }

    fn refine(&self, colors: &mut Vec<u32>) {
        let n = colors.len();
        let mut cells = {
            let mut c = colors.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        loop {
            let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..n)
                .map(|v| {
                    let mut nb: Vec<(u32, u32)> = (0..n)
                        .filter(|&u| u != v && self.mult[v][u] > 0)
                        .map(|u| (colors[u], self.mult[v][u]))
                        .collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let (next, count) = rank(&sigs);
            *colors = next;
            if count == cells {
                return;
            }
            cells = count;
        }
    }

    fn encode(&self, order: &[usize]) -> Vec<u32> {
        let g = self.g;
        let n = order.len();
        let mut enc = vec![n as u32, g.num_edges() as u32, g.num_legs() as u32];
        for &v in order {
            let inv = &self.vertex_invariant[v];
            // genus, loops, leg count, leg labels (valence follows from the rest)
            enc.push(inv[0]);
            enc.push(inv[1]);
            enc.extend_from_slice(&inv[3..]);
        }
        for i in 0..n {
            for j in i + 1..n {
                enc.push(self.mult[order[i]][order[j]]);
            }
        }
        enc
    }

    fn run(&mut self, mut colors: Vec<u32>) {
        self.refine(&mut colors);
        let n = colors.len();
        let mut counts = vec![0usize; n];
        for &c in &colors {
            counts[c as usize] += 1;
        }
        let target = (0..n).find(|&c| counts[c] > 1);
        match target {
            None => {
                let mut order = vec![0; n];
                for (v, &c) in colors.iter().enumerate() {
                    order[c as usize] = v;
                }
                let enc = self.encode(&order);
                match &self.best {
                    Some(b) if enc > *b => {}
                    Some(b) if enc == *b => self.best_orders.push(order),
                    _ => {
                        self.best = Some(enc);
                        self.best_orders = vec![order];
                    }
                }
            }
            Some(cell) => {
                let members: Vec<usize> = (0..n).filter(|&v| colors[v] as usize == cell).collect();
                for v in members {
                    let next: Vec<u32> = colors
                        .iter()
                        .enumerate()
                        .map(|(u, &c)| 2 * c + (c as usize == cell && u != v) as u32)
                        .collect();
                    self.run(next);
                }
            }
        }
    }
}

fn search(g: &Multigraph) -> (Vec<u32>, Vec<Vec<usize>>) {
    let mut s = Search::new(g);
    if g.num_vertices() == 0 {
        return (s.encode(&[]), vec![vec![]]);
    }
    let (colors, _) = rank(&s.vertex_invariant);
    s.run(colors);
    (s.best.unwrap(), s.best_orders)
}

fn to_bytes(enc: &[u32]) -> Vec<u8> {
    enc.iter().flat_map(|x| x.to_be_bytes()).collect()
}

pub fn canonical_form(g: &Multigraph) -> CanonicalForm {
    let (enc, orders) = search(g);
    let order = &orders[0];
    let n = g.num_vertices();
    let mut vertex_map = vec![0; n];
    for (pos, &v) in order.iter().enumerate() {
        vertex_map[v] = pos;
    }
    let keyed: Vec<(usize, usize)> = g
        .edges()
        .map(|(u, v)| {
            let (a, b) = (vertex_map[u], vertex_map[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    let mut edge_order: Vec<usize> = (0..g.num_edges()).collect();
    edge_order.sort_by_key(|&e| (keyed[e], e));
    let mut leg_order: Vec<usize> = (0..g.num_legs()).collect();
    leg_order.sort_by_key(|&j| (vertex_map[g.legs()[j].vertex], g.legs()[j].label, j));

    let e2 = 2 * g.num_edges();
    let mut half_edge_map = vec![0; g.num_half_edges()];
    for (pos, &e) in edge_order.iter().enumerate() {
        let (u, v) = g.edge(e);
        if vertex_map[u] <= vertex_map[v] {
            half_edge_map[2 * e] = 2 * pos;
            half_edge_map[2 * e + 1] = 2 * pos + 1;
        } else {
            half_edge_map[2 * e] = 2 * pos + 1;
            half_edge_map[2 * e + 1] = 2 * pos;
        }
    }
    for (pos, &j) in leg_order.iter().enumerate() {
        half_edge_map[e2 + j] = e2 + pos;
    }

    let mut genus = vec![0; n];
    for v in 0..n {
        genus[vertex_map[v]] = g.vertex_genus(v);
    }
    let edges: Vec<(usize, usize)> = edge_order.iter().map(|&e| keyed[e]).collect();
    let legs: Vec<(usize, u32)> = leg_order
        .iter()
        .map(|&j| {
            let Leg { vertex, label } = g.legs()[j];
            (vertex_map[vertex], label)
        })
        .collect();
    let graph = Multigraph::with_genus(n, &edges, &legs, &genus)
        .expect("relabeling preserves validity");
    CanonicalForm { encoding: to_bytes(&enc), vertex_map, half_edge_map, edge_order, graph }
}

/// Canonical encoding only.
pub fn canonical_encoding(g: &Multigraph) -> Vec<u8> {
    to_bytes(&search(g).0)
}

pub fn is_isomorphic(a: &Multigraph, b: &Multigraph) -> bool {
    canonical_encoding(a) == canonical_encoding(b)
}

/// Vertex permutations (as old → image maps) preserving the multiplicity
/// matrix, loops, genus and leg labels.
pub fn vertex_automorphisms(g: &Multigraph) -> Vec<Vec<usize>> {
    let (_, orders) = search(g);
    let base = &orders[0];
    orders
        .iter()
        .map(|o| {
            // o[pos] is the vertex that plays the role of base[pos]
            let mut p = vec![0; base.len()];
            for pos in 0..base.len() {
                p[base[pos]] = o[pos];
            }
            p
        })
        .collect()
}

/// Order of the automorphism group acting on vertices and half-edges.
///
/// Each vertex automorphism lifts in `Π m_uv! · Π_v (ℓ_v! 2^ℓ_v) · Π_v k_v!`
/// ways (parallel classes, loops that can be permuted and flipped, and
/// interchangeable unlabeled legs).
pub fn automorphism_group_order(g: &Multigraph) -> u128 {
    let fact = crate::rational::factorial;
    let n = g.num_vertices();
    let m = g.multiplicities();
    let mut lift: u128 = 1;
    for u in 0..n {
        for v in u + 1..n {
            lift *= fact(m[u][v] as usize);
        }
        let loops = g.loops_at(u);
        lift *= fact(loops) << loops;
        if !g.legs_labeled() {
            lift *= fact(g.legs().iter().filter(|l| l.vertex == u).count());
        }
    }
    vertex_automorphisms(g).len() as u128 * lift
}

/// Counts bijections of vertices and half-edges that preserve attachment,
/// the involution, and the supplied colors, by plain backtracking.
///
/// Leg labels are not consulted; fold them into `half_edge_colors` if they
/// should be respected.
pub fn count_colored_automorphisms(
    g: &Multigraph,
    vertex_colors: &[u64],
    half_edge_colors: &[u64],
) -> u128 {
    struct Bt<'a> {
        g: &'a Multigraph,
        vc: &'a [u64],
        hc: &'a [u64],
        himg: Vec<Option<usize>>,
        hused: Vec<bool>,
        vimg: Vec<Option<usize>>,
        vused: Vec<bool>,
        count: u128,
    }
    impl Bt<'_> {
        fn go(&mut self, h: usize) {
            let g = self.g;
            if h == g.num_half_edges() {
                self.count += 1;
                return;
            }
            let v = g.half_edge_vertex(h);
            let partner = g.involution(h);
            for t in 0..g.num_half_edges() {
                if self.hused[t] || self.hc[t] != self.hc[h] || g.is_leg(t) != g.is_leg(h) {
                    continue;
                }
                if partner < h && self.himg[partner].map(|p| g.involution(p)) != Some(t) {
                    continue;
                }
                let w = g.half_edge_vertex(t);
                let fresh = match self.vimg[v] {
                    Some(x) if x != w => continue,
                    Some(_) => false,
                    None => {
                        if self.vused[w] || self.vc[v] != self.vc[w] {
                            continue;
                        }
                        true
                    }
                };
                if fresh {
                    self.vimg[v] = Some(w);
                    self.vused[w] = true;
                }
                self.himg[h] = Some(t);
                self.hused[t] = true;
                self.go(h + 1);
                self.hused[t] = false;
                self.himg[h] = None;
                if fresh {
                    self.vimg[v] = None;
                    self.vused[w] = false;
                }
            }
        }
    }
    let mut bt = Bt {
        g,
        vc: vertex_colors,
        hc: half_edge_colors,
        himg: vec![None; g.num_half_edges()],
        hused: vec![false; g.num_half_edges()],
        vimg: vec![None; g.num_vertices()],
        vused: vec![false; g.num_vertices()],
        count: 0,
    };
    bt.go(0);
    bt.count
}
