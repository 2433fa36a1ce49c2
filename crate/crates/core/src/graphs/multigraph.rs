use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// An unbounded end attached to a vertex. Label `0` means unlabeled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leg {
    pub vertex: usize,
    pub label: u32,
}

/// Finite multigraph with legs and a vertex genus function.
///
/// Storage is edge-oriented, but the half-edge (flag) view is always
/// available: edge `i` owns half-edges `2i` (at `edges[i][0]`) and `2i + 1`
/// (at `edges[i][1]`); leg `j` is the fixed half-edge `2E + j`. Loops are
/// edges whose endpoints coincide and contribute 2 to the valence.
///
/// Legs are either all labeled with distinct positive labels or all
/// unlabeled; mixed labelings are rejected.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multigraph {
    genus: Vec<u32>,
    edges: Vec<[usize; 2]>,
    legs: Vec<Leg>,
}

impl Multigraph {
    pub fn new(num_vertices: usize, edges: &[(usize, usize)], legs: &[(usize, u32)]) -> Result<Self> {
        Self::with_genus(num_vertices, edges, legs, &vec![0; num_vertices])
    }

    pub fn with_genus(
        num_vertices: usize,
        edges: &[(usize, usize)],
        legs: &[(usize, u32)],
        genus: &[u32],
    ) -> Result<Self> {
        if genus.len() != num_vertices {
            return invalid(format!(
                "genus vector has {} entries for {num_vertices} vertices",
                genus.len()
            ));
        }
        let g = Multigraph {
            genus: genus.to_vec(),
            edges: edges.iter().map(|&(u, v)| [u, v]).collect(),
            legs: legs.iter().map(|&(vertex, label)| Leg { vertex, label }).collect(),
        };
        g.validate()?;
        Ok(g)
    }

    /// Graph without legs and with all vertex genera zero.
    pub fn from_edges(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(num_vertices, edges, &[])
    }

    fn validate(&self) -> Result<()> {
        let n = self.genus.len();
        for (i, e) in self.edges.iter().enumerate() {
            if e[0] >= n || e[1] >= n {
                return invalid(format!("edge {i} references a vertex outside 0..{n}"));
            }
        }
        for (j, l) in self.legs.iter().enumerate() {
            if l.vertex >= n {
                return invalid(format!("leg {j} references a vertex outside 0..{n}"));
            }
        }
        let labeled = self.legs.iter().filter(|l| l.label > 0).count();
        if labeled != 0 && labeled != self.legs.len() {
            return Err(Error::Unsupported(
                "partially labeled legs (label either all legs or none)".into(),
            ));
        }
        if labeled > 0 {
            let mut labels: Vec<u32> = self.legs.iter().map(|l| l.label).collect();
            labels.sort_unstable();
            if labels.windows(2).any(|w| w[0] == w[1]) {
                return invalid("leg labels must be distinct");
            }
        }
        for v in 0..n {
            if self.valence(v) == 0 && (self.genus[v] == 0 || n > 1) {
                return invalid(format!("vertex {v} has valence 0 (only a lone vertex of positive genus may)"));
            }
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.genus.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn num_half_edges(&self) -> usize {
        2 * self.edges.len() + self.legs.len()
    }

    /// Bounded edges as endpoint pairs, indexed by edge id.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|e| (e[0], e[1]))
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        (self.edges[e][0], self.edges[e][1])
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn vertex_genus(&self, v: usize) -> u32 {
        self.genus[v]
    }

    pub fn genus_vector(&self) -> &[u32] {
        &self.genus
    }

    /// Vertex carrying half-edge `h`.
    pub fn half_edge_vertex(&self, h: usize) -> usize {
        let e2 = 2 * self.edges.len();
        if h < e2 {
            self.edges[h / 2][h % 2]
        } else {
            self.legs[h - e2].vertex
        }
    }

    /// The edge involution on half-edges; legs are its fixed points.
    pub fn involution(&self, h: usize) -> usize {
        if h < 2 * self.edges.len() {
            h ^ 1
        } else {
            h
        }
    }

    pub fn is_leg(&self, h: usize) -> bool {
        h >= 2 * self.edges.len()
    }

    pub fn valence(&self, v: usize) -> usize {
        let from_edges: usize = self
            .edges
            .iter()
            .map(|e| (e[0] == v) as usize + (e[1] == v) as usize)
            .sum();
        from_edges + self.legs.iter().filter(|l| l.vertex == v).count()
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.edges[e][0] == self.edges[e][1]
    }

    pub fn has_loops(&self) -> bool {
        (0..self.edges.len()).any(|e| self.is_loop(e))
    }

    pub fn loops_at(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e[0] == v && e[1] == v).count()
    }

    /// Symmetric multiplicity matrix of non-loop edges.
    pub fn multiplicities(&self) -> Vec<Vec<u32>> {
        let n = self.num_vertices();
        let mut m = vec![vec![0u32; n]; n];
        for e in &self.edges {
            if e[0] != e[1] {
                m[e[0]][e[1]] += 1;
                m[e[1]][e[0]] += 1;
            }
        }
        m
    }

    pub fn has_parallel_edges(&self) -> bool {
        self.multiplicities().iter().flatten().any(|&k| k > 1)
    }

    pub fn legs_labeled(&self) -> bool {
        self.legs.first().is_some_and(|l| l.label > 0)
    }

    pub fn components(&self) -> usize {
        let n = self.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut comps = n;
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.num_vertices() > 0 && self.components() == 1
    }

    /// `h_1` of the underlying graph: `#edges - #vertices + #components`.
    pub fn first_betti(&self) -> usize {
        self.edges.len() + self.components() - self.num_vertices()
    }

    /// `h_1(Γ) + Σ_v g(v)`.
    pub fn total_genus(&self) -> usize {
        self.first_betti() + self.genus.iter().map(|&g| g as usize).sum::<usize>()
    }

    /// Contracts a non-loop edge, merging its endpoints.
    ///
    /// The merged vertex takes the smaller index and the sum of both genera;
    /// vertices above the removed one shift down by one. Surviving edges and
    /// legs keep their relative order, so edge ids after `e` drop by one.
    pub fn contract_edge(&self, e: usize) -> Result<Multigraph> {
        if e >= self.edges.len() {
            return invalid(format!("edge {e} does not exist"));
        }
        if self.is_loop(e) {
            return Err(Error::LoopContraction(e));
        }
        let [a, b] = self.edges[e];
        let (keep, gone) = (a.min(b), a.max(b));
        let remap = |v: usize| {
            let v = if v == gone { keep } else { v };
            if v > gone {
                v - 1
            } else {
                v
            }
        };
        let mut genus = self.genus.clone();
        genus[keep] += genus[gone];
        genus.remove(gone);
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, x)| [remap(x[0]), remap(x[1])])
            .collect();
        let legs = self
            .legs
            .iter()
            .map(|l| Leg { vertex: remap(l.vertex), label: l.label })
            .collect();
        Ok(Multigraph { genus, edges, legs })
    }

    /// Removes a loop and raises the genus of its vertex by one.
    pub fn contract_loop(&self, e: usize) -> Result<Multigraph> {
        if e >= self.edges.len() || !self.is_loop(e) {
            return invalid(format!("edge {e} is not a loop"));
        }
        let mut g = self.clone();
        let v = g.edges[e][0];
        g.edges.remove(e);
        g.genus[v] += 1;
        Ok(g)
    }

    /// Relabels vertices by `vertex_map` (old → new) and reorders edges so
    /// that new edge `i` is old edge `edge_order[i]`.
    pub fn relabeled(&self, vertex_map: &[usize], edge_order: &[usize]) -> Result<Multigraph> {
        let n = self.num_vertices();
        if !is_permutation(vertex_map, n) || !is_permutation(edge_order, self.edges.len()) {
            return invalid("relabeling is not a permutation");
        }
        let mut genus = vec![0; n];
        for v in 0..n {
            genus[vertex_map[v]] = self.genus[v];
        }
        let edges = edge_order
            .iter()
            .map(|&e| [vertex_map[self.edges[e][0]], vertex_map[self.edges[e][1]]])
            .collect();
        let legs = self
            .legs
            .iter()
            .map(|l| Leg { vertex: vertex_map[l.vertex], label: l.label })
            .collect();
        Ok(Multigraph { genus, edges, legs })
    }

    /// Same graph with the two half-edges of edge `e` swapped.
    pub fn flipped(&self, e: usize) -> Multigraph {
        let mut g = self.clone();
        g.edges[e].swap(0, 1);
        g
    }

    pub fn with_legs(&self, legs: Vec<Leg>) -> Result<Multigraph> {
        let g = Multigraph { genus: self.genus.clone(), edges: self.edges.clone(), legs };
        g.validate()?;
        Ok(g)
    }

    /// Line-oriented text form; see [`Multigraph::from_str`].
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "V {} E {} L {}\n",
            self.num_vertices(),
            self.edges.len(),
            self.legs.len()
        );
        for e in &self.edges {
            out.push_str(&format!("e {} {}\n", e[0], e[1]));
        }
        for l in &self.legs {
            out.push_str(&format!("l {} {}\n", l.vertex, l.label));
        }
        for (v, &g) in self.genus.iter().enumerate() {
            if g > 0 {
                out.push_str(&format!("g {v} {g}\n"));
            }
        }
        out
    }
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parses the text form:
///
/// ```text
/// V <n> E <m> L <k>
/// e <v1> <v2>        (m lines)
/// l <v> <label>      (k lines, label 0 = unlabeled)
/// g <v> <genus>      (one line per positive-genus vertex)
/// ```
///
/// Vertices are 0-based. Serializing a parsed graph reproduces the input
/// byte for byte when the input is itself in serialized form.
impl FromStr for Multigraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let mut lines = s.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (ln, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 6 || h[0] != "V" || h[2] != "E" || h[4] != "L" {
            return Err(perr(ln, "expected header `V <n> E <m> L <k>`"));
        }
        let num = |tok: &str, line: usize| -> Result<usize> {
            tok.parse::<usize>().map_err(|_| perr(line, "expected a nonnegative integer"))
        };
        let (n, m, k) = (num(h[1], ln)?, num(h[3], ln)?, num(h[5], ln)?);
        let mut edges = Vec::with_capacity(m);
        let mut legs = Vec::with_capacity(k);
        let mut genus = vec![0u32; n];
        for (ln, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(perr(ln, "expected `<tag> <a> <b>`"));
            }
            let (a, b) = (num(t[1], ln)?, num(t[2], ln)?);
            match t[0] {
                "e" if legs.is_empty() && genus.iter().all(|&g| g == 0) => edges.push((a, b)),
                "l" if genus.iter().all(|&g| g == 0) => legs.push((a, b as u32)),
                "g" => {
                    if a >= n || b == 0 {
                        return Err(perr(ln, "genus line needs a valid vertex and positive genus"));
                    }
                    genus[a] = b as u32;
                }
                "e" | "l" => return Err(perr(ln, "lines must be ordered e, l, g")),
                _ => return Err(perr(ln, "unknown tag")),
            }
        }
        if edges.len() != m || legs.len() != k {
            return Err(perr(0, "edge or leg count does not match the header"));
        }
        Multigraph::with_genus(n, &edges, &legs, &genus)
    }
}
