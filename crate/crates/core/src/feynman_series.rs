//! Truncated Laurent series and the propagator expansion of Feynman
//! integrals on the elliptic curve.
//!
//! A series lives in vertex variables `x_1..x_n` (Laurent, exponents bounded
//! in absolute value) and edge variables `q_1..q_m` (polynomial, total
//! degree bounded). The refined Feynman integral of a graph with a vertex
//! order is the constant term in all `x` of the product of one propagator
//! factor per edge, each expanded according to the order.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::elliptic_covers::{all_orders, enumerate_feynman_graphs, simple_hurwitz_tropical, FeynmanGraph};
use crate::error::{invalid, Error, Result};
use crate::par;
use crate::rational::Rational;
use crate::sym_oracle::SizeGuard;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    nx: usize,
    nq: usize,
    x_bound: i32,
    q_bound: u32,
    /// Exponents: `x_1..x_n` then `q_1..q_m`.
    terms: HashMap<Vec<i32>, Rational>,
}

impl TruncatedSeries {
    pub fn zero(nx: usize, nq: usize, x_bound: i32, q_bound: u32) -> Self {
        TruncatedSeries { nx, nq, x_bound, q_bound, terms: HashMap::new() }
    }

    pub fn one(nx: usize, nq: usize, x_bound: i32, q_bound: u32) -> Self {
        let mut s = Self::zero(nx, nq, x_bound, q_bound);
        s.add_term(vec![0; nx + nq], Rational::one());
        s
    }

    pub fn num_x(&self) -> usize {
        self.nx
    }

    pub fn num_q(&self) -> usize {
        self.nq
    }

    pub fn x_bound(&self) -> i32 {
        self.x_bound
    }

    pub fn q_bound(&self) -> u32 {
        self.q_bound
    }

    fn in_bounds(&self, e: &[i32]) -> bool {
        e[..self.nx].iter().all(|x| x.abs() <= self.x_bound)
            && e[self.nx..].iter().all(|&q| q >= 0)
            && e[self.nx..].iter().sum::<i32>() <= self.q_bound as i32
    }

    /// Adds `c · x^e q^f`; terms outside the bounds are dropped.
    pub fn add_term(&mut self, exps: Vec<i32>, c: Rational) {
        assert_eq!(exps.len(), self.nx + self.nq, "exponent vector length");
        if c.is_zero() || !self.in_bounds(&exps) {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn coefficient(&self, exps: &[i32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms sorted by exponent vector.
    pub fn sorted_terms(&self) -> Vec<(Vec<i32>, Rational)> {
        let mut t: Vec<(Vec<i32>, Rational)> = self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        t.sort();
        t
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if (self.nx, self.nq, self.x_bound, self.q_bound) != (other.nx, other.nq, other.x_bound, other.q_bound) {
            return invalid("series have different variables or bounds");
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = Self::zero(self.nx, self.nq, self.x_bound, self.q_bound);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.nx, self.nq, self.x_bound, self.q_bound);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    /// Keeps the terms in which every listed `x` variable has exponent 0.
    pub fn constant_term_in(&self, vars: &[usize]) -> Self {
        let mut out = self.clone();
        out.terms.retain(|e, _| vars.iter().all(|&v| e[v] == 0));
        out
    }

    /// Drops the `x` variables; every remaining term must be constant in them.
    pub fn without_x(&self) -> Result<Self> {
        let mut out = Self::zero(0, self.nq, self.x_bound, self.q_bound);
        for (e, c) in &self.terms {
            if e[..self.nx].iter().any(|&x| x != 0) {
                return invalid("series still depends on x");
            }
            out.add_term(e[self.nx..].to_vec(), c.clone());
        }
        Ok(out)
    }

    /// Sets every `q_k` to a single `q`.
    pub fn substitute_single_q(&self) -> Self {
        let mut out = Self::zero(self.nx, 1, self.x_bound, self.q_bound);
        for (e, c) in &self.terms {
            let mut f = e[..self.nx].to_vec();
            f.push(e[self.nx..].iter().sum());
            out.add_term(f, c.clone());
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (k, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if k < self.nx {
                    write!(f, "*x{}^{x}", k + 1)?;
                } else {
                    write!(f, "*q{}^{x}", k - self.nx + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// Sum of the divisors of `n`.
pub fn sigma(n: u64) -> Result<u64> {
    if n == 0 {
        return invalid("σ is defined for positive integers");
    }
    let mut s = 0;
    let mut m = 1;
    while m * m <= n {
        if n % m == 0 {
            s += m;
            if m * m != n {
                s += n / m;
            }
        }
        m += 1;
    }
    Ok(s)
}

/// `E_2(q) = 1 − 24 Σ σ(d) q^d` up to `q^{q_bound}`.
pub fn eisenstein_e2(q_bound: u32) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(0, 1, 0, q_bound);
    for d in 1..=q_bound {
        let c = -24 * sigma(d as u64).expect("d ≥ 1") as i64;
        s.add_term(vec![d as i32], Rational::from_integer(c.into()));
    }
    s
}

/// Truncation bounds for degree-`d` computations: weights never exceed
/// `d`, so a vertex exponent stays within `3 · 2d`, and the total
/// `q`-degree needed is `2d`.
pub fn bounds_for_degree(d: u32) -> (i32, u32) {
    (6 * d as i32, 2 * d)
}

/// Expansion of the propagator of the edge `q_var` between `x_{k1}` and
/// `x_{k2}`, with `lower` the endpoint that comes first in the order:
/// `Σ_{w ≤ d} w (x_lower/x_upper)^{2w}` plus
/// `Σ_{a ≤ d} Σ_{w | a} w ((x_{k1}/x_{k2})^{2w} + (x_{k2}/x_{k1})^{2w}) q^{2a}`.
pub fn propagator_factor(
    nx: usize,
    nq: usize,
    k1: usize,
    k2: usize,
    lower: usize,
    q_var: usize,
    d: u32,
) -> Result<TruncatedSeries> {
    if k1 == k2 {
        return Err(Error::Unsupported("propagator of a loop edge".into()));
    }
    if lower != k1 && lower != k2 {
        return invalid("the lower vertex must be an endpoint of the edge");
    }
    if k1.max(k2) >= nx || q_var >= nq {
        return invalid("variable index out of range");
    }
    let (x_bound, q_bound) = bounds_for_degree(d);
    let mut s = TruncatedSeries::zero(nx, nq, x_bound, q_bound);
    let upper = if lower == k1 { k2 } else { k1 };
    let mono = |num: usize, den: usize, w: u32, a: u32| {
        let mut e = vec![0; nx + nq];
        e[num] = 2 * w as i32;
        e[den] = -2 * w as i32;
        e[nx + q_var] = 2 * a as i32;
        e
    };
    for w in 1..=d {
        s.add_term(mono(lower, upper, w, 0), Rational::from_integer(w.into()));
    }
    for a in 1..=d {
        for w in (1..=a).filter(|w| a % w == 0) {
            s.add_term(mono(k1, k2, w, a), Rational::from_integer(w.into()));
            s.add_term(mono(k2, k1, w, a), Rational::from_integer(w.into()));
        }
    }
    Ok(s)
}

/// `I_{Γ,Ω}(q_1, …, q_{3g-3})` up to total `q`-degree `2d`, as a series in
/// the edge variables only.
pub fn refined_integral(shape: &FeynmanGraph, order: &[usize], d: u32) -> Result<TruncatedSeries> {
    let g = shape.graph();
    let (nx, nq) = (g.num_vertices(), g.num_edges());
    if order.len() != nx {
        return invalid("order has the wrong length");
    }
    let (x_bound, q_bound) = bounds_for_degree(d);
    let mut remaining = vec![3usize; nx];
    let mut acc = TruncatedSeries::one(nx, nq, x_bound, q_bound);
    for (k, (u, v)) in g.edges().enumerate() {
        let lower = if order[u] < order[v] { u } else { v };
        acc = acc.mul(&propagator_factor(nx, nq, u, v, lower, k, d)?)?;
        remaining[u] -= 1;
        remaining[v] -= 1;
        // once all factors at a vertex are in, only its constant term matters
        let done: Vec<usize> = [u, v].into_iter().filter(|&x| remaining[x] == 0).collect();
        acc = acc.constant_term_in(&done);
    }
    acc.without_x()
}

/// `I_{Γ,Ω}(q)`: the refined integral with every `q_k` set to `q`.
pub fn coarse_integral(shape: &FeynmanGraph, order: &[usize], d: u32) -> Result<TruncatedSeries> {
    Ok(refined_integral(shape, order, d)?.substitute_single_q())
}

/// `Σ_Γ 1/|Aut Γ| Σ_Ω I_{Γ,Ω}(q)` up to `q^{2d}`.
pub fn graph_sum(g: u32, d: u32) -> Result<TruncatedSeries> {
    let graphs = enumerate_feynman_graphs(g)?;
    let pairs: Vec<(usize, Vec<usize>)> = (0..graphs.len())
        .flat_map(|i| all_orders(graphs[i].graph().num_vertices()).into_iter().map(move |o| (i, o)))
        .collect();
    let parts = par::map(&pairs, |(i, order)| coarse_integral(&graphs[*i], order, d));
    let (_, q_bound) = bounds_for_degree(d);
    let mut total = TruncatedSeries::zero(0, 1, 0, q_bound);
    let autos: Vec<Rational> =
        graphs.iter().map(|g| Rational::from_integer(BigInt::from(g.automorphisms()))).collect();
    for ((i, _), part) in pairs.iter().zip(parts) {
        let part = part?;
        for (e, c) in part.sorted_terms() {
            total.add_term(e, c / &autos[*i]);
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorRow {
    pub degree: u32,
    pub tropical: Rational,
    pub feynman: Rational,
}

impl MirrorRow {
    pub fn agrees(&self) -> bool {
        self.tropical == self.feynman
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorReport {
    pub genus: u32,
    pub rows: Vec<MirrorRow>,
    /// Coefficients of `q^0` and of odd powers of `q` in the graph sum;
    /// all must vanish.
    pub stray_coefficients: Vec<(u32, Rational)>,
}

impl MirrorReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(MirrorRow::agrees) && self.stray_coefficients.is_empty()
    }
}

/// Compares `Σ N^trop_{d,g} q^{2d}` with the graph sum of coarse Feynman
/// integrals for `d = 1..=d_max`.
pub fn mirror_check(g: u32, d_max: u32, guard: SizeGuard) -> Result<MirrorReport> {
    if g < 2 || d_max == 0 {
        return invalid("mirror check needs genus ≥ 2 and d_max ≥ 1");
    }
    if guard == SizeGuard::Enforce && (g > 3 || d_max > 6) {
        return Err(Error::SizeGuard(format!("mirror check at g = {g}, d_max = {d_max}")));
    }
    let sum = graph_sum(g, d_max)?;
    let degrees: Vec<u32> = (1..=d_max).collect();
    let tropical = par::map(&degrees, |&d| simple_hurwitz_tropical(d, g));
    let mut rows = vec![];
    for (d, trop) in degrees.into_iter().zip(tropical) {
        rows.push(MirrorRow { degree: d, tropical: trop?, feynman: sum.coefficient(&[2 * d as i32]) });
    }
    let stray_coefficients = sum
        .sorted_terms()
        .into_iter()
        .filter(|(e, _)| e[0] == 0 || e[0] % 2 != 0)
        .map(|(e, c)| (e[0] as u32, c))
        .collect();
    Ok(MirrorReport { genus: g, rows, stray_coefficients })
}
