//! Chamber structure of genus-0 double Hurwitz numbers.
//!
//! On the hyperplane `Σμ = Σν` the walls `Σ_I μ_i − Σ_J ν_j = 0` cut the
//! positive orthant into chambers, and on each chamber the labeled count is
//! a polynomial. The polynomial is produced symbolically: every trivalent
//! tree with `ℓ(μ) + ℓ(ν)` labeled leaves has edge weights that are linear
//! forms, the chamber fixes their signs and hence an orientation of the
//! tree, and each tree contributes the product of its edge forms times the
//! number of ways to put its vertices on distinct levels respecting the
//! orientation. An independent route recovers the same polynomial by exact
//! interpolation of enumerated counts.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};
use crate::graphs::{enumerate_graphs, Multigraph};
use crate::line_covers::double_hurwitz_tropical_labeled;
use crate::linalg;
use crate::par;
use crate::rational::Rational;

/// `Σ a_i μ_i + Σ b_j ν_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    pub mu: Vec<i64>,
    pub nu: Vec<i64>,
}

impl LinearForm {
    pub fn zero(lmu: usize, lnu: usize) -> Self {
        LinearForm { mu: vec![0; lmu], nu: vec![0; lnu] }
    }

    pub fn eval(&self, mu: &[u32], nu: &[u32]) -> i64 {
        let a: i64 = self.mu.iter().zip(mu).map(|(c, &x)| c * x as i64).sum();
        let b: i64 = self.nu.iter().zip(nu).map(|(c, &x)| c * x as i64).sum();
        a + b
    }

    pub fn is_zero(&self) -> bool {
        self.mu.iter().chain(&self.nu).all(|&c| c == 0)
    }

    pub fn negated(&self) -> Self {
        LinearForm {
            mu: self.mu.iter().map(|c| -c).collect(),
            nu: self.nu.iter().map(|c| -c).collect(),
        }
    }

    /// Eliminates the last `ν` variable using `Σμ = Σν`.
    pub fn reduced(&self) -> Self {
        let mut out = self.clone();
        let Some(c) = out.nu.pop() else {
            return out;
        };
        for a in out.mu.iter_mut() {
            *a += c;
        }
        for b in out.nu.iter_mut() {
            *b -= c;
        }
        out.nu.push(0);
        out
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let terms = self
            .mu
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, format!("mu{}", i + 1)))
            .chain(self.nu.iter().enumerate().map(|(j, &c)| (c, format!("nu{}", j + 1))));
        for (c, name) in terms {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let sep = if first { "" } else { " " };
            let space = if first || sign.is_empty() { "" } else { " " };
            let mag = if c.abs() == 1 { String::new() } else { format!("{}*", c.abs()) };
            write!(f, "{sep}{sign}{space}{mag}{name}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Polynomial in `μ_1..μ_ℓ, ν_1..ν_ℓ'` modulo `Σμ = Σν`, stored with the
/// last `ν` eliminated so that equality is structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    lmu: usize,
    lnu: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(lmu: usize, lnu: usize) -> Self {
        Polynomial { lmu, lnu, terms: BTreeMap::new() }
    }

    pub fn constant(lmu: usize, lnu: usize, c: Rational) -> Self {
        let mut p = Self::zero(lmu, lnu);
        p.add_term(vec![0; lmu + lnu], c);
        p
    }

    pub fn from_form(form: &LinearForm) -> Self {
        let (lmu, lnu) = (form.mu.len(), form.nu.len());
        let r = form.reduced();
        let mut p = Self::zero(lmu, lnu);
        for (k, &c) in r.mu.iter().chain(&r.nu).enumerate() {
            let mut e = vec![0; lmu + lnu];
            e[k] = 1;
            p.add_term(e, Rational::from_integer(c.into()));
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Self::zero(self.lmu, self.lnu);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        let mut out = Self::zero(self.lmu, self.lnu);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn eval(&self, mu: &[u32], nu: &[u32]) -> Rational {
        let vals: Vec<Rational> =
            mu.iter().chain(nu).map(|&x| Rational::from_integer(x.into())).collect();
        let mut sum = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in vals.iter().zip(e) {
                for _ in 0..k {
                    t *= v;
                }
            }
            sum += t;
        }
        sum
    }

    /// Terms in canonical order: descending total degree, then
    /// lexicographically descending exponents (`μ` before `ν`).
    pub fn terms(&self) -> Vec<(Vec<u32>, Rational)> {
        let mut t: Vec<(Vec<u32>, Rational)> = self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        t.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        t
    }

    fn var_name(&self, k: usize) -> String {
        if k < self.lmu {
            format!("mu{}", k + 1)
        } else {
            format!("nu{}", k - self.lmu + 1)
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { self.var_name(v) } else { format!("{}^{k}", self.var_name(v)) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Walls for `ℓ(μ) = lmu`, `ℓ(ν) = lnu`: one form `Σ_I μ − Σ_J ν` per pair of
/// proper nonempty index sets, identified with its complement (the
/// representative has `1 ∈ I`). Other index sets give forms of constant
/// sign on the positive orthant.
pub fn walls(lmu: usize, lnu: usize) -> Vec<LinearForm> {
    let mut out = vec![];
    if lmu < 2 || lnu < 2 {
        return out;
    }
    for i_mask in 1u32..(1 << lmu) - 1 {
        if i_mask & 1 == 0 {
            continue;
        }
        for j_mask in 1u32..(1 << lnu) - 1 {
            let mut form = LinearForm::zero(lmu, lnu);
            for i in 0..lmu {
                form.mu[i] = ((i_mask >> i) & 1) as i64;
            }
            for j in 0..lnu {
                form.nu[j] = -(((j_mask >> j) & 1) as i64);
            }
            out.push(form);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    /// Sign of each wall (in the order of [`walls`]) on the chamber.
    pub signs: Vec<i8>,
    pub witness_mu: Vec<u32>,
    pub witness_nu: Vec<u32>,
    /// `None` when `ℓ(μ) + ℓ(ν) < 3` (covers without branch points).
    pub polynomial: Option<Polynomial>,
}

/// Lattice points of the box `[1, bound]^(ℓμ+ℓν)` on `Σμ = Σν`, in
/// lexicographic order.
pub fn lattice_points(lmu: usize, lnu: usize, bound: u32) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut out = vec![];
    let n = lmu + lnu - 1;
    let mut cur = vec![1u32; n];
    loop {
        let mu = &cur[..lmu];
        let rest = &cur[lmu..];
        let last = mu.iter().sum::<u32>() as i64 - rest.iter().sum::<u32>() as i64;
        if last >= 1 && last <= bound as i64 {
            let mut nu = rest.to_vec();
            nu.push(last as u32);
            out.push((mu.to_vec(), nu));
        }
        let Some(pos) = (0..n).rev().find(|&k| cur[k] < bound) else {
            return out;
        };
        cur[pos] += 1;
        for x in cur[pos + 1..].iter_mut() {
            *x = 1;
        }
    }
}

/// Sign vector of a point against the walls, or `None` on a wall.
pub fn sign_vector(walls: &[LinearForm], mu: &[u32], nu: &[u32]) -> Option<Vec<i8>> {
    walls
        .iter()
        .map(|w| match w.eval(mu, nu).signum() {
            0 => None,
            s => Some(s as i8),
        })
        .collect()
}

/// Default search box: large enough for every chamber at the lengths
/// handled here.
pub fn default_bound(lmu: usize, lnu: usize) -> u32 {
    2 * lmu.max(lnu) as u32 + 2
}

/// All chambers whose sign vector is realized by a lattice point of the
/// box, each with its first such point as witness. Sorted by sign vector,
/// `+` before `−`.
pub fn chamber_decomposition(lmu: usize, lnu: usize, bound: u32) -> Result<Vec<Chamber>> {
    if lmu == 0 || lnu == 0 {
        return invalid("lengths must be positive");
    }
    if bound == 0 {
        return invalid("bound must be positive");
    }
    let ws = walls(lmu, lnu);
    let mut found: BTreeMap<Vec<i8>, (Vec<u32>, Vec<u32>)> = BTreeMap::new();
    for (mu, nu) in lattice_points(lmu, lnu, bound) {
        if let Some(signs) = sign_vector(&ws, &mu, &nu) {
            found.entry(signs).or_insert((mu, nu));
        }
    }
    let mut entries: Vec<(Vec<i8>, (Vec<u32>, Vec<u32>))> = found.into_iter().collect();
    entries.sort_by(|a, b| b.0.cmp(&a.0));
    let chambers = par::map(&entries, |(signs, (mu, nu))| {
        let polynomial = if lmu + lnu >= 3 { Some(polynomial_at(mu, nu)?) } else { None };
        Ok(Chamber { signs: signs.clone(), witness_mu: mu.clone(), witness_nu: nu.clone(), polynomial })
    });
    chambers.into_iter().collect()
}

/// Trivalent trees with leaves `1..=ℓμ` (the `μ` ends) and
/// `ℓμ+1..=ℓμ+ℓν` (the `ν` ends).
fn leaf_trees(lmu: usize, lnu: usize) -> Result<Vec<Multigraph>> {
    let n = lmu + lnu;
    let s = n - 2;
    enumerate_graphs(s, &vec![3; s], n, false, false)
}

/// Flow form across every edge, seen from the first endpoint's side.
fn edge_forms(tree: &Multigraph, lmu: usize, lnu: usize) -> Vec<LinearForm> {
    let n = tree.num_vertices();
    (0..tree.num_edges())
        .map(|e| {
            let (a, _) = tree.edge(e);
            let mut side = vec![false; n];
            side[a] = true;
            let mut stack = vec![a];
            while let Some(v) = stack.pop() {
                for (f, (x, y)) in tree.edges().enumerate() {
                    if f == e {
                        continue;
                    }
                    for (p, q) in [(x, y), (y, x)] {
                        if p == v && !side[q] {
                            side[q] = true;
                            stack.push(q);
                        }
                    }
                }
            }
            let mut form = LinearForm::zero(lmu, lnu);
            for leg in tree.legs() {
                if side[leg.vertex] {
                    let k = leg.label as usize - 1;
                    if k < lmu {
                        form.mu[k] += 1;
                    } else {
                        form.nu[k - lmu] -= 1;
                    }
                }
            }
            form
        })
        .collect()
}

/// Number of orderings of `0..n` in which `a` precedes `b` for every pair.
fn linear_extensions(n: usize, arcs: &[(usize, usize)]) -> u128 {
    let mut preds = vec![0u32; n];
    for &(a, b) in arcs {
        preds[b] |= 1 << a;
    }
    let mut ways = vec![0u128; 1 << n];
    ways[0] = 1;
    for mask in 0..(1usize << n) {
        if ways[mask] == 0 {
            continue;
        }
        for v in 0..n {
            if mask & (1 << v) == 0 && preds[v] as usize & !mask == 0 {
                ways[mask | (1 << v)] += ways[mask];
            }
        }
    }
    ways[(1 << n) - 1]
}

/// Symbolic polynomial of the chamber containing `(mu, nu)`.
pub fn polynomial_at(mu: &[u32], nu: &[u32]) -> Result<Polynomial> {
    let (lmu, lnu) = (mu.len(), nu.len());
    if lmu + lnu < 3 {
        return Err(Error::Degenerate("no branch points for ℓ(μ) + ℓ(ν) < 3".into()));
    }
    if mu.iter().sum::<u32>() != nu.iter().sum::<u32>() {
        return invalid("point is not on the hyperplane Σμ = Σν");
    }
    if sign_vector(&walls(lmu, lnu), mu, nu).is_none() {
        return invalid("point lies on a wall");
    }
    let mut total = Polynomial::zero(lmu, lnu);
    for tree in leaf_trees(lmu, lnu)? {
        let mut product = Polynomial::constant(lmu, lnu, Rational::one());
        let mut arcs = vec![];
        for (e, form) in edge_forms(&tree, lmu, lnu).into_iter().enumerate() {
            let (a, b) = tree.edge(e);
            let value = form.eval(mu, nu);
            // inside a chamber no edge form vanishes
            debug_assert!(value != 0);
            let (form, arc) = if value > 0 { (form, (a, b)) } else { (form.negated(), (b, a)) };
            product = product.mul(&Polynomial::from_form(&form));
            arcs.push(arc);
        }
        let ext = linear_extensions(tree.num_vertices(), &arcs);
        total = total.add(&product.scale(&Rational::from_integer(ext.into())));
    }
    Ok(total)
}

pub fn chamber_polynomial(chamber: &Chamber) -> Result<Polynomial> {
    polynomial_at(&chamber.witness_mu, &chamber.witness_nu)
}

/// Exponent vectors in the reduced variables (last `ν` omitted) of total
/// degree at most `d`.
fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(k - 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(nvars, d, &mut vec![], &mut out);
    out
}

/// The chamber polynomial recovered from exact enumerated counts at lattice
/// points of the chamber, without using the tree construction.
pub fn interpolated_polynomial(chamber: &Chamber) -> Result<Polynomial> {
    let (lmu, lnu) = (chamber.witness_mu.len(), chamber.witness_nu.len());
    if lmu + lnu < 3 {
        return Err(Error::Degenerate("no branch points for ℓ(μ) + ℓ(ν) < 3".into()));
    }
    let ws = walls(lmu, lnu);
    let degree = (lmu + lnu - 3) as u32;
    let monos = monomials(lmu + lnu - 1, degree);
    let row = |mu: &[u32], nu: &[u32]| -> Vec<Rational> {
        let vals: Vec<u32> = mu.iter().chain(&nu[..lnu - 1]).copied().collect();
        monos
            .iter()
            .map(|e| {
                let v: u128 = vals.iter().zip(e).map(|(&x, &k)| (x as u128).pow(k)).product();
                Rational::from_integer(v.into())
            })
            .collect()
    };
    let mut bound = default_bound(lmu, lnu);
    loop {
        let points: Vec<(Vec<u32>, Vec<u32>)> = lattice_points(lmu, lnu, bound)
            .into_iter()
            .filter(|(mu, nu)| sign_vector(&ws, mu, nu).as_deref() == Some(&chamber.signs[..]))
            .collect();
        let rows: Vec<Vec<Rational>> = points.iter().map(|(m, n)| row(m, n)).collect();
        if linalg::rank(&rows, monos.len()) == monos.len() {
            // keep a full-rank subset, adding points in order
            let mut chosen: Vec<usize> = vec![];
            let mut basis: Vec<Vec<Rational>> = vec![];
            for (k, r) in rows.iter().enumerate() {
                basis.push(r.clone());
                if linalg::rank(&basis, monos.len()) == basis.len() {
                    chosen.push(k);
                } else {
                    basis.pop();
                }
                if chosen.len() == monos.len() {
                    break;
                }
            }
            let values = par::map(&chosen, |&k| {
                double_hurwitz_tropical_labeled(0, &points[k].0, &points[k].1)
            });
            let b: Vec<Rational> = values.into_iter().collect::<Result<_>>()?;
            let coeffs = linalg::solve_unique(&basis, &b)
                .ok_or_else(|| Error::CrossCheck("interpolation system is singular".into()))?;
            let mut p = Polynomial::zero(lmu, lnu);
            for (e, c) in monos.iter().zip(coeffs) {
                let mut full = e.clone();
                full.push(0);
                p.add_term(full, c);
            }
            return Ok(p);
        }
        if bound > 64 {
            return Err(Error::CrossCheck("chamber has too few lattice points to interpolate".into()));
        }
        bound *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn wall_counts() {
        assert_eq!(walls(2, 2).len(), 2);
        assert_eq!(walls(2, 2)[0].to_string(), "mu1 - nu1");
        assert_eq!(walls(2, 2)[1].to_string(), "mu1 - nu2");
        assert!(walls(1, 1).is_empty());
        assert!(walls(2, 1).is_empty());
        assert!(walls(3, 1).is_empty());
        // I ∋ 1 proper in {1,2,3}: 3 choices; J proper nonempty in {1,2}: 2
        assert_eq!(walls(3, 2).len(), 6);
    }

    #[test]
    fn reduction_eliminates_last_nu() {
        let f = LinearForm { mu: vec![1, 1], nu: vec![-1, -1] };
        assert!(f.reduced().is_zero());
        let p = Polynomial::from_form(&LinearForm { mu: vec![0, 0], nu: vec![0, 1] });
        assert_eq!(p.to_string(), "mu1 + mu2 - nu1");
    }

    #[test]
    fn two_two_chambers() {
        let chambers = chamber_decomposition(2, 2, default_bound(2, 2)).unwrap();
        assert_eq!(chambers.len(), 4);
        let top = chambers.iter().find(|c| c.signs == vec![1, 1]).unwrap();
        let p = top.polynomial.as_ref().unwrap();
        assert_eq!(p.to_string(), "2*mu1");
        assert_eq!(p.eval(&[3, 1], &[2, 2]), int(6));
    }

    #[test]
    fn one_one_is_degenerate() {
        let chambers = chamber_decomposition(1, 1, 4).unwrap();
        assert_eq!(chambers.len(), 1);
        assert!(chambers[0].polynomial.is_none());
        assert!(matches!(chamber_polynomial(&chambers[0]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn on_wall_is_rejected() {
        assert!(polynomial_at(&[2, 2], &[2, 2]).is_err());
    }

    #[test]
    fn extensions() {
        assert_eq!(linear_extensions(3, &[]), 6);
        assert_eq!(linear_extensions(3, &[(0, 1), (1, 2)]), 1);
        assert_eq!(linear_extensions(3, &[(0, 1), (0, 2)]), 2);
    }

    #[test]
    fn symbolic_equals_interpolated() {
        for (lmu, lnu) in [(2, 2), (2, 1), (1, 3), (3, 2)] {
            for ch in chamber_decomposition(lmu, lnu, default_bound(lmu, lnu)).unwrap() {
                assert_eq!(ch.polynomial.clone().unwrap(), interpolated_polynomial(&ch).unwrap());
            }
        }
    }
}
