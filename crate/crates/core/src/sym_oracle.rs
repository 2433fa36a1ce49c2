//! Classical Hurwitz numbers from monodromy representations.
//!
//! Covers are counted as tuples of permutations in `S_d` whose product is the
//! identity and which generate a transitive subgroup, divided by `d!`. The
//! search runs as a dynamic program over states `(partial product, orbit
//! partition of the generators so far)`, which keeps transitivity exact while
//! collapsing the exponential tuple space.
//!
//! For double Hurwitz numbers the first permutation is fixed to a canonical
//! element of cycle type `μ` and the count is scaled by the size of its
//! conjugacy class.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{invalid, Error, Result};
use crate::graphs::Partition;
use crate::par;
use crate::rational::{factorial, Rational};

const MAX_DEGREE: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeGuard {
    Enforce,
    Override,
}

/// Which side transpositions are multiplied on while building the product.
/// Both give the same counts; the choice only fixes how the tuple is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Composition {
    /// `σ_∞ · τ_s ⋯ τ_1 · σ_0 = id`.
    LeftToRight,
    /// `σ_0 · τ_1 ⋯ τ_s · σ_∞ = id`.
    RightToLeft,
}

type Perm = [u8; MAX_DEGREE];
type Blocks = [u8; MAX_DEGREE];

fn identity() -> Perm {
    let mut p = [0u8; MAX_DEGREE];
    for (i, x) in p.iter_mut().enumerate() {
        *x = i as u8;
    }
    p
}

fn compose(a: &Perm, b: &Perm, d: usize) -> Perm {
    // (a ∘ b)(x) = a(b(x))
    let mut r = identity();
    for x in 0..d {
        r[x] = a[b[x] as usize];
    }
    r
}

fn inverse(a: &Perm, d: usize) -> Perm {
    let mut r = identity();
    for x in 0..d {
        r[a[x] as usize] = x as u8;
    }
    r
}

fn cycle_type(p: &Perm, d: usize) -> Vec<u32> {
    let mut seen = [false; MAX_DEGREE];
    let mut t = vec![];
    for i in 0..d {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = p[j] as usize;
            len += 1;
        }
        t.push(len);
    }
    t.sort_unstable_by(|a, b| b.cmp(a));
    t
}

/// Restricted-growth normal form of a set partition.
fn normalize(blocks: &Blocks, d: usize) -> Blocks {
    let mut map = [u8::MAX; MAX_DEGREE];
    let mut next = 0u8;
    let mut out = [0u8; MAX_DEGREE];
    for i in 0..d {
        let b = blocks[i] as usize;
        if map[b] == u8::MAX {
            map[b] = next;
            next += 1;
        }
        out[i] = map[b];
    }
    out
}

fn merge(blocks: &Blocks, i: usize, j: usize, d: usize) -> Blocks {
    let (bi, bj) = (blocks[i], blocks[j]);
    if bi == bj {
        return *blocks;
    }
    let mut out = *blocks;
    for x in out.iter_mut().take(d) {
        if *x == bj {
            *x = bi;
        }
    }
    normalize(&out, d)
}

fn orbits(gens: &[Perm], d: usize) -> Blocks {
    let mut b = identity();
    for g in gens {
        for x in 0..d {
            b = merge(&b, x, g[x] as usize, d);
        }
    }
    normalize(&b, d)
}

fn is_single_block(b: &Blocks, d: usize) -> bool {
    b[..d].iter().all(|&x| x == 0)
}

fn transpositions(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect()
}

fn all_perms(d: usize) -> Vec<Perm> {
    let mut cur: Vec<usize> = (0..d).collect();
    let mut out = vec![];
    loop {
        let mut p = identity();
        for (i, &x) in cur.iter().enumerate() {
            p[i] = x as u8;
        }
        out.push(p);
        if !crate::graphs::next_permutation(&mut cur) {
            return out;
        }
    }
}

type States = HashMap<(Perm, Blocks), u128>;

/// One DP step: multiply every state by every transposition.
fn step(states: States, d: usize, left: bool) -> States {
    let entries: Vec<((Perm, Blocks), u128)> = states.into_iter().collect();
    let chunk = entries.len().div_ceil(64).max(1);
    let chunks: Vec<&[((Perm, Blocks), u128)]> = entries.chunks(chunk).collect();
    let taus = transpositions(d);
    let partial = par::map(&chunks, |chunk| {
        let mut out: States = HashMap::new();
        for ((p, b), c) in chunk.iter() {
            for &(i, j) in &taus {
                let mut q = *p;
                if left {
                    // τ ∘ p: exchange the values i and j
                    for x in q.iter_mut().take(d) {
                        if *x as usize == i {
                            *x = j as u8;
                        } else if *x as usize == j {
                            *x = i as u8;
                        }
                    }
                } else {
                    // p ∘ τ: exchange positions i and j
                    q.swap(i, j);
                }
                *out.entry((q, merge(b, i, j, d))).or_insert(0) += c;
            }
        }
        out
    });
    let mut merged: States = HashMap::new();
    for m in partial {
        for (k, v) in m {
            *merged.entry(k).or_insert(0) += v;
        }
    }
    merged
}

fn canonical_of_type(parts: &[u32], d: usize) -> Perm {
    let mut p = identity();
    let mut start = 0;
    for &len in parts {
        let len = len as usize;
        for k in 0..len {
            p[start + k] = (start + (k + 1) % len) as u8;
        }
        start += len;
    }
    debug_assert_eq!(start, d);
    p
}

/// `d! / z_μ`, the number of permutations of cycle type `μ`.
fn class_size(mu: &Partition) -> u128 {
    let z: u128 = mu.parts().iter().map(|&p| p as u128).product::<u128>() * mu.automorphism_order();
    factorial(mu.size() as usize) / z
}

fn check_line(g: u32, mu: &Partition, nu: &Partition, guard: SizeGuard) -> Result<usize> {
    if mu.size() != nu.size() {
        return invalid(format!("|μ| = {} differs from |ν| = {}", mu.size(), nu.size()));
    }
    let d = mu.size() as usize;
    if d > MAX_DEGREE {
        return invalid(format!("degree {d} exceeds the supported maximum {MAX_DEGREE}"));
    }
    if guard == SizeGuard::Enforce && d > 6 {
        return Err(Error::SizeGuard(format!("degree {d} > 6")));
    }
    let s = 2 * g as i64 - 2 + mu.len() as i64 + nu.len() as i64;
    if s < 0 {
        return invalid("Riemann–Hurwitz count of branch points is negative");
    }
    Ok(s as usize)
}

/// Double Hurwitz number `H_g(μ, ν)`, each cover weighted by one over its
/// automorphisms.
pub fn hurwitz_line(g: u32, mu: &Partition, nu: &Partition, guard: SizeGuard) -> Result<Rational> {
    hurwitz_line_with(g, mu, nu, guard, Composition::LeftToRight)
}

pub fn hurwitz_line_with(
    g: u32,
    mu: &Partition,
    nu: &Partition,
    guard: SizeGuard,
    composition: Composition,
) -> Result<Rational> {
    let s = check_line(g, mu, nu, guard)?;
    let d = mu.size() as usize;
    let sigma0 = canonical_of_type(mu.parts(), d);
    let mut states: States = HashMap::new();
    states.insert((sigma0, orbits(&[sigma0], d)), 1);
    for _ in 0..s {
        states = step(states, d, composition == Composition::LeftToRight);
    }
    let count: u128 = states
        .iter()
        .filter(|((p, b), _)| is_single_block(b, d) && cycle_type(p, d) == nu.parts())
        .map(|(_, c)| c)
        .sum();
    Ok(Rational::new(
        BigInt::from(count) * BigInt::from(class_size(mu)),
        BigInt::from(factorial(d)),
    ))
}

/// Simple Hurwitz number `N_{d,g}` of an elliptic curve: degree-`d` covers
/// by a genus-`g` curve with `2g - 2` simple branch points.
pub fn hurwitz_elliptic(d: u32, g: u32, guard: SizeGuard) -> Result<Rational> {
    if d == 0 {
        return invalid("degree must be positive");
    }
    if g < 1 {
        return invalid("source genus must be at least 1");
    }
    let d = d as usize;
    if d > MAX_DEGREE {
        return invalid(format!("degree {d} exceeds the supported maximum {MAX_DEGREE}"));
    }
    if guard == SizeGuard::Enforce && (d > 5 || g > 3) {
        return Err(Error::SizeGuard(format!("elliptic oracle at d = {d}, g = {g}")));
    }
    let perms = all_perms(d);
    let partial = par::map(&perms, |alpha| {
        let ai = inverse(alpha, d);
        let mut local: States = HashMap::new();
        for beta in &perms {
            let bi = inverse(beta, d);
            let comm = compose(&compose(alpha, beta, d), &compose(&ai, &bi, d), d);
            *local.entry((comm, orbits(&[*alpha, *beta], d))).or_insert(0) += 1;
        }
        local
    });
    let mut states: States = HashMap::new();
    for m in partial {
        for (k, v) in m {
            *states.entry(k).or_insert(0) += v;
        }
    }
    // [α,β] · τ_{2g-2} ⋯ τ_1 = id, multiplying transpositions on the right
    for _ in 0..2 * (g as usize) - 2 {
        states = step(states, d, false);
    }
    let id = identity();
    let count: u128 = states
        .iter()
        .filter(|((p, b), _)| p[..d] == id[..d] && is_single_block(b, d))
        .map(|(_, c)| c)
        .sum();
    Ok(Rational::new(BigInt::from(count), BigInt::from(factorial(d))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    /// Explicit tuple list `(σ_0, τ_1, …, τ_s)` for tiny degrees.
    fn line_tuples(g: u32, mu: &Partition, nu: &Partition) -> Vec<Vec<Perm>> {
        let d = mu.size() as usize;
        let s = (2 * g as usize + mu.len() + nu.len()) - 2;
        let perms = all_perms(d);
        let taus: Vec<Perm> = transpositions(d)
            .into_iter()
            .map(|(i, j)| {
                let mut t = identity();
                t.swap(i, j);
                t
            })
            .collect();
        let mut out = vec![];
        for s0 in perms.iter().filter(|p| cycle_type(p, d) == mu.parts()) {
            let mut idx = vec![0usize; s];
            loop {
                let mut prod = *s0;
                let mut tuple = vec![*s0];
                for &k in &idx {
                    prod = compose(&taus[k], &prod, d);
                    tuple.push(taus[k]);
                }
                if cycle_type(&prod, d) == nu.parts() && is_single_block(&orbits(&tuple, d), d) {
                    out.push(tuple);
                }
                // odometer over the transposition indices
                let Some(pos) = idx.iter().position(|&k| k + 1 < taus.len()) else {
                    break;
                };
                idx[pos] += 1;
                idx[..pos].fill(0);
            }
        }
        out
    }

    #[test]
    fn line_examples() {
        let e = SizeGuard::Enforce;
        assert_eq!(hurwitz_line(1, &part("3"), &part("3"), e).unwrap(), int(2));
        assert_eq!(hurwitz_line(0, &part("1,1"), &part("1,1"), e).unwrap(), ratio(1, 2));
        assert_eq!(hurwitz_line(0, &part("2,1"), &part("2,1"), e).unwrap(), int(4));
        assert_eq!(hurwitz_line(0, &part("3,1"), &part("2,2"), e).unwrap(), int(3));
        // z ↦ z^d
        assert_eq!(hurwitz_line(0, &part("4"), &part("4"), e).unwrap(), ratio(1, 4));
    }

    #[test]
    fn dp_matches_explicit_tuples() {
        for (g, m, n) in [(0, "2,1", "2,1"), (1, "3", "3"), (0, "2,2", "3,1"), (1, "2,1", "3")] {
            let (mu, nu) = (part(m), part(n));
            let d = mu.size() as usize;
            let tuples = line_tuples(g, &mu, &nu);
            let brute = Rational::new(BigInt::from(tuples.len()), BigInt::from(factorial(d)));
            assert_eq!(hurwitz_line(g, &mu, &nu, SizeGuard::Enforce).unwrap(), brute, "{g} {m} {n}");
        }
    }

    #[test]
    fn conjugation_invariance() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let (mu, nu) = (part("2,2"), part("3,1"));
        let d = 4;
        let tuples = line_tuples(0, &mu, &nu);
        let set: std::collections::HashSet<Vec<Perm>> = tuples.iter().cloned().collect();
        for _ in 0..20 {
            let mut img: Vec<u8> = (0..d as u8).collect();
            img.shuffle(&mut rng);
            let mut c = identity();
            c[..d].copy_from_slice(&img);
            let ci = inverse(&c, d);
            for t in &tuples {
                let conj: Vec<Perm> = t.iter().map(|p| compose(&compose(&c, p, d), &ci, d)).collect();
                assert!(set.contains(&conj));
            }
        }
    }

    #[test]
    fn composition_convention_is_irrelevant() {
        for (g, m, n) in [(0, "3,1", "2,2"), (1, "2,2", "4"), (2, "3", "2,1")] {
            let (mu, nu) = (part(m), part(n));
            let a = hurwitz_line_with(g, &mu, &nu, SizeGuard::Enforce, Composition::LeftToRight);
            let b = hurwitz_line_with(g, &mu, &nu, SizeGuard::Enforce, Composition::RightToLeft);
            assert_eq!(a.unwrap(), b.unwrap());
        }
    }

    #[test]
    fn symmetric_in_mu_nu() {
        let e = SizeGuard::Enforce;
        for (m, n) in [("3,1", "2,1,1"), ("4", "2,1,1")] {
            assert_eq!(
                hurwitz_line(1, &part(m), &part(n), e).unwrap(),
                hurwitz_line(1, &part(n), &part(m), e).unwrap()
            );
        }
    }

    #[test]
    fn elliptic_values() {
        let e = SizeGuard::Enforce;
        assert_eq!(hurwitz_elliptic(1, 2, e).unwrap(), int(0));
        assert_eq!(hurwitz_elliptic(2, 2, e).unwrap(), int(2));
        assert_eq!(hurwitz_elliptic(3, 2, e).unwrap(), int(16));
        // the monodromy count gives 60 here
        assert_eq!(hurwitz_elliptic(4, 2, e).unwrap(), int(60));
    }

    #[test]
    fn guards_and_errors() {
        let e = SizeGuard::Enforce;
        assert!(matches!(
            hurwitz_line(0, &part("7"), &part("6,1"), e),
            Err(Error::SizeGuard(_))
        ));
        assert!(hurwitz_line(0, &part("3"), &part("2"), e).is_err());
        assert!(matches!(hurwitz_elliptic(6, 2, e), Err(Error::SizeGuard(_))));
        assert!(hurwitz_elliptic(0, 2, e).is_err());
    }
}
