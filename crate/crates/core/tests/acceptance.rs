//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Every numeric comparison is exact (rationals, no tolerance). Each
//! criterion also carries a wall-clock limit, checked after it finishes.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tropica::chambers::{chamber_decomposition, interpolated_polynomial, lattice_points, sign_vector, walls};
use tropica::elliptic_covers::{
    all_orders, direct_count, enumerate_elliptic_covers, enumerate_feynman_graphs, labeled_aggregation,
    loop_graph_assignments, simple_hurwitz_tropical,
};
use tropica::feynman_series::{graph_sum, mirror_check, refined_integral};
use tropica::graph_complex::{differential, homology_dimension, is_boundary, verify_d_squared, wheel_class};
use tropica::graphs::canonical_encoding;
use tropica::line_covers::{double_hurwitz_tropical, double_hurwitz_tropical_labeled, enumerate_line_covers, num_levels};
use tropica::moduli_space::moduli_poset;
use tropica::rational::int;
use tropica::sym_oracle::{hurwitz_elliptic, hurwitz_line, SizeGuard};
use tropica::{Multigraph, Partition, Rational};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn criterion_1() -> Outcome {
    let (mu, nu): (Partition, Partition) = ("3".parse().map_err(err)?, "3".parse().map_err(err)?);
    let covers = enumerate_line_covers(1, &mu, &nu).map_err(err)?;
    check(covers.len() == 1, || format!("{} cover classes, expected 1", covers.len()))?;
    let m = covers[0].multiplicity().map_err(err)?;
    check(m.value == int(2), || format!("multiplicity {}, expected 2", m.value))?;
    let total = double_hurwitz_tropical(1, &mu, &nu).map_err(err)?;
    check(total == int(2), || format!("H_1((3),(3)) = {total}, expected 2"))?;
    Ok(format!("H_1((3),(3)) = {total} from one class {}", covers[0].canonical_string()))
}

fn criterion_2() -> Outcome {
    let target = int(58);
    let direct = direct_count(4, 2).map_err(err)?;
    let labeled = labeled_aggregation(4, 2).map_err(err)?;
    let feynman = graph_sum(2, 4).map_err(err)?.coefficient(&[8]);
    let mut mults: Vec<Rational> =
        enumerate_elliptic_covers(4, 2).map_err(err)?.iter().map(|c| c.multiplicity()).collect();
    mults.sort();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for m in &mults {
        *counts.entry(m.to_string()).or_default() += 1;
    }
    let listing = format!(
        "direct {direct}, labeled {labeled}, q^8 coefficient {feynman}; multiplicities {}",
        mults.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
    );
    let doubled = ["8", "12", "6", "2", "1"].iter().all(|k| counts.get(*k).copied().unwrap_or(0) >= 2);
    check(doubled, || format!("multiplicity multiset lacks a doubled entry: {listing}"))?;
    check(direct == target && labeled == target && feynman == target, || format!("expected 58 three ways, got {listing}"))?;
    Ok(listing)
}

fn line_cases(max_degree: u32, max_genus: u32) -> Vec<(u32, Partition, Partition)> {
    let mut out = vec![];
    for d in 1..=max_degree {
        let parts = Partition::all_of(d);
        for g in 0..=max_genus {
            for mu in &parts {
                for nu in &parts {
                    if num_levels(g, mu.len(), nu.len()) >= 1 {
                        out.push((g, mu.clone(), nu.clone()));
                    }
                }
            }
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let cases = line_cases(5, 2);
    for (g, mu, nu) in &cases {
        let trop = double_hurwitz_tropical(*g, mu, nu).map_err(err)?;
        let classical = hurwitz_line(*g, mu, nu, SizeGuard::Enforce).map_err(err)?;
        check(trop == classical, || format!("H_{g}({mu},{nu}): tropical {trop}, classical {classical}"))?;
    }
    let mut elliptic = 0;
    for g in 2..=3 {
        for d in 1..=5 {
            let trop = simple_hurwitz_tropical(d, g).map_err(err)?;
            let classical = hurwitz_elliptic(d, g, SizeGuard::Enforce).map_err(err)?;
            check(trop == classical, || format!("N_{d},{g}: tropical {trop}, classical {classical}"))?;
            elliptic += 1;
        }
    }
    Ok(format!("{} line cases (|μ| ≤ 5, g ≤ 2) and {elliptic} elliptic cases (d ≤ 5, g = 2, 3) agree", cases.len()))
}

fn criterion_4() -> Outcome {
    let ws = walls(2, 2);
    check(ws.len() == 2, || format!("{} walls, expected 2", ws.len()))?;
    let chambers = chamber_decomposition(2, 2, 6).map_err(err)?;
    check(chambers.len() == 4, || format!("{} chambers, expected 4", chambers.len()))?;
    let points = lattice_points(2, 2, 12);
    let mut summary = vec![];
    for c in &chambers {
        let poly = c.polynomial.as_ref().ok_or("chamber without polynomial")?;
        let inside: Vec<&(Vec<u32>, Vec<u32>)> =
            points.iter().filter(|(m, n)| sign_vector(&ws, m, n).as_deref() == Some(&c.signs[..])).collect();
        check(inside.len() >= 5, || format!("only {} interior points in chamber {:?}", inside.len(), c.signs))?;
        for (m, n) in inside.iter().take(12) {
            let count = double_hurwitz_tropical_labeled(0, m, n).map_err(err)?;
            check(poly.eval(m, n) == count, || format!("{poly} at μ={m:?}, ν={n:?} gives {}, count {count}", poly.eval(m, n)))?;
        }
        let interp = interpolated_polynomial(c).map_err(err)?;
        check(&interp == poly, || format!("symbolic {poly} differs from interpolated {interp}"))?;
        summary.push(format!("{:?}: {poly}", c.signs));
    }
    // μ1 > ν1 and μ1 > ν2 is the chamber with both walls positive
    let top = chambers.iter().find(|c| c.signs.iter().all(|&s| s > 0)).ok_or("no all-positive chamber")?;
    let poly = top.polynomial.as_ref().ok_or("no polynomial")?;
    check(poly.degree() == Some(1), || format!("top chamber polynomial {poly} is not of degree 1"))?;
    check(poly.to_string() == "2*mu1", || format!("top chamber polynomial {poly}, expected 2*mu1"))?;
    Ok(format!("2 walls, 4 chambers; {}", summary.join("; ")))
}

fn criterion_5() -> Outcome {
    let report = mirror_check(2, 4, SizeGuard::Enforce).map_err(err)?;
    let rows: Vec<String> =
        report.rows.iter().map(|r| format!("q^{}: {} = {}", 2 * r.degree, r.tropical, r.feynman)).collect();
    check(report.passed(), || format!("mismatch: {report:?}"))?;
    Ok(rows.join(", "))
}

fn criterion_6() -> Outcome {
    let mut checked = vec![];
    for g in 2..=4 {
        checked.push(format!("g={g}: {}", verify_d_squared(g).map_err(err)?));
    }
    check(wheel_class(4).map_err(err)?.is_zero(), || "[W_4] is not zero".into())?;
    let w3 = wheel_class(3).map_err(err)?;
    check(!w3.is_zero(), || "[W_3] vanishes".into())?;
    check(differential(&w3).map_err(err)?.is_zero(), || "∂[W_3] ≠ 0".into())?;
    check(differential(&wheel_class(5).map_err(err)?).map_err(err)?.is_zero(), || "∂[W_5] ≠ 0".into())?;
    check(!is_boundary(&w3).map_err(err)?, || "[W_3] is a boundary".into())?;
    let h = homology_dimension(3, 6).map_err(err)?;
    check(h == 1, || format!("homology at (3, 6) has dimension {h}"))?;
    Ok(format!("∂∂ = 0 on all generators ({}); [W_4] = 0; [W_3] a nonzero class; H(3,6) = {h}", checked.join(", ")))
}

fn criterion_7() -> Outcome {
    let p04 = moduli_poset(0, 4).map_err(err)?;
    check(p04.types.len() == 4, || format!("(0,4): {} types", p04.types.len()))?;
    let p12 = moduli_poset(1, 2).map_err(err)?;
    check(p12.types.len() == 5, || format!("(1,2): {} types", p12.types.len()))?;
    let folded = p12.maximal().iter().filter(|&&i| p12.types[i].folded).count();
    check(folded == 1, || format!("(1,2): {folded} folded maximal cones"))?;
    let p20 = moduli_poset(2, 0).map_err(err)?;
    check(p20.maximal().len() == 2, || format!("(2,0): {} maximal types", p20.maximal().len()))?;
    let dims = [p04.max_dimension(), p12.max_dimension(), p20.max_dimension()];
    check(dims == [1, 2, 3], || format!("max dimensions {dims:?}"))?;
    let p05 = moduli_poset(0, 5).map_err(err)?;
    check(p05.maximal().len() == 15, || format!("(0,5): {} maximal types", p05.maximal().len()))?;
    Ok(format!(
        "(0,4) {} types; (1,2) {} types, {folded} folded maximal; (2,0) {} maximal; dims {dims:?}; (0,5) {} maximal",
        p04.types.len(),
        p12.types.len(),
        p20.maximal().len(),
        p05.maximal().len()
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let instances = [
        Multigraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).map_err(err)?,
        Multigraph::from_edges(4, &[(0, 2), (0, 1), (0, 1), (1, 3), (2, 3), (2, 3)]).map_err(err)?,
        Multigraph::with_genus(3, &[(0, 0), (0, 1), (1, 2), (1, 2)], &[(0, 1), (2, 2), (2, 3)], &[0, 1, 0])
            .map_err(err)?,
    ];
    for g in &instances {
        let enc = canonical_encoding(g);
        for _ in 0..100 {
            let mut vmap: Vec<usize> = (0..g.num_vertices()).collect();
            vmap.shuffle(&mut rng);
            let mut eorder: Vec<usize> = (0..g.num_edges()).collect();
            eorder.shuffle(&mut rng);
            let h = g.relabeled(&vmap, &eorder).map_err(err)?;
            check(canonical_encoding(&h) == enc, || "canonical encoding changed under relabeling".into())?;
        }
    }
    let mut covers = 0;
    for (g, mu, nu) in line_cases(5, 1) {
        for c in enumerate_line_covers(g, &mu, &nu).map_err(err)? {
            let m = c.multiplicity().map_err(err)?;
            check(m.automorphisms == 1u128 << (m.forks + m.wieners), || format!("|Aut| ≠ 2^(f+w) on {c}"))?;
            covers += 1;
        }
    }
    for g in 2..=3 {
        for d in 1..=4 {
            let n = loop_graph_assignments(d, g).map_err(err)?;
            check(n == 0, || format!("{n} balanced assignments on loop graphs at d = {d}, g = {g}"))?;
        }
    }
    let mut series = 0;
    for shape in enumerate_feynman_graphs(2).map_err(err)? {
        for order in all_orders(shape.graph().num_vertices()) {
            let big = refined_integral(&shape, &order, 4).map_err(err)?;
            for d in 1..4 {
                for (e, c) in refined_integral(&shape, &order, d).map_err(err)?.sorted_terms() {
                    check(big.coefficient(&e) == c, || format!("coefficient at {e:?} changed with the bound"))?;
                    series += 1;
                }
            }
        }
    }
    Ok(format!(
        "300 relabelings canonical; |Aut| = 2^(f+w) on {covers} line covers; loop graphs carry no covers; {series} coefficients stable"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 8] = [
        ("H_1((3),(3)) = 2 from one cover class", 1, criterion_1),
        ("N_{4,2} = 58 three ways, doubled multiplicities", 60, criterion_2),
        ("correspondence suite, line and elliptic", 600, criterion_3),
        ("chambers for ℓ(μ) = ℓ(ν) = 2", 30, criterion_4),
        ("mirror identity at g = 2 up to q^8", 120, criterion_5),
        ("graph complex", 120, criterion_6),
        ("moduli counts", 10, criterion_7),
        ("property suites", 600, criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > Duration::from_secs(*limit) {
            outcome = Err(format!("took {elapsed:.1?}, limit {limit} s"));
        }
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => ("FAIL", e.clone()),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!("[{tag}] criterion {}: {name} ({elapsed:.2?}, limit {limit} s): {detail}", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
