use std::collections::BTreeSet;

use tropica::moduli_space::{enumerate_types, expected_max_dimension, moduli_poset};

fn double_factorial(n: usize) -> usize {
    (1..=n).rev().step_by(2).product()
}

#[test]
fn rational_maximal_types_are_trivalent_trees() {
    for n in 4..=7 {
        let p = moduli_poset(0, n).unwrap();
        assert_eq!(p.maximal().len(), double_factorial(2 * n - 5), "n = {n}");
        assert!(p.maximal().iter().all(|&i| p.types[i].dimension == n - 3));
    }
}

#[test]
fn types_are_stable_with_right_genus_and_legs() {
    for (g, n) in [(0, 5), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1), (3, 0)] {
        for t in enumerate_types(g, n).unwrap() {
            let m = &t.graph;
            assert_eq!(m.total_genus(), g as usize);
            let labels: BTreeSet<u32> = m.legs().iter().map(|l| l.label).collect();
            assert_eq!(labels, (1..=n as u32).collect());
            assert!(m.is_connected());
            for v in 0..m.num_vertices() {
                assert!(2 * m.vertex_genus(v) as i64 - 2 + m.valence(v) as i64 > 0);
            }
        }
    }
}

#[test]
fn poset_is_graded_and_reaches_every_type() {
    for (g, n) in [(0, 6), (1, 2), (1, 3), (2, 0), (2, 1), (3, 0)] {
        let p = moduli_poset(g, n).unwrap();
        assert!(p.is_graded());
        assert_eq!(p.max_dimension(), expected_max_dimension(g, n).unwrap());
        // walk down from the maximal types
        let mut seen: BTreeSet<usize> = p.maximal().into_iter().collect();
        let mut frontier: Vec<usize> = seen.iter().copied().collect();
        while let Some(b) = frontier.pop() {
            for &(lo, hi) in &p.covers {
                if hi == b && seen.insert(lo) {
                    frontier.push(lo);
                }
            }
        }
        assert_eq!(seen.len(), p.types.len(), "(g, n) = ({g}, {n})");
        assert!(p.maximal().iter().all(|&i| p.types[i].dimension == p.max_dimension()));
    }
}

#[test]
fn known_type_counts() {
    assert_eq!(enumerate_types(0, 4).unwrap().len(), 4);
    assert_eq!(enumerate_types(1, 2).unwrap().len(), 5);
    assert_eq!(enumerate_types(0, 6).unwrap().len(), 236);
    assert_eq!(enumerate_types(3, 0).unwrap().len(), 42);
}
