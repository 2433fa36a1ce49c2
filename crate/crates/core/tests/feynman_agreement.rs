use num_traits::Zero;
use proptest::prelude::*;

use tropica::elliptic_covers::{all_orders, count_labeled_covers, enumerate_feynman_graphs};
use tropica::feynman_series::{graph_sum, mirror_check, refined_integral, TruncatedSeries};
use tropica::rational::{int, is_nonneg_integer};
use tropica::sym_oracle::SizeGuard;
use tropica::Rational;

/// All multidegrees of length `k` with entry sum at most `max`.
fn multidegrees(k: usize, max: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(k, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(k, max, &mut vec![], &mut out);
    out
}

#[test]
fn refined_coefficients_count_labeled_covers() {
    for g in 2..=3 {
        for shape in enumerate_feynman_graphs(g).unwrap() {
            let k = shape.graph().num_edges();
            for order in all_orders(shape.graph().num_vertices()) {
                let series = refined_integral(&shape, &order, 4).unwrap();
                for a in multidegrees(k, 4) {
                    let exps: Vec<i32> = a.iter().map(|&x| 2 * x as i32).collect();
                    let coeff = series.coefficient(&exps);
                    assert!(is_nonneg_integer(&coeff));
                    assert_eq!(coeff, count_labeled_covers(&shape, &order, &a).unwrap(), "g = {g}, a = {a:?}");
                }
            }
        }
    }
}

#[test]
fn only_even_positive_powers_survive() {
    for g in 2..=3 {
        let sum = graph_sum(g, 3).unwrap();
        for (e, c) in sum.sorted_terms() {
            assert!(e[0] > 0 && e[0] % 2 == 0, "q^{} has coefficient {c}", e[0]);
        }
    }
}

#[test]
fn truncation_is_stable() {
    for (g, dmax) in [(2, 4), (3, 3)] {
        for shape in enumerate_feynman_graphs(g).unwrap() {
            for order in all_orders(shape.graph().num_vertices()) {
                let big = refined_integral(&shape, &order, dmax).unwrap();
                for d in 1..dmax {
                    let small = refined_integral(&shape, &order, d).unwrap();
                    for (e, c) in small.sorted_terms() {
                        assert_eq!(big.coefficient(&e), c);
                    }
                    // nothing below the smaller bound is missing either
                    for (e, c) in big.sorted_terms() {
                        if e.iter().sum::<i32>() <= 2 * d as i32 {
                            assert_eq!(small.coefficient(&e), c);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn mirror_identity_genus_three() {
    let report = mirror_check(3, 3, SizeGuard::Enforce).unwrap();
    assert!(report.passed(), "{report:?}");
    let values: Vec<Rational> = report.rows.iter().map(|r| r.feynman.clone()).collect();
    assert_eq!(values, vec![int(0), int(2), int(160)]);
}

fn series_strategy() -> impl Strategy<Value = TruncatedSeries> {
    // x exponents in -1..=1 keep every triple product inside the x bound,
    // so only the q truncation is exercised
    prop::collection::vec(((-1i32..=1, -1i32..=1, 0i32..=2), -5i64..=5), 0..6).prop_map(|terms| {
        let mut s = TruncatedSeries::zero(2, 1, 3, 4);
        for ((a, b, q), c) in terms {
            s.add_term(vec![a, b, q], int(c));
        }
        s
    })
}

proptest! {
    #[test]
    fn multiplication_is_associative(a in series_strategy(), b in series_strategy(), c in series_strategy()) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_is_commutative(a in series_strategy(), b in series_strategy()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn multiplication_distributes(a in series_strategy(), b in series_strategy(), c in series_strategy()) {
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn constant_term_is_a_projection(a in series_strategy()) {
        let once = a.constant_term_in(&[0]);
        prop_assert_eq!(once.constant_term_in(&[0]), once.clone());
        for (e, c) in once.sorted_terms() {
            prop_assert_eq!(e[0], 0);
            prop_assert!(!c.is_zero());
        }
    }
}
