use tropica::elliptic_covers::{
    direct_count, enumerate_elliptic_covers, labeled_aggregation, loop_graph_assignments, simple_hurwitz_tropical,
};
use tropica::rational::int;
use tropica::sym_oracle::{hurwitz_elliptic, SizeGuard};

#[test]
fn tropical_equals_classical() {
    for g in 2..=3 {
        for d in 1..=5 {
            let trop = simple_hurwitz_tropical(d, g).unwrap();
            assert_eq!(trop, hurwitz_elliptic(d, g, SizeGuard::Enforce).unwrap(), "d = {d}, g = {g}");
        }
    }
}

#[test]
fn labeled_and_direct_routes_agree() {
    for g in 2..=3 {
        for d in 1..=5 {
            assert_eq!(labeled_aggregation(d, g).unwrap(), direct_count(d, g).unwrap(), "d = {d}, g = {g}");
        }
    }
}

#[test]
fn enumerated_covers_are_valid() {
    for g in 2..=3 {
        for d in 1..=4 {
            for c in enumerate_elliptic_covers(d, g).unwrap() {
                c.validate().unwrap();
                assert_eq!(c.degree(), d);
            }
        }
    }
}

#[test]
fn graphs_with_loops_carry_no_covers() {
    for g in 2..=3 {
        for d in 1..=4 {
            assert_eq!(loop_graph_assignments(d, g).unwrap(), 0, "d = {d}, g = {g}");
        }
    }
}

#[test]
fn known_values() {
    assert_eq!(simple_hurwitz_tropical(1, 2).unwrap(), int(0));
    assert_eq!(simple_hurwitz_tropical(2, 2).unwrap(), int(2));
    assert_eq!(simple_hurwitz_tropical(3, 2).unwrap(), int(16));
    assert_eq!(simple_hurwitz_tropical(4, 2).unwrap(), int(60));
}
