use tropica::line_covers::{double_hurwitz_tropical, double_hurwitz_tropical_labeled, enumerate_line_covers, num_levels};
use tropica::sym_oracle::{hurwitz_line, SizeGuard};
use tropica::{Partition, Rational};

fn cases(max_degree: u32, max_genus: u32) -> Vec<(u32, Partition, Partition)> {
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

#[test]
fn tropical_equals_classical() {
    for (g, mu, nu) in cases(5, 2) {
        let trop = double_hurwitz_tropical(g, &mu, &nu).unwrap();
        let classical = hurwitz_line(g, &mu, &nu, SizeGuard::Enforce).unwrap();
        assert_eq!(trop, classical, "g = {g}, μ = {mu}, ν = {nu}");
    }
}

#[test]
fn symmetric_under_swapping_sides() {
    for (g, mu, nu) in cases(5, 1) {
        assert_eq!(
            double_hurwitz_tropical(g, &mu, &nu).unwrap(),
            double_hurwitz_tropical(g, &nu, &mu).unwrap()
        );
    }
}

#[test]
fn labeled_count_is_classical_times_automorphisms() {
    for (g, mu, nu) in cases(4, 1) {
        let labeled = double_hurwitz_tropical_labeled(g, mu.parts(), nu.parts()).unwrap();
        let scale = Rational::from_integer((mu.automorphism_order() * nu.automorphism_order()).into());
        assert_eq!(labeled, double_hurwitz_tropical(g, &mu, &nu).unwrap() * scale);
    }
}

#[test]
fn automorphisms_match_forks_and_wieners() {
    for (g, mu, nu) in cases(5, 2) {
        for c in enumerate_line_covers(g, &mu, &nu).unwrap() {
            c.validate().unwrap();
            let m = c.multiplicity().unwrap();
            assert_eq!(m.automorphisms, 1u128 << (m.forks + m.wieners));
        }
    }
}

#[test]
fn spot_checks_in_degree_six() {
    for (g, m, n) in [(0, "3,3", "4,2"), (1, "6", "3,2,1"), (0, "2,2,2", "3,3")] {
        let (mu, nu): (Partition, Partition) = (m.parse().unwrap(), n.parse().unwrap());
        assert_eq!(
            double_hurwitz_tropical(g, &mu, &nu).unwrap(),
            hurwitz_line(g, &mu, &nu, SizeGuard::Enforce).unwrap()
        );
    }
}
