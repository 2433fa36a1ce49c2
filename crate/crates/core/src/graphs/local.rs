//! Local conditions of tropical covers at a single source point.

/// Local degree at a source vertex if the weights pointing into each target
/// direction have equal sums; `None` signals imbalance.
///
/// `groups[i]` holds the weights of the flags mapping to the `i`-th direction
/// around the image point (two directions for points of a line or circle).
/// An empty group counts as sum 0, so a vertex with all flags on one side is
/// unbalanced.
pub fn check_balancing(groups: &[Vec<u32>]) -> Option<u32> {
    let mut sums = groups.iter().map(|g| g.iter().sum::<u32>());
    let first = sums.next()?;
    (first > 0 && sums.all(|s| s == first)).then_some(first)
}

/// Right-hand side of the local Riemann–Hurwitz condition
/// `d_v (2 - 2 g(v')) - Σ (ω(f) - 1) - (2 - 2 g(v))`, summed over all flags
/// at `v`. A cover is a Hurwitz cover iff this is nonnegative everywhere.
pub fn local_rh_defect(local_degree: u32, image_genus: u32, vertex_genus: u32, flag_weights: &[u32]) -> i64 {
    let ramification: i64 = flag_weights.iter().map(|&w| w as i64 - 1).sum();
    local_degree as i64 * (2 - 2 * image_genus as i64) - ramification - (2 - 2 * vertex_genus as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balancing() {
        assert_eq!(check_balancing(&[vec![3], vec![2, 1]]), Some(3));
        assert_eq!(check_balancing(&[vec![1], vec![2]]), None);
        assert_eq!(check_balancing(&[vec![2, 2], vec![4]]), Some(4));
        assert_eq!(check_balancing(&[vec![2], vec![]]), None);
        assert_eq!(check_balancing(&[]), None);
    }

    #[test]
    fn rh_defect() {
        // left vertex of the degree-2 example: 2·2 - 1 - 2
        assert_eq!(local_rh_defect(2, 0, 0, &[1, 1, 2]), 1);
        // right vertex: 2·2 - 1 - 1 - 1 - 2, i.e. three flags of weight 2
        assert_eq!(local_rh_defect(2, 0, 0, &[2, 2, 2]), -1);
        // balanced trivalent genus-0 vertex over a line: val - 2
        assert_eq!(local_rh_defect(3, 0, 0, &[3, 2, 1]), 1);
        assert_eq!(local_rh_defect(5, 0, 0, &[5, 5]), 0);
        // over a line the defect is val(v) - 2 + 2 g(v)
        assert_eq!(local_rh_defect(4, 0, 1, &[4, 1, 3]), 3);
    }
}
