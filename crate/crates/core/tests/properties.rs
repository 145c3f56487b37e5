use proptest::prelude::*;

use permlab::dyck::{count_segments, DyckPath, SegmentEndpoints};
use permlab::exact::{count_k_decreasing, count_k_decreasing_recursive, count_one_point};
use permlab::perm::{contains, Pattern, Permutation};
use permlab::prob::ExactProb;
use permlab::{catalan, dyck_to_perm, perm_to_dyck, sample_dyck, sample_uniform_312};

proptest! {
    #[test]
    fn sampled_paths_are_dyck(n in 1usize..200, seed in any::<u64>()) {
        let d = sample_dyck(n, seed);
        prop_assert_eq!(d.semilength(), n);
        prop_assert!(d.heights().iter().all(|&h| h >= 0));
        let back: DyckPath = d.to_string().parse().unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn bijection_round_trips(n in 1usize..120, seed in any::<u64>()) {
        let p = sample_uniform_312(n, seed).unwrap();
        prop_assert!(!contains(&p, &Pattern::p312()));
        let d = perm_to_dyck(&p).unwrap();
        prop_assert_eq!(dyck_to_perm(&d), p.clone());
        // peaks (position, height) are the left-to-right maxima (value, x-coordinate)
        prop_assert_eq!(d.peaks().len(), p.left_to_right_maxima().len());
    }

    #[test]
    fn one_point_symmetry(n in 3usize..300, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let i = 2 + ((n - 2) as f64 * a) as usize;
        let j = 1 + ((i - 2) as f64 * b) as usize;
        prop_assume!(j < i && i <= n);
        prop_assert_eq!(count_one_point(n, i, j).unwrap(), count_one_point(n, n + 1 - j, n + 1 - i).unwrap());
    }

    #[test]
    fn decreasing_forms_agree(n in 4usize..90, seeds in proptest::collection::vec(0.0f64..1.0, 4)) {
        let i1 = 2 + ((n - 3) as f64 * seeds[0]) as usize;
        let i2 = i1 + 1 + ((n - i1 - 1) as f64 * seeds[1]) as usize;
        let j1 = 2 + ((i1 - 2) as f64 * seeds[2]) as usize;
        let j2 = 1 + ((j1 - 1) as f64 * seeds[3]) as usize;
        prop_assume!(j2 < j1 && j1 < i1 && i1 < i2 && i2 <= n);
        let pts = [(i1, j1), (i2, j2)];
        prop_assert_eq!(count_k_decreasing(n, &pts).unwrap(), count_k_decreasing_recursive(n, &pts).unwrap());
    }

    #[test]
    fn probabilities_in_unit_interval(n in 2usize..200, seed in any::<u64>()) {
        let i = 2 + (seed as usize % (n - 1));
        let j = 1 + (seed as usize / 7) % (i - 1);
        let c = count_one_point(n, i, j).unwrap();
        let p = ExactProb::from_counts(&c, &catalan(n));
        prop_assert!(p.to_f64() > 0.0 && p.to_f64() < 1.0);
        let json = serde_json::to_string(&p).unwrap();
        let back: ExactProb = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn segment_counts_shift_invariant(x0 in 0i64..30, dx in 0i64..30, y0 in 0i64..15, yk in 0i64..15) {
        let a = count_segments(SegmentEndpoints::new(x0, y0, x0 + dx, yk)).unwrap();
        let b = count_segments(SegmentEndpoints::new(0, y0, dx, yk)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn permutation_text_round_trips(n in 1usize..30, seed in any::<u64>()) {
        let p = sample_uniform_312(n, seed).unwrap();
        let back: Permutation = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }
}
