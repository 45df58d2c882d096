//! Property-based invariants of the objective, the closed form, the search,
//! and the landscape slices.

use nn_extremal::{
    local_search, s3, slice, Configuration, Point, Rect, SearchParams, SliceSpec, SplitMix64,
    BOUND_SLACK, S3_RATIO_SUP,
};
use proptest::prelude::*;

/// Deterministic random configuration: n uniform points in Rect(1, aspect),
/// redrawn on the (vanishingly rare) coincidence.
fn random_config(seed: u64, n: usize, aspect: f64) -> Configuration {
    let rect = Rect::new(1.0, aspect).unwrap();
    let mut rng = SplitMix64::new(seed);
    loop {
        let pts: Vec<Point> = (0..n)
            .map(|_| Point::new(rng.next_in(0.0, 1.0), rng.next_in(0.0, aspect)))
            .collect();
        if let Ok(config) = Configuration::new(rect, pts) {
            return config;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn sigma_never_exceeds_bound(
        seed in any::<u64>(),
        n in 2..=12usize,
        aspect in 0.1..10.0f64,
    ) {
        let config = random_config(seed, n, aspect);
        let bound = config.rect().theorem_bound();
        prop_assert!(config.sigma() <= bound + BOUND_SLACK);
    }

    #[test]
    fn sigma_scales_quadratically(
        seed in any::<u64>(),
        n in 2..=8usize,
        aspect in 0.2..5.0f64,
        lambda in 0.1..10.0f64,
    ) {
        let config = random_config(seed, n, aspect);
        let scaled_rect = Rect::new(lambda * 1.0, lambda * aspect).unwrap();
        let scaled_pts: Vec<Point> = config
            .points()
            .iter()
            .map(|p| Point::new(lambda * p.x, lambda * p.y))
            .collect();
        let scaled = Configuration::new(scaled_rect, scaled_pts).unwrap();
        let expect = lambda * lambda * config.sigma();
        prop_assert!(
            (scaled.sigma() - expect).abs() <= 1e-9 * expect.max(1e-300),
            "scaled {} vs {}",
            scaled.sigma(),
            expect
        );
    }

    #[test]
    fn sigma_is_label_invariant(
        seed in any::<u64>(),
        n in 2..=8usize,
        aspect in 0.2..5.0f64,
        perm_seed in any::<u64>(),
    ) {
        let config = random_config(seed, n, aspect);
        let mut pts = config.points().to_vec();
        let mut rng = SplitMix64::new(perm_seed);
        for i in (1..pts.len()).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            pts.swap(i, j);
        }
        let shuffled = Configuration::new(config.rect(), pts).unwrap();

        // the multiset of nearest-neighbor distances is exactly preserved
        let mut d0 = config.nn_summary().d;
        let mut d1 = shuffled.nn_summary().d;
        d0.sort_by(f64::total_cmp);
        d1.sort_by(f64::total_cmp);
        prop_assert_eq!(d0, d1);
        let (s0, s1) = (config.sigma(), shuffled.sigma());
        prop_assert!((s0 - s1).abs() <= 1e-12 * s0.max(1e-300));
    }

    #[test]
    fn distances_positive_and_within_diagonal(
        seed in any::<u64>(),
        n in 2..=12usize,
        aspect in 0.1..10.0f64,
    ) {
        let config = random_config(seed, n, aspect);
        let summary = config.nn_summary();
        let diag = config.rect().diag();
        for (i, &d) in summary.d.iter().enumerate() {
            prop_assert!(d > 0.0);
            prop_assert!(d <= diag + 1e-12);
            prop_assert!(summary.nearest[i] != i);
            let observed = config.points()[i].dist(config.points()[summary.nearest[i]]);
            prop_assert!((observed - d).abs() <= 1e-15 * diag.max(1.0));
        }
        let sum_sq: f64 = summary.d.iter().map(|d| d * d).sum();
        prop_assert!((sum_sq - summary.sigma).abs() <= 1e-12 * summary.sigma.max(1e-300));
    }

    #[test]
    fn quadrisection_partitions_points(
        seed in any::<u64>(),
        n in 2..=16usize,
        aspect in 0.2..5.0f64,
    ) {
        let config = random_config(seed, n, aspect);
        let q = config.quadrisect();
        prop_assert_eq!(q.counts().iter().sum::<usize>(), n);
        let (a, b) = (config.rect().a(), config.rect().b());
        let boxes = [
            (0.0, a / 2.0, 0.0, b / 2.0),
            (a / 2.0, a, 0.0, b / 2.0),
            (0.0, a / 2.0, b / 2.0, b),
            (a / 2.0, a, b / 2.0, b),
        ];
        for (group, (x_lo, x_hi, y_lo, y_hi)) in q.groups.iter().zip(boxes) {
            for p in group {
                prop_assert!(p.x >= x_lo - 1e-9 && p.x <= x_hi + 1e-9);
                prop_assert!(p.y >= y_lo - 1e-9 && p.y <= y_hi + 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1024))]

    #[test]
    fn s3_symmetric_and_homogeneous(
        a in 0.1..10.0f64,
        b in 0.1..10.0f64,
        lambda in 0.1..10.0f64,
    ) {
        let forward = s3(a, b).unwrap().value;
        let swapped = s3(b, a).unwrap().value;
        prop_assert!((forward - swapped).abs() <= 1e-12 * forward);

        let scaled = s3(lambda * a, lambda * b).unwrap().value;
        let expect = lambda * lambda * forward;
        prop_assert!((scaled - expect).abs() <= 1e-12 * expect.max(1.0));
    }

    #[test]
    fn s3_ratio_below_sup_and_piece_consistent(
        a in 0.1..10.0f64,
        b in 0.1..10.0f64,
    ) {
        let v = s3(a, b).unwrap();
        prop_assert!(v.value > 0.0);
        prop_assert!(v.value / (a * a + b * b) <= S3_RATIO_SUP + 1e-12);
        prop_assert!(v.value <= Rect::new(a, b).unwrap().theorem_bound());

        let bp = nn_extremal::s3_breakpoints();
        let r = v.ratio;
        let expected_piece = if r <= bp[0] {
            1
        } else if r <= bp[1] {
            2
        } else if r <= bp[2] {
            3
        } else if r <= bp[3] {
            4
        } else {
            5
        };
        prop_assert_eq!(v.piece, expected_piece);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn local_search_is_monotone_over_start(
        seed in any::<u64>(),
        n in 2..=6usize,
        aspect in 0.25..4.0f64,
    ) {
        let start = random_config(seed, n, aspect);
        let params = SearchParams {
            restarts: 1,
            min_step: 1e-5,
            max_iters: 60,
            seed,
            ..Default::default()
        };
        let report = local_search(&start, &params).unwrap();
        prop_assert!(report.best_value >= start.sigma() - 1e-12);
        prop_assert!(report.best_value <= start.rect().theorem_bound() + BOUND_SLACK);
    }

    #[test]
    fn slices_stay_bounded_and_continuous(
        seed in any::<u64>(),
        n in 2..=8usize,
        moving in 0..8usize,
        samples in 64..200usize,
    ) {
        let spec = SliceSpec {
            seed,
            n,
            moving_index: moving % n,
            samples,
            rect: Rect::unit_square(),
        };
        let rows = slice(&spec).unwrap();
        let bound = spec.rect.theorem_bound();
        // crude Lipschitz-style bound on the sample-to-sample change
        let lipschitz = 4.0 * n as f64 * spec.rect.diag();
        for window in rows.windows(2) {
            prop_assert!(window[0].sigma <= bound + BOUND_SLACK);
            let ds = window[1].s - window[0].s;
            let dsigma = (window[1].sigma - window[0].sigma).abs();
            prop_assert!(
                dsigma <= lipschitz * ds + 1e-9,
                "jump {dsigma} over ds {ds}"
            );
        }
    }
}
