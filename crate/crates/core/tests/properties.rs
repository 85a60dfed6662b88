use moead_core::*;
use proptest::prelude::*;

fn point(m: usize) -> impl Strategy<Value = Vec<f64>> {
    // a coarse grid makes ties and duplicates common
    prop::collection::vec((0u8..8).prop_map(|v| v as f64 / 4.0), m)
}

fn points(m: usize, max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(point(m), 1..max)
}

fn sorted(mut v: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
    v
}

fn archive_from(pts: &[Vec<f64>]) -> UnboundedArchive<f64> {
    let mut a = UnboundedArchive::new();
    for (i, p) in pts.iter().enumerate() {
        a.insert(DecisionVector::new(vec![i as f64]), ObjectiveVector::new(p.clone()).unwrap());
    }
    a
}

proptest! {
    #[test]
    fn dominance_is_a_strict_partial_order(a in point(3), b in point(3), c in point(3)) {
        prop_assert!(!dominates(&a, &a).unwrap());
        if dominates(&a, &b).unwrap() {
            prop_assert!(!dominates(&b, &a).unwrap());
            if dominates(&b, &c).unwrap() {
                prop_assert!(dominates(&a, &c).unwrap());
            }
        }
    }

    #[test]
    fn archive_is_mutually_nondominated(pts in points(2, 60)) {
        let a = archive_from(&pts);
        let f: Vec<&ObjectiveVector<f64>> = a.objectives().collect();
        for (i, p) in f.iter().enumerate() {
            for (j, q) in f.iter().enumerate() {
                if i != j {
                    prop_assert!(!dominates(p, q).unwrap());
                    prop_assert_ne!(&p[..], &q[..]);
                }
            }
        }
    }

    #[test]
    fn archive_matches_filter_in_any_order(pts in points(3, 40), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let expected = sorted(nondominated_filter(&pts).unwrap());
        let mut shuffled = pts.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        for order in [pts, shuffled] {
            let got = sorted(archive_from(&order).snapshot().to_vectors());
            prop_assert_eq!(&got, &expected);
        }
    }

    #[test]
    fn filter_is_idempotent(pts in points(2, 50)) {
        let once = nondominated_filter(&pts).unwrap();
        let twice = nondominated_filter(&once).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn archive_ids_strictly_increase(pts in points(2, 40)) {
        let a = archive_from(&pts);
        let ids: Vec<u64> = a.entries().iter().map(|e| e.id).collect();
        prop_assert!(ids.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn tchebycheff_is_monotone_in_objectives(
        f in prop::collection::vec(0.0f64..2.0, 3),
        bump in prop::collection::vec(0.0f64..1.0, 3),
        raw in prop::collection::vec(0.0f64..1.0, 3),
    ) {
        prop_assume!(raw.iter().sum::<f64>() > 1e-3);
        let w = WeightVector::normalized(raw).unwrap();
        let z = [0.0; 3];
        let g: Vec<f64> = f.iter().zip(&bump).map(|(a, b)| a + b).collect();
        prop_assert!(tchebycheff(&g, &w, &z) >= tchebycheff(&f, &w, &z));
    }

    #[test]
    fn hypervolume_is_monotone_and_permutation_invariant(pts in points(3, 25), extra in point(3)) {
        let r = [2.5; 3];
        let base = hypervolume(&pts, &r).unwrap();
        let mut more = pts.clone();
        more.push(extra);
        prop_assert!(hypervolume(&more, &r).unwrap() >= base - 1e-12);
        let mut rev = pts.clone();
        rev.reverse();
        prop_assert!((hypervolume(&rev, &r).unwrap() - base).abs() < 1e-12);
        let nd = nondominated_filter(&pts).unwrap();
        prop_assert!((hypervolume(&nd, &r).unwrap() - base).abs() < 1e-12);
    }

    #[test]
    fn entropy_bounded_by_log_of_occupied_cells(
        pts in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), 1..80),
        grid in 1usize..40,
    ) {
        let bounds = [(0.0, 1.0), (0.0, 1.0)];
        let h = coverage_entropy(&pts, grid, &bounds).unwrap();
        let cap = (pts.len().min(grid * grid) as f64).log2();
        prop_assert!(h >= 0.0 && h <= cap + 1e-12);
    }

    #[test]
    fn sld_weights_sum_to_one(m in 2usize..5, h in 1usize..12) {
        let w = sld_weights::<f64>(m, h).unwrap();
        prop_assert_eq!(w.len(), sld_count(m, h));
        for v in &w {
            prop_assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        prop_assert_eq!(w.iter().filter(|v| v.is_edge()).count(), m);
    }
}
