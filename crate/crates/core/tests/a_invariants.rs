use circle_distortion::coarse::{phi, phi_inverse};
use circle_distortion::constructions::{prop2_pair, sup_grid_distance};
use circle_distortion::diffeo::Mobius;
use circle_distortion::distortion::classify_c1;
use circle_distortion::families::{
    random_circle_map, random_planted_hyperbolic, random_sine_composition, random_stabilizer, rng,
};
use circle_distortion::metrics::{d_1ac, distance, distance_to_identity, MetricOptions};
use circle_distortion::{DiffeoMap, Domain, MetricId};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn inverse_and_iterates_agree(seed in any::<u64>(), n in 1i64..6) {
        let f = random_circle_map(&mut rng(seed), 0.3).unwrap();
        let id = f.compose(&f.invert().unwrap()).unwrap();
        for j in 0..64 {
            let x = j as f64 / 64.0;
            let y = id.value(x).unwrap();
            prop_assert!((y - x - (y - x).round()).abs() < 1e-10);
        }
        let mut by_hand = DiffeoMap::identity(Domain::Circle);
        for _ in 0..n {
            by_hand = f.compose(&by_hand).unwrap();
        }
        prop_assert!(sup_grid_distance(&by_hand, &f.iterate(n).unwrap(), 256).unwrap() < 1e-10);
    }

    #[test]
    fn descriptor_round_trip_keeps_hash(seed in any::<u64>()) {
        let f = random_circle_map(&mut rng(seed), 0.3).unwrap();
        let g = DiffeoMap::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(f.descriptor_hash(), g.descriptor_hash());
        prop_assert_eq!(f.value(0.3).unwrap(), g.value(0.3).unwrap());
    }

    #[test]
    fn metric_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let maps: Vec<DiffeoMap> = (0..3).map(|_| random_circle_map(&mut r, 0.2).unwrap()).collect();
        let opts = MetricOptions::default();
        for id in [MetricId::C1Circle, MetricId::C1AC, MetricId::Uniform] {
            let d = |a: &DiffeoMap, b: &DiffeoMap| distance(id, a, b, &opts).unwrap().value;
            let (f, g, h) = (&maps[0], &maps[1], &maps[2]);
            prop_assert!(d(f, f) < 1e-12);
            prop_assert!((d(f, g) - d(g, f)).abs() < 1e-9);
            prop_assert!(d(f, h) <= d(f, g) + d(g, h) + 1e-9, "{id}");
        }
    }

    #[test]
    fn right_invariance(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_sine_composition(&mut r, Domain::Interval, 0.3).unwrap();
        let g = random_sine_composition(&mut r, Domain::Interval, 0.3).unwrap();
        let h = random_sine_composition(&mut r, Domain::Interval, 0.3).unwrap();
        let opts = MetricOptions::default();
        for id in [MetricId::C1Interval, MetricId::C1AC, MetricId::Uniform] {
            let base = distance(id, &f, &g, &opts).unwrap().value;
            let moved = distance(id, &f.compose(&h).unwrap(), &g.compose(&h).unwrap(), &opts).unwrap().value;
            prop_assert!((base - moved).abs() < 5e-3, "{id}: {base} vs {moved}");
        }
    }

    #[test]
    fn phi_is_an_isometry_for_d1ac(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_circle_map(&mut r, 0.2).unwrap();
        let g = random_circle_map(&mut r, 0.2).unwrap();
        let l1 = phi(&f).unwrap().l1_distance(&phi(&g).unwrap()).unwrap();
        let d = d_1ac(&f, &g).unwrap().value;
        prop_assert!((l1 - d).abs() < 1e-5 * d.max(1.0), "{l1} vs {d}");
    }

    #[test]
    fn phi_is_constant_on_rotation_cosets(seed in any::<u64>(), theta in 0.0f64..1.0) {
        let f = random_circle_map(&mut rng(seed), 0.2).unwrap();
        let rf = DiffeoMap::rotation(theta).compose(&f).unwrap();
        prop_assert!(phi(&f).unwrap().l1_distance(&phi(&rf).unwrap()).unwrap() < 1e-9);
        let back = phi_inverse(&phi(&rf).unwrap()).unwrap();
        prop_assert!(back.value(0.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn mean_value_anchor(seed in any::<u64>()) {
        // on [0, 1] some x has f'(x) = 1, so sup |log f'| ≤ ∫|f''/f'|
        let f = random_sine_composition(&mut rng(seed), Domain::Interval, 0.4).unwrap();
        let sup_log = (0..=4096)
            .map(|j| f.log_deriv(j as f64 / 4096.0).unwrap().abs())
            .fold(0.0, f64::max);
        let total = distance_to_identity(MetricId::C1AC, &f, &MetricOptions::default()).unwrap().value;
        prop_assert!(sup_log <= total + 1e-9);
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn subadditive_along_iterates(seed in any::<u64>()) {
        let f = random_circle_map(&mut rng(seed), 0.2).unwrap();
        let opts = MetricOptions::default();
        for id in [MetricId::C1Circle, MetricId::C1AC] {
            let d: Vec<f64> = (0..=4)
                .map(|n| distance_to_identity(id, &f.iterate(n).unwrap(), &opts).unwrap().value)
                .collect();
            for a in 1..=2 {
                for b in 1..=2 {
                    prop_assert!(d[a + b] <= d[a] + d[b] + 1e-6);
                }
            }
        }
    }

    #[test]
    fn classification_is_conjugacy_invariant(seed in any::<u64>(), pick in 0usize..4) {
        let mut r = rng(seed);
        let f = match pick {
            0 => DiffeoMap::rotation(0.25),
            1 => DiffeoMap::mobius(Mobius::new(1.0, 0.0, 0.0, 2.0).unwrap()),
            2 => prop2_pair().f,
            _ => random_planted_hyperbolic(&mut r, 1.0, 0.05).unwrap(),
        };
        let h = random_sine_composition(&mut r, Domain::Circle, 0.1).unwrap();
        let conj = h.compose(&f).unwrap().compose(&h.invert().unwrap()).unwrap();
        let a = classify_c1(&f, 1000).unwrap();
        let b = classify_c1(&conj, 1000).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.rotation.rational, b.rotation.rational);
    }

    #[test]
    fn stabilizers_round_trip_through_phi(seed in any::<u64>()) {
        let f = random_stabilizer(&mut rng(seed), 1.0).unwrap();
        let g = phi_inverse(&phi(&f).unwrap()).unwrap();
        prop_assert!(sup_grid_distance(&f, &g, 1024).unwrap() < 1e-8);
    }
}
