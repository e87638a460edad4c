//! Property tests for the structural invariants: CSV round trips, one-label
//! corruption, linearity, loss shape (nonnegativity, convexity, the
//! Huber/squared envelope) and monotone logistic decay.

use proptest::prelude::*;

use erm_core::{
    load_csv, loss_value, save_plot_csv, Dataset, FeatureVector, Hypothesis, LabelSpace,
    LabeledPoint, LinearHypothesis, LossKind,
};

fn finite_value() -> impl Strategy<Value = f64> {
    // Magnitudes that survive CSV printing and arithmetic comfortably.
    prop_oneof![
        -1e6..1e6f64,
        Just(0.0),
        Just(1.0),
        Just(-1.0),
        -1e-6..1e-6f64,
    ]
}

fn dataset_1d() -> impl Strategy<Value = Dataset> {
    prop::collection::vec((finite_value(), finite_value()), 1..40).prop_map(|rows| {
        let points = rows
            .into_iter()
            .map(|(x, y)| {
                LabeledPoint::new(FeatureVector::from_slice(&[x]).unwrap(), y).unwrap()
            })
            .collect();
        Dataset::new(points, LabelSpace::Real).unwrap()
    })
}

proptest! {
    #[test]
    fn plot_csv_round_trips_bit_exactly(dataset in dataset_1d()) {
        let predictions = vec![0.5; dataset.len()];
        let file = tempfile::NamedTempFile::new().unwrap();
        save_plot_csv(file.path(), &dataset, &predictions).unwrap();
        let loaded = load_csv(file.path(), LabelSpace::Real).unwrap();
        prop_assert_eq!(loaded.len(), dataset.len());
        for (a, b) in loaded.points().iter().zip(dataset.points()) {
            prop_assert_eq!(
                a.features().as_slice()[0].to_bits(),
                b.features().as_slice()[0].to_bits()
            );
            prop_assert_eq!(a.label().to_bits(), b.label().to_bits());
        }
    }

    #[test]
    fn corruption_touches_exactly_one_label(
        dataset in dataset_1d(),
        index_seed in any::<prop::sample::Index>(),
        new_label in finite_value(),
    ) {
        let index = index_seed.index(dataset.len());
        let corrupted = dataset.corrupt_point(index, new_label).unwrap();
        prop_assert_eq!(corrupted.points()[index].label().to_bits(), new_label.to_bits());
        for (j, (a, b)) in corrupted.points().iter().zip(dataset.points()).enumerate() {
            if j != index {
                prop_assert_eq!(a.label().to_bits(), b.label().to_bits());
            }
            prop_assert_eq!(
                a.features().as_slice()[0].to_bits(),
                b.features().as_slice()[0].to_bits()
            );
        }
    }

    #[test]
    fn linear_prediction_is_linear(
        w in prop::collection::vec(-10.0..10.0f64, 1..6),
        alpha in -5.0..5.0f64,
        beta in -5.0..5.0f64,
        seed in any::<u64>(),
    ) {
        let n = w.len();
        let mut rng = erm_core::rng::SplitMix64::new(seed);
        let x: Vec<f64> = (0..n).map(|_| rng.uniform(-10.0, 10.0)).collect();
        let x2: Vec<f64> = (0..n).map(|_| rng.uniform(-10.0, 10.0)).collect();
        let h = LinearHypothesis::new(FeatureVector::from_slice(&w).unwrap());

        let combo: Vec<f64> = x.iter().zip(&x2).map(|(a, b)| alpha * a + beta * b).collect();
        let lhs = h.predict(&FeatureVector::from_slice(&combo).unwrap()).unwrap();
        let rhs = alpha * h.predict(&FeatureVector::from_slice(&x).unwrap()).unwrap()
            + beta * h.predict(&FeatureVector::from_slice(&x2).unwrap()).unwrap();
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
    }

    #[test]
    fn huber_never_exceeds_half_squared(
        y in -100.0..100.0f64,
        yhat in -100.0..100.0f64,
        c in 0.01..50.0f64,
    ) {
        let huber = loss_value(LossKind::Huber(c), y, yhat).unwrap();
        let squared = loss_value(LossKind::SquaredError, y, yhat).unwrap();
        let r = (y - yhat).abs();
        if r <= c {
            prop_assert_eq!(huber.to_bits(), (squared / 2.0).to_bits());
        } else {
            prop_assert!(huber < squared / 2.0);
        }
    }

    #[test]
    fn losses_are_nonnegative_and_zero_seeking(
        y in -50.0..50.0f64,
        yhat in -50.0..50.0f64,
        c in 0.01..10.0f64,
    ) {
        let squared = loss_value(LossKind::SquaredError, y, yhat).unwrap();
        let huber = loss_value(LossKind::Huber(c), y, yhat).unwrap();
        prop_assert!(squared >= 0.0 && huber >= 0.0);
        if y == yhat {
            prop_assert_eq!(squared, 0.0);
            prop_assert_eq!(huber, 0.0);
        } else {
            prop_assert!(squared > 0.0);
            prop_assert!(huber > 0.0);
        }
        prop_assert_eq!(loss_value(LossKind::SquaredError, y, y).unwrap(), 0.0);
        prop_assert_eq!(loss_value(LossKind::Huber(c), y, y).unwrap(), 0.0);

        let label = if y >= 0.0 { 1.0 } else { -1.0 };
        let logistic = loss_value(LossKind::Logistic, label, yhat).unwrap();
        prop_assert!(logistic >= 0.0);
    }

    #[test]
    fn losses_are_convex_in_the_prediction(
        y in -20.0..20.0f64,
        a in -20.0..20.0f64,
        b in -20.0..20.0f64,
        lambda in 0.0..1.0f64,
        c in 0.01..10.0f64,
    ) {
        let mid = lambda * a + (1.0 - lambda) * b;
        for kind in [LossKind::SquaredError, LossKind::Huber(c)] {
            let chord = lambda * loss_value(kind, y, a).unwrap()
                + (1.0 - lambda) * loss_value(kind, y, b).unwrap();
            let at_mid = loss_value(kind, y, mid).unwrap();
            prop_assert!(chord >= at_mid - 1e-12 * chord.abs().max(1.0));
        }
        let label = if y >= 0.0 { 1.0 } else { -1.0 };
        let chord = lambda * loss_value(LossKind::Logistic, label, a).unwrap()
            + (1.0 - lambda) * loss_value(LossKind::Logistic, label, b).unwrap();
        let at_mid = loss_value(LossKind::Logistic, label, mid).unwrap();
        prop_assert!(chord >= at_mid - 1e-12 * chord.abs().max(1.0));
    }

    #[test]
    fn logistic_loss_strictly_decreases_in_the_margin(
        t1 in -100.0..100.0f64,
        gap in 0.001..10.0f64,
    ) {
        // Larger y * yhat means smaller loss; exercised via y = +1.
        let t2 = t1 + gap;
        let l1 = loss_value(LossKind::Logistic, 1.0, t1).unwrap();
        let l2 = loss_value(LossKind::Logistic, 1.0, t2).unwrap();
        prop_assert!(l2 < l1, "loss({t2}) = {l2} !< loss({t1}) = {l1}");
    }

    #[test]
    fn identity_ann_collapses_to_composed_linear_weights(
        hidden in prop::collection::vec(-2.0..2.0f64, 6),
        output in prop::collection::vec(-2.0..2.0f64, 3),
        x1 in -10.0..10.0f64,
        x2 in -10.0..10.0f64,
    ) {
        let mut weights = hidden.clone();
        weights.extend_from_slice(&output);
        let ann = erm_core::AnnHypothesis::new(
            vec![2, 3, 1],
            erm_core::Activation::Identity,
            weights,
        )
        .unwrap();
        // Composed weight vector: out.W_hidden.
        let c1 = output[0] * hidden[0] + output[1] * hidden[2] + output[2] * hidden[4];
        let c2 = output[0] * hidden[1] + output[1] * hidden[3] + output[2] * hidden[5];
        let linear = Hypothesis::Linear(LinearHypothesis::new(
            FeatureVector::from_slice(&[c1, c2]).unwrap(),
        ));
        let x = FeatureVector::from_slice(&[x1, x2]).unwrap();
        let a = ann.forward(&x).unwrap();
        let b = linear.predict(&x).unwrap();
        let scale = a.abs().max(b.abs()).max(1.0);
        prop_assert!((a - b).abs() <= 1e-12 * scale);
    }

    #[test]
    fn hypothesis_text_format_round_trips(
        w in prop::collection::vec(-100.0..100.0f64, 1..10),
    ) {
        let h = Hypothesis::Linear(LinearHypothesis::new(
            FeatureVector::from_slice(&w).unwrap(),
        ));
        prop_assert_eq!(Hypothesis::decode(&h.encode()).unwrap(), h);
    }
}
