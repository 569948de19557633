//! Back-propagation through time checked against central finite differences.

mod common;

use common::fd::{numeric_gradient, relative_error, TOLERANCE};

use persuasion::neural::{Loss, NetShape, RecurrentNet};
use persuasion::rng::seeded;
use rand::Rng;

#[test]
fn bptt_matches_finite_differences() {
    let mut rng = seeded(20_240_611);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let shape = NetShape::new(
            rng.random_range(1..=4),
            rng.random_range(0..=4),
            rng.random_range(1..=5),
        );
        let net = RecurrentNet::init(shape, &mut rng);
        let seq: Vec<Vec<f64>> = (0..3)
            .map(|_| {
                let mut x: Vec<f64> = (0..shape.sg_dim).map(|_| rng.random_range(-1.5..1.5)).collect();
                x.extend((0..shape.hc_dim).map(|_| f64::from(u8::from(rng.random_bool(0.5)))));
                x
            })
            .collect();
        let (loss, targets): (Loss, Vec<f64>) = if case % 2 == 0 {
            (Loss::BinaryCrossEntropy, (0..3).map(|_| f64::from(u8::from(rng.random_bool(0.5)))).collect())
        } else {
            (Loss::MeanSquaredError, (0..3).map(|_| rng.random_range(0.0..4.0)).collect())
        };
        let (_, analytic) = net.loss_and_gradient(&seq, &targets, loss, 1.0).unwrap();
        let numeric = numeric_gradient(&net, &seq, &targets, loss);
        for (i, (a, n)) in analytic.iter().zip(&numeric).enumerate() {
            let e = relative_error(*a, *n);
            worst = worst.max(e);
            assert!(e < TOLERANCE, "case {case} param {i}: analytic {a} numeric {n} rel {e}");
        }
    }
    eprintln!("worst relative error {worst:.3e}");
}
