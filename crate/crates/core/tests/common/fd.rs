//! Central finite differences for the recurrent network.

use persuasion::neural::{Loss, RecurrentNet};

pub const H: f64 = 1e-5;
pub const TOLERANCE: f64 = 1e-4;
/// Denominator floor: central differences at this step carry ~1e-10 of
/// rounding noise, so tinier gradients are compared absolutely.
pub const FLOOR: f64 = 1e-5;

pub fn numeric_gradient(net: &RecurrentNet, seq: &[Vec<f64>], targets: &[f64], loss: Loss) -> Vec<f64> {
    let mut probe = net.clone();
    (0..net.params().len())
        .map(|i| {
            let orig = probe.params()[i];
            probe.params_mut()[i] = orig + H;
            let up = probe.loss(seq, targets, loss).unwrap();
            probe.params_mut()[i] = orig - H;
            let down = probe.loss(seq, targets, loss).unwrap();
            probe.params_mut()[i] = orig;
            (up - down) / (2.0 * H)
        })
        .collect()
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(FLOOR)
}
