//! Classification and regression metrics.

/// Fraction of positions where `pred == truth`; 0 for empty input.
pub fn accuracy(pred: &[bool], truth: &[bool]) -> f64 {
    assert_eq!(pred.len(), truth.len());
    if pred.is_empty() {
        return 0.0;
    }
    pred.iter().zip(truth).filter(|(p, t)| p == t).count() as f64 / pred.len() as f64
}

/// F1 of `class`. Zero when the class is never predicted nor present.
pub fn f1_score(pred: &[bool], truth: &[bool], class: bool) -> f64 {
    assert_eq!(pred.len(), truth.len());
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut fn_ = 0usize;
    for (&p, &t) in pred.iter().zip(truth) {
        match (p == class, t == class) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    let denom = 2 * tp + fp + fn_;
    if denom == 0 {
        0.0
    } else {
        2.0 * tp as f64 / denom as f64
    }
}

/// Mean of the per-class F1 scores of both classes.
pub fn macro_f1(pred: &[bool], truth: &[bool]) -> f64 {
    (f1_score(pred, truth, true) + f1_score(pred, truth, false)) / 2.0
}

/// Fraction of predictions that round to the integer target.
pub fn exact_accuracy(pred: &[f64], truth: &[f64]) -> f64 {
    assert_eq!(pred.len(), truth.len());
    if pred.is_empty() {
        return 0.0;
    }
    pred.iter().zip(truth).filter(|(p, t)| p.round() == **t).count() as f64 / pred.len() as f64
}

pub fn rmse(pred: &[f64], truth: &[f64]) -> f64 {
    assert_eq!(pred.len(), truth.len());
    if pred.is_empty() {
        return 0.0;
    }
    let sse: f64 = pred.iter().zip(truth).map(|(p, t)| (p - t).powi(2)).sum();
    (sse / pred.len() as f64).sqrt()
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// Pearson correlation; `None` when either side has zero variance or fewer
/// than two points.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    if x.len() < 2 {
        return None;
    }
    let (mx, my) = (mean(x), mean(y));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictions() {
        let t = [true, false, true];
        assert_eq!(accuracy(&t, &t), 1.0);
        assert_eq!(macro_f1(&t, &t), 1.0);
    }

    #[test]
    fn majority_predictor_on_72_28() {
        let truth: Vec<bool> = (0..100).map(|i| i < 72).collect();
        let pred = vec![true; 100];
        assert!((accuracy(&pred, &truth) - 0.72).abs() < 1e-12);
        // F1(accept) = 2*72 / (2*72 + 28) = 144/172; F1(reject) = 0.
        let oracle = (144.0 / 172.0) / 2.0;
        assert!((macro_f1(&pred, &truth) - oracle).abs() < 1e-12);
        assert!((macro_f1(&pred, &truth) - 0.4186).abs() < 1e-4);
    }

    #[test]
    fn ten_row_fixture() {
        // truth: A A A A A A R R R R ; pred: A A A A R R A R R R
        let truth = [true, true, true, true, true, true, false, false, false, false];
        let pred = [true, true, true, true, false, false, true, false, false, false];
        // accept: tp 4, fp 1, fn 2 -> 8/11 ; reject: tp 3, fp 2, fn 1 -> 6/9
        assert_eq!(accuracy(&pred, &truth), 0.7);
        assert!((f1_score(&pred, &truth, true) - 8.0 / 11.0).abs() < 1e-15);
        assert!((f1_score(&pred, &truth, false) - 6.0 / 9.0).abs() < 1e-15);
        assert!((macro_f1(&pred, &truth) - (8.0 / 11.0 + 6.0 / 9.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn regression_metrics() {
        assert_eq!(exact_accuracy(&[3.0, 1.0], &[3.0, 1.0]), 1.0);
        assert_eq!(rmse(&[3.0, 1.0], &[3.0, 1.0]), 0.0);
        assert_eq!(rmse(&[5.0, 5.0], &[4.0, 6.0]), 1.0);
        assert_eq!(exact_accuracy(&[5.0, 5.0], &[4.0, 6.0]), 0.0);
        assert_eq!(exact_accuracy(&[2.4, 2.6], &[2.0, 2.0]), 0.5);
    }

    #[test]
    fn pearson_cases() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]), None);
        // Hand computation: x = 1..5, y = 2,4,5,4,5 -> sxy 6, sxx 10, syy 6.
        let r = pearson(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 4.0, 5.0, 4.0, 5.0]).unwrap();
        assert!((r - 6.0 / 60.0f64.sqrt()).abs() < 1e-12);
    }
}
