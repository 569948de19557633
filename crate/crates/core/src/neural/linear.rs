//! Regularised linear models on per-trial vectors: an L2 hinge-loss classifier
//! (full-batch subgradient descent with Adagrad) and ridge regression (closed
//! form). Features are standardised with training statistics.

use serde::{Deserialize, Serialize};

use super::{Adagrad, NeuralError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearObjective {
    /// Targets in {0, 1}; prediction is a signed margin.
    Hinge,
    /// Real targets; prediction is the fitted value.
    Squared,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LinearConfig {
    pub l2: f64,
    pub epochs: usize,
    pub learning_rate: f64,
}

impl Default for LinearConfig {
    fn default() -> Self {
        LinearConfig {
            l2: 1e-4,
            epochs: 300,
            learning_rate: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub objective: LinearObjective,
    mean: Vec<f64>,
    scale: Vec<f64>,
    weights: Vec<f64>,
    bias: f64,
}

impl LinearModel {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Margin for [`LinearObjective::Hinge`], value for [`LinearObjective::Squared`].
    pub fn predict(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim(), "input dimension");
        let mut acc = self.bias;
        for (((w, xi), m), sc) in self.weights.iter().zip(x).zip(&self.mean).zip(&self.scale) {
            acc += w * (xi - m) / sc;
        }
        acc
    }

    pub fn classify(&self, x: &[f64]) -> bool {
        self.predict(x) > 0.0
    }
}

fn standardise(rows: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let d = rows[0].len();
    let n = rows.len() as f64;
    let mut mean = vec![0.0; d];
    for r in rows {
        for (m, v) in mean.iter_mut().zip(r) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; d];
    for r in rows {
        for j in 0..d {
            var[j] += (r[j] - mean[j]).powi(2);
        }
    }
    let scale = var
        .into_iter()
        .map(|v| {
            let s = (v / n).sqrt();
            if s > 1e-12 {
                s
            } else {
                1.0
            }
        })
        .collect();
    (mean, scale)
}

/// Solves `a x = b` for symmetric positive-definite `a` (row-major, `n x n`).
fn cholesky_solve(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Result<Vec<f64>, NeuralError> {
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if d <= 0.0 {
            return Err(NeuralError::Degenerate("normal equations are singular".into()));
        }
        let d = d.sqrt();
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= a[i * n + k] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= a[k * n + i] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    Ok(b)
}

pub fn linear_model_train(
    rows: &[Vec<f64>],
    targets: &[f64],
    objective: LinearObjective,
    config: &LinearConfig,
) -> Result<LinearModel, NeuralError> {
    if rows.is_empty() {
        return Err(NeuralError::Degenerate("no training rows".into()));
    }
    if rows.len() != targets.len() {
        return Err(NeuralError::Shape("rows and targets differ in length".into()));
    }
    let d = rows[0].len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(NeuralError::Shape("rows differ in length".into()));
    }
    if rows.iter().flatten().chain(targets).any(|v| !v.is_finite()) {
        return Err(NeuralError::NonFinite("training rows".into()));
    }
    let (mean, scale) = standardise(rows);
    let z: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| (0..d).map(|j| (r[j] - mean[j]) / scale[j]).collect())
        .collect();
    let n = rows.len() as f64;

    let (weights, bias) = match objective {
        LinearObjective::Squared => {
            let y_mean = targets.iter().sum::<f64>() / n;
            let mut a = vec![0.0; d * d];
            let mut b = vec![0.0; d];
            for (r, &y) in z.iter().zip(targets) {
                for i in 0..d {
                    b[i] += r[i] * (y - y_mean) / n;
                    for j in 0..d {
                        a[i * d + j] += r[i] * r[j] / n;
                    }
                }
            }
            for i in 0..d {
                a[i * d + i] += config.l2.max(1e-10);
            }
            (cholesky_solve(a, b, d)?, y_mean)
        }
        LinearObjective::Hinge => {
            let labels: Vec<f64> = targets
                .iter()
                .map(|&t| if t >= 0.5 { 1.0 } else { -1.0 })
                .collect();
            if labels.iter().all(|&l| l == labels[0]) {
                return Err(NeuralError::Degenerate("single class".into()));
            }
            let mut params = vec![0.0; d + 1];
            let mut opt = Adagrad::new(d + 1, config.learning_rate, 1e-8);
            let mut grad = vec![0.0; d + 1];
            for _ in 0..config.epochs {
                for j in 0..d {
                    grad[j] = config.l2 * params[j];
                }
                grad[d] = 0.0;
                for (r, &y) in z.iter().zip(&labels) {
                    let m: f64 = r.iter().zip(&params).map(|(a, b)| a * b).sum::<f64>() + params[d];
                    if y * m < 1.0 {
                        for j in 0..d {
                            grad[j] -= y * r[j] / n;
                        }
                        grad[d] -= y / n;
                    }
                }
                opt.step(&mut params, &grad);
            }
            let bias = params[d];
            params.truncate(d);
            (params, bias)
        }
    };
    Ok(LinearModel {
        objective,
        mean,
        scale,
        weights,
        bias,
    })
}
