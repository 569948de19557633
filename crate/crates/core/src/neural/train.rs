//! Minibatch Adagrad training with k-fold grid search and early stopping.
//!
//! Each grid point is scored by k-fold cross-validation. Within a fold the
//! network trains until the held-out loss has not improved for `patience`
//! epochs and is scored at its best epoch. Classification (binary
//! cross-entropy) selects the grid point with the highest mean F1 of the
//! rejection class; regression selects the lowest mean held-out MSE. The
//! winner is retrained on all data for the mean of its best-epoch counts.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Adagrad, Loss, NetShape, NeuralError, RecurrentNet};
use crate::harness::metrics::f1_score;
use crate::rng::{stream, GameRng};

/// One game: a feature vector and a target per trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceExample {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyper {
    pub hidden: usize,
    pub batch_size: usize,
    pub dropout: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainingConfig {
    pub loss: Loss,
    pub hidden_sizes: Vec<usize>,
    pub batch_sizes: Vec<usize>,
    pub dropouts: Vec<f64>,
    pub max_epochs: usize,
    pub patience: usize,
    /// Cross-validation folds; below 2 skips model selection and trains the
    /// first grid point on all data for `max_epochs`.
    pub folds: usize,
    pub learning_rate: f64,
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self::full_grid(Loss::BinaryCrossEntropy)
    }
}

impl TrainingConfig {
    /// The full search grid: hidden 64/128/256, batch 5..25, dropout 0.3..0.6.
    pub fn full_grid(loss: Loss) -> Self {
        TrainingConfig {
            loss,
            hidden_sizes: vec![64, 128, 256],
            batch_sizes: vec![5, 10, 15, 20, 25],
            dropouts: vec![0.3, 0.4, 0.5, 0.6],
            max_epochs: 100,
            patience: 10,
            folds: 5,
            learning_rate: 0.05,
            epsilon: 1e-8,
            seed: 0,
        }
    }

    /// A single grid point, still cross-validated for the epoch count.
    pub fn single(loss: Loss, hyper: Hyper) -> Self {
        TrainingConfig {
            hidden_sizes: vec![hyper.hidden],
            batch_sizes: vec![hyper.batch_size],
            dropouts: vec![hyper.dropout],
            ..Self::full_grid(loss)
        }
    }

    pub fn with_epochs(self, max_epochs: usize, patience: usize, folds: usize) -> Self {
        TrainingConfig {
            max_epochs,
            patience,
            folds,
            ..self
        }
    }

    pub fn grid(&self) -> Vec<Hyper> {
        let mut g = Vec::new();
        for &hidden in &self.hidden_sizes {
            for &batch_size in &self.batch_sizes {
                for &dropout in &self.dropouts {
                    g.push(Hyper {
                        hidden,
                        batch_size,
                        dropout,
                    });
                }
            }
        }
        g
    }

    fn validate(&self) -> Result<(), NeuralError> {
        let bad = |m: &str| Err(NeuralError::Config(m.to_string()));
        if self.grid().is_empty() {
            return bad("empty hyper-parameter grid");
        }
        if self.hidden_sizes.contains(&0) || self.batch_sizes.contains(&0) {
            return bad("hidden and batch sizes must be positive");
        }
        if self.dropouts.iter().any(|d| !(0.0..1.0).contains(d)) {
            return bad("dropout must lie in [0, 1)");
        }
        if self.max_epochs == 0 {
            return bad("max_epochs must be positive");
        }
        if self.learning_rate.is_nan() || self.learning_rate <= 0.0 {
            return bad("learning_rate must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub hyper: Hyper,
    /// Mean over folds of the selection metric.
    pub score: f64,
    pub fold_scores: Vec<f64>,
    pub best_epochs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochMetrics {
    pub epoch: usize,
    /// Mean loss per trial.
    pub train_loss: f64,
    pub validation_loss: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingReport {
    pub selected: Hyper,
    /// `rejection_f1` (higher is better) or `mse` (lower is better).
    pub selection_metric: String,
    pub cv: Vec<CvResult>,
    pub final_epochs: usize,
    pub history: Vec<EpochMetrics>,
}

struct Fit {
    net: RecurrentNet,
    best_epoch: usize,
    history: Vec<EpochMetrics>,
}

fn steps(data: &[&SequenceExample]) -> usize {
    data.iter().map(|s| s.targets.len()).sum::<usize>().max(1)
}

fn mean_loss(net: &RecurrentNet, data: &[&SequenceExample], loss: Loss) -> Result<f64, NeuralError> {
    let mut total = 0.0;
    for s in data {
        total += net.loss(&s.inputs, &s.targets, loss)?;
    }
    Ok(total / steps(data) as f64)
}

fn fit(
    shape: NetShape,
    train: &[&SequenceExample],
    validation: Option<&[&SequenceExample]>,
    hyper: Hyper,
    epochs: usize,
    config: &TrainingConfig,
    rng: &mut GameRng,
) -> Result<Fit, NeuralError> {
    let mut net = RecurrentNet::init(shape, rng);
    let mut opt = Adagrad::new(shape.param_count(), config.learning_rate, config.epsilon);
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut history = Vec::new();
    let mut best = (f64::INFINITY, 0usize, net.clone());
    let mut since_best = 0;
    let mut grad = vec![0.0; shape.param_count()];

    for epoch in 1..=epochs {
        order.shuffle(rng);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(hyper.batch_size) {
            grad.iter_mut().for_each(|g| *g = 0.0);
            let mut count = 0;
            for &i in batch {
                let ex = train[i];
                let trace = net.forward_trace(&ex.inputs, Some((hyper.dropout, &mut *rng)))?;
                let (l, g) = net.backward(&trace, &ex.targets, config.loss, 1.0)?;
                epoch_loss += l;
                count += ex.targets.len();
                for (a, b) in grad.iter_mut().zip(&g) {
                    *a += b;
                }
            }
            let scale = 1.0 / count.max(1) as f64;
            grad.iter_mut().for_each(|g| *g *= scale);
            opt.step(net.params_mut(), &grad);
        }
        let train_loss = epoch_loss / steps(train) as f64;
        if !train_loss.is_finite() {
            return Err(NeuralError::NonFinite(format!("training loss at epoch {epoch}")));
        }
        let validation_loss = match validation {
            Some(v) => Some(mean_loss(&net, v, config.loss)?),
            None => None,
        };
        history.push(EpochMetrics {
            epoch,
            train_loss,
            validation_loss,
        });
        if let Some(vl) = validation_loss {
            if vl < best.0 {
                best = (vl, epoch, net.clone());
                since_best = 0;
            } else {
                since_best += 1;
                if since_best >= config.patience {
                    break;
                }
            }
        }
    }
    if validation.is_some() {
        Ok(Fit {
            net: best.2,
            best_epoch: best.1,
            history,
        })
    } else {
        Ok(Fit {
            net,
            best_epoch: epochs,
            history,
        })
    }
}

fn score(net: &RecurrentNet, data: &[&SequenceExample], loss: Loss) -> Result<f64, NeuralError> {
    match loss {
        Loss::BinaryCrossEntropy => {
            let mut pred = Vec::new();
            let mut truth = Vec::new();
            for s in data {
                for (y, t) in net.forward(&s.inputs)?.into_iter().zip(&s.targets) {
                    pred.push(y >= 0.0);
                    truth.push(*t >= 0.5);
                }
            }
            Ok(f1_score(&pred, &truth, false))
        }
        Loss::MeanSquaredError => mean_loss(net, data, loss),
    }
}

fn check_data(data: &[SequenceExample], shape: NetShape, loss: Loss) -> Result<(), NeuralError> {
    if data.is_empty() {
        return Err(NeuralError::Degenerate("no training sequences".into()));
    }
    for (i, s) in data.iter().enumerate() {
        if s.inputs.len() != s.targets.len() {
            return Err(NeuralError::Shape(format!("sequence {i}: inputs and targets differ in length")));
        }
        if let Some(x) = s.inputs.iter().find(|x| x.len() != shape.input_dim()) {
            return Err(NeuralError::Shape(format!(
                "sequence {i}: vector of length {}, expected {}",
                x.len(),
                shape.input_dim()
            )));
        }
        if s.targets.iter().chain(s.inputs.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(NeuralError::NonFinite(format!("sequence {i}")));
        }
    }
    if loss == Loss::BinaryCrossEntropy {
        let mut seen = [false; 2];
        for t in data.iter().flat_map(|s| &s.targets) {
            if *t != 0.0 && *t != 1.0 {
                return Err(NeuralError::Degenerate(format!("classification target {t}")));
            }
            seen[usize::from(*t == 1.0)] = true;
        }
        if !(seen[0] && seen[1]) {
            return Err(NeuralError::Degenerate(
                "classification data contains a single class".into(),
            ));
        }
    }
    Ok(())
}

/// Trains a recurrent network on `data`, whose vectors are `sg_dim`
/// continuous features followed by `hc_dim` binary ones.
pub fn train(
    data: &[SequenceExample],
    sg_dim: usize,
    hc_dim: usize,
    config: &TrainingConfig,
) -> Result<(RecurrentNet, TrainingReport), NeuralError> {
    config.validate()?;
    let grid = config.grid();
    let shape_for = |h: usize| NetShape::new(sg_dim, hc_dim, h);
    check_data(data, shape_for(grid[0].hidden), config.loss)?;
    let metric = match config.loss {
        Loss::BinaryCrossEntropy => "rejection_f1",
        Loss::MeanSquaredError => "mse",
    };
    let all: Vec<&SequenceExample> = data.iter().collect();

    let folds = config.folds.min(data.len());
    if folds < 2 {
        let mut rng = stream(config.seed, 0, 0);
        let f = fit(shape_for(grid[0].hidden), &all, None, grid[0], config.max_epochs, config, &mut rng)?;
        return Ok((
            f.net,
            TrainingReport {
                selected: grid[0],
                selection_metric: metric.into(),
                cv: Vec::new(),
                final_epochs: config.max_epochs,
                history: f.history,
            },
        ));
    }

    let mut perm: Vec<usize> = (0..data.len()).collect();
    perm.shuffle(&mut stream(config.seed, u64::MAX, 0));
    let fold_of: Vec<usize> = {
        let mut f = vec![0; data.len()];
        for (pos, &i) in perm.iter().enumerate() {
            f[i] = pos % folds;
        }
        f
    };

    let mut cv = Vec::with_capacity(grid.len());
    for (gi, &hyper) in grid.iter().enumerate() {
        let fold_runs: Vec<Result<(f64, usize), NeuralError>> = (0..folds)
            .into_par_iter()
            .map(|k| {
                let tr: Vec<&SequenceExample> = (0..data.len()).filter(|&i| fold_of[i] != k).map(|i| &data[i]).collect();
                let va: Vec<&SequenceExample> = (0..data.len()).filter(|&i| fold_of[i] == k).map(|i| &data[i]).collect();
                let mut rng = stream(config.seed, gi as u64, k as u64 + 1);
                let f = fit(shape_for(hyper.hidden), &tr, Some(&va), hyper, config.max_epochs, config, &mut rng)?;
                Ok((score(&f.net, &va, config.loss)?, f.best_epoch))
            })
            .collect();
        let mut fold_scores = Vec::with_capacity(folds);
        let mut best_epochs = Vec::with_capacity(folds);
        for r in fold_runs {
            let (s, e) = r?;
            fold_scores.push(s);
            best_epochs.push(e);
        }
        cv.push(CvResult {
            hyper,
            score: fold_scores.iter().sum::<f64>() / folds as f64,
            fold_scores,
            best_epochs,
        });
    }

    let better = |a: f64, b: f64| match config.loss {
        Loss::BinaryCrossEntropy => a > b,
        Loss::MeanSquaredError => a < b,
    };
    let mut chosen = 0;
    for i in 1..cv.len() {
        if better(cv[i].score, cv[chosen].score) {
            chosen = i;
        }
    }
    let selected = cv[chosen].hyper;
    let mean_epochs =
        cv[chosen].best_epochs.iter().sum::<usize>() as f64 / cv[chosen].best_epochs.len() as f64;
    let final_epochs = (mean_epochs.round() as usize).clamp(1, config.max_epochs);
    let mut rng = stream(config.seed, u64::MAX - 1, 0);
    let f = fit(shape_for(selected.hidden), &all, None, selected, final_epochs, config, &mut rng)?;
    Ok((
        f.net,
        TrainingReport {
            selected,
            selection_metric: metric.into(),
            cv,
            final_epochs,
            history: f.history,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::sigmoid;
    use rand::Rng;

    /// Sequences where the target of each step is the sign of its first feature.
    fn separable(n: usize, seed: u64) -> Vec<SequenceExample> {
        let mut rng = crate::rng::seeded(seed);
        (0..n)
            .map(|_| {
                let mut inputs = Vec::new();
                let mut targets = Vec::new();
                for _ in 0..5 {
                    let label = rng.random_bool(0.5);
                    let v = if label { 1.0 } else { -1.0 } * rng.random_range(0.5..1.0);
                    inputs.push(vec![v, rng.random_range(-0.1..0.1), f64::from(u8::from(label))]);
                    targets.push(f64::from(u8::from(label)));
                }
                SequenceExample { inputs, targets }
            })
            .collect()
    }

    fn quick(loss: Loss) -> TrainingConfig {
        TrainingConfig {
            max_epochs: 40,
            folds: 1,
            seed: 3,
            learning_rate: 0.1,
            ..TrainingConfig::single(
                loss,
                Hyper {
                    hidden: 4,
                    batch_size: 5,
                    dropout: 0.0,
                },
            )
        }
    }

    #[test]
    fn separable_sequences_are_learned() {
        let data = separable(40, 1);
        let (net, _) = train(&data, 2, 1, &quick(Loss::BinaryCrossEntropy)).unwrap();
        let mut right = 0;
        let mut total = 0;
        for s in &data {
            for (y, t) in net.forward(&s.inputs).unwrap().iter().zip(&s.targets) {
                right += usize::from((sigmoid(*y) >= 0.5) == (*t == 1.0));
                total += 1;
            }
        }
        assert!(right as f64 / total as f64 >= 0.99, "{right}/{total}");
    }

    #[test]
    fn constant_regression_converges() {
        let data: Vec<SequenceExample> = (0..20)
            .map(|i| SequenceExample {
                inputs: vec![vec![f64::from(i) / 20.0, 0.5]; 4],
                targets: vec![3.0; 4],
            })
            .collect();
        let mut cfg = quick(Loss::MeanSquaredError);
        cfg.max_epochs = 200;
        cfg.learning_rate = 0.3;
        let (net, _) = train(&data, 2, 0, &cfg).unwrap();
        let mse: f64 = data
            .iter()
            .map(|s| net.loss(&s.inputs, &s.targets, Loss::MeanSquaredError).unwrap())
            .sum::<f64>()
            / 80.0;
        assert!(mse < 1e-3, "mse {mse}");
    }

    #[test]
    fn training_is_reproducible() {
        let data = separable(15, 2);
        let mut cfg = quick(Loss::BinaryCrossEntropy);
        cfg.dropouts = vec![0.3];
        cfg.max_epochs = 5;
        let (a, ra) = train(&data, 2, 1, &cfg).unwrap();
        let (b, rb) = train(&data, 2, 1, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(ra, rb);
    }

    #[test]
    fn cross_validation_selects_from_grid() {
        let data = separable(20, 4);
        let cfg = TrainingConfig {
            hidden_sizes: vec![2, 4],
            batch_sizes: vec![5],
            dropouts: vec![0.0],
            max_epochs: 8,
            patience: 3,
            folds: 3,
            learning_rate: 0.1,
            ..TrainingConfig::full_grid(Loss::BinaryCrossEntropy)
        };
        let (net, report) = train(&data, 2, 1, &cfg).unwrap();
        assert_eq!(report.cv.len(), 2);
        assert!(report.cv.iter().all(|c| c.fold_scores.len() == 3));
        assert_eq!(net.shape().hidden, report.selected.hidden);
        let best = report.cv.iter().map(|c| c.score).fold(f64::MIN, f64::max);
        assert_eq!(report.cv.iter().find(|c| c.hyper == report.selected).unwrap().score, best);
        assert_eq!(report.history.len(), report.final_epochs);
    }

    #[test]
    fn single_class_is_degenerate() {
        let data = vec![SequenceExample {
            inputs: vec![vec![0.0, 0.0, 0.0]],
            targets: vec![1.0],
        }];
        assert!(matches!(
            train(&data, 2, 1, &quick(Loss::BinaryCrossEntropy)),
            Err(NeuralError::Degenerate(_))
        ));
        assert!(matches!(
            train(&[], 2, 1, &quick(Loss::BinaryCrossEntropy)),
            Err(NeuralError::Degenerate(_))
        ));
    }
}
