//! Single-layer LSTM over trial sequences with a scalar readout.
//!
//! Each input vector is `[sg ; hc]`. The binary `hc` block goes through a
//! dense projection and a sigmoid before it is concatenated with the
//! continuous `sg` block; the concatenation `u` is the LSTM input, and
//! dropout (training only) applies to `u`.
//!
//! ```text
//! p  = sigmoid(Wp hc + bp)
//! u  = [sg ; p]
//! z  = Wg [u ; h_prev] + bg          (gate blocks i, f, o, g)
//! c  = sigmoid(f) * c_prev + sigmoid(i) * tanh(g)
//! h  = sigmoid(o) * tanh(c)
//! y  = wo . h + bo
//! ```
//!
//! All parameters live in one flat vector so the optimiser and gradient
//! checks can treat them uniformly.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{sigmoid, Loss, NeuralError};

/// Dot product with eight independent accumulators, which lets the compiler
/// pipeline the additions instead of waiting on one running sum.
#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0; 8];
    let (ca, cb) = (a.chunks_exact(8), b.chunks_exact(8));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        let x: &[f64; 8] = x.try_into().expect("chunk of 8");
        let y: &[f64; 8] = y.try_into().expect("chunk of 8");
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    let tail: f64 = ra.iter().zip(rb).map(|(x, y)| x * y).sum();
    acc.iter().sum::<f64>() + tail
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetShape {
    /// Continuous inputs, fed as-is.
    pub sg_dim: usize,
    /// Binary inputs, projected and squashed.
    pub hc_dim: usize,
    /// Width of the HC projection; zero when `hc_dim` is zero.
    pub proj_dim: usize,
    pub hidden: usize,
}

impl NetShape {
    pub fn new(sg_dim: usize, hc_dim: usize, hidden: usize) -> Self {
        NetShape {
            sg_dim,
            hc_dim,
            proj_dim: hc_dim,
            hidden,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.sg_dim + self.hc_dim
    }

    fn lstm_in(&self) -> usize {
        self.sg_dim + self.proj_dim
    }

    fn layout(&self) -> Layout {
        let h = self.hidden;
        let wp = 0;
        let bp = wp + self.proj_dim * self.hc_dim;
        let wg = bp + self.proj_dim;
        let bg = wg + 4 * h * (self.lstm_in() + h);
        let wo = bg + 4 * h;
        let bo = wo + h;
        Layout {
            wp,
            bp,
            wg,
            bg,
            wo,
            bo,
            total: bo + 1,
        }
    }

    pub fn param_count(&self) -> usize {
        self.layout().total
    }
}

#[derive(Debug, Clone, Copy)]
struct Layout {
    wp: usize,
    bp: usize,
    wg: usize,
    bg: usize,
    wo: usize,
    bo: usize,
    total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrentNet {
    shape: NetShape,
    params: Vec<f64>,
}

/// Everything the backward pass needs from one forward pass.
#[derive(Debug, Clone)]
pub struct Trace {
    steps: Vec<StepCache>,
    pub outputs: Vec<f64>,
}

#[derive(Debug, Clone)]
struct StepCache {
    hc: Vec<f64>,
    proj: Vec<f64>,
    /// Dropout multipliers on `u`, empty when dropout is off.
    mask: Vec<f64>,
    /// `[u ; h_prev]` after dropout.
    xh: Vec<f64>,
    c_prev: Vec<f64>,
    gates: Vec<f64>,
    tanh_c: Vec<f64>,
}

impl RecurrentNet {
    pub fn zeros(shape: NetShape) -> Self {
        RecurrentNet {
            shape,
            params: vec![0.0; shape.param_count()],
        }
    }

    /// Uniform initialisation in `±1/sqrt(hidden)`, forget-gate bias 1.
    pub fn init<R: Rng + ?Sized>(shape: NetShape, rng: &mut R) -> Self {
        let mut net = Self::zeros(shape);
        let k = 1.0 / (shape.hidden.max(1) as f64).sqrt();
        for p in net.params.iter_mut() {
            *p = rng.random_range(-k..k);
        }
        let l = shape.layout();
        let h = shape.hidden;
        for v in &mut net.params[l.bg + h..l.bg + 2 * h] {
            *v = 1.0;
        }
        net
    }

    pub fn from_params(shape: NetShape, params: Vec<f64>) -> Result<Self, NeuralError> {
        if params.len() != shape.param_count() {
            return Err(NeuralError::Shape(format!(
                "expected {} parameters, got {}",
                shape.param_count(),
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(NeuralError::NonFinite("parameters".into()));
        }
        Ok(RecurrentNet { shape, params })
    }

    pub fn shape(&self) -> NetShape {
        self.shape
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    /// Readout bias.
    pub fn output_bias(&self) -> f64 {
        self.params[self.shape.layout().bo]
    }

    /// Length of the recurrent memory, `[h ; c]`.
    pub fn memory_len(&self) -> usize {
        2 * self.shape.hidden
    }

    fn check_input(&self, x: &[f64]) -> Result<(), NeuralError> {
        if x.len() != self.shape.input_dim() {
            return Err(NeuralError::Shape(format!(
                "input has {} features, network expects {}",
                x.len(),
                self.shape.input_dim()
            )));
        }
        Ok(())
    }

    /// Pre-activation output per timestep, without dropout.
    pub fn forward(&self, sequence: &[Vec<f64>]) -> Result<Vec<f64>, NeuralError> {
        let mut memory = Vec::new();
        let mut out = Vec::with_capacity(sequence.len());
        for x in sequence {
            self.check_input(x)?;
            let (y, next) = self.step(&memory, x);
            out.push(y);
            memory = next;
        }
        Ok(out)
    }

    /// One inference step. `memory` is `[h ; c]`, or empty for a fresh sequence.
    /// Panics if `x` has the wrong length.
    pub fn step(&self, memory: &[f64], x: &[f64]) -> (f64, Vec<f64>) {
        assert_eq!(x.len(), self.shape.input_dim(), "input dimension");
        let h = self.shape.hidden;
        let mut next = vec![0.0; 2 * h];
        let mut xh = vec![0.0; self.shape.lstm_in() + h];
        self.fill_input(x, &mut xh, None);
        if !memory.is_empty() {
            xh[self.shape.lstm_in()..].copy_from_slice(&memory[..h]);
        }
        let mut gates = vec![0.0; 4 * h];
        self.gates(&xh, &mut gates);
        let (hn, cn) = next.split_at_mut(h);
        for j in 0..h {
            let c_prev = if memory.is_empty() { 0.0 } else { memory[h + j] };
            let c = gates[h + j] * c_prev + gates[j] * gates[3 * h + j];
            cn[j] = c;
            hn[j] = gates[2 * h + j] * c.tanh();
        }
        (self.readout(hn), next)
    }

    /// Writes `[sg ; sigmoid(Wp hc + bp)]` into the front of `xh`; returns the projection.
    fn fill_input(&self, x: &[f64], xh: &mut [f64], proj_out: Option<&mut Vec<f64>>) {
        let s = self.shape;
        let l = s.layout();
        xh[..s.sg_dim].copy_from_slice(&x[..s.sg_dim]);
        let hc = &x[s.sg_dim..];
        let mut proj = vec![0.0; s.proj_dim];
        for (k, pk) in proj.iter_mut().enumerate() {
            let row = &self.params[l.wp + k * s.hc_dim..l.wp + (k + 1) * s.hc_dim];
            *pk = sigmoid(self.params[l.bp + k] + dot(row, hc));
        }
        xh[s.sg_dim..s.lstm_in()].copy_from_slice(&proj);
        if let Some(p) = proj_out {
            *p = proj;
        }
    }

    /// Activated gates `[i, f, o, g]` for input `xh`.
    fn gates(&self, xh: &[f64], gates: &mut [f64]) {
        let l = self.shape.layout();
        let h = self.shape.hidden;
        let width = xh.len();
        for (r, z) in gates.iter_mut().enumerate() {
            let row = &self.params[l.wg + r * width..l.wg + (r + 1) * width];
            let acc = dot(row, xh);
            let pre = acc + self.params[l.bg + r];
            *z = if r < 3 * h { sigmoid(pre) } else { pre.tanh() };
        }
    }

    fn readout(&self, h: &[f64]) -> f64 {
        let l = self.shape.layout();
        let wo = &self.params[l.wo..l.wo + self.shape.hidden];
        dot(wo, h) + self.params[l.bo]
    }

    /// Forward pass that keeps activations for [`RecurrentNet::backward`].
    /// `dropout` is `(rate, rng)`; `None` disables it.
    pub fn forward_trace<R: Rng + ?Sized>(
        &self,
        sequence: &[Vec<f64>],
        mut dropout: Option<(f64, &mut R)>,
    ) -> Result<Trace, NeuralError> {
        let s = self.shape;
        let h = s.hidden;
        let n_in = s.lstm_in();
        let mut h_prev = vec![0.0; h];
        let mut c_prev = vec![0.0; h];
        let mut steps = Vec::with_capacity(sequence.len());
        let mut outputs = Vec::with_capacity(sequence.len());
        for x in sequence {
            self.check_input(x)?;
            let mut xh = vec![0.0; n_in + h];
            let mut proj = Vec::new();
            self.fill_input(x, &mut xh, Some(&mut proj));
            let mut mask = Vec::new();
            if let Some((rate, rng)) = dropout.as_mut() {
                if *rate > 0.0 {
                    let keep = 1.0 / (1.0 - *rate);
                    mask = (0..n_in)
                        .map(|_| if rng.random::<f64>() < *rate { 0.0 } else { keep })
                        .collect();
                    for (v, m) in xh[..n_in].iter_mut().zip(&mask) {
                        *v *= m;
                    }
                }
            }
            xh[n_in..].copy_from_slice(&h_prev);
            let mut gates = vec![0.0; 4 * h];
            self.gates(&xh, &mut gates);
            let mut c = vec![0.0; h];
            let mut tanh_c = vec![0.0; h];
            let mut hn = vec![0.0; h];
            for j in 0..h {
                c[j] = gates[h + j] * c_prev[j] + gates[j] * gates[3 * h + j];
                tanh_c[j] = c[j].tanh();
                hn[j] = gates[2 * h + j] * tanh_c[j];
            }
            outputs.push(self.readout(&hn));
            steps.push(StepCache {
                hc: x[s.sg_dim..].to_vec(),
                proj,
                mask,
                xh,
                c_prev: std::mem::replace(&mut c_prev, c),
                gates,
                tanh_c,
            });
            h_prev = hn;
        }
        Ok(Trace { steps, outputs })
    }

    /// Back-propagation through time of `weight * sum_t loss(y_t, target_t)`.
    /// Returns `(loss, gradient)` with the gradient laid out like the parameters.
    pub fn backward(
        &self,
        trace: &Trace,
        targets: &[f64],
        loss: Loss,
        weight: f64,
    ) -> Result<(f64, Vec<f64>), NeuralError> {
        if targets.len() != trace.outputs.len() {
            return Err(NeuralError::Shape(format!(
                "{} targets for {} outputs",
                targets.len(),
                trace.outputs.len()
            )));
        }
        let s = self.shape;
        let l = s.layout();
        let h = s.hidden;
        let n_in = s.lstm_in();
        let width = n_in + h;
        let mut grad = vec![0.0; l.total];
        let mut total = 0.0;
        let mut dh_next = vec![0.0; h];
        let mut dc_next = vec![0.0; h];
        let mut dz = vec![0.0; 4 * h];
        let mut dxh = vec![0.0; width];

        for (t, step) in trace.steps.iter().enumerate().rev() {
            let y = trace.outputs[t];
            total += weight * loss.value(y, targets[t]);
            let dy = weight * loss.derivative(y, targets[t]);
            let g = &step.gates;
            // h_t = o * tanh(c)
            let mut dh = dh_next.clone();
            for j in 0..h {
                let h_t = g[2 * h + j] * step.tanh_c[j];
                grad[l.wo + j] += dy * h_t;
                dh[j] += dy * self.params[l.wo + j];
            }
            grad[l.bo] += dy;
            for j in 0..h {
                let (i, f, o, gg) = (g[j], g[h + j], g[2 * h + j], g[3 * h + j]);
                let tc = step.tanh_c[j];
                let dc = dh[j] * o * (1.0 - tc * tc) + dc_next[j];
                dz[j] = dc * gg * i * (1.0 - i);
                dz[h + j] = dc * step.c_prev[j] * f * (1.0 - f);
                dz[2 * h + j] = dh[j] * tc * o * (1.0 - o);
                dz[3 * h + j] = dc * i * (1.0 - gg * gg);
                dc_next[j] = dc * f;
            }
            dxh.iter_mut().for_each(|v| *v = 0.0);
            for (r, &d) in dz.iter().enumerate() {
                if d == 0.0 {
                    continue;
                }
                grad[l.bg + r] += d;
                let row = l.wg + r * width;
                for k in 0..width {
                    grad[row + k] += d * step.xh[k];
                    dxh[k] += d * self.params[row + k];
                }
            }
            dh_next.copy_from_slice(&dxh[n_in..]);
            // Through dropout and the HC projection.
            for k in 0..s.proj_dim {
                let mut du = dxh[s.sg_dim + k];
                if !step.mask.is_empty() {
                    du *= step.mask[s.sg_dim + k];
                }
                let p = step.proj[k];
                let dpre = du * p * (1.0 - p);
                if dpre == 0.0 {
                    continue;
                }
                grad[l.bp + k] += dpre;
                let row = l.wp + k * s.hc_dim;
                for (m, &v) in step.hc.iter().enumerate() {
                    grad[row + m] += dpre * v;
                }
            }
        }
        if !total.is_finite() {
            return Err(NeuralError::NonFinite(format!(
                "loss is {total} over a sequence of {} steps",
                trace.outputs.len()
            )));
        }
        Ok((total, grad))
    }

    /// Loss and gradient for one sequence without dropout.
    pub fn loss_and_gradient(
        &self,
        sequence: &[Vec<f64>],
        targets: &[f64],
        loss: Loss,
        weight: f64,
    ) -> Result<(f64, Vec<f64>), NeuralError> {
        let trace = self.forward_trace::<rand_chacha::ChaCha8Rng>(sequence, None)?;
        self.backward(&trace, targets, loss, weight)
    }

    /// Summed loss without dropout.
    pub fn loss(&self, sequence: &[Vec<f64>], targets: &[f64], loss: Loss) -> Result<f64, NeuralError> {
        let out = self.forward(sequence)?;
        Ok(out
            .iter()
            .zip(targets)
            .map(|(&y, &t)| loss.value(y, t))
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn random_seq<R: Rng>(shape: NetShape, len: usize, rng: &mut R) -> Vec<Vec<f64>> {
        (0..len)
            .map(|_| {
                let mut x: Vec<f64> = (0..shape.sg_dim).map(|_| rng.random_range(-1.0..1.0)).collect();
                x.extend((0..shape.hc_dim).map(|_| f64::from(u8::from(rng.random_bool(0.5)))));
                x
            })
            .collect()
    }

    #[test]
    fn zero_weights_output_readout_bias() {
        let shape = NetShape::new(3, 4, 5);
        let mut net = RecurrentNet::zeros(shape);
        let l = shape.layout();
        net.params[l.bo] = 0.37;
        let mut rng = seeded(1);
        let out = net.forward(&random_seq(shape, 4, &mut rng)).unwrap();
        assert!(out.iter().all(|&y| y == 0.37));
    }

    #[test]
    fn zeroed_gates_forget_the_prefix() {
        // With zero gate weights and biases, i = f = o = 1/2 and g = 0, so the
        // cell state stays 0 and nothing from earlier steps reaches the output.
        let shape = NetShape::new(2, 2, 3);
        let mut rng = seeded(2);
        let mut net = RecurrentNet::init(shape, &mut rng);
        let l = shape.layout();
        for v in &mut net.params[l.wg..l.wo] {
            *v = 0.0;
        }
        let x = vec![0.3, -0.2, 1.0, 0.0];
        let single = net.forward(std::slice::from_ref(&x)).unwrap();
        let prefixed = net.forward(&[vec![5.0, 5.0, 1.0, 1.0], x]).unwrap();
        assert_eq!(single[0], prefixed[1]);
        assert_eq!(single[0], net.output_bias());
    }

    #[test]
    fn inference_is_bitwise_deterministic() {
        let shape = NetShape::new(4, 3, 6);
        let mut rng = seeded(3);
        let net = RecurrentNet::init(shape, &mut rng);
        let seq = random_seq(shape, 5, &mut rng);
        assert_eq!(net.forward(&seq).unwrap(), net.forward(&seq).unwrap());
        let traced = net.forward_trace::<rand_chacha::ChaCha8Rng>(&seq, None).unwrap();
        assert_eq!(traced.outputs, net.forward(&seq).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let net = RecurrentNet::zeros(NetShape::new(2, 2, 2));
        assert!(matches!(net.forward(&[vec![0.0; 3]]), Err(NeuralError::Shape(_))));
    }

    #[test]
    fn unused_projection_has_zero_gradient() {
        let shape = NetShape::new(3, 4, 4);
        let mut rng = seeded(4);
        let net = RecurrentNet::init(shape, &mut rng);
        let seq: Vec<Vec<f64>> = (0..3)
            .map(|_| vec![rng.random(), rng.random(), rng.random(), 0.0, 0.0, 0.0, 0.0])
            .collect();
        let (_, g) = net
            .loss_and_gradient(&seq, &[1.0, 0.0, 1.0], Loss::BinaryCrossEntropy, 1.0)
            .unwrap();
        let l = shape.layout();
        assert!(g[l.wp..l.bp].iter().all(|&v| v == 0.0));
        assert!(g[l.wg..l.wo].iter().any(|&v| v != 0.0));
    }

    #[test]
    fn doubling_weight_doubles_gradient() {
        let shape = NetShape::new(3, 2, 4);
        let mut rng = seeded(5);
        let net = RecurrentNet::init(shape, &mut rng);
        let seq = random_seq(shape, 3, &mut rng);
        let t = [0.5, 2.0, -1.0];
        let (l1, g1) = net.loss_and_gradient(&seq, &t, Loss::MeanSquaredError, 1.0).unwrap();
        let (l2, g2) = net.loss_and_gradient(&seq, &t, Loss::MeanSquaredError, 2.0).unwrap();
        assert_eq!(l2, 2.0 * l1);
        for (a, b) in g1.iter().zip(&g2) {
            assert_eq!(*b, 2.0 * a);
        }
    }

    #[test]
    fn non_finite_loss_is_reported() {
        let shape = NetShape::new(1, 0, 2);
        let mut net = RecurrentNet::zeros(shape);
        let l = shape.layout();
        net.params[l.bo] = f64::INFINITY;
        let r = net.loss_and_gradient(&[vec![0.0]], &[0.0], Loss::MeanSquaredError, 1.0);
        assert!(matches!(r, Err(NeuralError::NonFinite(_))));
    }

    #[test]
    fn step_matches_forward() {
        let shape = NetShape::new(3, 3, 5);
        let mut rng = seeded(6);
        let net = RecurrentNet::init(shape, &mut rng);
        let seq = random_seq(shape, 4, &mut rng);
        let full = net.forward(&seq).unwrap();
        let mut mem = Vec::new();
        for (x, want) in seq.iter().zip(full) {
            let (y, next) = net.step(&mem, x);
            assert_eq!(y, want);
            mem = next;
        }
        assert_eq!(mem.len(), net.memory_len());
    }
}
