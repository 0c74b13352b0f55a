//! Full-batch regression of a circuit model onto a top-hat pulse using
//! parameter-shift gradients and Adam.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arch::{ArchitectureSpec, ParamVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Dataset {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::invalid(format!(
                "xs has {} entries but ys has {}",
                xs.len(),
                ys.len()
            )));
        }
        if xs.is_empty() {
            return Err(Error::invalid("dataset is empty"));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("xs must be strictly increasing"));
        }
        if ys.iter().any(|y| !(y.abs() <= 1.0)) {
            return Err(Error::invalid("targets must lie in [-1, 1]"));
        }
        Ok(Self { xs, ys })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// Top-hat target at grid index `j` of `n` points over `[0, 2π)`: 1 on
/// `[π/2, 3π/2)`, else 0. Decided in integer arithmetic so that grid points
/// on the pulse edges are classified exactly.
pub fn top_hat_value(j: usize, n: usize) -> f64 {
    if 4 * j >= n && 4 * j < 3 * n {
        1.0
    } else {
        0.0
    }
}

/// `num_points` equally spaced samples `x_j = 2πj/N` of the top-hat pulse.
pub fn top_hat_dataset(num_points: usize) -> Result<Dataset> {
    if num_points < 2 {
        return Err(Error::invalid("top-hat dataset needs at least 2 points"));
    }
    let xs = (0..num_points).map(|j| TAU * j as f64 / num_points as f64).collect();
    let ys = (0..num_points).map(|j| top_hat_value(j, num_points)).collect();
    Dataset::new(xs, ys)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_epsilon: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 200,
            learning_rate: 0.1,
            seed: 0,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_epsilon: 1e-8,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::invalid(format!("learning_rate must be positive, got {}", self.learning_rate)));
        }
        for (name, b) in [("adam_beta1", self.adam_beta1), ("adam_beta2", self.adam_beta2)] {
            if !(b > 0.0 && b < 1.0) {
                return Err(Error::invalid(format!("{name} must lie in (0, 1), got {b}")));
            }
        }
        if !(self.adam_epsilon > 0.0) {
            return Err(Error::invalid(format!("adam_epsilon must be positive, got {}", self.adam_epsilon)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainResult {
    pub spec: ArchitectureSpec,
    pub config: TrainConfig,
    /// Loss of the initial parameters.
    pub initial_loss: f64,
    /// Loss after each epoch's update.
    pub loss_history: Vec<f64>,
    pub final_params: ParamVector,
    /// Last entry of `loss_history`, or `initial_loss` when no epoch ran.
    pub final_loss: f64,
}

pub fn mean_squared_error(predictions: &[f64], targets: &[f64]) -> f64 {
    let sum: f64 = predictions.iter().zip(targets).map(|(p, y)| (p - y).powi(2)).sum();
    sum / targets.len() as f64
}

fn predictions(spec: &ArchitectureSpec, params: &ParamVector, data: &Dataset) -> Result<Vec<f64>> {
    data.xs().iter().map(|&x| spec.evaluate(params, x)).collect()
}

pub fn mse_loss(spec: &ArchitectureSpec, params: &ParamVector, data: &Dataset) -> Result<f64> {
    Ok(mean_squared_error(&predictions(spec, params, data)?, data.ys()))
}

/// `∂L/∂θ_j` of the MSE, with each `∂f/∂θ_j` taken by the two-term shift rule
/// `[f(θ_j + π/2) − f(θ_j − π/2)] / 2`, exact for Pauli rotations.
pub fn parameter_shift_gradient(spec: &ArchitectureSpec, params: &ParamVector, data: &Dataset) -> Result<Vec<f64>> {
    let preds = predictions(spec, params, data)?;
    gradient_from_predictions(spec, params, data, &preds)
}

fn gradient_from_predictions(
    spec: &ArchitectureSpec,
    params: &ParamVector,
    data: &Dataset,
    preds: &[f64],
) -> Result<Vec<f64>> {
    let scale = 2.0 / data.len() as f64;
    (0..params.len())
        .into_par_iter()
        .map(|j| {
            let mut plus = params.clone();
            plus.values_mut()[j] += FRAC_PI_2;
            let mut minus = params.clone();
            minus.values_mut()[j] -= FRAC_PI_2;
            let mut acc = 0.0;
            for ((&x, &y), &f) in data.xs().iter().zip(data.ys()).zip(preds) {
                let df = (spec.evaluate(&plus, x)? - spec.evaluate(&minus, x)?) / 2.0;
                acc += (f - y) * df;
            }
            Ok(scale * acc)
        })
        .collect()
}

/// First and second moment estimates plus the step counter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        Self { m: vec![0.0; len], v: vec![0.0; len], t: 0 }
    }
}

/// One bias-corrected Adam update.
pub fn adam_step(
    state: &AdamState,
    params: &ParamVector,
    gradient: &[f64],
    config: &TrainConfig,
) -> Result<(AdamState, ParamVector)> {
    let n = params.len();
    if gradient.len() != n || state.m.len() != n || state.v.len() != n {
        return Err(Error::invalid(format!(
            "shape mismatch: params {n}, gradient {}, moments {}/{}",
            gradient.len(),
            state.m.len(),
            state.v.len()
        )));
    }
    let (b1, b2) = (config.adam_beta1, config.adam_beta2);
    let t = state.t + 1;
    let c1 = 1.0 - b1.powi(t as i32);
    let c2 = 1.0 - b2.powi(t as i32);
    let mut next = AdamState { m: Vec::with_capacity(n), v: Vec::with_capacity(n), t };
    let mut new_params = Vec::with_capacity(n);
    for (((&p, &g), &m), &v) in params.values().iter().zip(gradient).zip(&state.m).zip(&state.v) {
        let m = b1 * m + (1.0 - b1) * g;
        let v = b2 * v + (1.0 - b2) * g * g;
        let m_hat = m / c1;
        let v_hat = v / c2;
        new_params.push(p - config.learning_rate * m_hat / (v_hat.sqrt() + config.adam_epsilon));
        next.m.push(m);
        next.v.push(v);
    }
    Ok((next, ParamVector::new(new_params)))
}

/// Parameters uniform in `[0, 2π)` from `config.seed`, then `config.epochs`
/// full-batch Adam steps.
pub fn train(spec: &ArchitectureSpec, config: &TrainConfig, data: &Dataset) -> Result<TrainResult> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut params = spec.random_params(&mut rng);
    let mut preds = predictions(spec, &params, data)?;
    let initial_loss = mean_squared_error(&preds, data.ys());
    let mut opt = AdamState::new(params.len());
    let mut loss_history = Vec::with_capacity(config.epochs);

    for _ in 0..config.epochs {
        let grad = gradient_from_predictions(spec, &params, data, &preds)?;
        (opt, params) = adam_step(&opt, &params, &grad, config)?;
        preds = predictions(spec, &params, data)?;
        loss_history.push(mean_squared_error(&preds, data.ys()));
    }

    Ok(TrainResult {
        spec: *spec,
        config: *config,
        initial_loss,
        final_loss: loss_history.last().copied().unwrap_or(initial_loss),
        loss_history,
        final_params: params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arch::Family;
    use std::f64::consts::PI;

    #[test]
    fn top_hat_shape() {
        let d = top_hat_dataset(100).unwrap();
        assert_eq!(d.len(), 100);
        assert_eq!(d.ys()[0], 0.0);
        assert_eq!(d.ys()[50], 1.0);
        assert_eq!(d.xs()[50], PI);
        assert_eq!(d.ys().iter().sum::<f64>(), 50.0);
        assert!(top_hat_dataset(1).is_err());
    }

    #[test]
    fn dataset_validation() {
        assert!(Dataset::new(vec![0.0, 1.0], vec![0.0]).is_err());
        assert!(Dataset::new(vec![1.0, 0.0], vec![0.0, 0.0]).is_err());
        assert!(Dataset::new(vec![0.0, 1.0], vec![0.0, 1.5]).is_err());
        assert!(Dataset::new(vec![], vec![]).is_err());
    }

    fn equator_model() -> (ArchitectureSpec, ParamVector) {
        // RY(π/2) puts the qubit on the equator; RZ encodings keep it there
        let spec = ArchitectureSpec::new(Family::SequentialLinear, 1, 1).unwrap();
        (spec, ParamVector::new(vec![0.0, FRAC_PI_2, 0.0, 0.0, 0.0, 0.0]))
    }

    #[test]
    fn zero_model_on_top_hat() {
        let (spec, params) = equator_model();
        for n in [4, 8, 100] {
            let loss = mse_loss(&spec, &params, &top_hat_dataset(n).unwrap()).unwrap();
            assert!((loss - 0.5).abs() < 1e-12, "n={n}: {loss}");
        }
    }

    #[test]
    fn perfect_model_has_zero_loss() {
        let spec = ArchitectureSpec::new(Family::ParallelLinear, 2, 1).unwrap();
        let params = ParamVector::new((0..12).map(|i| 0.37 * i as f64).collect());
        let xs: Vec<f64> = (0..10).map(|j| 0.6 * j as f64).collect();
        let ys = xs.iter().map(|&x| spec.evaluate(&params, x).unwrap()).collect();
        let data = Dataset::new(xs, ys).unwrap();
        assert_eq!(mse_loss(&spec, &params, &data).unwrap(), 0.0);
    }

    #[test]
    fn mse_ignores_order() {
        let p = [0.1, -0.4, 0.9, 0.3];
        let y = [0.0, 1.0, 1.0, 0.0];
        let perm = [2, 0, 3, 1];
        let pp: Vec<f64> = perm.iter().map(|&i| p[i]).collect();
        let yp: Vec<f64> = perm.iter().map(|&i| y[i]).collect();
        assert!((mean_squared_error(&p, &y) - mean_squared_error(&pp, &yp)).abs() < 1e-15);
    }

    #[test]
    fn gradient_vanishes_at_zero_parameters() {
        // |0…0⟩ is a fixed point of every block at θ = 0 and each angle sits
        // at an extremum of cos or on a Z-diagonal gate
        let data = top_hat_dataset(20).unwrap();
        for family in Family::ALL {
            let spec = ArchitectureSpec::new(family, 2, 1).unwrap();
            let zero = ParamVector::zeros(spec.parameter_count());
            let grad = parameter_shift_gradient(&spec, &zero, &data).unwrap();
            assert_eq!(grad.len(), spec.parameter_count());
            assert!(grad.iter().all(|g| g.abs() < 1e-10), "{family}: {grad:?}");
        }
    }

    #[test]
    fn adam_zero_gradient() {
        let cfg = TrainConfig::default();
        let params = ParamVector::new(vec![0.5, -1.0]);
        let state = AdamState { m: vec![0.2, -0.1], v: vec![0.04, 0.01], t: 3 };
        let (next, p) = adam_step(&AdamState::new(2), &params, &[0.0, 0.0], &cfg).unwrap();
        assert_eq!(p, params);
        assert_eq!(next.t, 1);
        let (decayed, _) = adam_step(&state, &params, &[0.0, 0.0], &cfg).unwrap();
        assert!((decayed.m[0] - 0.18).abs() < 1e-15 && (decayed.v[0] - 0.04 * 0.999).abs() < 1e-15);
    }

    #[test]
    fn adam_first_step_moves_by_learning_rate() {
        let cfg = TrainConfig::default();
        let params = ParamVector::new(vec![1.0, 1.0, 1.0]);
        let g = [3.0e3, -2.0e-3, 0.5];
        let (_, p) = adam_step(&AdamState::new(3), &params, &g, &cfg).unwrap();
        for (new, gj) in p.values().iter().zip(g) {
            let delta = new - 1.0;
            assert!((delta + cfg.learning_rate * gj.signum()).abs() < 1e-5, "{delta}");
        }
    }

    #[test]
    fn adam_is_deterministic_and_checks_shapes() {
        let cfg = TrainConfig::default();
        let params = ParamVector::new(vec![0.1, 0.2]);
        let s = AdamState::new(2);
        assert_eq!(
            adam_step(&s, &params, &[0.3, -0.7], &cfg).unwrap(),
            adam_step(&s, &params, &[0.3, -0.7], &cfg).unwrap()
        );
        assert!(adam_step(&s, &params, &[0.3], &cfg).is_err());
    }

    #[test]
    fn zero_epochs_returns_initialization() {
        let spec = ArchitectureSpec::with_default_depth(Family::ParallelLinear, 2).unwrap();
        let cfg = TrainConfig { epochs: 0, seed: 9, ..Default::default() };
        let data = top_hat_dataset(16).unwrap();
        let r = train(&spec, &cfg, &data).unwrap();
        assert!(r.loss_history.is_empty());
        let init = spec.random_params(&mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(r.final_params, init);
        assert_eq!(r.final_loss, r.initial_loss);
    }

    #[test]
    fn training_is_reproducible() {
        let spec = ArchitectureSpec::new(Family::SequentialExponential, 2, 1).unwrap();
        let cfg = TrainConfig { epochs: 5, seed: 1, ..Default::default() };
        let data = top_hat_dataset(20).unwrap();
        let a = train(&spec, &cfg, &data).unwrap();
        let b = train(&spec, &cfg, &data).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.loss_history.len(), 5);
        assert_eq!(a.final_loss, *a.loss_history.last().unwrap());
    }

    #[test]
    fn config_validation() {
        assert!(TrainConfig { learning_rate: 0.0, ..Default::default() }.validate().is_err());
        assert!(TrainConfig { adam_beta1: 1.0, ..Default::default() }.validate().is_err());
        assert!(TrainConfig { adam_epsilon: 0.0, ..Default::default() }.validate().is_err());
        assert!(TrainConfig::default().validate().is_ok());
    }
}
