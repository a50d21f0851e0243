//! Fixed-architecture MLP policy over a flat parameter vector.
//!
//! The whole network lives in one `Vec<f64>` laid out layer-major (W1
//! row-major, b1, W2, b2, ...), so mutation is a single vector addition and
//! genomes can be shipped around as plain buffers.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the output layer is read out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputMode {
    /// Raw affine outputs, action = argmax (ties to the lowest index).
    DiscreteArgmax,
    /// Tanh-squashed outputs, every component in [-1, 1].
    ContinuousBounded,
}

/// Network shape. Hidden activations are tanh.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    pub input_dim: usize,
    pub hidden_dims: Vec<usize>,
    pub output_dim: usize,
    pub output_mode: OutputMode,
}

impl Architecture {
    pub fn new(
        input_dim: usize,
        hidden_dims: Vec<usize>,
        output_dim: usize,
        output_mode: OutputMode,
    ) -> Result<Self> {
        if input_dim == 0 || output_dim == 0 {
            return Err(Error::InvalidConfig(
                "input_dim and output_dim must be positive".into(),
            ));
        }
        if hidden_dims.is_empty() || hidden_dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidConfig(
                "hidden_dims must be non-empty with positive entries".into(),
            ));
        }
        Ok(Architecture {
            input_dim,
            hidden_dims,
            output_dim,
            output_mode,
        })
    }

    /// The default control network: two 256-unit tanh layers.
    pub fn default_control(input_dim: usize, output_dim: usize, output_mode: OutputMode) -> Self {
        Architecture {
            input_dim,
            hidden_dims: vec![256, 256],
            output_dim,
            output_mode,
        }
    }

    /// Layer widths from input to output, inclusive.
    fn widths(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.hidden_dims.len() + 2);
        w.push(self.input_dim);
        w.extend_from_slice(&self.hidden_dims);
        w.push(self.output_dim);
        w
    }

    /// (fan_in, fan_out) per layer.
    pub fn layer_shapes(&self) -> Vec<(usize, usize)> {
        self.widths().windows(2).map(|p| (p[0], p[1])).collect()
    }

    /// Total number of weights and biases: sum over layers of
    /// fan_in * fan_out + fan_out.
    pub fn param_count(&self) -> usize {
        self.layer_shapes()
            .iter()
            .map(|&(fi, fo)| fi * fo + fo)
            .sum()
    }
}

/// Flat genome: all weights and biases of one policy network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector(pub Vec<f64>);

impl ParamVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    fn check(&self, arch: &Architecture) -> Result<()> {
        let expected = arch.param_count();
        if self.0.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: self.0.len(),
                context: "parameter vector length",
            });
        }
        Ok(())
    }
}

/// One action chosen by a policy.
#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    Discrete(usize),
    Continuous(Vec<f64>),
}

/// Draw a fresh genome. Each layer's weights and biases are i.i.d. uniform on
/// [-1/sqrt(fan_in), +1/sqrt(fan_in)], fan_in being that layer's input width.
pub fn init_params<R: Rng + ?Sized>(arch: &Architecture, rng: &mut R) -> ParamVector {
    let mut values = Vec::with_capacity(arch.param_count());
    for (fan_in, fan_out) in arch.layer_shapes() {
        let bound = 1.0 / (fan_in as f64).sqrt();
        for _ in 0..(fan_in * fan_out + fan_out) {
            values.push(rng.random_range(-bound..=bound));
        }
    }
    ParamVector(values)
}

/// Evaluate the network on one observation.
///
/// Hidden layers apply tanh; the output layer is raw affine in discrete mode
/// and tanh-squashed in continuous mode.
pub fn forward(arch: &Architecture, params: &ParamVector, obs: &[f64]) -> Result<Vec<f64>> {
    params.check(arch)?;
    if obs.len() != arch.input_dim {
        return Err(Error::DimensionMismatch {
            expected: arch.input_dim,
            got: obs.len(),
            context: "observation length",
        });
    }

    let shapes = arch.layer_shapes();
    let last = shapes.len() - 1;
    let mut activ: Vec<f64> = obs.to_vec();
    let mut offset = 0usize;

    for (li, &(fan_in, fan_out)) in shapes.iter().enumerate() {
        let weights = &params.0[offset..offset + fan_in * fan_out];
        let biases = &params.0[offset + fan_in * fan_out..offset + fan_in * fan_out + fan_out];
        offset += fan_in * fan_out + fan_out;

        let mut next = Vec::with_capacity(fan_out);
        for o in 0..fan_out {
            let row = &weights[o * fan_in..(o + 1) * fan_in];
            let mut acc = biases[o];
            for (w, x) in row.iter().zip(&activ) {
                acc += w * x;
            }
            let squash = li < last || arch.output_mode == OutputMode::ContinuousBounded;
            next.push(if squash { acc.tanh() } else { acc });
        }
        activ = next;
    }
    Ok(activ)
}

/// Forward pass plus readout: argmax (lowest index wins ties) in discrete
/// mode, the bounded output vector itself in continuous mode.
pub fn act(arch: &Architecture, params: &ParamVector, obs: &[f64]) -> Result<Action> {
    let out = forward(arch, params, obs)?;
    match arch.output_mode {
        OutputMode::DiscreteArgmax => Ok(Action::Discrete(argmax(&out))),
        OutputMode::ContinuousBounded => Ok(Action::Continuous(out)),
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}
