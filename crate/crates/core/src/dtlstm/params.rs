use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::neural::{glorot_init_with, seeded_rng, Matrix, ParamId, ParamStore};

/// The four gated transforms of the cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Input,
    Forget,
    Output,
    Candidate,
}

impl Gate {
    pub const ALL: [Gate; 4] = [Gate::Input, Gate::Forget, Gate::Output, Gate::Candidate];

    fn slot(self) -> usize {
        self as usize
    }

    fn suffix(self) -> &'static str {
        match self {
            Gate::Input => "i",
            Gate::Forget => "f",
            Gate::Output => "o",
            Gate::Candidate => "u",
        }
    }
}

/// Nonlinearity of the candidate transform `u_j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CandidateActivation {
    #[default]
    Tanh,
    Sigmoid,
}

impl CandidateActivation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            CandidateActivation::Tanh => x.tanh(),
            CandidateActivation::Sigmoid => crate::neural::sigmoid(x),
        }
    }

    /// Derivative expressed through the activation output.
    pub fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            CandidateActivation::Tanh => 1.0 - y * y,
            CandidateActivation::Sigmoid => y * (1.0 - y),
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            CandidateActivation::Tanh => 0,
            CandidateActivation::Sigmoid => 1,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(CandidateActivation::Tanh),
            1 => Some(CandidateActivation::Sigmoid),
            _ => None,
        }
    }
}

impl fmt::Display for CandidateActivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CandidateActivation::Tanh => "tanh",
            CandidateActivation::Sigmoid => "sigmoid",
        })
    }
}

impl FromStr for CandidateActivation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tanh" => Ok(CandidateActivation::Tanh),
            "sigmoid" => Ok(CandidateActivation::Sigmoid),
            other => Err(format!("unknown candidate activation '{}'", other)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelShape {
    pub embed_dim: usize,
    pub hidden_dim: usize,
    pub activation: CandidateActivation,
}

/// Number of sentiment classes predicted per node.
pub const NUM_CLASSES: usize = 3;

// Store layout: W_{i,f,o,u}, U_{i,f,o,u}, b_{i,f,o,u}, P, b_p.
const W_BASE: usize = 0;
const U_BASE: usize = 4;
const B_BASE: usize = 8;
const PROJ: usize = 12;
const PROJ_BIAS: usize = 13;
pub(crate) const PARAM_COUNT: usize = 14;

/// All Tree-LSTM weights plus the classifier projection.
///
/// Every tensor lives in one [`ParamStore`] in a fixed order, which is also
/// the order used by checkpoints and gradient vectors. Biases are stored as
/// `n x 1` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    shape: ModelShape,
    store: ParamStore,
}

impl ModelParams {
    /// Glorot-initialized weights and zero biases.
    pub fn new(shape: ModelShape, seed: u64) -> Result<Self, ModelError> {
        let mut rng = seeded_rng(seed);
        Self::build(
            shape,
            |rows, cols, is_bias| {
                if is_bias {
                    Ok(Matrix::zeros(rows, cols))
                } else {
                    glorot_init_with(rows, cols, &mut rng)
                }
            },
        )
    }

    pub fn zeros(shape: ModelShape) -> Result<Self, ModelError> {
        Self::build(shape, |rows, cols, _| Ok(Matrix::zeros(rows, cols)))
    }

    /// Every entry drawn uniformly from `±scale`, biases included.
    pub fn random_uniform(shape: ModelShape, scale: f64, seed: u64) -> Result<Self, ModelError> {
        let mut rng = seeded_rng(seed);
        Self::build(shape, |rows, cols, _| {
            let data = (0..rows * cols).map(|_| rng.gen_range(-scale..=scale)).collect();
            Matrix::from_vec(rows, cols, data)
        })
    }

    fn build(
        shape: ModelShape,
        mut make: impl FnMut(usize, usize, bool) -> Result<Matrix, crate::neural::NeuralError>,
    ) -> Result<Self, ModelError> {
        if shape.embed_dim == 0 || shape.hidden_dim == 0 {
            return Err(ModelError::Dimension("embed_dim and hidden_dim must be positive".to_owned()));
        }
        let mut store = ParamStore::new();
        for (name, rows, cols, is_bias) in Self::layout(shape) {
            store.add(name, make(rows, cols, is_bias)?);
        }
        Ok(ModelParams { shape, store })
    }

    /// Name and shape of every tensor in store order.
    pub fn layout(shape: ModelShape) -> Vec<(String, usize, usize, bool)> {
        let (e, h) = (shape.embed_dim, shape.hidden_dim);
        let mut out = Vec::with_capacity(PARAM_COUNT);
        for g in Gate::ALL {
            out.push((format!("W_{}", g.suffix()), h, e, false));
        }
        for g in Gate::ALL {
            out.push((format!("U_{}", g.suffix()), h, h, false));
        }
        for g in Gate::ALL {
            out.push((format!("b_{}", g.suffix()), h, 1, true));
        }
        out.push(("P".to_owned(), NUM_CLASSES, h, false));
        out.push(("b_p".to_owned(), NUM_CLASSES, 1, true));
        out
    }

    /// Wraps an existing store, checking that it has the expected layout.
    pub fn from_store(shape: ModelShape, store: ParamStore) -> Result<Self, ModelError> {
        let layout = Self::layout(shape);
        if store.len() != layout.len() {
            return Err(ModelError::Dimension(format!("expected {} tensors, found {}", layout.len(), store.len())));
        }
        for (p, (name, rows, cols, _)) in store.iter().zip(&layout) {
            if &p.name != name || p.value.shape() != (*rows, *cols) {
                return Err(ModelError::Dimension(format!(
                    "tensor {} is {}x{}, expected {} {}x{}",
                    p.name,
                    p.value.rows(),
                    p.value.cols(),
                    name,
                    rows,
                    cols
                )));
            }
        }
        Ok(ModelParams { shape, store })
    }

    pub fn shape(&self) -> ModelShape {
        self.shape
    }

    pub fn embed_dim(&self) -> usize {
        self.shape.embed_dim
    }

    pub fn hidden_dim(&self) -> usize {
        self.shape.hidden_dim
    }

    pub fn activation(&self) -> CandidateActivation {
        self.shape.activation
    }

    pub fn store(&self) -> &ParamStore {
        &self.store
    }

    pub fn store_mut(&mut self) -> &mut ParamStore {
        &mut self.store
    }

    pub fn into_store(self) -> ParamStore {
        self.store
    }

    fn at(&self, slot: usize) -> &Matrix {
        self.store.value(self.id(slot))
    }

    fn id(&self, slot: usize) -> ParamId {
        self.store.ids().nth(slot).expect("fixed layout")
    }

    /// Input-to-hidden weights of a gate.
    pub fn w(&self, gate: Gate) -> &Matrix {
        self.at(W_BASE + gate.slot())
    }

    /// Hidden-to-hidden weights of a gate.
    pub fn u(&self, gate: Gate) -> &Matrix {
        self.at(U_BASE + gate.slot())
    }

    pub fn b(&self, gate: Gate) -> &[f64] {
        self.at(B_BASE + gate.slot()).as_slice()
    }

    /// Classifier projection, `NUM_CLASSES x hidden_dim`.
    pub fn proj(&self) -> &Matrix {
        self.at(PROJ)
    }

    pub fn proj_bias(&self) -> &[f64] {
        self.at(PROJ_BIAS).as_slice()
    }

    pub fn w_mut(&mut self, gate: Gate) -> &mut Matrix {
        let id = self.id(W_BASE + gate.slot());
        self.store.value_mut(id)
    }

    pub fn u_mut(&mut self, gate: Gate) -> &mut Matrix {
        let id = self.id(U_BASE + gate.slot());
        self.store.value_mut(id)
    }

    pub fn b_mut(&mut self, gate: Gate) -> &mut [f64] {
        let id = self.id(B_BASE + gate.slot());
        self.store.value_mut(id).as_mut_slice()
    }

    pub fn proj_mut(&mut self) -> &mut Matrix {
        let id = self.id(PROJ);
        self.store.value_mut(id)
    }

    pub fn proj_bias_mut(&mut self) -> &mut [f64] {
        let id = self.id(PROJ_BIAS);
        self.store.value_mut(id).as_mut_slice()
    }

    /// Zeroed gradient tensors in store order.
    pub fn zero_grads(&self) -> Grads {
        Grads(self.store.zeros_like())
    }

    pub fn is_finite(&self) -> bool {
        self.store.iter().all(|p| p.value.is_finite())
    }
}

/// Gradient tensors laid out like [`ModelParams`].
#[derive(Clone, Debug, PartialEq)]
pub struct Grads(pub Vec<Matrix>);

impl Grads {
    pub fn w(&mut self, gate: Gate) -> &mut Matrix {
        &mut self.0[W_BASE + gate.slot()]
    }

    pub fn u(&mut self, gate: Gate) -> &mut Matrix {
        &mut self.0[U_BASE + gate.slot()]
    }

    pub fn b(&mut self, gate: Gate) -> &mut [f64] {
        self.0[B_BASE + gate.slot()].as_mut_slice()
    }

    pub fn proj(&mut self) -> &mut Matrix {
        &mut self.0[PROJ]
    }

    pub fn proj_bias(&mut self) -> &mut [f64] {
        self.0[PROJ_BIAS].as_mut_slice()
    }

    pub fn add(&mut self, other: &Grads) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            a.add_scaled(1.0, b);
        }
    }

    /// True for tensors that are biases (`n x 1` slots).
    pub fn is_bias_slot(slot: usize) -> bool {
        (B_BASE..B_BASE + 4).contains(&slot) || slot == PROJ_BIAS
    }
}
