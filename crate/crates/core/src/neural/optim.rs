use super::{Matrix, NeuralError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamId(usize);

impl ParamId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A named tensor with its gradient slot and Adagrad accumulator.
#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub name: String,
    pub value: Matrix,
    pub grad: Matrix,
    pub accum: Matrix,
}

/// Ordered collection of trainable tensors.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamStore {
    params: Vec<Param>,
}

impl ParamStore {
    pub fn new() -> Self {
        ParamStore::default()
    }

    pub fn add(&mut self, name: impl Into<String>, value: Matrix) -> ParamId {
        let (r, c) = value.shape();
        self.params.push(Param { name: name.into(), value, grad: Matrix::zeros(r, c), accum: Matrix::zeros(r, c) });
        ParamId(self.params.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ParamId> {
        (0..self.params.len()).map(ParamId)
    }

    pub fn id(&self, name: &str) -> Option<ParamId> {
        self.params.iter().position(|p| p.name == name).map(ParamId)
    }

    pub fn param(&self, id: ParamId) -> &Param {
        &self.params[id.0]
    }

    pub fn param_mut(&mut self, id: ParamId) -> &mut Param {
        &mut self.params[id.0]
    }

    pub fn value(&self, id: ParamId) -> &Matrix {
        &self.params[id.0].value
    }

    pub fn value_mut(&mut self, id: ParamId) -> &mut Matrix {
        &mut self.params[id.0].value
    }

    pub fn grad_mut(&mut self, id: ParamId) -> &mut Matrix {
        &mut self.params[id.0].grad
    }

    pub fn iter(&self) -> impl Iterator<Item = &Param> {
        self.params.iter()
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut Param> {
        self.params.iter_mut()
    }

    /// Zero-filled tensors shaped like the parameters.
    pub fn zeros_like(&self) -> Vec<Matrix> {
        self.params.iter().map(|p| Matrix::zeros(p.value.rows(), p.value.cols())).collect()
    }

    pub fn zero_grads(&mut self) {
        for p in &mut self.params {
            p.grad.fill(0.0);
        }
    }

    /// `grad += scale · g` for every parameter.
    pub fn accumulate_grads(&mut self, grads: &[Matrix], scale: f64) {
        assert_eq!(grads.len(), self.params.len());
        for (p, g) in self.params.iter_mut().zip(grads) {
            p.grad.add_scaled(scale, g);
        }
    }
}

/// Adagrad with a per-scalar running sum of squared gradients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Adagrad {
    pub lr: f64,
    pub eps: f64,
}

impl Default for Adagrad {
    fn default() -> Self {
        Adagrad { lr: 0.05, eps: 1e-8 }
    }
}

impl Adagrad {
    pub fn new(lr: f64, eps: f64) -> Self {
        Adagrad { lr, eps }
    }

    /// Applies one update from the stored gradients and clears them. Nothing
    /// is modified if any gradient is non-finite.
    pub fn step(&self, store: &mut ParamStore) -> Result<(), NeuralError> {
        if let Some(p) = store.iter().find(|p| !p.grad.is_finite()) {
            return Err(NeuralError::NonFinite(format!("gradient of {}", p.name)));
        }
        for p in store.iter_mut() {
            let value = p.value.as_mut_slice();
            let grad = p.grad.as_mut_slice();
            let accum = p.accum.as_mut_slice();
            for ((v, g), a) in value.iter_mut().zip(grad.iter_mut()).zip(accum.iter_mut()) {
                if *g != 0.0 {
                    *a += *g * *g;
                    *v -= self.lr * *g / (a.sqrt() + self.eps);
                }
                *g = 0.0;
            }
        }
        Ok(())
    }
}
