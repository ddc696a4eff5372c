//! The child-sum Tree-LSTM cell.
//!
//! For node `j` with input `x` and children `k`:
//!
//! ```text
//! h̃    = Σ_k h_k
//! i    = σ(W_i x + U_i h̃ + b_i)
//! f_k  = σ(W_f x + U_f h_k + b_f)        one per child
//! o    = σ(W_o x + U_o h̃ + b_o)
//! u    = act(W_u x + U_u h̃ + b_u)        act = tanh by default
//! c    = i ⊙ u + Σ_k f_k ⊙ c_k
//! h    = o ⊙ tanh(c)
//! ```

use super::params::{Gate, Grads, ModelParams};
use super::ModelError;
use crate::neural::{axpy, sigmoid, Vector};

#[derive(Clone, Debug, PartialEq)]
pub struct NodeState {
    pub h: Vector,
    pub c: Vector,
    pub h_tilde: Vector,
    pub i: Vector,
    pub o: Vector,
    pub u: Vector,
    /// One forget gate per child, in child order.
    pub forgets: Vec<Vector>,
}

pub fn node_forward(params: &ModelParams, x: &[f64], children: &[&NodeState]) -> Result<NodeState, ModelError> {
    let hd = params.hidden_dim();
    if x.len() != params.embed_dim() {
        return Err(ModelError::Dimension(format!(
            "input has {} values, model expects {}",
            x.len(),
            params.embed_dim()
        )));
    }
    if let Some(bad) = children.iter().find(|c| c.h.len() != hd || c.c.len() != hd) {
        return Err(ModelError::Dimension(format!("child state has width {}, model expects {}", bad.h.len(), hd)));
    }

    let mut h_tilde = Vector::zeros(hd);
    for child in children {
        h_tilde.add_assign(&child.h);
    }

    let pre = |gate: Gate, recurrent: &[f64]| -> Vector {
        let mut z = Vector::from(params.b(gate).to_vec());
        params.w(gate).add_mul_vec(x, &mut z);
        params.u(gate).add_mul_vec(recurrent, &mut z);
        z
    };

    let i = pre(Gate::Input, &h_tilde).map(sigmoid);
    let o = pre(Gate::Output, &h_tilde).map(sigmoid);
    let act = params.activation();
    let u = pre(Gate::Candidate, &h_tilde).map(|v| act.apply(v));

    // W_f x + b_f is shared by all children.
    let mut wf_x = Vector::from(params.b(Gate::Forget).to_vec());
    params.w(Gate::Forget).add_mul_vec(x, &mut wf_x);
    let forgets: Vec<Vector> = children
        .iter()
        .map(|child| {
            let mut z = wf_x.clone();
            params.u(Gate::Forget).add_mul_vec(&child.h, &mut z);
            z.map(sigmoid)
        })
        .collect();

    let mut c = i.hadamard(&u);
    for (f, child) in forgets.iter().zip(children) {
        for ((cj, fk), ck) in c.iter_mut().zip(f.iter()).zip(child.c.iter()) {
            *cj += fk * ck;
        }
    }
    let h = o.hadamard(&c.map(f64::tanh));

    Ok(NodeState { h, c, h_tilde, i, o, u, forgets })
}

/// Gradients flowing back out of one node.
pub(crate) struct NodeBackward {
    /// `∂L/∂h_k` for each child, in child order.
    pub dh_children: Vec<Vector>,
    /// `∂L/∂c_k` for each child, in child order.
    pub dc_children: Vec<Vector>,
}

/// Backpropagates `dh`/`dc` (total gradients w.r.t. this node's outputs)
/// through the cell, accumulating parameter gradients into `grads`.
pub(crate) fn node_backward(
    params: &ModelParams,
    x: &[f64],
    state: &NodeState,
    children: &[&NodeState],
    dh: &[f64],
    dc_in: &[f64],
    grads: &mut Grads,
) -> NodeBackward {
    let hd = params.hidden_dim();
    let act = params.activation();

    let mut dc = Vector::from(dc_in.to_vec());
    let mut da_o = Vector::zeros(hd);
    for r in 0..hd {
        let tc = state.c[r].tanh();
        let o = state.o[r];
        da_o[r] = dh[r] * tc * o * (1.0 - o);
        dc[r] += dh[r] * o * (1.0 - tc * tc);
    }

    let mut da_i = Vector::zeros(hd);
    let mut da_u = Vector::zeros(hd);
    for r in 0..hd {
        let (i, u) = (state.i[r], state.u[r]);
        da_i[r] = dc[r] * u * i * (1.0 - i);
        da_u[r] = dc[r] * i * act.derivative_from_output(u);
    }

    for (gate, da) in [(Gate::Input, &da_i), (Gate::Output, &da_o), (Gate::Candidate, &da_u)] {
        grads.w(gate).add_outer(da, x);
        grads.u(gate).add_outer(da, &state.h_tilde);
        axpy(1.0, da, grads.b(gate));
    }

    // Shared path through h̃ reaches every child.
    let mut dh_tilde = Vector::zeros(hd);
    params.u(Gate::Input).add_transpose_mul_vec(&da_i, &mut dh_tilde);
    params.u(Gate::Output).add_transpose_mul_vec(&da_o, &mut dh_tilde);
    params.u(Gate::Candidate).add_transpose_mul_vec(&da_u, &mut dh_tilde);

    let mut dh_children = Vec::with_capacity(children.len());
    let mut dc_children = Vec::with_capacity(children.len());
    for (f, child) in state.forgets.iter().zip(children) {
        let mut da_f = Vector::zeros(hd);
        let mut dck = Vector::zeros(hd);
        for r in 0..hd {
            da_f[r] = dc[r] * child.c[r] * f[r] * (1.0 - f[r]);
            dck[r] = dc[r] * f[r];
        }
        grads.w(Gate::Forget).add_outer(&da_f, x);
        grads.u(Gate::Forget).add_outer(&da_f, &child.h);
        axpy(1.0, &da_f, grads.b(Gate::Forget));

        let mut dhk = dh_tilde.clone();
        params.u(Gate::Forget).add_transpose_mul_vec(&da_f, &mut dhk);
        dh_children.push(dhk);
        dc_children.push(dck);
    }

    NodeBackward { dh_children, dc_children }
}
