use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::cell::{node_backward, node_forward, NodeState};
use super::params::{Grads, ModelParams, NUM_CLASSES};
use super::ModelError;
use crate::corpus::{DepTree, EmbeddingTable};
use crate::neural::{argmax_high, log_softmax, Vector};
use crate::Sentiment;

/// Per-node class log-probabilities, ordered negative, neutral, positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodePrediction {
    pub log_probs: [f64; NUM_CLASSES],
}

impl NodePrediction {
    pub fn from_logits(logits: &[f64]) -> Result<Self, ModelError> {
        let lp = log_softmax(logits)?;
        let mut log_probs = [0.0; NUM_CLASSES];
        log_probs.copy_from_slice(&lp);
        Ok(NodePrediction { log_probs })
    }

    /// Most probable class; exact ties go to the more positive class.
    pub fn label(&self) -> Sentiment {
        Sentiment::from_index(argmax_high(&self.log_probs)).expect("three classes")
    }

    pub fn log_prob(&self, s: Sentiment) -> f64 {
        self.log_probs[s.index()]
    }
}

/// Result of running the model over one tree, indexed by token position.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeOutput {
    pub states: Vec<NodeState>,
    pub predictions: Vec<NodePrediction>,
}

impl TreeOutput {
    pub fn root_prediction(&self, tree: &DepTree) -> NodePrediction {
        self.predictions[tree.root()]
    }
}

/// Runs the cell bottom-up over `tree` and classifies every node.
pub fn tree_forward(params: &ModelParams, tree: &DepTree, emb: &EmbeddingTable) -> Result<TreeOutput, ModelError> {
    if emb.dim() != params.embed_dim() {
        return Err(ModelError::Dimension(format!(
            "embeddings are {}-dimensional, model expects {}",
            emb.dim(),
            params.embed_dim()
        )));
    }
    let inputs: Vec<&[f64]> = tree.tokens().iter().map(|t| emb.lookup(&t.form)).collect();
    forward_with_inputs(params, tree, &inputs)
}

/// Same as [`tree_forward`] with the input vector of every node given.
pub fn forward_with_inputs(params: &ModelParams, tree: &DepTree, inputs: &[&[f64]]) -> Result<TreeOutput, ModelError> {
    let states = forward_states(params, tree, inputs)?;
    let predictions = states
        .iter()
        .enumerate()
        .map(|(node, s)| classify(params, &s.h).map_err(|e| e.at_node(node)))
        .collect::<Result<_, _>>()?;
    Ok(TreeOutput { states, predictions })
}

fn classify(params: &ModelParams, h: &[f64]) -> Result<NodePrediction, ModelError> {
    let mut logits = Vector::from(params.proj_bias().to_vec());
    params.proj().add_mul_vec(h, &mut logits);
    NodePrediction::from_logits(&logits)
}

pub(crate) fn forward_states(
    params: &ModelParams,
    tree: &DepTree,
    inputs: &[&[f64]],
) -> Result<Vec<NodeState>, ModelError> {
    assert_eq!(inputs.len(), tree.len(), "one input per token");
    let mut states: Vec<Option<NodeState>> = vec![None; tree.len()];
    for node in tree.post_order() {
        let children: Vec<&NodeState> = tree
            .children(node)
            .iter()
            .map(|&c| states[c].as_ref().expect("post-order visits children first"))
            .collect();
        let state = node_forward(params, inputs[node], &children).map_err(|e| e.at_node(node))?;
        states[node] = Some(state);
    }
    Ok(states.into_iter().map(|s| s.expect("every node visited")).collect())
}

/// Negative log-likelihood of the supervised nodes and its gradient.
#[derive(Clone, Debug)]
pub struct LossAndGrads {
    pub loss: f64,
    pub grads: Grads,
    pub output: TreeOutput,
}

/// Supervision for one tree: `(node, gold label)` pairs.
pub type NodeTargets<'a> = &'a [(usize, Sentiment)];

/// Forward pass, summed NLL over `targets`, and backpropagation through
/// structure. With `dropout = Some((p, rng))` an inverted-dropout mask is
/// applied to the classifier input of every supervised node.
pub fn loss_and_grads(
    params: &ModelParams,
    tree: &DepTree,
    inputs: &[&[f64]],
    targets: NodeTargets<'_>,
    mut dropout: Option<(f64, &mut ChaCha8Rng)>,
) -> Result<LossAndGrads, ModelError> {
    let hd = params.hidden_dim();
    let states = forward_states(params, tree, inputs)?;
    let mut grads = params.zero_grads();
    let mut dh: Vec<Vector> = vec![Vector::zeros(hd); tree.len()];
    let mut dc: Vec<Vector> = vec![Vector::zeros(hd); tree.len()];
    let mut loss = 0.0;

    for &(node, label) in targets {
        let h = &states[node].h;
        let mask: Option<Vector> = dropout.as_mut().filter(|(p, _)| *p > 0.0).map(|(p, rng)| {
            let keep = 1.0 - *p;
            (0..hd).map(|_| if rng.gen::<f64>() < keep { 1.0 / keep } else { 0.0 }).collect::<Vec<_>>().into()
        });
        let input: Vector = match &mask {
            Some(m) => h.hadamard(m),
            None => h.clone(),
        };
        let mut logits = Vector::from(params.proj_bias().to_vec());
        params.proj().add_mul_vec(&input, &mut logits);
        let lp = log_softmax(&logits).map_err(|e| ModelError::from(e).at_node(node))?;
        loss -= lp[label.index()];

        // d(-log softmax_y)/dz = softmax - onehot(y)
        let mut dz = lp.map(f64::exp);
        dz[label.index()] -= 1.0;
        grads.proj().add_outer(&dz, &input);
        crate::neural::axpy(1.0, &dz, grads.proj_bias());
        let mut dinput = Vector::zeros(hd);
        params.proj().add_transpose_mul_vec(&dz, &mut dinput);
        if let Some(m) = &mask {
            dinput = dinput.hadamard(m);
        }
        dh[node].add_assign(&dinput);
    }

    let order = tree.post_order();
    for &node in order.iter().rev() {
        let children: Vec<&NodeState> = tree.children(node).iter().map(|&c| &states[c]).collect();
        let back = node_backward(params, inputs[node], &states[node], &children, &dh[node], &dc[node], &mut grads);
        for ((&child, dhk), dck) in tree.children(node).iter().zip(back.dh_children).zip(back.dc_children) {
            dh[child].add_assign(&dhk);
            dc[child].add_assign(&dck);
        }
    }

    let predictions = states
        .iter()
        .enumerate()
        .map(|(node, s)| classify(params, &s.h).map_err(|e| e.at_node(node)))
        .collect::<Result<_, _>>()?;
    Ok(LossAndGrads { loss, grads, output: TreeOutput { states, predictions } })
}
