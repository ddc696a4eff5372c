use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::forward::{forward_with_inputs, loss_and_grads};
use super::params::{Grads, ModelParams};
use super::ModelError;
use crate::corpus::{DepTree, EmbeddingTable, SstExample};
use crate::neural::{seeded_rng, Adagrad};
use crate::Sentiment;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub epochs: usize,
    pub lr: f64,
    pub eps: f64,
    pub batch_size: usize,
    /// L2 penalty on weight matrices (biases are not decayed).
    pub weight_decay: f64,
    /// Dropout rate on the classifier input during training.
    pub dropout: f64,
    /// Also supervise interior nodes when the corpus labels them.
    pub supervise_interior: bool,
    pub shuffle: bool,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 10,
            lr: 0.05,
            eps: 1e-8,
            batch_size: 25,
            weight_decay: 1e-4,
            dropout: 0.0,
            supervise_interior: false,
            shuffle: true,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    /// 1-based epoch number.
    pub epoch: usize,
    /// Mean loss per training example over the epoch.
    pub train_loss: f64,
    pub dev_accuracy: f64,
}

#[derive(Clone, Debug)]
pub struct TrainReport {
    /// Parameters after the epoch with the best dev accuracy (the initial
    /// parameters when no epoch ran).
    pub params: ModelParams,
    pub best_epoch: Option<usize>,
    pub curve: Vec<EpochStats>,
}

struct Prepared<'a> {
    tree: DepTree,
    inputs: Vec<&'a [f64]>,
    targets: Vec<(usize, Sentiment)>,
}

fn prepare<'a>(
    examples: &[SstExample],
    emb: &'a EmbeddingTable,
    interior: bool,
) -> Result<Vec<Prepared<'a>>, ModelError> {
    examples
        .iter()
        .enumerate()
        .map(|(i, ex)| {
            let tree = ex.to_tree().map_err(|e| ModelError::Data(format!("example {}: {}", i, e)))?;
            let inputs = ex.tokens.iter().map(|t| emb.lookup(t)).collect();
            let targets = match (&ex.node_labels, interior) {
                (Some(labels), true) => labels.iter().enumerate().filter_map(|(n, l)| l.map(|l| (n, l))).collect(),
                _ => vec![(tree.root(), ex.label)],
            };
            Ok(Prepared { tree, inputs, targets })
        })
        .collect()
}

/// Share of examples whose root prediction equals the sentence label.
pub fn root_accuracy(params: &ModelParams, examples: &[SstExample], emb: &EmbeddingTable) -> Result<f64, ModelError> {
    let prepared = prepare(examples, emb, false)?;
    accuracy(params, &prepared)
}

fn accuracy(params: &ModelParams, data: &[Prepared<'_>]) -> Result<f64, ModelError> {
    if data.is_empty() {
        return Ok(0.0);
    }
    let hits = data
        .par_iter()
        .map(|p| {
            let out = forward_with_inputs(params, &p.tree, &p.inputs)?;
            Ok(usize::from(out.root_prediction(&p.tree).label() == p.targets_root_label(&p.tree)))
        })
        .collect::<Result<Vec<usize>, ModelError>>()?;
    Ok(hits.iter().sum::<usize>() as f64 / data.len() as f64)
}

impl Prepared<'_> {
    fn targets_root_label(&self, tree: &DepTree) -> Sentiment {
        self.targets.iter().find(|(n, _)| *n == tree.root()).map(|(_, l)| *l).expect("root is always supervised")
    }
}

fn example_rng(seed: u64, epoch: usize, example: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((epoch as u64) << 32) | example as u64);
    rng
}

/// Trains on root labels (and interior labels if configured) with Adagrad,
/// keeping the parameters of the epoch with the best dev root accuracy.
/// Earlier epochs win ties.
pub fn train(
    mut params: ModelParams,
    train_set: &[SstExample],
    dev_set: &[SstExample],
    emb: &EmbeddingTable,
    cfg: &TrainConfig,
) -> Result<TrainReport, ModelError> {
    if train_set.is_empty() {
        return Err(ModelError::Data("empty training set".to_owned()));
    }
    if emb.dim() != params.embed_dim() {
        return Err(ModelError::Dimension(format!(
            "embeddings are {}-dimensional, model expects {}",
            emb.dim(),
            params.embed_dim()
        )));
    }
    if !(0.0..1.0).contains(&cfg.dropout) {
        return Err(ModelError::Data(format!("dropout {} outside [0, 1)", cfg.dropout)));
    }
    if dev_set.is_empty() {
        log::warn!("empty dev set; model selection will keep the first epoch");
    }

    let train_data = prepare(train_set, emb, cfg.supervise_interior)?;
    let dev_data = prepare(dev_set, emb, false)?;
    let optimizer = Adagrad::new(cfg.lr, cfg.eps);
    let batch_size = cfg.batch_size.max(1);
    let mut order: Vec<usize> = (0..train_data.len()).collect();
    let mut shuffle_rng = seeded_rng(cfg.seed);

    let mut best: Option<(usize, f64, ModelParams)> = None;
    let mut curve = Vec::with_capacity(cfg.epochs);

    for epoch in 1..=cfg.epochs {
        if cfg.shuffle {
            order.shuffle(&mut shuffle_rng);
        }
        let mut epoch_loss = 0.0;
        for batch in order.chunks(batch_size) {
            let results = batch
                .par_iter()
                .map(|&idx| {
                    let ex = &train_data[idx];
                    let mut rng = example_rng(cfg.seed, epoch, idx);
                    let dropout = (cfg.dropout > 0.0).then_some((cfg.dropout, &mut rng));
                    loss_and_grads(&params, &ex.tree, &ex.inputs, &ex.targets, dropout).map(|r| (idx, r))
                })
                .collect::<Result<Vec<_>, _>>()?;

            let mut total = params.zero_grads();
            for (idx, r) in &results {
                if !r.loss.is_finite() {
                    return Err(ModelError::NonFiniteLoss { example: *idx });
                }
                epoch_loss += r.loss;
                total.add(&r.grads);
            }
            apply_update(&mut params, &total, batch.len(), cfg.weight_decay, &optimizer)?;
        }

        let dev_accuracy = accuracy(&params, &dev_data)?;
        let train_loss = epoch_loss / train_data.len() as f64;
        log::info!("epoch {}: train loss {:.4}, dev accuracy {:.4}", epoch, train_loss, dev_accuracy);
        curve.push(EpochStats { epoch, train_loss, dev_accuracy });

        if best.as_ref().is_none_or(|(_, acc, _)| dev_accuracy > *acc) {
            best = Some((epoch, dev_accuracy, params.clone()));
        }
    }

    Ok(match best {
        Some((epoch, _, snapshot)) => TrainReport { params: snapshot, best_epoch: Some(epoch), curve },
        None => TrainReport { params, best_epoch: None, curve },
    })
}

fn apply_update(
    params: &mut ModelParams,
    total: &Grads,
    batch_len: usize,
    weight_decay: f64,
    optimizer: &Adagrad,
) -> Result<(), ModelError> {
    let scale = 1.0 / batch_len as f64;
    let store = params.store_mut();
    store.accumulate_grads(&total.0, scale);
    if weight_decay > 0.0 {
        for (slot, p) in store.iter_mut().enumerate() {
            if !Grads::is_bias_slot(slot) {
                let value = p.value.clone();
                p.grad.add_scaled(weight_decay, &value);
            }
        }
    }
    optimizer.step(store)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtlstm::params::{CandidateActivation, ModelShape};

    fn example(tokens: &[&str], parents: &[usize], label: Sentiment) -> SstExample {
        SstExample {
            tokens: tokens.iter().map(|s| s.to_string()).collect(),
            parents: parents.to_vec(),
            label,
            node_labels: None,
        }
    }

    fn emb() -> EmbeddingTable {
        let mut e = EmbeddingTable::new(3);
        e.insert("good", &[1.0, 0.2, -0.3]);
        e.insert("bad", &[-0.8, 0.4, 0.5]);
        e.insert("food", &[0.1, -0.9, 0.2]);
        e
    }

    fn shape() -> ModelShape {
        ModelShape { embed_dim: 3, hidden_dim: 4, activation: CandidateActivation::Tanh }
    }

    #[test]
    fn zero_epochs_returns_initial() {
        let m = ModelParams::new(shape(), 5).unwrap();
        let data = vec![example(&["good", "food"], &[2, 0], Sentiment::Positive)];
        let cfg = TrainConfig { epochs: 0, ..TrainConfig::default() };
        let r = train(m.clone(), &data, &data, &emb(), &cfg).unwrap();
        assert_eq!(r.params, m);
        assert!(r.curve.is_empty());
        assert_eq!(r.best_epoch, None);
    }

    #[test]
    fn single_example_loss_decreases() {
        let m = ModelParams::new(shape(), 5).unwrap();
        let data = vec![example(&["good", "food"], &[2, 0], Sentiment::Positive)];
        let cfg = TrainConfig { epochs: 5, lr: 0.1, weight_decay: 0.0, ..TrainConfig::default() };
        let r = train(m, &data, &data, &emb(), &cfg).unwrap();
        let losses: Vec<f64> = r.curve.iter().map(|s| s.train_loss).collect();
        assert!(losses.windows(2).all(|w| w[1] < w[0]), "{:?}", losses);
    }

    #[test]
    fn empty_train_set_is_rejected() {
        let m = ModelParams::new(shape(), 5).unwrap();
        assert!(matches!(train(m, &[], &[], &emb(), &TrainConfig::default()), Err(ModelError::Data(_))));
    }

    #[test]
    fn identical_runs_match() {
        let data = vec![
            example(&["good", "food"], &[2, 0], Sentiment::Positive),
            example(&["bad", "food"], &[2, 0], Sentiment::Negative),
            example(&["food"], &[0], Sentiment::Neutral),
        ];
        let cfg = TrainConfig { epochs: 3, batch_size: 2, dropout: 0.3, seed: 17, ..TrainConfig::default() };
        let run = || train(ModelParams::new(shape(), 2).unwrap(), &data, &data, &emb(), &cfg).unwrap();
        let (a, b) = (run(), run());
        assert_eq!(a.params, b.params);
        assert_eq!(a.curve, b.curve);
    }
}
