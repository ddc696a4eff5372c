use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use taste::corpus::{
    load_embeddings_filtered, read_conllu_lenient, read_predictions, read_sst, read_sst_split, read_triplet_gold,
    write_prediction, EmbeddingTable, PredictionRecord, SstExample,
};
use taste::dtlstm::{
    load_checkpoint, root_accuracy, save_checkpoint, train, tree_forward, ModelError, ModelParams, ModelShape,
};
use taste::eval::{evaluate, EvalReport};
use taste::extraction::extract_triplets;

use crate::config::{input, output, Config};
use crate::error::CliError;

fn load_sst(path: &Path) -> Result<Vec<SstExample>, CliError> {
    Ok(if path.is_dir() { read_sst(path)? } else { read_sst_split(path)? })
}

fn vocabulary<'a>(words: impl Iterator<Item = &'a str>) -> HashSet<String> {
    let mut vocab = HashSet::new();
    for w in words {
        vocab.insert(w.to_owned());
        vocab.insert(w.to_lowercase());
    }
    vocab
}

/// Width of the first vector in an embedding file.
fn embedding_file_dim(path: &Path) -> Result<Option<usize>, CliError> {
    let reader = BufReader::new(File::open(path)?);
    for line in reader.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            return Ok(Some(line.trim_end().split(' ').count().saturating_sub(1)));
        }
    }
    Ok(None)
}

fn load_embeddings_for(path: &Path, dim: usize, vocab: &HashSet<String>) -> Result<EmbeddingTable, CliError> {
    if let Some(file_dim) = embedding_file_dim(path)? {
        if file_dim != dim {
            return Err(ModelError::Dimension(format!(
                "embedding file {} has {}-dimensional vectors, model expects {}",
                path.display(),
                file_dim,
                dim
            ))
            .into());
        }
    }
    let table = load_embeddings_filtered(path, dim, Some(vocab))?;
    log::info!("loaded {} embeddings ({} malformed lines skipped)", table.len(), table.skipped());
    Ok(table)
}

pub fn cmd_train(cfg: &Config) -> Result<(), CliError> {
    let emb_path = input(&cfg.paths.embeddings, "embeddings")?;
    let train_path = input(&cfg.paths.sst_train, "sst_train")?;
    let dev_path = input(&cfg.paths.sst_dev, "sst_dev")?;
    let ckpt_path = output(&cfg.paths.checkpoint, "checkpoint")?;
    let curve_path = output(&cfg.paths.curve, "curve")?;

    let train_set = load_sst(&train_path)?;
    let dev_set = load_sst(&dev_path)?;
    log::info!("{} training and {} dev sentences", train_set.len(), dev_set.len());
    let vocab = vocabulary(train_set.iter().chain(&dev_set).flat_map(|e| e.tokens.iter().map(String::as_str)));
    let emb = load_embeddings_for(&emb_path, cfg.model.embed_dim, &vocab)?;

    let shape = ModelShape {
        embed_dim: cfg.model.embed_dim,
        hidden_dim: cfg.model.hidden_dim,
        activation: cfg.model.candidate_activation,
    };
    let params = ModelParams::new(shape, cfg.seed)?;
    let tc = cfg.train_config();
    if tc.epochs == 0 {
        log::warn!("epochs = 0: saving the initial parameters");
    }
    let report = train(params, &train_set, &dev_set, &emb, &tc)?;
    save_checkpoint(&ckpt_path, &report.params, emb.content_hash())?;

    let mut curve = BufWriter::new(File::create(&curve_path)?);
    writeln!(curve, "epoch\ttrain_loss\tdev_accuracy")?;
    for s in &report.curve {
        writeln!(curve, "{}\t{:.6}\t{:.6}", s.epoch, s.train_loss, s.dev_accuracy)?;
    }
    curve.flush()?;

    match report.best_epoch {
        Some(e) => {
            let acc = root_accuracy(&report.params, &dev_set, &emb)?;
            log::info!("kept epoch {} (dev accuracy {:.4})", e, acc);
        }
        None => log::info!("no epochs run"),
    }
    log::info!("checkpoint written to {}", ckpt_path.display());
    Ok(())
}

pub fn cmd_extract(cfg: &Config) -> Result<(), CliError> {
    let ckpt_path = input(&cfg.paths.checkpoint, "checkpoint")?;
    let parses_path = input(&cfg.paths.parses, "parses")?;
    let emb_path = input(&cfg.paths.embeddings, "embeddings")?;
    let out_path = output(&cfg.paths.predictions, "predictions")?;
    let methods = cfg.methods()?;
    let opts = cfg.extract_options();

    let ckpt = load_checkpoint(&ckpt_path)?;
    let params = ckpt.params;
    let sentences = read_conllu_lenient(&parses_path)?;
    let trees: Vec<_> = sentences.iter().filter_map(|s| s.as_ref().ok()).collect();

    let emb = if trees.is_empty() {
        EmbeddingTable::new(params.embed_dim())
    } else {
        let vocab = vocabulary(trees.iter().flat_map(|t| t.tokens().iter().map(|tok| tok.form.as_str())));
        let emb = load_embeddings_for(&emb_path, params.embed_dim(), &vocab)?;
        if ckpt.embedding_hash != [0; 32] && ckpt.embedding_hash != emb.content_hash() {
            log::warn!("embedding file differs from the one the checkpoint was trained with");
        }
        emb
    };

    let records = sentences
        .par_iter()
        .enumerate()
        .map(|(i, parsed)| -> Result<PredictionRecord, CliError> {
            let tree = match parsed {
                Ok(t) => t,
                Err(e) => {
                    log::warn!("sentence {} rejected: {}", i, e);
                    return Ok(PredictionRecord {
                        sentence: i,
                        sent_id: None,
                        tokens: Vec::new(),
                        triplets: Vec::new(),
                        node_log_probs: None,
                        error: Some(e.to_string()),
                    });
                }
            };
            let out = tree_forward(&params, tree, &emb).map_err(|e| match e {
                ModelError::Dimension(_) => CliError::Model(e),
                other => CliError::Model(ModelError::Data(format!("sentence {}: {}", i, other))),
            })?;
            let triplets = extract_triplets(tree, &out.predictions, &methods, &opts);
            Ok(PredictionRecord {
                sentence: i,
                sent_id: tree.comment_value("sent_id").map(str::to_owned),
                tokens: tree.forms(),
                triplets: triplets.iter().map(|t| t.to_predicted(tree)).collect(),
                node_log_probs: cfg
                    .extract
                    .node_log_probs
                    .then(|| out.predictions.iter().map(|p| p.log_probs).collect()),
                error: None,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut w = BufWriter::new(File::create(&out_path)?);
    for r in &records {
        write_prediction(&mut w, r)?;
    }
    w.flush()?;
    let rejected = records.iter().filter(|r| r.error.is_some()).count();
    log::info!("{} sentences written to {} ({} rejected)", records.len(), out_path.display(), rejected);
    Ok(())
}

pub fn cmd_evaluate(cfg: &Config) -> Result<EvalReport, CliError> {
    let pred_path = input(&cfg.paths.predictions, "predictions")?;
    let gold_path = input(&cfg.paths.gold, "gold")?;
    let methods = cfg.methods()?;
    let predictions = read_predictions(&pred_path)?;
    let gold = read_triplet_gold(&gold_path)?;
    let dataset = cfg
        .eval
        .dataset
        .clone()
        .unwrap_or_else(|| gold_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    let report = evaluate(&dataset, &predictions, &gold, &methods)?;

    if cfg.paths.report.is_some() {
        let prefix = output(&cfg.paths.report, "report")?;
        fs::write(with_suffix(&prefix, "txt"), report.render_text())?;
        fs::write(with_suffix(&prefix, "jsonl"), report.render_jsonl())?;
    }
    Ok(report)
}

fn with_suffix(prefix: &Path, ext: &str) -> std::path::PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    s.into()
}
