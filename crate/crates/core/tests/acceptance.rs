//! Acceptance checks. Each test prints one `PASS`/`FAIL` line.
//!
//! Run with `cargo test -p taste --test acceptance -- --nocapture` to see the
//! lines. The two data-dependent checks need external corpora and are
//! `#[ignore]`d; `data_dependent_status` reports whether they can run.

use std::collections::HashMap;
use std::env;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use taste::corpus::{
    load_embeddings_filtered, parse_triplet_gold, read_conllu_lenient, read_sst, read_triplet_gold, ConlluReader,
    DepTree, EmbeddingTable, PredictionRecord, Span,
};
use taste::dtlstm::{
    forward_with_inputs, load_checkpoint, loss_and_grads, train, tree_forward, CandidateActivation, ModelParams,
    ModelShape, TrainConfig,
};
use taste::eval::{evaluate, gleu, span_match, EvalReport};
use taste::extraction::{extract_triplets, recursive_search, ExtractOptions, Method};
use taste::neural::{gradient_check, Sampling};
use taste::Sentiment;

fn report(name: &str, ok: bool, detail: &str) {
    println!("{} {}: {}", if ok { "PASS" } else { "FAIL" }, name, detail);
}

/// Random tree over `n` tokens: a shuffled order, each node after the first
/// attached to a random earlier node.
fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> DepTree {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut heads = vec![None; n];
    for k in 1..n {
        heads[order[k]] = Some(order[rng.gen_range(0..k)]);
    }
    let forms: Vec<String> = (0..n).map(|i| format!("w{}", i)).collect();
    DepTree::from_heads(&forms, &heads).unwrap()
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Per-scalar relative error as the criterion defines it, plus diagnostics
/// that separate real gradient bugs from round-off in the finite difference.
#[test]
fn gradient_fidelity() {
    let shape = ModelShape { embed_dim: 8, hidden_dim: 8, activation: CandidateActivation::Tanh };
    let h = 1e-5;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = (0.0f64, String::new());
    let mut worst_norm = 0.0f64;
    // Largest |analytic| and |analytic - numeric| among scalars over 1e-4.
    let mut flagged = (0usize, 0.0f64, 0.0f64);
    for t in 0..20 {
        let n = rng.gen_range(1..=6);
        let tree = random_tree(&mut rng, n);
        let inputs: Vec<Vec<f64>> = (0..n).map(|_| random_vec(&mut rng, 8)).collect();
        let refs: Vec<&[f64]> = inputs.iter().map(Vec::as_slice).collect();
        let label = Sentiment::from_index(rng.gen_range(0..3)).unwrap();
        let targets = [(tree.root(), label)];
        let params = ModelParams::new(shape, 100 + t).unwrap();

        let analytic = loss_and_grads(&params, &tree, &refs, &targets, None).unwrap().grads;
        let loss = |s: &taste::neural::ParamStore| {
            let p = ModelParams::from_store(shape, s.clone()).unwrap();
            loss_and_grads(&p, &tree, &refs, &targets, None).unwrap().loss
        };
        let mut store = params.clone().into_store();
        let r = gradient_check(loss, &mut store, &analytic.0, h, Sampling::All);
        for (name, err) in &r.per_param {
            if *err > worst.0 {
                worst = (*err, name.clone());
            }
        }

        for (slot, a) in analytic.0.iter().enumerate() {
            let id = store.ids().nth(slot).unwrap();
            let mut diff2 = 0.0;
            let (mut a2, mut n2) = (0.0, 0.0);
            for pos in 0..a.len() {
                let orig = store.value(id).as_slice()[pos];
                store.value_mut(id).as_mut_slice()[pos] = orig + h;
                let plus = loss(&store);
                store.value_mut(id).as_mut_slice()[pos] = orig - h;
                let minus = loss(&store);
                store.value_mut(id).as_mut_slice()[pos] = orig;
                let num = (plus - minus) / (2.0 * h);
                let av = a.as_slice()[pos];
                if taste::neural::relative_error(av, num) >= 1e-4 {
                    flagged = (flagged.0 + 1, flagged.1.max(av.abs()), flagged.2.max((av - num).abs()));
                }
                diff2 += (av - num).powi(2);
                a2 += av * av;
                n2 += num * num;
            }
            let denom = f64::sqrt(a2).max(f64::sqrt(n2)).max(1e-8);
            worst_norm = worst_norm.max(diff2.sqrt() / denom);
        }
    }
    let ok = worst.0 < 1e-4;
    report(
        "gradient fidelity",
        ok,
        &format!(
            "20 trees, worst scalar relative error {:.2e} ({}); {} scalars over 1e-4, all with |grad| <= {:.1e} \
             and |analytic - numeric| <= {:.1e}; worst per-tensor norm relative error {:.1e}",
            worst.0, worst.1, flagged.0, flagged.1, flagged.2, worst_norm
        ),
    );
    // Guard against real gradient errors: disagreement confined to scalars
    // whose size is at the round-off level of a 1e-5 central difference.
    assert!(worst_norm < 1e-6, "per-tensor norm relative error {}", worst_norm);
    assert!(flagged.0 == 0 || (flagged.1 < 1e-6 && flagged.2 < 1e-10), "{:?}", flagged);
}

#[test]
fn structural_invariants() {
    let shape = ModelShape { embed_dim: 6, hidden_dim: 5, activation: CandidateActivation::Tanh };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut leaf_ok = true;
    for t in 0..200 {
        let n = rng.gen_range(1..=12);
        let tree = random_tree(&mut rng, n);
        let inputs: Vec<Vec<f64>> = (0..n).map(|_| random_vec(&mut rng, 6)).collect();
        let refs: Vec<&[f64]> = inputs.iter().map(Vec::as_slice).collect();
        let params = ModelParams::random_uniform(shape, 0.8, t).unwrap();
        let out = forward_with_inputs(&params, &tree, &refs).unwrap();
        for node in 0..n {
            let s = &out.states[node];
            let kids = tree.children(node);
            assert_eq!(s.forgets.len(), kids.len());
            if kids.is_empty() {
                leaf_ok &= s.h_tilde.iter().all(|&v| v == 0.0);
            }
            for j in 0..5 {
                let lhs = s.c[j] - s.i[j] * s.u[j];
                let rhs: f64 = kids.iter().zip(&s.forgets).map(|(&k, f)| f[j] * out.states[k].c[j]).sum();
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    let ok = worst <= 1e-10 && leaf_ok;
    report(
        "structural invariants",
        ok,
        &format!("200 trees, max |c - i*u - sum f*c_k| = {:.1e}, leaf h~ zero: {}", worst, leaf_ok),
    );
    assert!(ok);
}

fn oracle_preorder(heads: &[Option<usize>], node: usize, out: &mut Vec<usize>) {
    out.push(node);
    for child in (0..heads.len()).filter(|&m| heads[m] == Some(node)) {
        oracle_preorder(heads, child, out);
    }
}

#[test]
fn search_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut hn_hits = 0;
    let mut ss_hits = 0;
    let total = 500;
    for _ in 0..total {
        let n = rng.gen_range(1..=8);
        let tree = random_tree(&mut rng, n);
        // Coarse logits so that exact ties are common.
        let preds: Vec<_> = (0..n)
            .map(|_| {
                let l: Vec<f64> = (0..3).map(|_| rng.gen_range(0..3) as f64).collect();
                taste::dtlstm::NodePrediction::from_logits(&l).unwrap()
            })
            .collect();
        let root = rng.gen_range(0..n);
        let target = Sentiment::from_index(rng.gen_range(0..3)).unwrap();
        let exclusion = if rng.gen_bool(0.5) {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(a..n);
            Some(Span::new(a, b + 1))
        } else {
            None
        };

        let heads: Vec<Option<usize>> = (0..n).map(|i| tree.head(i)).collect();
        let mut visit = Vec::new();
        oracle_preorder(&heads, root, &mut visit);
        let pool: Vec<usize> =
            visit.into_iter().filter(|&v| exclusion.is_none_or(|s| !(s.start <= v && v < s.end))).collect();
        let best = pool.iter().map(|&v| preds[v].log_probs[target.index()]).fold(f64::NEG_INFINITY, f64::max);
        let expect_hn = pool.iter().rev().find(|&&v| preds[v].log_probs[target.index()] == best).copied();
        let mut expect_ss: Vec<usize> = pool
            .iter()
            .copied()
            .filter(|&v| {
                let lp = preds[v].log_probs;
                let max = lp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                // Highest class index among the maxima.
                (0..3).rev().find(|&c| lp[c] == max) == Some(target.index())
            })
            .collect();
        expect_ss.sort();

        let got = recursive_search(&tree, &preds, root, target, exclusion);
        hn_hits +=
            usize::from(got.hn == expect_hn && got.hn_activation == expect_hn.map(|v| preds[v].log_prob(target)));
        ss_hits += usize::from(got.ss == expect_ss && got.empty == pool.is_empty());
    }
    let ok = hn_hits == total && ss_hits == total;
    report("search oracle", ok, &format!("HN {}/{} SS {}/{}", hn_hits, total, ss_hits, total));
    assert!(ok);
}

/// Clipped n-gram overlap by exhaustive enumeration of sub-sequences.
fn brute_gleu(cand: &[String], refr: &[String]) -> f64 {
    let grams = |s: &[String]| -> Vec<Vec<String>> {
        let mut out = Vec::new();
        for n in 1..=4 {
            for i in 0..s.len() {
                if i + n <= s.len() {
                    out.push(s[i..i + n].to_vec());
                }
            }
        }
        out
    };
    let cg = grams(cand);
    let rg = grams(refr);
    if cg.is_empty() || rg.is_empty() {
        return 0.0;
    }
    let mut used = vec![false; rg.len()];
    let mut matches = 0usize;
    for g in &cg {
        if let Some(j) = (0..rg.len()).find(|&j| !used[j] && rg[j] == *g) {
            used[j] = true;
            matches += 1;
        }
    }
    (matches as f64 / cg.len() as f64).min(matches as f64 / rg.len() as f64)
}

#[test]
fn gleu_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let vocab = ["a", "b", "c", "d", "e"];
    let mut agree = 0;
    for _ in 0..200 {
        let seq = |rng: &mut ChaCha8Rng| -> Vec<String> {
            let len = rng.gen_range(0..=10);
            (0..len).map(|_| vocab[rng.gen_range(0..5)].to_owned()).collect()
        };
        let a = seq(&mut rng);
        let b = seq(&mut rng);
        agree += usize::from(gleu(&a, &b, 4).value == brute_gleu(&a, &b));
    }
    let fixed = [
        (gleu(&["pretty", "good"], &["pretty", "good"], 4).value, 1.0),
        (gleu(&["food"], &["service"], 4).value, 0.0),
        (gleu(&["good"], &["pretty", "good"], 4).value, 1.0 / 3.0),
    ];
    let fixed_ok = fixed.iter().all(|(got, want)| (got - want).abs() < 1e-12);
    let ok = agree == 200 && fixed_ok;
    report("GLEU oracle", ok, &format!("{}/200 random pairs agree, fixed cases ok: {}", agree, fixed_ok));
    assert!(ok);
}

#[test]
fn matching_rules() {
    let cases = [
        ("red cake", "the red cake", true),
        ("the red cake", "red cake", true),
        ("cake", "the red cake", true),
        ("the red cake", "the red cake", true),
        ("Red Cake", "the red cake", true),
        ("pancake", "cake", false),
        ("cake", "pancake", false),
        ("the cake", "red cake", false),
        ("red the", "the red cake", false),
        ("", "cake", false),
        ("cake", "", false),
    ];
    let mut wrong = Vec::new();
    for (p, g, want) in cases {
        let pw: Vec<&str> = p.split_whitespace().collect();
        let gw: Vec<&str> = g.split_whitespace().collect();
        if span_match(&pw, &gw) != want {
            wrong.push(format!("{:?}/{:?}", p, g));
        }
    }
    let ok = wrong.is_empty();
    report("matching rules", ok, &format!("{}/{} cases, wrong: {:?}", cases.len() - wrong.len(), cases.len(), wrong));
    assert!(ok);
}

const FIXTURE_PARSES: &str = include_str!("fixtures/pipeline.conllu");
const FIXTURE_GOLD: &str = include_str!("fixtures/pipeline_gold.txt");

/// Hand-assigned node predictions: one `(class, strength)` per token.
fn fixture_predictions() -> Vec<Vec<(Sentiment, f64)>> {
    use Sentiment::{Negative as G, Neutral as U, Positive as P};
    vec![
        vec![(U, 1.0), (U, 1.0), (P, 1.0), (P, 3.0)],
        vec![(U, 1.0), (G, 1.0), (G, 2.0)],
        vec![(U, 1.0), (U, 1.0), (P, 2.0), (G, 1.0)],
        vec![(U, 1.0), (P, 3.0), (U, 1.0), (U, 1.0)],
        vec![(P, 2.0), (P, 1.0), (U, 1.0)],
        vec![(U, 1.0), (U, 1.0), (P, 1.0), (P, 3.0), (U, 1.0), (U, 1.0), (U, 1.0), (G, 1.0), (G, 2.0)],
        vec![(U, 1.0), (U, 1.0), (U, 2.0), (U, 1.0)],
        vec![(U, 1.0), (U, 1.0), (U, 1.0), (U, 1.0)],
        vec![(U, 1.0), (U, 1.0), (U, 1.0), (P, 1.0), (P, 2.0)],
        vec![(P, 2.0), (P, 1.0), (U, 1.0), (P, 3.0), (U, 1.0)],
    ]
}

fn fixture_report() -> EvalReport {
    let trees = ConlluReader::new(std::io::Cursor::new(FIXTURE_PARSES)).collect::<Result<Vec<_>, _>>().unwrap();
    let gold = parse_triplet_gold(FIXTURE_GOLD).unwrap();
    let records: Vec<PredictionRecord> = trees
        .iter()
        .zip(fixture_predictions())
        .enumerate()
        .map(|(i, (tree, labels))| {
            let preds: Vec<_> = labels
                .iter()
                .map(|&(c, s)| {
                    let mut logits = [0.0; 3];
                    logits[c.index()] = s;
                    taste::dtlstm::NodePrediction::from_logits(&logits).unwrap()
                })
                .collect();
            let triplets = extract_triplets(tree, &preds, &Method::ALL, &ExtractOptions::default());
            PredictionRecord {
                sentence: i,
                sent_id: None,
                tokens: tree.forms(),
                triplets: triplets.iter().map(|t| t.to_predicted(tree)).collect(),
                node_log_probs: None,
                error: None,
            }
        })
        .collect();
    evaluate("fixture", &records, &gold, &Method::ALL).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12
}

fn std_of(values: &[f64]) -> f64 {
    let m = values.iter().sum::<f64>() / values.len() as f64;
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / values.len() as f64).sqrt()
}

#[test]
fn fixture_pipeline() {
    let r = fixture_report();
    let mut failures: Vec<String> = Vec::new();
    let mut check = |what: &str, ok: bool| {
        if !ok {
            failures.push(what.to_owned());
        }
    };

    // Hand counts: 13 predicted targets, 11 gold targets, 10 matched.
    let t = &r.targets;
    check("target counts", (t.predicted, t.gold, t.matched) == (13, 11, 10));
    check("target P", close(t.precision, 10.0 / 13.0));
    check("target R", close(t.recall, 10.0 / 11.0));
    // Eight exact target matches and two at 1/3 ("great food", "fast delivery").
    check("target GLEU mean", close(t.gleu.mean, 13.0 / 15.0));
    check("target GLEU sigma", close(t.gleu.std, 4.0 / 15.0));

    check("sentiment", (r.sentiment.matched, r.sentiment.correct) == (10, 8) && close(r.sentiment.accuracy, 0.8));

    // (method, opinion correct, triplet correct)
    for (m, ote, full) in [(Method::Hn, 7, 7), (Method::Ss, 9, 8), (Method::Union, 9, 8)] {
        let s = r.method(m).unwrap();
        let name = m.to_string();
        check(&format!("{} counts", name), (s.ote_correct, s.full_correct) == (ote, full));
        check(&format!("{} conditioned", name), close(s.conditioned_ote.f1, ote as f64 / 10.0));
        check(&format!("{}-3 conditioned", name), close(s.conditioned_full.f1, full as f64 / 10.0));
        let c = &s.conditioned_full;
        check(&format!("{}-3 P=R=F1", name), c.precision == c.recall && close(c.recall, c.f1));
        check(&format!("{} triplet P", name), close(s.full.precision, full as f64 / 13.0));
        check(&format!("{} triplet R", name), close(s.full.recall, full as f64 / 11.0));
        check(&format!("{} triplet F1", name), close(s.full.f1, 2.0 * full as f64 / 24.0));
        check(&format!("{} opinion P", name), close(s.ote.precision, ote as f64 / 13.0));
    }

    let hn = &r.method(Method::Hn).unwrap().opinion_gleu;
    check("HN opinion GLEU", hn.pairs == 7 && close(hn.mean, 1.0) && close(hn.std, 0.0));
    let ss_values = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0 / 3.0, 1.0 / 3.0];
    for m in [Method::Ss, Method::Union] {
        let g = &r.method(m).unwrap().opinion_gleu;
        check(
            &format!("{} opinion GLEU", m),
            g.pairs == 9 && close(g.mean, 23.0 / 27.0) && close(g.std, std_of(&ss_values)),
        );
    }
    // Whole sentence against single-word opinions: 1 / (number of 1..4-grams).
    let full = [0.1, 1.0 / 6.0, 0.1, 0.1, 1.0 / 6.0, 1.0 / 30.0, 1.0 / 30.0, 0.1, 1.0 / 14.0, 1.0 / 14.0];
    let fs = &r.full_sentence_gleu;
    check(
        "full-sentence GLEU",
        fs.pairs == 10 && close(fs.mean, full.iter().sum::<f64>() / 10.0) && close(fs.std, std_of(&full)),
    );

    let ok = failures.is_empty();
    report("fixture pipeline", ok, &format!("10 sentences, mismatches: {:?}", failures));
    assert!(ok, "{}", r.render_text());
}

#[test]
fn ordering_property() {
    // The invariant check runs inside `evaluate`; exercise it on the fixture
    // and on many random prediction sets over the same gold.
    let fixture_ok = fixture_report().check_invariants().is_ok();
    let trees = ConlluReader::new(std::io::Cursor::new(FIXTURE_PARSES)).collect::<Result<Vec<_>, _>>().unwrap();
    let gold = parse_triplet_gold(FIXTURE_GOLD).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut random_ok = 0;
    let runs = 50;
    for _ in 0..runs {
        let records: Vec<PredictionRecord> = trees
            .iter()
            .enumerate()
            .map(|(i, tree)| {
                let preds: Vec<_> = (0..tree.len())
                    .map(|_| {
                        let l: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
                        taste::dtlstm::NodePrediction::from_logits(&l).unwrap()
                    })
                    .collect();
                let exclude = rng.gen_bool(0.5);
                let opts = ExtractOptions { exclude_target: exclude, ..ExtractOptions::default() };
                let triplets = extract_triplets(tree, &preds, &Method::ALL, &opts);
                PredictionRecord {
                    sentence: i,
                    sent_id: None,
                    tokens: tree.forms(),
                    triplets: triplets.iter().map(|t| t.to_predicted(tree)).collect(),
                    node_log_probs: None,
                    error: None,
                }
            })
            .collect();
        if let Ok(r) = evaluate("random", &records, &gold, &Method::ALL) {
            let hn = r.method(Method::Hn).unwrap();
            let ss = r.method(Method::Ss).unwrap();
            let un = r.method(Method::Union).unwrap();
            let holds = un.ote.recall >= hn.ote.recall.max(ss.ote.recall)
                && un.full.recall >= hn.full.recall.max(ss.full.recall)
                && r.methods.iter().all(|m| m.full.f1 <= m.ote.f1 && m.conditioned_full.f1 <= m.conditioned_ote.f1);
            random_ok += usize::from(holds);
        }
    }
    let ok = fixture_ok && random_ok == runs;
    report("ordering property", ok, &format!("fixture ok: {}, random runs ok: {}/{}", fixture_ok, random_ok, runs));
    assert!(ok);
}

fn env_path(key: &str) -> Option<PathBuf> {
    env::var_os(key).map(PathBuf::from).filter(|p| p.exists())
}

const SST_VARS: [&str; 2] = ["TASTE_SST_DIR", "TASTE_EMBEDDINGS"];
const E2E_VARS: [&str; 4] = ["TASTE_CHECKPOINT", "TASTE_EMBEDDINGS", "TASTE_14RES_CONLLU", "TASTE_14RES_GOLD"];

/// Always runs: reports the data-dependent criteria that cannot run here.
#[test]
fn data_dependent_status() {
    for (name, vars) in [("training sanity", &SST_VARS[..]), ("end-to-end ballpark", &E2E_VARS[..])] {
        let missing: Vec<&str> = vars.iter().copied().filter(|v| env_path(v).is_none()).collect();
        if missing.is_empty() {
            println!("READY {}: data present, run with --ignored", name);
        } else {
            report(name, false, &format!("not run, data unavailable (set {})", missing.join(", ")));
        }
    }
}

fn majority_share(examples: &[taste::corpus::SstExample]) -> f64 {
    let mut counts: HashMap<Sentiment, usize> = HashMap::new();
    for e in examples {
        *counts.entry(e.label).or_insert(0) += 1;
    }
    counts.values().copied().max().unwrap_or(0) as f64 / examples.len().max(1) as f64
}

fn embeddings_for<'a>(path: &PathBuf, words: impl Iterator<Item = &'a str>) -> EmbeddingTable {
    let mut vocab = std::collections::HashSet::new();
    for w in words {
        vocab.insert(w.to_owned());
        vocab.insert(w.to_lowercase());
    }
    load_embeddings_filtered(path, 300, Some(&vocab)).unwrap()
}

/// Needs `TASTE_SST_DIR` with `train/` and `dev/` splits and 300-d
/// `TASTE_EMBEDDINGS`.
#[test]
#[ignore = "needs SST and pre-trained embeddings"]
fn training_sanity() {
    let (Some(sst), Some(emb_path)) = (env_path(SST_VARS[0]), env_path(SST_VARS[1])) else {
        report("training sanity", false, "data unavailable");
        panic!("set TASTE_SST_DIR and TASTE_EMBEDDINGS");
    };
    let mut train_set = read_sst(sst.join("train")).unwrap();
    train_set.truncate(2000);
    let dev_set = read_sst(sst.join("dev")).unwrap();
    let emb =
        embeddings_for(&emb_path, train_set.iter().chain(&dev_set).flat_map(|e| e.tokens.iter().map(String::as_str)));
    let majority = majority_share(&dev_set);
    let shape = ModelShape { embed_dim: 300, hidden_dim: 150, activation: CandidateActivation::Tanh };

    let mut best_acc = 0.0f64;
    let mut early_peak = false;
    for seed in [1, 2, 3] {
        let cfg = TrainConfig { epochs: 10, seed, ..TrainConfig::default() };
        let r = train(ModelParams::new(shape, seed).unwrap(), &train_set, &dev_set, &emb, &cfg).unwrap();
        let acc = r.curve.iter().map(|s| s.dev_accuracy).fold(0.0, f64::max);
        best_acc = best_acc.max(acc);
        early_peak |= r.best_epoch.is_some_and(|e| e < cfg.epochs);
    }
    let ok = best_acc >= majority + 0.10 && early_peak;
    report(
        "training sanity",
        ok,
        &format!("dev accuracy {:.3} vs majority {:.3}, non-final best epoch seen: {}", best_acc, majority, early_peak),
    );
    assert!(ok);
}

/// Needs a full SST-trained `TASTE_CHECKPOINT`, `TASTE_EMBEDDINGS`, and the
/// 14res test split as parsed CoNLL-U plus gold triplets.
#[test]
#[ignore = "needs a trained model and the 14res test set"]
fn end_to_end_ballpark() {
    let paths: Vec<Option<PathBuf>> = E2E_VARS.iter().map(|v| env_path(v)).collect();
    let [Some(ckpt), Some(emb_path), Some(conllu), Some(gold_path)] = <[Option<PathBuf>; 4]>::try_from(paths).unwrap()
    else {
        report("end-to-end ballpark", false, "data unavailable");
        panic!("set {}", E2E_VARS.join(", "));
    };
    let model = load_checkpoint(ckpt).unwrap().params;
    let parsed = read_conllu_lenient(conllu).unwrap();
    let trees: Vec<&DepTree> = parsed.iter().filter_map(|t| t.as_ref().ok()).collect();
    let emb = embeddings_for(&emb_path, trees.iter().flat_map(|t| t.tokens().iter().map(|k| k.form.as_str())));
    let records: Vec<PredictionRecord> = parsed
        .iter()
        .enumerate()
        .map(|(i, t)| match t {
            Ok(tree) => {
                let out = tree_forward(&model, tree, &emb).unwrap();
                let triplets = extract_triplets(tree, &out.predictions, &Method::ALL, &ExtractOptions::default());
                PredictionRecord {
                    sentence: i,
                    sent_id: None,
                    tokens: tree.forms(),
                    triplets: triplets.iter().map(|x| x.to_predicted(tree)).collect(),
                    node_log_probs: None,
                    error: None,
                }
            }
            Err(e) => PredictionRecord {
                sentence: i,
                sent_id: None,
                tokens: vec![],
                triplets: vec![],
                node_log_probs: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let gold = read_triplet_gold(gold_path).unwrap();
    let r = evaluate("14res", &records, &gold, &Method::ALL).unwrap();
    let ss = r.method(Method::Ss).unwrap();
    let ok = (ss.full.recall - 0.493).abs() <= 0.10
        && (ss.full.precision - 0.293).abs() <= 0.10
        && (r.sentiment.accuracy - 0.740).abs() <= 0.08;
    report(
        "end-to-end ballpark",
        ok,
        &format!(
            "SS P {:.3} (0.293), R {:.3} (0.493), sentiment {:.3} (0.740)",
            ss.full.precision, ss.full.recall, r.sentiment.accuracy
        ),
    );
    assert!(ok, "{}", r.render_text());
}
