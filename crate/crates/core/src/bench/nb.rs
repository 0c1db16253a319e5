//! Multinomial Naive Bayes baseline with add-one smoothing.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{train_test_split, Label, LabeledCorpus};
use crate::error::{Error, Result};
use crate::rng::tag;
use crate::textproc::FreqVector;

/// Class order used by every per-class array.
pub const CLASSES: [Label; 2] = [Label::Positive, Label::Negative];

fn class_index(l: Label) -> usize {
    match l {
        Label::Positive => 0,
        Label::Negative => 1,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    /// Indexed as [`CLASSES`].
    pub class_log_priors: [f64; 2],
    pub vocabulary: Vec<String>,
    pub word_log_likelihoods: BTreeMap<String, [f64; 2]>,
    pub smoothing: f64,
    pub vocab_size: usize,
    pub drop_top: usize,
    pub train_size: usize,
}

/// Trains on the documents at `train`. The vocabulary is the training
/// frequency ranks `drop_top + 1 ..= vocab_size`, ties broken by word.
pub fn nb_train_on(corpus: &LabeledCorpus, train: &[usize], vocab_size: usize, drop_top: usize) -> Result<NbModel> {
    if drop_top >= vocab_size {
        return Err(Error::InvalidArgument(format!(
            "drop_top ({drop_top}) must be below vocab_size ({vocab_size})"
        )));
    }
    let mut docs_per_class = [0usize; 2];
    let mut total = FreqVector::new();
    for &i in train {
        let d = &corpus.docs[i];
        docs_per_class[class_index(d.label)] += 1;
        total.merge(&d.fv);
    }
    if docs_per_class.contains(&0) {
        return Err(Error::SingleClass);
    }
    let ranked = total.ranked();
    let vocabulary: Vec<String> = ranked
        .iter()
        .take(vocab_size)
        .skip(drop_top)
        .map(|(w, _)| w.to_string())
        .collect();
    let position: HashMap<&str, usize> = vocabulary
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();

    let mut counts = vec![[0u64; 2]; vocabulary.len()];
    let mut class_mass = [0u64; 2];
    for &i in train {
        let d = &corpus.docs[i];
        let c = class_index(d.label);
        for (w, f) in d.fv.iter() {
            if let Some(&k) = position.get(w) {
                counts[k][c] += f;
                class_mass[c] += f;
            }
        }
    }
    let smoothing = 1.0;
    let v = vocabulary.len() as f64;
    let word_log_likelihoods = vocabulary
        .iter()
        .zip(&counts)
        .map(|(w, c)| {
            let ll = [0, 1].map(|k| ((c[k] as f64 + smoothing) / (class_mass[k] as f64 + smoothing * v)).ln());
            (w.clone(), ll)
        })
        .collect();
    let n = train.len() as f64;
    Ok(NbModel {
        class_log_priors: docs_per_class.map(|k| (k as f64 / n).ln()),
        vocabulary,
        word_log_likelihoods,
        smoothing,
        vocab_size,
        drop_top,
        train_size: train.len(),
    })
}

/// Trains on a seeded random `train_fraction` of the corpus; the split is
/// the one used by the first trial of [`nb_evaluate`].
pub fn nb_train(
    corpus: &LabeledCorpus,
    train_fraction: f64,
    vocab_size: usize,
    drop_top: usize,
    seed: u64,
) -> Result<NbModel> {
    let (train, _) = train_test_split(corpus.len(), train_fraction, seed, trial_stream(0))?;
    nb_train_on(corpus, &train, vocab_size, drop_top)
}

fn trial_stream(trial: usize) -> u64 {
    tag("nb") ^ trial as u64
}

/// Log prior plus frequency-weighted log likelihoods per class, indexed as
/// [`CLASSES`]. Out-of-vocabulary words are ignored; ties go negative.
pub fn nb_classify(m: &NbModel, fv: &FreqVector) -> (Label, [f64; 2]) {
    let mut s = m.class_log_priors;
    for (w, f) in fv.iter() {
        if let Some(ll) = m.word_log_likelihoods.get(w) {
            s[0] += f as f64 * ll[0];
            s[1] += f as f64 * ll[1];
        }
    }
    let label = if s[0] > s[1] { Label::Positive } else { Label::Negative };
    (label, s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NbEvaluation {
    pub accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub vocabulary_size: usize,
    pub train_size: usize,
    pub trials: usize,
    pub seed: u64,
}

/// Mean held-out accuracy over `trials` independent seeded splits.
pub fn nb_evaluate(
    corpus: &LabeledCorpus,
    train_fraction: f64,
    vocab_size: usize,
    drop_top: usize,
    trials: usize,
    seed: u64,
) -> Result<NbEvaluation> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let runs: Vec<(f64, usize, usize)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (train, test) = train_test_split(corpus.len(), train_fraction, seed, trial_stream(t))?;
            let m = nb_train_on(corpus, &train, vocab_size, drop_top)?;
            let correct = test
                .iter()
                .filter(|&&i| nb_classify(&m, &corpus.docs[i].fv).0 == corpus.docs[i].label)
                .count();
            Ok((correct as f64 / test.len() as f64, m.vocabulary.len(), m.train_size))
        })
        .collect::<Result<_>>()?;
    let accuracies: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let mean = accuracies.iter().sum::<f64>() / trials as f64;
    let var = accuracies.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / trials as f64;
    Ok(NbEvaluation {
        mean_accuracy: mean,
        std_accuracy: var.sqrt(),
        vocabulary_size: runs[0].1,
        train_size: runs[0].2,
        accuracies,
        trials,
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InformativeMode {
    /// `P(w|c_i) / P(w|c_j)`
    Ratio,
    /// `log P(w|c_i) - log P(w|c_j)`, the word's share of the log-score margin.
    Difference,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InformativeWord {
    pub word: String,
    /// The class the word favours.
    pub class: Label,
    pub value: f64,
}

fn informative_value(ll: &[f64; 2], favoured: usize, mode: InformativeMode) -> f64 {
    let diff = ll[favoured] - ll[1 - favoured];
    match mode {
        InformativeMode::Ratio => diff.exp(),
        InformativeMode::Difference => diff,
    }
}

fn rank(mut v: Vec<InformativeWord>, n: usize) -> Vec<InformativeWord> {
    v.sort_by(|a, b| b.value.total_cmp(&a.value).then_with(|| a.word.cmp(&b.word)));
    v.truncate(n);
    v
}

/// Words ranked by how strongly they favour one class over the other. With
/// `weights`, only words of that vector count and each value is scaled by
/// the word's frequency there.
pub fn nb_informative_words(
    m: &NbModel,
    n: usize,
    mode: InformativeMode,
    weights: Option<&FreqVector>,
) -> Vec<InformativeWord> {
    let items = m
        .word_log_likelihoods
        .iter()
        .filter_map(|(w, ll)| {
            let f = match weights {
                Some(fv) => fv.get(w),
                None => 1,
            };
            (f > 0).then(|| {
                let favoured = if ll[0] >= ll[1] { 0 } else { 1 };
                InformativeWord {
                    word: w.clone(),
                    class: CLASSES[favoured],
                    value: f as f64 * informative_value(ll, favoured, mode),
                }
            })
        })
        .collect();
    rank(items, n)
}

/// Top `n` words for each class (indexed as [`CLASSES`]), ranked by the
/// value in favour of that class.
pub fn nb_informative_by_class(
    m: &NbModel,
    n: usize,
    mode: InformativeMode,
    weights: Option<&FreqVector>,
) -> [Vec<InformativeWord>; 2] {
    [0, 1].map(|c| {
        let items = m
            .word_log_likelihoods
            .iter()
            .filter_map(|(w, ll)| {
                let f = weights.map_or(1, |fv| fv.get(w));
                (f > 0).then(|| InformativeWord {
                    word: w.clone(),
                    class: CLASSES[c],
                    value: f as f64 * informative_value(ll, c, mode),
                })
            })
            .collect();
        rank(items, n)
    })
}
