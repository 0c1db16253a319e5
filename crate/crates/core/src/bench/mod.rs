//! Classification benchmarks on labeled corpora.

mod nb;
mod sweep;

pub use nb::{
    nb_classify, nb_evaluate, nb_informative_by_class, nb_informative_words, nb_train,
    nb_train_on, InformativeMode, InformativeWord, NbEvaluation, NbModel,
};
pub use sweep::{binarization_sweep, coverage_removal_sweep, RemovalStrategy, SweepResult};

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::seq::index;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{tag, task_rng};
use crate::scoring::{score_table, MatchedDoc, ScoreResult};
use crate::textproc::{FreqVector, MatchIndex};

pub const DEFAULT_OVERLAP_BINS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Positive => "pos",
            Label::Negative => "neg",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pos" | "positive" | "1" | "+1" => Ok(Label::Positive),
            "neg" | "negative" | "-1" => Ok(Label::Negative),
            other => Err(Error::InvalidArgument(format!("unknown label `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prediction {
    Positive,
    Negative,
    Abstain,
}

impl Prediction {
    pub fn label(self) -> Option<Label> {
        match self {
            Prediction::Positive => Some(Label::Positive),
            Prediction::Negative => Some(Label::Negative),
            Prediction::Abstain => None,
        }
    }
}

impl From<Label> for Prediction {
    fn from(l: Label) -> Self {
        match l {
            Label::Positive => Prediction::Positive,
            Label::Negative => Prediction::Negative,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDoc {
    pub id: String,
    pub text: String,
    pub fv: FreqVector,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledCorpus {
    pub source: String,
    pub docs: Vec<LabeledDoc>,
}

impl LabeledCorpus {
    pub fn from_texts(source: &str, docs: Vec<(String, String, Label)>) -> Result<Self> {
        let mut ids: Vec<&str> = docs.iter().map(|(id, _, _)| id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("duplicate document id `{}`", w[0])));
        }
        let docs = docs
            .into_par_iter()
            .map(|(id, text, label)| LabeledDoc {
                fv: FreqVector::from_text(&text),
                id,
                text,
                label,
            })
            .collect();
        Ok(LabeledCorpus {
            source: source.to_string(),
            docs,
        })
    }

    /// Loads either a directory with `pos/` and `neg/` subdirectories of
    /// plain-text files or a `label<TAB>text` file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let source = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        if path.is_dir() {
            let mut docs = Vec::new();
            for label in [Label::Positive, Label::Negative] {
                let dir = path.join(label.as_str());
                let mut files: Vec<_> = fs::read_dir(&dir)
                    .map_err(|e| Error::io(&dir, e))?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.is_file())
                    .collect();
                files.sort();
                for f in files {
                    let bytes = fs::read(&f).map_err(|e| Error::io(&f, e))?;
                    let name = f.file_name().unwrap().to_string_lossy();
                    docs.push((
                        format!("{}/{name}", label.as_str()),
                        String::from_utf8_lossy(&bytes).into_owned(),
                        label,
                    ));
                }
            }
            Self::from_texts(&source, docs)
        } else {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            Self::parse_tsv(&source, &text)
        }
    }

    pub fn parse_tsv(source: &str, text: &str) -> Result<Self> {
        let mut docs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (label, body) = line.split_once('\t').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected `label<TAB>text`".into(),
            })?;
            let label: Label = label.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("unknown label `{}`", label.trim()),
            })?;
            docs.push((format!("line{}", i + 1), body.to_string(), label));
        }
        Self::from_texts(source, docs)
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.docs.iter().map(|d| d.label).collect()
    }

    pub fn class_indices(&self, label: Label) -> Vec<usize> {
        (0..self.docs.len())
            .filter(|&i| self.docs[i].label == label)
            .collect()
    }

    pub fn total_frequencies(&self) -> FreqVector {
        let mut fv = FreqVector::new();
        for d in &self.docs {
            fv.merge(&d.fv);
        }
        fv
    }

    /// A seeded random subset without replacement, in original order.
    pub fn subsample(&self, fraction: f64, seed: u64) -> Result<LabeledCorpus> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "subsample fraction must lie in (0, 1], got {fraction}"
            )));
        }
        let n = ((fraction * self.len() as f64).round() as usize).clamp(1, self.len().max(1));
        let mut rng = task_rng(seed, &[tag("subsample")]);
        let mut picked = index::sample(&mut rng, self.len(), n).into_vec();
        picked.sort_unstable();
        Ok(LabeledCorpus {
            source: self.source.clone(),
            docs: picked.into_iter().map(|i| self.docs[i].clone()).collect(),
        })
    }

    /// Each document split into sentences that inherit its label.
    pub fn sentences(&self) -> Result<LabeledCorpus> {
        let docs = self
            .docs
            .iter()
            .flat_map(|d| {
                sentence_split(&d.text)
                    .into_iter()
                    .enumerate()
                    .map(move |(k, s)| (format!("{}#{k}", d.id), s, d.label))
            })
            .collect();
        Self::from_texts(&format!("{}:sentences", self.source), docs)
    }
}

pub fn classify_by_threshold(score: &ScoreResult, threshold: f64) -> Prediction {
    classify_value(score.h_avg, threshold)
}

/// Strictly above the threshold is positive; ties are negative.
pub fn classify_value(h_avg: Option<f64>, threshold: f64) -> Prediction {
    match h_avg {
        None => Prediction::Abstain,
        Some(h) if h > threshold => Prediction::Positive,
        Some(_) => Prediction::Negative,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "policy", content = "value")]
pub enum ThresholdPolicy {
    /// Mean of the dictionary's scored entries.
    DictionaryMean,
    /// Mean of the documents' own scores.
    CorpusMean,
    Fixed(f64),
}

impl ThresholdPolicy {
    pub fn name(&self) -> String {
        match self {
            ThresholdPolicy::DictionaryMean => "dictionary-mean".into(),
            ThresholdPolicy::CorpusMean => "corpus-mean".into(),
            ThresholdPolicy::Fixed(v) => format!("fixed:{v}"),
        }
    }

    /// `None` when no threshold is defined (no scored entries or documents).
    pub fn resolve(&self, dictionary_mean: Option<f64>, doc_scores: &[Option<f64>]) -> Option<f64> {
        match self {
            ThresholdPolicy::DictionaryMean => dictionary_mean,
            ThresholdPolicy::CorpusMean => {
                let vals: Vec<f64> = doc_scores.iter().flatten().copied().collect();
                (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
            }
            ThresholdPolicy::Fixed(v) => Some(*v),
        }
    }
}

impl FromStr for ThresholdPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "dictionary-mean" | "dict-mean" => Ok(ThresholdPolicy::DictionaryMean),
            "corpus-mean" => Ok(ThresholdPolicy::CorpusMean),
            other => other
                .strip_prefix("fixed:")
                .unwrap_or(other)
                .parse::<f64>()
                .map(ThresholdPolicy::Fixed)
                .map_err(|_| Error::InvalidArgument(format!("unknown threshold policy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn f1(&self) -> f64 {
        let denom = 2 * self.tp + self.fp + self.fn_;
        if denom == 0 {
            0.0
        } else {
            2.0 * self.tp as f64 / denom as f64
        }
    }

    pub fn accuracy(&self) -> f64 {
        let n = self.tp + self.fp + self.fn_ + self.tn;
        if n == 0 {
            0.0
        } else {
            (self.tp + self.tn) as f64 / n as f64
        }
    }
}

/// Positive-class F1 two ways: "overall" counts an abstention as a
/// misclassification of its true class, "of scored" leaves it out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct F1Report {
    pub overall: f64,
    pub of_scored: f64,
    pub accuracy_overall: f64,
    pub accuracy_of_scored: f64,
    pub scored_fraction: f64,
    pub n: usize,
    pub abstained: usize,
    pub overall_counts: Confusion,
    pub scored_counts: Confusion,
}

pub fn f1_score(predictions: &[Prediction], truth: &[Label]) -> Result<F1Report> {
    if predictions.len() != truth.len() {
        return Err(Error::LengthMismatch(predictions.len(), truth.len()));
    }
    if predictions.is_empty() {
        return Err(Error::InvalidArgument("no predictions to evaluate".into()));
    }
    let mut overall = Confusion::default();
    let mut scored = Confusion::default();
    let mut abstained = 0;
    for (&p, &t) in predictions.iter().zip(truth) {
        let cell = |c: &mut Confusion, p: Label| match (p, t) {
            (Label::Positive, Label::Positive) => c.tp += 1,
            (Label::Positive, Label::Negative) => c.fp += 1,
            (Label::Negative, Label::Positive) => c.fn_ += 1,
            (Label::Negative, Label::Negative) => c.tn += 1,
        };
        match p.label() {
            Some(l) => {
                cell(&mut overall, l);
                cell(&mut scored, l);
            }
            None => {
                abstained += 1;
                let wrong = match t {
                    Label::Positive => Label::Negative,
                    Label::Negative => Label::Positive,
                };
                cell(&mut overall, wrong);
            }
        }
    }
    let n = predictions.len();
    Ok(F1Report {
        overall: overall.f1(),
        of_scored: scored.f1(),
        accuracy_overall: overall.accuracy(),
        accuracy_of_scored: scored.accuracy(),
        scored_fraction: (n - abstained) as f64 / n as f64,
        n,
        abstained,
        overall_counts: overall,
        scored_counts: scored,
    })
}

/// Per-document `(Σ h·f, Σ f)` against one index, for fast rescoring.
pub fn matched_docs(corpus: &LabeledCorpus, ix: &MatchIndex) -> Vec<MatchedDoc> {
    corpus
        .docs
        .par_iter()
        .map(|d| MatchedDoc::new(ix, &d.fv))
        .collect()
}

pub fn doc_scores(corpus: &LabeledCorpus, ix: &MatchIndex) -> Vec<Option<f64>> {
    let (scores, active) = score_table(ix);
    matched_docs(corpus, ix)
        .iter()
        .map(|m| m.h_avg(&scores, &active))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdEvaluation {
    pub policy: ThresholdPolicy,
    pub threshold: Option<f64>,
    pub report: F1Report,
}

pub(crate) fn evaluate_scores(
    scores: &[Option<f64>],
    truth: &[Label],
    policy: ThresholdPolicy,
    dictionary_mean: Option<f64>,
) -> Result<ThresholdEvaluation> {
    let threshold = policy.resolve(dictionary_mean, scores);
    let predictions: Vec<Prediction> = match threshold {
        Some(t) => scores.iter().map(|&s| classify_value(s, t)).collect(),
        None => vec![Prediction::Abstain; scores.len()],
    };
    Ok(ThresholdEvaluation {
        policy,
        threshold,
        report: f1_score(&predictions, truth)?,
    })
}

/// Single-document threshold classification of a whole corpus.
pub fn evaluate_threshold(
    corpus: &LabeledCorpus,
    ix: &MatchIndex,
    policy: ThresholdPolicy,
) -> Result<ThresholdEvaluation> {
    let scores = doc_scores(corpus, ix);
    evaluate_scores(
        &scores,
        &corpus.labels(),
        policy,
        ix.dictionary().mean_scored_score(),
    )
}

/// Seeded split of `0..n` into `(train, test)`, each in ascending order.
pub fn train_test_split(n: usize, train_fraction: f64, seed: u64, stream: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two documents to split".into()));
    }
    let n_train = ((train_fraction * n as f64).round() as usize).clamp(1, n - 1);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut task_rng(seed, &[tag("split"), stream]));
    let mut train = idx[..n_train].to_vec();
    let mut test = idx[n_train..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub threshold: f64,
    pub train_f1: f64,
    pub train_size: usize,
    /// F1 on the training split under the dictionary-mean threshold.
    pub uncalibrated_train_f1: f64,
    pub test_f1: Option<F1Report>,
}

fn f1_at(scored: &[(f64, Label)], threshold: f64) -> f64 {
    let mut c = Confusion::default();
    for &(s, t) in scored {
        match (s > threshold, t) {
            (true, Label::Positive) => c.tp += 1,
            (true, Label::Negative) => c.fp += 1,
            (false, Label::Positive) => c.fn_ += 1,
            (false, Label::Negative) => c.tn += 1,
        }
    }
    c.f1()
}

/// Best threshold for score-sorted `scored` and its F1.
fn scan_threshold(scored: &[(f64, Label)]) -> (f64, f64) {
    let mut distinct: Vec<f64> = scored.iter().map(|s| s.0).collect();
    distinct.dedup();
    let mut candidates = vec![distinct[0] - 1.0];
    candidates.extend(distinct.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    let (mut best_t, mut best_f1) = (candidates[0], f64::NEG_INFINITY);
    for &t in &candidates {
        let f = f1_at(scored, t);
        if f > best_f1 {
            best_f1 = f;
            best_t = t;
        }
    }
    (best_t, best_f1)
}

/// Picks the threshold maximizing F1 on a seeded training split among all
/// midpoints of consecutive distinct training scores, plus one candidate
/// below the minimum (everything positive). Ties go to the lowest threshold.
/// Abstaining documents are left out of the scan.
pub fn calibrate_threshold(
    corpus: &LabeledCorpus,
    ix: &MatchIndex,
    train_fraction: f64,
    seed: u64,
) -> Result<Calibration> {
    let (train, test) = train_test_split(corpus.len(), train_fraction, seed, tag("calibrate"))?;
    let labels = corpus.labels();
    let first = labels[train[0]];
    if train.iter().all(|&i| labels[i] == first) {
        return Err(Error::SingleClass);
    }
    let scores = doc_scores(corpus, ix);
    let mut scored: Vec<(f64, Label)> = train
        .iter()
        .filter_map(|&i| scores[i].map(|s| (s, labels[i])))
        .collect();
    if scored.is_empty() {
        return Err(Error::NoSignal("no training document has a score".into()));
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (best_t, best_f1) = scan_threshold(&scored);
    let uncalibrated_train_f1 = ix
        .dictionary()
        .mean_scored_score()
        .map(|t| f1_at(&scored, t))
        .unwrap_or(0.0);
    let test_f1 = if test.is_empty() {
        None
    } else {
        let preds: Vec<Prediction> = test.iter().map(|&i| classify_value(scores[i], best_t)).collect();
        let truth: Vec<Label> = test.iter().map(|&i| labels[i]).collect();
        Some(f1_score(&preds, &truth)?)
    };
    Ok(Calibration {
        threshold: best_t,
        train_f1: best_f1,
        train_size: train.len(),
        uncalibrated_train_f1,
        test_f1,
    })
}

/// Shared mass of two samples under a common histogram spanning both.
pub fn overlap_fraction(a: &[f64], b: &[f64]) -> f64 {
    overlap_fraction_bins(a, b, DEFAULT_OVERLAP_BINS)
}

pub fn overlap_fraction_bins(a: &[f64], b: &[f64], bins: usize) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let bins = bins.max(1);
    let (lo, hi) = a
        .iter()
        .chain(b)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi == lo {
        return 1.0;
    }
    let hist = |xs: &[f64]| {
        let mut h = vec![0usize; bins];
        for &v in xs {
            let k = (((v - lo) / (hi - lo)) * bins as f64).floor() as usize;
            h[k.min(bins - 1)] += 1;
        }
        h
    };
    let (ha, hb) = (hist(a), hist(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let overlap: f64 = ha
        .iter()
        .zip(&hb)
        .map(|(&x, &y)| (x as f64 / na).min(y as f64 / nb))
        .sum();
    overlap.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcatRow {
    pub n: usize,
    pub pos_mean: f64,
    pub pos_std: f64,
    pub neg_mean: f64,
    pub neg_std: f64,
    pub overlap: f64,
    /// Share of samples on the correct side of the pooled mean of both
    /// classes' sample scores.
    pub accuracy: f64,
    pub mean_tokens: f64,
    pub abstained: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcatExperiment {
    pub rows: Vec<ConcatRow>,
    pub trials: usize,
    pub seed: u64,
    pub bins: usize,
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Scores of concatenated random samples of `n` same-class documents.
/// Each sample is drawn without replacement; samples are independent.
pub fn concat_sample_experiment(
    corpus: &LabeledCorpus,
    ix: &MatchIndex,
    sizes: &[usize],
    trials: usize,
    seed: u64,
    bins: usize,
) -> Result<ConcatExperiment> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let classes = [
        corpus.class_indices(Label::Positive),
        corpus.class_indices(Label::Negative),
    ];
    for &n in sizes {
        for (c, members) in classes.iter().enumerate() {
            if n == 0 || n > members.len() {
                return Err(Error::InvalidArgument(format!(
                    "sample size {n} outside 1..={} for class {}",
                    members.len(),
                    if c == 0 { "pos" } else { "neg" }
                )));
            }
        }
    }
    let (scores, active) = score_table(ix);
    let sums: Vec<(f64, u64, u64)> = matched_docs(corpus, ix)
        .iter()
        .map(|m| {
            let (w, mass) = m.sums(&scores, &active);
            (w, mass, m.total_tokens)
        })
        .collect();

    let tasks: Vec<(usize, usize, usize)> = sizes
        .iter()
        .enumerate()
        .flat_map(|(k, _)| (0..2).flat_map(move |c| (0..trials).map(move |t| (k, c, t))))
        .collect();
    let samples: Vec<(Option<f64>, u64)> = tasks
        .par_iter()
        .map(|&(k, c, t)| {
            let n = sizes[k];
            let members = &classes[c];
            let mut rng = task_rng(seed, &[tag("concat"), n as u64, c as u64, t as u64]);
            let mut pick = index::sample(&mut rng, members.len(), n).into_vec();
            pick.sort_unstable();
            let (mut w, mut mass, mut tokens) = (0.0, 0u64, 0u64);
            for i in pick {
                let s = sums[members[i]];
                w += s.0;
                mass += s.1;
                tokens += s.2;
            }
            ((mass > 0).then(|| w / mass as f64), tokens)
        })
        .collect();

    let rows = sizes
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let block = |c: usize| &samples[(k * 2 + c) * trials..(k * 2 + c + 1) * trials];
            let pos: Vec<f64> = block(0).iter().filter_map(|s| s.0).collect();
            let neg: Vec<f64> = block(1).iter().filter_map(|s| s.0).collect();
            let abstained = 2 * trials - pos.len() - neg.len();
            let (pos_mean, pos_std) = mean_std(&pos);
            let (neg_mean, neg_std) = mean_std(&neg);
            let pooled: Vec<f64> = pos.iter().chain(&neg).copied().collect();
            let accuracy = if pooled.is_empty() {
                0.0
            } else {
                let t = pooled.iter().sum::<f64>() / pooled.len() as f64;
                let correct = pos.iter().filter(|&&s| s > t).count() + neg.iter().filter(|&&s| s <= t).count();
                correct as f64 / (2 * trials) as f64
            };
            let tokens: u64 = block(0).iter().chain(block(1)).map(|s| s.1).sum();
            ConcatRow {
                n,
                pos_mean,
                pos_std,
                neg_mean,
                neg_std,
                overlap: overlap_fraction_bins(&pos, &neg, bins),
                accuracy,
                mean_tokens: tokens as f64 / (2 * trials) as f64,
                abstained,
            }
        })
        .collect();
    Ok(ConcatExperiment {
        rows,
        trials,
        seed,
        bins,
    })
}

/// Splits after `.`, `!` or `?` when followed by whitespace or the end.
pub fn sentence_split(raw_text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut chars = raw_text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if matches!(c, '.' | '!' | '?') {
            let at_break = match chars.peek() {
                None => true,
                Some(&(_, next)) => next.is_whitespace(),
            };
            if at_break {
                let end = i + c.len_utf8();
                out.push(raw_text[start..end].trim().to_string());
                start = end;
            }
        }
    }
    out.push(raw_text[start..].trim().to_string());
    out.retain(|s| !s.is_empty());
    out
}
