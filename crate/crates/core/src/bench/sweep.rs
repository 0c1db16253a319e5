//! Robustness sweeps: pushing continuous scores toward ±1 and removing
//! dictionary entries in frequency order.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use super::{evaluate_scores, matched_docs, LabeledCorpus, ThresholdPolicy};
use crate::dictionary::{Dictionary, ScaleKind};
use crate::error::{Error, Result};
use crate::rng::{tag, task_rng};
use crate::scoring::{score_table, MatchedDoc};
use crate::textproc::MatchIndex;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub axis: Vec<f64>,
    pub f1: Vec<f64>,
    pub coverage: Option<Vec<f64>>,
    pub thresholds: Vec<Option<f64>>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalStrategy {
    MostFrequent,
    LeastFrequent,
    Random,
}

impl RemovalStrategy {
    pub const ALL: [RemovalStrategy; 3] = [
        RemovalStrategy::MostFrequent,
        RemovalStrategy::LeastFrequent,
        RemovalStrategy::Random,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RemovalStrategy::MostFrequent => "most-frequent",
            RemovalStrategy::LeastFrequent => "least-frequent",
            RemovalStrategy::Random => "random",
        }
    }
}

impl FromStr for RemovalStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "most-frequent" | "most_frequent" | "most" => Ok(RemovalStrategy::MostFrequent),
            "least-frequent" | "least_frequent" | "least" => Ok(RemovalStrategy::LeastFrequent),
            "random" => Ok(RemovalStrategy::Random),
            other => Err(Error::InvalidArgument(format!("unknown removal strategy `{other}`"))),
        }
    }
}

fn axis(steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    Ok((0..=steps).map(|i| i as f64 / steps as f64).collect())
}

fn mean_active(scores: &[f64], active: &[bool]) -> Option<f64> {
    let (sum, n) = scores
        .iter()
        .zip(active)
        .filter(|(_, &a)| a)
        .fold((0.0, 0usize), |(s, n), (v, _)| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn f1_under(
    docs: &[MatchedDoc],
    truth: &[super::Label],
    scores: &[f64],
    active: &[bool],
    policy: ThresholdPolicy,
) -> Result<(f64, Option<f64>)> {
    let doc_scores: Vec<Option<f64>> = docs.iter().map(|d| d.h_avg(scores, active)).collect();
    let eval = evaluate_scores(&doc_scores, truth, policy, mean_active(scores, active))?;
    Ok((eval.report.overall, eval.threshold))
}

/// Moves each score linearly from its value (λ = 0) to neutral ± 1
/// (λ = 1) over `steps + 1` evenly spaced points and records F1.
pub fn binarization_sweep(
    d: &Dictionary,
    corpus: &LabeledCorpus,
    steps: usize,
    policy: ThresholdPolicy,
    seed: u64,
) -> Result<SweepResult> {
    if d.scale.kind != ScaleKind::Continuous {
        return Err(Error::InvalidArgument(format!(
            "`{}` is binary; binarization needs a continuous dictionary",
            d.name
        )));
    }
    let lambdas = axis(steps)?;
    let ix = MatchIndex::new(d);
    let docs = matched_docs(corpus, &ix);
    let truth = corpus.labels();
    let (base, active) = score_table(&ix);
    let neutral = d.scale.neutral;

    let points: Vec<(f64, Option<f64>)> = lambdas
        .par_iter()
        .map(|&lam| {
            let scores: Vec<f64> = base
                .iter()
                .map(|&s| {
                    let c = s - neutral;
                    let sign = if c > 0.0 {
                        1.0
                    } else if c < 0.0 {
                        -1.0
                    } else {
                        0.0
                    };
                    if lam == 0.0 {
                        s
                    } else if lam == 1.0 {
                        neutral + sign
                    } else {
                        neutral + (1.0 - lam) * c + lam * sign
                    }
                })
                .collect();
            f1_under(&docs, &truth, &scores, &active, policy)
        })
        .collect::<Result<_>>()?;

    Ok(SweepResult {
        axis: lambdas,
        f1: points.iter().map(|p| p.0).collect(),
        coverage: None,
        thresholds: points.iter().map(|p| p.1).collect(),
        seed,
    })
}

/// Removes a growing share of entries (fraction `i / steps` at step `i`) in
/// the order given by `strategy`, with frequencies measured on the corpus.
/// Records F1 and token coverage of what remains.
pub fn coverage_removal_sweep(
    d: &Dictionary,
    corpus: &LabeledCorpus,
    strategy: RemovalStrategy,
    steps: usize,
    seed: u64,
    policy: ThresholdPolicy,
) -> Result<SweepResult> {
    let fractions = axis(steps)?;
    let ix = MatchIndex::new(d);
    let docs = matched_docs(corpus, &ix);
    let truth = corpus.labels();
    let (scores, scored) = score_table(&ix);
    let n = d.entries.len();

    let mut freq = vec![0u64; n];
    for doc in &docs {
        for &(i, c) in &doc.items {
            freq[i as usize] += c;
        }
    }
    let total_tokens: u64 = corpus.docs.iter().map(|d| d.fv.total()).sum();

    let mut order: Vec<usize> = (0..n).collect();
    let label = |i: usize| d.entries[i].label();
    match strategy {
        RemovalStrategy::MostFrequent => {
            order.sort_by(|&a, &b| freq[b].cmp(&freq[a]).then_with(|| label(a).cmp(&label(b))))
        }
        RemovalStrategy::LeastFrequent => {
            order.sort_by(|&a, &b| freq[a].cmp(&freq[b]).then_with(|| label(a).cmp(&label(b))))
        }
        RemovalStrategy::Random => order.shuffle(&mut task_rng(seed, &[tag("removal")])),
    }

    let points: Vec<(f64, Option<f64>, f64)> = fractions
        .par_iter()
        .map(|&frac| {
            let k = (frac * n as f64).round() as usize;
            let mut keep = vec![true; n];
            for &i in &order[..k.min(n)] {
                keep[i] = false;
            }
            let active: Vec<bool> = keep.iter().zip(&scored).map(|(&k, &s)| k && s).collect();
            let (f1, t) = f1_under(&docs, &truth, &scores, &active, policy)?;
            let covered: u64 = (0..n).filter(|&i| keep[i]).map(|i| freq[i]).sum();
            let coverage = if total_tokens == 0 {
                0.0
            } else {
                covered as f64 / total_tokens as f64
            };
            Ok((f1, t, coverage))
        })
        .collect::<Result<_>>()?;

    Ok(SweepResult {
        axis: fractions,
        f1: points.iter().map(|p| p.0).collect(),
        coverage: Some(points.iter().map(|p| p.2).collect()),
        thresholds: points.iter().map(|p| p.1).collect(),
        seed,
    })
}
