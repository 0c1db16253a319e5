//! Pairwise dictionary comparison: reduced major axis fits, correlation,
//! score distributions for mixed pairs and mismatch tables.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use std::collections::HashMap;

use crate::dictionary::{Dictionary, Entry, MatchKind, ScaleKind};
use crate::error::{Error, Result};
use crate::textproc::MatchIndex;

pub const HISTOGRAM_BINS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmaFit {
    pub slope: f64,
    pub intercept: f64,
    pub r: f64,
}

impl RmaFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }

    /// Perpendicular distance of `(x, y)` from the fitted line.
    pub fn residual(&self, x: f64, y: f64) -> f64 {
        (y - self.predict(x)).abs() / (1.0 + self.slope * self.slope).sqrt()
    }
}

struct Moments {
    mean_x: f64,
    mean_y: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
}

fn moments(x: &[f64], y: &[f64]) -> Moments {
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mean_x, b - mean_y);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    Moments {
        mean_x,
        mean_y,
        sxx,
        syy,
        sxy,
    }
}

fn check_inputs(x: &[f64], y: &[f64], min_len: usize) -> Result<Moments> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < min_len {
        return Err(Error::Degenerate(format!(
            "need at least {min_len} points, got {}",
            x.len()
        )));
    }
    let m = moments(x, y);
    if m.sxx == 0.0 || m.syy == 0.0 {
        return Err(Error::Degenerate("zero variance".into()));
    }
    Ok(m)
}

fn correlation(m: &Moments) -> f64 {
    (m.sxy / (m.sxx * m.syy).sqrt()).clamp(-1.0, 1.0)
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_inputs(x, y, 2).map(|m| correlation(&m))
}

pub fn rma_fit(x: &[f64], y: &[f64]) -> Result<RmaFit> {
    let m = check_inputs(x, y, 3)?;
    let r = correlation(&m);
    let sign = if r < 0.0 { -1.0 } else { 1.0 };
    let slope = sign * (m.syy / m.sxx).sqrt();
    Ok(RmaFit {
        slope,
        intercept: m.mean_y - slope * m.mean_x,
        r,
    })
}

/// Average ranks, 1-based; tied values share the mean of their positions.
fn ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = r;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation: Pearson's r of the average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    pearson(&ranks(x), &ranks(y))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    /// Label of the entry of the first dictionary.
    pub word: String,
    pub score_x: f64,
    pub score_y: f64,
    /// Kind of the matching entry of the second dictionary.
    pub matched_via: MatchKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub word: String,
    pub score_x: f64,
    pub score_y: f64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketStats {
    pub binary_score: f64,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub histogram: Vec<u64>,
}

/// Distribution of the continuous partner's scores within each score of the
/// binary dictionary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramSummary {
    pub binary_side: String,
    pub bins: usize,
    pub range: (f64, f64),
    pub buckets: Vec<BucketStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub dict_x: String,
    pub dict_y: String,
    pub pairs: Vec<Pair>,
    pub fit: Option<RmaFit>,
    pub r: Option<f64>,
    pub mismatches: Vec<Mismatch>,
    pub histogram_summary: Option<HistogramSummary>,
}

fn rank_mismatches(v: &mut [Mismatch]) {
    v.sort_by(|a, b| {
        b.magnitude
            .total_cmp(&a.magnitude)
            .then_with(|| a.word.cmp(&b.word))
    });
}

fn histogram_summary(pairs: &[Pair], binary_is_x: bool, cont: &Dictionary) -> HistogramSummary {
    let (lo, hi) = (cont.scale.min_score, cont.scale.max_score);
    let width = (hi - lo) / HISTOGRAM_BINS as f64;
    let mut keys: Vec<f64> = pairs
        .iter()
        .map(|p| if binary_is_x { p.score_x } else { p.score_y })
        .collect();
    keys.sort_by(f64::total_cmp);
    keys.dedup();
    let buckets = keys
        .into_iter()
        .map(|key| {
            let vals: Vec<f64> = pairs
                .iter()
                .filter(|p| (if binary_is_x { p.score_x } else { p.score_y }) == key)
                .map(|p| if binary_is_x { p.score_y } else { p.score_x })
                .collect();
            let n = vals.len() as f64;
            let mean = vals.iter().sum::<f64>() / n;
            let std = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
            let mut histogram = vec![0u64; HISTOGRAM_BINS];
            for v in &vals {
                let b = (((v - lo) / width).floor() as isize).clamp(0, HISTOGRAM_BINS as isize - 1);
                histogram[b as usize] += 1;
            }
            BucketStats {
                binary_score: key,
                count: vals.len(),
                mean,
                std,
                histogram,
            }
        })
        .collect();
    HistogramSummary {
        binary_side: if binary_is_x { "x" } else { "y" }.to_string(),
        bins: HISTOGRAM_BINS,
        range: (lo, hi),
        buckets,
    }
}

/// Pairs every entry of `dx` with the `dy` entry of the same surface and
/// kind, or failing that, with whatever its surface matches through `dy`'s
/// index. The comparison is directional.
pub fn pair_compare(dx: &Dictionary, dy: &Dictionary) -> PairReport {
    let iy = MatchIndex::new(dy);
    let mut same_key: HashMap<(&str, MatchKind), &Entry> = HashMap::new();
    for e in &dy.entries {
        same_key.entry((e.surface.as_str(), e.kind)).or_insert(e);
    }
    let pairs: Vec<Pair> = dx
        .entries
        .iter()
        .filter_map(|e| {
            let hit = same_key
                .get(&(e.surface.as_str(), e.kind))
                .copied()
                .or_else(|| iy.match_token(&e.surface));
            hit.map(|m| Pair {
                word: e.label(),
                score_x: e.score,
                score_y: m.score,
                matched_via: m.kind,
            })
        })
        .collect();
    let xs: Vec<f64> = pairs.iter().map(|p| p.score_x).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.score_y).collect();
    let r = pearson(&xs, &ys).ok();

    let x_binary = dx.scale.kind == ScaleKind::Binary;
    let y_binary = dy.scale.kind == ScaleKind::Binary;
    let mut fit = None;
    let mut histogram = None;
    let mut mismatches: Vec<Mismatch> = match (x_binary, y_binary) {
        (false, false) => {
            fit = rma_fit(&xs, &ys).ok();
            match fit {
                Some(f) => pairs
                    .iter()
                    .map(|p| Mismatch {
                        word: p.word.clone(),
                        score_x: p.score_x,
                        score_y: p.score_y,
                        magnitude: f.residual(p.score_x, p.score_y),
                    })
                    .collect(),
                None => Vec::new(),
            }
        }
        (true, true) => pairs
            .iter()
            .filter(|p| p.score_x * p.score_y < 0.0)
            .map(|p| Mismatch {
                word: p.word.clone(),
                score_x: p.score_x,
                score_y: p.score_y,
                magnitude: 1.0,
            })
            .collect(),
        _ => {
            let (cont, binary_is_x) = if x_binary { (dy, true) } else { (dx, false) };
            histogram = Some(histogram_summary(&pairs, binary_is_x, cont));
            let neutral = cont.scale.neutral;
            pairs
                .iter()
                .filter_map(|p| {
                    let (b, c) = if binary_is_x {
                        (p.score_x, p.score_y)
                    } else {
                        (p.score_y, p.score_x)
                    };
                    let wrong = (b > 0.0 && c < neutral) || (b < 0.0 && c > neutral);
                    wrong.then(|| Mismatch {
                        word: p.word.clone(),
                        score_x: p.score_x,
                        score_y: p.score_y,
                        magnitude: (c - neutral).abs(),
                    })
                })
                .collect()
        }
    };
    rank_mismatches(&mut mismatches);

    PairReport {
        dict_x: dx.name.clone(),
        dict_y: dy.name.clone(),
        pairs,
        fit,
        r,
        mismatches,
        histogram_summary: histogram,
    }
}

pub fn top_mismatches(report: &PairReport, n: usize) -> &[Mismatch] {
    &report.mismatches[..n.min(report.mismatches.len())]
}

/// Mismatches of a mixed pair restricted to one score of the binary side,
/// e.g. continuous words that a binary dictionary rates -1.
pub fn mismatches_in_bucket(report: &PairReport, binary_score: f64) -> Vec<&Mismatch> {
    let binary_is_x = match &report.histogram_summary {
        Some(h) => h.binary_side == "x",
        None => return Vec::new(),
    };
    report
        .mismatches
        .iter()
        .filter(|m| (if binary_is_x { m.score_x } else { m.score_y }) == binary_score)
        .collect()
}

/// Every ordered pair of `dicts`, row-major, computed in parallel.
pub fn compare_grid(dicts: &[Dictionary]) -> Vec<PairReport> {
    let n = dicts.len();
    (0..n * n)
        .into_par_iter()
        .map(|k| pair_compare(&dicts[k / n], &dicts[k % n]))
        .collect()
}
