//! Frequency-weighted average happiness and series normalization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Outcome, Result};
use crate::textproc::{FreqVector, MatchIndex};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreResult {
    /// `None` when no scored entry matched: the text carries no signal.
    pub h_avg: Option<f64>,
    pub matched_token_mass: u64,
    pub matched_type_count: usize,
    pub total_tokens: u64,
    pub dictionary: String,
    pub delta_h: f64,
}

impl ScoreResult {
    pub fn has_signal(&self) -> bool {
        self.h_avg.is_some()
    }

    /// Share of the text's tokens that contributed to the score.
    pub fn match_rate(&self) -> f64 {
        if self.total_tokens == 0 {
            0.0
        } else {
            self.matched_token_mass as f64 / self.total_tokens as f64
        }
    }
}

pub fn score_text(ix: &MatchIndex, fv: &FreqVector) -> ScoreResult {
    let mut weighted = 0.0;
    let mut mass = 0u64;
    let mut types = 0usize;
    for (w, c) in fv.iter() {
        if let Some(e) = ix.match_scored(w) {
            weighted += e.score * c as f64;
            mass += c;
            types += 1;
        }
    }
    let d = ix.dictionary();
    ScoreResult {
        h_avg: (mass > 0).then(|| weighted / mass as f64),
        matched_token_mass: mass,
        matched_type_count: types,
        total_tokens: fv.total(),
        dictionary: d.name.clone(),
        delta_h: d.delta_h(),
    }
}

/// A document reduced to `(entry position, count)` pairs against one index,
/// so it can be rescored cheaply under modified entry scores.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MatchedDoc {
    pub items: Vec<(u32, u64)>,
    pub total_tokens: u64,
}

impl MatchedDoc {
    pub fn new(ix: &MatchIndex, fv: &FreqVector) -> Self {
        let mut items: Vec<(u32, u64)> = Vec::new();
        for (w, c) in fv.iter() {
            if let Some(i) = ix.match_position(w) {
                items.push((i as u32, c));
            }
        }
        // Several words can share a stem entry; pool them.
        items.sort_unstable_by_key(|&(i, _)| i);
        items.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        MatchedDoc {
            items,
            total_tokens: fv.total(),
        }
    }

    /// `(Σ h·f, Σ f)` over the entries flagged in `active`.
    pub fn sums(&self, scores: &[f64], active: &[bool]) -> (f64, u64) {
        let mut weighted = 0.0;
        let mut mass = 0u64;
        for &(i, c) in &self.items {
            let i = i as usize;
            if active[i] {
                weighted += scores[i] * c as f64;
                mass += c;
            }
        }
        (weighted, mass)
    }

    pub fn h_avg(&self, scores: &[f64], active: &[bool]) -> Option<f64> {
        let (weighted, mass) = self.sums(scores, active);
        (mass > 0).then(|| weighted / mass as f64)
    }
}

/// Entry scores and scored flags of an index, in entry order.
pub fn score_table(ix: &MatchIndex) -> (Vec<f64>, Vec<bool>) {
    let d = ix.dictionary();
    let scores = d.entries.iter().map(|e| e.score).collect();
    let active = d.entries.iter().map(|e| d.is_scored(e.score)).collect();
    (scores, active)
}

/// Subtracts the mean and divides by the range. A constant series maps to
/// zeros with a warning.
pub fn normalize_series(values: &[f64]) -> Result<Outcome<Vec<f64>>> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("cannot normalize an empty series".into()));
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range = hi - lo;
    if range == 0.0 {
        let mut out = Outcome::new(vec![0.0; values.len()]);
        out.warn("constant series: range is zero, normalized values set to 0");
        return Ok(out);
    }
    Ok(Outcome::new(values.iter().map(|v| (v - mean) / range).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::{Dictionary, Entry, ScoreScale};
    use crate::textproc::{build_index, count_frequencies};
    use approx::assert_relative_eq;

    fn toy() -> MatchIndex {
        build_index(&Dictionary::new(
            "toy",
            ScoreScale::continuous(1.0, 9.0, 5.0).unwrap(),
            vec![Entry::fixed("good", 7.0), Entry::fixed("bad", 2.0), Entry::fixed("laughter", 8.5)],
        ))
    }

    #[test]
    fn single_word() {
        let r = score_text(&toy(), &count_frequencies(&["laughter"]));
        assert_eq!(r.h_avg, Some(8.5));
    }

    #[test]
    fn weighted_mean() {
        let r = score_text(&toy(), &count_frequencies(&["good", "good", "bad"]));
        assert_relative_eq!(r.h_avg.unwrap(), 16.0 / 3.0, epsilon = 1e-12);
        assert_eq!((r.matched_token_mass, r.matched_type_count), (3, 2));
    }

    #[test]
    fn no_signal_is_flagged() {
        let r = score_text(&toy(), &count_frequencies(&["the", "cat"]));
        assert_eq!(r.h_avg, None);
        assert!(!r.has_signal());
        assert_eq!(r.match_rate(), 0.0);
    }

    #[test]
    fn binary_neutral_entries_are_not_scored() {
        let ix = build_index(&Dictionary::new(
            "b",
            ScoreScale::binary(),
            vec![Entry::fixed("the", 0.0), Entry::fixed("good", 1.0)],
        ));
        let r = score_text(&ix, &count_frequencies(&["the", "the", "good"]));
        assert_eq!(r.h_avg, Some(1.0));
        assert_eq!(r.matched_token_mass, 1);
        assert_eq!(score_text(&ix, &count_frequencies(&["the"])).h_avg, None);
    }

    #[test]
    fn matched_doc_agrees_with_score_text() {
        let ix = toy();
        let fv = count_frequencies(&["good", "bad", "bad", "x"]);
        let (scores, active) = score_table(&ix);
        assert_eq!(
            MatchedDoc::new(&ix, &fv).h_avg(&scores, &active),
            score_text(&ix, &fv).h_avg
        );
    }

    #[test]
    fn matched_doc_pools_stem_matches() {
        let ix = build_index(&Dictionary::new(
            "b",
            ScoreScale::binary(),
            vec![Entry::stem("mar", -1.0)],
        ));
        let doc = MatchedDoc::new(&ix, &count_frequencies(&["married", "marry", "mar"]));
        assert_eq!(doc.items, vec![(0, 3)]);
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_series(&[1.0, 3.0, 5.0]).unwrap().value, [-0.5, 0.0, 0.5]);
        let flat = normalize_series(&[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(flat.value, [0.0; 3]);
        assert_eq!(flat.warnings.len(), 1);
        assert!(normalize_series(&[]).is_err());
    }
}
