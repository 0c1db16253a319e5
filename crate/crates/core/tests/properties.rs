use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use hedono::bench::{
    concat_sample_experiment, f1_score, nb_classify, nb_train_on, overlap_fraction, Label, LabeledCorpus, Prediction,
};
use hedono::compare::{pair_compare, pearson, rma_fit};
use hedono::dictionary::{apply_stop_lens, mask_words, validate};
use hedono::shift::word_shift;
use hedono::textproc::{coverage, count_frequencies, RegexMatcher};
use hedono::timeseries::{correlation_matrix, ingest_records, SentimentSeries, SeriesPoint};
use hedono::{build_index, score_text, tokenize, Dictionary, Entry, FreqVector, MatchKind, ScoreScale};

fn word() -> impl Strategy<Value = String> {
    "[a-e]{1,4}"
}

fn score() -> impl Strategy<Value = f64> {
    (100u32..=900).prop_map(|s| s as f64 / 100.0)
}

/// Continuous 1..9 dictionaries over a tiny alphabet, so stems and fixed
/// words overlap often.
fn dictionary() -> impl Strategy<Value = Dictionary> {
    prop::collection::vec((word(), score(), prop::bool::weighted(0.3)), 1..30).prop_map(|raw| {
        let mut seen = BTreeSet::new();
        let entries = raw
            .into_iter()
            .filter(|(w, _, stem)| seen.insert((w.clone(), *stem)))
            .map(|(w, s, stem)| if stem { Entry::stem(&w, s) } else { Entry::fixed(&w, s) })
            .collect();
        Dictionary::new("gen", ScoreScale::continuous(1.0, 9.0, 5.0).unwrap(), entries)
    })
}

fn text() -> impl Strategy<Value = String> {
    prop::collection::vec(word(), 0..60).prop_map(|w| w.join(" "))
}

fn brute_force(d: &Dictionary, text: &str) -> Option<f64> {
    let m = RegexMatcher::new(d);
    let (mut sum, mut n) = (0.0, 0u64);
    for t in tokenize(text) {
        if let Some(i) = m.match_position(&t) {
            let s = d.entries[i].score;
            if d.is_scored(s) {
                sum += s;
                n += 1;
            }
        }
    }
    (n > 0).then(|| sum / n as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn stop_lens_is_idempotent(d in dictionary(), dh in 0.0f64..4.0) {
        let once = apply_stop_lens(&d, dh).unwrap().into_value();
        let twice = apply_stop_lens(&once, dh).unwrap().into_value();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn wider_lens_is_a_subset(d in dictionary(), a in 0.0f64..4.0, b in 0.0f64..4.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let narrow = apply_stop_lens(&d, lo).unwrap().into_value();
        let wide = apply_stop_lens(&d, hi).unwrap().into_value();
        for e in &wide.entries {
            prop_assert!(narrow.entries.contains(e));
        }
    }

    #[test]
    fn masked_surfaces_never_validate(d in dictionary(), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..5)) {
        let patterns: Vec<String> = picks.iter().map(|i| d.entries[i.index(d.len())].label()).collect();
        let masked = mask_words(&d, &patterns).into_value();
        let report = validate(&masked);
        for p in &patterns {
            prop_assert!(!masked.entries.iter().any(|e| &e.label() == p));
            prop_assert!(!report.conflicts.contains(p) && !report.duplicates.contains(p));
        }
    }

    #[test]
    fn dictionary_round_trips(d in dictionary()) {
        let once = Dictionary::parse_tsv(&d.to_tsv(), true).unwrap().into_value();
        let twice = Dictionary::parse_tsv(&once.to_tsv(), true).unwrap().into_value();
        prop_assert_eq!(&once, &d);
        prop_assert_eq!(once, twice);
    }

    // Lowercase input only: emoticons such as `:D` lowercase to `:d`, which
    // the pattern no longer reads as one token.
    #[test]
    fn retokenizing_tokens_is_stable(s in "[a-z0-9 ,.!?'\\-:;()@#&é’]{0,80}") {
        let first = tokenize(&s);
        let mut again = tokenize(&first.join(" "));
        let mut sorted = first.clone();
        sorted.sort();
        again.sort();
        prop_assert_eq!(sorted, again);
    }

    #[test]
    fn fixed_surface_beats_stems(d in dictionary()) {
        let ix = build_index(&d);
        let mut first_fixed: BTreeMap<&str, f64> = BTreeMap::new();
        for e in d.entries.iter().filter(|e| e.kind == MatchKind::Fixed) {
            first_fixed.entry(e.surface.as_str()).or_insert(e.score);
        }
        for (w, s) in first_fixed {
            let hit = ix.match_token(w).unwrap();
            prop_assert_eq!(hit.kind, MatchKind::Fixed);
            prop_assert_eq!(hit.score, s);
        }
    }

    #[test]
    fn trie_agrees_with_regex_scan(d in dictionary(), tokens in prop::collection::vec("[a-f]{1,7}", 1..80)) {
        let ix = build_index(&d);
        let naive = RegexMatcher::new(&d);
        for t in &tokens {
            prop_assert_eq!(ix.match_position(t), naive.match_position(t), "token {}", t);
        }
    }

    #[test]
    fn coverage_ignores_token_order(d in dictionary(), tokens in prop::collection::vec(word(), 1..60).prop_shuffle()) {
        let ix = build_index(&d);
        let mut sorted = tokens.clone();
        sorted.sort();
        let a = coverage(&ix, &count_frequencies(&tokens));
        let b = coverage(&ix, &count_frequencies(&sorted));
        prop_assert_eq!(a.token_coverage, b.token_coverage);
    }

    #[test]
    fn scores_are_scale_free(d in dictionary(), t in text(), k in 1u64..50) {
        let ix = build_index(&d);
        let fv = FreqVector::from_text(&t);
        let a = score_text(&ix, &fv).h_avg;
        let b = score_text(&ix, &fv.scaled(k)).h_avg;
        match (a, b) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-12),
            (a, b) => prop_assert_eq!(a, b),
        }
    }

    #[test]
    fn score_stays_within_matched_scores(d in dictionary(), t in text()) {
        let ix = build_index(&d);
        let fv = FreqVector::from_text(&t);
        if let Some(h) = score_text(&ix, &fv).h_avg {
            let matched: Vec<f64> = fv.iter().filter_map(|(w, _)| ix.match_scored(w).map(|e| e.score)).collect();
            let lo = matched.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = matched.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(h >= lo - 1e-12 && h <= hi + 1e-12);
        }
    }

    #[test]
    fn concatenation_is_a_mass_weighted_mixture(d in dictionary(), a in text(), b in text()) {
        let ix = build_index(&d);
        let (fa, fb) = (FreqVector::from_text(&a), FreqVector::from_text(&b));
        let (ra, rb) = (score_text(&ix, &fa), score_text(&ix, &fb));
        let joint = score_text(&ix, &fa.merged(&fb));
        if let (Some(ha), Some(hb)) = (ra.h_avg, rb.h_avg) {
            let (ma, mb) = (ra.matched_token_mass as f64, rb.matched_token_mass as f64);
            let expected = (ha * ma + hb * mb) / (ma + mb);
            prop_assert!((joint.h_avg.unwrap() - expected).abs() <= 1e-12);
        }
    }

    #[test]
    fn vectorized_score_matches_token_loop(d in dictionary(), t in text()) {
        let ix = build_index(&d);
        let fast = score_text(&ix, &FreqVector::from_text(&t)).h_avg;
        match (fast, brute_force(&d, &t)) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b),
            (a, b) => prop_assert_eq!(a, b),
        }
    }

    #[test]
    fn normalized_shift_sums_to_100(d in dictionary(), a in text(), b in text()) {
        let ix = build_index(&d);
        if let Ok(r) = word_shift(&ix, &FreqVector::from_text(&a), &FreqVector::from_text(&b)) {
            if r.normalized {
                prop_assert!((r.total() - 100.0).abs() <= 1e-9, "total {}", r.total());
            }
        }
    }

    #[test]
    fn unnormalized_shift_is_antisymmetric(d in dictionary(), a in text(), b in text()) {
        let ix = build_index(&d);
        let (fa, fb) = (FreqVector::from_text(&a), FreqVector::from_text(&b));
        if let (Ok(ab), Ok(ba)) = (word_shift(&ix, &fa, &fb), word_shift(&ix, &fb, &fa)) {
            let h = ab.ref_score;
            let forward: BTreeMap<&str, f64> =
                ab.items.iter().map(|i| (i.word.as_str(), (i.score - h) * (i.p_comp - i.p_ref))).collect();
            let backward: BTreeMap<&str, f64> =
                ba.items.iter().map(|i| (i.word.as_str(), (i.score - h) * (i.p_comp - i.p_ref))).collect();
            prop_assert_eq!(forward.len(), backward.len());
            for (w, v) in forward {
                prop_assert!((v + backward[w]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn absent_words_contribute_nothing(d in dictionary(), a in text(), b in text()) {
        let ix = build_index(&d);
        let (fa, fb) = (FreqVector::from_text(&a), FreqVector::from_text(&b));
        if let Ok(r) = word_shift(&ix, &fa, &fb) {
            let present: BTreeSet<String> = fa.iter().chain(fb.iter())
                .filter_map(|(w, _)| ix.match_scored(w).map(|e| e.label()))
                .collect();
            for item in &r.items {
                if !present.contains(&item.word) {
                    prop_assert_eq!(item.contribution, 0.0);
                }
            }
        }
    }

    #[test]
    fn masking_removes_exactly_one_item(d in dictionary(), a in text(), b in text(), pick in any::<prop::sample::Index>()) {
        let ix = build_index(&d);
        let (fa, fb) = (FreqVector::from_text(&a), FreqVector::from_text(&b));
        let Ok(r) = word_shift(&ix, &fa, &fb) else { return Ok(()) };
        if r.items.is_empty() {
            return Ok(());
        }
        let target = r.items[pick.index(r.items.len())].word.clone();
        let masked = mask_words(&d, &[target.as_str()]).into_value();
        let mix = build_index(&masked);
        if let Ok(m) = word_shift(&mix, &fa, &fb) {
            // unmasking a stem can let a shorter stem take over its tokens
            let shorter_stem_took_over = m.items.iter().any(|i| !r.items.iter().any(|j| j.word == i.word));
            if !shorter_stem_took_over {
                let before: BTreeSet<&str> = r.items.iter().map(|i| i.word.as_str()).filter(|w| *w != target).collect();
                let after: BTreeSet<&str> = m.items.iter().map(|i| i.word.as_str()).collect();
                prop_assert_eq!(before, after);
            }
            prop_assert!(!m.items.iter().any(|i| i.word == target));
            if m.normalized {
                prop_assert!((m.total() - 100.0).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn rma_inverts_under_axis_swap(xy in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 3..40)) {
        let (x, y): (Vec<f64>, Vec<f64>) = xy.into_iter().unzip();
        if let (Ok(f), Ok(g)) = (rma_fit(&x, &y), rma_fit(&y, &x)) {
            prop_assert!((g.slope - 1.0 / f.slope).abs() <= 1e-9 * (1.0 + g.slope.abs()));
            prop_assert!((g.intercept + f.intercept / f.slope).abs() <= 1e-8 * (1.0 + g.intercept.abs()));
        }
    }

    #[test]
    fn pearson_ignores_positive_affine_maps(
        xy in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 2..40),
        a in 0.1f64..10.0, b in -20.0f64..20.0,
    ) {
        let (x, y): (Vec<f64>, Vec<f64>) = xy.into_iter().unzip();
        if let Ok(r) = pearson(&x, &y) {
            let x2: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            let r2 = pearson(&x2, &y).unwrap();
            prop_assert!((r - r2).abs() <= 1e-9);
        }
    }

    #[test]
    fn self_comparison_has_no_residuals(d in dictionary()) {
        let report = pair_compare(&d, &d);
        for m in &report.mismatches {
            prop_assert!(m.magnitude.abs() <= 1e-9, "{} {}", m.word, m.magnitude);
        }
    }

    #[test]
    fn f1_ignores_joint_order(rows in prop::collection::vec((0u8..3, any::<bool>()), 1..60).prop_shuffle(), seed in any::<u64>()) {
        let decode = |&(p, t): &(u8, bool)| {
            let pred = [Prediction::Positive, Prediction::Negative, Prediction::Abstain][p as usize];
            (pred, if t { Label::Positive } else { Label::Negative })
        };
        let (p1, t1): (Vec<_>, Vec<_>) = rows.iter().map(decode).unzip();
        let mut sorted = rows.clone();
        sorted.sort_by_key(|r| (r.0, r.1, seed));
        let (p2, t2): (Vec<_>, Vec<_>) = sorted.iter().map(decode).unzip();
        prop_assert_eq!(f1_score(&p1, &t1).unwrap(), f1_score(&p2, &t2).unwrap());
    }

    #[test]
    fn nb_scores_are_linear_in_counts(docs in prop::collection::vec((text(), any::<bool>()), 2..12), a in text(), b in text()) {
        let mut docs = docs;
        docs[0].1 = true;
        docs[1].1 = false;
        let rows = docs
            .into_iter()
            .enumerate()
            .map(|(i, (t, p))| (format!("d{i}"), t, if p { Label::Positive } else { Label::Negative }))
            .collect();
        let corpus = LabeledCorpus::from_texts("gen", rows).unwrap();
        let all: Vec<usize> = (0..corpus.len()).collect();
        let Ok(m) = nb_train_on(&corpus, &all, 50, 2) else { return Ok(()) };
        let (fa, fb) = (FreqVector::from_text(&a), FreqVector::from_text(&b));
        let zero = nb_classify(&m, &FreqVector::new()).1;
        let sa = nb_classify(&m, &fa).1;
        let sb = nb_classify(&m, &fb).1;
        let sab = nb_classify(&m, &fa.merged(&fb)).1;
        for c in 0..2 {
            prop_assert!(((sab[c] - zero[c]) - ((sa[c] - zero[c]) + (sb[c] - zero[c]))).abs() <= 1e-9);
        }
    }

    #[test]
    fn overlap_is_symmetric_and_affine_invariant(
        a in prop::collection::vec(-400i32..400, 1..50),
        b in prop::collection::vec(-400i32..400, 1..50),
        k in -3i32..4, shift in -100i32..100,
    ) {
        let a: Vec<f64> = a.into_iter().map(|v| v as f64 / 8.0).collect();
        let b: Vec<f64> = b.into_iter().map(|v| v as f64 / 8.0).collect();
        prop_assert_eq!(overlap_fraction(&a, &b), overlap_fraction(&b, &a));
        let scale = 2f64.powi(k);
        let map = |v: &Vec<f64>| v.iter().map(|x| x * scale + shift as f64).collect::<Vec<f64>>();
        prop_assert_eq!(overlap_fraction(&a, &b), overlap_fraction(&map(&a), &map(&b)));
    }

    #[test]
    fn bins_ignore_stream_order(records in prop::collection::vec((0i64..400_000, text()), 0..40).prop_shuffle()) {
        let mut sorted = records.clone();
        sorted.sort();
        prop_assert_eq!(ingest_records(records, 3600).unwrap(), ingest_records(sorted, 3600).unwrap());
    }

    #[test]
    fn correlation_matrix_is_symmetric(series in prop::collection::vec(prop::collection::btree_map(0i64..20, -5.0f64..5.0, 0..15), 1..5)) {
        let list: Vec<SentimentSeries> = series
            .iter()
            .enumerate()
            .map(|(i, pts)| SentimentSeries {
                dictionary: format!("s{i}"),
                delta_h: 0.0,
                resolution: 86400,
                points: pts.iter().map(|(&d, &h)| SeriesPoint { start: d * 86400, h_avg: h, matched_mass: 1 }).collect(),
                no_signal_bins: 0,
            })
            .collect();
        let m = correlation_matrix(&list);
        for i in 0..list.len() {
            if let Some(r) = m.values[i][i] {
                prop_assert!((r - 1.0).abs() <= 1e-12);
            }
            for j in 0..list.len() {
                prop_assert_eq!(m.values[i][j], m.values[j][i]);
            }
        }
    }
}

#[test]
fn uppercase_emoticons_do_not_survive_lowercasing() {
    assert_eq!(tokenize(":D"), [":d"]);
    assert_eq!(tokenize(":d"), [":", "d"]);
}

#[test]
fn concat_experiment_is_seed_stable() {
    let rows = (0..20)
        .map(|i| {
            let (t, l) = if i % 2 == 0 { ("good fine bad", Label::Positive) } else { ("bad awful good", Label::Negative) };
            (format!("d{i}"), format!("{t} {}", "x ".repeat(i)), l)
        })
        .collect();
    let corpus = LabeledCorpus::from_texts("toy", rows).unwrap();
    let d = Dictionary::new(
        "toy",
        ScoreScale::continuous(1.0, 9.0, 5.0).unwrap(),
        vec![Entry::fixed("good", 7.0), Entry::fixed("fine", 6.0), Entry::fixed("bad", 2.0), Entry::fixed("awful", 1.5)],
    );
    let ix = build_index(&d);
    let a = concat_sample_experiment(&corpus, &ix, &[1, 3, 5], 25, 7, 100).unwrap();
    let b = concat_sample_experiment(&corpus, &ix, &[1, 3, 5], 25, 7, 100).unwrap();
    assert_eq!(a, b);
    let c = concat_sample_experiment(&corpus, &ix, &[1, 3, 5], 25, 8, 100).unwrap();
    assert_ne!(a, c);
}
