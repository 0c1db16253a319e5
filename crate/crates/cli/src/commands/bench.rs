use std::fmt::Write as _;

use anyhow::Result;

use hedono::bench::{
    binarization_sweep, calibrate_threshold, concat_sample_experiment, coverage_removal_sweep, evaluate_threshold,
    nb_evaluate, nb_informative_by_class, nb_train, InformativeMode, Label, RemovalStrategy, SweepResult,
    ThresholdPolicy,
};
use hedono::build_index;

use crate::args::{CalibrateArgs, ModeArg, NbArgs, ReviewsArgs, SweepArgs, SweepKind};
use crate::data::{load_corpus, load_dict_arg};
use crate::output::{opt, Run};

pub fn reviews_cmd(mut run: Run, a: &ReviewsArgs, seed: u64) -> Result<()> {
    let policy: ThresholdPolicy = a.policy.parse()?;
    let d = load_dict_arg(&mut run, &a.dict)?;
    let mut corpus = load_corpus(&mut run, &a.corpus, seed)?;
    if a.sentences {
        corpus = corpus.sentences()?;
    }
    let ix = build_index(&d);
    let eval = evaluate_threshold(&corpus, &ix, policy)?;
    let r = &eval.report;
    let mut body = run.header(&[
        ("dictionary", d.name.clone()),
        ("delta_h", a.dict.delta_h.to_string()),
        ("policy", policy.name()),
        ("threshold", opt(eval.threshold)),
        ("unit", if a.sentences { "sentence" } else { "review" }.to_string()),
    ]);
    body.push_str("n\tabstained\tf1_overall\tf1_of_scored\taccuracy_overall\taccuracy_of_scored\tscored_fraction\n");
    let _ = writeln!(
        body,
        "{}\t{}\t{}\t{}\t{}\t{}\t{}",
        r.n, r.abstained, r.overall, r.of_scored, r.accuracy_overall, r.accuracy_of_scored, r.scored_fraction
    );
    if !a.concat.is_empty() {
        let exp = concat_sample_experiment(&corpus, &ix, &a.concat, a.trials, seed, a.bins)?;
        let _ = writeln!(body, "\n#trials\t{}\n#bins\t{}", exp.trials, exp.bins);
        body.push_str("concat\tpos_mean\tpos_std\tneg_mean\tneg_std\toverlap\taccuracy\tmean_tokens\tabstained\n");
        for row in &exp.rows {
            let _ = writeln!(
                body,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                row.n,
                row.pos_mean,
                row.pos_std,
                row.neg_mean,
                row.neg_std,
                row.overlap,
                row.accuracy,
                row.mean_tokens,
                row.abstained
            );
        }
    }
    run.finish(&body, &[])
}

pub fn nb_cmd(mut run: Run, a: &NbArgs, seed: u64) -> Result<()> {
    let corpus = load_corpus(&mut run, &a.corpus, seed)?;
    let eval = nb_evaluate(&corpus, a.train_fraction, a.vocab, a.drop_top, a.trials, seed)?;
    let mut body = run.header(&[
        ("documents", corpus.len().to_string()),
        ("train_fraction", a.train_fraction.to_string()),
        ("vocab", a.vocab.to_string()),
        ("drop_top", a.drop_top.to_string()),
    ]);
    body.push_str("trials\ttrain_size\tvocabulary\tmean_accuracy\tstd_accuracy\n");
    let _ = writeln!(
        body,
        "{}\t{}\t{}\t{}\t{}",
        eval.trials, eval.train_size, eval.vocabulary_size, eval.mean_accuracy, eval.std_accuracy
    );
    if a.per_trial {
        body.push_str("\ntrial\taccuracy\n");
        for (i, acc) in eval.accuracies.iter().enumerate() {
            let _ = writeln!(body, "{i}\t{acc}");
        }
    }
    if a.informative > 0 {
        let model = nb_train(&corpus, a.train_fraction, a.vocab, a.drop_top, seed)?;
        let mode = match a.mode {
            ModeArg::Ratio => InformativeMode::Ratio,
            ModeArg::Difference => InformativeMode::Difference,
        };
        let lists = nb_informative_by_class(&model, a.informative, mode, None);
        let _ = writeln!(body, "\n#mode\t{}", serde_json::to_value(mode)?.as_str().unwrap_or(""));
        body.push_str("class\trank\tword\tvalue\n");
        for (label, list) in [Label::Positive, Label::Negative].iter().zip(&lists) {
            for (i, w) in list.iter().enumerate() {
                let _ = writeln!(body, "{}\t{}\t{}\t{}", label, i + 1, w.word, w.value);
            }
        }
    }
    run.finish(&body, &[])
}

fn push_sweep(body: &mut String, label: &str, r: &SweepResult) {
    for i in 0..r.axis.len() {
        let cov = r.coverage.as_ref().map(|c| c[i]);
        let _ = writeln!(body, "{label}\t{}\t{}\t{}\t{}", r.axis[i], r.f1[i], opt(cov), opt(r.thresholds[i]));
    }
}

pub fn sweep_cmd(mut run: Run, a: &SweepArgs, seed: u64) -> Result<()> {
    let policy: ThresholdPolicy = a.policy.parse()?;
    let strategies: Vec<RemovalStrategy> = if a.strategy == "all" {
        RemovalStrategy::ALL.to_vec()
    } else {
        vec![a.strategy.parse()?]
    };
    let d = load_dict_arg(&mut run, &a.dict)?;
    let corpus = load_corpus(&mut run, &a.corpus, seed)?;
    let mut body = run.header(&[
        ("dictionary", d.name.clone()),
        ("delta_h", a.dict.delta_h.to_string()),
        ("policy", policy.name()),
        ("steps", a.steps.to_string()),
    ]);
    match a.kind {
        SweepKind::Binarization => {
            body.push_str("sweep\tlambda\tf1\tcoverage\tthreshold\n");
            let r = binarization_sweep(&d, &corpus, a.steps, policy, seed)?;
            push_sweep(&mut body, "binarization", &r);
        }
        SweepKind::Removal => {
            body.push_str("strategy\tremoved\tf1\tcoverage\tthreshold\n");
            for s in strategies {
                let r = coverage_removal_sweep(&d, &corpus, s, a.steps, seed, policy)?;
                push_sweep(&mut body, s.as_str(), &r);
            }
        }
    }
    run.finish(&body, &[])
}

pub fn calibrate_cmd(mut run: Run, a: &CalibrateArgs, seed: u64) -> Result<()> {
    let d = load_dict_arg(&mut run, &a.dict)?;
    let corpus = load_corpus(&mut run, &a.corpus, seed)?;
    let c = calibrate_threshold(&corpus, &build_index(&d), a.train_fraction, seed)?;
    let mut body = run.header(&[
        ("dictionary", d.name.clone()),
        ("delta_h", a.dict.delta_h.to_string()),
        ("train_fraction", a.train_fraction.to_string()),
    ]);
    body.push_str("threshold\ttrain_size\ttrain_f1\tuncalibrated_train_f1\ttest_f1_overall\ttest_f1_of_scored\n");
    let _ = writeln!(
        body,
        "{}\t{}\t{}\t{}\t{}\t{}",
        c.threshold,
        c.train_size,
        c.train_f1,
        c.uncalibrated_train_f1,
        opt(c.test_f1.as_ref().map(|r| r.overall)),
        opt(c.test_f1.as_ref().map(|r| r.of_scored))
    );
    run.finish(&body, &[])
}
