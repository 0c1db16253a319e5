use std::fmt::Write as _;

use anyhow::{bail, Result};

use hedono::bench::LabeledCorpus;
use hedono::shift::{export_shift, render_shift_svg, word_shift};
use hedono::textproc::coverage_with_window;
use hedono::{build_index, score_text, tokenize, FreqVector};

use crate::args::{CoverageArgs, Curve, ScoreArgs, ShiftArgs, TokenizeArgs};
use crate::data::{load_dict, load_dict_arg, read_text, read_vector, resolve};
use crate::output::{opt, Run};

pub fn tokenize_cmd(mut run: Run, a: &TokenizeArgs) -> Result<()> {
    let text = read_text(&mut run, &a.input)?;
    let mut body = String::new();
    if a.counts {
        body.push_str(&run.header(&[]));
        body.push_str(&FreqVector::from_text(&text).to_tsv());
    } else {
        for t in tokenize(&text) {
            body.push_str(&t);
            body.push('\n');
        }
    }
    run.finish(&body, &[])
}

pub fn coverage_cmd(mut run: Run, a: &CoverageArgs) -> Result<()> {
    let mut fv = FreqVector::new();
    for input in &a.inputs {
        let path = resolve(input);
        if path.is_dir() {
            run.input(&path);
            fv.merge(&LabeledCorpus::load(&path)?.total_frequencies());
        } else {
            fv.merge(&read_vector(&mut run, input, a.word_vectors)?);
        }
    }
    if fv.is_empty() {
        bail!("inputs contain no tokens");
    }
    let mut body = run.header(&[
        ("tokens", fv.total().to_string()),
        ("types", fv.len().to_string()),
        ("delta_h", a.delta_h.to_string()),
    ]);
    match a.curve {
        Curve::None => body.push_str("dictionary\tentries\ttype_coverage\ttoken_coverage\n"),
        Curve::ByRank => {
            let _ = writeln!(body, "#window\t{}", a.window);
            body.push_str("dictionary\trank\tby_rank\n");
        }
        Curve::Cumulative => body.push_str("dictionary\trank\tcumulative\n"),
    }
    for name in &a.dicts {
        let d = load_dict(&mut run, name, a.delta_h, false)?;
        let ix = build_index(&d);
        let r = coverage_with_window(&ix, &fv, a.window);
        match a.curve {
            Curve::None => {
                let _ = writeln!(body, "{}\t{}\t{}\t{}", d.name, d.len(), r.type_coverage, r.token_coverage);
            }
            Curve::ByRank => {
                for (rank, v) in &r.by_rank {
                    let _ = writeln!(body, "{}\t{rank}\t{v}", d.name);
                }
            }
            Curve::Cumulative => {
                for (rank, v) in &r.cumulative {
                    let _ = writeln!(body, "{}\t{rank}\t{v}", d.name);
                }
            }
        }
    }
    run.finish(&body, &[])
}

pub fn score_cmd(mut run: Run, a: &ScoreArgs) -> Result<()> {
    let d = load_dict_arg(&mut run, &a.dict)?;
    let ix = build_index(&d);
    let mut body = run.header(&[("dictionary", d.name.clone()), ("delta_h", a.dict.delta_h.to_string())]);
    body.push_str("doc\th_avg\tmatched_mass\tmatched_types\ttotal_tokens\n");
    for doc in &a.docs {
        let fv = read_vector(&mut run, doc, a.word_vectors)?;
        let r = score_text(&ix, &fv);
        let _ = writeln!(
            body,
            "{}\t{}\t{}\t{}\t{}",
            doc.display(),
            opt(r.h_avg),
            r.matched_token_mass,
            r.matched_type_count,
            r.total_tokens
        );
    }
    run.finish(&body, &[])
}

pub fn shift_cmd(mut run: Run, a: &ShiftArgs) -> Result<()> {
    if a.top == 0 {
        return Err(hedono::Error::InvalidArgument("--top must be at least 1".into()).into());
    }
    let d = load_dict_arg(&mut run, &a.dict)?;
    let ix = build_index(&d);
    let reference = read_vector(&mut run, &a.reference, a.word_vectors)?;
    let comp = read_vector(&mut run, &a.comp, a.word_vectors)?;
    let r = word_shift(&ix, &reference, &comp)?;

    let body = if a.json {
        export_shift(&r, a.top).to_json()?
    } else {
        let mut body = run.header(&[
            ("dictionary", r.dictionary.clone()),
            ("delta_h", r.delta_h.to_string()),
            ("ref_score", r.ref_score.to_string()),
            ("comp_score", r.comp_score.to_string()),
            ("normalized", r.normalized.to_string()),
        ]);
        body.push_str("rank\tword\tcontribution\tsentiment\tfrequency\tscore\tp_ref\tp_comp\n");
        for (i, it) in r.items.iter().take(a.top).enumerate() {
            let _ = writeln!(
                body,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                i + 1,
                it.word,
                it.contribution,
                it.sentiment_sign.symbol(),
                it.freq_direction.symbol(),
                it.score,
                it.p_ref,
                it.p_comp
            );
        }
        body
    };
    let extra = match &a.svg {
        Some(p) => vec![(p.clone(), render_shift_svg(&r, a.top).into_bytes())],
        None => Vec::new(),
    };
    run.finish(&body, &extra)
}
