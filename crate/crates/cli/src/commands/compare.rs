use std::fmt::Write as _;

use anyhow::Result;

use hedono::compare::{compare_grid, pair_compare, top_mismatches};

use crate::args::{CompareArgs, GridArgs};
use crate::data::load_dict;
use crate::output::{opt, Run};

pub fn compare_cmd(mut run: Run, a: &CompareArgs) -> Result<()> {
    let dx = load_dict(&mut run, &a.x, a.delta_h, false)?;
    let dy = load_dict(&mut run, &a.y, a.delta_h, false)?;
    let rep = pair_compare(&dx, &dy);
    let mut body = run.header(&[
        ("x", rep.dict_x.clone()),
        ("y", rep.dict_y.clone()),
        ("pairs", rep.pairs.len().to_string()),
        ("r", opt(rep.r)),
        ("slope", opt(rep.fit.map(|f| f.slope))),
        ("intercept", opt(rep.fit.map(|f| f.intercept))),
        ("mismatches", rep.mismatches.len().to_string()),
    ]);
    if let Some(h) = &rep.histogram_summary {
        let _ = writeln!(body, "#binary_side\t{}", h.binary_side);
        for b in &h.buckets {
            let counts: Vec<String> = b.histogram.iter().map(u64::to_string).collect();
            let _ = writeln!(
                body,
                "#bucket\t{}\tcount={}\tmean={}\tstd={}\thistogram={}",
                b.binary_score,
                b.count,
                b.mean,
                b.std,
                counts.join(",")
            );
        }
    }
    if a.pairs {
        body.push_str("word\tscore_x\tscore_y\tmatched_via\n");
        for p in &rep.pairs {
            let _ = writeln!(body, "{}\t{}\t{}\t{}", p.word, p.score_x, p.score_y, p.matched_via.as_str());
        }
    } else {
        body.push_str("rank\tword\tscore_x\tscore_y\tmagnitude\n");
        for (i, m) in top_mismatches(&rep, a.top).iter().enumerate() {
            let _ = writeln!(body, "{}\t{}\t{}\t{}\t{}", i + 1, m.word, m.score_x, m.score_y, m.magnitude);
        }
    }
    run.finish(&body, &[])
}

pub fn grid_cmd(mut run: Run, a: &GridArgs) -> Result<()> {
    let dicts = a
        .dicts
        .iter()
        .map(|n| load_dict(&mut run, n, a.delta_h, false))
        .collect::<Result<Vec<_>>>()?;
    let mut body = run.header(&[("delta_h", a.delta_h.to_string())]);
    body.push_str("x\ty\tpairs\tr\tslope\tintercept\tmismatches\n");
    for rep in compare_grid(&dicts) {
        let _ = writeln!(
            body,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            rep.dict_x,
            rep.dict_y,
            rep.pairs.len(),
            opt(rep.r),
            opt(rep.fit.map(|f| f.slope)),
            opt(rep.fit.map(|f| f.intercept)),
            rep.mismatches.len()
        );
    }
    run.finish(&body, &[])
}
