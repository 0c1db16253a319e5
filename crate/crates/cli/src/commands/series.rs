use std::fmt::Write as _;
use std::io::BufReader;

use anyhow::{Context, Result};

use hedono::build_index;
use hedono::scoring::normalize_series;
use hedono::timeseries::{build_series, correlation_matrix, ingest_stream, BinMap, SentimentSeries};

use crate::args::{CorrelateArgs, SeriesArgs};
use crate::data::{load_dict, read_text, resolve};
use crate::output::Run;

pub fn series_cmd(mut run: Run, a: &SeriesArgs) -> Result<()> {
    let name = a.dict.as_deref().unwrap_or_default();
    let d = load_dict(&mut run, name, a.delta_h, false)?;
    let mut bins = BinMap::new(a.resolution)?;
    for s in &a.streams {
        let text = read_text(&mut run, s)?;
        let part = ingest_stream(BufReader::new(text.as_bytes()), a.resolution)
            .with_context(|| format!("reading stream {}", s.display()))?;
        bins.merge(&part)?;
    }
    let series = build_series(&bins, &build_index(&d));
    let mut body = run.header(&[
        ("dictionary", series.dictionary.clone()),
        ("delta_h", series.delta_h.to_string()),
        ("resolution", series.resolution.to_string()),
        ("no_signal_bins", series.no_signal_bins.to_string()),
        ("skipped_records", bins.skipped.to_string()),
    ]);
    let normalized = if a.normalize && !series.points.is_empty() {
        Some(normalize_series(&series.values())?.into_value())
    } else {
        None
    };
    body.push_str("bin_start\th_avg\tmatched_mass");
    body.push_str(if normalized.is_some() { "\th_norm\n" } else { "\n" });
    for (i, p) in series.points.iter().enumerate() {
        let _ = write!(body, "{}\t{}\t{}", p.start, p.h_avg, p.matched_mass);
        if let Some(n) = &normalized {
            let _ = write!(body, "\t{}", n[i]);
        }
        body.push('\n');
    }
    run.finish(&body, &[])
}

pub fn correlate_cmd(mut run: Run, a: &CorrelateArgs) -> Result<()> {
    let list = a
        .series
        .iter()
        .map(|p| {
            let path = resolve(p);
            let text = read_text(&mut run, &path)?;
            SentimentSeries::from_tsv(&text).with_context(|| format!("parsing series {}", path.display()))
        })
        .collect::<Result<Vec<_>>>()?;
    let m = correlation_matrix(&list);
    let mut body = run.header(&[]);
    body.push_str(&m.to_tsv());
    run.finish(&body, &[])
}
