//! Timestamped text streams binned at fixed resolutions, scored per bin and
//! correlated across dictionaries.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compare::pearson;
use crate::error::{Error, Result};
use crate::scoring::score_text;
use crate::textproc::{FreqVector, MatchIndex};

/// 15 minutes, 1 hour, 3 hours, 12 hours and 1 day.
pub const SUPPORTED_RESOLUTIONS: [i64; 5] = [900, 3600, 10800, 43200, 86400];

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct Record {
    pub t: i64,
    pub text: String,
}

fn check_resolution(resolution: i64) -> Result<()> {
    if SUPPORTED_RESOLUTIONS.contains(&resolution) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "unsupported resolution {resolution}s; choose one of {SUPPORTED_RESOLUTIONS:?}"
        )))
    }
}

/// UTC-aligned start of the bin holding `t`.
pub fn bin_start(t: i64, resolution: i64) -> i64 {
    t.div_euclid(resolution) * resolution
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BinMap {
    pub resolution: i64,
    pub bins: BTreeMap<i64, FreqVector>,
    /// Malformed records that were skipped.
    pub skipped: usize,
}

impl BinMap {
    pub fn new(resolution: i64) -> Result<Self> {
        check_resolution(resolution)?;
        Ok(BinMap {
            resolution,
            bins: BTreeMap::new(),
            skipped: 0,
        })
    }

    pub fn add(&mut self, t: i64, fv: &FreqVector) {
        self.bins
            .entry(bin_start(t, self.resolution))
            .or_default()
            .merge(fv);
    }

    pub fn merge(&mut self, other: &BinMap) -> Result<()> {
        if other.resolution != self.resolution {
            return Err(Error::InvalidArgument(format!(
                "cannot merge {}s bins into {}s bins",
                other.resolution, self.resolution
            )));
        }
        for (&start, fv) in &other.bins {
            self.bins.entry(start).or_default().merge(fv);
        }
        self.skipped += other.skipped;
        Ok(())
    }

    /// Re-bins into a coarser resolution that is a multiple of this one.
    pub fn downsample(&self, resolution: i64) -> Result<BinMap> {
        check_resolution(resolution)?;
        if resolution % self.resolution != 0 {
            return Err(Error::InvalidArgument(format!(
                "{resolution}s is not a multiple of {}s",
                self.resolution
            )));
        }
        let mut out = BinMap::new(resolution)?;
        for (&start, fv) in &self.bins {
            out.add(start, fv);
        }
        out.skipped = self.skipped;
        Ok(out)
    }
}

pub fn ingest_records<I>(records: I, resolution: i64) -> Result<BinMap>
where
    I: IntoIterator<Item = (i64, String)>,
{
    let mut bins = BinMap::new(resolution)?;
    for (t, text) in records {
        bins.add(t, &FreqVector::from_text(&text));
    }
    Ok(bins)
}

fn parse_record(line: &str) -> Option<Record> {
    serde_json::from_str(line).ok()
}

/// Reads newline-delimited `{"t": <epoch seconds>, "text": "..."}` records.
/// Unparseable lines are skipped and counted; blank lines are ignored.
pub fn ingest_stream<R: BufRead>(reader: R, resolution: i64) -> Result<BinMap> {
    check_resolution(resolution)?;
    let lines: Vec<String> = reader
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::io("<stream>", e))?;
    let parsed: Vec<Option<(i64, FreqVector)>> = lines
        .par_iter()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_record(l).map(|r| (bin_start(r.t, resolution), FreqVector::from_text(&r.text))))
        .collect();
    let mut bins = BinMap::new(resolution)?;
    for p in parsed {
        match p {
            Some((start, fv)) => bins.add(start, &fv),
            None => bins.skipped += 1,
        }
    }
    if bins.skipped > 0 {
        log::warn!("skipped {} malformed records", bins.skipped);
    }
    Ok(bins)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub start: i64,
    pub h_avg: f64,
    pub matched_mass: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentSeries {
    pub dictionary: String,
    pub delta_h: f64,
    pub resolution: i64,
    pub points: Vec<SeriesPoint>,
    /// Non-empty bins left out for lack of scored words.
    pub no_signal_bins: usize,
}

impl SentimentSeries {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.h_avg).collect()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "#dictionary\t{}", self.dictionary);
        let _ = writeln!(out, "#delta_h\t{}", self.delta_h);
        let _ = writeln!(out, "#resolution\t{}", self.resolution);
        let _ = writeln!(out, "#no_signal_bins\t{}", self.no_signal_bins);
        out.push_str("bin_start\th_avg\tmatched_mass\n");
        for p in &self.points {
            let _ = writeln!(out, "{}\t{}\t{}", p.start, p.h_avg, p.matched_mass);
        }
        out
    }

    /// Parses [`to_tsv`](Self::to_tsv) output. Unknown `#` lines are ignored.
    pub fn from_tsv(text: &str) -> Result<SentimentSeries> {
        let mut s = SentimentSeries {
            dictionary: String::new(),
            delta_h: 0.0,
            resolution: 0,
            points: Vec::new(),
            no_signal_bins: 0,
        };
        let bad = |line: usize, message: String| Error::Parse { line, message };
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            if line.trim().is_empty() || line.starts_with("bin_start") {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('\t') {
                    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| bad(lineno, format!("bad `{k}`")));
                    match k {
                        "dictionary" => s.dictionary = v.to_string(),
                        "delta_h" => s.delta_h = num(v)?,
                        "resolution" => s.resolution = num(v)? as i64,
                        "no_signal_bins" => s.no_signal_bins = num(v)? as usize,
                        _ => {}
                    }
                }
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            // an optional fourth column carries the normalized score
            if !(3..=4).contains(&f.len()) {
                return Err(bad(lineno, format!("expected 3 or 4 fields, found {}", f.len())));
            }
            let start = f[0].parse().map_err(|_| bad(lineno, format!("bad bin start `{}`", f[0])))?;
            let h_avg = f[1].parse().map_err(|_| bad(lineno, format!("bad score `{}`", f[1])))?;
            let matched_mass = f[2].parse().map_err(|_| bad(lineno, format!("bad mass `{}`", f[2])))?;
            s.points.push(SeriesPoint {
                start,
                h_avg,
                matched_mass,
            });
        }
        if s.points.windows(2).any(|w| w[0].start >= w[1].start) {
            return Err(Error::InvalidArgument("series points must strictly increase in time".into()));
        }
        Ok(s)
    }
}

pub fn build_series(bins: &BinMap, ix: &MatchIndex) -> SentimentSeries {
    let entries: Vec<(&i64, &FreqVector)> = bins.bins.iter().filter(|(_, fv)| !fv.is_empty()).collect();
    let scored: Vec<Option<SeriesPoint>> = entries
        .par_iter()
        .map(|(&start, fv)| {
            let r = score_text(ix, fv);
            r.h_avg.map(|h_avg| SeriesPoint {
                start,
                h_avg,
                matched_mass: r.matched_token_mass,
            })
        })
        .collect();
    let no_signal_bins = scored.iter().filter(|p| p.is_none()).count();
    SentimentSeries {
        dictionary: ix.source().to_string(),
        delta_h: ix.dictionary().delta_h(),
        resolution: bins.resolution,
        points: scored.into_iter().flatten().collect(),
        no_signal_bins,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    /// `None` where fewer than two shared bins exist or a side is constant.
    pub values: Vec<Vec<Option<f64>>>,
    pub shared_bins: Vec<Vec<usize>>,
}

fn aligned(a: &SentimentSeries, b: &SentimentSeries) -> (Vec<f64>, Vec<f64>) {
    let bm: BTreeMap<i64, f64> = b.points.iter().map(|p| (p.start, p.h_avg)).collect();
    a.points
        .iter()
        .filter_map(|p| bm.get(&p.start).map(|&y| (p.h_avg, y)))
        .unzip()
}

pub fn correlation_matrix(series_list: &[SentimentSeries]) -> CorrelationMatrix {
    let n = series_list.len();
    let mut values = vec![vec![None; n]; n];
    let mut shared_bins = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i..n {
            let (x, y) = aligned(&series_list[i], &series_list[j]);
            let r = pearson(&x, &y).ok();
            values[i][j] = r;
            values[j][i] = r;
            shared_bins[i][j] = x.len();
            shared_bins[j][i] = x.len();
        }
    }
    CorrelationMatrix {
        names: series_list.iter().map(|s| s.dictionary.clone()).collect(),
        values,
        shared_bins,
    }
}

impl CorrelationMatrix {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("series");
        for n in &self.names {
            let _ = write!(out, "\t{n}");
        }
        out.push('\n');
        for (name, row) in self.names.iter().zip(&self.values) {
            out.push_str(name);
            for v in row {
                match v {
                    Some(r) => {
                        let _ = write!(out, "\t{r}");
                    }
                    None => out.push_str("\tNA"),
                }
            }
            out.push('\n');
        }
        out
    }
}
