//! Converters from the upstream distribution formats of the bundled
//! dictionaries and of the movie-review corpus into canonical files.
//!
//! Every converter emits canonical TSV first and parses it back in lenient
//! mode, so duplicate and conflicting entries are resolved by exactly the
//! same rule as any other dictionary load.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::bench::Label;
use crate::dictionary::{Dictionary, ScaleKind};
use crate::error::{Error, Outcome, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImportFormat {
    Labmt,
    Anew,
    Wk,
    Ol,
    Mpqa,
}

impl ImportFormat {
    pub const ALL: [ImportFormat; 5] = [
        ImportFormat::Labmt,
        ImportFormat::Anew,
        ImportFormat::Wk,
        ImportFormat::Ol,
        ImportFormat::Mpqa,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ImportFormat::Labmt => "labmt",
            ImportFormat::Anew => "anew",
            ImportFormat::Wk => "wk",
            ImportFormat::Ol => "ol",
            ImportFormat::Mpqa => "mpqa",
        }
    }
}

impl FromStr for ImportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ImportFormat::ALL
            .into_iter()
            .find(|f| f.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown import format `{s}`")))
    }
}

/// Bytes as ISO-8859-1.
fn latin1(bytes: &[u8]) -> String {
    bytes.iter().map(|&b| b as char).collect()
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

fn header(name: &str, kind: ScaleKind, min: f64, max: f64, neutral: f64) -> String {
    format!(
        "#name\t{name}\n#scale_kind\t{}\n#min\t{min}\n#max\t{max}\n#neutral\t{neutral}\n",
        kind.as_str()
    )
}

fn finish(tsv: String) -> Result<Outcome<Dictionary>> {
    Dictionary::parse_tsv(&tsv, false)
}

fn push(tsv: &mut String, surface: &str, score: f64, kind: &str) {
    let surface = surface.trim();
    if surface.is_empty() || surface.chars().any(char::is_whitespace) {
        log::debug!("skipping unusable surface `{surface}`");
        return;
    }
    let _ = writeln!(tsv, "{surface}\t{score}\t{kind}");
}

fn number(field: Option<&str>, line: usize, what: &str) -> Result<f64> {
    let raw = field.ok_or_else(|| Error::Parse {
        line,
        message: format!("missing {what} column"),
    })?;
    raw.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("bad {what} `{}`", raw.trim()),
    })
}

/// `word  rank  happs  ...` with one header row.
pub fn labmt_from_text(text: &str) -> Result<Outcome<Dictionary>> {
    let mut tsv = header("labmt", ScaleKind::Continuous, 1.0, 9.0, 5.0);
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        let score = number(f.get(2).copied(), i + 1, "happs")?;
        push(&mut tsv, f[0], score, "fixed");
    }
    finish(tsv)
}

/// Tab-separated rows with the valence mean in the third column.
pub fn anew_from_text(text: &str) -> Result<Outcome<Dictionary>> {
    let mut tsv = header("anew", ScaleKind::Continuous, 1.0, 9.0, 5.0);
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        let score = number(f.get(2).copied(), i + 1, "valence")?;
        push(&mut tsv, f[0], score, "fixed");
    }
    finish(tsv)
}

/// Comma-separated with a header; word in column 1, `V.Mean.Sum` in column 2.
pub fn wk_from_text(text: &str) -> Result<Outcome<Dictionary>> {
    let mut tsv = header("wk", ScaleKind::Continuous, 1.0, 9.0, 5.0);
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| Error::Parse {
            line: i + 2,
            message: e.to_string(),
        })?;
        let score = number(row.get(2), i + 2, "V.Mean.Sum")?;
        push(&mut tsv, row.get(1).unwrap_or(""), score, "fixed");
    }
    finish(tsv)
}

/// Two word lists; lines starting with `;` are comments.
pub fn ol_from_text(positive: &str, negative: &str) -> Result<Outcome<Dictionary>> {
    let mut tsv = header("ol", ScaleKind::Binary, -1.0, 1.0, 0.0);
    for (text, score) in [(positive, 1.0), (negative, -1.0)] {
        for line in text.lines() {
            let w = line.trim();
            if w.is_empty() || w.starts_with(';') {
                continue;
            }
            push(&mut tsv, w, score, "fixed");
        }
    }
    finish(tsv)
}

/// `key=value` records. `stemmed1=y` marks a stem. `priorpolarity=both`
/// becomes one positive and one negative line, which the conflict rule then
/// drops; `weakneg` counts as negative.
pub fn mpqa_from_text(text: &str) -> Result<Outcome<Dictionary>> {
    let mut tsv = header("mpqa", ScaleKind::Binary, -1.0, 1.0, 0.0);
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let field = |key: &str| {
            line.split_whitespace()
                .find_map(|kv| kv.split_once('=').filter(|(k, _)| *k == key).map(|(_, v)| v))
        };
        let missing = |key: &str| Error::Parse {
            line: i + 1,
            message: format!("missing `{key}`"),
        };
        let word = field("word1").ok_or_else(|| missing("word1"))?;
        // the upstream file has one `stemmed1=1`; anything but `y` is fixed
        let kind = match field("stemmed1") {
            Some("y") => "stem",
            Some(_) => "fixed",
            None => return Err(missing("stemmed1")),
        };
        let scores: &[f64] = match field("priorpolarity") {
            Some("positive") => &[1.0],
            Some("negative") | Some("weakneg") => &[-1.0],
            Some("neutral") => &[0.0],
            Some("both") => &[1.0, -1.0],
            Some(other) => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("unknown priorpolarity `{other}`"),
                })
            }
            None => return Err(missing("priorpolarity")),
        };
        for &s in scores {
            push(&mut tsv, word, s, kind);
        }
    }
    finish(tsv)
}

/// Reads the upstream files for `format` from `source`, which is either the
/// file itself or a directory holding the usual file names.
pub fn import_dictionary(format: ImportFormat, source: &Path) -> Result<Outcome<Dictionary>> {
    let pick = |name: &str| {
        if source.is_dir() {
            source.join(name)
        } else {
            source.to_path_buf()
        }
    };
    match format {
        ImportFormat::Labmt => labmt_from_text(&String::from_utf8_lossy(&read(&pick("labMT1.txt"))?)),
        ImportFormat::Anew => anew_from_text(&latin1(&read(&pick("all-2.csv"))?)),
        ImportFormat::Wk => wk_from_text(&String::from_utf8_lossy(&read(&pick("BRM-emot-submit.csv"))?)),
        ImportFormat::Mpqa => mpqa_from_text(&String::from_utf8_lossy(&read(&pick(
            "subjclueslen1-HLTEMNLP05.tff",
        ))?)),
        ImportFormat::Ol => {
            if !source.is_dir() {
                return Err(Error::InvalidArgument(
                    "the ol importer needs the directory holding both word lists".into(),
                ));
            }
            let pos = latin1(&read(&source.join("positive-words-clean.txt"))?);
            let neg = latin1(&read(&source.join("negative-words-clean.txt"))?);
            ol_from_text(&pos, &neg)
        }
    }
}

/// Parses a headerless `label,text` CSV with labels `1` and `-1`. A leading
/// byte-order mark is ignored.
pub fn reviews_from_csv(text: &str) -> Result<Vec<(Label, String)>> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        let (Some(label), Some(body)) = (row.get(0), row.get(1)) else {
            return Err(Error::Parse {
                line: i + 1,
                message: "expected `label,text`".into(),
            });
        };
        let label: Label = label.parse().map_err(|_| Error::Parse {
            line: i + 1,
            message: format!("unknown label `{label}`"),
        })?;
        out.push((label, body.to_string()));
    }
    Ok(out)
}

/// Writes `pos/NNNN.txt` and `neg/NNNN.txt` under `dir`, numbered by
/// position in the input so the directory loads back in input order per
/// class.
pub fn write_review_dirs(reviews: &[(Label, String)], dir: &Path) -> Result<()> {
    for label in [Label::Positive, Label::Negative] {
        let sub = dir.join(label.as_str());
        fs::create_dir_all(&sub).map_err(|e| Error::io(&sub, e))?;
    }
    for (i, (label, text)) in reviews.iter().enumerate() {
        let path = dir.join(label.as_str()).join(format!("{i:04}.txt"));
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::MatchKind;

    #[test]
    fn labmt_rows() {
        let text = "word\trank\thapps\tstddev\nlaughter\t1\t8.50\t0.93\nthe\t2\t4.98\t1.0\n";
        let d = labmt_from_text(text).unwrap().into_value();
        assert_eq!(d.len(), 2);
        assert_eq!(d.entries[0].score, 8.5);
        assert_eq!(d.scale.neutral, 5.0);
    }

    #[test]
    fn anew_is_latin1() {
        let d = anew_from_text(&latin1(b"caf\xe9\t1\t7.0\t1.0\r\n")).unwrap().into_value();
        assert_eq!(d.entries[0].surface, "café");
    }

    #[test]
    fn wk_columns() {
        let text = ",Word,V.Mean.Sum,V.SD.Sum\n1,Aardvark,6.26,2.21\n";
        let d = wk_from_text(text).unwrap().into_value();
        assert_eq!(d.entries[0].surface, "aardvark");
        assert_eq!(d.entries[0].score, 6.26);
    }

    #[test]
    fn ol_skips_comments_and_drops_conflicts() {
        let out = ol_from_text(";c\n\ngood\nfine\n", "bad\nfine\n").unwrap();
        assert_eq!(out.warnings.len(), 1);
        let d = out.into_value();
        let words: Vec<&str> = d.entries.iter().map(|e| e.surface.as_str()).collect();
        assert_eq!(words, ["good", "bad"]);
    }

    #[test]
    fn mpqa_records() {
        let text = "type=weaksubj len=1 word1=abandon pos1=verb stemmed1=y priorpolarity=negative\n\
                    type=strongsubj len=1 word1=deep pos1=adj stemmed1=n priorpolarity=both\n\
                    type=weaksubj len=1 word1=about pos1=adj stemmed1=n priorpolarity=neutral\n\
                    type=weaksubj len=1 word1=meh pos1=adj stemmed1=n priorpolarity=weakneg\n";
        let d = mpqa_from_text(text).unwrap().into_value();
        assert_eq!(d.len(), 3);
        assert_eq!(d.entries[0].kind, MatchKind::Stem);
        assert_eq!(d.entries[1].score, 0.0);
        assert_eq!(d.entries[2].score, -1.0);
        assert!(mpqa_from_text("word1=x stemmed1=n priorpolarity=odd\n").is_err());
        assert!(mpqa_from_text("word1=x priorpolarity=negative\n").is_err());
        let odd = mpqa_from_text("word1=x stemmed1=1 priorpolarity=negative\n").unwrap().into_value();
        assert_eq!(odd.entries[0].kind, MatchKind::Fixed);
    }

    #[test]
    fn reviews_csv() {
        let r = reviews_from_csv("\u{feff}\"1\",\"a, b\"\n\"-1\",\"c\"\n").unwrap();
        assert_eq!(r, vec![(Label::Positive, "a, b".to_string()), (Label::Negative, "c".to_string())]);
    }

    #[test]
    fn format_names() {
        for f in ImportFormat::ALL {
            assert_eq!(f.as_str().parse::<ImportFormat>().unwrap(), f);
        }
        assert!("nope".parse::<ImportFormat>().is_err());
    }
}
