//! Sentiment dictionaries: the canonical TSV format, stop-lens filtering,
//! word masking and validation.
//!
//! A dictionary file looks like
//!
//! ```text
//! #name	labmt
//! #scale_kind	continuous
//! #min	1
//! #max	9
//! #neutral	5
//! #license	CC
//! laughter	8.5	fixed
//! abandon	-1	stem
//! ```
//!
//! Stems are stored without the trailing asterisk; the third column carries
//! the match kind. Surfaces are lowercased on load.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Outcome, Result};

/// Slack used when comparing a score's distance from neutral against a lens
/// width, so that decimal scores such as 5.3 survive a 0.3 lens.
const LENS_EPSILON: f64 = 1e-9;

const LENS_SUFFIX: &str = "@dh";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleKind {
    Continuous,
    Binary,
}

impl ScaleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScaleKind::Continuous => "continuous",
            ScaleKind::Binary => "binary",
        }
    }
}

impl FromStr for ScaleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "continuous" => Ok(ScaleKind::Continuous),
            "binary" => Ok(ScaleKind::Binary),
            other => Err(Error::InvalidScale(format!("unknown scale kind `{other}`"))),
        }
    }
}

/// The range and neutral point of a dictionary's scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreScale {
    pub kind: ScaleKind,
    pub min_score: f64,
    pub max_score: f64,
    pub neutral: f64,
}

impl ScoreScale {
    pub fn continuous(min_score: f64, max_score: f64, neutral: f64) -> Result<Self> {
        let scale = ScoreScale {
            kind: ScaleKind::Continuous,
            min_score,
            max_score,
            neutral,
        };
        scale.check()?;
        Ok(scale)
    }

    /// The ±1 scale with 0 as neutral.
    pub fn binary() -> Self {
        ScoreScale {
            kind: ScaleKind::Binary,
            min_score: -1.0,
            max_score: 1.0,
            neutral: 0.0,
        }
    }

    pub fn check(&self) -> Result<()> {
        let finite = [self.min_score, self.max_score, self.neutral]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidScale("non-finite bound".into()));
        }
        match self.kind {
            ScaleKind::Continuous => {
                if !(self.min_score < self.neutral && self.neutral < self.max_score) {
                    return Err(Error::InvalidScale(format!(
                        "continuous scale needs min < neutral < max, got {} / {} / {}",
                        self.min_score, self.neutral, self.max_score
                    )));
                }
            }
            ScaleKind::Binary => {
                if self.min_score != -1.0 || self.max_score != 1.0 || self.neutral != 0.0 {
                    return Err(Error::InvalidScale(format!(
                        "binary scale must be [-1, 1] with neutral 0, got {} / {} / {}",
                        self.min_score, self.neutral, self.max_score
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, score: f64) -> bool {
        score >= self.min_score && score <= self.max_score
    }

    pub fn polarity(&self, score: f64) -> Polarity {
        if score > self.neutral {
            Polarity::Positive
        } else if score < self.neutral {
            Polarity::Negative
        } else {
            Polarity::Neutral
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Negative,
    Neutral,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchKind {
    Fixed,
    Stem,
}

impl MatchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchKind::Fixed => "fixed",
            MatchKind::Stem => "stem",
        }
    }
}

impl FromStr for MatchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "fixed" => Ok(MatchKind::Fixed),
            "stem" => Ok(MatchKind::Stem),
            other => Err(Error::InvalidArgument(format!("unknown match kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub surface: String,
    pub kind: MatchKind,
    pub score: f64,
}

impl Entry {
    pub fn fixed(surface: &str, score: f64) -> Self {
        Entry {
            surface: surface.to_lowercase(),
            kind: MatchKind::Fixed,
            score,
        }
    }

    pub fn stem(surface: &str, score: f64) -> Self {
        Entry {
            surface: surface.to_lowercase(),
            kind: MatchKind::Stem,
            score,
        }
    }

    /// Display form: stems carry a trailing asterisk (`mar*`).
    pub fn label(&self) -> String {
        match self.kind {
            MatchKind::Fixed => self.surface.clone(),
            MatchKind::Stem => format!("{}*", self.surface),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dictionary {
    pub name: String,
    pub scale: ScoreScale,
    pub entries: Vec<Entry>,
    /// Free-form header fields other than name and scale (license, source, ...).
    pub metadata: BTreeMap<String, String>,
}

impl Dictionary {
    /// Builds a dictionary without validating it; see [`validate`].
    pub fn new(name: impl Into<String>, scale: ScoreScale, entries: Vec<Entry>) -> Self {
        Dictionary {
            name: name.into(),
            scale,
            entries,
            metadata: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_binary(&self) -> bool {
        self.scale.kind == ScaleKind::Binary
    }

    /// Lens width recorded by [`apply_stop_lens`], 0 when none was applied.
    pub fn delta_h(&self) -> f64 {
        self.metadata
            .get("delta_h")
            .and_then(|v| v.parse().ok())
            .unwrap_or(0.0)
    }

    /// Whether an entry with this score takes part in scoring. Neutral
    /// entries of binary dictionaries are kept for coverage but never scored;
    /// continuous dictionaries rely on the stop lens instead.
    pub fn is_scored(&self, score: f64) -> bool {
        match self.scale.kind {
            ScaleKind::Binary => score != self.scale.neutral,
            ScaleKind::Continuous => true,
        }
    }

    /// Mean over all scored entries; the default decision threshold.
    pub fn mean_scored_score(&self) -> Option<f64> {
        let (sum, n) = self
            .entries
            .iter()
            .filter(|e| self.is_scored(e.score))
            .fold((0.0, 0usize), |(s, n), e| (s + e.score, n + 1));
        (n > 0).then(|| sum / n as f64)
    }

    pub fn fixed_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.kind == MatchKind::Fixed)
            .count()
    }

    pub fn stem_count(&self) -> usize {
        self.entries.len() - self.fixed_count()
    }

    /// Returns a copy with the same scale and metadata but different entries.
    pub fn with_entries(&self, entries: Vec<Entry>) -> Dictionary {
        Dictionary {
            name: self.name.clone(),
            scale: self.scale,
            entries,
            metadata: self.metadata.clone(),
        }
    }

    /// Serializes to the canonical TSV.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("#name\t{}\n", self.name));
        out.push_str(&format!("#scale_kind\t{}\n", self.scale.kind.as_str()));
        out.push_str(&format!("#min\t{}\n", self.scale.min_score));
        out.push_str(&format!("#max\t{}\n", self.scale.max_score));
        out.push_str(&format!("#neutral\t{}\n", self.scale.neutral));
        for (key, value) in &self.metadata {
            out.push_str(&format!("#{key}\t{value}\n"));
        }
        for e in &self.entries {
            out.push_str(&format!("{}\t{}\t{}\n", e.surface, e.score, e.kind.as_str()));
        }
        out
    }

    /// Parses the canonical TSV. In strict mode any repeated
    /// `(surface, kind)` is an error; otherwise repeats whose scores fall in
    /// different polarity classes are all dropped and other repeats keep
    /// their first occurrence, each with a warning.
    pub fn parse_tsv(text: &str, strict: bool) -> Result<Outcome<Dictionary>> {
        let (name, scale, header, raw) = read_sections(text)?;
        if raw.is_empty() {
            return Err(Error::EmptyDictionary);
        }
        for (_, e) in &raw {
            if !scale.contains(e.score) {
                return Err(Error::ScoreOutOfScale {
                    surface: e.label(),
                    score: e.score,
                    min: scale.min_score,
                    max: scale.max_score,
                });
            }
        }

        let mut outcome = Outcome::new(Vec::new());
        let groups = group_entries(raw.iter().map(|(l, e)| (*l, e)));
        for group in groups {
            let (first_line, first) = group[0];
            if group.len() == 1 {
                outcome.value.push(first.clone());
                continue;
            }
            if strict {
                let (line, dup) = group[1];
                return Err(Error::DuplicateEntry {
                    line,
                    surface: dup.label(),
                    kind: dup.kind.as_str(),
                });
            }
            let scores: Vec<String> = group.iter().map(|(_, e)| e.score.to_string()).collect();
            if has_conflict(&scale, group.iter().map(|(_, e)| e.score)) {
                outcome.warn(format!(
                    "line {first_line}: `{}` has conflicting scores ({}); all dropped",
                    first.label(),
                    scores.join(", ")
                ));
            } else {
                outcome.warn(format!(
                    "line {first_line}: `{}` repeated with scores ({}); kept the first",
                    first.label(),
                    scores.join(", ")
                ));
                outcome.value.push(first.clone());
            }
        }

        if outcome.value.is_empty() {
            return Err(Error::EmptyDictionary);
        }
        let Outcome { value, warnings } = outcome;
        Ok(Outcome {
            value: Dictionary {
                name,
                scale,
                entries: value,
                metadata: header,
            },
            warnings,
        })
    }

    /// Parses the canonical TSV keeping every line as written: no scale
    /// check and no duplicate resolution. Meant for [`validate`].
    pub fn parse_tsv_raw(text: &str) -> Result<Dictionary> {
        let (name, scale, metadata, raw) = read_sections(text)?;
        Ok(Dictionary {
            name,
            scale,
            entries: raw.into_iter().map(|(_, e)| e).collect(),
            metadata,
        })
    }
}

type Sections = (String, ScoreScale, BTreeMap<String, String>, Vec<(usize, Entry)>);

fn read_sections(text: &str) -> Result<Sections> {
    let mut header: BTreeMap<String, String> = BTreeMap::new();
    let mut raw: Vec<(usize, Entry)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        // Header lines lead the file and have two fields, so surfaces such
        // as `#music` are still read as entries.
        if raw.is_empty() {
            if let Some(rest) = line.strip_prefix('#') {
                match rest.split('\t').count() {
                    1 => continue,
                    2 => {
                        let (key, value) = rest.split_once('\t').unwrap();
                        header.insert(key.trim().to_string(), value.trim().to_string());
                        continue;
                    }
                    _ => {}
                }
            }
        }
        raw.push((lineno, parse_entry(line, lineno)?));
    }
    let scale = scale_from_header(&mut header)?;
    let name = header.remove("name").ok_or_else(|| Error::Parse {
        line: 0,
        message: "missing `#name` header".into(),
    })?;
    Ok((name, scale, header, raw))
}

fn parse_entry(line: &str, lineno: usize) -> Result<Entry> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 3 {
        return Err(Error::Parse {
            line: lineno,
            message: format!("expected 3 tab-separated fields, found {}", fields.len()),
        });
    }
    let kind: MatchKind = fields[2].parse().map_err(|_| Error::Parse {
        line: lineno,
        message: format!("unknown match kind `{}`", fields[2].trim()),
    })?;
    let mut surface = fields[0].trim().to_lowercase();
    if kind == MatchKind::Stem {
        if let Some(s) = surface.strip_suffix('*') {
            surface = s.to_string();
        }
    }
    if surface.is_empty() {
        return Err(Error::Parse {
            line: lineno,
            message: "empty surface".into(),
        });
    }
    if surface.chars().any(char::is_whitespace) {
        return Err(Error::Parse {
            line: lineno,
            message: format!("surface `{surface}` contains whitespace"),
        });
    }
    let score: f64 = fields[1].trim().parse().map_err(|_| Error::Parse {
        line: lineno,
        message: format!("bad score `{}`", fields[1].trim()),
    })?;
    if !score.is_finite() {
        return Err(Error::Parse {
            line: lineno,
            message: "score is not finite".into(),
        });
    }
    Ok(Entry {
        surface,
        kind,
        score,
    })
}

fn scale_from_header(header: &mut BTreeMap<String, String>) -> Result<ScoreScale> {
    let kind: ScaleKind = header
        .remove("scale_kind")
        .ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing `#scale_kind` header".into(),
        })?
        .parse()?;
    let mut number = |key: &str| -> Result<Option<f64>> {
        match header.remove(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| Error::Parse {
                line: 0,
                message: format!("header `{key}` is not a number: `{v}`"),
            }),
        }
    };
    let (min, max, neutral) = (number("min")?, number("max")?, number("neutral")?);
    let scale = match kind {
        ScaleKind::Binary => {
            let b = ScoreScale::binary();
            ScoreScale {
                kind,
                min_score: min.unwrap_or(b.min_score),
                max_score: max.unwrap_or(b.max_score),
                neutral: neutral.unwrap_or(b.neutral),
            }
        }
        ScaleKind::Continuous => match (min, max, neutral) {
            (Some(min_score), Some(max_score), Some(neutral)) => ScoreScale {
                kind,
                min_score,
                max_score,
                neutral,
            },
            _ => {
                return Err(Error::Parse {
                    line: 0,
                    message: "continuous scale needs `#min`, `#max` and `#neutral`".into(),
                })
            }
        },
    };
    scale.check()?;
    Ok(scale)
}

/// Groups entries by `(surface, kind)`, preserving first-occurrence order.
fn group_entries<'a, I>(entries: I) -> Vec<Vec<(usize, &'a Entry)>>
where
    I: IntoIterator<Item = (usize, &'a Entry)>,
{
    let mut slot: HashMap<(&'a str, MatchKind), usize> = HashMap::new();
    let mut groups: Vec<Vec<(usize, &'a Entry)>> = Vec::new();
    for (line, e) in entries {
        match slot.get(&(e.surface.as_str(), e.kind)) {
            Some(&i) => groups[i].push((line, e)),
            None => {
                slot.insert((e.surface.as_str(), e.kind), groups.len());
                groups.push(vec![(line, e)]);
            }
        }
    }
    groups
}

fn has_conflict(scale: &ScoreScale, scores: impl Iterator<Item = f64>) -> bool {
    let mut seen: Option<Polarity> = None;
    for s in scores {
        let p = scale.polarity(s);
        match seen {
            None => seen = Some(p),
            Some(q) if q != p => return true,
            _ => {}
        }
    }
    false
}

pub fn load_dictionary(path: impl AsRef<Path>, strict: bool) -> Result<Outcome<Dictionary>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Dictionary::parse_tsv(&text, strict)
}

pub fn write_dictionary(d: &Dictionary, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, d.to_tsv()).map_err(|e| Error::io(path, e))
}

fn base_name(name: &str) -> &str {
    match name.rfind(LENS_SUFFIX) {
        Some(i) => &name[..i],
        None => name,
    }
}

/// Removes entries scoring within `delta_h` of neutral. Binary dictionaries
/// pass through unchanged with a warning.
pub fn apply_stop_lens(d: &Dictionary, delta_h: f64) -> Result<Outcome<Dictionary>> {
    if !(delta_h >= 0.0) || !delta_h.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "stop lens width must be a finite non-negative number, got {delta_h}"
        )));
    }
    if d.is_binary() {
        let mut out = Outcome::new(d.clone());
        out.warn(format!(
            "`{}` is binary; stop lens Δh = {delta_h} not applied",
            d.name
        ));
        return Ok(out);
    }
    let neutral = d.scale.neutral;
    let entries = d
        .entries
        .iter()
        .filter(|e| (e.score - neutral).abs() >= delta_h - LENS_EPSILON)
        .cloned()
        .collect();
    let mut lensed = d.with_entries(entries);
    lensed.name = format!("{}{LENS_SUFFIX}{delta_h}", base_name(&d.name));
    lensed
        .metadata
        .insert("delta_h".to_string(), delta_h.to_string());
    Ok(Outcome::new(lensed))
}

/// Parses a block pattern: `mar*` targets the stem `mar`, `vice` the fixed word.
pub fn parse_pattern(pattern: &str) -> Option<(String, MatchKind)> {
    let p = pattern.trim().to_lowercase();
    match p.strip_suffix('*') {
        Some("") => None,
        Some(stem) => Some((stem.to_string(), MatchKind::Stem)),
        None if p.is_empty() => None,
        None => Some((p, MatchKind::Fixed)),
    }
}

/// Removes the entries named by `patterns`. Unmatched patterns are reported
/// as warnings.
pub fn mask_words<S: AsRef<str>>(d: &Dictionary, patterns: &[S]) -> Outcome<Dictionary> {
    let targets: Vec<(String, MatchKind)> = patterns
        .iter()
        .filter_map(|p| parse_pattern(p.as_ref()))
        .collect();
    let mut used = vec![false; targets.len()];
    let entries = d
        .entries
        .iter()
        .filter(|e| {
            let mut keep = true;
            for (i, (surface, kind)) in targets.iter().enumerate() {
                if *kind == e.kind && *surface == e.surface {
                    used[i] = true;
                    keep = false;
                }
            }
            keep
        })
        .cloned()
        .collect();
    let mut out = Outcome::new(d.with_entries(entries));
    for ((surface, kind), hit) in targets.iter().zip(used) {
        if !hit {
            let label = match kind {
                MatchKind::Fixed => surface.clone(),
                MatchKind::Stem => format!("{surface}*"),
            };
            out.warn(format!("mask pattern `{label}` matched no entry of `{}`", d.name));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub total: usize,
    pub fixed: usize,
    pub stems: usize,
    pub positive: usize,
    pub negative: usize,
    pub neutral: usize,
    /// Labels of `(surface, kind)` keys carrying scores of different polarity.
    pub conflicts: Vec<String>,
    /// Labels of keys repeated with same-polarity scores.
    pub duplicates: Vec<String>,
    pub scale_violations: Vec<String>,
    pub scale_error: Option<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.conflicts.is_empty()
            && self.duplicates.is_empty()
            && self.scale_violations.is_empty()
            && self.scale_error.is_none()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "total\t{}", self.total)?;
        writeln!(f, "fixed\t{}", self.fixed)?;
        writeln!(f, "stems\t{}", self.stems)?;
        writeln!(f, "positive\t{}", self.positive)?;
        writeln!(f, "negative\t{}", self.negative)?;
        writeln!(f, "neutral\t{}", self.neutral)?;
        writeln!(f, "conflicts\t{}", self.conflicts.len())?;
        writeln!(f, "duplicates\t{}", self.duplicates.len())?;
        writeln!(f, "scale_violations\t{}", self.scale_violations.len())?;
        if let Some(e) = &self.scale_error {
            writeln!(f, "scale_error\t{e}")?;
        }
        for c in &self.conflicts {
            writeln!(f, "conflict\t{c}")?;
        }
        for c in &self.duplicates {
            writeln!(f, "duplicate\t{c}")?;
        }
        for c in &self.scale_violations {
            writeln!(f, "scale_violation\t{c}")?;
        }
        Ok(())
    }
}

pub fn validate(d: &Dictionary) -> ValidationReport {
    let mut report = ValidationReport {
        total: d.entries.len(),
        fixed: d.fixed_count(),
        stems: d.stem_count(),
        scale_error: d.scale.check().err().map(|e| e.to_string()),
        ..Default::default()
    };
    for e in &d.entries {
        match d.scale.polarity(e.score) {
            Polarity::Positive => report.positive += 1,
            Polarity::Negative => report.negative += 1,
            Polarity::Neutral => report.neutral += 1,
        }
        if !d.scale.contains(e.score) {
            report.scale_violations.push(format!("{} ({})", e.label(), e.score));
        }
    }
    for group in group_entries(d.entries.iter().enumerate()) {
        if group.len() < 2 {
            continue;
        }
        let label = group[0].1.label();
        if has_conflict(&d.scale, group.iter().map(|(_, e)| e.score)) {
            report.conflicts.push(label);
        } else {
            report.duplicates.push(label);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labmt_like(scores: &[(&str, f64)]) -> Dictionary {
        Dictionary::new(
            "toy",
            ScoreScale::continuous(1.0, 9.0, 5.0).unwrap(),
            scores.iter().map(|(w, s)| Entry::fixed(w, *s)).collect(),
        )
    }

    const HEADER_1_9: &str = "#name\ttoy\n#scale_kind\tcontinuous\n#min\t1\n#max\t9\n#neutral\t5\n";

    #[test]
    fn loads_single_entry() {
        let text = format!("{HEADER_1_9}laughter\t8.50\tfixed\n");
        let d = Dictionary::parse_tsv(&text, true).unwrap().value;
        assert_eq!(d.entries.len(), 1);
        assert_eq!(d.entries[0].surface, "laughter");
        assert_eq!(d.entries[0].score, 8.50);
    }

    #[test]
    fn empty_entry_section_is_an_error() {
        let err = Dictionary::parse_tsv(HEADER_1_9, false).unwrap_err();
        assert_eq!(err.to_string(), "empty dictionary");
    }

    #[test]
    fn conflicting_stem_is_dropped_with_warning() {
        let text = "#name\tmpqa\n#scale_kind\tbinary\nboast\t1\tstem\nboast\t-1\tstem\ngood\t1\tfixed\n";
        let out = Dictionary::parse_tsv(text, false).unwrap();
        assert_eq!(out.value.entries, vec![Entry::fixed("good", 1.0)]);
        assert_eq!(out.warnings.len(), 1);
        assert!(out.warnings[0].contains("boast*"));
    }

    #[test]
    fn strict_mode_rejects_duplicates() {
        let text = "#name\tmpqa\n#scale_kind\tbinary\nboast\t1\tstem\nboast\t-1\tstem\n";
        match Dictionary::parse_tsv(text, true) {
            Err(Error::DuplicateEntry { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected duplicate error, got {other:?}"),
        }
    }

    #[test]
    fn same_surface_different_kind_is_not_a_duplicate() {
        let text = "#name\tx\n#scale_kind\tbinary\nmiss\t-1\tfixed\nmiss\t-1\tstem\n";
        let d = Dictionary::parse_tsv(text, true).unwrap().value;
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn score_outside_scale_is_rejected() {
        let text = format!("{HEADER_1_9}good\t9.5\tfixed\n");
        assert!(matches!(
            Dictionary::parse_tsv(&text, false),
            Err(Error::ScoreOutOfScale { .. })
        ));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = format!("{HEADER_1_9}good\tseven\tfixed\n");
        let err = Dictionary::parse_tsv(&text, false).unwrap_err();
        assert!(err.to_string().starts_with("line 6:"), "{err}");
        let text = format!("{HEADER_1_9}good\t7\n");
        assert!(matches!(
            Dictionary::parse_tsv(&text, false),
            Err(Error::Parse { line: 6, .. })
        ));
    }

    #[test]
    fn surfaces_are_lowercased() {
        let text = format!("{HEADER_1_9}Laughter\t8.5\tfixed\n");
        let d = Dictionary::parse_tsv(&text, true).unwrap().value;
        assert_eq!(d.entries[0].surface, "laughter");
    }

    #[test]
    fn invalid_scales_are_rejected() {
        assert!(ScoreScale::continuous(1.0, 9.0, 9.0).is_err());
        let text = "#name\tx\n#scale_kind\tbinary\n#min\t-5\ngood\t1\tfixed\n";
        assert!(matches!(
            Dictionary::parse_tsv(text, true),
            Err(Error::InvalidScale(_))
        ));
    }

    #[test]
    fn stop_lens_filters_near_neutral() {
        let d = labmt_like(&[("meh", 5.5), ("laughter", 8.50), ("sad", 2.0)]);
        let lensed = apply_stop_lens(&d, 1.0).unwrap().value;
        let words: Vec<_> = lensed.entries.iter().map(|e| e.surface.as_str()).collect();
        assert_eq!(words, ["laughter", "sad"]);
        assert_eq!(lensed.delta_h(), 1.0);
        assert!(lensed.name.starts_with("toy"));
    }

    #[test]
    fn stop_lens_hand_example() {
        let d = labmt_like(&[("a", 4.2), ("b", 5.1), ("c", 6.3)]);
        let lensed = apply_stop_lens(&d, 0.5).unwrap().value;
        let scores: Vec<f64> = lensed.entries.iter().map(|e| e.score).collect();
        assert_eq!(scores, [4.2, 6.3]);
    }

    #[test]
    fn zero_lens_keeps_everything() {
        let d = labmt_like(&[("a", 4.2), ("b", 5.0), ("c", 6.3)]);
        assert_eq!(apply_stop_lens(&d, 0.0).unwrap().value.entries, d.entries);
    }

    #[test]
    fn negative_lens_is_an_error() {
        let d = labmt_like(&[("a", 4.2)]);
        assert!(apply_stop_lens(&d, -0.1).is_err());
        assert!(apply_stop_lens(&d, f64::NAN).is_err());
    }

    #[test]
    fn binary_dictionary_passes_through_lens() {
        let d = Dictionary::new("ol", ScoreScale::binary(), vec![Entry::fixed("good", 1.0)]);
        let out = apply_stop_lens(&d, 1.0).unwrap();
        assert_eq!(out.value, d);
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn lens_name_does_not_stack() {
        let d = labmt_like(&[("a", 2.0), ("b", 8.0)]);
        let once = apply_stop_lens(&d, 1.0).unwrap().value;
        let twice = apply_stop_lens(&once, 1.0).unwrap().value;
        assert_eq!(once, twice);
    }

    #[test]
    fn masking_fixed_words() {
        let d = Dictionary::new(
            "ol",
            ScoreScale::binary(),
            vec![
                Entry::fixed("vice", -1.0),
                Entry::fixed("miss", -1.0),
                Entry::fixed("good", 1.0),
            ],
        );
        let out = mask_words(&d, &["vice", "miss"]);
        assert_eq!(out.value.entries, vec![Entry::fixed("good", 1.0)]);
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn empty_mask_is_identity() {
        let d = labmt_like(&[("a", 2.0)]);
        let none: [&str; 0] = [];
        assert_eq!(mask_words(&d, &none).value, d);
    }

    #[test]
    fn starred_pattern_only_removes_the_stem() {
        let d = Dictionary::new(
            "mpqa",
            ScoreScale::binary(),
            vec![Entry::stem("mar", -1.0), Entry::fixed("margin", 1.0)],
        );
        let out = mask_words(&d, &["mar*"]);
        assert_eq!(out.value.entries, vec![Entry::fixed("margin", 1.0)]);
    }

    #[test]
    fn unmatched_mask_pattern_warns() {
        let d = labmt_like(&[("a", 2.0)]);
        let out = mask_words(&d, &["zzz", "a*"]);
        assert_eq!(out.value, d);
        assert_eq!(out.warnings.len(), 2);
    }

    #[test]
    fn validation_counts_polarity() {
        let d = labmt_like(&[("a", 8.5), ("b", 2.0), ("c", 5.0)]);
        let r = validate(&d);
        assert_eq!((r.positive, r.negative, r.neutral), (1, 1, 1));
        assert!(r.is_clean());
    }

    #[test]
    fn validation_reports_conflicts() {
        let d = Dictionary::new(
            "mpqa",
            ScoreScale::binary(),
            vec![Entry::fixed("deep", 1.0), Entry::fixed("deep", -1.0)],
        );
        let r = validate(&d);
        assert_eq!(r.conflicts, vec!["deep".to_string()]);
    }

    #[test]
    fn hashtag_surfaces_are_entries() {
        let text = format!("{HEADER_1_9}#comment line\n#music\t6.86\tfixed\nfun\t7\tfixed\n#fail\t2.62\tfixed\n");
        let d = Dictionary::parse_tsv(&text, true).unwrap().into_value();
        let words: Vec<&str> = d.entries.iter().map(|e| e.surface.as_str()).collect();
        assert_eq!(words, ["#music", "fun", "#fail"]);
        assert_eq!(Dictionary::parse_tsv(&d.to_tsv(), true).unwrap().into_value(), d);
    }

    #[test]
    fn raw_parse_keeps_conflicts_for_validation() {
        let text = "#name\tol\n#scale_kind\tbinary\ndeep\t1\tfixed\ndeep\t-1\tfixed\nodd\t3\tfixed\n";
        let r = validate(&Dictionary::parse_tsv_raw(text).unwrap());
        assert_eq!(r.conflicts, vec!["deep".to_string()]);
        assert_eq!(r.scale_violations.len(), 1);
    }

    #[test]
    fn validation_reports_scale_violations() {
        let d = labmt_like(&[("a", 9.5)]);
        assert_eq!(validate(&d).scale_violations.len(), 1);
    }

    #[test]
    fn serialization_round_trips() {
        let mut d = Dictionary::new(
            "mixed",
            ScoreScale::binary(),
            vec![Entry::stem("abandon", -1.0), Entry::fixed("good", 1.0), Entry::fixed("the", 0.0)],
        );
        d.metadata.insert("license".into(), "GNU GPL".into());
        let back = Dictionary::parse_tsv(&d.to_tsv(), true).unwrap().value;
        assert_eq!(back, d);
    }

    #[test]
    fn pattern_parsing() {
        assert_eq!(parse_pattern("Mar*"), Some(("mar".into(), MatchKind::Stem)));
        assert_eq!(parse_pattern(" vice "), Some(("vice".into(), MatchKind::Fixed)));
        assert_eq!(parse_pattern("*"), None);
        assert_eq!(parse_pattern(""), None);
    }

    #[test]
    fn mean_scored_score_skips_binary_neutrals() {
        let d = Dictionary::new(
            "b",
            ScoreScale::binary(),
            vec![Entry::fixed("a", 1.0), Entry::fixed("b", 0.0), Entry::fixed("c", -1.0), Entry::fixed("d", -1.0)],
        );
        assert_eq!(d.mean_scored_score(), Some(-1.0 / 3.0));
    }
}
