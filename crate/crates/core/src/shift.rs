//! Word shifts: per-word decomposition of the score difference between a
//! reference and a comparison text, plus export and SVG rendering.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textproc::{FreqVector, MatchIndex};

/// Score differences at or below this are treated as zero and the shift is
/// reported unnormalized.
pub const SHIFT_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SentimentSign {
    MorePositive,
    MoreNegative,
}

impl SentimentSign {
    pub fn symbol(self) -> char {
        match self {
            SentimentSign::MorePositive => '+',
            SentimentSign::MoreNegative => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreqDirection {
    Up,
    Down,
}

impl FreqDirection {
    pub fn symbol(self) -> char {
        match self {
            FreqDirection::Up => '↑',
            FreqDirection::Down => '↓',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftItem {
    /// Entry label; stem matches pool under `stem*`.
    pub word: String,
    pub contribution: f64,
    pub sentiment_sign: SentimentSign,
    pub freq_direction: FreqDirection,
    #[serde(skip)]
    pub score: f64,
    #[serde(skip)]
    pub p_ref: f64,
    #[serde(skip)]
    pub p_comp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftResult {
    pub dictionary: String,
    pub delta_h: f64,
    pub ref_score: f64,
    pub comp_score: f64,
    pub normalized: bool,
    pub items: Vec<ShiftItem>,
}

impl ShiftResult {
    pub fn total(&self) -> f64 {
        self.items.iter().map(|i| i.contribution).sum()
    }
}

/// Relative frequencies of scored entries, keyed by entry position.
fn distribution(ix: &MatchIndex, fv: &FreqVector) -> (BTreeMap<usize, u64>, u64) {
    let mut counts = BTreeMap::new();
    let mut mass = 0;
    for (w, c) in fv.iter() {
        if let Some(i) = ix.match_position(w) {
            if ix.dictionary().is_scored(ix.entry(i).score) {
                *counts.entry(i).or_insert(0) += c;
                mass += c;
            }
        }
    }
    (counts, mass)
}

fn compare_items(a: &ShiftItem, b: &ShiftItem) -> Ordering {
    b.contribution
        .abs()
        .total_cmp(&a.contribution.abs())
        .then_with(|| a.word.cmp(&b.word))
}

pub fn word_shift(ix: &MatchIndex, ref_fv: &FreqVector, comp_fv: &FreqVector) -> Result<ShiftResult> {
    let (ref_counts, ref_mass) = distribution(ix, ref_fv);
    let (comp_counts, comp_mass) = distribution(ix, comp_fv);
    if ref_mass == 0 {
        return Err(Error::NoSignal("reference text has no scored words".into()));
    }
    if comp_mass == 0 {
        return Err(Error::NoSignal("comparison text has no scored words".into()));
    }

    let mut union: Vec<usize> = ref_counts.keys().chain(comp_counts.keys()).copied().collect();
    union.sort_unstable();
    union.dedup();

    let p = |counts: &BTreeMap<usize, u64>, mass: u64, i: usize| {
        counts.get(&i).copied().unwrap_or(0) as f64 / mass as f64
    };
    let h = |i: usize| ix.entry(i).score;
    let h_ref: f64 = union.iter().map(|&i| h(i) * p(&ref_counts, ref_mass, i)).sum();
    let h_comp: f64 = union.iter().map(|&i| h(i) * p(&comp_counts, comp_mass, i)).sum();

    let mut items: Vec<ShiftItem> = union
        .iter()
        .map(|&i| {
            let p_ref = p(&ref_counts, ref_mass, i);
            let p_comp = p(&comp_counts, comp_mass, i);
            ShiftItem {
                word: ix.entry(i).label(),
                contribution: (h(i) - h_ref) * (p_comp - p_ref),
                sentiment_sign: if h(i) > h_ref {
                    SentimentSign::MorePositive
                } else {
                    SentimentSign::MoreNegative
                },
                freq_direction: if p_comp > p_ref {
                    FreqDirection::Up
                } else {
                    FreqDirection::Down
                },
                score: h(i),
                p_ref,
                p_comp,
            }
        })
        .collect();

    let normalized = (h_comp - h_ref).abs() > SHIFT_EPSILON;
    if normalized {
        // The unnormalized terms sum to h_comp - h_ref exactly in real
        // arithmetic; dividing by their own float sum keeps the percentages
        // closing on 100 despite rounding in the two averages.
        let diff: f64 = items.iter().map(|it| it.contribution).sum();
        for it in &mut items {
            it.contribution = 100.0 * it.contribution / diff;
        }
    }
    items.sort_by(compare_items);

    Ok(ShiftResult {
        dictionary: ix.source().to_string(),
        delta_h: ix.dictionary().delta_h(),
        ref_score: h_ref,
        comp_score: h_comp,
        normalized,
        items,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftDocument {
    pub dictionary: String,
    pub delta_h: f64,
    pub ref_score: f64,
    pub comp_score: f64,
    pub normalized: bool,
    pub items: Vec<ShiftItem>,
}

pub fn export_shift(r: &ShiftResult, top_n: usize) -> ShiftDocument {
    ShiftDocument {
        dictionary: r.dictionary.clone(),
        delta_h: r.delta_h,
        ref_score: r.ref_score,
        comp_score: r.comp_score,
        normalized: r.normalized,
        items: r.items.iter().take(top_n.max(1)).cloned().collect(),
    }
}

impl ShiftDocument {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<ShiftDocument> {
        Ok(serde_json::from_str(text)?)
    }
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

const SVG_WIDTH: f64 = 640.0;
const ROW_HEIGHT: f64 = 18.0;
const HEADER: f64 = 56.0;
const HALF_SPAN: f64 = 220.0;

fn bar_color(item: &ShiftItem) -> &'static str {
    match (item.sentiment_sign, item.freq_direction) {
        (SentimentSign::MorePositive, FreqDirection::Up) => "#f0b400",
        (SentimentSign::MorePositive, FreqDirection::Down) => "#f7dc80",
        (SentimentSign::MoreNegative, FreqDirection::Up) => "#3465a4",
        (SentimentSign::MoreNegative, FreqDirection::Down) => "#9db9dd",
    }
}

/// Horizontal bar chart of the top `top_n` items, ranked top to bottom.
/// Output depends only on the input values.
pub fn render_shift_svg(r: &ShiftResult, top_n: usize) -> String {
    let items: Vec<&ShiftItem> = r.items.iter().take(top_n.max(1)).collect();
    let height = HEADER + ROW_HEIGHT * items.len() as f64 + 24.0;
    let center = SVG_WIDTH / 2.0;
    let max_abs = items
        .iter()
        .map(|i| i.contribution.abs())
        .fold(0.0_f64, f64::max);
    let scale = if max_abs > 0.0 { HALF_SPAN / max_abs } else { 0.0 };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{height}" viewBox="0 0 {SVG_WIDTH} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{SVG_WIDTH}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text class="title" x="{center}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
        xml_escape(&r.dictionary)
    );
    let unit = if r.normalized { "percent of shift" } else { "unnormalized" };
    let _ = writeln!(
        s,
        r#"<text class="scores" x="{center}" y="38" text-anchor="middle">h_ref = {:.4}   h_comp = {:.4}   ({unit})</text>"#,
        r.ref_score, r.comp_score
    );
    let _ = writeln!(
        s,
        r#"<line x1="{center}" y1="{HEADER}" x2="{center}" y2="{}" stroke="black" stroke-width="1"/>"#,
        height - 24.0
    );
    for (rank, item) in items.iter().enumerate() {
        let y = HEADER + ROW_HEIGHT * rank as f64;
        let w = (item.contribution.abs() * scale * 100.0).round() / 100.0;
        let x = if item.contribution >= 0.0 { center } else { center - w };
        let _ = writeln!(
            s,
            r#"<rect class="bar" x="{x:.2}" y="{:.2}" width="{w:.2}" height="{:.2}" fill="{}"/>"#,
            y + 2.0,
            ROW_HEIGHT - 4.0,
            bar_color(item)
        );
        let label = format!(
            "{}. {} ({}{}) {:.3}",
            rank + 1,
            xml_escape(&item.word),
            item.sentiment_sign.symbol(),
            item.freq_direction.symbol(),
            item.contribution
        );
        let (lx, anchor) = if item.contribution >= 0.0 {
            (x + w + 4.0, "start")
        } else {
            (x - 4.0, "end")
        };
        let _ = writeln!(
            s,
            r#"<text class="label" x="{lx:.2}" y="{:.2}" text-anchor="{anchor}">{label}</text>"#,
            y + ROW_HEIGHT - 5.0
        );
    }
    s.push_str("</svg>\n");
    s
}
