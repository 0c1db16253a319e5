//! Tokenization, dual-trie dictionary matching, word counts and coverage.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::dictionary::{Dictionary, Entry, MatchKind};
use crate::error::{Error, Result};

/// The token pattern, kept as a data file so it can be diffed and frozen.
pub const TOKEN_PATTERN: &str = include_str!("../data/tokenizer.re");

const PUNCTUATION_TO_REPLACE: [&str; 3] = ["---", "--", "''"];

pub const DEFAULT_RANK_WINDOW: usize = 1000;

fn token_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(TOKEN_PATTERN.trim_end()).expect("token pattern compiles"))
}

/// Splits raw text into lowercase tokens, in input order.
pub fn tokenize(raw_text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for_each_token(raw_text, |t| out.push(t.to_string()));
    out
}

/// Streams tokens to `f` without collecting them.
pub fn for_each_token(raw_text: &str, mut f: impl FnMut(&str)) {
    let mut text = std::borrow::Cow::Borrowed(raw_text);
    for p in PUNCTUATION_TO_REPLACE {
        if text.contains(p) {
            text = std::borrow::Cow::Owned(text.replace(p, " "));
        }
    }
    for m in token_regex().find_iter(&text) {
        let s = m.as_str();
        if s.bytes().any(|b| b.is_ascii_uppercase()) || !s.is_ascii() {
            f(&s.to_lowercase());
        } else {
            f(s);
        }
    }
}

/// Byte trie over an arena of nodes; edges are kept sorted for binary search.
#[derive(Debug, Clone, Default)]
struct Trie {
    nodes: Vec<Node>,
    len: usize,
}

#[derive(Debug, Clone, Default)]
struct Node {
    edges: Vec<(u8, u32)>,
    value: Option<u32>,
}

impl Trie {
    fn new() -> Self {
        Trie {
            nodes: vec![Node::default()],
            len: 0,
        }
    }

    fn child(&self, node: usize, byte: u8) -> Option<usize> {
        let edges = &self.nodes[node].edges;
        edges
            .binary_search_by_key(&byte, |&(b, _)| b)
            .ok()
            .map(|i| edges[i].1 as usize)
    }

    /// Inserts `key`; an existing value is kept.
    fn insert(&mut self, key: &str, value: u32) {
        let mut node = 0;
        for &b in key.as_bytes() {
            node = match self.nodes[node].edges.binary_search_by_key(&b, |&(e, _)| e) {
                Ok(i) => self.nodes[node].edges[i].1 as usize,
                Err(i) => {
                    let id = self.nodes.len();
                    self.nodes.push(Node::default());
                    self.nodes[node].edges.insert(i, (b, id as u32));
                    id
                }
            };
        }
        if self.nodes[node].value.is_none() {
            self.nodes[node].value = Some(value);
            self.len += 1;
        }
    }

    fn get(&self, key: &str) -> Option<u32> {
        let mut node = 0;
        for &b in key.as_bytes() {
            node = self.child(node, b)?;
        }
        self.nodes[node].value
    }

    /// Value of the longest key that is a prefix of `text`.
    fn longest_prefix(&self, text: &str) -> Option<u32> {
        let mut node = 0;
        let mut best = self.nodes[0].value;
        for &b in text.as_bytes() {
            match self.child(node, b) {
                Some(next) => {
                    node = next;
                    if let Some(v) = self.nodes[node].value {
                        best = Some(v);
                    }
                }
                None => break,
            }
        }
        best
    }
}

/// Immutable lookup structure: exact matches against fixed words first, then
/// the longest matching stem.
#[derive(Debug, Clone)]
pub struct MatchIndex {
    dictionary: Dictionary,
    fixed: Trie,
    stems: Trie,
}

impl MatchIndex {
    pub fn new(d: &Dictionary) -> Self {
        let mut fixed = Trie::new();
        let mut stems = Trie::new();
        for (i, e) in d.entries.iter().enumerate() {
            match e.kind {
                MatchKind::Fixed => fixed.insert(&e.surface, i as u32),
                MatchKind::Stem => stems.insert(&e.surface, i as u32),
            }
        }
        MatchIndex {
            dictionary: d.clone(),
            fixed,
            stems,
        }
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dictionary
    }

    pub fn source(&self) -> &str {
        &self.dictionary.name
    }

    pub fn fixed_len(&self) -> usize {
        self.fixed.len
    }

    pub fn stem_len(&self) -> usize {
        self.stems.len
    }

    pub fn entry(&self, i: usize) -> &Entry {
        &self.dictionary.entries[i]
    }

    /// Position of the matching entry in the dictionary.
    pub fn match_position(&self, token: &str) -> Option<usize> {
        self.fixed
            .get(token)
            .or_else(|| self.stems.longest_prefix(token))
            .map(|i| i as usize)
    }

    pub fn match_token(&self, token: &str) -> Option<&Entry> {
        self.match_position(token).map(|i| self.entry(i))
    }

    /// Like [`match_token`](Self::match_token) but only for entries that take
    /// part in scoring.
    pub fn match_scored(&self, token: &str) -> Option<&Entry> {
        self.match_token(token)
            .filter(|e| self.dictionary.is_scored(e.score))
    }
}

pub fn build_index(d: &Dictionary) -> MatchIndex {
    MatchIndex::new(d)
}

pub fn match_token<'a>(ix: &'a MatchIndex, token: &str) -> Option<&'a Entry> {
    ix.match_token(token)
}

/// Reference matcher for testing and benchmarking: a hash lookup for fixed
/// words, then one anchored regular expression per stem tried in turn,
/// keeping the longest hit. Same answers as [`MatchIndex`], much slower.
#[derive(Debug, Clone)]
pub struct RegexMatcher {
    fixed: std::collections::HashMap<String, usize>,
    stems: Vec<(Regex, usize, usize)>,
}

impl RegexMatcher {
    pub fn new(d: &Dictionary) -> Self {
        let mut fixed = std::collections::HashMap::new();
        let mut stems = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (i, e) in d.entries.iter().enumerate() {
            match e.kind {
                MatchKind::Fixed => {
                    fixed.entry(e.surface.clone()).or_insert(i);
                }
                MatchKind::Stem => {
                    if seen.insert(e.surface.as_str()) {
                        let re = Regex::new(&format!("^{}", regex::escape(&e.surface)))
                            .expect("escaped literal compiles");
                        stems.push((re, e.surface.len(), i));
                    }
                }
            }
        }
        RegexMatcher { fixed, stems }
    }

    pub fn match_position(&self, token: &str) -> Option<usize> {
        if let Some(&i) = self.fixed.get(token) {
            return Some(i);
        }
        let mut best: Option<(usize, usize)> = None;
        for (re, len, i) in &self.stems {
            if re.is_match(token) && best.map_or(true, |(l, _)| *len > l) {
                best = Some((*len, *i));
            }
        }
        best.map(|(_, i)| i)
    }
}

/// Word counts of a text or corpus. Ordered storage keeps every downstream
/// float reduction in a fixed order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreqVector {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl FreqVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_text(raw_text: &str) -> Self {
        let mut fv = FreqVector::new();
        for_each_token(raw_text, |t| fv.add(t, 1));
        fv
    }

    pub fn add(&mut self, word: &str, count: u64) {
        if count == 0 {
            return;
        }
        match self.counts.get_mut(word) {
            Some(c) => *c += count,
            None => {
                self.counts.insert(word.to_string(), count);
            }
        }
        self.total += count;
    }

    pub fn merge(&mut self, other: &FreqVector) {
        for (w, &c) in &other.counts {
            self.add(w, c);
        }
    }

    pub fn merged(mut self, other: &FreqVector) -> FreqVector {
        self.merge(other);
        self
    }

    pub fn scaled(&self, k: u64) -> FreqVector {
        FreqVector {
            counts: self
                .counts
                .iter()
                .filter(|_| k > 0)
                .map(|(w, c)| (w.clone(), c * k))
                .collect(),
            total: self.total * k,
        }
    }

    pub fn get(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct words.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> + '_ {
        self.counts.iter().map(|(w, &c)| (w.as_str(), c))
    }

    pub fn remove(&mut self, word: &str) -> u64 {
        let c = self.counts.remove(word).unwrap_or(0);
        self.total -= c;
        c
    }

    /// Words by descending count, ties lexicographic.
    pub fn ranked(&self) -> Vec<(&str, u64)> {
        let mut v: Vec<(&str, u64)> = self.iter().collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        v
    }

    /// `word<TAB>count` lines in rank order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (w, c) in self.ranked() {
            let _ = writeln!(out, "{w}\t{c}");
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<FreqVector> {
        let mut fv = FreqVector::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (w, c) = line.split_once('\t').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected `word<TAB>count`".into(),
            })?;
            let c: u64 = c.trim().parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("bad count `{}`", c.trim()),
            })?;
            fv.add(w, c);
        }
        Ok(fv)
    }
}

impl<S: AsRef<str>> FromIterator<S> for FreqVector {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut fv = FreqVector::new();
        for t in iter {
            fv.add(t.as_ref(), 1);
        }
        fv
    }
}

pub fn count_frequencies<S: AsRef<str>>(tokens: &[S]) -> FreqVector {
    tokens.iter().map(|t| t.as_ref()).collect()
}

/// Per-document counts in parallel, then one merged vector. Integer sums make
/// the result independent of scheduling.
pub fn count_corpus<S: AsRef<str> + Sync>(texts: &[S]) -> FreqVector {
    texts
        .par_iter()
        .map(|t| FreqVector::from_text(t.as_ref()))
        .reduce(FreqVector::new, |a, b| {
            if a.len() >= b.len() {
                a.merged(&b)
            } else {
                b.merged(&a)
            }
        })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub type_coverage: f64,
    pub token_coverage: f64,
    /// `(rank, fraction of matched words among the trailing window of ranks)`.
    pub by_rank: Vec<(usize, f64)>,
    /// `(rank, matched token mass of ranks 1..=rank over total mass)`.
    pub cumulative: Vec<(usize, f64)>,
    pub window: usize,
}

pub fn coverage(ix: &MatchIndex, fv: &FreqVector) -> CoverageReport {
    coverage_with_window(ix, fv, DEFAULT_RANK_WINDOW)
}

pub fn coverage_with_window(ix: &MatchIndex, fv: &FreqVector, window: usize) -> CoverageReport {
    let window = window.max(1);
    if fv.is_empty() {
        return CoverageReport {
            type_coverage: 0.0,
            token_coverage: 0.0,
            by_rank: Vec::new(),
            cumulative: Vec::new(),
            window,
        };
    }
    let ranked = fv.ranked();
    let hits: Vec<bool> = ranked
        .iter()
        .map(|(w, _)| ix.match_position(w).is_some())
        .collect();

    let total = fv.total() as f64;
    let mut by_rank = Vec::with_capacity(ranked.len());
    let mut cumulative = Vec::with_capacity(ranked.len());
    let mut in_window = 0usize;
    let mut matched_mass = 0u64;
    let mut matched_types = 0usize;
    for (i, ((_, c), &hit)) in ranked.iter().zip(&hits).enumerate() {
        if hit {
            in_window += 1;
            matched_types += 1;
            matched_mass += c;
        }
        if i >= window && hits[i - window] {
            in_window -= 1;
        }
        let span = (i + 1).min(window);
        by_rank.push((i + 1, in_window as f64 / span as f64));
        cumulative.push((i + 1, matched_mass as f64 / total));
    }
    CoverageReport {
        type_coverage: matched_types as f64 / ranked.len() as f64,
        token_coverage: matched_mass as f64 / total,
        by_rank,
        cumulative,
        window,
    }
}
