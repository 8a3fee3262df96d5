//! Structural parsing of completions and per-benchmark answer extraction.
//!
//! A completion is split into its reasoning block (`<think>...</think>`) and the
//! surrounding output. Final answers are pulled out of `\boxed{...}` expressions
//! with brace-depth tracking, falling back to benchmark-specific heuristics
//! (`####` delimiters, trailing numbers, standalone option letters, boolean
//! keywords) when no usable boxed answer exists.

use std::fmt;
use std::ops::Range;

use once_cell::sync::Lazy;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const THINK_OPEN: &str = "<think>";
pub const THINK_CLOSE: &str = "</think>";
pub const BOXED_OPEN: &str = "\\boxed{";

// optional sign, digits, then any number of separator+digits groups
static NUMBER_RE: Lazy<Regex> = Lazy::new(|| Regex::new(r"[+-]?\d+(?:[.,]\d+)*").unwrap());

/// Role of a byte range inside the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Marker,
    Think,
    Output,
}

/// A completion decomposed into reasoning and output segments.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ThinkSplit {
    pub think_text: String,
    pub output_text: String,
    pub has_open_tag: bool,
    pub has_closed_block: bool,
    pub think_ends_before_answer: bool,
    /// Contiguous cover of the source text, in order.
    pub segments: Vec<(SegmentKind, Range<usize>)>,
}

impl ThinkSplit {
    /// Rebuilds the original text from the recorded segments.
    pub fn reassemble(&self, source: &str) -> String {
        self.segments
            .iter()
            .map(|(_, r)| &source[r.clone()])
            .collect()
    }
}

/// One `\boxed{...}` expression. Offsets are byte offsets into the source and
/// cover the whole expression, command through closing brace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxedSpan {
    pub content: String,
    pub start_offset: usize,
    pub end_offset: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtractionStage {
    BoxedLast,
    HashDelimiter,
    LastNumber,
    BoxedLetter,
    StandaloneLetter,
    BoolKeyword,
    NotFound,
}

impl fmt::Display for ExtractionStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractedAnswer {
    pub value: String,
    pub stage: ExtractionStage,
}

impl ExtractedAnswer {
    pub fn not_found() -> Self {
        Self {
            value: String::new(),
            stage: ExtractionStage::NotFound,
        }
    }

    fn found(value: impl Into<String>, stage: ExtractionStage) -> Self {
        let value = value.into();
        debug_assert!(!value.is_empty());
        Self { value, stage }
    }

    pub fn is_found(&self) -> bool {
        self.stage != ExtractionStage::NotFound
    }
}

/// Benchmark families with distinct extraction procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Benchmark {
    /// Grade-school math: boxed, then `####`, then last number.
    Mgsm,
    /// Competition math: last boxed expression only.
    Math100,
    /// Four-option multiple choice (A-D).
    Mc4,
    /// Two-option multiple choice (A-B).
    Mc2,
    /// True/False questions.
    Bool,
}

impl Benchmark {
    pub const ALL: [Benchmark; 5] = [
        Benchmark::Mgsm,
        Benchmark::Math100,
        Benchmark::Mc4,
        Benchmark::Mc2,
        Benchmark::Bool,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Benchmark::Mgsm => "mgsm",
            Benchmark::Math100 => "math100",
            Benchmark::Mc4 => "mc4",
            Benchmark::Mc2 => "mc2",
            Benchmark::Bool => "bool",
        }
    }

    /// Whether the extracted value should be numerically normalized.
    pub fn is_numeric(self) -> bool {
        matches!(self, Benchmark::Mgsm | Benchmark::Math100)
    }

    pub fn extract(self, text: &str) -> ExtractedAnswer {
        match self {
            Benchmark::Mgsm => extract_mgsm(text),
            Benchmark::Math100 => extract_last_boxed(text),
            Benchmark::Mc4 => extract_mc_letter(text, 4).expect("4 is a valid option count"),
            Benchmark::Mc2 => extract_mc_letter(text, 2).expect("2 is a valid option count"),
            Benchmark::Bool => extract_bool(text),
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::UnknownBenchmark(s.to_string()))
    }
}

/// Splits a completion into reasoning and output text.
///
/// Every closed `<think>...</think>` block contributes to `think_text` (joined by
/// a newline); everything else, including an unclosed trailing block, is output.
/// The structural flags describe the first block only.
pub fn split_think(text: &str) -> ThinkSplit {
    let mut split = ThinkSplit::default();
    let mut think_parts: Vec<&str> = Vec::new();
    let mut first_block_end: Option<usize> = None;
    let mut pos = 0;

    while pos < text.len() {
        let Some(rel_open) = text[pos..].find(THINK_OPEN) else {
            push_segment(&mut split.segments, SegmentKind::Output, pos..text.len());
            break;
        };
        let open = pos + rel_open;
        push_segment(&mut split.segments, SegmentKind::Output, pos..open);
        let body_start = open + THINK_OPEN.len();
        push_segment(&mut split.segments, SegmentKind::Marker, open..body_start);

        let is_first = !split.has_open_tag;
        split.has_open_tag = true;

        match text[body_start..].find(THINK_CLOSE) {
            Some(rel_close) => {
                let close = body_start + rel_close;
                let end = close + THINK_CLOSE.len();
                push_segment(&mut split.segments, SegmentKind::Think, body_start..close);
                push_segment(&mut split.segments, SegmentKind::Marker, close..end);
                think_parts.push(&text[body_start..close]);
                if is_first {
                    split.has_closed_block = true;
                    first_block_end = Some(end);
                }
                pos = end;
            }
            None => {
                // unclosed: the remainder is plain output
                push_segment(&mut split.segments, SegmentKind::Output, body_start..text.len());
                pos = text.len();
            }
        }
    }

    split.think_text = think_parts.join("\n");
    split.output_text = split
        .segments
        .iter()
        .filter(|(kind, _)| *kind == SegmentKind::Output)
        .map(|(_, r)| &text[r.clone()])
        .collect();

    if let Some(block_end) = first_block_end {
        split.think_ends_before_answer = extract_boxed_all(text)
            .first()
            .is_some_and(|span| block_end <= span.start_offset);
    }
    split
}

fn push_segment(segments: &mut Vec<(SegmentKind, Range<usize>)>, kind: SegmentKind, range: Range<usize>) {
    if !range.is_empty() {
        segments.push((kind, range));
    }
}

/// Returns every balanced `\boxed{...}` expression in document order.
///
/// Nested braces stay inside the content. An opening that never closes is
/// skipped and scanning resumes right after its `\boxed{` command, so complete
/// expressions nested inside a truncated one are still found.
pub fn extract_boxed_all(text: &str) -> Vec<BoxedSpan> {
    let bytes = text.as_bytes();
    let mut spans = Vec::new();
    let mut pos = 0;

    while let Some(rel) = text[pos..].find(BOXED_OPEN) {
        let start = pos + rel;
        let content_start = start + BOXED_OPEN.len();
        match matching_brace(bytes, content_start) {
            Some(close) => {
                spans.push(BoxedSpan {
                    content: text[content_start..close].to_string(),
                    start_offset: start,
                    end_offset: close + 1,
                });
                pos = close + 1;
            }
            None => pos = content_start,
        }
    }
    spans
}

/// Index of the `}` closing a group whose body starts at `from` (depth 1).
fn matching_brace(bytes: &[u8], from: usize) -> Option<usize> {
    let mut depth = 1usize;
    for (i, &b) in bytes.iter().enumerate().skip(from) {
        match b {
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Removes every boxed expression, keeping the remaining text in order.
pub fn strip_boxed(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pos = 0;
    for span in extract_boxed_all(text) {
        out.push_str(&text[pos..span.start_offset]);
        pos = span.end_offset;
    }
    out.push_str(&text[pos..]);
    out
}

/// Content of the last boxed expression with non-blank content.
pub fn extract_last_boxed(text: &str) -> ExtractedAnswer {
    extract_boxed_all(text)
        .into_iter()
        .rev()
        .map(|span| span.content.trim().to_string())
        .find(|c| !c.is_empty())
        .map(|c| ExtractedAnswer::found(c, ExtractionStage::BoxedLast))
        .unwrap_or_else(ExtractedAnswer::not_found)
}

/// All number tokens in `text`. A sign glued to a preceding letter or digit
/// (`x-3`, `2-1`) is treated as an operator, not part of the number.
pub fn find_numbers(text: &str) -> impl Iterator<Item = &str> {
    NUMBER_RE.find_iter(text).map(move |m| {
        let s = m.as_str();
        if s.starts_with(['+', '-']) {
            let glued = text[..m.start()]
                .chars()
                .next_back()
                .is_some_and(|c| c.is_alphanumeric());
            if glued {
                return &s[1..];
            }
        }
        s
    })
}

/// Three-stage fallback used for grade-school math answers.
pub fn extract_mgsm(text: &str) -> ExtractedAnswer {
    let boxed = extract_last_boxed(text);
    if boxed.is_found() {
        return boxed;
    }
    if let Some(delim) = text.find("####") {
        if let Some(num) = find_numbers(&text[delim + 4..]).next() {
            return ExtractedAnswer::found(num, ExtractionStage::HashDelimiter);
        }
    }
    match find_numbers(text).last() {
        Some(num) => ExtractedAnswer::found(num, ExtractionStage::LastNumber),
        None => ExtractedAnswer::not_found(),
    }
}

/// Multiple-choice letter extraction for 2- or 4-option questions.
pub fn extract_mc_letter(text: &str, option_count: usize) -> Result<ExtractedAnswer> {
    if option_count != 2 && option_count != 4 {
        return Err(Error::InvalidOptionCount(option_count));
    }
    let last = (b'A' + option_count as u8 - 1) as char;
    let in_range = |c: char| ('A'..=last).contains(&c);

    let boxed = extract_boxed_all(text).into_iter().rev().find_map(|span| {
        let letter = single_letter(&span.content)?.to_ascii_uppercase();
        in_range(letter).then_some(letter)
    });
    if let Some(letter) = boxed {
        return Ok(ExtractedAnswer::found(letter, ExtractionStage::BoxedLetter));
    }

    let standalone = standalone_tokens(text, |tok| {
        let mut chars = tok.chars();
        matches!((chars.next(), chars.next()), (Some(c), None) if in_range(c))
    })
    .last();
    Ok(match standalone {
        Some(tok) => ExtractedAnswer::found(tok, ExtractionStage::StandaloneLetter),
        None => ExtractedAnswer::not_found(),
    })
}

/// Unwraps `C`, `(C)`, `\text{C}` and `\textbf{C}` to the letter.
fn single_letter(content: &str) -> Option<char> {
    let mut s = content.trim();
    for wrapper in ["\\text{", "\\textbf{", "\\mathrm{"] {
        if let Some(inner) = s.strip_prefix(wrapper).and_then(|r| r.strip_suffix('}')) {
            s = inner.trim();
        }
    }
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        s = inner.trim();
    }
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if c.is_ascii_alphabetic() => Some(c),
        _ => None,
    }
}

/// Maximal alphanumeric runs of `text` accepted by `keep`.
fn standalone_tokens<'a>(
    text: &'a str,
    keep: impl Fn(&str) -> bool + 'a,
) -> impl Iterator<Item = &'a str> + 'a {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(move |tok| !tok.is_empty() && keep(tok))
}

/// True/False extraction: boxed keyword first, then the last standalone keyword.
pub fn extract_bool(text: &str) -> ExtractedAnswer {
    let boxed = extract_boxed_all(text)
        .into_iter()
        .rev()
        .find_map(|span| bool_keyword(span.content.trim()));
    let found = boxed.or_else(|| standalone_tokens(text, |t| bool_keyword(t).is_some()).last().and_then(bool_keyword));
    match found {
        Some(kw) => ExtractedAnswer::found(kw, ExtractionStage::BoolKeyword),
        None => ExtractedAnswer::not_found(),
    }
}

fn bool_keyword(s: &str) -> Option<&'static str> {
    let s = s
        .strip_prefix("\\text{")
        .and_then(|r| r.strip_suffix('}'))
        .unwrap_or(s)
        .trim();
    if s.eq_ignore_ascii_case("true") {
        Some("True")
    } else if s.eq_ignore_ascii_case("false") {
        Some("False")
    } else {
        None
    }
}
