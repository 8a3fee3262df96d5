//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

pub const BOXED: &str = "\\boxed{";

/// Index one past the `}` closing the group that opens at `s[i] == '{'`.
fn group_end(s: &[u8], i: usize) -> Option<usize> {
    let mut j = i + 1;
    loop {
        match s.get(j)? {
            b'}' => return Some(j + 1),
            b'{' => j = group_end(s, j)?,
            _ => j += 1,
        }
    }
}

/// Recursive-descent reference for boxed extraction: `(content, start, end)`.
/// An opening that cannot be parsed is passed over one byte at a time.
pub fn boxed_reference(text: &str) -> Vec<(String, usize, usize)> {
    let s = text.as_bytes();
    let open = BOXED.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < s.len() {
        if s[i..].starts_with(open) {
            if let Some(end) = group_end(s, i + open.len() - 1) {
                out.push((text[i + open.len()..end - 1].to_string(), i, end));
                i = end;
                continue;
            }
        }
        i += 1;
    }
    out
}

/// Random string over the boxed-oracle alphabet, biased toward whole commands.
pub fn boxed_alphabet_string(rng: &mut impl Rng, max_len: usize) -> String {
    const PIECES: [&str; 16] = [
        BOXED, "{", "}", "a", "\\", "b", "o", "x", "e", "d", "0", "1", "7", "{", "}", BOXED,
    ];
    let target = rng.gen_range(0..=max_len);
    let mut s = String::new();
    while s.len() < target {
        s.push_str(PIECES[rng.gen_range(0..PIECES.len())]);
    }
    s.truncate(target);
    s
}

/// Random string of ASCII and Latin-1 characters.
pub fn latin1_string(rng: &mut impl Rng, max_chars: usize) -> String {
    let n = rng.gen_range(0..=max_chars);
    (0..n)
        .map(|_| {
            let code = if rng.gen_bool(0.7) {
                rng.gen_range(0x20u32..0x7f)
            } else if rng.gen_bool(0.1) {
                [0x09, 0x0a, 0x0d][rng.gen_range(0..3)]
            } else {
                rng.gen_range(0xa0u32..=0xff)
            };
            char::from_u32(code).unwrap()
        })
        .collect()
}

/// Random completion-like text built from structural pieces, words and noise.
pub fn completion_like(rng: &mut impl Rng, max_pieces: usize) -> String {
    const PIECES: [&str; 30] = [
        "<think>", "</think>", "\\boxed{", "}", "{", "####", " 42", " 3,5", " 1.234,56", " -7",
        " ¿Espera,", " ¿pero", " ¿Cuánto es?", "??", " ja", " ja ja", " aaaaa", " the", " answer",
        " der", " und", " el", " resultado", " la", " réponse", " \\frac{1}{2}", " True", " B",
        "\n", " ",
    ];
    let n = rng.gen_range(0..=max_pieces);
    let mut s = String::new();
    for _ in 0..n {
        if rng.gen_bool(0.1) {
            s.push_str(&latin1_string(rng, 6));
        } else {
            s.push_str(PIECES[rng.gen_range(0..PIECES.len())]);
        }
    }
    s
}

/// True when `unit` equals no proper rotation of itself, i.e. it is not a
/// power of a shorter unit.
fn primitive(unit: &[u32]) -> bool {
    let n = unit.len();
    (1..n).all(|r| (0..n).any(|j| unit[j] != unit[(j + r) % n]))
}

/// Window-scanner reference for loop redundancy: for each n from `ngram_max`
/// down to 1, slides over every start, measures the run of identical adjacent
/// windows, and records the positions of every copy after the first. The
/// result is the number of distinct recorded positions.
pub fn loop_reference(ids: &[u32], ngram_max: usize) -> usize {
    let t = ids.len();
    let mut counted = std::collections::BTreeSet::new();
    for n in (1..=ngram_max).rev() {
        let mut i = 0;
        while i + n <= t {
            if !primitive(&ids[i..i + n]) {
                i += 1;
                continue;
            }
            let mut reps = 1;
            while i + (reps + 1) * n <= t && ids[i + reps * n..i + (reps + 1) * n] == ids[i..i + n] {
                reps += 1;
            }
            if reps > 1 {
                counted.extend(i + n..i + reps * n);
                i += reps * n;
            } else {
                i += 1;
            }
        }
    }
    counted.len()
}

/// Interns whitespace tokens in first-seen order.
pub fn intern(text: &str) -> Vec<u32> {
    let mut seen: HashMap<&str, u32> = HashMap::new();
    text.split_whitespace()
        .map(|w| {
            let next = seen.len() as u32;
            *seen.entry(w).or_insert(next)
        })
        .collect()
}

/// Reference flood term: `T * (f - threshold)^2` for repeated token types above threshold.
pub fn flood_reference(ids: &[u32], threshold: f64) -> f64 {
    let mut counts: HashMap<u32, usize> = HashMap::new();
    for &id in ids {
        *counts.entry(id).or_default() += 1;
    }
    let t = ids.len() as f64;
    let mut keys: Vec<_> = counts.into_iter().collect();
    keys.sort();
    keys.into_iter()
        .filter(|&(_, c)| c >= 2)
        .map(|(_, c)| c as f64 / t)
        .filter(|&f| f > threshold)
        .map(|f| t * (f - threshold).powi(2))
        .sum()
}

/// Reference character-run term over non-whitespace runs of length >= `min`.
pub fn char_run_reference(text: &str, min: usize) -> usize {
    let chars: Vec<char> = text.chars().collect();
    let mut total = 0;
    let mut i = 0;
    while i < chars.len() {
        let mut j = i;
        while j < chars.len() && chars[j] == chars[i] {
            j += 1;
        }
        if !chars[i].is_whitespace() && j - i >= min {
            total += j - i - min + 1;
        }
        i = j;
    }
    total
}

/// A terminating decimal `sign * digits / 10^scale` with surface-form renderers.
#[derive(Debug, Clone)]
pub struct Decimal {
    pub negative: bool,
    pub int_part: u64,
    /// Fraction digits without trailing zeros.
    pub frac: String,
}

impl Decimal {
    pub fn random(rng: &mut impl Rng) -> Self {
        let int_part = match rng.gen_range(0..4) {
            0 => rng.gen_range(0..10),
            1 => rng.gen_range(0..1000),
            2 => rng.gen_range(0..1_000_000),
            _ => rng.gen_range(0..1_000_000_000_000),
        };
        let places = rng.gen_range(0..=5);
        let mut frac: String = (0..places).map(|_| char::from(b'0' + rng.gen_range(0..10u8))).collect();
        while frac.ends_with('0') {
            frac.pop();
        }
        let negative = (int_part != 0 || !frac.is_empty()) && rng.gen_bool(0.3);
        Self {
            negative,
            int_part,
            frac,
        }
    }

    pub fn value(&self) -> BigRational {
        let scale = BigInt::from(10u8).pow(self.frac.len() as u32);
        let digits: BigInt = format!("{}{}", self.int_part, self.frac).parse().unwrap();
        let v = BigRational::new(digits, scale);
        if self.negative {
            -v
        } else {
            v
        }
    }

    fn times_100(&self) -> Self {
        let mut frac = format!("{:0<2}", self.frac);
        let shifted: String = frac.drain(..2).collect();
        while frac.ends_with('0') {
            frac.pop();
        }
        Self {
            negative: self.negative,
            int_part: self.int_part * 100 + shifted.parse::<u64>().unwrap(),
            frac,
        }
    }

    /// A lone separator followed by exactly three digits after a 1-3 digit
    /// integer part reads as thousands grouping, so such values have no
    /// unambiguous decimal rendering.
    pub fn is_grouping_ambiguous(&self) -> bool {
        (1..=999).contains(&self.int_part) && self.frac.len() == 3
    }

    /// Whether every surface form denotes this value unambiguously.
    pub fn renders_unambiguously(&self) -> bool {
        !self.is_grouping_ambiguous() && !self.times_100().is_grouping_ambiguous()
    }

    fn sign(&self) -> &'static str {
        if self.negative {
            "-"
        } else {
            ""
        }
    }

    fn grouped_int(&self, sep: char) -> String {
        let digits = self.int_part.to_string();
        let mut out = String::new();
        for (i, c) in digits.chars().enumerate() {
            if i > 0 && (digits.len() - i).is_multiple_of(3) {
                out.push(sep);
            }
            out.push(c);
        }
        out
    }

    fn with_frac(&self, int: String, mark: char) -> String {
        if self.frac.is_empty() {
            format!("{}{int}", self.sign())
        } else {
            format!("{}{int}{mark}{}", self.sign(), self.frac)
        }
    }

    pub fn plain(&self) -> String {
        self.with_frac(self.int_part.to_string(), '.')
    }

    pub fn grouped_eu(&self) -> String {
        self.with_frac(self.grouped_int('.'), ',')
    }

    pub fn grouped_us(&self) -> String {
        self.with_frac(self.grouped_int(','), '.')
    }

    pub fn decimal_comma(&self) -> String {
        self.with_frac(self.int_part.to_string(), ',')
    }

    pub fn fraction_command(&self) -> String {
        let num = format!("{}{}", self.int_part, self.frac).trim_start_matches('0').to_string();
        let num = if num.is_empty() { "0".to_string() } else { num };
        let den = format!("1{}", "0".repeat(self.frac.len()));
        format!("{}\\frac{{{num}}}{{{den}}}", self.sign())
    }

    pub fn percent(&self) -> String {
        format!("{}%", self.times_100().plain())
    }

    pub fn six_forms(&self) -> [String; 6] {
        [
            self.plain(),
            self.grouped_eu(),
            self.grouped_us(),
            self.decimal_comma(),
            self.fraction_command(),
            self.percent(),
        ]
    }
}

/// Draws `n` decimals that render unambiguously in every surface form.
pub fn unambiguous_decimals(rng: &mut impl Rng, n: usize) -> Vec<Decimal> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let d = Decimal::random(rng);
        if d.renders_unambiguously() {
            out.push(d);
        }
    }
    out
}

/// One annotation record per line plus its hand-derived expected outcome.
pub const CORPUS_FIXTURE: &str = include_str!("../../../../data/fixtures/corpus20.jsonl");
pub const CORPUS_EXPECTED: &str = include_str!("../../../../data/fixtures/corpus20.expected");
