//! Numeric normalization and answer equivalence.
//!
//! Separator handling follows a grouped-digits rule. A `.` or `,` is a thousands
//! separator when every group after the first has exactly three digits and the
//! first group looks like a grouping head (one to three digits, no leading zero).
//! When both separator kinds occur the later one is the decimal mark. A lone
//! separator followed by exactly three digits is read as grouping, since the
//! gold answers it is compared against are integers.
//!
//! Equivalence is exact rational equality when both sides parse as numbers and
//! exact comparison of whitespace-free, formatting-normalized strings otherwise.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use once_cell::sync::Lazy;
use regex::Regex;

use crate::error::{Error, Result};

static FRAC_RE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"^([+-]?)\\frac\{([^{}]+)\}\{([^{}]+)\}$").unwrap());
static SLASH_RE: Lazy<Regex> = Lazy::new(|| Regex::new(r"^([+-]?[\d.,]+)/([\d.,]+)$").unwrap());
static TEXT_WRAP_RE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"\\(?:text|textbf|mathrm|mathbf)\{([^{}]*)\}").unwrap());

/// A decimal number with separators resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedNumber {
    /// No grouping, `.` as decimal point, no trailing fractional zeros, no `+`.
    pub canonical: String,
    pub value: BigRational,
}

impl fmt::Display for NormalizedNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical)
    }
}

impl NormalizedNumber {
    fn from_parts(negative: bool, int_digits: &str, frac_digits: &str) -> Self {
        let int_trim = int_digits.trim_start_matches('0');
        let frac_trim = frac_digits.trim_end_matches('0');

        let mut all_digits = String::with_capacity(int_trim.len() + frac_trim.len() + 1);
        all_digits.push_str(int_trim);
        all_digits.push_str(frac_trim);
        let numer = if all_digits.is_empty() {
            BigInt::zero()
        } else {
            all_digits.parse::<BigInt>().expect("digits only")
        };
        let denom = BigInt::from(10u32).pow(frac_trim.len() as u32);
        let mut value = BigRational::new(numer, denom);
        let negative = negative && !value.is_zero();
        if negative {
            value = -value;
        }

        let mut canonical = String::new();
        if negative {
            canonical.push('-');
        }
        canonical.push_str(if int_trim.is_empty() { "0" } else { int_trim });
        if !frac_trim.is_empty() {
            canonical.push('.');
            canonical.push_str(frac_trim);
        }
        Self { canonical, value }
    }

    /// Strict parser for canonical strings (`.` is always a decimal point).
    pub fn parse_canonical(s: &str) -> Result<Self> {
        let invalid = || Error::InvalidNumber(s.to_string());
        let (negative, body) = split_sign(s);
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        let digits_ok = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
        if int_part.is_empty() || !digits_ok(int_part) || !digits_ok(frac_part) {
            return Err(invalid());
        }
        if body.contains('.') && frac_part.is_empty() {
            return Err(invalid());
        }
        Ok(Self::from_parts(negative, int_part, frac_part))
    }
}

fn split_sign(s: &str) -> (bool, &str) {
    match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    }
}

fn is_grouping_head(group: &str) -> bool {
    (1..=3).contains(&group.len()) && !group.starts_with('0')
}

/// Resolves separators and canonicalizes a number token.
pub fn normalize_number(raw: &str) -> Result<NormalizedNumber> {
    let invalid = || Error::InvalidNumber(raw.to_string());
    let (negative, body) = split_sign(raw.trim());

    let mut groups: Vec<&str> = Vec::new();
    let mut seps: Vec<u8> = Vec::new();
    let mut start = 0;
    for (i, b) in body.bytes().enumerate() {
        match b {
            b'0'..=b'9' => {}
            b'.' | b',' => {
                groups.push(&body[start..i]);
                seps.push(b);
                start = i + 1;
            }
            _ => return Err(invalid()),
        }
    }
    groups.push(&body[start..]);
    if groups.iter().any(|g| g.is_empty()) {
        return Err(invalid());
    }

    let grouped = |gs: &[&str]| is_grouping_head(gs[0]) && gs[1..].iter().all(|g| g.len() == 3);

    let Some(&last_sep) = seps.last() else {
        return Ok(NormalizedNumber::from_parts(negative, body, ""));
    };
    let mixed = seps.iter().any(|&s| s != last_sep);

    if mixed {
        // the final separator is the decimal mark; everything before it groups
        let decimal_count = seps.iter().filter(|&&s| s == last_sep).count();
        let int_groups = &groups[..groups.len() - 1];
        if decimal_count != 1 || !grouped(int_groups) {
            return Err(invalid());
        }
        let int_digits: String = int_groups.concat();
        return Ok(NormalizedNumber::from_parts(negative, &int_digits, groups[groups.len() - 1]));
    }

    if seps.len() > 1 {
        if !grouped(&groups) {
            return Err(invalid());
        }
        return Ok(NormalizedNumber::from_parts(negative, &groups.concat(), ""));
    }

    // a single separator
    if grouped(&groups) {
        Ok(NormalizedNumber::from_parts(negative, &groups.concat(), ""))
    } else {
        Ok(NormalizedNumber::from_parts(negative, groups[0], groups[1]))
    }
}

/// A parsed answer: an exact rational, or a normalized opaque string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MathValue {
    Rational { value: BigRational, raw: String },
    Opaque { raw: String },
}

impl MathValue {
    pub fn raw(&self) -> &str {
        match self {
            MathValue::Rational { raw, .. } | MathValue::Opaque { raw } => raw,
        }
    }

    pub fn rational(&self) -> Option<&BigRational> {
        match self {
            MathValue::Rational { value, .. } => Some(value),
            MathValue::Opaque { .. } => None,
        }
    }

    /// Decimal string for terminating rationals, `p/q` otherwise, raw for opaque values.
    pub fn canonical(&self) -> String {
        match self {
            MathValue::Rational { value, .. } => rational_to_string(value),
            MathValue::Opaque { raw } => raw.clone(),
        }
    }
}

/// Renders a rational as a terminating decimal when possible.
pub fn rational_to_string(value: &BigRational) -> String {
    let mut denom = value.denom().clone();
    let (two, five) = (BigInt::from(2u8), BigInt::from(5u8));
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&denom % &two).is_zero() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if denom != BigInt::from(1u8) {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let places = twos.max(fives);
    let scaled = (value * BigRational::from_integer(BigInt::from(10u8).pow(places))).to_integer();
    let digits = scaled.abs().to_string();
    let (int_part, frac_part) = if places == 0 {
        (digits.as_str().to_string(), String::new())
    } else {
        let padded = format!("{:0>width$}", digits, width = places as usize + 1);
        let split = padded.len() - places as usize;
        (padded[..split].to_string(), padded[split..].to_string())
    };
    NormalizedNumber::from_parts(value.is_negative(), &int_part, &frac_part).canonical
}

/// Strips delimiters, sizing commands, currency symbols and whitespace.
pub fn normalize_formatting(s: &str) -> String {
    let mut t = s.trim().to_string();
    loop {
        let before = t.len();
        for (open, close) in [("$$", "$$"), ("$", "$"), ("\\(", "\\)"), ("\\[", "\\]")] {
            if t.len() >= open.len() + close.len() && t.starts_with(open) && t.ends_with(close) {
                t = t[open.len()..t.len() - close.len()].trim().to_string();
            }
        }
        if t.len() == before {
            break;
        }
    }
    t = TEXT_WRAP_RE.replace_all(&t, "$1").into_owned();
    for (from, to) in [
        ("\\dfrac", "\\frac"),
        ("\\tfrac", "\\frac"),
        ("\\%", "%"),
        ("\\$", ""),
        ("\\left", ""),
        ("\\right", ""),
        ("\\displaystyle", ""),
        ("\\!", ""),
        ("\\,", ""),
        ("\\;", ""),
        ("\\:", ""),
        ("\\ ", ""),
        ("$", ""),
        ("€", ""),
        ("£", ""),
        ("¥", ""),
    ] {
        if t.contains(from) {
            t = t.replace(from, to);
        }
    }
    t.retain(|c| !c.is_whitespace());
    t
}

fn numeric_value(s: &str) -> Option<BigRational> {
    normalize_number(s).ok().map(|n| n.value)
}

/// Parses an answer string into a rational when it is a plain number, a
/// percentage, or a fraction of two numbers. Everything else is opaque.
pub fn parse_math_answer(s: &str) -> MathValue {
    let raw = normalize_formatting(s);
    match rational_of(&raw) {
        Some(value) => MathValue::Rational { value, raw },
        None => MathValue::Opaque { raw },
    }
}

fn rational_of(raw: &str) -> Option<BigRational> {
    if raw.is_empty() {
        return None;
    }
    if let Some(v) = numeric_value(raw) {
        return Some(v);
    }
    if let Some(body) = raw.strip_suffix('%') {
        let v = rational_of(body)?;
        return Some(v / BigRational::from_integer(BigInt::from(100u8)));
    }
    let (negative, num, den) = if let Some(c) = FRAC_RE.captures(raw) {
        let (_, [sign, num, den]) = c.extract();
        (sign == "-", num, den)
    } else {
        let (_, [num, den]) = SLASH_RE.captures(raw)?.extract();
        (false, num, den)
    };
    let num = numeric_value(num)?;
    let den = numeric_value(den)?;
    if den.is_zero() {
        return None;
    }
    let v = num / den;
    Some(if negative { -v } else { v })
}

/// Rational equality when both sides are numbers, exact string match otherwise.
pub fn answers_equivalent(pred: &MathValue, gold: &MathValue) -> bool {
    match (pred.rational(), gold.rational()) {
        (Some(a), Some(b)) => a == b,
        _ => pred.raw() == gold.raw(),
    }
}
