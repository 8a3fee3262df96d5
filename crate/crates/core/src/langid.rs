//! Language identification behind a pluggable interface.
//!
//! The bundled identifier is a character-trigram model: each language gets an
//! additively smoothed trigram distribution, and a text is scored by its
//! per-trigram average log-likelihood under every language. The averages are
//! turned into a distribution over languages with a softmax, so the reported
//! confidence does not depend on text length.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::extraction::strip_boxed;

/// Texts with fewer letters-and-spaces characters than this are not scored.
pub const MIN_SCORED_CHARS: usize = 20;
/// Minimum amount of training text per language, in characters.
pub const MIN_TRAINING_CHARS: usize = 1000;
pub const UNDETERMINED: &str = "und";
pub const DEFAULT_SMOOTHING: f64 = 0.5;
/// Softmax temperature applied to average log-likelihoods. Per-trigram
/// averages of different languages sit close together, so the raw softmax is
/// too flat to be read as a confidence.
pub const DEFAULT_SHARPNESS: f64 = 3.0;

const MAGIC: &[u8; 4] = b"LRTG";
const FORMAT_VERSION: u16 = 1;
const VERSION_TAG: &str = "char-trigram/1";

/// Lowercase ISO-639 style code, 2 or 3 ASCII letters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LangCode(String);

impl LangCode {
    pub fn new(code: &str) -> Result<Self> {
        let ok = (2..=3).contains(&code.len()) && code.bytes().all(|b| b.is_ascii_lowercase());
        if ok {
            Ok(Self(code.to_string()))
        } else {
            Err(Error::InvalidLanguageCode(code.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for LangCode {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        Self::new(&s)
    }
}

impl From<LangCode> for String {
    fn from(c: LangCode) -> String {
        c.0
    }
}

impl fmt::Display for LangCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for LangCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LanguageScore {
    /// Winning language code, or `und` when the text is too short to score.
    pub language: String,
    pub confidence: f64,
}

impl LanguageScore {
    pub fn undetermined() -> Self {
        Self {
            language: UNDETERMINED.to_string(),
            confidence: 0.0,
        }
    }
}

/// Anything that can spread probability mass over a fixed set of languages.
pub trait LanguageIdentifier: Send + Sync {
    fn languages(&self) -> &[LangCode];

    /// Normalized likelihood per language, in `languages()` order. `None` when
    /// the text carries too little evidence to score.
    fn distribution(&self, text: &str) -> Option<Vec<f64>>;

    fn identify(&self, text: &str) -> LanguageScore {
        let Some(dist) = self.distribution(text) else {
            return LanguageScore::undetermined();
        };
        let (best, conf) = dist
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| if p > acc.1 { (i, p) } else { acc });
        LanguageScore {
            language: self.languages()[best].to_string(),
            confidence: conf,
        }
    }

    fn language_index(&self, target: &str) -> Result<usize> {
        self.languages()
            .iter()
            .position(|l| l.as_str() == target)
            .ok_or_else(|| Error::UnknownLanguage(target.to_string()))
    }

    /// Probability assigned to `target`, 0 for texts below the scoring floor.
    fn score_language(&self, text: &str, target: &str) -> Result<f64> {
        let idx = self.language_index(target)?;
        Ok(self.distribution(text).map_or(0.0, |d| d[idx]))
    }
}

/// Lowercases, drops boxed expressions, LaTeX commands, digits and punctuation,
/// and collapses whitespace. Only letters and single spaces remain.
pub fn prepare_text(text: &str) -> String {
    let stripped;
    let text = if text.contains("\\boxed{") {
        stripped = strip_boxed(text);
        &stripped
    } else {
        text
    };
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    let mut pending_space = false;
    while let Some(c) = chars.next() {
        if c == '\\' {
            // skip a command name such as \frac or \cdot
            while chars.peek().is_some_and(|n| n.is_ascii_alphabetic()) {
                chars.next();
            }
            pending_space = true;
            continue;
        }
        if c.is_alphabetic() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.extend(c.to_lowercase());
        } else {
            pending_space = true;
        }
    }
    out
}

/// Packs three chars into one key (21 bits each).
#[inline]
fn trigram_key(a: char, b: char, c: char) -> u64 {
    ((a as u64) << 42) | ((b as u64) << 21) | (c as u64)
}

/// Calls `f` for every space-padded within-word trigram of prepared text.
fn for_each_trigram(prepared: &str, mut f: impl FnMut(u64)) {
    for word in prepared.split(' ').filter(|w| !w.is_empty()) {
        let (mut a, mut b) = (' ', ' ');
        let mut first = true;
        for c in word.chars().chain(std::iter::once(' ')) {
            if first {
                b = c;
                first = false;
                continue;
            }
            f(trigram_key(a, b, c));
            a = b;
            b = c;
        }
    }
}

/// Per-language smoothed trigram log-probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct LangTable {
    pub language: LangCode,
    /// Trigram occurrences seen in training.
    pub total: u64,
    /// Log-probability of any trigram this language never produced.
    pub unseen_log_prob: f64,
    /// Seen trigrams, sorted by key.
    pub entries: Vec<(u64, f64)>,
}

/// Character-trigram identifier.
#[derive(Debug, Clone)]
pub struct TrigramModel {
    version_tag: String,
    smoothing: f64,
    sharpness: f64,
    /// Distinct trigrams across all languages.
    vocab_size: u64,
    tables: Vec<LangTable>,
    languages: Vec<LangCode>,
    index: FxHashMap<u64, u32>,
    /// Row per vocabulary entry, one column per language.
    log_probs: Vec<f64>,
    unseen: Vec<f64>,
}

impl PartialEq for TrigramModel {
    fn eq(&self, other: &Self) -> bool {
        self.version_tag == other.version_tag
            && self.smoothing.to_bits() == other.smoothing.to_bits()
            && self.sharpness.to_bits() == other.sharpness.to_bits()
            && self.vocab_size == other.vocab_size
            && self.tables == other.tables
    }
}

/// Builds a trigram model from `(language, text)` pairs. Several pairs may share
/// a language; their texts are pooled.
pub fn train_profiles(corpus: &[(LangCode, String)], smoothing: f64) -> Result<TrigramModel> {
    if !(smoothing > 0.0 && smoothing.is_finite()) {
        return Err(Error::InvalidSmoothing(smoothing));
    }
    let mut pooled: Vec<(LangCode, usize, FxHashMap<u64, u64>)> = Vec::new();
    for (lang, text) in corpus {
        let slot = match pooled.iter().position(|(l, _, _)| l == lang) {
            Some(i) => i,
            None => {
                pooled.push((lang.clone(), 0, FxHashMap::default()));
                pooled.len() - 1
            }
        };
        let (_, chars, counts) = &mut pooled[slot];
        *chars += text.chars().count();
        for_each_trigram(&prepare_text(text), |k| *counts.entry(k).or_insert(0) += 1);
    }
    pooled.sort_by(|a, b| a.0.cmp(&b.0));

    if pooled.is_empty() {
        return Err(Error::Config("training corpus is empty".into()));
    }
    for (lang, chars, counts) in &pooled {
        if *chars < MIN_TRAINING_CHARS || counts.is_empty() {
            return Err(Error::CorpusTooSmall {
                language: lang.to_string(),
                chars: *chars,
                floor: MIN_TRAINING_CHARS,
            });
        }
    }

    let mut vocab: Vec<u64> = pooled.iter().flat_map(|(_, _, c)| c.keys().copied()).collect();
    vocab.sort_unstable();
    vocab.dedup();
    let vocab_size = vocab.len() as u64;

    let tables = pooled
        .into_iter()
        .map(|(language, _, counts)| {
            let total: u64 = counts.values().sum();
            // one extra slot of mass for trigrams outside the vocabulary
            let denom = total as f64 + smoothing * (vocab_size as f64 + 1.0);
            let mut entries: Vec<(u64, f64)> = counts
                .into_iter()
                .map(|(k, c)| (k, ((c as f64 + smoothing) / denom).ln()))
                .collect();
            entries.sort_unstable_by_key(|e| e.0);
            LangTable {
                language,
                total,
                unseen_log_prob: (smoothing / denom).ln(),
                entries,
            }
        })
        .collect();

    TrigramModel::from_tables(VERSION_TAG.to_string(), smoothing, DEFAULT_SHARPNESS, vocab_size, tables)
}

impl TrigramModel {
    fn from_tables(
        version_tag: String,
        smoothing: f64,
        sharpness: f64,
        vocab_size: u64,
        tables: Vec<LangTable>,
    ) -> Result<Self> {
        if tables.is_empty() {
            return Err(Error::ModelFormat("model has no languages".into()));
        }
        if !(sharpness > 0.0 && sharpness.is_finite()) {
            return Err(Error::ModelFormat(format!("bad sharpness {sharpness}")));
        }
        let n_lang = tables.len();
        let unseen: Vec<f64> = tables.iter().map(|t| t.unseen_log_prob).collect();
        let mut index = FxHashMap::default();
        let mut log_probs = Vec::new();
        for (col, table) in tables.iter().enumerate() {
            if table.entries.is_empty() {
                return Err(Error::ModelFormat(format!("empty table for {}", table.language)));
            }
            for &(key, lp) in &table.entries {
                let row = *index.entry(key).or_insert_with(|| {
                    log_probs.extend_from_slice(&unseen);
                    (log_probs.len() / n_lang - 1) as u32
                });
                log_probs[row as usize * n_lang + col] = lp;
            }
        }
        if index.len() as u64 > vocab_size {
            return Err(Error::ModelFormat("vocabulary size smaller than table union".into()));
        }
        let languages = tables.iter().map(|t| t.language.clone()).collect();
        Ok(Self {
            version_tag,
            smoothing,
            sharpness,
            vocab_size,
            tables,
            languages,
            index,
            log_probs,
            unseen,
        })
    }

    pub fn tables(&self) -> &[LangTable] {
        &self.tables
    }

    pub fn smoothing(&self) -> f64 {
        self.smoothing
    }

    pub fn vocab_size(&self) -> u64 {
        self.vocab_size
    }

    pub fn version_tag(&self) -> &str {
        &self.version_tag
    }

    /// Multiplier applied to average log-likelihoods before the softmax.
    pub fn sharpness(&self) -> f64 {
        self.sharpness
    }

    pub fn with_sharpness(mut self, sharpness: f64) -> Result<Self> {
        if !(sharpness > 0.0 && sharpness.is_finite()) {
            return Err(Error::Config(format!("sharpness must be positive, got {sharpness}")));
        }
        self.sharpness = sharpness;
        Ok(self)
    }

    /// Total probability mass of one language's distribution (should be 1).
    pub fn table_mass(&self, lang: usize) -> f64 {
        let t = &self.tables[lang];
        let seen: f64 = t.entries.iter().map(|e| e.1.exp()).sum();
        let unseen_slots = (self.vocab_size + 1 - t.entries.len() as u64) as f64;
        seen + unseen_slots * t.unseen_log_prob.exp()
    }

    /// Average per-trigram log-likelihood of prepared text under every language.
    pub fn average_log_likelihoods(&self, text: &str) -> Option<Vec<f64>> {
        let prepared = prepare_text(text);
        if prepared.chars().count() < MIN_SCORED_CHARS {
            return None;
        }
        let n_lang = self.languages.len();
        let mut sums = vec![0.0; n_lang];
        let mut n = 0u64;
        for_each_trigram(&prepared, |key| {
            n += 1;
            match self.index.get(&key) {
                Some(&row) => {
                    let row = &self.log_probs[row as usize * n_lang..(row as usize + 1) * n_lang];
                    sums.iter_mut().zip(row).for_each(|(s, lp)| *s += lp);
                }
                None => sums.iter_mut().zip(&self.unseen).for_each(|(s, lp)| *s += lp),
            }
        });
        if n == 0 {
            return None;
        }
        Some(sums.into_iter().map(|s| s / n as f64).collect())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        write_str(&mut buf, &self.version_tag);
        buf.extend_from_slice(&self.smoothing.to_le_bytes());
        buf.extend_from_slice(&self.sharpness.to_le_bytes());
        buf.extend_from_slice(&self.vocab_size.to_le_bytes());
        buf.extend_from_slice(&(self.tables.len() as u32).to_le_bytes());
        for t in &self.tables {
            write_str(&mut buf, t.language.as_str());
            buf.extend_from_slice(&t.total.to_le_bytes());
            buf.extend_from_slice(&t.unseen_log_prob.to_le_bytes());
            buf.extend_from_slice(&(t.entries.len() as u64).to_le_bytes());
            for &(key, lp) in &t.entries {
                buf.extend_from_slice(&key.to_le_bytes());
                buf.extend_from_slice(&lp.to_le_bytes());
            }
        }
        let digest = Sha256::digest(&buf);
        buf.extend_from_slice(&digest);
        buf
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 32 + MAGIC.len() {
            return Err(Error::ModelFormat("file too short".into()));
        }
        let (body, checksum) = bytes.split_at(bytes.len() - 32);
        if Sha256::digest(body).as_slice() != checksum {
            return Err(Error::ModelFormat("checksum mismatch".into()));
        }
        let mut r = ByteReader { buf: body, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::ModelFormat("bad magic".into()));
        }
        let version = u16::from_le_bytes(r.array()?);
        if version != FORMAT_VERSION {
            return Err(Error::ModelFormat(format!("unsupported format version {version}")));
        }
        let version_tag = r.string()?;
        let smoothing = f64::from_le_bytes(r.array()?);
        let sharpness = f64::from_le_bytes(r.array()?);
        let vocab_size = u64::from_le_bytes(r.array()?);
        let n_lang = u32::from_le_bytes(r.array()?);
        let mut tables = Vec::with_capacity(n_lang as usize);
        for _ in 0..n_lang {
            let language = LangCode::new(&r.string()?)?;
            let total = u64::from_le_bytes(r.array()?);
            let unseen_log_prob = f64::from_le_bytes(r.array()?);
            let n = u64::from_le_bytes(r.array()?);
            if n > (body.len() / 16) as u64 {
                return Err(Error::ModelFormat("entry count exceeds file size".into()));
            }
            let mut entries = Vec::with_capacity(n as usize);
            for _ in 0..n {
                let key = u64::from_le_bytes(r.array()?);
                let lp = f64::from_le_bytes(r.array()?);
                entries.push((key, lp));
            }
            if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::ModelFormat(format!("unsorted table for {language}")));
            }
            tables.push(LangTable {
                language,
                total,
                unseen_log_prob,
                entries,
            });
        }
        if r.pos != body.len() {
            return Err(Error::ModelFormat("trailing bytes".into()));
        }
        if tables.windows(2).any(|w| w[0].language >= w[1].language) {
            return Err(Error::ModelFormat("languages not sorted or duplicated".into()));
        }
        Self::from_tables(version_tag, smoothing, sharpness, vocab_size, tables)
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        Self::from_bytes(&buf)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}

impl LanguageIdentifier for TrigramModel {
    fn languages(&self) -> &[LangCode] {
        &self.languages
    }

    fn distribution(&self, text: &str) -> Option<Vec<f64>> {
        let avgs = self.average_log_likelihoods(text)?;
        Some(softmax(&avgs, self.sharpness))
    }
}

fn softmax(xs: &[f64], scale: f64) -> Vec<f64> {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = xs.iter().map(|x| ((x - max) * scale).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

fn write_str(buf: &mut Vec<u8>, s: &str) {
    buf.extend_from_slice(&(s.len() as u16).to_le_bytes());
    buf.extend_from_slice(s.as_bytes());
}

struct ByteReader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::ModelFormat("unexpected end of data".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }

    fn string(&mut self) -> Result<String> {
        let len = u16::from_le_bytes(self.array()?) as usize;
        String::from_utf8(self.take(len)?.to_vec()).map_err(|_| Error::ModelFormat("invalid utf-8".into()))
    }
}

/// Result of k-fold cross-validation over sentence-sized samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossValidation {
    pub folds: usize,
    pub samples: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub mean_confidence: f64,
}

/// Sentences of `text` long enough to be scored.
fn scorable_sentences(text: &str) -> Vec<&str> {
    text.split(['.', '!', '?', '\n'])
        .map(str::trim)
        .filter(|s| prepare_text(s).chars().count() >= MIN_SCORED_CHARS)
        .collect()
}

/// Splits every language's text into sentences, deals them round-robin into
/// `folds` folds, and scores each fold with a model trained on the others.
pub fn cross_validate(
    corpus: &[(LangCode, String)],
    smoothing: f64,
    sharpness: f64,
    folds: usize,
) -> Result<CrossValidation> {
    if folds < 2 {
        return Err(Error::Config(format!("cross-validation needs at least 2 folds, got {folds}")));
    }
    let split: Vec<(&LangCode, Vec<&str>)> =
        corpus.iter().map(|(l, t)| (l, scorable_sentences(t))).collect();
    let (mut samples, mut correct, mut conf_sum) = (0usize, 0usize, 0.0);
    for fold in 0..folds {
        let train: Vec<(LangCode, String)> = split
            .iter()
            .map(|(l, sents)| {
                let text = sents
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i % folds != fold)
                    .map(|(_, s)| *s)
                    .collect::<Vec<_>>()
                    .join(". ");
                ((*l).clone(), text)
            })
            .collect();
        let model = train_profiles(&train, smoothing)?.with_sharpness(sharpness)?;
        for (lang, sents) in &split {
            for s in sents.iter().skip(fold).step_by(folds) {
                let got = model.identify(s);
                samples += 1;
                conf_sum += got.confidence;
                if got.language == lang.as_str() {
                    correct += 1;
                }
            }
        }
    }
    let n = samples.max(1) as f64;
    Ok(CrossValidation {
        folds,
        samples,
        correct,
        accuracy: correct as f64 / n,
        mean_confidence: conf_sum / n,
    })
}

/// Assigns all mass to one fixed language whenever the text is above the floor.
/// Useful for exercising reward arithmetic independently of a trained model.
#[derive(Debug, Clone)]
pub struct FixedIdentifier {
    languages: Vec<LangCode>,
    answer: usize,
}

impl FixedIdentifier {
    pub fn new(languages: Vec<LangCode>, answer: &LangCode) -> Result<Self> {
        let answer = languages
            .iter()
            .position(|l| l == answer)
            .ok_or_else(|| Error::UnknownLanguage(answer.to_string()))?;
        Ok(Self { languages, answer })
    }
}

impl LanguageIdentifier for FixedIdentifier {
    fn languages(&self) -> &[LangCode] {
        &self.languages
    }

    fn distribution(&self, text: &str) -> Option<Vec<f64>> {
        if prepare_text(text).chars().count() < MIN_SCORED_CHARS {
            return None;
        }
        let mut d = vec![0.0; self.languages.len()];
        d[self.answer] = 1.0;
        Some(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> LangCode {
        LangCode::new(s).unwrap()
    }

    fn tiny_model() -> TrigramModel {
        let en = "the quick brown fox jumps over the lazy dog while the cat sleeps ".repeat(20);
        let de = "der schnelle braune fuchs springt über den faulen hund und die katze ".repeat(20);
        train_profiles(&[(code("en"), en), (code("de"), de)], 0.5).unwrap()
    }

    #[test]
    fn prepare_strips_non_letters() {
        assert_eq!(prepare_text("Hello, World! 123 \\frac{a}{b} \\boxed{42} Ça"), "hello world a b ça");
        assert_eq!(prepare_text("12345 67890"), "");
    }

    #[test]
    fn trigrams_are_word_padded() {
        let mut keys = Vec::new();
        for_each_trigram("ab c", |k| keys.push(k));
        let expect = vec![
            trigram_key(' ', 'a', 'b'),
            trigram_key('a', 'b', ' '),
            trigram_key(' ', 'c', ' '),
        ];
        assert_eq!(keys, expect);
    }

    #[test]
    fn code_validation() {
        assert!(LangCode::new("de").is_ok());
        assert!(LangCode::new("DE").is_err());
        assert!(LangCode::new("deutsch").is_err());
    }

    #[test]
    fn training_preconditions() {
        let short = vec![(code("de"), "zu kurz".to_string())];
        assert!(matches!(train_profiles(&short, 0.5), Err(Error::CorpusTooSmall { .. })));
        let ok = vec![(code("de"), "ein langer text ".repeat(100))];
        assert!(matches!(train_profiles(&ok, 0.0), Err(Error::InvalidSmoothing(_))));
        assert!(matches!(train_profiles(&ok, -1.0), Err(Error::InvalidSmoothing(_))));
    }

    #[test]
    fn tables_are_normalized() {
        let m = tiny_model();
        for i in 0..m.languages().len() {
            assert!((m.table_mass(i) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn floor_and_unknown_target() {
        let m = tiny_model();
        assert_eq!(m.identify(""), LanguageScore::undetermined());
        assert_eq!(m.identify("12345 67890 12345 67890"), LanguageScore::undetermined());
        assert_eq!(m.score_language("kurz", "de").unwrap(), 0.0);
        assert!(matches!(m.score_language("whatever", "fr"), Err(Error::UnknownLanguage(_))));
    }

    #[test]
    fn identifies_training_language() {
        let m = tiny_model();
        let s = m.identify("the lazy dog sleeps while the fox jumps");
        assert_eq!(s.language, "en");
        assert!(s.confidence > 0.5);
    }

    #[test]
    fn serialization_round_trip() {
        let m = tiny_model();
        let bytes = m.to_bytes();
        let back = TrigramModel::from_bytes(&bytes).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn corrupted_model_rejected() {
        let mut bytes = tiny_model().to_bytes();
        bytes[10] ^= 0xff;
        assert!(matches!(TrigramModel::from_bytes(&bytes), Err(Error::ModelFormat(_))));
        assert!(TrigramModel::from_bytes(b"LRTG").is_err());
    }

    #[test]
    fn cross_validation_on_distinct_languages() {
        let en = "The quick brown fox jumps over the lazy dog. ".repeat(60);
        let de = "Der schnelle braune Fuchs springt über den Hund. ".repeat(60);
        let cv = cross_validate(&[(code("en"), en), (code("de"), de)], 0.5, DEFAULT_SHARPNESS, 3).unwrap();
        assert_eq!(cv.samples, 120);
        assert_eq!(cv.correct, 120);
        assert!(cv.mean_confidence > 0.5);
        assert!(cross_validate(&[], 0.5, 1.0, 1).is_err());
    }

    #[test]
    fn fixed_identifier() {
        let langs = vec![code("de"), code("en")];
        let id = FixedIdentifier::new(langs, &code("de")).unwrap();
        assert_eq!(id.score_language("a sufficiently long piece of text", "de").unwrap(), 1.0);
        assert_eq!(id.score_language("short", "de").unwrap(), 0.0);
    }
}
