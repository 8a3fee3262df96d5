//! Spanish reasoning-trace naturalness: penalizes inverted question marks used
//! as decoration rather than to open real questions.

use super::config::{HesitationMode, NaturalnessParams};

/// Raw counts and per-signal penalties for one trace.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NaturalnessSignals {
    pub words: usize,
    pub inverted_marks: usize,
    pub stacked: usize,
    pub fake_questions: usize,
    pub hesitations: usize,
    pub p_density: f64,
    pub p_stacked: f64,
    pub p_fakeq: f64,
    pub p_hesitation: f64,
    /// Capped sum of the four penalties (positive).
    pub penalty: f64,
}

/// Returns a reward in `[-1, 0]` for a reasoning trace.
pub fn spanish_naturalness(think_text: &str, params: &NaturalnessParams) -> f64 {
    let p = naturalness_signals(think_text, params).penalty;
    if p == 0.0 {
        0.0
    } else {
        -p
    }
}

pub fn naturalness_signals(think_text: &str, params: &NaturalnessParams) -> NaturalnessSignals {
    let words = think_text.split_whitespace().count();
    if words < params.word_floor || words == 0 {
        return NaturalnessSignals {
            words,
            ..Default::default()
        };
    }
    let wf = words as f64;

    let inverted_marks = think_text.chars().filter(|&c| c == '¿').count();
    let stacked = stacked_marks(think_text);
    let (fake_questions, hesitations) = fake_questions(think_text, &params.connectives);

    let density = inverted_marks as f64 / wf;
    let p_density =
        (params.qmark_scale * (density - params.qmark_density_threshold).max(0.0)).min(params.qmark_cap);
    let p_stacked = (params.stacked_unit * stacked as f64).min(params.stacked_cap);
    let fake_density = fake_questions as f64 / wf;
    let p_fakeq = (params.fakeq_scale * (fake_density - params.fakeq_threshold).max(0.0)).min(params.fakeq_cap);
    let p_hesitation = if hesitations > params.hesitation_min {
        let charged = match params.hesitation_mode {
            HesitationMode::All => hesitations,
            HesitationMode::Excess => hesitations - params.hesitation_min,
        };
        (params.hesitation_unit * charged as f64).min(params.hesitation_cap)
    } else {
        0.0
    };
    let penalty = (p_density + p_stacked + p_fakeq + p_hesitation).min(params.total_cap);

    NaturalnessSignals {
        words,
        inverted_marks,
        stacked,
        fake_questions,
        hesitations,
        p_density,
        p_stacked,
        p_fakeq,
        p_hesitation,
        penalty,
    }
}

fn is_qmark(c: char) -> bool {
    c == '¿' || c == '?'
}

/// Adjacent question-mark pairs (`¿¿`, `¿?`, `??`, `?¿`); a run of r marks counts r - 1.
pub fn stacked_marks(text: &str) -> usize {
    let mut count = 0;
    let mut prev_mark = false;
    for c in text.chars() {
        let mark = is_qmark(c);
        if mark && prev_mark {
            count += 1;
        }
        prev_mark = mark;
    }
    count
}

/// Counts `¿` + connective clauses that end in `,` or `.` without a closing `?`,
/// and among them the hesitation loops: fake questions closed by a comma and
/// immediately followed by another `¿`.
pub fn fake_questions(text: &str, connectives: &[String]) -> (usize, usize) {
    let mut fakes = 0;
    let mut hesitations = 0;
    for (pos, _) in text.match_indices('¿') {
        let rest = &text[pos + '¿'.len_utf8()..];
        let word_end = rest.find(|c: char| !c.is_alphabetic()).unwrap_or(rest.len());
        let word = &rest[..word_end];
        if word.is_empty() || !connectives.iter().any(|c| c.to_lowercase() == word.to_lowercase()) {
            continue;
        }
        let clause = &rest[word_end..];
        let Some(term) = clause.find(['?', ',', '.', '!', '¿', '\n']) else {
            continue;
        };
        let term_char = clause[term..].chars().next().unwrap();
        if term_char != ',' && term_char != '.' {
            continue;
        }
        fakes += 1;
        if term_char == ',' && clause[term + 1..].trim_start().starts_with('¿') {
            hesitations += 1;
        }
    }
    (fakes, hesitations)
}
