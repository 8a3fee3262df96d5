//! Acceptance suite: one PASS/FAIL line per criterion.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use lingoreward_cli::extract::extract_line;
use lingoreward_cli::model::load_model;
use lingoreward_cli::report::ScoreReport;
use lingoreward_cli::default_workers;
use lingoreward_core::corpus::{filter_record, AnnotationRecord, PASS};
use lingoreward_core::extraction::{split_think, Benchmark, ExtractionStage};
use lingoreward_core::langid::{FixedIdentifier, LangCode, LanguageIdentifier};
use lingoreward_core::numeric::{answers_equivalent, normalize_number, parse_math_answer};
use lingoreward_core::rewards::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tempfile::TempDir;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn code(s: &str) -> LangCode {
    LangCode::new(s).unwrap()
}

fn run_cli(args: &[&str]) -> Result<std::process::Output, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_lingoreward"))
        .args(args)
        .env_remove("LINGOREWARD_CONFIG")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out)
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn format_golden_table() -> Outcome {
    let start = Instant::now();
    // (text, open, closed, boxed, order)
    let cases = [
        ("", false, false, false, false),
        ("<think>x", true, false, false, false),
        ("\\boxed{1}", false, false, true, false),
        ("<think>x \\boxed{1}", true, false, true, false),
        ("<think>x</think>", true, true, false, false),
        ("\\boxed{1} <think>x</think>", true, true, true, false),
        ("<think>x</think> \\boxed{1}", true, true, true, true),
        ("</think> \\boxed{1}", false, false, true, false),
    ];
    let mut seen = Vec::new();
    for (text, open, closed, boxed, order) in cases {
        let want = [(open, 0.1), (closed, 0.3), (boxed, 0.1), (order, 0.5)]
            .iter()
            .filter(|f| f.0)
            .map(|f| f.1)
            .sum::<f64>();
        let got = format_reward(&split_think(text), text);
        ensure!((got - want).abs() <= 1e-12, "{text:?}: got {got}, want {want}");
        seen.push(got);
    }
    let expected = [0.0, 0.1, 0.1, 0.2, 0.4, 0.5, 1.0, 0.1];
    ensure!(seen == expected, "values {seen:?}");
    let elapsed = start.elapsed();
    ensure!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    Ok(format!("{} structural cases, values {{0, 0.1, 0.2, 0.4, 0.5, 1.0}}, {elapsed:.1?}", cases.len()))
}

fn naturalness_constants() -> Outcome {
    let params = NaturalnessParams::default();
    let filler = |n: usize| vec!["palabra"; n].join(" ");
    let short = format!("¿¿¿ {}", filler(28));
    ensure!(spanish_naturalness(&short, &params) == 0.0, "29-word trace not neutral");

    let mut words: Vec<String> = vec!["palabra".to_string(); 100];
    for w in words.iter_mut().step_by(10) {
        *w = "¿palabra".into();
    }
    let density = spanish_naturalness(&words.join(" "), &params);
    ensure!(density == -0.4, "density cap {density}");

    let stacked = naturalness_signals(&format!("{}{}", filler(100), " uno??".repeat(10)), &params);
    ensure!(stacked.stacked == 10 && stacked.p_stacked == 0.2, "stacked {stacked:?}");
    let loops = naturalness_signals(&format!("{}{}", "¿Espera, ¿pero sale. ".repeat(10), filler(100)), &params);
    ensure!(loops.hesitations == 10 && loops.p_hesitation == 0.3, "hesitation {loops:?}");
    Ok("29 words -> 0, density -0.4, stacked 0.2 and hesitation 0.3 at 10 detections".into())
}

fn composite_weights() -> Outcome {
    let text = "<think>Wir rechnen zuerst die Summe und dann das Produkt aus.</think> \
                Die Antwort ist also genau zweiundvierzig: \\boxed{42}.";
    let langs: Vec<LangCode> = ["de", "en", "es", "fr", "it"].iter().map(|l| code(l)).collect();
    let model = FixedIdentifier::new(langs, &code("de")).unwrap();
    let completion = Completion {
        id: "de-clean".into(),
        target_language: code("de"),
        text: text.into(),
        gold_answer: Some("42".into()),
        benchmark: None,
    };
    let mut parts = Vec::new();
    for (preset, lang_w, fmt_w) in [(Preset::Table8, 0.2, 0.1), (Preset::MainText, 0.1, 0.2)] {
        let cfg = RewardConfig::for_language(code("de"), preset);
        let b = composite_reward(&completion, &cfg, &model).map_err(|e| e.to_string())?;
        ensure!(b.total == 1.3, "{preset}: total {}", b.total);
        let (l, f) = (b.language.unwrap().contribution, b.format.unwrap().contribution);
        ensure!(l == lang_w && f == fmt_w, "{preset}: language {l}, format {f}");
        parts.push(format!("{preset}: 1.3 (language {l}, format {f})"));
    }
    Ok(parts.join("; "))
}

fn render_tokens(ids: &[u8]) -> String {
    ids.iter().map(|&i| ["a", "b", "c", "d", "e"][i as usize]).collect::<Vec<_>>().join(" ")
}

fn repetition_properties() -> Outcome {
    let start = Instant::now();
    let params = RepetitionParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..100_000 {
        let text = if i % 2 == 0 {
            common::latin1_string(&mut rng, 120)
        } else {
            common::completion_like(&mut rng, 40)
        };
        let r = repetition_penalty(&text, &params);
        ensure!((-1.0..=0.0).contains(&r), "{r} for {text:?}");
    }
    for _ in 0..10_000 {
        let base: Vec<u8> = (0..rng.gen_range(0..=30)).map(|_| rng.gen_range(0..5)).collect();
        let block: Vec<u8> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..5)).collect();
        let copies = rng.gen_range(2..6);
        let longer: Vec<u8> = base.iter().chain(block.iter().cycle().take(block.len() * copies)).copied().collect();
        let (before, after) = (
            repetition_penalty(&render_tokens(&base), &params),
            repetition_penalty(&render_tokens(&longer), &params),
        );
        ensure!(after <= before, "{:?}: {before} -> {after}", render_tokens(&longer));
    }
    for _ in 0..10_000 {
        let alphabet = rng.gen_range(1..=5);
        let ids: Vec<u8> = (0..rng.gen_range(0..=30)).map(|_| rng.gen_range(0..alphabet)).collect();
        let text = render_tokens(&ids);
        let got = loop_redundancy(&token_ids(&text), params.ngram_max);
        let want = common::loop_reference(&common::intern(&text), params.ngram_max);
        ensure!(got == want, "{text:?}: {got} vs scanner {want}");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    Ok(format!("1e5 fuzz in range, 1e4 monotone, 1e4 scanner-equal, {elapsed:.1?}"))
}

fn extraction_golden_suite() -> Outcome {
    use Benchmark::*;
    use ExtractionStage::*;
    let cases: &[(Benchmark, &str, &str, ExtractionStage, Option<&str>)] = &[
        (Math100, "\\boxed{\\frac{1}{2}}", "\\frac{1}{2}", BoxedLast, Some("0.5")),
        (Math100, "so \\boxed{\\frac{\\sqrt{3}}{2}}.", "\\frac{\\sqrt{3}}{2}", BoxedLast, None),
        (Math100, "\\boxed{\\dfrac{3}{4}}", "\\dfrac{3}{4}", BoxedLast, Some("0.75")),
        (Math100, "x \\boxed{1} y \\boxed{2}", "2", BoxedLast, Some("2")),
        (Math100, "\\boxed{1} then \\boxed{\\{1,2\\}}", "\\{1,2\\}", BoxedLast, None),
        (Math100, "\\boxed{unclosed", "", NotFound, None),
        (Math100, "#### 42", "", NotFound, None),
        (Mgsm, "so \\boxed{72}", "72", BoxedLast, Some("72")),
        (Mgsm, "The answer is #### 42", "42", HashDelimiter, Some("42")),
        (Mgsm, "#### 5 but later 9", "5", HashDelimiter, Some("5")),
        (Mgsm, "costs 3 then 7 total", "7", LastNumber, Some("7")),
        (Mgsm, "\\boxed{8} #### 9 and 10", "8", BoxedLast, Some("8")),
        (Mgsm, "El total es 1.234,56 euros", "1.234,56", LastNumber, Some("1234.56")),
        (Mgsm, "Total: 1,234.56 dollars", "1,234.56", LastNumber, Some("1234.56")),
        (Mgsm, "cuesta 3.50", "3.50", LastNumber, Some("3.5")),
        (Mgsm, "\\boxed{3,5}", "3,5", BoxedLast, Some("3.5")),
        (Mgsm, "it is -12 degrees", "-12", LastNumber, Some("-12")),
        (Mgsm, "no digits at all", "", NotFound, None),
        (Mgsm, "", "", NotFound, None),
        (Mc4, "\\boxed{C}", "C", BoxedLetter, None),
        (Mc4, "maybe B, no, D.", "D", StandaloneLetter, None),
        (Mc4, "\\boxed{(b)}", "B", BoxedLetter, None),
        (Mc4, "the answer is E", "", NotFound, None),
        (Mc2, "the answer is C", "", NotFound, None),
        (Mc2, "I pick B", "B", StandaloneLetter, None),
        (Mc2, "\\boxed{D} or A", "A", StandaloneLetter, None),
        (Bool, "\\boxed{True}", "True", BoolKeyword, None),
        (Bool, "i think false.", "False", BoolKeyword, None),
        (Bool, "\\boxed{\\text{FALSE}}", "False", BoolKeyword, None),
        (Bool, "no verdict", "", NotFound, None),
    ];
    for (i, &(bench, text, value, stage, normalized)) in cases.iter().enumerate() {
        let got = extract_line(i + 1, text, bench);
        ensure!(
            got.value == value && got.stage == stage && got.normalized.as_deref() == normalized,
            "{bench} {text:?}: got ({:?}, {:?}, {:?})",
            got.value,
            got.stage,
            got.normalized
        );
    }
    Ok(format!("{} cases exact", cases.len()))
}

fn numeric_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for d in common::unambiguous_decimals(&mut rng, 1000) {
        let parsed: Vec<_> = d.six_forms().iter().map(|f| parse_math_answer(f)).collect();
        for (a, form) in parsed.iter().zip(d.six_forms()) {
            ensure!(a.rational() == Some(&d.value()), "{form} misparsed");
            for b in &parsed {
                ensure!(answers_equivalent(a, b), "{} vs {}", a.raw(), b.raw());
            }
        }
        for form in [d.plain(), d.grouped_eu(), d.grouped_us(), d.decimal_comma()] {
            let once = normalize_number(&form).map_err(|e| e.to_string())?;
            let twice = normalize_number(&once.canonical).map_err(|e| e.to_string())?;
            ensure!(once == twice, "{form}: not idempotent");
        }
    }
    for _ in 0..10_000 {
        let mut v = || {
            let (n, d) = (rng.gen_range(-6..6), rng.gen_range(1..6));
            parse_math_answer(&format!("\\frac{{{n}}}{{{d}}}"))
        };
        let (x, y, z) = (v(), v(), v());
        ensure!(answers_equivalent(&x, &x), "not reflexive");
        ensure!(answers_equivalent(&x, &y) == answers_equivalent(&y, &x), "not symmetric");
        ensure!(
            !(answers_equivalent(&x, &y) && answers_equivalent(&y, &z)) || answers_equivalent(&x, &z),
            "not transitive"
        );
    }
    Ok("1000 values x 6 forms pairwise equivalent, idempotent, equivalence relation".into())
}

fn corpus_pipeline() -> Outcome {
    let dir = TempDir::new().unwrap();
    let fixture = data("fixtures/corpus20.jsonl");
    let expected = std::fs::read_to_string(data("fixtures/corpus20.expected")).unwrap();
    let records: Vec<AnnotationRecord> = std::fs::read_to_string(&fixture)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let mut want_kept = Vec::new();
    for (rec, line) in records.iter().zip(expected.lines()) {
        let (id, verdict) = line.split_once(' ').unwrap();
        let d = filter_record(rec);
        let got = if d.keep { "keep" } else { d.rule.as_str() };
        ensure!(rec.id == id && got == verdict, "{id}: {got} vs {verdict}");
        ensure!(d.keep == (d.rule == PASS), "{id}: keep/rule mismatch");
        if d.keep {
            want_kept.push(id.to_string());
        }
    }
    let plan = dir.path().join("keep_all.toml");
    std::fs::write(&plan, "[ratios]\n").unwrap();
    let out = p(&dir, "kept.jsonl");
    run_cli(&["filter", "--input", fixture.to_str().unwrap(), "--plan", plan.to_str().unwrap(), "--output", &out])?;
    let kept: Vec<String> = std::fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["id"].as_str().unwrap().to_string())
        .collect();
    ensure!(kept == want_kept, "kept {kept:?}");

    let template = records.iter().find(|r| r.id == "r14").unwrap();
    let math: String = (0..1000)
        .map(|i| {
            let rec = AnnotationRecord {
                id: format!("m{i}"),
                ..template.clone()
            };
            serde_json::to_string(&rec).unwrap() + "\n"
        })
        .collect();
    let input = p(&dir, "math.jsonl");
    std::fs::write(&input, math).unwrap();
    let (a, b) = (p(&dir, "a.jsonl"), p(&dir, "b.jsonl"));
    run_cli(&["filter", "--input", &input, "--output", &a])?;
    run_cli(&["filter", "--input", &input, "--output", &b])?;
    let sel = std::fs::read(&a).unwrap();
    let n = String::from_utf8_lossy(&sel).lines().count();
    ensure!(n == 300, "kept {n} of 1000 math_heavy");
    ensure!(sel == std::fs::read(&b).unwrap(), "selection differs between runs");
    Ok(format!("fixture keep set {want_kept:?}, 1000 math_heavy -> 300, repeatable"))
}

fn langid_benchmark() -> Outcome {
    let model = load_model(None).map_err(|e| e.to_string())?;
    let (mut total, mut correct) = (0, 0);
    for lang in ["de", "en", "es", "fr", "it"] {
        let text = std::fs::read_to_string(data(&format!("langid/heldout/{lang}.txt"))).unwrap();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            total += 1;
            correct += (model.identify(line).language == lang) as usize;
        }
    }
    let acc = correct as f64 / total as f64;
    ensure!(total == 500 && acc >= 0.95, "{correct}/{total}");
    Ok(format!("{correct}/{total} held-out sentences ({:.1}%)", 100.0 * acc))
}

fn heldout(lang: &str) -> Vec<String> {
    std::fs::read_to_string(data(&format!("langid/heldout/{lang}.txt")))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(str::to_string)
        .collect()
}

fn tl_report() -> Outcome {
    let dir = TempDir::new().unwrap();
    let english = heldout("en");
    let mut lines = Vec::new();
    for i in 0..100 {
        let target = ["de", "es", "fr", "it"][i % 4];
        let source = if i < 50 { heldout(target) } else { english.clone() };
        let think = format!("{} {}", source[(2 * i) % 100], source[(2 * i + 1) % 100]);
        let text = format!("<think>{think}</think> {} \\boxed{{{i}}}", source[(3 * i + 7) % 100]);
        lines.push(json!({"id": format!("tl{i}"), "target_language": target, "text": text, "gold": i.to_string()}).to_string());
    }
    let input = p(&dir, "tl.jsonl");
    std::fs::write(&input, lines.join("\n") + "\n").unwrap();
    let out = p(&dir, "tl.out.jsonl");
    run_cli(&["score", "--input", &input, "--output", &out])?;
    let report: ScoreReport = serde_json::from_str(&std::fs::read_to_string(format!("{out}.report.json")).unwrap())
        .map_err(|e| e.to_string())?;
    let tl = report.target_language_pct;
    ensure!((48.0..=52.0).contains(&tl), "%TL {tl}");
    Ok(format!("%TL {tl:.1} on 50 target + 50 English completions"))
}

fn determinism_fixture(dir: &TempDir) -> String {
    let mut lines: Vec<String> = lingoreward_cli::bench::synthetic_completions(10_000, 600, 10)
        .into_iter()
        .map(|c| serde_json::to_string(&c).unwrap())
        .collect();
    for i in (0..lines.len()).step_by(997) {
        lines[i] = json!({"id": format!("bad{i}"), "target_language": "xx", "text": "x"}).to_string();
    }
    lines[5] = "{broken".into();
    let path = p(dir, "det.jsonl");
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    path
}

fn parallel_determinism() -> Outcome {
    let dir = TempDir::new().unwrap();
    let input = determinism_fixture(&dir);
    let mut outputs = Vec::new();
    for workers in ["1", "4", "8"] {
        let out = p(&dir, &format!("det{workers}.jsonl"));
        run_cli(&["score", "--input", &input, "--output", &out, "--workers", workers])?;
        let bytes = std::fs::read(&out).unwrap();
        let report = std::fs::read(format!("{out}.report.json")).unwrap();
        outputs.push((bytes, report));
    }
    let lines = String::from_utf8_lossy(&outputs[0].0).lines().count();
    ensure!(lines == 10_000, "{lines} output lines");
    ensure!(outputs.iter().all(|o| *o == outputs[0]), "outputs differ across worker counts");
    Ok(format!("10k records, {} output bytes identical for 1/4/8 workers", outputs[0].0.len()))
}

fn throughput() -> Outcome {
    let cores = default_workers();
    let out = run_cli(&["bench", "--records", "20000", "--bytes", "1024"])?;
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let rate = v["per_second"].as_f64().unwrap_or(0.0);
    // the target is stated for 8 cores; scale it to the cores present
    let target = 5000.0 * cores.min(8) as f64 / 8.0;
    ensure!(rate >= target, "{rate:.0}/s on {cores} cores, need {target:.0}/s");
    Ok(format!(
        "{rate:.0} scorings/s on {cores} core(s), {:.0} B/completion (target {target:.0}/s)",
        v["mean_bytes"].as_f64().unwrap_or(0.0)
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("format-reward golden table", format_golden_table),
        ("naturalness constants", naturalness_constants),
        ("composite weights", composite_weights),
        ("repetition-penalty properties", repetition_properties),
        ("extraction golden suite", extraction_golden_suite),
        ("numeric equivalence", numeric_equivalence),
        ("corpus pipeline", corpus_pipeline),
        ("langid desk benchmark", langid_benchmark),
        ("%TL report", tl_report),
        ("determinism under parallelism", parallel_determinism),
        ("throughput", throughput),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (status, detail) = match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => ("PASS", detail),
            Ok(Err(reason)) => ("FAIL", reason),
            Err(_) => ("FAIL", "panicked".to_string()),
        };
        failed += (status == "FAIL") as usize;
        println!("criterion {:>2} {status} {name}: {detail}", i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
