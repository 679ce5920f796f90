//! Acceptance checks, one line per criterion. Runs as a plain binary so the
//! lines reach the terminal; exits non-zero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use polymatch::decoder::{perturb, Scheme};
use polymatch::oracle::exhaustive_mwpm_with;
use polymatch::sim::{
    derive_seed, oracle_check, precision_sweep, random_even_graph, required_wth_survey, threshold_sweep,
    build_surface_detector_graph, NoiseModel, PrecisionSweepConfig, SweepPoint, ThresholdSweepConfig, METHODS,
    PATH_GRAPH_CAP,
};
use polymatch::TruncatedPoly;

// Criterion 1
const RING_WIDTHS: [usize; 3] = [4, 64, 512];
const RING_CASES: usize = 100_000;
const AXIOM_TRIPLES: usize = 10_000;
const RING_BUDGET: Duration = Duration::from_secs(60);

// Criteria 2, 3, 5
const ORACLE_CASES: u64 = 2_000;
const ORACLE_N_MAX: usize = 12;
const ORACLE_MAX_WEIGHT: u64 = 1 << 8;
const ORACLE_BUDGET: Duration = Duration::from_secs(600);
const CROSS_CASES: usize = 1_000;

// Criterion 4
const ISOLATION_ORDER: usize = 10;
const ISOLATION_W_MAX: [u64; 3] = [8, 16, 32];
const ISOLATION_TRIALS: u64 = 10_000;

// Criteria 6-8
const DISTANCE: usize = 5;
const PHYSICAL_P: f64 = 1e-2;
const SHOTS: u64 = 100_000;
const AMPLIFIED_RATIO: f64 = 50.0;
const PRECISION_RATIO: f64 = 4.0;
const SURVEY_BUDGET: Duration = Duration::from_secs(1800);
const B_LOW: u32 = 4;
const B_HIGH: u32 = 8;
const HEADLINE_W_TH: usize = 512;
const HEADLINE_K: usize = 8;
const B_MAX: u32 = 12;

/// Statistical slack in standard errors.
const SIGMAS: f64 = 3.0;

#[derive(Default)]
struct Report {
    lines: Vec<(u32, bool, String)>,
}

impl Report {
    fn line(&mut self, criterion: u32, pass: bool, detail: String) {
        eprintln!("criterion {criterion} done");
        self.lines.push((criterion, pass, detail));
    }

    /// Prints every line in criterion order; returns the failure count.
    fn finish(mut self) -> usize {
        self.lines.sort_by_key(|l| l.0);
        for (c, pass, detail) in &self.lines {
            println!("criterion {c}: {} | {detail}", if *pass { "PASS" } else { "FAIL" });
        }
        self.lines.iter().filter(|l| !l.1).count()
    }
}

fn random_poly(rng: &mut impl Rng, width: usize) -> TruncatedPoly {
    match rng.gen_range(0..5) {
        0 => TruncatedPoly::zero(width),
        1 => TruncatedPoly::one(width),
        2 => TruncatedPoly::monomial(rng.gen_range(0..width), width),
        3 => {
            let k = rng.gen_range(1..=8);
            let e: Vec<usize> = (0..k).map(|_| rng.gen_range(0..width)).collect();
            // repeated exponents cancel, as they would in the ring
            let mut p = TruncatedPoly::zero(width);
            for x in e {
                p.add_assign(&TruncatedPoly::monomial(x, width));
            }
            p
        }
        _ => {
            let words: Vec<u64> = (0..width.div_ceil(64)).map(|_| rng.gen()).collect();
            TruncatedPoly::from_words(&words, width)
        }
    }
}

/// `out ^= src · X^shift` on little-endian words, truncated to `out.len()`.
fn xor_shifted(out: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / 64, shift % 64);
    for k in ws..out.len() {
        let j = k - ws;
        let mut v = src[j] << bs;
        if bs > 0 && j > 0 {
            v |= src[j - 1] >> (64 - bs);
        }
        out[k] ^= v;
    }
}

/// Schoolbook product: one shifted copy of `b` per set coefficient of `a`.
fn schoolbook(a: &TruncatedPoly, b: &TruncatedPoly) -> TruncatedPoly {
    let w = a.width();
    let mut out = vec![0u64; w.div_ceil(64)];
    for i in (0..w).filter(|&i| a.coefficient(i)) {
        xor_shifted(&mut out, b.words(), i);
    }
    TruncatedPoly::from_words(&out, w)
}

fn sum_words(a: &TruncatedPoly, b: &TruncatedPoly) -> TruncatedPoly {
    let words: Vec<u64> = a.words().iter().zip(b.words()).map(|(x, y)| x ^ y).collect();
    TruncatedPoly::from_words(&words, a.width())
}

fn criterion_1(r: &mut Report) {
    let start = Instant::now();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(1);
    let mut wrong = 0usize;
    for &w in &RING_WIDTHS {
        for _ in 0..RING_CASES {
            let a = random_poly(&mut rng, w);
            let b = random_poly(&mut rng, w);
            if &a + &b != sum_words(&a, &b) || &a * &b != schoolbook(&a, &b) {
                wrong += 1;
            }
        }
    }
    let mut broken = 0usize;
    for &w in &RING_WIDTHS {
        let zero = TruncatedPoly::zero(w);
        let one = TruncatedPoly::one(w);
        for _ in 0..AXIOM_TRIPLES {
            let a = random_poly(&mut rng, w);
            let b = random_poly(&mut rng, w);
            let c = random_poly(&mut rng, w);
            let ok = &(&a + &b) + &c == &a + &(&b + &c)
                && &a + &b == &b + &a
                && &(&a * &b) * &c == &a * &(&b * &c)
                && &a * &b == &b * &a
                && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
                && &a + &zero == a
                && &a * &one == a
                && (&a + &a).is_zero();
            if !ok {
                broken += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    r.line(
        1,
        wrong == 0 && broken == 0 && elapsed < RING_BUDGET,
        format!(
            "{} add/mul cases per width {:?}: {wrong} mismatches; {} axiom triples per width: {broken} violations; {:.1}s (budget {}s)",
            RING_CASES,
            RING_WIDTHS,
            AXIOM_TRIPLES,
            elapsed.as_secs_f64(),
            RING_BUDGET.as_secs()
        ),
    );
}

fn criteria_2_3_5(r: &mut Report) {
    let start = Instant::now();
    let report = oracle_check(ORACLE_N_MAX, ORACLE_CASES, ORACLE_MAX_WEIGHT, 2).expect("oracle check runs");
    let elapsed = start.elapsed();
    let isolated: Vec<_> = report.isolated().collect();
    let agree = isolated.iter().filter(|c| c.decode_agrees).count();
    r.line(
        2,
        agree == isolated.len() && elapsed < ORACLE_BUDGET,
        format!(
            "{} graphs n=4..{}: {} isolated, {} decoded identically to the exhaustive MWPM; {:.1}s (budget {}s)",
            report.cases.len(),
            ORACLE_N_MAX,
            isolated.len(),
            agree,
            elapsed.as_secs_f64(),
            ORACLE_BUDGET.as_secs()
        ),
    );
    let detected = report.cases.iter().filter(|c| c.overflow_detected).count();
    r.line(
        3,
        detected == report.cases.len(),
        format!(
            "overflow reported at w_th = 2w* and 2w*-1 in {detected}/{} graphs",
            report.cases.len()
        ),
    );
    let cross: Vec<_> = isolated.iter().take(CROSS_CASES).collect();
    let same = cross.iter().filter(|c| c.appendix_agrees).count();
    r.line(
        5,
        cross.len() == CROSS_CASES && same == cross.len(),
        format!("integer-determinant decode agrees on (w*, M) in {same}/{} isolated instances", cross.len()),
    );
}

fn criterion_4(r: &mut Report) {
    let mut pass = true;
    let mut parts = Vec::new();
    for &w_max in &ISOLATION_W_MAX {
        let mut non_isolated = 0u64;
        for t in 0..ISOLATION_TRIALS {
            let mut rng = Xoshiro256PlusPlus::seed_from_u64(derive_seed(4, w_max, t));
            // unit weights: every perfect matching ties before perturbation
            let pg = random_even_graph(&mut rng, ISOLATION_ORDER, 1, 0.5).unwrap();
            let pw = perturb(&pg, Scheme::Amplified, w_max, derive_seed(4, 1000 + w_max, t)).unwrap();
            let m = exhaustive_mwpm_with(&pg, |k| pw.effective[k]).unwrap();
            if !m.is_unique() {
                non_isolated += 1;
            }
        }
        let point = SweepPoint {
            axis: String::new(),
            value: w_max,
            trials: ISOLATION_TRIALS,
            failures: non_isolated,
        };
        let bound = ISOLATION_ORDER as f64 / w_max as f64;
        let ok = point.fraction() <= bound + SIGMAS * point.stderr();
        pass &= ok;
        parts.push(format!(
            "W_max={w_max}: {:.4} (bound {:.4})",
            point.fraction(),
            bound
        ));
    }
    r.line(
        4,
        pass,
        format!(
            "non-isolation over {ISOLATION_TRIALS} trials, n={ISOLATION_ORDER}, unit weights: {}",
            parts.join(", ")
        ),
    );
}

fn criterion_6(r: &mut Report, nm: &NoiseModel) {
    let start = Instant::now();
    let rows = required_wth_survey(nm, SHOTS, 6, B_LOW, B_HIGH, PATH_GRAPH_CAP).expect("survey runs");
    let elapsed = start.elapsed();
    let max = |f: fn(&polymatch::sim::RequiredWthRow) -> u64| rows.iter().map(f).max().unwrap_or(0);
    let amp = max(|r| r.amplified_high);
    let high = max(|r| r.plain_high);
    let low = max(|r| r.plain_low);
    let largest = rows.iter().map(|r| r.order).max().unwrap_or(0);
    let pass = amp > high
        && high > low
        && amp as f64 >= AMPLIFIED_RATIO * high as f64
        && high as f64 >= PRECISION_RATIO * low as f64
        && elapsed < SURVEY_BUDGET;
    r.line(
        6,
        pass,
        format!(
            "maxima over {SHOTS} shots (n<={largest}): amplified/b{B_HIGH} {amp}, plain/b{B_HIGH} {high}, plain/b{B_LOW} {low}; ratios {:.1}x and {:.1}x; {:.1}s",
            amp as f64 / high.max(1) as f64,
            high as f64 / low.max(1) as f64,
            elapsed.as_secs_f64()
        ),
    );
}

/// `later` exceeds `earlier` by more than the combined slack.
fn significantly_above(later: &SweepPoint, earlier: &SweepPoint) -> bool {
    let slack = SIGMAS * (later.stderr().powi(2) + earlier.stderr().powi(2)).sqrt();
    later.fraction() > earlier.fraction() + slack
}

fn criterion_7(r: &mut Report, nm: &NoiseModel) {
    let start = Instant::now();
    let cfg = ThresholdSweepConfig {
        shots: SHOTS,
        seed: 7,
        b_low: B_LOW,
        b_high: B_HIGH,
        ..Default::default()
    };
    let res = threshold_sweep(nm, &cfg).expect("threshold sweep runs");
    let mut increases = 0;
    let mut strict_increases = 0;
    for method in METHODS {
        for &w in &cfg.w_th_list {
            for pair in cfg.k_multipliers.windows(2) {
                let a = res.threshold_point(method, pair[0], w).unwrap();
                let b = res.threshold_point(method, pair[1], w).unwrap();
                if significantly_above(b, a) {
                    increases += 1;
                }
                if b.failures > a.failures {
                    strict_increases += 1;
                }
            }
        }
    }
    let headline = res.threshold_point("extended", HEADLINE_K, HEADLINE_W_TH).unwrap();
    let proxy = res.logical_proxy().unwrap();
    let excluded = res.get("excluded", 0).unwrap();
    let pass = increases == 0 && headline.fraction() < proxy.fraction();
    r.line(
        7,
        pass,
        format!(
            "{SHOTS} shots ({} beyond n={PATH_GRAPH_CAP} excluded): {increases} increases in K beyond {SIGMAS}σ ({strict_increases} raw); extended K={HEADLINE_K}·W_max w_th={HEADLINE_W_TH}: {:.2e} vs logical proxy {:.2e}; {:.1}s",
            excluded.failures,
            headline.fraction(),
            proxy.fraction(),
            start.elapsed().as_secs_f64()
        ),
    );
}

fn criterion_8(r: &mut Report, nm: &NoiseModel) {
    let g = build_surface_detector_graph(nm).unwrap();
    let cfg = PrecisionSweepConfig {
        b_values: (2..=B_MAX).collect(),
        shots: SHOTS,
        seed: 8,
    };
    let res = precision_sweep(&g, &cfg).expect("precision sweep runs");
    let points: Vec<&SweepPoint> = cfg.b_values.iter().map(|&b| res.get("b", b as u64).unwrap()).collect();
    let increases = points.windows(2).filter(|p| significantly_above(p[1], p[0])).count();
    let zero_at = points
        .iter()
        .find(|p| p.fraction() <= SIGMAS * p.stderr())
        .map(|p| p.value);
    let fractions: Vec<String> = points.iter().map(|p| format!("b{}={:.2e}", p.value, p.fraction())).collect();
    r.line(
        8,
        increases == 0 && zero_at.is_some(),
        format!(
            "{} shots: {increases} increases in b beyond {SIGMAS}σ; zero within {SIGMAS}σ from b={}; {}",
            points[0].trials,
            zero_at.map_or("none".into(), |b| b.to_string()),
            fractions.join(" ")
        ),
    );
}

fn cli_run(dir: &Path, run: usize, threads: &str, name: &str, args: &[&str]) -> Vec<u8> {
    let out = dir.join(format!("{name}-{run}.out"));
    let status = Command::new(env!("CARGO_BIN_EXE_polymatch"))
        .args(args)
        .arg("--out")
        .arg(&out)
        .env("POLYMATCH_THREADS", threads)
        .status()
        .expect("cli starts");
    assert!(status.success(), "{name} exited with {status}");
    std::fs::read(out).unwrap()
}

fn criterion_9(r: &mut Report) {
    let dir = tempfile::tempdir().unwrap();
    let sweeps: [(&str, &[&str]); 4] = [
        ("precision", &["sweep-precision", "--d", "3", "--p", "0.02", "--shots", "2000", "--seed", "9"]),
        ("threshold", &["sweep-threshold", "--d", "3", "--p", "0.02", "--shots", "300", "--seed", "9"]),
        ("required", &["required-wth", "--d", "3", "--p", "0.02", "--shots", "2000", "--seed", "9"]),
        ("oracle", &["oracle-check", "--n-max", "8", "--cases", "60", "--seed", "9"]),
    ];
    let mut identical = 0;
    for (name, args) in sweeps {
        let runs: Vec<Vec<u8>> = ["1", "1", "4"]
            .iter()
            .enumerate()
            .map(|(run, t)| cli_run(dir.path(), run, t, name, args))
            .collect();
        if runs.iter().all(|x| x == &runs[0]) && !runs[0].is_empty() {
            identical += 1;
        }
    }
    r.line(
        9,
        identical == sweeps.len(),
        format!("{identical}/{} CLI sweeps byte-identical across repeated runs with POLYMATCH_THREADS=1 and 4", sweeps.len()),
    );
}

fn main() {
    let mut r = Report::default();
    criterion_1(&mut r);
    criteria_2_3_5(&mut r);
    criterion_4(&mut r);
    let nm = NoiseModel::new(DISTANCE, PHYSICAL_P).unwrap();
    criterion_6(&mut r, &nm);
    criterion_7(&mut r, &nm);
    criterion_8(&mut r, &nm);
    criterion_9(&mut r);
    let failed = r.finish();
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
