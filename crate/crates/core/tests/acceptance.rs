//! Acceptance run: one PASS/FAIL line per criterion, then a determinism
//! re-run that compares the serialized reports byte for byte.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rankgeo::classify;
use rankgeo::constructions::{self, SearchBudget, SearchOutcome};
use rankgeo::io::{self, CodeDocument, SystemDocument};
use rankgeo::verify::{self, brute_force_min_distance, SuiteParams, SuiteReport};
use rankgeo::{Budget, DualCode, Elem, FieldTower, Mat, RankMetricCode};
use serde_json::{json, Value};

fn budget() -> Budget {
    Budget::default()
}

struct Outcome {
    id: usize,
    title: &'static str,
    passed: bool,
    /// Deterministic content only; timings are kept apart.
    report: Value,
    elapsed: Duration,
    limit: Option<Duration>,
}

/// Accumulates named boolean checks for one criterion.
#[derive(Default)]
struct Checks {
    items: Vec<(String, bool)>,
}

impl Checks {
    fn check(&mut self, name: impl Into<String>, holds: bool) {
        self.items.push((name.into(), holds));
    }

    fn passed(&self) -> bool {
        self.items.iter().all(|(_, ok)| *ok)
    }

    fn failed(&self) -> Vec<&str> {
        self.items.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect()
    }

    fn to_json(&self) -> Value {
        json!(self.items.iter().map(|(n, ok)| json!({"check": n, "holds": ok})).collect::<Vec<_>>())
    }
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn load_code(name: &str) -> RankMetricCode {
    let text = std::fs::read_to_string(data(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"));
    io::parse::<CodeDocument>(&text).and_then(|d| d.to_code()).unwrap_or_else(|e| panic!("loading {name}: {e}"))
}

fn pw(t: &FieldTower, i: i64) -> Elem {
    if i < 0 {
        Elem::ZERO
    } else {
        t.pow(t.generator(), i).unwrap()
    }
}

fn mat(t: &FieldTower, rows: &[&[i64]]) -> Mat {
    Mat::from_rows(rows.iter().map(|r| r.iter().map(|&i| pw(t, i)).collect()).collect()).unwrap()
}

fn profile(c: &RankMetricCode) -> Option<Vec<usize>> {
    c.weights(budget()).ok().map(|p| p.0)
}

fn dual_code(c: &RankMetricCode) -> Option<RankMetricCode> {
    match c.dual() {
        DualCode::Code(h) => Some(h),
        DualCode::Zero { .. } => None,
    }
}

fn four_two_code(ck: &mut Checks) {
    let c = load_code("example215.json");
    let t = c.tower().clone();
    ck.check("d = 2", c.min_rank_distance(budget()).ok() == Some(2));
    ck.check("profile (2,4)", profile(&c) == Some(vec![2, 4]));
    let h = dual_code(&c).expect("k < n");
    let stated = RankMetricCode::new(t.clone(), mat(&t, &[&[1, -1, 0, -1], &[-1, 2, -1, 0]])).unwrap();
    ck.check("dual generated by the stated parity-check matrix", h.same_code(&stated));
    let u = c.system().unwrap();
    ck.check("flattened dual system equals U", u.rank_metric_dual(budget()).is_ok_and(|v| v.same_subspace(&u)));
    let dual_profile = profile(&h);
    ck.check("dual profile (2,4)", dual_profile == Some(vec![2, 4]));
    let reflected: Option<Vec<usize>> = dual_profile.map(|p| {
        let mut r: Vec<usize> = p.iter().map(|d| c.n() + 1 - d).collect();
        r.sort_unstable();
        r
    });
    ck.check("Wei sets {2,4} and {1,3}", profile(&c) == Some(vec![2, 4]) && reflected == Some(vec![1, 3]));
}

fn criterion_1() -> Checks {
    let mut ck = Checks::default();
    four_two_code(&mut ck);
    ck
}

fn criterion_2() -> Checks {
    let mut ck = Checks::default();
    let c = load_code("example310.json");
    ck.check("d = 2", c.min_rank_distance(budget()).ok() == Some(2));
    ck.check("d_2 = 5", profile(&c).and_then(|p| p.get(1).copied()) == Some(5));
    let h = dual_code(&c).expect("k < n");
    ck.check("dual profile (2,3,5)", profile(&h) == Some(vec![2, 3, 5]));
    let u = c.system().unwrap();
    ck.check("U is (1,3)-evasive", u.is_evasive(1, 3, budget()).unwrap_or(false));
    ck.check("U is not (1,2)-evasive", !u.is_evasive(1, 2, budget()).unwrap_or(true));
    let ud = u.rank_metric_dual(budget()).unwrap();
    ck.check("dual system is (1,2)-evasive", ud.is_evasive(1, 2, budget()).unwrap_or(false));
    ck.check("dual system is (2,3)-evasive", ud.is_evasive(2, 3, budget()).unwrap_or(false));
    ck
}

fn all_three_near_mrd(c: &RankMetricCode) -> bool {
    classify::is_near_mrd(c, budget()).is_ok_and(|v| v.near_mrd && v.by_profile && v.by_dual_distance && v.by_geometry)
}

fn criterion_3() -> Checks {
    let mut ck = Checks::default();
    ck.check("[4,2]_{8/2} code near MRD by all three criteria", all_three_near_mrd(&load_code("example215.json")));
    let t = Arc::new(FieldTower::new(2, 1, 4).unwrap());
    let u = constructions::near_mrd_system(t.clone(), 3, budget()).unwrap();
    let basis = mat(&t, &[&[0, -1, -1], &[0, 0, 0], &[1, 2, 4], &[2, 4, 8], &[3, 6, 12]]);
    let generator = mat(&t, &[&[0, 0, 1, 2, 3], &[-1, 0, 2, 4, 6], &[-1, 0, 4, 8, 12]]);
    ck.check("[5,3]_{16/2} construction basis verbatim", u.basis() == &basis);
    ck.check("[5,3]_{16/2} construction generator verbatim", u.code().generator() == &generator);
    ck.check("[5,3]_{16/2} code near MRD by all three criteria", all_three_near_mrd(&u.code()));
    ck
}

fn suite_ok(r: &SuiteReport) -> bool {
    r.passed() && r.complete && r.instances > 0
}

fn suite_summary(r: &SuiteReport) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

/// Codes shared by criteria 4 to 9.
struct Corpus {
    two_dim: Vec<RankMetricCode>,
    random: Vec<RankMetricCode>,
    gabidulin: Vec<RankMetricCode>,
    near_mrd: Vec<RankMetricCode>,
}

fn two_dim_params() -> SuiteParams {
    SuiteParams { q: vec![2], m_min: 3, m_max: 3, k_min: 2, k_max: 2, n_min: 3, n_max: 5, ..SuiteParams::default() }
}

fn random_params() -> SuiteParams {
    SuiteParams { q: vec![2, 3], m_min: 1, m_max: 4, k_min: 1, k_max: 3, n_min: 1, n_max: 6, random: Some(100), seed: 0, ..SuiteParams::default() }
}

fn criterion_4(corpus: &Corpus) -> (bool, Value) {
    let suite = verify::find_suite("evasive-weights").unwrap();
    let r = suite.run_codes(&two_dim_params(), &corpus.two_dim);
    (suite_ok(&r), suite_summary(&r))
}

fn combined(corpus: &Corpus) -> Vec<RankMetricCode> {
    corpus.two_dim.iter().chain(&corpus.random).cloned().collect()
}

fn criterion_5(codes: &[RankMetricCode]) -> (bool, Value) {
    let suite = verify::find_suite("weight-algorithms").unwrap();
    let r = suite.run_codes(&random_params(), codes);
    (suite_ok(&r), suite_summary(&r))
}

fn criterion_6(codes: &[RankMetricCode]) -> (bool, Value) {
    let suite = verify::find_suite("weight-hierarchy").unwrap();
    let r = suite.run_codes(&random_params(), codes);
    (suite_ok(&r), suite_summary(&r))
}

fn criterion_7(corpus: &mut Corpus) -> Checks {
    let mut ck = Checks::default();
    for m in [3u32, 4] {
        let t = Arc::new(FieldTower::new(2, 1, m).unwrap());
        for n in 1..=m as usize {
            for k in 1..=n {
                let c = constructions::gabidulin(t.clone(), n, k, None).unwrap();
                let tag = format!("m={m},n={n},k={k}");
                let d = c.min_rank_distance(budget()).ok();
                ck.check(format!("{tag}: d = n-k+1"), d == Some(n - k + 1));
                ck.check(format!("{tag}: brute-force d = n-k+1"), brute_force_min_distance(&c) == n - k + 1);
                ck.check(format!("{tag}: MRD"), classify::is_mrd(&c, budget()).unwrap_or(false));
                ck.check(format!("{tag}: 1-MRD"), classify::is_s_mrd(&c, 1, budget()).unwrap_or(false));
                if n == m as usize {
                    let s = c.system().unwrap().hyperplane_spectrum(budget()).unwrap();
                    ck.check(format!("{tag}: hyperplane intersections within [0, k-1]"), s.max() < k);
                }
                corpus.gabidulin.push(c);
            }
        }
    }
    ck
}

fn criterion_8(corpus: &mut Corpus) -> Checks {
    let mut ck = Checks::default();
    for (q, m, k) in [(2u32, 3u32, 2usize), (2, 3, 3), (2, 4, 3), (2, 4, 4), (3, 3, 2), (2, 5, 3)] {
        let t = Arc::new(FieldTower::for_order(q, m).unwrap());
        let tag = format!("q={q},m={m},k={k}");
        let c = constructions::near_mrd_system(t, k, budget()).unwrap().code();
        ck.check(format!("{tag}: near MRD"), classify::is_near_mrd(&c, budget()).is_ok_and(|v| v.near_mrd));
        ck.check(format!("{tag}: length m+1"), c.n() == m as usize + 1);
        if m as usize != 2 * k - 2 {
            let b = classify::near_mrd_length_bound(k, m as usize).bound;
            ck.check(format!("{tag}: length equals the near-MRD length bound"), b == Some(c.n()));
        }
        corpus.near_mrd.push(c);
    }
    ck
}

fn criterion_9(corpus: &Corpus) -> (Checks, Value) {
    let mut ck = Checks::default();
    let suite = verify::find_suite("rank-defect").unwrap();
    let codes: Vec<RankMetricCode> = [&corpus.two_dim, &corpus.random, &corpus.gabidulin, &corpus.near_mrd].into_iter().flatten().cloned().collect();
    let r = suite.run_codes(&random_params(), &codes);
    ck.check("defect formula and Rdef >= 0 on criteria 4-8 codes", suite_ok(&r));
    let c = load_code("example215.json");
    ck.check("[4,2]_{8/2} code is quasi-MRD", classify::is_quasi_mrd(&c, budget()).unwrap_or(false));
    ck.check("[4,2]_{8/2} code has defect 0", classify::code_rank_defect(&c, budget()).ok() == Some(0));
    let (k, m, h) = (3, 5, 1);
    let split = ((k * m) as i64, ((h + 2) * classify::scattered_dim_bound(k, m, h)) as i64);
    ck.check("condition value for (3,5,1) is 15 - 21 = -6", split == (15, 21) && classify::quasi_condition_value(k, m, h) == -6);
    (ck, suite_summary(&r))
}

fn criterion_10() -> (Checks, Value) {
    let mut ck = Checks::default();
    let t = Arc::new(FieldTower::new(2, 1, 4).unwrap());
    let outcome = constructions::search_scattered(t.clone(), 2, 1, 4, &SearchBudget::default(), budget()).unwrap();
    let mut report = json!({});
    match &outcome {
        SearchOutcome::Found { system, candidates } => {
            ck.check("found an [4,2]_{16/2} system", system.n() == 4 && system.k() == 2);
            ck.check("found system is scattered", system.is_h_scattered(1, budget()).unwrap_or(false));
            ck.check("dimension is km/2", system.n() == classify::scattered_dim_bound(2, 4, 1));
            report = json!({"candidates": candidates, "system": SystemDocument::from_system(system)});
        }
        _ => ck.check("found an [4,2]_{16/2} system", false),
    }
    let start = Instant::now();
    let beyond = constructions::search_scattered(t, 2, 1, 5, &SearchBudget::default(), budget()).unwrap();
    ck.check("n = 5 above the bound is excluded", matches!(beyond, SearchOutcome::Excluded(_)));
    ck.check("exclusion is immediate", start.elapsed() < Duration::from_millis(100));
    report["beyond"] = json!(matches!(beyond, SearchOutcome::Excluded(_)));
    (ck, report)
}

fn outcome(id: usize, title: &'static str, limit: Option<u64>, f: impl FnOnce() -> (bool, Value)) -> Outcome {
    let start = Instant::now();
    let (passed, report) = f();
    Outcome { id, title, passed, report, elapsed: start.elapsed(), limit: limit.map(Duration::from_secs) }
}

fn from_checks(ck: Checks) -> (bool, Value) {
    (ck.passed(), json!({"checks": ck.to_json(), "failed": ck.failed()}))
}

fn run_all() -> Vec<Outcome> {
    let mut out = vec![
        outcome(1, "[4,2]_{8/2} worked example", Some(1), || from_checks(criterion_1())),
        outcome(2, "[5,2]_{8/2} worked example", Some(1), || from_checks(criterion_2())),
        outcome(3, "near-MRD worked examples", Some(5), || from_checks(criterion_3())),
    ];
    let start = Instant::now();
    let two_dim = verify::instances(verify::find_suite("evasive-weights").unwrap(), &two_dim_params()).unwrap();
    let random = verify::instances(verify::find_suite("weight-algorithms").unwrap(), &random_params()).unwrap();
    let mut corpus = Corpus { two_dim, random, gabidulin: Vec::new(), near_mrd: Vec::new() };
    let generation = start.elapsed();
    let mut c4 = outcome(4, "evasiveness and generalized weights, every [n,2]_{8/2} code, n = 3..5", Some(600), || criterion_4(&corpus));
    c4.elapsed += generation;
    out.push(c4);
    let codes = combined(&corpus);
    out.push(outcome(5, "geometric and Galois-closed weight algorithms agree", None, || criterion_5(&codes)));
    out.push(outcome(6, "weight monotonicity and Wei duality", None, || criterion_6(&codes)));
    drop(codes);
    out.push(outcome(7, "Gabidulin codes are MRD with the hyperplane window", Some(120), || from_checks(criterion_7(&mut corpus))));
    out.push(outcome(8, "near-MRD systems of length m+1", Some(300), || from_checks(criterion_8(&mut corpus))));
    out.push(outcome(9, "Singleton rank defect", None, || {
        let (ck, suite) = criterion_9(&corpus);
        let (passed, mut report) = from_checks(ck);
        report["suite"] = suite;
        (passed, report)
    }));
    out.push(outcome(10, "search for a maximum scattered [4,2]_{16/2} system", Some(120), || {
        let (ck, found) = criterion_10();
        let (passed, mut report) = from_checks(ck);
        report["search"] = found;
        (passed, report)
    }));
    out
}

fn serialize(outcomes: &[Outcome]) -> String {
    let all: Vec<Value> = outcomes.iter().map(|o| json!({"criterion": o.id, "passed": o.passed, "report": o.report})).collect();
    serde_json::to_string(&all).expect("reports serialize")
}

fn brief(report: &Value) -> String {
    if let Some(failed) = report.get("failed").and_then(Value::as_array) {
        if !failed.is_empty() {
            return format!("failed: {}", failed.iter().filter_map(Value::as_str).collect::<Vec<_>>().join("; "));
        }
        let n = report["checks"].as_array().map_or(0, Vec::len);
        return match report.get("suite") {
            Some(s) => format!("{n} checks, suite {} instances / {} checks", s["instances"], s["checks"]),
            None => format!("{n} checks"),
        };
    }
    format!(
        "{} instances, {} skipped, {} checks, {} failures{}",
        report["instances"],
        report["skipped"],
        report["checks"],
        report["failures"],
        if report["complete"] == json!(true) { String::new() } else { format!(", incomplete: {}", report["incomplete_reason"]) }
    )
}

fn main() {
    // `cargo test` passes filter arguments; this binary always runs everything.
    let first = run_all();
    let mut all_passed = true;
    for o in &first {
        let in_time = o.limit.is_none_or(|l| o.elapsed <= l);
        let passed = o.passed && in_time;
        all_passed &= passed;
        let limit = o.limit.map_or(String::new(), |l| format!(" / limit {}s", l.as_secs()));
        let late = if in_time { "" } else { " over time limit" };
        println!(
            "criterion {:>2}: {} {} ({}) [{:.1}s{limit}]{late}",
            o.id,
            if passed { "PASS" } else { "FAIL" },
            o.title,
            brief(&o.report),
            o.elapsed.as_secs_f64()
        );
    }

    let again = run_all();
    let identical = serialize(&first) == serialize(&again);
    all_passed &= identical;
    println!(
        "criterion 11: {} re-running criteria 1-10 gives byte-identical reports ({} bytes)",
        if identical { "PASS" } else { "FAIL" },
        serialize(&first).len()
    );

    if !all_passed {
        std::process::exit(1);
    }
}
