//! Data-driven verification suites.
//!
//! A suite is a named predicate over codes plus a default instance range.
//! Instances are either every RREF generator matrix in a parameter box or a
//! seeded random sample; the report counts checks and failures and keeps the
//! first counterexample in full.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classify;
use crate::codes::{rank_weight, DualCode, RankMetricCode};
use crate::constructions;
use crate::error::{Error, ErrorKind, Result};
use crate::fields::{Elem, FieldTower};
use crate::io::CodeDocument;
use crate::linalg::{self, Budget, Mat, SubspaceIter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Every RREF generator matrix in the parameter box.
    Generators,
    /// Gabidulin codes of every length n <= m and dimension k <= n.
    Gabidulin,
    /// Codes of the near-MRD systems for every m >= k >= 2 in the box.
    NearMrdSystems,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub source: Source,
    /// Base field orders.
    pub q: Vec<u32>,
    pub m_min: usize,
    pub m_max: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub n_min: usize,
    pub n_max: usize,
    /// Draw this many random codes instead of enumerating.
    pub random: Option<usize>,
    pub seed: u64,
    pub budget: u64,
    /// Subtracted from the bound tested by the scattered-bound suite; nonzero
    /// values deliberately break it to exercise the failure path.
    #[serde(skip_serializing_if = "is_zero", default)]
    pub bound_offset: i64,
}

fn is_zero(x: &i64) -> bool {
    *x == 0
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            source: Source::Generators,
            q: vec![2],
            m_min: 3,
            m_max: 3,
            k_min: 1,
            k_max: 2,
            n_min: 1,
            n_max: 4,
            random: None,
            seed: 0,
            budget: linalg::DEFAULT_BUDGET,
            bound_offset: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Absent for checks on parameters alone.
    pub code: Option<CodeDocument>,
    pub check: String,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub instances: u64,
    pub skipped: u64,
    pub checks: u64,
    pub failures: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub description: String,
    pub params: SuiteParams,
    pub instances: u64,
    pub skipped: u64,
    pub checks: u64,
    pub failures: u64,
    pub complete: bool,
    pub incomplete_reason: Option<String>,
    /// Keyed by "q=..,m=..,k=..,n=..".
    pub groups: BTreeMap<String, GroupSummary>,
    pub first_counterexample: Option<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Collects check outcomes for one instance, materializing details only
/// for the first failure.
#[derive(Default)]
pub struct Checker {
    pub checks: u64,
    pub failures: u64,
    pub first: Option<(String, Value, Value)>,
}

impl Checker {
    pub fn check(&mut self, holds: bool, detail: impl FnOnce() -> (String, Value, Value)) {
        self.checks += 1;
        if !holds {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(detail());
            }
        }
    }

    fn fail_with(&mut self, e: &Error) {
        self.check(false, || ("evaluation error".into(), json!(e.to_string()), Value::Null));
    }
}

/// What happened on one instance.
#[derive(Default)]
pub struct InstanceOutcome {
    pub applicable: bool,
    pub checker: Checker,
    pub resource_error: Option<String>,
}

type CheckFn = fn(&RankMetricCode, &SuiteParams, &mut Checker) -> Result<bool>;

pub struct Suite {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub description: &'static str,
    pub needs_nondegenerate: bool,
    defaults: fn() -> SuiteParams,
    check: CheckFn,
    parameter_checks: Option<fn(&mut Checker)>,
}

impl Suite {
    pub fn default_params(&self) -> SuiteParams {
        (self.defaults)()
    }

    /// Runs the suite's predicate on a single code.
    pub fn run_on(&self, code: &RankMetricCode, params: &SuiteParams) -> InstanceOutcome {
        let mut out = InstanceOutcome::default();
        if self.needs_nondegenerate && !code.is_nondegenerate() {
            return out;
        }
        match (self.check)(code, params, &mut out.checker) {
            Ok(applicable) => out.applicable = applicable,
            Err(e) if e.kind() == ErrorKind::Resource => out.resource_error = Some(e.to_string()),
            Err(e) => {
                out.applicable = true;
                out.checker.fail_with(&e);
            }
        }
        out
    }

    pub fn run(&self, params: &SuiteParams) -> Result<SuiteReport> {
        Ok(self.run_codes(params, &instances(self, params)?))
    }

    /// Runs the suite on a caller-supplied instance list; `params` supplies
    /// the budget and seed and is echoed in the report.
    pub fn run_codes(&self, params: &SuiteParams, instances: &[RankMetricCode]) -> SuiteReport {
        let mut report = SuiteReport {
            suite: self.name.to_string(),
            description: self.description.to_string(),
            params: params.clone(),
            instances: 0,
            skipped: 0,
            checks: 0,
            failures: 0,
            complete: true,
            incomplete_reason: None,
            groups: BTreeMap::new(),
            first_counterexample: None,
        };
        if let Some(pc) = self.parameter_checks {
            let mut ck = Checker::default();
            pc(&mut ck);
            report.checks += ck.checks;
            report.failures += ck.failures;
            if let Some((check, lhs, rhs)) = ck.first {
                report.first_counterexample = Some(Counterexample { code: None, check, lhs, rhs });
            }
        }
        let outcomes = map_instances(self, params, instances);
        for (code, out) in instances.iter().zip(outcomes) {
            let group = report
                .groups
                .entry(format!("q={},m={},k={},n={}", code.tower().q(), code.m(), code.k(), code.n()))
                .or_default();
            group.instances += 1;
            report.instances += 1;
            if let Some(reason) = out.resource_error {
                report.complete = false;
                report.incomplete_reason.get_or_insert(reason);
                group.skipped += 1;
                report.skipped += 1;
                continue;
            }
            if !out.applicable {
                group.skipped += 1;
                report.skipped += 1;
            }
            group.checks += out.checker.checks;
            group.failures += out.checker.failures;
            report.checks += out.checker.checks;
            report.failures += out.checker.failures;
            if let (None, Some((check, lhs, rhs))) = (&report.first_counterexample, out.checker.first) {
                report.first_counterexample = Some(Counterexample { code: Some(CodeDocument::from_code(code)), check, lhs, rhs });
            }
        }
        report
    }
}

fn map_instances(suite: &Suite, params: &SuiteParams, codes: &[RankMetricCode]) -> Vec<InstanceOutcome> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        codes.par_iter().map(|c| suite.run_on(c, params)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    codes.iter().map(|c| suite.run_on(c, params)).collect()
}

fn towers(params: &SuiteParams) -> Result<Vec<Arc<FieldTower>>> {
    let mut out = Vec::new();
    for &q in &params.q {
        for m in params.m_min..=params.m_max {
            out.push(Arc::new(FieldTower::for_order(q, m as u32)?));
        }
    }
    Ok(out)
}

/// The instance list described by `params`.
pub fn instances(suite: &Suite, params: &SuiteParams) -> Result<Vec<RankMetricCode>> {
    let budget = Budget(params.budget);
    if params.k_min == 0 || params.k_min > params.k_max || params.n_min > params.n_max || params.m_min == 0 || params.m_min > params.m_max {
        return Err(Error::Precondition("empty or invalid parameter ranges".into()));
    }
    if params.q.is_empty() {
        return Err(Error::Precondition("no base field given".into()));
    }
    let towers = towers(params)?;
    if let Some(count) = params.random {
        return random_codes(&towers, params, count, suite.needs_nondegenerate);
    }
    let mut out = Vec::new();
    match params.source {
        Source::Generators => {
            let mut total = 0u128;
            for t in &towers {
                for k in params.k_min..=params.k_max {
                    for n in params.n_min.max(k)..=params.n_max {
                        total = total.saturating_add(SubspaceIter::new(n, k, t.order()).total());
                    }
                }
            }
            budget.check(total)?;
            for t in &towers {
                for k in params.k_min..=params.k_max {
                    for n in params.n_min.max(k)..=params.n_max {
                        for g in SubspaceIter::new(n, k, t.order()) {
                            out.push(RankMetricCode::new(t.clone(), g)?);
                        }
                    }
                }
            }
        }
        Source::Gabidulin => {
            for t in &towers {
                for n in params.n_min.max(1)..=params.n_max.min(t.m()) {
                    for k in params.k_min..=params.k_max.min(n) {
                        out.push(constructions::gabidulin(t.clone(), n, k, None)?);
                    }
                }
            }
        }
        Source::NearMrdSystems => {
            for t in &towers {
                for k in params.k_min.max(2)..=params.k_max.min(t.m()) {
                    out.push(constructions::near_mrd_system(t.clone(), k, budget)?.code());
                }
            }
        }
    }
    Ok(out)
}

/// Uniformly random full-rank generators with uniformly drawn parameters.
pub fn random_codes(towers: &[Arc<FieldTower>], params: &SuiteParams, count: usize, nondegenerate: bool) -> Result<Vec<RankMetricCode>> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0u64;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * count as u64 + 1000 {
            return Err(Error::Precondition("could not draw enough codes in the parameter box".into()));
        }
        let t = &towers[rng.gen_range(0..towers.len())];
        let k = rng.gen_range(params.k_min..=params.k_max);
        let lo = params.n_min.max(k);
        if lo > params.n_max {
            continue;
        }
        let n = rng.gen_range(lo..=params.n_max);
        if nondegenerate && n > k * t.m() {
            continue;
        }
        if let Some(c) = random_code(t, k, n, nondegenerate, &mut rng) {
            out.push(c);
        }
    }
    Ok(out)
}

/// A random [n,k] code over `t`, or `None` after repeated unlucky draws.
pub fn random_code(t: &Arc<FieldTower>, k: usize, n: usize, nondegenerate: bool, rng: &mut impl Rng) -> Option<RankMetricCode> {
    for _ in 0..64 {
        let data = (0..k * n).map(|_| Elem(rng.gen_range(0..t.order()))).collect();
        let g = Mat::from_vec(k, n, data).ok()?;
        if let Ok(c) = RankMetricCode::new(t.clone(), g) {
            if !nondegenerate || c.is_nondegenerate() {
                return Some(c);
            }
        }
    }
    None
}

/// Minimum rank distance by enumerating every nonzero codeword.
pub fn brute_force_min_distance(code: &RankMetricCode) -> usize {
    let t = code.tower();
    let k = code.k();
    let order = t.order();
    let mut msg = vec![Elem::ZERO; k];
    let mut best = usize::MAX;
    loop {
        // odometer increment
        let mut i = 0;
        while i < k {
            msg[i].0 += 1;
            if msg[i].0 < order {
                break;
            }
            msg[i].0 = 0;
            i += 1;
        }
        if i == k {
            break;
        }
        let w = rank_weight(t, &linalg::vec_mat(t, &msg, code.generator()));
        best = best.min(w);
    }
    best
}

/// Number of codewords, or `None` when it does not fit in 64 bits.
pub fn codeword_count(code: &RankMetricCode) -> Option<u64> {
    (code.tower().order() as u64).checked_pow(code.k() as u32)
}

fn dual_profile(code: &RankMetricCode, budget: Budget) -> Result<Option<Vec<usize>>> {
    match code.dual() {
        DualCode::Code(d) if d.is_nondegenerate() => Ok(Some(d.weights(budget)?.0)),
        DualCode::Code(_) => Ok(None),
        DualCode::Zero { .. } => Ok(Some(Vec::new())),
    }
}

/// d_j with d_j = 0 for j <= 0 and d_j = ∞ past the dimension.
fn weight_or_extreme(profile: &[usize], j: i64) -> u64 {
    if j <= 0 {
        0
    } else if j as usize > profile.len() {
        u64::MAX
    } else {
        profile[j as usize - 1] as u64
    }
}

fn check_hierarchy(c: &RankMetricCode, p: &SuiteParams, ck: &mut Checker) -> Result<bool> {
    let budget = Budget(p.budget);
    let profile = c.weights(budget)?.0;
    let n = c.n();
    ck.check(profile.windows(2).all(|w| w[0] < w[1]), || ("strictly increasing".into(), json!(profile), Value::Null));
    ck.check(profile.last() == Some(&n), || ("last weight is n".into(), json!(profile.last()), json!(n)));
    if let Some(dual) = dual_profile(c, budget)? {
        let mut all: Vec<usize> = profile.iter().copied().chain(dual.iter().map(|&d| n + 1 - d)).collect();
        all.sort_unstable();
        let expected: Vec<usize> = (1..=n).collect();
        ck.check(all == expected, || ("Wei duality partitions 1..n".into(), json!({"code": profile, "dual": dual}), json!(expected)));
    }
    Ok(true)
}

fn check_algorithms(c: &RankMetricCode, p: &SuiteParams, ck: &mut Checker) -> Result<bool> {
    let budget = Budget(p.budget);
    let geo = c.generalized_weights_geometric(budget)?;
    let gal = c.generalized_weights_galois(budget)?;
    ck.check(geo == gal, || ("geometric = Galois-closed".into(), json!(geo.0), json!(gal.0)));
    Ok(true)
}

fn check_weight_bounds(c: &RankMetricCode, p: &SuiteParams, ck: &mut Checker) -> Result<bool> {
    let budget = Budget(p.budget);
    let (n, k, m) = (c.n(), c.k(), c.m());
    let d = c.min_rank_distance(budget)?;
    ck.check(k * m <= (m * (n + 1 - d)).min(n * (m + 1 - d)), || ("Singleton-like bound".into(), json!(k * m), json!([m * (n + 1 - d), n * (m + 1 - d)])));
    if c.is_nondegenerate() {
        let profile = c.weights(budget)?;
        for s in 1..=k {
            let ds = profile.get(s).unwrap();
            let bound = classify::gen_weight_bound(n, k, m, s);
            ck.check(ds <= bound, || (format!("d_{s} <= bound"), json!(ds), json!(bound)));
        }
    }
    Ok(true)
}

fn check_codeword_hyperplane(c: &RankMetricCode, p: &SuiteParams, ck: &mut Checker) -> Result<bool> {
    let t = c.tower();
    let u = c.system()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed ^ hash_code(c));
    for _ in 0..2 {
        let mut v: Vec<Elem> = (0..c.k()).map(|_| Elem(rng.gen_range(0..t.order()))).collect();
        if v.iter().all(|x| x.is_zero()) {
            v[0] = Elem::ONE;
        }
        let weight = rank_weight(t, &c.codeword(&v)?);
        let hyperplane = linalg::kernel(t, &Mat::from_rows(vec![v.clone()])?);
        let meet = u.intersection_dim_explicit(&hyperplane)?;
        ck.check(weight == c.n() - meet, || ("rank weight = n - dim(U ∩ ker v)".into(), json!(weight), json!(c.n() - meet)));
    }
    Ok(true)
}

fn hash_code(c: &RankMetricCode) -> u64 {
    c.generator().entries().iter().fold(0xcbf29ce484222325u64, |h, x| (h ^ x.0 as u64).wrapping_mul(0x100000001b3))
}

fn check_evasive_weights(c: &RankMetricCode, p: &SuiteParams, ck: &mut Checker) -> Result<bool> {
    let budget = Budget(p.budget);
    let (n, k) = (c.n(), c.k());
    let u = c.system()?;
    let profile = c.weights(budget)?.0;
    let dual = dual_profile(c, budget)?;
    for h in 0..k {
        let mut evasive = Vec::with_capacity(n + 1);
        for r in 0..=n {
            evasive.push(u.is_evasive(h, r, budget)?);
        }
        let dkh = profile[k - h - 1];
        for r in 0..=n {
            let by_code = dkh + r >= n;
            ck.check(evasive[r] == by_code, || (format!("(h,r)=({h},{r}): evasive iff d_(k-h) >= n-r"), json!(evasive[r]), json!(dkh)));
            if let Some(dual) = &dual {
                let dj = weight_or_extreme(dual, r as i64 - h as i64 + 1);
                let by_dual = dj >= r as u64 + 2;
                ck.check(evasive[r] == by_dual, || (format!("(h,r)=({h},{r}): evasive iff dual d_(r-h+1) >= r+2"), json!(evasive[r]), json!(dual)));
            }
            let not_below = r == 0 || !evasive[r - 1];
            let sharp = evasive[r] && not_below;
            ck.check((dkh + r == n) == sharp, || (format!("(h,r)=({h},{r}): d_(k-h) = n-r iff sharply evasive"), json!(dkh), json!(sharp)));
            if h > 0 && r > 0 && evasive[r] {
                let lower = u.is_evasive(h - 1, r - 1, budget)?;
                ck.check(lower, || (format!("(h,r)=({h},{r}) evasive implies ({},{}) evasive", h - 1, r - 1), json!(true), json!(lower)));
            }
        }
    }
    Ok(true)
}

fn check_scattered_bound(c: &RankMetricCode, p: &SuiteParams, ck: &mut Checker) -> Result<bool> {
    let budget = Budget(p.budget);
    let (n, k, m) = (c.n(), c.k(), c.m());
    let u = c.system()?;
    for h in 0..k {
        for r in h..=n {
            if !u.is_evasive(h, r, budget)? {
                continue;
            }
            let f = classify::evasive_feasible(k, m, h, r, n);
            ck.check(f.feasible, || (format!("(h,r)=({h},{r}) evasive system meets the necessary conditions"), json!(f.violated), Value::Null));
            if r == h && n > k {
                let bound = classify::scattered_dim_bound(k, m, h) as i64 - p.bound_offset;
                ck.check(n as i64 <= bound, || (format!("{h}-scattered: n <= floor(km/(h+1))"), json!(n), json!(bound)));
            }
        }
    }
    Ok(n > k)
}

fn maximum_h(n: usize, k: usize, m: usize) -> Option<usize> {
    (0..k).find(|&h| (h + 1) * n == k * m)
}

fn check_mrd_window(c: &RankMetricCode, p: &SuiteParams, ck: &mut Checker) -> Result<bool> {
    let budget = Budget(p.budget);
    let (n, k, m) = (c.n(), c.k(), c.m());
    let Some(h) = maximum_h(n, k, m) else { return Ok(false) };
    if !classify::is_mrd(c, budget)? {
        return Ok(false);
    }
    let spectrum = c.system()?.hyperplane_spectrum(budget)?;
    let lo = n as i64 - m as i64;
    let hi = lo + h as i64;
    let (min, max) = (spectrum.min() as i64, spectrum.max() as i64);
    ck.check(lo <= min && max <= hi, || ("hyperplane intersections within [n-m, n-m+h]".into(), json!([min, max]), json!([lo, hi])));
    Ok(true)
}

fn check_maximum_scattered_mrd(c: &RankMetricCode, p: &SuiteParams, ck: &mut Checker) -> Result<bool> {
    let budget = Budget(p.budget);
    let Some(h) = maximum_h(c.n(), c.k(), c.m()) else { return Ok(false) };
    let scattered = c.system()?.is_h_scattered(h, budget)?;
    let mrd = classify::is_mrd(c, budget)?;
    ck.check(scattered == mrd, || (format!("maximum {h}-scattered iff MRD"), json!(scattered), json!(mrd)));
    Ok(true)
}

fn check_near_mrd_criteria(c: &RankMetricCode, p: &SuiteParams, ck: &mut Checker) -> Result<bool> {
    let v = classify::is_near_mrd(c, Budget(p.budget))?;
    ck.check(v.by_profile == v.by_dual_distance && v.by_profile == v.by_geometry, || {
        ("near-MRD criteria agree".into(), json!(v), Value::Null)
    });
    Ok(true)
}

fn check_near_mrd_length(c: &RankMetricCode, p: &SuiteParams, ck: &mut Checker) -> Result<bool> {
    let (n, k, m) = (c.n(), c.k(), c.m());
    if !classify::is_near_mrd(c, Budget(p.budget))?.near_mrd {
        return Ok(false);
    }
    let bound = classify::near_mrd_length_bound(k, m);
    ck.check(bound.bound.is_some_and(|b| n <= b), || ("near-MRD code: m >= k and n <= length bound".into(), json!(n), json!(bound)));
    Ok(true)
}

fn near_mrd_parameter_checks(ck: &mut Checker) {
    for k in 1..=12 {
        for m in 1..=40 {
            let b = classify::near_mrd_length_bound(k, m);
            let closed = classify::near_mrd_t_closed_form(k, m);
            ck.check(b.t == closed, || (format!("(k,m)=({k},{m}): t by search = t by root"), json!(b.t), json!(closed)));
            if let Some(x) = b.bound {
                ck.check(x <= b.general_bound, || (format!("(k,m)=({k},{m}): length bound <= general bound"), json!(x), json!(b.general_bound)));
            }
        }
    }
}

fn check_rank_defect(c: &RankMetricCode, p: &SuiteParams, ck: &mut Checker) -> Result<bool> {
    let budget = Budget(p.budget);
    let (n, k, m) = (c.n(), c.k(), c.m());
    let d = c.min_rank_distance(budget)?;
    if codeword_count(c).is_some_and(|x| x <= 1 << 16) {
        let brute = brute_force_min_distance(c);
        ck.check(d == brute, || ("distance by hyperplanes = by codewords".into(), json!(d), json!(brute)));
    }
    let defect = classify::code_rank_defect(c, budget)?;
    let by_hand = m as i64 - (k * m).div_ceil(n) as i64 - d as i64 + 1;
    ck.check(defect == by_hand, || ("Rdef = m - ceil(km/n) - d + 1".into(), json!(defect), json!(by_hand)));
    ck.check(defect >= 0, || ("Rdef >= 0".into(), json!(defect), json!(0)));
    let quasi = classify::is_quasi_mrd(c, budget)?;
    ck.check(quasi == (defect == 0), || ("quasi-MRD iff Rdef = 0".into(), json!(quasi), json!(defect)));
    Ok(true)
}

fn dual_defect(c: &RankMetricCode, budget: Budget) -> Result<Option<i64>> {
    match c.dual() {
        DualCode::Code(d) => Ok(Some(classify::code_rank_defect(&d, budget)?)),
        DualCode::Zero { .. } => Ok(None),
    }
}

fn check_scattered_defect(c: &RankMetricCode, p: &SuiteParams, ck: &mut Checker) -> Result<bool> {
    let budget = Budget(p.budget);
    let (n, k, m) = (c.n(), c.k(), c.m());
    let Some(defect) = dual_defect(c, budget)? else { return Ok(false) };
    let u = c.system()?;
    for h in 0..k {
        let scattered = u.is_h_scattered(h, budget)?;
        let threshold = (k * m / n) as i64 - h as i64 - 1;
        ck.check(scattered == (defect <= threshold), || (format!("{h}-scattered iff Rdef(dual) <= floor(km/n)-h-1"), json!(scattered), json!([defect, threshold])));
    }
    Ok(true)
}

fn check_quasi_maximum(c: &RankMetricCode, p: &SuiteParams, ck: &mut Checker) -> Result<bool> {
    let budget = Budget(p.budget);
    let (n, k, m) = (c.n(), c.k(), c.m());
    let Some(defect) = dual_defect(c, budget)? else { return Ok(false) };
    let u = c.system()?;
    let mut applicable = false;
    for h in 0..k {
        let a = classify::scattered_dim_bound(k, m, h);
        if n != a {
            continue;
        }
        applicable = true;
        let eps = k * m - (h + 1) * a;
        let scattered = u.is_h_scattered(h, budget)?;
        ck.check(scattered == (defect <= (eps / a) as i64), || {
            (format!("quasi-maximum {h}-scattered iff Rdef(dual) <= floor(eps/a)"), json!(scattered), json!([defect, eps, a]))
        });
        if classify::quasi_condition_value(k, m, h) < 0 {
            ck.check(scattered == (defect == 0), || (format!("quasi-maximum {h}-scattered iff dual quasi-MRD"), json!(scattered), json!(defect)));
        }
    }
    Ok(applicable)
}

fn quasi_parameter_checks(ck: &mut Checker) {
    let v = classify::quasi_condition_value(3, 5, 1);
    ck.check(v == -6, || ("condition value for (k,m,h) = (3,5,1)".into(), json!(v), json!(-6)));
    for k in 1..=8 {
        for m in 1..=12 {
            for h in 0..k {
                if (k * m) % (h + 1) == 0 {
                    let v = classify::quasi_condition_value(k, m, h);
                    ck.check(v < 0, || (format!("(k,m,h)=({k},{m},{h}): divisible case satisfies the condition"), json!(v), json!("< 0")));
                }
            }
        }
    }
}

fn defaults_small() -> SuiteParams {
    SuiteParams::default()
}

fn defaults_two_dim() -> SuiteParams {
    SuiteParams { k_min: 2, k_max: 2, n_min: 3, ..SuiteParams::default() }
}

fn defaults_gabidulin() -> SuiteParams {
    SuiteParams { source: Source::Gabidulin, m_min: 3, m_max: 4, k_max: 4, n_max: 4, ..SuiteParams::default() }
}

fn defaults_random() -> SuiteParams {
    SuiteParams { q: vec![2, 3], m_min: 1, m_max: 4, k_max: 3, n_max: 6, random: Some(100), ..SuiteParams::default() }
}

pub static SUITES: &[Suite] = &[
    Suite {
        name: "weight-hierarchy",
        aliases: &["prop-2.9"],
        description: "generalized rank weights strictly increase to n, and code and dual weights partition 1..n after reflection",
        needs_nondegenerate: true,
        defaults: defaults_small,
        check: check_hierarchy,
        parameter_checks: None,
    },
    Suite {
        name: "weight-algorithms",
        aliases: &[],
        description: "generalized rank weights from system intersections agree with those from Galois-closed subspaces",
        needs_nondegenerate: true,
        defaults: defaults_random,
        check: check_algorithms,
        parameter_checks: None,
    },
    Suite {
        name: "weight-bounds",
        aliases: &["prop-2.10"],
        description: "minimum distance obeys the Singleton-like bound and each d_s obeys min{n-k+s, sm, floor(m(n-k)/n)+m(s-1)+1}",
        needs_nondegenerate: false,
        defaults: defaults_small,
        check: check_weight_bounds,
        parameter_checks: None,
    },
    Suite {
        name: "codeword-hyperplane",
        aliases: &["eq-2"],
        description: "the rank weight of vG equals n minus dim(U ∩ ker v), with the intersection computed explicitly",
        needs_nondegenerate: true,
        defaults: defaults_small,
        check: check_codeword_hyperplane,
        parameter_checks: None,
    },
    Suite {
        name: "evasive-weights",
        aliases: &["theorem-3.3"],
        description: "U is (h,r)-evasive iff d_(k-h)(C) >= n-r iff d_(r-h+1)(dual) >= r+2, with the sharp case and monotonicity in (h,r)",
        needs_nondegenerate: true,
        defaults: defaults_two_dim,
        check: check_evasive_weights,
        parameter_checks: None,
    },
    Suite {
        name: "scattered-bound",
        aliases: &["cor-4.4"],
        description: "every h-scattered system with n > k has n <= floor(km/(h+1)), and every (h,r)-evasive system meets the necessary conditions",
        needs_nondegenerate: true,
        defaults: defaults_small,
        check: check_scattered_bound,
        parameter_checks: None,
    },
    Suite {
        name: "mrd-hyperplane-window",
        aliases: &["cor-4.11"],
        description: "for MRD codes with n = km/(h+1), every hyperplane meets U in dimension between n-m and n-m+h",
        needs_nondegenerate: true,
        defaults: defaults_gabidulin,
        check: check_mrd_window,
        parameter_checks: None,
    },
    Suite {
        name: "maximum-scattered-mrd",
        aliases: &["theorem-4.10"],
        description: "for n = km/(h+1), U is h-scattered iff C is MRD",
        needs_nondegenerate: true,
        defaults: defaults_small,
        check: check_maximum_scattered_mrd,
        parameter_checks: None,
    },
    Suite {
        name: "near-mrd-criteria",
        aliases: &["prop-5.3"],
        description: "the weight-profile, dual-distance and geometric near-MRD criteria agree",
        needs_nondegenerate: true,
        defaults: defaults_small,
        check: check_near_mrd_criteria,
        parameter_checks: None,
    },
    Suite {
        name: "near-mrd-length",
        aliases: &["theorem-5.6"],
        description: "every near-MRD code has m >= k and length within the near-MRD length bound",
        needs_nondegenerate: true,
        defaults: defaults_small,
        check: check_near_mrd_length,
        parameter_checks: Some(near_mrd_parameter_checks),
    },
    Suite {
        name: "rank-defect",
        aliases: &["def-6.1"],
        description: "the Singleton rank defect matches its formula, is nonnegative, and vanishes exactly for quasi-MRD codes",
        needs_nondegenerate: false,
        defaults: defaults_small,
        check: check_rank_defect,
        parameter_checks: None,
    },
    Suite {
        name: "scattered-defect",
        aliases: &["theorem-6.3"],
        description: "U is h-scattered iff Rdef(dual) <= floor(km/n) - h - 1",
        needs_nondegenerate: true,
        defaults: defaults_small,
        check: check_scattered_defect,
        parameter_checks: None,
    },
    Suite {
        name: "quasi-maximum-quasi-mrd",
        aliases: &["theorem-6.6"],
        description: "for n = floor(km/(h+1)), quasi-maximum h-scattered iff Rdef(dual) <= floor(eps/a), and iff the dual is quasi-MRD when km < (h+2)n",
        needs_nondegenerate: true,
        defaults: defaults_small,
        check: check_quasi_maximum,
        parameter_checks: Some(quasi_parameter_checks),
    },
];

pub fn find_suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name || s.aliases.contains(&name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        for s in SUITES {
            assert!(std::ptr::eq(find_suite(s.name).unwrap(), s));
            for a in s.aliases {
                assert!(std::ptr::eq(find_suite(a).unwrap(), s));
            }
        }
        assert!(find_suite("nonexistent").is_none());
    }

    #[test]
    fn corrupted_bound_is_caught() {
        let suite = find_suite("scattered-bound").unwrap();
        let params = SuiteParams { k_min: 2, n_min: 3, n_max: 3, bound_offset: 1, ..SuiteParams::default() };
        let report = suite.run(&params).unwrap();
        assert!(report.failures > 0);
        let cx = report.first_counterexample.unwrap();
        assert!(cx.check.contains("scattered"));
        let honest = suite.run(&SuiteParams { bound_offset: 0, ..params }).unwrap();
        assert!(honest.passed());
    }

    #[test]
    fn brute_force_distance() {
        let t = Arc::new(FieldTower::new(2, 1, 4).unwrap());
        let c = constructions::gabidulin(t, 4, 2, None).unwrap();
        assert_eq!(brute_force_min_distance(&c), 3);
    }
}
