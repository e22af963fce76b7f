//! Parameter bounds and classification flags.
//!
//! Everything here is integer arithmetic with explicit floors and ceilings;
//! predicates that need a code call back into [`crate::codes`] and
//! [`crate::qsystems`] for distances, weights and evasiveness.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::codes::{DualCode, RankMetricCode};
use crate::error::{Error, ErrorKind, Result};
use crate::linalg::Budget;

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Largest d allowed by mk <= min{m(n-d+1), n(m-d+1)}.
pub fn singleton_max_d(n: usize, k: usize, m: usize) -> usize {
    assert!(1 <= k && k <= n && m >= 1, "need 1 <= k <= n and m >= 1");
    (n - k + 1).min(m + 1 - ceil_div(k * m, n))
}

/// Whether an [n,k,d]_{q^m/q} code meets the Singleton-like bound with equality.
pub fn meets_singleton(n: usize, k: usize, m: usize, d: usize) -> bool {
    d <= n.min(m) && k * m == (m * (n + 1 - d)).min(n * (m + 1 - d))
}

/// Upper bound on d_{rk,s}: min{n-k+s, sm, floor(m(n-k)/n) + m(s-1) + 1}.
pub fn gen_weight_bound(n: usize, k: usize, m: usize, s: usize) -> usize {
    assert!(1 <= s && s <= k && k <= n, "need 1 <= s <= k <= n");
    (n - k + s).min(s * m).min(m * (n - k) / n + m * (s - 1) + 1)
}

/// Rdef = m - ceil(km/n) - d + 1.
pub fn rank_defect(n: usize, k: usize, m: usize, d: usize) -> i64 {
    m as i64 - ceil_div(k * m, n) as i64 - d as i64 + 1
}

/// floor(km/(h+1)), the largest dimension of an h-scattered [n,k]_{q^m/q} system.
pub fn scattered_dim_bound(k: usize, m: usize, h: usize) -> usize {
    k * m / (h + 1)
}

/// km - (h+2) floor(km/(h+1)); negative values make quasi-maximum
/// h-scattered systems correspond to duals of quasi-MRD codes.
pub fn quasi_condition_value(k: usize, m: usize, h: usize) -> i64 {
    (k * m) as i64 - (h as i64 + 2) * scattered_dim_bound(k, m, h) as i64
}

pub fn is_s_mrd(code: &RankMetricCode, s: usize, budget: Budget) -> Result<bool> {
    if s == 0 || s > code.k() {
        return Err(Error::Precondition(format!("s-MRD needs 1 <= s <= k, got s = {s}, k = {}", code.k())));
    }
    let profile = code.weights(budget)?;
    Ok(profile.get(s) == Some(code.n() - code.k() + s))
}

pub fn is_mrd(code: &RankMetricCode, budget: Budget) -> Result<bool> {
    let d = code.min_rank_distance(budget)?;
    Ok(meets_singleton(code.n(), code.k(), code.m(), d))
}

pub fn code_rank_defect(code: &RankMetricCode, budget: Budget) -> Result<i64> {
    let d = code.min_rank_distance(budget)?;
    Ok(rank_defect(code.n(), code.k(), code.m(), d))
}

pub fn is_quasi_mrd(code: &RankMetricCode, budget: Budget) -> Result<bool> {
    Ok(code_rank_defect(code, budget)? == 0)
}

/// The three near-MRD criteria evaluated independently.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearMrdVerdict {
    pub near_mrd: bool,
    /// d = n-k and d_{rk,2} = n-k+2.
    pub by_profile: bool,
    /// d(C) + d(C^⊥) = n.
    pub by_dual_distance: bool,
    /// U is (k-2)-scattered, not (k-1)-scattered, and (k-1,k)-evasive.
    pub by_geometry: bool,
}

/// Decides near-MRD membership by all three criteria and insists that they
/// agree.
pub fn is_near_mrd(code: &RankMetricCode, budget: Budget) -> Result<NearMrdVerdict> {
    let (n, k) = (code.n(), code.k());
    let profile = code.weights(budget)?;
    let d = profile.get(1).expect("k >= 1");
    let by_profile = d + k == n && (k < 2 || profile.get(2) == Some(n - k + 2));

    let by_dual_distance = match code.dual() {
        DualCode::Code(dual) => d + dual.min_rank_distance(budget)? == n,
        DualCode::Zero { .. } => false,
    };

    let u = code.system()?;
    let lower = k < 2 || u.is_h_scattered(k - 2, budget)?;
    let by_geometry = lower && !u.is_h_scattered(k - 1, budget)? && u.is_evasive(k - 1, k, budget)?;

    if by_profile != by_dual_distance || by_profile != by_geometry {
        return Err(Error::Consistency(format!(
            "near-MRD criteria disagree on {code:?}: weight profile {by_profile}, dual distance {by_dual_distance}, geometry {by_geometry}"
        )));
    }
    Ok(NearMrdVerdict { near_mrd: by_profile, by_profile, by_dual_distance, by_geometry })
}

/// Length bounds for near-MRD [n,k]_{q^m/q} codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearMrdLengthBound {
    /// m+2 if m = 2k-2, m+1 otherwise; `None` when m < k and no such code exists.
    pub bound: Option<usize>,
    /// max{i : i^2 + (m-k-1)i - m <= 0}.
    pub t: usize,
    /// min{floor(km/(k-1)), m+t} (just m+t for k = 1).
    pub general_bound: usize,
}

pub fn near_mrd_length_bound(k: usize, m: usize) -> NearMrdLengthBound {
    assert!(k >= 1 && m >= 1, "need k, m >= 1");
    let t = near_mrd_t(k, m);
    let general_bound = if k >= 2 { (k * m / (k - 1)).min(m + t) } else { m + t };
    let bound = (m >= k).then(|| if m + 2 == 2 * k { m + 2 } else { m + 1 });
    NearMrdLengthBound { bound, t, general_bound }
}

fn near_mrd_t(k: usize, m: usize) -> usize {
    let (k, m) = (k as i64, m as i64);
    // The quadratic is negative at 0 and convex, so the admissible i form an interval.
    let mut i = 0;
    while (i + 1) * (i + 1) + (m - k - 1) * (i + 1) - m <= 0 {
        i += 1;
    }
    i as usize
}

/// t via the root of the quadratic, floor((k-m+1+sqrt(D))/2), in exact
/// integer arithmetic.
pub fn near_mrd_t_closed_form(k: usize, m: usize) -> usize {
    let (k, m) = (k as i64, m as i64);
    let disc = m * m - 2 * (k - 1) * m + (k + 1) * (k + 1);
    (k - m + 1 + disc.isqrt()).div_euclid(2) as usize
}

/// Necessary conditions for an (h,r)-evasive [n,k]_{q^m/q} system to exist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub violated: Vec<String>,
}

/// Checks the known necessary conditions on (k, m, h, r, n).
///
/// Every system is (h,r)-evasive once r >= n-k+h, and the bounds derived from
/// the dual code only hold below that threshold, so they are applied only
/// there.
pub fn evasive_feasible(k: usize, m: usize, h: usize, r: usize, n: usize) -> Feasibility {
    assert!(h < k && k <= n && m >= 1, "need h < k <= n and m >= 1");
    let mut violated = Vec::new();
    if n > k * m {
        violated.push(format!("n = {n} exceeds km = {} and no system of that dimension exists", k * m));
    }
    if r < h {
        violated.push(format!("r = {r} < h = {h}"));
    }
    if r + 1 < n - k + h + 1 && r >= h {
        // r <= n-k+h-1: the dual code has a (r-h+1)-th generalized weight.
        if (r - h + 1) * (m - 1) < h + 1 {
            violated.push(format!("r >= h-1+(h+1)/(m-1) fails: (r-h+1)(m-1) = {} < h+1 = {}", (r - h + 1) * (m - 1), h + 1));
        }
        if r * (m - 1) <= m * h {
            let denom = (r + 1) as i64 - (m * (r - h)) as i64;
            if denom > 0 && n as i64 * denom > (k * m) as i64 {
                violated.push(format!("n <= km/(r+1-m(r-h)) fails: n(r+1-m(r-h)) = {} > km = {}", n as i64 * denom, k * m));
            }
        }
        if r == h && n > scattered_dim_bound(k, m, h) {
            violated.push(format!("n <= km/(h+1) fails: n = {n} > {}", scattered_dim_bound(k, m, h)));
        }
        if r == h && m < h + 2 {
            violated.push(format!("m = {m} < h+2 = {}: no h-scattered system with n > k", h + 2));
        }
    }
    if n + h * m > k * m + r {
        violated.push(format!("n <= km-hm+r fails: {n} > {}", k * m + r - h * m));
    }
    if h + 1 == k && k * m > n * (m + r + 1).saturating_sub(n) {
        violated.push(format!("km <= n(m-n+r+1) fails: {} > {}", k * m, n * (m + r + 1).saturating_sub(n)));
    }
    Feasibility { feasible: violated.is_empty(), violated }
}

/// One geometric/coding equivalence, both sides evaluated separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkCheck {
    pub statement: String,
    pub geometric: bool,
    pub coding: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScatteredLink {
    pub h: usize,
    pub h_scattered: bool,
    pub checks: Vec<LinkCheck>,
}

/// Relates h-scatteredness of the system of `code` to properties of the code
/// and its dual, through every applicable characterization:
///
/// - h-scattered iff C is (k-h)-MRD;
/// - h-scattered iff Rdef(C^⊥) <= floor(km/n) - h - 1 (when k < n);
/// - for n = km/(h+1): maximum h-scattered iff C is MRD;
/// - for n = floor(km/(h+1)) > k: quasi-maximum iff Rdef(C^⊥) <= floor(ε/a),
///   and when km - (h+2)n < 0, iff C^⊥ is quasi-MRD.
///
/// A disagreement between the two sides of any of them is a consistency error.
pub fn hscattered_code_link(code: &RankMetricCode, h: usize, budget: Budget) -> Result<ScatteredLink> {
    let (n, k, m) = (code.n(), code.k(), code.m());
    if h >= k {
        return Err(Error::Precondition(format!("need h < k, got h = {h}, k = {k}")));
    }
    let u = code.system()?;
    let scattered = u.is_h_scattered(h, budget)?;
    let mut checks = vec![LinkCheck { statement: format!("h-scattered iff {}-MRD", k - h), geometric: scattered, coding: is_s_mrd(code, k - h, budget)? }];

    let dual_defect = match code.dual() {
        DualCode::Code(dual) => Some(code_rank_defect(&dual, budget)?),
        DualCode::Zero { .. } => None,
    };
    if let Some(defect) = dual_defect {
        let threshold = (k * m / n) as i64 - h as i64 - 1;
        checks.push(LinkCheck { statement: format!("h-scattered iff Rdef(dual) = {defect} <= {threshold}"), geometric: scattered, coding: defect <= threshold });
    }
    if (k * m) % (h + 1) == 0 && n == k * m / (h + 1) {
        checks.push(LinkCheck { statement: "maximum h-scattered iff MRD".into(), geometric: scattered, coding: is_mrd(code, budget)? });
    }
    let a = scattered_dim_bound(k, m, h);
    if let (true, Some(defect)) = (n == a, dual_defect) {
        let eps = k * m - (h + 1) * a;
        checks.push(LinkCheck {
            statement: format!("quasi-maximum h-scattered iff Rdef(dual) = {defect} <= floor({eps}/{a})"),
            geometric: scattered,
            coding: defect <= (eps / a) as i64,
        });
        if quasi_condition_value(k, m, h) < 0 {
            checks.push(LinkCheck { statement: "quasi-maximum h-scattered iff dual is quasi-MRD".into(), geometric: scattered, coding: defect == 0 });
        }
    }
    if let Some(bad) = checks.iter().find(|c| c.geometric != c.coding) {
        return Err(Error::Consistency(format!("{}: geometric side {}, coding side {} for {code:?}", bad.statement, bad.geometric, bad.coding)));
    }
    Ok(ScatteredLink { h, h_scattered: scattered, checks })
}

/// Everything the classifier knows about one code.
///
/// Fields that could not be computed are absent, with the reason recorded
/// under `gaps`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub q: u32,
    pub d: Option<usize>,
    pub profile: Option<Vec<usize>>,
    pub dual_profile: Option<Vec<usize>>,
    pub rank_defect: Option<i64>,
    pub flags: BTreeMap<String, bool>,
    pub bounds: BTreeMap<String, i64>,
    pub advisories: Vec<String>,
    pub gaps: BTreeMap<String, String>,
}

fn record<T>(gaps: &mut BTreeMap<String, String>, field: &str, r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.kind() == ErrorKind::Consistency => Err(e),
        Err(e) => {
            gaps.insert(field.to_string(), e.to_string());
            Ok(None)
        }
    }
}

pub fn classify_report(code: &RankMetricCode, budget: Budget) -> Result<ClassificationReport> {
    let (n, k, m) = (code.n(), code.k(), code.m());
    let mut gaps = BTreeMap::new();
    let mut flags = BTreeMap::new();
    let mut bounds = BTreeMap::new();
    let mut advisories = Vec::new();

    let nondegenerate = code.is_nondegenerate();
    flags.insert("is_nondegenerate".to_string(), nondegenerate);

    bounds.insert("singleton_max_d".to_string(), singleton_max_d(n, k, m) as i64);
    for s in 1..=k {
        bounds.insert(format!("gen_weight_bound_{s}"), gen_weight_bound(n, k, m, s) as i64);
    }
    let nb = near_mrd_length_bound(k, m);
    if let Some(b) = nb.bound {
        bounds.insert("near_mrd_length_bound".to_string(), b as i64);
    }
    bounds.insert("near_mrd_general_length_bound".to_string(), nb.general_bound as i64);
    bounds.insert("near_mrd_t".to_string(), nb.t as i64);

    let d = record(&mut gaps, "d", code.min_rank_distance(budget))?;
    let rank_defect = d.map(|d| rank_defect(n, k, m, d));
    if let Some(d) = d {
        flags.insert("is_mrd".to_string(), meets_singleton(n, k, m, d));
        flags.insert("is_quasi_mrd".to_string(), rank_defect == Some(0));
        if n <= m {
            advisories.push(format!("n = {n} <= m = {m}: the rank defect is computed but the notion is degenerate here"));
        }
    }

    let mut profile = None;
    if nondegenerate {
        profile = record(&mut gaps, "profile", code.weights(budget))?;
        if let Some(p) = &profile {
            for s in 1..=k {
                flags.insert(format!("is_s_mrd_{s}"), p.get(s) == Some(n - k + s));
            }
        }
        if let Some(v) = record(&mut gaps, "is_near_mrd", is_near_mrd(code, budget))? {
            flags.insert("is_near_mrd".to_string(), v.near_mrd);
        }
    } else {
        for field in ["profile", "is_s_mrd", "is_near_mrd"] {
            gaps.insert(field.to_string(), "requires a nondegenerate code".to_string());
        }
    }

    let dual_profile = match code.dual() {
        DualCode::Zero { .. } => {
            gaps.insert("dual_profile".to_string(), "the dual is the zero code".to_string());
            None
        }
        DualCode::Code(dual) if !dual.is_nondegenerate() => {
            gaps.insert("dual_profile".to_string(), "the dual code is degenerate".to_string());
            None
        }
        DualCode::Code(dual) => record(&mut gaps, "dual_profile", dual.weights(budget))?.map(|p| p.0),
    };

    Ok(ClassificationReport {
        n,
        k,
        m,
        q: code.tower().q(),
        d,
        profile: profile.map(|p| p.0),
        dual_profile,
        rank_defect,
        flags,
        bounds,
        advisories,
        gaps,
    })
}

impl ClassificationReport {
    /// Two-column text rendering.
    pub fn to_table(&self) -> String {
        let show = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        let list = |v: &Option<Vec<usize>>| v.as_ref().map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
        let mut rows = vec![
            ("parameters".to_string(), format!("[{}, {}]_{{{}^{}/{}}}", self.n, self.k, self.q, self.m, self.q)),
            ("d".to_string(), show(self.d.map(|d| d.to_string()))),
            ("profile".to_string(), show(list(&self.profile))),
            ("dual profile".to_string(), show(list(&self.dual_profile))),
            ("rank defect".to_string(), show(self.rank_defect.map(|d| d.to_string()))),
        ];
        rows.extend(self.flags.iter().map(|(k, v)| (k.clone(), v.to_string())));
        rows.extend(self.bounds.iter().map(|(k, v)| (k.clone(), v.to_string())));
        rows.extend(self.advisories.iter().map(|a| ("advisory".to_string(), a.clone())));
        rows.extend(self.gaps.iter().map(|(k, v)| (format!("missing {k}"), v.clone())));
        let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_values() {
        assert_eq!(singleton_max_d(4, 2, 3), 2);
        assert_eq!(singleton_max_d(5, 3, 5), 3);
        assert_eq!(singleton_max_d(4, 4, 7), 1);
        assert!(!meets_singleton(4, 2, 3, 2));
        assert!(meets_singleton(4, 2, 4, 3));
        assert!(meets_singleton(8, 4, 4, 3));
    }

    #[test]
    fn generalized_weight_bounds() {
        assert_eq!(gen_weight_bound(5, 2, 3, 2), 5);
        for (n, k, m) in [(4, 2, 3), (7, 3, 5), (6, 2, 2), (5, 5, 1)] {
            assert_eq!(gen_weight_bound(n, k, m, 1), singleton_max_d(n, k, m));
        }
        for s in 1..=3 {
            assert_eq!(gen_weight_bound(5, 3, 6, s), 5 - 3 + s);
        }
    }

    #[test]
    fn defects() {
        assert_eq!(rank_defect(4, 2, 3, 2), 0);
        assert_eq!(rank_defect(4, 2, 4, 3), 0);
        assert_eq!(rank_defect(7, 4, 5, 3), 0);
        assert_eq!(quasi_condition_value(3, 5, 1), -6);
    }

    #[test]
    fn near_mrd_lengths() {
        assert_eq!(near_mrd_length_bound(3, 4).bound, Some(6));
        for m in [3, 5, 6, 7] {
            assert_eq!(near_mrd_length_bound(3, m).bound, Some(m + 1));
        }
        assert_eq!(near_mrd_length_bound(4, 6).bound, Some(8));
        assert_eq!(near_mrd_length_bound(4, 3).bound, None);
        for k in 1..12 {
            for m in 1..40 {
                let b = near_mrd_length_bound(k, m);
                assert_eq!(b.t, near_mrd_t_closed_form(k, m), "k={k} m={m}");
                if let Some(x) = b.bound {
                    assert!(x <= b.general_bound, "k={k} m={m}");
                }
            }
        }
    }

    #[test]
    fn feasibility() {
        assert_eq!(scattered_dim_bound(2, 4, 1), 4);
        assert_eq!(scattered_dim_bound(3, 5, 1), 7);
        let f = evasive_feasible(3, 2, 2, 2, 4);
        assert!(!f.feasible);
        assert!(f.violated.iter().any(|v| v.contains("h+2")));
        assert!(evasive_feasible(2, 4, 1, 1, 4).feasible);
        assert!(!evasive_feasible(2, 3, 1, 1, 4).feasible);
        // F_q^k itself is h-scattered for every h.
        assert!(evasive_feasible(3, 2, 2, 2, 3).feasible);
    }
}
