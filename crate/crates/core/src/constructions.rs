//! Explicit codes and systems, and a brute-force search for scattered systems.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify;
use crate::codes::{rank_weight, RankMetricCode};
use crate::error::{Error, ErrorKind, Result};
use crate::fields::{Elem, FieldTower};
use crate::linalg::{self, Budget, Mat, SubspaceIter};
use crate::qsystems::QSystem;

/// Runs a verification step, treating an exceeded enumeration budget as
/// "skip".
fn verify_if_affordable(check: impl FnOnce() -> Result<bool>, what: &str) -> Result<()> {
    match check() {
        Ok(true) => Ok(()),
        Ok(false) => Err(Error::Consistency(format!("construction failed its own check: {what}"))),
        Err(e) if e.kind() == ErrorKind::Resource => Ok(()),
        Err(e) => Err(e),
    }
}

/// The Gabidulin code with generator rows (x_j^{q^i})_j for i = 0..k-1.
///
/// Evaluation points default to 1, γ, …, γ^{n-1} for the field generator γ.
pub fn gabidulin(tower: Arc<FieldTower>, n: usize, k: usize, points: Option<&[Elem]>) -> Result<RankMetricCode> {
    let m = tower.m();
    if k == 0 || k > n || n > m {
        return Err(Error::Precondition(format!("Gabidulin codes need 1 <= k <= n <= m, got k = {k}, n = {n}, m = {m}")));
    }
    let points = match points {
        Some(p) => p.to_vec(),
        None => tower.power_basis()[..n].to_vec(),
    };
    if points.len() != n {
        return Err(Error::DimensionMismatch(format!("{} evaluation points for length {n}", points.len())));
    }
    if points.iter().any(|&x| !tower.is_valid(x)) {
        return Err(Error::InvalidField("evaluation point outside the field".into()));
    }
    if rank_weight(&tower, &points) != n {
        return Err(Error::Precondition("evaluation points are F_q-linearly dependent".into()));
    }
    let mut g = Mat::zeros(k, n);
    for i in 0..k {
        for (j, &x) in points.iter().enumerate() {
            g.set(i, j, tower.frobenius(x, i as i64));
        }
    }
    RankMetricCode::new(tower, g)
}

fn pseudoregulus_rows(tower: &FieldTower, k: usize) -> Vec<Vec<Elem>> {
    tower.power_basis().into_iter().map(|b| (0..k).map(|i| tower.frobenius(b, i as i64)).collect()).collect()
}

/// The [m,k] system {(x, x^q, …, x^{q^{k-1}}) : x ∈ F_{q^m}}, which is
/// (k-1)-scattered.
pub fn pseudoregulus_system(tower: Arc<FieldTower>, k: usize, budget: Budget) -> Result<QSystem> {
    let m = tower.m();
    if k == 0 || k > m {
        return Err(Error::Precondition(format!(
            "the pseudoregulus system needs 1 <= k <= m, got k = {k}, m = {m}; no (k-1)-scattered system exists when m < k"
        )));
    }
    let rows = pseudoregulus_rows(&tower, k);
    let u = QSystem::new(tower, Mat::from_rows(rows)?)?;
    verify_if_affordable(|| u.is_h_scattered(k - 1, budget), "pseudoregulus system is (k-1)-scattered")?;
    Ok(u)
}

/// The [m+1,k] system {(x+λ, x^q, …, x^{q^{k-1}}) : x ∈ F_{q^m}, λ ∈ F_q},
/// whose codes are near MRD. The basis is (1,0,…,0) followed by the
/// pseudoregulus rows.
pub fn near_mrd_system(tower: Arc<FieldTower>, k: usize, budget: Budget) -> Result<QSystem> {
    let m = tower.m();
    if k < 2 || m < k {
        return Err(Error::Precondition(format!("near-MRD systems need m >= k >= 2, got k = {k}, m = {m}")));
    }
    let mut first = vec![Elem::ZERO; k];
    first[0] = Elem::ONE;
    let mut rows = vec![first];
    rows.extend(pseudoregulus_rows(&tower, k));
    let u = QSystem::new(tower, Mat::from_rows(rows)?)?;
    verify_if_affordable(|| Ok(classify::is_near_mrd(&u.code(), budget)?.near_mrd), "near-MRD system yields a near-MRD code")?;
    Ok(u)
}

/// Block-diagonal direct sum.
pub fn direct_sum(codes: &[RankMetricCode]) -> Result<RankMetricCode> {
    let first = codes.first().ok_or_else(|| Error::Precondition("direct sum of no codes".into()))?;
    if codes.iter().any(|c| **c.tower() != **first.tower()) {
        return Err(Error::Precondition("direct sum of codes over different fields".into()));
    }
    let blocks: Vec<&Mat> = codes.iter().map(|c| c.generator()).collect();
    RankMetricCode::new(first.tower().clone(), Mat::block_diagonal(&blocks))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_candidates: u64,
    pub max_seconds: u64,
    pub mode: SearchMode,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_candidates: 10_000_000, max_seconds: 120, mode: SearchMode::Exhaustive, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found { system: QSystem, candidates: u64 },
    /// The exhaustive scan finished without a hit.
    NotFound { candidates: u64 },
    /// A candidate or time limit stopped the search first.
    Exhausted { candidates: u64 },
    /// The parameters rule out any such system.
    Excluded(String),
}

impl SearchOutcome {
    pub fn system(&self) -> Option<&QSystem> {
        match self {
            SearchOutcome::Found { system, .. } => Some(system),
            _ => None,
        }
    }
}

/// Searches for an h-scattered [n,k]_{q^m/q} system.
///
/// Exhaustive mode walks the n-dimensional F_q-subspaces of F_q^{mk} in
/// canonical RREF order and returns the first that spans F_{q^m}^k and is
/// h-scattered. Random mode draws bases from a seeded generator.
pub fn search_scattered(tower: Arc<FieldTower>, k: usize, h: usize, n: usize, limits: &SearchBudget, budget: Budget) -> Result<SearchOutcome> {
    let m = tower.m();
    if h >= k || n < k || n > k * m {
        return Err(Error::Precondition(format!("need h < k <= n <= km, got h = {h}, k = {k}, n = {n}, m = {m}")));
    }
    if limits.max_candidates == 0 || limits.max_seconds == 0 {
        return Err(Error::Precondition("search limits must be positive".into()));
    }
    // F_q^k is h-scattered for every h, so the bounds below only bite for n > k.
    if n > k {
        let bound = classify::scattered_dim_bound(k, m, h);
        if n > bound {
            return Ok(SearchOutcome::Excluded(format!("n = {n} exceeds floor(km/(h+1)) = {bound}")));
        }
        if m < h + 2 {
            return Ok(SearchOutcome::Excluded(format!("m = {m} < h+2 = {}", h + 2)));
        }
    }
    let deadline = Instant::now() + Duration::from_secs(limits.max_seconds);
    let found = match limits.mode {
        SearchMode::Exhaustive => exhaustive(&tower, k, h, n, limits, deadline, budget)?,
        SearchMode::Random => random(&tower, k, h, n, limits, deadline, budget)?,
    };
    match found {
        (Some(system), candidates) => {
            if !system.is_h_scattered(h, budget)? {
                return Err(Error::Consistency("search returned a system that is not h-scattered".into()));
            }
            Ok(SearchOutcome::Found { system, candidates })
        }
        (None, candidates) if limits.mode == SearchMode::Exhaustive && candidates_complete(&tower, k, n, candidates) => {
            Ok(SearchOutcome::NotFound { candidates })
        }
        (None, candidates) => Ok(SearchOutcome::Exhausted { candidates }),
    }
}

fn candidates_complete(tower: &FieldTower, k: usize, n: usize, seen: u64) -> bool {
    SubspaceIter::new(k * tower.m(), n, tower.q()).total() == seen as u128
}

fn candidate(tower: &Arc<FieldTower>, k: usize, h: usize, flat: &Mat, budget: Budget) -> Result<Option<QSystem>> {
    let mut rows = Vec::with_capacity(flat.rows());
    for r in flat.iter_rows() {
        rows.push(tower.unflatten(r)?);
    }
    let basis = Mat::from_rows(rows)?;
    if linalg::rank(tower, &basis) != k {
        return Ok(None);
    }
    let u = QSystem::new(tower.clone(), basis)?;
    Ok(u.is_h_scattered(h, budget)?.then_some(u))
}

const CHUNK: u128 = 1024;

fn exhaustive(
    tower: &Arc<FieldTower>,
    k: usize,
    h: usize,
    n: usize,
    limits: &SearchBudget,
    deadline: Instant,
    budget: Budget,
) -> Result<(Option<QSystem>, u64)> {
    let all = SubspaceIter::new(k * tower.m(), n, tower.q());
    let total = all.total().min(limits.max_candidates as u128);
    let mut start = 0u128;
    while start < total {
        if Instant::now() >= deadline {
            break;
        }
        let end = (start + CHUNK).min(total);
        let block = all.clone().range(start, end);
        if let Some(u) = scan_block(tower, k, h, block, budget)? {
            return Ok((Some(u), end as u64));
        }
        start = end;
    }
    Ok((None, start as u64))
}

/// First hit within a block, in canonical order.
fn scan_block(tower: &Arc<FieldTower>, k: usize, h: usize, block: SubspaceIter, budget: Budget) -> Result<Option<QSystem>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let parts = block.split(rayon::current_num_threads());
        let hits = parts
            .into_par_iter()
            .map(|part| scan_seq(tower, k, h, part, budget))
            .collect::<Result<Vec<_>>>()?;
        Ok(hits.into_iter().flatten().next())
    }
    #[cfg(not(feature = "parallel"))]
    scan_seq(tower, k, h, block, budget)
}

fn scan_seq(tower: &Arc<FieldTower>, k: usize, h: usize, part: SubspaceIter, budget: Budget) -> Result<Option<QSystem>> {
    for flat in part {
        if let Some(u) = candidate(tower, k, h, &flat, budget)? {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

fn random(
    tower: &Arc<FieldTower>,
    k: usize,
    h: usize,
    n: usize,
    limits: &SearchBudget,
    deadline: Instant,
    budget: Budget,
) -> Result<(Option<QSystem>, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
    let order = tower.order();
    let mut tried = 0;
    while tried < limits.max_candidates {
        if tried % 256 == 0 && Instant::now() >= deadline {
            break;
        }
        tried += 1;
        let data = (0..n * k).map(|_| Elem(rng.gen_range(0..order))).collect();
        let basis = Mat::from_vec(n, k, data)?;
        if linalg::fq_span_dim(tower, &basis.to_rows()) != n || linalg::rank(tower, &basis) != k {
            continue;
        }
        let u = QSystem::new(tower.clone(), basis)?;
        if u.is_h_scattered(h, budget)? {
            return Ok((Some(u), tried));
        }
    }
    Ok((None, tried))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(p: u32, e: u32, m: u32) -> Arc<FieldTower> {
        Arc::new(FieldTower::new(p, e, m).unwrap())
    }

    #[test]
    fn gabidulin_parameters() {
        let b = Budget::default();
        let t = tower(2, 1, 4);
        let c = gabidulin(t.clone(), 4, 2, None).unwrap();
        assert_eq!(c.min_rank_distance(b).unwrap(), 3);
        let c = gabidulin(t.clone(), 4, 4, None).unwrap();
        assert_eq!(c.min_rank_distance(b).unwrap(), 1);
        assert!(gabidulin(t.clone(), 5, 2, None).is_err());
        assert!(gabidulin(t, 2, 1, Some(&[Elem::ONE, Elem::ONE])).is_err());
        let c = gabidulin(tower(2, 1, 3), 3, 1, None).unwrap();
        assert_eq!(c.min_rank_distance(b).unwrap(), 3);
    }

    #[test]
    fn pseudoregulus_is_scattered() {
        let b = Budget::default();
        let u = pseudoregulus_system(tower(2, 1, 3), 2, b).unwrap();
        assert_eq!((u.n(), u.k()), (3, 2));
        assert!(u.is_h_scattered(1, b).unwrap());
        assert!(pseudoregulus_system(tower(2, 1, 3), 4, b).is_err());
    }

    #[test]
    fn example_near_mrd_basis() {
        let t = tower(2, 1, 4);
        let u = near_mrd_system(t.clone(), 3, Budget::default()).unwrap();
        let beta = t.generator();
        let pw = |i: i64| t.pow(beta, i).unwrap();
        let o = Elem::ONE;
        let z = Elem::ZERO;
        let expected = vec![
            vec![o, z, z],
            vec![o, o, o],
            vec![pw(1), pw(2), pw(4)],
            vec![pw(2), pw(4), pw(8)],
            vec![pw(3), pw(6), pw(12)],
        ];
        assert_eq!(u.basis().to_rows(), expected);
        assert!(near_mrd_system(t, 5, Budget::default()).is_err());
    }

    #[test]
    fn direct_sums() {
        let t = tower(2, 1, 3);
        let g = gabidulin(t.clone(), 3, 2, None).unwrap();
        let s = direct_sum(std::slice::from_ref(&g)).unwrap();
        assert!(s.same_code(&g));
        let one = RankMetricCode::full(t.clone(), 1).unwrap();
        let s = direct_sum(&[g, one]).unwrap();
        assert_eq!((s.n(), s.k()), (4, 3));
        assert_eq!(s.min_rank_distance(Budget::default()).unwrap(), 1);
        assert!(direct_sum(&[]).is_err());
        let other = RankMetricCode::full(tower(2, 1, 4), 1).unwrap();
        assert!(direct_sum(&[s, other]).is_err());
    }

    #[test]
    fn search_exclusions() {
        let limits = SearchBudget::default();
        let b = Budget::default();
        let r = search_scattered(tower(2, 1, 3), 2, 1, 4, &limits, b).unwrap();
        assert!(matches!(r, SearchOutcome::Excluded(_)));
        let r = search_scattered(tower(2, 1, 2), 3, 2, 4, &limits, b).unwrap();
        assert!(matches!(r, SearchOutcome::Excluded(_)));
        let r = search_scattered(tower(2, 1, 2), 2, 1, 2, &limits, b).unwrap();
        assert!(r.system().is_some());
    }

    #[test]
    fn search_is_reproducible() {
        let limits = SearchBudget { mode: SearchMode::Random, seed: 7, max_candidates: 5000, ..SearchBudget::default() };
        let b = Budget::default();
        let a = search_scattered(tower(2, 1, 3), 2, 1, 3, &limits, b).unwrap();
        let c = search_scattered(tower(2, 1, 3), 2, 1, 3, &limits, b).unwrap();
        let (a, c) = (a.system().unwrap(), c.system().unwrap());
        assert_eq!(a.basis(), c.basis());
    }
}
