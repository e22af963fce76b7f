//! q-systems: n-dimensional F_q-subspaces of F_{q^m}^k spanning F_{q^m}^k,
//! and the dictionary between them and nondegenerate codes.
//!
//! All exported invariants are functions of the subspace alone; which basis
//! or generator matrix represents it never shows up in the results.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::codes::{DualCode, RankMetricCode};
use crate::error::{Error, Result};
use crate::fields::FieldTower;
use crate::linalg::{self, enumerate_subspaces, Budget, Mat, SubspaceIter};

/// An [n,k]_{q^m/q} system, stored as n basis rows in F_{q^m}^k.
#[derive(Clone)]
pub struct QSystem {
    tower: Arc<FieldTower>,
    basis: Mat,
    /// The transpose of `basis`: a generator matrix of an associated code.
    generator: Mat,
}

impl fmt::Debug for QSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QSystem").field("n", &self.n()).field("k", &self.k()).field("basis", &self.basis).finish()
    }
}

/// An F_{q^m}-subspace W together with dim_{F_q}(U ∩ W).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvasiveWitness {
    /// RREF basis of W.
    pub subspace: Mat,
    pub intersection_dim: usize,
}

/// Intersection dimensions of a system with every F_{q^m}-hyperplane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    /// One entry per hyperplane, in canonical enumeration order.
    pub values: Vec<usize>,
    /// Intersection dimension -> number of hyperplanes.
    pub histogram: BTreeMap<usize, u64>,
}

impl Spectrum {
    pub fn max(&self) -> usize {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }

    pub fn min(&self) -> usize {
        self.histogram.keys().next().copied().unwrap_or(0)
    }
}

/// Phi: the F_q-span of the columns of a generator matrix.
pub fn phi(code: &RankMetricCode) -> Result<QSystem> {
    if !code.is_nondegenerate() {
        return Err(Error::Precondition(format!(
            "the columns of the generator matrix span only {} of {} dimensions over F_q; the code is degenerate",
            code.column_rank(),
            code.n()
        )));
    }
    Ok(QSystem { tower: code.tower().clone(), basis: code.generator().transpose(), generator: code.generator().clone() })
}

/// Psi: the code generated by the matrix whose columns are the basis of U.
pub fn psi(system: &QSystem) -> RankMetricCode {
    RankMetricCode::new(system.tower.clone(), system.generator.clone()).expect("a system spans F_{q^m}^k")
}

impl QSystem {
    pub fn new(tower: Arc<FieldTower>, basis: Mat) -> Result<Self> {
        if basis.entries().iter().any(|&x| !tower.is_valid(x)) {
            return Err(Error::InvalidField("basis entry outside the field".into()));
        }
        let (n, k) = (basis.rows(), basis.cols());
        if n == 0 || k == 0 {
            return Err(Error::Precondition("a system needs n >= 1 and k >= 1".into()));
        }
        let fq_dim = linalg::fq_span_dim(&tower, &basis.to_rows());
        if fq_dim != n {
            return Err(Error::Precondition(format!("basis vectors span only {fq_dim} of {n} dimensions over F_q")));
        }
        let ext_rank = linalg::rank(&tower, &basis);
        if ext_rank != k {
            return Err(Error::Precondition(format!("the F_{{q^m}}-span has dimension {ext_rank}, not k = {k}")));
        }
        let generator = basis.transpose();
        Ok(QSystem { tower, basis, generator })
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.basis.rows()
    }

    pub fn k(&self) -> usize {
        self.basis.cols()
    }

    pub fn code(&self) -> RankMetricCode {
        psi(self)
    }

    /// RREF basis of U flattened into F_q^{mk}.
    pub fn flattened(&self) -> Mat {
        let flat = linalg::flatten_rows(&self.tower, &self.basis);
        linalg::rref(&self.tower, &flat).basis()
    }

    /// Equality as subspaces of F_{q^m}^k.
    pub fn same_subspace(&self, other: &QSystem) -> bool {
        *self.tower == *other.tower && self.k() == other.k() && self.flattened() == other.flattened()
    }

    /// dim_{F_q}(U ∩ W) for the F_{q^m}-row space W of `w`.
    ///
    /// With P a matrix whose kernel is W, U ∩ W is the kernel of u -> P u^T
    /// restricted to U, so the intersection has dimension n minus the F_q-rank
    /// of the columns of P G.
    pub fn intersection_dim(&self, w: &Mat) -> Result<usize> {
        if w.cols() != self.k() && w.rows() > 0 {
            return Err(Error::DimensionMismatch(format!("W lives in dimension {}, the system in {}", w.cols(), self.k())));
        }
        let w = if w.rows() == 0 { Mat::zeros(0, self.k()) } else { w.clone() };
        let annihilator = linalg::kernel(&self.tower, &w);
        if annihilator.rows() == 0 {
            return Ok(self.n());
        }
        let image = linalg::mat_mul(&self.tower, &annihilator, &self.generator)?;
        Ok(self.n() - linalg::fq_column_rank(&self.tower, &image))
    }

    /// dim_{F_q}(U ∩ W) computed by explicit intersection of flattened
    /// subspaces.
    pub fn intersection_dim_explicit(&self, w: &Mat) -> Result<usize> {
        if w.cols() != self.k() && w.rows() > 0 {
            return Err(Error::DimensionMismatch(format!("W lives in dimension {}, the system in {}", w.cols(), self.k())));
        }
        let w_flat = linalg::expand_to_fq(&self.tower, w);
        if w_flat.rows() == 0 {
            return Ok(0);
        }
        Ok(linalg::intersect_fq(&self.tower, &self.flattened(), &w_flat)?.rows())
    }

    fn subspaces(&self, dim: usize, budget: Budget) -> Result<SubspaceIter> {
        enumerate_subspaces(self.k(), dim, self.tower.order(), budget)
    }

    /// An h-dimensional W with the largest intersection; ties go to the first
    /// W in canonical order.
    pub fn max_intersection(&self, h: usize, budget: Budget) -> Result<EvasiveWitness> {
        if h > self.k() {
            return Err(Error::Precondition(format!("h = {h} exceeds k = {}", self.k())));
        }
        let iter = self.subspaces(h, budget)?;
        let (pos, dim) = scan_max(self, iter.clone())?;
        let subspace = iter.range(pos, pos + 1).next().expect("position within range");
        Ok(EvasiveWitness { subspace, intersection_dim: dim })
    }

    /// (h, r)-evasiveness, stopping at the first W with a larger intersection.
    pub fn is_evasive(&self, h: usize, r: usize, budget: Budget) -> Result<bool> {
        self.check_h(h)?;
        if r < h {
            return Ok(false);
        }
        if r >= self.n() {
            return Ok(true);
        }
        for w in self.subspaces(h, budget)? {
            if self.intersection_dim(&w)? > r {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// (h, r)-evasiveness together with a W attaining the maximal intersection.
    pub fn evasive_with_witness(&self, h: usize, r: usize, budget: Budget) -> Result<(bool, EvasiveWitness)> {
        self.check_h(h)?;
        let w = self.max_intersection(h, budget)?;
        Ok((w.intersection_dim <= r, w))
    }

    pub fn is_h_scattered(&self, h: usize, budget: Budget) -> Result<bool> {
        self.is_evasive(h, h, budget)
    }

    fn check_h(&self, h: usize) -> Result<()> {
        if h >= self.k() {
            return Err(Error::Precondition(format!("evasiveness needs h < k, got h = {h}, k = {}", self.k())));
        }
        Ok(())
    }

    /// dim_{F_q}(U ∩ H) over all hyperplanes H = ker(v), with v running over
    /// nonzero functionals normalized to a leading 1.
    pub fn hyperplane_spectrum(&self, budget: Budget) -> Result<Spectrum> {
        let mut values = Vec::new();
        let mut histogram = BTreeMap::new();
        let mut col = vec![crate::fields::Elem::ZERO; 1];
        for v in enumerate_subspaces(self.k(), 1, self.tower.order(), budget)? {
            let image = linalg::vec_mat(&self.tower, v.row(0), &self.generator);
            let mut span = linalg::FqSpan::new(&self.tower, self.tower.m());
            for &x in &image {
                col[0] = x;
                span.insert_flattened(&col);
            }
            let dim = self.n() - span.rank();
            values.push(dim);
            *histogram.entry(dim).or_insert(0) += 1;
        }
        Ok(Spectrum { values, histogram })
    }

    /// Phi of the dual of Psi(U); defined when k < n and d >= 2.
    pub fn rank_metric_dual(&self, budget: Budget) -> Result<QSystem> {
        if self.k() >= self.n() {
            return Err(Error::Precondition(format!("the rank-metric dual needs k < n, got k = {}, n = {}", self.k(), self.n())));
        }
        let code = psi(self);
        let d = code.min_rank_distance(budget)?;
        if d < 2 {
            return Err(Error::Precondition(format!("the rank-metric dual needs minimum distance d >= 2, got d = {d}")));
        }
        let DualCode::Code(dual) = code.dual() else {
            unreachable!("k < n");
        };
        let dual_d = dual.min_rank_distance(budget)?;
        if dual_d < 2 {
            return Err(Error::Precondition(format!("the dual code has minimum distance {dual_d} < 2")));
        }
        phi(&dual)
    }
}

fn scan_max(u: &QSystem, iter: SubspaceIter) -> Result<(u128, usize)> {
    #[cfg(feature = "parallel")]
    if iter.remaining() >= 4096 {
        use rayon::prelude::*;
        let parts = iter.split(rayon::current_num_threads() * 4);
        let best = parts
            .into_par_iter()
            .map(|part| scan_max_seq(u, part))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold((0u128, 0usize, false), |acc, (pos, dim)| {
                if !acc.2 || dim > acc.1 {
                    (pos, dim, true)
                } else {
                    acc
                }
            });
        return Ok((best.0, best.1));
    }
    scan_max_seq(u, iter)
}

fn scan_max_seq(u: &QSystem, mut iter: SubspaceIter) -> Result<(u128, usize)> {
    let mut best: Option<(u128, usize)> = None;
    loop {
        let pos = iter.position();
        let Some(w) = iter.next() else { break };
        let dim = u.intersection_dim(&w)?;
        if best.is_none_or(|(_, b)| dim > b) {
            best = Some((pos, dim));
        }
    }
    Ok(best.expect("at least one subspace"))
}
