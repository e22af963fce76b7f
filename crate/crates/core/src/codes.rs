//! Rank-metric codes as F_{q^m}-row spaces of F_{q^m}^n.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Elem, FieldTower};
use crate::linalg::{self, enumerate_subspaces, gaussian_binomial, Budget, FqSpan, Mat, Rref};
use crate::qsystems::{self, QSystem};

/// Generalized rank weights (d_{rk,1}, ..., d_{rk,k}).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightProfile(pub Vec<usize>);

impl WeightProfile {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// d_{rk,s}, 1-based.
    pub fn get(&self, s: usize) -> Option<usize> {
        s.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }
}

impl fmt::Display for WeightProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// An [n,k]_{q^m/q} code given by a full-rank k x n generator matrix.
#[derive(Clone)]
pub struct RankMetricCode {
    tower: Arc<FieldTower>,
    generator: Mat,
    rref: Rref,
    profile: OnceLock<WeightProfile>,
}

impl fmt::Debug for RankMetricCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RankMetricCode").field("n", &self.n()).field("k", &self.k()).field("generator", &self.generator).finish()
    }
}

/// The dual of a code; the dual of the full space is the zero code, which is
/// not a [`RankMetricCode`].
#[derive(Clone, Debug)]
pub enum DualCode {
    Code(RankMetricCode),
    Zero { length: usize },
}

impl DualCode {
    pub fn code(&self) -> Option<&RankMetricCode> {
        match self {
            DualCode::Code(c) => Some(c),
            DualCode::Zero { .. } => None,
        }
    }
}

/// Which test established (non)degeneracy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NondegeneracyCriterion {
    /// F_q-rank of the columns of G compared with n.
    ColumnSpan,
    /// Minimum distance of the dual compared with 2.
    DualDistance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nondegeneracy {
    pub nondegenerate: bool,
    pub column_rank: usize,
    /// `None` when the dual is the zero code.
    pub dual_distance: Option<usize>,
    pub criterion: NondegeneracyCriterion,
}

/// Rank weight of a vector: dim_{F_q} of the span of its entries.
pub fn rank_weight(tower: &FieldTower, v: &[Elem]) -> usize {
    let mut span = FqSpan::new(tower, tower.m());
    for &x in v {
        span.insert_flattened(&[x]);
    }
    span.rank()
}

impl RankMetricCode {
    pub fn new(tower: Arc<FieldTower>, generator: Mat) -> Result<Self> {
        if generator.entries().iter().any(|&x| !tower.is_valid(x)) {
            return Err(Error::InvalidField("generator entry outside the field".into()));
        }
        let (k, n) = (generator.rows(), generator.cols());
        if k == 0 || k > n {
            return Err(Error::Precondition(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
        }
        let rref = linalg::rref(&tower, &generator);
        if rref.rank < k {
            return Err(Error::RankDeficient { rank: rref.rank, rows: k });
        }
        Ok(RankMetricCode { tower, generator, rref, profile: OnceLock::new() })
    }

    /// The full space F_{q^m}^n.
    pub fn full(tower: Arc<FieldTower>, n: usize) -> Result<Self> {
        Self::new(tower, Mat::identity(n))
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn generator(&self) -> &Mat {
        &self.generator
    }

    /// RREF of the generator matrix.
    pub fn canonical_generator(&self) -> Mat {
        self.rref.basis()
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn m(&self) -> usize {
        self.tower.m()
    }

    pub fn codeword(&self, message: &[Elem]) -> Result<Vec<Elem>> {
        if message.len() != self.k() {
            return Err(Error::DimensionMismatch(format!("message of length {} for k = {}", message.len(), self.k())));
        }
        Ok(linalg::vec_mat(&self.tower, message, &self.generator))
    }

    /// Same row space.
    pub fn same_code(&self, other: &RankMetricCode) -> bool {
        *self.tower == *other.tower && self.rref.basis() == other.rref.basis()
    }

    /// C * A for A in GL(n, q).
    pub fn times(&self, a: &Mat) -> Result<RankMetricCode> {
        if !a.all_in_base_field(&self.tower) || a.rows() != self.n() || a.cols() != self.n() {
            return Err(Error::Precondition("the transform must be an n x n matrix over F_q".into()));
        }
        if linalg::rank(&self.tower, a) != self.n() {
            return Err(Error::Precondition("the transform is singular".into()));
        }
        RankMetricCode::new(self.tower.clone(), linalg::mat_mul(&self.tower, &self.generator, a)?)
    }

    pub fn column_rank(&self) -> usize {
        linalg::fq_column_rank(&self.tower, &self.generator)
    }

    /// The columns of any generator matrix span an n-dimensional F_q-space.
    pub fn is_nondegenerate(&self) -> bool {
        self.column_rank() == self.n()
    }

    /// Evaluates both nondegeneracy criteria and checks that they agree.
    pub fn nondegeneracy(&self, budget: Budget) -> Result<Nondegeneracy> {
        let column_rank = self.column_rank();
        let by_columns = column_rank == self.n();
        let dual_distance = match self.dual() {
            DualCode::Code(d) => Some(d.min_rank_distance(budget)?),
            DualCode::Zero { .. } => None,
        };
        let by_dual = dual_distance.is_none_or(|d| d >= 2);
        if by_columns != by_dual {
            return Err(Error::Consistency(format!(
                "column rank {column_rank} of n = {} disagrees with dual distance {dual_distance:?}",
                self.n()
            )));
        }
        Ok(Nondegeneracy {
            nondegenerate: by_columns,
            column_rank,
            dual_distance,
            criterion: if dual_distance.is_some() {
                NondegeneracyCriterion::DualDistance
            } else {
                NondegeneracyCriterion::ColumnSpan
            },
        })
    }

    /// Minimum rank distance.
    ///
    /// For nondegenerate codes this is n minus the largest intersection of the
    /// associated system with an F_{q^m}-hyperplane; degenerate codes fall
    /// back to the rank weights of projective codeword representatives.
    pub fn min_rank_distance(&self, budget: Budget) -> Result<usize> {
        if self.is_nondegenerate() {
            let u = qsystems::phi(self)?;
            let spectrum = u.hyperplane_spectrum(budget)?;
            return Ok(self.n() - spectrum.max());
        }
        let mut best = self.n();
        for v in enumerate_subspaces(self.k(), 1, self.tower.order(), budget)? {
            let w = rank_weight(&self.tower, &linalg::vec_mat(&self.tower, v.row(0), &self.generator));
            best = best.min(w);
        }
        Ok(best)
    }

    pub fn dual(&self) -> DualCode {
        if self.k() == self.n() {
            return DualCode::Zero { length: self.n() };
        }
        let h = linalg::kernel(&self.tower, &self.generator);
        DualCode::Code(RankMetricCode::new(self.tower.clone(), h).expect("a kernel basis has full rank"))
    }

    /// Phi: the system spanned by the columns of the generator matrix.
    pub fn system(&self) -> Result<QSystem> {
        qsystems::phi(self)
    }

    fn require_nondegenerate(&self, what: &str) -> Result<()> {
        if self.is_nondegenerate() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{what} requires a nondegenerate code (the columns of G span only {} of {} dimensions over F_q)",
                self.column_rank(),
                self.n()
            )))
        }
    }

    /// d_{rk,r} = n - max dim_{F_q}(U ∩ W) over F_{q^m}-subspaces W of
    /// dimension k - r, with U the associated system.
    pub fn generalized_weights_geometric(&self, budget: Budget) -> Result<WeightProfile> {
        self.require_nondegenerate("generalized rank weights")?;
        let u = qsystems::phi(self)?;
        let (n, k) = (self.n(), self.k());
        let mut out = Vec::with_capacity(k);
        for r in 1..=k {
            let best = u.max_intersection(k - r, budget)?;
            out.push(n - best.intersection_dim);
        }
        Ok(WeightProfile(out))
    }

    /// d_{rk,s} as the least F_{q^m}-dimension of a Galois-closed subspace
    /// meeting C in dimension at least s. Galois-closed subspaces are the
    /// F_{q^m}-spans of F_q-subspaces of F_q^n, which are enumerated directly.
    pub fn generalized_weights_galois(&self, budget: Budget) -> Result<WeightProfile> {
        self.require_nondegenerate("generalized rank weights")?;
        let (n, k) = (self.n(), self.k());
        let tower = &*self.tower;
        let g = self.rref.basis();
        let pivots = &self.rref.pivots;
        // best[a]: largest dim_{F_{q^m}}(A ∩ C) over Galois-closed A of dimension a.
        let mut best = vec![0usize; n + 1];
        best[n] = k;
        let mut residues: Vec<Vec<Elem>> = Vec::with_capacity(n);
        for a in 1..n {
            for sub in enumerate_subspaces(n, a, tower.q(), budget)? {
                residues.clear();
                for row in sub.iter_rows() {
                    let mut v = row.to_vec();
                    for (i, &pc) in pivots.iter().enumerate() {
                        let f = v[pc];
                        if !f.is_zero() {
                            for (x, &y) in v.iter_mut().zip(g.row(i)) {
                                *x = tower.sub(*x, tower.mul(f, y));
                            }
                        }
                    }
                    residues.push(v);
                }
                let extra = small_rank(tower, &mut residues);
                best[a] = best[a].max(a - extra);
            }
            if best[a] >= k {
                break;
            }
        }
        let profile = (1..=k).map(|s| (1..=n).find(|&a| best[a] >= s).expect("A = F^n meets C in dimension k")).collect();
        Ok(WeightProfile(profile))
    }

    /// Cached generalized rank weights, from whichever algorithm enumerates
    /// fewer subspaces.
    pub fn weights(&self, budget: Budget) -> Result<WeightProfile> {
        if let Some(p) = self.profile.get() {
            return Ok(p.clone());
        }
        let (n, k) = (self.n(), self.k());
        let geometric: u128 = (0..k).map(|j| gaussian_binomial(k, j, self.tower.order() as u64)).fold(0, u128::saturating_add);
        let galois: u128 = (1..n).map(|a| gaussian_binomial(n, a, self.tower.q() as u64)).fold(0, u128::saturating_add);
        let p = if galois < geometric { self.generalized_weights_galois(budget)? } else { self.generalized_weights_geometric(budget)? };
        Ok(self.profile.get_or_init(|| p).clone())
    }
}

/// Rank over F_{q^m} of a few vectors, destroying them.
fn small_rank(tower: &FieldTower, rows: &mut [Vec<Elem>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = tower.inv(rows[r][c]).expect("nonzero pivot");
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            let f = tower.mul(row[c], inv);
            if !f.is_zero() {
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = tower.sub(*x, tower.mul(f, y));
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}
