//! Exact linear algebra over F_q and F_{q^m}.
//!
//! The same routines serve both fields: F_q is closed under the tower's
//! arithmetic, so a matrix whose entries all lie below q is reduced over F_q.
//! F_q-subspaces of F_{q^m}^L are always handled flattened, as row bases in
//! F_q^{mL}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Elem, FieldTower};

/// Default cap on the number of subspaces a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Enumeration budget: the maximum Gaussian binomial count a single subspace
/// enumeration is allowed to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    pub fn check(self, count: u128) -> Result<()> {
        if count > self.0 as u128 {
            Err(Error::Budget { count, budget: self.0 })
        } else {
            Ok(())
        }
    }

    pub fn allows(self, count: u128) -> bool {
        count <= self.0 as u128
    }
}

/// Dense row-major matrix of field elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    /// Builds a matrix from rows of equal length. An empty row list gives a
    /// 0 x `cols` matrix only through [`Mat::zeros`].
    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("rows have different lengths".into()));
        }
        let nrows = rows.len();
        Ok(Mat { rows: nrows, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Elem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        self.iter_rows().map(<[Elem]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// The first `n` rows.
    pub fn top_rows(&self, n: usize) -> Mat {
        Mat { rows: n, cols: self.cols, data: self.data[..n * self.cols].to_vec() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Stacks `other` below `self`.
    pub fn stack(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(Error::DimensionMismatch(format!("cannot stack {} and {} columns", self.cols, other.cols)));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Mat { rows: self.rows + other.rows, cols, data })
    }

    /// Block-diagonal matrix with the given blocks.
    pub fn block_diagonal(blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn all_in_base_field(&self, tower: &FieldTower) -> bool {
        self.data.iter().all(|&x| tower.in_base_field(x))
    }
}

/// Result of row reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// Same shape as the input; zero rows at the bottom.
    pub matrix: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Rref {
    /// The nonzero rows: the canonical basis of the row space.
    pub fn basis(&self) -> Mat {
        self.matrix.top_rows(self.rank)
    }
}

pub fn mat_mul(tower: &FieldTower, a: &Mat, b: &Mat) -> Result<Mat> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!("{}x{} times {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    let mut out = Mat::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for l in 0..a.cols {
            let x = a.get(i, l);
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let v = tower.add(out.get(i, j), tower.mul(x, b.get(l, j)));
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

/// Row vector times matrix.
pub fn vec_mat(tower: &FieldTower, v: &[Elem], m: &Mat) -> Vec<Elem> {
    let mut out = vec![Elem::ZERO; m.cols];
    for (i, &x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o = tower.add(*o, tower.mul(x, m.get(i, j)));
        }
    }
    out
}

/// Reduced row echelon form.
pub fn rref(tower: &FieldTower, m: &Mat) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(pr) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(r, pr);
        let inv = tower.inv(a.get(r, c)).expect("pivot is nonzero");
        if inv != Elem::ONE {
            for j in c..a.cols {
                let v = tower.mul(a.get(r, j), inv);
                a.set(r, j, v);
            }
        }
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let f = a.get(i, c);
            if f.is_zero() {
                continue;
            }
            for j in c..a.cols {
                let v = tower.sub(a.get(i, j), tower.mul(f, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: a, rank: r, pivots }
}

pub fn rank(tower: &FieldTower, m: &Mat) -> usize {
    rref(tower, m).rank
}

/// Basis of the right null space {x : M x^T = 0}, one vector per free column
/// with that column set to 1 and the other free columns set to 0.
pub fn kernel(tower: &FieldTower, m: &Mat) -> Mat {
    let r = rref(tower, m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !r.pivots.contains(c)).collect();
    let mut k = Mat::zeros(free.len(), m.cols);
    for (row, &f) in free.iter().enumerate() {
        k.set(row, f, Elem::ONE);
        for (i, &pc) in r.pivots.iter().enumerate() {
            k.set(row, pc, tower.neg(r.matrix.get(i, f)));
        }
    }
    k
}

/// Same row space test.
pub fn same_row_space(tower: &FieldTower, a: &Mat, b: &Mat) -> bool {
    a.cols == b.cols && rref(tower, a).basis() == rref(tower, b).basis()
}

/// Flattens every row of an F_{q^m} matrix into F_q.
pub fn flatten_rows(tower: &FieldTower, m: &Mat) -> Mat {
    let rows = m.iter_rows().map(|r| tower.flatten(r)).collect::<Vec<_>>();
    if rows.is_empty() {
        return Mat::zeros(0, m.cols * tower.m());
    }
    Mat::from_rows(rows).expect("flattened rows share a length")
}

/// F_q-basis, flattened and in RREF, of the F_{q^m}-row space of `w`.
pub fn expand_to_fq(tower: &FieldTower, w: &Mat) -> Mat {
    let basis = tower.power_basis();
    let mut rows = Vec::new();
    for r in w.iter_rows() {
        for &lambda in &basis {
            let scaled: Vec<Elem> = r.iter().map(|&x| tower.mul(lambda, x)).collect();
            rows.push(tower.flatten(&scaled));
        }
    }
    if rows.is_empty() {
        return Mat::zeros(0, w.cols * tower.m());
    }
    rref(tower, &Mat::from_rows(rows).expect("uniform length")).basis()
}

/// Incremental F_q row basis, used for ranks of F_q-spans.
///
/// Over F_2 with at most 64 coordinates the vectors are packed into machine
/// words; otherwise a dense echelon form is kept. The two are interchangeable.
pub struct FqSpan<'a> {
    tower: &'a FieldTower,
    len: usize,
    repr: SpanRepr,
}

enum SpanRepr {
    Bits(Vec<u64>),
    Dense { rows: Vec<Vec<Elem>>, pivots: Vec<usize> },
}

impl<'a> FqSpan<'a> {
    pub fn new(tower: &'a FieldTower, len: usize) -> Self {
        let repr = if tower.q() == 2 && len <= 64 { SpanRepr::Bits(Vec::new()) } else { Self::dense() };
        FqSpan { tower, len, repr }
    }

    /// Forces the dense representation.
    pub fn new_dense(tower: &'a FieldTower, len: usize) -> Self {
        FqSpan { tower, len, repr: Self::dense() }
    }

    fn dense() -> SpanRepr {
        SpanRepr::Dense { rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        match &self.repr {
            SpanRepr::Bits(b) => b.len(),
            SpanRepr::Dense { rows, .. } => rows.len(),
        }
    }

    /// Inserts a packed F_2 vector. Only valid in the packed representation.
    #[inline]
    fn insert_bits(basis: &mut Vec<u64>, mut v: u64) -> bool {
        for &b in basis.iter() {
            v = v.min(v ^ b);
        }
        if v == 0 {
            return false;
        }
        let pos = basis.partition_point(|&b| b > v);
        basis.insert(pos, v);
        true
    }

    /// Adds an F_q vector (entries below q); returns whether the rank grew.
    pub fn insert(&mut self, v: &[Elem]) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let tower = self.tower;
        match &mut self.repr {
            SpanRepr::Bits(basis) => {
                let packed = v.iter().enumerate().fold(0u64, |acc, (i, x)| acc | ((x.0 as u64) << i));
                Self::insert_bits(basis, packed)
            }
            SpanRepr::Dense { rows, pivots } => {
                let mut v = v.to_vec();
                for (row, &pc) in rows.iter().zip(pivots.iter()) {
                    let f = v[pc];
                    if !f.is_zero() {
                        for (x, &y) in v.iter_mut().zip(row.iter()) {
                            *x = tower.sub(*x, tower.mul(f, y));
                        }
                    }
                }
                let Some(pc) = v.iter().position(|x| !x.is_zero()) else {
                    return false;
                };
                let inv = tower.inv(v[pc]).expect("nonzero");
                for x in v.iter_mut() {
                    *x = tower.mul(*x, inv);
                }
                rows.push(v);
                pivots.push(pc);
                true
            }
        }
    }

    /// Adds the flattening of an F_{q^m} vector.
    pub fn insert_flattened(&mut self, v: &[Elem]) -> bool {
        let tower = self.tower;
        match &mut self.repr {
            SpanRepr::Bits(basis) if tower.p() == 2 && tower.e() == 1 => {
                let m = tower.m();
                let packed = v.iter().enumerate().fold(0u64, |acc, (i, x)| acc | ((x.0 as u64) << (i * m)));
                Self::insert_bits(basis, packed)
            }
            _ => {
                let flat = tower.flatten(v);
                self.insert(&flat)
            }
        }
    }
}

/// dim_{F_q} of the F_q-span of vectors in F_{q^m}^L.
pub fn fq_span_dim(tower: &FieldTower, vectors: &[Vec<Elem>]) -> usize {
    let len = vectors.first().map_or(0, Vec::len) * tower.m();
    let mut span = FqSpan::new(tower, len);
    for v in vectors {
        span.insert_flattened(v);
    }
    span.rank()
}

/// dim_{F_q} of the F_q-span of the columns of an F_{q^m} matrix.
pub fn fq_column_rank(tower: &FieldTower, m: &Mat) -> usize {
    let mut span = FqSpan::new(tower, m.rows() * tower.m());
    let mut col = vec![Elem::ZERO; m.rows()];
    for j in 0..m.cols() {
        for (i, c) in col.iter_mut().enumerate() {
            *c = m.get(i, j);
        }
        span.insert_flattened(&col);
    }
    span.rank()
}

/// Intersection of two F_q-subspaces of F_q^L given by row bases, returned as
/// an RREF basis (Zassenhaus).
pub fn intersect_fq(tower: &FieldTower, a: &Mat, b: &Mat) -> Result<Mat> {
    if a.cols != b.cols {
        return Err(Error::DimensionMismatch(format!("ambient dimensions {} and {}", a.cols, b.cols)));
    }
    let l = a.cols;
    let mut z = Mat::zeros(a.rows + b.rows, 2 * l);
    for i in 0..a.rows {
        for j in 0..l {
            z.set(i, j, a.get(i, j));
            z.set(i, l + j, a.get(i, j));
        }
    }
    for i in 0..b.rows {
        for j in 0..l {
            z.set(a.rows + i, j, b.get(i, j));
        }
    }
    let r = rref(tower, &z);
    let rows: Vec<Vec<Elem>> = (0..r.rank)
        .filter(|&i| r.matrix.row(i)[..l].iter().all(|x| x.is_zero()))
        .map(|i| r.matrix.row(i)[l..].to_vec())
        .collect();
    if rows.is_empty() {
        return Ok(Mat::zeros(0, l));
    }
    Ok(rref(tower, &Mat::from_rows(rows)?).basis())
}

/// Gaussian binomial coefficient [n choose k]_s, saturating at u128::MAX.
pub fn gaussian_binomial(n: usize, k: usize, s: u64) -> u128 {
    if k > n {
        return 0;
    }
    let s = s as u128;
    // After step i the accumulator equals [n, i+1]_s, so each division is exact.
    let mut acc: u128 = 1;
    for i in 0..k {
        let Some(a) = s.checked_pow((n - i) as u32).map(|x| x - 1) else {
            return u128::MAX;
        };
        let b = s.pow((i + 1) as u32) - 1;
        match acc.checked_mul(a) {
            Some(v) => acc = v / b,
            None => return u128::MAX,
        }
    }
    acc
}

/// Iterator over all `dim`-dimensional subspaces of an `ambient`-dimensional
/// space over a field of `field_size` elements.
///
/// Each subspace is yielded once, as its RREF basis. Representatives come in
/// lexicographic order of pivot-column sets, then by free-entry values in
/// row-major order with the first free entry most significant. Any index
/// range of that order can be iterated on its own, so work can be split.
#[derive(Clone, Debug)]
pub struct SubspaceIter {
    ambient: usize,
    dim: usize,
    field_size: u32,
    total: u128,
    next: u128,
    end: u128,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    digits: Vec<u32>,
}

fn free_positions(ambient: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for c in p + 1..ambient {
            if !pivots.contains(&c) {
                out.push((i, c));
            }
        }
    }
    out
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl SubspaceIter {
    /// Unchecked constructor (no budget).
    pub fn new(ambient: usize, dim: usize, field_size: u32) -> Self {
        assert!(dim <= ambient, "subspace dimension exceeds the ambient dimension");
        let total = gaussian_binomial(ambient, dim, field_size as u64);
        let mut it = SubspaceIter {
            ambient,
            dim,
            field_size,
            total,
            next: 0,
            end: total,
            pivots: (0..dim).collect(),
            free: Vec::new(),
            digits: Vec::new(),
        };
        it.free = free_positions(ambient, &it.pivots);
        it.digits = vec![0; it.free.len()];
        it
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    /// Remaining items in this iterator's range.
    pub fn remaining(&self) -> u128 {
        self.end - self.next
    }

    /// Restricts to the index range `start..end` of the canonical order.
    pub fn range(mut self, start: u128, end: u128) -> Self {
        let end = end.min(self.total);
        let start = start.min(end);
        self.seek(start);
        self.end = end;
        self
    }

    /// Splits the remaining range into at most `parts` contiguous pieces.
    pub fn split(&self, parts: usize) -> Vec<SubspaceIter> {
        let parts = parts.max(1) as u128;
        let len = self.remaining();
        let step = len.div_ceil(parts).max(1);
        let mut out = Vec::new();
        let mut s = self.next;
        while s < self.end {
            let e = (s + step).min(self.end);
            out.push(self.clone().range(s, e));
            s = e;
        }
        out
    }

    /// Index (in canonical order) of the next item.
    pub fn position(&self) -> u128 {
        self.next
    }

    fn block_size(&self, free_count: usize) -> u128 {
        (self.field_size as u128).saturating_pow(free_count as u32)
    }

    fn seek(&mut self, index: u128) {
        let mut pivots: Vec<usize> = (0..self.dim).collect();
        let mut rest = index;
        loop {
            let free = free_positions(self.ambient, &pivots);
            let block = self.block_size(free.len());
            if rest < block || !next_combination(&mut pivots.clone(), self.ambient) {
                let mut digits = vec![0u32; free.len()];
                let mut r = rest;
                for d in digits.iter_mut().rev() {
                    *d = (r % self.field_size as u128) as u32;
                    r /= self.field_size as u128;
                }
                self.pivots = pivots;
                self.free = free;
                self.digits = digits;
                self.next = index;
                return;
            }
            rest -= block;
            next_combination(&mut pivots, self.ambient);
        }
    }

    fn current(&self) -> Mat {
        let mut m = Mat::zeros(self.dim, self.ambient);
        for (i, &p) in self.pivots.iter().enumerate() {
            m.set(i, p, Elem::ONE);
        }
        for (&(i, c), &d) in self.free.iter().zip(&self.digits) {
            m.set(i, c, Elem(d));
        }
        m
    }

    fn advance(&mut self) {
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.field_size {
                return;
            }
            *d = 0;
        }
        if next_combination(&mut self.pivots, self.ambient) {
            self.free = free_positions(self.ambient, &self.pivots);
            self.digits = vec![0; self.free.len()];
        }
    }
}

impl Iterator for SubspaceIter {
    type Item = Mat;

    fn next(&mut self) -> Option<Mat> {
        if self.next >= self.end {
            return None;
        }
        let m = self.current();
        self.next += 1;
        if self.next < self.end {
            self.advance();
        }
        Some(m)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining()).unwrap_or(usize::MAX);
        (r, usize::try_from(self.remaining()).ok())
    }
}

/// Budget-checked subspace enumeration.
pub fn enumerate_subspaces(ambient: usize, dim: usize, field_size: u32, budget: Budget) -> Result<SubspaceIter> {
    if dim > ambient {
        return Err(Error::Precondition(format!("subspace dimension {dim} exceeds ambient dimension {ambient}")));
    }
    budget.check(gaussian_binomial(ambient, dim, field_size as u64))?;
    Ok(SubspaceIter::new(ambient, dim, field_size))
}
