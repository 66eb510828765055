//! Exact linear algebra over ℚ: dense matrices with row reduction, and a
//! sparse echelon solver for the large banded systems that arise when a
//! graded map is determined degree by degree.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qfrac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Dense row-major matrix over ℚ.
#[derive(Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(into = "MatRepr", try_from = "MatRepr")]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

/// Serialized form: entries as `"p/q"` strings, row-major.
#[derive(serde::Serialize, serde::Deserialize)]
struct MatRepr {
    rows: usize,
    cols: usize,
    data: Vec<String>,
}

impl From<Mat> for MatRepr {
    fn from(m: Mat) -> MatRepr {
        MatRepr { rows: m.rows, cols: m.cols, data: m.data.iter().map(|x| x.to_string()).collect() }
    }
}

impl TryFrom<MatRepr> for Mat {
    type Error = String;
    fn try_from(r: MatRepr) -> std::result::Result<Mat, String> {
        if r.data.len() != r.rows * r.cols {
            return Err(format!("matrix {}x{} with {} entries", r.rows, r.cols, r.data.len()));
        }
        let data = r.data.iter().map(|x| x.parse::<Q>().map_err(|e| format!("bad rational '{x}': {e}"))).collect::<std::result::Result<_, _>>()?;
        Ok(Mat { rows: r.rows, cols: r.cols, data })
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, s: &Q) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Mat { rows, cols, data: entries.iter().map(|&x| q(x)).collect() }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Mat::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Q> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for (k, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self[(i, k)].is_zero() {
                        s += &self[(i, k)] * x;
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sum");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in difference");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn neg(&self) -> Mat {
        self.scale(&q(-1))
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut out = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(blocks: &[&Mat]) -> Mat {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out[(i, k)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(idx.len(), self.cols);
        for (k, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out[(k, j)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        let v = &m[(r, j)] * &f;
                        m[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        self.rref().1.len()
    }

    /// Basis of the null space, as the columns of a `cols × k` matrix.
    pub fn kernel(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out[(f, k)] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                out[(p, k)] = -r[(i, f)].clone();
            }
        }
        out
    }

    /// A maximal independent subset of the columns.
    pub fn image_basis(&self) -> Mat {
        let (_, pivots) = self.rref();
        self.select_cols(&pivots)
    }

    /// Solve `self · X = B`. Returns one solution or `None`.
    pub fn solve(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, b.rows, "row mismatch in solve");
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = r[(i, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Mat::identity(self.rows))?;
        if self.mul(&x) == Mat::identity(self.rows) {
            Some(x)
        } else {
            None
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// For a subspace spanned by the columns of `self` inside ℚⁿ, return a
    /// projection `P: ℚⁿ → ℚ^q` onto a complement coordinate system and a
    /// section `S: ℚ^q → ℚⁿ`, with `P·S = I` and `P·self = 0`.
    pub fn cokernel(&self) -> (Mat, Mat) {
        let n = self.rows;
        let img = if self.cols == 0 { Mat::zeros(n, 0) } else { self.image_basis() };
        let k = img.cols;
        // Complete the image basis with standard vectors.
        let mut basis = img.clone();
        let mut extra = Vec::new();
        for i in 0..n {
            let mut e = Mat::zeros(n, 1);
            e[(i, 0)] = Q::one();
            let trial = basis.hstack(&e);
            if trial.rank() > basis.cols {
                basis = trial;
                extra.push(i);
            }
            if basis.cols == n {
                break;
            }
        }
        let inv = basis.inverse().expect("completed basis is invertible");
        let q_dim = n - k;
        let p = inv.select_rows(&(k..n).collect::<Vec<_>>());
        let s = basis.select_cols(&(k..n).collect::<Vec<_>>());
        debug_assert_eq!(p.rows, q_dim);
        (p, s)
    }

    pub fn max_abs_denominator(&self) -> BigInt {
        self.data.iter().map(|x| x.denom().abs()).max().unwrap_or_else(BigInt::one)
    }
}

/// A sparse row: sorted (column, coefficient) pairs with a right-hand side.
#[derive(Clone, Debug, Default)]
pub struct SparseRow {
    pub entries: Vec<(usize, Q)>,
    pub rhs: Q,
}

impl SparseRow {
    pub fn new(mut entries: Vec<(usize, Q)>, rhs: Q) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, Q)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|e| !e.1.is_zero());
        SparseRow { entries: merged, rhs }
    }

    fn lead(&self) -> Option<usize> {
        self.entries.first().map(|e| e.0)
    }

    /// `self - f * other`.
    fn axpy(&self, f: &Q, other: &SparseRow) -> SparseRow {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            let a = self.entries.get(i);
            let b = other.entries.get(j);
            match (a, b) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    let v = &x.1 - f * &y.1;
                    if !v.is_zero() {
                        out.push((x.0, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x.0 < y.0 => {
                    out.push(x.clone());
                    i += 1;
                }
                (Some(x), None) => {
                    out.push(x.clone());
                    i += 1;
                }
                (_, Some(y)) => {
                    out.push((y.0, -(f * &y.1)));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SparseRow { entries: out, rhs: &self.rhs - f * &other.rhs }
    }
}

/// Incremental sparse echelon solver for `A x = b`.
///
/// Rows are reduced against earlier pivots as they arrive. With variables
/// numbered so that couplings are local (e.g. by degree) fill-in stays
/// within the band.
#[derive(Clone, Debug)]
pub struct SparseSystem {
    nvars: usize,
    pivots: BTreeMap<usize, SparseRow>,
    inconsistent: bool,
}

/// Solution set of an affine system: `particular + span(null)`.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub particular: Vec<Q>,
    pub null: Vec<Vec<(usize, Q)>>,
}

impl SparseSystem {
    pub fn new(nvars: usize) -> Self {
        SparseSystem { nvars, pivots: BTreeMap::new(), inconsistent: false }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn add_row(&mut self, row: SparseRow) {
        let mut row = row;
        loop {
            let Some(lead) = row.lead() else {
                if !row.rhs.is_zero() {
                    self.inconsistent = true;
                }
                return;
            };
            debug_assert!(lead < self.nvars, "column out of range");
            match self.pivots.get(&lead) {
                Some(p) => {
                    let f = row.entries[0].1.clone();
                    row = row.axpy(&f, p);
                }
                None => {
                    let inv = row.entries[0].1.recip();
                    for e in row.entries.iter_mut() {
                        e.1 *= &inv;
                    }
                    row.rhs *= &inv;
                    self.pivots.insert(lead, row);
                    return;
                }
            }
        }
    }

    pub fn add(&mut self, entries: Vec<(usize, Q)>, rhs: Q) {
        self.add_row(SparseRow::new(entries, rhs));
    }

    fn back_substitute(&self, x: &mut [Q]) {
        for (&p, row) in self.pivots.iter().rev() {
            let mut v = row.rhs.clone();
            for (c, a) in row.entries.iter().skip(1) {
                if !x[*c].is_zero() {
                    v -= a * &x[*c];
                }
            }
            x[p] = v;
        }
    }

    fn back_substitute_homogeneous(&self, x: &mut [Q]) {
        for (&p, row) in self.pivots.iter().rev() {
            let mut v = Q::zero();
            for (c, a) in row.entries.iter().skip(1) {
                if !x[*c].is_zero() {
                    v -= a * &x[*c];
                }
            }
            x[p] = v;
        }
    }

    pub fn free_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|v| !self.pivots.contains_key(v)).collect()
    }

    /// Full solution set, or `None` if inconsistent.
    pub fn solve(&self) -> Option<AffineSolution> {
        if self.inconsistent {
            return None;
        }
        let mut particular = vec![Q::zero(); self.nvars];
        self.back_substitute(&mut particular);
        Some(AffineSolution { particular, null: self.null_space() })
    }

    /// One solution (free variables set to zero), or `None`.
    pub fn particular(&self) -> Option<Vec<Q>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![Q::zero(); self.nvars];
        self.back_substitute(&mut x);
        Some(x)
    }

    /// Basis of the homogeneous solution space, sparse.
    pub fn null_space(&self) -> Vec<Vec<(usize, Q)>> {
        let free = self.free_vars();
        let mut out = Vec::with_capacity(free.len());
        let mut x = vec![Q::zero(); self.nvars];
        for f in free {
            for v in x.iter_mut() {
                if !v.is_zero() {
                    *v = Q::zero();
                }
            }
            x[f] = Q::one();
            self.back_substitute_homogeneous(&mut x);
            // Entries above f stay zero: pivots only look at larger columns.
            out.push(
                x.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(i, v)| (i, v.clone()))
                    .collect(),
            );
        }
        out
    }
}

/// Rank of a family of sparse vectors in ℚⁿ.
pub fn sparse_rank(n: usize, vecs: &[Vec<(usize, Q)>]) -> usize {
    let mut sys = SparseSystem::new(n);
    for v in vecs {
        sys.add(v.clone(), Q::zero());
    }
    sys.rank()
}
