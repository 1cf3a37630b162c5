//! Exact dense linear algebra over a [`FieldSpec`].
//!
//! Matrices act on column vectors. Every subspace is stored by its reduced
//! row-echelon basis, so equal subspaces compare equal byte for byte.
//! Over GF(2) elimination and products run on a bit-packed copy.

mod packed;
mod subspace;

use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::gf::{FieldSpec, GfError};

pub use packed::BitMat;
pub use subspace::{joint_fixed_space, quotient_action, radical_of_form, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrices over different fields")]
    FieldMismatch,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("subspace is not invariant under generator {0}")]
    NotInvariant(usize),
    #[error("entry {value} is not a canonical element of GF({q})")]
    NonCanonical { value: u64, q: u64 },
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Clone)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<u64>,
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
            && self.field == other.field
    }
}

impl Eq for Mat {}

impl Hash for Mat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl PartialOrd for Mat {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mat {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.rows, self.cols, &self.data).cmp(&(other.rows, other.cols, &other.data))
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Result of Gauss-Jordan elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub mat: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Mat {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Mat { rows, cols, field: field.clone(), data: vec![0; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-canonical values.
    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u64>]) -> Result<Self, LaError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LaError::DimensionMismatch("ragged rows".into()));
            }
            for &v in row {
                if v >= field.order() {
                    return Err(LaError::NonCanonical { value: v, q: field.order() });
                }
                data.push(v);
            }
        }
        Ok(Mat { rows: rows.len(), cols, field: field.clone(), data })
    }

    /// Builds a matrix from signed integers reduced through the prime field.
    pub fn from_ints(field: &FieldSpec, rows: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<u64>> =
            rows.iter().map(|r| r.iter().map(|&v| field.from_int(v)).collect()).collect();
        Self::from_rows(field, &rows).expect("reduced entries are canonical")
    }

    pub fn from_flat(field: &FieldSpec, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&v| v < field.order()));
        Mat { rows, cols, field: field.clone(), data }
    }

    /// The `n x n` permutation matrix sending basis vector `j` to `images[j]`.
    pub fn permutation(field: &FieldSpec, images: &[usize]) -> Self {
        let n = images.len();
        let mut m = Self::zeros(field, n, n);
        for (j, &i) in images.iter().enumerate() {
            m.set(i, j, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|r| (0..self.cols).all(|c| self.get(r, c) == u64::from(r == c)))
    }

    fn same_field(&self, other: &Mat) -> Result<(), LaError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(LaError::FieldMismatch)
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn to_packed(&self) -> BitMat {
        debug_assert!(self.field.is_gf2());
        let mut b = BitMat::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) == 1 {
                    b.set(r, c, true);
                }
            }
        }
        b
    }

    pub fn from_packed(field: &FieldSpec, b: &BitMat) -> Mat {
        let mut m = Mat::zeros(field, b.rows(), b.cols());
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                if b.get(r, c) {
                    m.set(r, c, 1);
                }
            }
        }
        m
    }

    pub fn try_add(&self, other: &Mat) -> Result<Mat, LaError> {
        self.same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LaError::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.field.add(a, b)).collect();
        Ok(Mat { data, ..self.clone() })
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.try_add(other).expect("matrix sum")
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, s: u64) -> Mat {
        let data = self.data.iter().map(|&a| self.field.mul(a, s)).collect();
        Mat { data, ..self.clone() }
    }

    /// `self - I`
    pub fn minus_identity(&self) -> Mat {
        let mut out = self.clone();
        let m1 = self.field.neg(1);
        for i in 0..self.rows.min(self.cols) {
            let v = out.get(i, i);
            out.set(i, i, self.field.add(v, m1));
        }
        out
    }

    pub fn try_mul(&self, other: &Mat) -> Result<Mat, LaError> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(LaError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field.is_gf2() && self.rows * self.cols * other.cols > 4096 {
            let prod = self.to_packed().mul(&other.to_packed());
            return Ok(Mat::from_packed(&self.field, &prod));
        }
        Ok(self.mul_generic(other))
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        self.try_mul(other).expect("matrix product")
    }

    /// Schoolbook product without the packed shortcut.
    pub fn mul_generic(&self, other: &Mat) -> Mat {
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        if f.is_prime_field() {
            let p = f.p();
            let mut acc = vec![0u64; other.cols];
            for i in 0..self.rows {
                acc.iter_mut().for_each(|a| *a = 0);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a == 0 {
                        continue;
                    }
                    for (slot, &b) in acc.iter_mut().zip(other.row(k)) {
                        // entries < 61, so a*b < 3721 and the reduction keeps acc small
                        *slot = (*slot + a * b) % p;
                    }
                }
                out.data[i * other.cols..(i + 1) * other.cols].copy_from_slice(&acc);
            }
        } else {
            for i in 0..self.rows {
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a == 0 {
                        continue;
                    }
                    for j in 0..other.cols {
                        let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| self.field.add(acc, self.field.mul(a, b)))
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Mat::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Kronecker product: `(a ⊗ b)[(i,k),(j,l)] = a[i][j] * b[k][l]`.
    pub fn kron(&self, other: &Mat) -> Mat {
        let f = &self.field;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Mat::zeros(f, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, f.mul(a, other.get(k, l)));
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.get(r, c));
            }
        }
        out
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(field: &FieldSpec, cols: usize, parts: &[Mat]) -> Result<Mat, LaError> {
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            if m.cols != cols {
                return Err(LaError::DimensionMismatch("vstack column count".into()));
            }
            if &m.field != field {
                return Err(LaError::FieldMismatch);
            }
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        Ok(Mat { rows, cols, field: field.clone(), data })
    }

    pub fn rref(&self) -> Rref {
        if self.field.is_gf2() {
            let mut b = self.to_packed();
            let pivots = b.rref_in_place();
            return Rref { mat: Mat::from_packed(&self.field, &b), rank: pivots.len(), pivots };
        }
        self.rref_generic()
    }

    /// Gauss-Jordan elimination through the generic field operations.
    pub fn rref_generic(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(found) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if found != row {
                for c in 0..m.cols {
                    m.data.swap(found * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            if inv != 1 {
                for c in col..m.cols {
                    let v = f.mul(m.get(row, c), inv);
                    m.set(row, c, v);
                }
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for c in col..m.cols {
                    let v = f.add(m.get(r, c), f.mul(neg, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { mat: m, rank: pivots.len(), pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Right null space `{v : M v = 0}`.
    pub fn kernel(&self) -> Subspace {
        let Rref { mat, pivots, .. } = self.rref();
        kernel_from_rref(&mat, &pivots)
    }

    pub fn kernel_generic(&self) -> Subspace {
        let Rref { mat, pivots, .. } = self.rref_generic();
        kernel_from_rref(&mat, &pivots)
    }

    /// One solution of `M x = b`, with free variables set to zero, or `None`
    /// when the system is inconsistent.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>, LaError> {
        if b.len() != self.rows {
            return Err(LaError::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Mat::zeros(&self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let Rref { mat, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = mat.get(r, self.cols);
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Mat, LaError> {
        if !self.is_square() {
            return Err(LaError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut aug = Mat::zeros(&self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let Rref { mat, pivots, .. } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LaError::Singular);
        }
        let mut out = Mat::zeros(&self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, mat.get(r, n + c));
            }
        }
        Ok(out)
    }

    pub fn det(&self) -> Result<u64, LaError> {
        if !self.is_square() {
            return Err(LaError::NotSquare(self.rows, self.cols));
        }
        let f = &self.field;
        let mut m = self.clone();
        let n = m.rows;
        let mut det = 1u64;
        for col in 0..n {
            let Some(found) = (col..n).find(|&r| m.get(r, col) != 0) else {
                return Ok(0);
            };
            if found != col {
                for c in 0..n {
                    m.data.swap(found * n + c, col * n + c);
                }
                det = f.neg(det);
            }
            let piv = m.get(col, col);
            det = f.mul(det, piv);
            let inv = f.inv(piv)?;
            for r in col + 1..n {
                let factor = f.mul(m.get(r, col), inv);
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for c in col..n {
                    let v = f.add(m.get(r, c), f.mul(neg, m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }
}

fn kernel_from_rref(r: &Mat, pivots: &[usize]) -> Subspace {
    let f = r.field();
    let n = r.cols();
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(r.get(row, free));
        }
        basis.push(v);
    }
    Subspace::from_vectors(f, n, &basis)
}

/// Free-function form of [`Mat::rref`].
pub fn rref(m: &Mat) -> Rref {
    m.rref()
}

pub fn kernel(m: &Mat) -> Subspace {
    m.kernel()
}

pub fn solve(m: &Mat, b: &[u64]) -> Result<Option<Vec<u64>>, LaError> {
    m.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn gf(p: u64) -> FieldSpec {
        make_field(p, 1).unwrap()
    }

    #[test]
    fn rref_examples() {
        let f = gf(2);
        let i3 = Mat::identity(&f, 3);
        let r = i3.rref();
        assert_eq!((r.mat.clone(), r.rank), (i3, 3));

        let z = Mat::zeros(&f, 2, 4);
        assert_eq!(z.rref().rank, 0);
        assert!(z.rref().mat.is_zero());

        let dup = Mat::from_ints(&f, &[vec![1, 1], vec![1, 1]]);
        let r = dup.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.mat.row(0), &[1, 1]);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        let f = gf(2);
        assert_eq!(Mat::identity(&f, 4).kernel().dim(), 0);
        assert_eq!(Mat::zeros(&f, 3, 3).kernel().dim(), 3);

        // Oracle: all v in GF(2)^3 with v0 + v1 = 0.
        let m = Mat::from_ints(&f, &[vec![1, 1, 0]]);
        let mut brute = Vec::new();
        for bits in 0..8u64 {
            let v: Vec<u64> = (0..3).map(|i| (bits >> i) & 1).collect();
            if (v[0] + v[1]) % 2 == 0 {
                brute.push(v);
            }
        }
        assert_eq!(brute.len(), 4);
        let k = m.kernel();
        assert_eq!(k, Subspace::from_vectors(&f, 3, &brute));
        assert_eq!(k, Subspace::from_vectors(&f, 3, &[vec![1, 1, 0], vec![0, 0, 1]]));
    }

    #[test]
    fn solve_examples() {
        let f = gf(5);
        let b = vec![3, 1, 4];
        assert_eq!(Mat::identity(&f, 3).solve(&b).unwrap(), Some(b));
        let f2 = gf(2);
        let m = Mat::from_ints(&f2, &[vec![1, 1]]);
        assert_eq!(m.solve(&[1]).unwrap(), Some(vec![1, 0]));
        assert_eq!(Mat::zeros(&f2, 2, 2).solve(&[1, 0]).unwrap(), None);
        assert!(matches!(m.solve(&[1, 0]), Err(LaError::DimensionMismatch(_))));
    }

    #[test]
    fn inverse_and_det() {
        let f = gf(7);
        let m = Mat::from_ints(&f, &[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.det().unwrap(), 1);
        assert!(m.mul(&m.inverse().unwrap()).is_identity());
        let s = Mat::from_ints(&f, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(s.inverse(), Err(LaError::Singular));
        assert_eq!(s.det().unwrap(), 0);
    }

    #[test]
    fn extension_field_elimination() {
        let f = make_field(2, 2).unwrap();
        // [[1, w], [w, w^2]] has rank 1 since row 2 = w * row 1.
        let w = 2;
        let w2 = f.mul(w, w);
        let m = Mat::from_rows(&f, &[vec![1, w], vec![w, w2]]).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.kernel().dim(), 1);
    }

    #[test]
    fn kron_dims_and_mixed_product() {
        let f = gf(3);
        let a = Mat::from_ints(&f, &[vec![1, 2], vec![0, 1]]);
        let b = Mat::from_ints(&f, &[vec![2, 0, 1], vec![1, 1, 0], vec![0, 0, 1]]);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        // (A⊗B)(A⊗B) = A²⊗B²
        assert_eq!(k.mul(&k), a.mul(&a).kron(&b.mul(&b)));
    }

    #[test]
    fn rejects_non_canonical_entries() {
        let f = gf(3);
        assert!(matches!(
            Mat::from_rows(&f, &[vec![0, 3]]),
            Err(LaError::NonCanonical { value: 3, q: 3 })
        ));
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let a = Mat::identity(&gf(3), 2);
        let b = Mat::identity(&gf(5), 2);
        assert_eq!(a.try_mul(&b), Err(LaError::FieldMismatch));
    }
}
