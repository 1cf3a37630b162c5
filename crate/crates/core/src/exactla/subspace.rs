use crate::gf::FieldSpec;

use super::{LaError, Mat};

/// A subspace of `F^n`, stored by its canonical reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Mat,
    pivots: Vec<usize>,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in {}; rows {:?})", self.dim(), self.ambient_dim, self.basis.to_rows())
    }
}

impl Subspace {
    pub fn zero(field: &FieldSpec, n: usize) -> Self {
        Subspace { ambient_dim: n, basis: Mat::zeros(field, 0, n), pivots: Vec::new() }
    }

    pub fn full(field: &FieldSpec, n: usize) -> Self {
        Subspace { ambient_dim: n, basis: Mat::identity(field, n), pivots: (0..n).collect() }
    }

    /// Row space of `m`.
    pub fn row_space(m: &Mat) -> Self {
        let r = m.rref();
        let n = m.cols();
        let mut data = Vec::with_capacity(r.rank * n);
        for row in 0..r.rank {
            data.extend_from_slice(r.mat.row(row));
        }
        Subspace {
            ambient_dim: n,
            basis: Mat::from_flat(m.field(), r.rank, n, data),
            pivots: r.pivots,
        }
    }

    pub fn from_vectors(field: &FieldSpec, n: usize, vectors: &[Vec<u64>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, n);
        }
        let m = Mat::from_rows(field, vectors).expect("canonical spanning vectors");
        assert_eq!(m.cols(), n, "spanning vectors have the wrong length");
        Self::row_space(&m)
    }

    pub fn field(&self) -> &FieldSpec {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Basis rows in reduced row-echelon form.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates outside the pivot columns, in increasing order. Their unit
    /// vectors project to a basis of the quotient by this subspace.
    pub fn complement_coords(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient_dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient_dim).filter(|&c| !is_pivot[c]).collect()
    }

    /// Canonical representative of `v` modulo the subspace: the pivot
    /// coordinates of the result are zero.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let f = self.field();
        let mut out = v.to_vec();
        for (row, &pc) in self.pivots.iter().enumerate() {
            let c = out[pc];
            if c == 0 {
                continue;
            }
            let neg = f.neg(c);
            for (o, &b) in out.iter_mut().zip(self.basis.row(row)) {
                *o = f.add(*o, f.mul(neg, b));
            }
        }
        out
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|r| self.contains(other.basis.row(r)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let m = Mat::vstack(self.field(), self.ambient_dim, &[self.basis.clone(), other.basis.clone()])
            .expect("same ambient space");
        Self::row_space(&m)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // Vectors of self (coefficients c) whose image is killed modulo other.
        let proj = reduce_columns(other, &self.basis.transpose());
        let coeffs = proj.kernel();
        let span = coeffs.basis().mul(&self.basis);
        Self::row_space(&span)
    }

    /// The image `M(S)` for a square matrix acting on column vectors.
    pub fn image_under(&self, m: &Mat) -> Subspace {
        Self::row_space(&m.mul(&self.basis.transpose()).transpose())
    }
}

fn select_rows(m: &Mat, rows: &[usize]) -> Mat {
    let mut data = Vec::with_capacity(rows.len() * m.cols());
    for &r in rows {
        data.extend_from_slice(m.row(r));
    }
    Mat::from_flat(m.field(), rows.len(), m.cols(), data)
}

/// Reduces every column of `x` modulo `s` and returns the complement
/// coordinates: `x[comp, :] - B^T x[piv, :]` where `B` is the basis of `s`
/// restricted to the complement columns.
fn reduce_columns(s: &Subspace, x: &Mat) -> Mat {
    let comp = s.complement_coords();
    let x_comp = select_rows(x, &comp);
    if s.dim() == 0 {
        return x_comp;
    }
    let x_piv = select_rows(x, s.pivots());
    let b_comp = select_rows(&s.basis().transpose(), &comp);
    x_comp.sub(&b_comp.mul(&x_piv))
}

fn check_square_family(gens: &[Mat], n: usize, field: &FieldSpec) -> Result<(), LaError> {
    for g in gens {
        if !g.is_square() {
            return Err(LaError::NotSquare(g.rows(), g.cols()));
        }
        if g.rows() != n {
            return Err(LaError::DimensionMismatch(format!("generator of size {} in dimension {n}", g.rows())));
        }
        if g.field() != field {
            return Err(LaError::FieldMismatch);
        }
    }
    Ok(())
}

/// Joint fixed space `{v : g v = v for every g}`; the full space when `gens` is empty.
pub fn joint_fixed_space(field: &FieldSpec, n: usize, gens: &[Mat]) -> Result<Subspace, LaError> {
    check_square_family(gens, n, field)?;
    if gens.is_empty() {
        return Ok(Subspace::full(field, n));
    }
    let parts: Vec<Mat> = gens.iter().map(Mat::minus_identity).collect();
    Ok(Mat::vstack(field, n, &parts)?.kernel())
}

/// Matrices of the induced action on `V / S`, in the basis given by the unit
/// vectors of [`Subspace::complement_coords`].
pub fn quotient_action(gens: &[Mat], s: &Subspace) -> Result<Vec<Mat>, LaError> {
    let n = s.ambient_dim();
    check_square_family(gens, n, s.field())?;
    let comp = s.complement_coords();
    let mut out = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        if s.dim() > 0 {
            let moved = g.mul(&s.basis().transpose());
            if !reduce_columns(s, &moved).is_zero() {
                return Err(LaError::NotInvariant(i));
            }
        }
        let cols = select_rows(&g.transpose(), &comp).transpose();
        out.push(reduce_columns(s, &cols));
    }
    Ok(out)
}

/// Radical `{v : G v = 0}` of the bilinear form with Gram matrix `G`.
pub fn radical_of_form(gram: &Mat) -> Result<Subspace, LaError> {
    if !gram.is_square() {
        return Err(LaError::NotSquare(gram.rows(), gram.cols()));
    }
    Ok(gram.kernel())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn gf2() -> FieldSpec {
        make_field(2, 1).unwrap()
    }

    fn s3_perm_mats(f: &FieldSpec) -> Vec<Mat> {
        vec![Mat::permutation(f, &[1, 0, 2]), Mat::permutation(f, &[1, 2, 0])]
    }

    #[test]
    fn fixed_space_examples() {
        let f = gf2();
        let i = Mat::identity(&f, 3);
        assert_eq!(joint_fixed_space(&f, 3, &[i]).unwrap().dim(), 3);
        assert_eq!(joint_fixed_space(&f, 3, &[]).unwrap(), Subspace::full(&f, 3));

        // Oracle: every vector of GF(2)^3 fixed by both permutation matrices.
        let gens = s3_perm_mats(&f);
        let fixed: Vec<Vec<u64>> = (0..8u64)
            .map(|b| (0..3).map(|i| (b >> i) & 1).collect::<Vec<_>>())
            .filter(|v| gens.iter().all(|g| &g.mul_vec(v) == v))
            .collect();
        assert_eq!(fixed.len(), 2);
        let got = joint_fixed_space(&f, 3, &gens).unwrap();
        assert_eq!(got, Subspace::from_vectors(&f, 3, &fixed));
        assert_eq!(got.basis().row(0), &[1, 1, 1]);

        let swap = Mat::permutation(&f, &[1, 0]);
        let fixed = joint_fixed_space(&f, 2, &[swap]).unwrap();
        assert_eq!(fixed, Subspace::from_vectors(&f, 2, &[vec![1, 1]]));
    }

    #[test]
    fn fixed_space_rejects_bad_generators() {
        let f = gf2();
        let r = joint_fixed_space(&f, 2, &[Mat::zeros(&f, 2, 3)]);
        assert_eq!(r, Err(LaError::NotSquare(2, 3)));
        let r = joint_fixed_space(&f, 2, &[Mat::identity(&f, 3)]);
        assert!(matches!(r, Err(LaError::DimensionMismatch(_))));
    }

    #[test]
    fn quotient_examples() {
        let f = gf2();
        let swap = Mat::permutation(&f, &[1, 0]);
        let full = Subspace::full(&f, 2);
        let q = quotient_action(&[swap.clone()], &full).unwrap();
        assert_eq!((q[0].rows(), q[0].cols()), (0, 0));

        let zero = Subspace::zero(&f, 2);
        assert_eq!(quotient_action(&[swap.clone()], &zero).unwrap()[0], swap);

        // (1,1) + <(1,1)> cosets: e_1 maps to e_0 which is congruent to e_1.
        let diag = Subspace::from_vectors(&f, 2, &[vec![1, 1]]);
        let q = quotient_action(&[swap.clone()], &diag).unwrap();
        assert!(q[0].is_identity() && q[0].rows() == 1);

        let line = Subspace::from_vectors(&f, 2, &[vec![1, 0]]);
        assert_eq!(quotient_action(&[swap], &line), Err(LaError::NotInvariant(0)));
    }

    #[test]
    fn radical_examples() {
        let f = gf2();
        let hyperbolic = Mat::from_ints(&f, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(radical_of_form(&hyperbolic).unwrap().dim(), 0);
        assert_eq!(radical_of_form(&Mat::zeros(&f, 3, 3)).unwrap().dim(), 3);
        let ones = Mat::from_ints(&f, &vec![vec![1; 4]; 4]);
        assert_eq!(ones.rank(), 1);
        assert_eq!(radical_of_form(&ones).unwrap().dim(), 3);
        assert!(radical_of_form(&Mat::zeros(&f, 2, 3)).is_err());
    }

    #[test]
    fn subspace_algebra() {
        let f = make_field(3, 1).unwrap();
        let a = Subspace::from_vectors(&f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::from_vectors(&f, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(a.intersection(&b), Subspace::from_vectors(&f, 3, &[vec![0, 1, 0]]));
        assert_eq!(a.sum(&b), Subspace::full(&f, 3));
        assert!(a.contains(&[2, 1, 0]));
        assert!(!a.contains(&[0, 0, 1]));
        assert_eq!(a.complement_coords(), vec![2]);
        // equal spans give identical canonical bases
        let a2 = Subspace::from_vectors(&f, 3, &[vec![1, 1, 0], vec![2, 1, 0], vec![1, 2, 0]]);
        assert_eq!(a, a2);
    }
}
