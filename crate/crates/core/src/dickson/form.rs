use serde::Serialize;

use crate::exactla::Mat;

use super::DicksonError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    Symplectic,
    SymmetricBilinear,
    /// A quadratic form in characteristic 2; `gram` holds its polar form.
    QuadraticChar2,
}

/// An invariant form on a representation space, given by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormSpec {
    kind: FormKind,
    gram: Mat,
    quad_diag: Option<Vec<u64>>,
}

impl FormSpec {
    /// Validates the Gram matrix against the declared kind.
    pub fn new(kind: FormKind, gram: Mat, quad_diag: Option<Vec<u64>>) -> Result<Self, DicksonError> {
        if !gram.is_square() {
            return Err(DicksonError::InvalidForm("Gram matrix is not square".into()));
        }
        let n = gram.rows();
        let f = gram.field().clone();
        let t = gram.transpose();
        match kind {
            FormKind::Symplectic => {
                if t != gram.scale(f.neg(1)) || (0..n).any(|i| gram.get(i, i) != 0) {
                    return Err(DicksonError::InvalidForm("symplectic Gram must be alternating".into()));
                }
                if gram.rank() != n {
                    return Err(DicksonError::SingularForm(n - gram.rank()));
                }
            }
            FormKind::SymmetricBilinear => {
                if t != gram {
                    return Err(DicksonError::InvalidForm("Gram matrix is not symmetric".into()));
                }
            }
            FormKind::QuadraticChar2 => {
                if f.p() != 2 {
                    return Err(DicksonError::InvalidForm("quadratic kind requires characteristic 2".into()));
                }
                if t != gram || (0..n).any(|i| gram.get(i, i) != 0) {
                    return Err(DicksonError::InvalidForm("polar form of Q must be alternating".into()));
                }
            }
        }
        match (kind, &quad_diag) {
            (FormKind::QuadraticChar2, Some(q)) if q.len() == n => {}
            (FormKind::QuadraticChar2, _) => {
                return Err(DicksonError::InvalidForm("quadratic kind needs one Q-value per basis vector".into()))
            }
            (_, Some(_)) => return Err(DicksonError::InvalidForm("Q-values only apply to quadratic forms".into())),
            _ => {}
        }
        Ok(FormSpec { kind, gram, quad_diag })
    }

    /// The standard symplectic form `[[0, I], [-I, 0]]` on `F^{2d}`.
    pub fn standard_symplectic(field: &crate::gf::FieldSpec, d: usize) -> Self {
        let mut gram = Mat::zeros(field, 2 * d, 2 * d);
        for i in 0..d {
            gram.set(i, d + i, 1);
            gram.set(d + i, i, field.neg(1));
        }
        FormSpec::new(FormKind::Symplectic, gram, None).expect("standard symplectic form")
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn quad_diag(&self) -> Option<&[u64]> {
        self.quad_diag.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn bilinear(&self, x: &[u64], y: &[u64]) -> u64 {
        let f = self.gram.field();
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    /// `Q(x) = Σ Q(e_i) x_i² + Σ_{i<j} B(e_i, e_j) x_i x_j`; `None` for
    /// bilinear kinds.
    pub fn quadratic(&self, x: &[u64]) -> Option<u64> {
        let q = self.quad_diag.as_ref()?;
        let f = self.gram.field();
        let mut acc = 0;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            acc = f.add(acc, f.mul(q[i], f.mul(x[i], x[i])));
            for j in i + 1..x.len() {
                acc = f.add(acc, f.mul(self.gram.get(i, j), f.mul(x[i], x[j])));
            }
        }
        Some(acc)
    }

    /// True iff `gᵀ G g = G`, and `Q ∘ g = Q` for quadratic forms.
    pub fn preserved_by(&self, g: &Mat) -> Result<bool, DicksonError> {
        if g.rows() != self.dim() || g.cols() != self.dim() {
            return Err(DicksonError::DimensionMismatch(format!(
                "matrix of size {}x{} against a form of dimension {}",
                g.rows(),
                g.cols(),
                self.dim()
            )));
        }
        if g.transpose().mul(&self.gram).mul(g) != self.gram {
            return Ok(false);
        }
        if let Some(q) = &self.quad_diag {
            // Q is determined by B and its values on a basis.
            for (j, &qj) in q.iter().enumerate() {
                if self.quadratic(&g.col(j)) != Some(qj) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Dickson's form `Σ_{i≠j} x_i y_j` on `F_2^{2d}`: all-ones minus identity.
pub fn dickson_form(d: usize) -> Result<FormSpec, DicksonError> {
    if d == 0 {
        return Err(DicksonError::OutOfRange("dickson_form needs d >= 1".into()));
    }
    let f = crate::gf::make_field(2, 1)?;
    let n = 2 * d;
    let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i != j)).collect()).collect();
    FormSpec::new(FormKind::Symplectic, Mat::from_ints(&f, &rows), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn dickson_form_examples() {
        let j = dickson_form(2).unwrap();
        assert_eq!(j.gram().rank(), 4);
        assert!((0..4).all(|i| j.gram().get(i, i) == 0));
        let h = dickson_form(1).unwrap();
        assert_eq!(h.gram().to_rows(), vec![vec![0, 1], vec![1, 0]]);
        assert!(dickson_form(0).is_err());
        for d in 1..=8 {
            assert_eq!(dickson_form(d).unwrap().gram().rank(), 2 * d);
        }
    }

    #[test]
    fn form_validation() {
        let f = make_field(3, 1).unwrap();
        let sym = Mat::from_ints(&f, &[vec![0, 1], vec![1, 0]]);
        assert!(FormSpec::new(FormKind::Symplectic, sym.clone(), None).is_err());
        assert!(FormSpec::new(FormKind::SymmetricBilinear, sym, None).is_ok());
        let alt = Mat::from_ints(&f, &[vec![0, 1], vec![-1, 0]]);
        assert!(FormSpec::new(FormKind::Symplectic, alt, None).is_ok());
        let deg = Mat::from_ints(&f, &[vec![0, 0], vec![0, 0]]);
        assert_eq!(FormSpec::new(FormKind::Symplectic, deg, None), Err(DicksonError::SingularForm(2)));
    }

    #[test]
    fn quadratic_form_values() {
        let f = make_field(2, 1).unwrap();
        let polar = Mat::from_ints(&f, &[vec![0, 1], vec![1, 0]]);
        let q = FormSpec::new(FormKind::QuadraticChar2, polar, Some(vec![0, 0])).unwrap();
        assert_eq!(q.quadratic(&[1, 1]), Some(1));
        assert_eq!(q.quadratic(&[1, 0]), Some(0));
        // swapping the hyperbolic pair preserves Q = x y
        assert!(q.preserved_by(&Mat::permutation(&f, &[1, 0])).unwrap());
        let shear = Mat::from_ints(&f, &[vec![1, 1], vec![0, 1]]);
        assert!(!q.preserved_by(&shear).unwrap());
    }
}
