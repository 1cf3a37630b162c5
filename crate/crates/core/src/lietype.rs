//! Classical groups SL_m, Sp_2m, SO_2m and SO_{2m+1} over F_q in their
//! standard representations, root subgroups in the unipotent radical of the
//! stabilizer of a half-dimensional subspace, and the dimension of that
//! intersection as the nullity of a linear system.
//!
//! Coordinates are `(v_1, …, v_m, v_{-m}, …, v_{-1})`, so `v_{-i}` sits at
//! index `2m - i` and `W = ⟨v_1, …, v_m⟩` is the first `m` coordinates.
//! SO_{2m+1} appends the zero-weight vector `v_0` at index `2m`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::dickson::{DicksonError, FormKind, FormSpec};
use crate::exactla::{LaError, Mat, Subspace};
use crate::gf::{make_field, FieldSpec, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Linear(#[from] LaError),
    #[error(transparent)]
    Form(#[from] DicksonError),
    #[error("{0}")]
    InvalidSpec(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("W is not totally singular for the form")]
    NotIsotropic,
    #[error("root element {0} fails membership")]
    RootNotInGroup(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    SL,
    Sp,
    SOeven,
    SOodd,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::SL => "SL",
            Family::Sp => "Sp",
            Family::SOeven => "SOeven",
            Family::SOodd => "SOodd",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Family {
    type Err = LieError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "SL" | "sl" => Ok(Family::SL),
            "Sp" | "sp" => Ok(Family::Sp),
            "SOeven" | "soeven" => Ok(Family::SOeven),
            "SOodd" | "soodd" => Ok(Family::SOodd),
            _ => Err(LieError::InvalidSpec(format!("unknown family {s:?}"))),
        }
    }
}

impl Family {
    /// Smallest rank parameter covered by the closed forms.
    pub fn min_standard_m(self) -> usize {
        match self {
            Family::SOeven => 4,
            _ => 2,
        }
    }

    /// Closed form for `dim_{F_q}` of the intersection with the unipotent radical.
    pub fn closed_form(self, m: usize) -> usize {
        match self {
            Family::SL => m * m / 4,
            Family::Sp => m * (m + 1) / 2,
            Family::SOeven | Family::SOodd => m * (m - 1) / 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalSpec {
    pub family: Family,
    pub m: usize,
    pub field: FieldSpec,
    pub form: Option<FormSpec>,
    pub dim_v: usize,
    /// False for rank parameters below the range covered by the closed forms.
    pub in_scope: bool,
}

/// `GF(q)` for a prime power `q`.
pub fn field_of_order(q: u64) -> Result<FieldSpec, LieError> {
    let p = (2..=q).find(|d| q % d == 0).ok_or_else(|| LieError::InvalidSpec(format!("q = {q}")))?;
    let mut r = 0;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        r += 1;
    }
    if rest != 1 {
        return Err(LieError::InvalidSpec(format!("{q} is not a prime power")));
    }
    Ok(make_field(p, r)?)
}

fn pos(m: usize, i: isize) -> usize {
    if i > 0 {
        i as usize - 1
    } else {
        2 * m - (-i) as usize
    }
}

/// Builds the standard representation of a classical group. Rank parameters
/// below [`Family::min_standard_m`] need `allow_nonstandard`.
pub fn make_classical(family: Family, m: usize, q: u64, allow_nonstandard: bool) -> Result<ClassicalSpec, LieError> {
    let field = field_of_order(q)?;
    if m == 0 || (family == Family::SL && m < 2) {
        return Err(LieError::InvalidSpec(format!("{family} needs a larger rank parameter than {m}")));
    }
    let in_scope = m >= family.min_standard_m();
    if !in_scope && !allow_nonstandard {
        return Err(LieError::InvalidSpec(format!(
            "{family} with m = {m} is outside the standard range (m >= {})",
            family.min_standard_m()
        )));
    }
    let even_q = field.p() == 2;
    let (dim_v, form) = match family {
        Family::SL => (m, None),
        Family::Sp | Family::SOeven => {
            let n = 2 * m;
            let mut gram = Mat::zeros(&field, n, n);
            let eps = if family == Family::Sp { field.neg(1) } else { 1 };
            for i in 1..=m as isize {
                gram.set(pos(m, i), pos(m, -i), 1);
                gram.set(pos(m, -i), pos(m, i), eps);
            }
            let form = match family {
                Family::Sp => FormSpec::new(FormKind::Symplectic, gram, None)?,
                _ if even_q => FormSpec::new(FormKind::QuadraticChar2, gram, Some(vec![0; n]))?,
                _ => FormSpec::new(FormKind::SymmetricBilinear, gram, None)?,
            };
            (n, Some(form))
        }
        Family::SOodd => {
            if even_q {
                return Err(LieError::InvalidSpec(
                    "SOodd needs odd q; in even characteristic use Sp of the same rank".into(),
                ));
            }
            let n = 2 * m + 1;
            let mut gram = Mat::zeros(&field, n, n);
            for i in 1..=m as isize {
                gram.set(pos(m, i), pos(m, -i), 1);
                gram.set(pos(m, -i), pos(m, i), 1);
            }
            gram.set(2 * m, 2 * m, 1);
            (n, Some(FormSpec::new(FormKind::SymmetricBilinear, gram, None)?))
        }
    };
    Ok(ClassicalSpec { family, m, field, form, dim_v, in_scope })
}

impl ClassicalSpec {
    /// Dimension of the subspace W.
    pub fn w_dim(&self) -> usize {
        match self.family {
            Family::SL => self.m / 2,
            _ => self.m,
        }
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn label(&self) -> String {
        format!("{}(m={}, q={})", self.family, self.m, self.q())
    }
}

pub fn group_membership(g: &Mat, spec: &ClassicalSpec) -> Result<bool, LieError> {
    if g.rows() != spec.dim_v || g.cols() != spec.dim_v {
        return Err(LieError::DimensionMismatch(format!(
            "{}x{} matrix for dimension {}",
            g.rows(),
            g.cols(),
            spec.dim_v
        )));
    }
    if let Some(form) = &spec.form {
        if !form.preserved_by(g)? {
            return Ok(false);
        }
    }
    match spec.family {
        Family::Sp => Ok(true),
        _ => Ok(g.det()? == 1),
    }
}

/// `I + t·X` for a root of the unipotent radical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootElement {
    pub root: String,
    pub parameter: u64,
    pub matrix: Mat,
    /// The nilpotent part `X` with `t = 1`.
    pub nilpotent: Mat,
}

fn unit(field: &FieldSpec, n: usize, entries: &[(usize, usize, u64)]) -> Mat {
    let mut x = Mat::zeros(field, n, n);
    for &(r, c, v) in entries {
        x.set(r, c, v);
    }
    x
}

/// Nilpotent parts of the roots in the unipotent radical, with labels.
fn root_nilpotents(spec: &ClassicalSpec) -> Vec<(String, Mat)> {
    let (f, m, n) = (&spec.field, spec.m, spec.dim_v);
    let mut out = Vec::new();
    match spec.family {
        Family::SL => {
            let w = m / 2;
            for i in 0..w {
                for j in w..m {
                    out.push((format!("e_{} - e_{}", i + 1, j + 1), unit(f, n, &[(i, j, 1)])));
                }
            }
        }
        Family::Sp => {
            for i in 1..=m as isize {
                for j in i + 1..=m as isize {
                    let x = unit(f, n, &[(pos(m, i), pos(m, -j), 1), (pos(m, j), pos(m, -i), 1)]);
                    out.push((format!("e_{i} + e_{j}"), x));
                }
                out.push((format!("2e_{i}"), unit(f, n, &[(pos(m, i), pos(m, -i), 1)])));
            }
        }
        Family::SOeven | Family::SOodd => {
            for i in 1..=m as isize {
                for j in i + 1..=m as isize {
                    let x = unit(f, n, &[(pos(m, i), pos(m, -j), 1), (pos(m, j), pos(m, -i), f.neg(1))]);
                    out.push((format!("e_{i} + e_{j}"), x));
                }
            }
        }
    }
    out
}

fn acts_trivially_on_flag(g: &Mat, w: usize) -> bool {
    let d = g.minus_identity();
    // image inside the first w coordinates, and W killed
    (0..d.rows()).all(|r| (0..d.cols()).all(|c| d.get(r, c) == 0 || (r < w && c >= w)))
}

/// One root element per root and per F_p-basis scalar of F_q, each checked
/// for membership and trivial action on W and V/W.
pub fn ug_generators(spec: &ClassicalSpec) -> Result<Vec<RootElement>, LieError> {
    let f = &spec.field;
    let mut out = Vec::new();
    for (root, x) in root_nilpotents(spec) {
        if !x.mul(&x).is_zero() {
            return Err(LieError::RootNotInGroup(root));
        }
        for k in 0..f.r() {
            let t = f.basis_elem(k);
            let g = Mat::identity(f, spec.dim_v).add(&x.scale(t));
            if !group_membership(&g, spec)? || !acts_trivially_on_flag(&g, spec.w_dim()) {
                return Err(LieError::RootNotInGroup(format!("{root} at t = {t}")));
            }
            out.push(RootElement { root: root.clone(), parameter: t, matrix: g, nilpotent: x.clone() });
        }
    }
    Ok(out)
}

/// Linear conditions on `φ ∈ Hom(V/W, W)` for `I + φ` to preserve the form,
/// where W is the span of the first `w` coordinates. Returns the nullity and
/// the solution space in the coordinates `φ[a][b] ↦ a·(dim - w) + b`.
///
/// Without a form there are no conditions. The quadratic term
/// `B(φu, φv)` vanishes because W is totally singular, which is checked.
pub fn unipotent_constraint_nullity(
    gram: &Mat,
    quad_diag: Option<&[u64]>,
    w: usize,
) -> Result<(usize, Subspace), LieError> {
    let f = gram.field().clone();
    let n = gram.rows();
    if !gram.is_square() || w > n {
        return Err(LieError::DimensionMismatch(format!("W of dimension {w} in a space of dimension {n}")));
    }
    let c = n - w;
    let unknowns = w * c;
    for a in 0..w {
        if (0..w).any(|b| gram.get(a, b) != 0) || quad_diag.is_some_and(|q| q[a] != 0) {
            return Err(LieError::NotIsotropic);
        }
    }
    let var = |a: usize, b: usize| a * c + b;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    // (XᵀG + GX)[i][j] with X[a][w + b] = φ[a][b]
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![0u64; unknowns];
            if j >= w {
                for a in 0..w {
                    row[var(a, j - w)] = f.add(row[var(a, j - w)], gram.get(i, a));
                }
            }
            if i >= w {
                for a in 0..w {
                    row[var(a, i - w)] = f.add(row[var(a, i - w)], gram.get(a, j));
                }
            }
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }
    if quad_diag.is_some() {
        // Q(e_j + X e_j) = Q(e_j) + B(e_j, X e_j) since Q vanishes on W.
        for j in w..n {
            let mut row = vec![0u64; unknowns];
            for a in 0..w {
                row[var(a, j - w)] = gram.get(j, a);
            }
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }
    let solutions = if rows.is_empty() {
        Subspace::full(&f, unknowns)
    } else {
        Mat::from_rows(&f, &rows)?.kernel()
    };
    Ok((solutions.dim(), solutions))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionDim {
    /// `dim_{F_q}`, the nullity of the constraint system.
    pub computed: usize,
    pub closed_form: usize,
    pub matches: bool,
    /// `dim_{F_p} = r · dim_{F_q}`.
    pub fp_dim: usize,
    /// F_q-dimension of the span of the root nilpotents.
    pub span_dim: usize,
    /// Every root nilpotent lies in the solution space.
    pub roots_inside: bool,
}

pub fn intersection_dim(spec: &ClassicalSpec) -> Result<IntersectionDim, LieError> {
    let w = spec.w_dim();
    let (computed, solutions) = match &spec.form {
        Some(form) => unipotent_constraint_nullity(form.gram(), form.quad_diag(), w)?,
        None => {
            let zero = Mat::zeros(&spec.field, spec.dim_v, spec.dim_v);
            unipotent_constraint_nullity(&zero, None, w)?
        }
    };
    let c = spec.dim_v - w;
    let flat: Vec<Vec<u64>> = ug_generators(spec)?
        .iter()
        .filter(|r| r.parameter == 1)
        .map(|r| (0..w).flat_map(|a| (0..c).map(move |b| (a, b))).map(|(a, b)| r.nilpotent.get(a, w + b)).collect())
        .collect();
    let roots_inside = flat.iter().all(|v| solutions.contains(v));
    let span_dim = Subspace::from_vectors(&spec.field, w * c, &flat).dim();
    let closed_form = spec.family.closed_form(spec.m);
    Ok(IntersectionDim {
        computed,
        closed_form,
        matches: computed == closed_form,
        fp_dim: spec.field.r() as usize * computed,
        span_dim,
        roots_inside,
    })
}

/// Reference value of `r_p(G)/r`. A lookup, not a computation.
pub fn rp_reference(family: Family, m: usize, q: u64) -> usize {
    match family {
        Family::SOodd if q % 2 == 0 => m * (m + 1) / 2,
        Family::SOodd => match m {
            2 => 3,
            3 => 5,
            _ => m * (m - 1) / 2 + 1,
        },
        other => other.closed_form(m),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub family: Family,
    pub m: usize,
    pub q: u64,
    pub computed: usize,
    pub closed_form: usize,
    #[serde(rename = "match")]
    pub matches: bool,
    pub rp_reference: usize,
    pub fp_dim: usize,
    pub span_dim: usize,
    pub in_scope: bool,
}

/// Grid bounds for the table sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LieGrid {
    pub sl_m: Vec<usize>,
    pub sp_m: Vec<usize>,
    pub soeven_m: Vec<usize>,
    pub soodd_m: Vec<usize>,
    pub qs: Vec<u64>,
}

impl Default for LieGrid {
    fn default() -> Self {
        LieGrid { sl_m: vec![2, 3, 4, 5], sp_m: vec![2, 3, 4], soeven_m: vec![4], soodd_m: vec![2, 3], qs: vec![2, 3, 4, 5] }
    }
}

impl LieGrid {
    pub fn empty() -> Self {
        LieGrid { sl_m: vec![], sp_m: vec![], soeven_m: vec![], soodd_m: vec![], qs: vec![] }
    }

    /// `(family, m, q)` triples in lexicographic order; SOodd skips even q.
    pub fn points(&self) -> Vec<(Family, usize, u64)> {
        let mut out = Vec::new();
        for (family, ms) in [
            (Family::SL, &self.sl_m),
            (Family::Sp, &self.sp_m),
            (Family::SOeven, &self.soeven_m),
            (Family::SOodd, &self.soodd_m),
        ] {
            for &m in ms {
                for &q in &self.qs {
                    if family == Family::SOodd && q % 2 == 0 {
                        continue;
                    }
                    out.push((family, m, q));
                }
            }
        }
        out
    }
}

pub fn table_row(family: Family, m: usize, q: u64) -> Result<TableRow, LieError> {
    let spec = make_classical(family, m, q, true)?;
    let d = intersection_dim(&spec)?;
    Ok(TableRow {
        family,
        m,
        q,
        computed: d.computed,
        closed_form: d.closed_form,
        matches: d.matches && d.span_dim == d.computed && d.roots_inside,
        rp_reference: rp_reference(family, m, q),
        fp_dim: d.fp_dim,
        span_dim: d.span_dim,
        in_scope: spec.in_scope,
    })
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory CSV");
    }
    if rows.is_empty() {
        w.write_record(["family", "m", "q", "computed", "closed_form", "match", "rp_reference", "fp_dim", "span_dim", "in_scope"])
            .expect("in-memory CSV");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("UTF-8")
}

pub fn table_markdown(rows: &[TableRow]) -> String {
    let mut out = String::from("| family | m | q | computed | closed form | match | r_p/r reference | F_p-dim | span | in scope |\n");
    out.push_str("|---|---|---|---|---|---|---|---|---|---|\n");
    for r in rows {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |\n",
            r.family, r.m, r.q, r.computed, r.closed_form, r.matches, r.rp_reference, r.fp_dim, r.span_dim, r.in_scope
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_classical_examples() {
        let sp = make_classical(Family::Sp, 2, 3, false).unwrap();
        assert_eq!(sp.dim_v, 4);
        assert_eq!(sp.form.as_ref().unwrap().kind(), FormKind::Symplectic);
        let sl = make_classical(Family::SL, 4, 2, false).unwrap();
        assert!(sl.form.is_none() && sl.dim_v == 4);
        let so = make_classical(Family::SOodd, 2, 3, false).unwrap();
        assert_eq!(so.dim_v, 5);
        assert_eq!(so.form.as_ref().unwrap().gram().rank(), 5);
        assert!(make_classical(Family::SOodd, 2, 4, false).is_err());
        assert!(make_classical(Family::SOeven, 3, 3, false).is_err());
        assert!(!make_classical(Family::SOeven, 3, 3, true).unwrap().in_scope);
        assert_eq!(make_classical(Family::SOeven, 4, 2, false).unwrap().form.unwrap().kind(), FormKind::QuadraticChar2);
        assert!(field_of_order(6).is_err());
    }

    #[test]
    fn membership_examples() {
        let sl = make_classical(Family::SL, 2, 5, false).unwrap();
        let f = &sl.field;
        let d = Mat::from_rows(f, &[vec![2, 0], vec![0, f.inv(2).unwrap()]]).unwrap();
        assert!(group_membership(&d, &sl).unwrap());
        assert!(group_membership(&Mat::identity(f, 2), &sl).unwrap());

        let sp = make_classical(Family::Sp, 2, 3, false).unwrap();
        // swap v_1 and v_{-1}: B(v_1, v_{-1}) = 1 becomes B(v_{-1}, v_1) = -1
        let swap = Mat::permutation(&sp.field, &[3, 1, 2, 0]);
        assert!(!group_membership(&swap, &sp).unwrap());
        assert!(group_membership(&Mat::identity(&sp.field, 4), &sp).unwrap());
        assert!(group_membership(&Mat::identity(&sp.field, 3), &sp).is_err());
    }

    #[test]
    fn root_generators() {
        let sp = make_classical(Family::Sp, 2, 2, false).unwrap();
        let roots: Vec<String> = ug_generators(&sp).unwrap().into_iter().map(|r| r.root).collect();
        assert_eq!(roots, vec!["e_1 + e_2", "2e_1", "2e_2"]);
        assert_eq!(ug_generators(&make_classical(Family::SOeven, 4, 2, false).unwrap()).unwrap().len(), 6);
        let sl = ug_generators(&make_classical(Family::SL, 2, 3, false).unwrap()).unwrap();
        assert_eq!(sl.len(), 1);
        assert_eq!(sl[0].matrix.to_rows(), vec![vec![1, 1], vec![0, 1]]);
        // GF(4): two F_2-basis scalars per root
        assert_eq!(ug_generators(&make_classical(Family::Sp, 2, 4, false).unwrap()).unwrap().len(), 6);
    }

    #[test]
    fn intersection_examples() {
        let d = intersection_dim(&make_classical(Family::SL, 4, 2, false).unwrap()).unwrap();
        assert_eq!((d.computed, d.matches), (4, true));
        let d = intersection_dim(&make_classical(Family::Sp, 3, 2, false).unwrap()).unwrap();
        assert_eq!(d.computed, 6);
        let d = intersection_dim(&make_classical(Family::SOodd, 3, 3, false).unwrap()).unwrap();
        assert_eq!(d.computed, 3);
        let d = intersection_dim(&make_classical(Family::Sp, 2, 4, false).unwrap()).unwrap();
        assert_eq!((d.computed, d.fp_dim, d.span_dim), (3, 6, 3));
    }

    #[test]
    fn reference_values() {
        assert_eq!(rp_reference(Family::Sp, 3, 2), 6);
        assert_eq!(rp_reference(Family::SOodd, 3, 3), 5);
        assert_eq!(rp_reference(Family::SOodd, 2, 3), 3);
        assert_eq!(rp_reference(Family::SOodd, 5, 3), 11);
    }

    #[test]
    fn grid_agrees_with_closed_forms() {
        let grid = LieGrid::default();
        for (family, m, q) in grid.points() {
            let row = table_row(family, m, q).unwrap();
            assert!(row.matches, "{row:?}");
            assert_eq!(row.span_dim, row.computed);
            if q % 2 == 0 && family == Family::Sp {
                assert_eq!(row.computed, rp_reference(Family::SOodd, m, q));
            }
        }
    }

    #[test]
    fn csv_header() {
        let rows = vec![table_row(Family::Sp, 3, 2).unwrap()];
        let csv = table_csv(&rows);
        assert!(csv.starts_with("family,m,q,computed,closed_form,match,"));
        assert!(csv.lines().nth(1).unwrap().starts_with("Sp,3,2,6,6,true"));
        assert!(table_csv(&[]).starts_with("family,m,q,computed,closed_form,match,"));
        assert_eq!(table_markdown(&rows).lines().count(), 3);
    }
}
