//! The mod-p permutation irrep of S_n, Dickson's symplectic form over F_2,
//! the diagonal symplectic representation `V ⊕ V^∨`, and intersections of
//! finite groups with unipotent radicals of parabolics.

mod form;
mod parabolic;

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactla::{LaError, Mat, Subspace};
use crate::gf::{make_field, FieldDescriptor, FieldSpec, GfError};
use crate::grp::{closure, GroupPresentation, GrpError, Perm};

pub use form::{dickson_form, FormKind, FormSpec};
pub use parabolic::{
    gl_parabolic_check, lagrangian_pair, parabolic_trivial_subgroup, siegel_unipotent_dim, LagrangianPair,
    ParabolicMode, ParabolicResult,
};

/// Groups up to this order get their faithfulness computed on construction.
pub const FAITHFUL_CHECK_LIMIT: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DicksonError {
    #[error(transparent)]
    Group(#[from] GrpError),
    #[error(transparent)]
    Linear(#[from] LaError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("Gram matrix is singular (radical of dimension {0})")]
    SingularForm(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("group enumeration exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("candidate {0} does not act trivially on W and V/W")]
    NotInSubgroup(String),
    #[error("subgroup is not elementary abelian: {0}")]
    NotElementaryAbelian(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("{0} is not expressible in the represented group")]
    NotExpressible(String),
}

/// How the image of an arbitrary group element is obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    /// Permutation irrep of S_n over F_p, computed from coordinates.
    PermIrrep { n: usize, p: u64 },
    /// Permutation matrices on `F^n`.
    Permutation { n: usize },
    /// `g ↦ diag(ρ(g), ρ(g)^{-T})`.
    Diagonal(Box<Action>),
    /// Only generator images are known; other elements are found by search.
    Generic,
}

/// A permutation group with matrix images of its generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub group: GroupPresentation,
    pub dim: usize,
    pub field: FieldSpec,
    pub images: Vec<Mat>,
    /// `None` until computed: groups above [`FAITHFUL_CHECK_LIMIT`] are not
    /// enumerated on construction.
    pub faithful: Option<bool>,
    pub action: Action,
}

/// Coordinates of the permutation irrep.
///
/// For p = 2 the module is `H/Δ` inside `F_2^N`, `N = 2⌈n/2⌉`, with basis
/// `e_i = δ_i + δ_N` for `i < N - 1`. For odd p the basis is `e_i = δ_i - δ_n`,
/// taken modulo the diagonal when p divides n.
#[derive(Debug, Clone, Copy)]
struct IrrepCoords {
    n: usize,
    p: u64,
    ambient: usize,
    dim: usize,
    quotient: bool,
}

impl IrrepCoords {
    fn new(n: usize, p: u64) -> Self {
        if p == 2 {
            let ambient = n + n % 2;
            IrrepCoords { n, p, ambient, dim: ambient - 2, quotient: true }
        } else if n as u64 % p == 0 {
            IrrepCoords { n, p, ambient: n, dim: n - 2, quotient: true }
        } else {
            IrrepCoords { n, p, ambient: n, dim: n - 1, quotient: false }
        }
    }

    fn basis_vector(&self, f: &FieldSpec, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.ambient];
        v[i] = 1;
        v[self.ambient - 1] = f.neg(1);
        v
    }

    /// Coordinates of a vector of the sum-zero hyperplane.
    fn coords(&self, f: &FieldSpec, x: &[u64]) -> Vec<u64> {
        let shift = if self.quotient { x[self.ambient - 2] } else { 0 };
        (0..self.dim).map(|i| f.sub(x[i], shift)).collect()
    }

    fn image(&self, f: &FieldSpec, g: &Perm) -> Mat {
        let mut m = Mat::zeros(f, self.dim, self.dim);
        let mut moved = vec![0; self.ambient];
        for i in 0..self.dim {
            let v = self.basis_vector(f, i);
            for (j, &x) in v.iter().enumerate() {
                let target = if j < self.n { g.apply(j) } else { j };
                moved[target] = x;
            }
            for (r, c) in self.coords(f, &moved).into_iter().enumerate() {
                m.set(r, i, c);
            }
        }
        m
    }

    /// Columns of the image as bitmasks; p = 2 only.
    fn image_columns_gf2(&self, g: &Perm) -> Vec<u64> {
        debug_assert_eq!(self.p, 2);
        let last = self.ambient - 1;
        (0..self.dim)
            .map(|i| {
                let moved_last = if last < self.n { g.apply(last) } else { last };
                let mut v = (1u64 << g.apply(i)) ^ (1u64 << moved_last);
                if v >> (self.ambient - 2) & 1 == 1 {
                    v ^= (1u64 << self.ambient) - 1;
                }
                v & ((1u64 << self.dim) - 1)
            })
            .collect()
    }
}

fn perm_matrix(f: &FieldSpec, g: &Perm) -> Mat {
    let images: Vec<usize> = g.images().iter().map(|&x| x as usize).collect();
    Mat::permutation(f, &images)
}

fn sym_or_alt_gens(group: &GroupPresentation) -> Result<(usize, &[Perm]), DicksonError> {
    Ok((group.degree(), group.perm_gens()?))
}

/// Permutation irrep of S_n over F_p on the generators of `S_n`.
pub fn perm_irrep(n: usize, p: u64) -> Result<Representation, DicksonError> {
    let group = crate::grp::standard_gens(crate::grp::StandardKind::Sym, n)?;
    perm_irrep_on(&group, p)
}

/// Permutation irrep of S_n restricted to a subgroup given by permutations
/// of degree n.
pub fn perm_irrep_on(group: &GroupPresentation, p: u64) -> Result<Representation, DicksonError> {
    let (n, gens) = sym_or_alt_gens(group)?;
    if n < 2 {
        return Err(DicksonError::OutOfRange(format!("permutation irrep needs n >= 2, got {n}")));
    }
    if p == 2 && n + n % 2 > 64 {
        return Err(DicksonError::OutOfRange("degree too large".into()));
    }
    let f = make_field(p, 1)?;
    let coords = IrrepCoords::new(n, p);
    let images = gens.iter().map(|g| coords.image(&f, g)).collect();
    let mut rep = Representation {
        group: group.clone(),
        dim: coords.dim,
        field: f,
        images,
        faithful: None,
        action: Action::PermIrrep { n, p },
    };
    rep.compute_faithful(FAITHFUL_CHECK_LIMIT)?;
    Ok(rep)
}

/// Permutation matrices of a permutation group on `F^n`.
pub fn permutation_rep(group: &GroupPresentation, field: &FieldSpec) -> Result<Representation, DicksonError> {
    let (n, gens) = sym_or_alt_gens(group)?;
    Ok(Representation {
        group: group.clone(),
        dim: n,
        field: field.clone(),
        images: gens.iter().map(|g| perm_matrix(field, g)).collect(),
        faithful: Some(true),
        action: Action::Permutation { n },
    })
}

impl Representation {
    /// A representation from explicit generator images.
    pub fn from_images(group: GroupPresentation, field: &FieldSpec, images: Vec<Mat>) -> Result<Self, DicksonError> {
        let gens = group.perm_gens()?;
        if gens.len() != images.len() {
            return Err(DicksonError::DimensionMismatch(format!(
                "{} generators but {} images",
                gens.len(),
                images.len()
            )));
        }
        let dim = images.first().map_or(0, Mat::rows);
        for m in &images {
            if m.rows() != dim || m.cols() != dim || m.field() != field {
                return Err(DicksonError::DimensionMismatch("generator images differ in shape or field".into()));
            }
        }
        Ok(Representation { group, dim, field: field.clone(), images, faithful: None, action: Action::Generic })
    }

    fn degree(&self) -> usize {
        self.group.degree()
    }

    /// Image of an arbitrary element of the group.
    pub fn image_of(&self, g: &Perm) -> Result<Mat, DicksonError> {
        if g.degree() != self.degree() {
            return Err(DicksonError::Group(GrpError::DegreeMismatch(g.degree(), self.degree())));
        }
        self.action_image(&self.action, g)
    }

    fn action_image(&self, action: &Action, g: &Perm) -> Result<Mat, DicksonError> {
        match action {
            Action::PermIrrep { n, p } => Ok(IrrepCoords::new(*n, *p).image(&self.field, g)),
            Action::Permutation { .. } => Ok(perm_matrix(&self.field, g)),
            Action::Diagonal(inner) => {
                let a = self.action_image(inner, g)?;
                let dual = a.inverse()?.transpose();
                Ok(a.block_diag(&dual))
            }
            Action::Generic => self.search_image(g),
        }
    }

    /// Breadth-first search over (permutation, matrix) pairs.
    fn search_image(&self, target: &Perm) -> Result<Mat, DicksonError> {
        let gens = self.group.perm_gens()?;
        let id = Perm::identity(self.degree());
        let mut seen: HashMap<u64, Mat> = HashMap::new();
        let mut queue = VecDeque::new();
        seen.insert(id.pack(), Mat::identity(&self.field, self.dim));
        queue.push_back(id);
        while let Some(x) = queue.pop_front() {
            if x == *target {
                return Ok(seen[&x.pack()].clone());
            }
            if seen.len() > crate::grp::DEFAULT_CAP {
                break;
            }
            let mx = seen[&x.pack()].clone();
            for (g, mg) in gens.iter().zip(&self.images) {
                let y = x.compose(g);
                seen.entry(y.pack()).or_insert_with(|| {
                    queue.push_back(y);
                    mx.mul(mg)
                });
            }
        }
        Err(DicksonError::NotExpressible(target.to_cycles()))
    }

    /// Bitmask columns of the image when the field is GF(2) and the action
    /// can be evaluated directly.
    pub(crate) fn image_columns_gf2(&self, g: &Perm) -> Option<Vec<u64>> {
        if !self.field.is_gf2() || self.dim > 64 {
            return None;
        }
        match self.action {
            Action::PermIrrep { n, p: 2 } => Some(IrrepCoords::new(n, 2).image_columns_gf2(g)),
            Action::Permutation { .. } => Some((0..self.dim).map(|i| 1u64 << g.apply(i)).collect()),
            _ => None,
        }
    }

    /// Enumerates the group (when it has at most `cap` elements) and checks
    /// that only the identity acts trivially.
    pub fn compute_faithful(&mut self, cap: usize) -> Result<Option<bool>, DicksonError> {
        let elements = closure(&self.group, cap)?;
        if !elements.complete {
            return Ok(None);
        }
        let mut faithful = true;
        for g in elements.elements.iter().filter(|g| !g.is_identity()) {
            if self.image_of(g)?.is_identity() {
                faithful = false;
                break;
            }
        }
        self.faithful = Some(faithful);
        Ok(self.faithful)
    }

    /// Elements acting trivially, for enumerable groups.
    pub fn kernel_elements(&self, cap: usize) -> Result<Vec<Perm>, DicksonError> {
        let elements = closure(&self.group, cap)?;
        if !elements.complete {
            return Err(DicksonError::CapExceeded(cap));
        }
        let mut out = Vec::new();
        for g in elements.elements {
            if self.image_of(&g)?.is_identity() {
                out.push(g);
            }
        }
        Ok(out)
    }

    /// Order of the matrix group generated by the images.
    pub fn image_order(&self, cap: usize) -> Result<usize, DicksonError> {
        let pres = GroupPresentation::matrix("image", &self.field, self.dim, self.images.clone())?;
        let set = crate::grp::matrix_closure(&pres, cap)?;
        if !set.complete {
            return Err(DicksonError::CapExceeded(cap));
        }
        Ok(set.len())
    }

    /// Compares matrix products with permutation products along random
    /// words of length at most `max_len`.
    pub fn check_relations(&self, seed: u64, words: usize, max_len: usize) -> Result<(), DicksonError> {
        let gens = self.group.perm_gens()?;
        if gens.is_empty() {
            return Ok(());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen: HashMap<Perm, Mat> = HashMap::new();
        for _ in 0..words {
            let len = rng.gen_range(1..=max_len);
            let mut perm = Perm::identity(self.degree());
            let mut mat = Mat::identity(&self.field, self.dim);
            for _ in 0..len {
                let k = rng.gen_range(0..gens.len());
                perm = perm.compose(&gens[k]);
                mat = mat.mul(&self.images[k]);
            }
            let expected = match self.action {
                Action::Generic => seen.entry(perm).or_insert_with(|| mat.clone()).clone(),
                _ => self.image_of(&perm)?,
            };
            if expected != mat {
                return Err(DicksonError::Inconsistent(format!("word evaluating to {perm} has two images")));
            }
        }
        Ok(())
    }

    /// Serializable description with generator cycles and row-major images.
    pub fn to_doc(&self) -> RepresentationDoc {
        RepresentationDoc {
            label: self.group.label.clone(),
            degree: self.degree(),
            field: self.field.descriptor(),
            dim: self.dim,
            generators: self.group.cycle_strings(),
            images: self.images.iter().map(Mat::to_rows).collect(),
            faithful: self.faithful,
        }
    }
}

/// JSON layout of a representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepresentationDoc {
    pub label: String,
    pub degree: usize,
    pub field: FieldDescriptor,
    pub dim: usize,
    pub generators: Vec<String>,
    pub images: Vec<Vec<Vec<u64>>>,
    pub faithful: Option<bool>,
}

/// Canonical JSON: keys sorted, no floats.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let sorted: BTreeMap<String, serde_json::Value> = match v {
        serde_json::Value::Object(m) => m.into_iter().collect(),
        other => return serde_json::to_string_pretty(&other).expect("serializable"),
    };
    serde_json::to_string_pretty(&sorted).expect("serializable")
}

/// True iff every generator image preserves the form.
pub fn check_invariance(rep: &Representation, form: &FormSpec) -> Result<bool, DicksonError> {
    if rep.dim != form.dim() {
        return Err(DicksonError::DimensionMismatch(format!(
            "representation of dimension {} against a form of dimension {}",
            rep.dim,
            form.dim()
        )));
    }
    for g in &rep.images {
        if !form.preserved_by(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `g ↦ diag(g, g^{-T})` on `V ⊕ V^∨` with the form `[[0, I], [-I, 0]]`.
pub fn diagonal_rep(rep: &Representation) -> Result<(Representation, FormSpec), DicksonError> {
    let mut images = Vec::with_capacity(rep.images.len());
    for g in &rep.images {
        let dual = g.inverse()?.transpose();
        images.push(g.block_diag(&dual));
    }
    let out = Representation {
        group: rep.group.clone(),
        dim: 2 * rep.dim,
        field: rep.field.clone(),
        images,
        faithful: rep.faithful,
        action: Action::Diagonal(Box::new(rep.action.clone())),
    };
    let form = FormSpec::standard_symplectic(&rep.field, rep.dim);
    if !check_invariance(&out, &form)? {
        return Err(DicksonError::Inconsistent("diagonal representation does not preserve its form".into()));
    }
    Ok((out, form))
}

/// Half-dimension `d_n = ⌈n/2⌉ - 1` of Dickson's module.
pub fn dickson_half_dim(n: usize) -> usize {
    n.div_ceil(2) - 1
}

/// The subspace of `F^dim` spanned by unit vectors `0..k`.
pub fn coordinate_subspace(field: &FieldSpec, dim: usize, k: usize) -> Subspace {
    let vectors: Vec<Vec<u64>> = (0..k)
        .map(|i| {
            let mut v = vec![0; dim];
            v[i] = 1;
            v
        })
        .collect();
    Subspace::from_vectors(field, dim, &vectors)
}
