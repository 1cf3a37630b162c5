//! Modular representations of symmetric groups: Specht modules, their
//! p-regular quotients, and the invariants used to study restrictions to
//! p-subgroups (Loewy series, free summands, Jordan profiles).

pub mod appendix;
mod partition;
mod specht;

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::dickson::Representation;
use crate::exactla::{joint_fixed_space, quotient_action, LaError, Mat};
use crate::gf::{FieldDescriptor, FieldSpec};
use crate::grp::{is_elementary_abelian, GroupPresentation, GrpError, Perm};

pub use partition::Partition;
pub use specht::{irreducible_d, specht_gram, specht_module, standard_words, MAX_SPECHT_DEGREE};

#[derive(Debug, Error)]
pub enum ModError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partition {0} is not {1}-regular")]
    NotRegular(String, u64),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("relation fails: {0}")]
    Relation(String),
    #[error("not a p-group: {0}")]
    NotPGroup(String),
    #[error("not elementary abelian: {0}")]
    NotElementaryAbelian(String),
    #[error("inconsistent group action: {0}")]
    Inconsistent(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Linear(#[from] LaError),
    #[error(transparent)]
    Group(#[from] GrpError),
}

/// A module for `S_n` given by the actions of `s_i = (i, i+1)`; index 0 is `(1 2)`.
#[derive(Debug, Clone)]
pub struct GModule {
    pub n: usize,
    pub field: FieldSpec,
    pub dim: usize,
    pub gen_actions: Vec<Mat>,
    pub label: String,
}

/// JSON layout of a module, matching the representation documents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GModuleDoc {
    pub label: String,
    pub degree: usize,
    pub field: FieldDescriptor,
    pub dim: usize,
    pub generators: Vec<String>,
    pub images: Vec<Vec<Vec<u64>>>,
}

fn adjacent(i: usize, n: usize) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    images.swap(i, i + 1);
    Perm::from_images(&images).expect("transposition")
}

impl GModule {
    /// Checks the Coxeter relations before accepting the generators.
    pub fn new(n: usize, field: &FieldSpec, dim: usize, gen_actions: Vec<Mat>, label: impl Into<String>) -> Result<Self, ModError> {
        let label = label.into();
        if n == 0 {
            return Err(ModError::Mismatch("degree must be positive".into()));
        }
        if gen_actions.len() != n - 1 {
            return Err(ModError::Mismatch(format!("{label}: {} generators for degree {n}", gen_actions.len())));
        }
        for (i, a) in gen_actions.iter().enumerate() {
            if a.rows() != dim || a.cols() != dim {
                return Err(ModError::Mismatch(format!("{label}: generator {i} is {}x{}, dim {dim}", a.rows(), a.cols())));
            }
            if a.field() != field {
                return Err(ModError::Mismatch(format!("{label}: generator {i} over another field")));
            }
        }
        let m = GModule { n, field: field.clone(), dim, gen_actions, label };
        m.check_relations()?;
        Ok(m)
    }

    /// `s_i² = 1`, `(s_i s_{i+1})³ = 1`, and `s_i s_j = s_j s_i` for `|i - j| ≥ 2`.
    pub fn check_relations(&self) -> Result<(), ModError> {
        let g = &self.gen_actions;
        for i in 0..g.len() {
            if !g[i].mul(&g[i]).is_identity() {
                return Err(ModError::Relation(format!("{}: s{} squared", self.label, i + 1)));
            }
            if i + 1 < g.len() && !g[i].mul(&g[i + 1]).pow(3).is_identity() {
                return Err(ModError::Relation(format!("{}: braid at s{}", self.label, i + 1)));
            }
            for j in i + 2..g.len() {
                if g[i].mul(&g[j]) != g[j].mul(&g[i]) {
                    return Err(ModError::Relation(format!("{}: s{} and s{} commute", self.label, i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    /// Action of an arbitrary permutation, via a bubble-sort factorization
    /// into adjacent transpositions.
    pub fn act_by_perm(&self, g: &Perm) -> Result<Mat, ModError> {
        if g.degree() != self.n {
            return Err(ModError::Mismatch(format!("permutation of degree {} on S{}", g.degree(), self.n)));
        }
        let mut h = *g;
        let mut m = Mat::identity(&self.field, self.dim);
        // h ∘ s_{i1} ∘ … ∘ s_{ik} = 1, so g = s_{ik} ∘ … ∘ s_{i1}
        while let Some(i) = (0..self.n - 1).find(|&i| h.apply(i) > h.apply(i + 1)) {
            h = h.compose(&adjacent(i, self.n));
            m = self.gen_actions[i].mul(&m);
        }
        Ok(m)
    }

    pub fn restrict(&self, h: &GroupPresentation) -> Result<Restricted, ModError> {
        let gens = h.perm_gens()?.to_vec();
        let mats = gens.iter().map(|g| self.act_by_perm(g)).collect::<Result<Vec<_>, _>>()?;
        Ok(Restricted { label: format!("{}|{}", self.label, h.label), gens, mats, field: self.field.clone(), dim: self.dim })
    }

    pub fn to_doc(&self) -> GModuleDoc {
        GModuleDoc {
            label: self.label.clone(),
            degree: self.n,
            field: self.field.descriptor(),
            dim: self.dim,
            generators: (1..self.n).map(|i| format!("({} {})", i, i + 1)).collect(),
            images: self.gen_actions.iter().map(Mat::to_rows).collect(),
        }
    }
}

/// Layer dimensions of the invariants-quotient filtration, socle first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoewySeries {
    pub layer_dims: Vec<usize>,
    pub length: usize,
}

/// Isomorphism invariants of a restricted module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub layers: Vec<usize>,
    pub free_count: usize,
    /// Fixed-space dimension of each generator separately.
    pub fixed_dims: Vec<usize>,
}

/// A module for a permutation group, given by generator images.
#[derive(Debug, Clone)]
pub struct Restricted {
    pub label: String,
    pub gens: Vec<Perm>,
    pub mats: Vec<Mat>,
    pub field: FieldSpec,
    pub dim: usize,
}

fn shifted(g: &Perm, offset: usize, n: usize) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    for i in 0..g.degree() {
        images[offset + i] = offset + g.apply(i);
    }
    Perm::from_images(&images).expect("shifted permutation")
}

impl Restricted {
    pub fn new(label: impl Into<String>, gens: Vec<Perm>, mats: Vec<Mat>, field: &FieldSpec, dim: usize) -> Result<Self, ModError> {
        if gens.len() != mats.len() {
            return Err(ModError::Mismatch(format!("{} generators, {} matrices", gens.len(), mats.len())));
        }
        if let Some(m) = mats.iter().find(|m| m.rows() != dim || m.cols() != dim || m.field() != field) {
            return Err(ModError::Mismatch(format!("{}x{} matrix for dim {dim}", m.rows(), m.cols())));
        }
        Ok(Restricted { label: label.into(), gens, mats, field: field.clone(), dim })
    }

    /// A representation from the dickson module, restricted to `h`.
    pub fn from_representation(rep: &Representation, h: &GroupPresentation) -> Result<Self, ModError> {
        let gens = h.perm_gens()?.to_vec();
        let mats = gens
            .iter()
            .map(|g| rep.image_of(g).map_err(|e| ModError::Mismatch(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Restricted::new(format!("{}|{}", rep.group.label, h.label), gens, mats, &rep.field, rep.dim)
    }

    /// Outer tensor product: `a`'s group on the first points, `b`'s on the rest.
    pub fn outer_tensor(a: &Restricted, b: &Restricted) -> Result<Self, ModError> {
        if a.field != b.field {
            return Err(ModError::Mismatch("tensor factors over different fields".into()));
        }
        let da = a.gens.first().map_or(0, Perm::degree);
        let db = b.gens.first().map_or(0, Perm::degree);
        let n = da + db;
        let ia = Mat::identity(&a.field, a.dim);
        let ib = Mat::identity(&b.field, b.dim);
        let mut gens = Vec::new();
        let mut mats = Vec::new();
        for (g, m) in a.gens.iter().zip(&a.mats) {
            gens.push(shifted(g, 0, n));
            mats.push(m.kron(&ib));
        }
        for (g, m) in b.gens.iter().zip(&b.mats) {
            gens.push(shifted(g, da, n));
            mats.push(ia.kron(m));
        }
        Restricted::new(format!("{}x{}", a.label, b.label), gens, mats, &a.field, a.dim * b.dim)
    }

    pub fn loewy(&self) -> Result<LoewySeries, ModError> {
        loewy_series(&self.field, self.dim, self.mats.clone())
    }

    /// All group elements with their matrices, by breadth-first search.
    /// Fails if two words for the same permutation act differently.
    pub fn group_matrices(&self, cap: usize) -> Result<Vec<(Perm, Mat)>, ModError> {
        let Some(first) = self.gens.first() else {
            return Ok(vec![(Perm::identity(0), Mat::identity(&self.field, self.dim))]);
        };
        let n = first.degree();
        let mut seen: HashMap<u64, usize> = HashMap::new();
        let mut out = vec![(Perm::identity(n), Mat::identity(&self.field, self.dim))];
        seen.insert(out[0].0.pack(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (g, m) in self.gens.iter().zip(&self.mats) {
                let y = out[x].0.compose(g);
                let my = out[x].1.mul(m);
                if let Some(&j) = seen.get(&y.pack()) {
                    if out[j].1 != my {
                        return Err(ModError::Inconsistent(format!("{}: two actions of {y}", self.label)));
                    }
                    continue;
                }
                if out.len() >= cap {
                    return Err(ModError::CapExceeded(format!("{}: more than {cap} elements", self.label)));
                }
                seen.insert(y.pack(), out.len());
                queue.push_back(out.len());
                out.push((y, my));
            }
        }
        Ok(out)
    }

    /// Rank of the norm element `Σ_h h`.
    pub fn norm_rank(&self, cap: usize) -> Result<usize, ModError> {
        let elems = self.group_matrices(cap)?;
        let mut norm = Mat::zeros(&self.field, self.dim, self.dim);
        for (_, m) in &elems {
            norm = norm.add(m);
        }
        Ok(norm.rank())
    }

    pub fn fingerprint(&self, cap: usize) -> Result<Fingerprint, ModError> {
        if self.dim == 0 {
            return Ok(Fingerprint { dim: 0, layers: Vec::new(), free_count: 0, fixed_dims: Vec::new() });
        }
        let fixed_dims = self
            .mats
            .iter()
            .map(|m| Ok(joint_fixed_space(&self.field, self.dim, std::slice::from_ref(m))?.dim()))
            .collect::<Result<Vec<_>, ModError>>()?;
        Ok(Fingerprint {
            dim: self.dim,
            layers: self.loewy()?.layer_dims,
            free_count: self.norm_rank(cap)?,
            fixed_dims,
        })
    }
}

/// Repeatedly quotients by the joint invariants. Every layer is nonzero for
/// a p-group in characteristic p; an empty layer is reported as an error.
pub fn loewy_series(field: &FieldSpec, dim: usize, mut mats: Vec<Mat>) -> Result<LoewySeries, ModError> {
    let mut layers = Vec::new();
    let mut d = dim;
    while d > 0 {
        let fixed = joint_fixed_space(field, d, &mats)?;
        if fixed.dim() == 0 {
            return Err(ModError::NotPGroup(format!("no invariants after {} layers", layers.len())));
        }
        layers.push(fixed.dim());
        mats = quotient_action(&mats, &fixed)?;
        d -= fixed.dim();
    }
    Ok(LoewySeries { length: layers.len(), layer_dims: layers })
}

fn check_p_group(h: &GroupPresentation, p: u64) -> Result<(), ModError> {
    for g in h.perm_gens()? {
        let mut o = g.order();
        while o % p == 0 {
            o /= p;
        }
        if o != 1 {
            return Err(ModError::NotPGroup(format!("{}: generator {g} has order {}", h.label, g.order())));
        }
    }
    Ok(())
}

pub fn loewy_length(module: &GModule, h: &GroupPresentation) -> Result<LoewySeries, ModError> {
    check_p_group(h, module.field.p())?;
    module.restrict(h)?.loewy()
}

/// Multiplicity of the free summand of the restriction to an elementary
/// abelian p-group, as the rank of the norm element.
pub fn free_summand_count(module: &GModule, h: &GroupPresentation, cap: usize) -> Result<usize, ModError> {
    if is_elementary_abelian(h, module.field.p(), cap)?.is_none() {
        return Err(ModError::NotElementaryAbelian(h.label.clone()));
    }
    module.restrict(h)?.norm_rank(cap)
}

/// Jordan block sizes of `g` (of order p), largest first.
pub fn cyclic_profile(module: &GModule, g: &Perm) -> Result<Vec<usize>, ModError> {
    let p = module.field.p();
    if g.order() != p {
        return Err(ModError::Mismatch(format!("{g} has order {}, not {p}", g.order())));
    }
    jordan_profile(&module.act_by_perm(g)?, p as usize)
}

/// Block sizes of a unipotent matrix with `(a - 1)^p = 0`, from the ranks of
/// the powers of `a - 1`.
pub fn jordan_profile(a: &Mat, p: usize) -> Result<Vec<usize>, ModError> {
    let x = a.minus_identity();
    let mut ranks = vec![a.rows()];
    let mut power = Mat::identity(a.field(), a.rows());
    for _ in 0..p {
        power = power.mul(&x);
        ranks.push(power.rank());
    }
    if ranks[p] != 0 {
        return Err(ModError::Mismatch("matrix is not unipotent of exponent p".into()));
    }
    ranks.push(0);
    // blocks of size >= k: ranks[k-1] - ranks[k]
    let mut blocks = Vec::new();
    for k in (1..=p).rev() {
        let exact = (ranks[k - 1] - ranks[k]) - (ranks[k] - ranks[k + 1]);
        blocks.extend(std::iter::repeat(k).take(exact));
    }
    Ok(blocks)
}

pub fn tensor_module(a: &GModule, b: &GModule) -> Result<GModule, ModError> {
    if a.n != b.n || a.field != b.field {
        return Err(ModError::Mismatch(format!("{} and {} differ in degree or field", a.label, b.label)));
    }
    let gens = a.gen_actions.iter().zip(&b.gen_actions).map(|(x, y)| x.kron(y)).collect();
    GModule::new(a.n, &a.field, a.dim * b.dim, gens, format!("{}⊗{}", a.label, b.label))
}

pub fn fingerprint(module: &GModule, h: &GroupPresentation, cap: usize) -> Result<Fingerprint, ModError> {
    check_p_group(h, module.field.p())?;
    module.restrict(h)?.fingerprint(cap)
}

/// Restriction to `S_m` acting on the first `m` points.
pub fn restrict_to_prefix(module: &GModule, m: usize) -> Result<GModule, ModError> {
    if m == 0 || m > module.n {
        return Err(ModError::Mismatch(format!("S{m} inside S{}", module.n)));
    }
    GModule::new(m, &module.field, module.dim, module.gen_actions[..m - 1].to_vec(), format!("Res{m} {}", module.label))
}

/// `M(2k)`: the restriction of `D^{(k+1,k)}` to `S_{2k}`, over GF(2).
pub fn m_module(k: usize) -> Result<GModule, ModError> {
    let f = crate::gf::make_field(2, 1).map_err(LaError::from)?;
    let d = irreducible_d(&Partition::new(vec![k + 1, k])?, &f)?;
    let mut m = restrict_to_prefix(&d, 2 * k)?;
    m.label = format!("M({})", 2 * k);
    Ok(m)
}
