use std::collections::HashSet;

use rayon::prelude::*;

use crate::exactla::{Mat, Subspace};
use crate::gf::FieldSpec;
use crate::grp::{closure, matrix_closure, GroupPresentation, Perm};
use crate::lietype::unipotent_constraint_nullity;

use super::{dickson_form, DicksonError, FormSpec, Representation};

/// A pair of dual Lagrangians for Dickson's form on `F_2^{2d}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangianPair {
    /// `span(ω_i)`, `ω_i = e_{2i-1} + e_{2i}`.
    pub w: Subspace,
    /// `span(ω_i^∨)`, `ω_i^∨ = e_1 + … + e_{2i-1}`.
    pub w_dual: Subspace,
    /// `B(ω_i, ω_j^∨)`.
    pub duality: Mat,
    pub omega: Vec<Vec<u64>>,
    pub omega_dual: Vec<Vec<u64>>,
}

pub fn lagrangian_pair(d: usize) -> Result<LagrangianPair, DicksonError> {
    let form = dickson_form(d)?;
    let f = form.gram().field().clone();
    let n = 2 * d;
    let omega: Vec<Vec<u64>> = (0..d)
        .map(|i| (0..n).map(|j| u64::from(j == 2 * i || j == 2 * i + 1)).collect())
        .collect();
    let omega_dual: Vec<Vec<u64>> = (0..d).map(|i| (0..n).map(|j| u64::from(j <= 2 * i)).collect()).collect();
    let mut duality = Mat::zeros(&f, d, d);
    for i in 0..d {
        for j in 0..d {
            duality.set(i, j, form.bilinear(&omega[i], &omega_dual[j]));
        }
    }
    if !duality.is_identity() {
        return Err(DicksonError::Inconsistent("ω and ω^∨ are not dual bases".into()));
    }
    for basis in [&omega, &omega_dual] {
        for a in basis.iter() {
            for b in basis.iter() {
                if form.bilinear(a, b) != 0 {
                    return Err(DicksonError::Inconsistent("Lagrangian basis is not isotropic".into()));
                }
            }
        }
    }
    let w = Subspace::from_vectors(&f, n, &omega);
    let w_dual = Subspace::from_vectors(&f, n, &omega_dual);
    Ok(LagrangianPair { w, w_dual, duality, omega, omega_dual })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParabolicMode {
    /// Enumerate the group and filter.
    ExactEnum { cap: usize },
    /// Check that the given witness subgroup lies in the intersection.
    CertifiedBound { witness: GroupPresentation },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicResult {
    /// `log_p` of the order of the intersection (or of the witness image).
    pub rank: usize,
    pub order: usize,
    pub witness: Vec<Perm>,
    pub exact: bool,
    /// Elements acting trivially on V; present in exact mode only.
    pub kernel_size: Option<usize>,
}

/// Test for `(g - I)V ⊆ W` and `(g - I)W = 0`.
struct TrivialOnFlag {
    w: Subspace,
    /// GF(2) fast path: RREF rows of W as bitmasks with their pivot bits.
    packed: Option<Vec<(u64, u64)>>,
    w_masks: Vec<u64>,
}

impl TrivialOnFlag {
    fn new(w: &Subspace) -> Self {
        let gf2 = w.field().is_gf2() && w.ambient_dim() <= 64;
        let to_mask = |row: &[u64]| row.iter().enumerate().fold(0u64, |m, (i, &x)| m | (x << i));
        let (packed, w_masks) = if gf2 {
            let rows: Vec<(u64, u64)> = (0..w.dim())
                .map(|r| (to_mask(w.basis().row(r)), 1u64 << w.pivots()[r]))
                .collect();
            let masks = rows.iter().map(|r| r.0).collect();
            (Some(rows), masks)
        } else {
            (None, Vec::new())
        };
        TrivialOnFlag { w: w.clone(), packed, w_masks }
    }

    fn in_w_mask(rows: &[(u64, u64)], mut v: u64) -> bool {
        for &(row, pivot) in rows {
            if v & pivot != 0 {
                v ^= row;
            }
        }
        v == 0
    }

    fn check_columns(&self, cols: &[u64]) -> bool {
        let rows = self.packed.as_ref().expect("GF(2) path");
        let apply = |v: u64| {
            let mut out = 0;
            let mut bits = v;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                out ^= cols[i];
                bits &= bits - 1;
            }
            out
        };
        if self.w_masks.iter().any(|&w| apply(w) != w) {
            return false;
        }
        cols.iter().enumerate().all(|(j, &c)| Self::in_w_mask(rows, c ^ (1u64 << j)))
    }

    fn check_matrix(&self, g: &Mat) -> bool {
        let d = g.minus_identity();
        if !d.mul(&self.w.basis().transpose()).is_zero() {
            return false;
        }
        (0..d.cols()).all(|j| self.w.contains(&d.col(j)))
    }

    fn check(&self, rep: &Representation, g: &Perm) -> Result<bool, DicksonError> {
        if self.packed.is_some() {
            if let Some(cols) = rep.image_columns_gf2(g) {
                return Ok(self.check_columns(&cols));
            }
        }
        Ok(self.check_matrix(&rep.image_of(g)?))
    }
}

fn check_w(rep: &Representation, w: &Subspace) -> Result<(), DicksonError> {
    if w.ambient_dim() != rep.dim || w.field() != &rep.field {
        return Err(DicksonError::DimensionMismatch(format!(
            "subspace of F^{} for a representation of dimension {}",
            w.ambient_dim(),
            rep.dim
        )));
    }
    Ok(())
}

/// `log_p` of `size`, if it is a power of `p`.
fn log_p(mut size: usize, p: u64) -> Option<usize> {
    let mut k = 0;
    while size > 1 {
        if size % p as usize != 0 {
            return None;
        }
        size /= p as usize;
        k += 1;
    }
    Some(k)
}

/// Greedy generating set of a finite elementary abelian group of perms.
fn greedy_generators(elements: &[Perm], p: u64) -> Vec<Perm> {
    let Some(first) = elements.first() else {
        return Vec::new();
    };
    let mut span: HashSet<Perm> = [Perm::identity(first.degree())].into_iter().collect();
    let mut gens = Vec::new();
    for x in elements {
        if span.contains(x) {
            continue;
        }
        let mut next = HashSet::with_capacity(span.len() * p as usize);
        let mut power = Perm::identity(x.degree());
        for _ in 0..p {
            next.extend(span.iter().map(|s| s.compose(&power)));
            power = power.compose(x);
        }
        span = next;
        gens.push(*x);
    }
    gens
}

fn verify_elementary_abelian(elements: &[Perm], p: u64) -> Result<usize, DicksonError> {
    let set: HashSet<&Perm> = elements.iter().collect();
    for a in elements {
        if !a.pow(p).is_identity() {
            return Err(DicksonError::NotElementaryAbelian(format!("{a} has order {}", a.order())));
        }
        for b in elements {
            let ab = a.compose(b);
            if ab != b.compose(a) || !set.contains(&ab) {
                return Err(DicksonError::NotElementaryAbelian(format!("{a} and {b}")));
            }
        }
    }
    log_p(elements.len(), p).ok_or_else(|| DicksonError::NotElementaryAbelian(format!("order {}", elements.len())))
}

/// The subgroup of elements acting trivially on `W` and on `V/W`.
///
/// For a Lagrangian `W` of an invariant symplectic form this is the
/// intersection of the group with the unipotent radical of the Siegel
/// parabolic `Stab(W)`.
pub fn parabolic_trivial_subgroup(
    rep: &Representation,
    w: &Subspace,
    mode: &ParabolicMode,
) -> Result<ParabolicResult, DicksonError> {
    check_w(rep, w)?;
    let p = rep.field.p();
    let test = TrivialOnFlag::new(w);
    match mode {
        ParabolicMode::ExactEnum { cap } => {
            let group = closure(&rep.group, *cap)?;
            if !group.complete {
                return Err(DicksonError::CapExceeded(*cap));
            }
            let flags: Vec<Result<(bool, bool), DicksonError>> = group
                .elements
                .par_iter()
                .with_min_len(4096)
                .map(|g| {
                    let keep = test.check(rep, g)?;
                    let trivial = keep && rep.image_of(g)?.is_identity();
                    Ok((keep, trivial))
                })
                .collect();
            let mut kept = Vec::new();
            let mut kernel = 0;
            for (g, flag) in group.elements.iter().zip(flags) {
                let (keep, trivial) = flag?;
                if keep {
                    kept.push(*g);
                }
                kernel += usize::from(trivial);
            }
            let rank = verify_elementary_abelian(&kept, p)?;
            Ok(ParabolicResult {
                rank,
                order: kept.len(),
                witness: greedy_generators(&kept, p),
                exact: true,
                kernel_size: Some(kernel),
            })
        }
        ParabolicMode::CertifiedBound { witness } => {
            let gens = witness.perm_gens()?;
            let mut images = Vec::with_capacity(gens.len());
            for g in gens {
                if !test.check(rep, g)? {
                    return Err(DicksonError::NotInSubgroup(g.to_cycles()));
                }
                images.push(rep.image_of(g)?);
            }
            let perm_rank = crate::grp::is_elementary_abelian(witness, p, crate::grp::DEFAULT_CAP)?
                .ok_or_else(|| DicksonError::NotElementaryAbelian(witness.label.clone()))?;
            let pres = GroupPresentation::matrix(witness.label.clone(), &rep.field, rep.dim, images)?;
            let image = matrix_closure(&pres, crate::grp::DEFAULT_CAP)?;
            let rank = log_p(image.len(), p)
                .ok_or_else(|| DicksonError::NotElementaryAbelian(format!("image of order {}", image.len())))?;
            if rank != perm_rank {
                return Err(DicksonError::Inconsistent(format!(
                    "witness of rank {perm_rank} has image of rank {rank}"
                )));
            }
            Ok(ParabolicResult { rank, order: image.len(), witness: gens.to_vec(), exact: false, kernel_size: None })
        }
    }
}

/// True iff every generator of `h` acts trivially on `W` and on `V/W`.
pub fn gl_parabolic_check(rep: &Representation, w: &Subspace, h: &GroupPresentation) -> Result<bool, DicksonError> {
    check_w(rep, w)?;
    let test = TrivialOnFlag::new(w);
    for g in h.perm_gens()? {
        if g.degree() != rep.group.degree() {
            return Err(DicksonError::NotExpressible(g.to_cycles()));
        }
        if !test.check_matrix(&rep.image_of(g)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dimension of `{I + φ : φ ∈ Hom(V/W, W)}` inside `Sp_{2g}` for the
/// Lagrangian `W = V ⊕ 0` of `V ⊕ V^∨`.
pub fn siegel_unipotent_dim(g: usize, field: &FieldSpec) -> Result<usize, DicksonError> {
    let form = FormSpec::standard_symplectic(field, g);
    let (nullity, _) = unipotent_constraint_nullity(form.gram(), None, g)
        .map_err(|e| DicksonError::Inconsistent(e.to_string()))?;
    Ok(nullity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dickson::{dickson_half_dim, perm_irrep, perm_irrep_on, permutation_rep};
    use crate::gf::make_field;
    use crate::grp::{special_subgroups, standard_gens, SpecialKind, StandardKind};

    #[test]
    fn lagrangian_pair_examples() {
        let lp = lagrangian_pair(2).unwrap();
        let form = dickson_form(2).unwrap();
        assert_eq!(form.bilinear(&lp.omega[0], &lp.omega_dual[0]), 1);
        assert_eq!(form.bilinear(&lp.omega[0], &lp.omega[1]), 0);
        for d in 1..=8 {
            let lp = lagrangian_pair(d).unwrap();
            assert!(lp.duality.is_identity());
            assert_eq!((lp.w.dim(), lp.w_dual.dim()), (d, d));
        }
    }

    /// ω^∨ summed from index 0 (read as e_1 + … + e_{2i}) breaks duality.
    #[test]
    fn other_start_index_fails_duality() {
        let form = dickson_form(3).unwrap();
        let lp = lagrangian_pair(3).unwrap();
        let shifted: Vec<Vec<u64>> = (0..3).map(|i| (0..6).map(|j| u64::from(j <= 2 * i + 1)).collect()).collect();
        let dual: Vec<u64> = (0..3).map(|i| form.bilinear(&lp.omega[i], &shifted[i])).collect();
        assert_ne!(dual, vec![1, 1, 1]);
    }

    #[test]
    fn s8_and_a8_intersections() {
        let rep = perm_irrep(8, 2).unwrap();
        let w = lagrangian_pair(dickson_half_dim(8)).unwrap().w;
        let r = parabolic_trivial_subgroup(&rep, &w, &ParabolicMode::ExactEnum { cap: 100_000 }).unwrap();
        assert_eq!((r.rank, r.exact, r.kernel_size), (4, true, Some(1)));
        assert_eq!(r.witness.len(), 4);

        let a8 = perm_irrep_on(&standard_gens(StandardKind::Alt, 8).unwrap(), 2).unwrap();
        let r = parabolic_trivial_subgroup(&a8, &w, &ParabolicMode::ExactEnum { cap: 100_000 }).unwrap();
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn generic_path_agrees_with_bitmasks() {
        let rep = perm_irrep(7, 2).unwrap();
        let w = lagrangian_pair(dickson_half_dim(7)).unwrap().w;
        let test = TrivialOnFlag::new(&w);
        for g in closure(&rep.group, 10_000).unwrap().elements.iter().step_by(7) {
            let m = rep.image_of(g).unwrap();
            assert_eq!(test.check(&rep, g).unwrap(), test.check_matrix(&m), "{g}");
        }
    }

    #[test]
    fn trivial_group_has_rank_zero() {
        let f = make_field(2, 1).unwrap();
        let g = GroupPresentation::permutation("1", 5, vec![]).unwrap();
        let rep = permutation_rep(&g, &f).unwrap();
        let w = crate::dickson::coordinate_subspace(&f, 5, 2);
        let r = parabolic_trivial_subgroup(&rep, &w, &ParabolicMode::ExactEnum { cap: 10 }).unwrap();
        assert_eq!((r.rank, r.order), (0, 1));
    }

    #[test]
    fn certified_witnesses() {
        for n in [11usize, 12] {
            let rep = perm_irrep(n, 2).unwrap();
            let w = lagrangian_pair(dickson_half_dim(n)).unwrap().w;
            let h = special_subgroups(n, SpecialKind::H).unwrap();
            let r = parabolic_trivial_subgroup(&rep, &w, &ParabolicMode::CertifiedBound { witness: h }).unwrap();
            assert_eq!((r.rank, r.exact), (n / 2, false));
            let ht = special_subgroups(n, SpecialKind::TildeH).unwrap();
            let r = parabolic_trivial_subgroup(&rep, &w, &ParabolicMode::CertifiedBound { witness: ht }).unwrap();
            assert_eq!(r.rank, n / 2 - 1);
        }
        let rep = perm_irrep(6, 2).unwrap();
        let w = lagrangian_pair(2).unwrap().w;
        let c3 = GroupPresentation::permutation("C3", 6, vec![Perm::from_cycles("(1 2 3)", 6).unwrap()]).unwrap();
        let r = parabolic_trivial_subgroup(&rep, &w, &ParabolicMode::CertifiedBound { witness: c3 });
        assert!(matches!(r, Err(DicksonError::NotInSubgroup(_))));
    }

    #[test]
    fn gl_parabolic_examples() {
        let f = make_field(2, 1).unwrap();
        let s6 = standard_gens(StandardKind::Sym, 6).unwrap();
        let rep = permutation_rep(&s6, &f).unwrap();
        let w = Subspace::from_vectors(
            &f,
            6,
            &[vec![1, 1, 0, 0, 0, 0], vec![0, 0, 1, 1, 0, 0], vec![0, 0, 0, 0, 1, 1]],
        );
        let h = special_subgroups(6, SpecialKind::H).unwrap();
        assert!(gl_parabolic_check(&rep, &w, &h).unwrap());
        // oracle: each transposition (2i-1 2i) moves δ_{2i-1} by δ_{2i-1} + δ_{2i} ∈ W
        for g in h.perm_gens().unwrap() {
            let m = rep.image_of(g).unwrap().minus_identity();
            assert!((0..6).all(|j| w.contains(&m.col(j))));
        }
        let trivial = GroupPresentation::permutation("1", 6, vec![]).unwrap();
        assert!(gl_parabolic_check(&rep, &w, &trivial).unwrap());
        let c3 = GroupPresentation::permutation("C3", 6, vec![Perm::from_cycles("(1 2 3)", 6).unwrap()]).unwrap();
        assert!(!gl_parabolic_check(&rep, &w, &c3).unwrap());
    }

    #[test]
    fn siegel_dimension_is_binomial() {
        for p in [2u64, 3, 5] {
            let f = make_field(p, 1).unwrap();
            for g in 1..=5 {
                assert_eq!(siegel_unipotent_dim(g, &f).unwrap(), g * (g + 1) / 2);
            }
        }
    }
}
