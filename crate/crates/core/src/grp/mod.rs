//! Permutation and matrix groups given by generators: bounded enumeration,
//! elementary abelian tests, rank search and the standard subgroups of S_n.

mod perm;
mod search;

use std::collections::{HashSet, VecDeque};
use std::hash::Hash;

use thiserror::Error;

use crate::exactla::Mat;
use crate::gf::FieldSpec;

pub use perm::{Perm, MAX_DEGREE};
pub use search::{elem_abelian_rank_search, RankSearch};

/// Default element cap for enumeration: S_10 fits, S_11 does not.
pub const DEFAULT_CAP: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrpError {
    #[error("image array is not a bijection")]
    NotBijection,
    #[error("degree {0} exceeds the supported maximum")]
    DegreeTooLarge(usize),
    #[error("malformed cycle notation: {0:?}")]
    MalformedCycle(String),
    #[error("point {point} outside 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("enumeration exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("expected a permutation presentation")]
    NotPermutation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generators {
    Permutation { degree: usize, gens: Vec<Perm> },
    Matrix { size: usize, field: FieldSpec, gens: Vec<Mat> },
}

/// A group given by a list of generators and a human-readable label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub label: String,
    pub generators: Generators,
}

impl GroupPresentation {
    pub fn permutation(label: impl Into<String>, degree: usize, gens: Vec<Perm>) -> Result<Self, GrpError> {
        if degree > MAX_DEGREE {
            return Err(GrpError::DegreeTooLarge(degree));
        }
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(GrpError::DegreeMismatch(g.degree(), degree));
        }
        Ok(GroupPresentation { label: label.into(), generators: Generators::Permutation { degree, gens } })
    }

    pub fn matrix(label: impl Into<String>, field: &FieldSpec, size: usize, gens: Vec<Mat>) -> Result<Self, GrpError> {
        for g in &gens {
            if g.rows() != size || g.cols() != size || g.field() != field {
                return Err(GrpError::OutOfRange("matrix generator of the wrong shape or field".into()));
            }
        }
        Ok(GroupPresentation {
            label: label.into(),
            generators: Generators::Matrix { size, field: field.clone(), gens },
        })
    }

    pub fn perm_gens(&self) -> Result<&[Perm], GrpError> {
        match &self.generators {
            Generators::Permutation { gens, .. } => Ok(gens),
            Generators::Matrix { .. } => Err(GrpError::NotPermutation),
        }
    }

    /// Degree of a permutation group, or matrix size.
    pub fn degree(&self) -> usize {
        match &self.generators {
            Generators::Permutation { degree, .. } => *degree,
            Generators::Matrix { size, .. } => *size,
        }
    }

    pub fn num_gens(&self) -> usize {
        match &self.generators {
            Generators::Permutation { gens, .. } => gens.len(),
            Generators::Matrix { gens, .. } => gens.len(),
        }
    }

    /// Generators rendered in 1-based cycle notation.
    pub fn cycle_strings(&self) -> Vec<String> {
        match &self.generators {
            Generators::Permutation { gens, .. } => gens.iter().map(Perm::to_cycles).collect(),
            Generators::Matrix { .. } => Vec::new(),
        }
    }
}

/// Result of a bounded closure: sorted elements, plus whether the closure finished.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementSet<T> {
    pub elements: Vec<T>,
    pub complete: bool,
}

impl<T> ElementSet<T> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn bfs_closure<T, K, F, M>(identity: T, gens: &[T], cap: usize, key: F, mul: M) -> ElementSet<T>
where
    T: Clone + Ord,
    K: Hash + Eq,
    F: Fn(&T) -> K,
    M: Fn(&T, &T) -> T,
{
    let mut seen = HashSet::new();
    let mut elements = Vec::new();
    let mut queue = VecDeque::new();
    if cap == 0 {
        return ElementSet { elements, complete: false };
    }
    seen.insert(key(&identity));
    elements.push(identity.clone());
    queue.push_back(identity);
    let mut complete = true;
    'outer: while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = mul(&x, g);
            let k = key(&y);
            if seen.contains(&k) {
                continue;
            }
            if elements.len() >= cap {
                complete = false;
                break 'outer;
            }
            seen.insert(k);
            elements.push(y.clone());
            queue.push_back(y);
        }
    }
    elements.sort();
    ElementSet { elements, complete }
}

/// Breadth-first product closure of a permutation presentation, capped at
/// `cap` elements. Hitting the cap is reported through `complete = false`.
pub fn closure(group: &GroupPresentation, cap: usize) -> Result<ElementSet<Perm>, GrpError> {
    let Generators::Permutation { degree, gens } = &group.generators else {
        return Err(GrpError::NotPermutation);
    };
    Ok(bfs_closure(Perm::identity(*degree), gens, cap, Perm::pack, |x, g| x.compose(g)))
}

/// Closure of a matrix presentation.
pub fn matrix_closure(group: &GroupPresentation, cap: usize) -> Result<ElementSet<Mat>, GrpError> {
    match &group.generators {
        Generators::Matrix { size, field, gens } => {
            Ok(bfs_closure(Mat::identity(field, *size), gens, cap, |m| m.data().to_vec(), |x, g| x.mul(g)))
        }
        Generators::Permutation { .. } => Err(GrpError::OutOfRange("expected a matrix presentation".into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardKind {
    Sym,
    Alt,
}

fn cycle(points: impl IntoIterator<Item = usize>, n: usize) -> Perm {
    let pts: Vec<usize> = points.into_iter().collect();
    let mut images: Vec<usize> = (0..n).collect();
    for w in 0..pts.len() {
        images[pts[w]] = pts[(w + 1) % pts.len()];
    }
    Perm::from_images(&images).expect("cycle on distinct points")
}

/// Product of disjoint transpositions on 0-based point pairs.
fn involution(pairs: &[(usize, usize)], n: usize) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    for &(a, b) in pairs {
        images.swap(a, b);
    }
    Perm::from_images(&images).expect("disjoint transpositions")
}

/// `S_n = <(1 2), (1 2 … n)>`; `A_n = <(1 2 3), c>` with `c` the even long
/// cycle `(1 2 … n)` for odd `n` and `(2 3 … n)` for even `n`.
pub fn standard_gens(kind: StandardKind, n: usize) -> Result<GroupPresentation, GrpError> {
    if n > MAX_DEGREE {
        return Err(GrpError::DegreeTooLarge(n));
    }
    match kind {
        StandardKind::Sym => {
            if n == 0 {
                return Err(GrpError::OutOfRange("S_n needs n >= 1".into()));
            }
            let gens = if n == 1 { Vec::new() } else { vec![cycle([0, 1], n), cycle(0..n, n)] };
            GroupPresentation::permutation(format!("S{n}"), n, gens)
        }
        StandardKind::Alt => {
            if n < 3 {
                return Err(GrpError::OutOfRange("A_n needs n >= 3".into()));
            }
            let long = if n % 2 == 1 { cycle(0..n, n) } else { cycle(1..n, n) };
            GroupPresentation::permutation(format!("A{n}"), n, vec![cycle([0, 1, 2], n), long])
        }
    }
}

/// The named elementary abelian 2-subgroups of S_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialKind {
    /// `H_n = <(1 2), (3 4), …>`
    H,
    /// `K^m × H_{n-4m}`, Klein four-groups on the first `m` blocks of four points.
    KPowerH(usize),
    /// `H̃_n = H_n ∩ A_n = <(1 2)(3 4), (1 2)(5 6), …>`
    TildeH,
    /// `K^m × H̃_{n-4m}`
    KPowerTildeH(usize),
}

fn klein_gens(block: usize, n: usize) -> [Perm; 2] {
    let b = 4 * block;
    [involution(&[(b, b + 1), (b + 2, b + 3)], n), involution(&[(b, b + 2), (b + 1, b + 3)], n)]
}

fn h_gens(offset: usize, n: usize) -> Vec<Perm> {
    (0..(n - offset) / 2).map(|i| involution(&[(offset + 2 * i, offset + 2 * i + 1)], n)).collect()
}

fn tilde_h_gens(offset: usize, n: usize) -> Vec<Perm> {
    let pairs = (n - offset) / 2;
    (1..pairs)
        .map(|i| involution(&[(offset, offset + 1), (offset + 2 * i, offset + 2 * i + 1)], n))
        .collect()
}

pub fn special_subgroups(n: usize, kind: SpecialKind) -> Result<GroupPresentation, GrpError> {
    if n == 0 || n > MAX_DEGREE {
        return Err(GrpError::OutOfRange(format!("degree {n}")));
    }
    let (label, gens) = match kind {
        SpecialKind::H => (format!("H{n}"), h_gens(0, n)),
        SpecialKind::TildeH => (format!("~H{n}"), tilde_h_gens(0, n)),
        SpecialKind::KPowerH(m) | SpecialKind::KPowerTildeH(m) => {
            if 4 * m > n {
                return Err(GrpError::OutOfRange(format!("K^{m} needs 4m <= n = {n}")));
            }
            let mut gens: Vec<Perm> = (0..m).flat_map(|b| klein_gens(b, n)).collect();
            let tilde = matches!(kind, SpecialKind::KPowerTildeH(_));
            if tilde {
                gens.extend(tilde_h_gens(4 * m, n));
            } else {
                gens.extend(h_gens(4 * m, n));
            }
            let rest = if tilde { "~H" } else { "H" };
            (format!("K^{m}x{rest}{}", n - 4 * m), gens)
        }
    };
    GroupPresentation::permutation(label, n, gens)
}

/// Klein four-group `{e, (12)(34), (13)(24), (14)(23)}` inside S_n.
pub fn klein_four(n: usize) -> Result<GroupPresentation, GrpError> {
    if n < 4 {
        return Err(GrpError::OutOfRange("K needs n >= 4".into()));
    }
    GroupPresentation::permutation("K", n, klein_gens(0, n).to_vec())
}

/// `Some(rank)` when the group is elementary abelian of exponent `p`,
/// `None` otherwise.
pub fn is_elementary_abelian(group: &GroupPresentation, p: u64, cap: usize) -> Result<Option<usize>, GrpError> {
    let gens = group.perm_gens()?;
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            if a.compose(b) != b.compose(a) {
                return Ok(None);
            }
        }
    }
    let set = closure(group, cap)?;
    if !set.complete {
        return Err(GrpError::CapExceeded(cap));
    }
    if set.elements.iter().any(|x| !x.pow(p).is_identity()) {
        return Ok(None);
    }
    let mut size = set.len();
    let mut rank = 0;
    while size > 1 {
        if size % p as usize != 0 {
            return Ok(None);
        }
        size /= p as usize;
        rank += 1;
    }
    Ok(Some(rank))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str, n: usize) -> Perm {
        Perm::from_cycles(s, n).unwrap()
    }

    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn standard_group_orders() {
        for n in 1..=8 {
            let s = closure(&standard_gens(StandardKind::Sym, n).unwrap(), DEFAULT_CAP).unwrap();
            assert!(s.complete);
            assert_eq!(s.len(), factorial(n), "S_{n}");
            if n >= 3 {
                let a = closure(&standard_gens(StandardKind::Alt, n).unwrap(), DEFAULT_CAP).unwrap();
                assert_eq!(a.len(), factorial(n) / 2, "A_{n}");
                assert!(a.elements.iter().all(Perm::is_even));
            }
        }
        assert!(standard_gens(StandardKind::Alt, 2).is_err());
        assert!(standard_gens(StandardKind::Sym, 0).is_err());
    }

    #[test]
    fn closure_examples() {
        let g = GroupPresentation::permutation("C2", 4, vec![perm("(1 2)", 4)]).unwrap();
        let c = closure(&g, 10).unwrap();
        assert!(c.complete);
        assert_eq!(c.elements, vec![Perm::identity(4), perm("(1 2)", 4)]);

        let s10 = standard_gens(StandardKind::Sym, 10).unwrap();
        let partial = closure(&s10, 1_000_000).unwrap();
        assert!(!partial.complete);
        assert_eq!(partial.len(), 1_000_000);

        let k = klein_four(4).unwrap();
        let kc = closure(&k, 100).unwrap();
        let expected: Vec<Perm> = ["()", "(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)"].iter().map(|s| perm(s, 4)).collect();
        let mut expected = expected;
        expected.sort();
        assert_eq!(kc.elements, expected);
    }

    #[test]
    fn closure_is_sorted_and_deterministic() {
        let g = standard_gens(StandardKind::Sym, 5).unwrap();
        let a = closure(&g, DEFAULT_CAP).unwrap();
        let b = closure(&g, DEFAULT_CAP).unwrap();
        assert_eq!(a, b);
        assert!(a.elements.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn matrix_closure_of_a_unipotent() {
        let f = crate::gf::make_field(3, 1).unwrap();
        let u = Mat::from_ints(&f, &[vec![1, 1], vec![0, 1]]);
        let g = GroupPresentation::matrix("U", &f, 2, vec![u]).unwrap();
        assert_eq!(matrix_closure(&g, 100).unwrap().len(), 3);
    }

    #[test]
    fn elementary_abelian_examples() {
        assert_eq!(is_elementary_abelian(&klein_four(4).unwrap(), 2, 100).unwrap(), Some(2));
        let c3 = GroupPresentation::permutation("C3", 3, vec![perm("(1 2 3)", 3)]).unwrap();
        assert_eq!(is_elementary_abelian(&c3, 3, 100).unwrap(), Some(1));
        let s3 = standard_gens(StandardKind::Sym, 3).unwrap();
        assert_eq!(is_elementary_abelian(&s3, 2, 100).unwrap(), None);
        let c4 = GroupPresentation::permutation("C4", 4, vec![perm("(1 2 3 4)", 4)]).unwrap();
        assert_eq!(is_elementary_abelian(&c4, 2, 100).unwrap(), None);
    }

    #[test]
    fn special_subgroup_ranks() {
        for n in 1..=12 {
            let h = special_subgroups(n, SpecialKind::H).unwrap();
            assert_eq!(is_elementary_abelian(&h, 2, 1 << 12).unwrap(), Some(n / 2));
            if n >= 2 {
                let t = special_subgroups(n, SpecialKind::TildeH).unwrap();
                assert_eq!(is_elementary_abelian(&t, 2, 1 << 12).unwrap(), Some(n / 2 - 1));
                assert!(t.perm_gens().unwrap().iter().all(Perm::is_even));
            }
            for m in 0..=n / 4 {
                let k = special_subgroups(n, SpecialKind::KPowerH(m)).unwrap();
                assert_eq!(is_elementary_abelian(&k, 2, 1 << 12).unwrap(), Some(2 * m + (n - 4 * m) / 2));
                let kt = special_subgroups(n, SpecialKind::KPowerTildeH(m)).unwrap();
                let tilde_rank = ((n - 4 * m) / 2).saturating_sub(1);
                assert_eq!(is_elementary_abelian(&kt, 2, 1 << 12).unwrap(), Some(2 * m + tilde_rank));
            }
        }
        let kh = special_subgroups(8, SpecialKind::KPowerH(1)).unwrap();
        assert_eq!(is_elementary_abelian(&kh, 2, 1000).unwrap(), Some(4));
        assert!(special_subgroups(7, SpecialKind::KPowerH(2)).is_err());
        let t6 = special_subgroups(6, SpecialKind::TildeH).unwrap();
        assert_eq!(t6.cycle_strings(), vec!["(1 2)(3 4)", "(1 2)(5 6)"]);
    }
}
