//! Brute-force computations used as independent checks on the main code paths.

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactla::{LaError, Mat};
use crate::gf::{make_field, FieldSpec};
use crate::grp::{closure, GroupPresentation, GrpError, Perm, DEFAULT_CAP};
use crate::modrep::{ModError, Partition, Restricted};

/// Largest module dimension accepted by [`decompose_small_module`].
pub const MAX_DECOMPOSE_DIM: usize = 8;
/// Largest degree accepted by [`tableau_count`].
pub const MAX_TABLEAU_DEGREE: usize = 12;

const SUBSPACE_CAP: usize = 2_000_000;
const PAIR_CHECK_CAP: u64 = 200_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("oracle cap exceeded: {0}")]
    CapExceeded(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Module(#[from] ModError),
    #[error(transparent)]
    Linear(#[from] LaError),
    #[error(transparent)]
    Group(#[from] GrpError),
}

/// Outcome of the parabolic enumeration oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParabolicCount {
    pub order: usize,
    pub rank: usize,
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).expect("successor exists");
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn is_even(a: &[usize]) -> bool {
    let mut seen = vec![false; a.len()];
    let mut transpositions = 0;
    for s in 0..a.len() {
        let mut x = s;
        let mut len = 0usize;
        while !seen[x] {
            seen[x] = true;
            x = a[x];
            len += 1;
        }
        transpositions += len.saturating_sub(1);
    }
    transpositions % 2 == 0
}

/// Elements of `S_n` (or `A_n`) acting trivially on `W` and on `V/W`, where
/// `V` is the even-weight vectors of `F_2^N` modulo the all-ones vector
/// (`N = n` rounded up to even) and `W` is spanned by the pairs
/// `{2i, 2i+1}` for `i < N/2 - 1`. Every permutation is tested directly on
/// bitmasks.
pub fn enum_parabolic(n: usize, alternating: bool, cap: usize) -> Result<ParabolicCount, OracleError> {
    if !(3..=12).contains(&n) {
        return Err(OracleError::Unsupported(format!("degree {n}")));
    }
    let size: usize = (1..=n).product();
    if size > cap {
        return Err(OracleError::CapExceeded(format!("{size} elements above cap {cap}")));
    }
    let big_n = n + n % 2;
    let all: u32 = (1 << big_n) - 1;
    let even_bits: u32 = (0..big_n / 2).map(|i| 1u32 << (2 * i)).sum();
    // W + <all-ones>: vectors constant on every pair
    let in_w_plus_all = |x: u32| ((x ^ (x >> 1)) & even_bits) == 0;
    let act = |g: &[usize], x: u32| (0..n).filter(|&i| x >> i & 1 == 1).fold(x & !((1 << n) - 1), |acc, i| acc | 1 << g[i]);
    let basis_v: Vec<u32> = (0..big_n - 1).map(|i| 1 << i | 1 << (big_n - 1)).collect();
    let basis_w: Vec<u32> = (0..big_n / 2 - 1).map(|i| 0b11 << (2 * i)).collect();

    let mut g: Vec<usize> = (0..n).collect();
    let mut kept: Vec<Vec<usize>> = Vec::new();
    loop {
        if !alternating || is_even(&g) {
            let flag_ok = basis_v.iter().all(|&v| in_w_plus_all(act(&g, v) ^ v))
                && basis_w.iter().all(|&w| {
                    let d = act(&g, w) ^ w;
                    d == 0 || d == all
                });
            if flag_ok {
                kept.push(g.clone());
            }
        }
        if !next_permutation(&mut g) {
            break;
        }
    }
    let order = kept.len();
    let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&x| a[x]).collect() };
    let identity: Vec<usize> = (0..n).collect();
    for a in &kept {
        if compose(a, a) != identity {
            return Err(OracleError::Unsupported("kept element of order above 2".into()));
        }
        for b in &kept {
            if compose(a, b) != compose(b, a) {
                return Err(OracleError::Unsupported("kept elements do not commute".into()));
            }
        }
    }
    if !order.is_power_of_two() {
        return Err(OracleError::Unsupported(format!("kept set of size {order}")));
    }
    Ok(ParabolicCount { order, rank: order.trailing_zeros() as usize })
}

/// Number of standard Young tableaux, by filling entries one at a time into
/// addable cells.
pub fn tableau_count(lambda: &Partition) -> Result<u64, OracleError> {
    if lambda.n() > MAX_TABLEAU_DEGREE {
        return Err(OracleError::CapExceeded(format!("degree {} above {MAX_TABLEAU_DEGREE}", lambda.n())));
    }
    fn fill(shape: &[usize], filled: &mut Vec<usize>, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        for r in 0..shape.len() {
            let fits_row = filled[r] < shape[r];
            let above_ok = r == 0 || filled[r - 1] > filled[r];
            if fits_row && above_ok {
                filled[r] += 1;
                total += fill(shape, filled, left - 1);
                filled[r] -= 1;
            }
        }
        total
    }
    Ok(fill(lambda.parts(), &mut vec![0; lambda.len()], lambda.n()))
}

/// Indecomposable summand dimensions and free-summand count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// Largest first.
    pub summand_dims: Vec<usize>,
    pub free_count: usize,
}

/// Set of vectors of a subspace of `F_2^d`, `d ≤ 8`, as a 256-bit mask.
type VecSet = [u64; 4];

fn has(s: &VecSet, v: usize) -> bool {
    s[v >> 6] >> (v & 63) & 1 == 1
}

fn set_size(s: &VecSet) -> u32 {
    s.iter().map(|w| w.count_ones()).sum()
}

fn is_subset(a: &VecSet, b: &VecSet) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn meet_is_zero(a: &VecSet, b: &VecSet) -> bool {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum::<u32>() == 1
}

struct BitModule {
    /// `cols[g][j]`: image of unit vector `j` under generator `g`, as a bitmask.
    cols: Vec<Vec<usize>>,
    dim: usize,
}

impl BitModule {
    fn apply(&self, g: usize, v: usize) -> usize {
        (0..self.dim).filter(|&j| v >> j & 1 == 1).fold(0, |acc, j| acc ^ self.cols[g][j])
    }

    /// Smallest invariant subspace containing `base` and `v`.
    fn close(&self, base: &VecSet, v: usize) -> VecSet {
        let mut s = *base;
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            if has(&s, x) {
                continue;
            }
            let old = s;
            for u in 0..1usize << self.dim {
                if has(&old, u) {
                    let y = u ^ x;
                    s[y >> 6] |= 1 << (y & 63);
                }
            }
            for g in 0..self.cols.len() {
                queue.push_back(self.apply(g, x));
            }
        }
        s
    }

    fn invariant_subspaces(&self) -> Result<Vec<VecSet>, OracleError> {
        let zero: VecSet = [1, 0, 0, 0];
        let mut seen: HashSet<VecSet> = HashSet::from([zero]);
        let mut queue = VecDeque::from([zero]);
        while let Some(u) = queue.pop_front() {
            for v in 1..1usize << self.dim {
                if has(&u, v) {
                    continue;
                }
                let w = self.close(&u, v);
                if seen.insert(w) {
                    if seen.len() > SUBSPACE_CAP {
                        return Err(OracleError::CapExceeded(format!("more than {SUBSPACE_CAP} invariant subspaces")));
                    }
                    queue.push_back(w);
                }
            }
        }
        let mut all: Vec<VecSet> = seen.into_iter().collect();
        all.sort_by_key(|s| (set_size(s), *s));
        Ok(all)
    }

    fn fixed_dim(&self, s: &VecSet) -> usize {
        let fixed = (0..1usize << self.dim)
            .filter(|&v| has(s, v) && (0..self.cols.len()).all(|g| self.apply(g, v) == v))
            .count();
        fixed.trailing_zeros() as usize
    }
}

/// Splits `v` into indecomposable invariant summands by exhaustive search
/// over pairs of invariant subspaces.
fn split(v: &VecSet, subs: &[VecSet], checks: &mut u64, out: &mut Vec<VecSet>) -> Result<(), OracleError> {
    let size = set_size(v);
    let inside: Vec<&VecSet> = subs.iter().filter(|s| set_size(s) > 1 && set_size(s) < size && is_subset(s, v)).collect();
    for u in &inside {
        let su = set_size(u);
        if su * su > size {
            break;
        }
        for w in &inside {
            *checks += 1;
            if *checks > PAIR_CHECK_CAP {
                return Err(OracleError::CapExceeded("decomposition search".into()));
            }
            if set_size(w) * su == size && meet_is_zero(u, w) {
                split(u, subs, checks, out)?;
                split(w, subs, checks, out)?;
                return Ok(());
            }
        }
    }
    out.push(*v);
    Ok(())
}

/// Exhaustive Krull-Schmidt decomposition of a small GF(2) module. A summand
/// is free when its dimension is `|H|` and its fixed space is a line (the
/// regular module is the injective hull of the trivial module).
pub fn decompose_small_module(module: &Restricted) -> Result<Decomposition, OracleError> {
    if !module.field.is_gf2() {
        return Err(OracleError::Unsupported("decomposition runs over GF(2) only".into()));
    }
    if module.dim > MAX_DECOMPOSE_DIM {
        return Err(OracleError::CapExceeded(format!("dimension {} above {MAX_DECOMPOSE_DIM}", module.dim)));
    }
    if module.dim == 0 {
        return Ok(Decomposition { summand_dims: Vec::new(), free_count: 0 });
    }
    let group_order = match module.gens.first() {
        None => 1,
        Some(g) => {
            let pres = GroupPresentation::permutation("H", g.degree(), module.gens.clone())?;
            let set = closure(&pres, DEFAULT_CAP)?;
            set.len()
        }
    };
    let cols = module
        .mats
        .iter()
        .map(|m| (0..module.dim).map(|j| (0..module.dim).filter(|&i| m.get(i, j) == 1).map(|i| 1usize << i).sum()).collect())
        .collect();
    let bm = BitModule { cols, dim: module.dim };
    let subs = bm.invariant_subspaces()?;
    let full = *subs.last().expect("whole space is invariant");
    let mut parts = Vec::new();
    split(&full, &subs, &mut 0, &mut parts)?;
    let mut summand_dims: Vec<usize> = parts.iter().map(|s| set_size(s).trailing_zeros() as usize).collect();
    summand_dims.sort_unstable_by(|a, b| b.cmp(a));
    let free_count = parts
        .iter()
        .filter(|s| set_size(s).trailing_zeros() as usize == group_order && bm.fixed_dim(s) == 1)
        .count();
    Ok(Decomposition { summand_dims, free_count })
}

fn gf2() -> FieldSpec {
    make_field(2, 1).expect("GF(2)")
}

fn elem_abelian_gens(rank: usize) -> Vec<Perm> {
    let n = 2 * rank;
    (0..rank)
        .map(|i| {
            let mut images: Vec<usize> = (0..n).collect();
            images.swap(2 * i, 2 * i + 1);
            Perm::from_images(&images).expect("transposition")
        })
        .collect()
}

/// Regular module of `C_2^rank`: generator `i` flips bit `i` of the basis index.
pub fn regular_module(rank: usize) -> Restricted {
    let f = gf2();
    let size = 1usize << rank;
    let mats = (0..rank).map(|i| Mat::permutation(&f, &(0..size).map(|j| j ^ (1 << i)).collect::<Vec<_>>())).collect();
    Restricted::new(format!("reg(C2^{rank})"), elem_abelian_gens(rank), mats, &f, size).expect("consistent")
}

fn direct_sum(f: &FieldSpec, parts: &[Vec<Mat>], rank: usize) -> (Vec<Mat>, usize) {
    let mut mats: Vec<Mat> = (0..rank).map(|_| Mat::zeros(f, 0, 0)).collect();
    for p in parts {
        for (m, x) in mats.iter_mut().zip(p) {
            *m = m.block_diag(x);
        }
    }
    let dim = mats.first().map_or(0, Mat::rows);
    (mats, dim)
}

fn block(f: &FieldSpec, a: &Mat, b: &Mat, c: &Mat) -> Mat {
    let (da, dc) = (a.rows(), c.rows());
    let n = da + dc;
    let mut m = Mat::zeros(f, n, n);
    for i in 0..da {
        for j in 0..da {
            m.set(i, j, a.get(i, j));
        }
        for j in 0..dc {
            m.set(i, da + j, b.get(i, j));
        }
    }
    for i in 0..dc {
        for j in 0..dc {
            m.set(da + i, da + j, c.get(i, j));
        }
    }
    m
}

/// A random extension `0 → A → M → C → 0` of direct sums of trivial and
/// regular modules of `C_2^rank`, conjugated by a random invertible matrix.
/// The extension class is a uniformly random solution of the cocycle
/// equations `g_i² = 1`, `g_i g_j = g_j g_i`.
pub fn random_extension_module(rng: &mut impl Rng, rank: usize, max_dim: usize) -> Result<Restricted, OracleError> {
    let f = gf2();
    let reg = regular_module(rank).mats;
    let triv: Vec<Mat> = (0..rank).map(|_| Mat::identity(&f, 1)).collect();
    let mut pick = |budget: usize| -> Vec<Vec<Mat>> {
        let mut parts = Vec::new();
        let mut used = 0;
        let target = rng.gen_range(1..=budget);
        while used < target {
            if used + reg[0].rows() <= target && rng.gen_bool(0.3) {
                parts.push(reg.clone());
                used += reg[0].rows();
            } else {
                parts.push(triv.clone());
                used += 1;
            }
        }
        parts
    };
    let bottom_parts = pick(max_dim - 1);
    let (a, da) = direct_sum(&f, &bottom_parts, rank);
    let top_parts = pick(max_dim - da);
    let (c, dc) = direct_sum(&f, &top_parts, rank);

    // unknowns: entries of B_0, …, B_{rank-1}, each da × dc
    let per = da * dc;
    let unknowns = rank * per;
    let b_of = |x: &[u64], i: usize| Mat::from_flat(&f, da, dc, x[i * per..(i + 1) * per].to_vec());
    let equations = |x: &[u64]| -> Vec<u64> {
        let mut out = Vec::new();
        for i in 0..rank {
            let bi = b_of(x, i);
            out.extend_from_slice(a[i].mul(&bi).add(&bi.mul(&c[i])).data());
            for j in i + 1..rank {
                let bj = b_of(x, j);
                let lhs = a[i].mul(&bj).add(&bi.mul(&c[j]));
                let rhs = a[j].mul(&bi).add(&bj.mul(&c[i]));
                out.extend_from_slice(lhs.add(&rhs).data());
            }
        }
        out
    };
    let cols: Vec<Vec<u64>> = (0..unknowns)
        .map(|u| {
            let mut e = vec![0; unknowns];
            e[u] = 1;
            equations(&e)
        })
        .collect();
    let constraint = Mat::from_rows(&f, &cols)?.transpose();
    let cocycles = constraint.kernel();
    let mut x = vec![0u64; unknowns];
    for r in 0..cocycles.dim() {
        if rng.gen_bool(0.5) {
            for (xi, &bi) in x.iter_mut().zip(cocycles.basis().row(r)) {
                *xi ^= bi;
            }
        }
    }
    let dim = da + dc;
    let p = loop {
        let data = (0..dim * dim).map(|_| u64::from(rng.gen_bool(0.5))).collect();
        let m = Mat::from_flat(&f, dim, dim, data);
        if m.rank() == dim {
            break m;
        }
    };
    let p_inv = p.inverse()?;
    let mats = (0..rank).map(|i| p.mul(&block(&f, &a[i], &b_of(&x, i), &c[i])).mul(&p_inv)).collect();
    Ok(Restricted::new(format!("ext(C2^{rank}, {da}+{dc})"), elem_abelian_gens(rank), mats, &f, dim)?)
}

/// Result of comparing the norm-element rank with the exhaustive
/// decomposition on random modules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormRankValidation {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

/// Checks `norm_rank == free summand count` on `per_group` random modules
/// of dimension ≤ 6 for each of `C_2` and `C_2 × C_2`.
pub fn validate_norm_rank(seed: u64, per_group: usize) -> Result<NormRankValidation, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for rank in [1, 2] {
        for k in 0..per_group {
            let m = random_extension_module(&mut rng, rank, 6)?;
            let norm = m.norm_rank(DEFAULT_CAP)?;
            let oracle = decompose_small_module(&m)?;
            checked += 1;
            if norm != oracle.free_count {
                mismatches.push(format!("C2^{rank} sample {k}: norm rank {norm}, decomposition {:?}", oracle));
            }
        }
    }
    Ok(NormRankValidation { checked, mismatches })
}
