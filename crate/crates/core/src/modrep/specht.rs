//! Specht modules inside the tabloid permutation module.
//!
//! A tabloid is stored as its row assignment (the row of every entry),
//! packed four bits per entry. The tabloid of a standard tableau determines
//! the tableau, so standard tabloids index the standard polytabloids.
//! Projecting a polytabloid onto the standard-tabloid coordinates is
//! injective on the Specht module (the projection matrix `P` of the
//! standard polytabloids is unitriangular for a suitable order), which turns
//! straightening into solving against `P`.

use std::collections::HashMap;

use crate::exactla::{quotient_action, radical_of_form, Mat};
use crate::gf::FieldSpec;

use super::{GModule, ModError, Partition};

/// Largest degree handled by the tableau combinatorics.
pub const MAX_SPECHT_DEGREE: usize = 12;

/// Budget on `dim · |column group|` for full polytabloid expansions.
const EXPANSION_BUDGET: u128 = 50_000_000;

/// Standard Young tableaux of shape `λ` as Yamanouchi words: `word[x]` is
/// the row of entry `x`. Lexicographic order.
pub fn standard_words(lambda: &Partition) -> Vec<Vec<u8>> {
    fn rec(parts: &[usize], counts: &mut Vec<usize>, word: &mut Vec<u8>, n: usize, out: &mut Vec<Vec<u8>>) {
        if word.len() == n {
            out.push(word.clone());
            return;
        }
        for r in 0..parts.len() {
            if counts[r] < parts[r] && (r == 0 || counts[r] < counts[r - 1]) {
                counts[r] += 1;
                word.push(r as u8);
                rec(parts, counts, word, n, out);
                word.pop();
                counts[r] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(lambda.parts(), &mut vec![0; lambda.len()], &mut Vec::new(), lambda.n(), &mut out);
    out
}

fn pack_word(word: &[u8]) -> u64 {
    word.iter().enumerate().fold(0, |acc, (i, &r)| acc | (u64::from(r) << (4 * i)))
}

/// Rows of the tableau whose tabloid is the standard word.
fn tableau_of_word(lambda: &Partition, word: &[u8]) -> Vec<Vec<u8>> {
    let mut rows: Vec<Vec<u8>> = lambda.parts().iter().map(|&l| Vec::with_capacity(l)).collect();
    for (x, &r) in word.iter().enumerate() {
        rows[r as usize].push(x as u8);
    }
    rows
}

fn columns(rows: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let width = rows.first().map_or(0, Vec::len);
    (0..width).map(|c| rows.iter().take_while(|r| r.len() > c).map(|r| r[c]).collect()).collect()
}

/// All permutations of `0..k` with their signs.
fn perms_with_sign(k: usize) -> Vec<(Vec<u8>, bool)> {
    fn heap(k: usize, a: &mut Vec<u8>, odd: &mut bool, out: &mut Vec<(Vec<u8>, bool)>) {
        if k <= 1 {
            out.push((a.clone(), *odd));
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, a, odd, out);
            let j = if k % 2 == 0 { i } else { 0 };
            a.swap(j, k - 1);
            *odd = !*odd;
        }
        heap(k - 1, a, odd, out);
    }
    let mut out = Vec::new();
    heap(k, &mut (0..k as u8).collect(), &mut false, &mut out);
    out
}

/// Shared data for one shape.
struct Shape {
    lambda: Partition,
    words: Vec<Vec<u8>>,
    index: HashMap<u64, usize>,
    col_perms: Vec<Vec<(Vec<u8>, bool)>>,
    col_group_order: u128,
}

impl Shape {
    fn new(lambda: &Partition) -> Result<Self, ModError> {
        if lambda.n() > MAX_SPECHT_DEGREE {
            return Err(ModError::CapExceeded(format!("degree {} above {MAX_SPECHT_DEGREE}", lambda.n())));
        }
        let words = standard_words(lambda);
        let index = words.iter().enumerate().map(|(i, w)| (pack_word(w), i)).collect();
        let cols = lambda.conjugate();
        let col_perms: Vec<_> = cols.iter().map(|&k| perms_with_sign(k)).collect();
        let col_group_order = col_perms.iter().map(|v| v.len() as u128).product();
        Ok(Shape { lambda: lambda.clone(), words, index, col_perms, col_group_order })
    }

    fn dim(&self) -> usize {
        self.words.len()
    }

    /// Calls `visit(packed tabloid, odd)` for every term of the polytabloid
    /// of the tableau with the given columns.
    fn expand(&self, cols: &[Vec<u8>], n: usize, mut visit: impl FnMut(u64, bool)) {
        let mut choice = vec![0usize; cols.len()];
        let mut word = vec![0u8; n];
        loop {
            let mut odd = false;
            for (c, col) in cols.iter().enumerate() {
                let (perm, sign) = &self.col_perms[c][choice[c]];
                odd ^= sign;
                for (r, &pr) in perm.iter().enumerate() {
                    word[col[pr as usize] as usize] = r as u8;
                }
            }
            visit(pack_word(&word), odd);
            // next mixed-radix choice
            let mut c = 0;
            loop {
                if c == cols.len() {
                    return;
                }
                choice[c] += 1;
                if choice[c] < self.col_perms[c].len() {
                    break;
                }
                choice[c] = 0;
                c += 1;
            }
        }
    }

    /// Coefficient of the standard tabloid `word` in the polytabloid: a
    /// product of column signs, or zero if some column is not spread over
    /// distinct rows.
    fn match_coeff(cols: &[Vec<u8>], word: &[u8]) -> Option<bool> {
        let mut odd = false;
        for col in cols {
            let rows: Vec<u8> = col.iter().map(|&x| word[x as usize]).collect();
            let mut seen = 0u32;
            for &r in &rows {
                if r as usize >= rows.len() || seen >> r & 1 == 1 {
                    return None;
                }
                seen |= 1 << r;
            }
            let inversions = (0..rows.len())
                .flat_map(|i| (i + 1..rows.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| rows[i] > rows[j])
                .count();
            odd ^= inversions % 2 == 1;
        }
        Some(odd)
    }

    /// Standard-tabloid coordinates of the polytabloid of `rows`.
    fn project(&self, f: &FieldSpec, rows: &[Vec<u8>]) -> Vec<u64> {
        let cols = columns(rows);
        let n = self.lambda.n();
        let mut out = vec![0u64; self.dim()];
        let minus = f.neg(1);
        if self.col_group_order <= self.dim() as u128 {
            self.expand(&cols, n, |t, odd| {
                if let Some(&i) = self.index.get(&t) {
                    out[i] = f.add(out[i], if odd { minus } else { 1 });
                }
            });
        } else {
            for (i, w) in self.words.iter().enumerate() {
                if let Some(odd) = Self::match_coeff(&cols, w) {
                    out[i] = if odd { minus } else { 1 };
                }
            }
        }
        out
    }
}

fn apply_to_rows(rows: &[Vec<u8>], swap: usize) -> Vec<Vec<u8>> {
    let s = |x: u8| {
        if x as usize == swap {
            x + 1
        } else if x as usize == swap + 1 {
            x - 1
        } else {
            x
        }
    };
    rows.iter().map(|r| r.iter().map(|&x| s(x)).collect()).collect()
}

/// The Specht module `S^λ` over `GF(p)` with its Coxeter generator actions
/// in the standard polytabloid basis.
pub fn specht_module(lambda: &Partition, field: &FieldSpec) -> Result<GModule, ModError> {
    let shape = Shape::new(lambda)?;
    let n = lambda.n();
    let dim = shape.dim();
    if dim as u128 != lambda.hook_length_dim() {
        return Err(ModError::Internal(format!("{lambda}: {dim} tableaux against the hook-length count")));
    }
    let tableaux: Vec<Vec<Vec<u8>>> = shape.words.iter().map(|w| tableau_of_word(lambda, w)).collect();
    let project_all = |ts: &[Vec<Vec<u8>>]| -> Result<Mat, ModError> {
        let rows: Vec<Vec<u64>> = ts.iter().map(|t| shape.project(field, t)).collect();
        if rows.is_empty() {
            return Ok(Mat::zeros(field, 0, 0));
        }
        Ok(Mat::from_rows(field, &rows)?)
    };
    let p = project_all(&tableaux)?;
    let p_inv = p.inverse().map_err(|_| ModError::Internal(format!("{lambda}: projection is singular")))?;
    let mut gens = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        let moved: Vec<Vec<Vec<u8>>> = tableaux.iter().map(|t| apply_to_rows(t, i)).collect();
        let y = project_all(&moved)?;
        gens.push(y.mul(&p_inv).transpose());
    }
    GModule::new(n, field, dim, gens, format!("S{lambda}"))
}

/// Gram matrix of the standard tabloid inner product on standard polytabloids.
pub fn specht_gram(lambda: &Partition, field: &FieldSpec) -> Result<Mat, ModError> {
    let shape = Shape::new(lambda)?;
    let dim = shape.dim();
    if dim as u128 * shape.col_group_order > EXPANSION_BUDGET {
        return Err(ModError::CapExceeded(format!("{lambda}: polytabloid expansion too large")));
    }
    let n = lambda.n();
    let mut buckets: HashMap<u64, Vec<(u32, bool)>> = HashMap::new();
    for (i, w) in shape.words.iter().enumerate() {
        let cols = columns(&tableau_of_word(lambda, w));
        shape.expand(&cols, n, |t, odd| buckets.entry(t).or_default().push((i as u32, odd)));
    }
    let mut acc = vec![0i64; dim * dim];
    for terms in buckets.values() {
        for &(a, sa) in terms {
            for &(b, sb) in terms {
                acc[a as usize * dim + b as usize] += if sa == sb { 1 } else { -1 };
            }
        }
    }
    let rows: Vec<Vec<i64>> = acc.chunks(dim.max(1)).take(dim).map(<[i64]>::to_vec).collect();
    Ok(Mat::from_ints(field, &rows))
}

/// `D^λ = S^λ / rad`, for p-regular `λ`.
pub fn irreducible_d(lambda: &Partition, field: &FieldSpec) -> Result<GModule, ModError> {
    if !lambda.is_p_regular(field.p()) {
        return Err(ModError::NotRegular(lambda.to_string(), field.p()));
    }
    let s = specht_module(lambda, field)?;
    let gram = specht_gram(lambda, field)?;
    let rad = radical_of_form(&gram)?;
    let gens = quotient_action(&s.gen_actions, &rad)?;
    GModule::new(lambda.n(), field, s.dim - rad.dim(), gens, format!("D{lambda}"))
}
