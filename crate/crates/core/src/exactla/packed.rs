//! Bit-packed GF(2) matrices: one `u64` word holds 64 consecutive columns.
//!
//! Only the operations the generic path needs to be fast are implemented
//! here; results are converted back to [`Mat`](super::Mat) and must agree
//! bit for bit with the generic routines.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitMat {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        BitMat { rows, cols, stride, words: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.words[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.words[r * self.stride + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.words[r * self.stride..(r + 1) * self.stride]
    }

    /// `row[dst] ^= row[src]`
    fn xor_rows(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        if dst < src {
            let (a, b) = self.words.split_at_mut(src * s);
            for (x, y) in a[dst * s..dst * s + s].iter_mut().zip(&b[..s]) {
                *x ^= y;
            }
        } else {
            let (a, b) = self.words.split_at_mut(dst * s);
            for (x, y) in b[..s].iter_mut().zip(&a[src * s..src * s + s]) {
                *x ^= y;
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.words.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    /// Gauss-Jordan elimination in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(found) = (row..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(row, found);
            for r in 0..self.rows {
                if r != row && self.get(r, col) {
                    self.xor_rows(r, row);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn mul(&self, other: &BitMat) -> BitMat {
        assert_eq!(self.cols, other.rows, "packed product dimension mismatch");
        let mut out = BitMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let src = other.row(k).to_vec();
                    for (x, y) in out.row_mut(i).iter_mut().zip(&src) {
                        *x ^= y;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> BitMat {
        let mut out = BitMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(c, r, true);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &BitMat) -> BitMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect();
        BitMat { rows: self.rows, cols: self.cols, stride: self.stride, words }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
}
