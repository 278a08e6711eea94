//! Bit-packed GF(2) matrices for the large linear algebra inside minimal
//! resolutions over the mod-2 Steenrod algebra. Rows are packed into u64
//! words; row reduction is word-parallel xor.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Mat {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl Gf2Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64).max(1);
        Gf2Mat { rows, cols, words_per_row, data: vec![0; rows * words_per_row] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
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
        debug_assert!(r < self.rows && c < self.cols);
        let w = self.data[r * self.words_per_row + c / 64];
        (w >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.words_per_row + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    pub fn xor_row_into(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let (lo, hi) = if dst < src { (dst, src) } else { (src, dst) };
        let (a, b) = self.data.split_at_mut(hi * self.words_per_row);
        let lo_slice = &a[lo * self.words_per_row..(lo + 1) * self.words_per_row];
        let hi_slice = &mut b[..self.words_per_row];
        if dst > src {
            for (d, s) in hi_slice.iter_mut().zip(lo_slice) {
                *d ^= s;
            }
        } else {
            // dst is the lower row: need the other order.
            let src_copy: Vec<u64> = hi_slice.to_vec();
            let dst_slice = &mut a[lo * self.words_per_row..(lo + 1) * self.words_per_row];
            for (d, s) in dst_slice.iter_mut().zip(&src_copy) {
                *d ^= s;
            }
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words_per_row {
            let ia = a * self.words_per_row + w;
            let ib = b * self.words_per_row + w;
            self.data.swap(ia, ib);
        }
    }

    pub fn mul(&self, other: &Gf2Mat) -> Gf2Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Gf2Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let src = other.row_words(k).to_vec();
                    let dst =
                        &mut out.data[i * out.words_per_row..(i + 1) * out.words_per_row];
                    for (d, s) in dst.iter_mut().zip(&src) {
                        *d ^= s;
                    }
                }
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&self) -> (Gf2Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c)) else { continue };
            m.swap_rows(r, pr);
            for i in 0..m.rows {
                if i != r && m.get(i, c) {
                    m.xor_row_into(i, r);
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn kernel_basis(&self) -> Gf2Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Gf2Mat::zero(self.cols, free.len());
        for (idx, &fc) in free.iter().enumerate() {
            k.set(fc, idx, true);
            for (row, &pc) in pivots.iter().enumerate() {
                if r.get(row, fc) {
                    k.set(pc, idx, true);
                }
            }
        }
        k
    }

    /// A solution of `self * x = b` if one exists.
    pub fn solve(&self, b: &[bool]) -> Option<Vec<bool>> {
        assert_eq!(b.len(), self.rows);
        let aug = Gf2Mat::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                b[i]
            }
        });
        let (r, pivots) = aug.rref();
        let mut x = vec![false; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            if pc == self.cols {
                return None;
            }
            x[pc] = r.get(row, self.cols);
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_kernel_roundtrip() {
        // 3x4 with a rank-2 row space
        let rows = [[1, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 1]];
        let m = Gf2Mat::from_fn(3, 4, |i, j| rows[i][j] == 1);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn wide_matrix_words() {
        // identity past a word boundary
        let n = 70;
        let m = Gf2Mat::identity(n);
        assert_eq!(m.rank(), n);
        assert_eq!(m.kernel_basis().cols(), 0);
        assert_eq!(m.mul(&m), m);
    }

    #[test]
    fn solve_cases() {
        let rows = [[1, 1, 0], [0, 1, 1]];
        let m = Gf2Mat::from_fn(2, 3, |i, j| rows[i][j] == 1);
        let x = m.solve(&[true, false]).unwrap();
        // verify m x = b
        let mut out = [false, false];
        for i in 0..2 {
            for j in 0..3 {
                out[i] ^= m.get(i, j) && x[j];
            }
        }
        assert_eq!(out, [true, false]);

        let sing = Gf2Mat::from_fn(2, 1, |_, _| true);
        assert!(sing.solve(&[true, false]).is_none());
    }
}
