//! Dense matrices over the prime field F_p with row reduction, used where
//! only mod-p information is needed (mod-p charts, comparison maps, cobar
//! complexes at odd primes).

use super::qmat::QMat;
use super::scalar::{residue_mod_p, Prime};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMat {
    pub p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat inverse; p is prime and a != 0 mod p.
    let mut r: u64 = 1;
    let mut b: u64 = u64::from(a % p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % u64::from(p);
        }
        b = b * b % u64::from(p);
        e >>= 1;
    }
    r as u32
}

impl FpMat {
    pub fn zero(p: u32, rows: usize, cols: usize) -> Self {
        FpMat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, f: impl Fn(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c) % p);
            }
        }
        FpMat { p, rows, cols, data }
    }

    /// Entrywise reduction of a p-integral rational matrix.
    pub fn from_qmat(p: Prime, m: &QMat) -> Self {
        Self::from_fn(p.0, m.rows(), m.cols(), |i, j| residue_mod_p(p, &m[(i, j)]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.p, other.p);
        assert_eq!(self.cols, other.rows);
        let p = u64::from(self.p);
        let mut out = FpMat::zero(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if b == 0 {
                        continue;
                    }
                    let t = (u64::from(out[(i, j)]) + u64::from(a) * u64::from(b)) % p;
                    out[(i, j)] = t as u32;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.p, other.p);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FpMat::from_fn(self.p, self.rows, self.cols, |i, j| {
            (self[(i, j)] + other[(i, j)]) % self.p
        })
    }

    pub fn neg(&self) -> FpMat {
        FpMat::from_fn(self.p, self.rows, self.cols, |i, j| {
            (self.p - self[(i, j)]) % self.p
        })
    }

    pub fn hcat(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.p, other.p);
        assert_eq!(self.rows, other.rows);
        FpMat::from_fn(self.p, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    pub fn vcat(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.p, other.p);
        assert_eq!(self.cols, other.cols);
        FpMat::from_fn(self.p, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)]
            } else {
                other[(i - self.rows, j)]
            }
        })
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = u64::from(self.p);
        (0..self.rows)
            .map(|i| {
                let mut acc: u64 = 0;
                for j in 0..self.cols {
                    acc = (acc + u64::from(self[(i, j)]) * u64::from(v[j])) % p;
                }
                acc as u32
            })
            .collect()
    }

    /// Reduced row echelon form; returns (rref, pivot column indices).
    pub fn rref(&self) -> (FpMat, Vec<usize>) {
        let mut m = self.clone();
        let p = u64::from(self.p);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(pr) = (r..m.rows).find(|&i| m[(i, c)] != 0) else { continue };
            m.swap_rows(r, pr);
            let inv = u64::from(inv_mod(m[(r, c)], self.p));
            for j in c..m.cols {
                m[(r, j)] = (u64::from(m[(r, j)]) * inv % p) as u32;
            }
            for i in 0..m.rows {
                if i != r && m[(i, c)] != 0 {
                    let f = u64::from(m[(i, c)]);
                    for j in c..m.cols {
                        let t = (u64::from(m[(i, j)]) + (p - 1) * f % p * u64::from(m[(r, j)])) % p;
                        m[(i, j)] = t as u32;
                    }
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

    /// Columns freely spanning the null space.
    pub fn kernel_basis(&self) -> FpMat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = FpMat::zero(self.p, self.cols, free.len());
        for (idx, &fc) in free.iter().enumerate() {
            k[(fc, idx)] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                k[(pc, idx)] = (self.p - r[(row, fc)]) % self.p;
            }
        }
        k
    }

    /// A solution of `self * x = b` if one exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let bm = FpMat::from_fn(self.p, self.rows, 1, |i, _| b[i]);
        let (r, pivots) = self.hcat(&bm).rref();
        let mut x = vec![0; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            if pc == self.cols {
                return None; // pivot in the augmented column
            }
            x[pc] = r[(row, self.cols)];
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let ia = a * self.cols + j;
            let ib = b * self.cols + j;
            self.data.swap(ia, ib);
        }
    }
}

impl std::ops::Index<(usize, usize)> for FpMat {
    type Output = u32;
    fn index(&self, (r, c): (usize, usize)) -> &u32 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FpMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut u32 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        let m = FpMat::from_fn(5, 2, 3, |i, j| [[1, 2, 3], [2, 4, 2]][i][j]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = FpMat::from_fn(3, 2, 2, |i, j| [[1, 1], [2, 2]][i][j]);
        let x = m.solve(&[2, 1]).unwrap();
        assert_eq!(m.apply(&x), vec![2, 1]);
        assert!(m.solve(&[1, 1]).is_none());
    }

    #[test]
    fn inverse_mod() {
        for p in [2u32, 3, 5, 7] {
            for a in 1..p {
                assert_eq!(a * inv_mod(a, p) % p, 1);
            }
        }
    }
}
