//! The mod-2 Steenrod algebra in the Milnor basis: monomials Sq(r_1, …, r_k),
//! F_2-sums of monomials, and the Milnor-matrix product.

use std::collections::BTreeSet;

/// A Milnor basis monomial Sq(r_1, …, r_k) at p = 2, trailing zeros trimmed.
/// The empty tuple is the unit.
pub type MilnorMono = Vec<u32>;

/// |Sq(r_1, …, r_k)| = Σ r_i (2ⁱ − 1).
pub fn milnor_degree(m: &[u32]) -> i64 {
    m.iter()
        .enumerate()
        .map(|(i, &r)| i64::from(r) * ((1i64 << (i + 1)) - 1))
        .sum()
}

fn trim(mut m: MilnorMono) -> MilnorMono {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

/// An element of the Steenrod algebra at p = 2: an F_2-sum of monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct F2Sum(pub BTreeSet<MilnorMono>);

impl F2Sum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::from_mono(Vec::new())
    }

    pub fn from_mono(m: MilnorMono) -> Self {
        let mut s = BTreeSet::new();
        s.insert(trim(m));
        F2Sum(s)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Characteristic-2 addition: symmetric difference of monomial sets.
    pub fn add(&self, other: &F2Sum) -> F2Sum {
        let mut out = self.0.clone();
        for m in &other.0 {
            if !out.remove(m) {
                out.insert(m.clone());
            }
        }
        F2Sum(out)
    }

    pub fn toggle(&mut self, m: MilnorMono) {
        let m = trim(m);
        if !self.0.remove(&m) {
            self.0.insert(m);
        }
    }

    pub fn mul(&self, other: &F2Sum) -> F2Sum {
        let mut out = F2Sum::zero();
        for a in &self.0 {
            for b in &other.0 {
                out = out.add(&milnor_product(a, b));
            }
        }
        out
    }

    /// Whether the unit monomial appears with a nonzero coefficient.
    pub fn has_unit_term(&self) -> bool {
        self.0.contains(&Vec::new())
    }
}

/// Milnor-matrix product of two basis monomials. Matrices X = (x_{ij}) with
/// row sums Σ_j 2^j x_{ij} = r_i and column sums Σ_i x_{ij} = s_j contribute
/// the monomial T, t_k = Σ_{i+j=k} x_{ij}, whenever every anti-diagonal
/// multinomial coefficient is odd (binary digits of the entries disjoint).
pub fn milnor_product(r: &[u32], s: &[u32]) -> F2Sum {
    let m = r.len();
    let n = s.len();
    if m == 0 {
        return F2Sum::from_mono(s.to_vec());
    }
    if n == 0 {
        return F2Sum::from_mono(r.to_vec());
    }
    // x[i][j] for i in 0..=m, j in 0..=n; x[0][0] unused
    let mut x = vec![vec![0u32; n + 1]; m + 1];
    let mut row_rest: Vec<u32> = std::iter::once(0).chain(r.iter().copied()).collect();
    let mut col_rest: Vec<u32> = std::iter::once(0).chain(s.iter().copied()).collect();
    let mut out = F2Sum::zero();
    enumerate(1, 1, m, n, &mut x, &mut row_rest, &mut col_rest, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    i: usize,
    j: usize,
    m: usize,
    n: usize,
    x: &mut Vec<Vec<u32>>,
    row_rest: &mut Vec<u32>,
    col_rest: &mut Vec<u32>,
    out: &mut F2Sum,
) {
    if i > m {
        // leftovers fill column 0 and row 0
        for (ii, &rest) in row_rest.iter().enumerate().skip(1) {
            x[ii][0] = rest;
        }
        for (jj, &rest) in col_rest.iter().enumerate().skip(1) {
            x[0][jj] = rest;
        }
        emit(m, n, x, out);
        return;
    }
    let (ni, nj) = if j == n { (i + 1, 1) } else { (i, j + 1) };
    let cap = row_rest[i] >> j; // 2^j * x_ij ≤ remaining row budget
    let bound = cap.min(col_rest[j]);
    for v in 0..=bound {
        x[i][j] = v;
        row_rest[i] -= v << j;
        col_rest[j] -= v;
        enumerate(ni, nj, m, n, x, row_rest, col_rest, out);
        row_rest[i] += v << j;
        col_rest[j] += v;
        x[i][j] = 0;
    }
}

fn emit(m: usize, n: usize, x: &[Vec<u32>], out: &mut F2Sum) {
    let mut t = vec![0u32; m + n];
    for k in 1..=(m + n) {
        let mut acc: u32 = 0;
        let mut sum: u32 = 0;
        for i in k.saturating_sub(n)..=k.min(m) {
            let j = k - i;
            let v = x[i][j];
            if acc & v != 0 {
                return; // even multinomial coefficient
            }
            acc |= v;
            sum += v;
        }
        t[k - 1] = sum;
    }
    out.toggle(t);
}

/// All Milnor monomials of a given degree, in lexicographic order.
pub fn milnor_basis(degree: i64) -> Vec<MilnorMono> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    build(degree, 1, &mut cur, &mut out);
    out.sort();
    out
}

fn build(rest: i64, idx: usize, cur: &mut Vec<u32>, out: &mut Vec<MilnorMono>) {
    if rest == 0 {
        out.push(trim(cur.clone()));
        return;
    }
    let w = (1i64 << idx) - 1;
    if w > rest {
        return;
    }
    for r in 0..=(rest / w) {
        cur.resize(idx, 0);
        cur[idx - 1] = r as u32;
        build(rest - r * w, idx + 1, cur, out);
    }
    cur.truncate(idx - 1);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn unit_laws_and_degrees() {
        let sq2 = F2Sum::from_mono(vec![2]);
        assert_eq!(F2Sum::unit().mul(&sq2), sq2);
        assert_eq!(sq2.mul(&F2Sum::unit()), sq2);
        assert_eq!(milnor_degree(&[2]), 2);
        assert_eq!(milnor_degree(&[0, 1]), 3);
        assert_eq!(milnor_degree(&[1, 1, 1]), 11);
    }

    #[test]
    fn sq1_squares_to_zero() {
        assert!(milnor_product(&[1], &[1]).is_zero());
    }

    #[test]
    fn sq2_squared_is_sq11() {
        let got = milnor_product(&[2], &[2]);
        assert_eq!(got, F2Sum::from_mono(vec![1, 1]));
    }

    #[test]
    fn product_is_degree_additive() {
        for a in milnor_basis(5) {
            for b in milnor_basis(4) {
                for t in &milnor_product(&a, &b).0 {
                    assert_eq!(milnor_degree(t), 9);
                }
            }
        }
    }

    #[test]
    fn basis_sizes_small_degrees() {
        // counting tuples with Σ r_i (2^i−1) = d by hand:
        // d=3: (3),(0,1); d=5: (5),(2,1); d=7: (7),(4,1),(1,2),(0,0,1)
        let dims: Vec<usize> = (0..=8).map(|d| milnor_basis(d).len()).collect();
        assert_eq!(dims, vec![1, 1, 1, 2, 2, 2, 3, 4, 4]);
    }

    #[test]
    fn associativity_on_random_triples() {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let pool: Vec<MilnorMono> = (0..=10).flat_map(milnor_basis).collect();
        for _ in 0..200 {
            let a = &pool[rng.gen_range(0..pool.len())];
            let b = &pool[rng.gen_range(0..pool.len())];
            let c = &pool[rng.gen_range(0..pool.len())];
            if milnor_degree(a) + milnor_degree(b) + milnor_degree(c) > 20 {
                continue;
            }
            let ab_c = milnor_product(a, b).mul(&F2Sum::from_mono(c.clone()));
            let a_bc = F2Sum::from_mono(a.clone()).mul(&milnor_product(b, c));
            assert_eq!(ab_c, a_bc, "({a:?} {b:?}) {c:?}");
        }
    }
}
