//! Smith normal form over the local PID Z_(p).
//!
//! Every nonzero scalar is a unit times a power of p, so elimination with a
//! minimal-valuation pivot produces a diagonal of pure p-powers directly.
//! No coefficient blowup control is needed: the pivot quotient is always
//! p-integral and entry sizes stay tied to the input.

use super::qmat::QMat;
use super::scalar::Prime;
use num::{BigRational, Zero};

/// Result of a Smith normal form computation: `u * m * v = d` where `d` is
/// diagonal with entries p^{e_0} | p^{e_1} | ... followed by zeros, and
/// `u`, `v` are invertible over Z_(p).
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: QMat,
    pub u_inv: QMat,
    pub d: QMat,
    pub v: QMat,
    pub v_inv: QMat,
    pub rank: usize,
    /// Exponents e_i of the nonzero diagonal entries p^{e_i}, ascending.
    pub exponents: Vec<u32>,
}

pub fn smith_normal_form(p: Prime, m: &QMat) -> Snf {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = QMat::identity(rows);
    let mut u_inv = QMat::identity(rows);
    let mut v = QMat::identity(cols);
    let mut v_inv = QMat::identity(cols);

    debug_assert!((0..rows).all(|i| (0..cols).all(|j| p.is_integral(&d[(i, j)]))));

    let mut k = 0;
    while k < rows.min(cols) {
        // Minimal-valuation pivot in the remaining block.
        let mut pivot: Option<(usize, usize, i64)> = None;
        for i in k..rows {
            for j in k..cols {
                if let Some(val) = p.valuation(&d[(i, j)]) {
                    if pivot.map_or(true, |(_, _, best)| val < best) {
                        pivot = Some((i, j, val));
                    }
                }
            }
        }
        let Some((pi, pj, val)) = pivot else { break };

        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        u_inv.swap_cols(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);
        v_inv.swap_rows(k, pj);

        // Normalize the pivot to p^val by a unit row scaling.
        let (_, unit) = p.split(&d[(k, k)]);
        let unit_inv = unit.recip();
        d.scale_row(k, &unit_inv);
        u.scale_row(k, &unit_inv);
        u_inv.scale_col(k, &unit);

        let pivot_val = d[(k, k)].clone();

        // Clear the column below, then the row to the right. The quotients
        // are p-integral because the pivot has minimal valuation.
        for i in (k + 1)..rows {
            if d[(i, k)].is_zero() {
                continue;
            }
            let c = -(&d[(i, k)] / &pivot_val);
            d.add_row_multiple(i, k, &c);
            u.add_row_multiple(i, k, &c);
            u_inv.add_col_multiple(k, i, &c.clone().neg_ref());
        }
        for j in (k + 1)..cols {
            if d[(k, j)].is_zero() {
                continue;
            }
            let c = -(&d[(k, j)] / &pivot_val);
            d.add_col_multiple(j, k, &c);
            v.add_col_multiple(j, k, &c);
            v_inv.add_row_multiple(k, j, &c.clone().neg_ref());
        }

        debug_assert!(val >= 0, "non-integral pivot in SNF");
        k += 1;
    }

    let rank = k;
    let exponents = (0..rank)
        .map(|i| u32::try_from(p.valuation(&d[(i, i)]).unwrap()).expect("nonnegative exponent"))
        .collect();

    Snf { u, u_inv, d, v, v_inv, rank, exponents }
}

trait NegRef {
    fn neg_ref(self) -> Self;
}

impl NegRef for BigRational {
    fn neg_ref(self) -> Self {
        -self
    }
}

/// Kernel of `m` as a Z_(p)-module map Z^cols -> Z^rows: a matrix whose
/// columns freely generate { x : m x = 0 }.
pub fn kernel_basis(p: Prime, m: &QMat) -> QMat {
    let snf = smith_normal_form(p, m);
    let cols: Vec<usize> = (snf.rank..m.cols()).collect();
    snf.v.select_columns(&cols)
}

/// A particular Z_(p)-solution of `m x = b`, if one exists.
pub fn solve(p: Prime, m: &QMat, b: &[BigRational]) -> Option<Vec<BigRational>> {
    solve_with(&smith_normal_form(p, m), p, b)
}

/// Same as [`solve`] but reusing a precomputed SNF of `m`.
pub fn solve_with(snf: &Snf, p: Prime, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let y = snf.u.apply(b);
    let mut x_prime = vec![BigRational::zero(); snf.v.rows()];
    for (i, yi) in y.iter().enumerate() {
        if i < snf.rank {
            let q = yi / &snf.d[(i, i)];
            if !p.is_integral(&q) {
                return None;
            }
            x_prime[i] = q;
        } else if !yi.is_zero() {
            return None;
        }
    }
    Some(snf.v.apply(&x_prime))
}

/// Determinant valuation check helper: true iff `m` is square and invertible
/// over Z_(p) (elementary divisors all p^0).
pub fn is_zp_invertible(p: Prime, m: &QMat) -> bool {
    if m.rows() != m.cols() {
        return false;
    }
    let snf = smith_normal_form(p, m);
    snf.rank == m.rows() && snf.exponents.iter().all(|&e| e == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{BigRational, One};

    fn check_identity(p: Prime, m: &QMat) {
        let snf = smith_normal_form(p, m);
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "U m V != D");
        assert_eq!(snf.u.mul(&snf.u_inv), QMat::identity(m.rows()));
        assert_eq!(snf.u_inv.mul(&snf.u), QMat::identity(m.rows()));
        assert_eq!(snf.v.mul(&snf.v_inv), QMat::identity(m.cols()));
        // divisibility chain
        for w in snf.exponents.windows(2) {
            assert!(w[0] <= w[1]);
        }
        // transforms invertible over Z_(p)
        assert!(is_zp_invertible(p, &snf.u));
        assert!(is_zp_invertible(p, &snf.v));
    }

    #[test]
    fn unit_normalization() {
        let p = Prime(2);
        let m = QMat::from_int_rows(&[vec![3]]);
        let snf = smith_normal_form(p, &m);
        assert_eq!(snf.rank, 1);
        assert_eq!(snf.exponents, vec![0]);
        assert!(snf.d[(0, 0)].is_one());
        check_identity(p, &m);
    }

    #[test]
    fn identity_case() {
        let p = Prime(5);
        let m = QMat::identity(3);
        let snf = smith_normal_form(p, &m);
        assert_eq!(snf.d, QMat::identity(3));
        assert_eq!(snf.exponents, vec![0, 0, 0]);
    }

    #[test]
    fn divisor_example() {
        // gcd-of-minors oracle: divisors of [[2,4],[6,8]] at p=2 are 2 and 8/2 = 4.
        let p = Prime(2);
        let m = QMat::from_int_rows(&[vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(p, &m);
        assert_eq!(snf.exponents, vec![1, 2]);
        check_identity(p, &m);
    }

    #[test]
    fn kernel_and_solve() {
        let p = Prime(3);
        let m = QMat::from_int_rows(&[vec![1, 1, 0], vec![0, 3, 3]]);
        let k = kernel_basis(p, &m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());

        let b: Vec<BigRational> = QMat::from_int_rows(&[vec![1], vec![3]]).column(0);
        let x = solve(p, &m, &b).unwrap();
        assert_eq!(m.apply(&x), b);
        // 3x = 1 has no solution in Z_(3)
        let m2 = QMat::from_int_rows(&[vec![3]]);
        let b2 = QMat::from_int_rows(&[vec![1]]).column(0);
        assert!(solve(p, &m2, &b2).is_none());
    }
}
