//! Finitely generated Z_(p)-modules in diagonal presentation and exact
//! operations on maps between them: kernels, cokernels, homology.
//!
//! A module is a list of generator orders; order 0 is a free generator and
//! order e >= 1 a cyclic summand Z/p^e. A map is a matrix on generators
//! subject to the congruence condition that torsion generators map to
//! elements of compatible order.

use super::qmat::QMat;
use super::scalar::Prime;
use super::snf::{self, kernel_basis, smith_normal_form};
use num::{BigRational, Zero};
use thiserror::Error;

/// Generator orders of a diagonally presented module.
/// Normal form: free generators (order 0) first, then torsion exponents
/// in decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Orders(pub Vec<u32>);

impl Orders {
    pub fn free(n: usize) -> Self {
        Orders(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.0.iter().filter(|&&e| e == 0).count()
    }

    pub fn torsion(&self) -> Vec<u32> {
        self.0.iter().copied().filter(|&e| e > 0).collect()
    }

    /// True if every generator is killed by p (an F_p vector space).
    pub fn is_elementary(&self) -> bool {
        self.0.iter().all(|&e| e == 1)
    }

    pub fn normalized(&self) -> Self {
        let mut free: Vec<u32> = self.0.iter().copied().filter(|&e| e == 0).collect();
        let mut tors: Vec<u32> = self.torsion();
        tors.sort_unstable_by(|a, b| b.cmp(a));
        free.extend(tors);
        Orders(free)
    }

    /// Relation matrix: one column p^e per torsion generator.
    pub fn relations(&self, p: Prime) -> QMat {
        let tors: Vec<(usize, u32)> =
            self.0.iter().copied().enumerate().filter(|&(_, e)| e > 0).collect();
        let mut r = QMat::zero(self.len(), tors.len());
        for (col, &(row, e)) in tors.iter().enumerate() {
            r[(row, col)] = p.power(e);
        }
        r
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("composite of the two maps is nonzero; not a chain complex")]
    CompositeNonzero,
    #[error("matrix violates the torsion congruence condition")]
    InvalidMap,
}

/// Congruence condition: for a source generator of order p^e, its image times
/// p^e must vanish in the target.
pub fn is_valid_map(p: Prime, src: &Orders, tgt: &Orders, m: &QMat) -> bool {
    debug_assert_eq!(m.rows(), tgt.len());
    debug_assert_eq!(m.cols(), src.len());
    for j in 0..src.len() {
        let e = src.0[j];
        if e == 0 {
            continue;
        }
        for i in 0..tgt.len() {
            let x = &m[(i, j)];
            if x.is_zero() {
                continue;
            }
            if !p.is_integral(x) {
                return false;
            }
            let f = tgt.0[i];
            if f == 0 {
                return false; // p^e * x != 0 in a free summand
            }
            if p.valuation(x).unwrap() + i64::from(e) < i64::from(f) {
                return false;
            }
        }
    }
    // all entries p-integral
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| p.is_integral(&m[(i, j)])))
}

/// Equality of maps into a presented module: difference lands in the relations.
pub fn maps_equal(p: Prime, tgt: &Orders, a: &QMat, b: &QMat) -> bool {
    map_is_zero(p, tgt, &a.sub(b))
}

pub fn map_is_zero(p: Prime, tgt: &Orders, m: &QMat) -> bool {
    for i in 0..m.rows() {
        let f = tgt.0[i];
        for j in 0..m.cols() {
            let x = &m[(i, j)];
            if x.is_zero() {
                continue;
            }
            if f == 0 {
                return false;
            }
            match p.valuation(x) {
                Some(v) if v >= i64::from(f) => {}
                _ => return false,
            }
        }
    }
    true
}

/// A submodule presented on its own generators together with the inclusion
/// into the ambient module.
#[derive(Debug, Clone)]
pub struct Submodule {
    pub orders: Orders,
    /// ambient generators x submodule generators
    pub inclusion: QMat,
}

/// Kernel of a map between presented modules.
pub fn kernel(p: Prime, src: &Orders, tgt: &Orders, m: &QMat) -> Submodule {
    let n = src.len();
    debug_assert!(is_valid_map(p, src, tgt, m));

    // Lifts of kernel elements: x with m x = 0 modulo target relations.
    let stacked = m.hcat(&tgt.relations(p));
    let lift = kernel_basis(p, &stacked);
    let gens = lift.submatrix(0..n, 0..lift.cols());

    present_submodule(p, src, &gens)
}

/// Presents the submodule of `amb` generated by the columns of `gens`
/// (coordinates on ambient generators), in diagonal form.
pub fn present_submodule(p: Prime, amb: &Orders, gens: &QMat) -> Submodule {
    let n = amb.len();
    debug_assert_eq!(gens.rows(), n);
    // Relations among the generating columns, modulo ambient relations.
    let amb_rel = amb.relations(p);
    let stacked = gens.hcat(&amb_rel);
    let lift = kernel_basis(p, &stacked);
    let rel = lift.submatrix(0..gens.cols(), 0..lift.cols());

    let s = smith_normal_form(p, &rel);
    let new_gens = gens.mul(&s.u_inv);

    // Diagonal d_i = p^{e_i}: generator i is Z/p^{e_i}; e_i = 0 means the
    // generator is trivial and is dropped; columns past the rank are free.
    let mut orders = Vec::new();
    let mut cols = Vec::new();
    for i in s.rank..gens.cols() {
        orders.push(0);
        cols.push(i);
    }
    let mut torsion: Vec<(u32, usize)> = (0..s.rank)
        .filter(|&i| s.exponents[i] > 0)
        .map(|i| (s.exponents[i], i))
        .collect();
    torsion.sort_by(|a, b| b.cmp(a));
    for (e, i) in torsion {
        orders.push(e);
        cols.push(i);
    }

    Submodule { orders: Orders(orders), inclusion: new_gens.select_columns(&cols) }
}

/// Normalized descriptor + basis data of a cokernel of `m` into `tgt`.
#[derive(Debug, Clone)]
pub struct Cokernel {
    pub orders: Orders,
    /// old ambient coordinates -> new basis coordinates
    pub to_new_basis: QMat,
    /// new basis expressed in old ambient coordinates (inverse of the above)
    pub from_new_basis: QMat,
    /// which new-basis rows survive (order > 0 in new basis or free), in the
    /// order of `orders`
    pub rows: Vec<usize>,
}

impl Cokernel {
    /// Projection matrix: surviving generators x ambient generators.
    pub fn projection(&self) -> QMat {
        let mut m = QMat::zero(self.rows.len(), self.to_new_basis.cols());
        for (out, &row) in self.rows.iter().enumerate() {
            for j in 0..self.to_new_basis.cols() {
                m[(out, j)] = self.to_new_basis[(row, j)].clone();
            }
        }
        m
    }
}

/// Cokernel of the subgroup generated by columns of `gens` inside `amb`.
pub fn quotient(p: Prime, amb: &Orders, gens: &QMat) -> Cokernel {
    let rel = gens.hcat(&amb.relations(p));
    let s = smith_normal_form(p, &rel);
    let n = amb.len();

    let mut orders = Vec::new();
    let mut rows = Vec::new();
    for i in s.rank..n {
        orders.push(0);
        rows.push(i);
    }
    let mut torsion: Vec<(u32, usize)> = (0..s.rank)
        .filter(|&i| s.exponents[i] > 0)
        .map(|i| (s.exponents[i], i))
        .collect();
    torsion.sort_by(|a, b| b.cmp(a));
    for (e, i) in torsion {
        orders.push(e);
        rows.push(i);
    }

    Cokernel { orders: Orders(orders), to_new_basis: s.u, from_new_basis: s.u_inv, rows }
}

pub fn cokernel_of_map(p: Prime, _src: &Orders, tgt: &Orders, m: &QMat) -> Cokernel {
    quotient(p, tgt, m)
}

/// Expresses `target_el` (ambient coordinates) through the generators of a
/// submodule, modulo ambient relations. Returns `None` if it does not lie in
/// the submodule.
pub fn factor_through(
    p: Prime,
    amb: &Orders,
    sub: &Submodule,
    target_el: &[BigRational],
) -> Option<Vec<BigRational>> {
    let stacked = sub.inclusion.hcat(&amb.relations(p));
    let sol = snf::solve(p, &stacked, target_el)?;
    Some(sol[..sub.orders.len()].to_vec())
}

/// Homology ker(g)/im(f) at the middle module of  src --f--> mid --g--> tgt.
pub fn homology(
    p: Prime,
    src: &Orders,
    mid: &Orders,
    tgt: &Orders,
    f: &QMat,
    g: &QMat,
) -> Result<Orders, LinalgError> {
    if !is_valid_map(p, src, mid, f) || !is_valid_map(p, mid, tgt, g) {
        return Err(LinalgError::InvalidMap);
    }
    if !map_is_zero(p, tgt, &g.mul(f)) {
        return Err(LinalgError::CompositeNonzero);
    }
    let ker = kernel(p, mid, tgt, g);
    // Express the image of f on kernel generators.
    let mut img = QMat::zero(ker.orders.len(), src.len());
    for j in 0..src.len() {
        let col = f.column(j);
        let a = factor_through(p, mid, &ker, &col)
            .expect("image of f lies in ker(g) since g f = 0");
        img.set_column(j, &a);
    }
    Ok(quotient(p, &ker.orders, &img).orders)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Prime {
        Prime(2)
    }

    #[test]
    fn homology_zero_maps() {
        // 0 -> Z -> 0 gives Z.
        let z = Orders::free(1);
        let zero = Orders::free(0);
        let f = QMat::zero(1, 0);
        let g = QMat::zero(0, 1);
        let h = homology(p2(), &zero, &z, &zero, &f, &g).unwrap();
        assert_eq!(h, Orders(vec![0]));
    }

    #[test]
    fn homology_mod_p() {
        // Z --p--> Z --0--> 0 at the right-hand Z: coker(p) = Z/p.
        let z = Orders::free(1);
        let zero = Orders::free(0);
        let f = QMat::from_int_rows(&[vec![2]]);
        let g = QMat::zero(0, 1);
        let h = homology(p2(), &z, &z, &zero, &f, &g).unwrap();
        assert_eq!(h, Orders(vec![1]));
    }

    #[test]
    fn homology_diag() {
        // Z^2 --diag(p,1)--> Z^2 --0--> 0: cokernel Z/p.
        let z2 = Orders::free(2);
        let zero = Orders::free(0);
        let f = QMat::from_int_rows(&[vec![2, 0], vec![0, 1]]);
        let g = QMat::zero(0, 2);
        let h = homology(p2(), &z2, &z2, &zero, &f, &g).unwrap();
        assert_eq!(h, Orders(vec![1]));
    }

    #[test]
    fn kernel_mult_p_on_z() {
        let z = Orders::free(1);
        let m = QMat::from_int_rows(&[vec![2]]);
        let k = kernel(p2(), &z, &z, &m);
        assert!(k.orders.is_trivial());
    }

    #[test]
    fn kernel_mult_p_on_z_mod_p2() {
        // multiplication by p on Z/p^2 has kernel Z/p included as p * gen.
        let m2 = Orders(vec![2]);
        let m = QMat::from_int_rows(&[vec![2]]);
        let k = kernel(p2(), &m2, &m2, &m);
        assert_eq!(k.orders, Orders(vec![1]));
        let v = Prime(2).valuation(&k.inclusion[(0, 0)]).unwrap();
        assert_eq!(v, 1);
    }

    #[test]
    fn kernel_sum_map() {
        // [[1,1]]: Z^2 -> Z has free kernel of rank 1 generated by (1,-1).
        let z2 = Orders::free(2);
        let z = Orders::free(1);
        let m = QMat::from_int_rows(&[vec![1, 1]]);
        let k = kernel(p2(), &z2, &z, &m);
        assert_eq!(k.orders, Orders(vec![0]));
        let a = &k.inclusion[(0, 0)];
        let b = &k.inclusion[(1, 0)];
        assert_eq!(&(a + b), &num::BigRational::zero());
        assert!(Prime(2).is_unit(a));
    }

    #[test]
    fn exact_pair_has_zero_homology() {
        // splice a map with its own kernel inclusion: K -> Z^3 -> Z^2
        let p = p2();
        let src = Orders::free(3);
        let tgt = Orders(vec![0, 1]);
        let m = QMat::from_int_rows(&[vec![2, 4, 6], vec![1, 0, 1]]);
        let k = kernel(p, &src, &tgt, &m);
        let h = homology(p, &k.orders, &src, &tgt, &k.inclusion, &m).unwrap();
        assert!(h.is_trivial(), "homology of exact pair must vanish, got {h:?}");
    }

    #[test]
    fn invalid_congruence_rejected() {
        // Z/p -> Z nonzero is not a map.
        let src = Orders(vec![1]);
        let tgt = Orders::free(1);
        let m = QMat::from_int_rows(&[vec![1]]);
        assert!(!is_valid_map(p2(), &src, &tgt, &m));
        // Z/p -> Z/p^2 must land in p * target.
        let tgt2 = Orders(vec![2]);
        assert!(!is_valid_map(p2(), &src, &tgt2, &m));
        let m2 = QMat::from_int_rows(&[vec![2]]);
        assert!(is_valid_map(p2(), &src, &tgt2, &m2));
    }

    #[test]
    fn quotient_descriptor() {
        // Z^2 / <(2,0),(0,4)> = Z/2 + Z/4 at p=2, normalized descending.
        let amb = Orders::free(2);
        let gens = QMat::from_int_rows(&[vec![2, 0], vec![0, 4]]);
        let q = quotient(p2(), &amb, &gens);
        assert_eq!(q.orders, Orders(vec![2, 1]));
    }
}
