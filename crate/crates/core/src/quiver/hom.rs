//! The hom solver: the abelian group of natural transformations X → Y
//! raising internal degree by t, computed exactly as the kernel of the
//! naturality-defect map between canonical hom modules.
//!
//! For diagonally presented modules M, N the group Hom(M, N) is itself
//! diagonal: one cyclic summand per generator pair, with canonical generator
//! p^lead · E_{row,col}. The space of rep maps is the kernel of
//! φ ↦ (Y(a)∘φ − φ∘X(a))_a over all basis arrows.

use crate::linalg::presented::{self, Orders};
use crate::linalg::qmat::QMat;
use crate::linalg::scalar::Prime;
use crate::quiver::rep::{RepError, RepMap, Representation};
use num::{BigRational, Zero};

/// One cyclic summand of a canonical hom module between graded modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomSummand {
    pub src_degree: i64,
    /// target-generator index at degree src_degree + t
    pub row: usize,
    /// source-generator index at src_degree
    pub col: usize,
    /// canonical generator is p^lead · E_{row,col}
    pub lead: u32,
    /// cyclic order exponent (0 = infinite)
    pub order: u32,
}

/// Canonical summands of Hom(X_v, Y_v)_t for graded modules given by their
/// per-degree orders.
fn pair_summands(
    t: i64,
    x: &crate::linalg::graded::GradedModule,
    y: &crate::linalg::graded::GradedModule,
) -> Vec<HomSummand> {
    let mut out = Vec::new();
    for (n, xo) in x.degrees() {
        let yo = y.at(n + t);
        for (col, &e) in xo.0.iter().enumerate() {
            for (row, &f) in yo.0.iter().enumerate() {
                if e > 0 && f == 0 {
                    continue; // torsion cannot map to a free generator
                }
                let lead = if e > 0 && f > e { f - e } else { 0 };
                let order = if e == 0 { f } else { e.min(f) };
                out.push(HomSummand { src_degree: n, row, col, lead, order });
            }
        }
    }
    out
}

/// Extracts canonical coordinates of a valid degree-t map given blockwise.
fn map_to_coords(
    p: Prime,
    summands: &[HomSummand],
    block_at: &mut dyn FnMut(i64) -> QMat,
) -> Vec<BigRational> {
    let mut cache: std::collections::BTreeMap<i64, QMat> = Default::default();
    summands
        .iter()
        .map(|s| {
            let b = cache.entry(s.src_degree).or_insert_with(|| block_at(s.src_degree));
            let entry = b[(s.row, s.col)].clone();
            if entry.is_zero() {
                entry
            } else {
                let q = entry / p.power(s.lead);
                debug_assert!(p.is_integral(&q), "entry below canonical valuation");
                q
            }
        })
        .collect()
}

/// Builds blocks from canonical coordinates.
fn coords_to_blocks(
    p: Prime,
    t: i64,
    x: &crate::linalg::graded::GradedModule,
    y: &crate::linalg::graded::GradedModule,
    summands: &[HomSummand],
    coords: &[BigRational],
) -> crate::linalg::graded::GradedMap {
    let mut out = crate::linalg::graded::GradedMap::zero(t);
    let mut per_degree: std::collections::BTreeMap<i64, QMat> = Default::default();
    for (n, xo) in x.degrees() {
        per_degree.insert(n, QMat::zero(y.at(n + t).len(), xo.len()));
    }
    for (s, c) in summands.iter().zip(coords) {
        if c.is_zero() {
            continue;
        }
        let m = per_degree.get_mut(&s.src_degree).expect("summand degree stored");
        m[(s.row, s.col)] = &m[(s.row, s.col)] + c * p.power(s.lead);
    }
    for (n, m) in per_degree {
        out.set_block(n, m);
    }
    out
}

/// The computed hom group with a basis of actual rep maps aligned to the
/// generator orders.
#[derive(Debug, Clone)]
pub struct HomGroup {
    pub orders: Orders,
    pub basis: Vec<RepMap>,
}

/// Hom(X, Y) in internal degree t. Errors when Y's certified window cannot
/// cover the degrees reached from X's support.
pub fn hom(x: &Representation, y: &Representation, t: i64) -> Result<HomGroup, RepError> {
    let p = x.p();
    let pre = &x.preset;
    let m = pre.max_arrow_degree();

    // window certification
    let supp = x.support();
    if let (Some(&lo), Some(&hi)) = (supp.first(), supp.last()) {
        let need_min = lo + t - m;
        let need_max = hi + t + m;
        if need_min < y.window.min || need_max > y.window.max {
            return Err(RepError::WindowInsufficient {
                need_min,
                need_max,
                have_min: y.window.min,
                have_max: y.window.max,
            });
        }
    }

    // unknown space: one canonical hom module per node
    let mut u_summands: Vec<(usize, HomSummand)> = Vec::new();
    for v in 0..pre.nodes.len() {
        for s in pair_summands(t, &x.values[v], &y.values[v]) {
            u_summands.push((v, s));
        }
    }
    let u_orders = Orders(u_summands.iter().map(|(_, s)| s.order).collect());

    // constraint space: one canonical hom module per non-identity arrow
    let arrows: Vec<usize> =
        (0..pre.arrows.len()).filter(|&a| !pre.is_identity(a)).collect();
    let mut c_summands: Vec<(usize, HomSummand)> = Vec::new();
    for &a in &arrows {
        let arr = &pre.arrows[a];
        for s in pair_summands(t + arr.degree, &x.values[arr.src], &y.values[arr.tgt]) {
            c_summands.push((a, s));
        }
    }
    let c_orders = Orders(c_summands.iter().map(|(_, s)| s.order).collect());

    // naturality-defect matrix on canonical generators
    let mut d = QMat::zero(c_orders.len(), u_orders.len());
    for (ucol, &(v, us)) in u_summands.iter().enumerate() {
        // defect blocks of the elementary map p^lead E at node v
        for &a in &arrows {
            let arr = &pre.arrows[a];
            if arr.src != v && arr.tgt != v {
                continue;
            }
            // collect the defect as blocks X_{arr.src} -> Y_{arr.tgt}
            let mut defect: std::collections::BTreeMap<i64, QMat> = Default::default();
            if arr.src == v {
                // Y(a) ∘ E : sources at us.src_degree
                let e_rows = y.values[v].at(us.src_degree + t).len();
                let e_cols = x.values[v].at(us.src_degree).len();
                let mut e = QMat::zero(e_rows, e_cols);
                e[(us.row, us.col)] = p.power(us.lead);
                let prod = y.arrow_block(a, us.src_degree + t).mul(&e);
                defect.insert(us.src_degree, prod);
            }
            if arr.tgt == v {
                // − E ∘ X(a) : sources at us.src_degree − deg a
                let n0 = us.src_degree - arr.degree;
                let e_rows = y.values[v].at(us.src_degree + t).len();
                let e_cols = x.values[v].at(us.src_degree).len();
                let mut e = QMat::zero(e_rows, e_cols);
                e[(us.row, us.col)] = p.power(us.lead);
                let prod = e.mul(&x.arrow_block(a, n0)).neg();
                let entry = defect.entry(n0).or_insert_with(|| {
                    QMat::zero(y.values[arr.tgt].at(n0 + t + arr.degree).len(),
                               x.values[arr.src].at(n0).len())
                });
                *entry = entry.add(&prod);
            }
            // coordinates of the defect in the constraint summands of arrow a
            for (crow, &(ca, cs)) in c_summands.iter().enumerate() {
                if ca != a {
                    continue;
                }
                let Some(b) = defect.get(&cs.src_degree) else { continue };
                let entry = b[(cs.row, cs.col)].clone();
                if entry.is_zero() {
                    continue;
                }
                let q = entry / p.power(cs.lead);
                debug_assert!(p.is_integral(&q));
                d[(crow, ucol)] = &d[(crow, ucol)] + &q;
            }
        }
    }
    debug_assert!(presented::is_valid_map(p, &u_orders, &c_orders, &d));

    let ker = presented::kernel(p, &u_orders, &c_orders, &d);

    // materialize basis rep maps from inclusion columns
    let mut basis = Vec::new();
    for j in 0..ker.orders.len() {
        let coords = ker.inclusion.column(j);
        let mut rm = RepMap::zero(pre, t);
        for v in 0..pre.nodes.len() {
            let v_summands: Vec<HomSummand> = u_summands
                .iter()
                .filter(|(w, _)| *w == v)
                .map(|(_, s)| *s)
                .collect();
            let v_coords: Vec<BigRational> = u_summands
                .iter()
                .zip(&coords)
                .filter(|((w, _), _)| *w == v)
                .map(|(_, c)| c.clone())
                .collect();
            rm.node_maps[v] =
                coords_to_blocks(p, t, &x.values[v], &y.values[v], &v_summands, &v_coords);
        }
        debug_assert!(rm.is_natural(x, y), "hom-solver basis element not natural");
        basis.push(rm);
    }

    Ok(HomGroup { orders: ker.orders, basis })
}

/// Graded hom over a window of internal degrees.
pub fn hom_graded(
    x: &Representation,
    y: &Representation,
    t_min: i64,
    t_max: i64,
) -> Result<Vec<(i64, HomGroup)>, RepError> {
    (t_min..=t_max).map(|t| Ok((t, hom(x, y, t)?))).collect()
}

/// Canonical coordinates of a valid rep map, for membership/factorization.
pub fn repmap_coords(x: &Representation, y: &Representation, m: &RepMap) -> Vec<BigRational> {
    let p = x.p();
    let pre = &x.preset;
    let mut out = Vec::new();
    for v in 0..pre.nodes.len() {
        let summands = pair_summands(m.degree, &x.values[v], &y.values[v]);
        let mut block = |n: i64| m.block(x, y, v, n);
        out.extend(map_to_coords(p, &summands, &mut block));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::preset::integral_preset;
    use crate::quiver::rep::representable;
    use std::sync::Arc;

    fn setup() -> Arc<crate::quiver::SimplesPreset> {
        Arc::new(integral_preset(Prime(2)))
    }

    #[test]
    fn end_of_sphere_is_z() {
        let pre = setup();
        let z = pre.node_index("Z").unwrap();
        let (pz, _) = representable(&pre, z, 0);
        let h = hom(&pz, &pz, 0).unwrap();
        assert_eq!(h.orders.normalized(), Orders(vec![0]));
        assert_eq!(h.basis.len(), 1);
    }

    #[test]
    fn hom_matches_hom_table() {
        // Hom between representables is the target's value at the source
        // node (Yoneda), with degrees set by the acting arrow.
        let pre = setup();
        let z = pre.node_index("Z").unwrap();
        let f = pre.node_index("F").unwrap();
        let (pz, _) = representable(&pre, z, 0);
        let (pf, _) = representable(&pre, f, 0);

        // maps P(Z) -> P(F): by Yoneda this is P(F)'s value at Z, i.e. F_p
        // generated in degree -1 (precomposition with delta).
        let h = hom(&pz, &pf, 0).unwrap();
        assert!(h.orders.is_trivial());
        let h = hom(&pz, &pf, -1).unwrap();
        assert_eq!(h.orders.normalized(), Orders(vec![1]));

        // maps P(F) -> P(Z): by Yoneda this is P(Z)'s value at F, i.e. F_p
        // in degree 0 (precomposition with pi) and nothing in degree -1.
        let h0 = hom(&pf, &pz, 0).unwrap();
        assert_eq!(h0.orders.normalized(), Orders(vec![1]));
        let hm1 = hom(&pf, &pz, -1).unwrap();
        assert!(hm1.orders.is_trivial());
    }

    #[test]
    fn hom_from_normalized_pf_to_pz_vanishes_at_zero() {
        let pre = setup();
        let z = pre.node_index("Z").unwrap();
        let f = pre.node_index("F").unwrap();
        let (pz, _) = representable(&pre, z, 0);
        let (pf, _) = representable(&pre, f, 0);
        let hn = pf.shifted(1);
        let h = hom(&hn, &pz, 0).unwrap();
        assert!(h.orders.is_trivial());
    }

    #[test]
    fn end_of_pf_contains_id_and_beta() {
        let pre = setup();
        let f = pre.node_index("F").unwrap();
        let (pf, _) = representable(&pre, f, 0);
        let h = hom(&pf, &pf, 0).unwrap();
        assert_eq!(h.orders.normalized(), Orders(vec![1]));
        let hb = hom(&pf, &pf, -1).unwrap();
        assert_eq!(hb.orders.normalized(), Orders(vec![1]));
    }

    #[test]
    fn yoneda_value_identification() {
        // Hom(P_Z[n], Y) = A(Y)_n for Y a sum of representables.
        let pre = setup();
        let z = pre.node_index("Z").unwrap();
        let f = pre.node_index("F").unwrap();
        let (pz2, _) = representable(&pre, z, 2);
        let (a, _) = representable(&pre, z, 2);
        let (b, _) = representable(&pre, f, 3);
        let y = a.direct_sum(&b);
        let h = hom(&pz2, &y, 0).unwrap();
        assert_eq!(h.orders.normalized(), y.values[z].at(2).normalized());
        for m in &h.basis {
            assert!(m.is_natural(&pz2, &y));
        }
    }
}
