//! Tensor product of representations over a multiplicative preset: free
//! representations multiply through the node table, arbitrary ones through
//! a two-step presentation by covers, making the construction right exact
//! by definition.

use crate::linalg::graded::Window;
use crate::linalg::presented::{self, Cokernel};
use crate::linalg::qmat::QMat;
use crate::quiver::preset::{ArrowExpr, SimplesPreset, TensorTable};
use crate::quiver::rep::{FreeBasis, FreeRep, RepError, RepMap, Representation};
use crate::quiver::resolve::{arrow_matrix, cover, kernel_of, ArrowMat};
use num::{BigRational, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

fn table(preset: &SimplesPreset) -> Result<&TensorTable, RepError> {
    preset.tensor.as_ref().ok_or(RepError::NotMultiplicative)
}

fn summands<'a>(t: &'a TensorTable, i: usize, j: usize) -> Result<&'a [(usize, i64)], RepError> {
    t.products
        .get(&(i, j))
        .map(Vec::as_slice)
        .ok_or(RepError::NotMultiplicative)
}

/// Matrix of `a ⊗ id_T` (right) or `id_T ⊗ a` (left) on representables, in
/// the node-table decompositions. Rows are indexed by the decomposition on
/// the source side of the arrow, columns by the target side.
fn tensor_const(
    preset: &SimplesPreset,
    arrow: usize,
    t_node: usize,
    left_side: bool,
) -> Result<Vec<Vec<ArrowExpr>>, RepError> {
    let tab = table(preset)?;
    let arr = &preset.arrows[arrow];
    let (rows, cols) = if left_side {
        (summands(tab, t_node, arr.src)?, summands(tab, t_node, arr.tgt)?)
    } else {
        (summands(tab, arr.src, t_node)?, summands(tab, arr.tgt, t_node)?)
    };
    if preset.is_identity(arrow) {
        // id ⊗ id is the identity on the common decomposition
        let mut m = vec![vec![ArrowExpr::zero(); cols.len()]; rows.len()];
        for (r, &(node, _)) in rows.iter().enumerate() {
            m[r][r] = ArrowExpr::single(preset.identities[node]);
        }
        return Ok(m);
    }
    if t_node == tab.unit {
        return Ok(vec![vec![ArrowExpr::single(arrow)]]);
    }
    let stored = if left_side { &tab.left } else { &tab.right };
    stored.get(&(arrow, t_node)).cloned().ok_or(RepError::NotMultiplicative)
}

/// The tensor product of two free representations: each generator pair
/// contributes the node-table summands at the added shifts. `offsets`
/// locates the flat generator index of (left gen, right gen, summand).
#[derive(Debug, Clone)]
pub struct TensorBasis {
    pub free: FreeRep,
    offsets: Vec<Vec<usize>>,
}

impl TensorBasis {
    pub fn idx(&self, ga: usize, gb: usize, summand: usize) -> usize {
        self.offsets[ga][gb] + summand
    }
}

pub fn tensor_free(
    preset: &SimplesPreset,
    a: &FreeRep,
    b: &FreeRep,
) -> Result<TensorBasis, RepError> {
    let tab = table(preset)?;
    let mut gens = Vec::new();
    let mut offsets = vec![vec![0usize; b.len()]; a.len()];
    for (ga, &(na, ka)) in a.gens.iter().enumerate() {
        for (gb, &(nb, kb)) in b.gens.iter().enumerate() {
            offsets[ga][gb] = gens.len();
            for &(node, shift) in summands(tab, na, nb)? {
                gens.push((node, ka + kb + shift));
            }
        }
    }
    Ok(TensorBasis { free: FreeRep { gens }, offsets })
}

fn push_scaled(dst: &mut ArrowMat, r: usize, c: usize, coef: &BigRational, expr: &ArrowExpr) {
    for &(k, a) in &expr.0 {
        let v = coef * BigRational::from_integer(k.into());
        if !v.is_zero() {
            dst.entry_mut(r, c).0.push((v, a));
        }
    }
}

/// d ⊗ id_Q for d: P1 → P0 between free representations.
pub fn tensor_map_right(
    preset: &SimplesPreset,
    d: &ArrowMat,
    p1: &FreeRep,
    p0: &FreeRep,
    q: &FreeRep,
    src: &TensorBasis,
    tgt: &TensorBasis,
) -> Result<ArrowMat, RepError> {
    let mut out = ArrowMat::zero(tgt.free.len(), src.free.len());
    for (h, _) in p1.gens.iter().enumerate() {
        for (g, _) in p0.gens.iter().enumerate() {
            let comb = d.entry(g, h);
            if comb.0.is_empty() {
                continue;
            }
            for (gq, &(nq, _)) in q.gens.iter().enumerate() {
                for (coef, a) in &comb.0 {
                    let m = tensor_const(preset, *a, nq, false)?;
                    for (r, row) in m.iter().enumerate() {
                        for (c, expr) in row.iter().enumerate() {
                            push_scaled(&mut out, tgt.idx(g, gq, r), src.idx(h, gq, c), coef, expr);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// id_P ⊗ g for g: Q1 → Q0 between free representations.
pub fn tensor_map_left(
    preset: &SimplesPreset,
    p: &FreeRep,
    g: &ArrowMat,
    q1: &FreeRep,
    q0: &FreeRep,
    src: &TensorBasis,
    tgt: &TensorBasis,
) -> Result<ArrowMat, RepError> {
    let mut out = ArrowMat::zero(tgt.free.len(), src.free.len());
    for (h, _) in q1.gens.iter().enumerate() {
        for (gq, _) in q0.gens.iter().enumerate() {
            let comb = g.entry(gq, h);
            if comb.0.is_empty() {
                continue;
            }
            for (gp, &(np, _)) in p.gens.iter().enumerate() {
                for (coef, a) in &comb.0 {
                    let m = tensor_const(preset, *a, np, true)?;
                    for (r, row) in m.iter().enumerate() {
                        for (c, expr) in row.iter().enumerate() {
                            push_scaled(
                                &mut out,
                                tgt.idx(gp, gq, r),
                                src.idx(gp, h, c),
                                coef,
                                expr,
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Materializes an arrow matrix as a degree-0 rep map between materialized
/// free representations (the inverse of [`arrow_matrix`]).
pub fn free_map(
    preset: &Arc<SimplesPreset>,
    src_free: &FreeRep,
    src_basis: &FreeBasis,
    src_rep: &Representation,
    tgt_free: &FreeRep,
    tgt_basis: &FreeBasis,
    tgt_rep: &Representation,
    am: &ArrowMat,
) -> RepMap {
    assert_eq!(am.rows, tgt_free.len());
    assert_eq!(am.cols, src_free.len());
    let mut images = Vec::with_capacity(src_free.len());
    for (h, &(v, kdeg)) in src_free.gens.iter().enumerate() {
        let tgt_labels = tgt_basis.labels(v, kdeg);
        let mut img = vec![BigRational::zero(); tgt_labels.len()];
        for g in 0..tgt_free.len() {
            for (c, a) in &am.entry(g, h).0 {
                let pos = tgt_labels
                    .iter()
                    .position(|&(g2, a2)| g2 == g && a2 == *a)
                    .expect("entry arrow lands on a basis label of the target");
                img[pos] += c;
            }
        }
        images.push(img);
    }
    src_free.map_to(preset, src_basis, src_rep, tgt_rep, 0, &images)
}

/// Cokernel of a degree-0 rep map, with induced arrow actions.
pub fn cokernel_rep(
    map: &RepMap,
    src: &Representation,
    tgt: &Representation,
) -> Representation {
    let p = tgt.p();
    let pre = &tgt.preset;
    let mut out = Representation::zero(pre.clone());
    out.window = tgt.window;
    let mut cokers: Vec<BTreeMap<i64, Cokernel>> = vec![BTreeMap::new(); pre.nodes.len()];
    for v in 0..pre.nodes.len() {
        for (n, o) in tgt.values[v].degrees() {
            let q = presented::quotient(p, o, &map.block(src, tgt, v, n));
            if !q.orders.is_trivial() {
                out.values[v].set(n, q.orders.clone());
            }
            cokers[v].insert(n, q);
        }
    }
    for (a, arr) in pre.arrows.iter().enumerate() {
        let (u, w) = (arr.src, arr.tgt);
        for (n, qu) in cokers[u].clone() {
            if qu.orders.is_trivial() {
                continue;
            }
            let m = n + arr.degree;
            let Some(qw) = cokers[w].get(&m) else { continue };
            if qw.orders.is_trivial() {
                continue;
            }
            // lift new generators, push through the arrow, project back
            let amb = tgt.values[u].at(n).len();
            let mut lift = QMat::zero(amb, qu.rows.len());
            for (j, &row) in qu.rows.iter().enumerate() {
                lift.set_column(j, &qu.from_new_basis.column(row));
            }
            let block = qw.projection().mul(&tgt.arrow_block(a, n)).mul(&lift);
            out.arrow_maps[a].set_block(n, block);
        }
    }
    out
}

/// A two-step presentation P1 → P0 → X → 0 by covers.
pub struct Presentation {
    pub p0: FreeRep,
    pub p1: FreeRep,
    pub diff: ArrowMat,
}

pub fn presentation(x: &Representation) -> Presentation {
    let pre = &x.preset;
    let c0 = cover(x);
    let (k, incl) = kernel_of(&c0.rep, x, &c0.epi);
    let c1 = cover(&k);
    let d = incl.compose(&c1.epi, &c1.rep, &k, &c0.rep);
    let diff = arrow_matrix(
        pre, &c1.free, &c1.rep, &c1.basis, &c0.free, &c0.rep, &c0.basis, &d,
    );
    Presentation { p0: c0.free, p1: c1.free, diff }
}

/// X ⊗ Y as the cokernel of (P1⊗Q0) ⊕ (P0⊗Q1) → P0⊗Q0 over presentations
/// of both factors.
pub fn tensor(x: &Representation, y: &Representation) -> Result<Representation, RepError> {
    let pre = &x.preset;
    let px = presentation(x);
    let py = presentation(y);

    let b = tensor_free(pre, &px.p0, &py.p0)?;
    let a1 = tensor_free(pre, &px.p1, &py.p0)?;
    let a2 = tensor_free(pre, &px.p0, &py.p1)?;
    let m1 = tensor_map_right(pre, &px.diff, &px.p1, &px.p0, &py.p0, &a1, &b)?;
    let m2 = tensor_map_left(pre, &px.p0, &py.diff, &py.p1, &py.p0, &a2, &b)?;

    // concatenate the two sources
    let src = FreeRep {
        gens: a1.free.gens.iter().chain(a2.free.gens.iter()).copied().collect(),
    };
    let mut big = ArrowMat::zero(b.free.len(), src.len());
    for r in 0..b.free.len() {
        for c in 0..a1.free.len() {
            *big.entry_mut(r, c) = m1.entry(r, c).clone();
        }
        for c in 0..a2.free.len() {
            *big.entry_mut(r, a1.free.len() + c) = m2.entry(r, c).clone();
        }
    }

    let (src_rep, src_basis) = src.materialize(pre);
    let (tgt_rep, tgt_basis) = b.free.materialize(pre);
    let map = free_map(pre, &src, &src_basis, &src_rep, &b.free, &tgt_basis, &tgt_rep, &big);
    let mut out = cokernel_rep(&map, &src_rep, &tgt_rep);
    out.window = Window {
        min: x.window.min.max(y.window.min).min(x.window.max.min(y.window.max)),
        max: x.window.max.min(y.window.max).max(x.window.min.max(y.window.min)),
    };
    Ok(out)
}

/// Audits the stored tensored-arrow matrices of a preset: for every node T
/// and composable pair of basis arrows, (l∘r) ⊗ id_T must equal the matrix
/// product of the factors, on both sides; identities must tensor to
/// identities. Every entry comparison is exact.
pub fn check_tensor_constants(preset: &SimplesPreset) -> Result<(), String> {
    let tab = table(preset).map_err(|_| "preset has no tensor table".to_string())?;
    for t_node in 0..preset.nodes.len() {
        for &left_side in &[false, true] {
            let side = if left_side { "left" } else { "right" };
            for l in 0..preset.arrows.len() {
                for r in 0..preset.arrows.len() {
                    if preset.arrows[r].tgt != preset.arrows[l].src {
                        continue;
                    }
                    let ml = tensor_const(preset, l, t_node, left_side)
                        .map_err(|_| format!("missing {side} constant for arrow {l}, T={t_node}"))?;
                    let mr = tensor_const(preset, r, t_node, left_side)
                        .map_err(|_| format!("missing {side} constant for arrow {r}, T={t_node}"))?;
                    // product: entry (v, u) = Σ_w  ml[w][u] ∘ mr[v][w]
                    let rows = mr.len();
                    let cols = if ml.is_empty() { 0 } else { ml[0].len() };
                    let mid = ml.len();
                    let mut prod = vec![vec![ArrowExpr::zero(); cols]; rows];
                    for (v, prow) in prod.iter_mut().enumerate() {
                        for (u, pe) in prow.iter_mut().enumerate() {
                            let mut acc = ArrowExpr::zero();
                            for w in 0..mid {
                                let c = preset.compose_expr(&ml[w][u], &mr[v][w]);
                                acc = acc.add(&c, preset);
                            }
                            *pe = acc;
                        }
                    }
                    // linear extension of the composite arrow expression
                    let comp = preset.compose(l, r);
                    let mut expect = vec![vec![ArrowExpr::zero(); cols]; rows];
                    for &(c, a) in &comp.0 {
                        let ma = tensor_const(preset, a, t_node, left_side).map_err(|_| {
                            format!("missing {side} constant for arrow {a}, T={t_node}")
                        })?;
                        for (v, erow) in expect.iter_mut().enumerate() {
                            for (u, ee) in erow.iter_mut().enumerate() {
                                *ee = ee.add(&ma[v][u].scale(c, preset), preset);
                            }
                        }
                    }
                    for v in 0..rows {
                        for u in 0..cols {
                            if prod[v][u].normalized(preset) != expect[v][u].normalized(preset) {
                                return Err(format!(
                                    "{side} tensor constants break functoriality: \
                                     arrows ({l} ∘ {r}) ⊗ T={t_node}, slot ({v}, {u}): \
                                     {:?} vs {:?}",
                                    prod[v][u], expect[v][u]
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    // unit coherence: products with the unit are single summands at shift 0
    for i in 0..preset.nodes.len() {
        for key in [(i, tab.unit), (tab.unit, i)] {
            if summands(tab, key.0, key.1) != Ok(&[(i, 0)][..]) {
                return Err(format!("node {i} does not tensor trivially with the unit"));
            }
        }
    }
    Ok(())
}
