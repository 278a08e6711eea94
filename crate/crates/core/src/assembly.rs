//! Mayer–Vietoris assembly of integral Adams E2 charts: given the three
//! corner Ext charts (over the quiver category, the Steenrod algebra, and
//! its Bockstein subalgebra) and the two comparison maps into the third
//! corner, splice the long exact sequence
//!
//!   … → ExtQ^{s,t} → ExtP^{s,t} ⊕ ExtA^{s,t} —d^s→ ExtA0^{s,t} → ExtQ^{s+1,t} → …
//!
//! degreewise and resolve each assembled group where the sequence forces it.
//! Dedicated pipelines instantiate this for the sphere and for BP.

use crate::couples::{bp_couple, sphere_couple};
use crate::linalg::fp::FpMat;
use crate::linalg::presented::{self, is_valid_map, map_is_zero, Orders};
use crate::linalg::qmat::QMat;
use crate::linalg::scalar::{residue_mod_p, Prime};
use crate::linalg::snf::smith_normal_form;
use crate::quiver::ext::{ext, ExtChart};
use crate::quiver::hom::hom;
use crate::quiver::rep::{RepError, Representation};
use crate::steenrod::bp::{bp_comparison_map, BpComparison};
use crate::steenrod::exterior::{ext_exterior, GradedFpSpace};
use crate::steenrod::minimal_resolution;
use num::BigRational;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error("input charts do not share prime and (s, t) window")]
    WindowMismatch,
    #[error("comparison maps incompatible with chart descriptors: {0}")]
    NonCommutingInput(String),
    #[error("long-exact-sequence audit failed: {0}")]
    ExactnessAudit(String),
    #[error("assembled group at ({s},{t}) is ambiguous up to extension")]
    AmbiguousExtension { s: u32, t: i64 },
    #[error("Steenrod chart violates the Adams edge at ({s},{t})")]
    AdamsEdgeViolated { s: u32, t: i64 },
    #[error("Ext over the quiver category has unexpected content at ({s},{t})")]
    UnexpectedHigherExtP { s: u32, t: i64 },
    #[error("corner chart does not match its expected form: {0}")]
    CornerMismatch(String),
    #[error("pipeline requires p = 2, got {0}")]
    UnsupportedPrime(u32),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// A chart-level map: per-bidegree matrices between the descriptors of two
/// charts sharing a window. Missing blocks are zero.
#[derive(Debug, Clone)]
pub struct ChartMap {
    pub source: ExtChart,
    pub target: ExtChart,
    pub blocks: BTreeMap<(u32, i64), QMat>,
}

impl ChartMap {
    pub fn zero(source: ExtChart, target: ExtChart) -> Self {
        ChartMap { source, target, blocks: BTreeMap::new() }
    }

    pub fn set_block(&mut self, s: u32, t: i64, m: QMat) {
        assert_eq!(m.rows(), self.target.dim(s, t), "block rows at ({s},{t})");
        assert_eq!(m.cols(), self.source.dim(s, t), "block cols at ({s},{t})");
        self.blocks.insert((s, t), m);
    }

    pub fn block(&self, s: u32, t: i64) -> QMat {
        self.blocks
            .get(&(s, t))
            .cloned()
            .unwrap_or_else(|| QMat::zero(self.target.dim(s, t), self.source.dim(s, t)))
    }
}

/// One assembled bidegree: the two flanking pieces of the extension
/// 0 → coker(d^{s−1}) → ExtQ^{s,t} → ker(d^s) → 0 and the resolved group
/// when the sequence forces it (`None` marks an ambiguous extension).
#[derive(Debug, Clone)]
pub struct LESEntry {
    pub coker: Orders,
    pub ker: Orders,
    pub group: Option<Orders>,
}

/// The assembled chart with flanking pieces and exactness bookkeeping.
#[derive(Debug, Clone)]
pub struct LESReport {
    pub p: u32,
    pub max_s: u32,
    pub t_min: i64,
    pub t_max: i64,
    pub entries: BTreeMap<(u32, i64), LESEntry>,
}

impl LESReport {
    /// The resolved group descriptor; trivial when absent, `None` when the
    /// extension is ambiguous.
    pub fn group(&self, s: u32, t: i64) -> Option<Orders> {
        match self.entries.get(&(s, t)) {
            None => Some(Orders::default()),
            Some(e) => e.group.clone(),
        }
    }

    pub fn ambiguous_cells(&self) -> Vec<(u32, i64)> {
        self.entries
            .iter()
            .filter(|(_, e)| e.group.is_none())
            .map(|(&k, _)| k)
            .collect()
    }

    /// The report as a plain chart; errors on the first ambiguous cell.
    pub fn chart(&self) -> Result<ExtChart, AssemblyError> {
        let mut c = ExtChart::new(self.p, self.max_s, self.t_min, self.t_max);
        for (&(s, t), e) in &self.entries {
            match &e.group {
                Some(o) => c.set(s, t, o.clone()),
                None => return Err(AssemblyError::AmbiguousExtension { s, t }),
            }
        }
        Ok(c)
    }
}

fn same_window(a: &ExtChart, b: &ExtChart) -> bool {
    a.p == b.p && a.max_s == b.max_s && a.t_min == b.t_min && a.t_max == b.t_max
}

fn concat_orders(a: &Orders, b: &Orders) -> Orders {
    let mut v = a.0.clone();
    v.extend_from_slice(&b.0);
    Orders(v)
}

/// Q-rank of the induced map on free parts (torsion dies rationally).
fn rational_rank(p: Prime, src: &Orders, tgt: &Orders, d: &QMat) -> usize {
    let free_cols: Vec<usize> = (0..src.len()).filter(|&j| src.0[j] == 0).collect();
    let free_rows: Vec<usize> = (0..tgt.len()).filter(|&i| tgt.0[i] == 0).collect();
    if free_cols.is_empty() || free_rows.is_empty() {
        return 0;
    }
    let mut m = QMat::zero(free_rows.len(), free_cols.len());
    for (i, &r) in free_rows.iter().enumerate() {
        for (j, &c) in free_cols.iter().enumerate() {
            m[(i, j)] = d[(r, c)].clone();
        }
    }
    smith_normal_form(p, &m).rank
}

/// Assembles the Mayer–Vietoris long exact sequence from the three corner
/// charts and the two comparison maps into extA0. At s = 0 the group is the
/// genuine pullback ker(ExtP⁰ ⊕ ExtA⁰ → ExtA0⁰); for s ≥ 1 the extension is
/// resolved only when one flanking piece vanishes.
pub fn assemble(
    ext_p: &ExtChart,
    ext_a: &ExtChart,
    ext_a0: &ExtChart,
    map1: &ChartMap,
    map2: &ChartMap,
) -> Result<LESReport, AssemblyError> {
    if !(same_window(ext_p, ext_a) && same_window(ext_p, ext_a0)) {
        return Err(AssemblyError::WindowMismatch);
    }
    if map1.source.entries != ext_p.entries || map1.target.entries != ext_a0.entries {
        return Err(AssemblyError::NonCommutingInput(
            "first comparison map is not indexed by (extP, extA0)".into(),
        ));
    }
    if map2.source.entries != ext_a.entries || map2.target.entries != ext_a0.entries {
        return Err(AssemblyError::NonCommutingInput(
            "second comparison map is not indexed by (extA, extA0)".into(),
        ));
    }
    let p = Prime(ext_p.p);
    let mut report = LESReport {
        p: p.0,
        max_s: ext_p.max_s,
        t_min: ext_p.t_min,
        t_max: ext_p.t_max,
        entries: BTreeMap::new(),
    };

    for t in ext_p.t_min..=ext_p.t_max {
        // previous differential and its target descriptor, for the coker piece
        let mut prev: Option<(QMat, Orders)> = None;
        for s in 0..=ext_p.max_s {
            let src = concat_orders(&ext_p.descriptor(s, t), &ext_a.descriptor(s, t));
            let tgt = ext_a0.descriptor(s, t);
            let d = map1.block(s, t).hcat(&map2.block(s, t).neg());
            if !is_valid_map(p, &src, &tgt, &d) {
                return Err(AssemblyError::NonCommutingInput(format!(
                    "differential at ({s},{t}) violates descriptor compatibility"
                )));
            }
            let ker = presented::kernel(p, &src, &tgt, &d);

            // exactness audits
            if !map_is_zero(p, &tgt, &d.mul(&ker.inclusion)) {
                return Err(AssemblyError::ExactnessAudit(format!(
                    "d ∘ (kernel inclusion) nonzero at ({s},{t})"
                )));
            }
            let rank = rational_rank(p, &src, &tgt, &d);
            if ker.orders.free_rank() + rank != src.free_rank() {
                return Err(AssemblyError::ExactnessAudit(format!(
                    "rank bookkeeping fails at ({s},{t}): {} + {rank} ≠ {}",
                    ker.orders.free_rank(),
                    src.free_rank()
                )));
            }
            if src.is_elementary() && tgt.is_elementary() {
                let rank_p = FpMat::from_qmat(p, &d).rank();
                if ker.orders.len() + rank_p != src.len() {
                    return Err(AssemblyError::ExactnessAudit(format!(
                        "mod-p rank bookkeeping fails at ({s},{t})"
                    )));
                }
            }

            let coker = match &prev {
                Some((d_prev, tgt_prev)) if s >= 1 => {
                    presented::quotient(p, tgt_prev, d_prev).orders
                }
                _ => Orders::default(),
            };
            let ker_o = ker.orders.normalized();
            let group = if s == 0 {
                Some(ker_o.clone())
            } else if coker.is_trivial() {
                Some(ker_o.clone())
            } else if ker_o.is_trivial() {
                Some(coker.clone())
            } else {
                None
            };
            if !(coker.is_trivial() && ker_o.is_trivial()) || group.is_none() {
                report.entries.insert((s, t), LESEntry { coker, ker: ker_o, group });
            }
            prev = Some((d, tgt));
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// the s = 0 comparison: couple maps to their V-components

/// The row-zero comparison map Hom_P(X, Y)_t → Hom_{A(0)}(V_X, V_Y)_t
/// sending a couple map to its V-component, with both sides computed on
/// explicit bases. Charts carry max_s so the result can feed `assemble`.
pub fn hom0_comparison(
    x: &Representation,
    y: &Representation,
    max_s: u32,
    t_min: i64,
    t_max: i64,
) -> Result<ChartMap, AssemblyError> {
    let pre = &x.preset;
    let p = x.p();
    let f = pre
        .node_index("F")
        .map_err(|e| AssemblyError::NonCommutingInput(e.to_string()))?;
    let beta = pre
        .arrow_index("beta")
        .ok_or_else(|| AssemblyError::NonCommutingInput("preset has no beta arrow".into()))?;

    let mut source = ExtChart::new(p.0, max_s, t_min, t_max);
    let mut target = ExtChart::new(p.0, max_s, t_min, t_max);
    let mut blocks = BTreeMap::new();

    // degrees where V_X lives
    let x_degs: Vec<i64> = x.values[f].degrees().map(|(n, _)| n).collect();

    for t in t_min..=t_max {
        let hp = hom(x, y, t)?;
        source.set(0, t, hp.orders.clone());

        // unknown layout: one matrix block g_n per degree n of V_X
        let mut offsets = BTreeMap::new();
        let mut total = 0usize;
        for &n in &x_degs {
            let rows = y.values[f].at(n + t).len();
            let cols = x.values[f].at(n).len();
            offsets.insert(n, (total, rows, cols));
            total += rows * cols;
        }
        let slot = |n: i64, r: usize, c: usize| -> usize {
            let (off, rows, _) = offsets[&n];
            off + c * rows + r
        };

        // β-naturality constraints: β_Y ∘ g_n = g_{n−1} ∘ β_X at each n
        let mut rows_data: Vec<Vec<(usize, u32)>> = Vec::new();
        for &n in &x_degs {
            let by = FpMat::from_qmat(p, &y.arrow_block(beta, n + t));
            let bx = FpMat::from_qmat(p, &x.arrow_block(beta, n));
            let out_rows = y.values[f].at(n + t - 1).len();
            let in_cols = x.values[f].at(n).len();
            for i in 0..out_rows {
                for j in 0..in_cols {
                    let mut row = Vec::new();
                    // (β_Y g_n)_{ij} = Σ_k β_Y[i,k] g_n[k,j]
                    let (_, g_rows, _) = offsets[&n];
                    for k in 0..g_rows {
                        let c = by[(i, k)];
                        if c != 0 {
                            row.push((slot(n, k, j), c));
                        }
                    }
                    // −(g_{n−1} β_X)_{ij} = −Σ_l g_{n−1}[i,l] β_X[l,j]
                    if let Some(&(_, _, g_cols)) = offsets.get(&(n - 1)) {
                        for l in 0..g_cols {
                            let c = bx[(l, j)];
                            if c != 0 {
                                row.push((slot(n - 1, i, l), (p.0 - c) % p.0));
                            }
                        }
                    }
                    if !row.is_empty() {
                        rows_data.push(row);
                    }
                }
            }
        }
        let mut constraints = FpMat::zero(p.0, rows_data.len(), total);
        for (r, row) in rows_data.iter().enumerate() {
            for &(c, v) in row {
                constraints[(r, c)] = (constraints[(r, c)] + v) % p.0;
            }
        }
        let basis = constraints.kernel_basis();
        let dim_a0 = basis.cols();
        target.set(0, t, Orders(vec![1; dim_a0]));

        // express each couple-map basis element's V-component in that basis
        let mut m = QMat::zero(dim_a0, hp.orders.len());
        for (col, rm) in hp.basis.iter().enumerate() {
            let mut vvec = vec![0u32; total];
            for &n in &x_degs {
                let b = rm.block(x, y, f, n);
                let (_, rows, cols) = offsets[&n];
                for r in 0..rows {
                    for c in 0..cols {
                        vvec[slot(n, r, c)] = residue_mod_p(p, &b[(r, c)]);
                    }
                }
            }
            let coords = basis.solve(&vvec).ok_or_else(|| {
                AssemblyError::NonCommutingInput(format!(
                    "V-component at degree {t} is not an A(0)-comodule map"
                ))
            })?;
            for (r, &v) in coords.iter().enumerate() {
                m[(r, col)] = BigRational::from_integer(v.into());
            }
        }
        blocks.insert((0u32, t), m);
    }
    let mut cm = ChartMap::zero(source, target);
    for ((s, t), m) in blocks {
        cm.set_block(s, t, m);
    }
    Ok(cm)
}

// ---------------------------------------------------------------------------
// sphere pipeline

/// Assembles the integral Adams E2 chart of the sphere at p = 2 from the
/// three computed corners. Callers usually want `sphere_pipeline`; this
/// variant takes the Steenrod chart as input so the Adams-edge guard can be
/// exercised independently.
pub fn sphere_assemble(ext_a: &ExtChart, max_s: u32, max_t: i64) -> Result<ExtChart, AssemblyError> {
    let p = Prime(ext_a.p);
    // Adams edge: dim 1 on t = s (in range), zero below the line
    for s in 1..=max_s {
        let ts = i64::from(s);
        if ts <= max_t && ext_a.dim(s, ts) != 1 {
            return Err(AssemblyError::AdamsEdgeViolated { s, t: ts });
        }
        for t in 0..ts.min(max_t + 1) {
            if ext_a.dim(s, t) != 0 {
                return Err(AssemblyError::AdamsEdgeViolated { s, t });
            }
        }
    }
    if ext_a.dim(0, 0) != 1 {
        return Err(AssemblyError::AdamsEdgeViolated { s: 0, t: 0 });
    }

    // quiver corner: Ext over Rep(P) of the sphere couple against itself
    let pre = std::sync::Arc::new(crate::quiver::integral_preset(p));
    let sph = sphere_couple(&pre);
    let ext_p = ext(
        &sph,
        &sph,
        max_s,
        0,
        max_t,
        crate::linalg::graded::Window::new(-max_t - 2, max_t + 2),
    )?;

    // Bockstein corner: Ext over A(0) is F_p[h_0]
    let a0 = ext_exterior(p.0, &[1], &GradedFpSpace::unit())
        .expect("one odd generator with trivial coefficients");
    let mut ext_a0 = ExtChart::new(p.0, max_s, 0, max_t);
    for s in 0..=max_s {
        for t in 0..=max_t {
            let d = a0.dim(s, t);
            if d > 0 {
                ext_a0.set(s, t, Orders(vec![1; d]));
            }
        }
    }

    // comparison maps: the V-component reduction on row 0, and the
    // h_0-tower identification along the edge (rank 1, certified by the
    // Adams-edge guard above)
    let row0 = hom0_comparison(&sph, &sph, max_s, 0, max_t)?;
    if row0.source.entries != ext_p.entries {
        return Err(AssemblyError::CornerMismatch(
            "row-0 comparison basis disagrees with the quiver Ext chart".into(),
        ));
    }
    let mut map1 = ChartMap::zero(ext_p.clone(), ext_a0.clone());
    for (&(s, t), m) in &row0.blocks {
        if row0.target.dim(s, t) != ext_a0.dim(s, t) {
            return Err(AssemblyError::CornerMismatch(format!(
                "A(0)-hom dimension at ({s},{t}) differs from the F_p[h_0] chart"
            )));
        }
        map1.set_block(s, t, m.clone());
    }
    let mut map2 = ChartMap::zero(ext_a.clone(), ext_a0.clone());
    for s in 0..=max_s {
        let ts = i64::from(s);
        if ts <= max_t {
            map2.set_block(s, ts, QMat::from_int_rows(&[vec![1]]));
        }
    }

    assemble(&ext_p, ext_a, &ext_a0, &map1, &map2)?.chart()
}

/// The sphere's integral Adams E2 chart at p = 2 over filtration ≤ max_s and
/// internal degree ≤ max_t, assembled from a minimal Steenrod resolution.
pub fn sphere_pipeline(p: u32, max_s: u32, max_t: i64) -> Result<ExtChart, AssemblyError> {
    if p != 2 {
        return Err(AssemblyError::UnsupportedPrime(p));
    }
    let res = minimal_resolution(max_s, max_t);
    let mut chart = res.ext_chart();
    chart.max_s = max_s;
    sphere_assemble(&chart, max_s, max_t)
}

// ---------------------------------------------------------------------------
// BP pipeline

/// Assembles the integral Adams E2 chart of BP at p in internal degrees
/// ≤ max_t, with the Steenrod-side corners given by the closed-form
/// polynomial charts and the comparison ring map v_i ↦ v_0·t_i.
pub fn bp_pipeline(p: u32, max_t: i64) -> Result<LESReport, AssemblyError> {
    let prime = Prime(p);
    let max_s = max_t.max(0) as u32;
    let cmp: BpComparison = bp_comparison_map(p, max_t);

    // quiver corner: Ext over Rep(P) from the sphere couple to the BP couple
    let pre = std::sync::Arc::new(crate::quiver::integral_preset(prime));
    let sph = sphere_couple(&pre);
    let bp = bp_couple(&pre, max_t);
    let ext_p = ext(
        &sph,
        &bp,
        max_s,
        0,
        max_t,
        crate::linalg::graded::Window::new(-max_t - 2, max_t + 2),
    )?;
    let counts = crate::couples::bp_monomial_counts(p, max_t);
    for (&(s, t), o) in &ext_p.entries {
        if s > 0 {
            return Err(AssemblyError::UnexpectedHigherExtP { s, t });
        }
        let expect = counts.get(t as usize).copied().unwrap_or(0) as usize;
        if o.clone() != Orders::free(expect) {
            return Err(AssemblyError::CornerMismatch(format!(
                "quiver corner at (0,{t}) is {o:?}, expected free rank {expect}"
            )));
        }
    }

    // Steenrod corners from the polynomial charts
    let mut ext_a = ExtChart::new(p, max_s, 0, max_t);
    let mut ext_a0 = ExtChart::new(p, max_s, 0, max_t);
    for s in 0..=max_s {
        for t in 0..=max_t {
            let da = cmp.source.dim(s, t);
            if da > 0 {
                ext_a.set(s, t, Orders(vec![1; da]));
            }
            let d0 = cmp.target.dim(s, t);
            if d0 > 0 {
                ext_a0.set(s, t, Orders(vec![1; d0]));
            }
        }
    }

    // map1: mod-p reduction on the monomial basis at s = 0
    let mut map1 = ChartMap::zero(ext_p.clone(), ext_a0.clone());
    for t in 0..=max_t {
        let r = ext_p.dim(0, t);
        if r > 0 {
            if ext_a0.dim(0, t) != r {
                return Err(AssemblyError::CornerMismatch(format!(
                    "monomial counts at (0,{t}) disagree between corners"
                )));
            }
            let rows: Vec<Vec<i64>> =
                (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
            map1.set_block(0, t, QMat::from_int_rows(&rows));
        }
    }

    // map2: the comparison ring map per bidegree
    let mut map2 = ChartMap::zero(ext_a.clone(), ext_a0.clone());
    for s in 0..=max_s {
        for t in 0..=max_t {
            if ext_a.dim(s, t) > 0 {
                let m = cmp.matrix(s, t);
                let rows: Vec<Vec<i64>> = (0..m.rows())
                    .map(|i| (0..m.cols()).map(|j| i64::from(m[(i, j)])).collect())
                    .collect();
                if !rows.is_empty() {
                    map2.set_block(s, t, QMat::from_int_rows(&rows));
                } else {
                    map2.set_block(s, t, QMat::zero(0, ext_a.dim(s, t)));
                }
            }
        }
    }

    assemble(&ext_p, &ext_a, &ext_a0, &map1, &map2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elementary_chart(p: u32, max_s: u32, max_t: i64, cells: &[(u32, i64, usize)]) -> ExtChart {
        let mut c = ExtChart::new(p, max_s, 0, max_t);
        for &(s, t, d) in cells {
            c.set(s, t, Orders(vec![1; d]));
        }
        c
    }

    #[test]
    fn degenerate_les_is_a_direct_sum() {
        // extA0 = 0, all maps zero: the assembled chart is ExtP ⊕ ExtA.
        let ext_p = elementary_chart(3, 3, 4, &[(0, 0, 1), (1, 2, 2)]);
        let ext_a = elementary_chart(3, 3, 4, &[(1, 2, 1), (2, 3, 1)]);
        let ext_a0 = ExtChart::new(3, 3, 0, 4);
        let map1 = ChartMap::zero(ext_p.clone(), ext_a0.clone());
        let map2 = ChartMap::zero(ext_a.clone(), ext_a0.clone());
        let report = assemble(&ext_p, &ext_a, &ext_a0, &map1, &map2).unwrap();
        let chart = report.chart().unwrap();
        for s in 0..=3u32 {
            for t in 0..=4i64 {
                assert_eq!(chart.dim(s, t), ext_p.dim(s, t) + ext_a.dim(s, t), "({s},{t})");
            }
        }
    }

    #[test]
    fn surjective_differential_leaves_only_kernels() {
        // every d^s surjective: ExtQ^{s,t} = ker(d^s) for s ≥ 1.
        let p = 5;
        let ext_p = ExtChart::new(p, 2, 0, 1);
        let ext_a = elementary_chart(p, 2, 1, &[(0, 1, 2), (1, 1, 2), (2, 1, 2)]);
        let ext_a0 = elementary_chart(p, 2, 1, &[(0, 1, 1), (1, 1, 1), (2, 1, 1)]);
        let map1 = ChartMap::zero(ext_p.clone(), ext_a0.clone());
        let mut map2 = ChartMap::zero(ext_a.clone(), ext_a0.clone());
        for s in 0..=2 {
            map2.set_block(s, 1, QMat::from_int_rows(&[vec![1, 0]]));
        }
        let report = assemble(&ext_p, &ext_a, &ext_a0, &map1, &map2).unwrap();
        for s in 0..=2u32 {
            // kernel of the rank-1 surjection F_p² → F_p is F_p
            assert_eq!(report.group(s, 1).unwrap(), Orders(vec![1]), "s={s}");
        }
    }

    #[test]
    fn ambiguous_extension_is_flagged_not_resolved() {
        // coker(d^0) and ker(d^1) both nonzero at (1, 0).
        let p = 2;
        let ext_p = elementary_chart(p, 1, 0, &[(0, 0, 1)]);
        let ext_a = elementary_chart(p, 1, 0, &[(1, 0, 1)]);
        let ext_a0 = elementary_chart(p, 1, 0, &[(0, 0, 1)]);
        let map1 = ChartMap::zero(ext_p.clone(), ext_a0.clone()); // zero: coker = F_p
        let map2 = ChartMap::zero(ext_a.clone(), ext_a0.clone());
        let report = assemble(&ext_p, &ext_a, &ext_a0, &map1, &map2).unwrap();
        let e = &report.entries[&(1, 0)];
        assert_eq!(e.coker, Orders(vec![1]));
        assert_eq!(e.ker, Orders(vec![1]));
        assert!(e.group.is_none());
        assert!(matches!(report.chart(), Err(AssemblyError::AmbiguousExtension { s: 1, t: 0 })));
        assert_eq!(report.ambiguous_cells(), vec![(1, 0)]);
    }

    #[test]
    fn window_mismatch_rejected() {
        let a = ExtChart::new(2, 2, 0, 4);
        let b = ExtChart::new(2, 3, 0, 4);
        let m1 = ChartMap::zero(a.clone(), a.clone());
        let m2 = ChartMap::zero(a.clone(), a.clone());
        assert!(matches!(
            assemble(&a, &b, &a, &m1, &m2),
            Err(AssemblyError::WindowMismatch)
        ));
    }

    #[test]
    fn invalid_block_rejected() {
        // a nonzero map F_p → Z violates descriptor compatibility
        let p = 2;
        let mut ext_p = ExtChart::new(p, 1, 0, 0);
        ext_p.set(0, 0, Orders(vec![1]));
        let ext_a = ExtChart::new(p, 1, 0, 0);
        let mut ext_a0 = ExtChart::new(p, 1, 0, 0);
        ext_a0.set(0, 0, Orders(vec![0]));
        let mut map1 = ChartMap::zero(ext_p.clone(), ext_a0.clone());
        map1.set_block(0, 0, QMat::from_int_rows(&[vec![1]]));
        let map2 = ChartMap::zero(ext_a.clone(), ext_a0.clone());
        assert!(matches!(
            assemble(&ext_p, &ext_a, &ext_a0, &map1, &map2),
            Err(AssemblyError::NonCommutingInput(_))
        ));
    }

    #[test]
    fn sphere_pullback_at_origin_is_z() {
        let chart = sphere_pipeline(2, 5, 6).unwrap();
        assert_eq!(chart.descriptor(0, 0), Orders(vec![0]));
    }

    #[test]
    fn sphere_chart_vanishes_on_the_positive_edge_and_matches_ext_a_off_it() {
        let (max_s, max_t) = (6u32, 8i64);
        let chart = sphere_pipeline(2, max_s, max_t).unwrap();
        let ext_a = minimal_resolution(max_s, max_t).ext_chart();
        for s in 1..=max_s {
            assert_eq!(chart.dim(s, i64::from(s)), 0, "edge s={s}");
        }
        for s in 0..=max_s {
            for t in 0..=max_t {
                if t != i64::from(s) {
                    assert_eq!(chart.dim(s, t), ext_a.dim(s, t), "({s},{t})");
                }
            }
        }
        // a specific off-line value: (2,4) has dimension 1 (h_1²)
        assert_eq!(chart.dim(2, 4), 1);
    }

    #[test]
    fn tampered_steenrod_chart_trips_the_edge_guard() {
        let mut bad = minimal_resolution(4, 6).ext_chart();
        bad.set(3, 3, Orders::default()); // remove the edge class
        assert!(matches!(
            sphere_assemble(&bad, 4, 6),
            Err(AssemblyError::AdamsEdgeViolated { s: 3, t: 3 })
        ));
        let mut below = minimal_resolution(4, 6).ext_chart();
        below.set(4, 2, Orders(vec![1])); // class below the line
        assert!(matches!(
            sphere_assemble(&below, 4, 6),
            Err(AssemblyError::AdamsEdgeViolated { s: 4, t: 2 })
        ));
    }

    #[test]
    fn odd_prime_sphere_pipeline_is_rejected() {
        assert!(matches!(sphere_pipeline(3, 3, 3), Err(AssemblyError::UnsupportedPrime(3))));
    }

    #[test]
    fn hom0_comparison_for_the_sphere_is_the_reduction() {
        let pre = std::sync::Arc::new(crate::quiver::integral_preset(Prime(2)));
        let sph = sphere_couple(&pre);
        let cm = hom0_comparison(&sph, &sph, 2, 0, 2).unwrap();
        assert_eq!(cm.source.descriptor(0, 0), Orders(vec![0]));
        assert_eq!(cm.target.descriptor(0, 0), Orders(vec![1]));
        let b = cm.block(0, 0);
        assert_eq!(residue_mod_p(Prime(2), &b[(0, 0)]), 1, "reduction is onto");
        for t in 1..=2 {
            assert_eq!(cm.source.dim(0, t), 0);
            assert_eq!(cm.target.dim(0, t), 0);
        }
    }

    #[test]
    fn bp_pipeline_matches_the_closed_form_shape() {
        for p in [2u32, 3] {
            let max_t = i64::from(2 * p * p); // keep the test quick
            let report = bp_pipeline(p, max_t).unwrap();
            assert!(report.ambiguous_cells().is_empty(), "p={p}");
            let counts = crate::couples::bp_monomial_counts(p, max_t);
            let cmp = bp_comparison_map(p, max_t);
            for t in 0..=max_t {
                // s = 0: free abelian of the monomial-count rank
                let g = report.group(0, t).unwrap();
                if t == 0 {
                    assert_eq!(g, Orders(vec![0]), "unit at t=0");
                } else {
                    assert_eq!(g, Orders::free(counts[t as usize] as usize), "p={p} t={t}");
                }
                // s = 1 row vanishes
                assert!(report.group(1, t).unwrap().is_trivial(), "p={p} t={t}");
                // s ≥ 2: dims of coker(F_p[v] → F_p[v_0, t]) at s−1
                for s in 2..=report.max_s.min(6) {
                    let expect = cmp.target.dim(s - 1, t) - cmp.source.dim(s - 1, t);
                    assert_eq!(
                        report.group(s, t).unwrap().len(),
                        expect,
                        "p={p} ({s},{t})"
                    );
                }
            }
        }
    }
}
