//! Minimal free resolutions of F_2 over the mod-2 Steenrod algebra in a
//! bidegree rectangle, with generator counts giving Ext dimensions.

use super::milnor::{milnor_basis, F2Sum, MilnorMono};
use crate::linalg::gf2::Gf2Mat;
use crate::linalg::presented::Orders;
use crate::quiver::ext::ExtChart;
use serde::{Deserialize, Serialize};

/// A minimal resolution … → F_s → F_{s−1} → … → F_0 → F_2 computed for
/// internal degree ≤ max_t and filtration ≤ max_s. Generator counts at
/// (s, t) equal dim Ext_A^{s,t}(F_2, F_2).
#[derive(Debug, Clone)]
pub struct SteenrodResolution {
    pub max_s: u32,
    pub max_t: i64,
    /// generator internal degrees per stage, in creation order
    pub gens: Vec<Vec<i64>>,
    /// diffs[s][g]: d(g) for stage-s generator g (s ≥ 1) as pairs
    /// (stage-(s−1) generator, Steenrod element)
    pub diffs: Vec<Vec<Vec<(usize, F2Sum)>>>,
}

/// Positional basis of the free module F_s in internal degree t:
/// pairs (generator, Milnor monomial of complementary degree).
fn free_basis(gens: &[i64], t: i64) -> Vec<(usize, MilnorMono)> {
    let mut out = Vec::new();
    for (g, &tg) in gens.iter().enumerate() {
        if tg <= t {
            for m in milnor_basis(t - tg) {
                out.push((g, m));
            }
        }
    }
    out
}

fn basis_index(basis: &[(usize, MilnorMono)], g: usize, m: &[u32]) -> usize {
    basis
        .iter()
        .position(|(h, mm)| *h == g && mm.as_slice() == m)
        .expect("product monomial stays in the degree-t basis")
}

impl SteenrodResolution {
    /// d(m·g) for a stage-s basis element, expanded in the degree-t basis
    /// of stage s−1.
    fn diff_column(
        &self,
        s: usize,
        g: usize,
        m: &[u32],
        tgt_basis: &[(usize, MilnorMono)],
    ) -> Vec<bool> {
        let mut col = vec![false; tgt_basis.len()];
        for (h, e) in &self.diffs[s][g] {
            let prod = F2Sum::from_mono(m.to_vec()).mul(e);
            for mono in &prod.0 {
                let idx = basis_index(tgt_basis, *h, mono);
                col[idx] = !col[idx];
            }
        }
        col
    }

    /// The matrix of d_s in internal degree t (columns over the stage-s
    /// basis, rows over the stage-(s−1) basis).
    pub fn diff_matrix(&self, s: usize, t: i64) -> Gf2Mat {
        let src = free_basis(&self.gens[s], t);
        let tgt = free_basis(&self.gens[s - 1], t);
        let mut m = Gf2Mat::zero(tgt.len(), src.len());
        for (c, (g, mono)) in src.iter().enumerate() {
            for (r, v) in self.diff_column(s, *g, mono, &tgt).into_iter().enumerate() {
                if v {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn gen_count(&self, s: u32, t: i64) -> usize {
        self.gens
            .get(s as usize)
            .map_or(0, |v| v.iter().filter(|&&tg| tg == t).count())
    }

    /// Ext dimensions as a chart of F_2-vector spaces.
    pub fn ext_chart(&self) -> ExtChart {
        let mut chart = ExtChart::new(2, self.max_s, 0, self.max_t);
        for (s, gens) in self.gens.iter().enumerate() {
            for t in 0..=self.max_t {
                let d = gens.iter().filter(|&&tg| tg == t).count();
                if d > 0 {
                    chart.set(s as u32, t, Orders(vec![1; d]));
                }
            }
        }
        chart
    }

    /// No differential entry may contain the unit monomial.
    pub fn check_minimal(&self) -> bool {
        self.diffs
            .iter()
            .flatten()
            .flatten()
            .all(|(_, e)| !e.has_unit_term())
    }

    /// d∘d = 0, checked symbolically through the Milnor product.
    pub fn check_d_squared(&self) -> bool {
        for s in 2..self.diffs.len() {
            for entries in &self.diffs[s] {
                let mut acc: Vec<F2Sum> = vec![F2Sum::zero(); self.gens[s - 2].len()];
                for (h, e) in entries {
                    for (k, f) in &self.diffs[s - 1][*h] {
                        acc[*k] = acc[*k].add(&e.mul(f));
                    }
                }
                if acc.iter().any(|v| !v.is_zero()) {
                    return false;
                }
            }
        }
        true
    }
}

/// F_2-span with incremental membership testing.
#[derive(Default)]
struct Span {
    /// reduced vectors keyed by leading index
    rows: Vec<(usize, Vec<bool>)>,
}

impl Span {
    /// Reduces v against the span; returns the residue if nonzero.
    fn reduce(&self, mut v: Vec<bool>) -> Option<Vec<bool>> {
        for (lead, w) in &self.rows {
            if v[*lead] {
                for (a, b) in v.iter_mut().zip(w) {
                    *a ^= *b;
                }
            }
        }
        v.iter().any(|&b| b).then_some(v)
    }

    /// Inserts a reduced vector, back-eliminating its lead from existing
    /// rows so the span stays in reduced echelon form (single-pass reduce
    /// then remains an exact membership test).
    fn insert(&mut self, v: Vec<bool>) {
        let lead = v.iter().position(|&b| b).expect("nonzero vector");
        for (_, w) in &mut self.rows {
            if w[lead] {
                for (a, b) in w.iter_mut().zip(&v) {
                    *a ^= *b;
                }
            }
        }
        self.rows.push((lead, v));
        self.rows.sort_by_key(|(l, _)| *l);
    }
}

/// Builds the minimal resolution stage by stage: within a stage, the kernel
/// of the previous differential is computed at every internal degree
/// (independent degrees, in parallel when enabled), then a deterministic
/// ascending-degree merge compares each kernel with the image of the current
/// stage and turns uncovered kernel vectors into new generators.
pub fn minimal_resolution(max_s: u32, max_t: i64) -> SteenrodResolution {
    let mut res = SteenrodResolution {
        max_s,
        max_t,
        gens: vec![Vec::new(); max_s as usize + 1],
        diffs: vec![Vec::new(); max_s as usize + 1],
    };
    res.gens[0].push(0); // the augmentation generator
    res.diffs[0].push(Vec::new());

    for s in 1..=max_s as usize {
        // kernel of d_{s−1} at every degree t (independent computations)
        let res_ref = &res;
        let kernels: Vec<(Vec<(usize, MilnorMono)>, Vec<Vec<bool>>)> =
            crate::par::par_map((0..=max_t).collect(), move |t| {
                let tgt_basis = free_basis(&res_ref.gens[s - 1], t);
                if tgt_basis.is_empty() {
                    return (tgt_basis, Vec::new());
                }
                let kernel_cols: Vec<Vec<bool>> = if s == 1 {
                    // augmentation: everything of positive degree
                    if t == 0 {
                        Vec::new()
                    } else {
                        (0..tgt_basis.len())
                            .map(|i| (0..tgt_basis.len()).map(|j| j == i).collect())
                            .collect()
                    }
                } else {
                    let d = res_ref.diff_matrix(s - 1, t);
                    let k = d.kernel_basis();
                    (0..k.cols())
                        .map(|c| (0..k.rows()).map(|r| k.get(r, c)).collect())
                        .collect()
                };
                (tgt_basis, kernel_cols)
            });

        for t in 0..=max_t {
            let (tgt_basis, kernel_cols) = &kernels[t as usize];
            if kernel_cols.is_empty() {
                continue;
            }
            // image of the current stage from generators of lower degree
            let mut span = Span::default();
            let src_basis = free_basis(&res.gens[s], t);
            for (g, m) in &src_basis {
                let col = res.diff_column(s, *g, m, &tgt_basis);
                if let Some(red) = span.reduce(col) {
                    span.insert(red);
                }
            }
            // new generators cover the rest of the kernel
            for v in kernel_cols {
                let Some(red) = span.reduce(v.clone()) else {
                    continue;
                };
                let mut entries: Vec<(usize, F2Sum)> = Vec::new();
                for (i, &bit) in red.iter().enumerate() {
                    if bit {
                        let (h, m) = &tgt_basis[i];
                        match entries.iter_mut().find(|(hh, _)| hh == h) {
                            Some((_, e)) => *e = e.add(&F2Sum::from_mono(m.clone())),
                            None => entries.push((*h, F2Sum::from_mono(m.clone()))),
                        }
                    }
                }
                res.gens[s].push(t);
                res.diffs[s].push(entries);
                span.insert(red);
            }
        }
    }
    res
}

// ---------------------------------------------------------------------------
// checkpoint format

#[derive(Serialize, Deserialize)]
struct CheckpointGen {
    s: u32,
    t: i64,
    id: usize,
}

#[derive(Serialize, Deserialize)]
struct CheckpointEntry {
    s: u32,
    id: usize,
    target: usize,
    monomials: Vec<MilnorMono>,
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    max_s: u32,
    max_t: i64,
    generators: Vec<CheckpointGen>,
    entries: Vec<CheckpointEntry>,
}

pub fn to_checkpoint(res: &SteenrodResolution) -> String {
    let mut generators = Vec::new();
    for (s, gens) in res.gens.iter().enumerate() {
        for (id, &t) in gens.iter().enumerate() {
            generators.push(CheckpointGen { s: s as u32, t, id });
        }
    }
    let mut entries = Vec::new();
    for (s, stage) in res.diffs.iter().enumerate() {
        for (id, gen_entries) in stage.iter().enumerate() {
            for (target, e) in gen_entries {
                entries.push(CheckpointEntry {
                    s: s as u32,
                    id,
                    target: *target,
                    monomials: e.0.iter().cloned().collect(),
                });
            }
        }
    }
    let cp = Checkpoint { max_s: res.max_s, max_t: res.max_t, generators, entries };
    serde_json::to_string_pretty(&cp).expect("checkpoint serializes")
}

pub fn from_checkpoint(s: &str) -> Result<SteenrodResolution, String> {
    let cp: Checkpoint = serde_json::from_str(s).map_err(|e| e.to_string())?;
    let stages = cp.max_s as usize + 1;
    let mut res = SteenrodResolution {
        max_s: cp.max_s,
        max_t: cp.max_t,
        gens: vec![Vec::new(); stages],
        diffs: vec![Vec::new(); stages],
    };
    for g in &cp.generators {
        let s = g.s as usize;
        if s >= stages || g.id != res.gens[s].len() {
            return Err("generators out of order".into());
        }
        res.gens[s].push(g.t);
        res.diffs[s].push(Vec::new());
    }
    for e in &cp.entries {
        let s = e.s as usize;
        if s >= stages || e.id >= res.diffs[s].len() || e.target >= res.gens[s - 1].len() {
            return Err("entry out of range".into());
        }
        let mut sum = F2Sum::zero();
        for m in &e.monomials {
            sum.toggle(m.clone());
        }
        res.diffs[s][e.id].push((e.target, sum));
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_resolution_first_stages() {
        let res = minimal_resolution(3, 8);
        assert!(res.check_minimal());
        assert!(res.check_d_squared());
        // Ext^{0,t}: F_2 at t = 0 only
        assert_eq!(res.gen_count(0, 0), 1);
        for t in 1..=8 {
            assert_eq!(res.gen_count(0, t), 0);
        }
        // Ext^{1,t}: the indecomposables h_i at t = 1, 2, 4, 8
        for t in 0..=8i64 {
            let expect = usize::from(t == 1 || t == 2 || t == 4 || t == 8);
            assert_eq!(res.gen_count(1, t), expect, "s=1 t={t}");
        }
        // Adams edge: dim 1 at t = s, zero below
        for s in 1..=3u32 {
            assert_eq!(res.gen_count(s, i64::from(s)), 1);
            for t in 0..i64::from(s) {
                assert_eq!(res.gen_count(s, t), 0);
            }
        }
    }

    #[test]
    fn checkpoint_round_trip() {
        let res = minimal_resolution(2, 6);
        let s = to_checkpoint(&res);
        let back = from_checkpoint(&s).unwrap();
        assert_eq!(back.gens, res.gens);
        assert_eq!(back.diffs, res.diffs);
        assert_eq!(to_checkpoint(&back), s);
    }
}
