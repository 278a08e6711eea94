//! Bigraded Ext charts: homology of Hom(resolution, Y) computed exactly,
//! with certified-window bookkeeping.

use crate::linalg::graded::Window;
use crate::linalg::presented::{self, Orders};
use crate::linalg::qmat::QMat;
use crate::quiver::rep::{RepError, Representation};
use crate::quiver::resolve::{resolve, Resolution};
use std::collections::BTreeMap;

/// A bigraded chart of group descriptors indexed by (s, t). Only nonzero
/// entries are stored; descriptors are normalized (free first, torsion
/// exponents descending).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtChart {
    pub p: u32,
    pub max_s: u32,
    pub t_min: i64,
    pub t_max: i64,
    pub entries: BTreeMap<(u32, i64), Orders>,
    pub labels: BTreeMap<(u32, i64), Vec<String>>,
}

impl ExtChart {
    pub fn new(p: u32, max_s: u32, t_min: i64, t_max: i64) -> Self {
        ExtChart { p, max_s, t_min, t_max, entries: BTreeMap::new(), labels: BTreeMap::new() }
    }

    pub fn set(&mut self, s: u32, t: i64, o: Orders) {
        let n = o.normalized();
        if n.is_trivial() {
            self.entries.remove(&(s, t));
        } else {
            self.entries.insert((s, t), n);
        }
    }

    pub fn descriptor(&self, s: u32, t: i64) -> Orders {
        self.entries.get(&(s, t)).cloned().unwrap_or_default()
    }

    /// Total generator count (free rank + torsion summands).
    pub fn dim(&self, s: u32, t: i64) -> usize {
        self.descriptor(s, t).len()
    }

    pub fn is_zero_at(&self, s: u32, t: i64) -> bool {
        self.dim(s, t) == 0
    }
}

/// Concatenated cochain module C^s_t = ⊕_g Y(node_g)_{shift_g + t}.
fn cochain_orders(res: &Resolution, y: &Representation, s: usize, t: i64) -> Orders {
    let mut o = Vec::new();
    if let Some(stage) = res.stages.get(s) {
        for &(node, shift) in &stage.gens {
            o.extend(y.values[node].at(shift + t).0.iter().copied());
        }
    }
    Orders(o)
}

/// Cochain differential C^s_t → C^{s+1}_t given by composition with d_{s+1}.
fn cochain_diff(res: &Resolution, y: &Representation, s: usize, t: i64) -> QMat {
    let src = res.stages.get(s).cloned().unwrap_or_default();
    let tgt = res.stages.get(s + 1).cloned().unwrap_or_default();
    let src_sizes: Vec<usize> = src
        .gens
        .iter()
        .map(|&(node, shift)| y.values[node].at(shift + t).len())
        .collect();
    let tgt_sizes: Vec<usize> = tgt
        .gens
        .iter()
        .map(|&(node, shift)| y.values[node].at(shift + t).len())
        .collect();
    let rows: usize = tgt_sizes.iter().sum();
    let cols: usize = src_sizes.iter().sum();
    let mut m = QMat::zero(rows, cols);
    let Some(am) = res.diffs.get(s) else { return m };

    let src_off: Vec<usize> = src_sizes
        .iter()
        .scan(0, |acc, &x| {
            let o = *acc;
            *acc += x;
            Some(o)
        })
        .collect();
    let tgt_off: Vec<usize> = tgt_sizes
        .iter()
        .scan(0, |acc, &x| {
            let o = *acc;
            *acc += x;
            Some(o)
        })
        .collect();

    for (g, &(node_g, shift_g)) in src.gens.iter().enumerate() {
        for (h, _) in tgt.gens.iter().enumerate() {
            let comb = am.entry(g, h);
            if comb.0.is_empty() {
                continue;
            }
            let mut block = QMat::zero(tgt_sizes[h], src_sizes[g]);
            for (c, a) in &comb.0 {
                let ya = y.arrow_block(*a, shift_g + t).scale(c);
                block = block.add(&ya);
            }
            let _ = node_g;
            for r in 0..block.rows() {
                for cidx in 0..block.cols() {
                    m[(tgt_off[h] + r, src_off[g] + cidx)] = block[(r, cidx)].clone();
                }
            }
        }
    }
    m
}

/// Ext^{s,t}(X, Y) for s ≤ max_s and t in [t_min, t_max]. `window` is the
/// internal-degree window on which X's data is certified; entries whose
/// certification would need resolution stages outside the shrunk windows
/// produce a WindowInsufficient error.
pub fn ext(
    x: &Representation,
    y: &Representation,
    max_s: u32,
    t_min: i64,
    t_max: i64,
    window: Window,
) -> Result<ExtChart, RepError> {
    let res = resolve(x, max_s as usize + 1, window)?;
    ext_from_resolution(&res, y, max_s, t_min, t_max)
}

pub fn ext_from_resolution(
    res: &Resolution,
    y: &Representation,
    max_s: u32,
    t_min: i64,
    t_max: i64,
) -> Result<ExtChart, RepError> {
    let p = res.preset.p;
    let y_supp = y.support();
    let mut chart = ExtChart::new(p.0, max_s, t_min, t_max);

    for s in 0..=max_s {
        let su = s as usize;
        if su >= res.stages.len() {
            if res.complete {
                continue; // higher stages vanish
            }
            return Err(RepError::WindowInsufficient {
                need_min: t_min,
                need_max: t_max,
                have_min: 0,
                have_max: 0,
            });
        }
        // each internal degree is an independent cochain computation
        let groups: Vec<Result<Option<Orders>, RepError>> =
            crate::par::par_map((t_min..=t_max).collect(), |t| {
                // certification: functionals of degree t see generators with
                // shift in [y_lo - t, y_hi - t]; those must lie inside the
                // certified window of the next stage.
                if !res.complete {
                    if let (Some(&ylo), Some(&yhi)) = (y_supp.first(), y_supp.last()) {
                        let need = (ylo - t, yhi - t);
                        let wi = res.windows.get(su + 1).or_else(|| res.windows.last());
                        let w = wi.expect("resolution has at least one stage");
                        if need.0 < w.min || need.1 > w.max {
                            return Err(RepError::WindowInsufficient {
                                need_min: need.0,
                                need_max: need.1,
                                have_min: w.min,
                                have_max: w.max,
                            });
                        }
                    }
                }
                let mid = cochain_orders(res, y, su, t);
                if mid.is_trivial() {
                    return Ok(None);
                }
                let below = if su == 0 {
                    Orders::free(0)
                } else {
                    cochain_orders(res, y, su - 1, t)
                };
                let above = cochain_orders(res, y, su + 1, t);
                let f = if su == 0 {
                    QMat::zero(mid.len(), 0)
                } else {
                    cochain_diff(res, y, su - 1, t)
                };
                let g = cochain_diff(res, y, su, t);
                presented::homology(p, &below, &mid, &above, &f, &g)
                    .map(Some)
                    .map_err(|e| RepError::Invalid(format!("cochain complex at ({s},{t}): {e}")))
            });
        for (i, group) in groups.into_iter().enumerate() {
            if let Some(h) = group? {
                chart.set(s, t_min + i as i64, h);
            }
        }
    }
    Ok(chart)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::graded::GradedModule;
    use crate::linalg::scalar::Prime;
    use crate::quiver::hom::hom;
    use crate::quiver::preset::integral_preset;
    use crate::quiver::rep::{representable, Representation};
    use std::sync::Arc;

    fn setup() -> Arc<crate::quiver::SimplesPreset> {
        Arc::new(integral_preset(Prime(2)))
    }

    #[test]
    fn ext_from_projective_concentrated_in_s0() {
        let pre = setup();
        let z = pre.node_index("Z").unwrap();
        let f = pre.node_index("F").unwrap();
        let (pz, _) = representable(&pre, z, 0);
        let (y1, _) = representable(&pre, z, 1);
        let (y2, _) = representable(&pre, f, 0);
        let y = y1.direct_sum(&y2);
        let chart = ext(&pz, &y, 4, -3, 3, Window::new(-10, 10)).unwrap();
        for (&(s, t), o) in &chart.entries {
            assert_eq!(s, 0, "unexpected Ext^{s} at t={t}: {o:?}");
            // row 0 equals A(Y)_t
            assert_eq!(o.clone(), y.values[z].at(t).normalized());
        }
        // and conversely every nonzero A(Y)_t appears
        for (t, o) in y.values[z].degrees() {
            if (-3..=3).contains(&t) {
                assert_eq!(chart.descriptor(0, t), o.normalized());
            }
        }
    }

    #[test]
    fn ext_of_zero_is_zero() {
        let pre = setup();
        let zero = Representation::zero(pre.clone());
        let (y, _) = representable(&pre, 0, 0);
        let chart = ext(&zero, &y, 3, -2, 2, Window::new(-5, 5)).unwrap();
        assert!(chart.entries.is_empty());
    }

    #[test]
    fn ext00_of_mod_p_class() {
        // X with A = F_p@0, V = 0: Ext^{0,0}(X, X) = F_p, and row 0
        // matches the hom solver.
        let pre = setup();
        let z = pre.node_index("Z").unwrap();
        let mut x = Representation::zero(pre.clone());
        let mut a = GradedModule::zero();
        a.set(0, Orders(vec![1]));
        x.values[z] = a;
        let chart = ext(&x, &x, 3, -3, 3, Window::new(-8, 8)).unwrap();
        assert_eq!(chart.descriptor(0, 0), Orders(vec![1]));
        for t in -3..=3 {
            let h = hom(&x, &x, t).unwrap();
            assert_eq!(chart.descriptor(0, t), h.orders.normalized(), "t = {t}");
        }
    }

    #[test]
    fn ext0_equals_hom_for_normalized_pf() {
        let pre = setup();
        let f = pre.node_index("F").unwrap();
        let (pf, _) = representable(&pre, f, 0);
        let hn = pf.shifted(1);
        let (y, _) = representable(&pre, 0, 0);
        let y = y.direct_sum(&hn);
        let chart = ext(&hn, &y, 2, -2, 2, Window::new(-10, 10)).unwrap();
        for t in -2..=2 {
            let h = hom(&hn, &y, t).unwrap();
            assert_eq!(chart.descriptor(0, t), h.orders.normalized(), "t = {t}");
        }
    }
}
