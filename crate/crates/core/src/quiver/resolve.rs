//! Projective resolutions: minimal-style covers by sums of shifted
//! representables, kernels of rep maps, and the iterated cover-and-kernel
//! resolution with explicit certified windows.

use crate::linalg::graded::Window;
use crate::linalg::presented::{self, Orders, Submodule};
use crate::linalg::qmat::QMat;
use crate::quiver::preset::SimplesPreset;
use crate::quiver::rep::{FreeBasis, FreeRep, RepError, RepMap, Representation};
use num::{BigRational, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A cover of a representation by a finite sum of shifted representables.
#[derive(Debug, Clone)]
pub struct Cover {
    pub free: FreeRep,
    pub rep: Representation,
    pub basis: FreeBasis,
    pub epi: RepMap,
    /// generator images in X-coordinates, aligned with free.gens
    pub images: Vec<Vec<BigRational>>,
}

/// Chooses generators surjecting onto the cokernel of the radical action
/// (all non-identity arrows), then augments until the map is epi on every
/// stored degree.
pub fn cover(x: &Representation) -> Cover {
    let p = x.p();
    let pre = &x.preset;
    let radical: Vec<usize> =
        (0..pre.arrows.len()).filter(|&a| !pre.is_identity(a)).collect();

    // (degree, node, lift) with deterministic tie-break ordering
    let mut candidates: Vec<(i64, usize, Vec<BigRational>)> = Vec::new();
    for v in 0..pre.nodes.len() {
        for (n, o) in x.values[v].degrees() {
            let mut gens = QMat::zero(o.len(), 0);
            for &a in &radical {
                if pre.arrows[a].tgt != v {
                    continue;
                }
                gens = gens.hcat(&x.arrow_block(a, n - pre.arrows[a].degree));
            }
            let q = presented::quotient(p, o, &gens);
            for &row in &q.rows {
                candidates.push((n, v, q.from_new_basis.column(row)));
            }
        }
    }
    candidates.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

    loop {
        let free = FreeRep {
            gens: candidates.iter().map(|&(n, v, _)| (v, n)).collect(),
        };
        let (rep, basis) = free.materialize(pre);
        let images: Vec<Vec<BigRational>> =
            candidates.iter().map(|(_, _, l)| l.clone()).collect();
        let epi = free.map_to(pre, &basis, &rep, x, 0, &images);

        // surjectivity audit on every stored degree
        let mut missing: Vec<(i64, usize, Vec<BigRational>)> = Vec::new();
        for v in 0..pre.nodes.len() {
            for (n, o) in x.values[v].degrees() {
                let q = presented::quotient(p, o, &epi.block(&rep, x, v, n));
                for &row in &q.rows {
                    missing.push((n, v, q.from_new_basis.column(row)));
                }
            }
        }
        if missing.is_empty() {
            return Cover { free, rep, basis, epi, images };
        }
        candidates.extend(missing);
        candidates.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    }
}

/// Kernel of a degree-0 rep map as a representation with its inclusion.
pub fn kernel_of(
    src: &Representation,
    tgt: &Representation,
    map: &RepMap,
) -> (Representation, RepMap) {
    let p = src.p();
    let pre = &src.preset;
    let mut k = Representation::zero(pre.clone());
    k.window = Window {
        min: src.window.min.max(tgt.window.min).min(src.window.max),
        max: src.window.max.min(tgt.window.max).max(src.window.min),
    };
    let mut incl = RepMap::zero(pre, 0);
    let mut subs: Vec<BTreeMap<i64, Submodule>> = vec![BTreeMap::new(); pre.nodes.len()];

    for v in 0..pre.nodes.len() {
        for (n, o) in src.values[v].degrees() {
            let block = map.block(src, tgt, v, n);
            let sub = presented::kernel(p, o, &tgt.values[v].at(n), &block);
            if !sub.orders.is_trivial() {
                k.values[v].set(n, sub.orders.clone());
                incl.node_maps[v].set_block(n, sub.inclusion.clone());
            }
            subs[v].insert(n, sub);
        }
    }
    for (a, arr) in pre.arrows.iter().enumerate() {
        let (u, w) = (arr.src, arr.tgt);
        let degrees: Vec<i64> = k.values[u].degrees().map(|(n, _)| n).collect();
        for n in degrees {
            let sub_u = &subs[u][&n];
            let composite = src.arrow_block(a, n).mul(&sub_u.inclusion);
            let m = n + arr.degree;
            let Some(sub_w) = subs[w].get(&m) else {
                // target value absent: composite must vanish there
                debug_assert!(composite.is_zero());
                continue;
            };
            let mut block = QMat::zero(sub_w.orders.len(), sub_u.orders.len());
            for j in 0..composite.cols() {
                let col = composite.column(j);
                let coords = presented::factor_through(p, &src.values[w].at(m), sub_w, &col)
                    .expect("arrow image of a kernel lies in the kernel");
                block.set_column(j, &coords);
            }
            k.arrow_maps[a].set_block(n, block);
        }
    }
    (k, incl)
}

/// A formal combination of basis arrows with Z_(p) coefficients: one entry
/// of a differential between sums of representables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArrowComb(pub Vec<(BigRational, usize)>);

/// Matrix of arrow combinations: a map FreeRep(cols) → FreeRep(rows), entry
/// (g, h) a combination of arrows node_g → node_h of degree
/// shift_h − shift_g.
#[derive(Debug, Clone)]
pub struct ArrowMat {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<ArrowComb>,
}

impl ArrowMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ArrowMat { rows, cols, entries: vec![ArrowComb::default(); rows * cols] }
    }

    pub fn entry(&self, r: usize, c: usize) -> &ArrowComb {
        &self.entries[r * self.cols + c]
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut ArrowComb {
        &mut self.entries[r * self.cols + c]
    }
}

/// Extracts the arrow-combination matrix of a rep map between materialized
/// free representations (degree 0).
pub fn arrow_matrix(
    preset: &Arc<SimplesPreset>,
    src_free: &FreeRep,
    src_rep: &Representation,
    src_basis: &FreeBasis,
    tgt_free: &FreeRep,
    tgt_rep: &Representation,
    tgt_basis: &FreeBasis,
    map: &RepMap,
) -> ArrowMat {
    let mut out = ArrowMat::zero(tgt_free.len(), src_free.len());
    for (h, &(v, kdeg)) in src_free.gens.iter().enumerate() {
        let id_arrow = preset.identities[v];
        let src_labels = src_basis.labels(v, kdeg);
        let pos = src_labels
            .iter()
            .position(|&(g2, a2)| g2 == h && a2 == id_arrow)
            .expect("generator identity label present");
        let block = map.block(src_rep, tgt_rep, v, kdeg);
        let tgt_labels = tgt_basis.labels(v, kdeg);
        for (row, &(g, a)) in tgt_labels.iter().enumerate() {
            let c = block[(row, pos)].clone();
            if !c.is_zero() {
                out.entry_mut(g, h).0.push((c, a));
            }
        }
    }
    out
}

/// A projective resolution P_0 ← P_1 ← … of a representation, with
/// materialized stages, differentials both as rep maps and as arrow
/// matrices, and a certified window per stage.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub preset: Arc<SimplesPreset>,
    pub stages: Vec<FreeRep>,
    pub reps: Vec<Representation>,
    pub bases: Vec<FreeBasis>,
    /// diffs[s]: P_{s+1} → P_s
    pub diffs: Vec<ArrowMat>,
    pub diff_maps: Vec<RepMap>,
    pub augmentation: RepMap,
    pub windows: Vec<Window>,
    /// true when the final kernel vanished: the resolution is globally
    /// finished and higher stages are zero
    pub complete: bool,
}

impl Resolution {
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// d∘d = 0 on every consecutive pair, checked exactly.
    pub fn check_d_squared(&self) -> bool {
        for s in 1..self.diff_maps.len() {
            let comp = self.diff_maps[s - 1].compose(
                &self.diff_maps[s],
                &self.reps[s + 1],
                &self.reps[s],
                &self.reps[s - 1],
            );
            if !comp.is_zero_map(&self.reps[s + 1], &self.reps[s - 1]) {
                return false;
            }
        }
        if let (Some(d1), Some(p1)) = (self.diff_maps.first(), self.reps.get(1)) {
            let comp = self.augmentation.compose(d1, p1, &self.reps[0], &self.target_dummy());
            // target of augmentation is external; checked by caller instead
            let _ = comp;
        }
        true
    }

    fn target_dummy(&self) -> Representation {
        Representation::zero(self.preset.clone())
    }
}

/// Iterated cover-and-kernel resolution. Each kernel step shrinks the
/// certified window by the preset's maximal arrow degree; stages stop
/// early (with `complete = true`) when the kernel vanishes.
pub fn resolve(x: &Representation, max_s: usize, window: Window) -> Result<Resolution, RepError> {
    let pre = x.preset.clone();
    let m = pre.max_arrow_degree();
    let mut res = Resolution {
        preset: pre.clone(),
        stages: Vec::new(),
        reps: Vec::new(),
        bases: Vec::new(),
        diffs: Vec::new(),
        diff_maps: Vec::new(),
        augmentation: RepMap::zero(&pre, 0),
        windows: Vec::new(),
        complete: false,
    };
    let mut cur = x.clone();
    let mut cur_incl: Option<RepMap> = None; // inclusion of cur into reps[s-1]
    let mut w = window;

    for s in 0..=max_s {
        let cov = cover(&cur);
        if s == 0 {
            res.augmentation = cov.epi.clone();
        } else {
            let incl = cur_incl.as_ref().expect("inclusion present past stage 0");
            let d = incl.compose(&cov.epi, &cov.rep, &cur, &res.reps[s - 1]);
            let am = arrow_matrix(
                &pre,
                &cov.free,
                &cov.rep,
                &cov.basis,
                &res.stages[s - 1],
                &res.reps[s - 1],
                &res.bases[s - 1],
                &d,
            );
            res.diffs.push(am);
            res.diff_maps.push(d);
        }
        res.windows.push(w);
        res.stages.push(cov.free.clone());
        res.reps.push(cov.rep.clone());
        res.bases.push(cov.basis.clone());

        if s == max_s {
            break;
        }
        let (k, incl) = kernel_of(&cov.rep, &cur, &cov.epi);
        if k.is_trivial() {
            res.complete = true;
            break;
        }
        cur = k;
        cur_incl = Some(incl);
        match w.shrink(m) {
            Some(next) => w = next,
            None => break, // certified depth exhausted; partial resolution
        }
    }
    Ok(res)
}

/// Exactness audit: homology of the resolution vanishes at positions ≥ 1
/// and the augmentation is a cokernel at position 0, degreewise within each
/// stage's certified window.
pub fn check_exactness(res: &Resolution, x: &Representation) -> Result<(), String> {
    let p = x.p();
    let pre = &res.preset;
    // position 0: ker(augmentation) = im(d_1)
    for v in 0..pre.nodes.len() {
        for (n, o) in res.reps[0].values[v].degrees() {
            if res.windows.len() > 1 && !res.windows[1].contains(n) {
                continue;
            }
            let d1 = if res.reps.len() > 1 {
                res.diff_maps[0].block(&res.reps[1], &res.reps[0], v, n)
            } else {
                QMat::zero(o.len(), 0)
            };
            let src_o = if res.reps.len() > 1 {
                res.reps[1].values[v].at(n)
            } else {
                Orders::free(0)
            };
            let aug = res.augmentation.block(&res.reps[0], x, v, n);
            let h = presented::homology(p, &src_o, o, &x.values[v].at(n), &d1, &aug)
                .map_err(|e| format!("position 0 node {v} degree {n}: {e}"))?;
            if !h.is_trivial() {
                return Err(format!("homology at position 0, node {v}, degree {n}: {h:?}"));
            }
        }
    }
    // positions 1..len-1
    for s in 1..res.reps.len().saturating_sub(1) {
        for v in 0..pre.nodes.len() {
            for (n, o) in res.reps[s].values[v].degrees() {
                if !res.windows[s + 1].contains(n) {
                    continue;
                }
                let f = res.diff_maps[s].block(&res.reps[s + 1], &res.reps[s], v, n);
                let g = res.diff_maps[s - 1].block(&res.reps[s], &res.reps[s - 1], v, n);
                let h = presented::homology(
                    p,
                    &res.reps[s + 1].values[v].at(n),
                    o,
                    &res.reps[s - 1].values[v].at(n),
                    &f,
                    &g,
                )
                .map_err(|e| format!("position {s} node {v} degree {n}: {e}"))?;
                if !h.is_trivial() {
                    return Err(format!("homology at position {s}, node {v}, degree {n}: {h:?}"));
                }
            }
        }
    }
    // last stage when complete: kernel of the last differential vanishes
    if res.complete && res.reps.len() >= 2 {
        let s = res.reps.len() - 1;
        for v in 0..pre.nodes.len() {
            for (n, o) in res.reps[s].values[v].degrees() {
                let g = res.diff_maps[s - 1].block(&res.reps[s], &res.reps[s - 1], v, n);
                let ker = presented::kernel(p, o, &res.reps[s - 1].values[v].at(n), &g);
                if !ker.orders.is_trivial() {
                    return Err(format!(
                        "complete resolution has kernel at top stage, node {v}, degree {n}"
                    ));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar::Prime;
    use crate::quiver::preset::integral_preset;
    use crate::quiver::rep::representable;
    use crate::linalg::graded::GradedModule;

    fn setup() -> Arc<SimplesPreset> {
        Arc::new(integral_preset(Prime(2)))
    }

    #[test]
    fn cover_of_representable_is_identity() {
        let pre = setup();
        let z = pre.node_index("Z").unwrap();
        let (pz, _) = representable(&pre, z, 0);
        let c = cover(&pz);
        assert_eq!(c.free.gens, vec![(z, 0)]);
        let (k, _) = kernel_of(&c.rep, &pz, &c.epi);
        assert!(k.is_trivial());
    }

    #[test]
    fn projective_resolves_in_length_zero() {
        let pre = setup();
        let f = pre.node_index("F").unwrap();
        let (pf, _) = representable(&pre, f, 0);
        let hn = pf.shifted(1);
        let res = resolve(&hn, 5, Window::new(-10, 10)).unwrap();
        assert_eq!(res.len(), 1);
        assert!(res.complete);
        check_exactness(&res, &hn).unwrap();
    }

    #[test]
    fn mod_p_class_of_sphere_resolution() {
        // X with A = F_p in degree 0 and V = 0: P_0 = P(Z), then the
        // kernel needs a Z and an F generator, and so on; exactness and
        // d^2 = 0 hold in the certified window.
        let pre = setup();
        let z = pre.node_index("Z").unwrap();
        let mut x = Representation::zero(pre.clone());
        let mut a = GradedModule::zero();
        a.set(0, Orders(vec![1]));
        x.values[z] = a;
        x.validate().unwrap();

        let res = resolve(&x, 6, Window::new(-8, 8)).unwrap();
        assert_eq!(res.stages[0].gens, vec![(z, 0)]);
        assert!(res.len() >= 4);
        assert!(res.check_d_squared());
        check_exactness(&res, &x).unwrap();
        // second stage needs two generators: one integral, one F-type
        assert_eq!(res.stages[1].gens.len(), 2);
    }

    #[test]
    fn moore_couple_rep_is_projective() {
        // A = Z/p in degree 0, V = F_p in degrees 0 and 1 with delta iso:
        // this is the homology-normalized F-representable itself.
        let pre = setup();
        let z = pre.node_index("Z").unwrap();
        let f = pre.node_index("F").unwrap();
        let mut x = Representation::zero(pre.clone());
        let mut a = GradedModule::zero();
        a.set(0, Orders(vec![1]));
        x.values[z] = a;
        x.values[f] = {
            let mut v = GradedModule::zero();
            v.set(0, Orders(vec![1]));
            v.set(1, Orders(vec![1]));
            v
        };
        let pi = pre.arrow_index("pi").unwrap();
        let delta = pre.arrow_index("delta").unwrap();
        let beta = pre.arrow_index("beta").unwrap();
        x.arrow_maps[pi].set_block(0, QMat::identity(1));
        x.arrow_maps[delta].set_block(1, QMat::identity(1));
        x.arrow_maps[beta].set_block(1, QMat::identity(1));
        x.validate().unwrap();

        let res = resolve(&x, 5, Window::new(-6, 6)).unwrap();
        assert!(res.complete);
        assert_eq!(res.stages.len(), 1);
        assert_eq!(res.stages[0].gens, vec![(f, 1)]);
        check_exactness(&res, &x).unwrap();
    }

    #[test]
    fn cokernel_of_p_periodic_resolution() {
        // X = P_Z / p: A = Z/p, V = F_p (pi iso, delta = 0). Resolving in
        // Rep is infinite periodic: P_Z <-p- P_Z <- P_F <- P_Z[-1] <- ...
        let pre = setup();
        let z = pre.node_index("Z").unwrap();
        let f = pre.node_index("F").unwrap();
        let mut x = Representation::zero(pre.clone());
        let mut a = GradedModule::zero();
        a.set(0, Orders(vec![1]));
        x.values[z] = a.clone();
        x.values[f] = a.clone();
        let pi = pre.arrow_index("pi").unwrap();
        x.arrow_maps[pi].set_block(0, QMat::identity(1));
        x.validate().unwrap();

        let res = resolve(&x, 6, Window::new(-8, 8)).unwrap();
        assert!(!res.complete);
        assert_eq!(res.stages[0].gens, vec![(z, 0)]);
        assert_eq!(res.stages[1].gens, vec![(z, 0)]);
        assert_eq!(res.stages[2].gens, vec![(f, 0)]);
        assert_eq!(res.stages[3].gens, vec![(z, -1)]);
        assert_eq!(res.stages[4].gens, vec![(z, -1)]);
        assert_eq!(res.stages[5].gens, vec![(f, -1)]);
        // first differential is multiplication by p
        let d = res.diffs[0].entry(0, 0);
        assert_eq!(d.0.len(), 1);
        assert_eq!(Prime(2).valuation(&d.0[0].0), Some(1));
        assert!(res.check_d_squared());
        check_exactness(&res, &x).unwrap();
    }
}
