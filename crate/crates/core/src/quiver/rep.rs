//! Representations of a simples preset: per-node graded modules with
//! structure maps for every basis arrow, natural transformations between
//! them, and the Yoneda representables.

use crate::linalg::graded::{GradedMap, GradedModule, Window};
use crate::linalg::presented::{self, Orders};
use crate::linalg::qmat::QMat;
use crate::linalg::scalar::Prime;
use crate::quiver::preset::{Regime, SimplesPreset};
use num::{BigInt, BigRational};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("window [{have_min}, {have_max}] cannot certify the request needing [{need_min}, {need_max}]")]
    WindowInsufficient { need_min: i64, need_max: i64, have_min: i64, have_max: i64 },
    #[error("preset has no tensor table")]
    NotMultiplicative,
    #[error("representation fails validation: {0}")]
    Invalid(String),
}

/// A representation: graded module per node, structure map per arrow.
#[derive(Debug, Clone)]
pub struct Representation {
    pub preset: Arc<SimplesPreset>,
    pub values: Vec<GradedModule>,
    pub arrow_maps: Vec<GradedMap>,
    /// internal-degree window on which the values are certified complete
    pub window: Window,
}

/// Window value for data that is globally complete (finite total support).
pub const WIDE: Window = Window { min: -(1 << 40), max: 1 << 40 };

impl Representation {
    pub fn zero(preset: Arc<SimplesPreset>) -> Self {
        let n = preset.nodes.len();
        let arrows = preset.arrows.iter().map(|a| GradedMap::zero(a.degree)).collect();
        Representation {
            preset,
            values: vec![GradedModule::zero(); n],
            arrow_maps: arrows,
            window: WIDE,
        }
    }

    pub fn p(&self) -> Prime {
        self.preset.p
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_trivial())
    }

    /// Structure-map block for arrow `a` at source degree `n`. Identity
    /// arrows default to the identity matrix when no block is stored (their
    /// action is forced).
    pub fn arrow_block(&self, a: usize, n: i64) -> QMat {
        let arr = &self.preset.arrows[a];
        if self.preset.is_identity(a) && !self.arrow_maps[a].has_block(n) {
            return QMat::identity(self.values[arr.src].at(n).len());
        }
        self.arrow_maps[a].block(&self.values[arr.src], &self.values[arr.tgt], n)
    }

    /// All internal degrees where some node has a nonzero value.
    pub fn support(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self
            .values
            .iter()
            .flat_map(|v| v.degrees().map(|(n, _)| n))
            .collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn shifted(&self, k: i64) -> Self {
        Representation {
            preset: self.preset.clone(),
            values: self.values.iter().map(|v| v.shifted(k)).collect(),
            arrow_maps: self.arrow_maps.iter().map(|m| m.shifted(k)).collect(),
            window: Window {
                min: self.window.min.saturating_add(k),
                max: self.window.max.saturating_add(k),
            },
        }
    }

    pub fn direct_sum(&self, other: &Representation) -> Self {
        assert!(Arc::ptr_eq(&self.preset, &other.preset) || self.preset.id == other.preset.id);
        let values: Vec<GradedModule> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        let arrow_maps = (0..self.preset.arrows.len())
            .map(|a| {
                let arr = &self.preset.arrows[a];
                self.arrow_maps[a].direct_sum(
                    &other.arrow_maps[a],
                    &self.values[arr.src],
                    &self.values[arr.tgt],
                    &other.values[arr.src],
                    &other.values[arr.tgt],
                )
            })
            .collect();
        Representation {
            preset: self.preset.clone(),
            values,
            arrow_maps,
            window: Window {
                min: self.window.min.max(other.window.min).min(self.window.max),
                max: self.window.max.min(other.window.max).max(self.window.min),
            },
        }
    }

    /// Checks regimes, map validity, arrow orders, and the full composition
    /// table (including declared relations) on all stored degrees.
    pub fn validate(&self) -> Result<(), RepError> {
        let p = self.p();
        let pre = &self.preset;
        for (v, node) in pre.nodes.iter().enumerate() {
            if node.regime == Regime::Fp {
                for (n, o) in self.values[v].degrees() {
                    if !o.is_elementary() {
                        return Err(RepError::Invalid(format!(
                            "node {} degree {n} not killed by p",
                            node.name
                        )));
                    }
                }
            }
        }
        for (a, arr) in pre.arrows.iter().enumerate() {
            let m = &self.arrow_maps[a];
            if m.degree != arr.degree {
                return Err(RepError::Invalid(format!("arrow {} degree mismatch", arr.label)));
            }
            if !m.is_valid(p, &self.values[arr.src], &self.values[arr.tgt]) {
                return Err(RepError::Invalid(format!("arrow {} map invalid", arr.label)));
            }
            if arr.order == 1 {
                // p times the structure map must vanish
                for (n, _) in self.values[arr.src].degrees() {
                    let b = self.arrow_block(a, n).scale(&p.power(1));
                    if !presented::map_is_zero(p, &self.values[arr.tgt].at(n + arr.degree), &b) {
                        return Err(RepError::Invalid(format!(
                            "arrow {} not p-torsion at degree {n}",
                            arr.label
                        )));
                    }
                }
            }
            if pre.is_identity(a) {
                for (n, o) in self.values[arr.src].degrees() {
                    if !presented::maps_equal(
                        p,
                        o,
                        &self.arrow_block(a, n),
                        &QMat::identity(o.len()),
                    ) {
                        return Err(RepError::Invalid(format!(
                            "identity arrow {} does not act as identity",
                            arr.label
                        )));
                    }
                }
            }
        }
        // composition table
        for l in 0..pre.arrows.len() {
            for r in 0..pre.arrows.len() {
                if pre.arrows[r].tgt != pre.arrows[l].src {
                    continue;
                }
                let expr = pre.compose(l, r);
                let src = pre.arrows[r].src;
                let tgt = pre.arrows[l].tgt;
                let d_r = pre.arrows[r].degree;
                for (n, _) in self.values[src].degrees() {
                    let lhs = self.arrow_block(l, n + d_r).mul(&self.arrow_block(r, n));
                    let mut rhs = QMat::zero(lhs.rows(), lhs.cols());
                    for &(c, res) in &expr.0 {
                        let coef = BigRational::from_integer(BigInt::from(c));
                        rhs = rhs.add(&self.arrow_block(res, n).scale(&coef));
                    }
                    let tgt_orders =
                        self.values[tgt].at(n + d_r + pre.arrows[l].degree);
                    if !presented::maps_equal(p, &tgt_orders, &lhs, &rhs) {
                        return Err(RepError::Invalid(format!(
                            "composition {}∘{} fails at degree {n}",
                            pre.arrows[l].label, pre.arrows[r].label
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A natural transformation of representations raising internal degree by
/// `degree` (0 for plain morphisms).
#[derive(Debug, Clone)]
pub struct RepMap {
    pub degree: i64,
    pub node_maps: Vec<GradedMap>,
}

impl RepMap {
    pub fn zero(preset: &SimplesPreset, degree: i64) -> Self {
        RepMap {
            degree,
            node_maps: (0..preset.nodes.len()).map(|_| GradedMap::zero(degree)).collect(),
        }
    }

    pub fn identity(x: &Representation) -> Self {
        RepMap { degree: 0, node_maps: x.values.iter().map(GradedMap::identity).collect() }
    }

    pub fn block(&self, x: &Representation, y: &Representation, node: usize, n: i64) -> QMat {
        self.node_maps[node].block(&x.values[node], &y.values[node], n)
    }

    /// Strict naturality against every arrow on all stored source degrees.
    pub fn is_natural(&self, x: &Representation, y: &Representation) -> bool {
        let p = x.p();
        let pre = &x.preset;
        for (a, arr) in pre.arrows.iter().enumerate() {
            for (n, _) in x.values[arr.src].degrees() {
                let lhs = y.arrow_block(a, n + self.degree).mul(&self.block(x, y, arr.src, n));
                let rhs = self
                    .block(x, y, arr.tgt, n + arr.degree)
                    .mul(&x.arrow_block(a, n));
                let tgt = y.values[arr.tgt].at(n + arr.degree + self.degree);
                if !presented::maps_equal(p, &tgt, &lhs, &rhs) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_valid(&self, x: &Representation, y: &Representation) -> bool {
        let p = x.p();
        (0..x.preset.nodes.len()).all(|v| {
            let shifted_tgt = y.values[v].clone();
            let mut ok = true;
            for (n, o) in x.values[v].degrees() {
                let b = self.block(x, y, v, n);
                ok &= presented::is_valid_map(p, o, &shifted_tgt.at(n + self.degree), &b);
            }
            ok
        }) && self.is_natural(x, y)
    }

    pub fn compose(&self, other: &RepMap, x: &Representation, mid: &Representation, y: &Representation) -> RepMap {
        // self after other
        let node_maps = (0..x.preset.nodes.len())
            .map(|v| {
                self.node_maps[v].compose(&other.node_maps[v], &mid.values[v], &y.values[v], &x.values[v])
            })
            .collect();
        RepMap { degree: self.degree + other.degree, node_maps }
    }

    pub fn add(&self, other: &RepMap, x: &Representation, y: &Representation) -> RepMap {
        assert_eq!(self.degree, other.degree);
        let mut out = RepMap::zero(&x.preset, self.degree);
        for v in 0..x.preset.nodes.len() {
            for (n, _) in x.values[v].degrees() {
                let s = self.block(x, y, v, n).add(&other.block(x, y, v, n));
                out.node_maps[v].set_block(n, s);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational, x: &Representation, y: &Representation) -> RepMap {
        let mut out = RepMap::zero(&x.preset, self.degree);
        for v in 0..x.preset.nodes.len() {
            for (n, _) in x.values[v].degrees() {
                out.node_maps[v].set_block(n, self.block(x, y, v, n).scale(c));
            }
        }
        out
    }

    pub fn is_zero_map(&self, x: &Representation, y: &Representation) -> bool {
        let p = x.p();
        (0..x.preset.nodes.len()).all(|v| {
            x.values[v].degrees().all(|(n, _)| {
                presented::map_is_zero(
                    p,
                    &y.values[v].at(n + self.degree),
                    &self.block(x, y, v, n),
                )
            })
        })
    }
}

/// A finite formal sum of shifted representables; the projective objects of
/// the engine. Generators are (node, shift).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeRep {
    pub gens: Vec<(usize, i64)>,
}

/// Positional basis of a materialized [`FreeRep`]: at (node, degree), the
/// aligned list of (generator index, arrow index) labels.
#[derive(Debug, Clone, Default)]
pub struct FreeBasis {
    /// per node: sorted (degree, labels)
    pub by_node: Vec<Vec<(i64, Vec<(usize, usize)>)>>,
}

impl FreeBasis {
    pub fn labels(&self, node: usize, degree: i64) -> &[(usize, usize)] {
        self.by_node[node]
            .iter()
            .find(|(d, _)| *d == degree)
            .map(|(_, l)| l.as_slice())
            .unwrap_or(&[])
    }
}

impl FreeRep {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Builds the actual representation together with its positional basis.
    /// The basis element (g, a) for arrow a: node_g → v sits at node v in
    /// degree shift_g + deg(a), with Z_(p)-coefficient arrows listed before
    /// p-torsion ones.
    pub fn materialize(&self, preset: &Arc<SimplesPreset>) -> (Representation, FreeBasis) {
        let p = preset.p;
        let nodes = preset.nodes.len();
        let mut by_node: Vec<Vec<(i64, Vec<(usize, usize)>)>> = vec![Vec::new(); nodes];
        for v in 0..nodes {
            let mut per_degree: std::collections::BTreeMap<i64, Vec<(usize, usize)>> =
                Default::default();
            for (g, &(node, shift)) in self.gens.iter().enumerate() {
                for a in 0..preset.arrows.len() {
                    let arr = &preset.arrows[a];
                    if arr.src == node && arr.tgt == v {
                        per_degree.entry(shift + arr.degree).or_default().push((g, a));
                    }
                }
            }
            for (d, mut labels) in per_degree {
                labels.sort_by_key(|&(g, a)| (preset.arrows[a].order, g, a));
                by_node[v].push((d, labels));
            }
        }

        let mut values = vec![GradedModule::zero(); nodes];
        for v in 0..nodes {
            for (d, labels) in &by_node[v] {
                let orders = Orders(
                    labels
                        .iter()
                        .map(|&(_, a)| match preset.nodes[v].regime {
                            Regime::Fp => 1,
                            Regime::Integral => preset.arrows[a].order,
                        })
                        .collect(),
                );
                values[v].set(*d, orders);
            }
        }

        let mut arrow_maps: Vec<GradedMap> = preset
            .arrows
            .iter()
            .map(|arr| GradedMap::zero(arr.degree))
            .collect();
        for (b, arr_b) in preset.arrows.iter().enumerate() {
            let (u, w) = (arr_b.src, arr_b.tgt);
            for (n, src_labels) in by_node[u].clone() {
                let tgt_labels = FreeBasis { by_node: by_node.clone() };
                let tgt_labels = tgt_labels.labels(w, n + arr_b.degree).to_vec();
                let mut m = QMat::zero(tgt_labels.len(), src_labels.len());
                for (col, &(g, a)) in src_labels.iter().enumerate() {
                    let expr = preset.compose(b, a);
                    for &(c, res) in &expr.0 {
                        let row = tgt_labels
                            .iter()
                            .position(|&(g2, a2)| g2 == g && a2 == res)
                            .expect("composite arrow present in target basis");
                        m[(row, col)] = BigRational::from_integer(BigInt::from(c));
                    }
                }
                arrow_maps[b].set_block(n, m);
            }
        }
        let _ = p;
        let rep = Representation {
            preset: preset.clone(),
            values,
            arrow_maps,
            window: WIDE,
        };
        let basis = FreeBasis { by_node };
        (rep, basis)
    }

    /// The Yoneda map FreeRep → X of degree `t` sending generator g to the
    /// element of X(node_g) in degree shift_g + t with the given coordinates.
    pub fn map_to(
        &self,
        preset: &Arc<SimplesPreset>,
        basis: &FreeBasis,
        materialized: &Representation,
        x: &Representation,
        t: i64,
        images: &[Vec<BigRational>],
    ) -> RepMap {
        assert_eq!(images.len(), self.gens.len());
        let mut out = RepMap::zero(preset, t);
        for v in 0..preset.nodes.len() {
            for (n, labels) in &basis.by_node[v] {
                let tgt = x.values[v].at(n + t);
                let mut m = QMat::zero(tgt.len(), labels.len());
                for (col, &(g, a)) in labels.iter().enumerate() {
                    let shift_g = self.gens[g].1;
                    let block = x.arrow_block(a, shift_g + t);
                    let img = block.apply(&images[g]);
                    for (row, val) in img.iter().enumerate() {
                        m[(row, col)] = val.clone();
                    }
                }
                out.node_maps[v].set_block(*n, m);
            }
        }
        let _ = materialized;
        out
    }
}

/// The representable on `node`, regraded up by `shift`: value at v is the
/// hom-table entry hom(node, v) placed in degree shift + arrow degree, with
/// arrows acting by post-composition.
pub fn representable(preset: &Arc<SimplesPreset>, node: usize, shift: i64) -> (Representation, FreeBasis) {
    FreeRep { gens: vec![(node, shift)] }.materialize(preset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::preset::integral_preset;

    fn setup() -> Arc<SimplesPreset> {
        Arc::new(integral_preset(Prime(2)))
    }

    #[test]
    fn representable_z_is_sphere_couple() {
        let pre = setup();
        let z = pre.node_index("Z").unwrap();
        let f = pre.node_index("F").unwrap();
        let (rep, _) = representable(&pre, z, 0);
        rep.validate().unwrap();
        // A = Z in degree 0
        assert_eq!(rep.values[z].at(0).normalized(), Orders(vec![0]));
        assert!(rep.values[z].at(1).is_trivial());
        // V = F_p in degree 0
        assert_eq!(rep.values[f].at(0).normalized(), Orders(vec![1]));
        // pi acts as an epimorphism, delta acts as zero
        let pi = pre.arrow_index("pi").unwrap();
        let delta = pre.arrow_index("delta").unwrap();
        assert!(!rep.arrow_block(pi, 0).is_zero());
        assert!(rep.arrow_block(delta, 0).is_zero());
    }

    #[test]
    fn representable_f_values() {
        let pre = setup();
        let z = pre.node_index("Z").unwrap();
        let f = pre.node_index("F").unwrap();
        let (rep, _) = representable(&pre, f, 0);
        rep.validate().unwrap();
        // value at Z: F_p generated by delta in degree -1
        assert_eq!(rep.values[z].at(-1).normalized(), Orders(vec![1]));
        assert!(rep.values[z].at(0).is_trivial());
        // value at F: id in degree 0, beta in degree -1
        assert_eq!(rep.values[f].at(0).normalized(), Orders(vec![1]));
        assert_eq!(rep.values[f].at(-1).normalized(), Orders(vec![1]));
        // homology-normalized shift: [+1] puts A in degree 0 and V in 0,1
        let hn = rep.shifted(1);
        assert_eq!(hn.values[z].at(0).normalized(), Orders(vec![1]));
        assert_eq!(hn.values[f].at(0).normalized(), Orders(vec![1]));
        assert_eq!(hn.values[f].at(1).normalized(), Orders(vec![1]));
        // pi injective into V, delta surjective onto A
        let pi = pre.arrow_index("pi").unwrap();
        let delta = pre.arrow_index("delta").unwrap();
        assert!(!hn.arrow_block(pi, 0).is_zero());
        assert!(!hn.arrow_block(delta, 1).is_zero());
    }

    #[test]
    fn direct_sum_and_shift_validate() {
        let pre = setup();
        let z = pre.node_index("Z").unwrap();
        let f = pre.node_index("F").unwrap();
        let (a, _) = representable(&pre, z, 2);
        let (b, _) = representable(&pre, f, -1);
        let s = a.direct_sum(&b);
        s.validate().unwrap();
        s.shifted(-3).validate().unwrap();
        let id = RepMap::identity(&s);
        assert!(id.is_natural(&s, &s));
    }

    #[test]
    fn free_rep_identity_yoneda_map() {
        let pre = setup();
        let z = pre.node_index("Z").unwrap();
        let free = FreeRep { gens: vec![(z, 0)] };
        let (rep, basis) = free.materialize(&pre);
        // send the generator to the canonical generator of its own value
        let images = vec![vec![BigRational::from_integer(1.into())]];
        let m = free.map_to(&pre, &basis, &rep, &rep, 0, &images);
        assert!(m.is_natural(&rep, &rep));
        // it is the identity
        for v in 0..pre.nodes.len() {
            for (n, o) in rep.values[v].degrees() {
                assert!(presented::maps_equal(
                    Prime(2),
                    o,
                    &m.block(&rep, &rep, v, n),
                    &QMat::identity(o.len())
                ));
            }
        }
    }
}
