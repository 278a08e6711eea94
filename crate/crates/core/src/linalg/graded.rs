//! Graded Z_(p)-modules and graded maps: thin wrappers organizing the
//! per-degree presented-module operations.

use super::presented::{self, Orders};
use super::qmat::QMat;
use super::scalar::Prime;
use std::collections::BTreeMap;

/// A degree window [min, max] on which graded data is certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub min: i64,
    pub max: i64,
}

impl Window {
    pub fn new(min: i64, max: i64) -> Self {
        assert!(min <= max, "empty window");
        Window { min, max }
    }

    pub fn contains(&self, n: i64) -> bool {
        self.min <= n && n <= self.max
    }

    pub fn shrink(&self, by: i64) -> Option<Window> {
        let min = self.min + by;
        let max = self.max - by;
        (min <= max).then_some(Window { min, max })
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.min..=self.max
    }
}

/// Graded module: generator orders in each degree; absent degrees are zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedModule {
    degrees: BTreeMap<i64, Orders>,
}

impl GradedModule {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_degrees(it: impl IntoIterator<Item = (i64, Orders)>) -> Self {
        let mut m = Self::zero();
        for (n, o) in it {
            m.set(n, o);
        }
        m
    }

    /// Orders are stored as given: positional generator bookkeeping elsewhere
    /// depends on insertion order. Compare descriptors via
    /// [`Orders::normalized`], not by raw equality.
    pub fn set(&mut self, n: i64, o: Orders) {
        if o.is_trivial() {
            self.degrees.remove(&n);
        } else {
            self.degrees.insert(n, o);
        }
    }

    /// Degreewise-normalized descriptor for comparisons.
    pub fn descriptor(&self) -> Vec<(i64, Orders)> {
        self.degrees.iter().map(|(&n, o)| (n, o.normalized())).collect()
    }

    pub fn at(&self, n: i64) -> Orders {
        self.degrees.get(&n).cloned().unwrap_or_default()
    }

    pub fn degrees(&self) -> impl Iterator<Item = (i64, &Orders)> {
        self.degrees.iter().map(|(&n, o)| (n, o))
    }

    pub fn is_trivial(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Regrade by a shift: `self.shifted(k)` has degree-n part `self[n - k]`.
    pub fn shifted(&self, k: i64) -> Self {
        GradedModule {
            degrees: self.degrees.iter().map(|(&n, o)| (n + k, o.clone())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for (n, o) in other.degrees() {
            let mut combined = m.at(n).0;
            combined.extend(o.0.iter().copied());
            m.set(n, Orders(combined));
        }
        m
    }
}

/// Graded map of a fixed degree d: blocks M_n -> N_{n+d}, keyed by the source
/// degree n. Absent blocks are zero.
#[derive(Debug, Clone)]
pub struct GradedMap {
    pub degree: i64,
    blocks: BTreeMap<i64, QMat>,
}

impl GradedMap {
    pub fn zero(degree: i64) -> Self {
        GradedMap { degree, blocks: BTreeMap::new() }
    }

    pub fn identity(m: &GradedModule) -> Self {
        let mut out = GradedMap::zero(0);
        for (n, o) in m.degrees() {
            out.set_block(n, QMat::identity(o.len()));
        }
        out
    }

    /// The same map after both source and target are regraded by `k`.
    pub fn shifted(&self, k: i64) -> Self {
        GradedMap {
            degree: self.degree,
            blocks: self.blocks.iter().map(|(&n, b)| (n + k, b.clone())).collect(),
        }
    }

    /// Blockwise direct sum; needs the graded modules to size zero blocks.
    pub fn direct_sum(
        &self,
        other: &GradedMap,
        src_a: &GradedModule,
        tgt_a: &GradedModule,
        src_b: &GradedModule,
        tgt_b: &GradedModule,
    ) -> GradedMap {
        assert_eq!(self.degree, other.degree);
        let mut out = GradedMap::zero(self.degree);
        let mut degrees: Vec<i64> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        degrees.extend(src_a.degrees().map(|(n, _)| n));
        degrees.extend(src_b.degrees().map(|(n, _)| n));
        degrees.sort_unstable();
        degrees.dedup();
        for n in degrees {
            let a = self.block(src_a, tgt_a, n);
            let b = other.block(src_b, tgt_b, n);
            out.set_block(n, a.block_diag(&b));
        }
        out
    }

    pub fn set_block(&mut self, src_degree: i64, m: QMat) {
        if m.is_zero() {
            self.blocks.remove(&src_degree);
        } else {
            self.blocks.insert(src_degree, m);
        }
    }

    /// Block at source degree n, materialized with correct dimensions.
    pub fn block(&self, src: &GradedModule, tgt: &GradedModule, n: i64) -> QMat {
        match self.blocks.get(&n) {
            Some(m) => m.clone(),
            None => QMat::zero(tgt.at(n + self.degree).len(), src.at(n).len()),
        }
    }

    pub fn block_degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.blocks.keys().copied()
    }

    pub fn has_block(&self, src_degree: i64) -> bool {
        self.blocks.contains_key(&src_degree)
    }

    pub fn is_valid(&self, p: Prime, src: &GradedModule, tgt: &GradedModule) -> bool {
        src.degrees().all(|(n, o)| {
            let b = self.block(src, tgt, n);
            b.rows() == tgt.at(n + self.degree).len()
                && b.cols() == o.len()
                && presented::is_valid_map(p, o, &tgt.at(n + self.degree), &b)
        }) && self
            .blocks
            .iter()
            .all(|(&n, b)| b.rows() == tgt.at(n + self.degree).len() && b.cols() == src.at(n).len())
    }

    pub fn compose(&self, other: &GradedMap, mid: &GradedModule, tgt_of_self: &GradedModule, src_of_other: &GradedModule) -> GradedMap {
        // self after other: src_of_other --other--> mid --self--> tgt
        let mut out = GradedMap::zero(self.degree + other.degree);
        for n in other.blocks.keys().copied().collect::<Vec<_>>() {
            let first = other.block(src_of_other, mid, n);
            let second = self.block(mid, tgt_of_self, n + other.degree);
            out.set_block(n, second.mul(&first));
        }
        out
    }

    /// Degreewise homology of  src --f--> mid --g--> tgt  over a window.
    pub fn homology_over(
        p: Prime,
        window: Window,
        src: &GradedModule,
        mid: &GradedModule,
        tgt: &GradedModule,
        f: &GradedMap,
        g: &GradedMap,
    ) -> Result<GradedModule, presented::LinalgError> {
        let mut out = GradedModule::zero();
        for n in window.iter() {
            let mid_o = mid.at(n);
            if mid_o.is_trivial() {
                continue;
            }
            let src_o = src.at(n - f.degree);
            let tgt_o = tgt.at(n + g.degree);
            let fb = f.block(src, mid, n - f.degree);
            let gb = g.block(mid, tgt, n);
            let h = presented::homology(p, &src_o, &mid_o, &tgt_o, &fb, &gb)?;
            out.set(n, h);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_and_sum() {
        let m = GradedModule::from_degrees([(0, Orders(vec![0])), (2, Orders(vec![1]))]);
        let s = m.shifted(3);
        assert_eq!(s.at(3), Orders(vec![0]));
        assert_eq!(s.at(5), Orders(vec![1]));
        let d = m.direct_sum(&s);
        assert_eq!(d.at(0), Orders(vec![0]));
        assert_eq!(d.at(5), Orders(vec![1]));
    }

    #[test]
    fn graded_homology_bockstein_style() {
        // 0 -> M --p--> M -> 0 with M = Z in degree 0: homology Z/p both
        // computed degreewise.
        let p = Prime(3);
        let m = GradedModule::from_degrees([(0, Orders(vec![0]))]);
        let zero = GradedModule::zero();
        let mut mult = GradedMap::zero(0);
        mult.set_block(0, QMat::from_int_rows(&[vec![3]]));
        let h = GradedMap::homology_over(
            p,
            Window::new(-1, 1),
            &zero,
            &m,
            &zero,
            &GradedMap::zero(0),
            &GradedMap::zero(0),
        )
        .unwrap();
        assert_eq!(h.at(0), Orders(vec![0]));

        // cokernel of multiplication by p via homology at the target
        let h2 = GradedMap::homology_over(p, Window::new(-1, 1), &m, &m, &zero, &mult, &GradedMap::zero(0)).unwrap();
        assert_eq!(h2.at(0), Orders(vec![1]));
    }
}
