//! Closed-form combinatorics for the BP integral Adams E2 chart, the
//! predicted differential pattern, the E∞ counting check against the
//! Hurewicz image, and the obstruction-vanishing parity scan.

use crate::assembly::{bp_pipeline, AssemblyError};
use crate::couples::bp_monomial_counts;
use crate::linalg::presented::Orders;
use crate::quiver::ext::ExtChart;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BpAnalysisError {
    #[error("odd-parity class where the chart must be even: ({s},{t})")]
    ParityViolation { s: u32, t: i64 },
    #[error("class (t_{{{index:?}}}, s={s}) hit by more than one predicted differential")]
    DoubleHit { index: Vec<u32>, s: u32 },
    #[error("class (t_{{{index:?}}}, s={s}) not hit by any predicted differential")]
    Orphan { index: Vec<u32>, s: u32 },
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
}

/// A monomial t_I in the t_i: sorted multiset of indices ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MonomialIndex(pub Vec<u32>);

impl MonomialIndex {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Σ (2pⁱ − 2) over the indices.
    pub fn degree(&self, p: u32) -> i64 {
        self.0.iter().map(|&i| 2 * i64::from(p).pow(i) - 2).sum()
    }
}

/// All monomials t_I grouped by internal degree 0..=max_t, each sorted.
pub fn monomials_by_degree(p: u32, max_t: i64) -> Vec<Vec<MonomialIndex>> {
    let n = max_t.max(0) as usize;
    let mut out: Vec<Vec<MonomialIndex>> = vec![Vec::new(); n + 1];
    fn build(
        p: u32,
        max_t: i64,
        min_index: u32,
        cur: &mut Vec<u32>,
        rest: i64,
        out: &mut [Vec<MonomialIndex>],
    ) {
        out[(max_t - rest) as usize].push(MonomialIndex(cur.clone()));
        let mut i = min_index;
        loop {
            let d = 2 * i64::from(p).pow(i) - 2;
            if d > rest {
                break;
            }
            cur.push(i);
            build(p, max_t, i, cur, rest - d, out);
            cur.pop();
            i += 1;
        }
    }
    let mut cur = Vec::new();
    build(p, max_t, 1, &mut cur, max_t, &mut out);
    for v in &mut out {
        v.sort();
    }
    out
}

/// The closed-form BP integral Adams E2 group at (s, t): free abelian on the
/// monomials at s = 0, zero at s = 1, and for s ≥ 2 an F_p-space on the
/// monomials t_I with |I| ≥ s in internal degree t − s + 1.
pub fn bp_e2_closed_form(p: u32, s: u32, t: i64) -> Orders {
    match s {
        0 => {
            if t < 0 {
                return Orders::default();
            }
            let counts = bp_monomial_counts(p, t);
            Orders::free(counts[t as usize] as usize)
        }
        1 => Orders::default(),
        _ => {
            let d = t - i64::from(s) + 1;
            if d < 0 {
                return Orders::default();
            }
            let dim = monomials_by_degree(p, d)[d as usize]
                .iter()
                .filter(|m| m.len() >= s as usize)
                .count();
            Orders(vec![1; dim])
        }
    }
}

/// The closed-form BP integral Adams E2 chart in internal degrees ≤ max_t,
/// with the same window the assembled pipeline uses (filtration bound
/// max_s = max_t), so agreeing computations serialize identically.
pub fn bp_e2_chart(p: u32, max_t: i64) -> ExtChart {
    let max_s = max_t.max(0) as u32;
    let mut chart = ExtChart::new(p, max_s, 0, max_t);
    for s in 0..=max_s {
        for t in 0..=max_t {
            chart.set(s, t, bp_e2_closed_form(p, s, t));
        }
    }
    chart
}

/// One predicted differential: the filtration-0 class p^k·t_I supports a
/// length-k differential onto the positive-filtration class indexed by
/// (t_I, s = k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictedDifferential {
    pub monomial: MonomialIndex,
    pub k: u32,
    /// bidegree of the source class in the chart
    pub source: (u32, i64),
    /// bidegree of the target class
    pub target: (u32, i64),
    pub length: u32,
}

/// The full predicted pattern in internal degrees ≤ max_t: one differential
/// for each monomial with |I| ≥ 2 and each 2 ≤ k ≤ |I|. Monomials with
/// |I| ≤ 1 (including the unit) support none.
pub fn bp_predicted_differentials(p: u32, max_t: i64) -> Vec<PredictedDifferential> {
    let mut out = Vec::new();
    for (deg, monos) in monomials_by_degree(p, max_t).iter().enumerate() {
        for m in monos {
            for k in 2..=(m.len() as u32) {
                out.push(PredictedDifferential {
                    monomial: m.clone(),
                    k,
                    source: (0, deg as i64),
                    target: (k, deg as i64 + i64::from(k) - 1),
                    length: k,
                });
            }
        }
    }
    out
}

/// Per-degree tallies of the formal E∞ computation.
#[derive(Debug, Clone)]
pub struct EinftyReport {
    pub p: u32,
    pub max_t: i64,
    /// (degree, filtration-0 survivor rank, Hurewicz-subring rank)
    pub survivor_ranks: Vec<(i64, u64, u64)>,
    /// positive-filtration classes hit, per (s, t)
    pub hits: BTreeMap<(u32, i64), usize>,
}

/// Runs a differential pattern formally against the closed-form chart:
/// every positive-filtration class must be hit exactly once, and the
/// surviving filtration-0 lattice must have the rank of the subring
/// generated by the p·t_i.
pub fn run_einfty(
    p: u32,
    max_t: i64,
    diffs: &[PredictedDifferential],
) -> Result<EinftyReport, BpAnalysisError> {
    let by_degree = monomials_by_degree(p, max_t);

    // tally hits per positive-filtration class (t_I, s)
    let mut tally: BTreeMap<(Vec<u32>, u32), usize> = BTreeMap::new();
    for (deg, monos) in by_degree.iter().enumerate() {
        for m in monos {
            for s in 2..=(m.len() as u32) {
                // class lives at (s, deg + s − 1); only count it if inside
                // the window
                if deg as i64 + i64::from(s) - 1 <= max_t {
                    tally.insert((m.0.clone(), s), 0);
                }
            }
        }
    }
    for d in diffs {
        if d.target.1 > max_t {
            continue;
        }
        let key = (d.monomial.0.clone(), d.k);
        match tally.get_mut(&key) {
            Some(c) => *c += 1,
            None => {
                return Err(BpAnalysisError::DoubleHit { index: d.monomial.0.clone(), s: d.k })
            }
        }
    }
    let mut hits = BTreeMap::new();
    for ((index, s), c) in &tally {
        let deg = MonomialIndex(index.clone()).degree(p);
        let cell = (*s, deg + i64::from(*s) - 1);
        match c {
            0 => return Err(BpAnalysisError::Orphan { index: index.clone(), s: *s }),
            1 => *hits.entry(cell).or_insert(0) += 1,
            _ => return Err(BpAnalysisError::DoubleHit { index: index.clone(), s: *s }),
        }
    }

    // surviving filtration-0 ranks: differentials only rescale lattice
    // generators, so the rank per degree equals the monomial count; the
    // Hurewicz subring Z[p·t_i] is enumerated independently per degree.
    let counts = bp_monomial_counts(p, max_t);
    let mut survivor_ranks = Vec::new();
    for t in 0..=max_t {
        let survivor = counts[t as usize];
        let subring = by_degree[t as usize].len() as u64;
        survivor_ranks.push((t, survivor, subring));
        if survivor != subring {
            return Err(BpAnalysisError::ParityViolation { s: 0, t });
        }
    }
    Ok(EinftyReport { p, max_t, survivor_ranks, hits })
}

/// The E∞ consistency check with the predicted pattern itself.
pub fn bp_einfty_check(p: u32, max_t: i64) -> Result<EinftyReport, BpAnalysisError> {
    run_einfty(p, max_t, &bp_predicted_differentials(p, max_t))
}

// ---------------------------------------------------------------------------
// Toda obstruction vanishing

/// One verified obstruction cell: the chart entry at (s, t) contributing to
/// the obstruction group for extending at stage n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TodaCell {
    pub n: u32,
    pub s: u32,
    pub t: i64,
    pub dim: usize,
}

#[derive(Debug, Clone)]
pub struct TodaReport {
    pub p: u32,
    pub max_n: u32,
    pub cells: Vec<TodaCell>,
}

/// The parity scan on an assembled BP chart together with the coefficient
/// parity input: positive-filtration entries may only sit on odd stems, and
/// the BP homology ranks must be concentrated in even degrees. Under those
/// two facts every obstruction cell (s, t) = (n + 2, n − k) with k an even
/// coefficient degree has even stem −k − 2, hence vanishes.
pub fn toda_scan(
    chart: &ExtChart,
    counts: &[u64],
    max_n: u32,
) -> Result<TodaReport, BpAnalysisError> {
    for (t, &c) in counts.iter().enumerate() {
        if c > 0 && t % 2 != 0 {
            return Err(BpAnalysisError::ParityViolation { s: 0, t: t as i64 });
        }
    }
    for (&(s, t), o) in &chart.entries {
        if s >= 1 && (t - i64::from(s)).rem_euclid(2) == 0 && !o.is_trivial() {
            return Err(BpAnalysisError::ParityViolation { s, t });
        }
    }
    let mut cells = Vec::new();
    for n in 0..=max_n {
        let s = n + 2;
        for k in (0..=i64::from(n)).step_by(2) {
            if counts.get(k as usize).copied().unwrap_or(0) == 0 {
                continue;
            }
            let t = i64::from(n) - k;
            let dim = chart.dim(s, t);
            if dim != 0 {
                return Err(BpAnalysisError::ParityViolation { s, t });
            }
            cells.push(TodaCell { n, s, t, dim });
        }
    }
    Ok(TodaReport { p: chart.p, max_n, cells })
}

/// Verifies the two computational inputs of the obstruction-vanishing
/// argument on the assembled BP chart and reports every checked cell for
/// n ≤ max_n.
pub fn toda_vanishing_check(p: u32, max_n: u32) -> Result<TodaReport, BpAnalysisError> {
    let max_t = i64::from(max_n) + 2;
    let chart = bp_pipeline(p, max_t)?.chart()?;
    let counts = bp_monomial_counts(p, max_t);
    toda_scan(&chart, &counts, max_n)
}
