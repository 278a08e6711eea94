//! Reduced cobar construction over the dual Steenrod algebra at p = 2:
//! an independent code path for Ext_A^{s,t}(F_2, F_2) in a small range.

use crate::linalg::gf2::Gf2Mat;
use crate::linalg::presented::Orders;
use crate::quiver::ext::ExtChart;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CobarError {
    #[error("cobar oracle limited to max_t ≤ {limit}, requested {requested}")]
    CostGuard { limit: i64, requested: i64 },
}

const COST_GUARD: i64 = 14;

/// A monomial in the dual Steenrod algebra F_2[ξ_1, ξ_2, …]: exponent of
/// ξ_{i+1} at position i, trailing zeros trimmed.
type XiMono = Vec<u32>;

/// |ξ_i| = 2ⁱ − 1.
fn xi_degree(m: &[u32]) -> i64 {
    m.iter()
        .enumerate()
        .map(|(i, &e)| i64::from(e) * ((1i64 << (i + 1)) - 1))
        .sum()
}

fn trim(mut m: XiMono) -> XiMono {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &[u32], b: &[u32]) -> XiMono {
    let mut out = vec![0u32; a.len().max(b.len())];
    for (i, &e) in a.iter().enumerate() {
        out[i] += e;
    }
    for (i, &e) in b.iter().enumerate() {
        out[i] += e;
    }
    trim(out)
}

/// F_2 polynomial in the tensor square A_* ⊗ A_*, monomial pairs mod 2,
/// truncated to total degree ≤ max_t.
type Tensor2 = BTreeSet<(XiMono, XiMono)>;

fn t2_mul(a: &Tensor2, b: &Tensor2, max_t: i64) -> Tensor2 {
    let mut out = Tensor2::new();
    for (l1, r1) in a {
        for (l2, r2) in b {
            let l = mono_mul(l1, l2);
            let r = mono_mul(r1, r2);
            if xi_degree(&l) + xi_degree(&r) > max_t {
                continue;
            }
            let key = (l, r);
            if !out.remove(&key) {
                out.insert(key);
            }
        }
    }
    out
}

/// ψ(ξ_k) = Σ_{i=0}^{k} ξ_{k−i}^{2^i} ⊗ ξ_i (with ξ_0 = 1).
fn coproduct_xi(k: usize, max_t: i64) -> Tensor2 {
    let mut out = Tensor2::new();
    for i in 0..=k {
        let left = if i == k {
            Vec::new()
        } else {
            let mut m = vec![0u32; k - i];
            m[k - i - 1] = 1 << i;
            m
        };
        let right = if i == 0 {
            Vec::new()
        } else {
            let mut m = vec![0u32; i];
            m[i - 1] = 1;
            m
        };
        if xi_degree(&left) + xi_degree(&right) <= max_t {
            out.insert((left, right));
        }
    }
    out
}

/// ψ on a monomial: the product of the generator coproducts.
fn coproduct(m: &[u32], max_t: i64, cache: &mut BTreeMap<XiMono, Tensor2>) -> Tensor2 {
    let key = trim(m.to_vec());
    if let Some(v) = cache.get(&key) {
        return v.clone();
    }
    let mut acc: Tensor2 = [(Vec::new(), Vec::new())].into_iter().collect();
    for (i, &e) in key.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let base = coproduct_xi(i + 1, max_t);
        // square-and-multiply over F_2
        let mut pow = e;
        let mut sq = base;
        while pow > 0 {
            if pow & 1 == 1 {
                acc = t2_mul(&acc, &sq, max_t);
            }
            pow >>= 1;
            if pow > 0 {
                sq = t2_mul(&sq, &sq, max_t);
            }
        }
    }
    cache.insert(key, acc.clone());
    acc
}

/// Reduced coproduct: ψ(m) minus the primitively-placed terms.
fn reduced_coproduct(m: &[u32], max_t: i64, cache: &mut BTreeMap<XiMono, Tensor2>) -> Tensor2 {
    let mut out = coproduct(m, max_t, cache);
    for key in [(Vec::new(), trim(m.to_vec())), (trim(m.to_vec()), Vec::new())] {
        if !out.remove(&key) {
            out.insert(key);
        }
    }
    out
}

/// All positive-degree ξ-monomials of a given degree, lexicographic.
fn xi_basis(degree: i64) -> Vec<XiMono> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    build(degree, 1, &mut cur, &mut out);
    out.sort();
    out
}

fn build(rest: i64, idx: usize, cur: &mut Vec<u32>, out: &mut Vec<XiMono>) {
    if rest == 0 {
        out.push(trim(cur.clone()));
        return;
    }
    let w = (1i64 << idx) - 1;
    if w > rest {
        return;
    }
    for e in 0..=(rest / w) {
        cur.resize(idx, 0);
        cur[idx - 1] = e as u32;
        build(rest - e * w, idx + 1, cur, out);
    }
    cur.truncate(idx - 1);
}

/// Basis of the cobar term C^s in internal degree t: s-tuples of
/// positive-degree monomials with degrees summing to t.
fn cobar_basis(s: usize, t: i64) -> Vec<Vec<XiMono>> {
    if s == 0 {
        return if t == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for d in 1..=(t - (s as i64 - 1)) {
        for m in xi_basis(d) {
            for rest in cobar_basis(s - 1, t - d) {
                let mut tuple = vec![m.clone()];
                tuple.extend(rest);
                out.push(tuple);
            }
        }
    }
    out
}

/// Matrix of the cobar differential C^s_t → C^{s+1}_t.
fn cobar_diff(
    s: usize,
    t: i64,
    src: &[Vec<XiMono>],
    tgt: &[Vec<XiMono>],
    cache: &mut BTreeMap<XiMono, Tensor2>,
) -> Gf2Mat {
    let index: BTreeMap<&Vec<XiMono>, usize> =
        tgt.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut m = Gf2Mat::zero(tgt.len(), src.len());
    for (c, tuple) in src.iter().enumerate() {
        for i in 0..s {
            for (l, r) in reduced_coproduct(&tuple[i], t, cache) {
                if l.is_empty() || r.is_empty() {
                    continue; // not in the reduced complex
                }
                let mut out = Vec::with_capacity(s + 1);
                out.extend_from_slice(&tuple[..i]);
                out.push(l);
                out.push(r);
                out.extend_from_slice(&tuple[i + 1..]);
                let row = index[&out];
                m.set(row, c, !m.get(row, c));
            }
        }
    }
    m
}

/// Ext_A^{s,t}(F_2, F_2) for t ≤ max_t via cohomology of the reduced cobar
/// complex of the dual Steenrod algebra — fully independent of the minimal
/// resolution path.
pub fn cobar_ext_oracle(max_t: i64) -> Result<ExtChart, CobarError> {
    if max_t > COST_GUARD {
        return Err(CobarError::CostGuard { limit: COST_GUARD, requested: max_t });
    }
    let max_s = max_t.max(0) as u32;
    let mut chart = ExtChart::new(2, max_s, 0, max_t);
    let mut cache = BTreeMap::new();
    for t in 0..=max_t {
        // bases for every s at this t (empty above s = t)
        let bases: Vec<Vec<Vec<XiMono>>> =
            (0..=(t as usize + 1)).map(|s| cobar_basis(s, t)).collect();
        let mut rank_out = vec![0usize; t as usize + 2];
        for s in 0..=(t as usize) {
            if !bases[s].is_empty() && !bases[s + 1].is_empty() {
                rank_out[s] =
                    cobar_diff(s, t, &bases[s], &bases[s + 1], &mut cache).rank();
            }
        }
        for s in 0..=(t as usize) {
            let dim = bases[s].len();
            if dim == 0 {
                continue;
            }
            let rank_in = if s == 0 { 0 } else { rank_out[s - 1] };
            let h = dim - rank_out[s] - rank_in;
            if h > 0 {
                chart.set(s as u32, t, Orders(vec![1; h]));
            }
        }
    }
    Ok(chart)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steenrod::resolution::minimal_resolution;

    #[test]
    fn coproduct_of_xi2_has_expected_terms() {
        let mut cache = BTreeMap::new();
        let psi = coproduct(&[0, 1], 10, &mut cache);
        // ψ(ξ_2) = ξ_2⊗1 + ξ_1²⊗ξ_1 + 1⊗ξ_2
        let expect: Tensor2 = [
            (vec![0, 1], vec![]),
            (vec![2], vec![1]),
            (vec![], vec![0, 1]),
        ]
        .into_iter()
        .collect();
        assert_eq!(psi, expect);
    }

    #[test]
    fn guard_rejects_large_windows() {
        assert!(matches!(cobar_ext_oracle(15), Err(CobarError::CostGuard { .. })));
    }

    #[test]
    fn spot_values() {
        let chart = cobar_ext_oracle(6).unwrap();
        assert_eq!(chart.dim(0, 0), 1);
        assert_eq!(chart.dim(1, 1), 1); // h_0
        assert_eq!(chart.dim(1, 2), 1); // h_1
        assert_eq!(chart.dim(1, 3), 0);
        assert_eq!(chart.dim(2, 4), 1); // h_1²
        assert_eq!(chart.dim(1, 4), 1); // h_2
        assert_eq!(chart.dim(2, 3), 0);
    }

    #[test]
    fn matches_minimal_resolution_through_t12() {
        let oracle = cobar_ext_oracle(12).unwrap();
        let res = minimal_resolution(12, 12);
        for s in 0..=12u32 {
            for t in 0..=12i64 {
                assert_eq!(
                    oracle.dim(s, t),
                    res.gen_count(s, t),
                    "mismatch at (s,t) = ({s},{t})"
                );
            }
        }
    }
}
