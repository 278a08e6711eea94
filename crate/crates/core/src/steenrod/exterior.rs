//! Closed-form Ext over exterior algebras on odd-degree generators with
//! trivial coefficients (Koszul duality: the answer is a polynomial algebra),
//! plus a brute-force minimal-resolution oracle over the finite exterior
//! algebra itself.

use crate::linalg::fp::FpMat;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("trivial-coaction shortcut not justified: {0}")]
    EvennessViolated(String),
}

/// A graded F_p-vector space recorded by dimension per degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedFpSpace {
    pub dims: BTreeMap<i64, usize>,
}

impl GradedFpSpace {
    /// One dimension in degree 0.
    pub fn unit() -> Self {
        Self::from_pairs([(0, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let mut dims = BTreeMap::new();
        for (t, d) in pairs {
            if d > 0 {
                *dims.entry(t).or_insert(0) += d;
            }
        }
        GradedFpSpace { dims }
    }

    pub fn dim(&self, t: i64) -> usize {
        self.dims.get(&t).copied().unwrap_or(0)
    }
}

/// A named polynomial generator with bidegree (s, t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyGen {
    pub name: String,
    pub s: u32,
    pub t: i64,
}

/// A bigraded chart of the form F_p[x_1, x_2, …] ⊗ C for a graded
/// coefficient space C in filtration 0; dimensions are monomial counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyExtChart {
    pub p: u32,
    pub generators: Vec<PolyGen>,
    pub coefficients: GradedFpSpace,
}

impl PolyExtChart {
    pub fn polynomial(p: u32, generators: Vec<PolyGen>) -> Self {
        let chart = PolyExtChart { p, generators, coefficients: GradedFpSpace::unit() };
        for g in &chart.generators {
            assert!(
                g.s > 0 || g.t > 0,
                "generator {} must have positive total bidegree",
                g.name
            );
        }
        chart
    }

    /// Exponent vectors of monomials of exact bidegree (s, t), ordered by
    /// ascending exponent of the first generator, then the second, and so on.
    pub fn monomials(&self, s: u32, t: i64) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.generators.len()];
        self.enumerate(0, s, t, &mut cur, &mut out);
        out
    }

    fn enumerate(&self, i: usize, s: u32, t: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == self.generators.len() {
            if s == 0 && t == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let g = &self.generators[i];
        assert!(g.s > 0 || g.t > 0, "generator {} has no positive bidegree", g.name);
        let mut e = 0u32;
        loop {
            let (es, et) = (e * g.s, i64::from(e) * g.t);
            if es > s || et > t {
                break;
            }
            cur[i] = e;
            self.enumerate(i + 1, s - es, t - et, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }

    /// Number of monomials of the polynomial part at exact bidegree (s, t).
    pub fn monomial_count(&self, s: u32, t: i64) -> usize {
        self.monomials(s, t).len()
    }

    /// Total dimension at (s, t): polynomial monomials convolved with the
    /// coefficient dimensions.
    pub fn dim(&self, s: u32, t: i64) -> usize {
        self.coefficients
            .dims
            .iter()
            .map(|(&u, &d)| d * self.monomial_count(s, t - u))
            .sum()
    }
}

/// Ext over the exterior F_p-algebra on generators of the given (odd)
/// degrees, with coefficients carrying the trivial coaction: the Koszul
/// closed form F_p[x_1, …] ⊗ coefficients with x_i of bidegree
/// (1, generator_degree_i).
///
/// The trivial-coaction shortcut is justified when the coefficients are
/// concentrated in even degrees against odd-degree generators; both parities
/// are checked. The empty generator list is exempt (the algebra is F_p and
/// every coefficient module is trivially a comodule).
pub fn ext_exterior(
    p: u32,
    generator_degrees: &[i64],
    coefficients: &GradedFpSpace,
) -> Result<PolyExtChart, ExteriorError> {
    if !generator_degrees.is_empty() {
        if let Some(&d) = generator_degrees.iter().find(|&&d| d <= 0 || d % 2 == 0) {
            return Err(ExteriorError::EvennessViolated(format!(
                "exterior generator degree {d} is not positive odd"
            )));
        }
        if let Some((&t, _)) = coefficients.dims.iter().find(|(&t, _)| t % 2 != 0) {
            return Err(ExteriorError::EvennessViolated(format!(
                "coefficient degree {t} is odd"
            )));
        }
    }
    let generators = generator_degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| PolyGen { name: format!("x{}", i + 1), s: 1, t: d })
        .collect();
    Ok(PolyExtChart { p, generators, coefficients: coefficients.clone() })
}

// ---------------------------------------------------------------------------
// Brute-force oracle: a minimal free resolution of F_p over the exterior
// algebra itself, built degreewise by linear algebra over F_p.

/// An element of the exterior algebra Λ(e_1, …, e_k): subset bitmask → F_p
/// coefficient, with e_S the product of generators in increasing index order.
type ExtElem = BTreeMap<u32, u32>;

/// Λ-degree of a subset monomial.
fn mask_degree(mask: u32, degrees: &[i64]) -> i64 {
    degrees
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &d)| d)
        .sum()
}

/// Koszul sign and product e_A · e_B; None when the supports overlap.
fn mask_mul(a: u32, b: u32) -> Option<(u32, i32)> {
    if a & b != 0 {
        return None;
    }
    // inversions: pairs (i in A, j in B) with i > j
    let mut inversions = 0u32;
    let mut i = a;
    while i != 0 {
        let bit = i.trailing_zeros();
        inversions += (b & ((1 << bit) - 1)).count_ones();
        i &= i - 1;
    }
    Some((a | b, if inversions % 2 == 0 { 1 } else { -1 }))
}

fn elem_add_scaled(acc: &mut ExtElem, other: &ExtElem, scale: u32, p: u32) {
    for (&m, &c) in other {
        let e = acc.entry(m).or_insert(0);
        *e = (*e + c * scale) % p;
        if *e == 0 {
            acc.remove(&m);
        }
    }
}

/// Left multiplication e_mask · x in Λ.
fn mono_times(mask: u32, x: &ExtElem, p: u32) -> ExtElem {
    let mut out = ExtElem::new();
    for (&m, &c) in x {
        if let Some((prod, sign)) = mask_mul(mask, m) {
            let coeff = if sign == 1 { c } else { (p - c) % p };
            let e = out.entry(prod).or_insert(0);
            *e = (*e + coeff) % p;
            if *e == 0 {
                out.remove(&prod);
            }
        }
    }
    out
}

/// A minimal free resolution of F_p over Λ(e_1, …, e_k) computed through
/// internal degree max_t and filtration max_s; generator counts equal
/// dim Ext_Λ^{s,t}(F_p, F_p).
pub struct ExteriorResolution {
    pub p: u32,
    pub degrees: Vec<i64>,
    pub gens: Vec<Vec<i64>>,
    /// diffs[s][g]: pairs (stage-(s−1) generator, Λ element)
    pub diffs: Vec<Vec<Vec<(usize, ExtElem)>>>,
}

impl ExteriorResolution {
    fn free_basis(&self, gens: &[i64], t: i64) -> Vec<(usize, u32)> {
        let k = self.degrees.len();
        let mut out = Vec::new();
        for (g, &tg) in gens.iter().enumerate() {
            for mask in 0..(1u32 << k) {
                if tg + mask_degree(mask, &self.degrees) == t {
                    out.push((g, mask));
                }
            }
        }
        out
    }

    fn diff_column(&self, s: usize, g: usize, mask: u32, tgt: &[(usize, u32)]) -> Vec<u32> {
        let mut col = vec![0u32; tgt.len()];
        for (h, e) in &self.diffs[s][g] {
            let prod = mono_times(mask, e, self.p);
            for (&m, &c) in &prod {
                let idx = tgt
                    .iter()
                    .position(|&(hh, mm)| hh == *h && mm == m)
                    .expect("product stays in the degree-t basis");
                col[idx] = (col[idx] + c) % self.p;
            }
        }
        col
    }

    fn diff_matrix(&self, s: usize, t: i64) -> FpMat {
        let src = self.free_basis(&self.gens[s], t);
        let tgt = self.free_basis(&self.gens[s - 1], t);
        let mut m = FpMat::zero(self.p, tgt.len(), src.len());
        for (c, &(g, mask)) in src.iter().enumerate() {
            for (r, v) in self.diff_column(s, g, mask, &tgt).into_iter().enumerate() {
                m[(r, c)] = v;
            }
        }
        m
    }

    pub fn gen_count(&self, s: u32, t: i64) -> usize {
        self.gens
            .get(s as usize)
            .map_or(0, |v| v.iter().filter(|&&tg| tg == t).count())
    }

    /// d∘d = 0, checked symbolically in Λ.
    pub fn check_d_squared(&self) -> bool {
        for s in 2..self.diffs.len() {
            for entries in &self.diffs[s] {
                let mut acc: Vec<ExtElem> = vec![ExtElem::new(); self.gens[s - 2].len()];
                for (h, e) in entries {
                    for (k, f) in &self.diffs[s - 1][*h] {
                        // e·f expanded monomial by monomial
                        for (&m, &c) in e {
                            elem_add_scaled(&mut acc[*k], &mono_times(m, f, self.p), c, self.p);
                        }
                    }
                }
                if acc.iter().any(|v| !v.is_empty()) {
                    return false;
                }
            }
        }
        true
    }
}

/// Builds the resolution degree by degree, exactly parallel to the Steenrod
/// case: at each bidegree the kernel of the previous differential not covered
/// by existing generators yields new generators.
pub fn exterior_resolution(p: u32, degrees: &[i64], max_s: u32, max_t: i64) -> ExteriorResolution {
    assert!(degrees.iter().all(|&d| d > 0), "generator degrees must be positive");
    let mut res = ExteriorResolution {
        p,
        degrees: degrees.to_vec(),
        gens: vec![Vec::new(); max_s as usize + 1],
        diffs: vec![Vec::new(); max_s as usize + 1],
    };
    res.gens[0].push(0);
    res.diffs[0].push(Vec::new());

    for t in 0..=max_t {
        for s in 1..=max_s as usize {
            let tgt_basis = res.free_basis(&res.gens[s - 1], t);
            if tgt_basis.is_empty() {
                continue;
            }
            let kernel: Vec<Vec<u32>> = if s == 1 {
                if t == 0 {
                    Vec::new()
                } else {
                    (0..tgt_basis.len())
                        .map(|i| (0..tgt_basis.len()).map(|j| u32::from(j == i)).collect())
                        .collect()
                }
            } else {
                let k = res.diff_matrix(s - 1, t).kernel_basis();
                (0..k.cols())
                    .map(|c| (0..k.rows()).map(|r| k[(r, c)]).collect())
                    .collect()
            };
            if kernel.is_empty() {
                continue;
            }
            // image span of the stage-s generators created so far
            let src_basis = res.free_basis(&res.gens[s], t);
            let mut span: Vec<Vec<u32>> = Vec::new();
            for &(g, mask) in &src_basis {
                let col = res.diff_column(s, g, mask, &tgt_basis);
                if let Some(red) = reduce(&span, col, p) {
                    insert(&mut span, red, p);
                }
            }
            for v in kernel {
                let Some(red) = reduce(&span, v, p) else { continue };
                let mut entries: Vec<(usize, ExtElem)> = Vec::new();
                for (i, &c) in red.iter().enumerate() {
                    if c != 0 {
                        let (h, m) = tgt_basis[i];
                        let slot = match entries.iter_mut().find(|(hh, _)| *hh == h) {
                            Some((_, e)) => e,
                            None => {
                                entries.push((h, ExtElem::new()));
                                &mut entries.last_mut().unwrap().1
                            }
                        };
                        *slot.entry(m).or_insert(0) = c;
                    }
                }
                res.gens[s].push(t);
                res.diffs[s].push(entries);
                insert(&mut span, red, p);
            }
        }
    }
    res
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r: u64 = 1;
    let mut b = u64::from(a % p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % u64::from(p);
        }
        b = b * b % u64::from(p);
        e >>= 1;
    }
    r as u32
}

/// Reduces v against a span kept in reduced echelon form (distinct leads,
/// each row zero at every other row's lead); Some(residue) if nonzero.
fn reduce(span: &[Vec<u32>], mut v: Vec<u32>, p: u32) -> Option<Vec<u32>> {
    for w in span {
        let lead = w.iter().position(|&c| c != 0).expect("span rows nonzero");
        let f = v[lead];
        if f != 0 {
            for (a, &b) in v.iter_mut().zip(w) {
                *a = (*a + (p - f) % p * b) % p;
            }
        }
    }
    v.iter().any(|&c| c != 0).then_some(v)
}

/// Normalizes the leading coefficient to 1, back-eliminates the new lead
/// from the existing rows, and inserts (keeps the span in reduced form).
fn insert(span: &mut Vec<Vec<u32>>, mut v: Vec<u32>, p: u32) {
    let lead = v.iter().position(|&c| c != 0).expect("nonzero vector");
    let inv = inv_mod(v[lead], p);
    for a in v.iter_mut() {
        *a = *a * inv % p;
    }
    for w in span.iter_mut() {
        let f = w[lead];
        if f != 0 {
            for (a, &b) in w.iter_mut().zip(&v) {
                *a = (*a + (p - f) % p * b) % p;
            }
        }
    }
    span.push(v);
    span.sort_by_key(|w| w.iter().position(|&c| c != 0));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_degree_one_generator_gives_polynomial_tower() {
        // Λ on one degree-1 class: Ext = F_p[h_0], |h_0| = (1,1),
        // so dimension 1 exactly along t = s.
        for p in [2u32, 3, 5] {
            let chart = ext_exterior(p, &[1], &GradedFpSpace::unit()).unwrap();
            for s in 0..=40u32 {
                for t in 0..=40i64 {
                    let expect = usize::from(i64::from(s) == t);
                    assert_eq!(chart.dim(s, t), expect, "p={p} ({s},{t})");
                }
            }
        }
    }

    #[test]
    fn empty_generator_list_returns_coefficients_in_s0() {
        let coeffs = GradedFpSpace::from_pairs([(0, 1), (3, 2), (5, 1)]);
        let chart = ext_exterior(3, &[], &coeffs).unwrap();
        for t in 0..=6i64 {
            assert_eq!(chart.dim(0, t), coeffs.dim(t));
            assert_eq!(chart.dim(1, t), 0);
        }
    }

    #[test]
    fn parity_violations_are_rejected() {
        assert!(matches!(
            ext_exterior(2, &[2], &GradedFpSpace::unit()),
            Err(ExteriorError::EvennessViolated(_))
        ));
        let odd_coeffs = GradedFpSpace::from_pairs([(0, 1), (3, 1)]);
        assert!(matches!(
            ext_exterior(2, &[1], &odd_coeffs),
            Err(ExteriorError::EvennessViolated(_))
        ));
    }

    #[test]
    fn even_coefficients_reproduce_the_two_variable_polynomial_chart() {
        // coefficients F_2[u_1, u_2] with |u_1| = 2, |u_2| = 6 truncated at
        // t ≤ 6, against one degree-1 exterior class: the result counts
        // monomials in F_2[x, u_1, u_2] with x of bidegree (1,1).
        let coeffs = GradedFpSpace::from_pairs([(0, 1), (2, 1), (4, 1), (6, 2)]);
        let chart = ext_exterior(2, &[1], &coeffs).unwrap();
        let full = PolyExtChart::polynomial(
            2,
            vec![
                PolyGen { name: "x".into(), s: 1, t: 1 },
                PolyGen { name: "u1".into(), s: 0, t: 2 },
                PolyGen { name: "u2".into(), s: 0, t: 6 },
            ],
        );
        for s in 0..=6u32 {
            for t in 0..=6i64 {
                assert_eq!(chart.dim(s, t), full.dim(s, t), "({s},{t})");
            }
        }
    }

    #[test]
    fn monomial_enumeration_is_deterministic_and_counts() {
        let chart = PolyExtChart::polynomial(
            2,
            vec![
                PolyGen { name: "a".into(), s: 1, t: 1 },
                PolyGen { name: "b".into(), s: 0, t: 2 },
            ],
        );
        assert_eq!(chart.monomials(2, 4), vec![vec![2, 1]]);
        assert_eq!(chart.monomials(1, 5), vec![vec![1, 2]]);
        assert_eq!(chart.monomials(0, 3), Vec::<Vec<u32>>::new());
    }

    #[test]
    fn exterior_products_anticommute() {
        // e_1·e_2 = −e_2·e_1; e_i² = 0
        assert_eq!(mask_mul(0b01, 0b10), Some((0b11, 1)));
        assert_eq!(mask_mul(0b10, 0b01), Some((0b11, -1)));
        assert_eq!(mask_mul(0b01, 0b01), None);
        // (e1 e3)·e2: e3 past e2 is one inversion
        assert_eq!(mask_mul(0b101, 0b010), Some((0b111, -1)));
    }

    #[test]
    fn brute_force_resolution_matches_koszul_closed_form() {
        for p in [2u32, 3, 5] {
            for degs in [vec![1i64], vec![1, 3], vec![3, 5]] {
                let chart = ext_exterior(p, &degs, &GradedFpSpace::unit()).unwrap();
                let res = exterior_resolution(p, &degs, 12, 12);
                assert!(res.check_d_squared(), "d² p={p} {degs:?}");
                for s in 0..=12u32 {
                    for t in 0..=12i64 {
                        assert_eq!(
                            res.gen_count(s, t),
                            chart.dim(s, t),
                            "p={p} degs={degs:?} ({s},{t})"
                        );
                    }
                }
            }
        }
    }
}
