//! A "class of simples" preset: a finite node set with graded hom spaces
//! spanned by basis arrows, a total composition table, and relations
//! (composites declared zero). Constructed through a builder that checks
//! unitality, associativity, and degree additivity exhaustively.

use crate::linalg::scalar::Prime;
use std::collections::BTreeMap;
use thiserror::Error;

/// Coefficient regime of a node's values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Regime {
    /// p-local integral: graded Z_(p)-modules.
    Integral,
    /// mod p: graded F_p-vector spaces (everything killed by p).
    Fp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeInfo {
    pub name: String,
    pub regime: Regime,
}

/// A basis arrow of the hom table. `order` is the additive order of the arrow
/// in its hom group: 0 for a Z_(p)-coefficient arrow, 1 for a p-torsion one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    pub src: usize,
    pub tgt: usize,
    pub degree: i64,
    pub order: u32,
}

/// A formal Z-linear combination of basis arrows (all with common src/tgt
/// and degree when well-formed).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArrowExpr(pub Vec<(i64, usize)>);

impl ArrowExpr {
    pub fn zero() -> Self {
        ArrowExpr(Vec::new())
    }

    pub fn single(arrow: usize) -> Self {
        ArrowExpr(vec![(1, arrow)])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn normalized(&self, preset: &SimplesPreset) -> ArrowExpr {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for &(c, a) in &self.0 {
            *acc.entry(a).or_insert(0) += c;
        }
        let p = i64::from(preset.p.0);
        ArrowExpr(
            acc.into_iter()
                .filter_map(|(a, mut c)| {
                    if preset.arrows[a].order == 1 {
                        c = c.rem_euclid(p);
                    }
                    (c != 0).then_some((c, a))
                })
                .collect(),
        )
    }

    pub fn add(&self, other: &ArrowExpr, preset: &SimplesPreset) -> ArrowExpr {
        let mut v = self.0.clone();
        v.extend(other.0.iter().copied());
        ArrowExpr(v).normalized(preset)
    }

    pub fn scale(&self, c: i64, preset: &SimplesPreset) -> ArrowExpr {
        ArrowExpr(self.0.iter().map(|&(k, a)| (k * c, a)).collect()).normalized(preset)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresetError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("composition table missing entry for `{left}` after `{right}`")]
    MissingComposition { left: String, right: String },
    #[error("composition of `{left}` after `{right}` violates {what}")]
    BadComposition { left: String, right: String, what: String },
    #[error("associativity fails on ({a}, {b}, {c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("identity law fails for arrow `{0}`")]
    BadIdentity(String),
    #[error("arrow `{0}` is malformed: {1}")]
    BadArrow(String, String),
}

#[derive(Debug, Clone)]
pub struct SimplesPreset {
    pub id: String,
    pub p: Prime,
    pub nodes: Vec<NodeInfo>,
    pub arrows: Vec<Arrow>,
    /// identity arrow index per node
    pub identities: Vec<usize>,
    /// (left, right) -> left∘right for non-identity pairs
    composition: BTreeMap<(usize, usize), ArrowExpr>,
    /// composable pairs declared zero (subset of composition with empty value)
    pub relations: Vec<(usize, usize)>,
    pub tensor: Option<TensorTable>,
}

/// Tensor data on nodes for multiplicative presets: the decomposition of
/// each node pair into shifted nodes, the unit node, and the matrices of
/// arrows tensored with identities expressed in those decompositions.
///
/// For a basis arrow a: i → j, the induced map of representables goes
/// P(j ⊗ T) → P(i ⊗ T); its matrix `right[(a, T)]` has rows indexed by
/// products[(i, T)] and columns by products[(j, T)], the (r, c) entry being
/// a combination of arrows node_r → node_c (slot degree
/// deg a + shift_c − shift_r). `left[(a, T)]` is the same for id_T ⊗ a with
/// rows products[(T, i)] and columns products[(T, j)].
#[derive(Debug, Clone)]
pub struct TensorTable {
    pub unit: usize,
    /// (i, j) -> summands [(node, shift)]
    pub products: BTreeMap<(usize, usize), Vec<(usize, i64)>>,
    pub right: BTreeMap<(usize, usize), Vec<Vec<ArrowExpr>>>,
    pub left: BTreeMap<(usize, usize), Vec<Vec<ArrowExpr>>>,
}

impl SimplesPreset {
    pub fn node_index(&self, name: &str) -> Result<usize, PresetError> {
        self.nodes
            .iter()
            .position(|n| n.name == name)
            .ok_or_else(|| PresetError::UnknownNode(name.to_string()))
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    pub fn is_identity(&self, arrow: usize) -> bool {
        self.identities.contains(&arrow)
    }

    /// Arrows from `src` to `tgt`.
    pub fn arrows_between(&self, src: usize, tgt: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].src == src && self.arrows[a].tgt == tgt)
            .collect()
    }

    /// left ∘ right (right first). Panics on non-composable input.
    pub fn compose(&self, left: usize, right: usize) -> ArrowExpr {
        let l = &self.arrows[left];
        let r = &self.arrows[right];
        assert_eq!(r.tgt, l.src, "non-composable arrows {} after {}", l.label, r.label);
        if self.is_identity(left) {
            return ArrowExpr::single(right);
        }
        if self.is_identity(right) {
            return ArrowExpr::single(left);
        }
        self.composition
            .get(&(left, right))
            .cloned()
            .unwrap_or_else(|| panic!("missing composition {} after {}", l.label, r.label))
            .normalized(self)
    }

    pub fn compose_expr(&self, left: &ArrowExpr, right: &ArrowExpr) -> ArrowExpr {
        let mut acc = ArrowExpr::zero();
        for &(cl, al) in &left.0 {
            for &(cr, ar) in &right.0 {
                let t = self.compose(al, ar).scale(cl * cr, self);
                acc = acc.add(&t, self);
            }
        }
        acc
    }

    /// All stored composition entries (left, right, left∘right) in key order.
    pub fn composition_entries(&self) -> impl Iterator<Item = (usize, usize, &ArrowExpr)> {
        self.composition.iter().map(|(&(l, r), e)| (l, r, e))
    }

    /// Largest |degree| over all arrows: the per-step window loss of
    /// resolutions over this preset.
    pub fn max_arrow_degree(&self) -> i64 {
        self.arrows.iter().map(|a| a.degree.abs()).max().unwrap_or(0)
    }

    fn validate(&self) -> Result<(), PresetError> {
        for a in &self.arrows {
            if a.src >= self.nodes.len() || a.tgt >= self.nodes.len() {
                return Err(PresetError::BadArrow(a.label.clone(), "node out of range".into()));
            }
            // arrows into an F_p-regime node must be p-torsion
            if self.nodes[a.tgt].regime == Regime::Fp && a.order != 1 {
                return Err(PresetError::BadArrow(
                    a.label.clone(),
                    "arrow into an F_p node must have order 1".into(),
                ));
            }
        }
        for (i, &id) in self.identities.iter().enumerate() {
            let a = &self.arrows[id];
            if a.src != i || a.tgt != i || a.degree != 0 {
                return Err(PresetError::BadIdentity(a.label.clone()));
            }
        }
        // totality, degree additivity, source/target and order coherence
        for l in 0..self.arrows.len() {
            for r in 0..self.arrows.len() {
                if self.arrows[r].tgt != self.arrows[l].src {
                    continue;
                }
                if !self.is_identity(l)
                    && !self.is_identity(r)
                    && !self.composition.contains_key(&(l, r))
                {
                    return Err(PresetError::MissingComposition {
                        left: self.arrows[l].label.clone(),
                        right: self.arrows[r].label.clone(),
                    });
                }
                let e = self.compose(l, r);
                for &(c, a) in &e.0 {
                    let res = &self.arrows[a];
                    let bad = |what: &str| PresetError::BadComposition {
                        left: self.arrows[l].label.clone(),
                        right: self.arrows[r].label.clone(),
                        what: what.to_string(),
                    };
                    if res.src != self.arrows[r].src || res.tgt != self.arrows[l].tgt {
                        return Err(bad("source/target"));
                    }
                    if res.degree != self.arrows[l].degree + self.arrows[r].degree {
                        return Err(bad("degree additivity"));
                    }
                    let torsion_factor =
                        self.arrows[l].order == 1 || self.arrows[r].order == 1;
                    if torsion_factor && res.order == 0 && c != 0 {
                        return Err(bad("order: torsion composite with integral term"));
                    }
                }
            }
        }
        // associativity
        for a in 0..self.arrows.len() {
            for b in 0..self.arrows.len() {
                if self.arrows[b].tgt != self.arrows[a].src {
                    continue;
                }
                for c in 0..self.arrows.len() {
                    if self.arrows[c].tgt != self.arrows[b].src {
                        continue;
                    }
                    let ab_c = self.compose_expr(&self.compose(a, b), &ArrowExpr::single(c));
                    let a_bc = self.compose_expr(&ArrowExpr::single(a), &self.compose(b, c));
                    if ab_c != a_bc {
                        return Err(PresetError::NotAssociative {
                            a: self.arrows[a].label.clone(),
                            b: self.arrows[b].label.clone(),
                            c: self.arrows[c].label.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builder for presets; identities are added automatically.
pub struct PresetBuilder {
    id: String,
    p: Prime,
    nodes: Vec<NodeInfo>,
    arrows: Vec<Arrow>,
    composition: BTreeMap<(usize, usize), ArrowExpr>,
    tensor: Option<TensorTable>,
}

impl PresetBuilder {
    pub fn new(id: &str, p: Prime) -> Self {
        PresetBuilder {
            id: id.to_string(),
            p,
            nodes: Vec::new(),
            arrows: Vec::new(),
            composition: BTreeMap::new(),
            tensor: None,
        }
    }

    pub fn node(&mut self, name: &str, regime: Regime) -> usize {
        self.nodes.push(NodeInfo { name: name.to_string(), regime });
        self.nodes.len() - 1
    }

    pub fn arrow(&mut self, label: &str, src: usize, tgt: usize, degree: i64, order: u32) -> usize {
        self.arrows.push(Arrow { label: label.to_string(), src, tgt, degree, order });
        self.arrows.len() - 1
    }

    pub fn compose(&mut self, left: usize, right: usize, result: ArrowExpr) {
        self.composition.insert((left, right), result);
    }

    pub fn tensor_table(&mut self, t: TensorTable) {
        self.tensor = Some(t);
    }

    pub fn build(mut self) -> Result<SimplesPreset, PresetError> {
        // append identities
        let mut identities = Vec::new();
        for i in 0..self.nodes.len() {
            let order = match self.nodes[i].regime {
                Regime::Integral => 0,
                Regime::Fp => 1,
            };
            let label = format!("id_{}", self.nodes[i].name);
            self.arrows.push(Arrow { label, src: i, tgt: i, degree: 0, order });
            identities.push(self.arrows.len() - 1);
        }
        let relations = self
            .composition
            .iter()
            .filter(|(_, e)| e.is_zero())
            .map(|(&k, _)| k)
            .collect();
        let preset = SimplesPreset {
            id: self.id,
            p: self.p,
            nodes: self.nodes,
            arrows: self.arrows,
            identities,
            composition: self.composition,
            relations,
            tensor: self.tensor,
        };
        preset.validate()?;
        Ok(preset)
    }
}

/// The integral Bockstein preset at p: nodes Z (p-local integral) and F
/// (mod p), arrows π: Z→F (degree 0), δ: F→Z (degree −1), β = π∘δ: F→F
/// (degree −1), relation δ∘π = 0.
pub fn integral_preset(p: Prime) -> SimplesPreset {
    let mut b = PresetBuilder::new(&format!("integral-{}", p.0), p);
    let z = b.node("Z", Regime::Integral);
    let f = b.node("F", Regime::Fp);
    let pi = b.arrow("pi", z, f, 0, 1);
    let delta = b.arrow("delta", f, z, -1, 1);
    let beta = b.arrow("beta", f, f, -1, 1);
    b.compose(pi, delta, ArrowExpr::single(beta));
    b.compose(delta, pi, ArrowExpr::zero());
    b.compose(beta, pi, ArrowExpr::zero());
    b.compose(delta, beta, ArrowExpr::zero());
    b.compose(beta, beta, ArrowExpr::zero());
    // tensor on nodes: Z is the unit; F⊗F decomposes as F[-1] ⊕ F[0]
    let mut products = BTreeMap::new();
    products.insert((z, z), vec![(z, 0)]);
    products.insert((z, f), vec![(f, 0)]);
    products.insert((f, z), vec![(f, 0)]);
    products.insert((f, f), vec![(f, -1), (f, 0)]);
    b.tensor_table(TensorTable {
        unit: z,
        products,
        right: BTreeMap::new(),
        left: BTreeMap::new(),
    });
    let mut preset = b.build().expect("integral preset is internally consistent");
    // Arrows tensored with id_F, written against the decomposition above.
    // The signs are pinned by the relation δ∘π = 0: with
    // π⊗id = [β, id] the only consistent choice is δ⊗id = [-id; β], and
    // β⊗id = (δ⊗id)·(π⊗id) follows.
    let id_f = preset.identities[f];
    let e = |c: i64, a: usize| ArrowExpr(vec![(c, a)]);
    let mut right = BTreeMap::new();
    right.insert((pi, f), vec![vec![e(1, beta), e(1, id_f)]]);
    right.insert((delta, f), vec![vec![e(-1, id_f)], vec![e(1, beta)]]);
    right.insert(
        (beta, f),
        vec![vec![e(-1, beta), e(-1, id_f)], vec![ArrowExpr::zero(), e(1, beta)]],
    );
    let table = preset.tensor.as_mut().expect("tensor table present");
    table.left = right.clone();
    table.right = right;
    preset
}
