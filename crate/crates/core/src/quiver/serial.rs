//! JSON serialization for presets, representations, and Ext charts. The
//! formats round-trip exactly: rational entries are written as `num/den`
//! strings and all collections are emitted in a fixed order, so serializing
//! the same data twice yields byte-identical output.

use crate::linalg::graded::{GradedModule, Window};
use crate::linalg::presented::Orders;
use crate::linalg::qmat::QMat;
use crate::linalg::scalar::Prime;
use crate::quiver::ext::ExtChart;
use crate::quiver::preset::{ArrowExpr, PresetBuilder, Regime, SimplesPreset, TensorTable};
use crate::quiver::rep::Representation;
use num::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SerialError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad rational `{0}`")]
    BadRational(String),
    #[error("preset mismatch: data is for `{data}`, loaded preset is `{loaded}`")]
    PresetMismatch { data: String, loaded: String },
    #[error("malformed data: {0}")]
    Malformed(String),
}

fn q_to_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn q_from_string(s: &str) -> Result<BigRational, SerialError> {
    BigRational::from_str(s).map_err(|_| SerialError::BadRational(s.to_string()))
}

fn mat_to_rows(m: &QMat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| q_to_string(&m[(r, c)])).collect())
        .collect()
}

fn mat_from_rows(rows: &[Vec<String>], cols_hint: usize) -> Result<QMat, SerialError> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(cols_hint, Vec::len);
    let mut m = QMat::zero(nrows, ncols);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(SerialError::Malformed("ragged matrix rows".into()));
        }
        for (c, s) in row.iter().enumerate() {
            m[(r, c)] = q_from_string(s)?;
        }
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// presets

#[derive(Serialize, Deserialize)]
struct NodeJson {
    name: String,
    regime: Regime,
}

#[derive(Serialize, Deserialize)]
struct ArrowJson {
    label: String,
    src: usize,
    tgt: usize,
    degree: i64,
    order: u32,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    unit: usize,
    products: Vec<(usize, usize, Vec<(usize, i64)>)>,
    right: Vec<(usize, usize, Vec<Vec<Vec<(i64, usize)>>>)>,
    left: Vec<(usize, usize, Vec<Vec<Vec<(i64, usize)>>>)>,
}

#[derive(Serialize, Deserialize)]
struct PresetJson {
    id: String,
    p: u32,
    nodes: Vec<NodeJson>,
    /// non-identity arrows; identities are reconstructed
    homs: Vec<ArrowJson>,
    /// (left, right, expansion of left∘right)
    compositions: Vec<(usize, usize, Vec<(i64, usize)>)>,
    tensor: Option<TensorJson>,
}

fn expr_raw(e: &ArrowExpr) -> Vec<(i64, usize)> {
    e.0.clone()
}

fn tensor_to_json(t: &TensorTable) -> TensorJson {
    let consts = |m: &BTreeMap<(usize, usize), Vec<Vec<ArrowExpr>>>| {
        m.iter()
            .map(|(&(a, n), rows)| {
                (a, n, rows.iter().map(|r| r.iter().map(expr_raw).collect()).collect())
            })
            .collect()
    };
    TensorJson {
        unit: t.unit,
        products: t.products.iter().map(|(&(i, j), s)| (i, j, s.clone())).collect(),
        right: consts(&t.right),
        left: consts(&t.left),
    }
}

pub fn preset_to_json(p: &SimplesPreset) -> String {
    let n_ids = p.identities.len();
    let homs = p.arrows[..p.arrows.len() - n_ids]
        .iter()
        .map(|a| ArrowJson {
            label: a.label.clone(),
            src: a.src,
            tgt: a.tgt,
            degree: a.degree,
            order: a.order,
        })
        .collect();
    let doc = PresetJson {
        id: p.id.clone(),
        p: p.p.0,
        nodes: p
            .nodes
            .iter()
            .map(|n| NodeJson { name: n.name.clone(), regime: n.regime })
            .collect(),
        homs,
        compositions: p.composition_entries().map(|(l, r, e)| (l, r, expr_raw(e))).collect(),
        tensor: p.tensor.as_ref().map(tensor_to_json),
    };
    serde_json::to_string_pretty(&doc).expect("preset serializes")
}

pub fn preset_from_json(s: &str) -> Result<SimplesPreset, SerialError> {
    let doc: PresetJson = serde_json::from_str(s)?;
    let mut b = PresetBuilder::new(&doc.id, Prime(doc.p));
    for n in &doc.nodes {
        b.node(&n.name, n.regime);
    }
    for a in &doc.homs {
        b.arrow(&a.label, a.src, a.tgt, a.degree, a.order);
    }
    for (l, r, e) in &doc.compositions {
        b.compose(*l, *r, ArrowExpr(e.clone()));
    }
    if let Some(t) = &doc.tensor {
        let consts = |v: &Vec<(usize, usize, Vec<Vec<Vec<(i64, usize)>>>)>| {
            v.iter()
                .map(|(a, n, rows)| {
                    (
                        (*a, *n),
                        rows.iter()
                            .map(|r| r.iter().map(|e| ArrowExpr(e.clone())).collect())
                            .collect(),
                    )
                })
                .collect()
        };
        b.tensor_table(TensorTable {
            unit: t.unit,
            products: t.products.iter().map(|(i, j, s)| ((*i, *j), s.clone())).collect(),
            right: consts(&t.right),
            left: consts(&t.left),
        });
    }
    b.build().map_err(|e| SerialError::Malformed(e.to_string()))
}

// ---------------------------------------------------------------------------
// representations

#[derive(Serialize, Deserialize)]
struct RepJson {
    preset: String,
    window: (i64, i64),
    /// per node: [(degree, orders)]
    values: Vec<Vec<(i64, Vec<u32>)>>,
    /// per arrow: [(source degree, matrix rows)]
    arrows: Vec<Vec<(i64, Vec<Vec<String>>)>>,
}

pub fn rep_to_json(x: &Representation) -> String {
    let pre = &x.preset;
    let values: Vec<Vec<(i64, Vec<u32>)>> = x
        .values
        .iter()
        .map(|m| m.degrees().map(|(n, o)| (n, o.0.clone())).collect())
        .collect();
    let arrows = (0..pre.arrows.len())
        .map(|a| {
            let arr = &pre.arrows[a];
            let src = &x.values[arr.src];
            let tgt = &x.values[arr.tgt];
            let mut out = Vec::new();
            let mut degs: Vec<i64> = x.arrow_maps[a].block_degrees().collect();
            degs.sort_unstable();
            for n in degs {
                out.push((n, mat_to_rows(&x.arrow_maps[a].block(src, tgt, n))));
            }
            out
        })
        .collect();
    let doc = RepJson {
        preset: pre.id.clone(),
        window: (x.window.min, x.window.max),
        values,
        arrows,
    };
    serde_json::to_string_pretty(&doc).expect("representation serializes")
}

pub fn rep_from_json(
    s: &str,
    preset: &Arc<SimplesPreset>,
) -> Result<Representation, SerialError> {
    let doc: RepJson = serde_json::from_str(s)?;
    if doc.preset != preset.id {
        return Err(SerialError::PresetMismatch {
            data: doc.preset,
            loaded: preset.id.clone(),
        });
    }
    if doc.values.len() != preset.nodes.len() || doc.arrows.len() != preset.arrows.len() {
        return Err(SerialError::Malformed("node/arrow count mismatch".into()));
    }
    let mut x = Representation::zero(preset.clone());
    x.window = Window::new(doc.window.0, doc.window.1);
    for (v, per_degree) in doc.values.iter().enumerate() {
        let mut m = GradedModule::zero();
        for (n, o) in per_degree {
            m.set(*n, Orders(o.clone()));
        }
        x.values[v] = m;
    }
    for (a, blocks) in doc.arrows.iter().enumerate() {
        for (n, rows) in blocks {
            let cols = x.values[preset.arrows[a].src].at(*n).len();
            x.arrow_maps[a].set_block(*n, mat_from_rows(rows, cols)?);
        }
    }
    x.validate().map_err(|e| SerialError::Malformed(e.to_string()))?;
    Ok(x)
}

// ---------------------------------------------------------------------------
// charts

#[derive(Serialize, Deserialize)]
struct ChartJson {
    p: u32,
    max_s: u32,
    t_min: i64,
    t_max: i64,
    /// (s, t, orders, labels)
    entries: Vec<(u32, i64, Vec<u32>, Vec<String>)>,
}

pub fn chart_to_json(c: &ExtChart) -> String {
    let entries = c
        .entries
        .iter()
        .map(|(&(s, t), o)| {
            let labels = c.labels.get(&(s, t)).cloned().unwrap_or_default();
            (s, t, o.0.clone(), labels)
        })
        .collect();
    let doc = ChartJson {
        p: c.p,
        max_s: c.max_s,
        t_min: c.t_min,
        t_max: c.t_max,
        entries,
    };
    serde_json::to_string_pretty(&doc).expect("chart serializes")
}

pub fn chart_from_json(s: &str) -> Result<ExtChart, SerialError> {
    let doc: ChartJson = serde_json::from_str(s)?;
    let mut c = ExtChart::new(doc.p, doc.max_s, doc.t_min, doc.t_max);
    for (s_, t, o, labels) in doc.entries {
        c.set(s_, t, Orders(o));
        if !labels.is_empty() {
            c.labels.insert((s_, t), labels);
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::preset::integral_preset;
    use crate::quiver::rep::representable;

    #[test]
    fn preset_round_trip() {
        let pre = integral_preset(Prime(3));
        let s = preset_to_json(&pre);
        let back = preset_from_json(&s).unwrap();
        assert_eq!(back.id, pre.id);
        assert_eq!(back.p, pre.p);
        assert_eq!(back.nodes, pre.nodes);
        assert_eq!(back.arrows, pre.arrows);
        assert_eq!(back.relations, pre.relations);
        // byte-identical re-serialization
        assert_eq!(preset_to_json(&back), s);
    }

    #[test]
    fn rep_round_trip() {
        let pre = Arc::new(integral_preset(Prime(5)));
        let f = pre.node_index("F").unwrap();
        let (pf, _) = representable(&pre, f, 2);
        let s = rep_to_json(&pf);
        let back = rep_from_json(&s, &pre).unwrap();
        assert_eq!(rep_to_json(&back), s);
        assert_eq!(
            back.values.iter().map(|m| m.descriptor()).collect::<Vec<_>>(),
            pf.values.iter().map(|m| m.descriptor()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn rep_rejects_wrong_preset() {
        let p2 = Arc::new(integral_preset(Prime(2)));
        let p3 = Arc::new(integral_preset(Prime(3)));
        let (pz, _) = representable(&p2, 0, 0);
        let s = rep_to_json(&pz);
        assert!(matches!(
            rep_from_json(&s, &p3),
            Err(SerialError::PresetMismatch { .. })
        ));
    }

    #[test]
    fn chart_round_trip() {
        let mut c = ExtChart::new(2, 3, -1, 5);
        c.set(0, 0, Orders(vec![0]));
        c.set(2, 3, Orders(vec![2, 1]));
        c.labels.insert((2, 3), vec!["x".into(), "y".into()]);
        let s = chart_to_json(&c);
        let back = chart_from_json(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(chart_to_json(&back), s);
    }
}
