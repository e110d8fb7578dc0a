//! JSON documents for the library's objects.
//!
//! Parsers work on [`serde_json::Value`] trees and report failures with
//! a JSON pointer to the offending node, so a front end can surface
//! schema violations precisely. Writers emit deterministic trees:
//! object keys are inserted in a fixed order and lists follow the
//! canonical orders of the underlying objects.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{AlgebraContext, MatrixModel, Section};
use crate::cmatrix::CMatrix;
use crate::cocycle::{fm_to_groupoid, Cocycle2, FMCocycle};
use crate::groupoid::{pair_groupoid, transformation_groupoid, FiniteGroupoid, GroupTable};
use crate::symbolic::Graph;
use crate::weyl::CartanPairModel;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("at {path}: {message}")]
pub struct IoError {
    pub path: String,
    pub message: String,
}

fn err<T>(path: &str, message: impl Into<String>) -> Result<T, IoError> {
    Err(IoError { path: path.to_string(), message: message.into() })
}

fn obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, IoError> {
    v.as_object().map_or_else(|| err(path, "expected an object"), Ok)
}

fn arr<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().map_or_else(|| err(path, "expected an array"), Ok)
}

fn str_of<'a>(v: &'a Value, path: &str) -> Result<&'a str, IoError> {
    v.as_str().map_or_else(|| err(path, "expected a string"), Ok)
}

fn usize_of(v: &Value, path: &str) -> Result<usize, IoError> {
    v.as_u64().map_or_else(|| err(path, "expected a nonnegative integer"), |n| Ok(n as usize))
}

fn field<'a>(m: &'a Map<String, Value>, name: &str, path: &str) -> Result<&'a Value, IoError> {
    m.get(name).map_or_else(|| err(path, format!("missing field \"{name}\"")), Ok)
}

fn string_list(v: &Value, path: &str) -> Result<Vec<String>, IoError> {
    arr(v, path)?
        .iter()
        .enumerate()
        .map(|(i, s)| str_of(s, &format!("{path}/{i}")).map(str::to_string))
        .collect()
}

/// A complex number as the two-element array [re, im].
pub fn complex_of(v: &Value, path: &str) -> Result<Complex64, IoError> {
    let a = arr(v, path)?;
    if a.len() != 2 {
        return err(path, "expected [re, im]");
    }
    let re = a[0].as_f64().ok_or(IoError { path: format!("{path}/0"), message: "expected a number".into() })?;
    let im = a[1].as_f64().ok_or(IoError { path: format!("{path}/1"), message: "expected a number".into() })?;
    Ok(Complex64::new(re, im))
}

pub fn complex_to_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Reads a groupoid document: either the full form with units, arrows,
/// product and inverse tables, or a shorthand {"type": "pair" |
/// "transformation", ...}.
pub fn parse_groupoid(v: &Value, path: &str) -> Result<FiniteGroupoid, IoError> {
    let m = obj(v, path)?;
    if let Some(t) = m.get("type") {
        return match str_of(t, &format!("{path}/type"))? {
            "pair" => {
                let points = string_list(field(m, "points", path)?, &format!("{path}/points"))?;
                pair_groupoid(&points).map_err(|e| IoError {
                    path: format!("{path}/points"),
                    message: e.to_string(),
                })
            }
            "transformation" => parse_transformation(m, path),
            other => err(&format!("{path}/type"), format!("unknown shorthand \"{other}\"")),
        };
    }
    let units = string_list(field(m, "units", path)?, &format!("{path}/units"))?;
    let arrows_v = arr(field(m, "arrows", path)?, &format!("{path}/arrows"))?;
    let mut arrows = Vec::with_capacity(arrows_v.len());
    for (i, av) in arrows_v.iter().enumerate() {
        let ap = format!("{path}/arrows/{i}");
        let am = obj(av, &ap)?;
        let id = str_of(field(am, "id", &ap)?, &format!("{ap}/id"))?;
        let src = str_of(field(am, "src", &ap)?, &format!("{ap}/src"))?;
        let dst = str_of(field(am, "dst", &ap)?, &format!("{ap}/dst"))?;
        for (name, val) in [("src", src), ("dst", dst)] {
            if !units.contains(&val.to_string()) {
                return err(&format!("{ap}/{name}"), format!("unknown unit \"{val}\""));
            }
        }
        arrows.push((id.to_string(), src.to_string(), dst.to_string()));
    }
    let ids: Vec<&str> = arrows.iter().map(|(id, _, _)| id.as_str()).collect();
    let mut product = Vec::new();
    for (i, pv) in arr(field(m, "product", path)?, &format!("{path}/product"))?.iter().enumerate() {
        let pp = format!("{path}/product/{i}");
        let triple = arr(pv, &pp)?;
        if triple.len() != 3 {
            return err(&pp, "expected [a, b, ab]");
        }
        let mut names = Vec::new();
        for (j, t) in triple.iter().enumerate() {
            let tp = format!("{pp}/{j}");
            let name = str_of(t, &tp)?;
            if !ids.contains(&name) {
                return err(&tp, format!("unknown arrow \"{name}\""));
            }
            names.push(name.to_string());
        }
        product.push((names[0].clone(), names[1].clone(), names[2].clone()));
    }
    let mut inverse = Vec::new();
    for (i, pv) in arr(field(m, "inverse", path)?, &format!("{path}/inverse"))?.iter().enumerate() {
        let pp = format!("{path}/inverse/{i}");
        let pair = arr(pv, &pp)?;
        if pair.len() != 2 {
            return err(&pp, "expected [a, a_inverse]");
        }
        let mut names = Vec::new();
        for (j, t) in pair.iter().enumerate() {
            let tp = format!("{pp}/{j}");
            let name = str_of(t, &tp)?;
            if !ids.contains(&name) {
                return err(&tp, format!("unknown arrow \"{name}\""));
            }
            names.push(name.to_string());
        }
        inverse.push((names[0].clone(), names[1].clone()));
    }
    FiniteGroupoid::from_parts(units, arrows, product, inverse)
        .map_err(|e| IoError { path: path.to_string(), message: e.to_string() })
}

fn parse_transformation(m: &Map<String, Value>, path: &str) -> Result<FiniteGroupoid, IoError> {
    let gp = format!("{path}/group");
    let gm = obj(field(m, "group", path)?, &gp)?;
    let elements = string_list(field(gm, "elements", &gp)?, &format!("{gp}/elements"))?;
    let table_v = arr(field(gm, "table", &gp)?, &format!("{gp}/table"))?;
    let mut rows = Vec::with_capacity(table_v.len());
    for (i, rv) in table_v.iter().enumerate() {
        rows.push(string_list(rv, &format!("{gp}/table/{i}"))?);
    }
    let group = GroupTable::new(elements, rows)
        .map_err(|e| IoError { path: gp.clone(), message: e.to_string() })?;
    let points = string_list(field(m, "points", path)?, &format!("{path}/points"))?;
    let ap = format!("{path}/action");
    let am = obj(field(m, "action", path)?, &ap)?;
    let mut action: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    for (elem, mv) in am {
        let ep = format!("{ap}/{elem}");
        let em = obj(mv, &ep)?;
        let mut map = BTreeMap::new();
        for (from, to) in em {
            map.insert(from.clone(), str_of(to, &format!("{ep}/{from}"))?.to_string());
        }
        action.insert(elem.clone(), map);
    }
    transformation_groupoid(&group, &points, &action)
        .map_err(|e| IoError { path: path.to_string(), message: e.to_string() })
}

pub fn groupoid_to_json(g: &FiniteGroupoid) -> Value {
    let arrows: Vec<Value> = g
        .arrows()
        .iter()
        .map(|a| {
            json!({
                "id": a.id,
                "src": g.unit_name(a.src),
                "dst": g.unit_name(a.dst),
            })
        })
        .collect();
    let mut product = Vec::new();
    let mut inverse = Vec::new();
    for a in 0..g.n_arrows() as u32 {
        for b in 0..g.n_arrows() as u32 {
            if let Some(c) = g.compose(a, b) {
                product.push(json!([g.arrow(a).id, g.arrow(b).id, g.arrow(c).id]));
            }
        }
        if let Some(ai) = g.inv(a) {
            inverse.push(json!([g.arrow(a).id, g.arrow(ai).id]));
        }
    }
    json!({
        "units": g.unit_names(),
        "arrows": arrows,
        "product": product,
        "inverse": inverse,
    })
}

/// Reads a graph document {"vertices": [...], "edges": [{"id", "src",
/// "dst"}, ...]}.
pub fn parse_graph(v: &Value, path: &str) -> Result<Graph, IoError> {
    let m = obj(v, path)?;
    let vertices = string_list(field(m, "vertices", path)?, &format!("{path}/vertices"))?;
    let edges_v = arr(field(m, "edges", path)?, &format!("{path}/edges"))?;
    let mut edges = Vec::with_capacity(edges_v.len());
    for (i, ev) in edges_v.iter().enumerate() {
        let ep = format!("{path}/edges/{i}");
        let em = obj(ev, &ep)?;
        let id = str_of(field(em, "id", &ep)?, &format!("{ep}/id"))?;
        let src = str_of(field(em, "src", &ep)?, &format!("{ep}/src"))?;
        let dst = str_of(field(em, "dst", &ep)?, &format!("{ep}/dst"))?;
        for (name, val) in [("src", src), ("dst", dst)] {
            if !vertices.contains(&val.to_string()) {
                return err(&format!("{ep}/{name}"), format!("unknown vertex \"{val}\""));
            }
        }
        edges.push((id.to_string(), src.to_string(), dst.to_string()));
    }
    Graph::from_parts(vertices, edges)
        .map_err(|e| IoError { path: path.to_string(), message: e.to_string() })
}

pub fn graph_to_json(g: &Graph) -> Value {
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| {
            json!({
                "id": e.id,
                "src": g.vertex_name(e.src),
                "dst": g.vertex_name(e.dst),
            })
        })
        .collect();
    json!({ "vertices": g.vertex_names(), "edges": edges })
}

/// The groupoid reference inside a cocycle document: a file path string
/// or an inline groupoid object. Resolution of paths is the caller's
/// concern.
pub enum DocRef<'a> {
    Path(&'a str),
    Inline(&'a Value),
}

pub fn cocycle_groupoid_field<'a>(v: &'a Value, path: &str) -> Result<DocRef<'a>, IoError> {
    let m = obj(v, path)?;
    let g = field(m, "groupoid", path)?;
    match g {
        Value::String(s) => Ok(DocRef::Path(s)),
        Value::Object(_) => Ok(DocRef::Inline(g)),
        _ => err(&format!("{path}/groupoid"), "expected a path string or an inline groupoid"),
    }
}

/// Reads the values of a cocycle document against a resolved groupoid.
/// Entries of the form [a, b, [re, im]] give values on composable arrow
/// pairs; entries [x, y, z, [re, im]] are keyed by unit triples of a
/// principal relation and pass through the triple-to-pair
/// renormalization. Omitted entries default to 1.
pub fn parse_cocycle(v: &Value, g: &FiniteGroupoid, path: &str) -> Result<Cocycle2, IoError> {
    let m = obj(v, path)?;
    let values_v = match m.get("values") {
        Some(v) => arr(v, &format!("{path}/values"))?.clone(),
        None => Vec::new(),
    };
    let mut pair_values = Vec::new();
    let mut triple_values = Vec::new();
    for (i, ev) in values_v.iter().enumerate() {
        let ep = format!("{path}/values/{i}");
        let entry = arr(ev, &ep)?;
        match entry.len() {
            3 => {
                let a = str_of(&entry[0], &format!("{ep}/0"))?;
                let b = str_of(&entry[1], &format!("{ep}/1"))?;
                let z = complex_of(&entry[2], &format!("{ep}/2"))?;
                let ia = match g.arrow_index(a) {
                    Some(x) => x,
                    None => return err(&format!("{ep}/0"), format!("unknown arrow \"{a}\"")),
                };
                let ib = match g.arrow_index(b) {
                    Some(x) => x,
                    None => return err(&format!("{ep}/1"), format!("unknown arrow \"{b}\"")),
                };
                if g.compose(ia, ib).is_none() {
                    return err(&ep, format!("arrows \"{a}\" and \"{b}\" do not compose"));
                }
                if (z.norm() - 1.0).abs() > crate::cocycle::TOL_SOLVE {
                    return err(&format!("{ep}/2"), "value is not of modulus one");
                }
                pair_values.push((a.to_string(), b.to_string(), z));
            }
            4 => {
                let x = str_of(&entry[0], &format!("{ep}/0"))?;
                let y = str_of(&entry[1], &format!("{ep}/1"))?;
                let zn = str_of(&entry[2], &format!("{ep}/2"))?;
                let v = complex_of(&entry[3], &format!("{ep}/3"))?;
                triple_values.push((x.to_string(), y.to_string(), zn.to_string(), v));
            }
            _ => return err(&ep, "expected [a, b, [re,im]] or [x, y, z, [re,im]]"),
        }
    }
    if !triple_values.is_empty() {
        if !pair_values.is_empty() {
            return err(&format!("{path}/values"), "cannot mix pair and triple entries");
        }
        let fm = FMCocycle::from_values(g, &triple_values)
            .map_err(|e| IoError { path: format!("{path}/values"), message: e.to_string() })?;
        return fm_to_groupoid(&fm)
            .map_err(|e| IoError { path: format!("{path}/values"), message: e.to_string() });
    }
    Cocycle2::from_values(g, &pair_values)
        .map_err(|e| IoError { path: format!("{path}/values"), message: e.to_string() })
}

pub fn cocycle_to_json(s: &Cocycle2, g: &FiniteGroupoid) -> Value {
    let values: Vec<Value> = s
        .nontrivial_values()
        .into_iter()
        .map(|(a, b, z)| json!([a, b, complex_to_json(z)]))
        .collect();
    json!({ "groupoid": groupoid_to_json(g), "values": values })
}

/// Reads a section document {"values": [["arrowId", [re, im]], ...]}.
pub fn parse_section(v: &Value, ctx: &AlgebraContext, path: &str) -> Result<Section, IoError> {
    let m = obj(v, path)?;
    let mut out = Section::zero(ctx);
    let g = ctx.groupoid();
    if let Some(values) = m.get("values") {
        for (i, ev) in arr(values, &format!("{path}/values"))?.iter().enumerate() {
            let ep = format!("{path}/values/{i}");
            let entry = arr(ev, &ep)?;
            if entry.len() != 2 {
                return err(&ep, "expected [arrowId, [re, im]]");
            }
            let id = str_of(&entry[0], &format!("{ep}/0"))?;
            let z = complex_of(&entry[1], &format!("{ep}/1"))?;
            match g.arrow_index(id) {
                Some(a) => out.set(a, z),
                None => return err(&format!("{ep}/0"), format!("unknown arrow \"{id}\"")),
            }
        }
    }
    Ok(out)
}

pub fn section_to_json(f: &Section, ctx: &AlgebraContext) -> Value {
    let g = ctx.groupoid();
    let values: Vec<Value> = f
        .support()
        .into_iter()
        .map(|a| json!([g.arrow(a).id, complex_to_json(f.value(a))]))
        .collect();
    json!({ "values": values })
}

pub fn matrix_model_to_json(model: &MatrixModel, ctx: &AlgebraContext) -> Value {
    let g = ctx.groupoid();
    let blocks: Vec<Value> = model
        .blocks
        .iter()
        .map(|b| {
            json!({
                "units": b.units.iter().map(|&u| g.unit_name(u)).collect::<Vec<_>>(),
                "size": b.basis.len(),
            })
        })
        .collect();
    let labels: Vec<Value> = model
        .labels
        .iter()
        .map(|(&a, &(block, row, col, phase))| {
            json!([g.arrow(a).id, block, row, col, complex_to_json(phase)])
        })
        .collect();
    json!({ "blocks": blocks, "labels": labels })
}

/// Reads a pair document {"blocks": [{"size": n}, ...], "diagonal":
/// "standard", "generators": optional [[block, [[[re,im], ...], ...]],
/// ...]}. Returns the pair and any explicit generator matrices.
pub fn parse_cartan_pair(
    v: &Value,
    path: &str,
) -> Result<(CartanPairModel, Vec<(usize, CMatrix)>), IoError> {
    let m = obj(v, path)?;
    let blocks_v = arr(field(m, "blocks", path)?, &format!("{path}/blocks"))?;
    let mut sizes = Vec::with_capacity(blocks_v.len());
    for (i, bv) in blocks_v.iter().enumerate() {
        let bp = format!("{path}/blocks/{i}");
        let bm = obj(bv, &bp)?;
        let size = usize_of(field(bm, "size", &bp)?, &format!("{bp}/size"))?;
        if size == 0 {
            return err(&format!("{bp}/size"), "block size must be positive");
        }
        sizes.push(size);
    }
    if sizes.is_empty() {
        return err(&format!("{path}/blocks"), "at least one block required");
    }
    if let Some(d) = m.get("diagonal") {
        let s = str_of(d, &format!("{path}/diagonal"))?;
        if s != "standard" {
            return err(&format!("{path}/diagonal"), format!("unknown diagonal \"{s}\""));
        }
    }
    let pair = CartanPairModel::standard(&sizes);
    let mut generators = Vec::new();
    if let Some(gv) = m.get("generators") {
        for (i, entry) in arr(gv, &format!("{path}/generators"))?.iter().enumerate() {
            let gp = format!("{path}/generators/{i}");
            let pairv = arr(entry, &gp)?;
            if pairv.len() != 2 {
                return err(&gp, "expected [block, matrix]");
            }
            let block = usize_of(&pairv[0], &format!("{gp}/0"))?;
            if block >= sizes.len() {
                return err(&format!("{gp}/0"), format!("no block {block}"));
            }
            let n = sizes[block];
            let rows = arr(&pairv[1], &format!("{gp}/1"))?;
            if rows.len() != n {
                return err(&format!("{gp}/1"), format!("expected {n} rows"));
            }
            let mut mat = CMatrix::zeros(n, n);
            for (r, rv) in rows.iter().enumerate() {
                let rp = format!("{gp}/1/{r}");
                let cols = arr(rv, &rp)?;
                if cols.len() != n {
                    return err(&rp, format!("expected {n} entries"));
                }
                for (c, cv) in cols.iter().enumerate() {
                    mat.set(r, c, complex_of(cv, &format!("{rp}/{c}"))?);
                }
            }
            generators.push((block, mat));
        }
    }
    Ok((pair, generators))
}

pub fn cartan_pair_to_json(pair: &CartanPairModel) -> Value {
    let blocks: Vec<Value> =
        pair.block_sizes().iter().map(|&n| json!({ "size": n })).collect();
    json!({ "blocks": blocks, "diagonal": "standard" })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{cyclic_group, transitive_groupoid};

    #[test]
    fn groupoid_document_roundtrip() {
        let z2 = cyclic_group(2);
        let g = transitive_groupoid(&["x".into(), "y".into()], &z2);
        let doc = groupoid_to_json(&g);
        let back = parse_groupoid(&doc, "").unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn pair_shorthand() {
        let doc = json!({"type": "pair", "points": ["a", "b", "c"]});
        let g = parse_groupoid(&doc, "").unwrap();
        assert_eq!(g.n_units(), 3);
        assert_eq!(g.n_arrows(), 9);
        assert!(g.is_principal());
    }

    #[test]
    fn transformation_shorthand() {
        let doc = json!({
            "type": "transformation",
            "group": {"elements": ["e", "a"], "table": [["e", "a"], ["a", "e"]]},
            "points": ["0", "1"],
            "action": {"e": {"0": "0", "1": "1"}, "a": {"0": "1", "1": "0"}},
        });
        let g = parse_groupoid(&doc, "").unwrap();
        assert_eq!(g.n_units(), 2);
        assert_eq!(g.n_arrows(), 4);
        assert!(g.is_principal());
    }

    #[test]
    fn schema_violations_point_at_the_node() {
        let doc = json!({
            "units": ["u"],
            "arrows": [{"id": "a", "src": "u", "dst": "v"}],
            "product": [],
            "inverse": [],
        });
        let e = parse_groupoid(&doc, "").unwrap_err();
        assert_eq!(e.path, "/arrows/0/dst");

        let doc = json!({"vertices": ["v"], "edges": [{"id": "e", "src": "w", "dst": "v"}]});
        let e = parse_graph(&doc, "").unwrap_err();
        assert_eq!(e.path, "/edges/0/src");
    }

    #[test]
    fn graph_document_roundtrip() {
        let doc = json!({
            "vertices": ["v", "w"],
            "edges": [
                {"id": "e1", "src": "v", "dst": "w"},
                {"id": "e2", "src": "w", "dst": "v"},
            ],
        });
        let g = parse_graph(&doc, "").unwrap();
        assert_eq!(graph_to_json(&g), doc);
    }

    #[test]
    fn cocycle_document_with_pair_values() {
        let g = parse_groupoid(&json!({"type": "pair", "points": ["1", "2"]}), "").unwrap();
        // The coboundary of the cochain taking -1 on "1>2".
        let doc = json!({
            "groupoid": {"type": "pair", "points": ["1", "2"]},
            "values": [["1>2", "2>1", [-1.0, 0.0]], ["2>1", "1>2", [-1.0, 0.0]]],
        });
        let s = parse_cocycle(&doc, &g, "").unwrap();
        let a = g.arrow_index("1>2").unwrap();
        let b = g.arrow_index("2>1").unwrap();
        assert_eq!(s.get(a, b), Complex64::new(-1.0, 0.0));
        assert!(s.check().is_ok());
    }

    #[test]
    fn cocycle_document_rejects_bad_entries() {
        let g = parse_groupoid(&json!({"type": "pair", "points": ["1", "2"]}), "").unwrap();
        let doc = json!({"groupoid": "g.json", "values": [["1>2", "nope", [1.0, 0.0]]]});
        let e = parse_cocycle(&doc, &g, "").unwrap_err();
        assert_eq!(e.path, "/values/0/1");

        let doc = json!({"groupoid": "g.json", "values": [["1>2", "2>1", [2.0, 0.0]]]});
        let e = parse_cocycle(&doc, &g, "").unwrap_err();
        assert_eq!(e.path, "/values/0/2");

        // Non-composable pair: both arrows have source 2.
        let doc = json!({"groupoid": "g.json", "values": [["2>1", "2>1", [1.0, 0.0]]]});
        let e = parse_cocycle(&doc, &g, "").unwrap_err();
        assert_eq!(e.path, "/values/0");
    }

    #[test]
    fn fm_triples_renormalize() {
        let g = parse_groupoid(&json!({"type": "pair", "points": ["1", "2", "3"]}), "").unwrap();
        // sigma(x, y, z) = t(x,y) t(y,z) / t(x,z) with t("1","2") = i.
        let doc = json!({
            "groupoid": "g.json",
            "values": [
                ["1", "2", "1", [0.0, 1.0]],
                ["1", "2", "3", [0.0, 1.0]],
                ["2", "1", "2", [0.0, 1.0]],
                ["3", "1", "2", [0.0, 1.0]],
                ["1", "3", "2", [0.0, -1.0]],
            ],
        });
        let s = parse_cocycle(&doc, &g, "").unwrap();
        assert!(s.check().is_ok());
    }

    #[test]
    fn section_document_roundtrip() {
        let g = parse_groupoid(&json!({"type": "pair", "points": ["1", "2"]}), "").unwrap();
        let ctx = AlgebraContext::untwisted(g);
        let doc = json!({"values": [["1>2", [0.5, -1.5]], ["2>2", [1.0, 0.0]]]});
        let f = parse_section(&doc, &ctx, "").unwrap();
        assert_eq!(section_to_json(&f, &ctx), doc);
    }

    #[test]
    fn cartan_pair_documents() {
        let doc = json!({"blocks": [{"size": 2}, {"size": 3}], "diagonal": "standard"});
        let (pair, gens) = parse_cartan_pair(&doc, "").unwrap();
        assert_eq!(pair.block_sizes(), &[2, 3]);
        assert!(gens.is_empty());
        assert_eq!(cartan_pair_to_json(&pair), doc);

        let doc = json!({
            "blocks": [{"size": 2}],
            "generators": [[0, [[[0.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]]],
        });
        let (_, gens) = parse_cartan_pair(&doc, "").unwrap();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].1.get(0, 1), Complex64::ONE);

        let bad = json!({"blocks": [{"size": 0}]});
        assert_eq!(parse_cartan_pair(&bad, "").unwrap_err().path, "/blocks/0/size");
    }

    #[test]
    fn doc_refs_distinguish_paths_and_inline() {
        let doc = json!({"groupoid": "file.json", "values": []});
        assert!(matches!(cocycle_groupoid_field(&doc, "").unwrap(), DocRef::Path("file.json")));
        let doc = json!({"groupoid": {"type": "pair", "points": []}, "values": []});
        assert!(matches!(cocycle_groupoid_field(&doc, "").unwrap(), DocRef::Inline(_)));
    }
}
