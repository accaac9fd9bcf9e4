//! JSON form of an embedding and its pivot certificate.

use std::fmt::Write as _;

use serde_json::{json, Value};

use resonance::universality::{Certificate, ColumnDecomposition, Coord, Embedding, RVector};

use crate::dec;

fn bits(v: &[u8]) -> String {
    v.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str, dim: usize) -> Result<Vec<u8>, String> {
    if s.len() != dim {
        return Err(format!("bitstring {s:?} has length {}, expected {dim}", s.len()));
    }
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(format!("bitstring {s:?} contains {c:?}")),
        })
        .collect()
}

fn levels(sets: &[Vec<usize>]) -> Value {
    Value::Array(sets.iter().map(|s| Value::Array(s.iter().map(dec).collect())).collect())
}

pub fn to_json(e: &Embedding, check: Option<(&Certificate, bool)>) -> Value {
    let mut out = json!({
        "N": dec(e.dim()),
        "r": dec(e.r),
        "n": dec(e.columns()),
        "decompositions": e.decompositions.iter().map(|d| json!({
            "positive": levels(&d.positive),
            "negative": levels(&d.negative),
        })).collect::<Vec<_>>(),
        "layout": e.layout.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "V": e.v.iter().map(|v| bits(v)).collect::<Vec<_>>(),
        "R": e.r_vectors.iter().map(|rv| json!({
            "label": rv.label.to_string(),
            "bits": bits(&rv.entries),
        })).collect::<Vec<_>>(),
    });
    if let Some((cert, minors)) = check {
        out["pivots"] = cert
            .pivots
            .iter()
            .map(|p| json!({ "row": dec(p.row), "col": dec(p.col), "label": p.label.to_string() }))
            .collect();
        out["verified"] = Value::Bool(cert.verified);
        out["minor_check"] = Value::Bool(minors);
    }
    out
}

pub fn to_text(e: &Embedding, check: Option<(&Certificate, bool)>) -> String {
    let mut s = String::new();
    writeln!(s, "N = {}, r = {}, n = {}, |R| = {}", e.dim(), e.r, e.columns(), e.r_vectors.len()).unwrap();
    let labels: Vec<String> = e.layout.iter().map(|c| c.to_string()).collect();
    writeln!(s, "layout: {}", labels.join(" ")).unwrap();
    for (i, v) in e.v.iter().enumerate() {
        writeln!(s, "v{} = {}", i + 1, bits(v)).unwrap();
    }
    for rv in &e.r_vectors {
        writeln!(s, "r[{}] = {}", rv.label, bits(&rv.entries)).unwrap();
    }
    if let Some((cert, minors)) = check {
        writeln!(s, "pivots: {}", cert.pivots.len()).unwrap();
        writeln!(s, "verified: {}", cert.verified).unwrap();
        writeln!(s, "minor check: {minors}").unwrap();
    }
    s
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, String> {
    v.get(key).ok_or_else(|| format!("certificate lacks {key:?}"))
}

fn num(v: &Value) -> Result<usize, String> {
    match v {
        Value::String(s) => s.parse().map_err(|_| format!("bad number {s:?}")),
        Value::Number(n) => n.as_u64().map(|x| x as usize).ok_or_else(|| format!("bad number {n}")),
        other => Err(format!("expected a number, found {other}")),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, String> {
    v.as_array().ok_or_else(|| format!("{what} must be an array"))
}

fn text<'a>(v: &'a Value, what: &str) -> Result<&'a str, String> {
    v.as_str().ok_or_else(|| format!("{what} must be a string"))
}

fn parse_levels(v: &Value) -> Result<Vec<Vec<usize>>, String> {
    array(v, "level set list")?
        .iter()
        .map(|s| array(s, "level set")?.iter().map(num).collect())
        .collect()
}

/// Rebuilds the embedding from `to_json` output. Pivot data is ignored; the
/// caller reruns the check.
pub fn from_json(v: &Value) -> Result<Embedding, String> {
    let r = num(field(v, "r")?)?;
    let layout: Vec<Coord> = array(field(v, "layout")?, "layout")?
        .iter()
        .map(|c| text(c, "label")?.parse::<Coord>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let dim = layout.len();
    if let Some(n_big) = v.get("N") {
        if num(n_big)? != dim {
            return Err(format!("N = {} disagrees with layout length {dim}", num(n_big)?));
        }
    }
    let vs: Vec<Vec<u8>> = array(field(v, "V")?, "V")?
        .iter()
        .map(|b| parse_bits(text(b, "V entry")?, dim))
        .collect::<Result<_, _>>()?;
    let r_vectors: Vec<RVector> = array(field(v, "R")?, "R")?
        .iter()
        .map(|rv| {
            let label = text(field(rv, "label")?, "label")?.parse::<Coord>().map_err(|e| e.to_string())?;
            let entries = parse_bits(text(field(rv, "bits")?, "bits")?, dim)?;
            Ok(RVector { label, entries })
        })
        .collect::<Result<_, String>>()?;
    let decompositions: Vec<ColumnDecomposition> = array(field(v, "decompositions")?, "decompositions")?
        .iter()
        .map(|d| {
            Ok(ColumnDecomposition {
                positive: parse_levels(field(d, "positive")?)?,
                negative: parse_levels(field(d, "negative")?)?,
            })
        })
        .collect::<Result<_, String>>()?;
    if decompositions.len() != vs.len() {
        return Err("one decomposition per column of V is required".into());
    }
    Ok(Embedding { r, decompositions, layout, v: vs, r_vectors })
}
