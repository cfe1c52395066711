//! Deterministic JSON encoding and decoding for every value that appears in
//! problem configs and reports: scalars, polynomials, rings, groups and
//! their ring actions, graded matrices, objects, morphisms, and homotopies.
//!
//! Decoding never bypasses the validating constructors, so a deserialized
//! object or morphism has re-established all of its defining identities — or
//! failed with the first violated one. Encoding is canonical: JSON maps are
//! emitted with sorted keys and polynomial terms in their stored canonical
//! order, so equal values always serialize to identical bytes.

use crate::error::{Error, Result};
use crate::field::{Field, FieldKind, Scalar};
use crate::graded::{GradedFreeModule, GradedMatrix};
use crate::group::{GroupData, RingAction};
use crate::mf::EquivariantMF;
use crate::morphism::{Homotopy, MFMorphism};
use crate::poly::{Exp, Polynomial};
use crate::rat::Rat;
use crate::ring::GradedRing;
use serde_json::{json, Value};
use std::sync::Arc;

/// Schema identifier embedded in every config file.
pub const CONFIG_SCHEMA: &str = "eqmf.config/1";
/// Schema identifier embedded in every report file.
pub const REPORT_SCHEMA: &str = "eqmf.report/1";

fn preview(v: &Value) -> String {
    let s = v.to_string();
    if s.len() > 80 {
        format!("{}…", &s[..s.char_indices().take(80).last().map_or(0, |(i, c)| i + c.len_utf8())])
    } else {
        s
    }
}

fn expected(what: &str, v: &Value) -> Error {
    Error::Parse(format!("expected {what}, found {}", preview(v)))
}

/// Fetch a required key from a JSON object.
pub fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.as_object()
        .ok_or_else(|| expected("a JSON object", v))?
        .get(key)
        .ok_or_else(|| Error::Parse(format!("missing key `{key}`")))
}

pub fn get_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    get(v, key)?.as_str().ok_or_else(|| expected(&format!("string `{key}`"), v))
}

pub fn get_u64(v: &Value, key: &str) -> Result<u64> {
    get(v, key)?.as_u64().ok_or_else(|| expected(&format!("integer `{key}`"), v))
}

pub fn get_i64(v: &Value, key: &str) -> Result<i64> {
    get(v, key)?.as_i64().ok_or_else(|| expected(&format!("integer `{key}`"), v))
}

pub fn get_array<'a>(v: &'a Value, key: &str) -> Result<&'a [Value]> {
    get(v, key)?
        .as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| Error::Parse(format!("key `{key}` must be an array")))
}

pub fn rat_to_json(r: &Rat) -> Value {
    Value::String(r.to_string())
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    let s = v.as_str().ok_or_else(|| expected("a rational string", v))?;
    Rat::parse(s).ok_or_else(|| Error::Parse(format!("malformed rational `{s}`")))
}

pub fn scalar_to_json(c: &Scalar) -> Value {
    match c {
        Scalar::Rat(r) => rat_to_json(r),
        Scalar::Mod(m) => json!(m),
        Scalar::Ext(coords) => Value::Array(coords.iter().map(rat_to_json).collect()),
    }
}

pub fn scalar_from_json(field: &Field, v: &Value) -> Result<Scalar> {
    match field.kind() {
        FieldKind::Rationals => Ok(Scalar::Rat(rat_from_json(v)?)),
        FieldKind::Prime(p) => {
            let m = v.as_u64().ok_or_else(|| expected("a residue", v))?;
            if m >= *p {
                return Err(Error::Parse(format!("residue {m} out of range modulo {p}")));
            }
            Ok(Scalar::Mod(m))
        }
        FieldKind::Extension { .. } => {
            let arr = v.as_array().ok_or_else(|| expected("extension coordinates", v))?;
            if arr.len() != field.ext_degree() {
                return Err(Error::Parse(format!(
                    "extension scalar needs {} coordinates, found {}",
                    field.ext_degree(),
                    arr.len()
                )));
            }
            let coords = arr.iter().map(rat_from_json).collect::<Result<Vec<_>>>()?;
            Ok(Scalar::Ext(coords))
        }
    }
}

pub fn field_to_json(f: &Field) -> Value {
    match f.kind() {
        FieldKind::Rationals => json!({ "kind": "rationals" }),
        FieldKind::Prime(p) => json!({ "kind": "prime", "p": p }),
        FieldKind::Extension { symbol, modulus } => json!({
            "kind": "extension",
            "symbol": symbol,
            "modulus": modulus.iter().map(rat_to_json).collect::<Vec<_>>(),
        }),
    }
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    match get_str(v, "kind")? {
        "rationals" => Ok(Field::rationals()),
        "prime" => Field::prime(get_u64(v, "p")?),
        "extension" => {
            let symbol = get_str(v, "symbol")?;
            let modulus = get_array(v, "modulus")?
                .iter()
                .map(rat_from_json)
                .collect::<Result<Vec<_>>>()?;
            Field::extension(symbol, modulus)
        }
        other => Err(Error::Parse(format!("unknown field kind `{other}`"))),
    }
}

/// A polynomial is an array of `[exponents, coefficient]` pairs in the
/// canonical stored term order.
pub fn poly_to_json(p: &Polynomial) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| json!([e, scalar_to_json(c)]))
            .collect(),
    )
}

pub fn poly_from_json(field: &Field, nvars: usize, v: &Value) -> Result<Polynomial> {
    let arr = v.as_array().ok_or_else(|| expected("a polynomial term array", v))?;
    let mut p = Polynomial::zero(nvars);
    for term in arr {
        let pair = term.as_array().ok_or_else(|| expected("a [exponents, coefficient] pair", term))?;
        if pair.len() != 2 {
            return Err(expected("a [exponents, coefficient] pair", term));
        }
        let exps = pair[0]
            .as_array()
            .ok_or_else(|| expected("an exponent array", &pair[0]))?;
        if exps.len() != nvars {
            return Err(Error::Parse(format!(
                "exponent vector has {} entries for {nvars} variables",
                exps.len()
            )));
        }
        let exp: Exp = exps
            .iter()
            .map(|e| {
                e.as_u64()
                    .and_then(|n| u32::try_from(n).ok())
                    .ok_or_else(|| expected("a nonnegative exponent", e))
            })
            .collect::<Result<Vec<u32>>>()?;
        let c = scalar_from_json(field, &pair[1])?;
        p = p.add(&Polynomial::monomial(nvars, exp, c, field), field)?;
    }
    Ok(p)
}

pub fn ring_to_json(r: &GradedRing) -> Value {
    json!({
        "field": field_to_json(r.field()),
        "vars": r.vars(),
        "weights": r.weights(),
        "potential": poly_to_json(r.potential()),
    })
}

pub fn ring_from_json(v: &Value) -> Result<Arc<GradedRing>> {
    let field = field_from_json(get(v, "field")?)?;
    let vars: Vec<String> = get_array(v, "vars")?
        .iter()
        .map(|s| {
            s.as_str()
                .map(str::to_string)
                .ok_or_else(|| expected("a variable name", s))
        })
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<u32> = get_array(v, "weights")?
        .iter()
        .map(|w| {
            w.as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| expected("a positive weight", w))
        })
        .collect::<Result<Vec<_>>>()?;
    let potential = poly_from_json(&field, vars.len(), get(v, "potential")?)?;
    GradedRing::new(field, vars, weights, potential)
}

pub fn group_to_json(g: &GroupData) -> Value {
    let n = g.order();
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| g.mul(a, b)).collect()).collect();
    json!({ "labels": g.labels(), "table": table })
}

pub fn group_from_json(v: &Value) -> Result<Arc<GroupData>> {
    let labels: Vec<String> = get_array(v, "labels")?
        .iter()
        .map(|s| {
            s.as_str()
                .map(str::to_string)
                .ok_or_else(|| expected("an element label", s))
        })
        .collect::<Result<Vec<_>>>()?;
    let table: Vec<Vec<usize>> = get_array(v, "table")?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| expected("a table row", row))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .map(|n| n as usize)
                        .ok_or_else(|| expected("a table index", e))
                })
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GroupData::new(labels, table)
}

pub fn action_to_json(a: &RingAction) -> Value {
    let images: Vec<Vec<Value>> = a
        .group()
        .elements()
        .map(|g| {
            (0..a.ring().nvars())
                .map(|i| poly_to_json(a.variable_image(g, i)))
                .collect()
        })
        .collect();
    json!({ "group": group_to_json(a.group()), "images": images })
}

pub fn action_from_json(ring: &Arc<GradedRing>, v: &Value) -> Result<Arc<RingAction>> {
    let group = group_from_json(get(v, "group")?)?;
    let images: Vec<Vec<Polynomial>> = get_array(v, "images")?
        .iter()
        .map(|per_g| {
            per_g
                .as_array()
                .ok_or_else(|| expected("variable images", per_g))?
                .iter()
                .map(|p| poly_from_json(ring.field(), ring.nvars(), p))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    RingAction::new(ring.clone(), group, images)
}

pub fn matrix_to_json(m: &GradedMatrix) -> Value {
    let rows: Vec<Vec<Value>> = (0..m.tgt().rank())
        .map(|i| (0..m.src().rank()).map(|j| poly_to_json(m.at(i, j))).collect())
        .collect();
    json!({
        "src": m.src().weights(),
        "tgt": m.tgt().weights(),
        "shift": m.shift(),
        "entries": rows,
    })
}

fn weights_from_json(v: &Value) -> Result<Vec<i64>> {
    v.as_array()
        .ok_or_else(|| expected("a weight array", v))?
        .iter()
        .map(|w| w.as_i64().ok_or_else(|| expected("an integer weight", w)))
        .collect()
}

pub fn matrix_from_json(ring: &Arc<GradedRing>, v: &Value) -> Result<GradedMatrix> {
    let src = GradedFreeModule::new(ring.clone(), weights_from_json(get(v, "src")?)?);
    let tgt = GradedFreeModule::new(ring.clone(), weights_from_json(get(v, "tgt")?)?);
    let shift = get_i64(v, "shift")?;
    let rows = get_array(v, "entries")?;
    if rows.len() != tgt.rank() {
        return Err(Error::Parse(format!(
            "matrix has {} rows, target rank is {}",
            rows.len(),
            tgt.rank()
        )));
    }
    let mut entries = Vec::with_capacity(src.rank() * tgt.rank());
    for row in rows {
        let cols = row.as_array().ok_or_else(|| expected("a matrix row", row))?;
        if cols.len() != src.rank() {
            return Err(Error::Parse(format!(
                "matrix row has {} columns, source rank is {}",
                cols.len(),
                src.rank()
            )));
        }
        for e in cols {
            entries.push(poly_from_json(ring.field(), ring.nvars(), e)?);
        }
    }
    GradedMatrix::new(src, tgt, shift, entries)
}

/// Full self-contained encoding of an object, including its ring and group
/// action, so a report can be re-verified with no other inputs.
pub fn object_to_json(x: &EquivariantMF) -> Value {
    let n = x.group_order();
    json!({
        "ring": ring_to_json(x.ring()),
        "action": action_to_json(x.action()),
        "a": matrix_to_json(x.a()),
        "b": matrix_to_json(x.b()),
        "m0": (0..n).map(|g| matrix_to_json(x.m0(g))).collect::<Vec<_>>(),
        "m1": (0..n).map(|g| matrix_to_json(x.m1(g))).collect::<Vec<_>>(),
    })
}

pub fn object_from_json(v: &Value) -> Result<EquivariantMF> {
    let x = object_from_json_unvalidated(v)?;
    EquivariantMF::new(
        x.action().clone(),
        x.a().clone(),
        x.b().clone(),
        (0..x.group_order()).map(|g| x.m0(g).clone()).collect(),
        (0..x.group_order()).map(|g| x.m1(g).clone()).collect(),
    )
}

/// Decode the components of an object *without* running the defining-identity
/// checks, so validation tooling can produce the full violation report on
/// broken input. Structural decoding (ring, action table, matrix shapes and
/// entry degrees) is still enforced.
pub fn object_from_json_unvalidated(v: &Value) -> Result<EquivariantMF> {
    let ring = ring_from_json(get(v, "ring")?)?;
    let action = action_from_json(&ring, get(v, "action")?)?;
    let a = matrix_from_json(&ring, get(v, "a")?)?;
    let b = matrix_from_json(&ring, get(v, "b")?)?;
    let m0 = get_array(v, "m0")?
        .iter()
        .map(|m| matrix_from_json(&ring, m))
        .collect::<Result<Vec<_>>>()?;
    let m1 = get_array(v, "m1")?
        .iter()
        .map(|m| matrix_from_json(&ring, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(EquivariantMF::assemble_unvalidated(action, a, b, m0, m1))
}

/// Component encoding of a morphism; the endpoints are stored as names
/// resolved against a report's object table.
pub fn morphism_to_json(source_name: &str, target_name: &str, u: &MFMorphism) -> Value {
    json!({
        "source": source_name,
        "target": target_name,
        "u0": matrix_to_json(u.u0()),
        "u1": matrix_to_json(u.u1()),
    })
}

pub fn morphism_from_json(
    source: &EquivariantMF,
    target: &EquivariantMF,
    v: &Value,
) -> Result<MFMorphism> {
    let ring = source.ring().clone();
    let u0 = matrix_from_json(&ring, get(v, "u0")?)?;
    let u1 = matrix_from_json(&ring, get(v, "u1")?)?;
    MFMorphism::new(source, target, u0, u1)
}

/// Component encoding of a homotopy; endpoints come from the certificate
/// that owns the witness.
pub fn homotopy_to_json(h: &Homotopy) -> Value {
    json!({
        "h0": matrix_to_json(h.h0()),
        "h1": matrix_to_json(h.h1()),
    })
}

pub fn homotopy_from_json(
    source: &EquivariantMF,
    target: &EquivariantMF,
    v: &Value,
) -> Result<Homotopy> {
    let ring = source.ring().clone();
    let h0 = matrix_from_json(&ring, get(v, "h0")?)?;
    let h1 = matrix_from_json(&ring, get(v, "h1")?)?;
    Homotopy::new(source.clone(), target.clone(), h0, h1)
}

/// Canonical textual form: pretty-printed with sorted keys and a trailing
/// newline. Equal values yield identical bytes.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize infallibly");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sign_object() -> EquivariantMF {
        let ring = GradedRing::parse_new(Field::rationals(), &["x"], &[1], "x^2").unwrap();
        let group = GroupData::cyclic(2).unwrap();
        let sigma = RingAction::new(
            ring.clone(),
            group,
            vec![vec![ring.variable(0)], vec![ring.variable(0).neg(ring.field())]],
        )
        .unwrap();
        let p0 = GradedFreeModule::new(ring.clone(), vec![0]);
        let p1 = GradedFreeModule::new(ring.clone(), vec![1]);
        let a = GradedMatrix::new(p1.clone(), p0.clone(), 0, vec![ring.variable(0)]).unwrap();
        let b = GradedMatrix::new(p0.clone(), p1.clone(), 2, vec![ring.variable(0)]).unwrap();
        let id0 = GradedMatrix::identity(&p0);
        let id1 = GradedMatrix::identity(&p1);
        EquivariantMF::with_action(
            sigma,
            a,
            b,
            vec![id0.clone(), id0],
            vec![id1.clone(), id1.neg()],
        )
        .unwrap()
    }

    #[test]
    fn scalar_and_field_round_trips() {
        let q = Field::rationals();
        for s in ["0", "7", "-3/2", "123456789012345678901234567890/7"] {
            let r = Rat::parse(s).unwrap();
            let back = rat_from_json(&rat_to_json(&r)).unwrap();
            assert_eq!(r, back);
        }
        let c = q.from_i64(-5);
        assert_eq!(scalar_from_json(&q, &scalar_to_json(&c)).unwrap(), c);

        let f7 = Field::prime(7).unwrap();
        let c = f7.from_i64(12);
        assert_eq!(scalar_from_json(&f7, &scalar_to_json(&c)).unwrap(), c);
        assert!(scalar_from_json(&f7, &json!(9)).is_err());

        let qi = Field::extension("i", vec![Rat::from_i64(1), Rat::from_i64(0), Rat::from_i64(1)])
            .unwrap();
        let c = Scalar::Ext(vec![Rat::from_i64(2), Rat::parse("-1/3").unwrap()]);
        assert_eq!(scalar_from_json(&qi, &scalar_to_json(&c)).unwrap(), c);

        for f in [q, f7, qi] {
            let back = field_from_json(&field_to_json(&f)).unwrap();
            assert_eq!(back.kind(), f.kind());
        }
    }

    #[test]
    fn ring_group_action_round_trips() {
        let x = sign_object();
        let ring = ring_from_json(&ring_to_json(x.ring())).unwrap();
        assert!(ring.same_ring(x.ring()));
        let action = action_from_json(&ring, &action_to_json(x.action())).unwrap();
        assert!(action.same_action(x.action()));
        let p = x.ring().parse("x^2 - 1/2*x").unwrap();
        let back = poly_from_json(ring.field(), ring.nvars(), &poly_to_json(&p)).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn object_round_trip_is_canonical_and_validating() {
        let x = sign_object();
        let v = object_to_json(&x);
        let bytes = to_canonical_string(&v);
        let y = object_from_json(&v).unwrap();
        assert_eq!(to_canonical_string(&object_to_json(&y)), bytes);
        assert_eq!(y.a(), x.a());
        assert_eq!(y.m1(1), x.m1(1));

        // Corrupt one action matrix entry: the constructor must reject it.
        let mut bad = v.clone();
        bad["m1"][1]["entries"][0][0] = poly_to_json(
            &GradedMatrix::identity(x.p1()).at(0, 0).clone(),
        );
        assert!(object_from_json(&bad).is_err());
    }

    #[test]
    fn morphism_and_homotopy_round_trips() {
        let ring = GradedRing::parse_new(Field::rationals(), &["x"], &[1], "x^4").unwrap();
        let x = EquivariantMF::rank_one(&ring, "x", "x^3").unwrap();
        let y = EquivariantMF::rank_one(&ring, "x^2", "x^2").unwrap();
        let u = crate::morphism::morphism_space(&x, &x).unwrap().pop().unwrap();
        let back = morphism_from_json(&x, &x, &morphism_to_json("x", "x", &u)).unwrap();
        assert_eq!(back.u0(), u.u0());

        // A corrupted chain map must be rejected on load.
        let mut bad = morphism_to_json("x", "x", &MFMorphism::identity(&x));
        bad["u0"]["entries"][0][0] = poly_to_json(&ring.parse("0").unwrap());
        assert!(morphism_from_json(&x, &x, &bad).is_err());

        // Contractible object: id ≃ 0 has a witness that survives the trip.
        let cone = crate::morphism::cone(&MFMorphism::identity(&y)).unwrap();
        let h = crate::morphism::is_null_homotopic(&MFMorphism::identity(&cone))
            .unwrap()
            .expect("cone of the identity is contractible");
        let back = homotopy_from_json(&cone, &cone, &homotopy_to_json(&h)).unwrap();
        assert_eq!(back.h0(), h.h0());
        assert!(
            crate::morphism::verify_homotopy(
                &MFMorphism::identity(&cone),
                &MFMorphism::zero(&cone, &cone).unwrap(),
                &back
            )
            .unwrap()
        );
    }
}
