//! JSON form of a [`SymmetricBilinearAlgorithm`].
//!
//! ```json
//! {
//!   "base_modulus": [1, 1, 1],          // only when q is not prime
//!   "modulus_Q": [1, 1, 0, 1],          // low-to-high, monic
//!   "n": 3,
//!   "plan": {                           // null for hand-built algorithms
//!     "divisor": [{"coefficient": 2, "place": "inf"}],
//!     "multiplicities": [1, 2],
//!     "places": ["inf", [0, 1]]
//!   },
//!   "q": 2,
//!   "rank": 7,
//!   "terms": [{"phi": [1, 0, 0], "w": [1, 0, 0]}]
//! }
//! ```
//!
//! Field elements are integers in `[0, q)`, read as base-`p` digits of their
//! coordinates over `F_p`. Keys are sorted, so the rendering is canonical.

use serde_json::{json, Map, Value};

use crate::cc::{BilinearTerm, EvaluationPlan, SymmetricBilinearAlgorithm};
use crate::error::{Error, Result};
use crate::ff::{is_irreducible, make_field, prime_power, FieldSpec, Polynomial};
use crate::function_field::{Divisor, Place};

pub fn algorithm_to_json(alg: &SymmetricBilinearAlgorithm) -> Value {
    let mut doc = Map::new();
    doc.insert("q".into(), json!(alg.field.order()));
    doc.insert("n".into(), json!(alg.n));
    if let Some(m) = alg.field.modulus() {
        doc.insert("base_modulus".into(), json!(m));
    }
    doc.insert("modulus_Q".into(), json!(alg.modulus.coeffs()));
    doc.insert("rank".into(), json!(alg.rank()));
    let terms: Vec<Value> = alg.terms.iter().map(|t| json!({"phi": t.phi, "w": t.w})).collect();
    doc.insert("terms".into(), Value::Array(terms));
    doc.insert("plan".into(), alg.plan.as_ref().map_or(Value::Null, plan_to_json));
    Value::Object(doc)
}

fn place_to_json(p: &Place) -> Value {
    match p {
        Place::Infinite => json!("inf"),
        Place::Finite(poly) => json!(poly.coeffs()),
    }
}

fn plan_to_json(plan: &EvaluationPlan) -> Value {
    let divisor: Vec<Value> = plan
        .divisor
        .terms()
        .map(|(p, a)| json!({"place": place_to_json(p), "coefficient": a}))
        .collect();
    json!({
        "places": plan.places.iter().map(|(p, _)| place_to_json(p)).collect::<Vec<_>>(),
        "multiplicities": plan.places.iter().map(|(_, u)| *u).collect::<Vec<_>>(),
        "divisor": divisor,
    })
}

/// Pretty-printed document with a trailing newline.
pub fn export_algorithm(alg: &SymmetricBilinearAlgorithm) -> String {
    let mut s = serde_json::to_string_pretty(&algorithm_to_json(alg)).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(format!("missing field {key:?}")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| schema(format!("{what} must be a non-negative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(format!("{what} must be an array")))
}

fn digits(v: &Value, bound: u64, what: &str) -> Result<Vec<u32>> {
    as_array(v, what)?
        .iter()
        .map(|x| {
            let c = as_u64(x, what)?;
            if c >= bound {
                return Err(schema(format!("{what}: entry {c} is not below {bound}")));
            }
            Ok(c as u32)
        })
        .collect()
}

fn vector(v: &Value, field: &FieldSpec, n: usize, what: &str) -> Result<Vec<u32>> {
    let out = digits(v, field.order() as u64, what)?;
    if out.len() != n {
        return Err(schema(format!("{what} must have {n} entries")));
    }
    Ok(out)
}

fn place_from_json(v: &Value, field: &FieldSpec) -> Result<Place> {
    if v.as_str() == Some("inf") {
        return Ok(Place::Infinite);
    }
    let coeffs = digits(v, field.order() as u64, "place")?;
    let poly = Polynomial::from_coeffs(field, coeffs)?;
    if poly.degree().unwrap_or(0) == 0 || !poly.is_monic() {
        return Err(schema("place polynomial must be monic of positive degree"));
    }
    Place::finite(poly)
}

fn plan_from_json(v: &Value, field: &FieldSpec, q_place: &Polynomial, n: usize) -> Result<EvaluationPlan> {
    let obj = v.as_object().ok_or_else(|| schema("plan must be an object or null"))?;
    let places = as_array(get(obj, "places")?, "places")?;
    let mults = as_array(get(obj, "multiplicities")?, "multiplicities")?;
    if places.len() != mults.len() {
        return Err(schema("places and multiplicities differ in length"));
    }
    let mut pairs = Vec::with_capacity(places.len());
    for (p, u) in places.iter().zip(mults) {
        let u = as_u64(u, "multiplicity")?;
        if u == 0 {
            return Err(schema("multiplicities must be positive"));
        }
        pairs.push((place_from_json(p, field)?, u as usize));
    }
    let mut divisor = Divisor::zero();
    for t in as_array(get(obj, "divisor")?, "divisor")? {
        let t = t.as_object().ok_or_else(|| schema("divisor terms must be objects"))?;
        let a = get(t, "coefficient")?
            .as_i64()
            .ok_or_else(|| schema("divisor coefficient must be an integer"))?;
        if a == 0 {
            return Err(schema("divisor coefficients must be nonzero"));
        }
        divisor.add_term(place_from_json(get(t, "place")?, field)?, a);
    }
    Ok(EvaluationPlan {
        field: field.clone(),
        n,
        q_place: q_place.clone(),
        divisor,
        places: pairs,
    })
}

/// Parses a document, checking shapes, ranges and the irreducibility of `Q`.
/// The algorithm itself is not re-verified.
pub fn import_algorithm(text: &str) -> Result<SymmetricBilinearAlgorithm> {
    let doc: Value = serde_json::from_str(text).map_err(|e| schema(format!("invalid JSON: {e}")))?;
    let obj = doc.as_object().ok_or_else(|| schema("top level must be an object"))?;
    const KEYS: [&str; 7] = ["q", "n", "base_modulus", "modulus_Q", "rank", "terms", "plan"];
    if let Some(extra) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(schema(format!("unexpected field {extra:?}")));
    }
    let q = as_u64(get(obj, "q")?, "q")?;
    let (p, k) = prime_power(q).ok_or_else(|| schema(format!("q = {q} is not a prime power")))?;
    let field = match obj.get("base_modulus") {
        Some(m) if k > 1 => make_field(p, k, Some(&digits(m, p, "base_modulus")?))?,
        None if k == 1 => make_field(p, 1, None)?,
        Some(_) => return Err(schema("base_modulus given for a prime field")),
        None => return Err(schema("base_modulus required when q is not prime")),
    };
    let n = as_u64(get(obj, "n")?, "n")? as usize;
    if n == 0 {
        return Err(schema("n must be positive"));
    }
    let modulus = Polynomial::from_coeffs(&field, digits(get(obj, "modulus_Q")?, q, "modulus_Q")?)?;
    if modulus.degree() != Some(n) || !modulus.is_monic() {
        return Err(schema(format!("modulus_Q must be monic of degree {n}")));
    }
    if !is_irreducible(&modulus)? {
        return Err(Error::ReducibleModulus);
    }
    let terms: Vec<BilinearTerm> = as_array(get(obj, "terms")?, "terms")?
        .iter()
        .map(|t| {
            let t = t.as_object().ok_or_else(|| schema("terms must be objects"))?;
            Ok(BilinearTerm {
                phi: vector(get(t, "phi")?, &field, n, "phi")?,
                w: vector(get(t, "w")?, &field, n, "w")?,
            })
        })
        .collect::<Result<_>>()?;
    if as_u64(get(obj, "rank")?, "rank")? != terms.len() as u64 {
        return Err(schema("rank differs from the number of terms"));
    }
    let plan = match get(obj, "plan")? {
        Value::Null => None,
        v => Some(plan_from_json(v, &field, &modulus, n)?),
    };
    Ok(SymmetricBilinearAlgorithm {
        field,
        n,
        modulus,
        terms,
        plan,
    })
}
