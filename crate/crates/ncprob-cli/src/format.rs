//! JSON encodings. Rationals are `"p/q"` strings (plain integers accepted on
//! input); words are symbol names joined by single spaces, `""` is the unit.

use std::collections::BTreeMap;

use ncprob::cumulants::{CumulantKind, CumulantTable, Cumulants};
use ncprob::fock::{Matrix, MatrixStateModel};
use ncprob::freeprod::{MultiMomentFunctional, StateTriple, Symbol};
use ncprob::kind::Component;
use ncprob::series::MomentSequence;
use ncprob::Rational;
use serde_json::{json, Map, Value};

pub type ParseResult<T> = Result<T, String>;

pub fn rational(v: &Value) -> ParseResult<Rational> {
    match v {
        Value::String(s) => s.trim().parse::<Rational>().map_err(|_| format!("not a rational: {s:?}")),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| format!("only integer JSON numbers are exact, got {n}")),
        other => Err(format!("expected a rational, got {other}")),
    }
}

pub fn rational_str(s: &str) -> ParseResult<Rational> {
    rational(&Value::String(s.to_string()))
}

pub fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn field<'a>(v: &'a Value, key: &str) -> ParseResult<&'a Value> {
    v.get(key).ok_or_else(|| format!("missing field {key:?}"))
}

fn usize_field(v: &Value, key: &str) -> ParseResult<usize> {
    field(v, key)?.as_u64().map(|n| n as usize).ok_or_else(|| format!("field {key:?} must be a nonnegative integer"))
}

fn array<'a>(v: &'a Value, what: &str) -> ParseResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| format!("{what} must be an array"))
}

/// `{"truncation": N, "coeffs": [m₀, …, m_N]}`.
pub fn moments_from_json(v: &Value) -> ParseResult<MomentSequence> {
    let n = usize_field(v, "truncation")?;
    let coeffs = array(field(v, "coeffs")?, "coeffs")?.iter().map(rational).collect::<ParseResult<Vec<_>>>()?;
    if coeffs.len() != n + 1 {
        return Err(format!("truncation {n} needs {} coefficients, found {}", n + 1, coeffs.len()));
    }
    MomentSequence::new(coeffs).map_err(|e| e.to_string())
}

pub fn moments_to_json(m: &MomentSequence) -> Value {
    json!({ "truncation": m.degree(), "coeffs": m.moments().iter().map(rat).collect::<Vec<_>>() })
}

fn word_key(alphabet: &[String], w: &[Symbol]) -> String {
    w.iter().map(|&s| alphabet[s as usize].as_str()).collect::<Vec<_>>().join(" ")
}

fn parse_word(alphabet: &[String], key: &str) -> ParseResult<Vec<Symbol>> {
    key.split_whitespace()
        .map(|name| {
            alphabet
                .iter()
                .position(|a| a == name)
                .map(|i| i as Symbol)
                .ok_or_else(|| format!("unknown symbol {name:?} in word {key:?}"))
        })
        .collect()
}

fn alphabet_field(v: &Value) -> ParseResult<Vec<String>> {
    array(field(v, "alphabet")?, "alphabet")?
        .iter()
        .map(|s| s.as_str().map(str::to_string).ok_or_else(|| "alphabet entries must be strings".to_string()))
        .collect()
}

fn word_values(v: &Value, alphabet: &[String]) -> ParseResult<BTreeMap<Vec<Symbol>, Rational>> {
    let obj = field(v, "values")?.as_object().ok_or("values must be an object")?;
    let mut out = BTreeMap::new();
    for (k, x) in obj {
        out.insert(parse_word(alphabet, k)?, rational(x)?);
    }
    Ok(out)
}

fn values_json(alphabet: &[String], values: &BTreeMap<Vec<Symbol>, Rational>) -> Value {
    // shortlex order, matching the library's word enumeration
    let mut entries: Vec<(&Vec<Symbol>, &Rational)> = values.iter().collect();
    entries.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(b.0)));
    let mut m = Map::new();
    for (w, x) in entries {
        m.insert(word_key(alphabet, w), rat(x));
    }
    Value::Object(m)
}

/// `{"alphabet": [...], "truncation": N, "values": {"": "1", "x": ..., "x y": ...}}`.
pub fn functional_from_json(v: &Value) -> ParseResult<MultiMomentFunctional> {
    let alphabet = alphabet_field(v)?;
    let n = usize_field(v, "truncation")?;
    let values = word_values(v, &alphabet)?;
    MultiMomentFunctional::new(alphabet, n, values).map_err(|e| e.to_string())
}

pub fn functional_to_json(f: &MultiMomentFunctional) -> Value {
    json!({
        "alphabet": f.alphabet(),
        "truncation": f.truncation(),
        "values": values_json(f.alphabet(), f.values()),
    })
}

pub fn component_name(c: Component) -> &'static str {
    match c {
        Component::Phi => "phi",
        Component::Psi => "psi",
        Component::Theta => "theta",
    }
}

/// `{"phi": F, "psi": F, "theta": F}`, or single-variable
/// `{"lambda": M, "mu": M, "nu": M}` with moment objects.
pub fn triple_from_json(v: &Value) -> ParseResult<StateTriple> {
    if v.get("lambda").is_some() {
        let m = |k: &str| moments_from_json(field(v, k)?);
        return StateTriple::from_moments(&m("lambda")?, &m("mu")?, &m("nu")?).map_err(|e| e.to_string());
    }
    let f = |k: &str| functional_from_json(field(v, k)?);
    StateTriple::new(f("phi")?, f("psi")?, f("theta")?).map_err(|e| e.to_string())
}

pub fn triple_to_json(t: &StateTriple) -> Value {
    json!({
        "phi": functional_to_json(&t.phi),
        "psi": functional_to_json(&t.psi),
        "theta": functional_to_json(&t.theta),
    })
}

pub fn table_to_json(t: &CumulantTable) -> Value {
    json!({
        "kind": t.kind().name(),
        "alphabet": t.alphabet(),
        "truncation": t.truncation(),
        "values": values_json(t.alphabet(), t.values()),
    })
}

pub fn table_from_json(v: &Value, kind: CumulantKind) -> ParseResult<CumulantTable> {
    let alphabet = alphabet_field(v)?;
    let n = usize_field(v, "truncation")?;
    let values = word_values(v, &alphabet)?;
    CumulantTable::new(kind, alphabet, n, values).map_err(|e| e.to_string())
}

pub fn cumulants_to_json(c: &Cumulants) -> Value {
    json!({
        "I": table_to_json(&c.indented),
        "OF": table_to_json(&c.ofree),
        "AOF": table_to_json(&c.antiofree),
    })
}

pub fn cumulants_from_json(v: &Value) -> ParseResult<Cumulants> {
    let t = |k: CumulantKind| table_from_json(field(v, k.name())?, k);
    Ok(Cumulants { indented: t(CumulantKind::I)?, ofree: t(CumulantKind::OF)?, antiofree: t(CumulantKind::AOF)? })
}

fn matrix(v: &Value, dim: usize) -> ParseResult<Matrix> {
    let rows = array(v, "matrix")?;
    let m = rows
        .iter()
        .map(|r| array(r, "matrix row")?.iter().map(rational).collect::<ParseResult<Vec<_>>>())
        .collect::<ParseResult<Matrix>>()?;
    if m.len() != dim || m.iter().any(|r| r.len() != dim) {
        return Err(format!("matrices must be {dim}×{dim}"));
    }
    Ok(m)
}

/// `{"dim": d, "pi": {"x": [[...]]}, "sigma": {...}, "rho": {...}}`; a missing
/// `sigma` or `rho` repeats `pi`.
pub fn fixture_from_json(v: &Value) -> ParseResult<MatrixStateModel> {
    let dim = usize_field(v, "dim")?;
    let pi = field(v, "pi")?.as_object().ok_or("pi must map generator names to matrices")?;
    let alphabet: Vec<String> = pi.keys().cloned().collect();
    let rep = |key: &str| -> ParseResult<Vec<Matrix>> {
        let obj = match v.get(key) {
            Some(o) => o.as_object().ok_or_else(|| format!("{key} must map generator names to matrices"))?,
            None => pi,
        };
        alphabet
            .iter()
            .map(|s| matrix(obj.get(s).ok_or_else(|| format!("{key} has no matrix for {s:?}"))?, dim))
            .collect()
    };
    MatrixStateModel::new(dim, alphabet.clone(), rep("pi")?, rep("sigma")?, rep("rho")?).map_err(|e| e.to_string())
}
