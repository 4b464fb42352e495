//! JSON encodings of carrier elements, states and distributions.

use num_bigint::BigUint;
use serde_json::{json, Value};

use super::config::StateEntry;
use super::CliError;
use crate::algebra::{Algebra, FiniteAlgebra};
use crate::chem::{parse_lambda, DivisionAlgebra, LambdaAlgebra, ModularGroup, StringMonoid, TableAlgebra};
use crate::dist::Distribution;
use crate::multiset::Multiset;

/// An algebra whose carrier elements have a JSON form.
pub trait JsonCarrier: Algebra {
    fn encode(&self, e: &Self::Elem) -> Value;
    fn decode(&self, v: &Value) -> Result<Self::Elem, String>;

    /// The whole carrier, when it is finite.
    fn listed_elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }
}

fn expect_str(v: &Value) -> Result<&str, String> {
    v.as_str().ok_or_else(|| format!("expected a string, got {v}"))
}

/// Terms are written in `\x.body` syntax and printed canonically.
impl JsonCarrier for LambdaAlgebra {
    fn encode(&self, e: &Self::Elem) -> Value {
        Value::String(e.to_string())
    }

    fn decode(&self, v: &Value) -> Result<Self::Elem, String> {
        parse_lambda(expect_str(v)?).map_err(|e| e.to_string())
    }
}

/// Decimal strings; plain JSON integers are accepted on input.
impl JsonCarrier for DivisionAlgebra {
    fn encode(&self, e: &Self::Elem) -> Value {
        Value::String(e.to_str_radix(10))
    }

    fn decode(&self, v: &Value) -> Result<Self::Elem, String> {
        let n = match v {
            Value::Number(n) => n
                .as_u64()
                .map(BigUint::from)
                .ok_or_else(|| format!("{n} is not a positive integer"))?,
            other => {
                let s = expect_str(other)?;
                if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(format!("`{s}` is not a decimal integer"));
                }
                BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| format!("`{s}` is not a decimal integer"))?
            }
        };
        if n == BigUint::ZERO {
            return Err("0 is not in the carrier ℕ≥1".into());
        }
        Ok(n)
    }
}

impl JsonCarrier for TableAlgebra {
    fn encode(&self, e: &Self::Elem) -> Value {
        Value::String(e.clone())
    }

    fn decode(&self, v: &Value) -> Result<Self::Elem, String> {
        let s = expect_str(v)?;
        if self.contains(s) {
            Ok(s.to_string())
        } else {
            Err(format!("unknown state `{s}` (states: {})", self.states().join(", ")))
        }
    }

    fn listed_elements(&self) -> Option<Vec<Self::Elem>> {
        Some(self.elements())
    }
}

impl JsonCarrier for ModularGroup {
    fn encode(&self, e: &Self::Elem) -> Value {
        json!(e)
    }

    fn decode(&self, v: &Value) -> Result<Self::Elem, String> {
        match v.as_u64() {
            Some(x) if self.contains(x) => Ok(x),
            _ => Err(format!("{v} is not a residue mod {}", self.modulus())),
        }
    }

    fn listed_elements(&self) -> Option<Vec<Self::Elem>> {
        Some(self.elements())
    }
}

impl JsonCarrier for StringMonoid {
    fn encode(&self, e: &Self::Elem) -> Value {
        Value::String(e.clone())
    }

    fn decode(&self, v: &Value) -> Result<Self::Elem, String> {
        let s = expect_str(v)?;
        if self.contains(s) {
            Ok(s.to_string())
        } else {
            Err(format!("`{s}` uses letters outside the alphabet"))
        }
    }
}

/// `[{"element": …, "count": n}, …]` in canonical order.
pub fn encode_state<A: JsonCarrier + ?Sized>(alg: &A, state: &Multiset<A::Elem>) -> Value {
    Value::Array(
        state
            .iter()
            .map(|(e, n)| json!({"element": alg.encode(e), "count": n}))
            .collect(),
    )
}

pub fn decode_state<A: JsonCarrier + ?Sized>(alg: &A, entries: &[StateEntry]) -> Result<Multiset<A::Elem>, CliError> {
    let mut state = Multiset::new();
    for entry in entries {
        let e = alg
            .decode(&entry.element)
            .map_err(|msg| CliError::config(format!("bad element {}: {msg}", entry.element)))?;
        state.insert_many(e, entry.count);
    }
    Ok(state)
}

/// `[{"state": …, "num": "…", "den": "…"}, …]` in canonical order.
pub fn encode_distribution<A: JsonCarrier + ?Sized>(alg: &A, d: &Distribution<Multiset<A::Elem>>) -> Value {
    Value::Array(
        d.iter()
            .map(|(s, w)| {
                json!({
                    "state": encode_state(alg, s),
                    "num": w.numer().to_string(),
                    "den": w.denom().to_string(),
                })
            })
            .collect(),
    )
}
