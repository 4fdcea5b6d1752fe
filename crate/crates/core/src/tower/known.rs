//! Externally supplied bounds for small `n`.
//!
//! The file is a JSON object mapping decimal `n ≥ 2` to
//! `{"value": <non-negative integer>, "source": <string>}`.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownValue {
    pub value: u64,
    pub source: String,
}

pub type KnownValues = BTreeMap<u64, KnownValue>;

pub fn parse_known_values(text: &str) -> Result<KnownValues> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Schema(format!("invalid JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Schema("top level must be an object".into()))?;
    let mut out = KnownValues::new();
    for (key, entry) in obj {
        let n: u64 = key
            .parse()
            .map_err(|_| Error::Schema(format!("key {key:?} is not a decimal integer")))?;
        if n < 2 || key != &n.to_string() {
            return Err(Error::Schema(format!("key {key:?} must be a canonical integer >= 2")));
        }
        let entry = entry
            .as_object()
            .ok_or_else(|| Error::Schema(format!("entry {n} must be an object")))?;
        let value = entry
            .get("value")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Schema(format!("entry {n}: \"value\" must be a non-negative integer")))?;
        let source = entry
            .get("source")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Schema(format!("entry {n}: \"source\" string is required")))?;
        if let Some(extra) = entry.keys().find(|k| *k != "value" && *k != "source") {
            return Err(Error::Schema(format!("entry {n}: unexpected field {extra:?}")));
        }
        out.insert(
            n,
            KnownValue {
                value,
                source: source.to_string(),
            },
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_and_rejects() {
        let t = parse_known_values(r#"{"2": {"value": 3, "source": "Winograd equality"}}"#).unwrap();
        assert_eq!(t[&2].value, 3);
        for bad in [
            r#"{"0": {"value": 1, "source": "x"}}"#,
            r#"{"2": {"value": 3}}"#,
            r#"{"2": {"value": 3.5, "source": "x"}}"#,
            r#"{"02": {"value": 3, "source": "x"}}"#,
            r#"{"two": {"value": 3, "source": "x"}}"#,
            r#"[1, 2]"#,
            r#"{"2": {"value": 3, "source": "x", "note": 1}}"#,
        ] {
            assert!(matches!(parse_known_values(bad), Err(Error::Schema(_))), "{bad}");
        }
    }
}
