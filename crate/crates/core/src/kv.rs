//! Flat `key = value` documents, one pair per line, `#` starts a comment.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub fn parse(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value', got '{raw}'", lineno + 1)))?;
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(Error::Config(format!("line {}: empty key or value", lineno + 1)));
        }
        if map.insert(key.clone(), value.to_string()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key '{key}'", lineno + 1)));
        }
    }
    Ok(map)
}

pub fn optional_real(map: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>> {
    map.get(key)
        .map(|v| v.parse::<f64>().map_err(|_| Error::Config(format!("key '{key}': '{v}' is not a number"))))
        .transpose()
}

pub fn required_real(map: &BTreeMap<String, String>, key: &str) -> Result<f64> {
    optional_real(map, key)?.ok_or_else(|| Error::Config(format!("missing key '{key}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blanks() {
        let map = parse("# header\n\nd = 3 # inline\nt-min=0.5\n").unwrap();
        assert_eq!(map["d"], "3");
        assert_eq!(map["t_min"], "0.5");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("d 3\n").is_err());
        assert!(parse("d = \n").is_err());
        assert!(parse("d = 1\nd = 2\n").is_err());
    }
}
