//! Settings resolved from a `key = value` config file and command-line flags.
//! Flags win on conflict.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gas::{GasSpec, Units};
use crate::kv;

const KNOWN_KEYS: &[&str] = &[
    "d", "sigma", "mass", "units", "density", "pressure", "t_min", "t_max", "points", "spacing", "relative", "columns",
    "t_list", "format", "level",
];

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    map: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let map = kv::parse(text)?;
        if let Some(bad) = map.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(Error::Config(format!("unknown config key '{bad}'")));
        }
        Ok(ConfigFile { map })
    }

    pub fn real(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => kv::optional_real(&self.map, key),
        }
    }

    pub fn string(&self, flag: Option<&str>, key: &str) -> Option<String> {
        flag.map(str::to_string).or_else(|| self.map.get(key).cloned())
    }

    pub fn count(&self, flag: Option<usize>, key: &str) -> Result<Option<usize>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self
                .map
                .get(key)
                .map(|v| v.parse().map_err(|_| Error::Config(format!("key '{key}': '{v}' is not a count"))))
                .transpose(),
        }
    }

    pub fn flag(&self, flag: bool, key: &str) -> Result<bool> {
        if flag {
            return Ok(true);
        }
        match self.map.get(key).map(String::as_str) {
            None | Some("false") => Ok(false),
            Some("true") => Ok(true),
            Some(v) => Err(Error::Config(format!("key '{key}': expected true or false, got '{v}'"))),
        }
    }

    pub fn gas_spec(
        &self,
        d: Option<f64>,
        sigma: Option<f64>,
        mass: Option<f64>,
        units: Option<&str>,
    ) -> Result<GasSpec> {
        let d = self.real(d, "d")?.ok_or_else(|| Error::Config("missing dimension (--d)".into()))?;
        let sigma = self.real(sigma, "sigma")?.ok_or_else(|| Error::Config("missing sigma (--sigma)".into()))?;
        let units: Units = match self.string(units, "units") {
            Some(u) => u.parse()?,
            None => Units::Natural,
        };
        let mass = match self.real(mass, "mass")? {
            Some(m) => m,
            None if units == Units::Si => {
                return Err(Error::Config("SI units need the particle mass in kg (--mass)".into()))
            }
            None => 1.0,
        };
        GasSpec::new(d, sigma, mass, units)
    }
}

/// `BOSE_EOS_THREADS`, if set.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("BOSE_EOS_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Config(format!("BOSE_EOS_THREADS must be a positive integer, got '{v}'"))),
        },
    }
}
