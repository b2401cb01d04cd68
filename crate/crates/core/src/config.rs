//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Cutoff keys are
//! `phi.a`, `phi.b`, `phi.a2`, `phi.b2`, `cone.M`, `window.M1`, `lp.J`; run
//! keys are `n`, `h` (comma list), `t`, `s`, `c`, `M`, `p`, `q`,
//! `localization`, `grid.theta`, `grid.omega`, `seed`, `out`.

use crate::cutoffs::CutoffParams;
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::path::Path;

/// Parsed file contents, keys in file order irrelevant.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub entries: BTreeMap<String, String>,
}

const CUTOFF_KEYS: [&str; 7] = ["phi.a", "phi.b", "phi.a2", "phi.b2", "cone.M", "window.M1", "lp.J"];
const RUN_KEYS: [&str; 13] = ["n", "h", "t", "s", "c", "M", "p", "q", "localization", "grid.theta", "grid.omega", "seed", "out"];

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", no + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !CUTOFF_KEYS.contains(&k) && !RUN_KEYS.contains(&k) {
                return Err(Error::Parse(format!("line {}: unknown key '{k}'", no + 1)));
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::Parse(format!("line {}: duplicate key '{k}'", no + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|_| Error::Parse(format!("bad value '{v}' for '{key}'"))))
            .transpose()
    }

    pub fn list_f64(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key).map(parse_f64_list).transpose()
    }

    /// Cutoff parameters with defaults for missing keys.
    pub fn cutoff_params(&self) -> Result<CutoffParams> {
        let d = CutoffParams::default();
        Ok(CutoffParams {
            phi_a: self.parsed("phi.a")?.unwrap_or(d.phi_a),
            phi_b: self.parsed("phi.b")?.unwrap_or(d.phi_b),
            phi_a2: self.parsed("phi.a2")?.unwrap_or(d.phi_a2),
            phi_b2: self.parsed("phi.b2")?.unwrap_or(d.phi_b2),
            cone_m: self.parsed("cone.M")?.unwrap_or(d.cone_m),
            window_m1: self.parsed("window.M1")?.unwrap_or(d.window_m1),
            lp_j: self.parsed("lp.J")?.unwrap_or(d.lp_j),
        })
    }
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{x}' in list '{s}'"))))
        .collect()
}
