//! Job configuration shared by flags and job files.
//!
//! A job file is a JSON object with the same field names as the long flags
//! (with `-` written as `_`). Flags given on the command line replace the
//! corresponding field of the file. After defaults are applied the resolved
//! configuration is hashed and embedded in every output.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;
use tilecount::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tile: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvatures: Option<Vec<i64>>,
    /// profiles at the orbifold points, one list per point
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<Vec<u32>>>,
    /// profiles at additional branch points
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profiles: Option<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connectivity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monomial: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hexagon_index: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criteria: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const DEFAULT_MAX_ORDER: usize = 200;

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),*) => {
        $(if $top.$field.is_some() { $base.$field = $top.$field.clone(); })*
    };
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    /// Fields set in `top` replace those of `self`.
    pub fn overlay(mut self, top: &JobConfig) -> Self {
        overlay!(
            self, top, command, n, tile, curvatures, mu, extra, degree, profiles, brute_force, order, connectivity,
            method, fit, preset, weight_bound, margin, series, element, monomial, normalization, hexagon_index, dim,
            criteria, budget, max_order, format, output
        );
        self
    }

    pub fn budget(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_BUDGET)
    }

    pub fn max_order(&self) -> usize {
        self.max_order.unwrap_or(DEFAULT_MAX_ORDER)
    }

    pub fn format(&self) -> &str {
        self.format.as_deref().unwrap_or("json")
    }

    /// SHA-256 of the resolved configuration, leaving out where the output
    /// goes and how it is formatted.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        c.format = None;
        let text = serde_json::to_string(&c).expect("config serializes");
        format!("{:x}", Sha256::digest(text.as_bytes()))
    }

    pub fn require_order(&self, default: usize) -> Result<usize> {
        let order = self.order.unwrap_or(default);
        if order > self.max_order() {
            return Err(Error::Budget(format!("order {order} exceeds max_order {}", self.max_order())));
        }
        Ok(order)
    }
}

/// `"2,2,1,1"` into integers; the empty string is the empty list.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| Error::Parse(format!("bad list entry '{x}' in '{s}'"))))
        .collect()
}

/// `"2,1;;3"` into one list per `;`-separated slot.
pub fn parse_slots(s: &str) -> Result<Vec<Vec<u32>>> {
    s.split(';').map(parse_list).collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_list::<i64>("2, 2,1,1").unwrap(), vec![2, 2, 1, 1]);
        assert!(parse_list::<i64>("").unwrap().is_empty());
        assert!(parse_list::<u32>("2,x").is_err());
        assert_eq!(parse_slots("2,1;;3").unwrap(), vec![vec![2, 1], vec![], vec![3]]);
    }

    #[test]
    fn flags_win_and_hash_ignores_output() {
        let file = JobConfig { order: Some(10), tile: Some("bihex".into()), ..Default::default() };
        let flags = JobConfig { order: Some(20), output: Some("x.json".into()), ..Default::default() };
        let c = file.overlay(&flags);
        assert_eq!(c.order, Some(20));
        assert_eq!(c.tile.as_deref(), Some("bihex"));
        let mut d = c.clone();
        d.output = None;
        assert_eq!(c.hash(), d.hash());
        d.order = Some(21);
        assert_ne!(c.hash(), d.hash());
    }

    #[test]
    fn job_files_reject_unknown_fields() {
        assert!(serde_json::from_str::<JobConfig>(r#"{"ordr": 3}"#).is_err());
        let c: JobConfig = serde_json::from_str(r#"{"command": "volume", "N": 3, "curvatures": [2,2,1,1]}"#).unwrap();
        assert_eq!(c.n, Some(3));
    }
}
