//! Sweep configuration: a TOML file with a list of jobs, each naming a
//! congruence id and the parameter values to sweep.
//!
//! ```toml
//! output = "reports"
//! parallelism = 4
//!
//! [[jobs]]
//! id = "1.3"
//! k = "0..20:2"
//! n = "1..6"
//! q = [1, 3, 5]
//!
//! [[jobs]]
//! id = "1.4"
//! p = 2
//! m = "3..5"
//! k = "0..20"
//! n = "1..3"
//! q = "1,3"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::registry::{lookup, Param};
use super::CliError;
use crate::characters::Parity;

/// A list of integers, written as `7`, `"1,3,5"`, `"0..20"` (inclusive),
/// `"0..20:2"` (with a step) or a TOML array.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Values(pub Vec<i64>);

impl Values {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn parse_int(s: &str) -> Result<i64, String> {
    s.trim().parse().map_err(|_| format!("not an integer: {s:?}"))
}

impl FromStr for Values {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if let Some((lo, rest)) = part.split_once("..") {
                let rest = rest.strip_prefix('=').unwrap_or(rest);
                let (hi, step) = match rest.split_once(':') {
                    Some((hi, step)) => (hi, parse_int(step)?),
                    None => (rest, 1),
                };
                if step <= 0 {
                    return Err(format!("step must be positive in {part:?}"));
                }
                let (lo, hi) = (parse_int(lo)?, parse_int(hi)?);
                let count = if hi >= lo { (hi - lo) / step + 1 } else { 0 };
                if count > 1_000_000 {
                    return Err(format!("range {part:?} is too long"));
                }
                out.extend((0..count).map(|i| lo + i * step));
            } else {
                out.push(parse_int(part)?);
            }
        }
        Ok(Values(out))
    }
}

impl fmt::Display for Values {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for Values {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Values {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            One(i64),
            Many(Vec<i64>),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::One(v) => Ok(Values(vec![v])),
            Raw::Many(v) => Ok(Values(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// One sweep job. Parameters the id does not use are ignored.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Values>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Values>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Values>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Values>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Values>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Values>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Values>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Values>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Values>,
    /// Character moduli (`"2^3"`, `"8"`) or single characters (`"2^3:0,1"`).
    /// Takes precedence over `p` and `m` as a character source.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primitive: Option<bool>,
}

impl Job {
    pub fn values(&self, param: Param) -> Option<&Values> {
        match param {
            Param::P => self.p.as_ref(),
            Param::M => self.m.as_ref(),
            Param::K => self.k.as_ref(),
            Param::L => self.l.as_ref(),
            Param::N => self.n.as_ref(),
            Param::Q => self.q.as_ref(),
            Param::A => self.a.as_ref(),
            Param::H => self.h.as_ref(),
            Param::D => self.d.as_ref(),
        }
    }

    fn slot(&mut self, param: Param) -> &mut Option<Values> {
        match param {
            Param::P => &mut self.p,
            Param::M => &mut self.m,
            Param::K => &mut self.k,
            Param::L => &mut self.l,
            Param::N => &mut self.n,
            Param::Q => &mut self.q,
            Param::A => &mut self.a,
            Param::H => &mut self.h,
            Param::D => &mut self.d,
        }
    }

    /// Replaces every parameter that `other` sets.
    pub fn override_with(&mut self, other: &Job) {
        for param in Param::ALL {
            if let Some(v) = other.values(param) {
                *self.slot(param) = Some(v.clone());
            }
        }
        if other.chi.is_some() {
            self.chi.clone_from(&other.chi);
        }
        if other.parity.is_some() {
            self.parity = other.parity;
        }
        if other.primitive.is_some() {
            self.primitive = other.primitive;
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let entry = lookup(&self.id).ok_or_else(|| CliError::Config(format!("unknown congruence id {:?}", self.id)))?;
        for param in Param::ALL {
            if matches!(self.values(param), Some(v) if v.is_empty()) {
                return Err(CliError::Config(format!("job {}: empty range for {param}", self.id)));
            }
        }
        for &param in entry.params {
            if self.values(param).is_none() {
                return Err(CliError::Config(format!("job {}: missing parameter {param}", self.id)));
            }
        }
        if entry.characters && self.chi.is_none() && (self.p.is_none() || self.m.is_none()) {
            return Err(CliError::Config(format!("job {}: needs chi, or both p and m", self.id)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Directory receiving `report.csv` and `report.jsonl`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Append-only cache of generalized Bernoulli numbers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallelism: Option<usize>,
    pub jobs: Vec<Job>,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.jobs.is_empty() {
            return Err(CliError::Config("no jobs".into()));
        }
        if self.parallelism == Some(0) {
            return Err(CliError::Config("parallelism must be positive".into()));
        }
        self.jobs.iter().try_for_each(Job::validate)
    }
}
