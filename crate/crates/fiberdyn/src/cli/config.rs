//! Flat `key = value` configuration with dotted keys.
//!
//! ```text
//! # comment
//! system.id = monopole
//! system.params.n = 1.0
//! initial.x = 1, 0, 0
//! ```
//!
//! Every key must be read by the scenario builder; [`Config::finish`]
//! rejects the first unread key with its line number.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use crate::liealg::GroupPoint;
use crate::{Error, Result, Vec3, Vec4};

#[derive(Clone, Debug)]
struct Entry {
    line: usize,
    value: String,
}

#[derive(Debug, Default)]
pub struct Config {
    entries: BTreeMap<String, Entry>,
    used: RefCell<BTreeSet<String>>,
}

fn valid_key(k: &str) -> bool {
    !k.is_empty()
        && k.split('.').all(|part| {
            !part.is_empty()
                && part
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        })
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                return Err(Error::Config {
                    line,
                    msg: format!("expected `key = value`, found `{body}`"),
                });
            };
            let (k, v) = (k.trim(), v.trim());
            if !valid_key(k) {
                return Err(Error::Config {
                    line,
                    msg: format!("invalid key `{k}`"),
                });
            }
            if v.is_empty() {
                return Err(Error::Config {
                    line,
                    msg: format!("empty value for `{k}`"),
                });
            }
            if let Some(prev) = entries.insert(
                k.to_string(),
                Entry {
                    line,
                    value: v.to_string(),
                },
            ) {
                return Err(Error::Config {
                    line,
                    msg: format!("`{k}` already set on line {}", prev.line),
                });
            }
        }
        Ok(Config {
            entries,
            used: RefCell::default(),
        })
    }

    /// Builds a config from `(key, value)` pairs, numbered as lines.
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Result<Config> {
        let text: Vec<String> = pairs.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        Config::parse(&text.join("\n"))
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    /// Line of `key`, or 0 when absent.
    pub fn line(&self, key: &str) -> usize {
        self.entries.get(key).map(|e| e.line).unwrap_or(0)
    }

    pub fn error(&self, key: &str, msg: impl Into<String>) -> Error {
        Error::Config {
            line: self.line(key),
            msg: format!("{key}: {}", msg.into()),
        }
    }

    pub fn str(&self, key: &str) -> Option<&str> {
        let e = self.entries.get(key)?;
        self.used.borrow_mut().insert(key.to_string());
        Some(e.value.as_str())
    }

    pub fn require_str(&self, key: &str) -> Result<&str> {
        self.str(key).ok_or_else(|| Error::Config {
            line: 0,
            msg: format!("missing required key `{key}`"),
        })
    }

    fn numbers(&self, key: &str) -> Result<Option<Vec<f64>>> {
        let Some(v) = self.str(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| self.error(key, format!("`{}` is not a number", x.trim())))
            })
            .collect::<Result<Vec<f64>>>()
            .map(Some)
    }

    fn fixed<const N: usize>(&self, key: &str) -> Result<Option<[f64; N]>> {
        match self.numbers(key)? {
            None => Ok(None),
            Some(v) if v.len() == N => Ok(Some(std::array::from_fn(|i| v[i]))),
            Some(v) => Err(self.error(
                key,
                format!("expected {N} comma-separated numbers, found {}", v.len()),
            )),
        }
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        Ok(self.fixed::<1>(key)?.map(|[x]| x))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.f64(key)?.ok_or_else(|| Error::Config {
            line: 0,
            msg: format!("missing required key `{key}`"),
        })
    }

    pub fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.numbers(key)
    }

    pub fn vec3(&self, key: &str) -> Result<Option<Vec3>> {
        Ok(self.fixed::<3>(key)?.map(Vec3::from))
    }

    pub fn vec3_or(&self, key: &str, default: Vec3) -> Result<Vec3> {
        Ok(self.vec3(key)?.unwrap_or(default))
    }

    pub fn require_vec3(&self, key: &str) -> Result<Vec3> {
        self.vec3(key)?.ok_or_else(|| Error::Config {
            line: 0,
            msg: format!("missing required key `{key}`"),
        })
    }

    pub fn vec4(&self, key: &str) -> Result<Option<Vec4>> {
        Ok(self.fixed::<4>(key)?.map(Vec4::from))
    }

    pub fn coeffs6(&self, key: &str) -> Result<Option<[f64; 6]>> {
        self.fixed::<6>(key)
    }

    /// Unit quaternion `w, a, b, c`; normalized, identity when absent.
    pub fn group_point(&self, key: &str) -> Result<GroupPoint> {
        match self.fixed::<4>(key)? {
            None => Ok(GroupPoint::IDENTITY),
            Some([w, a, b, c]) => {
                GroupPoint::new(w, a, b, c).map_err(|e| self.error(key, e.to_string()))
            }
        }
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>> {
        let Some(v) = self.str(key) else {
            return Ok(None);
        };
        v.parse()
            .map(Some)
            .map_err(|_| self.error(key, format!("`{v}` is not an unsigned integer")))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.u64(key)?.map(|v| v as usize).unwrap_or(default))
    }

    /// Marks every key under `prefix.` as read and returns `(suffix, value)`.
    pub fn section(&self, prefix: &str) -> Vec<(String, String)> {
        let p = format!("{prefix}.");
        let hits: Vec<(String, String)> = self
            .entries
            .iter()
            .filter_map(|(k, e)| k.strip_prefix(&p).map(|s| (s.to_string(), e.value.clone())))
            .collect();
        let mut used = self.used.borrow_mut();
        for (s, _) in &hits {
            used.insert(format!("{p}{s}"));
        }
        hits
    }

    /// Fails on the first key (by line) that was never read.
    pub fn finish(&self) -> Result<()> {
        let used = self.used.borrow();
        let unknown = self
            .entries
            .iter()
            .filter(|(k, _)| !used.contains(*k))
            .min_by_key(|(_, e)| e.line);
        match unknown {
            Some((k, e)) => Err(Error::Config {
                line: e.line,
                msg: format!("unknown key `{k}`"),
            }),
            None => Ok(()),
        }
    }
}
