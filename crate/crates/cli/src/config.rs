//! Suite configuration: a flat `key = value` file with command-line overrides.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Parser;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {value}")]
    BadValue { key: String, value: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Aw,
    Qracah,
    Little,
    Big,
    Limits,
    Selberg,
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "aw" => Suite::Aw,
            "qracah" => Suite::Qracah,
            "little" => Suite::Little,
            "big" => Suite::Big,
            "limits" => Suite::Limits,
            "selberg" => Suite::Selberg,
            _ => return Err(format!("unknown suite `{s}`")),
        })
    }
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Aw => "aw",
            Suite::Qracah => "qracah",
            Suite::Little => "little",
            Suite::Big => "big",
            Suite::Limits => "limits",
            Suite::Selberg => "selberg",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format `{s}`")),
        }
    }
}

/// A complete, validated suite configuration. Complex parameters are stored
/// as `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub n: usize,
    pub max_deg: u32,
    pub q: f64,
    pub t: f64,
    pub tt: [[f64; 2]; 4],
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub big_n: u32,
    pub m: usize,
    pub depth: u32,
    pub tol: f64,
    pub kmax: u32,
    pub eps0: f64,
    pub seed: u64,
}

impl SuiteConfig {
    /// Shipped defaults for a suite; chosen to stay clear of eigenvalue
    /// collisions and parameter-domain boundaries.
    pub fn defaults(suite: Suite) -> Self {
        let mut c = SuiteConfig {
            suite,
            n: 2,
            max_deg: 2,
            q: 0.5,
            t: 0.3,
            tt: [[0.5, 0.0], [-0.4, 0.0], [0.3, 0.2], [0.3, -0.2]],
            a: 0.3,
            b: 0.2,
            c: 1.0,
            d: 0.7,
            big_n: 2,
            m: 64,
            depth: 400,
            tol: 1e-6,
            kmax: 15,
            eps0: 1.0,
            seed: 7,
        };
        match suite {
            Suite::Aw => {}
            Suite::Qracah => c.tt = [[0.4, 0.2], [-0.3, 0.1], [0.2, -0.35], [0.0, 0.0]],
            Suite::Little => c.t = 0.25,
            Suite::Big => {}
            Suite::Limits => {
                c.t = 0.5f64.powf(0.3);
                c.kmax = 20;
            }
            Suite::Selberg => c.n = 1,
        }
        c
    }

    pub fn t_param(&self, i: usize) -> C64 {
        C64::new(self.tt[i][0], self.tt[i][1])
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(1..=3).contains(&self.n) {
            return Err(ConfigError::Invalid(format!("n = {} outside 1..=3", self.n)));
        }
        if !(self.tol > 0.0) {
            return Err(ConfigError::Invalid("tolerance must be positive".into()));
        }
        if !(self.q > 0.0 && self.q < 1.0 && self.t > 0.0 && self.t < 1.0) {
            return Err(ConfigError::Invalid("q and t must lie in (0, 1)".into()));
        }
        if self.depth == 0 || self.m < 8 {
            return Err(ConfigError::Invalid("depth and M too small".into()));
        }
        if self.kmax == 0 || self.kmax > 20 || !(self.eps0 > 0.0) {
            return Err(ConfigError::Invalid("kmax must lie in 1..=20 and eps0 be positive".into()));
        }
        Ok(())
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = || ConfigError::BadValue { key: key.to_string(), value: value.to_string() };
        let f = |v: &str| v.parse::<f64>().map_err(|_| bad());
        match key {
            "suite" => self.suite = value.parse().map_err(|_| bad())?,
            "n" => self.n = value.parse().map_err(|_| bad())?,
            "max_deg" => self.max_deg = value.parse().map_err(|_| bad())?,
            "q" => self.q = f(value)?,
            "t" => self.t = f(value)?,
            "t0" | "t1" | "t2" | "t3" => {
                let i = (key.as_bytes()[1] - b'0') as usize;
                self.tt[i] = parse_complex(value).ok_or_else(bad)?;
            }
            "a" => self.a = f(value)?,
            "b" => self.b = f(value)?,
            "c" => self.c = f(value)?,
            "d" => self.d = f(value)?,
            "N" | "big_n" => self.big_n = value.parse().map_err(|_| bad())?,
            "M" | "m" => self.m = value.parse().map_err(|_| bad())?,
            "depth" => self.depth = value.parse().map_err(|_| bad())?,
            "tol" => self.tol = f(value)?,
            "kmax" => self.kmax = value.parse().map_err(|_| bad())?,
            "eps0" => self.eps0 = f(value)?,
            "seed" => self.seed = value.parse().map_err(|_| bad())?,
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// The settings as an ordered key/value map, for echoing in reports.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("suite", self.suite.name().into());
        put("n", self.n.to_string());
        put("max_deg", self.max_deg.to_string());
        put("q", self.q.to_string());
        put("t", self.t.to_string());
        for (i, x) in self.tt.iter().enumerate() {
            put(&format!("t{i}"), format!("{},{}", x[0], x[1]));
        }
        put("a", self.a.to_string());
        put("b", self.b.to_string());
        put("c", self.c.to_string());
        put("d", self.d.to_string());
        put("N", self.big_n.to_string());
        put("M", self.m.to_string());
        put("depth", self.depth.to_string());
        put("tol", self.tol.to_string());
        put("kmax", self.kmax.to_string());
        put("eps0", self.eps0.to_string());
        put("seed", self.seed.to_string());
        m
    }
}

/// `re` or `re,im`.
fn parse_complex(s: &str) -> Option<[f64; 2]> {
    let mut it = s.split(',').map(|x| x.trim().parse::<f64>());
    let re = it.next()?.ok()?;
    let im = match it.next() {
        Some(v) => v.ok()?,
        None => 0.0,
    };
    if it.next().is_some() {
        return None;
    }
    Some([re, im])
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

#[derive(Debug, Parser)]
#[command(name = "qortho", about = "Certify orthogonality, norm and constant-term identities numerically")]
pub struct Cli {
    /// Configuration file with `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub suite: Option<Suite>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "max-deg")]
    pub max_deg: Option<u32>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    /// `re` or `re,im`.
    #[arg(long)]
    pub t0: Option<String>,
    #[arg(long)]
    pub t1: Option<String>,
    #[arg(long)]
    pub t2: Option<String>,
    #[arg(long)]
    pub t3: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long = "N")]
    pub big_n: Option<u32>,
    #[arg(long = "M")]
    pub m: Option<usize>,
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub kmax: Option<u32>,
    #[arg(long)]
    pub eps0: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    pub format: Format,
}

impl Cli {
    /// Defaults of the selected suite, then the file, then the flags.
    pub fn resolve(&self) -> Result<SuiteConfig, ConfigError> {
        let file = match &self.config {
            Some(path) => parse_kv(&std::fs::read_to_string(path)?)?,
            None => Vec::new(),
        };
        let suite = match self.suite {
            Some(s) => s,
            None => match file.iter().rev().find(|(k, _)| k == "suite") {
                Some((_, v)) => v.parse().map_err(|_| ConfigError::BadValue { key: "suite".into(), value: v.clone() })?,
                None => return Err(ConfigError::Invalid("no suite given".into())),
            },
        };
        let mut cfg = SuiteConfig::defaults(suite);
        for (k, v) in &file {
            cfg.set(k, v)?;
        }
        cfg.suite = suite;
        let flags: [(&str, Option<String>); 19] = [
            ("n", self.n.map(|x| x.to_string())),
            ("max_deg", self.max_deg.map(|x| x.to_string())),
            ("q", self.q.map(|x| x.to_string())),
            ("t", self.t.map(|x| x.to_string())),
            ("t0", self.t0.clone()),
            ("t1", self.t1.clone()),
            ("t2", self.t2.clone()),
            ("t3", self.t3.clone()),
            ("a", self.a.map(|x| x.to_string())),
            ("b", self.b.map(|x| x.to_string())),
            ("c", self.c.map(|x| x.to_string())),
            ("d", self.d.map(|x| x.to_string())),
            ("N", self.big_n.map(|x| x.to_string())),
            ("M", self.m.map(|x| x.to_string())),
            ("depth", self.depth.map(|x| x.to_string())),
            ("tol", self.tol.map(|x| x.to_string())),
            ("kmax", self.kmax.map(|x| x.to_string())),
            ("eps0", self.eps0.map(|x| x.to_string())),
            ("seed", self.seed.map(|x| x.to_string())),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                cfg.set(k, &v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
