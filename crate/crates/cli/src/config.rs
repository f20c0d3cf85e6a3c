//! Run configuration: line-oriented `key = value` pairs with `#` comments.
//!
//! | key | default | meaning |
//! |---|---|---|
//! | `mesh.kind` | `grid` | `grid`, `partition`, `refined`, `delaunay` or `file` |
//! | `mesh.extents` | `1 1` | domain size per axis (`grid`, `partition`) |
//! | `mesh.counts` | required for `grid`, `partition` | cells per axis |
//! | `mesh.spread` | `0.5` | relative width variation (`partition`) |
//! | `mesh.h_boundary`, `mesh.h_interior`, `mesh.ramp` | `0.05`, `0.1`, `0.2` | `refined` sizing |
//! | `mesh.points` | `50` | interior points (`delaunay`) |
//! | `mesh.file` | required for `file` | mesh path, relative to the config |
//! | `material.epsilon`, `material.mu` | `1` | relative values; expressions in `x, y, z` are sampled per cell |
//! | `material.epsilon0`, `material.mu0` | `1` | unit constants (geometrized by default) |
//! | `run.scheme` | required | `yee`, `bk` or `avi` |
//! | `run.t_final` | required | end time (start is 0) |
//! | `run.dt` | from CFL | synchronous step |
//! | `run.dt_safety` | `0.5` | fraction of the CFL limit, in (0, 1] |
//! | `run.dt_rule` | `local` | AVI per-face steps: `local` or `uniform` |
//! | `run.jitter` | `0` | AVI step jitter |
//! | `run.seed` | `0` | seed for meshes, jitter and random fields |
//! | `run.instability_factor` | `1e6` | blow-up threshold relative to the initial norm |
//! | `init.kind` | `random` | `random`, `zero` or `fields` |
//! | `init.ex` .. `init.bz` | `0` | initial field components (`fields`) |
//! | `source.jx`, `source.jy`, `source.jz` | none | current density in `x, y, z, t` |
//! | `output.dir` | `out` | output directory, relative to the config |
//! | `output.record_every` | `1` | synchronous sampling cadence in steps |
//! | `output.sample_dt` | `0.01` | AVI sampling clock |
//! | `output.snapshot_every` | `0` | field dumps every this many samples |
//! | `output.probes` | none | `e<i>`, `f<i>`, `e@x,y[,z]`, `f@x,y[,z]` |
//! | `output.spectrum` | `false` | periodogram of the first probe |
//! | `output.prominence`, `output.neighborhood` | `10`, `1` | peak detection |

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::expr::Expr;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected 'key = value'")]
    Syntax { line: usize },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key '{key}'")]
    Duplicate { line: usize, key: String },
    #[error("missing required key '{0}'")]
    Missing(String),
    #[error("line {line}: {key}: expected {expected}, got '{value}'")]
    Type {
        line: usize,
        key: String,
        expected: String,
        value: String,
    },
    #[error("line {line}: {key}: {message}")]
    Invalid {
        line: usize,
        key: String,
        message: String,
    },
    #[error("{0}")]
    Mesh(String),
}

const KEYS: &[&str] = &[
    "mesh.kind",
    "mesh.extents",
    "mesh.counts",
    "mesh.spread",
    "mesh.h_boundary",
    "mesh.h_interior",
    "mesh.ramp",
    "mesh.points",
    "mesh.file",
    "material.epsilon",
    "material.mu",
    "material.epsilon0",
    "material.mu0",
    "run.scheme",
    "run.t_final",
    "run.dt",
    "run.dt_safety",
    "run.dt_rule",
    "run.jitter",
    "run.seed",
    "run.instability_factor",
    "init.kind",
    "init.ex",
    "init.ey",
    "init.ez",
    "init.bx",
    "init.by",
    "init.bz",
    "source.jx",
    "source.jy",
    "source.jz",
    "output.dir",
    "output.record_every",
    "output.sample_dt",
    "output.snapshot_every",
    "output.probes",
    "output.spectrum",
    "output.prominence",
    "output.neighborhood",
];

#[derive(Debug, Clone, PartialEq)]
pub enum MeshSpec {
    Grid { extents: Vec<f64>, counts: Vec<usize> },
    Partition { extents: Vec<f64>, counts: Vec<usize>, spread: f64 },
    Refined { h_boundary: f64, h_interior: f64, ramp: f64 },
    Delaunay { points: usize },
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Yee,
    Bk,
    Avi,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Yee => "yee",
            Scheme::Bk => "bk",
            Scheme::Avi => "avi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtRule {
    Local,
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitSpec {
    Random,
    Zero,
    /// `E` then `B` components.
    Fields { e: [Expr; 3], b: [Expr; 3] },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeSpec {
    Edge(usize),
    Face(usize),
    EdgeNear([f64; 3]),
    FaceNear([f64; 3]),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub mesh: MeshSpec,
    pub epsilon: Expr,
    pub mu: Expr,
    pub epsilon0: f64,
    pub mu0: f64,
    pub scheme: Scheme,
    pub t_final: f64,
    pub dt: Option<f64>,
    pub dt_safety: f64,
    pub dt_rule: DtRule,
    pub jitter: f64,
    pub seed: u64,
    pub instability_factor: f64,
    pub init: InitSpec,
    pub source: Option<[Expr; 3]>,
    pub output_dir: PathBuf,
    pub record_every: usize,
    pub sample_dt: f64,
    pub snapshot_every: usize,
    pub probes: Vec<ProbeSpec>,
    pub spectrum: bool,
    pub prominence: f64,
    pub neighborhood: usize,
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.map.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn line(&self, key: &str) -> usize {
        self.map.get(key).map_or(0, |(l, _)| *l)
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, expected: &str) -> Result<Option<T>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<T>().map(Some).map_err(|_| ConfigError::Type {
                line,
                key: key.into(),
                expected: expected.into(),
                value: v.into(),
            }),
        }
    }

    fn number(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v = self.parse::<f64>(key, "a number")?.unwrap_or(default);
        if !v.is_finite() {
            return Err(self.invalid(key, "must be finite"));
        }
        Ok(v)
    }

    fn positive(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v = self.number(key, default)?;
        if v <= 0.0 {
            return Err(self.invalid(key, "must be positive"));
        }
        Ok(v)
    }

    fn count(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        Ok(self.parse::<usize>(key, "a non-negative integer")?.unwrap_or(default))
    }

    fn list<T: std::str::FromStr>(&self, key: &str, expected: &str) -> Result<Option<Vec<T>>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v
                .split_whitespace()
                .map(|w| w.parse::<T>())
                .collect::<Result<Vec<T>, _>>()
                .map(Some)
                .map_err(|_| ConfigError::Type {
                    line,
                    key: key.into(),
                    expected: expected.into(),
                    value: v.into(),
                }),
        }
    }

    fn expr(&self, key: &str, default: &str) -> Result<Expr, ConfigError> {
        let (line, src) = self.raw(key).unwrap_or((0, default));
        Expr::parse(src).map_err(|e| ConfigError::Invalid {
            line,
            key: key.into(),
            message: format!("expression {e}"),
        })
    }

    fn choice<'a>(&self, key: &str, default: Option<&'a str>, options: &[&'a str]) -> Result<&'a str, ConfigError> {
        let value = match (self.raw(key), default) {
            (Some((_, v)), _) => v,
            (None, Some(d)) => d,
            (None, None) => return Err(ConfigError::Missing(key.into())),
        };
        options.iter().find(|o| **o == value).copied().ok_or_else(|| ConfigError::Type {
            line: self.line(key),
            key: key.into(),
            expected: format!("one of {}", options.join(", ")),
            value: value.into(),
        })
    }

    fn invalid(&self, key: &str, message: &str) -> ConfigError {
        ConfigError::Invalid {
            line: self.line(key),
            key: key.into(),
            message: message.into(),
        }
    }
}

fn split_lines(text: &str) -> Result<Entries, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or(ConfigError::Syntax { line })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax { line });
        }
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey { line, key: key.into() });
        }
        if map.insert(key.to_string(), (line, value.to_string())).is_some() {
            return Err(ConfigError::Duplicate { line, key: key.into() });
        }
    }
    Ok(Entries { map })
}

fn parse_probe(word: &str) -> Option<ProbeSpec> {
    let (kind, rest) = word.split_at(1);
    if let Some(coords) = rest.strip_prefix('@') {
        let c: Vec<f64> = coords.split(',').map(str::parse).collect::<Result<_, _>>().ok()?;
        if !(2..=3).contains(&c.len()) {
            return None;
        }
        let p = [c[0], c[1], c.get(2).copied().unwrap_or(0.0)];
        return match kind {
            "e" => Some(ProbeSpec::EdgeNear(p)),
            "f" => Some(ProbeSpec::FaceNear(p)),
            _ => None,
        };
    }
    let i = rest.parse().ok()?;
    match kind {
        "e" => Some(ProbeSpec::Edge(i)),
        "f" => Some(ProbeSpec::Face(i)),
        _ => None,
    }
}

/// Parses and validates a configuration. Relative paths are resolved
/// against `base_dir`; a referenced mesh file must exist.
pub fn parse_config(text: &str, base_dir: &Path) -> Result<Config, ConfigError> {
    let en = split_lines(text)?;

    let kind = en.choice("mesh.kind", Some("grid"), &["grid", "partition", "refined", "delaunay", "file"])?;
    let axes = |en: &Entries| -> Result<(Vec<f64>, Vec<usize>), ConfigError> {
        let counts: Vec<usize> = en
            .list("mesh.counts", "cell counts")?
            .ok_or_else(|| ConfigError::Missing("mesh.counts".into()))?;
        let extents: Vec<f64> = en.list("mesh.extents", "extents")?.unwrap_or_else(|| vec![1.0; counts.len()]);
        if !(2..=3).contains(&counts.len()) || extents.len() != counts.len() {
            return Err(en.invalid("mesh.counts", "need 2 or 3 counts matching mesh.extents"));
        }
        if counts.contains(&0) {
            return Err(en.invalid("mesh.counts", "counts must be >= 1"));
        }
        if extents.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(en.invalid("mesh.extents", "extents must be positive"));
        }
        Ok((extents, counts))
    };
    let mesh = match kind {
        "grid" => {
            let (extents, counts) = axes(&en)?;
            MeshSpec::Grid { extents, counts }
        }
        "partition" => {
            let (extents, counts) = axes(&en)?;
            let spread = en.number("mesh.spread", 0.5)?;
            if spread < 0.0 {
                return Err(en.invalid("mesh.spread", "must be >= 0"));
            }
            MeshSpec::Partition { extents, counts, spread }
        }
        "refined" => MeshSpec::Refined {
            h_boundary: en.positive("mesh.h_boundary", 0.05)?,
            h_interior: en.positive("mesh.h_interior", 0.1)?,
            ramp: en.positive("mesh.ramp", 0.2)?,
        },
        "delaunay" => MeshSpec::Delaunay {
            points: en.count("mesh.points", 50)?,
        },
        _ => {
            let (line, rel) = en.raw("mesh.file").ok_or_else(|| ConfigError::Missing("mesh.file".into()))?;
            let path = base_dir.join(rel);
            if !path.is_file() {
                return Err(ConfigError::Invalid {
                    line,
                    key: "mesh.file".into(),
                    message: format!("no such file {}", path.display()),
                });
            }
            MeshSpec::File(path)
        }
    };

    let scheme = match en.choice("run.scheme", None, &["yee", "bk", "avi"])? {
        "yee" => Scheme::Yee,
        "bk" => Scheme::Bk,
        _ => Scheme::Avi,
    };
    if scheme == Scheme::Yee && !matches!(mesh, MeshSpec::Grid { .. } | MeshSpec::Partition { .. }) {
        return Err(en.invalid("run.scheme", "yee requires a rectangular grid mesh"));
    }
    let t_final = en
        .parse::<f64>("run.t_final", "a number")?
        .ok_or_else(|| ConfigError::Missing("run.t_final".into()))?;
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(en.invalid("run.t_final", "must be >= 0"));
    }
    let dt = en.parse::<f64>("run.dt", "a number")?;
    if dt.is_some_and(|d| !(d > 0.0 && d.is_finite())) {
        return Err(en.invalid("run.dt", "must be positive"));
    }
    if dt.is_some() && scheme == Scheme::Avi {
        return Err(en.invalid("run.dt", "avi steps come from run.dt_rule"));
    }
    let dt_safety = en.number("run.dt_safety", 0.5)?;
    if !(dt_safety > 0.0 && dt_safety <= 1.0) {
        return Err(en.invalid("run.dt_safety", "must be in (0, 1]"));
    }
    let dt_rule = match en.choice("run.dt_rule", Some("local"), &["local", "uniform"])? {
        "local" => DtRule::Local,
        _ => DtRule::Uniform,
    };
    let jitter = en.number("run.jitter", 0.0)?;
    if jitter < 0.0 {
        return Err(en.invalid("run.jitter", "must be >= 0"));
    }
    let seed = en.parse::<u64>("run.seed", "a non-negative integer")?.unwrap_or(0);
    let instability_factor = en.positive("run.instability_factor", 1e6)?;

    let init = match en.choice("init.kind", Some("random"), &["random", "zero", "fields"])? {
        "random" => InitSpec::Random,
        "zero" => InitSpec::Zero,
        _ => InitSpec::Fields {
            e: [en.expr("init.ex", "0")?, en.expr("init.ey", "0")?, en.expr("init.ez", "0")?],
            b: [en.expr("init.bx", "0")?, en.expr("init.by", "0")?, en.expr("init.bz", "0")?],
        },
    };
    for key in ["init.ex", "init.ey", "init.ez", "init.bx", "init.by", "init.bz"] {
        if en.raw(key).is_some() && !matches!(init, InitSpec::Fields { .. }) {
            return Err(en.invalid(key, "only used with init.kind = fields"));
        }
    }
    let source = if ["source.jx", "source.jy", "source.jz"].iter().any(|k| en.raw(k).is_some()) {
        Some([en.expr("source.jx", "0")?, en.expr("source.jy", "0")?, en.expr("source.jz", "0")?])
    } else {
        None
    };

    let probes = match en.raw("output.probes") {
        None => Vec::new(),
        Some((line, v)) => v
            .split_whitespace()
            .map(|w| {
                parse_probe(w).ok_or_else(|| ConfigError::Type {
                    line,
                    key: "output.probes".into(),
                    expected: "probes like e3, f10, f@0.5,0.5".into(),
                    value: w.into(),
                })
            })
            .collect::<Result<_, _>>()?,
    };
    let spectrum = en.parse::<bool>("output.spectrum", "true or false")?.unwrap_or(false);
    if spectrum && probes.is_empty() {
        return Err(en.invalid("output.spectrum", "needs at least one probe"));
    }

    let config = Config {
        mesh,
        epsilon: en.expr("material.epsilon", "1")?,
        mu: en.expr("material.mu", "1")?,
        epsilon0: en.positive("material.epsilon0", 1.0)?,
        mu0: en.positive("material.mu0", 1.0)?,
        scheme,
        t_final,
        dt,
        dt_safety,
        dt_rule,
        jitter,
        seed,
        instability_factor,
        init,
        source,
        output_dir: base_dir.join(en.raw("output.dir").map_or("out", |(_, v)| v)),
        record_every: en.count("output.record_every", 1)?,
        sample_dt: en.number("output.sample_dt", 0.01)?,
        snapshot_every: en.count("output.snapshot_every", 0)?,
        probes,
        spectrum,
        prominence: en.positive("output.prominence", 10.0)?,
        neighborhood: en.count("output.neighborhood", 1)?,
    };
    if config.sample_dt < 0.0 {
        return Err(en.invalid("output.sample_dt", "must be >= 0"));
    }
    Ok(config)
}
