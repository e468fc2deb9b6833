//! Scenario configuration: a JSON object with documented keys, defaults for
//! everything, and a content digest over the canonical form.
//!
//! ```json
//! {
//!   "lab_width": 1,
//!   "geometry": "default",
//!   "seed": 0,
//!   "tolerances": { "numeric": 1e-12, "frame_residual": 1e-9 },
//!   "dephasing": { "lambda": 0.3, "steps": 10, "target_lab": 0, "tolerance": 1e-3 },
//!   "frames": [["A","B","C"], ["U","B","C"]],
//!   "frame_filter": false,
//!   "generators": ["+XZZ", "+ZXZ", "+ZZX"],
//!   "friend_stage_only": false,
//!   "output_dir": "out"
//! }
//! ```
//!
//! `geometry` is `"default"`, `"collinear"`, `{"labs": [[x,y,z], ...]}` (three
//! lab positions) or `{"events": [{"label": "A", "t": .., "x": .., "y": .., "z": ..}, ...]}`.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use wignerghz::contexts::NAMED_CONTEXTS;
use wignerghz::spacetime::{collinear_geometry, default_geometry, frame_admissible, Event4, Geometry, EVENT_LABELS};
use wignerghz::stabilizer::{ghz_state_from, StabilizerSet, GHZ_GENERATORS};

/// Widest lab pointer accepted; the joint state has `2^(3 + 3w)` amplitudes.
pub const MAX_LAB_WIDTH: usize = 6;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid `{key}`: {message}")]
    Validation { key: String, message: String },
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation { key: key.to_string(), message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum GeometrySpec {
    Named(String),
    Labs { labs: [[f64; 3]; 3] },
    Events { events: Vec<Event4> },
}

impl GeometrySpec {
    pub fn resolve(&self) -> Result<Geometry, ConfigError> {
        let g = match self {
            GeometrySpec::Named(n) if n == "default" => default_geometry(),
            GeometrySpec::Named(n) if n == "collinear" => collinear_geometry(),
            GeometrySpec::Named(n) => return Err(invalid("geometry", format!("unknown geometry `{n}`"))),
            GeometrySpec::Labs { labs } => Geometry::from_lab_positions(*labs).map_err(|e| invalid("geometry", e.to_string()))?,
            GeometrySpec::Events { events } => Geometry::new(events.clone()).map_err(|e| invalid("geometry", e.to_string()))?,
        };
        g.check_separations().map_err(|e| invalid("geometry", e.to_string()))?;
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub numeric: f64,
    pub frame_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DephasingConfig {
    pub lambda: f64,
    pub steps: usize,
    pub target_lab: usize,
    /// Diagonality threshold for calling a pointer robustly decohered.
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub lab_width: usize,
    pub geometry: GeometrySpec,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub dephasing: DephasingConfig,
    pub frames: Vec<[String; 3]>,
    pub frame_filter: bool,
    pub generators: Vec<String>,
    pub friend_stage_only: bool,
    #[serde(skip)]
    pub output_dir: PathBuf,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

/// Triples of events checked by the frames command unless configured.
pub const DEFAULT_FRAMES: [[&str; 3]; 5] = [["A", "B", "C"], ["U", "V", "W"], ["U", "B", "C"], ["A", "V", "C"], ["A", "B", "W"]];

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            lab_width: 1,
            geometry: GeometrySpec::Named("default".into()),
            seed: 0,
            tolerances: Tolerances { numeric: 1e-12, frame_residual: 1e-9 },
            dephasing: DephasingConfig { lambda: 0.3, steps: 10, target_lab: 0, tolerance: 1e-3 },
            frames: DEFAULT_FRAMES.iter().map(|t| t.map(String::from)).collect(),
            frame_filter: false,
            generators: GHZ_GENERATORS.iter().map(|s| s.to_string()).collect(),
            friend_stage_only: false,
            output_dir: PathBuf::from("out"),
            warnings: Vec::new(),
        }
    }
}

/// Values given on the command line; they replace the file's keys before validation.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub frame_filter: Option<bool>,
    pub lab_width: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

impl ScenarioConfig {
    /// Reads `path`; an empty (or whitespace-only) file means all defaults.
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::from_text(&text, overrides)
    }

    pub fn from_text(text: &str, overrides: &Overrides) -> Result<Self, ConfigError> {
        let value = if text.trim().is_empty() {
            Value::Object(Map::new())
        } else {
            serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?
        };
        Self::from_value(value, overrides)
    }

    pub fn from_value(value: Value, overrides: &Overrides) -> Result<Self, ConfigError> {
        let Value::Object(mut map) = value else {
            return Err(ConfigError::Parse("top level must be an object".into()));
        };
        if let Some(s) = overrides.seed {
            map.insert("seed".into(), s.into());
        }
        if let Some(w) = overrides.lab_width {
            map.insert("lab_width".into(), w.into());
        }
        if let Some(f) = overrides.frame_filter {
            map.insert("frame_filter".into(), f.into());
        }
        if let Some(t) = overrides.tolerance {
            let tol = map.entry("tolerances").or_insert_with(|| Value::Object(Map::new()));
            match tol {
                Value::Object(m) => {
                    m.insert("numeric".into(), Value::from(t));
                }
                _ => return Err(invalid("tolerances", "expected an object")),
            }
        }
        let mut cfg = ScenarioConfig::default();
        for (key, v) in &map {
            match key.as_str() {
                "lab_width" => cfg.lab_width = get_usize(key, v)?,
                "geometry" => cfg.geometry = parse_geometry(v)?,
                "seed" => cfg.seed = v.as_u64().ok_or_else(|| invalid(key, "expected an unsigned 64-bit integer"))?,
                "tolerances" => parse_tolerances(v, &mut cfg.tolerances)?,
                "dephasing" => parse_dephasing(v, &mut cfg.dephasing)?,
                "frames" => cfg.frames = parse_frames(v)?,
                "frame_filter" => cfg.frame_filter = get_bool(key, v)?,
                "generators" => cfg.generators = get_strings(key, v)?,
                "friend_stage_only" => cfg.friend_stage_only = get_bool(key, v)?,
                "output_dir" => {
                    cfg.output_dir = PathBuf::from(v.as_str().ok_or_else(|| invalid(key, "expected a string"))?)
                }
                other => return Err(invalid(other, "unknown key")),
            }
        }
        if let Some(dir) = &overrides.output_dir {
            cfg.output_dir = dir.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&mut self) -> Result<(), ConfigError> {
        if self.lab_width == 0 || self.lab_width > MAX_LAB_WIDTH {
            return Err(invalid("lab_width", format!("must be between 1 and {MAX_LAB_WIDTH}, got {}", self.lab_width)));
        }
        let t = &self.tolerances;
        for (k, v) in [("tolerances.numeric", t.numeric), ("tolerances.frame_residual", t.frame_residual)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(k, "must be positive"));
            }
        }
        let d = &self.dephasing;
        if !(0.0..=1.0).contains(&d.lambda) {
            return Err(invalid("dephasing.lambda", format!("must lie in [0, 1], got {}", d.lambda)));
        }
        if d.target_lab > 2 {
            return Err(invalid("dephasing.target_lab", "must be 0, 1 or 2"));
        }
        if !(d.tolerance.is_finite() && d.tolerance > 0.0) {
            return Err(invalid("dephasing.tolerance", "must be positive"));
        }
        let gens = StabilizerSet::parse(&self.generators).map_err(|e| invalid("generators", e.to_string()))?;
        if gens.qubits() != 3 {
            return Err(invalid("generators", "need three-qubit generators"));
        }
        ghz_state_from(&gens).map_err(|e| invalid("generators", e.to_string()))?;
        let geometry = self.geometry.resolve()?;
        if self.frame_filter {
            for id in NAMED_CONTEXTS {
                let l: Vec<String> = id[2..].chars().map(String::from).collect();
                if matches!(frame_admissible(&geometry, [&l[0], &l[1], &l[2]]), Ok(None)) {
                    self.warnings.push(format!("geometry admits no simultaneity frame for {id}; the frame filter drops it"));
                }
            }
        }
        Ok(())
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry.resolve().expect("validated on load")
    }

    pub fn stabilizers(&self) -> StabilizerSet {
        StabilizerSet::parse(&self.generators).expect("validated on load")
    }

    /// Sorted-key JSON of every semantic field; the output directory is not part of it.
    pub fn canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("config serializes");
        serde_json::to_string(&v).expect("value serializes")
    }

    /// Hex SHA-256 of [`Self::canonical_json`].
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

fn get_usize(key: &str, v: &Value) -> Result<usize, ConfigError> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| invalid(key, "expected a nonnegative integer"))
}

fn get_f64(key: &str, v: &Value) -> Result<f64, ConfigError> {
    v.as_f64().ok_or_else(|| invalid(key, "expected a number"))
}

fn get_bool(key: &str, v: &Value) -> Result<bool, ConfigError> {
    v.as_bool().ok_or_else(|| invalid(key, "expected true or false"))
}

fn get_strings(key: &str, v: &Value) -> Result<Vec<String>, ConfigError> {
    v.as_array()
        .and_then(|a| a.iter().map(|s| s.as_str().map(String::from)).collect())
        .ok_or_else(|| invalid(key, "expected a list of strings"))
}

fn object<'a>(key: &str, v: &'a Value) -> Result<&'a Map<String, Value>, ConfigError> {
    v.as_object().ok_or_else(|| invalid(key, "expected an object"))
}

fn parse_tolerances(v: &Value, t: &mut Tolerances) -> Result<(), ConfigError> {
    for (k, x) in object("tolerances", v)? {
        let key = format!("tolerances.{k}");
        match k.as_str() {
            "numeric" => t.numeric = get_f64(&key, x)?,
            "frame_residual" => t.frame_residual = get_f64(&key, x)?,
            _ => return Err(invalid(&key, "unknown key")),
        }
    }
    Ok(())
}

fn parse_dephasing(v: &Value, d: &mut DephasingConfig) -> Result<(), ConfigError> {
    for (k, x) in object("dephasing", v)? {
        let key = format!("dephasing.{k}");
        match k.as_str() {
            "lambda" => d.lambda = get_f64(&key, x)?,
            "steps" => d.steps = get_usize(&key, x)?,
            "target_lab" => d.target_lab = get_usize(&key, x)?,
            "tolerance" => d.tolerance = get_f64(&key, x)?,
            _ => return Err(invalid(&key, "unknown key")),
        }
    }
    Ok(())
}

fn parse_frames(v: &Value) -> Result<Vec<[String; 3]>, ConfigError> {
    let list = v.as_array().ok_or_else(|| invalid("frames", "expected a list of event triples"))?;
    list.iter()
        .map(|t| {
            let s = get_strings("frames", t)?;
            if s.iter().any(|l| !EVENT_LABELS.contains(&l.as_str())) {
                return Err(invalid("frames", format!("unknown event in {s:?}")));
            }
            <[String; 3]>::try_from(s).map_err(|s| invalid("frames", format!("{s:?} is not a triple")))
        })
        .collect()
}

fn parse_geometry(v: &Value) -> Result<GeometrySpec, ConfigError> {
    let spec = match v {
        Value::String(s) => GeometrySpec::Named(s.clone()),
        Value::Object(m) if m.len() == 1 && m.contains_key("labs") => {
            let labs: Vec<[f64; 3]> = serde_json::from_value(m["labs"].clone())
                .map_err(|e| invalid("geometry.labs", e.to_string()))?;
            let labs: [[f64; 3]; 3] = labs.try_into().map_err(|_| invalid("geometry.labs", "need three positions"))?;
            GeometrySpec::Labs { labs }
        }
        Value::Object(m) if m.len() == 1 && m.contains_key("events") => {
            let raw = m["events"].as_array().ok_or_else(|| invalid("geometry.events", "expected a list"))?;
            let events = raw
                .iter()
                .map(|e| {
                    let o = object("geometry.events", e)?;
                    let label = o.get("label").and_then(Value::as_str).ok_or_else(|| invalid("geometry.events", "event without label"))?;
                    let c = |k: &str| o.get(k).and_then(Value::as_f64).ok_or_else(|| invalid("geometry.events", format!("event {label} lacks `{k}`")));
                    Event4::new(label, c("t")?, c("x")?, c("y")?, c("z")?).map_err(|e| invalid("geometry.events", e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            GeometrySpec::Events { events }
        }
        _ => return Err(invalid("geometry", "expected \"default\", \"collinear\", {\"labs\": ..} or {\"events\": ..}")),
    };
    spec.resolve()?;
    Ok(spec)
}
