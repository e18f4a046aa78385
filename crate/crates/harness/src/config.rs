//! Run configuration: a TOML document with sections [params], [tolerances]
//! and [windows]. Every key is optional; unknown keys are errors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use qorth::qgrid::{Branch, GridWindow, HalfLineParams, QParams, DEFAULT_WINDOW};
use qorth::C64;
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub message: String,
    /// 1-based line in the config text, when the error can be located.
    pub line: Option<usize>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "config line {l}: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    params: Option<RawParams>,
    tolerances: Option<BTreeMap<String, f64>>,
    windows: Option<RawWindows>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    q: Option<f64>,
    c_re: Option<f64>,
    c_im: Option<f64>,
    d_re: Option<f64>,
    d_im: Option<f64>,
    z_minus: Option<f64>,
    z_plus: Option<f64>,
    halfline_c: Option<f64>,
    halfline_d: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWindows {
    k_min: Option<i32>,
    k_max: Option<i32>,
    parseval_k_min: Option<i32>,
    parseval_k_max: Option<i32>,
    matrix_k_min: Option<i32>,
    matrix_k_max: Option<i32>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: QParams,
    pub halfline: HalfLineParams,
    /// Per-check tolerance overrides, keyed by check id.
    pub tolerances: BTreeMap<String, f64>,
    /// Jackson window for Gram matrices and reconstructions.
    pub window: GridWindow,
    pub parseval_window: GridWindow,
    pub matrix_window: GridWindow,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 20_240_917;

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: QParams::default_set(),
            halfline: HalfLineParams::default_set(),
            tolerances: BTreeMap::new(),
            window: GridWindow::default_window(),
            parseval_window: GridWindow::new(-20, 60, &Branch::BOTH).unwrap(),
            matrix_window: GridWindow::default_window(),
            seed: DEFAULT_SEED,
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line of the first `key =` assignment inside `[section]`.
fn find_key_line(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut inside = false;
    for (i, raw) in text.lines().enumerate() {
        let l = raw.trim();
        if l.starts_with('[') {
            inside = l.trim_matches(|c| c == '[' || c == ']').trim() == section;
            continue;
        }
        if inside {
            if let Some((k, _)) = l.split_once('=') {
                if k.trim().trim_matches('"') == key {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

fn find_section_line(text: &str, section: &str) -> Option<usize> {
    text.lines()
        .position(|l| l.trim().trim_matches(|c| c == '[' || c == ']').trim() == section && l.trim().starts_with('['))
        .map(|i| i + 1)
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            message: format!("cannot read {}: {e}", path.display()),
            line: None,
        })?;
        RunConfig::from_toml(&text)
    }

    /// Parses and validates; tolerance keys must name registered checks.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError {
            message: e.message().to_string(),
            line: e.span().map(|s| line_of(text, s.start)),
        })?;
        let mut cfg = RunConfig::default();
        let p = raw.params.unwrap_or_default();
        let def = QParams::default_set();
        let c = C64::new(p.c_re.unwrap_or(def.c.re), p.c_im.unwrap_or(def.c.im));
        let d = C64::new(p.d_re.unwrap_or(def.d.re), p.d_im.unwrap_or(def.d.im));
        let q = p.q.unwrap_or(def.q.value());
        cfg.params = QParams::new(
            q,
            c,
            d,
            p.z_minus.unwrap_or(def.z_minus),
            p.z_plus.unwrap_or(def.z_plus),
        )
        .map_err(|e| ConfigError {
            message: e.to_string(),
            line: find_section_line(text, "params"),
        })?;
        let hd = HalfLineParams::default_set();
        cfg.halfline =
            HalfLineParams::new(q, p.halfline_c.unwrap_or(hd.c), p.halfline_d.unwrap_or(hd.d)).map_err(|e| {
                ConfigError {
                    message: format!("half-line parameters: {e}"),
                    line: find_section_line(text, "params"),
                }
            })?;

        let known = crate::registry::check_ids();
        for (id, &tol) in raw.tolerances.iter().flatten() {
            let line = find_key_line(text, "tolerances", id);
            if !known.contains(&id.as_str()) {
                return Err(ConfigError {
                    message: format!("unknown check id '{id}' in [tolerances]"),
                    line,
                });
            }
            if !(tol.is_finite() && tol > 0.0) {
                return Err(ConfigError {
                    message: format!("tolerance for '{id}' must be positive and finite, got {tol}"),
                    line,
                });
            }
            cfg.tolerances.insert(id.clone(), tol);
        }

        let w = raw.windows.unwrap_or_default();
        let mk = |lo: Option<i32>, hi: Option<i32>, def: (i32, i32), name: &str| {
            GridWindow::new(lo.unwrap_or(def.0), hi.unwrap_or(def.1), &Branch::BOTH).map_err(|e| ConfigError {
                message: format!("{name} window: {e}"),
                line: find_section_line(text, "windows"),
            })
        };
        cfg.window = mk(w.k_min, w.k_max, DEFAULT_WINDOW, "main")?;
        cfg.parseval_window = mk(w.parseval_k_min, w.parseval_k_max, (-20, 60), "parseval")?;
        cfg.matrix_window = mk(w.matrix_k_min, w.matrix_k_max, DEFAULT_WINDOW, "matrix")?;
        Ok(cfg)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
