//! INI run configuration with `[plane]`, `[exterior]`, `[picard]` and
//! `[converge]` sections.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::path::Path;
use std::str::FromStr;

use ini::{Ini, Properties};
use vortexlab_core::exterior_solver::parse_q0;
use vortexlab_core::{Extension, ExteriorSimConfig, Lattice, PicardConfig, PlaneSimConfig};

use crate::error::{CliError, Result};

const SECTIONS: [&str; 4] = ["plane", "exterior", "picard", "converge"];

/// A parsed configuration file; keeps the text to point errors at lines.
#[derive(Debug)]
pub struct ConfigFile {
    name: String,
    text: String,
    ini: Ini,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::parse(&path.display().to_string(), &text)
    }

    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| CliError::Config(format!("{name}:{}: {}", e.line, e.msg)))?;
        let file = ConfigFile { name: name.to_string(), text: text.to_string(), ini };
        for (section, props) in file.ini.iter() {
            match section {
                Some(s) if SECTIONS.contains(&s) => {}
                Some(s) => return Err(file.error(Some(s), None, format!("unknown section [{s}]"))),
                None if props.is_empty() => {}
                None => {
                    let key = props.iter().next().map(|(k, _)| k).unwrap_or_default();
                    return Err(file.error(None, Some(key), format!("`{key}` is outside any section")));
                }
            }
        }
        Ok(file)
    }

    /// Line of `key` inside `[section]`, or of the section header itself.
    fn line_of(&self, section: Option<&str>, key: Option<&str>) -> Option<usize> {
        let mut current: Option<String> = None;
        for (n, raw) in self.text.lines().enumerate() {
            let line = raw.trim();
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                current = Some(name.trim().to_string());
                if key.is_none() && current.as_deref() == section {
                    return Some(n + 1);
                }
                continue;
            }
            if current.as_deref() != section {
                continue;
            }
            if let (Some(key), Some((k, _))) = (key, line.split_once('=')) {
                if k.trim() == key {
                    return Some(n + 1);
                }
            }
        }
        None
    }

    fn error(&self, section: Option<&str>, key: Option<&str>, detail: String) -> CliError {
        match self.line_of(section, key) {
            Some(line) => CliError::Config(format!("{}:{line}: {detail}", self.name)),
            None => CliError::Config(format!("{}: {detail}", self.name)),
        }
    }

    pub fn has_section(&self, name: &str) -> bool {
        self.ini.section(Some(name)).is_some()
    }

    pub fn section(&self, name: &'static str) -> Result<Section<'_>> {
        let props = self
            .ini
            .section(Some(name))
            .ok_or_else(|| CliError::Config(format!("{}: missing section [{name}]", self.name)))?;
        Ok(Section { file: self, name, props, used: RefCell::new(BTreeSet::new()) })
    }
}

/// Typed access to one section; [`Section::finish`] rejects unread keys.
pub struct Section<'a> {
    file: &'a ConfigFile,
    name: &'static str,
    props: &'a Properties,
    used: RefCell<BTreeSet<String>>,
}

impl Section<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.used.borrow_mut().insert(key.to_string());
        self.props.get(key)
    }

    fn bad(&self, key: &str, detail: String) -> CliError {
        self.file.error(Some(self.name), Some(key), format!("[{}] {key}: {detail}", self.name))
    }

    fn parse<T: FromStr>(&self, key: &str, text: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        text.parse().map_err(|e| self.bad(key, format!("cannot parse `{text}`: {e}")))
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key).map_or(Ok(default), |v| self.parse(key, v))
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            Some(v) => self.parse(key, v),
            None => {
                Err(self.file.error(Some(self.name), None, format!("[{}] is missing required key `{key}`", self.name)))
            }
        }
    }

    /// A number, or `auto` for `None`.
    pub fn get_auto(&self, key: &str, default: Option<f64>) -> Result<Option<f64>> {
        match self.raw(key) {
            None => Ok(default),
            Some("auto") => Ok(None),
            Some(v) => self.parse(key, v).map(Some),
        }
    }

    pub fn get_list(&self, key: &str) -> Result<Vec<f64>> {
        let text = self.raw(key).ok_or_else(|| {
            self.file.error(Some(self.name), None, format!("[{}] is missing required key `{key}`", self.name))
        })?;
        text.split(',').map(|v| self.parse(key, v.trim())).collect()
    }

    pub fn require_q0(&self) -> Result<vortexlab_core::InitialVorticity> {
        let text: String = self.require("q0")?;
        parse_q0(&text).map_err(|e| self.bad("q0", e.to_string()))
    }

    pub fn finish(self) -> Result<()> {
        let used = self.used.borrow();
        match self.props.iter().find(|(k, _)| !used.contains(*k)) {
            Some((k, _)) => Err(self.bad(k, "unknown key".into())),
            None => Ok(()),
        }
    }
}

pub fn parse_lattice(text: &str) -> Option<Lattice> {
    if text == "square" {
        return Some(Lattice::Square);
    }
    let n = text.strip_prefix("polar")?.trim().strip_prefix("n_theta=")?;
    n.trim().parse().ok().map(|n_theta| Lattice::Polar { n_theta })
}

/// `[plane]`; `q0` and `t_end` are required.
pub fn plane_config(file: &ConfigFile) -> Result<PlaneSimConfig> {
    let s = file.section("plane")?;
    let d = PlaneSimConfig::default();
    let lattice_text: String = s.get("lattice", "square".to_string())?;
    let lattice = parse_lattice(&lattice_text)
        .ok_or_else(|| s.bad("lattice", format!("expected `square` or `polar n_theta=N`, got `{lattice_text}`")))?;
    let config = PlaneSimConfig {
        alpha: s.get("alpha", d.alpha)?,
        gamma: s.get("gamma", d.gamma)?,
        dt: s.get_auto("dt", d.dt)?,
        t_end: s.require("t_end")?,
        q0: s.require_q0()?,
        h: s.get("h", d.h)?,
        lattice,
        snapshot_stride: s.get("snapshot_stride", d.snapshot_stride)?,
    };
    s.finish()?;
    Ok(config)
}

/// `[exterior]`; `q0` is required, and `t_end` too unless `need_t_end` is false.
/// A `dr` entry replaces `n_r` by a spacing anchored at `r_max`.
pub fn exterior_config(file: &ConfigFile, need_t_end: bool) -> Result<ExteriorSimConfig> {
    let s = file.section("exterior")?;
    let d = ExteriorSimConfig::default();
    let t_end = if need_t_end { s.require("t_end")? } else { s.get("t_end", d.t_end)? };
    let config = ExteriorSimConfig {
        alpha: s.get("alpha", d.alpha)?,
        eps: s.get("eps", d.eps)?,
        gamma: s.get("gamma", d.gamma)?,
        m: s.get_auto("m", d.m)?,
        r_max: s.get("r_max", d.r_max)?,
        n_r: s.get("n_r", d.n_r)?,
        grading: s.get("grading", d.grading)?,
        n_theta: s.get("n_theta", d.n_theta)?,
        n_modes: s.get("n_modes", d.n_modes)?,
        dt: s.get_auto("dt", d.dt)?,
        t_end,
        q0: s.require_q0()?,
        snapshot_stride: s.get("snapshot_stride", d.snapshot_stride)?,
        max_foot_crossings: s.get("max_foot_crossings", d.max_foot_crossings)?,
    };
    let config = match s.get_auto("dr", None)? {
        Some(dr) => config.with_radial_spacing(dr).map_err(|e| s.bad("dr", e.to_string()))?,
        None => config,
    };
    s.finish()?;
    Ok(config)
}

pub fn picard_config(file: &ConfigFile) -> Result<PicardConfig> {
    let d = PicardConfig::default();
    if !file.has_section("picard") {
        return Ok(d);
    }
    let s = file.section("picard")?;
    let config = PicardConfig { n_iters: s.get("n_iters", d.n_iters)?, t0: s.get("t0", d.t0)? };
    s.finish()?;
    Ok(config)
}

/// The `[converge]` section: obstacle radii and the extension rule.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergeConfig {
    pub eps: Vec<f64>,
    pub extension: Extension,
}

pub fn converge_config(file: &ConfigFile) -> Result<ConvergeConfig> {
    let s = file.section("converge")?;
    let eps = s.get_list("eps")?;
    if eps.len() < 2 {
        return Err(s.bad("eps", "a convergence study needs at least two values".into()));
    }
    let extension = match s.get("extension", "zero".to_string())?.as_str() {
        "zero" => Extension::Zero,
        "excise" => Extension::Excise,
        other => return Err(s.bad("extension", format!("expected `zero` or `excise`, got `{other}`"))),
    };
    s.finish()?;
    Ok(ConvergeConfig { eps, extension })
}
