//! Named channel scenarios, their text configuration format and the run
//! that turns one into frontiers, equal-rate values and artifacts.
//!
//! ```text
//! # comment
//! [name]
//! h12 = 1
//! h13 = 10
//! ...
//! grid = 33
//! regions = both
//! ```
//!
//! Gains are required; powers and noises default to 1, `grid` to 33 and
//! `regions` to `both`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::channel::{ChannelConfig, Gains, Link, NOISE_KEYS, POWER_KEYS};
use crate::error::Result;
use crate::gaussian::{pdf_terms, sweep_region, Grid, PdfTerms, DEFAULT_RESOLUTION};
use crate::ifc::{ifc_frontier, ifc_region};
use crate::io::{emit_frontier, emit_plot, write_text, Format};
use crate::oracle::oracle_terms;
use crate::region::{equal_rate_point, RateRegion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionSelection {
    Pdf,
    Ifc,
    #[default]
    Both,
}

impl RegionSelection {
    pub fn pdf(self) -> bool {
        matches!(self, RegionSelection::Pdf | RegionSelection::Both)
    }

    pub fn ifc(self) -> bool {
        matches!(self, RegionSelection::Ifc | RegionSelection::Both)
    }
}

impl fmt::Display for RegionSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionSelection::Pdf => "pdf",
            RegionSelection::Ifc => "ifc",
            RegionSelection::Both => "both",
        })
    }
}

impl FromStr for RegionSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pdf" => Ok(RegionSelection::Pdf),
            "ifc" => Ok(RegionSelection::Ifc),
            "both" => Ok(RegionSelection::Both),
            other => Err(format!("unknown region selection {other:?}, expected pdf, ifc or both")),
        }
    }
}

/// Where and how a run writes its artifacts. Nothing is written when both
/// fields are unset.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    pub format: Format,
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub channel: ChannelConfig,
    pub grid: usize,
    pub regions: RegionSelection,
    pub outputs: OutputSpec,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("scenario {section:?}: missing key {key}")]
    MissingKey { section: String, key: &'static str },
    #[error("scenario name must be nonempty")]
    EmptyName,
    #[error("grid resolution must be at least 2, got {0}")]
    Grid(usize),
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
    #[error("no scenario named {0:?} in the file")]
    NotInFile(String),
}

/// Keys accepted inside a section.
pub const CONFIG_KEYS: [&str; 14] =
    ["h12", "h13", "h14", "h23", "h24", "h34", "P1", "P2", "P3", "N2", "N3", "N4", "grid", "regions"];

/// Built-in scenarios a–e: gains `(h12, h13, h14, h23, h24, h34)` with unit
/// powers and noises.
pub const PRESETS: [(&str, [f64; 6]); 5] = [
    ("a", [1.0, 10.0, 1.0, 10.0, 10.0, 1.0]),
    ("b", [10.0, 10.0, 1.0, 10.0, 10.0, 10.0]),
    ("c", [10.0, 10.0, 10.0, 1.0, 10.0, 10.0]),
    ("d", [1.0, 10.0, 10.0, 10.0, 10.0, 1.0]),
    ("e", [10.0, 10.0, 10.0, 10.0, 10.0, 10.0]),
];

pub fn preset(name: &str) -> Option<ScenarioConfig> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(n, h)| ScenarioConfig {
        name: n.to_string(),
        channel: ChannelConfig::unit_power(Gains::from_links(*h)),
        grid: DEFAULT_RESOLUTION,
        regions: RegionSelection::Both,
        outputs: OutputSpec::default(),
    })
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(ConfigError::EmptyName.into());
        }
        if self.grid < 2 {
            return Err(ConfigError::Grid(self.grid).into());
        }
        self.channel.validate()?;
        Ok(())
    }

    /// SHA-256 over the fields that determine the computed regions: gains,
    /// powers, noises, grid and region selection.
    pub fn config_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.canonical_text().as_bytes());
        hex::encode(h.finalize())
    }

    fn canonical_text(&self) -> String {
        let mut fields: Vec<String> = Link::ALL.iter().map(|l| format!("{}={:?}", l.key(), self.channel.gains.get(*l))).collect();
        fields.extend(POWER_KEYS.iter().zip(self.channel.powers).map(|(k, v)| format!("{k}={v:?}")));
        fields.extend(NOISE_KEYS.iter().zip(self.channel.noises).map(|(k, v)| format!("{k}={v:?}")));
        fields.push(format!("grid={}", self.grid));
        fields.push(format!("regions={}", self.regions));
        fields.join(";")
    }

    /// The section of the configuration format describing this scenario.
    pub fn to_config_text(&self) -> String {
        let mut out = format!("[{}]\n", self.name);
        for l in Link::ALL {
            out += &format!("{} = {}\n", l.key(), self.channel.gains.get(l));
        }
        for (k, v) in POWER_KEYS.iter().zip(self.channel.powers).chain(NOISE_KEYS.iter().zip(self.channel.noises)) {
            out += &format!("{k} = {v}\n");
        }
        out += &format!("grid = {}\nregions = {}\n", self.grid, self.regions);
        out
    }
}

struct Section {
    name: String,
    values: Vec<(String, String, usize)>,
}

/// Every scenario of a configuration file, in file order.
pub fn parse_config(text: &str) -> Result<Vec<ScenarioConfig>, ConfigError> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Syntax { line, message: "unterminated section header".into() })?
                .trim();
            if name.is_empty() {
                return Err(ConfigError::EmptyName);
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(ConfigError::Syntax { line, message: format!("duplicate scenario {name:?}") });
            }
            sections.push(Section { name: name.to_string(), values: Vec::new() });
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::Syntax { line, message: format!("expected key = value, got {content:?}") })?;
        let (key, value) = (key.trim(), value.trim());
        if !CONFIG_KEYS.contains(&key) {
            return Err(ConfigError::Syntax { line, message: format!("unknown key {key:?}") });
        }
        let section = sections
            .last_mut()
            .ok_or_else(|| ConfigError::Syntax { line, message: "key outside a [scenario] section".into() })?;
        if section.values.iter().any(|(k, _, _)| k == key) {
            return Err(ConfigError::Syntax { line, message: format!("duplicate key {key:?}") });
        }
        section.values.push((key.to_string(), value.to_string(), line));
    }
    sections.into_iter().map(build_section).collect()
}

fn build_section(section: Section) -> Result<ScenarioConfig, ConfigError> {
    let lookup = |key: &str| section.values.iter().find(|(k, _, _)| k == key);
    let number = |key: &'static str, default: Option<f64>| -> Result<f64, ConfigError> {
        match lookup(key) {
            Some((_, v, line)) => v
                .parse::<f64>()
                .map_err(|e| ConfigError::Syntax { line: *line, message: format!("{key} = {v:?}: {e}") }),
            None => default.ok_or(ConfigError::MissingKey { section: section.name.clone(), key }),
        }
    };
    let mut gains = Gains::uniform(0.0);
    for l in Link::ALL {
        gains.set(l, number(l.key(), None)?);
    }
    let powers = [number("P1", Some(1.0))?, number("P2", Some(1.0))?, number("P3", Some(1.0))?];
    let noises = [number("N2", Some(1.0))?, number("N3", Some(1.0))?, number("N4", Some(1.0))?];
    let grid = match lookup("grid") {
        Some((_, v, line)) => v
            .parse::<usize>()
            .map_err(|e| ConfigError::Syntax { line: *line, message: format!("grid = {v:?}: {e}") })?,
        None => DEFAULT_RESOLUTION,
    };
    if grid < 2 {
        return Err(ConfigError::Grid(grid));
    }
    let regions = match lookup("regions") {
        Some((_, v, line)) => v.parse().map_err(|message| ConfigError::Syntax { line: *line, message })?,
        None => RegionSelection::Both,
    };
    Ok(ScenarioConfig {
        name: section.name,
        channel: ChannelConfig::new(gains, powers, noises),
        grid,
        regions,
        outputs: OutputSpec::default(),
    })
}

/// A computed region and its equal-rate value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionResult {
    pub region: RateRegion,
    pub equal_rate: f64,
}

/// Agreement of the closed forms with the Gaussian oracle at the splits
/// that achieve the frontier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub splits: usize,
    pub max_relative_deviation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timings {
    pub pdf_seconds: f64,
    pub ifc_seconds: f64,
    pub oracle_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub name: String,
    pub config_hash: String,
    pub pdf: Option<RegionResult>,
    pub ifc: Option<RegionResult>,
    /// Why the baseline was not computed, when it was requested.
    pub ifc_error: Option<String>,
    pub oracle: Option<OracleSummary>,
    pub timings: Timings,
}

impl RunReport {
    /// `equal_rate(pdf) - equal_rate(ifc)`, when both exist.
    pub fn equal_rate_gain(&self) -> Option<f64> {
        Some(self.pdf.as_ref()?.equal_rate - self.ifc.as_ref()?.equal_rate)
    }

    /// Largest amount by which a baseline frontier point sticks out of the
    /// collaborative region.
    pub fn ifc_excess_over_pdf(&self) -> Option<f64> {
        let (pdf, ifc) = (&self.pdf.as_ref()?.region, &self.ifc.as_ref()?.region);
        ifc.frontier.iter().map(|&p| pdf.excess(p)).reduce(f64::max)
    }
}

/// Relative deviation with an absolute floor for terms that vanish.
pub fn relative_deviation(closed: f64, oracle: f64) -> f64 {
    let diff = (closed - oracle).abs();
    if oracle.abs() > 1e-12 {
        diff / oracle.abs()
    } else {
        diff
    }
}

pub fn max_term_deviation(closed: &PdfTerms, oracle: &PdfTerms) -> f64 {
    closed.as_array().iter().zip(oracle.as_array()).map(|(&c, o)| relative_deviation(c, o)).fold(0.0, f64::max)
}

/// Computes the requested regions, checks the closed forms at every
/// frontier witness against the oracle, and writes the requested artifacts.
/// The sweep is deterministic for a fixed configuration.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunReport> {
    cfg.validate()?;
    let ch = cfg.channel.validate()?;
    let mut report = RunReport {
        name: cfg.name.clone(),
        config_hash: cfg.config_hash(),
        pdf: None,
        ifc: None,
        ifc_error: None,
        oracle: None,
        timings: Timings::default(),
    };
    if cfg.regions.pdf() {
        let start = Instant::now();
        let region = sweep_region(&ch, &Grid::uniform(cfg.grid))?;
        let equal_rate = equal_rate_point(&region)?;
        report.timings.pdf_seconds = start.elapsed().as_secs_f64();

        let start = Instant::now();
        let mut splits = region.witnesses.clone().unwrap_or_default();
        splits.dedup();
        let mut worst: f64 = 0.0;
        for s in &splits {
            worst = worst.max(max_term_deviation(&pdf_terms(&ch, s), &oracle_terms(&ch, s)?));
        }
        report.oracle = Some(OracleSummary { splits: splits.len(), max_relative_deviation: worst });
        report.timings.oracle_seconds = start.elapsed().as_secs_f64();
        report.pdf = Some(RegionResult { region, equal_rate });
    }
    if cfg.regions.ifc() {
        let start = Instant::now();
        match ifc_region(&ch) {
            Ok(r) => {
                let region = ifc_frontier(&r);
                let equal_rate = equal_rate_point(&region)?;
                report.ifc = Some(RegionResult { region, equal_rate });
            }
            Err(e) => report.ifc_error = Some(e.to_string()),
        }
        report.timings.ifc_seconds = start.elapsed().as_secs_f64();
    }
    write_artifacts(&report, &cfg.outputs)?;
    Ok(report)
}

/// Writes `<dir>/<name>_pdf.<ext>`, `<dir>/<name>_ifc.<ext>` and
/// `<dir>/<name>_report.json` when a directory is set, and the plot when a
/// plot path is set.
pub fn write_artifacts(report: &RunReport, outputs: &OutputSpec) -> Result<()> {
    let labelled: Vec<(&str, &RegionResult)> =
        [("PDF", report.pdf.as_ref()), ("IFC", report.ifc.as_ref())].into_iter().filter_map(|(l, r)| Some((l, r?))).collect();
    if let Some(dir) = &outputs.dir {
        for (label, result) in &labelled {
            let file = dir.join(format!("{}_{}.{}", report.name, label.to_ascii_lowercase(), outputs.format.extension()));
            emit_frontier(&result.region, outputs.format, &file, Some(&report.config_hash))?;
        }
        let json = serde_json::to_string_pretty(report).expect("report serializes") + "\n";
        write_text(&dir.join(format!("{}_report.json", report.name)), &json)?;
    }
    if let Some(plot) = &outputs.plot {
        let series: Vec<(&str, &RateRegion)> = labelled.iter().map(|(l, r)| (*l, &r.region)).collect();
        emit_plot(&series, plot)?;
    }
    Ok(())
}
