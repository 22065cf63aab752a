//! Text artifacts: frontier CSV and JSON, SVG region plots, and tabular
//! formats for joint distributions and inequality systems.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{RatePair, SplitParams};
use crate::discrete::JointPmf;
use crate::error::Result;
use crate::fme::{Inequality, LinearSystem, Rational};
use crate::region::{Provenance, RateRegion};

/// Significant digits of every rate written to text.
pub const SIG_DIGITS: usize = 12;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot emit an empty rate region")]
    EmptyRegion,
    #[error("a plot needs at least one region")]
    NoRegions,
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown format {0:?}, expected csv or json")]
    Format(String),
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse { line, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, IoError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(IoError::Format(s.to_string())),
        }
    }
}

/// `x` with `digits` significant digits in the shortest of fixed or
/// exponent notation, trailing zeros removed (C's `%.{digits}g`).
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn frontier_csv(region: &RateRegion) -> Result<String, IoError> {
    if region.is_empty() {
        return Err(IoError::EmptyRegion);
    }
    let mut out = String::from("r1,r2\n");
    for p in &region.frontier {
        writeln!(out, "{},{}", format_sig(p.r1, SIG_DIGITS), format_sig(p.r2, SIG_DIGITS)).expect("string write");
    }
    Ok(out)
}

pub fn parse_frontier_csv(text: &str) -> Result<Vec<RatePair>, IoError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim() == "r1,r2" => {}
        Some((i, _)) => return Err(parse_err(i + 1, "expected header r1,r2")),
        None => return Err(parse_err(1, "missing header")),
    }
    lines
        .map(|(i, line)| {
            let (a, b) = line.split_once(',').ok_or_else(|| parse_err(i + 1, "expected two columns"))?;
            let num = |s: &str| s.trim().parse::<f64>().map_err(|e| parse_err(i + 1, format!("{s:?}: {e}")));
            Ok(RatePair { r1: num(a)?, r2: num(b)? })
        })
        .collect()
}

/// JSON form of a frontier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierDocument {
    pub provenance: Provenance,
    /// Hash of the configuration that generated the frontier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    pub frontier: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<SplitParams>>,
}

impl FrontierDocument {
    pub fn region(&self) -> RateRegion {
        RateRegion {
            provenance: self.provenance,
            frontier: self.frontier.iter().map(|&[r1, r2]| RatePair { r1, r2 }).collect(),
            witnesses: self.witnesses.clone(),
        }
    }
}

pub fn frontier_json(region: &RateRegion, config_hash: Option<&str>) -> Result<String, IoError> {
    if region.is_empty() {
        return Err(IoError::EmptyRegion);
    }
    let doc = FrontierDocument {
        provenance: region.provenance,
        config_hash: config_hash.map(str::to_string),
        frontier: region.frontier.iter().map(|p| [p.r1, p.r2]).collect(),
        witnesses: region.witnesses.clone(),
    };
    Ok(serde_json::to_string_pretty(&doc).expect("frontier serializes") + "\n")
}

pub fn parse_frontier_json(text: &str) -> Result<FrontierDocument, IoError> {
    serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))
}

/// Writes `contents`, creating missing parent directories.
pub fn write_text(dest: &Path, contents: &str) -> Result<(), IoError> {
    let wrap = |source| IoError::Write { path: dest.to_path_buf(), source };
    if let Some(parent) = dest.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(wrap)?;
    }
    fs::write(dest, contents).map_err(wrap)
}

pub fn read_text(src: &Path) -> Result<String, IoError> {
    fs::read_to_string(src).map_err(|source| IoError::Read { path: src.to_path_buf(), source })
}

pub fn emit_frontier(region: &RateRegion, format: Format, dest: &Path, config_hash: Option<&str>) -> Result<(), IoError> {
    let text = match format {
        Format::Csv => frontier_csv(region)?,
        Format::Json => frontier_json(region, config_hash)?,
    };
    write_text(dest, &text)
}

const PLOT_WIDTH: f64 = 640.0;
const PLOT_HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// One SVG with a polyline per labelled region, the dashed `R₁ = R₂` line
/// and a legend. Both axes share the unit length.
pub fn plot_svg(regions: &[(&str, &RateRegion)]) -> Result<String, IoError> {
    if regions.is_empty() {
        return Err(IoError::NoRegions);
    }
    let extent = regions
        .iter()
        .flat_map(|(_, r)| r.frontier.iter().flat_map(|p| [p.r1, p.r2]))
        .fold(0.0f64, f64::max);
    let extent = if extent > 0.0 { extent * 1.05 } else { 1.0 };
    let (w, h) = (PLOT_WIDTH - MARGIN_LEFT - MARGIN_RIGHT, PLOT_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM);
    let side = w.min(h);
    let x = |r1: f64| MARGIN_LEFT + side * r1 / extent;
    let y = |r2: f64| MARGIN_TOP + side * (1.0 - r2 / extent);

    let mut svg = String::new();
    let mut line = |s: String| {
        svg.push_str(&s);
        svg.push('\n');
    };
    line(format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PLOT_WIDTH}" height="{PLOT_HEIGHT}" viewBox="0 0 {PLOT_WIDTH} {PLOT_HEIGHT}" font-family="sans-serif" font-size="12">"#
    ));
    line(format!(r#"<rect width="{PLOT_WIDTH}" height="{PLOT_HEIGHT}" fill="white"/>"#));
    let (x0, y0, x1, y1) = (x(0.0), y(0.0), x(extent), y(extent));
    line(format!(r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}" stroke="black"/>"#));
    line(format!(r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}" stroke="black"/>"#));
    for k in 0..=5 {
        let v = extent * k as f64 / 5.0;
        let label = format_sig(v, 3);
        line(format!(r#"<line x1="{0:.2}" y1="{y0:.2}" x2="{0:.2}" y2="{1:.2}" stroke="black"/>"#, x(v), y0 + 5.0));
        line(format!(r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, x(v), y0 + 18.0));
        line(format!(r#"<line x1="{x0:.2}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="black"/>"#, y(v), x0 - 5.0));
        line(format!(r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, x0 - 8.0, y(v) + 4.0));
    }
    line(format!(
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">R₁ (bits/use)</text>"#,
        MARGIN_LEFT + side / 2.0,
        y0 + 42.0
    ));
    line(format!(
        r#"<text x="{0:.2}" y="{1:.2}" text-anchor="middle" transform="rotate(-90 {0:.2} {1:.2})">R₂ (bits/use)</text>"#,
        MARGIN_LEFT - 45.0,
        MARGIN_TOP + side / 2.0
    ));
    line(format!(
        r#"<line class="diagonal" x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="gray" stroke-dasharray="6,4"/>"#
    ));
    let legend_x = MARGIN_LEFT + side + 20.0;
    for (i, (label, region)) in regions.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = region.frontier.iter().map(|p| format!("{:.3},{:.3}", x(p.r1), y(p.r2))).collect();
        line(format!(
            r#"<polyline class="region" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            points.join(" ")
        ));
        let ly = MARGIN_TOP + 20.0 * (i as f64 + 1.0);
        line(format!(
            r#"<line x1="{legend_x:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            legend_x + 24.0
        ));
        line(format!(r#"<text class="legend" x="{:.2}" y="{:.2}">{}</text>"#, legend_x + 30.0, ly + 4.0, escape_xml(label)));
    }
    let ly = MARGIN_TOP + 20.0 * (regions.len() as f64 + 1.0);
    line(format!(
        r#"<line x1="{legend_x:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="gray" stroke-dasharray="6,4"/>"#,
        legend_x + 24.0
    ));
    line(format!(r#"<text class="legend" x="{:.2}" y="{:.2}">R₁ = R₂</text>"#, legend_x + 30.0, ly + 4.0));
    line("</svg>".to_string());
    Ok(svg)
}

pub fn emit_plot(regions: &[(&str, &RateRegion)], dest: &Path) -> Result<(), IoError> {
    write_text(dest, &plot_svg(regions)?)
}

/// Table with header `name:size,...,p` and one row of symbol indices and
/// probability per nonzero entry.
pub fn pmf_csv(p: &JointPmf) -> String {
    let mut out: String = p.names().iter().zip(p.cards()).map(|(n, c)| format!("{n}:{c},")).collect();
    out.push_str("p\n");
    for (i, &prob) in p.probs().iter().enumerate() {
        if prob == 0.0 {
            continue;
        }
        for s in p.symbols(i) {
            write!(out, "{s},").expect("string write");
        }
        writeln!(out, "{prob:?}").expect("string write");
    }
    out
}

/// Inverse of [`pmf_csv`]; entries not listed are zero.
pub fn parse_pmf_csv(text: &str) -> Result<JointPmf> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.last() != Some(&"p") {
        return Err(parse_err(hline + 1, "last column must be p").into());
    }
    let mut names = Vec::new();
    let mut cards = Vec::new();
    for col in &cols[..cols.len() - 1] {
        let (name, size) = col.split_once(':').ok_or_else(|| parse_err(hline + 1, format!("expected name:size, got {col:?}")))?;
        names.push(name.to_string());
        cards.push(size.parse::<usize>().map_err(|e| parse_err(hline + 1, format!("{col:?}: {e}")))?);
    }
    let total = cards.iter().try_fold(1usize, |acc, &c| acc.checked_mul(c)).unwrap_or(usize::MAX);
    let limits = crate::discrete::PmfLimits::default();
    if total > limits.max_entries {
        return Err(crate::discrete::PmfError::TooLarge { entries: total, limit: limits.max_entries }.into());
    }
    let mut probs = vec![0.0; total];
    for (i, line) in lines {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != cols.len() {
            return Err(parse_err(i + 1, format!("expected {} columns", cols.len())).into());
        }
        let mut index = 0usize;
        for (cell, &card) in cells.iter().zip(&cards) {
            let s: usize = cell.parse().map_err(|e| parse_err(i + 1, format!("{cell:?}: {e}")))?;
            if s >= card {
                return Err(parse_err(i + 1, format!("symbol {s} out of range 0..{card}")).into());
            }
            index = index * card + s;
        }
        let last = cells[cells.len() - 1];
        probs[index] += last.parse::<f64>().map_err(|e| parse_err(i + 1, format!("{last:?}: {e}")))?;
    }
    Ok(JointPmf::new(names, cards, probs)?)
}

/// Table with header `var,...,rhs`, one row of exact coefficients per
/// inequality `Σ coeff·var ≤ rhs`.
pub fn system_csv(sys: &LinearSystem) -> String {
    let mut out: String = sys.vars().iter().map(|v| format!("{v},")).collect();
    out.push_str("rhs\n");
    for row in sys.rows() {
        for v in sys.vars() {
            write!(out, "{},", row.coeff(v)).expect("string write");
        }
        writeln!(out, "{}", row.rhs()).expect("string write");
    }
    out
}

pub fn parse_system_csv(text: &str) -> Result<LinearSystem, IoError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.last() != Some(&"rhs") {
        return Err(parse_err(hline + 1, "last column must be rhs"));
    }
    let vars = &cols[..cols.len() - 1];
    let mut sys = LinearSystem::new(vars);
    for (i, line) in lines {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != cols.len() {
            return Err(parse_err(i + 1, format!("expected {} columns", cols.len())));
        }
        let q = |s: &str| Rational::from_str(s).map_err(|e| parse_err(i + 1, format!("{s:?}: {e}")));
        let terms = vars.iter().zip(&cells).map(|(v, c)| Ok((v.to_string(), q(c)?))).collect::<Result<Vec<_>, IoError>>()?;
        sys.push(Inequality::new(terms, q(cells[cells.len() - 1])?));
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fme::{int, rat};
    use proptest::prelude::*;

    fn region(points: &[(f64, f64)]) -> RateRegion {
        RateRegion::new(Provenance::Custom, points.iter().map(|&(r1, r2)| RatePair { r1, r2 }).collect())
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(0.5, 12), "0.5");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(0.5 * 11f64.log2(), 12), "1.72971580932");
        assert_eq!(format_sig(123456789012345.0, 12), "1.23456789012e+14");
        assert_eq!(format_sig(1.5e-7, 12), "1.5e-07");
        assert_eq!(format_sig(0.999_999_999_999_9, 12), "1");
    }

    #[test]
    fn two_point_csv() {
        let csv = frontier_csv(&region(&[(0.0, 1.0), (1.0, 0.0)])).unwrap();
        assert_eq!(csv, "r1,r2\n0,1\n1,0\n");
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn empty_region_refused() {
        let empty = region(&[]);
        assert!(matches!(frontier_csv(&empty), Err(IoError::EmptyRegion)));
        assert!(matches!(frontier_json(&empty, None), Err(IoError::EmptyRegion)));
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(emit_frontier(&empty, Format::Csv, &dir.path().join("f.csv"), None), Err(IoError::EmptyRegion)));
    }

    #[test]
    fn unwritable_destination() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let dest = blocker.join("out.csv");
        let err = emit_frontier(&region(&[(0.0, 0.0)]), Format::Csv, &dest, None).unwrap_err();
        assert!(matches!(err, IoError::Write { .. }));
        assert!(matches!(emit_plot(&[("a", &region(&[(0.0, 0.0)]))], &dest), Err(IoError::Write { .. })));
    }

    #[test]
    fn json_carries_provenance_and_hash() {
        let mut r = region(&[(0.0, 1.0), (1.0, 0.0)]);
        r.provenance = Provenance::Ifc;
        let text = frontier_json(&r, Some("abc")).unwrap();
        let doc = parse_frontier_json(&text).unwrap();
        assert_eq!(doc.provenance, Provenance::Ifc);
        assert_eq!(doc.config_hash.as_deref(), Some("abc"));
        assert_eq!(doc.region(), r);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["provenance"], "ifc");
    }

    #[test]
    fn trivial_plot_is_valid_svg() {
        let svg = plot_svg(&[("trivial", &region(&[(0.0, 0.0)]))]).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("R₁ (bits/use)") && svg.contains("R₂ (bits/use)"));
        assert!(svg.contains("stroke-dasharray"));
        assert!(matches!(plot_svg(&[]), Err(IoError::NoRegions)));
    }

    #[test]
    fn identical_regions_get_two_entries() {
        let r = region(&[(0.0, 1.0), (1.0, 0.0)]);
        let svg = plot_svg(&[("first", &r), ("second", &r)]).unwrap();
        let lines: Vec<&str> = svg.lines().filter(|l| l.contains("<polyline")).collect();
        assert_eq!(lines.len(), 2);
        let pts = |l: &str| l.split("points=\"").nth(1).unwrap().split('"').next().unwrap().to_string();
        assert_eq!(pts(lines[0]), pts(lines[1]));
        assert!(svg.contains(">first<") && svg.contains(">second<"));
    }

    #[test]
    fn legend_is_escaped() {
        let svg = plot_svg(&[("a<b & c", &region(&[(0.0, 0.0)]))]).unwrap();
        assert!(svg.contains("a&lt;b &amp; c"));
    }

    #[test]
    fn pmf_round_trip() {
        let p = JointPmf::new(vec!["X".into(), "Y".into()], vec![2, 3], vec![0.1, 0.2, 0.0, 0.3, 0.15, 0.25]).unwrap();
        let text = pmf_csv(&p);
        assert!(text.starts_with("X:2,Y:3,p\n"));
        assert_eq!(parse_pmf_csv(&text).unwrap(), p);
        assert!(parse_pmf_csv("X:2,p\n0,0.5\n2,0.5\n").is_err());
        assert!(matches!(parse_pmf_csv("X:2,p\n0,0.5\n"), Err(crate::Error::Pmf(_))));
    }

    #[test]
    fn system_round_trip() {
        let sys = LinearSystem::new(&["R1", "R2"])
            .le([("R1", int(1)), ("R2", int(1))], rat(3, 2))
            .le([("R2", int(1))], int(1))
            .nonnegative(&["R1", "R2"]);
        let text = system_csv(&sys);
        assert!(text.starts_with("R1,R2,rhs\n"));
        assert!(text.contains("2,2,3\n"));
        assert_eq!(parse_system_csv(&text).unwrap(), sys);
    }

    proptest! {
        #[test]
        fn csv_round_trip(points in proptest::collection::vec((0.0f64..1e3, 0.0f64..1e3), 1..40)) {
            let r = region(&points.iter().map(|&(a, b)| (a, b)).collect::<Vec<_>>());
            let text = frontier_csv(&r).unwrap();
            let parsed = parse_frontier_csv(&text).unwrap();
            prop_assert_eq!(parsed.len(), r.len());
            for (p, q) in parsed.iter().zip(&r.frontier) {
                prop_assert!((p.r1 - q.r1).abs() <= 5e-12 * q.r1.abs().max(1e-300));
                prop_assert!((p.r2 - q.r2).abs() <= 5e-12 * q.r2.abs().max(1e-300));
            }
            let again = frontier_csv(&RateRegion::new(Provenance::Custom, parsed)).unwrap();
            prop_assert_eq!(again, text);
        }
    }
}
