//! CSV, JSON and SVG artifacts.
//!
//! Spectrum CSV: `#`-prefixed metadata lines (`# key: value`), then the header
//! `delta_c,re_h,im_h` and one row per point. 2D scans use the long format
//! `axis_value,delta_c,im_h`. Numbers are written with 17 significant digits so
//! parsing reproduces the in-memory values.
//!
//! Heatmaps map absorption linearly over `[0, max]` from `#0b0b3b` (zero) to
//! `#ffd700` (max); negative values clamp to the zero color.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::{ScanGrid2D, Spectrum, SpectrumPoint};

pub const SPECTRUM_HEADER: &str = "delta_c,re_h,im_h";
pub const GRID_HEADER: &str = "axis_value,delta_c,im_h";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }

    /// Parses a comma-separated list such as `csv,svg`; duplicates collapse.
    pub fn parse_list(s: &str) -> Result<Vec<Format>> {
        let mut out: Vec<Format> = s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::parse).collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::InvalidArgument("no output format given".into()));
        }
        Ok(out)
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?} (expected csv, json or svg)"))),
        }
    }
}

/// Ordered `key: value` metadata lines.
pub type Metadata = Vec<(String, String)>;

pub fn spectrum_metadata(s: &Spectrum) -> Metadata {
    let mut meta = vec![("version".to_string(), crate::VERSION.to_string()), ("evaluator".to_string(), s.evaluator.clone())];
    if let Some(r) = &s.relaxation {
        meta.push(("relaxation".to_string(), r.clone()));
    }
    meta.push(("params".to_string(), serde_json::to_string(&s.params).expect("params serialize")));
    meta
}

pub fn grid_metadata(g: &ScanGrid2D) -> Metadata {
    let mut meta = vec![("version".to_string(), crate::VERSION.to_string()), ("evaluator".to_string(), g.evaluator.clone())];
    if let Some(r) = &g.relaxation {
        meta.push(("relaxation".to_string(), r.clone()));
    }
    meta.push(("params".to_string(), serde_json::to_string(&g.params).expect("params serialize")));
    meta.push(("axis".to_string(), g.axis.name().to_string()));
    meta
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_metadata(out: &mut String, meta: &[(String, String)]) {
    for (k, v) in meta {
        // Keys and values stay on one line.
        let v = v.replace(['\n', '\r'], " ");
        let _ = writeln!(out, "# {k}: {v}");
    }
}

pub fn spectrum_csv(s: &Spectrum, meta: &[(String, String)]) -> String {
    let mut out = String::new();
    write_metadata(&mut out, meta);
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for p in &s.points {
        let _ = writeln!(out, "{},{},{}", num(p.delta_c), num(p.h.re), num(p.h.im));
    }
    out
}

pub fn grid_csv(g: &ScanGrid2D, meta: &[(String, String)]) -> String {
    let mut out = String::new();
    write_metadata(&mut out, meta);
    out.push_str(GRID_HEADER);
    out.push('\n');
    for (axis_value, row) in g.axis_values.iter().zip(&g.absorption) {
        for (dc, im) in g.delta_c.iter().zip(row) {
            let _ = writeln!(out, "{},{},{}", num(*axis_value), num(*dc), num(*im));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSpectrum {
    pub metadata: Metadata,
    pub points: Vec<SpectrumPoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedGrid {
    pub metadata: Metadata,
    /// `(axis_value, delta_c, im_h)` rows in file order.
    pub rows: Vec<(f64, f64, f64)>,
}

struct CsvBody<'a> {
    metadata: Metadata,
    rows: Vec<(usize, Vec<&'a str>)>,
}

fn split_csv<'a>(text: &'a str, header: &str) -> Result<CsvBody<'a>> {
    let mut metadata = Vec::new();
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if !seen_header {
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim_start();
                let (k, v) = rest.split_once(':').unwrap_or((rest, ""));
                metadata.push((k.trim().to_string(), v.trim().to_string()));
                continue;
            }
            if line.trim() != header {
                return Err(Error::Parse(format!("line {line_no}: expected header {header:?}")));
            }
            seen_header = true;
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        rows.push((line_no, line.split(',').map(str::trim).collect()));
    }
    if !seen_header {
        return Err(Error::Parse(format!("missing header {header:?}")));
    }
    Ok(CsvBody { metadata, rows })
}

fn field(line_no: usize, text: &str) -> Result<f64> {
    let v: f64 = text.parse().map_err(|_| Error::Parse(format!("line {line_no}: {text:?} is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("line {line_no}: {text:?} is not finite")));
    }
    Ok(v)
}

/// Parses a spectrum CSV; detunings must be strictly increasing with at least
/// two rows.
pub fn parse_spectrum_csv(text: &str) -> Result<ParsedSpectrum> {
    let body = split_csv(text, SPECTRUM_HEADER)?;
    let mut points: Vec<SpectrumPoint> = Vec::with_capacity(body.rows.len());
    for (line_no, cols) in body.rows {
        let [dc, re, im] = cols[..] else {
            return Err(Error::Parse(format!("line {line_no}: expected 3 fields, found {}", cols.len())));
        };
        let delta_c = field(line_no, dc)?;
        if let Some(prev) = points.last() {
            if !(delta_c > prev.delta_c) {
                return Err(Error::Parse(format!("line {line_no}: delta_c is not increasing")));
            }
        }
        points.push(SpectrumPoint { delta_c, h: Complex64::new(field(line_no, re)?, field(line_no, im)?) });
    }
    if points.len() < 2 {
        return Err(Error::Parse(format!("spectrum needs at least 2 rows, found {}", points.len())));
    }
    Ok(ParsedSpectrum { metadata: body.metadata, points })
}

pub fn parse_grid_csv(text: &str) -> Result<ParsedGrid> {
    let body = split_csv(text, GRID_HEADER)?;
    let rows = body
        .rows
        .into_iter()
        .map(|(line_no, cols)| match cols[..] {
            [a, d, i] => Ok((field(line_no, a)?, field(line_no, d)?, field(line_no, i)?)),
            _ => Err(Error::Parse(format!("line {line_no}: expected 3 fields, found {}", cols.len()))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ParsedGrid { metadata: body.metadata, rows })
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact types serialize");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, contents).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

// ---------------------------------------------------------------- SVG

const PANEL_W: f64 = 640.0;
const PANEL_H: f64 = 260.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 40.0;
const DISPERSION_COLOR: &str = "#1f4fd1";
const ABSORPTION_COLOR: &str = "#d11f1f";

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.x0 + (x - self.xmin) / (self.xmax - self.xmin) * self.w
    }

    fn py(&self, y: f64) -> f64 {
        self.y0 + self.h - (y - self.ymin) / (self.ymax - self.ymin) * self.h
    }

    fn axes(&self, out: &mut String, xlabel: &str) {
        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000" stroke-width="1"/>"##,
            self.x0, self.y0, self.w, self.h
        );
        for k in 0..=4 {
            let x = self.xmin + (self.xmax - self.xmin) * k as f64 / 4.0;
            let px = self.px(x);
            let _ = writeln!(
                out,
                r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#000"/><text x="{px:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"##,
                self.y0 + self.h,
                self.y0 + self.h + 4.0,
                self.y0 + self.h + 16.0,
                tick(x)
            );
            let y = self.ymin + (self.ymax - self.ymin) * k as f64 / 4.0;
            let py = self.py(y);
            let _ = writeln!(
                out,
                r##"<line x1="{:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#000"/><text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"##,
                self.x0 - 4.0,
                self.x0,
                self.x0 - 6.0,
                py + 4.0,
                tick(y)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
            self.x0 + self.w / 2.0,
            self.y0 + self.h + 32.0,
            escape(xlabel)
        );
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn polyline(out: &mut String, frame: &Frame, xs: &[f64], ys: &[f64], color: &str) {
    let pts: Vec<String> = xs.iter().zip(ys).map(|(&x, &y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y))).collect();
    let _ = writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
}

/// Stacked panels, each with the dispersion `Re h` (blue) and absorption
/// `Im h` (red) traces against the detuning.
pub fn spectra_svg(title: &str, panels: &[(String, &Spectrum)]) -> String {
    let height = MARGIN_T + panels.len() as f64 * (PANEL_H + MARGIN_T + MARGIN_B);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{height:.0}" viewBox="0 0 {:.0} {height:.0}">"#,
        PANEL_W, PANEL_W
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{:.2}" y="18" font-size="14" text-anchor="middle">{}</text>"#, PANEL_W / 2.0, escape(title));
    for (k, (label, s)) in panels.iter().enumerate() {
        let top = MARGIN_T + k as f64 * (PANEL_H + MARGIN_T + MARGIN_B) + MARGIN_T;
        let xs = s.delta_c();
        let re = s.dispersion();
        let im = s.absorption();
        let (mut ymin, mut ymax) = re.iter().chain(&im).fold((0.0f64, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        if ymax - ymin < 1e-12 {
            ymin -= 0.5;
            ymax += 0.5;
        }
        let pad = 0.05 * (ymax - ymin);
        let frame = Frame {
            x0: MARGIN_L,
            y0: top,
            w: PANEL_W - MARGIN_L - MARGIN_R,
            h: PANEL_H,
            xmin: xs[0],
            xmax: xs[xs.len() - 1],
            ymin: ymin - pad,
            ymax: ymax + pad,
        };
        frame.axes(&mut out, "delta_c");
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="12">{}</text>"#, MARGIN_L, top - 6.0, escape(label));
        polyline(&mut out, &frame, &xs, &re, DISPERSION_COLOR);
        polyline(&mut out, &frame, &xs, &im, ABSORPTION_COLOR);
        let legend_x = PANEL_W - MARGIN_R - 140.0;
        let _ = writeln!(
            out,
            r#"<text x="{legend_x:.2}" y="{:.2}" font-size="11" fill="{DISPERSION_COLOR}">Re h (dispersion)</text><text x="{legend_x:.2}" y="{:.2}" font-size="11" fill="{ABSORPTION_COLOR}">Im h (absorption)</text>"#,
            top + 14.0,
            top + 28.0
        );
    }
    out.push_str("</svg>\n");
    out
}

const RAMP_LOW: [f64; 3] = [11.0, 11.0, 59.0];
const RAMP_HIGH: [f64; 3] = [255.0, 215.0, 0.0];

/// Linear color ramp; `t` is clamped to `[0, 1]`.
pub fn ramp(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let c: Vec<u8> = (0..3).map(|i| (RAMP_LOW[i] + (RAMP_HIGH[i] - RAMP_LOW[i]) * t).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Heatmap of absorption over (detuning × axis) with a color bar.
pub fn heatmap_svg(title: &str, g: &ScanGrid2D) -> String {
    let w = 720.0;
    let plot_w = 560.0;
    let plot_h = 400.0;
    let (x0, y0) = (MARGIN_L, 40.0);
    let h = y0 + plot_h + 60.0;
    let max = g.max_absorption().max(f64::MIN_POSITIVE);
    let nx = g.delta_c.len();
    let ny = g.axis_values.len();
    let frame = Frame {
        x0,
        y0,
        w: plot_w,
        h: plot_h,
        xmin: g.delta_c[0],
        xmax: g.delta_c[nx - 1],
        ymin: g.axis_values[0],
        ymax: g.axis_values[ny - 1],
    };
    let cw = plot_w / nx as f64;
    let ch = plot_h / ny as f64;
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#);
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{:.2}" y="20" font-size="14" text-anchor="middle">{}</text>"#, x0 + plot_w / 2.0, escape(title));
    out.push_str("<g shape-rendering=\"crispEdges\">\n");
    for (r, row) in g.absorption.iter().enumerate() {
        let y = y0 + plot_h - (r + 1) as f64 * ch;
        for (c, &v) in row.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                x0 + c as f64 * cw,
                cw + 0.05,
                ch + 0.05,
                ramp(v / max)
            );
        }
    }
    out.push_str("</g>\n");
    // Tick labels are placed on the cell grid extents.
    let axes_frame = Frame { ymin: frame.ymin, ymax: frame.ymax, ..frame };
    axes_frame.axes(&mut out, "delta_c");
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" font-size="12" transform="rotate(-90 16 {:.2})" text-anchor="middle">{}</text>"#,
        y0 + plot_h / 2.0,
        y0 + plot_h / 2.0,
        escape(g.axis.name())
    );
    let bar_x = x0 + plot_w + 30.0;
    let steps = 50;
    for k in 0..steps {
        let t = (k as f64 + 0.5) / steps as f64;
        let y = y0 + plot_h - (k + 1) as f64 * plot_h / steps as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{bar_x:.2}" y="{y:.2}" width="20" height="{:.2}" fill="{}"/>"#,
            plot_h / steps as f64 + 0.05,
            ramp(t)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="11">0</text><text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
        bar_x + 24.0,
        y0 + plot_h,
        bar_x + 24.0,
        y0 + 10.0,
        tick(max)
    );
    out.push_str("</svg>\n");
    out
}
