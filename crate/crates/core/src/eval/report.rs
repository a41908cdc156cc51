//! CSV and SVG renderings of an [`EvalReport`].

use std::fmt::Write as _;

use super::benchmark::{EvalReport, ReportEntry};
use crate::error::{Error, Result};
use crate::models::Method;

pub const CSV_HEADER: &str = "method,gap_length,mean,std,trials";

const PALETTE: [&str; 4] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    pub width: u32,
    pub height: u32,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            width: 800,
            height: 500,
        }
    }
}

/// Nine significant digits.
fn sig9(v: f64) -> String {
    format!("{v:.8e}")
}

pub fn render_csv(report: &EvalReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for e in &report.entries {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            e.method,
            e.gap_length,
            sig9(e.mean_score),
            sig9(e.std_score),
            e.trial_count
        );
    }
    out
}

pub fn parse_report_csv(text: &str) -> Result<Vec<ReportEntry>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Csv {
            record: 0,
            message: format!("expected header {CSV_HEADER:?}"),
        });
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = |what: &str| Error::Csv {
                record: i + 1,
                message: format!("bad {what}"),
            };
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 5 {
                return Err(bad("field count"));
            }
            Ok(ReportEntry {
                method: f[0].parse()?,
                gap_length: f[1].parse().map_err(|_| bad("gap_length"))?,
                mean_score: f[2].parse().map_err(|_| bad("mean"))?,
                std_score: f[3].parse().map_err(|_| bad("std"))?,
                trial_count: f[4].parse().map_err(|_| bad("trials"))?,
            })
        })
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Line chart of mean score against gap length, one path per method with a
/// translucent ±1 std band.
pub fn render_svg(report: &EvalReport, options: SvgOptions) -> String {
    let (w, h) = (options.width as f64, options.height as f64);
    let (left, right, top, bottom) = (70.0, 150.0, 40.0, 50.0);
    let plot_w = (w - left - right).max(1.0);
    let plot_h = (h - top - bottom).max(1.0);

    let mut methods: Vec<Method> = report.entries.iter().map(|e| e.method).collect();
    methods.dedup();
    let x_min = report.entries.iter().map(|e| e.gap_length).min().unwrap_or(0) as f64;
    let x_max = report.entries.iter().map(|e| e.gap_length).max().unwrap_or(1) as f64;
    let y_max = report
        .entries
        .iter()
        .map(|e| e.mean_score + e.std_score)
        .fold(0.0, f64::max)
        .max(1e-12)
        * 1.05;
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let px = |x: f64| left + (x - x_min) / x_span * plot_w;
    let py = |y: f64| top + plot_h - (y.max(0.0) / y_max) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        options.width, options.height, options.width, options.height
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{} vs gap length</text>"#,
        left + plot_w / 2.0,
        escape(&report.metric_name)
    );
    // Axes.
    let _ = writeln!(
        svg,
        r#"<line x1="{left}" y1="{0:.1}" x2="{1:.1}" y2="{0:.1}" stroke="black"/>"#,
        top + plot_h,
        left + plot_w
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{:.1}" stroke="black"/>"#,
        top + plot_h
    );
    for i in 0..=4 {
        let y = y_max * i as f64 / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{y:.3}</text>"#,
            left - 6.0,
            py(y) + 4.0
        );
    }
    let mut ticks: Vec<usize> = report.entries.iter().map(|e| e.gap_length).collect();
    ticks.sort_unstable();
    ticks.dedup();
    for t in &ticks {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{t}</text>"#,
            px(*t as f64),
            top + plot_h + 16.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">gap length (samples)</text>"#,
        left + plot_w / 2.0,
        h - 12.0
    );

    for (mi, method) in methods.iter().enumerate() {
        let color = PALETTE[mi % PALETTE.len()];
        let mut pts: Vec<&ReportEntry> = report.entries.iter().filter(|e| e.method == *method).collect();
        pts.sort_by_key(|e| e.gap_length);
        let upper = pts
            .iter()
            .map(|e| (px(e.gap_length as f64), py(e.mean_score + e.std_score)));
        let lower = pts
            .iter()
            .rev()
            .map(|e| (px(e.gap_length as f64), py(e.mean_score - e.std_score)));
        let band: Vec<String> = upper.chain(lower).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            svg,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
            band.join(" ")
        );
        let line: Vec<String> = pts
            .iter()
            .enumerate()
            .map(|(i, e)| {
                format!(
                    "{}{:.2},{:.2}",
                    if i == 0 { "M" } else { "L" },
                    px(e.gap_length as f64),
                    py(e.mean_score)
                )
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<path d="{}" fill="none" stroke="{color}" stroke-width="2"><title>{method}</title></path>"#,
            line.join(" ")
        );
        let ly = top + 10.0 + 20.0 * mi as f64;
        let lx = left + plot_w + 20.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{lx:.1}" y="{:.1}" width="14" height="4" fill="{color}"/>"#,
            ly - 2.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{method}</text>"#,
            lx + 20.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// CSV and SVG renderings.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedReport {
    pub csv: String,
    pub svg: String,
}

pub fn render_report(report: &EvalReport, options: SvgOptions) -> Result<RenderedReport> {
    if report.entries.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(RenderedReport {
        csv: render_csv(report),
        svg: render_svg(report, options),
    })
}
