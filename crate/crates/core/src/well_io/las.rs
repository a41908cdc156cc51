//! LAS 2.0 subset: `~V`, `~W`, `~C`, `~A` sections, unwrapped data.

use std::fmt::Write as _;

use super::{Curve, WellLog};
use crate::error::{Error, Result};

/// Conventional LAS null value.
pub const DEFAULT_NULL_SENTINEL: f64 = -999.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Version,
    Well,
    Curve,
    Ascii,
    Other,
}

struct HeaderLine<'a> {
    mnemonic: &'a str,
    unit: &'a str,
    data: &'a str,
}

/// Splits `MNEM.UNIT  DATA : DESCRIPTION`.
fn parse_header_line(line: &str) -> Option<HeaderLine<'_>> {
    let line = line.trim();
    let dot = line.find('.')?;
    let mnemonic = line[..dot].trim();
    let rest = &line[dot + 1..];
    let unit_end = rest.find(char::is_whitespace).unwrap_or(rest.len());
    let (unit, rest) = rest.split_at(unit_end);
    // A unit cannot contain the description separator.
    let (unit, rest) = match unit.find(':') {
        Some(c) => (&unit[..c], &rest[..0]),
        None => (unit, rest),
    };
    let data = match rest.rfind(':') {
        Some(c) => &rest[..c],
        None => rest,
    };
    Some(HeaderLine {
        mnemonic,
        unit,
        data: data.trim(),
    })
}

/// Parses LAS text. Cells equal to `null_sentinel` become missing.
pub fn parse_las(text: &str, null_sentinel: f64) -> Result<WellLog> {
    let mut section = None;
    let mut seen_version = false;
    let mut seen_well = false;
    let mut seen_ascii = false;
    let mut well_id = String::new();
    let mut curve_defs: Vec<(String, String)> = Vec::new();
    let mut columns: Vec<Vec<Option<f64>>> = Vec::new();
    let mut depths = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(tag) = line.strip_prefix('~') {
            let s = match tag.chars().next().map(|c| c.to_ascii_uppercase()) {
                Some('V') => Section::Version,
                Some('W') => Section::Well,
                Some('C') => Section::Curve,
                Some('A') => Section::Ascii,
                _ => Section::Other,
            };
            match s {
                Section::Version => seen_version = true,
                Section::Well => seen_well = true,
                Section::Ascii => {
                    if curve_defs.is_empty() {
                        return Err(Error::MissingSection("~Curve"));
                    }
                    seen_ascii = true;
                    columns = vec![Vec::new(); curve_defs.len() - 1];
                }
                _ => {}
            }
            section = Some(s);
            continue;
        }
        let las_err = |message: String| Error::Las { line: lineno, message };
        match section {
            None => return Err(las_err("data before first section header".into())),
            Some(Section::Version) => {
                let h = parse_header_line(line).ok_or_else(|| las_err("malformed header line".into()))?;
                if h.mnemonic.eq_ignore_ascii_case("WRAP") && h.data.eq_ignore_ascii_case("YES") {
                    return Err(las_err("wrapped LAS is not supported".into()));
                }
            }
            Some(Section::Well) => {
                let h = parse_header_line(line).ok_or_else(|| las_err("malformed header line".into()))?;
                if h.mnemonic.eq_ignore_ascii_case("WELL") {
                    well_id = h.data.to_string();
                }
            }
            Some(Section::Curve) => {
                let h = parse_header_line(line).ok_or_else(|| las_err("malformed curve line".into()))?;
                if h.mnemonic.is_empty() {
                    return Err(las_err("empty curve mnemonic".into()));
                }
                curve_defs.push((h.mnemonic.to_string(), h.unit.to_string()));
            }
            Some(Section::Other) => {}
            Some(Section::Ascii) => {
                let mut cells = line.split_whitespace();
                let mut count = 0;
                let parse_cell = |cell: &str| -> Result<f64> {
                    cell.parse::<f64>()
                        .map_err(|_| las_err(format!("unparseable value {cell:?}")))
                };
                let depth_cell = cells.next().expect("non-empty line has a cell");
                depths.push(parse_cell(depth_cell)?);
                count += 1;
                for cell in cells {
                    let v = parse_cell(cell)?;
                    if count < curve_defs.len() {
                        columns[count - 1].push(if v == null_sentinel { None } else { Some(v) });
                    }
                    count += 1;
                }
                if count != curve_defs.len() {
                    return Err(las_err(format!(
                        "row has {count} values, expected {}",
                        curve_defs.len()
                    )));
                }
            }
        }
    }

    if !seen_version {
        return Err(Error::MissingSection("~Version"));
    }
    if !seen_well {
        return Err(Error::MissingSection("~Well"));
    }
    if curve_defs.is_empty() {
        return Err(Error::MissingSection("~Curve"));
    }
    if !seen_ascii {
        return Err(Error::MissingSection("~ASCII"));
    }
    if depths.is_empty() {
        return Err(Error::NoDataRows);
    }
    let curves = curve_defs
        .into_iter()
        .skip(1)
        .zip(columns)
        .map(|((mnemonic, unit), values)| Curve::new(mnemonic, unit, values))
        .collect();
    WellLog::new(well_id, depths, curves)
}

/// Serializes a well as LAS 2.0. Reals use the shortest exact decimal form.
pub fn write_las(well: &WellLog) -> String {
    let mut out = String::new();
    let depths = well.depths();
    let null = fmt_real(DEFAULT_NULL_SENTINEL);
    out.push_str("~VERSION INFORMATION\n");
    out.push_str(" VERS.   2.0 : CWLS LOG ASCII STANDARD - VERSION 2.0\n");
    out.push_str(" WRAP.   NO : ONE LINE PER DEPTH STEP\n");
    out.push_str("~WELL INFORMATION\n");
    let _ = writeln!(out, " STRT.F   {} : START DEPTH", fmt_real(depths[0]));
    let _ = writeln!(out, " STOP.F   {} : STOP DEPTH", fmt_real(depths[depths.len() - 1]));
    let _ = writeln!(out, " STEP.F   {} : STEP", fmt_real(well.step()));
    let _ = writeln!(out, " NULL.    {null} : NULL VALUE");
    let _ = writeln!(out, " WELL.    {} : WELL", well.well_id);
    out.push_str("~CURVE INFORMATION\n");
    out.push_str(" DEPT.F   : DEPTH\n");
    for c in well.curves() {
        let _ = writeln!(out, " {}.{}   : ", c.mnemonic, c.unit);
    }
    out.push_str("~ASCII\n");
    let curves: Vec<&Curve> = well.curves().collect();
    for (i, d) in depths.iter().enumerate() {
        out.push_str(&fmt_real(*d));
        for c in &curves {
            out.push(' ');
            match c.values[i] {
                Some(v) => out.push_str(&fmt_real(v)),
                None => out.push_str(&null),
            }
        }
        out.push('\n');
    }
    out
}

pub(crate) fn fmt_real(v: f64) -> String {
    // `{}` on f64 is the shortest string that parses back to the same bits.
    format!("{v}")
}
