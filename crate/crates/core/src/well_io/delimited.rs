//! CSV well logs. A header row is required; a curve header may carry its
//! unit in brackets, e.g. `GR [API]`.

use serde::{Deserialize, Serialize};

use super::las::fmt_real;
use super::{Curve, WellLog};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvConfig {
    /// Name of the depth column; `None` means the first column.
    pub depth_column: Option<String>,
    pub null_token: String,
    pub well_id: String,
}

impl Default for CsvConfig {
    fn default() -> Self {
        Self {
            depth_column: None,
            null_token: "NA".to_string(),
            well_id: String::new(),
        }
    }
}

fn split_unit(header: &str) -> (String, String) {
    let header = header.trim();
    if let (Some(open), true) = (header.find('['), header.ends_with(']')) {
        let name = header[..open].trim().to_string();
        let unit = header[open + 1..header.len() - 1].trim().to_string();
        (name, unit)
    } else {
        (header.to_string(), String::new())
    }
}

pub fn parse_csv(text: &str, config: &CsvConfig) -> Result<WellLog> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Csv {
            record: 0,
            message: e.to_string(),
        })?
        .clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::Csv {
            record: 0,
            message: "missing header row".into(),
        });
    }
    let depth_idx = match &config.depth_column {
        None => 0,
        Some(name) => headers
            .iter()
            .position(|h| split_unit(h).0 == *name)
            .ok_or_else(|| Error::UnknownCurve(name.clone()))?,
    };

    let mut depths = Vec::new();
    let mut columns: Vec<Vec<Option<f64>>> = vec![Vec::new(); headers.len() - 1];
    for (rec_no, record) in reader.records().enumerate() {
        let record_no = rec_no + 1;
        let record = record.map_err(|e| Error::Csv {
            record: record_no,
            message: e.to_string(),
        })?;
        if record.len() != headers.len() {
            return Err(Error::Csv {
                record: record_no,
                message: format!("row has {} fields, expected {}", record.len(), headers.len()),
            });
        }
        let mut col = 0;
        for (j, cell) in record.iter().enumerate() {
            let value = if cell == config.null_token {
                None
            } else {
                Some(cell.parse::<f64>().map_err(|_| Error::Csv {
                    record: record_no,
                    message: format!("unparseable value {cell:?} in column {}", &headers[j]),
                })?)
            };
            if j == depth_idx {
                depths.push(value.ok_or_else(|| Error::Csv {
                    record: record_no,
                    message: "missing depth".into(),
                })?);
            } else {
                columns[col].push(value);
                col += 1;
            }
        }
    }
    if depths.is_empty() {
        return Err(Error::NoDataRows);
    }
    let curves = headers
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != depth_idx)
        .map(|(_, h)| split_unit(h))
        .zip(columns)
        .map(|((name, unit), values)| Curve::new(name, unit, values))
        .collect();
    WellLog::new(config.well_id.clone(), depths, curves)
}

/// Writes `depth,<curves...>` with missing cells as `null_token`.
pub fn write_csv(well: &WellLog, null_token: &str) -> String {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    let mut header = vec!["depth".to_string()];
    header.extend(well.curves().map(|c| {
        if c.unit.is_empty() {
            c.mnemonic.clone()
        } else {
            format!("{} [{}]", c.mnemonic, c.unit)
        }
    }));
    writer.write_record(&header).expect("in-memory write");
    let curves: Vec<&Curve> = well.curves().collect();
    let mut row = Vec::with_capacity(header.len());
    for (i, d) in well.depths().iter().enumerate() {
        row.clear();
        row.push(fmt_real(*d));
        row.extend(curves.iter().map(|c| match c.values[i] {
            Some(v) => fmt_real(v),
            None => null_token.to_string(),
        }));
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ascii output")
}
