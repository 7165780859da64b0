use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use super::Dataset;
use crate::error::{Error, Result};

/// How to read a labeled CSV file: one row per example, numeric feature
/// columns and one label column.
///
/// Without a header row (raw UCI files) the label is the last column and
/// features are named `x1, x2, ...`; `label_column` is then ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvOptions {
    pub label_column: String,
    pub missing_label_token: String,
    pub has_headers: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            label_column: "class".to_string(),
            missing_label_token: String::new(),
            has_headers: true,
        }
    }
}

impl CsvOptions {
    pub fn new(label_column: impl Into<String>) -> Self {
        Self {
            label_column: label_column.into(),
            ..Self::default()
        }
    }
}

pub fn load_csv(
    path: impl AsRef<Path>,
    label_column: &str,
    missing_label_token: &str,
) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    load_csv_with(
        file,
        &CsvOptions {
            label_column: label_column.to_string(),
            missing_label_token: missing_label_token.to_string(),
            has_headers: true,
        },
    )
}

/// Reads a dataset from any reader. Labels are remapped to `0..c` in sorted
/// order of their original strings.
pub fn load_csv_with<R: Read>(reader: R, opts: &CsvOptions) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(opts.has_headers)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(reader);
    let (headers, label_pos) = if opts.has_headers {
        let headers = rdr.headers()?.clone();
        if headers.is_empty() {
            return Err(Error::Empty("csv has no header".into()));
        }
        let label_pos = headers
            .iter()
            .position(|h| h == opts.label_column)
            .ok_or_else(|| {
                Error::invalid(
                    "label_column",
                    format!("column `{}` not in header", opts.label_column),
                )
            })?;
        (headers, label_pos)
    } else {
        // the first record fixes the width; csv hands it back again below
        let width = rdr.headers()?.len();
        if width < 2 {
            return Err(Error::Empty(
                "csv needs a feature and a label column".into(),
            ));
        }
        let mut names: Vec<String> = (1..width).map(|i| format!("x{i}")).collect();
        names.push("class".to_string());
        (csv::StringRecord::from(names), width - 1)
    };
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_pos)
        .map(|(_, h)| h.to_string())
        .collect();
    let d0 = feature_names.len();

    let mut values = Vec::new();
    let mut raw_labels = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        // row numbers are 1-based data rows, header excluded
        let row = row + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            message: e.to_string(),
        })?;
        if record.len() != headers.len() {
            return Err(Error::Parse {
                row,
                message: format!("expected {} fields, got {}", headers.len(), record.len()),
            });
        }
        for (i, field) in record.iter().enumerate() {
            if i == label_pos {
                raw_labels.push(if field == opts.missing_label_token {
                    None
                } else {
                    Some(field.to_string())
                });
            } else {
                let v: f64 = field.parse().map_err(|_| Error::Parse {
                    row,
                    message: format!("non-numeric value `{field}` in column `{}`", &headers[i]),
                })?;
                values.push(v);
            }
        }
    }
    let n = raw_labels.len();
    if n == 0 {
        return Err(Error::Empty("csv has no data rows".into()));
    }

    let names: Vec<String> = raw_labels
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if names.is_empty() {
        return Err(Error::NoLabels);
    }
    let labels = raw_labels
        .iter()
        .map(|l| {
            l.as_ref()
                .map(|s| names.binary_search(s).expect("label collected above"))
        })
        .collect();

    // values are row-major per example, i.e. column-major for the d0 × n matrix
    let x = DMatrix::from_vec(d0, n, values);
    Dataset::new(x, labels, names.len())?
        .with_class_names(names)?
        .with_feature_names(feature_names)
}

/// Writes features then the label column; missing labels use `missing_label_token`.
pub fn write_csv<W: Write>(
    d: &Dataset,
    writer: W,
    label_column: &str,
    missing_label_token: &str,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = d.feature_names().iter().map(String::as_str).collect();
    header.push(label_column);
    w.write_record(&header)?;
    for (i, label) in d.labels().iter().enumerate() {
        let mut rec: Vec<String> = d.x().column(i).iter().map(|v| format!("{v:?}")).collect();
        rec.push(match label {
            Some(y) => d.class_names()[*y].clone(),
            None => missing_label_token.to_string(),
        });
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}
