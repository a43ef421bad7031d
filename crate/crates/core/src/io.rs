//! Delimited-text matrix format.
//!
//! One observation per row, period decimal separator, UTF-8. The first
//! row is a header unless told otherwise; an optional label column is
//! split off by name.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{DataMatrix, LabelVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadOptions {
    pub delimiter: u8,
    pub has_header: bool,
    pub label_column: Option<String>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: true,
            label_column: None,
        }
    }
}

pub fn load_matrix(
    path: impl AsRef<Path>,
    opts: &LoadOptions,
) -> Result<(DataMatrix, Option<LabelVector>)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    read_matrix(file, opts)
}

pub fn read_matrix<R: Read>(
    reader: R,
    opts: &LoadOptions,
) -> Result<(DataMatrix, Option<LabelVector>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(opts.delimiter)
        .has_headers(opts.has_header)
        .flexible(true)
        .from_reader(reader);

    let mut header: Option<Vec<String>> = if opts.has_header {
        Some(rdr.headers()?.iter().map(|s| s.trim().to_owned()).collect())
    } else {
        None
    };
    if opts.label_column.is_some() && header.is_none() {
        return Err(Error::UnknownColumn(
            opts.label_column.clone().unwrap_or_default(),
        ));
    }

    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut labels = Vec::new();
    let mut label_idx = None;
    let mut width = header.as_ref().map(Vec::len);

    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRow {
                row,
                found: record.len(),
                expected,
            });
        }
        let names = header.get_or_insert_with(|| (0..expected).map(|r| format!("f{r}")).collect());
        if columns.is_empty() {
            if let Some(label) = &opts.label_column {
                label_idx = Some(
                    names
                        .iter()
                        .position(|n| n == label)
                        .ok_or_else(|| Error::UnknownColumn(label.clone()))?,
                );
            }
            columns = vec![Vec::new(); expected];
        }
        for (c, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            if Some(c) == label_idx {
                let id = cell
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidLabel(cell.to_owned()))?;
                labels.push(id);
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                column: names[c].clone(),
                value: cell.to_owned(),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    row,
                    column: names[c].clone(),
                });
            }
            columns[c].push(v);
        }
    }

    let mut names = header.unwrap_or_default();
    if let Some(li) = label_idx {
        names.remove(li);
        columns.remove(li);
    } else if let Some(label) = &opts.label_column {
        // header only, no data rows
        if !names.contains(label) {
            return Err(Error::UnknownColumn(label.clone()));
        }
        names.retain(|n| n != label);
    }
    if columns.is_empty() {
        columns = vec![Vec::new(); names.len()];
    }
    if columns.first().map_or(0, Vec::len) < 2 {
        return Err(Error::TooFewObservations {
            required: 2,
            found: columns.first().map_or(0, Vec::len),
        });
    }
    let m = DataMatrix::from_columns(names, columns)?;
    let labels = label_idx.map(|_| LabelVector::new(labels));
    Ok((m, labels))
}

/// Writes the matrix with a header row, appending a `label` column when
/// labels are given.
pub fn write_matrix<W: Write>(
    writer: W,
    m: &DataMatrix,
    labels: Option<&LabelVector>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = m.names().iter().map(String::as_str).collect();
    if labels.is_some() {
        header.push("label");
    }
    w.write_record(&header)?;
    let mut row = Vec::with_capacity(header.len());
    for i in 0..m.n() {
        row.clear();
        row.extend((0..m.p()).map(|r| m.get(i, r).to_string()));
        if let Some(l) = labels {
            row.push(l[i].to_string());
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str, opts: &LoadOptions) -> Result<(DataMatrix, Option<LabelVector>)> {
        read_matrix(text.as_bytes(), opts)
    }

    #[test]
    fn parses_plain_matrix() {
        let (m, l) = read("a,b\n1,2\n3,4\n5,6\n", &LoadOptions::default()).unwrap();
        assert_eq!((m.n(), m.p()), (3, 2));
        assert_eq!(m.column(0), &[1.0, 3.0, 5.0]);
        assert!(l.is_none());
    }

    #[test]
    fn splits_label_column() {
        let opts = LoadOptions {
            label_column: Some("y".into()),
            ..Default::default()
        };
        let (m, l) = read("a,y,b\n1,0,2\n3,1,4\n5,1,6\n", &opts).unwrap();
        assert_eq!(m.names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(l.unwrap().as_slice(), &[0, 1, 1]);
    }

    #[test]
    fn reports_bad_cell_location() {
        let err = read("a,b\n1,2\n3,abc\n", &LoadOptions::default()).unwrap_err();
        match err {
            Error::Parse { row, column, value } => {
                assert_eq!((row, column.as_str(), value.as_str()), (1, "b", "abc"));
            }
            e => panic!("unexpected {e}"),
        }
        assert!(err_string("a,b\n1,2\n3,abc\n").contains("row 1"));
    }

    fn err_string(text: &str) -> String {
        read(text, &LoadOptions::default()).unwrap_err().to_string()
    }

    #[test]
    fn other_errors() {
        assert!(matches!(
            read("a,a\n1,2\n3,4\n", &LoadOptions::default()),
            Err(Error::DuplicateName(_))
        ));
        assert!(matches!(
            read("a,b\n1,2\n", &LoadOptions::default()),
            Err(Error::TooFewObservations { found: 1, .. })
        ));
        assert!(matches!(
            read("a,b\n1,2\n3\n", &LoadOptions::default()),
            Err(Error::RaggedRow { row: 1, .. })
        ));
        let opts = LoadOptions {
            label_column: Some("z".into()),
            ..Default::default()
        };
        assert!(matches!(
            read("a,b\n1,2\n3,4\n", &opts),
            Err(Error::UnknownColumn(_))
        ));
    }

    #[test]
    fn tab_delimited_without_header() {
        let opts = LoadOptions {
            delimiter: b'\t',
            has_header: false,
            label_column: None,
        };
        let (m, _) = read("1\t2\n3\t4\n", &opts).unwrap();
        assert_eq!(m.names(), &["f0".to_string(), "f1".to_string()]);
    }

    #[test]
    fn write_then_read_back() {
        let m = DataMatrix::from_columns(
            vec!["x".into(), "y".into()],
            vec![vec![0.1, 1.0 / 3.0, -2.5], vec![1e-300, 7.0, 0.0]],
        )
        .unwrap();
        let labels = LabelVector::new(vec![0, 1, 0]);
        let mut buf = Vec::new();
        write_matrix(&mut buf, &m, Some(&labels)).unwrap();
        let opts = LoadOptions {
            label_column: Some("label".into()),
            ..Default::default()
        };
        let (back, l) = read_matrix(buf.as_slice(), &opts).unwrap();
        assert_eq!(back, m);
        assert_eq!(l.unwrap(), labels);
    }
}
