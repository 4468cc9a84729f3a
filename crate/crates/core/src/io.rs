//! CSV ingestion and emission, and chronological splitting.
//!
//! Input files carry a `timestamp,value` or `timestamp,value,label` header.
//! Labels are `0` or `1`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{LabelSeries, Series};

pub fn read_csv(path: impl AsRef<Path>) -> Result<(Series, Option<LabelSeries>)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let header_err = |message: String| Error::Parse {
        path: path.to_path_buf(),
        message,
    };
    let headers = reader
        .headers()
        .map_err(|e| header_err(format!("missing header: {e}")))?
        .clone();
    let cols: Vec<&str> = headers.iter().collect();
    let with_labels = match cols.as_slice() {
        ["timestamp", "value"] => false,
        ["timestamp", "value", "label"] => true,
        _ => {
            return Err(header_err(format!(
                "missing header: expected timestamp,value[,label], found {}",
                cols.join(",")
            )))
        }
    };

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let row_err = |message: String| Error::Row {
            path: path.to_path_buf(),
            row,
            message,
        };
        let record = record.map_err(|e| row_err(e.to_string()))?;
        let raw = &record[1];
        let value: f64 = raw
            .parse()
            .map_err(|_| row_err(format!("non-numeric value {raw:?}")))?;
        if !value.is_finite() {
            return Err(row_err(format!("non-finite value {raw:?}")));
        }
        let timestamp = Some(record[0].to_string()).filter(|t| !t.is_empty());
        rows.push((timestamp, value));
        if with_labels {
            labels.push(match &record[2] {
                "0" => false,
                "1" => true,
                other => return Err(row_err(format!("bad label {other:?}"))),
            });
        }
    }

    let series = Series::from_pairs(rows)?;
    Ok((series, with_labels.then_some(LabelSeries(labels))))
}

/// Writes `timestamp,value[,label]`; missing timestamps become the index.
pub fn write_csv(
    path: impl AsRef<Path>,
    series: &Series,
    labels: Option<&LabelSeries>,
) -> Result<()> {
    let path = path.as_ref();
    if let Some(l) = labels {
        if l.len() != series.len() {
            return Err(Error::LengthMismatch {
                left: series.len(),
                right: l.len(),
            });
        }
    }
    let io_err = |e| Error::io(path, e);
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    let header = if labels.is_some() {
        "timestamp,value,label"
    } else {
        "timestamp,value"
    };
    writeln!(out, "{header}").map_err(io_err)?;
    for (i, s) in series.samples().iter().enumerate() {
        let ts = s.timestamp.clone().unwrap_or_else(|| s.index.to_string());
        match labels {
            Some(l) => writeln!(out, "{ts},{:?},{}", s.value, u8::from(l.0[i])),
            None => writeln!(out, "{ts},{:?}", s.value),
        }
        .map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// Index at which a chronological split by `fraction` cuts a series of length `n`.
pub fn split_index(n: usize, fraction: f64) -> Result<usize> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::config("split fraction must be in (0, 1)"));
    }
    let at = (fraction * n as f64).floor() as usize;
    if at == 0 {
        return Err(Error::EmptyTrain);
    }
    if at >= n {
        return Err(Error::EmptyTest);
    }
    Ok(at)
}

/// Chronological prefix/suffix split at `floor(fraction * n)`.
pub fn split(series: &Series, fraction: f64) -> Result<(Series, Series)> {
    Ok(series.split_at(split_index(series.len(), fraction)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
        let p = dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn reads_labelled_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            &dir,
            "a.csv",
            "timestamp,value,label\nt1,1.5,0\nt2,2,1\nt3,-3e2,0\n",
        );
        let (s, labels) = read_csv(&p).unwrap();
        assert_eq!(s.values(), vec![1.5, 2.0, -300.0]);
        assert_eq!(s.samples()[1].timestamp.as_deref(), Some("t2"));
        assert_eq!(labels.unwrap().0, vec![false, true, false]);
    }

    #[test]
    fn labels_optional() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "a.csv", "timestamp,value\n0,1\n1,2\n");
        let (s, labels) = read_csv(&p).unwrap();
        assert_eq!(s.len(), 2);
        assert!(labels.is_none());
    }

    #[test]
    fn malformed_rows_name_the_row() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            &dir,
            "a.csv",
            "timestamp,value,label\nt1,1,0\nt2,1,0\nt3,1,0\nt4,1,0\nt5,abc,0\n",
        );
        let err = read_csv(&p).unwrap_err();
        assert!(matches!(err, Error::Row { row: 5, .. }), "{err}");
        assert!(err.to_string().contains("row 5"));

        let p = write(&dir, "b.csv", "timestamp,value,label\nt1,1,2\n");
        assert!(read_csv(&p).unwrap_err().to_string().contains("bad label"));

        let p = write(&dir, "c.csv", "timestamp,value\nt1,NaN\n");
        assert!(read_csv(&p).unwrap_err().to_string().contains("non-finite"));

        let p = write(&dir, "d.csv", "time,val\nt1,1\n");
        assert!(read_csv(&p)
            .unwrap_err()
            .to_string()
            .contains("missing header"));

        let p = write(&dir, "e.csv", "");
        assert!(read_csv(&p).is_err());
    }

    #[test]
    fn write_then_read_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        let values = [0.1, -2.5e-300, 1.0 / 3.0, 123456789.12345679, 0.0];
        let s = Series::from_values(values).unwrap();
        let l = LabelSeries(vec![true, false, false, true, false]);
        write_csv(&p, &s, Some(&l)).unwrap();
        let (back, labels) = read_csv(&p).unwrap();
        let bits = |s: &Series| s.values().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&back), bits(&s));
        assert_eq!(labels.unwrap(), l);
    }

    #[test]
    fn split_examples() {
        let s = Series::from_values((0..10).map(f64::from)).unwrap();
        let (a, b) = split(&s, 0.5).unwrap();
        assert_eq!((a.len(), b.len()), (5, 5));
        assert_eq!(b.values()[0], 5.0);
        let (a, b) = split(&s, 0.99).unwrap();
        assert_eq!((a.len(), b.len()), (9, 1));
        let tiny = Series::from_values([1.0, 2.0]).unwrap();
        assert_eq!(
            split(&tiny, 0.1).unwrap_err().to_string(),
            "empty train split"
        );
        assert!(split(&s, 1.0).is_err());
    }
}
