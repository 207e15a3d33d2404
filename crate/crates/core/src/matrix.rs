//! Feature matrix and its CSV form.
//!
//! Header is `doc_id` followed by metric IDs. Values are written with 17
//! significant digits so that reading them back yields the same `f64`.
//! Document IDs outside `[A-Za-z0-9_.-]` are percent-encoded.

use std::io::{Read, Write};

use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use thiserror::Error;

const DOC_ID_ESCAPE: &AsciiSet = &NON_ALPHANUMERIC.remove(b'_').remove(b'.').remove(b'-');

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub doc_ids: Vec<String>,
    pub metric_ids: Vec<String>,
    /// One row per document, one column per metric.
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Format { line: u64, message: String },
    #[error("metric `{0}` not in matrix")]
    UnknownMetric(String),
}

pub fn encode_doc_id(id: &str) -> String {
    utf8_percent_encode(id, DOC_ID_ESCAPE).to_string()
}

pub fn decode_doc_id(id: &str) -> String {
    percent_decode_str(id).decode_utf8_lossy().into_owned()
}

/// Shortest-safe fixed representation: 17 significant digits, `.` decimal point.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let s = format!("{v:.16e}");
    // Reformat `d.dddde±x` into plain notation when the exponent is modest.
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-7..=16).contains(&exp) {
        return s;
    }
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let point = exp + 1;
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(&digits);
    } else {
        let p = point as usize;
        out.push_str(&digits[..p]);
        out.push('.');
        out.push_str(&digits[p..]);
    }
    let trimmed = out.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

impl FeatureMatrix {
    pub fn rows(&self) -> usize {
        self.values.len()
    }

    pub fn cols(&self) -> usize {
        self.metric_ids.len()
    }

    pub fn column_index(&self, metric_id: &str) -> Option<usize> {
        self.metric_ids.iter().position(|m| m == metric_id)
    }

    pub fn column(&self, metric_id: &str) -> Result<Vec<f64>, MatrixError> {
        let j = self.column_index(metric_id).ok_or_else(|| MatrixError::UnknownMetric(metric_id.to_string()))?;
        Ok(self.values.iter().map(|r| r[j]).collect())
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), MatrixError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
        let mut header = vec!["doc_id".to_string()];
        header.extend(self.metric_ids.iter().cloned());
        w.write_record(&header)?;
        for (id, row) in self.doc_ids.iter().zip(&self.values) {
            let mut rec = vec![encode_doc_id(id)];
            rec.extend(row.iter().map(|&v| format_value(v)));
            w.write_record(&rec)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self, MatrixError> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let header = r.headers()?.clone();
        if header.get(0) != Some("doc_id") {
            return Err(MatrixError::Format { line: 1, message: "first column must be `doc_id`".into() });
        }
        let metric_ids: Vec<String> = header.iter().skip(1).map(String::from).collect();
        let mut doc_ids = Vec::new();
        let mut values = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line());
            doc_ids.push(decode_doc_id(&rec[0]));
            let row = rec
                .iter()
                .skip(1)
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|_| MatrixError::Format { line, message: format!("`{f}` is not a number") })
                })
                .collect::<Result<Vec<_>, _>>()?;
            values.push(row);
        }
        Ok(FeatureMatrix { doc_ids, metric_ids, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_formatting() {
        assert_eq!(format_value(0.0), "0");
        assert_eq!(format_value(0.2), "0.20000000000000001");
        assert_eq!(format_value(1.0), "1");
        assert_eq!(format_value(0.5), "0.5");
        assert_eq!(format_value(1e-9), "1.0000000000000001e-9");
        for v in [0.1, 1.0 / 3.0, 13.0 / 17.0, 2.5e-5, 123.456, -0.75] {
            assert_eq!(format_value(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn doc_id_escaping() {
        assert_eq!(encode_doc_id("news_01.a-b"), "news_01.a-b");
        assert_eq!(encode_doc_id("a b,c"), "a%20b%2Cc");
        assert_eq!(decode_doc_id(&encode_doc_id("лист 1")), "лист 1");
    }

    #[test]
    fn csv_round_trip() {
        let m = FeatureMatrix {
            doc_ids: vec!["d 1".into(), "d2".into()],
            metric_ids: vec!["A".into(), "B".into()],
            values: vec![vec![0.1, 1.0 / 3.0], vec![0.0, 1.0]],
        };
        let s = m.to_csv_string();
        assert!(s.starts_with("doc_id,A,B\nd%201,0.10000000000000001,"));
        let back = FeatureMatrix::read_csv(s.as_bytes()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn bad_number_reports_line() {
        let err = FeatureMatrix::read_csv("doc_id,A\nx,0.5\ny,abc\n".as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("line 3"), "{err}");
    }
}
