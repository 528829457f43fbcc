//! Reading candidate files.
//!
//! Two CSV layouts are understood, told apart by their header:
//!
//! - scores: `id,score,label` with `label` in `{0, 1}`;
//! - ROC points: `fpr,tpr` with an optional `threshold` column.

use std::fs;
use std::path::Path;

use pvoros_core::{LabeledScores, RocCurve, RocPoint};

use crate::error::{CliError, Result};
use crate::format::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Scores,
    RocPoints,
}

/// One candidate file after parsing.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    /// File stem.
    pub name: String,
    pub format: Format,
    pub curve: RocCurve,
    /// Present for the scores format.
    pub scores: Option<LabeledScores>,
}

fn stem(path: &Path) -> Result<String> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(str::to_owned)
        .ok_or_else(|| CliError::Data {
            path: path.into(),
            message: "cannot derive a candidate name from the file name".into(),
        })
}

fn detect(header: &csv::StringRecord) -> Option<Format> {
    let cols: Vec<&str> = header.iter().map(str::trim).collect();
    let has = |c: &str| cols.contains(&c);
    if has("score") && has("label") {
        Some(Format::Scores)
    } else if has("fpr") && has("tpr") {
        Some(Format::RocPoints)
    } else {
        None
    }
}

fn column(header: &csv::StringRecord, name: &str) -> Option<usize> {
    header.iter().position(|c| c.trim() == name)
}

/// Reads a candidate file, detecting its layout from the header.
pub fn ingest(path: &Path) -> Result<Ingested> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    ingest_str(path, &text)
}

/// Same as [`ingest`] on in-memory text; `path` is used for naming and errors.
pub fn ingest_str(path: &Path, text: &str) -> Result<Ingested> {
    let no_rows = || CliError::Data {
        path: path.into(),
        message: "no rows".into(),
    };
    if text.trim().is_empty() {
        return Err(no_rows());
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr
        .headers()
        .map_err(|e| CliError::Data {
            path: path.into(),
            message: e.to_string(),
        })?
        .clone();
    let format = detect(&header).ok_or_else(|| CliError::Row {
        path: path.into(),
        line: 1,
        message: format!(
            "unrecognized header {:?}; expected `id,score,label` or `fpr,tpr[,threshold]`",
            header.iter().collect::<Vec<_>>().join(",")
        ),
    })?;
    let name = stem(path)?;
    let rows = collect_rows(path, &mut rdr)?;
    if rows.is_empty() {
        return Err(no_rows());
    }
    match format {
        Format::Scores => {
            let (scores, labels) = parse_scores(path, &header, &rows)?;
            let labeled = LabeledScores::new(scores, labels).map_err(|e| CliError::Data {
                path: path.into(),
                message: e.to_string(),
            })?;
            Ok(Ingested {
                name,
                format,
                curve: labeled.curve(),
                scores: Some(labeled),
            })
        }
        Format::RocPoints => Ok(Ingested {
            name,
            format,
            curve: parse_points(path, &header, &rows)?,
            scores: None,
        }),
    }
}

fn collect_rows(path: &Path, rdr: &mut csv::Reader<&[u8]>) -> Result<Vec<(u64, csv::StringRecord)>> {
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            CliError::Row {
                path: path.into(),
                line,
                message: e.to_string(),
            }
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        rows.push((line, rec));
    }
    Ok(rows)
}

fn field<'a>(path: &Path, line: u64, rec: &'a csv::StringRecord, idx: usize, name: &str) -> Result<&'a str> {
    rec.get(idx).ok_or_else(|| CliError::Row {
        path: path.into(),
        line,
        message: format!("missing `{name}` field"),
    })
}

fn number(path: &Path, line: u64, raw: &str, name: &str) -> Result<f64> {
    raw.parse::<f64>().map_err(|_| CliError::Row {
        path: path.into(),
        line,
        message: format!("`{name}` is not a number: {raw:?}"),
    })
}

fn parse_scores(
    path: &Path,
    header: &csv::StringRecord,
    rows: &[(u64, csv::StringRecord)],
) -> Result<(Vec<f64>, Vec<bool>)> {
    let si = column(header, "score").expect("detected");
    let li = column(header, "label").expect("detected");
    let mut scores = Vec::with_capacity(rows.len());
    let mut labels = Vec::with_capacity(rows.len());
    for (line, rec) in rows {
        let s = number(path, *line, field(path, *line, rec, si, "score")?, "score")?;
        if !s.is_finite() {
            return Err(CliError::Row {
                path: path.into(),
                line: *line,
                message: "score must be finite".into(),
            });
        }
        let l = match field(path, *line, rec, li, "label")? {
            "1" => true,
            "0" => false,
            other => {
                return Err(CliError::Row {
                    path: path.into(),
                    line: *line,
                    message: format!("label must be 0 or 1, got {other:?}"),
                })
            }
        };
        scores.push(s);
        labels.push(l);
    }
    Ok((scores, labels))
}

fn parse_points(
    path: &Path,
    header: &csv::StringRecord,
    rows: &[(u64, csv::StringRecord)],
) -> Result<RocCurve> {
    let xi = column(header, "fpr").expect("detected");
    let yi = column(header, "tpr").expect("detected");
    let ti = column(header, "threshold");
    let mut points = Vec::with_capacity(rows.len());
    let mut thresholds = ti.map(|_| Vec::with_capacity(rows.len()));
    for (line, rec) in rows {
        let x = number(path, *line, field(path, *line, rec, xi, "fpr")?, "fpr")?;
        let y = number(path, *line, field(path, *line, rec, yi, "tpr")?, "tpr")?;
        let p = RocPoint::new(x, y).map_err(|e| CliError::Row {
            path: path.into(),
            line: *line,
            message: e.to_string(),
        })?;
        points.push(p);
        if let (Some(ti), Some(ts)) = (ti, thresholds.as_mut()) {
            ts.push(number(path, *line, field(path, *line, rec, ti, "threshold")?, "threshold")?);
        }
    }
    RocCurve::from_points(points, thresholds).map_err(|e| CliError::Data {
        path: path.into(),
        message: e.to_string(),
    })
}

/// The curve in the ROC-points layout, thresholds included when known.
pub fn rocpoints_csv(curve: &RocCurve) -> String {
    let mut out = String::new();
    match curve.thresholds() {
        Some(ts) => {
            out.push_str("fpr,tpr,threshold\n");
            for (p, t) in curve.points().iter().zip(ts) {
                out.push_str(&format!("{},{},{}\n", fmt_f64(p.fpr), fmt_f64(p.tpr), fmt_f64(*t)));
            }
        }
        None => {
            out.push_str("fpr,tpr\n");
            for p in curve.points() {
                out.push_str(&format!("{},{}\n", fmt_f64(p.fpr), fmt_f64(p.tpr)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> RocPoint {
        RocPoint { fpr: x, tpr: y }
    }

    #[test]
    fn four_scores_give_five_points() {
        let text = "id,score,label\na,0.9,1\nb,0.8,0\nc,0.7,1\nd,0.1,0\n";
        let got = ingest_str(Path::new("dir/model_a.csv"), text).unwrap();
        assert_eq!(got.name, "model_a");
        assert_eq!(got.format, Format::Scores);
        assert_eq!(
            got.curve.points(),
            &[pt(0.0, 0.0), pt(0.0, 0.5), pt(0.5, 0.5), pt(0.5, 1.0), pt(1.0, 1.0)]
        );
    }

    #[test]
    fn diagonal_points() {
        let text = "fpr,tpr\n0,0\n0.5,0.5\n1,1\n";
        let got = ingest_str(Path::new("diag.csv"), text).unwrap();
        assert_eq!(got.curve.points(), &[pt(0.0, 0.0), pt(0.5, 0.5), pt(1.0, 1.0)]);
        assert!(got.curve.thresholds().is_none());
    }

    #[test]
    fn unsorted_points_with_thresholds() {
        let text = "fpr,tpr,threshold\n0.5,0.8,0.2\n0.1,0.4,0.7\n";
        let got = ingest_str(Path::new("x.csv"), text).unwrap();
        assert_eq!(got.curve.points()[1], pt(0.1, 0.4));
        assert_eq!(got.curve.thresholds().unwrap()[1], 0.7);
    }

    #[test]
    fn empty_inputs() {
        for text in ["", "id,score,label\n", "fpr,tpr\n"] {
            let err = ingest_str(Path::new("e.csv"), text).unwrap_err();
            assert!(err.to_string().contains("no rows"), "{err}");
            assert_eq!(err.exit_code(), crate::error::EXIT_DATA);
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = ingest_str(Path::new("s.csv"), "id,score,label\na,0.5,1\nb,0.4,2\n").unwrap_err();
        assert_eq!(err.to_string(), "s.csv:3: label must be 0 or 1, got \"2\"");
        let err = ingest_str(Path::new("s.csv"), "id,score,label\na,zero,1\n").unwrap_err();
        assert!(err.to_string().starts_with("s.csv:2: `score` is not a number"));
        let err = ingest_str(Path::new("p.csv"), "fpr,tpr\n0.1,0.2\n1.5,0.2\n").unwrap_err();
        assert!(err.to_string().starts_with("p.csv:3:"), "{err}");
        let err = ingest_str(Path::new("p.csv"), "a,b\n1,2\n").unwrap_err();
        assert!(err.to_string().contains("unrecognized header"));
    }

    #[test]
    fn single_class_is_a_data_error() {
        let err = ingest_str(Path::new("s.csv"), "id,score,label\na,0.5,1\n").unwrap_err();
        assert_eq!(err.exit_code(), crate::error::EXIT_DATA);
    }

    #[test]
    fn rocpoints_round_trip() {
        let text = "id,score,label\na,0.91,1\nb,0.8,0\nc,0.8,1\nd,0.3,1\ne,0.1,0\nf,0.05,0\n";
        let first = ingest_str(Path::new("m.csv"), text).unwrap();
        let written = rocpoints_csv(&first.curve);
        let second = ingest_str(Path::new("m.csv"), &written).unwrap();
        assert_eq!(first.curve.points(), second.curve.points());
        assert_eq!(first.curve.thresholds(), second.curve.thresholds());
    }
}
