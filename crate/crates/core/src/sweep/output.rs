//! Deterministic table emission: CSV, JSON and gnuplot columns.

use std::io::Write;

use serde_json::{json, Map, Value};

use super::config::{Command, Format, Units, SCHEMA_VERSION};
use crate::report::Cell;

/// Formats `x` at 12 significant digits using the shortest representation
/// that parses back to the rounded value. `-0` prints as `0`.
pub fn fmt12(x: f64) -> String {
    let y = round12(x);
    if y == 0.0 {
        return "0".to_string();
    }
    let a = y.abs();
    if !(1e-4..1e15).contains(&a) {
        format!("{y:e}")
    } else {
        format!("{y}")
    }
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// A rectangular result with metadata. `block` is the row count of one
/// outer-axis block; gnuplot output separates blocks with a blank line.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub command: Command,
    pub units: Units,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub block: Option<usize>,
}

impl Table {
    pub fn title(&self) -> String {
        let mut s = format!(
            "trimer {} schema_version={SCHEMA_VERSION} units={}",
            self.command.name(),
            self.units.name()
        );
        for (k, v) in &self.meta {
            s.push_str(&format!(" {k}={v}"));
        }
        s
    }

    fn text(cell: &Cell) -> String {
        match cell {
            Cell::Num(x) => fmt12(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }

    pub fn render(&self, format: Format) -> std::io::Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
            Format::Gnuplot => Ok(self.to_gnuplot()),
        }
    }

    pub fn to_csv(&self) -> std::io::Result<Vec<u8>> {
        let mut buf = format!("# {}\n", self.title()).into_bytes();
        {
            let mut w = csv::WriterBuilder::new().from_writer(&mut buf);
            w.write_record(&self.columns)?;
            for row in &self.rows {
                w.write_record(row.iter().map(Self::text))?;
            }
            w.flush()?;
        }
        Ok(buf)
    }

    pub fn to_json(&self) -> Vec<u8> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|c| match c {
                            Cell::Num(x) => json!(round12(*x) + 0.0),
                            Cell::Text(s) => json!(s),
                        })
                        .collect(),
                )
            })
            .collect();
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command.name(),
            "units": self.units.name(),
            "meta": meta,
            "columns": self.columns,
            "rows": rows,
        });
        let mut out = serde_json::to_vec_pretty(&doc).expect("json serialises");
        out.push(b'\n');
        out
    }

    pub fn to_gnuplot(&self) -> Vec<u8> {
        let mut s = format!("# {}\n# {}\n", self.title(), self.columns.join(" "));
        for (k, row) in self.rows.iter().enumerate() {
            if let Some(b) = self.block {
                if k > 0 && b > 0 && k % b == 0 {
                    s.push('\n');
                }
            }
            let line: Vec<String> = row.iter().map(Self::text).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s.into_bytes()
    }

    pub fn write_to(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        out.write_all(&self.render(format)?)?;
        out.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> Table {
        Table {
            command: Command::Sweep,
            units: Units::Reduced,
            meta: vec![],
            columns: vec!["h_over_j".into(), "n_abc".into(), "phase".into()],
            rows: vec![
                vec![Cell::Num(0.0), Cell::Num(1.0 / 3.0), Cell::Text("psi9".into())],
                vec![Cell::Num(1.5), Cell::Num(-0.0), Cell::Text("psi5|psi11".into())],
            ],
            block: Some(1),
        }
    }

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt12(-0.0), "0");
        assert_eq!(fmt12(2.0), "2");
        assert_eq!(fmt12(1e-7 / 3.0), "3.33333333333e-8");
        assert_eq!(fmt12(123456789.123456), "123456789.123");
        assert_eq!(fmt12(1e20), "1e20");
    }

    #[test]
    fn csv_layout() {
        let text = String::from_utf8(sample().to_csv().unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# trimer sweep schema_version=1 units=reduced");
        assert_eq!(lines[1], "h_over_j,n_abc,phase");
        assert_eq!(lines[2], "0,0.333333333333,psi9");
        assert_eq!(lines[3], "1.5,0,psi5|psi11");
    }

    #[test]
    fn gnuplot_blocks() {
        let text = String::from_utf8(sample().to_gnuplot()).unwrap();
        assert!(text.contains("psi9\n\n1.5"));
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_slice(&sample().to_json()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["rows"][0][1].as_f64().unwrap(), round12(1.0 / 3.0));
        assert_eq!(v["rows"][1][2], "psi5|psi11");
    }

    proptest! {
        #[test]
        fn text_round_trips_at_emitted_precision(x in proptest::num::f64::NORMAL) {
            let y: f64 = fmt12(x).parse().unwrap();
            prop_assert_eq!(y, round12(x) + 0.0);
            prop_assert_eq!(fmt12(y), fmt12(x));
            if x != 0.0 {
                prop_assert!(((y - x) / x).abs() < 1e-11);
            }
        }
    }
}
