//! Match output records in JSON Lines or CSV.
//!
//! Distances are printed with 3 decimals (metres) and rates with 6.

use std::fmt::Write as _;
use std::io::Write;

use serde::Deserialize;

use crate::engine::{ResultSet, Triangle};
use crate::error::Result;
use crate::lanes::LaneIndex;
use crate::shapley::ShapleySplit;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Jsonl,
    Csv,
}

/// One emitted triangle, as read back from either format.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct MatchRecord {
    pub t1: String,
    pub t2: String,
    pub t3: String,
    pub d: [f64; 3],
    pub e: [f64; 3],
    pub ovr: f64,
    pub total: f64,
    #[serde(default)]
    pub shapley: Option<[f64; 3]>,
    #[serde(default)]
    pub ell_star: Option<f64>,
}

impl MatchRecord {
    pub fn from_triangle(
        tr: &Triangle,
        index: &LaneIndex,
        shapley: Option<&ShapleySplit>,
        ell_star: Option<f64>,
    ) -> Self {
        let id = |i: usize| index.lane(tr.lanes[i]).id.clone();
        Self {
            t1: id(0),
            t2: id(1),
            t3: id(2),
            d: tr.d,
            e: tr.e,
            ovr: tr.ovr,
            total: tr.total,
            shapley: shapley.map(|s| s.shares),
            ell_star,
        }
    }
}

fn km(v: f64) -> String {
    format!("{v:.3}")
}

fn rate(v: f64) -> String {
    format!("{v:.6}")
}

fn json_array(vals: &[f64; 3]) -> String {
    format!("[{},{},{}]", km(vals[0]), km(vals[1]), km(vals[2]))
}

/// Writes records with fixed precision. Field order is stable.
pub struct RecordWriter<W: Write> {
    out: W,
    format: Format,
    header_done: bool,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(out: W, format: Format) -> Self {
        Self {
            out,
            format,
            header_done: false,
        }
    }

    pub fn write(&mut self, rec: &MatchRecord) -> Result<()> {
        match self.format {
            Format::Jsonl => {
                let mut line = String::new();
                write!(
                    line,
                    "{{\"t1\":{},\"t2\":{},\"t3\":{},\"d\":{},\"e\":{},\"ovr\":{},\"total\":{}",
                    serde_json::to_string(&rec.t1)?,
                    serde_json::to_string(&rec.t2)?,
                    serde_json::to_string(&rec.t3)?,
                    json_array(&rec.d),
                    json_array(&rec.e),
                    rate(rec.ovr),
                    km(rec.total)
                )
                .expect("write to String");
                if let Some(s) = &rec.shapley {
                    write!(line, ",\"shapley\":{}", json_array(s)).expect("write to String");
                }
                if let Some(l) = rec.ell_star {
                    write!(line, ",\"ell_star\":{}", rate(l)).expect("write to String");
                }
                line.push('}');
                writeln!(self.out, "{line}")?;
            }
            Format::Csv => {
                if !self.header_done {
                    let mut header = vec!["t1", "t2", "t3", "d1", "d2", "d3", "e1", "e2", "e3", "ovr", "total"];
                    if rec.shapley.is_some() {
                        header.extend(["shapley1", "shapley2", "shapley3"]);
                    }
                    if rec.ell_star.is_some() {
                        header.push("ell_star");
                    }
                    writeln!(self.out, "{}", header.join(","))?;
                    self.header_done = true;
                }
                let mut fields = vec![csv_field(&rec.t1), csv_field(&rec.t2), csv_field(&rec.t3)];
                fields.extend(rec.d.iter().map(|&v| km(v)));
                fields.extend(rec.e.iter().map(|&v| km(v)));
                fields.push(rate(rec.ovr));
                fields.push(km(rec.total));
                if let Some(s) = &rec.shapley {
                    fields.extend(s.iter().map(|&v| km(v)));
                }
                if let Some(l) = rec.ell_star {
                    fields.push(rate(l));
                }
                writeln!(self.out, "{}", fields.join(","))?;
            }
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Flattened CSV row used when parsing CSV output back.
#[derive(Deserialize)]
struct CsvRow {
    t1: String,
    t2: String,
    t3: String,
    d1: f64,
    d2: f64,
    d3: f64,
    e1: f64,
    e2: f64,
    e3: f64,
    ovr: f64,
    total: f64,
    shapley1: Option<f64>,
    shapley2: Option<f64>,
    shapley3: Option<f64>,
    ell_star: Option<f64>,
}

/// Parses records previously written by [`RecordWriter`].
pub fn parse_records(text: &str, format: Format) -> Result<Vec<MatchRecord>> {
    match format {
        Format::Jsonl => text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| Ok(serde_json::from_str(l)?))
            .collect(),
        Format::Csv => {
            let mut rdr = csv::Reader::from_reader(text.as_bytes());
            let mut out = Vec::new();
            for row in rdr.deserialize::<CsvRow>() {
                let r = row.map_err(|source| crate::error::Error::Csv {
                    path: "<output>".into(),
                    source,
                })?;
                let shapley = match (r.shapley1, r.shapley2, r.shapley3) {
                    (Some(a), Some(b), Some(c)) => Some([a, b, c]),
                    _ => None,
                };
                out.push(MatchRecord {
                    t1: r.t1,
                    t2: r.t2,
                    t3: r.t3,
                    d: [r.d1, r.d2, r.d3],
                    e: [r.e1, r.e2, r.e3],
                    ovr: r.ovr,
                    total: r.total,
                    shapley,
                    ell_star: r.ell_star,
                });
            }
            Ok(out)
        }
    }
}

/// Converts a result set into records; `ell_star` is attached when `top_k` is set.
pub fn records(
    rs: &ResultSet,
    index: &LaneIndex,
    splits: Option<&[ShapleySplit]>,
    top_k: bool,
) -> Vec<MatchRecord> {
    rs.triangles
        .iter()
        .enumerate()
        .map(|(i, tr)| {
            MatchRecord::from_triangle(
                tr,
                index,
                splits.map(|s| &s[i]),
                top_k.then_some(rs.ell_star),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MatchRecord {
        MatchRecord {
            t1: "L1".into(),
            t2: "L,2".into(),
            t3: "L3".into(),
            d: [10.0, 6.0, 3.0],
            e: [0.0, 0.0, 1.0],
            ovr: 0.95,
            total: 20.0,
            shapley: Some([9.0, 6.0, 3.0]),
            ell_star: Some(0.95),
        }
    }

    #[test]
    fn jsonl_layout() {
        let mut w = RecordWriter::new(Vec::new(), Format::Jsonl);
        w.write(&sample()).unwrap();
        let text = String::from_utf8(w.finish().unwrap()).unwrap();
        assert_eq!(
            text,
            "{\"t1\":\"L1\",\"t2\":\"L,2\",\"t3\":\"L3\",\"d\":[10.000,6.000,3.000],\
             \"e\":[0.000,0.000,1.000],\"ovr\":0.950000,\"total\":20.000,\
             \"shapley\":[9.000,6.000,3.000],\"ell_star\":0.950000}\n"
        );
        assert_eq!(parse_records(&text, Format::Jsonl).unwrap(), vec![sample()]);
    }

    #[test]
    fn csv_layout() {
        let mut rec = sample();
        rec.shapley = None;
        let mut w = RecordWriter::new(Vec::new(), Format::Csv);
        w.write(&rec).unwrap();
        let text = String::from_utf8(w.finish().unwrap()).unwrap();
        assert_eq!(
            text,
            "t1,t2,t3,d1,d2,d3,e1,e2,e3,ovr,total,ell_star\n\
             L1,\"L,2\",L3,10.000,6.000,3.000,0.000,0.000,1.000,0.950000,20.000,0.950000\n"
        );
        assert_eq!(parse_records(&text, Format::Csv).unwrap(), vec![rec]);
    }
}
