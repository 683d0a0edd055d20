//! CSV ingestion and export of bases, distance matrices and lanes.
//!
//! * `bases.csv`: `base_id,lat,lon` (great-circle) or just `base_id` (matrix).
//! * `matrix.csv`: headerless `|B| x |B|` grid in km, rows in base-file order.
//! * `lanes.csv`: `lane_id,origin_base_id,dest_base_id[,owner]`.
//!
//! Row errors carry the 1-based line number, counting the header as line 1.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lanes::Lane;
use crate::metric::{MetricSpace, Position, Provider};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseRow {
    pub base_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lon: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaneRow {
    pub lane_id: String,
    pub origin_base_id: String,
    pub dest_base_id: String,
    #[serde(default)]
    pub owner: Option<String>,
}

fn reader(path: &Path, headers: bool) -> Result<csv::Reader<File>> {
    csv::ReaderBuilder::new()
        .has_headers(headers)
        .trim(csv::Trim::All)
        .flexible(!headers)
        .from_path(path)
        .map_err(|source| Error::Csv {
            path: path.to_owned(),
            source,
        })
}

fn row_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Row {
        path: path.to_owned(),
        row: line,
        message: message.into(),
    }
}

fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut rdr = reader(path, true)?;
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize().enumerate() {
        out.push(rec.map_err(|e: csv::Error| row_error(path, i + 2, e.to_string()))?);
    }
    Ok(out)
}

pub fn read_bases(path: &Path) -> Result<Vec<BaseRow>> {
    read_rows(path)
}

pub fn read_lane_rows(path: &Path) -> Result<Vec<LaneRow>> {
    read_rows(path)
}

pub fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut rdr = reader(path, false)?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| row_error(path, i + 1, e.to_string()))?;
        let row = rec
            .iter()
            .map(|cell| {
                cell.parse::<f64>()
                    .map_err(|_| row_error(path, i + 1, format!("`{cell}` is not a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Loads a metric space. A matrix path selects the matrix provider.
pub fn load_space(bases: &Path, matrix: Option<&Path>) -> Result<MetricSpace> {
    let rows = read_bases(bases)?;
    match matrix {
        Some(m) => {
            let grid = read_matrix(m)?;
            MetricSpace::from_matrix(rows.into_iter().map(|r| r.base_id).collect(), grid)
        }
        None => {
            let mut coords = Vec::with_capacity(rows.len());
            for (i, r) in rows.into_iter().enumerate() {
                match (r.lat, r.lon) {
                    (Some(lat), Some(lon)) => coords.push((r.base_id, lat, lon)),
                    _ => {
                        return Err(row_error(
                            bases,
                            i + 2,
                            format!("base `{}` has no coordinates", r.base_id),
                        ))
                    }
                }
            }
            MetricSpace::great_circle(coords)
        }
    }
}

/// Resolves lane rows against `space`; failures name the offending line.
pub fn lanes_from_rows(rows: Vec<LaneRow>, space: &MetricSpace, path: &Path) -> Result<Vec<Lane>> {
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| {
            Lane::new(space, r.lane_id, &r.origin_base_id, &r.dest_base_id, r.owner)
                .map_err(|e| row_error(path, i + 2, e.to_string()))
        })
        .collect()
}

pub fn load_lanes(path: &Path, space: &MetricSpace) -> Result<Vec<Lane>> {
    lanes_from_rows(read_lane_rows(path)?, space, path)
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|source| Error::Csv {
        path: path.to_owned(),
        source,
    })?;
    for r in rows {
        w.serialize(r).map_err(|source| Error::Csv {
            path: path.to_owned(),
            source,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_bases(path: &Path, rows: &[BaseRow]) -> Result<()> {
    write_rows(path, rows)
}

pub fn write_lanes(path: &Path, rows: &[LaneRow]) -> Result<()> {
    write_rows(path, rows)
}

/// Writes the space's bases (and its matrix in matrix mode, when `matrix` is given).
pub fn write_space(space: &MetricSpace, bases: &Path, matrix: Option<&Path>) -> Result<()> {
    let rows: Vec<BaseRow> = space
        .bases()
        .iter()
        .map(|b| match b.position {
            Position::LatLon { lat, lon } => BaseRow {
                base_id: b.id.clone(),
                lat: Some(lat),
                lon: Some(lon),
            },
            Position::Row(_) => BaseRow {
                base_id: b.id.clone(),
                lat: None,
                lon: None,
            },
        })
        .collect();
    write_bases(bases, &rows)?;
    if let (Provider::Matrix, Some(path)) = (space.provider(), matrix) {
        let mut f = std::io::BufWriter::new(File::create(path)?);
        let n = space.len();
        for i in 0..n {
            let line: Vec<String> = (0..n)
                .map(|j| {
                    space
                        .dist(crate::metric::BaseIx(i as u32), crate::metric::BaseIx(j as u32))
                        .to_string()
                })
                .collect();
            writeln!(f, "{}", line.join(","))?;
        }
        f.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let space = MetricSpace::from_matrix(
            vec!["x", "y"],
            vec![vec![0.0, 2.5], vec![2.5, 0.0]],
        )
        .unwrap();
        let (b, m) = (dir.path().join("bases.csv"), dir.path().join("matrix.csv"));
        write_space(&space, &b, Some(&m)).unwrap();
        assert_eq!(std::fs::read_to_string(&b).unwrap(), "base_id\nx\ny\n");
        let back = load_space(&b, Some(&m)).unwrap();
        assert_eq!(back.distance("x", "y").unwrap(), 2.5);
        assert_eq!(back.provider(), Provider::Matrix);
    }

    #[test]
    fn lane_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let b = dir.path().join("bases.csv");
        std::fs::write(&b, "base_id,lat,lon\nA,35.0,139.0\nB,34.7,135.5\n").unwrap();
        let l = dir.path().join("lanes.csv");
        std::fs::write(
            &l,
            "lane_id,origin_base_id,dest_base_id,owner\nL1,A,B,acme\nL2,B,Z,\n",
        )
        .unwrap();
        let space = load_space(&b, None).unwrap();
        let err = load_lanes(&l, &space).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 3") && msg.contains("`Z`"), "{msg}");
    }

    #[test]
    fn owner_column_is_optional() {
        let dir = tempfile::tempdir().unwrap();
        let b = dir.path().join("bases.csv");
        std::fs::write(&b, "base_id,lat,lon\nA,35.0,139.0\nB,34.7,135.5\n").unwrap();
        let l = dir.path().join("lanes.csv");
        std::fs::write(&l, "lane_id,origin_base_id,dest_base_id\nL1,A,B\nL2,B,A\n").unwrap();
        let space = load_space(&b, None).unwrap();
        let lanes = load_lanes(&l, &space).unwrap();
        assert_eq!(lanes.len(), 2);
        assert!(lanes.iter().all(|l| l.owner.is_none()));
    }

    #[test]
    fn missing_coordinates_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let b = dir.path().join("bases.csv");
        std::fs::write(&b, "base_id\nA\n").unwrap();
        assert!(matches!(load_space(&b, None), Err(Error::Row { row: 2, .. })));
    }
}
