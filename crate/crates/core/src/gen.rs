//! Seeded synthetic instances: bases scattered uniformly over a Japan-sized
//! box and lanes drawn as distinct ordered base pairs.

use std::collections::HashSet;
use std::ops::Range;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::io::{lanes_from_rows, BaseRow, LaneRow};
use crate::lanes::LaneIndex;
use crate::metric::MetricSpace;

pub const LAT_RANGE: Range<f64> = 31.0..45.0;
pub const LON_RANGE: Range<f64> = 130.0..145.0;

/// Default lanes per base, about 16957 / 4828.
pub const LANES_PER_BASE: f64 = 3.5;

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub bases: Vec<BaseRow>,
    pub lanes: Vec<LaneRow>,
}

fn width(n: usize) -> usize {
    n.saturating_sub(1).to_string().len()
}

/// Generates `num_bases` bases and `num_lanes` lanes; identical for identical arguments.
pub fn generate(seed: u64, num_bases: usize, num_lanes: usize) -> Result<Instance> {
    if num_bases < 2 {
        return Err(Error::InvalidGenerator(format!(
            "need at least 2 bases, got {num_bases}"
        )));
    }
    let max_pairs = num_bases * (num_bases - 1);
    if num_lanes > max_pairs {
        return Err(Error::InvalidGenerator(format!(
            "{num_lanes} lanes exceed the {max_pairs} ordered pairs of {num_bases} bases"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bw = width(num_bases);
    let base_id = |i: usize| format!("B{i:0bw$}");
    let bases = (0..num_bases)
        .map(|i| BaseRow {
            base_id: base_id(i),
            lat: Some(rng.gen_range(LAT_RANGE)),
            lon: Some(rng.gen_range(LON_RANGE)),
        })
        .collect();

    let pairs: Vec<(usize, usize)> = if num_lanes * 2 <= max_pairs {
        let mut seen = HashSet::with_capacity(num_lanes);
        let mut out = Vec::with_capacity(num_lanes);
        while out.len() < num_lanes {
            let a = rng.gen_range(0..num_bases);
            let b = rng.gen_range(0..num_bases);
            if a != b && seen.insert((a, b)) {
                out.push((a, b));
            }
        }
        out
    } else {
        let mut all: Vec<(usize, usize)> = (0..num_bases)
            .flat_map(|a| (0..num_bases).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        all.shuffle(&mut rng);
        all.truncate(num_lanes);
        all
    };

    let lw = width(num_lanes);
    let companies = (num_lanes / 50).max(1);
    let cw = width(companies);
    let lanes = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| LaneRow {
            lane_id: format!("L{i:0lw$}"),
            origin_base_id: base_id(a),
            dest_base_id: base_id(b),
            owner: Some(format!("C{:0cw$}", rng.gen_range(0..companies))),
        })
        .collect();
    Ok(Instance { bases, lanes })
}

impl Instance {
    pub fn space(&self) -> Result<MetricSpace> {
        MetricSpace::great_circle(
            self.bases
                .iter()
                .map(|b| (b.base_id.clone(), b.lat.unwrap_or(f64::NAN), b.lon.unwrap_or(f64::NAN))),
        )
    }

    /// Builds the space and lane index in one go.
    pub fn build(&self) -> Result<(MetricSpace, LaneIndex)> {
        let space = self.space()?;
        let lanes = lanes_from_rows(self.lanes.clone(), &space, "<generated>".as_ref())?;
        let index = LaneIndex::build(lanes, &space)?;
        Ok((space, index))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_a_seed() {
        assert_eq!(generate(7, 10, 20).unwrap(), generate(7, 10, 20).unwrap());
        assert_ne!(generate(7, 10, 20).unwrap(), generate(8, 10, 20).unwrap());
    }

    #[test]
    fn two_bases_give_both_pairs() {
        let inst = generate(1, 2, 2).unwrap();
        let mut pairs: Vec<(String, String)> = inst
            .lanes
            .iter()
            .map(|l| (l.origin_base_id.clone(), l.dest_base_id.clone()))
            .collect();
        pairs.sort();
        assert_eq!(
            pairs,
            [("B0".to_string(), "B1".to_string()), ("B1".to_string(), "B0".to_string())]
        );
    }

    #[test]
    fn rejects_impossible_sizes() {
        assert!(generate(1, 1, 0).is_err());
        assert!(generate(1, 3, 7).is_err());
        assert!(generate(1, 3, 6).is_ok());
    }

    #[test]
    fn large_instance_scan() {
        let inst = generate(11, 500, 1750).unwrap();
        let mut seen = HashSet::new();
        for l in &inst.lanes {
            assert_ne!(l.origin_base_id, l.dest_base_id);
            assert!(seen.insert((l.origin_base_id.clone(), l.dest_base_id.clone())));
        }
        for b in &inst.bases {
            assert!(LAT_RANGE.contains(&b.lat.unwrap()));
            assert!(LON_RANGE.contains(&b.lon.unwrap()));
        }
        let (space, index) = inst.build().unwrap();
        assert_eq!(space.len(), 500);
        assert_eq!(index.len(), 1750);
    }
}
