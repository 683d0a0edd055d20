#![allow(dead_code)]

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trimatch_core::gen::generate;
use trimatch_core::{Lane, LaneIndex, LaneIx, MetricSpace, ResultSet, Triangle};

pub struct Inst {
    pub space: MetricSpace,
    pub index: LaneIndex,
}

/// Bases on an integer grid with city-block distances. Produces many exact
/// ties and boundary cases that continuous coordinates never hit.
pub fn grid_instance(seed: u64, side: usize, spacing: f64, num_lanes: usize) -> Inst {
    let n = side * side;
    let ids: Vec<String> = (0..n).map(|i| format!("g{i:03}")).collect();
    let coord = |i: usize| ((i % side) as f64 * spacing, (i / side) as f64 * spacing);
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let (a, b) = (coord(i), coord(j));
                    (a.0 - b.0).abs() + (a.1 - b.1).abs()
                })
                .collect()
        })
        .collect();
    let space = MetricSpace::from_matrix(ids.clone(), rows).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    pairs.shuffle(&mut rng);
    let lanes = pairs
        .into_iter()
        .take(num_lanes)
        .enumerate()
        .map(|(i, (a, b))| Lane::new(&space, format!("t{i:03}"), &ids[a], &ids[b], None).unwrap())
        .collect();
    let index = LaneIndex::build(lanes, &space).unwrap();
    Inst { space, index }
}

/// Great-circle instance from the library generator.
pub fn geo_instance(seed: u64, num_bases: usize, num_lanes: usize) -> Inst {
    let (space, index) = generate(seed, num_bases, num_lanes).unwrap().build().unwrap();
    Inst { space, index }
}

/// Great-circle bases packed into a small area so lanes chain through shared
/// bases often enough for high rates to occur.
pub fn dense_geo_instance(seed: u64, num_bases: usize, num_lanes: usize) -> Inst {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let space = MetricSpace::great_circle((0..num_bases).map(|i| {
        (
            format!("b{i:02}"),
            rng.gen_range(35.0..36.0),
            rng.gen_range(139.0..140.0),
        )
    }))
    .unwrap();
    let mut pairs: Vec<(usize, usize)> = (0..num_bases)
        .flat_map(|a| (0..num_bases).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    pairs.shuffle(&mut rng);
    let lanes = pairs
        .into_iter()
        .take(num_lanes)
        .enumerate()
        .map(|(i, (a, b))| {
            let (sa, sb) = (space.bases()[a].id.clone(), space.bases()[b].id.clone());
            Lane::new(&space, format!("t{i:03}"), &sa, &sb, None).unwrap()
        })
        .collect();
    let index = LaneIndex::build(lanes, &space).unwrap();
    Inst { space, index }
}

/// The 25 small instances shared by the oracle-based checks.
pub fn small_instances() -> Vec<Inst> {
    (0..25u64)
        .map(|seed| match seed % 3 {
            0 => grid_instance(seed, 7, 10.0, 200),
            1 => geo_instance(seed, 50, 200),
            _ => dense_geo_instance(seed, 40, 200),
        })
        .collect()
}

/// Client lanes for an instance: the first `n` of a seeded shuffle.
pub fn clients(index: &LaneIndex, n: usize, seed: u64) -> Vec<LaneIx> {
    let mut all: Vec<LaneIx> = (0..index.len()).map(|i| LaneIx(i as u32)).collect();
    all.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    all.truncate(n);
    all
}

pub fn pair_set(rs: &ResultSet) -> HashSet<(LaneIx, LaneIx)> {
    rs.triangles.iter().map(|t| (t.lanes[1], t.lanes[2])).collect()
}

/// Oracle output ordered by rate descending, then `(t2, t3)` ascending.
pub fn sorted_oracle(rs: &ResultSet) -> Vec<Triangle> {
    let mut v = rs.triangles.clone();
    v.sort_by(|a, b| {
        b.ovr
            .total_cmp(&a.ovr)
            .then(a.lanes[1].cmp(&b.lanes[1]))
            .then(a.lanes[2].cmp(&b.lanes[2]))
    });
    v
}

/// Top-k output against the sorted oracle, with equal-rate entries at the
/// cut allowed to differ. Returns a description of the first mismatch.
pub fn topk_matches_with_ties(got: &[Triangle], oracle: &[Triangle], k: usize) -> Result<(), String> {
    let want = &oracle[..k.min(oracle.len())];
    if got.len() != want.len() {
        return Err(format!("length {} vs {}", got.len(), want.len()));
    }
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        if g.ovr.to_bits() != w.ovr.to_bits() {
            return Err(format!("rank {i}: ovr {} vs {}", g.ovr, w.ovr));
        }
    }
    let Some(cut) = want.last().map(|t| t.ovr) else {
        return Ok(());
    };
    let above = |v: &[Triangle]| -> HashSet<(LaneIx, LaneIx)> {
        v.iter().filter(|t| t.ovr > cut).map(|t| (t.lanes[1], t.lanes[2])).collect()
    };
    if above(got) != above(want) {
        return Err("entries above the cut differ".into());
    }
    let oracle_pairs: HashSet<(LaneIx, LaneIx, u64)> = oracle
        .iter()
        .map(|t| (t.lanes[1], t.lanes[2], t.ovr.to_bits()))
        .collect();
    let mut seen = HashSet::new();
    for t in got {
        if !oracle_pairs.contains(&(t.lanes[1], t.lanes[2], t.ovr.to_bits())) {
            return Err(format!("{:?} is not an oracle triangle", t.lanes));
        }
        if !seen.insert((t.lanes[1], t.lanes[2])) {
            return Err(format!("{:?} repeated", t.lanes));
        }
    }
    Ok(())
}

pub fn topk_matches_exactly(got: &[Triangle], oracle: &[Triangle], k: usize) -> bool {
    let want = &oracle[..k.min(oracle.len())];
    got.len() == want.len()
        && got.iter().zip(want).all(|(g, w)| {
            g.lanes == w.lanes && g.ovr.to_bits() == w.ovr.to_bits() && g.total.to_bits() == w.total.to_bits()
        })
}
