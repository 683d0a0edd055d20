//! Lane registry and the two sorted structures the pruned search scans.
//!
//! * `T(s)`: lanes grouped by start base, ascending by lane distance.
//! * `S_b`: for every base `b`, the start bases `S` ascending by `d(b, ·)`.
//!
//! Ties are broken by id so iteration order is reproducible across runs.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::metric::{BaseIx, MetricSpace};

/// Dense handle of a lane inside one [`LaneIndex`]. Handles follow lane id order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaneIx(pub u32);

impl LaneIx {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A full-truckload request from `start` to `end`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lane {
    pub id: String,
    pub start: BaseIx,
    pub end: BaseIx,
    /// Cached `d(start, end)` in km.
    pub dist: f64,
    /// Carried through untouched; matching does not look at it.
    pub owner: Option<String>,
}

impl Lane {
    pub fn new(
        space: &MetricSpace,
        id: impl Into<String>,
        origin: &str,
        dest: &str,
        owner: Option<String>,
    ) -> Result<Self> {
        let id = id.into();
        let start = space.base_ix(origin)?;
        let end = space.base_ix(dest)?;
        let dist = space.dist(start, end);
        if start == end || dist <= 0.0 {
            return Err(Error::DegenerateLane {
                id,
                start: origin.to_owned(),
                end: dest.to_owned(),
            });
        }
        Ok(Self {
            id,
            start,
            end,
            dist,
            owner,
        })
    }
}

#[derive(Debug, Clone)]
pub struct LaneIndex {
    lanes: Vec<Lane>,
    lookup: HashMap<String, LaneIx>,
    starts: Vec<BaseIx>,
    by_start: Vec<Vec<LaneIx>>,
    by_start_dist: Vec<Vec<f64>>,
    neighbors: Vec<Vec<(BaseIx, f64)>>,
}

impl LaneIndex {
    /// Builds both sorted structures. `O(|B|·|S| log |S| + |T| log |T|)`.
    pub fn build(lanes: Vec<Lane>, space: &MetricSpace) -> Result<Self> {
        let n = space.len();
        let mut lanes = lanes;
        for lane in &lanes {
            if lane.start.index() >= n || lane.end.index() >= n {
                return Err(Error::UnknownBase(format!("#{}", lane.start.index().max(lane.end.index()))));
            }
        }
        lanes.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = lanes.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::DuplicateLane(w[0].id.clone()));
        }
        let lookup = lanes
            .iter()
            .enumerate()
            .map(|(i, l)| (l.id.clone(), LaneIx(i as u32)))
            .collect();

        // Lanes are already in id order, so a stable sort by distance breaks ties by id.
        let mut by_start: Vec<Vec<LaneIx>> = vec![Vec::new(); n];
        for (i, lane) in lanes.iter().enumerate() {
            by_start[lane.start.index()].push(LaneIx(i as u32));
        }
        for list in &mut by_start {
            list.sort_by(|a, b| lanes[a.index()].dist.total_cmp(&lanes[b.index()].dist));
        }
        let by_start_dist = by_start
            .iter()
            .map(|list| list.iter().map(|l| lanes[l.index()].dist).collect())
            .collect();

        let starts: Vec<BaseIx> = (0..n)
            .filter(|&b| !by_start[b].is_empty())
            .map(|b| BaseIx(b as u32))
            .collect();
        let neighbors = (0..n)
            .map(|b| {
                let b = BaseIx(b as u32);
                let mut list: Vec<(BaseIx, f64)> = starts.iter().map(|&s| (s, space.dist(b, s))).collect();
                list.sort_by(|x, y| {
                    x.1.total_cmp(&y.1)
                        .then_with(|| space.base(x.0).id.cmp(&space.base(y.0).id))
                });
                list
            })
            .collect();

        Ok(Self {
            lanes,
            lookup,
            starts,
            by_start,
            by_start_dist,
            neighbors,
        })
    }

    pub fn len(&self) -> usize {
        self.lanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lanes.is_empty()
    }

    /// All lanes in id order.
    pub fn lanes(&self) -> &[Lane] {
        &self.lanes
    }

    #[inline]
    pub fn lane(&self, ix: LaneIx) -> &Lane {
        &self.lanes[ix.index()]
    }

    pub fn lane_ix(&self, id: &str) -> Result<LaneIx> {
        self.lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownLane(id.to_owned()))
    }

    /// The set `S` of bases with at least one outgoing lane, in base order.
    pub fn starts(&self) -> &[BaseIx] {
        &self.starts
    }

    /// `T(s)`, ascending by lane distance. Empty when `s` starts no lane.
    #[inline]
    pub fn lanes_from(&self, s: BaseIx) -> &[LaneIx] {
        &self.by_start[s.index()]
    }

    /// `S_b` with distances, ascending by `d(b, ·)`.
    #[inline]
    pub fn neighbors(&self, b: BaseIx) -> &[(BaseIx, f64)] {
        &self.neighbors[b.index()]
    }

    /// The prefix of `S_b` within `radius` of `b`.
    pub fn neighbors_within(&self, b: BaseIx, radius: f64) -> &[(BaseIx, f64)] {
        let list = self.neighbors(b);
        let end = list.iter().position(|&(_, d)| d > radius).unwrap_or(list.len());
        &list[..end]
    }

    /// Lanes of `T(s)` with `lb <= dist <= ub`, found by two binary searches.
    #[inline]
    pub fn lanes_in_range(&self, s: BaseIx, lb: f64, ub: f64) -> &[LaneIx] {
        let dists = &self.by_start_dist[s.index()];
        let lo = dists.partition_point(|&d| d < lb);
        let hi = dists.partition_point(|&d| d <= ub);
        if lo >= hi {
            return &[];
        }
        &self.by_start[s.index()][lo..hi]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[(&str, f64)]) -> MetricSpace {
        let ids = points.iter().map(|(id, _)| *id).collect();
        let rows = points
            .iter()
            .map(|(_, x)| points.iter().map(|(_, y)| (x - y).abs()).collect())
            .collect();
        MetricSpace::from_matrix(ids, rows).unwrap()
    }

    fn lane(space: &MetricSpace, id: &str, from: &str, to: &str) -> Lane {
        Lane::new(space, id, from, to, None).unwrap()
    }

    #[test]
    fn two_lanes_sorted_by_distance() {
        let space = line(&[("A", 0.0), ("B", 3.0), ("C", -5.0)]);
        let index = LaneIndex::build(
            vec![lane(&space, "z", "A", "C"), lane(&space, "y", "A", "B")],
            &space,
        )
        .unwrap();
        let a = space.base_ix("A").unwrap();
        let ids: Vec<&str> = index.lanes_from(a).iter().map(|&l| index.lane(l).id.as_str()).collect();
        assert_eq!(ids, ["y", "z"]);
    }

    #[test]
    fn empty_lane_set() {
        let space = line(&[("A", 0.0), ("B", 1.0)]);
        let index = LaneIndex::build(Vec::new(), &space).unwrap();
        assert!(index.starts().is_empty());
        for b in 0..space.len() {
            assert!(index.neighbors(BaseIx(b as u32)).is_empty());
        }
    }

    #[test]
    fn duplicate_and_degenerate_lanes_rejected() {
        let space = line(&[("A", 0.0), ("B", 1.0), ("C", 1.0)]);
        let err = LaneIndex::build(
            vec![lane(&space, "x", "A", "B"), lane(&space, "x", "B", "A")],
            &space,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateLane(id) if id == "x"));
        assert!(matches!(
            Lane::new(&space, "d", "A", "A", None),
            Err(Error::DegenerateLane { .. })
        ));
        // Distinct ids at the same spot still make a zero-length lane.
        assert!(matches!(
            Lane::new(&space, "d", "B", "C", None),
            Err(Error::DegenerateLane { .. })
        ));
        assert!(matches!(
            Lane::new(&space, "u", "A", "Q", None),
            Err(Error::UnknownBase(id)) if id == "Q"
        ));
    }

    #[test]
    fn neighbors_within_on_a_line() {
        let space = line(&[("p0", 0.0), ("p4", 4.0), ("p10", 10.0)]);
        let lanes = vec![
            lane(&space, "a", "p0", "p4"),
            lane(&space, "b", "p4", "p10"),
            lane(&space, "c", "p10", "p0"),
        ];
        let index = LaneIndex::build(lanes, &space).unwrap();
        let b0 = space.base_ix("p0").unwrap();
        let got: Vec<&str> = index
            .neighbors_within(b0, 5.0)
            .iter()
            .map(|&(s, _)| space.base(s).id.as_str())
            .collect();
        assert_eq!(got, ["p0", "p4"]);
        assert_eq!(index.neighbors_within(b0, 0.0).len(), 1);
        assert_eq!(index.neighbors_within(b0, f64::INFINITY).len(), 3);
    }

    #[test]
    fn lanes_in_range_binary_search() {
        let space = line(&[("s", 0.0), ("x2", 2.0), ("x4", 4.0), ("x6", 6.0), ("x9", 9.0)]);
        let lanes = ["x2", "x4", "x6", "x9"]
            .iter()
            .enumerate()
            .map(|(i, to)| lane(&space, &format!("l{i}"), "s", to))
            .collect();
        let index = LaneIndex::build(lanes, &space).unwrap();
        let s = space.base_ix("s").unwrap();
        let dists: Vec<f64> = index
            .lanes_in_range(s, 3.0, 6.0)
            .iter()
            .map(|&l| index.lane(l).dist)
            .collect();
        assert_eq!(dists, [4.0, 6.0]);
        assert!(index.lanes_in_range(s, 7.0, 5.0).is_empty());
        assert_eq!(index.lanes_in_range(s, -8.0, f64::INFINITY), index.lanes_from(s));
        assert_eq!(index.lanes_in_range(s, 0.0, f64::INFINITY).len(), 4);
        // A start base with no lanes.
        let x9 = space.base_ix("x9").unwrap();
        assert!(index.lanes_in_range(x9, 0.0, f64::INFINITY).is_empty());
    }
}
