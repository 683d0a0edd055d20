//! Feasibility, leg bounds and the four enumeration backends.
//!
//! Every backend answers the same question: which ordered pairs `(t2, t3)`
//! close an `(ell, u)`-feasible triangle with the client lane `t1`. They
//! differ only in how much of the lane set they visit.

pub mod bounds;
mod exhaustive;
mod pruned;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::lanes::{Lane, LaneIndex, LaneIx};
use crate::metric::MetricSpace;

pub use bounds::{bound_d2, bound_d3, bound_e1, bound_e2};

/// How the mileage cap `u` is derived for a query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MileageCap {
    /// Absolute kilometres.
    Km(f64),
    /// Multiple of the client lane's own distance.
    Factor(f64),
}

impl Default for MileageCap {
    fn default() -> Self {
        MileageCap::Factor(4.0)
    }
}

impl MileageCap {
    pub fn resolve(self, client: &Lane) -> f64 {
        match self {
            MileageCap::Km(u) => u,
            MileageCap::Factor(f) => f * client.dist,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Query {
    /// Id of the client lane.
    pub t1: String,
    /// Minimum occupied vehicle rate, in `(0, 1]`.
    pub ell: f64,
    /// Total mileage cap in km.
    pub u: f64,
    /// Top-k size; only read by [`Algorithm::TopK`].
    pub k: Option<usize>,
    /// Break equal-rate ties at the k-th slot by `(t2, t3)` id instead of
    /// letting a later candidate evict the incumbent.
    pub deterministic: bool,
}

impl Query {
    pub fn new(t1: impl Into<String>, ell: f64, u: f64) -> Result<Self> {
        if !(ell > 0.0 && ell <= 1.0) {
            return Err(Error::InvalidQuery(format!("ell must lie in (0, 1], got {ell}")));
        }
        if !(u > 0.0 && u.is_finite()) {
            return Err(Error::InvalidQuery(format!("u must be a positive distance, got {u}")));
        }
        Ok(Self {
            t1: t1.into(),
            ell,
            u,
            k: None,
            deterministic: false,
        })
    }

    /// Resolves `cap` against the client lane found in `index`.
    pub fn for_lane(index: &LaneIndex, t1: &str, ell: f64, cap: MileageCap) -> Result<Self> {
        let lane = index.lane(index.lane_ix(t1)?);
        Self::new(t1, ell, cap.resolve(lane))
    }

    pub fn with_k(mut self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidQuery("k must be at least 1".into()));
        }
        self.k = Some(k);
        Ok(self)
    }

    pub fn deterministic(mut self, on: bool) -> Self {
        self.deterministic = on;
        self
    }
}

/// An evaluated triangular transport `t1 -> t2 -> t3 -> t1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triangle {
    pub lanes: [LaneIx; 3],
    /// Loaded legs.
    pub d: [f64; 3],
    /// Empty legs: `t1.end -> t2.start`, `t2.end -> t3.start`, `t3.end -> t1.start`.
    pub e: [f64; 3],
    pub ovr: f64,
    pub total: f64,
}

impl Triangle {
    /// The single place where total mileage and occupied vehicle rate are
    /// computed, so every backend agrees bit for bit.
    #[inline]
    pub fn from_legs(lanes: [LaneIx; 3], d: [f64; 3], e: [f64; 3]) -> Self {
        let total = d[0] + e[0] + d[1] + e[1] + d[2] + e[2];
        let ovr = (d[0] + d[1] + d[2]) / total;
        Self {
            lanes,
            d,
            e,
            ovr,
            total,
        }
    }

    /// Best first: higher rate, then lower `(t2, t3)` id.
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        other
            .ovr
            .total_cmp(&self.ovr)
            .then_with(|| self.lanes[1].cmp(&other.lanes[1]))
            .then_with(|| self.lanes[2].cmp(&other.lanes[2]))
    }
}

/// Evaluates the triangle formed by three distinct lanes.
pub fn evaluate(index: &LaneIndex, space: &MetricSpace, lanes: [LaneIx; 3]) -> Result<Triangle> {
    let [a, b, c] = lanes;
    if a == b || a == c {
        return Err(Error::RepeatedLane(index.lane(a).id.clone()));
    }
    if b == c {
        return Err(Error::RepeatedLane(index.lane(b).id.clone()));
    }
    let (l1, l2, l3) = (index.lane(a), index.lane(b), index.lane(c));
    Ok(Triangle::from_legs(
        lanes,
        [l1.dist, l2.dist, l3.dist],
        [
            space.dist(l1.end, l2.start),
            space.dist(l2.end, l3.start),
            space.dist(l3.end, l1.start),
        ],
    ))
}

/// Both conditions are non-strict: `ovr >= ell` and `total <= u`.
#[inline]
pub fn is_feasible(tr: &Triangle, ell: f64, u: f64) -> bool {
    tr.total <= u && ell <= tr.ovr
}

/// Work counters of one query.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Stats {
    /// Iterations entered at each loop level: first start base, second lane,
    /// second start base, third lane. The double-loop brute force only
    /// fills the lane levels.
    pub visits: [u64; 4],
    /// Triangles that passed the final feasibility check.
    pub feasible: u64,
    pub elapsed: Duration,
}

impl Stats {
    pub fn candidates(&self) -> u64 {
        self.visits.iter().sum()
    }
}

#[derive(Clone, Debug)]
pub struct ResultSet {
    /// Best first, see [`Triangle::rank_cmp`].
    pub triangles: Vec<Triangle>,
    /// Threshold in force when the search ended; the input `ell` except in top-k mode.
    pub ell_star: f64,
    pub stats: Stats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Brute,
    Quad,
    Pruned,
    TopK,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Brute,
        Algorithm::Quad,
        Algorithm::Pruned,
        Algorithm::TopK,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Brute => "brute",
            Algorithm::Quad => "quad",
            Algorithm::Pruned => "pruned",
            Algorithm::TopK => "topk",
        }
    }

    pub fn run(self, index: &LaneIndex, space: &MetricSpace, q: &Query) -> Result<ResultSet> {
        match self {
            Algorithm::Brute => enumerate_bruteforce(index, space, q),
            Algorithm::Quad => enumerate_quad(index, space, q),
            Algorithm::Pruned => enumerate_pruned(index, space, q),
            Algorithm::TopK => enumerate_topk(index, space, q),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidQuery(format!("unknown algorithm `{s}`")))
    }
}

fn timed<F>(index: &LaneIndex, q: &Query, f: F) -> Result<ResultSet>
where
    F: FnOnce(LaneIx, &mut Stats) -> (Vec<Triangle>, f64),
{
    let t1 = index.lane_ix(&q.t1)?;
    let started = Instant::now();
    let mut stats = Stats::default();
    let (mut triangles, ell_star) = f(t1, &mut stats);
    triangles.sort_by(Triangle::rank_cmp);
    stats.feasible = triangles.len() as u64;
    stats.elapsed = started.elapsed();
    Ok(ResultSet {
        triangles,
        ell_star,
        stats,
    })
}

/// Double loop over every ordered lane pair. The reference oracle.
pub fn enumerate_bruteforce(index: &LaneIndex, space: &MetricSpace, q: &Query) -> Result<ResultSet> {
    timed(index, q, |t1, stats| {
        (exhaustive::pairs(index, space, t1, q.ell, q.u, stats), q.ell)
    })
}

/// Same search restructured as four loops over `S` and `T(s)`.
pub fn enumerate_quad(index: &LaneIndex, space: &MetricSpace, q: &Query) -> Result<ResultSet> {
    timed(index, q, |t1, stats| {
        (exhaustive::quad(index, space, t1, q.ell, q.u, stats), q.ell)
    })
}

/// Four loops narrowed by the leg bounds and early exits on the mileage cap.
pub fn enumerate_pruned(index: &LaneIndex, space: &MetricSpace, q: &Query) -> Result<ResultSet> {
    timed(index, q, |t1, stats| {
        let mut sink = pruned::Collect {
            ell: q.ell,
            found: Vec::new(),
        };
        pruned::search(index, space, t1, q.u, &mut sink, stats);
        (sink.found, q.ell)
    })
}

/// Pruned search keeping only the `k` best rates, raising the threshold to
/// the current k-th best as soon as `k` candidates are held.
pub fn enumerate_topk(index: &LaneIndex, space: &MetricSpace, q: &Query) -> Result<ResultSet> {
    let k = q
        .k
        .ok_or_else(|| Error::InvalidQuery("top-k search needs k".into()))?;
    if k == 0 {
        return Err(Error::InvalidQuery("k must be at least 1".into()));
    }
    timed(index, q, |t1, stats| {
        let mut sink = pruned::TopK::new(k, q.ell, q.deterministic);
        pruned::search(index, space, t1, q.u, &mut sink, stats);
        let ell_star = sink.ell;
        (sink.into_sorted(), ell_star)
    })
}
