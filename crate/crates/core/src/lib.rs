//! Enumeration of triangular full-truckload transports.
//!
//! Given lanes on a finite metric space of bases, list every pair of partner
//! lanes `(t2, t3)` that closes a cycle with a client lane `t1` whose occupied
//! vehicle rate is at least `ell` and whose total mileage is at most `u`, or
//! just the `k` best such pairs. Savings of a matched triangle can be split
//! between the three lanes with the Shapley value.

pub mod bench;
pub mod engine;
pub mod error;
pub mod gen;
pub mod io;
pub mod lanes;
pub mod metric;
pub mod output;
pub mod shapley;

pub use engine::{
    enumerate_bruteforce, enumerate_pruned, enumerate_quad, enumerate_topk, evaluate, is_feasible,
    Algorithm, MileageCap, Query, ResultSet, Stats, Triangle,
};
pub use error::{Error, Result};
pub use lanes::{Lane, LaneIndex, LaneIx};
pub use metric::{validate_metric, BaseIx, MetricSpace, Provider, ValidationReport, Violation};
pub use shapley::{shapley_split, ShapleySplit};
