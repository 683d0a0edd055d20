//! Unpruned backends: the double loop over lane pairs and its four-loop
//! restructuring over start bases.

use super::{is_feasible, Stats, Triangle};
use crate::lanes::{LaneIndex, LaneIx};
use crate::metric::MetricSpace;

pub(super) fn pairs(
    index: &LaneIndex,
    space: &MetricSpace,
    t1: LaneIx,
    ell: f64,
    u: f64,
    stats: &mut Stats,
) -> Vec<Triangle> {
    let first = index.lane(t1);
    let mut found = Vec::new();
    for (i2, second) in index.lanes().iter().enumerate() {
        let t2 = LaneIx(i2 as u32);
        if t2 == t1 {
            continue;
        }
        stats.visits[1] += 1;
        let e1 = space.dist(first.end, second.start);
        for (i3, third) in index.lanes().iter().enumerate() {
            let t3 = LaneIx(i3 as u32);
            if t3 == t1 || t3 == t2 {
                continue;
            }
            stats.visits[3] += 1;
            let tr = Triangle::from_legs(
                [t1, t2, t3],
                [first.dist, second.dist, third.dist],
                [
                    e1,
                    space.dist(second.end, third.start),
                    space.dist(third.end, first.start),
                ],
            );
            if is_feasible(&tr, ell, u) {
                found.push(tr);
            }
        }
    }
    found
}

pub(super) fn quad(
    index: &LaneIndex,
    space: &MetricSpace,
    t1: LaneIx,
    ell: f64,
    u: f64,
    stats: &mut Stats,
) -> Vec<Triangle> {
    let first = index.lane(t1);
    let mut found = Vec::new();
    for &s in index.starts() {
        stats.visits[0] += 1;
        let e1 = space.dist(first.end, s);
        for &t2 in index.lanes_from(s) {
            if t2 == t1 {
                continue;
            }
            stats.visits[1] += 1;
            let second = index.lane(t2);
            for &s2 in index.starts() {
                stats.visits[2] += 1;
                let e2 = space.dist(second.end, s2);
                for &t3 in index.lanes_from(s2) {
                    if t3 == t1 || t3 == t2 {
                        continue;
                    }
                    stats.visits[3] += 1;
                    let third = index.lane(t3);
                    let tr = Triangle::from_legs(
                        [t1, t2, t3],
                        [first.dist, second.dist, third.dist],
                        [e1, e2, space.dist(third.end, first.start)],
                    );
                    if is_feasible(&tr, ell, u) {
                        found.push(tr);
                    }
                }
            }
        }
    }
    found
}
