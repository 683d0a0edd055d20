//! The bounded four-loop search shared by the pruned and top-k backends.
//!
//! The threshold is read from the sink on every bound evaluation, so a sink
//! that raises it mid-search (top-k) tightens the remaining loops at once.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::bounds::{bound_d2, bound_d3, bound_e1, bound_e2};
use super::{is_feasible, Stats, Triangle};
use crate::lanes::{LaneIndex, LaneIx};
use crate::metric::MetricSpace;

/// Pruning bounds are widened by this fraction of `u`.
///
/// The final feasibility test is exact; the widening only keeps rounding in
/// the bound arithmetic (e.g. `40 * (1 - 0.9) < 4`) from discarding a
/// triangle that sits exactly on the boundary.
const SLACK: f64 = 1e-9;

pub(super) trait Sink {
    fn ell(&self) -> f64;
    fn offer(&mut self, tr: Triangle);
}

pub(super) struct Collect {
    pub ell: f64,
    pub found: Vec<Triangle>,
}

impl Sink for Collect {
    #[inline]
    fn ell(&self) -> f64 {
        self.ell
    }

    fn offer(&mut self, tr: Triangle) {
        self.found.push(tr);
    }
}

/// Heap entry ordered so that the better triangle compares greater.
#[derive(Clone, Copy, Debug)]
pub(super) struct Ranked(pub Triangle);

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ranked {}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.rank_cmp(&self.0)
    }
}

/// Size-capped min-heap of the best triangles seen so far.
pub(super) struct TopK {
    heap: BinaryHeap<Reverse<Ranked>>,
    k: usize,
    pub ell: f64,
    deterministic: bool,
}

impl TopK {
    pub fn new(k: usize, ell: f64, deterministic: bool) -> Self {
        Self {
            heap: BinaryHeap::with_capacity(k + 1),
            k,
            ell,
            deterministic,
        }
    }

    pub fn into_sorted(self) -> Vec<Triangle> {
        // Ascending `Reverse` order is descending rank: best first.
        self.heap.into_sorted_vec().into_iter().map(|Reverse(r)| r.0).collect()
    }
}

impl Sink for TopK {
    #[inline]
    fn ell(&self) -> f64 {
        self.ell
    }

    fn offer(&mut self, tr: Triangle) {
        if self.heap.len() == self.k {
            if self.deterministic {
                // A tie on rate only displaces the incumbent when its ids sort first.
                match self.heap.peek() {
                    Some(Reverse(worst)) if Ranked(tr) <= *worst => return,
                    _ => {}
                }
            }
            self.heap.pop();
        }
        self.heap.push(Reverse(Ranked(tr)));
        if self.heap.len() == self.k {
            if let Some(Reverse(worst)) = self.heap.peek() {
                debug_assert!(worst.0.ovr >= self.ell);
                self.ell = worst.0.ovr;
            }
        }
    }
}

pub(super) fn search<S: Sink>(
    index: &LaneIndex,
    space: &MetricSpace,
    t1: LaneIx,
    u: f64,
    sink: &mut S,
    stats: &mut Stats,
) {
    let first = index.lane(t1);
    let home = first.start;
    let d1 = first.dist;
    let slack = u * SLACK;

    for &(s, e1) in index.neighbors(first.end) {
        if e1 > bound_e1(sink.ell(), u, d1) + slack {
            break;
        }
        stats.visits[0] += 1;
        if u + slack < d1 + e1 + space.dist(s, home) {
            continue;
        }
        let (lo2, hi2) = bound_d2(sink.ell(), u, d1, e1);
        for &t2 in index.lanes_in_range(s, lo2 - slack, hi2 + slack) {
            if t2 == t1 {
                continue;
            }
            stats.visits[1] += 1;
            let second = index.lane(t2);
            let d2 = second.dist;
            if u + slack < d1 + e1 + d2 + space.dist(second.end, home) {
                continue;
            }
            for &(s2, e2) in index.neighbors(second.end) {
                if e2 > bound_e2(sink.ell(), u, d1, e1, d2) + slack {
                    break;
                }
                stats.visits[2] += 1;
                if u + slack < d1 + e1 + d2 + e2 + space.dist(s2, home) {
                    continue;
                }
                let (lo3, hi3) = bound_d3(sink.ell(), u, d1, e1, d2, e2);
                for &t3 in index.lanes_in_range(s2, lo3 - slack, hi3 + slack) {
                    if t3 == t1 || t3 == t2 {
                        continue;
                    }
                    stats.visits[3] += 1;
                    let third = index.lane(t3);
                    let tr = Triangle::from_legs(
                        [t1, t2, t3],
                        [d1, d2, third.dist],
                        [e1, e2, space.dist(third.end, home)],
                    );
                    if is_feasible(&tr, sink.ell(), u) {
                        sink.offer(tr);
                    }
                }
            }
        }
    }
}
