//! Shapley split of the mileage saved by running three lanes as one triangle.
//!
//! The game is a savings game. Alone, a lane costs an out-and-back run with
//! an empty return. A pair costs the two-lane cycle, the full coalition costs
//! the triangle's total mileage. Coalition values are clamped at zero.

use crate::engine::Triangle;
use crate::error::{Error, Result};
use crate::lanes::{Lane, LaneIndex};
use crate::metric::MetricSpace;

/// Solo cost of a lane: loaded out, empty back.
pub fn standalone_cost(lane: &Lane) -> f64 {
    2.0 * lane.dist
}

/// Cost of the two-lane cycle `a -> b -> a`, independent of argument order.
pub fn pair_cost(a: &Lane, b: &Lane, space: &MetricSpace) -> Result<f64> {
    if a.id == b.id {
        return Err(Error::RepeatedLane(a.id.clone()));
    }
    let (a, b) = if a.id <= b.id { (a, b) } else { (b, a) };
    Ok(a.dist + space.dist(a.end, b.start) + b.dist + space.dist(b.end, a.start))
}

/// Pair slots are ordered `{0,1}`, `{0,2}`, `{1,2}`.
const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

#[derive(Clone, Debug, PartialEq)]
pub struct CoalitionGame {
    pub standalone: [f64; 3],
    pub pair_cost: [f64; 3],
    pub grand_cost: f64,
}

impl CoalitionGame {
    pub fn from_triangle(tr: &Triangle, index: &LaneIndex, space: &MetricSpace) -> Result<Self> {
        let lanes = tr.lanes.map(|l| index.lane(l));
        let mut pair = [0.0; 3];
        for (slot, &(i, j)) in PAIRS.iter().enumerate() {
            pair[slot] = pair_cost(lanes[i], lanes[j], space)?;
        }
        Ok(Self {
            standalone: lanes.map(standalone_cost),
            pair_cost: pair,
            grand_cost: tr.total,
        })
    }

    /// Savings of the coalition given as a bit mask over players, before clamping.
    pub fn raw_value(&self, mask: u8) -> f64 {
        let members: Vec<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
        let solo: f64 = members.iter().map(|&i| self.standalone[i]).sum();
        match members.as_slice() {
            [] | [_] => 0.0,
            [i, j] => {
                let slot = PAIRS.iter().position(|p| *p == (*i, *j)).expect("ordered pair");
                solo - self.pair_cost[slot]
            }
            _ => solo - self.grand_cost,
        }
    }

    pub fn value(&self, mask: u8) -> f64 {
        self.raw_value(mask).max(0.0)
    }

    /// Whether any coalition had negative savings that were clamped.
    pub fn clamped(&self) -> bool {
        (0u8..8).any(|m| self.raw_value(m) < 0.0)
    }
}

/// Exact Shapley value of a 3-player game, averaging marginal contributions
/// over all six arrival orders. `v` takes a bit mask of players.
pub fn shapley3<F: Fn(u8) -> f64>(v: F) -> [f64; 3] {
    const ORDERS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut shares = [0.0; 3];
    for order in ORDERS {
        let mut mask = 0u8;
        for player in order {
            let before = v(mask);
            mask |= 1 << player;
            shares[player] += v(mask) - before;
        }
    }
    shares.map(|s| s / 6.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShapleySplit {
    /// Savings in km allotted to `t1`, `t2`, `t3`.
    pub shares: [f64; 3],
    /// `v(N)`, the savings of the full coalition.
    pub total_savings: f64,
    pub clamped: bool,
}

pub fn shapley_split(tr: &Triangle, index: &LaneIndex, space: &MetricSpace) -> Result<ShapleySplit> {
    let game = CoalitionGame::from_triangle(tr, index, space)?;
    Ok(ShapleySplit {
        shares: shapley3(|m| game.value(m)),
        total_savings: game.value(0b111),
        clamped: game.clamped(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::evaluate;

    fn line(points: &[(&str, f64)]) -> MetricSpace {
        let ids = points.iter().map(|(id, _)| *id).collect();
        let rows = points
            .iter()
            .map(|(_, x)| points.iter().map(|(_, y)| (x - y).abs()).collect())
            .collect();
        MetricSpace::from_matrix(ids, rows).unwrap()
    }

    /// Subset-weight form `sum_S |S|!(n-|S|-1)!/n! (v(S+i) - v(S))`, independent of the
    /// permutation loop.
    fn by_subsets(v: impl Fn(u8) -> f64) -> [f64; 3] {
        let weight = |size: u32| match size {
            0 | 2 => 2.0 / 6.0,
            _ => 1.0 / 6.0,
        };
        let mut out = [0.0; 3];
        for (i, slot) in out.iter_mut().enumerate() {
            for mask in 0u8..8 {
                if mask & (1 << i) == 0 {
                    *slot += weight(mask.count_ones()) * (v(mask | (1 << i)) - v(mask));
                }
            }
        }
        out
    }

    #[test]
    fn standalone_and_pair_costs() {
        let space = line(&[("A", 0.0), ("B", 10.0), ("C", 4.0)]);
        let ab = Lane::new(&space, "ab", "A", "B", None).unwrap();
        let ba = Lane::new(&space, "ba", "B", "A", None).unwrap();
        let ca = Lane::new(&space, "ca", "C", "A", None).unwrap();
        assert_eq!(standalone_cost(&ab), 20.0);
        assert_eq!(standalone_cost(&ba), 20.0);
        assert_eq!(pair_cost(&ab, &ba, &space).unwrap(), 20.0);
        assert_eq!(pair_cost(&ab, &ca, &space).unwrap(), 20.0);
        assert_eq!(pair_cost(&ca, &ab, &space).unwrap(), pair_cost(&ab, &ca, &space).unwrap());
        assert!(pair_cost(&ab, &ab, &space).is_err());
    }

    #[test]
    fn line_triangle_split() {
        let space = line(&[("A", 0.0), ("B", 10.0), ("C", 4.0), ("D", 1.0)]);
        let lanes = vec![
            Lane::new(&space, "AB", "A", "B", None).unwrap(),
            Lane::new(&space, "BC", "B", "C", None).unwrap(),
            Lane::new(&space, "CD", "C", "D", None).unwrap(),
        ];
        let index = LaneIndex::build(lanes, &space).unwrap();
        let ids = ["AB", "BC", "CD"].map(|id| index.lane_ix(id).unwrap());
        let tr = evaluate(&index, &space, ids).unwrap();
        let game = CoalitionGame::from_triangle(&tr, &index, &space).unwrap();
        assert_eq!(game.standalone, [20.0, 12.0, 6.0]);
        assert_eq!(game.pair_cost, [20.0, 20.0, 18.0]);
        let split = shapley_split(&tr, &index, &space).unwrap();
        assert_eq!(split.total_savings, 18.0);
        assert_eq!(split.shares, by_subsets(|m| game.value(m)));
        // By hand: v12 = 12, v13 = 6, v23 = 0, vN = 18.
        assert_eq!(split.shares, [9.0, 6.0, 3.0]);
        assert!(!split.clamped);
    }

    #[test]
    fn symmetric_players_split_evenly() {
        let v = |m: u8| match m.count_ones() {
            0 | 1 => 0.0,
            2 => 4.0,
            _ => 9.0,
        };
        let s = shapley3(v);
        for x in s {
            assert!((x - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dummy_gets_nothing() {
        // Player 2 adds nothing to any coalition.
        let v = |m: u8| if m & 0b011 == 0b011 { 5.0 } else { 0.0 };
        assert_eq!(shapley3(v)[2], 0.0);
        assert_eq!(shapley3(v), [2.5, 2.5, 0.0]);
    }

    #[test]
    fn negative_pair_savings_are_clamped() {
        let game = CoalitionGame {
            standalone: [2.0, 2.0, 2.0],
            pair_cost: [10.0, 3.0, 3.0],
            grand_cost: 5.0,
        };
        assert_eq!(game.raw_value(0b011), -6.0);
        assert_eq!(game.value(0b011), 0.0);
        assert!(game.clamped());
        let s = shapley3(|m| game.value(m));
        assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
