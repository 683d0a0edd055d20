//! Fixtures shared by the criterion benches.

use trimatch_core::gen::generate;
use trimatch_core::{LaneIndex, MetricSpace};

/// A generated great-circle instance with its built index.
pub struct Fixture {
    pub space: MetricSpace,
    pub index: LaneIndex,
}

impl Fixture {
    pub fn new(seed: u64, bases: usize, lanes: usize) -> Self {
        let (space, index) = generate(seed, bases, lanes)
            .and_then(|inst| inst.build())
            .expect("generated instance");
        Self { space, index }
    }

    /// The first `n` lane ids, used as client lanes.
    pub fn clients(&self, n: usize) -> Vec<String> {
        self.index.lanes().iter().take(n).map(|l| l.id.clone()).collect()
    }
}
