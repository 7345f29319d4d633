//! Bipartite Bell scenarios `(i_A, i_B, o_A, o_B)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("all input/output counts must be at least 1")]
    ZeroCount,
}

/// A two-party scenario: `inputs_a`/`inputs_b` measurement settings and
/// `outputs_a`/`outputs_b` outcomes per party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 4]", into = "[usize; 4]")]
pub struct Scenario {
    inputs_a: usize,
    inputs_b: usize,
    outputs_a: usize,
    outputs_b: usize,
}

impl Scenario {
    pub fn new(
        inputs_a: usize,
        inputs_b: usize,
        outputs_a: usize,
        outputs_b: usize,
    ) -> Result<Self, ScenarioError> {
        if inputs_a == 0 || inputs_b == 0 || outputs_a == 0 || outputs_b == 0 {
            return Err(ScenarioError::ZeroCount);
        }
        Ok(Self {
            inputs_a,
            inputs_b,
            outputs_a,
            outputs_b,
        })
    }

    pub fn two_two_two_two() -> Self {
        Self::new(2, 2, 2, 2).unwrap()
    }

    pub fn two_two_three_three() -> Self {
        Self::new(2, 2, 3, 3).unwrap()
    }

    pub fn inputs_a(&self) -> usize {
        self.inputs_a
    }
    pub fn inputs_b(&self) -> usize {
        self.inputs_b
    }
    pub fn outputs_a(&self) -> usize {
        self.outputs_a
    }
    pub fn outputs_b(&self) -> usize {
        self.outputs_b
    }

    /// Length of the flattened probability vector.
    pub fn dimension(&self) -> usize {
        self.inputs_a * self.inputs_b * self.outputs_a * self.outputs_b
    }

    /// Both parties have the same number of inputs and of outputs.
    pub fn is_symmetric(&self) -> bool {
        self.inputs_a == self.inputs_b && self.outputs_a == self.outputs_b
    }

    /// Internal storage index for `p(x y | a b)`.
    #[inline]
    pub fn index(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        debug_assert!(a < self.inputs_a && b < self.inputs_b);
        debug_assert!(x < self.outputs_a && y < self.outputs_b);
        ((a * self.inputs_b + b) * self.outputs_a + x) * self.outputs_b + y
    }

    /// Interchange index: rows are `(a, x)`, columns `(b, y)`, flattened
    /// row-major (the layout used by the seed-vertex tables and all file
    /// formats).
    #[inline]
    pub fn flat_index(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        (a * self.outputs_a + x) * self.inputs_b * self.outputs_b + b * self.outputs_b + y
    }

    /// Iterates `(a, b, x, y)` in internal storage order.
    pub fn iter_abxy(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        let (ia, ib, oa, ob) = (self.inputs_a, self.inputs_b, self.outputs_a, self.outputs_b);
        (0..ia).flat_map(move |a| {
            (0..ib).flat_map(move |b| (0..oa).flat_map(move |x| (0..ob).map(move |y| (a, b, x, y))))
        })
    }
}

impl TryFrom<[usize; 4]> for Scenario {
    type Error = ScenarioError;
    fn try_from(v: [usize; 4]) -> Result<Self, Self::Error> {
        Scenario::new(v[0], v[1], v[2], v[3])
    }
}

impl From<Scenario> for [usize; 4] {
    fn from(s: Scenario) -> [usize; 4] {
        [s.inputs_a, s.inputs_b, s.outputs_a, s.outputs_b]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_and_indexing() {
        let s = Scenario::two_two_three_three();
        assert_eq!(s.dimension(), 36);
        let mut seen = [false; 36];
        for (a, b, x, y) in s.iter_abxy() {
            seen[s.index(a, b, x, y)] = true;
        }
        assert!(seen.iter().all(|&v| v));
        // Flat layout: row (a,x), column (b,y).
        assert_eq!(s.flat_index(0, 0, 0, 0), 0);
        assert_eq!(s.flat_index(0, 1, 0, 0), 3);
        assert_eq!(s.flat_index(0, 0, 1, 0), 6);
        assert_eq!(s.flat_index(1, 1, 2, 2), 35);
    }

    #[test]
    fn rejects_zero_counts() {
        assert_eq!(Scenario::new(0, 2, 2, 2), Err(ScenarioError::ZeroCount));
    }
}
