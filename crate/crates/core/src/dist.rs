//! Conditional distributions `p(x y | a b)` over a Bell scenario, stored as
//! exact rationals and immutable after construction.

use crate::rat::{format_rat, is_nonnegative, parse_rat, rat_one, rat_zero, Rat};
use crate::scenario::Scenario;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistError {
    #[error("probability table has wrong length: expected {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("negative probability at (a={a}, b={b}, x={x}, y={y})")]
    NegativeEntry {
        a: usize,
        b: usize,
        x: usize,
        y: usize,
    },
    #[error("block (a={a}, b={b}) does not sum to 1")]
    NotNormalized { a: usize, b: usize },
    #[error("distributions come from different scenarios")]
    MismatchedScenario,
    #[error("mixture weights must be nonnegative and sum to 1")]
    WeightsNotNormalized,
    #[error("index out of range for this scenario")]
    IndexOutOfRange,
    #[error("parse error: {0}")]
    ParseError(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
}

/// A no-signalling-agnostic conditional distribution. Invariants enforced at
/// construction: every entry nonnegative, every `(a, b)` block sums to 1
/// exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Distribution {
    scenario: Scenario,
    probs: Vec<Rat>,
}

impl Distribution {
    /// Builds from entries in internal `(a, b, x, y)` order.
    pub fn new(scenario: Scenario, probs: Vec<Rat>) -> Result<Self, DistError> {
        if probs.len() != scenario.dimension() {
            return Err(DistError::WrongLength {
                expected: scenario.dimension(),
                got: probs.len(),
            });
        }
        for (a, b, x, y) in scenario.iter_abxy() {
            if !is_nonnegative(&probs[scenario.index(a, b, x, y)]) {
                return Err(DistError::NegativeEntry { a, b, x, y });
            }
        }
        for a in 0..scenario.inputs_a() {
            for b in 0..scenario.inputs_b() {
                let mut sum = rat_zero();
                for x in 0..scenario.outputs_a() {
                    for y in 0..scenario.outputs_b() {
                        sum += &probs[scenario.index(a, b, x, y)];
                    }
                }
                if sum != rat_one() {
                    return Err(DistError::NotNormalized { a, b });
                }
            }
        }
        Ok(Self { scenario, probs })
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    #[inline]
    pub fn p(&self, a: usize, b: usize, x: usize, y: usize) -> &Rat {
        &self.probs[self.scenario.index(a, b, x, y)]
    }

    /// Entries in internal `(a, b, x, y)` order.
    pub fn entries(&self) -> &[Rat] {
        &self.probs
    }

    /// Flattens in the interchange layout: rows `(a, x)`, columns `(b, y)`,
    /// one row after another.
    pub fn flatten(&self) -> Vec<Rat> {
        let s = self.scenario;
        let mut out = vec![rat_zero(); s.dimension()];
        for (a, b, x, y) in s.iter_abxy() {
            out[s.flat_index(a, b, x, y)] = self.p(a, b, x, y).clone();
        }
        out
    }

    /// Inverse of [`flatten`](Self::flatten).
    pub fn from_flat(scenario: Scenario, flat: &[Rat]) -> Result<Self, DistError> {
        if flat.len() != scenario.dimension() {
            return Err(DistError::WrongLength {
                expected: scenario.dimension(),
                got: flat.len(),
            });
        }
        let mut probs = vec![rat_zero(); scenario.dimension()];
        for (a, b, x, y) in scenario.iter_abxy() {
            probs[scenario.index(a, b, x, y)] = flat[scenario.flat_index(a, b, x, y)].clone();
        }
        Self::new(scenario, probs)
    }

    /// Exact check that each party's outcome marginal is independent of the
    /// other party's input.
    pub fn is_no_signalling(&self) -> bool {
        let s = self.scenario;
        for a in 0..s.inputs_a() {
            for x in 0..s.outputs_a() {
                let reference: Rat = (0..s.outputs_b()).map(|y| self.p(a, 0, x, y)).sum();
                for b in 1..s.inputs_b() {
                    let sum: Rat = (0..s.outputs_b()).map(|y| self.p(a, b, x, y)).sum();
                    if sum != reference {
                        return false;
                    }
                }
            }
        }
        for b in 0..s.inputs_b() {
            for y in 0..s.outputs_b() {
                let reference: Rat = (0..s.outputs_a()).map(|x| self.p(0, b, x, y)).sum();
                for a in 1..s.inputs_a() {
                    let sum: Rat = (0..s.outputs_a()).map(|x| self.p(a, b, x, y)).sum();
                    if sum != reference {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Outcome marginal of one party for a given input. The other party's
    /// input is conditioned on 0; for no-signalling distributions the result
    /// does not depend on that choice.
    pub fn marginal(&self, party: Party, input: usize) -> Result<Vec<Rat>, DistError> {
        let s = self.scenario;
        match party {
            Party::A => {
                if input >= s.inputs_a() {
                    return Err(DistError::IndexOutOfRange);
                }
                Ok((0..s.outputs_a())
                    .map(|x| (0..s.outputs_b()).map(|y| self.p(input, 0, x, y)).sum())
                    .collect())
            }
            Party::B => {
                if input >= s.inputs_b() {
                    return Err(DistError::IndexOutOfRange);
                }
                Ok((0..s.outputs_b())
                    .map(|y| (0..s.outputs_a()).map(|x| self.p(0, input, x, y)).sum())
                    .collect())
            }
        }
    }

    /// Joint outcome distribution for the input pair `(a, b)`, in `(x, y)`
    /// row-major order.
    pub fn block(&self, a: usize, b: usize) -> Result<Vec<Rat>, DistError> {
        let s = self.scenario;
        if a >= s.inputs_a() || b >= s.inputs_b() {
            return Err(DistError::IndexOutOfRange);
        }
        Ok((0..s.outputs_a())
            .flat_map(|x| (0..s.outputs_b()).map(move |y| self.p(a, b, x, y).clone()))
            .collect())
    }

    /// Embeds into a scenario with more outcomes per party by assigning zero
    /// probability to the new outcomes.
    pub fn embed(&self, target: Scenario) -> Result<Distribution, DistError> {
        let s = self.scenario;
        if target.inputs_a() != s.inputs_a()
            || target.inputs_b() != s.inputs_b()
            || target.outputs_a() < s.outputs_a()
            || target.outputs_b() < s.outputs_b()
        {
            return Err(DistError::MismatchedScenario);
        }
        let mut probs = vec![rat_zero(); target.dimension()];
        for (a, b, x, y) in s.iter_abxy() {
            probs[target.index(a, b, x, y)] = self.p(a, b, x, y).clone();
        }
        Distribution::new(target, probs)
    }
}

/// Entrywise convex combination, exact.
pub fn mix(components: &[(Rat, &Distribution)]) -> Result<Distribution, DistError> {
    let Some(((_, first), rest)) = components.split_first() else {
        return Err(DistError::WeightsNotNormalized);
    };
    let scenario = first.scenario();
    if rest.iter().any(|(_, d)| d.scenario() != scenario) {
        return Err(DistError::MismatchedScenario);
    }
    let mut total = rat_zero();
    for (w, _) in components {
        if !is_nonnegative(w) {
            return Err(DistError::WeightsNotNormalized);
        }
        total += w;
    }
    if total != rat_one() {
        return Err(DistError::WeightsNotNormalized);
    }
    let mut probs = vec![rat_zero(); scenario.dimension()];
    for (w, d) in components {
        if w.is_zero() {
            continue;
        }
        for (i, p) in d.entries().iter().enumerate() {
            probs[i] += w.clone() * p;
        }
    }
    Distribution::new(scenario, probs)
}

/// Convenience for two-component mixtures `w*d1 + (1-w)*d2`.
pub fn mix2(w: &Rat, d1: &Distribution, d2: &Distribution) -> Result<Distribution, DistError> {
    mix(&[(w.clone(), d1), (rat_one() - w, d2)])
}

/// JSON interchange form: scenario counts plus `num/den` strings in the
/// flattened (row `(a,x)`, column `(b,y)`) order.
#[derive(Debug, Serialize, Deserialize)]
pub struct DistributionJson {
    pub scenario: [usize; 4],
    pub probs: Vec<String>,
}

impl Distribution {
    pub fn to_json(&self) -> DistributionJson {
        DistributionJson {
            scenario: self.scenario.into(),
            probs: self.flatten().iter().map(format_rat).collect(),
        }
    }

    pub fn from_json(json: &DistributionJson) -> Result<Self, DistError> {
        let scenario =
            Scenario::try_from(json.scenario).map_err(|e| DistError::ParseError(e.to_string()))?;
        let flat: Result<Vec<Rat>, _> = json.probs.iter().map(|s| parse_rat(s)).collect();
        Self::from_flat(scenario, &flat.map_err(DistError::ParseError)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self, DistError> {
        let json: DistributionJson =
            serde_json::from_str(s).map_err(|e| DistError::ParseError(e.to_string()))?;
        Self::from_json(&json)
    }

    /// CSV variant: a header line, then one row per `(a, b)` block with the
    /// block entries in `(x, y)` row-major order.
    pub fn to_csv(&self) -> String {
        let s = self.scenario;
        let mut out = String::from("a,b");
        for x in 0..s.outputs_a() {
            for y in 0..s.outputs_b() {
                out.push_str(&format!(",p({x}{y}|ab)"));
            }
        }
        out.push('\n');
        for a in 0..s.inputs_a() {
            for b in 0..s.inputs_b() {
                out.push_str(&format!("{a},{b}"));
                for x in 0..s.outputs_a() {
                    for y in 0..s.outputs_b() {
                        out.push(',');
                        out.push_str(&format_rat(self.p(a, b, x, y)));
                    }
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn from_csv(scenario: Scenario, csv: &str) -> Result<Self, DistError> {
        let mut probs = vec![rat_zero(); scenario.dimension()];
        let mut blocks_seen = 0usize;
        for line in csv.lines().skip(1) {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let expected = 2 + scenario.outputs_a() * scenario.outputs_b();
            if fields.len() != expected {
                return Err(DistError::ParseError(format!(
                    "expected {expected} fields, got {}",
                    fields.len()
                )));
            }
            let a: usize = fields[0]
                .parse()
                .map_err(|_| DistError::ParseError("bad input index".into()))?;
            let b: usize = fields[1]
                .parse()
                .map_err(|_| DistError::ParseError("bad input index".into()))?;
            if a >= scenario.inputs_a() || b >= scenario.inputs_b() {
                return Err(DistError::IndexOutOfRange);
            }
            let mut k = 2;
            for x in 0..scenario.outputs_a() {
                for y in 0..scenario.outputs_b() {
                    probs[scenario.index(a, b, x, y)] =
                        parse_rat(fields[k]).map_err(DistError::ParseError)?;
                    k += 1;
                }
            }
            blocks_seen += 1;
        }
        if blocks_seen != scenario.inputs_a() * scenario.inputs_b() {
            return Err(DistError::ParseError("missing (a,b) blocks".into()));
        }
        Self::new(scenario, probs)
    }
}
