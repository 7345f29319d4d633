//! Bell functionals tr(M^T P) <= c, their evaluation, and the complete
//! CHSH-type and I2233-type facet orbits for the binary and three-outcome
//! scenarios.

use crate::dist::Distribution;
use crate::rat::{format_rat, rat_int, rat_zero, Rat};
use crate::scenario::Scenario;
use crate::sym::SymmetryOp;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BellError {
    #[error("functional and distribution scenarios differ")]
    MismatchedScenario,
    #[error("no facet orbit construction for this scenario")]
    UnsupportedScenario,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyTag {
    Chsh,
    I2233,
    Positivity,
    Custom,
}

/// How an orbit member was produced from its representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Representative,
    Symmetry(SymmetryOp),
    /// Pullback of a binary CHSH functional along per-(party, input)
    /// two-to-one output merges.
    CoarseGrainLift {
        base: usize,
        maps_a: Vec<Vec<usize>>,
        maps_b: Vec<Vec<usize>>,
    },
}

/// A linear functional on distributions, stored in `<=`-form only;
/// `>=`-form inequalities are negated on ingestion. Equality compares the
/// mathematical content (scenario, coefficients, bound), not provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BellFunctional {
    pub scenario: Scenario,
    /// One coefficient per `(a, b, x, y)` in internal storage order.
    pub coeffs: Vec<Rat>,
    pub bound: Rat,
    pub family: FamilyTag,
    pub provenance: Provenance,
}

impl PartialEq for BellFunctional {
    fn eq(&self, other: &Self) -> bool {
        self.scenario == other.scenario && self.coeffs == other.coeffs && self.bound == other.bound
    }
}

impl Eq for BellFunctional {}

impl BellFunctional {
    pub fn new(scenario: Scenario, coeffs: Vec<Rat>, bound: Rat, family: FamilyTag) -> Self {
        assert_eq!(coeffs.len(), scenario.dimension());
        Self {
            scenario,
            coeffs,
            bound,
            family,
            provenance: Provenance::Representative,
        }
    }

    /// Ingests `sum coeffs * p >= bound` by negation.
    pub fn from_lower_bound(
        scenario: Scenario,
        coeffs: Vec<Rat>,
        bound: Rat,
        family: FamilyTag,
    ) -> Self {
        Self::new(
            scenario,
            coeffs.into_iter().map(|c| -c).collect(),
            -bound,
            family,
        )
    }

    pub fn evaluate(&self, d: &Distribution) -> Result<Rat, BellError> {
        if d.scenario() != self.scenario {
            return Err(BellError::MismatchedScenario);
        }
        let mut acc = rat_zero();
        for (c, p) in self.coeffs.iter().zip(d.entries()) {
            if !c.is_zero() && !p.is_zero() {
                acc += c * p;
            }
        }
        Ok(acc)
    }

    pub fn violates(&self, d: &Distribution) -> Result<bool, BellError> {
        Ok(self.evaluate(d)? > self.bound)
    }

    /// Transported functional: evaluates on `op(d)` as `self` does on `d`.
    pub fn transported(&self, op: &SymmetryOp) -> Self {
        Self {
            scenario: self.scenario,
            coeffs: op.permute_table(self.scenario, &self.coeffs),
            bound: self.bound.clone(),
            family: self.family,
            provenance: Provenance::Symmetry(op.clone()),
        }
    }
}

/// Representative binary CHSH functional: correlated outcomes score on three
/// input pairs, anticorrelated on (1,1); local bound 3.
pub fn chsh_representative_2222() -> BellFunctional {
    let s = Scenario::two_two_two_two();
    let coeffs = s
        .iter_abxy()
        .map(|(a, b, x, y)| {
            let want_equal = !(a == 1 && b == 1);
            if (x == y) == want_equal {
                rat_int(1)
            } else {
                rat_zero()
            }
        })
        .collect();
    BellFunctional::new(s, coeffs, rat_int(3), FamilyTag::Chsh)
}

/// The three-outcome CHSH representative: the binary one pulled back along
/// the merge of outcomes 1 and 2 on every (party, input).
pub fn chsh_representative_2233() -> BellFunctional {
    let base = chsh_representative_2222();
    let s = Scenario::two_two_three_three();
    let coeffs = s
        .iter_abxy()
        .map(|(a, b, x, y)| base.coeffs[base.scenario.index(a, b, x.min(1), y.min(1))].clone())
        .collect();
    BellFunctional::new(s, coeffs, rat_int(3), FamilyTag::Chsh)
}

/// Representative I2233 functional, local bound 2, maximal no-signalling
/// value 4.
pub fn i2233_representative() -> BellFunctional {
    let s = Scenario::two_two_three_three();
    let coeffs = s
        .iter_abxy()
        .map(|(a, b, x, y)| {
            let diag = x == y;
            let x_is_y_plus_1 = x == (y + 1) % 3;
            let y_is_x_plus_1 = y == (x + 1) % 3;
            let v: i64 = match (a, b) {
                (0, 0) => (diag as i64) - (x_is_y_plus_1 as i64),
                (0, 1) | (1, 0) => (diag as i64) - (y_is_x_plus_1 as i64),
                (1, 1) => (y_is_x_plus_1 as i64) - (diag as i64),
                _ => unreachable!(),
            };
            rat_int(v)
        })
        .collect();
    BellFunctional::new(s, coeffs, rat_int(2), FamilyTag::I2233)
}

/// Witness inequality tr(M^T P) >= 1 (all deterministic points score at
/// least 1), stored in `<=`-form; mixtures scoring below 1 are nonlocal.
pub fn midpoint_nonlocality_witness() -> BellFunctional {
    let s = Scenario::two_two_three_three();
    let rows: [[i64; 6]; 6] = [
        [0, 1, 1, 0, 1, 1],
        [1, 0, 1, 1, 0, 1],
        [1, 1, 1, 0, 0, 0],
        [0, 1, 0, 1, 0, 0],
        [1, 0, 0, 0, 1, 0],
        [1, 0, 0, 0, 1, 0],
    ];
    let mut coeffs = vec![rat_zero(); 36];
    for (a, b, x, y) in s.iter_abxy() {
        coeffs[s.index(a, b, x, y)] = rat_int(rows[a * 3 + x][b * 3 + y]);
    }
    BellFunctional::from_lower_bound(s, coeffs, rat_int(1), FamilyTag::Custom)
}

/// The 36 (or 16) positivity constraints `-p(xy|ab) <= 0`.
pub fn positivity_functionals(s: Scenario) -> Vec<BellFunctional> {
    (0..s.dimension())
        .map(|i| {
            let mut coeffs = vec![rat_zero(); s.dimension()];
            coeffs[i] = rat_int(-1);
            BellFunctional::new(s, coeffs, rat_zero(), FamilyTag::Positivity)
        })
        .collect()
}

fn dedup_key(f: &BellFunctional) -> String {
    let mut key = String::new();
    for c in &f.coeffs {
        key.push_str(&format_rat(c));
        key.push(',');
    }
    key.push_str(&format_rat(&f.bound));
    key
}

fn orbit_under_group(rep: &BellFunctional, ops: &[SymmetryOp]) -> Vec<BellFunctional> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for op in ops {
        let f = rep.transported(op);
        if seen.insert(dedup_key(&f)) {
            out.push(f);
        }
    }
    out
}

/// The six surjections from three outcomes onto two.
fn surjections_3_to_2() -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for m0 in 0..2usize {
        for m1 in 0..2usize {
            for m2 in 0..2usize {
                let m = [m0, m1, m2];
                if m.contains(&0) && m.contains(&1) {
                    out.push(m);
                }
            }
        }
    }
    out
}

fn chsh_orbit_2222() -> Vec<BellFunctional> {
    let ops = SymmetryOp::enumerate(Scenario::two_two_two_two());
    orbit_under_group(&chsh_representative_2222(), &ops)
}

fn chsh_orbit_2233() -> Vec<BellFunctional> {
    let s33 = Scenario::two_two_three_three();
    let base_orbit = chsh_orbit_2222();
    let merges = surjections_3_to_2();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (k, base) in base_orbit.iter().enumerate() {
        for ga0 in &merges {
            for ga1 in &merges {
                for gb0 in &merges {
                    for gb1 in &merges {
                        let maps_a = [ga0, ga1];
                        let maps_b = [gb0, gb1];
                        let coeffs: Vec<Rat> = s33
                            .iter_abxy()
                            .map(|(a, b, x, y)| {
                                base.coeffs[base.scenario.index(a, b, maps_a[a][x], maps_b[b][y])]
                                    .clone()
                            })
                            .collect();
                        let f = BellFunctional {
                            scenario: s33,
                            coeffs,
                            bound: rat_int(3),
                            family: FamilyTag::Chsh,
                            provenance: Provenance::CoarseGrainLift {
                                base: k,
                                maps_a: vec![ga0.to_vec(), ga1.to_vec()],
                                maps_b: vec![gb0.to_vec(), gb1.to_vec()],
                            },
                        };
                        if seen.insert(dedup_key(&f)) {
                            out.push(f);
                        }
                    }
                }
            }
        }
    }
    out
}

fn i2233_orbit_uncached() -> Vec<BellFunctional> {
    let ops = SymmetryOp::enumerate(Scenario::two_two_three_three());
    orbit_under_group(&i2233_representative(), &ops)
}

static ORBITS_2233: OnceLock<(Vec<BellFunctional>, Vec<BellFunctional>)> = OnceLock::new();

/// Cached (CHSH-type, I2233-type) facet orbits for the (2,2,3,3) scenario:
/// 648 and 432 functionals.
pub fn facet_orbits_2233() -> &'static (Vec<BellFunctional>, Vec<BellFunctional>) {
    ORBITS_2233.get_or_init(|| (chsh_orbit_2233(), i2233_orbit_uncached()))
}

/// Deduplicated CHSH-type orbit: 8 functionals for (2,2,2,2), 648 for
/// (2,2,3,3).
pub fn chsh_orbit(s: Scenario) -> Result<Vec<BellFunctional>, BellError> {
    if s == Scenario::two_two_two_two() {
        Ok(chsh_orbit_2222())
    } else if s == Scenario::two_two_three_three() {
        Ok(facet_orbits_2233().0.clone())
    } else {
        Err(BellError::UnsupportedScenario)
    }
}

/// The 432 I2233-type functionals; element 0 is the representative.
pub fn i2233_orbit() -> Vec<BellFunctional> {
    facet_orbits_2233().1.clone()
}

/// Indices are 1-based within each orbit; `value` is the exact functional
/// value of each violated inequality.
#[derive(Debug, Clone, Serialize)]
pub struct ViolationReport {
    pub chsh: Vec<(usize, String)>,
    pub i2233: Vec<(usize, String)>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.chsh.is_empty() && self.i2233.is_empty()
    }
}

/// All violated facets of the (2,2,3,3) local polytope on `d`, across both
/// non-positivity orbits.
pub fn violated_set(d: &Distribution) -> Result<ViolationReport, BellError> {
    if d.scenario() != Scenario::two_two_three_three() {
        return Err(BellError::UnsupportedScenario);
    }
    let (chsh, i2233) = facet_orbits_2233();
    let collect = |fs: &[BellFunctional]| -> Result<Vec<(usize, String)>, BellError> {
        let mut out = Vec::new();
        for (i, f) in fs.iter().enumerate() {
            let v = f.evaluate(d)?;
            if v > f.bound {
                out.push((i + 1, format_rat(&v)));
            }
        }
        Ok(out)
    };
    Ok(ViolationReport {
        chsh: collect(chsh)?,
        i2233: collect(i2233)?,
    })
}

/// JSON export form with coefficients in the interchange (flattened) layout.
#[derive(Debug, Serialize, Deserialize)]
pub struct FunctionalJson {
    pub scenario: [usize; 4],
    pub coeffs: Vec<String>,
    pub bound: String,
    pub family_tag: String,
    pub generating_symmetry: serde_json::Value,
}

impl BellFunctional {
    pub fn to_json(&self) -> FunctionalJson {
        let s = self.scenario;
        let mut flat = vec![String::new(); s.dimension()];
        for (a, b, x, y) in s.iter_abxy() {
            flat[s.flat_index(a, b, x, y)] = format_rat(&self.coeffs[s.index(a, b, x, y)]);
        }
        FunctionalJson {
            scenario: s.into(),
            coeffs: flat,
            bound: format_rat(&self.bound),
            family_tag: format!("{:?}", self.family),
            generating_symmetry: serde_json::to_value(&self.provenance)
                .expect("provenance serializes"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::dist::mix2;
    use crate::rat::{rat, rat_one};
    use crate::sym::deterministic_points;

    /// Probability-form oracle for the representative I2233 value.
    fn i2233_probability_form(d: &Distribution) -> Rat {
        let p = |a: usize, b: usize, rel: &dyn Fn(usize, usize) -> bool| -> Rat {
            let mut acc = rat_zero();
            for x in 0..3 {
                for y in 0..3 {
                    if rel(x, y) {
                        acc += d.p(a, b, x, y);
                    }
                }
            }
            acc
        };
        let eq = |x: usize, y: usize| x == y;
        let x_eq_y_minus_1 = |x: usize, y: usize| y == (x + 1) % 3;
        let x_eq_y_plus_1 = |x: usize, y: usize| x == (y + 1) % 3;
        p(0, 1, &eq) + p(1, 1, &x_eq_y_minus_1) + p(1, 0, &eq) + p(0, 0, &eq)
            - p(0, 1, &x_eq_y_minus_1)
            - p(1, 1, &eq)
            - p(1, 0, &x_eq_y_minus_1)
            - p(0, 0, &x_eq_y_plus_1)
    }

    #[test]
    fn chsh_values_on_named_boxes() {
        let chsh = chsh_representative_2222();
        assert_eq!(chsh.evaluate(&catalog::pr_box()).unwrap(), rat_int(4));
        assert_eq!(chsh.evaluate(&catalog::p_c_2222()).unwrap(), rat_int(3));
        assert!(!chsh.violates(&catalog::p_c_2222()).unwrap());
    }

    #[test]
    fn i2233_values_against_probability_form_oracle() {
        let f = i2233_representative();
        for d in [
            catalog::p_nl(),
            catalog::p_nl_star(),
            catalog::p_e(),
            catalog::p_c_2233(),
            catalog::p_iso(&rat(2, 7)).unwrap(),
        ] {
            assert_eq!(f.evaluate(&d).unwrap(), i2233_probability_form(&d));
        }
        assert_eq!(f.evaluate(&catalog::p_nl()).unwrap(), rat_int(4));
    }

    #[test]
    fn i2233_grows_linearly_on_isotropic_family() {
        let f = i2233_representative();
        for eps in [rat(0, 1), rat(1, 2), rat(4, 7), rat(1, 1)] {
            let d = catalog::p_iso(&eps).unwrap();
            assert_eq!(f.evaluate(&d).unwrap(), rat_int(4) * &eps);
        }
    }

    #[test]
    fn evaluate_is_linear_under_mixing() {
        let f = i2233_representative();
        let d1 = catalog::p_nl();
        let d2 = catalog::p_c_2233();
        let w = rat(3, 11);
        let mixed = mix2(&w, &d1, &d2).unwrap();
        assert_eq!(
            f.evaluate(&mixed).unwrap(),
            &w * f.evaluate(&d1).unwrap() + (rat_one() - &w) * f.evaluate(&d2).unwrap()
        );
    }

    #[test]
    fn mismatched_scenario_is_an_error() {
        let f = chsh_representative_2222();
        assert_eq!(
            f.evaluate(&catalog::p_nl()),
            Err(BellError::MismatchedScenario)
        );
    }

    #[test]
    fn binary_orbit_count_and_pr_correspondence() {
        let orbit = chsh_orbit(Scenario::two_two_two_two()).unwrap();
        assert_eq!(orbit.len(), 8);
        // Each PR-box variant violates exactly one of the 8.
        let pr_orbit = crate::sym::relabelling_orbit(&catalog::pr_box());
        assert_eq!(pr_orbit.len(), 8);
        for pr in &pr_orbit {
            let violated: Vec<_> = orbit.iter().filter(|f| f.violates(pr).unwrap()).collect();
            assert_eq!(violated.len(), 1);
        }
        for f in &orbit {
            let violators = pr_orbit.iter().filter(|pr| f.violates(pr).unwrap()).count();
            assert_eq!(violators, 1);
        }
    }

    #[test]
    fn facet_census_2233() {
        let (chsh, i2233) = facet_orbits_2233();
        assert_eq!(chsh.len(), 648);
        assert_eq!(i2233.len(), 432);
        assert_eq!(
            positivity_functionals(Scenario::two_two_three_three()).len(),
            36
        );
        assert_eq!(36 + chsh.len() + i2233.len(), 1116);
        assert_eq!(i2233[0], i2233_representative());
        assert!(chsh.contains(&chsh_representative_2233()));
    }

    #[test]
    fn orbit_closed_under_relabelling() {
        use rand::prelude::*;
        let (chsh, i2233) = facet_orbits_2233();
        let keys: std::collections::HashSet<String> = i2233.iter().map(dedup_key).collect();
        let chsh_keys: std::collections::HashSet<String> = chsh.iter().map(dedup_key).collect();
        let ops = SymmetryOp::enumerate(Scenario::two_two_three_three());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let op = ops.choose(&mut rng).unwrap();
            let f = i2233.choose(&mut rng).unwrap().transported(op);
            assert!(keys.contains(&dedup_key(&f)));
            let g = chsh.choose(&mut rng).unwrap().transported(op);
            assert!(chsh_keys.contains(&dedup_key(&g)));
        }
    }

    #[test]
    fn transport_is_covariant_with_distribution_action() {
        use rand::prelude::*;
        let d = catalog::p_e();
        let f = i2233_representative();
        let ops = SymmetryOp::enumerate(d.scenario());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let op = ops.choose(&mut rng).unwrap();
            let fd = f.transported(op).evaluate(&op.apply(&d).unwrap()).unwrap();
            assert_eq!(fd, f.evaluate(&d).unwrap());
        }
    }

    #[test]
    fn nl_violations_across_both_orbits() {
        let report = violated_set(&catalog::p_nl()).unwrap();
        // One maximal violation (value 4) plus four more at value 3.
        assert_eq!(report.i2233.len(), 5);
        assert_eq!(report.i2233[0], (1, "4/1".to_string()));
        assert!(report.i2233[1..].iter().all(|(_, v)| v == "3/1"));
        // The representative is the unique maximizer over the orbit.
        let values: Vec<Rat> = i2233_orbit()
            .iter()
            .map(|f| f.evaluate(&catalog::p_nl()).unwrap())
            .collect();
        assert!(values.iter().all(|v| v <= &rat_int(4)));
        assert_eq!(values.iter().filter(|v| **v == rat_int(4)).count(), 1);
        // Computed count, frozen as a regression value: 12 CHSH-type facets
        // broken, all at 11/3.
        assert_eq!(report.chsh.len(), 12);
        assert!(report.chsh.iter().all(|(_, v)| v == "11/3"));
        // The representative CHSH-type functional is among them: merging
        // outcomes 1,2 for every party/input scores 11/3 on this box.
        assert_eq!(
            chsh_representative_2233()
                .evaluate(&catalog::p_nl())
                .unwrap(),
            rat(11, 3)
        );
    }

    #[test]
    fn counterexample_violates_one_i2233_and_no_chsh() {
        let report = violated_set(&catalog::p_e()).unwrap();
        assert!(report.chsh.is_empty());
        assert_eq!(report.i2233.len(), 1);
    }

    #[test]
    fn iso_at_chsh_threshold() {
        let d = catalog::p_iso(&rat(4, 7)).unwrap();
        let report = violated_set(&d).unwrap();
        assert!(report.chsh.is_empty());
        assert_eq!(report.i2233.len(), 1);
        assert_eq!(i2233_representative().evaluate(&d).unwrap(), rat(16, 7));
    }

    #[test]
    fn deterministic_points_satisfy_every_facet() {
        for d in deterministic_points(Scenario::two_two_three_three())
            .iter()
            .step_by(13)
        {
            assert!(violated_set(d).unwrap().is_empty());
        }
        let locals33 = catalog::p_c_2233();
        for f in chsh_orbit(Scenario::two_two_three_three())
            .unwrap()
            .iter()
            .step_by(37)
        {
            assert!(f.evaluate(&locals33).unwrap() <= rat_int(3));
        }
    }

    #[test]
    fn witness_scores_below_one_only_past_threshold() {
        let witness = midpoint_nonlocality_witness();
        let r = crate::sym::LocalRelabelling::alice_output_swap(
            Scenario::two_two_three_three(),
            1,
            1,
            2,
        );
        for (eps, expect_nonlocal) in [(rat(4, 7), false), (rat(3, 5), true)] {
            let iso = catalog::p_iso(&eps).unwrap();
            let partner = r.apply(&iso).unwrap();
            let midpoint = mix2(&rat(1, 2), &iso, &partner).unwrap();
            // In <=-form a violation means the raw score drops below 1.
            assert_eq!(witness.violates(&midpoint).unwrap(), expect_nonlocal);
        }
    }
}
