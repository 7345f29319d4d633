//! Local relabellings, party exchange, coarse-grainings and deterministic
//! strategies: the post-processing operations that cannot generate
//! non-classicality, together with their action on distributions.

use crate::dist::{DistError, Distribution};
use crate::rat::{rat_one, rat_zero, Rat};
use crate::scenario::Scenario;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("operation is incompatible with the distribution's scenario")]
    IncompatibleScenario,
    #[error("party exchange requires a symmetric scenario")]
    AsymmetricScenario,
    #[error(transparent)]
    Dist(#[from] DistError),
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    permute(&mut items, 0, &mut out);
    out.sort();
    out
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (old, &new) in perm.iter().enumerate() {
        inv[new] = old;
    }
    inv
}

/// An invertible local relabelling: input permutations per party and an
/// output permutation per (party, input). Output permutations are indexed by
/// the input label before the input permutation is applied.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalRelabelling {
    pub input_perm_a: Vec<usize>,
    pub output_perms_a: Vec<Vec<usize>>,
    pub input_perm_b: Vec<usize>,
    pub output_perms_b: Vec<Vec<usize>>,
}

impl LocalRelabelling {
    pub fn identity(s: Scenario) -> Self {
        Self {
            input_perm_a: (0..s.inputs_a()).collect(),
            output_perms_a: vec![(0..s.outputs_a()).collect(); s.inputs_a()],
            input_perm_b: (0..s.inputs_b()).collect(),
            output_perms_b: vec![(0..s.outputs_b()).collect(); s.inputs_b()],
        }
    }

    /// Swaps two of Alice's outputs for one of her inputs only.
    pub fn alice_output_swap(s: Scenario, input: usize, o1: usize, o2: usize) -> Self {
        let mut r = Self::identity(s);
        r.output_perms_a[input].swap(o1, o2);
        r
    }

    pub fn is_identity(&self) -> bool {
        let id_in = |p: &[usize]| p.iter().enumerate().all(|(i, &v)| i == v);
        id_in(&self.input_perm_a)
            && id_in(&self.input_perm_b)
            && self.output_perms_a.iter().all(|p| id_in(p))
            && self.output_perms_b.iter().all(|p| id_in(p))
    }

    pub fn compatible_with(&self, s: Scenario) -> bool {
        self.input_perm_a.len() == s.inputs_a()
            && self.input_perm_b.len() == s.inputs_b()
            && self.output_perms_a.len() == s.inputs_a()
            && self.output_perms_b.len() == s.inputs_b()
            && self.output_perms_a.iter().all(|p| p.len() == s.outputs_a())
            && self.output_perms_b.iter().all(|p| p.len() == s.outputs_b())
    }

    /// Index map on probability tables: entry at `(a,b,x,y)` moves to
    /// `(sA(a), sB(b), rA[a](x), rB[b](y))`.
    pub fn permute_table<T: Clone>(&self, s: Scenario, table: &[T]) -> Vec<T> {
        let mut out = table.to_vec();
        for (a, b, x, y) in s.iter_abxy() {
            let target = s.index(
                self.input_perm_a[a],
                self.input_perm_b[b],
                self.output_perms_a[a][x],
                self.output_perms_b[b][y],
            );
            out[target] = table[s.index(a, b, x, y)].clone();
        }
        out
    }

    pub fn apply(&self, d: &Distribution) -> Result<Distribution, SymError> {
        let s = d.scenario();
        if !self.compatible_with(s) {
            return Err(SymError::IncompatibleScenario);
        }
        let probs = self.permute_table(s, d.entries());
        Ok(Distribution::new(s, probs)?)
    }

    /// `self` after `first`: applying the result equals applying `first`
    /// then `self`.
    pub fn compose(&self, first: &Self) -> Self {
        let comp_inputs = |outer: &[usize], inner: &[usize]| -> Vec<usize> {
            inner.iter().map(|&m| outer[m]).collect()
        };
        let comp_outputs = |outer: &[Vec<usize>],
                            inner: &[Vec<usize>],
                            inner_inputs: &[usize]|
         -> Vec<Vec<usize>> {
            (0..inner.len())
                .map(|a| {
                    let mid = inner_inputs[a];
                    inner[a].iter().map(|&x| outer[mid][x]).collect()
                })
                .collect()
        };
        Self {
            input_perm_a: comp_inputs(&self.input_perm_a, &first.input_perm_a),
            output_perms_a: comp_outputs(
                &self.output_perms_a,
                &first.output_perms_a,
                &first.input_perm_a,
            ),
            input_perm_b: comp_inputs(&self.input_perm_b, &first.input_perm_b),
            output_perms_b: comp_outputs(
                &self.output_perms_b,
                &first.output_perms_b,
                &first.input_perm_b,
            ),
        }
    }

    pub fn inverse(&self) -> Self {
        let inv_outputs = |inputs: &[usize], outputs: &[Vec<usize>]| -> Vec<Vec<usize>> {
            let input_inv = invert(inputs);
            (0..outputs.len())
                .map(|a_new| invert(&outputs[input_inv[a_new]]))
                .collect()
        };
        Self {
            input_perm_a: invert(&self.input_perm_a),
            output_perms_a: inv_outputs(&self.input_perm_a, &self.output_perms_a),
            input_perm_b: invert(&self.input_perm_b),
            output_perms_b: inv_outputs(&self.input_perm_b, &self.output_perms_b),
        }
    }

    /// All local relabellings of the scenario, in a fixed deterministic
    /// order. Count: (iA! * (oA!)^iA) * (iB! * (oB!)^iB).
    pub fn enumerate(s: Scenario) -> Vec<Self> {
        let in_a = all_permutations(s.inputs_a());
        let out_a = all_permutations(s.outputs_a());
        let in_b = all_permutations(s.inputs_b());
        let out_b = all_permutations(s.outputs_b());
        let out_tuples = |n_inputs: usize, outs: &[Vec<usize>]| -> Vec<Vec<Vec<usize>>> {
            let mut tuples: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
            for _ in 0..n_inputs {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        outs.iter().map(move |p| {
                            let mut t = t.clone();
                            t.push(p.clone());
                            t
                        })
                    })
                    .collect();
            }
            tuples
        };
        let tuples_a = out_tuples(s.inputs_a(), &out_a);
        let tuples_b = out_tuples(s.inputs_b(), &out_b);
        let mut ops = Vec::new();
        for ia in &in_a {
            for oa in &tuples_a {
                for ib in &in_b {
                    for ob in &tuples_b {
                        ops.push(Self {
                            input_perm_a: ia.clone(),
                            output_perms_a: oa.clone(),
                            input_perm_b: ib.clone(),
                            output_perms_b: ob.clone(),
                        });
                    }
                }
            }
        }
        ops
    }
}

/// Transposes the two parties' roles.
pub fn exchange_parties(d: &Distribution) -> Result<Distribution, SymError> {
    let s = d.scenario();
    if !s.is_symmetric() {
        return Err(SymError::AsymmetricScenario);
    }
    let mut probs = vec![rat_zero(); s.dimension()];
    for (a, b, x, y) in s.iter_abxy() {
        probs[s.index(a, b, x, y)] = d.p(b, a, y, x).clone();
    }
    Ok(Distribution::new(s, probs)?)
}

/// A full symmetry operation: optional party exchange followed by a local
/// relabelling.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetryOp {
    pub exchange: bool,
    pub relabel: LocalRelabelling,
}

impl SymmetryOp {
    pub fn apply(&self, d: &Distribution) -> Result<Distribution, SymError> {
        let d = if self.exchange {
            exchange_parties(d)?
        } else {
            d.clone()
        };
        self.relabel.apply(&d)
    }

    /// Same permutation applied to any correlate table (for functional
    /// coefficients).
    pub fn permute_table<T: Clone>(&self, s: Scenario, table: &[T]) -> Vec<T> {
        let table = if self.exchange {
            let mut out = table.to_vec();
            for (a, b, x, y) in s.iter_abxy() {
                out[s.index(a, b, x, y)] = table[s.index(b, a, y, x)].clone();
            }
            out
        } else {
            table.to_vec()
        };
        self.relabel.permute_table(s, &table)
    }

    /// Local relabellings plus their party-exchange composites. Count:
    /// 2 * (iA! (oA!)^iA)^2 for symmetric scenarios.
    pub fn enumerate(s: Scenario) -> Vec<Self> {
        let relabellings = LocalRelabelling::enumerate(s);
        let mut ops: Vec<SymmetryOp> = relabellings
            .iter()
            .map(|r| SymmetryOp {
                exchange: false,
                relabel: r.clone(),
            })
            .collect();
        if s.is_symmetric() {
            ops.extend(relabellings.into_iter().map(|r| SymmetryOp {
                exchange: true,
                relabel: r,
            }));
        }
        ops
    }
}

/// A per-(party, input) merge of outcomes, kept in the original outcome
/// frame: merged-away outcomes simply carry probability zero afterwards.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoarseGraining {
    pub maps_a: Vec<Vec<usize>>,
    pub maps_b: Vec<Vec<usize>>,
}

impl CoarseGraining {
    pub fn identity(s: Scenario) -> Self {
        Self {
            maps_a: vec![(0..s.outputs_a()).collect(); s.inputs_a()],
            maps_b: vec![(0..s.outputs_b()).collect(); s.inputs_b()],
        }
    }

    pub fn compatible_with(&self, s: Scenario) -> bool {
        self.maps_a.len() == s.inputs_a()
            && self.maps_b.len() == s.inputs_b()
            && self
                .maps_a
                .iter()
                .all(|m| m.len() == s.outputs_a() && m.iter().all(|&v| v < s.outputs_a()))
            && self
                .maps_b
                .iter()
                .all(|m| m.len() == s.outputs_b() && m.iter().all(|&v| v < s.outputs_b()))
    }

    pub fn apply(&self, d: &Distribution) -> Result<Distribution, SymError> {
        let s = d.scenario();
        if !self.compatible_with(s) {
            return Err(SymError::IncompatibleScenario);
        }
        let mut probs = vec![rat_zero(); s.dimension()];
        for (a, b, x, y) in s.iter_abxy() {
            let target = s.index(a, b, self.maps_a[a][x], self.maps_b[b][y]);
            probs[target] += d.p(a, b, x, y);
        }
        Ok(Distribution::new(s, probs)?)
    }

    /// Number of (party, input) slots with a non-identity map.
    pub fn nontrivial_slots(&self) -> usize {
        let nontrivial = |m: &Vec<usize>| m.iter().enumerate().any(|(i, &v)| i != v);
        self.maps_a.iter().filter(|m| nontrivial(m)).count()
            + self.maps_b.iter().filter(|m| nontrivial(m)).count()
    }
}

/// The three two-to-one merges of a three-element outcome set; the merged
/// pair lands on its smaller member.
fn two_to_one_merges() -> Vec<Vec<usize>> {
    vec![vec![0, 0, 2], vec![0, 1, 0], vec![0, 1, 1]]
}

/// All coarse-grainings of a (2,2,3,3)-type scenario that merge exactly two
/// outcomes into one on at least one (party, input) slot and act as the
/// identity elsewhere. For (2,2,3,3) there are 255, partitioned
/// 81/108/54/12 by the number of merged slots (4/3/2/1).
pub fn enumerate_two_to_one(s: Scenario) -> Vec<CoarseGraining> {
    assert_eq!(s.outputs_a(), 3);
    assert_eq!(s.outputs_b(), 3);
    let slots = s.inputs_a() + s.inputs_b();
    let mut per_slot: Vec<Vec<Vec<usize>>> = Vec::new();
    for _ in 0..slots {
        let mut options = vec![(0..3).collect::<Vec<usize>>()];
        options.extend(two_to_one_merges());
        per_slot.push(options);
    }
    let mut out = Vec::new();
    let mut counters = vec![0usize; slots];
    loop {
        let maps: Vec<Vec<usize>> = counters
            .iter()
            .enumerate()
            .map(|(slot, &c)| per_slot[slot][c].clone())
            .collect();
        let cg = CoarseGraining {
            maps_a: maps[..s.inputs_a()].to_vec(),
            maps_b: maps[s.inputs_a()..].to_vec(),
        };
        if cg.nontrivial_slots() > 0 {
            out.push(cg);
        }
        // odometer over the 4 options per slot
        let mut slot = 0;
        loop {
            if slot == slots {
                return out;
            }
            counters[slot] += 1;
            if counters[slot] < per_slot[slot].len() {
                break;
            }
            counters[slot] = 0;
            slot += 1;
        }
    }
}

/// A pair of deterministic response functions, one per party.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    pub outputs_a: Vec<usize>,
    pub outputs_b: Vec<usize>,
}

impl DeterministicStrategy {
    pub fn to_distribution(&self, s: Scenario) -> Distribution {
        let probs = s
            .iter_abxy()
            .map(|(a, b, x, y)| {
                if self.outputs_a[a] == x && self.outputs_b[b] == y {
                    rat_one()
                } else {
                    rat_zero()
                }
            })
            .collect();
        Distribution::new(s, probs).expect("point mass is a valid distribution")
    }
}

fn response_functions(inputs: usize, outputs: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..inputs {
        out = out
            .into_iter()
            .flat_map(|f| {
                (0..outputs).map(move |o| {
                    let mut f = f.clone();
                    f.push(o);
                    f
                })
            })
            .collect();
    }
    out
}

/// All product point-mass distributions, canonically ordered (Alice's
/// response function varies slowest). Count: oA^iA * oB^iB.
pub fn deterministic_points(s: Scenario) -> Vec<Distribution> {
    let fa = response_functions(s.inputs_a(), s.outputs_a());
    let fb = response_functions(s.inputs_b(), s.outputs_b());
    let mut out = Vec::with_capacity(fa.len() * fb.len());
    for a in &fa {
        for b in &fb {
            out.push(
                DeterministicStrategy {
                    outputs_a: a.clone(),
                    outputs_b: b.clone(),
                }
                .to_distribution(s),
            );
        }
    }
    out
}

/// Deduplicated orbit of `d` under all local relabellings, in order of first
/// appearance. The identity relabelling comes first in the enumeration, so
/// `d` itself is always element 0.
pub fn relabelling_orbit(d: &Distribution) -> Vec<Distribution> {
    relabelling_orbit_with_ops(d)
        .into_iter()
        .map(|(dist, _)| dist)
        .collect()
}

/// As [`relabelling_orbit`], also reporting a relabelling that produces each
/// member.
pub fn relabelling_orbit_with_ops(d: &Distribution) -> Vec<(Distribution, LocalRelabelling)> {
    let s = d.scenario();
    let mut seen: HashSet<Vec<Rat>> = HashSet::new();
    let mut out = Vec::new();
    for r in LocalRelabelling::enumerate(s) {
        let rd = r.apply(d).expect("enumerated op is compatible");
        if seen.insert(rd.entries().to_vec()) {
            out.push((rd, r));
        }
    }
    out
}

/// The generating set of the mixture polytope of `d` under LOSR+exchange
/// post-processing: relabellings of `d` (deduplicated), its two-to-one
/// coarse-grainings (one per map, 255 of them), and the deterministic
/// points.
pub struct LosrGenerators {
    pub relabelled: Vec<Distribution>,
    pub coarse_grained: Vec<Distribution>,
    pub locals: Vec<Distribution>,
}

impl LosrGenerators {
    pub fn total(&self) -> usize {
        self.relabelled.len() + self.coarse_grained.len() + self.locals.len()
    }
}

pub fn losr_generators(d: &Distribution) -> LosrGenerators {
    let s = d.scenario();
    LosrGenerators {
        relabelled: relabelling_orbit(d),
        coarse_grained: enumerate_two_to_one(s)
            .iter()
            .map(|g| g.apply(d).expect("enumerated map is compatible"))
            .collect(),
        locals: deterministic_points(s),
    }
}

/// Searches the local relabelling group for an op sending `from` to `to`.
pub fn find_relabelling_between(
    from: &Distribution,
    to: &Distribution,
) -> Option<LocalRelabelling> {
    LocalRelabelling::enumerate(from.scenario())
        .into_iter()
        .find(|r| r.apply(from).ok().as_ref() == Some(to))
}
