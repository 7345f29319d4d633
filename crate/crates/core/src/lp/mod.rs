//! Exact linear programming over correlation polytopes: local weight and
//! membership certificates, joint-violation feasibility, vertex
//! verification, union convexity, and orbit vertex counting.

pub mod simplex;

use crate::bell::{facet_orbits_2233, BellFunctional, FamilyTag};
use crate::dist::{mix2, Distribution};
use crate::rat::{format_rat, rat, rat_int, rat_one, rat_zero, Rat};
use crate::scenario::Scenario;
use crate::sym::{deterministic_points, SymmetryOp};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use simplex::{solve, Constraint, Problem, Rel, Solution};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("local-weight and membership programs require a non-signalling input")]
    SignallingInput,
    #[error("operation needs an H-representation model")]
    NotHRepresentation,
    #[error("operation needs a V-representation model")]
    NotVRepresentation,
    #[error("functional index out of range")]
    IndexOutOfRange,
    #[error("internal LP invariant broken: {0}")]
    Internal(&'static str),
}

/// Either a vertex list or a facet list (positivity implied for H-reps).
#[derive(Debug, Clone)]
pub enum PolytopeModel {
    VRep { generators: Vec<Distribution> },
    HRep { functionals: Vec<BellFunctional> },
}

/// Normalization and no-signalling equality rows for the flattened
/// probability vector, as (coefficients, rhs) pairs.
pub fn ns_equality_system(s: Scenario) -> Vec<(Vec<Rat>, Rat)> {
    let dim = s.dimension();
    let mut rows = Vec::new();
    for a in 0..s.inputs_a() {
        for b in 0..s.inputs_b() {
            let mut row = vec![rat_zero(); dim];
            for x in 0..s.outputs_a() {
                for y in 0..s.outputs_b() {
                    row[s.index(a, b, x, y)] = rat_one();
                }
            }
            rows.push((row, rat_one()));
        }
    }
    for a in 0..s.inputs_a() {
        for x in 0..s.outputs_a() {
            for b in 1..s.inputs_b() {
                let mut row = vec![rat_zero(); dim];
                for y in 0..s.outputs_b() {
                    row[s.index(a, 0, x, y)] += rat_one();
                    row[s.index(a, b, x, y)] -= rat_one();
                }
                rows.push((row, rat_zero()));
            }
        }
    }
    for b in 0..s.inputs_b() {
        for y in 0..s.outputs_b() {
            for a in 1..s.inputs_a() {
                let mut row = vec![rat_zero(); dim];
                for x in 0..s.outputs_a() {
                    row[s.index(0, b, x, y)] += rat_one();
                    row[s.index(a, b, x, y)] -= rat_one();
                }
                rows.push((row, rat_zero()));
            }
        }
    }
    rows
}

/// Exact row rank over the rationals.
pub fn rational_rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let width = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rat_one() / rows[rank][col].clone();
        for v in rows[rank].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(pivot_row.iter()) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Maximal classical fraction of a no-signalling distribution, with an
/// exactly verifying decomposition; a strictly separating functional is
/// attached whenever the weight is below 1.
#[derive(Debug, Clone)]
pub struct LocalWeightCertificate {
    pub alpha: Rat,
    /// Nonzero weights over the canonical deterministic-point list.
    pub weights: Vec<(usize, Rat)>,
    /// Functional scoring >= 1 on every deterministic point but < 1 on `d`.
    pub separating: Option<BellFunctional>,
}

impl LocalWeightCertificate {
    /// Substitution check of both halves of the certificate.
    pub fn verify(&self, d: &Distribution) -> bool {
        let points = deterministic_points(d.scenario());
        let dim = d.scenario().dimension();
        let mut classical_part = vec![rat_zero(); dim];
        let mut total = rat_zero();
        for (k, w) in &self.weights {
            if w.is_negative() || *k >= points.len() {
                return false;
            }
            total += w;
            for (acc, v) in classical_part.iter_mut().zip(points[*k].entries()) {
                *acc += w * v;
            }
        }
        if total != self.alpha {
            return false;
        }
        if classical_part.iter().zip(d.entries()).any(|(c, p)| c > p) {
            return false;
        }
        match &self.separating {
            None => self.alpha == rat_one(),
            Some(f) => {
                // Stored in <=-form of "score >= 1"; unfold the negation.
                let score: Rat = f
                    .coeffs
                    .iter()
                    .zip(d.entries())
                    .map(|(c, p)| -(c * p))
                    .sum();
                if score >= rat_one() {
                    return false;
                }
                points.iter().all(|pt| {
                    let s: Rat = f
                        .coeffs
                        .iter()
                        .zip(pt.entries())
                        .map(|(c, p)| -(c * p))
                        .sum();
                    s >= rat_one()
                })
            }
        }
    }
}

/// Local weight over an explicit deterministic-point list (callers doing
/// sweeps cache the list).
pub fn local_weight_with_points(
    d: &Distribution,
    points: &[Distribution],
) -> Result<LocalWeightCertificate, LpError> {
    if !d.is_no_signalling() {
        return Err(LpError::SignallingInput);
    }
    let dim = d.scenario().dimension();
    let n = points.len();
    let constraints: Vec<Constraint> = (0..dim)
        .map(|i| Constraint {
            coeffs: points.iter().map(|p| p.entries()[i].clone()).collect(),
            rel: Rel::Le,
            rhs: d.entries()[i].clone(),
        })
        .collect();
    let problem = Problem {
        num_vars: n,
        objective: vec![rat_one(); n],
        constraints,
    };
    let Solution::Optimal {
        objective,
        x,
        duals,
    } = solve(&problem)
    else {
        return Err(LpError::Internal(
            "local weight LP is always feasible and bounded",
        ));
    };
    if !simplex::verify_duals(&problem, &x, &objective, &duals) {
        return Err(LpError::Internal(
            "local weight optimality certificate failed",
        ));
    }
    let weights: Vec<(usize, Rat)> = x
        .into_iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .collect();
    let separating = if objective < rat_one() {
        // Dual of the covering program: y >= 0, y.D_k >= 1 for every
        // deterministic point, y.d = alpha < 1.
        let f = BellFunctional::from_lower_bound(d.scenario(), duals, rat_one(), FamilyTag::Custom);
        Some(f)
    } else {
        None
    };
    let cert = LocalWeightCertificate {
        alpha: objective,
        weights,
        separating,
    };
    if !cert.verify(d) {
        return Err(LpError::Internal(
            "local weight certificate failed verification",
        ));
    }
    Ok(cert)
}

pub fn local_weight(d: &Distribution) -> Result<LocalWeightCertificate, LpError> {
    local_weight_with_points(d, &deterministic_points(d.scenario()))
}

/// True iff the local weight is exactly 1; the certificate is either the
/// full classical decomposition or a separating functional.
pub fn is_local(d: &Distribution) -> Result<(bool, LocalWeightCertificate), LpError> {
    let cert = local_weight(d)?;
    let local = cert.alpha == rat_one();
    Ok((local, cert))
}

/// Exact membership of `point` in the convex hull of `generators`,
/// returning hull weights on success.
///
/// Formulated as the covering program max sum(w) s.t. sum_k w_k g_k <= point
/// entrywise: the optimum is 1 exactly when the point lies in the hull
/// (block normalization forces the slack to vanish), and the slack basis
/// makes phase 1 unnecessary.
pub fn membership(point: &Distribution, generators: &[Distribution]) -> Option<Vec<Rat>> {
    if generators.is_empty() {
        return None;
    }
    let n = generators.len();
    let dim = point.scenario().dimension();
    let constraints: Vec<Constraint> = (0..dim)
        .map(|i| Constraint {
            coeffs: generators.iter().map(|g| g.entries()[i].clone()).collect(),
            rel: Rel::Le,
            rhs: point.entries()[i].clone(),
        })
        .collect();
    let problem = Problem {
        num_vars: n,
        objective: vec![rat_one(); n],
        constraints,
    };
    let Solution::Optimal { objective, x, .. } = solve(&problem) else {
        unreachable!("covering program is feasible (w = 0) and bounded");
    };
    if objective != rat_one() {
        return None;
    }
    // Substitution check: the weights reconstruct the point exactly.
    let mut recon = vec![rat_zero(); dim];
    for (w, g) in x.iter().zip(generators.iter()) {
        if w.is_zero() {
            continue;
        }
        for (acc, v) in recon.iter_mut().zip(g.entries()) {
            *acc += w * v;
        }
    }
    assert!(
        recon.iter().zip(point.entries()).all(|(a, b)| a == b),
        "membership weights failed substitution"
    );
    Some(x)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JointViolationStatus {
    /// Maximal margin by which all listed functionals can simultaneously
    /// exceed their bounds inside the constraint polytope.
    Optimal(Rat),
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct JointViolationOutcome {
    pub status: JointViolationStatus,
    /// Maximizing distribution when optimal.
    pub witness: Option<Distribution>,
    /// Number of lazily added CHSH cuts.
    pub cuts_used: usize,
}

/// Core engine: maximize eps subject to `value(f) >= bound(f) + eps` for
/// each target functional, over no-signalling distributions, optionally
/// inside all 648 CHSH-type facets (added lazily and re-verified against
/// the full facet set at the optimum).
pub fn violation_lp(targets: &[&BellFunctional], include_chsh: bool) -> JointViolationOutcome {
    let s = Scenario::two_two_three_three();
    let dim = s.dimension();
    let eps_col = dim;
    let mut constraints: Vec<Constraint> = Vec::new();
    for (row, rhs) in ns_equality_system(s) {
        let mut coeffs = row;
        coeffs.push(rat_zero());
        constraints.push(Constraint {
            coeffs,
            rel: Rel::Eq,
            rhs,
        });
    }
    for f in targets {
        let mut coeffs = f.coeffs.clone();
        coeffs.push(rat_int(-1));
        constraints.push(Constraint {
            coeffs,
            rel: Rel::Ge,
            rhs: f.bound.clone(),
        });
    }
    let mut objective = vec![rat_zero(); dim + 1];
    objective[eps_col] = rat_one();

    let chsh: &[BellFunctional] = if include_chsh {
        &facet_orbits_2233().0
    } else {
        &[]
    };
    let mut active: HashSet<usize> = HashSet::new();
    let mut cuts_used = 0usize;
    loop {
        let problem = Problem {
            num_vars: dim + 1,
            objective: objective.clone(),
            constraints: constraints.clone(),
        };
        match solve(&problem) {
            Solution::Infeasible { farkas } => {
                debug_assert!(simplex::verify_farkas(&problem, &farkas));
                return JointViolationOutcome {
                    status: JointViolationStatus::Infeasible,
                    witness: None,
                    cuts_used,
                };
            }
            Solution::Unbounded => unreachable!("normalization keeps the program bounded"),
            Solution::Optimal {
                objective: opt,
                x,
                duals,
            } => {
                assert!(
                    simplex::verify_duals(&problem, &x, &opt, &duals),
                    "relaxation optimality certificate failed"
                );
                let witness = Distribution::new(s, x[..dim].to_vec())
                    .expect("LP point satisfies positivity and normalization");
                debug_assert!(witness.is_no_signalling());
                let mut violated: Vec<(usize, Rat)> = Vec::new();
                for (k, f) in chsh.iter().enumerate() {
                    if active.contains(&k) {
                        continue;
                    }
                    let v = f.evaluate(&witness).expect("same scenario");
                    if v > f.bound {
                        violated.push((k, v - &f.bound));
                    }
                }
                if violated.is_empty() {
                    return JointViolationOutcome {
                        status: JointViolationStatus::Optimal(opt),
                        witness: Some(witness),
                        cuts_used,
                    };
                }
                violated.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
                for (k, _) in violated.into_iter().take(24) {
                    active.insert(k);
                    cuts_used += 1;
                    let mut coeffs = chsh[k].coeffs.clone();
                    coeffs.push(rat_zero());
                    constraints.push(Constraint {
                        coeffs,
                        rel: Rel::Le,
                        rhs: chsh[k].bound.clone(),
                    });
                }
            }
        }
    }
}

/// Maximal joint-violation margin of I2233 functionals `i` and `j`
/// (1-based orbit indices) inside the CHSH-satisfying polytope.
pub fn joint_violation_lp(i: usize, j: usize) -> Result<JointViolationOutcome, LpError> {
    if i == j {
        return Err(LpError::IndexOutOfRange);
    }
    let i2233 = &facet_orbits_2233().1;
    let fi = i2233.get(i - 1).ok_or(LpError::IndexOutOfRange)?;
    let fj = i2233.get(j - 1).ok_or(LpError::IndexOutOfRange)?;
    Ok(violation_lp(&[fi, fj], true))
}

/// Sweep of `joint_violation_lp(1, j)` for all j in 2..=432, in parallel.
pub fn joint_violation_sweep() -> Vec<(usize, JointViolationOutcome)> {
    let mut out: Vec<(usize, JointViolationOutcome)> = (2..=432usize)
        .into_par_iter()
        .map(|j| (j, joint_violation_lp(1, j).expect("indices in range")))
        .collect();
    out.sort_by_key(|(j, _)| *j);
    out
}

#[derive(Debug, Clone)]
pub struct VertexReport {
    pub feasible: bool,
    pub extremal: bool,
    pub tight_constraints: Vec<usize>,
    pub tight_positivity: usize,
    pub rank: usize,
}

/// Checks feasibility of `d` against an H-representation model and decides
/// extremality by the rank of the tight constraint set inside the
/// no-signalling subspace.
pub fn verify_vertex(d: &Distribution, model: &PolytopeModel) -> Result<VertexReport, LpError> {
    let PolytopeModel::HRep { functionals } = model else {
        return Err(LpError::NotHRepresentation);
    };
    let s = d.scenario();
    let mut feasible = true;
    let mut tight_constraints = Vec::new();
    let mut rows: Vec<Vec<Rat>> = ns_equality_system(s).into_iter().map(|(r, _)| r).collect();
    for (k, f) in functionals.iter().enumerate() {
        let v = f.evaluate(d).map_err(|_| LpError::NotHRepresentation)?;
        if v > f.bound {
            feasible = false;
        } else if v == f.bound {
            tight_constraints.push(k);
            rows.push(f.coeffs.clone());
        }
    }
    let mut tight_positivity = 0;
    for (i, p) in d.entries().iter().enumerate() {
        if p.is_zero() {
            tight_positivity += 1;
            let mut row = vec![rat_zero(); s.dimension()];
            row[i] = rat_one();
            rows.push(row);
        }
    }
    let rank = rational_rank(rows);
    Ok(VertexReport {
        feasible,
        extremal: rank == s.dimension(),
        tight_constraints,
        tight_positivity,
        rank,
    })
}

#[derive(Debug, Clone)]
pub struct UnionWitness {
    pub poly_a: usize,
    pub vertex_a: usize,
    pub poly_b: usize,
    pub vertex_b: usize,
    /// Segment point found outside both polytopes (midpoint of the failing
    /// sub-segment), unless the subdivision budget ran out.
    pub undecided: bool,
}

#[derive(Debug, Clone)]
pub struct UnionConvexity {
    pub convex: bool,
    pub witness: Option<UnionWitness>,
    pub segments_checked: usize,
}

fn segment_in_union(
    va: &Distribution,
    vb: &Distribution,
    gens_a: &[Distribution],
    gens_b: &[Distribution],
    shared: &[Distribution],
    depth: usize,
) -> Result<bool, bool> {
    // Invariant: va is in polytope A, vb in polytope B. Ok(true) means the
    // segment is certified inside the union; Err(undecided) distinguishes a
    // budget failure from a found escape point.
    let mid = mix2(&rat(1, 2), va, vb).expect("same scenario");
    // A midpoint in the hull of the shared generators is in both polytopes.
    if !shared.is_empty() && membership(&mid, shared).is_some() {
        return Ok(true);
    }
    let in_a = membership(&mid, gens_a).is_some();
    let in_b = membership(&mid, gens_b).is_some();
    match (in_a, in_b) {
        (true, true) => Ok(true),
        (false, false) => Err(false),
        (true, false) => {
            if depth == 0 {
                Err(true)
            } else {
                segment_in_union(&mid, vb, gens_a, gens_b, shared, depth - 1)
            }
        }
        (false, true) => {
            if depth == 0 {
                Err(true)
            } else {
                segment_in_union(va, &mid, gens_a, gens_b, shared, depth - 1)
            }
        }
    }
}

/// Pairwise line-segment test for convexity of a union of V-represented
/// polytopes. Segments with an endpoint shared by both polytopes are
/// contained trivially; the rest are decided by midpoint membership with
/// bounded subdivision.
pub fn union_is_convex(
    models: &[PolytopeModel],
    max_depth: usize,
) -> Result<UnionConvexity, LpError> {
    let gens: Vec<&Vec<Distribution>> = models
        .iter()
        .map(|m| match m {
            PolytopeModel::VRep { generators } => Ok(generators),
            PolytopeModel::HRep { .. } => Err(LpError::NotVRepresentation),
        })
        .collect::<Result<_, _>>()?;
    let mut pairs = Vec::new();
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            pairs.push((i, j));
        }
    }
    let vertex_sets: Vec<HashSet<&[Rat]>> = gens
        .iter()
        .map(|g| g.iter().map(|d| d.entries()).collect())
        .collect();
    let results: Vec<(usize, Option<UnionWitness>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (ga, gb) = (gens[i], gens[j]);
            let shared: Vec<Distribution> = ga
                .iter()
                .filter(|v| vertex_sets[j].contains(v.entries()))
                .cloned()
                .collect();
            let mut checked = 0usize;
            for (ai, va) in ga.iter().enumerate() {
                if vertex_sets[j].contains(va.entries()) {
                    continue;
                }
                for (bi, vb) in gb.iter().enumerate() {
                    if vertex_sets[i].contains(vb.entries()) {
                        continue;
                    }
                    checked += 1;
                    match segment_in_union(va, vb, ga, gb, &shared, max_depth) {
                        Ok(true) => {}
                        Ok(false) => unreachable!(),
                        Err(undecided) => {
                            return (
                                checked,
                                Some(UnionWitness {
                                    poly_a: i,
                                    vertex_a: ai,
                                    poly_b: j,
                                    vertex_b: bi,
                                    undecided,
                                }),
                            );
                        }
                    }
                }
            }
            (checked, None)
        })
        .collect();
    let mut segments_checked = 0;
    let mut witness = None;
    for (checked, w) in results {
        segments_checked += checked;
        if witness.is_none() {
            witness = w;
        }
    }
    Ok(UnionConvexity {
        convex: witness.is_none(),
        witness,
        segments_checked,
    })
}

/// Size of the deduplicated orbit of the seed set under the symmetry group,
/// together with the orbit itself (deterministic order: seeds in input
/// order, each expanded in group enumeration order).
pub fn orbit_vertex_count(
    seeds: &[Distribution],
    ops: &[SymmetryOp],
) -> (usize, Vec<Distribution>) {
    let per_seed: Vec<Vec<Distribution>> = seeds
        .par_iter()
        .map(|seed| {
            ops.iter()
                .map(|op| op.apply(seed).expect("compatible op"))
                .collect()
        })
        .collect();
    let mut seen: HashSet<Vec<Rat>> = HashSet::new();
    let mut orbit = Vec::new();
    for images in per_seed {
        for d in images {
            if seen.insert(d.entries().to_vec()) {
                orbit.push(d);
            }
        }
    }
    (orbit.len(), orbit)
}

/// JSON export of a local-weight certificate.
pub fn local_weight_json(cert: &LocalWeightCertificate) -> serde_json::Value {
    serde_json::json!({
        "status": "Optimal",
        "objective": format_rat(&cert.alpha),
        "weights": cert
            .weights
            .iter()
            .map(|(k, w)| serde_json::json!({"point": k, "weight": format_rat(w)}))
            .collect::<Vec<_>>(),
        "separating": cert.separating.as_ref().map(|f| f.to_json()),
    })
}

pub fn joint_violation_json(j: usize, out: &JointViolationOutcome) -> serde_json::Value {
    match &out.status {
        JointViolationStatus::Optimal(v) => serde_json::json!({
            "pair": [1, j],
            "status": "Optimal",
            "objective": format_rat(v),
            "cuts": out.cuts_used,
        }),
        JointViolationStatus::Infeasible => serde_json::json!({
            "pair": [1, j],
            "status": "Infeasible",
            "cuts": out.cuts_used,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{chsh_orbit, i2233_orbit, i2233_representative};
    use crate::catalog;
    use crate::rat::rat;
    use crate::sym::LocalRelabelling;

    #[test]
    fn deterministic_points_have_weight_one() {
        let points = deterministic_points(Scenario::two_two_three_three());
        for d in points.iter().step_by(20) {
            let cert = local_weight(d).unwrap();
            assert_eq!(cert.alpha, rat_one());
        }
    }

    #[test]
    fn iso_local_weight_formula() {
        let cases = [
            (rat(0, 1), rat_one()),
            (rat(1, 4), rat_one()),
            (rat(1, 2), rat_one()),
            (rat(4, 7), rat(6, 7)),
            (rat(2, 3), rat(2, 3)),
            (rat(1, 1), rat_zero()),
        ];
        for (eps, expected) in cases {
            let d = catalog::p_iso(&eps).unwrap();
            let cert = local_weight(&d).unwrap();
            assert_eq!(cert.alpha, expected, "eps = {eps}");
            assert!(cert.verify(&d));
        }
    }

    #[test]
    fn coarse_grained_local_weight_formula() {
        let cases = [
            (rat(0, 1), rat_one()),
            (rat(1, 2), rat_one()),
            (rat(4, 7), rat_one()),
            (rat(2, 3), rat(23, 27)),
            (rat(1, 1), rat(1, 3)),
        ];
        for (eps, expected) in cases {
            let d = catalog::p_cg(&eps).unwrap();
            let cert = local_weight(&d).unwrap();
            assert_eq!(cert.alpha, expected, "eps = {eps}");
        }
    }

    #[test]
    fn nonlocal_box_is_separated() {
        let (local, cert) = is_local(&catalog::p_nl()).unwrap();
        assert!(!local);
        assert!(cert.separating.is_some());
        assert!(cert.verify(&catalog::p_nl()));
        let (local_c, cert_c) = is_local(&catalog::p_c_2233()).unwrap();
        assert!(local_c);
        assert_eq!(cert_c.alpha, rat_one());
    }

    #[test]
    fn midpoint_mixtures_at_and_past_threshold() {
        let s = Scenario::two_two_three_three();
        let swap = LocalRelabelling::alice_output_swap(s, 1, 1, 2);
        for (eps, expect_local) in [(rat(4, 7), true), (rat(3, 5), false)] {
            let iso = catalog::p_iso(&eps).unwrap();
            let partner = swap.apply(&iso).unwrap();
            let mid = mix2(&rat(1, 2), &iso, &partner).unwrap();
            let (local, _) = is_local(&mid).unwrap();
            assert_eq!(local, expect_local, "eps = {eps}");
        }
    }

    #[test]
    fn local_weight_mix_monotonicity_and_relabelling_invariance() {
        let d = catalog::p_iso(&rat(3, 4)).unwrap();
        let base = local_weight(&d).unwrap().alpha;
        let w = rat(2, 5);
        let mixed = mix2(&w, &d, &catalog::p_c_2233()).unwrap();
        let mixed_weight = local_weight(&mixed).unwrap().alpha;
        assert!(mixed_weight >= &w * &base + (rat_one() - &w));
        let r = LocalRelabelling::alice_output_swap(d.scenario(), 0, 0, 2);
        let rd = r.apply(&d).unwrap();
        assert_eq!(local_weight(&rd).unwrap().alpha, base);
    }

    #[test]
    fn membership_basics() {
        let gens = vec![
            catalog::seed_vertex(47).unwrap(),
            catalog::seed_vertex(33).unwrap(),
            catalog::seed_vertex(18).unwrap(),
        ];
        let weights = membership(&catalog::p_c_2233(), &gens).unwrap();
        assert_eq!(weights, vec![rat(1, 3); 3]);
        assert!(membership(&catalog::p_nl(), &gens).is_none());
    }

    #[test]
    fn joint_violation_pair_examples() {
        // A first handful of the 431 sweep pairs.
        for j in [2, 3, 150, 432] {
            let out = joint_violation_lp(1, j).unwrap();
            match out.status {
                JointViolationStatus::Optimal(v) => assert_eq!(v, rat_zero(), "j = {j}"),
                JointViolationStatus::Infeasible => {}
            }
        }
    }

    #[test]
    fn single_violation_has_positive_margin() {
        let i2233 = i2233_orbit();
        let out = violation_lp(&[&i2233[0]], true);
        match out.status {
            JointViolationStatus::Optimal(v) => assert!(v.is_positive()),
            JointViolationStatus::Infeasible => panic!("single violation must be feasible"),
        }
    }

    #[test]
    fn dropping_chsh_allows_joint_violation() {
        // p_nl violates the representative and several relabelled copies;
        // without the CHSH facets the pair margin is strictly positive.
        let report = crate::bell::violated_set(&catalog::p_nl()).unwrap();
        let second = report.i2233[1].0;
        let i2233 = i2233_orbit();
        let out = violation_lp(&[&i2233[0], &i2233[second - 1]], false);
        match out.status {
            JointViolationStatus::Optimal(v) => assert!(v >= rat_one()),
            JointViolationStatus::Infeasible => panic!("feasible without CHSH cuts"),
        }
    }

    #[test]
    fn vertex_verification_on_seeds_and_interior_points() {
        let mut functionals = chsh_orbit(Scenario::two_two_three_three()).unwrap();
        functionals.push(BellFunctional::from_lower_bound(
            Scenario::two_two_three_three(),
            i2233_representative().coeffs,
            rat_int(2),
            FamilyTag::I2233,
        ));
        let model = PolytopeModel::HRep { functionals };
        for idx in [1, 8, 17, 18, 47] {
            let v = catalog::seed_vertex(idx).unwrap();
            let report = verify_vertex(&v, &model).unwrap();
            assert!(report.feasible, "seed {idx}");
            assert!(report.extremal, "seed {idx} rank {}", report.rank);
        }
        let iso = catalog::p_iso(&rat(4, 7)).unwrap();
        let report = verify_vertex(&iso, &model).unwrap();
        assert!(report.feasible);
        assert!(!report.extremal);
        let pr_embedded = catalog::pr_box()
            .embed(Scenario::two_two_three_three())
            .unwrap();
        let report = verify_vertex(&pr_embedded, &model).unwrap();
        assert!(!report.feasible);
    }

    #[test]
    fn union_convexity_small_cases() {
        let locals = deterministic_points(Scenario::two_two_three_three());
        let make = |eps: &Rat, swap_input: usize| {
            let iso = catalog::p_iso(eps).unwrap();
            let r = LocalRelabelling::alice_output_swap(iso.scenario(), swap_input, 1, 2);
            let partner = r.apply(&iso).unwrap();
            let mut a = locals.clone();
            a.push(iso);
            let mut b = locals.clone();
            b.push(partner);
            (
                PolytopeModel::VRep { generators: a },
                PolytopeModel::VRep { generators: b },
            )
        };
        // Identical vertex sets: trivially convex.
        let same = PolytopeModel::VRep {
            generators: locals.clone(),
        };
        let res = union_is_convex(&[same.clone(), same], 4).unwrap();
        assert!(res.convex);
        // At the threshold the midpoint is local, so the union is convex.
        let (a, b) = make(&rat(4, 7), 1);
        let res = union_is_convex(&[a, b], 4).unwrap();
        assert!(res.convex);
        assert_eq!(res.segments_checked, 1);
        // Past the threshold the midpoint escapes both polytopes.
        let (a, b) = make(&rat(3, 5), 1);
        let res = union_is_convex(&[a, b], 4).unwrap();
        assert!(!res.convex);
        let w = res.witness.unwrap();
        assert!(!w.undecided);
    }

    #[test]
    fn orbit_counts_for_local_seeds() {
        let ops = SymmetryOp::enumerate(Scenario::two_two_three_three());
        let (count, orbit) = orbit_vertex_count(&catalog::seed_locals(), &ops);
        assert_eq!(count, 81);
        assert_eq!(orbit.len(), 81);
        let (count_nl, _) = orbit_vertex_count(
            std::slice::from_ref(&catalog::p_nl()),
            &SymmetryOp::enumerate(Scenario::two_two_three_three())
                .into_iter()
                .filter(|op| !op.exchange)
                .collect::<Vec<_>>(),
        );
        assert_eq!(count_nl, 432);
    }
}
