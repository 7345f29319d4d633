//! Nonconvex maximization of entropic functionals over mixture polytopes,
//! region scans over the isotropic mixing plane, and Tsallis-order sweeps.
//!
//! The optimizer is multistart gradient ascent in a softmax
//! reparameterization of the mixture weights: deterministic given the seed,
//! embarrassingly parallel over restarts.

use crate::bell::i2233_representative;
use crate::catalog::{self, CatalogError};
use crate::dist::Distribution;
use crate::entropy::{self, EntropyError, BC_SIGNS, VIOLATION_TOL};
use crate::rat::{rat, rat_from_f64, rat_int, rat_one, rat_zero, to_f64, Rat};
use crate::scenario::Scenario;
use crate::sym::deterministic_points;
use num_traits::{One, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("no generators supplied")]
    EmptyGenerators,
    #[error("restriction only applies for 1/2 < eps <= 4/7")]
    EpsOutOfRange,
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// Which Braunstein-Caves form to maximize. `index` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BcObjective {
    Shannon { index: usize },
    Tsallis { q: f64, index: usize },
}

impl BcObjective {
    pub fn q(&self) -> f64 {
        match self {
            BcObjective::Shannon { .. } => 1.0,
            BcObjective::Tsallis { q, .. } => *q,
        }
    }
    pub fn index(&self) -> usize {
        match self {
            BcObjective::Shannon { index } | BcObjective::Tsallis { index, .. } => *index,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchProblem {
    pub objective: BcObjective,
    pub generators: Vec<Distribution>,
    /// Number of Dirichlet(1) restarts on top of the structured starts.
    pub restarts: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl SearchProblem {
    pub fn new(objective: BcObjective, generators: Vec<Distribution>) -> Self {
        Self {
            objective,
            generators,
            restarts: 200,
            tolerance: VIOLATION_TOL,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RestartRecord {
    pub label: String,
    pub start_value: f64,
    pub value: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub best_value: f64,
    pub best_weights: Vec<f64>,
    pub best_label: String,
    pub violation_found: bool,
    pub restarts: Vec<RestartRecord>,
}

/// Atoms of the eight coexisting sets for each generator; mixtures are
/// entrywise affine in the weights.
struct AtomTables {
    per_gen: Vec<[Vec<f64>; 8]>,
    sizes: [usize; 8],
}

impl AtomTables {
    fn build(gens: &[Distribution]) -> Result<Self, SearchError> {
        let per_gen: Result<Vec<_>, EntropyError> =
            gens.iter().map(entropy::coexisting_atoms).collect();
        let per_gen = per_gen?;
        let sizes = std::array::from_fn(|k| per_gen[0][k].len());
        Ok(Self { per_gen, sizes })
    }

    fn mixture(&self, w: &[f64], out: &mut [Vec<f64>; 8]) {
        for (o, size) in out.iter_mut().zip(self.sizes.iter()) {
            o.clear();
            o.resize(*size, 0.0);
        }
        for (wk, tables) in w.iter().zip(self.per_gen.iter()) {
            if *wk == 0.0 {
                continue;
            }
            for k in 0..8 {
                for (o, t) in out[k].iter_mut().zip(tables[k].iter()) {
                    *o += wk * t;
                }
            }
        }
    }
}

fn set_entropy(p: &[f64], q: f64) -> f64 {
    if (q - 1.0).abs() < 1e-8 {
        p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.ln()).sum()
    } else {
        let s: f64 = p.iter().filter(|&&v| v > 0.0).map(|&v| v.powf(q)).sum();
        (1.0 - s) / (q - 1.0)
    }
}

fn set_entropy_grad(p: f64, q: f64) -> f64 {
    if (q - 1.0).abs() < 1e-8 {
        -(p.ln() + 1.0)
    } else {
        -q * p.powf(q - 1.0) / (q - 1.0)
    }
}

fn bc_of_atoms(atoms: &[Vec<f64>; 8], q: f64, index: usize) -> f64 {
    BC_SIGNS[index - 1]
        .iter()
        .enumerate()
        .filter(|(_, s)| **s != 0)
        .map(|(k, &s)| s as f64 * set_entropy(&atoms[k], q))
        .sum()
}

struct Objective<'a> {
    tables: &'a AtomTables,
    q: f64,
    index: usize,
}

impl Objective<'_> {
    fn value(&self, w: &[f64], scratch: &mut [Vec<f64>; 8]) -> f64 {
        self.tables.mixture(w, scratch);
        bc_of_atoms(scratch, self.q, self.index)
    }

    /// Gradient with respect to the raw weights.
    fn weight_grad(&self, w: &[f64], scratch: &mut [Vec<f64>; 8], grad: &mut [f64]) {
        self.tables.mixture(w, scratch);
        grad.iter_mut().for_each(|g| *g = 0.0);
        for (k, &s) in BC_SIGNS[self.index - 1].iter().enumerate() {
            if s == 0 {
                continue;
            }
            for (i, &p) in scratch[k].iter().enumerate() {
                if p <= 0.0 {
                    continue;
                }
                let dh = s as f64 * set_entropy_grad(p, self.q);
                for (gk, tables) in grad.iter_mut().zip(self.tables.per_gen.iter()) {
                    let t = tables[k][i];
                    if t != 0.0 {
                        *gk += dh * t;
                    }
                }
            }
        }
    }
}

fn softmax(theta: &[f64], w: &mut [f64]) {
    let m = theta.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (wi, t) in w.iter_mut().zip(theta.iter()) {
        *wi = (t - m).exp();
        sum += *wi;
    }
    for wi in w.iter_mut() {
        *wi /= sum;
    }
}

const THETA_CLAMP: f64 = 60.0;
const MAX_ITERS: usize = 400;
const CONV_TOL: f64 = 1e-10;

/// Gradient ascent from one start; returns (best value seen, best weights,
/// iterations).
fn ascend(obj: &Objective, theta0: Vec<f64>) -> (f64, Vec<f64>, usize) {
    let n = theta0.len();
    let mut theta = theta0;
    let mut w = vec![0.0; n];
    let mut scratch: [Vec<f64>; 8] = Default::default();
    let mut wgrad = vec![0.0; n];
    let mut tgrad = vec![0.0; n];

    softmax(&theta, &mut w);
    let mut value = obj.value(&w, &mut scratch);
    let mut best_value = value;
    let mut best_w = w.clone();
    let mut iters = 0;
    let mut step = 1.0f64;
    for _ in 0..MAX_ITERS {
        iters += 1;
        obj.weight_grad(&w, &mut scratch, &mut wgrad);
        let mean: f64 = w.iter().zip(wgrad.iter()).map(|(a, b)| a * b).sum();
        let mut norm = 0.0;
        for k in 0..n {
            tgrad[k] = w[k] * (wgrad[k] - mean);
            norm += tgrad[k] * tgrad[k];
        }
        if norm.sqrt() < 1e-16 {
            break;
        }
        // Backtracking line search in theta space.
        let mut improved = false;
        let mut trial_theta = vec![0.0; n];
        let mut trial_w = vec![0.0; n];
        for _ in 0..40 {
            for k in 0..n {
                trial_theta[k] = (theta[k] + step * tgrad[k]).clamp(-THETA_CLAMP, THETA_CLAMP);
            }
            softmax(&trial_theta, &mut trial_w);
            let trial = obj.value(&trial_w, &mut scratch);
            if trial > value {
                theta.copy_from_slice(&trial_theta);
                w.copy_from_slice(&trial_w);
                let gain = trial - value;
                value = trial;
                if value > best_value {
                    best_value = value;
                    best_w.copy_from_slice(&w);
                }
                improved = true;
                step *= 2.0;
                if gain < CONV_TOL {
                    return (best_value, best_w, iters);
                }
                break;
            }
            step *= 0.5;
            if step < 1e-18 {
                break;
            }
        }
        if !improved {
            break;
        }
    }
    (best_value, best_w, iters)
}

fn is_deterministic(d: &Distribution) -> bool {
    d.entries().iter().all(|p| p.is_zero() || p.is_one())
}

/// Deterministic point where both parties always give the same constant
/// output regardless of input.
fn is_synchronized_constant(d: &Distribution) -> bool {
    if !is_deterministic(d) {
        return false;
    }
    let s = d.scenario();
    let mut constant: Option<usize> = None;
    for a in 0..s.inputs_a() {
        for b in 0..s.inputs_b() {
            for x in 0..s.outputs_a() {
                for y in 0..s.outputs_b() {
                    if d.p(a, b, x, y).is_one() {
                        if x != y {
                            return false;
                        }
                        match constant {
                            None => constant = Some(x),
                            Some(c) if c != x => return false,
                            _ => {}
                        }
                    }
                }
            }
        }
    }
    constant.is_some()
}

fn theta_from_weights(w: &[f64]) -> Vec<f64> {
    w.iter()
        .map(|&v| {
            if v > 0.0 {
                v.ln().max(-THETA_CLAMP)
            } else {
                -THETA_CLAMP
            }
        })
        .collect()
}

/// Multistart local maximization of a BC form over the mixture polytope of
/// the generators. Starts: one per vertex, all edge midpoints, Dirichlet(1)
/// samples, and depolarization lines from each nonclassical generator
/// toward the classical barycenter and the synchronized-constant classical
/// mixture. Deterministic for a fixed seed.
pub fn maximize_bc(problem: &SearchProblem) -> Result<SearchOutcome, SearchError> {
    let n = problem.generators.len();
    if n == 0 {
        return Err(SearchError::EmptyGenerators);
    }
    let tables = AtomTables::build(&problem.generators)?;
    let obj = Objective {
        tables: &tables,
        q: problem.objective.q(),
        index: problem.objective.index(),
    };

    let mut starts: Vec<(String, Vec<f64>)> = Vec::new();
    for k in 0..n {
        let mut theta = vec![0.0; n];
        theta[k] = 40.0;
        starts.push((format!("vertex:{k}"), theta));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut theta = vec![0.0; n];
            theta[i] = 40.0;
            theta[j] = 40.0;
            starts.push((format!("edge:{i},{j}"), theta));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(problem.seed);
    for r in 0..problem.restarts {
        let mut w: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
        let sum: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= sum);
        starts.push((format!("dirichlet:{r}"), theta_from_weights(&w)));
    }
    // Depolarization-line starts toward classical anchors.
    let classical: Vec<usize> = (0..n)
        .filter(|&k| is_deterministic(&problem.generators[k]))
        .collect();
    let synchronized: Vec<usize> = classical
        .iter()
        .copied()
        .filter(|&k| is_synchronized_constant(&problem.generators[k]))
        .collect();
    let nonclassical: Vec<usize> = (0..n).filter(|k| !classical.contains(k)).collect();
    let mut anchors: Vec<(String, Vec<usize>)> = Vec::new();
    if !classical.is_empty() {
        anchors.push(("bary".into(), classical.clone()));
    }
    if !synchronized.is_empty() {
        anchors.push(("sync".into(), synchronized.clone()));
    }
    for &g in &nonclassical {
        for (name, anchor) in &anchors {
            for e in 1..=8 {
                let v = 10f64.powi(-e);
                let mut w = vec![0.0; n];
                w[g] = v;
                for &k in anchor {
                    w[k] += (1.0 - v) / anchor.len() as f64;
                }
                starts.push((format!("line:{g}:{name}:1e-{e}"), theta_from_weights(&w)));
            }
        }
    }

    let records: Vec<RestartRecord> = starts
        .par_iter()
        .map(|(label, theta)| {
            let mut w = vec![0.0; n];
            softmax(theta, &mut w);
            let mut scratch: [Vec<f64>; 8] = Default::default();
            let start_value = obj.value(&w, &mut scratch);
            let (value, _, iterations) = ascend(&obj, theta.clone());
            RestartRecord {
                label: label.clone(),
                start_value,
                value,
                iterations,
            }
        })
        .collect();

    let mut best_idx = 0;
    for (i, r) in records.iter().enumerate() {
        if r.value > records[best_idx].value {
            best_idx = i;
        }
    }
    let (best_value, best_weights, _) = ascend(&obj, starts[best_idx].1.clone());
    Ok(SearchOutcome {
        violation_found: best_value > problem.tolerance,
        best_value,
        best_weights,
        best_label: records[best_idx].label.clone(),
        restarts: records,
    })
}

/// Exact rationalization of optimizer weights into a Distribution.
pub fn reconstruct_mixture(
    generators: &[Distribution],
    weights: &[f64],
) -> Result<Distribution, SearchError> {
    if generators.is_empty() {
        return Err(SearchError::EmptyGenerators);
    }
    let mut rats: Vec<Rat> = weights
        .iter()
        .map(|&w| {
            if w > 0.0 {
                rat_from_f64(w).unwrap_or_else(rat_zero)
            } else {
                rat_zero()
            }
        })
        .collect();
    let total: Rat = rats.iter().sum();
    rats.iter_mut().for_each(|r| *r /= &total);
    let components: Vec<(Rat, &Distribution)> = rats.into_iter().zip(generators.iter()).collect();
    Ok(crate::dist::mix(&components).expect("normalized weights"))
}

/// The nonclassical slice of the isotropic mixture polytope for
/// 1/2 < eps <= 4/7: the isotropic box plus the deterministic points
/// saturating the representative I2233 inequality at exactly 2.
pub fn restrict_to_nonclassical_generators(eps: &Rat) -> Result<Vec<Distribution>, SearchError> {
    if *eps <= rat(1, 2) || *eps > rat(4, 7) {
        return Err(SearchError::EpsOutOfRange);
    }
    let mut gens = vec![catalog::p_iso(eps)?];
    gens.extend(saturating_locals());
    Ok(gens)
}

/// Deterministic points with representative-I2233 value exactly 2, in
/// canonical order (30 points).
pub fn saturating_locals() -> Vec<Distribution> {
    let f = i2233_representative();
    deterministic_points(Scenario::two_two_three_three())
        .into_iter()
        .filter(|d| f.evaluate(d).expect("same scenario") == rat_int(2))
        .collect()
}

/// Mixing family scanned over the (eps, v) plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MixFamily {
    /// v p_iso(eps) + (1-v) p_C
    Iso,
    /// v tilde_p_iso(eps) + (1-v) p_C
    TildeIso,
}

pub fn family_distribution(
    family: MixFamily,
    eps: &Rat,
    v: &Rat,
) -> Result<Distribution, SearchError> {
    Ok(match family {
        MixFamily::Iso => catalog::p_e_family(eps, v)?,
        MixFamily::TildeIso => catalog::tilde_p_e_family(eps, v)?,
    })
}

fn family_nonclassical_part(family: MixFamily, eps: &Rat) -> Result<Distribution, SearchError> {
    Ok(match family {
        MixFamily::Iso => catalog::p_iso(eps)?,
        MixFamily::TildeIso => catalog::tilde_p_iso(eps)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionScan {
    pub family: MixFamily,
    pub q_list: Vec<f64>,
    pub eps_grid: Vec<f64>,
    pub v_grid: Vec<f64>,
    /// values[qi][ei][vi] of I_BC,q^4 on the family point.
    pub values: Vec<Vec<Vec<f64>>>,
    pub violated: Vec<Vec<Vec<bool>>>,
}

impl RegionScan {
    pub fn any_violation_at_or_below(&self, qi: usize, eps_max: f64, tol: f64) -> bool {
        self.eps_grid.iter().enumerate().any(|(ei, &e)| {
            e <= eps_max + 1e-12 && self.values[qi][ei].iter().any(|&val| val > tol)
        })
    }
}

/// Grid scan of I_BC,q^4 over the (eps, v) unit square for each q.
pub fn region_scan(
    family: MixFamily,
    q_list: &[f64],
    grid: usize,
) -> Result<RegionScan, SearchError> {
    assert!(grid >= 2);
    let denom = (grid - 1) as i64;
    let steps: Vec<Rat> = (0..grid as i64).map(|i| rat(i, denom)).collect();
    // Atoms are bilinear in (eps, v); evaluate from the three base tables.
    let nl = family_nonclassical_part(family, &rat_one())?;
    let noise = catalog::noise_2233();
    let p_c = catalog::p_c_2233();
    let nl_atoms = entropy::coexisting_atoms(&nl)?;
    let noise_atoms = entropy::coexisting_atoms(&noise)?;
    let c_atoms = entropy::coexisting_atoms(&p_c)?;

    let eps_grid: Vec<f64> = steps.iter().map(to_f64).collect();
    let v_grid = eps_grid.clone();
    let values: Vec<Vec<Vec<f64>>> = q_list
        .iter()
        .map(|&q| {
            eps_grid
                .par_iter()
                .map(|&e| {
                    let mut atoms: [Vec<f64>; 8] = Default::default();
                    v_grid
                        .iter()
                        .map(|&v| {
                            for k in 0..8 {
                                atoms[k].clear();
                                atoms[k].extend(
                                    nl_atoms[k]
                                        .iter()
                                        .zip(noise_atoms[k].iter())
                                        .zip(c_atoms[k].iter())
                                        .map(|((&t_nl, &t_noise), &t_c)| {
                                            v * (e * t_nl + (1.0 - e) * t_noise) + (1.0 - v) * t_c
                                        }),
                                );
                            }
                            bc_of_atoms(&atoms, q, 4)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let violated = values
        .iter()
        .map(|per_eps| {
            per_eps
                .iter()
                .map(|row| row.iter().map(|&v| v > VIOLATION_TOL).collect())
                .collect()
        })
        .collect();
    Ok(RegionScan {
        family,
        q_list: q_list.to_vec(),
        eps_grid,
        v_grid,
        values,
        violated,
    })
}

/// Whether some v in (0, 1] violates I_BC,q^4 <= 0 on the family at this
/// eps. Combines a direct maximization over representable v with the
/// analytic small-v criteria (the violating v range underflows f64 just
/// above the threshold).
pub fn family_violation_exists(family: MixFamily, q: f64, eps: &Rat) -> Result<bool, SearchError> {
    let p_c = catalog::p_c_2233();
    let d1 = family_nonclassical_part(family, eps)?;
    if (q - 1.0).abs() < 1e-8 {
        let coeff = entropy::shannon_vlnv_coefficient(&p_c, &d1, 4)?;
        if coeff < -1e-12 {
            return Ok(true);
        }
    } else {
        let slope = entropy::tsallis_initial_slope(&p_c, &d1, q, 4)?;
        if slope > 1e-15 {
            return Ok(true);
        }
    }
    // Direct check over a log-spaced and linear v grid.
    let d1_atoms = entropy::coexisting_atoms(&d1)?;
    let c_atoms = entropy::coexisting_atoms(&p_c)?;
    let mut atoms: [Vec<f64>; 8] = Default::default();
    let mut check = |v: f64| -> bool {
        for k in 0..8 {
            atoms[k].clear();
            atoms[k].extend(
                d1_atoms[k]
                    .iter()
                    .zip(c_atoms[k].iter())
                    .map(|(&t1, &tc)| v * t1 + (1.0 - v) * tc),
            );
        }
        bc_of_atoms(&atoms, q, 4) > VIOLATION_TOL
    };
    for e in 1..=250 {
        if check(10f64.powf(-(e as f64) / 10.0)) {
            return Ok(true);
        }
    }
    for i in 1..=100 {
        if check(i as f64 / 100.0) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Bisection bracket for the eps-boundary of the violation region of
/// I_BC,q^4 on a mixing family. Returns (lo, hi) with hi - lo <= width.
pub fn violation_boundary(
    family: MixFamily,
    q: f64,
    width: f64,
) -> Result<(f64, f64), SearchError> {
    let mut lo = rat(1, 2);
    let mut hi = rat(2, 3);
    debug_assert!(!family_violation_exists(family, q, &lo)?);
    debug_assert!(family_violation_exists(family, q, &hi)?);
    while to_f64(&hi) - to_f64(&lo) > width {
        let mid = (&lo + &hi) / rat_int(2);
        if family_violation_exists(family, q, &mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((to_f64(&lo), to_f64(&hi)))
}

#[derive(Debug, Clone, Serialize)]
pub struct QSweep {
    pub points: Vec<(f64, f64)>,
    pub max_q: f64,
    pub max_value: f64,
    /// Bracket (q_lo, q_hi) around the first sign change, if any.
    pub sign_change: Option<(f64, f64)>,
}

/// Samples I_BC,q^4 of a fixed distribution over a q interval.
pub fn q_sweep(d: &Distribution, q_range: (f64, f64), steps: usize) -> Result<QSweep, SearchError> {
    assert!(steps >= 2 && q_range.0 > 0.0 && q_range.1 > q_range.0);
    let atoms = entropy::coexisting_atoms(d)?;
    let points: Vec<(f64, f64)> = (0..steps)
        .map(|i| {
            let q = q_range.0 + (q_range.1 - q_range.0) * i as f64 / (steps - 1) as f64;
            (q, bc_of_atoms(&atoms, q, 4))
        })
        .collect();
    let (mut max_q, mut max_value) = points[0];
    for &(q, v) in &points {
        if v > max_value {
            max_value = v;
            max_q = q;
        }
    }
    let sign_change = points
        .windows(2)
        .find(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0))
        .map(|w| (w[0].0, w[1].0));
    Ok(QSweep {
        points,
        max_q,
        max_value,
        sign_change,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FootnoteReport {
    pub identity_exact: bool,
    pub tsallis2_violates: bool,
    pub shannon_nonpositive_on_pe_point: bool,
    pub shannon_violates_after_remixing: bool,
}

impl FootnoteReport {
    pub fn pass(&self) -> bool {
        self.identity_exact
            && self.tsallis2_violates
            && self.shannon_nonpositive_on_pe_point
            && self.shannon_violates_after_remixing
    }
}

/// Checks the remixing chain: 0.05 p_E(7/10, 2/5) + 0.95 p_C equals
/// 0.02 p_iso(7/10) + 0.98 p_C exactly; the inner point violates only the
/// q=2 Tsallis inequality while the remixed point violates the Shannon one.
pub fn footnote_chain_check() -> Result<FootnoteReport, SearchError> {
    let eps = rat(7, 10);
    let v = rat(2, 5);
    let p_c = catalog::p_c_2233();
    let pe_point = catalog::p_e_family(&eps, &v)?;
    let lhs = crate::dist::mix2(&rat(1, 20), &pe_point, &p_c).expect("same scenario");
    let rhs = catalog::p_e_family(&eps, &rat(1, 50))?;
    let identity_exact = lhs == rhs;

    let tsallis2 = entropy::bc_value(&pe_point, 2.0, 4)?;
    let shannon_inner = entropy::bc_value(&pe_point, 1.0, 4)?;
    let shannon_outer = entropy::bc_value(&rhs, 1.0, 4)?;
    Ok(FootnoteReport {
        identity_exact,
        tsallis2_violates: tsallis2 > VIOLATION_TOL,
        shannon_nonpositive_on_pe_point: shannon_inner <= VIOLATION_TOL,
        shannon_violates_after_remixing: shannon_outer > VIOLATION_TOL,
    })
}
