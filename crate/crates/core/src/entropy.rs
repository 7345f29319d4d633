//! Shannon and Tsallis entropies, entropy vectors over the coexisting sets
//! {X0, X1, Y0, Y1, X0Y0, X0Y1, X1Y0, X1Y1}, the four Braunstein-Caves
//! inequalities in both entropy families, and closed forms for the
//! isotropic-mixing line.
//!
//! Natural logarithms throughout. Probability space is exact; this module is
//! where floating point enters.

use crate::dist::{Distribution, Party};
use crate::rat::{to_f64, Rat};
use serde::Serialize;
use thiserror::Error;

/// Violation tolerance for entropic inequalities.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Empirically confirmed divisor relating the Shannon BC4 closed form to the
/// inequality value on the isotropic mixing line:
/// `I_BC^4(p_E(eps, v)) = f(eps, v) / 3` in natural-log units.
pub const SHANNON_BC4_DIVISOR: f64 = 3.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntropyError {
    #[error("input is not a probability vector")]
    NotADistribution,
    #[error("Tsallis order must be positive")]
    NonPositiveOrder,
    #[error("Tsallis order must exceed 1 for this closed form")]
    OrderNotAboveOne,
    #[error("marginals are ambiguous for a signalling distribution")]
    SignallingInput,
    #[error("entropy vectors require two inputs per party")]
    WrongInputCount,
}

fn check_probability_vector(p: &[f64]) -> Result<(), EntropyError> {
    let mut sum = 0.0;
    for &v in p {
        if !v.is_finite() || v < -1e-12 {
            return Err(EntropyError::NotADistribution);
        }
        sum += v;
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(EntropyError::NotADistribution);
    }
    Ok(())
}

/// Shannon entropy, natural log; zero-probability terms contribute 0.
pub fn shannon(p: &[f64]) -> Result<f64, EntropyError> {
    check_probability_vector(p)?;
    Ok(p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.ln()).sum())
}

/// Tsallis entropy of order `q`: (1 - sum p^q)/(q - 1), which equals
/// -sum p^q ln_q p. Switches to the Shannon branch for |q - 1| < 1e-8 to
/// avoid cancellation.
pub fn tsallis(p: &[f64], q: f64) -> Result<f64, EntropyError> {
    if q.is_nan() || q <= 0.0 {
        return Err(EntropyError::NonPositiveOrder);
    }
    if (q - 1.0).abs() < 1e-8 {
        return shannon(p);
    }
    check_probability_vector(p)?;
    let power_sum: f64 = p.iter().filter(|&&v| v > 0.0).map(|&v| v.powf(q)).sum();
    Ok((1.0 - power_sum) / (q - 1.0))
}

fn entropy_of(p: &[f64], q: f64) -> Result<f64, EntropyError> {
    if (q - 1.0).abs() < 1e-8 {
        shannon(p)
    } else {
        tsallis(p, q)
    }
}

fn rats_to_f64(v: &[Rat]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

/// Entropies of the eight coexisting sets, ordered
/// (X0, X1, Y0, Y1, X0Y0, X0Y1, X1Y0, X1Y1). `q = 1` is Shannon.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyVector {
    pub components: [f64; 8],
    pub q: f64,
    /// Optional label of the generating distribution.
    pub source: Option<String>,
}

impl EntropyVector {
    pub fn singles(&self) -> &[f64] {
        &self.components[..4]
    }
    pub fn pairs(&self) -> &[f64] {
        &self.components[4..]
    }
}

/// Maps a non-signalling two-input distribution to its entropy vector: the
/// pair entropy of X_a Y_b is the entropy of the outcome block at inputs
/// (a, b), the singleton entropies come from the marginals.
pub fn entropy_vector(d: &Distribution, q: f64) -> Result<EntropyVector, EntropyError> {
    let s = d.scenario();
    if s.inputs_a() != 2 || s.inputs_b() != 2 {
        return Err(EntropyError::WrongInputCount);
    }
    if !d.is_no_signalling() {
        return Err(EntropyError::SignallingInput);
    }
    let marg = |party, input| {
        entropy_of(
            &rats_to_f64(&d.marginal(party, input).expect("input in range")),
            q,
        )
    };
    let pair = |a, b| entropy_of(&rats_to_f64(&d.block(a, b).expect("inputs in range")), q);
    Ok(EntropyVector {
        components: [
            marg(Party::A, 0)?,
            marg(Party::A, 1)?,
            marg(Party::B, 0)?,
            marg(Party::B, 1)?,
            pair(0, 0)?,
            pair(0, 1)?,
            pair(1, 0)?,
            pair(1, 1)?,
        ],
        q,
        source: None,
    })
}

/// Sign pattern of the four BC forms over the entropy-vector components.
/// `BC_SIGNS[i-1][k]` multiplies component `k` in `I_BC^i`.
pub const BC_SIGNS: [[i8; 8]; 4] = [
    [0, 1, 0, 1, 1, -1, -1, -1],
    [0, 1, 1, 0, -1, 1, -1, -1],
    [1, 0, 0, 1, -1, -1, 1, -1],
    [1, 0, 1, 0, -1, -1, -1, 1],
];

/// Values of the four BC forms; `violated` flags value > tol, `marginal`
/// flags |value| <= tol.
#[derive(Debug, Clone, Serialize)]
pub struct BcResult {
    pub values: [f64; 4],
    pub q: f64,
    pub violated: [bool; 4],
    pub marginal: [bool; 4],
}

impl BcResult {
    pub fn any_violated(&self) -> bool {
        self.violated.iter().any(|&v| v)
    }
}

pub fn bc_values_with_tol(v: &EntropyVector, tol: f64) -> BcResult {
    let mut values = [0.0; 4];
    for (i, signs) in BC_SIGNS.iter().enumerate() {
        values[i] = signs
            .iter()
            .zip(v.components.iter())
            .map(|(&s, &h)| s as f64 * h)
            .sum();
    }
    BcResult {
        values,
        q: v.q,
        violated: values.map(|x| x > tol),
        marginal: values.map(|x| x.abs() <= tol),
    }
}

pub fn bc_values(v: &EntropyVector) -> BcResult {
    bc_values_with_tol(v, VIOLATION_TOL)
}

/// Convenience: the value of `I_BC^index` (1-based) on a distribution.
pub fn bc_value(d: &Distribution, q: f64, index: usize) -> Result<f64, EntropyError> {
    assert!((1..=4).contains(&index));
    Ok(bc_values(&entropy_vector(d, q)?).values[index - 1])
}

fn xlnx(t: f64) -> f64 {
    if t > 0.0 {
        t * t.ln()
    } else {
        0.0
    }
}

/// Shannon closed form for the isotropic mixing line
/// `p_E(eps, v) = v p_iso(eps) + (1-v) p_C`:
///
/// f = 3(3-2(1-eps)v) ln(3-2(1-eps)v) + 5(1-eps)v ln((1-eps)v)
///     - (1+2eps)v ln((1+2eps)v) - (3-(2+eps)v) ln(3-(2+eps)v) - 3 ln 9,
///
/// with t ln t -> 0 at the boundary. `I_BC^4 = f / SHANNON_BC4_DIVISOR`.
pub fn f_closed_form(eps: f64, v: f64) -> f64 {
    3.0 * xlnx(3.0 - 2.0 * (1.0 - eps) * v) + 5.0 * xlnx((1.0 - eps) * v)
        - xlnx((1.0 + 2.0 * eps) * v)
        - xlnx(3.0 - (2.0 + eps) * v)
        - 3.0 * 9.0f64.ln()
}

/// Tsallis closed form `g` with `I_BC,q^4 = g / (q-1)` on the same line.
pub fn g_closed_form(q: f64, eps: f64, v: f64) -> Result<f64, EntropyError> {
    if q.is_nan() || q <= 1.0 {
        return Err(EntropyError::OrderNotAboveOne);
    }
    let pw = |t: f64| if t > 0.0 { (t / 9.0).powf(q) } else { 0.0 };
    Ok(
        9.0 * pw(3.0 - 2.0 * (1.0 - eps) * v) + 15.0 * pw((1.0 - eps) * v)
            - 6.0 / 3.0f64.powf(q)
            - 3.0 * pw(3.0 - (2.0 + eps) * v)
            - 3.0 * pw((1.0 + 2.0 * eps) * v),
    )
}

/// `I_BC^4` on `p_E(eps, v)` via the Shannon closed form.
pub fn shannon_bc4_closed_form(eps: f64, v: f64) -> f64 {
    f_closed_form(eps, v) / SHANNON_BC4_DIVISOR
}

/// `I_BC,q^4` on `p_E(eps, v)` via the Tsallis closed form.
pub fn tsallis_bc4_closed_form(q: f64, eps: f64, v: f64) -> Result<f64, EntropyError> {
    Ok(g_closed_form(q, eps, v)? / (q - 1.0))
}

/// Atoms of the eight coexisting sets as f64 vectors, in entropy-vector
/// component order.
pub(crate) fn coexisting_atoms(d: &Distribution) -> Result<[Vec<f64>; 8], EntropyError> {
    let s = d.scenario();
    if s.inputs_a() != 2 || s.inputs_b() != 2 {
        return Err(EntropyError::WrongInputCount);
    }
    if !d.is_no_signalling() {
        return Err(EntropyError::SignallingInput);
    }
    let m = |p, i| rats_to_f64(&d.marginal(p, i).expect("in range"));
    let blk = |a, b| rats_to_f64(&d.block(a, b).expect("in range"));
    Ok([
        m(Party::A, 0),
        m(Party::A, 1),
        m(Party::B, 0),
        m(Party::B, 1),
        blk(0, 0),
        blk(0, 1),
        blk(1, 0),
        blk(1, 1),
    ])
}

/// Coefficient of `v ln v` in `I_BC^index` along the line
/// `(1-v) d0 + v d1` at v -> 0+ (Shannon). A negative coefficient means the
/// inequality is violated for all sufficiently small v > 0.
pub fn shannon_vlnv_coefficient(
    d0: &Distribution,
    d1: &Distribution,
    index: usize,
) -> Result<f64, EntropyError> {
    assert!((1..=4).contains(&index));
    let a0 = coexisting_atoms(d0)?;
    let a1 = coexisting_atoms(d1)?;
    let mut coeff = 0.0;
    for (k, sign) in BC_SIGNS[index - 1].iter().enumerate() {
        if *sign == 0 {
            continue;
        }
        // Atoms vanishing at v = 0 with slope kappa contribute
        // -kappa * v ln v to the entropy of that set.
        let vanishing: f64 = a0[k]
            .iter()
            .zip(a1[k].iter())
            .filter(|(&p0, &p1)| p0 <= 1e-15 && p1 > 1e-15)
            .map(|(_, &p1)| p1)
            .sum();
        coeff += *sign as f64 * (-vanishing);
    }
    Ok(coeff)
}

/// d/dv of `(q-1) * I_BC,q^index` at v = 0+ along the same line, q > 1.
/// A positive slope means the Tsallis inequality is violated for small v.
pub fn tsallis_initial_slope(
    d0: &Distribution,
    d1: &Distribution,
    q: f64,
    index: usize,
) -> Result<f64, EntropyError> {
    assert!((1..=4).contains(&index));
    if q.is_nan() || q <= 1.0 {
        return Err(EntropyError::OrderNotAboveOne);
    }
    let a0 = coexisting_atoms(d0)?;
    let a1 = coexisting_atoms(d1)?;
    let mut slope = 0.0;
    for (k, sign) in BC_SIGNS[index - 1].iter().enumerate() {
        if *sign == 0 {
            continue;
        }
        // (q-1) S_q = 1 - sum p^q; only atoms positive at v=0 have a finite
        // derivative contribution there.
        let ds: f64 = a0[k]
            .iter()
            .zip(a1[k].iter())
            .filter(|(&p0, _)| p0 > 1e-15)
            .map(|(&p0, &p1)| -q * p0.powf(q - 1.0) * (p1 - p0))
            .sum();
        slope += *sign as f64 * ds;
    }
    Ok(slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::dist::mix2;
    use crate::rat::{rat, rat_from_f64, to_f64};
    use crate::sym::deterministic_points;

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn shannon_basics() {
        assert_eq!(shannon(&[1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!((shannon(&[0.5, 0.5]).unwrap() - LN2).abs() < 1e-15);
        assert!((shannon(&[1.0 / 9.0; 9]).unwrap() - 9.0f64.ln()).abs() < 1e-12);
        assert_eq!(shannon(&[0.5, 0.2]), Err(EntropyError::NotADistribution));
    }

    #[test]
    fn tsallis_basics() {
        assert!((tsallis(&[0.5, 0.5], 2.0).unwrap() - 0.5).abs() < 1e-15);
        for q in [0.5, 1.0, 2.0, 8.0] {
            assert_eq!(tsallis(&[1.0, 0.0], q).unwrap(), 0.0);
        }
        assert_eq!(
            tsallis(&[0.5, 0.5], 0.0),
            Err(EntropyError::NonPositiveOrder)
        );
        // Near q = 1 the exact deviation from ln 3 is (q-1) ln^2(3)/2, so at
        // q = 1 + 1e-4 the value sits ~6e-5 away from the Shannon limit.
        let p = [1.0 / 3.0; 3];
        let dq = 1e-4;
        let dev = tsallis(&p, 1.0 + dq).unwrap() - 3.0f64.ln();
        assert!((dev + dq * 3.0f64.ln().powi(2) / 2.0).abs() < 1e-8);
        assert!(dev.abs() < 1e-4);
    }

    #[test]
    fn tsallis_is_continuous_at_one() {
        let p = [0.2, 0.3, 0.5];
        for dq in [1e-6, -1e-6] {
            let diff = (tsallis(&p, 1.0 + dq).unwrap() - shannon(&p).unwrap()).abs();
            assert!(diff < 1e-4);
        }
    }

    #[test]
    fn entropy_vector_equalities() {
        let v_pr = entropy_vector(&catalog::pr_box(), 1.0).unwrap();
        let v_pc = entropy_vector(&catalog::p_c_2222(), 1.0).unwrap();
        for k in 0..8 {
            assert!((v_pr.components[k] - v_pc.components[k]).abs() < 1e-12);
        }
        let v_nl = entropy_vector(&catalog::p_nl(), 1.0).unwrap();
        let v_c33 = entropy_vector(&catalog::p_c_2233(), 1.0).unwrap();
        for k in 0..8 {
            assert!((v_nl.components[k] - v_c33.components[k]).abs() < 1e-12);
        }
        let v_noise = entropy_vector(&catalog::noise_2233(), 1.0).unwrap();
        for k in 0..4 {
            assert!((v_noise.components[k] - 3.0f64.ln()).abs() < 1e-12);
            assert!((v_noise.components[4 + k] - 9.0f64.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn monotonicity_and_pair_bound_hold_on_catalog() {
        for d in [catalog::p_e(), catalog::p_qm(), catalog::p_nl()] {
            for q in [1.0, 1.5, 2.0, 8.0] {
                let v = entropy_vector(&d, q).unwrap();
                let c = &v.components;
                for a in 0..2 {
                    for b in 0..2 {
                        let pair = c[4 + 2 * a + b];
                        assert!(c[a] <= pair + 1e-12);
                        assert!(c[2 + b] <= pair + 1e-12);
                    }
                }
                if q == 1.0 {
                    for &pair in v.pairs() {
                        assert!(pair <= 9.0f64.ln() + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn maximal_bc_violations() {
        let half = rat(1, 2);
        let m22 = mix2(&half, &catalog::pr_box(), &catalog::p_c_2222()).unwrap();
        let r = bc_values(&entropy_vector(&m22, 1.0).unwrap());
        assert!((r.values[3] - LN2).abs() < 1e-12);
        assert!(r.violated[3]);

        let third = rat(1, 3);
        let m33 = crate::dist::mix(&[
            (third.clone(), &catalog::p_nl()),
            (third.clone(), &catalog::p_nl_star()),
            (third, &catalog::p_c_2233()),
        ])
        .unwrap();
        let r = bc_values(&entropy_vector(&m33, 1.0).unwrap());
        assert!((r.values[3] - 3.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn counterexample_violation_value() {
        let value = bc_value(&catalog::p_e(), 1.0, 4).unwrap();
        assert!((value - 0.0199733).abs() < 1e-6, "got {value}");
    }

    #[test]
    fn deterministic_points_satisfy_bc() {
        for d in deterministic_points(crate::Scenario::two_two_three_three())
            .iter()
            .step_by(17)
        {
            let r = bc_values(&entropy_vector(d, 1.0).unwrap());
            assert!(r.values.iter().all(|&v| v <= VIOLATION_TOL));
        }
    }

    #[test]
    fn closed_form_constant_confirmed_at_one_point() {
        // The divisor 3 (not 3 ln 2) reproduces the direct evaluation.
        let (eps, v) = (0.8, 0.5);
        let d =
            catalog::p_e_family(&rat_from_f64(eps).unwrap(), &rat_from_f64(v).unwrap()).unwrap();
        let direct = bc_value(&d, 1.0, 4).unwrap();
        let via_f = f_closed_form(eps, v) / SHANNON_BC4_DIVISOR;
        assert!((direct - via_f).abs() < 1e-12, "{direct} vs {via_f}");
        let wrong = f_closed_form(eps, v) / (3.0 * LN2);
        assert!((direct - wrong).abs() > 1e-3);
    }

    #[test]
    fn f_closed_form_limits_and_signs() {
        for eps in [0.0, 0.3, 4.0 / 7.0, 0.9] {
            assert!(f_closed_form(eps, 0.0).abs() < 1e-12);
        }
        for k in 0..=100 {
            let v = k as f64 / 100.0;
            assert!(f_closed_form(4.0 / 7.0, v) <= 1e-12);
        }
        // Just above the threshold a small v violates.
        assert!(f_closed_form(0.6, 1e-8) > 0.0);
    }

    #[test]
    fn g_closed_form_limits_slope_and_signs() {
        for q in [1.5, 2.0, 8.0] {
            for eps in [0.0, 0.5, 4.0 / 7.0, 0.8] {
                assert!(g_closed_form(q, eps, 0.0).unwrap().abs() < 1e-14);
                // One-sided difference quotient: the vanishing-atom terms
                // contribute a correction of order h^(q-1).
                let h = 1e-7;
                let fd = g_closed_form(q, eps, h).unwrap() / h;
                let expected = q / 3.0f64.powf(q) * (7.0 * eps - 4.0);
                let tol = (50.0 * h.powf(q - 1.0)).max(1e-6);
                assert!(
                    (fd - expected).abs() < tol,
                    "q={q} eps={eps}: {fd} vs {expected}"
                );
            }
        }
        for k in 0..=100 {
            let v = k as f64 / 100.0;
            assert!(g_closed_form(2.0, 4.0 / 7.0, v).unwrap() <= 1e-14);
        }
        assert_eq!(
            g_closed_form(1.0, 0.5, 0.5),
            Err(EntropyError::OrderNotAboveOne)
        );
    }

    #[test]
    fn closed_forms_match_entropy_route_on_grid() {
        for i in 0..=10 {
            for j in 0..=10 {
                let eps = rat(i, 10);
                let v = rat(j, 10);
                let d = catalog::p_e_family(&eps, &v).unwrap();
                let ef = to_f64(&eps);
                let vf = to_f64(&v);
                let direct1 = bc_value(&d, 1.0, 4).unwrap();
                assert!((direct1 - shannon_bc4_closed_form(ef, vf)).abs() < 1e-9);
                for q in [1.5, 2.0, 8.0] {
                    let direct = bc_value(&d, q, 4).unwrap();
                    let via_g = tsallis_bc4_closed_form(q, ef, vf).unwrap();
                    assert!(
                        (direct - via_g).abs() < 1e-9,
                        "q={q} eps={ef} v={vf}: {direct} vs {via_g}"
                    );
                }
            }
        }
    }

    #[test]
    fn pe_line_symmetry_degeneracy() {
        let d = catalog::p_e_family(&rat(3, 5), &rat(2, 7)).unwrap();
        let v = entropy_vector(&d, 1.0).unwrap();
        let c = &v.components;
        assert!(
            (c[4] - c[5]).abs() < 1e-12 && c[0..4].windows(2).all(|w| (w[0] - w[1]).abs() < 1e-12)
        );
        assert!((c[4] - c[6]).abs() < 1e-12);
        let r = bc_values(&v);
        for i in 0..3 {
            assert!(r.values[i] <= VIOLATION_TOL);
            assert!((r.values[i] - r.values[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_vector_invariant_under_block_permutation() {
        // Swapping entries within the (1,1) block leaves the vector fixed,
        // which is why the PR box and the classical box coincide.
        let v1 = entropy_vector(&catalog::p_nl(), 2.0).unwrap();
        let v2 = entropy_vector(&catalog::p_nl_star(), 2.0).unwrap();
        for k in 0..8 {
            assert!((v1.components[k] - v2.components[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn small_v_asymptotics_match_hand_derived_values() {
        let p_c = catalog::p_c_2233();
        for eps in [rat(1, 2), rat(4, 7), rat(3, 5), rat(7, 10)] {
            let iso = catalog::p_iso(&eps).unwrap();
            let e = to_f64(&eps);
            let coeff = shannon_vlnv_coefficient(&p_c, &iso, 4).unwrap();
            assert!((coeff - (4.0 - 7.0 * e) / 3.0).abs() < 1e-12);
            for q in [1.5, 2.0, 8.0] {
                let slope = tsallis_initial_slope(&p_c, &iso, q, 4).unwrap();
                let expected = q / 3.0f64.powf(q) * (7.0 * e - 4.0);
                assert!((slope - expected).abs() < 1e-12);
            }
            // Same asymptotics for the symmetrized family.
            let tilde = catalog::tilde_p_iso(&eps).unwrap();
            let coeff_t = shannon_vlnv_coefficient(&p_c, &tilde, 4).unwrap();
            assert!((coeff_t - (4.0 - 7.0 * e) / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn signalling_and_input_count_errors() {
        let s = crate::Scenario::new(3, 3, 2, 2).unwrap();
        let probs = vec![rat(1, 4); s.dimension()];
        let d = crate::Distribution::new(s, probs).unwrap();
        assert_eq!(
            entropy_vector(&d, 1.0).unwrap_err(),
            EntropyError::WrongInputCount
        );
    }
}
