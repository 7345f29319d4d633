//! Named distributions: the PR box, the maximally nonlocal three-outcome
//! boxes, isotropic families, the counterexample box, the CGLMP quantum
//! point, and the 47 seed vertices of the CHSH-satisfying polytope.

use crate::dist::{mix2, DistError, Distribution};
use crate::rat::{rat, rat_int, rat_one, rat_zero, Rat};
use crate::scenario::Scenario;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown builtin distribution {0:?}")]
    UnknownName(String),
    #[error("builtin {0:?} needs parameter {1}")]
    MissingParameter(String, &'static str),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error(transparent)]
    Dist(#[from] DistError),
}

fn dist_2222(block_fn: impl Fn(usize, usize, usize, usize) -> Rat) -> Distribution {
    let s = Scenario::two_two_two_two();
    let probs = s
        .iter_abxy()
        .map(|(a, b, x, y)| block_fn(a, b, x, y))
        .collect();
    Distribution::new(s, probs).expect("builtin table invalid")
}

fn dist_2233(block_fn: impl Fn(usize, usize, usize, usize) -> Rat) -> Distribution {
    let s = Scenario::two_two_three_three();
    let probs = s
        .iter_abxy()
        .map(|(a, b, x, y)| block_fn(a, b, x, y))
        .collect();
    Distribution::new(s, probs).expect("builtin table invalid")
}

/// The PR box: outcomes satisfy x XOR y = a AND b, marginals uniform.
pub fn pr_box() -> Distribution {
    dist_2222(|a, b, x, y| {
        if x ^ y == a & b {
            rat(1, 2)
        } else {
            rat_zero()
        }
    })
}

/// Perfectly correlated classical box, same entropy vector as the PR box.
pub fn p_c_2222() -> Distribution {
    dist_2222(|_, _, x, y| if x == y { rat(1, 2) } else { rat_zero() })
}

/// Uniform noise in the binary scenario.
pub fn noise_2222() -> Distribution {
    dist_2222(|_, _, _, _| rat(1, 4))
}

/// The three-outcome extremal box maximally violating the I2233 inequality:
/// y = x except for (a,b) = (1,1) where y = x + 1 (mod 3).
pub fn p_nl() -> Distribution {
    dist_2233(|a, b, x, y| {
        let shift = if a == 1 && b == 1 { 1 } else { 0 };
        if (x + shift) % 3 == y {
            rat(1, 3)
        } else {
            rat_zero()
        }
    })
}

/// A second extremal nonlocal box: y = x except for (a,b) = (1,1) where
/// y = x + 2 (mod 3).
pub fn p_nl_star() -> Distribution {
    dist_2233(|a, b, x, y| {
        let shift = if a == 1 && b == 1 { 2 } else { 0 };
        if (x + shift) % 3 == y {
            rat(1, 3)
        } else {
            rat_zero()
        }
    })
}

/// Equal mixture of [`p_nl`] and [`p_nl_star`].
pub fn tilde_p_nl() -> Distribution {
    mix2(&rat(1, 2), &p_nl(), &p_nl_star()).unwrap()
}

/// Perfectly correlated three-outcome classical box.
pub fn p_c_2233() -> Distribution {
    dist_2233(|_, _, x, y| if x == y { rat(1, 3) } else { rat_zero() })
}

/// Uniform noise in the three-outcome scenario.
pub fn noise_2233() -> Distribution {
    dist_2233(|_, _, _, _| rat(1, 9))
}

fn check_unit(name: &str, x: &Rat) -> Result<(), CatalogError> {
    if x < &rat_zero() || x > &rat_one() {
        return Err(CatalogError::ParameterOutOfRange(format!(
            "{name} = {x} not in [0,1]"
        )));
    }
    Ok(())
}

/// Isotropic family `eps * p_nl + (1 - eps) * noise`; uniform marginals for
/// every input of each party.
pub fn p_iso(eps: &Rat) -> Result<Distribution, CatalogError> {
    check_unit("eps", eps)?;
    Ok(mix2(eps, &p_nl(), &noise_2233())?)
}

/// Isotropic family built on the symmetrized nonlocal box:
/// `eps * tilde_p_nl + (1 - eps) * noise`.
pub fn tilde_p_iso(eps: &Rat) -> Result<Distribution, CatalogError> {
    check_unit("eps", eps)?;
    Ok(mix2(eps, &tilde_p_nl(), &noise_2233())?)
}

/// Depolarization line `v * p_iso(eps) + (1 - v) * p_c_2233`.
pub fn p_e_family(eps: &Rat, v: &Rat) -> Result<Distribution, CatalogError> {
    check_unit("v", v)?;
    Ok(mix2(v, &p_iso(eps)?, &p_c_2233())?)
}

/// Depolarization line for the symmetrized isotropic family.
pub fn tilde_p_e_family(eps: &Rat, v: &Rat) -> Result<Distribution, CatalogError> {
    check_unit("v", v)?;
    Ok(mix2(v, &tilde_p_iso(eps)?, &p_c_2233())?)
}

/// The designated coarse-graining of `p_iso(eps)`: outcome 1 merged into
/// outcome 0 for both parties and both inputs, kept in the three-outcome
/// frame with zero rows.
pub fn p_cg(eps: &Rat) -> Result<Distribution, CatalogError> {
    check_unit("eps", eps)?;
    let a_val = (eps * rat_int(2) + rat_one()) / rat_int(9);
    let b_val = (rat_one() - eps) / rat_int(9);
    let two = rat_int(2);
    let three = rat_int(3);
    Ok(dist_2233(|a, b, x, y| {
        if a == 1 && b == 1 {
            match (x, y) {
                (0, 0) => &three * &b_val + &a_val,
                (0, 2) | (2, 0) => &a_val + &b_val,
                (2, 2) => b_val.clone(),
                _ => rat_zero(),
            }
        } else {
            match (x, y) {
                (0, 0) => &two * (&a_val + &b_val),
                (0, 2) | (2, 0) => &two * &b_val,
                (2, 2) => a_val.clone(),
                _ => rat_zero(),
            }
        }
    }))
}

/// The counterexample box inside the CHSH-satisfying polytope, in units of
/// 1/50. Equals the mixture of seed vertex 8 with deterministic vertices
/// 18, 26 and 47 at weights 1/10, 3/10, 1/5, 2/5.
pub fn p_e() -> Distribution {
    let flat: [i64; 36] = [
        21, 0, 0, 21, 0, 0, //
        0, 2, 0, 1, 1, 0, //
        11, 0, 16, 0, 1, 26, //
        31, 0, 0, 20, 1, 10, //
        1, 1, 0, 1, 0, 1, //
        0, 1, 16, 1, 1, 15,
    ];
    let s = Scenario::two_two_three_three();
    let flat: Vec<Rat> = flat.iter().map(|&n| rat(n, 50)).collect();
    Distribution::from_flat(s, &flat).expect("builtin table invalid")
}

/// sqrt(3) truncated to 15 decimal digits; the error is about 2.9e-16.
/// Substituting any value here keeps the quantum table exactly normalized.
fn sqrt3_approx() -> Rat {
    Rat::new(
        1_732_050_807_568_877i64.into(),
        1_000_000_000_000_000i64.into(),
    )
}

/// The two-qutrit CGLMP quantum point for the maximally entangled state with
/// the standard optimal phase choices, inputs labelled so that it maximally
/// violates the representative I2233 inequality (value (12 + 8*sqrt3)/9,
/// about 2.8729). Entries are near-exact rationals: the closed forms
/// 2(2 ± sqrt3)/27 and 1/27 with sqrt3 from [`sqrt3_approx`]; shipped as
/// configuration data, not derived from states or measurements here.
pub fn p_qm() -> Distribution {
    let s3 = sqrt3_approx();
    let u = rat(2, 27) * (rat_int(2) + &s3);
    let w = rat(2, 27) * (rat_int(2) - &s3);
    let z = rat(1, 27);
    // Per-block phase offsets delta in units of 1/4: probability of the
    // outcome diagonal k = (x - y) mod 3 follows sin^2(pi (k + delta)/3).
    let pattern = move |delta_quarter: i64| -> [Rat; 3] {
        match delta_quarter {
            1 => [u.clone(), w.clone(), z.clone()],
            -1 => [u.clone(), z.clone(), w.clone()],
            3 => [z.clone(), w.clone(), u.clone()],
            _ => unreachable!(),
        }
    };
    let blocks = [[pattern(-1), pattern(1)], [pattern(1), pattern(3)]];
    dist_2233(move |a, b, x, y| blocks[a][b][(x + 3 - y) % 3].clone())
}

/// Numerators of the 47 seed vertices (17 nonclassical + 30 local
/// deterministic) in the flattened layout, with a common denominator per row.
const SEED_VERTEX_TABLE: [(i64, [i64; 36]); 47] = [
    (
        6,
        [
            1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 1, 0, 2, 0, 1, 1, 0, 0, 0,
            2, 0, 1, 1, 2, 0, 0,
        ],
    ),
    (
        6,
        [
            1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 2, 0, 0, 0, 1, 1, 0, 2, 0, 1, 0,
            1, 0, 0, 2, 1, 1, 0,
        ],
    ),
    (
        6,
        [
            1, 1, 0, 2, 0, 0, 0, 1, 1, 0, 2, 0, 1, 0, 1, 0, 0, 2, 1, 0, 1, 0, 1, 1, 1, 1, 0, 1, 0,
            1, 0, 1, 1, 1, 1, 0,
        ],
    ),
    (
        6,
        [
            2, 0, 0, 1, 0, 1, 0, 2, 0, 1, 1, 0, 0, 0, 2, 0, 1, 1, 1, 0, 1, 0, 1, 1, 1, 1, 0, 1, 0,
            1, 0, 1, 1, 1, 1, 0,
        ],
    ),
    (
        5,
        [
            1, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 0, 2, 1, 0, 1, 0, 1, 1, 1, 1, 0, 1, 0,
            1, 0, 0, 1, 1, 0, 0,
        ],
    ),
    (
        5,
        [
            1, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 0,
            1, 0, 0, 2, 1, 1, 0,
        ],
    ),
    (
        5,
        [
            1, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 1, 0, 2, 0, 1, 1, 0, 1, 0,
            1, 0, 0, 1, 1, 0, 0,
        ],
    ),
    (
        5,
        [
            1, 0, 0, 1, 0, 0, 0, 2, 0, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 0,
            1, 0, 1, 1, 1, 1, 0,
        ],
    ),
    (
        5,
        [
            1, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 0, 0, 2, 0, 1, 1, 1, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0,
            1, 0, 1, 1, 1, 1, 0,
        ],
    ),
    (
        5,
        [
            1, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 0, 0,
            2, 0, 1, 1, 1, 1, 0,
        ],
    ),
    (
        5,
        [
            1, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 1, 2, 0, 0, 0, 1, 1, 0, 1, 0, 0, 0,
            1, 0, 1, 1, 1, 1, 0,
        ],
    ),
    (
        5,
        [
            1, 1, 0, 1, 0, 1, 0, 1, 1, 0, 2, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0,
            1, 0, 1, 1, 1, 1, 0,
        ],
    ),
    (
        5,
        [
            1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0,
            1, 0, 1, 1, 2, 0, 0,
        ],
    ),
    (
        5,
        [
            1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 2, 0, 1, 0,
            1, 0, 0, 1, 1, 0, 0,
        ],
    ),
    (
        5,
        [
            1, 1, 0, 2, 0, 0, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 0,
            1, 0, 1, 1, 1, 1, 0,
        ],
    ),
    (
        5,
        [
            2, 0, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1, 1, 0, 1, 0,
            1, 0, 0, 1, 1, 0, 0,
        ],
    ),
    (
        9,
        [
            2, 1, 0, 2, 0, 1, 0, 2, 1, 1, 2, 0, 1, 0, 2, 0, 1, 2, 2, 0, 1, 0, 2, 1, 1, 2, 0, 1, 0,
            2, 0, 1, 2, 2, 1, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
            0, 0, 0, 1, 0, 0, 1,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0,
            1, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0,
            0, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
            0, 0, 0, 1, 0, 1, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0,
            0, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
            0, 0, 0, 1, 1, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0,
            1, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0,
            1, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0,
            0, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0,
            0, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
            0, 0, 0, 1, 0, 1, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0,
            0, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
            0, 0, 0, 1, 1, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0,
            1, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
            0, 0, 1, 0, 0, 1, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1,
            0, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0,
            0, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
            0, 0, 1, 0, 1, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0,
            0, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0,
            0, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
            0, 0, 0, 1, 1, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0,
            1, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
            0, 0, 1, 0, 1, 0, 0,
        ],
    ),
    (
        1,
        [
            0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0,
            0, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0,
            1, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0,
            0, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0,
            0, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
            0, 1, 0, 0, 1, 0, 0,
        ],
    ),
    (
        1,
        [
            1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0,
            0, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        1,
        [
            1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0,
            0, 0, 0, 0, 0, 0, 0,
        ],
    ),
];

/// The 47 seed vertices of the CHSH-satisfying polytope that have
/// representative-I2233 value at least 2, 1-indexed order preserved.
pub fn seed_vertices() -> Vec<Distribution> {
    let s = Scenario::two_two_three_three();
    SEED_VERTEX_TABLE
        .iter()
        .map(|(den, nums)| {
            let flat: Vec<Rat> = nums.iter().map(|&n| rat(n, *den)).collect();
            Distribution::from_flat(s, &flat).expect("seed vertex table invalid")
        })
        .collect()
}

/// Seed vertex by its 1-based index.
pub fn seed_vertex(index: usize) -> Option<Distribution> {
    if index == 0 || index > SEED_VERTEX_TABLE.len() {
        return None;
    }
    Some(seed_vertices().swap_remove(index - 1))
}

/// The 30 local deterministic seed vertices (indices 18 through 47).
pub fn seed_locals() -> Vec<Distribution> {
    seed_vertices().split_off(17)
}

/// Resolves a builtin name as used by the CLI. Parameterized families take
/// `eps` and `v`. Matching is case-insensitive and tolerates a `p_` prefix
/// on the noise and classical boxes.
pub fn lookup(
    name: &str,
    eps: Option<&Rat>,
    v: Option<&Rat>,
) -> Result<Distribution, CatalogError> {
    let need_eps = |what: &str| {
        eps.cloned()
            .ok_or(CatalogError::MissingParameter(what.to_string(), "eps"))
    };
    let need_v = |what: &str| {
        v.cloned()
            .ok_or(CatalogError::MissingParameter(what.to_string(), "v"))
    };
    let canon = name.to_ascii_lowercase();
    let canon = match canon.as_str() {
        "p_pr" => "pr".to_string(),
        "p_noise_2222" => "noise_2222".to_string(),
        "p_noise_2233" => "noise_2233".to_string(),
        "p_c_2222" | "pc2222" => "pc_2222".to_string(),
        "p_c_2233" | "pc2233" => "pc_2233".to_string(),
        "p_e" => "pe".to_string(),
        other => other.to_string(),
    };
    let name = canon.as_str();
    match name {
        "pr" => Ok(pr_box()),
        "pc_2222" => Ok(p_c_2222()),
        "noise_2222" => Ok(noise_2222()),
        "p_nl" => Ok(p_nl()),
        "p_nl_star" => Ok(p_nl_star()),
        "tilde_p_nl" => Ok(tilde_p_nl()),
        "pc_2233" => Ok(p_c_2233()),
        "noise_2233" => Ok(noise_2233()),
        "pe" => Ok(p_e()),
        "p_qm" => Ok(p_qm()),
        "p_iso" => p_iso(&need_eps(name)?),
        "tilde_p_iso" => tilde_p_iso(&need_eps(name)?),
        "p_e_family" => p_e_family(&need_eps(name)?, &need_v(name)?),
        "tilde_p_e_family" => tilde_p_e_family(&need_eps(name)?, &need_v(name)?),
        "p_cg" => p_cg(&need_eps(name)?),
        _ => {
            if let Some(idx) = name.strip_prefix("vertex") {
                let idx: usize = idx
                    .parse()
                    .map_err(|_| CatalogError::UnknownName(name.to_string()))?;
                return seed_vertex(idx).ok_or_else(|| CatalogError::UnknownName(name.to_string()));
            }
            Err(CatalogError::UnknownName(name.to_string()))
        }
    }
}

/// All fixed builtin names (parameterized families excluded).
pub fn fixed_names() -> &'static [&'static str] {
    &[
        "pr",
        "pc_2222",
        "noise_2222",
        "p_nl",
        "p_nl_star",
        "tilde_p_nl",
        "pc_2233",
        "noise_2233",
        "pe",
        "p_qm",
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::mix;
    use crate::dist::Party;

    #[test]
    fn all_fixed_entries_are_valid_and_no_signalling() {
        for name in fixed_names() {
            let d = lookup(name, None, None).unwrap();
            assert!(d.is_no_signalling(), "{name} signals");
        }
        for d in seed_vertices() {
            assert!(d.is_no_signalling());
        }
    }

    #[test]
    fn iso_family_endpoints_and_marginals() {
        assert_eq!(p_iso(&rat_zero()).unwrap(), noise_2233());
        assert_eq!(p_iso(&rat_one()).unwrap(), p_nl());
        // Uniform marginals for every eps.
        for eps in [rat(1, 3), rat(4, 7), rat(9, 10)] {
            let d = p_iso(&eps).unwrap();
            for input in 0..2 {
                assert_eq!(d.marginal(Party::A, input).unwrap(), vec![rat(1, 3); 3]);
                assert_eq!(d.marginal(Party::B, input).unwrap(), vec![rat(1, 3); 3]);
            }
        }
        assert!(p_iso(&rat(8, 7)).is_err());
    }

    #[test]
    fn counterexample_is_the_documented_mixture() {
        let mixture = mix(&[
            (rat(1, 10), &seed_vertex(8).unwrap()),
            (rat(3, 10), &seed_vertex(18).unwrap()),
            (rat(1, 5), &seed_vertex(26).unwrap()),
            (rat(2, 5), &seed_vertex(47).unwrap()),
        ])
        .unwrap();
        assert_eq!(mixture, p_e());
    }

    #[test]
    fn seed_locals_are_deterministic_product_points() {
        let locals = seed_locals();
        assert_eq!(locals.len(), 30);
        for d in &locals {
            for p in d.entries() {
                assert!(p == &rat_zero() || p == &rat_one());
            }
        }
    }

    #[test]
    fn classical_box_is_a_mixture_of_constant_strategies() {
        let mixture = mix(&[
            (rat(1, 3), &seed_vertex(47).unwrap()),
            (rat(1, 3), &seed_vertex(33).unwrap()),
            (rat(1, 3), &seed_vertex(18).unwrap()),
        ])
        .unwrap();
        assert_eq!(mixture, p_c_2233());
    }

    #[test]
    fn quantum_point_is_normalized_with_uniform_marginals() {
        let d = p_qm();
        assert!(d.is_no_signalling());
        for input in 0..2 {
            assert_eq!(d.marginal(Party::A, input).unwrap(), vec![rat(1, 3); 3]);
            assert_eq!(d.marginal(Party::B, input).unwrap(), vec![rat(1, 3); 3]);
        }
    }
}
