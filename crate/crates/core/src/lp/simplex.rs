//! Dense two-phase simplex over exact rationals.
//!
//! All variables are nonnegative; constraints may be <=, >= or =. Dantzig
//! pricing with a switch to Bland's rule after a run of degenerate pivots
//! guarantees termination. Optimal solutions carry exact duals, infeasible
//! ones a Farkas-type certificate; both verify by substitution.

use crate::rat::{rat_one, rat_zero, Rat};
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Rel,
    pub rhs: Rat,
}

/// maximize `objective . x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone)]
pub struct Problem {
    pub num_vars: usize,
    pub objective: Vec<Rat>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone)]
pub enum Solution {
    Optimal {
        objective: Rat,
        x: Vec<Rat>,
        /// Optimality certificate: y_i >= 0 on Le rows, <= 0 on Ge rows,
        /// free on Eq rows, with yA >= c componentwise and y.b = c.x.
        duals: Vec<Rat>,
    },
    /// `farkas`: multipliers m_i (<= 0 on Le rows, >= 0 on Ge rows, free on
    /// Eq rows) with sum_i m_i a_i <= 0 componentwise and sum_i m_i b_i > 0.
    Infeasible {
        farkas: Vec<Rat>,
    },
    Unbounded,
}

struct Tableau {
    // rows[r] has width `cols + 1`, last entry is the rhs.
    rows: Vec<Vec<Rat>>,
    // Reduced-cost row, last entry is the negated objective value.
    obj: Vec<Rat>,
    basis: Vec<usize>,
    cols: usize,
    banned: Vec<bool>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let pivot_val = self.rows[row][col].clone();
        debug_assert!(!pivot_val.is_zero());
        let inv = rat_one() / pivot_val;
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[row].clone();
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let factor = self.rows[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, pv) in self.rows[r].iter_mut().zip(pivot_row.iter()) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        let factor = self.obj[col].clone();
        if !factor.is_zero() {
            for (v, pv) in self.obj.iter_mut().zip(pivot_row.iter()) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations until optimal or unbounded.
    fn optimize(&mut self) -> bool {
        let mut degenerate_run = 0usize;
        loop {
            let bland = degenerate_run > 40;
            let mut entering: Option<usize> = None;
            let mut best: Option<Rat> = None;
            for j in 0..self.cols {
                if self.banned[j] || !self.obj[j].is_negative() {
                    continue;
                }
                if bland {
                    entering = Some(j);
                    break;
                }
                if best.as_ref().is_none_or(|b| &self.obj[j] < b) {
                    best = Some(self.obj[j].clone());
                    entering = Some(j);
                }
            }
            let Some(col) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, Rat)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[r][self.cols] / a;
                let better = match &leaving {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
            let Some((row, ratio)) = leaving else {
                return false;
            };
            if ratio.is_zero() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(row, col);
        }
    }
}

pub fn solve(problem: &Problem) -> Solution {
    let n = problem.num_vars;
    let m = problem.constraints.len();
    debug_assert!(problem.objective.len() == n);

    // Normalize rows to nonnegative rhs, then assign slack/surplus and
    // artificial columns.
    let mut signs = vec![rat_one(); m];
    let mut rels = Vec::with_capacity(m);
    for (i, c) in problem.constraints.iter().enumerate() {
        debug_assert!(c.coeffs.len() == n);
        if c.rhs.is_negative() {
            signs[i] = -rat_one();
            rels.push(match c.rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            });
        } else {
            rels.push(c.rel);
        }
    }
    let mut col = n;
    let mut slack_col = vec![None; m];
    let mut surplus_col = vec![None; m];
    for (i, rel) in rels.iter().enumerate() {
        match rel {
            Rel::Le => {
                slack_col[i] = Some(col);
                col += 1;
            }
            Rel::Ge => {
                surplus_col[i] = Some(col);
                col += 1;
            }
            Rel::Eq => {}
        }
    }
    let mut art_col = vec![None; m];
    for (i, rel) in rels.iter().enumerate() {
        if !matches!(rel, Rel::Le) {
            art_col[i] = Some(col);
            col += 1;
        }
    }
    let cols = col;
    let need_phase1 = art_col.iter().any(|c| c.is_some());

    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![rat_zero(); cols + 1];
        for (j, v) in problem.constraints[i].coeffs.iter().enumerate() {
            if !v.is_zero() {
                row[j] = &signs[i] * v;
            }
        }
        if let Some(j) = slack_col[i] {
            row[j] = rat_one();
        }
        if let Some(j) = surplus_col[i] {
            row[j] = -rat_one();
        }
        if let Some(j) = art_col[i] {
            row[j] = rat_one();
        }
        row[cols] = &signs[i] * &problem.constraints[i].rhs;
        basis.push(
            slack_col[i]
                .or(art_col[i])
                .expect("every row has a basic column"),
        );
        rows.push(row);
    }

    let mut tab = Tableau {
        rows,
        obj: vec![rat_zero(); cols + 1],
        basis,
        cols,
        banned: vec![false; cols],
    };

    if need_phase1 {
        // Phase-1 objective: minimize the sum of artificials. Reduced costs
        // start as c - z with the artificial basis priced in.
        let mut obj = vec![rat_zero(); cols + 1];
        for (i, ac) in art_col.iter().enumerate() {
            if ac.is_some() {
                for (o, v) in obj.iter_mut().zip(tab.rows[i].iter()) {
                    if !v.is_zero() {
                        *o -= v;
                    }
                }
            }
        }
        for ac in art_col.iter().flatten() {
            obj[*ac] = rat_zero();
        }
        tab.obj = obj;
        let finished = tab.optimize();
        debug_assert!(finished, "phase 1 is bounded below by 0");
        let phase1_value = -tab.obj[cols].clone();
        if phase1_value.is_positive() {
            // Farkas certificate from the phase-1 duals: y_i = c_base(i) - r_i
            // read off each row's slack-or-artificial column; m_i = sign_i*y_i.
            let mut farkas = Vec::with_capacity(m);
            for i in 0..m {
                let (j, cost) = match art_col[i] {
                    Some(j) => (j, rat_one()),
                    None => (slack_col[i].expect("Le row has slack"), rat_zero()),
                };
                let y = cost - &tab.obj[j];
                farkas.push(&signs[i] * y);
            }
            return Solution::Infeasible { farkas };
        }
        // Drive leftover artificials out of the basis. A zero-valued basic
        // artificial must not survive into phase 2 with a nonzero row, or a
        // later pivot could push it positive again; rows whose non-artificial
        // entries are all zero are redundant and stay inert.
        let is_artificial = |c: usize| art_col.iter().flatten().any(|&a| a == c);
        for r in 0..m {
            if is_artificial(tab.basis[r]) {
                debug_assert!(tab.rows[r][cols].is_zero());
                if let Some(j) = (0..cols).find(|&j| !is_artificial(j) && !tab.rows[r][j].is_zero())
                {
                    tab.pivot(r, j);
                }
            }
        }
        for c in art_col.iter().flatten() {
            tab.banned[*c] = true;
        }
    }

    // Phase 2: minimize -objective as reduced costs over the current basis.
    let mut obj = vec![rat_zero(); cols + 1];
    for (j, v) in problem.objective.iter().enumerate() {
        obj[j] = -v.clone();
    }
    for r in 0..m {
        let b = tab.basis[r];
        let cost = if b < n {
            -problem.objective[b].clone()
        } else {
            rat_zero()
        };
        if cost.is_zero() {
            continue;
        }
        for (o, v) in obj.iter_mut().zip(tab.rows[r].iter()) {
            if !v.is_zero() {
                *o -= &cost * v;
            }
        }
    }
    for r in 0..m {
        obj[tab.basis[r]] = rat_zero();
    }
    tab.obj = obj;
    if !tab.optimize() {
        return Solution::Unbounded;
    }

    let mut x = vec![rat_zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rows[r][tab.cols].clone();
        }
    }
    let mut objective = rat_zero();
    for (xi, ci) in x.iter().zip(problem.objective.iter()) {
        objective += xi * ci;
    }
    // Duals from the certificate column of each row, mapped back through the
    // row sign and negated into the max-form convention.
    let mut duals = Vec::with_capacity(m);
    for i in 0..m {
        let j = slack_col[i].or(surplus_col[i]).or(art_col[i]).unwrap();
        let mut y = -tab.obj[j].clone();
        if surplus_col[i] == Some(j) {
            y = -y;
        }
        duals.push(-(&signs[i] * y));
    }
    Solution::Optimal {
        objective,
        x,
        duals,
    }
}

/// Substitution check of the full optimality certificate: primal
/// feasibility, dual sign conditions and feasibility, and strong duality.
pub fn verify_duals(problem: &Problem, x: &[Rat], objective: &Rat, duals: &[Rat]) -> bool {
    if !verify_optimal(problem, x, objective) || duals.len() != problem.constraints.len() {
        return false;
    }
    for (y, c) in duals.iter().zip(problem.constraints.iter()) {
        match c.rel {
            Rel::Le if y.is_negative() => return false,
            Rel::Ge if y.is_positive() => return false,
            _ => {}
        }
    }
    let mut bound = rat_zero();
    for (y, c) in duals.iter().zip(problem.constraints.iter()) {
        if !y.is_zero() {
            bound += y * &c.rhs;
        }
    }
    if &bound != objective {
        return false;
    }
    for j in 0..problem.num_vars {
        let combo: Rat = duals
            .iter()
            .zip(problem.constraints.iter())
            .map(|(y, c)| y * &c.coeffs[j])
            .sum();
        if combo < problem.objective[j] {
            return false;
        }
    }
    true
}

/// Substitution check for an infeasibility certificate.
pub fn verify_farkas(problem: &Problem, farkas: &[Rat]) -> bool {
    if farkas.len() != problem.constraints.len() {
        return false;
    }
    for (m_i, c) in farkas.iter().zip(problem.constraints.iter()) {
        match c.rel {
            Rel::Le if m_i.is_positive() => return false,
            Rel::Ge if m_i.is_negative() => return false,
            _ => {}
        }
    }
    let mut combo = vec![rat_zero(); problem.num_vars];
    let mut rhs = rat_zero();
    for (m_i, c) in farkas.iter().zip(problem.constraints.iter()) {
        if m_i.is_zero() {
            continue;
        }
        for (acc, a) in combo.iter_mut().zip(c.coeffs.iter()) {
            *acc += m_i * a;
        }
        rhs += m_i * &c.rhs;
    }
    combo.iter().all(|v| !v.is_positive()) && rhs.is_positive()
}

/// Substitution check that `x` is feasible and achieves `objective`.
pub fn verify_optimal(problem: &Problem, x: &[Rat], objective: &Rat) -> bool {
    if x.len() != problem.num_vars || x.iter().any(|v| v.is_negative()) {
        return false;
    }
    for c in &problem.constraints {
        let lhs: Rat = c.coeffs.iter().zip(x.iter()).map(|(a, v)| a * v).sum();
        let ok = match c.rel {
            Rel::Le => lhs <= c.rhs,
            Rel::Ge => lhs >= c.rhs,
            Rel::Eq => lhs == c.rhs,
        };
        if !ok {
            return false;
        }
    }
    let value: Rat = problem
        .objective
        .iter()
        .zip(x.iter())
        .map(|(c, v)| c * v)
        .sum();
    &value == objective
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn c(coeffs: &[i64], rel: Rel, rhs: i64) -> Constraint {
        Constraint {
            coeffs: coeffs.iter().map(|&v| rat_int(v)).collect(),
            rel,
            rhs: rat_int(rhs),
        }
    }

    #[test]
    fn simple_bounded_max() {
        // max x + y, x + 2y <= 4, 3x + y <= 6
        let p = Problem {
            num_vars: 2,
            objective: vec![rat_int(1), rat_int(1)],
            constraints: vec![c(&[1, 2], Rel::Le, 4), c(&[3, 1], Rel::Le, 6)],
        };
        match solve(&p) {
            Solution::Optimal {
                objective,
                x,
                duals,
            } => {
                assert_eq!(objective, rat(14, 5));
                assert!(verify_optimal(&p, &x, &objective));
                assert!(verify_duals(&p, &x, &objective, &duals));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equality_and_ge_rows() {
        // max x, x + y = 1, x >= 1/3 -> optimum 1
        let p = Problem {
            num_vars: 2,
            objective: vec![rat_int(1), rat_int(0)],
            constraints: vec![
                c(&[1, 1], Rel::Eq, 1),
                Constraint {
                    coeffs: vec![rat_int(1), rat_int(0)],
                    rel: Rel::Ge,
                    rhs: rat(1, 3),
                },
            ],
        };
        match solve(&p) {
            Solution::Optimal {
                objective,
                x,
                duals,
            } => {
                assert_eq!(objective, rat_int(1));
                assert!(verify_duals(&p, &x, &objective, &duals));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_with_certificate() {
        // x + y <= 1 and x + y >= 2
        let p = Problem {
            num_vars: 2,
            objective: vec![rat_int(0), rat_int(0)],
            constraints: vec![c(&[1, 1], Rel::Le, 1), c(&[1, 1], Rel::Ge, 2)],
        };
        match solve(&p) {
            Solution::Infeasible { farkas } => assert!(verify_farkas(&p, &farkas)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_unbounded() {
        let p = Problem {
            num_vars: 2,
            objective: vec![rat_int(1), rat_int(0)],
            constraints: vec![c(&[0, 1], Rel::Le, 1)],
        };
        assert!(matches!(solve(&p), Solution::Unbounded));
    }

    #[test]
    fn negative_rhs_rows_normalize() {
        // max x subject to -x <= -2 (x >= 2), x <= 5
        let p = Problem {
            num_vars: 1,
            objective: vec![rat_int(1)],
            constraints: vec![c(&[-1], Rel::Le, -2), c(&[1], Rel::Le, 5)],
        };
        match solve(&p) {
            Solution::Optimal { objective, .. } => assert_eq!(objective, rat_int(5)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_guard() {
        // Classic Beale-style degeneracy; must terminate.
        let p = Problem {
            num_vars: 4,
            objective: vec![rat(3, 4), rat_int(-150), rat(1, 50), rat_int(-6)],
            constraints: vec![
                Constraint {
                    coeffs: vec![rat(1, 4), rat_int(-60), rat(-1, 25), rat_int(9)],
                    rel: Rel::Le,
                    rhs: rat_int(0),
                },
                Constraint {
                    coeffs: vec![rat(1, 2), rat_int(-90), rat(-1, 50), rat_int(3)],
                    rel: Rel::Le,
                    rhs: rat_int(0),
                },
                Constraint {
                    coeffs: vec![rat_int(0), rat_int(0), rat_int(1), rat_int(0)],
                    rel: Rel::Le,
                    rhs: rat_int(1),
                },
            ],
        };
        match solve(&p) {
            Solution::Optimal { objective, .. } => assert_eq!(objective, rat(1, 20)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
