//! Reproduction pipelines: each target runs a library workflow, emits
//! plot-ready CSV/JSON, and reports pass/fail of its built-in checks.

use crate::report::fmt_f64;
use bellkit::bell::{chsh_orbit, i2233_representative, midpoint_nonlocality_witness};
use bellkit::catalog;
use bellkit::dist::mix2;
use bellkit::entropy::{
    bc_value, bc_values, entropy_vector, f_closed_form, g_closed_form, shannon_vlnv_coefficient,
    tsallis_initial_slope, SHANNON_BC4_DIVISOR,
};
use bellkit::lp::{
    joint_violation_sweep, local_weight_with_points, orbit_vertex_count, verify_vertex,
    JointViolationStatus, PolytopeModel,
};
use bellkit::rat::{format_rat, rat, rat_int, rat_one, to_f64, Rat};
use bellkit::search::{
    footnote_chain_check, maximize_bc, q_sweep, region_scan, saturating_locals, violation_boundary,
    BcObjective, MixFamily, SearchProblem,
};
use bellkit::sym::{deterministic_points, enumerate_two_to_one, relabelling_orbit, SymmetryOp};
use bellkit::{Distribution, Scenario};
use rayon::prelude::*;

pub struct TargetOutcome {
    pub pass: bool,
    pub summary: Vec<String>,
    pub files: Vec<(String, String)>,
}

pub struct TargetConfig {
    pub grid: usize,
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
}

pub const TARGETS: &[&str] = &[
    "prop1", "prop2", "prop3", "prop4", "prop5", "propCG", "propR1", "table1", "fig1", "fig2a",
    "fig2b", "conjA", "conjB", "footnote",
];

pub fn run_target(target: &str, cfg: &TargetConfig) -> Result<TargetOutcome, String> {
    match target {
        "prop1" => Ok(prop1()),
        "prop2" => Ok(prop2(cfg)),
        "prop3" => Ok(prop3()),
        "prop4" => Ok(prop4(cfg)),
        "prop5" => Ok(prop5(cfg)),
        "propCG" => Ok(prop_cg()),
        "propR1" => Ok(prop_r1()),
        "table1" => Ok(table1()),
        "fig1" => Ok(fig1(cfg)),
        "fig2a" => Ok(fig2(MixFamily::Iso, cfg)),
        "fig2b" => Ok(fig2(MixFamily::TildeIso, cfg)),
        "conjA" => Ok(conjectures(true, cfg)),
        "conjB" => Ok(conjectures(false, cfg)),
        "footnote" => Ok(footnote()),
        other => Err(format!(
            "unknown target {other:?}; expected one of {}",
            TARGETS.join(", ")
        )),
    }
}

/// Entropy report rows for one distribution at several orders.
pub fn entropy_csv(id: &str, d: &Distribution, q_list: &[f64]) -> String {
    let mut out = String::from(
        "id,q,H_X0,H_X1,H_Y0,H_Y1,H_X0Y0,H_X0Y1,H_X1Y0,H_X1Y1,I_BC1,I_BC2,I_BC3,I_BC4,viol1,viol2,viol3,viol4\n",
    );
    for &q in q_list {
        let v = entropy_vector(d, q).expect("two-input non-signalling input");
        let bc = bc_values(&v);
        out.push_str(&format!("{id},{q}"));
        for c in v.components {
            out.push(',');
            out.push_str(&fmt_f64(c));
        }
        for val in bc.values {
            out.push(',');
            out.push_str(&fmt_f64(val));
        }
        for flag in bc.violated {
            out.push_str(if flag { ",true" } else { ",false" });
        }
        out.push('\n');
    }
    out
}

fn prop1() -> TargetOutcome {
    let results = joint_violation_sweep();
    let mut csv = String::from("j,status,objective,cuts\n");
    let mut certs = Vec::new();
    let mut zeros = 0usize;
    let mut infeasible = 0usize;
    let mut failures = 0usize;
    for (j, out) in &results {
        match &out.status {
            JointViolationStatus::Optimal(v) => {
                if v == &rat_int(0) {
                    zeros += 1;
                } else {
                    failures += 1;
                }
                csv.push_str(&format!(
                    "{j},optimal,{},{}\n",
                    format_rat(v),
                    out.cuts_used
                ));
            }
            JointViolationStatus::Infeasible => {
                infeasible += 1;
                csv.push_str(&format!("{j},infeasible,,{}\n", out.cuts_used));
            }
        }
        certs.push(bellkit::lp::joint_violation_json(*j, out));
    }
    let certs_json = serde_json::to_string_pretty(&serde_json::Value::Array(certs)).unwrap();
    TargetOutcome {
        pass: failures == 0 && results.len() == 431,
        summary: vec![format!(
            "431 pairs: {zeros} with margin exactly 0, {infeasible} infeasible, {failures} with positive margin"
        )],
        files: vec![
            ("prop1_pairs.csv".into(), csv),
            ("prop1_certificates.json".into(), certs_json),
        ],
    }
}

fn prop2(cfg: &TargetConfig) -> TargetOutcome {
    let pe = catalog::p_e();
    let value = bc_value(&pe, 1.0, 4).unwrap();
    let pass = (value - 0.0199733).abs() < 1e-6;
    TargetOutcome {
        pass,
        summary: vec![format!(
            "I_BC^4(counterexample) = {} (target 0.0199733 within 1e-6), violation above tol {}: {}",
            fmt_f64(value),
            cfg.tol,
            value > cfg.tol
        )],
        files: vec![(
            "prop2_entropy.csv".into(),
            entropy_csv("pe", &pe, &[1.0, 1.1, 1.5, 2.0, 8.0]),
        )],
    }
}

fn prop3() -> TargetOutcome {
    let grid = [
        rat(0, 1),
        rat(1, 4),
        rat(1, 2),
        rat(4, 7),
        rat(2, 3),
        rat(1, 1),
    ];
    let points = deterministic_points(Scenario::two_two_three_three());
    let chsh = chsh_orbit(Scenario::two_two_three_three()).unwrap();
    let mut csv = String::from("eps,local_weight,formula,chsh_satisfied\n");
    let mut pass = true;
    for eps in &grid {
        let iso = catalog::p_iso(eps).unwrap();
        let alpha = local_weight_with_points(&iso, &points).unwrap().alpha;
        let formula = if *eps <= rat(1, 2) {
            rat_one()
        } else {
            rat_int(2) * (rat_one() - eps)
        };
        let chsh_ok = chsh.iter().all(|f| !f.violates(&iso).unwrap());
        pass &= alpha == formula && chsh_ok == (*eps <= rat(4, 7));
        csv.push_str(&format!(
            "{},{},{},{}\n",
            format_rat(eps),
            format_rat(&alpha),
            format_rat(&formula),
            chsh_ok
        ));
    }
    // Just past the threshold a CHSH-type facet must break.
    let past = catalog::p_iso(&rat(117, 200)).unwrap();
    let violates_past = chsh.iter().any(|f| f.violates(&past).unwrap());
    pass &= violates_past;
    TargetOutcome {
        pass,
        summary: vec![
            "local weight 1 up to eps = 1/2, then 2(1-eps); CHSH boundary at 4/7".into(),
            format!("CHSH violated at eps = 117/200 > 4/7: {violates_past}"),
        ],
        files: vec![("prop3_local_weight.csv".into(), csv)],
    }
}

fn prop4(cfg: &TargetConfig) -> TargetOutcome {
    let mut pass = true;
    // One-point divisor confirmation against the entropy route.
    let d = catalog::p_e_family(&rat(4, 5), &rat(1, 2)).unwrap();
    let direct = bc_value(&d, 1.0, 4).unwrap();
    let ratio = f_closed_form(0.8, 0.5) / direct;
    pass &= (ratio - SHANNON_BC4_DIVISOR).abs() < 1e-9;

    let n = cfg.grid.max(2);
    let mut csv = String::from("eps,v,f,I_BC4\n");
    for i in 0..n {
        let eps = i as f64 / (n - 1) as f64;
        for j in 0..n {
            let v = j as f64 / (n - 1) as f64;
            let f = f_closed_form(eps, v);
            csv.push_str(&format!(
                "{},{},{},{}\n",
                fmt_f64(eps),
                fmt_f64(v),
                fmt_f64(f),
                fmt_f64(f / SHANNON_BC4_DIVISOR)
            ));
            if eps <= 4.0 / 7.0 {
                pass &= f <= 1e-12;
            }
        }
        pass &= f_closed_form(eps, 0.0).abs() < 1e-12;
    }
    // Past the threshold the small-v branch goes positive.
    pass &= f_closed_form(0.6, 1e-8) > 0.0;
    let p_c = catalog::p_c_2233();
    let coeff_above =
        shannon_vlnv_coefficient(&p_c, &catalog::p_iso(&rat(3, 5)).unwrap(), 4).unwrap();
    let coeff_below =
        shannon_vlnv_coefficient(&p_c, &catalog::p_iso(&rat(5, 9)).unwrap(), 4).unwrap();
    pass &= coeff_above < 0.0 && coeff_below > 0.0;
    TargetOutcome {
        pass,
        summary: vec![
            format!("Shannon closed-form divisor confirmed: {ratio:.12}"),
            "f <= 0 for eps <= 4/7 on the grid; positive small-v branch at eps = 3/5".into(),
        ],
        files: vec![("prop4_shannon_closed_form.csv".into(), csv)],
    }
}

fn prop5(cfg: &TargetConfig) -> TargetOutcome {
    let mut pass = true;
    let q_list = [1.5, 2.0, 8.0];
    let n = cfg.grid.max(2);
    let mut csv = String::from("q,eps,v,g,I_BCq4\n");
    for &q in &q_list {
        for i in 0..n {
            let eps = i as f64 / (n - 1) as f64;
            for j in 0..n {
                let v = j as f64 / (n - 1) as f64;
                let g = g_closed_form(q, eps, v).unwrap();
                csv.push_str(&format!(
                    "{q},{},{},{},{}\n",
                    fmt_f64(eps),
                    fmt_f64(v),
                    fmt_f64(g),
                    fmt_f64(g / (q - 1.0))
                ));
                if eps <= 4.0 / 7.0 {
                    pass &= g <= 1e-12;
                }
            }
        }
    }
    // Slope identity at v -> 0 against the analytic derivative.
    let p_c = catalog::p_c_2233();
    for &q in &q_list {
        for eps in [rat(1, 2), rat(4, 7), rat(7, 10)] {
            let iso = catalog::p_iso(&eps).unwrap();
            let slope = tsallis_initial_slope(&p_c, &iso, q, 4).unwrap();
            let expected = q / 3.0f64.powf(q) * (7.0 * to_f64(&eps) - 4.0);
            pass &= (slope - expected).abs() < 1e-12;
        }
    }
    // Agreement with the entropy route on an 11x11 grid.
    for i in 0..=10 {
        for j in 0..=10 {
            let eps = rat(i, 10);
            let v = rat(j, 10);
            let d = catalog::p_e_family(&eps, &v).unwrap();
            for &q in &q_list {
                let direct = bc_value(&d, q, 4).unwrap();
                let closed = g_closed_form(q, to_f64(&eps), to_f64(&v)).unwrap() / (q - 1.0);
                pass &= (direct - closed).abs() < 1e-9;
            }
        }
    }
    TargetOutcome {
        pass,
        summary: vec![
            "g <= 0 for eps <= 4/7; slope (q/3^q)(7 eps - 4) at v -> 0; 1e-9 agreement with entropy route".into(),
        ],
        files: vec![("prop5_tsallis_closed_form.csv".into(), csv)],
    }
}

fn prop_cg() -> TargetOutcome {
    let threshold = rat(4, 7);
    let iso = catalog::p_iso(&threshold).unwrap();
    let points = deterministic_points(Scenario::two_two_three_three());
    let cgs = enumerate_two_to_one(Scenario::two_two_three_three());
    let rows: Vec<(usize, usize, Rat)> = cgs
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let gd = g.apply(&iso).unwrap();
            let alpha = local_weight_with_points(&gd, &points).unwrap().alpha;
            (i, g.nontrivial_slots(), alpha)
        })
        .collect();
    let mut csv = String::from("index,merged_slots,local_weight\n");
    let mut all_local = true;
    for (i, slots, alpha) in &rows {
        all_local &= *alpha == rat_one();
        csv.push_str(&format!("{i},{slots},{}\n", format_rat(alpha)));
    }
    let witness = catalog::p_cg(&rat(3, 5)).unwrap();
    let value = i2233_representative().evaluate(&witness).unwrap();
    let pass = all_local && rows.len() == 255 && value == rat(31, 15) && value > rat_int(2);
    TargetOutcome {
        pass,
        summary: vec![
            format!(
                "{}/255 coarse-grainings local at eps = 4/7",
                rows.iter().filter(|r| r.2 == rat_one()).count()
            ),
            format!(
                "designated coarse-graining at eps = 3/5 reaches I2233 = {} > 2",
                format_rat(&value)
            ),
        ],
        files: vec![("propCG_sweep.csv".into(), csv)],
    }
}

fn prop_r1() -> TargetOutcome {
    let threshold = rat(4, 7);
    let iso = catalog::p_iso(&threshold).unwrap();
    let orbit = relabelling_orbit(&iso);
    let points = deterministic_points(Scenario::two_two_three_three());
    let rows: Vec<(usize, Rat)> = orbit[1..]
        .par_iter()
        .enumerate()
        .map(|(j, partner)| {
            let mid = mix2(&rat(1, 2), &iso, partner).unwrap();
            (
                j + 2,
                local_weight_with_points(&mid, &points).unwrap().alpha,
            )
        })
        .collect();
    let mut csv = String::from("j,midpoint_local_weight\n");
    let mut all_local = rows.len() == 431;
    for (j, alpha) in &rows {
        all_local &= *alpha == rat_one();
        csv.push_str(&format!("{j},{}\n", format_rat(alpha)));
    }
    // Witness at eps = 3/5: output-swap partner scores below the
    // deterministic floor.
    let eps = rat(3, 5);
    let iso_past = catalog::p_iso(&eps).unwrap();
    let swap = bellkit::sym::LocalRelabelling::alice_output_swap(iso_past.scenario(), 1, 1, 2);
    let mid = mix2(&rat(1, 2), &iso_past, &swap.apply(&iso_past).unwrap()).unwrap();
    let witness = midpoint_nonlocality_witness();
    let raw_score: Rat = witness
        .coeffs
        .iter()
        .zip(mid.entries())
        .map(|(c, p)| -(c * p))
        .sum();
    let pass = all_local && raw_score == rat(43, 45) && raw_score < rat_one();
    TargetOutcome {
        pass,
        summary: vec![
            format!("431 midpoint mixtures local at eps = 4/7: {all_local}"),
            format!("witness score at eps = 3/5: {} < 1", format_rat(&raw_score)),
        ],
        files: vec![("propR1_midpoints.csv".into(), csv)],
    }
}

fn table1() -> TargetOutcome {
    let seeds = catalog::seed_vertices();
    let rep = i2233_representative();
    let mut functionals = chsh_orbit(Scenario::two_two_three_three()).unwrap();
    functionals.push(bellkit::bell::BellFunctional::from_lower_bound(
        Scenario::two_two_three_three(),
        rep.coeffs.clone(),
        rat_int(2),
        bellkit::bell::FamilyTag::I2233,
    ));
    let model = PolytopeModel::HRep { functionals };
    let points = deterministic_points(Scenario::two_two_three_three());
    let rows: Vec<(usize, bool, bool, bool, Rat, Rat)> = seeds
        .par_iter()
        .enumerate()
        .map(|(idx, v)| {
            let report = verify_vertex(v, &model).unwrap();
            let alpha = local_weight_with_points(v, &points).unwrap().alpha;
            (
                idx + 1,
                v.is_no_signalling(),
                report.feasible,
                report.extremal,
                rep.evaluate(v).unwrap(),
                alpha,
            )
        })
        .collect();
    let mut csv = String::from("row,no_signalling,feasible,extremal,i2233_value,local_weight\n");
    let mut pass = true;
    for (row, ns, feasible, extremal, value, alpha) in &rows {
        pass &= ns & feasible & extremal;
        pass &= *value >= rat_int(2);
        if *row >= 18 {
            pass &= *value == rat_int(2) && *alpha == rat_one();
        } else {
            pass &= *alpha < rat_one();
        }
        csv.push_str(&format!(
            "{row},{ns},{feasible},{extremal},{},{}\n",
            format_rat(value),
            format_rat(alpha)
        ));
    }
    let ops = SymmetryOp::enumerate(Scenario::two_two_three_three());
    let (count, _) = orbit_vertex_count(&seeds, &ops);
    pass &= count == 7425;
    TargetOutcome {
        pass,
        summary: vec![
            "47/47 seed vertices verified (feasible, extremal, I2233 >= 2)".into(),
            format!(
                "orbit closure under the 10368-element group: {count} vertices (expected 7425)"
            ),
        ],
        files: vec![("table1_vertices.csv".into(), csv)],
    }
}

fn fig1(cfg: &TargetConfig) -> TargetOutcome {
    let steps = cfg.grid.max(41);
    let sweep = q_sweep(&catalog::p_e(), (1.0, 3.0), steps).unwrap();
    let mut csv = String::from("q,I_BCq4\n");
    for (q, v) in &sweep.points {
        csv.push_str(&format!("{},{}\n", fmt_f64(*q), fmt_f64(*v)));
    }
    let sign_ok = sweep
        .sign_change
        .map(|(lo, hi)| lo >= 1.0 && hi < 1.5)
        .unwrap_or(false);
    let pass = (sweep.max_q - 1.0).abs() < 1e-12 && sweep.max_value > cfg.tol && sign_ok;
    TargetOutcome {
        pass,
        summary: vec![format!(
            "maximum {} at q = {}; sign change bracket {:?}",
            fmt_f64(sweep.max_value),
            sweep.max_q,
            sweep.sign_change
        )],
        files: vec![("fig1_q_sweep.csv".into(), csv)],
    }
}

fn fig2(family: MixFamily, cfg: &TargetConfig) -> TargetOutcome {
    let q_list = [1.0, 2.0, 8.0];
    let scan = region_scan(family, &q_list, cfg.grid).unwrap();
    let mut csv = String::from("eps,v,q,value,violated\n");
    for (qi, &q) in q_list.iter().enumerate() {
        for (ei, &eps) in scan.eps_grid.iter().enumerate() {
            for (vi, &v) in scan.v_grid.iter().enumerate() {
                csv.push_str(&format!(
                    "{},{},{q},{},{}\n",
                    fmt_f64(eps),
                    fmt_f64(v),
                    fmt_f64(scan.values[qi][ei][vi]),
                    scan.violated[qi][ei][vi]
                ));
            }
        }
    }
    let mut pass = true;
    let mut brackets = Vec::new();
    for (qi, &q) in q_list.iter().enumerate() {
        pass &= !scan.any_violation_at_or_below(qi, 4.0 / 7.0, cfg.tol);
        let (lo, hi) = violation_boundary(family, q, 1e-3).unwrap();
        pass &= lo <= 4.0 / 7.0 && 4.0 / 7.0 <= hi;
        brackets.push(format!("q={q}: [{}, {}]", fmt_f64(lo), fmt_f64(hi)));
    }
    let name = match family {
        MixFamily::Iso => "fig2a_region.csv",
        MixFamily::TildeIso => "fig2b_region.csv",
    };
    TargetOutcome {
        pass,
        summary: vec![
            format!(
                "no violating cell at eps <= 4/7 on the {0}x{0} grid",
                cfg.grid
            ),
            format!("boundary brackets: {}", brackets.join("; ")),
        ],
        files: vec![(name.into(), csv)],
    }
}

fn conjectures(shannon: bool, cfg: &TargetConfig) -> TargetOutcome {
    let locals = saturating_locals();
    let q_list: Vec<f64> = if shannon {
        vec![1.0]
    } else {
        vec![1.1, 2.0, 3.0, 10.0, 50.0]
    };
    let mut csv = String::from("eps,q,best_value,violation_found,best_label\n");
    let mut pass = true;
    let mut restart_tables = Vec::new();
    for eps in [rat(5, 9), rat(4, 7)] {
        for &q in &q_list {
            let mut gens = vec![catalog::p_iso(&eps).unwrap()];
            gens.extend(locals.iter().cloned());
            let obj = if q == 1.0 {
                BcObjective::Shannon { index: 4 }
            } else {
                BcObjective::Tsallis { q, index: 4 }
            };
            let mut problem = SearchProblem::new(obj, gens);
            problem.restarts = cfg.restarts;
            problem.seed = cfg.seed;
            problem.tolerance = cfg.tol;
            let out = maximize_bc(&problem).unwrap();
            pass &= out.best_value <= 1e-9;
            csv.push_str(&format!(
                "{},{q},{},{},{}\n",
                format_rat(&eps),
                fmt_f64(out.best_value),
                out.violation_found,
                out.best_label
            ));
            restart_tables.push(serde_json::json!({
                "eps": format_rat(&eps),
                "q": q,
                "outcome": out,
            }));
        }
    }
    // Detection just past the threshold.
    let (eps_detect, q_detect) = if shannon {
        (rat(42, 70), 1.0)
    } else {
        (rat(400_001, 700_000), 2.0)
    };
    let mut gens = vec![catalog::p_iso(&eps_detect).unwrap()];
    gens.extend(locals.iter().cloned());
    let obj = if shannon {
        BcObjective::Shannon { index: 4 }
    } else {
        BcObjective::Tsallis {
            q: q_detect,
            index: 4,
        }
    };
    let mut problem = SearchProblem::new(obj, gens);
    problem.restarts = cfg.restarts;
    problem.seed = cfg.seed;
    let out = maximize_bc(&problem).unwrap();
    pass &= out.best_value > 0.0;
    csv.push_str(&format!(
        "{},{q_detect},{},{},{}\n",
        format_rat(&eps_detect),
        fmt_f64(out.best_value),
        out.violation_found,
        out.best_label
    ));
    let label = if shannon { "conjA" } else { "conjB" };
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "runs": restart_tables,
        "detection": {
            "eps": format_rat(&eps_detect),
            "q": q_detect,
            "outcome": out,
        },
        "note": "no violation found (evidence); negative results are not a proof of entropic classicality",
    }))
    .unwrap();
    TargetOutcome {
        pass,
        summary: vec![
            format!(
                "searches stayed below 1e-9 on the restricted polytope; detection value {} just past the threshold",
                fmt_f64(out.best_value)
            ),
            "negative results are evidence only, never \"entropically classical\"".into(),
        ],
        files: vec![
            (format!("{label}_search.csv"), csv),
            (format!("{label}_search.json"), json),
        ],
    }
}

fn footnote() -> TargetOutcome {
    let report = footnote_chain_check().unwrap();
    let json = serde_json::to_string_pretty(&report).unwrap();
    TargetOutcome {
        pass: report.pass(),
        summary: vec![format!(
            "identity exact: {}; q=2 violation: {}; Shannon non-violation inside: {}; Shannon violation after remixing: {}",
            report.identity_exact,
            report.tsallis2_violates,
            report.shannon_nonpositive_on_pe_point,
            report.shannon_violates_after_remixing
        )],
        files: vec![("footnote_chain.json".into(), json)],
    }
}
