//! Seeded verification suites, one per acceptance criterion. Each suite
//! generates deterministic random instances, runs the theorem-backed
//! operations, and checks the exact claims; any deviation is recorded as a
//! failure string. The same suites back `duality verify` and the
//! acceptance-test target.

use std::time::Instant;

use duality_core::cone::{normal_cone, Cone};
use duality_core::coderivative::{
    chain_rule_check, constraint_system_coderivative, intersection_rule_check,
    preimage_normal_cone, SetValuedMap,
};
use duality_core::conjugate::{
    conjugate, conjugate_chain_witness, conjugate_sum_split, conjugate_via_epigraph,
};
use duality_core::expr::ConvexExpr;
use duality_core::fenchel::{fenchel_report, FenchelProblem};
use duality_core::lagrange::{
    alternative_systems, dual_function, fritz_john, kkt_check, kkt_find,
    strong_duality_report, ConeProgram, ConstraintMap, KktOutcome,
};
use duality_core::legendre::{lf_transform_brute, lf_transform_fast};
use duality_core::linalg::{self, LinearMap};
use duality_core::lp::{dual_of, solve_lp, Sense};
use duality_core::poly::Polyhedron;
use duality_core::report::ExtReal;
use duality_core::sampled::{sample, GridSpec, SampledFunction};
use duality_core::scalar::Scalar;
use num_traits::Zero;
use duality_core::subdiff::{max_rule, subdifferential};
use duality_core::vrep::vrep;
use duality_core::Q;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::runner::{report_row, CsvRow};

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
    pub millis: u128,
    pub rows: Vec<CsvRow>,
}

impl SuiteOutcome {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn line(&self) -> String {
        let status = if self.ok() { "ok" } else { "FAILED" };
        format!(
            "suite {:<12} {:>4}/{:<4} {} ({} ms)",
            self.name, self.passed, self.total, status, self.millis
        )
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "sum-rule",
    "chain-rule",
    "fenchel",
    "max-rule",
    "kkt",
    "lagrange",
    "alt-systems",
    "coderivative",
    "oracle",
    "geometry",
];

pub fn run_suite(
    name: &str,
    seed: u64,
    n: Option<usize>,
    dims: usize,
) -> Result<SuiteOutcome, String> {
    let start = Instant::now();
    let mut out = match name {
        "sum-rule" => sum_rule_suite(seed, n.unwrap_or(200), dims),
        "chain-rule" => chain_rule_suite(seed, n.unwrap_or(100), dims),
        "fenchel" => fenchel_suite(seed, n.unwrap_or(200), dims),
        "max-rule" => max_rule_suite(seed, n.unwrap_or(200), dims),
        "kkt" => kkt_suite(seed, n.unwrap_or(150), dims),
        "lagrange" => lagrange_suite(seed, n.unwrap_or(150), dims),
        "alt-systems" => alt_systems_suite(seed, n.unwrap_or(150), dims),
        "coderivative" => coderivative_suite(seed, n.unwrap_or(100)),
        "oracle" => oracle_suite(seed, n.unwrap_or(50)),
        "geometry" => geometry_suite(seed, n.unwrap_or(500), dims),
        other => return Err(format!("unknown suite `{other}`")),
    };
    out.millis = start.elapsed().as_millis();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Random data

fn rat(rng: &mut ChaCha8Rng, max: i64) -> Q {
    Q::ratio(rng.gen_range(-max..=max), rng.gen_range(1..=3))
}

fn point(rng: &mut ChaCha8Rng, dim: usize, max: i64) -> Vec<Q> {
    (0..dim).map(|_| rat(rng, max)).collect()
}

/// Box with the origin strictly inside.
fn solid_box(rng: &mut ChaCha8Rng, dim: usize) -> Polyhedron<Q> {
    let lo: Vec<Q> = (0..dim)
        .map(|_| Q::ratio(rng.gen_range(-8..=-2), 2))
        .collect();
    let hi: Vec<Q> = (0..dim)
        .map(|_| Q::ratio(rng.gen_range(2..=8), 2))
        .collect();
    Polyhedron::box_(&lo, &hi).expect("consistent dims")
}

/// Full-dimensional polytope containing the origin in its core.
fn solid_polytope(rng: &mut ChaCha8Rng, dim: usize) -> Polyhedron<Q> {
    let mut p = solid_box(rng, dim);
    for _ in 0..rng.gen_range(0..=2) {
        let normal = point(rng, dim, 2);
        if normal.iter().all(|c| c.is_zero()) {
            continue;
        }
        // Offset keeps the origin strictly feasible.
        p = p
            .with_ineq(normal, Q::ratio(rng.gen_range(1..=4), 1))
            .expect("consistent dims");
    }
    p
}

fn max_affine(rng: &mut ChaCha8Rng, dim: usize, max_pieces: usize) -> ConvexExpr<Q> {
    let k = rng.gen_range(1..=max_pieces);
    let pieces: Vec<(Vec<Q>, Q)> = (0..k)
        .map(|_| (point(rng, dim, 3), rat(rng, 4)))
        .collect();
    ConvexExpr::max_affine(pieces).expect("nonempty pieces")
}

/// Max-affine plus a solid box indicator: dom has the origin in its core.
fn pl_boxed(rng: &mut ChaCha8Rng, dim: usize) -> ConvexExpr<Q> {
    let ma = max_affine(rng, dim, 3);
    let dom = solid_box(rng, dim);
    ConvexExpr::sum(ma, ConvexExpr::indicator(dom).expect("nonempty")).expect("origin shared")
}

fn linear_map(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> LinearMap<Q> {
    let entries: Vec<Q> = (0..rows * cols)
        .map(|_| Q::ratio(rng.gen_range(-2..=2), 1))
        .collect();
    LinearMap::new(rows, cols, entries).expect("consistent dims")
}

fn suite_rng(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (tag.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

fn outcome(name: &'static str, total: usize) -> SuiteOutcome {
    SuiteOutcome { name, passed: 0, total, failures: Vec::new(), millis: 0, rows: Vec::new() }
}

macro_rules! fail {
    ($out:expr, $($arg:tt)*) => {
        if $out.failures.len() < 10 {
            $out.failures.push(format!($($arg)*));
        } else if $out.failures.len() == 10 {
            $out.failures.push("… more failures suppressed".into());
        }
    };
}

// ---------------------------------------------------------------------------
// Criterion 1: conjugate sum rule

fn sum_rule_suite(seed: u64, n: usize, dims: usize) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 1);
    let mut out = outcome("sum-rule", n);
    for i in 0..n {
        let dim = 1 + i % dims.clamp(1, 3);
        let phi1 = pl_boxed(&mut rng, dim);
        let phi2 = pl_boxed(&mut rng, dim);
        let sum = ConvexExpr::sum(phi1.clone(), phi2.clone()).expect("origin shared");
        let mut good = true;
        for _ in 0..10 {
            let f = point(&mut rng, dim, 5);
            let witness = match conjugate_sum_split(&phi1, &phi2, &f) {
                Ok(w) => w,
                Err(e) => {
                    fail!(out, "instance {i}: split failed: {e}");
                    good = false;
                    break;
                }
            };
            let direct = conjugate_via_epigraph(&sum, &f).expect("proper");
            if linalg::add(&witness.parts.0, &witness.parts.1) != f {
                fail!(out, "instance {i}: split parts do not sum to f");
                good = false;
                break;
            }
            if direct != ExtReal::Finite(witness.total()) {
                fail!(out, "instance {i}: witness value differs from (φ1+φ2)*(f)");
                good = false;
                break;
            }
            // Attainment: the witness matches the separate conjugates.
            let v1 = conjugate_via_epigraph(&phi1, &witness.parts.0).expect("proper");
            let v2 = conjugate_via_epigraph(&phi2, &witness.parts.1).expect("proper");
            if v1 + v2 != ExtReal::Finite(witness.total()) {
                fail!(out, "instance {i}: witness values are not the separate conjugates");
                good = false;
                break;
            }
        }
        if good {
            out.passed += 1;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 2: conjugate chain rule

fn chain_rule_suite(seed: u64, n: usize, dims: usize) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 2);
    let mut out = outcome("chain-rule", n);
    for i in 0..n {
        let m = 1 + i % dims.clamp(1, 3);
        let cols = 1 + (i / 3) % dims.clamp(1, 3);
        let phi = pl_boxed(&mut rng, m);
        let a = linear_map(&mut rng, m, cols);
        // f = A*(s̄) guarantees a nonempty adjoint preimage and f ∈ dom.
        let sbar = point(&mut rng, m, 3);
        let f = a.adjoint().apply(&sbar).expect("dims");
        match conjugate_chain_witness(&phi, &a, &f) {
            Ok((s, value)) => {
                let back = a.adjoint().apply(&s).expect("dims");
                if back != f {
                    fail!(out, "instance {i}: witness violates A*s = f");
                    continue;
                }
                let composed = ConvexExpr::precompose(phi.clone(), a.clone())
                    .expect("0 maps into the domain");
                let direct = conjugate_via_epigraph(&composed, &f).expect("proper");
                if direct != ExtReal::Finite(value.clone()) {
                    fail!(out, "instance {i}: witness value differs from (φ∘A)*(f)");
                    continue;
                }
                let at_s = conjugate_via_epigraph(&phi, &s).expect("proper");
                if at_s != ExtReal::Finite(value) {
                    fail!(out, "instance {i}: witness value is not φ*(s)");
                    continue;
                }
                out.passed += 1;
            }
            Err(e) => fail!(out, "instance {i}: chain witness failed: {e}"),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 3: Fenchel strong + weak duality

fn fenchel_instance(rng: &mut ChaCha8Rng, dims: usize, qualified: bool) -> FenchelProblem<Q> {
    let n = 1 + rng.gen_range(0..dims.clamp(1, 3));
    let m = 1 + rng.gen_range(0..dims.clamp(1, 3));
    if qualified {
        let phi = pl_boxed(rng, n);
        let psi = pl_boxed(rng, m);
        let a = linear_map(rng, m, n);
        FenchelProblem::new(phi, psi, a).expect("dims consistent")
    } else {
        // Unrestricted: free functions and shifted domains; may be
        // infeasible or unbounded.
        let phi = if rng.gen_bool(0.5) {
            max_affine(rng, n, 2)
        } else {
            let shift = point(rng, n, 4);
            let dom = solid_box(rng, n).translate(&shift);
            ConvexExpr::sum(
                max_affine(rng, n, 2),
                ConvexExpr::indicator(dom).expect("nonempty"),
            )
            .expect("box overlaps full domain")
        };
        let psi = if rng.gen_bool(0.5) {
            max_affine(rng, m, 2)
        } else {
            let shift = point(rng, m, 4);
            let dom = solid_box(rng, m).translate(&shift);
            ConvexExpr::sum(
                max_affine(rng, m, 2),
                ConvexExpr::indicator(dom).expect("nonempty"),
            )
            .expect("box overlaps full domain")
        };
        let a = linear_map(rng, m, n);
        FenchelProblem::new(phi, psi, a).expect("dims consistent")
    }
}

fn fenchel_suite(seed: u64, n: usize, dims: usize) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 3);
    let mut out = outcome("fenchel", 2 * n);
    for i in 0..n {
        let prob = fenchel_instance(&mut rng, dims, true);
        match fenchel_report(&prob) {
            Ok(r) => {
                out.rows.push(report_row(&format!("q{i}"), &r));
                if !r.qualified {
                    fail!(out, "qualified instance {i}: qualification flags lost");
                } else if !r.zero_gap() {
                    fail!(out, "qualified instance {i}: nonzero gap");
                } else if r.primal_value.is_finite() && !r.attained {
                    fail!(out, "qualified instance {i}: dual optimum not attained");
                } else {
                    out.passed += 1;
                }
            }
            Err(e) => fail!(out, "qualified instance {i}: {e}"),
        }
    }
    for i in 0..n {
        let prob = fenchel_instance(&mut rng, dims, false);
        match fenchel_report(&prob) {
            Ok(r) => {
                out.rows.push(report_row(&format!("u{i}"), &r));
                if r.weak_duality_holds() {
                    out.passed += 1;
                } else {
                    fail!(out, "unrestricted instance {i}: weak duality violated");
                }
            }
            Err(e) => fail!(out, "unrestricted instance {i}: {e}"),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 4: subdifferential max rule

fn max_rule_suite(seed: u64, n: usize, dims: usize) -> SuiteOutcome {
    let unqualified = n / 2;
    let mut rng = suite_rng(seed, 4);
    let mut out = outcome("max-rule", n + unqualified);
    for i in 0..n {
        let dim = 1 + i % dims.clamp(1, 3);
        let k = rng.gen_range(2..=3);
        let phis: Vec<ConvexExpr<Q>> = (0..k).map(|_| pl_boxed(&mut rng, dim)).collect();
        let xbar = vec![Q::ratio(0, 1); dim];
        match max_rule(&phis, &xbar) {
            Ok(r) => {
                if !r.qualified {
                    fail!(out, "instance {i}: generator lost the core qualification");
                } else if !r.equal {
                    fail!(out, "instance {i}: max rule equality failed");
                } else {
                    out.passed += 1;
                }
            }
            Err(e) => fail!(out, "instance {i}: {e}"),
        }
    }
    for i in 0..unqualified {
        let dim = 1 + i % dims.clamp(1, 3);
        // One function's domain has the origin on its boundary.
        let mut lo = vec![Q::ratio(0, 1); dim];
        let hi: Vec<Q> = (0..dim).map(|_| Q::ratio(rng.gen_range(2..=6), 2)).collect();
        lo[0] = Q::ratio(0, 1);
        let boundary_dom = Polyhedron::box_(&lo, &hi).expect("consistent dims");
        let boundary = ConvexExpr::sum(
            max_affine(&mut rng, dim, 2),
            ConvexExpr::indicator(boundary_dom).expect("nonempty"),
        )
        .expect("origin in both domains");
        let phis = vec![boundary, pl_boxed(&mut rng, dim)];
        let xbar = vec![Q::ratio(0, 1); dim];
        match max_rule(&phis, &xbar) {
            Ok(r) => {
                if r.qualified {
                    fail!(out, "control {i}: expected an unqualified instance");
                } else if !r.inclusion {
                    fail!(out, "control {i}: one-sided inclusion failed");
                } else {
                    out.passed += 1;
                }
            }
            Err(e) => fail!(out, "control {i}: {e}"),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Criteria 5–7: cone programs

/// Slater-qualified componentwise program on a box.
fn slater_program(rng: &mut ChaCha8Rng, dims: usize) -> ConeProgram<Q> {
    let n = 1 + rng.gen_range(0..dims.clamp(1, 3));
    let m = 1 + rng.gen_range(0..3);
    let phi = max_affine(rng, n, 3);
    let lambda = solid_box(rng, n);
    let zero = vec![Q::ratio(0, 1); n];
    let psis: Vec<ConvexExpr<Q>> = (0..m)
        .map(|_| {
            let raw = max_affine(rng, n, 2);
            let at0 = raw.eval(&zero).expect("full domain").unwrap_finite();
            // ψ(0) = −1 < 0: Slater holds at the origin.
            ConvexExpr::sum(raw, ConvexExpr::constant(n, -at0 - Q::ratio(1, 1)))
                .expect("full domains")
        })
        .collect();
    ConeProgram::new(phi, ConstraintMap::Separate(psis), lambda).expect("dims consistent")
}

/// Affine-class program with a full-dimensional polyhedral cone and Slater.
fn affine_cone_program(rng: &mut ChaCha8Rng, dims: usize) -> ConeProgram<Q> {
    let n = 1 + rng.gen_range(0..dims.clamp(1, 3));
    let m = 1 + rng.gen_range(0..2);
    let phi = max_affine(rng, n, 2);
    let lambda = solid_box(rng, n);
    // Orthant plus an extra generator keeps the cone full-dimensional.
    let mut gens: Vec<Vec<Q>> = (0..m).map(|i| linalg::unit(m, i)).collect();
    if rng.gen_bool(0.5) {
        gens.push((0..m).map(|_| Q::ratio(rng.gen_range(-1..=2), 1)).collect());
    }
    let cone = Cone::from_generators(m, gens).expect("consistent dims");
    let map = linear_map(rng, m, n);
    // ψ(0) = w0 ∈ −core(C): Slater at the origin.
    let interior = cone.core_point().expect("full-dimensional cone");
    let offset = linalg::neg(&interior);
    ConeProgram::new(phi, ConstraintMap::Affine { map, offset, cone }, lambda)
        .expect("dims consistent")
}

/// A feasible point with objective strictly above the optimum, if one shows
/// up within a few random vertex probes.
fn non_optimal_feasible(
    rng: &mut ChaCha8Rng,
    prog: &ConeProgram<Q>,
    optimum: &Q,
) -> Option<Vec<Q>> {
    let feasible = prog.feasible_set().ok()?;
    for _ in 0..12 {
        let obj = point(rng, prog.dim(), 3);
        let candidate = match solve_lp(&obj, Sense::Max, &feasible).ok()? {
            duality_core::lp::LpOutcome::Optimal { point, .. } => point,
            _ => continue,
        };
        if let Ok(ExtReal::Finite(v)) = prog.objective.eval(&candidate) {
            if v > *optimum {
                return Some(candidate);
            }
        }
    }
    None
}

fn kkt_suite(seed: u64, n: usize, dims: usize) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 5);
    let mut out = outcome("kkt", 2 * n);
    let mut perturbed_done = 0;
    let mut i = 0;
    // Each instance contributes one optimal check; perturbed checks come
    // from the same stream until their quota is filled.
    while out.passed + out.failures.len() < out.total && i < 8 * n {
        i += 1;
        let prog = slater_program(&mut rng, dims);
        let report = match strong_duality_report(&prog) {
            Ok(r) => r,
            Err(e) => {
                fail!(out, "instance {i}: solve failed: {e}");
                continue;
            }
        };
        let (Some(ubar), ExtReal::Finite(p)) = (&report.primal_opt, &report.primal_value)
        else {
            // Compact Λ makes this unreachable; count as failure if it
            // happens.
            fail!(out, "instance {i}: no finite optimum on a compact instance");
            continue;
        };
        if out.passed < n + perturbed_done {
            // Optimal direction: multipliers must exist and verify.
            match kkt_find(&prog, ubar) {
                Ok(KktOutcome::Multipliers(gamma)) => match kkt_check(&prog, ubar, &gamma) {
                    Ok(true) => out.passed += 1,
                    Ok(false) => fail!(out, "instance {i}: found multipliers fail kkt_check"),
                    Err(e) => fail!(out, "instance {i}: kkt_check error: {e}"),
                },
                Ok(KktOutcome::NotOptimal { .. }) => {
                    fail!(out, "instance {i}: optimum declared non-optimal")
                }
                Err(e) => fail!(out, "instance {i}: kkt_find error: {e}"),
            }
        }
        if perturbed_done < n {
            if let Some(worse) = non_optimal_feasible(&mut rng, &prog, p) {
                match kkt_find(&prog, &worse) {
                    Ok(KktOutcome::NotOptimal { better }) => {
                        let improved = prog.objective.eval(&better).expect("finite");
                        let at_worse = prog.objective.eval(&worse).expect("finite");
                        if improved < at_worse {
                            out.passed += 1;
                        } else {
                            fail!(out, "instance {i}: improvement certificate does not improve");
                        }
                        perturbed_done += 1;
                    }
                    Ok(KktOutcome::Multipliers(_)) => {
                        fail!(out, "instance {i}: multipliers at a non-optimal point");
                        perturbed_done += 1;
                    }
                    Err(e) => {
                        fail!(out, "instance {i}: perturbed kkt_find error: {e}");
                        perturbed_done += 1;
                    }
                }
            }
        }
    }
    out.total = out.passed + out.failures.len();
    out
}

fn lagrange_suite(seed: u64, n: usize, dims: usize) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 6);
    let mut out = outcome("lagrange", n);
    let mut weak_checks = 0usize;
    let weak_target = 1000usize.min(7 * n);
    for i in 0..n {
        let affine_class = i % 5 == 4;
        let prog = if affine_class {
            affine_cone_program(&mut rng, dims)
        } else {
            slater_program(&mut rng, dims)
        };
        let r = match strong_duality_report(&prog) {
            Ok(r) => r,
            Err(e) => {
                fail!(out, "instance {i}: report failed: {e}");
                continue;
            }
        };
        out.rows.push(report_row(&format!("l{i}"), &r));
        if r.slater != Some(true) {
            fail!(out, "instance {i}: generator lost the Slater condition");
            continue;
        }
        if !r.weak_duality_holds() {
            fail!(out, "instance {i}: weak duality violated");
            continue;
        }
        if !r.zero_gap() {
            fail!(out, "instance {i}: strong duality gap under Slater");
            continue;
        }
        // Fritz-John multipliers at the certified optimum (componentwise
        // class; the affine class lies outside the theorem's special case).
        if !affine_class {
            if let Some(ubar) = &r.primal_opt {
                match fritz_john(&prog, ubar) {
                    Ok(fj) => {
                        let total = fj.gamma0.clone()
                            + fj.gamma.iter().fold(Q::ratio(0, 1), |a, g| a + g.clone());
                        if total != Q::ratio(1, 1) {
                            fail!(out, "instance {i}: Fritz-John normalization broken");
                            continue;
                        }
                        // Complementary slackness is exact.
                        let values = prog
                            .psi_values(ubar)
                            .expect("domains are full")
                            .expect("feasible");
                        if fj
                            .gamma
                            .iter()
                            .zip(&values)
                            .any(|(g, v)| !(g.clone() * v.clone()).is_zero())
                        {
                            fail!(out, "instance {i}: complementary slackness violated");
                            continue;
                        }
                    }
                    Err(e) => {
                        fail!(out, "instance {i}: Fritz-John failed at optimum: {e}");
                        continue;
                    }
                }
            }
        }
        // Weak duality sampling: feasible x and dual-cone h.
        let feasible = prog.feasible_set().expect("consistent dims");
        let dual_hrep = prog.dual_cone_hrep();
        let mut instance_ok = true;
        for _ in 0..7 {
            if weak_checks >= weak_target {
                break;
            }
            let obj = point(&mut rng, prog.dim(), 3);
            let x = match solve_lp(&obj, Sense::Max, &feasible) {
                Ok(duality_core::lp::LpOutcome::Optimal { point, .. }) => point,
                _ => continue,
            };
            let h = loop {
                let cand: Vec<Q> = (0..prog.m())
                    .map(|_| Q::ratio(rng.gen_range(0..=4), rng.gen_range(1..=2)))
                    .collect();
                if dual_hrep.contains(&cand) {
                    break cand;
                }
            };
            weak_checks += 1;
            let lhs = prog.objective.eval(&x).expect("full domain");
            let rhs = dual_function(&prog, &h).expect("h in the dual cone");
            if lhs < rhs {
                fail!(out, "instance {i}: φ(x) < L'(h) for feasible pair");
                instance_ok = false;
                break;
            }
        }
        if instance_ok {
            out.passed += 1;
        }
    }
    out
}

fn alt_systems_suite(seed: u64, n: usize, dims: usize) -> SuiteOutcome {
    let arbitrary = (2 * n) / 3;
    let mut rng = suite_rng(seed, 7);
    let mut out = outcome("alt-systems", n + arbitrary);
    for i in 0..n {
        let mut prog = slater_program(&mut rng, dims);
        // Shift the objective so (IP) solvability varies across instances.
        let shift = rat(&mut rng, 3);
        prog.objective = ConvexExpr::sum(
            prog.objective.clone(),
            ConvexExpr::constant(prog.dim(), shift),
        )
        .expect("full domain");
        match alternative_systems(&prog) {
            Ok(alt) => {
                if !alt.slater {
                    fail!(out, "instance {i}: generator lost Slater");
                } else if alt.ip_solvable == alt.id_solvable {
                    fail!(
                        out,
                        "instance {i}: expected exactly one solvable system (ip={}, id={})",
                        alt.ip_solvable,
                        alt.id_solvable
                    );
                } else {
                    // Validate whichever witness exists.
                    let witness_ok = if alt.ip_solvable {
                        alt.ip_witness
                            .as_ref()
                            .map(|x| {
                                prog.objective.eval(x).expect("full dom") < ExtReal::zero()
                                    && prog.feasible_set().expect("dims").contains(x)
                            })
                            .unwrap_or(false)
                    } else {
                        alt.id_witness
                            .as_ref()
                            .map(|h| {
                                dual_function(&prog, h).expect("h in C'") >= ExtReal::zero()
                            })
                            .unwrap_or(false)
                    };
                    if witness_ok {
                        out.passed += 1;
                    } else {
                        fail!(out, "instance {i}: invalid witness");
                    }
                }
            }
            Err(e) => fail!(out, "instance {i}: {e}"),
        }
    }
    for i in 0..arbitrary {
        // No Slater guarantee: random shifted constraints.
        let n_dim = 1 + i % dims.clamp(1, 3);
        let m = 1 + i % 2;
        let phi = max_affine(&mut rng, n_dim, 2);
        let psis: Vec<ConvexExpr<Q>> = (0..m).map(|_| max_affine(&mut rng, n_dim, 2)).collect();
        let prog = ConeProgram::new(
            phi,
            ConstraintMap::Separate(psis),
            solid_box(&mut rng, n_dim),
        )
        .expect("dims consistent");
        match alternative_systems(&prog) {
            Ok(alt) => {
                if alt.ip_solvable && alt.id_solvable {
                    fail!(out, "arbitrary instance {i}: both systems solvable");
                } else {
                    out.passed += 1;
                }
            }
            Err(e) => fail!(out, "arbitrary instance {i}: {e}"),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 8: coderivative calculus

fn solid_graph(rng: &mut ChaCha8Rng, n_in: usize, n_out: usize) -> SetValuedMap<Q> {
    SetValuedMap::new(n_in, n_out, solid_polytope(rng, n_in + n_out)).expect("dims")
}

fn graph_vertex(rng: &mut ChaCha8Rng, map: &SetValuedMap<Q>) -> Option<(Vec<Q>, Vec<Q>)> {
    let v = vrep(map.graph()).ok()?;
    if v.points.is_empty() {
        return None;
    }
    let idx = rng.gen_range(0..v.points.len());
    let p = &v.points[idx];
    Some((p[..map.n_in()].to_vec(), p[map.n_in()..].to_vec()))
}

fn coderivative_suite(seed: u64, n: usize) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 8);
    let controls = n / 4;
    let mut out = outcome("coderivative", 4 * n + 4 * controls);

    // Chain rule.
    for i in 0..n {
        let ny = 1 + i % 2;
        let g = solid_graph(&mut rng, 1, ny);
        let h = solid_graph(&mut rng, ny, 1);
        let composed = match g.compose(&h) {
            Ok(c) => c,
            Err(e) => {
                fail!(out, "chain {i}: compose failed: {e}");
                continue;
            }
        };
        let Some((a, c)) = graph_vertex(&mut rng, &composed) else {
            fail!(out, "chain {i}: empty composition");
            continue;
        };
        let s = point(&mut rng, 1, 2);
        match chain_rule_check(&g, &h, &a, &c, &s) {
            Ok(r) => {
                if !r.qualified {
                    fail!(out, "chain {i}: generator lost (QCCR)");
                } else if !r.equal {
                    fail!(out, "chain {i}: equality failed");
                } else {
                    out.passed += 1;
                }
            }
            Err(e) => fail!(out, "chain {i}: {e}"),
        }
    }
    // Unqualified chain controls: the middle space is pinned to a point.
    for i in 0..controls {
        let pinned = SetValuedMap::new(
            1,
            1,
            solid_polytope(&mut rng, 2)
                .with_eq(vec![Q::ratio(0, 1), Q::ratio(1, 1)], Q::ratio(0, 1))
                .expect("dims"),
        )
        .expect("dims");
        let h = solid_graph(&mut rng, 1, 1);
        let composed = match pinned.compose(&h) {
            Ok(c) => c,
            Err(e) => {
                fail!(out, "chain control {i}: {e}");
                continue;
            }
        };
        let Some((a, c)) = graph_vertex(&mut rng, &composed) else {
            fail!(out, "chain control {i}: empty composition");
            continue;
        };
        match chain_rule_check(&pinned, &h, &a, &c, &point(&mut rng, 1, 2)) {
            Ok(r) => {
                if r.qualified {
                    fail!(out, "chain control {i}: expected unqualified");
                } else if !r.inclusion {
                    fail!(out, "chain control {i}: inclusion failed");
                } else {
                    out.passed += 1;
                }
            }
            Err(e) => fail!(out, "chain control {i}: {e}"),
        }
    }

    // Preimage formula.
    for i in 0..n {
        let ny = 1 + i % 2;
        let g = solid_graph(&mut rng, 1, ny);
        let s = solid_polytope(&mut rng, ny);
        let restricted = match g.graph().intersect(
            &s.embed(1 + ny, &(1..1 + ny).collect::<Vec<_>>()).expect("dims"),
        ) {
            Ok(r) if !r.is_empty() => r,
            _ => {
                // 0 lies in both interiors, so this is unreachable; count
                // defensively.
                fail!(out, "preimage {i}: empty restriction");
                continue;
            }
        };
        let rv = vrep(&restricted).expect("vrep");
        let p = &rv.points[rng.gen_range(0..rv.points.len())];
        let (u, v) = (p[..1].to_vec(), p[1..].to_vec());
        match preimage_normal_cone(&g, &s, &u, &v) {
            Ok(r) => {
                if !r.qualified {
                    fail!(out, "preimage {i}: generator lost the qualification");
                } else if !r.equal {
                    fail!(out, "preimage {i}: equality failed");
                } else {
                    out.passed += 1;
                }
            }
            Err(e) => fail!(out, "preimage {i}: {e}"),
        }
    }
    // Unqualified preimage controls: S is a single point.
    for i in 0..controls {
        let g = solid_graph(&mut rng, 1, 1);
        let s = Polyhedron::point(&[Q::ratio(0, 1)]);
        match preimage_normal_cone(&g, &s, &[Q::ratio(0, 1)], &[Q::ratio(0, 1)]) {
            Ok(r) => {
                if r.qualified {
                    fail!(out, "preimage control {i}: expected unqualified");
                } else if !r.inclusion {
                    fail!(out, "preimage control {i}: inclusion failed");
                } else {
                    out.passed += 1;
                }
            }
            Err(e) => fail!(out, "preimage control {i}: {e}"),
        }
    }

    // Constraint systems.
    for i in 0..n {
        let lambda = solid_polytope(&mut rng, 2);
        // Surjective affine φ into ℝ.
        let mut map;
        loop {
            map = linear_map(&mut rng, 1, 2);
            if !linalg::is_zero(map.row(0)) {
                break;
            }
        }
        let s = solid_box(&mut rng, 1);
        let zv = vrep(&lambda).expect("vrep");
        // A vertex of Λ ∩ φ⁻¹(S); build the graph first to stay feasible.
        let offset = vec![Q::ratio(0, 1)];
        let pull = Polyhedron::from_rows(
            2,
            s.ineqs()
                .iter()
                .map(|c| (map.adjoint().apply(&c.normal).expect("dims"), c.offset.clone()))
                .collect(),
            vec![],
        )
        .expect("dims");
        let graph = lambda.intersect(&pull).expect("dims");
        if graph.is_empty() {
            fail!(out, "constraint {i}: empty graph");
            continue;
        }
        let gv = vrep(&graph).expect("vrep");
        let p = &gv.points[rng.gen_range(0..gv.points.len())];
        let _ = zv;
        let (u, v) = (p[..1].to_vec(), p[1..].to_vec());
        match constraint_system_coderivative(
            &lambda,
            &map,
            &offset,
            &s,
            1,
            &u,
            &v,
            &point(&mut rng, 1, 2),
        ) {
            Ok(r) => {
                if !r.qualified {
                    fail!(out, "constraint {i}: generator lost the qualification");
                } else if !r.equal {
                    fail!(out, "constraint {i}: equality failed");
                } else {
                    out.passed += 1;
                }
            }
            Err(e) => fail!(out, "constraint {i}: {e}"),
        }
    }
    // Unqualified constraint controls: S = {0} has empty core.
    for i in 0..controls {
        let lambda = solid_polytope(&mut rng, 2);
        let map = LinearMap::zero(1, 2);
        let s = Polyhedron::point(&[Q::ratio(0, 1)]);
        let gv = vrep(&lambda).expect("vrep");
        let p = &gv.points[rng.gen_range(0..gv.points.len())];
        match constraint_system_coderivative(
            &lambda,
            &map,
            &[Q::ratio(0, 1)],
            &s,
            1,
            &p[..1].to_vec(),
            &p[1..].to_vec(),
            &point(&mut rng, 1, 2),
        ) {
            Ok(r) => {
                if r.qualified {
                    fail!(out, "constraint control {i}: expected unqualified");
                } else if !r.inclusion {
                    fail!(out, "constraint control {i}: inclusion failed");
                } else {
                    out.passed += 1;
                }
            }
            Err(e) => fail!(out, "constraint control {i}: {e}"),
        }
    }

    // Intersection rule.
    for i in 0..n {
        let g1 = solid_graph(&mut rng, 1, 1);
        let g2 = solid_graph(&mut rng, 1, 1);
        let combined = match g1.intersect_with(&g2) {
            Ok(c) => c,
            Err(e) => {
                fail!(out, "intersection {i}: {e}");
                continue;
            }
        };
        let Some((u, v)) = graph_vertex(&mut rng, &combined) else {
            fail!(out, "intersection {i}: empty intersection");
            continue;
        };
        let gdir = point(&mut rng, 1, 2);
        match intersection_rule_check(&g1, &g2, &u, &v, &gdir) {
            Ok(r) => {
                if !r.qualified {
                    fail!(out, "intersection {i}: generator lost the qualification");
                } else if !r.splits_inside {
                    fail!(out, "intersection {i}: sampled split escaped the lhs");
                } else if !r.decomposable {
                    fail!(out, "intersection {i}: a generator failed to decompose");
                } else {
                    out.passed += 1;
                }
            }
            Err(e) => fail!(out, "intersection {i}: {e}"),
        }
    }
    // Unqualified intersection controls: graphs touching along a line.
    for i in 0..controls {
        let g1 = SetValuedMap::new(
            1,
            1,
            Polyhedron::halfspace(vec![Q::ratio(1, 1), Q::ratio(-1, 1)], Q::ratio(0, 1)),
        )
        .expect("dims");
        let g2 = SetValuedMap::new(
            1,
            1,
            Polyhedron::halfspace(vec![Q::ratio(-1, 1), Q::ratio(1, 1)], Q::ratio(0, 1)),
        )
        .expect("dims");
        let u = vec![rat(&mut rng, 2)];
        let v = u.clone();
        match intersection_rule_check(&g1, &g2, &u, &v, &point(&mut rng, 1, 2)) {
            Ok(r) => {
                if r.qualified {
                    fail!(out, "intersection control {i}: expected unqualified");
                } else if !r.splits_inside {
                    fail!(out, "intersection control {i}: split containment failed");
                } else {
                    out.passed += 1;
                }
            }
            Err(e) => fail!(out, "intersection control {i}: {e}"),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 9: oracle integrity

/// Convex dyadic samples: every value is exactly representable, so discrete
/// convexity survives the float conversion.
fn dyadic_convex_samples(rng: &mut ChaCha8Rng, max_len: usize) -> SampledFunction {
    let count = rng.gen_range(16..=max_len);
    let h = Q::ratio(1, 64);
    let lo = Q::ratio(-(count as i64) / 2, 64);
    let grid = GridSpec::line(lo, h, count).expect("valid grid");
    let pieces: Vec<(Vec<Q>, Q)> = (0..rng.gen_range(1..=4))
        .map(|_| {
            (
                vec![Q::ratio(rng.gen_range(-256..=256), 64)],
                Q::ratio(rng.gen_range(-512..=512), 64),
            )
        })
        .collect();
    let mut f = ConvexExpr::max_affine(pieces).expect("nonempty");
    if rng.gen_bool(0.4) {
        // Carve a dyadic window to exercise the +∞ sentinels.
        let a = Q::ratio(rng.gen_range(-20..=-1), 64);
        let b = Q::ratio(rng.gen_range(1..=20), 64);
        let window = Polyhedron::box_(&[a], &[b]).expect("dims");
        f = ConvexExpr::sum(f, ConvexExpr::indicator(window).expect("nonempty"))
            .expect("window overlaps");
    }
    sample(&f, &grid).expect("finite samples")
}

fn oracle_suite(seed: u64, n: usize) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 9);
    let bicon = 2 * n;
    let mut out = outcome("oracle", 2 * n + bicon);

    // Fast ≡ brute, bit for bit, N up to 4096.
    for i in 0..n {
        let samples = dyadic_convex_samples(&mut rng, 4096);
        let m = rng.gen_range(16..=4096usize);
        let dual = GridSpec::line(
            Q::ratio(-(m as i64) / 2, 128),
            Q::ratio(1, 128),
            m,
        )
        .expect("valid grid");
        let brute = match lf_transform_brute(&samples, &dual) {
            Ok(b) => b,
            Err(e) => {
                fail!(out, "transform {i}: brute failed: {e}");
                continue;
            }
        };
        match lf_transform_fast(&samples, &dual) {
            Ok(fast) => {
                let identical = brute
                    .values
                    .iter()
                    .zip(&fast.values)
                    .all(|(a, b)| a.to_bits() == b.to_bits());
                if identical {
                    out.passed += 1;
                } else {
                    fail!(out, "transform {i}: fast and brute transforms disagree");
                }
            }
            Err(e) => fail!(out, "transform {i}: fast failed: {e}"),
        }
    }

    // Exact PL conjugate vs the grid oracle within the spacing bound.
    for i in 0..n {
        let mut rngc = suite_rng(seed ^ 0xc0ffee, i as u64);
        let pieces: Vec<(Vec<Q>, Q)> = (0..rngc.gen_range(1..=3))
            .map(|_| {
                (
                    vec![Q::ratio(rngc.gen_range(-4..=4), 1)],
                    Q::ratio(rngc.gen_range(-8..=8), 4),
                )
            })
            .collect();
        let dom = Polyhedron::box_(&[Q::ratio(-4, 1)], &[Q::ratio(4, 1)]).expect("dims");
        let f = ConvexExpr::sum(
            ConvexExpr::max_affine(pieces).expect("nonempty"),
            ConvexExpr::indicator(dom).expect("nonempty"),
        )
        .expect("overlap");
        let exact = conjugate(&f).expect("proper");
        let spacing = Q::ratio(1, 64);
        let grid = GridSpec::symmetric(Q::ratio(4, 1), spacing.clone()).expect("valid");
        let samples = sample(&f, &grid).expect("finite");
        let dual = GridSpec::symmetric(Q::ratio(4, 1), Q::ratio(1, 16)).expect("valid");
        let brute = lf_transform_brute(&samples, &dual).expect("finite");
        let bound = 2.0 * spacing.to_f64_lossy() * 4.0;
        let mut ok = true;
        for (j, s) in dual.axis(0).iter().enumerate() {
            if let ExtReal::Finite(v) = exact.eval(&[s.clone()]).expect("dims") {
                let diff = (v.to_f64_lossy() - brute.values[j]).abs();
                if diff > bound {
                    fail!(out, "conjugate oracle {i}: diff {diff} exceeds bound {bound}");
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.passed += 1;
        }
    }

    // Biconjugation f** = f.
    for i in 0..bicon {
        let dim = 1 + i % 2;
        let f = pl_boxed(&mut rng, dim);
        let ff = conjugate(&conjugate(&f).expect("proper")).expect("proper");
        match ff.epigraph().set_eq(&f.epigraph()) {
            Ok(true) => out.passed += 1,
            Ok(false) => fail!(out, "biconjugation {i}: f** differs from f"),
            Err(e) => fail!(out, "biconjugation {i}: {e}"),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 10: geometry kernel

fn geometry_suite(seed: u64, n: usize, dims: usize) -> SuiteOutcome {
    let mut rng = suite_rng(seed, 10);
    let mut out = outcome("geometry", n);
    let quarter = n / 4;
    for i in 0..n {
        let dim = 1 + rng.gen_range(0..dims.clamp(1, 3));
        let check = i / quarter.max(1);
        let ok = match check {
            // Normal-cone intersection rule at a vertex.
            0 => {
                let a = solid_polytope(&mut rng, dim);
                let b = solid_polytope(&mut rng, dim);
                let inter = a.intersect(&b).expect("dims");
                let v = vrep(&inter).expect("vrep");
                let x = &v.points[rng.gen_range(0..v.points.len())];
                let lhs = normal_cone(&inter, x).expect("member");
                let rhs = normal_cone(&a, x)
                    .expect("member")
                    .minkowski_sum(&normal_cone(&b, x).expect("member"))
                    .expect("dims");
                lhs.hrep().set_eq(&rhs.hrep()).expect("dims")
            }
            // N = {0} exactly at core points.
            1 => {
                let p = solid_polytope(&mut rng, dim);
                let x = p.core_point().expect("full-dimensional");
                normal_cone(&p, &x).expect("member").is_zero_cone()
            }
            // Dual-cone involution.
            2 => {
                let gens: Vec<Vec<Q>> = (0..rng.gen_range(1..=dim + 1))
                    .map(|_| point(&mut rng, dim, 3))
                    .collect();
                let c = Cone::from_generators(dim, gens).expect("dims");
                c.dual().dual().hrep().set_eq(&c.hrep()).expect("dims")
            }
            // LP self-duality.
            _ => {
                let p = solid_polytope(&mut rng, dim);
                let obj = point(&mut rng, dim, 4);
                let (v, _) = solve_lp(&obj, Sense::Max, &p)
                    .expect("dims")
                    .optimal()
                    .expect("compact");
                let (dobj, dsense, dp) = dual_of(&obj, Sense::Max, &p);
                let (dv, _) = solve_lp(&dobj, dsense, &dp)
                    .expect("dims")
                    .optimal()
                    .expect("dual bounded");
                v == dv
            }
        };
        if ok {
            out.passed += 1;
        } else {
            fail!(out, "geometry check {i} failed");
        }
    }
    out
}

// ---------------------------------------------------------------------------

/// Used by the `kkt` CLI suite path and tests: the direct subdifferential
/// Fermat check at a point (exposed for spot verification).
pub fn fermat_spot_check(f: &ConvexExpr<Q>, x: &[Q]) -> bool {
    subdifferential(f, x)
        .map(|d| d.contains(&vec![Q::ratio(0, 1); x.len()]))
        .unwrap_or(false)
}
