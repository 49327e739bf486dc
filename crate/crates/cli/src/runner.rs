//! Executes parsed problems and renders deterministic reports and CSV.

use duality_core::coderivative::coderivative;
use duality_core::conjugate::{conjugate, conjugate_via_epigraph};
use duality_core::expr::ConvexExpr;
use duality_core::fenchel::fenchel_report;
use duality_core::lagrange::{
    dual_function, kkt_check, kkt_find, lagrangian, slater_check, strong_duality_report,
    KktOutcome, Slater,
};
use duality_core::poly::Polyhedron;
use duality_core::report::{DualityReport, ExtReal};
use duality_core::scalar::Scalar;
use duality_core::Q;

use crate::problem::{fmt_expr, Payload, ProblemFile};
use crate::syntax::format_rational;

/// One CSV record in the documented column order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvRow {
    pub instance_id: String,
    pub p: String,
    pub d: String,
    pub gap: String,
    pub qualified: String,
    pub slater: String,
    pub attained: String,
}

pub const CSV_HEADER: &str = "instance_id,p,d,gap,qualified,slater,attained";

pub fn csv_string(rows: &[CsvRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.instance_id, r.p, r.d, r.gap, r.qualified, r.slater, r.attained
        ));
    }
    out
}

fn fmt_ext(v: &ExtReal<Q>) -> String {
    match v {
        ExtReal::NegInf => "-inf".into(),
        ExtReal::Finite(x) => format_rational(x),
        ExtReal::PosInf => "inf".into(),
    }
}

fn fmt_vec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(" "))
}

fn fmt_poly_rows(p: &Polyhedron<Q>) -> String {
    if p.is_marked_empty() {
        return "  (empty)\n".into();
    }
    let mut out = String::new();
    for c in p.ineqs() {
        out.push_str(&format!(
            "  {} . x <= {}\n",
            fmt_vec(&c.normal),
            format_rational(&c.offset)
        ));
    }
    for c in p.eqs() {
        out.push_str(&format!(
            "  {} . x == {}\n",
            fmt_vec(&c.normal),
            format_rational(&c.offset)
        ));
    }
    if out.is_empty() {
        out.push_str("  (whole space)\n");
    }
    out
}

pub fn report_row(id: &str, r: &DualityReport<Q>) -> CsvRow {
    CsvRow {
        instance_id: id.to_string(),
        p: fmt_ext(&r.primal_value),
        d: fmt_ext(&r.dual_value),
        gap: r.gap.as_ref().map(format_rational).unwrap_or_else(|| "-".into()),
        qualified: r.qualified.to_string(),
        slater: r.slater.map(|s| s.to_string()).unwrap_or_else(|| "-".into()),
        attained: r.attained.to_string(),
    }
}

fn duality_text(title: &str, r: &DualityReport<Q>) -> String {
    let mut out = String::new();
    out.push_str(&format!("{title}\n"));
    out.push_str(&format!("p = {}\n", fmt_ext(&r.primal_value)));
    out.push_str(&format!("d = {}\n", fmt_ext(&r.dual_value)));
    match &r.gap {
        Some(g) => out.push_str(&format!("gap = {}\n", format_rational(g))),
        None => out.push_str("gap = -\n"),
    }
    if let Some(x) = &r.primal_opt {
        out.push_str(&format!("primal optimizer = {}\n", fmt_vec(x)));
    }
    if let Some(g) = &r.dual_opt {
        out.push_str(&format!("dual optimizer = {}\n", fmt_vec(g)));
    }
    for (name, held) in &r.qualifications {
        out.push_str(&format!("qualification [{name}] = {held}\n"));
    }
    out.push_str(&format!("qualified = {}\n", r.qualified));
    if let Some(s) = r.slater {
        out.push_str(&format!("slater = {s}\n"));
    }
    out.push_str(&format!("dual attained = {}\n", r.attained));
    out
}

pub struct RunOutput {
    pub text: String,
    pub rows: Vec<CsvRow>,
    /// `Some(false)` triggers exit code 2 under `--require-qualified`.
    pub qualified: Option<bool>,
}

pub fn run_fenchel(file: &ProblemFile) -> Result<RunOutput, duality_core::Error> {
    let Payload::Fenchel(prob) = &file.payload else {
        return Err(duality_core::Error::Invalid("fenchel command needs a fenchel file"));
    };
    let r = fenchel_report(prob)?;
    Ok(RunOutput {
        text: duality_text("Fenchel duality report", &r),
        rows: vec![report_row("0", &r)],
        qualified: Some(r.qualified),
    })
}

pub fn run_conjugate(file: &ProblemFile) -> Result<RunOutput, duality_core::Error> {
    let Payload::Conjugate { f, at } = &file.payload else {
        return Err(duality_core::Error::Invalid("conjugate command needs a conjugate file"));
    };
    let star = conjugate(f)?;
    let mut text = String::from("Fenchel conjugate\n");
    text.push_str(&format!("f* = {}\n", fmt_expr(&star)));
    text.push_str("dom f*:\n");
    text.push_str(&fmt_poly_rows(&star.domain()));
    for s in at {
        let direct = star.eval(s)?;
        let via_epi = conjugate_via_epigraph(f, s)?;
        debug_assert_eq!(direct, via_epi);
        text.push_str(&format!(
            "f*{} = {} (epigraph route {})\n",
            fmt_vec(s),
            fmt_ext(&direct),
            fmt_ext(&via_epi)
        ));
    }
    Ok(RunOutput { text, rows: vec![], qualified: None })
}

pub fn run_lagrange(file: &ProblemFile) -> Result<RunOutput, duality_core::Error> {
    let Payload::Lagrange(payload) = &file.payload else {
        return Err(duality_core::Error::Invalid("lagrange command needs a lagrange file"));
    };
    let r = strong_duality_report(&payload.program)?;
    let mut text = duality_text("Lagrangian duality report", &r);
    match slater_check(&payload.program)? {
        Slater::Found(x) => text.push_str(&format!("slater point = {}\n", fmt_vec(&x))),
        Slater::Absent(reason) => text.push_str(&format!("slater absent: {reason}\n")),
    }
    if let (Some(h), ExtReal::Finite(_)) = (&r.dual_opt, &r.dual_value) {
        let check = dual_function(&payload.program, h)?;
        text.push_str(&format!("L'(dual optimizer) = {}\n", fmt_ext(&check)));
    }
    Ok(RunOutput {
        text,
        rows: vec![report_row("0", &r)],
        qualified: Some(r.qualified),
    })
}

pub fn run_kkt(file: &ProblemFile) -> Result<RunOutput, duality_core::Error> {
    let Payload::Lagrange(payload) = &file.payload else {
        return Err(duality_core::Error::Invalid("kkt command needs a lagrange file"));
    };
    let Some(ubar) = &payload.ubar else {
        return Err(duality_core::Error::Invalid("kkt command needs `ubar` in the file"));
    };
    let prog = &payload.program;
    let mut text = String::from("KKT report\n");
    text.push_str(&format!("ubar = {}\n", fmt_vec(ubar)));
    let qualified;
    match &payload.gamma {
        Some(gamma) => {
            let ok = kkt_check(prog, ubar, gamma)?;
            qualified = true;
            text.push_str(&format!("gamma = {}\n", fmt_vec(gamma)));
            text.push_str(&format!("kkt holds = {ok}\n"));
            text.push_str(&slackness_table(prog, ubar, gamma)?);
        }
        None => match kkt_find(prog, ubar)? {
            KktOutcome::Multipliers(gamma) => {
                qualified = true;
                text.push_str(&format!("gamma = {}\n", fmt_vec(&gamma)));
                text.push_str("kkt holds = true\n");
                text.push_str(&slackness_table(prog, ubar, &gamma)?);
            }
            KktOutcome::NotOptimal { better } => {
                qualified = true;
                text.push_str("kkt holds = false\n");
                text.push_str(&format!("improving feasible point = {}\n", fmt_vec(&better)));
                let worse = prog.objective.eval(ubar)?;
                let improved = prog.objective.eval(&better)?;
                text.push_str(&format!(
                    "objective {} -> {}\n",
                    fmt_ext(&worse),
                    fmt_ext(&improved)
                ));
            }
        },
    }
    text.push_str(&format!(
        "L(ubar, 0) = {}\n",
        fmt_ext(&lagrangian(prog, ubar, &vec![Q::ratio(0, 1); prog.m()])?)
    ));
    Ok(RunOutput { text, rows: vec![], qualified: Some(qualified) })
}

fn slackness_table(
    prog: &duality_core::lagrange::ConeProgram<Q>,
    ubar: &[Q],
    gamma: &[Q],
) -> Result<String, duality_core::Error> {
    let mut out = String::from("complementary slackness:\n");
    if let Some(values) = prog.psi_values(ubar)? {
        for (i, (g, v)) in gamma.iter().zip(&values).enumerate() {
            let product = g.clone() * v.clone();
            out.push_str(&format!(
                "  i={} gamma={} psi={} product={}\n",
                i + 1,
                format_rational(g),
                format_rational(v),
                format_rational(&product)
            ));
        }
    }
    Ok(out)
}

pub fn run_coderivative(file: &ProblemFile) -> Result<RunOutput, duality_core::Error> {
    let Payload::Coderivative(p) = &file.payload else {
        return Err(duality_core::Error::Invalid(
            "coderivative command needs a coderivative file",
        ));
    };
    let value = coderivative(&p.map, &p.at_input, &p.at_output, &p.direction)?;
    let mut text = String::from("Coderivative\n");
    text.push_str(&format!(
        "D*G({}, {})({}) =\n",
        fmt_vec(&p.at_input),
        fmt_vec(&p.at_output),
        fmt_vec(&p.direction)
    ));
    if value.set.is_empty() {
        text.push_str("  (empty)\n");
    } else {
        text.push_str(&fmt_poly_rows(&value.set));
    }
    Ok(RunOutput { text, rows: vec![], qualified: None })
}

/// Sanity helper used by tests: an expression's value at a point.
pub fn eval_expr(f: &ConvexExpr<Q>, x: &[Q]) -> Result<ExtReal<Q>, duality_core::Error> {
    f.eval(x)
}
