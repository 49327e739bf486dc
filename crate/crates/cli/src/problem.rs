//! Problem-file model: parsing, validation and canonical printing.
//!
//! A problem file is a sequence of `key value` pairs in the s-expression
//! syntax of [`crate::syntax`]; `version` and `kind` come first. Files
//! round-trip: parsing the canonical print of a parsed file yields an
//! identical structure.

use duality_core::cone::Cone;
use duality_core::expr::ConvexExpr;
use duality_core::fenchel::FenchelProblem;
use duality_core::lagrange::{ConeProgram, ConstraintMap};
use duality_core::linalg::LinearMap;
use duality_core::poly::Polyhedron;
use duality_core::coderivative::SetValuedMap;
use duality_core::Q;

use crate::syntax::{format_rational, parse_rational, read_all, Diagnostic, Pos, Sexp};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    Fenchel,
    Conjugate,
    Lagrange,
    Coderivative,
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::Fenchel => "fenchel",
            ProblemKind::Conjugate => "conjugate",
            ProblemKind::Lagrange => "lagrange",
            ProblemKind::Coderivative => "coderivative",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangePayload {
    pub program: ConeProgram<Q>,
    pub ubar: Option<Vec<Q>>,
    pub gamma: Option<Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoderivativePayload {
    pub map: SetValuedMap<Q>,
    pub at_input: Vec<Q>,
    pub at_output: Vec<Q>,
    pub direction: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Fenchel(FenchelProblem<Q>),
    Conjugate { f: ConvexExpr<Q>, at: Vec<Vec<Q>> },
    Lagrange(LagrangePayload),
    Coderivative(CoderivativePayload),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub version: u64,
    pub kind: ProblemKind,
    pub payload: Payload,
}

fn err_at(pos: Pos, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(pos, msg)
}

fn core_err(pos: Pos, e: duality_core::Error) -> Diagnostic {
    Diagnostic::new(pos, e.to_string())
}

pub fn parse_vector(form: &Sexp) -> Result<Vec<Q>, Diagnostic> {
    form.list()?.iter().map(parse_rational).collect()
}

pub fn parse_matrix(form: &Sexp) -> Result<LinearMap<Q>, Diagnostic> {
    let items = form.tagged("matrix")?;
    if items.len() < 2 {
        return Err(err_at(form.pos(), "matrix needs rows, cols and entries"));
    }
    let rows: usize = items[0]
        .atom()?
        .parse()
        .map_err(|_| err_at(items[0].pos(), "malformed row count"))?;
    let cols: usize = items[1]
        .atom()?
        .parse()
        .map_err(|_| err_at(items[1].pos(), "malformed column count"))?;
    let entries: Vec<Q> = items[2..]
        .iter()
        .map(parse_rational)
        .collect::<Result<_, _>>()?;
    if entries.len() != rows * cols {
        return Err(err_at(
            form.pos(),
            format!("matrix needs {} entries, found {}", rows * cols, entries.len()),
        ));
    }
    LinearMap::new(rows, cols, entries).map_err(|e| core_err(form.pos(), e))
}

pub fn parse_polyhedron(form: &Sexp) -> Result<Polyhedron<Q>, Diagnostic> {
    let items = form.tagged("poly")?;
    let Some((dim_form, rows)) = items.split_first() else {
        return Err(err_at(form.pos(), "poly needs a dimension"));
    };
    let dim: usize = dim_form
        .atom()?
        .parse()
        .map_err(|_| err_at(dim_form.pos(), "malformed dimension"))?;
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for row in rows {
        let (kind, body) = match row.head()? {
            "le" => (true, row.tagged("le")?),
            "eq" => (false, row.tagged("eq")?),
            other => {
                return Err(err_at(row.pos(), format!("expected `le` or `eq` row, found `{other}`")))
            }
        };
        if body.len() != dim + 1 {
            return Err(err_at(
                row.pos(),
                format!("row needs {dim} coefficients plus an offset"),
            ));
        }
        let mut values: Vec<Q> = body.iter().map(parse_rational).collect::<Result<_, _>>()?;
        let offset = values.pop().expect("length checked");
        if kind {
            ineqs.push((values, offset));
        } else {
            eqs.push((values, offset));
        }
    }
    Polyhedron::from_rows(dim, ineqs, eqs).map_err(|e| core_err(form.pos(), e))
}

pub fn parse_cone(form: &Sexp) -> Result<Cone<Q>, Diagnostic> {
    match form.head()? {
        "orthant" => {
            let items = form.tagged("orthant")?;
            let dim: usize = items
                .first()
                .ok_or_else(|| err_at(form.pos(), "orthant needs a dimension"))?
                .atom()?
                .parse()
                .map_err(|_| err_at(form.pos(), "malformed dimension"))?;
            Ok(Cone::orthant(dim))
        }
        "cone" => {
            let items = form.tagged("cone")?;
            let Some((dim_form, gens)) = items.split_first() else {
                return Err(err_at(form.pos(), "cone needs a dimension"));
            };
            let dim: usize = dim_form
                .atom()?
                .parse()
                .map_err(|_| err_at(dim_form.pos(), "malformed dimension"))?;
            let generators = gens
                .iter()
                .map(parse_vector)
                .collect::<Result<Vec<_>, _>>()?;
            Cone::from_generators(dim, generators).map_err(|e| core_err(form.pos(), e))
        }
        other => Err(err_at(form.pos(), format!("expected a cone form, found `{other}`"))),
    }
}

pub fn parse_expr(form: &Sexp) -> Result<ConvexExpr<Q>, Diagnostic> {
    match form.head()? {
        "affine" => {
            let items = form.tagged("affine")?;
            if items.len() != 2 {
                return Err(err_at(form.pos(), "affine needs coefficients and a constant"));
            }
            let coef = parse_vector(&items[0])?;
            let constant = parse_rational(&items[1])?;
            Ok(ConvexExpr::affine(coef, constant))
        }
        "maxaffine" => {
            let items = form.tagged("maxaffine")?;
            let mut pieces = Vec::new();
            for piece in items {
                let body = piece.tagged("piece")?;
                if body.is_empty() {
                    return Err(err_at(piece.pos(), "piece needs slopes and an intercept"));
                }
                let mut values: Vec<Q> =
                    body.iter().map(parse_rational).collect::<Result<_, _>>()?;
                let intercept = values.pop().expect("nonempty");
                pieces.push((values, intercept));
            }
            ConvexExpr::max_affine(pieces).map_err(|e| core_err(form.pos(), e))
        }
        "indicator" => {
            let items = form.tagged("indicator")?;
            let set = parse_polyhedron(
                items
                    .first()
                    .ok_or_else(|| err_at(form.pos(), "indicator needs a polyhedron"))?,
            )?;
            ConvexExpr::indicator(set).map_err(|e| core_err(form.pos(), e))
        }
        "sum" => {
            let items = form.tagged("sum")?;
            if items.len() != 2 {
                return Err(err_at(form.pos(), "sum takes exactly two expressions"));
            }
            let left = parse_expr(&items[0])?;
            let right = parse_expr(&items[1])?;
            ConvexExpr::sum(left, right).map_err(|e| core_err(form.pos(), e))
        }
        "max" => {
            let items = form.tagged("max")?;
            let children = items.iter().map(parse_expr).collect::<Result<Vec<_>, _>>()?;
            ConvexExpr::max_of(children).map_err(|e| core_err(form.pos(), e))
        }
        "compose" => {
            let items = form.tagged("compose")?;
            if items.len() != 2 {
                return Err(err_at(form.pos(), "compose takes a matrix and an expression"));
            }
            let map = parse_matrix(&items[0])?;
            let inner = parse_expr(&items[1])?;
            ConvexExpr::precompose(inner, map).map_err(|e| core_err(form.pos(), e))
        }
        "scale" => {
            let items = form.tagged("scale")?;
            if items.len() != 2 {
                return Err(err_at(form.pos(), "scale takes a factor and an expression"));
            }
            let factor = parse_rational(&items[0])?;
            let inner = parse_expr(&items[1])?;
            ConvexExpr::scale(factor, inner).map_err(|e| core_err(form.pos(), e))
        }
        other => Err(err_at(form.pos(), format!("unknown expression head `{other}`"))),
    }
}

struct Fields<'a> {
    pairs: Vec<(&'a str, &'a Sexp, Pos)>,
}

impl<'a> Fields<'a> {
    fn take_all(&mut self, key: &str) -> Vec<&'a Sexp> {
        let mut out = Vec::new();
        self.pairs.retain(|(k, v, _)| {
            if *k == key {
                out.push(*v);
                false
            } else {
                true
            }
        });
        out
    }

    fn take_one(&mut self, key: &str, whole: Pos) -> Result<&'a Sexp, Diagnostic> {
        let mut found = self.take_all(key);
        match found.len() {
            1 => Ok(found.remove(0)),
            0 => Err(err_at(whole, format!("missing `{key}`"))),
            _ => Err(err_at(whole, format!("duplicate `{key}`"))),
        }
    }

    fn take_opt(&mut self, key: &str, whole: Pos) -> Result<Option<&'a Sexp>, Diagnostic> {
        let mut found = self.take_all(key);
        match found.len() {
            0 => Ok(None),
            1 => Ok(Some(found.remove(0))),
            _ => Err(err_at(whole, format!("duplicate `{key}`"))),
        }
    }

    fn finish(self) -> Result<(), Diagnostic> {
        match self.pairs.first() {
            None => Ok(()),
            Some((k, _, p)) => Err(err_at(*p, format!("unknown field `{k}`"))),
        }
    }
}

/// Parses and validates a whole problem file.
pub fn parse_problem(text: &str) -> Result<ProblemFile, Diagnostic> {
    let forms = read_all(text)?;
    let whole = forms.first().map(Sexp::pos).unwrap_or(Pos { line: 1, col: 1 });
    if forms.len() % 2 != 0 {
        return Err(err_at(whole, "expected `key value` pairs"));
    }
    let mut pairs = Vec::new();
    for chunk in forms.chunks(2) {
        let key = chunk[0].atom()?;
        pairs.push((key, &chunk[1], chunk[0].pos()));
    }
    let mut fields = Fields { pairs };

    let version_form = fields.take_one("version", whole)?;
    let version: u64 = version_form
        .atom()?
        .parse()
        .map_err(|_| err_at(version_form.pos(), "malformed version"))?;
    if version != FORMAT_VERSION {
        return Err(err_at(
            version_form.pos(),
            format!("unsupported version {version}, expected {FORMAT_VERSION}"),
        ));
    }
    let kind_form = fields.take_one("kind", whole)?;
    let kind = match kind_form.atom()? {
        "fenchel" => ProblemKind::Fenchel,
        "conjugate" => ProblemKind::Conjugate,
        "lagrange" => ProblemKind::Lagrange,
        "coderivative" => ProblemKind::Coderivative,
        other => return Err(err_at(kind_form.pos(), format!("unknown kind `{other}`"))),
    };

    let payload = match kind {
        ProblemKind::Fenchel => {
            let phi = parse_expr(fields.take_one("phi", whole)?)?;
            let psi = parse_expr(fields.take_one("psi", whole)?)?;
            let a_form = fields.take_one("A", whole)?;
            let map = parse_matrix(a_form)?;
            let prob = FenchelProblem::new(phi, psi, map)
                .map_err(|e| core_err(a_form.pos(), e))?;
            Payload::Fenchel(prob)
        }
        ProblemKind::Conjugate => {
            let f = parse_expr(fields.take_one("f", whole)?)?;
            let mut at = Vec::new();
            for form in fields.take_all("at") {
                let v = parse_vector(form)?;
                if v.len() != f.dim() {
                    return Err(err_at(form.pos(), "evaluation point has the wrong dimension"));
                }
                at.push(v);
            }
            Payload::Conjugate { f, at }
        }
        ProblemKind::Lagrange => {
            let phi = parse_expr(fields.take_one("phi", whole)?)?;
            let lambda_form = fields.take_opt("lambda", whole)?;
            let lambda = match lambda_form {
                Some(form) => parse_polyhedron(form)?,
                None => Polyhedron::universe(phi.dim()),
            };
            let psis = fields.take_all("psi");
            let constraint = if psis.is_empty() {
                let w_form = fields.take_one("W", whole)?;
                let map = parse_matrix(w_form)?;
                let w0 = parse_vector(fields.take_one("w0", whole)?)?;
                let cone = parse_cone(fields.take_one("cone", whole)?)?;
                ConstraintMap::Affine { map, offset: w0, cone }
            } else {
                let parsed = psis
                    .into_iter()
                    .map(parse_expr)
                    .collect::<Result<Vec<_>, _>>()?;
                ConstraintMap::Separate(parsed)
            };
            let program = ConeProgram::new(phi, constraint, lambda)
                .map_err(|e| core_err(whole, e))?;
            let ubar = fields
                .take_opt("ubar", whole)?
                .map(parse_vector)
                .transpose()?;
            let gamma = fields
                .take_opt("gamma", whole)?
                .map(parse_vector)
                .transpose()?;
            if let Some(u) = &ubar {
                if u.len() != program.dim() {
                    return Err(err_at(whole, "ubar has the wrong dimension"));
                }
            }
            Payload::Lagrange(LagrangePayload { program, ubar, gamma })
        }
        ProblemKind::Coderivative => {
            let n_in: usize = fields
                .take_one("n_in", whole)?
                .atom()?
                .parse()
                .map_err(|_| err_at(whole, "malformed n_in"))?;
            let n_out: usize = fields
                .take_one("n_out", whole)?
                .atom()?
                .parse()
                .map_err(|_| err_at(whole, "malformed n_out"))?;
            let graph_form = fields.take_one("graph", whole)?;
            let graph = parse_polyhedron(graph_form)?;
            let map = SetValuedMap::new(n_in, n_out, graph)
                .map_err(|e| core_err(graph_form.pos(), e))?;
            let at_input = parse_vector(fields.take_one("a", whole)?)?;
            let at_output = parse_vector(fields.take_one("b", whole)?)?;
            let direction = parse_vector(fields.take_one("h", whole)?)?;
            if at_input.len() != n_in || at_output.len() != n_out || direction.len() != n_out {
                return Err(err_at(whole, "point/direction dimensions do not match the map"));
            }
            Payload::Coderivative(CoderivativePayload { map, at_input, at_output, direction })
        }
    };
    fields.finish()?;
    Ok(ProblemFile { version, kind, payload })
}

fn fmt_vector(v: &[Q]) -> String {
    let inner: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", inner.join(" "))
}

fn fmt_matrix(m: &LinearMap<Q>) -> String {
    let mut parts = vec![format!("matrix {} {}", m.rows(), m.cols())];
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(format_rational).collect();
        parts.push(row.join(" "));
    }
    format!("({})", parts.join(" "))
}

fn fmt_poly(p: &Polyhedron<Q>) -> String {
    let mut parts = vec![format!("poly {}", p.dim())];
    for c in p.ineqs() {
        let mut row: Vec<String> = c.normal.iter().map(format_rational).collect();
        row.push(format_rational(&c.offset));
        parts.push(format!("(le {})", row.join(" ")));
    }
    for c in p.eqs() {
        let mut row: Vec<String> = c.normal.iter().map(format_rational).collect();
        row.push(format_rational(&c.offset));
        parts.push(format!("(eq {})", row.join(" ")));
    }
    format!("({})", parts.join(" "))
}

fn fmt_cone(c: &Cone<Q>) -> String {
    let mut parts = vec![format!("cone {}", c.dim())];
    for g in c.generators() {
        parts.push(fmt_vector(g));
    }
    format!("({})", parts.join(" "))
}

pub fn fmt_expr(e: &ConvexExpr<Q>) -> String {
    match e {
        ConvexExpr::Affine { coef, constant } => {
            format!("(affine {} {})", fmt_vector(coef), format_rational(constant))
        }
        ConvexExpr::MaxAffine { pieces } => {
            let parts: Vec<String> = pieces
                .iter()
                .map(|(a, b)| {
                    let mut row: Vec<String> = a.iter().map(format_rational).collect();
                    row.push(format_rational(b));
                    format!("(piece {})", row.join(" "))
                })
                .collect();
            format!("(maxaffine {})", parts.join(" "))
        }
        ConvexExpr::Indicator { set } => format!("(indicator {})", fmt_poly(set)),
        ConvexExpr::Sum(l, r) => format!("(sum {} {})", fmt_expr(l), fmt_expr(r)),
        ConvexExpr::Max(children) => {
            let parts: Vec<String> = children.iter().map(fmt_expr).collect();
            format!("(max {})", parts.join(" "))
        }
        ConvexExpr::PreComposeLinear { map, inner } => {
            format!("(compose {} {})", fmt_matrix(map), fmt_expr(inner))
        }
        ConvexExpr::ScaleNonneg { factor, inner } => {
            format!("(scale {} {})", format_rational(factor), fmt_expr(inner))
        }
    }
}

/// Canonical text form; `parse(print(parse(t))) == parse(t)`.
pub fn print_problem(file: &ProblemFile) -> String {
    let mut out = String::new();
    out.push_str(&format!("version {}\n", file.version));
    out.push_str(&format!("kind {}\n", file.kind.name()));
    match &file.payload {
        Payload::Fenchel(p) => {
            out.push_str(&format!("phi {}\n", fmt_expr(&p.phi)));
            out.push_str(&format!("psi {}\n", fmt_expr(&p.psi)));
            out.push_str(&format!("A {}\n", fmt_matrix(&p.map)));
        }
        Payload::Conjugate { f, at } => {
            out.push_str(&format!("f {}\n", fmt_expr(f)));
            for v in at {
                out.push_str(&format!("at {}\n", fmt_vector(v)));
            }
        }
        Payload::Lagrange(p) => {
            out.push_str(&format!("phi {}\n", fmt_expr(&p.program.objective)));
            match &p.program.constraint {
                ConstraintMap::Separate(psis) => {
                    for psi in psis {
                        out.push_str(&format!("psi {}\n", fmt_expr(psi)));
                    }
                }
                ConstraintMap::Affine { map, offset, cone } => {
                    out.push_str(&format!("W {}\n", fmt_matrix(map)));
                    out.push_str(&format!("w0 {}\n", fmt_vector(offset)));
                    out.push_str(&format!("cone {}\n", fmt_cone(cone)));
                }
            }
            out.push_str(&format!("lambda {}\n", fmt_poly(&p.program.base)));
            if let Some(u) = &p.ubar {
                out.push_str(&format!("ubar {}\n", fmt_vector(u)));
            }
            if let Some(g) = &p.gamma {
                out.push_str(&format!("gamma {}\n", fmt_vector(g)));
            }
        }
        Payload::Coderivative(p) => {
            out.push_str(&format!("n_in {}\n", p.map.n_in()));
            out.push_str(&format!("n_out {}\n", p.map.n_out()));
            out.push_str(&format!("graph {}\n", fmt_poly(p.map.graph())));
            out.push_str(&format!("a {}\n", fmt_vector(&p.at_input)));
            out.push_str(&format!("b {}\n", fmt_vector(&p.at_output)));
            out.push_str(&format!("h {}\n", fmt_vector(&p.direction)));
        }
    }
    out
}
