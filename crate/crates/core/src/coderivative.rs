//! Polyhedral set-valued maps and coderivative calculus.
//!
//! A map is its graph. The coderivative `D*G(a,b)(h) = {f : (f,−h) ∈
//! N((a,b); gph G)}` is an affine slice of a polyhedral normal cone,
//! computed exactly by eliminating the cone multipliers. The calculus checks
//! (chain rule, preimage formula, parametric constraint systems,
//! intersection rule) each compute both sides and report equality under
//! their qualifications, or the one-sided inclusion without them.

use crate::cone::normal_cone;
use crate::linalg::{self, LinearMap};
use crate::poly::{core_meets, cores_meet, range_subspace, Polyhedron};
use crate::scalar::Scalar;
use crate::vrep::vrep;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetValuedMap<T> {
    n_in: usize,
    n_out: usize,
    graph: Polyhedron<T>,
}

impl<T: Scalar> SetValuedMap<T> {
    pub fn new(n_in: usize, n_out: usize, graph: Polyhedron<T>) -> Result<Self> {
        if graph.dim() != n_in + n_out {
            return Err(Error::Dimension { expected: n_in + n_out, got: graph.dim() });
        }
        Ok(Self { n_in, n_out, graph })
    }

    pub fn identity(n: usize) -> Self {
        let mut eqs = Vec::new();
        for i in 0..n {
            let mut normal = vec![T::zero(); 2 * n];
            normal[i] = T::one();
            normal[n + i] = -T::one();
            eqs.push((normal, T::zero()));
        }
        Self {
            n_in: n,
            n_out: n,
            graph: Polyhedron::from_rows(2 * n, vec![], eqs).expect("consistent dims"),
        }
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn graph(&self) -> &Polyhedron<T> {
        &self.graph
    }

    pub fn domain(&self) -> Result<Polyhedron<T>> {
        self.graph.project(&(0..self.n_in).collect::<Vec<_>>())
    }

    pub fn range(&self) -> Result<Polyhedron<T>> {
        self.graph
            .project(&(self.n_in..self.n_in + self.n_out).collect::<Vec<_>>())
    }

    /// The image `G(a)` as a polyhedron in the output space.
    pub fn image(&self, a: &[T]) -> Result<Polyhedron<T>> {
        if a.len() != self.n_in {
            return Err(Error::Dimension { expected: self.n_in, got: a.len() });
        }
        let assignments: Vec<(usize, T)> =
            a.iter().cloned().enumerate().collect();
        self.graph.fix_coords(&assignments)
    }

    /// `G⁻¹(c)` as a polyhedron in the input space.
    pub fn preimage_point(&self, c: &[T]) -> Result<Polyhedron<T>> {
        if c.len() != self.n_out {
            return Err(Error::Dimension { expected: self.n_out, got: c.len() });
        }
        let assignments: Vec<(usize, T)> = c
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, v)| (self.n_in + i, v))
            .collect();
        self.graph.fix_coords(&assignments)
    }

    /// `G⁻¹(S) = {x : G(x) ∩ S ≠ ∅}`.
    pub fn preimage_set(&self, s: &Polyhedron<T>) -> Result<Polyhedron<T>> {
        if s.dim() != self.n_out {
            return Err(Error::Dimension { expected: self.n_out, got: s.dim() });
        }
        let positions: Vec<usize> = (self.n_in..self.n_in + self.n_out).collect();
        let lifted = s.embed(self.n_in + self.n_out, &positions)?;
        self.graph
            .intersect(&lifted)?
            .project(&(0..self.n_in).collect::<Vec<_>>())
    }

    pub fn contains(&self, a: &[T], b: &[T]) -> bool {
        let mut p = a.to_vec();
        p.extend(b.iter().cloned());
        self.graph.contains(&p)
    }

    /// Composition `(H ∘ G)(x) = ∪_{y ∈ G(x)} H(y)`.
    pub fn compose(&self, h: &SetValuedMap<T>) -> Result<SetValuedMap<T>> {
        if h.n_in != self.n_out {
            return Err(Error::Dimension { expected: self.n_out, got: h.n_in });
        }
        let (nx, ny, nz) = (self.n_in, self.n_out, h.n_out);
        let total = nx + ny + nz;
        let g_lift = self.graph.embed(total, &(0..nx + ny).collect::<Vec<_>>())?;
        let h_lift = h.graph.embed(total, &(nx..total).collect::<Vec<_>>())?;
        let joint = g_lift.intersect(&h_lift)?;
        let keep: Vec<usize> = (0..nx).chain(nx + ny..total).collect();
        SetValuedMap::new(nx, nz, joint.project(&keep)?)
    }

    /// Pointwise intersection `(G₁ ∩ G₂)(x) = G₁(x) ∩ G₂(x)`.
    pub fn intersect_with(&self, other: &SetValuedMap<T>) -> Result<SetValuedMap<T>> {
        if other.n_in != self.n_in || other.n_out != self.n_out {
            return Err(Error::Dimension { expected: self.n_in, got: other.n_in });
        }
        SetValuedMap::new(self.n_in, self.n_out, self.graph.intersect(&other.graph)?)
    }
}

/// `D*G(a,b)(h)`: a polyhedron in the input dual space, possibly empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoderivativeValue<T> {
    pub set: Polyhedron<T>,
}

/// Slices `{f : (f, −h) ∈ cone(gens)}` out of normal-cone generators by
/// eliminating the multipliers.
fn slice_cone<T: Scalar>(
    gens: &[Vec<T>],
    n_f: usize,
    h: &[T],
) -> Result<Polyhedron<T>> {
    let k = gens.len();
    let total = n_f + k;
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for j in 0..k {
        let mut normal = vec![T::zero(); total];
        normal[n_f + j] = -T::one();
        ineqs.push((normal, T::zero()));
    }
    // f − Σ μ_j g_j[..n_f] = 0.
    for c in 0..n_f {
        let mut normal = vec![T::zero(); total];
        normal[c] = T::one();
        for (j, g) in gens.iter().enumerate() {
            normal[n_f + j] = -g[c].clone();
        }
        eqs.push((normal, T::zero()));
    }
    // Σ μ_j g_j[n_f..] = −h.
    for (c, hv) in h.iter().enumerate() {
        let mut normal = vec![T::zero(); total];
        for (j, g) in gens.iter().enumerate() {
            normal[n_f + j] = g[n_f + c].clone();
        }
        eqs.push((normal, -hv.clone()));
    }
    Polyhedron::from_rows(total, ineqs, eqs)?.project(&(0..n_f).collect::<Vec<_>>())
}

/// The coderivative `D*G(a,b)(h)`; `Err(NotInGraph)` when `(a,b) ∉ gph G`.
pub fn coderivative<T: Scalar>(
    g: &SetValuedMap<T>,
    a: &[T],
    b: &[T],
    h: &[T],
) -> Result<CoderivativeValue<T>> {
    if a.len() != g.n_in || b.len() != g.n_out || h.len() != g.n_out {
        return Err(Error::Dimension { expected: g.n_in + g.n_out, got: a.len() + b.len() });
    }
    if !g.contains(a, b) {
        return Err(Error::NotInGraph);
    }
    let mut point = a.to_vec();
    point.extend(b.iter().cloned());
    let cone = normal_cone(&g.graph, &point).expect("graph membership checked");
    Ok(CoderivativeValue { set: slice_cone(cone.generators(), g.n_in, h)? })
}

/// Two-sided calculus check outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalculusCheck<T> {
    pub lhs: Polyhedron<T>,
    pub rhs: Polyhedron<T>,
    pub qualified: bool,
    /// The unconditional inclusion of the rule.
    pub inclusion: bool,
    /// Set equality; asserted only when `qualified`.
    pub equal: bool,
}

/// Deterministic generator of convex-combination weights for the sampling
/// policies; a plain xorshift so the crate stays dependency-free here.
struct WeightStream(u64);

impl WeightStream {
    fn new(seed: u64) -> Self {
        Self(seed | 1)
    }

    fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// `k` nonnegative rationals summing to one.
    fn convex_weights<T: Scalar>(&mut self, k: usize) -> Vec<T> {
        let raw: Vec<u64> = (0..k).map(|_| self.next_u64() % 97 + 1).collect();
        let total: u64 = raw.iter().sum();
        raw.into_iter()
            .map(|r| T::ratio(r as i64, total as i64))
            .collect()
    }
}

/// Coderivative chain rule: under (QCCR) —
/// `core(rge G) ∩ core(dom H) ≠ ∅` and `core(rge G − dom H) ≠ ∅` — the
/// coderivative of the composition equals the intersection over
/// `b ∈ K(a,c) = G(a) ∩ H⁻¹(c)` of the composed coderivatives. `K` is
/// evaluated at its vertices plus the centroid; extra sampled points of `K`
/// must not shrink the intersection (PL exactness), else the instance is
/// flagged loudly.
pub fn chain_rule_check<T: Scalar>(
    g: &SetValuedMap<T>,
    h: &SetValuedMap<T>,
    a: &[T],
    c: &[T],
    s: &[T],
) -> Result<CalculusCheck<T>> {
    let composed = g.compose(h)?;
    if !composed.contains(a, c) {
        return Err(Error::NotInGraph);
    }
    let rge_g = g.range()?;
    let dom_h = h.domain()?;
    let difference = rge_g.minkowski_sum(&dom_h.reflected())?;
    let qualified =
        cores_meet(&rge_g, &dom_h)? && difference.core_point().is_some();

    let lhs = coderivative(&composed, a, c, s)?.set;

    // K(a,c) and its sampling set.
    let k_set = g.image(a)?.intersect(&h.preimage_point(c)?)?;
    let kv = vrep(&k_set)?;
    debug_assert!(!kv.is_empty(), "(a,c) in the composed graph forces K nonempty");
    let mut bs: Vec<Vec<T>> = kv.points.clone();
    if kv.points.len() > 1 {
        let kcount = T::int(kv.points.len() as i64);
        let mut centroid = vec![T::zero(); g.n_out];
        for p in &kv.points {
            centroid = linalg::add(&centroid, p);
        }
        centroid = linalg::scale(&(T::one() / kcount), &centroid);
        bs.push(centroid);
    }

    let rhs_for = |b: &Vec<T>| -> Result<Polyhedron<T>> {
        let ng = {
            let mut p = a.to_vec();
            p.extend(b.iter().cloned());
            normal_cone(&g.graph, &p).expect("b ∈ G(a)")
        };
        let nh = {
            let mut p = b.clone();
            p.extend(c.iter().cloned());
            normal_cone(&h.graph, &p).expect("c ∈ H(b)")
        };
        // {f : ∃k, μ ≥ 0, ν ≥ 0 with (f,−k) = Σ μ g_G and (k,−s) = Σ ν g_H}.
        let (nx, ny) = (g.n_in, g.n_out);
        let kg = ng.generators().len();
        let kh = nh.generators().len();
        let total = nx + ny + kg + kh;
        let mut ineqs = Vec::new();
        let mut eqs = Vec::new();
        for j in 0..kg + kh {
            let mut normal = vec![T::zero(); total];
            normal[nx + ny + j] = -T::one();
            ineqs.push((normal, T::zero()));
        }
        for coord in 0..nx {
            let mut normal = vec![T::zero(); total];
            normal[coord] = T::one();
            for (j, gen) in ng.generators().iter().enumerate() {
                normal[nx + ny + j] = -gen[coord].clone();
            }
            eqs.push((normal, T::zero()));
        }
        for coord in 0..ny {
            // −k = Σ μ g_G[y-block]  and  k = Σ ν g_H[x-block].
            let mut normal = vec![T::zero(); total];
            normal[nx + coord] = T::one();
            for (j, gen) in ng.generators().iter().enumerate() {
                normal[nx + ny + j] = gen[nx + coord].clone();
            }
            eqs.push((normal, T::zero()));
            let mut normal2 = vec![T::zero(); total];
            normal2[nx + coord] = -T::one();
            for (j, gen) in nh.generators().iter().enumerate() {
                normal2[nx + ny + kg + j] = gen[coord].clone();
            }
            eqs.push((normal2, T::zero()));
        }
        for (coord, sv) in s.iter().enumerate() {
            let mut normal = vec![T::zero(); total];
            for (j, gen) in nh.generators().iter().enumerate() {
                normal[nx + ny + kg + j] = gen[ny + coord].clone();
            }
            eqs.push((normal, -sv.clone()));
        }
        Polyhedron::from_rows(total, ineqs, eqs)?.project(&(0..nx).collect::<Vec<_>>())
    };

    let mut rhs = Polyhedron::universe(g.n_in);
    for b in &bs {
        rhs = rhs.intersect(&rhs_for(b)?)?;
    }
    rhs = rhs.pruned();

    // Validation samples: extra b ∈ K must not shrink the intersection.
    let mut stream = WeightStream::new(0x5eed_c0de);
    if kv.points.len() > 1 {
        for _ in 0..20 {
            let w = stream.convex_weights::<T>(kv.points.len());
            let mut b = vec![T::zero(); g.n_out];
            for (wi, p) in w.iter().zip(&kv.points) {
                b = linalg::axpy(&b, wi, p);
            }
            let extra = rhs.intersect(&rhs_for(&b)?)?;
            if !extra.set_eq(&rhs)? {
                return Err(Error::Invalid(
                    "sampled b shrank the chain-rule intersection; PL exactness violated",
                ));
            }
        }
    }

    let inclusion = lhs.includes(&rhs)?;
    let equal = inclusion && rhs.includes(&lhs)?;
    Ok(CalculusCheck { lhs, rhs, qualified, inclusion, equal })
}

/// Preimage normal-cone formula `N(u; G⁻¹(S)) = D*G(u,v)(N(v; S))` under
/// `core(rge G) ∩ core(S) ≠ ∅` and `core(rge G − S) ≠ ∅`; the reverse
/// inclusion holds unconditionally.
pub fn preimage_normal_cone<T: Scalar>(
    g: &SetValuedMap<T>,
    s: &Polyhedron<T>,
    u: &[T],
    v: &[T],
) -> Result<CalculusCheck<T>> {
    if !g.contains(u, v) {
        return Err(Error::NotInGraph);
    }
    if !s.contains(v) {
        return Err(Error::NotInSet);
    }
    let rge = g.range()?;
    let difference = rge.minkowski_sum(&s.reflected())?;
    let qualified = cores_meet(&rge, s)? && difference.core_point().is_some();

    let preimage = g.preimage_set(s)?;
    let lhs = normal_cone(&preimage, u).expect("u ∈ G⁻¹(S)").hrep();

    // rhs = {f : ∃ k ∈ N(v;S), (f,−k) ∈ N((u,v); gph G)}.
    let ngraph = {
        let mut p = u.to_vec();
        p.extend(v.iter().cloned());
        normal_cone(&g.graph, &p).expect("graph membership checked")
    };
    let ns = normal_cone(s, v).expect("v ∈ S");
    let (nx, ny) = (g.n_in, g.n_out);
    let kg = ngraph.generators().len();
    let ks = ns.generators().len();
    let total = nx + kg + ks;
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for j in 0..kg + ks {
        let mut normal = vec![T::zero(); total];
        normal[nx + j] = -T::one();
        ineqs.push((normal, T::zero()));
    }
    for coord in 0..nx {
        let mut normal = vec![T::zero(); total];
        normal[coord] = T::one();
        for (j, gen) in ngraph.generators().iter().enumerate() {
            normal[nx + j] = -gen[coord].clone();
        }
        eqs.push((normal, T::zero()));
    }
    for coord in 0..ny {
        // Σ μ g[y] + Σ ν h = 0  (the graph normal's −k matches k ∈ N(v;S)).
        let mut normal = vec![T::zero(); total];
        for (j, gen) in ngraph.generators().iter().enumerate() {
            normal[nx + j] = gen[nx + coord].clone();
        }
        for (j, gen) in ns.generators().iter().enumerate() {
            normal[nx + kg + j] = gen[coord].clone();
        }
        eqs.push((normal, T::zero()));
    }
    let rhs = Polyhedron::from_rows(total, ineqs, eqs)?
        .project(&(0..nx).collect::<Vec<_>>())?;

    let inclusion = lhs.includes(&rhs)?;
    let equal = inclusion && rhs.includes(&lhs)?;
    Ok(CalculusCheck { lhs, rhs, qualified, inclusion, equal })
}

/// Parametric constraint system `G(x) = {y : (x,y) ∈ Λ, φ(x,y) ∈ S}` with
/// affine `φ(z) = W z + w0`: checks
/// `D*G(u,v)(h) = {f : (f,−h) ∈ W*(N(w;S)) + N((u,v);Λ)}`.
pub fn constraint_system_coderivative<T: Scalar>(
    lambda: &Polyhedron<T>,
    map: &LinearMap<T>,
    offset: &[T],
    s: &Polyhedron<T>,
    n_in: usize,
    u: &[T],
    v: &[T],
    h: &[T],
) -> Result<CalculusCheck<T>> {
    let nv = lambda
        .dim()
        .checked_sub(n_in)
        .ok_or(Error::Dimension { expected: n_in, got: lambda.dim() })?;
    if map.cols() != lambda.dim() || offset.len() != map.rows() || s.dim() != map.rows() {
        return Err(Error::Dimension { expected: map.cols(), got: lambda.dim() });
    }
    // gph G = Λ ∩ φ⁻¹(S).
    let pull = |c: &crate::poly::LinearConstraint<T>| {
        let normal = map.adjoint().apply(&c.normal).expect("dims");
        let shift = linalg::dot(&c.normal, offset);
        (normal, c.offset.clone() - shift)
    };
    let preimage = Polyhedron::from_rows(
        lambda.dim(),
        s.ineqs().iter().map(pull).collect(),
        s.eqs().iter().map(pull).collect(),
    )?;
    let graph = lambda.intersect(&preimage)?;
    let g = SetValuedMap::new(n_in, nv, graph)?;
    if !g.contains(u, v) {
        return Err(Error::NotInGraph);
    }
    let mut z = u.to_vec();
    z.extend(v.iter().cloned());
    let w = linalg::add(&map.apply(&z)?, offset);

    // Qualifications: core(rge φ) ∩ core(S) ≠ ∅, and one of the two core
    // conditions tying φ⁻¹(S) to Λ.
    let rge_phi = range_subspace(map).translate(&linalg::add(
        &vec![T::zero(); map.rows()],
        offset,
    ));
    let q1 = cores_meet(&rge_phi, s)?;
    let q2 = core_meets(&preimage, lambda)? || core_meets(lambda, &preimage)?;
    let qualified = q1 && q2;

    let lhs = coderivative(&g, u, v, h)?.set;

    // rhs: slice of W*(N(w;S)) + N((u,v);Λ) at (f, −h).
    let ns = normal_cone(s, &w).expect("w = φ(u,v) ∈ S");
    let adj = map.adjoint();
    let mut gens: Vec<Vec<T>> = ns
        .generators()
        .iter()
        .map(|k| adj.apply(k).expect("dims"))
        .collect();
    let nl = normal_cone(lambda, &z).expect("(u,v) ∈ Λ");
    gens.extend(nl.generators().iter().cloned());
    let rhs = slice_cone(&gens, n_in, h)?;

    let inclusion = lhs.includes(&rhs)?;
    let equal = inclusion && rhs.includes(&lhs)?;
    Ok(CalculusCheck { lhs, rhs, qualified, inclusion, equal })
}

/// Intersection-rule verification for `D*(G₁∩G₂)(u,v)(g)` against the union
/// over splits `g₁ + g₂ = g` of `D*G₁(u,v)(g₁) + D*G₂(u,v)(g₂)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionRuleCheck<T> {
    pub lhs: Polyhedron<T>,
    pub qualified: bool,
    /// Every sampled split lands inside `lhs` (the ⊇ direction).
    pub splits_inside: bool,
    /// Every generator of `lhs` admits an LP split decomposition (the ⊆
    /// direction, checked only under qualification).
    pub decomposable: bool,
}

pub fn intersection_rule_check<T: Scalar>(
    g1: &SetValuedMap<T>,
    g2: &SetValuedMap<T>,
    u: &[T],
    v: &[T],
    g: &[T],
) -> Result<IntersectionRuleCheck<T>> {
    if !g1.contains(u, v) || !g2.contains(u, v) {
        return Err(Error::NotInGraph);
    }
    let qualified = core_meets(g1.graph(), g2.graph())?;
    let combined = g1.intersect_with(g2)?;
    let lhs = coderivative(&combined, u, v, g)?.set;

    let n1 = {
        let mut p = u.to_vec();
        p.extend(v.iter().cloned());
        normal_cone(g1.graph(), &p).expect("membership checked")
    };
    let n2 = {
        let mut p = u.to_vec();
        p.extend(v.iter().cloned());
        normal_cone(g2.graph(), &p).expect("membership checked")
    };
    let (nx, ny) = (g1.n_in(), g1.n_out());

    // ⊇ on sampled splits: D*G1(g_part) + D*G2(g − g_part) ⊆ lhs.
    let mut splits: Vec<Vec<T>> = vec![
        vec![T::zero(); ny],
        g.to_vec(),
        linalg::scale(&T::ratio(1, 2), g),
    ];
    let mut stream = WeightStream::new(0xadd_5eed);
    for _ in 0..5 {
        let w = stream.convex_weights::<T>(ny + 1);
        // A split direction mixing g with coordinate perturbations.
        let mut part = linalg::scale(&w[0], g);
        for (j, wj) in w.iter().skip(1).enumerate() {
            part[j] = part[j].clone() + wj.clone() - T::ratio(1, 2) * wj.clone();
        }
        splits.push(part);
    }
    let mut splits_inside = true;
    for g_part in &splits {
        let g_rest = linalg::sub(g, g_part);
        let p1 = slice_cone(n1.generators(), nx, g_part)?;
        let p2 = slice_cone(n2.generators(), nx, &g_rest)?;
        if p1.is_empty() || p2.is_empty() {
            continue;
        }
        let sum = p1.minkowski_sum(&p2)?;
        if !lhs.includes(&sum)? {
            splits_inside = false;
        }
    }

    // ⊆ by LP decomposition of each lhs generator: find g1+g2=g, f1+f2=f
    // with (f_i, −g_i) in the respective graph normal cones.
    let lv = vrep(&lhs)?;
    let mut candidates: Vec<Vec<T>> = lv.points.clone();
    for p in &lv.points {
        for r in lv.recession_generators() {
            candidates.push(linalg::add(p, &r));
        }
    }
    let mut decomposable = true;
    for f in &candidates {
        let k1 = n1.generators().len();
        let k2 = n2.generators().len();
        let total = k1 + k2;
        let mut ineqs = Vec::new();
        let mut eqs = Vec::new();
        for j in 0..total {
            let mut normal = vec![T::zero(); total];
            normal[j] = -T::one();
            ineqs.push((normal, T::zero()));
        }
        // Σ μ g1[x] + Σ ν g2[x] = f.
        for coord in 0..nx {
            let mut normal = vec![T::zero(); total];
            for (j, gen) in n1.generators().iter().enumerate() {
                normal[j] = gen[coord].clone();
            }
            for (j, gen) in n2.generators().iter().enumerate() {
                normal[k1 + j] = gen[coord].clone();
            }
            eqs.push((normal, f[coord].clone()));
        }
        // Σ μ g1[y] + Σ ν g2[y] = −g.
        for coord in 0..ny {
            let mut normal = vec![T::zero(); total];
            for (j, gen) in n1.generators().iter().enumerate() {
                normal[j] = gen[nx + coord].clone();
            }
            for (j, gen) in n2.generators().iter().enumerate() {
                normal[k1 + j] = gen[nx + coord].clone();
            }
            eqs.push((normal, -g[coord].clone()));
        }
        if Polyhedron::from_rows(total, ineqs, eqs)?.is_empty() {
            decomposable = false;
        }
    }
    Ok(IntersectionRuleCheck { lhs, qualified, splits_inside, decomposable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    /// Graph {y ≥ x} in ℝ².
    fn epi_identity() -> SetValuedMap<Q> {
        SetValuedMap::new(
            1,
            1,
            Polyhedron::halfspace(vec![q(1, 1), q(-1, 1)], q(0, 1)),
        )
        .unwrap()
    }

    #[test]
    fn coderivative_of_identity() {
        let id = SetValuedMap::<Q>::identity(1);
        let d = coderivative(&id, &[q(2, 1)], &[q(2, 1)], &[q(1, 1)]).unwrap();
        assert!(d.set.set_eq(&Polyhedron::point(&[q(1, 1)])).unwrap());
    }

    #[test]
    fn coderivative_of_epigraphical_map() {
        // At (0,0): N = ray{(1,−1)}; slice at h = 1 gives {1}.
        let g = epi_identity();
        let d = coderivative(&g, &[q(0, 1)], &[q(0, 1)], &[q(1, 1)]).unwrap();
        assert!(d.set.set_eq(&Polyhedron::point(&[q(1, 1)])).unwrap());
    }

    #[test]
    fn coderivative_at_interior_point() {
        let g = epi_identity();
        let d0 = coderivative(&g, &[q(0, 1)], &[q(1, 1)], &[q(0, 1)]).unwrap();
        assert!(d0.set.set_eq(&Polyhedron::point(&[q(0, 1)])).unwrap());
        let d1 = coderivative(&g, &[q(0, 1)], &[q(1, 1)], &[q(1, 1)]).unwrap();
        assert!(d1.set.is_empty());
    }

    #[test]
    fn coderivative_outside_graph() {
        let g = epi_identity();
        assert_eq!(
            coderivative(&g, &[q(0, 1)], &[q(-1, 1)], &[q(0, 1)]),
            Err(Error::NotInGraph)
        );
    }

    #[test]
    fn compose_identities() {
        let id = SetValuedMap::<Q>::identity(2);
        let c = id.compose(&id).unwrap();
        assert!(c.graph().set_eq(id.graph()).unwrap());
    }

    #[test]
    fn compose_epigraphical_maps() {
        // {y ≥ x} ∘ {z ≥ y} = {z ≥ x}.
        let g = epi_identity();
        let h = epi_identity();
        let c = g.compose(&h).unwrap();
        let expected = Polyhedron::halfspace(vec![q(1, 1), q(-1, 1)], q(0, 1));
        assert!(c.graph().set_eq(&expected).unwrap());
    }

    #[test]
    fn compose_with_empty() {
        let g = epi_identity();
        let empty = SetValuedMap::new(1, 1, Polyhedron::empty(2)).unwrap();
        let c = g.compose(&empty).unwrap();
        assert!(c.graph().is_empty());
    }

    #[test]
    fn chain_rule_identity_maps() {
        let id = SetValuedMap::<Q>::identity(1);
        let r = chain_rule_check(&id, &id, &[q(0, 1)], &[q(0, 1)], &[q(1, 1)]).unwrap();
        assert!(r.qualified);
        assert!(r.equal);
        assert!(r.lhs.set_eq(&Polyhedron::point(&[q(1, 1)])).unwrap());
    }

    #[test]
    fn chain_rule_epigraphical_pair() {
        let g = epi_identity();
        let h = epi_identity();
        let r = chain_rule_check(&g, &h, &[q(0, 1)], &[q(0, 1)], &[q(1, 1)]).unwrap();
        assert!(r.qualified);
        assert!(r.equal);
    }

    #[test]
    fn chain_rule_unqualified_keeps_inclusion() {
        // rge G = {0} is a single point: core(rge G) = ∅.
        let point_map = SetValuedMap::new(
            1,
            1,
            Polyhedron::from_rows(
                2,
                vec![],
                vec![(vec![q(0, 1), q(1, 1)], q(0, 1))],
            )
            .unwrap(),
        )
        .unwrap();
        let h = epi_identity();
        let r = chain_rule_check(&point_map, &h, &[q(0, 1)], &[q(0, 1)], &[q(1, 1)]).unwrap();
        assert!(!r.qualified);
        assert!(r.inclusion);
    }

    #[test]
    fn preimage_identity_interval() {
        let id = SetValuedMap::<Q>::identity(1);
        let s = Polyhedron::box_(&[q(0, 1)], &[q(1, 1)]).unwrap();
        let r = preimage_normal_cone(&id, &s, &[q(0, 1)], &[q(0, 1)]).unwrap();
        assert!(r.qualified);
        assert!(r.equal);
        // N(0; [0,1]) = (−∞, 0].
        let expected = Polyhedron::halfspace(vec![q(1, 1)], q(0, 1));
        assert!(r.lhs.set_eq(&expected).unwrap());
    }

    #[test]
    fn preimage_epigraphical_halfline() {
        // G = {y ≥ x}, S = (−∞, 0]: G⁻¹(S) = (−∞, 0]; N(0; ·) = [0, ∞).
        let g = epi_identity();
        let s = Polyhedron::halfspace(vec![q(1, 1)], q(0, 1));
        let r = preimage_normal_cone(&g, &s, &[q(0, 1)], &[q(0, 1)]).unwrap();
        assert!(r.qualified);
        assert!(r.equal);
        let expected = Polyhedron::halfspace(vec![q(-1, 1)], q(0, 1));
        assert!(r.lhs.set_eq(&expected).unwrap());
    }

    #[test]
    fn preimage_interior_point_zero_cone() {
        let g = epi_identity();
        let s = Polyhedron::halfspace(vec![q(1, 1)], q(0, 1));
        let r = preimage_normal_cone(&g, &s, &[q(-5, 1)], &[q(-3, 1)]).unwrap();
        assert!(r.equal);
        assert!(r.lhs.set_eq(&Polyhedron::point(&[q(0, 1)])).unwrap());
    }

    #[test]
    fn constraint_system_halfplane() {
        // Λ = ℝ², φ(x,y) = y, S = (−∞,0]: G(x) = {y ≤ 0}.
        let lambda = Polyhedron::universe(2);
        let map = LinearMap::from_rows(vec![vec![q(0, 1), q(1, 1)]]).unwrap();
        let s = Polyhedron::halfspace(vec![q(1, 1)], q(0, 1));
        let r = constraint_system_coderivative(
            &lambda,
            &map,
            &[q(0, 1)],
            &s,
            1,
            &[q(0, 1)],
            &[q(0, 1)],
            &[q(1, 1)],
        )
        .unwrap();
        assert!(r.qualified);
        assert!(r.equal);
    }

    #[test]
    fn constraint_system_no_constraint_reduces_to_graph() {
        // S = ℝ: N(w; ℝ) = {0}, so the rhs collapses to N((u,v); Λ) slices.
        let lambda = Polyhedron::halfspace(vec![q(1, 1), q(-1, 1)], q(0, 1));
        let map = LinearMap::from_rows(vec![vec![q(0, 1), q(1, 1)]]).unwrap();
        let s = Polyhedron::universe(1);
        let r = constraint_system_coderivative(
            &lambda,
            &map,
            &[q(0, 1)],
            &s,
            1,
            &[q(0, 1)],
            &[q(0, 1)],
            &[q(1, 1)],
        )
        .unwrap();
        assert!(r.equal);
    }

    #[test]
    fn constraint_system_unqualified_flags() {
        // S = {0} has empty core: qualification fails, inclusion still holds.
        let lambda = SetValuedMap::<Q>::identity(1).graph().clone();
        let map = LinearMap::zero(1, 2);
        let s = Polyhedron::point(&[q(0, 1)]);
        let r = constraint_system_coderivative(
            &lambda,
            &map,
            &[q(0, 1)],
            &s,
            1,
            &[q(1, 1)],
            &[q(1, 1)],
            &[q(1, 1)],
        )
        .unwrap();
        assert!(!r.qualified);
        assert!(r.inclusion);
    }

    #[test]
    fn intersection_rule_same_map() {
        let g = epi_identity();
        let r =
            intersection_rule_check(&g, &g, &[q(0, 1)], &[q(0, 1)], &[q(1, 1)]).unwrap();
        assert!(r.splits_inside);
        assert!(r.decomposable);
    }

    #[test]
    fn intersection_rule_two_halfplanes() {
        // G1 = {y ≥ x}, G2 = {y ≥ −x} at (0,0), g = 1.
        let g1 = epi_identity();
        let g2 = SetValuedMap::new(
            1,
            1,
            Polyhedron::halfspace(vec![q(-1, 1), q(-1, 1)], q(0, 1)),
        )
        .unwrap();
        let r =
            intersection_rule_check(&g1, &g2, &[q(0, 1)], &[q(0, 1)], &[q(1, 1)]).unwrap();
        assert!(r.qualified);
        assert!(r.splits_inside);
        assert!(r.decomposable);
        // lhs = [−1, 1] here: both graph normals contribute a unit slope.
        let expected = Polyhedron::box_(&[q(-1, 1)], &[q(1, 1)]).unwrap();
        assert!(r.lhs.set_eq(&expected).unwrap());
    }

    #[test]
    fn intersection_rule_interior_point() {
        let g1 = epi_identity();
        let g2 = SetValuedMap::new(
            1,
            1,
            Polyhedron::halfspace(vec![q(-1, 1), q(-1, 1)], q(0, 1)),
        )
        .unwrap();
        let r =
            intersection_rule_check(&g1, &g2, &[q(0, 1)], &[q(5, 1)], &[q(0, 1)]).unwrap();
        assert!(r.lhs.set_eq(&Polyhedron::point(&[q(0, 1)])).unwrap());
        assert!(r.splits_inside && r.decomposable);
    }

    #[test]
    fn coderivative_scaling_homogeneity() {
        // D*G(a,b)(λh) = λ·D*G(a,b)(h) for λ > 0.
        let g = epi_identity();
        let d1 = coderivative(&g, &[q(0, 1)], &[q(0, 1)], &[q(1, 1)]).unwrap();
        let d3 = coderivative(&g, &[q(0, 1)], &[q(0, 1)], &[q(3, 1)]).unwrap();
        let scaled = Polyhedron::from_rows(
            1,
            d1.set
                .ineqs()
                .iter()
                .map(|c| (c.normal.clone(), q(3, 1) * c.offset.clone()))
                .collect(),
            d1.set
                .eqs()
                .iter()
                .map(|c| (c.normal.clone(), q(3, 1) * c.offset.clone()))
                .collect(),
        )
        .unwrap();
        assert!(d3.set.set_eq(&scaled).unwrap());
    }

    #[test]
    fn domain_and_range_projections() {
        let g = epi_identity();
        assert!(g.domain().unwrap().set_eq(&Polyhedron::universe(1)).unwrap());
        assert!(g.range().unwrap().set_eq(&Polyhedron::universe(1)).unwrap());
        let bounded = SetValuedMap::new(
            1,
            1,
            Polyhedron::box_(&[q(0, 1), q(2, 1)], &[q(1, 1), q(3, 1)]).unwrap(),
        )
        .unwrap();
        assert!(bounded
            .range()
            .unwrap()
            .set_eq(&Polyhedron::box_(&[q(2, 1)], &[q(3, 1)]).unwrap())
            .unwrap());
    }
}
