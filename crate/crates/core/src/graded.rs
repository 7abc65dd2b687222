//! Deciders for strong grading, graded cleanness and graded unit-regularity
//! of D(X) ⋆_α 𝔽 ≅ L_K(E), each returning certificates that are re-checked by
//! direct computation.
//!
//! All three properties hold exactly when the graph is a single vertex with a
//! single loop. Verdicts come from that criterion; the certificates make the
//! verdicts checkable.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::action::{is_global, PartialAction};
use crate::boundary::{in_cylinder, representative, Cylinder};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::scalar::Scalar;
use crate::skew::{Side, SkewElement, SkewRing};
use crate::word::ReducedWord;

/// Default exponent bound for the loop-case tables.
pub const TABLE_BOUND: usize = 4;

pub fn is_loop(graph: &Graph) -> bool {
    graph.vertex_count() == 1 && graph.edge_count() == 1 && {
        let f = EdgeId(0);
        graph.src(f) == graph.dst(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Property {
    StronglyGraded,
    GradedClean,
    GradedUnitRegular,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::StronglyGraded => "strongly graded",
            Property::GradedClean => "graded clean",
            Property::GradedUnitRegular => "graded unit-regular",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// The graph is exactly `vertex` with the loop `edge`.
    LoopStructure { vertex: VertexId, edge: EdgeId },
    /// z ≠ 0, x ≠ 0 and z·x = 0 (Left) or x·z = 0 (Right); x = 1_g δ_g is a
    /// homogeneous element that would have to be invertible.
    AnnihilatorWitness { z: SkewElement, x: SkewElement, side: Side },
    /// A partition cell outside X_edge, so X_edge ≠ X and the action is not
    /// global.
    SeparatingCell { edge: EdgeId, cell: Cylinder },
    /// Pairs (x, y) with x·y = y·x = 1.
    InverseTable(Vec<(SkewElement, SkewElement)>),
    /// Entries (x, u, u^{-1}, a) with x = u + a, a² = a, u·u^{-1} = u^{-1}·u = 1.
    CleanDecomposition(Vec<(SkewElement, SkewElement, SkewElement, SkewElement)>),
    /// Entries (x, u, u^{-1}) with x·u·x = x and u invertible.
    UnitRegularTriple(Vec<(SkewElement, SkewElement, SkewElement)>),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::LoopStructure { .. } => "loop-structure",
            Certificate::AnnihilatorWitness { .. } => "annihilator-witness",
            Certificate::SeparatingCell { .. } => "separating-cell",
            Certificate::InverseTable(_) => "inverse-table",
            Certificate::CleanDecomposition(_) => "clean-decomposition",
            Certificate::UnitRegularTriple(_) => "unit-regular-triple",
        }
    }

    /// Number of checked entries.
    pub fn size(&self) -> usize {
        match self {
            Certificate::InverseTable(t) => t.len(),
            Certificate::CleanDecomposition(t) => t.len(),
            Certificate::UnitRegularTriple(t) => t.len(),
            _ => 1,
        }
    }

    /// A deterministic textual dump.
    pub fn describe<A: PartialAction>(&self, ring: &SkewRing<A>) -> String {
        let g = ring.graph();
        let d = |x: &SkewElement| ring.display(x);
        match self {
            Certificate::LoopStructure { vertex, edge } => {
                format!("loop-structure: vertex {}, edge {}", g.vertex_name(*vertex), g.edge_name(*edge))
            }
            Certificate::AnnihilatorWitness { z, x, side } => {
                let product = match side {
                    Side::Left => "z*x",
                    Side::Right => "x*z",
                };
                format!("annihilator-witness: z = {}, x = {}, {product} = 0", d(z), d(x))
            }
            Certificate::SeparatingCell { edge, cell } => format!(
                "separating-cell: {} is disjoint from X[{}]",
                cell.display(g),
                g.edge_name(*edge)
            ),
            Certificate::InverseTable(rows) => {
                let body: Vec<String> = rows.iter().map(|(x, y)| format!("{} ~ {}", d(x), d(y))).collect();
                format!("inverse-table ({}): {}", rows.len(), body.join("; "))
            }
            Certificate::CleanDecomposition(rows) => {
                let body: Vec<String> =
                    rows.iter().map(|(x, u, _, a)| format!("{} = {} + {}", d(x), d(u), d(a))).collect();
                format!("clean-decomposition ({}): {}", rows.len(), body.join("; "))
            }
            Certificate::UnitRegularTriple(rows) => {
                let body: Vec<String> = rows.iter().map(|(x, u, _)| format!("x = {}, u = {}", d(x), d(u))).collect();
                format!("unit-regular-triple ({}): {}", rows.len(), body.join("; "))
            }
        }
    }

    fn is_positive(&self) -> bool {
        !matches!(self, Certificate::AnnihilatorWitness { .. } | Certificate::SeparatingCell { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub property: Property,
    pub verdict: bool,
    pub certificates: Vec<Certificate>,
}

/// Re-checks one certificate by direct computation; `Err` explains a failure.
pub fn verify_certificate<A: PartialAction>(ring: &SkewRing<A>, cert: &Certificate) -> Result<(), String> {
    let graph = ring.graph();
    let one = ring.identity();
    let mul = |x: &SkewElement, y: &SkewElement| ring.multiply(x, y).map_err(|e| e.to_string());
    let valid = |x: &SkewElement| ring.check(x).map_err(|e| e.to_string());
    match cert {
        Certificate::LoopStructure { vertex, edge } => {
            let ok = graph.vertex_count() == 1
                && graph.edge_count() == 1
                && graph.has_edge(*edge)
                && graph.src(*edge) == *vertex
                && graph.dst(*edge) == *vertex;
            ok.then_some(()).ok_or_else(|| "graph is not the claimed loop".to_string())
        }
        Certificate::AnnihilatorWitness { z, x, side } => {
            valid(z)?;
            valid(x)?;
            if z.is_zero() || x.is_zero() {
                return Err("witness elements must be nonzero".into());
            }
            let g = x.homogeneous_degree().ok_or("x is not homogeneous")?;
            if *x != ring.unit_monomial(g).map_err(|e| e.to_string())? {
                return Err("x is not 1_g d[g]".into());
            }
            let p = match side {
                Side::Left => mul(z, x)?,
                Side::Right => mul(x, z)?,
            };
            p.is_zero().then_some(()).ok_or_else(|| format!("product is {}", ring.display(&p)))
        }
        Certificate::SeparatingCell { edge, cell } => {
            if !graph.has_edge(*edge) || !cell.is_valid(graph) {
                return Err("certificate does not belong to this graph".into());
            }
            let xi = representative(graph, cell);
            let alg = ring.algebra();
            let f = alg.path(&[*edge]);
            if !in_cylinder(graph, &xi, cell) {
                return Err("representative outside its cell".into());
            }
            if !alg.evaluate(&f, &xi).is_zero() || alg.evaluate(&alg.unit(), &xi) != alg.scalar(1) {
                return Err(format!("{} does not separate X from X_f", xi.display(graph)));
            }
            Ok(())
        }
        Certificate::InverseTable(rows) => {
            for (x, y) in rows {
                valid(x)?;
                valid(y)?;
                if x.homogeneous_degree().is_none() || y.homogeneous_degree().is_none() {
                    return Err("table entries must be homogeneous".into());
                }
                if mul(x, y)? != one || mul(y, x)? != one {
                    return Err(format!("{} and {} are not inverse", ring.display(x), ring.display(y)));
                }
            }
            Ok(())
        }
        Certificate::CleanDecomposition(rows) => {
            for (x, u, uinv, a) in rows {
                for el in [x, u, uinv, a] {
                    valid(el)?;
                }
                if ring.add(u, a) != *x {
                    return Err(format!("{} != u + a", ring.display(x)));
                }
                if mul(a, a)? != *a {
                    return Err(format!("{} is not idempotent", ring.display(a)));
                }
                if mul(u, uinv)? != one || mul(uinv, u)? != one {
                    return Err(format!("{} is not a unit", ring.display(u)));
                }
                let e = ReducedWord::identity();
                if [x, u, a].iter().any(|el| el.support().iter().any(|w| *w != e)) {
                    return Err("decomposition leaves the identity component".into());
                }
            }
            Ok(())
        }
        Certificate::UnitRegularTriple(rows) => {
            for (x, u, uinv) in rows {
                for el in [x, u, uinv] {
                    valid(el)?;
                }
                if u.homogeneous_degree().is_none() {
                    return Err("u must be homogeneous".into());
                }
                if mul(u, uinv)? != one || mul(uinv, u)? != one {
                    return Err(format!("{} is not a unit", ring.display(u)));
                }
                if mul(&mul(x, u)?, x)? != *x {
                    return Err(format!("x u x != x for x = {}", ring.display(x)));
                }
            }
            Ok(())
        }
    }
}

/// Re-checks every certificate and that their polarity matches the verdict.
pub fn verify_decision<A: PartialAction>(ring: &SkewRing<A>, d: &Decision) -> Result<(), String> {
    if d.certificates.is_empty() {
        return Err("no certificate".into());
    }
    for c in &d.certificates {
        if c.is_positive() != d.verdict {
            return Err(format!("{} certificate contradicts verdict {}", c.kind(), d.verdict));
        }
        verify_certificate(ring, c).map_err(|e| format!("{}: {e}", c.kind()))?;
    }
    Ok(())
}

fn require_edges(graph: &Graph) -> Result<()> {
    if graph.edge_count() == 0 {
        return Err(Error::EdgelessGraph);
    }
    Ok(())
}

fn loop_parts(_graph: &Graph) -> (VertexId, EdgeId) {
    (VertexId(0), EdgeId(0))
}

/// λ·1_v δ_{f^k} for the loop.
fn loop_monomial<A: PartialAction>(ring: &SkewRing<A>, lambda: &Scalar, k: i64) -> Result<SkewElement> {
    let (v, f) = loop_parts(ring.graph());
    let r = ring.algebra().scale(lambda, &ring.algebra().vertex(v));
    ring.monomial(r, ReducedWord::power(f, k))
}

fn exponents(bound: usize) -> impl Iterator<Item = i64> {
    (1..=bound as i64).flat_map(|k| [k, -k])
}

/// The obstruction shared by the clean and unit-regular proofs: with two
/// edges f, l, (1_{l^{-1}} δ_{l^{-1}})(1_f δ_f) = 0; with one edge f and a
/// second vertex w, (1_w δ_e)(1_f δ_f) = 0.
pub fn annihilator_witness<A: PartialAction>(ring: &SkewRing<A>) -> Result<Certificate> {
    let graph = ring.graph();
    require_edges(graph)?;
    let f = EdgeId(0);
    let x = ring.unit_monomial(&ReducedWord::edge(f))?;
    let z = if graph.edge_count() >= 2 {
        ring.unit_monomial(&ReducedWord::edge(EdgeId(1)).invert())?
    } else {
        let w = graph.vertices().find(|&w| w != graph.src(f)).ok_or(Error::NotALoop)?;
        ring.monomial(ring.algebra().vertex(w), ReducedWord::identity())?
    };
    Ok(Certificate::AnnihilatorWitness { z, x, side: Side::Left })
}

pub fn decide_strongly_graded<A: PartialAction>(ring: &SkewRing<A>, bound: usize) -> Result<Decision> {
    let graph = ring.graph();
    require_edges(graph)?;
    let certificates = if is_loop(graph) {
        let (vertex, edge) = loop_parts(graph);
        let one = ring.algebra().scalar(1);
        let mut table = Vec::new();
        for k in exponents(bound) {
            table.push((loop_monomial(ring, &one, k)?, loop_monomial(ring, &one, -k)?));
        }
        vec![Certificate::LoopStructure { vertex, edge }, Certificate::InverseTable(table)]
    } else {
        let ng = is_global(graph)?.expect_err("only the loop carries a global action");
        vec![Certificate::SeparatingCell { edge: ng.edge, cell: ng.cell }]
    };
    Ok(Decision { property: Property::StronglyGraded, verdict: is_loop(graph), certificates })
}

pub fn decide_graded_clean<A: PartialAction>(ring: &SkewRing<A>, bound: usize) -> Result<Decision> {
    let graph = ring.graph();
    require_edges(graph)?;
    let certificates = if is_loop(graph) {
        let (vertex, edge) = loop_parts(graph);
        let alg = ring.algebra();
        let one = alg.scalar(1);
        let mut decomposition = Vec::new();
        for lambda in alg.field().sample_nonzero() {
            let x = loop_monomial(ring, &lambda, 0)?;
            let entry = if lambda == one {
                (x, ring.identity(), ring.identity(), SkewElement::zero())
            } else {
                let mu = &lambda - &one;
                let u = loop_monomial(ring, &mu, 0)?;
                let uinv = loop_monomial(ring, &mu.inv().expect("mu is nonzero"), 0)?;
                (x, u, uinv, ring.identity())
            };
            decomposition.push(entry);
        }
        let mut table = Vec::new();
        for k in exponents(bound) {
            for lambda in alg.field().sample_nonzero() {
                let inv = lambda.inv().expect("sampled scalars are nonzero");
                table.push((loop_monomial(ring, &lambda, k)?, loop_monomial(ring, &inv, -k)?));
            }
        }
        vec![
            Certificate::LoopStructure { vertex, edge },
            Certificate::CleanDecomposition(decomposition),
            Certificate::InverseTable(table),
        ]
    } else {
        vec![annihilator_witness(ring)?]
    };
    Ok(Decision { property: Property::GradedClean, verdict: is_loop(graph), certificates })
}

/// Checks x u x = x with x = λ 1_p δ_p and u = λ^{-1} 1_{p^{-1}} δ_{p^{-1}}.
pub fn decide_graded_unit_regular<A: PartialAction>(ring: &SkewRing<A>, bound: usize) -> Result<Decision> {
    let graph = ring.graph();
    require_edges(graph)?;
    let certificates = if is_loop(graph) {
        let (vertex, edge) = loop_parts(graph);
        let mut rows = Vec::new();
        for k in std::iter::once(0).chain(exponents(bound)) {
            for lambda in ring.algebra().field().sample_nonzero() {
                let inv = lambda.inv().expect("sampled scalars are nonzero");
                rows.push((
                    loop_monomial(ring, &lambda, k)?,
                    loop_monomial(ring, &inv, -k)?,
                    loop_monomial(ring, &lambda, k)?,
                ));
            }
        }
        vec![Certificate::LoopStructure { vertex, edge }, Certificate::UnitRegularTriple(rows)]
    } else {
        vec![annihilator_witness(ring)?]
    };
    Ok(Decision { property: Property::GradedUnitRegular, verdict: is_loop(graph), certificates })
}

pub fn decide_all<A: PartialAction>(ring: &SkewRing<A>, bound: usize) -> Result<Vec<Decision>> {
    Ok(vec![decide_strongly_graded(ring, bound)?, decide_graded_clean(ring, bound)?, decide_graded_unit_regular(ring, bound)?])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentEntry {
    pub word: ReducedWord,
    pub element: SkewElement,
    pub inverse: SkewElement,
    pub verified: bool,
}

/// For a loop: an invertible element of each R_g, verified by
/// multiplication. Bound 0 gives the single entry at e; otherwise the entries
/// are f^{±1}, ..., f^{±bound}.
pub fn unit_regular_component_lemma_check<A: PartialAction>(
    ring: &SkewRing<A>,
    bound: usize,
) -> Result<Vec<ComponentEntry>> {
    if !is_loop(ring.graph()) {
        return Err(Error::NotALoop);
    }
    let one = ring.algebra().scalar(1);
    let ks: Vec<i64> = if bound == 0 { vec![0] } else { (1..=bound as i64).flat_map(|k| [k, -k]).collect() };
    let (_, f) = loop_parts(ring.graph());
    let unit = ring.identity();
    ks.into_iter()
        .map(|k| {
            let element = loop_monomial(ring, &one, k)?;
            let inverse = loop_monomial(ring, &one, -k)?;
            let verified = ring.multiply(&element, &inverse)? == unit && ring.multiply(&inverse, &element)? == unit;
            Ok(ComponentEntry { word: ReducedWord::power(f, k), element, inverse, verified })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentEntry {
    pub m: i64,
    pub n: i64,
    pub passed: bool,
}

/// 1_v δ_{f^m} · 1_v δ_{f^n} = 1_v δ_{f^{m+n}} for all m, n in [-N, N].
pub fn laurent_check<A: PartialAction>(ring: &SkewRing<A>, n: i64) -> Result<Vec<LaurentEntry>> {
    if !is_loop(ring.graph()) {
        return Err(Error::NotALoop);
    }
    let one = ring.algebra().scalar(1);
    let (v, f) = loop_parts(ring.graph());
    let mut out = Vec::new();
    for a in -n..=n {
        for b in -n..=n {
            let product = ring.multiply(&loop_monomial(ring, &one, a)?, &loop_monomial(ring, &one, b)?)?;
            let expected = ring.monomial(ring.algebra().vertex(v), ReducedWord::power(f, a + b))?;
            out.push(LaurentEntry { m: a, n: b, passed: product == expected });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossRow {
    pub name: String,
    pub strongly_graded: bool,
    pub graded_clean: bool,
    pub graded_unit_regular: bool,
    pub is_loop: bool,
    /// `Err` holds the first certificate failure.
    pub certificates: Result<usize, String>,
}

impl CrossRow {
    pub fn constant(&self) -> bool {
        self.strongly_graded == self.is_loop && self.graded_clean == self.is_loop && self.graded_unit_regular == self.is_loop
    }

    pub fn passed(&self) -> bool {
        self.constant() && self.certificates.is_ok()
    }
}

/// One row per graph: the three verdicts, is_loop, and certificate checks.
pub fn crosscheck_row<A: PartialAction>(name: &str, ring: &SkewRing<A>, bound: usize) -> Result<CrossRow> {
    Ok(row_from_decisions(name, ring, &decide_all(ring, bound)?))
}

/// Builds a row from the three decisions of [`decide_all`], re-verifying
/// every certificate.
pub fn row_from_decisions<A: PartialAction>(name: &str, ring: &SkewRing<A>, decisions: &[Decision]) -> CrossRow {
    let mut certificates = Ok(0);
    for d in decisions {
        match verify_decision(ring, d) {
            Ok(()) => {
                if let Ok(n) = &mut certificates {
                    *n += d.certificates.len();
                }
            }
            Err(e) => {
                certificates = Err(format!("{}: {e}", d.property));
                break;
            }
        }
    }
    CrossRow {
        name: name.to_string(),
        strongly_graded: decisions[0].verdict,
        graded_clean: decisions[1].verdict,
        graded_unit_regular: decisions[2].verdict,
        is_loop: is_loop(ring.graph()),
        certificates,
    }
}
