//! The partial action α of the free group on D(X).
//!
//! D_g is the principal ideal generated by the idempotent 1_g, and
//! α_g: D_{g^{-1}} → D_g is the linear extension of
//! α_g(1_{g^{-1}} 1_h) = 1_g 1_{gh}.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{cylinder_partition, Cylinder};
use crate::error::{Error, Result};
use crate::function::{DFunction, FunctionAlgebra};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::scalar::Scalar;
use crate::word::{reduced_words_up_to, valid_words_up_to, GroupShape, ReducedWord};

/// A partial action of the free group on D(X), given by the units of its
/// domain ideals and the maps between them.
pub trait PartialAction: Sync {
    fn algebra(&self) -> &FunctionAlgebra;

    /// The generating idempotent of D_g.
    fn domain_unit(&self, g: &ReducedWord) -> Result<DFunction>;

    /// α_g(x); fails unless x ∈ D_{g^{-1}}.
    fn apply(&self, g: &ReducedWord, x: &DFunction) -> Result<DFunction>;

    fn contains(&self, g: &ReducedWord, x: &DFunction) -> Result<bool> {
        Ok(self.algebra().absorbs(&self.domain_unit(g)?, x))
    }
}

/// D_g described by its shape and generating idempotent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainIdeal {
    pub word: ReducedWord,
    pub shape: GroupShape,
    pub unit: DFunction,
}

impl DomainIdeal {
    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_full(&self, alg: &FunctionAlgebra) -> bool {
        self.unit == alg.unit()
    }
}

/// The action of Eq. α_g(1_{g^{-1}} 1_h) = 1_g 1_{gh}.
#[derive(Debug, Clone)]
pub struct Alpha {
    alg: FunctionAlgebra,
}

impl Alpha {
    pub fn new(alg: FunctionAlgebra) -> Alpha {
        Alpha { alg }
    }

    pub fn graph(&self) -> &Graph {
        self.alg.graph()
    }

    pub fn domain_ideal(&self, g: &ReducedWord) -> Result<DomainIdeal> {
        Ok(DomainIdeal {
            word: g.clone(),
            shape: g.classify(self.graph())?,
            unit: self.alg.word_indicator(g)?,
        })
    }

    /// Writes x ∈ D_{g^{-1}} as Σ c_i 1_{g^{-1}} 1_{h_i}, returning (c_i, h_i).
    pub fn decompose(&self, g: &ReducedWord, x: &DFunction) -> Result<Vec<(Scalar, ReducedWord)>> {
        let ginv = g.invert();
        let u = self.alg.word_indicator(&ginv)?;
        if !self.alg.absorbs(&u, x) {
            return Err(Error::NotInDomain { word: ginv.display(self.graph()).to_string() });
        }
        let graph = self.graph();
        // the domain X_{g^{-1}} is a single cylinder node (or empty)
        let domain = u.terms().next().map(|(c, _)| c.clone());
        let mut out = Vec::new();
        for (c, s) in x.terms() {
            let domain = domain.as_ref().expect("nonzero x lies in a nonzero ideal");
            let cell = domain.intersect(graph, c).unwrap_or_else(|| c.clone());
            let h = match cell {
                Cylinder::Path(p) => ReducedWord::path(&p),
                Cylinder::Vertex(_) => ReducedWord::identity(),
            };
            out.push((s.clone(), h));
        }
        Ok(out)
    }

    /// 1_g 1_{gh}.
    pub fn generator_image(&self, g: &ReducedWord, h: &ReducedWord) -> Result<DFunction> {
        let ug = self.alg.word_indicator(g)?;
        Ok(self.alg.mul(&ug, &self.alg.word_indicator(&g.multiply(h))?))
    }
}

impl PartialAction for Alpha {
    fn algebra(&self) -> &FunctionAlgebra {
        &self.alg
    }

    fn domain_unit(&self, g: &ReducedWord) -> Result<DFunction> {
        self.alg.word_indicator(g)
    }

    fn apply(&self, g: &ReducedWord, x: &DFunction) -> Result<DFunction> {
        if g.is_identity() {
            return Ok(x.clone());
        }
        let mut images = Vec::new();
        for (s, h) in self.decompose(g, x)? {
            images.push(self.alg.scale(&s, &self.generator_image(g, &h)?));
        }
        Ok(self.alg.sum(&images))
    }
}

/// Source vertex of a word with the convention s(h^{-1}) = r(h);
/// `None` for e and for words with empty domain.
pub fn word_source(graph: &Graph, g: &ReducedWord) -> Result<Option<VertexId>> {
    Ok(match g.classify(graph)? {
        GroupShape::Path(a) | GroupShape::PathPair { a, .. } => Some(graph.src(a[0])),
        GroupShape::InvPath(b) => Some(graph.dst(*b.last().unwrap())),
        GroupShape::Identity | GroupShape::EmptyDomain => None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    P1,
    P2,
    P3,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub g: String,
    pub h: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    /// Instances checked per axiom, in P1, P2, P3 order.
    pub checked: [usize; 3],
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations_of(&self, axiom: Axiom) -> usize {
        self.violations.iter().filter(|v| v.axiom == axiom).count()
    }
}

/// Words for the axiom grid: every word with nonempty domain, all
/// empty-domain words of length ≤ 2, and the first 8 of each longer length.
pub fn axiom_words(graph: &Graph, bound: usize) -> Vec<ReducedWord> {
    let mut out = valid_words_up_to(graph, bound);
    let mut per_len = vec![0usize; bound + 1];
    for w in reduced_words_up_to(graph, bound) {
        if w.classify(graph).map(|s| s.is_empty_domain()).unwrap_or(false) {
            let n = &mut per_len[w.len()];
            if w.len() <= 2 || *n < 8 {
                *n += 1;
                out.push(w);
            }
        }
    }
    out.sort();
    out
}

/// Every cylinder of depth at most `d`, as indicator functions.
pub fn spanning_indicators(alg: &FunctionAlgebra, d: usize) -> Vec<DFunction> {
    let g = alg.graph();
    let mut out: Vec<DFunction> = Vec::new();
    for depth in 0..=d {
        for c in cylinder_partition(g, depth) {
            let x = alg.indicator(&c).expect("partition cells are valid");
            if !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// Checks (P1) α_e = id, (P2) α_g(D_{g^{-1}} ∩ D_h) = D_g ∩ D_{gh} and
/// (P3) α_g α_h = α_{gh} on D_{h^{-1}} ∩ D_{(gh)^{-1}}, for words up to
/// `bound` and spanning elements built from cylinders up to `depth`.
pub fn verify_axioms<A: PartialAction>(action: &A, bound: usize, depth: usize) -> AxiomReport {
    let alg = action.algebra();
    let graph = alg.graph();
    let words = axiom_words(graph, bound);
    let spanning = spanning_indicators(alg, depth);
    let name = |w: &ReducedWord| w.display(graph).to_string();
    let e = ReducedWord::identity();
    let mut report = AxiomReport::default();

    for x in &spanning {
        report.checked[0] += 1;
        match action.apply(&e, x) {
            Ok(y) if y == *x => {}
            other => report.violations.push(AxiomViolation {
                axiom: Axiom::P1,
                g: "e".into(),
                h: "e".into(),
                detail: format!("alpha_e({}) = {}", alg.display(x), show(alg, &other)),
            }),
        }
    }

    let rows: Vec<([usize; 3], Vec<AxiomViolation>)> = words
        .par_iter()
        .map(|g| {
            let mut checked = [0; 3];
            let mut out = Vec::new();
            for h in &words {
                let mut push = |axiom: Axiom, detail: String| {
                    out.push(AxiomViolation { axiom, g: name(g), h: name(h), detail })
                };
                checked[1] += 1;
                if let Err(d) = check_p2(action, &spanning, g, h) {
                    push(Axiom::P2, d);
                }
                checked[2] += 1;
                if let Err(d) = check_p3(action, &spanning, g, h) {
                    push(Axiom::P3, d);
                }
            }
            (checked, out)
        })
        .collect();
    for (checked, violations) in rows {
        report.checked[1] += checked[1];
        report.checked[2] += checked[2];
        report.violations.extend(violations);
    }
    report
}

fn show(alg: &FunctionAlgebra, r: &Result<DFunction>) -> String {
    match r {
        Ok(x) => alg.display(x),
        Err(e) => format!("error: {e}"),
    }
}

fn check_p2<A: PartialAction>(
    action: &A,
    spanning: &[DFunction],
    g: &ReducedWord,
    h: &ReducedWord,
) -> std::result::Result<(), String> {
    let alg = action.algebra();
    let unit = |w: &ReducedWord| action.domain_unit(w).map_err(|e| e.to_string());
    let ginv = g.invert();
    let gh = g.multiply(h);
    let source = alg.mul(&unit(&ginv)?, &unit(h)?);
    let target = alg.mul(&unit(g)?, &unit(&gh)?);
    let image = action.apply(g, &source).map_err(|e| e.to_string())?;
    if image != target {
        return Err(format!("generator maps to {}, expected {}", alg.display(&image), alg.display(&target)));
    }
    let back = action.apply(&ginv, &target).map_err(|e| e.to_string())?;
    if back != source {
        return Err(format!("inverse image of {} is {}", alg.display(&target), alg.display(&back)));
    }
    for x in spanning {
        let x = alg.mul(&source, x);
        let y = action.apply(g, &x).map_err(|e| e.to_string())?;
        if !alg.absorbs(&target, &y) {
            return Err(format!("image of {} leaves D_g ∩ D_gh", alg.display(&x)));
        }
    }
    Ok(())
}

fn check_p3<A: PartialAction>(
    action: &A,
    spanning: &[DFunction],
    g: &ReducedWord,
    h: &ReducedWord,
) -> std::result::Result<(), String> {
    let alg = action.algebra();
    let unit = |w: &ReducedWord| action.domain_unit(w).map_err(|e| e.to_string());
    let gh = g.multiply(h);
    let base = alg.mul(&unit(&h.invert())?, &unit(&gh.invert())?);
    if base.is_zero() {
        return Ok(());
    }
    let mut xs = vec![base.clone()];
    xs.extend(spanning.iter().map(|c| alg.mul(&base, c)).filter(|x| !x.is_zero()));
    for x in &xs {
        let hx = action.apply(h, x).map_err(|e| e.to_string())?;
        let lhs = action.apply(g, &hx).map_err(|e| format!("alpha_h(x) = {}: {e}", alg.display(&hx)))?;
        let rhs = action.apply(&gh, x).map_err(|e| e.to_string())?;
        if lhs != rhs {
            return Err(format!(
                "x = {}: alpha_g(alpha_h(x)) = {}, alpha_gh(x) = {}",
                alg.display(x),
                alg.display(&lhs),
                alg.display(&rhs)
            ));
        }
    }
    Ok(())
}

/// Why an action fails to be global: X_edge misses the partition cell `cell`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonGlobal {
    pub edge: EdgeId,
    pub cell: Cylinder,
}

/// Decides whether D_f = D_e for every edge f, using the depth-1 partition:
/// X_f = X exactly when the partition is the single cell X_f.
pub fn is_global(graph: &Graph) -> Result<std::result::Result<(), NonGlobal>> {
    if graph.edge_count() == 0 {
        return Err(Error::EdgelessGraph);
    }
    let cells = cylinder_partition(graph, 1);
    for f in graph.edges() {
        let own = Cylinder::Path(vec![f]);
        if let Some(cell) = cells.iter().find(|c| **c != own) {
            return Ok(Err(NonGlobal { edge: f, cell: cell.clone() }));
        }
    }
    Ok(Ok(()))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotencyReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

/// D_g · D_g = D_g for every word up to `bound`: 1_g is idempotent for g ≠ e,
/// and for D_e every combination x of generators satisfies x·y = x with
/// y = Σ_{v ∈ V} 1_v, V the sources of the generators involved.
pub fn check_idempotency(alg: &FunctionAlgebra, bound: usize) -> Result<IdempotencyReport> {
    let graph = alg.graph();
    let mut report = IdempotencyReport::default();
    let words = reduced_words_up_to(graph, bound);
    for g in &words {
        if g.is_identity() {
            continue;
        }
        report.checked += 1;
        let u = alg.word_indicator(g)?;
        if alg.mul(&u, &u) != u {
            report.violations.push(format!("1_{} is not idempotent", g.display(graph)));
        }
    }

    let mut combo = Vec::new();
    let mut sources: Vec<VertexId> = Vec::new();
    for (i, g) in words.iter().filter(|g| !g.is_identity()).enumerate() {
        let Some(s) = word_source(graph, g)? else { continue };
        let x = alg.word_indicator(g)?;
        report.checked += 1;
        let y = alg.vertex(s);
        if alg.mul(&x, &y) != x {
            report.violations.push(format!("1_{} * 1_{} != 1_{}", g.display(graph), graph.vertex_name(s), g.display(graph)));
        }
        combo.push(alg.scale(&alg.scalar(i as i64 + 1), &x));
        sources.push(s);
    }
    for v in graph.vertices() {
        combo.push(alg.scale(&alg.scalar(-(v.0 as i64) - 1), &alg.vertex(v)));
        sources.push(v);
    }
    sources.sort();
    sources.dedup();
    let x = alg.sum(&combo);
    let y = alg.sum(&sources.iter().map(|&v| alg.vertex(v)).collect::<Vec<_>>());
    report.checked += 1;
    if alg.mul(&x, &y) != x {
        report.violations.push(format!("x * y != x for x = {}", alg.display(&x)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::Field;

    fn alpha(g: Graph) -> Alpha {
        Alpha::new(FunctionAlgebra::new(g, Field::Rational))
    }

    fn w(a: &Alpha, t: &str) -> ReducedWord {
        ReducedWord::parse(t, a.graph()).unwrap()
    }

    fn f(a: &Alpha, t: &str) -> DFunction {
        a.algebra().parse(t).unwrap()
    }

    #[test]
    fn domain_ideal_examples() {
        let r = alpha(corpus::rose2());
        assert_eq!(r.domain_ideal(&w(&r, "a.b'")).unwrap().unit, f(&r, "1[a]"));
        assert!(r.domain_ideal(&ReducedWord::identity()).unwrap().is_full(r.algebra()));
        assert!(r.domain_ideal(&w(&r, "a'.b")).unwrap().is_zero());
    }

    #[test]
    fn membership_examples() {
        let r = alpha(corpus::rose2());
        assert!(r.contains(&w(&r, "a"), &f(&r, "1[a.b]")).unwrap());
        assert!(!r.contains(&w(&r, "a"), &f(&r, "1[b]")).unwrap());
        assert!(r.contains(&w(&r, "a'.b"), &DFunction::zero()).unwrap());
    }

    #[test]
    fn alpha_examples() {
        let lp = alpha(corpus::loop_graph());
        assert_eq!(lp.apply(&w(&lp, "f"), &f(&lp, "1[v]")).unwrap(), f(&lp, "1[v]"));
        let r = alpha(corpus::rose2());
        assert_eq!(r.apply(&w(&r, "a"), &f(&r, "1[b]")).unwrap(), f(&r, "1[a.b]"));
        let a2 = alpha(corpus::a2());
        assert_eq!(a2.apply(&w(&a2, "f"), &f(&a2, "1[w]")).unwrap(), f(&a2, "1[v]"));
        assert!(matches!(
            a2.apply(&w(&a2, "f"), &f(&a2, "1[v]")),
            Err(Error::NotInDomain { .. })
        ));
    }

    #[test]
    fn alpha_round_trips() {
        let t = alpha(corpus::toeplitz());
        for g in valid_words_up_to(t.graph(), 3) {
            let u = t.domain_unit(&g.invert()).unwrap();
            for x in spanning_indicators(t.algebra(), 3) {
                let x = t.algebra().mul(&u, &x);
                let y = t.apply(&g, &x).unwrap();
                assert_eq!(t.apply(&g.invert(), &y).unwrap(), x);
            }
        }
    }

    #[test]
    fn axioms_hold_on_small_bounds() {
        for (name, g) in corpus::all() {
            let report = verify_axioms(&alpha(g), 2, 2);
            assert!(report.passed(), "{name}: {:?}", report.violations.first());
        }
    }

    #[test]
    fn globality_examples() {
        assert_eq!(is_global(&corpus::loop_graph()).unwrap(), Ok(()));
        let r = corpus::rose2();
        let b = Cylinder::Path(vec![r.edge("b").unwrap()]);
        assert_eq!(is_global(&r).unwrap(), Err(NonGlobal { edge: r.edge("a").unwrap(), cell: b }));
        let a2 = corpus::a2();
        let err = is_global(&a2).unwrap().unwrap_err();
        assert_eq!(err.cell, Cylinder::Vertex(a2.vertex("w").unwrap()));
        let edgeless = Graph::new(&crate::graph::GraphDef::new(["v"], [])).unwrap();
        assert!(matches!(is_global(&edgeless), Err(Error::EdgelessGraph)));
    }

    #[test]
    fn idempotency_holds() {
        for (_, g) in corpus::all() {
            let report = check_idempotency(&FunctionAlgebra::new(g, Field::Rational), 3).unwrap();
            assert!(report.violations.is_empty());
        }
    }
}
