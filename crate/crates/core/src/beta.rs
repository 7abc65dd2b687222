//! The vertex-free construction: D^s(X) spanned by the indicators 1_p,
//! p ∈ 𝔽, with the partial action β generated by the edge symmetries
//! β_f(1_{f^{-1}} 1_h) = 1_f 1_{fh}.
//!
//! Finite graphs have no infinite emitters, so every formal series is a
//! finite sum and D^s(X) coincides with D(X) as a set of functions. Elements
//! are kept in a generating presentation without vertex atoms and compared
//! through the normal form of [`FunctionAlgebra`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::{spanning_indicators, PartialAction};
use crate::boundary::Cylinder;
use crate::error::{Error, Result};
use crate::function::{DFunction, FunctionAlgebra};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::lpa::{ck_instances, check_instances, phi_with, CkInstance, LpaTerm, RelationCheck};
use crate::scalar::Scalar;
use crate::skew::{SkewElement, SkewRing};
use crate::word::{reduced_words_up_to, Letter, ReducedWord};
use crate::Alpha;

/// A finite combination Σ s_p 1_p; vertex indicators never appear.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DsFunction {
    terms: BTreeMap<ReducedWord, Scalar>,
}

impl DsFunction {
    pub fn zero() -> DsFunction {
        DsFunction::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ReducedWord, &Scalar)> {
        self.terms.iter()
    }
}

/// The edge replacing 1_v at a sink: the least edge ending at v.
fn sink_edge(graph: &Graph, v: VertexId) -> Option<EdgeId> {
    graph.in_edges(v).iter().copied().min_by(|a, b| graph.edge_name(*a).cmp(graph.edge_name(*b)))
}

/// Word-indexed stand-ins for 1_v: Σ_{s(f)=v} 1_f at a regular vertex and
/// 1_{f_v^{-1}} at a sink.
fn replacement_words(graph: &Graph, v: VertexId) -> Result<Vec<ReducedWord>> {
    if graph.is_isolated(v) {
        return Err(Error::IsolatedVertex(graph.vertex_name(v).to_string()));
    }
    if graph.is_regular(v) {
        return Ok(graph.out_edges(v).iter().map(|&f| ReducedWord::edge(f)).collect());
    }
    let f = sink_edge(graph, v).expect("a non-isolated sink receives an edge");
    Ok(vec![ReducedWord::edge(f).invert()])
}

/// How [`BetaAction::extend`] composes generator maps; `Reversed` is a
/// deliberately wrong order used to exercise the semi-saturation check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Composition {
    Standard,
    Reversed,
}

/// D^s(X) together with β. Graphs with isolated vertices are rejected.
#[derive(Debug, Clone)]
pub struct BetaAction {
    alg: FunctionAlgebra,
    composition: Composition,
}

impl BetaAction {
    pub fn new(alg: FunctionAlgebra) -> Result<BetaAction> {
        let g = alg.graph();
        if let Some(v) = g.vertices().find(|&v| g.is_isolated(v)) {
            return Err(Error::IsolatedVertex(g.vertex_name(v).to_string()));
        }
        Ok(BetaAction { alg, composition: Composition::Standard })
    }

    /// The same action with its composition order corrupted.
    pub fn corrupted(&self) -> BetaAction {
        BetaAction { alg: self.alg.clone(), composition: Composition::Reversed }
    }

    pub fn graph(&self) -> &Graph {
        self.alg.graph()
    }

    pub fn vertex_replacement(&self, v: VertexId) -> Result<DsFunction> {
        let one = self.alg.field().one();
        let terms = replacement_words(self.graph(), v)?.into_iter().map(|w| (w, one.clone())).collect();
        Ok(DsFunction { terms })
    }

    /// The generating presentation of a function of D(X).
    pub fn from_dfunction(&self, x: &DFunction) -> DsFunction {
        let mut terms: BTreeMap<ReducedWord, Scalar> = BTreeMap::new();
        for (c, s) in x.terms() {
            let words = match c {
                Cylinder::Path(p) => vec![ReducedWord::path(p)],
                Cylinder::Vertex(v) => replacement_words(self.graph(), *v).expect("no isolated vertices"),
            };
            for w in words {
                terms.insert(w, s.clone());
            }
        }
        DsFunction { terms }
    }

    /// Σ s_p 1_p as a function on the boundary.
    pub fn to_dfunction(&self, x: &DsFunction) -> Result<DFunction> {
        let mut parts = Vec::with_capacity(x.terms.len());
        for (w, s) in &x.terms {
            parts.push(self.alg.scale(s, &self.alg.word_indicator(w)?));
        }
        Ok(self.alg.sum(&parts))
    }

    /// Builds an element from arbitrary word terms, then canonicalizes.
    pub fn from_terms(&self, terms: Vec<(ReducedWord, Scalar)>) -> Result<DsFunction> {
        let mut acc = DFunction::zero();
        for (w, s) in terms {
            acc = self.alg.add(&acc, &self.alg.scale(&s, &self.alg.word_indicator(&w)?));
        }
        Ok(self.from_dfunction(&acc))
    }

    pub fn indicator(&self, w: &ReducedWord) -> Result<DsFunction> {
        Ok(self.from_dfunction(&self.alg.word_indicator(w)?))
    }

    pub fn mul(&self, x: &DsFunction, y: &DsFunction) -> Result<DsFunction> {
        Ok(self.from_dfunction(&self.alg.mul(&self.to_dfunction(x)?, &self.to_dfunction(y)?)))
    }

    pub fn add(&self, x: &DsFunction, y: &DsFunction) -> Result<DsFunction> {
        Ok(self.from_dfunction(&self.alg.add(&self.to_dfunction(x)?, &self.to_dfunction(y)?)))
    }

    pub fn equals(&self, x: &DsFunction, y: &DsFunction) -> Result<bool> {
        Ok(self.to_dfunction(x)? == self.to_dfunction(y)?)
    }

    fn in_ideal(&self, unit: &DFunction, x: &DFunction) -> bool {
        self.alg.mul(unit, x) == *x
    }

    /// β_l for a single letter l, on D^s_{l^{-1}}; `None` outside it.
    fn letter_map(&self, l: Letter, x: &DFunction) -> Result<Option<DFunction>> {
        let lw = ReducedWord::letter(l);
        let source = self.alg.word_indicator(&lw.invert())?;
        if !self.in_ideal(&source, x) {
            return Ok(None);
        }
        let target = self.alg.word_indicator(&lw)?;
        let mut parts = Vec::new();
        for (h, s) in self.from_dfunction(x).terms {
            let image = self.alg.mul(&target, &self.alg.word_indicator(&lw.multiply(&h))?);
            parts.push(self.alg.scale(&s, &image));
        }
        Ok(Some(self.alg.sum(&parts)))
    }

    /// β_f on D^s_{f^{-1}}.
    pub fn generator(&self, f: EdgeId, x: &DsFunction) -> Result<DsFunction> {
        let w = ReducedWord::edge(f);
        let image = self
            .letter_map(Letter::pos(f), &self.to_dfunction(x)?)?
            .ok_or_else(|| Error::NotInDomain { word: w.invert().display(self.graph()).to_string() })?;
        Ok(self.from_dfunction(&image))
    }

    fn extend_fn(&self, g: &ReducedWord, x: &DFunction) -> Result<Option<DFunction>> {
        let mut letters: Vec<Letter> = g.letters().to_vec();
        if self.composition == Composition::Standard {
            letters.reverse();
        }
        let mut cur = x.clone();
        for l in letters {
            match self.letter_map(l, &cur)? {
                Some(y) => cur = y,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    /// β_g = β_{l_1} ∘ ... ∘ β_{l_k} for g = l_1 ... l_k, applied
    /// right to left; `None` when an intermediate value leaves the domain of
    /// the next generator.
    pub fn extend(&self, g: &ReducedWord, x: &DsFunction) -> Result<Option<DsFunction>> {
        Ok(self.extend_fn(g, &self.to_dfunction(x)?)?.map(|y| self.from_dfunction(&y)))
    }

    /// `2 * 1[a.b] - 1[f']`; zero prints as `0`.
    pub fn display(&self, x: &DsFunction) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, s)) in x.terms.iter().enumerate() {
            let neg = s.is_negative();
            let mag = s.abs();
            out.push_str(match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            if !mag.is_one() {
                let _ = write!(out, "{mag} * ");
            }
            let _ = write!(out, "1[{}]", w.display(self.graph()));
        }
        out
    }
}

impl PartialAction for BetaAction {
    fn algebra(&self) -> &FunctionAlgebra {
        &self.alg
    }

    fn domain_unit(&self, g: &ReducedWord) -> Result<DFunction> {
        self.alg.word_indicator(g)
    }

    fn apply(&self, g: &ReducedWord, x: &DFunction) -> Result<DFunction> {
        self.extend_fn(g, x)?.ok_or_else(|| Error::NotInDomain { word: g.invert().display(self.graph()).to_string() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiSaturationViolation {
    pub t: String,
    pub s: String,
    pub input: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiSaturationReport {
    pub pairs: usize,
    pub checked: usize,
    pub violations: Vec<SemiSaturationViolation>,
}

impl SemiSaturationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Spanning set for the β checks: indicators of all cells up to depth 2.
fn spanning(beta: &BetaAction) -> Vec<DFunction> {
    spanning_indicators(&beta.alg, 2)
}

/// β_{ts} = β_t β_s, including agreement of domains, for reduced s, t with
/// |t| + |s| ≤ `bound` and |ts| = |t| + |s|.
pub fn verify_semi_saturated(beta: &BetaAction, bound: usize) -> Result<SemiSaturationReport> {
    let graph = beta.graph();
    let words = reduced_words_up_to(graph, bound);
    let pairs: Vec<(&ReducedWord, &ReducedWord)> = words
        .iter()
        .flat_map(|t| words.iter().map(move |s| (t, s)))
        .filter(|(t, s)| t.len() + s.len() <= bound && t.multiply(s).len() == t.len() + s.len())
        .collect();
    let xs = spanning(beta);
    let rows: Vec<Result<(usize, Vec<SemiSaturationViolation>)>> = pairs
        .par_iter()
        .map(|(t, s)| {
            let ts = t.multiply(s);
            let mut bad = Vec::new();
            for x in &xs {
                let direct = beta.extend_fn(&ts, x)?;
                let composed = match beta.extend_fn(s, x)? {
                    Some(y) => beta.extend_fn(t, &y)?,
                    None => None,
                };
                if direct != composed {
                    let show = |v: &Option<DFunction>| v.as_ref().map_or("undefined".to_string(), |d| beta.alg.display(d));
                    bad.push(SemiSaturationViolation {
                        t: t.display(graph).to_string(),
                        s: s.display(graph).to_string(),
                        input: beta.alg.display(x),
                        detail: format!("{} != {}", show(&direct), show(&composed)),
                    });
                }
            }
            Ok((xs.len(), bad))
        })
        .collect();
    let mut report = SemiSaturationReport { pairs: pairs.len(), ..Default::default() };
    for row in rows {
        let (n, bad) = row?;
        report.checked += n;
        report.violations.extend(bad);
    }
    Ok(report)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub pairs: usize,
    pub violations: Vec<String>,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For distinct edges a, b: 1_a 1_b = 0 and 1_a x 1_b = 0 on a spanning set,
/// so the ideals D^s_a and D^s_b meet only in 0.
pub fn verify_orthogonality(beta: &BetaAction) -> Result<OrthogonalityReport> {
    let g = beta.graph();
    let alg = &beta.alg;
    let xs = spanning(beta);
    let mut report = OrthogonalityReport::default();
    for a in g.edges() {
        for b in g.edges().filter(|&b| b != a) {
            report.pairs += 1;
            let ua = beta.to_dfunction(&beta.indicator(&ReducedWord::edge(a))?)?;
            let ub = beta.to_dfunction(&beta.indicator(&ReducedWord::edge(b))?)?;
            let name = format!("{} * {}", g.edge_name(a), g.edge_name(b));
            if !alg.mul(&ua, &ub).is_zero() {
                report.violations.push(format!("1[{name}] != 0"));
            } else if let Some(x) = xs.iter().find(|x| !alg.mul(&alg.mul(&ua, x), &ub).is_zero()) {
                report.violations.push(format!("{name}: ideals share {}", alg.display(x)));
            }
        }
    }
    Ok(report)
}

/// L_K(E) ≅ D^s(X) ⋆_β 𝔽: the CK relations hold for the β-side generator
/// images (1_f δ_f, 1_{f^{-1}} δ_{f^{-1}}, vertex replacements at δ_e), the
/// vertex images sum to 1, and each side agrees with the α realization.
pub fn iso_agreement_check(beta: &BetaAction) -> Result<Vec<RelationCheck>> {
    let graph = beta.graph();
    let bring = SkewRing::new(beta.clone());
    let aring = SkewRing::new(Alpha::new(beta.alg.clone()));
    let bgen = |t: &LpaTerm| -> Result<SkewElement> {
        match t {
            LpaTerm::Vertex(v) => bring.monomial(beta.to_dfunction(&beta.vertex_replacement(*v)?)?, ReducedWord::identity()),
            LpaTerm::Edge(e) => bring.unit_monomial(&ReducedWord::edge(*e)),
            LpaTerm::Ghost(e) => bring.unit_monomial(&ReducedWord::edge(*e).invert()),
            _ => unreachable!("not a generator"),
        }
    };
    let agen = |t: &LpaTerm| -> Result<SkewElement> {
        match t {
            LpaTerm::Vertex(v) => aring.monomial(aring.algebra().vertex(*v), ReducedWord::identity()),
            LpaTerm::Edge(e) => aring.unit_monomial(&ReducedWord::edge(*e)),
            LpaTerm::Ghost(e) => aring.unit_monomial(&ReducedWord::edge(*e).invert()),
            _ => unreachable!("not a generator"),
        }
    };
    let bphi = |t: &LpaTerm| phi_with(&bring, t, &bgen);
    let aphi = |t: &LpaTerm| phi_with(&aring, t, &agen);

    let instances = ck_instances(graph);
    let mut checks = check_instances(&bring, instances.clone(), &bphi);
    let unit = LpaTerm::Sum(graph.vertices().map(LpaTerm::Vertex).collect());
    let unit_check = match bphi(&unit) {
        Ok(x) if x == bring.identity() => (true, bring.display(&x)),
        Ok(x) => (false, format!("{} != 1", bring.display(&x))),
        Err(e) => (false, e.to_string()),
    };
    checks.push(RelationCheck {
        relation: 0,
        name: format!("(unit) {} = 1", unit.display(graph)),
        passed: unit_check.0,
        detail: unit_check.1,
    });
    let sides: Vec<&LpaTerm> = instances.iter().flat_map(|i: &CkInstance| [&i.lhs, &i.rhs]).chain([&unit]).collect();
    for (k, check) in checks.iter_mut().enumerate() {
        for t in &sides[2 * k..(2 * k + 2).min(sides.len())] {
            match (bphi(t), aphi(t)) {
                (Ok(b), Ok(a)) if a == b => {}
                (Ok(b), Ok(a)) => {
                    check.passed = false;
                    check.detail = format!("beta {} != alpha {}", bring.display(&b), aring.display(&a));
                }
                (Err(e), _) | (_, Err(e)) => {
                    check.passed = false;
                    check.detail = e.to_string();
                }
            }
        }
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::Field;

    fn beta(g: Graph) -> BetaAction {
        BetaAction::new(FunctionAlgebra::new(g, Field::Rational)).unwrap()
    }

    fn word(b: &BetaAction, s: &str) -> ReducedWord {
        ReducedWord::parse(s, b.graph()).unwrap()
    }

    #[test]
    fn vertex_replacements() {
        let a2 = beta(corpus::a2());
        let w = a2.graph().vertex("w").unwrap();
        let v = a2.graph().vertex("v").unwrap();
        assert_eq!(a2.display(&a2.vertex_replacement(w).unwrap()), "1[f']");
        assert_eq!(a2.display(&a2.vertex_replacement(v).unwrap()), "1[f]");
        let r = beta(corpus::rose2());
        let v = r.graph().vertex("v").unwrap();
        assert_eq!(r.display(&r.vertex_replacement(v).unwrap()), "1[a] + 1[b]");
        for b in [a2, r] {
            for v in b.graph().vertices() {
                let d = b.to_dfunction(&b.vertex_replacement(v).unwrap()).unwrap();
                assert_eq!(d, b.alg.vertex(v));
            }
        }
    }

    #[test]
    fn generator_examples() {
        let r = beta(corpus::rose2());
        let x = r.mul(&r.indicator(&word(&r, "a'")).unwrap(), &r.indicator(&word(&r, "b")).unwrap()).unwrap();
        let y = r.generator(EdgeId(0), &x).unwrap();
        assert!(r.equals(&y, &r.indicator(&word(&r, "a.b")).unwrap()).unwrap());
        let a2 = beta(corpus::a2());
        let f = a2.graph().edge("f").unwrap();
        let w = a2.graph().vertex("w").unwrap();
        let y = a2.generator(f, &a2.vertex_replacement(w).unwrap()).unwrap();
        assert_eq!(a2.display(&y), "1[f]");
        let lp = beta(corpus::loop_graph());
        let one = lp.indicator(&ReducedWord::identity()).unwrap();
        assert_eq!(lp.generator(EdgeId(0), &one).unwrap(), one);
    }

    #[test]
    fn extend_examples() {
        let r = beta(corpus::rose2());
        let b = r.indicator(&word(&r, "b")).unwrap();
        let y = r.extend(&word(&r, "a.b'"), &b).unwrap().unwrap();
        assert_eq!(y, r.indicator(&word(&r, "a")).unwrap());
        assert_eq!(r.extend(&ReducedWord::identity(), &b).unwrap(), Some(b.clone()));
        assert_eq!(r.extend(&word(&r, "a'"), &b).unwrap(), None);
        assert!(matches!(r.generator(EdgeId(0), &DsFunction::zero()), Ok(z) if z.is_zero()));
    }

    #[test]
    fn isolated_vertices_are_rejected() {
        let g = Graph::from_json(r#"{"vertices":["v","u"],"edges":[{"id":"f","src":"v","dst":"v"}]}"#).unwrap();
        assert!(matches!(BetaAction::new(FunctionAlgebra::new(g, Field::Rational)), Err(Error::IsolatedVertex(_))));
    }

    #[test]
    fn semi_saturation_and_its_mutation() {
        let r = beta(corpus::rose2());
        assert!(verify_semi_saturated(&r, 3).unwrap().passed());
        assert!(!verify_semi_saturated(&r.corrupted(), 3).unwrap().passed());
        assert!(verify_semi_saturated(&beta(corpus::loop_graph()), 4).unwrap().passed());
    }

    #[test]
    fn orthogonality() {
        for g in [corpus::rose2(), corpus::toeplitz()] {
            let rep = verify_orthogonality(&beta(g)).unwrap();
            assert!(rep.passed());
            assert_eq!(rep.pairs, 2);
        }
        assert_eq!(verify_orthogonality(&beta(corpus::loop_graph())).unwrap().pairs, 0);
    }

    #[test]
    fn iso_agreement() {
        let checks = iso_agreement_check(&beta(corpus::a2())).unwrap();
        assert_eq!(checks.len(), 7);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        let checks = iso_agreement_check(&beta(corpus::rose2())).unwrap();
        assert!(checks.iter().all(|c| c.passed));
        assert!(checks.iter().any(|c| c.name == "(3) a* b = 0"), "{:?}", checks.iter().map(|c| &c.name).collect::<Vec<_>>());
    }

    #[test]
    fn generator_agrees_with_alpha() {
        for (_, g) in corpus::all() {
            let b = beta(g);
            let alpha = Alpha::new(b.alg.clone());
            for f in b.graph().edges() {
                let w = ReducedWord::edge(f);
                let unit = b.alg.word_indicator(&w.invert()).unwrap();
                for x in spanning_indicators(&b.alg, 3) {
                    let x = b.alg.mul(&unit, &x);
                    let lhs = b.to_dfunction(&b.generator(f, &b.from_dfunction(&x)).unwrap()).unwrap();
                    assert_eq!(lhs, alpha.apply(&w, &x).unwrap());
                }
            }
        }
    }
}
