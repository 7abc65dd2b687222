//! The partial skew group ring D(X) ⋆_α 𝔽.
//!
//! Elements are finite sums Σ r_g δ_g with r_g ∈ D_g, multiplied by
//! (r δ_g)(r' δ_h) = α_g(α_{g^{-1}}(r) r') δ_{gh}.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::{is_global, PartialAction};
use crate::boundary::Cylinder;
use crate::error::{Error, Result};
use crate::function::{DFunction, FunctionAlgebra};
use crate::graph::{EdgeId, Graph};
use crate::linalg;
use crate::random::{trial_rng, Sampler};
use crate::scalar::Scalar;
use crate::word::{valid_words_up_to, ReducedWord};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SkewElement {
    comps: BTreeMap<ReducedWord, DFunction>,
}

impl SkewElement {
    pub fn zero() -> SkewElement {
        SkewElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// r_g, or zero.
    pub fn grade_component(&self, g: &ReducedWord) -> DFunction {
        self.comps.get(g).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> Vec<ReducedWord> {
        self.comps.keys().cloned().collect()
    }

    pub fn components(&self) -> impl Iterator<Item = (&ReducedWord, &DFunction)> {
        self.comps.iter()
    }

    /// The degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self) -> Option<&ReducedWord> {
        match self.comps.len() {
            1 => self.comps.keys().next(),
            _ => None,
        }
    }

    fn insert(&mut self, g: ReducedWord, r: DFunction) {
        if !r.is_zero() {
            self.comps.insert(g, r);
        }
    }
}

/// Which side an annihilating element multiplies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// z·x = 0
    Left,
    /// x·z = 0
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inversion {
    Inverse(SkewElement),
    NotInvertible { z: SkewElement, side: Side },
    Unknown { depth: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrongEvidence {
    /// For each g: x ∈ R_g, y ∈ R_{g^{-1}} with x·y = 1.
    Factorizations(Vec<(ReducedWord, SkewElement, SkewElement)>),
    /// 1_cell δ_e lies in R_e but not in R_f R_{f^{-1}} ⊆ D_f δ_e.
    Obstruction { edge: EdgeId, cell: Cylinder },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongGrading {
    pub verdict: bool,
    pub evidence: StrongEvidence,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssocReport {
    pub trials: usize,
    pub violations: Vec<String>,
}

impl AssocReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct SkewRing<A> {
    action: A,
}

impl<A: PartialAction> SkewRing<A> {
    pub fn new(action: A) -> SkewRing<A> {
        SkewRing { action }
    }

    pub fn action(&self) -> &A {
        &self.action
    }

    pub fn algebra(&self) -> &FunctionAlgebra {
        self.action.algebra()
    }

    pub fn graph(&self) -> &Graph {
        self.algebra().graph()
    }

    /// r δ_g; r must lie in D_g.
    pub fn monomial(&self, r: DFunction, g: ReducedWord) -> Result<SkewElement> {
        self.algebra().check(&r)?;
        g.classify(self.graph())?;
        if !self.action.contains(&g, &r)? {
            return Err(Error::NotInDomain { word: g.display(self.graph()).to_string() });
        }
        let mut x = SkewElement::zero();
        x.insert(g, r);
        Ok(x)
    }

    /// u_g δ_g with u_g the unit of D_g.
    pub fn unit_monomial(&self, g: &ReducedWord) -> Result<SkewElement> {
        let u = self.action.domain_unit(g)?;
        self.monomial(u, g.clone())
    }

    /// Validates every component against this ring.
    pub fn check(&self, x: &SkewElement) -> Result<()> {
        for (g, r) in &x.comps {
            self.monomial(r.clone(), g.clone())?;
        }
        Ok(())
    }

    pub fn identity(&self) -> SkewElement {
        let mut x = SkewElement::zero();
        x.insert(ReducedWord::identity(), self.algebra().unit());
        x
    }

    pub fn add(&self, x: &SkewElement, y: &SkewElement) -> SkewElement {
        let alg = self.algebra();
        let mut out = x.clone();
        for (g, r) in &y.comps {
            let sum = alg.add(&out.grade_component(g), r);
            out.comps.remove(g);
            out.insert(g.clone(), sum);
        }
        out
    }

    pub fn neg(&self, x: &SkewElement) -> SkewElement {
        self.scale(&self.algebra().scalar(-1), x)
    }

    pub fn sub(&self, x: &SkewElement, y: &SkewElement) -> SkewElement {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, lambda: &Scalar, x: &SkewElement) -> SkewElement {
        let mut out = SkewElement::zero();
        for (g, r) in &x.comps {
            out.insert(g.clone(), self.algebra().scale(lambda, r));
        }
        out
    }

    /// (r δ_g)(r' δ_h) = α_g(α_{g^{-1}}(r) r') δ_{gh}, extended bi-additively.
    pub fn multiply(&self, x: &SkewElement, y: &SkewElement) -> Result<SkewElement> {
        let alg = self.algebra();
        let mut acc: BTreeMap<ReducedWord, Vec<DFunction>> = BTreeMap::new();
        for (g, r) in &x.comps {
            let pulled = self.action.apply(&g.invert(), r)?;
            for (h, s) in &y.comps {
                let inner = alg.mul(&pulled, s);
                if inner.is_zero() {
                    continue;
                }
                let term = self.action.apply(g, &inner)?;
                acc.entry(g.multiply(h)).or_default().push(term);
            }
        }
        let mut out = SkewElement::zero();
        for (w, terms) in acc {
            out.insert(w, alg.sum(&terms));
        }
        Ok(out)
    }

    pub fn product(&self, factors: &[&SkewElement]) -> Result<SkewElement> {
        let mut acc = self.identity();
        for f in factors {
            acc = self.multiply(&acc, f)?;
        }
        Ok(acc)
    }

    /// A random element with up to `max_comps` components drawn from the
    /// sampler's words; each component is a random function cut down to D_g.
    pub fn random_element(&self, s: &Sampler, rng: &mut impl Rng, max_comps: usize) -> SkewElement {
        let alg = self.algebra();
        let mut x = SkewElement::zero();
        for _ in 0..rng.gen_range(1..=max_comps) {
            let g = s.word(rng);
            let u = self.action.domain_unit(&g).expect("sampled words belong to the graph");
            let r = alg.mul(&u, &s.dfunction(rng, 3));
            let r = if r.is_zero() { u } else { r };
            let sum = alg.add(&x.grade_component(&g), &r);
            x.comps.remove(&g);
            x.insert(g, sum);
        }
        x
    }

    /// `(<function>) d[<word>] + ...`, or `0`.
    pub fn display(&self, x: &SkewElement) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        x.comps
            .iter()
            .map(|(g, r)| format!("({}) d[{}]", self.algebra().display(r), g.display(self.graph())))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn parse(&self, text: &str) -> Result<SkewElement> {
        let t = text.trim();
        if t == "0" {
            return Ok(SkewElement::zero());
        }
        let mut out = SkewElement::zero();
        let mut rest = t;
        let mut offset = 0;
        loop {
            let syntax = |position: usize, m: &str| Error::Syntax { position, message: m.to_string() };
            let trimmed = rest.trim_start();
            offset += rest.len() - trimmed.len();
            let (negative, body) = match trimmed.strip_prefix('-') {
                Some(b) => (true, b.trim_start()),
                None => (false, trimmed),
            };
            let body_start = offset + (trimmed.len() - body.len());
            let body = body.strip_prefix('(').ok_or_else(|| syntax(body_start, "expected `(`"))?;
            let close = matching_paren(body).ok_or_else(|| syntax(body_start, "unbalanced `(`"))?;
            let r = self.algebra().parse(&body[..close])?;
            let after = body[close + 1..].trim_start();
            let after = after.strip_prefix("d[").ok_or_else(|| syntax(body_start + close + 1, "expected `d[`"))?;
            let end = after.find(']').ok_or_else(|| syntax(body_start + close + 1, "expected `]`"))?;
            let g = ReducedWord::parse(&after[..end], self.graph())?;
            let r = if negative { self.algebra().neg(&r) } else { r };
            out = self.add(&out, &self.monomial(r, g)?);
            let tail = after[end + 1..].trim_start();
            offset = t.len() - tail.len();
            if tail.is_empty() {
                return Ok(out);
            }
            if let Some(next) = tail.strip_prefix('+') {
                offset += 1;
                rest = next;
            } else if tail.starts_with('-') {
                rest = tail;
            } else {
                return Err(syntax(offset, "expected `+` or `-`"));
            }
        }
    }
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 1;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// (xy)z = x(yz) on `trials` random triples whose support words have length
/// at most `depth`. `mul` is the multiplication under test.
pub fn check_associativity_with<A, M>(
    ring: &SkewRing<A>,
    trials: usize,
    depth: usize,
    seed: u64,
    mul: M,
) -> AssocReport
where
    A: PartialAction,
    M: Fn(&SkewElement, &SkewElement) -> Result<SkewElement> + Sync,
{
    let sampler = Sampler::new(ring.algebra(), depth, depth);
    let violations: Vec<Option<String>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let x = ring.random_element(&sampler, &mut rng, 3);
            let y = ring.random_element(&sampler, &mut rng, 3);
            let z = ring.random_element(&sampler, &mut rng, 3);
            let lhs = mul(&x, &y).and_then(|xy| mul(&xy, &z));
            let rhs = mul(&y, &z).and_then(|yz| mul(&x, &yz));
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if l == r => None,
                (l, r) => Some(format!(
                    "trial {t}: x = {}, y = {}, z = {}: (xy)z = {}, x(yz) = {}",
                    ring.display(&x),
                    ring.display(&y),
                    ring.display(&z),
                    show(ring, &l),
                    show(ring, &r)
                )),
            }
        })
        .collect();
    AssocReport { trials, violations: violations.into_iter().flatten().collect() }
}

pub fn check_associativity<A: PartialAction>(
    ring: &SkewRing<A>,
    trials: usize,
    depth: usize,
    seed: u64,
) -> AssocReport {
    check_associativity_with(ring, trials, depth, seed, |x, y| ring.multiply(x, y))
}

fn show<A: PartialAction>(ring: &SkewRing<A>, r: &Result<SkewElement>) -> String {
    match r {
        Ok(x) => ring.display(x),
        Err(e) => format!("error: {e}"),
    }
}

/// Exact verdict from globality of the action, with evidence: identity
/// factorizations u_g δ_g · u_{g^{-1}} δ_{g^{-1}} = 1 for all |g| ≤ bound, or
/// a cell outside X_f obstructing R_f R_{f^{-1}} = R_e.
pub fn check_strong_grading<A: PartialAction>(ring: &SkewRing<A>, bound: usize) -> Result<StrongGrading> {
    let graph = ring.graph();
    match is_global(graph)? {
        Ok(()) => {
            let one = ring.identity();
            let mut rows = Vec::new();
            for g in valid_words_up_to(graph, bound) {
                let x = ring.unit_monomial(&g)?;
                let y = ring.unit_monomial(&g.invert())?;
                if ring.multiply(&x, &y)? != one {
                    return Err(Error::ForeignElement(format!(
                        "identity factorization failed at {}",
                        g.display(graph)
                    )));
                }
                rows.push((g, x, y));
            }
            Ok(StrongGrading { verdict: true, evidence: StrongEvidence::Factorizations(rows) })
        }
        Err(ng) => Ok(StrongGrading {
            verdict: false,
            evidence: StrongEvidence::Obstruction { edge: ng.edge, cell: ng.cell },
        }),
    }
}

/// Confirms an obstruction: the cell is nonempty and 1_cell ∉ D_f.
pub fn verify_obstruction<A: PartialAction>(ring: &SkewRing<A>, edge: EdgeId, cell: &Cylinder) -> Result<bool> {
    let alg = ring.algebra();
    let c = alg.indicator(cell)?;
    let f = ReducedWord::edge(edge);
    Ok(!c.is_zero() && !ring.action().contains(&f, &c)?)
}

/// Looks for a homogeneous inverse of x = r δ_g among y = r' δ_{g^{-1}} with
/// r' constant on the cells of depth max(L, depth of x) inside X_{g^{-1}};
/// failing that, searches for a homogeneous annihilator.
pub fn try_invert_homogeneous<A: PartialAction>(
    ring: &SkewRing<A>,
    x: &SkewElement,
    search_depth: usize,
) -> Result<Inversion> {
    let g = match x.comps.len() {
        0 => return Err(Error::ZeroElement),
        1 => x.comps.keys().next().unwrap().clone(),
        _ => {
            let support: Vec<String> = x.support().iter().map(|w| w.display(ring.graph()).to_string()).collect();
            return Err(Error::NonHomogeneous(support.join(", ")));
        }
    };
    ring.check(x)?;
    let alg = ring.algebra();
    let ginv = g.invert();
    let u = ring.action().domain_unit(&ginv)?;
    let d = search_depth.max(x.comps[&g].depth()).max(u.depth());
    let basis: Vec<DFunction> = alg
        .values_on_partition(&u, d)?
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, _)| alg.indicator(&c))
        .collect::<Result<_>>()?;

    let one = ring.identity();
    let mut columns = Vec::new();
    for b in &basis {
        let y = ring.monomial(b.clone(), ginv.clone())?;
        let xy = ring.multiply(x, &y)?.grade_component(&ReducedWord::identity());
        let yx = ring.multiply(&y, x)?.grade_component(&ReducedWord::identity());
        columns.push((xy, yx));
    }
    let target = alg.unit();
    let depth = columns
        .iter()
        .flat_map(|(a, b)| [a.depth(), b.depth()])
        .chain([target.depth()])
        .max()
        .unwrap_or(0);
    let coords = |f: &DFunction| -> Result<Vec<Scalar>> {
        Ok(alg.values_on_partition(f, depth)?.into_iter().map(|(_, v)| v).collect())
    };
    let t = coords(&target)?;
    let n_cells = t.len();
    let col_coords: Vec<(Vec<Scalar>, Vec<Scalar>)> =
        columns.iter().map(|(a, b)| Ok((coords(a)?, coords(b)?))).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for half in 0..2 {
        for i in 0..n_cells {
            rows.push(
                col_coords
                    .iter()
                    .map(|(a, b)| if half == 0 { a[i].clone() } else { b[i].clone() })
                    .collect::<Vec<_>>(),
            );
            rhs.push(t[i].clone());
        }
    }
    if !basis.is_empty() {
        if let Some(sol) = linalg::solve(alg.field(), &rows, &rhs) {
            let terms: Vec<DFunction> = basis.iter().zip(&sol).map(|(b, s)| alg.scale(s, b)).collect();
            let y = ring.monomial(alg.sum(&terms), ginv.clone())?;
            if ring.multiply(x, &y)? == one && ring.multiply(&y, x)? == one {
                return Ok(Inversion::Inverse(y));
            }
        }
    }

    let graph = ring.graph();
    let mut candidates: Vec<SkewElement> = Vec::new();
    for l in graph.edges() {
        candidates.push(ring.unit_monomial(&ReducedWord::edge(l).invert())?);
    }
    for c in crate::boundary::cylinder_partition(graph, search_depth) {
        candidates.push(ring.monomial(alg.indicator(&c)?, ReducedWord::identity())?);
    }
    for h in valid_words_up_to(graph, search_depth.min(2)) {
        candidates.push(ring.unit_monomial(&h)?);
    }
    for side in [Side::Left, Side::Right] {
        for z in &candidates {
            let p = match side {
                Side::Left => ring.multiply(z, x)?,
                Side::Right => ring.multiply(x, z)?,
            };
            if !z.is_zero() && p.is_zero() {
                return Ok(Inversion::NotInvertible { z: z.clone(), side });
            }
        }
    }
    Ok(Inversion::Unknown { depth: d })
}
