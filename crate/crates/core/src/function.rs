//! The commutative algebra D(X) of locally constant functions spanned by
//! cylinder indicators.
//!
//! A [`DFunction`] is always stored in normal form: the antichain of maximal
//! cylinders on which the function is constant, restricted to nonzero values.
//! Two functions are equal on X exactly when their normal forms coincide.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::boundary::{cylinder_partition, in_cylinder, BoundaryPath, Cylinder};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::scalar::{parse_rational, Field, Scalar};
use crate::word::{GroupShape, ReducedWord};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DFunction {
    terms: BTreeMap<Cylinder, Scalar>,
}

impl DFunction {
    pub fn zero() -> DFunction {
        DFunction::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Normal-form terms: disjoint cylinders with nonzero values.
    pub fn terms(&self) -> impl Iterator<Item = (&Cylinder, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, c: &Cylinder) -> Option<&Scalar> {
        self.terms.get(c)
    }

    /// Depth of the deepest cylinder in the normal form.
    pub fn depth(&self) -> usize {
        self.terms.keys().map(Cylinder::depth).max().unwrap_or(0)
    }
}

enum Canon {
    Const(Scalar),
    Mixed(Vec<(Cylinder, Scalar)>),
}

/// Operations on D(X) for one graph and one scalar field.
#[derive(Debug, Clone)]
pub struct FunctionAlgebra {
    graph: Graph,
    field: Field,
}

impl FunctionAlgebra {
    pub fn new(graph: Graph, field: Field) -> FunctionAlgebra {
        FunctionAlgebra { graph, field }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn scalar(&self, n: i64) -> Scalar {
        self.field.from_i64(n)
    }

    /// Confirms `x` was built over this graph and field.
    pub fn check(&self, x: &DFunction) -> Result<()> {
        for (c, s) in &x.terms {
            if !c.is_valid(&self.graph) {
                return Err(Error::ForeignElement(format!("cylinder {c} is not in this graph")));
            }
            if s.field() != self.field {
                return Err(Error::FieldMismatch(s.field().to_string(), self.field.to_string()));
            }
        }
        Ok(())
    }

    /// Builds a function from an arbitrary (possibly overlapping) combination
    /// of cylinder indicators.
    pub fn from_terms<I>(&self, terms: I) -> Result<DFunction>
    where
        I: IntoIterator<Item = (Cylinder, Scalar)>,
    {
        let terms: Vec<(Cylinder, Scalar)> = terms.into_iter().collect();
        for (c, s) in &terms {
            if !c.is_valid(&self.graph) {
                return Err(Error::ForeignElement(format!("cylinder {c} is not in this graph")));
            }
            if s.field() != self.field {
                return Err(Error::FieldMismatch(s.field().to_string(), self.field.to_string()));
            }
        }
        Ok(self.normalize(terms))
    }

    pub fn indicator(&self, c: &Cylinder) -> Result<DFunction> {
        self.from_terms([(c.clone(), self.field.one())])
    }

    pub fn vertex(&self, v: VertexId) -> DFunction {
        self.normalize(vec![(Cylinder::Vertex(v), self.field.one())])
    }

    pub fn path(&self, p: &[EdgeId]) -> DFunction {
        self.normalize(vec![(Cylinder::Path(p.to_vec()), self.field.one())])
    }

    /// 1_g: the indicator of X_g, zero for words with empty domain.
    pub fn word_indicator(&self, g: &ReducedWord) -> Result<DFunction> {
        Ok(match g.classify(&self.graph)? {
            GroupShape::Identity => self.unit(),
            GroupShape::Path(a) | GroupShape::PathPair { a, .. } => self.path(&a),
            GroupShape::InvPath(b) => self.vertex(self.graph.dst(*b.last().unwrap())),
            GroupShape::EmptyDomain => DFunction::zero(),
        })
    }

    /// Σ_v 1_v, the unit of D(X).
    pub fn unit(&self) -> DFunction {
        self.normalize(self.graph.vertices().map(|v| (Cylinder::Vertex(v), self.field.one())).collect())
    }

    pub fn add(&self, x: &DFunction, y: &DFunction) -> DFunction {
        self.normalize(x.terms.iter().chain(&y.terms).map(|(c, s)| (c.clone(), s.clone())).collect())
    }

    pub fn sub(&self, x: &DFunction, y: &DFunction) -> DFunction {
        self.add(x, &self.neg(y))
    }

    pub fn neg(&self, x: &DFunction) -> DFunction {
        DFunction { terms: x.terms.iter().map(|(c, s)| (c.clone(), -s)).collect() }
    }

    pub fn scale(&self, lambda: &Scalar, x: &DFunction) -> DFunction {
        if lambda.is_zero() {
            return DFunction::zero();
        }
        DFunction { terms: x.terms.iter().map(|(c, s)| (c.clone(), lambda * s)).collect() }
    }

    /// Pointwise product.
    pub fn mul(&self, x: &DFunction, y: &DFunction) -> DFunction {
        let mut terms = Vec::new();
        for (c1, s1) in &x.terms {
            for (c2, s2) in &y.terms {
                if let Some(c) = c1.intersect(&self.graph, c2) {
                    terms.push((c, s1 * s2));
                }
            }
        }
        self.normalize(terms)
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a DFunction>>(&self, xs: I) -> DFunction {
        let terms = xs.into_iter().flat_map(|x| x.terms.iter().map(|(c, s)| (c.clone(), s.clone())));
        self.normalize(terms.collect())
    }

    pub fn equals(&self, x: &DFunction, y: &DFunction) -> bool {
        x == y
    }

    /// Sum of the coefficients of the cylinders containing ξ.
    pub fn evaluate(&self, x: &DFunction, xi: &BoundaryPath) -> Scalar {
        x.terms
            .iter()
            .filter(|(c, _)| in_cylinder(&self.graph, xi, c))
            .fold(self.field.zero(), |acc, (_, s)| &acc + s)
    }

    /// `x` restricted to each cell of the depth-`d` partition, read off the
    /// normal form. Fails when `x` is finer than the partition.
    pub fn values_on_partition(&self, x: &DFunction, d: usize) -> Result<Vec<(Cylinder, Scalar)>> {
        if x.depth() > d {
            return Err(Error::TooDeep { found: x.depth(), depth: d });
        }
        Ok(cylinder_partition(&self.graph, d)
            .into_iter()
            .map(|cell| {
                let value = x
                    .terms
                    .iter()
                    .find(|(c, _)| c.contains(&self.graph, &cell))
                    .map_or_else(|| self.field.zero(), |(_, s)| s.clone());
                (cell, value)
            })
            .collect())
    }

    /// Is `x` a multiple of the idempotent `e`, i.e. e·x = x.
    pub fn absorbs(&self, e: &DFunction, x: &DFunction) -> bool {
        self.mul(e, x) == *x
    }

    /// The coarsest-antichain normal form of an arbitrary combination.
    pub fn normalize(&self, terms: Vec<(Cylinder, Scalar)>) -> DFunction {
        let g = &self.graph;
        let mut out = BTreeMap::new();
        let mut by_root: BTreeMap<VertexId, Vec<(Cylinder, Scalar)>> = BTreeMap::new();
        for (c, s) in terms {
            if !s.is_zero() {
                by_root.entry(c.root(g)).or_default().push((c, s));
            }
        }
        for (v, ts) in by_root {
            let node = Cylinder::Vertex(v);
            let (here, below): (Vec<_>, Vec<_>) = ts.into_iter().partition(|(c, _)| c.depth() == 0);
            let inherited = here.iter().fold(self.field.zero(), |acc, (_, s)| &acc + s);
            match self.canon(&node, inherited, below) {
                Canon::Const(c) => {
                    if !c.is_zero() {
                        out.insert(node, c);
                    }
                }
                Canon::Mixed(list) => out.extend(list),
            }
        }
        DFunction { terms: out }
    }

    /// `inherited` is the total weight of terms at or above `node`; `below`
    /// holds the terms strictly inside it.
    fn canon(&self, node: &Cylinder, inherited: Scalar, below: Vec<(Cylinder, Scalar)>) -> Canon {
        if below.is_empty() {
            return Canon::Const(inherited);
        }
        let g = &self.graph;
        let depth = node.depth();
        let mut per_edge: BTreeMap<EdgeId, Vec<(Cylinder, Scalar)>> = BTreeMap::new();
        for (c, s) in below {
            per_edge.entry(c.edges()[depth]).or_default().push((c, s));
        }
        let mut results = Vec::new();
        for child in node.children(g) {
            let e = child.edges()[depth];
            let ts = per_edge.remove(&e).unwrap_or_default();
            let (here, deeper): (Vec<_>, Vec<_>) = ts.into_iter().partition(|(c, _)| c.depth() == depth + 1);
            let value = here.iter().fold(inherited.clone(), |acc, (_, s)| &acc + s);
            let r = self.canon(&child, value, deeper);
            results.push((child, r));
        }
        let first = match &results[0].1 {
            Canon::Const(c) => Some(c.clone()),
            Canon::Mixed(_) => None,
        };
        if let Some(c0) = first {
            if results.iter().all(|(_, r)| matches!(r, Canon::Const(c) if *c == c0)) {
                return Canon::Const(c0);
            }
        }
        let mut list = Vec::new();
        for (child, r) in results {
            match r {
                Canon::Const(c) => {
                    if !c.is_zero() {
                        list.push((child, c));
                    }
                }
                Canon::Mixed(l) => list.extend(l),
            }
        }
        Canon::Mixed(list)
    }

    /// Parses `c * 1[x] + ...`, where `x` names a vertex, a path `a.b`, or
    /// any word (giving its indicator 1_g). `0` is the zero function.
    pub fn parse(&self, text: &str) -> Result<DFunction> {
        let mut acc = DFunction::zero();
        for (pos, sign, term) in split_signed_terms(text)? {
            let syntax = |m: String| Error::Syntax { position: pos, message: m };
            let (coef, mut atom) = match term.rsplit_once('*') {
                Some((c, a)) => (Some(c.trim()), a.trim()),
                None => (None, term.trim()),
            };
            let mut sign = sign;
            if let Some(rest) = atom.strip_prefix('-') {
                sign = -sign;
                atom = rest.trim_start();
            }
            let base = if atom == "0" && coef.is_none() {
                DFunction::zero()
            } else {
                let inner = atom
                    .strip_prefix("1[")
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| syntax(format!("expected `1[...]`, found `{atom}`")))?;
                self.parse_indicator(inner.trim())?
            };
            let mut lambda = match coef {
                Some(c) => self.field.from_rational(&parse_rational(c).map_err(|_| syntax(format!("bad coefficient `{c}`")))?)?,
                None => self.field.one(),
            };
            if sign < 0 {
                lambda = -lambda;
            }
            acc = self.add(&acc, &self.scale(&lambda, &base));
        }
        Ok(acc)
    }

    fn parse_indicator(&self, name: &str) -> Result<DFunction> {
        let is_vertex = self.graph.vertex(name).is_ok();
        let is_edge = self.graph.edge(name).is_ok();
        match (is_vertex, is_edge) {
            (true, true) => Err(Error::AmbiguousGenerator(name.to_string())),
            (true, false) => Ok(self.vertex(self.graph.vertex(name)?)),
            _ => self.word_indicator(&ReducedWord::parse(name, &self.graph)?),
        }
    }

    /// `2 * 1[a] - 1/2 * 1[v]`; the zero function prints as `0`.
    pub fn display(&self, x: &DFunction) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (c, s)) in x.terms.iter().enumerate() {
            let (neg, mag) = if s.is_negative() { (true, s.abs()) } else { (false, s.clone()) };
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if !mag.is_one() {
                let _ = write!(out, "{mag} * ");
            }
            let _ = write!(out, "1[{}]", c.name(&self.graph));
        }
        out
    }
}

/// Splits `a + b - c` at top-level signs, tracking bracket nesting.
fn split_signed_terms(text: &str) -> Result<Vec<(usize, i32, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut sign = 1;
    let mut start = 0;
    let mut current = String::new();
    let mut seen_content = false;
    for (i, ch) in text.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (ch == '+' || ch == '-') {
            let before = current.trim_end();
            // a sign directly after `*` or `/` belongs to the coefficient
            if before.ends_with('*') || before.ends_with('/') {
                current.push(ch);
                continue;
            }
            if seen_content {
                out.push((start, sign, std::mem::take(&mut current)));
                seen_content = false;
                sign = 1;
            } else if !current.trim().is_empty() {
                return Err(Error::Syntax { position: i, message: "unexpected sign".into() });
            }
            if ch == '-' {
                sign = -sign;
            }
            start = i + 1;
            continue;
        }
        if depth < 0 {
            return Err(Error::Syntax { position: i, message: "unbalanced bracket".into() });
        }
        if !ch.is_whitespace() {
            seen_content = true;
        }
        current.push(ch);
    }
    if depth != 0 {
        return Err(Error::Syntax { position: text.len(), message: "unbalanced bracket".into() });
    }
    if !seen_content {
        return Err(Error::Syntax { position: text.len(), message: "expected a term".into() });
    }
    out.push((start, sign, current));
    Ok(out)
}
