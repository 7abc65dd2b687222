//! Leavitt path algebra terms and their image under φ in the skew ring.
//!
//! φ(v) = 1_v δ_e, φ(f) = 1_f δ_f, φ(f*) = 1_{f^{-1}} δ_{f^{-1}}. Since φ is an
//! isomorphism, two terms are equal in L_K(E) exactly when their images are.
//!
//! Grammar:
//!
//! ```text
//! sum   := ['-'] prod (('+' | '-') prod)*
//! prod  := atom+
//! atom  := scalar '*' atom | id | id '*' | '(' sum ')'
//! scalar:= integer | integer '/' integer
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::Alpha;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::skew::{SkewElement, SkewRing};
use crate::word::ReducedWord;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LpaTerm {
    Vertex(VertexId),
    Edge(EdgeId),
    Ghost(EdgeId),
    /// The empty sum is zero.
    Sum(Vec<LpaTerm>),
    /// The empty product is one.
    Prod(Vec<LpaTerm>),
    Neg(Box<LpaTerm>),
    Scale(BigRational, Box<LpaTerm>),
}

impl LpaTerm {
    pub fn zero() -> LpaTerm {
        LpaTerm::Sum(Vec::new())
    }

    pub fn prod(factors: Vec<LpaTerm>) -> LpaTerm {
        LpaTerm::Prod(factors)
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> TermDisplay<'a> {
        TermDisplay { term: self, graph: g }
    }
}

pub struct TermDisplay<'a> {
    term: &'a LpaTerm,
    graph: &'a Graph,
}

impl<'a> TermDisplay<'a> {
    fn sub(&self, term: &'a LpaTerm) -> TermDisplay<'a> {
        TermDisplay { term, graph: self.graph }
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.graph;
        let sub = |t| self.sub(t);
        match self.term {
            LpaTerm::Vertex(v) => write!(f, "{}", g.vertex_name(*v)),
            LpaTerm::Edge(e) => write!(f, "{}", g.edge_name(*e)),
            LpaTerm::Ghost(e) => write!(f, "{}*", g.edge_name(*e)),
            LpaTerm::Sum(ts) if ts.is_empty() => write!(f, "0"),
            LpaTerm::Sum(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{}", sub(t))?;
                }
                Ok(())
            }
            LpaTerm::Prod(ts) if ts.is_empty() => write!(f, "1"),
            LpaTerm::Prod(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    match t {
                        LpaTerm::Sum(_) | LpaTerm::Neg(_) | LpaTerm::Scale(..) => write!(f, "({})", sub(t))?,
                        _ => write!(f, "{}", sub(t))?,
                    }
                }
                Ok(())
            }
            LpaTerm::Neg(t) => write!(f, "-({})", sub(t)),
            LpaTerm::Scale(q, t) => {
                if q.is_integer() {
                    write!(f, "{} * ({})", q.numer(), sub(t))
                } else {
                    write!(f, "{}/{} * ({})", q.numer(), q.denom(), sub(t))
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Id(String),
    Num(BigInt),
    Star,
    Slash,
    Plus,
    Minus,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let single = match c {
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((pos, t));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|x| x.1).collect();
            out.push((pos, Tok::Num(s.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Id(chars[start..i].iter().map(|x| x.1).collect())));
        } else {
            let hint = if c == '\'' { " (ghost edges are written `f*`)" } else { "" };
            return Err(Error::Syntax { position: pos, message: format!("unexpected `{c}`{hint}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    graph: &'a Graph,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn error<T>(&self, message: &str) -> Result<T> {
        Err(Error::Syntax { position: self.pos(), message: message.to_string() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.1.clone());
        self.at += 1;
        t
    }

    fn sum(&mut self) -> Result<LpaTerm> {
        let mut terms = Vec::new();
        let mut negative = false;
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            negative = true;
        }
        loop {
            let p = self.prod()?;
            terms.push(if negative { LpaTerm::Neg(Box::new(p)) } else { p });
            match self.peek() {
                Some(Tok::Plus) => negative = false,
                Some(Tok::Minus) => negative = true,
                _ => break,
            }
            self.bump();
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { LpaTerm::Sum(terms) })
    }

    fn prod(&mut self) -> Result<LpaTerm> {
        let mut factors = vec![self.atom()?];
        while matches!(self.peek(), Some(Tok::Id(_) | Tok::Num(_) | Tok::LParen)) {
            factors.push(self.atom()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { LpaTerm::Prod(factors) })
    }

    fn atom(&mut self) -> Result<LpaTerm> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.bump();
                let mut q = BigRational::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(d)) if !d.is_zero() => q /= BigRational::from_integer(d),
                        Some(Tok::Num(_)) => return Err(Error::DivisionByZero),
                        _ => {
                            self.at -= 1;
                            return self.error("expected a denominator");
                        }
                    }
                }
                if self.peek() != Some(&Tok::Star) {
                    return self.error("expected `*` after a scalar");
                }
                self.bump();
                let inner = self.atom()?;
                Ok(LpaTerm::Scale(q, Box::new(inner)))
            }
            Some(Tok::Id(name)) => {
                self.bump();
                let vertex = self.graph.vertex(&name).ok();
                let edge = self.graph.edge(&name).ok();
                if self.peek() == Some(&Tok::Star) {
                    self.bump();
                    return match edge {
                        Some(e) => Ok(LpaTerm::Ghost(e)),
                        None => Err(Error::UnknownGenerator(format!("{name}*"))),
                    };
                }
                match (vertex, edge) {
                    (Some(_), Some(_)) => Err(Error::AmbiguousGenerator(name)),
                    (Some(v), None) => Ok(LpaTerm::Vertex(v)),
                    (None, Some(e)) => Ok(LpaTerm::Edge(e)),
                    (None, None) => Err(Error::UnknownGenerator(name)),
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.sum()?;
                if self.bump() != Some(Tok::RParen) {
                    self.at -= 1;
                    return self.error("expected `)`");
                }
                Ok(inner)
            }
            Some(_) => self.error("expected a generator, scalar or `(`"),
            None => self.error("unexpected end of input"),
        }
    }
}

pub fn parse_term(text: &str, graph: &Graph) -> Result<LpaTerm> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), graph };
    let t = p.sum()?;
    if p.at < p.toks.len() {
        return p.error("unexpected trailing input");
    }
    Ok(t)
}

/// An assignment of group elements (integer vectors) to edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeMorphism {
    images: Vec<Vec<i64>>,
}

impl GradeMorphism {
    /// Every edge to 1 ∈ ℤ.
    pub fn standard(graph: &Graph) -> GradeMorphism {
        GradeMorphism { images: vec![vec![1]; graph.edge_count()] }
    }

    pub fn new(graph: &Graph, images: BTreeMap<EdgeId, Vec<i64>>) -> Result<GradeMorphism> {
        let dims: Vec<usize> = images.values().map(Vec::len).collect();
        if dims.windows(2).any(|w| w[0] != w[1]) || dims.first() == Some(&0) {
            return Err(Error::Syntax { position: 0, message: "images must have one common dimension".into() });
        }
        let mut out = Vec::new();
        for e in graph.edges() {
            match images.get(&e) {
                Some(v) => out.push(v.clone()),
                None => return Err(Error::UnknownEdge(format!("no image for `{}`", graph.edge_name(e)))),
            }
        }
        Ok(GradeMorphism { images: out })
    }

    /// `a=1,b=0`, or vectors `a=1:0,b=0:1`.
    pub fn parse(text: &str, graph: &Graph) -> Result<GradeMorphism> {
        let mut images = BTreeMap::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Syntax { position: 0, message: format!("expected `edge=value` in `{part}`") })?;
            let e = graph.edge(name.trim())?;
            let v: Vec<i64> = value
                .split(':')
                .map(|x| x.trim().parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Syntax { position: 0, message: format!("bad value in `{part}`") })?;
            images.insert(e, v);
        }
        GradeMorphism::new(graph, images)
    }

    pub fn dimension(&self) -> usize {
        self.images.first().map_or(1, Vec::len)
    }

    /// The image of a word: letter-wise signed sum.
    pub fn degree(&self, w: &ReducedWord) -> Vec<i64> {
        let mut d = vec![0; self.dimension()];
        for l in w.letters() {
            let sign = if l.inverse { -1 } else { 1 };
            for (acc, x) in d.iter_mut().zip(&self.images[l.edge.0 as usize]) {
                *acc += sign * x;
            }
        }
        d
    }
}

pub fn format_degree(d: &[i64]) -> String {
    match d {
        [x] => x.to_string(),
        _ => format!("({})", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
    }
}

/// One instance of a Cuntz-Krieger relation, as a pair of terms that must
/// have equal images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CkInstance {
    pub relation: u8,
    pub name: String,
    pub lhs: LpaTerm,
    pub rhs: LpaTerm,
}

/// (1) s(f) f = f = f r(f); (2) r(f) f* = f* = f* s(f);
/// (3) f* f' = δ_{f,f'} r(f); (4) v = Σ_{s(f)=v} f f* for non-sinks v.
pub fn ck_instances(graph: &Graph) -> Vec<CkInstance> {
    use LpaTerm::*;
    let mut out = Vec::new();
    let mut push = |relation: u8, lhs: LpaTerm, rhs: LpaTerm| {
        let name = format!("({relation}) {} = {}", lhs.display(graph), rhs.display(graph));
        out.push(CkInstance { relation, name, lhs, rhs });
    };
    for f in graph.edges() {
        let (s, r) = (graph.src(f), graph.dst(f));
        push(1, Prod(vec![Vertex(s), Edge(f)]), Edge(f));
        push(1, Prod(vec![Edge(f), Vertex(r)]), Edge(f));
    }
    for f in graph.edges() {
        let (s, r) = (graph.src(f), graph.dst(f));
        push(2, Prod(vec![Vertex(r), Ghost(f)]), Ghost(f));
        push(2, Prod(vec![Ghost(f), Vertex(s)]), Ghost(f));
    }
    for f in graph.edges() {
        for f2 in graph.edges() {
            let rhs = if f == f2 { Vertex(graph.dst(f)) } else { LpaTerm::zero() };
            push(3, Prod(vec![Ghost(f), Edge(f2)]), rhs);
        }
    }
    for v in graph.vertices().filter(|&v| graph.is_regular(v)) {
        let sum = graph.out_edges(v).iter().map(|&f| Prod(vec![Edge(f), Ghost(f)])).collect();
        push(4, Vertex(v), Sum(sum));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub relation: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The skew-ring realization of L_K(E).
#[derive(Debug, Clone)]
pub struct Lpa {
    ring: SkewRing<Alpha>,
}

impl Lpa {
    pub fn new(ring: SkewRing<Alpha>) -> Lpa {
        Lpa { ring }
    }

    pub fn ring(&self) -> &SkewRing<Alpha> {
        &self.ring
    }

    pub fn graph(&self) -> &Graph {
        self.ring.graph()
    }

    pub fn parse(&self, text: &str) -> Result<LpaTerm> {
        parse_term(text, self.graph())
    }

    pub fn phi(&self, t: &LpaTerm) -> Result<SkewElement> {
        phi_with(&self.ring, t, &|l: &LpaTerm| self.generator(l))
    }

    fn generator(&self, t: &LpaTerm) -> Result<SkewElement> {
        let r = &self.ring;
        match t {
            LpaTerm::Vertex(v) => r.monomial(r.algebra().vertex(*v), ReducedWord::identity()),
            LpaTerm::Edge(e) => r.unit_monomial(&ReducedWord::edge(*e)),
            LpaTerm::Ghost(e) => r.unit_monomial(&ReducedWord::edge(*e).invert()),
            _ => unreachable!("not a generator"),
        }
    }

    pub fn equals(&self, a: &LpaTerm, b: &LpaTerm) -> Result<bool> {
        Ok(self.phi(a)? == self.phi(b)?)
    }

    pub fn verify_ck(&self) -> Vec<RelationCheck> {
        check_instances(&self.ring, ck_instances(self.graph()), &|t: &LpaTerm| self.phi(t))
    }

    /// Splits φ(t) by the degree of each support word under `m`.
    pub fn grade_decompose(&self, t: &LpaTerm, m: &GradeMorphism) -> Result<BTreeMap<Vec<i64>, SkewElement>> {
        let x = self.phi(t)?;
        let mut out: BTreeMap<Vec<i64>, SkewElement> = BTreeMap::new();
        for (w, r) in x.components() {
            let part = self.ring.monomial(r.clone(), w.clone())?;
            let slot = out.entry(m.degree(w)).or_default();
            *slot = self.ring.add(slot, &part);
        }
        Ok(out)
    }
}

/// Evaluates a term in a skew ring given images of the generators.
pub fn phi_with<A, G>(ring: &SkewRing<A>, t: &LpaTerm, generator: &G) -> Result<SkewElement>
where
    A: crate::action::PartialAction,
    G: Fn(&LpaTerm) -> Result<SkewElement>,
{
    Ok(match t {
        LpaTerm::Vertex(_) | LpaTerm::Edge(_) | LpaTerm::Ghost(_) => generator(t)?,
        LpaTerm::Sum(ts) => {
            let mut acc = SkewElement::zero();
            for s in ts {
                acc = ring.add(&acc, &phi_with(ring, s, generator)?);
            }
            acc
        }
        LpaTerm::Prod(ts) => {
            let mut acc = ring.identity();
            for s in ts {
                acc = ring.multiply(&acc, &phi_with(ring, s, generator)?)?;
            }
            acc
        }
        LpaTerm::Neg(s) => ring.neg(&phi_with(ring, s, generator)?),
        LpaTerm::Scale(q, s) => {
            let lambda = ring.algebra().field().from_rational(q)?;
            ring.scale(&lambda, &phi_with(ring, s, generator)?)
        }
    })
}

/// Checks each instance by comparing the images of its two sides.
pub fn check_instances<A, P>(ring: &SkewRing<A>, instances: Vec<CkInstance>, phi: &P) -> Vec<RelationCheck>
where
    A: crate::action::PartialAction,
    P: Fn(&LpaTerm) -> Result<SkewElement> + Sync,
{
    instances
        .into_par_iter()
        .map(|inst| {
            let (passed, detail) = match (phi(&inst.lhs), phi(&inst.rhs)) {
                (Ok(a), Ok(b)) if a == b => (true, ring.display(&a)),
                (Ok(a), Ok(b)) => (false, format!("{} != {}", ring.display(&a), ring.display(&b))),
                (Err(e), _) | (_, Err(e)) => (false, e.to_string()),
            };
            RelationCheck { relation: inst.relation, name: inst.name, passed, detail }
        })
        .collect()
}
