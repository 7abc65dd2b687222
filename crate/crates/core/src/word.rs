//! Reduced words in the free group on the edge set.
//!
//! Words are kept reduced at all times. Text syntax: edge ids separated by
//! `.`, a trailing `'` marks an inverse letter, and `e` is the identity, so
//! `a.b'` is a b^{-1}.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, FinPath, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub edge: EdgeId,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(edge: EdgeId) -> Letter {
        Letter { edge, inverse: false }
    }

    pub fn neg(edge: EdgeId) -> Letter {
        Letter { edge, inverse: true }
    }

    pub fn inv(self) -> Letter {
        Letter { edge: self.edge, inverse: !self.inverse }
    }

    fn cancels(self, other: Letter) -> bool {
        self.edge == other.edge && self.inverse != other.inverse
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ReducedWord(Vec<Letter>);

impl Ord for ReducedWord {
    /// Shorter words first, then lexicographic on letters.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Which of the domain shapes a word has relative to a graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupShape {
    Identity,
    /// A nonempty composable path a.
    Path(Vec<EdgeId>),
    /// b^{-1} for a nonempty composable path b.
    InvPath(Vec<EdgeId>),
    /// a b^{-1} reduced, with r(a) = r(b).
    PathPair { a: Vec<EdgeId>, b: Vec<EdgeId> },
    EmptyDomain,
}

impl GroupShape {
    pub fn is_empty_domain(&self) -> bool {
        matches!(self, GroupShape::EmptyDomain)
    }
}

impl ReducedWord {
    pub fn identity() -> ReducedWord {
        ReducedWord(Vec::new())
    }

    /// Reduces an arbitrary letter sequence with a stack pass.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> ReducedWord {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        ReducedWord(stack)
    }

    pub fn letter(l: Letter) -> ReducedWord {
        ReducedWord(vec![l])
    }

    pub fn edge(e: EdgeId) -> ReducedWord {
        ReducedWord(vec![Letter::pos(e)])
    }

    pub fn path(edges: &[EdgeId]) -> ReducedWord {
        ReducedWord::from_letters(edges.iter().map(|&e| Letter::pos(e)))
    }

    /// f^k for any integer k.
    pub fn power(e: EdgeId, k: i64) -> ReducedWord {
        let l = if k >= 0 { Letter::pos(e) } else { Letter::neg(e) };
        ReducedWord(vec![l; k.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// True iff no adjacent pair cancels.
    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    pub fn multiply(&self, other: &ReducedWord) -> ReducedWord {
        // cancel across the seam only; both halves are already reduced
        let mut k = 0;
        while k < self.0.len() && k < other.0.len() && self.0[self.0.len() - 1 - k].cancels(other.0[k]) {
            k += 1;
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len() - 2 * k);
        out.extend_from_slice(&self.0[..self.0.len() - k]);
        out.extend_from_slice(&other.0[k..]);
        ReducedWord(out)
    }

    pub fn invert(&self) -> ReducedWord {
        ReducedWord(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn classify(&self, g: &Graph) -> Result<GroupShape> {
        for l in &self.0 {
            if !g.has_edge(l.edge) {
                return Err(Error::UnknownEdge(format!("#{}", l.edge.0)));
            }
        }
        if self.0.is_empty() {
            return Ok(GroupShape::Identity);
        }
        let split = self.0.iter().position(|l| l.inverse).unwrap_or(self.0.len());
        if self.0[split..].iter().any(|l| !l.inverse) {
            return Ok(GroupShape::EmptyDomain);
        }
        let a: Vec<EdgeId> = self.0[..split].iter().map(|l| l.edge).collect();
        let b: Vec<EdgeId> = self.0[split..].iter().rev().map(|l| l.edge).collect();
        if !g.is_composable(&a) || !g.is_composable(&b) {
            return Ok(GroupShape::EmptyDomain);
        }
        Ok(match (a.is_empty(), b.is_empty()) {
            (false, true) => GroupShape::Path(a),
            (true, false) => GroupShape::InvPath(b),
            _ => {
                if g.dst(*a.last().unwrap()) == g.dst(*b.last().unwrap()) {
                    GroupShape::PathPair { a, b }
                } else {
                    GroupShape::EmptyDomain
                }
            }
        })
    }

    pub fn parse(text: &str, g: &Graph) -> Result<ReducedWord> {
        let t = text.trim();
        if t == "e" || t.is_empty() {
            return Ok(ReducedWord::identity());
        }
        let mut letters = Vec::new();
        let mut offset = 0;
        for part in t.split('.') {
            let p = part.trim();
            let (name, inverse) = match p.strip_suffix('\'') {
                Some(n) => (n, true),
                None => (p, false),
            };
            if name.is_empty() || name.contains('\'') {
                return Err(Error::Syntax { position: offset, message: format!("bad letter `{part}`") });
            }
            let edge = g.edge(name)?;
            letters.push(Letter { edge, inverse });
            offset += part.len() + 1;
        }
        Ok(ReducedWord::from_letters(letters))
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> WordDisplay<'a> {
        WordDisplay { word: self, graph: g }
    }
}

pub struct WordDisplay<'a> {
    word: &'a ReducedWord,
    graph: &'a Graph,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.word.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}{}", self.graph.edge_name(l.edge), if l.inverse { "'" } else { "" })?;
        }
        Ok(())
    }
}

/// The word a b^{-1}, b^{-1}, a or e for a non-empty shape.
pub fn word_of_shape(shape: &GroupShape) -> Option<ReducedWord> {
    match shape {
        GroupShape::Identity => Some(ReducedWord::identity()),
        GroupShape::Path(a) => Some(ReducedWord::path(a)),
        GroupShape::InvPath(b) => Some(ReducedWord::path(b).invert()),
        GroupShape::PathPair { a, b } => {
            Some(ReducedWord::path(a).multiply(&ReducedWord::path(b).invert()))
        }
        GroupShape::EmptyDomain => None,
    }
}

/// All reduced words of length at most `max_len`, shortest first.
pub fn reduced_words_up_to(g: &Graph, max_len: usize) -> Vec<ReducedWord> {
    let letters: Vec<Letter> = g.edges().flat_map(|e| [Letter::pos(e), Letter::neg(e)]).collect();
    let mut out = vec![ReducedWord::identity()];
    let mut layer = vec![ReducedWord::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.0.last().is_some_and(|&last| last.cancels(l)) {
                    continue;
                }
                let mut v = w.0.clone();
                v.push(l);
                next.push(ReducedWord(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.sort();
    out
}

/// Words of length at most `max_len` whose domain is nonempty, built from
/// their shapes rather than by filtering every reduced word.
pub fn valid_words_up_to(g: &Graph, max_len: usize) -> Vec<ReducedWord> {
    let paths: Vec<Vec<EdgeId>> = g
        .paths_up_to(max_len)
        .into_iter()
        .filter_map(|p| match p {
            FinPath::Edges(e) => Some(e),
            FinPath::Vertex(_) => None,
        })
        .collect();
    let mut out = vec![ReducedWord::identity()];
    for p in &paths {
        out.push(ReducedWord::path(p));
        out.push(ReducedWord::path(p).invert());
    }
    for a in &paths {
        for b in &paths {
            if a.len() + b.len() <= max_len
                && a.last() != b.last()
                && g.dst(*a.last().unwrap()) == g.dst(*b.last().unwrap())
            {
                out.push(ReducedWord::path(a).multiply(&ReducedWord::path(b).invert()));
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn w(text: &str, g: &Graph) -> ReducedWord {
        ReducedWord::parse(text, g).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let lp = corpus::loop_graph();
        assert_eq!(w("f", &lp).multiply(&w("f'", &lp)), ReducedWord::identity());
        let r = corpus::rose2();
        assert_eq!(w("a.b'", &r).multiply(&w("b.a", &r)), w("a.a", &r));
        assert_eq!(ReducedWord::identity().multiply(&w("a", &r)), w("a", &r));
    }

    #[test]
    fn invert_examples() {
        let r = corpus::rose2();
        assert_eq!(w("a.b'", &r).invert(), w("b.a'", &r));
        assert_eq!(ReducedWord::identity().invert(), ReducedWord::identity());
        let lp = corpus::loop_graph();
        assert_eq!(w("f.f", &lp).invert(), w("f'.f'", &lp));
    }

    #[test]
    fn classify_examples() {
        let r = corpus::rose2();
        let (a, b) = (r.edge("a").unwrap(), r.edge("b").unwrap());
        assert_eq!(w("a.b'", &r).classify(&r).unwrap(), GroupShape::PathPair { a: vec![a], b: vec![b] });
        assert_eq!(w("a'.b", &r).classify(&r).unwrap(), GroupShape::EmptyDomain);
        let t = corpus::toeplitz();
        let (f, g) = (t.edge("f").unwrap(), t.edge("g").unwrap());
        assert_eq!(w("f.g", &t).classify(&t).unwrap(), GroupShape::Path(vec![f, g]));
        // g ends at the sink w, so g.f is not composable
        assert_eq!(w("g.f", &t).classify(&t).unwrap(), GroupShape::EmptyDomain);
        assert_eq!(w("f.g'", &t).classify(&t).unwrap(), GroupShape::EmptyDomain);
        assert_eq!(w("g'.f'", &t).classify(&t).unwrap(), GroupShape::InvPath(vec![f, g]));
        assert_eq!(ReducedWord::identity().classify(&t).unwrap(), GroupShape::Identity);
    }

    #[test]
    fn classify_rejects_foreign_letters() {
        let r = corpus::rose2();
        let foreign = ReducedWord::edge(EdgeId(7));
        assert!(matches!(foreign.classify(&r), Err(Error::UnknownEdge(_))));
    }

    #[test]
    fn parse_and_display() {
        let r = corpus::rose2();
        assert_eq!(w("a.b'.b.a", &r).display(&r).to_string(), "a.a");
        assert_eq!(w("e", &r).display(&r).to_string(), "e");
        assert!(ReducedWord::parse("a.c", &r).is_err());
        assert!(ReducedWord::parse("a..b", &r).is_err());
        assert!(ReducedWord::parse("a''", &r).is_err());
    }

    #[test]
    fn power_words() {
        let lp = corpus::loop_graph();
        let f = lp.edge("f").unwrap();
        assert_eq!(ReducedWord::power(f, 2).multiply(&ReducedWord::power(f, -3)), ReducedWord::power(f, -1));
        assert_eq!(ReducedWord::power(f, 0), ReducedWord::identity());
    }

    #[test]
    fn valid_words_match_filtered_enumeration() {
        for (_, g) in corpus::all() {
            for bound in 0..=3 {
                let brute: Vec<ReducedWord> = reduced_words_up_to(&g, bound)
                    .into_iter()
                    .filter(|w| !w.classify(&g).unwrap().is_empty_domain())
                    .collect();
                assert_eq!(valid_words_up_to(&g, bound), brute);
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        // 2m(2m-1)^(k-1) reduced words of length k
        let r = corpus::rose2();
        assert_eq!(reduced_words_up_to(&r, 3).len(), 1 + 4 + 12 + 36);
        assert_eq!(valid_words_up_to(&corpus::loop_graph(), 3).len(), 7);
    }
}
