//! Symbolic model of the boundary path space: cylinders, representative
//! boundary paths, and the set-level partial action.
//!
//! Cylinders form a forest: each vertex is a root, the children of a node are
//! its one-edge extensions, and nodes whose path ends at a sink are leaves
//! (single points). Every node is a nonempty set, and two nodes are either
//! nested (ancestor/descendant) or disjoint.
//!
//! Infinite paths are represented by eventually periodic paths only. The cycle
//! is reduced to its primitive root and rotated to its lexicographically least
//! rotation; the prefix is then the shortest one that realizes the path with
//! that cycle, so structural equality is path equality.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, FinPath, Graph, VertexId};
use crate::word::{GroupShape, ReducedWord};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cylinder {
    /// X_v: boundary paths starting at v.
    Vertex(VertexId),
    /// X_a: boundary paths starting with the nonempty path a.
    Path(Vec<EdgeId>),
}

impl Cylinder {
    pub fn depth(&self) -> usize {
        match self {
            Cylinder::Vertex(_) => 0,
            Cylinder::Path(p) => p.len(),
        }
    }

    pub fn root(&self, g: &Graph) -> VertexId {
        match self {
            Cylinder::Vertex(v) => *v,
            Cylinder::Path(p) => g.src(p[0]),
        }
    }

    /// The vertex the cylinder's path ends at.
    pub fn end(&self, g: &Graph) -> VertexId {
        match self {
            Cylinder::Vertex(v) => *v,
            Cylinder::Path(p) => g.dst(*p.last().expect("nonempty")),
        }
    }

    pub fn edges(&self) -> &[EdgeId] {
        match self {
            Cylinder::Vertex(_) => &[],
            Cylinder::Path(p) => p,
        }
    }

    pub fn from_path(p: &FinPath) -> Cylinder {
        match p {
            FinPath::Vertex(v) => Cylinder::Vertex(*v),
            FinPath::Edges(e) => Cylinder::Path(e.clone()),
        }
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        match self {
            Cylinder::Vertex(v) => g.has_vertex(*v),
            Cylinder::Path(p) => !p.is_empty() && g.is_composable(p),
        }
    }

    /// A single point: the path ends at a sink.
    pub fn is_leaf(&self, g: &Graph) -> bool {
        g.is_sink(self.end(g))
    }

    /// One-edge extensions, in edge id order. Empty for leaves.
    pub fn children(&self, g: &Graph) -> Vec<Cylinder> {
        g.out_edges(self.end(g))
            .iter()
            .map(|&e| {
                let mut p = self.edges().to_vec();
                p.push(e);
                Cylinder::Path(p)
            })
            .collect()
    }

    /// Node containment: `other` is this node or one of its descendants.
    pub fn contains(&self, g: &Graph, other: &Cylinder) -> bool {
        self.root(g) == other.root(g) && other.edges().starts_with(self.edges())
    }

    /// Intersection of two cylinders, which is always a cylinder or empty.
    pub fn intersect(&self, g: &Graph, other: &Cylinder) -> Option<Cylinder> {
        if self.contains(g, other) {
            Some(other.clone())
        } else if other.contains(g, self) {
            Some(self.clone())
        } else {
            None
        }
    }

    pub fn name(&self, g: &Graph) -> String {
        match self {
            Cylinder::Vertex(v) => g.vertex_name(*v).to_string(),
            Cylinder::Path(p) => g.path_name(p),
        }
    }

    /// `X[a.b]` / `X[v]`.
    pub fn display(&self, g: &Graph) -> String {
        format!("X[{}]", self.name(g))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundaryPath {
    /// A sink vertex, or a nonempty path ending at a sink.
    FiniteToSink(FinPath),
    /// prefix · cycle · cycle · ...; an empty prefix is the vertex s(cycle).
    EventuallyPeriodic { prefix: FinPath, cycle: Vec<EdgeId> },
}

impl BoundaryPath {
    pub fn finite(g: &Graph, path: FinPath) -> Result<BoundaryPath> {
        if !path.is_valid(g) || !g.is_sink(path.range(g)) {
            return Err(Error::ForeignElement(format!("{} does not end at a sink", path.display(g))));
        }
        Ok(BoundaryPath::FiniteToSink(path))
    }

    /// Builds and normalizes prefix · cycle^∞.
    pub fn periodic(g: &Graph, prefix: Vec<EdgeId>, cycle: Vec<EdgeId>) -> Result<BoundaryPath> {
        let closed = !cycle.is_empty()
            && g.is_composable(&cycle)
            && g.src(cycle[0]) == g.dst(*cycle.last().unwrap());
        let joins = prefix.is_empty() || (g.is_composable(&prefix) && g.dst(*prefix.last().unwrap()) == g.src(cycle[0]));
        if !closed || !joins {
            return Err(Error::ForeignElement("not an eventually periodic path".into()));
        }
        Ok(normalize_periodic(g, prefix, cycle))
    }

    pub fn source(&self, g: &Graph) -> VertexId {
        match self {
            BoundaryPath::FiniteToSink(p) => p.source(g),
            BoundaryPath::EventuallyPeriodic { prefix, .. } => prefix.source(g),
        }
    }

    /// The first `n` edges, or all of them for a shorter finite path.
    pub fn first_edges(&self, n: usize) -> Vec<EdgeId> {
        match self {
            BoundaryPath::FiniteToSink(p) => p.edges().iter().take(n).copied().collect(),
            BoundaryPath::EventuallyPeriodic { prefix, cycle } => {
                prefix.edges().iter().chain(cycle.iter().cycle()).take(n).copied().collect()
            }
        }
    }

    pub fn starts_with(&self, path: &[EdgeId]) -> bool {
        self.first_edges(path.len()) == path
    }

    /// b·ξ; requires r(b) = s(ξ).
    pub fn prepend(&self, g: &Graph, b: &[EdgeId]) -> BoundaryPath {
        if b.is_empty() {
            return self.clone();
        }
        debug_assert_eq!(g.dst(*b.last().unwrap()), self.source(g));
        match self {
            BoundaryPath::FiniteToSink(p) => {
                let mut edges = b.to_vec();
                edges.extend_from_slice(p.edges());
                BoundaryPath::FiniteToSink(FinPath::Edges(edges))
            }
            BoundaryPath::EventuallyPeriodic { prefix, cycle } => {
                let mut edges = b.to_vec();
                edges.extend_from_slice(prefix.edges());
                normalize_periodic(g, edges, cycle.clone())
            }
        }
    }

    /// Drops the first `n` edges; requires the path to have at least `n`.
    pub fn strip(&self, g: &Graph, n: usize) -> BoundaryPath {
        if n == 0 {
            return self.clone();
        }
        match self {
            BoundaryPath::FiniteToSink(p) => {
                let edges = p.edges();
                assert!(edges.len() >= n, "strip past the end of a finite path");
                BoundaryPath::FiniteToSink(FinPath::from_edges(edges[n..].to_vec(), p.range(g)))
            }
            BoundaryPath::EventuallyPeriodic { prefix, cycle } => {
                let pre = prefix.edges();
                if n <= pre.len() {
                    normalize_periodic(g, pre[n..].to_vec(), cycle.clone())
                } else {
                    let mut c = cycle.clone();
                    c.rotate_left((n - pre.len()) % cycle.len());
                    normalize_periodic(g, Vec::new(), c)
                }
            }
        }
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        match self {
            BoundaryPath::FiniteToSink(p) => p.is_valid(g) && g.is_sink(p.range(g)),
            BoundaryPath::EventuallyPeriodic { prefix, cycle } => {
                BoundaryPath::periodic(g, prefix.edges().to_vec(), cycle.clone()).as_ref() == Ok(self)
            }
        }
    }

    pub fn display(&self, g: &Graph) -> String {
        match self {
            BoundaryPath::FiniteToSink(p) => p.display(g),
            BoundaryPath::EventuallyPeriodic { prefix, cycle } => {
                let c = g.path_name(cycle);
                if prefix.is_empty() {
                    format!("({c})^inf")
                } else {
                    format!("{}.({c})^inf", g.path_name(prefix.edges()))
                }
            }
        }
    }
}

fn normalize_periodic(g: &Graph, mut prefix: Vec<EdgeId>, mut cycle: Vec<EdgeId>) -> BoundaryPath {
    let n = cycle.len();
    let period = (1..=n)
        .find(|&d| n.is_multiple_of(d) && (0..n).all(|i| cycle[i] == cycle[i % d]))
        .expect("n is a period");
    cycle.truncate(period);
    while prefix.last().is_some_and(|l| l == cycle.last().unwrap()) {
        prefix.pop();
        cycle.rotate_right(1);
    }
    let k = (0..cycle.len())
        .min_by(|&i, &j| {
            let ri = cycle[i..].iter().chain(&cycle[..i]);
            let rj = cycle[j..].iter().chain(&cycle[..j]);
            ri.cmp(rj)
        })
        .unwrap_or(0);
    prefix.extend_from_slice(&cycle[..k]);
    cycle.rotate_left(k);
    let start = g.src(cycle[0]);
    let prefix = if prefix.is_empty() { FinPath::Vertex(start) } else { FinPath::Edges(prefix) };
    BoundaryPath::EventuallyPeriodic { prefix, cycle }
}

pub fn in_cylinder(g: &Graph, xi: &BoundaryPath, c: &Cylinder) -> bool {
    match c {
        Cylinder::Vertex(v) => xi.source(g) == *v,
        Cylinder::Path(p) => xi.starts_with(p),
    }
}

/// Applies θ_g; `None` when ξ is outside X_{g^{-1}}.
pub fn theta_apply(g: &Graph, word: &ReducedWord, xi: &BoundaryPath) -> Result<Option<BoundaryPath>> {
    Ok(match word.classify(g)? {
        GroupShape::Identity => Some(xi.clone()),
        GroupShape::Path(b) => {
            if xi.source(g) == g.dst(*b.last().unwrap()) {
                Some(xi.prepend(g, &b))
            } else {
                None
            }
        }
        GroupShape::InvPath(b) => xi.starts_with(&b).then(|| xi.strip(g, b.len())),
        GroupShape::PathPair { a, b } => {
            xi.starts_with(&b).then(|| xi.strip(g, b.len()).prepend(g, &a))
        }
        GroupShape::EmptyDomain => None,
    })
}

/// Disjoint cylinders covering the boundary space: the depth-`d` nodes that
/// are not leaves, plus every leaf of depth at most `d`. Tree order.
pub fn cylinder_partition(g: &Graph, depth: usize) -> Vec<Cylinder> {
    fn walk(g: &Graph, node: Cylinder, depth: usize, out: &mut Vec<Cylinder>) {
        if node.is_leaf(g) || node.depth() == depth {
            out.push(node);
        } else {
            for child in node.children(g) {
                walk(g, child, depth, out);
            }
        }
    }
    let mut out = Vec::new();
    for v in g.vertices() {
        walk(g, Cylinder::Vertex(v), depth, &mut out);
    }
    out
}

/// A boundary path inside `c`: follow the least outgoing edge until a sink or
/// a repeated vertex.
pub fn representative(g: &Graph, c: &Cylinder) -> BoundaryPath {
    extend_to_boundary(g, c.edges().to_vec(), c.end(g), |edges| edges[0])
}

/// A random boundary path inside `c`: up to `steps` free random steps, then a
/// random walk closed off at the first repeated vertex.
pub fn random_in(g: &Graph, c: &Cylinder, steps: usize, rng: &mut impl Rng) -> BoundaryPath {
    let mut path = c.edges().to_vec();
    let mut at = c.end(g);
    for _ in 0..steps {
        let out = g.out_edges(at);
        if out.is_empty() {
            break;
        }
        let e = out[rng.gen_range(0..out.len())];
        path.push(e);
        at = g.dst(e);
    }
    extend_to_boundary(g, path, at, |edges| edges[rng.gen_range(0..edges.len())])
}

fn extend_to_boundary(
    g: &Graph,
    mut path: Vec<EdgeId>,
    mut at: VertexId,
    mut choose: impl FnMut(&[EdgeId]) -> EdgeId,
) -> BoundaryPath {
    let start = path.len();
    let mut seen: HashMap<VertexId, usize> = HashMap::new();
    loop {
        if g.is_sink(at) {
            return BoundaryPath::FiniteToSink(FinPath::from_edges(path, at));
        }
        if let Some(&i) = seen.get(&at) {
            let cycle = path.split_off(i);
            return normalize_periodic(g, path, cycle);
        }
        seen.insert(at, path.len());
        let e = choose(g.out_edges(at));
        path.push(e);
        at = g.dst(e);
        debug_assert!(path.len() - start <= g.vertex_count() + 1);
    }
}

/// Every finite boundary path with at most `n` edges and every eventually
/// periodic path with |prefix| + |cycle| <= n.
pub fn boundary_paths_up_to(g: &Graph, n: usize) -> Vec<BoundaryPath> {
    let paths = g.paths_up_to(n);
    let mut out = BTreeSet::new();
    for p in &paths {
        if g.is_sink(p.range(g)) {
            out.insert(BoundaryPath::FiniteToSink(p.clone()));
        }
    }
    for prefix in &paths {
        for cycle in &paths {
            if let FinPath::Edges(c) = cycle {
                if prefix.len() + c.len() <= n
                    && cycle.source(g) == prefix.range(g)
                    && cycle.range(g) == cycle.source(g)
                {
                    out.insert(normalize_periodic(g, prefix.edges().to_vec(), c.clone()));
                }
            }
        }
    }
    out.into_iter().collect()
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cylinder::Vertex(v) => write!(f, "X[#v{}]", v.0),
            Cylinder::Path(p) => {
                write!(f, "X[")?;
                for (i, e) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, ".")?;
                    }
                    write!(f, "#e{}", e.0)?;
                }
                write!(f, "]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path(g: &Graph, names: &[&str]) -> Vec<EdgeId> {
        names.iter().map(|n| g.edge(n).unwrap()).collect()
    }

    fn cyl(g: &Graph, names: &[&str]) -> Cylinder {
        Cylinder::Path(path(g, names))
    }

    #[test]
    fn in_cylinder_examples() {
        let lp = corpus::loop_graph();
        let f_inf = BoundaryPath::periodic(&lp, vec![], path(&lp, &["f"])).unwrap();
        assert!(in_cylinder(&lp, &f_inf, &cyl(&lp, &["f", "f"])));

        let a2 = corpus::a2();
        let w = BoundaryPath::finite(&a2, FinPath::Vertex(a2.vertex("w").unwrap())).unwrap();
        assert!(!in_cylinder(&a2, &w, &Cylinder::Vertex(a2.vertex("v").unwrap())));
        let f = BoundaryPath::finite(&a2, FinPath::Edges(path(&a2, &["f"]))).unwrap();
        assert!(in_cylinder(&a2, &f, &cyl(&a2, &["f"])));
    }

    #[test]
    fn partition_examples() {
        let a2 = corpus::a2();
        assert_eq!(
            cylinder_partition(&a2, 1),
            vec![cyl(&a2, &["f"]), Cylinder::Vertex(a2.vertex("w").unwrap())]
        );
        let lp = corpus::loop_graph();
        assert_eq!(cylinder_partition(&lp, 2), vec![cyl(&lp, &["f", "f"])]);
        let r = corpus::rose2();
        assert_eq!(cylinder_partition(&r, 1), vec![cyl(&r, &["a"]), cyl(&r, &["b"])]);
        assert_eq!(cylinder_partition(&r, 0), vec![Cylinder::Vertex(r.vertex("v").unwrap())]);
    }

    #[test]
    fn theta_examples() {
        let a2 = corpus::a2();
        let w = BoundaryPath::finite(&a2, FinPath::Vertex(a2.vertex("w").unwrap())).unwrap();
        let f = ReducedWord::parse("f", &a2).unwrap();
        assert_eq!(
            theta_apply(&a2, &f, &w).unwrap(),
            Some(BoundaryPath::FiniteToSink(FinPath::Edges(path(&a2, &["f"]))))
        );

        let lp = corpus::loop_graph();
        let f_inf = BoundaryPath::periodic(&lp, vec![], path(&lp, &["f"])).unwrap();
        let fw = ReducedWord::parse("f", &lp).unwrap();
        assert_eq!(theta_apply(&lp, &fw, &f_inf).unwrap(), Some(f_inf.clone()));

        let r = corpus::rose2();
        let xi = BoundaryPath::periodic(&r, path(&r, &["b"]), path(&r, &["a"])).unwrap();
        let g = ReducedWord::parse("a.b'", &r).unwrap();
        let expected = BoundaryPath::periodic(&r, path(&r, &["a"]), path(&r, &["a"])).unwrap();
        assert_eq!(theta_apply(&r, &g, &xi).unwrap(), Some(expected));
        // outside X_b
        let a_inf = BoundaryPath::periodic(&r, vec![], path(&r, &["a"])).unwrap();
        assert_eq!(theta_apply(&r, &g, &a_inf).unwrap(), None);
        let empty = ReducedWord::parse("a'.b", &r).unwrap();
        assert_eq!(theta_apply(&r, &empty, &xi).unwrap(), None);
    }

    #[test]
    fn theta_sink_special_case() {
        let a2 = corpus::a2();
        let f = BoundaryPath::FiniteToSink(FinPath::Edges(path(&a2, &["f"])));
        let finv = ReducedWord::parse("f'", &a2).unwrap();
        assert_eq!(
            theta_apply(&a2, &finv, &f).unwrap(),
            Some(BoundaryPath::FiniteToSink(FinPath::Vertex(a2.vertex("w").unwrap())))
        );
    }

    #[test]
    fn periodic_normalization() {
        let r = corpus::rose2();
        // b.(ab)^inf == (ba)^inf, whose least rotation gives prefix b, cycle ab
        let x = BoundaryPath::periodic(&r, path(&r, &["b"]), path(&r, &["a", "b"])).unwrap();
        let y = BoundaryPath::periodic(&r, vec![], path(&r, &["b", "a", "b", "a"])).unwrap();
        assert_eq!(x, y);
        assert_eq!(
            x,
            BoundaryPath::EventuallyPeriodic {
                prefix: FinPath::Edges(path(&r, &["b"])),
                cycle: path(&r, &["a", "b"])
            }
        );
        let z = BoundaryPath::periodic(&r, path(&r, &["a", "a"]), path(&r, &["a"])).unwrap();
        assert_eq!(z.display(&r), "(a)^inf");
    }

    #[test]
    fn representatives_lie_in_their_cells() {
        for (_, g) in corpus::all() {
            for d in 0..4 {
                for c in cylinder_partition(&g, d) {
                    let xi = representative(&g, &c);
                    assert!(xi.is_valid(&g));
                    assert!(in_cylinder(&g, &xi, &c));
                }
            }
        }
    }

    #[test]
    fn random_paths_lie_in_their_cylinder() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (_, g) in corpus::random_corpus(11, 10, true) {
            for c in cylinder_partition(&g, 2) {
                for steps in 0..4 {
                    let xi = random_in(&g, &c, steps, &mut rng);
                    assert!(xi.is_valid(&g), "{}", xi.display(&g));
                    assert!(in_cylinder(&g, &xi, &c));
                }
            }
        }
    }
}
