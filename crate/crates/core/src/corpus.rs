//! The shipped graph corpus and a seeded random-graph generator.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{EdgeDef, Graph, GraphDef};

pub const LOOP_JSON: &str = include_str!("../corpus/loop.json");
pub const ROSE2_JSON: &str = include_str!("../corpus/rose2.json");
pub const A2_JSON: &str = include_str!("../corpus/a2.json");
pub const TOEPLITZ_JSON: &str = include_str!("../corpus/toeplitz.json");

fn load(text: &str) -> Graph {
    Graph::from_json(text).expect("corpus graph is valid")
}

/// One vertex `v`, one loop `f`.
pub fn loop_graph() -> Graph {
    load(LOOP_JSON)
}

/// One vertex `v`, two loops `a`, `b`.
pub fn rose2() -> Graph {
    load(ROSE2_JSON)
}

/// `f: v -> w`, with `w` a sink.
pub fn a2() -> Graph {
    load(A2_JSON)
}

/// `f: v -> v`, `g: v -> w`.
pub fn toeplitz() -> Graph {
    load(TOEPLITZ_JSON)
}

/// The named corpus in name order.
pub fn all() -> Vec<(String, Graph)> {
    vec![
        ("a2".to_string(), a2()),
        ("loop".to_string(), loop_graph()),
        ("rose2".to_string(), rose2()),
        ("toeplitz".to_string(), toeplitz()),
    ]
}

pub fn by_name(name: &str) -> Option<Graph> {
    all().into_iter().find(|(n, _)| n == name).map(|(_, g)| g)
}

/// Random graph with 1..=`max_vertices` vertices and 1..=`max_edges` edges.
/// With `allow_isolated == false`, every vertex touches an edge.
pub fn random_graph(
    rng: &mut impl Rng,
    max_vertices: usize,
    max_edges: usize,
    allow_isolated: bool,
) -> Graph {
    loop {
        let n = rng.gen_range(1..=max_vertices);
        let m = rng.gen_range(1..=max_edges);
        let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<EdgeDef> = (0..m)
            .map(|i| EdgeDef {
                id: format!("e{i}"),
                src: vertices[rng.gen_range(0..n)].clone(),
                dst: vertices[rng.gen_range(0..n)].clone(),
            })
            .collect();
        let g = Graph::new(&GraphDef { vertices, edges }).expect("generated graph is valid");
        if allow_isolated || g.vertices().all(|v| !g.is_isolated(v)) {
            return g;
        }
    }
}

/// `count` random graphs from a fixed seed, named `random-00`, `random-01`, ...
pub fn random_corpus(seed: u64, count: usize, allow_isolated: bool) -> Vec<(String, Graph)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| (format!("random-{i:02}"), random_graph(&mut rng, 5, 8, allow_isolated)))
        .collect()
}
