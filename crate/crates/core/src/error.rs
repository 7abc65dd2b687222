use thiserror::Error;

use crate::graph::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {}", format_violations(.0))]
    InvalidGraph(Vec<Violation>),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("generator `{0}` names both a vertex and an edge")]
    AmbiguousGenerator(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("element does not belong to this graph: {0}")]
    ForeignElement(String),

    #[error("scalar fields differ: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("element is not in the domain ideal D_{word}")]
    NotInDomain { word: String },

    #[error("element is not homogeneous (support: {0})")]
    NonHomogeneous(String),

    #[error("element is zero")]
    ZeroElement,

    #[error("the graph has no edges")]
    EdgelessGraph,

    #[error("the graph has an isolated vertex `{0}`")]
    IsolatedVertex(String),

    #[error("the graph is not a loop")]
    NotALoop,

    #[error("cylinder depth {found} exceeds partition depth {depth}")]
    TooDeep { found: usize, depth: usize },

    #[error("malformed graph file: {0}")]
    Json(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
