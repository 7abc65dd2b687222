//! Leavitt path algebras of finite graphs realized as partial skew group rings
//! over the free group on the edges, with deciders for graded ring properties.

pub mod action;
pub mod beta;
pub mod boundary;
pub mod corpus;
pub mod error;
pub mod function;
pub mod graded;
pub mod graph;
pub mod linalg;
pub mod lpa;
pub mod random;
pub mod scalar;
pub mod skew;
pub mod word;

pub use action::{Alpha, PartialAction};
pub use beta::{BetaAction, DsFunction};
pub use boundary::{BoundaryPath, Cylinder};
pub use error::{Error, Result};
pub use function::{DFunction, FunctionAlgebra};
pub use graded::{Certificate, Decision, Property};
pub use graph::{EdgeId, FinPath, Graph, GraphDef, VertexClass, VertexId};
pub use lpa::{GradeMorphism, Lpa, LpaTerm};
pub use scalar::{Field, Scalar};
pub use skew::{SkewElement, SkewRing};
pub use word::{GroupShape, Letter, ReducedWord};
