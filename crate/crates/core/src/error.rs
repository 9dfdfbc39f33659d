use thiserror::Error;

use crate::num::XRat;

/// Errors reported by the library. Every precondition failure names the
/// violated invariant so CLI callers can surface it verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational literal `{0}`")]
    BadRational(String),

    #[error("breakpoint inputs must be strictly increasing (offset {0})")]
    BreakpointsNotIncreasing(usize),

    #[error("outputs must be strictly increasing (offset {0})")]
    OutputsNotIncreasing(usize),

    #[error("affine tail must have positive slope")]
    NonPositiveSlope,

    #[error("tail disagrees with the extreme breakpoint on the {0} side")]
    TailMismatch(&'static str),

    #[error("map with no breakpoints needs equal tails")]
    TailsDiffer,

    #[error("expected a one-orbital positive map, found {0} orbitals")]
    NotABump(usize),

    #[error("expected a positive bump, found a negative orbital")]
    NegativeBump,

    #[error("empty interval: lo {0} hi {1}")]
    EmptyInterval(XRat, XRat),

    #[error("family is not geometrically proper: {0} is a {2} transition point of generators {1:?}")]
    NotProper(XRat, (usize, usize), &'static str),

    #[error("family is not geometrically fast: chain {0:?} has C_max {2} > {3} = C_min({1}) * product")]
    NotFast(Vec<usize>, XRat, XRat, XRat),

    #[error("isolated bump {0} has an unbounded orbital; its midpoint marker does not exist")]
    UnboundedIsolatedOrbital(usize),

    #[error("diagram vertex {0} has total degree {1}, expected 1")]
    BadVertexDegree(usize, usize),

    #[error("diagram edge endpoint {0} out of range (feet = {1})")]
    EdgeOutOfRange(usize, usize),

    #[error("diagram feet count {0} does not match 2 * edges = {1}")]
    FeetCountMismatch(usize, usize),

    #[error("edges labeled `{0}` have overlapping spans; one generator cannot own nested bumps")]
    OverlappingLabelSpans(String),

    #[error("diagram has an isolated edge ({0} -> {1}); eliminate it first")]
    IsolatedEdge(usize, usize),

    #[error("diagrams are not isomorphic: {0}")]
    NotIsomorphic(String),

    #[error("unknown generator name `{0}`")]
    UnknownGenerator(String),

    #[error("unknown marker name `{0}`")]
    UnknownMarker(String),

    #[error("malformed word token `{0}`")]
    BadWordToken(String),

    #[error("local word is not locally reduced at symbol offset {0}")]
    NotInLambda(usize),

    #[error("bump {0} is not used in the map")]
    BumpNotUsed(usize),

    #[error("invalid excision certificate: {0}")]
    BadCertificate(String),

    #[error("blueprint is invalid: {0:?}")]
    InvalidBlueprint(Vec<String>),

    #[error("blueprint symbol `{0}` is unknown")]
    UnknownSymbol(String),

    #[error("{0} symbols exceed the search bound {1}; refusing the exhaustive search")]
    SearchTooLarge(usize, usize),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
