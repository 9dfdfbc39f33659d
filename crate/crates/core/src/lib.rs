//! Exact computation with geometrically fast systems of piecewise-linear
//! homeomorphisms of the extended line.
//!
//! The crate decides geometric properness and fastness, extracts and
//! compares dynamical diagrams, realizes diagrams as concrete (terminal or
//! dyadic) systems, solves the word problem, transports marker-orbit
//! points between realizations of a common diagram, excises extraneous
//! bumps, and classifies abstract ping-pong blueprints by embeddability
//! into Thompson's groups F, T, and V. All arithmetic is exact rational;
//! there is no floating point anywhere in the core.

pub mod error;
pub mod num;
pub mod interval;
pub mod plmap;
pub mod fastness;
pub mod diagram;
pub mod system;
pub mod symbolic;
pub mod excision;
pub mod blueprint;
pub mod gen;
pub mod fixtures;

pub use error::{Error, Result};
pub use interval::Interval;
pub use num::{Rat, XRat};
pub use blueprint::{Blueprint, Orderability, PingPongWitness};
pub use excision::ExtraneousCertificate;
pub use symbolic::{LocalWord, OrbitPoint, Word};
pub use system::{diagram_of, FastSystem};
pub use diagram::{DiagramEdge, DiagramIso, DynamicalDiagram, Realization};
pub use plmap::{Affine, Bump, Orbital, PLMap, Sign};
