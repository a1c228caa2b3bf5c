//! Conformal geometry of the neutral space R^{2,2}.
//!
//! Hyperspheres are encoded by diagonal polyspherical coordinates (DPC) in
//! R^{3,3}, conformal maps act linearly on them, and conjugate conic pairs
//! are pairs of complementary indefinite 3-subspaces. On top of that sit a
//! quadrature harness for mean value checks of the ultrahyperbolic equation
//! and a verifier for the conic/ruling correspondence in 3-space.

pub mod conformal;
pub mod conics;
pub mod dpc;
pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod lines;
pub mod neutral;
pub mod quadrature;
pub mod rng;
pub mod solutions;

pub use error::{Error, Result};
pub use neutral::{inner22, inner33, norm22, MetricClass, Point22, Signature, Subspace33, Vec33};
