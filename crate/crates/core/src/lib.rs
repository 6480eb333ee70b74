//! Exact computations with rank-two vector bundles given by transition
//! cocycles: Birkhoff–Grothendieck splitting on the projective line,
//! push-forwards of line bundles along double covers, and the concrete
//! double cover of the plane branched along a conic.

pub mod conic_p2;
pub mod double_cover;
pub mod error;
pub mod exact_arith;
pub mod p1_bundles;

pub use error::{Error, Result};
