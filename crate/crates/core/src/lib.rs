//! Equivariant symmetric bilinear torsion of finite cochain complexes and
//! combinatorial Thom-Smale complexes, computed two independent ways: through
//! the canonical determinant-line isomorphism and through spectral-cutoff
//! regularized determinants of the bilinear Laplacian. The comparison module
//! evaluates the closed-form anomaly and correction factors that tie the two
//! together.

pub mod cochain;
pub mod comparison;
pub mod error;
pub mod generator;
pub mod groups;
pub mod io;
pub mod linalg;
pub mod morse;
pub mod spectral;
pub mod torsion;

pub use error::{Error, Result};

/// Default tolerance for exact-in-theory identities on O(1)-norm inputs;
/// the CLI reads TORSION_FORGE_TOLERANCE to override it.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

pub fn tolerance_from_env() -> f64 {
    std::env::var("TORSION_FORGE_TOLERANCE")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_TOLERANCE)
}
