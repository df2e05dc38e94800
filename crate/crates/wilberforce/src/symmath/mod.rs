//! Exact polynomial algebra on phase space: canonical Poisson bracket,
//! pullback under the periodic unperturbed flow with exact Fourier-in-time
//! bookkeeping, the averaging operators, normal forms to second order, and
//! rewriting of invariants in the Hopf basis.
//!
//! Everything here is exact: coefficients are arbitrary-precision rationals
//! (Gaussian rationals inside the complexified flow basis) and no floating
//! point enters the main path. Numerical quadrature appears only as a test
//! oracle.

pub mod gauss;
pub mod harmonic;
pub mod hopf;
pub mod normal_form;
pub mod phase;
pub mod poly;

pub use gauss::GaussRational;
pub use harmonic::{ComplexPhase, HarmonicPoly, Resonance};
pub use hopf::{rho_polys, syzygy_phase_poly, HopfPoly, SymError};
pub use normal_form::Convention;
pub use phase::PhasePoly;
pub use poly::{rat, rat_from_f64, Poly};
