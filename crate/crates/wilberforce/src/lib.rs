//! Strongly coupled Wilberforce pendulum in 1:2 resonance.
//!
//! A two-degree-of-freedom oscillator with quartic coupling `eps * q1^2 q2^2`,
//! analyzed three ways that cross-check each other:
//!
//! - direct numerics: symplectic velocity-Verlet integration and Poincare
//!   sections on an energy level ([`integrators`], [`poincare`]);
//! - exact algebra: averaging operators over the periodic unperturbed flow,
//!   first- and second-order normal forms with rational coefficients, and
//!   rewriting of flow invariants in the Hopf generator basis ([`symmath`]);
//! - reduced geometry: the singular reduced phase space (a pinched sphere),
//!   its Poisson structure, and the critical-point analysis that predicts
//!   periodic orbits ([`reduction`]), realized numerically by shooting and
//!   return-map fixed points with Floquet stability ([`orbits`]).
//!
//! The [`verify`] module runs the full battery of cross-checks; the companion
//! CLI exposes each stage as a subcommand.

pub mod dynamics;
pub mod integrators;
pub mod orbits;
pub mod poincare;
pub mod reduction;
pub mod svg;
pub mod symmath;
pub mod verify;

pub use dynamics::{EnergyLevel, PhaseState, SystemParams};
