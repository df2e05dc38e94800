//! Phase space, parameters, Hamiltonian, vector field, and the exact flow of
//! the unperturbed part.
//!
//! The model is H = 1/2 (p1^2 + m w1^2 q1^2 + p2^2 + I w2^2 q2^2) + eps q1^2 q2^2,
//! a pair of harmonic modes with a quartic coupling. The resonant configuration
//! m = I = w1 = 1, w2 = 2 (see [`SystemParams::resonant_12`]) is the one all
//! symbolic machinery specializes to.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("invalid parameter {name}: {value} (must be {requirement})")]
    InvalidParam {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("energy level must be finite and nonnegative, got {0}")]
    InvalidEnergy(f64),
}

/// Masses, frequencies and coupling strength of the two-mode system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Mass of the elongation mode.
    pub m: f64,
    /// Moment of inertia of the torsion mode.
    pub inertia: f64,
    /// Frequency of mode 1.
    pub omega1: f64,
    /// Frequency of mode 2.
    pub omega2: f64,
    /// Coupling strength of the quartic term.
    pub epsilon: f64,
}

impl SystemParams {
    pub fn new(
        m: f64,
        inertia: f64,
        omega1: f64,
        omega2: f64,
        epsilon: f64,
    ) -> Result<Self, DynamicsError> {
        let p = Self {
            m,
            inertia,
            omega1,
            omega2,
            epsilon,
        };
        p.validate()?;
        Ok(p)
    }

    /// The resonant preset m = I = w1 = 1, w2 = 2 used throughout the analysis.
    pub fn resonant_12(epsilon: f64) -> Result<Self, DynamicsError> {
        Self::new(1.0, 1.0, 1.0, 2.0, epsilon)
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let positive: [(&'static str, f64); 4] = [
            ("m", self.m),
            ("I", self.inertia),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(DynamicsError::InvalidParam {
                    name,
                    value,
                    requirement: "finite and > 0",
                });
            }
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(DynamicsError::InvalidParam {
                name: "epsilon",
                value: self.epsilon,
                requirement: "finite and >= 0",
            });
        }
        Ok(())
    }

    /// True when (w1, w2) is exactly the (1, 2) resonance the reduced analysis needs.
    pub fn is_resonant_12(&self) -> bool {
        self.omega1 == 1.0 && self.omega2 == 2.0
    }
}

/// A point (q1, p1, q2, p2) of the four-dimensional phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub q1: f64,
    pub p1: f64,
    pub q2: f64,
    pub p2: f64,
}

impl PhaseState {
    pub fn new(q1: f64, p1: f64, q2: f64, p2: f64) -> Self {
        Self { q1, p1, q2, p2 }
    }

    pub const ZERO: PhaseState = PhaseState {
        q1: 0.0,
        p1: 0.0,
        q2: 0.0,
        p2: 0.0,
    };

    pub fn to_array(self) -> [f64; 4] {
        [self.q1, self.p1, self.q2, self.p2]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    /// Euclidean distance to another state.
    pub fn distance(&self, other: &PhaseState) -> f64 {
        let a = self.to_array();
        let b = other.to_array();
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    /// Momentum-reversed state, conjugating forward and backward time flow.
    pub fn reverse_momenta(&self) -> PhaseState {
        PhaseState::new(self.q1, -self.p1, self.q2, -self.p2)
    }
}

/// A validated energy value h >= 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel(f64);

impl EnergyLevel {
    pub fn new(h: f64) -> Result<Self, DynamicsError> {
        if h.is_finite() && h >= 0.0 {
            Ok(Self(h))
        } else {
            Err(DynamicsError::InvalidEnergy(h))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Full Hamiltonian H = 1/2 (p1^2 + m w1^2 q1^2 + p2^2 + I w2^2 q2^2) + eps q1^2 q2^2.
pub fn hamiltonian(params: &SystemParams, s: &PhaseState) -> f64 {
    let kappa = params.m * params.omega1 * params.omega1;
    let rho = params.inertia * params.omega2 * params.omega2;
    0.5 * (s.p1 * s.p1 + kappa * s.q1 * s.q1 + s.p2 * s.p2 + rho * s.q2 * s.q2)
        + params.epsilon * s.q1 * s.q1 * s.q2 * s.q2
}

/// Unperturbed part 1/2 (p1^2 + w1^2 q1^2 + p2^2 + w2^2 q2^2) in the m = I = 1
/// convention of the symbolic pipeline.
pub fn h0(params: &SystemParams, s: &PhaseState) -> f64 {
    let w1sq = params.omega1 * params.omega1;
    let w2sq = params.omega2 * params.omega2;
    0.5 * (s.p1 * s.p1 + w1sq * s.q1 * s.q1 + s.p2 * s.p2 + w2sq * s.q2 * s.q2)
}

/// Hamiltonian vector field (q1', p1', q2', p2') of the full system.
pub fn vector_field(params: &SystemParams, s: &PhaseState) -> [f64; 4] {
    let (f1, f2) = forces(params, s.q1, s.q2);
    [s.p1, f1, s.p2, f2]
}

/// Force components F1 = -(m w1^2 q1 + 2 eps q1 q2^2), F2 = -(I w2^2 q2 + 2 eps q2 q1^2).
pub fn forces(params: &SystemParams, q1: f64, q2: f64) -> (f64, f64) {
    let f1 = -(params.m * params.omega1 * params.omega1 * q1 + 2.0 * params.epsilon * q1 * q2 * q2);
    let f2 = -(params.inertia * params.omega2 * params.omega2 * q2
        + 2.0 * params.epsilon * q2 * q1 * q1);
    (f1, f2)
}

/// Exact linear flow of the unperturbed Hamiltonian at time t.
///
/// Each mode rotates rigidly: q_j(t) = q_j cos(w_j t) + (p_j / w_j) sin(w_j t),
/// p_j(t) = -w_j q_j sin(w_j t) + p_j cos(w_j t). For coprime integer
/// frequencies the flow is 2*pi-periodic.
pub fn h0_flow(omega1: f64, omega2: f64, s: &PhaseState, t: f64) -> PhaseState {
    let (c1, s1) = ((omega1 * t).cos(), (omega1 * t).sin());
    let (c2, s2) = ((omega2 * t).cos(), (omega2 * t).sin());
    PhaseState::new(
        s.q1 * c1 + s.p1 / omega1 * s1,
        -omega1 * s.q1 * s1 + s.p1 * c1,
        s.q2 * c2 + s.p2 / omega2 * s2,
        -omega2 * s.q2 * s2 + s.p2 * c2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_state(rng: &mut impl Rng) -> PhaseState {
        PhaseState::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    }

    #[test]
    fn params_validation() {
        assert!(SystemParams::new(1.0, 1.0, 1.0, 2.0, 0.0).is_ok());
        assert!(SystemParams::new(0.0, 1.0, 1.0, 2.0, 0.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, 1.0, 2.0, -0.1).is_err());
        assert!(SystemParams::new(1.0, 1.0, 1.0, f64::NAN, 0.0).is_err());
        assert!(EnergyLevel::new(-1.0).is_err());
        assert!(EnergyLevel::new(3.0).is_ok());
    }

    #[test]
    fn hamiltonian_values() {
        let p0 = SystemParams::resonant_12(0.0).unwrap();
        assert_eq!(hamiltonian(&p0, &PhaseState::ZERO), 0.0);
        let s = PhaseState::new(1.0, 1.0, 1.0, 1.0);
        assert_abs_diff_eq!(hamiltonian(&p0, &s), 3.5, epsilon = 1e-15);
        let p = SystemParams::resonant_12(0.5).unwrap();
        assert_abs_diff_eq!(hamiltonian(&p, &s), 4.0, epsilon = 1e-15);
    }

    #[test]
    fn h0_values() {
        let p = SystemParams::resonant_12(0.7).unwrap();
        assert_abs_diff_eq!(
            h0(&p, &PhaseState::new(1.0, 0.0, 0.0, 0.0)),
            0.5,
            epsilon = 1e-15
        );
        assert_eq!(h0(&p, &PhaseState::ZERO), 0.0);
        assert_abs_diff_eq!(
            h0(&p, &PhaseState::new(1.0, 1.0, 1.0, 1.0)),
            3.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn vector_field_values() {
        let p0 = SystemParams::resonant_12(0.0).unwrap();
        assert_eq!(vector_field(&p0, &PhaseState::ZERO), [0.0; 4]);
        let s = PhaseState::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(vector_field(&p0, &s), [0.0, -1.0, 0.0, -4.0]);
        let p = SystemParams::resonant_12(0.5).unwrap();
        assert_eq!(vector_field(&p, &s), [0.0, -2.0, 0.0, -5.0]);
    }

    #[test]
    fn flow_is_2pi_periodic_and_matches_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let s = random_state(&mut rng);
            let back = h0_flow(1.0, 2.0, &s, 2.0 * PI);
            assert!(s.distance(&back) < 1e-12);
        }
        let s = h0_flow(1.0, 2.0, &PhaseState::new(1.0, 0.0, 0.0, 0.0), PI / 2.0);
        assert!(s.distance(&PhaseState::new(0.0, -1.0, 0.0, 0.0)) < 1e-15);
        let s = h0_flow(1.0, 2.0, &PhaseState::new(0.0, 0.0, 1.0, 0.0), PI / 2.0);
        assert!(s.distance(&PhaseState::new(0.0, 0.0, -1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn flow_conserves_h0_and_composes() {
        let params = SystemParams::resonant_12(0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let s = random_state(&mut rng);
            let t1: f64 = rng.gen_range(-5.0..5.0);
            let t2: f64 = rng.gen_range(-5.0..5.0);
            let once = h0_flow(1.0, 2.0, &s, t1 + t2);
            let twice = h0_flow(1.0, 2.0, &h0_flow(1.0, 2.0, &s, t1), t2);
            assert!(once.distance(&twice) < 1e-12);
            assert_abs_diff_eq!(
                h0(&params, &h0_flow(1.0, 2.0, &s, t1)),
                h0(&params, &s),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn flow_derivative_matches_vector_field() {
        let params = SystemParams::resonant_12(0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let dt = 1e-6;
        for _ in 0..10 {
            let s = random_state(&mut rng);
            let fwd = h0_flow(1.0, 2.0, &s, dt).to_array();
            let bwd = h0_flow(1.0, 2.0, &s, -dt).to_array();
            let vf = vector_field(&params, &s);
            for i in 0..4 {
                assert_abs_diff_eq!((fwd[i] - bwd[i]) / (2.0 * dt), vf[i], epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn coordinate_planes_are_invariant() {
        for eps in [0.0, 0.3, 0.9] {
            let p = SystemParams::resonant_12(eps).unwrap();
            let s = PhaseState::new(0.7, -0.2, 0.0, 0.0);
            let v = vector_field(&p, &s);
            assert_eq!((v[2], v[3]), (0.0, 0.0));
            let s = PhaseState::new(0.0, 0.0, 0.7, -0.2);
            let v = vector_field(&p, &s);
            assert_eq!((v[0], v[1]), (0.0, 0.0));
        }
    }
}
