//! Time integration of the coupled system: the symplectic velocity-Verlet
//! scheme used for all production runs, and a classical fourth-order
//! Runge-Kutta step as a non-symplectic cross-validation oracle.

use crate::dynamics::{forces, hamiltonian, vector_field, PhaseState, SystemParams};
use serde::{Deserialize, Serialize};
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IntegratorError {
    #[error("invalid integrator config: {0}")]
    InvalidConfig(String),
    #[error("trajectory diverged (nonfinite state) at step {step}, t = {t}")]
    Divergence { step: usize, t: f64 },
    #[error("energy drift undefined: H(s0) = 0")]
    ZeroInitialEnergy,
    #[error("io error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Verlet,
    Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    /// Step size.
    pub k: f64,
    pub method: Method,
    /// Total integration time.
    pub t_final: f64,
    /// Record every n-th step (step 0 and the final step are always recorded).
    pub sample_stride: usize,
}

impl IntegratorConfig {
    pub fn new(k: f64, method: Method, t_final: f64, sample_stride: usize) -> Self {
        Self {
            k,
            method,
            t_final,
            sample_stride,
        }
    }

    pub fn validate(&self) -> Result<(), IntegratorError> {
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(IntegratorError::InvalidConfig(format!(
                "step size k = {} must be > 0",
                self.k
            )));
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(IntegratorError::InvalidConfig(format!(
                "t_final = {} must be > 0",
                self.t_final
            )));
        }
        if self.sample_stride == 0 {
            return Err(IntegratorError::InvalidConfig(
                "sample_stride must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// One velocity-Verlet step: both positions advance with the half-k^2 force
/// term first, then both momenta advance with the average of the forces at
/// the old and new positions.
pub fn verlet_step(params: &SystemParams, s: &PhaseState, k: f64) -> PhaseState {
    let (f1_old, f2_old) = forces(params, s.q1, s.q2);
    let q1 = s.q1 + k * s.p1 + 0.5 * k * k * f1_old;
    let q2 = s.q2 + k * s.p2 + 0.5 * k * k * f2_old;
    let (f1_new, f2_new) = forces(params, q1, q2);
    let p1 = s.p1 + 0.5 * k * (f1_new + f1_old);
    let p2 = s.p2 + 0.5 * k * (f2_new + f2_old);
    PhaseState::new(q1, p1, q2, p2)
}

/// One classical RK4 step on the first-order system.
pub fn reference_step(params: &SystemParams, s: &PhaseState, k: f64) -> PhaseState {
    let add = |a: [f64; 4], b: [f64; 4], c: f64| {
        [a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2], a[3] + c * b[3]]
    };
    let f = |a: [f64; 4]| vector_field(params, &PhaseState::from_array(a));
    let y = s.to_array();
    let k1 = f(y);
    let k2 = f(add(y, k1, 0.5 * k));
    let k3 = f(add(y, k2, 0.5 * k));
    let k4 = f(add(y, k3, k));
    let mut out = y;
    for i in 0..4 {
        out[i] += k / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    PhaseState::from_array(out)
}

pub fn step(params: &SystemParams, s: &PhaseState, k: f64, method: Method) -> PhaseState {
    match method {
        Method::Verlet => verlet_step(params, s, k),
        Method::Reference => reference_step(params, s, k),
    }
}

/// A sampled trajectory together with the parameters that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub params: SystemParams,
    pub times: Vec<f64>,
    pub states: Vec<PhaseState>,
}

impl Trajectory {
    /// CSV with header `t,q1,p1,q2,p2`, full double precision.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), IntegratorError> {
        let io = |e: std::io::Error| IntegratorError::Io(e.to_string());
        writeln!(w, "t,q1,p1,q2,p2").map_err(io)?;
        for (t, s) in self.times.iter().zip(&self.states) {
            writeln!(w, "{},{},{},{},{}", t, s.q1, s.p1, s.q2, s.p2).map_err(io)?;
        }
        Ok(())
    }
}

/// Integrate from `s0` over ceil(t_final / k) steps, recording samples.
pub fn integrate(
    params: &SystemParams,
    s0: &PhaseState,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, IntegratorError> {
    cfg.validate()?;
    // tiny slack so an exact multiple of k does not round up to an extra step
    let n_steps = (cfg.t_final / cfg.k - 1e-9).ceil().max(1.0) as usize;
    let mut times = Vec::with_capacity(n_steps / cfg.sample_stride + 2);
    let mut states = Vec::with_capacity(n_steps / cfg.sample_stride + 2);
    let mut s = *s0;
    times.push(0.0);
    states.push(s);
    for i in 1..=n_steps {
        s = step(params, &s, cfg.k, cfg.method);
        if !s.is_finite() {
            return Err(IntegratorError::Divergence {
                step: i,
                t: i as f64 * cfg.k,
            });
        }
        if i % cfg.sample_stride == 0 || i == n_steps {
            times.push(i as f64 * cfg.k);
            states.push(s);
        }
    }
    Ok(Trajectory {
        params: *params,
        times,
        states,
    })
}

/// Maximum relative energy error over the samples of a trajectory.
pub fn energy_drift(traj: &Trajectory) -> Result<f64, IntegratorError> {
    let s0 = traj
        .states
        .first()
        .ok_or_else(|| IntegratorError::InvalidConfig("empty trajectory".into()))?;
    let h_ref = hamiltonian(&traj.params, s0);
    if h_ref == 0.0 {
        return Err(IntegratorError::ZeroInitialEnergy);
    }
    Ok(traj
        .states
        .iter()
        .map(|s| (hamiltonian(&traj.params, s) - h_ref).abs() / h_ref.abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn resonant(eps: f64) -> SystemParams {
        SystemParams::resonant_12(eps).unwrap()
    }

    #[test]
    fn verlet_step_hand_computed() {
        let p = resonant(0.0);
        let s = verlet_step(&p, &PhaseState::new(1.0, 0.0, 1.0, 0.0), 0.1);
        assert_abs_diff_eq!(s.q1, 0.995, epsilon = 1e-15);
        assert_abs_diff_eq!(s.p1, -0.09975, epsilon = 1e-15);
        assert_abs_diff_eq!(s.q2, 0.98, epsilon = 1e-15);
        assert_abs_diff_eq!(s.p2, -0.396, epsilon = 1e-15);
    }

    #[test]
    fn equilibrium_is_fixed() {
        let p = resonant(0.7);
        assert_eq!(verlet_step(&p, &PhaseState::ZERO, 0.3), PhaseState::ZERO);
        assert_eq!(reference_step(&p, &PhaseState::ZERO, 0.3), PhaseState::ZERO);
    }

    #[test]
    fn invariant_plane_stays_exactly_zero() {
        let p = resonant(0.5);
        let mut s = PhaseState::new(1.0, 0.0, 0.0, 0.0);
        for _ in 0..1000 {
            s = verlet_step(&p, &s, 1e-2);
            assert_eq!((s.q2, s.p2), (0.0, 0.0));
        }
        let mut s = PhaseState::new(0.0, 0.0, 1.0, 0.0);
        for _ in 0..1000 {
            s = verlet_step(&p, &s, 1e-2);
            assert_eq!((s.q1, s.p1), (0.0, 0.0));
        }
    }

    #[test]
    fn verlet_closes_period_at_eps0() {
        let p = resonant(0.0);
        // step chosen to divide the period so the endpoint lands on t = 2*pi
        let k = 2.0 * PI / 6283.0;
        let cfg = IntegratorConfig::new(k, Method::Verlet, 2.0 * PI, 1);
        let traj = integrate(&p, &PhaseState::new(1.0, 0.0, 0.0, 0.0), &cfg).unwrap();
        let last = traj.states.last().unwrap();
        assert!(last.distance(&PhaseState::new(1.0, 0.0, 0.0, 0.0)) < 1e-5);
        let last_t = *traj.times.last().unwrap();
        assert!((last_t - 2.0 * PI).abs() < 1e-3);
    }

    #[test]
    fn reference_step_is_fourth_order_accurate() {
        let p = resonant(0.0);
        let mut s = PhaseState::new(1.0, 0.0, 0.0, 0.0);
        let k = 1e-3;
        let n = (1.0 / k) as usize;
        for _ in 0..n {
            s = reference_step(&p, &s, k);
        }
        assert!((s.q1 - 1.0f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn verlet_and_reference_agree_to_second_order() {
        let p = resonant(0.5);
        let cfg_v = IntegratorConfig::new(1e-3, Method::Verlet, 1.0, 1000);
        let cfg_r = IntegratorConfig::new(1e-3, Method::Reference, 1.0, 1000);
        let s0 = PhaseState::new(1.0, 1.0, 1.0, 1.0);
        let tv = integrate(&p, &s0, &cfg_v).unwrap();
        let tr = integrate(&p, &s0, &cfg_r).unwrap();
        let d = tv.states.last().unwrap().distance(tr.states.last().unwrap());
        assert!(d < 1e-4, "verlet/reference mismatch {d}");
    }

    #[test]
    fn global_error_orders() {
        // against the exact eps=0 solution at t=1: Verlet O(k^2), RK4 O(k^4)
        let p = resonant(0.0);
        let exact = 1.0f64.cos();
        let err = |method: Method, k: f64| {
            let n = (1.0 / k).round() as usize;
            let mut s = PhaseState::new(1.0, 0.0, 0.0, 0.0);
            for _ in 0..n {
                s = step(&p, &s, k, method);
            }
            (s.q1 - exact).abs()
        };
        let (e1, e2) = (err(Method::Verlet, 2e-3), err(Method::Verlet, 1e-3));
        assert!(e1 / e2 > 3.0 && e1 / e2 < 5.0, "verlet ratio {}", e1 / e2);
        let (r1, r2) = (err(Method::Reference, 4e-3), err(Method::Reference, 2e-3));
        assert!(r1 / r2 > 12.0 && r1 / r2 < 20.0, "rk4 ratio {}", r1 / r2);
    }

    #[test]
    fn verlet_energy_error_bounded_reference_drifts() {
        let p = resonant(0.5);
        let s0 = PhaseState::new(1.0, 1.0, 1.0, 1.0);
        let drift = |method: Method, t_final: f64| {
            let cfg = IntegratorConfig::new(1e-3, method, t_final, 50);
            energy_drift(&integrate(&p, &s0, &cfg).unwrap()).unwrap()
        };
        let v100 = drift(Method::Verlet, 100.0);
        let v1000 = drift(Method::Verlet, 1000.0);
        assert!(v1000 < 1e-5);
        assert!(v1000 / v100 < 2.0, "verlet drift grew: {v100} -> {v1000}");
        // the non-symplectic oracle accumulates energy error monotonically
        let r100 = drift(Method::Reference, 100.0);
        let r1000 = drift(Method::Reference, 1000.0);
        assert!(r1000 > 2.0 * r100, "rk4 drift should grow: {r100} -> {r1000}");
    }

    #[test]
    fn reversibility_via_momentum_flip() {
        let p = resonant(0.8);
        let s0 = PhaseState::new(0.3, -0.4, 0.5, 0.2);
        let k = 1e-3;
        let n = 10_000; // n*k = 10
        let mut s = s0;
        for _ in 0..n {
            s = verlet_step(&p, &s, k);
        }
        let mut r = s.reverse_momenta();
        for _ in 0..n {
            r = verlet_step(&p, &r, k);
        }
        assert!(r.reverse_momenta().distance(&s0) < 1e-8);
    }

    #[test]
    fn divergence_is_reported_with_step_index() {
        // blow the state up by brute force: gigantic step size on a stiff orbit
        let p = resonant(1.0);
        let cfg = IntegratorConfig::new(10.0, Method::Verlet, 1000.0, 1);
        let err = integrate(&p, &PhaseState::new(5.0, 5.0, 5.0, 5.0), &cfg).unwrap_err();
        assert!(matches!(err, IntegratorError::Divergence { .. }));
    }

    #[test]
    fn energy_drift_rejects_zero_energy() {
        let p = resonant(0.0);
        let traj = Trajectory {
            params: p,
            times: vec![0.0],
            states: vec![PhaseState::ZERO],
        };
        assert_eq!(energy_drift(&traj), Err(IntegratorError::ZeroInitialEnergy));
    }

    #[test]
    fn csv_export_shape() {
        let p = resonant(0.0);
        let cfg = IntegratorConfig::new(0.1, Method::Verlet, 0.5, 2);
        let traj = integrate(&p, &PhaseState::new(1.0, 0.0, 0.0, 0.0), &cfg).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,q1,p1,q2,p2");
        assert_eq!(lines.len(), 1 + traj.times.len());
        // strictly increasing sample times
        assert!(traj.times.windows(2).all(|w| w[0] < w[1]));
    }
}
