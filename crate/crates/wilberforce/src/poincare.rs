//! Poincare section on an energy level: the section is q2 = 0, with p2
//! recovered from the energy constraint, and crossings refined by bisection.
//!
//! Initial conditions follow the sampling recipe (j/100, 1.5, p2, 0.01) with
//! j drawn uniformly from [-100, 100]; by default the quadruple is read in
//! section coordinates as (p1, q1, p2, q2), see [`IcOrdering`].

use crate::dynamics::{PhaseState, SystemParams};
use crate::integrators::verlet_step;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PoincareError {
    #[error("discriminant negative: state not on the energy level (value {0})")]
    DiscriminantNegative(f64),
    #[error("all sampled initial conditions failed the energy closure")]
    EmptySample,
    #[error("trajectory diverged at t = {t} after {crossings} crossings")]
    Divergence { t: f64, crossings: usize },
    #[error("invalid section config: {0}")]
    InvalidConfig(String),
    #[error("io error: {0}")]
    Io(String),
}

/// Sign branch of the square root in the p2 recovery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// How the sampling quadruple (j/100, 1.5, x, 0.01) maps onto coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum IcOrdering {
    /// Section-coordinate reading: (p1, q1, p2, q2) = (j/100, 1.5, solved, 0.01).
    #[default]
    P1Q1P2Q2,
    /// Literal phase-space reading: (q1, p1, q2, p2) = (j/100, 1.5, 0.01, solved).
    Q1P1Q2P2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionConfig {
    /// Full-Hamiltonian energy level.
    pub h: f64,
    pub epsilon: f64,
    pub branch: Branch,
    /// Number of initial conditions to draw.
    pub count: usize,
    /// Crossings recorded per trajectory.
    pub max_crossings: usize,
    /// Integration step.
    pub k: f64,
    pub seed: u64,
    pub ordering: IcOrdering,
}

impl SectionConfig {
    pub fn paper_preset(epsilon: f64, seed: u64) -> Self {
        Self {
            h: 3.0,
            epsilon,
            branch: Branch::Plus,
            count: 10,
            max_crossings: 500,
            k: 1e-3,
            seed,
            ordering: IcOrdering::P1Q1P2Q2,
        }
    }

    pub fn validate(&self) -> Result<(), PoincareError> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(PoincareError::InvalidConfig(format!(
                "h = {} must be > 0",
                self.h
            )));
        }
        if self.max_crossings == 0 {
            return Err(PoincareError::InvalidConfig(
                "max_crossings must be >= 1".into(),
            ));
        }
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(PoincareError::InvalidConfig("k must be > 0".into()));
        }
        Ok(())
    }

    fn params(&self) -> SystemParams {
        SystemParams::resonant_12(self.epsilon).expect("epsilon validated")
    }
}

/// One recorded crossing of the section q2 = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionPoint {
    pub p1: f64,
    pub q1: f64,
    pub t_cross: f64,
    /// Sign of p2 at the crossing, tagging the branch of the p2 recovery.
    pub p2_sign: i8,
}

/// Solve the energy constraint for p2 on the level H = h:
/// p2 = sign * sqrt(2 (h - eps (q1 q2)^2) - (p1^2 + q1^2 + 4 q2^2)).
pub fn solve_p2(
    h: f64,
    p1: f64,
    q1: f64,
    q2: f64,
    epsilon: f64,
    branch: Branch,
) -> Result<f64, PoincareError> {
    let disc = 2.0 * (h - epsilon * (q1 * q2) * (q1 * q2)) - (p1 * p1 + q1 * q1 + 4.0 * q2 * q2);
    if disc < 0.0 {
        return Err(PoincareError::DiscriminantNegative(disc));
    }
    Ok(branch.sign() * disc.sqrt())
}

/// Draw initial conditions on the energy level per the sampling recipe,
/// skipping draws where the discriminant fails.
pub fn sample_initial_conditions(cfg: &SectionConfig) -> Result<Vec<PhaseState>, PoincareError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.count);
    for _ in 0..cfg.count {
        let j: f64 = rng.gen_range(-100.0..=100.0);
        let first = j / 100.0;
        let (p1, q1, q2) = match cfg.ordering {
            IcOrdering::P1Q1P2Q2 => (first, 1.5, 0.01),
            IcOrdering::Q1P1Q2P2 => (1.5, first, 0.01),
        };
        if let Ok(p2) = solve_p2(cfg.h, p1, q1, q2, cfg.epsilon, cfg.branch) {
            out.push(PhaseState::new(q1, p1, q2, p2));
        }
    }
    if out.is_empty() {
        return Err(PoincareError::EmptySample);
    }
    Ok(out)
}

/// Time budget for collecting crossings: the torsion mode oscillates at
/// frequency >= 2, so crossings arrive at least every ~pi/2 in practice.
fn time_budget(max_crossings: usize) -> f64 {
    20.0 + 4.0 * max_crossings as f64
}

/// Record crossings of q2 = 0 along the Verlet trajectory from `s0`.
///
/// A sign change of q2 between consecutive steps brackets a crossing; the
/// crossing is then refined by bisection on the sub-step size of a single
/// Verlet step from the pre-crossing state, down to |q2| < 1e-10.
pub fn section_points(
    params: &SystemParams,
    s0: &PhaseState,
    cfg: &SectionConfig,
) -> Result<Vec<SectionPoint>, PoincareError> {
    cfg.validate()?;
    let mut points = Vec::with_capacity(cfg.max_crossings);
    let mut s = *s0;
    let mut t = 0.0;
    let budget = time_budget(cfg.max_crossings);
    while points.len() < cfg.max_crossings && t < budget {
        let next = verlet_step(params, &s, cfg.k);
        if !next.is_finite() {
            return Err(PoincareError::Divergence {
                t,
                crossings: points.len(),
            });
        }
        if s.q2 * next.q2 < 0.0 {
            let refined = refine_crossing(params, &s, cfg.k);
            points.push(SectionPoint {
                p1: refined.p1,
                q1: refined.q1,
                t_cross: t + refined.tau,
                p2_sign: if refined.p2 >= 0.0 { 1 } else { -1 },
            });
        } else if next.q2 == 0.0 {
            points.push(SectionPoint {
                p1: next.p1,
                q1: next.q1,
                t_cross: t + cfg.k,
                p2_sign: if next.p2 >= 0.0 { 1 } else { -1 },
            });
        }
        s = next;
        t += cfg.k;
    }
    Ok(points)
}

struct RefinedCrossing {
    p1: f64,
    q1: f64,
    p2: f64,
    tau: f64,
}

fn refine_crossing(params: &SystemParams, before: &PhaseState, k: f64) -> RefinedCrossing {
    let q2_at = |tau: f64| verlet_step(params, before, tau).q2;
    let (mut lo, mut hi) = (0.0f64, k);
    let lo_sign = before.q2 >= 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let v = q2_at(mid);
        if v.abs() < 1e-13 {
            lo = mid;
            hi = mid;
            break;
        }
        if (v >= 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = 0.5 * (lo + hi);
    let s = verlet_step(params, before, tau);
    RefinedCrossing {
        p1: s.p1,
        q1: s.q1,
        p2: s.p2,
        tau,
    }
}

/// Section points for a whole sampled ensemble, one entry per initial
/// condition, in draw order. The per-trajectory runs are independent and
/// execute in parallel.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SectionRun {
    pub config: SectionConfig,
    pub initial_conditions: Vec<PhaseState>,
    pub trajectories: Vec<Vec<SectionPoint>>,
}

impl SectionRun {
    /// Fraction of requested crossings actually found.
    pub fn found_fraction(&self) -> f64 {
        let requested = self.config.max_crossings * self.trajectories.len();
        if requested == 0 {
            return 0.0;
        }
        let found: usize = self.trajectories.iter().map(Vec::len).sum();
        found as f64 / requested as f64
    }

    /// Standard deviation of sqrt(p1^2 + q1^2) over one trajectory's points.
    pub fn radius_std(&self, ic_index: usize) -> f64 {
        let pts = &self.trajectories[ic_index];
        if pts.is_empty() {
            return 0.0;
        }
        let radii: Vec<f64> = pts
            .iter()
            .map(|p| (p.p1 * p.p1 + p.q1 * p.q1).sqrt())
            .collect();
        let mean = radii.iter().sum::<f64>() / radii.len() as f64;
        (radii.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / radii.len() as f64).sqrt()
    }

    /// CSV with header `ic_index,t_cross,p1,q1,p2_sign`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), PoincareError> {
        let io = |e: std::io::Error| PoincareError::Io(e.to_string());
        writeln!(w, "ic_index,t_cross,p1,q1,p2_sign").map_err(io)?;
        for (i, pts) in self.trajectories.iter().enumerate() {
            for p in pts {
                writeln!(w, "{},{},{},{},{}", i, p.t_cross, p.p1, p.q1, p.p2_sign).map_err(io)?;
            }
        }
        Ok(())
    }
}

/// Sample initial conditions and collect the section cloud for each.
pub fn run_section(cfg: &SectionConfig) -> Result<SectionRun, PoincareError> {
    let ics = sample_initial_conditions(cfg)?;
    let params = cfg.params();
    let trajectories: Result<Vec<_>, PoincareError> = ics
        .par_iter()
        .map(|s0| section_points(&params, s0, cfg))
        .collect();
    Ok(SectionRun {
        config: *cfg,
        initial_conditions: ics,
        trajectories: trajectories?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::hamiltonian;
    use approx::assert_abs_diff_eq;

    #[test]
    fn solve_p2_examples() {
        let p2 = solve_p2(3.0, 0.0, 0.0, 0.0, 0.7, Branch::Plus).unwrap();
        assert_abs_diff_eq!(p2, 6.0f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(p2, 2.449489742783178, epsilon = 1e-12);
        assert_eq!(solve_p2(0.0, 0.0, 0.0, 0.0, 0.0, Branch::Plus), Ok(0.0));
        assert!(matches!(
            solve_p2(0.0, 1.0, 0.0, 0.0, 0.0, Branch::Plus),
            Err(PoincareError::DiscriminantNegative(_))
        ));
        let m = solve_p2(3.0, 0.2, 0.3, 0.1, 0.5, Branch::Minus).unwrap();
        assert!(m < 0.0);
    }

    #[test]
    fn completed_states_sit_on_the_level() {
        let cfg = SectionConfig::paper_preset(0.4, 7);
        let params = cfg.params();
        let ics = sample_initial_conditions(&cfg).unwrap();
        assert!(!ics.is_empty());
        for s in &ics {
            assert_abs_diff_eq!(hamiltonian(&params, s), 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn sampling_is_deterministic_and_respects_ordering() {
        let cfg = SectionConfig::paper_preset(0.4, 99);
        let a = sample_initial_conditions(&cfg).unwrap();
        let b = sample_initial_conditions(&cfg).unwrap();
        assert_eq!(a, b);
        for s in &a {
            assert_eq!(s.q1, 1.5);
            assert_eq!(s.q2, 0.01);
            assert!(s.p1.abs() <= 1.0);
        }
        let alt = SectionConfig {
            ordering: IcOrdering::Q1P1Q2P2,
            ..cfg
        };
        for s in sample_initial_conditions(&alt).unwrap() {
            assert_eq!(s.p1, 1.5);
            assert_eq!(s.q2, 0.01);
        }
    }

    #[test]
    fn zero_energy_level_has_empty_sample() {
        let mut cfg = SectionConfig::paper_preset(0.0, 3);
        cfg.h = 1e-12;
        // q1 = 1.5 alone already exceeds the energy budget, every draw fails
        assert_eq!(
            sample_initial_conditions(&cfg).unwrap_err(),
            PoincareError::EmptySample
        );
    }

    #[test]
    fn crossings_are_refined_and_ordered() {
        let cfg = SectionConfig {
            max_crossings: 50,
            ..SectionConfig::paper_preset(0.5, 12)
        };
        let params = cfg.params();
        let ics = sample_initial_conditions(&cfg).unwrap();
        let pts = section_points(&params, &ics[0], &cfg).unwrap();
        assert!(pts.len() >= 45, "found only {} crossings", pts.len());
        assert!(pts.windows(2).all(|w| w[0].t_cross < w[1].t_cross));
        // refined crossings land on the section: rebuild the state and check q2
        for p in &pts {
            let refined = refine_at(&params, &ics[0], &cfg, p.t_cross);
            assert!(refined.abs() < 1e-10, "q2 at crossing = {refined}");
        }
    }

    /// Re-integrate to the crossing time and return q2 there.
    fn refine_at(params: &SystemParams, s0: &PhaseState, cfg: &SectionConfig, t: f64) -> f64 {
        let n = (t / cfg.k).floor() as usize;
        let mut s = *s0;
        for _ in 0..n {
            s = verlet_step(params, &s, cfg.k);
        }
        verlet_step(params, &s, t - n as f64 * cfg.k).q2
    }

    #[test]
    fn eps0_crossings_lie_on_mode1_circle() {
        let cfg = SectionConfig {
            max_crossings: 40,
            count: 4,
            ..SectionConfig::paper_preset(0.0, 21)
        };
        let run = run_section(&cfg).unwrap();
        for (i, s0) in run.initial_conditions.iter().enumerate() {
            let r0 = (s0.p1 * s0.p1 + s0.q1 * s0.q1).sqrt();
            for p in &run.trajectories[i] {
                let r = (p.p1 * p.p1 + p.q1 * p.q1).sqrt();
                assert!((r - r0).abs() < 1e-6, "radius {r} vs {r0}");
            }
            assert!(run.radius_std(i) < 1e-6);
        }
    }

    #[test]
    fn normal_mode_plane_sections_at_origin() {
        let cfg = SectionConfig {
            max_crossings: 10,
            ..SectionConfig::paper_preset(0.3, 5)
        };
        let params = cfg.params();
        // q1 = p1 = 0 plane: energy carried by mode 2 alone
        let p2 = solve_p2(cfg.h, 0.0, 0.0, 0.01, cfg.epsilon, Branch::Plus).unwrap();
        let s0 = PhaseState::new(0.0, 0.0, 0.01, p2);
        let pts = section_points(&params, &s0, &cfg).unwrap();
        assert!(!pts.is_empty());
        for p in &pts {
            assert!(p.p1.abs() < 1e-14 && p.q1.abs() < 1e-14);
        }
    }

    #[test]
    fn csv_is_bit_identical_for_same_seed() {
        let cfg = SectionConfig {
            count: 3,
            max_crossings: 25,
            ..SectionConfig::paper_preset(0.5, 33)
        };
        let mut a = Vec::new();
        run_section(&cfg).unwrap().write_csv(&mut a).unwrap();
        let mut b = Vec::new();
        run_section(&cfg).unwrap().write_csv(&mut b).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with(b"ic_index,t_cross,p1,q1,p2_sign\n"));
    }
}
