//! The singular reduced phase space of the 1:2 resonance.
//!
//! On an energy level the invariants (x, y, z) = (rho3, rho4, rho1) satisfy
//! F(x, y, z) = x^2 + y^2 - z^2 (2h - z) = 0 with 0 < z <= 2h: a pinched
//! sphere, singular at the origin. F is a Casimir of the reduced Poisson
//! bracket {f, g} = 2 <grad g, grad f x grad F>, and Hamiltonian dynamics on
//! the surface is X_f = 2 grad f x grad F. This module evaluates that
//! geometry and carries out the critical-point analysis of the restricted
//! normal-form terms: the isolated critical point at the pole (0, 0, 2h), the
//! degenerate circle at z = h, the restricted Hessian at the pole, and the
//! resolution of the circle's degeneracy at second order.

use crate::dynamics::EnergyLevel;
use crate::symmath::poly::{rat, rat_from_f64, Poly};
use crate::symmath::HopfPoly;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ReductionError {
    #[error("chart degenerate: dF/dz = 0 at the requested point")]
    DegenerateChart,
}

/// Surface-membership tolerance for points produced by floating arithmetic.
pub const SURFACE_TOL: f64 = 1e-9;
/// Residual tolerance for gradient/criticality conditions.
pub const GRADIENT_TOL: f64 = 1e-10;

/// Numerical values of the four invariants at a phase-space point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfPoint {
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
    pub rho4: f64,
}

/// A point of the reduced space, (x, y, z) = (rho3, rho4, rho1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ReducedPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Evaluate the invariants at a phase point.
pub fn hopf_map(s: &crate::dynamics::PhaseState) -> HopfPoint {
    let (q1, p1, q2, p2) = (s.q1, s.p1, s.q2, s.p2);
    HopfPoint {
        rho1: q1 * q1 + p1 * p1,
        rho2: 4.0 * q2 * q2 + p2 * p2,
        rho3: p2 * (p1 * p1 - q1 * q1) + 4.0 * p1 * q1 * q2,
        rho4: 2.0 * q2 * (p1 * p1 - q1 * q1) - 2.0 * q1 * p1 * p2,
    }
}

impl HopfPoint {
    /// Projection to the reduced coordinates (x, y, z) = (rho3, rho4, rho1).
    pub fn reduced(&self) -> ReducedPoint {
        ReducedPoint::new(self.rho3, self.rho4, self.rho1)
    }
}

/// rho3^2 + rho4^2 - rho1^2 rho2; zero exactly on the image of the Hopf map.
pub fn syzygy_residual(hp: &HopfPoint) -> f64 {
    hp.rho3 * hp.rho3 + hp.rho4 * hp.rho4 - hp.rho1 * hp.rho1 * hp.rho2
}

/// A scalar field on the reduced space with exact polynomial gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedFunction {
    pub poly: Poly<3>,
    grad: [Poly<3>; 3],
}

pub const REDUCED_VAR_NAMES: [&str; 3] = ["x", "y", "z"];

impl ReducedFunction {
    pub fn new(poly: Poly<3>) -> Self {
        let grad = [poly.partial(0), poly.partial(1), poly.partial(2)];
        Self { poly, grad }
    }

    pub fn eval(&self, p: &ReducedPoint) -> f64 {
        self.poly.eval_f64(&p.to_array())
    }

    pub fn gradient(&self, p: &ReducedPoint) -> [f64; 3] {
        let arr = p.to_array();
        [
            self.grad[0].eval_f64(&arr),
            self.grad[1].eval_f64(&arr),
            self.grad[2].eval_f64(&arr),
        ]
    }

    pub fn gradient_rational(&self, p: &[BigRational; 3]) -> [BigRational; 3] {
        [
            self.grad[0].eval_rational(p),
            self.grad[1].eval_rational(p),
            self.grad[2].eval_rational(p),
        ]
    }

    pub fn partial(&self, i: usize) -> &Poly<3> {
        &self.grad[i]
    }

    pub fn scale(&self, c: f64) -> ReducedFunction {
        ReducedFunction::new(self.poly.scale(&rat_from_f64(c)))
    }

    pub fn add(&self, o: &ReducedFunction) -> ReducedFunction {
        ReducedFunction::new(self.poly.add(&o.poly))
    }

    pub fn display(&self) -> String {
        self.poly.display(REDUCED_VAR_NAMES)
    }
}

/// The Casimir F(x, y, z) = x^2 + y^2 - z^2 (2h - z) of the reduced bracket.
pub fn casimir_poly(level: EnergyLevel) -> ReducedFunction {
    let h = rat_from_f64(level.value());
    let x = Poly::<3>::var(0);
    let y = Poly::<3>::var(1);
    let z = Poly::<3>::var(2);
    let two_h = rat(2, 1) * h;
    let f = x
        .mul(&x)
        .add(&y.mul(&y))
        .sub(&z.pow(2).scale(&two_h))
        .add(&z.pow(3));
    ReducedFunction::new(f)
}

/// F evaluated at a point.
pub fn casimir_f(p: &ReducedPoint, level: EnergyLevel) -> f64 {
    let h = level.value();
    p.x * p.x + p.y * p.y - p.z * p.z * (2.0 * h - p.z)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Reduced Poisson bracket {f, g} = 2 <grad g, grad f x grad F> at a point.
pub fn reduced_bracket(
    f: &ReducedFunction,
    g: &ReducedFunction,
    p: &ReducedPoint,
    level: EnergyLevel,
) -> f64 {
    let cas = casimir_poly(level);
    2.0 * dot(g.gradient(p), cross(f.gradient(p), cas.gradient(p)))
}

/// Reduced Hamiltonian vector field X_Q = 2 grad Q x grad F at a point.
pub fn reduced_vector_field(q: &ReducedFunction, p: &ReducedPoint, level: EnergyLevel) -> [f64; 3] {
    let cas = casimir_poly(level);
    let c = cross(q.gradient(p), cas.gradient(p));
    [2.0 * c[0], 2.0 * c[1], 2.0 * c[2]]
}

/// Restrict an invariant in Hopf variables to the energy level:
/// rho1 -> z, rho2 -> 2h - z, rho3 -> x, rho4 -> y, with exact coefficients.
pub fn restrict_to_level(p: &HopfPoly, level: EnergyLevel) -> ReducedFunction {
    let h = rat_from_f64(level.value());
    let x = Poly::<3>::var(0);
    let y = Poly::<3>::var(1);
    let z = Poly::<3>::var(2);
    let two_h = Poly::<3>::constant(rat(2, 1) * h);
    let images = [z.clone(), two_h.sub(&z), x, y];
    ReducedFunction::new(p.0.compose(&images))
}

/// The restriction K of the first-order normal form of the quartic coupling:
/// K(x, y, z) = (2 h z - z^2) / 16.
pub fn k1_restricted(level: EnergyLevel) -> ReducedFunction {
    restrict_to_level(&HopfPoly::monomial([1, 1, 0, 0], rat(1, 16)), level)
}

/// The restriction of the second-order term
/// -(1/768)(5 rho1 rho2^2 + 4 rho3^2 + 16 rho4^2).
pub fn k2_restricted(level: EnergyLevel) -> ReducedFunction {
    let n2 = HopfPoly::monomial([1, 2, 0, 0], rat(-5, 768))
        .add(&HopfPoly::monomial([0, 0, 2, 0], rat(-4, 768)))
        .add(&HopfPoly::monomial([0, 0, 0, 2], rat(-16, 768)));
    restrict_to_level(&n2, level)
}

/// Parameterize the surface away from the poles: (z, phi) with radius
/// r(z) = sqrt(z^2 (2h - z)).
fn surface_point(level: EnergyLevel, z: f64, phi: f64) -> ReducedPoint {
    let h = level.value();
    let r = (z * z * (2.0 * h - z)).max(0.0).sqrt();
    ReducedPoint::new(r * phi.cos(), r * phi.sin(), z)
}

/// Tangential gradient residual: components of grad K along an orthonormal
/// tangent frame of the surface at p. Zero iff p is a critical point of the
/// restricted function (grad K parallel to grad F or vanishing).
fn tangential_residual(k: &ReducedFunction, cas: &ReducedFunction, p: &ReducedPoint) -> [f64; 2] {
    let n = cas.gradient(p);
    let nn = norm(n);
    if nn == 0.0 {
        return [f64::NAN, f64::NAN];
    }
    let n_unit = [n[0] / nn, n[1] / nn, n[2] / nn];
    // build a tangent frame by projecting two coordinate axes
    let mut frame: Vec<[f64; 3]> = Vec::new();
    for axis in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
        let mut v = axis;
        let c = dot(v, n_unit);
        for i in 0..3 {
            v[i] -= c * n_unit[i];
        }
        for t in &frame {
            let c = dot(v, *t);
            for i in 0..3 {
                v[i] -= c * t[i];
            }
        }
        let vn = norm(v);
        if vn > 1e-8 {
            frame.push([v[0] / vn, v[1] / vn, v[2] / vn]);
        }
        if frame.len() == 2 {
            break;
        }
    }
    let g = k.gradient(p);
    [dot(g, frame[0]), dot(g, frame[1])]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsolatedCriticalPoint {
    pub location: [f64; 3],
    /// |grad K x grad F| there (parallelism residual).
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalCircle {
    pub z: f64,
    pub radius_squared: f64,
    /// max |grad K| over sampled points of the circle.
    pub residual: f64,
}

/// Critical sets of the restricted first-order term on the reduced surface.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalSetReport {
    pub h: f64,
    pub isolated: IsolatedCriticalPoint,
    pub circle: CriticalCircle,
    /// Polished scan zeros that belong to neither known set.
    pub extraneous: Vec<[f64; 3]>,
    pub grid_size: usize,
}

/// Locate the critical sets of K = (2hz - z^2)/16 on the surface: the pole
/// (0, 0, 2h) and the circle x^2 + y^2 = h^3 at z = h. A (z, phi) grid scan
/// with Gauss-Newton polishing confirms there are no others.
pub fn critical_points_n1(level: EnergyLevel) -> CriticalSetReport {
    let h = level.value();
    let k = k1_restricted(level);
    let cas = casimir_poly(level);

    // analytic sets first
    let pole = ReducedPoint::new(0.0, 0.0, 2.0 * h);
    let pole_residual = norm(cross(k.gradient(&pole), cas.gradient(&pole)));
    let circle_residual = (0..64)
        .map(|i| {
            let phi = 2.0 * std::f64::consts::PI * i as f64 / 64.0;
            let p = surface_point(level, h, phi);
            norm(k.gradient(&p))
        })
        .fold(0.0, f64::max);

    // completeness scan over the smooth part
    let grid = 400usize;
    let mut extraneous: Vec<[f64; 3]> = Vec::new();
    for iz in 1..grid {
        let z = 2.0 * h * iz as f64 / grid as f64;
        for ip in 0..grid {
            let phi = 2.0 * std::f64::consts::PI * ip as f64 / grid as f64;
            let p = surface_point(level, z, phi);
            let r = tangential_residual(&k, &cas, &p);
            if r[0].hypot(r[1]) < 1e-4 {
                if let Some(sol) = polish_critical(&k, &cas, level, z, phi) {
                    let on_circle = (sol.z - h).abs() < 1e-6;
                    let at_pole = (sol.z - 2.0 * h).abs() < 1e-5
                        && sol.x.abs() < 1e-5
                        && sol.y.abs() < 1e-5;
                    if !on_circle && !at_pole {
                        extraneous.push([sol.x, sol.y, sol.z]);
                    }
                }
            }
        }
    }
    extraneous.dedup_by(|a, b| {
        (a[0] - b[0]).abs() < 1e-6 && (a[1] - b[1]).abs() < 1e-6 && (a[2] - b[2]).abs() < 1e-6
    });

    CriticalSetReport {
        h,
        isolated: IsolatedCriticalPoint {
            location: [0.0, 0.0, 2.0 * h],
            residual: pole_residual,
        },
        circle: CriticalCircle {
            z: h,
            radius_squared: h * h * h,
            residual: circle_residual,
        },
        extraneous,
        grid_size: grid,
    }
}

/// Gauss-Newton polish of the 2D criticality condition in (z, phi).
fn polish_critical(
    k: &ReducedFunction,
    cas: &ReducedFunction,
    level: EnergyLevel,
    z0: f64,
    phi0: f64,
) -> Option<ReducedPoint> {
    let h = level.value();
    let res = |z: f64, phi: f64| {
        let p = surface_point(level, z, phi);
        tangential_residual(k, cas, &p)
    };
    let (mut z, mut phi) = (z0, phi0);
    for _ in 0..40 {
        let r = res(z, phi);
        let rn = r[0].hypot(r[1]);
        if rn < GRADIENT_TOL {
            return Some(surface_point(level, z, phi));
        }
        let d = 1e-7;
        let rz = res(z + d, phi);
        let rp = res(z, phi + d);
        let j = [
            [(rz[0] - r[0]) / d, (rp[0] - r[0]) / d],
            [(rz[1] - r[1]) / d, (rp[1] - r[1]) / d],
        ];
        // Tikhonov-damped normal equations (the circle direction is neutral)
        let jtj = [
            [
                j[0][0] * j[0][0] + j[1][0] * j[1][0] + 1e-12,
                j[0][0] * j[0][1] + j[1][0] * j[1][1],
            ],
            [
                j[0][0] * j[0][1] + j[1][0] * j[1][1],
                j[0][1] * j[0][1] + j[1][1] * j[1][1] + 1e-12,
            ],
        ];
        let jtr = [
            j[0][0] * r[0] + j[1][0] * r[1],
            j[0][1] * r[0] + j[1][1] * r[1],
        ];
        let det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
        if det.abs() < 1e-30 {
            return None;
        }
        let dz = (jtr[0] * jtj[1][1] - jtr[1] * jtj[0][1]) / det;
        let dphi = (jtr[1] * jtj[0][0] - jtr[0] * jtj[1][0]) / det;
        z -= dz;
        phi -= dphi;
        z = z.clamp(1e-6 * h, 2.0 * h);
    }
    let r = res(z, phi);
    if r[0].hypot(r[1]) < GRADIENT_TOL {
        Some(surface_point(level, z, phi))
    } else {
        None
    }
}

/// Restricted Hessian of a z-only function K at the pole (0, 0, 2h), computed
/// through the implicit chart z = psi(x, y) of F = 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HessianReport {
    pub h: f64,
    pub matrix: [[f64; 2]; 2],
    pub determinant: f64,
    pub eigenvalues: [f64; 2],
    /// The repeated eigenvalue (the matrix is a multiple of the identity).
    pub value: f64,
    pub nondegenerate: bool,
}

/// Exact implicit-differentiation Hessian of K restricted to the surface at
/// the pole (0, 0, 2h). Errors when the chart is degenerate (dF/dz = 0).
pub fn hessian_test(level: EnergyLevel) -> Result<HessianReport, ReductionError> {
    let h_rat = rat_from_f64(level.value());
    let point: [BigRational; 3] = [rat(0, 1), rat(0, 1), rat(2, 1) * &h_rat];
    let k = k1_restricted(level);
    let cas = casimir_poly(level);

    let fz = cas.partial(2).eval_rational(&point);
    if fz.is_zero() {
        return Err(ReductionError::DegenerateChart);
    }
    let fgrad = cas.gradient_rational(&point);
    let kgrad = k.gradient_rational(&point);
    // psi_i = -F_i / F_z
    let psi = [-(&fgrad[0] / &fz), -(&fgrad[1] / &fz)];
    let second = |poly: &ReducedFunction, i: usize, j: usize| -> BigRational {
        poly.partial(i).partial(j).eval_rational(&point)
    };
    let mut hess_rat = [[rat(0, 1), rat(0, 1)], [rat(0, 1), rat(0, 1)]];
    for i in 0..2 {
        for j in 0..2 {
            // psi_ij = -(F_ij + F_iz psi_j + F_jz psi_i + F_zz psi_i psi_j) / F_z
            let f_ij = second(&cas, i, j);
            let f_iz = second(&cas, i, 2);
            let f_jz = second(&cas, j, 2);
            let f_zz = second(&cas, 2, 2);
            let psi_ij =
                -((f_ij + f_iz * &psi[j] + f_jz * &psi[i] + f_zz * &psi[i] * &psi[j]) / &fz);
            // K~_ij = K_ij + K_iz psi_j + K_jz psi_i + K_zz psi_i psi_j + K_z psi_ij
            let k_ij = second(&k, i, j);
            let k_iz = second(&k, i, 2);
            let k_jz = second(&k, j, 2);
            let k_zz = second(&k, 2, 2);
            hess_rat[i][j] = k_ij
                + k_iz * &psi[j]
                + k_jz * &psi[i]
                + k_zz * &psi[i] * &psi[j]
                + &kgrad[2] * psi_ij;
        }
    }
    let m = [
        [
            hess_rat[0][0].to_f64().unwrap(),
            hess_rat[0][1].to_f64().unwrap(),
        ],
        [
            hess_rat[1][0].to_f64().unwrap(),
            hess_rat[1][1].to_f64().unwrap(),
        ],
    ];
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    let eigenvalues = [tr / 2.0 - disc, tr / 2.0 + disc];
    Ok(HessianReport {
        h: level.value(),
        matrix: m,
        determinant: det,
        eigenvalues,
        value: m[0][0],
        nondegenerate: det.abs() > 1e-14,
    })
}

/// One parallelism point of the second-order analysis: the eps-order part of
/// the gradient vanishes and the remaining gradient is parallel to grad F.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParallelismPoint {
    pub location: [f64; 3],
    /// |grad K2| at the point.
    pub grad_k2_norm: f64,
    /// |grad K1 x grad F| at the point.
    pub parallel_residual: f64,
}

/// Second-order degeneracy resolution along the critical circle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegeneracyReport {
    pub h: f64,
    pub epsilons: Vec<f64>,
    /// Minimum of |grad K_eps| over the scanned surface, per epsilon.
    pub min_gradient_norm: Vec<f64>,
    /// Exact order-by-order obstruction: the eps^0 part of the z-component
    /// vanishes only at z = h, where the eps^1 part equals 5 h^2 / 768.
    pub eps1_value_on_circle: f64,
    pub parallelism_points: Vec<ParallelismPoint>,
    /// Lower bound eps h^(3/2) / 96 for |grad K_eps| on the circle, with the
    /// measured minimum over the sampled circle points, per epsilon.
    pub circle_bound: Vec<(f64, f64)>,
    pub circle_samples: usize,
}

/// Analyze grad K_eps = grad(K1 + eps K2) on the surface for each epsilon:
/// verify it never vanishes, locate the two axis parallelism points, and
/// certify the explicit lower bound on the critical circle.
pub fn critical_points_keps(level: EnergyLevel, epsilons: &[f64]) -> DegeneracyReport {
    let h = level.value();
    let k1 = k1_restricted(level);
    let k2 = k2_restricted(level);
    let cas = casimir_poly(level);

    // minimum of |grad K_eps| over a surface grid, per epsilon
    let grid = 400usize;
    let mut min_gradient_norm = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let keps = k1.add(&k2.scale(eps));
        let mut min_norm = f64::INFINITY;
        for iz in 1..grid {
            let z = 2.0 * h * iz as f64 / grid as f64;
            for ip in 0..grid {
                let phi = 2.0 * std::f64::consts::PI * ip as f64 / grid as f64;
                let p = surface_point(level, z, phi);
                let g = norm(keps.gradient(&p));
                if g < min_norm {
                    min_norm = g;
                }
            }
        }
        min_gradient_norm.push(min_norm);
    }

    // exact obstruction on the circle: eps^0 z-component (h - z)/8 vanishes at
    // z = h; there the eps^1 z-component is 5 h^2 / 768 (nonzero for h != 0)
    let circle_center = ReducedPoint::new(0.0, 0.0, h);
    let eps1_value_on_circle = k2.gradient(&circle_center)[2].abs();

    // parallelism points: Newton on grad K2 = 0 from grid starts
    let mut parallelism_points = newton_grad_k2_zeros(&k2, &k1, &cas, h);
    parallelism_points.sort_by(|a, b| a.location[2].partial_cmp(&b.location[2]).unwrap());

    // pointwise certificate on the circle
    let samples = 100usize;
    let mut circle_bound = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let keps = k1.add(&k2.scale(eps));
        let bound = eps * h.powf(1.5) / 96.0;
        let mut min_norm = f64::INFINITY;
        for i in 0..samples {
            let phi = 2.0 * std::f64::consts::PI * i as f64 / samples as f64;
            let p = surface_point(level, h, phi);
            min_norm = min_norm.min(norm(keps.gradient(&p)));
        }
        circle_bound.push((bound, min_norm));
    }

    DegeneracyReport {
        h,
        epsilons: epsilons.to_vec(),
        min_gradient_norm,
        eps1_value_on_circle,
        parallelism_points,
        circle_bound,
        circle_samples: samples,
    }
}

fn newton_grad_k2_zeros(
    k2: &ReducedFunction,
    k1: &ReducedFunction,
    cas: &ReducedFunction,
    h: f64,
) -> Vec<ParallelismPoint> {
    let mut found: Vec<ParallelismPoint> = Vec::new();
    for iz in 1..40 {
        let z0 = 2.0 * h * iz as f64 / 40.0;
        for (x0, y0) in [(0.0, 0.0), (0.3 * h, 0.2 * h), (-0.4 * h, 0.1 * h)] {
            let mut p = [x0, y0, z0];
            let mut ok = false;
            for _ in 0..60 {
                let g = k2.gradient(&ReducedPoint::new(p[0], p[1], p[2]));
                if norm(g) < 1e-13 {
                    ok = true;
                    break;
                }
                // Jacobian of grad K2 (the Hessian of K2), finite differences
                let d = 1e-7;
                let mut jac = [[0.0f64; 3]; 3];
                for j in 0..3 {
                    let mut pp = p;
                    pp[j] += d;
                    let gp = k2.gradient(&ReducedPoint::new(pp[0], pp[1], pp[2]));
                    for i in 0..3 {
                        jac[i][j] = (gp[i] - g[i]) / d;
                    }
                }
                match solve3(jac, g) {
                    Some(step) => {
                        for i in 0..3 {
                            p[i] -= step[i];
                        }
                    }
                    None => break,
                }
            }
            if !ok {
                continue;
            }
            if found.iter().any(|q| (q.location[2] - p[2]).abs() < 1e-6) {
                continue;
            }
            let rp = ReducedPoint::new(p[0], p[1], p[2]);
            let parallel_residual = norm(cross(k1.gradient(&rp), cas.gradient(&rp)));
            found.push(ParallelismPoint {
                location: p,
                grad_k2_norm: norm(k2.gradient(&rp)),
                parallel_residual,
            });
        }
    }
    found
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det.abs() < 1e-14 {
        return None;
    }
    let inv_det = 1.0 / det;
    let mut x = [0.0; 3];
    for i in 0..3 {
        let mut m = a;
        for r in 0..3 {
            m[r][i] = b[r];
        }
        let di = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        x[i] = di * inv_det;
    }
    Some(x)
}

/// SVG cross-section (y = 0 slice) of the reduced surface with the critical
/// sets overlaid.
pub fn surface_svg(level: EnergyLevel) -> String {
    use crate::svg::SvgPlot;
    let h = level.value();
    let mut plot = SvgPlot::new(
        640,
        480,
        &format!("reduced surface cross-section, h = {h}"),
        "z",
        "x",
    );
    let n = 400;
    let mut upper = Vec::with_capacity(n + 1);
    let mut lower = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let z = 2.0 * h * i as f64 / n as f64;
        let r = (z * z * (2.0 * h - z)).max(0.0).sqrt();
        upper.push((z, r));
        lower.push((z, -r));
    }
    plot.polyline(&upper, "#2060c0");
    plot.polyline(&lower, "#2060c0");
    plot.scatter(&[(2.0 * h, 0.0)], "#c03030", 4.0);
    let r_circle = h.powf(1.5);
    plot.scatter(&[(h, r_circle), (h, -r_circle)], "#208040", 4.0);
    plot.scatter(&[(0.0, 0.0)], "#000000", 3.0);
    plot.finish()
}
