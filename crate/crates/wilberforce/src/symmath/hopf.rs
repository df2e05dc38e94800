//! The Hopf generators of the flow-invariant polynomial algebra in the 1:2
//! resonance, and rewriting of invariants in that basis.
//!
//! Generators (as polynomials on phase space):
//!   rho1 = q1^2 + p1^2
//!   rho2 = 4 q2^2 + p2^2
//!   rho3 = p2 (p1^2 - q1^2) + 4 p1 q1 q2
//!   rho4 = 2 q2 (p1^2 - q1^2) - 2 q1 p1 p2
//! subject to the single syzygy rho3^2 + rho4^2 = rho1^2 rho2. Representatives
//! are canonicalized by eliminating rho3^2, so the rho3-degree is at most one;
//! with that normalization the representation of an invariant is unique.

use crate::symmath::harmonic::Resonance;
use crate::symmath::phase::PhasePoly;
use crate::symmath::poly::{rat, Poly};
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

pub const HOPF_VAR_NAMES: [&str; 4] = ["rho1", "rho2", "rho3", "rho4"];

#[derive(Debug, Error, PartialEq)]
pub enum SymError {
    #[error("polynomial is not invariant under the unperturbed flow ({{f, H0}} != 0)")]
    NotInvariant,
    #[error("no Hopf representation at degree {degree} (internal error)")]
    NoRepresentation { degree: u32 },
    #[error("operation implemented only for the 1:2 resonance, got {w1}:{w2}")]
    UnsupportedResonance { w1: u32, w2: u32 },
}

/// The four Hopf generators as exact phase-space polynomials.
pub fn rho_polys() -> [PhasePoly; 4] {
    let q1 = PhasePoly::q1();
    let p1 = PhasePoly::p1();
    let q2 = PhasePoly::q2();
    let p2 = PhasePoly::p2();
    let p1sq_minus_q1sq = p1.pow(2).sub(&q1.pow(2));
    let rho1 = q1.pow(2).add(&p1.pow(2));
    let rho2 = q2.pow(2).scale(&rat(4, 1)).add(&p2.pow(2));
    let rho3 = p2
        .mul(&p1sq_minus_q1sq)
        .add(&p1.mul(&q1).mul(&q2).scale(&rat(4, 1)));
    let rho4 = q2
        .mul(&p1sq_minus_q1sq)
        .scale(&rat(2, 1))
        .sub(&q1.mul(&p1).mul(&p2).scale(&rat(2, 1)));
    [rho1, rho2, rho3, rho4]
}

/// The syzygy rho3^2 + rho4^2 - rho1^2 rho2 as an (identically zero) phase polynomial.
pub fn syzygy_phase_poly() -> PhasePoly {
    let [r1, r2, r3, r4] = rho_polys();
    r3.pow(2).add(&r4.pow(2)).sub(&r1.pow(2).mul(&r2))
}

/// A polynomial in the formal variables rho1..rho4.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HopfPoly(pub(crate) Poly<4>);

impl HopfPoly {
    pub fn zero() -> Self {
        Self(Poly::zero())
    }

    pub fn monomial(exponents: [u8; 4], coeff: BigRational) -> Self {
        Self(Poly::monomial(exponents, coeff))
    }

    pub fn var(i: usize) -> Self {
        Self(Poly::var(i))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self(self.0.sub(&o.0))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self(self.0.mul(&o.0))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self(self.0.scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8; 4], &BigRational)> {
        self.0.terms()
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.0.to_json()
    }

    /// Eliminate rho3^2 via the syzygy: rho3^2 -> rho1^2 rho2 - rho4^2.
    /// The result has rho3-degree at most one and is the unique such
    /// representative of the class modulo the syzygy ideal.
    pub fn canonicalize(&self) -> HopfPoly {
        let mut cur = self.0.clone();
        loop {
            let mut next = Poly::<4>::zero();
            let mut changed = false;
            for (e, c) in cur.terms() {
                if e[2] >= 2 {
                    changed = true;
                    let mut base = *e;
                    base[2] -= 2;
                    // rho1^2 rho2 part
                    let mut e1 = base;
                    e1[0] += 2;
                    e1[1] += 1;
                    next = next.add(&Poly::monomial(e1, c.clone()));
                    // -rho4^2 part
                    let mut e2 = base;
                    e2[3] += 2;
                    next = next.add(&Poly::monomial(e2, -c.clone()));
                } else {
                    next = next.add(&Poly::monomial(*e, c.clone()));
                }
            }
            cur = next;
            if !changed {
                return HopfPoly(cur);
            }
        }
    }

    /// Two Hopf polynomials represent the same invariant iff their canonical
    /// forms coincide.
    pub fn equivalent(&self, other: &HopfPoly) -> bool {
        self.canonicalize().sub(&other.canonicalize()).is_zero()
    }

    /// Substitute the generator formulas to get back a phase-space polynomial.
    pub fn expand_phase(&self) -> PhasePoly {
        let [r1, r2, r3, r4] = rho_polys();
        let images = [r1.0, r2.0, r3.0, r4.0];
        PhasePoly(self.0.compose(&images))
    }
}

impl fmt::Display for HopfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.display(HOPF_VAR_NAMES))
    }
}

/// Enumerate the canonical Hopf monomials of weighted degree `d`
/// (deg rho1 = deg rho2 = 2, deg rho3 = deg rho4 = 3, rho3-exponent <= 1).
fn canonical_basis_exponents(d: u32) -> Vec<[u8; 4]> {
    let mut out = Vec::new();
    for c in 0..=1u32 {
        for dd in 0..=(d / 3) {
            let rem = d as i64 - 3 * (c + dd) as i64;
            if rem < 0 || rem % 2 != 0 {
                continue;
            }
            let ab = (rem / 2) as u32;
            for a in 0..=ab {
                let b = ab - a;
                out.push([a as u8, b as u8, c as u8, dd as u8]);
            }
        }
    }
    out.sort();
    out
}

impl Resonance {
    /// Rewrite a flow-invariant polynomial in the Hopf basis (1:2 only).
    ///
    /// Splits `f` into homogeneous components, expands the canonical Hopf
    /// monomials of matching weighted degree, and solves the exact linear
    /// system by Gaussian elimination over the rationals.
    pub fn to_hopf(&self, f: &PhasePoly) -> Result<HopfPoly, SymError> {
        if (self.w1, self.w2) != (1, 2) {
            return Err(SymError::UnsupportedResonance {
                w1: self.w1,
                w2: self.w2,
            });
        }
        if !f.poisson(&self.h0_poly()).is_zero() {
            return Err(SymError::NotInvariant);
        }
        let mut result = HopfPoly::zero();
        let max_deg = f.total_degree();
        for d in 0..=max_deg {
            let comp = f.0.homogeneous_component(d);
            if comp.is_zero() {
                continue;
            }
            let exps = canonical_basis_exponents(d);
            let columns: Vec<Poly<4>> = exps
                .iter()
                .map(|e| HopfPoly::monomial(*e, rat(1, 1)).expand_phase().0)
                .collect();
            let coeffs = solve_exact(&columns, &comp)
                .ok_or(SymError::NoRepresentation { degree: d })?;
            for (e, c) in exps.iter().zip(coeffs) {
                if !c.is_zero() {
                    result = result.add(&HopfPoly::monomial(*e, c));
                }
            }
        }
        Ok(result)
    }
}

/// Solve sum_j x_j col_j = rhs exactly, treating polynomials as vectors over
/// their union of monomials. Returns None if the system is inconsistent.
fn solve_exact(columns: &[Poly<4>], rhs: &Poly<4>) -> Option<Vec<BigRational>> {
    use std::collections::BTreeSet;
    let mut monos: BTreeSet<[u8; 4]> = BTreeSet::new();
    for col in columns {
        monos.extend(col.terms().map(|(e, _)| *e));
    }
    monos.extend(rhs.terms().map(|(e, _)| *e));
    let monos: Vec<[u8; 4]> = monos.into_iter().collect();
    let nrows = monos.len();
    let ncols = columns.len();
    // dense augmented matrix
    let mut m: Vec<Vec<BigRational>> = monos
        .iter()
        .map(|e| {
            let mut row: Vec<BigRational> =
                columns.iter().map(|c| c.coeff(e)).collect();
            row.push(rhs.coeff(e));
            row
        })
        .collect();
    let mut pivot_row = 0usize;
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..ncols {
        let Some(r) = (pivot_row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, r);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r2 in 0..nrows {
            if r2 != pivot_row && !m[r2][col].is_zero() {
                let factor = m[r2][col].clone();
                for c2 in 0..=ncols {
                    let delta = &m[pivot_row][c2] * &factor;
                    m[r2][c2] -= delta;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
        if pivot_row == nrows {
            break;
        }
    }
    // consistency: no row of the form (0 ... 0 | nonzero)
    for r in pivot_row..nrows {
        if !m[r][ncols].is_zero() {
            return None;
        }
    }
    let mut solution = vec![BigRational::zero(); ncols];
    for (row, &col) in pivots.iter().enumerate() {
        solution[col] = m[row][ncols].clone();
    }
    Some(solution)
}
