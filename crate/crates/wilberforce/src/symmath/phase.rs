//! Exact polynomials on phase space (variables q1, p1, q2, p2) with the
//! canonical Poisson bracket.

use crate::dynamics::PhaseState;
use crate::symmath::poly::{rat, Poly};
use num_rational::BigRational;
use std::fmt;

pub const PHASE_VAR_NAMES: [&str; 4] = ["q1", "p1", "q2", "p2"];

/// A polynomial observable on phase space with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhasePoly(pub(crate) Poly<4>);

impl PhasePoly {
    pub fn zero() -> Self {
        Self(Poly::zero())
    }

    pub fn one() -> Self {
        Self(Poly::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self(Poly::constant(c))
    }

    pub fn q1() -> Self {
        Self(Poly::var(0))
    }

    pub fn p1() -> Self {
        Self(Poly::var(1))
    }

    pub fn q2() -> Self {
        Self(Poly::var(2))
    }

    pub fn p2() -> Self {
        Self(Poly::var(3))
    }

    pub fn monomial(exponents: [u8; 4], coeff: BigRational) -> Self {
        Self(Poly::monomial(exponents, coeff))
    }

    /// Unperturbed Hamiltonian 1/2 (p1^2 + w1^2 q1^2 + p2^2 + w2^2 q2^2)
    /// for integer frequencies.
    pub fn h0(w1: u32, w2: u32) -> Self {
        let half = rat(1, 2);
        let w1s = rat((w1 as i64) * (w1 as i64), 1);
        let w2s = rat((w2 as i64) * (w2 as i64), 1);
        Self::p1()
            .pow(2)
            .add(&Self::q1().pow(2).scale(&w1s))
            .add(&Self::p2().pow(2))
            .add(&Self::q2().pow(2).scale(&w2s))
            .scale(&half)
    }

    /// The quartic coupling q1^2 q2^2.
    pub fn h1_quartic() -> Self {
        Self::q1().pow(2).mul(&Self::q2().pow(2))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self(self.0.sub(&o.0))
    }

    pub fn neg(&self) -> Self {
        Self(self.0.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self(self.0.mul(&o.0))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self(self.0.scale(c))
    }

    pub fn pow(&self, n: u32) -> Self {
        Self(self.0.pow(n))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.total_degree()
    }

    pub fn partial(&self, var: usize) -> Self {
        Self(self.0.partial(var))
    }

    pub fn num_terms(&self) -> usize {
        self.0.num_terms()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8; 4], &BigRational)> {
        self.0.terms()
    }

    pub fn eval(&self, s: &PhaseState) -> f64 {
        self.0.eval_f64(&s.to_array())
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.0.to_json()
    }

    /// Canonical Poisson bracket {f, g} = sum_j (df/dq_j dg/dp_j - df/dp_j dg/dq_j).
    pub fn poisson(&self, g: &PhasePoly) -> PhasePoly {
        let mut out = Poly::zero();
        for (qi, pi) in [(0usize, 1usize), (2, 3)] {
            out = out
                .add(&self.0.partial(qi).mul(&g.0.partial(pi)))
                .sub(&self.0.partial(pi).mul(&g.0.partial(qi)));
        }
        Self(out)
    }
}

impl fmt::Display for PhasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.display(PHASE_VAR_NAMES))
    }
}
