//! First- and second-order normal forms of H0 + eps H1 via the averaging
//! operators.
//!
//! N1 is the plain average of the perturbation. The second-order term is
//! built from the order-one generator S(H1) through the generator bracket;
//! the two published bookkeeping variants of its prefactor are exposed as
//! [`Convention`]. The generator bracket is applied as {H1, S(H1)}
//! (equivalently -{S(H1), H1} for this library's bracket orientation), which
//! is the orientation whose restriction drives the reduced-space gradient
//! analysis downstream.

use crate::symmath::harmonic::Resonance;
use crate::symmath::phase::PhasePoly;
use crate::symmath::poly::rat;

/// Prefactor bookkeeping for the order-2 term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// The second-order term exactly as published: N2 = <{H1, S(H1)}>.
    #[default]
    Printed,
    /// The variant carrying the 1/2 prefactor: N2 = (1/2) <{H1, S(H1)}>.
    Half,
}

impl Resonance {
    /// N1 = <H1>. Commutes with H0 by construction.
    pub fn normal_form_order1(&self, h1: &PhasePoly) -> PhasePoly {
        self.average(h1)
    }

    /// Second-order normal form term (see [`Convention`]).
    pub fn normal_form_order2(&self, h1: &PhasePoly, convention: Convention) -> PhasePoly {
        let s1 = self.s_operator(h1);
        let printed = self.average(&h1.poisson(&s1));
        match convention {
            Convention::Printed => printed,
            Convention::Half => printed.scale(&rat(1, 2)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmath::hopf::{rho_polys, HopfPoly};
    use crate::symmath::poly::rat;

    #[test]
    fn order1_of_the_coupling() {
        let res = Resonance::ONE_TWO;
        let n1 = res.normal_form_order1(&PhasePoly::h1_quartic());
        let hopf = res.to_hopf(&n1).unwrap();
        assert!(hopf.equivalent(&HopfPoly::monomial([1, 1, 0, 0], rat(1, 16))));
        // already-invariant input is unchanged; non-invariant oscillation dies
        let [r1, _, _, _] = rho_polys();
        assert!(res.normal_form_order1(&r1).sub(&r1).is_zero());
        assert!(res.normal_form_order1(&PhasePoly::q1()).is_zero());
    }

    #[test]
    fn order1_commutes_with_h0() {
        let res = Resonance::ONE_TWO;
        let n1 = res.normal_form_order1(&PhasePoly::h1_quartic());
        assert!(n1.poisson(&res.h0_poly()).is_zero());
    }

    #[test]
    fn order2_of_the_coupling_matches_published_coefficients() {
        // N2 = -(1/768) (5 rho1 rho2^2 + 4 rho3^2 + 16 rho4^2), tested modulo
        // the syzygy ideal.
        let res = Resonance::ONE_TWO;
        let n2 = res.normal_form_order2(&PhasePoly::h1_quartic(), Convention::Printed);
        assert!(n2.poisson(&res.h0_poly()).is_zero());
        let hopf = res.to_hopf(&n2).unwrap();
        let expected = HopfPoly::monomial([1, 2, 0, 0], rat(-5, 768))
            .add(&HopfPoly::monomial([0, 0, 2, 0], rat(-4, 768)))
            .add(&HopfPoly::monomial([0, 0, 0, 2], rat(-16, 768)));
        assert!(
            hopf.equivalent(&expected),
            "got {} vs expected {}",
            hopf.canonicalize(),
            expected.canonicalize()
        );
    }

    #[test]
    fn order2_of_an_invariant_is_zero_and_half_halves() {
        let res = Resonance::ONE_TWO;
        let [r1, r2, _, _] = rho_polys();
        let invariant = r1.mul(&r2);
        assert!(res
            .normal_form_order2(&invariant, Convention::Printed)
            .is_zero());
        let h1 = PhasePoly::h1_quartic();
        let printed = res.normal_form_order2(&h1, Convention::Printed);
        let half = res.normal_form_order2(&h1, Convention::Half);
        assert!(half.scale(&rat(2, 1)).sub(&printed).is_zero());
    }
}
