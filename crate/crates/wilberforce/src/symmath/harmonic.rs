//! Pullback of observables along the periodic unperturbed flow, as an exact
//! finite Fourier series in time, and the averaging operators built on it.
//!
//! In the complexified basis z_j = p_j + i w_j q_j the flow acts diagonally:
//! a monomial z1^a zb1^b z2^c zb2^d picks up the phase e^{i n t} with
//! n = w1 (a - b) + w2 (c - d). Averaging keeps the n = 0 part; the S operator
//! weights harmonic n by 1/(i n), which is exactly
//! (1/2pi) * integral of (t - pi) e^{i n t} over one period.

use crate::dynamics::PhaseState;
use crate::symmath::gauss::GaussRational;
use crate::symmath::phase::PhasePoly;
use crate::symmath::poly::rat;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Polynomial in four abstract variables with Gaussian-rational coefficients.
/// Used both for the (z1, zb1, z2, zb2) basis and for complex-coefficient
/// polynomials in the real phase variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct GPoly {
    terms: BTreeMap<[u8; 4], GaussRational>,
}

impl GPoly {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: GaussRational) -> Self {
        let mut p = Self::zero();
        p.insert([0; 4], c);
        p
    }

    pub fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    fn insert(&mut self, e: [u8; 4], c: GaussRational) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(e)
            .or_insert_with(GaussRational::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.insert(*e, c.clone());
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let mut e = *ea;
                for i in 0..4 {
                    e[i] = e[i].checked_add(eb[i]).expect("exponent overflow");
                }
                out.insert(e, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        let mut out = Self::zero();
        for (e, k) in &self.terms {
            out.insert(*e, k.mul(c));
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8; 4], &GaussRational)> {
        self.terms.iter()
    }

    /// Substitute each variable by a GPoly, with power caching.
    pub fn compose(&self, images: &[GPoly; 4]) -> GPoly {
        let mut powers: Vec<Vec<GPoly>> = (0..4).map(|_| vec![GPoly::one()]).collect();
        let mut out = GPoly::zero();
        for (e, c) in &self.terms {
            let mut term = GPoly::constant(c.clone());
            for i in 0..4 {
                let k = e[i] as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    term = term.mul(&powers[i][k]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Split into real and imaginary parts as rational polynomials.
    pub fn split(&self) -> (PhasePoly, PhasePoly) {
        let mut re = PhasePoly::zero();
        let mut im = PhasePoly::zero();
        for (e, c) in &self.terms {
            if !c.re.is_zero() {
                re = re.add(&PhasePoly::monomial(*e, c.re.clone()));
            }
            if !c.im.is_zero() {
                im = im.add(&PhasePoly::monomial(*e, c.im.clone()));
            }
        }
        (re, im)
    }
}

/// An integer resonance (w1, w2) with 2*pi-periodic unperturbed flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resonance {
    pub w1: u32,
    pub w2: u32,
}

impl Resonance {
    pub const ONE_TWO: Resonance = Resonance { w1: 1, w2: 2 };

    pub fn new(w1: u32, w2: u32) -> Self {
        assert!(w1 > 0 && w2 > 0, "frequencies must be positive integers");
        Self { w1, w2 }
    }

    /// H0 for this resonance as an exact polynomial.
    pub fn h0_poly(&self) -> PhasePoly {
        PhasePoly::h0(self.w1, self.w2)
    }

    /// Images of (q1, p1, q2, p2) in the (z1, zb1, z2, zb2) basis:
    /// q_j = -i/(2 w_j) (z_j - zb_j), p_j = (z_j + zb_j)/2.
    fn phase_to_z_images(&self) -> [GPoly; 4] {
        let z = |i: usize| {
            let mut e = [0u8; 4];
            e[i] = 1;
            let mut p = GPoly::zero();
            p.insert(e, GaussRational::one());
            p
        };
        let q_image = |w: u32, zi: usize| {
            let half_w = GaussRational::imaginary(rat(-1, 2 * w as i64));
            let conj = GaussRational::imaginary(rat(1, 2 * w as i64));
            z(zi).scale(&half_w).add(&z(zi + 1).scale(&conj))
        };
        let p_image = |zi: usize| {
            let half = GaussRational::from_rational(rat(1, 2));
            z(zi).scale(&half).add(&z(zi + 1).scale(&half))
        };
        [
            q_image(self.w1, 0),
            p_image(0),
            q_image(self.w2, 2),
            p_image(2),
        ]
    }

    /// Images of (z1, zb1, z2, zb2) back in the real phase variables:
    /// z_j = p_j + i w_j q_j.
    fn z_to_phase_images(&self) -> [GPoly; 4] {
        let var = |i: usize| {
            let mut e = [0u8; 4];
            e[i] = 1;
            let mut p = GPoly::zero();
            p.insert(e, GaussRational::one());
            p
        };
        let mk = |w: i64, qi: usize, pi: usize| {
            var(pi)
                .add(&var(qi).scale(&GaussRational::imaginary(rat(w, 1))))
        };
        [
            mk(self.w1 as i64, 0, 1),
            mk(-(self.w1 as i64), 0, 1),
            mk(self.w2 as i64, 2, 3),
            mk(-(self.w2 as i64), 2, 3),
        ]
    }

    fn to_z(&self, f: &PhasePoly) -> GPoly {
        let images = self.phase_to_z_images();
        let mut g = GPoly::zero();
        for (e, c) in f.terms() {
            let mono = GPoly {
                terms: BTreeMap::from([(*e, GaussRational::from_rational(c.clone()))]),
            };
            g = g.add(&mono.compose(&images));
        }
        g
    }

    fn harmonic_of(&self, e: &[u8; 4]) -> i64 {
        self.w1 as i64 * (e[0] as i64 - e[1] as i64)
            + self.w2 as i64 * (e[2] as i64 - e[3] as i64)
    }

    fn z_group_to_phase(&self, g: &GPoly) -> GPoly {
        g.compose(&self.z_to_phase_images())
    }

    fn expect_real(g: GPoly, what: &str) -> PhasePoly {
        let (re, im) = g.split();
        assert!(
            im.is_zero(),
            "imaginary residue in {what}: {im} (internal error)"
        );
        re
    }

    /// Exact Fourier expansion of the pullback of `f` along the flow.
    pub fn pullback_flow(&self, f: &PhasePoly) -> HarmonicPoly {
        let z = self.to_z(f);
        let mut groups: BTreeMap<i64, GPoly> = BTreeMap::new();
        for (e, c) in z.terms() {
            let n = self.harmonic_of(e);
            let entry = groups.entry(n).or_insert_with(GPoly::zero);
            entry.insert(*e, c.clone());
        }
        let terms = groups
            .into_iter()
            .map(|(n, g)| {
                let (re, im) = self.z_group_to_phase(&g).split();
                (n, ComplexPhase { re, im })
            })
            .collect();
        HarmonicPoly { terms }
    }

    /// Time average over one period: the zero-harmonic part of the pullback.
    pub fn average(&self, f: &PhasePoly) -> PhasePoly {
        let z = self.to_z(f);
        let mut zero_mode = GPoly::zero();
        for (e, c) in z.terms() {
            if self.harmonic_of(e) == 0 {
                zero_mode.insert(*e, c.clone());
            }
        }
        Self::expect_real(self.z_group_to_phase(&zero_mode), "average")
    }

    /// Weighted average S(f) = (1/2pi) * integral of (t - pi) (flow pullback of f) dt:
    /// harmonic n != 0 contributes its coefficient divided by (i n).
    pub fn s_operator(&self, f: &PhasePoly) -> PhasePoly {
        let z = self.to_z(f);
        let mut out = GPoly::zero();
        for (e, c) in z.terms() {
            let n = self.harmonic_of(e);
            if n != 0 {
                out.insert(*e, c.div_in(n));
            }
        }
        Self::expect_real(self.z_group_to_phase(&out), "S operator")
    }
}

/// One complex-coefficient polynomial in the real phase variables.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPhase {
    pub re: PhasePoly,
    pub im: PhasePoly,
}

/// A finite Fourier series sum_n f_n(q, p) e^{i n t} with exact coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicPoly {
    terms: BTreeMap<i64, ComplexPhase>,
}

impl HarmonicPoly {
    pub fn harmonics(&self) -> impl Iterator<Item = (&i64, &ComplexPhase)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, n: i64) -> Option<&ComplexPhase> {
        self.terms.get(&n)
    }

    /// Number of nonzero harmonics.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The series is real iff f_{-n} = conj(f_n) for every harmonic.
    pub fn is_conjugate_symmetric(&self) -> bool {
        self.terms.iter().all(|(n, c)| match self.terms.get(&-n) {
            Some(d) => d.re == c.re && d.im.add(&c.im).is_zero(),
            None => c.re.is_zero() && c.im.is_zero(),
        })
    }

    /// Evaluate the series at phase point `s` and time `t`.
    pub fn eval(&self, s: &PhaseState, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(n, c)| {
                let (sin, cos) = (*n as f64 * t).sin_cos();
                c.re.eval(s) * cos - c.im.eval(s) * sin
            })
            .sum()
    }

    /// Exact value at t = 0, which must reproduce the original polynomial.
    pub fn at_time_zero(&self) -> PhasePoly {
        let mut out = PhasePoly::zero();
        for c in self.terms.values() {
            out = out.add(&c.re);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::h0_flow;
    use crate::symmath::hopf::rho_polys;
    use crate::symmath::poly::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(rng: &mut impl Rng) -> PhaseState {
        PhaseState::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    }

    fn random_poly(rng: &mut impl Rng, max_degree: u8, terms: usize) -> PhasePoly {
        let mut f = PhasePoly::zero();
        for _ in 0..terms {
            let mut e = [0u8; 4];
            loop {
                for x in e.iter_mut() {
                    *x = rng.gen_range(0..=max_degree);
                }
                if e.iter().map(|&x| x as u32).sum::<u32>() <= max_degree as u32 {
                    break;
                }
            }
            f = f.add(&PhasePoly::monomial(e, rat(rng.gen_range(-5i64..=5), 1)));
        }
        f
    }

    #[test]
    fn pullback_of_q1_has_two_harmonics() {
        let res = Resonance::ONE_TWO;
        let hp = res.pullback_flow(&PhasePoly::q1());
        assert_eq!(hp.len(), 2);
        let c1 = hp.coefficient(1).unwrap();
        // q1(t) = Re[(q1 - i p1) e^{it}], so f_1 = (q1 - i p1)/2
        assert_eq!(c1.re, PhasePoly::q1().scale(&rat(1, 2)));
        assert_eq!(c1.im, PhasePoly::p1().scale(&rat(-1, 2)));
        assert!(hp.is_conjugate_symmetric());
    }

    #[test]
    fn pullback_reproduces_f_at_t0_and_matches_flow() {
        let res = Resonance::ONE_TWO;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let f = random_poly(&mut rng, 5, 4);
            let hp = res.pullback_flow(&f);
            assert!(hp.is_conjugate_symmetric());
            assert!(hp.at_time_zero().sub(&f).is_zero());
            for _ in 0..5 {
                let s = random_state(&mut rng);
                let t: f64 = rng.gen_range(0.0..7.0);
                let moved = h0_flow(1.0, 2.0, &s, t);
                assert!((hp.eval(&s, t) - f.eval(&moved)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn pullback_of_invariant_is_single_zero_harmonic() {
        let res = Resonance::ONE_TWO;
        let [r1, _, _, _] = rho_polys();
        let hp = res.pullback_flow(&r1);
        assert_eq!(hp.len(), 1);
        assert_eq!(hp.coefficient(0).unwrap().re, r1);
        assert!(hp.coefficient(0).unwrap().im.is_zero());
    }

    #[test]
    fn average_examples() {
        let res = Resonance::ONE_TWO;
        assert!(res.average(&PhasePoly::q1()).is_zero());
        let avg_q1sq = res.average(&PhasePoly::q1().pow(2));
        let expected = PhasePoly::q1()
            .pow(2)
            .add(&PhasePoly::p1().pow(2))
            .scale(&rat(1, 2));
        assert!(avg_q1sq.sub(&expected).is_zero());
        // the coupling averages to (1/16)(q1^2+p1^2)(4 q2^2+p2^2)
        let [r1, r2, _, _] = rho_polys();
        let avg = res.average(&PhasePoly::h1_quartic());
        assert!(avg.sub(&r1.mul(&r2).scale(&rat(1, 16))).is_zero());
    }

    #[test]
    fn s_operator_kills_invariants_and_averages() {
        let res = Resonance::ONE_TWO;
        let [r1, _, _, _] = rho_polys();
        assert!(res.s_operator(&r1).is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5 {
            let f = random_poly(&mut rng, 4, 4);
            assert!(res.s_operator(&res.average(&f)).is_zero());
        }
    }

    #[test]
    fn averages_commute_with_h0() {
        let res = Resonance::ONE_TWO;
        let h0 = res.h0_poly();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..6 {
            let f = random_poly(&mut rng, 6, 4);
            assert!(res.average(&f).poisson(&h0).is_zero());
        }
    }

    #[test]
    fn homological_identity() {
        // {H0, S(f)} = <f> - f, exactly, for the coupling and random polys.
        let res = Resonance::ONE_TWO;
        let h0 = res.h0_poly();
        let check = |f: &PhasePoly| {
            let lhs = h0.poisson(&res.s_operator(f));
            let rhs = res.average(f).sub(f);
            assert!(lhs.sub(&rhs).is_zero());
        };
        check(&PhasePoly::h1_quartic());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            check(&random_poly(&mut rng, 4, 5));
        }
    }

    #[test]
    fn average_matches_quadrature_oracle() {
        // high-order periodic quadrature of f along the flow vs the exact average
        let res = Resonance::ONE_TWO;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 4096;
        for _ in 0..20 {
            let f = random_poly(&mut rng, 5, 4);
            let avg = res.average(&f);
            let s = random_state(&mut rng);
            let mut acc = 0.0;
            for k in 0..n {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                acc += f.eval(&h0_flow(1.0, 2.0, &s, t));
            }
            acc /= n as f64;
            assert!(
                (acc - avg.eval(&s)).abs() < 1e-9,
                "quadrature {acc} vs exact {}",
                avg.eval(&s)
            );
        }
    }
}
