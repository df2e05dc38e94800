//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! The generic core behind the phase-space, Hopf-variable and reduced-space
//! polynomial types. Exponent vectors are the map key, so iteration order
//! (and therefore printing and JSON export) is deterministic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Convenience constructor for an exact rational n/d.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact conversion of a finite f64 into a rational (every finite double is one).
pub fn rat_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float required")
}

/// A polynomial in `N` variables over the rationals, stored as a sparse map
/// from exponent vectors to nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly<const N: usize> {
    terms: BTreeMap<[u8; N], BigRational>,
}

impl<const N: usize> Poly<N> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::zero();
        p.insert([0u8; N], c);
        p
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The i-th coordinate variable as a polynomial.
    pub fn var(i: usize) -> Self {
        let mut e = [0u8; N];
        e[i] = 1;
        Self::monomial(e, BigRational::one())
    }

    pub fn monomial(exponents: [u8; N], coeff: BigRational) -> Self {
        let mut p = Self::zero();
        p.insert(exponents, coeff);
        p
    }

    fn insert(&mut self, e: [u8; N], c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8; N], &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u8; N]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = *ea;
                for i in 0..N {
                    e[i] = e[i]
                        .checked_add(eb[i])
                        .expect("monomial exponent overflow");
                }
                out.insert(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut en = *e;
            en[i] -= 1;
            out.insert(en, c * BigRational::from_integer(BigInt::from(e[i])));
        }
        out
    }

    pub fn eval_f64(&self, x: &[f64; N]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut m = c.to_f64().expect("coefficient convertible to f64");
            for i in 0..N {
                for _ in 0..e[i] {
                    m *= x[i];
                }
            }
            acc += m;
        }
        acc
    }

    pub fn eval_rational(&self, x: &[BigRational; N]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for i in 0..N {
                for _ in 0..e[i] {
                    m *= &x[i];
                }
            }
            acc += m;
        }
        acc
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// The terms of exact total degree `d`.
    pub fn homogeneous_component(&self, d: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().map(|&x| x as u32).sum::<u32>() == d)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Substitute each variable by a polynomial in `M` other variables.
    pub fn compose<const M: usize>(&self, images: &[Poly<M>; N]) -> Poly<M> {
        let mut powers: Vec<Vec<Poly<M>>> = (0..N).map(|_| vec![Poly::<M>::one()]).collect();
        let mut out = Poly::<M>::zero();
        for (e, c) in &self.terms {
            let mut term = Poly::<M>::constant(c.clone());
            for i in 0..N {
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

    /// Render with the given variable names, in deterministic monomial order.
    pub fn display(&self, names: [&str; N]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in &self.terms {
            let mut mono = String::new();
            for i in 0..N {
                if e[i] > 0 {
                    if !mono.is_empty() {
                        mono.push(' ');
                    }
                    mono.push_str(names[i]);
                    if e[i] > 1 {
                        mono.push_str(&format!("^{}", e[i]));
                    }
                }
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if !out.is_empty() {
                out.push_str(&format!(" {} ", sign));
            } else if c.is_negative() {
                out.push('-');
            }
            if mono.is_empty() {
                out.push_str(&format!("{}", mag));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{} {}", mag, mono));
            }
        }
        out
    }

    /// JSON object mapping comma-separated exponent vectors to "num/den" strings.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (e, c) in &self.terms {
            let key = e
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",");
            map.insert(key, serde_json::Value::String(c.to_string()));
        }
        serde_json::Value::Object(map)
    }
}
