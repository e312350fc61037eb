use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::binomial;

use super::index::MultiIndex;

/// Homogeneous real polynomial on ℝⁿ stored as a sparse map `x^ℓ ↦ coefficient`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    n: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, f64>,
}

impl Polynomial {
    pub fn zero(n: usize, degree: usize) -> Self {
        Self {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exponents: MultiIndex, coefficient: f64) -> Self {
        let mut p = Self::zero(exponents.n(), exponents.degree());
        p.add_term(exponents, coefficient).expect("monomial has its own degree");
        p
    }

    /// Builds from `(exponents, coefficient)` pairs; every exponent must have
    /// `n` slots and total degree `degree`.
    pub fn from_terms<I>(n: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        let mut p = Self::zero(n, degree);
        for (m, c) in terms {
            p.add_term(m, c)?;
        }
        Ok(p)
    }

    /// The linear form `Σ vᵢ xᵢ`.
    pub fn linear(coefficients: &[f64]) -> Self {
        let n = coefficients.len();
        let terms = coefficients
            .iter()
            .enumerate()
            .map(|(i, &c)| (MultiIndex::unit(n, i), c));
        Self::from_terms(n, 1, terms).expect("linear terms are homogeneous")
    }

    /// `r² = Σ xᵢ²`, the metric `g` viewed as a quadratic polynomial.
    pub fn r_squared(n: usize) -> Self {
        let terms = (0..n).map(|i| {
            let mut e = vec![0; n];
            e[i] = 2;
            (MultiIndex::new(e), 1.0)
        });
        Self::from_terms(n, 2, terms).expect("r² is homogeneous")
    }

    /// `φ_p(x) = Re (x₁ + √−1 x₂)ᵖ`, harmonic of degree `p`; requires `n ≥ 2`.
    pub fn re_power(n: usize, p: usize) -> Self {
        assert!(n >= 2, "Re(x₁ + i x₂)ᵖ needs at least two variables");
        let mut poly = Self::zero(n, p);
        for k in (0..=p).step_by(2) {
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let mut e = vec![0; n];
            e[0] = (p - k) as u32;
            e[1] = k as u32;
            poly.add_term(MultiIndex::new(e), sign * binomial(p, k) as f64)
                .expect("degree p by construction");
        }
        poly
    }

    /// `Im (x₁ + √−1 x₂)ᵖ`.
    pub fn im_power(n: usize, p: usize) -> Self {
        assert!(n >= 2, "Im(x₁ + i x₂)ᵖ needs at least two variables");
        let mut poly = Self::zero(n, p);
        for k in (1..=p).step_by(2) {
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let mut e = vec![0; n];
            e[0] = (p - k) as u32;
            e[1] = k as u32;
            poly.add_term(MultiIndex::new(e), sign * binomial(p, k) as f64)
                .expect("degree p by construction");
        }
        poly
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &MultiIndex) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn add_term(&mut self, m: MultiIndex, c: f64) -> Result<()> {
        if m.n() != self.n || m.degree() != self.degree {
            return Err(Error::NonHomogeneous { expected: self.degree });
        }
        if c == 0.0 {
            return Ok(());
        }
        let entry = self.terms.entry(m).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.retain(|_, v| *v != 0.0);
        }
        Ok(())
    }

    /// `self + c · other`.
    pub fn add_scaled(&self, other: &Polynomial, c: f64) -> Result<Polynomial> {
        if other.n != self.n || other.degree != self.degree {
            return Err(Error::NonHomogeneous { expected: self.degree });
        }
        let mut out = self.clone();
        for (m, v) in other.terms() {
            out.add_term(m.clone(), c * v)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> Polynomial {
        let mut out = Self::zero(self.n, self.degree);
        if c != 0.0 {
            out.terms = self.terms.iter().map(|(m, &v)| (m.clone(), c * v)).collect();
        }
        out
    }

    /// Polynomial product `φ ∨ ψ`.
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.n, other.n, "polynomials live in different dimensions");
        let mut out = Self::zero(self.n, self.degree + other.degree);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(a.add(b), ca * cb)
                    .expect("degrees add under multiplication");
            }
        }
        out
    }

    /// `∂φ/∂x_i`, homogeneous of degree `p − 1` (the zero polynomial when `p = 0`).
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = Self::zero(self.n, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (m, c) in self.terms() {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut v = m.exponents().to_vec();
            v[i] -= 1;
            out.add_term(MultiIndex::new(v), c * e as f64)
                .expect("degree drops by one");
        }
        out
    }

    /// `(x_i ∂/∂x_j − x_j ∂/∂x_i) φ`, the action of `E_ij`.
    pub fn rotate_generator(&self, i: usize, j: usize) -> Polynomial {
        let xi = Polynomial::monomial(MultiIndex::unit(self.n, i), 1.0);
        let xj = Polynomial::monomial(MultiIndex::unit(self.n, j), 1.0);
        let a = xi.mul(&self.partial(j));
        let b = xj.mul(&self.partial(i));
        if self.degree == 0 {
            return Polynomial::zero(self.n, 0);
        }
        a.add_scaled(&b, -1.0).expect("same degree")
    }

    /// Euclidean Laplacian `Σ ∂²/∂x_i²`.
    pub fn laplacian(&self) -> Polynomial {
        let mut out = Self::zero(self.n, self.degree.saturating_sub(2));
        if self.degree < 2 {
            return out;
        }
        for i in 0..self.n {
            let d2 = self.partial(i).partial(i);
            out = out.add_scaled(&d2, 1.0).expect("same degree");
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n);
        self.terms()
            .map(|(m, c)| {
                c * m
                    .exponents()
                    .iter()
                    .zip(x)
                    .map(|(&e, &xi)| xi.powi(e as i32))
                    .product::<f64>()
            })
            .sum()
    }

    /// Inner product `⟨φ, ψ⟩ = φ̂(ψ)`: monomials are orthogonal with `‖x^ℓ‖² = ℓ!`.
    pub fn inner(&self, other: &Polynomial) -> f64 {
        if self.degree != other.degree || self.n != other.n {
            return 0.0;
        }
        self.terms()
            .map(|(m, c)| c * other.coefficient(m) * m.factorial())
            .sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.inner(self)
    }

    /// Largest coefficient magnitude.
    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(m, c)| format!("{c}*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_of_power_is_two_pow_times_factorial() {
        for p in 1..=8 {
            let phi = Polynomial::re_power(4, p);
            let expected = 2f64.powi(p as i32 - 1) * crate::linalg::factorial(p);
            assert!((phi.norm_squared() - expected).abs() < 1e-9 * expected, "p={p}");
        }
    }

    #[test]
    fn norm_conventions() {
        let xixi = Polynomial::monomial(MultiIndex::new(vec![2, 0, 0]), 1.0);
        assert_eq!(xixi.norm_squared(), 2.0);
        let xixj = Polynomial::monomial(MultiIndex::new(vec![1, 1, 0]), 1.0);
        assert_eq!(xixj.norm_squared(), 1.0);
    }

    #[test]
    fn re_power_is_harmonic() {
        for p in 0..=7 {
            assert!(Polynomial::re_power(3, p).laplacian().is_zero());
            assert!(Polynomial::im_power(3, p).laplacian().is_zero());
        }
    }

    #[test]
    fn generator_on_power_matches_complex_calculus() {
        // (x₁∂₂ − x₂∂₁) Re zᵖ = −p Im zᵖ
        for p in 1..=6 {
            let lhs = Polynomial::re_power(3, p).rotate_generator(0, 1);
            let rhs = Polynomial::im_power(3, p).scale(-(p as f64));
            assert!(lhs.add_scaled(&rhs, -1.0).unwrap().max_coefficient() < 1e-12);
        }
    }

    #[test]
    fn rejects_inhomogeneous_terms() {
        let mut p = Polynomial::zero(2, 2);
        assert!(p.add_term(MultiIndex::new(vec![1, 0]), 1.0).is_err());
    }

    #[test]
    fn evaluation() {
        let p = Polynomial::r_squared(3);
        assert!((p.eval(&[1.0, 2.0, 3.0]) - 14.0).abs() < 1e-15);
    }
}
