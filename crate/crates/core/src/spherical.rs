//! Exact polynomial integration over `Sⁿ⁻¹` (unnormalized surface measure)
//! and the integral representation of `⟨K(R,Symᵖ₀)φ, ψ⟩`.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::closedform::trial_rng;
use crate::curvature::CurvatureOperator;
use crate::error::{Error, Result};
use crate::multilinear::{pairs, MultiIndex, Polynomial, RepSpace};
use crate::weitzenbock::{bilinear_form, curvature_term};

/// `∫ x^α dσ = 2 Π Γ((αᵢ+1)/2) / Γ((n+|α|)/2)`, zero if some `αᵢ` is odd.
pub fn integrate_monomial(alpha: &MultiIndex) -> f64 {
    let e = alpha.exponents();
    if e.iter().any(|&a| a % 2 == 1) {
        return 0.0;
    }
    let num: f64 = e.iter().map(|&a| gamma((a as f64 + 1.0) / 2.0)).product();
    2.0 * num / gamma((e.len() + alpha.degree()) as f64 / 2.0)
}

pub fn integrate(phi: &Polynomial) -> f64 {
    phi.terms().map(|(m, c)| c * integrate_monomial(m)).sum()
}

/// Surface area of `Sⁿ⁻¹`.
pub fn sphere_area(n: usize) -> f64 {
    integrate_monomial(&MultiIndex::zero(n))
}

/// Monte-Carlo estimate of `∫ φ dσ` and its standard error.
///
/// Samples are split into fixed chunks, each with its own stream of a seeded
/// generator, so the result is reproducible regardless of thread count.
pub fn monte_carlo_integral(phi: &Polynomial, samples: usize, seed: u64) -> (f64, f64) {
    const CHUNK: usize = 1 << 14;
    let n = phi.n();
    let chunks = samples.div_ceil(CHUNK);
    let (sum, sum_sq) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = trial_rng(seed, 0, c);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut x = vec![0.0; n];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                let mut norm2 = 0.0;
                for xi in x.iter_mut() {
                    *xi = rng.sample::<f64, _>(StandardNormal);
                    norm2 += *xi * *xi;
                }
                let inv = norm2.sqrt().recip();
                x.iter_mut().for_each(|xi| *xi *= inv);
                let v = phi.eval(&x);
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let m = samples as f64;
    let mean = sum / m;
    let var = (sum_sq / m - mean * mean).max(0.0);
    let area = sphere_area(n);
    (area * mean, area * (var / m).sqrt())
}

/// `‖φ‖² / ∫ φ² dσ` for a nonzero harmonic `φ`.
pub fn c_constant_for(phi: &Polynomial) -> Result<f64> {
    let l2 = integrate(&phi.mul(phi));
    if phi.is_zero() || l2 <= 0.0 {
        return Err(Error::Degenerate("c constant needs a nonzero polynomial"));
    }
    if phi.laplacian().max_coefficient() > 1e-9 * phi.max_coefficient() {
        return Err(Error::NotHarmonic {
            residual: phi.laplacian().max_coefficient(),
        });
    }
    Ok(phi.norm_squared() / l2)
}

/// `c_{p,n}` evaluated at `φ_p = Re(x₁+√−1x₂)ᵖ` (or `x₁` when `p = 1`).
pub fn c_constant(n: usize, p: usize) -> Result<f64> {
    if n < 2 || p == 0 {
        return Err(Error::GradeOutOfRange {
            p,
            n,
            context: "c constant needs n ≥ 2 and p ≥ 1",
        });
    }
    c_constant_for(&Polynomial::re_power(n, p))
}

/// Largest relative deviation of `c` over `samples` random harmonic polynomials
/// from its value at `φ_p`.
pub fn c_constant_spread(n: usize, p: usize, samples: usize, seed: u64) -> Result<f64> {
    let reference = c_constant(n, p)?;
    let space = RepSpace::traceless(n, p)?;
    let mut worst = 0.0_f64;
    for t in 0..samples {
        let mut rng = trial_rng(seed, p, t);
        let phi = random_harmonic(&space, &mut rng)?;
        worst = worst.max((c_constant_for(&phi)? - reference).abs() / reference);
    }
    Ok(worst)
}

fn random_harmonic<R: Rng + ?Sized>(space: &RepSpace, rng: &mut R) -> Result<Polynomial> {
    let v = DVector::from_fn(space.dim(), |_, _| rng.sample::<f64, _>(StandardNormal));
    space.coords_to_polynomial(&v)
}

/// `R(x, ∇φ, x, ∇ψ) = Σ_{a,b} R_ab (x∧∇φ)_a (x∧∇ψ)_b` as a polynomial, where
/// `(x∧∇φ)_{ij} = x_i∂_jφ − x_j∂_iφ`.
pub fn curvature_integrand(r: &CurvatureOperator, phi: &Polynomial, psi: &Polynomial) -> Result<Polynomial> {
    let n = r.n();
    if phi.n() != n || psi.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: phi.n().max(psi.n()),
        });
    }
    let ps = pairs(n);
    let dphi: Vec<Polynomial> = ps.iter().map(|&(i, j)| phi.rotate_generator(i, j)).collect();
    let dpsi: Vec<Polynomial> = ps.iter().map(|&(i, j)| psi.rotate_generator(i, j)).collect();
    let mut out = Polynomial::zero(n, phi.degree() + psi.degree());
    for (a, pa) in dphi.iter().enumerate() {
        // Σ_b R_ab (x∧∇ψ)_b first, so each a needs one product.
        let mut row = Polynomial::zero(n, psi.degree());
        for (b, qb) in dpsi.iter().enumerate() {
            let rab = r.matrix()[(a, b)];
            if rab != 0.0 {
                row = row.add_scaled(qb, rab)?;
            }
        }
        out = out.add_scaled(&pa.mul(&row), 1.0)?;
    }
    Ok(out)
}

/// `c_{p,n} ∫ R(x,∇φ,x,∇ψ) dσ`.
pub fn integral_side(r: &CurvatureOperator, phi: &Polynomial, psi: &Polynomial, c: f64) -> Result<f64> {
    Ok(c * integrate(&curvature_integrand(r, phi, psi)?))
}

/// Relative error with the denominator floored at `1e-12` times `scale`.
pub fn relative_error(lhs: f64, rhs: f64, scale: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1e-12 * scale.max(1.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralTrial {
    pub lhs: f64,
    pub rhs: f64,
    pub relative_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralReport {
    pub n: usize,
    pub p: usize,
    pub c: f64,
    /// Relative spread of `c` over random harmonic polynomials.
    pub c_spread: f64,
    pub trials: Vec<IntegralTrial>,
    pub worst_relative_error: f64,
}

/// Compares `⟨K(R,Symᵖ₀)φ,ψ⟩` with `c_{p,n}∫R(x,∇φ,x,∇ψ)dσ` on random harmonic pairs.
pub fn verify_integral_formula(r: &CurvatureOperator, p: usize, trials: usize, seed: u64) -> Result<IntegralReport> {
    let n = r.n();
    if n < 2 || p < 2 {
        return Err(Error::GradeOutOfRange {
            p,
            n,
            context: "integral formula checks need n ≥ 2 and p ≥ 2",
        });
    }
    let space = RepSpace::traceless(n, p)?;
    let k = curvature_term(r, &space)?;
    let c = c_constant(n, p)?;
    let c_spread = c_constant_spread(n, p, 3, seed ^ 0x5eed)?;
    let scale = k.matrix().norm();
    let trials: Vec<IntegralTrial> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, p, t);
            let u = DVector::from_fn(space.dim(), |_, _| rng.sample::<f64, _>(StandardNormal));
            let v = DVector::from_fn(space.dim(), |_, _| rng.sample::<f64, _>(StandardNormal));
            let lhs = bilinear_form(&k, &u, &v)?;
            let phi = space.coords_to_polynomial(&u)?;
            let psi = space.coords_to_polynomial(&v)?;
            let rhs = integral_side(r, &phi, &psi, c)?;
            let relative_error = relative_error(lhs, rhs, scale * u.norm() * v.norm());
            Ok(IntegralTrial {
                lhs,
                rhs,
                relative_error,
            })
        })
        .collect::<Result<_>>()?;
    let worst_relative_error = trials.iter().map(|t| t.relative_error).fold(0.0, f64::max);
    Ok(IntegralReport {
        n,
        p,
        c,
        c_spread,
        trials,
        worst_relative_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::hodge_star;
    use crate::multilinear::harmonic_projection;
    use std::f64::consts::PI;

    #[test]
    fn areas() {
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-13);
        let x1sq = MultiIndex::new(vec![2, 0, 0, 0]);
        assert!((integrate_monomial(&x1sq) - sphere_area(4) / 4.0).abs() < 1e-13);
    }

    #[test]
    fn mixed_quartic() {
        let v = integrate_monomial(&MultiIndex::new(vec![2, 2, 0, 0]));
        assert!((v - PI * PI / 12.0).abs() < 1e-13);
        assert_eq!(integrate_monomial(&MultiIndex::new(vec![3, 1, 0, 0])), 0.0);
    }

    #[test]
    fn linear_constant() {
        for n in 2..7 {
            let c = c_constant(n, 1).unwrap();
            assert!((c - n as f64 / sphere_area(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_independent_of_polynomial() {
        let a = c_constant(4, 3).unwrap();
        let x1cubed = Polynomial::monomial(MultiIndex::new(vec![3, 0, 0, 0]), 1.0);
        let b = c_constant_for(&harmonic_projection(&x1cubed).unwrap()).unwrap();
        assert!((a - b).abs() < 1e-8 * a);
        assert!(c_constant_for(&Polynomial::r_squared(3)).is_err());
    }

    #[test]
    fn identity_at_degree_two() {
        let r = CurvatureOperator::identity(4);
        let phi = Polynomial::re_power(4, 2);
        let rhs = integral_side(&r, &phi, &phi, c_constant(4, 2).unwrap()).unwrap();
        assert!((rhs - 32.0).abs() < 1e-9);
    }

    #[test]
    fn star_integrand_vanishes() {
        let r = hodge_star(4).unwrap();
        let report = verify_integral_formula(&r, 3, 3, 1).unwrap();
        for t in &report.trials {
            assert!(t.lhs.abs() < 1e-10 && t.rhs.abs() < 1e-10);
        }
    }

    #[test]
    fn monte_carlo_agrees() {
        let phi = Polynomial::monomial(MultiIndex::new(vec![2, 2, 0, 0]), 1.0);
        let (est, se) = monte_carlo_integral(&phi, 200_000, 4);
        assert!((est - integrate(&phi)).abs() < 4.0 * se);
    }
}
