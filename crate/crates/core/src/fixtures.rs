//! Named operators and test vectors, embedded on the first four coordinates
//! when `n > 4`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::curvature::{hodge_star, CurvatureOperator};
use crate::error::{Error, Result};
use crate::knalgebra::KNElement;
use crate::multilinear::{pair_index, Polynomial, RepSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fixture {
    /// `Id`, constant curvature one.
    Identity,
    /// The Hodge star of `span(e₁,…,e₄)`.
    HodgeStar,
    /// `R(e₁∧e₂) = e₁∧e₂`, `R(e₃∧e₄) = e₃∧e₄`, zero elsewhere.
    S2xS2,
    /// `½ g⊘g = Id`.
    RU,
    /// `diag(1,0,…,0,−1) ⊘ g`.
    RL,
    /// `(E₁₂+E₃₄)⊗(E₁₂+E₃₄) − (E₁₃−E₂₄)⊗(E₁₃−E₂₄)`.
    RW,
    /// Same as the Hodge star: `E₁₂⊗E₃₄ + E₃₄⊗E₁₂ − E₁₃⊗E₂₄ − … `.
    RW4,
}

impl Fixture {
    pub const ALL: [Fixture; 7] = [
        Fixture::Identity,
        Fixture::HodgeStar,
        Fixture::S2xS2,
        Fixture::RU,
        Fixture::RL,
        Fixture::RW,
        Fixture::RW4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Identity => "identity",
            Fixture::HodgeStar => "hodge-star",
            Fixture::S2xS2 => "s2xs2",
            Fixture::RU => "RU",
            Fixture::RL => "RL",
            Fixture::RW => "RW",
            Fixture::RW4 => "RW4",
        }
    }

    /// Smallest `n` the fixture makes sense in.
    pub fn min_n(self) -> usize {
        match self {
            Fixture::Identity | Fixture::RU | Fixture::RL => 2,
            _ => 4,
        }
    }

    pub fn build(self, n: usize) -> Result<CurvatureOperator> {
        if n < self.min_n() {
            return Err(Error::UnsupportedDimension { op: self.name(), n });
        }
        match self {
            Fixture::Identity | Fixture::RU => Ok(CurvatureOperator::identity(n)),
            Fixture::HodgeStar | Fixture::RW4 => hodge_star(n),
            Fixture::S2xS2 => {
                let dim = n * (n - 1) / 2;
                let mut m = DMatrix::zeros(dim, dim);
                for (i, j) in [(0, 1), (2, 3)] {
                    let a = pair_index(n, i, j);
                    m[(a, a)] = 1.0;
                }
                CurvatureOperator::new(n, m)
            }
            Fixture::RL => {
                let mut h = DMatrix::zeros(n, n);
                h[(0, 0)] = 1.0;
                h[(n - 1, n - 1)] = -1.0;
                let l = KNElement::exterior_form(h)?.kn_wedge(&KNElement::metric_exterior(n))?;
                l.to_curvature()
            }
            Fixture::RW => {
                let dim = n * (n - 1) / 2;
                let mut u = DVector::zeros(dim);
                u[pair_index(n, 0, 1)] = 1.0;
                u[pair_index(n, 2, 3)] = 1.0;
                let mut v = DVector::zeros(dim);
                v[pair_index(n, 0, 2)] = 1.0;
                v[pair_index(n, 1, 3)] = -1.0;
                CurvatureOperator::new(n, &u * u.transpose() - &v * v.transpose())
            }
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fixture::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Schema {
                pointer: "/fixture".into(),
                message: format!(
                    "unknown fixture `{s}`; expected one of {}",
                    Fixture::ALL.map(Fixture::name).join(", ")
                ),
            })
    }
}

/// `β_p = e₁∧…∧e_p` in `∧ᵖ` coordinates.
pub fn beta(n: usize, p: usize) -> Result<DVector<f64>> {
    RepSpace::exterior(n, p)?.wedge_coords(&[(1.0, (0..p).collect())])
}

/// `γ_p = (e₁∧e₂ + e₃∧e₄)∧e₅∧…∧e_{p+2}`; needs `2 ≤ p ≤ n − 2`.
pub fn gamma(n: usize, p: usize) -> Result<DVector<f64>> {
    if p < 2 || p + 2 > n {
        return Err(Error::GradeOutOfRange {
            p,
            n,
            context: "γ_p needs 2 ≤ p ≤ n − 2",
        });
    }
    let tail: Vec<usize> = (4..p + 2).collect();
    let first = [vec![0, 1], tail.clone()].concat();
    let second = [vec![2, 3], tail].concat();
    RepSpace::exterior(n, p)?.wedge_coords(&[(1.0, first), (1.0, second)])
}

/// `φ_p = Re(x₁ + √−1 x₂)ᵖ` in `Symᵖ₀` coordinates.
pub fn phi(n: usize, p: usize) -> Result<DVector<f64>> {
    RepSpace::traceless(n, p)?.polynomial_coords(&Polynomial::re_power(n, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::decompose;
    use crate::linalg::max_abs;

    #[test]
    fn names_round_trip() {
        for f in Fixture::ALL {
            assert_eq!(f.name().parse::<Fixture>().unwrap(), f);
        }
        assert!("torus".parse::<Fixture>().is_err());
    }

    #[test]
    fn weyl_fixture_is_pure() {
        let r = Fixture::RW.build(4).unwrap();
        let d = decompose(&r).unwrap();
        assert!(max_abs(&(d.r_w.matrix() - r.matrix())) < 1e-14);
        assert!(d.r_u.norm() + d.r_l.norm() + d.r_w4.norm() < 1e-14);
    }

    #[test]
    fn traceless_ricci_fixture_is_pure() {
        for n in 4..7 {
            let r = Fixture::RL.build(n).unwrap();
            let d = decompose(&r).unwrap();
            assert!(max_abs(&(d.r_l.matrix() - r.matrix())) < 1e-14);
        }
    }

    #[test]
    fn gamma_shape() {
        assert_eq!(gamma(4, 2).unwrap().norm_squared(), 2.0);
        assert!(gamma(4, 3).is_err());
        assert_eq!(beta(5, 3).unwrap()[0], 1.0);
    }
}
