//! Kulkarni–Nomizu products.
//!
//! `⊘` acts on symmetric forms over exterior powers, `⊚` on symmetric forms
//! over full and traceless symmetric powers. Elements are dense symmetric
//! matrices in the orthonormal bases of [`RepSpace`]; a product expands both
//! factors over basis dyads `e_I⊗e_J` and multiplies slotwise.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::curvature::CurvatureOperator;
use crate::error::{ensure_within, Error, Result};
use crate::linalg::{asymmetry, factorial, max_abs_diff, symmetrize};
use crate::multilinear::{sort_with_sign, BasisLabels, MultiIndex, RepSpace, WedgeIndex};

/// Largest total grade a `⊚` product on symmetric powers may reach.
pub const MAX_SYMMETRIC_GRADE: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KNAlgebra {
    /// `⊕ Sym²(∧ᵖℝⁿ)` with `⊘`.
    Exterior,
    /// `⊕ Sym²(Symᵖℝⁿ)` with `⊚`.
    SymmetricFull,
    /// `⊕ Sym²(Symᵖ₀ℝⁿ)` with the projected product `π(a⊚b)`.
    SymmetricTraceless,
}

impl KNAlgebra {
    pub fn space(self, n: usize, p: usize) -> Result<Arc<RepSpace>> {
        match self {
            KNAlgebra::Exterior => RepSpace::exterior(n, p),
            KNAlgebra::SymmetricFull => RepSpace::symmetric(n, p),
            KNAlgebra::SymmetricTraceless => RepSpace::traceless(n, p),
        }
    }
}

/// Homogeneous element of grade `p` of one of the algebras.
#[derive(Clone, Debug, PartialEq)]
pub struct KNElement {
    algebra: KNAlgebra,
    n: usize,
    grade: usize,
    mat: DMatrix<f64>,
}

impl KNElement {
    /// Accepts matrices symmetric to `1e-10` and stores the symmetric part.
    pub fn new(algebra: KNAlgebra, n: usize, grade: usize, mat: DMatrix<f64>) -> Result<Self> {
        let dim = algebra.space(n, grade)?.dim();
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: mat.nrows(),
            });
        }
        ensure_within("KN element symmetry", asymmetry(&mat), 1e-10)?;
        Ok(Self {
            algebra,
            n,
            grade,
            mat: symmetrize(&mat),
        })
    }

    /// `Id` on the grade-`p` space.
    pub fn identity(algebra: KNAlgebra, n: usize, p: usize) -> Result<Self> {
        let dim = algebra.space(n, p)?.dim();
        Self::new(algebra, n, p, DMatrix::identity(dim, dim))
    }

    /// The metric `g` as a grade-one element of the given algebra.
    pub fn metric(algebra: KNAlgebra, n: usize) -> Result<Self> {
        Self::identity(algebra, n, 1)
    }

    pub fn metric_exterior(n: usize) -> Self {
        Self::metric(KNAlgebra::Exterior, n).expect("∧¹ exists for every n ≥ 1")
    }

    /// A symmetric bilinear form on `ℝⁿ` as a grade-one element of `(C, ⊘)`.
    pub fn exterior_form(h: DMatrix<f64>) -> Result<Self> {
        let n = h.nrows();
        Self::new(KNAlgebra::Exterior, n, 1, h)
    }

    /// A symmetric bilinear form on `ℝⁿ` as a grade-one element of `(A, ⊚)`.
    pub fn symmetric_form(h: DMatrix<f64>) -> Result<Self> {
        let n = h.nrows();
        Self::new(KNAlgebra::SymmetricFull, n, 1, h)
    }

    pub fn from_curvature(r: &CurvatureOperator) -> Self {
        Self::new(KNAlgebra::Exterior, r.n(), 2, r.matrix().clone()).expect("operator is symmetric")
    }

    pub fn to_curvature(&self) -> Result<CurvatureOperator> {
        if self.algebra != KNAlgebra::Exterior || self.grade != 2 {
            return Err(Error::MixedAlgebras);
        }
        CurvatureOperator::new(self.n, self.mat.clone())
    }

    pub fn algebra(&self) -> KNAlgebra {
        self.algebra
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    pub fn space(&self) -> Arc<RepSpace> {
        self.algebra
            .space(self.n, self.grade)
            .expect("element was validated on construction")
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            mat: &self.mat * c,
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        if self.grade != other.grade {
            return Err(Error::DimensionMismatch {
                expected: self.grade,
                found: other.grade,
            });
        }
        Ok(Self {
            mat: &self.mat + &other.mat,
            ..self.clone()
        })
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::MixedAlgebras);
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// `a ⊘ b`.
    pub fn kn_wedge(&self, other: &Self) -> Result<Self> {
        kn_wedge(self, other)
    }

    /// `a ⊚ b`, projected by `π` in the traceless algebra.
    pub fn kn_vee(&self, other: &Self) -> Result<Self> {
        kn_vee(self, other)
    }
}

/// `(α⊗β) ⊘ (γ⊗δ) = (α∧γ)⊗(β∧δ)`, extended bilinearly over basis dyads.
pub fn kn_wedge(a: &KNElement, b: &KNElement) -> Result<KNElement> {
    if a.algebra != KNAlgebra::Exterior || b.algebra != KNAlgebra::Exterior {
        return Err(Error::MixedAlgebras);
    }
    a.same_algebra(b)?;
    let n = a.n;
    let (p, q) = (a.grade, b.grade);
    if p + q > n {
        return Err(Error::GradeOutOfRange {
            p: p + q,
            n,
            context: "⊘ product exceeds the top exterior power",
        });
    }
    let sa = RepSpace::exterior(n, p)?;
    let sb = RepSpace::exterior(n, q)?;
    let sc = RepSpace::exterior(n, p + q)?;
    let (BasisLabels::Wedge(wa), BasisLabels::Wedge(wb)) = (sa.labels(), sb.labels()) else {
        unreachable!("exterior spaces carry wedge labels")
    };
    // table[I][K] = position and sign of e_I ∧ e_K
    let table: Vec<Vec<Option<(usize, f64)>>> = wa
        .iter()
        .map(|i| {
            wb.iter()
                .map(|k| {
                    let mut idx: Vec<usize> = i.indices().iter().chain(k.indices()).copied().collect();
                    let sign = sort_with_sign(&mut idx)?;
                    let w = WedgeIndex::new(idx, n).ok()?;
                    Some((sc.wedge_position(&w)?, sign))
                })
                .collect()
        })
        .collect();
    let out = dyad_product(&a.mat, &b.mat, sc.dim(), |i, k| table[i][k]);
    KNElement::new(KNAlgebra::Exterior, n, p + q, symmetrize(&out))
}

/// `(α⊗β) ⊚ (γ⊗δ) = (α∨γ)⊗(β∨δ)`; on the traceless algebra both factors are
/// taken as harmonic representatives and the product is projected by `π`.
pub fn kn_vee(a: &KNElement, b: &KNElement) -> Result<KNElement> {
    a.same_algebra(b)?;
    match a.algebra {
        KNAlgebra::Exterior => Err(Error::MixedAlgebras),
        KNAlgebra::SymmetricFull => vee_full(a.n, a.grade, &a.mat, b.grade, &b.mat),
        KNAlgebra::SymmetricTraceless => {
            let ea = embed_traceless(a)?;
            let eb = embed_traceless(b)?;
            let full = vee_full(a.n, a.grade, ea.matrix(), b.grade, eb.matrix())?;
            project_traceless(&full)
        }
    }
}

fn vee_full(n: usize, p: usize, a: &DMatrix<f64>, q: usize, b: &DMatrix<f64>) -> Result<KNElement> {
    if p + q > MAX_SYMMETRIC_GRADE {
        return Err(Error::GradeOutOfRange {
            p: p + q,
            n,
            context: "⊚ product beyond the supported grade",
        });
    }
    let sa = RepSpace::symmetric(n, p)?;
    let sb = RepSpace::symmetric(n, q)?;
    let sc = RepSpace::symmetric(n, p + q)?;
    let (BasisLabels::Monomial(ma), BasisLabels::Monomial(mb)) = (sa.labels(), sb.labels()) else {
        unreachable!("symmetric spaces carry monomial labels")
    };
    // u_ℓ · u_m = √((ℓ+m)! / (ℓ! m!)) u_{ℓ+m}
    let table: Vec<Vec<Option<(usize, f64)>>> = ma
        .iter()
        .map(|l| {
            mb.iter()
                .map(|m| {
                    let s: MultiIndex = l.add(m);
                    let coef = (s.factorial() / (l.factorial() * m.factorial())).sqrt();
                    Some((sc.monomial_position(&s).expect("degree p+q"), coef))
                })
                .collect()
        })
        .collect();
    let out = dyad_product(a, b, sc.dim(), |i, k| table[i][k]);
    KNElement::new(KNAlgebra::SymmetricFull, n, p + q, symmetrize(&out))
}

/// `Σ a_IJ b_KL (e_I·e_K)⊗(e_J·e_L)` for a slot product given by `mul`.
fn dyad_product(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    dim: usize,
    mul: impl Fn(usize, usize) -> Option<(usize, f64)>,
) -> DMatrix<f64> {
    let nz = |m: &DMatrix<f64>| -> Vec<(usize, usize, f64)> {
        let mut v = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                if m[(i, j)] != 0.0 {
                    v.push((i, j, m[(i, j)]));
                }
            }
        }
        v
    };
    let (na, nb) = (nz(a), nz(b));
    let mut out = DMatrix::zeros(dim, dim);
    for &(i, j, av) in &na {
        for &(k, l, bv) in &nb {
            let (Some((r, s1)), Some((c, s2))) = (mul(i, k), mul(j, l)) else {
                continue;
            };
            out[(r, c)] += av * bv * s1 * s2;
        }
    }
    out
}

/// Harmonic representative `C a Cᵀ` of a traceless-algebra element inside `A`.
pub fn embed_traceless(a: &KNElement) -> Result<KNElement> {
    if a.algebra != KNAlgebra::SymmetricTraceless {
        return Err(Error::MixedAlgebras);
    }
    let space = a.space();
    let c = space.change_of_basis().expect("traceless space carries a basis");
    KNElement::new(KNAlgebra::SymmetricFull, a.n, a.grade, c * &a.mat * c.transpose())
}

/// `π(φ⊗ψ) = φ₀⊗ψ₀`, written in the harmonic basis: `Cᵀ a C`.
pub fn project_traceless(a: &KNElement) -> Result<KNElement> {
    if a.algebra != KNAlgebra::SymmetricFull {
        return Err(Error::MixedAlgebras);
    }
    let space = RepSpace::traceless(a.n, a.grade)?;
    let c = space.change_of_basis().expect("traceless space carries a basis");
    KNElement::new(KNAlgebra::SymmetricTraceless, a.n, a.grade, c.transpose() * &a.mat * c)
}

/// `g^p` by repeated multiplication; `g⁰` is the unit of the algebra.
pub fn g_power_iterated(algebra: KNAlgebra, n: usize, p: usize) -> Result<KNElement> {
    let mut acc = KNElement::identity(algebra, n, 0)?;
    let g = KNElement::metric(algebra, n)?;
    for _ in 0..p {
        acc = match algebra {
            KNAlgebra::Exterior => kn_wedge(&acc, &g)?,
            _ => kn_vee(&acc, &g)?,
        };
    }
    Ok(acc)
}

/// `g^p = p!·Id`; for `p ≤ 4` the closed form is checked against
/// [`g_power_iterated`] to `1e-10`.
pub fn g_power(algebra: KNAlgebra, n: usize, p: usize) -> Result<KNElement> {
    if algebra == KNAlgebra::Exterior && p > n {
        return Err(Error::GradeOutOfRange {
            p,
            n,
            context: "g-power beyond the top exterior power",
        });
    }
    if algebra != KNAlgebra::Exterior && p > MAX_SYMMETRIC_GRADE {
        return Err(Error::GradeOutOfRange {
            p,
            n,
            context: "g-power beyond the supported grade",
        });
    }
    let closed = KNElement::identity(algebra, n, p)?.scale(factorial(p));
    if p <= 4 {
        let iterated = g_power_iterated(algebra, n, p)?;
        ensure_within(
            "g-power identity",
            max_abs_diff(closed.matrix(), iterated.matrix()),
            1e-10,
        )?;
    }
    Ok(closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    fn diag(v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(v))
    }

    #[test]
    fn g_wedge_g_is_twice_identity() {
        let g = KNElement::metric_exterior(4);
        let gg = g.kn_wedge(&g).unwrap();
        assert!(max_abs_diff(gg.matrix(), &(DMatrix::identity(6, 6) * 2.0)) < 1e-15);
    }

    #[test]
    fn rank_one_square_vanishes() {
        let h = KNElement::exterior_form(diag(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(max_abs(h.kn_wedge(&h).unwrap().matrix()), 0.0);
    }

    #[test]
    fn traceless_ricci_fixture() {
        let h = KNElement::exterior_form(diag(&[1.0, 0.0, 0.0, -1.0])).unwrap();
        let m = h.kn_wedge(&KNElement::metric_exterior(4)).unwrap().into_matrix();
        // pairs: 12 13 14 23 24 34
        assert_eq!(m, diag(&[1.0, 1.0, 0.0, 0.0, -1.0, -1.0]));
    }

    #[test]
    fn classical_formula() {
        let h = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.5, 2.0, -1.0, 0.3, 0.5, 0.3, 2.0]);
        let k = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 1.0, 1.0, 3.0, -2.0, 1.0, -2.0, 1.0]);
        let prod = KNElement::exterior_form(h.clone())
            .unwrap()
            .kn_wedge(&KNElement::exterior_form(k.clone()).unwrap())
            .unwrap();
        let ps = crate::multilinear::pairs(3);
        for (r, &(a, b)) in ps.iter().enumerate() {
            for (c, &(x, y)) in ps.iter().enumerate() {
                let expected =
                    h[(a, x)] * k[(b, y)] + h[(b, y)] * k[(a, x)] - h[(a, y)] * k[(b, x)] - h[(b, x)] * k[(a, y)];
                assert!((prod.matrix()[(r, c)] - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn single_dyad_vee() {
        // (x₁²⊗x₂²) ⊚ (x₁⊗x₂) = x₁³⊗x₂³; the test uses symmetrized dyads.
        let n = 2;
        let s2 = RepSpace::symmetric(n, 2).unwrap();
        let i11 = s2.monomial_position(&MultiIndex::new(vec![2, 0])).unwrap();
        let i22 = s2.monomial_position(&MultiIndex::new(vec![0, 2])).unwrap();
        // x₁² = √2 u, so the dyad x₁²⊗x₂² has coefficient 2 on u⊗u'
        let mut a = DMatrix::zeros(3, 3);
        a[(i11, i22)] = 1.0;
        a[(i22, i11)] = 1.0;
        let mut b = DMatrix::zeros(2, 2);
        b[(0, 1)] = 1.0;
        b[(1, 0)] = 1.0;
        let a = KNElement::new(KNAlgebra::SymmetricFull, n, 2, a * 2.0).unwrap();
        let b = KNElement::new(KNAlgebra::SymmetricFull, n, 1, b).unwrap();
        let c = a.kn_vee(&b).unwrap();
        let s3 = RepSpace::symmetric(n, 3).unwrap();
        let i111 = s3.monomial_position(&MultiIndex::new(vec![3, 0])).unwrap();
        let i222 = s3.monomial_position(&MultiIndex::new(vec![0, 3])).unwrap();
        // x₁³ = √6 u, so the expected coefficient on u⊗u' is 6
        assert!((c.matrix()[(i111, i222)] - 6.0).abs() < 1e-12);
        assert!((c.matrix()[(i222, i111)] - 6.0).abs() < 1e-12);
        // symmetrized factors also pair x₁² with x₁ and x₂² with x₂: (x₁²x₂)⊗(x₁x₂²)
        let i112 = s3.monomial_position(&MultiIndex::new(vec![2, 1])).unwrap();
        let i122 = s3.monomial_position(&MultiIndex::new(vec![1, 2])).unwrap();
        assert!((c.matrix()[(i112, i122)] - 2.0).abs() < 1e-12);
        let mut rest = c.matrix().clone();
        for (r, s) in [(i111, i222), (i222, i111), (i112, i122), (i122, i112)] {
            rest[(r, s)] = 0.0;
        }
        assert!(max_abs(&rest) < 1e-12);
    }

    #[test]
    fn g_powers() {
        let e = g_power(KNAlgebra::Exterior, 5, 3).unwrap();
        assert!(max_abs_diff(e.matrix(), &(DMatrix::identity(10, 10) * 6.0)) < 1e-12);
        let t = g_power(KNAlgebra::SymmetricTraceless, 4, 0).unwrap();
        assert_eq!(t.matrix(), &DMatrix::identity(1, 1));
        let f = g_power_iterated(KNAlgebra::SymmetricFull, 3, 2).unwrap();
        assert!(max_abs_diff(f.matrix(), &(DMatrix::identity(6, 6) * 2.0)) < 1e-12);
        let t2 = g_power_iterated(KNAlgebra::SymmetricTraceless, 4, 2).unwrap();
        assert!(max_abs_diff(t2.matrix(), &(DMatrix::identity(9, 9) * 2.0)) < 1e-12);
    }

    #[test]
    fn grade_and_algebra_errors() {
        let g = KNElement::metric_exterior(2);
        let gg = g.kn_wedge(&g).unwrap();
        assert!(matches!(gg.kn_wedge(&g), Err(Error::GradeOutOfRange { .. })));
        let s = KNElement::metric(KNAlgebra::SymmetricFull, 2).unwrap();
        assert_eq!(g.kn_vee(&s), Err(Error::MixedAlgebras));
        assert_eq!(s.kn_wedge(&s), Err(Error::MixedAlgebras));
    }
}
