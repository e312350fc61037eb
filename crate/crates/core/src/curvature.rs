//! Algebraic curvature operators on `∧²ℝⁿ`, their traces and four-part splitting.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::knalgebra::KNElement;
use crate::linalg::{asymmetry, frobenius, max_abs, symmetrize};
use crate::multilinear::{pair_index, pairs, RepSpace, WedgeIndex};

/// Symmetric operator `R` on `∧²ℝⁿ` in the lexicographic pair basis, with
/// `mat[(ij),(kl)] = R_{ijkl} = ⟨R(e_i∧e_j), e_k∧e_l⟩` and `sec(X∧Y) = R(X∧Y, X∧Y)`.
///
/// The first Bianchi identity is not assumed.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureOperator {
    n: usize,
    mat: DMatrix<f64>,
    ingest_asymmetry: f64,
}

impl CurvatureOperator {
    /// Symmetrizes `mat` and records the largest `|m_ab − m_ba|` seen.
    pub fn new(n: usize, mat: DMatrix<f64>) -> Result<Self> {
        let dim = n * n.saturating_sub(1) / 2;
        if n < 2 {
            return Err(Error::UnsupportedDimension {
                op: "curvature operator",
                n,
            });
        }
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: if mat.nrows() != dim { mat.nrows() } else { mat.ncols() },
            });
        }
        if mat.iter().any(|v| !v.is_finite()) {
            return Err(Error::Degenerate("curvature operator has non-finite entries"));
        }
        let ingest_asymmetry = asymmetry(&mat);
        Ok(Self {
            n,
            mat: symmetrize(&mat),
            ingest_asymmetry,
        })
    }

    pub fn zero(n: usize) -> Self {
        let dim = n * (n - 1) / 2;
        Self::new(n, DMatrix::zeros(dim, dim)).expect("valid shape")
    }

    /// Constant curvature one: `½ g⊘g = Σ_{i<j} E_ij⊗E_ij`.
    pub fn identity(n: usize) -> Self {
        let dim = n * (n - 1) / 2;
        Self::new(n, DMatrix::identity(dim, dim)).expect("valid shape")
    }

    /// Random operator with entries uniform in `[-1, 1]`, symmetrized.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        let dim = n * (n - 1) / 2;
        Self::new(n, crate::linalg::random_symmetric(rng, dim)).expect("valid shape")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `n(n−1)/2`.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    /// Asymmetry of the matrix this operator was built from.
    pub fn ingest_asymmetry(&self) -> f64 {
        self.ingest_asymmetry
    }

    /// `R_{ijkl}` for arbitrary (zero-based) indices, using skew-symmetry in each pair.
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let (Some((a, sa)), Some((b, sb))) = (self.pair(i, j), self.pair(k, l)) else {
            return 0.0;
        };
        sa * sb * self.mat[(a, b)]
    }

    fn pair(&self, i: usize, j: usize) -> Option<(usize, f64)> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Some((pair_index(self.n, i, j), 1.0)),
            std::cmp::Ordering::Greater => Some((pair_index(self.n, j, i), -1.0)),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "operators on different dimensions");
        self.with_matrix(&self.mat + &other.mat)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "operators on different dimensions");
        self.with_matrix(&self.mat - &other.mat)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.with_matrix(&self.mat * c)
    }

    /// `R − k·Id`, whose sectional curvatures are those of `R` minus `k`.
    pub fn shifted(&self, k: f64) -> Self {
        let id = DMatrix::<f64>::identity(self.dim(), self.dim());
        self.with_matrix(&self.mat - id * k)
    }

    fn with_matrix(&self, mat: DMatrix<f64>) -> Self {
        Self {
            n: self.n,
            mat,
            ingest_asymmetry: 0.0,
        }
    }

    /// Frobenius pairing `Σ R_ab S_ab`.
    pub fn inner(&self, other: &Self) -> f64 {
        frobenius(&self.mat, &other.mat)
    }

    pub fn norm(&self) -> f64 {
        self.mat.norm()
    }

    /// `Q·R = ∧²Q · R · ∧²Qᵀ`.
    pub fn rotated(&self, q: &DMatrix<f64>) -> Result<Self> {
        let lq = RepSpace::exterior(self.n, 2)?.rho(q)?;
        Ok(self.with_matrix(symmetrize(&(&lq * &self.mat * lq.transpose()))))
    }

    /// Quadratic form at a bivector given in pair coordinates.
    pub fn form(&self, w: &DVector<f64>) -> f64 {
        w.dot(&(&self.mat * w))
    }
}

/// `Ric_pq = Σ_i R_{piqi}`.
pub fn ricci(r: &CurvatureOperator) -> DMatrix<f64> {
    let n = r.n();
    DMatrix::from_fn(n, n, |p, q| (0..n).map(|i| r.entry(p, i, q, i)).sum())
}

pub fn scalar(r: &CurvatureOperator) -> f64 {
    ricci(r).trace()
}

/// `R = R_U + R_L + R_W + R_{∧⁴}` together with the traces of `R`.
#[derive(Clone, Debug)]
pub struct CurvatureDecomposition {
    pub r_u: CurvatureOperator,
    pub r_l: CurvatureOperator,
    pub r_w: CurvatureOperator,
    pub r_w4: CurvatureOperator,
    pub scal: f64,
    pub ric: DMatrix<f64>,
    pub ric0: DMatrix<f64>,
    /// Set for `n = 3`, where the Weyl and `∧⁴` parts are absent.
    pub degraded: bool,
}

impl CurvatureDecomposition {
    pub fn parts(&self) -> [&CurvatureOperator; 4] {
        [&self.r_u, &self.r_l, &self.r_w, &self.r_w4]
    }

    /// Largest entry of `Σ parts − R`.
    pub fn reconstruction_error(&self, r: &CurvatureOperator) -> f64 {
        let sum = self.r_u.add(&self.r_l).add(&self.r_w).add(&self.r_w4);
        max_abs(&(sum.matrix() - r.matrix()))
    }

    /// Largest `|⟨part_i, part_j⟩|` over `i ≠ j`.
    pub fn orthogonality_defect(&self) -> f64 {
        let parts = self.parts();
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in i + 1..4 {
                worst = worst.max(parts[i].inner(parts[j]).abs());
            }
        }
        worst
    }

    pub fn norms(&self) -> PartNorms {
        PartNorms {
            u: self.r_u.norm(),
            l: self.r_l.norm(),
            w: self.r_w.norm(),
            w4: self.r_w4.norm(),
        }
    }
}

/// Frobenius norms of the four parts.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PartNorms {
    pub u: f64,
    pub l: f64,
    pub w: f64,
    pub w4: f64,
}

/// Splits `R` into scalar, traceless-Ricci, Weyl and `∧⁴` parts.
///
/// `n = 3` is accepted with `degraded = true`; the Weyl and `∧⁴` parts are
/// then zero by dimension count.
pub fn decompose(r: &CurvatureOperator) -> Result<CurvatureDecomposition> {
    let n = r.n();
    if n < 3 {
        return Err(Error::UnsupportedDimension {
            op: "four-part decomposition",
            n,
        });
    }
    let ric = ricci(r);
    let scal = ric.trace();
    let nf = n as f64;
    let ric0 = &ric - DMatrix::<f64>::identity(n, n) * (scal / nf);

    let r_u = CurvatureOperator::identity(n).scale(scal / (nf * (nf - 1.0)));
    let l = KNElement::metric_exterior(n)
        .kn_wedge(&KNElement::exterior_form(ric0.clone())?)?
        .into_matrix();
    let r_l = CurvatureOperator::new(n, l / (nf - 2.0))?;

    let (r_w, r_w4, degraded) = if n == 3 {
        (CurvatureOperator::zero(n), CurvatureOperator::zero(n), true)
    } else {
        let w4 = project_wedge4(r);
        let w = r.sub(&r_u).sub(&r_l).sub(&w4);
        (w, w4, false)
    };
    Ok(CurvatureDecomposition {
        r_u,
        r_l,
        r_w,
        r_w4,
        scal,
        ric,
        ric0,
        degraded,
    })
}

/// `E_ij⊗E_kl + E_kl⊗E_ij − E_ik⊗E_jl − E_jl⊗E_ik + E_il⊗E_jk + E_jk⊗E_il`
/// for `i < j < k < l`; Frobenius norm `√6`. On `{1,2,3,4}` this is the Hodge star.
pub fn wedge4_element(n: usize, idx: [usize; 4]) -> Result<CurvatureOperator> {
    WedgeIndex::new(idx.to_vec(), n)?;
    let [i, j, k, l] = idx;
    let dim = n * (n - 1) / 2;
    let mut m = DMatrix::zeros(dim, dim);
    for (a, b, s) in [((i, j), (k, l), 1.0), ((i, k), (j, l), -1.0), ((i, l), (j, k), 1.0)] {
        let pa = pair_index(n, a.0, a.1);
        let pb = pair_index(n, b.0, b.1);
        m[(pa, pb)] = s;
        m[(pb, pa)] = s;
    }
    CurvatureOperator::new(n, m)
}

/// Orthogonal projection onto the `∧⁴ℝⁿ` subspace of `Sym²(∧²ℝⁿ)`.
pub fn project_wedge4(r: &CurvatureOperator) -> CurvatureOperator {
    let n = r.n();
    let mut out = CurvatureOperator::zero(n);
    for w in WedgeIndex::enumerate(n, 4) {
        let idx = w.indices();
        let e = wedge4_element(n, [idx[0], idx[1], idx[2], idx[3]]).expect("sorted");
        // e has norm² 6, so the orthonormal projection coefficient is ⟨R,e⟩/6.
        let c = r.inner(&e) / 6.0;
        if c != 0.0 {
            out = out.add(&e.scale(c));
        }
    }
    out
}

/// Hodge star of `∧²ℝ⁴` acting on the first four coordinates of `ℝⁿ`.
pub fn hodge_star(n: usize) -> Result<CurvatureOperator> {
    if n < 4 {
        return Err(Error::UnsupportedDimension { op: "Hodge star", n });
    }
    wedge4_element(n, [0, 1, 2, 3])
}

/// Orthonormal pair `(x, y)` spanning a 2-plane.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoPlane {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl TwoPlane {
    /// Rejects pairs whose orthonormality defect exceeds `1e-12`.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: y.len(),
            });
        }
        let xv = DVector::from_column_slice(&x);
        let yv = DVector::from_column_slice(&y);
        let defect = (xv.norm_squared() - 1.0)
            .abs()
            .max((yv.norm_squared() - 1.0).abs())
            .max(xv.dot(&yv).abs());
        if defect > 1e-12 {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(Self { x, y })
    }

    /// Gram–Schmidt on a linearly independent pair.
    pub fn spanned_by(x: &[f64], y: &[f64]) -> Result<Self> {
        let xv = DVector::from_column_slice(x);
        let yv = DVector::from_column_slice(y);
        let nx = xv.norm();
        if nx < 1e-300 {
            return Err(Error::Degenerate("zero vector cannot span a plane"));
        }
        let u = xv / nx;
        let w = &yv - &u * u.dot(&yv);
        let nw = w.norm();
        if nw < 1e-12 * yv.norm().max(1.0) {
            return Err(Error::Degenerate("vectors are linearly dependent"));
        }
        let v = w / nw;
        Self::new(u.iter().copied().collect(), v.iter().copied().collect())
    }

    /// Coordinate plane `span(e_i, e_j)`.
    pub fn coordinate(n: usize, i: usize, j: usize) -> Result<Self> {
        let mut x = vec![0.0; n];
        let mut y = vec![0.0; n];
        if i == j || i >= n || j >= n {
            return Err(Error::Degenerate("coordinate plane needs two distinct axes"));
        }
        x[i] = 1.0;
        y[j] = 1.0;
        Self::new(x, y)
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Pair coordinates of `x∧y`: `w_jk = x_j y_k − x_k y_j`.
    pub fn bivector(&self) -> DVector<f64> {
        bivector(&self.x, &self.y)
    }
}

/// Pair coordinates of `x∧y` for arbitrary vectors.
pub fn bivector(x: &[f64], y: &[f64]) -> DVector<f64> {
    let n = x.len();
    DVector::from_iterator(
        n * (n - 1) / 2,
        pairs(n).into_iter().map(|(j, k)| x[j] * y[k] - x[k] * y[j]),
    )
}

/// `sec_R(σ) = ⟨R(x∧y), x∧y⟩`.
pub fn sec(r: &CurvatureOperator, sigma: &TwoPlane) -> Result<f64> {
    if sigma.n() != r.n() {
        return Err(Error::DimensionMismatch {
            expected: r.n(),
            found: sigma.n(),
        });
    }
    Ok(r.form(&sigma.bivector()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ricci_of_identity() {
        let r = CurvatureOperator::identity(4);
        assert_eq!(ricci(&r), DMatrix::identity(4, 4) * 3.0);
        assert_eq!(scalar(&r), 12.0);
    }

    #[test]
    fn star_is_ricci_flat() {
        let r = hodge_star(4).unwrap();
        assert_eq!(max_abs(&ricci(&r)), 0.0);
    }

    #[test]
    fn entry_signs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = CurvatureOperator::random(&mut rng, 4);
        assert_eq!(r.entry(1, 0, 2, 3), -r.entry(0, 1, 2, 3));
        assert_eq!(r.entry(1, 0, 3, 2), r.entry(0, 1, 2, 3));
        assert_eq!(r.entry(2, 2, 0, 1), 0.0);
    }

    #[test]
    fn ingestion_symmetrizes() {
        let mut m = DMatrix::identity(3, 3);
        m[(0, 1)] = 1.0;
        let r = CurvatureOperator::new(3, m).unwrap();
        assert_eq!(r.matrix()[(0, 1)], 0.5);
        assert_eq!(r.ingest_asymmetry(), 1.0);
        assert!(CurvatureOperator::new(4, DMatrix::zeros(5, 5)).is_err());
    }

    #[test]
    fn identity_is_pure_scalar() {
        let r = CurvatureOperator::identity(4);
        let d = decompose(&r).unwrap();
        assert!(max_abs(&(d.r_u.matrix() - r.matrix())) < 1e-14);
        for part in [&d.r_l, &d.r_w, &d.r_w4] {
            assert!(part.norm() < 1e-14);
        }
    }

    #[test]
    fn star_is_pure_wedge4() {
        let r = hodge_star(4).unwrap();
        let d = decompose(&r).unwrap();
        assert!(max_abs(&(d.r_w4.matrix() - r.matrix())) < 1e-14);
        for part in [&d.r_u, &d.r_l, &d.r_w] {
            assert!(part.norm() < 1e-14);
        }
    }

    #[test]
    fn dimension_three_degrades() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = CurvatureOperator::random(&mut rng, 3);
        let d = decompose(&r).unwrap();
        assert!(d.degraded);
        assert!(d.reconstruction_error(&r) < 1e-12);
        assert!(decompose(&CurvatureOperator::identity(2)).is_err());
    }

    #[test]
    fn sectional_curvatures() {
        let id = CurvatureOperator::identity(4);
        let sigma = TwoPlane::spanned_by(&[1.0, 2.0, 0.0, -1.0], &[0.0, 1.0, 3.0, 1.0]).unwrap();
        assert!((sec(&id, &sigma).unwrap() - 1.0).abs() < 1e-14);
        let star = hodge_star(4).unwrap();
        assert!(sec(&star, &sigma).unwrap().abs() < 1e-14);
    }

    #[test]
    fn planes_must_be_orthonormal() {
        assert!(matches!(
            TwoPlane::new(vec![1.0, 0.0], vec![1.0, 1.0]),
            Err(Error::NotOrthonormal { .. })
        ));
        assert!(TwoPlane::spanned_by(&[1.0, 0.0], &[2.0, 0.0]).is_err());
    }
}
