use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{binomial, gram_compensated, orthonormal_columns, SparseMatrix};

use super::index::{sort_with_sign, MultiIndex, WedgeIndex};
use super::polynomial::Polynomial;

/// Which power of the defining representation a [`RepSpace`] realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p", rename_all = "snake_case")]
pub enum RepKind {
    Exterior(usize),
    Symmetric(usize),
    TracelessSymmetric(usize),
}

impl RepKind {
    pub fn degree(&self) -> usize {
        match *self {
            RepKind::Exterior(p) | RepKind::Symmetric(p) | RepKind::TracelessSymmetric(p) => p,
        }
    }
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepKind::Exterior(p) => write!(f, "∧^{p}"),
            RepKind::Symmetric(p) => write!(f, "Sym^{p}"),
            RepKind::TracelessSymmetric(p) => write!(f, "Sym^{p}_0"),
        }
    }
}

/// Dimension of the space without building it.
pub fn rep_dimension(kind: RepKind, n: usize) -> usize {
    match kind {
        RepKind::Exterior(p) => binomial(n, p),
        RepKind::Symmetric(p) => sym_dim(n, p),
        RepKind::TracelessSymmetric(p) => sym_dim(n, p) - if p >= 2 { sym_dim(n, p - 2) } else { 0 },
    }
}

fn sym_dim(n: usize, p: usize) -> usize {
    if n == 0 {
        return usize::from(p == 0);
    }
    binomial(n + p - 1, p)
}

/// Ordered pairs `(i, j)`, `i < j`, indexing the orthonormal basis `E_ij` of 𝔰𝔬(n).
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// Position of the pair `(i, j)` (with `i < j`) in [`pairs`].
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Orthonormal basis labels of a [`RepSpace`].
#[derive(Clone, Debug, PartialEq)]
pub enum BasisLabels {
    Wedge(Vec<WedgeIndex>),
    /// Normalized monomials `u_ℓ = x^ℓ / √ℓ!`.
    Monomial(Vec<MultiIndex>),
    /// Harmonic basis vectors, given as columns over the ambient monomials.
    Harmonic,
}

/// A concrete orthonormal realization of `∧ᵖℝⁿ`, `Symᵖℝⁿ` or `Symᵖ₀ℝⁿ`
/// together with the matrices `D_ij` of `dρ(E_ij)`.
///
/// Immutable after construction; shared through [`Arc`] from the cached
/// constructors ([`RepSpace::exterior`] and friends).
pub struct RepSpace {
    kind: RepKind,
    n: usize,
    dim: usize,
    labels: BasisLabels,
    lookup: HashMap<Vec<u32>, usize>,
    ambient: Option<Arc<RepSpace>>,
    /// `ambient_dim × dim`, orthonormal columns spanning the harmonic subspace.
    change_of_basis: Option<DMatrix<f64>>,
    generators: OnceLock<Vec<SparseMatrix>>,
}

impl fmt::Debug for RepSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RepSpace")
            .field("kind", &self.kind)
            .field("n", &self.n)
            .field("dim", &self.dim)
            .finish()
    }
}

type CacheKey = (RepKind, usize);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<RepSpace>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<RepSpace>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(kind: RepKind, n: usize, build: impl FnOnce() -> Result<RepSpace>) -> Result<Arc<RepSpace>> {
    if let Some(space) = cache().lock().expect("space cache poisoned").get(&(kind, n)) {
        return Ok(space.clone());
    }
    // Built outside the lock: traceless spaces recursively request their ambient space.
    let space = Arc::new(build()?);
    let mut guard = cache().lock().expect("space cache poisoned");
    Ok(guard.entry((kind, n)).or_insert(space).clone())
}

impl RepSpace {
    /// Shared `∧ᵖℝⁿ`.
    pub fn exterior(n: usize, p: usize) -> Result<Arc<RepSpace>> {
        cached(RepKind::Exterior(p), n, || build_exterior(n, p))
    }

    /// Shared `Symᵖℝⁿ`.
    pub fn symmetric(n: usize, p: usize) -> Result<Arc<RepSpace>> {
        cached(RepKind::Symmetric(p), n, || build_symmetric(n, p))
    }

    /// Shared `Symᵖ₀ℝⁿ`.
    pub fn traceless(n: usize, p: usize) -> Result<Arc<RepSpace>> {
        cached(RepKind::TracelessSymmetric(p), n, || build_traceless(n, p))
    }

    pub fn of_kind(kind: RepKind, n: usize) -> Result<Arc<RepSpace>> {
        match kind {
            RepKind::Exterior(p) => Self::exterior(n, p),
            RepKind::Symmetric(p) => Self::symmetric(n, p),
            RepKind::TracelessSymmetric(p) => Self::traceless(n, p),
        }
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.kind.degree()
    }

    pub fn labels(&self) -> &BasisLabels {
        &self.labels
    }

    /// Full `Symᵖ` containing a traceless space.
    pub fn ambient(&self) -> Option<&Arc<RepSpace>> {
        self.ambient.as_ref()
    }

    /// For traceless spaces, the `dim Symᵖ × dim` matrix whose orthonormal
    /// columns are the harmonic basis in normalized-monomial coordinates.
    pub fn change_of_basis(&self) -> Option<&DMatrix<f64>> {
        self.change_of_basis.as_ref()
    }

    /// Position of a wedge label.
    pub fn wedge_position(&self, w: &WedgeIndex) -> Option<usize> {
        match self.labels {
            BasisLabels::Wedge(_) => {
                let key: Vec<u32> = w.indices().iter().map(|&i| i as u32).collect();
                self.lookup.get(&key).copied()
            }
            _ => None,
        }
    }

    /// Position of a monomial label in a full symmetric power.
    pub fn monomial_position(&self, m: &MultiIndex) -> Option<usize> {
        match self.labels {
            BasisLabels::Monomial(_) => self.lookup.get(m.exponents()).copied(),
            _ => None,
        }
    }

    /// The generator `D_ij` for the pair with index `a` in [`pairs`].
    pub fn generator(&self, a: usize) -> &SparseMatrix {
        &self.generators()[a]
    }

    /// All generators in pair order.
    pub fn generators(&self) -> &[SparseMatrix] {
        self.generators.get_or_init(|| {
            let ambient = self.ambient.as_ref().expect("only traceless spaces build lazily");
            let c = self.change_of_basis.as_ref().expect("traceless spaces carry a basis");
            ambient
                .generators()
                .iter()
                .map(|d| SparseMatrix::from_dense(&(c.transpose() * d.mul_dense(c))))
                .collect()
        })
    }

    /// Coordinates of a homogeneous polynomial in this space's orthonormal basis.
    ///
    /// For traceless spaces the polynomial must be harmonic (relative residual
    /// at most `1e-9`).
    pub fn polynomial_coords(&self, phi: &Polynomial) -> Result<DVector<f64>> {
        match self.kind {
            RepKind::Exterior(_) => Err(Error::UnsupportedDimension {
                op: "polynomial coordinates on an exterior power",
                n: self.n,
            }),
            RepKind::Symmetric(p) => {
                check_poly(phi, self.n, p)?;
                let mut v = DVector::zeros(self.dim);
                for (m, c) in phi.terms() {
                    let pos = self.monomial_position(m).expect("degree checked");
                    v[pos] = c * m.factorial().sqrt();
                }
                Ok(v)
            }
            RepKind::TracelessSymmetric(_) => {
                let ambient = self.ambient.as_ref().expect("traceless has ambient");
                let full = ambient.polynomial_coords(phi)?;
                let c = self.change_of_basis.as_ref().expect("traceless has basis");
                let coords = c.transpose() * &full;
                let residual = (&full - c * &coords).norm();
                let scale = full.norm().max(1e-300);
                if residual > 1e-9 * scale {
                    return Err(Error::NotHarmonic {
                        residual: residual / scale,
                    });
                }
                Ok(coords)
            }
        }
    }

    /// Inverse of [`RepSpace::polynomial_coords`].
    pub fn coords_to_polynomial(&self, coords: &DVector<f64>) -> Result<Polynomial> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: coords.len(),
            });
        }
        match (&self.kind, &self.labels) {
            (RepKind::Symmetric(p), BasisLabels::Monomial(monos)) => {
                let terms = monos
                    .iter()
                    .zip(coords.iter())
                    .map(|(m, &c)| (m.clone(), c / m.factorial().sqrt()));
                Polynomial::from_terms(self.n, *p, terms)
            }
            (RepKind::TracelessSymmetric(_), _) => {
                let c = self.change_of_basis.as_ref().expect("traceless has basis");
                self.ambient
                    .as_ref()
                    .expect("traceless has ambient")
                    .coords_to_polynomial(&(c * coords))
            }
            _ => Err(Error::UnsupportedDimension {
                op: "polynomial from exterior coordinates",
                n: self.n,
            }),
        }
    }

    /// Coordinates of `Σ c · e_{i₁} ∧ … ∧ e_{i_p}` given unsorted index lists.
    pub fn wedge_coords(&self, terms: &[(f64, Vec<usize>)]) -> Result<DVector<f64>> {
        let RepKind::Exterior(p) = self.kind else {
            return Err(Error::UnsupportedDimension {
                op: "wedge coordinates on a symmetric power",
                n: self.n,
            });
        };
        let mut v = DVector::zeros(self.dim);
        for (c, idx) in terms {
            if idx.len() != p || idx.iter().any(|&i| i >= self.n) {
                return Err(Error::GradeOutOfRange {
                    p: idx.len(),
                    n: self.n,
                    context: "wedge term does not match the space",
                });
            }
            let mut sorted = idx.clone();
            if let Some(sign) = sort_with_sign(&mut sorted) {
                let w = WedgeIndex::new(sorted, self.n)?;
                let pos = self.wedge_position(&w).expect("validated index");
                v[pos] += sign * c;
            }
        }
        Ok(v)
    }

    /// Matrix of `ρ(Q)` for an orthogonal `Q`, in this space's basis.
    pub fn rho(&self, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if q.nrows() != self.n || q.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: q.nrows(),
            });
        }
        match &self.labels {
            BasisLabels::Wedge(ws) => Ok(DMatrix::from_fn(self.dim, self.dim, |r, c| {
                let rows = ws[r].indices();
                let cols = ws[c].indices();
                let minor = DMatrix::from_fn(rows.len(), cols.len(), |a, b| q[(rows[a], cols[b])]);
                if minor.nrows() == 0 {
                    1.0
                } else {
                    minor.determinant()
                }
            })),
            BasisLabels::Monomial(monos) => {
                // (ρ(Q)φ)(x) = φ(Qᵀx): x_i ↦ Σ_k Q_ki x_k.
                let images: Vec<Polynomial> = (0..self.n)
                    .map(|i| Polynomial::linear(&q.column(i).iter().copied().collect::<Vec<_>>()))
                    .collect();
                let mut out = DMatrix::zeros(self.dim, self.dim);
                for (c, m) in monos.iter().enumerate() {
                    let mut img = Polynomial::monomial(MultiIndex::zero(self.n), 1.0);
                    for (i, &e) in m.exponents().iter().enumerate() {
                        for _ in 0..e {
                            img = img.mul(&images[i]);
                        }
                    }
                    let coords = self.polynomial_coords(&img)?;
                    let scale = 1.0 / m.factorial().sqrt();
                    out.set_column(c, &(coords * scale));
                }
                Ok(out)
            }
            BasisLabels::Harmonic => {
                let full = self.ambient.as_ref().expect("traceless has ambient").rho(q)?;
                let c = self.change_of_basis.as_ref().expect("traceless has basis");
                Ok(c.transpose() * full * c)
            }
        }
    }

    /// Orthogonal projector onto the harmonic subspace, in ambient coordinates.
    pub fn harmonic_projector(&self) -> Option<DMatrix<f64>> {
        self.change_of_basis.as_ref().map(|c| c * c.transpose())
    }
}

fn check_poly(phi: &Polynomial, n: usize, p: usize) -> Result<()> {
    if phi.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: phi.n(),
        });
    }
    if phi.degree() != p {
        return Err(Error::NonHomogeneous { expected: p });
    }
    Ok(())
}

fn lookup_from<'a>(keys: impl Iterator<Item = Vec<u32>> + 'a) -> HashMap<Vec<u32>, usize> {
    keys.enumerate().map(|(i, k)| (k, i)).collect()
}

/// `∧ᵖℝⁿ` with `D_ij` from the Leibniz rule; entries are exactly `0, ±1`.
pub fn build_exterior(n: usize, p: usize) -> Result<RepSpace> {
    if p > n {
        return Err(Error::GradeOutOfRange {
            p,
            n,
            context: "exterior power needs p ≤ n",
        });
    }
    let basis = WedgeIndex::enumerate(n, p);
    let lookup = lookup_from(basis.iter().map(|w| w.indices().iter().map(|&i| i as u32).collect()));
    let dim = basis.len();
    let mut generators = Vec::new();
    for (i, j) in pairs(n) {
        let mut triplets = Vec::new();
        for (col, w) in basis.iter().enumerate() {
            let idx = w.indices();
            for (slot, &k) in idx.iter().enumerate() {
                // E_ij e_k = δ_jk e_i − δ_ik e_j
                let (target, coef) = if k == j {
                    (i, 1.0)
                } else if k == i {
                    (j, -1.0)
                } else {
                    continue;
                };
                let mut img = idx.to_vec();
                img[slot] = target;
                if let Some(sign) = sort_with_sign(&mut img) {
                    let key: Vec<u32> = img.iter().map(|&x| x as u32).collect();
                    triplets.push((lookup[&key], col, sign * coef));
                }
            }
        }
        generators.push(SparseMatrix::from_triplets(dim, dim, &triplets));
    }
    let cell = OnceLock::new();
    let _ = cell.set(generators);
    Ok(RepSpace {
        kind: RepKind::Exterior(p),
        n,
        dim,
        labels: BasisLabels::Wedge(basis),
        lookup,
        ambient: None,
        change_of_basis: None,
        generators: cell,
    })
}

/// `Symᵖℝⁿ` in the orthonormal basis `u_ℓ = x^ℓ/√ℓ!`.
///
/// In monomials `D_ij x^ℓ = ℓ_j x^{ℓ+e_i−e_j} − ℓ_i x^{ℓ−e_i+e_j}` has integer
/// coefficients; after rescaling each entry is the square root of an integer,
/// `√(ℓ_j(ℓ_i+1))` and `−√(ℓ_i(ℓ_j+1))`, so skewness holds bit-exactly.
pub fn build_symmetric(n: usize, p: usize) -> Result<RepSpace> {
    if n == 0 {
        return Err(Error::UnsupportedDimension {
            op: "symmetric power",
            n,
        });
    }
    let basis = MultiIndex::enumerate(n, p);
    let lookup = lookup_from(basis.iter().map(|m| m.exponents().to_vec()));
    let dim = basis.len();
    let mut generators = Vec::new();
    for (i, j) in pairs(n) {
        let mut triplets = Vec::new();
        for (col, m) in basis.iter().enumerate() {
            let e = m.exponents();
            let (li, lj) = (e[i] as u64, e[j] as u64);
            if let Some(up) = m.shifted(i, j) {
                let exact = lj * (li + 1);
                triplets.push((lookup[up.exponents()], col, (exact as f64).sqrt()));
            }
            if let Some(down) = m.shifted(j, i) {
                let exact = li * (lj + 1);
                triplets.push((lookup[down.exponents()], col, -(exact as f64).sqrt()));
            }
        }
        generators.push(SparseMatrix::from_triplets(dim, dim, &triplets));
    }
    let cell = OnceLock::new();
    let _ = cell.set(generators);
    Ok(RepSpace {
        kind: RepKind::Symmetric(p),
        n,
        dim,
        labels: BasisLabels::Monomial(basis),
        lookup,
        ambient: None,
        change_of_basis: None,
        generators: cell,
    })
}

/// Matrix of multiplication by `r²` from `Sym^{p-2}` to `Symᵖ`, orthonormal bases.
pub fn r_squared_multiplication(n: usize, p: usize) -> Result<DMatrix<f64>> {
    if p < 2 {
        return Err(Error::GradeOutOfRange {
            p,
            n,
            context: "r² multiplication targets degree ≥ 2",
        });
    }
    let target = RepSpace::symmetric(n, p)?;
    let source = RepSpace::symmetric(n, p - 2)?;
    let BasisLabels::Monomial(src) = source.labels() else {
        unreachable!("symmetric spaces carry monomial labels")
    };
    let mut m = DMatrix::zeros(target.dim(), source.dim());
    for (col, mono) in src.iter().enumerate() {
        for k in 0..n {
            let mut e = mono.exponents().to_vec();
            let mk = e[k] as f64;
            e[k] += 2;
            let row = target
                .monomial_position(&MultiIndex::new(e))
                .expect("degree p monomial");
            m[(row, col)] = ((mk + 1.0) * (mk + 2.0)).sqrt();
        }
    }
    Ok(m)
}

/// Least-squares remover of the `r² ∨ Sym^{p-2}` component: returns
/// `v − M (MᵀM)⁻¹ Mᵀ v` for each column `v` (coordinates in `Symᵖ`).
fn strip_r_squared(n: usize, p: usize, v: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if p < 2 {
        return Ok(v.clone());
    }
    let m = r_squared_multiplication(n, p)?;
    let gram = m.transpose() * &m;
    let chol = gram
        .cholesky()
        .ok_or(Error::Degenerate("r² multiplication is not injective"))?;
    let coef = chol.solve(&(m.transpose() * v));
    Ok(v - m * coef)
}

/// `Symᵖ₀ℝⁿ`: the orthogonal complement of `r² ∨ Sym^{p−2}` inside `Symᵖ`.
///
/// The basis is obtained by projecting the monomials with `ℓ₁ ≤ 1` (which
/// restrict isomorphically onto the harmonic space) and orthonormalizing by QR.
pub fn build_traceless(n: usize, p: usize) -> Result<RepSpace> {
    if n < 2 {
        return Err(Error::UnsupportedDimension {
            op: "traceless symmetric power",
            n,
        });
    }
    let ambient = RepSpace::symmetric(n, p)?;
    let dim = rep_dimension(RepKind::TracelessSymmetric(p), n);
    let BasisLabels::Monomial(monos) = ambient.labels() else {
        unreachable!("symmetric spaces carry monomial labels")
    };
    let seeds: Vec<usize> = monos
        .iter()
        .enumerate()
        .filter(|(_, m)| m.exponents()[0] <= 1)
        .map(|(i, _)| i)
        .collect();
    debug_assert_eq!(seeds.len(), dim);
    let mut select = DMatrix::zeros(ambient.dim(), seeds.len());
    for (c, &r) in seeds.iter().enumerate() {
        select[(r, c)] = 1.0;
    }
    let projected = strip_r_squared(n, p, &select)?;
    let basis = polish_harmonic(n, p, orthonormal_columns(&projected))?;
    Ok(RepSpace {
        kind: RepKind::TracelessSymmetric(p),
        n,
        dim,
        labels: BasisLabels::Harmonic,
        lookup: HashMap::new(),
        ambient: Some(ambient),
        change_of_basis: Some(basis),
        generators: OnceLock::new(),
    })
}

/// One correction step on a nearly harmonic, nearly orthonormal basis, with
/// residuals measured in compensated arithmetic. It brings both defects down
/// to rounding level, which the quadratic forms of large-degree spaces need.
fn polish_harmonic(n: usize, p: usize, mut c: DMatrix<f64>) -> Result<DMatrix<f64>> {
    if p >= 2 {
        let m = r_squared_multiplication(n, p)?;
        let chol = (m.transpose() * &m)
            .cholesky()
            .ok_or(Error::Degenerate("r² multiplication is not injective"))?;
        c -= &m * chol.solve(&gram_compensated(&m, &c));
    }
    let mut defect = gram_compensated(&c, &c);
    for i in 0..defect.nrows() {
        defect[(i, i)] -= 1.0;
    }
    c -= &c * defect * 0.5;
    Ok(c)
}

/// Orthogonal projection `φ ↦ φ₀` onto harmonic polynomials.
pub fn harmonic_projection(phi: &Polynomial) -> Result<Polynomial> {
    let n = phi.n();
    let p = phi.degree();
    let space = RepSpace::symmetric(n, p)?;
    let coords = space.polynomial_coords(phi)?;
    let v = DMatrix::from_column_slice(coords.len(), 1, coords.as_slice());
    let stripped = strip_r_squared(n, p, &v)?;
    space.coords_to_polynomial(&stripped.column(0).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, max_abs_diff};

    #[test]
    fn pair_index_matches_enumeration() {
        for n in 2..8 {
            for (a, (i, j)) in pairs(n).into_iter().enumerate() {
                assert_eq!(pair_index(n, i, j), a);
            }
        }
    }

    #[test]
    fn leibniz_single_term() {
        // D₁₂(e₁∧e₃) = −e₂∧e₃
        let s = RepSpace::exterior(4, 2).unwrap();
        let col = s.wedge_position(&WedgeIndex::new(vec![0, 2], 4).unwrap()).unwrap();
        let row = s.wedge_position(&WedgeIndex::new(vec![1, 2], 4).unwrap()).unwrap();
        let d = s.generator(pair_index(4, 0, 1)).to_dense();
        assert_eq!(d[(row, col)], -1.0);
        assert_eq!(d.column(col).iter().filter(|v| **v != 0.0).count(), 1);
    }

    #[test]
    fn top_power_is_infinitesimally_trivial() {
        let s = RepSpace::exterior(4, 4).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.generators().iter().all(|d| d.nnz() == 0));
    }

    #[test]
    fn defining_representation_generator() {
        let s = RepSpace::symmetric(2, 1).unwrap();
        let d = s.generator(0).to_dense();
        assert_eq!(d, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        let w = RepSpace::exterior(2, 1).unwrap();
        assert_eq!(w.generator(0).to_dense(), d);
    }

    #[test]
    fn symmetric_generators_skew_exactly() {
        let s = RepSpace::symmetric(4, 3).unwrap();
        for d in s.generators() {
            let dense = d.to_dense();
            assert_eq!(max_abs(&(&dense + dense.transpose())), 0.0);
        }
    }

    #[test]
    fn traceless_dimensions_and_orthonormality() {
        let s = RepSpace::traceless(4, 2).unwrap();
        assert_eq!(s.dim(), 9);
        let c = s.change_of_basis().unwrap();
        let id = DMatrix::<f64>::identity(9, 9);
        assert!(max_abs_diff(&(c.transpose() * c), &id) < 1e-12);
    }

    #[test]
    fn projection_of_r_squared_vanishes() {
        let r2 = Polynomial::r_squared(4);
        assert!(harmonic_projection(&r2).unwrap().max_coefficient() < 1e-14);
    }

    #[test]
    fn coordinates_round_trip() {
        let s = RepSpace::traceless(3, 3).unwrap();
        let phi = Polynomial::re_power(3, 3);
        let v = s.polynomial_coords(&phi).unwrap();
        let back = s.coords_to_polynomial(&v).unwrap();
        assert!(back.add_scaled(&phi, -1.0).unwrap().max_coefficient() < 1e-12);
        assert!((v.norm_squared() - phi.norm_squared()).abs() < 1e-10);
    }

    #[test]
    fn non_harmonic_input_rejected() {
        let s = RepSpace::traceless(3, 2).unwrap();
        let err = s.polynomial_coords(&Polynomial::r_squared(3)).unwrap_err();
        assert!(matches!(err, Error::NotHarmonic { .. }));
    }

    #[test]
    fn exterior_grade_validation() {
        assert!(build_exterior(3, 4).is_err());
        assert_eq!(build_exterior(3, 0).unwrap().dim(), 1);
    }
}
