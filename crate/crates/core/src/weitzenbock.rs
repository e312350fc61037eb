//! The curvature term `K(R,ρ) = −Σ_{a,b} R_ab dρ(X_a) dρ(X_b)`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::curvature::{ricci, CurvatureOperator};
use crate::error::{ensure_within, Error, Result};
use crate::linalg::{asymmetry, max_abs, orthonormal_columns, spectral_distance, spectrum, symmetrize, SparseMatrix};
use crate::multilinear::{Polynomial, RepKind, RepSpace};

/// Symmetric matrix on a [`RepSpace`].
#[derive(Clone, Debug)]
pub struct SymmetricEndomorphism {
    space: Arc<RepSpace>,
    mat: DMatrix<f64>,
    symmetry_defect: f64,
}

impl SymmetricEndomorphism {
    /// Symmetrizes `mat`, keeping the defect; rejects defects above `1e-10`.
    pub fn new(space: Arc<RepSpace>, mat: DMatrix<f64>) -> Result<Self> {
        if mat.nrows() != space.dim() || mat.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: mat.nrows(),
            });
        }
        let symmetry_defect = asymmetry(&mat);
        let scale = max_abs(&mat).max(1.0);
        ensure_within("endomorphism symmetry", symmetry_defect / scale, 1e-10)?;
        Ok(Self {
            space,
            mat: symmetrize(&mat),
            symmetry_defect,
        })
    }

    pub fn space(&self) -> &Arc<RepSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    /// Largest `|K_ab − K_ba|` before symmetrization.
    pub fn symmetry_defect(&self) -> f64 {
        self.symmetry_defect
    }

    /// Eigenvalues, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        spectrum(&self.mat)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum().first().copied().unwrap_or(f64::INFINITY)
    }
}

fn check_dims(r: &CurvatureOperator, space: &RepSpace) -> Result<()> {
    if r.n() != space.n() {
        return Err(Error::DimensionMismatch {
            expected: space.n(),
            found: r.n(),
        });
    }
    Ok(())
}

/// `K(R, V)`.
///
/// Exterior and full symmetric powers are assembled column by column from
/// the sparse generators. On `Symᵖ₀` the full-space term is conjugated by the
/// harmonic basis, which is exact because every `D_ij` preserves harmonics.
pub fn curvature_term(r: &CurvatureOperator, space: &Arc<RepSpace>) -> Result<SymmetricEndomorphism> {
    check_dims(r, space)?;
    match space.kind() {
        RepKind::TracelessSymmetric(_) => {
            let ambient = space.ambient().expect("traceless space has an ambient");
            let full = assemble(r, ambient.generators(), ambient.dim());
            let c = space.change_of_basis().expect("traceless space carries a basis");
            let k = c.transpose() * full * c;
            SymmetricEndomorphism::new(space.clone(), k)
        }
        _ => SymmetricEndomorphism::new(space.clone(), assemble(r, space.generators(), space.dim())),
    }
}

/// `K(R, V)` straight from the generators of `V` itself; on traceless spaces
/// this uses the conjugated (dense) generators and serves as a cross-check.
pub fn curvature_term_direct(r: &CurvatureOperator, space: &Arc<RepSpace>) -> Result<SymmetricEndomorphism> {
    check_dims(r, space)?;
    SymmetricEndomorphism::new(space.clone(), assemble(r, space.generators(), space.dim()))
}

fn assemble(r: &CurvatureOperator, gens: &[SparseMatrix], dim: usize) -> DMatrix<f64> {
    let rm = r.matrix();
    let npairs = gens.len();
    let columns: Vec<DVector<f64>> = (0..dim)
        .into_par_iter()
        .map(|col| {
            let mut out = DVector::zeros(dim);
            for b in 0..npairs {
                let dbphi = gens[b].col(col);
                if dbphi.is_empty() {
                    continue;
                }
                for a in 0..npairs {
                    let rab = rm[(a, b)];
                    if rab == 0.0 {
                        continue;
                    }
                    for &(mid, v) in dbphi {
                        for &(row, w) in gens[a].col(mid) {
                            out[row] -= rab * w * v;
                        }
                    }
                }
            }
            out
        })
        .collect();
    DMatrix::from_columns(&columns)
}

/// `⟨Kφ, φ⟩` for coordinates in the space's orthonormal basis.
pub fn quadratic_form(k: &SymmetricEndomorphism, phi: &DVector<f64>) -> Result<f64> {
    bilinear_form(k, phi, phi)
}

/// `⟨Kφ, ψ⟩`.
pub fn bilinear_form(k: &SymmetricEndomorphism, phi: &DVector<f64>, psi: &DVector<f64>) -> Result<f64> {
    let dim = k.space.dim();
    for v in [phi, psi] {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
    }
    Ok(psi.dot(&(&k.mat * phi)))
}

/// Orthonormal basis of `Symᵖ` adapted to `Symᵖ₀ ⊕ r²Symᵖ⁻²₀ ⊕ r⁴Symᵖ⁻⁴₀ ⊕ …`;
/// returns `(k, columns)` per block in that order.
pub fn harmonic_tower(n: usize, p: usize) -> Result<Vec<(usize, DMatrix<f64>)>> {
    let full = RepSpace::symmetric(n, p)?;
    let mut out = Vec::new();
    let mut j = 0;
    while 2 * j <= p {
        let k = p - 2 * j;
        let h = RepSpace::traceless(n, k)?;
        let mut r2j = Polynomial::monomial(crate::multilinear::MultiIndex::zero(n), 1.0);
        for _ in 0..j {
            r2j = r2j.mul(&Polynomial::r_squared(n));
        }
        let mut cols = DMatrix::zeros(full.dim(), h.dim());
        for c in 0..h.dim() {
            let e = DVector::from_fn(h.dim(), |i, _| if i == c { 1.0 } else { 0.0 });
            let poly = h.coords_to_polynomial(&e)?.mul(&r2j);
            cols.set_column(c, &full.polynomial_coords(&poly)?);
        }
        out.push((k, orthonormal_columns(&cols)));
        j += 1;
    }
    Ok(out)
}

/// Diagonal blocks of `K(R, Symᵖ)` in the harmonic tower basis, labelled by
/// the harmonic degree `k` (block `k` is similar to `K(R, Symᵏ₀)`).
///
/// Fails if an off-diagonal block exceeds `1e-9` or a block spectrum differs
/// from the directly built `K(R, Symᵏ₀)` by more than `1e-8`.
pub fn block_structure(r: &CurvatureOperator, p: usize) -> Result<Vec<(usize, SymmetricEndomorphism)>> {
    let n = r.n();
    let full = RepSpace::symmetric(n, p)?;
    let k_full = curvature_term(r, &full)?;
    let tower = harmonic_tower(n, p)?;
    let t = DMatrix::from_columns(
        &tower
            .iter()
            .flat_map(|(_, b)| b.column_iter().map(|c| c.into_owned()))
            .collect::<Vec<_>>(),
    );
    let conj = t.transpose() * k_full.matrix() * &t;
    let scale = max_abs(k_full.matrix()).max(1.0);

    let mut offsets = Vec::with_capacity(tower.len());
    let mut at = 0;
    for (_, b) in &tower {
        offsets.push((at, b.ncols()));
        at += b.ncols();
    }
    let mut off_diag = 0.0_f64;
    for (bi, &(ri, si)) in offsets.iter().enumerate() {
        for (bj, &(rj, sj)) in offsets.iter().enumerate() {
            if bi != bj {
                off_diag = off_diag.max(max_abs(&conj.view((ri, rj), (si, sj)).into_owned()));
            }
        }
    }
    ensure_within("harmonic blocks decouple", off_diag / scale, 1e-9)?;

    let mut blocks = Vec::with_capacity(tower.len());
    for ((k, _), &(start, size)) in tower.iter().zip(&offsets) {
        let block = conj.view((start, start), (size, size)).into_owned();
        let direct = curvature_term(r, &RepSpace::traceless(n, *k)?)?;
        let dist = spectral_distance(&spectrum(&block), &direct.spectrum());
        ensure_within("block spectrum matches the traceless term", dist / scale, 1e-8)?;
        blocks.push((*k, SymmetricEndomorphism::new(direct.space().clone(), block)?));
    }
    Ok(blocks)
}

/// `(λ_m, ⟨K(R,Sym²₀)φ_m, φ_m⟩)` for the Ricci eigenpairs `(λ_m, v_m)` and
/// `φ_m = v_m∨v_m − g/n`; asserts the form equals `4λ_m` to `1e-8`.
pub fn berger_diagonal(r: &CurvatureOperator) -> Result<Vec<(f64, f64)>> {
    let n = r.n();
    let space = RepSpace::traceless(n, 2)?;
    let k = curvature_term(r, &space)?;
    let eig = nalgebra::SymmetricEigen::new(ricci(r));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut out = Vec::with_capacity(n);
    for m in order {
        let lambda = eig.eigenvalues[m];
        let v: Vec<f64> = eig.eigenvectors.column(m).iter().copied().collect();
        let lin = Polynomial::linear(&v);
        let phi = lin.mul(&lin).add_scaled(&Polynomial::r_squared(n), -1.0 / n as f64)?;
        let value = quadratic_form(&k, &space.polynomial_coords(&phi)?)?;
        let scale = lambda.abs().max(1.0);
        ensure_within("Berger identity", (value - 4.0 * lambda).abs() / scale, 1e-8)?;
        out.push((lambda, value));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn defining_representation_gives_ricci() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = CurvatureOperator::random(&mut rng, 5);
        let k = curvature_term(&r, &RepSpace::exterior(5, 1).unwrap()).unwrap();
        assert!(max_abs_diff(k.matrix(), &ricci(&r)) < 1e-12);
    }

    #[test]
    fn casimir_on_spin_two() {
        let space = RepSpace::traceless(3, 2).unwrap();
        let k = curvature_term(&CurvatureOperator::identity(3), &space).unwrap();
        assert!(max_abs_diff(k.matrix(), &(DMatrix::identity(5, 5) * 6.0)) < 1e-12);
    }

    #[test]
    fn traceless_fast_path_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let r = CurvatureOperator::random(&mut rng, 4);
        let space = RepSpace::traceless(4, 3).unwrap();
        let fast = curvature_term(&r, &space).unwrap();
        let direct = curvature_term_direct(&r, &space).unwrap();
        assert!(max_abs_diff(fast.matrix(), direct.matrix()) < 1e-10);
    }

    #[test]
    fn blocks_for_quadratics() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = CurvatureOperator::random(&mut rng, 4);
        let blocks = block_structure(&r, 2).unwrap();
        assert_eq!(
            blocks.iter().map(|(k, b)| (*k, b.space().dim())).collect::<Vec<_>>(),
            vec![(2, 9), (0, 1)]
        );
        assert!(blocks[1].1.matrix()[(0, 0)].abs() < 1e-12);
    }

    #[test]
    fn berger_on_identity() {
        for (lambda, value) in berger_diagonal(&CurvatureOperator::identity(4)).unwrap() {
            assert!((lambda - 3.0).abs() < 1e-12);
            assert!((value - 12.0).abs() < 1e-10);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let r = CurvatureOperator::identity(4);
        assert!(curvature_term(&r, &RepSpace::exterior(5, 2).unwrap()).is_err());
        let k = curvature_term(&r, &RepSpace::exterior(4, 2).unwrap()).unwrap();
        assert!(quadratic_form(&k, &DVector::zeros(3)).is_err());
    }
}
