//! Certificates for lower (or upper) bounds on sectional curvature.
//!
//! Three methods are combined:
//! - in dimension 4, the exact one-parameter test: `sec ≥ k` iff
//!   `R − k·Id + t·*` is positive semidefinite for some `t`;
//! - projected-gradient search over orthonormal pairs, which can only refute;
//! - the necessary conditions `K(R − k·Id, Symᵖ₀) ⪰ 0` for finitely many `p`,
//!   which can refute but never certify.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::trial_rng;
use crate::curvature::{hodge_star, CurvatureOperator, TwoPlane};
use crate::error::{ensure_within, Error, Result};
use crate::linalg::{min_eigenpair, min_eigenvalue, spectrum};
use crate::multilinear::{pairs, Polynomial, RepSpace};
use crate::weitzenbock::{curvature_term, quadratic_form};

/// Non-strict Thorpe certification accepts `max μ ≥ −CERTIFY_TOL`; strict needs `≥ +CERTIFY_TOL`.
pub const CERTIFY_TOL: f64 = 1e-9;
/// A plane refutes `sec ≥ k` only when `sec < k − REFUTE_TOL`.
pub const REFUTE_TOL: f64 = 1e-9;
/// The hierarchy refutes when some `λ_min < −HIERARCHY_TOL`.
pub const HIERARCHY_TOL: f64 = 1e-8;
/// Golden-section stopping width in `t`.
pub const THORPE_T_TOL: f64 = 1e-10;
pub const DEFAULT_RESTARTS: usize = 100;
pub const MAX_ITERATIONS: usize = 10_000;
pub const GRADIENT_TOL: f64 = 1e-9;

/// The Hodge star of `∧²ℝ⁴` in the basis `e12, e13, e14, e23, e24, e34`.
#[derive(Clone, Copy, Debug, Default)]
pub struct HodgeStar;

impl HodgeStar {
    pub fn matrix() -> DMatrix<f64> {
        hodge_star(4).expect("n = 4").into_matrix()
    }

    pub fn apply(alpha: &DVector<f64>) -> Result<DVector<f64>> {
        check_bivector(alpha)?;
        Ok(Self::matrix() * alpha)
    }
}

fn check_bivector(alpha: &DVector<f64>) -> Result<()> {
    if alpha.len() != 6 {
        return Err(Error::DimensionMismatch {
            expected: 6,
            found: alpha.len(),
        });
    }
    Ok(())
}

/// `α± = (α ± *α)/2`.
pub fn selfdual_split(alpha: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
    let star = HodgeStar::apply(alpha)?;
    Ok(((alpha + &star) * 0.5, (alpha - &star) * 0.5))
}

/// `⟨K(R,∧²)α, α⟩` for a bivector in dimension 4.
pub fn wedge2_form(r: &CurvatureOperator, alpha: &DVector<f64>) -> Result<f64> {
    check_bivector(alpha)?;
    if r.n() != 4 {
        return Err(Error::UnsupportedDimension {
            op: "self-dual forms",
            n: r.n(),
        });
    }
    let k = curvature_term(r, &RepSpace::exterior(4, 2)?)?;
    quadratic_form(&k, alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `sec ≥ k`
    AtLeast,
    /// `sec ≤ k`
    AtMost,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::AtLeast => 1.0,
            Direction::AtMost => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ThorpeExact,
    GrassmannOpt,
    Hierarchy,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaneWitness {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub sec: f64,
}

impl PlaneWitness {
    pub fn plane(&self) -> Result<TwoPlane> {
        TwoPlane::new(self.x.clone(), self.y.clone())
    }
}

/// Maximizer of `μ(t) = λ_min(R − k·Id + t·*)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThorpeWitness {
    pub t_star: f64,
    pub mu: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HierarchyRow {
    pub p: usize,
    pub lambda_min: f64,
}

/// `λ_min K(R − k·Id, Symᵖ₀)` for `p = 1..=p_max`; `p = 1` is the Ricci test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HierarchyTable {
    pub k: f64,
    pub rows: Vec<HierarchyRow>,
    /// First `p` with `λ_min < −tolerance`.
    pub refuted_at: Option<usize>,
    /// Always set when nothing refutes: finitely many checks cannot certify.
    pub inconclusive_for_certification: bool,
    pub tolerance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub certify: f64,
    pub refute: f64,
    pub hierarchy: f64,
    pub thorpe_t: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            certify: CERTIFY_TOL,
            refute: REFUTE_TOL,
            hierarchy: HIERARCHY_TOL,
            thorpe_t: THORPE_T_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub n: usize,
    pub k: f64,
    pub direction: Direction,
    pub strict: bool,
    pub verdict: Verdict,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plane: Option<PlaneWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thorpe: Option<ThorpeWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hierarchy: Option<HierarchyTable>,
    pub tolerances: Tolerances,
}

/// `λ_min K(R − k·Id, Symᵖ₀)` for `p = 1..=p_max`.
pub fn hierarchy_check(r: &CurvatureOperator, k: f64, p_max: usize) -> Result<HierarchyTable> {
    if p_max < 2 {
        return Err(Error::GradeOutOfRange {
            p: p_max,
            n: r.n(),
            context: "the hierarchy needs p_max ≥ 2",
        });
    }
    let shifted = r.shifted(k);
    let rows: Vec<HierarchyRow> = (1..=p_max)
        .into_par_iter()
        .map(|p| {
            let kp = curvature_term(&shifted, &RepSpace::traceless(r.n(), p)?)?;
            Ok(HierarchyRow {
                p,
                lambda_min: kp.min_eigenvalue(),
            })
        })
        .collect::<Result<_>>()?;
    let refuted_at = rows.iter().find(|row| row.lambda_min < -HIERARCHY_TOL).map(|row| row.p);
    Ok(HierarchyTable {
        k,
        rows,
        refuted_at,
        inconclusive_for_certification: refuted_at.is_none(),
        tolerance: HIERARCHY_TOL,
    })
}

/// Most negative eigenvector of the first failing `K(R − k·Id, Symᵖ₀)`.
#[derive(Clone, Debug)]
pub struct HierarchyWitness {
    pub p: usize,
    pub value: f64,
    pub coordinates: DVector<f64>,
    pub polynomial: Polynomial,
}

/// Scans `p = 1..=p_max` and returns the first `λ_min < −HIERARCHY_TOL`.
pub fn witness_search(r: &CurvatureOperator, k: f64, p_max: usize) -> Result<Option<HierarchyWitness>> {
    if p_max < 2 {
        return Err(Error::GradeOutOfRange {
            p: p_max,
            n: r.n(),
            context: "the hierarchy needs p_max ≥ 2",
        });
    }
    let shifted = r.shifted(k);
    for p in 1..=p_max {
        let space = RepSpace::traceless(r.n(), p)?;
        let kp = curvature_term(&shifted, &space)?;
        let (value, v) = min_eigenpair(kp.matrix());
        if value < -HIERARCHY_TOL {
            let polynomial = space.coords_to_polynomial(&v)?;
            return Ok(Some(HierarchyWitness {
                p,
                value,
                coordinates: v,
                polynomial,
            }));
        }
    }
    Ok(None)
}

/// Best planes found by the Grassmannian search.
#[derive(Clone, Debug, Serialize)]
pub struct SecExtremes {
    pub sec_min: f64,
    pub sec_max: f64,
    pub min_plane: PlaneWitness,
    pub max_plane: PlaneWitness,
    /// `max_t λ_min(R + t·*)` in dimension 4, for comparison.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thorpe_sec_min: Option<f64>,
}

/// Projected-gradient minimization and maximization of `sec` with random restarts.
///
/// Restart `i` draws its start from a generator seeded by `(seed, i)`.
pub fn sec_extremes(r: &CurvatureOperator, restarts: usize, seed: u64) -> Result<SecExtremes> {
    let n = r.n();
    let restarts = restarts.max(1);
    let ps = pairs(n);
    let run = |sign: f64| -> PlaneWitness {
        (0..restarts)
            .into_par_iter()
            .map(|i| {
                let mut rng = trial_rng(seed, if sign > 0.0 { 1 } else { 2 }, i);
                descend(r.matrix(), &ps, n, sign, &mut rng)
            })
            .reduce_with(|a, b| if sign * a.sec <= sign * b.sec { a } else { b })
            .expect("at least one restart")
    };
    let min_plane = run(1.0);
    let max_plane = run(-1.0);
    let thorpe_sec_min = if n == 4 {
        Some(thorpe_maximize(r.matrix())?.mu)
    } else {
        None
    };
    Ok(SecExtremes {
        sec_min: min_plane.sec,
        sec_max: max_plane.sec,
        min_plane,
        max_plane,
        thorpe_sec_min,
    })
}

fn form(rm: &DMatrix<f64>, ps: &[(usize, usize)], x: &[f64], y: &[f64], w: &mut [f64], rw: &mut [f64]) -> f64 {
    for (a, &(j, k)) in ps.iter().enumerate() {
        w[a] = x[j] * y[k] - x[k] * y[j];
    }
    let mut f = 0.0;
    for a in 0..w.len() {
        let mut s = 0.0;
        for b in 0..w.len() {
            s += rm[(a, b)] * w[b];
        }
        rw[a] = s;
        f += s * w[a];
    }
    f
}

/// Gram–Schmidt; returns `false` if the pair degenerates.
fn orthonormalize(x: &mut [f64], y: &mut [f64]) -> bool {
    let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nx < 1e-300 {
        return false;
    }
    x.iter_mut().for_each(|v| *v /= nx);
    let d: f64 = x.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
    y.iter_mut().zip(x.iter()).for_each(|(b, a)| *b -= d * a);
    let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if ny < 1e-300 {
        return false;
    }
    y.iter_mut().for_each(|v| *v /= ny);
    true
}

/// Minimizes `sign · sec` from one random start.
fn descend<R: Rng>(rm: &DMatrix<f64>, ps: &[(usize, usize)], n: usize, sign: f64, rng: &mut R) -> PlaneWitness {
    let np = ps.len();
    let (mut w, mut rw) = (vec![0.0; np], vec![0.0; np]);
    let mut x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let mut y: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    while !orthonormalize(&mut x, &mut y) {
        x = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        y = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    }
    let mut f = sign * form(rm, ps, &x, &y, &mut w, &mut rw);
    let (mut gx, mut gy) = (vec![0.0; n], vec![0.0; n]);
    let (mut tx, mut ty) = (vec![0.0; n], vec![0.0; n]);
    for _ in 0..MAX_ITERATIONS {
        // Euclidean gradient: g_x = 2Ωy, g_y = −2Ωx with Ω the skew matrix of R(x∧y).
        gx.iter_mut().for_each(|v| *v = 0.0);
        gy.iter_mut().for_each(|v| *v = 0.0);
        for (a, &(j, k)) in ps.iter().enumerate() {
            let o = 2.0 * sign * rw[a];
            gx[j] += o * y[k];
            gx[k] -= o * y[j];
            gy[j] -= o * x[k];
            gy[k] += o * x[j];
        }
        // Stiefel tangent projection G − X sym(XᵀG).
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>();
        let (xx, xy, yx, yy) = (dot(&x, &gx), dot(&x, &gy), dot(&y, &gx), dot(&y, &gy));
        let s = 0.5 * (xy + yx);
        for i in 0..n {
            gx[i] -= x[i] * xx + y[i] * s;
            gy[i] -= x[i] * s + y[i] * yy;
        }
        let gnorm2 = dot(&gx, &gx) + dot(&gy, &gy);
        if gnorm2.sqrt() <= GRADIENT_TOL {
            break;
        }
        let mut step = 0.5;
        let mut accepted = false;
        while step > 1e-20 {
            for i in 0..n {
                tx[i] = x[i] - step * gx[i];
                ty[i] = y[i] - step * gy[i];
            }
            if orthonormalize(&mut tx, &mut ty) {
                let ft = sign * form(rm, ps, &tx, &ty, &mut w, &mut rw);
                // Strict decrease: once the Armijo margin is below rounding, equal
                // values would otherwise be accepted forever.
                if ft < f && ft <= f - 1e-4 * step * gnorm2 {
                    std::mem::swap(&mut x, &mut tx);
                    std::mem::swap(&mut y, &mut ty);
                    f = ft;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        // On acceptance the buffers already hold R(x∧y) at the new point.
        if !accepted {
            break;
        }
    }
    PlaneWitness { x, y, sec: sign * f }
}

/// Golden-section maximization of the concave `μ(t) = λ_min(S + t·*)` on
/// `|t| ≤ 2‖S‖_op` (or `[−1, 1]` when `S = 0`).
fn thorpe_maximize(s: &DMatrix<f64>) -> Result<ThorpeWitness> {
    let star = HodgeStar::matrix();
    let mu = |t: f64| min_eigenvalue(&(s + &star * t));
    let op_norm = spectrum(s).iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let half = if op_norm > 0.0 { 2.0 * op_norm } else { 1.0 };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (-half, half);
    let (mut fa, mut fb) = (mu(a), mu(b));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (mu(c), mu(d));
    let guard = |lo: f64, mid: f64, hi: f64| -> Result<()> {
        // A concave function never dips below both neighbours.
        ensure_within(
            "concavity of the Thorpe parameter",
            (lo.min(hi) - mid).max(0.0),
            1e-9 * (1.0 + op_norm),
        )
    };
    while b - a > THORPE_T_TOL {
        guard(fa, fc, fd)?;
        guard(fc, fd, fb)?;
        if fc >= fd {
            b = d;
            fb = fd;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = mu(c);
        } else {
            a = c;
            fa = fc;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = mu(d);
        }
    }
    let mid = 0.5 * (a + b);
    let candidates = [(mid, mu(mid)), (a, fa), (b, fb), (c, fc), (d, fd)];
    let (t_star, mu_star) = candidates
        .into_iter()
        .max_by(|p, q| p.1.total_cmp(&q.1))
        .expect("non-empty");
    Ok(ThorpeWitness { t_star, mu: mu_star })
}

/// `max_t λ_min(R + t·*)`, which equals the minimum sectional curvature in dimension 4.
pub fn thorpe_sec_min(r: &CurvatureOperator) -> Result<ThorpeWitness> {
    require_four(r)?;
    thorpe_maximize(r.matrix())
}

fn require_four(r: &CurvatureOperator) -> Result<()> {
    if r.n() != 4 {
        return Err(Error::UnsupportedDimension {
            op: "Thorpe certification",
            n: r.n(),
        });
    }
    Ok(())
}

/// Exact test of `sec ≥ k` (or `> k` when `strict`) in dimension 4.
pub fn thorpe_certify(r: &CurvatureOperator, k: f64, strict: bool) -> Result<Certificate> {
    require_four(r)?;
    let witness = thorpe_maximize(r.shifted(k).matrix())?;
    let certified = if strict {
        witness.mu >= CERTIFY_TOL
    } else {
        witness.mu >= -CERTIFY_TOL
    };
    Ok(Certificate {
        n: 4,
        k,
        direction: Direction::AtLeast,
        strict,
        verdict: if certified {
            Verdict::Certified
        } else {
            Verdict::Refuted
        },
        method: Method::ThorpeExact,
        plane: None,
        thorpe: Some(witness),
        hierarchy: None,
        tolerances: Tolerances::default(),
    })
}

/// Settings for [`certify`].
#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    pub k: f64,
    pub direction: Direction,
    pub strict: bool,
    pub p_max: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl CertifyOptions {
    pub fn new(k: f64) -> Self {
        Self {
            k,
            direction: Direction::AtLeast,
            strict: false,
            p_max: 6,
            restarts: DEFAULT_RESTARTS,
            seed: crate::DEFAULT_SEED,
        }
    }
}

/// Full query. Dimension 4 is decided exactly; elsewhere the answer is
/// either a refutation (plane or hierarchy) or inconclusive. Upper bounds
/// are handled by negating `R` and `k`.
pub fn certify(r: &CurvatureOperator, opts: &CertifyOptions) -> Result<Certificate> {
    let sign = opts.direction.sign();
    let rs = r.scale(sign);
    let ks = sign * opts.k;
    let restate = |mut c: Certificate| {
        c.k = opts.k;
        c.direction = opts.direction;
        if let Some(p) = c.plane.as_mut() {
            p.sec *= sign;
        }
        c
    };
    let search = sec_extremes(&rs, opts.restarts, opts.seed)?;
    let violating = (search.sec_min < ks - REFUTE_TOL).then(|| search.min_plane.clone());

    if r.n() == 4 {
        let mut cert = thorpe_certify(&rs, ks, opts.strict)?;
        if cert.verdict == Verdict::Refuted {
            cert.plane = violating;
        }
        return Ok(restate(cert));
    }

    let base = Certificate {
        n: r.n(),
        k: ks,
        direction: Direction::AtLeast,
        strict: opts.strict,
        verdict: Verdict::Inconclusive,
        method: Method::Hierarchy,
        plane: None,
        thorpe: None,
        hierarchy: None,
        tolerances: Tolerances::default(),
    };
    if let Some(plane) = violating {
        return Ok(restate(Certificate {
            verdict: Verdict::Refuted,
            method: Method::GrassmannOpt,
            plane: Some(plane),
            ..base
        }));
    }
    let table = hierarchy_check(&rs, ks, opts.p_max)?;
    let verdict = if table.refuted_at.is_some() {
        Verdict::Refuted
    } else {
        Verdict::Inconclusive
    };
    Ok(restate(Certificate {
        verdict,
        hierarchy: Some(table),
        ..base
    }))
}
