use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use curvelab_core::certify::{certify, CertifyOptions, Direction};
use curvelab_core::closedform::verify_thm_b;
use curvelab_core::io::{asymmetry_warning, matrix_rows, OperatorDocument, BASIS, CONVENTION};
use curvelab_core::knalgebra::{g_power_iterated, KNAlgebra};
use curvelab_core::linalg::{factorial, max_abs_diff};
use curvelab_core::littlewood::{verify_lemma_sym, verify_lemma_wedge};
use curvelab_core::multilinear::BasisLabels;
use curvelab_core::spherical::verify_integral_formula;
use curvelab_core::weitzenbock::{block_structure, curvature_term};
use curvelab_core::{decompose, CurvatureOperator, RepSpace};

use crate::args::{CertifyArgs, DecomposeArgs, KtermArgs, Rep, Suite, VerifyArgs};
use crate::input::load_operator;
use crate::CliError;

pub const THM_B_TOL: f64 = 1e-8;
pub const INTEGRAL_TOL: f64 = 1e-7;
pub const C_SPREAD_TOL: f64 = 1e-8;
pub const G_POWER_TOL: f64 = 1e-10;

/// A JSON report and whether the checks it describes passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

impl Outcome {
    fn pass(report: Value) -> Self {
        Self { report, passed: true }
    }
}

fn warnings(r: &CurvatureOperator) -> Vec<String> {
    asymmetry_warning(r).into_iter().collect()
}

pub fn cmd_decompose(args: &DecomposeArgs) -> Result<Outcome, CliError> {
    let r = load_operator(&args.input)?;
    let d = decompose(&r)?;
    let norms = d.norms();
    Ok(Outcome::pass(json!({
        "n": r.n(),
        "basis": BASIS,
        "convention": CONVENTION,
        "scal": d.scal,
        "ric": matrix_rows(&d.ric),
        "parts": {
            "U_norm": norms.u,
            "L_norm": norms.l,
            "W_norm": norms.w,
            "W4_norm": norms.w4,
            "U": matrix_rows(d.r_u.matrix()),
            "L": matrix_rows(d.r_l.matrix()),
            "W": matrix_rows(d.r_w.matrix()),
            "W4": matrix_rows(d.r_w4.matrix()),
        },
        "residuals": {
            "reconstruction": d.reconstruction_error(&r),
            "orthogonality": d.orthogonality_defect(),
        },
        "degraded": d.degraded,
        "input_asymmetry": r.ingest_asymmetry(),
        "warnings": warnings(&r),
    })))
}

fn basis_description(space: &RepSpace, with_basis: bool) -> Value {
    match space.labels() {
        BasisLabels::Wedge(ws) => json!({
            "kind": "wedge",
            "labels": ws.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        }),
        BasisLabels::Monomial(ms) => json!({
            "kind": "normalized-monomials",
            "labels": ms.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        }),
        BasisLabels::Harmonic => {
            let mut out = json!({ "kind": "harmonic" });
            if with_basis {
                let ambient = space.ambient().expect("harmonic spaces have an ambient power");
                out["ambient"] = basis_description(ambient, false);
                let c = space.change_of_basis().expect("harmonic spaces carry a basis");
                out["columns"] = json!(matrix_rows(&c.transpose()));
            }
            out
        }
    }
}

pub fn cmd_kterm(args: &KtermArgs) -> Result<Outcome, CliError> {
    let r = load_operator(&args.input)?;
    let n = r.n();
    let space = match args.rep {
        Rep::Wedge => RepSpace::exterior(n, args.p)?,
        Rep::Sym => RepSpace::symmetric(n, args.p)?,
        Rep::Sym0 => RepSpace::traceless(n, args.p)?,
    };
    let k = curvature_term(&r, &space)?;
    let spectrum = k.spectrum();
    let mut report = json!({
        "n": n,
        "rep": format!("{}", space.kind()),
        "p": args.p,
        "dim": space.dim(),
        "basis": basis_description(&space, args.with_basis),
        "matrix": matrix_rows(k.matrix()),
        "spectrum": spectrum,
        "lambda_min": spectrum.first().copied(),
        "symmetry_defect": k.symmetry_defect(),
        "warnings": warnings(&r),
    });
    if args.rep == Rep::Sym {
        let blocks: Vec<Value> = block_structure(&r, args.p)?
            .into_iter()
            .map(|(degree, b)| {
                json!({
                    "harmonic_degree": degree,
                    "dim": b.matrix().nrows(),
                    "spectrum": b.spectrum(),
                })
            })
            .collect();
        report["blocks"] = json!(blocks);
    }
    Ok(Outcome::pass(report))
}

fn need_dimension(n: usize, least: usize) -> Result<(), CliError> {
    if n < least {
        return Err(CliError::Usage(format!("this suite needs --n ≥ {least}, got {n}")));
    }
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let n = args.n.unwrap_or(4);
    match args.suite {
        Suite::ThmB => {
            need_dimension(n, 4)?;
            let p_max = args.pmax.unwrap_or(4);
            let report = verify_thm_b(n, p_max, args.trials, args.seed)?;
            let worst = report.worst();
            let passed = worst <= THM_B_TOL;
            Ok(Outcome {
                report: json!({
                    "suite": "thmB",
                    "pass": passed,
                    "worst": worst,
                    "tolerance": THM_B_TOL,
                    "n": n,
                    "seed": args.seed,
                    "rows": report.rows,
                }),
                passed,
            })
        }
        Suite::Integral => {
            need_dimension(n, 2)?;
            let p_max = args.pmax.unwrap_or(4);
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let mut rows = Vec::new();
            let (mut worst, mut spread) = (0.0_f64, 0.0_f64);
            for p in 2..=p_max {
                let r = CurvatureOperator::random(&mut rng, n);
                let rep = verify_integral_formula(&r, p, args.trials, args.seed)?;
                worst = worst.max(rep.worst_relative_error);
                spread = spread.max(rep.c_spread);
                rows.push(json!({
                    "p": p,
                    "c": rep.c,
                    "c_spread": rep.c_spread,
                    "worst_relative_error": rep.worst_relative_error,
                }));
            }
            let passed = worst <= INTEGRAL_TOL && spread <= C_SPREAD_TOL;
            Ok(Outcome {
                report: json!({
                    "suite": "integral",
                    "pass": passed,
                    "worst": worst,
                    "tolerance": INTEGRAL_TOL,
                    "c_spread": spread,
                    "c_spread_tolerance": C_SPREAD_TOL,
                    "n": n,
                    "seed": args.seed,
                    "rows": rows,
                }),
                passed,
            })
        }
        Suite::Lemmas => {
            let p_max = args.pmax.unwrap_or(8);
            let mut rows = Vec::new();
            let mut passed = true;
            for p in 2..=p_max {
                let sym = verify_lemma_sym(p)?;
                let wedge = verify_lemma_wedge(p)?;
                let ok = sym.counts() == [1, 1, 1, 0] && wedge.counts() == [1, 1, 1, 1];
                passed &= ok;
                rows.push(json!({ "p": p, "sym": sym, "wedge": wedge, "pass": ok }));
            }
            Ok(Outcome {
                report: json!({
                    "suite": "lemmas",
                    "pass": passed,
                    "expected": { "sym": [1, 1, 1, 0], "wedge": [1, 1, 1, 1] },
                    "rows": rows,
                }),
                passed,
            })
        }
        Suite::Gpowers => {
            need_dimension(n, 2)?;
            let p_max = args.pmax.unwrap_or(4);
            let mut rows = Vec::new();
            let mut worst = 0.0_f64;
            for (name, algebra) in [
                ("wedge", KNAlgebra::Exterior),
                ("sym", KNAlgebra::SymmetricFull),
                ("sym0", KNAlgebra::SymmetricTraceless),
            ] {
                for p in 0..=p_max {
                    if algebra == KNAlgebra::Exterior && p > n {
                        break;
                    }
                    let g = g_power_iterated(algebra, n, p)?;
                    let dim = g.matrix().nrows();
                    let err = max_abs_diff(g.matrix(), &(DMatrix::identity(dim, dim) * factorial(p)));
                    worst = worst.max(err);
                    rows.push(json!({ "algebra": name, "p": p, "max_abs_error": err }));
                }
            }
            let passed = worst <= G_POWER_TOL;
            Ok(Outcome {
                report: json!({
                    "suite": "gpowers",
                    "pass": passed,
                    "worst": worst,
                    "tolerance": G_POWER_TOL,
                    "n": n,
                    "rows": rows,
                }),
                passed,
            })
        }
    }
}

/// A refutation is a valid answer, not a failure: certification always
/// exits with status 0 unless the input is bad.
pub fn cmd_certify(args: &CertifyArgs) -> Result<Outcome, CliError> {
    let r = load_operator(&args.input)?;
    if !args.k.is_finite() {
        return Err(CliError::Usage("--k must be finite".into()));
    }
    let opts = CertifyOptions {
        k: args.k,
        direction: if args.upper {
            Direction::AtMost
        } else {
            Direction::AtLeast
        },
        strict: args.strict,
        p_max: args.pmax,
        restarts: args.restarts,
        seed: args.seed,
    };
    let cert = certify(&r, &opts)?;
    let mut report = serde_json::to_value(&cert).map_err(|e| CliError::Io(e.to_string()))?;
    report["operator"] = json!(OperatorDocument::from(&r));
    report["seed"] = json!(args.seed);
    report["warnings"] = json!(warnings(&r));
    Ok(Outcome::pass(report))
}
