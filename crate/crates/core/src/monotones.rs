//! The two imaginarity monotones induced by the unified relative entropy.
//!
//! The conjugate-based measure evaluates the divergence against the
//! entrywise conjugate, mh(rho) = h(tr(rho^a (rho*)^(1-a))), always through
//! the eigendecomposition kernel; the explicit qubit and Werner formulas are
//! cross-checks only. The minimization-based measure me(rho) minimizes the
//! divergence over all real states, with an analytic solver for qubits and a
//! multi-start numeric search in higher dimension. Comparison measures
//! (relative-entropy, Tsallis-type, alpha-z) round out the ordering chain.

use num_complex::Complex64;
use serde::Serialize;

use crate::entropy::{alpha_z_fidelity, h_alpha_beta, AlphaZParams, TsallisParam};
use crate::error::{Error, Result};
use crate::matrix::{trace_product_power, von_neumann_entropy, DensityMatrix, Tolerances};
use crate::optim::{maximize_real_trace, OptimizerConfig, SearchOutcome};
use crate::states::{bloch_to_density, density_to_bloch, BlochVector};

/// Measure parameters: alpha in (0, 1), beta in (0, 1], strictly enforced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneParams {
    alpha: f64,
    beta: f64,
}

impl MonotoneParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta <= 1.0) {
            return Err(Error::ParamOutOfRange(format!(
                "measure parameters need alpha in (0,1), beta in (0,1], got ({alpha}, {beta})"
            )));
        }
        Ok(MonotoneParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Conjugate-based monotone: h(tr(rho^a (rho*)^(1-a))).
pub fn mh(rho: &DensityMatrix, p: &MonotoneParams, tol: &Tolerances) -> Result<f64> {
    let t = trace_product_power(rho, &rho.conjugate(), p.alpha, tol)?;
    h_alpha_beta(t, p.alpha, p.beta)
}

/// Pure-state shortcut: (|<psi|psi*>|^(2 beta) - 1) / ((alpha - 1) beta).
pub fn mh_pure(psi: &[Complex64], p: &MonotoneParams) -> Result<f64> {
    let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if (norm2.sqrt() - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm2.sqrt()));
    }
    // <psi|psi*> = conj(sum_i psi_i^2), so only the modulus matters.
    let overlap: Complex64 = psi.iter().map(|z| z * z).sum();
    let g = overlap.norm();
    Ok((g.powf(2.0 * p.beta) - 1.0) / ((p.alpha - 1.0) * p.beta))
}

/// Explicit qubit kernel for the conjugate trace. Singular when r = |r3|,
/// which only happens as r2 -> 0.
fn qubit_conjugate_trace(v: &BlochVector, alpha: f64) -> Option<f64> {
    let r = v.norm();
    let (r1, r2, r3) = (v.r1, v.r2, v.r3);
    if (r - r3).abs() < 1e-9 || (r + r3).abs() < 1e-9 {
        return None;
    }
    let minus = 1.0 - r;
    let plus = 1.0 + r;
    let q1 = r - r2 * r2 / (r - r3);
    let q2 = r - r2 * r2 / (r + r3);
    let cross = minus.powf(alpha) * plus.powf(1.0 - alpha) + minus.powf(1.0 - alpha) * plus.powf(alpha);
    let total = minus * (q1 * q1 + r1 * r1 * r2 * r2 / ((r - r3) * (r - r3)))
        + plus * (q2 * q2 + r1 * r1 * r2 * r2 / ((r + r3) * (r + r3)))
        + r2 * r2 * cross;
    Some(total / (2.0 * r * r))
}

/// The printed qubit closed form for mh. Delegates to the spectral route for
/// real states and wherever its denominators are singular.
pub fn mh_qubit_closed_form(v: &BlochVector, p: &MonotoneParams, tol: &Tolerances) -> Result<f64> {
    v.validate()?;
    if v.r2 == 0.0 {
        return Ok(0.0);
    }
    match qubit_conjugate_trace(v, p.alpha) {
        Some(t) => h_alpha_beta(t, p.alpha, p.beta),
        None => mh(&bloch_to_density(v)?, p, tol),
    }
}

/// Scalar maximization problem f(x, theta) = A [x^(1-a) + (1-x)^(1-a)]
/// + (B sin theta + C cos theta) [(1-x)^(1-a) - x^(1-a)] on
/// [0, 1/2] x [0, 2 pi].
#[derive(Debug, Clone, Copy)]
pub struct Lemma3Problem {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
}

/// Its closed-form maximizer.
#[derive(Debug, Clone, Copy)]
pub struct Lemma3Solution {
    pub x0: f64,
    pub theta0: f64,
    pub f_max: f64,
}

impl Lemma3Problem {
    pub fn value(&self, x: f64, theta: f64) -> f64 {
        let e = 1.0 - self.alpha;
        let lo = x.powf(e);
        let hi = (1.0 - x).powf(e);
        self.a * (lo + hi) + (self.b * theta.sin() + self.c * theta.cos()) * (hi - lo)
    }
}

/// Closed-form maximum of the scalar problem:
/// x0 = 1 / (((A + g)/(A - g))^(1/alpha) + 1) with g = sqrt(B^2 + C^2),
/// sin(theta0) = B/g, cos(theta0) = C/g, and the maximum value
/// (A + g)(1 - x0)^(1-alpha) + (A - g) x0^(1-alpha).
pub fn lemma3_maximize(prob: &Lemma3Problem) -> Result<Lemma3Solution> {
    let Lemma3Problem { a, b, c, alpha } = *prob;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::ParamOutOfRange(format!(
            "alpha {alpha} outside (0,1)"
        )));
    }
    let g = b.hypot(c);
    if g == 0.0 {
        return Err(Error::PreconditionViolated("B^2 + C^2 must be > 0".into()));
    }
    if a <= g {
        return Err(Error::PreconditionViolated(format!(
            "need A > sqrt(B^2 + C^2), got A = {a}, g = {g}"
        )));
    }
    let ratio = (a + g) / (a - g);
    let x0 = 1.0 / (ratio.powf(1.0 / alpha) + 1.0);
    let mut theta0 = b.atan2(c);
    if theta0 < 0.0 {
        theta0 += 2.0 * std::f64::consts::PI;
    }
    let e = 1.0 - alpha;
    let f_max = (a + g) * (1.0 - x0).powf(e) + (a - g) * x0.powf(e);
    Ok(Lemma3Solution { x0, theta0, f_max })
}

/// How an me value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeMethod {
    QubitAnalytic,
    Numeric,
}

/// Result of the minimization-based measure: the value, the real state
/// achieving it, and optimizer diagnostics.
#[derive(Debug, Clone)]
pub struct MeResult {
    pub value: f64,
    pub minimizer: DensityMatrix,
    pub method: MeMethod,
    pub iterations: usize,
    /// The maximal tr(rho^a sigma^(1-a)) over real sigma.
    pub achieved_trace: f64,
    /// False when the numeric search hit its iteration cap; the value is
    /// then best-so-far.
    pub converged: bool,
    /// Human-readable notes (sign resolution, fallback decisions).
    pub diagnostics: Option<String>,
}

/// tr(rho^a sigma^(1-a)) for Bloch-parameterized qubits, sigma in the
/// (s1, 0, s3) plane. Pure scalar arithmetic, no eigensolver.
pub fn qubit_trace_kernel(rho_bloch: &BlochVector, s1: f64, s3: f64, alpha: f64) -> f64 {
    let r = rho_bloch.norm();
    let e = 1.0 - alpha;
    let l1 = ((1.0 - r) / 2.0).powf(alpha);
    let l2 = ((1.0 + r) / 2.0).powf(alpha);
    let s = s1.hypot(s3);
    if s < 1e-300 {
        return (l1 + l2) * 0.5f64.powf(e) ;
    }
    let m1 = ((1.0 - s) / 2.0).powf(e);
    let m2 = ((1.0 + s) / 2.0).powf(e);
    let base = 0.5 * (l1 + l2) * (m1 + m2);
    if r < 1e-300 {
        return base;
    }
    base + (rho_bloch.r1 * s1 + rho_bloch.r3 * s3) * (l2 - l1) * (m2 - m1) / (2.0 * r * s)
}

/// Analytic qubit solver for the minimization-based measure.
pub fn me_qubit_closed_form(
    v: &BlochVector,
    p: &MonotoneParams,
    tol: &Tolerances,
) -> Result<MeResult> {
    v.validate()?;
    let rho = bloch_to_density(v)?;
    let r = v.norm();
    if r < 1e-14 {
        return Ok(MeResult {
            value: 0.0,
            minimizer: rho,
            method: MeMethod::QubitAnalytic,
            iterations: 0,
            achieved_trace: 1.0,
            converged: true,
            diagnostics: None,
        });
    }
    let alpha = p.alpha;
    let l1 = ((1.0 - r) / 2.0).powf(alpha);
    let l2 = ((1.0 + r) / 2.0).powf(alpha);
    let a = 0.5 * (l1 + l2);
    let scale = (l2 - l1) / (2.0 * r);
    let b = v.r1 * scale;
    let c = v.r3 * scale;
    let g = b.hypot(c);

    if g <= 1e-14 * a {
        // No in-plane component: the maximum 2^alpha A sits at sigma = I/2.
        let achieved = 2f64.powf(alpha) * a;
        return Ok(MeResult {
            value: h_alpha_beta(achieved, alpha, p.beta)?,
            minimizer: bloch_to_density(&BlochVector::new(0.0, 0.0, 0.0))?,
            method: MeMethod::QubitAnalytic,
            iterations: 0,
            achieved_trace: achieved,
            converged: true,
            diagnostics: None,
        });
    }

    let sol = lemma3_maximize(&Lemma3Problem { a, b, c, alpha })?;
    let c0 = 1.0 - 2.0 * sol.x0;
    let s1 = c0 * b / g;
    let s3_aligned = c0 * c / g;
    // The derivation fixes cos(theta0) = +C/g while the assembled minimizer
    // is printed with the opposite sign on s3; evaluate both and keep the
    // larger trace.
    let t_plus = qubit_trace_kernel(v, s1, s3_aligned, alpha);
    let t_minus = qubit_trace_kernel(v, s1, -s3_aligned, alpha);
    let (s3, achieved, note) = if t_plus >= t_minus {
        (s3_aligned, t_plus, "s3 sign: aligned (+C)")
    } else {
        (-s3_aligned, t_minus, "s3 sign: negated (-C)")
    };
    let minimizer = bloch_to_density(&BlochVector::new(s1, 0.0, s3))?;
    debug_assert!(crate::states::is_real_state(&minimizer, tol.real_tol));
    Ok(MeResult {
        value: h_alpha_beta(achieved, alpha, p.beta)?,
        minimizer,
        method: MeMethod::QubitAnalytic,
        iterations: 0,
        achieved_trace: achieved,
        converged: true,
        diagnostics: Some(note.to_string()),
    })
}

/// Numeric path: multi-start Nelder-Mead maximization of the trace over real
/// states, any dimension at least 2.
pub fn me_numeric(
    rho: &DensityMatrix,
    p: &MonotoneParams,
    cfg: &OptimizerConfig,
    tol: &Tolerances,
) -> Result<MeResult> {
    if rho.dim() < 2 {
        return Err(Error::DimMismatch("me needs dimension >= 2".into()));
    }
    let SearchOutcome {
        achieved_trace,
        minimizer,
        iterations,
        converged,
    } = maximize_real_trace(rho, p.alpha, cfg, tol)?;
    Ok(MeResult {
        value: h_alpha_beta(achieved_trace, p.alpha, p.beta)?,
        minimizer,
        method: MeMethod::Numeric,
        iterations,
        achieved_trace,
        converged,
        diagnostics: if converged {
            None
        } else {
            Some("iteration cap reached; best-so-far value".to_string())
        },
    })
}

/// Dispatch: analytic for qubits, numeric otherwise.
pub fn me(
    rho: &DensityMatrix,
    p: &MonotoneParams,
    cfg: &OptimizerConfig,
    tol: &Tolerances,
) -> Result<MeResult> {
    if rho.dim() == 2 {
        me_qubit_closed_form(&density_to_bloch(rho)?, p, tol)
    } else {
        me_numeric(rho, p, cfg, tol)
    }
}

/// Relative entropy of imaginarity: S((rho + rho^T)/2) - S(rho).
pub fn m_relative_entropy(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    let sym = rho.real_part_state();
    Ok(von_neumann_entropy(&sym, tol)? - von_neumann_entropy(rho, tol)?)
}

/// Tsallis-type comparison measure: 1 - tr(rho^u (rho*)^(1-u)).
pub fn m_tsallis(rho: &DensityMatrix, u: &TsallisParam, tol: &Tolerances) -> Result<f64> {
    Ok(1.0 - trace_product_power(rho, &rho.conjugate(), u.u, tol)?)
}

/// Alpha-z comparison measure: 1 - f_{alpha,z}(rho, rho*).
pub fn m_alpha_z(rho: &DensityMatrix, p: &AlphaZParams, tol: &Tolerances) -> Result<f64> {
    Ok(1.0 - alpha_z_fidelity(rho, &rho.conjugate(), p, tol)?)
}

/// The printed Werner closed form, evaluated literally:
/// h((1/8) ((3k+1)^a (1-k)^(1-a) + (3k+1)^(1-a) (1-k)^a - 2k + 6)).
pub fn werner_mh_closed_form(k: f64, p: &MonotoneParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::ParamOutOfRange(format!("Werner k={k} outside [0,1]")));
    }
    let a = p.alpha;
    let hi = 3.0 * k + 1.0;
    let lo = 1.0 - k;
    let t = (hi.powf(a) * lo.powf(1.0 - a) + hi.powf(1.0 - a) * lo.powf(a) - 2.0 * k + 6.0) / 8.0;
    h_alpha_beta(t, a, p.beta)
}

/// Linear entropy (mixedness) of the Werner family: 3 (1 - k^2) / 4.
pub fn werner_linear_entropy(k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::ParamOutOfRange(format!("Werner k={k} outside [0,1]")));
    }
    Ok(0.75 * (1.0 - k * k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        is_real_state, random_density, random_real_density, remark1_vector, werner, WernerParam,
    };
    use crate::matrix::{partial_trace, Keep};
    use rand::{Rng, SeedableRng};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn params(a: f64, b: f64) -> MonotoneParams {
        MonotoneParams::new(a, b).unwrap()
    }

    fn random_bloch(rng: &mut impl Rng) -> BlochVector {
        loop {
            let v = BlochVector::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if v.norm() <= 1.0 {
                return v;
            }
        }
    }

    #[test]
    fn mh_vanishes_on_real_states() {
        for seed in 0..10u64 {
            let rho = random_real_density(3, seed);
            for (a, b) in [(0.2, 0.3), (0.5, 0.5), (0.8, 1.0)] {
                assert!(mh(&rho, &params(a, b), &tol()).unwrap().abs() < 1e-9);
            }
        }
    }

    #[test]
    fn mh_orthogonal_conjugate_value() {
        let rho = bloch_to_density(&BlochVector::new(0.0, 1.0, 0.0)).unwrap();
        let v = mh(&rho, &params(0.5, 0.5), &tol()).unwrap();
        assert!((v - 4.0).abs() < 1e-10);
    }

    #[test]
    fn mh_rejects_out_of_range_params() {
        assert!(MonotoneParams::new(0.0, 0.5).is_err());
        assert!(MonotoneParams::new(1.0, 0.5).is_err());
        assert!(MonotoneParams::new(0.5, 0.0).is_err());
        assert!(MonotoneParams::new(0.5, 1.1).is_err());
    }

    #[test]
    fn mh_pure_matches_density_route() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(21);
        for _ in 0..30 {
            let d = rng.gen_range(2..5);
            let psi: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let psi: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
            let rho = DensityMatrix::from_pure(&psi).unwrap();
            let p = params(0.5, 0.5);
            let a = mh_pure(&psi, &p).unwrap();
            let b = mh(&rho, &p, &tol()).unwrap();
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn mh_pure_known_cases() {
        let p = params(0.5, 0.5);
        let real = [
            Complex64::new(0.6, 0.0),
            Complex64::new(0.8, 0.0),
        ];
        assert!(mh_pure(&real, &p).unwrap().abs() < 1e-12);

        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let iy = [Complex64::new(inv, 0.0), Complex64::new(0.0, inv)];
        assert!((mh_pure(&iy, &p).unwrap() - 4.0).abs() < 1e-12);

        // The bipartite counterexample: joint value 4, both marginals real.
        let joint = mh_pure(&remark1_vector(), &p).unwrap();
        assert!((joint - 4.0).abs() < 1e-12);
        let rho = crate::states::remark1_state();
        for keep in [Keep::First, Keep::Second] {
            let marg = DensityMatrix::new_unchecked(
                partial_trace(rho.matrix(), (2, 2), keep).unwrap(),
            );
            assert!(mh(&marg, &p, &tol()).unwrap().abs() < 1e-10);
        }

        let unnormalized = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(
            mh_pure(&unnormalized, &p),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn qubit_closed_form_cross_checks() {
        let p = params(0.5, 0.5);
        assert_eq!(
            mh_qubit_closed_form(&BlochVector::new(0.3, 0.0, 0.4), &p, &tol()).unwrap(),
            0.0
        );
        let v = BlochVector::new(0.0, 1.0, 0.0);
        assert!((mh_qubit_closed_form(&v, &p, &tol()).unwrap() - 4.0).abs() < 1e-9);

        // Figure point (1/2, 1/4, 1/2) and random interior states: the
        // printed kernel agrees with the spectral route.
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let mut cases = vec![BlochVector::new(0.5, 0.25, 0.5)];
        for _ in 0..50 {
            cases.push(random_bloch(&mut rng));
        }
        for v in cases {
            if v.r2 == 0.0 {
                continue;
            }
            for (a, b) in [(0.5, 0.5), (0.25, 0.6666666666666666), (0.7, 1.0)] {
                let p = params(a, b);
                let closed = mh_qubit_closed_form(&v, &p, &tol()).unwrap();
                let spectral = mh(&bloch_to_density(&v).unwrap(), &p, &tol()).unwrap();
                assert!(
                    (closed - spectral).abs() < 1e-8,
                    "({}, {}, {}) at ({a}, {b}): {closed} vs {spectral}",
                    v.r1,
                    v.r2,
                    v.r3
                );
            }
        }
    }

    #[test]
    fn lemma3_reference_instance() {
        let sol = lemma3_maximize(&Lemma3Problem {
            a: 1.0,
            b: 0.6,
            c: 0.0,
            alpha: 0.5,
        })
        .unwrap();
        assert!((sol.x0 - 1.0 / 17.0).abs() < 1e-12);
        assert!((sol.theta0 - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((sol.f_max - 1.6492422).abs() < 1e-6);
    }

    #[test]
    fn lemma3_beats_grid() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(17);
        for _ in 0..20 {
            let g: f64 = rng.gen_range(0.05..0.9);
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let prob = Lemma3Problem {
                a: g + rng.gen_range(0.05..1.0),
                b: g * theta.sin(),
                c: g * theta.cos(),
                alpha: rng.gen_range(0.05..0.95),
            };
            let sol = lemma3_maximize(&prob).unwrap();
            let mut grid_best = f64::NEG_INFINITY;
            for i in 0..200 {
                let x = 0.5 * i as f64 / 199.0;
                for j in 0..200 {
                    let th = std::f64::consts::TAU * j as f64 / 199.0;
                    grid_best = grid_best.max(prob.value(x, th));
                }
            }
            assert!(sol.f_max >= grid_best - 1e-6);
            // Invariance under rotation of (B, C) at fixed amplitude.
            let rotated = Lemma3Problem {
                b: g,
                c: 0.0,
                ..prob
            };
            let sol2 = lemma3_maximize(&rotated).unwrap();
            assert!((sol.f_max - sol2.f_max).abs() < 1e-12);
        }
    }

    #[test]
    fn lemma3_degenerate_direction() {
        // B -> 0+ with C > 0 sends theta0 to 0.
        let sol = lemma3_maximize(&Lemma3Problem {
            a: 1.0,
            b: 1e-12,
            c: 0.5,
            alpha: 0.5,
        })
        .unwrap();
        assert!(sol.theta0.abs() < 1e-9);

        assert!(lemma3_maximize(&Lemma3Problem {
            a: 0.5,
            b: 0.6,
            c: 0.0,
            alpha: 0.5
        })
        .is_err());
        assert!(lemma3_maximize(&Lemma3Problem {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            alpha: 0.5
        })
        .is_err());
    }

    #[test]
    fn me_qubit_reference_values() {
        let p = params(0.5, 0.5);

        let free = me_qubit_closed_form(&BlochVector::new(0.0, 0.0, 0.0), &p, &tol()).unwrap();
        assert_eq!(free.value, 0.0);

        // (0, 1/2, 0): minimizer I/2, achieved trace (sqrt(1/2)+sqrt(3/2))/2.
        let half = me_qubit_closed_form(&BlochVector::new(0.0, 0.5, 0.0), &p, &tol()).unwrap();
        let expect_t = 0.5 * (0.5f64.sqrt() + 1.5f64.sqrt());
        assert!((half.achieved_trace - expect_t).abs() < 1e-12);
        assert!((half.achieved_trace - 0.9659258).abs() < 1e-7);
        assert!((half.value - 0.068739).abs() < 1e-5);
        assert!(
            half.minimizer
                .matrix()
                .max_abs_diff(&crate::matrix::ComplexMatrix::identity(2).scale_re(0.5))
                < 1e-12
        );

        // (0, 1, 0): achieved trace sqrt(2)/2, value 4 (1 - 2^(-1/4)).
        let pure = me_qubit_closed_form(&BlochVector::new(0.0, 1.0, 0.0), &p, &tol()).unwrap();
        assert!((pure.achieved_trace - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((pure.value - 4.0 * (1.0 - 2f64.powf(-0.25))).abs() < 1e-12);

        for r in [&half, &pure] {
            assert!(is_real_state(&r.minimizer, 1e-12));
            let t = crate::optim::real_trace_at(
                &bloch_to_density(&BlochVector::new(0.0, 0.5, 0.0)).unwrap(),
                &r.minimizer,
                0.5,
                &tol(),
            );
            assert!(t.is_ok());
        }
    }

    #[test]
    fn me_value_consistent_with_achieved_trace() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for _ in 0..40 {
            let v = random_bloch(&mut rng);
            let a = rng.gen_range(0.05..0.95);
            let b = rng.gen_range(0.05..1.0f64);
            let p = params(a, b);
            let res = me_qubit_closed_form(&v, &p, &tol()).unwrap();
            let expect = h_alpha_beta(res.achieved_trace, a, b).unwrap();
            assert!((res.value - expect).abs() < 1e-12);
            assert!(is_real_state(&res.minimizer, 1e-12));
            // The reported minimizer reproduces the achieved trace.
            let direct = crate::optim::real_trace_at(
                &bloch_to_density(&v).unwrap(),
                &res.minimizer,
                a,
                &tol(),
            )
            .unwrap();
            assert!((direct - res.achieved_trace).abs() < 1e-9);
        }
    }

    #[test]
    fn me_numeric_matches_qubit_closed_form() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let cfg = OptimizerConfig::default();
        for _ in 0..25 {
            let v = random_bloch(&mut rng);
            let a = rng.gen_range(0.1..0.9);
            let b = rng.gen_range(0.1..1.0f64);
            let p = params(a, b);
            let analytic = me_qubit_closed_form(&v, &p, &tol()).unwrap();
            let numeric = me_numeric(&bloch_to_density(&v).unwrap(), &p, &cfg, &tol()).unwrap();
            assert!(
                (analytic.value - numeric.value).abs() < 1e-6,
                "({}, {}, {}) at ({a}, {b}): {} vs {}",
                v.r1,
                v.r2,
                v.r3,
                analytic.value,
                numeric.value
            );
        }
    }

    #[test]
    fn me_numeric_real_input_is_zero() {
        let rho = random_real_density(4, 2);
        let res = me_numeric(&rho, &params(0.5, 0.5), &OptimizerConfig::fast(), &tol()).unwrap();
        assert!(res.value.abs() < 1e-8);
    }

    #[test]
    fn me_numeric_never_beats_symmetrized_bound() {
        // me(rho) <= D(rho || (rho + rho^T)/2) because that sigma is feasible.
        for seed in 0..10u64 {
            let rho = random_density(4, seed);
            let p = params(0.4, 0.7);
            let res = me_numeric(&rho, &p, &OptimizerConfig::fast(), &tol()).unwrap();
            let t_sym =
                crate::optim::real_trace_at(&rho, &rho.real_part_state(), 0.4, &tol()).unwrap();
            let bound = h_alpha_beta(t_sym, 0.4, 0.7).unwrap();
            assert!(res.value <= bound + 1e-9);
        }
    }

    #[test]
    fn me_dispatch() {
        let v = BlochVector::new(0.2, 0.6, 0.1);
        let rho = bloch_to_density(&v).unwrap();
        let p = params(0.3, 0.9);
        let cfg = OptimizerConfig::fast();
        let via_me = me(&rho, &p, &cfg, &tol()).unwrap();
        let direct = me_qubit_closed_form(&v, &p, &tol()).unwrap();
        assert_eq!(via_me.value, direct.value);
        assert_eq!(via_me.method, MeMethod::QubitAnalytic);

        let w = werner(WernerParam::new(0.5).unwrap());
        let res = me(&w, &p, &cfg, &tol()).unwrap();
        assert_eq!(res.method, MeMethod::Numeric);
        assert!(res.value >= -1e-10 && res.value.is_finite());
    }

    #[test]
    fn identical_block_direct_sum_collapses() {
        // Two identical qubit blocks: the weighted direct sum has the same
        // value as the single block.
        let v = BlochVector::new(0.0, 0.5, 0.0);
        let rho1 = bloch_to_density(&v).unwrap();
        let p = params(0.5, 0.5);
        let block = me_qubit_closed_form(&v, &p, &tol()).unwrap();
        let joined = crate::matrix::direct_sum(0.5, &rho1, &rho1).unwrap();
        let res = me_numeric(&joined, &p, &OptimizerConfig::default(), &tol()).unwrap();
        assert!(
            (res.value - block.value).abs() < 1e-6,
            "{} vs {}",
            res.value,
            block.value
        );
    }

    #[test]
    fn comparison_measures_on_real_states() {
        for seed in 0..5u64 {
            let rho = random_real_density(3, seed);
            assert!(m_relative_entropy(&rho, &tol()).unwrap().abs() < 1e-9);
            assert!(
                m_tsallis(&rho, &TsallisParam::new(0.4).unwrap(), &tol())
                    .unwrap()
                    .abs()
                    < 1e-9
            );
            assert!(
                m_alpha_z(&rho, &AlphaZParams::new(0.5, 0.7).unwrap(), &tol())
                    .unwrap()
                    .abs()
                    < 1e-9
            );
        }
    }

    #[test]
    fn tsallis_extremes_and_identity() {
        let y = bloch_to_density(&BlochVector::new(0.0, 1.0, 0.0)).unwrap();
        for u in [0.2, 0.5, 0.8] {
            let v = m_tsallis(&y, &TsallisParam::new(u).unwrap(), &tol()).unwrap();
            assert!((v - 1.0).abs() < 1e-10);
        }
        // mh at beta = 1 equals the Tsallis measure divided by (1 - alpha).
        for seed in 0..10u64 {
            let rho = random_density(2, seed);
            for a in [0.3, 0.5, 0.7] {
                let lhs = mh(&rho, &params(a, 1.0), &tol()).unwrap();
                let rhs =
                    m_tsallis(&rho, &TsallisParam::new(a).unwrap(), &tol()).unwrap() / (1.0 - a);
                assert!((lhs - rhs).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn werner_closed_form_values() {
        let p = params(0.5, 0.5);
        // Literal formula endpoints.
        let at_one = werner_mh_closed_form(1.0, &p).unwrap();
        let expect = (2f64.powf(-0.5) - 1.0) / ((0.5 - 1.0) * 0.5);
        assert!((at_one - expect).abs() < 1e-12);
        assert!((at_one - 1.1715729).abs() < 1e-6);
        assert!(werner_mh_closed_form(0.0, &p).unwrap().abs() < 1e-12);
        let at_half = werner_mh_closed_form(0.5, &p).unwrap();
        assert!((at_half - 0.1957739).abs() < 1e-6);

        assert!((werner_linear_entropy(0.0).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(werner_linear_entropy(1.0).unwrap(), 0.0);
        assert!(werner_linear_entropy(1.5).is_err());
        assert!(werner_mh_closed_form(-0.2, &p).is_err());

        // Linear entropy of the constructed state matches the formula.
        for k in [0.0, 0.3, 0.8, 1.0] {
            let w = werner(WernerParam::new(k).unwrap());
            assert!((w.linear_entropy() - werner_linear_entropy(k).unwrap()).abs() < 1e-12);
        }
    }
}
