//! Derivative-free maximization of T(sigma) = tr(rho^alpha sigma^(1-alpha))
//! over real density matrices sigma.
//!
//! The search runs multi-start Nelder-Mead over the unconstrained
//! parameterization sigma = R R^T / tr(R R^T) with R a real d x d matrix.
//! Deterministic starts come first: the spectral alignment point described
//! below, the symmetrized state (rho + rho^T)/2, and the maximally mixed
//! state; remaining restarts are seeded random PSD matrices. The best value
//! across restarts wins, ties resolved by restart index, so the reduction is
//! independent of scheduling order.
//!
//! Alignment start: for real sigma the objective equals tr(M sigma^(1-alpha))
//! with M = Re(rho^alpha), a real symmetric PSD matrix. By the trace
//! rearrangement inequality the maximizer shares M's eigenbasis, and the
//! simplex optimization of sum_i m_i s_i^(1-alpha) over the spectrum gives
//! s_i proportional to m_i^(1/alpha). That point is feasible and already
//! optimal up to rounding, so Nelder-Mead only has to polish it; the extra
//! random restarts guard the algebra.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::matrix::{eigh, mat_pow, reconstruct, ComplexMatrix, DensityMatrix, Tolerances};

/// Knobs for the numeric minimizer and the test-side grid oracle.
#[derive(Debug, Clone, Copy)]
pub struct OptimizerConfig {
    /// Grid resolution per axis for the qubit oracle (tests only).
    pub grid_resolution: usize,
    /// Number of Nelder-Mead restarts, deterministic starts included.
    pub restarts: usize,
    /// Iteration cap per restart.
    pub max_iters: usize,
    /// Converged when the simplex value spread drops below this.
    pub value_tol: f64,
    /// Converged when the simplex diameter drops below this.
    pub simplex_tol: f64,
    /// Seed for the random restarts.
    pub rng_seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            grid_resolution: 400,
            restarts: 8,
            max_iters: 20_000,
            value_tol: 1e-10,
            simplex_tol: 1e-12,
            rng_seed: 0x1A11_D05E,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_resolution == 0
            || self.restarts == 0
            || self.max_iters == 0
            || self.value_tol <= 0.0
            || self.simplex_tol <= 0.0
        {
            return Err(crate::error::Error::ParamOutOfRange(
                "optimizer config fields must be positive".into(),
            ));
        }
        Ok(())
    }

    /// A cheaper profile for randomized property suites: deterministic
    /// starts only, modest iteration cap.
    pub fn fast() -> Self {
        OptimizerConfig {
            restarts: 3,
            max_iters: 800,
            ..OptimizerConfig::default()
        }
    }
}

/// Outcome of the search: the best trace value, the sigma achieving it, and
/// bookkeeping.
pub struct SearchOutcome {
    pub achieved_trace: f64,
    pub minimizer: DensityMatrix,
    pub iterations: usize,
    pub converged: bool,
}

/// Real symmetric matrix from packed parameters: sigma(R) = R R^T / tr(R R^T).
fn sigma_from_params(params: &[f64], d: usize) -> Option<Vec<f64>> {
    let mut s = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            let mut acc = 0.0;
            for k in 0..d {
                acc += params[i * d + k] * params[j * d + k];
            }
            s[i * d + j] = acc;
            s[j * d + i] = acc;
        }
    }
    let tr: f64 = (0..d).map(|i| s[i * d + i]).sum();
    if tr <= 1e-300 {
        return None;
    }
    for x in s.iter_mut() {
        *x /= tr;
    }
    Some(s)
}

/// Objective context: precomputed M = Re(rho^alpha) and exponent.
struct Objective<'a> {
    m_real: Vec<f64>,
    d: usize,
    one_minus_alpha: f64,
    tol: &'a Tolerances,
}

impl Objective<'_> {
    /// tr(M sigma^(1-alpha)) for the packed real symmetric sigma.
    fn trace_value(&self, sigma: &[f64]) -> f64 {
        let d = self.d;
        let cm = ComplexMatrix::from_real(d, sigma).expect("square by construction");
        let eig = match eigh(&cm, self.tol) {
            Ok(e) => e,
            Err(_) => return f64::NEG_INFINITY,
        };
        let powered: Vec<f64> = eig
            .eigenvalues
            .iter()
            .map(|&l| l.max(0.0).powf(self.one_minus_alpha))
            .collect();
        let sp = reconstruct(&eig.eigenvectors, &powered);
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += self.m_real[i * d + j] * sp[(j, i)].re;
            }
        }
        acc
    }

    fn eval_params(&self, params: &[f64]) -> f64 {
        match sigma_from_params(params, self.d) {
            Some(s) => -self.trace_value(&s),
            None => f64::INFINITY,
        }
    }
}

/// Maximize tr(rho^alpha sigma^(1-alpha)) over real states sigma.
pub fn maximize_real_trace(
    rho: &DensityMatrix,
    alpha: f64,
    cfg: &OptimizerConfig,
    tol: &Tolerances,
) -> Result<SearchOutcome> {
    cfg.validate()?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(crate::error::Error::ParamOutOfRange(format!(
            "alpha {alpha} outside (0,1)"
        )));
    }
    let d = rho.dim();
    let pa = mat_pow(rho.matrix(), alpha, tol)?;
    let mut m_real = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            m_real[i * d + j] = pa[(i, j)].re;
        }
    }
    let objective = Objective {
        m_real,
        d,
        one_minus_alpha: 1.0 - alpha,
        tol,
    };

    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(cfg.restarts);
    if let Some(align) = alignment_sigma(&objective.m_real, d, alpha, tol) {
        starts.push(sqrt_params(&align, d, tol));
    }
    let sym = rho.real_part_state();
    let mut sym_flat = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            sym_flat[i * d + j] = sym.matrix()[(i, j)].re;
        }
    }
    starts.push(sqrt_params(&sym_flat, d, tol));
    let mut mixed = vec![0.0; d * d];
    for i in 0..d {
        mixed[i * d + i] = 1.0 / d as f64;
    }
    starts.push(sqrt_params(&mixed, d, tol));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    while starts.len() < cfg.restarts {
        let p: Vec<f64> = (0..d * d)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        starts.push(p);
    }
    starts.truncate(cfg.restarts.max(1));

    let mut best_value = f64::INFINITY;
    let mut best_params: Vec<f64> = starts[0].clone();
    let mut total_iters = 0usize;
    let mut any_converged = false;
    for start in &starts {
        let run = nelder_mead(
            |p| objective.eval_params(p),
            start,
            0.05,
            cfg.max_iters,
            cfg.value_tol,
            cfg.simplex_tol,
        );
        total_iters += run.iterations;
        any_converged |= run.converged;
        if run.value < best_value {
            best_value = run.value;
            best_params = run.point;
        }
    }

    let sigma_flat = sigma_from_params(&best_params, d)
        .expect("best restart produced a degenerate parameterization");
    let achieved = objective.trace_value(&sigma_flat);
    let mat = ComplexMatrix::from_real(d, &sigma_flat)?;
    Ok(SearchOutcome {
        achieved_trace: achieved,
        minimizer: DensityMatrix::new_unchecked(mat),
        iterations: total_iters,
        converged: any_converged,
    })
}

/// The aligned optimum: eigenbasis of M, spectrum proportional to m_i^(1/alpha).
fn alignment_sigma(m_real: &[f64], d: usize, alpha: f64, tol: &Tolerances) -> Option<Vec<f64>> {
    let cm = ComplexMatrix::from_real(d, m_real).ok()?;
    let eig = eigh(&cm, tol).ok()?;
    let weights: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&m| m.max(0.0).powf(1.0 / alpha))
        .collect();
    let norm: f64 = weights.iter().sum();
    if norm <= 0.0 {
        return None;
    }
    let spectrum: Vec<f64> = weights.iter().map(|w| w / norm).collect();
    let sigma = reconstruct(&eig.eigenvectors, &spectrum);
    let mut flat = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            flat[i * d + j] = sigma[(i, j)].re;
        }
    }
    Some(flat)
}

/// Packed parameters R with R R^T = sigma, via the symmetric square root.
fn sqrt_params(sigma_flat: &[f64], d: usize, tol: &Tolerances) -> Vec<f64> {
    let cm = ComplexMatrix::from_real(d, sigma_flat).expect("square");
    let eig = eigh(&cm, tol).expect("symmetric input");
    let roots: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let r = reconstruct(&eig.eigenvectors, &roots);
    let mut flat = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            flat[i * d + j] = r[(i, j)].re;
        }
    }
    flat
}

struct NmRun {
    point: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

/// Standard Nelder-Mead with reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2 over an orthogonal initial simplex.
fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    step: f64,
    max_iters: usize,
    value_tol: f64,
    simplex_tol: f64,
) -> NmRun {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        let v = f(&p);
        simplex.push((p, v));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        iterations += 1;
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let spread = simplex[n].1 - simplex[0].1;
        let diameter = simplex
            .iter()
            .skip(1)
            .map(|(p, _)| {
                p.iter()
                    .zip(simplex[0].0.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread.abs() < value_tol || diameter < simplex_tol {
            converged = true;
            break;
        }

        let mut centroid = vec![0.0; n];
        for (p, _) in simplex.iter().take(n) {
            for (c, x) in centroid.iter_mut().zip(p.iter()) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(worst.0.iter())
            .map(|(c, w)| 2.0 * c - w)
            .collect();
        let f_reflect = f(&reflect);

        if f_reflect < simplex[0].1 {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(worst.0.iter())
                .map(|(c, w)| 3.0 * c - 2.0 * w)
                .collect();
            let f_expand = f(&expand);
            simplex[n] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
        } else if f_reflect < simplex[n - 1].1 {
            simplex[n] = (reflect, f_reflect);
        } else {
            let contract: Vec<f64> = if f_reflect < worst.1 {
                centroid
                    .iter()
                    .zip(reflect.iter())
                    .map(|(c, r)| 0.5 * (c + r))
                    .collect()
            } else {
                centroid
                    .iter()
                    .zip(worst.0.iter())
                    .map(|(c, w)| 0.5 * (c + w))
                    .collect()
            };
            let f_contract = f(&contract);
            if f_contract < worst.1.min(f_reflect) {
                simplex[n] = (contract, f_contract);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let p: Vec<f64> = entry
                        .0
                        .iter()
                        .zip(best.iter())
                        .map(|(x, b)| 0.5 * (x + b))
                        .collect();
                    let v = f(&p);
                    *entry = (p, v);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    NmRun {
        point: simplex[0].0.clone(),
        value: simplex[0].1,
        iterations,
        converged,
    }
}

/// Trace value at a fixed sigma, without running the search.
pub fn real_trace_at(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    alpha: f64,
    tol: &Tolerances,
) -> Result<f64> {
    let pa = mat_pow(rho.matrix(), alpha, tol)?;
    let sp = mat_pow(sigma.matrix(), 1.0 - alpha, tol)?;
    Ok(pa.trace_product_re(&sp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bloch_to_density, random_density, random_real_density, BlochVector};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn real_input_reaches_unity() {
        for seed in 0..5u64 {
            let rho = random_real_density(3, seed);
            let out =
                maximize_real_trace(&rho, 0.5, &OptimizerConfig::default(), &tol()).unwrap();
            assert!((out.achieved_trace - 1.0).abs() < 1e-8, "seed {seed}");
        }
    }

    #[test]
    fn nelder_mead_quadratic() {
        let run = nelder_mead(
            |p| p.iter().map(|x| (x - 1.5) * (x - 1.5)).sum(),
            &[0.0, 0.0, 0.0],
            0.5,
            5000,
            1e-14,
            1e-14,
        );
        assert!(run.converged);
        for x in run.point {
            assert!((x - 1.5).abs() < 1e-5);
        }
    }

    #[test]
    fn matches_known_qubit_values() {
        // Pure y state: max trace over real sigma is sqrt(2)/2.
        let rho = bloch_to_density(&BlochVector::new(0.0, 1.0, 0.0)).unwrap();
        let out = maximize_real_trace(&rho, 0.5, &OptimizerConfig::default(), &tol()).unwrap();
        assert!((out.achieved_trace - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);

        // (0, 1/2, 0): maximum is (sqrt(1/2) + sqrt(3/2)) / 2 at sigma = I/2.
        let rho = bloch_to_density(&BlochVector::new(0.0, 0.5, 0.0)).unwrap();
        let out = maximize_real_trace(&rho, 0.5, &OptimizerConfig::default(), &tol()).unwrap();
        let expect = 0.5 * (0.5f64.sqrt() + 1.5f64.sqrt());
        assert!((out.achieved_trace - expect).abs() < 1e-9);
        assert!(crate::states::is_real_state(&out.minimizer, 1e-12));
    }

    #[test]
    fn fast_profile_agrees_with_default() {
        for seed in 0..5u64 {
            let rho = random_density(4, seed);
            let full =
                maximize_real_trace(&rho, 0.4, &OptimizerConfig::default(), &tol()).unwrap();
            let fast = maximize_real_trace(&rho, 0.4, &OptimizerConfig::fast(), &tol()).unwrap();
            assert!((full.achieved_trace - fast.achieved_trace).abs() < 1e-7);
        }
    }

    #[test]
    fn never_beats_feasible_upper_bound() {
        // The symmetrized state is feasible, so the optimum is at least as
        // good (trace at least as large).
        for seed in 0..10u64 {
            let rho = random_density(3, seed);
            let out = maximize_real_trace(&rho, 0.6, &OptimizerConfig::fast(), &tol()).unwrap();
            let at_sym = real_trace_at(&rho, &rho.real_part_state(), 0.6, &tol()).unwrap();
            assert!(out.achieved_trace >= at_sym - 1e-9);
        }
    }
}
