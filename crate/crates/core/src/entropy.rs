//! The unified two-parameter relative entropy family and the auxiliary
//! divergences the comparison measures are built from.
//!
//! The family D_a^b(rho || sigma) dispatches on (alpha, beta) in priority
//! order: alpha = 1 selects the log-based relative entropy, beta = 0 the
//! Renyi branch, beta = 1 the Tsallis-type branch, beta = 1/alpha the
//! literal reciprocal branch, and anything else the generic power branch
//! (T^beta - 1) / ((alpha - 1) beta) with T = tr(rho^alpha sigma^(1-alpha)).
//! Equality tests on the parameters use tolerance 1e-12 so round CLI inputs
//! hit the intended branch.
//!
//! Note the reciprocal branch is implemented exactly as printed even though
//! its prefactor makes it nonpositive for T <= 1, the opposite sign of the
//! generic branch at the same parameters. Monotone computations never reach
//! it because beta = 1/alpha > 1 lies outside their admissible range.

use crate::error::{Error, Result};
use crate::matrix::{
    eigh, support_projector, trace_product_power, DensityMatrix, Tolerances,
};

/// Tolerance for branch-dispatch equality tests on alpha and beta.
const BRANCH_TOL: f64 = 1e-12;
/// Eigenvalues at or below this are treated as outside the support.
const SUPPORT_CUT: f64 = 1e-12;

/// Parameters of the unified entropy. The full family accepts alpha in
/// [0, 1] and any real beta; measure computations restrict further.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyParams {
    pub alpha: f64,
    pub beta: f64,
}

impl EntropyParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) || !beta.is_finite() {
            return Err(Error::ParamOutOfRange(format!(
                "unified entropy needs alpha in [0,1] and finite beta, got ({alpha}, {beta})"
            )));
        }
        Ok(EntropyParams { alpha, beta })
    }

    /// True when the pair lies in the range where the family is a proper
    /// divergence: alpha in (0,1), beta in (0,1].
    pub fn in_monotone_range(&self) -> bool {
        self.alpha > 0.0 && self.alpha < 1.0 && self.beta > 0.0 && self.beta <= 1.0
    }
}

/// Parameters of the alpha-z fidelity functional, constrained to
/// 0 < max(alpha, 1 - alpha) <= z < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaZParams {
    pub alpha: f64,
    pub z: f64,
}

impl AlphaZParams {
    pub fn new(alpha: f64, z: f64) -> Result<Self> {
        let m = alpha.max(1.0 - alpha);
        if !(m > 0.0 && m <= z && z < 1.0) {
            return Err(Error::ParamOutOfRange(format!(
                "alpha-z parameters need 0 < max(alpha, 1-alpha) <= z < 1, got ({alpha}, {z})"
            )));
        }
        Ok(AlphaZParams { alpha, z })
    }
}

/// Order parameter of the Tsallis-type comparison measure, u in (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsallisParam {
    pub u: f64,
}

impl TsallisParam {
    pub fn new(u: f64) -> Result<Self> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::ParamOutOfRange(format!("u={u} outside (0,1)")));
        }
        Ok(TsallisParam { u })
    }
}

/// Generic power branch: (T^beta - 1) / ((alpha - 1) beta). Strictly
/// decreasing in T for alpha < 1, beta > 0.
pub fn h_alpha_beta(t: f64, alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::ParamOutOfRange(format!(
            "alpha {alpha} outside (0,1)"
        )));
    }
    if beta == 0.0 {
        return Err(Error::ParamOutOfRange("beta must be nonzero".into()));
    }
    if t < 0.0 {
        return Err(Error::ParamOutOfRange(format!("trace value {t} < 0")));
    }
    Ok((t.powf(beta) - 1.0) / ((alpha - 1.0) * beta))
}

/// Renyi branch: log2(T) / (alpha - 1). T = 0 maps to +infinity.
pub fn renyi_branch(t: f64, alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0 && alpha < 1.0) {
        return Err(Error::ParamOutOfRange(format!(
            "alpha {alpha} outside [0,1)"
        )));
    }
    if t < 0.0 {
        return Err(Error::ParamOutOfRange(format!("trace value {t} < 0")));
    }
    if t == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(t.log2() / (alpha - 1.0))
}

/// Literal reciprocal branch at beta = 1/alpha:
/// (T^(1/alpha) - 1) / (1/alpha - 1). Nonpositive for T <= 1.
pub fn lim_branch(t: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::ParamOutOfRange(format!(
            "alpha {alpha} outside (0,1)"
        )));
    }
    if t < 0.0 {
        return Err(Error::ParamOutOfRange(format!("trace value {t} < 0")));
    }
    Ok((t.powf(1.0 / alpha) - 1.0) / (1.0 / alpha - 1.0))
}

/// Log-based relative entropy tr(rho log2 rho) - tr(rho log2 sigma), with a
/// support check. Errors with [`Error::SupportError`] when rho puts weight
/// outside the support of sigma; the unified dispatcher converts that to a
/// +infinity sentinel instead so minimizations stay total.
pub fn umegaki(rho: &DensityMatrix, sigma: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    let er = eigh(rho.matrix(), tol)?;
    let es = eigh(sigma.matrix(), tol)?;
    let d = rho.dim();
    if sigma.dim() != d {
        return Err(Error::DimMismatch(format!(
            "umegaki dims {} vs {}",
            d,
            sigma.dim()
        )));
    }

    let mut s_rho = 0.0;
    for &l in &er.eigenvalues {
        if l > SUPPORT_CUT {
            s_rho += l * l.log2();
        }
    }

    // tr(rho log2 sigma) = sum_j log2(mu_j) <w_j| rho |w_j>; mass on the
    // kernel of sigma means the divergence is infinite.
    let mut s_cross = 0.0;
    let mut kernel_mass = 0.0;
    for j in 0..d {
        let mu = es.eigenvalues[j];
        let mut q = 0.0;
        for a in 0..d {
            for b in 0..d {
                let w = es.eigenvectors[(a, j)].conj() * rho.matrix()[(a, b)] * es.eigenvectors[(b, j)];
                q += w.re;
            }
        }
        let q = q.max(0.0);
        if mu > SUPPORT_CUT {
            s_cross += q * mu.log2();
        } else {
            kernel_mass += q;
        }
    }
    if kernel_mass > 1e-10 {
        return Err(Error::SupportError);
    }
    Ok(s_rho - s_cross)
}

/// tr(rho^alpha sigma^(1-alpha)) extended to the closed interval [0, 1] via
/// support projectors at the endpoints.
pub fn trace_power_closed(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    alpha: f64,
    tol: &Tolerances,
) -> Result<f64> {
    if alpha <= BRANCH_TOL {
        let proj = support_projector(rho.matrix(), SUPPORT_CUT, tol)?;
        return Ok(proj.trace_product_re(sigma.matrix()));
    }
    if alpha >= 1.0 - BRANCH_TOL {
        let proj = support_projector(sigma.matrix(), SUPPORT_CUT, tol)?;
        return Ok(proj.trace_product_re(rho.matrix()));
    }
    trace_product_power(rho, sigma, alpha, tol)
}

/// The unified relative entropy with full branch dispatch.
pub fn unified_relative_entropy(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    p: &EntropyParams,
    tol: &Tolerances,
) -> Result<f64> {
    let EntropyParams { alpha, beta } = *p;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::ParamOutOfRange(format!(
            "alpha {alpha} outside [0,1]"
        )));
    }
    if (alpha - 1.0).abs() <= BRANCH_TOL {
        return match umegaki(rho, sigma, tol) {
            Err(Error::SupportError) => Ok(f64::INFINITY),
            other => other,
        };
    }
    let t = trace_power_closed(rho, sigma, alpha, tol)?;
    if beta.abs() <= BRANCH_TOL {
        renyi_branch(t, alpha)
    } else if (beta - 1.0).abs() <= BRANCH_TOL {
        Ok((t - 1.0) / (alpha - 1.0))
    } else if alpha > 0.0 && (beta - 1.0 / alpha).abs() <= BRANCH_TOL {
        lim_branch(t, alpha)
    } else {
        h_alpha_beta(t, alpha, beta)
    }
}

/// The alpha-z fidelity tr(sigma^((1-a)/2z) rho^(a/z) sigma^((1-a)/2z))^z.
pub fn alpha_z_fidelity(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    p: &AlphaZParams,
    tol: &Tolerances,
) -> Result<f64> {
    let AlphaZParams { alpha, z } = *p;
    let outer = crate::matrix::mat_pow(sigma.matrix(), (1.0 - alpha) / (2.0 * z), tol)?;
    let inner = crate::matrix::mat_pow(rho.matrix(), alpha / z, tol)?;
    let sandwich = outer.mul(&inner).mul(&outer);
    // The sandwich is PSD up to rounding; symmetrize before powering.
    let sym = sandwich.add(&sandwich.dagger()).scale_re(0.5);
    let eig = eigh(&sym, tol)?;
    let mut f = 0.0;
    for &l in &eig.eigenvalues {
        if l > 0.0 {
            f += l.powf(z);
        }
    }
    Ok(f)
}
