//! Constructors for the states and channels the toolkit works with: Bloch
//! qubits, the modified Werner and isotropic families, the bipartite
//! counterexample state, seeded random states and real Kraus channels, plus
//! the free-state predicate and channel application.
//!
//! Randomness is explicit: every generator takes a seed and uses ChaCha8, so
//! streams are reproducible and callers parallelize by splitting seeds.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, DensityMatrix, Tolerances};

/// Bloch vector (r1, r2, r3) of a qubit state. Only r2 produces imaginary
/// matrix elements in the computational basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl BlochVector {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Self {
        BlochVector { r1, r2, r3 }
    }

    pub fn norm(&self) -> f64 {
        (self.r1 * self.r1 + self.r2 * self.r2 + self.r3 * self.r3).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.norm();
        if r > 1.0 + 1e-12 {
            return Err(Error::BlochOutOfBall(r));
        }
        Ok(())
    }
}

/// rho = (I + r . sigma) / 2.
pub fn bloch_to_density(v: &BlochVector) -> Result<DensityMatrix> {
    v.validate()?;
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 0)] = Complex64::new(0.5 * (1.0 + v.r3), 0.0);
    m[(0, 1)] = Complex64::new(0.5 * v.r1, -0.5 * v.r2);
    m[(1, 0)] = Complex64::new(0.5 * v.r1, 0.5 * v.r2);
    m[(1, 1)] = Complex64::new(0.5 * (1.0 - v.r3), 0.0);
    Ok(DensityMatrix::new_unchecked(m))
}

pub fn density_to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimMismatch(format!(
            "Bloch decomposition needs dim 2, got {}",
            rho.dim()
        )));
    }
    let m = rho.matrix();
    Ok(BlochVector {
        r1: 2.0 * m[(1, 0)].re,
        r2: 2.0 * m[(1, 0)].im,
        r3: m[(0, 0)].re - m[(1, 1)].re,
    })
}

/// Parameter of the modified Werner family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParam {
    pub k: f64,
}

impl WernerParam {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::ParamOutOfRange(format!("Werner k={k} outside [0,1]")));
        }
        Ok(WernerParam { k })
    }
}

/// Parameter of the modified isotropic family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicParam {
    pub f: f64,
}

impl IsotropicParam {
    pub fn new(f: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::ParamOutOfRange(format!(
                "isotropic F={f} outside [0,1]"
            )));
        }
        Ok(IsotropicParam { f })
    }
}

/// The modified Werner state: diag((1-k)/4, inner, (1-k)/4) with the inner
/// 2x2 block (1+k)/4 on the diagonal and +/- i k/2 off it.
pub fn werner(p: WernerParam) -> DensityMatrix {
    let k = p.k;
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = Complex64::new((1.0 - k) / 4.0, 0.0);
    m[(1, 1)] = Complex64::new((1.0 + k) / 4.0, 0.0);
    m[(1, 2)] = Complex64::new(0.0, k / 2.0);
    m[(2, 1)] = Complex64::new(0.0, -k / 2.0);
    m[(2, 2)] = Complex64::new((1.0 + k) / 4.0, 0.0);
    m[(3, 3)] = Complex64::new((1.0 - k) / 4.0, 0.0);
    DensityMatrix::new_unchecked(m)
}

/// The modified isotropic state: imaginary block on the |00>, |11> corner,
/// (1-F)/3 on the middle diagonal.
pub fn isotropic(p: IsotropicParam) -> DensityMatrix {
    let f = p.f;
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = Complex64::new((2.0 * f + 1.0) / 6.0, 0.0);
    m[(0, 3)] = Complex64::new(0.0, (4.0 * f - 1.0) / 6.0);
    m[(1, 1)] = Complex64::new((1.0 - f) / 3.0, 0.0);
    m[(2, 2)] = Complex64::new((1.0 - f) / 3.0, 0.0);
    m[(3, 0)] = Complex64::new(0.0, -(4.0 * f - 1.0) / 6.0);
    m[(3, 3)] = Complex64::new((2.0 * f + 1.0) / 6.0, 0.0);
    DensityMatrix::new_unchecked(m)
}

/// The pure bipartite state (|00> + i|11>)/sqrt(2) whose marginals are both
/// maximally mixed (and hence free) while the joint state is not.
pub fn remark1_state() -> DensityMatrix {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let psi = [
        Complex64::new(inv, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, inv),
    ];
    DensityMatrix::from_pure(&psi).expect("normalized by construction")
}

/// Its state vector, for the pure-state measure path.
pub fn remark1_vector() -> Vec<Complex64> {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        Complex64::new(inv, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, inv),
    ]
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Full-rank random state: G G^dagger / tr with G complex Ginibre.
pub fn random_density(d: usize, seed: u64) -> DensityMatrix {
    assert!(d >= 1);
    let mut rng = rng_for(seed);
    let mut g = ComplexMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = Complex64::new(standard_normal(&mut rng), standard_normal(&mut rng));
        }
    }
    let gg = g.mul(&g.dagger());
    let tr = gg.trace().re;
    DensityMatrix::new_unchecked(gg.scale_re(1.0 / tr))
}

/// Random rank-1 state from a normalized complex Gaussian vector.
pub fn random_pure(d: usize, seed: u64) -> DensityMatrix {
    assert!(d >= 1);
    let mut rng = rng_for(seed);
    let psi: Vec<Complex64> = (0..d)
        .map(|_| Complex64::new(standard_normal(&mut rng), standard_normal(&mut rng)))
        .collect();
    DensityMatrix::from_pure(&psi).expect("Gaussian vector is nonzero almost surely")
}

/// Random free state: G G^T / tr with G real Gaussian.
pub fn random_real_density(d: usize, seed: u64) -> DensityMatrix {
    assert!(d >= 1);
    let mut rng = rng_for(seed);
    let mut g = ComplexMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = Complex64::new(standard_normal(&mut rng), 0.0);
        }
    }
    let gg = g.mul(&g.dagger());
    let tr = gg.trace().re;
    DensityMatrix::new_unchecked(gg.scale_re(1.0 / tr))
}

/// A quantum channel with all-real Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausSet {
    pub dim_in: usize,
    pub dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausSet {
    /// Validate realness and completeness (sum K^T K = I) and wrap.
    pub fn new(kraus: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::ParamOutOfRange("empty Kraus set".into()))?;
        let d = first.dim();
        let mut completeness = ComplexMatrix::zeros(d);
        for k in &kraus {
            if k.dim() != d {
                return Err(Error::DimMismatch(
                    "Kraus operators have mixed dimensions".into(),
                ));
            }
            if k.max_imag_abs() > tol.real_tol {
                return Err(Error::ParamOutOfRange(format!(
                    "Kraus operator has imaginary entries up to {:e}",
                    k.max_imag_abs()
                )));
            }
            completeness = completeness.add(&k.transpose().mul(k));
        }
        let defect = completeness.max_abs_diff(&ComplexMatrix::identity(d));
        if defect > 1e-10 {
            return Err(Error::ParamOutOfRange(format!(
                "Kraus completeness defect {defect:e}"
            )));
        }
        Ok(KrausSet {
            dim_in: d,
            dim_out: d,
            kraus,
        })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    /// The identity channel on dimension d.
    pub fn identity(d: usize) -> Self {
        KrausSet {
            dim_in: d,
            dim_out: d,
            kraus: vec![ComplexMatrix::identity(d)],
        }
    }

    /// Completely dephasing channel in the computational basis.
    pub fn dephasing(d: usize) -> Self {
        let kraus = (0..d)
            .map(|i| {
                let mut k = ComplexMatrix::zeros(d);
                k[(i, i)] = Complex64::new(1.0, 0.0);
                k
            })
            .collect();
        KrausSet {
            dim_in: d,
            dim_out: d,
            kraus,
        }
    }
}

/// Random real channel: a (n d) x d real Gaussian block is orthonormalized
/// column-by-column and sliced into n stacked d x d Kraus operators, so
/// completeness holds by construction.
pub fn random_real_kraus(d: usize, n_kraus: usize, seed: u64) -> KrausSet {
    assert!(d >= 1 && n_kraus >= 1);
    let rows = n_kraus * d;
    let mut rng = rng_for(seed);
    let mut cols: Vec<Vec<f64>> = (0..d)
        .map(|_| (0..rows).map(|_| standard_normal(&mut rng)).collect())
        .collect();
    // Modified Gram-Schmidt.
    for j in 0..d {
        for i in 0..j {
            let dot: f64 = cols[j].iter().zip(cols[i].iter()).map(|(a, b)| a * b).sum();
            let prev = cols[i].clone();
            for (x, p) in cols[j].iter_mut().zip(prev.iter()) {
                *x -= dot * p;
            }
        }
        let norm: f64 = cols[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    let kraus = (0..n_kraus)
        .map(|b| {
            let mut k = ComplexMatrix::zeros(d);
            for i in 0..d {
                for j in 0..d {
                    k[(i, j)] = Complex64::new(cols[j][b * d + i], 0.0);
                }
            }
            k
        })
        .collect();
    KrausSet {
        dim_in: d,
        dim_out: d,
        kraus,
    }
}

/// Apply the channel: sum_j K_j rho K_j^dagger.
pub fn apply_channel(rho: &DensityMatrix, ch: &KrausSet) -> Result<DensityMatrix> {
    if rho.dim() != ch.dim_in {
        return Err(Error::DimMismatch(format!(
            "state dim {} vs channel dim {}",
            rho.dim(),
            ch.dim_in
        )));
    }
    let mut out = ComplexMatrix::zeros(ch.dim_out);
    for k in &ch.kraus {
        out = out.add(&k.mul(rho.matrix()).mul(&k.dagger()));
    }
    Ok(DensityMatrix::new_unchecked(out))
}

/// Apply a general (not necessarily real) Kraus list. Used by the divergence
/// property checks, which quantify data processing under arbitrary channels.
pub fn apply_kraus_list(rho: &DensityMatrix, kraus: &[ComplexMatrix]) -> DensityMatrix {
    let d = kraus[0].dim();
    let mut out = ComplexMatrix::zeros(d);
    for k in kraus {
        out = out.add(&k.mul(rho.matrix()).mul(&k.dagger()));
    }
    DensityMatrix::new_unchecked(out)
}

/// Random general channel via QR on a complex Gaussian block.
pub fn random_complex_kraus(d: usize, n_kraus: usize, seed: u64) -> Vec<ComplexMatrix> {
    assert!(d >= 1 && n_kraus >= 1);
    let rows = n_kraus * d;
    let mut rng = rng_for(seed);
    let mut cols: Vec<Vec<Complex64>> = (0..d)
        .map(|_| {
            (0..rows)
                .map(|_| Complex64::new(standard_normal(&mut rng), standard_normal(&mut rng)))
                .collect()
        })
        .collect();
    for j in 0..d {
        for i in 0..j {
            let dot: Complex64 = cols[i]
                .iter()
                .zip(cols[j].iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            let prev = cols[i].clone();
            for (x, p) in cols[j].iter_mut().zip(prev.iter()) {
                *x -= dot * p;
            }
        }
        let norm: f64 = cols[j].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    (0..n_kraus)
        .map(|b| {
            let mut k = ComplexMatrix::zeros(d);
            for i in 0..d {
                for j in 0..d {
                    k[(i, j)] = cols[j][b * d + i];
                }
            }
            k
        })
        .collect()
}

/// True iff all matrix elements are real within `tol`.
pub fn is_real_state(rho: &DensityMatrix, tol: f64) -> bool {
    rho.matrix().max_imag_abs() <= tol
}

/// Selective Kraus outcomes (p_j, rho_j); outcomes with probability below
/// 1e-14 are dropped to avoid 0/0 normalization.
pub fn kraus_selective_outcomes(
    rho: &DensityMatrix,
    ch: &KrausSet,
) -> Result<Vec<(f64, DensityMatrix)>> {
    if rho.dim() != ch.dim_in {
        return Err(Error::DimMismatch(format!(
            "state dim {} vs channel dim {}",
            rho.dim(),
            ch.dim_in
        )));
    }
    let mut outcomes = Vec::with_capacity(ch.len());
    for k in &ch.kraus {
        let unnorm = k.mul(rho.matrix()).mul(&k.dagger());
        let p = unnorm.trace().re;
        if p < 1e-14 {
            continue;
        }
        outcomes.push((p, DensityMatrix::new_unchecked(unnorm.scale_re(1.0 / p))));
    }
    Ok(outcomes)
}

/// JSON state descriptor accepted by the CLI. Exactly one variant key.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateDescriptor {
    Dense {
        dim: usize,
        re: Vec<Vec<f64>>,
        #[serde(default)]
        im: Option<Vec<Vec<f64>>>,
    },
    Bloch([f64; 3]),
    Werner(f64),
    Isotropic(f64),
    Remark1(bool),
    Pure {
        re: Vec<f64>,
        #[serde(default)]
        im: Option<Vec<f64>>,
    },
}

impl StateDescriptor {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::BadDescriptor(e.to_string()))
    }

    /// Build the described density matrix, validating it.
    pub fn build(&self, tol: &Tolerances) -> Result<DensityMatrix> {
        match self {
            StateDescriptor::Dense { dim, re, im } => {
                let d = *dim;
                let flat = |rows: &Vec<Vec<f64>>| -> Result<Vec<f64>> {
                    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                        return Err(Error::BadDescriptor(format!(
                            "dense matrix is not {d} x {d}"
                        )));
                    }
                    Ok(rows.iter().flatten().copied().collect())
                };
                let re = flat(re)?;
                let im = match im {
                    Some(rows) => flat(rows)?,
                    None => vec![0.0; d * d],
                };
                let m = ComplexMatrix::from_parts(d, &re, &im)?;
                DensityMatrix::new(m, tol)
            }
            StateDescriptor::Bloch([r1, r2, r3]) => {
                bloch_to_density(&BlochVector::new(*r1, *r2, *r3))
            }
            StateDescriptor::Werner(k) => Ok(werner(WernerParam::new(*k)?)),
            StateDescriptor::Isotropic(f) => Ok(isotropic(IsotropicParam::new(*f)?)),
            StateDescriptor::Remark1(flag) => {
                if !*flag {
                    return Err(Error::BadDescriptor("remark1 must be true".into()));
                }
                Ok(remark1_state())
            }
            StateDescriptor::Pure { re, im } => {
                let n = re.len();
                let im = match im {
                    Some(v) if v.len() == n => v.clone(),
                    Some(_) => {
                        return Err(Error::BadDescriptor(
                            "pure state re/im length mismatch".into(),
                        ))
                    }
                    None => vec![0.0; n],
                };
                let psi: Vec<Complex64> = re
                    .iter()
                    .zip(im.iter())
                    .map(|(&r, &i)| Complex64::new(r, i))
                    .collect();
                DensityMatrix::from_pure(&psi)
            }
        }
    }

    /// The dense JSON form of a state, used for replayable counterexamples.
    pub fn dense_from(rho: &DensityMatrix) -> Self {
        let d = rho.dim();
        let mut re = vec![vec![0.0; d]; d];
        let mut im = vec![vec![0.0; d]; d];
        for i in 0..d {
            for j in 0..d {
                re[i][j] = rho.matrix()[(i, j)].re;
                im[i][j] = rho.matrix()[(i, j)].im;
            }
        }
        StateDescriptor::Dense {
            dim: d,
            re,
            im: Some(im),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serialization cannot fail")
    }
}
