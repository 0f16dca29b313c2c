//! Dense complex-matrix foundation: Hermitian eigendecomposition, fractional
//! matrix powers, conjugation/transpose, tensor products, weighted direct
//! sums, partial traces, and the trace functional tr(rho^a sigma^(1-a)) that
//! every divergence in this crate is built from.
//!
//! Everything is desk scale (dimensions up to a few dozen), double precision,
//! and deterministic: the eigensolver is a cyclic Jacobi iteration with a
//! fixed sweep order, so repeated calls on the same input produce identical
//! output.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum number of Jacobi sweeps before giving up.
const MAX_SWEEPS: usize = 100;
/// Convergence threshold on the off-diagonal Frobenius norm.
const OFF_DIAG_TOL: f64 = 1e-13;

/// Validation tolerances used when constructing [`DensityMatrix`] values and
/// checking Hermiticity.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub herm_tol: f64,
    pub trace_tol: f64,
    pub psd_tol: f64,
    pub real_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm_tol: 1e-10,
            trace_tol: 1e-10,
            psd_tol: 1e-9,
            real_tol: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("herm_tol", self.herm_tol),
            ("trace_tol", self.trace_tol),
            ("psd_tol", self.psd_tol),
            ("real_tol", self.real_tol),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::ParamOutOfRange(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// A square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        ComplexMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from row-major real and imaginary parts.
    pub fn from_parts(dim: usize, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != dim * dim || im.len() != dim * dim {
            return Err(Error::DimMismatch(format!(
                "expected {} entries, got re={} im={}",
                dim * dim,
                re.len(),
                im.len()
            )));
        }
        Ok(ComplexMatrix {
            dim,
            entries: re
                .iter()
                .zip(im.iter())
                .map(|(&r, &i)| Complex64::new(r, i))
                .collect(),
        })
    }

    pub fn from_real(dim: usize, re: &[f64]) -> Result<Self> {
        let im = vec![0.0; re.len()];
        Self::from_parts(dim, re, &im)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn conjugate(&self) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(other.entries.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(other.entries.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix product dimension mismatch");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Maximum |M[i][j] - conj(M[j][i])| over all index pairs.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Real part of tr(self * other), with the product never materialized.
    pub fn trace_product_re(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self[(i, j)];
                let b = other[(j, i)];
                acc += a.re * b.re - a.im * b.im;
            }
        }
        acc
    }

    /// Imaginary part of tr(self * other).
    pub fn trace_product_im(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self[(i, j)];
                let b = other[(j, i)];
                acc += a.re * b.im + a.im * b.re;
            }
        }
        acc
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

/// A validated density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate `mat` against `tol` and wrap it.
    pub fn new(mat: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let defect = mat.hermiticity_defect();
        if defect > tol.herm_tol {
            return Err(Error::NotHermitian(defect));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol.trace_tol || tr.im.abs() > tol.trace_tol {
            return Err(Error::ParamOutOfRange(format!(
                "trace {} + {}i is not 1",
                tr.re, tr.im
            )));
        }
        let eig = eigh(&mat, tol)?;
        let min_ev = eig.eigenvalues.first().copied().unwrap_or(0.0);
        if min_ev < -tol.psd_tol {
            return Err(Error::NotPsd(min_ev));
        }
        Ok(DensityMatrix { mat })
    }

    /// Wrap without validation. For internal construction paths whose output
    /// is valid by algebra (spectral reconstruction, Kraus sums, tensor
    /// products of valid states).
    pub fn new_unchecked(mat: ComplexMatrix) -> Self {
        DensityMatrix { mat }
    }

    pub fn with_default_tol(mat: ComplexMatrix) -> Result<Self> {
        Self::new(mat, &Tolerances::default())
    }

    /// Projector onto a normalized state vector.
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm2 <= 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        let d = psi.len();
        let mut mat = ComplexMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                mat[(i, j)] = psi[i] * psi[j].conj() / norm2;
            }
        }
        Ok(DensityMatrix { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn conjugate(&self) -> Self {
        DensityMatrix {
            mat: self.mat.conjugate(),
        }
    }

    /// tr(rho^2).
    pub fn purity(&self) -> f64 {
        self.mat.trace_product_re(&self.mat)
    }

    /// 1 - tr(rho^2).
    pub fn linear_entropy(&self) -> f64 {
        1.0 - self.purity()
    }

    /// The symmetrized (entrywise real) state (rho + rho^T)/2.
    pub fn real_part_state(&self) -> Self {
        let sym = self.mat.add(&self.mat.transpose()).scale_re(0.5);
        DensityMatrix { mat: sym }
    }
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// the unitary matrix whose columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Each rotation annihilates one off-diagonal entry with a phased Givens
/// rotation; sweeps run in a fixed (p, q) order until the off-diagonal
/// Frobenius norm drops below 1e-13 (at most 100 sweeps). Eigenvalues are
/// returned ascending and each eigenvector's largest component is made real
/// and positive so the output is reproducible.
pub fn eigh(h: &ComplexMatrix, tol: &Tolerances) -> Result<EigenSystem> {
    let defect = h.hermiticity_defect();
    if defect > tol.herm_tol {
        return Err(Error::NotHermitian(defect));
    }
    let d = h.dim();
    let mut a = h.clone();
    let mut v = ComplexMatrix::identity(d);

    if d > 1 {
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) < OFF_DIAG_TOL {
                converged = true;
                break;
            }
            for p in 0..d - 1 {
                for q in p + 1..d {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
        if !converged && off_diagonal_norm(&a) >= OFF_DIAG_TOL {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
    }

    // Sort ascending, permuting eigenvector columns along.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());

    let mut eigenvalues = Vec::with_capacity(d);
    let mut eigenvectors = ComplexMatrix::zeros(d);
    for (new_col, &old_col) in order.iter().enumerate() {
        eigenvalues.push(a[(old_col, old_col)].re);
        // Phase convention: largest-magnitude component real positive.
        let mut best = 0usize;
        let mut best_norm = 0.0;
        for row in 0..d {
            let n = v[(row, old_col)].norm();
            if n > best_norm {
                best_norm = n;
                best = row;
            }
        }
        let phase = if best_norm > 0.0 {
            v[(best, old_col)].conj() / best_norm
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..d {
            eigenvectors[(row, new_col)] = v[(row, old_col)] * phase;
        }
    }

    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let d = a.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One phased Jacobi rotation zeroing a[(p, q)].
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / r;

    // tan(2 theta) = 2 r / (app - aqq); pick the smaller-magnitude tangent.
    let tau = (app - aqq) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let d = a.dim();
    let s_phase = phase.scale(s);
    let s_phase_conj = phase.conj().scale(s);

    // A <- R^dagger A R with R the identity outside rows/cols {p, q} and
    // R[p][p] = c, R[p][q] = -s e^{i phi}, R[q][p] = s e^{-i phi}, R[q][q] = c.
    for k in 0..d {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp.scale(c) + akq * s_phase_conj;
        a[(k, q)] = akq.scale(c) - akp * s_phase;
    }
    for k in 0..d {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk.scale(c) + aqk * s_phase;
        a[(q, k)] = aqk.scale(c) - apk * s_phase_conj;
    }
    // Clean the targeted pair and enforce real diagonal.
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..d {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp.scale(c) + vkq * s_phase_conj;
        v[(k, q)] = vkq.scale(c) - vkp * s_phase;
    }
}

/// Fractional power of a Hermitian PSD matrix: V diag(lambda^p) V^dagger with
/// the convention 0^p = 0. Eigenvalues in [-psd_tol, 0) clip to zero; below
/// -psd_tol the input is rejected.
pub fn mat_pow(h: &ComplexMatrix, p: f64, tol: &Tolerances) -> Result<ComplexMatrix> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    let eig = eigh(h, tol)?;
    // Eigenvalues at rounding-noise scale count as exact zeros: a fractional
    // power amplifies noise eps to eps^p, which would dominate rank-deficient
    // inputs like pure states.
    let l_max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let zero_cut = 1e-14 * l_max;
    let powered: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| {
            if l < -tol.psd_tol {
                Err(Error::NotPsd(l))
            } else if l <= zero_cut {
                Ok(0.0)
            } else {
                Ok(l.powf(p))
            }
        })
        .collect::<Result<_>>()?;
    Ok(reconstruct(&eig.eigenvectors, &powered))
}

/// V diag(values) V^dagger.
pub fn reconstruct(v: &ComplexMatrix, values: &[f64]) -> ComplexMatrix {
    let d = v.dim();
    assert_eq!(values.len(), d);
    let mut out = ComplexMatrix::zeros(d);
    for k in 0..d {
        let w = values[k];
        if w == 0.0 {
            continue;
        }
        for i in 0..d {
            let vik = v[(i, k)].scale(w);
            for j in 0..d {
                out[(i, j)] += vik * v[(j, k)].conj();
            }
        }
    }
    out
}

/// Projector onto the span of eigenvectors with eigenvalue above `cut`.
pub fn support_projector(h: &ComplexMatrix, cut: f64, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = eigh(h, tol)?;
    let ind: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l > cut { 1.0 } else { 0.0 })
        .collect();
    Ok(reconstruct(&eig.eigenvectors, &ind))
}

/// Kronecker product with the first factor as the major index.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let da = a.dim();
    let db = b.dim();
    let mut out = ComplexMatrix::zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            if aij.re == 0.0 && aij.im == 0.0 {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Weighted direct sum p A (+) (1-p) B as a block-diagonal density matrix.
pub fn direct_sum(p: f64, a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParamOutOfRange(format!(
            "direct sum weight {p} outside [0, 1]"
        )));
    }
    let da = a.dim();
    let db = b.dim();
    let mut out = ComplexMatrix::zeros(da + db);
    for i in 0..da {
        for j in 0..da {
            out[(i, j)] = a.matrix()[(i, j)].scale(p);
        }
    }
    for i in 0..db {
        for j in 0..db {
            out[(da + i, da + j)] = b.matrix()[(i, j)].scale(1.0 - p);
        }
    }
    Ok(DensityMatrix::new_unchecked(out))
}

/// Which tensor factor a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

/// Partial trace of a matrix on dA (x) dB, keeping the requested factor.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: (usize, usize),
    keep: Keep,
) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if m.dim() != da * db {
        return Err(Error::DimMismatch(format!(
            "matrix dim {} is not {da} * {db}",
            m.dim()
        )));
    }
    match keep {
        Keep::First => {
            let mut out = ComplexMatrix::zeros(da);
            for i in 0..da {
                for j in 0..da {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..db {
                        acc += m[(i * db + k, j * db + k)];
                    }
                    out[(i, j)] = acc;
                }
            }
            Ok(out)
        }
        Keep::Second => {
            let mut out = ComplexMatrix::zeros(db);
            for k in 0..db {
                for l in 0..db {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..da {
                        acc += m[(i * db + k, i * db + l)];
                    }
                    out[(k, l)] = acc;
                }
            }
            Ok(out)
        }
    }
}

/// Reduced density matrix of a bipartite state.
pub fn reduced_state(rho: &DensityMatrix, dims: (usize, usize), keep: Keep) -> Result<DensityMatrix> {
    let m = partial_trace(rho.matrix(), dims, keep)?;
    Ok(DensityMatrix::new_unchecked(m))
}

/// tr(rho^alpha sigma^(1-alpha)) for alpha in (0, 1), as a real number.
///
/// The product of the two PSD powers has real trace up to rounding; the
/// imaginary residue is asserted below 1e-10.
pub fn trace_product_power(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    alpha: f64,
    tol: &Tolerances,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::ParamOutOfRange(format!(
            "alpha {alpha} outside (0, 1)"
        )));
    }
    let ra = mat_pow(rho.matrix(), alpha, tol)?;
    let sb = mat_pow(sigma.matrix(), 1.0 - alpha, tol)?;
    let im = ra.trace_product_im(&sb);
    assert!(
        im.abs() <= 1e-10,
        "trace product has imaginary residue {im:e}"
    );
    Ok(ra.trace_product_re(&sb))
}

/// Von Neumann entropy in bits: -sum_i lambda_i log2 lambda_i with 0 log 0 = 0.
pub fn von_neumann_entropy(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    let eig = eigh(rho.matrix(), tol)?;
    let mut s = 0.0;
    for &l in &eig.eigenvalues {
        if l > 0.0 {
            s -= l * l.log2();
        }
    }
    Ok(s.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bloch_to_density, random_density, BlochVector};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn pauli_y() -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 1)] = Complex64::new(0.0, -1.0);
        m[(1, 0)] = Complex64::new(0.0, 1.0);
        m
    }

    #[test]
    fn eigh_identity_spectrum() {
        let eig = eigh(&ComplexMatrix::identity(2), &tol()).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_pauli_y_spectrum() {
        let eig = eigh(&pauli_y(), &tol()).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-13);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn eigh_bloch_mixed_spectrum() {
        // |r| = 0.75 so the spectrum is (1 -/+ r)/2 = {0.125, 0.875}.
        let rho = bloch_to_density(&BlochVector::new(0.5, 0.25, 0.5)).unwrap();
        let eig = eigh(rho.matrix(), &tol()).unwrap();
        assert!((eig.eigenvalues[0] - 0.125).abs() < 1e-12);
        assert!((eig.eigenvalues[1] - 0.875).abs() < 1e-12);
    }

    #[test]
    fn eigh_reconstruction_and_orthonormality() {
        for seed in 0..100u64 {
            let d = 2 + (seed % 5) as usize;
            let rho = random_density(d, seed);
            let h = rho.matrix();
            let eig = eigh(h, &tol()).unwrap();
            let rebuilt = reconstruct(&eig.eigenvectors, &eig.eigenvalues);
            assert!(
                rebuilt.max_abs_diff(h) <= 1e-9 * d as f64,
                "reconstruction defect at seed {seed}"
            );
            let gram = eig.eigenvectors.dagger().mul(&eig.eigenvectors);
            assert!(
                gram.max_abs_diff(&ComplexMatrix::identity(d)) <= 1e-10,
                "orthonormality defect at seed {seed}"
            );
        }
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(eigh(&m, &tol()), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eigh_deterministic() {
        let rho = random_density(5, 7);
        let a = eigh(rho.matrix(), &tol()).unwrap();
        let b = eigh(rho.matrix(), &tol()).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }

    #[test]
    fn mat_pow_scaled_identity() {
        let half = ComplexMatrix::identity(2).scale_re(0.5);
        let root = mat_pow(&half, 0.5, &tol()).unwrap();
        let expect = ComplexMatrix::identity(2).scale_re(std::f64::consts::FRAC_1_SQRT_2);
        assert!(root.max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn mat_pow_projector_fixed_point() {
        let mut proj = ComplexMatrix::zeros(2);
        proj[(1, 1)] = Complex64::new(1.0, 0.0);
        let p = mat_pow(&proj, 0.3, &tol()).unwrap();
        assert!(p.max_abs_diff(&proj) < 1e-14);

        // Bloch (0, 1, 0) is a rank-1 projector, so any power is itself.
        let rho = bloch_to_density(&BlochVector::new(0.0, 1.0, 0.0)).unwrap();
        let q = mat_pow(rho.matrix(), 0.5, &tol()).unwrap();
        assert!(q.max_abs_diff(rho.matrix()) < 1e-10);
    }

    #[test]
    fn mat_pow_rejects_bad_exponent() {
        let id = ComplexMatrix::identity(2);
        assert!(matches!(
            mat_pow(&id, 0.0, &tol()),
            Err(Error::InvalidExponent(_))
        ));
        assert!(matches!(
            mat_pow(&id, 1.5, &tol()),
            Err(Error::InvalidExponent(_))
        ));
    }

    #[test]
    fn mat_pow_commuting_powers_compose() {
        for seed in 0..20u64 {
            let rho = random_density(4, seed);
            let a = 0.3;
            let b = 0.45;
            let pa = mat_pow(rho.matrix(), a, &tol()).unwrap();
            let pb = mat_pow(rho.matrix(), b, &tol()).unwrap();
            let lhs = pa.mul(&pb).trace().re;
            let eig = eigh(rho.matrix(), &tol()).unwrap();
            let rhs: f64 = eig
                .eigenvalues
                .iter()
                .map(|&l| l.max(0.0).powf(a + b))
                .sum();
            assert!((lhs - rhs).abs() < 1e-9, "seed {seed}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn conjugate_transpose_basics() {
        let rho = random_density(3, 11);
        let real = rho.real_part_state();
        assert!(real.matrix().conjugate().max_abs_diff(real.matrix()) < 1e-15);
        // Hermitian: transpose equals conjugate.
        assert!(
            rho.matrix()
                .transpose()
                .max_abs_diff(&rho.matrix().conjugate())
                < 1e-15
        );
        assert!(
            rho.matrix()
                .conjugate()
                .conjugate()
                .max_abs_diff(rho.matrix())
                == 0.0
        );
    }

    #[test]
    fn conjugate_flips_bloch_y() {
        let rho = bloch_to_density(&BlochVector::new(0.3, 0.4, -0.2)).unwrap();
        let conj = bloch_to_density(&BlochVector::new(0.3, -0.4, -0.2)).unwrap();
        assert!(rho.matrix().conjugate().max_abs_diff(conj.matrix()) < 1e-15);
    }

    #[test]
    fn tensor_identities() {
        let i2 = ComplexMatrix::identity(2);
        let i4 = tensor(&i2, &i2);
        assert!(i4.max_abs_diff(&ComplexMatrix::identity(4)) == 0.0);

        for seed in 0..10u64 {
            let a = random_density(2, seed);
            let b = random_density(3, seed + 100);
            let prod = tensor(a.matrix(), b.matrix());
            let t = prod.trace();
            let ta = a.matrix().trace();
            let tb = b.matrix().trace();
            assert!((t - ta * tb).norm() < 1e-12);
        }
    }

    #[test]
    fn tensor_power_factorizes() {
        // (rho (x) tau)^alpha = rho^alpha (x) tau^alpha for PSD inputs.
        let a = random_density(2, 3);
        let b = random_density(2, 4);
        let prod = tensor(a.matrix(), b.matrix());
        let lhs = mat_pow(&prod, 0.5, &tol()).unwrap();
        let rhs = tensor(
            &mat_pow(a.matrix(), 0.5, &tol()).unwrap(),
            &mat_pow(b.matrix(), 0.5, &tol()).unwrap(),
        );
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn direct_sum_shapes_and_spectra() {
        let a = random_density(2, 1);
        let b = random_density(2, 2);

        let degenerate = direct_sum(1.0, &a, &b).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((degenerate.matrix()[(2 + i, 2 + j)]).norm() == 0.0);
            }
        }

        let id2 = DensityMatrix::new_unchecked(ComplexMatrix::identity(2).scale_re(0.5));
        let mixed = direct_sum(0.5, &id2, &id2).unwrap();
        assert!(
            mixed
                .matrix()
                .max_abs_diff(&ComplexMatrix::identity(4).scale_re(0.25))
                < 1e-15
        );

        // Spectrum of the weighted sum is the union of the halved spectra.
        let ds = direct_sum(0.5, &a, &b).unwrap();
        let mut expect: Vec<f64> = eigh(a.matrix(), &tol())
            .unwrap()
            .eigenvalues
            .iter()
            .chain(eigh(b.matrix(), &tol()).unwrap().eigenvalues.iter())
            .map(|l| 0.5 * l)
            .collect();
        expect.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let got = eigh(ds.matrix(), &tol()).unwrap().eigenvalues;
        for (g, e) in got.iter().zip(expect.iter()) {
            assert!((g - e).abs() < 1e-10);
        }
    }

    #[test]
    fn partial_trace_product_state() {
        let a = random_density(2, 5);
        let b = random_density(3, 6);
        let prod = tensor(a.matrix(), b.matrix());
        let ra = partial_trace(&prod, (2, 3), Keep::First).unwrap();
        assert!(ra.max_abs_diff(a.matrix()) < 1e-12);
        let rb = partial_trace(&prod, (2, 3), Keep::Second).unwrap();
        assert!(rb.max_abs_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        for seed in 0..50u64 {
            let rho = random_density(4, seed);
            let r = partial_trace(rho.matrix(), (2, 2), Keep::First).unwrap();
            assert!((r.trace() - rho.matrix().trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_dim_mismatch() {
        let rho = random_density(3, 0);
        assert!(matches!(
            partial_trace(rho.matrix(), (2, 2), Keep::First),
            Err(Error::DimMismatch(_))
        ));
    }

    #[test]
    fn trace_product_identical_states() {
        for seed in 0..10u64 {
            let rho = random_density(3, seed);
            for alpha in [0.2, 0.5, 0.8] {
                let t = trace_product_power(&rho, &rho, alpha, &tol()).unwrap();
                assert!((t - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn trace_product_orthogonal_conjugate() {
        let rho = bloch_to_density(&BlochVector::new(0.0, 1.0, 0.0)).unwrap();
        let t = trace_product_power(&rho, &rho.conjugate(), 0.5, &tol()).unwrap();
        assert!(t.abs() < 1e-12);
    }

    #[test]
    fn trace_product_half_y_bloch() {
        // Frozen from the scalar eigen-overlap oracle:
        // (1/2)[(1+r)^(1-a)(1-r)^a + (1+r)^a(1-r)^(1-a)] = sqrt(3)/2 at r=1/2, a=1/2.
        let rho = bloch_to_density(&BlochVector::new(0.0, 0.5, 0.0)).unwrap();
        let t = trace_product_power(&rho, &rho.conjugate(), 0.5, &tol()).unwrap();
        assert!((t - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn trace_product_symbol_symmetry() {
        for seed in 0..20u64 {
            let rho = random_density(3, seed);
            let sigma = random_density(3, seed + 1000);
            for alpha in [0.25, 0.5, 0.7] {
                let a = trace_product_power(&rho, &sigma, alpha, &tol()).unwrap();
                let b = trace_product_power(&sigma, &rho, 1.0 - alpha, &tol()).unwrap();
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn conjugate_keeps_density_valid_and_spectrum() {
        for seed in 0..20u64 {
            let rho = random_density(3, seed);
            let conj = rho.conjugate();
            DensityMatrix::new(conj.matrix().clone(), &tol()).unwrap();
            let sa = eigh(rho.matrix(), &tol()).unwrap().eigenvalues;
            let sb = eigh(conj.matrix(), &tol()).unwrap().eigenvalues;
            for (a, b) in sa.iter().zip(sb.iter()) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn entropy_known_values() {
        let pure = DensityMatrix::from_pure(&[
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
        ])
        .unwrap();
        assert!(von_neumann_entropy(&pure, &tol()).unwrap() < 1e-10);

        let mixed = DensityMatrix::new_unchecked(ComplexMatrix::identity(4).scale_re(0.25));
        assert!((von_neumann_entropy(&mixed, &tol()).unwrap() - 2.0).abs() < 1e-12);

        // Spectrum {1/8, 1/8, 1/8, 5/8}: direct evaluation of -sum l log2 l.
        let mut diag = ComplexMatrix::zeros(4);
        for (i, l) in [0.125, 0.125, 0.125, 0.625].iter().enumerate() {
            diag[(i, i)] = Complex64::new(*l, 0.0);
        }
        let s = von_neumann_entropy(&DensityMatrix::new_unchecked(diag), &tol()).unwrap();
        let expect = 3.0 * 0.125 * 3.0 + 0.625 * (8.0f64 / 5.0).log2();
        assert!((s - expect).abs() < 1e-12);
        assert!((s - 1.5488).abs() < 1e-4);
    }

    #[test]
    fn density_validation_rejects_bad_inputs() {
        let mut not_herm = ComplexMatrix::identity(2).scale_re(0.5);
        not_herm[(0, 1)] = Complex64::new(0.0, 0.3);
        assert!(DensityMatrix::new(not_herm, &tol()).is_err());

        let bad_trace = ComplexMatrix::identity(2);
        assert!(DensityMatrix::new(bad_trace, &tol()).is_err());

        let mut not_psd = ComplexMatrix::zeros(2);
        not_psd[(0, 0)] = Complex64::new(1.5, 0.0);
        not_psd[(1, 1)] = Complex64::new(-0.5, 0.0);
        assert!(matches!(
            DensityMatrix::new(not_psd, &tol()),
            Err(Error::NotPsd(_))
        ));
    }
}
