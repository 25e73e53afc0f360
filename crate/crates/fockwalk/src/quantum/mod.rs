//! Dense complex-matrix kernel: tensor products, partial trace, matrix
//! exponential, Hermitian eigenvalues, and density-matrix validation.
//!
//! Basis convention: the coin (two-level system) comes first in every tensor
//! product, with `|e>` at index 0 and `|g>` at index 1, followed by the Fock
//! ladder `|0>..|n_max>`. The full index of `|c, n>` is `c * fock_dim + n`.

mod eig;
mod expm;
pub mod ops;
pub mod random;

pub use eig::hermitian_eigenvalues;
pub use expm::expm;

use ndarray::Array2;
use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = Array2<C64>;

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const EIGENVALUE_TOL: f64 = -1e-10;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    Array2::eye(n)
}

/// Conjugate transpose.
pub fn dagger(m: &CMatrix) -> CMatrix {
    m.t().mapv(|z| z.conj())
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diag().sum()
}

/// Largest elementwise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Maximum absolute column sum.
pub fn one_norm(m: &CMatrix) -> f64 {
    let mut best = 0.0_f64;
    for col in m.columns() {
        let s: f64 = col.iter().map(|z| z.norm()).sum();
        best = best.max(s);
    }
    best
}

pub fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    ndarray::linalg::kron(a, b)
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    worst
}

/// Two-level coin tensored with a truncated Fock ladder, coin first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemSpace {
    n_max: usize,
}

impl SystemSpace {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidParameter(
                "fock space needs at least 2 levels (n_max >= 1)".into(),
            ));
        }
        Ok(SystemSpace { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn fock_dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn coin_dim(&self) -> usize {
        2
    }

    pub fn dim(&self) -> usize {
        2 * self.fock_dim()
    }

    /// Index of `|c, n>`; coin `c` is 0 for `|e>`, 1 for `|g>`.
    pub fn index(&self, coin: usize, n: usize) -> usize {
        debug_assert!(coin < 2 && n <= self.n_max);
        coin * self.fock_dim() + n
    }
}

/// Hermitian, unit-trace, positive-semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    /// Full validation: Hermiticity, unit trace, finiteness, and minimum
    /// eigenvalue above `-1e-10`.
    pub fn new(mat: CMatrix) -> Result<Self> {
        let dm = Self::new_unchecked_psd(mat)?;
        let eigs = hermitian_eigenvalues(&dm.mat);
        let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < EIGENVALUE_TOL {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min:.3e} below tolerance"
            )));
        }
        Ok(dm)
    }

    /// Validation without the eigenvalue check; used in propagation loops
    /// where the full spectrum test would dominate the runtime. Positivity
    /// is covered by property tests and `validate` runs.
    pub(crate) fn new_unchecked_psd(mat: CMatrix) -> Result<Self> {
        Self::with_trace_tol(mat, TRACE_TOL)
    }

    /// As `new_unchecked_psd` with a caller-chosen trace tolerance; exact
    /// exponentiation legitimately drifts the trace by more than the
    /// construction tolerance.
    pub(crate) fn with_trace_tol(mat: CMatrix, trace_tol: f64) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if !all_finite(&mat) {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let h = hermiticity_defect(&mat);
        if h > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!(
                "Hermiticity defect {h:.3e} exceeds tolerance"
            )));
        }
        let tr = trace(&mat);
        if (tr.re - 1.0).abs() > trace_tol || tr.im.abs() > trace_tol {
            return Err(Error::InvalidState(format!(
                "trace {tr} deviates from 1"
            )));
        }
        Ok(DensityMatrix { mat })
    }

    /// `|i><i|` in a `dim`-dimensional space.
    pub fn basis_state(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut mat = Array2::zeros((dim, dim));
        mat[[i, i]] = c64(1.0, 0.0);
        DensityMatrix { mat }
    }

    /// Projector onto the (normalized) ket `amps`.
    pub fn from_pure(amps: &[C64]) -> Result<Self> {
        let norm2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if norm2 <= 0.0 {
            return Err(Error::InvalidState("zero ket".into()));
        }
        let n = amps.len();
        let mut mat = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                mat[[i, j]] = amps[i] * amps[j].conj() / norm2;
            }
        }
        Ok(DensityMatrix { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> CMatrix {
        self.mat
    }

    /// Real diagonal (populations in the computational basis).
    pub fn populations(&self) -> Vec<f64> {
        self.mat.diag().iter().map(|z| z.re).collect()
    }
}

/// Trace out the two-level coin of a state on coin (x) Fock, leaving the
/// walker marginal: `rho_W[n,m] = rho[(e,n),(e,m)] + rho[(g,n),(g,m)]`.
pub fn partial_trace_coin(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let dim = rho.dim();
    if dim % 2 != 0 || dim < 4 {
        return Err(Error::DimensionMismatch(format!(
            "expected a coin (x) Fock state of even dimension >= 4, got {dim}"
        )));
    }
    let f = dim / 2;
    let m = rho.mat();
    let mut out = Array2::zeros((f, f));
    for n in 0..f {
        for k in 0..f {
            out[[n, k]] = m[[n, k]] + m[[f + n, f + k]];
        }
    }
    DensityMatrix::new_unchecked_psd(out)
}

/// Overlap fidelity `Tr[rho rho_T]`.
pub fn fidelity(rho: &DensityMatrix, target: &DensityMatrix) -> Result<f64> {
    if rho.dim() != target.dim() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity between dims {} and {}",
            rho.dim(),
            target.dim()
        )));
    }
    let mut acc = c64(0.0, 0.0);
    let a = rho.mat();
    let b = target.mat();
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            acc += a[[i, j]] * b[[j, i]];
        }
    }
    debug_assert!(acc.im.abs() <= 1e-10, "fidelity imaginary part {}", acc.im);
    Ok(acc.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn kron_identity_blocks() {
        let i2 = identity(2);
        assert_eq!(kron(&i2, &i2), identity(4));

        // |e><e| (x) |0><0| lands at index (0,0) of the composite space
        let space = SystemSpace::new(10).unwrap();
        let pe = ops::projector(2, 0);
        let p0 = ops::projector(space.fock_dim(), 0);
        let full = kron(&pe, &p0);
        assert_eq!(full[[0, 0]], c64(1.0, 0.0));
        assert_abs_diff_eq!(trace(&full).re, 1.0, epsilon = 1e-15);

        // sigma_x (x) I3: block anti-diagonal of I3
        let sx = ops::sigma_x();
        let i3 = identity(3);
        let m = kron(&sx, &i3);
        for i in 0..3 {
            assert_eq!(m[[i, 3 + i]], c64(1.0, 0.0));
            assert_eq!(m[[3 + i, i]], c64(1.0, 0.0));
            assert_eq!(m[[i, i]], c64(0.0, 0.0));
        }
    }

    #[test]
    fn kron_associative() {
        let mut rng = crate::quantum::random::rng(7);
        let a = crate::quantum::random::random_cmatrix(&mut rng, 2);
        let b = crate::quantum::random::random_cmatrix(&mut rng, 3);
        let c = crate::quantum::random::random_cmatrix(&mut rng, 2);
        let lhs = kron(&kron(&a, &b), &c);
        let rhs = kron(&a, &kron(&b, &c));
        assert!(max_abs_diff(&lhs, &rhs) <= 1e-14);
    }

    #[test]
    fn partial_trace_product_state() {
        let space = SystemSpace::new(4).unwrap();
        let rho = DensityMatrix::basis_state(space.dim(), space.index(0, 0));
        let w = partial_trace_coin(&rho).unwrap();
        assert_eq!(w.dim(), space.fock_dim());
        assert_abs_diff_eq!(w.mat()[[0, 0]].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn partial_trace_entangled_marginal() {
        let space = SystemSpace::new(3).unwrap();
        let mut ket = vec![c64(0.0, 0.0); space.dim()];
        ket[space.index(0, 0)] = c64(1.0, 0.0);
        ket[space.index(1, 1)] = c64(1.0, 0.0);
        let rho = DensityMatrix::from_pure(&ket).unwrap();
        let w = partial_trace_coin(&rho).unwrap();
        assert_abs_diff_eq!(w.mat()[[0, 0]].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(w.mat()[[1, 1]].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(w.mat()[[0, 1]].norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn partial_trace_linear_and_trace_preserving() {
        let mut rng = crate::quantum::random::rng(11);
        for _ in 0..20 {
            let r1 = crate::quantum::random::random_density(&mut rng, 8);
            let r2 = crate::quantum::random::random_density(&mut rng, 8);
            let mix = r1.mat().mapv(|z| 0.3 * z) + r2.mat().mapv(|z| 0.7 * z);
            let mixed = DensityMatrix::new_unchecked_psd(mix.clone()).unwrap();
            let w_mix = partial_trace_coin(&mixed).unwrap();
            let w1 = partial_trace_coin(&r1).unwrap();
            let w2 = partial_trace_coin(&r2).unwrap();
            let lin = w1.mat().mapv(|z| 0.3 * z) + w2.mat().mapv(|z| 0.7 * z);
            assert!(max_abs_diff(w_mix.mat(), &lin) <= 1e-13);
            assert_abs_diff_eq!(trace(w_mix.mat()).re, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn fidelity_basic_cases() {
        let p0 = DensityMatrix::basis_state(4, 0);
        let p1 = DensityMatrix::basis_state(4, 1);
        assert_abs_diff_eq!(fidelity(&p0, &p0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fidelity(&p0, &p1).unwrap(), 0.0, epsilon = 1e-15);

        let mixed = DensityMatrix::new_unchecked_psd(
            p0.mat().mapv(|z| 0.5 * z) + p1.mat().mapv(|z| 0.5 * z),
        )
        .unwrap();
        assert_abs_diff_eq!(fidelity(&mixed, &p0).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn fidelity_dimension_mismatch() {
        let a = DensityMatrix::basis_state(4, 0);
        let b = DensityMatrix::basis_state(6, 0);
        assert!(fidelity(&a, &b).is_err());
    }

    #[test]
    fn density_matrix_validation_rejects_bad_inputs() {
        // trace 1.01
        let mut m = identity(2);
        m[[0, 0]] = c64(0.51, 0.0);
        m[[1, 1]] = c64(0.50, 0.0);
        assert!(DensityMatrix::new(m).is_err());

        // non-Hermitian
        let mut m = identity(2);
        m *= c64(0.5, 0.0);
        m[[0, 1]] = c64(0.1, 0.0);
        assert!(DensityMatrix::new(m).is_err());

        // negative eigenvalue
        let mut m: CMatrix = Array2::zeros((2, 2));
        m[[0, 0]] = c64(1.1, 0.0);
        m[[1, 1]] = c64(-0.1, 0.0);
        assert!(DensityMatrix::new(m).is_err());

        // valid state passes the full check
        let mut rng = crate::quantum::random::rng(3);
        let rho = crate::quantum::random::random_density(&mut rng, 6);
        assert!(DensityMatrix::new(rho.mat().clone()).is_ok());
    }
}
