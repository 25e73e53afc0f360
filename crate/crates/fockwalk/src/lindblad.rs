//! Lindblad generators and exact propagation by exponentiating the
//! vectorized superoperator.
//!
//! Vectorization pairs `vec(rho)` = row-major flattening with the
//! superoperator
//! `-i(H (x) I - I (x) H^T) + sum_j r_j [C_j (x) conj(C_j)
//!   - 1/2 (C_j^dag C_j (x) I + I (x) (C_j^dag C_j)^T)]`,
//! the standard Lindblad form `r (C rho C^dag - 1/2 {C^dag C, rho})`.
//! The vec convention and the matrix are a matched pair; mixing either half
//! with another convention transposes the dynamics silently.

use ndarray::Array2;

use crate::quantum::{
    c64, dagger, expm, hermiticity_defect, identity, kron, ops, trace, CMatrix,
    DensityMatrix, SystemSpace,
};
use crate::{Error, Result};

/// Hamiltonian plus rated collapse operators.
#[derive(Debug, Clone)]
pub struct Lindbladian {
    hamiltonian: CMatrix,
    collapses: Vec<(CMatrix, f64)>,
}

impl Lindbladian {
    pub fn new(hamiltonian: CMatrix, collapses: Vec<(CMatrix, f64)>) -> Result<Self> {
        let dim = hamiltonian.nrows();
        if hamiltonian.ncols() != dim {
            return Err(Error::DimensionMismatch(
                "Hamiltonian must be square".into(),
            ));
        }
        let h = hermiticity_defect(&hamiltonian);
        if h > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "Hamiltonian Hermiticity defect {h:.3e}"
            )));
        }
        for (c, rate) in &collapses {
            if c.nrows() != dim || c.ncols() != dim {
                return Err(Error::DimensionMismatch(
                    "collapse operator dimension mismatch".into(),
                ));
            }
            if !(*rate >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "collapse rate must be >= 0, got {rate}"
                )));
            }
        }
        Ok(Lindbladian {
            hamiltonian,
            collapses,
        })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn collapses(&self) -> &[(CMatrix, f64)] {
        &self.collapses
    }

    /// Right-hand side `-i[H, rho] + sum_j r_j (C rho C^dag - 1/2 {C^dag C, rho})`
    /// evaluated directly on matrices; used by the integrator cross-check.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let h = &self.hamiltonian;
        let comm = h.dot(rho) - rho.dot(h);
        let mut out = comm.mapv(|z| z * c64(0.0, -1.0));
        for (c, rate) in &self.collapses {
            let cd = dagger(c);
            let cdc = cd.dot(c);
            let jump = c.dot(rho).dot(&cd);
            let anti = cdc.dot(rho) + rho.dot(&cdc);
            out = out + (jump - anti.mapv(|z| 0.5 * z)).mapv(|z| *rate * z);
        }
        out
    }
}

/// Detuning-controlled system Hamiltonian
/// `H_s = -(delta_g + delta_s) N + g (sigma_- (x) a^dag + sigma_+ (x) a)`
/// on the coin (x) Fock space, in units hbar = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemHamiltonian {
    pub delta_g: f64,
    pub delta_s: f64,
    pub g: f64,
}

impl SystemHamiltonian {
    pub fn build(&self, space: SystemSpace) -> CMatrix {
        let f = space.fock_dim();
        let detuning = -(self.delta_g + self.delta_s);
        let photon = kron(&identity(2), &ops::number(f));
        let exchange = kron(&ops::sigma_minus(), &ops::creation(f))
            + kron(&ops::sigma_plus(), &ops::annihilation(f));
        photon.mapv(|z| z * c64(detuning, 0.0)) + exchange.mapv(|z| z * c64(self.g, 0.0))
    }
}

/// `vec(rho)`: row-major flattening.
pub fn vectorize(rho: &CMatrix) -> Vec<crate::C64> {
    rho.iter().cloned().collect()
}

pub fn unvectorize(v: &[crate::C64], dim: usize) -> CMatrix {
    Array2::from_shape_vec((dim, dim), v.to_vec()).expect("vec length is dim^2")
}

/// Dense `dim^2 x dim^2` matrix representation of the generator.
pub fn liouvillian_matrix(lind: &Lindbladian) -> CMatrix {
    let dim = lind.dim();
    let eye = identity(dim);
    let h = &lind.hamiltonian;
    let mut l = (kron(h, &eye) - kron(&eye, &h.t().to_owned()))
        .mapv(|z| z * c64(0.0, -1.0));
    for (c, rate) in &lind.collapses {
        let cbar = c.mapv(|z| z.conj());
        let cdc = dagger(c).dot(c);
        let jump = kron(c, &cbar);
        let anti = kron(&cdc, &eye) + kron(&eye, &cdc.t().to_owned());
        l = l + (jump - anti.mapv(|z| 0.5 * z)).mapv(|z| *rate * z);
    }
    l
}

/// Cached `exp(L t)` for repeated application at fixed duration.
#[derive(Debug, Clone)]
pub struct Propagator {
    mat: CMatrix,
    dim: usize,
}

impl Propagator {
    pub fn new(lind: &Lindbladian, t: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "propagation time must be >= 0, got {t}"
            )));
        }
        let l = liouvillian_matrix(lind).mapv(|z| z * c64(t, 0.0));
        let mat = expm(&l)?;
        Ok(Propagator {
            mat,
            dim: lind.dim(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Apply to a raw operator; Hermiticity of the result is enforced to
    /// kill exponentiation round-off.
    pub fn apply_mat(&self, rho: &CMatrix) -> CMatrix {
        let v = ndarray::Array1::from(vectorize(rho));
        let out = self.mat.dot(&v);
        let m = unvectorize(out.as_slice().unwrap(), self.dim);
        let md = dagger(&m);
        (m + md).mapv(|z| 0.5 * z)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_mat(rho.mat());
        let tr = trace(&out);
        if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
            return Err(Error::InvalidState(format!(
                "propagation drifted off trace 1: {tr}"
            )));
        }
        DensityMatrix::with_trace_tol(out, 1e-9)
    }
}

/// Propagator for a generator that splits across the coin and cavity tensor
/// factors (no exchange term): the two Liouvillians commute, so
/// `exp((L_coin + L_cav) t)` factorizes into a 4x4 coin superoperator and a
/// cavity superoperator. The cavity generator (diagonal Hamiltonian plus
/// lowering-type collapse operators) never mixes matrix diagonals m - n, so
/// its exponential is stored as one small block per diagonal offset: memory
/// and apply cost are O(f^3) instead of O(f^4), which is what makes deep
/// Fock ladders affordable.
#[derive(Debug, Clone)]
pub struct FactoredPropagator {
    coin: CMatrix,
    /// block `s` acts on the matrix diagonal d = s - (f - 1)
    cavity_diag_blocks: Vec<CMatrix>,
    fock_dim: usize,
}

impl FactoredPropagator {
    pub fn new(coin: &Lindbladian, cavity: &Lindbladian, t: f64) -> Result<Self> {
        if coin.dim() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "coin generator must act on dim 2, got {}",
                coin.dim()
            )));
        }
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "propagation time must be >= 0, got {t}"
            )));
        }
        let f = cavity.dim();
        let h = cavity.hamiltonian();
        for ((i, j), z) in h.indexed_iter() {
            if i != j && z.norm() > 1e-14 {
                return Err(Error::InvalidParameter(
                    "factored cavity generator needs a diagonal Hamiltonian".into(),
                ));
            }
        }
        for (c, _) in cavity.collapses() {
            for ((i, j), z) in c.indexed_iter() {
                if j != i + 1 && z.norm() > 1e-14 {
                    return Err(Error::InvalidParameter(
                        "factored cavity generator needs lowering-type collapse operators".into(),
                    ));
                }
            }
        }

        let ec = expm(&liouvillian_matrix(coin).mapv(|z| z * c64(t, 0.0)))?;

        // per-diagonal generator: on the diagonal d, the entries x_i =
        // rho_{m0+i, n0+i} obey dx_i/dt = G x with G upper bidiagonal:
        //   G[i][i]   = -i(h_m - h_n) - (1/2) sum_k gamma_k (w_m + w_n)
        //   G[i][i+1] = sum_k gamma_k c_{m,m+1} conj(c_{n,n+1})
        // where w_j = |c_{j-1,j}|^2 is the diagonal of c^dag c.
        let mut blocks = Vec::with_capacity(2 * f - 1);
        for s in 0..(2 * f - 1) {
            let d = s as isize - (f as isize - 1);
            let m0 = d.max(0) as usize;
            let n0 = (-d).max(0) as usize;
            let len = f - d.unsigned_abs();
            let mut gen: CMatrix = Array2::zeros((len, len));
            for i in 0..len {
                let (m, n) = (m0 + i, n0 + i);
                let mut diag = (h[[m, m]] - h[[n, n]]) * c64(0.0, -1.0);
                for (c, rate) in cavity.collapses() {
                    let wm = if m >= 1 { c[[m - 1, m]].norm_sqr() } else { 0.0 };
                    let wn = if n >= 1 { c[[n - 1, n]].norm_sqr() } else { 0.0 };
                    diag -= c64(0.5 * rate * (wm + wn), 0.0);
                    if i + 1 < len {
                        gen[[i, i + 1]] += c[[m, m + 1]] * c[[n, n + 1]].conj() * c64(*rate, 0.0);
                    }
                }
                gen[[i, i]] = diag;
            }
            blocks.push(expm(&gen.mapv(|z| z * c64(t, 0.0)))?);
        }

        Ok(FactoredPropagator {
            coin: ec,
            cavity_diag_blocks: blocks,
            fock_dim: f,
        })
    }

    pub fn dim(&self) -> usize {
        2 * self.fock_dim
    }

    /// Apply to a raw operator on coin (x) Fock; Hermiticity of the result
    /// is enforced to kill exponentiation round-off.
    pub fn apply_mat(&self, rho: &CMatrix) -> CMatrix {
        let f = self.fock_dim;
        // cavity superoperator diagonal-by-diagonal on each coin block
        let mut evolved: Vec<CMatrix> = Vec::with_capacity(4);
        for c in 0..2 {
            for d in 0..2 {
                let x = rho.slice(ndarray::s![c * f..(c + 1) * f, d * f..(d + 1) * f]);
                let mut y: CMatrix = Array2::zeros((f, f));
                for (s, block) in self.cavity_diag_blocks.iter().enumerate() {
                    let off = s as isize - (f as isize - 1);
                    let m0 = off.max(0) as usize;
                    let n0 = (-off).max(0) as usize;
                    let len = f - off.unsigned_abs();
                    for i in 0..len {
                        let mut acc = c64(0.0, 0.0);
                        // blocks are upper triangular (exp of upper bidiagonal)
                        for j in i..len {
                            acc += block[[i, j]] * x[[m0 + j, n0 + j]];
                        }
                        y[[m0 + i, n0 + i]] = acc;
                    }
                }
                evolved.push(y);
            }
        }
        // coin superoperator recombines the blocks
        let mut out: CMatrix = Array2::zeros((2 * f, 2 * f));
        for a in 0..2 {
            for b in 0..2 {
                let mut acc: CMatrix = Array2::zeros((f, f));
                for idx in 0..4 {
                    let w = self.coin[[a * 2 + b, idx]];
                    if w.norm_sqr() > 0.0 {
                        acc.zip_mut_with(&evolved[idx], |z, e| *z += w * e);
                    }
                }
                out.slice_mut(ndarray::s![a * f..(a + 1) * f, b * f..(b + 1) * f])
                    .assign(&acc);
            }
        }
        let od = dagger(&out);
        (out + od).mapv(|z| 0.5 * z)
    }
}

/// Propagator for generators that conserve an excitation grading: the
/// Hamiltonian only connects states of equal excitation and every collapse
/// operator lowers the excitation by exactly one. `vec(rho)` then splits
/// into independent sectors labelled by the excitation difference between
/// row and column index, so the exponential of the full Liouvillian —
/// exchange term included — is computed block by block instead of on the
/// dim^2 x dim^2 superoperator.
#[derive(Debug, Clone)]
pub struct SectorPropagator {
    dim: usize,
    /// per sector: the (row, col) matrix-entry pairs it holds and exp(L_D t)
    sectors: Vec<(Vec<(usize, usize)>, CMatrix)>,
}

impl SectorPropagator {
    pub fn new(lind: &Lindbladian, excitation: &[usize], t: f64) -> Result<Self> {
        let dim = lind.dim();
        if excitation.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "excitation grading has {} entries for dim {dim}",
                excitation.len()
            )));
        }
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "propagation time must be >= 0, got {t}"
            )));
        }
        let h = lind.hamiltonian();
        for ((i, j), z) in h.indexed_iter() {
            if z.norm() > 1e-14 && excitation[i] != excitation[j] {
                return Err(Error::InvalidParameter(
                    "sector propagator needs an excitation-conserving Hamiltonian".into(),
                ));
            }
        }
        for (c, _) in lind.collapses() {
            for ((i, j), z) in c.indexed_iter() {
                if z.norm() > 1e-14 && excitation[j] != excitation[i] + 1 {
                    return Err(Error::InvalidParameter(
                        "sector propagator needs collapse operators that lower the excitation by one"
                            .into(),
                    ));
                }
            }
        }

        // group matrix entries (r, c) by D = exc(r) - exc(c)
        let max_exc = *excitation.iter().max().unwrap_or(&0) as isize;
        let n_sectors = (2 * max_exc + 1) as usize;
        let mut members: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_sectors];
        let mut local: Vec<usize> = vec![0; dim * dim];
        let mut sector_of: Vec<usize> = vec![0; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                let s = (excitation[r] as isize - excitation[c] as isize + max_exc) as usize;
                sector_of[r * dim + c] = s;
                local[r * dim + c] = members[s].len();
                members[s].push((r, c));
            }
        }

        // anticommutator part enters through K = sum_k r_k C_k^dag C_k / 2,
        // which conserves the grading
        let mut k_op: CMatrix = Array2::zeros((dim, dim));
        for (c, rate) in lind.collapses() {
            k_op = k_op + dagger(c).dot(c).mapv(|z| z * c64(0.5 * rate, 0.0));
        }

        let mut sectors = Vec::with_capacity(n_sectors);
        for (s, pairs) in members.iter().enumerate() {
            let len = pairs.len();
            let mut gen: CMatrix = Array2::zeros((len, len));
            for (j, &(r, c)) in pairs.iter().enumerate() {
                // -i H rho and -K rho: act on the row index
                for tr in 0..dim {
                    let w = h[[tr, r]] * c64(0.0, -1.0) - k_op[[tr, r]];
                    if w.norm() > 0.0 {
                        debug_assert_eq!(sector_of[tr * dim + c], s);
                        gen[[local[tr * dim + c], j]] += w;
                    }
                }
                // +i rho H and -rho K: act on the column index
                for tc in 0..dim {
                    let w = h[[c, tc]] * c64(0.0, 1.0) - k_op[[c, tc]];
                    if w.norm() > 0.0 {
                        debug_assert_eq!(sector_of[r * dim + tc], s);
                        gen[[local[r * dim + tc], j]] += w;
                    }
                }
                // jump part r_k C rho C^dag lowers both indices
                for (cop, rate) in lind.collapses() {
                    for tr in 0..dim {
                        if cop[[tr, r]].norm() == 0.0 {
                            continue;
                        }
                        for tc in 0..dim {
                            if cop[[tc, c]].norm() == 0.0 {
                                continue;
                            }
                            debug_assert_eq!(sector_of[tr * dim + tc], s);
                            gen[[local[tr * dim + tc], j]] +=
                                cop[[tr, r]] * cop[[tc, c]].conj() * c64(*rate, 0.0);
                        }
                    }
                }
            }
            let b = expm(&gen.mapv(|z| z * c64(t, 0.0)))?;
            sectors.push((pairs.clone(), b));
        }

        Ok(SectorPropagator { dim, sectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Apply to a raw operator; Hermiticity of the result is enforced to
    /// kill exponentiation round-off.
    pub fn apply_mat(&self, rho: &CMatrix) -> CMatrix {
        let mut out: CMatrix = Array2::zeros((self.dim, self.dim));
        let mut x: Vec<crate::C64> = Vec::new();
        for (pairs, b) in &self.sectors {
            x.clear();
            x.extend(pairs.iter().map(|&(r, c)| rho[[r, c]]));
            for (i, &(r, c)) in pairs.iter().enumerate() {
                let mut acc = c64(0.0, 0.0);
                for (j, xv) in x.iter().enumerate() {
                    acc += b[[i, j]] * xv;
                }
                out[[r, c]] = acc;
            }
        }
        let od = dagger(&out);
        (out + od).mapv(|z| 0.5 * z)
    }
}

/// Exact propagation `rho(t) = unvec(exp(L t) vec(rho))`.
pub fn propagate(lind: &Lindbladian, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if rho.dim() != lind.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dim {} vs generator dim {}",
            rho.dim(),
            lind.dim()
        )));
    }
    Propagator::new(lind, t)?.apply(rho)
}

/// Fixed-step classical Runge-Kutta integration of the master equation.
/// Cross-check oracle for `propagate`; not used in production paths.
pub fn propagate_rk4(
    lind: &Lindbladian,
    rho: &DensityMatrix,
    t: f64,
    steps: usize,
) -> Result<DensityMatrix> {
    if steps == 0 {
        return Err(Error::InvalidParameter("rk4 needs steps >= 1".into()));
    }
    let h = t / steps as f64;
    let mut m = rho.mat().clone();
    for _ in 0..steps {
        let k1 = lind.apply(&m);
        let k2 = lind.apply(&(&m + &k1.mapv(|z| 0.5 * h * z)));
        let k3 = lind.apply(&(&m + &k2.mapv(|z| 0.5 * h * z)));
        let k4 = lind.apply(&(&m + &k3.mapv(|z| h * z)));
        m = &m
            + &(k1 + k2.mapv(|z| 2.0 * z) + k3.mapv(|z| 2.0 * z) + k4)
                .mapv(|z| z * c64(h / 6.0, 0.0));
    }
    DensityMatrix::with_trace_tol(m, 1e-7)
}
