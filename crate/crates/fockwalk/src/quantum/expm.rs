//! Matrix exponential by scaling and squaring with a degree-13 Pade core
//! (Higham 2005), on dense complex matrices. The Liouvillians exponentiated
//! here are non-normal, so spectral methods are out; Pade with enough
//! scaling keeps the relative error near 1e-13 for the norms in play.

use ndarray::Array2;

use super::{c64, identity, one_norm, CMatrix};
use crate::{Error, Result};

// ||A|| threshold below which the [13/13] Pade approximant meets double
// precision without scaling.
const THETA_13: f64 = 5.371920351148152;

const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

pub fn expm(m: &CMatrix) -> Result<CMatrix> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "expm needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows();
    let norm = one_norm(m);
    if !norm.is_finite() {
        return Err(Error::InvalidParameter("expm of non-finite matrix".into()));
    }
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let a = m.mapv(|z| z / 2f64.powi(squarings as i32));

    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let eye = identity(n);

    let b = |k: usize| c64(PADE_13[k], 0.0);
    let w1 = b(13) * &a6 + b(11) * &a4 + b(9) * &a2;
    let w2 = b(7) * &a6 + b(5) * &a4 + b(3) * &a2 + b(1) * &eye;
    let u = a.dot(&(a6.dot(&w1) + &w2));
    let z1 = b(12) * &a6 + b(10) * &a4 + b(8) * &a2;
    let v = a6.dot(&z1) + b(6) * &a6 + b(4) * &a4 + b(2) * &a2 + b(0) * &eye;

    // r = (V - U)^{-1} (V + U)
    let mut r = solve(&(&v - &u), &(&v + &u))?;
    for _ in 0..squarings {
        r = r.dot(&r);
    }
    Ok(r)
}

/// Solve `A X = B` by LU decomposition with partial pivoting.
pub(crate) fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(Error::DimensionMismatch("solve: shape mismatch".into()));
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    for k in 0..n {
        let mut pivot = k;
        let mut best = lu[[k, k]].norm();
        for i in (k + 1)..n {
            let v = lu[[i, k]].norm();
            if v > best {
                best = v;
                pivot = i;
            }
        }
        if best == 0.0 {
            return Err(Error::InvalidParameter("solve: singular matrix".into()));
        }
        if pivot != k {
            swap_rows(&mut lu, k, pivot);
            swap_rows(&mut x, k, pivot);
        }
        let diag = lu[[k, k]];
        for i in (k + 1)..n {
            let factor = lu[[i, k]] / diag;
            lu[[i, k]] = factor;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            let (row_k, mut row_i) = lu.multi_slice_mut((
                ndarray::s![k, (k + 1)..],
                ndarray::s![i, (k + 1)..],
            ));
            row_i.zip_mut_with(&row_k, |y, &x| *y -= factor * x);
            let (bk, mut bi) =
                x.multi_slice_mut((ndarray::s![k, ..], ndarray::s![i, ..]));
            bi.zip_mut_with(&bk, |y, &x| *y -= factor * x);
        }
    }
    // back substitution
    for k in (0..n).rev() {
        let diag = lu[[k, k]];
        {
            let mut row = x.row_mut(k);
            row.mapv_inplace(|z| z / diag);
        }
        for i in 0..k {
            let factor = lu[[i, k]];
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            let (row_k, mut row_i) =
                x.multi_slice_mut((ndarray::s![k, ..], ndarray::s![i, ..]));
            row_i.zip_mut_with(&row_k, |y, &x| *y -= factor * x);
        }
    }
    Ok(x)
}

fn swap_rows(m: &mut CMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    let (a, b) = m.multi_slice_mut((ndarray::s![i, ..], ndarray::s![j, ..]));
    ndarray::Zip::from(a).and(b).for_each(std::mem::swap);
}

#[allow(dead_code)]
fn zeros(n: usize) -> CMatrix {
    Array2::zeros((n, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{max_abs_diff, ops, random};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn expm_zero_is_identity() {
        let z = zeros(4);
        let e = expm(&z).unwrap();
        assert!(max_abs_diff(&e, &identity(4)) <= 1e-15);
    }

    #[test]
    fn expm_diagonal() {
        let mut d = zeros(3);
        d[[0, 0]] = c64(0.3, 0.0);
        d[[1, 1]] = c64(-1.5, 2.0);
        d[[2, 2]] = c64(4.0, -0.7);
        let e = expm(&d).unwrap();
        for k in 0..3 {
            let expected = d[[k, k]].exp();
            assert!((e[[k, k]] - expected).norm() <= 1e-13 * expected.norm());
        }
        assert!(e[[0, 1]].norm() <= 1e-15);
    }

    #[test]
    fn expm_pauli_rotation() {
        // exp(-i pi sigma_x / 2) = -i sigma_x
        let arg = ops::sigma_x().mapv(|z| z * c64(0.0, -PI / 2.0));
        let e = expm(&arg).unwrap();
        let expected = ops::sigma_x().mapv(|z| z * c64(0.0, -1.0));
        assert!(max_abs_diff(&e, &expected) <= 1e-14);
    }

    #[test]
    fn expm_inverse_identity() {
        let mut rng = random::rng(5);
        for _ in 0..5 {
            let m = random::random_cmatrix(&mut rng, 8).mapv(|z| z * c64(1.2, 0.0));
            let e = expm(&m).unwrap();
            let einv = expm(&m.mapv(|z| -z)).unwrap();
            let prod = e.dot(&einv);
            assert!(max_abs_diff(&prod, &identity(8)) <= 1e-10);
        }
    }

    #[test]
    fn expm_large_norm_accuracy() {
        // diag entries of large norm, exact answer known
        let mut d = zeros(2);
        d[[0, 0]] = c64(0.0, 800.0);
        d[[1, 1]] = c64(-3.0, -500.0);
        let e = expm(&d).unwrap();
        for k in 0..2 {
            let expected = d[[k, k]].exp();
            assert!((e[[k, k]] - expected).norm() <= 1e-10 * expected.norm().max(1.0));
        }
    }

    #[test]
    fn expm_rejects_non_square() {
        let m = Array2::zeros((2, 3));
        assert!(expm(&m).is_err());
    }

    #[test]
    fn solve_recovers_rhs() {
        let mut rng = random::rng(9);
        let a = random::random_cmatrix(&mut rng, 10);
        let b = random::random_cmatrix(&mut rng, 10);
        let x = solve(&a, &b).unwrap();
        let back = a.dot(&x);
        assert!(max_abs_diff(&back, &b) <= 1e-10);
    }

    #[test]
    fn expm_semigroup_against_series() {
        // exp(tH) for Hermitian H has norm-1 columns bound; compare
        // exp(A)exp(A) with exp(2A)
        let mut rng = random::rng(13);
        let h = random::random_hermitian(&mut rng, 6);
        let a = h.mapv(|z| z * c64(0.0, -0.5));
        let e1 = expm(&a).unwrap();
        let e2 = expm(&a.mapv(|z| 2.0 * z)).unwrap();
        assert!(max_abs_diff(&e1.dot(&e1), &e2) <= 1e-12);
    }

    #[test]
    fn expm_diag_large_norm_relative() {
        let mut d = zeros(2);
        d[[0, 0]] = c64(3.0, 0.0);
        d[[1, 1]] = c64(-2.0, 1.0);
        let e = expm(&d).unwrap();
        assert_abs_diff_eq!(e[[0, 0]].re, 3f64.exp(), epsilon = 1e-12 * 3f64.exp());
    }
}
