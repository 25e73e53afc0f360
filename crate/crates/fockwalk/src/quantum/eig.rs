//! Eigenvalues of complex Hermitian matrices via cyclic Jacobi rotations.
//!
//! Only eigenvalues are needed (state validation and positivity checks), so
//! the accumulated eigenvector product is skipped. Dimensions in this crate
//! stay small (<= ~100), well inside Jacobi territory.

use super::{c64, CMatrix};

const MAX_SWEEPS: usize = 60;

/// Eigenvalues of a Hermitian matrix, ascending. The strict lower triangle
/// is ignored; callers are expected to pass matrices that already satisfy
/// the Hermiticity tolerance.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "hermitian_eigenvalues needs a square matrix");
    if n == 1 {
        return vec![m[[0, 0]].re];
    }
    let mut a = m.clone();
    // symmetrize to kill round-off asymmetry before rotating
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (a[[i, j]] + a[[j, i]].conj());
            a[[i, j]] = avg;
            a[[j, i]] = avg.conj();
        }
        a[[i, i]] = c64(a[[i, i]].re, 0.0);
    }

    let scale: f64 = a
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let tol = 1e-15 * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[[p, q]].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[[p, q]];
                let r = g.norm();
                if r <= tol {
                    continue;
                }
                let phase = g / r; // e^{i theta}
                let alpha = a[[p, p]].re;
                let beta = a[[q, q]].re;
                let tau = (beta - alpha) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // G[p][p]=c, G[p][q]=s, G[q][p]=-s e^{-i theta},
                // G[q][q]=c e^{-i theta}; A <- G^dag A G
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = c * akp - s * phase.conj() * akq;
                    a[[k, q]] = s * akp + c * phase.conj() * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = c * apk - s * phase * aqk;
                    a[[q, k]] = s * apk + c * phase * aqk;
                }
                a[[p, q]] = c64(0.0, 0.0);
                a[[q, p]] = c64(0.0, 0.0);
                a[[p, p]] = c64(a[[p, p]].re, 0.0);
                a[[q, q]] = c64(a[[q, q]].re, 0.0);
            }
        }
    }

    let mut eigs: Vec<f64> = a.diag().iter().map(|z| z.re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}
