//! Elementary operator constructors on the coin and Fock spaces.

use ndarray::Array2;

use super::{c64, CMatrix};

/// `|i><i|` in a `dim`-dimensional space.
pub fn projector(dim: usize, i: usize) -> CMatrix {
    let mut m = Array2::zeros((dim, dim));
    m[[i, i]] = c64(1.0, 0.0);
    m
}

/// Annihilation operator on a `fock_dim`-level truncated ladder:
/// `a|n> = sqrt(n) |n-1>`.
pub fn annihilation(fock_dim: usize) -> CMatrix {
    let mut m = Array2::zeros((fock_dim, fock_dim));
    for n in 1..fock_dim {
        m[[n - 1, n]] = c64((n as f64).sqrt(), 0.0);
    }
    m
}

pub fn creation(fock_dim: usize) -> CMatrix {
    super::dagger(&annihilation(fock_dim))
}

/// Photon number operator `N = a^dag a`.
pub fn number(fock_dim: usize) -> CMatrix {
    let mut m = Array2::zeros((fock_dim, fock_dim));
    for n in 0..fock_dim {
        m[[n, n]] = c64(n as f64, 0.0);
    }
    m
}

/// `sigma_- = |g><e|`; `|e>` is index 0, `|g>` index 1.
pub fn sigma_minus() -> CMatrix {
    let mut m = Array2::zeros((2, 2));
    m[[1, 0]] = c64(1.0, 0.0);
    m
}

pub fn sigma_plus() -> CMatrix {
    let mut m = Array2::zeros((2, 2));
    m[[0, 1]] = c64(1.0, 0.0);
    m
}

pub fn sigma_x() -> CMatrix {
    let mut m = Array2::zeros((2, 2));
    m[[0, 1]] = c64(1.0, 0.0);
    m[[1, 0]] = c64(1.0, 0.0);
    m
}

/// `sigma_z = |e><e| - |g><g|`.
pub fn sigma_z() -> CMatrix {
    let mut m = Array2::zeros((2, 2));
    m[[0, 0]] = c64(1.0, 0.0);
    m[[1, 1]] = c64(-1.0, 0.0);
    m
}
