//! Seeded generators for random operators and states, shared by the
//! self-check command and the test suites.

use ndarray::Array2;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

use super::{c64, dagger, trace, CMatrix, DensityMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense matrix with entries uniform in the complex unit square.
pub fn random_cmatrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    Array2::from_shape_fn((n, n), |_| {
        c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let g = random_cmatrix(rng, n);
    (&g + &dagger(&g)).mapv(|z| 0.5 * z)
}

/// Full-rank random density matrix `G G^dag / Tr[G G^dag]`.
pub fn random_density(rng: &mut ChaCha8Rng, n: usize) -> DensityMatrix {
    let g = random_cmatrix(rng, n);
    let p = g.dot(&dagger(&g));
    let t = trace(&p).re;
    DensityMatrix::new_unchecked_psd(p / c64(t, 0.0))
        .expect("Wishart construction is a valid state")
}

/// Random normalized ket.
pub fn random_ket(rng: &mut ChaCha8Rng, n: usize) -> Vec<super::C64> {
    let amps: Vec<_> = (0..n)
        .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps.into_iter().map(|z| z / norm).collect()
}
