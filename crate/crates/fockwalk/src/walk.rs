//! The abstract Jaynes-Cummings quantum random walk on the Fock half-line:
//! exact JC unitaries, the coin amplitude-damping channel, the three walk
//! variants, the reduced walker map, and the trapping condition.
//!
//! One walk step is the composition: JC unitary, then (for the damped
//! variant) spontaneous emission on the coin, then a coin flip. The Fock
//! ladder is truncated at `n_max`; the exact JC unitary does not close on a
//! truncated ladder, so the top state `|e, n_max>` evolves trivially and
//! every run checks that the population within two levels of the top stays
//! below 1e-6.

use std::f64::consts::PI;

use ndarray::Array2;

use crate::quantum::{
    c64, dagger, kron, identity, max_abs_diff, ops, partial_trace_coin, CMatrix,
    DensityMatrix, SystemSpace,
};
use crate::{Error, Result};

/// Population this close to the ladder top invalidates a truncated run.
pub const TRUNCATION_LEAK_LIMIT: f64 = 1e-6;

/// Coupling strength and interaction duration of one JC segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JCParams {
    pub g: f64,
    pub tau: f64,
}

impl JCParams {
    pub fn new(g: f64, tau: f64) -> Result<Self> {
        if !(g > 0.0) {
            return Err(Error::InvalidParameter(format!("g must be > 0, got {g}")));
        }
        if !(tau >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tau must be >= 0, got {tau}"
            )));
        }
        Ok(JCParams { g, tau })
    }

    /// Effective rotation angle on the `{|e,n>, |g,n+1>}` doublet.
    pub fn theta(&self, n: usize) -> f64 {
        self.g * self.tau * ((n as f64) + 1.0).sqrt()
    }
}

/// Amplitude-damping (spontaneous emission) channel on the coin,
/// parameterized by the reset parameter `eta = e^{-t/T}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinChannel {
    eta: f64,
    s0: CMatrix,
    s1: CMatrix,
}

impl CoinChannel {
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn kraus(&self) -> (&CMatrix, &CMatrix) {
        (&self.s0, &self.s1)
    }

    /// Largest deviation of `S0^dag S0 + S1^dag S1` from the identity.
    pub fn completeness_defect(&self) -> f64 {
        let sum = dagger(&self.s0).dot(&self.s0) + dagger(&self.s1).dot(&self.s1);
        max_abs_diff(&sum, &identity(2))
    }

    /// Channel action on a bare 2x2 coin operator.
    pub fn apply_coin(&self, rho_c: &CMatrix) -> CMatrix {
        self.s0.dot(rho_c).dot(&dagger(&self.s0))
            + self.s1.dot(rho_c).dot(&dagger(&self.s1))
    }

    /// Channel on the coin tensored with the identity on the walker.
    pub fn apply(&self, rho: &CMatrix, space: SystemSpace) -> CMatrix {
        let eye = identity(space.fock_dim());
        let k0 = kron(&self.s0, &eye);
        let k1 = kron(&self.s1, &eye);
        k0.dot(rho).dot(&dagger(&k0)) + k1.dot(rho).dot(&dagger(&k1))
    }
}

/// Build the coin damping channel: `S0 = |g><g| + sqrt(eta)|e><e|`,
/// `S1 = sqrt(1-eta) |g><e|`.
pub fn coin_damping(eta: f64) -> Result<CoinChannel> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidParameter(format!(
            "eta must be in [0,1], got {eta}"
        )));
    }
    let mut s0: CMatrix = Array2::zeros((2, 2));
    s0[[0, 0]] = c64(eta.sqrt(), 0.0);
    s0[[1, 1]] = c64(1.0, 0.0);
    let mut s1: CMatrix = Array2::zeros((2, 2));
    s1[[1, 0]] = c64((1.0 - eta).sqrt(), 0.0);
    Ok(CoinChannel { eta, s0, s1 })
}

/// The three walk flavours: unitary with Hadamard coin, unitary with a pi
/// flip, and the damped walk with reset parameter `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WalkVariant {
    UnitaryHadamard,
    UnitaryFlip,
    Damped(f64),
}

/// Exact JC evolution operator on the truncated coin (x) Fock space.
///
/// On each invariant doublet `{|e,n>, |g,n+1>}` it acts as the rotation
/// `[[cos theta_n, -i sin theta_n], [-i sin theta_n, cos theta_n]]` with
/// `theta_n = g tau sqrt(n+1)`; `|g,0>` and the top state `|e,n_max>` are
/// fixed.
pub fn jc_unitary(params: JCParams, space: SystemSpace) -> CMatrix {
    let dim = space.dim();
    let mut u: CMatrix = Array2::zeros((dim, dim));
    u[[space.index(1, 0), space.index(1, 0)]] = c64(1.0, 0.0);
    u[[space.index(0, space.n_max()), space.index(0, space.n_max())]] = c64(1.0, 0.0);
    for n in 0..space.n_max() {
        let theta = params.theta(n);
        let (sin, cos) = theta.sin_cos();
        let e_n = space.index(0, n);
        let g_n1 = space.index(1, n + 1);
        u[[e_n, e_n]] = c64(cos, 0.0);
        u[[e_n, g_n1]] = c64(0.0, -sin);
        u[[g_n1, e_n]] = c64(0.0, -sin);
        u[[g_n1, g_n1]] = c64(cos, 0.0);
    }
    u
}

/// De-excitation probability of the coin against `n` photons:
/// `P_emit = sin^2(sqrt(n+1) g tau)`.
pub fn emit_probability(params: JCParams, n: usize) -> f64 {
    params.theta(n).sin().powi(2)
}

/// `X = exp(-i pi sigma_x / 2) = -i sigma_x`.
pub fn coin_flip() -> CMatrix {
    ops::sigma_x().mapv(|z| z * c64(0.0, -1.0))
}

/// `H = (sigma_x + sigma_z) / sqrt(2)`.
pub fn coin_hadamard() -> CMatrix {
    (ops::sigma_x() + ops::sigma_z()).mapv(|z| z / c64(2f64.sqrt(), 0.0))
}

/// Interaction duration that traps `|n_T>`: `tau_T = k pi / (g sqrt(n_T+1))`.
pub fn trapping_time(g: f64, n_target: usize, k: u32) -> Result<f64> {
    if !(g > 0.0) {
        return Err(Error::InvalidParameter(format!("g must be > 0, got {g}")));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    Ok((k as f64) * PI / (g * ((n_target as f64) + 1.0).sqrt()))
}

/// One full walk step on the coin (x) Fock state.
pub fn walk_step(
    rho: &DensityMatrix,
    variant: WalkVariant,
    params: JCParams,
) -> Result<DensityMatrix> {
    if rho.dim() % 2 != 0 || rho.dim() < 4 {
        return Err(Error::DimensionMismatch(format!(
            "walk_step needs a coin (x) Fock state, got dim {}",
            rho.dim()
        )));
    }
    let space = SystemSpace::new(rho.dim() / 2 - 1)?;
    let u = jc_unitary(params, space);
    let after_jc = u.dot(rho.mat()).dot(&dagger(&u));
    let (coin_op, after_channel) = match variant {
        WalkVariant::UnitaryHadamard => (coin_hadamard(), after_jc),
        WalkVariant::UnitaryFlip => (coin_flip(), after_jc),
        WalkVariant::Damped(eta) => {
            let channel = coin_damping(eta)?;
            (coin_flip(), channel.apply(&after_jc, space))
        }
    };
    let full_coin = kron(&coin_op, &identity(space.fock_dim()));
    let out = full_coin.dot(&after_channel).dot(&dagger(&full_coin));
    DensityMatrix::new_unchecked_psd(out)
}

/// Reduced walker map of the damped walk in the perfect-reset limit:
/// `E_W(rho) = C rho C + S rho S^dag` with `C = cos(g tau sqrt(N+1))` and
/// `S = a^dag sin(g tau sqrt(N+1))/sqrt(N+1)`, with the same top-edge
/// convention as `jc_unitary`.
pub fn reduced_walker_map(rho_w: &DensityMatrix, params: JCParams) -> Result<DensityMatrix> {
    let f = rho_w.dim();
    if f < 2 {
        return Err(Error::DimensionMismatch(
            "reduced_walker_map needs at least 2 Fock levels".into(),
        ));
    }
    let top = f - 1;
    let cosv: Vec<f64> = (0..f)
        .map(|n| if n == top { 1.0 } else { params.theta(n).cos() })
        .collect();
    let sinv: Vec<f64> = (0..f)
        .map(|n| if n == top { 0.0 } else { params.theta(n).sin() })
        .collect();
    let m = rho_w.mat();
    let mut out: CMatrix = Array2::zeros((f, f));
    for n in 0..f {
        for k in 0..f {
            out[[n, k]] += c64(cosv[n] * cosv[k], 0.0) * m[[n, k]];
            if n + 1 < f && k + 1 < f {
                out[[n + 1, k + 1]] += c64(sinv[n] * sinv[k], 0.0) * m[[n, k]];
            }
        }
    }
    DensityMatrix::new_unchecked_psd(out)
}

/// Iterate `walk_step` from `initial`, returning the walker's Fock
/// distribution after 0..=steps applications. Fails loudly if population
/// approaches the truncation edge.
pub fn run_walk(
    variant: WalkVariant,
    params: JCParams,
    steps: usize,
    initial: &DensityMatrix,
) -> Result<Vec<Vec<f64>>> {
    let mut rho = initial.clone();
    let mut out = Vec::with_capacity(steps + 1);
    let record = |rho: &DensityMatrix| -> Result<Vec<f64>> {
        let marginal = partial_trace_coin(rho)?;
        Ok(marginal.populations())
    };
    let dist0 = record(&rho)?;
    check_truncation(&dist0, 0)?;
    out.push(dist0);
    for step in 1..=steps {
        rho = walk_step(&rho, variant, params)?;
        let dist = record(&rho)?;
        check_truncation(&dist, step)?;
        out.push(dist);
    }
    Ok(out)
}

fn check_truncation(dist: &[f64], step: usize) -> Result<()> {
    // population at n >= n_max - 2, the top three ladder levels
    let f = dist.len();
    let leak: f64 = dist[f.saturating_sub(3)..].iter().sum();
    if leak >= TRUNCATION_LEAK_LIMIT {
        return Err(Error::Truncation { step, leak });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::random;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    fn trapping_params(n_target: usize, space_g: f64) -> JCParams {
        let tau = trapping_time(space_g, n_target, 1).unwrap();
        JCParams::new(space_g, tau).unwrap()
    }

    #[test]
    fn jc_unitary_zero_time_is_identity() {
        let space = SystemSpace::new(5).unwrap();
        let u = jc_unitary(JCParams::new(1.0, 0.0).unwrap(), space);
        assert!(max_abs_diff(&u, &identity(space.dim())) <= 1e-15);
    }

    #[test]
    fn jc_unitary_full_rabi_swap() {
        // g tau = pi/2 sends |e,0> to -i|g,1>
        let space = SystemSpace::new(5).unwrap();
        let u = jc_unitary(JCParams::new(1.0, PI / 2.0).unwrap(), space);
        let col = u.column(space.index(0, 0));
        assert_abs_diff_eq!(
            (col[space.index(1, 1)] - c64(0.0, -1.0)).norm(),
            0.0,
            epsilon = 1e-14
        );
        assert!(col[space.index(0, 0)].norm() <= 1e-14);
    }

    #[test]
    fn jc_unitary_is_unitary() {
        let space = SystemSpace::new(8).unwrap();
        let u = jc_unitary(JCParams::new(2.3, 0.7).unwrap(), space);
        let prod = dagger(&u).dot(&u);
        assert!(max_abs_diff(&prod, &identity(space.dim())) <= 1e-12);
    }

    #[test]
    fn trapping_makes_target_stationary() {
        let n_t = 6;
        let space = SystemSpace::new(n_t + 4).unwrap();
        let params = trapping_params(n_t, 1.0);
        let u = jc_unitary(params, space);
        // |e, n_T> picks up the phase cos(k pi) = -1, no transfer
        let col = u.column(space.index(0, n_t));
        assert_abs_diff_eq!(
            (col[space.index(0, n_t)] - c64(-1.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(emit_probability(params, n_t), 0.0, epsilon = 1e-25);
    }

    #[test]
    fn emit_probability_matches_unitary_element() {
        let space = SystemSpace::new(9).unwrap();
        let params = JCParams::new(1.7, 0.31).unwrap();
        let u = jc_unitary(params, space);
        for n in 0..5 {
            let amp = u[[space.index(1, n + 1), space.index(0, n)]];
            assert_abs_diff_eq!(
                amp.norm_sqr(),
                emit_probability(params, n),
                epsilon = 1e-14
            );
        }
        // derived scalar value: sin^2(pi/sqrt(7)) at g tau = pi/sqrt(7)
        let p = emit_probability(JCParams::new(1.0, PI / 7f64.sqrt()).unwrap(), 0);
        assert_abs_diff_eq!(p, 0.8600770839013909, epsilon = 1e-12);
        // sin^2(pi/2) = 1
        assert_abs_diff_eq!(
            emit_probability(JCParams::new(1.0, PI / 2.0).unwrap(), 0),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn coin_damping_limits() {
        // eta = 1: identity channel
        let ch = coin_damping(1.0).unwrap();
        let mut rng = random::rng(21);
        let rho = random::random_density(&mut rng, 2);
        assert!(max_abs_diff(&ch.apply_coin(rho.mat()), rho.mat()) <= 1e-14);

        // eta = 0 resets |e><e| to |g><g|
        let ch = coin_damping(0.0).unwrap();
        let excited = DensityMatrix::basis_state(2, 0);
        let out = ch.apply_coin(excited.mat());
        assert_abs_diff_eq!(out[[1, 1]].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out[[0, 0]].re, 0.0, epsilon = 1e-15);

        assert!(coin_damping(1.5).is_err());
        assert!(coin_damping(-0.1).is_err());
    }

    #[test]
    fn coin_damping_general_pure_state() {
        // input alpha|g> + beta|e> maps to
        // [[eta |beta|^2, alpha* beta sqrt(eta)], [alpha beta* sqrt(eta), 1 - eta |beta|^2]]
        let eta = 0.37;
        let ch = coin_damping(eta).unwrap();
        let mut rng = random::rng(33);
        for _ in 0..100 {
            let ket = random::random_ket(&mut rng, 2);
            let (beta, alpha) = (ket[0], ket[1]); // |e> first in our basis
            let rho = DensityMatrix::from_pure(&ket).unwrap();
            let out = ch.apply_coin(rho.mat());
            assert_abs_diff_eq!(out[[0, 0]].re, eta * beta.norm_sqr(), epsilon = 1e-13);
            assert_abs_diff_eq!(
                out[[1, 1]].re,
                1.0 - eta * beta.norm_sqr(),
                epsilon = 1e-13
            );
            let expected01 = alpha.conj() * beta * eta.sqrt();
            assert!((out[[0, 1]] - expected01).norm() <= 1e-13);
        }
    }

    #[test]
    fn kraus_completeness_across_eta() {
        for eta in [0.0, 0.1, 0.5, 0.9, 1.0] {
            let ch = coin_damping(eta).unwrap();
            assert!(ch.completeness_defect() <= 1e-12);
        }
    }

    #[test]
    fn coin_flip_and_hadamard_identities() {
        let x = coin_flip();
        let minus_eye = identity(2).mapv(|z| -z);
        assert!(max_abs_diff(&x.dot(&x), &minus_eye) <= 1e-15);

        let h = coin_hadamard();
        assert!(max_abs_diff(&h.dot(&h), &identity(2)) <= 1e-15);

        // conjugation by the flip swaps populations
        let ground = DensityMatrix::basis_state(2, 1);
        let out = x.dot(ground.mat()).dot(&dagger(&x));
        assert_abs_diff_eq!(out[[0, 0]].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn walk_step_number_state_action() {
        // damped eta=0 on |e><e| (x) |n><n| spreads over {n, n+1} with
        // cos^2/sin^2 weights and leaves the coin excited after the flip
        let space = SystemSpace::new(10).unwrap();
        let params = JCParams::new(1.0, 0.4).unwrap();
        let n = 3;
        let rho = DensityMatrix::basis_state(space.dim(), space.index(0, n));
        let out = walk_step(&rho, WalkVariant::Damped(0.0), params).unwrap();
        let theta = params.theta(n);
        let pops = out.populations();
        assert_abs_diff_eq!(pops[space.index(0, n)], theta.cos().powi(2), epsilon = 1e-13);
        assert_abs_diff_eq!(
            pops[space.index(0, n + 1)],
            theta.sin().powi(2),
            epsilon = 1e-13
        );
        let coin_ground: f64 = (0..space.fock_dim())
            .map(|k| pops[space.index(1, k)])
            .sum();
        assert_abs_diff_eq!(coin_ground, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn walk_step_fixed_point_at_trapping() {
        let n_t = 4;
        let space = SystemSpace::new(n_t + 4).unwrap();
        let params = trapping_params(n_t, 1.0);
        let rho = DensityMatrix::basis_state(space.dim(), space.index(0, n_t));
        let out = walk_step(&rho, WalkVariant::Damped(0.0), params).unwrap();
        assert!(max_abs_diff(out.mat(), rho.mat()) <= 1e-12);
    }

    #[test]
    fn walk_step_single_step_support() {
        let space = SystemSpace::new(6).unwrap();
        let params = JCParams::new(1.0, 0.8).unwrap();
        let rho = DensityMatrix::basis_state(space.dim(), space.index(0, 0));
        let out = walk_step(&rho, WalkVariant::UnitaryHadamard, params).unwrap();
        let pops = out.populations();
        let total: f64 = pops.iter().sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        for n in 2..space.fock_dim() {
            assert!(pops[space.index(0, n)].abs() <= 1e-14);
            assert!(pops[space.index(1, n)].abs() <= 1e-14);
        }
    }

    #[test]
    fn walk_step_is_cptp_on_random_states() {
        let space = SystemSpace::new(5).unwrap();
        let params = JCParams::new(1.3, 0.5).unwrap();
        let mut rng = random::rng(55);
        for eta in [0.0, 0.3, 1.0] {
            for _ in 0..5 {
                let rho = random::random_density(&mut rng, space.dim());
                let out = walk_step(&rho, WalkVariant::Damped(eta), params).unwrap();
                // full validation incl. PSD
                assert!(DensityMatrix::new(out.mat().clone()).is_ok());
            }
        }
    }

    #[test]
    fn reduced_map_matches_full_computation() {
        // oracle: the full coin (x) Fock composite map, traced over the coin
        let space = SystemSpace::new(8).unwrap();
        let params = JCParams::new(1.0, 0.6).unwrap();
        let mut rng = random::rng(77);
        for _ in 0..10 {
            // random diagonal walker state away from the edge
            let mut diag = vec![0.0; space.fock_dim()];
            let mut total = 0.0;
            for d in diag.iter_mut().take(space.fock_dim() - 3) {
                *d = rng.gen_range(0.0..1.0);
                total += *d;
            }
            let mut m: CMatrix = Array2::zeros((space.fock_dim(), space.fock_dim()));
            for (n, d) in diag.iter().enumerate() {
                m[[n, n]] = c64(d / total, 0.0);
            }
            let rho_w = DensityMatrix::new_unchecked_psd(m).unwrap();

            let reduced = reduced_walker_map(&rho_w, params).unwrap();

            let full = kron(
                DensityMatrix::basis_state(2, 0).mat(),
                rho_w.mat(),
            );
            let full = DensityMatrix::new_unchecked_psd(full).unwrap();
            let stepped = walk_step(&full, WalkVariant::Damped(0.0), params).unwrap();
            let marginal = partial_trace_coin(&stepped).unwrap();
            assert!(max_abs_diff(reduced.mat(), marginal.mat()) <= 1e-12);
        }
    }

    #[test]
    fn reduced_map_trapping_and_vacuum() {
        let n_t = 16;
        let params = trapping_params(n_t, 1.0);
        let f = n_t + 11;

        let trapped = DensityMatrix::basis_state(f, n_t);
        let out = reduced_walker_map(&trapped, params).unwrap();
        assert!(max_abs_diff(out.mat(), trapped.mat()) <= 1e-12);

        // vacuum input at n_T = 16: diag(cos^2(pi/sqrt(17)), sin^2(pi/sqrt(17)), 0, ...)
        let vacuum = DensityMatrix::basis_state(f, 0);
        let out = reduced_walker_map(&vacuum, params).unwrap();
        let pops = out.populations();
        assert_abs_diff_eq!(pops[0], 0.5234414296577501, epsilon = 1e-12);
        assert_abs_diff_eq!(pops[1], 0.4765585703422498, epsilon = 1e-12);
        assert!(pops[2..].iter().all(|&p| p.abs() <= 1e-15));
    }

    #[test]
    fn trapping_time_values() {
        let g = 2.0;
        assert_abs_diff_eq!(trapping_time(g, 0, 1).unwrap(), PI / g, epsilon = 1e-15);
        assert_abs_diff_eq!(
            trapping_time(g, 5, 2).unwrap(),
            2.0 * trapping_time(g, 5, 1).unwrap(),
            epsilon = 1e-15
        );
        // g = 30 gamma, n_T = 6: tau_T = pi / (30 sqrt(7))
        assert_abs_diff_eq!(
            trapping_time(30.0, 6, 1).unwrap(),
            PI / (30.0 * 7f64.sqrt()),
            epsilon = 1e-15
        );
        assert!(trapping_time(0.0, 3, 1).is_err());
        assert!(trapping_time(1.0, 3, 0).is_err());
    }

    #[test]
    fn run_walk_zero_steps_and_normalization() {
        let space = SystemSpace::new(12).unwrap();
        let params = JCParams::new(1.0, 0.5).unwrap();
        let initial = DensityMatrix::basis_state(space.dim(), space.index(0, 0));
        let dists = run_walk(WalkVariant::UnitaryHadamard, params, 6, &initial).unwrap();
        assert_eq!(dists.len(), 7);
        assert_abs_diff_eq!(dists[0][0], 1.0, epsilon = 1e-14);
        for d in &dists {
            assert_abs_diff_eq!(d.iter().sum::<f64>(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn run_walk_ceiling_under_trapping() {
        let n_t = 16;
        let space = SystemSpace::new(n_t + 10).unwrap();
        let params = trapping_params(n_t, 1.0);
        let initial = DensityMatrix::basis_state(space.dim(), space.index(0, 0));
        let dists = run_walk(WalkVariant::Damped(0.0), params, 40, &initial).unwrap();
        for d in &dists {
            let above: f64 = d[n_t + 1..].iter().sum();
            assert!(above <= 1e-12, "leak above target: {above:e}");
        }
    }

    #[test]
    fn run_walk_truncation_fault_is_loud() {
        // Hadamard walk on a tiny ladder hits the ceiling fast
        let space = SystemSpace::new(3).unwrap();
        let params = JCParams::new(1.0, 0.9).unwrap();
        let initial = DensityMatrix::basis_state(space.dim(), space.index(0, 0));
        let res = run_walk(WalkVariant::UnitaryHadamard, params, 30, &initial);
        assert!(matches!(res, Err(Error::Truncation { .. })));
    }

    #[test]
    fn monotone_support_growth() {
        let space = SystemSpace::new(9).unwrap();
        let params = JCParams::new(1.0, 0.7).unwrap();
        let initial = DensityMatrix::basis_state(space.dim(), space.index(0, 2));
        let mut rho = initial;
        for step in 1..=4 {
            rho = walk_step(&rho, WalkVariant::Damped(0.0), params).unwrap();
            let marg = partial_trace_coin(&rho).unwrap();
            let pops = marg.populations();
            let above: f64 = pops[2 + step + 1..].iter().sum();
            assert!(above <= 1e-13);
        }
    }

}
