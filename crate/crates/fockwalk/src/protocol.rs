//! The experimental recurrence: noisy resonant JC phase, STED-enhanced
//! decay phase, noisy pi flip, iterated from `|e> (x) |0>` with fresh noise
//! draws per step per trajectory, ensemble-averaged over trajectories.
//!
//! Naming note: the de-excitation probability of the coin during the JC
//! phase is `walk::emit_probability`; the population left in the excited
//! state after an incomplete decay phase (and flipped into the ground
//! state) is `residual_ground_population`. Both get called "P_g" in
//! informal usage; they are distinct quantities.

use ndarray::Array2;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lindblad::{
    FactoredPropagator, Lindbladian, Propagator, SectorPropagator, SystemHamiltonian,
};
use crate::quantum::{
    c64, dagger, identity, kron, ops, partial_trace_coin, trace, CMatrix, DensityMatrix,
    SystemSpace,
};
use crate::walk::{self, JCParams};
use crate::{Error, Result};

/// Population within two levels of the Fock-ladder top that invalidates a
/// truncated run.
pub const TRUNCATION_LEAK_LIMIT: f64 = 1e-6;

/// How the JC-on phase is modeled: closed (unitary) evolution, or a Lindblad
/// propagation that keeps the coin decay at `gamma` and the cavity decay at
/// `gamma_c` switched on during the coupling window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum JcPhase {
    #[default]
    Unitary,
    Lindblad,
}

/// All physical rates in units of the bare coin decay rate `gamma`, times in
/// units of `1/gamma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProtocolParams {
    pub g: f64,
    pub delta_g: f64,
    pub gamma: f64,
    pub gamma_c: f64,
    pub gamma_sted: f64,
    pub sigma_n: f64,
    pub n_target: usize,
    pub k: u32,
    pub n_max: usize,
    pub steps: usize,
    pub trajectories: usize,
    pub seed: u64,
    /// Decay-phase duration; `None` resolves to `5 / gamma_sted`.
    pub tau_gamma: Option<f64>,
    pub jc_phase: JcPhase,
    /// Keep the JC exchange term in the decay-phase Hamiltonian. Off by
    /// default: with gamma_sted >> delta_g the detuning does not actually
    /// suppress the exchange, and the residual |e,n> -> |g,n+1> transfer
    /// (~ g^2 (n+1) / ((gamma_sted/2)^2 + delta_g^2) per step) breaks
    /// trapping even at zero noise. The off setting models the coupling as
    /// fully switched out during the reset window.
    pub decay_coupling: bool,
}

impl Default for ProtocolParams {
    fn default() -> Self {
        ProtocolParams {
            g: 30.0,
            delta_g: 300.0,
            gamma: 1.0,
            gamma_c: 0.1,
            gamma_sted: 1.0e4,
            sigma_n: 0.0,
            n_target: 6,
            k: 1,
            n_max: 16,
            steps: 150,
            trajectories: 200,
            seed: 7_1802_2409,
            tau_gamma: None,
            jc_phase: JcPhase::Unitary,
            decay_coupling: false,
        }
    }
}

impl ProtocolParams {
    /// Defaults with the truncation margin re-derived from the target.
    pub fn for_target(n_target: usize) -> Self {
        ProtocolParams {
            n_target,
            n_max: n_target + 10,
            ..ProtocolParams::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) {
            return Err(Error::InvalidParameter("gamma must be > 0".into()));
        }
        if self.gamma_sted < self.gamma {
            return Err(Error::InvalidParameter(
                "gamma_sted must be >= gamma".into(),
            ));
        }
        if !(self.gamma_c >= 0.0) {
            return Err(Error::InvalidParameter("gamma_c must be >= 0".into()));
        }
        if !(self.sigma_n >= 0.0) {
            return Err(Error::InvalidParameter("sigma_n must be >= 0".into()));
        }
        if !(self.g > 0.0) {
            return Err(Error::InvalidParameter("g must be > 0".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        if self.n_max < self.n_target + 4 {
            return Err(Error::InvalidParameter(format!(
                "n_max {} leaves less than 4 levels of headroom above n_target {}",
                self.n_max, self.n_target
            )));
        }
        if let Some(tg) = self.tau_gamma {
            if !(tg > 0.0) {
                return Err(Error::InvalidParameter("tau_gamma must be > 0".into()));
            }
        }
        Ok(())
    }

    pub fn space(&self) -> Result<SystemSpace> {
        SystemSpace::new(self.n_max)
    }

    pub fn tau_gamma(&self) -> f64 {
        self.tau_gamma.unwrap_or(5.0 / self.gamma_sted)
    }

    pub fn tau_trap(&self) -> Result<f64> {
        walk::trapping_time(self.g, self.n_target, self.k)
    }
}

/// Per-step, per-trajectory timing noise; both draws are zero-mean normal
/// with standard deviation `sigma_n`, independent of each other.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseDraws {
    pub delta_tau: f64,
    pub delta_x: f64,
}

impl NoiseDraws {
    pub fn sample(rng: &mut ChaCha8Rng, sigma_n: f64) -> Self {
        if sigma_n == 0.0 {
            return NoiseDraws::default();
        }
        let normal = Normal::new(0.0, sigma_n).expect("sigma_n validated non-negative");
        NoiseDraws {
            delta_tau: normal.sample(rng),
            delta_x: normal.sample(rng),
        }
    }
}

/// Observables of the (trajectory-averaged) state after one step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    /// Overlap with `|n_T><n_T|` on the walker marginal.
    pub fidelity: f64,
    /// Ensemble standard deviation of the per-trajectory fidelity.
    pub fidelity_std: f64,
    pub populations: Vec<f64>,
    pub coin_excited: f64,
    /// `P(n > n_T)`, the signature of broken trapping.
    pub leak: f64,
    /// `P(n >= n_max - 2)`, the truncation diagnostic.
    pub truncation_leak: f64,
}

/// Noisy resonant JC unitary: the exact block unitary with effective angle
/// `g tau_T (1 + delta_tau) sqrt(n+1)`. The relative timing error is clamped
/// above -1; at realistic noise levels the clamp is tens of sigma away.
pub fn noisy_jc_unitary(p: &ProtocolParams, delta_tau: f64) -> Result<CMatrix> {
    let tau = p.tau_trap()? * (1.0 + delta_tau.max(-0.999));
    let space = p.space()?;
    Ok(walk::jc_unitary(JCParams::new(p.g, tau)?, space))
}

/// Noisy pi flip `X = exp(-i pi (1 + delta_x) sigma_x / 2)` on the coin.
pub fn flip_operator(delta_x: f64) -> CMatrix {
    let phi = std::f64::consts::PI * (1.0 + delta_x) / 2.0;
    let mut m: CMatrix = Array2::zeros((2, 2));
    m[[0, 0]] = c64(phi.cos(), 0.0);
    m[[1, 1]] = c64(phi.cos(), 0.0);
    m[[0, 1]] = c64(0.0, -phi.sin());
    m[[1, 0]] = c64(0.0, -phi.sin());
    m
}

/// Ground-state population left over by an incomplete decay phase,
/// `e^{-gamma_sted tau_gamma}` (the flip moves it to the ground state).
pub fn residual_ground_population(p: &ProtocolParams) -> f64 {
    (-p.gamma_sted * p.tau_gamma()).exp()
}

/// Precomputed operators for repeated protocol steps: the decay-phase
/// propagator is one matrix exponential, cached here and reused at every
/// step of every trajectory.
pub struct ProtocolEngine {
    params: ProtocolParams,
    space: SystemSpace,
    decay: DecayPropagator,
    /// Lindblad JC-phase propagator for the noiseless duration, if enabled.
    jc_lindblad: Option<(Lindbladian, Propagator)>,
}

/// Decay-phase propagator. Without the exchange term the generator splits
/// across the tensor factors and the factored form keeps memory polynomial
/// in the Fock cutoff; the full Liouvillian exponential is only built when
/// the coupling is kept on.
enum DecayPropagator {
    Sector(SectorPropagator),
    Factored(FactoredPropagator),
}

impl DecayPropagator {
    fn apply_mat(&self, rho: &CMatrix) -> CMatrix {
        match self {
            DecayPropagator::Sector(p) => p.apply_mat(rho),
            DecayPropagator::Factored(p) => p.apply_mat(rho),
        }
    }
}

impl ProtocolEngine {
    pub fn new(params: ProtocolParams) -> Result<Self> {
        params.validate()?;
        let space = params.space()?;
        let f = space.fock_dim();

        // decay phase: full detuning back on the cavity term; the exchange
        // term is dropped unless decay_coupling is set
        let decay = if params.decay_coupling {
            let h_decay = SystemHamiltonian {
                delta_g: params.delta_g,
                delta_s: 0.0,
                g: params.g,
            }
            .build(space);
            let collapses = vec![
                (kron(&ops::sigma_minus(), &identity(f)), params.gamma_sted),
                (kron(&identity(2), &ops::annihilation(f)), params.gamma_c),
            ];
            let lind = Lindbladian::new(h_decay, collapses)?;
            // the decay generator conserves the excitation grading (coin
            // |e> carries one excitation), so the exchange term can be kept
            // without paying for the dense superoperator
            let exc: Vec<usize> = (0..2 * f).map(|i| i % f + usize::from(i < f)).collect();
            DecayPropagator::Sector(SectorPropagator::new(&lind, &exc, params.tau_gamma())?)
        } else {
            let coin = Lindbladian::new(
                Array2::zeros((2, 2)),
                vec![(ops::sigma_minus(), params.gamma_sted)],
            )?;
            let cavity = Lindbladian::new(
                ops::number(f).mapv(|z| z * c64(-params.delta_g, 0.0)),
                vec![(ops::annihilation(f), params.gamma_c)],
            )?;
            DecayPropagator::Factored(FactoredPropagator::new(
                &coin,
                &cavity,
                params.tau_gamma(),
            )?)
        };

        let jc_lindblad = match params.jc_phase {
            JcPhase::Unitary => None,
            JcPhase::Lindblad => {
                let h_on = SystemHamiltonian {
                    delta_g: params.delta_g,
                    delta_s: -params.delta_g,
                    g: params.g,
                }
                .build(space);
                let collapses = vec![
                    (kron(&ops::sigma_minus(), &identity(f)), params.gamma),
                    (kron(&identity(2), &ops::annihilation(f)), params.gamma_c),
                ];
                let lind = Lindbladian::new(h_on, collapses)?;
                let prop = Propagator::new(&lind, params.tau_trap()?)?;
                Some((lind, prop))
            }
        };

        Ok(ProtocolEngine {
            params,
            space,
            decay,
            jc_lindblad,
        })
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }

    pub fn space(&self) -> SystemSpace {
        self.space
    }

    /// `|e><e| (x) |0><0|`.
    pub fn initial_state(&self) -> DensityMatrix {
        DensityMatrix::basis_state(self.space.dim(), self.space.index(0, 0))
    }

    /// One recurrence step: JC phase, decay phase, flip. The truncation
    /// fault is reported with step index 0; `run` rewrites it.
    pub fn step(&self, rho: &DensityMatrix, draws: NoiseDraws) -> Result<DensityMatrix> {
        if rho.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state dim {} vs engine dim {}",
                rho.dim(),
                self.space.dim()
            )));
        }
        let after_jc = match &self.jc_lindblad {
            None => {
                let u = noisy_jc_unitary(&self.params, draws.delta_tau)?;
                u.dot(rho.mat()).dot(&dagger(&u))
            }
            Some((lind, cached)) => {
                if draws.delta_tau == 0.0 {
                    cached.apply_mat(rho.mat())
                } else {
                    let tau =
                        self.params.tau_trap()? * (1.0 + draws.delta_tau.max(-0.999));
                    Propagator::new(lind, tau)?.apply_mat(rho.mat())
                }
            }
        };
        let after_decay = self.decay.apply_mat(&after_jc);
        let x = kron(&flip_operator(draws.delta_x), &identity(self.space.fock_dim()));
        let out = x.dot(&after_decay).dot(&dagger(&x));

        let tr = trace(&out);
        if (tr.re - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidState(format!(
                "protocol step drifted off trace 1: {tr}"
            )));
        }
        let state = DensityMatrix::with_trace_tol(out, 1e-8)?;
        let leak = self.truncation_leak(&state);
        if leak >= TRUNCATION_LEAK_LIMIT {
            return Err(Error::Truncation { step: 0, leak });
        }
        Ok(state)
    }

    fn truncation_leak(&self, rho: &DensityMatrix) -> f64 {
        let pops = rho.populations();
        let f = self.space.fock_dim();
        let mut leak = 0.0;
        for n in (self.space.n_max().saturating_sub(2))..f {
            leak += pops[self.space.index(0, n)] + pops[self.space.index(1, n)];
        }
        leak
    }

    fn record_from(&self, step: usize, avg: &DensityMatrix, fid_std: f64) -> Result<StepRecord> {
        let marginal = partial_trace_coin(avg)?;
        let populations = marginal.populations();
        let fidelity = populations[self.params.n_target];
        let leak: f64 = populations[self.params.n_target + 1..].iter().sum();
        let f = self.space.fock_dim();
        let truncation_leak: f64 = populations[f - 3..].iter().sum();
        let pops_full = avg.populations();
        let coin_excited: f64 = (0..f).map(|n| pops_full[self.space.index(0, n)]).sum();

        let total: f64 = populations.iter().sum();
        if (total - 1.0).abs() > 1e-8 || populations.iter().any(|&p| p < -1e-9) {
            return Err(Error::InvalidState(format!(
                "step {step}: population vector invalid (sum {total})"
            )));
        }
        Ok(StepRecord {
            step,
            fidelity,
            fidelity_std: fid_std,
            populations,
            coin_excited,
            leak,
            truncation_leak,
        })
    }

    /// Iterate the recurrence for every trajectory, average the density
    /// matrices across trajectories at each step, and report per-step
    /// observables of the averaged state. Deterministic for a fixed seed
    /// regardless of thread count: trajectory RNG streams are derived from
    /// the master seed by stream index, and reductions run in trajectory
    /// order.
    pub fn run(&self) -> Result<Vec<StepRecord>> {
        let ntraj = if self.params.sigma_n == 0.0 {
            1
        } else {
            self.params.trajectories.max(1)
        };
        let sigma = self.params.sigma_n;
        let initial = self.initial_state();

        let mut lanes: Vec<(DensityMatrix, ChaCha8Rng)> = (0..ntraj)
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(self.params.seed);
                rng.set_stream(t as u64 + 1);
                (initial.clone(), rng)
            })
            .collect();

        let mut records = Vec::with_capacity(self.params.steps + 1);
        records.push(self.record_from(0, &initial, 0.0)?);

        for step in 1..=self.params.steps {
            let stepped: Vec<Result<f64>> = lanes
                .par_iter_mut()
                .map(|(rho, rng)| {
                    let draws = NoiseDraws::sample(rng, sigma);
                    let next = self.step(rho, draws)?;
                    let marginal = partial_trace_coin(&next)?;
                    let fid = marginal.populations()[self.params.n_target];
                    *rho = next;
                    Ok(fid)
                })
                .collect();

            let mut fids = Vec::with_capacity(ntraj);
            for r in stepped {
                fids.push(r.map_err(|e| match e {
                    Error::Truncation { leak, .. } => Error::Truncation { step, leak },
                    other => other,
                })?);
            }

            let mut sum: CMatrix = Array2::zeros((self.space.dim(), self.space.dim()));
            for (rho, _) in &lanes {
                sum = sum + rho.mat();
            }
            let avg = DensityMatrix::with_trace_tol(
                sum.mapv(|z| z / c64(ntraj as f64, 0.0)),
                1e-8,
            )?;

            let mean = fids.iter().sum::<f64>() / ntraj as f64;
            let var = fids.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / ntraj as f64;
            records.push(self.record_from(step, &avg, var.sqrt())?);
        }
        Ok(records)
    }
}

/// Build an engine and run it.
pub fn run_protocol(params: &ProtocolParams) -> Result<Vec<StepRecord>> {
    ProtocolEngine::new(params.clone())?.run()
}

/// First step `s` from which the fidelity stays stable: every window
/// `[s', s'+10]` with `s' >= s` has spread below 0.005. `None` if the
/// sequence never stabilizes. Requiring stability through the end of the
/// run (rather than only in the first quiet window) keeps the initial dead
/// plateau of slow ladders — where the fidelity sits near zero for dozens
/// of steps before the walker arrives — from registering as stationary.
pub fn stabilization_step(records: &[StepRecord]) -> Option<usize> {
    const WINDOW: usize = 10;
    const SPREAD: f64 = 0.005;
    if records.is_empty() {
        return None;
    }
    if records.len() <= WINDOW {
        return None;
    }
    let mut first_stable = None;
    for s in 0..records.len() - WINDOW {
        let window = &records[s..=s + WINDOW];
        let max = window.iter().map(|r| r.fidelity).fold(f64::MIN, f64::max);
        let min = window.iter().map(|r| r.fidelity).fold(f64::MAX, f64::min);
        if max - min < SPREAD {
            first_stable.get_or_insert(records[s].step);
        } else {
            first_stable = None;
        }
    }
    first_stable
}
