//! Magnetic-noise averaged spectra, χ² fitting of (ω_Q, σ_B), and the
//! quadrupole moment that follows from a fitted ω_Q.

use std::f64::consts::TAU;

use argmin::core::{CostFunction, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::neldermead::NelderMead;
use gauss_quad::GaussHermite;
use nalgebra::{Matrix2, Vector2};
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::dynamics::{check_grid, scan_spectrum, transfer_probability, RwaSystem, SpectrumScan};
use crate::error::{Error, Result};
use crate::trap::{Measured, TrapConfig, CODATA_2018};

pub const DEFAULT_G_S: f64 = 2.0025;
pub const DEFAULT_G_D: f64 = 1.2;
pub const QUADRATURE_TOLERANCE: f64 = 1e-4;

/// Quasi-static Gaussian field noise: B is fixed during one shot and
/// normally distributed from shot to shot.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// σ in tesla.
    pub sigma_b: f64,
    /// Mean field offset in tesla.
    pub offset_b: f64,
    /// dΔ/dB magnitude, rad/s per tesla.
    pub k_big_delta: f64,
    /// dδ/dB magnitude, rad/s per tesla.
    pub k_delta: f64,
}

impl NoiseModel {
    /// k_Δ = 2g_Dμ_B/ħ and k_δ = (g_D − g_S)μ_B/(2ħ). `with_k_delta = false`
    /// keeps only the Δ sensitivity.
    pub fn from_g_factors(sigma_b: f64, g_d: f64, g_s: f64, with_k_delta: bool) -> Result<Self> {
        if !(sigma_b >= 0.0) || !sigma_b.is_finite() {
            return Err(Error::invalid(format!("σ must be non-negative, got {sigma_b}")));
        }
        let mu = CODATA_2018.bohr_magneton / CODATA_2018.hbar;
        Ok(NoiseModel {
            sigma_b,
            offset_b: 0.0,
            k_big_delta: 2.0 * g_d * mu,
            k_delta: if with_k_delta { (g_d - g_s) * mu / 2.0 } else { 0.0 },
        })
    }

    pub fn with_sigma(self, sigma_b: f64) -> Self {
        NoiseModel { sigma_b, ..self }
    }

    fn shifted(&self, sys: &RwaSystem, b: f64) -> RwaSystem {
        RwaSystem {
            big_delta: sys.big_delta - self.k_big_delta * b,
            delta: sys.delta - self.k_delta * b,
            ..*sys
        }
    }
}

fn averaged(template: &RwaSystem, noise: &NoiseModel, grid: &[f64], tau: f64, rule: &GaussHermite) -> Result<Vec<f64>> {
    let norm = 1.0 / std::f64::consts::PI.sqrt();
    let scale = std::f64::consts::SQRT_2 * noise.sigma_b;
    grid.iter()
        .map(|&d| {
            let mut acc = 0.0;
            for &(x, w) in rule.as_node_weight_pairs() {
                let sys = noise.shifted(&template.with_delta(d), noise.offset_b + scale * x);
                acc += w * transfer_probability(&sys, tau)?;
            }
            Ok((acc * norm).clamp(0.0, 1.0))
        })
        .collect()
}

fn rule(order: usize) -> Result<GaussHermite> {
    GaussHermite::new(order).map_err(|e| Error::invalid(format!("quadrature order {order}: {e}")))
}

/// Transfer spectrum averaged over the field distribution by
/// Gauss–Hermite quadrature, checked against twice the order.
pub fn noise_averaged_signal(
    template: &RwaSystem,
    noise: &NoiseModel,
    grid: &[f64],
    tau: f64,
    order: usize,
) -> Result<SpectrumScan> {
    if order < 8 {
        return Err(Error::invalid(format!("quadrature order must be at least 8, got {order}")));
    }
    check_grid(grid)?;
    if noise.sigma_b == 0.0 {
        let shifted = noise.shifted(template, noise.offset_b);
        return scan_spectrum(&shifted, grid, tau);
    }
    let low = averaged(template, noise, grid, tau, &rule(order)?)?;
    let high = averaged(template, noise, grid, tau, &rule(2 * order)?)?;
    let change = low.iter().zip(&high).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if change > QUADRATURE_TOLERANCE {
        return Err(Error::QuadratureConvergence {
            order,
            doubled: 2 * order,
            max_change: change,
            tolerance: QUADRATURE_TOLERANCE,
        });
    }
    Ok(SpectrumScan { detuning: grid.to_vec(), transfer: high, tau })
}

/// Counts observed at each laser detuning.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumData {
    /// δ in rad/s.
    pub detuning: Vec<f64>,
    pub excited: Vec<f64>,
    pub shots: Vec<u32>,
}

impl SpectrumData {
    pub fn validate(&self) -> Result<()> {
        let n = self.detuning.len();
        if self.excited.len() != n || self.shots.len() != n {
            return Err(Error::invalid("detuning, counts and shots columns differ in length"));
        }
        if n < 8 {
            return Err(Error::invalid(format!("need at least 8 data points, got {n}")));
        }
        if self.shots.contains(&0) {
            return Err(Error::invalid("every point needs at least one shot"));
        }
        if self.excited.iter().zip(&self.shots).any(|(&k, &s)| !(k >= 0.0) || k > s as f64) {
            return Err(Error::invalid("excited counts must lie in [0, shots]"));
        }
        check_grid(&self.detuning)
    }

    pub fn fraction(&self, i: usize) -> f64 {
        self.excited[i] / self.shots[i] as f64
    }
}

/// Everything about the experiment that is not fitted.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumModel {
    /// Ω₀ (rad/s).
    pub omega0: f64,
    /// Mean Δ (rad/s).
    pub big_delta: f64,
    /// Probe time (s).
    pub tau: f64,
    pub g_d: f64,
    pub g_s: f64,
    pub with_k_delta: bool,
    pub quadrature_order: usize,
}

impl SpectrumModel {
    /// Probe time τ and Ω₀ = π/τ on the bare line.
    pub fn pi_pulse(tau: f64) -> Self {
        SpectrumModel {
            omega0: std::f64::consts::PI / tau,
            big_delta: 0.0,
            tau,
            g_d: DEFAULT_G_D,
            g_s: DEFAULT_G_S,
            with_k_delta: true,
            quadrature_order: 32,
        }
    }

    pub fn noise(&self, sigma_b: f64) -> Result<NoiseModel> {
        NoiseModel::from_g_factors(sigma_b, self.g_d, self.g_s, self.with_k_delta)
    }

    /// Noise-averaged transfer at fixed quadrature order (no convergence
    /// check).
    pub fn evaluate(&self, omega_q: f64, sigma_b: f64, grid: &[f64]) -> Result<Vec<f64>> {
        let sys = RwaSystem::new(omega_q, self.omega0, self.big_delta, 0.0);
        let noise = self.noise(sigma_b.abs())?;
        if noise.sigma_b == 0.0 {
            return Ok(scan_spectrum(&sys, grid, self.tau)?.transfer);
        }
        averaged(&sys, &noise, grid, self.tau, &rule(self.quadrature_order)?)
    }

    /// Binomially sampled counts at the given parameters.
    pub fn synthesize<R: Rng>(&self, omega_q: f64, sigma_b: f64, grid: &[f64], shots: u32, rng: &mut R) -> Result<SpectrumData> {
        let p = self.evaluate(omega_q, sigma_b, grid)?;
        let excited = p
            .iter()
            .map(|&pi| Ok(Binomial::new(shots as u64, pi).map_err(|e| Error::invalid(e.to_string()))?.sample(rng) as f64))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpectrumData { detuning: grid.to_vec(), excited, shots: vec![shots; grid.len()] })
    }

    /// Exact expected counts, for noiseless tests.
    pub fn expected(&self, omega_q: f64, sigma_b: f64, grid: &[f64], shots: u32) -> Result<SpectrumData> {
        let p = self.evaluate(omega_q, sigma_b, grid)?;
        Ok(SpectrumData {
            detuning: grid.to_vec(),
            excited: p.iter().map(|x| x * shots as f64).collect(),
            shots: vec![shots; grid.len()],
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Seed grid for ω_Q/2π in Hz.
    pub omega_q_hz: (f64, f64),
    /// Seed grid for σ in nT.
    pub sigma_nt: (f64, f64),
    pub grid_points: (usize, usize),
    pub max_iterations: u64,
    /// Multiplies every point variance.
    pub variance_scale: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            omega_q_hz: (500.0, 4000.0),
            sigma_nt: (0.0, 60.0),
            grid_points: (15, 7),
            max_iterations: 1000,
            variance_scale: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// ω_Q in rad/s.
    pub omega_q: Measured,
    /// σ in tesla.
    pub sigma_b: Measured,
    pub chi2_reduced: f64,
    pub n_points: usize,
    /// Shots per point (the largest, if they differ).
    pub shots_per_point: u32,
    pub iterations: u64,
}

struct Chi2<'a> {
    data: &'a SpectrumData,
    model: &'a SpectrumModel,
    scale: f64,
}

impl Chi2<'_> {
    // parameters in (Hz, nT)
    fn model_at(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.model.evaluate(TAU * p[0], p[1].abs() * 1e-9, &self.data.detuning)
    }

    fn variances(&self, model: &[f64]) -> Vec<f64> {
        model
            .iter()
            .zip(&self.data.shots)
            .map(|(&p, &n)| {
                let n = n as f64;
                self.scale * (p * (1.0 - p)).max(0.25 / n) / n
            })
            .collect()
    }

    fn chi2(&self, p: &[f64]) -> Result<f64> {
        let m = self.model_at(p)?;
        let var = self.variances(&m);
        Ok((0..m.len()).map(|i| (self.data.fraction(i) - m[i]).powi(2) / var[i]).sum())
    }
}

impl CostFunction for Chi2<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        if !(p[0] > 0.0) {
            return Ok(f64::MAX);
        }
        self.chi2(p).map_err(|e| argmin::core::Error::msg(e.to_string()))
    }
}

/// Least-χ² estimate of (ω_Q, σ_B) with binomial weights, seeded by a
/// coarse grid and refined with a simplex search.
pub fn fit_spectrum(data: &SpectrumData, model: &SpectrumModel, options: &FitOptions) -> Result<FitResult> {
    data.validate()?;
    if !(options.variance_scale > 0.0) {
        return Err(Error::invalid("variance scale must be positive"));
    }
    let cost = Chi2 { data, model, scale: options.variance_scale };
    let (nw, ns) = options.grid_points;
    let (w0, w1) = options.omega_q_hz;
    let (s0, s1) = options.sigma_nt;
    if nw < 2 || ns < 2 || !(w0 > 0.0 && w1 > w0) || !(s0 >= 0.0 && s1 > s0) {
        return Err(Error::invalid("fit seed grid needs two or more points over increasing, positive ranges"));
    }
    let mut best = (f64::INFINITY, vec![w0, s0]);
    for i in 0..nw {
        for j in 0..ns {
            let p = vec![
                w0 + (w1 - w0) * i as f64 / (nw - 1) as f64,
                s0 + (s1 - s0) * j as f64 / (ns - 1) as f64,
            ];
            let c = cost.chi2(&p)?;
            if c < best.0 {
                best = (c, p);
            }
        }
    }
    let start = best.1;
    let dw = (w1 - w0) / (nw - 1) as f64;
    let ds = (s1 - s0) / (ns - 1) as f64;
    let simplex = vec![
        start.clone(),
        vec![start[0] + 0.5 * dw, start[1]],
        vec![start[0], start[1] + 0.5 * ds],
    ];
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(1e-12)
        .map_err(|e| Error::Optimizer(e.to_string()))?;
    let res = Executor::new(cost, solver)
        .configure(|s| s.max_iters(options.max_iterations))
        .run()
        .map_err(|e| Error::Optimizer(e.to_string()))?;
    let state = res.state();
    let iterations = state.get_iter();
    if !matches!(state.get_termination_status(), TerminationStatus::Terminated(TerminationReason::SolverConverged)) {
        return Err(Error::NonConvergence { iterations });
    }
    let p = state.get_best_param().cloned().ok_or(Error::NonConvergence { iterations })?;
    let chi2 = state.get_best_cost();
    let cost = Chi2 { data, model, scale: options.variance_scale };
    let p = vec![p[0], p[1].abs()];
    let cov = covariance(&cost, &p)?;

    let dof = data.detuning.len().saturating_sub(2).max(1) as f64;
    let chi2_reduced = chi2 / dof;
    let inflate = if chi2_reduced > 1.0 { chi2_reduced.sqrt() } else { 1.0 };
    Ok(FitResult {
        omega_q: Measured::new(TAU * p[0], TAU * cov[(0, 0)].sqrt() * inflate),
        sigma_b: Measured::new(p[1] * 1e-9, cov[(1, 1)].sqrt() * 1e-9 * inflate),
        chi2_reduced,
        n_points: data.detuning.len(),
        shots_per_point: data.shots.iter().copied().max().unwrap_or(0),
        iterations,
    })
}

/// (JᵀWJ)⁻¹ in (Hz, nT)² from central differences.
fn covariance(cost: &Chi2, p: &[f64]) -> Result<Matrix2<f64>> {
    let m = cost.model_at(p)?;
    let var = cost.variances(&m);
    let steps = [1e-4 * p[0].abs().max(1.0), 1e-3 * p[1].abs().max(1.0)];
    let mut jac = vec![[0.0; 2]; m.len()];
    for k in 0..2 {
        let mut hi = p.to_vec();
        let mut lo = p.to_vec();
        hi[k] += steps[k];
        lo[k] -= steps[k];
        if k == 1 && lo[1] < 0.0 {
            // one-sided at the σ = 0 boundary
            lo[1] = p[1];
        }
        let (mh, ml) = (cost.model_at(&hi)?, cost.model_at(&lo)?);
        let h = hi[k] - lo[k];
        for i in 0..m.len() {
            jac[i][k] = (mh[i] - ml[i]) / h;
        }
    }
    let mut fisher = Matrix2::zeros();
    for i in 0..m.len() {
        let g = Vector2::new(jac[i][0], jac[i][1]);
        fisher += g * g.transpose() / var[i];
    }
    let det = fisher.determinant();
    if !(det.abs() > 1e-12 * fisher[(0, 0)].abs() * fisher[(1, 1)].abs()) {
        return Err(Error::DegenerateCovariance);
    }
    let cov = fisher.try_inverse().ok_or(Error::DegenerateCovariance)?;
    if !(cov[(0, 0)] > 0.0 && cov[(1, 1)] > 0.0) {
        return Err(Error::DegenerateCovariance);
    }
    Ok(cov)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaEstimate {
    /// Θ in e·a₀².
    pub theta: Measured,
}

/// Θ = ħω_Q√2 / (mΩ_rf ω_s a₀²), with the relative errors of ω_Q and ω_s
/// added in quadrature.
pub fn extract_theta(omega_q: Measured, trap: &TrapConfig) -> Result<ThetaEstimate> {
    trap.validate()?;
    let secular = trap
        .secular
        .ok_or_else(|| Error::invalid("trap has no measured secular frequency"))?;
    if !(omega_q.value > 0.0) || !(secular.value > 0.0) || omega_q.uncertainty < 0.0 || secular.uncertainty < 0.0 {
        return Err(Error::invalid("ω_Q and ω_s must be positive with non-negative errors"));
    }
    let c = CODATA_2018;
    let theta = c.hbar * omega_q.value * std::f64::consts::SQRT_2
        / (trap.mass * trap.drive * secular.value * c.bohr_radius * c.bohr_radius);
    let rel = omega_q.relative().hypot(secular.relative());
    Ok(ThetaEstimate { theta: Measured::new(theta, theta * rel) })
}

/// Systematic allowance for field drift between runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Drift {
    /// Absolute ω_Q error in rad/s.
    Absolute(f64),
    /// Field drift in tesla, converted at 1.4% of ω_Q per 20 nT.
    Field(f64),
}

pub const DRIFT_FRACTION_PER_TESLA: f64 = 0.014 / 20e-9;

/// Mean of the fitted ω_Q with the largest fit error and the drift error
/// added in quadrature.
pub fn combine_runs(fits: &[Measured], drift: Drift) -> Result<Measured> {
    if fits.is_empty() {
        return Err(Error::invalid("no fits to combine"));
    }
    let mean = fits.iter().map(|f| f.value).sum::<f64>() / fits.len() as f64;
    let largest = fits.iter().map(|f| f.uncertainty).fold(0.0, f64::max);
    let drift = match drift {
        Drift::Absolute(e) => e,
        Drift::Field(b) => mean.abs() * DRIFT_FRACTION_PER_TESLA * b,
    };
    Ok(Measured::new(mean, largest.hypot(drift)))
}
