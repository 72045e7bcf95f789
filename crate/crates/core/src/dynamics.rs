//! Clock-laser spectroscopy of a level dressed by the resonant |Δm| = 2
//! quadrupole coupling (S₁/₂ → D₅/₂ in an I = 0 ion).
//!
//! The rotating-wave model has four states. In the slot order used
//! throughout, slot 0 is the D state one rf photon above m = 1/2 (m = 5/2),
//! slot 1 is |D, 1/2⟩, slot 2 is |D, −3/2⟩ and slot 3 is |S, 1/2⟩. The
//! slot 0 and 2 couplings are half the cos-amplitude elements of
//! [`crate::coupling::hq_matrix`].

use nalgebra::{DMatrix, DVector, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angular::{EulerAngles, HalfInt};
use crate::coupling::{orientation_amplitude, reduced_element, HyperfineState, LevelSpec};
use crate::error::{Error, Result};

pub const SLOT_S: usize = 3;
pub const SLOT_D: usize = 1;

/// Parameters of the four-level rotating-wave model, all in rad/s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RwaSystem {
    /// ω_Q = εΘ/ħ.
    pub omega_q: f64,
    /// Clock-laser Rabi frequency Ω₀.
    pub omega0: f64,
    /// Δ = Ω_rf − 2ω_z.
    pub big_delta: f64,
    /// Laser detuning δ from the Zeeman-shifted line.
    pub delta: f64,
}

impl RwaSystem {
    pub fn new(omega_q: f64, omega0: f64, big_delta: f64, delta: f64) -> Self {
        RwaSystem { omega_q, omega0, big_delta, delta }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        RwaSystem { delta, ..self }
    }

    pub fn with_big_delta(self, big_delta: f64) -> Self {
        RwaSystem { big_delta, ..self }
    }

    /// π-time of the bare clock transition.
    pub fn pi_time(&self) -> f64 {
        std::f64::consts::PI / self.omega0
    }
}

/// Couplings ω_Q/√10 and 3ω_Q/(5√2) between slot 1 and slots 0 and 2.
pub fn rwa_couplings(omega_q: f64) -> (f64, f64) {
    (omega_q / 10f64.sqrt(), 3.0 * omega_q / (5.0 * 2f64.sqrt()))
}

pub fn build_rwa_hamiltonian(sys: &RwaSystem) -> Matrix4<f64> {
    let (a, b) = rwa_couplings(sys.omega_q);
    let h = 0.5 * sys.omega0;
    Matrix4::new(
        -sys.big_delta, a, 0.0, 0.0, //
        a, 0.0, b, h, //
        0.0, b, sys.big_delta, 0.0, //
        0.0, h, 0.0, sys.delta,
    )
}

/// Populations after evolving `initial` for `tau` seconds under a
/// time-independent real symmetric Hamiltonian (rad/s).
pub fn propagate(h: &Matrix4<f64>, tau: f64, initial: usize) -> Result<Vector4<f64>> {
    if !(tau >= 0.0) {
        return Err(Error::invalid(format!("probe time must be non-negative, got {tau}")));
    }
    if initial > 3 {
        return Err(Error::invalid(format!("initial state index {initial} out of range")));
    }
    let eig = SymmetricEigen::new(*h);
    let v = &eig.eigenvectors;
    let mut out = Vector4::zeros();
    for j in 0..4 {
        let amp: Complex64 = (0..4)
            .map(|k| Complex64::from_polar(v[(j, k)] * v[(initial, k)], -eig.eigenvalues[k] * tau))
            .sum();
        out[j] = amp.norm_sqr();
    }
    Ok(out)
}

/// Excitation probability out of |S, 1/2⟩.
pub fn transfer_probability(sys: &RwaSystem, tau: f64) -> Result<f64> {
    let p = propagate(&build_rwa_hamiltonian(sys), tau, SLOT_S)?;
    Ok((1.0 - p[SLOT_S]).clamp(0.0, 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumScan {
    /// Laser detunings δ in rad/s, strictly increasing.
    pub detuning: Vec<f64>,
    pub transfer: Vec<f64>,
    /// Probe time in seconds.
    pub tau: f64,
}

/// `n` evenly spaced points over [−span, span].
pub fn symmetric_grid(span: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n).map(|i| -span + 2.0 * span * i as f64 / (n - 1) as f64).collect()
}

/// 801 points over ±2ω_Q.
pub fn default_grid(omega_q: f64) -> Vec<f64> {
    symmetric_grid(2.0 * omega_q, 801)
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("detuning grid is empty"));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("detuning grid must be finite and strictly increasing"));
    }
    Ok(())
}

pub fn scan_spectrum(template: &RwaSystem, grid: &[f64], tau: f64) -> Result<SpectrumScan> {
    check_grid(grid)?;
    let transfer = grid
        .iter()
        .map(|&d| transfer_probability(&template.with_delta(d), tau))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumScan { detuning: grid.to_vec(), transfer, tau })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    /// Interpolated position (same units as the scan grid).
    pub position: f64,
    pub height: f64,
    pub prominence: f64,
}

/// Local maxima whose topographic prominence is at least
/// `min_prominence` times the scan maximum. Positions are refined by a
/// parabola through the three samples around each maximum.
pub fn find_peaks(scan: &SpectrumScan, min_prominence: f64) -> Vec<Peak> {
    let (x, y) = (&scan.detuning, &scan.transfer);
    let n = y.len();
    let ymax = y.iter().cloned().fold(0.0, f64::max);
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if y[i] > y[i - 1] {
            // step over flat tops
            let mut j = i;
            while j + 1 < n && y[j + 1] == y[i] {
                j += 1;
            }
            if j + 1 < n && y[j + 1] < y[i] {
                let top = y[i];
                let left = lowest_until_higher(y, i, top, -1);
                let right = lowest_until_higher(y, j, top, 1);
                let prominence = top - left.max(right);
                if prominence >= min_prominence * ymax {
                    let c = (i + j) / 2;
                    peaks.push(Peak { position: refine(x, y, c), height: top, prominence });
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
}

fn lowest_until_higher(y: &[f64], start: usize, top: f64, dir: isize) -> f64 {
    let mut lo = top;
    let mut k = start as isize + dir;
    while k >= 0 && (k as usize) < y.len() {
        let v = y[k as usize];
        if v > top {
            break;
        }
        lo = lo.min(v);
        k += dir;
    }
    lo
}

fn refine(x: &[f64], y: &[f64], c: usize) -> f64 {
    if c == 0 || c + 1 >= y.len() {
        return x[c];
    }
    let (y0, y1, y2) = (y[c - 1], y[c], y[c + 1]);
    let denom = y0 - 2.0 * y1 + y2;
    if denom >= 0.0 {
        return x[c];
    }
    let t = 0.5 * (y0 - y2) / denom;
    x[c] + t * 0.5 * (x[c + 1] - x[c - 1])
}

/// Inputs of the explicit time-dependent model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloquetParams {
    /// ω_Q = εΘ/ħ (rad/s).
    pub omega_q: f64,
    /// Ω_rf (rad/s).
    pub drive: f64,
    pub omega0: f64,
    pub big_delta: f64,
    pub delta: f64,
    pub orientation: EulerAngles,
    /// Also carry m = −5/2, −1/2, 3/2, which the RWA model drops.
    pub all_states: bool,
    /// Per-period step-doubling tolerance on the propagator.
    pub tolerance: f64,
}

impl FloquetParams {
    pub fn from_rwa(sys: &RwaSystem, drive: f64) -> Self {
        FloquetParams {
            omega_q: sys.omega_q,
            drive,
            omega0: sys.omega0,
            big_delta: sys.big_delta,
            delta: sys.delta,
            orientation: EulerAngles::IDENTITY,
            all_states: false,
            tolerance: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloquetResult {
    /// Populations in the RWA slot order.
    pub populations: [f64; 4],
    /// Population found outside the four RWA states.
    pub leakage: f64,
    /// max |U†U − 1| of the full propagator.
    pub unitarity_defect: f64,
    pub steps_per_period: usize,
}

struct Model {
    /// Twice m of each D state, then S last.
    twice_m: Vec<i32>,
    /// cos-amplitude couplings in rad/s within the D block.
    amp: DMatrix<Complex64>,
    p: FloquetParams,
}

impl Model {
    fn new(p: FloquetParams) -> Result<Self> {
        let level = LevelSpec::new("D5/2", HalfInt::ZERO, HalfInt::from_twice(5), 1.0);
        let twice_m: Vec<i32> = if p.all_states { vec![5, 1, -3, -5, -1, 3] } else { vec![5, 1, -3] };
        let n = twice_m.len();
        let mut amp = DMatrix::from_element(n, n, Complex64::from(0.0));
        let f = HalfInt::from_twice(5);
        for (r, &mr) in twice_m.iter().enumerate() {
            for (c, &mc) in twice_m.iter().enumerate() {
                let bra = HyperfineState { f, m: HalfInt::from_twice(mr) };
                let ket = HyperfineState { f, m: HalfInt::from_twice(mc) };
                let red = reduced_element(&level, bra, ket)?;
                if red != 0.0 {
                    let w = orientation_amplitude(0.0, 1.0, (mr - mc) / 2, p.orientation);
                    amp[(r, c)] = w * red * p.omega_q;
                }
            }
        }
        Ok(Model { twice_m, amp, p })
    }

    fn dim(&self) -> usize {
        self.twice_m.len() + 1
    }

    /// Hamiltonian (rad/s) in the frame rotating at (m − 1/2)Ω_rf/2.
    fn hamiltonian(&self, t: f64) -> DMatrix<Complex64> {
        let n = self.twice_m.len();
        let mut h = DMatrix::from_element(n + 1, n + 1, Complex64::from(0.0));
        let cos = (self.p.drive * t).cos();
        for r in 0..n {
            let mr = self.twice_m[r] as f64 / 2.0;
            h[(r, r)] = Complex64::from(-(mr - 0.5) * self.p.big_delta / 2.0) + self.amp[(r, r)] * cos;
            for c in 0..n {
                if c == r || self.amp[(r, c)].norm() == 0.0 {
                    continue;
                }
                let dm = (self.twice_m[r] - self.twice_m[c]) as f64 / 2.0;
                h[(r, c)] = self.amp[(r, c)] * cos * Complex64::from_polar(1.0, dm * self.p.drive * t / 2.0);
            }
        }
        h[(SLOT_D, n)] = Complex64::from(0.5 * self.p.omega0);
        h[(n, SLOT_D)] = Complex64::from(0.5 * self.p.omega0);
        h[(n, n)] = Complex64::from(self.p.delta);
        h
    }

    /// Fourth-order Magnus propagator over [t0, t0 + steps·dt].
    fn integrate(&self, t0: f64, dt: f64, steps: usize) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut u = DMatrix::identity(d, d);
        let off = 3f64.sqrt() / 6.0;
        for k in 0..steps {
            let t = t0 + k as f64 * dt;
            let h1 = self.hamiltonian(t + (0.5 - off) * dt);
            let h2 = self.hamiltonian(t + (0.5 + off) * dt);
            let comm = &h2 * &h1 - &h1 * &h2;
            let i = Complex64::i();
            let k_mat = (&h1 + &h2) * Complex64::from(0.5 * dt) - comm * (i * (3f64.sqrt() * dt * dt / 12.0));
            u = expm_hermitian(&k_mat) * u;
        }
        u
    }
}

/// exp(−iK) for Hermitian K.
fn expm_hermitian(k: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let herm = (k + k.adjoint()) * Complex64::from(0.5);
    let eig = SymmetricEigen::new(herm);
    let v = &eig.eigenvectors;
    let phases = DVector::from_iterator(v.ncols(), eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, -l)));
    let mut scaled = v.clone();
    for (c, ph) in phases.iter().enumerate() {
        for z in scaled.column_mut(c).iter_mut() {
            *z *= *ph;
        }
    }
    scaled * v.adjoint()
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let d = u.nrows();
    max_abs(&(u.adjoint() * u - DMatrix::identity(d, d)))
}

const MAX_STEPS_PER_PERIOD: usize = 1 << 14;

/// Propagator over [0, tau] of the full cos(Ω_rf t) model, with its
/// steps-per-period. Negative `tau` integrates backwards.
pub fn floquet_propagator(p: &FloquetParams, tau: f64) -> Result<(DMatrix<Complex64>, usize)> {
    let largest = p.omega_q.abs().max(p.omega0.abs()).max(p.big_delta.abs()).max(p.delta.abs());
    if !(p.drive > 0.0) || p.drive < 100.0 * largest {
        return Err(Error::invalid(format!(
            "drive {:.3e} rad/s must exceed 100× the largest coupling or detuning ({largest:.3e} rad/s)",
            p.drive
        )));
    }
    if !tau.is_finite() {
        return Err(Error::invalid("probe time must be finite"));
    }
    let model = Model::new(*p)?;
    let period = 4.0 * std::f64::consts::PI / p.drive;
    let sign = tau.signum();
    let dt_period = sign * period;
    let mut steps = 32;
    let (u_period, steps) = loop {
        let coarse = model.integrate(0.0, dt_period / steps as f64, steps);
        let fine = model.integrate(0.0, dt_period / (2 * steps) as f64, 2 * steps);
        let err = max_abs(&(&fine - &coarse));
        if err < p.tolerance {
            break (fine, 2 * steps);
        }
        if 2 * steps >= MAX_STEPS_PER_PERIOD {
            return Err(Error::Stiffness { steps: 2 * steps, estimate: err, tolerance: p.tolerance });
        }
        steps *= 2;
    };
    let cycles = (tau.abs() / period).floor();
    let rest = tau.abs() - cycles * period;
    let mut power = u_period;
    let mut acc = DMatrix::identity(model.dim(), model.dim());
    let mut n = cycles as u64;
    while n > 0 {
        if n & 1 == 1 {
            acc = &power * &acc;
        }
        power = &power * &power;
        n >>= 1;
    }
    let rest_steps = ((steps as f64 * rest / period).ceil() as usize).max(1);
    let u_rest = model.integrate(0.0, sign * rest / rest_steps as f64, rest_steps);
    Ok((u_rest * acc, steps))
}

/// Direct step-by-step propagator from `t0` to `t1` (either direction)
/// with a fixed number of Magnus steps per drive period.
pub fn evolve_between(p: &FloquetParams, t0: f64, t1: f64, steps_per_period: usize) -> Result<DMatrix<Complex64>> {
    if !(p.drive > 0.0) || !t0.is_finite() || !t1.is_finite() || steps_per_period == 0 {
        return Err(Error::invalid("evolution window and drive must be finite and positive"));
    }
    let model = Model::new(*p)?;
    let period = 4.0 * std::f64::consts::PI / p.drive;
    let n = (((t1 - t0).abs() / period) * steps_per_period as f64).ceil().max(1.0) as usize;
    Ok(model.integrate(t0, (t1 - t0) / n as f64, n))
}

/// Populations after `tau` starting from |S, 1/2⟩, integrating the
/// time-dependent Schrödinger equation with the explicit cos(Ω_rf t)
/// quadrupole coupling.
pub fn floquet_oracle(p: &FloquetParams, tau: f64) -> Result<FloquetResult> {
    if !(tau >= 0.0) {
        return Err(Error::invalid(format!("probe time must be non-negative, got {tau}")));
    }
    let (u, steps) = floquet_propagator(p, tau)?;
    let d = u.nrows();
    let s = d - 1;
    let col = u.column(s);
    let mut populations = [0.0; 4];
    for k in 0..3 {
        populations[k] = col[k].norm_sqr();
    }
    populations[SLOT_S] = col[s].norm_sqr();
    let leakage = (3..s).map(|k| col[k].norm_sqr()).sum();
    Ok(FloquetResult { populations, leakage, unitarity_defect: unitarity_defect(&u), steps_per_period: steps })
}
