//! Observable consequences of the oscillating quadrupole interaction:
//! rf sidebands, resonant and off-resonant Zeeman couplings, and clock
//! shifts of m = 0 states.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angular::{d2, EulerAngles, HalfInt};
use crate::coupling::{hq_element, reduced_element, HyperfineState, LevelSpec};
use crate::error::{Error, Result};
use crate::trap::{TrapConfig, CODATA_2018};

/// Denominators closer than this fraction of Ω_rf to zero are rejected.
pub const DEFAULT_RESONANCE_GUARD: f64 = 1e-3;

/// Static magnetic field and the g-factor of the hyperfine level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeemanConfig {
    pub g_f: f64,
    /// B₀ in tesla.
    pub b0: f64,
}

impl ZeemanConfig {
    pub fn new(g_f: f64, b0: f64) -> Result<Self> {
        if !g_f.is_finite() || !b0.is_finite() {
            return Err(Error::invalid("g-factor and field must be finite"));
        }
        Ok(ZeemanConfig { g_f, b0 })
    }

    /// Field that produces the requested splitting (rad/s).
    pub fn from_splitting(g_f: f64, omega_z: f64) -> Result<Self> {
        if g_f == 0.0 {
            return Err(Error::invalid("g-factor is zero; the splitting cannot be tuned"));
        }
        Self::new(g_f, omega_z * CODATA_2018.hbar / (g_f * CODATA_2018.bohr_magneton))
    }

    /// ω_z = g_F μ_B B₀/ħ in rad/s.
    pub fn splitting(&self) -> f64 {
        self.g_f * CODATA_2018.bohr_magneton * self.b0 / CODATA_2018.hbar
    }
}

/// Peak level shift over ħΩ_rf for |F, m⟩.
pub fn sideband_index(level: &LevelSpec, f: HalfInt, m: HalfInt, trap: &TrapConfig) -> Result<f64> {
    trap.validate()?;
    let s = HyperfineState::new(f, m)?;
    Ok(hq_element(level, trap, s, s)?.re / trap.drive)
}

/// Coupling amplitude ⟨bra|H_Q|ket⟩/ħ (rad/s) for a |Δm| = 1 or 2
/// resonance.
pub fn resonant_coupling(level: &LevelSpec, bra: HyperfineState, ket: HyperfineState, trap: &TrapConfig) -> Result<Complex64> {
    let dm = (bra.m - ket.m).twice();
    if dm == 0 || dm.abs() > 4 || dm % 2 != 0 {
        return Err(Error::invalid(format!(
            "Δm = {} is not a quadrupole resonance channel (need |Δm| = 1 or 2)",
            bra.m - ket.m
        )));
    }
    hq_element(level, trap, bra, ket)
}

/// Second-order shift (rad/s) of |F, m⟩ from off-resonant couplings to the
/// neighbouring Zeeman states of the same F.
pub fn offresonant_zeeman_shift(
    level: &LevelSpec,
    f: HalfInt,
    m: HalfInt,
    trap: &TrapConfig,
    zeeman: &ZeemanConfig,
    guard: Option<f64>,
) -> Result<f64> {
    trap.validate()?;
    let ket = HyperfineState::new(f, m)?;
    let guard = guard.unwrap_or(DEFAULT_RESONANCE_GUARD) * trap.drive;
    let omega_z = zeeman.splitting();
    let mut shift = 0.0;
    for dm in [-2, -1, 1, 2] {
        let target = m + HalfInt::int(dm);
        if target.twice().abs() > f.twice() {
            continue;
        }
        let bra = HyperfineState { f, m: target };
        let coupling = hq_element(level, trap, bra, ket)?.norm_sqr();
        if coupling == 0.0 {
            continue;
        }
        let zd = omega_z * dm as f64;
        let gap = zd.abs() - trap.drive;
        if gap.abs() < guard {
            return Err(Error::ResonanceSingularity { delta_m: dm, denominator: gap, guard });
        }
        shift -= 0.5 * coupling * zd / (zd * zd - trap.drive * trap.drive);
    }
    Ok(shift)
}

/// Shift of an m = 0 clock state, split by |Δm| of the contributing
/// couplings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClockShift {
    /// Total shift in Hz.
    pub total: f64,
    /// Contributions of |Δm| = 0, 1, 2 in Hz.
    pub by_delta_m: [f64; 3],
    /// False when Ω_rf exceeds 10% of the smallest hyperfine splitting and
    /// the static-limit expression is questionable.
    pub static_limit: bool,
}

impl ClockShift {
    fn zero() -> Self {
        ClockShift { total: 0.0, by_delta_m: [0.0; 3], static_limit: true }
    }
}

fn energies(level: &LevelSpec) -> Result<BTreeMap<HalfInt, f64>> {
    let mut out = BTreeMap::new();
    for f in level.allowed_f() {
        match level.hyperfine_energies.get(&f) {
            Some(e) => {
                out.insert(f, *e);
            }
            None => {
                return Err(Error::invalid(format!(
                    "{}: hyperfine_energies has no entry for F = {f}",
                    level.label
                )))
            }
        }
    }
    Ok(out)
}

fn static_limit(energies: &BTreeMap<HalfInt, f64>, trap: &TrapConfig) -> bool {
    let e: Vec<f64> = energies.values().copied().collect();
    let mut smallest = f64::INFINITY;
    for (i, a) in e.iter().enumerate() {
        for b in &e[i + 1..] {
            smallest = smallest.min((a - b).abs());
        }
    }
    trap.drive / (2.0 * PI) <= 0.1 * smallest
}

/// Static-limit shift of |F, 0⟩ from couplings to the other hyperfine
/// levels: hδν = −Σ |⟨F',Δm|H_Q|F,0⟩|² / (2(E_F' − E_F)).
pub fn clock_shift(level: &LevelSpec, f: HalfInt, trap: &TrapConfig) -> Result<ClockShift> {
    trap.validate()?;
    let ket = HyperfineState::new(f, HalfInt::ZERO)?;
    if !level.contains_f(f) {
        return Err(Error::invalid(format!("{}: F = {f} is not a level of this manifold", level.label)));
    }
    if level.allowed_f().len() == 1 {
        return Ok(ClockShift::zero());
    }
    let energies = energies(level)?;
    let mut out = ClockShift { static_limit: static_limit(&energies, trap), ..ClockShift::zero() };
    for (&fp, &ep) in &energies {
        if fp == f {
            continue;
        }
        // (M/ħ)² / (8π² ΔE/h) is the shift in Hz
        let gap = 8.0 * PI * PI * (ep - energies[&f]);
        for dm in -2..=2i32 {
            if dm.abs() > fp.twice() / 2 {
                continue;
            }
            let bra = HyperfineState { f: fp, m: HalfInt::int(dm) };
            let c = hq_element(level, trap, bra, ket)?.norm_sqr();
            out.by_delta_m[dm.unsigned_abs() as usize] -= c / gap;
        }
    }
    out.total = out.by_delta_m.iter().sum();
    Ok(out)
}

/// Equal-weight mean over every hyperfine level of `level`.
pub fn hyperfine_average(level: &LevelSpec, per_f: &BTreeMap<HalfInt, f64>) -> Result<f64> {
    let fs = level.allowed_f();
    let mut sum = 0.0;
    for f in &fs {
        sum += per_f
            .get(f)
            .ok_or_else(|| Error::invalid(format!("{}: no shift supplied for F = {f}", level.label)))?;
    }
    if let Some(extra) = per_f.keys().find(|f| !level.contains_f(**f)) {
        return Err(Error::invalid(format!("{}: F = {extra} is not a level of this manifold", level.label)));
    }
    Ok(sum / fs.len() as f64)
}

/// [`clock_shift`] averaged over all hyperfine levels, component by
/// component.
pub fn averaged_clock_shift(level: &LevelSpec, trap: &TrapConfig) -> Result<ClockShift> {
    let fs = level.allowed_f();
    let mut out = ClockShift::zero();
    for &f in &fs {
        let s = clock_shift(level, f, trap)?;
        for k in 0..3 {
            out.by_delta_m[k] += s.by_delta_m[k] / fs.len() as f64;
        }
        out.static_limit &= s.static_limit;
    }
    out.total = out.by_delta_m.iter().sum();
    Ok(out)
}

/// Squared moduli f₀, f₁, f₂ of D⁽²⁾_{k,2} + D⁽²⁾_{k,−2}: the orientation
/// dependence of |Δm| = k couplings in a trap with A = 0.
pub fn orientation_factors(angles: EulerAngles) -> [f64; 3] {
    let f = |k: i32| (d2(k, 2, angles) + d2(k, -2, angles)).norm_sqr();
    [f(0), f(1), f(2)]
}

/// Which clock-state shift is decomposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "f")]
pub enum Averaging {
    /// Equal-weight mean over all hyperfine levels.
    Hyperfine,
    /// The m = 0 state of one hyperfine level.
    Single(HalfInt),
}

/// δν/ν = a(f₂ + ηf₁) + a₀f₀.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftDecomposition {
    pub a: f64,
    pub eta: f64,
    /// Residual |Δm| = 0 weight (relative to ν); zero after hyperfine
    /// averaging.
    pub a0: f64,
    pub f1: f64,
    pub f2: f64,
    pub f0: f64,
}

impl ShiftDecomposition {
    pub fn fractional_shift(&self) -> f64 {
        self.a * (self.f2 + self.eta * self.f1) + self.a0 * self.f0
    }

    /// Same weights at another orientation.
    pub fn at(&self, angles: EulerAngles) -> Self {
        let [f0, f1, f2] = orientation_factors(angles);
        ShiftDecomposition { f0, f1, f2, ..*self }
    }
}

/// Split the clock shift of a transition at frequency `nu_hz` into its
/// |Δm| = 1 and 2 weights. Requires an ideal linear trap (A = 0).
pub fn shift_decomposition(level: &LevelSpec, trap: &TrapConfig, nu_hz: f64, averaging: Averaging) -> Result<ShiftDecomposition> {
    trap.validate()?;
    if trap.a != 0.0 {
        return Err(Error::invalid("the (a, η) decomposition assumes A = 0"));
    }
    if trap.epsilon == 0.0 {
        return Err(Error::invalid("ε = 0: there is no shift to decompose"));
    }
    if !(nu_hz > 0.0) {
        return Err(Error::invalid("transition frequency must be positive"));
    }
    let fs = match averaging {
        Averaging::Hyperfine => level.allowed_f(),
        Averaging::Single(f) => {
            if !level.contains_f(f) {
                return Err(Error::invalid(format!("{}: F = {f} is not a level of this manifold", level.label)));
            }
            vec![f]
        }
    };
    let energies = energies(level)?;
    let s = (2.0 / 3.0) * trap.epsilon * trap.epsilon;
    let unit = CODATA_2018.quadrupole_unit() / CODATA_2018.hbar;
    // per |Δm| weight multiplying f_k, in Hz
    let mut w = [0.0f64; 3];
    for &f in &fs {
        let ket = HyperfineState { f, m: HalfInt::ZERO };
        for (&fp, &ep) in &energies {
            if fp == f {
                continue;
            }
            let gap = 8.0 * PI * PI * (ep - energies[&f]);
            for dm in -2..=2i32 {
                if dm.abs() > fp.twice() / 2 {
                    continue;
                }
                let bra = HyperfineState { f: fp, m: HalfInt::int(dm) };
                let r = reduced_element(level, bra, ket)? * unit;
                w[dm.unsigned_abs() as usize] -= r * r * s / gap;
            }
        }
    }
    let n = fs.len() as f64;
    let [c0, c1, c2] = w.map(|x| x / n);
    if c2 == 0.0 {
        return Err(Error::invalid("no |Δm| = 2 coupling to other hyperfine levels"));
    }
    let [f0, f1, f2] = orientation_factors(trap.orientation);
    Ok(ShiftDecomposition { a: c2 / nu_hz, eta: c1 / c2, a0: c0 / nu_hz, f1, f2, f0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trap::Measured;
    use std::f64::consts::TAU;

    fn lu_trap(angles: EulerAngles) -> TrapConfig {
        TrapConfig::ideal_linear(175.94 * CODATA_2018.atomic_mass_unit, TAU * 33e6, Measured::exact(TAU * 1e6), angles).unwrap()
    }

    fn lu_3d2() -> LevelSpec {
        LevelSpec::new("3D2", HalfInt::int(7), HalfInt::int(2), -1.77).with_hyperfine_constants(1.0e9, 0.0)
    }

    #[test]
    fn zeeman_round_trip() {
        let z = ZeemanConfig::from_splitting(1.2, TAU * 1e6).unwrap();
        assert!((z.splitting() / (TAU * 1e6) - 1.0).abs() < 1e-14);
        assert!(ZeemanConfig::from_splitting(0.0, 1.0).is_err());
    }

    #[test]
    fn sideband_vanishes_on_axis() {
        let v = sideband_index(&lu_3d2(), HalfInt::int(5), HalfInt::int(5), &lu_trap(EulerAngles::new(0.3, 0.0))).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn resonant_rejects_delta_m_zero() {
        let s = HyperfineState::new(HalfInt::int(5), HalfInt::ZERO).unwrap();
        assert!(resonant_coupling(&lu_3d2(), s, s, &lu_trap(EulerAngles::IDENTITY)).is_err());
    }

    #[test]
    fn single_level_average_is_identity() {
        let level = LevelSpec::new("D5/2", HalfInt::ZERO, HalfInt::from_twice(5), 3.0);
        let per: BTreeMap<_, _> = [(HalfInt::from_twice(5), 1.25)].into();
        assert_eq!(hyperfine_average(&level, &per).unwrap(), 1.25);
        let lu = lu_3d2();
        assert!(hyperfine_average(&lu, &per).is_err());
    }

    #[test]
    fn missing_energies_named() {
        let level = LevelSpec::new("3D2", HalfInt::int(7), HalfInt::int(2), -1.77);
        let err = clock_shift(&level, HalfInt::int(5), &lu_trap(EulerAngles::IDENTITY)).unwrap_err();
        assert!(err.to_string().contains("hyperfine_energies"), "{err}");
    }

    #[test]
    fn level_repulsion() {
        // lowest level is pushed down, highest up
        let level = lu_3d2();
        let t = lu_trap(EulerAngles::new(0.2, 0.7));
        let fs = level.allowed_f();
        assert!(clock_shift(&level, fs[0], &t).unwrap().total < 0.0);
        assert!(clock_shift(&level, *fs.last().unwrap(), &t).unwrap().total > 0.0);
    }

    #[test]
    fn decomposition_requires_linear_trap() {
        let t = TrapConfig::raw(1e-25, 1e8, 1e7, 1e7, EulerAngles::IDENTITY).unwrap();
        assert!(shift_decomposition(&lu_3d2(), &t, 1e14, Averaging::Hyperfine).is_err());
    }
}
