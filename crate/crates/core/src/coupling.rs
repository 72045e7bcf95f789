//! Quadrupole matrix elements between hyperfine Zeeman states and the
//! oscillating interaction matrix.
//!
//! All rank-2 components are taken in the principal-axis frame and rotated
//! into the laboratory frame with [`crate::angular::wigner_d2`]. The IJ
//! coupling approximation relates every reduced element to the level's
//! quadrupole moment Θ(J) = ⟨JJ|Θ₀⁽²⁾|JJ⟩.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angular::{d2, wigner_3j, wigner_6j, EulerAngles, HalfInt};
use crate::error::{Error, Result};
use crate::trap::{TrapConfig, CODATA_2018};

/// A fine-structure level together with its hyperfine structure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub label: String,
    pub nuclear_spin: HalfInt,
    pub electronic_j: HalfInt,
    /// Θ(J) in e·a₀².
    pub theta: f64,
    /// Hyperfine level energies E_F/h in Hz. Only needed when I > 0 and a
    /// clock shift is requested.
    #[serde(default)]
    pub hyperfine_energies: BTreeMap<HalfInt, f64>,
    #[serde(default)]
    pub g_j: Option<f64>,
    #[serde(default)]
    pub g_f: BTreeMap<HalfInt, f64>,
}

impl LevelSpec {
    pub fn new(label: impl Into<String>, nuclear_spin: HalfInt, electronic_j: HalfInt, theta: f64) -> Self {
        LevelSpec {
            label: label.into(),
            nuclear_spin,
            electronic_j,
            theta,
            hyperfine_energies: BTreeMap::new(),
            g_j: None,
            g_f: BTreeMap::new(),
        }
    }

    pub fn with_hyperfine_energies(mut self, energies: impl IntoIterator<Item = (HalfInt, f64)>) -> Self {
        self.hyperfine_energies = energies.into_iter().collect();
        self
    }

    /// Energies from magnetic-dipole and electric-quadrupole hyperfine
    /// constants (Hz).
    pub fn with_hyperfine_constants(mut self, a_hz: f64, b_hz: f64) -> Self {
        let (i, j) = (self.nuclear_spin.value(), self.electronic_j.value());
        let energies = self
            .allowed_f()
            .into_iter()
            .map(|f| {
                let fv = f.value();
                let k = fv * (fv + 1.0) - i * (i + 1.0) - j * (j + 1.0);
                let mut e = 0.5 * a_hz * k;
                if i >= 1.0 && j >= 1.0 {
                    e += b_hz * (1.5 * k * (k + 1.0) - 2.0 * i * (i + 1.0) * j * (j + 1.0))
                        / (2.0 * i * (2.0 * i - 1.0) * 2.0 * j * (2.0 * j - 1.0));
                }
                (f, e)
            })
            .collect();
        self.hyperfine_energies = energies;
        self
    }

    /// F = |I−J|, ..., I+J.
    pub fn allowed_f(&self) -> Vec<HalfInt> {
        let (i, j) = (self.nuclear_spin.twice(), self.electronic_j.twice());
        ((i - j).abs()..=(i + j)).step_by(2).map(HalfInt::from_twice).collect()
    }

    pub fn contains_f(&self, f: HalfInt) -> bool {
        let (i, j) = (self.nuclear_spin.twice(), self.electronic_j.twice());
        f.twice() >= (i - j).abs() && f.twice() <= i + j && (f.twice() - (i + j)) % 2 == 0
    }

    pub fn validate(&self) -> Result<()> {
        if self.nuclear_spin.twice() < 0 || self.electronic_j.twice() < 0 {
            return Err(Error::invalid(format!("{}: negative angular momentum", self.label)));
        }
        if self.electronic_j.twice() < 2 {
            return Err(Error::invalid(format!(
                "{}: J = {} cannot support a quadrupole moment",
                self.label, self.electronic_j
            )));
        }
        if !self.theta.is_finite() {
            return Err(Error::invalid(format!("{}: quadrupole moment is not finite", self.label)));
        }
        for f in self.hyperfine_energies.keys().chain(self.g_f.keys()) {
            if !self.contains_f(*f) {
                return Err(Error::invalid(format!(
                    "{}: F = {f} is outside |I−J|..I+J for I = {}, J = {}",
                    self.label, self.nuclear_spin, self.electronic_j
                )));
            }
        }
        let mut energies: Vec<f64> = self.hyperfine_energies.values().copied().collect();
        energies.sort_by(f64::total_cmp);
        if energies.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("{}: hyperfine energies must be distinct", self.label)));
        }
        Ok(())
    }

    /// g_F from an explicit table, else from g_J neglecting the nuclear term.
    pub fn g_f(&self, f: HalfInt) -> Option<f64> {
        if let Some(g) = self.g_f.get(&f) {
            return Some(*g);
        }
        let gj = self.g_j?;
        if self.nuclear_spin == HalfInt::ZERO {
            return Some(gj);
        }
        let (fv, i, j) = (f.value(), self.nuclear_spin.value(), self.electronic_j.value());
        if fv == 0.0 {
            return Some(0.0);
        }
        Some(gj * (fv * (fv + 1.0) + j * (j + 1.0) - i * (i + 1.0)) / (2.0 * fv * (fv + 1.0)))
    }

    fn check_f(&self, f: HalfInt) -> Result<()> {
        if self.contains_f(f) {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "{}: F = {f} is not allowed for I = {}, J = {}",
                self.label, self.nuclear_spin, self.electronic_j
            )))
        }
    }
}

/// A hyperfine Zeeman state |F, m⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HyperfineState {
    pub f: HalfInt,
    pub m: HalfInt,
}

impl HyperfineState {
    pub fn new(f: HalfInt, m: HalfInt) -> Result<Self> {
        if m.twice().abs() > f.twice() || (f.twice() - m.twice()) % 2 != 0 {
            return Err(Error::invalid(format!("|F={f}, m={m}⟩ is not a valid state")));
        }
        Ok(HyperfineState { f, m })
    }
}

/// Spherical components ∇E_q of the field gradient in the principal-axis
/// frame, indexed by `q + 2`.
pub fn gradient_components(a: f64, epsilon: f64) -> [Complex64; 5] {
    let side = Complex64::from(epsilon * (2.0f64 / 3.0).sqrt());
    [side, Complex64::from(0.0), Complex64::from(-2.0 * a), Complex64::from(0.0), side]
}

/// Orientation-dependent weight Σ_q ∇E_q D⁽²⁾_{Δμ,q}(ω) multiplying the
/// reduced element of every |Δμ| coupling.
pub fn orientation_amplitude(a: f64, epsilon: f64, delta_m: i32, angles: EulerAngles) -> Complex64 {
    if delta_m.abs() > 2 {
        return Complex64::from(0.0);
    }
    gradient_components(a, epsilon)
        .iter()
        .enumerate()
        .filter(|(_, g)| g.norm() != 0.0)
        .map(|(k, g)| g * d2(delta_m, k as i32 - 2, angles))
        .sum()
}

/// Orientation-independent part of ⟨(IJ)F'μ'|Θ_q|(IJ)Fμ⟩, i.e. the matrix
/// element divided by D⁽²⁾_{Δμ,q}. Includes Θ(J).
pub fn reduced_element(level: &LevelSpec, bra: HyperfineState, ket: HyperfineState) -> Result<f64> {
    level.check_f(bra.f)?;
    level.check_f(ket.f)?;
    HyperfineState::new(bra.f, bra.m)?;
    HyperfineState::new(ket.f, ket.m)?;
    let (i, j) = (level.nuclear_spin, level.electronic_j);
    let dmu = bra.m - ket.m;
    if dmu.twice().abs() > 4 {
        return Ok(0.0);
    }
    let norm = wigner_3j(j, HalfInt::int(2), j, -j, HalfInt::ZERO, j)?;
    if norm == 0.0 {
        return Err(Error::invalid(format!("{}: J = {j} has no quadrupole moment", level.label)));
    }
    let six = wigner_6j(ket.f, bra.f, HalfInt::int(2), j, j, i)?;
    if six == 0.0 {
        return Ok(0.0);
    }
    let three = wigner_3j(ket.f, HalfInt::int(2), bra.f, ket.m, dmu, -bra.m)?;
    // F' + F + I + J + μ' is an integer for any admissible set
    let exponent = bra.f + ket.f + i + j + bra.m;
    let phase = if (exponent.twice() / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let dim = ((bra.f.twice() + 1) as f64 * (ket.f.twice() + 1) as f64).sqrt();
    Ok(phase * dim * six * three / norm * level.theta)
}

/// ⟨(IJ)F'μ'|Θ_q⁽²⁾'|(IJ)Fμ⟩ in e·a₀², for the principal-axis component q.
pub fn theta_matrix_element(
    level: &LevelSpec,
    bra: HyperfineState,
    ket: HyperfineState,
    q: i32,
    angles: EulerAngles,
) -> Result<Complex64> {
    if q.abs() > 2 {
        return Err(Error::invalid(format!("tensor component q = {q} outside [-2, 2]")));
    }
    let reduced = reduced_element(level, bra, ket)?;
    let dmu = bra.m - ket.m;
    if reduced == 0.0 {
        return Ok(Complex64::from(0.0));
    }
    Ok(reduced * d2(dmu.twice() / 2, q, angles))
}

/// C⁽²⁾_{F,m}: the diagonal reduced element in units of Θ(J).
pub fn c2_coefficient(level: &LevelSpec, f: HalfInt, m: HalfInt) -> Result<f64> {
    let state = HyperfineState::new(f, m)?;
    level.check_f(f)?;
    let (i, j) = (level.nuclear_spin, level.electronic_j);
    let norm = wigner_3j(j, HalfInt::int(2), j, -j, HalfInt::ZERO, j)?;
    if norm == 0.0 {
        return Err(Error::invalid(format!("{}: J = {j} has no quadrupole moment", level.label)));
    }
    let six = wigner_6j(f, f, HalfInt::int(2), j, j, i)?;
    let three = wigner_3j(f, HalfInt::int(2), f, state.m, HalfInt::ZERO, -state.m)?;
    let exponent = f + f + i + j + m;
    let phase = if (exponent.twice() / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(phase * (f.twice() + 1) as f64 * six * three / norm)
}

/// Single element ⟨bra|H_Q|ket⟩/ħ in rad/s.
pub fn hq_element(level: &LevelSpec, trap: &TrapConfig, bra: HyperfineState, ket: HyperfineState) -> Result<Complex64> {
    let reduced = reduced_element(level, bra, ket)?;
    if reduced == 0.0 {
        return Ok(Complex64::from(0.0));
    }
    let dm = (bra.m - ket.m).twice() / 2;
    let w = orientation_amplitude(trap.a, trap.epsilon, dm, trap.orientation);
    Ok(w * reduced * CODATA_2018.quadrupole_unit() / CODATA_2018.hbar)
}

/// Amplitude matrix of the oscillating interaction: entries are
/// ⟨i|H_Q|j⟩/ħ in rad/s, the coefficient of cos(Ω_rf t).
#[derive(Clone, Debug, PartialEq)]
pub struct QuadCouplingMatrix {
    pub basis: Vec<HyperfineState>,
    pub amplitude: DMatrix<Complex64>,
}

impl QuadCouplingMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, state: HyperfineState) -> Option<usize> {
        self.basis.binary_search(&state).ok()
    }

    pub fn get(&self, bra: HyperfineState, ket: HyperfineState) -> Option<Complex64> {
        Some(self.amplitude[(self.index_of(bra)?, self.index_of(ket)?)])
    }

    /// Largest |H − H†| entry.
    pub fn hermiticity_defect(&self) -> f64 {
        let h = &self.amplitude;
        let mut worst: f64 = 0.0;
        for r in 0..h.nrows() {
            for c in 0..h.ncols() {
                worst = worst.max((h[(r, c)] - h[(c, r)].conj()).norm());
            }
        }
        worst
    }
}

/// Assemble H_Q = −2AΘ₀ + ε√(2/3)(Θ₂ + Θ₋₂) over the given F manifold.
/// Basis ordered by (F, m) ascending.
pub fn hq_matrix(level: &LevelSpec, trap: &TrapConfig, manifold: &[HalfInt]) -> Result<QuadCouplingMatrix> {
    if manifold.is_empty() {
        return Err(Error::invalid("hyperfine manifold is empty"));
    }
    for &f in manifold {
        level.check_f(f)?;
    }
    let mut fs = manifold.to_vec();
    fs.sort();
    fs.dedup();
    let basis: Vec<HyperfineState> = fs
        .iter()
        .flat_map(|&f| f.projections().map(move |m| HyperfineState { f, m }))
        .collect();
    let n = basis.len();
    let scale = CODATA_2018.quadrupole_unit() / CODATA_2018.hbar;
    let mut amplitude = DMatrix::from_element(n, n, Complex64::from(0.0));
    for (r, &bra) in basis.iter().enumerate() {
        for (c, &ket) in basis.iter().enumerate() {
            let dm = (bra.m - ket.m).twice() / 2;
            if dm.abs() > 2 {
                continue;
            }
            let reduced = reduced_element(level, bra, ket)?;
            if reduced == 0.0 {
                continue;
            }
            let w = orientation_amplitude(trap.a, trap.epsilon, dm, trap.orientation);
            amplitude[(r, c)] = w * reduced * scale;
        }
    }
    Ok(QuadCouplingMatrix { basis, amplitude })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trap::Measured;
    use std::f64::consts::TAU;

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn ba_d52() -> LevelSpec {
        LevelSpec::new("Ba+ D5/2", HalfInt::ZERO, h(5), 3.229)
    }

    fn lu_3d2() -> LevelSpec {
        LevelSpec::new("Lu+ 3D2", HalfInt::int(7), HalfInt::int(2), -1.77)
    }

    #[test]
    fn gradient_component_examples() {
        assert!(gradient_components(0.0, 0.0).iter().all(|g| g.norm() == 0.0));
        let g = gradient_components(1.0, 0.0);
        assert_eq!(g[2].re, -2.0);
        assert!(g.iter().enumerate().all(|(k, x)| k == 2 || x.norm() == 0.0));
        let g = gradient_components(0.0, 1.0);
        assert!((g[0].re - 0.816_496_580_927_726).abs() < 1e-15);
        assert!((g[4].re - 0.816_496_580_927_726).abs() < 1e-15);
        assert_eq!(g[2].re, 0.0);
    }

    #[test]
    fn stretched_state_normalization() {
        let level = ba_d52();
        let s = HyperfineState::new(h(5), h(5)).unwrap();
        let v = theta_matrix_element(&level, s, s, 0, EulerAngles::IDENTITY).unwrap();
        assert!((v.re - 3.229).abs() < 1e-14 && v.im.abs() < 1e-15);
        assert!((c2_coefficient(&level, h(5), h(5)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ba_delta_m_two_ratio() {
        let level = LevelSpec::new("I=0 J=5/2", HalfInt::ZERO, h(5), 1.0);
        let mid = HyperfineState::new(h(5), h(1)).unwrap();
        let top = HyperfineState::new(h(5), h(5)).unwrap();
        let bottom = HyperfineState::new(h(5), h(-3)).unwrap();
        let up = theta_matrix_element(&level, top, mid, 2, EulerAngles::IDENTITY).unwrap();
        let down = theta_matrix_element(&level, bottom, mid, -2, EulerAngles::IDENTITY).unwrap();
        // the m = -3/2 partner carries the larger element
        assert!((down.norm() / up.norm() - 3.0 / 5f64.sqrt()).abs() < 1e-13, "{up} {down}");
        assert!((up.norm() - (3.0f64 / 5.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn lutetium_delta_m_one_factor() {
        let level = LevelSpec::new("Lu+ 3D2", HalfInt::int(7), HalfInt::int(2), 1.0);
        let zero = HyperfineState::new(HalfInt::int(5), HalfInt::ZERO).unwrap();
        for m in [1, -1] {
            let s = HyperfineState::new(HalfInt::int(5), HalfInt::int(m)).unwrap();
            let r = reduced_element(&level, s, zero).unwrap();
            assert!((r.abs() - 5f64.sqrt() / 26.0).abs() < 1e-14, "{r}");
        }
    }

    #[test]
    fn c2_trace_free() {
        let level = lu_3d2();
        for f in level.allowed_f() {
            let s: f64 = f.projections().map(|m| c2_coefficient(&level, f, m).unwrap()).sum();
            assert!(s.abs() < 1e-13, "F={f}: {s}");
        }
    }

    #[test]
    fn invalid_f_rejected() {
        let level = ba_d52();
        let bad = HyperfineState { f: h(3), m: h(1) };
        let ok = HyperfineState::new(h(5), h(1)).unwrap();
        assert!(theta_matrix_element(&level, bad, ok, 0, EulerAngles::IDENTITY).is_err());
        assert!(hq_matrix(&level, &trap(0.3, 0.2), &[]).is_err());
        assert!(HyperfineState::new(h(3), h(5)).is_err());
    }

    #[test]
    fn j_half_has_no_quadrupole() {
        let level = LevelSpec::new("S1/2", HalfInt::ZERO, h(1), 1.0);
        assert!(level.validate().is_err());
        let s = HyperfineState::new(h(1), h(1)).unwrap();
        assert!(theta_matrix_element(&level, s, s, 0, EulerAngles::IDENTITY).is_err());
    }

    fn trap(alpha: f64, beta: f64) -> TrapConfig {
        TrapConfig::ideal_linear(
            175.94 * CODATA_2018.atomic_mass_unit,
            TAU * 33e6,
            Measured::exact(TAU * 1e6),
            EulerAngles::new(alpha, beta),
        )
        .unwrap()
    }

    #[test]
    fn zero_fields_give_zero_matrix() {
        let t = TrapConfig::raw(1e-25, 1e8, 0.0, 0.0, EulerAngles::new(0.3, 0.4)).unwrap();
        let m = hq_matrix(&lu_3d2(), &t, &lu_3d2().allowed_f()).unwrap();
        assert!(m.amplitude.iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn beta_zero_selection_rule() {
        let level = ba_d52();
        let m = hq_matrix(&level, &trap(0.4, 0.0), &[h(5)]).unwrap();
        for (r, bra) in m.basis.iter().enumerate() {
            for (c, ket) in m.basis.iter().enumerate() {
                let dm = (bra.m - ket.m).twice() / 2;
                if dm.abs() != 2 {
                    assert_eq!(m.amplitude[(r, c)].norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn basis_is_sorted() {
        let level = lu_3d2();
        let m = hq_matrix(&level, &trap(0.1, 0.2), &[HalfInt::int(9), HalfInt::int(5)]).unwrap();
        assert!(m.basis.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(m.dim(), 11 + 19);
    }

    #[test]
    fn hyperfine_constants_interval_rule() {
        let level = LevelSpec::new("x", HalfInt::int(7), HalfInt::int(1), 1.0).with_hyperfine_constants(1000.0, 0.0);
        let e = &level.hyperfine_energies;
        // Landé interval rule: E(F) − E(F−1) = A·F
        assert!((e[&HalfInt::int(8)] - e[&HalfInt::int(7)] - 8000.0).abs() < 1e-9);
        assert!((e[&HalfInt::int(7)] - e[&HalfInt::int(6)] - 7000.0).abs() < 1e-9);
    }
}
