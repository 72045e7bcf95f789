//! Species and run configuration files (TOML, versioned).

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::angular::{EulerAngles, HalfInt};
use crate::coupling::LevelSpec;
use crate::error::{Error, Result};
use crate::inference::{FitOptions, SpectrumModel, DEFAULT_G_D, DEFAULT_G_S};
use crate::trap::{secular_consistency, Measured, TrapConfig, CODATA_2018};

pub const SCHEMA_VERSION: u32 = 1;

fn check_version(v: u32, what: &str) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::Config(format!("{what}: schema_version {v} is not supported (expected {SCHEMA_VERSION})")));
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesDefaults {
    #[serde(default)]
    pub g_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelEntry {
    pub label: String,
    pub j_twice: i32,
    pub theta_e_a02: f64,
    #[serde(default)]
    pub g_j: Option<f64>,
    /// Per-F g-factors keyed by F ("5", "11/2", ...).
    #[serde(default)]
    pub g_f: BTreeMap<String, f64>,
    #[serde(default)]
    pub clock_frequency_hz: Option<f64>,
    /// Hyperfine level energies E_F/h keyed by F.
    #[serde(default)]
    pub hyperfine_energies_hz: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesFile {
    pub schema_version: u32,
    pub name: String,
    pub nuclear_spin_twice: i32,
    pub mass_u: f64,
    #[serde(default)]
    pub defaults: SpeciesDefaults,
    pub levels: Vec<LevelEntry>,
}

fn keyed(map: &BTreeMap<String, f64>, field: &str) -> Result<BTreeMap<HalfInt, f64>> {
    map.iter()
        .map(|(k, v)| {
            let f = HalfInt::parse(k).map_err(|_| Error::Config(format!("{field}: key {k:?} is not an angular momentum")))?;
            Ok((f, *v))
        })
        .collect()
}

impl SpeciesFile {
    pub fn parse(text: &str) -> Result<Self> {
        let s: SpeciesFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        check_version(s.schema_version, "species file")?;
        if s.nuclear_spin_twice < 0 {
            return Err(Error::Config("nuclear_spin_twice must be non-negative".into()));
        }
        if !(s.mass_u > 0.0) {
            return Err(Error::Config("mass_u must be positive".into()));
        }
        for l in &s.levels {
            s.build(l)?.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read(path.as_ref())?)
    }

    fn build(&self, l: &LevelEntry) -> Result<LevelSpec> {
        let mut spec = LevelSpec::new(
            l.label.clone(),
            HalfInt::from_twice(self.nuclear_spin_twice),
            HalfInt::from_twice(l.j_twice),
            l.theta_e_a02,
        );
        spec.g_j = l.g_j;
        spec.g_f = keyed(&l.g_f, "g_f")?;
        spec.hyperfine_energies = keyed(&l.hyperfine_energies_hz, "hyperfine_energies_hz")?;
        Ok(spec)
    }

    pub fn entry(&self, label: &str) -> Result<&LevelEntry> {
        self.levels.iter().find(|l| l.label == label).ok_or_else(|| {
            let known: Vec<&str> = self.levels.iter().map(|l| l.label.as_str()).collect();
            Error::Config(format!("{}: no level {label:?} (known: {})", self.name, known.join(", ")))
        })
    }

    pub fn level(&self, label: &str) -> Result<LevelSpec> {
        self.build(self.entry(label)?)
    }

    pub fn mass(&self) -> f64 {
        self.mass_u * CODATA_2018.atomic_mass_unit
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapBlock {
    pub drive_hz: f64,
    pub mass_u: f64,
    #[serde(default)]
    pub alpha_deg: f64,
    #[serde(default)]
    pub beta_deg: f64,
    /// Radial secular frequency of an ideal linear trap.
    #[serde(default)]
    pub secular_hz: Option<f64>,
    #[serde(default)]
    pub secular_uncertainty_hz: Option<f64>,
    /// Measured (x, y, z) secular frequencies.
    #[serde(default)]
    pub secular_xyz_hz: Option<[f64; 3]>,
    #[serde(default)]
    pub a_v_per_m2: Option<f64>,
    #[serde(default)]
    pub epsilon_v_per_m2: Option<f64>,
}

impl TrapBlock {
    pub fn build(&self) -> Result<TrapConfig> {
        let angles = EulerAngles::from_degrees(self.alpha_deg, self.beta_deg);
        let mass = self.mass_u * CODATA_2018.atomic_mass_unit;
        let drive = TAU * self.drive_hz;
        let explicit = self.a_v_per_m2.is_some() || self.epsilon_v_per_m2.is_some();
        let secular = match (self.secular_hz, self.secular_xyz_hz) {
            (Some(_), Some(_)) => {
                return Err(Error::Config("trap: give secular_hz or secular_xyz_hz, not both".into()));
            }
            (Some(f), None) => Some(Measured::new(TAU * f, TAU * self.secular_uncertainty_hz.unwrap_or(0.0))),
            (None, Some([x, y, z])) => {
                if self.secular_uncertainty_hz.is_some() {
                    return Err(Error::Config("trap: secular_uncertainty_hz only applies to secular_hz".into()));
                }
                Some(secular_consistency(TAU * x, TAU * y, TAU * z).secular)
            }
            (None, None) => None,
        };
        let cfg = match (secular, explicit) {
            (Some(s), false) => TrapConfig::ideal_linear(mass, drive, s, angles),
            (None, true) => TrapConfig::raw(
                mass,
                drive,
                self.a_v_per_m2.unwrap_or(0.0),
                self.epsilon_v_per_m2.unwrap_or(0.0),
                angles,
            ),
            _ => {
                return Err(Error::Config(
                    "trap: exactly one of {secular frequencies, explicit A and epsilon} must be present".into(),
                ))
            }
        };
        cfg.map_err(|e| Error::Config(format!("trap: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanBlock {
    pub omega_q_hz: f64,
    #[serde(default = "default_omega0_ratio")]
    pub omega0_ratio: f64,
    #[serde(default)]
    pub big_delta_ratio: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_span")]
    pub span_ratio: f64,
}

fn default_omega0_ratio() -> f64 {
    0.05
}
fn default_points() -> usize {
    801
}
fn default_span() -> f64 {
    2.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitBlock {
    #[serde(default)]
    pub seed: u64,
    pub tau_s: f64,
    #[serde(default)]
    pub omega0_hz: Option<f64>,
    #[serde(default = "default_g_d")]
    pub g_d: f64,
    #[serde(default = "default_g_s")]
    pub g_s: f64,
    #[serde(default = "default_true")]
    pub with_k_delta: bool,
    #[serde(default = "default_order")]
    pub quadrature_order: usize,
    #[serde(default)]
    pub omega_q_range_hz: Option<[f64; 2]>,
    #[serde(default)]
    pub sigma_range_nt: Option<[f64; 2]>,
}

fn default_g_d() -> f64 {
    DEFAULT_G_D
}
fn default_g_s() -> f64 {
    DEFAULT_G_S
}
fn default_true() -> bool {
    true
}
fn default_order() -> usize {
    32
}

impl FitBlock {
    pub fn model(&self) -> Result<SpectrumModel> {
        if !(self.tau_s > 0.0) {
            return Err(Error::Config("fit: tau_s must be positive".into()));
        }
        let mut m = SpectrumModel::pi_pulse(self.tau_s);
        if let Some(w) = self.omega0_hz {
            m.omega0 = TAU * w;
        }
        m.g_d = self.g_d;
        m.g_s = self.g_s;
        m.with_k_delta = self.with_k_delta;
        m.quadrature_order = self.quadrature_order;
        Ok(m)
    }

    pub fn options(&self) -> FitOptions {
        let mut o = FitOptions::default();
        if let Some([a, b]) = self.omega_q_range_hz {
            o.omega_q_hz = (a, b);
        }
        if let Some([a, b]) = self.sigma_range_nt {
            o.sigma_nt = (a, b);
        }
        o
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub trap: Option<TrapBlock>,
    #[serde(default)]
    pub scan: Option<ScanBlock>,
    #[serde(default)]
    pub fit: Option<FitBlock>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let c: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        check_version(c.schema_version, "run config")?;
        if let Some(t) = &c.trap {
            t.build()?;
        }
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read(path.as_ref())?)
    }

    pub fn trap(&self) -> Result<TrapConfig> {
        self.trap.as_ref().ok_or_else(|| Error::Config("config has no [trap] block".into()))?.build()
    }
}
