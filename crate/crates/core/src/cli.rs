//! Command-line front end. Every subcommand writes either CSV (one header
//! row, then data) or a single pretty-printed JSON document.

use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angular::{EulerAngles, HalfInt};
use crate::config::{RunConfig, SpeciesFile};
use crate::coupling::{c2_coefficient, hq_element, hq_matrix, HyperfineState, LevelSpec};
use crate::dynamics::{find_peaks, scan_spectrum, symmetric_grid, RwaSystem};
use crate::effects::{
    averaged_clock_shift, clock_shift, offresonant_zeeman_shift, shift_decomposition, sideband_index, Averaging,
    ZeemanConfig,
};
use crate::error::{Error, Result};
use crate::inference::{combine_runs, extract_theta, fit_spectrum, Drift, SpectrumData};
use crate::trap::{Measured, TrapConfig};

#[derive(Debug, Parser)]
#[command(name = "rfquad", version, about = "rf quadrupole couplings and shifts of trapped ions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ⟨F′m′|H_Q|Fm⟩/h for the chosen hyperfine levels.
    MatrixElements(MatrixArgs),
    /// m = 0 clock shift, its (a, η) weights and an optional orientation grid.
    ClockShift(ClockShiftArgs),
    /// Sideband index, off-resonant shift and resonant couplings per m.
    Effects(EffectsArgs),
    /// Four-level transfer spectrum (columns delta_over_omega_q, transfer_probability).
    Spectrum(SpectrumArgs),
    /// Seeded synthetic counts in the `fit` input format.
    Synthesize(SynthesizeArgs),
    /// Fit (ω_Q, σ_B) to a CSV of delta_hz, excited_counts, shots.
    Fit(FitArgs),
    /// Θ from a fitted ω_Q and the trap's secular frequency.
    ExtractTheta(ThetaArgs),
}

#[derive(Debug, Args)]
pub struct LevelArgs {
    /// Species file (TOML).
    #[arg(long)]
    pub species: PathBuf,
    /// Level label in the species file.
    #[arg(long)]
    pub level: String,
}

#[derive(Debug, Args)]
pub struct TrapArgs {
    /// Run configuration holding a [trap] block.
    #[arg(long)]
    pub config: PathBuf,
    /// Override the configured α (degrees).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_deg: Option<f64>,
    /// Override the configured β (degrees).
    #[arg(long, allow_negative_numbers = true)]
    pub beta_deg: Option<f64>,
}

impl TrapArgs {
    fn load(&self) -> Result<TrapConfig> {
        let cfg = RunConfig::load(&self.config)?;
        let mut block = cfg
            .trap
            .ok_or_else(|| Error::Config(format!("{}: no [trap] block", self.config.display())))?;
        if let Some(a) = self.alpha_deg {
            block.alpha_deg = a;
        }
        if let Some(b) = self.beta_deg {
            block.beta_deg = b;
        }
        block.build()
    }
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub level: LevelArgs,
    #[command(flatten)]
    pub trap: TrapArgs,
    /// Hyperfine levels to include (default: all).
    #[arg(long = "f", value_delimiter = ',')]
    pub manifold: Vec<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ClockShiftArgs {
    #[command(flatten)]
    pub level: LevelArgs,
    #[command(flatten)]
    pub trap: TrapArgs,
    /// Single hyperfine level instead of the hyperfine average.
    #[arg(long = "f")]
    pub f: Option<String>,
    /// Transition frequency in Hz (default: the species file value).
    #[arg(long)]
    pub nu_hz: Option<f64>,
    /// Evaluate on an n × n grid of α ∈ [0°, 180°], β ∈ [0°, 90°].
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EffectsArgs {
    #[command(flatten)]
    pub level: LevelArgs,
    #[command(flatten)]
    pub trap: TrapArgs,
    #[arg(long = "f")]
    pub f: String,
    /// Signed Zeeman splitting ω_z/2π between adjacent m (Hz).
    #[arg(long, allow_negative_numbers = true)]
    pub zeeman_hz: Option<f64>,
    /// Resonance guard as a fraction of Ω_rf.
    #[arg(long)]
    pub guard: Option<f64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Optional run configuration; its [scan] block supplies defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// ω_Q/2π in Hz.
    #[arg(long)]
    pub omega_q_hz: Option<f64>,
    /// Δ in units of ω_Q.
    #[arg(long = "Delta", allow_negative_numbers = true)]
    pub big_delta: Option<f64>,
    /// Ω₀ in units of ω_Q.
    #[arg(long = "Omega0-ratio")]
    pub omega0_ratio: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Scan half-width in units of ω_Q.
    #[arg(long)]
    pub span_ratio: Option<f64>,
    /// Probe duration in seconds (default: the π time of Ω₀).
    #[arg(long)]
    pub tau_s: Option<f64>,
    /// Also report the peak positions (JSON only).
    #[arg(long)]
    pub peaks: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    /// Run configuration with a [fit] block.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub omega_q_hz: f64,
    #[arg(long, default_value_t = 0.0)]
    pub sigma_nt: f64,
    #[arg(long, default_value_t = 300)]
    pub shots: u32,
    #[arg(long, default_value_t = 40)]
    pub points: usize,
    /// Scan half-width in units of ω_Q.
    #[arg(long, default_value_t = 2.0)]
    pub span_ratio: f64,
    /// Overrides the [fit] seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with columns delta_hz, excited_counts, shots.
    #[arg(long)]
    pub data: PathBuf,
    /// Run configuration with a [fit] block.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    /// Run configuration whose [trap] block has secular frequencies.
    #[arg(long)]
    pub config: PathBuf,
    /// JSON output of `fit`; repeat to combine several runs.
    #[arg(long = "fit")]
    pub fits: Vec<PathBuf>,
    #[arg(long, conflicts_with = "fits", requires = "omega_q_err_hz")]
    pub omega_q_hz: Option<f64>,
    #[arg(long)]
    pub omega_q_err_hz: Option<f64>,
    /// Drift allowance in Hz added in quadrature when combining runs.
    #[arg(long, default_value_t = 0.0)]
    pub drift_hz: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub bra_f: String,
    pub bra_m: String,
    pub ket_f: String,
    pub ket_m: String,
    pub re_hz: f64,
    pub im_hz: f64,
    pub modulus_hz: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub level: String,
    pub dim: usize,
    pub rows: Vec<MatrixRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftRow {
    pub alpha_deg: f64,
    pub beta_deg: f64,
    pub fractional_shift: f64,
    pub a: f64,
    pub eta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClockShiftReport {
    pub level: String,
    pub averaging: String,
    pub transition_hz: f64,
    pub a: f64,
    pub eta: f64,
    pub a0: f64,
    /// Shift at the configured orientation, Hz.
    pub shift_hz: f64,
    /// |Δm| = 0, 1, 2 parts of `shift_hz`.
    pub shift_by_delta_m_hz: [f64; 3],
    pub rows: Vec<ShiftRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectsRow {
    pub f: String,
    pub m: String,
    pub c2: f64,
    pub sideband_index: f64,
    pub offresonant_shift_hz: Option<f64>,
    /// |⟨m+1|H_Q|m⟩|/h.
    pub coupling_dm1_hz: Option<f64>,
    /// |⟨m+2|H_Q|m⟩|/h.
    pub coupling_dm2_hz: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectsReport {
    pub level: String,
    pub drive_hz: f64,
    pub zeeman_hz: Option<f64>,
    pub rows: Vec<EffectsRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub delta_over_omega_q: f64,
    pub transfer_probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub omega_q_hz: f64,
    pub omega0_ratio: f64,
    pub big_delta_ratio: f64,
    pub tau_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peaks_over_omega_q: Option<Vec<f64>>,
    pub rows: Vec<SpectrumRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountsRow {
    pub delta_hz: f64,
    pub excited_counts: f64,
    pub shots: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountsReport {
    pub seed: u64,
    pub omega_q_hz: f64,
    pub sigma_nt: f64,
    pub rows: Vec<CountsRow>,
}

/// `fit` output in Hz and nT.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub omega_q_hz: f64,
    pub omega_q_err_hz: f64,
    pub sigma_nt: f64,
    pub sigma_err_nt: f64,
    pub chi2_reduced: f64,
    pub n_points: usize,
    pub shots_per_point: u32,
    pub iterations: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaReport {
    pub theta_e_a02: f64,
    pub theta_err_e_a02: f64,
    pub omega_q_hz: f64,
    pub omega_q_err_hz: f64,
    pub secular_hz: f64,
    pub secular_err_hz: f64,
    pub runs: usize,
}

fn config_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Config(format!("{}: {e}", path.display()))
}

fn parse_f(level: &LevelSpec, s: &str) -> Result<HalfInt> {
    let f = HalfInt::parse(s).map_err(|e| Error::Config(format!("F = {s}: {e}")))?;
    if !level.contains_f(f) {
        return Err(Error::Config(format!("{}: F = {f} is not a level of this manifold", level.label)));
    }
    Ok(f)
}

fn load_level(args: &LevelArgs) -> Result<(SpeciesFile, LevelSpec)> {
    let species = SpeciesFile::load(&args.species)?;
    let level = species.level(&args.level)?;
    Ok((species, level))
}

fn write_csv<W: Write, T: Serialize>(out: &mut W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Config(format!("csv output: {e}")))?;
    }
    w.flush().map_err(|e| Error::Config(format!("csv output: {e}")))?;
    Ok(())
}

fn write_json<W: Write, T: Serialize>(out: &mut W, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Config(format!("json output: {e}")))?;
    writeln!(out, "{text}").map_err(|e| Error::Config(format!("output: {e}")))
}

fn emit<W: Write, T: Serialize, R: Serialize>(out: &mut W, format: Format, report: &T, rows: &[R]) -> Result<()> {
    match format {
        Format::Csv => write_csv(out, rows),
        Format::Json => write_json(out, report),
    }
}

pub fn matrix_elements(args: &MatrixArgs) -> Result<MatrixReport> {
    let (_, level) = load_level(&args.level)?;
    let trap = args.trap.load()?;
    let manifold = if args.manifold.is_empty() {
        level.allowed_f()
    } else {
        args.manifold.iter().map(|s| parse_f(&level, s)).collect::<Result<_>>()?
    };
    let m = hq_matrix(&level, &trap, &manifold)?;
    let mut rows = Vec::with_capacity(m.dim() * m.dim());
    for (i, bra) in m.basis.iter().enumerate() {
        for (j, ket) in m.basis.iter().enumerate() {
            let z = m.amplitude[(i, j)] / TAU;
            rows.push(MatrixRow {
                bra_f: bra.f.to_string(),
                bra_m: bra.m.to_string(),
                ket_f: ket.f.to_string(),
                ket_m: ket.m.to_string(),
                re_hz: z.re,
                im_hz: z.im,
                modulus_hz: z.norm(),
            });
        }
    }
    Ok(MatrixReport { level: level.label.clone(), dim: m.dim(), rows })
}

pub fn clock_shift_report(args: &ClockShiftArgs) -> Result<ClockShiftReport> {
    let (species, level) = load_level(&args.level)?;
    let trap = args.trap.load()?;
    let nu = match args.nu_hz {
        Some(nu) => nu,
        None => species.entry(&args.level.level)?.clock_frequency_hz.ok_or_else(|| {
            Error::Config(format!("{}: clock_frequency_hz is missing; pass --nu-hz", level.label))
        })?,
    };
    let (averaging, shift) = match &args.f {
        Some(s) => {
            let f = parse_f(&level, s)?;
            (Averaging::Single(f), clock_shift(&level, f, &trap)?)
        }
        None => (Averaging::Hyperfine, averaged_clock_shift(&level, &trap)?),
    };
    let d = shift_decomposition(&level, &trap, nu, averaging)?;
    let row = |alpha: f64, beta: f64| ShiftRow {
        alpha_deg: alpha,
        beta_deg: beta,
        fractional_shift: d.at(EulerAngles::from_degrees(alpha, beta)).fractional_shift(),
        a: d.a,
        eta: d.eta,
    };
    let rows = match args.grid {
        Some(n) if n < 2 => return Err(Error::Config("--grid needs at least 2 points per axis".into())),
        Some(n) => {
            let step = |k: usize, top: f64| top * k as f64 / (n - 1) as f64;
            (0..n).flat_map(|i| (0..n).map(move |j| (step(i, 180.0), step(j, 90.0)))).map(|(a, b)| row(a, b)).collect()
        }
        None => vec![row(trap.orientation.alpha.to_degrees(), trap.orientation.beta.to_degrees())],
    };
    Ok(ClockShiftReport {
        level: level.label.clone(),
        averaging: match averaging {
            Averaging::Hyperfine => "hyperfine".into(),
            Averaging::Single(f) => format!("F={f}"),
        },
        transition_hz: nu,
        a: d.a,
        eta: d.eta,
        a0: d.a0,
        shift_hz: shift.total,
        shift_by_delta_m_hz: shift.by_delta_m,
        rows,
    })
}

pub fn effects_report(args: &EffectsArgs) -> Result<EffectsReport> {
    let (_, level) = load_level(&args.level)?;
    let trap = args.trap.load()?;
    let f = parse_f(&level, &args.f)?;
    let zeeman = args.zeeman_hz.map(|z| ZeemanConfig::from_splitting(1.0, TAU * z)).transpose()?;
    let coupling = |m: HalfInt, dm: i32| -> Result<Option<f64>> {
        let target = m + HalfInt::int(dm);
        if target.twice().abs() > f.twice() {
            return Ok(None);
        }
        let z = hq_element(&level, &trap, HyperfineState::new(f, target)?, HyperfineState::new(f, m)?)?;
        Ok(Some(z.norm() / TAU))
    };
    let mut rows = Vec::new();
    for m in f.projections() {
        let shift = match &zeeman {
            Some(z) => Some(offresonant_zeeman_shift(&level, f, m, &trap, z, args.guard)? / TAU),
            None => None,
        };
        rows.push(EffectsRow {
            f: f.to_string(),
            m: m.to_string(),
            c2: c2_coefficient(&level, f, m)?,
            sideband_index: sideband_index(&level, f, m, &trap)?,
            offresonant_shift_hz: shift,
            coupling_dm1_hz: coupling(m, 1)?,
            coupling_dm2_hz: coupling(m, 2)?,
        });
    }
    Ok(EffectsReport { level: level.label.clone(), drive_hz: trap.drive / TAU, zeeman_hz: args.zeeman_hz, rows })
}

pub fn spectrum_report(args: &SpectrumArgs) -> Result<SpectrumReport> {
    let scan = match &args.config {
        Some(p) => RunConfig::load(p)?.scan,
        None => None,
    };
    let omega_q_hz = args.omega_q_hz.or(scan.as_ref().map(|s| s.omega_q_hz)).unwrap_or(1700.0);
    let omega0_ratio = args.omega0_ratio.or(scan.as_ref().map(|s| s.omega0_ratio)).unwrap_or(0.05);
    let big_delta_ratio = args.big_delta.or(scan.as_ref().map(|s| s.big_delta_ratio)).unwrap_or(0.0);
    let points = args.points.or(scan.as_ref().map(|s| s.points)).unwrap_or(801);
    let span = args.span_ratio.or(scan.as_ref().map(|s| s.span_ratio)).unwrap_or(2.0);
    if !(omega_q_hz > 0.0) || !(omega0_ratio > 0.0) || !(span > 0.0) || !big_delta_ratio.is_finite() {
        return Err(Error::Config("spectrum: ω_Q, Ω₀ and span must be positive and Δ finite".into()));
    }
    let wq = TAU * omega_q_hz;
    let sys = RwaSystem::new(wq, omega0_ratio * wq, big_delta_ratio * wq, 0.0);
    let tau = args.tau_s.unwrap_or(PI / sys.omega0);
    let scan = scan_spectrum(&sys, &symmetric_grid(span * wq, points), tau)?;
    let peaks = args.peaks.then(|| find_peaks(&scan, 0.2).iter().map(|p| p.position / wq).collect());
    let rows = scan
        .detuning
        .iter()
        .zip(&scan.transfer)
        .map(|(&d, &p)| SpectrumRow { delta_over_omega_q: d / wq, transfer_probability: p })
        .collect();
    Ok(SpectrumReport { omega_q_hz, omega0_ratio, big_delta_ratio, tau_s: tau, peaks_over_omega_q: peaks, rows })
}

pub fn synthesize_report(args: &SynthesizeArgs) -> Result<CountsReport> {
    let cfg = RunConfig::load(&args.config)?;
    let fit = cfg.fit.ok_or_else(|| config_err(&args.config, "no [fit] block"))?;
    let model = fit.model()?;
    let seed = args.seed.unwrap_or(fit.seed);
    let wq = TAU * args.omega_q_hz;
    let grid = symmetric_grid(args.span_ratio * wq, args.points);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = model.synthesize(wq, args.sigma_nt * 1e-9, &grid, args.shots, &mut rng)?;
    let rows = (0..data.detuning.len())
        .map(|i| CountsRow { delta_hz: data.detuning[i] / TAU, excited_counts: data.excited[i], shots: data.shots[i] })
        .collect();
    Ok(CountsReport { seed, omega_q_hz: args.omega_q_hz, sigma_nt: args.sigma_nt, rows })
}

/// Reads the `fit` input CSV (columns delta_hz, excited_counts, shots).
pub fn read_counts(path: &Path) -> Result<SpectrumData> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| config_err(path, e))?;
    let mut data = SpectrumData { detuning: Vec::new(), excited: Vec::new(), shots: Vec::new() };
    for row in r.deserialize::<CountsRow>() {
        let row = row.map_err(|e| config_err(path, e))?;
        data.detuning.push(TAU * row.delta_hz);
        data.excited.push(row.excited_counts);
        data.shots.push(row.shots);
    }
    data.validate().map_err(|e| config_err(path, e))?;
    Ok(data)
}

pub fn fit_report(args: &FitArgs) -> Result<FitReport> {
    let cfg = RunConfig::load(&args.config)?;
    let block = cfg.fit.ok_or_else(|| config_err(&args.config, "no [fit] block"))?;
    let data = read_counts(&args.data)?;
    let r = fit_spectrum(&data, &block.model()?, &block.options())?;
    Ok(FitReport {
        omega_q_hz: r.omega_q.value / TAU,
        omega_q_err_hz: r.omega_q.uncertainty / TAU,
        sigma_nt: r.sigma_b.value * 1e9,
        sigma_err_nt: r.sigma_b.uncertainty * 1e9,
        chi2_reduced: r.chi2_reduced,
        n_points: r.n_points,
        shots_per_point: r.shots_per_point,
        iterations: r.iterations,
    })
}

pub fn theta_report(args: &ThetaArgs) -> Result<ThetaReport> {
    let trap = RunConfig::load(&args.config)?.trap()?;
    let runs: Vec<Measured> = match (args.omega_q_hz, args.omega_q_err_hz) {
        (Some(w), Some(e)) => vec![Measured::new(w, e)],
        _ if !args.fits.is_empty() => args
            .fits
            .iter()
            .map(|p| {
                let text = std::fs::read_to_string(p).map_err(|e| config_err(p, e))?;
                let fit: FitReport = serde_json::from_str(&text).map_err(|e| config_err(p, e))?;
                Ok(Measured::new(fit.omega_q_hz, fit.omega_q_err_hz))
            })
            .collect::<Result<_>>()?,
        _ => return Err(Error::Config("give --fit files or --omega-q-hz with --omega-q-err-hz".into())),
    };
    if !(args.drift_hz >= 0.0) {
        return Err(Error::Config("--drift-hz must be non-negative".into()));
    }
    let omega_q = combine_runs(&runs, Drift::Absolute(args.drift_hz))?;
    let est = extract_theta(Measured::new(TAU * omega_q.value, TAU * omega_q.uncertainty), &trap)?;
    let secular = trap.secular.ok_or_else(|| Error::Config("trap has no secular frequency".into()))?;
    Ok(ThetaReport {
        theta_e_a02: est.theta.value,
        theta_err_e_a02: est.theta.uncertainty,
        omega_q_hz: omega_q.value,
        omega_q_err_hz: omega_q.uncertainty,
        secular_hz: secular.value / TAU,
        secular_err_hz: secular.uncertainty / TAU,
        runs: runs.len(),
    })
}

/// Runs one parsed command, writing its output to `out`.
pub fn execute<W: Write>(cli: &Cli, out: &mut W) -> Result<()> {
    match &cli.command {
        Command::MatrixElements(a) => {
            let r = matrix_elements(a)?;
            emit(out, a.format, &r, &r.rows)
        }
        Command::ClockShift(a) => {
            let r = clock_shift_report(a)?;
            emit(out, a.format, &r, &r.rows)
        }
        Command::Effects(a) => {
            let r = effects_report(a)?;
            emit(out, a.format, &r, &r.rows)
        }
        Command::Spectrum(a) => {
            let r = spectrum_report(a)?;
            emit(out, a.format, &r, &r.rows)
        }
        Command::Synthesize(a) => {
            let r = synthesize_report(a)?;
            emit(out, a.format, &r, &r.rows)
        }
        Command::Fit(a) => {
            let r = fit_report(a)?;
            emit(out, a.format, &r, std::slice::from_ref(&r))
        }
        Command::ExtractTheta(a) => {
            let r = theta_report(a)?;
            emit(out, a.format, &r, std::slice::from_ref(&r))
        }
    }
}
