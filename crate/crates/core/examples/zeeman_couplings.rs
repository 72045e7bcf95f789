//! Resonant and off-resonant Zeeman couplings driven by the oscillating
//! quadrupole field in Lu+ 3D2, F = 5.
//!
//! Run: cargo run --example zeeman_couplings

use std::f64::consts::TAU;

use rfquad::angular::{EulerAngles, HalfInt};
use rfquad::config::{RunConfig, SpeciesFile};
use rfquad::coupling::HyperfineState;
use rfquad::effects::{offresonant_zeeman_shift, orientation_factors, resonant_coupling, ZeemanConfig};

fn main() {
    let species = SpeciesFile::parse(include_str!("../data/lu176.toml")).unwrap();
    let level = species.level("3D2").unwrap();
    let base = RunConfig::parse(include_str!("../data/lu_trap.toml")).unwrap().trap().unwrap();
    let f = HalfInt::int(5);
    let state = |m| HyperfineState::new(f, HalfInt::int(m)).unwrap();

    // |Δm| = 1 orientation factor is 1 here
    let angles = EulerAngles::from_degrees(45.0, 90.0);
    let trap = base.with_orientation(angles);
    let w = resonant_coupling(&level, state(1), state(0), &trap).unwrap().norm();
    println!("|Ω_Q| for |5,0> -> |5,1>: 2π × {:.2} Hz (f1 = {:.3})", w / TAU, orientation_factors(angles)[1]);

    let trap = base.with_orientation(EulerAngles::from_degrees(20.0, 60.0));
    let zeeman = ZeemanConfig::from_splitting(1.0, TAU * 100e3).unwrap();
    println!("\noff-resonant shifts at ω_z = 2π × 100 kHz:");
    for m in f.projections() {
        let s = offresonant_zeeman_shift(&level, f, m, &trap, &zeeman, None).unwrap();
        println!("  m = {:>2}: {:+.3e} Hz", m.to_string(), s / TAU);
    }
}
