//! Pseudopotential gradient of a linear Paul trap from its secular
//! frequencies, and the resulting coupling scale εΘ/ħ.
//!
//! Run: cargo run --example trap_model

use std::f64::consts::TAU;

use rfquad::angular::EulerAngles;
use rfquad::trap::{epsilon_from_secular, secular_consistency, Measured, TrapConfig, CODATA_2018};

fn main() {
    let u = CODATA_2018.atomic_mass_unit;

    // Ba+ trap with measured x, y, z frequencies
    let c = secular_consistency(TAU * 990e3, TAU * 895e3, TAU * 112e3);
    println!(
        "Ba+: radial {:.1} ± {:.1} kHz, wz - (wx - wy) = {:.1} kHz",
        c.secular.value / TAU / 1e3,
        c.secular.uncertainty / TAU / 1e3,
        c.asymmetry / TAU / 1e3
    );
    let ba = TrapConfig::ideal_linear(137.905 * u, TAU * 20.585e6, c.secular, EulerAngles::IDENTITY).unwrap();
    println!("     ε = {:.4e} V/m², εΘ/ħ = 2π × {:.1} Hz for Θ = 3.229", ba.epsilon, ba.coupling_scale(3.229) / TAU);

    let eps = epsilon_from_secular(175.94 * u, TAU * 33e6, TAU * 1e6).unwrap();
    let lu = TrapConfig::ideal_linear(175.94 * u, TAU * 33e6, Measured::exact(TAU * 1e6), EulerAngles::IDENTITY).unwrap();
    println!("Lu+: ε = {eps:.4e} V/m², εΘ/ħ = 2π × {:.1} Hz for Θ = 1.77", lu.coupling_scale(1.77) / TAU);
}
