//! Combine three ω_Q runs with a drift allowance and convert to the D5/2
//! quadrupole moment.
//!
//! Run: cargo run --example extract_theta

use std::f64::consts::TAU;

use rfquad::angular::EulerAngles;
use rfquad::inference::{combine_runs, extract_theta, Drift};
use rfquad::trap::{Measured, TrapConfig, CODATA_2018};

fn main() {
    let runs = [Measured::new(1708.0, 24.0), Measured::new(1662.0, 19.0), Measured::new(1713.0, 16.0)];
    let wq = combine_runs(&runs, Drift::Absolute(24.0)).unwrap();
    println!("ω_Q = 2π × {:.1} ± {:.1} Hz", wq.value, wq.uncertainty);

    let trap = TrapConfig::ideal_linear(
        137.905 * CODATA_2018.atomic_mass_unit,
        TAU * 20.585e6,
        Measured::new(TAU * 943e3, TAU * 17e3),
        EulerAngles::IDENTITY,
    )
    .unwrap();
    let quoted = extract_theta(Measured::new(TAU * 1694.0, TAU * 35.0), &trap).unwrap().theta;
    println!("Θ = {:.3} ± {:.3} e·a0²", quoted.value, quoted.uncertainty);
}
