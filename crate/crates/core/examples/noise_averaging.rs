//! Quasi-static magnetic noise blurs the doublet; Gauss–Hermite averaging
//! over the field offset.
//!
//! Run: cargo run --release --example noise_averaging

use std::f64::consts::TAU;

use rfquad::dynamics::symmetric_grid;
use rfquad::inference::SpectrumModel;

fn main() {
    let wq = TAU * 1.7e3;
    let grid = symmetric_grid(2.0 * wq, 9);
    let mut model = SpectrumModel::pi_pulse(1.2e-3);
    model.quadrature_order = 128;
    print!("{:>8}", "δ/ω_Q");
    for sigma in [0.0, 10.0, 18.0, 50.0] {
        print!("{:>10}", format!("{sigma} nT"));
    }
    println!();
    let rows: Vec<Vec<f64>> =
        [0.0, 10.0, 18.0, 50.0].iter().map(|&s| model.evaluate(wq, s * 1e-9, &grid).unwrap()).collect();
    for (i, d) in grid.iter().enumerate() {
        print!("{:>8.2}", d / wq);
        for r in &rows {
            print!("{:>10.4}", r[i]);
        }
        println!();
    }
}
