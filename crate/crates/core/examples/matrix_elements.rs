//! Quadrupole coupling matrix of the Ba+ D5/2 level in an aligned trap.
//!
//! Run: cargo run --example matrix_elements

use std::f64::consts::TAU;

use rfquad::config::{RunConfig, SpeciesFile};
use rfquad::coupling::hq_matrix;

fn main() {
    let species = SpeciesFile::parse(include_str!("../data/ba138.toml")).unwrap();
    let level = species.level("D5/2").unwrap();
    let trap = RunConfig::parse(include_str!("../data/ba_trap.toml")).unwrap().trap().unwrap();

    let m = hq_matrix(&level, &trap, &level.allowed_f()).unwrap();
    let omega_q = trap.coupling_scale(level.theta);
    println!("ω_Q = 2π × {:.1} Hz; entries in units of ω_Q", omega_q / TAU);
    for (i, bra) in m.basis.iter().enumerate() {
        let row: Vec<String> = (0..m.dim()).map(|j| format!("{:+.4}", m.amplitude[(i, j)].re / omega_q)).collect();
        println!("m = {:>4}  {}", bra.m.to_string(), row.join(" "));
    }
    println!("hermiticity defect {:.1e}", m.hermiticity_defect());
}
