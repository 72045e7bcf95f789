//! rf sideband modulation index of every Lu+ 3D2 state at the worst-case
//! orientation (β = 90°, α = 0).
//!
//! Run: cargo run --example modulation_index

use rfquad::angular::EulerAngles;
use rfquad::config::{RunConfig, SpeciesFile};
use rfquad::effects::sideband_index;

fn main() {
    let species = SpeciesFile::parse(include_str!("../data/lu176.toml")).unwrap();
    let level = species.level("3D2").unwrap();
    let trap = RunConfig::parse(include_str!("../data/lu_trap.toml"))
        .unwrap()
        .trap()
        .unwrap()
        .with_orientation(EulerAngles::from_degrees(0.0, 90.0));

    for f in level.allowed_f() {
        let worst = f
            .projections()
            .map(|m| sideband_index(&level, f, m, &trap).unwrap().abs())
            .fold(0.0, f64::max);
        println!("F = {f}: max |β_Q| = {worst:.3e}");
    }
}
