//! Hyperfine-averaged clock shifts of the three Lu+ transitions, their
//! (a, η) orientation weights, and the shift along the magic cone.
//!
//! Run: cargo run --example clock_shift

use rfquad::angular::EulerAngles;
use rfquad::config::{RunConfig, SpeciesFile};
use rfquad::effects::{averaged_clock_shift, shift_decomposition, Averaging};

fn main() {
    let species = SpeciesFile::parse(include_str!("../data/lu176.toml")).unwrap();
    let trap = RunConfig::parse(include_str!("../data/lu_trap.toml")).unwrap().trap().unwrap();

    println!("{:<5} {:>12} {:>9}", "level", "a", "η");
    for label in ["3D1", "3D2", "1D2"] {
        let level = species.level(label).unwrap();
        let nu = species.entry(label).unwrap().clock_frequency_hz.unwrap();
        let d = shift_decomposition(&level, &trap, nu, Averaging::Hyperfine).unwrap();
        println!("{label:<5} {:>12.3e} {:>9.4}", d.a, d.eta);
    }

    let level = species.level("3D2").unwrap();
    let nu = species.entry("3D2").unwrap().clock_frequency_hz.unwrap();
    let d = shift_decomposition(&level, &trap, nu, Averaging::Hyperfine).unwrap();
    let beta = (1.0 / 3f64.sqrt()).acos();
    println!("\n3D2 along β = {:.2}°:", beta.to_degrees());
    for alpha_deg in [0.0f64, 22.5, 45.0, 67.5, 90.0] {
        let angles = EulerAngles::new(alpha_deg.to_radians(), beta);
        let full = averaged_clock_shift(&level, &trap.with_orientation(angles)).unwrap();
        println!(
            "  α = {alpha_deg:>4}°: δν/ν = {:+.3e} (direct sum {:+.3e})",
            d.at(angles).fractional_shift(),
            full.total / nu
        );
    }
}
