//! Fit (ω_Q, σ) to the bundled synthetic counts and to a few fresh seeds.
//!
//! Run: cargo run --release --example fit_spectrum

use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rfquad::cli::read_counts;
use rfquad::config::RunConfig;
use rfquad::dynamics::symmetric_grid;
use rfquad::inference::fit_spectrum;

fn main() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let cfg = RunConfig::load(root.join("data/ba_trap.toml")).unwrap();
    let block = cfg.fit.unwrap();
    let (model, options) = (block.model().unwrap(), block.options());

    let data = read_counts(&root.join("data/ba_synthetic_counts.csv")).unwrap();
    let fit = fit_spectrum(&data, &model, &options).unwrap();
    println!(
        "bundled: ω_Q = 2π × {:.1}({:.1}) Hz, σ = {:.1}({:.1}) nT, χ²_ν = {:.2}",
        fit.omega_q.value / TAU,
        fit.omega_q.uncertainty / TAU,
        fit.sigma_b.value * 1e9,
        fit.sigma_b.uncertainty * 1e9,
        fit.chi2_reduced
    );

    let wq = TAU * 1.7e3;
    let grid = symmetric_grid(2.0 * wq, 40);
    for seed in 10..14 {
        let data = model.synthesize(wq, 18e-9, &grid, 300, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let fit = fit_spectrum(&data, &model, &options).unwrap();
        println!(
            "seed {seed}: ω_Q = 2π × {:.1}({:.1}) Hz, σ = {:.1}({:.1}) nT",
            fit.omega_q.value / TAU,
            fit.omega_q.uncertainty / TAU,
            fit.sigma_b.value * 1e9,
            fit.sigma_b.uncertainty * 1e9
        );
    }
}
