//! Dressed-state spectra of the probed S-D transition: two lines on
//! resonance, three when the rf is detuned.
//!
//! Run: cargo run --example autler_townes

use std::f64::consts::TAU;

use rfquad::dynamics::{default_grid, find_peaks, scan_spectrum, RwaSystem};

fn main() {
    let wq = TAU * 1.7e3;
    for ratio in [0.0, 0.5] {
        let sys = RwaSystem::new(wq, 0.05 * wq, ratio * wq, 0.0);
        let scan = scan_spectrum(&sys, &default_grid(wq), sys.pi_time()).unwrap();
        let peaks = find_peaks(&scan, 0.2);
        println!("Δ = {ratio} ω_Q:");
        for p in peaks {
            println!("  δ = {:+.4} ω_Q  height {:.3}", p.position / wq, p.height);
        }
    }
    println!("expected ±√7/5 = ±{:.4} at Δ = 0", 7f64.sqrt() / 5.0);
}
