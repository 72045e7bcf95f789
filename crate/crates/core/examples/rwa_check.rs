//! Four-level rotating-frame model against direct propagation of the full
//! time-dependent D5/2 + S1/2 Hamiltonian.
//!
//! Run: cargo run --release --example rwa_check

use std::f64::consts::TAU;

use rfquad::dynamics::{build_rwa_hamiltonian, floquet_oracle, propagate, FloquetParams, RwaSystem, SLOT_S};

fn main() {
    let wq = TAU * 1.7e3;
    for (big, small) in [(0.0, 0.0), (0.0, 0.5), (0.5, -0.3)] {
        let sys = RwaSystem::new(wq, 0.05 * wq, big * wq, small * wq);
        let tau = sys.pi_time();
        let rwa = propagate(&build_rwa_hamiltonian(&sys), tau, SLOT_S).unwrap();
        let mut p = FloquetParams::from_rwa(&sys, TAU * 20.585e6);
        p.all_states = true;
        let full = floquet_oracle(&p, tau).unwrap();
        let gap = (0..4).map(|k| (rwa[k] - full.populations[k]).abs()).fold(0.0, f64::max);
        println!(
            "Δ = {big:+.1} ω_Q, δ = {small:+.1} ω_Q: max gap {gap:.2e}, leakage {:.1e}, {} steps/period",
            full.leakage, full.steps_per_period
        );
    }
}
