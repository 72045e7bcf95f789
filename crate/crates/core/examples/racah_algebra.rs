//! Wigner 3j and 6j symbols and the rank-2 rotation matrix.
//!
//! Run: cargo run --example racah_algebra

use rfquad::angular::{wigner_3j, wigner_6j, wigner_d2, EulerAngles, HalfInt};

fn main() {
    let h = HalfInt::from_twice;
    let three_j = wigner_3j(h(5), h(4), h(5), h(-5), h(0), h(5)).unwrap();
    println!("(5/2 2 5/2; -5/2 0 5/2) = {three_j:.15}");
    let six_j = wigner_6j(h(10), h(10), h(4), h(4), h(4), h(14)).unwrap();
    println!("{{5 5 2; 2 2 7}}         = {six_j:.15}");

    let angles = EulerAngles::from_degrees(30.0, 54.7356);
    println!("\nD(2) at α=30°, β=54.74°:");
    for mp in -2..=2 {
        let row: Vec<String> = (-2..=2)
            .map(|m| {
                let d = wigner_d2(HalfInt::int(mp), HalfInt::int(m), angles).unwrap();
                format!("{:+.4}{:+.4}i", d.re, d.im)
            })
            .collect();
        println!("  {}", row.join("  "));
    }
}
