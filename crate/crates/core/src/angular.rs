//! Angular-momentum algebra: Wigner 3j and 6j symbols and rank-2 rotation
//! matrices.
//!
//! Quantum numbers are stored as doubled integers ([`HalfInt`]) so that
//! half-integer values compare exactly. The 3j and 6j routines evaluate the
//! alternating Racah sums in binomial form with exact `i128` accumulation and
//! only take the square root of the (rational) prefactor in floating point.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-negative or signed half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Parses `"5/2"`, `"3"`, `"-1/2"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("cannot parse half-integer from {s:?}"));
        match s.split_once('/') {
            Some((num, "2")) => num.trim().parse::<i32>().map(HalfInt).map_err(|_| bad()),
            Some(_) => Err(bad()),
            None => s.parse::<i32>().map(HalfInt::int).map_err(|_| bad()),
        }
    }

    /// Projections `-j, -j+1, ..., j`.
    pub fn projections(self) -> impl DoubleEndedIterator<Item = HalfInt> + Clone {
        let j = self.0;
        (0..=j.max(-1)).filter(move |_| j >= 0).map(move |k| HalfInt(2 * k - j))
    }

    /// `(-1)^self` for an integer-valued `self`.
    fn phase(self) -> f64 {
        debug_assert!(self.is_integer());
        if (self.0 / 2) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Euler angles of the passive z-y-z rotation taking the principal-axis frame
/// to the laboratory frame. The third angle is fixed to zero because it is a
/// rotation about the magnetic field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
}

impl EulerAngles {
    pub const IDENTITY: EulerAngles = EulerAngles { alpha: 0.0, beta: 0.0 };

    /// Angles in radians, reduced to `[0, 2π)`.
    pub fn new(alpha: f64, beta: f64) -> Self {
        EulerAngles {
            alpha: alpha.rem_euclid(TAU),
            beta: beta.rem_euclid(TAU),
        }
    }

    pub fn from_degrees(alpha: f64, beta: f64) -> Self {
        Self::new(alpha.to_radians(), beta.to_radians())
    }
}

fn check_momentum(j: HalfInt, name: &str) -> Result<()> {
    if j.twice() < 0 {
        return Err(Error::invalid(format!("{name} = {j} is negative")));
    }
    Ok(())
}

fn check_projection(j: HalfInt, m: HalfInt) -> Result<()> {
    if m.twice().abs() > j.twice() {
        return Err(Error::invalid(format!("|m| = |{m}| exceeds j = {j}")));
    }
    if (j.twice() - m.twice()) % 2 != 0 {
        return Err(Error::invalid(format!("m = {m} and j = {j} differ by a half-integer")));
    }
    Ok(())
}

/// Triangle rule on doubled values, including the parity of the perimeter.
pub(crate) fn triangle(a: i32, b: i32, c: i32) -> bool {
    c <= a + b && c >= (a - b).abs() && (a + b + c) % 2 == 0
}

const FACTORIAL_TABLE_LEN: usize = 171;

fn factorial(n: i32) -> f64 {
    use std::sync::OnceLock;
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = vec![1.0_f64; FACTORIAL_TABLE_LEN];
        for k in 1..FACTORIAL_TABLE_LEN {
            t[k] = t[k - 1] * k as f64;
        }
        t
    });
    table[n as usize]
}

fn binomial_f64(n: i32, k: i32) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Exact binomial coefficient, `None` on overflow.
fn binomial_i128(n: i32, k: i32) -> Option<i128> {
    if k < 0 || k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as i128)? / (i + 1) as i128;
    }
    Some(acc)
}

/// Alternating sum of products of binomials. Exact when the terms fit in
/// `i128`; otherwise falls back to floating point.
fn alternating_binomial_sum<F>(kmin: i32, kmax: i32, mut factors: F) -> f64
where
    F: FnMut(i32) -> Vec<(i32, i32)>,
{
    let mut exact: Option<i128> = Some(0);
    let mut approx = 0.0;
    for k in kmin..=kmax {
        let fs = factors(k);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        if let Some(acc) = exact {
            exact = fs
                .iter()
                .try_fold(sign as i128, |p, &(n, r)| p.checked_mul(binomial_i128(n, r)?))
                .and_then(|term| acc.checked_add(term));
        }
        approx += sign as f64 * fs.iter().map(|&(n, r)| binomial_f64(n, r)).product::<f64>();
    }
    match exact {
        Some(v) => v as f64,
        None => approx,
    }
}

/// Wigner 3j symbol `(j1 j2 j3; m1 m2 m3)`.
pub fn wigner_3j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> Result<f64> {
    for (j, m, name) in [(j1, m1, "j1"), (j2, m2, "j2"), (j3, m3, "j3")] {
        check_momentum(j, name)?;
        check_projection(j, m)?;
    }
    let (tj1, tj2, tj3) = (j1.twice(), j2.twice(), j3.twice());
    let (tm1, tm2, tm3) = (m1.twice(), m2.twice(), m3.twice());
    if tm1 + tm2 + tm3 != 0 || !triangle(tj1, tj2, tj3) {
        return Ok(0.0);
    }

    // j1 - j2 + j3, j1 + j2 - j3, -j1 + j2 + j3 and J = j1 + j2 + j3
    let a = (tj1 - tj2 + tj3) / 2;
    let b = (tj1 + tj2 - tj3) / 2;
    let c = (-tj1 + tj2 + tj3) / 2;
    let big_j = (tj1 + tj2 + tj3) / 2;
    let j1_minus_m1 = (tj1 - tm1) / 2;
    let j2_plus_m2 = (tj2 + tm2) / 2;
    let j3_plus_m3 = (tj3 + tm3) / 2;
    let j1_plus_m1 = (tj1 + tm1) / 2;

    let kmin = 0.max(j1_minus_m1 - a).max(j2_plus_m2 - c);
    let kmax = b.min(j1_minus_m1).min(j2_plus_m2);
    if kmin > kmax {
        return Ok(0.0);
    }
    let sum = alternating_binomial_sum(kmin, kmax, |k| {
        vec![(b, k), (a, j1_minus_m1 - k), (c, j2_plus_m2 - k)]
    });
    if sum == 0.0 {
        return Ok(0.0);
    }

    let ratio = binomial_f64(tj1, a) * binomial_f64(tj2, b) * binomial_f64(tj3, c)
        / (binomial_f64(tj1, j1_plus_m1) * binomial_f64(tj2, j2_plus_m2) * binomial_f64(tj3, j3_plus_m3));
    let tri = factorial(a) * factorial(b) * factorial(c) / factorial(big_j + 1);
    // (j1 - j2 - m3) is an integer whenever the selection rules hold
    let phase = HalfInt::from_twice(tj1 - tj2 - tm3).phase();
    Ok(phase * sum * (ratio * tri).sqrt())
}

/// Wigner 6j symbol `{j1 j2 j3; j4 j5 j6}`.
pub fn wigner_6j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    j4: HalfInt,
    j5: HalfInt,
    j6: HalfInt,
) -> Result<f64> {
    for (j, name) in [(j1, "j1"), (j2, "j2"), (j3, "j3"), (j4, "j4"), (j5, "j5"), (j6, "j6")] {
        check_momentum(j, name)?;
    }
    let [t1, t2, t3, t4, t5, t6] = [j1, j2, j3, j4, j5, j6].map(HalfInt::twice);
    let triads = [(t1, t2, t3), (t1, t5, t6), (t4, t2, t6), (t4, t5, t3)];
    if !triads.iter().all(|&(a, b, c)| triangle(a, b, c)) {
        return Ok(0.0);
    }

    let alpha = triads.map(|(a, b, c)| (a + b + c) / 2);
    let beta = [(t1 + t2 + t4 + t5) / 2, (t2 + t3 + t5 + t6) / 2, (t3 + t1 + t6 + t4) / 2];
    let kmin = *alpha.iter().max().unwrap();
    let kmax = *beta.iter().min().unwrap();
    if kmin > kmax {
        return Ok(0.0);
    }
    // (t+1)!/((t-α0)! Π(t-αp)! Π(βq-t)!) written as
    // (α0+1)! C(t+1, t-α0) Π C(βp-αp, t-αp) / (βp-αp)!
    let n = [beta[0] - alpha[1], beta[1] - alpha[2], beta[2] - alpha[3]];
    let sum = alternating_binomial_sum(kmin, kmax, |t| {
        vec![
            (t + 1, t - alpha[0]),
            (n[0], t - alpha[1]),
            (n[1], t - alpha[2]),
            (n[2], t - alpha[3]),
        ]
    });
    if sum == 0.0 {
        return Ok(0.0);
    }
    let mut pref = factorial(alpha[0] + 1) / (factorial(n[0]) * factorial(n[1]) * factorial(n[2]));
    let mut tri_sq = 1.0;
    for &(a, b, c) in &triads {
        tri_sq *= factorial((a + b - c) / 2) * factorial((a - b + c) / 2) * factorial((-a + b + c) / 2)
            / factorial((a + b + c) / 2 + 1);
    }
    pref *= tri_sq.sqrt();
    Ok(sum * pref)
}

/// Standard (active) Wigner small-d matrix element `d²_{m'm}(β)` expressed
/// through `c = cos β` and `s = sin β`.
fn small_d2(mp: i32, m: i32, c: f64, s: f64) -> f64 {
    // canonical entries with mp >= |m|; others follow from
    // d_{m'm} = (-1)^{m-m'} d_{mm'} = d_{-m,-m'}
    let canonical = |mp: i32, m: i32| -> f64 {
        match (mp, m) {
            (2, 2) => (1.0 + c).powi(2) / 4.0,
            (2, 1) => -s * (1.0 + c) / 2.0,
            (2, 0) => (3.0f64 / 8.0).sqrt() * s * s,
            (2, -1) => -s * (1.0 - c) / 2.0,
            (2, -2) => (1.0 - c).powi(2) / 4.0,
            (1, 1) => (1.0 + c) * (2.0 * c - 1.0) / 2.0,
            (1, 0) => -(1.5f64).sqrt() * s * c,
            (1, -1) => (1.0 - c) * (2.0 * c + 1.0) / 2.0,
            (0, 0) => (3.0 * c * c - 1.0) / 2.0,
            _ => unreachable!(),
        }
    };
    let sign = if (m - mp) % 2 == 0 { 1.0 } else { -1.0 };
    if mp >= m.abs() {
        canonical(mp, m)
    } else if -m >= mp.abs() {
        canonical(-m, -mp)
    } else if m >= mp.abs() {
        sign * canonical(m, mp)
    } else {
        sign * canonical(-mp, -m)
    }
}

/// Rank-2 rotation matrix element `D⁽²⁾_{m'm}(α, β, 0)` in the passive
/// convention.
///
/// Locked to the closed forms
/// `D_{0,0} = (3cos²β − 1)/2`, `D_{±1,0} = ±√(3/2) sinβ cosβ`,
/// `D_{±2,0} = √(3/8) sin²β`, and
/// `D_{±2,2} + D_{±2,−2} = ½(1 + cos²β) cos2α ± i cosβ sin2α`.
/// Concretely `D_{m'm}(α,β,0) = d_{m'm}(−β) e^{imα}` with the standard
/// Wigner small-d.
pub fn wigner_d2(mp: HalfInt, m: HalfInt, angles: EulerAngles) -> Result<Complex64> {
    for x in [mp, m] {
        if !x.is_integer() || x.twice().abs() > 4 {
            return Err(Error::invalid(format!("rank-2 projection {x} must be an integer in [-2, 2]")));
        }
    }
    let (mp, m) = (mp.twice() / 2, m.twice() / 2);
    let (s, c) = angles.beta.sin_cos();
    let d = small_d2(mp, m, c, -s);
    Ok(Complex64::from_polar(d, m as f64 * angles.alpha))
}

/// Integer-argument convenience wrapper used internally where the
/// projections are known to be in range.
pub(crate) fn d2(mp: i32, m: i32, angles: EulerAngles) -> Complex64 {
    wigner_d2(HalfInt::int(mp), HalfInt::int(m), angles).expect("projection in range")
}
