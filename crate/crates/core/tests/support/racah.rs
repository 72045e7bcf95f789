//! Exact big-rational Racah formulas for 3j and 6j symbols.
//!
//! Values are carried as `sign * sqrt(r)` with `r` an exact rational, so the
//! only floating-point step is the final square root.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn fact(n: i64) -> BigInt {
    assert!(n >= 0);
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn fact_q(n: i64) -> BigRational {
    BigRational::from_integer(fact(n))
}

/// Signed square root of a rational: value = sign * sqrt(magnitude).
#[derive(Clone, Debug)]
pub struct SignedSqrt {
    pub sign: i32,
    pub square: BigRational,
}

impl SignedSqrt {
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        self.sign as f64 * self.square.to_f64().unwrap().sqrt()
    }
}

fn triangle_sq(ta: i64, tb: i64, tc: i64) -> Option<BigRational> {
    if tc > ta + tb || tc < (ta - tb).abs() || (ta + tb + tc) % 2 != 0 {
        return None;
    }
    Some(
        fact_q((ta + tb - tc) / 2) * fact_q((ta - tb + tc) / 2) * fact_q((-ta + tb + tc) / 2)
            / fact_q((ta + tb + tc) / 2 + 1),
    )
}

/// 3j symbol from doubled arguments using the textbook Racah sum
/// (-1)^{j1-j2-m3} Δ sqrt(Π(j±m)!) Σ_t (-1)^t / [t!(j3-j2+t+m1)!(j3-j1+t-m2)!(j1+j2-j3-t)!(j1-t-m1)!(j2-t+m2)!]
pub fn three_j(tj1: i64, tj2: i64, tj3: i64, tm1: i64, tm2: i64, tm3: i64) -> SignedSqrt {
    let zero = SignedSqrt { sign: 0, square: BigRational::zero() };
    if tm1 + tm2 + tm3 != 0 {
        return zero;
    }
    for (j, m) in [(tj1, tm1), (tj2, tm2), (tj3, tm3)] {
        assert!(m.abs() <= j && (j - m) % 2 == 0);
    }
    let Some(delta) = triangle_sq(tj1, tj2, tj3) else { return zero };
    let pm = [tj1 + tm1, tj1 - tm1, tj2 + tm2, tj2 - tm2, tj3 + tm3, tj3 - tm3]
        .iter()
        .fold(BigRational::one(), |acc, &x| acc * fact_q(x / 2));
    let mut sum = BigRational::zero();
    for t in 0..=(tj1 + tj2 + tj3) {
        let args = [
            t,
            (tj3 - tj2 + tm1) / 2 + t,
            (tj3 - tj1 - tm2) / 2 + t,
            (tj1 + tj2 - tj3) / 2 - t,
            (tj1 - tm1) / 2 - t,
            (tj2 + tm2) / 2 - t,
        ];
        if args.iter().any(|&a| a < 0) {
            continue;
        }
        let denom = args.iter().fold(BigInt::one(), |acc, &a| acc * fact(a));
        let term = BigRational::new(BigInt::one(), denom);
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return zero;
    }
    let phase_exp = (tj1 - tj2 - tm3) / 2;
    let phase = if phase_exp.rem_euclid(2) == 0 { 1 } else { -1 };
    let sign = phase * if sum.is_positive() { 1 } else { -1 };
    SignedSqrt { sign, square: delta * pm * sum.clone() * sum }
}

/// 6j symbol from doubled arguments (Racah's formula).
pub fn six_j(t1: i64, t2: i64, t3: i64, t4: i64, t5: i64, t6: i64) -> SignedSqrt {
    let zero = SignedSqrt { sign: 0, square: BigRational::zero() };
    let triads = [(t1, t2, t3), (t1, t5, t6), (t4, t2, t6), (t4, t5, t3)];
    let mut pref = BigRational::one();
    for (a, b, c) in triads {
        match triangle_sq(a, b, c) {
            Some(d) => pref *= d,
            None => return zero,
        }
    }
    let alpha: Vec<i64> = triads.iter().map(|(a, b, c)| (a + b + c) / 2).collect();
    let beta = [(t1 + t2 + t4 + t5) / 2, (t2 + t3 + t5 + t6) / 2, (t3 + t1 + t6 + t4) / 2];
    let lo = *alpha.iter().max().unwrap();
    let hi = *beta.iter().min().unwrap();
    let mut sum = BigRational::zero();
    for t in lo..=hi {
        let mut denom = BigInt::one();
        for a in &alpha {
            denom *= fact(t - a);
        }
        for b in &beta {
            denom *= fact(b - t);
        }
        let term = BigRational::new(fact(t + 1), denom);
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return zero;
    }
    let sign = if sum.is_positive() { 1 } else { -1 };
    SignedSqrt { sign, square: pref * sum.clone() * sum }
}
