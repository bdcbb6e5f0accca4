//! Exact Clebsch–Gordan coefficients from the Racah formula.
//!
//! Arguments are passed doubled (`2j`, `2m`) so half-integers stay integral.
//! The square of a coefficient is rational; it is accumulated exactly and
//! converted to `f64` once.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn factorial(n: i64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `⟨j1 m1; j2 m2 | j m⟩` as `(sign, square)`, or `None` if a selection
/// rule forbids it. All arguments are doubled.
pub fn clebsch_gordan_squared(
    tj1: i64,
    tm1: i64,
    tj2: i64,
    tm2: i64,
    tj: i64,
    tm: i64,
) -> Option<(i8, BigRational)> {
    let valid_pair = |tj: i64, tm: i64| tj >= 0 && tm.abs() <= tj && (tj - tm) % 2 == 0;
    if !(valid_pair(tj1, tm1) && valid_pair(tj2, tm2) && valid_pair(tj, tm)) {
        return None;
    }
    if tm1 + tm2 != tm || tj < (tj1 - tj2).abs() || tj > tj1 + tj2 || (tj1 + tj2 + tj) % 2 != 0 {
        return None;
    }
    let h = |x: i64| x / 2;
    let f = |x: i64| factorial(h(x));
    let num = BigInt::from(tj + 1)
        * f(tj + tj1 - tj2)
        * f(tj - tj1 + tj2)
        * f(tj1 + tj2 - tj)
        * f(tj + tm)
        * f(tj - tm)
        * f(tj1 - tm1)
        * f(tj1 + tm1)
        * f(tj2 - tm2)
        * f(tj2 + tm2);
    let den = f(tj1 + tj2 + tj + 2);
    let a = BigRational::new(num, den);

    // Σ_k (−1)^k / [k! (j1+j2−j−k)! (j1−m1−k)! (j2+m2−k)! (j−j2+m1+k)! (j−j1−m2+k)!]
    let k_min = 0.max(h(tj2 - tj - tm1)).max(h(tj1 - tj + tm2));
    let k_max = h(tj1 + tj2 - tj).min(h(tj1 - tm1)).min(h(tj2 + tm2));
    let mut s = BigRational::zero();
    for k in k_min..=k_max {
        let d = factorial(k)
            * factorial(h(tj1 + tj2 - tj) - k)
            * factorial(h(tj1 - tm1) - k)
            * factorial(h(tj2 + tm2) - k)
            * factorial(h(tj - tj2 + tm1) + k)
            * factorial(h(tj - tj1 - tm2) + k);
        let term = BigRational::new(BigInt::one(), d);
        if k % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    if s.is_zero() {
        return Some((0, s));
    }
    let sign = if s.is_negative() { -1 } else { 1 };
    Some((sign, &s * &s * a))
}

/// `⟨j1 m1; j2 m2 | j m⟩` with doubled arguments; zero when forbidden.
pub fn clebsch_gordan_doubled(tj1: i64, tm1: i64, tj2: i64, tm2: i64, tj: i64, tm: i64) -> f64 {
    match clebsch_gordan_squared(tj1, tm1, tj2, tm2, tj, tm) {
        Some((sign, sq)) => sign as f64 * sq.to_f64().unwrap_or(0.0).sqrt(),
        None => 0.0,
    }
}

fn doubled(x: f64) -> Option<i64> {
    let t = 2.0 * x;
    (t.is_finite() && (t - t.round()).abs() < 1e-9).then(|| t.round() as i64)
}

/// `⟨j1 m1; j2 m2 | j m⟩` for (half-)integer arguments. Anything that is not a
/// half-integer or breaks a selection rule gives `0`.
pub fn clebsch_gordan(j1: f64, m1: f64, j2: f64, m2: f64, j: f64, m: f64) -> f64 {
    match (
        doubled(j1),
        doubled(m1),
        doubled(j2),
        doubled(m2),
        doubled(j),
        doubled(m),
    ) {
        (Some(a), Some(b), Some(c), Some(d), Some(e), Some(f)) => {
            clebsch_gordan_doubled(a, b, c, d, e, f)
        }
        _ => 0.0,
    }
}
