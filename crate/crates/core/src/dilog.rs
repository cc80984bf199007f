//! Dilogarithm and the Bose-type integrals built from it.
//!
//! `Li2(z) = sum_{k>=1} z^k / k^2`. For real arguments the power series is
//! used on `|x| <= 1/2`; the rest of `(-inf, 1]` is mapped onto that disk by
//! the reflection, Landen and inversion identities. Complex arguments inside
//! the unit disk go through the Bernoulli series in `-log(1 - w)`.
//!
//! The integrals `int_a^b t/(e^t - 1) dt` and `int_a^b t^2 e^t/(e^t - 1)^2 dt`
//! are evaluated in closed form through
//! `int_0^x t/(e^t - 1) dt = Li2(1 - e^{-x}) = pi^2/6 + x log(1 - e^{-x}) - Li2(e^{-x})`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `Li2(1) = pi^2 / 6`.
pub const ZETA2: f64 = PI * PI / 6.0;

/// Below this `x` the integral `int_0^x t/(e^t-1) dt` is taken as
/// `Li2(1 - e^{-x})`, above it through the tail `Li2(e^{-x}) - x log(1 - e^{-x})`.
pub const X_SWITCH: f64 = 0.7;

/// Closest approach to the unit circle accepted by [`li2_complex`].
pub const COMPLEX_MARGIN: f64 = 1e-9;

/// Real dilogarithm for `x <= 1`.
pub fn li2(x: f64) -> Result<f64> {
    if x.is_nan() || x > 1.0 {
        return Err(Error::Domain(format!("li2 requires x <= 1, got {x}")));
    }
    Ok(li2_unchecked(x))
}

pub(crate) fn li2_unchecked(x: f64) -> f64 {
    if x == 1.0 {
        ZETA2
    } else if x == 0.0 {
        0.0
    } else if x.abs() <= 0.5 {
        li2_series(x)
    } else if x > 0.5 {
        // Li2(x) + Li2(1-x) = pi^2/6 - ln(x) ln(1-x)
        ZETA2 - x.ln() * (-x).ln_1p() - li2_series(1.0 - x)
    } else if x >= -1.0 {
        // Landen: Li2(x) = -Li2(x/(x-1)) - ln^2(1-x)/2, with x/(x-1) in [1/3, 1/2)
        let l = (-x).ln_1p();
        -li2_series(x / (x - 1.0)) - 0.5 * l * l
    } else {
        // Li2(x) + Li2(1/x) = -pi^2/6 - ln^2(-x)/2
        let l = (-x).ln();
        -ZETA2 - 0.5 * l * l - li2_unchecked(1.0 / x)
    }
}

/// Power series, valid and fast for `|x| <= 1/2`.
fn li2_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut power = x;
    for k in 1..200u32 {
        let kf = f64::from(k);
        let term = power / (kf * kf);
        // Neumaier summation
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        power *= x;
    }
    sum + comp
}

/// `B_{2k} / (2k+1)!` for `k = 1..=14`.
fn bernoulli_coefficients() -> [f64; 14] {
    const BERNOULLI_EVEN: [(f64, f64); 14] = [
        (1.0, 6.0),
        (-1.0, 30.0),
        (1.0, 42.0),
        (-1.0, 30.0),
        (5.0, 66.0),
        (-691.0, 2730.0),
        (7.0, 6.0),
        (-3617.0, 510.0),
        (43867.0, 798.0),
        (-174611.0, 330.0),
        (854513.0, 138.0),
        (-236364091.0, 2730.0),
        (8553103.0, 6.0),
        (-23749461029.0, 870.0),
    ];
    let mut out = [0.0; 14];
    let mut factorial = 1.0f64;
    let mut m = 1u32;
    for (k, (num, den)) in BERNOULLI_EVEN.iter().enumerate() {
        let top = 2 * (k as u32 + 1) + 1;
        while m < top {
            m += 1;
            factorial *= f64::from(m);
        }
        out[k] = num / den / factorial;
    }
    out
}

/// Complex dilogarithm on `|w| <= 1 - 1e-9`.
pub fn li2_complex(w: Complex64) -> Result<Complex64> {
    let r = w.norm();
    if !r.is_finite() || r > 1.0 - COMPLEX_MARGIN {
        return Err(Error::Domain(format!(
            "li2_complex requires |w| <= 1 - {COMPLEX_MARGIN:e}, got |w| = {r}"
        )));
    }
    Ok(li2_complex_unchecked(w))
}

pub(crate) fn li2_complex_unchecked(w: Complex64) -> Complex64 {
    if w.norm() <= 0.5 {
        return li2_complex_series(w);
    }
    if w.re > 0.5 {
        // |1-w| < 1 and Re(1-w) < 1/2 on this part of the disk
        let one = Complex64::new(1.0, 0.0);
        let v = one - w;
        return Complex64::new(ZETA2, 0.0) - w.ln() * v.ln() - li2_complex_bernoulli(v);
    }
    li2_complex_bernoulli(w)
}

fn li2_complex_series(w: Complex64) -> Complex64 {
    let r = w.norm();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = w;
    for k in 1..400u32 {
        let kf = f64::from(k);
        sum += power / (kf * kf);
        // tail after term k is bounded by r^{k+1} / ((k+1)^2 (1-r))
        let next = f64::from(k + 1);
        if r.powi(k as i32 + 1) / (next * next * (1.0 - r)) <= 1e-17 * sum.norm() {
            break;
        }
        power *= w;
    }
    sum
}

/// `Li2(w) = sum_n B_n u^{n+1}/(n+1)!` with `u = -log(1-w)`; needs `Re w <= 1/2`.
fn li2_complex_bernoulli(w: Complex64) -> Complex64 {
    let coeffs = bernoulli_coefficients();
    let u = -(Complex64::new(1.0, 0.0) - w).ln();
    let u2 = u * u;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = u * u2;
    for c in coeffs {
        sum += power * c;
        power *= u2;
    }
    u - u2 / 4.0 + sum
}

/// `x / (e^x - 1)`, continuous at 0.
#[cfg(test)]
pub(crate) fn x_over_expm1(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x / x.exp_m1()
    }
}

/// `int_x^inf t/(e^t - 1) dt = Li2(e^{-x}) - x log(1 - e^{-x})` for `x >= X_SWITCH`.
fn bose_tail(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    let e = (-x).exp();
    li2_series(e) - x * (-e).ln_1p()
}

/// `int_0^x t/(e^t - 1) dt = Li2(1 - e^{-x})`, for `x >= 0` (including `+inf`).
pub fn li2_one_minus_exp(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("li2_one_minus_exp requires x >= 0, got {x}")));
    }
    Ok(li2_one_minus_exp_unchecked(x))
}

pub(crate) fn li2_one_minus_exp_unchecked(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x < X_SWITCH {
        li2_unchecked(-(-x).exp_m1())
    } else {
        ZETA2 - bose_tail(x)
    }
}

fn check_interval(name: &str, a: f64, b: f64) -> Result<()> {
    if a.is_nan() || b.is_nan() || a < 0.0 || a > b || a.is_infinite() {
        return Err(Error::Domain(format!(
            "{name} requires 0 <= a <= b with finite a, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

/// `int_a^b t/(e^t - 1) dt` for `0 <= a <= b <= +inf`.
pub fn bose_integral(a: f64, b: f64) -> Result<f64> {
    check_interval("bose_integral", a, b)?;
    Ok(bose_integral_unchecked(a, b))
}

pub(crate) fn bose_integral_unchecked(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let value = if a >= X_SWITCH {
        bose_tail(a) - bose_tail(b)
    } else {
        li2_one_minus_exp_unchecked(b) - li2_one_minus_exp_unchecked(a)
    };
    value.max(0.0)
}

/// `x^2 / (e^x - 1)`, vanishing at both ends of `[0, inf]`.
pub(crate) fn boundary_term(x: f64) -> f64 {
    if x == 0.0 || x.is_infinite() {
        0.0
    } else {
        x * x / x.exp_m1()
    }
}

/// `int_a^b x^2 e^x/(e^x - 1)^2 dx`, by parts:
/// `2 int_a^b x/(e^x-1) dx + a^2/(e^a-1) - b^2/(e^b-1)`.
pub fn l_integral(a: f64, b: f64) -> Result<f64> {
    check_interval("l_integral", a, b)?;
    if a == b {
        return Ok(0.0);
    }
    let value = 2.0 * bose_integral_unchecked(a, b) + boundary_term(a) - boundary_term(b);
    Ok(value.max(0.0))
}
