//! Coefficient extraction by trapezoidal quadrature on a circle `|q| = e^{-v}`.
//!
//! `p_n(N, M) = (1/2pi) int_{-pi}^{pi} f(v + iw) e^{n(v + iw)} dw`, where
//! `f(z) = G(N, M; e^{-z})`. The integrand is periodic and smooth, so the
//! trapezoidal rule converges geometrically, and once the node count exceeds
//! both `n` and `NM - n` it is exact up to rounding.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dilog::{li2_complex_unchecked, ZETA2};
use crate::error::{Error, Result};
use crate::exact::PartitionBounds;
use crate::saddle::{solve_c, Regime, Scale};

pub const MIN_NODES: usize = 64;
pub const MAX_NODES: usize = 1 << 20;
/// Successive doublings closer than this are accepted as converged.
pub const STOP_TOL: f64 = 1e-10;
/// Largest change still accepted when the node budget runs out.
pub const BUDGET_TOL: f64 = 1e-6;

/// Lower bound on `min(N, M) |z|` for [`log_f_closed_form`].
pub const CLOSED_FORM_MIN_SCALE: f64 = 1.0;
/// Lower bound on `Re z / |z|`, i.e. `|arg z| <= acos(0.25)`.
pub const CLOSED_FORM_MIN_COS: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult {
    pub log_value: f64,
    /// `|Im I| / |Re I|` for the computed integral `I`.
    pub imag_residual: f64,
    pub node_count: usize,
    /// Change in `log_value` over the last node doubling; zero when the rule is exact.
    pub est_error: f64,
    /// Real part of the contour.
    pub v: f64,
}

/// `1 - e^{-w}` without cancellation for small `|w|`.
fn one_minus_exp_neg(w: Complex64) -> Complex64 {
    // 1 - e^{-x - iy} = -(expm1(-x) cos y - 2 sin^2(y/2)) + i e^{-x} sin y
    let (x, y) = (w.re, w.im);
    let half = (0.5 * y).sin();
    let re = -((-x).exp_m1() * y.cos() - 2.0 * half * half);
    let im = (-x).exp() * y.sin();
    Complex64::new(re, im)
}

fn log_factor(w: Complex64) -> Complex64 {
    let t = one_minus_exp_neg(w);
    assert!(
        t.re > 0.0 || (t.re == 0.0 && t.im == 0.0 && w.re.is_infinite()),
        "1 - e^(-w) left the right half plane at w = {w}"
    );
    t.ln()
}

fn log_f_unchecked(z: Complex64, max_part: u64, max_len: u64) -> Complex64 {
    let (small, large) = (max_part.min(max_len), max_part.max(max_len));
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 1..=small {
        acc += log_factor(z * (large + j) as f64) - log_factor(z * j as f64);
    }
    acc
}

/// `log G(N, M; e^{-z})` as a sum of principal logs of `1 - e^{-jz}`.
pub fn log_f(z: Complex64, max_part: u64, max_len: u64) -> Result<Complex64> {
    if !(z.re > 0.0 && z.im.is_finite()) {
        return Err(Error::Domain(format!("log_f needs Re z > 0, got z = {z}")));
    }
    Ok(log_f_unchecked(z, max_part, max_len))
}

/// Mean of `n` under the weights `p_n e^{-nv}`, i.e. `-d/dv log f(v)`.
fn weighted_mean(v: f64, max_part: u64, max_len: u64) -> f64 {
    let (small, large) = (max_part.min(max_len), max_part.max(max_len));
    let term = |j: u64| {
        let x = j as f64 * v;
        j as f64 / x.exp_m1()
    };
    (1..=small).map(|j| term(j) - term(large + j)).sum()
}

/// Real point where `log f(v) + n v` is stationary.
fn real_saddle(n: u64, max_part: u64, max_len: u64) -> f64 {
    let target = n as f64;
    let floor = 1.0 / (max_part as f64 * max_len as f64);
    if weighted_mean(floor, max_part, max_len) <= target {
        return floor;
    }
    let (mut lo, mut hi) = (floor, 1.0);
    while weighted_mean(hi, max_part, max_len) > target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if weighted_mean(mid, max_part, max_len) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Contour radius used by [`cauchy_count`] for `n <= NM/2`.
pub fn contour_v(n: u64, max_part: u64, max_len: u64) -> f64 {
    let root = (n as f64).sqrt();
    let alpha = Scale::Finite(max_part as f64 / root);
    let beta = Scale::Finite(max_len as f64 / root);
    match solve_c(alpha, beta, Regime::Permissive) {
        Ok(s) => s.a / root,
        Err(_) => real_saddle(n, max_part, max_len),
    }
}

fn default_nodes(n: u64) -> usize {
    let root = (n as f64).sqrt().ceil() as usize;
    (8 * root).max(256)
}

struct Kahan {
    sum: Complex64,
    carry: Complex64,
}

impl Kahan {
    fn new() -> Self {
        Self {
            sum: Complex64::new(0.0, 0.0),
            carry: Complex64::new(0.0, 0.0),
        }
    }

    fn add(&mut self, x: Complex64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// `(log scale, sum)` with `integral = e^{scale} * sum / K`.
fn trapezoid(n: u64, max_part: u64, max_len: u64, v: f64, nodes: usize) -> (f64, Complex64) {
    let k_nodes = nodes as u64;
    let step = 2.0 * PI / nodes as f64;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let logs: Vec<(f64, Complex64)> = (0..k_nodes)
        .map(|k| {
            let w = -PI + step * k as f64;
            let lf = log_f_unchecked(Complex64::new(v, w), max_part, max_len);
            // e^{i n w_k} = (-1)^n e^{2 pi i (n k mod K) / K}
            let turn = ((u128::from(n) * u128::from(k)) % u128::from(k_nodes)) as f64 * step;
            let phase = Complex64::from_polar(sign, turn);
            (lf.re, Complex64::from_polar(1.0, lf.im) * phase)
        })
        .collect();
    let top = logs.iter().map(|(re, _)| *re).fold(f64::NEG_INFINITY, f64::max);
    let mut acc = Kahan::new();
    for (re, unit) in &logs {
        acc.add(unit * (re - top).exp());
    }
    (top + n as f64 * v, acc.sum)
}

fn finish(scale: f64, sum: Complex64, nodes: usize) -> Result<(f64, f64)> {
    if !(sum.re > 0.0) {
        return Err(Error::NoConvergence(format!(
            "quadrature with {nodes} nodes gave non-positive real part {}",
            sum.re
        )));
    }
    Ok((scale + (sum.re / nodes as f64).ln(), sum.im.abs() / sum.re))
}

/// `log p_n(N, M)` by quadrature, starting from `nodes` and doubling until stable.
///
/// Instances with `2n > NM` are evaluated on the complement `(NM - n, M, N)`.
pub fn cauchy_count(n: u64, max_part: u64, max_len: u64, nodes: Option<usize>) -> Result<QuadratureResult> {
    if n == 0 {
        return Err(Error::Domain("cauchy_count needs n >= 1".into()));
    }
    let start = match nodes {
        Some(k) if k < MIN_NODES => {
            return Err(Error::Domain(format!("need at least {MIN_NODES} nodes, got {k}")))
        }
        Some(k) => k,
        None => default_nodes(n),
    };
    let b = PartitionBounds::new(n, max_part, max_len);
    let area = b.area();
    if u128::from(n) > area {
        return Err(Error::Degenerate(format!("{b} = 0: n exceeds N*M = {area}")));
    }
    let b = if 2 * u128::from(n) > area {
        b.complement().expect("n <= NM checked above")
    } else {
        b
    };
    let (n, max_part, max_len) = (b.n, b.max_part, b.max_len);
    let exact_above = u128::from(n.max((area - u128::from(n)) as u64));
    let v = if n == 0 {
        // complement of n = NM; any radius works for the constant term
        1.0 / area as f64
    } else {
        contour_v(n, max_part, max_len)
    };

    let mut k = start;
    let mut previous: Option<f64> = None;
    loop {
        let (scale, sum) = trapezoid(n, max_part, max_len, v, k);
        let (log_value, imag_residual) = finish(scale, sum, k)?;
        let change = previous.map_or(f64::INFINITY, |p| (log_value - p).abs());
        let result = |est_error: f64| QuadratureResult {
            log_value,
            imag_residual,
            node_count: k,
            est_error,
            v,
        };
        if k as u128 > exact_above {
            return Ok(result(if change.is_finite() { change } else { 0.0 }));
        }
        if change <= STOP_TOL {
            return Ok(result(change));
        }
        if 2 * k > MAX_NODES {
            if change <= BUDGET_TOL {
                return Ok(result(change));
            }
            return Err(Error::NoConvergence(format!(
                "log value still moving by {change:e} at {k} nodes"
            )));
        }
        previous = Some(log_value);
        k *= 2;
    }
}

/// Closed-form approximation of `log f(z)` for small `z` in a sector.
///
/// `(1/z)(pi^2/6 + Li2(e^{-z(N+M)}) - Li2(e^{-zN}) - Li2(e^{-zM})) + (1/2) log z
///  - (1/2) log((1 - e^{-zN})(1 - e^{-zM}) / (1 - e^{-z(N+M)})) - log sqrt(2 pi)`
pub fn log_f_closed_form(z: Complex64, max_part: u64, max_len: u64) -> Result<Complex64> {
    let modulus = z.norm();
    if !(z.re > 0.0) || !(modulus < 1.0) {
        return Err(Error::Hypothesis(format!("need Re z > 0 and |z| < 1, got z = {z}")));
    }
    if z.re < CLOSED_FORM_MIN_COS * modulus {
        return Err(Error::Hypothesis(format!(
            "z = {z} lies outside the sector Re z >= {CLOSED_FORM_MIN_COS} |z|"
        )));
    }
    let small = max_part.min(max_len) as f64;
    if small * modulus < CLOSED_FORM_MIN_SCALE {
        return Err(Error::Hypothesis(format!(
            "min(N, M) |z| = {} < {CLOSED_FORM_MIN_SCALE}",
            small * modulus
        )));
    }
    let (nf, mf) = (max_part as f64, max_len as f64);
    let li = |k: f64| li2_complex_unchecked((-z * k).exp());
    let bracket = Complex64::new(ZETA2, 0.0) + li(nf + mf) - li(nf) - li(mf);
    let ratio = log_factor(z * nf) + log_factor(z * mf) - log_factor(z * (nf + mf));
    Ok(bracket / z + 0.5 * z.ln() - 0.5 * ratio - 0.5 * (2.0 * PI).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{count_exact, gaussian_poly_coeffs};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_f_trivial_and_conjugate() {
        assert_eq!(log_f(c(0.3, 1.0), 0, 9).unwrap(), c(0.0, 0.0));
        assert_eq!(log_f(c(0.3, 1.0), 9, 0).unwrap(), c(0.0, 0.0));
        let z = c(0.05, 0.7);
        let a = log_f(z, 12, 30).unwrap();
        let b = log_f(z.conj(), 12, 30).unwrap();
        assert!((a.conj() - b).norm() < 1e-13);
        assert!(log_f(c(0.0, 1.0), 3, 3).is_err());
        assert!(log_f(c(-0.1, 0.0), 3, 3).is_err());
    }

    #[test]
    fn log_f_matches_generating_function() {
        let table = gaussian_poly_coeffs(5, 5, 25).unwrap();
        let v: f64 = 0.5;
        let series: f64 = table
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, p)| p.to_string().parse::<f64>().unwrap() * (-v * k as f64).exp())
            .sum();
        let got = log_f(c(v, 0.0), 5, 5).unwrap();
        assert!((got.re - series.ln()).abs() < 1e-10);
        assert_eq!(got.im, 0.0);

        // complex point, small N and M: direct polynomial evaluation
        let z = c(0.2, 2.3);
        let q = (-z).exp();
        let poly: Complex64 = table
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, p)| q.powu(k as u32) * p.to_string().parse::<f64>().unwrap())
            .sum();
        let got = log_f(z, 5, 5).unwrap().exp();
        assert!((got - poly).norm() < 1e-10 * poly.norm());
    }

    fn exact_ln(n: u64, a: u64, b: u64) -> f64 {
        count_exact(PartitionBounds::new(n, a, b)).unwrap().ln()
    }

    #[test]
    fn quadrature_examples() {
        let r = cauchy_count(50, 10, 10, None).unwrap();
        assert!((r.log_value - exact_ln(50, 10, 10)).abs() < 1e-6);
        assert!(r.imag_residual <= 1e-8);

        let r = cauchy_count(64, 8, 8, None).unwrap();
        assert!(r.log_value.abs() < 1e-6);
        assert!(r.node_count >= 256);

        let r = cauchy_count(2000, 200, 200, None).unwrap();
        let want = exact_ln(2000, 200, 200);
        assert!((r.log_value - want).abs() < 1e-6 * want);
        assert!(r.imag_residual <= 1e-8);

        let r = cauchy_count(63, 8, 8, Some(64)).unwrap();
        assert!(r.log_value.abs() < 1e-6);
    }

    #[test]
    fn quadrature_errors() {
        assert!(matches!(cauchy_count(0, 3, 3, None), Err(Error::Domain(_))));
        assert!(matches!(cauchy_count(10, 3, 3, None), Err(Error::Degenerate(_))));
        assert!(matches!(cauchy_count(1, 0, 3, None), Err(Error::Degenerate(_))));
        assert!(matches!(cauchy_count(5, 3, 3, Some(63)), Err(Error::Domain(_))));
    }

    #[test]
    fn quadrature_near_box_centre() {
        for (n, a, b) in [(5000, 100, 100), (300, 20, 30), (301, 20, 30), (1999, 40, 100)] {
            let r = cauchy_count(n, a, b, None).unwrap();
            let want = exact_ln(n, a, b);
            assert!((r.log_value - want).abs() < 1e-6 * want.max(1.0), "({n}, {a}, {b})");
        }
    }

    #[test]
    fn integrand_peaks_near_real_axis() {
        let (n, big) = (900u64, 120u64);
        let v = contour_v(n, big, big);
        let at = |w: f64| log_f(c(v, w), big, big).unwrap().re;
        let peak = at(0.0);
        for k in 1..64 {
            let w = -PI + 2.0 * PI * k as f64 / 64.0;
            if w.abs() > 1e-12 {
                assert!(at(w) < peak);
            }
        }
    }

    #[test]
    fn closed_form_preconditions() {
        assert!(log_f_closed_form(c(0.01, 0.0), 400, 400).is_ok());
        assert!(log_f_closed_form(c(0.01, 0.05), 400, 400).is_err());
        assert!(log_f_closed_form(c(0.001, 0.0), 400, 400).is_err());
        assert!(log_f_closed_form(c(-0.01, 0.0), 400, 400).is_err());
        assert!(log_f_closed_form(c(1.5, 0.0), 400, 400).is_err());
    }

    #[test]
    fn closed_form_on_real_axis() {
        let n = 10_000f64;
        let v = 1.0 / n.sqrt();
        let approx = log_f_closed_form(c(v, 0.0), 400, 400).unwrap();
        let exact = log_f(c(v, 0.0), 400, 400).unwrap();
        assert!(approx.im.abs() < 1e-12);
        assert!((approx.re - exact.re).abs() <= 10.0 * v);
    }
}
