//! Quick self-checks exercised by `pncount verify`.
//!
//! Each check is a scaled-down version of a property the library is tested
//! against, small enough to finish in a few seconds.

use num_bigint::BigUint;
use num_complex::Complex64;

use pncount::asymptotics::{hardy_ramanujan_estimate, szekeres_estimate, theorem1_estimate, theorem1_query, Query};
use pncount::contour::{cauchy_count, log_f_closed_form, log_f};
use pncount::dilog::{li2, ZETA2};
use pncount::exact::{count_exact, count_unrestricted, count_via_recurrence, gaussian_poly_coeffs, PartitionBounds};
use pncount::saddle::{solve_c, solve_rho, Regime, Scale, C_LOWER_BOUND};

use crate::output::Record;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("{tag} {}: {}", self.name, self.detail)
    }

    pub fn record(&self) -> Record {
        Record::new()
            .push("check", self.name)
            .push("passed", self.passed)
            .push("detail", self.detail.clone())
    }
}

fn check(name: &'static str, body: impl FnOnce() -> Result<String, String>) -> Check {
    match body() {
        Ok(detail) => Check { name, passed: true, detail },
        Err(detail) => Check { name, passed: false, detail },
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

pub fn run_checks() -> Vec<Check> {
    vec![
        check("exact_dual_oracle", || {
            let mut cases = 0;
            for big_n in 0..=12 {
                for big_m in 0..=12 {
                    for n in 0..=80 {
                        let b = PartitionBounds::new(n, big_n, big_m);
                        if count_exact(b).map_err(err)? != count_via_recurrence(b).map_err(err)? {
                            return Err(format!("mismatch at {b}"));
                        }
                        cases += 1;
                    }
                }
            }
            Ok(format!("{cases} instances agree"))
        }),
        check("structural_identities", || {
            for big_n in 0..=10u64 {
                for big_m in 0..=10u64 {
                    let area = big_n * big_m;
                    let row = gaussian_poly_coeffs(big_n, big_m, area).map_err(err)?.into_coeffs();
                    let swapped = gaussian_poly_coeffs(big_m, big_n, area).map_err(err)?.into_coeffs();
                    if row != swapped {
                        return Err(format!("symmetry fails at N = {big_n}, M = {big_m}"));
                    }
                    for k in 0..=area as usize {
                        if row[k] != row[area as usize - k] {
                            return Err(format!("complement fails at N = {big_n}, M = {big_m}, n = {k}"));
                        }
                    }
                    let peak = row.iter().max().expect("nonempty");
                    if &row[(area / 2) as usize] != peak {
                        return Err(format!("central coefficient not maximal at N = {big_n}, M = {big_m}"));
                    }
                    let total: BigUint = row.iter().sum();
                    if total != binomial(big_n + big_m, big_n) {
                        return Err(format!("column sum fails at N = {big_n}, M = {big_m}"));
                    }
                }
            }
            let p100 = count_unrestricted(100).map_err(err)?;
            if p100.to_string() != "190569292" {
                return Err(format!("p_100 = {p100}"));
            }
            Ok("symmetry, complement, central maximum and column sums hold for N, M <= 10".into())
        }),
        check("dilog_reflection", || {
            let mut worst: f64 = 0.0;
            for k in 1..100 {
                let x = k as f64 / 100.0;
                let lhs = li2(x).map_err(err)? + li2(1.0 - x).map_err(err)?;
                worst = worst.max((lhs - (ZETA2 - x.ln() * (1.0 - x).ln())).abs());
            }
            let one = (li2(1.0).map_err(err)? - ZETA2).abs();
            if worst > 1e-10 || one > 1e-12 {
                return Err(format!("reflection error {worst:e}, Li2(1) error {one:e}"));
            }
            Ok(format!("max reflection error {worst:.1e}"))
        }),
        check("saddle_solver", || {
            for alpha in [1.0, 2.0, 4.0, 8.0, 1e6] {
                let r = solve_rho(alpha).map_err(err)?;
                if r.residual.abs() > 1e-12 {
                    return Err(format!("rho residual {:e} at alpha = {alpha}", r.residual));
                }
            }
            let limit = solve_rho(1e6).map_err(err)?.rho;
            if (limit - std::f64::consts::PI / 6f64.sqrt()).abs() > 1e-6 {
                return Err(format!("rho(1e6) = {limit}"));
            }
            for a in [4.0, 9.0, 30.0, 100.0] {
                for b in [4.0, 17.0, 100.0] {
                    let s = solve_c(Scale::Finite(a), Scale::Finite(b), Regime::Strict).map_err(err)?;
                    if s.c1.min(s.c2) < C_LOWER_BOUND {
                        return Err(format!("min(c1, c2) = {} at ({a}, {b})", s.c1.min(s.c2)));
                    }
                }
            }
            Ok("rho residuals <= 1e-12, min(c1, c2) >= 13/5 on the grid".into())
        }),
        check("one_side_unbounded", || {
            let mut worst: f64 = 0.0;
            for big_n in [400, 800, 1600] {
                let t = theorem1_query(&Query::new(10_000, Some(big_n), None), Regime::Strict).map_err(err)?;
                let s = szekeres_estimate(10_000, big_n).map_err(err)?;
                worst = worst.max((t.log_value - s.log_value).abs());
            }
            if worst > 1e-9 {
                return Err(format!("difference {worst:e}"));
            }
            Ok(format!("max log difference {worst:.1e}"))
        }),
        check("estimates_vs_exact", || {
            let mut errors = Vec::new();
            for (n, side) in [(625u64, 100u64), (2500, 200)] {
                let exact = count_exact(PartitionBounds::new(n, side, side)).map_err(err)?.ln();
                let est = theorem1_estimate(n, side, side).map_err(err)?;
                errors.push((exact - est.log_value).exp_m1().abs());
            }
            if !(errors[1] < errors[0]) {
                return Err(format!("errors {errors:?} not decreasing"));
            }
            let hr = |n: u64| -> Result<f64, String> {
                let exact = count_unrestricted(n).map_err(err)?.ln();
                Ok((exact - hardy_ramanujan_estimate(n).map_err(err)?.log_value).exp_m1().abs())
            };
            let (h100, h1000) = (hr(100)?, hr(1000)?);
            if !(h1000 < h100) {
                return Err(format!("unrestricted errors {h100:e}, {h1000:e} not decreasing"));
            }
            Ok(format!(
                "box errors {:.3e} -> {:.3e}, unrestricted {h100:.3e} -> {h1000:.3e}",
                errors[0], errors[1]
            ))
        }),
        check("contour_quadrature", || {
            let mut worst: f64 = 0.0;
            for (n, a, b) in [(50u64, 10u64, 10u64), (64, 8, 8), (300, 30, 50), (700, 25, 40)] {
                let q = cauchy_count(n, a, b, None).map_err(err)?;
                let exact = count_exact(PartitionBounds::new(n, a, b)).map_err(err)?.ln();
                if q.imag_residual > 1e-8 {
                    return Err(format!("imaginary residual {:e} at p_{n}({a}, {b})", q.imag_residual));
                }
                worst = worst.max((q.log_value - exact).abs());
            }
            if worst > 1e-6 {
                return Err(format!("log error {worst:e}"));
            }
            Ok(format!("max log error {worst:.1e}"))
        }),
        check("closed_form_log_f", || {
            let n = 1000f64;
            let side = (4.0 * n.sqrt()).round() as u64;
            let mut worst: f64 = 0.0;
            for t in [0.0, 0.5, 1.0] {
                let z = Complex64::new(1.0, t) / n.sqrt();
                let diff = (log_f(z, side, side).map_err(err)? - log_f_closed_form(z, side, side).map_err(err)?).norm();
                worst = worst.max(diff / z.norm());
            }
            if worst > 10.0 {
                return Err(format!("residual / |z| = {worst}"));
            }
            Ok(format!("max residual / |z| = {worst:.3}"))
        }),
    ]
}
