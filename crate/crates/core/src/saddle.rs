//! Saddle-point parameters for the box `N x M`.
//!
//! With `alpha = N / sqrt(n)` and `beta = M / sqrt(n)`, the saddle is described
//! by `c1 = alpha * A`, `c2 = beta * A` where
//!
//! ```text
//! A(c1, c2)^2 = int_0^{c1} x/(e^x-1) dx - int_{c2}^{c1+c2} x/(e^x-1) dx
//!             = Li2(1-e^{-c1}) + Li2(1-e^{-c2}) - Li2(1-e^{-c1-c2}).
//! ```
//!
//! `c1` is the unique positive root of `b(t) = A(t, t*beta/alpha)^2 - (t/alpha)^2`,
//! which is positive then negative, so it is bracketed and bisected. An
//! unbounded side collapses the system to `rho^2 = Li2(1 - e^{-alpha rho})`.

use std::f64::consts::PI;
use std::fmt;

use crate::dilog::{bose_integral_unchecked, li2_one_minus_exp_unchecked, li2_unchecked};
use crate::error::{Error, Result};

/// Lower bound on `min(c1, c2)` whenever `min(alpha, beta) >= 4`.
pub const C_LOWER_BOUND: f64 = 13.0 / 5.0;

/// Smallest `min(alpha, beta)` covered by the proven asymptotic formula.
pub const PROVEN_SCALE: f64 = 4.0;

const MAX_BISECTIONS: u32 = 200;
const BISECTION_RTOL: f64 = 1e-13;
const SADDLE_RESIDUAL_TOL: f64 = 1e-12;
const G_RESIDUAL_TOL: f64 = 1e-10;

/// `pi / sqrt(6)`, the value of `A` for an unrestricted box.
pub fn rho_infinity() -> f64 {
    PI / 6f64.sqrt()
}

/// One side of the scaled shape. `Infinite` means the bound is absent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    Finite(f64),
    Infinite,
}

impl Scale {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Scale::Infinite)
    }

    /// The value as a float, with `+inf` for an absent bound.
    pub fn as_f64(&self) -> f64 {
        match *self {
            Scale::Finite(v) => v,
            Scale::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scale::Finite(v) => write!(f, "{v}"),
            Scale::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" | "unbounded" => Ok(Scale::Infinite),
            other => {
                let v: f64 = other
                    .parse()
                    .map_err(|_| Error::Domain(format!("not a scale: {s:?}")))?;
                if v.is_infinite() && v > 0.0 {
                    Ok(Scale::Infinite)
                } else if v.is_finite() && v > 0.0 {
                    Ok(Scale::Finite(v))
                } else {
                    Err(Error::Domain(format!("scale must be positive, got {s:?}")))
                }
            }
        }
    }
}

/// Whether the proven hypothesis `min(alpha, beta) >= 4` is enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Regime {
    #[default]
    Strict,
    /// Accept any `alpha * beta > 2` and flag the result.
    Permissive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleSolution {
    pub alpha: Scale,
    pub beta: Scale,
    pub c1: f64,
    pub c2: f64,
    pub a: f64,
    pub residual: f64,
    /// False when solved outside `min(alpha, beta) >= 4`.
    pub proven: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoSolution {
    pub alpha: f64,
    pub rho: f64,
    pub residual: f64,
}

fn check_c(c: f64, name: &str) -> Result<()> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::Domain(format!("{name} must be positive, got {c}")));
    }
    Ok(())
}

/// `A(c1,c2)^2` from the Bose integrals. Either argument may be `+inf`.
pub(crate) fn a_squared(c1: f64, c2: f64) -> f64 {
    li2_one_minus_exp_unchecked(c1) - bose_integral_unchecked(c2, c1 + c2)
}

/// `A(c1,c2)^2` as the three-dilogarithm combination.
pub fn a_squared_dilog_form(c1: f64, c2: f64) -> Result<f64> {
    check_c(c1, "c1")?;
    check_c(c2, "c2")?;
    let l = |c: f64| li2_unchecked(-(-c).exp_m1());
    Ok(l(c1) + l(c2) - l(c1 + c2))
}

/// `A(c1, c2)`; `c2` (or `c1`) may be `+inf`.
pub fn a_of(c1: f64, c2: f64) -> Result<f64> {
    check_c(c1, "c1")?;
    check_c(c2, "c2")?;
    Ok(a_squared(c1, c2).max(0.0).sqrt())
}

/// `rho(alpha)`: the positive root of `r^2 = Li2(1 - e^{-alpha r})`.
pub fn solve_rho(alpha: f64) -> Result<RhoSolution> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::Domain(format!("solve_rho requires alpha > 0, got {alpha}")));
    }
    let top = rho_infinity();
    if alpha.is_infinite() {
        return Ok(RhoSolution {
            alpha,
            rho: top,
            residual: 0.0,
        });
    }
    let h = |r: f64| r * r - li2_one_minus_exp_unchecked(alpha * r);
    // h < 0 just above 0, h(pi/sqrt 6) >= 0
    let mut lo = top / 2.0;
    let mut halvings = 0;
    while h(lo) >= 0.0 {
        lo /= 2.0;
        halvings += 1;
        if halvings > 1100 || lo == 0.0 {
            return Err(Error::NoConvergence(format!("no sign change for rho at alpha = {alpha}")));
        }
    }
    let (lo, hi) = bisect(&h, lo, top, -1.0)
        .ok_or_else(|| Error::NoConvergence(format!("rho bisection at alpha = {alpha}")))?;
    let rho = polish(&h, 0.5 * (lo + hi), lo, hi);
    let residual = h(rho);
    if residual.abs() > SADDLE_RESIDUAL_TOL {
        return Err(Error::NoConvergence(format!(
            "rho residual {residual:e} at alpha = {alpha}"
        )));
    }
    Ok(RhoSolution { alpha, rho, residual })
}

/// Bisect `f` on `[lo, hi]` where `sign_lo * f(lo) > 0` and the sign flips
/// inside. Returns the final bracket.
fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, sign_lo: f64) -> Option<(f64, f64)> {
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= BISECTION_RTOL * hi.abs() {
            return Some((lo, hi));
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Some((lo, hi));
        }
        if sign_lo * f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    None
}

/// Two Newton steps with a central-difference derivative, kept only when
/// they stay in the bracket and shrink `|f|`.
fn polish<F: Fn(f64) -> f64>(f: &F, mut t: f64, lo: f64, hi: f64) -> f64 {
    for _ in 0..2 {
        let ft = f(t);
        if ft == 0.0 {
            break;
        }
        let step = 1e-6 * t.abs().max(1e-300);
        let slope = (f(t + step) - f(t - step)) / (2.0 * step);
        if !slope.is_finite() || slope == 0.0 {
            break;
        }
        let next = t - ft / slope;
        if next >= lo && next <= hi && f(next).abs() < ft.abs() {
            t = next;
        } else {
            break;
        }
    }
    t
}

/// Solve for `(c1, c2, A)` at shape `(alpha, beta)`.
pub fn solve_c(alpha: Scale, beta: Scale, regime: Regime) -> Result<SaddleSolution> {
    for s in [alpha, beta] {
        if let Scale::Finite(v) = s {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("scales must be positive, got {v}")));
            }
        }
    }
    let min_scale = alpha.as_f64().min(beta.as_f64());
    let product = alpha.as_f64() * beta.as_f64();
    // integer boundaries like N = 4 sqrt(n) land a rounding error below 4
    let proven = min_scale >= PROVEN_SCALE * (1.0 - 1e-12);
    match regime {
        Regime::Strict if !proven => {
            return Err(Error::Hypothesis(format!(
                "min(alpha, beta) = {min_scale} < {PROVEN_SCALE}"
            )))
        }
        Regime::Permissive if product <= 2.0 => {
            return Err(Error::Hypothesis(format!(
                "alpha * beta = {product} <= 2 has no saddle"
            )))
        }
        _ => {}
    }

    match (alpha, beta) {
        (Scale::Infinite, Scale::Infinite) => Ok(SaddleSolution {
            alpha,
            beta,
            c1: f64::INFINITY,
            c2: f64::INFINITY,
            a: rho_infinity(),
            residual: 0.0,
            proven,
        }),
        (Scale::Finite(a), Scale::Infinite) => {
            let r = solve_rho(a)?;
            Ok(SaddleSolution {
                alpha,
                beta,
                c1: a * r.rho,
                c2: f64::INFINITY,
                a: r.rho,
                residual: r.residual,
                proven,
            })
        }
        (Scale::Infinite, Scale::Finite(_)) => {
            let s = solve_c(beta, alpha, regime)?;
            Ok(SaddleSolution {
                alpha,
                beta,
                c1: s.c2,
                c2: s.c1,
                ..s
            })
        }
        (Scale::Finite(a), Scale::Finite(b)) => {
            if a > b {
                let s = solve_finite(b, a, proven)?;
                return Ok(SaddleSolution {
                    alpha,
                    beta,
                    c1: s.c2,
                    c2: s.c1,
                    ..s
                });
            }
            let s = solve_finite(a, b, proven)?;
            Ok(SaddleSolution { alpha, beta, ..s })
        }
    }
}

/// `alpha <= beta`, both finite.
fn solve_finite(alpha: f64, beta: f64, proven: bool) -> Result<SaddleSolution> {
    let lambda = beta / alpha;
    let b = |t: f64| a_squared(t, lambda * t) - (t / alpha) * (t / alpha);

    let lo = if proven {
        let lo = C_LOWER_BOUND * (1.0 - 1e-6);
        if b(lo) <= 0.0 {
            return Err(Error::NoConvergence(format!(
                "b(13/5) <= 0 at alpha = {alpha}, beta = {beta}"
            )));
        }
        lo
    } else {
        let mut t = 1e-3;
        while b(t) <= 0.0 {
            t *= 1.5;
            if t > 1e6 {
                return Err(Error::NoConvergence(format!(
                    "no positive b(t) found at alpha = {alpha}, beta = {beta}"
                )));
            }
        }
        t
    };
    let mut hi = 2.0 * lo;
    while b(hi) >= 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoConvergence(format!(
                "no negative b(t) found at alpha = {alpha}, beta = {beta}"
            )));
        }
    }
    let (lo, hi) = bisect(&b, lo, hi, 1.0).ok_or_else(|| {
        Error::NoConvergence(format!("c1 bisection at alpha = {alpha}, beta = {beta}"))
    })?;
    let c1 = polish(&b, 0.5 * (lo + hi), lo, hi);
    let residual = b(c1);
    if residual.abs() > SADDLE_RESIDUAL_TOL {
        return Err(Error::NoConvergence(format!(
            "saddle residual {residual:e} at alpha = {alpha}, beta = {beta}"
        )));
    }
    Ok(SaddleSolution {
        alpha: Scale::Finite(alpha),
        beta: Scale::Finite(beta),
        c1,
        c2: lambda * c1,
        a: c1 / alpha,
        residual,
        proven,
    })
}

/// `g(alpha, beta)`, the positive root of
/// `g^2 = Li2(1-e^{-alpha g}) + Li2(1-e^{-beta g}) - Li2(1-e^{-(alpha+beta) g})`.
pub fn solve_g(alpha: Scale, beta: Scale, regime: Regime) -> Result<f64> {
    let s = solve_c(alpha, beta, regime)?;
    let g = s.a;
    let (c1, c2) = (alpha.as_f64() * g, beta.as_f64() * g);
    let rhs = a_squared_dilog_form(c1, c2)?;
    let residual = g * g - rhs;
    if residual.abs() > G_RESIDUAL_TOL {
        return Err(Error::NoConvergence(format!(
            "g residual {residual:e} at alpha = {alpha}, beta = {beta}"
        )));
    }
    Ok(g)
}
