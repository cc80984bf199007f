//! Asymptotic estimates of `p_n(N, M)` in natural-log space.
//!
//! Each formula implements [`AsymptoticFormula`] and is looked up by name in a
//! [`FormulaRegistry`]. The registry also carries `auto`, which picks the
//! formula whose hypotheses cover the instance (see [`best_estimate`]).
//!
//! Values are never exponentiated internally: `e^{sqrt(n) K}` leaves the
//! double range near `n = 10^4`.

use std::f64::consts::{LN_10, PI};
use std::fmt;

use statrs::function::gamma::ln_gamma;

use crate::dilog::{boundary_term, l_integral, li2_unchecked, ZETA2};
use crate::error::{Error, Result};
use crate::exact::PartitionBounds;
use crate::saddle::{solve_c, solve_rho, Regime, SaddleSolution, Scale};

pub const NOTE_COMPLEMENT: &str = "complement-transformed";
pub const NOTE_UNPROVEN: &str = "outside proven regime";

/// Which closed-form estimate produced a [`LogEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaTag {
    Theorem1,
    Szekeres,
    HardyRamanujan,
    Takacs,
    /// Degenerate instance with exactly one partition.
    Exact,
}

impl FormulaTag {
    pub fn name(&self) -> &'static str {
        match self {
            FormulaTag::Theorem1 => "theorem1",
            FormulaTag::Szekeres => "szekeres",
            FormulaTag::HardyRamanujan => "hardy_ramanujan",
            FormulaTag::Takacs => "takacs",
            FormulaTag::Exact => "exact",
        }
    }
}

impl fmt::Display for FormulaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `log_value = exponent_part + log_prefactor`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogEstimate {
    pub log_value: f64,
    pub exponent_part: f64,
    pub log_prefactor: f64,
    pub formula: FormulaTag,
    pub regime_note: String,
}

impl LogEstimate {
    pub fn new(exponent_part: f64, log_prefactor: f64, formula: FormulaTag) -> Self {
        Self {
            log_value: exponent_part + log_prefactor,
            exponent_part,
            log_prefactor,
            formula,
            regime_note: String::new(),
        }
    }

    fn with_note(mut self, note: &str) -> Self {
        if note.is_empty() {
            return self;
        }
        if !self.regime_note.is_empty() {
            self.regime_note.push_str("; ");
        }
        self.regime_note.push_str(note);
        self
    }

    /// Decimal rendering `d.ddddde<exp>` with `digits` digits after the point.
    pub fn to_scientific(&self, digits: usize) -> String {
        let log10 = self.log_value / LN_10;
        let mut exp = log10.floor();
        let mut mantissa = 10f64.powf(log10 - exp);
        if format!("{mantissa:.digits$}").starts_with("10") {
            mantissa /= 10.0;
            exp += 1.0;
        }
        format!("{mantissa:.digits$}e{}", exp as i64)
    }
}

/// One side of the box; `None` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Query {
    pub n: u64,
    pub max_part: Option<u64>,
    pub max_len: Option<u64>,
}

impl Query {
    pub fn new(n: u64, max_part: Option<u64>, max_len: Option<u64>) -> Self {
        Self { n, max_part, max_len }
    }

    pub fn bounded(b: PartitionBounds) -> Self {
        Self::new(b.n, Some(b.max_part), Some(b.max_len))
    }

    fn scale(&self, side: Option<u64>) -> Scale {
        match side {
            Some(v) => Scale::Finite(v as f64 / (self.n as f64).sqrt()),
            None => Scale::Infinite,
        }
    }
}

/// Estimate of `p_n(N, M)` under some asymptotic regime.
pub trait AsymptoticFormula: Send + Sync {
    fn name(&self) -> &'static str;

    fn estimate(&self, query: &Query, regime: Regime) -> Result<LogEstimate>;
}

/// Formulas selectable by name.
pub struct FormulaRegistry {
    formulas: Vec<Box<dyn AsymptoticFormula>>,
}

impl Default for FormulaRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Theorem1));
        r.register(Box::new(Szekeres));
        r.register(Box::new(HardyRamanujan));
        r.register(Box::new(Takacs));
        r.register(Box::new(Auto));
        r
    }
}

impl FormulaRegistry {
    pub fn empty() -> Self {
        Self { formulas: Vec::new() }
    }

    /// Add a formula; a later registration under the same name wins.
    pub fn register(&mut self, formula: Box<dyn AsymptoticFormula>) {
        self.formulas.retain(|f| f.name() != formula.name());
        self.formulas.push(formula);
    }

    pub fn get(&self, name: &str) -> Option<&dyn AsymptoticFormula> {
        self.formulas.iter().find(|f| f.name() == name).map(|f| f.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.formulas.iter().map(|f| f.name()).collect()
    }

    pub fn estimate(&self, name: &str, query: &Query, regime: Regime) -> Result<LogEstimate> {
        let formula = self.get(name).ok_or_else(|| {
            Error::Domain(format!(
                "unknown formula {name:?}; known: {}",
                self.names().join(", ")
            ))
        })?;
        formula.estimate(query, regime)
    }
}

fn require_positive_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("asymptotic formulas need n >= 1".into()));
    }
    Ok(())
}

/// `log(1 - e^{-c})`, zero for `c = +inf`.
fn log1m_exp_neg(c: f64) -> f64 {
    (-(-c).exp()).ln_1p()
}

/// `c * log(1 - e^{-c})`, zero for `c = +inf`.
fn c_log1m_exp_neg(c: f64) -> f64 {
    if c.is_infinite() {
        0.0
    } else {
        c * log1m_exp_neg(c)
    }
}

/// `K(alpha, beta) = g + (pi^2/6 + Li2(e^{-(alpha+beta) g}) - Li2(e^{-alpha g}) - Li2(e^{-beta g})) / g`.
pub fn k_of(s: &SaddleSolution) -> f64 {
    let g = s.a;
    let (a, b) = (s.alpha.as_f64(), s.beta.as_f64());
    let li = |x: f64| li2_unchecked((-x).exp());
    g + (ZETA2 + li((a + b) * g) - li(a * g) - li(b * g)) / g
}

/// `K` through the logarithmic form of the same bracket:
/// `2A + (c1 log((1-e^{-c1-c2})/(1-e^{-c1})) + c2 log((1-e^{-c1-c2})/(1-e^{-c2}))) / A`.
pub fn k_of_log_form(s: &SaddleSolution) -> f64 {
    let sum = s.c1 + s.c2;
    let term = |c: f64| {
        if c.is_infinite() {
            0.0
        } else {
            c * (log1m_exp_neg(sum) - log1m_exp_neg(c))
        }
    };
    2.0 * s.a + (term(s.c1) + term(s.c2)) / s.a
}

/// `L = 2g^2 + ((a+b)g)^2/(e^{(a+b)g}-1) - (ag)^2/(e^{ag}-1) - (bg)^2/(e^{bg}-1)`.
pub fn l_of(s: &SaddleSolution) -> f64 {
    let g = s.a;
    let (a, b) = (s.alpha.as_f64(), s.beta.as_f64());
    2.0 * g * g + boundary_term((a + b) * g) - boundary_term(a * g) - boundary_term(b * g)
}

/// `L = int_0^{c1} x^2 e^x/(e^x-1)^2 dx - int_{c2}^{c1+c2} x^2 e^x/(e^x-1)^2 dx`.
pub fn l_of_integral_form(s: &SaddleSolution) -> Result<f64> {
    let head = l_integral(0.0, s.c1)?;
    let tail = if s.c2.is_infinite() {
        0.0
    } else {
        l_integral(s.c2, s.c1 + s.c2)?
    };
    Ok(head - tail)
}

/// `log sqrt((1-e^{-(c1+c2)}) / ((1-e^{-c1})(1-e^{-c2})))`.
pub fn log_sqrt_ratio(s: &SaddleSolution) -> f64 {
    0.5 * (log1m_exp_neg(s.c1 + s.c2) - log1m_exp_neg(s.c1) - log1m_exp_neg(s.c2))
}

fn side_label(side: Option<u64>) -> String {
    side.map_or_else(|| "inf".to_owned(), |v| v.to_string())
}

/// `min(side) >= 4 sqrt(n)` without rounding.
fn covers(side: Option<u64>, n: u64) -> bool {
    side.is_none_or(|v| u128::from(v) * u128::from(v) >= 16 * u128::from(n))
}

/// Generalized estimate for `N, M >= 4 sqrt(n)`; either side may be unbounded.
pub fn theorem1_query(q: &Query, regime: Regime) -> Result<LogEstimate> {
    require_positive_n(q.n)?;
    if q.max_part == Some(0) || q.max_len == Some(0) {
        return Err(Error::Degenerate(format!("p_{}(0, _) = 0", q.n)));
    }
    let proven = covers(q.max_part, q.n) && covers(q.max_len, q.n);
    if regime == Regime::Strict && !proven {
        return Err(Error::Hypothesis(format!(
            "theorem1 needs N, M >= 4 sqrt(n) = {:.6}, got N = {}, M = {}",
            4.0 * (q.n as f64).sqrt(),
            side_label(q.max_part),
            side_label(q.max_len)
        )));
    }
    let s = solve_c(q.scale(q.max_part), q.scale(q.max_len), regime)?;
    let n = q.n as f64;
    let exponent = n.sqrt() * k_of(&s);
    let l = l_of(&s);
    let prefactor = 2.0 * s.a.ln() - (2.0 * PI).ln() - 0.5 * l.ln() + log_sqrt_ratio(&s) - n.ln();
    let est = LogEstimate::new(exponent, prefactor, FormulaTag::Theorem1);
    Ok(if proven { est } else { est.with_note(NOTE_UNPROVEN) })
}

pub fn theorem1_estimate(n: u64, max_part: u64, max_len: u64) -> Result<LogEstimate> {
    theorem1_query(&Query::new(n, Some(max_part), Some(max_len)), Regime::Strict)
}

/// Smallest `alpha = N / sqrt(n)` accepted by the part-bounded formula in strict mode.
pub const SZEKERES_MIN_ALPHA: f64 = 1.0;

/// Part-bounded estimate of `p_n(N)` for `N / sqrt(n)` bounded below.
pub fn szekeres_estimate_with(n: u64, max_part: u64, regime: Regime) -> Result<LogEstimate> {
    require_positive_n(n)?;
    if max_part == 0 {
        return Err(Error::Degenerate(format!("p_{n}(0) = 0")));
    }
    let nf = n as f64;
    let alpha = max_part as f64 / nf.sqrt();
    let floor_ok = u128::from(max_part) * u128::from(max_part) >= u128::from(n);
    if regime == Regime::Strict && !floor_ok {
        return Err(Error::Hypothesis(format!(
            "szekeres needs N / sqrt(n) >= {SZEKERES_MIN_ALPHA}, got {alpha}"
        )));
    }
    let rho = solve_rho(alpha)?.rho;
    let decay = (-alpha * rho).exp();
    let exponent = (2.0 * rho - c_log1m_exp_neg(alpha * rho) / rho) * nf.sqrt();
    let inner = 1.0 - (0.5 * alpha * alpha + 1.0) * decay;
    if inner <= 0.0 {
        return Err(Error::Domain(format!(
            "szekeres prefactor undefined at alpha = {alpha} (1 - (alpha^2/2 + 1) e^(-alpha rho) = {inner})"
        )));
    }
    let prefactor = rho.ln() - (2f64.powf(1.5) * PI * nf).ln() - 0.5 * inner.ln();
    let est = LogEstimate::new(exponent, prefactor, FormulaTag::Szekeres);
    Ok(if floor_ok { est } else { est.with_note(NOTE_UNPROVEN) })
}

pub fn szekeres_estimate(n: u64, max_part: u64) -> Result<LogEstimate> {
    szekeres_estimate_with(n, max_part, Regime::Strict)
}

/// `p_n ~ exp(pi sqrt(2n/3)) / (4 sqrt(3) n)`.
pub fn hardy_ramanujan_estimate(n: u64) -> Result<LogEstimate> {
    require_positive_n(n)?;
    let nf = n as f64;
    let exponent = PI * (2.0 * nf / 3.0).sqrt();
    let prefactor = -(4.0 * 3f64.sqrt() * nf).ln();
    Ok(LogEstimate::new(exponent, prefactor, FormulaTag::HardyRamanujan))
}

/// `log C(a + b, a)` via log-gamma.
pub fn ln_binomial(a: u64, b: u64) -> f64 {
    let (a, b) = (a as f64, b as f64);
    ln_gamma(a + b + 1.0) - ln_gamma(a + 1.0) - ln_gamma(b + 1.0)
}

/// Central-limit estimate near `n = NM/2`.
pub fn takacs_estimate(n: u64, max_part: u64, max_len: u64) -> Result<LogEstimate> {
    if max_part == 0 || max_len == 0 {
        return Err(Error::Domain("takacs needs N, M >= 1".into()));
    }
    let (nf, mf) = (max_part as f64, max_len as f64);
    let box_var = nf * mf * (nf + mf + 1.0);
    let deviation = n as f64 - 0.5 * nf * mf;
    let exponent = ln_binomial(max_part, max_len) - 6.0 * deviation * deviation / box_var;
    let prefactor = 0.5 * (6.0 / (PI * box_var)).ln();
    Ok(LogEstimate::new(exponent, prefactor, FormulaTag::Takacs))
}

/// Pick a formula whose hypotheses cover `(n, N, M)`.
///
/// The instance is first reduced to the half of the box with `n <= NM/2`
/// (complement otherwise) and to `N <= M`. Then: Theorem 1 if
/// `N >= 4 sqrt(n)`; the part-bounded formula if the length bound is
/// inactive (`M >= n`) and `N >= sqrt(n)`; Takács otherwise.
pub fn best_estimate(n: u64, max_part: u64, max_len: u64) -> Result<LogEstimate> {
    let b = PartitionBounds::new(n, max_part, max_len);
    let area = b.area();
    if u128::from(n) > area {
        return Err(Error::Degenerate(format!("{b} = 0: n exceeds N*M = {area}")));
    }
    if n == 0 || u128::from(n) == area {
        return Ok(LogEstimate::new(0.0, 0.0, FormulaTag::Exact).with_note("single partition"));
    }
    let (half, note) = if 2 * u128::from(n) > area {
        (b.complement().expect("n <= NM checked above"), NOTE_COMPLEMENT)
    } else {
        (b, "")
    };
    let (small, large) = if half.max_part <= half.max_len {
        (half.max_part, half.max_len)
    } else {
        (half.max_len, half.max_part)
    };
    let m = half.n;
    let est = if covers(Some(small), m) {
        theorem1_query(&Query::new(m, Some(small), Some(large)), Regime::Strict)?
    } else if large >= m && u128::from(small) * u128::from(small) >= u128::from(m) {
        szekeres_estimate(m, small)?.with_note("length bound inactive")
    } else {
        takacs_estimate(m, small, large)?
    };
    Ok(est.with_note(note))
}

fn best_estimate_query(q: &Query) -> Result<LogEstimate> {
    match (q.max_part, q.max_len) {
        (Some(a), Some(b)) => best_estimate(q.n, a, b),
        (None, None) => hardy_ramanujan_estimate(q.n),
        (Some(side), None) | (None, Some(side)) => {
            if covers(Some(side), q.n) {
                theorem1_query(q, Regime::Strict)
            } else {
                szekeres_estimate(q.n, side)
            }
        }
    }
}

pub struct Theorem1;
pub struct Szekeres;
pub struct HardyRamanujan;
pub struct Takacs;
/// Regime-selecting front end over the other four.
pub struct Auto;

impl AsymptoticFormula for Theorem1 {
    fn name(&self) -> &'static str {
        "theorem1"
    }

    fn estimate(&self, q: &Query, regime: Regime) -> Result<LogEstimate> {
        theorem1_query(q, regime)
    }
}

impl AsymptoticFormula for Szekeres {
    fn name(&self) -> &'static str {
        "szekeres"
    }

    fn estimate(&self, q: &Query, regime: Regime) -> Result<LogEstimate> {
        // p_n(N, M) = p_n(M, N): the bounded side plays the part-size role
        let side = match (q.max_part, q.max_len) {
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => q.n.max(1),
            (Some(a), Some(b)) => {
                if b >= q.n {
                    a
                } else if a >= q.n {
                    b
                } else {
                    return Err(Error::Hypothesis(format!(
                        "szekeres needs one side unbounded or >= n, got N = {a}, M = {b}"
                    )));
                }
            }
        };
        szekeres_estimate_with(q.n, side, regime)
    }
}

impl AsymptoticFormula for HardyRamanujan {
    fn name(&self) -> &'static str {
        "hardy_ramanujan"
    }

    fn estimate(&self, q: &Query, _regime: Regime) -> Result<LogEstimate> {
        let inactive = |side: Option<u64>| side.is_none_or(|v| v >= q.n);
        if !(inactive(q.max_part) && inactive(q.max_len)) {
            return Err(Error::Hypothesis(
                "hardy_ramanujan counts unrestricted partitions; both bounds must be absent or >= n".into(),
            ));
        }
        hardy_ramanujan_estimate(q.n)
    }
}

impl AsymptoticFormula for Takacs {
    fn name(&self) -> &'static str {
        "takacs"
    }

    fn estimate(&self, q: &Query, _regime: Regime) -> Result<LogEstimate> {
        match (q.max_part, q.max_len) {
            (Some(a), Some(b)) => takacs_estimate(q.n, a, b),
            _ => Err(Error::Hypothesis("takacs needs both N and M bounded".into())),
        }
    }
}

impl AsymptoticFormula for Auto {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn estimate(&self, q: &Query, _regime: Regime) -> Result<LogEstimate> {
        best_estimate_query(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{count_exact, count_part_bounded, count_unrestricted};
    use crate::saddle::{rho_infinity, C_LOWER_BOUND};

    fn fin(v: f64) -> Scale {
        Scale::Finite(v)
    }

    fn ratio_minus_one(exact_ln: f64, est: &LogEstimate) -> f64 {
        (exact_ln - est.log_value).exp() - 1.0
    }

    #[test]
    fn k_and_l_at_infinity() {
        let s = solve_c(Scale::Infinite, Scale::Infinite, Regime::Strict).unwrap();
        assert!((k_of(&s) - PI * (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
        assert!((k_of(&s) - 2.0 * rho_infinity()).abs() < 1e-14);
        assert!((l_of(&s) - PI * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn k_and_l_with_one_side_unbounded() {
        for alpha in [4.0, 7.0, 20.0] {
            let s = solve_c(fin(alpha), Scale::Infinite, Regime::Strict).unwrap();
            let rho = s.a;
            let k_remark = 2.0 * rho - alpha * (1.0 - (-alpha * rho).exp()).ln();
            assert!((k_of(&s) - k_remark).abs() < 1e-12);
            assert!((k_of_log_form(&s) - k_remark).abs() < 1e-12);
            let l_remark = 2.0 * rho * rho * (1.0 - alpha * alpha / (2.0 * (alpha * rho).exp_m1()));
            assert!((l_of(&s) - l_remark).abs() < 1e-12);
            assert!((l_of_integral_form(&s).unwrap() - l_remark).abs() < 1e-12);
        }
    }

    #[test]
    fn k_routes_agree_at_4_4() {
        let s = solve_c(fin(4.0), fin(4.0), Regime::Strict).unwrap();
        let (k1, k2) = (k_of(&s), k_of_log_form(&s));
        assert!((k1 - k2).abs() < 1e-10, "{k1} vs {k2}");
        assert!(2.0 * s.a <= k1 && k1 <= s.a + PI * PI / (3.0 * s.a));
        let (l1, l2) = (l_of(&s), l_of_integral_form(&s).unwrap());
        assert!(l1 > 0.0);
        assert!((l1 - l2).abs() <= 1e-9 * l1);
    }

    #[test]
    fn sqrt_ratio_bounds() {
        let lo = 0.5 * (1.0 - (-2.0 * C_LOWER_BOUND).exp()).ln();
        let hi = -(1.0 - (-C_LOWER_BOUND).exp()).ln();
        for (a, b) in [(4.0, 4.0), (4.0, 50.0), (10.0, 12.0)] {
            let s = solve_c(fin(a), fin(b), Regime::Strict).unwrap();
            let r = log_sqrt_ratio(&s);
            assert!(lo <= r && r <= hi);
        }
    }

    #[test]
    fn hardy_ramanujan_values() {
        let e = hardy_ramanujan_estimate(1).unwrap();
        assert!((e.log_value - (PI * (2.0f64 / 3.0).sqrt() - (4.0 * 3f64.sqrt()).ln())).abs() < 1e-15);
        assert!((e.log_value - 0.629_499_154_869_782_8).abs() < 1e-15);
        assert!((e.log_value.exp() - 1.876_670_422_605_369).abs() < 1e-14);
        let p100 = count_unrestricted(100).unwrap().ln();
        let r = (hardy_ramanujan_estimate(100).unwrap().log_value - p100).exp();
        assert!(r > 1.0 && r < 1.1, "{r}");
        assert!(hardy_ramanujan_estimate(0).is_err());
        let p10k = count_unrestricted(10_000).unwrap().ln();
        let r10k = (p10k - hardy_ramanujan_estimate(10_000).unwrap().log_value).exp() - 1.0;
        assert!(r10k.abs() < 0.03 && r10k.abs() < r - 1.0);
    }

    #[test]
    fn theorem1_approaches_hardy_ramanujan() {
        let n = 1_000_000;
        let t = theorem1_estimate(n, n, n).unwrap();
        let h = hardy_ramanujan_estimate(n).unwrap();
        assert!((t.log_value - h.log_value).abs() < 1e-2);
    }

    #[test]
    fn theorem1_with_huge_side_matches_szekeres() {
        let t = theorem1_estimate(10_000, 400, 1_000_000_000).unwrap();
        let s = szekeres_estimate(10_000, 400).unwrap();
        assert!((t.log_value - s.log_value).abs() < 1e-3);
        for big_n in [400, 800, 1600] {
            let t = theorem1_query(&Query::new(10_000, Some(big_n), None), Regime::Strict).unwrap();
            let s = szekeres_estimate(10_000, big_n).unwrap();
            assert!((t.log_value - s.log_value).abs() < 1e-9);
        }
    }

    #[test]
    fn theorem1_vs_exact_at_400() {
        let exact = count_exact(PartitionBounds::new(10_000, 400, 400)).unwrap().ln();
        let est = theorem1_estimate(10_000, 400, 400).unwrap();
        assert!(ratio_minus_one(exact, &est).abs() < 0.1);
        assert_eq!(est.log_value, est.exponent_part + est.log_prefactor);
    }

    #[test]
    fn takacs_at_center() {
        let e = takacs_estimate(50, 10, 10).unwrap();
        let want = ln_binomial(10, 10) + 0.5 * (6.0 / (PI * 100.0 * 21.0)).ln();
        assert!((e.log_value - want).abs() < 1e-12);
        assert!((ln_binomial(10, 10) - 184_756f64.ln()).abs() < 1e-12);
        let exact = count_exact(PartitionBounds::new(5000, 100, 100)).unwrap().ln();
        let est = takacs_estimate(5000, 100, 100).unwrap();
        assert!(ratio_minus_one(exact, &est).abs() < 0.1);        for n in [4500, 5500] {
            let exact = count_exact(PartitionBounds::new(n, 100, 100)).unwrap().ln();
            assert!(ratio_minus_one(exact, &takacs_estimate(n, 100, 100).unwrap()).abs() < 0.15);
        }
    }

    #[test]
    fn szekeres_vs_exact() {
        let exact = count_part_bounded(2500, 100).unwrap().ln();
        let est = szekeres_estimate(2500, 100).unwrap();
        assert!(ratio_minus_one(exact, &est).abs() < 0.1);
        assert!(matches!(szekeres_estimate(100, 9), Err(Error::Hypothesis(_))));
        let p10k = count_unrestricted(10_000).unwrap().ln();
        let est = szekeres_estimate(10_000, 10_000).unwrap();
        assert!(ratio_minus_one(p10k, &est).abs() < 0.05);
    }

    #[test]
    fn theorem1_strict_hypothesis() {
        assert!(matches!(theorem1_estimate(100, 39, 100), Err(Error::Hypothesis(_))));
        assert!(theorem1_estimate(100, 40, 40).is_ok());
        let loose = theorem1_query(&Query::new(100, Some(20), Some(30)), Regime::Permissive).unwrap();
        assert!(loose.regime_note.contains(NOTE_UNPROVEN));
    }

    #[test]
    fn best_estimate_policy() {
        assert_eq!(best_estimate(100, 10, 10).unwrap().log_value, 0.0);
        assert_eq!(best_estimate(0, 10, 10).unwrap().log_value, 0.0);
        assert!(matches!(best_estimate(101, 10, 10), Err(Error::Degenerate(_))));
        let a = best_estimate(10_000, 400, 400).unwrap();
        assert_eq!(a, theorem1_estimate(10_000, 400, 400).unwrap());
        for (n, big_n, big_m) in [(30, 40, 50), (1_970, 40, 50), (700, 40, 50), (13, 2, 30), (1000, 60, 20)] {
            let x = best_estimate(n, big_n, big_m).unwrap();
            let y = best_estimate(big_n * big_m - n, big_m, big_n).unwrap();
            assert_eq!(x.log_value, y.log_value, "({n}, {big_n}, {big_m})");
        }
        let c = best_estimate(1_970, 40, 50).unwrap();
        assert!(c.regime_note.contains(NOTE_COMPLEMENT));
        assert_eq!(c.formula, FormulaTag::Theorem1);
    }

    #[test]
    fn registry_lookup() {
        let r = FormulaRegistry::default();
        assert_eq!(r.names(), vec!["theorem1", "szekeres", "hardy_ramanujan", "takacs", "auto"]);
        let q = Query::new(10_000, Some(400), Some(400));
        let a = r.estimate("theorem1", &q, Regime::Strict).unwrap();
        let b = r.estimate("auto", &q, Regime::Strict).unwrap();
        assert_eq!(a, b);
        assert!(r.estimate("nope", &q, Regime::Strict).is_err());
        let hr = r.estimate("hardy_ramanujan", &Query::new(50, None, None), Regime::Strict).unwrap();
        assert_eq!(hr.formula, FormulaTag::HardyRamanujan);
    }

    #[test]
    fn scientific_rendering() {
        let e = LogEstimate::new(190_569_292f64.ln(), 0.0, FormulaTag::Exact);
        assert_eq!(e.to_scientific(4), "1.9057e8");
        let e = LogEstimate::new(1000.0 * LN_10, 0.0, FormulaTag::Exact);
        assert_eq!(e.to_scientific(3), "1.000e1000");
    }
}
