//! Exact vs asymptotic comparison along a ray `N = alpha sqrt(n)`, `M = beta sqrt(n)`.

use rayon::prelude::*;

use pncount::asymptotics::{FormulaRegistry, Query};
use pncount::cache::CountCache;
use pncount::saddle::{Regime, Scale};
use pncount::{Error, Result};

use crate::output::Record;
use crate::{exact_count, Bound};

pub const COLUMNS: &[&str] = &[
    "n",
    "N",
    "M",
    "log_exact",
    "log_estimate",
    "ratio_minus_one",
    "n^{-1/4}",
    "alpha_realized",
    "beta_realized",
    "formula",
];

/// `round(scale * sqrt(n))`, ties away from zero.
pub fn side_for(scale: Scale, n: u64) -> Result<Bound> {
    match scale {
        Scale::Infinite => Ok(None),
        Scale::Finite(s) => {
            let side = (s * (n as f64).sqrt() + 0.5).floor();
            if side < 1.0 || side >= u64::MAX as f64 {
                return Err(Error::Domain(format!("side {side} for scale {s} at n = {n} is out of range")));
            }
            Ok(Some(side as u64))
        }
    }
}

fn realized(side: Bound, n: u64) -> f64 {
    side.map_or(f64::INFINITY, |v| v as f64 / (n as f64).sqrt())
}

fn row(
    alpha: Scale,
    beta: Scale,
    n: u64,
    formula: &str,
    regime: Regime,
    registry: &FormulaRegistry,
    cache: &CountCache,
) -> Result<Record> {
    let max_part = side_for(alpha, n)?;
    let max_len = side_for(beta, n)?;
    let est = registry.estimate(formula, &Query::new(n, max_part, max_len), regime)?;
    let exact = exact_count(cache, n, max_part, max_len)?;
    if exact.is_zero() {
        return Err(Error::Degenerate(format!("no partitions of {n} fit the box")));
    }
    let log_exact = exact.ln();
    Ok(Record::new()
        .push("n", n)
        .push("N", max_part)
        .push("M", max_len)
        .push("log_exact", log_exact)
        .push("log_estimate", est.log_value)
        .push("ratio_minus_one", (log_exact - est.log_value).exp_m1())
        .push("n^{-1/4}", (n as f64).powf(-0.25))
        .push("alpha_realized", realized(max_part, n))
        .push("beta_realized", realized(max_len, n))
        .push("formula", est.formula.name()))
}

/// One row per `n`, in input order; rows are computed in parallel.
pub fn convergence_table(
    alpha: Scale,
    beta: Scale,
    n_list: &[u64],
    formula: &str,
    regime: Regime,
    cache: &CountCache,
) -> Result<Vec<Record>> {
    let registry = FormulaRegistry::default();
    if registry.get(formula).is_none() {
        return Err(Error::Domain(format!(
            "unknown formula {formula:?}; known: {}",
            registry.names().join(", ")
        )));
    }
    n_list
        .par_iter()
        .map(|&n| row(alpha, beta, n, formula, regime, &registry, cache))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::Value;

    #[test]
    fn rounding_ties_up() {
        assert_eq!(side_for(Scale::Finite(4.0), 625).unwrap(), Some(100));
        assert_eq!(side_for(Scale::Finite(0.25), 4).unwrap(), Some(1));
        assert_eq!(side_for(Scale::Finite(1.25), 4).unwrap(), Some(3));
        assert_eq!(side_for(Scale::Infinite, 9).unwrap(), None);
        assert!(side_for(Scale::Finite(0.1), 4).is_err());
    }

    #[test]
    fn rows_keep_input_order() {
        let cache = CountCache::new();
        let rows = convergence_table(Scale::Finite(4.0), Scale::Finite(4.0), &[400, 100, 225], "theorem1", Regime::Strict, &cache)
            .unwrap();
        let ns: Vec<_> = rows.iter().map(|r| r.get("n").cloned()).collect();
        assert_eq!(ns, vec![Some(Value::Int(400)), Some(Value::Int(100)), Some(Value::Int(225))]);
        assert_eq!(cache.len(), 3);
    }
}
