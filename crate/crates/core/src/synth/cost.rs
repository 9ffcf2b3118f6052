//! Closed-form CX counts for SELECT: multiplexor compilation versus unary iteration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `2^k (2n + 1) − n − 2`.
pub fn multiplexor_cost(k: u32, n: u32) -> i64 {
    (1i64 << k) * (2 * n as i64 + 1) - n as i64 - 2
}

/// `2^{k−1} (4n + 17) − 31`, defined for `k ≥ 2`, `n ≥ 1`.
pub fn unary_iteration_cost(k: u32, n: u32) -> Result<i64> {
    if k < 2 || n < 1 {
        return Err(Error::Domain(format!(
            "unary iteration cost needs k >= 2 and n >= 1, got k={k}, n={n}"
        )));
    }
    Ok((1i64 << (k - 1)) * (4 * n as i64 + 17) - 31)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossoverRow {
    pub k: u32,
    pub n: u32,
    pub multiplexor: i64,
    pub unary: i64,
    pub multiplexor_cheaper: bool,
}

/// Both formulas on every `(k, n)` in the given ranges.
pub fn crossover_table(ks: std::ops::RangeInclusive<u32>, ns: std::ops::RangeInclusive<u32>) -> Result<Vec<CrossoverRow>> {
    let mut rows = Vec::new();
    for k in ks {
        for n in ns.clone() {
            let multiplexor = multiplexor_cost(k, n);
            let unary = unary_iteration_cost(k, n)?;
            rows.push(CrossoverRow {
                k,
                n,
                multiplexor,
                unary,
                multiplexor_cheaper: multiplexor < unary,
            });
        }
    }
    Ok(rows)
}

/// Largest `n` in `1..=n_max` for which the multiplexor is cheaper at every
/// `n' ≤ n`, or `None` if it is not cheaper at `n = 1`.
pub fn crossover_n(k: u32, n_max: u32) -> Result<Option<u32>> {
    let mut last = None;
    for n in 1..=n_max {
        if multiplexor_cost(k, n) < unary_iteration_cost(k, n)? {
            last = Some(n);
        } else {
            break;
        }
    }
    Ok(last)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        assert_eq!(multiplexor_cost(4, 5), 169);
        assert_eq!(unary_iteration_cost(4, 5).unwrap(), 265);
        assert_eq!(multiplexor_cost(4, 20), 634);
        assert_eq!(unary_iteration_cost(4, 20).unwrap(), 745);
        assert_eq!(multiplexor_cost(4, 13), 417);
        assert_eq!(unary_iteration_cost(4, 13).unwrap(), 521);
        assert!(unary_iteration_cost(1, 3).is_err());
        assert!(unary_iteration_cost(3, 0).is_err());
    }
}
