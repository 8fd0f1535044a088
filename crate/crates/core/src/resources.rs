//! Logical qubit counts for the solver at industrial problem sizes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResourceError {
    #[error("unknown count must be at least 2, got {0}")]
    TooFewUnknowns(u128),
    #[error("accuracy must lie in (0, 1), got {0}")]
    InvalidAccuracy(f64),
}

/// Register sizes and total qubit count for `N` unknowns at accuracy `ε`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceEstimate {
    pub unknowns: u128,
    pub accuracy: f64,
    /// `⌈log₂ N⌉`.
    pub n: u32,
    /// `⌈2·log₂(1/ε)⌉`.
    pub m: u32,
    /// `n + 4m + 3`.
    pub q_table: u32,
    /// `n + 4m + 4`, counting the dilation qubit.
    pub q_eq: u32,
    pub include_dilation_qubit: bool,
    /// Asymptotic depth, dominated by phase estimation.
    pub depth_order: String,
}

impl ResourceEstimate {
    /// The count selected by `include_dilation_qubit`.
    pub fn total(&self) -> u32 {
        if self.include_dilation_qubit {
            self.q_eq
        } else {
            self.q_table
        }
    }
}

/// `⌈log₂ N⌉` for `N ≥ 2`.
fn ceil_log2(n: u128) -> u32 {
    u128::BITS - (n - 1).leading_zeros()
}

pub fn estimate(unknowns: u128, accuracy: f64, include_dilation_qubit: bool) -> Result<ResourceEstimate, ResourceError> {
    if unknowns < 2 {
        return Err(ResourceError::TooFewUnknowns(unknowns));
    }
    if !(accuracy > 0.0 && accuracy < 1.0) {
        return Err(ResourceError::InvalidAccuracy(accuracy));
    }
    let n = ceil_log2(unknowns);
    let m = (-2.0 * accuracy.log2()).ceil() as u32;
    let q_table = n + 4 * m + 3;
    Ok(ResourceEstimate {
        unknowns,
        accuracy,
        n,
        m,
        q_table,
        q_eq: q_table + 1,
        include_dilation_qubit,
        depth_order: format!("O(1/ε) = O(2^{})", m.div_ceil(2)),
    })
}

/// Unknown counts and accuracies of the reference table.
pub const TABLE_UNKNOWNS: [u128; 4] = [
    1_000_000_000_000,
    10_000_000_000_000_000,
    100_000_000_000_000_000_000,
    1_000_000_000_000_000_000_000_000,
];
pub const TABLE_ACCURACIES: [f64; 2] = [1e-12, 1e-16];

/// Every combination of [`TABLE_UNKNOWNS`] and [`TABLE_ACCURACIES`], unknowns outermost.
pub fn reference_table(include_dilation_qubit: bool) -> Vec<ResourceEstimate> {
    TABLE_UNKNOWNS
        .iter()
        .flat_map(|&n| {
            TABLE_ACCURACIES
                .iter()
                .map(move |&eps| estimate(n, eps, include_dilation_qubit).expect("table entries are valid"))
        })
        .collect()
}

fn power_of_ten(x: u128) -> String {
    let digits = x.to_string();
    let exp = digits.len() - 1;
    if digits[1..].bytes().all(|b| b == b'0') && digits.starts_with('1') && exp > 0 {
        format!("1e{exp}")
    } else {
        digits
    }
}

/// Columns `N | n | ε | m | Q_total`.
pub fn to_markdown(rows: &[ResourceEstimate]) -> String {
    let mut out = String::from("| N | n | ε | m | Q_total |\n|---|---|---|---|---|\n");
    for r in rows {
        let _ = writeln!(
            out,
            "| {} | {} | {:e} | {} | {} |",
            power_of_ten(r.unknowns),
            r.n,
            r.accuracy,
            r.m,
            r.total()
        );
    }
    out
}

/// Header `N,n,epsilon,m,Q_total`.
pub fn to_csv(rows: &[ResourceEstimate]) -> String {
    let mut out = String::from("N,n,epsilon,m,Q_total\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{:e},{},{}", r.unknowns, r.n, r.accuracy, r.m, r.total());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_matches_float_definition() {
        for n in 2u128..5000 {
            assert_eq!(ceil_log2(n), (n as f64).log2().ceil() as u32, "N={n}");
        }
    }

    #[test]
    fn smallest_case() {
        let r = estimate(2, 0.5, false).unwrap();
        assert_eq!((r.n, r.m, r.q_table, r.q_eq), (1, 2, 12, 13));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(estimate(1, 0.1, false), Err(ResourceError::TooFewUnknowns(1)));
        assert!(matches!(estimate(8, 1.0, false), Err(ResourceError::InvalidAccuracy(_))));
        assert!(matches!(estimate(8, 0.0, false), Err(ResourceError::InvalidAccuracy(_))));
        assert!(matches!(estimate(8, f64::NAN, false), Err(ResourceError::InvalidAccuracy(_))));
    }

    #[test]
    fn dilation_flag_selects_total() {
        let r = estimate(1 << 20, 1e-3, true).unwrap();
        assert_eq!(r.total(), r.q_eq);
        assert_eq!(r.q_eq, r.q_table + 1);
    }

    #[test]
    fn markdown_uses_powers_of_ten() {
        let md = to_markdown(&reference_table(false));
        assert!(md.contains("| 1e24 | 80 | 1e-12 | 80 | 403 |"), "{md}");
        assert_eq!(md.lines().count(), 10);
    }

    #[test]
    fn csv_has_one_row_per_estimate() {
        let csv = to_csv(&reference_table(false));
        assert_eq!(csv.lines().count(), 9);
        assert!(csv.lines().nth(1).unwrap().starts_with("1000000000000,40,1e-12,80,363"));
    }
}
