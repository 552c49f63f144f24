//! Dimension maxima over strictly increasing lower sequences, the closed-form bounds, immersion
//! thresholds, and the stable-range comparison.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `dim Q_J z` over strictly increasing `0 < j_1 < ... < j_s < l`, where
/// `dim Q_j z = 2 dim z + j`. Exhaustive over all subsets of `[1, l-1]`.
pub fn max_generator_dim(l: u32, base_dim: u64) -> Result<u64> {
    if l < 2 || base_dim < 1 {
        return Err(Error::InvalidInput(format!("need l >= 2 and base_dim >= 1 (got l={l}, base_dim={base_dim})")));
    }
    if l > 24 {
        return Err(Error::InvalidInput(format!("l={l} is too large for exhaustive search")));
    }
    let n = l - 1;
    let mut best = base_dim;
    for mask in 0u32..(1 << n) {
        // J read innermost-first: Q_J z = Q_{j_1} Q_{j_2} ... Q_{j_s} z
        let mut d = base_dim;
        for j in (1..=n).rev() {
            if mask >> (j - 1) & 1 == 1 {
                d = 2 * d + j as u64;
            }
        }
        best = best.max(d);
    }
    Ok(best)
}

/// `2^{l-1}(l-1) + 1`.
pub fn max_generator_dim_closed_form(l: u32) -> u64 {
    (1u64 << (l - 1)) * (l as u64 - 1) + 1
}

/// `sum_{i=1}^{k} 2^{i-1} i` against `2^k (k-1) + 1`.
pub fn sum_identity_check(k: u32) -> bool {
    let lhs: u128 = (1..=k as u128).map(|i| (1u128 << (i - 1)) * i).sum();
    let rhs = (1u128 << k) * (k as u128 - 1) + 1;
    lhs == rhs
}

/// `2^l (k+2) + 2^{l-1}(l-2) + 2`.
pub fn bound_main1(l: u32, k: u32) -> i64 {
    let (p, q) = (1i64 << l, 1i64 << (l - 1));
    p * (k as i64 + 2) + q * (l as i64 - 2) + 2
}

/// `2^{l-1} l + 2`.
pub fn bound_s_minus1(l: u32) -> i64 {
    (1i64 << (l - 1)) * l as i64 + 2
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct BoundReport {
    pub l: u32,
    /// `None` for the `S^{-1}` case.
    pub k: Option<u32>,
    pub printed: i64,
    pub oracle: i64,
    pub discrepancy: bool,
}

/// Printed bound and the doubled exhaustive maximum. `k = None` selects `S^{-1}`, whose top
/// class after double suspension sits in dimension 1; otherwise the base is `S^{k+2}`.
pub fn bound_report(l: u32, k: Option<u32>) -> Result<BoundReport> {
    if l < 2 {
        return Err(Error::InvalidInput(format!("l must be at least 2 (got {l})")));
    }
    let (printed, base) = match k {
        None => (bound_s_minus1(l), 1),
        Some(k) => (bound_main1(l, k), k as u64 + 2),
    };
    let oracle = 2 * max_generator_dim(l, base)? as i64;
    Ok(BoundReport {
        l,
        k,
        printed,
        oracle,
        discrepancy: printed != oracle,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ImmersionReport {
    pub d: u32,
    pub k: u32,
    pub bound: i64,
    pub n_min: i64,
    pub oracle_bound: i64,
    pub oracle_n_min: i64,
    pub discrepancy: bool,
}

/// Smallest `n` with `n + k` beyond the bound for loop filtration `d` and `S^k`.
pub fn immersion_threshold(d: u32, k: u32) -> Result<ImmersionReport> {
    if d < 1 || k < 1 {
        return Err(Error::InvalidInput(format!("need d >= 1 and k >= 1 (got d={d}, k={k})")));
    }
    let bound = if k == 1 { bound_s_minus1(d) } else { bound_main1(d, k - 2) };
    let oracle_bound = if d < 2 {
        // no operations below filtration 2: only the bottom class, doubled
        2 * k as i64
    } else {
        let base = if k == 1 { 1 } else { k as u64 };
        2 * max_generator_dim(d, base)? as i64
    };
    Ok(ImmersionReport {
        d,
        k,
        bound,
        n_min: bound - k as i64 + 1,
        oracle_bound,
        oracle_n_min: oracle_bound - k as i64 + 1,
        discrepancy: bound != oracle_bound,
    })
}

/// `d + l < 2(n + l - 1)`.
pub fn stable_range_check(d: i64, n: i64, l: i64) -> bool {
    d + l < 2 * (n + l - 1)
}
