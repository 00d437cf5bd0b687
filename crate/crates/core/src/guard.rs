//! Enumeration guards.
//!
//! Every exhaustive enumeration in the crate checks its size against a fixed
//! limit before it starts. The environment variable `SRR_GUARD_SCALE` (a
//! positive number, default 1) multiplies all limits.

use once_cell::sync::Lazy;

use crate::error::{Error, Result};

static SCALE: Lazy<f64> = Lazy::new(|| {
    std::env::var("SRR_GUARD_SCALE")
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|s| s.is_finite() && *s > 0.0)
        .unwrap_or(1.0)
});

pub const CODEWORDS: u128 = 1 << 24;
pub const PROJECTIVE_POINTS: u128 = 1 << 20;
pub const SUBSETS: u128 = 1 << 20;
pub const KNAPSACK_DIM: u128 = 24;
pub const FM_CONSTRAINTS: u128 = 50_000;
pub const DD_RAYS: u128 = 200_000;
pub const ONE_SHOT_NODES: u128 = 5_000_000;
pub const MDS_SUBSETS: u128 = 1 << 22;

/// The scaled value of a base limit.
pub fn limit(base: u128) -> u128 {
    let scaled = (base as f64) * *SCALE;
    if scaled >= u128::MAX as f64 {
        u128::MAX
    } else {
        scaled.max(1.0) as u128
    }
}

/// Fails with `TooLarge` when `size` exceeds the scaled `base` limit.
pub fn check(module: &'static str, what: &'static str, size: u128, base: u128) -> Result<()> {
    let limit = limit(base);
    if size > limit {
        Err(Error::TooLarge {
            module,
            what,
            size,
            limit,
        })
    } else {
        Ok(())
    }
}
