//! Process-wide size cap for relation tables.
//!
//! A relation of arity `t` over `|A|` elements occupies `|A|^t` slots. The cap
//! is expressed in binary positions: at most `2^max_positions` slots. The
//! default is 24 and `QCSP_MAX_POSITIONS` overrides it at first use.

use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_POSITIONS: u32 = 24;

static OVERRIDE: AtomicU32 = AtomicU32::new(0);
static FROM_ENV: OnceLock<u32> = OnceLock::new();

pub fn max_positions() -> u32 {
    let o = OVERRIDE.load(Ordering::Relaxed);
    if o != 0 {
        return o;
    }
    *FROM_ENV.get_or_init(|| {
        std::env::var("QCSP_MAX_POSITIONS")
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .filter(|&v| (1..=40).contains(&v))
            .unwrap_or(DEFAULT_MAX_POSITIONS)
    })
}

/// Sets the cap for the whole process. Values outside `1..=40` are rejected.
pub fn set_max_positions(bits: u32) -> Result<()> {
    if !(1..=40).contains(&bits) {
        return Err(Error::InvalidArgument(format!(
            "max positions must be in 1..=40, got {bits}"
        )));
    }
    OVERRIDE.store(bits, Ordering::Relaxed);
    Ok(())
}

pub fn max_slots() -> u64 {
    1u64 << max_positions()
}

/// Number of slots of a table with `arity` coordinates over `size` elements,
/// or a capacity error naming `what`.
pub fn slots(size: usize, arity: usize, what: &str) -> Result<usize> {
    let limit = max_slots();
    let mut n: u64 = 1;
    for _ in 0..arity {
        n = n.saturating_mul(size as u64);
        if n > limit {
            return Err(Error::Capacity {
                what: what.to_string(),
                size: format!("{size}^{arity} slots"),
                limit: format!("2^{} slots", max_positions()),
            });
        }
    }
    Ok(n as usize)
}
