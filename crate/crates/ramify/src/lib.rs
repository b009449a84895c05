//! Higher ramification, Herbrand functions and class-field ranks for
//! p-extensions with ramification of bounded depth.
//!
//! Everything here is exact: indices are rationals, bounds are kept as
//! factored powers, and group structures come from enumeration followed by
//! Smith normal form.

pub mod abelian;
pub mod arith;
pub mod bounds;
pub mod classfield;
mod error;
pub mod herbrand;
pub mod localfields;
pub mod ramgroups;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;

use std::sync::OnceLock;

/// Default cap on the size of any finite ring or group that gets enumerated.
pub const DEFAULT_GUARD: u64 = 10_000_000;

/// Enumeration cap, overridable through the `RAMIFY_GUARD` environment
/// variable. Raising it is unsafe in the sense that nothing stops a
/// computation from exhausting memory.
pub fn enumeration_guard() -> u64 {
    static GUARD: OnceLock<u64> = OnceLock::new();
    *GUARD.get_or_init(|| {
        std::env::var("RAMIFY_GUARD")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_GUARD)
    })
}

pub(crate) fn check_guard(what: &str, size: u128) -> Result<()> {
    let limit = enumeration_guard() as u128;
    if size > limit {
        return Err(Error::Guard {
            what: what.to_string(),
            size,
            limit,
        });
    }
    Ok(())
}
