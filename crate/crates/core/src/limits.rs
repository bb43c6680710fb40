//! Global resource caps. The element cap can be overridden with the
//! `TRANSCHROME_MAX_ELEMENTS` environment variable or [`set_max_elements`].

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ELEMENTS: usize = 1_000_000;
pub const MAX_COSETS: usize = 100_000;
pub const MAX_AMBIENT_ORDER: usize = 10_000;
pub const ENV_MAX_ELEMENTS: &str = "TRANSCHROME_MAX_ELEMENTS";

// 0 means "not yet read from the environment"
static MAX_ELEMENTS: AtomicUsize = AtomicUsize::new(0);

pub fn max_elements() -> usize {
    match MAX_ELEMENTS.load(Ordering::Relaxed) {
        0 => {
            let cap = std::env::var(ENV_MAX_ELEMENTS)
                .ok()
                .and_then(|s| s.trim().parse::<usize>().ok())
                .filter(|&n| n > 0)
                .unwrap_or(DEFAULT_MAX_ELEMENTS);
            MAX_ELEMENTS.store(cap, Ordering::Relaxed);
            cap
        }
        cap => cap,
    }
}

pub fn set_max_elements(cap: usize) {
    MAX_ELEMENTS.store(cap.max(1), Ordering::Relaxed);
}

pub(crate) fn check(what: &str, count: usize, cap: usize) -> Result<()> {
    if count > cap {
        Err(Error::ResourceLimit(format!("{what}: {count} exceeds cap {cap}")))
    } else {
        Ok(())
    }
}
