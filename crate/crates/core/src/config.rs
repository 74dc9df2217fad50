/// Default bound on the number of candidates any exhaustive search may visit.
pub const DEFAULT_CAP: u128 = 1 << 20;

/// Environment variable that overrides [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "HERMKQ_CAP";

/// Enumeration guardrails shared by every search in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub candidates: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { candidates: DEFAULT_CAP }
    }
}

impl Caps {
    pub fn new(candidates: u128) -> Self {
        Caps { candidates: candidates.max(1) }
    }

    /// Reads `HERMKQ_CAP`, falling back to the default when unset or unparsable.
    pub fn from_env() -> Self {
        std::env::var(CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u128>().ok())
            .filter(|&c| c > 0)
            .map(Caps::new)
            .unwrap_or_default()
    }

    pub(crate) fn check(&self, what: &str, needed: u128) -> crate::Result<()> {
        if needed > self.candidates {
            Err(crate::Error::CapExceeded { what: what.to_string(), needed, cap: self.candidates })
        } else {
            Ok(())
        }
    }
}

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn pow_saturating(base: u128, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}
