//! Shared formatting for plot-ready output files.

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Locale-free float with 17 significant digits, enough to round-trip an f64.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}
