//! Unit conversions used at the edges of the crate. Everything inside is SI.

/// Exact conversion factor used throughout: 1 psi = 6894.757 Pa.
pub const PA_PER_PSI: f64 = 6894.757;

/// Pounds per square inch to pascal.
pub fn psi(value: f64) -> f64 {
    value * PA_PER_PSI
}

/// Pascal to pounds per square inch.
pub fn to_psi(pascal: f64) -> f64 {
    pascal / PA_PER_PSI
}

pub fn mm(value: f64) -> f64 {
    value / 1000.0
}

pub fn mpa(value: f64) -> f64 {
    value * 1e6
}
