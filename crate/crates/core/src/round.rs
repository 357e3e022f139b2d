//! Outward rounding for quantities that feed inequalities.

/// Steps of one ulp taken in each direction; covers the few-ulp error of
/// libm transcendental functions.
const ULPS: u32 = 4;

/// Round an upper bound away from the true value.
pub fn up(x: f64) -> f64 {
    (0..ULPS).fold(x, |v, _| v.next_up())
}

/// Round a lower bound away from the true value.
pub fn down(x: f64) -> f64 {
    (0..ULPS).fold(x, |v, _| v.next_down())
}

/// Relative tolerance used when comparing transcendental evaluations.
pub const COMPARISON_TOLERANCE: f64 = 1e-9;
