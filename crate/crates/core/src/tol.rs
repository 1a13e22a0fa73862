//! Floating-point comparisons at the crate-wide relative tolerance.

/// Relative tolerance for distance and weight comparisons.
pub const REL_TOL: f64 = 1e-9;

/// `a <= b` up to relative error.
pub fn le(a: f64, b: f64) -> bool {
    if a <= b {
        return true;
    }
    a.is_finite() && b.is_finite() && a - b <= REL_TOL * a.abs().max(b.abs())
}

pub fn approx_eq(a: f64, b: f64) -> bool {
    le(a, b) && le(b, a)
}

/// `ceil(x)` for nonnegative `x`, treating values within relative error of
/// an integer as that integer.
pub fn ceil(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= REL_TOL * x.abs().max(1.0) {
        r as usize
    } else {
        x.ceil() as usize
    }
}

/// `floor(x)` for nonnegative `x`, with the same snapping as [`ceil`].
pub fn floor(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= REL_TOL * x.abs().max(1.0) {
        r as usize
    } else {
        x.floor() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerant_comparisons() {
        assert!(le(1.0 + 1e-12, 1.0));
        assert!(!le(1.0 + 1e-6, 1.0));
        assert!(le(0.0, 0.0));
        assert!(approx_eq(0.1 + 0.2, 0.3));
        assert!(le(f64::INFINITY, f64::INFINITY));
        assert!(!le(f64::INFINITY, 1.0));
        assert_eq!(ceil(0.1 * 30.0), 3);
        assert_eq!(ceil(2.5), 3);
        assert_eq!(floor(1.0 / 0.1), 10);
        assert_eq!(floor(2.9999999999999996), 3);
    }
}
