use crate::{real, Real};

/// Sub-bin offset of a spectral peak from a three-point parabola through the
/// log-magnitudes at bins `k - 1`, `k`, `k + 1`.
///
/// Returns a value in `[-0.5, 0.5]`; a flat (degenerate) triple gives `0`.
pub fn interpolate_peak<T: Real>(left: T, center: T, right: T) -> T {
    let half: T = real(0.5);
    let denom = left - center - center + right;
    if !denom.is_finite() || denom == T::zero() {
        return T::zero();
    }
    let delta = half * (left - right) / denom;
    if !delta.is_finite() {
        return T::zero();
    }
    delta.max(-half).min(half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn symmetric_triple() {
        assert_eq!(interpolate_peak(1.0, 2.0, 1.0), 0.0);
    }

    #[test]
    fn right_shoulder() {
        assert_eq!(interpolate_peak(1.0, 2.0, 2.0), 0.5);
    }

    #[test]
    fn left_shoulder() {
        assert_eq!(interpolate_peak(2.0, 2.0, 1.0), -0.5);
    }

    #[test]
    fn flat_triple() {
        assert_eq!(interpolate_peak(3.0f32, 3.0, 3.0), 0.0);
    }

    #[test]
    fn recovers_parabola_vertex() {
        // samples of -(x - 0.3)^2 at -1, 0, 1
        let f = |x: f64| -(x - 0.3) * (x - 0.3);
        let d = interpolate_peak(f(-1.0), f(0.0), f(1.0));
        assert!((d - 0.3).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn stays_in_half_bin(l in -50.0..50.0f64, r in -50.0..50.0f64, lift in 0.0..10.0f64) {
            let c = l.max(r) + lift;
            let d = interpolate_peak(l, c, r);
            prop_assert!((-0.5..=0.5).contains(&d));
        }
    }
}
