use super::MetricError;
use crate::Scalar;

fn check<T: Scalar>(alpha: T, beta: T) -> Result<(), MetricError> {
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(MetricError::AlphaOutOfRange(alpha.to_f64_lossy()));
    }
    if !(beta >= T::zero() && beta < T::one()) {
        return Err(MetricError::BetaOutOfRange(beta.to_f64_lossy()));
    }
    Ok(())
}

/// Relative improvement of IoU `alpha` over the starting IoU `beta`, scaled
/// to [-1, 1]: gains are measured against the remaining headroom and losses
/// against what there was to lose.
pub fn rice<T: Scalar>(alpha: T, beta: T) -> Result<T, MetricError> {
    check(alpha, beta)?;
    Ok(if alpha >= beta {
        (alpha - beta) / (T::one() - beta)
    } else {
        alpha / beta - T::one()
    })
}

/// Derivative of [`rice`] in `alpha`; undefined where `alpha == beta`.
pub fn rice_slope<T: Scalar>(alpha: T, beta: T) -> Result<T, MetricError> {
    check(alpha, beta)?;
    if alpha == beta {
        return Err(MetricError::AtKink(beta.to_f64_lossy()));
    }
    Ok(if alpha > beta {
        T::one() / (T::one() - beta)
    } else {
        T::one() / beta
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fixed_values() {
        assert!((rice(0.91f64, 0.90).unwrap() - 0.10).abs() < 1e-12);
        assert!((rice(0.21f64, 0.20).unwrap() - 0.0125).abs() < 1e-15);
        assert_eq!(rice(0.3f64, 0.0).unwrap(), 0.3);
        assert_eq!(rice(0.0f64, 0.6).unwrap(), -1.0);
        assert_eq!(rice(1.0f64, 0.6).unwrap(), 1.0);
        assert_eq!(rice_slope(0.7f64, 0.5).unwrap(), 2.0);
        assert_eq!(rice_slope(0.3f64, 0.5).unwrap(), 2.0);
        assert!((rice(0.91f32, 0.90).unwrap() - 0.10).abs() < 1e-5);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(rice(0.5f64, 1.0), Err(MetricError::BetaOutOfRange(_))));
        assert!(matches!(rice(0.5f64, -0.1), Err(MetricError::BetaOutOfRange(_))));
        assert!(matches!(rice(1.1f64, 0.5), Err(MetricError::AlphaOutOfRange(_))));
        assert!(matches!(rice(f64::NAN, 0.5), Err(MetricError::AlphaOutOfRange(_))));
        assert!(matches!(rice_slope(0.4f64, 0.4), Err(MetricError::AtKink(_))));
    }

    proptest! {
        #[test]
        fn bounded_and_signed(a in 0.0f64..=1.0, b in 0.0f64..0.999) {
            let r = rice(a, b).unwrap();
            prop_assert!((-1.0..=1.0).contains(&r));
            prop_assert_eq!(r.partial_cmp(&0.0), a.partial_cmp(&b));
        }

        #[test]
        fn zero_at_beta(b in 0.0f64..0.999) {
            prop_assert_eq!(rice(b, b).unwrap(), 0.0);
        }

        #[test]
        fn strictly_increasing(a1 in 0.0f64..=1.0, a2 in 0.0f64..=1.0, b in 0.001f64..0.999) {
            prop_assume!(a1 < a2);
            prop_assert!(rice(a1, b).unwrap() < rice(a2, b).unwrap());
        }

        #[test]
        fn continuous_at_kink(b in 0.01f64..0.99) {
            let h = 1e-9;
            prop_assert!(rice(b - h, b).unwrap().abs() < 1e-6);
            prop_assert!(rice(b + h, b).unwrap().abs() < 1e-6);
        }

        #[test]
        fn fixed_gain_scores_higher_on_better_start(d in 0.001f64..0.1, b1 in 0.0f64..0.85, b2 in 0.0f64..0.85) {
            prop_assume!(b1 < b2);
            prop_assert!(rice(b1 + d, b1).unwrap() < rice(b2 + d, b2).unwrap());
        }

        #[test]
        fn slope_matches_finite_differences(a in 0.01f64..0.99, b in 0.01f64..0.99) {
            let h = 1e-7;
            prop_assume!((a - b).abs() > 2.0 * h);
            let fd = (rice(a + h, b).unwrap() - rice(a - h, b).unwrap()) / (2.0 * h);
            prop_assert!((fd - rice_slope(a, b).unwrap()).abs() < 1e-6);
        }
    }
}
