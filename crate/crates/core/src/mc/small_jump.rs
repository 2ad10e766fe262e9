use crate::estimators::ThresholdSpec;

/// Leading-order second moment of the Variance Gamma jumps that survive
/// the threshold, `T eps^2 / b` with `eps = 2 sqrt(r(h))`.
///
/// Near zero the VG Levy density behaves like `1 / (b |x|)`, so
/// `int_{|x| <= eps} x^2 nu(dx) ~ eps^2 / b`.
pub fn small_jump_bias_bound(gamma_var: f64, threshold: &ThresholdSpec, h: f64, horizon: f64) -> f64 {
    let eps = 2.0 * threshold.evaluate(h).sqrt();
    horizon * eps * eps / gamma_var
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_scale_value() {
        let spec = ThresholdSpec::power_law(0.99);
        let h = 1.0 / 6000.0;
        let eps = 2.0 * spec.evaluate(h).sqrt();
        assert!((eps - 0.0270).abs() < 5e-4, "eps = {eps}");
        let b = small_jump_bias_bound(0.23, &spec, h, 1.0);
        assert!((b - 3.2e-3).abs() < 1e-4, "bound = {b}");
    }

    #[test]
    fn vanishes_in_the_limits() {
        let spec = ThresholdSpec::power_law(0.99);
        let mut prev = f64::INFINITY;
        for h in [1e-2, 1e-4, 1e-6, 1e-8] {
            let b = small_jump_bias_bound(0.23, &spec, h, 1.0);
            assert!(b < prev);
            prev = b;
        }
        assert!(prev < 1e-6);
        let at_large_b = small_jump_bias_bound(1e12, &spec, 1e-3, 1.0);
        assert!(at_large_b < 1e-12);
    }
}
