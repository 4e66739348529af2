//! Gamma function via the Lanczos approximation (g = 7, 9 terms).
//!
//! Accurate to roughly 15 significant digits over the arguments used by the
//! Bliss constant formula, which only needs positive real arguments.

const G: f64 = 7.0;
const COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for real `x`, using reflection for `x < 0.5`.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = COEFFS[0];
        for (i, c) in COEFFS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

#[cfg(test)]
mod tests {
    use super::gamma;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn reference_values() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!(rel(gamma(0.5), sqrt_pi) < 1e-13);
        assert!(rel(gamma(1.0), 1.0) < 1e-13);
        assert!(rel(gamma(2.5), 0.75 * sqrt_pi) < 1e-13);
        assert!(rel(gamma(3.0), 2.0) < 1e-13);
        assert!(rel(gamma(10.0), 362_880.0) < 1e-13);
        // Γ(0.1), high-precision reference value
        assert!(rel(gamma(0.1), 9.513_507_698_668_732) < 1e-12);
    }

    #[test]
    fn recurrence() {
        for &x in &[0.3, 1.7, 2.2, 4.9, 6.5] {
            assert!(rel(gamma(x + 1.0), x * gamma(x)) < 1e-13);
        }
    }
}
