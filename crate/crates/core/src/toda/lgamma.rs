//! Complex log-Gamma on the branch continuous off the negative real axis,
//! so that `lgamma(z + 1) = lgamma(z) + ln z` with the principal logarithm.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::TodaError;

const G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + k as f64);
    }
    let t = z + G + 0.5;
    HALF_LN_2PI + (z + 0.5) * t.ln() - t + a.ln()
}

/// `ln Γ(z)`. Uses the reflection formula for `Re z < ½`.
pub fn lgamma_complex(z: Complex64) -> Result<Complex64, TodaError> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(TodaError::Pole(format!("Gamma has a pole at {}", z.re)));
    }
    if z.re >= 0.5 {
        return Ok(lanczos(z));
    }
    if z.im < 0.0 {
        return lgamma_complex(z.conj()).map(|v| v.conj());
    }
    // for Im z ≥ 0: ln sin πz = ln(i/2) − iπz + ln(1 − e^{2πiz})
    let w = (Complex64::i() * 2.0 * PI * z).exp();
    let ln_sin = Complex64::new(-std::f64::consts::LN_2, PI / 2.0) - Complex64::i() * PI * z + (1.0 - w).ln();
    Ok(Complex64::new(PI.ln(), 0.0) - ln_sin - lanczos(1.0 - z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn small_values() {
        let v = lgamma_complex(c(0.5, 0.0)).unwrap();
        assert!((v.re - PI.sqrt().ln()).abs() < 1e-14 && v.im.abs() < 1e-15);
        let v = lgamma_complex(c(5.0, 0.0)).unwrap();
        assert!((v.re - 24f64.ln()).abs() < 1e-13);
        assert!(lgamma_complex(c(-3.0, 0.0)).is_err());
        assert!(lgamma_complex(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn negative_real_axis_from_above() {
        // Γ(-1/2) = -2√π
        let v = lgamma_complex(c(-0.5, 0.0)).unwrap();
        assert!((v.re - (2.0 * PI.sqrt()).ln()).abs() < 1e-13);
        assert!((v.im + PI).abs() < 1e-13);
    }
}
