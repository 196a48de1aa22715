//! Complex log-Gamma, digamma and trigamma on the right half-plane.
//!
//! All three use the same scheme: shift the argument upward with the
//! recurrence until `re(z) >= 12`, then sum the Stirling-type asymptotic
//! series through the B₁₄ Bernoulli term. At that shift the first omitted
//! term is below 1e-17 relative, so accuracy is limited by rounding in the
//! recurrence.

use num_complex::Complex64;

use crate::{Error, Result};

/// Euler-Mascheroni constant γ_E.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Apéry's constant ζ(3).
pub const ZETA3: f64 = 1.202_056_903_159_594_2;

const SHIFT_THRESHOLD: f64 = 12.0;

/// B₂ₖ for k = 1..=7.
const BERNOULLI: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

fn check_domain(z: Complex64) -> Result<()> {
    if z.re > 0.0 && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { re: z.re, im: z.im })
    }
}

/// Number of unit shifts needed to bring `re(z)` to the asymptotic region.
fn shift_count(z: Complex64) -> u32 {
    if z.re >= SHIFT_THRESHOLD {
        0
    } else {
        (SHIFT_THRESHOLD - z.re).ceil() as u32
    }
}

/// Logarithm of the Gamma function, continued analytically from the
/// positive real axis (the convention of `loggamma` in most libraries,
/// which can leave the principal strip of the imaginary part for large
/// `|im z|`; `exp` of the result is always Γ(z)).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    check_domain(z)?;
    let shifts = shift_count(z);
    let mut correction = Complex64::new(0.0, 0.0);
    let mut w = z;
    for _ in 0..shifts {
        correction += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    // Σ B₂ₖ / (2k(2k−1) w^(2k−1)), Horner in 1/w².
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI.iter().enumerate().rev() {
        let two_k = 2.0 * (k as f64 + 1.0);
        series = series * inv2 + b / (two_k * (two_k - 1.0));
    }
    series *= inv;
    let half_ln_two_pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    Ok((w - 0.5) * w.ln() - w + half_ln_two_pi + series - correction)
}

/// Digamma ψ(z) = d/dz log Γ(z).
pub fn digamma(z: Complex64) -> Result<Complex64> {
    check_domain(z)?;
    let shifts = shift_count(z);
    let mut correction = Complex64::new(0.0, 0.0);
    let mut w = z;
    for _ in 0..shifts {
        correction += w.inv();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    // Σ B₂ₖ / (2k w^(2k))
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI.iter().enumerate().rev() {
        let two_k = 2.0 * (k as f64 + 1.0);
        series = series * inv2 + b / two_k;
    }
    series *= inv2;
    Ok(w.ln() - 0.5 * inv - series - correction)
}

/// Trigamma ψ⁽¹⁾(z).
pub fn trigamma(z: Complex64) -> Result<Complex64> {
    check_domain(z)?;
    let shifts = shift_count(z);
    let mut correction = Complex64::new(0.0, 0.0);
    let mut w = z;
    for _ in 0..shifts {
        correction += w.inv() * w.inv();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    // 1/w + 1/(2w²) + Σ B₂ₖ / w^(2k+1)
    let mut series = Complex64::new(0.0, 0.0);
    for b in BERNOULLI.iter().rev() {
        series = series * inv2 + b;
    }
    series *= inv2 * inv;
    Ok(inv + 0.5 * inv2 + series + correction)
}

/// `ln(1 + x)` for complex `x`, accurate when `|x|` is small.
pub fn ln_1p(x: Complex64) -> Complex64 {
    let re = 0.5 * (x.re * (2.0 + x.re) + x.im * x.im).ln_1p();
    let im = x.im.atan2(1.0 + x.re);
    Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel_err(got: Complex64, want: Complex64) -> f64 {
        (got - want).norm() / want.norm()
    }

    // 50-digit values from an independent arbitrary-precision evaluation.
    struct Fixture {
        z: Complex64,
        log_gamma: Complex64,
        digamma: Complex64,
        trigamma: Complex64,
    }

    fn fixtures() -> Vec<Fixture> {
        vec![
            Fixture {
                z: c(1.0, 3.0),
                log_gamma: c(-3.244_144_299_589_756_2, 1.053_350_771_068_613_2),
                digamma: c(1.107_980_710_710_150_9, 1.404_129_680_587_576_2),
                trigamma: c(0.055_555_427_005_690_921, -0.327_009_992_458_345_64),
            },
            Fixture {
                z: c(0.5, 0.25),
                log_gamma: c(0.431_806_248_459_926_96, -0.452_394_549_044_158_81),
                digamma: c(-1.538_161_255_709_235_7, 1.030_119_124_628_79),
                trigamma: c(2.812_511_378_692_710_2, -2.758_492_889_063_780_3),
            },
            Fixture {
                z: c(12.5, -40.0),
                log_gamma: c(-17.471_309_855_517_882, -124.631_762_156_083_54),
                digamma: c(3.731_948_355_227_712_5, -1.279_326_378_862_969_7),
                trigamma: c(0.006_881_611_928_635_230_5, 0.022_936_513_818_960_961),
            },
            Fixture {
                z: c(3.0, 1000.0),
                log_gamma: c(-1552.607_997_564_240_9, 5911.679_186_468_788_2),
                digamma: c(6.907_758_362_306_478_8, 1.568_296_331_794_879_6),
                trigamma: c(2.499_985_000_085e-6, -9.999_938_333_692_998e-4),
            },
            Fixture {
                z: c(0.1, 0.0),
                log_gamma: c(2.252_712_651_734_205_9, 0.0),
                digamma: c(-10.423_754_940_411_076, 0.0),
                trigamma: c(101.433_299_150_792_75, 0.0),
            },
            Fixture {
                z: c(250.0, 7.0),
                log_gamma: c(1128.425_587_489_974_1, 38.637_135_207_592_825),
                digamma: c(5.519_853_000_850_855_4, 0.028_048_716_786_696_528),
                trigamma: c(0.004_004_858_281_812_365, -1.123_604_528_063_283_7e-4),
            },
        ]
    }

    #[test]
    fn log_gamma_integers() {
        // ln 12! and the Stirling terms cancel to a few ulps of 20
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        let lg5 = log_gamma(c(5.0, 0.0)).unwrap();
        assert!((lg5.re - 24f64.ln()).abs() < 1e-14);
        assert_eq!(lg5.im, 0.0);
    }

    #[test]
    fn against_high_precision_fixtures() {
        for f in fixtures() {
            let lg = log_gamma(f.z).unwrap();
            assert!(rel_err(lg, f.log_gamma) < 1e-13, "log_gamma({}) = {lg}", f.z);
            let psi = digamma(f.z).unwrap();
            assert!(rel_err(psi, f.digamma) < 1e-13, "digamma({}) = {psi}", f.z);
            let tri = trigamma(f.z).unwrap();
            assert!(rel_err(tri, f.trigamma) < 1e-12, "trigamma({}) = {tri}", f.z);
        }
    }

    #[test]
    fn exp_log_gamma_matches_gamma_product() {
        // Γ(z+4) = z(z+1)(z+2)(z+3) Γ(z)
        let z = c(0.7, 2.3);
        let lhs = log_gamma(z + 4.0).unwrap().exp();
        let rhs = z * (z + 1.0) * (z + 2.0) * (z + 3.0) * log_gamma(z).unwrap().exp();
        assert!(rel_err(lhs, rhs) < 1e-13);
        // |Γ(iy)|² = π / (y sinh πy) continued to Γ(1+iy) = iy Γ(iy)
        let y = 1.7;
        let g = log_gamma(c(1.0, y)).unwrap().exp();
        let want = PI * y / (PI * y).sinh();
        assert!((g.norm_sqr() - want).abs() / want < 1e-13);
    }

    #[test]
    fn digamma_known_values() {
        let psi1 = digamma(c(1.0, 0.0)).unwrap();
        assert!((psi1.re + EULER_GAMMA).abs() < 1e-15);
        let psi2 = digamma(c(2.0, 0.0)).unwrap();
        assert!((psi2.re - (1.0 - EULER_GAMMA)).abs() < 1e-15);
        let y: f64 = 0.7;
        let im = digamma(c(1.0, y)).unwrap().im;
        let want = -1.0 / (2.0 * y) + 0.5 * PI / (PI * y).tanh();
        assert!((im - want).abs() < 1e-14);
    }

    #[test]
    fn trigamma_known_values() {
        let zeta2 = PI * PI / 6.0;
        assert!((trigamma(c(1.0, 0.0)).unwrap().re - zeta2).abs() < 1e-14);
        assert!((trigamma(c(2.0, 0.0)).unwrap().re - (zeta2 - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn trigamma_matches_digamma_difference_quotient() {
        let z = c(1.0, 2.0);
        let h = 1e-5;
        let fd = (digamma(z + h).unwrap() - digamma(z - h).unwrap()) / (2.0 * h);
        assert!((trigamma(z).unwrap() - fd).norm() < 1e-8);
    }

    #[test]
    fn small_argument_expansion() {
        let z = 1e-4;
        let psi = digamma(c(1.0 + z, 0.0)).unwrap().re;
        assert!((psi - (-EULER_GAMMA + PI * PI / 6.0 * z)).abs() < 1e-7);
    }

    #[test]
    fn rejects_left_half_plane() {
        for z in [c(0.0, 1.0), c(-0.5, 0.0), c(f64::NAN, 0.0)] {
            assert!(matches!(digamma(z), Err(Error::Domain { .. })));
            assert!(log_gamma(z).is_err());
            assert!(trigamma(z).is_err());
        }
    }

    #[test]
    fn ln_1p_small_and_large() {
        let x = c(1e-12, -3e-13);
        assert!(rel_err(ln_1p(x), x - x * x / 2.0) < 1e-15);
        let x = c(2.0, 1.5);
        assert!(rel_err(ln_1p(x), (x + 1.0).ln()) < 1e-15);
    }
}
