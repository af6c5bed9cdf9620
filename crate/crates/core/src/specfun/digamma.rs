use crate::error::{Error, Result};

/// Arguments below this are shifted upward with `psi(x) = psi(x + 1) - 1/x`.
const SHIFT_THRESHOLD: f64 = 8.0;

/// `B_{2k} / (2k)` for k = 1..=6.
const ASYMPTOTIC: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
];

/// Positive root of digamma, split as `ROOT_HI + ROOT_LO`.
const ROOT_HI: f64 = 1.461_632_144_968_362_2;
const ROOT_LO: f64 = 9.549_995_429_965_697e-17;

/// Taylor coefficients `psi^(k)(x0) / k!`, k = 1..=17, about the root.
const ROOT_TAYLOR: [f64; 17] = [
    0.967_672_245_447_621_2,
    -0.442_763_168_983_592_1,
    0.258_499_760_955_651,
    -0.163_942_705_442_406_52,
    0.107_824_050_691_262_37,
    -0.072_199_561_256_454_71,
    0.048_804_288_164_143_11,
    -0.033_161_126_474_847_36,
    0.022_597_648_232_218_104,
    -0.015_424_765_904_948_96,
    0.010_538_791_616_612_175,
    -0.007_204_534_386_356_869,
    0.004_926_781_395_729_853,
    -0.003_369_801_655_439_328,
    0.002_305_126_326_734_928,
    -0.001_576_936_771_430_197_2,
    0.001_078_825_201_916_296_7,
];

/// Digamma `psi = Gamma' / Gamma` on the positive real axis.
pub fn digamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("digamma needs x > 0, got {x}")));
    }

    let h = (x - ROOT_HI) - ROOT_LO;
    if h.abs() < 0.1 {
        // Near the root the recurrence cancels down to a value that is O(h).
        let mut acc = 0.0;
        for c in ROOT_TAYLOR.iter().rev() {
            acc = acc * h + c;
        }
        return Ok(acc * h);
    }

    let mut x = x;
    let mut shift = 0.0;
    while x < SHIFT_THRESHOLD {
        shift += 1.0 / x;
        x += 1.0;
    }

    let inv2 = 1.0 / (x * x);
    let mut series = 0.0;
    for c in ASYMPTOTIC.iter().rev() {
        series = series * inv2 + c;
    }
    series *= inv2;

    Ok(x.ln() - 0.5 / x - series - shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::EULER_GAMMA;
    use crate::sum::compensated_sum;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    /// Euler's constant from `H_n - ln n` with the Euler-Maclaurin tail
    /// through `n^-8`, independent of `digamma`.
    fn euler_oracle() -> f64 {
        let n = 1000.0_f64;
        let harmonic = compensated_sum((1..=1000).map(|k| 1.0 / k as f64));
        let n2 = n * n;
        harmonic - n.ln() - 1.0 / (2.0 * n) + 1.0 / (12.0 * n2) - 1.0 / (120.0 * n2 * n2)
            + 1.0 / (252.0 * n2 * n2 * n2)
            - 1.0 / (240.0 * n2 * n2 * n2 * n2)
    }

    #[test]
    fn at_one_is_minus_euler_constant() {
        let c = euler_oracle();
        assert!((c - EULER_GAMMA).abs() < 1e-15);
        assert!(rel(digamma(1.0).unwrap(), -c) < 1e-13);
    }

    #[test]
    fn at_one_half() {
        let expected = -euler_oracle() - 2.0 * std::f64::consts::LN_2;
        assert!(rel(digamma(0.5).unwrap(), expected) < 1e-13);

        // psi(1/2) - psi(1) = sum_k [1/(k+1) - 1/(k+1/2)], tail ~ 1/(4K).
        let k_max = 1_000_000;
        let series = compensated_sum((0..k_max).map(|k| {
            let k = k as f64;
            1.0 / (k + 1.0) - 1.0 / (k + 0.5)
        }));
        let tail = -0.5 / (k_max as f64 + 0.75);
        let brute = series + tail;
        let diff = digamma(0.5).unwrap() - digamma(1.0).unwrap();
        assert!((diff - brute).abs() < 1e-10, "{diff} vs {brute}");
    }

    #[test]
    fn unit_step_recurrence() {
        assert!((digamma(2.0).unwrap() - digamma(1.0).unwrap() - 1.0).abs() < 1e-15);
        for &x in &[0.1, 0.5, 1.0, 3.0, 10.0] {
            let lhs = digamma(x + 1.0).unwrap() - digamma(x).unwrap();
            assert!(rel(lhs, 1.0 / x) < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn high_precision_reference_values() {
        // 30-digit reference values.
        let cases = [
            (1e-8, -100_000_000.577_215_65),
            (0.1, -10.423_754_940_411_077),
            (1.4, -0.061_384_544_585_116_146),
            (1.5, 0.036_489_973_978_576_52),
            (2.5, 0.703_156_640_645_243_2),
            (7.9, 2.002_238_487_563_571),
            (8.0, 2.015_641_477_955_61),
            (10.0, 2.251_752_589_066_721),
            (123.456, 4.811_829_323_828_985),
            (1e6, 13.815_510_057_964_19),
        ];
        for (x, expected) in cases {
            let got = digamma(x).unwrap();
            assert!(rel(got, expected) < 1e-13, "psi({x}) = {got}, want {expected}");
        }
    }

    #[test]
    fn vanishes_at_root() {
        assert!(digamma(ROOT_HI).unwrap().abs() < 1e-16);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.5).is_err());
        assert!(digamma(f64::NAN).is_err());
        assert!(digamma(f64::INFINITY).is_err());
    }

    #[test]
    fn residue_class_telescoping() {
        let k_max = 1_000_000u64;
        for p in 1..=12u64 {
            for r in 1..=p {
                let closed = (digamma((r + 1) as f64 / p as f64).unwrap()
                    - digamma(r as f64 / p as f64).unwrap())
                    / p as f64;
                let brute = compensated_sum((0..k_max).map(|k| {
                    let n = (k * p + r) as f64;
                    1.0 / (n * (n + 1.0))
                }));
                let budget = 2.0 / (k_max as f64 * p as f64);
                assert!((closed - brute).abs() <= budget, "P = {p}, r = {r}");
            }
        }
    }
}
