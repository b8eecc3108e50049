//! Non-regularized incomplete beta function.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
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

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Complete beta function `B(a, b)`.
pub fn beta_fn(a: f64, b: f64) -> f64 {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

const MAX_ITER: usize = 300;
const EPS: f64 = 1e-14;
const TINY: f64 = 1e-300;

/// Continued fraction for the incomplete beta, modified Lentz method.
fn continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    check(x, a, b)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let ln_front = a * x.ln() + b * (1.0 - x).ln() - (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
    Ok(if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * continued_fraction(x, a, b) / a
    } else {
        1.0 - ln_front.exp() * continued_fraction(1.0 - x, b, a) / b
    })
}

/// `B(x; a, b) = ∫_0^x t^(a-1) (1-t)^(b-1) dt`.
pub fn incomplete_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    check(x, a, b)?;
    let full = beta_fn(a, b);
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(full);
    }
    let front = (a * x.ln() + b * (1.0 - x).ln()).exp();
    Ok(if x < (a + 1.0) / (a + b + 2.0) {
        front * continued_fraction(x, a, b) / a
    } else {
        full - front * continued_fraction(1.0 - x, b, a) / b
    })
}

fn check(x: f64, a: f64, b: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "incomplete beta argument {x} outside [0, 1]"
        )));
    }
    if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
        return Err(Error::Domain(format!(
            "beta shape parameters ({a}, {b}) must be positive"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_integers() {
        let mut fact = 1.0f64;
        for n in 1..20 {
            assert!((ln_gamma(n as f64) - fact.ln()).abs() < 1e-13, "n = {n}");
            fact *= n as f64;
        }
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn closed_forms() {
        assert!((incomplete_beta(0.5, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((incomplete_beta(0.5, 2.0, 2.0).unwrap() - 1.0 / 12.0).abs() < 1e-14);
        assert!((incomplete_beta(1.0, 2.0, 2.0).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        assert_eq!(incomplete_beta(0.0, 3.0, 2.0).unwrap(), 0.0);
        // ∫_0^x t^2 dt
        let x = 0.3f64;
        assert!((incomplete_beta(x, 3.0, 1.0).unwrap() - x.powi(3) / 3.0).abs() < 1e-14);
        // ∫_0^x (1-t) dt
        assert!((incomplete_beta(x, 1.0, 2.0).unwrap() - (x - x * x / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn regularized_symmetry() {
        for &(x, a, b) in &[(0.2, 2.0, 3.0), (0.7, 0.5, 5.0), (0.5, 1.0, 1.0)] {
            let l = regularized_incomplete_beta(x, a, b).unwrap();
            let r = regularized_incomplete_beta(1.0 - x, b, a).unwrap();
            assert!((l + r - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn monotone_in_x() {
        let mut prev = 0.0;
        for k in 0..=200 {
            let v = incomplete_beta(k as f64 / 200.0, 2.0, 5.0).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn rejects_domain() {
        assert!(incomplete_beta(1.5, 2.0, 2.0).is_err());
        assert!(incomplete_beta(-0.1, 2.0, 2.0).is_err());
        assert!(incomplete_beta(0.5, 0.0, 2.0).is_err());
        assert!(incomplete_beta(f64::NAN, 2.0, 2.0).is_err());
    }
}
