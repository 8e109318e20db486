//! Special functions behind the t and F tail probabilities.

use crate::error::{Error, Result};

/// Convergence tolerance for the incomplete beta continued fraction.
pub const BETA_CF_TOLERANCE: f64 = 1e-14;

/// Iteration cap for the incomplete beta continued fraction.
pub const BETA_CF_MAX_ITER: usize = 300;

const TINY: f64 = 1e-300;

// Lanczos approximation, g = 7, n = 9.
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
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    incomplete_beta_split(a, b, x, 1.0 - x)
}

/// `I_x(a, b)` with the complement `y = 1 - x` supplied by the caller, so that
/// callers who can form `1 - x` without cancellation keep full precision.
pub(crate) fn incomplete_beta_split(a: f64, b: f64, x: f64, y: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!(
            "incomplete beta needs a, b > 0 (a = {a}, b = {b})"
        )));
    }
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain(format!(
            "incomplete beta needs 0 <= x <= 1 (x = {x})"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if y == 0.0 {
        return Ok(1.0);
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        Ok(1.0 - beta_cf_term(b, a, y, x)?)
    } else {
        beta_cf_term(a, b, x, y)
    }
}

/// `x^a y^b / (a B(a,b))` times the continued fraction, evaluated with the
/// modified Lentz method.
fn beta_cf_term(a: f64, b: f64, x: f64, y: f64) -> Result<f64> {
    let ln_front = a * x.ln() + b * y.ln() - ln_beta(a, b);
    let front = ln_front.exp() / a;

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

    for m in 1..=BETA_CF_MAX_ITER {
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
        let delta = d * c;
        h *= delta;

        if (delta - 1.0).abs() < BETA_CF_TOLERANCE {
            return Ok(front * h);
        }
    }
    Err(Error::Domain(format!(
        "incomplete beta continued fraction did not converge (a = {a}, b = {b}, x = {x})"
    )))
}

/// Two-sided Student-t tail probability `P(|T| >= |t|)`.
pub fn p_value_t(t: f64, df: u32) -> Result<f64> {
    if df == 0 {
        return Err(Error::Domain("t distribution needs df >= 1".into()));
    }
    if !t.is_finite() {
        return Err(Error::Domain(format!(
            "t statistic must be finite, got {t}"
        )));
    }
    let nu = df as f64;
    let t2 = t * t;
    let denom = nu + t2;
    incomplete_beta_split(0.5 * nu, 0.5, nu / denom, t2 / denom).map(clamp_probability)
}

/// Upper-tail probability `P(F >= f)` of the F distribution.
pub fn p_value_f(f: f64, df1: u32, df2: u32) -> Result<f64> {
    if df1 == 0 || df2 == 0 {
        return Err(Error::Domain("F distribution needs df1, df2 >= 1".into()));
    }
    if f.is_nan() || f < 0.0 {
        return Err(Error::Domain(format!("F statistic must be >= 0, got {f}")));
    }
    if f.is_infinite() {
        return Ok(0.0);
    }
    let (d1, d2) = (df1 as f64, df2 as f64);
    let scaled = d1 * f;
    let denom = d2 + scaled;
    incomplete_beta_split(0.5 * d2, 0.5 * d1, d2 / denom, scaled / denom).map(clamp_probability)
}

/// Two-sided critical value: the `t >= 0` with `p_value_t(t, df) = alpha`.
pub fn t_critical(alpha: f64, df: u32) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while p_value_t(hi, df)? > alpha {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Domain("critical value out of range".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if p_value_t(mid, df)? > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn clamp_probability(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-14);
        assert!((ln_gamma(2.0)).abs() < 1e-14);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
        // 170! fits in f64
        let ln_fact: f64 = (1..170).map(|k| (k as f64).ln()).sum();
        assert!((ln_gamma(170.0) - ln_fact).abs() / ln_fact < 1e-14);
    }

    #[test]
    fn incomplete_beta_closed_forms() {
        // I_x(1, 1) = x
        for &x in &[0.1, 0.5, 0.9] {
            assert!((regularized_incomplete_beta(1.0, 1.0, x).unwrap() - x).abs() < 1e-14);
        }
        // I_x(a, 1) = x^a
        assert!((regularized_incomplete_beta(3.0, 1.0, 0.4).unwrap() - 0.064).abs() < 1e-14);
        // I_x(1, b) = 1 - (1 - x)^b
        let v = regularized_incomplete_beta(1.0, 4.0, 0.3).unwrap();
        assert!((v - (1.0 - 0.7f64.powi(4))).abs() < 1e-14);
        // symmetry I_x(a, b) = 1 - I_{1-x}(b, a)
        let lhs = regularized_incomplete_beta(2.5, 7.0, 0.35).unwrap();
        let rhs = 1.0 - regularized_incomplete_beta(7.0, 2.5, 0.65).unwrap();
        assert!((lhs - rhs).abs() < 1e-13);
        assert_eq!(regularized_incomplete_beta(2.0, 3.0, 0.0).unwrap(), 0.0);
        assert_eq!(regularized_incomplete_beta(2.0, 3.0, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn incomplete_beta_domain() {
        assert!(regularized_incomplete_beta(0.0, 1.0, 0.5).is_err());
        assert!(regularized_incomplete_beta(1.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn t_tail_cauchy_case() {
        // df = 1 is Cauchy: P(|T| >= t) = 1 - 2 atan(t) / pi
        for &t in &[0.5f64, 1.0, 3.0, 10.0] {
            let exact = 1.0 - 2.0 * f64::atan(t) / std::f64::consts::PI;
            assert!((p_value_t(t, 1).unwrap() - exact).abs() < 1e-13, "t = {t}");
        }
        // df = 2: P(|T| >= t) = 1 - t / sqrt(2 + t^2)
        for &t in &[0.3f64, 2.0, 7.5] {
            let exact = 1.0 - t / (2.0 + t * t).sqrt();
            assert!((p_value_t(t, 2).unwrap() - exact).abs() < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn t_tail_edges() {
        assert_eq!(p_value_t(0.0, 5).unwrap(), 1.0);
        assert_eq!(p_value_t(-2.0, 5).unwrap(), p_value_t(2.0, 5).unwrap());
        assert!(p_value_t(1.0, 0).is_err());
        assert!(p_value_t(f64::NAN, 3).is_err());
        assert!(p_value_t(f64::INFINITY, 3).is_err());
    }

    #[test]
    fn f_tail_edges() {
        assert_eq!(p_value_f(0.0, 3, 9).unwrap(), 1.0);
        assert!(p_value_f(-1.0, 1, 1).is_err());
        assert!(p_value_f(1.0, 0, 1).is_err());
        assert_eq!(p_value_f(f64::INFINITY, 1, 17).unwrap(), 0.0);
        // F(2, d2) upper tail = (1 + 2f/d2)^(-d2/2)
        let f: f64 = 3.2;
        let exact = (1.0 + 2.0 * f / 12.0).powf(-6.0);
        assert!((p_value_f(f, 2, 12).unwrap() - exact).abs() < 1e-13);
    }

    #[test]
    fn f_t_duality() {
        let t: f64 = 2.5;
        let pt = p_value_t(t, 17).unwrap();
        let pf = p_value_f(t * t, 1, 17).unwrap();
        assert!((pt - pf).abs() <= 1e-8 * pt);
    }

    #[test]
    fn critical_values() {
        // textbook two-sided 5% values
        assert!((t_critical(0.05, 17).unwrap() - 2.109_815_577_833_18).abs() < 1e-9);
        assert!((t_critical(0.05, 1).unwrap() - 12.706_204_736_174_7).abs() < 1e-8);
        assert!(t_critical(0.0, 5).is_err());
        assert!(t_critical(1.0, 5).is_err());
    }
}
