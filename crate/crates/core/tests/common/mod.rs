//! Independent reference computations shared by the integration tests. None
//! of these call into the library's numerical code.

#![allow(dead_code)]

use labmetab::{Crossing, FiscalRecord, Item, LedgerSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use statrs::function::gamma::ln_gamma;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

// ---------------------------------------------------------------------------
// quadrature

fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, a, m);
    let right = simpson(fm, frm, fb, m, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, a, b);
    adaptive(&f, a, b, fa, fm, fb, whole, tol, 60)
}

/// Student-t density.
pub fn t_density(t: f64, df: f64) -> f64 {
    let ln_c =
        ln_gamma(0.5 * (df + 1.0)) - ln_gamma(0.5 * df) - 0.5 * (df * std::f64::consts::PI).ln();
    (ln_c - 0.5 * (df + 1.0) * (1.0 + t * t / df).ln()).exp()
}

/// Two-sided t tail by integrating the density from 0 to |t|.
pub fn oracle_p_t(t: f64, df: f64) -> f64 {
    let t = t.abs();
    // split so the kernel sees several features on long ranges
    let mut mass = 0.0;
    let pieces = 8;
    for k in 0..pieces {
        let a = t * k as f64 / pieces as f64;
        let b = t * (k + 1) as f64 / pieces as f64;
        mass += integrate(|s| t_density(s, df), a, b, 1e-14);
    }
    1.0 - 2.0 * mass
}

/// Upper F tail by integrating the density over `u = sqrt(x)` from 0 to
/// `sqrt(f)`; the substitution removes the `x^(-1/2)` singularity at df1 = 1.
pub fn oracle_p_f(f: f64, df1: f64, df2: f64) -> f64 {
    let ln_b = ln_gamma(0.5 * df1) + ln_gamma(0.5 * df2) - ln_gamma(0.5 * (df1 + df2));
    let ln_k = 0.5 * (df1 * df1.ln() + df2 * df2.ln()) - ln_b;
    let g = |u: f64| {
        let x = u * u;
        let tail = ln_k - 0.5 * (df1 + df2) * (df1 * x + df2).ln();
        2.0 * u.powi(df1 as i32 - 1) * tail.exp()
    };
    let upper = f.sqrt();
    let pieces = 8;
    let mut mass = 0.0;
    for k in 0..pieces {
        let a = upper * k as f64 / pieces as f64;
        let b = upper * (k + 1) as f64 / pieces as f64;
        mass += integrate(g, a, b, 1e-14);
    }
    1.0 - mass
}

/// Two-sided critical value by bisection on the quadrature tail.
pub fn oracle_t_critical(alpha: f64, df: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 200.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if oracle_p_t(mid, df) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------------------
// least squares by search

fn sse(x: &[f64], y: &[f64], x_ref: f64, level: f64, slope: f64) -> f64 {
    x.iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let r = yi - level - slope * (xi - x_ref);
            r * r
        })
        .sum()
}

/// Minimizes the residual sum of squares by repeated grid refinement,
/// starting from the chord through the end points. Returns (intercept, slope).
pub fn brute_force_ls(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len();
    let x_ref = x.iter().sum::<f64>() / n as f64;
    let y_spread = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - y.iter().cloned().fold(f64::INFINITY, f64::min);
    let x_spread = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - x.iter().cloned().fold(f64::INFINITY, f64::min);

    let mut slope = (y[n - 1] - y[0]) / (x[n - 1] - x[0]);
    let mut level = y.iter().sum::<f64>() / n as f64;
    let mut step_level = y_spread.max(1e-300);
    let mut step_slope = (y_spread / x_spread).max(1e-300);
    let half = 5i32;

    for _ in 0..2000 {
        let mut best = (sse(x, y, x_ref, level, slope), 0, 0);
        for i in -half..=half {
            for j in -half..=half {
                let l = level + i as f64 * step_level;
                let s = slope + j as f64 * step_slope;
                let v = sse(x, y, x_ref, l, s);
                if v < best.0 {
                    best = (v, i, j);
                }
            }
        }
        if best.1 == 0 && best.2 == 0 {
            step_level /= 4.0;
            step_slope /= 4.0;
        } else {
            level += best.1 as f64 * step_level;
            slope += best.2 as f64 * step_slope;
        }
        if step_level <= 1e-17 * level.abs().max(y_spread)
            && step_slope <= 1e-17 * slope.abs().max(y_spread / x_spread)
        {
            break;
        }
    }
    (level - slope * x_ref, slope)
}

// ---------------------------------------------------------------------------
// descriptive statistics

/// (mean, sample sd) by the two-pass formula.
pub fn two_pass(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let (mx, sx) = two_pass(x);
    let (my, sy) = two_pass(y);
    let n = x.len() as f64;
    let cov: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - mx) * (b - my))
        .sum::<f64>()
        / (n - 1.0);
    cov / (sx * sy)
}

// ---------------------------------------------------------------------------
// crossings

/// Run-based enumeration of crossings of `d = a - b`: every strict sign flip
/// between neighbours, the first year of each interior zero run, and the last
/// year of a zero run when it is longer than one year or starts the series.
pub fn oracle_crossings(years: &[i32], d: &[f64]) -> Vec<Crossing> {
    let n = d.len();
    let mut out = Vec::new();
    let mut k = 0;
    while k < n {
        if d[k] == 0.0 {
            let start = k;
            while k + 1 < n && d[k + 1] == 0.0 {
                k += 1;
            }
            let end = k;
            if start > 0 {
                out.push(Crossing {
                    from_year: years[start - 1],
                    to_year: years[start],
                    at: years[start] as f64,
                });
            }
            if end + 1 < n && (end > start || start == 0) {
                out.push(Crossing {
                    from_year: years[end],
                    to_year: years[end + 1],
                    at: years[end] as f64,
                });
            }
        } else if k + 1 < n && d[k + 1] != 0.0 && (d[k] > 0.0) != (d[k + 1] > 0.0) {
            let frac = d[k] / (d[k] - d[k + 1]);
            out.push(Crossing {
                from_year: years[k],
                to_year: years[k + 1],
                at: years[k] as f64 + frac * (years[k + 1] - years[k]) as f64,
            });
        }
        k += 1;
    }
    out.sort_by_key(|c| (c.from_year, c.to_year));
    out
}

// ---------------------------------------------------------------------------
// synthetic ledgers

/// A plausible EUR ledger for 1997-2015 with every item reported and noisy
/// growth in revenue, personnel and other costs.
pub fn random_ledger(seed: u64) -> LedgerSeries {
    let mut rng = rng(seed);
    let noise = Normal::new(0.0, 0.03).unwrap();
    let revenue_growth = rng.random_range(0.0..0.08);
    let personnel_growth = rng.random_range(0.0..0.10);
    let base_revenue = rng.random_range(5e8..2e9);
    let base_share = rng.random_range(0.3..0.6);
    let records = (1997..=2015)
        .map(|year| {
            let t = (year - 1997) as f64;
            let revenue =
                base_revenue * (1.0 + revenue_growth * t) * (1.0 + noise.sample(&mut rng));
            let personnel = base_revenue
                * base_share
                * (1.0 + personnel_growth * t)
                * (1.0 + noise.sample(&mut rng));
            let salary = 0.7 * personnel;
            let taxes = 0.2 * personnel;
            let severance = 0.06 * personnel;
            let other_personnel = personnel - salary - taxes - severance;
            let materials = rng.random_range(0.05..0.15) * revenue;
            let services = rng.random_range(0.1..0.2) * revenue;
            let leased = rng.random_range(0.01..0.03) * revenue;
            let other = rng.random_range(0.2..0.4) * revenue;
            let total = personnel + materials + services + leased + other;
            let mut r = FiscalRecord::new(year, revenue, personnel, total)
                .with(Item::Salary, salary)
                .with(Item::SocialSecurityTaxes, taxes)
                .with(Item::SeverancePay, severance)
                .with(Item::PersonnelOtherCosts, other_personnel)
                .with(Item::MaterialsAndProducts, materials)
                .with(Item::Services, services)
                .with(Item::LeasedAssetsThirdParties, leased)
                .with(Item::OtherCosts, other);
            r.surplus_or_loss = revenue - total;
            r
        })
        .collect();
    LedgerSeries::new("synthetic", records).unwrap()
}

/// Renders a ledger in the file format, labelling every row with `currency`
/// without converting the numbers.
pub fn ledger_csv_as(ledger: &LedgerSeries, currency: &str) -> String {
    let mut buf = Vec::new();
    labmetab::write_ledger(ledger, &mut buf, b',').unwrap();
    let text = String::from_utf8(buf).unwrap();
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            if i == 0 {
                format!("{line}\n")
            } else {
                format!("{}\n", line.replacen(",EUR,", &format!(",{currency},"), 1))
            }
        })
        .collect()
}
