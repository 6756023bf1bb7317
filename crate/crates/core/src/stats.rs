//! Statistical harness: chi-square goodness of fit, total variation and
//! Kolmogorov-Smirnov statistics.
//!
//! p-values are computed from the regularized incomplete gamma function
//! implemented here (series + continued fraction, converged to ~1e-14), so
//! the acceptance suites carry no external statistics dependency.

use crate::error::{Error, Result};

/// Outcome of a uniformity check over a finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleReport {
    pub group_id: String,
    pub support_size: usize,
    pub draws: u64,
    pub chi_square: f64,
    pub dof: usize,
    pub p_value: f64,
    pub tv_estimate: f64,
}

/// Pearson chi-square of observed counts against the uniform null.
///
/// `counts` must cover the full support, including elements observed zero
/// times. Requires at least 5 draws per support element.
pub fn chi_square_uniform(group_id: &str, counts: &[u64]) -> Result<SampleReport> {
    let support = counts.len();
    if support < 2 {
        return Err(Error::InvalidParameter(
            "chi-square needs a support of at least 2".into(),
        ));
    }
    let draws: u64 = counts.iter().sum();
    let min = 5 * support as u64;
    if draws < min {
        return Err(Error::UndersampledSupport {
            support,
            min,
            got: draws,
        });
    }
    let expected = draws as f64 / support as f64;
    let chi_square = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum::<f64>();
    let dof = support - 1;
    Ok(SampleReport {
        group_id: group_id.to_owned(),
        support_size: support,
        draws,
        chi_square,
        dof,
        p_value: chi_square_sf(chi_square, dof as f64),
        tv_estimate: tv_distance_uniform(counts),
    })
}

/// Total variation distance between the empirical distribution and the
/// uniform distribution on the same support: half the L1 distance.
pub fn tv_distance_uniform(counts: &[u64]) -> f64 {
    let draws: u64 = counts.iter().sum();
    assert!(draws > 0, "tv_distance_uniform requires at least one draw");
    let n = draws as f64;
    let p = 1.0 / counts.len() as f64;
    0.5 * counts
        .iter()
        .map(|&c| (c as f64 / n - p).abs())
        .sum::<f64>()
}

/// Two-sample chi-square for homogeneity of two count vectors over the same
/// support. Cells empty in both samples are dropped (reducing the degrees of
/// freedom). Returns (statistic, dof, p-value).
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> Result<(f64, usize, f64)> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::InvalidParameter(
            "two-sample chi-square needs matching supports of size >= 2".into(),
        ));
    }
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    if na == 0 || nb == 0 {
        return Err(Error::InvalidParameter(
            "two-sample chi-square needs non-empty samples".into(),
        ));
    }
    let ka = ((nb as f64) / (na as f64)).sqrt();
    let kb = 1.0 / ka;
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        if x + y == 0 {
            continue;
        }
        cells += 1;
        let d = ka * x as f64 - kb * y as f64;
        stat += d * d / (x + y) as f64;
    }
    let dof = cells.saturating_sub(1).max(1);
    Ok((stat, dof, chi_square_sf(stat, dof as f64)))
}

/// One-sample Kolmogorov-Smirnov statistic against a reference CDF.
/// Sorts the sample in place.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    assert!(!samples.is_empty());
    samples.sort_by(|x, y| x.partial_cmp(y).expect("NaN in KS sample"));
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max(((i + 1) as f64 / n - f).abs());
        d = d.max((f - i as f64 / n).abs());
    }
    d
}

/// Two-sample Kolmogorov-Smirnov statistic. Sorts both samples in place.
pub fn ks2_statistic(a: &mut [f64], b: &mut [f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    a.sort_by(|x, y| x.partial_cmp(y).expect("NaN in KS sample"));
    b.sort_by(|x, y| x.partial_cmp(y).expect("NaN in KS sample"));
    let (na, nb) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < na && j < nb {
        let x = a[i].min(b[j]);
        while i < na && a[i] <= x {
            i += 1;
        }
        while j < nb && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na as f64 - j as f64 / nb as f64).abs());
    }
    d
}

/// Asymptotic two-sample KS p-value (Kolmogorov distribution with the
/// Stephens small-sample correction).
pub fn ks2_p_value(d: f64, na: usize, nb: usize) -> f64 {
    let en = ((na * nb) as f64 / (na + nb) as f64).sqrt();
    kolmogorov_sf((en + 0.12 + 0.11 / en) * d)
}

/// Survival function of the Kolmogorov distribution,
/// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.3 {
        // The alternating series converges too slowly here; use the theta
        // transform of the CDF instead.
        let t = std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let mut cdf = 0.0;
        for k in 0..20 {
            let m = (2 * k + 1) as f64;
            cdf += (-m * m * t).exp();
        }
        cdf *= (2.0 * std::f64::consts::PI).sqrt() / lambda;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut sum = 0.0f64;
    let mut sign = 1.0f64;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64 * lambda).powi(2)).exp();
        sum += sign * term;
        if term < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Survival function of the chi-square distribution with `df` degrees of
/// freedom: Q(df/2, x/2).
pub fn chi_square_sf(x: f64, df: f64) -> f64 {
    assert!(df > 0.0);
    if x <= 0.0 {
        return 1.0;
    }
    reg_upper_gamma(0.5 * df, 0.5 * x)
}

/// Regularized lower incomplete gamma P(a, x).
pub fn reg_lower_gamma(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        lower_gamma_series(a, x)
    } else {
        1.0 - upper_gamma_cf(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
pub fn reg_upper_gamma(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - lower_gamma_series(a, x)
    } else {
        upper_gamma_cf(a, x)
    }
}

fn lower_gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..100_000 {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * 1e-16 {
            break;
        }
    }
    (sum * (-x + a * x.ln() - ln_gamma(a)).exp()).clamp(0.0, 1.0)
}

// Modified Lentz continued fraction for Q(a, x), valid for x >= a + 1.
fn upper_gamma_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..100_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (h * (-x + a * x.ln() - ln_gamma(a)).exp()).clamp(0.0, 1.0)
}

/// Natural log of the gamma function (Lanczos, g = 7, 9 coefficients;
/// relative error below 1e-13 over the positive axis).
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    assert!(x > 0.0, "ln_gamma requires x > 0");
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = 0.999_999_999_999_809_93;
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += c / (z + (i + 1) as f64);
    }
    let t = z + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}
