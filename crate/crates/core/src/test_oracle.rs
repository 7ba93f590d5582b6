//! Reference implementations for tests. They use different algorithms from
//! the library code paths (positive-term series, continued fractions, closed
//! forms, bisection) so agreement is meaningful.
#![allow(dead_code)]

use std::f64::consts::PI;

pub fn phi_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Upper normal tail. Positive-term series for `erf` below 3, Laplace
/// continued fraction above.
pub fn normal_sf(x: f64) -> f64 {
    if x < 0.0 {
        return 1.0 - normal_sf(-x);
    }
    if x < 3.0 {
        let z = x / std::f64::consts::SQRT_2;
        let mut term = z;
        let mut sum = z;
        let mut n = 0.0;
        loop {
            n += 1.0;
            term *= 2.0 * z * z / (2.0 * n + 1.0);
            sum += term;
            if term <= 1e-18 * sum {
                break;
            }
        }
        let erf = 2.0 / PI.sqrt() * (-z * z).exp() * sum;
        return 0.5 * (1.0 - erf);
    }
    // Q(x) = φ(x) / (x + 1/(x + 2/(x + 3/(x + ...)))) evaluated bottom-up.
    let mut frac = x;
    for k in (1..=200).rev() {
        frac = x + k as f64 / frac;
    }
    phi_density(x) / frac
}

pub fn normal_cdf(x: f64) -> f64 {
    if x > 0.0 {
        1.0 - normal_sf(x)
    } else {
        normal_sf(-x)
    }
}

/// Bisection on a monotone increasing function.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, target: f64) -> f64 {
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn normal_quantile(p: f64) -> f64 {
    if p > 0.5 {
        // Bisect the upper tail for precision.
        let q = 1.0 - p;
        bisect(|x| -normal_sf(x), 0.0, 40.0, -q)
    } else {
        bisect(normal_cdf, -40.0, 0.0, p)
    }
}

pub fn normal_isf(q: f64) -> f64 {
    bisect(|x| -normal_sf(x), -40.0, 40.0, -q)
}

/// Chi-squared survival function for integer `n` by closed forms.
pub fn chi2_sf(n: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if n % 2 == 0 {
        let h = 0.5 * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..n / 2 {
            term *= h / j as f64;
            sum += term;
        }
        (-h).exp() * sum
    } else {
        let r = x.sqrt();
        let mut sum = 0.0;
        let mut term = r;
        for j in 1..=(n - 1) / 2 {
            if j > 1 {
                term *= x / (2 * j - 1) as f64;
            }
            sum += term;
        }
        2.0 * normal_sf(r) + 2.0 * phi_density(r) * sum
    }
}

pub fn chi2_cdf(n: u32, x: f64) -> f64 {
    1.0 - chi2_sf(n, x)
}

pub fn chi2_isf(n: u32, q: f64) -> f64 {
    bisect(|x| -chi2_sf(n, x), 0.0, 2000.0, -q)
}

/// `I₀(κ)` by its power series.
pub fn bessel_i0(kappa: f64) -> f64 {
    let q = 0.25 * kappa * kappa;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..2000 {
        term *= q / (k as f64 * k as f64);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Two-dimensional Simpson rule over a rectangle.
pub fn simpson2(
    f: impl Fn(f64, f64) -> f64,
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    n: usize,
) -> f64 {
    simpson(|x| simpson(|y| f(x, y), y0, y1, n), x0, x1, n)
}
