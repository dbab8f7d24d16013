#![allow(dead_code)]

use num_complex::Complex64;

/// Distance in units in the last place between two finite doubles.
pub fn ulps(a: f64, b: f64) -> u64 {
    fn key(v: f64) -> i64 {
        let bits = v.to_bits() as i64;
        if bits < 0 {
            i64::MIN - bits
        } else {
            bits
        }
    }
    if a == b {
        return 0;
    }
    key(a).abs_diff(key(b))
}

/// Complex analogue of an ulp bound: the difference is within `n` ulps of
/// the larger modulus.
pub fn close_c(a: Complex64, b: Complex64, n: u64) -> bool {
    (a - b).norm() <= n as f64 * f64::EPSILON * a.norm().max(b.norm())
}

/// Mixed absolute/relative agreement: `|analytic - fd| <= tol (1 + |analytic|)`.
pub fn fd_ok(analytic: f64, fd: f64, tol: f64) -> bool {
    (analytic - fd).abs() <= tol * (1.0 + analytic.abs())
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
