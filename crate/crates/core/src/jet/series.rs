//! Univariate Taylor coefficients of elementary functions about a base value.

use super::Elementary;
use crate::error::{Error, Result};

const POLE_TOL: f64 = 1e-14;

fn domain(f: Elementary, v: f64) -> Error {
    Error::Domain {
        func: f.name().to_string(),
        value: v,
    }
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut c = vec![0.0; n];
    for i in 0..n {
        for j in 0..n - i {
            c[i + j] += a[i] * b[j];
        }
    }
    c
}

fn recip(a: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut r = vec![0.0; n];
    r[0] = 1.0 / a[0];
    for k in 1..n {
        let s: f64 = (1..=k).map(|j| a[j] * r[k - j]).sum();
        r[k] = -s / a[0];
    }
    r
}

fn div(a: &[f64], b: &[f64]) -> Vec<f64> {
    mul(a, &recip(b))
}

/// Coefficients of `u^p` from those of `u` (requires `u₀ ≠ 0`).
fn pow_series(u: &[f64], p: f64) -> Vec<f64> {
    let n = u.len();
    let mut v = vec![0.0; n];
    v[0] = u[0].powf(p);
    for k in 1..n {
        let s: f64 = (1..=k)
            .map(|j| ((p + 1.0) * j as f64 - k as f64) * u[j] * v[k - j])
            .sum();
        v[k] = s / (k as f64 * u[0]);
    }
    v
}

/// Antiderivative series with constant term `c0`, truncated to `n` terms.
fn integrate(d: &[f64], c0: f64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    out[0] = c0;
    for k in 1..n {
        out[k] = d[k - 1] / k as f64;
    }
    out
}

fn sin_cos(a0: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (s0, c0) = a0.sin_cos();
    let mut s = vec![0.0; n];
    let mut c = vec![0.0; n];
    let mut fact = 1.0;
    for k in 0..n {
        if k > 0 {
            fact *= k as f64;
        }
        // derivatives cycle through sin, cos, −sin, −cos
        let (ds, dc) = match k % 4 {
            0 => (s0, c0),
            1 => (c0, -s0),
            2 => (-s0, -c0),
            _ => (-c0, s0),
        };
        s[k] = ds / fact;
        c[k] = dc / fact;
    }
    (s, c)
}

fn sinh_cosh(a0: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (s0, c0) = (a0.sinh(), a0.cosh());
    let mut s = vec![0.0; n];
    let mut c = vec![0.0; n];
    let mut fact = 1.0;
    for k in 0..n {
        if k > 0 {
            fact *= k as f64;
        }
        if k % 2 == 0 {
            s[k] = s0 / fact;
            c[k] = c0 / fact;
        } else {
            s[k] = c0 / fact;
            c[k] = s0 / fact;
        }
    }
    (s, c)
}

/// Taylor coefficients of `a₀^p`-style binomial series `(a₀ + t)^p`.
pub(super) fn power(a0: f64, p: f64, order: usize) -> Vec<f64> {
    let mut u = vec![0.0; order + 1];
    u[0] = a0;
    if order > 0 {
        u[1] = 1.0;
    }
    pow_series(&u, p)
}

/// Coefficients `s_k` with `f(a₀ + t) = Σ s_k t^k + O(t^{order+1})`.
pub(super) fn elementary(f: Elementary, a0: f64, order: usize) -> Result<Vec<f64>> {
    if !a0.is_finite() {
        return Err(domain(f, a0));
    }
    let n = order + 1;
    let shifted = || {
        let mut u = vec![0.0; n];
        u[0] = a0;
        if n > 1 {
            u[1] = 1.0;
        }
        u
    };
    let out = match f {
        Elementary::Sin => sin_cos(a0, n).0,
        Elementary::Cos => sin_cos(a0, n).1,
        Elementary::Tan | Elementary::Sec => {
            if a0.cos().abs() < POLE_TOL {
                return Err(domain(f, a0));
            }
            let (s, c) = sin_cos(a0, n);
            if f == Elementary::Tan {
                div(&s, &c)
            } else {
                recip(&c)
            }
        }
        Elementary::Csc | Elementary::Cot => {
            if a0.sin().abs() < POLE_TOL {
                return Err(domain(f, a0));
            }
            let (s, c) = sin_cos(a0, n);
            if f == Elementary::Cot {
                div(&c, &s)
            } else {
                recip(&s)
            }
        }
        Elementary::Exp => {
            let e = a0.exp();
            let mut out = vec![0.0; n];
            let mut fact = 1.0;
            for (k, o) in out.iter_mut().enumerate() {
                if k > 0 {
                    fact *= k as f64;
                }
                *o = e / fact;
            }
            out
        }
        Elementary::Ln => {
            if a0 <= 0.0 {
                return Err(domain(f, a0));
            }
            let mut out = vec![0.0; n];
            out[0] = a0.ln();
            for (k, o) in out.iter_mut().enumerate().skip(1) {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                *o = sign / (k as f64 * a0.powi(k as i32));
            }
            out
        }
        Elementary::Sinh => sinh_cosh(a0, n).0,
        Elementary::Cosh => sinh_cosh(a0, n).1,
        Elementary::Tanh | Elementary::Sech => {
            let (s, c) = sinh_cosh(a0, n);
            if f == Elementary::Tanh {
                div(&s, &c)
            } else {
                recip(&c)
            }
        }
        Elementary::Csch | Elementary::Coth => {
            if a0.abs() < POLE_TOL {
                return Err(domain(f, a0));
            }
            let (s, c) = sinh_cosh(a0, n);
            if f == Elementary::Coth {
                div(&c, &s)
            } else {
                recip(&s)
            }
        }
        Elementary::Sqrt => {
            if a0 < 0.0 || (a0 == 0.0 && order > 0) {
                return Err(domain(f, a0));
            }
            power(a0, 0.5, order)
        }
        Elementary::Asin | Elementary::Acos => {
            if a0.abs() >= 1.0 {
                return Err(domain(f, a0));
            }
            // d/dt asin = (1 − (a₀+t)²)^{-1/2}
            let u = shifted();
            let sq = mul(&u, &u);
            let one_minus: Vec<f64> = sq
                .iter()
                .enumerate()
                .map(|(k, v)| if k == 0 { 1.0 - v } else { -v })
                .collect();
            let d = pow_series(&one_minus, -0.5);
            let mut out = integrate(&d, a0.asin(), n);
            if f == Elementary::Acos {
                for v in out.iter_mut() {
                    *v = -*v;
                }
                out[0] = a0.acos();
            }
            out
        }
        Elementary::Atan | Elementary::Asinh => {
            let u = shifted();
            let mut one_plus = mul(&u, &u);
            one_plus[0] += 1.0;
            if f == Elementary::Atan {
                integrate(&recip(&one_plus), a0.atan(), n)
            } else {
                integrate(&pow_series(&one_plus, -0.5), a0.asinh(), n)
            }
        }
    };
    Ok(out)
}
