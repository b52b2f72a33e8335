//! Dormand–Prince 5(4) integration with adaptive steps.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeTolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for OdeTolerances {
    fn default() -> Self {
        OdeTolerances {
            rtol: 1e-10,
            atol: 1e-12,
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction) and return `y(t1)`.
pub fn dopri45<F>(f: F, t0: f64, y0: &[f64], t1: f64, tol: OdeTolerances) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
{
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y);
    }
    let dir = span.signum();
    let mut h = dir * (span.abs() / 100.0).min(0.1);
    let h_min = 1e-14 * (1.0 + t0.abs().max(t1.abs()));
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    k[0] = f(t, &y)?;
    while (t1 - t) * dir > 0.0 {
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        for s in 1..7 {
            let ys: Vec<f64> = (0..n)
                .map(|i| y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>())
                .collect();
            k[s] = f(t + C[s] * h, &ys)?;
        }
        let y5: Vec<f64> = (0..n)
            .map(|i| y[i] + h * (0..7).map(|s| B5[s] * k[s][i]).sum::<f64>())
            .collect();
        let mut err = 0.0f64;
        for i in 0..n {
            let y4 = y[i] + h * (0..7).map(|s| B4[s] * k[s][i]).sum::<f64>();
            let sc = tol.atol + tol.rtol * y[i].abs().max(y5[i].abs());
            err = err.max(((y5[i] - y4) / sc).abs());
        }
        if err <= 1.0 {
            t += h;
            y = y5;
            // first-same-as-last
            k[0] = k[6].clone();
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h.abs() < h_min && (t1 - t) * dir > h_min {
            return Err(Error::OdeStepFailure(t));
        }
    }
    Ok(y)
}
