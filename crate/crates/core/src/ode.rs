//! Dormand–Prince 5(4) integrator with adaptive step control.
//!
//! States are fixed-size arrays so that the planar flow, the 4-D flow and the
//! joint flow + variational system all share one stepper without allocation.

use std::ops::ControlFlow;

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// 5th minus embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Step-control settings.
#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    /// Per-step mixed absolute/relative error bound.
    pub tol: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            min_step: 1e-14,
            max_step: f64::INFINITY,
            max_steps: 5_000_000,
        }
    }
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        let hc = h * c;
        for i in 0..N {
            out[i] += hc * k[i];
        }
    }
    out
}

/// One Dormand–Prince step; returns the 5th-order solution and the error vector.
pub fn dopri_step<const N: usize, F>(f: &mut F, t: f64, y: &[f64; N], h: f64) -> ([f64; N], [f64; N])
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let k1 = f(t, y);
    let k2 = f(t + C2 * h, &axpy(y, h, &[(A21, &k1)]));
    let k3 = f(t + C3 * h, &axpy(y, h, &[(A31, &k1), (A32, &k2)]));
    let k4 = f(t + C4 * h, &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
    let k5 = f(
        t + C5 * h,
        &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    );
    let k6 = f(
        t + h,
        &axpy(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    );
    let y5 = axpy(y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = f(t + h, &y5);
    let mut err = [0.0; N];
    for i in 0..N {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    (y5, err)
}

fn error_norm<const N: usize>(y: &[f64; N], y_new: &[f64; N], err: &[f64; N], tol: f64) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..N {
        let scale = tol * (1.0 + y[i].abs().max(y_new[i].abs()));
        worst = worst.max(err[i].abs() / scale);
    }
    worst
}

/// Integrates from `t0` to `t1` (either direction). The observer sees every
/// accepted step as `(t_prev, y_prev, t, y)` and may stop the run early.
pub fn integrate_observed<const N: usize, F, O>(
    f: &mut F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: &OdeOptions,
    mut observer: O,
) -> Result<(f64, [f64; N], OdeStats)>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N], f64, &[f64; N]) -> ControlFlow<()>,
{
    let mut stats = OdeStats::default();
    let span = t1 - t0;
    if span == 0.0 {
        return Ok((t0, y0, stats));
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut h = (span.abs() * 1e-3).min(opts.max_step).min(0.05).max(opts.min_step);
    while (t1 - t) * dir > 0.0 {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::StepLimit { t, steps: opts.max_steps });
        }
        let remaining = (t1 - t).abs();
        let last = h >= remaining;
        let step = if last { remaining } else { h };
        let (y_new, err) = dopri_step(f, t, &y, dir * step);
        let e = error_norm(&y, &y_new, &err, opts.tol);
        if !e.is_finite() {
            h *= 0.25;
            stats.rejected += 1;
            if h < opts.min_step {
                return Err(Error::StepUnderflow { t, step: h });
            }
            continue;
        }
        if e <= 1.0 {
            let t_new = if last { t1 } else { t + dir * step };
            stats.accepted += 1;
            let flow = observer(t, &y, t_new, &y_new);
            t = t_new;
            y = y_new;
            let factor = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
            h = (step * factor).min(opts.max_step);
            if flow.is_break() {
                break;
            }
        } else {
            stats.rejected += 1;
            h = step * (0.9 * e.powf(-0.2)).clamp(0.1, 0.9);
            if h < opts.min_step {
                return Err(Error::StepUnderflow { t, step: h });
            }
        }
    }
    Ok((t, y, stats))
}

/// Integrates from `t0` to `t1` and returns the final state.
pub fn integrate<const N: usize, F>(f: &mut F, t0: f64, y0: [f64; N], t1: f64, opts: &OdeOptions) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    integrate_observed(f, t0, y0, t1, opts, |_, _, _, _| ControlFlow::Continue(())).map(|r| r.1)
}

/// Integrates through every time in `grid` (monotone) and returns the state at each.
pub fn integrate_on_grid<const N: usize, F>(f: &mut F, grid: &[f64], y0: [f64; N], opts: &OdeOptions) -> Result<Vec<[f64; N]>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let mut out = Vec::with_capacity(grid.len());
    let Some(&first) = grid.first() else {
        return Ok(out);
    };
    let mut y = y0;
    let mut t = first;
    out.push(y);
    for &tn in &grid[1..] {
        y = integrate(f, t, y, tn, opts)?;
        t = tn;
        out.push(y);
    }
    Ok(out)
}

/// Locates a sign change of `g` inside an accepted step `[t_a, t_b]` by
/// Illinois regula falsi, re-stepping from `(t_a, y_a)` with single
/// Dormand–Prince steps.
pub fn locate_event<const N: usize, F, G>(f: &mut F, t_a: f64, y_a: &[f64; N], t_b: f64, g: G) -> (f64, [f64; N])
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    G: Fn(&[f64; N]) -> f64,
{
    let span = t_b - t_a;
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut g_lo = g(y_a);
    let y_hi0 = dopri_step(f, t_a, y_a, span).0;
    let mut g_hi = g(&y_hi0);
    let mut best = (t_b, y_hi0);
    let mut side = 0i8;
    for _ in 0..80 {
        let mid = if g_hi != g_lo { (lo * g_hi - hi * g_lo) / (g_hi - g_lo) } else { 0.5 * (lo + hi) };
        let mid = if mid <= lo || mid >= hi { 0.5 * (lo + hi) } else { mid };
        let y_mid = dopri_step(f, t_a, y_a, mid * span).0;
        let g_mid = g(&y_mid);
        best = (t_a + mid * span, y_mid);
        if g_mid == 0.0 || (hi - lo) * span.abs() < 1e-15 * (1.0 + t_a.abs()) {
            break;
        }
        if (g_mid > 0.0) == (g_lo > 0.0) {
            lo = mid;
            g_lo = g_mid;
            if side == -1 {
                g_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = mid;
            g_hi = g_mid;
            if side == 1 {
                g_lo *= 0.5;
            }
            side = 1;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_closes_after_one_period() {
        let mut f = |_t: f64, y: &[f64; 2]| [-y[1], y[0]];
        let y = integrate(&mut f, 0.0, [1.0, 0.0], 2.0 * std::f64::consts::PI, &OdeOptions::with_tol(1e-12)).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-10 && y[1].abs() < 1e-10, "{y:?}");
    }

    #[test]
    fn exponential_growth_backwards_in_time() {
        let mut f = |_t: f64, y: &[f64; 1]| [y[0]];
        let y = integrate(&mut f, 1.0, [1.0], 0.0, &OdeOptions::with_tol(1e-12)).unwrap();
        assert!((y[0] - (-1.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn fifth_order_convergence_on_fixed_steps() {
        // y' = cos t, y(0)=0: error ratio under halving should be ~32
        let mut f = |t: f64, _y: &[f64; 1]| [t.cos()];
        let run = |n: usize, f: &mut dyn FnMut(f64, &[f64; 1]) -> [f64; 1]| {
            let h = 2.0 / n as f64;
            let mut y = [0.0];
            let mut g = |t: f64, y: &[f64; 1]| f(t, y);
            for i in 0..n {
                y = dopri_step(&mut g, i as f64 * h, &y, h).0;
            }
            (y[0] - 2.0f64.sin()).abs()
        };
        let e1 = run(8, &mut f);
        let e2 = run(16, &mut f);
        assert!(e1 / e2 > 20.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn singular_field_underflows() {
        // y' = 1/(1-t) blows up at t=1
        let mut f = |t: f64, _y: &[f64; 1]| [1.0 / (1.0 - t)];
        let err = integrate(&mut f, 0.0, [0.0], 2.0, &OdeOptions::with_tol(1e-10)).unwrap_err();
        assert!(matches!(err, Error::StepUnderflow { .. } | Error::StepLimit { .. }), "{err:?}");
    }
}
