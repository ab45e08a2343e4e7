//! Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4)).
//!
//! One stepper serves every stage: real systems directly, complex systems via
//! interleaved (re, im) state vectors. Steps are clipped to land exactly on
//! requested observation times so downstream quadrature can run on uniform
//! grids without re-interpolation.

use thiserror::Error;

#[derive(Debug, Clone)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-11, atol: 1e-13, h_init: 1e-3, h_max: 0.5, max_steps: 2_000_000 }
    }
}

#[derive(Debug, Error)]
pub enum OdeError {
    #[error("step size underflow at t = {t} (h = {h})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("step budget exhausted at t = {t} after {steps} steps")]
    TooManySteps { t: f64, steps: usize },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
}

/// Outcome of the per-step observer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

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
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrate `y' = rhs(t, y)` from `t0` to `t1` (either direction).
///
/// `observe_at` must be monotone in the direction of integration and lie in
/// `[t0, t1]`; the observer also fires at every accepted internal step with
/// `is_obs = false`, which shooting-style callers use for event detection.
/// Returns the final `(t, y)`, early if the observer says `Stop`.
pub fn dopri5<F, O>(
    mut rhs: F,
    t0: f64,
    t1: f64,
    y0: &[f64],
    opts: &OdeOptions,
    observe_at: &[f64],
    mut observer: O,
) -> Result<(f64, Vec<f64>), OdeError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64], bool) -> Flow,
{
    let n = y0.len();
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = dir * opts.h_init.min(opts.h_max).min((t1 - t0).abs().max(1e-300));
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut obs_idx = 0usize;
    rhs(t, &y, &mut k1);

    // Fire the observer at t0 if requested there.
    while obs_idx < observe_at.len() && (observe_at[obs_idx] - t) * dir <= 1e-14 * t.abs().max(1.0) {
        if observer(t, &y, true) == Flow::Stop {
            return Ok((t, y));
        }
        obs_idx += 1;
    }

    let mut steps = 0usize;
    while (t1 - t) * dir > 1e-14 * t1.abs().max(1.0) {
        steps += 1;
        if steps > opts.max_steps {
            return Err(OdeError::TooManySteps { t, steps });
        }
        // Clip to the next observation point and the interval end.
        let mut target = t1;
        let mut hit_obs = false;
        if obs_idx < observe_at.len() && (observe_at[obs_idx] - t1) * dir < 0.0 {
            target = observe_at[obs_idx];
            hit_obs = true;
        }
        if (t + h - target) * dir >= 0.0 {
            h = target - t;
        } else {
            hit_obs = false;
            if (t + h - t1) * dir >= 0.0 {
                h = t1 - t;
            }
        }
        if h.abs() < 1e-14 * t.abs().max(1.0) {
            // Degenerate clip: emit the observation and move on.
            if hit_obs {
                if observer(t, &y, true) == Flow::Stop {
                    return Ok((t, y));
                }
                obs_idx += 1;
                continue;
            }
            return Err(OdeError::StepUnderflow { t, h });
        }

        for i in 0..n {
            ytmp[i] = y[i] + h * A21 * k1[i];
        }
        rhs(t + h / 5.0, &ytmp, &mut k2);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        rhs(t + 3.0 * h / 10.0, &ytmp, &mut k3);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        rhs(t + 4.0 * h / 5.0, &ytmp, &mut k4);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        rhs(t + 8.0 * h / 9.0, &ytmp, &mut k5);
        for i in 0..n {
            ytmp[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        rhs(t + h, &ytmp, &mut k6);
        for i in 0..n {
            ynew[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        rhs(t + h, &ynew, &mut k7);

        let mut err = 0.0f64;
        for i in 0..n {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(ynew[i].abs());
            err += (e / sc) * (e / sc);
        }
        err = (err / n as f64).sqrt();

        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&ynew);
            k1.copy_from_slice(&k7);
            if !y.iter().all(|v| v.is_finite()) {
                return Err(OdeError::NonFinite { t });
            }
            if hit_obs {
                if observer(t, &y, true) == Flow::Stop {
                    return Ok((t, y));
                }
                obs_idx += 1;
            } else if observer(t, &y, false) == Flow::Stop {
                return Ok((t, y));
            }
        }

        let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h *= fac;
        if h.abs() > opts.h_max {
            h = dir * opts.h_max;
        }
        if h.abs() < 1e-15 {
            return Err(OdeError::StepUnderflow { t, h });
        }
    }
    // Trailing observations that coincide with t1.
    while obs_idx < observe_at.len() {
        if observer(t, &y, true) == Flow::Stop {
            break;
        }
        obs_idx += 1;
    }
    Ok((t, y))
}

/// Convenience wrapper: integrate and collect the state at `ts`.
pub fn dopri5_collect<F>(
    rhs: F,
    t0: f64,
    t1: f64,
    y0: &[f64],
    opts: &OdeOptions,
    ts: &[f64],
) -> Result<Vec<Vec<f64>>, OdeError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let mut out = Vec::with_capacity(ts.len());
    dopri5(rhs, t0, t1, y0, opts, ts, |_, y, is_obs| {
        if is_obs {
            out.push(y.to_vec());
        }
        Flow::Continue
    })?;
    Ok(out)
}
