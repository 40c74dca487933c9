//! Embedded Dormand–Prince 5(4) integrator with adaptive step control.
//!
//! Supports forward and backward integration and an observer callback on
//! every accepted step (used for event detection). Step-size underflow is
//! reported to the caller instead of being papered over.

use crate::error::{Result, SfiError};

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            rtol: 1e-10,
            atol: 1e-12,
            h_init: 1e-2,
            h_min: 1e-13,
            h_max: 1e6,
            max_steps: 200_000_000,
        }
    }
}

/// What the observer returns after each accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepFlow {
    Continue,
    Halt,
}

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];
const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

/// Integrate dy/dt = f(t, y) from t0 to t1 (either direction).
///
/// `observer` is invoked after every accepted step with the previous and new
/// (t, y); returning [`StepFlow::Halt`] stops integration at the new point.
/// Returns the final time (t1, or the halt time).
pub fn integrate<const D: usize, F, O>(
    f: &F,
    t0: f64,
    t1: f64,
    y: &mut [f64; D],
    ctrl: &StepControl,
    mut observer: O,
) -> Result<f64>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
    O: FnMut(f64, &[f64; D], f64, &[f64; D]) -> StepFlow,
{
    if t0 == t1 {
        return Ok(t0);
    }
    let dir = (t1 - t0).signum();
    let mut t = t0;
    let mut h = ctrl.h_init.abs().min((t1 - t0).abs()) * dir;
    let mut k1 = f(t, y);

    for _ in 0..ctrl.max_steps {
        if (t - t1) * dir >= 0.0 {
            return Ok(t);
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }

        let mut y2 = *y;
        stage(&mut y2, y, h, &[(A2[0], &k1)]);
        let k2 = f(t + C[0] * h, &y2);
        let mut y3 = *y;
        stage(&mut y3, y, h, &[(A3[0], &k1), (A3[1], &k2)]);
        let k3 = f(t + C[1] * h, &y3);
        let mut y4 = *y;
        stage(&mut y4, y, h, &[(A4[0], &k1), (A4[1], &k2), (A4[2], &k3)]);
        let k4 = f(t + C[2] * h, &y4);
        let mut y5 = *y;
        stage(
            &mut y5,
            y,
            h,
            &[(A5[0], &k1), (A5[1], &k2), (A5[2], &k3), (A5[3], &k4)],
        );
        let k5 = f(t + C[3] * h, &y5);
        let mut y6 = *y;
        stage(
            &mut y6,
            y,
            h,
            &[
                (A6[0], &k1),
                (A6[1], &k2),
                (A6[2], &k3),
                (A6[3], &k4),
                (A6[4], &k5),
            ],
        );
        let k6 = f(t + C[4] * h, &y6);
        let mut ynew = *y;
        stage(
            &mut ynew,
            y,
            h,
            &[
                (B5[0], &k1),
                (B5[2], &k3),
                (B5[3], &k4),
                (B5[4], &k5),
                (B5[5], &k6),
            ],
        );
        let k7 = f(t + h, &ynew);

        // Embedded 4th-order solution supplies the error estimate.
        let mut err_norm_sq = 0.0;
        for i in 0..D {
            let y4th = y[i]
                + h * (B4[0] * k1[i]
                    + B4[2] * k3[i]
                    + B4[3] * k4[i]
                    + B4[4] * k5[i]
                    + B4[5] * k6[i]
                    + B4[6] * k7[i]);
            let scale = ctrl.atol + ctrl.rtol * ynew[i].abs().max(y[i].abs());
            let e = (ynew[i] - y4th) / scale;
            err_norm_sq += e * e;
        }
        let err = (err_norm_sq / D as f64).sqrt();

        if err <= 1.0 {
            let t_new = t + h;
            let flow = observer(t, y, t_new, &ynew);
            t = t_new;
            *y = ynew;
            k1 = k7; // FSAL
            if flow == StepFlow::Halt {
                return Ok(t);
            }
        }

        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h.abs() > ctrl.h_max {
            h = ctrl.h_max * dir;
        }
        if h.abs() < ctrl.h_min {
            return Err(SfiError::CollisionUnresolved {
                t,
                closest_approach: f64::NAN,
            });
        }
    }
    Err(SfiError::InvalidParameter(format!(
        "integration exceeded {} steps (t = {t}, target {t1})",
        ctrl.max_steps
    )))
}

#[inline]
fn stage<const D: usize>(out: &mut [f64; D], y: &[f64; D], h: f64, terms: &[(f64, &[f64; D])]) {
    for i in 0..D {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] = y[i] + h * acc;
    }
}
