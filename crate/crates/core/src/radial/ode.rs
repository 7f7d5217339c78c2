//! Explicit Runge–Kutta integrators for small first-order systems.

use crate::error::{Error, Result};

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
/// Fifth-order weights minus the embedded fourth-order ones.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub rtol: f64,
    pub atol: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            initial_step: 1e-6,
            max_steps: 1_000_000,
        }
    }
}

/// Accepted states, including the initial one.
#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub rejected: usize,
}

/// Dormand–Prince 5(4) with local extrapolation, stepping from `t0` exactly
/// to `t1 > t0`.
pub fn dopri5<const N: usize, F>(f: F, t0: f64, y0: [f64; N], t1: f64, opts: AdaptiveOptions) -> Result<Trajectory<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if !(t1 > t0) {
        return Err(Error::Ode(format!("empty interval [{t0}, {t1}]")));
    }
    let mut traj = Trajectory {
        t: vec![t0],
        y: vec![y0],
        rejected: 0,
    };
    let (mut t, mut y) = (t0, y0);
    let mut h = opts.initial_step.min(t1 - t0);
    let mut k = [[0.0; N]; 7];
    k[0] = f(t, &y);
    while t < t1 {
        if traj.t.len() > opts.max_steps {
            return Err(Error::Ode(format!("step budget {} exhausted at t = {t}", opts.max_steps)));
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                for i in 0..N {
                    ys[i] += h * A[s][j] * kj[i];
                }
            }
            k[s] = f(t + C[s] * h, &ys);
        }
        let mut y_new = y;
        for i in 0..N {
            for s in 0..6 {
                y_new[i] += h * A[6][s] * k[s][i];
            }
        }
        let mut err = 0.0;
        for i in 0..N {
            let e: f64 = (0..7).map(|s| E[s] * k[s][i]).sum::<f64>() * h;
            let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / scale).powi(2);
        }
        let err = (err / N as f64).sqrt();
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            return Err(Error::Ode(format!("non-finite state near t = {t}")));
        }
        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            y = y_new;
            // First-same-as-last: the seventh stage is f at the new point.
            k[0] = k[6];
            traj.t.push(t);
            traj.y.push(y);
        } else {
            traj.rejected += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < 1e-15 * t.abs().max(1.0) {
            return Err(Error::Ode(format!("step size underflow at t = {t}")));
        }
    }
    Ok(traj)
}

/// Classical fourth-order Runge–Kutta with a fixed step, landing on `t1`.
pub fn rk4<const N: usize, F>(f: F, t0: f64, y0: [f64; N], t1: f64, step: f64) -> Trajectory<N>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let steps = ((t1 - t0) / step).ceil().max(1.0) as usize;
    let h = (t1 - t0) / steps as f64;
    let mut traj = Trajectory {
        t: Vec::with_capacity(steps + 1),
        y: Vec::with_capacity(steps + 1),
        rejected: 0,
    };
    let mut y = y0;
    traj.t.push(t0);
    traj.y.push(y);
    let axpy = |y: &[f64; N], a: f64, k: &[f64; N]| std::array::from_fn::<f64, N, _>(|i| y[i] + a * k[i]);
    for s in 0..steps {
        let t = t0 + s as f64 * h;
        let k1 = f(t, &y);
        let k2 = f(t + 0.5 * h, &axpy(&y, 0.5 * h, &k1));
        let k3 = f(t + 0.5 * h, &axpy(&y, 0.5 * h, &k2));
        let k4 = f(t + h, &axpy(&y, h, &k3));
        for i in 0..N {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        traj.t.push(if s + 1 == steps { t1 } else { t + h });
        traj.y.push(y);
    }
    traj
}

/// Quintic Hermite interpolant on `[a, b]` matching value, first and second
/// derivative at both ends.
#[derive(Debug, Clone, Copy)]
pub struct QuinticHermite {
    a: f64,
    h: f64,
    coef: [f64; 6],
}

impl QuinticHermite {
    pub fn new(a: f64, b: f64, left: [f64; 3], right: [f64; 3]) -> Self {
        let h = b - a;
        let (y0, d0, s0) = (left[0], left[1] * h, left[2] * h * h);
        let (y1, d1, s1) = (right[0], right[1] * h, right[2] * h * h);
        // p(u) = y0 + d0 u + s0/2 u² + c3 u³ + c4 u⁴ + c5 u⁵ on u ∈ [0, 1].
        let r0 = y1 - y0 - d0 - 0.5 * s0;
        let r1 = d1 - d0 - s0;
        let r2 = s1 - s0;
        let c3 = 10.0 * r0 - 4.0 * r1 + 0.5 * r2;
        let c4 = -15.0 * r0 + 7.0 * r1 - r2;
        let c5 = 6.0 * r0 - 3.0 * r1 + 0.5 * r2;
        Self {
            a,
            h,
            coef: [y0, d0, 0.5 * s0, c3, c4, c5],
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        let u = (x - self.a) / self.h;
        self.coef.iter().rev().fold(0.0, |acc, c| acc * u + c)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let u = (x - self.a) / self.h;
        let c = &self.coef;
        (c[1] + u * (2.0 * c[2] + u * (3.0 * c[3] + u * (4.0 * c[4] + u * 5.0 * c[5])))) / self.h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dopri_solves_harmonic_oscillator() {
        let traj = dopri5(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [0.0, 1.0], 10.0, AdaptiveOptions::default()).unwrap();
        let y = traj.y.last().unwrap();
        assert_eq!(*traj.t.last().unwrap(), 10.0);
        assert!((y[0] - 10f64.sin()).abs() < 1e-10);
        assert!((y[1] - 10f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let err = |h: f64| {
            let traj = rk4(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], 1.0, h);
            (traj.y.last().unwrap()[0] - 1f64.exp()).abs()
        };
        let ratio = err(0.02) / err(0.01);
        assert!((ratio - 16.0).abs() < 1.0, "{ratio}");
    }

    #[test]
    fn quintic_hermite_reproduces_quintics() {
        let p = |x: f64| 1.0 - 2.0 * x + 0.5 * x.powi(3) + 0.25 * x.powi(5);
        let dp = |x: f64| -2.0 + 1.5 * x * x + 1.25 * x.powi(4);
        let ddp = |x: f64| 3.0 * x + 5.0 * x.powi(3);
        let (a, b) = (0.3, 1.7);
        let q = QuinticHermite::new(a, b, [p(a), dp(a), ddp(a)], [p(b), dp(b), ddp(b)]);
        for x in [0.3, 0.5, 1.1, 1.7] {
            assert!((q.value(x) - p(x)).abs() < 1e-13);
            assert!((q.derivative(x) - dp(x)).abs() < 1e-12);
        }
    }
}
