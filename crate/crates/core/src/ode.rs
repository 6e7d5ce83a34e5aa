//! Adaptive Dormand–Prince 5(4) integrator over a real parameter, for real or
//! complex fixed-size states. The integrator lands exactly on requested stop
//! points, so callers never need interpolation at those points.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Mul};

pub trait Scalar: Copy + Add<Output = Self> + Mul<f64, Output = Self> + Default {
    fn modulus(self) -> f64;
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Dopri {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Dopri {
    fn default() -> Self {
        Dopri {
            rtol: 1e-12,
            atol: 1e-14,
            h_max: f64::INFINITY,
            max_steps: 2_000_000,
        }
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn axpy<T: Scalar, const N: usize>(y: &[T; N], h: f64, ks: &[[T; N]], coef: &[f64]) -> [T; N] {
    let mut out = *y;
    for (k, &c) in ks.iter().zip(coef) {
        if c != 0.0 {
            for i in 0..N {
                out[i] = out[i] + k[i] * (h * c);
            }
        }
    }
    out
}

impl Dopri {
    pub fn with_tol(rtol: f64) -> Self {
        Dopri {
            rtol,
            atol: rtol * 1e-2,
            ..Default::default()
        }
    }

    /// Integrate from `t0` through every entry of `stops` (monotone, in the
    /// direction of travel). `on_stop(index, t, y, y')` runs at each stop and
    /// may abort by returning an error. Returns the state at the last stop.
    pub fn integrate<T, const N: usize, F, G>(
        &self,
        mut f: F,
        t0: f64,
        y0: [T; N],
        stops: &[f64],
        mut on_stop: G,
    ) -> Result<[T; N]>
    where
        T: Scalar,
        F: FnMut(f64, &[T; N]) -> [T; N],
        G: FnMut(usize, f64, &[T; N], &[T; N]) -> Result<()>,
    {
        let mut t = t0;
        let mut y = y0;
        let mut k0 = f(t, &y);
        let mut h_abs = 0.0;
        let mut steps = 0usize;
        for (idx, &target) in stops.iter().enumerate() {
            let span = target - t;
            if span == 0.0 {
                on_stop(idx, t, &y, &k0)?;
                continue;
            }
            let dir = span.signum();
            if h_abs == 0.0 {
                h_abs = self.initial_step(&y, &k0, span.abs());
            }
            loop {
                let remaining = (target - t) * dir;
                if remaining <= 0.0 {
                    break;
                }
                let mut last = false;
                let mut h = h_abs.min(self.h_max);
                if h >= remaining * (1.0 - 1e-12) {
                    h = remaining;
                    last = true;
                }
                let hs = h * dir;
                let mut ks = [[T::default(); N]; 7];
                ks[0] = k0;
                for s in 1..7 {
                    let ys = axpy(&y, hs, &ks[..s], &A[s][..s]);
                    ks[s] = f(t + C[s] * hs, &ys);
                }
                let y_new = axpy(&y, hs, &ks[..6], &A[6]);
                let mut err = 0.0;
                for i in 0..N {
                    let mut e = T::default();
                    for (s, k) in ks.iter().enumerate() {
                        e = e + k[i] * (hs * E[s]);
                    }
                    let sc = self.atol + self.rtol * y[i].modulus().max(y_new[i].modulus());
                    let r = e.modulus() / sc;
                    err += r * r;
                }
                let err = (err / N as f64).sqrt();
                if !err.is_finite() {
                    return Err(Error::Integration(format!("non-finite state near t = {t}")));
                }
                steps += 1;
                if steps > self.max_steps {
                    return Err(Error::Integration(format!("step limit exceeded near t = {t}")));
                }
                if err <= 1.0 {
                    t = if last { target } else { t + hs };
                    y = y_new;
                    k0 = ks[6];
                    let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    if !last {
                        h_abs = h * fac;
                    } else {
                        h_abs = h_abs.max(h * fac);
                    }
                } else {
                    h_abs = h * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
                    if h_abs < 1e-14 * (1.0 + t.abs()) {
                        return Err(Error::Integration(format!("step size underflow near t = {t}")));
                    }
                }
            }
            on_stop(idx, t, &y, &k0)?;
        }
        Ok(y)
    }

    fn initial_step<T: Scalar, const N: usize>(
        &self,
        y: &[T; N],
        k0: &[T; N],
        span: f64,
    ) -> f64 {
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..N {
            let sc = self.atol + self.rtol * y[i].modulus();
            d0 += (y[i].modulus() / sc).powi(2);
            d1 += (k0[i].modulus() / sc).powi(2);
        }
        let (d0, d1) = ((d0 / N as f64).sqrt(), (d1 / N as f64).sqrt());
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h0.min(span).min(self.h_max).max(1e-10 * span)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_lands_on_stops() {
        let stops: Vec<f64> = (1..=10).map(|i| i as f64 * 0.3).collect();
        let mut seen = Vec::new();
        let y = Dopri::with_tol(1e-12)
            .integrate(
                |_, y: &[f64; 1]| [-y[0]],
                0.0,
                [1.0],
                &stops,
                |_, t, y, _| {
                    seen.push((t, y[0]));
                    Ok(())
                },
            )
            .unwrap();
        assert_eq!(seen.len(), 10);
        for (t, v) in seen {
            assert!((v - (-t).exp()).abs() < 1e-11);
        }
        assert!((y[0] - (-3.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn complex_rotation_backward() {
        let i = Complex64::new(0.0, 1.0);
        let y = Dopri::with_tol(1e-12)
            .integrate(|_, y: &[Complex64; 1]| [i * y[0]], 2.0, [Complex64::new(1.0, 0.0)], &[-3.0], |_, _, _, _| Ok(()))
            .unwrap();
        let want = (i * -5.0).exp();
        assert!((y[0] - want).norm() < 1e-10);
    }

    #[test]
    fn callback_can_abort() {
        let r = Dopri::default().integrate(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], &[1.0, 2.0], |i, _, _, _| {
            if i == 1 {
                Err(Error::BlowUp { s: 2.0 })
            } else {
                Ok(())
            }
        });
        assert!(matches!(r, Err(Error::BlowUp { .. })));
    }
}
