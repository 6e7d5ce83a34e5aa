//! Pinning (u(s), u'(s)) at a single s by the monodromy data of the Lax
//! ζ-equation.
//!
//! Y₁ is the solution recessive on arg ζ = 0, Y₂ and Y₄ the e^{+θ}-type
//! solutions recessive on arg ζ = ±2π/3. For the distinguished solution they
//! satisfy, after continuation to the circle |ζ| = r₀,
//!     Y₂ − Y₁ − Y₄ = 0                at ζ = r₀,
//!     Y₁ − e^{2απi} Y₂ + Y₄ = 0       at ζ = −r₀ (upper side),
//! and Y₁ is the Frobenius solution ζ^{α}(analytic) at the origin.

use crate::error::{Error, Result};
use crate::lax::{frobenius, norm2, rot, Decay, InfSeries, LaxParams, Transport, Vec2, C, TWO_PI_3};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

const R0: f64 = 1.0;
const N_SERIES: usize = 150;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyFit {
    pub s: f64,
    pub u: f64,
    pub up: f64,
    pub residual: f64,
    pub iterations: usize,
    /// singular values of the final Jacobian (largest, smallest)
    pub sigma: (f64, f64),
}

fn sub(a: &Vec2, b: &Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

/// Stacked real and imaginary parts of the three conditions (10 reals).
pub fn monodromy_residual(alpha: f64, s: f64, u: f64, up: f64) -> Result<[f64; 10]> {
    let p = LaxParams::from_u(alpha, s, u, up)?;
    let ser = InfSeries::new(&p, N_SERIES);
    let tr = Transport::new(&p);
    let big_r = 12.0 + (-s).max(0.0);
    let from_inf = |phi: f64, kind: Decay| -> Result<Vec2> {
        let (y, _) = ser.eval(rot(phi) * big_r, kind);
        tr.segment(rot(phi) * big_r, y, rot(phi) * R0)
    };
    let y1 = from_inf(0.0, Decay::Minus)?;
    let y2 = from_inf(TWO_PI_3, Decay::Plus)?;
    let y4 = from_inf(-TWO_PI_3, Decay::Plus)?;
    let y1m = tr.arc(R0, 0.0, PI, y1)?;
    let y2p = tr.arc(R0, TWO_PI_3, 0.0, y2)?;
    let y2m = tr.arc(R0, TWO_PI_3, PI, y2)?;
    let y4p = tr.arc(R0, -TWO_PI_3, 0.0, y4)?;
    let y4m = tr.arc(R0, -TWO_PI_3, -PI, y4)?;
    let r2 = sub(&sub(&y2p, &y1), &y4p);
    let e = C::from_polar(1.0, 2.0 * PI * alpha);
    let r1 = [y1m[0] - e * y2m[0] + y4m[0], y1m[1] - e * y2m[1] + y4m[1]];
    let f = frobenius(&p, C::new(R0, 0.0), 120);
    let wr = (y1[0] * f[1] - y1[1] * f[0]) / (norm2(&y1) * norm2(&f));
    let c = [r1[0], r1[1], r2[0], r2[1], wr];
    let mut out = [0.0; 10];
    for (k, v) in c.iter().enumerate() {
        out[k] = v.re;
        out[k + 5] = v.im;
    }
    Ok(out)
}

fn rnorm(r: &[f64; 10]) -> f64 {
    r.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Gauss–Newton on the monodromy conditions starting from `guess`.
pub fn fit_at(alpha: f64, s: f64, guess: (f64, f64)) -> Result<MonodromyFit> {
    let mut v = [guess.0, guess.1];
    let mut r = monodromy_residual(alpha, s, v[0], v[1])?;
    let mut sigma = (0.0, 0.0);
    let mut iterations = 0;
    for it in 0..25 {
        iterations = it + 1;
        let mut jac = DMatrix::<f64>::zeros(10, 2);
        for j in 0..2 {
            let h = 1e-5 * v[j].abs().max(0.1);
            let mut vp = v;
            let mut vm = v;
            vp[j] += h;
            vm[j] -= h;
            let rp = monodromy_residual(alpha, s, vp[0], vp[1])?;
            let rm = monodromy_residual(alpha, s, vm[0], vm[1])?;
            for i in 0..10 {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let svd = jac.clone().svd(true, true);
        let sv = &svd.singular_values;
        sigma = (sv.max(), sv.min());
        let rhs = DVector::from_iterator(10, r.iter().map(|x| -x));
        let step = svd
            .solve(&rhs, 1e-14 * sigma.0)
            .map_err(|e| Error::Integration(format!("monodromy least squares: {e}")))?;
        let mut lam = 1.0;
        let mut accepted = false;
        for _ in 0..8 {
            let cand = [v[0] + lam * step[0], v[1] + lam * step[1]];
            if cand[0] != 0.0 {
                if let Ok(rc) = monodromy_residual(alpha, s, cand[0], cand[1]) {
                    if rnorm(&rc) < rnorm(&r) || rnorm(&rc) < 1e-13 {
                        v = cand;
                        r = rc;
                        accepted = true;
                        break;
                    }
                }
            }
            lam *= 0.5;
        }
        let small = (step[0].abs() + step[1].abs()) < 1e-14 * (1.0 + v[0].abs() + v[1].abs());
        if !accepted || small {
            break;
        }
    }
    let residual = rnorm(&r);
    if !(residual < 1e-8) {
        return Err(Error::MonodromyNotConverged { s, residual });
    }
    Ok(MonodromyFit {
        s,
        u: v[0],
        up: v[1],
        residual,
        iterations,
        sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p34::u_closed_form_alpha1;

    #[test]
    fn closed_form_satisfies_conditions() {
        for s in [0.7, 2.0, 3.5] {
            let (u, up) = u_closed_form_alpha1(s);
            let r = monodromy_residual(1.0, s, u, up).unwrap();
            assert!(rnorm(&r) < 1e-10, "s={s}: {}", rnorm(&r));
            let r = monodromy_residual(1.0, s, u * 1.001, up).unwrap();
            assert!(rnorm(&r) > 1e-6);
        }
    }

    #[test]
    fn newton_recovers_alpha1() {
        let s = 2.0;
        let (u, up) = u_closed_form_alpha1(s);
        let fit = fit_at(1.0, s, (u * 1.01, up * 0.98)).unwrap();
        assert!((fit.u - u).abs() < 1e-9, "{} vs {u}", fit.u);
        assert!((fit.up - up).abs() < 1e-8);
    }
}
