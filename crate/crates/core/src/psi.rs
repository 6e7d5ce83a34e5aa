//! The ψ-vector (ψ₁, ψ₂)(x; s) of the edge kernel: the solution of the
//! ζ-equation of the Lax pair that is recessive as x → +∞, transported along
//! the real axis for x > 0 and around the upper half of the circle |ζ| = 1
//! for x < 0.

use crate::error::{Error, Result};
use crate::io;
use crate::lax::{Decay, InfSeries, LaxParams, Transport, Vec2, C};
use crate::p34::{Alpha, P34Solution};
use serde::Serialize;
use std::f64::consts::PI;

/// Half-width of the excluded window around x = 0.
pub const ORIGIN_WINDOW: f64 = 1e-3;
/// Radius of the semicircle used to pass from x > 0 to x < 0.
pub const R0: f64 = 1.0;
/// Largest allowed real-structure defect before the sample is rejected.
pub const MAX_DEFECT: f64 = 1e-4;
const N_SERIES: usize = 150;
/// Start of the final Taylor step onto x = 0 when α = 0.
const ORIGIN_STEP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiSample {
    pub x: f64,
    /// real
    pub psi1: C,
    /// purely imaginary
    pub psi2: C,
    /// size of the discarded imaginary part of ψ₁ and real part of ψ₂,
    /// relative to 1 + |ψ|
    pub defect: f64,
}

/// Lax parameters at s, with (u, u', w) taken from the trajectory.
pub fn lax_params(alpha: Alpha, s: f64, p34: &P34Solution) -> Result<LaxParams> {
    if p34.alpha != alpha {
        return Err(Error::InvalidInput(format!(
            "trajectory is for alpha = {}, requested {}",
            p34.alpha.value(),
            alpha.value()
        )));
    }
    p34.check_valid(s)?;
    if alpha.value() == 0.0 {
        return Ok(LaxParams::new(0.0, s, 0.0, 0.0, 0.0));
    }
    let (u, up, w) = p34.state_at(s)?;
    Ok(LaxParams::new(alpha.value(), s, u, up, w))
}

/// Start of the inward sweep.
pub fn x_plus(s: f64, x_max: f64) -> f64 {
    12f64.max(x_max + 8.0).max(12.0 - s)
}

fn normalize(x: f64, v: &Vec2, phase: C) -> Result<PsiSample> {
    let p1 = v[0] * phase;
    let p2 = v[1] * phase;
    let defect = (p1.im.abs() / (1.0 + p1.norm())).max(p2.re.abs() / (1.0 + p2.norm()));
    if !(defect <= MAX_DEFECT) {
        return Err(Error::ContinuationFailure { x, defect });
    }
    Ok(PsiSample {
        x,
        psi1: C::new(p1.re, 0.0),
        psi2: C::new(0.0, p2.im),
        defect,
    })
}

pub fn psi_at(alpha: Alpha, s: f64, x: f64, p34: &P34Solution) -> Result<PsiSample> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::InvalidInput(format!("psi needs finite x != 0, got {x}")));
    }
    let p = lax_params(alpha, s, p34)?;
    sweep(&p, &[x]).map(|v| v[0])
}

/// ψ at every point of an ascending grid that avoids (−10⁻³, 10⁻³), from a
/// single sweep.
pub fn psi_grid(alpha: Alpha, s: f64, xs: &[f64], p34: &P34Solution) -> Result<Vec<PsiSample>> {
    check_grid(xs)?;
    let p = lax_params(alpha, s, p34)?;
    sweep(&p, xs)
}

pub fn check_grid(xs: &[f64]) -> Result<()> {
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput("x grid must be strictly ascending".into()));
    }
    if let Some(x) = xs.iter().find(|x| !x.is_finite() || x.abs() < ORIGIN_WINDOW) {
        return Err(Error::InvalidInput(format!("x = {x} lies inside the origin window")));
    }
    Ok(())
}

/// Sweep for fixed Lax parameters; `xs` need not be sorted. x = 0 itself is
/// allowed for α ≥ 0.
pub fn sweep(p: &LaxParams, xs: &[f64]) -> Result<Vec<PsiSample>> {
    let mut out: Vec<Option<PsiSample>> = vec![None; xs.len()];
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[b].partial_cmp(&xs[a]).unwrap());
    let pos: Vec<usize> = order.iter().copied().filter(|&i| xs[i] > 0.0).collect();
    let x_max = pos.first().map_or(0.0, |&i| xs[i]);
    let xp = x_plus(p.s, x_max);
    let ser = InfSeries::new(p, N_SERIES);
    let tr = Transport::new(p);
    let (y0, _) = ser.eval(C::new(xp, 0.0), Decay::Minus);
    let one = C::new(1.0, 0.0);
    let stops: Vec<f64> = pos.iter().map(|&i| xs[i]).collect();
    let y_last = tr.through_real(C::new(xp, 0.0), y0, &stops, |k, y| {
        let i = pos[k];
        out[i] = Some(normalize(xs[i], y, one)?);
        Ok(())
    })?;
    let zeros: Vec<usize> = order.iter().copied().filter(|&i| xs[i] == 0.0).collect();
    if !zeros.is_empty() {
        // ψ ~ |x|^α at the origin
        let y0 = if p.alpha > 0.0 {
            [C::new(0.0, 0.0); 2]
        } else if p.alpha == 0.0 {
            let z_last = C::new(stops.last().copied().unwrap_or(xp), 0.0);
            let z_near = C::new(ORIGIN_STEP, 0.0);
            tr.to_origin(z_near, tr.segment(z_last, y_last, z_near)?)?
        } else {
            return Err(Error::Domain(format!("ψ is unbounded at x = 0 for alpha = {}", p.alpha)));
        };
        for &i in &zeros {
            out[i] = Some(normalize(0.0, &y0, one)?);
        }
    }
    let neg: Vec<usize> = order.iter().copied().filter(|&i| xs[i] < 0.0).collect();
    if !neg.is_empty() {
        let z_last = C::new(stops.last().copied().unwrap_or(xp), 0.0);
        let y1 = tr.segment(z_last, y_last, C::new(R0, 0.0))?;
        let ym = tr.arc(R0, 0.0, PI, y1)?;
        let start = C::from_polar(R0, PI);
        let phase = C::from_polar(1.0, -p.alpha * PI);
        // toward the origin, then away from it
        let mut near: Vec<usize> = neg.iter().copied().filter(|&i| xs[i] >= -R0).collect();
        near.reverse();
        let far: Vec<usize> = neg.iter().copied().filter(|&i| xs[i] < -R0).collect();
        for group in [near, far] {
            let stops: Vec<f64> = group.iter().map(|&i| xs[i]).collect();
            tr.through_real(start, ym, &stops, |k, y| {
                let i = group[k];
                out[i] = Some(normalize(xs[i], y, phase)?);
                Ok(())
            })?;
        }
    }
    Ok(out.into_iter().map(|v| v.unwrap()).collect())
}

pub fn samples_csv(meta: &[(&str, String)], samples: &[PsiSample]) -> String {
    io::csv(
        meta,
        &["x", "psi1_re", "psi1_im", "psi2_re", "psi2_im"],
        samples.iter().map(|p| vec![p.x, p.psi1.re, p.psi1.im, p.psi2.re, p.psi2.im]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p34::solve_u;
    use crate::specfun::airy_ai_real;

    fn zero_solution() -> P34Solution {
        solve_u(Alpha::new(0.0).unwrap(), -10.0, 10.0, 0.5, 1e-10).unwrap()
    }

    #[test]
    fn alpha_zero_is_airy() {
        let sol = zero_solution();
        let a = Alpha::new(0.0).unwrap();
        let k = (2.0 * PI).sqrt();
        for s in [-2.0, 0.0, 1.5] {
            let xs: Vec<f64> = (0..100).map(|i| -9.0 + 17.0 * i as f64 / 99.0).filter(|x: &f64| x.abs() > 1e-3).collect();
            let ps = psi_grid(a, s, &xs, &sol).unwrap();
            for p in &ps {
                let (ai, aip) = airy_ai_real(p.x + s);
                assert!((p.psi1.re - k * ai).abs() < 1e-8, "{} {}", p.x, p.psi1.re - k * ai);
                assert!((p.psi2.im + k * aip).abs() < 1e-8);
            }
            let single = psi_at(a, s, -4.3, &sol).unwrap();
            assert!((single.psi1.re - k * airy_ai_real(-4.3 + s).0).abs() < 1e-8);
        }
    }

    #[test]
    fn leading_asymptotics() {
        let sol = zero_solution();
        let x: f64 = 20.0;
        let p = psi_at(Alpha::new(0.0).unwrap(), 0.0, x, &sol).unwrap();
        let lead = x.powf(-0.25) * (-(2.0 / 3.0) * x.powf(1.5)).exp() / 2f64.sqrt();
        assert!((p.psi1.re / lead - 1.0).abs() < x.powf(-1.5));
    }

    #[test]
    fn grid_preconditions() {
        let sol = zero_solution();
        let a = Alpha::new(0.0).unwrap();
        assert!(psi_grid(a, 0.0, &[-1.0, 1e-4, 1.0], &sol).is_err());
        assert!(psi_grid(a, 0.0, &[1.0, -1.0], &sol).is_err());
        assert!(psi_at(a, 0.0, 0.0, &sol).is_err());
        assert!(matches!(psi_at(a, 20.0, 1.0, &sol), Err(Error::OutOfValidity { .. })));
    }

    fn k0(x: f64, s: f64) -> f64 {
        let (a, ap) = airy_ai_real(x + s);
        let (b, bp) = airy_ai_real(s);
        (a * bp - ap * b) / x
    }

    /// ψ from the α = 1 closed forms, in the gauge of the explicit solution.
    fn psi_alpha1(x: f64, s: f64) -> (f64, f64) {
        let k = (2.0 * PI).sqrt();
        let (a, ap) = airy_ai_real(x + s);
        let (b, bp) = airy_ai_real(s);
        let r = k0(x, s) / (bp * bp - s * b * b);
        (k * (a - r * b), -k * (ap - r * bp))
    }

    #[test]
    fn alpha_one_matches_closed_form_up_to_gauge() {
        let a = Alpha::new(1.0).unwrap();
        let sol = solve_u(a, -3.0, 3.0, 0.01, 1e-10).unwrap();
        for s in [-2.0, 0.0, 2.0] {
            let xs: Vec<f64> = (0..60).map(|i| -7.95 + 0.25 * i as f64).collect();
            let ps = psi_grid(a, s, &xs, &sol).unwrap();
            // ψ₂ is fixed only up to ψ₂ + ηψ₁; fit η by least squares
            let (mut num, mut den) = (0.0, 0.0);
            // the explicit formulas are Ψ₊(1, 0)ᵀ; for x < 0 the ψ-vector is
            // Ψ₊e^{−απiσ₃}(1, 1)ᵀ, which at α = 1 flips the overall sign
            let closed = |x: f64| {
                let (f1, f2) = psi_alpha1(x, s);
                if x < 0.0 {
                    (-f1, -f2)
                } else {
                    (f1, f2)
                }
            };
            for p in &ps {
                let (f1, f2) = closed(p.x);
                assert!((p.psi1.re - f1).abs() < 1e-7, "s={s} x={}: {:e}", p.x, p.psi1.re - f1);
                num += (p.psi2.im - f2) * p.psi1.re;
                den += p.psi1.re * p.psi1.re;
            }
            let eta = num / den;
            for p in &ps {
                let (_, f2) = closed(p.x);
                assert!((p.psi2.im - eta * p.psi1.re - f2).abs() < 1e-7, "s={s} x={}", p.x);
            }
        }
    }

    #[test]
    fn indicial_exponent() {
        for v in [0.5, 1.0] {
            let a = Alpha::new(v).unwrap();
            let sol = solve_u(a, -1.0, 1.0, 0.01, 1e-10).unwrap();
            let xs = [1e-3, 1e-2];
            let ps = psi_grid(a, 0.0, &xs, &sol).unwrap();
            let slope = (ps[1].psi1.re.abs().ln() - ps[0].psi1.re.abs().ln()) / (10f64.ln());
            assert!((slope - v).abs() < 0.05, "alpha {v}: slope {slope}");
        }
    }

    #[test]
    fn oscillatory_asymptotics() {
        for (v, s) in [(0.0, 0.5), (0.25, 0.5), (0.5, 0.0), (0.5, 0.5)] {
            let a = Alpha::new(v).unwrap();
            let sol = solve_u(a, -1.0, 1.0, 0.01, 1e-10).unwrap();
            let xs: Vec<f64> = (0..40).map(|i| -40.0 + 0.625 * i as f64).collect();
            for p in psi_grid(a, s, &xs, &sol).unwrap() {
                let t = -p.x;
                let arg = 2.0 / 3.0 * t.powf(1.5) - s * t.sqrt() - v * PI - PI / 4.0;
                let lead = 2f64.sqrt() * t.powf(-0.25) * arg.cos();
                assert!((p.psi1.re - lead).abs() <= 2.0 * t.powf(-0.75), "alpha {v} x {}", p.x);
            }
        }
    }

    #[test]
    fn satisfies_the_linear_system() {
        use rand::{Rng, SeedableRng};
        let a = Alpha::new(0.7).unwrap();
        let s = 0.3;
        let sol = solve_u(a, -1.0, 1.0, 0.01, 1e-10).unwrap();
        let p = lax_params(a, s, &sol).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let h = 1e-4;
        for _ in 0..50 {
            let x: f64 = rng.gen_range(0.5..8.0);
            let v = sweep(&p, &[x - h, x, x + h]).unwrap();
            let d1 = (v[2].psi1 - v[0].psi1) / (2.0 * h);
            let d2 = (v[2].psi2 - v[0].psi2) / (2.0 * h);
            let rhs = p.rhs(C::new(x, 0.0), &[v[1].psi1, v[1].psi2]);
            let scale = rhs[0].norm() + rhs[1].norm();
            assert!((d1 - rhs[0]).norm() + (d2 - rhs[1]).norm() <= 1e-6 * scale, "x = {x}");
        }
    }

    #[test]
    fn real_structure_everywhere() {
        let a = Alpha::new(0.37).unwrap();
        let sol = solve_u(a, -2.0, 2.0, 0.01, 1e-10).unwrap();
        let xs: Vec<f64> = (0..80).map(|i| -10.0 + 0.25 * i as f64 + 0.01).collect();
        for p in psi_grid(a, -1.0, &xs, &sol).unwrap() {
            assert!(p.defect <= 1e-8, "x={} defect {:e}", p.x, p.defect);
        }
    }
}
