//! The edge kernel in integrable form
//!     K(x, y; s) = (ψ₂(x)ψ₁(y) − ψ₁(x)ψ₂(y)) / (2πi(x − y)),
//! its diagonal, and the explicit kernels for α ∈ {0, 1}.
//!
//! Near the diagonal the quotient is replaced by its expansion about the
//! midpoint m with δ = x − y: K = (N₁ + N₃δ²)/(2πi), where N₁ and N₃ come
//! from the derivatives of ψ given by the Lax matrix. The δ¹ term vanishes
//! because K is symmetric.

use crate::error::{Error, Result};
use crate::io;
use crate::lax::{matvec, LaxParams, Mat2, Vec2, C};
use crate::p34::{Alpha, P34Solution};
use crate::psi::{self, lax_params, sweep, PsiSample};
use crate::specfun::airy_ai_real;
use serde::Serialize;
use std::f64::consts::PI;

/// Below this |x − y| the midpoint expansion is used.
pub const NEAR_DIAGONAL: f64 = 1e-4;

const I: C = C::new(0.0, 1.0);

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn add(a: &Mat2, b: &Mat2, cb: C) -> Mat2 {
    [
        [a[0][0] + cb * b[0][0], a[0][1] + cb * b[0][1]],
        [a[1][0] + cb * b[1][0], a[1][1] + cb * b[1][1]],
    ]
}

fn cross(a: &Vec2, b: &Vec2) -> C {
    a[1] * b[0] - a[0] * b[1]
}

/// Complex value of the integrable form for well-separated points.
pub fn integrable(x: f64, px: &Vec2, y: f64, py: &Vec2) -> C {
    (px[1] * py[0] - px[0] * py[1]) / (2.0 * PI * I * (x - y))
}

/// Complex value of K(m + δ/2, m − δ/2) from ψ at the midpoint m.
pub fn near_diagonal(p: &LaxParams, m: f64, psi: &Vec2, delta: f64) -> C {
    if psi.iter().all(|v| *v == C::new(0.0, 0.0)) {
        return C::new(0.0, 0.0);
    }
    let z = C::new(m, 0.0);
    let r = p.residue();
    let pm: Mat2 = [[C::new(0.0, 0.0); 2], [-I, C::new(0.0, 0.0)]];
    let zero = [[C::new(0.0, 0.0); 2]; 2];
    // with a vanishing residue the matrix is entire and m = 0 is allowed
    let (a, a1, a2) = if r == zero {
        ([[zero[0][0], I], [-I * (z + p.s), zero[0][0]]], pm, zero)
    } else {
        (p.matrix(z), add(&pm, &r, -1.0 / (z * z)), add(&zero, &r, 2.0 / (z * z * z)))
    };
    let d1 = matvec(&a, psi);
    let d2 = matvec(&add(&a1, &mul(&a, &a), C::new(1.0, 0.0)), psi);
    let m3 = add(&add(&add(&a2, &mul(&a1, &a), C::new(2.0, 0.0)), &mul(&a, &a1), C::new(1.0, 0.0)), &mul(&a, &mul(&a, &a)), C::new(1.0, 0.0));
    let d3 = matvec(&m3, psi);
    let n1 = cross(&d1, psi);
    let n3 = cross(&d3, psi) / 24.0 - cross(&d2, &d1) / 8.0;
    (n1 + n3 * delta * delta) / (2.0 * PI * I)
}

fn as_vec(p: &PsiSample) -> Vec2 {
    [p.psi1, p.psi2]
}

fn check_point(x: f64) -> Result<()> {
    if !x.is_finite() || (x != 0.0 && x.abs() < psi::ORIGIN_WINDOW) {
        return Err(Error::InvalidInput(format!("x = {x} lies inside the origin window")));
    }
    Ok(())
}

/// K(x, y; s). The origin itself is allowed for α ≥ 0: ψ(0) = 0 for α > 0,
/// and ψ is entire for α = 0.
pub fn kernel_eval(alpha: Alpha, s: f64, x: f64, y: f64, p34: &P34Solution) -> Result<f64> {
    check_point(x)?;
    check_point(y)?;
    let p = lax_params(alpha, s, p34)?;
    eval_with(&p, x, y).map(|c| c.re)
}

fn eval_with(p: &LaxParams, x: f64, y: f64) -> Result<C> {
    if use_midpoint(x, y) {
        let m = 0.5 * (x + y);
        let v = sweep(p, &[m])?;
        return Ok(near_diagonal(p, m, &as_vec(&v[0]), x - y));
    }
    let v = sweep(p, &[x, y])?;
    Ok(integrable(x, &as_vec(&v[0]), y, &as_vec(&v[1])))
}

/// [m21ψ₁² + (m22 − m11)ψ₁ψ₂ − m12ψ₂²]/(2πi) at x.
pub fn kernel_diag(alpha: Alpha, s: f64, x: f64, p34: &P34Solution) -> Result<f64> {
    check_point(x)?;
    let p = lax_params(alpha, s, p34)?;
    let v = sweep(&p, &[x])?;
    Ok(near_diagonal(&p, x, &as_vec(&v[0]), 0.0).re)
}

/// ψ for α = 0 from Airy functions: (√(2π)Ai(x+s), −i√(2π)Ai′(x+s)).
fn airy_psi(x: f64, s: f64) -> Vec2 {
    let k = (2.0 * PI).sqrt();
    let (a, d) = airy_ai_real(x + s);
    [C::new(k * a, 0.0), C::new(0.0, -k * d)]
}

/// The Airy kernel K₀(x, y; s), with the same near-diagonal handling.
pub fn airy_kernel(s: f64, x: f64, y: f64) -> f64 {
    let p = LaxParams::new(0.0, s, 0.0, 0.0, 0.0);
    if (x - y).abs() < NEAR_DIAGONAL {
        let m = 0.5 * (x + y);
        return near_diagonal(&p, m, &airy_psi(m, s), x - y).re;
    }
    integrable(x, &airy_psi(x, s), y, &airy_psi(y, s)).re
}

/// Explicit kernels: K₀ for α = 0 and K₀(x,y) − K₀(x,0)K₀(y,0)/K₀(0,0) for α = 1.
pub fn kernel_closed_form(alpha: f64, s: f64, x: f64, y: f64) -> Result<f64> {
    if alpha == 0.0 {
        Ok(airy_kernel(s, x, y))
    } else if alpha == 1.0 {
        let k00 = airy_kernel(s, 0.0, 0.0);
        Ok(airy_kernel(s, x, y) - airy_kernel(s, x, 0.0) * airy_kernel(s, y, 0.0) / k00)
    } else {
        Err(Error::InvalidInput(format!("explicit kernel only for alpha in {{0, 1}}, got {alpha}")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelGrid {
    pub alpha: f64,
    pub s: f64,
    pub x_grid: Vec<f64>,
    pub y_grid: Vec<f64>,
    /// `values[i][j]` = K(x_grid[i], y_grid[j])
    pub values: Vec<Vec<f64>>,
    /// largest |Im K| dropped when taking real parts
    pub max_imag: f64,
}

/// Kernel on a tensor grid from one ψ sweep over the union of the grids.
pub fn kernel_grid(alpha: Alpha, s: f64, xs: &[f64], ys: &[f64], p34: &P34Solution) -> Result<KernelGrid> {
    for g in [xs, ys] {
        if g.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput("grid must be strictly ascending".into()));
        }
        g.iter().try_for_each(|&x| check_point(x))?;
    }
    let p = lax_params(alpha, s, p34)?;
    let (values, max_imag) = grid_values(&p, xs, ys)?;
    Ok(KernelGrid {
        alpha: alpha.value(),
        s,
        x_grid: xs.to_vec(),
        y_grid: ys.to_vec(),
        values,
        max_imag,
    })
}

fn use_midpoint(x: f64, y: f64) -> bool {
    let d = (x - y).abs();
    d == 0.0 || (d < NEAR_DIAGONAL && d < 1e-2 * (0.5 * (x + y)).abs())
}

/// Real parts of K on xs × ys and the largest discarded imaginary part.
/// Points need not avoid the origin window; the origin needs α ≥ 0.
pub(crate) fn grid_values(p: &LaxParams, xs: &[f64], ys: &[f64]) -> Result<(Vec<Vec<f64>>, f64)> {
    let mut pts: Vec<f64> = xs.iter().chain(ys).copied().collect();
    let mut mids = Vec::new();
    for &x in xs {
        for &y in ys {
            if use_midpoint(x, y) {
                mids.push(0.5 * (x + y));
            }
        }
    }
    pts.extend(&mids);
    let samples = sweep(p, &pts)?;
    let nx = xs.len();
    let mut mid = xs.len() + ys.len();
    let mut max_imag: f64 = 0.0;
    let mut values = vec![vec![0.0; ys.len()]; nx];
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let c = if use_midpoint(x, y) {
                mid += 1;
                near_diagonal(p, pts[mid - 1], &as_vec(&samples[mid - 1]), x - y)
            } else {
                integrable(x, &as_vec(&samples[i]), y, &as_vec(&samples[nx + j]))
            };
            max_imag = max_imag.max(c.im.abs());
            values[i][j] = c.re;
        }
    }
    Ok((values, max_imag))
}

impl KernelGrid {
    /// Matrix CSV: x values across the header row, one row per y.
    pub fn to_csv(&self, meta: &[(&str, String)]) -> String {
        let mut out = String::new();
        for (k, v) in meta {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let head: Vec<String> = self.x_grid.iter().map(|&x| io::num(x)).collect();
        out.push_str(&format!("y\\x,{}\n", head.join(",")));
        for (j, &y) in self.y_grid.iter().enumerate() {
            let row: Vec<String> = (0..self.x_grid.len()).map(|i| io::num(self.values[i][j])).collect();
            out.push_str(&format!("{},{}\n", io::num(y), row.join(",")));
        }
        out
    }
}
