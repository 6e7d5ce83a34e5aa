//! Finite-n unitary ensembles with weight |x|^{2α}e^{−NV(x)}: equilibrium
//! constants for quadratic V, recurrence coefficients by a discretized
//! Stieltjes procedure, the Christoffel–Darboux kernel and its comparison
//! with the edge kernel.

use crate::error::{Error, Result};
use crate::io;
use crate::kernel::kernel_grid;
use crate::p34::{Alpha, P34Solution};
use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

/// Largest n supported in double precision.
pub const N_MAX: usize = 60;
/// Allowed change of the recurrence coefficients under quadrature doubling.
pub const RECURRENCE_TOL: f64 = 1e-10;
/// Below this |x − y| the kernel is summed directly.
pub const CD_SWITCH: f64 = 1e-6;
/// Uniform panels on each side of the origin.
const PANELS: usize = 24;
/// Geometric refinement levels toward the origin.
const LEVELS: usize = 90;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleFile {
    pub v: Vec<f64>,
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleConfig {
    /// V(x) = Σ v_coeffs[k] xᵏ
    pub v_coeffs: Vec<f64>,
    pub n: usize,
    pub big_n: f64,
    pub alpha: Alpha,
    pub support: (f64, f64),
    pub c1: f64,
    pub c2: f64,
    /// n^{2/3}(n/N − 1)
    pub l: f64,
    /// −c₂L
    pub s: f64,
}

/// Default potential 2(x + 1)², support [−2, 0].
pub fn default_potential() -> Vec<f64> {
    vec![2.0, 4.0, 2.0]
}

fn quadratic(v: &[f64]) -> Result<(f64, f64)> {
    let mut v = v.to_vec();
    while v.len() > 3 && v.last() == Some(&0.0) {
        v.pop();
    }
    if v.len() != 3 || !(v[2] > 0.0) || v.iter().any(|c| !c.is_finite()) {
        return Err(Error::UnsupportedPotential(format!("expected a convex quadratic, got coefficients {v:?}")));
    }
    Ok((v[2], -v[1] / (2.0 * v[2])))
}

/// (a, c₁, c₂) for quadratic V whose equilibrium support is [a, 0].
///
/// For V = k(x − m)² the density is (1/2π)√((0 − x)(x − a))·h with h ≡ 2k.
pub fn equilibrium_constants(v: &[f64]) -> Result<(f64, f64, f64)> {
    let (k, m) = quadratic(v)?;
    let r = (2.0 / k).sqrt();
    if (m + r).abs() > 1e-12 * (1.0 + m.abs()) {
        return Err(Error::UnsupportedPotential(format!("right endpoint of the support is {} instead of 0", m + r)));
    }
    let a = m - r;
    let h0 = 2.0 * k;
    let c1 = 0.5 * (-a).sqrt() * h0;
    let c2 = 2.0 * (-a).powf(-0.5) * c1.powf(-1.0 / 3.0);
    Ok((a, c1, c2))
}

/// Equilibrium density of a quadratic V at x.
pub fn equilibrium_density(v: &[f64], x: f64) -> Result<f64> {
    let (k, _) = quadratic(v)?;
    let (a, _, _) = equilibrium_constants(v)?;
    let q = -x * (x - a);
    Ok(if q > 0.0 { q.sqrt() * 2.0 * k / (2.0 * std::f64::consts::PI) } else { 0.0 })
}

pub fn eval_v(v: &[f64], x: f64) -> f64 {
    v.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

impl EnsembleConfig {
    pub fn new(v: &[f64], n: usize, big_n: f64, alpha: Alpha) -> Result<Self> {
        if n == 0 || n > N_MAX {
            return Err(Error::InvalidInput(format!("n must lie in [1, {N_MAX}], got {n}")));
        }
        if !(big_n > 0.0) || !big_n.is_finite() {
            return Err(Error::InvalidInput(format!("N must be positive, got {big_n}")));
        }
        let (a, c1, c2) = equilibrium_constants(v)?;
        let nf = n as f64;
        let l = nf.powf(2.0 / 3.0) * (nf / big_n - 1.0);
        Ok(EnsembleConfig {
            v_coeffs: v.to_vec(),
            n,
            big_n,
            alpha,
            support: (a, 0.0),
            c1,
            c2,
            l,
            s: 0.0 - c2 * l,
        })
    }

    /// The N that realizes a given L at this n.
    pub fn with_l(v: &[f64], n: usize, l: f64, alpha: Alpha) -> Result<Self> {
        let nf = n as f64;
        Self::new(v, n, nf / (1.0 + l * nf.powf(-2.0 / 3.0)), alpha)
    }

    pub fn from_file(f: &EnsembleFile) -> Result<Self> {
        Self::new(&f.v, f.n, f.big_n, Alpha::new(f.alpha)?)
    }

    /// |x|^{2α}e^{−NV(x)}
    pub fn weight(&self, x: f64) -> f64 {
        x.abs().powf(2.0 * self.alpha.value()) * (-self.big_n * eval_v(&self.v_coeffs, x)).exp()
    }

    /// (c₁n)^{2/3}
    pub fn scale(&self) -> f64 {
        (self.c1 * self.n as f64).powf(2.0 / 3.0)
    }
}

/// Composite Gauss–Legendre rule on [a − w, w], w = −a/2, with panels split
/// at 0 and refined geometrically toward it. Returns nodes and plain weights.
pub fn composite_rule(cfg: &EnsembleConfig, points: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let gl = GaussLegendre::new(points).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let a = cfg.support.0;
    let w = -a / 2.0;
    let mut panels = Vec::new();
    for (lo, hi) in [(a - w, 0.0), (0.0, w)] {
        let h = (hi - lo) / PANELS as f64;
        let near_zero = |k: usize| if lo < 0.0 { k == PANELS - 1 } else { k == 0 };
        for k in 0..PANELS {
            let (p0, p1) = (lo + k as f64 * h, lo + (k + 1) as f64 * h);
            if !near_zero(k) {
                panels.push((p0, p1));
                continue;
            }
            // split the panel touching 0 into [h/2, h], [h/4, h/2], ...
            let sign = if lo < 0.0 { -1.0 } else { 1.0 };
            let mut outer = h;
            for _ in 0..LEVELS {
                let inner = outer / 2.0;
                panels.push((sign * inner, sign * outer));
                outer = inner;
            }
            panels.push((0.0, sign * outer));
        }
    }
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for (p0, p1) in panels {
        let (lo, hi) = if p0 < p1 { (p0, p1) } else { (p1, p0) };
        for &(t, wt) in gl.iter() {
            xs.push(lo + (hi - lo) * (t + 1.0) / 2.0);
            ws.push(wt * (hi - lo) / 2.0);
        }
    }
    Ok((xs, ws))
}

/// Three-term recurrence x pₖ = √βₖ₊₁ pₖ₊₁ + αₖ pₖ + √βₖ pₖ₋₁ for the
/// orthonormal polynomials, with β₀ the total mass of the weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OPRecurrence {
    pub alpha_k: Vec<f64>,
    pub beta_k: Vec<f64>,
    pub j_max: usize,
    pub quad_points: usize,
}

fn stieltjes(x: &[f64], w: &[f64], j_max: usize) -> Result<OPRecurrence> {
    let mu0: f64 = w.iter().sum();
    let mut alpha_k = Vec::with_capacity(j_max);
    let mut beta_k = vec![mu0];
    let mut prev = vec![0.0; x.len()];
    let mut cur = vec![1.0 / mu0.sqrt(); x.len()];
    for j in 0..j_max {
        let a: f64 = (0..x.len()).map(|i| w[i] * x[i] * cur[i] * cur[i]).sum();
        let b = if j == 0 { 0.0 } else { beta_k[j].sqrt() };
        let mut next: Vec<f64> = (0..x.len()).map(|i| (x[i] - a) * cur[i] - b * prev[i]).collect();
        let nrm2: f64 = (0..x.len()).map(|i| w[i] * next[i] * next[i]).sum();
        if !(nrm2 > 0.0) {
            return Err(Error::Domain(format!("recurrence broke down at degree {}", j + 1)));
        }
        let nrm = nrm2.sqrt();
        next.iter_mut().for_each(|v| *v /= nrm);
        alpha_k.push(a);
        beta_k.push(nrm2);
        prev = cur;
        cur = next;
    }
    Ok(OPRecurrence { alpha_k, beta_k, j_max, quad_points: 0 })
}

/// αₖ (k < n) and βₖ (k ≤ n), verified against a rule with twice the points.
pub fn build_recurrence(cfg: &EnsembleConfig, quad_points: usize) -> Result<OPRecurrence> {
    let run = |q: usize| -> Result<OPRecurrence> {
        let (x, w) = composite_rule(cfg, q)?;
        let wt: Vec<f64> = x.iter().zip(&w).map(|(&x, &w)| w * cfg.weight(x)).collect();
        stieltjes(&x, &wt, cfg.n)
    };
    let mut rec = run(quad_points)?;
    let fine = run(2 * quad_points)?;
    let change = rec
        .beta_k
        .iter()
        .zip(&fine.beta_k)
        .map(|(a, b)| ((a - b) / b).abs())
        .chain(rec.alpha_k.iter().zip(&fine.alpha_k).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    if change > RECURRENCE_TOL {
        return Err(Error::QuadratureNotConverged(change));
    }
    rec.quad_points = quad_points;
    Ok(rec)
}

impl OPRecurrence {
    /// p₀(x), …, p_{j_max}(x).
    pub fn polys(&self, x: f64) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.j_max + 1);
        p.push(1.0 / self.beta_k[0].sqrt());
        let mut prev = 0.0;
        for k in 0..self.j_max {
            let b = if k == 0 { 0.0 } else { self.beta_k[k].sqrt() };
            let next = ((x - self.alpha_k[k]) * p[k] - b * prev) / self.beta_k[k + 1].sqrt();
            prev = p[k];
            p.push(next);
        }
        p
    }
}

/// K_{n,N}(x, y) with the weight factors |x|^α|y|^α e^{−N(V(x)+V(y))/2}.
pub fn cd_kernel(cfg: &EnsembleConfig, rec: &OPRecurrence, x: f64, y: f64) -> Result<f64> {
    let n = cfg.n;
    if rec.j_max < n {
        return Err(Error::InvalidInput(format!("recurrence has {} terms, n = {n}", rec.j_max)));
    }
    let px = rec.polys(x);
    let py = rec.polys(y);
    let f = (cfg.weight(x) * cfg.weight(y)).sqrt();
    let core = if (x - y).abs() < CD_SWITCH {
        (0..n).map(|j| px[j] * py[j]).sum::<f64>()
    } else {
        rec.beta_k[n].sqrt() * (px[n] * py[n - 1] - px[n - 1] * py[n]) / (x - y)
    };
    Ok(f * core)
}

/// ∫ K_{n,N}(x, x) dx on a rule independent of the one used for the recurrence.
pub fn trace(cfg: &EnsembleConfig, rec: &OPRecurrence, points: usize) -> Result<f64> {
    let (x, w) = composite_rule(cfg, points)?;
    x.iter().zip(&w).map(|(&x, &w)| Ok(w * cd_kernel(cfg, rec, x, x)?)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeComparison {
    pub n: usize,
    pub big_n: f64,
    pub alpha: f64,
    pub s: f64,
    pub grid: Vec<f64>,
    /// (c₁n)^{−2/3} K_{n,N}(x/(c₁n)^{2/3}, y/(c₁n)^{2/3})
    pub finite: Vec<Vec<f64>>,
    pub edge: Vec<Vec<f64>>,
    pub sup_error: f64,
}

/// Scaled finite-n kernel against the edge kernel on grid × grid.
pub fn edge_compare(cfg: &EnsembleConfig, rec: &OPRecurrence, p34: &P34Solution, grid: &[f64]) -> Result<EdgeComparison> {
    let sc = cfg.scale();
    let edge = kernel_grid(cfg.alpha, cfg.s, grid, grid, p34)?.values;
    let finite: Vec<Vec<f64>> = grid
        .iter()
        .map(|&x| grid.iter().map(|&y| Ok(cd_kernel(cfg, rec, x / sc, y / sc)? / sc)).collect())
        .collect::<Result<_>>()?;
    let sup_error = finite
        .iter()
        .flatten()
        .zip(edge.iter().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(EdgeComparison {
        n: cfg.n,
        big_n: cfg.big_n,
        alpha: cfg.alpha.value(),
        s: cfg.s,
        grid: grid.to_vec(),
        finite,
        edge,
        sup_error,
    })
}

impl EdgeComparison {
    pub fn to_csv(&self, meta: &[(&str, String)]) -> String {
        let mut rows = Vec::new();
        for (i, &x) in self.grid.iter().enumerate() {
            for (j, &y) in self.grid.iter().enumerate() {
                let (a, b) = (self.finite[i][j], self.edge[i][j]);
                rows.push(vec![x, y, a, b, (a - b).abs()]);
            }
        }
        io::csv(meta, &["x", "y", "k_finite", "k_edge", "abs_diff"], rows)
    }
}
