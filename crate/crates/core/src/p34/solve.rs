//! Trajectory solver for the distinguished solution.
//!
//! The equation is integrated as the polynomial system
//!     u' = p,  p' = 4u² + 2su + 2w,  w' = p(2u + s),   4uw = p² − 4α²,
//! which is regular at zeros of u.
//!
//! For s > 0 the linearization has one mode growing leftward roughly like
//! e^{(4/3)s^{3/2}}, so a single leftward sweep from large s loses all
//! accuracy. The trajectory is built as
//! * s ≥ s0: the asymptotic series at optimal truncation;
//! * a chain of leftward segments ending at anchors sₖ < s0, where (u, u') is
//!   pinned by the monodromy conditions of the Lax equation. In each segment
//!   the starting value of u is shifted by Newton shooting until the
//!   component of the mismatch at the anchor along the growing mode
//!   vanishes, so only the well-determined part of each anchor is used;
//! * below the last anchor: a free leftward sweep.
//!
//! Error estimates follow the propagation of perturbations through the
//! linearized system, carried along as variational solutions.

use super::{d_pm, fit_at, optimal_sum, series_coeffs, Alpha, MonodromyFit, SeriesCoeffs, SeriesEval, SERIES_NMAX};
use nalgebra::{DMatrix, DVector, Matrix2};
use crate::error::{Error, Result};
use crate::ode::Dopri;
use serde::Serialize;

pub const S0_DEFAULT: f64 = 10.0;
/// candidates for the anchor closing the multiple-shooting piece
pub const TOP_ANCHORS: [f64; 3] = [3.5, 4.5, 2.5];
/// anchors of the single-shooting chain below it
pub const ANCHORS: [f64; 3] = [2.5, 1.5, 0.5];
/// bound on the growth exponent across one shooting interval
const NODE_GROWTH: f64 = 4.0;
pub const ACCURACY_TARGET: f64 = 1e-6;
const RTOL: f64 = 1e-13;
/// safety factor on the anchor accuracy residual / smallest singular value
const ANCHOR_SAFETY: f64 = 10.0;

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct AnchorInfo {
    pub s: f64,
    pub residual: f64,
    pub sigma_min: f64,
    /// shift applied to u at the start of the segment by shooting
    pub shift: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SolveInfo {
    pub anchors: Vec<AnchorInfo>,
    /// anchors at which the monodromy fit failed
    pub failed_anchors: Vec<f64>,
    /// first omitted series term at s0
    pub series_tail: f64,
    /// maximum of |4uw − p² + 4α²| over the grid
    pub constraint_drift: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct P34Solution {
    pub alpha: Alpha,
    pub s_grid: Vec<f64>,
    pub u: Vec<f64>,
    pub u_prime: Vec<f64>,
    pub w: Vec<f64>,
    /// modelled absolute error of u at each grid point
    pub err_est: Vec<f64>,
    pub s0: f64,
    pub n_series: usize,
    pub tol: f64,
    pub valid_interval: (f64, f64),
    pub info: SolveInfo,
}

fn rhs3(s: f64, y: &[f64; 3]) -> [f64; 3] {
    let (u, p, w) = (y[0], y[1], y[2]);
    [p, 4.0 * u * u + 2.0 * s * u + 2.0 * w, p * (2.0 * u + s)]
}

fn lin(s: f64, y: &[f64], d: &[f64]) -> [f64; 3] {
    let (u, p) = (y[0], y[1]);
    [d[1], (8.0 * u + 2.0 * s) * d[0] + 2.0 * d[2], d[1] * (2.0 * u + s) + 2.0 * p * d[0]]
}

/// The system with one variational solution.
fn rhs6(s: f64, y: &[f64; 6]) -> [f64; 6] {
    let f = rhs3(s, &[y[0], y[1], y[2]]);
    let d = lin(s, y, &y[3..6]);
    [f[0], f[1], f[2], d[0], d[1], d[2]]
}

/// The system with two variational solutions.
fn rhs9(s: f64, y: &[f64; 9]) -> [f64; 9] {
    let f = rhs3(s, &[y[0], y[1], y[2]]);
    let d1 = lin(s, y, &y[3..6]);
    let d2 = lin(s, y, &y[6..9]);
    [f[0], f[1], f[2], d1[0], d1[1], d1[2], d2[0], d2[1], d2[2]]
}

/// Perturbations of (u, p) completed so that 4uw − p² is kept to first order.
fn variation(y: &[f64; 3], du: f64, dp: f64) -> [f64; 3] {
    let (u, p, w) = (y[0], y[1], y[2]);
    let dw = if u.abs() > 1e-8 { (2.0 * p * dp - 4.0 * w * du) / (4.0 * u) } else { 0.0 };
    [du, dp, dw]
}

fn big_f(s: f64) -> f64 {
    4.0 / 3.0 * s.max(0.0).powf(1.5)
}

fn w_of(alpha: f64, u: f64, p: f64) -> f64 {
    (p * p - 4.0 * alpha * alpha) / (4.0 * u)
}

fn check_state(alpha: f64, s: f64, u: f64, p: f64) -> Result<()> {
    if !u.is_finite() || !p.is_finite() || u.abs() > 1e8 {
        return Err(Error::BlowUp { s });
    }
    if alpha != 0.0 && u.abs() < 1e-13 && p.abs() < 1e-13 {
        return Err(Error::BlowUp { s });
    }
    Ok(())
}

fn as_blowup(e: Error, s: f64) -> Error {
    match e {
        Error::Integration(_) => Error::BlowUp { s },
        other => other,
    }
}

/// Uniform grid from s_min to s_max with spacing at most `step`.
pub fn uniform_grid(s_min: f64, s_max: f64, step: f64) -> Vec<f64> {
    let n = ((s_max - s_min) / step - 1e-9).ceil().max(1.0) as usize;
    let h = (s_max - s_min) / n as f64;
    (0..=n).map(|k| if k == n { s_max } else { s_min + k as f64 * h }).collect()
}

struct Sweep {
    /// state and variation at each stop
    states: Vec<[f64; 6]>,
}

fn sweep(alpha: f64, s_from: f64, y: [f64; 3], shift: f64, stops: &[f64]) -> Result<Sweep> {
    let mut y0 = y;
    y0[0] += shift;
    y0[2] = w_of(alpha, y0[0], y0[1]);
    let v = variation(&y0, 1.0, 0.0);
    let start = [y0[0], y0[1], y0[2], v[0], v[1], v[2]];
    let mut states = Vec::with_capacity(stops.len());
    let mut last_s = s_from;
    Dopri::with_tol(RTOL)
        .integrate(rhs6, s_from, start, stops, |_, s, y, _| {
            check_state(alpha, s, y[0], y[1])?;
            last_s = s;
            states.push(*y);
            Ok(())
        })
        .map_err(|e| as_blowup(e, last_s))?;
    Ok(Sweep { states })
}

type M2 = Matrix2<f64>;

fn jac9(y: &[f64; 9]) -> M2 {
    M2::new(y[3], y[6], y[4], y[7])
}

fn smax(m: &M2) -> f64 {
    m.singular_values().max()
}

fn smin(m: &M2) -> f64 {
    m.singular_values().min()
}

fn anchor_eps(fit: &MonodromyFit) -> f64 {
    ANCHOR_SAFETY * fit.residual.max(1e-14) / fit.sigma.1.max(1e-3)
}

/// The system with two variational solutions started from (u, p) at `s_from`.
fn flow9(alpha: f64, s_from: f64, x: [f64; 2], stops: &[f64]) -> Result<Vec<[f64; 9]>> {
    let y = [x[0], x[1], w_of(alpha, x[0], x[1])];
    let v1 = variation(&y, 1.0, 0.0);
    let v2 = variation(&y, 0.0, 1.0);
    let y0 = [y[0], y[1], y[2], v1[0], v1[1], v1[2], v2[0], v2[1], v2[2]];
    let mut out = Vec::with_capacity(stops.len());
    let mut last_s = s_from;
    Dopri::with_tol(RTOL)
        .integrate(rhs9, s_from, y0, stops, |_, s, y, _| {
            check_state(alpha, s, y[0], y[1])?;
            last_s = s;
            out.push(*y);
            Ok(())
        })
        .map_err(|e| as_blowup(e, last_s))?;
    Ok(out)
}

/// Node values of the multiple-shooting solution on [sₐ, s0].
struct TopPiece {
    nodes: Vec<f64>,
    x: Vec<[f64; 2]>,
    fit: MonodromyFit,
    /// propagators from s0 to each node
    up: Vec<M2>,
    /// propagators from each node to the anchor
    down: Vec<M2>,
}

fn shooting_nodes(s0: f64, sa: f64) -> Vec<f64> {
    let mut t = vec![s0];
    loop {
        let last = *t.last().unwrap();
        let f = big_f(last) - NODE_GROWTH;
        let next = if f <= big_f(sa) { sa } else { (0.75 * f).powf(2.0 / 3.0) };
        let next = next.max(last - 1.0).max(sa);
        t.push(next);
        if next == sa {
            return t;
        }
    }
}

/// Newton on node values: continuity between nodes, u' at s0 from the
/// series, and the growing-mode component of (u, u') at the anchor from the
/// monodromy fit.
fn top_piece(alpha: f64, coeffs: &SeriesCoeffs, start: &SeriesEval, sa: f64) -> Result<TopPiece> {
    let nodes = shooting_nodes(S0_DEFAULT, sa);
    let m = nodes.len() - 1;
    let mut x: Vec<[f64; 2]> = nodes
        .iter()
        .map(|&t| {
            let e = optimal_sum(coeffs, t);
            [e.value, e.derivative]
        })
        .collect();
    x[0] = [start.value, start.derivative];
    let fit = fit_at(alpha, sa, (x[m][0], x[m][1]))?;
    let dim = 2 * (m + 1);
    let eval = |x: &[[f64; 2]]| -> Result<(Vec<f64>, Vec<M2>)> {
        let mut r = vec![0.0; dim];
        let mut js = Vec::with_capacity(m);
        r[0] = x[0][1] - start.derivative;
        for j in 0..m {
            let y = flow9(alpha, nodes[j], x[j], &[nodes[j + 1]])?[0];
            r[1 + 2 * j] = y[0] - x[j + 1][0];
            r[2 + 2 * j] = y[1] - x[j + 1][1];
            js.push(jac9(&y));
        }
        Ok((r, js))
    };
    let norm = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>().sqrt();
    let (mut r, mut js) = eval(&x)?;
    for _ in 0..40 {
        let mut prod = M2::identity();
        for jm in &js {
            prod = jm * prod;
        }
        let svd = prod.svd(true, false);
        let k = if svd.singular_values[0] >= svd.singular_values[1] { 0 } else { 1 };
        let uu = svd.u.unwrap();
        let bhat = [uu[(0, k)], uu[(1, k)]];
        r[dim - 1] = bhat[0] * (x[m][0] - fit.u) + bhat[1] * (x[m][1] - fit.up);
        let mut jm = DMatrix::<f64>::zeros(dim, dim);
        jm[(0, 1)] = 1.0;
        for j in 0..m {
            for a in 0..2 {
                for b in 0..2 {
                    jm[(1 + 2 * j + a, 2 * j + b)] = js[j][(a, b)];
                }
                jm[(1 + 2 * j + a, 2 * j + 2 + a)] = -1.0;
            }
        }
        jm[(dim - 1, 2 * m)] = bhat[0];
        jm[(dim - 1, 2 * m + 1)] = bhat[1];
        let rhs = DVector::from_iterator(dim, r.iter().map(|v| -v));
        let delta = jm
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Integration("singular shooting system".into()))?;
        let r0 = norm(&r);
        let mut lam = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let cand: Vec<[f64; 2]> = (0..=m).map(|j| [x[j][0] + lam * delta[2 * j], x[j][1] + lam * delta[2 * j + 1]]).collect();
            if let Ok((mut rc, jc)) = eval(&cand) {
                rc[dim - 1] = bhat[0] * (cand[m][0] - fit.u) + bhat[1] * (cand[m][1] - fit.up);
                if norm(&rc) <= r0 || lam < 1.0 / 1024.0 {
                    x = cand;
                    r = rc;
                    js = jc;
                    accepted = true;
                    break;
                }
            }
            lam *= 0.5;
        }
        if !accepted {
            break;
        }
        let small = (0..dim).all(|i| delta[i].abs() <= 4.0 * f64::EPSILON * (1.0 + x[i / 2][i % 2].abs()));
        if small {
            break;
        }
    }
    let cont = norm(&r[1..dim - 1]);
    let scale = 1.0 + x.iter().map(|v| v[0].abs() + v[1].abs()).fold(0.0, f64::max);
    if !(cont <= 1e-10 * scale) {
        return Err(Error::NotConverged(cont));
    }
    let mut up = vec![M2::identity()];
    for j in 0..m {
        let next = js[j] * up[j];
        up.push(next);
    }
    let mut down = vec![M2::identity(); m + 1];
    for j in (0..m).rev() {
        down[j] = down[j + 1] * js[j];
    }
    Ok(TopPiece { nodes, x, fit, up, down })
}

pub fn solve_u(alpha: Alpha, s_min: f64, s_max: f64, step: f64, tol: f64) -> Result<P34Solution> {
    if !(s_min < s_max) || !s_min.is_finite() || !s_max.is_finite() {
        return Err(Error::InvalidInput(format!("need s_min < s_max, got [{s_min}, {s_max}]")));
    }
    if !(step > 0.0) {
        return Err(Error::InvalidInput("step must be positive".into()));
    }
    if !(1e-12..=1e-6).contains(&tol) {
        return Err(Error::InvalidInput(format!("tol must lie in [1e-12, 1e-6], got {tol}")));
    }
    let grid = uniform_grid(s_min, s_max, step);
    let n = grid.len();
    let a = alpha.value();
    let mut info = SolveInfo {
        anchors: Vec::new(),
        failed_anchors: Vec::new(),
        series_tail: 0.0,
        constraint_drift: 0.0,
    };
    if a == 0.0 {
        return Ok(P34Solution {
            alpha,
            s_grid: grid,
            u: vec![0.0; n],
            u_prime: vec![0.0; n],
            w: vec![0.0; n],
            err_est: vec![0.0; n],
            s0: S0_DEFAULT,
            n_series: 0,
            tol,
            valid_interval: (s_min, s_max),
            info,
        });
    }

    let coeffs = series_coeffs(alpha, SERIES_NMAX)?;
    let dmag = d_pm(alpha)?.0.norm();
    let series_err = |s: f64, next: f64| next + dmag * s.powf(-3.0 * a + 0.5) * (-big_f(s)).exp();
    let mut u = vec![0.0; n];
    let mut up = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut err = vec![0.0; n];

    for k in 0..n {
        let s = grid[k];
        if s >= S0_DEFAULT {
            let e = optimal_sum(&coeffs, s);
            u[k] = e.value;
            up[k] = e.derivative;
            w[k] = w_of(a, u[k], up[k]);
            err[k] = series_err(s, e.next_term);
        }
    }
    let start = optimal_sum(&coeffs, S0_DEFAULT);
    info.series_tail = start.next_term;
    let n_series = start.n_terms;
    if grid[0] >= S0_DEFAULT {
        return finish(alpha, grid, u, up, w, err, n_series, tol, info);
    }

    // multiple shooting between s0 and the top anchor
    let mut cur_s = S0_DEFAULT;
    let mut cur_y = [start.value, start.derivative, w_of(a, start.value, start.derivative)];
    let tau0 = series_err(S0_DEFAULT, start.next_term);
    let mut cur_err = tau0;
    let mut top = None;
    for &sa in &TOP_ANCHORS {
        match top_piece(a, &coeffs, &start, sa) {
            Ok(t) => {
                top = Some(t);
                break;
            }
            Err(_) => info.failed_anchors.push(sa),
        }
    }
    if let Some(t) = &top {
        let m = t.nodes.len() - 1;
        info.anchors.push(AnchorInfo {
            s: t.fit.s,
            residual: t.fit.residual,
            sigma_min: t.fit.sigma.1,
            shift: t.x[0][0] - start.value,
        });
        let eps = anchor_eps(&t.fit);
        for j in 0..m {
            let (hi, lo) = (t.nodes[j], t.nodes[j + 1]);
            let idx: Vec<usize> = (0..n).rev().filter(|&k| grid[k] > lo && grid[k] <= hi && grid[k] < S0_DEFAULT).collect();
            if idx.is_empty() {
                continue;
            }
            let stops: Vec<f64> = idx.iter().map(|&k| grid[k]).collect();
            let ys = flow9(a, hi, t.x[j], &stops)?;
            for (i, &k) in idx.iter().enumerate() {
                let y = &ys[i];
                let js = jac9(y);
                u[k] = y[0];
                up[k] = y[1];
                w[k] = y[2];
                let to_anchor = js.try_inverse().map(|inv| smax(&(t.down[j] * inv))).unwrap_or(1.0);
                err[k] = eps / to_anchor.max(1.0) + tau0 * smin(&(js * t.up[j])) + 10.0 * RTOL;
            }
        }
        cur_s = t.fit.s;
        let xm = t.x[m];
        cur_y = [xm[0], xm[1], w_of(a, xm[0], xm[1])];
        cur_err = eps + tau0 * smin(&t.up[m]) + 10.0 * RTOL;
    }

    // single-shooting chain below the top anchor
    let mut anchors: Vec<f64> = ANCHORS.iter().copied().filter(|&x| x > s_min && x < cur_s).collect();
    let last = ANCHORS[ANCHORS.len() - 1];
    if s_min >= last && s_min < cur_s {
        anchors.push(s_min);
    }
    for &sa in &anchors {
        let idx: Vec<usize> = (0..n)
            .rev()
            .filter(|&k| grid[k] > sa && grid[k] < S0_DEFAULT && grid[k] <= cur_s)
            .collect();
        let mut stops: Vec<f64> = idx.iter().map(|&k| grid[k]).collect();
        stops.push(sa);
        let mut run = sweep(a, cur_s, cur_y, 0.0, &stops)?;
        let end = *run.states.last().unwrap();
        let mut anchor_err = None;
        match fit_at(a, sa, (end[0], end[1])) {
            Ok(fit) => {
                let mut shift = 0.0;
                for _ in 0..12 {
                    let e = *run.states.last().unwrap();
                    let (bu, bp) = (e[3], e[4]);
                    let c_b = ((e[0] - fit.u) * bu + (e[1] - fit.up) * bp) / (bu * bu + bp * bp);
                    let mut lam = 1.0;
                    let mut next = None;
                    for _ in 0..10 {
                        if let Ok(r) = sweep(a, cur_s, cur_y, shift - lam * c_b, &stops) {
                            next = Some(r);
                            break;
                        }
                        lam *= 0.5;
                    }
                    let Some(r) = next else { break };
                    shift -= lam * c_b;
                    run = r;
                    if (c_b * bu).hypot(c_b * bp) < 1e-14 * (1.0 + fit.u.abs() + fit.up.abs()) {
                        break;
                    }
                }
                info.anchors.push(AnchorInfo {
                    s: sa,
                    residual: fit.residual,
                    sigma_min: fit.sigma.1,
                    shift,
                });
                anchor_err = Some(anchor_eps(&fit));
            }
            Err(_) => info.failed_anchors.push(sa),
        }
        let end = *run.states.last().unwrap();
        let b_end = end[3].hypot(end[4]);
        for (j, &k) in idx.iter().enumerate() {
            let y = run.states[j];
            u[k] = y[0];
            up[k] = y[1];
            w[k] = y[2];
            let b = y[3].hypot(y[4]);
            err[k] = match anchor_err {
                Some(eps) => eps * b / b_end + cur_err + 10.0 * RTOL,
                None => (cur_err + 10.0 * RTOL) * b,
            };
        }
        cur_err = match anchor_err {
            Some(eps) => eps + 10.0 * RTOL,
            None => (cur_err + 10.0 * RTOL) * b_end,
        };
        cur_s = sa;
        cur_y = [end[0], end[1], end[2]];
    }

    // free sweep below the last anchor
    let idx: Vec<usize> = (0..n).rev().filter(|&k| grid[k] <= cur_s && grid[k] < S0_DEFAULT).collect();
    if !idx.is_empty() {
        let stops: Vec<f64> = idx.iter().map(|&k| grid[k]).collect();
        let v1 = variation(&cur_y, 1.0, 0.0);
        let v2 = variation(&cur_y, 0.0, 1.0);
        let y0 = [cur_y[0], cur_y[1], cur_y[2], v1[0], v1[1], v1[2], v2[0], v2[1], v2[2]];
        let mut j = 0;
        let mut last_s = cur_s;
        Dopri::with_tol(RTOL)
            .integrate(rhs9, cur_s, y0, &stops, |_, s, y, _| {
                check_state(a, s, y[0], y[1])?;
                let k = idx[j];
                u[k] = y[0];
                up[k] = y[1];
                w[k] = y[2];
                let g = y[3].hypot(y[4]).max(y[6].hypot(y[7]));
                err[k] = (cur_err + 10.0 * RTOL) * g;
                last_s = s;
                j += 1;
                Ok(())
            })
            .map_err(|e| as_blowup(e, last_s))?;
    }
    finish(alpha, grid, u, up, w, err, n_series, tol, info)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    alpha: Alpha,
    grid: Vec<f64>,
    u: Vec<f64>,
    up: Vec<f64>,
    w: Vec<f64>,
    err: Vec<f64>,
    n_series: usize,
    tol: f64,
    mut info: SolveInfo,
) -> Result<P34Solution> {
    let a = alpha.value();
    info.constraint_drift = (0..grid.len())
        .map(|k| (4.0 * u[k] * w[k] - up[k] * up[k] + 4.0 * a * a).abs())
        .fold(0.0, f64::max);
    let mut best = (0usize, 0usize, false);
    let mut run_start = None;
    for k in 0..=grid.len() {
        let ok = k < grid.len() && err[k] <= ACCURACY_TARGET;
        match (ok, run_start) {
            (true, None) => run_start = Some(k),
            (false, Some(st)) => {
                if !best.2 || k - st > best.1 - best.0 + 1 {
                    best = (st, k - 1, true);
                }
                run_start = None;
            }
            _ => {}
        }
    }
    let valid_interval = if best.2 { (grid[best.0], grid[best.1]) } else { (f64::NAN, f64::NAN) };
    Ok(P34Solution {
        alpha,
        s_grid: grid,
        u,
        u_prime: up,
        w,
        err_est: err,
        s0: S0_DEFAULT,
        n_series,
        tol,
        valid_interval,
        info,
    })
}

impl P34Solution {
    /// Columns `s,u,u_prime`.
    pub fn to_csv(&self, meta: &[(&str, String)]) -> String {
        crate::io::csv(
            meta,
            &["s", "u", "u_prime"],
            (0..self.s_grid.len()).map(|i| vec![self.s_grid[i], self.u[i], self.u_prime[i]]),
        )
    }

    pub fn is_valid_at(&self, s: f64) -> bool {
        s >= self.valid_interval.0 - 1e-12 && s <= self.valid_interval.1 + 1e-12
    }

    pub fn check_valid(&self, s: f64) -> Result<()> {
        if self.is_valid_at(s) {
            Ok(())
        } else {
            Err(Error::OutOfValidity {
                s,
                lo: self.valid_interval.0,
                hi: self.valid_interval.1,
            })
        }
    }

    fn locate(&self, s: f64) -> Result<usize> {
        let g = &self.s_grid;
        if s < g[0] - 1e-12 || s > g[g.len() - 1] + 1e-12 {
            return Err(Error::OutOfValidity {
                s,
                lo: g[0],
                hi: g[g.len() - 1],
            });
        }
        Ok(match g.binary_search_by(|x| x.partial_cmp(&s).unwrap()) {
            Ok(i) => i,
            Err(i) => i.clamp(1, g.len() - 1) - 1,
        })
    }

    /// (u, u', w) at an arbitrary s by quintic Hermite interpolation of u
    /// (using u'' from the equation) and cubic Hermite interpolation of w.
    pub fn interpolate(&self, s: f64) -> Result<(f64, f64, f64)> {
        let i = self.locate(s)?;
        if self.s_grid[i] == s || i + 1 >= self.s_grid.len() {
            return Ok((self.u[i], self.u_prime[i], self.w[i]));
        }
        let (s0, s1) = (self.s_grid[i], self.s_grid[i + 1]);
        let h = s1 - s0;
        let t = (s - s0) / h;
        let y0 = [self.u[i], self.u_prime[i], self.w[i]];
        let y1 = [self.u[i + 1], self.u_prime[i + 1], self.w[i + 1]];
        let d0 = rhs3(s0, &y0);
        let d1 = rhs3(s1, &y1);
        let (u, du) = quintic(t, h, [y0[0], y0[1], d0[1]], [y1[0], y1[1], d1[1]]);
        let (w, _) = cubic(t, h, [y0[2], d0[2]], [y1[2], d1[2]]);
        Ok((u, du, w))
    }

    /// (u, u', w) at s by integrating the system from the nearest grid node.
    pub fn state_at(&self, s: f64) -> Result<(f64, f64, f64)> {
        let i = self.locate(s)?;
        let j = if i + 1 < self.s_grid.len() && (self.s_grid[i + 1] - s).abs() < (s - self.s_grid[i]).abs() {
            i + 1
        } else {
            i
        };
        if self.s_grid[j] == s || self.alpha.value() == 0.0 {
            return Ok((self.u[j], self.u_prime[j], self.w[j]));
        }
        let y0 = [self.u[j], self.u_prime[j], self.w[j]];
        let y = Dopri::with_tol(RTOL).integrate(rhs3, self.s_grid[j], y0, &[s], |_, _, _, _| Ok(()))?;
        Ok((y[0], y[1], y[2]))
    }

    /// Relative residuals |u'' − RHS|/(1 + |u''|) at interior nodes, with u''
    /// from an eighth-order central difference of u'. Nodes within 1e−3 of a
    /// zero of u are skipped.
    pub fn residual_profile(&self) -> Vec<(f64, f64)> {
        let n = self.s_grid.len();
        if n < 9 || self.alpha.value() == 0.0 {
            return Vec::new();
        }
        let h = self.s_grid[1] - self.s_grid[0];
        let mut zeros = Vec::new();
        for k in 0..n - 1 {
            if self.u[k] == 0.0 || self.u[k].signum() != self.u[k + 1].signum() {
                let t = self.u[k] / (self.u[k] - self.u[k + 1]);
                zeros.push(self.s_grid[k] + t * h);
            }
        }
        const C: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
        let a2 = 4.0 * self.alpha.value().powi(2);
        let mut out = Vec::with_capacity(n);
        for k in 4..n - 4 {
            let s = self.s_grid[k];
            if zeros.iter().any(|z| (z - s).abs() < 1e-3) {
                continue;
            }
            let mut d = 0.0;
            for (m, c) in C.iter().enumerate() {
                d += c * (self.u_prime[k + m + 1] - self.u_prime[k - m - 1]);
            }
            let upp = d / h;
            let (u, p) = (self.u[k], self.u_prime[k]);
            let rhs = 4.0 * u * u + 2.0 * s * u + (p * p - a2) / (2.0 * u);
            out.push((s, (upp - rhs).abs() / (1.0 + upp.abs())));
        }
        out
    }

    pub fn residual_max(&self) -> f64 {
        self.residual_profile().iter().map(|r| r.1).fold(0.0, f64::max)
    }
}

fn quintic(t: f64, h: f64, y0: [f64; 3], y1: [f64; 3]) -> (f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    let h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    let h20 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    let h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    let h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    let h21 = 0.5 * (t3 - 2.0 * t4 + t5);
    let v = h00 * y0[0] + h * h10 * y0[1] + h * h * h20 * y0[2] + h01 * y1[0] + h * h11 * y1[1] + h * h * h21 * y1[2];
    let d00 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
    let d10 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
    let d20 = 0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4);
    let d01 = -d00;
    let d11 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
    let d21 = 0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4);
    let d = (d00 * y0[0] + d01 * y1[0]) / h + d10 * y0[1] + d11 * y1[1] + h * (d20 * y0[2] + d21 * y1[2]);
    (v, d)
}

fn cubic(t: f64, h: f64, y0: [f64; 2], y1: [f64; 2]) -> (f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0[0] + (t3 - 2.0 * t2 + t) * h * y0[1] + (-2.0 * t3 + 3.0 * t2) * y1[0] + (t3 - t2) * h * y1[1];
    let d = ((6.0 * t2 - 6.0 * t) * y0[0] + (-6.0 * t2 + 6.0 * t) * y1[0]) / h + (3.0 * t2 - 4.0 * t + 1.0) * y0[1] + (3.0 * t2 - 2.0 * t) * y1[1];
    (v, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p34::u_closed_form_alpha1;

    #[test]
    fn alpha_zero_is_identically_zero() {
        let sol = solve_u(Alpha::new(0.0).unwrap(), -5.0, 5.0, 0.1, 1e-10).unwrap();
        assert!(sol.u.iter().all(|&x| x == 0.0));
        assert_eq!(sol.valid_interval, (-5.0, 5.0));
    }

    #[test]
    fn rejects_bad_arguments() {
        let a = Alpha::new(1.0).unwrap();
        assert!(solve_u(a, 1.0, 0.0, 0.1, 1e-10).is_err());
        assert!(solve_u(a, 0.0, 1.0, 0.1, 1e-3).is_err());
        assert!(solve_u(a, 0.0, 1.0, -0.1, 1e-10).is_err());
    }

    #[test]
    fn alpha_one_matches_closed_form() {
        let sol = solve_u(Alpha::new(1.0).unwrap(), -8.0, 6.0, 0.01, 1e-8).unwrap();
        let mut worst: f64 = 0.0;
        for (k, &s) in sol.s_grid.iter().enumerate() {
            let (u, up) = u_closed_form_alpha1(s);
            worst = worst.max((sol.u[k] - u).abs()).max((sol.u_prime[k] - up).abs());
        }
        assert!(worst < 1e-9, "worst {worst:e}, info {:?}", sol.info);
        assert_eq!(sol.valid_interval, (-8.0, 6.0));
        assert!(sol.residual_max() < 1e-8, "{}", sol.residual_max());
        assert!(sol.info.failed_anchors.is_empty());
    }

    #[test]
    fn residual_and_finiteness_for_several_alpha() {
        for v in [0.25, 0.5, 1.5] {
            let sol = solve_u(Alpha::new(v).unwrap(), -6.0, 8.0, 0.02, 1e-8).unwrap();
            assert!(sol.u.iter().chain(&sol.u_prime).all(|x| x.is_finite()));
            let r = sol.residual_max();
            assert!(r <= sol.tol, "alpha {v}: {r:e}");
        }
    }

    #[test]
    fn agrees_with_series_below_s0() {
        for v in [0.5, 1.0, 1.5] {
            let a = Alpha::new(v).unwrap();
            let s = S0_DEFAULT - 1.0;
            let sol = solve_u(a, s - 1.0, s + 0.5, 0.05, 1e-10).unwrap();
            let (u, _, _) = sol.state_at(s).unwrap();
            let e = crate::p34::u_series_optimal(a, s).unwrap();
            assert!((u - e.value).abs() <= 10.0 * e.next_term, "alpha {v}: {:e} vs {:e}", (u - e.value).abs(), e.next_term);
        }
    }

    #[test]
    fn grid_beyond_s0_uses_series() {
        let a = Alpha::new(1.0).unwrap();
        let sol = solve_u(a, 2.0, 25.0, 0.05, 1e-8).unwrap();
        let k = sol.s_grid.len() - 1;
        assert!((sol.u[k] - (0.2 - 1.0 / 625.0)).abs() < 2e-4);
        assert!(sol.residual_max() < 1e-8);
    }

    #[test]
    fn hermite_and_state_at() {
        let sol = solve_u(Alpha::new(1.0).unwrap(), -3.0, 3.0, 0.05, 1e-12).unwrap();
        for s in [-2.71, 0.013, 1.2345] {
            let (u, up) = u_closed_form_alpha1(s);
            let (ui, upi, _) = sol.interpolate(s).unwrap();
            assert!((ui - u).abs() < 1e-8 && (upi - up).abs() < 1e-6);
            let (ue, upe, _) = sol.state_at(s).unwrap();
            assert!((ue - u).abs() < 1e-9 && (upe - up).abs() < 1e-9);
        }
        assert!(sol.interpolate(5.0).is_err());
    }
}
