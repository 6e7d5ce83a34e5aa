//! Gap probabilities det(I − K|_{(t,∞)}) by Nyström discretization on
//! Gauss–Legendre nodes mapped through x = t + ξ/(1 − ξ).

use crate::error::{Error, Result};
use crate::io;
use crate::kernel::{grid_values, kernel_closed_form};
use crate::p34::{Alpha, P34Solution};
use crate::psi::lax_params;
use gauss_quad::GaussLegendre;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

/// Largest quadrature order used by the doubling loop.
pub const M_CAP: usize = 400;
/// Nodes mapped beyond t + X_CUT are dropped.
pub const X_CUT: f64 = 40.0;
pub const TOLERANCE: f64 = 1e-6;
/// Smallest supported left end of the gap.
pub const T_MIN: f64 = -30.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapResult {
    pub alpha: f64,
    pub s: f64,
    pub t: f64,
    pub det_value: f64,
    pub m: usize,
    /// |det_m − det_{2m}|
    pub est_error: f64,
}

fn rule(m: usize) -> Result<Vec<(f64, f64)>> {
    let r = GaussLegendre::new(m).map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(r.iter().map(|&(r, w)| (0.5 * (1.0 + r), 0.5 * w)).collect())
}

/// Mapped nodes x_i and the square roots of the mapped weights.
pub fn nodes(t: f64, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let pairs = rule(m)?.into_iter().map(|(xi, w)| {
        let one = 1.0 - xi;
        (t + xi / one, w / (one * one))
    });
    Ok(finish(t, pairs.collect()))
}

/// Nodes for kernels with a |x|^α-type point at the origin inside [t, ∞):
/// the gap is split at 0 and both pieces are graded by x ∝ τ² toward it.
pub fn graded_nodes(t: f64, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut pairs = Vec::with_capacity(m);
    let right = if t < 0.0 { m - m / 2 } else { m };
    for (tau, w) in rule(right)? {
        let xi = tau * tau;
        let one = 1.0 - xi;
        pairs.push((t.max(0.0) + xi / one, w * 2.0 * tau / (one * one)));
    }
    if t < 0.0 {
        for (tau, w) in rule(m / 2)? {
            pairs.push((t * tau * tau, w * 2.0 * tau * -t));
        }
    }
    Ok(finish(t, pairs))
}

fn finish(t: f64, pairs: Vec<(f64, f64)>) -> (Vec<f64>, Vec<f64>) {
    let mut pairs: Vec<(f64, f64)> = pairs.into_iter().filter(|&(x, _)| x <= t + X_CUT).map(|(x, w)| (x, w.sqrt())).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

/// Graded nodes are used when α is not an integer and 0 ∈ [t, ∞).
pub fn needs_grading(alpha: f64, t: f64) -> bool {
    alpha.fract() != 0.0 && t <= 0.0
}

fn nodes_for(alpha: f64, t: f64, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if needs_grading(alpha, t) {
        graded_nodes(t, m)
    } else {
        nodes(t, m)
    }
}

/// M_ij = √(w_i φ′_i) K(x_i, x_j) √(w_j φ′_j).
pub fn nystrom_matrix(x: &[f64], sw: &[f64], k: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(x.len(), x.len(), |i, j| sw[i] * k[i][j] * sw[j])
}

/// det(I − M) by LU with partial pivoting.
pub fn det_i_minus(m: &DMatrix<f64>) -> f64 {
    (DMatrix::identity(m.nrows(), m.ncols()) - m).lu().determinant()
}

fn check(t: f64, m: usize) -> Result<()> {
    if m < 10 || m > M_CAP {
        return Err(Error::InvalidInput(format!("quadrature order must lie in [10, {M_CAP}], got {m}")));
    }
    if !t.is_finite() || t < T_MIN {
        return Err(Error::InvalidInput(format!("t must be finite and at least {T_MIN}, got {t}")));
    }
    Ok(())
}

/// Order doubling from m until |det_m − det_2m| ≤ TOLERANCE or 2m passes the cap.
fn doubling(alpha: f64, s: f64, t: f64, m: usize, det: impl Fn(usize) -> Result<f64>) -> Result<GapResult> {
    check(t, m)?;
    let mut m = m;
    let mut d = det(m)?;
    loop {
        let d2 = det(2 * m)?;
        let est = (d - d2).abs();
        if est <= TOLERANCE {
            return Ok(GapResult { alpha, s, t, det_value: d, m, est_error: est });
        }
        if 4 * m > 2 * M_CAP {
            return Err(Error::NotConverged(est));
        }
        m *= 2;
        d = d2;
    }
}

/// Determinant at a single order with the ψ-based kernel.
pub fn det_at_order(alpha: Alpha, s: f64, t: f64, m: usize, p34: &P34Solution) -> Result<f64> {
    let p = lax_params(alpha, s, p34)?;
    let (x, sw) = nodes_for(alpha.value(), t, m)?;
    let (k, _) = grid_values(&p, &x, &x)?;
    Ok(det_i_minus(&nystrom_matrix(&x, &sw, &k)))
}

/// Determinant at a single order with the explicit α ∈ {0, 1} kernel.
pub fn det_at_order_closed_form(alpha: f64, s: f64, t: f64, m: usize) -> Result<f64> {
    let (x, sw) = nodes_for(alpha, t, m)?;
    let k: Vec<Vec<f64>> = x
        .iter()
        .map(|&a| x.iter().map(|&b| kernel_closed_form(alpha, s, a, b)).collect())
        .collect::<Result<_>>()?;
    Ok(det_i_minus(&nystrom_matrix(&x, &sw, &k)))
}

pub fn gap_probability(alpha: Alpha, s: f64, t: f64, m: usize, p34: &P34Solution) -> Result<GapResult> {
    doubling(alpha.value(), s, t, m, |k| det_at_order(alpha, s, t, k, p34))
}

/// The same engine on the explicit kernel, used as an oracle.
pub fn gap_probability_closed_form(alpha: f64, s: f64, t: f64, m: usize) -> Result<GapResult> {
    kernel_closed_form(alpha, s, 1.0, 2.0)?;
    doubling(alpha, s, t, m, |k| det_at_order_closed_form(alpha, s, t, k))
}

/// det(I − K|_{(t,∞)}) along an ascending t grid, one quadrature per t.
pub fn largest_eigenvalue_cdf(alpha: Alpha, s: f64, t_grid: &[f64], m: usize, p34: &P34Solution) -> Result<Vec<GapResult>> {
    if t_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput("t grid must be strictly ascending".into()));
    }
    t_grid.par_iter().map(|&t| gap_probability(alpha, s, t, m, p34)).collect()
}

/// Bounds [−1e−10, 1 + 1e−10] and monotonicity within 1e−8.
pub fn check_curve(curve: &[GapResult]) -> Result<()> {
    for r in curve {
        if !(r.det_value >= -1e-10 && r.det_value <= 1.0 + 1e-10) {
            return Err(Error::Domain(format!("determinant {} at t = {} outside [0, 1]", r.det_value, r.t)));
        }
    }
    for w in curve.windows(2) {
        if w[1].det_value < w[0].det_value - 1e-8 {
            return Err(Error::Domain(format!("distribution decreases between t = {} and {}", w[0].t, w[1].t)));
        }
    }
    Ok(())
}

pub fn curve_csv(meta: &[(&str, String)], curve: &[GapResult]) -> String {
    io::csv(meta, &["t", "det", "est_error"], curve.iter().map(|r| vec![r.t, r.det_value, r.est_error]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p34::solve_u;

    fn al(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    #[test]
    fn far_right_is_one() {
        let sol = solve_u(al(0.0), -2.0, 2.0, 0.5, 1e-10).unwrap();
        let r = gap_probability(al(0.0), 0.0, 15.0, 20, &sol).unwrap();
        assert!((r.det_value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn closed_form_equivalence_alpha_zero() {
        let sol = solve_u(al(0.0), -2.0, 2.0, 0.5, 1e-10).unwrap();
        for t in [-2.0, 0.0, 2.0] {
            let a = gap_probability(al(0.0), 0.0, t, 40, &sol).unwrap();
            let b = gap_probability_closed_form(0.0, 0.0, t, 40).unwrap();
            assert!((a.det_value - b.det_value).abs() <= 1e-8, "t {t}: {a:?} {b:?}");
        }
    }

    #[test]
    fn closed_form_equivalence_alpha_one() {
        let sol = solve_u(al(1.0), -2.0, 2.0, 0.01, 1e-10).unwrap();
        for t in [-4.0, -1.0, 0.0, 2.0] {
            let a = gap_probability(al(1.0), 0.0, t, 40, &sol).unwrap();
            let b = gap_probability_closed_form(1.0, 0.0, t, 40).unwrap();
            assert!((a.det_value - b.det_value).abs() <= 1e-7, "t {t}: {a:?} {b:?}");
        }
    }

    #[test]
    fn tracy_widom_values() {
        // F₂(−2) ≈ 0.4132, F₂(0) ≈ 0.9694 for the Airy kernel
        let f = gap_probability_closed_form(0.0, 0.0, -2.0, 40).unwrap();
        assert!((f.det_value - 0.413_224).abs() < 1e-5, "{f:?}");
        let f = gap_probability_closed_form(0.0, 0.0, 0.0, 40).unwrap();
        assert!((f.det_value - 0.969_372).abs() < 1e-5, "{f:?}");
        assert!(gap_probability_closed_form(0.0, 0.0, -8.0, 40).unwrap().det_value < 0.005);
    }

    #[test]
    fn order_doubling_converges_geometrically() {
        for v in [0.0, 1.0, 0.5] {
            let sol = solve_u(al(v), -2.0, 2.0, 0.01, 1e-10).unwrap();
            let d: Vec<f64> = [20, 40, 80, 160].iter().map(|&m| det_at_order(al(v), 0.0, 0.0, m, &sol).unwrap()).collect();
            let e: Vec<f64> = d.windows(2).map(|w| (w[0] - w[1]).abs()).collect();
            assert!(e[1] < e[0] && (e[2] < e[1] || e[2] < 1e-13), "alpha {v}: {e:?}");
        }
    }

    #[test]
    fn node_maps_integrate() {
        // ∫_t^∞ e^{−(x−t)} dx = 1 and ∫_{−1}^∞ e^{−x²} dx
        for t in [-3.0, 0.0, 2.0] {
            let (x, sw) = nodes(t, 60).unwrap();
            let v: f64 = x.iter().zip(&sw).map(|(x, w)| w * w * (-(x - t)).exp()).sum();
            assert!((v - 1.0).abs() < 1e-12, "{t} {v}");
        }
        let want = 0.5 * std::f64::consts::PI.sqrt() * (1.0 + 0.842_700_792_949_714_9);
        let (x, sw) = graded_nodes(-1.0, 200).unwrap();
        let v: f64 = x.iter().zip(&sw).map(|(x, w)| w * w * (-x * x).exp()).sum();
        assert!((v - want).abs() < 1e-12, "{v} {want}");
        let (x, _) = graded_nodes(-1.0, 80).unwrap();
        assert!(x.windows(2).all(|w| w[0] < w[1]) && x[0] > -1.0);
    }

    #[test]
    fn matrix_is_symmetric() {
        let sol = solve_u(al(0.5), -2.0, 2.0, 0.01, 1e-10).unwrap();
        let p = lax_params(al(0.5), 0.0, &sol).unwrap();
        let (x, sw) = graded_nodes(-1.0, 30).unwrap();
        let (k, imag) = grid_values(&p, &x, &x).unwrap();
        assert!(imag < 1e-8);
        let m = nystrom_matrix(&x, &sw, &k);
        let scale = m.amax();
        assert!((&m - m.transpose()).amax() <= 1e-10 * scale);
    }

    #[test]
    fn cdf_monotone_and_bounded() {
        let sol = solve_u(al(0.5), -2.0, 2.0, 0.01, 1e-10).unwrap();
        let ts: Vec<f64> = (0..9).map(|i| -4.0 + i as f64).collect();
        let curve = largest_eigenvalue_cdf(al(0.5), 0.0, &ts, 20, &sol).unwrap();
        check_curve(&curve).unwrap();
        assert!(curve.iter().all(|r| r.est_error <= TOLERANCE));
        assert!(largest_eigenvalue_cdf(al(0.5), 0.0, &[1.0, 0.0], 20, &sol).is_err());
        assert!(gap_probability(al(0.5), 0.0, 0.0, 5, &sol).is_err());
        let text = curve_csv(&[], &curve);
        assert!(text.starts_with("t,det,est_error\n"));
    }
}
