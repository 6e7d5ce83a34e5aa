//! Explicit solutions Ψ₀ and Ψ₁ of the model Riemann–Hilbert problem for
//! α = 0 and α = 1, and numerical checks of its conditions.
//!
//! Σ₁ = {arg ζ = 0} points outward; Σ₂, Σ₃, Σ₄ (arg 2π/3, π, −2π/3) point
//! toward the origin. The + side lies on the left: Ω₁ for Σ₁ and Σ₂, Ω₂ for
//! Σ₃, Ω₃ for Σ₄.

use crate::error::{Error, Result};
use crate::lax::{Mat2, Vec2, C};
use crate::specfun::{airy_ai, airy_ai_real};
use rand::{Rng, SeedableRng};
use serde::Serialize;
use std::f64::consts::PI;

const I: C = C::new(0.0, 1.0);
/// Points closer than this to Σ are rejected.
pub const CONTOUR_DISTANCE: f64 = 1e-8;
pub const EPSILON: f64 = 1e-7;
pub const RADII: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
pub const JUMP_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sector {
    Omega1,
    Omega2,
    Omega3,
    Omega4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ray {
    Sigma1,
    Sigma2,
    Sigma3,
    Sigma4,
}

impl Ray {
    pub const ALL: [Ray; 4] = [Ray::Sigma1, Ray::Sigma2, Ray::Sigma3, Ray::Sigma4];

    pub fn angle(self) -> f64 {
        match self {
            Ray::Sigma1 => 0.0,
            Ray::Sigma2 => 2.0 * PI / 3.0,
            Ray::Sigma3 => PI,
            Ray::Sigma4 => -2.0 * PI / 3.0,
        }
    }

    /// Sector on the + side and the sign of the rotation that enters it.
    fn plus_side(self) -> (Sector, f64) {
        match self {
            Ray::Sigma1 => (Sector::Omega1, 1.0),
            Ray::Sigma2 => (Sector::Omega1, -1.0),
            Ray::Sigma3 => (Sector::Omega2, -1.0),
            Ray::Sigma4 => (Sector::Omega3, -1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Builder {
    Psi0,
    Psi1,
}

impl Builder {
    pub fn alpha(self) -> f64 {
        match self {
            Builder::Psi0 => 0.0,
            Builder::Psi1 => 1.0,
        }
    }

    pub fn from_alpha(alpha: f64) -> Result<Self> {
        match alpha {
            a if a == 0.0 => Ok(Builder::Psi0),
            a if a == 1.0 => Ok(Builder::Psi1),
            _ => Err(Error::InvalidInput(format!("explicit Ψ only for alpha in {{0, 1}}, got {alpha}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorMatrix {
    pub sector: Sector,
    pub entries: Mat2,
    pub zeta: C,
    pub s: f64,
}

impl SectorMatrix {
    pub fn det(&self) -> C {
        det(&self.entries)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpMatrix {
    pub ray: Ray,
    pub entries: Mat2,
}

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

pub(crate) fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[c(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn det(a: &Mat2) -> C {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Inverse of a unimodular matrix.
#[cfg(test)]
fn inv1(a: &Mat2) -> Mat2 {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

fn sub(a: &Mat2, b: &Mat2) -> Mat2 {
    [[a[0][0] - b[0][0], a[0][1] - b[0][1]], [a[1][0] - b[1][0], a[1][1] - b[1][1]]]
}

fn scale(a: &Mat2, k: C) -> Mat2 {
    [[a[0][0] * k, a[0][1] * k], [a[1][0] * k, a[1][1] * k]]
}

/// Frobenius norm.
pub fn norm(a: &Mat2) -> f64 {
    a.iter().flatten().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn jump_matrix(ray: Ray, alpha: f64) -> JumpMatrix {
    let e = C::from_polar(1.0, 2.0 * alpha * PI);
    let entries = match ray {
        Ray::Sigma1 => [[c(1.0), c(1.0)], [c(0.0), c(1.0)]],
        Ray::Sigma2 => [[c(1.0), c(0.0)], [e, c(1.0)]],
        Ray::Sigma3 => [[c(0.0), c(1.0)], [c(-1.0), c(0.0)]],
        Ray::Sigma4 => [[c(1.0), c(0.0)], [e.conj(), c(1.0)]],
    };
    JumpMatrix { ray, entries }
}

pub fn sector_of(zeta: C) -> Result<Sector> {
    let r = zeta.norm();
    let a = zeta.arg();
    let near = Ray::ALL.iter().any(|ray| {
        let d = (a - ray.angle()).rem_euclid(2.0 * PI);
        let d = d.min(2.0 * PI - d);
        d < PI / 2.0 && r * d.sin() < CONTOUR_DISTANCE
    });
    if !(r >= CONTOUR_DISTANCE) || near || zeta.im == 0.0 {
        return Err(Error::OnContour);
    }
    let t = 2.0 * PI / 3.0;
    Ok(if a > 0.0 && a < t {
        Sector::Omega1
    } else if a >= t {
        Sector::Omega2
    } else if a <= -t {
        Sector::Omega3
    } else {
        Sector::Omega4
    })
}

/// θ(ζ; s) = (2/3)ζ^{3/2} + sζ^{1/2} on the principal branch.
pub fn theta(zeta: C, s: f64) -> C {
    let r = zeta.sqrt();
    2.0 / 3.0 * r * zeta + s * r
}

fn psi0_omega1(zeta: C, s: f64) -> Mat2 {
    let k = (2.0 * PI).sqrt();
    let z = zeta + s;
    let w = C::from_polar(1.0, -2.0 * PI / 3.0);
    let e = C::from_polar(1.0, PI / 3.0);
    let (a, ap) = airy_ai(z);
    let (b, bp) = airy_ai(w * z);
    [[a * k, e * b * k], [-I * ap * k, -I * e.conj() * bp * k]]
}

fn psi0_omega3(zeta: C, s: f64) -> Mat2 {
    let k = (2.0 * PI).sqrt();
    let z = zeta + s;
    let w = C::from_polar(1.0, -2.0 * PI / 3.0);
    let e = C::from_polar(1.0, PI / 3.0);
    let (a, ap) = airy_ai(w * z);
    let (b, bp) = airy_ai(w.conj() * z);
    [[e * a * k, -e.conj() * b * k], [-I * e.conj() * ap * k, I * e * bp * k]]
}

/// Ψ₀ continued analytically from the given sector.
///
/// Ω₂ = Ω₁v₂⁻¹ and Ω₄ = Ω₃v₄⁻¹ are evaluated column by column: the column
/// that the product would form as a difference of two growing Airy terms is
/// taken from the recessive formula of the neighbouring sector instead.
fn psi0_formula(sector: Sector, zeta: C, s: f64) -> Mat2 {
    let cols = |a: &Mat2, b: &Mat2, sign: f64| -> Mat2 {
        [[a[0][0] * sign, b[0][1]], [a[1][0] * sign, b[1][1]]]
    };
    match sector {
        Sector::Omega1 => psi0_omega1(zeta, s),
        Sector::Omega2 => {
            let m3 = psi0_omega3(zeta, s);
            let m3 = [[m3[0][1], m3[0][0]], [m3[1][1], m3[1][0]]];
            cols(&m3, &psi0_omega1(zeta, s), -1.0)
        }
        Sector::Omega3 => psi0_omega3(zeta, s),
        Sector::Omega4 => cols(&psi0_omega1(zeta, s), &psi0_omega3(zeta, s), 1.0),
    }
}

/// Ψ₀ in Ω₂ and Ω₄ as the literal products Ω₁v₂⁻¹ and Ω₃v₄⁻¹.
#[cfg(test)]
fn psi0_product(sector: Sector, zeta: C, s: f64) -> Mat2 {
    match sector {
        Sector::Omega2 => mul(&psi0_omega1(zeta, s), &inv1(&jump_matrix(Ray::Sigma2, 0.0).entries)),
        Sector::Omega4 => mul(&psi0_omega3(zeta, s), &inv1(&jump_matrix(Ray::Sigma4, 0.0).entries)),
        _ => psi0_formula(sector, zeta, s),
    }
}

/// X(s) = (Ai, −iAi′)ᵀ(Ai′, −iAi)/(Ai′² − sAi²) at s.
pub fn x_matrix(s: f64) -> Result<Mat2> {
    let (a, ap) = airy_ai_real(s);
    let d = ap * ap - s * a * a;
    if !(d > 0.0) {
        return Err(Error::Domain(format!("Ai'(s)^2 - s Ai(s)^2 = {d} is not positive at s = {s}")));
    }
    let col = [c(a), -I * ap];
    let row = [c(ap), -I * a];
    Ok([[col[0] * row[0] / d, col[0] * row[1] / d], [col[1] * row[0] / d, col[1] * row[1] / d]])
}

fn formula(builder: Builder, sector: Sector, zeta: C, s: f64) -> Result<Mat2> {
    let p0 = psi0_formula(sector, zeta, s);
    match builder {
        Builder::Psi0 => Ok(p0),
        Builder::Psi1 => {
            let x = x_matrix(s)?;
            let id = [[c(1.0), c(0.0)], [c(0.0), c(1.0)]];
            Ok(mul(&sub(&id, &scale(&x, 1.0 / zeta)), &p0))
        }
    }
}

pub fn psi0_matrix(zeta: C, s: f64) -> Result<SectorMatrix> {
    let sector = sector_of(zeta)?;
    Ok(SectorMatrix { sector, entries: psi0_formula(sector, zeta, s), zeta, s })
}

/// (I − X(s)/ζ)Ψ₀(ζ; s).
pub fn psi1_matrix(zeta: C, s: f64) -> Result<SectorMatrix> {
    let sector = sector_of(zeta)?;
    Ok(SectorMatrix { sector, entries: formula(Builder::Psi1, sector, zeta, s)?, zeta, s })
}

pub fn build(builder: Builder, zeta: C, s: f64) -> Result<SectorMatrix> {
    match builder {
        Builder::Psi0 => psi0_matrix(zeta, s),
        Builder::Psi1 => psi1_matrix(zeta, s),
    }
}

/// (ψ₁, ψ₂) from Ψ₊(x)(1,0)ᵀ for x > 0 and Ψ₊(x)e^{−απiσ₃}(1,1)ᵀ for x < 0.
pub fn psi_vector(builder: Builder, x: f64, s: f64) -> Result<Vec2> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::InvalidInput(format!("x = {x} must be finite and nonzero")));
    }
    if x > 0.0 {
        let m = formula(builder, Sector::Omega1, c(x), s)?;
        return Ok([m[0][0], m[1][0]]);
    }
    let m = formula(builder, Sector::Omega2, c(x), s)?;
    let e = C::from_polar(1.0, -builder.alpha() * PI);
    Ok([m[0][0] * e + m[0][1] / e, m[1][0] * e + m[1][1] / e])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RaySample {
    pub radius: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayReport {
    pub ray: Ray,
    pub samples: Vec<RaySample>,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JumpReport {
    pub builder: Builder,
    pub alpha: f64,
    pub s: f64,
    pub epsilon: f64,
    pub rays: Vec<RayReport>,
    pub max_residual: f64,
    pub pass: bool,
}

fn boundary_defect(builder: Builder, ray: Ray, zeta: C, s: f64, eps: f64) -> Result<Mat2> {
    let (plus, dir) = ray.plus_side();
    let zp = zeta * C::new(1.0, dir * eps);
    let zm = zeta * C::new(1.0, -dir * eps);
    let sp = build(builder, zp, s)?;
    let sm = build(builder, zm, s)?;
    if sp.sector != plus || sm.sector == plus {
        return Err(Error::Domain(format!("offset points for {ray:?} fall in the wrong sectors")));
    }
    let v = jump_matrix(ray, builder.alpha()).entries;
    Ok(sub(&sp.entries, &mul(&sm.entries, &v)))
}

/// Relative jump residual ‖Ψ₊ − Ψ₋v‖/‖Ψ₋‖ at ζ on the ray; the O(ε) offset
/// error is removed by extrapolating from ε and 2ε.
pub fn jump_residual(builder: Builder, ray: Ray, radius: f64, s: f64) -> Result<f64> {
    let zeta = C::from_polar(radius, ray.angle());
    let d1 = boundary_defect(builder, ray, zeta, s, EPSILON)?;
    let d2 = boundary_defect(builder, ray, zeta, s, 2.0 * EPSILON)?;
    let extrap = sub(&scale(&d1, c(2.0)), &d2);
    let (_, dir) = ray.plus_side();
    let base = build(builder, zeta * C::new(1.0, -dir * EPSILON), s)?;
    Ok(norm(&extrap) / norm(&base.entries))
}

/// Jump residuals on all four rays at the fixed radii plus `samples_per_ray`
/// log-spaced radii in [0.5, 4].
pub fn verify_jumps(builder: Builder, s: f64, samples_per_ray: usize) -> Result<JumpReport> {
    if samples_per_ray < 3 {
        return Err(Error::InvalidInput("samples_per_ray must be at least 3".into()));
    }
    let mut radii: Vec<f64> = RADII.to_vec();
    radii.extend((0..samples_per_ray).map(|k| 0.5 * 8f64.powf(k as f64 / (samples_per_ray - 1) as f64)));
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    radii.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut rays = Vec::new();
    for ray in Ray::ALL {
        let samples: Vec<RaySample> = radii
            .iter()
            .map(|&radius| Ok(RaySample { radius, residual: jump_residual(builder, ray, radius, s)? }))
            .collect::<Result<_>>()?;
        let max_residual = samples.iter().map(|r| r.residual).fold(0.0, f64::max);
        rays.push(RayReport { ray, samples, max_residual });
    }
    let max_residual = rays.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    Ok(JumpReport {
        builder,
        alpha: builder.alpha(),
        s,
        epsilon: EPSILON,
        rays,
        max_residual,
        pass: max_residual <= JUMP_TOLERANCE,
    })
}

/// Largest |det Ψ − 1| at `n` random points of the annulus 0.1 ≤ |ζ| ≤ 10.
pub fn det_check(builder: Builder, s: f64, n: usize, seed: u64) -> Result<f64> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < n {
        let r = 0.1 * 100f64.powf(rng.gen::<f64>());
        let zeta = C::from_polar(r, rng.gen_range(-PI..PI));
        match build(builder, zeta, s) {
            Ok(m) => {
                worst = worst.max((m.det() - 1.0).norm());
                done += 1;
            }
            Err(Error::OnContour) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(worst)
}

/// ‖√2 ζ^{σ₃/4} Ψ(ζ) e^{θσ₃} − [[1, i], [i, 1]]‖ along arg ζ = phi.
pub fn normalized_residual(builder: Builder, zeta: C, s: f64) -> Result<f64> {
    let m = build(builder, zeta, s)?.entries;
    let q = zeta.powf(0.25);
    let e = theta(zeta, s).exp();
    let sq = 2f64.sqrt();
    let n = [
        [m[0][0] * q * e * sq, m[0][1] * q / e * sq],
        [m[1][0] / q * e * sq, m[1][1] / q / e * sq],
    ];
    Ok(norm(&sub(&n, &[[c(1.0), I], [I, c(1.0)]])))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub phi: f64,
    pub radii: Vec<f64>,
    pub residuals: Vec<f64>,
    pub exponent: f64,
}

/// Least-squares slope of log residual against log |ζ| for |ζ| ∈ [4, 64].
pub fn infinity_decay(builder: Builder, s: f64, phi: f64) -> Result<DecayFit> {
    let radii: Vec<f64> = (0..9).map(|k| 4.0 * 2f64.powf(k as f64 / 2.0)).collect();
    let residuals: Vec<f64> = radii
        .iter()
        .map(|&r| normalized_residual(builder, C::from_polar(r, phi), s))
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(DecayFit { phi, radii, residuals, exponent: sxy / sxx })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sectors_and_contour() {
        assert_eq!(sector_of(C::new(1.0, 1.0)).unwrap(), Sector::Omega1);
        assert_eq!(sector_of(C::new(-1.0, 0.5)).unwrap(), Sector::Omega2);
        assert_eq!(sector_of(C::new(-1.0, -0.5)).unwrap(), Sector::Omega3);
        assert_eq!(sector_of(C::new(1.0, -1.0)).unwrap(), Sector::Omega4);
        assert_eq!(sector_of(C::new(2.0, 0.0)), Err(Error::OnContour));
        assert_eq!(sector_of(C::from_polar(3.0, 2.0 * PI / 3.0)), Err(Error::OnContour));
        assert_eq!(sector_of(C::new(0.0, 0.0)), Err(Error::OnContour));
        assert!(sector_of(C::new(-2.0, 1e-9)).is_err());
        assert!(sector_of(C::new(-2.0, 1e-6)).is_ok());
    }

    #[test]
    fn jump_matrices_unimodular() {
        for a in [0.0, 0.3, 1.0] {
            for ray in Ray::ALL {
                assert!((det(&jump_matrix(ray, a).entries) - 1.0).norm() == 0.0);
            }
        }
        assert_eq!(jump_matrix(Ray::Sigma2, 0.0).entries[1][0], c(1.0));
    }

    #[test]
    fn omega1_first_row() {
        let z = C::new(0.7, 0.4);
        let m = psi0_matrix(z, 0.3).unwrap();
        let k = (2.0 * PI).sqrt();
        assert!((m.entries[0][0] - k * airy_ai(z + 0.3).0).norm() < 1e-14);
        let w = C::from_polar(1.0, -2.0 * PI / 3.0);
        let want = k * C::from_polar(1.0, PI / 3.0) * airy_ai(w * (z + 0.3)).0;
        assert!((m.entries[0][1] - want).norm() < 1e-14);
        // Ω₁ = Ω₃ · [[1, 1], [−1, 0]]
        let t = [[c(1.0), c(1.0)], [c(-1.0), c(0.0)]];
        let via3 = mul(&psi0_omega3(z, 0.3), &t);
        assert!(norm(&sub(&via3, &m.entries)) < 1e-13);
    }

    #[test]
    fn jumps_hold() {
        for b in [Builder::Psi0, Builder::Psi1] {
            for s in [-1.0, 0.0, 1.5] {
                let r = verify_jumps(b, s, 5).unwrap();
                assert!(r.pass, "{b:?} s {s}: {}", r.max_residual);
                assert_eq!(r.rays.len(), 4);
            }
        }
        assert!(verify_jumps(Builder::Psi0, 0.0, 2).is_err());
    }

    #[test]
    fn determinant_is_one() {
        for b in [Builder::Psi0, Builder::Psi1] {
            for (s, seed) in [(0.5, 7), (0.0, 1), (-2.0, 3), (2.0, 11)] {
                assert!(det_check(b, s, 100, seed).unwrap() <= 1e-10);
            }
        }
    }

    #[test]
    fn column_form_matches_jump_product() {
        for (sector, arg) in [(Sector::Omega2, 2.5), (Sector::Omega2, 3.0), (Sector::Omega4, -0.5), (Sector::Omega4, -2.0)] {
            for r in [0.3, 1.0, 2.0] {
                let z = C::from_polar(r, arg);
                let a = psi0_formula(sector, z, 0.7);
                let b = psi0_product(sector, z, 0.7);
                assert!(norm(&sub(&a, &b)) <= 1e-13 * norm(&b).max(1.0));
            }
        }
    }

    #[test]
    fn x_matrix_rank_one() {
        for s in [-3.0, 0.0, 2.0] {
            let x = x_matrix(s).unwrap();
            assert!(det(&x).norm() < 1e-15 * norm(&x).powi(2));
            let (a, ap) = airy_ai_real(s);
            let d = ap * ap - s * a * a;
            let tr = (a * ap + (-I) * (-I) * ap * a) / d;
            assert!((x[0][0] + x[1][1] - tr).norm() < 1e-15);
        }
    }

    #[test]
    fn first_column_vanishes_at_origin() {
        // first column of Ψ₁ in Ω₁ vanishes linearly at 0
        let col = |r: f64| {
            let m = psi1_matrix(C::from_polar(r, 1.0), 0.4).unwrap().entries;
            (m[0][0].norm_sqr() + m[1][0].norm_sqr()).sqrt()
        };
        let slope = (col(1e-4) / col(1e-5)).log10();
        assert!((slope - 1.0).abs() < 1e-3, "{slope}");
    }

    #[test]
    fn decay_rate_at_infinity() {
        for b in [Builder::Psi0, Builder::Psi1] {
            for phi in [PI / 3.0, -PI / 3.0] {
                let f = infinity_decay(b, 1.0, phi).unwrap();
                assert!((-0.7..=-0.3).contains(&f.exponent), "{b:?} {phi}: {}", f.exponent);
            }
        }
    }

    #[test]
    fn alpha_zero_vector_is_airy() {
        let k = (2.0 * PI).sqrt();
        for x in [-5.0, -0.5, 0.5, 3.0] {
            let v = psi_vector(Builder::Psi0, x, 0.2).unwrap();
            let (a, ap) = airy_ai_real(x + 0.2);
            assert!((v[0] - k * a).norm() < 1e-13 && (v[1] + I * k * ap).norm() < 1e-13, "{x}");
        }
    }

    #[test]
    fn agrees_with_lax_continuation() {
        use crate::p34::{solve_u, Alpha};
        use crate::psi::psi_grid;
        let xs = [-6.0, -2.5, -0.4, 0.3, 1.7, 4.0];
        for b in [Builder::Psi0, Builder::Psi1] {
            let a = Alpha::new(b.alpha()).unwrap();
            let sol = solve_u(a, -2.0, 2.0, 0.01, 1e-10).unwrap();
            let got = psi_grid(a, 0.5, &xs, &sol).unwrap();
            let want: Vec<Vec2> = xs.iter().map(|&x| psi_vector(b, x, 0.5).unwrap()).collect();
            // ψ₂ is fixed only up to ψ₂ + ηψ₁; η is fitted at the first point
            let eta = (got[0].psi2 - want[0][1]) / want[0][0];
            for (g, w) in got.iter().zip(&want) {
                assert!((g.psi1 - w[0]).norm() < 1e-7, "{b:?} x {}: {} {}", g.x, g.psi1, w[0]);
                assert!((g.psi2 - w[1] - eta * w[0]).norm() < 1e-7, "{b:?} x {}", g.x);
            }
            if b == Builder::Psi0 {
                assert!(eta.norm() < 1e-8);
            }
        }
    }
}
