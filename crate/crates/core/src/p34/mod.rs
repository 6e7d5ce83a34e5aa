//! Painlevé XXXIV
//!     u'' = 4u² + 2su + ((u')² − (2α)²)/(2u)
//! for the distinguished solution u(s) ~ α/√s as s → +∞: asymptotic series,
//! closed forms for α ∈ {0, 1}, and the trajectory solver.

mod monodromy;
mod solve;

pub use monodromy::{fit_at, monodromy_residual, MonodromyFit};
pub use solve::{solve_u, uniform_grid, AnchorInfo, P34Solution, SolveInfo, ACCURACY_TARGET, ANCHORS, S0_DEFAULT, TOP_ANCHORS};

use crate::error::{Error, Result};
use crate::specfun::{airy_ai_real, gamma};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Alpha {
    value: f64,
}

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= -0.5 {
            return Err(Error::InvalidInput(format!("alpha must exceed -1/2, got {value}")));
        }
        Ok(Alpha { value })
    }

    pub fn value(self) -> f64 {
        self.value
    }

    pub fn nu(self) -> f64 {
        2.0 * self.value + 0.5
    }
}

/// bₙ of the Painlevé II tri-tronquée expansion and aₙ of u(s) ~ Σ aₙ s^{−(3n+1)/2}.
/// `a[0]` is the leading coefficient α, so `a[n]` is aₙ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCoeffs {
    pub nu: f64,
    pub b: Vec<f64>,
    pub a: Vec<f64>,
}

pub fn series_coeffs(alpha: Alpha, n_max: usize) -> Result<SeriesCoeffs> {
    if n_max < 2 {
        return Err(Error::InvalidInput("n_max must be at least 2".into()));
    }
    let nu = alpha.nu();
    let mut b = vec![0.0; n_max + 1];
    b[0] = 1.0;
    b[1] = nu / SQRT_2;
    for n in 0..n_max - 1 {
        let nf = n as f64;
        let mut v = (9.0 * nf * nf - 1.0) / 8.0 * b[n];
        for m in 1..=n + 1 {
            v -= b[m] * b[n + 2 - m];
        }
        let mut cubic = 0.0;
        for l in 1..=n + 1 {
            for m in 1..=n + 2 - l {
                cubic += b[l] * b[m] * b[n + 2 - l - m];
            }
        }
        b[n + 2] = v - 0.5 * cubic;
    }
    let a = (0..n_max)
        .map(|n| {
            if n == 0 || alpha.value == 0.0 {
                return alpha.value;
            }
            let quad: f64 = (1..=n).map(|k| b[k] * b[n + 1 - k]).sum();
            let rhs = b[n + 1] + (3.0 * n as f64 - 1.0) / (2.0 * SQRT_2) * b[n] + 0.5 * quad;
            rhs / 2f64.powf((n as f64 + 1.0) / 2.0)
        })
        .collect();
    Ok(SeriesCoeffs { nu, b, a })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesEval {
    pub value: f64,
    pub derivative: f64,
    /// |aₙ s^{−(3n+1)/2}| for n = 0, 1, ...
    pub term_magnitudes: Vec<f64>,
    /// number of correction terms a₁.. included
    pub n_terms: usize,
    /// size of the first omitted term
    pub next_term: f64,
}

pub(crate) const SERIES_NMAX: usize = 80;

/// α/√s + Σ_{n=1}^{n_terms} aₙ s^{−(3n+1)/2} and its term-wise derivative.
pub fn u_series(alpha: Alpha, s: f64, n_terms: usize) -> Result<SeriesEval> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("u_series needs s > 0, got {s}")));
    }
    let c = series_coeffs(alpha, (n_terms + 2).max(SERIES_NMAX))?;
    Ok(sum_series(&c, s, n_terms.min(c.a.len() - 2)))
}

/// The series summed to its smallest term (not included).
pub fn u_series_optimal(alpha: Alpha, s: f64) -> Result<SeriesEval> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("u_series needs s > 0, got {s}")));
    }
    Ok(optimal_sum(&series_coeffs(alpha, SERIES_NMAX)?, s))
}

pub(crate) fn optimal_sum(c: &SeriesCoeffs, s: f64) -> SeriesEval {
    if c.a.iter().all(|a| *a == 0.0) {
        return sum_series(c, s, 0);
    }
    let mags: Vec<f64> = term_mags(c, s);
    let mut best = (f64::INFINITY, 1);
    for k in 1..mags.len() {
        let lo = k.saturating_sub(3).max(1);
        let win = mags[lo..=k].iter().cloned().fold(0.0, f64::max);
        if win < best.0 {
            best = (win, k);
        }
    }
    sum_series(c, s, best.1 - 1)
}


fn term_mags(c: &SeriesCoeffs, s: f64) -> Vec<f64> {
    c.a.iter()
        .enumerate()
        .map(|(n, a)| (a * s.powf(-(3.0 * n as f64 + 1.0) / 2.0)).abs())
        .collect()
}

fn sum_series(c: &SeriesCoeffs, s: f64, n_terms: usize) -> SeriesEval {
    let mut value = 0.0;
    let mut derivative = 0.0;
    for n in 0..=n_terms {
        let e = (3.0 * n as f64 + 1.0) / 2.0;
        value += c.a[n] * s.powf(-e);
        derivative -= e * c.a[n] * s.powf(-e - 1.0);
    }
    let mags = term_mags(c, s);
    let next_term = mags.get(n_terms + 1).copied().unwrap_or(0.0);
    SeriesEval {
        value,
        derivative,
        term_magnitudes: mags,
        n_terms,
        next_term,
    }
}

/// d± = (e^{±2απi} − 1)/π · 2^{−6α−5/3} Γ(1+2α), the coefficients of the
/// exponentially small correction s^{−3α+1/2} e^{−(4/3)s^{3/2}} in the two
/// sectors adjacent to the positive axis.
pub fn d_pm(alpha: Alpha) -> Result<(Complex64, Complex64)> {
    let a = alpha.value;
    let k = 2f64.powf(-6.0 * a - 5.0 / 3.0) * gamma(1.0 + 2.0 * a)? / PI;
    let ep = Complex64::from_polar(1.0, 2.0 * a * PI);
    Ok(((ep - 1.0) * k, (ep.conj() - 1.0) * k))
}

/// u and u' for α = 1 from u = d/ds [Ai² / (Ai'² − s Ai²)].
pub fn u_closed_form_alpha1(s: f64) -> (f64, f64) {
    let (a, ap) = airy_ai_real(s);
    let d = ap * ap - s * a * a;
    let a2 = a * a;
    let u = 2.0 * a * ap / d + a2 * a2 / (d * d);
    let up = 2.0 * (ap * ap + s * a2) / d + 6.0 * a2 * a * ap / (d * d) + 2.0 * a2 * a2 * a2 / (d * d * d);
    (u, up)
}

/// The Airy solution q of Painlevé II with ν = 1/2 and the map to u.
#[derive(Debug, Clone, Copy)]
pub struct PiiBridge {
    pub nu: f64,
}

impl Default for PiiBridge {
    fn default() -> Self {
        PiiBridge { nu: 0.5 }
    }
}

impl PiiBridge {
    fn arg(sigma: f64) -> f64 {
        -2f64.powf(-1.0 / 3.0) * sigma
    }

    fn log_derivative(sigma: f64) -> Result<(f64, f64)> {
        let z = Self::arg(sigma);
        let (a, ap) = airy_ai_real(z);
        if a.abs() < 1e-6 * ap.abs() {
            return Err(Error::PoleNearby(z));
        }
        Ok((z, ap / a))
    }

    /// q(σ) = −2^{−1/3} Ai'(−2^{−1/3}σ)/Ai(−2^{−1/3}σ)
    pub fn q(&self, sigma: f64) -> Result<f64> {
        let (_, l) = Self::log_derivative(sigma)?;
        Ok(-2f64.powf(-1.0 / 3.0) * l)
    }

    pub fn q_prime(&self, sigma: f64) -> Result<f64> {
        let (z, l) = Self::log_derivative(sigma)?;
        Ok(2f64.powf(-2.0 / 3.0) * (z - l * l))
    }

    /// U = q² + q' + σ/2
    pub fn big_u(&self, sigma: f64) -> Result<f64> {
        let q = self.q(sigma)?;
        Ok(q * q + self.q_prime(sigma)? + sigma / 2.0)
    }

    /// u(s) = 2^{−1/3} U(−2^{1/3}s)
    pub fn u(&self, s: f64) -> Result<f64> {
        Ok(2f64.powf(-1.0 / 3.0) * self.big_u(-2f64.powf(1.0 / 3.0) * s)?)
    }
}

/// u(s) for α = 0 through the Painlevé II Airy solution; identically zero.
pub fn u_from_pii_airy(s: f64) -> Result<f64> {
    PiiBridge::default().u(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn al(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    #[test]
    fn leading_coefficients() {
        for v in [0.0, 0.25, 1.0, 2.3] {
            let c = series_coeffs(al(v), 10).unwrap();
            let nu = 2.0 * v + 0.5;
            assert_eq!(c.b[0], 1.0);
            assert_eq!(c.b[1], nu / SQRT_2);
            assert!((c.b[2] - (-0.125 - 0.75 * nu * nu)).abs() < 1e-13 * (1.0 + nu * nu));
        }
        let c = series_coeffs(al(0.0), 4).unwrap();
        assert!((c.b[1] - 0.353_553_390_593_273_8).abs() < 1e-15);
    }

    #[test]
    fn a_coefficients_match_direct_substitution() {
        // values from substituting the power series into the equation
        for v in [0.25, 0.5, 1.0, 1.5] {
            let c = series_coeffs(al(v), 10).unwrap();
            let want = [
                v,
                -v * v,
                5.0 * v * (16.0 * v * v + 1.0) / 32.0,
                -v * v * (32.0 * v * v + 7.0) / 4.0,
                11.0 * v * (5376.0 * v.powi(4) + 2656.0 * v * v + 105.0) / 2048.0,
            ];
            for (n, w) in want.iter().enumerate() {
                assert!((c.a[n] - w).abs() < 1e-12 * (1.0 + w.abs()), "a{n} at {v}: {} vs {w}", c.a[n]);
            }
        }
        assert!((series_coeffs(al(1.0), 4).unwrap().a[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn series_values() {
        let e = u_series(al(1.0), 100.0, 1).unwrap();
        assert!((e.value - 0.0999).abs() < 1e-15);
        assert_eq!(u_series(al(0.0), 3.0, 5).unwrap().value, 0.0);
        let big = u_series_optimal(al(1.0), 1e6).unwrap();
        assert!((big.value * 1e3 - 1.0).abs() < 1e-8);
        assert!(u_series(al(1.0), -1.0, 3).is_err());
        assert!(series_coeffs(al(1.0), 1).is_err());
    }

    #[test]
    fn closed_form_alpha1() {
        let (u, _) = u_closed_form_alpha1(0.0);
        assert!((u - 0.797).abs() < 1e-3);
        let (u, _) = u_closed_form_alpha1(25.0);
        assert!((u - (0.2 - 1.0 / 625.0)).abs() < 2e-4);
        let (u, _) = u_closed_form_alpha1(-2.338_107_410_459_767);
        assert!(u.abs() < 1e-12);
        let (u1, d1) = u_closed_form_alpha1(1.3);
        let h = 1e-5;
        let fd = (u_closed_form_alpha1(1.3 + h).0 - u_closed_form_alpha1(1.3 - h).0) / (2.0 * h);
        assert!((fd - d1).abs() < 1e-8, "{u1} {d1} {fd}");
    }

    #[test]
    fn pii_bridge_gives_zero() {
        for s in [0.0, 3.7, -5.1, -9.9, 9.9] {
            assert!(u_from_pii_airy(s).unwrap().abs() < 1e-10);
        }
        assert!(matches!(u_from_pii_airy(-2.338_107_410_459_767), Err(Error::PoleNearby(_))));
    }

    #[test]
    fn d_coefficients() {
        let (dp, dm) = d_pm(al(1.0)).unwrap();
        assert!(dp.norm() < 1e-15 && dm.norm() < 1e-15);
        let (dp, dm) = d_pm(al(0.5)).unwrap();
        assert!((dp - dm.conj()).norm() < 1e-15);
        assert!((dp.re + 2.0 / PI * 2f64.powf(-3.0 - 5.0 / 3.0)).abs() < 1e-15);
        assert!(Alpha::new(-0.5).is_err());
    }
}
