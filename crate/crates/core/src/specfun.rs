//! Airy functions of complex argument and the real Gamma function.
//!
//! Ai is computed from its Maclaurin series for |z| ≤ 1, from the asymptotic
//! expansion for |z| ≥ 12, and by Taylor stepping of Ai'' = z Ai in between.
//! Stepping runs inward from the asymptotic region where Ai is recessive
//! (|arg z| ≤ π/3) and outward from the unit circle elsewhere. Bi and the
//! left half-plane use the rotation identities.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_3, PI};

const AI0: f64 = 0.355_028_053_887_817_24;
const AIP0: f64 = -0.258_819_403_792_806_8;
const R_ASYM: f64 = 12.0;
const R_SERIES: f64 = 1.0;
const MAX_STEP: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValues {
    pub ai: Complex64,
    pub ai_prime: Complex64,
    pub bi: Complex64,
    pub bi_prime: Complex64,
}

fn omega() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// All four Airy values. Fails with `Overflow` when Bi is not representable.
pub fn airy(z: Complex64) -> Result<AiryValues> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite Airy argument {z}")));
    }
    let (ai, ai_prime) = airy_ai(z);
    let w = omega();
    let (a1, d1) = airy_ai(w * z);
    let (a2, d2) = airy_ai(w.conj() * z);
    let e6 = Complex64::from_polar(1.0, PI / 6.0);
    let e56 = Complex64::from_polar(1.0, 5.0 * PI / 6.0);
    let bi = e6 * a1 + e6.conj() * a2;
    let bi_prime = e56 * d1 + e56.conj() * d2;
    let finite = |c: Complex64| c.re.is_finite() && c.im.is_finite();
    if !finite(bi) || !finite(bi_prime) {
        return Err(Error::Overflow("Bi"));
    }
    Ok(AiryValues {
        ai,
        ai_prime,
        bi,
        bi_prime,
    })
}

/// (Ai(z), Ai'(z)). Underflows to zero deep in the recessive sector.
pub fn airy_ai(z: Complex64) -> (Complex64, Complex64) {
    let r = z.norm();
    let th = z.arg();
    if r <= R_SERIES {
        return maclaurin(z);
    }
    if r >= R_ASYM {
        if th.abs() <= 2.0 * PI / 3.0 + 1e-12 {
            return asymptotic(z);
        }
        let w = omega();
        let (a1, d1) = asymptotic(w * z);
        let (a2, d2) = asymptotic(w.conj() * z);
        return (-w * a1 - w.conj() * a2, -(w * w) * d1 - (w * w).conj() * d2);
    }
    let dir = Complex64::from_polar(1.0, th);
    if th.abs() <= FRAC_PI_3 {
        let z0 = dir * R_ASYM;
        let (a, d) = asymptotic(z0);
        taylor_path(z0, a, d, z)
    } else {
        let z0 = dir * R_SERIES;
        let (a, d) = maclaurin(z0);
        taylor_path(z0, a, d, z)
    }
}

/// Real-axis convenience wrapper.
pub fn airy_ai_real(x: f64) -> (f64, f64) {
    let (a, d) = airy_ai(Complex64::new(x, 0.0));
    (a.re, d.re)
}

fn maclaurin(z: Complex64) -> (Complex64, Complex64) {
    let z2 = z * z;
    let z3 = z2 * z;
    let mut f = Complex64::new(1.0, 0.0);
    let mut g = z;
    let mut fp = Complex64::new(0.0, 0.0);
    let mut gp = Complex64::new(1.0, 0.0);
    let mut a = Complex64::new(1.0, 0.0);
    let mut b = z;
    for k in 1..60 {
        let kf = k as f64;
        fp += a * z2 / (3.0 * kf - 1.0);
        gp += b * z2 / (3.0 * kf);
        a = a * z3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        b = b * z3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        f += a;
        g += b;
        if a.norm() + b.norm() < 1e-18 {
            break;
        }
    }
    (AI0 * f + AIP0 * g, AI0 * fp + AIP0 * gp)
}

fn asymptotic(z: Complex64) -> (Complex64, Complex64) {
    let zr = z.sqrt();
    let z4 = zr.sqrt();
    let zeta = 2.0 / 3.0 * z * zr;
    let inv = 1.0 / zeta;
    let mut su = Complex64::new(1.0, 0.0);
    let mut sv = Complex64::new(1.0, 0.0);
    let mut u = 1.0_f64;
    let mut pw = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        pw *= -inv;
        let tu = pw * u;
        let mag = tu.norm();
        if mag > last {
            break;
        }
        last = mag;
        su += tu;
        sv += pw * v;
        if mag < 1e-18 {
            break;
        }
    }
    let pre = (-zeta).exp() / (2.0 * PI.sqrt());
    (pre / z4 * su, -pre * z4 * sv)
}

fn taylor_path(z0: Complex64, y0: Complex64, d0: Complex64, z1: Complex64) -> (Complex64, Complex64) {
    let rmax = z0.norm().max(z1.norm());
    let n = ((z1 - z0).norm() * rmax.sqrt().max(1.0) / MAX_STEP).ceil().max(1.0) as usize;
    let h = (z1 - z0) / n as f64;
    let (mut y, mut d) = (y0, d0);
    for i in 0..n {
        let zc = z0 + h * i as f64;
        (y, d) = taylor_step(zc, y, d, h);
    }
    (y, d)
}

fn taylor_step(z0: Complex64, y: Complex64, d: Complex64, h: Complex64) -> (Complex64, Complex64) {
    let mut c = [Complex64::new(0.0, 0.0); 3];
    c[0] = y;
    c[1] = d;
    c[2] = z0 * y / 2.0;
    let mut val = y + d * h + c[2] * h * h;
    let mut der = d + 2.0 * c[2] * h;
    let mut hk = h * h;
    let scale = y.norm() + d.norm() + 1e-300;
    let mut small = 0;
    for k in 3..120 {
        let kf = k as f64;
        let ck = (z0 * c[1] + c[0]) / (kf * (kf - 1.0));
        der += kf * ck * hk;
        hk *= h;
        let t = ck * hk;
        val += t;
        c = [c[1], c[2], ck];
        if t.norm() < 1e-19 * scale {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (val, der)
}

// Lanczos approximation, g = 7, n = 9 (P. Godfrey's coefficient table).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        return Ok(lanczos(x + 1.0) / x);
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}
