//! The ζ-equation of the Lax pair, dψ/dζ = A(ζ)ψ with
//! A(ζ) = R/ζ + Q + Pζ, its formal solutions at ∞ and at 0, and transport of
//! solutions along straight segments and circular arcs by Taylor stepping.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

pub type C = Complex64;
pub type Vec2 = [C; 2];
pub type Mat2 = [[C; 2]; 2];

const I: C = C::new(0.0, 1.0);

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

pub fn matvec(m: &Mat2, v: &Vec2) -> Vec2 {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

pub fn norm2(v: &Vec2) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

/// Parameters of the Lax matrix at fixed s. `w` stands for ((u')² − 4α²)/(4u).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaxParams {
    pub alpha: f64,
    pub s: f64,
    pub u: f64,
    pub up: f64,
    pub w: f64,
}

impl LaxParams {
    pub fn new(alpha: f64, s: f64, u: f64, up: f64, w: f64) -> Self {
        LaxParams { alpha, s, u, up, w }
    }

    pub fn from_u(alpha: f64, s: f64, u: f64, up: f64) -> Result<Self> {
        if alpha == 0.0 && u == 0.0 && up == 0.0 {
            return Ok(Self::new(0.0, s, 0.0, 0.0, 0.0));
        }
        if u == 0.0 {
            return Err(Error::Domain("w is undefined at a zero of u".into()));
        }
        Ok(Self::new(alpha, s, u, up, (up * up - 4.0 * alpha * alpha) / (4.0 * u)))
    }

    /// The residue matrix R at ζ = 0.
    pub fn residue(&self) -> Mat2 {
        let a = re(self.up / 2.0);
        [[a, -I * self.u], [-I * self.w, -a]]
    }

    fn q(&self) -> Mat2 {
        [[re(0.0), I], [-I * (self.s + self.u), re(0.0)]]
    }

    fn p(&self) -> Mat2 {
        [[re(0.0), re(0.0)], [-I, re(0.0)]]
    }

    pub fn matrix(&self, z: C) -> Mat2 {
        let m11 = re(self.up) / (2.0 * z);
        [
            [m11, I - I * self.u / z],
            [-I * (z + self.s + self.u + self.w / z), -m11],
        ]
    }

    pub fn rhs(&self, z: C, y: &Vec2) -> Vec2 {
        matvec(&self.matrix(z), y)
    }
}

/// Recessive formal solution at ∞ of either exponential type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decay {
    /// e^{−θ}: (ψ₁, ψ₂) ≈ (ζ^{−1/4}, iζ^{1/4}) e^{−θ}/√2
    Minus,
    /// e^{+θ}: (ψ₁, ψ₂) ≈ (iζ^{−1/4}, ζ^{1/4}) e^{θ}/√2
    Plus,
}

/// Coefficients of the formal expansion in t = ζ^{−1/2}
/// ψ₁ = ζ^{−1/4} e^{−θ} Σ aₘ tᵐ, ψ₂ = i ζ^{1/4} e^{−θ} Σ bₘ tᵐ,
/// θ = (2/3)ζ^{3/2} + sζ^{1/2}.
#[derive(Debug, Clone)]
pub struct InfSeries {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    s: f64,
}

impl InfSeries {
    pub fn new(p: &LaxParams, n: usize) -> Self {
        let n = n.max(4);
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        a[0] = std::f64::consts::FRAC_1_SQRT_2;
        b[0] = a[0];
        let get = |v: &[f64], i: isize| if i >= 0 { v[i as usize] } else { 0.0 };
        let d = |a: &[f64], b: &[f64], k: isize| {
            0.5 * p.s * get(a, k - 2) + p.u * get(b, k - 2) + ((k - 3) as f64 / 2.0 + 0.25 + p.up / 2.0) * get(a, k - 3)
        };
        for m in 1..n {
            let mi = m as isize;
            let d1 = d(&a, &b, mi + 1);
            let d0 = d(&a, &b, mi);
            let sum = 2.0 / m as f64 * (-(0.5 * p.s + p.u) * d1 + p.w * a[m - 1] + (0.25 + p.up / 2.0) * d0);
            a[m] = 0.5 * (sum - d0);
            b[m] = 0.5 * (sum + d0);
        }
        InfSeries { a, b, s: p.s }
    }

    pub fn theta(&self, z: C) -> C {
        let r = z.sqrt();
        2.0 / 3.0 * z * r + self.s * r
    }

    /// Sum to optimal truncation: stop at the minimum of an 8-term running
    /// maximum of term sizes. Returns the vector and the size of the first
    /// omitted term relative to the leading one.
    pub fn eval(&self, z: C, kind: Decay) -> (Vec2, f64) {
        let sg = if kind == Decay::Minus { 1.0 } else { -1.0 };
        let t = sg / z.sqrt();
        let n = self.a.len();
        let mut mags = Vec::with_capacity(n);
        let mut pw = re(1.0);
        let mut tf = Vec::with_capacity(n);
        let mut tg = Vec::with_capacity(n);
        for k in 0..n {
            tf.push(self.a[k] * pw);
            tg.push(self.b[k] * pw);
            mags.push(tf[k].norm().max(tg[k].norm()));
            pw *= t;
        }
        let mut best = (f64::INFINITY, n);
        for k in 0..n {
            let lo = k.saturating_sub(7);
            let win = mags[lo..=k].iter().cloned().fold(0.0, f64::max);
            if win < best.0 {
                best = (win, k + 1);
            }
        }
        let kopt = best.1.min(n);
        let f: C = tf[..kopt].iter().sum();
        let g: C = tg[..kopt].iter().sum();
        let tail = if kopt < n { mags[kopt] } else { 0.0 } / mags[0];
        let z4 = z.sqrt().sqrt();
        let th = self.theta(z);
        let v = match kind {
            Decay::Minus => {
                let e = (-th).exp();
                [e * f / z4, I * e * z4 * g]
            }
            Decay::Plus => {
                let e = th.exp();
                [I * e * f / z4, e * z4 * g]
            }
        };
        (v, tail)
    }
}

/// Frobenius solution ζ^{α} Σ cₖ ζᵏ attached to the residue eigenvalue +α.
pub fn frobenius(p: &LaxParams, z: C, nterms: usize) -> Vec2 {
    let r = p.residue();
    let q = p.q();
    let pm = p.p();
    let al = p.alpha;
    let a = p.up / 2.0;
    let c0: Vec2 = if p.u.abs() + (a - al).abs() > (a + al).abs() + p.w.abs() {
        [I * p.u, re(a - al)]
    } else {
        [re(a + al), -I * p.w]
    };
    let mut prev2: Vec2 = [re(0.0); 2];
    let mut prev1 = c0;
    let mut sum = c0;
    let mut zk = re(1.0);
    for k in 1..nterms {
        let qv = matvec(&q, &prev1);
        let pv = matvec(&pm, &prev2);
        let rhs = [-qv[0] - pv[0], -qv[1] - pv[1]];
        let sh = re(al + k as f64);
        let m = [[r[0][0] - sh, r[0][1]], [r[1][0], r[1][1] - sh]];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let ck = [
            (m[1][1] * rhs[0] - m[0][1] * rhs[1]) / det,
            (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
        ];
        zk *= z;
        let term = [ck[0] * zk, ck[1] * zk];
        sum = [sum[0] + term[0], sum[1] + term[1]];
        prev2 = prev1;
        prev1 = ck;
        if k > 8 && norm2(&term) < 1e-18 * norm2(&sum) {
            break;
        }
    }
    let za = z.powf(al);
    [sum[0] * za, sum[1] * za]
}

/// Taylor-series stepping for ζψ' = (R + Qζ + Pζ²)ψ.
pub struct Transport<'a> {
    p: &'a LaxParams,
    r: Mat2,
    q: Mat2,
    pm: Mat2,
}

fn madd(a: &Mat2, b: &Mat2, cb: C) -> Mat2 {
    [
        [a[0][0] + cb * b[0][0], a[0][1] + cb * b[0][1]],
        [a[1][0] + cb * b[1][0], a[1][1] + cb * b[1][1]],
    ]
}

impl<'a> Transport<'a> {
    pub fn new(p: &'a LaxParams) -> Self {
        Transport {
            p,
            r: p.residue(),
            q: p.q(),
            pm: p.p(),
        }
    }

    fn step_bound(&self, z: C) -> f64 {
        let m = self.p.matrix(z);
        let lam = (m[0][0] * m[0][0] + m[0][1] * m[1][0]).norm().sqrt();
        (0.5 * z.norm()).min(2.0 / lam.max(1e-3))
    }

    /// One Taylor step from z0 to z0 + h. Returns None when the series has
    /// not converged within the term budget.
    fn step(&self, z0: C, y: &Vec2, h: C) -> Option<Vec2> {
        let m0 = madd(&madd(&self.r, &self.q, z0), &self.pm, z0 * z0);
        let m1 = madd(&self.q, &self.pm, 2.0 * z0);
        let m2 = self.pm;
        let mut c = [[re(0.0); 2]; 3];
        c[2] = *y;
        let mut sum = *y;
        let mut hk = re(1.0);
        let scale = norm2(y) + 1e-300;
        let mut small = 0;
        for k in 0..100usize {
            let kf = k as f64;
            let a0 = matvec(&m0, &c[2]);
            let a1 = matvec(&m1, &c[1]);
            let a2 = matvec(&m2, &c[0]);
            let den = z0 * (kf + 1.0);
            let next = [
                (a0[0] + a1[0] + a2[0] - kf * c[2][0]) / den,
                (a0[1] + a1[1] + a2[1] - kf * c[2][1]) / den,
            ];
            hk *= h;
            let term = [next[0] * hk, next[1] * hk];
            sum = [sum[0] + term[0], sum[1] + term[1]];
            c = [c[1], c[2], next];
            if norm2(&term) < 1e-18 * scale.max(norm2(&sum)) {
                small += 1;
                if small >= 3 {
                    return Some(sum);
                }
            } else {
                small = 0;
            }
        }
        None
    }

    /// Transport y from z0 to z1 along the straight segment.
    pub fn segment(&self, z0: C, y0: Vec2, z1: C) -> Result<Vec2> {
        let mut z = z0;
        let mut y = y0;
        let mut guard = 0usize;
        while (z1 - z).norm() > 0.0 {
            let rem = z1 - z;
            let mut hlen = self.step_bound(z).min(rem.norm());
            loop {
                let h = if hlen >= rem.norm() { rem } else { rem * (hlen / rem.norm()) };
                match self.step(z, &y, h) {
                    Some(v) => {
                        y = v;
                        z = if hlen >= rem.norm() { z1 } else { z + h };
                        break;
                    }
                    None => {
                        hlen *= 0.5;
                        if hlen < 1e-12 * z.norm().min(1.0) {
                            return Err(Error::Integration(format!("Taylor step collapsed at {z}")));
                        }
                    }
                }
            }
            guard += 1;
            if guard > 1_000_000 {
                return Err(Error::Integration("too many Taylor steps".into()));
            }
            if !y[0].is_finite() || !y[1].is_finite() {
                return Err(Error::Integration(format!("non-finite ψ at {z}")));
            }
        }
        Ok(y)
    }

    /// Value at ζ = 0 from z0 in one Taylor step; only for a vanishing
    /// residue, when ψ is entire.
    pub fn to_origin(&self, z0: C, y0: Vec2) -> Result<Vec2> {
        if self.r.iter().flatten().any(|v| *v != re(0.0)) {
            return Err(Error::Domain("ψ is singular at the origin for a nonzero residue".into()));
        }
        self.step(z0, &y0, -z0)
            .ok_or_else(|| Error::Integration(format!("Taylor step from {z0} to 0 did not converge")))
    }

    /// Transport along the arc r·e^{iφ}, φ from phi0 to phi1.
    pub fn arc(&self, r: f64, phi0: f64, phi1: f64, y0: Vec2) -> Result<Vec2> {
        let n = ((phi1 - phi0).abs() / 0.25).ceil().max(1.0) as usize;
        let mut y = y0;
        for k in 0..n {
            let a0 = phi0 + (phi1 - phi0) * k as f64 / n as f64;
            let a1 = phi0 + (phi1 - phi0) * (k + 1) as f64 / n as f64;
            y = self.segment(C::from_polar(r, a0), y, C::from_polar(r, a1))?;
        }
        Ok(y)
    }

    /// Visit real points in order, starting from (x0, y0), calling `f` at each.
    pub fn through_real<F: FnMut(usize, &Vec2) -> Result<()>>(&self, x0: C, y0: Vec2, xs: &[f64], mut f: F) -> Result<Vec2> {
        let mut z = x0;
        let mut y = y0;
        for (i, &x) in xs.iter().enumerate() {
            y = self.segment(z, y, re(x))?;
            z = re(x);
            f(i, &y)?;
        }
        Ok(y)
    }
}

pub fn rot(phi: f64) -> C {
    C::from_polar(1.0, phi)
}

pub const TWO_PI_3: f64 = 2.0 * PI / 3.0;
