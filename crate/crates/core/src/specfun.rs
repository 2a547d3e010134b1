//! Special-function and root-finding kernels.
//!
//! Jacobi polynomials by upward recurrence, real roots of cubics and
//! central finite differences. Everything here is a pure function of its
//! arguments.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("non-finite argument to {0}")]
    NonFinite(&'static str),
    #[error("leading coefficient is zero; not a cubic")]
    DegenerateCubic,
}

/// Jacobi polynomial `P_n^{(a,b)}(z)`.
///
/// Uses the three-term recurrence in the degree. `z` is not restricted to
/// `[-1, 1]`. When a recurrence denominator vanishes (possible for negative
/// integer-like `a + b`) the explicit finite sum is used instead.
pub fn jacobi_p(n: usize, a: f64, b: f64, z: f64) -> Result<f64, SpecfunError> {
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(SpecfunError::NonFinite("jacobi_p"));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let ab = a + b;
    let p1 = 0.5 * (a - b) + (1.0 + 0.5 * ab) * z;
    if n == 1 {
        return Ok(p1);
    }

    let mut prev = 1.0;
    let mut curr = p1;
    for k in 1..n {
        let k = k as f64;
        let s = 2.0 * k + ab;
        let denom = 2.0 * (k + 1.0) * (k + ab + 1.0) * s;
        if denom.abs() < 1e-300 || s.abs() < 1e-12 {
            return Ok(jacobi_sum(n, a, b, z));
        }
        let lin = (s + 1.0) * ((s + 2.0) * s * z + a * a - b * b);
        let back = 2.0 * (k + a) * (k + b) * (s + 2.0);
        let next = (lin * curr - back * prev) / denom;
        prev = curr;
        curr = next;
    }
    Ok(curr)
}

/// `P_n = sum_k (n+a+b+1)_k (a+k+1)_{n-k} / (k! (n-k)!) ((z-1)/2)^k`.
fn jacobi_sum(n: usize, a: f64, b: f64, z: f64) -> f64 {
    let w = 0.5 * (z - 1.0);
    let mut total = 0.0;
    let mut wk = 1.0;
    for k in 0..=n {
        let mut term = wk;
        for j in 0..k {
            term *= (n as f64 + a + b + 1.0 + j as f64) / (j as f64 + 1.0);
        }
        for j in 0..(n - k) {
            term *= (a + k as f64 + 1.0 + j as f64) / (j as f64 + 1.0);
        }
        total += term;
        wk *= w;
    }
    total
}

/// Coefficients of `c3 s^3 + c2 s^2 + c1 s + c0`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CubicCoeffs {
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl CubicCoeffs {
    pub fn new(c3: f64, c2: f64, c1: f64, c0: f64) -> Self {
        Self { c3, c2, c1, c0 }
    }

    /// Expands `c3 (s - r1)(s - r2)(s - r3)`.
    pub fn from_roots(c3: f64, r1: f64, r2: f64, r3: f64) -> Self {
        Self {
            c3,
            c2: -c3 * (r1 + r2 + r3),
            c1: c3 * (r1 * r2 + r1 * r3 + r2 * r3),
            c0: -c3 * r1 * r2 * r3,
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        ((self.c3 * s + self.c2) * s + self.c1) * s + self.c0
    }

    pub fn derivative(&self, s: f64) -> f64 {
        (3.0 * self.c3 * s + 2.0 * self.c2) * s + self.c1
    }

    /// Residual bound a polished root must meet.
    pub fn residual_scale(&self, s: f64) -> f64 {
        1e-12 * f64::max(1.0, s.abs().powi(3) * self.c3.abs())
    }
}

/// All real roots of a cubic, ascending, with multiplicity (one or three).
///
/// Classifies by the discriminant of the depressed cubic, takes the
/// trigonometric or Cardano closed form, then polishes each root with a
/// guarded Newton iteration.
pub fn solve_cubic_real(c: CubicCoeffs) -> Result<Vec<f64>, SpecfunError> {
    if !(c.c3.is_finite() && c.c2.is_finite() && c.c1.is_finite() && c.c0.is_finite()) {
        return Err(SpecfunError::NonFinite("solve_cubic_real"));
    }
    if c.c3 == 0.0 {
        return Err(SpecfunError::DegenerateCubic);
    }
    let a = c.c2 / c.c3;
    let b = c.c1 / c.c3;
    let d = c.c0 / c.c3;

    // s = t - a/3 gives t^3 + p t + q = 0.
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + d;

    let scale = f64::max(1.0, a.abs().max(b.abs().sqrt()).max(d.abs().cbrt()));
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    // Rounding carried into p, q and hence into the discriminant.
    let dp = 8.0 * f64::EPSILON * (b.abs() + a * a / 3.0);
    let dq = 8.0 * f64::EPSILON * (2.0 * (a * a * a).abs() / 27.0 + (a * b).abs() / 3.0 + d.abs());
    let disc_err = q.abs() * dq + (p / 3.0).powi(2) * dp + f64::EPSILON * disc.abs();

    let mut roots = if p.abs() <= 1e-14 * scale * scale && q.abs() <= 1e-14 * scale.powi(3) {
        vec![0.0; 3]
    } else if disc <= disc_err && p < 0.0 {
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = ((3.0 * q) / (p * r)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| r * (theta - 2.0 * PI * k as f64 / 3.0).cos())
            .collect()
    } else {
        let sq = disc.sqrt();
        // Pick the sign that avoids cancellation.
        let u = (-q / 2.0 - q.signum() * sq).cbrt();
        let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        vec![t]
    };

    for r in roots.iter_mut() {
        *r = polish(&c, *r - shift);
    }
    roots.sort_by(|x, y| x.total_cmp(y));
    Ok(roots)
}

fn polish(c: &CubicCoeffs, mut s: f64) -> f64 {
    let mut f = c.eval(s);
    for _ in 0..8 {
        if f.abs() <= c.residual_scale(s) * 1e-3 {
            break;
        }
        let df = c.derivative(s);
        if df == 0.0 {
            break;
        }
        let cand = s - f / df;
        let fc = c.eval(cand);
        if !fc.is_finite() || fc.abs() >= f.abs() {
            break;
        }
        s = cand;
        f = fc;
    }
    s
}

/// Derivative order for [`finite_diff`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffOrder {
    First,
    Second,
    Third,
}

impl DiffOrder {
    fn as_int(self) -> i32 {
        match self {
            DiffOrder::First => 1,
            DiffOrder::Second => 2,
            DiffOrder::Third => 3,
        }
    }

    /// `eps^(1/(order+2)) * max(1, |x|)`.
    pub fn default_step(self, x: f64) -> f64 {
        f64::EPSILON.powf(1.0 / f64::from(self.as_int() + 2)) * x.abs().max(1.0)
    }
}

/// Second-order central difference of the requested order.
pub fn finite_diff<F>(f: F, x: f64, order: DiffOrder, h: Option<f64>) -> f64
where
    F: Fn(f64) -> f64,
{
    let h = h.unwrap_or_else(|| order.default_step(x));
    match order {
        DiffOrder::First => (f(x + h) - f(x - h)) / (2.0 * h),
        DiffOrder::Second => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        DiffOrder::Third => {
            (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h)
        }
    }
}
