//! Dual Schrödinger pairs related by a monotone change of variable.
//!
//! A coordinate map `y(x)` turns
//!
//! ```text
//! [-d²/dx² + λ y'² + ν y'] ψ = μ ψ
//! ```
//!
//! into
//!
//! ```text
//! [-d²/dy² - ½{x,y} - μ x'² + ν x'] φ = -λ φ,      ψ = (dx/dy)^{1/2} φ,
//! ```
//!
//! where `x' = dx/dy` and `{x,y}` is the Schwarzian derivative written
//! through the x-derivatives of `y`. Energy and coupling trade places.
//!
//! Maps carry their first three derivatives in closed form; the Schwarzian
//! is never computed by numerical differentiation here.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DualityError {
    #[error("{coord} = {value} lies outside the open interval ({lo}, {hi})")]
    OutOfDomain {
        coord: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("map derivative vanishes at x = {0}")]
    SingularMap(f64),
    #[error("map is not increasing at x = {0}")]
    NonMonotone(f64),
    #[error("affine slope must be positive and finite, got {0}")]
    BadSlope(f64),
}

/// Open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn contains(&self, v: f64) -> bool {
        v.is_finite() && self.lo < v && v < self.hi
    }
}

/// The shared constants of a dual pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualCouplings {
    /// Coupling of `y'²` in the x-problem; `-lambda` is the y-problem energy.
    pub lambda: f64,
    pub nu: f64,
    /// Energy of the x-problem.
    pub mu: f64,
}

/// A monotone increasing coordinate map `y(x)` with closed-form derivatives.
///
/// Only increasing maps are supported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapDescriptor {
    /// `y = ln sinh x`, `x ∈ (0, ∞)`, `y ∈ ℝ`.
    LogSinh,
    /// `y = slope·x + offset` on the whole line.
    Affine { slope: f64, offset: f64 },
}

impl MapDescriptor {
    pub fn log_sinh() -> Self {
        MapDescriptor::LogSinh
    }

    pub fn affine(slope: f64, offset: f64) -> Result<Self, DualityError> {
        if !(slope.is_finite() && slope > 0.0 && offset.is_finite()) {
            return Err(DualityError::BadSlope(slope));
        }
        Ok(MapDescriptor::Affine { slope, offset })
    }

    pub fn identity() -> Self {
        MapDescriptor::Affine {
            slope: 1.0,
            offset: 0.0,
        }
    }

    pub fn domain_x(&self) -> Interval {
        match self {
            MapDescriptor::LogSinh => Interval {
                lo: 0.0,
                hi: f64::INFINITY,
            },
            MapDescriptor::Affine { .. } => Interval::REAL_LINE,
        }
    }

    pub fn domain_y(&self) -> Interval {
        Interval::REAL_LINE
    }

    fn check_x(&self, x: f64) -> Result<(), DualityError> {
        let d = self.domain_x();
        if d.contains(x) {
            Ok(())
        } else {
            Err(DualityError::OutOfDomain {
                coord: "x",
                value: x,
                lo: d.lo,
                hi: d.hi,
            })
        }
    }

    fn check_y(&self, y: f64) -> Result<(), DualityError> {
        let d = self.domain_y();
        if d.contains(y) {
            Ok(())
        } else {
            Err(DualityError::OutOfDomain {
                coord: "y",
                value: y,
                lo: d.lo,
                hi: d.hi,
            })
        }
    }

    pub fn forward(&self, x: f64) -> Result<f64, DualityError> {
        self.check_x(x)?;
        Ok(match *self {
            MapDescriptor::LogSinh => log_sinh(x),
            MapDescriptor::Affine { slope, offset } => slope * x + offset,
        })
    }

    pub fn inverse(&self, y: f64) -> Result<f64, DualityError> {
        self.check_y(y)?;
        let x = match *self {
            MapDescriptor::LogSinh => y.exp().asinh(),
            MapDescriptor::Affine { slope, offset } => (y - offset) / slope,
        };
        // e^y underflows for very negative y; the image then leaves (0, ∞).
        self.check_x(x)?;
        Ok(x)
    }

    /// `dy/dx`.
    pub fn d1(&self, x: f64) -> Result<f64, DualityError> {
        self.check_x(x)?;
        Ok(match *self {
            MapDescriptor::LogSinh => 1.0 / x.tanh(),
            MapDescriptor::Affine { slope, .. } => slope,
        })
    }

    /// `d²y/dx²`.
    pub fn d2(&self, x: f64) -> Result<f64, DualityError> {
        self.check_x(x)?;
        Ok(match *self {
            MapDescriptor::LogSinh => -csch2(x),
            MapDescriptor::Affine { .. } => 0.0,
        })
    }

    /// `d³y/dx³`.
    pub fn d3(&self, x: f64) -> Result<f64, DualityError> {
        self.check_x(x)?;
        Ok(match *self {
            MapDescriptor::LogSinh => 2.0 * csch2(x) / x.tanh(),
            MapDescriptor::Affine { .. } => 0.0,
        })
    }

    /// `dx/dy` evaluated at the point `x`.
    pub fn dx_dy(&self, x: f64) -> Result<f64, DualityError> {
        let d1 = self.d1(x)?;
        if d1 == 0.0 {
            return Err(DualityError::SingularMap(x));
        }
        Ok(match *self {
            MapDescriptor::LogSinh => x.tanh(),
            MapDescriptor::Affine { slope, .. } => 1.0 / slope,
        })
    }
}

/// `ln sinh x`, stable for large `x`.
fn log_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}

fn csch2(x: f64) -> f64 {
    let s = x.sinh();
    1.0 / (s * s)
}

/// The map used by the Eckart / CES pair, `dy/dx = coth x`.
pub fn log_sinh_map() -> MapDescriptor {
    MapDescriptor::LogSinh
}

/// Schwarzian `{x, y}` from the x-derivatives of `y`:
/// `-(1/y'²) [ (y''/y')' - ½ (y''/y')² ]`.
pub fn schwarzian(map: &MapDescriptor, x: f64) -> Result<f64, DualityError> {
    let y1 = map.d1(x)?;
    if y1 == 0.0 {
        return Err(DualityError::SingularMap(x));
    }
    let y2 = map.d2(x)?;
    let y3 = map.d3(x)?;
    let ratio = y2 / y1;
    let ratio_prime = y3 / y1 - ratio * ratio;
    Ok(-(ratio_prime - 0.5 * ratio * ratio) / (y1 * y1))
}

/// Closed form of `{x, y}` for `y = ln sinh x`:
/// `-(sech²x tanh²x + sech²x - ½ sech⁴x)`. Requires `x > 0`.
pub fn schwarzian_closed_form(x: f64) -> f64 {
    let sech = 1.0 / x.cosh();
    let sech2 = sech * sech;
    let tanh2 = x.tanh().powi(2);
    -(sech2 * tanh2 + sech2 - 0.5 * sech2 * sech2)
}

/// `W(x) = λ (dy/dx)² + ν dy/dx`.
pub fn build_w(map: &MapDescriptor, lambda: f64, nu: f64, x: f64) -> Result<f64, DualityError> {
    let y1 = map.d1(x)?;
    Ok(lambda * y1 * y1 + nu * y1)
}

/// `U(y) = -μ (dx/dy)² + ν dx/dy - ½{x, y}` at `x = x(y)`.
pub fn build_u(map: &MapDescriptor, mu: f64, nu: f64, y: f64) -> Result<f64, DualityError> {
    let x = map.inverse(y)?;
    let xp = map.dx_dy(x)?;
    let s = schwarzian(map, x)?;
    Ok(-mu * xp * xp + nu * xp - 0.5 * s)
}

/// Carries `φ(y)` samples to `ψ(x) = (dx/dy)^{1/2} φ(y(x))`.
///
/// Input and output are `(coordinate, value)` pairs; the image grid is in
/// general non-uniform and is returned as is.
pub fn transform_wavefunction(
    map: &MapDescriptor,
    phi: &[(f64, f64)],
) -> Result<Vec<(f64, f64)>, DualityError> {
    phi.iter()
        .map(|&(y, v)| {
            let x = map.inverse(y)?;
            let xp = map.dx_dy(x)?;
            if xp <= 0.0 {
                return Err(DualityError::NonMonotone(x));
            }
            Ok((x, xp.sqrt() * v))
        })
        .collect()
}

/// The reverse of [`transform_wavefunction`]: `φ(y) = (dy/dx)^{1/2} ψ(x)`.
pub fn dual_wavefunction(
    map: &MapDescriptor,
    psi: &[(f64, f64)],
) -> Result<Vec<(f64, f64)>, DualityError> {
    psi.iter()
        .map(|&(x, v)| {
            let y = map.forward(x)?;
            let y1 = map.d1(x)?;
            if y1 <= 0.0 {
                return Err(DualityError::NonMonotone(x));
            }
            Ok((y, y1.sqrt() * v))
        })
        .collect()
}
