//! The Eckart-type exactly solvable potential, its conditionally exactly
//! solvable dual, and the algebra linking their spectra.
//!
//! # ES side
//!
//! `W̃(x) = -2β coth x + α(α-1) cosech²x` on `x > 0` has levels
//! `E_n = -(β/(α+n))² - (α+n)²` for `(α+n)² < β`. Under `y = ln sinh x`
//! the dual couplings are `λ = α(α-1)`, `ν = -2β`, `μ = E_n + α(α-1)`.
//!
//! # CES side
//!
//! `V(y) = A/z - B/z^{1/2} - 3/(4z²)`, `z = 1 + e^{-2y}`, with
//! `A = ½ - μ`, `B = -ν`. Its level `-ε_n` has `ε_n = α(α-1) + ¼`, so
//! `√ε_n = α - ½` (taking `α > ½`).
//!
//! # The eigenvalue cubic
//!
//! Write `s = √ε_n`, `m = n + ½` and `k = s + m = α + n`. Eliminating `α`
//! between the three relations above gives
//!
//! ```text
//! (¾ - A - s²) k² + B²/4 + k⁴ = 0.
//! ```
//!
//! Since `k⁴ - s²k² = k² m (2s + m)`, this is `k² (2ms + D) + B²/4 = 0` with
//! `D = m² + ¾ - A`, and expanding `k² = s² + 2ms + m²`:
//!
//! ```text
//! 2m s³ + (D + 4m²) s² + 2m (D + m²) s + (m² D + B²/4) = 0.
//! ```
//!
//! # Root selection
//!
//! A root is admissible when `s > 0` (decay as `y → -∞`) and
//! `κ = B/(2k) - k > 0` (decay as `y → +∞`, which is the ES window
//! `k² < β = B/2`). On that set `μ` is strictly increasing in `α`, so at
//! most one root survives.
//!
//! # Eigenfunctions
//!
//! With `u = (1 + e^{-2y})^{1/2} = coth x` the level-`n` eigenfunction is
//!
//! ```text
//! φ_n(y) = u^{1/2} (u - 1)^{-(c/2 - B/(4c))} (u + 1)^{-(c/2 + B/(4c))}
//!          P_n^{(B/(2c) - c, -B/(2c) - c)}(u),      c = n + ½ + s.
//! ```
//!
//! Note `u^{1/2} = z^{1/4}`. Writing the Jacobi argument and the two
//! algebraic factors in `z` itself, with either equal exponents or the
//! `∓ B/(4c)` pair, does not solve the equation; see
//! `docs/eigenfunction-form.md` for the residuals.

use serde::Serialize;
use thiserror::Error;

use crate::duality::DualCouplings;
use crate::specfun::{jacobi_p, solve_cubic_real, CubicCoeffs, SpecfunError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("alpha must be positive and finite, got {0}")]
    BadAlpha(f64),
    #[error("beta = {beta} is below alpha² = {alpha_sq}")]
    OutsideWindow { beta: f64, alpha_sq: f64 },
    #[error("level {n} is beyond the bound spectrum ((alpha + n)² > beta)")]
    SpectrumExhausted { n: usize },
    #[error("x = {0} is outside (0, ∞)")]
    NonPositiveX(f64),
    #[error("alpha = {0} <= 1/2 has no positive branch for sqrt(eps)")]
    BranchUndefined(f64),
    #[error("parameters must be finite")]
    NonFinite,
    #[error("no admissible root of the level-{n} cubic")]
    NoAdmissibleRoot { n: usize },
    #[error("{count} admissible roots of the level-{n} cubic")]
    AmbiguousRoot { n: usize, count: usize },
    #[error("eigenfunction evaluation overflowed at y = {0}")]
    Overflow(f64),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

/// Shape parameters of the ES potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ESParams {
    alpha: f64,
    beta: f64,
}

impl ESParams {
    /// Requires `α > 0` and `β ≥ α²`. The boundary `β = α²` is accepted so
    /// the threshold itself can be represented; it has no bound levels.
    pub fn new(alpha: f64, beta: f64) -> Result<Self, ModelError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(ModelError::BadAlpha(alpha));
        }
        if !beta.is_finite() {
            return Err(ModelError::NonFinite);
        }
        if beta < alpha * alpha {
            return Err(ModelError::OutsideWindow {
                beta,
                alpha_sq: alpha * alpha,
            });
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `β > α²`: at least one bound level.
    pub fn is_solvable(&self) -> bool {
        self.beta > self.alpha * self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.alpha * (self.alpha - 1.0)
    }
}

/// Shape parameters of the CES potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CESParams {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

impl CESParams {
    pub fn new(a: f64, b: f64) -> Result<Self, ModelError> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(ModelError::NonFinite);
        }
        Ok(Self { a, b })
    }

    /// `(μ, ν) = (½ - A, -B)`.
    pub fn to_couplings(&self) -> (f64, f64) {
        (0.5 - self.a, -self.b)
    }

    /// `y → +∞` limit `A - B - ¾`.
    pub fn right_asymptote(&self) -> f64 {
        self.a - self.b - 0.75
    }
}

/// One bound level of the CES potential; its eigenvalue is `-eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CESLevel {
    pub n: usize,
    pub sqrt_eps: f64,
    pub eps: f64,
    pub c: f64,
    pub alpha: f64,
}

impl CESLevel {
    fn from_sqrt_eps(n: usize, s: f64) -> Self {
        Self {
            n,
            sqrt_eps: s,
            eps: s * s,
            c: n as f64 + 0.5 + s,
            alpha: s + 0.5,
        }
    }

    pub fn energy(&self) -> f64 {
        -self.eps
    }
}

/// `W̃(x) = -2β coth x + α(α-1) cosech²x`.
pub fn es_potential(p: &ESParams, x: f64) -> Result<f64, ModelError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(ModelError::NonPositiveX(x));
    }
    let s = x.sinh();
    Ok(-2.0 * p.beta / x.tanh() + p.lambda() / (s * s))
}

/// `E_n = -(β/(α+n))² - (α+n)²`.
///
/// Defined up to the threshold `(α+n)² = β`, where it equals the continuum
/// edge `-2β`; past that the formula no longer describes a level.
pub fn es_energy(p: &ESParams, n: usize) -> Result<f64, ModelError> {
    let k = p.alpha + n as f64;
    if k * k > p.beta {
        return Err(ModelError::SpectrumExhausted { n });
    }
    Ok(-(p.beta / k).powi(2) - k * k)
}

/// Number of `n` with `(α+n)² < β`.
pub fn es_bound_count(p: &ESParams) -> usize {
    (0..)
        .take_while(|&n| (p.alpha + n as f64).powi(2) < p.beta)
        .count()
}

/// `λ = α(α-1)`, `ν = -2β`, `μ = E_n + α(α-1)`.
pub fn couplings_from_es(p: &ESParams, n: usize) -> Result<DualCouplings, ModelError> {
    let e = es_energy(p, n)?;
    let lambda = p.lambda();
    Ok(DualCouplings {
        lambda,
        nu: -2.0 * p.beta,
        mu: e + lambda,
    })
}

/// `A = ½ - μ`, `B = -ν`.
pub fn ces_from_couplings(mu: f64, nu: f64) -> CESParams {
    CESParams {
        a: 0.5 - mu,
        b: -nu,
    }
}

/// `V(y) = A t - B t^{1/2} - ¾ t²` with `t = 1/(1 + e^{-2y})`.
pub fn ces_potential(p: &CESParams, y: f64) -> f64 {
    let t = 1.0 / (1.0 + (-2.0 * y).exp());
    p.a * t - p.b * t.sqrt() - 0.75 * t * t
}

/// Cubic in `s = √ε_n` for level `n`; see the module docs for the expansion.
pub fn ces_energy_cubic(p: &CESParams, n: usize) -> CubicCoeffs {
    let m = n as f64 + 0.5;
    let m2 = m * m;
    let d = m2 + 0.75 - p.a;
    CubicCoeffs {
        c3: 2.0 * m,
        c2: d + 4.0 * m2,
        c1: 2.0 * m * (d + m2),
        c0: m2 * d + 0.25 * p.b * p.b,
    }
}

/// A cubic root with the two decay rates that decide its admissibility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootCandidate {
    pub root: f64,
    /// `√ε_n`: decay rate for `y → -∞`.
    pub left_decay: f64,
    /// `B/(2c) - c`: decay rate for `y → +∞`.
    pub right_decay: f64,
    pub admissible: bool,
}

/// All real roots of the level-`n` cubic with the admissibility verdicts.
pub fn ces_root_candidates(p: &CESParams, n: usize) -> Result<Vec<RootCandidate>, ModelError> {
    let roots = solve_cubic_real(ces_energy_cubic(p, n))?;
    Ok(roots
        .into_iter()
        .map(|s| {
            let c = n as f64 + 0.5 + s;
            let right = p.b / (2.0 * c) - c;
            RootCandidate {
                root: s,
                left_decay: s,
                right_decay: right,
                admissible: s > 0.0 && c > 0.0 && right > 0.0,
            }
        })
        .collect())
}

/// Level `n` of the CES potential from the unique admissible cubic root.
pub fn ces_energy(p: &CESParams, n: usize) -> Result<CESLevel, ModelError> {
    let candidates = ces_root_candidates(p, n)?;
    let admissible: Vec<_> = candidates.iter().filter(|c| c.admissible).collect();
    match admissible.as_slice() {
        [] => Err(ModelError::NoAdmissibleRoot { n }),
        [only] => Ok(CESLevel::from_sqrt_eps(n, only.root)),
        many => Err(ModelError::AmbiguousRoot {
            n,
            count: many.len(),
        }),
    }
}

/// The CES level reached from the ES side: `√ε_n = α - ½`.
pub fn ces_level_from_es(p: &ESParams, n: usize) -> Result<CESLevel, ModelError> {
    if p.alpha <= 0.5 {
        return Err(ModelError::BranchUndefined(p.alpha));
    }
    es_energy(p, n)?;
    Ok(CESLevel::from_sqrt_eps(n, p.alpha - 0.5))
}

/// `ln(1 + e^t)` without overflow.
fn ln1p_exp(t: f64) -> f64 {
    if t > 35.0 {
        t + (-t).exp()
    } else {
        t.exp().ln_1p()
    }
}

/// Unnormalized level-`n` eigenfunction of `V(y)`; see the module docs.
pub fn ces_wavefunction(level: &CESLevel, p: &CESParams, y: f64) -> Result<f64, ModelError> {
    if !y.is_finite() {
        return Err(ModelError::NonFinite);
    }
    let c = level.c;
    let ratio = p.b / (2.0 * c);
    // ln u = ½ ln(1 + e^{-2y}); u - 1 = e^{-2y}/(u + 1).
    let ln_u = 0.5 * ln1p_exp(-2.0 * y);
    let u = ln_u.exp();
    let ln_u_plus = if u.is_finite() {
        (u + 1.0).ln()
    } else {
        ln_u
    };
    let ln_u_minus = -2.0 * y - ln_u_plus;
    let ln_prefactor = 0.5 * ln_u - 0.5 * (c - ratio) * ln_u_minus - 0.5 * (c + ratio) * ln_u_plus;
    let jac = if level.n == 0 {
        1.0
    } else {
        jacobi_p(level.n, ratio - c, -ratio - c, u).map_err(|_| ModelError::Overflow(y))?
    };
    let value = ln_prefactor.exp() * jac;
    if !value.is_finite() {
        return Err(ModelError::Overflow(y));
    }
    Ok(value)
}

/// `ε_n + E_n - μ - ¼`.
pub fn energy_sum_residual(level: &CESLevel, es_e: f64, mu: f64) -> f64 {
    level.eps + es_e - mu - 0.25
}

/// An ES level carried through the duality to the CES side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParameterChain {
    pub es: ESParams,
    pub n: usize,
    pub es_energy: f64,
    pub couplings: DualCouplings,
    pub ces: CESParams,
    pub level: CESLevel,
}

impl ParameterChain {
    pub fn from_es(es: ESParams, n: usize) -> Result<Self, ModelError> {
        let es_e = es_energy(&es, n)?;
        let couplings = couplings_from_es(&es, n)?;
        let ces = ces_from_couplings(couplings.mu, couplings.nu);
        let level = ces_level_from_es(&es, n)?;
        Ok(Self {
            es,
            n,
            es_energy: es_e,
            couplings,
            ces,
            level,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn worked() -> ESParams {
        ESParams::new(1.5, 4.0).unwrap()
    }

    fn worked_ces() -> CESParams {
        CESParams::new(82.0 / 9.0, 8.0).unwrap()
    }

    #[test]
    fn es_params_validation() {
        assert!(ESParams::new(0.0, 1.0).is_err());
        assert!(ESParams::new(-1.0, 1.0).is_err());
        assert!(ESParams::new(2.0, 3.9).is_err());
        assert!(!ESParams::new(2.0, 4.0).unwrap().is_solvable());
        assert!(worked().is_solvable());
    }

    #[test]
    fn es_potential_examples() {
        let x = 1f64.asinh();
        let p1 = ESParams::new(1.0, 4.0).unwrap();
        assert_abs_diff_eq!(es_potential(&p1, x).unwrap(), -8.0 * 2f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            es_potential(&worked(), x).unwrap(),
            -8.0 * 2f64.sqrt() + 0.75,
            epsilon = 1e-12
        );
        assert!((es_potential(&worked(), 30.0).unwrap() + 8.0).abs() < 1e-8);
        assert!(es_potential(&worked(), 0.0).is_err());
        assert!(es_potential(&worked(), -0.5).is_err());
    }

    #[test]
    fn es_energy_examples() {
        assert_abs_diff_eq!(es_energy(&ESParams::new(1.0, 4.0).unwrap(), 0).unwrap(), -17.0);
        assert_abs_diff_eq!(es_energy(&worked(), 0).unwrap(), -337.0 / 36.0, epsilon = 1e-14);
        let edge = ESParams::new(2.0, 4.0).unwrap();
        assert_abs_diff_eq!(es_energy(&edge, 0).unwrap(), -8.0);
        assert_eq!(
            es_energy(&worked(), 1),
            Err(ModelError::SpectrumExhausted { n: 1 })
        );
    }

    #[test]
    fn bound_counts() {
        assert_eq!(es_bound_count(&worked()), 1);
        assert_eq!(es_bound_count(&ESParams::new(1.0, 4.0).unwrap()), 1);
        assert_eq!(es_bound_count(&ESParams::new(1.0, 100.0).unwrap()), 9);
        assert_eq!(es_bound_count(&ESParams::new(2.0, 4.0).unwrap()), 0);
        assert_eq!(es_bound_count(&ESParams::new(0.8, 10.0).unwrap()), 3);
        assert_eq!(es_bound_count(&ESParams::new(2.5, 25.0).unwrap()), 3);
    }

    #[test]
    fn worked_chain_arithmetic() {
        let c = couplings_from_es(&worked(), 0).unwrap();
        assert_abs_diff_eq!(c.lambda, 0.75);
        assert_abs_diff_eq!(c.nu, -8.0);
        assert_abs_diff_eq!(c.mu, -310.0 / 36.0, epsilon = 1e-14);
        let ces = ces_from_couplings(c.mu, c.nu);
        assert_abs_diff_eq!(ces.a, 82.0 / 9.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ces.b, 8.0);
        let (mu, nu) = ces.to_couplings();
        assert_abs_diff_eq!(mu, c.mu, epsilon = 1e-14);
        assert_eq!(nu, c.nu);

        let zero = ces_from_couplings(0.5, 0.0);
        assert_eq!((zero.a, zero.b), (0.0, 0.0));
        assert_eq!(couplings_from_es(&ESParams::new(1.0, 9.0).unwrap(), 1).unwrap().lambda, 0.0);
    }

    #[test]
    fn ces_potential_examples() {
        let p = worked_ces();
        let want = 41.0 / 9.0 - 8.0 / 2f64.sqrt() - 3.0 / 16.0;
        assert_abs_diff_eq!(ces_potential(&p, 0.0), want, epsilon = 1e-13);
        assert!((ces_potential(&p, 30.0) - p.right_asymptote()).abs() < 1e-8);
        assert!(ces_potential(&p, -30.0).abs() < 1e-8);
        assert_eq!(ces_potential(&p, -800.0), 0.0);
    }

    #[test]
    fn worked_cubic_has_unit_root() {
        let cubic = ces_energy_cubic(&worked_ces(), 0);
        // Factored relation at s = 1 vanishes exactly in rationals.
        let (a, b, s) = (82.0 / 9.0, 8.0, 1.0);
        let k: f64 = 0.5 + s;
        let factored = (0.75 - a - s * s) * k * k + b * b / 4.0 + k.powi(4);
        assert!(factored.abs() < 1e-12);
        assert!(cubic.eval(1.0).abs() < 1e-12);
        let level = ces_energy(&worked_ces(), 0).unwrap();
        assert_abs_diff_eq!(level.sqrt_eps, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(level.eps, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(level.c, 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(level.alpha, 1.5, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_shape_has_no_level() {
        let p = CESParams::new(0.75, 0.0).unwrap();
        let cubic = ces_energy_cubic(&p, 0);
        // -(s²)(½+s)² + (½+s)⁴ = (½+s)² (½)(½ + 2s)
        for s in [-1.3, -0.2, 0.4, 2.0] {
            let want = (0.5 + s) * (0.5 + s) * 0.5 * (0.5 + 2.0 * s);
            assert!((cubic.eval(s) - want).abs() < 1e-12);
        }
        assert_eq!(ces_energy(&p, 0), Err(ModelError::NoAdmissibleRoot { n: 0 }));
    }

    #[test]
    fn cubic_roots_are_well_conditioned() {
        let p = worked_ces();
        let bumped = CESParams::new(p.a + 1e-9, p.b).unwrap();
        let a = solve_cubic_real(ces_energy_cubic(&p, 0)).unwrap();
        let b = solve_cubic_real(ces_energy_cubic(&bumped, 0)).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-6);
        }
    }

    #[test]
    fn energy_sum_examples() {
        let chain = ParameterChain::from_es(worked(), 0).unwrap();
        let r = energy_sum_residual(&chain.level, chain.es_energy, chain.couplings.mu);
        assert!(r.abs() < 1e-12);
        let one = ParameterChain::from_es(ESParams::new(1.0, 16.0).unwrap(), 2).unwrap();
        assert_eq!(one.level.eps, 0.25);
        assert_eq!(energy_sum_residual(&one.level, one.es_energy, one.couplings.mu), 0.0);
    }

    #[test]
    fn ground_wavefunction_is_pure_prefactor_and_decays() {
        let p = worked_ces();
        let level = ces_energy(&p, 0).unwrap();
        let mid = ces_wavefunction(&level, &p, 0.0).unwrap();
        let u: f64 = 2f64.sqrt();
        let c = 1.5;
        let r = 8.0 / (2.0 * c);
        let want = u.sqrt() * (u - 1.0).powf(-0.5 * (c - r)) * (u + 1.0).powf(-0.5 * (c + r));
        assert_abs_diff_eq!(mid, want, epsilon = 1e-13);
        for y in [-20.0, 20.0] {
            assert!(ces_wavefunction(&level, &p, y).unwrap().abs() < 1e-6 * mid.abs());
        }
        assert!(ces_wavefunction(&level, &p, -1e3).unwrap().is_finite());
        assert!(ces_wavefunction(&level, &p, f64::NAN).is_err());
    }

    #[test]
    fn branch_rejects_small_alpha() {
        let p = ESParams::new(0.4, 4.0).unwrap();
        assert_eq!(ces_level_from_es(&p, 0), Err(ModelError::BranchUndefined(0.4)));
    }

    proptest! {
        #[test]
        fn es_energy_increases_in_window(alpha in 0.1f64..4.0, extra in 0.1f64..60.0) {
            let p = ESParams::new(alpha, alpha * alpha + extra).unwrap();
            let count = es_bound_count(&p);
            for n in 1..count {
                prop_assert!(es_energy(&p, n).unwrap() > es_energy(&p, n - 1).unwrap());
            }
            for n in 0..count {
                prop_assert!(es_energy(&p, n).unwrap() < -2.0 * p.beta());
            }
        }

        #[test]
        fn chain_recovers_unique_root(alpha in 0.55f64..3.0, n in 0usize..4, kappa in 0.05f64..5.0) {
            let k = alpha + n as f64;
            let p = ESParams::new(alpha, k * (k + kappa)).unwrap();
            let chain = ParameterChain::from_es(p, n).unwrap();
            let candidates = ces_root_candidates(&chain.ces, n).unwrap();
            prop_assert_eq!(candidates.iter().filter(|c| c.admissible).count(), 1);
            let level = ces_energy(&chain.ces, n).unwrap();
            prop_assert!((level.sqrt_eps - chain.level.sqrt_eps).abs() < 1e-8);
            prop_assert!((level.eps - (level.alpha * (level.alpha - 1.0) + 0.25)).abs() < 1e-12);
            let r = energy_sum_residual(&chain.level, chain.es_energy, chain.couplings.mu);
            prop_assert!(r.abs() < 1e-10);
        }
    }
}
