//! Finite-difference oracle for `-d²/dq² + V(q)` (units with ħ = 2m = 1).
//!
//! The operator is discretized on the interior nodes of a uniform grid with
//! Dirichlet ends, giving a symmetric tridiagonal matrix with constant
//! off-diagonal `-1/h²`. Eigenvalues come from Sturm-sequence bisection,
//! eigenvectors from shifted inverse iteration.
//!
//! Two refinements make the oracle usable near singular endpoints:
//!
//! * [`WallSingularity`] replaces the `g/r² + g₁/r` part of a potential at a
//!   hard wall by the discrete value for which the three-point stencil is
//!   exact on the local solution `r^p e^{c r}`. Without it the attractive
//!   `g < 0` regime converges like `h^{2p-1}` instead of `h²`.
//! * [`focus_grid`] trims classically forbidden tails for one level, so the
//!   same point budget resolves deep, narrow states.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    #[error("grid needs q_min < q_max (finite) and at least 3 points, got [{q_min}, {q_max}] with {n_points}")]
    BadGrid {
        q_min: f64,
        q_max: f64,
        n_points: usize,
    },
    #[error("potential is not finite at q = {0}")]
    NonFinitePotential(f64),
    #[error("requested {k} eigenpairs of a {dim}-dimensional operator")]
    KOutOfRange { k: usize, dim: usize },
    #[error("vector length {got} does not match operator dimension {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("zero vector has no Rayleigh quotient")]
    ZeroVector,
    #[error("inverse-square coefficient {0} is below -1/4")]
    WallTooAttractive(f64),
}

/// Uniform grid with `n_points` interior nodes strictly inside `(q_min, q_max)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    q_min: f64,
    q_max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(q_min: f64, q_max: f64, n_points: usize) -> Result<Self, EigenError> {
        if !(q_min.is_finite() && q_max.is_finite() && q_min < q_max && n_points >= 3) {
            return Err(EigenError::BadGrid {
                q_min,
                q_max,
                n_points,
            });
        }
        Ok(Self {
            q_min,
            q_max,
            n_points,
        })
    }

    pub fn q_min(&self) -> f64 {
        self.q_min
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.q_max - self.q_min) / (self.n_points + 1) as f64
    }

    /// Interior node `i` (0-based).
    pub fn node(&self, i: usize) -> f64 {
        self.q_min + (i + 1) as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.node(i))
    }

    /// Same interval with exactly half the spacing.
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points + 1,
            ..*self
        }
    }

    pub fn with_bounds(&self, q_min: f64, q_max: f64) -> Result<Self, EigenError> {
        Self::new(q_min, q_max, self.n_points)
    }
}

/// Behaviour `V(q) ≈ g/r² + g₁/r`, `r = q - q_min`, at the left end of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallSingularity {
    pub inverse_square: f64,
    pub inverse_linear: f64,
}

impl WallSingularity {
    /// Regular indicial exponent `p = ½ + √(¼ + g)`.
    pub fn exponent(&self) -> Result<f64, EigenError> {
        let g = self.inverse_square;
        if g.is_nan() || g < -0.25 {
            return Err(EigenError::WallTooAttractive(g));
        }
        Ok(0.5 + (0.25 + g).sqrt())
    }
}

/// Symmetric tridiagonal discretization of `-d²/dq² + V`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    diagonal: Vec<f64>,
    off_diagonal: f64,
    grid: Grid,
}

impl TridiagonalOperator {
    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> f64 {
        self.off_diagonal
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let e = self.off_diagonal.abs();
        let (lo, hi) = self
            .diagonal
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &d| (lo.min(d), hi.max(d)));
        (lo - 2.0 * e, hi + 2.0 * e)
    }

    /// Magnitude used for relative tolerances.
    pub fn scale(&self) -> f64 {
        let (lo, hi) = self.bounds();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let e = self.off_diagonal;
        (0..n)
            .map(|i| {
                let mut s = self.diagonal[i] * v[i];
                if i > 0 {
                    s += e * v[i - 1];
                }
                if i + 1 < n {
                    s += e * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let e2 = self.off_diagonal * self.off_diagonal;
        let guard = f64::EPSILON * self.scale();
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diagonal.iter().enumerate() {
            q = if i == 0 { d - lambda } else { (d - lambda) - e2 / q };
            if q.abs() < guard {
                q = -guard;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `j`-th smallest eigenvalue (0-based) by bisection to rounding level.
    pub fn eigenvalue(&self, j: usize) -> Result<f64, EigenError> {
        if j >= self.dim() {
            return Err(EigenError::KOutOfRange {
                k: j + 1,
                dim: self.dim(),
            });
        }
        let (mut lo, mut hi) = self.bounds();
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

fn check_potential(v: f64, q: f64) -> Result<f64, EigenError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EigenError::NonFinitePotential(q))
    }
}

/// Three-point stencil with Dirichlet ends.
pub fn discretize<F>(potential: F, grid: &Grid) -> Result<TridiagonalOperator, EigenError>
where
    F: Fn(f64) -> f64,
{
    let h = grid.spacing();
    let kinetic = 2.0 / (h * h);
    let diagonal = grid
        .nodes()
        .map(|q| check_potential(potential(q), q).map(|v| kinetic + v))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TridiagonalOperator {
        diagonal,
        off_diagonal: -1.0 / (h * h),
        grid: *grid,
    })
}

/// Like [`discretize`], with the wall singularity at `q_min` treated exactly.
///
/// The local solution `r^p e^{c r}` with `c = g₁/(2p)` satisfies
/// `u''/u = g/r² + g₁/r + c²`. At each node the continuum `g/r² + g₁/r` is
/// replaced by the discrete `Δ_h u / u` minus its far-field limit
/// `2(cosh(ch) - 1)/h²`. Beyond that the replacement still carries an
/// `O((ch)²/r)` tail, which would bind spurious levels at threshold, so the
/// correction is tapered off between `r = WALL_TAPER.0` and `WALL_TAPER.1`.
pub fn discretize_with_wall<F>(
    potential: F,
    grid: &Grid,
    wall: &WallSingularity,
) -> Result<TridiagonalOperator, EigenError>
where
    F: Fn(f64) -> f64,
{
    let p = wall.exponent()?;
    let g = wall.inverse_square;
    let g1 = wall.inverse_linear;
    let c = g1 / (2.0 * p);
    let h = grid.spacing();
    let h2 = h * h;
    let far = 2.0 * ((c * h).cosh() - 1.0) / h2;
    let mut op = discretize(&potential, grid)?;
    for (i, d) in op.diagonal.iter_mut().enumerate() {
        let r = (i + 1) as f64 * h;
        let weight = taper(r);
        if weight == 0.0 {
            break;
        }
        let up = (1.0 + h / r).powf(p) * (c * h).exp();
        let down = (1.0 - h / r).powf(p) * (-c * h).exp();
        let discrete = (up - 2.0 + down) / h2 - far;
        *d += weight * (discrete - (g / (r * r) + g1 / r));
    }
    Ok(op)
}

/// Distance from the wall over which the stencil correction fades out.
pub const WALL_TAPER: (f64, f64) = (1.0, 2.0);

fn taper(r: f64) -> f64 {
    let (lo, hi) = WALL_TAPER;
    if r <= lo {
        1.0
    } else if r >= hi {
        0.0
    } else {
        0.5 * (1.0 + (std::f64::consts::PI * (r - lo) / (hi - lo)).cos())
    }
}

/// Eigenvalue with its grid-normalized eigenvector (`Σ v² h = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub energy: f64,
    pub vector: Vec<f64>,
}

/// Tridiagonal LU with partial pivoting for `T - σ`.
struct ShiftedLu {
    // Row i of U holds u0[i] (diagonal), u1[i], u2[i] (two superdiagonals).
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn new(t: &TridiagonalOperator, sigma: f64) -> Self {
        let n = t.dim();
        let e = t.off_diagonal;
        let tiny = f64::EPSILON * t.scale();
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut mult = vec![0.0; n];
        let mut swapped = vec![false; n];

        // Current row being eliminated: (a, b, c) at columns (i, i+1, i+2).
        let mut a = t.diagonal[0] - sigma;
        let mut b = if n > 1 { e } else { 0.0 };
        for i in 0..n {
            if i + 1 == n {
                u0[i] = if a.abs() < tiny { tiny } else { a };
                break;
            }
            // Next row: (e, d_{i+1} - σ, e) at columns (i, i+1, i+2).
            let na = e;
            let nb = t.diagonal[i + 1] - sigma;
            let nc = if i + 2 < n { e } else { 0.0 };
            if na.abs() > a.abs() {
                swapped[i] = true;
                u0[i] = na;
                u1[i] = nb;
                u2[i] = nc;
                let m = a / na;
                mult[i] = m;
                a = b - m * nb;
                b = -m * nc;
            } else {
                let piv = if a.abs() < tiny { tiny } else { a };
                u0[i] = piv;
                u1[i] = b;
                u2[i] = 0.0;
                let m = na / piv;
                mult[i] = m;
                a = nb - m * b;
                b = nc;
            }
        }
        Self {
            u0,
            u1,
            u2,
            mult,
            swapped,
        }
    }

    fn solve(&self, rhs: &mut [f64]) {
        let n = rhs.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                rhs.swap(i, i + 1);
            }
            rhs[i + 1] -= self.mult[i] * rhs[i];
        }
        for i in (0..n).rev() {
            let mut s = rhs[i];
            if i + 1 < n {
                s -= self.u1[i] * rhs[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * rhs[i + 2];
            }
            rhs[i] = s / self.u0[i];
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64], h: f64) {
    let norm = (dot(v, v) * h).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
}

/// Flip so the first non-negligible component is positive.
fn fix_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-8 * max) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// The `k` lowest eigenpairs.
///
/// Eigenvalues by bisection on the Sturm count; eigenvectors by at most five
/// steps of inverse iteration, each step re-orthogonalized against the
/// vectors already found.
pub fn eigen_lowest(t: &TridiagonalOperator, k: usize) -> Result<Vec<EigenPair>, EigenError> {
    let dim = t.dim();
    if k == 0 || k > dim {
        return Err(EigenError::KOutOfRange { k, dim });
    }
    let extra = if k < dim { k + 1 } else { k };
    let values = (0..extra)
        .map(|j| t.eigenvalue(j))
        .collect::<Result<Vec<_>, _>>()?;
    let h = t.grid.spacing();
    let scale = t.scale();

    let mut pairs: Vec<EigenPair> = Vec::with_capacity(k);
    for j in 0..k {
        let lambda = values[j];
        let mut gap = f64::INFINITY;
        if j > 0 {
            gap = gap.min(lambda - values[j - 1]);
        }
        if j + 1 < values.len() {
            gap = gap.min(values[j + 1] - lambda);
        }
        let offset = (1e-10 * scale).min(1e-3 * gap).max(4.0 * f64::EPSILON * scale);
        let lu = ShiftedLu::new(t, lambda + offset);

        let mut v: Vec<f64> = (0..dim)
            .map(|i| 1.0 + 0.25 * ((i as f64) * 0.618_033_988_7).sin())
            .collect();
        for _ in 0..5 {
            lu.solve(&mut v);
            for prev in &pairs {
                let proj = dot(&v, &prev.vector) * h;
                v.iter_mut().zip(&prev.vector).for_each(|(x, p)| *x -= proj * p);
            }
            normalize(&mut v, h);
            let tv = t.apply(&v);
            let res: f64 = tv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - lambda * b).powi(2))
                .sum::<f64>()
                .sqrt()
                * h.sqrt();
            if res <= 64.0 * f64::EPSILON * scale {
                break;
            }
        }
        fix_sign(&mut v);
        pairs.push(EigenPair {
            energy: lambda,
            vector: v,
        });
    }
    Ok(pairs)
}

/// `⟨v, T v⟩ / ⟨v, v⟩` for `v` sampled on the operator's nodes.
pub fn rayleigh_quotient(t: &TridiagonalOperator, v: &[f64]) -> Result<f64, EigenError> {
    if v.len() != t.dim() {
        return Err(EigenError::LengthMismatch {
            got: v.len(),
            want: t.dim(),
        });
    }
    let vv = dot(v, v);
    if vv == 0.0 {
        return Err(EigenError::ZeroVector);
    }
    Ok(dot(v, &t.apply(v)) / vv)
}

/// Piecewise-linear resampling of `(coordinate, value)` pairs onto the grid
/// nodes; zero outside the sampled range. Pairs must be sorted by coordinate.
pub fn resample_linear(samples: &[(f64, f64)], grid: &Grid) -> Vec<f64> {
    grid.nodes().map(|q| interpolate(samples, q)).collect()
}

/// Linear interpolation in sorted `(coordinate, value)` pairs, zero outside.
pub fn interpolate(samples: &[(f64, f64)], q: f64) -> f64 {
    let (Some(first), Some(last)) = (samples.first(), samples.last()) else {
        return 0.0;
    };
    if q < first.0 || q > last.0 {
        return 0.0;
    }
    let idx = samples.partition_point(|s| s.0 <= q);
    if idx == 0 {
        return first.1;
    }
    if idx >= samples.len() {
        return last.1;
    }
    let (q0, v0) = samples[idx - 1];
    let (q1, v1) = samples[idx];
    if q1 == q0 {
        return v0;
    }
    v0 + (v1 - v0) * (q - q0) / (q1 - q0)
}

/// `(r² fine - coarse) / (r² - 1)` with `r = h_coarse / h_fine`.
pub fn richardson(coarse: f64, h_coarse: f64, fine: f64, h_fine: f64) -> f64 {
    let r2 = (h_coarse / h_fine).powi(2);
    (r2 * fine - coarse) / (r2 - 1.0)
}

/// WKB tunnelling exponent kept beyond each classical turning point by
/// [`focus_grid`]; `e^{-2·14}` is far below the oracle tolerances.
pub const FOCUS_WKB_MARGIN: f64 = 14.0;

/// Shrinks `grid` around the classically allowed region of `energy`.
///
/// An end is moved inward only where the potential is finite at that end:
/// a singular end is a physical wall and stays. The new end sits where the
/// accumulated `∫ √(V - E) dq` from the outermost turning point reaches
/// `margin`. The point count is unchanged.
pub fn focus_grid<F>(potential: F, grid: &Grid, energy: f64, margin: f64) -> Result<Grid, EigenError>
where
    F: Fn(f64) -> f64,
{
    let h = grid.spacing();
    let nodes: Vec<f64> = grid.nodes().collect();
    let v: Vec<f64> = nodes.iter().map(|&q| potential(q)).collect();
    let allowed: Vec<usize> = (0..nodes.len()).filter(|&i| v[i] <= energy).collect();
    let (Some(&first), Some(&last)) = (allowed.first(), allowed.last()) else {
        return Ok(*grid);
    };

    let kappa = |i: usize| (v[i] - energy).max(0.0).sqrt();
    let mut q_max = grid.q_max;
    if potential(grid.q_max).is_finite() {
        let mut acc = 0.0;
        for (i, &q) in nodes.iter().enumerate().skip(last + 1) {
            acc += kappa(i) * h;
            if acc >= margin {
                q_max = q;
                break;
            }
        }
    }
    let mut q_min = grid.q_min;
    if potential(grid.q_min).is_finite() {
        let mut acc = 0.0;
        for i in (0..first).rev() {
            acc += kappa(i) * h;
            if acc >= margin {
                q_min = nodes[i];
                break;
            }
        }
    }
    grid.with_bounds(q_min, q_max)
}

/// One extrapolated level: raw values on the pair of grids and the estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtrapolatedLevel {
    pub coarse: f64,
    pub fine: f64,
    pub extrapolated: f64,
    pub grid: Grid,
}

/// How the oracle discretizes a potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stencil {
    Plain,
    Wall(WallSingularity),
}

impl Stencil {
    pub fn discretize<F>(&self, potential: F, grid: &Grid) -> Result<TridiagonalOperator, EigenError>
    where
        F: Fn(f64) -> f64,
    {
        match self {
            Stencil::Plain => discretize(potential, grid),
            Stencil::Wall(w) => discretize_with_wall(potential, grid, w),
        }
    }
}

/// Level `j` from a focused grid pair `(h, h/2)` with Richardson extrapolation.
///
/// `estimate` seeds the focusing and normally comes from a solve on `grid`.
pub fn extrapolated_level<F>(
    potential: F,
    grid: &Grid,
    stencil: Stencil,
    j: usize,
    estimate: f64,
) -> Result<ExtrapolatedLevel, EigenError>
where
    F: Fn(f64) -> f64,
{
    let focused = focus_grid(&potential, grid, estimate, FOCUS_WKB_MARGIN)?;
    let fine_grid = focused.refined();
    let coarse = stencil.discretize(&potential, &focused)?.eigenvalue(j)?;
    let fine = stencil.discretize(&potential, &fine_grid)?.eigenvalue(j)?;
    Ok(ExtrapolatedLevel {
        coarse,
        fine,
        extrapolated: richardson(coarse, focused.spacing(), fine, fine_grid.spacing()),
        grid: focused,
    })
}

/// Lowest `k` levels, each focused and extrapolated.
pub fn extrapolated_levels<F>(
    potential: F,
    grid: &Grid,
    stencil: Stencil,
    k: usize,
) -> Result<Vec<ExtrapolatedLevel>, EigenError>
where
    F: Fn(f64) -> f64,
{
    let op = stencil.discretize(&potential, grid)?;
    if k > op.dim() {
        return Err(EigenError::KOutOfRange { k, dim: op.dim() });
    }
    (0..k)
        .map(|j| {
            let estimate = op.eigenvalue(j)?;
            extrapolated_level(&potential, grid, stencil, j, estimate)
        })
        .collect()
}

/// Extrapolated levels lying strictly below `threshold`, at most `max_levels`.
///
/// The three-point stencil lowers every level, so a state sitting at the
/// continuum edge can dip below `threshold` on a finite grid; counting after
/// extrapolation removes it.
pub fn bound_levels<F>(
    potential: F,
    grid: &Grid,
    stencil: Stencil,
    threshold: f64,
    max_levels: usize,
) -> Result<Vec<ExtrapolatedLevel>, EigenError>
where
    F: Fn(f64) -> f64,
{
    let op = stencil.discretize(&potential, grid)?;
    let candidates = op.sturm_count(threshold).min(max_levels);
    let mut levels = Vec::with_capacity(candidates);
    for j in 0..candidates {
        let level = extrapolated_level(&potential, grid, stencil, j, op.eigenvalue(j)?)?;
        if level.extrapolated >= threshold {
            break;
        }
        levels.push(level);
    }
    Ok(levels)
}
