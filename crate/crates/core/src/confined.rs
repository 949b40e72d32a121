//! The oscillator confined to `[a, b]`: `−½f'' + ½x²f = Ef`, `f(a) = f(b) = 0`.
//!
//! The operator is discretised with second-order central differences on a
//! uniform grid of `N` cells. The resulting symmetric tridiagonal matrix
//! `T = (1/2h²)·tridiag(−1, 2 + 2h²V_i, −1)` is factored through the pivot
//! recurrence in the shifted variable `q_i = p_i − 1`, which keeps the `O(1)`
//! eigenvalue resolvable next to `O(1/h²)` matrix entries. Richardson
//! extrapolation over successive doublings of `N` gives both the energy and
//! its error estimate.
//!
//! Replacing `½x²` by its minimum or maximum over the interval gives the
//! particle-in-a-box bounds of [`box_bounds`].

use crate::error::{ensure_finite, Error, Result};
use crate::tridiag::{self, SturmCount, SymTridiagonal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Smallest accepted number of grid cells.
pub const MIN_GRID: usize = 64;
/// Default starting resolution for [`ground_energy`].
pub const DEFAULT_GRID: usize = 1024;
/// Refinement ceiling for [`ground_state`].
pub const MAX_GRID: usize = 1 << 22;
/// Smallest tolerance [`ground_energy`] accepts.
pub const MIN_TOL: f64 = 1e-10;

/// Closed interval `[a, b]` with finite `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct Interval {
    a: f64,
    b: f64,
}

#[derive(Deserialize)]
struct RawInterval {
    a: f64,
    b: f64,
}

impl TryFrom<RawInterval> for Interval {
    type Error = Error;
    fn try_from(raw: RawInterval) -> Result<Self> {
        Interval::new(raw.a, raw.b)
    }
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        ensure_finite([a, b], "interval endpoint")?;
        if !(a < b) {
            return Err(Error::Domain(format!("interval needs a < b, got [{a}, {b}]")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// `max{|a|, |b|}`
    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs())
    }

    /// `max ½x²` over the interval.
    pub fn potential_max(&self) -> f64 {
        0.5 * self.max_abs().powi(2)
    }

    /// `min ½x²` over the interval (zero when the interval straddles 0).
    pub fn potential_min(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            0.5 * self.a.abs().min(self.b.abs()).powi(2)
        }
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// How [`box_bounds_with`] treats intervals containing the origin.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroPolicy {
    /// Refuse intervals with `0 ∈ [a, b]`.
    #[default]
    Strict,
    /// Use the true minimum of the potential (0) for the lower bound.
    Relaxed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxBounds {
    pub n: usize,
    pub e_down: f64,
    pub e_up: f64,
}

/// Box-potential bounds with the origin excluded.
pub fn box_bounds(iv: Interval, n: usize) -> Result<BoxBounds> {
    box_bounds_with(iv, n, ZeroPolicy::Strict)
}

/// `E_down = (n+1)²π²/(2(b−a)²) + ½min{a², b²}` and the same with `max` for
/// `E_up`.
pub fn box_bounds_with(iv: Interval, n: usize, policy: ZeroPolicy) -> Result<BoxBounds> {
    if policy == ZeroPolicy::Strict && iv.contains_zero() {
        return Err(Error::Domain(format!(
            "box bounds assume 0 lies outside the interval, got {iv}; use relaxed mode"
        )));
    }
    let kinetic = box_kinetic(iv, n);
    Ok(BoxBounds {
        n,
        e_down: kinetic + iv.potential_min(),
        e_up: kinetic + iv.potential_max(),
    })
}

/// `(n+1)²π² / (2(b−a)²)`
pub fn box_kinetic(iv: Interval, n: usize) -> f64 {
    let m = (n + 1) as f64;
    m * m * PI * PI / (2.0 * iv.len() * iv.len())
}

/// `sqrt(2/(b−a)) sin(π(n+1)(x−a)/(b−a))`, exactly zero at both endpoints.
pub fn box_eigenfunction(iv: Interval, n: usize, xs: &[f64]) -> Result<Vec<f64>> {
    ensure_finite(xs.iter().copied(), "x")?;
    if let Some(x) = xs.iter().find(|&&x| !iv.contains(x)) {
        return Err(Error::Domain(format!("x = {x} lies outside {iv}")));
    }
    let amp = (2.0 / iv.len()).sqrt();
    let m = (n + 1) as f64;
    Ok(xs
        .iter()
        .map(|&x| {
            if x == iv.a || x == iv.b {
                0.0
            } else {
                amp * (PI * m * (x - iv.a) / iv.len()).sin()
            }
        })
        .collect())
}

/// Finite-difference Dirichlet operator `−½∂² + ½x²` on the interior nodes.
pub(crate) struct DirichletOperator {
    h: f64,
    potential: Vec<f64>,
}

impl DirichletOperator {
    pub(crate) fn new(iv: Interval, cells: usize) -> Self {
        let h = iv.len() / cells as f64;
        let potential = (1..cells)
            .map(|i| {
                let x = iv.a + i as f64 * h;
                0.5 * x * x
            })
            .collect();
        Self { h, potential }
    }

    pub(crate) fn tridiagonal(&self) -> SymTridiagonal {
        let inv = 1.0 / (self.h * self.h);
        let diag = self.potential.iter().map(|v| inv + v).collect();
        let off = vec![-0.5 * inv; self.potential.len().saturating_sub(1)];
        SymTridiagonal::new(diag, off).expect("finite grid operator")
    }
}

impl SturmCount for DirichletOperator {
    fn dim(&self) -> usize {
        self.potential.len()
    }

    fn count_below(&self, shift: f64) -> usize {
        // pivots p_i = 1 + q_i of tridiag(-1, 2 + g_i, -1), g_i = 2h²(V_i - shift)
        let two_h2 = 2.0 * self.h * self.h;
        let mut count = 0;
        let mut q_prev: Option<f64> = None;
        for &v in &self.potential {
            let g = two_h2 * (v - shift);
            let q = match q_prev {
                None => 1.0 + g,
                Some(qp) => {
                    let mut p = 1.0 + qp;
                    if p == 0.0 {
                        p = -f64::EPSILON;
                    }
                    g + qp / p
                }
            };
            if q <= -1.0 {
                count += 1;
            }
            q_prev = Some(q);
        }
        count
    }

    fn spectral_bounds(&self) -> (f64, f64) {
        let vmin = self.potential.iter().copied().fold(f64::INFINITY, f64::min);
        let vmax = self.potential.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let top = 2.0 / (self.h * self.h) + vmax;
        let pad = 4.0 * f64::EPSILON * top;
        (vmin - pad - f64::MIN_POSITIVE, top + pad)
    }
}

fn lowest_energies(iv: Interval, cells: usize, count: usize) -> Result<Vec<f64>> {
    tridiag::smallest_eigenvalues(&DirichletOperator::new(iv, cells), count)
}

fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// Dirichlet eigenvalues and grid eigenfunctions for one interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub interval: Interval,
    pub grid_size: usize,
    /// Richardson-extrapolated energies from `grid_size` and `2·grid_size`.
    pub energies: Vec<f64>,
    /// Energies of the `grid_size` discretisation itself.
    pub raw_energies: Vec<f64>,
    /// `|E_{2N} − E_N| / 3` per level.
    pub error_estimate: Vec<f64>,
    /// The `grid_size + 1` node positions, endpoints included.
    pub grid: Vec<f64>,
    /// Eigenfunctions on `grid`, trapezoid-normalised, zero at both ends.
    pub eigenvectors: Vec<Vec<f64>>,
}

impl SpectrumResult {
    /// `x,psi0,psi1,…` rows for plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x");
        for n in 0..self.eigenvectors.len() {
            let _ = write!(out, ",psi{n}");
        }
        out.push('\n');
        for (i, x) in self.grid.iter().enumerate() {
            let _ = write!(out, "{x}");
            for v in &self.eigenvectors {
                let _ = write!(out, ",{}", v[i]);
            }
            out.push('\n');
        }
        out
    }
}

/// The `k` lowest levels of the confined oscillator on `grid_size` cells.
pub fn solve_confined(iv: Interval, k: usize, grid_size: usize) -> Result<SpectrumResult> {
    if grid_size < MIN_GRID {
        return Err(Error::Precondition(format!(
            "grid_size {grid_size} below minimum {MIN_GRID}"
        )));
    }
    if k == 0 || k > grid_size / 8 {
        return Err(Error::Precondition(format!(
            "level count {k} must lie in 1..={}",
            grid_size / 8
        )));
    }
    let op = DirichletOperator::new(iv, grid_size);
    let matrix = op.tridiagonal();
    let (raw, vectors) = tridiag::smallest_eigenpairs(&matrix, &op, k)?;
    let fine = lowest_energies(iv, 2 * grid_size, k)?;

    let h = iv.len() / grid_size as f64;
    let norm = h.sqrt();
    let eigenvectors = vectors
        .into_iter()
        .map(|v| {
            let mut full = Vec::with_capacity(grid_size + 1);
            full.push(0.0);
            full.extend(v.into_iter().map(|x| x / norm));
            full.push(0.0);
            full
        })
        .collect();
    let grid = (0..=grid_size)
        .map(|i| if i == grid_size { iv.b } else { iv.a + i as f64 * h })
        .collect();

    let energies: Vec<f64> = raw.iter().zip(&fine).map(|(&c, &f)| richardson(c, f)).collect();
    for w in energies.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::Numeric(format!(
                "levels not strictly increasing on {iv}: {} then {}",
                w[0], w[1]
            )));
        }
    }
    let error_estimate = raw.iter().zip(&fine).map(|(c, f)| (f - c).abs() / 3.0).collect();
    Ok(SpectrumResult {
        interval: iv,
        grid_size,
        energies,
        raw_energies: raw,
        error_estimate,
        grid,
        eigenvectors,
    })
}

/// Converged ground-state energy with its provenance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundState {
    pub interval: Interval,
    pub energy: f64,
    pub error_estimate: f64,
    /// Finest grid used.
    pub grid_size: usize,
    /// Box bounds, relaxed when the interval contains 0.
    pub bounds: BoxBounds,
}

/// `E⁽⁰⁾_[a,b]` to relative tolerance `tol` (absolute below energy 1).
pub fn ground_energy(iv: Interval, tol: f64) -> Result<f64> {
    ground_state(iv, tol, DEFAULT_GRID).map(|g| g.energy)
}

/// Refines `N → 2N` until two consecutive Richardson values agree to
/// `tol·max(1, E)`, then checks the result against the box bounds.
pub fn ground_state(iv: Interval, tol: f64, start_grid: usize) -> Result<GroundState> {
    if !(tol >= MIN_TOL) || !tol.is_finite() {
        return Err(Error::Precondition(format!("tolerance {tol} below {MIN_TOL}")));
    }
    if start_grid < MIN_GRID {
        return Err(Error::Precondition(format!(
            "grid_size {start_grid} below minimum {MIN_GRID}"
        )));
    }
    let ground = |cells: usize| -> Result<f64> {
        tridiag::kth_eigenvalue(&DirichletOperator::new(iv, cells), 0)
    };
    let mut cells = start_grid;
    let mut e1 = ground(cells)?;
    let mut e2 = ground(2 * cells)?;
    let mut e4 = ground(4 * cells)?;
    let (energy, error_estimate) = loop {
        let r1 = richardson(e1, e2);
        let r2 = richardson(e2, e4);
        let err = (r2 - r1).abs();
        if err <= tol * r2.abs().max(1.0) {
            break (r2, err);
        }
        if 8 * cells > MAX_GRID {
            return Err(Error::Numeric(format!(
                "ground energy on {iv} not converged at {} cells: \
                 estimates {r1} and {r2}, difference {err:e}, tolerance {tol:e}",
                4 * cells
            )));
        }
        cells *= 2;
        e1 = e2;
        e2 = e4;
        e4 = ground(4 * cells)?;
    };
    let bounds = box_bounds_with(iv, 0, ZeroPolicy::Relaxed)?;
    if !(bounds.e_down < energy && energy < bounds.e_up) {
        return Err(Error::Consistency(format!(
            "ground energy {energy} on {iv} escapes box bounds ({}, {})",
            bounds.e_down, bounds.e_up
        )));
    }
    Ok(GroundState {
        interval: iv,
        energy,
        error_estimate,
        grid_size: 4 * cells,
        bounds,
    })
}
