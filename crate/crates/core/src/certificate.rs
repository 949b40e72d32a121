//! The interval-decomposition inequality chain on concrete witnesses.
//!
//! For `f` vanishing on Λ and `f̂` vanishing on M, splitting both integrals at
//! the points of the sets gives
//!
//! ```text
//! ‖f‖²_𝓗 = Σ_j ∫_gap f̄Hf + Σ_j ∫_gap f̂̄Ĥf̂
//!        ≥ Σ_j E⁽⁰⁾_j ∫_gap |f|² + …                       (Rayleigh)
//!        ≥ Σ_j E⁽⁰⁾_j / max{λ_j², λ_{j+1}²} ∫_gap x²|f|² + …
//!        ≥ l² (Σ ∫x²|f|² + Σ ∫k²|f̂|²) = l² ‖f‖²_𝓗
//! ```
//!
//! with `l` the infimum of `sqrt(E⁽⁰⁾)/max|endpoint|` over all gaps of both
//! sets. [`certify`] evaluates every term on sampled witnesses and records
//! which links hold. When `l > 1` no nonzero witness can satisfy every link,
//! and the certificate names the link the witness breaks.

use crate::confined::{box_eigenfunction, DirichletOperator, Interval};
use crate::criticality::{gse_report, Convention, GseReport, PointSet};
use crate::error::{Error, Result};
use crate::tridiag;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Smallest number of samples (endpoints included) on one gap.
pub const MIN_POINTS_PER_GAP: usize = 129;
pub const MAX_FOURIER_TEST_POINTS: usize = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeMode {
    /// Forward differences between neighbouring samples.
    #[default]
    FiniteDifference,
    /// Exact derivative of the sine-series interpolant on each gap.
    Spectral,
}

/// Grid density for sampled witnesses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingOptions {
    pub points_per_unit: f64,
    pub min_points: usize,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        Self {
            points_per_unit: 4096.0,
            min_points: 2049,
        }
    }
}

impl SamplingOptions {
    pub fn points_for(&self, iv: Interval) -> usize {
        let scaled = (iv.len() * self.points_per_unit).ceil() as usize + 1;
        scaled.max(self.min_points).max(MIN_POINTS_PER_GAP)
    }
}

/// Samples of a function on one gap `[λ_j, λ_{j+1}]`, uniform grid, both
/// endpoint values exactly zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub j: i64,
    pub interval: Interval,
    pub samples: Vec<Complex64>,
}

impl Piece {
    fn cells(&self) -> usize {
        self.samples.len() - 1
    }

    fn step(&self) -> f64 {
        self.interval.len() / self.cells() as f64
    }

    fn node(&self, i: usize) -> f64 {
        if i == self.cells() {
            self.interval.b()
        } else {
            self.interval.a() + i as f64 * self.step()
        }
    }

    fn is_zero(&self) -> bool {
        self.samples.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// `∫|f|²` (trapezoid; the pinned endpoints drop out).
    pub fn l2_mass(&self) -> f64 {
        self.step() * self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// `∫x²|f|²`
    pub fn x_moment(&self) -> f64 {
        self.step()
            * self
                .samples
                .iter()
                .enumerate()
                .map(|(i, c)| self.node(i).powi(2) * c.norm_sqr())
                .sum::<f64>()
    }

    /// `∫|f'|²`
    pub fn kinetic(&self, mode: DerivativeMode) -> f64 {
        kinetic(&self.samples, self.interval.len(), mode)
    }

    /// `∫ f̄ H f = ½∫|f'|² + ½∫x²|f|²`
    pub fn energy_integral(&self, mode: DerivativeMode) -> f64 {
        0.5 * self.kinetic(mode) + 0.5 * self.x_moment()
    }

    fn eval(&self, x: f64) -> Complex64 {
        if !self.interval.contains(x) {
            return Complex64::new(0.0, 0.0);
        }
        let t = (x - self.interval.a()) / self.step();
        let i = (t.floor() as usize).min(self.cells() - 1);
        let frac = t - i as f64;
        self.samples[i] * (1.0 - frac) + self.samples[i + 1] * frac
    }

    fn fourier_at(&self, k: f64) -> Complex64 {
        let h = self.step();
        self.samples
            .iter()
            .enumerate()
            .map(|(i, &u)| u * Complex64::from_polar(h, -k * self.node(i)))
            .sum()
    }
}

fn kinetic(samples: &[Complex64], len: f64, mode: DerivativeMode) -> f64 {
    let n = samples.len() - 1;
    let h = len / n as f64;
    match mode {
        DerivativeMode::FiniteDifference => {
            samples.windows(2).map(|w| (w[1] - w[0]).norm_sqr()).sum::<f64>() / h
        }
        DerivativeMode::Spectral => {
            // odd extension of length 2n: FFT_k = −2i Σ u_m sin(π k m / n)
            let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
            for m in 1..n {
                buf[m] = samples[m];
                buf[2 * n - m] = -samples[m];
            }
            FftPlanner::new().plan_fft_forward(2 * n).process(&mut buf);
            (1..n)
                .map(|k| {
                    // sine coefficient s_k = i FFT_k / n
                    let s = Complex64::new(0.0, 1.0) * buf[k] / n as f64;
                    let wave = k as f64 * PI / len;
                    s.norm_sqr() * wave * wave
                })
                .sum::<f64>()
                * len
                / 2.0
        }
    }
}

/// A function known through its samples on a collection of gaps, zero
/// elsewhere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseFunction {
    pieces: Vec<Piece>,
    pub derivative_mode: DerivativeMode,
}

impl PiecewiseFunction {
    pub fn new(pieces: Vec<Piece>, derivative_mode: DerivativeMode) -> Result<Self> {
        for p in &pieces {
            if p.samples.len() < MIN_POINTS_PER_GAP {
                return Err(Error::Precondition(format!(
                    "gap j = {} has {} samples, need at least {MIN_POINTS_PER_GAP}",
                    p.j,
                    p.samples.len()
                )));
            }
            crate::error::ensure_finite(p.samples.iter().flat_map(|c| [c.re, c.im]), "sample")?;
            let (first, last) = (p.samples[0], p.samples[p.samples.len() - 1]);
            if first.norm() != 0.0 || last.norm() != 0.0 {
                return Err(Error::Precondition(format!(
                    "samples on gap j = {} {} do not vanish at the endpoints ({first}, {last})",
                    p.j, p.interval
                )));
            }
        }
        for w in pieces.windows(2) {
            if !(w[0].j < w[1].j && w[0].interval.b() <= w[1].interval.a()) {
                return Err(Error::Domain(format!(
                    "pieces must be ordered and disjoint: j = {} {} then j = {} {}",
                    w[0].j, w[0].interval, w[1].j, w[1].interval
                )));
            }
        }
        Ok(Self {
            pieces,
            derivative_mode,
        })
    }

    /// Sample `f` on every gap of `set`. Fails if `|f(λ)| > tol` at any point
    /// of the set; endpoint samples are then pinned to zero.
    pub fn sample(
        set: &PointSet,
        f: impl Fn(f64) -> Complex64 + Sync,
        sampling: SamplingOptions,
        tol: f64,
        mode: DerivativeMode,
    ) -> Result<Self> {
        if let Some((i, v)) = set
            .points
            .iter()
            .map(|&x| f(x))
            .enumerate()
            .find(|(_, v)| !(v.norm() <= tol))
        {
            return Err(Error::Precondition(format!(
                "function does not vanish at point {} = {} (|f| = {:e}, tolerance {tol:e})",
                set.first_index + i as i64,
                set.points[i],
                v.norm()
            )));
        }
        let pieces = set
            .gaps()
            .map(|(j, iv)| {
                let n = sampling.points_for(iv) - 1;
                let h = iv.len() / n as f64;
                let samples = (0..=n)
                    .map(|i| {
                        if i == 0 || i == n {
                            Complex64::new(0.0, 0.0)
                        } else {
                            f(iv.a() + i as f64 * h)
                        }
                    })
                    .collect();
                Piece {
                    j,
                    interval: iv,
                    samples,
                }
            })
            .collect();
        Self::new(pieces, mode)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.pieces.iter().map(Piece::l2_mass).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(Piece::is_zero)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    j: p.j,
                    interval: p.interval,
                    samples: p.samples.iter().map(|s| s * c).collect(),
                })
                .collect(),
            derivative_mode: self.derivative_mode,
        }
    }

    /// Piecewise-linear interpolation of the samples.
    pub fn eval(&self, x: f64) -> Complex64 {
        self.pieces
            .iter()
            .find(|p| p.interval.contains(x))
            .map(|p| p.eval(x))
            .unwrap_or_default()
    }

    /// `(1/sqrt(2π)) ∫ f(x) e^{−ikx} dx` by the trapezoid rule.
    pub fn fourier_at(&self, k: f64) -> Complex64 {
        let sum: Complex64 = self
            .pieces
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| p.fourier_at(k))
            .sum();
        sum / (2.0 * PI).sqrt()
    }
}

/// `Σ_j w_j ψ⁽⁰⁾_j`: one normalised box ground state per gap of `lam`,
/// scaled by its weight.
pub fn build_vanishing_function(lam: &PointSet, weights: &[Complex64]) -> Result<PiecewiseFunction> {
    build_vanishing_function_with(lam, weights, SamplingOptions::default(), DerivativeMode::default())
}

pub fn build_vanishing_function_with(
    lam: &PointSet,
    weights: &[Complex64],
    sampling: SamplingOptions,
    mode: DerivativeMode,
) -> Result<PiecewiseFunction> {
    if weights.len() != lam.gap_count() {
        return Err(Error::Precondition(format!(
            "{} weights for {} gaps",
            weights.len(),
            lam.gap_count()
        )));
    }
    crate::error::ensure_finite(weights.iter().flat_map(|c| [c.re, c.im]), "weight")?;
    if weights.iter().all(|w| w.norm() == 0.0) {
        return Err(Error::Domain("all weights are zero".into()));
    }
    let pieces = lam
        .gaps()
        .zip(weights)
        .map(|((j, iv), &w)| {
            let n = sampling.points_for(iv) - 1;
            let h = iv.len() / n as f64;
            let xs: Vec<f64> = (0..=n).map(|i| if i == n { iv.b() } else { iv.a() + i as f64 * h }).collect();
            let values = box_eigenfunction(iv, 0, &xs)?;
            Ok(Piece {
                j,
                interval: iv,
                samples: values.into_iter().map(|v| w * v).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewiseFunction::new(pieces, mode)
}

/// `(½∫|f'|² + ½∫x²|f|²) / ∫|f|²` for samples on a uniform grid over `iv`
/// (endpoints included).
pub fn rayleigh_quotient<T: Copy + Into<Complex64>>(iv: Interval, samples: &[T]) -> Result<f64> {
    rayleigh_quotient_with(iv, samples, DerivativeMode::FiniteDifference)
}

pub fn rayleigh_quotient_with<T: Copy + Into<Complex64>>(
    iv: Interval,
    samples: &[T],
    mode: DerivativeMode,
) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::Precondition(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    let samples: Vec<Complex64> = samples.iter().map(|&s| s.into()).collect();
    crate::error::ensure_finite(samples.iter().flat_map(|c| [c.re, c.im]), "sample")?;
    let peak = samples.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
    if peak == 0.0 {
        return Err(Error::Domain("Rayleigh quotient of the zero function".into()));
    }
    let (first, last) = (samples[0].norm(), samples[samples.len() - 1].norm());
    if first > 1e-12 * peak || last > 1e-12 * peak {
        return Err(Error::Precondition(format!(
            "samples must vanish at the endpoints of {iv} (got |f(a)| = {first:e}, |f(b)| = {last:e})"
        )));
    }
    let mut pinned = samples;
    let n = pinned.len() - 1;
    pinned[0] = Complex64::new(0.0, 0.0);
    pinned[n] = Complex64::new(0.0, 0.0);
    let piece = Piece {
        j: 0,
        interval: iv,
        samples: pinned,
    };
    Ok(piece.energy_integral(mode) / piece.l2_mass())
}

/// How `certify` treats disagreement between `f_hat` and the transform of `f`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FourierCheck {
    /// Reject inconsistent pairs.
    #[default]
    Enforce,
    /// Record the discrepancy and continue; used to exhibit which link of
    /// the chain a witness pair breaks.
    Report,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifyOptions {
    /// Ground-energy tolerance.
    pub tol: f64,
    pub fourier_check: FourierCheck,
    /// Allowed deviation between `f_hat` and the transform of `f`, relative
    /// to `max(1, sup|f_hat|)`.
    pub fourier_tol: f64,
    pub fourier_test_points: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            fourier_check: FourierCheck::Enforce,
            fourier_tol: 1e-6,
            fourier_test_points: MAX_FOURIER_TEST_POINTS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lambda,
    Mu,
}

/// Every chain term on one gap carrying witness mass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideRow {
    pub j: i64,
    pub a: f64,
    pub b: f64,
    pub ground_energy: f64,
    pub ground_energy_error: f64,
    /// `∫ f̄ H f` over the gap.
    pub energy_integral: f64,
    pub l2_mass: f64,
    /// `E⁽⁰⁾ ∫|f|²`
    pub rayleigh_bound: f64,
    pub x_moment: f64,
    /// `E⁽⁰⁾ / max{a², b²} · ∫x²|f|²`
    pub weighted_bound: f64,
    pub ratio: f64,
    /// Allowance for the grid underestimating energies on this gap.
    pub slack: f64,
    pub contains_zero: bool,
    pub rayleigh_holds: bool,
    pub weighted_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub step: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// `l > 1`: the chain forces `‖f‖_𝓗 = 0`.
    Contradiction,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `Σ ∫ f̄Hf + Σ ∫ f̂̄Ĥf̂` over the sampled gaps.
    pub h_norm_sq: f64,
    /// `Σ ∫x²|f|² + Σ ∫k²|f̂|²`, the defining form of the norm.
    pub moment_norm_sq: f64,
    pub side_lambda: Vec<SideRow>,
    pub side_mu: Vec<SideRow>,
    pub l_min: f64,
    pub l_min_lambda: f64,
    pub l_min_mu: Option<f64>,
    /// `Σ E⁽⁰⁾ ∫|f|²` over both sides.
    pub chain_lhs: f64,
    /// `Σ E⁽⁰⁾/max² ∫x²|f|²` over both sides.
    pub weighted_sum: f64,
    pub checks: Vec<ChainCheck>,
    /// The three inequalities of the chain hold on every gap.
    pub chain_holds: bool,
    /// `h_norm_sq − moment_norm_sq`; zero for a genuine Fourier pair.
    pub closing_identity_gap: f64,
    pub broken_links: Vec<String>,
    pub fourier_discrepancy: Option<f64>,
    /// `|‖f‖² − ‖f̂‖²|`, L² mass of the pair not seen inside the windows.
    pub leaked_mass: f64,
    pub residual: f64,
    pub zero_gaps_lambda: Vec<i64>,
    pub zero_gaps_mu: Vec<i64>,
    pub verdict: Verdict,
    pub summary: String,
}

struct SideTotals {
    rows: Vec<SideRow>,
    energy: f64,
    moment: f64,
    rayleigh: f64,
    weighted: f64,
    slack: f64,
    zero_gaps: Vec<i64>,
}

fn side_terms(set: &PointSet, f: &PiecewiseFunction, gse: &GseReport, side: Side) -> Result<SideTotals> {
    let gaps: Vec<(i64, Interval)> = set.gaps().collect();
    for p in f.pieces() {
        let offset = p.j - set.first_index;
        let matches = usize::try_from(offset)
            .ok()
            .and_then(|i| gaps.get(i))
            .is_some_and(|(_, iv)| same_interval(*iv, p.interval));
        if !matches {
            return Err(Error::Precondition(format!(
                "{side:?} witness piece j = {} {} is not a gap of the point set",
                p.j, p.interval
            )));
        }
    }
    let mode = f.derivative_mode;
    let rows = f
        .pieces()
        .par_iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            let g = gse.ratio(p.j).expect("report covers every gap");
            let mass = p.l2_mass();
            let x_moment = p.x_moment();
            let energy_integral = p.energy_integral(mode);
            let rayleigh_bound = g.energy * mass;
            let max_sq = p.interval.max_abs().powi(2);
            let weighted_bound = g.energy / max_sq * x_moment;
            let grid_ground = tridiag::kth_eigenvalue(&DirichletOperator::new(p.interval, p.cells()), 0)?;
            let slack = ((g.energy - grid_ground).max(0.0) + g.error_estimate) * mass;
            let rounding = 1e-12 * rayleigh_bound.abs();
            Ok(SideRow {
                j: p.j,
                a: p.interval.a(),
                b: p.interval.b(),
                ground_energy: g.energy,
                ground_energy_error: g.error_estimate,
                energy_integral,
                l2_mass: mass,
                rayleigh_bound,
                x_moment,
                weighted_bound,
                ratio: g.ratio,
                slack,
                contains_zero: g.contains_zero,
                rayleigh_holds: energy_integral >= rayleigh_bound - slack - rounding,
                weighted_holds: rayleigh_bound >= weighted_bound - rounding,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sum = |f: fn(&SideRow) -> f64| rows.iter().map(f).sum::<f64>();
    Ok(SideTotals {
        energy: sum(|r| r.energy_integral),
        moment: sum(|r| r.x_moment),
        rayleigh: sum(|r| r.rayleigh_bound),
        weighted: sum(|r| r.weighted_bound),
        slack: sum(|r| r.slack),
        zero_gaps: rows.iter().filter(|r| r.contains_zero).map(|r| r.j).collect(),
        rows,
    })
}

fn same_interval(x: Interval, y: Interval) -> bool {
    let scale = x.max_abs().max(1.0);
    (x.a() - y.a()).abs() <= 1e-12 * scale && (x.b() - y.b()).abs() <= 1e-12 * scale
}

/// Largest deviation between `f_hat` and the transform of `f` on up to
/// `count` points spread evenly over the window of `mu`, relative to
/// `max(1, sup|f_hat|)`.
fn fourier_discrepancy(f: &PiecewiseFunction, f_hat: &PiecewiseFunction, mu: &PointSet, count: usize) -> f64 {
    let count = count.clamp(2, MAX_FOURIER_TEST_POINTS);
    let (lo, hi) = (mu.points[0], mu.points[mu.points.len() - 1]);
    let ks: Vec<f64> = (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect();
    let scale = f_hat
        .pieces()
        .iter()
        .flat_map(|p| p.samples.iter())
        .fold(1.0_f64, |m, c| m.max(c.norm()));
    let worst = ks
        .par_iter()
        .map(|&k| (f.fourier_at(k) - f_hat.eval(k)).norm())
        .reduce(|| 0.0, f64::max);
    worst / scale
}

/// Evaluate the inequality chain for `f` (vanishing on `lam`) and `f_hat`
/// (vanishing on `mu`). With `mu = None` only the Λ side is evaluated.
pub fn certify(
    lam: &PointSet,
    mu: Option<&PointSet>,
    f: &PiecewiseFunction,
    f_hat: Option<&PiecewiseFunction>,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    for s in std::iter::once(lam).chain(mu) {
        if s.convention != Convention::Angular {
            return Err(Error::Precondition(
                "certificates are computed in the angular convention; convert the point sets first".into(),
            ));
        }
    }
    let (mu, f_hat) = match (mu, f_hat) {
        (Some(m), Some(g)) => (Some(m), Some(g)),
        (None, None) => (None, None),
        _ => {
            return Err(Error::Precondition(
                "mu and f_hat must be given together".into(),
            ))
        }
    };

    let fourier_discrepancy = match (mu, f_hat) {
        (Some(m), Some(g)) => {
            let d = fourier_discrepancy(f, g, m, opts.fourier_test_points);
            if opts.fourier_check == FourierCheck::Enforce && !(d <= opts.fourier_tol) {
                return Err(Error::Precondition(format!(
                    "f_hat deviates from the Fourier transform of f by {d:e} \
                     (tolerance {:e})",
                    opts.fourier_tol
                )));
            }
            Some(d)
        }
        _ => None,
    };

    let gse_lam = gse_report(lam, opts.tol)?;
    let lam_side = side_terms(lam, f, &gse_lam, Side::Lambda)?;
    let (gse_mu, mu_side) = match (mu, f_hat) {
        (Some(m), Some(g)) => {
            let report = gse_report(m, opts.tol)?;
            let totals = side_terms(m, g, &report, Side::Mu)?;
            (Some(report), Some(totals))
        }
        _ => (None, None),
    };

    let l_min_lambda = gse_lam.inf_ratio;
    let l_min_mu = gse_mu.as_ref().map(|r| r.inf_ratio);
    let l_min = l_min_mu.map_or(l_min_lambda, |m| m.min(l_min_lambda));

    let both = |get: fn(&SideTotals) -> f64| get(&lam_side) + mu_side.as_ref().map_or(0.0, get);
    let h_norm_sq = both(|s| s.energy);
    let moment_norm_sq = both(|s| s.moment);
    let chain_lhs = both(|s| s.rayleigh);
    let weighted_sum = both(|s| s.weighted);

    let leaked_mass = f_hat.map_or(0.0, |g| (f.l2_norm_sq() - g.l2_norm_sq()).abs());
    let mut residual = both(|s| s.slack);
    if opts.fourier_check == FourierCheck::Enforce {
        residual += leaked_mass;
    }

    let rounding = |a: f64, b: f64| 1e-12 * a.abs().max(b.abs());
    let check = |step: &str, lhs: f64, rhs: f64, slack: f64| ChainCheck {
        step: step.to_string(),
        lhs,
        rhs,
        slack,
        holds: lhs >= rhs - slack - rounding(lhs, rhs),
    };
    let l_sq = l_min * l_min;
    let identity_gap = h_norm_sq - moment_norm_sq;
    let identity_tol = residual + opts.fourier_tol * h_norm_sq.abs();
    let checks = vec![
        check("energy >= rayleigh", h_norm_sq, chain_lhs, residual),
        check("rayleigh >= weighted", chain_lhs, weighted_sum, 0.0),
        check("weighted >= l^2 * moments", weighted_sum, l_sq * moment_norm_sq, 0.0),
        ChainCheck {
            step: "moments == energy".to_string(),
            lhs: moment_norm_sq,
            rhs: h_norm_sq,
            slack: identity_tol,
            holds: identity_gap.abs() <= identity_tol + rounding(h_norm_sq, moment_norm_sq),
        },
        check("norm >= l^2 * norm", h_norm_sq, l_sq * h_norm_sq, residual),
    ];

    let rows_hold = lam_side
        .rows
        .iter()
        .chain(mu_side.iter().flat_map(|s| s.rows.iter()))
        .all(|r| r.rayleigh_holds && r.weighted_holds);
    let chain_holds = rows_hold && checks[..3].iter().all(|c| c.holds);
    let broken_links: Vec<String> = checks.iter().filter(|c| !c.holds).map(|c| c.step.clone()).collect();

    let witness_zero = f.is_zero() && f_hat.is_none_or(PiecewiseFunction::is_zero);
    let verdict = if !witness_zero && l_sq * h_norm_sq > h_norm_sq {
        Verdict::Contradiction
    } else {
        Verdict::Inconclusive
    };

    let mut summary = String::new();
    if witness_zero {
        summary.push_str("zero witness: nothing to certify");
    } else {
        let _ = write!(summary, "l_min = {l_min}");
        match verdict {
            Verdict::Contradiction => {
                let _ = write!(
                    summary,
                    " > 1: the chain admits only f = 0; this witness breaks [{}]",
                    broken_links.join(", ")
                );
            }
            Verdict::Inconclusive => summary.push_str(" <= 1: no contradiction available"),
        }
    }

    Ok(Certificate {
        h_norm_sq,
        moment_norm_sq,
        side_lambda: lam_side.rows,
        side_mu: mu_side.as_ref().map(|s| s.rows.clone()).unwrap_or_default(),
        l_min,
        l_min_lambda,
        l_min_mu,
        chain_lhs,
        weighted_sum,
        checks,
        chain_holds,
        closing_identity_gap: identity_gap,
        broken_links,
        fourier_discrepancy,
        leaked_mass,
        residual,
        zero_gaps_lambda: lam_side.zero_gaps,
        zero_gaps_mu: mu_side.map(|s| s.zero_gaps).unwrap_or_default(),
        verdict,
        summary,
    })
}

impl Certificate {
    /// One row per gap per side:
    /// `side,j,a,b,ground_energy,energy_integral,rayleigh_bound,weighted_bound,ratio,slack`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "side,j,a,b,ground_energy,energy_integral,l2_mass,rayleigh_bound,x_moment,weighted_bound,ratio,slack\n",
        );
        for (side, rows) in [("lambda", &self.side_lambda), ("mu", &self.side_mu)] {
            for r in rows {
                let _ = writeln!(
                    out,
                    "{side},{},{},{},{},{},{},{},{},{},{},{}",
                    r.j,
                    r.a,
                    r.b,
                    r.ground_energy,
                    r.energy_integral,
                    r.l2_mass,
                    r.rayleigh_bound,
                    r.x_moment,
                    r.weighted_bound,
                    r.ratio,
                    r.slack
                );
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confined::{box_bounds, ground_energy, solve_confined};
    use approx::assert_abs_diff_eq;

    fn unit_gap() -> PointSet {
        PointSet::angular(vec![1.0, 2.0]).unwrap()
    }

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn rayleigh_of_box_sine() {
        let iv = Interval::new(1.0, 2.0).unwrap();
        let n = 8192;
        let xs: Vec<f64> = (0..=n).map(|i| 1.0 + i as f64 / n as f64).collect();
        let psi = box_eigenfunction(iv, 0, &xs).unwrap();
        let exact = PI * PI / 2.0 + 0.5 * (7.0 / 3.0 - 1.0 / (2.0 * PI * PI));
        let fd = rayleigh_quotient(iv, &psi).unwrap();
        assert!((fd - exact).abs() < 1e-6, "{fd} vs {exact}");
        let spectral = rayleigh_quotient_with(iv, &psi, DerivativeMode::Spectral).unwrap();
        assert!((spectral - exact).abs() < 1e-8, "{spectral} vs {exact}");
        let b = box_bounds(iv, 0).unwrap();
        assert!(b.e_down < fd && fd < b.e_up);
    }

    #[test]
    fn rayleigh_of_grid_eigenvector_is_its_eigenvalue() {
        let iv = Interval::new(1.0, 2.0).unwrap();
        let r = solve_confined(iv, 1, 512).unwrap();
        let q = rayleigh_quotient(iv, &r.eigenvectors[0]).unwrap();
        assert_abs_diff_eq!(q, r.raw_energies[0], epsilon = 1e-9);
        // and the continuum value up to the O(h²) grid error
        assert!((q - r.energies[0]).abs() < 1e-4);
    }

    #[test]
    fn rayleigh_errors() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        assert!(matches!(rayleigh_quotient(iv, &[0.0, 0.0, 0.0, 0.0]), Err(Error::Domain(_))));
        assert!(matches!(
            rayleigh_quotient(iv, &[1.0, 2.0, 1.0, 0.0]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn single_gap_witness() {
        let f = build_vanishing_function(&unit_gap(), &[one()]).unwrap();
        assert_abs_diff_eq!(f.l2_norm_sq(), 1.0, epsilon = 1e-12);
        assert_eq!(f.pieces().len(), 1);
    }

    #[test]
    fn two_gap_witness() {
        let lam = PointSet::angular(vec![1.0, 2.0, 3.0]).unwrap();
        let f = build_vanishing_function(&lam, &[one(), Complex64::new(0.0, 0.0)]).unwrap();
        assert!(f.pieces()[1].is_zero());
        assert_eq!(f.eval(2.5), Complex64::new(0.0, 0.0));
        let g = build_vanishing_function(&lam, &[one(), one()]).unwrap();
        assert_eq!(g.eval(2.0), Complex64::new(0.0, 0.0));
        // continuity across the shared endpoint
        assert!(g.eval(2.0 - 1e-9).norm() < 1e-6 && g.eval(2.0 + 1e-9).norm() < 1e-6);
        assert!(matches!(
            build_vanishing_function(&lam, &[Complex64::new(0.0, 0.0); 2]),
            Err(Error::Domain(_))
        ));
        assert!(build_vanishing_function(&lam, &[one()]).is_err());
    }

    #[test]
    fn sampling_enforces_vanishing() {
        let lam = unit_gap();
        let err = PiecewiseFunction::sample(
            &lam,
            |x| Complex64::new(x, 0.0),
            SamplingOptions::default(),
            1e-9,
            DerivativeMode::FiniteDifference,
        );
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn single_gap_chain() {
        let lam = unit_gap();
        let f = build_vanishing_function(&lam, &[one()]).unwrap();
        let c = certify(&lam, None, &f, None, &CertifyOptions::default()).unwrap();
        let row = &c.side_lambda[0];
        let e0 = ground_energy(Interval::new(1.0, 2.0).unwrap(), 1e-8).unwrap();
        assert_abs_diff_eq!(row.ground_energy, e0, epsilon = 1e-9);
        assert!(row.energy_integral >= row.rayleigh_bound);
        assert!((row.energy_integral - 6.07614).abs() < 1e-4);
        assert!(e0 > 5.43480);
        assert!(c.chain_holds);
        assert_eq!(c.verdict, Verdict::Contradiction);
        assert!(c.l_min > 1.0);
    }

    #[test]
    fn zero_witness_is_inconclusive() {
        let lam = unit_gap();
        let f = build_vanishing_function(&lam, &[one()]).unwrap().scale(Complex64::new(0.0, 0.0));
        let c = certify(&lam, None, &f, None, &CertifyOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert_eq!(c.h_norm_sq, 0.0);
    }

    #[test]
    fn mismatched_pieces_rejected() {
        let f = build_vanishing_function(&unit_gap(), &[one()]).unwrap();
        let other = PointSet::angular(vec![1.0, 2.5]).unwrap();
        assert!(matches!(
            certify(&other, None, &f, None, &CertifyOptions::default()),
            Err(Error::Precondition(_))
        ));
        let lam = unit_gap();
        assert!(certify(&lam, Some(&lam), &f, None, &CertifyOptions::default()).is_err());
    }

    #[test]
    fn csv_has_row_per_gap() {
        let lam = PointSet::angular(vec![1.0, 1.5, 2.0]).unwrap();
        let f = build_vanishing_function(&lam, &[one(), one()]).unwrap();
        let c = certify(&lam, None, &f, None, &CertifyOptions::default()).unwrap();
        let csv = c.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(1).unwrap().starts_with("lambda,0,1,1.5,"));
    }
}
