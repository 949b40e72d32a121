//! Hermite functions and expansions in the oscillator eigenbasis.
//!
//! `φ_n` is evaluated by the normalised three-term recurrence
//! `φ_{n+1} = sqrt(2/(n+1)) x φ_n − sqrt(n/(n+1)) φ_{n−1}` starting from
//! `φ_0 = π^{-1/4} e^{-x²/2}`. The Gaussian factor is carried as a separate
//! logarithmic scale so that large `|x|` neither underflows the seed nor
//! overflows the polynomial part.

use crate::error::{ensure_finite, Error, Result};
use crate::tridiag::{smallest_eigenvalues, SymTridiagonal};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Default ceiling on the Hermite index and expansion degree.
pub const DEFAULT_MAX_DEGREE: usize = 512;
/// Ceiling on the number of Gauss–Hermite nodes.
pub const MAX_QUADRATURE_NODES: usize = 1024;

const RESCALE: f64 = 1e150;

/// Runs the scaled recurrence up to degree `nmax`, calling `sink(n, φ_n(x))`
/// for every degree.
fn hermite_recurrence(nmax: usize, x: f64, mut sink: impl FnMut(usize, f64)) {
    let ln_rescale = RESCALE.ln();
    let mut log_scale = -0.5 * x * x - 0.25 * std::f64::consts::PI.ln();
    let mut prev = 0.0;
    let mut cur = 1.0;
    sink(0, log_scale.exp());
    for k in 0..nmax {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += ln_rescale;
        }
        sink(k + 1, cur * log_scale.exp());
    }
}

/// `φ_n(x)` for a single point.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let mut out = 0.0;
    hermite_recurrence(n, x, |k, v| {
        if k == n {
            out = v;
        }
    });
    out
}

/// `[φ_0(x), …, φ_nmax(x)]`.
pub fn hermite_table(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    hermite_recurrence(nmax, x, |k, v| out[k] = v);
    out
}

/// Evaluate `φ_n` at every point of `xs`, with the default degree ceiling.
pub fn eval_hermite(n: usize, xs: &[f64]) -> Result<Vec<f64>> {
    eval_hermite_capped(n, xs, DEFAULT_MAX_DEGREE)
}

pub fn eval_hermite_capped(n: usize, xs: &[f64], max_degree: usize) -> Result<Vec<f64>> {
    if n > max_degree {
        return Err(Error::Capacity {
            what: "hermite degree",
            value: n,
            limit: max_degree,
        });
    }
    ensure_finite(xs.iter().copied(), "x")?;
    Ok(xs.iter().map(|&x| hermite_function(n, x)).collect())
}

/// Gauss–Hermite rule with the weight folded into the weights: for `g`
/// with Gaussian decay, `Σ w_i g(x_i) ≈ ∫ g(x) dx`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i g(x_i)` in node order.
    pub fn integrate(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)).sum()
    }

    /// Classical Gauss–Hermite weights `w_i e^{-x_i²}` for the weight
    /// function `e^{-x²}`.
    pub fn gaussian_weights(&self) -> Vec<f64> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * (-x * x).exp())
            .collect()
    }
}

/// `m`-node Gauss–Hermite rule.
///
/// Nodes are the eigenvalues of the Jacobi matrix of the physicists' Hermite
/// polynomials (zero diagonal, off-diagonal `sqrt(k/2)`), polished by one
/// Newton step on `φ_m`. With the Christoffel–Darboux identity the folded
/// weights reduce to `w_i = 1 / (m φ_{m−1}(x_i)²)`, which stays finite even
/// where `e^{-x_i²}` underflows.
pub fn gauss_hermite(m: usize) -> Result<QuadratureRule> {
    if !(2..=MAX_QUADRATURE_NODES).contains(&m) {
        return Err(Error::Capacity {
            what: "quadrature nodes",
            value: m,
            limit: MAX_QUADRATURE_NODES,
        });
    }
    let off: Vec<f64> = (1..m).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let jacobi = SymTridiagonal::new(vec![0.0; m], off)?;
    let mut nodes = smallest_eigenvalues(&jacobi, m)?;

    let mf = m as f64;
    for x in nodes.iter_mut() {
        let table = hermite_table(m, *x);
        let (pm, pm1) = (table[m], table[m - 1]);
        let slope = (2.0 * mf).sqrt() * pm1 - *x * pm;
        if slope != 0.0 {
            let step = pm / slope;
            if step.abs() < 1e-8 * (1.0 + x.abs()) {
                *x -= step;
            }
        }
    }
    // Exact symmetry about the origin.
    for i in 0..m / 2 {
        let r = 0.5 * (nodes[m - 1 - i] - nodes[i]);
        nodes[i] = -r;
        nodes[m - 1 - i] = r;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    let weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let p = hermite_function(m - 1, x);
            1.0 / (mf * p * p)
        })
        .collect();
    for w in nodes.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::Numeric(format!(
                "Gauss–Hermite nodes not strictly increasing for m = {m}"
            )));
        }
    }
    Ok(QuadratureRule { nodes, weights })
}

/// A function `f = Σ c_n φ_n` given by its (complex) Hermite coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteExpansion {
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct ExpansionJson {
    re: Vec<f64>,
    #[serde(default)]
    im: Vec<f64>,
}

impl Serialize for HermiteExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExpansionJson {
            re: self.coeffs.iter().map(|c| c.re).collect(),
            im: self.coeffs.iter().map(|c| c.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermiteExpansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ExpansionJson::deserialize(d)?;
        let im = if raw.im.is_empty() {
            vec![0.0; raw.re.len()]
        } else if raw.im.len() == raw.re.len() {
            raw.im
        } else {
            return Err(serde::de::Error::custom(format!(
                "\"im\" has {} entries but \"re\" has {}",
                raw.im.len(),
                raw.re.len()
            )));
        };
        let coeffs = raw.re.into_iter().zip(im).map(|(r, i)| Complex64::new(r, i)).collect();
        HermiteExpansion::new(coeffs).map_err(serde::de::Error::custom)
    }
}

impl HermiteExpansion {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("expansion needs at least one coefficient".into()));
        }
        if coeffs.len() > DEFAULT_MAX_DEGREE + 1 {
            return Err(Error::Capacity {
                what: "expansion degree",
                value: coeffs.len() - 1,
                limit: DEFAULT_MAX_DEGREE,
            });
        }
        ensure_finite(coeffs.iter().flat_map(|c| [c.re, c.im]), "coefficient")?;
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// The basis vector `φ_n` in an expansion of degree `degree`.
    pub fn unit(n: usize, degree: usize) -> Result<Self> {
        if n > degree {
            return Err(Error::Domain(format!("index {n} exceeds degree {degree}")));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Highest index `N` (the expansion has `N + 1` coefficients).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `‖f‖²_{L²} = Σ |c_n|²`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn eval_at(&self, x: f64) -> Complex64 {
        let table = hermite_table(self.degree(), x);
        self.coeffs.iter().zip(&table).map(|(c, p)| c * p).sum()
    }

    pub fn eval(&self, xs: &[f64]) -> Vec<Complex64> {
        xs.iter().map(|&x| self.eval_at(x)).collect()
    }
}

/// Result of projecting a sampled function onto the Hermite basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expanded {
    pub expansion: HermiteExpansion,
    /// `‖f‖²` by quadrature of the sampler itself.
    pub l2_sq: f64,
    /// Truncation residual `‖f‖² − Σ|c_n|²`.
    pub residual: f64,
}

impl Expanded {
    /// Membership test for the Sobolev space: the tail beyond degree `N`
    /// carries at most `residual` of L² mass, each unit of which contributes
    /// at least `2(N + 3/2)` to the squared norm.
    pub fn tail_bound(&self) -> f64 {
        2.0 * (self.expansion.degree() as f64 + 1.5) * self.residual.max(0.0)
    }

    pub fn is_in_h(&self, tol: f64) -> bool {
        self.tail_bound() < tol
    }
}

/// Project `sampler` onto `φ_0..φ_degree` with an `m`-node Gauss–Hermite rule.
pub fn expand(
    sampler: impl Fn(f64) -> Complex64,
    degree: usize,
    m: usize,
) -> Result<Expanded> {
    let rule = gauss_hermite(m)?;
    expand_with(sampler, degree, &rule)
}

pub fn expand_with(
    sampler: impl Fn(f64) -> Complex64,
    degree: usize,
    rule: &QuadratureRule,
) -> Result<Expanded> {
    if degree > DEFAULT_MAX_DEGREE {
        return Err(Error::Capacity {
            what: "expansion degree",
            value: degree,
            limit: DEFAULT_MAX_DEGREE,
        });
    }
    if rule.len() < 2 * degree + 2 {
        return Err(Error::Precondition(format!(
            "{} quadrature nodes cannot resolve degree {degree}; need at least {}",
            rule.len(),
            2 * degree + 2
        )));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
    let mut l2_sq = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let fx = sampler(x);
        if !(fx.re.is_finite() && fx.im.is_finite()) {
            return Err(Error::Domain(format!("sampler is not finite at x = {x}")));
        }
        l2_sq += w * fx.norm_sqr();
        let table = hermite_table(degree, x);
        for (c, p) in coeffs.iter_mut().zip(&table) {
            *c += fx * (w * p);
        }
    }
    let expansion = HermiteExpansion::new(coeffs)?;
    let residual = l2_sq - expansion.l2_norm_sq();
    Ok(Expanded {
        expansion,
        l2_sq,
        residual,
    })
}

/// `(−i)^n` as an exact complex unit.
fn minus_i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Multiply `c` by `(−i)^n` without rounding.
fn rotate(c: Complex64, n: usize) -> Complex64 {
    match n % 4 {
        0 => c,
        1 => Complex64::new(c.im, -c.re),
        2 => Complex64::new(-c.re, -c.im),
        _ => Complex64::new(-c.im, c.re),
    }
}

/// Fourier transform (unitary convention, `e^{-ikx}` kernel) acting on the
/// coefficients: `c_n ↦ (−i)^n c_n`.
pub fn fourier_diagonal(e: &HermiteExpansion) -> HermiteExpansion {
    HermiteExpansion {
        coeffs: e.coeffs.iter().enumerate().map(|(n, &c)| rotate(c, n)).collect(),
    }
}

/// Inverse transform: `c_n ↦ i^n c_n`.
pub fn inverse_fourier_diagonal(e: &HermiteExpansion) -> HermiteExpansion {
    HermiteExpansion {
        coeffs: e.coeffs.iter().enumerate().map(|(n, &c)| rotate(c, 3 * n)).collect(),
    }
}

/// The Fourier eigenvalue of `φ_n`.
pub fn fourier_eigenvalue(n: usize) -> Complex64 {
    minus_i_pow(n)
}
