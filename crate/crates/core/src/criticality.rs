//! Criticality of point sets.
//!
//! A point set is a finite window `λ_{j0} < … < λ_{j1}` of a countable set,
//! optionally with a power-law tail model `|λ_n| = θ(|n|^α)` describing what
//! lies beyond the window. Two classifications are computed per gap
//! `[λ_j, λ_{j+1}]`:
//!
//! * spacing products `max{|λ_j|, |λ_{j+1}|}(λ_{j+1} − λ_j)` against the
//!   threshold (π here, ½ under the ordinary-frequency Fourier convention);
//! * ground-state ratios `sqrt(E⁽⁰⁾_[λ_j, λ_{j+1}]) / max{|λ_j|, |λ_{j+1}|}`
//!   against 1.
//!
//! Statements over all of `ℤ` are only decided when a tail model is present;
//! otherwise the report carries window statistics and an indeterminate
//! verdict.

use crate::confined::{box_bounds_with, ground_state, Interval, ZeroPolicy};
use crate::error::{ensure_finite, Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Width of the band around the threshold inside which gaps are flagged as
/// near-critical.
pub const DEFAULT_NEAR_CRITICAL_BAND: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Unitary transform with `e^{-ikx}`; critical spacing product π.
    #[default]
    Angular,
    /// Transform with `e^{-2πikx}`; critical spacing product ½.
    Ordinary,
}

impl Convention {
    pub fn threshold(self) -> f64 {
        match self {
            Convention::Angular => PI,
            Convention::Ordinary => 0.5,
        }
    }
}

/// `|λ_n| = θ(|n|^α)` beyond the window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailModel {
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPointSet")]
pub struct PointSet {
    pub convention: Convention,
    /// Index `j` of the first point, so re-windowed sets keep their labels.
    pub first_index: i64,
    pub points: Vec<f64>,
    pub tail: Option<TailModel>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPointSet {
    #[serde(default)]
    convention: Convention,
    #[serde(default)]
    first_index: i64,
    points: Vec<f64>,
    #[serde(default)]
    tail: Option<TailModel>,
}

impl TryFrom<RawPointSet> for PointSet {
    type Error = Error;
    fn try_from(raw: RawPointSet) -> Result<Self> {
        PointSet::new(raw.points, raw.convention, raw.tail).map(|s| s.with_first_index(raw.first_index))
    }
}

impl PointSet {
    pub fn new(points: Vec<f64>, convention: Convention, tail: Option<TailModel>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Precondition(format!(
                "a point set needs at least 2 points, got {}",
                points.len()
            )));
        }
        ensure_finite(points.iter().copied(), "point")?;
        if let Some(i) = points.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::Domain(format!(
                "points must be strictly increasing: points[{i}] = {} and points[{}] = {}",
                points[i],
                i + 1,
                points[i + 1]
            )));
        }
        if let Some(t) = tail {
            if !(t.alpha.is_finite() && t.alpha > 0.0) {
                return Err(Error::Domain(format!("tail exponent must be positive, got {}", t.alpha)));
            }
        }
        Ok(Self {
            convention,
            first_index: 0,
            points,
            tail,
        })
    }

    pub fn angular(points: Vec<f64>) -> Result<Self> {
        Self::new(points, Convention::Angular, None)
    }

    pub fn with_first_index(mut self, j: i64) -> Self {
        self.first_index = j;
        self
    }

    pub fn with_tail(mut self, alpha: f64) -> Result<Self> {
        let s = Self::new(std::mem::take(&mut self.points), self.convention, Some(TailModel { alpha }))?;
        Ok(s.with_first_index(self.first_index))
    }

    pub fn gap_count(&self) -> usize {
        self.points.len() - 1
    }

    /// `(j, [λ_j, λ_{j+1}])` for every gap in the window.
    pub fn gaps(&self) -> impl Iterator<Item = (i64, Interval)> + '_ {
        self.points.windows(2).enumerate().map(move |(i, w)| {
            (
                self.first_index + i as i64,
                Interval::new(w[0], w[1]).expect("validated point set"),
            )
        })
    }
}

/// Rescale between Fourier conventions: ordinary-convention points are multiplied by
/// `sqrt(2π)` (both Λ and M), angular points divided by it. Spacing products
/// scale by exactly `2π`, the ratio of the two thresholds.
pub fn convert_convention(s: &PointSet) -> PointSet {
    let factor = (2.0 * PI).sqrt();
    let (points, convention) = match s.convention {
        Convention::Ordinary => (s.points.iter().map(|x| x * factor).collect(), Convention::Angular),
        Convention::Angular => (s.points.iter().map(|x| x / factor).collect(), Convention::Ordinary),
    };
    PointSet {
        convention,
        first_index: s.first_index,
        points,
        tail: s.tail,
    }
}

/// Angular-convention view of `s`.
pub fn to_angular(s: &PointSet) -> PointSet {
    match s.convention {
        Convention::Angular => s.clone(),
        Convention::Ordinary => convert_convention(s),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailVerdict {
    Supercritical,
    Subcritical,
    Indeterminate,
}

/// Limit of the spacing products along the tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailLimit {
    Zero,
    Finite(f64),
    Infinite,
}

impl TailLimit {
    fn below(self, t: f64) -> bool {
        match self {
            TailLimit::Zero => true,
            TailLimit::Finite(v) => v < t,
            TailLimit::Infinite => false,
        }
    }

    fn above(self, t: f64) -> bool {
        match self {
            TailLimit::Zero => false,
            TailLimit::Finite(v) => v > t,
            TailLimit::Infinite => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapProduct {
    pub j: i64,
    pub a: f64,
    pub b: f64,
    /// `max{|λ_j|, |λ_{j+1}|}(λ_{j+1} − λ_j)`
    pub product: f64,
    /// `|λ_j|(λ_{j+1} − λ_j)`, the normalisation used in the limsup/liminf forms.
    pub product_left: f64,
}

/// Window statistics over the tail, i.e. the gaps whose outer endpoint is at
/// least half the window's largest `|λ|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailStats {
    pub gaps: usize,
    pub min_product: f64,
    pub max_product: f64,
    pub min_product_left: f64,
    pub max_product_left: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalityReport {
    pub convention: Convention,
    pub threshold: f64,
    pub per_gap_products: Vec<GapProduct>,
    pub sup_product: f64,
    /// `sup_product < threshold` on the window.
    pub uniformly_supercritical: bool,
    /// Gaps with `|product − threshold| ≤ band`.
    pub near_critical: Vec<i64>,
    pub band: f64,
    pub tail_stats: TailStats,
    pub limsup: Option<TailLimit>,
    pub liminf: Option<TailLimit>,
    pub verdict_limsup: TailVerdict,
    pub verdict_liminf: TailVerdict,
}

pub(crate) fn tail_mask(s: &PointSet) -> Vec<bool> {
    let reach = s.points.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    s.points
        .windows(2)
        .map(|w| w[0].abs().max(w[1].abs()) >= 0.5 * reach)
        .collect()
}

pub fn spacing_products(s: &PointSet) -> CriticalityReport {
    spacing_products_with_band(s, DEFAULT_NEAR_CRITICAL_BAND)
}

pub fn spacing_products_with_band(s: &PointSet, band: f64) -> CriticalityReport {
    let threshold = s.convention.threshold();
    let per_gap_products: Vec<GapProduct> = s
        .gaps()
        .map(|(j, iv)| GapProduct {
            j,
            a: iv.a(),
            b: iv.b(),
            product: iv.max_abs() * iv.len(),
            product_left: iv.a().abs() * iv.len(),
        })
        .collect();
    let sup_product = per_gap_products.iter().map(|g| g.product).fold(f64::NEG_INFINITY, f64::max);
    let near_critical = per_gap_products
        .iter()
        .filter(|g| (g.product - threshold).abs() <= band)
        .map(|g| g.j)
        .collect();

    let mask = tail_mask(s);
    let tail: Vec<&GapProduct> = per_gap_products.iter().zip(&mask).filter(|(_, &m)| m).map(|(g, _)| g).collect();
    let fold = |f: fn(&GapProduct) -> f64, init: f64, op: fn(f64, f64) -> f64| tail.iter().map(|g| f(g)).fold(init, op);
    let tail_stats = TailStats {
        gaps: tail.len(),
        min_product: fold(|g| g.product, f64::INFINITY, f64::min),
        max_product: fold(|g| g.product, f64::NEG_INFINITY, f64::max),
        min_product_left: fold(|g| g.product_left, f64::INFINITY, f64::min),
        max_product_left: fold(|g| g.product_left, f64::NEG_INFINITY, f64::max),
    };

    let (limsup, liminf) = match s.tail {
        None => (None, None),
        Some(t) => {
            let (hi, lo) = tail_limits(t, &per_gap_products);
            (Some(hi), Some(lo))
        }
    };
    let verdict_limsup = match limsup {
        Some(l) if l.below(threshold - band) => TailVerdict::Supercritical,
        _ => TailVerdict::Indeterminate,
    };
    let verdict_liminf = match liminf {
        Some(l) if l.above(threshold + band) => TailVerdict::Subcritical,
        _ => TailVerdict::Indeterminate,
    };

    CriticalityReport {
        convention: s.convention,
        threshold,
        per_gap_products,
        sup_product,
        uniformly_supercritical: sup_product < threshold,
        near_critical,
        band,
        tail_stats,
        limsup,
        liminf,
        verdict_limsup,
        verdict_liminf,
    }
}

/// Gap lengths behave like `α|n|^{α−1}`, so products behave like
/// `|n|^{2α−1}`: they vanish for `α < ½` and diverge for `α > ½`. At `α = ½`
/// the limit is finite and is read off the outermost gaps of the window.
fn tail_limits(t: TailModel, gaps: &[GapProduct]) -> (TailLimit, TailLimit) {
    const CRITICAL_EXPONENT: f64 = 0.5;
    if (t.alpha - CRITICAL_EXPONENT).abs() > 1e-12 {
        let l = if t.alpha < CRITICAL_EXPONENT {
            TailLimit::Zero
        } else {
            TailLimit::Infinite
        };
        return (l, l);
    }
    let (Some(first), Some(last)) = (gaps.first(), gaps.last()) else {
        return (TailLimit::Infinite, TailLimit::Zero);
    };
    // A one-sided window only has a meaningful outer end on its far side.
    let candidates = if first.a < 0.0 && last.b > 0.0 {
        vec![first.product, last.product]
    } else if last.b <= 0.0 {
        vec![first.product]
    } else {
        vec![last.product]
    };
    let hi = candidates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = candidates.iter().copied().fold(f64::INFINITY, f64::min);
    (TailLimit::Finite(hi), TailLimit::Finite(lo))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GseGap {
    pub j: i64,
    pub a: f64,
    pub b: f64,
    pub energy: f64,
    pub error_estimate: f64,
    /// `sqrt(E⁽⁰⁾) / max{|λ_j|, |λ_{j+1}|}`
    pub ratio: f64,
    /// Ratio bounds implied by the box energies.
    pub enclosure: (f64, f64),
    /// Gap contains 0; the lower box bound uses the relaxed potential minimum.
    pub contains_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GseReport {
    pub per_gap_ratios: Vec<GseGap>,
    pub inf_ratio: f64,
    /// `inf_ratio > 1`.
    pub uniformly_supercritical: bool,
    /// Gaps with ratio ≤ 1.
    pub exceptional_gaps: Vec<i64>,
}

impl GseReport {
    pub fn ratio(&self, j: i64) -> Option<&GseGap> {
        self.per_gap_ratios.iter().find(|g| g.j == j)
    }
}

/// Ground-state ratio per gap of one set (angular convention). Gaps are solved
/// in parallel; the report is ordered by `j`.
pub fn gse_report(s: &PointSet, tol: f64) -> Result<GseReport> {
    let s = to_angular(s);
    let gaps: Vec<(i64, Interval)> = s.gaps().collect();
    let per_gap_ratios = gaps
        .par_iter()
        .map(|&(j, iv)| {
            let g = ground_state(iv, tol, crate::confined::DEFAULT_GRID).map_err(|e| {
                let msg = format!("gap j = {j} {iv}: {e}");
                match e {
                    Error::Consistency(_) => Error::Consistency(msg),
                    _ => Error::Numeric(msg),
                }
            })?;
            let bounds = box_bounds_with(iv, 0, ZeroPolicy::Relaxed)?;
            let m = iv.max_abs();
            Ok(GseGap {
                j,
                a: iv.a(),
                b: iv.b(),
                energy: g.energy,
                error_estimate: g.error_estimate,
                ratio: g.energy.sqrt() / m,
                enclosure: (bounds.e_down.sqrt() / m, bounds.e_up.sqrt() / m),
                contains_zero: iv.contains_zero(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let inf_ratio = per_gap_ratios.iter().map(|g| g.ratio).fold(f64::INFINITY, f64::min);
    let exceptional_gaps = per_gap_ratios.iter().filter(|g| g.ratio <= 1.0).map(|g| g.j).collect();
    Ok(GseReport {
        per_gap_ratios,
        inf_ratio,
        uniformly_supercritical: inf_ratio > 1.0,
        exceptional_gaps,
    })
}

/// Reports for both sets; the pair has uniformly supercritical ground-state
/// energy iff both reports do.
pub fn gse_criticality(lam: &PointSet, mu: &PointSet, tol: f64) -> Result<(GseReport, GseReport)> {
    Ok((gse_report(lam, tol)?, gse_report(mu, tol)?))
}

/// Gaps where a ground-state ratio above 1 coexists with a spacing product
/// of at least the threshold. Empty whenever the implication holds.
pub fn implication_counterexamples(products: &CriticalityReport, gse: &GseReport) -> Vec<i64> {
    products
        .per_gap_products
        .iter()
        .zip(&gse.per_gap_ratios)
        .filter(|(p, g)| g.ratio > 1.0 && p.product >= PI)
        .map(|(p, _)| p.j)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImplicationCheck {
    /// Gaps with ratio > 1 (antecedent true).
    pub gse_supercritical_gaps: usize,
    pub counterexamples: Vec<i64>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceptionCheck {
    pub uniformly_supercritical: bool,
    /// Gaps with ratio ≤ 1 (the count `N_Λ`).
    pub exceptional_gaps: Vec<i64>,
    pub exceptional_count: usize,
    pub max_abs_exceptional_index: Option<i64>,
    /// No exceptional gap lies in the window's tail.
    pub confined_to_core: bool,
    pub alpha: f64,
    /// Growth `α ≥ 1` is incompatible with uniformly supercritical spacing.
    pub growth_contradiction: bool,
    pub core_max_gap: f64,
    pub tail_max_gap: f64,
    pub gaps_shrinking: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitComparison {
    pub tail_gaps: usize,
    /// min over the tail of `sqrt(E⁽⁰⁾)/max|λ|`
    pub min_tail_ratio: f64,
    /// max over the tail of the spacing product
    pub max_tail_product: f64,
    /// `π / max_tail_product`
    pub pi_over_max_product: f64,
    /// `|min_tail_ratio − π/max_tail_product| / (π/max_tail_product)`
    pub relative_discrepancy: f64,
    /// `sqrt(π²/(2P²) + ½)` at `P = max_tail_product`: the limit of the ratio
    /// predicted by the box bounds as gaps shrink.
    pub box_bound_limit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub gaps: usize,
    pub implication: ImplicationCheck,
    pub exceptions: ExceptionCheck,
    pub limit: LimitComparison,
}

/// The three relations between spacing and ground-state criticality on one
/// window. Needs a tail model.
pub fn lemma_checks(s: &PointSet, tol: f64) -> Result<LemmaReport> {
    let Some(tail) = s.tail else {
        return Err(Error::Precondition(
            "lemma checks need a tail model {\"alpha\": …} for the exception and limit items".into(),
        ));
    };
    let s = to_angular(s);
    let products = spacing_products(&s);
    let gse = gse_report(&s, tol)?;
    lemma_from_reports(&s, tail, &products, &gse)
}

pub fn lemma_from_reports(
    s: &PointSet,
    tail: TailModel,
    products: &CriticalityReport,
    gse: &GseReport,
) -> Result<LemmaReport> {
    let counterexamples = implication_counterexamples(products, gse);
    let implication = ImplicationCheck {
        gse_supercritical_gaps: gse.per_gap_ratios.iter().filter(|g| g.ratio > 1.0).count(),
        holds: counterexamples.is_empty(),
        counterexamples,
    };

    let mask = tail_mask(s);
    let in_tail = |j: i64| mask[(j - s.first_index) as usize];
    let gap_len = |g: &GapProduct| g.b - g.a;
    let core_max_gap = products
        .per_gap_products
        .iter()
        .filter(|g| !in_tail(g.j))
        .map(gap_len)
        .fold(0.0, f64::max);
    let tail_max_gap = products
        .per_gap_products
        .iter()
        .filter(|g| in_tail(g.j))
        .map(gap_len)
        .fold(0.0, f64::max);
    let exceptions = ExceptionCheck {
        uniformly_supercritical: products.uniformly_supercritical,
        exceptional_count: gse.exceptional_gaps.len(),
        max_abs_exceptional_index: gse.exceptional_gaps.iter().map(|j| j.abs()).max(),
        confined_to_core: gse.exceptional_gaps.iter().all(|&j| !in_tail(j)),
        exceptional_gaps: gse.exceptional_gaps.clone(),
        alpha: tail.alpha,
        growth_contradiction: products.uniformly_supercritical && tail.alpha >= 1.0,
        core_max_gap,
        tail_max_gap,
        gaps_shrinking: tail_max_gap < core_max_gap,
    };

    let tail_gaps = mask.iter().filter(|&&m| m).count();
    let min_tail_ratio = gse
        .per_gap_ratios
        .iter()
        .filter(|g| in_tail(g.j))
        .map(|g| g.ratio)
        .fold(f64::INFINITY, f64::min);
    let max_tail_product = products.tail_stats.max_product;
    let pi_over_max_product = PI / max_tail_product;
    let limit = LimitComparison {
        tail_gaps,
        min_tail_ratio,
        max_tail_product,
        pi_over_max_product,
        relative_discrepancy: (min_tail_ratio - pi_over_max_product).abs() / pi_over_max_product,
        box_bound_limit: (PI * PI / (2.0 * max_tail_product * max_tail_product) + 0.5).sqrt(),
    };
    Ok(LemmaReport {
        gaps: s.gap_count(),
        implication,
        exceptions,
        limit,
    })
}

/// `±sqrt(π|j|/2)` for `j ∈ [−depth, depth]` (one-sided: `0..=depth`).
pub fn sqrt_family(depth: usize, two_sided: bool) -> PointSet {
    let value = |j: i64| (j as f64).signum() * (PI * j.unsigned_abs() as f64 / 2.0).sqrt();
    let range: Vec<i64> = if two_sided {
        (-(depth as i64)..=depth as i64).collect()
    } else {
        (0..=depth as i64).collect()
    };
    let first = range[0];
    PointSet::new(range.into_iter().map(value).collect(), Convention::Angular, Some(TailModel { alpha: 0.5 }))
        .expect("increasing by construction")
        .with_first_index(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn point_set_validation() {
        assert!(matches!(PointSet::angular(vec![1.0]), Err(Error::Precondition(_))));
        assert!(matches!(PointSet::angular(vec![1.0, 1.0]), Err(Error::Domain(_))));
        assert!(PointSet::angular(vec![2.0, 1.0]).is_err());
        assert!(PointSet::angular(vec![0.0, f64::NAN]).is_err());
        assert!(PointSet::new(vec![0.0, 1.0], Convention::Angular, Some(TailModel { alpha: -1.0 })).is_err());
    }

    #[test]
    fn json_schema() {
        let s: PointSet =
            serde_json::from_str(r#"{"convention":"ordinary","points":[1,2],"tail":{"alpha":0.5}}"#).unwrap();
        assert_eq!(s.convention, Convention::Ordinary);
        assert_eq!(s.tail, Some(TailModel { alpha: 0.5 }));
        let s: PointSet = serde_json::from_str(r#"{"convention":"angular","points":[1,2],"tail":null}"#).unwrap();
        assert_eq!(s.tail, None);
        assert!(serde_json::from_str::<PointSet>(r#"{"convention":"other","points":[1,2]}"#).is_err());
        assert!(serde_json::from_str::<PointSet>(r#"{"points":[2,1]}"#).is_err());
    }

    #[test]
    fn single_gap_products() {
        let r = spacing_products(&PointSet::angular(vec![1.0, 2.0]).unwrap());
        assert_eq!(r.per_gap_products.len(), 1);
        assert_eq!(r.sup_product, 2.0);
        assert!(r.uniformly_supercritical);
        assert_eq!(r.verdict_limsup, TailVerdict::Indeterminate);
        assert_eq!(r.threshold, PI);
    }

    #[test]
    fn sqrt_family_products_approach_quarter_pi() {
        let s = sqrt_family(200, true);
        let r = spacing_products(&s);
        assert!(r.uniformly_supercritical, "sup {}", r.sup_product);
        assert_abs_diff_eq!(r.sup_product, PI / 2.0, epsilon = 1e-12);
        for g in &r.per_gap_products {
            if g.a > 0.0 {
                // (π/2) λ_{j+1} / (λ_j + λ_{j+1}) from λ_{j+1}² − λ_j² = π/2
                let expect = PI / 2.0 * g.b / (g.a + g.b);
                assert_abs_diff_eq!(g.product, expect, epsilon = 1e-12);
            }
        }
        let last = r.per_gap_products.last().unwrap().product;
        assert!((last - PI / 4.0).abs() < 2e-3);
        assert_eq!(r.limsup, Some(TailLimit::Finite(last)));
        assert_eq!(r.verdict_limsup, TailVerdict::Supercritical);
        assert_eq!(r.verdict_liminf, TailVerdict::Indeterminate);
    }

    #[test]
    fn integers_have_subcritical_tail() {
        let s = PointSet::new((1..=100).map(|j| j as f64).collect(), Convention::Angular, Some(TailModel { alpha: 1.0 }))
            .unwrap();
        let r = spacing_products(&s);
        assert_eq!(r.sup_product, 100.0);
        assert!(!r.uniformly_supercritical);
        assert!(r.tail_stats.min_product > PI);
        assert_eq!(r.verdict_liminf, TailVerdict::Subcritical);
        assert_eq!(r.liminf, Some(TailLimit::Infinite));
        let untailed = spacing_products(&PointSet::angular(s.points.clone()).unwrap());
        assert_eq!(untailed.verdict_liminf, TailVerdict::Indeterminate);
        assert_eq!(untailed.tail_stats, r.tail_stats);
    }

    #[test]
    fn near_critical_band() {
        let x = PI.sqrt();
        let r = spacing_products(&PointSet::angular(vec![0.0, x]).unwrap());
        assert_eq!(r.near_critical, vec![0]);
    }

    #[test]
    fn rewindowing_keeps_products() {
        let full = sqrt_family(50, false);
        let sub = PointSet::angular(full.points[10..30].to_vec()).unwrap().with_first_index(10);
        let a = spacing_products(&full);
        let b = spacing_products(&sub);
        for g in &b.per_gap_products {
            let h = a.per_gap_products.iter().find(|x| x.j == g.j).unwrap();
            assert_eq!(g, h);
        }
    }

    #[test]
    fn convention_examples() {
        let s = PointSet::new(vec![1.0, 2.0], Convention::Ordinary, None).unwrap();
        assert!(!spacing_products(&s).uniformly_supercritical);
        let t = convert_convention(&s);
        assert_eq!(t.convention, Convention::Angular);
        let r = spacing_products(&t);
        assert_abs_diff_eq!(r.sup_product, 4.0 * PI, epsilon = 1e-12);
        assert!(!r.uniformly_supercritical);

        let small = PointSet::new(vec![0.1, 0.2], Convention::Ordinary, None).unwrap();
        assert!(spacing_products(&small).uniformly_supercritical);
        let r = spacing_products(&convert_convention(&small));
        assert_abs_diff_eq!(r.sup_product, 0.04 * PI, epsilon = 1e-14);
        assert!(r.uniformly_supercritical);

        let back = convert_convention(&convert_convention(&s));
        for (x, y) in back.points.iter().zip(&s.points) {
            assert_abs_diff_eq!(x, y, epsilon = 4.0 * f64::EPSILON);
        }
        assert_eq!(back.convention, Convention::Ordinary);
    }

    #[test]
    fn gse_on_unit_gap() {
        let r = gse_report(&PointSet::angular(vec![1.0, 2.0]).unwrap(), 1e-8).unwrap();
        let g = &r.per_gap_ratios[0];
        assert!(1.166 < g.ratio && g.ratio < 1.317, "{}", g.ratio);
        assert!(g.enclosure.0 <= g.ratio && g.ratio <= g.enclosure.1);
        assert!(r.uniformly_supercritical);
    }

    #[test]
    fn gse_failing_gap() {
        let r = gse_report(&PointSet::angular(vec![10.0, 10.5]).unwrap(), 1e-8).unwrap();
        let g = &r.per_gap_ratios[0];
        let kinetic = PI * PI / (2.0 * 0.25);
        assert_abs_diff_eq!(g.enclosure.0, (kinetic + 50.0).sqrt() / 10.5, epsilon = 1e-12);
        assert_abs_diff_eq!(g.enclosure.1, (kinetic + 55.125).sqrt() / 10.5, epsilon = 1e-12);
        assert!(g.enclosure.0 > 0.7953 && g.enclosure.1 < 0.8241);
        assert!(g.ratio < 1.0);
        assert_eq!(r.exceptional_gaps, vec![0]);
        assert!(!r.uniformly_supercritical);
    }

    #[test]
    fn gse_tiny_gap() {
        let r = gse_report(&PointSet::angular(vec![1.0, 1.001]).unwrap(), 1e-8).unwrap();
        assert!(r.inf_ratio > 1000.0);
    }

    #[test]
    fn gse_gap_through_origin() {
        let r = gse_report(&PointSet::angular(vec![-0.5, 0.7]).unwrap(), 1e-8).unwrap();
        let g = &r.per_gap_ratios[0];
        assert!(g.contains_zero);
        assert!(g.enclosure.0 <= g.ratio && g.ratio <= g.enclosure.1);
    }

    #[test]
    fn lemma_needs_tail() {
        assert!(matches!(
            lemma_checks(&PointSet::angular(vec![1.0, 2.0]).unwrap(), 1e-8),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn lemma_on_integers() {
        let s = PointSet::new((1..=30).map(|j| j as f64).collect(), Convention::Angular, Some(TailModel { alpha: 1.0 }))
            .unwrap();
        let r = lemma_checks(&s, 1e-8).unwrap();
        assert!(r.implication.holds);
        assert!(!r.exceptions.uniformly_supercritical);
        assert!(!r.exceptions.growth_contradiction);
    }
}
