//! Maximum-entropy upper bounds on mixture differential entropy.
//!
//! For any order `l >= 1`, the entropy of a distribution with raw absolute
//! moment `A_l = E[|X|^l]` is at most the entropy of the degree-`l` absolute
//! monomial family member with the same moment:
//!
//! `H(X) <= U_l(X) = b_l + log(A_l) / l`.
//!
//! Order 1 is the Laplacian bound, order 2 the classic Gaussian
//! (variance-based) bound; taking the minimum over a range of orders gives
//! the tightest closed-form bound available from this family.

use crate::amef;
use crate::error::{Error, Result};
use crate::gmm::{gaussian_abs_mean, ln_standard_normal_abs_moment, power_mean, Gmm};
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI, TAU};

/// Bound of order `l` from a precomputed raw absolute moment `A_l > 0`.
///
/// This is exactly the entropy of the moment-matched family member, so the
/// value is a valid entropy upper bound for any distribution with that
/// moment.
pub fn meub(order: u32, abs_moment: f64) -> Result<f64> {
    if !abs_moment.is_finite() || abs_moment <= 0.0 {
        return Err(Error::Domain("absolute moment must be positive and finite"));
    }
    amef::entropy_expectation(order, abs_moment)
}

/// Laplacian (order-1) bound in closed form,
/// `log(2e Σ w_c (μ_c(1 − 2Φ(−μ_c/σ_c)) + σ_c sqrt(2/π) e^{−μ_c²/(2σ_c²)}))`.
///
/// Evaluated on the mixture as given; center the mixture first if a shifted
/// bound is wanted.
pub fn u1_laplacian(g: &Gmm) -> f64 {
    let abs_mean: f64 = g
        .components()
        .iter()
        .map(|c| c.weight * gaussian_abs_mean(c.mean, c.stddev))
        .sum();
    (2.0 * E * abs_mean).ln()
}

/// Gaussian (order-2) bound in closed form, `(1/2) log(2πe V[X])`.
/// Shift-invariant, and exact for a single-component mixture.
pub fn u2_gaussian(g: &Gmm) -> f64 {
    0.5 * (TAU * E * g.variance()).ln()
}

/// One finite entry of a bound series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub order: u32,
    pub value: f64,
}

/// An order whose moment computation failed, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedOrder {
    pub order: u32,
    pub reason: String,
}

/// The computed family of bounds `U_1 .. U_max` for one mixture and shift.
///
/// Every stored entry is finite; orders whose moments overflow are recorded
/// in `skipped` rather than interpolated, so numerical failure at high
/// orders stays observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSeries {
    shift: f64,
    entries: Vec<BoundEntry>,
    skipped: Vec<SkippedOrder>,
    best_order: u32,
    best_value: f64,
}

impl BoundSeries {
    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn entries(&self) -> &[BoundEntry] {
        &self.entries
    }

    pub fn skipped(&self) -> &[SkippedOrder] {
        &self.skipped
    }

    /// Order achieving the minimal bound.
    pub fn best_order(&self) -> u32 {
        self.best_order
    }

    /// The minimal bound, `min_l U_l`.
    pub fn best_value(&self) -> f64 {
        self.best_value
    }

    pub fn value(&self, order: u32) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.order == order)
            .map(|e| e.value)
    }

    /// Smallest order that failed, if any.
    pub fn first_skipped_order(&self) -> Option<u32> {
        self.skipped.iter().map(|s| s.order).min()
    }
}

/// Compute `U_l` for every `l in 1..=max_order` on the mixture shifted by
/// `shift`. Orders whose moment overflows are skipped with a reason; if no
/// order at all survives, [`Error::EmptyBoundSeries`] is returned.
pub fn bound_series(g: &Gmm, max_order: u32, shift: f64) -> Result<BoundSeries> {
    if max_order < 1 {
        return Err(Error::Domain("max_order must be at least 1"));
    }
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for order in 1..=max_order {
        match g.abs_moment(order, shift).and_then(|m| meub(order, m)) {
            Ok(value) if value.is_finite() => entries.push(BoundEntry { order, value }),
            Ok(_) => skipped.push(SkippedOrder {
                order,
                reason: "bound value is not finite".to_string(),
            }),
            Err(e) => skipped.push(SkippedOrder {
                order,
                reason: e.to_string(),
            }),
        }
    }
    let best = entries
        .iter()
        .copied()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or(Error::EmptyBoundSeries { max_order })?;
    Ok(BoundSeries {
        shift,
        entries,
        skipped,
        best_order: best.order,
        best_value: best.value,
    })
}

/// Result of a shift optimization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftOptimum {
    pub shift: f64,
    pub bound: f64,
}

/// Default search bracket: the data range padded by three of the largest
/// component stddev on each side.
pub fn default_shift_bracket(g: &Gmm) -> (f64, f64) {
    let lo = g
        .components()
        .iter()
        .map(|c| c.mean)
        .fold(f64::INFINITY, f64::min);
    let hi = g
        .components()
        .iter()
        .map(|c| c.mean)
        .fold(f64::NEG_INFINITY, f64::max);
    let pad = 3.0
        * g.components()
            .iter()
            .map(|c| c.stddev)
            .fold(0.0_f64, f64::max);
    (lo - pad, hi + pad)
}

const GOLDEN_RATIO_STEP: f64 = 0.618033988749895; // (√5 − 1)/2
const SHIFT_TOL: f64 = 1e-8;
const SHIFT_MAX_ITER: u32 = 200;
const PRESCAN_POINTS: usize = 33;

/// Minimize `U_order(δ)` over a shift bracket.
///
/// `U_l(δ)` is continuous but not guaranteed unimodal, so a 33-point
/// pre-scan picks the most promising sub-bracket before golden-section
/// refinement (1e-8 width, 200-iteration cap). The mixture mean is always
/// evaluated as a candidate, so the result never loses to the default
/// centering. Fails only if the objective is non-finite across the whole
/// bracket.
pub fn optimize_shift(g: &Gmm, order: u32, bracket: Option<(f64, f64)>) -> Result<ShiftOptimum> {
    if order < 1 {
        return Err(Error::Domain("order must be at least 1"));
    }
    let (lo, hi) = bracket.unwrap_or_else(|| default_shift_bracket(g));
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::Domain("bracket must be a finite non-empty interval"));
    }
    let objective = |delta: f64| -> f64 {
        g.abs_moment(order, delta)
            .and_then(|m| meub(order, m))
            .unwrap_or(f64::INFINITY)
    };

    // Pre-scan to locate the best sub-bracket.
    let step = (hi - lo) / (PRESCAN_POINTS - 1) as f64;
    let mut best_idx = 0;
    let mut best_val = f64::INFINITY;
    let scan: Vec<f64> = (0..PRESCAN_POINTS).map(|i| lo + step * i as f64).collect();
    for (i, &x) in scan.iter().enumerate() {
        let v = objective(x);
        if v < best_val {
            best_val = v;
            best_idx = i;
        }
    }
    if !best_val.is_finite() {
        return Err(Error::ShiftOptimizationFailed { lo, hi });
    }
    let mut a = scan[best_idx.saturating_sub(1)];
    let mut b = scan[(best_idx + 1).min(PRESCAN_POINTS - 1)];

    // Golden-section refinement.
    let mut x1 = b - GOLDEN_RATIO_STEP * (b - a);
    let mut x2 = a + GOLDEN_RATIO_STEP * (b - a);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    let mut iterations = 0;
    while (b - a).abs() > SHIFT_TOL && iterations < SHIFT_MAX_ITER {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN_RATIO_STEP * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN_RATIO_STEP * (b - a);
            f2 = objective(x2);
        }
        iterations += 1;
    }
    let mid = 0.5 * (a + b);
    let mut best = ShiftOptimum {
        shift: mid,
        bound: objective(mid),
    };
    // The mean is the canonical default shift; prefer it on ties so a flat
    // objective near the optimum cannot drift the result away from it.
    let mean = g.mean();
    let at_mean = objective(mean);
    if at_mean <= best.bound {
        best = ShiftOptimum {
            shift: mean,
            bound: at_mean,
        };
    }
    if !best.bound.is_finite() {
        return Err(Error::ShiftOptimizationFailed { lo, hi });
    }
    Ok(best)
}

/// Zero-centered closed form for even orders:
/// `U_l = b_l + log(z_l)/l + log σ̄_l` with `σ̄_l` the l-th power mean.
pub fn zero_centered_bound(weights: &[f64], sigmas: &[f64], order: u32) -> Result<f64> {
    if order == 0 || order % 2 != 0 {
        return Err(Error::Domain("order must be even and at least 2"));
    }
    let l = f64::from(order);
    let b = amef::expectation_entropy_constant(l);
    let ln_z = ln_standard_normal_abs_moment(l);
    let pm = power_mean(weights, sigmas, order)?;
    Ok(b + ln_z / l + pm.ln())
}

/// Gap between the constant parts of consecutive even-order zero-centered
/// bounds: `Δ_l = (b_l + log(z_l)/l) − (b_{l+2} + log(z_{l+2})/(l+2))`.
///
/// A higher even order can only win on a zero-centered mixture when the
/// power-mean growth `log(σ̄_{l+2}/σ̄_l)` stays below this gap; the gap is
/// negative for `l > 2` and decays toward zero, which is why only orders 1
/// and 2 matter for zero-centered mixtures.
pub fn bound_constant_gap(order: u32) -> Result<f64> {
    if order == 0 || order % 2 != 0 {
        return Err(Error::Domain("order must be even and at least 2"));
    }
    let term =
        |l: f64| amef::expectation_entropy_constant(l) + ln_standard_normal_abs_moment(l) / l;
    Ok(term(f64::from(order)) - term(f64::from(order) + 2.0))
}

/// Ratio threshold deciding Laplacian-vs-Gaussian tightness for
/// zero-centered mixtures: `π / (2√e) ≈ 0.9527`.
pub fn u1_tightness_threshold() -> f64 {
    PI / (2.0 * E.sqrt())
}

/// Tightness analysis of a zero-centered mixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessReport {
    /// Arithmetic mean of the stddevs, `σ̄_1`.
    pub arithmetic_mean: f64,
    /// Quadratic mean of the stddevs, `σ̄_2`.
    pub quadratic_mean: f64,
    /// `σ̄_1 / σ̄_2`; at most 1 by the power-mean inequality.
    pub ratio: f64,
    /// Decision threshold `π/(2√e)`.
    pub threshold: f64,
    /// Whether the ratio predicts `U_1 < U_2`.
    pub predicts_u1_tighter: bool,
    /// `Δ_l` for the requested even orders.
    pub constant_gaps: Vec<BoundEntry>,
}

/// Compare the Laplacian and Gaussian bounds for a zero-centered mixture via
/// the power-mean ratio, and report `Δ_l` for the requested even orders.
pub fn tightness_report(
    weights: &[f64],
    sigmas: &[f64],
    gap_orders: &[u32],
) -> Result<TightnessReport> {
    let arithmetic_mean = power_mean(weights, sigmas, 1)?;
    let quadratic_mean = power_mean(weights, sigmas, 2)?;
    let ratio = arithmetic_mean / quadratic_mean;
    let threshold = u1_tightness_threshold();
    let constant_gaps = gap_orders
        .iter()
        .map(|&order| bound_constant_gap(order).map(|value| BoundEntry { order, value }))
        .collect::<Result<Vec<_>>>()?;
    Ok(TightnessReport {
        arithmetic_mean,
        quadratic_mean,
        ratio,
        threshold,
        predicts_u1_tighter: ratio < threshold,
        constant_gaps,
    })
}
