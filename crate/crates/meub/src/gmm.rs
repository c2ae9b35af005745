//! Univariate Gaussian mixture models: representation, parsing, density
//! evaluation, seeded sampling, and exact raw absolute moments.
//!
//! The moment machinery implements two closed-form routes: a direct
//! binomial/double-factorial formula for even orders, and a recursion over
//! half-line Gaussian moments for odd orders. Both detect double-precision
//! overflow and report it as [`Error::NonFiniteMoment`] instead of letting
//! NaN propagate into the bounds.

use crate::error::{Error, Result};
use crate::special::{erfc, log_gamma_raw, std_normal_cdf};
use crate::util::KahanSum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

/// Weight tolerance: weights that sum to within this of 1 are renormalized,
/// anything further off is rejected as a genuinely invalid mixture.
const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// One mixture component `w · N(mu, sigma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Component {
    #[serde(rename = "w")]
    pub weight: f64,
    #[serde(rename = "mu")]
    pub mean: f64,
    #[serde(rename = "sigma")]
    pub stddev: f64,
}

impl Component {
    pub fn new(weight: f64, mean: f64, stddev: f64) -> Self {
        Self {
            weight,
            mean,
            stddev,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GmmRepr {
    components: Vec<Component>,
}

/// A univariate Gaussian mixture model.
///
/// Invariants guaranteed after construction: at least one component, all
/// weights positive and summing to 1 (renormalized within a 1e-9 slack),
/// all standard deviations positive and finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GmmRepr", into = "GmmRepr")]
pub struct Gmm {
    components: Vec<Component>,
}

impl TryFrom<GmmRepr> for Gmm {
    type Error = Error;

    fn try_from(repr: GmmRepr) -> Result<Self> {
        Gmm::new(repr.components)
    }
}

impl From<Gmm> for GmmRepr {
    fn from(g: Gmm) -> Self {
        GmmRepr {
            components: g.components,
        }
    }
}

impl Gmm {
    pub fn new(mut components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid_mixture(
                "mixture needs at least one component",
            ));
        }
        for (i, c) in components.iter().enumerate() {
            if !c.weight.is_finite() || c.weight <= 0.0 {
                return Err(Error::invalid_mixture(format!(
                    "component {i}: weight {} must be positive and finite",
                    c.weight
                )));
            }
            if !c.mean.is_finite() {
                return Err(Error::invalid_mixture(format!(
                    "component {i}: mean {} must be finite",
                    c.mean
                )));
            }
            if !c.stddev.is_finite() || c.stddev <= 0.0 {
                return Err(Error::invalid_mixture(format!(
                    "component {i}: stddev {} must be positive and finite",
                    c.stddev
                )));
            }
        }
        let sum: f64 = components.iter().map(|c| c.weight).sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::invalid_mixture(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        for c in &mut components {
            c.weight /= sum;
        }
        Ok(Self { components })
    }

    /// A single-component mixture, i.e. a plain Gaussian.
    pub fn single(mean: f64, stddev: f64) -> Result<Self> {
        Self::new(vec![Component::new(1.0, mean, stddev)])
    }

    /// Parse the plain text form: one `w mu sigma` triple per line,
    /// whitespace separated, `#` starts a comment.
    pub fn parse_text(input: &str) -> Result<Self> {
        let mut components = Vec::new();
        for (lineno, raw) in input.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::parse(format!(
                    "line {}: expected `w mu sigma`, found {} fields",
                    lineno + 1,
                    fields.len()
                )));
            }
            let mut values = [0.0_f64; 3];
            for (slot, field) in values.iter_mut().zip(&fields) {
                *slot = field.parse().map_err(|_| {
                    Error::parse(format!("line {}: `{}` is not a number", lineno + 1, field))
                })?;
            }
            components.push(Component::new(values[0], values[1], values[2]));
        }
        if components.is_empty() {
            return Err(Error::parse("no mixture components found"));
        }
        Self::new(components)
    }

    /// Parse the JSON form: `{"components":[{"w":…,"mu":…,"sigma":…},…]}`.
    pub fn parse_json(input: &str) -> Result<Self> {
        serde_json::from_str(input).map_err(|e| {
            // serde_json wraps our own validation errors; keep those intact.
            let msg = e.to_string();
            if msg.starts_with("invalid mixture") {
                Error::invalid_mixture(msg.trim_start_matches("invalid mixture: ").to_string())
            } else {
                Error::parse(msg)
            }
        })
    }

    /// Parse either supported format, sniffing JSON by a leading `{`.
    pub fn parse_str(input: &str) -> Result<Self> {
        if input.trim_start().starts_with('{') {
            Self::parse_json(input)
        } else {
            Self::parse_text(input)
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Mixture mean `Σ w_c μ_c`.
    pub fn mean(&self) -> f64 {
        self.components.iter().map(|c| c.weight * c.mean).sum()
    }

    /// Mixture variance `Σ w_c ((μ_c − μ̄)² + σ_c²)`; always positive.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.components
            .iter()
            .map(|c| c.weight * ((c.mean - mean).powi(2) + c.stddev * c.stddev))
            .sum()
    }

    /// A copy translated by `delta` (component means become `μ_c − delta`).
    pub fn shifted(&self, delta: f64) -> Gmm {
        let components = self
            .components
            .iter()
            .map(|c| Component::new(c.weight, c.mean - delta, c.stddev))
            .collect();
        Gmm { components }
    }

    /// Log-density at `x`, evaluated with log-sum-exp stabilization; finite
    /// for every finite `x`.
    pub fn log_pdf(&self, x: f64) -> f64 {
        let term = |c: &Component| {
            let z = (x - c.mean) / c.stddev;
            c.weight.ln() - c.stddev.ln() - 0.5 * TAU.ln() - 0.5 * z * z
        };
        let max = self
            .components
            .iter()
            .map(term)
            .fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let sum: f64 = self.components.iter().map(|c| (term(c) - max).exp()).sum();
        max + sum.ln()
    }

    /// Density at `x`.
    pub fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }

    /// Draw `n` samples deterministically from the given seed.
    ///
    /// The generator is ChaCha8 seeded with `seed`. Each sample consumes
    /// three uniforms: one for cumulative-weight component selection and two
    /// for a Box–Muller standard normal draw
    /// `z = sqrt(−2 ln u₁) · cos(2π u₂)` with `u₁ ∈ (0, 1]`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.draw(&mut rng)).collect()
    }

    /// One draw from the mixture using the supplied generator.
    pub(crate) fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = *self.components.last().expect("nonempty");
        for c in &self.components {
            acc += c.weight;
            if u < acc {
                chosen = *c;
                break;
            }
        }
        let u1: f64 = 1.0 - rng.random::<f64>(); // (0, 1]: keeps ln finite
        let u2: f64 = rng.random();
        let z = (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos();
        chosen.mean + chosen.stddev * z
    }

    /// Raw absolute moment `E[|X − shift|^order]` in closed form.
    ///
    /// The shift is applied as a view over the component means, so scanning
    /// many shift values does not copy the mixture.
    pub fn abs_moment(&self, order: u32, shift: f64) -> Result<f64> {
        let mut sum = KahanSum::new();
        for c in &self.components {
            let m = gaussian_abs_moment(c.mean - shift, c.stddev, order)?;
            sum.add(c.weight * m);
        }
        let value = sum.value();
        if !value.is_finite() {
            return Err(Error::NonFiniteMoment { order });
        }
        Ok(value)
    }
}

// ---------------------------------------------------------------------------
// Single-Gaussian moment machinery.
// ---------------------------------------------------------------------------

/// Half-line moment of the standard normal:
/// `(2π)^{−1/2} ∫_a^∞ x^i exp(−x²/2) dx`.
///
/// Computed bottom-up from
/// `I_i(a) = a^{i−1} φ(a) + (i−1) I_{i−2}(a)` with terminals
/// `I_0(a) = 1 − Φ(a)` and `I_1(a) = φ(a)`. May overflow to a non-finite
/// value for extreme `(i, a)` combinations; callers check.
pub fn std_normal_tail_moment(order: u32, a: f64) -> f64 {
    let table = tail_moment_table(order, a);
    table[order as usize]
}

fn tail_moment_table(order: u32, a: f64) -> Vec<f64> {
    let phi_a = (-0.5 * a * a).exp() / TAU.sqrt();
    let mut table = Vec::with_capacity(order as usize + 1);
    table.push(0.5 * erfc(a * FRAC_1_SQRT_2));
    if order >= 1 {
        table.push(phi_a);
    }
    let mut a_pow = a; // a^{i−1} entering iteration i = 2
    for i in 2..=order as usize {
        table.push(a_pow * phi_a + (i as f64 - 1.0) * table[i - 2]);
        a_pow *= a;
    }
    table
}

/// Raw absolute moment `E[|X|^order]` of `X ~ N(mean, stddev)`.
///
/// Even orders use the direct binomial/double-factorial formula (where the
/// absolute moment coincides with the raw moment `E[X^order]`); odd orders
/// use the binomial sum over half-line moments. Overflow to non-finite
/// intermediates is reported as [`Error::NonFiniteMoment`].
pub fn gaussian_abs_moment(mean: f64, stddev: f64, order: u32) -> Result<f64> {
    if !mean.is_finite() {
        return Err(Error::Domain("mean must be finite"));
    }
    if !stddev.is_finite() || stddev <= 0.0 {
        return Err(Error::Domain("stddev must be positive and finite"));
    }
    let value = if order % 2 == 0 {
        even_abs_moment(mean, stddev, order)
    } else {
        abs_moment_via_tail_sum(mean, stddev, order)
    };
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::NonFiniteMoment { order });
    }
    Ok(value)
}

/// Even-order direct formula:
/// `Σ_{i=0}^{l/2} C(l,2i) μ^{l−2i} σ^{2i} (2i−1)!!`.
/// All terms are non-negative, so no cancellation is possible.
fn even_abs_moment(mean: f64, stddev: f64, order: u32) -> f64 {
    let l = order as i32;
    let mut sum = KahanSum::new();
    let mut double_factorial = 1.0; // (2i − 1)!!
    for i in 0..=(order / 2) as i32 {
        if i > 0 {
            double_factorial *= (2 * i - 1) as f64;
        }
        let term = binomial(order, 2 * i as u32)
            * mean.powi(l - 2 * i)
            * stddev.powi(2 * i)
            * double_factorial;
        sum.add(term);
    }
    sum.value()
}

/// Binomial sum over half-line moments. With `a = μ/σ` and
/// `J_i(−a) = (−1)^i I_i(a)` the split of `E[|X|^l]` at zero gives
///
/// `Σ_{i=0}^{l} C(l,i) μ^{l−i} σ^i (I_i(−a) ∓ J_i(−a))`,
///
/// minus for odd orders (the negative half-line flips sign), plus for even
/// ones (where the sum telescopes back to the plain raw moment). The
/// production path for odd orders; also a consistency cross-check against
/// the even direct formula in tests.
pub(crate) fn abs_moment_via_tail_sum(mean: f64, stddev: f64, order: u32) -> f64 {
    let a = mean / stddev;
    let upper = tail_moment_table(order, -a);
    let lower = tail_moment_table(order, a);
    let odd = order % 2 == 1;
    let l = order as i32;
    let mut sum = KahanSum::new();
    let mut sign = 1.0; // (−1)^i
    for i in 0..=order as usize {
        let j = sign * lower[i];
        let bracket = if odd { upper[i] - j } else { upper[i] + j };
        let term =
            binomial(order, i as u32) * mean.powi(l - i as i32) * stddev.powi(i as i32) * bracket;
        if !term.is_finite() {
            return f64::NAN;
        }
        sum.add(term);
        sign = -sign;
    }
    sum.value()
}

/// Binomial coefficient as f64 via the multiplicative recurrence.
fn binomial(n: u32, k: u32) -> f64 {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    let mut c = 1.0;
    for j in 1..=k {
        c = c * f64::from(n - k + j) / f64::from(j);
    }
    c
}

// ---------------------------------------------------------------------------
// Zero-centered and related moment helpers.
// ---------------------------------------------------------------------------

/// Validates paired weight/sigma slices and returns normalized weights.
pub(crate) fn validate_weights_sigmas(weights: &[f64], sigmas: &[f64]) -> Result<Vec<f64>> {
    if weights.is_empty() || weights.len() != sigmas.len() {
        return Err(Error::invalid_mixture(format!(
            "got {} weights and {} sigmas",
            weights.len(),
            sigmas.len()
        )));
    }
    for (i, (&w, &s)) in weights.iter().zip(sigmas).enumerate() {
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::invalid_mixture(format!(
                "entry {i}: weight {w} must be positive and finite"
            )));
        }
        if !s.is_finite() || s <= 0.0 {
            return Err(Error::invalid_mixture(format!(
                "entry {i}: sigma {s} must be positive and finite"
            )));
        }
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::invalid_mixture(format!(
            "weights sum to {sum}, expected 1"
        )));
    }
    Ok(weights.iter().map(|w| w / sum).collect())
}

/// `E[|Z|^order]` for the standard normal, `2^{l/2} Γ((1+l)/2) / √π`.
/// For even orders this is `(l−1)!!`.
pub fn standard_normal_abs_moment(order: u32) -> f64 {
    ln_standard_normal_abs_moment(f64::from(order)).exp()
}

/// Log of the standard normal absolute moment, kept in log space so bound
/// constants never materialize huge factorials.
pub(crate) fn ln_standard_normal_abs_moment(l: f64) -> f64 {
    0.5 * l * 2.0_f64.ln() + log_gamma_raw((1.0 + l) / 2.0) - 0.5 * PI.ln()
}

/// Even raw moment of a zero-centered mixture:
/// `E[X^order] = z_order · Σ w_i σ_i^order`.
pub fn zero_centered_even_moment(weights: &[f64], sigmas: &[f64], order: u32) -> Result<f64> {
    if order == 0 || order % 2 != 0 {
        return Err(Error::Domain("order must be even and at least 2"));
    }
    let weights = validate_weights_sigmas(weights, sigmas)?;
    let mut sum = KahanSum::new();
    for (w, s) in weights.iter().zip(sigmas) {
        sum.add(w * s.powi(order as i32));
    }
    Ok(standard_normal_abs_moment(order) * sum.value())
}

/// The `order`-th power mean of the sigmas, `(Σ w_i σ_i^order)^{1/order}`;
/// non-decreasing in the order.
pub fn power_mean(weights: &[f64], sigmas: &[f64], order: u32) -> Result<f64> {
    if order == 0 {
        return Err(Error::Domain("power mean order must be at least 1"));
    }
    let weights = validate_weights_sigmas(weights, sigmas)?;
    let mut sum = KahanSum::new();
    for (w, s) in weights.iter().zip(sigmas) {
        sum.add(w * s.powi(order as i32));
    }
    Ok(sum.value().powf(1.0 / f64::from(order)))
}

/// Raw moment of a Rayleigh mixture with scale parameters `sigmas`:
/// `2^{l/2} Γ(1 + l/2) Σ w_i σ_i^l`.
pub fn rayleigh_mixture_raw_moment(weights: &[f64], sigmas: &[f64], order: u32) -> Result<f64> {
    let weights = validate_weights_sigmas(weights, sigmas)?;
    let l = f64::from(order);
    let mut sum = KahanSum::new();
    for (w, s) in weights.iter().zip(sigmas) {
        sum.add(w * s.powi(order as i32));
    }
    Ok((0.5 * l * 2.0_f64.ln() + log_gamma_raw(1.0 + 0.5 * l)).exp() * sum.value())
}

/// Closed-form first absolute moment of a single Gaussian (folded normal
/// mean): `μ(1 − 2Φ(−μ/σ)) + σ sqrt(2/π) exp(−μ²/(2σ²))`.
pub fn gaussian_abs_mean(mean: f64, stddev: f64) -> f64 {
    let a = mean / stddev;
    mean * (1.0 - 2.0 * std_normal_cdf(-a)) + stddev * (2.0 / PI).sqrt() * (-0.5 * a * a).exp()
}
