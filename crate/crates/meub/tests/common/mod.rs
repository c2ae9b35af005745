//! Shared test support: an independent fixed-rule quadrature oracle and
//! seeded random mixture generators.
//!
//! The Gauss-Legendre oracle deliberately shares no code with the library's
//! adaptive Simpson integrator so the two can vouch for each other.

// Each test target compiles this module and uses a different subset of it.
#![allow(dead_code)]

use meub::{Component, Gmm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Integrate `f` over `[a, b]` with `panels` equal panels of the n-point
/// Gauss-Legendre rule.
pub fn gl_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + width * p as f64;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        let mut panel = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            panel += w * f(mid + half * x);
        }
        total += half * panel;
    }
    total
}

/// Differential entropy of a mixture by the Gauss-Legendre oracle.
pub fn gl_entropy(g: &Gmm) -> f64 {
    let (lo, hi) = support_window(g, 14.0);
    gl_integrate(
        |x| {
            let lp = g.log_pdf(x);
            let p = lp.exp();
            if p == 0.0 {
                0.0
            } else {
                -p * lp
            }
        },
        lo,
        hi,
        256,
        40,
    )
}

/// Raw absolute moment of a mixture by the Gauss-Legendre oracle.
pub fn gl_abs_moment(g: &Gmm, order: u32, shift: f64) -> f64 {
    let (lo, hi) = support_window(g, 14.0);
    gl_integrate(
        |x| (x - shift).abs().powi(order as i32) * g.pdf(x),
        lo.min(shift),
        hi.max(shift),
        256,
        40,
    )
}

fn support_window(g: &Gmm, tail_sigmas: f64) -> (f64, f64) {
    let lo = g
        .components()
        .iter()
        .map(|c| c.mean - tail_sigmas * c.stddev)
        .fold(f64::INFINITY, f64::min);
    let hi = g
        .components()
        .iter()
        .map(|c| c.mean + tail_sigmas * c.stddev)
        .fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// A random mixture with up to `max_components` components, means in
/// [-3, 3], stddevs in [0.1, 3], and normalized U(0,1) weights.
pub fn random_gmm(rng: &mut ChaCha8Rng, max_components: u32) -> Gmm {
    let k = rng.random_range(1..=max_components);
    let mut components = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let mean = rng.random_range(-3.0..3.0);
        let stddev = rng.random_range(0.1..3.0);
        let weight: f64 = rng.random_range(1e-3..1.0);
        components.push(Component::new(weight, mean, stddev));
    }
    let total: f64 = components.iter().map(|c| c.weight).sum();
    for c in &mut components {
        c.weight /= total;
    }
    Gmm::new(components).expect("generated mixture is valid")
}

/// A random zero-centered mixture with stddevs in [0.05, 3].
pub fn random_zero_centered(rng: &mut ChaCha8Rng, max_components: u32) -> (Vec<f64>, Vec<f64>) {
    let k = rng.random_range(1..=max_components);
    let mut weights = Vec::with_capacity(k as usize);
    let mut sigmas = Vec::with_capacity(k as usize);
    for _ in 0..k {
        weights.push(rng.random_range(1e-3..1.0));
        sigmas.push(rng.random_range(0.05..3.0));
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    (weights, sigmas)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Relative closeness against a scale floor of 1.
pub fn rel_err(actual: f64, expected: f64) -> f64 {
    (actual - expected).abs() / 1.0_f64.max(expected.abs())
}
