//! Mittag-Leffler functions E_α(z) and E_{α,β}(z) for real arguments.
//!
//! E_{α,β}(z) = Σ_{k≥0} z^k / Γ(αk + β), restricted here to 0 < α ≤ 1 and β > 0.
//!
//! Evaluation is split into three regimes, selected by [`regime`]:
//!
//! * **Series** for |z| ≤ [`SERIES_RADIUS`] and for every z > 0 (no
//!   cancellation on the positive axis). Terms are summed until they fall
//!   below the working precision relative to the partial sum.
//! * **Asymptotic** for z ≤ −z_big(α), with
//!   z_big(α) = max([`ASYMPTOTIC_DECAY_EXPONENT`]^α, [`ASYMPTOTIC_FLOOR`]).
//!   The expansion −Σ_{k≥1} z^{−k}/Γ(β − αk) has an optimal-truncation error
//!   of order exp(−|z|^{1/α}), so the threshold keeps it below 1e−20.
//! * **Integral** in between, using the Laplace-type representation
//!   E_{α,β}(−x) = ∫₀^∞ K_{α,β}(r; x) dr with a kernel that is positive for
//!   β = 1 (complete monotonicity), integrated by adaptive Gauss-Kronrod
//!   quadrature with the Lorentzian peak of the kernel resolved explicitly.
//!
//! α = 1, β = 1 is routed to `exp` directly. Other β are brought into the
//! range the integral covers by the recurrence E_{α,β}(z) = 1/Γ(β) + z E_{α,α+β}(z).

use std::f64::consts::PI;

use thiserror::Error;

use crate::gamma::{gamma, ln_gamma};
use crate::quad;

/// Largest |z| handled by the power series on the negative axis.
pub const SERIES_RADIUS: f64 = 1.0;

/// The asymptotic expansion is used once |z|^{1/α} exceeds this value.
pub const ASYMPTOTIC_DECAY_EXPONENT: f64 = 50.0;

/// Lower bound on the asymptotic threshold, so that the leading terms
/// Γ(αk)/|z|^k are already small for tiny α.
pub const ASYMPTOTIC_FLOOR: f64 = 10.0;

/// Absolute tolerance requested from the quadrature.
const QUAD_TOL: f64 = 1e-15;

/// Cut-off of the integral: exp(−r^{1/α}) < 1e−20 beyond r = 46^α.
const KERNEL_CUTOFF_EXPONENT: f64 = 46.0;

const MAX_SERIES_TERMS: usize = 1_000_000;
const MAX_ASYMPTOTIC_TERMS: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MlError {
    #[error("mittag-leffler parameter {name} = {value} is outside {range}")]
    Domain { name: &'static str, value: f64, range: &'static str },
    #[error(
        "mittag-leffler evaluation did not converge at alpha = {alpha}, beta = {beta}, z = {z} ({regime:?} regime)"
    )]
    AccuracyLoss { alpha: f64, beta: f64, z: f64, regime: Regime },
}

/// Evaluation strategy chosen for a given argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Exponential,
    Series,
    Integral,
    Asymptotic,
}

/// Validated (α, β) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    alpha: f64,
    beta: f64,
}

impl MlParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, MlError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(MlError::Domain { name: "alpha", value: alpha, range: "(0, 1]" });
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(MlError::Domain { name: "beta", value: beta, range: "(0, inf)" });
        }
        Ok(Self { alpha, beta })
    }

    /// One-parameter form, β = 1.
    pub fn one(alpha: f64) -> Result<Self, MlError> {
        Self::new(alpha, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn eval(&self, z: f64) -> Result<f64, MlError> {
        if !z.is_finite() {
            return Err(MlError::Domain { name: "z", value: z, range: "finite reals" });
        }
        eval_checked(self.alpha, self.beta, z)
    }
}

/// E_α(z).
pub fn ml_one(alpha: f64, z: f64) -> Result<f64, MlError> {
    ml_two(alpha, 1.0, z)
}

/// E_{α,β}(z).
pub fn ml_two(alpha: f64, beta: f64, z: f64) -> Result<f64, MlError> {
    MlParams::new(alpha, beta)?.eval(z)
}

/// Threshold z_big(α): the asymptotic expansion is used for z ≤ −z_big.
pub fn asymptotic_threshold(alpha: f64) -> f64 {
    ASYMPTOTIC_DECAY_EXPONENT.powf(alpha).max(ASYMPTOTIC_FLOOR)
}

/// Regime used to evaluate E_{α,β}(z); assumes validated parameters.
pub fn regime(alpha: f64, beta: f64, z: f64) -> Regime {
    if alpha == 1.0 && beta == 1.0 {
        Regime::Exponential
    } else if z >= -SERIES_RADIUS {
        Regime::Series
    } else if -z >= asymptotic_threshold(alpha) {
        Regime::Asymptotic
    } else {
        Regime::Integral
    }
}

fn eval_checked(alpha: f64, beta: f64, z: f64) -> Result<f64, MlError> {
    let regime = regime(alpha, beta, z);
    let value = match regime {
        Regime::Exponential => Some(z.exp()),
        Regime::Series => series(alpha, beta, z),
        Regime::Asymptotic => asymptotic(alpha, beta, z),
        Regime::Integral => intermediate(alpha, beta, -z),
    };
    match value {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(MlError::AccuracyLoss { alpha, beta, z, regime }),
    }
}

/// sin(πy) with exact argument reduction, exactly zero at the integers.
fn sin_pi(y: f64) -> f64 {
    let r = y - 2.0 * (0.5 * y).floor();
    // r in [0, 2)
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    let (s, r) = if r > 1.0 { (-1.0, r - 1.0) } else { (1.0, r) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    s * (PI * r).sin()
}

/// 1/Γ(y) for any real y, zero at the non-positive integers.
pub(crate) fn rgamma(y: f64) -> f64 {
    if y >= 0.5 {
        if y < 170.0 {
            1.0 / gamma(y)
        } else {
            (-ln_gamma(y)).exp()
        }
    } else {
        let s = sin_pi(y);
        if s == 0.0 {
            return 0.0;
        }
        let w = 1.0 - y;
        if w < 170.0 {
            s * gamma(w) / PI
        } else {
            s.signum() * (ln_gamma(w) + s.abs().ln() - PI.ln()).exp()
        }
    }
}

fn series(alpha: f64, beta: f64, z: f64) -> Option<f64> {
    if z == 0.0 {
        return Some(rgamma(beta));
    }
    let lnz = z.abs().ln();
    let negative = z < 0.0;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut zk = 1.0f64;
    for k in 0..MAX_SERIES_TERMS {
        let arg = alpha * k as f64 + beta;
        let term = if zk.is_finite() && zk.abs() > 1e-290 && arg < 170.0 {
            zk * rgamma(arg)
        } else {
            let mag = (k as f64 * lnz - ln_gamma(arg)).exp();
            if negative && k % 2 == 1 {
                -mag
            } else {
                mag
            }
        };
        // Kahan summation keeps the alternating tail clean.
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if !sum.is_finite() {
            return None;
        }
        // Past the Gamma minimum the terms decrease monotonically in magnitude.
        if arg > 2.0 && term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            let ratio_next = lnz * 1.0 - alpha * (arg + alpha).ln();
            if ratio_next < 0.0 {
                return Some(sum);
            }
        }
        zk *= z;
    }
    None
}

fn asymptotic(alpha: f64, beta: f64, z: f64) -> Option<f64> {
    let x = -z;
    let lnx = x.ln();
    let mut sum = 0.0f64;
    let mut prev_envelope = f64::INFINITY;
    for k in 1..MAX_ASYMPTOTIC_TERMS {
        let kf = k as f64;
        let y = beta - alpha * kf;
        // −z^{−k}/Γ(y) with z = −x: −(−1)^k x^{−k}/Γ(y)
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        let term = sign * rgamma(y) * (-kf * lnx).exp();
        sum += term;
        // |1/Γ(y)| ≤ Γ(1−y)/π for y < 0.5
        let envelope = if y < 0.5 { (ln_gamma(1.0 - y) - kf * lnx).exp() / PI } else { 1.2 * (-kf * lnx).exp() };
        if envelope <= 1e-17 * sum.abs().max(1e-300) {
            return Some(sum);
        }
        if y < 0.5 && envelope > prev_envelope {
            // diverging before reaching working precision
            return None;
        }
        prev_envelope = envelope;
    }
    None
}

/// E_{α,β}(−x) for SERIES_RADIUS < x < z_big(α).
fn intermediate(alpha: f64, beta: f64, x: f64) -> Option<f64> {
    if alpha == 1.0 {
        return intermediate_unit_alpha(beta, x);
    }
    if beta >= 1.0 + alpha {
        // E_{α,β}(z) = (E_{α,β−α}(z) − 1/Γ(β−α)) / z
        let lower = intermediate(alpha, beta - alpha, x)?;
        return Some((lower - rgamma(beta - alpha)) / -x);
    }
    laplace_integral(alpha, beta, x)
}

/// Integral representation of E_{α,β}(−x), valid for 0 < α < 1, 0 < β < 1 + α:
///
/// E_{α,β}(−x) = 1/(απ) ∫₀^∞ r^{(1−β)/α} e^{−r^{1/α}}
///               (r sin(π(1−β)) + x sin(π(1−β+α))) / (r² + 2rx cos(απ) + x²) dr
fn laplace_integral(alpha: f64, beta: f64, x: f64) -> Option<f64> {
    let c = (alpha * PI).cos();
    let s_alpha = (alpha * PI).sin();
    let s1 = sin_pi(1.0 - beta);
    let s2 = sin_pi(1.0 - beta + alpha);
    let e = (1.0 - beta) / alpha;
    // r = w^q turns r^e dr into q w^{q(1+e)−1} dw: q = 1/(1+e) cancels an
    // integrable singularity (e < 0); an integer q smooths a fractional
    // power (e > 0). Integer e needs nothing.
    let q = if e < 0.0 {
        1.0 / (1.0 + e)
    } else if e.fract() != 0.0 {
        (7.0 / (1.0 + e)).ceil()
    } else {
        1.0
    };
    let jacobian_power = q * (1.0 + e) - 1.0;
    let inv_alpha = 1.0 / alpha;
    let scale = 1.0 / (alpha * PI);

    let kernel = |w: f64| -> f64 {
        let r = if q == 1.0 { w } else { w.powf(q) };
        let weight = if q == 1.0 { r.powf(e) } else { q * w.powf(jacobian_power) };
        let decay = (-r.powf(inv_alpha)).exp();
        let num = r * s1 + x * s2;
        let den = r * r + 2.0 * r * x * c + x * x;
        scale * weight * decay * num / den
    };

    let r_max = KERNEL_CUTOFF_EXPONENT.powf(alpha);
    let mut breaks = vec![0.0, 0.5, 1.0, r_max];
    if c < 0.0 {
        // Lorentzian peak of the denominator at r = −x cos(απ), width x sin(απ)
        let peak = -x * c;
        let width = x * s_alpha;
        for p in [peak - 8.0 * width, peak - width, peak, peak + width, peak + 8.0 * width] {
            if p > 0.0 && p < r_max {
                breaks.push(p);
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let points: Vec<f64> = breaks.iter().map(|&r| if q == 1.0 { r } else { r.powf(1.0 / q) }).collect();
    let result = quad::integrate(kernel, &points, QUAD_TOL);
    result.converged.then_some(result.value)
}

/// E_{1,β}(−x), β ≠ 1.
fn intermediate_unit_alpha(beta: f64, x: f64) -> Option<f64> {
    if beta < 1.0 {
        // E_{1,β}(z) = 1/Γ(β) + z E_{1,β+1}(z)
        let upper = intermediate_unit_alpha(beta + 1.0, x)?;
        return Some(rgamma(beta) - x * upper);
    }
    if beta >= 2.0 {
        let lower = if beta - 1.0 == 1.0 { (-x).exp() } else { intermediate_unit_alpha(beta - 1.0, x)? };
        return Some((lower - rgamma(beta - 1.0)) / -x);
    }
    // 1 < β < 2: E_{1,β}(−x) = 1/Γ(β) ∫₀¹ exp(−x(1 − u^{1/(β−1)})) du
    let p = 1.0 / (beta - 1.0);
    let f = |u: f64| (-x * (1.0 - u.powf(p))).exp();
    let mut points = vec![0.0, 0.5, 0.9, 0.99, 1.0];
    // the integrand rises steeply near u = 1 for large x
    let knee = (1.0 - 1.0 / x).max(0.0).powf(beta - 1.0);
    if knee > 0.0 && knee < 1.0 {
        points.push(knee);
        points.sort_by(f64::total_cmp);
        points.dedup();
    }
    let result = quad::integrate(f, &points, QUAD_TOL);
    result.converged.then(|| result.value * rgamma(beta))
}
