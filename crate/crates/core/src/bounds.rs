//! Closed-form asymptotic precision bounds and benchmark limits for phase
//! and frequency estimation, plus the principal-branch Lambert W function
//! they depend on.

use crate::error::{Error, Result};
use crate::reservoir::ReservoirCoeffs;

/// Inputs shared by the asymptotic bound evaluations.
#[derive(Debug, Clone, Copy)]
pub struct BoundInputs {
    /// Mean probe photon number N̄ > 0.
    pub nbar: f64,
    /// Reservoir coefficients; ξ enters through arg M.
    pub coeffs: ReservoirCoeffs,
}

impl BoundInputs {
    pub fn new(nbar: f64, coeffs: ReservoirCoeffs) -> Result<Self> {
        if nbar <= 0.0 {
            return Err(Error::InvalidParams(format!("nbar = {nbar} must be > 0")));
        }
        Ok(Self { nbar, coeffs })
    }

    /// 1 + 2N - 2|M|cos ξ, the scaling factor of the squeezed-vacuum bounds.
    /// Positive for every physical reservoir.
    fn scaling_factor(&self) -> Result<f64> {
        let factor = 1.0 + 2.0 * self.coeffs.n_big - 2.0 * self.coeffs.m_cos_xi();
        if factor <= 0.0 {
            return Err(Error::DegenerateBound { factor });
        }
        Ok(factor)
    }
}

/// Asymptotic phase bound for optimal (squeezed-vacuum) probes:
/// Δφ = √[(1-η)(1 + 2N - 2|M|cos ξ)/(4ηN̄)].
pub fn phase_bound_general(inputs: &BoundInputs, eta: f64) -> Result<f64> {
    let factor = inputs.scaling_factor()?;
    Ok(((1.0 - eta) * factor / (4.0 * eta * inputs.nbar)).sqrt())
}

/// Asymptotic phase bound for coherent probes (ξ = 0):
/// Δφ = √[(1 + 2(1-η)(N - |M|))/(4ηN̄)].
pub fn phase_bound_coherent(inputs: &BoundInputs, eta: f64) -> Result<f64> {
    let c = &inputs.coeffs;
    let numer = 1.0 + 2.0 * (1.0 - eta) * (c.n_big - c.m_big.norm());
    if numer <= 0.0 {
        return Err(Error::DegenerateBound { factor: numer });
    }
    Ok((numer / (4.0 * eta * inputs.nbar)).sqrt())
}

/// An optimized frequency precision: the product Δω²·T and the interrogation
/// time that attains it.
#[derive(Debug, Clone, Copy)]
pub struct FrequencyBound {
    pub var_t_product: f64,
    pub t_opt: f64,
}

/// Asymptotic frequency bound for optimal (squeezed-vacuum) probes under
/// Γ(t) = Γ·t^β:
///
///   Δω²T = ¼·[((1+β)/2β)^β · Γ(1+2N-2|M|cos ξ)/N̄^{2β+1}]^{1/(β+1)},
///
/// where the β = 0 branch uses the continuous limit ((1+β)/2β)^β → 1, which
/// reconciles the two branches of the optimal-time formula.
pub fn freq_bound_optimal(inputs: &BoundInputs, gamma: f64, beta: u32) -> Result<FrequencyBound> {
    let factor = inputs.scaling_factor()?;
    let nbar = inputs.nbar;
    let b = beta as f64;
    let exponent = 1.0 / (b + 1.0);
    let beta_prefactor = if beta == 0 { 1.0 } else { ((1.0 + b) / (2.0 * b)).powf(b) };
    let var_t_product =
        0.25 * (beta_prefactor * gamma * factor / nbar.powf(2.0 * b + 1.0)).powf(exponent);
    let t_opt = if beta == 0 {
        1.0 / (gamma * (nbar * factor).sqrt())
    } else {
        ((1.0 + b) / (2.0 * b) / (gamma * factor * nbar)).powf(exponent)
    };
    Ok(FrequencyBound { var_t_product, t_opt })
}

/// Asymptotic frequency bound for coherent probes (ξ = 0):
///
///   Δω²T = Γ^{1/(β+1)}·(|M|-N)/(2N̄)·[1+(1+β)W(g_β)]^{β/(β+1)}/((1+β)W(g_β)),
///   t_opt = [(1 + (1+β)W(g_β))/Γ]^{1/(β+1)},
///
/// with g_β = e^{-1/(β+1)}/(1+β) · 2(|M|-N)/(2(N-|M|)+1). The |M| = N case
/// (in particular a vacuum or plain thermal reservoir) is the g → 0 limit,
/// Δω²T = (eΓ)^{1/(β+1)}/(4N̄) with t_opt = Γ^{-1/(β+1)}.
pub fn freq_bound_coherent(inputs: &BoundInputs, gamma: f64, beta: u32) -> Result<FrequencyBound> {
    let c = &inputs.coeffs;
    let nbar = inputs.nbar;
    let b = beta as f64;
    let exponent = 1.0 / (b + 1.0);
    let excess = c.m_big.norm() - c.n_big;
    if excess == 0.0 {
        return Ok(FrequencyBound {
            var_t_product: (std::f64::consts::E * gamma).powf(exponent) / (4.0 * nbar),
            t_opt: gamma.powf(-exponent),
        });
    }
    let denom = 2.0 * (c.n_big - c.m_big.norm()) + 1.0;
    if denom <= 0.0 {
        return Err(Error::DegenerateBound { factor: denom });
    }
    let g = (-exponent).exp() / (1.0 + b) * 2.0 * excess / denom;
    let w = lambert_w0(g)?;
    let one_plus = 1.0 + (1.0 + b) * w;
    Ok(FrequencyBound {
        var_t_product: gamma.powf(exponent) * excess / (2.0 * nbar) * one_plus.powf(b * exponent)
            / ((1.0 + b) * w),
        t_opt: (one_plus / gamma).powf(exponent),
    })
}

/// Asymptotic gain Δω²_sq/Δω²_0 = 2(|M|-N)/(e·W(g₀)) of a squeezed reservoir
/// over plain loss in Markovian coherent-state frequency estimation.
pub fn coherent_squeezing_gain(coeffs: &ReservoirCoeffs) -> Result<f64> {
    let excess = coeffs.m_big.norm() - coeffs.n_big;
    if excess == 0.0 {
        return Ok(1.0);
    }
    let denom = 2.0 * (coeffs.n_big - coeffs.m_big.norm()) + 1.0;
    if denom <= 0.0 {
        return Err(Error::DegenerateBound { factor: denom });
    }
    let g0 = (-1.0f64).exp() * 2.0 * excess / denom;
    Ok(2.0 * excess / (std::f64::consts::E * lambert_w0(g0)?))
}

/// Benchmark limits quoted alongside the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceLimit {
    /// Dissipation-free optimal phase estimation: 1/√(8N̄(N̄+1)).
    NoiselessPhase,
    /// Infinitely squeezed reservoir, phase: √(1+η²)/(4ηN̄).
    InfiniteSqueezingPhase,
    /// Dissipation-free frequency estimation: Δω²T = 1/(8TN̄(N̄+1)), t_opt = T.
    NoiselessFrequency,
    /// Infinitely squeezed reservoir, frequency.
    InfiniteSqueezingFrequency,
}

/// Extra knobs needed by some reference limits.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReferenceInputs {
    pub eta: Option<f64>,
    pub total_time: Option<f64>,
    pub gamma: Option<f64>,
    pub beta: Option<u32>,
}

/// Evaluates the requested benchmark limit at mean photon number `nbar`.
pub fn reference_limits(kind: ReferenceLimit, nbar: f64, extra: &ReferenceInputs) -> Result<f64> {
    match kind {
        ReferenceLimit::NoiselessPhase => Ok(1.0 / (8.0 * nbar * (nbar + 1.0)).sqrt()),
        ReferenceLimit::InfiniteSqueezingPhase => {
            let eta = extra.eta.ok_or_else(|| Error::InvalidParams("eta required".into()))?;
            Ok((1.0 + eta * eta).sqrt() / (4.0 * eta * nbar))
        }
        ReferenceLimit::NoiselessFrequency => {
            let t = extra
                .total_time
                .ok_or_else(|| Error::InvalidParams("total_time required".into()))?;
            Ok(1.0 / (8.0 * t * nbar * (nbar + 1.0)))
        }
        ReferenceLimit::InfiniteSqueezingFrequency => {
            let gamma =
                extra.gamma.ok_or_else(|| Error::InvalidParams("gamma required".into()))?;
            let beta = extra.beta.ok_or_else(|| Error::InvalidParams("beta required".into()))?;
            if beta == 0 {
                let e2 = std::f64::consts::E * std::f64::consts::E;
                Ok(gamma * (1.0 + e2) / (16.0 * nbar * nbar))
            } else {
                let b = beta as f64;
                Ok(gamma.powf(1.0 / (b + 1.0)) / (16.0 * nbar * nbar)
                    * (b / (1.0 + b)).powf(1.0 / (b + 1.0))
                    * (1.0 + (2.0 / b).exp()))
            }
        }
    }
}

/// Principal-branch Lambert W: the solution of W·e^W = x for x ≥ -1/e.
///
/// Halley iteration from a piecewise initial guess; the residual satisfies
/// |W e^W - x| ≤ 1e-13·max(1, |x|).
pub fn lambert_w0(x: f64) -> Result<f64> {
    let inv_e = (-1.0f64).exp();
    if x < -inv_e {
        return Err(Error::DomainError(format!("lambert_w0 requires x >= -1/e, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut w = if x < -0.25 {
        // Series around the branch point -1/e: W ≈ -1 + p - p²/3, p = √(2(1+ex)).
        let p = (2.0 * (1.0 + std::f64::consts::E * x)).sqrt();
        -1.0 + p - p * p / 3.0
    } else if x < 2.0 {
        // ln(1+x) has the right slope at 0 and stays within the basin.
        (1.0 + x).ln()
    } else {
        // Asymptotic: W ≈ ln x - ln ln x.
        let l = x.ln();
        l - l.ln()
    };
    for _ in 0..50 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= 1e-13 * x.abs().max(1.0) {
            return Ok(w);
        }
        // Halley step.
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        w -= f / denom;
        if w < -1.0 {
            w = -1.0 + 1e-12;
        }
    }
    let residual = (w * w.exp() - x).abs();
    if residual <= 1e-13 * x.abs().max(1.0) {
        Ok(w)
    } else {
        Err(Error::StepFailure { residual, steps: 50 })
    }
}
