//! The general Gaussian dissipative channel: squeezed-thermal reservoir
//! coefficients, power-law dissipation profiles Γ(t) = Γ·t^β, and the
//! closed-form action on Gaussian moments.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;
use crate::state::{CovMatrix, GaussianState};

/// Squeezed-thermal reservoir parameterization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirSpec {
    /// Mean thermal occupation N_th ≥ 0.
    pub n_th: f64,
    /// Mean squeezed-boson number N_sq ≥ 0.
    pub n_sq: f64,
    /// Reservoir squeezing angle ξ (radians).
    pub xi: f64,
}

impl ReservoirSpec {
    pub fn new(n_th: f64, n_sq: f64, xi: f64) -> Result<Self> {
        if n_th < 0.0 || n_sq < 0.0 {
            return Err(Error::InvalidParams(format!(
                "reservoir occupations must be >= 0, got n_th = {n_th}, n_sq = {n_sq}"
            )));
        }
        Ok(Self { n_th, n_sq, xi })
    }

    pub fn vacuum() -> Self {
        Self { n_th: 0.0, n_sq: 0.0, xi: 0.0 }
    }

    /// Purely squeezed reservoir: N_th = 0, ξ = 0.
    pub fn squeezed(n_sq: f64) -> Self {
        Self { n_th: 0.0, n_sq, xi: 0.0 }
    }
}

/// Liouvillian coefficients (N, M) of the reservoir coupling.
///
/// N and M are not independent: |M|² = N(N+1) - N_th(N_th+1). The thermal
/// occupation is carried along so the identity stays checkable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirCoeffs {
    pub n_big: f64,
    pub m_big: Complex64,
    pub n_th: f64,
}

impl ReservoirCoeffs {
    /// Vacuum reservoir: N = M = 0.
    pub fn vacuum() -> Self {
        Self { n_big: 0.0, m_big: Complex64::new(0.0, 0.0), n_th: 0.0 }
    }

    /// Residual of |M|² = N(N+1) - N_th(N_th+1), relative to N(N+1) + 1.
    pub fn identity_residual(&self) -> f64 {
        let lhs = self.m_big.norm_sqr();
        let rhs = self.n_big * (self.n_big + 1.0) - self.n_th * (self.n_th + 1.0);
        (lhs - rhs).abs() / (self.n_big * (self.n_big + 1.0) + 1.0)
    }

    /// |M| cos ξ, the projection entering the asymptotic bounds.
    pub fn m_cos_xi(&self) -> f64 {
        self.m_big.re
    }
}

/// N = N_th(2N_sq + 1) + N_sq and M = (2N_th + 1)√(N_sq(N_sq+1)) e^{iξ}.
pub fn derive_coeffs(spec: &ReservoirSpec) -> ReservoirCoeffs {
    let n_big = spec.n_th * (2.0 * spec.n_sq + 1.0) + spec.n_sq;
    let m_mag = (2.0 * spec.n_th + 1.0) * (spec.n_sq * (spec.n_sq + 1.0)).sqrt();
    ReservoirCoeffs {
        n_big,
        m_big: Complex64::from_polar(m_mag, spec.xi),
        n_th: spec.n_th,
    }
}

/// Power-law coupling Γ(t) = Γ·t^β with integer β ≥ 0 (β = 0 is Markovian).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationProfile {
    /// Coupling constant Γ ≥ 0, units time^{-(β+1)}.
    pub gamma: f64,
    /// Power-law exponent.
    pub beta: u32,
}

impl DissipationProfile {
    pub fn new(gamma: f64, beta: u32) -> Result<Self> {
        if gamma < 0.0 || !gamma.is_finite() {
            return Err(Error::InvalidParams(format!("gamma = {gamma} must be >= 0")));
        }
        Ok(Self { gamma, beta })
    }

    pub fn markovian(gamma: f64) -> Result<Self> {
        Self::new(gamma, 0)
    }

    /// ∫₀ᵗ Γ(s) ds = Γ t^{β+1}/(β+1), the accumulated damping exponent.
    pub fn damping_exponent(&self, t: f64) -> f64 {
        self.gamma * t.powi(self.beta as i32 + 1) / (self.beta as f64 + 1.0)
    }

    /// Γ(t) itself.
    pub fn coupling(&self, t: f64) -> f64 {
        self.gamma * t.powi(self.beta as i32)
    }
}

/// η(t) = exp[-∫₀ᵗ Γ(s) ds] in closed form.
pub fn eta_at(profile: &DissipationProfile, t: f64) -> f64 {
    (-profile.damping_exponent(t)).exp()
}

/// Absolute tolerance for the C-integral quadrature.
pub const C_INTEGRAL_TOL: f64 = 1e-12;

/// C(t, ω) = ∫₀ᵗ exp[∫₀ˢ Γ(τ)dτ] Γ(s) e^{2iωs} ds.
///
/// The Markovian ω = 0 case has the closed form e^{Γt} - 1; everything else
/// goes through adaptive quadrature at absolute tolerance 1e-12.
pub fn c_integral(profile: &DissipationProfile, t: f64, omega: f64) -> Result<Complex64> {
    if t < 0.0 {
        return Err(Error::DomainError(format!("t = {t} must be >= 0")));
    }
    if t == 0.0 || profile.gamma == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if profile.beta == 0 && omega == 0.0 {
        return Ok(Complex64::new((profile.gamma * t).exp_m1(), 0.0));
    }
    quad::integrate(
        |s| {
            Complex64::new(0.0, 2.0 * omega * s).exp()
                * (profile.damping_exponent(s).exp() * profile.coupling(s))
        },
        0.0,
        t,
        C_INTEGRAL_TOL,
    )
}

/// η·C = ∫₀ᵗ exp[-(∫ₛᵗ Γ)] Γ(s) e^{2iωs} ds, the combination that actually
/// enters the output moments. Unlike C itself it never overflows: the
/// integrand is bounded by Γ(s). At ω = 0 it equals 1 - η exactly.
pub fn eta_c_integral(profile: &DissipationProfile, t: f64, omega: f64) -> Result<Complex64> {
    if t < 0.0 {
        return Err(Error::DomainError(format!("t = {t} must be >= 0")));
    }
    if t == 0.0 || profile.gamma == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if omega == 0.0 {
        return Ok(Complex64::new(-(-profile.damping_exponent(t)).exp_m1(), 0.0));
    }
    let g_total = profile.damping_exponent(t);
    quad::integrate(
        |s| {
            Complex64::new(0.0, 2.0 * omega * s).exp()
                * ((profile.damping_exponent(s) - g_total).exp() * profile.coupling(s))
        },
        0.0,
        t,
        C_INTEGRAL_TOL,
    )
}

/// Snapshot of the channel at one interrogation time: dissipation
/// coefficient η, integral C, rotation phase φ, and reservoir coefficients.
#[derive(Debug, Clone, Copy)]
pub struct ChannelAtTime {
    /// Dissipation coefficient η ∈ (0, 1] (η = 0 in the fully thermalized
    /// limit).
    pub eta: f64,
    /// C integral. At ω = 0 it is real and η·C = 1 - η.
    pub c_int: Complex64,
    /// Rotation φ = ωt, or a free phase for phase estimation.
    pub phi: f64,
    pub coeffs: ReservoirCoeffs,
    /// η·C kept separately: C alone overflows once the damping exponent
    /// passes ~700, the product stays O(1).
    eta_c: Complex64,
}

impl ChannelAtTime {
    /// Channel at the ω = 0 operating point. C has the exact antiderivative
    /// exp[∫₀ᵗΓ] - 1 there for every power-law profile, so η·C = 1 - η holds
    /// by construction.
    pub fn at_omega_zero(
        profile: &DissipationProfile,
        t: f64,
        coeffs: ReservoirCoeffs,
        phi: f64,
    ) -> Self {
        let g = profile.damping_exponent(t);
        let eta = (-g).exp();
        Self {
            eta,
            c_int: Complex64::new(g.exp_m1(), 0.0),
            phi,
            coeffs,
            eta_c: Complex64::new(-(-g).exp_m1(), 0.0),
        }
    }

    /// Channel specified directly by a loss coefficient η (ω = 0 semantics).
    pub fn from_eta(eta: f64, coeffs: ReservoirCoeffs, phi: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidParams(format!("eta = {eta} must be in (0, 1]")));
        }
        Ok(Self {
            eta,
            c_int: Complex64::new((1.0 - eta) / eta, 0.0),
            phi,
            coeffs,
            eta_c: Complex64::new(1.0 - eta, 0.0),
        })
    }

    /// Channel at finite detuning ω with φ = ωt.
    pub fn at_omega(
        profile: &DissipationProfile,
        t: f64,
        omega: f64,
        coeffs: ReservoirCoeffs,
    ) -> Result<Self> {
        let eta = eta_at(profile, t);
        let eta_c = eta_c_integral(profile, t, omega)?;
        Ok(Self { eta, c_int: eta_c / eta, phi: omega * t, coeffs, eta_c })
    }

    /// Channel assembled from raw parts (mainly for tests of inconsistent
    /// inputs).
    pub fn from_parts(eta: f64, c_int: Complex64, phi: f64, coeffs: ReservoirCoeffs) -> Self {
        Self { eta, c_int, phi, coeffs, eta_c: eta * c_int }
    }

    /// Same channel with a different rotation phase.
    pub fn with_phi(&self, phi: f64) -> Self {
        Self { phi, ..*self }
    }

    /// η·C.
    pub fn eta_c(&self) -> Complex64 {
        self.eta_c
    }

    /// |η·C - (1 - η)| — must vanish at ω = 0.
    pub fn omega_zero_residual(&self) -> f64 {
        (self.eta_c - Complex64::new(1.0 - self.eta, 0.0)).norm()
    }
}

/// Rotation R(φ) = [[cos φ, sin φ], [-sin φ, cos φ]] applied to a 2-vector,
/// matching x̄' = √η(cos φ x̄₀ + sin φ p̄₀), p̄' = √η(-sin φ x̄₀ + cos φ p̄₀).
fn rotate_vec(v: [f64; 2], phi: f64) -> [f64; 2] {
    let (s, c) = phi.sin_cos();
    [c * v[0] + s * v[1], -s * v[0] + c * v[1]]
}

/// Propagates Gaussian moments through the channel:
/// d̄' = √η R(φ) d̄₀ and Σ' = η(Σ_φ - Σ_N) + Σ_N + Σ_M, with
/// Σ_N = (N + ½)·I, Σ_φ = R(φ) Σ₀ R(φ)ᵀ and
/// Σ_M = [[Re ζ, Im ζ], [Im ζ, -Re ζ]] for ζ = η M C e^{-2iφ}.
pub fn apply_channel(state: &GaussianState, ch: &ChannelAtTime) -> Result<GaussianState> {
    let eta = ch.eta;
    let n_half = ch.coeffs.n_big + 0.5;
    let sigma_phi = state.sigma.rotate(ch.phi);
    let zeta = ch.coeffs.m_big * ch.eta_c() * Complex64::from_polar(1.0, -2.0 * ch.phi);
    let sigma = CovMatrix::new(
        eta * (sigma_phi.xx - n_half) + n_half + zeta.re,
        eta * sigma_phi.xp + zeta.im,
        eta * (sigma_phi.pp - n_half) + n_half - zeta.re,
    );
    let det = sigma.det();
    if det < 0.25 - 1e-9 {
        return Err(Error::NonPhysicalOutput { det });
    }
    let sqrt_eta = eta.sqrt();
    let r = rotate_vec(state.dbar, ch.phi);
    Ok(GaussianState { dbar: [sqrt_eta * r[0], sqrt_eta * r[1]], sigma })
}
