//! Quantum Fisher information for single-mode Gaussian states.
//!
//! The central quantity is
//!
//!   F = ½·tr[(Σ⁻¹Σ')²]/(1+μ²) + 2μ'²/(1-μ⁴) + d̄'ᵀ Σ⁻¹ d̄',
//!
//! with μ = ½(det Σ)^{-1/2} the purity and primes denoting derivatives with
//! respect to the estimated parameter. Derivatives are taken by central
//! finite differences with one Richardson extrapolation level; the
//! noncovariant reservoir term makes hand-derived analytics error-prone, and
//! the closed-form moments are smooth enough for ~1e-10 truncation error.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;
use crate::reservoir::{apply_channel, ChannelAtTime, DissipationProfile, ReservoirCoeffs,
                       C_INTEGRAL_TOL};
use crate::state::{purity, CovMatrix, GaussianState};

/// Default finite-difference step for phase derivatives.
pub const FD_STEP: f64 = 1e-5;

/// Which parameter a QFI value refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameter {
    Phase,
    Frequency,
}

/// Computational route that produced a QFI value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    GaussianFormula,
    ExactPure,
    FockOracle,
}

/// First derivatives of the output moments with respect to the estimated
/// parameter, plus the purity derivative, all at the operating point.
#[derive(Debug, Clone, Copy)]
pub struct ParamDerivatives {
    pub d_dbar: [f64; 2],
    pub d_sigma: CovMatrix,
    pub d_mu: f64,
    pub step: f64,
}

/// A QFI value with its provenance.
#[derive(Debug, Clone, Copy)]
pub struct QfiResult {
    pub value: f64,
    pub parameter: Parameter,
    pub at_point: f64,
    pub method: Method,
}

/// Evaluates the Gaussian QFI formula for given output moments and
/// derivatives.
///
/// The 2μ'²/(1-μ⁴) term is 0/0 for unitary evolution of pure states; it is
/// dropped when 1-μ⁴ < 1e-9 and |μ'| < 1e-7, and anything else that close to
/// purity 1 is reported as inconsistent derivatives.
pub fn qfi_gaussian(state: &GaussianState, deriv: &ParamDerivatives) -> Result<f64> {
    let mu = purity(state)?;
    let mu2 = mu * mu;
    let one_minus_mu4 = 1.0 - mu2 * mu2;
    let term_sigma = 0.5 * state.sigma.tr_inv_product_squared(&deriv.d_sigma) / (1.0 + mu2);
    let term_mu = if one_minus_mu4 < 1e-9 {
        if deriv.d_mu.abs() < 1e-7 {
            0.0
        } else {
            return Err(Error::PurityDerivativeSingular {
                one_minus_mu4,
                dmu_abs: deriv.d_mu.abs(),
            });
        }
    } else {
        2.0 * deriv.d_mu * deriv.d_mu / one_minus_mu4
    };
    let term_dbar = state.sigma.inv_quadratic_form(deriv.d_dbar);
    let f = term_sigma + term_mu + term_dbar;
    // Exact algebra keeps F >= 0; clamp rounding noise.
    Ok(if f < 0.0 { 0.0 } else { f })
}

/// Five-point (Richardson-extrapolated central) derivative from samples at
/// ±h and ±h/2.
fn richardson(f_ph: f64, f_mh: f64, f_ph2: f64, f_mh2: f64, h: f64) -> f64 {
    let d_h = (f_ph - f_mh) / (2.0 * h);
    let d_h2 = (f_ph2 - f_mh2) / h;
    (4.0 * d_h2 - d_h) / 3.0
}

/// Output moments and purity of the channel at phase φ.
fn output_at_phi(input: &GaussianState, ch: &ChannelAtTime, phi: f64) -> Result<(GaussianState, f64)> {
    let out = apply_channel(input, &ch.with_phi(phi))?;
    let mu = purity(&out)?;
    Ok((out, mu))
}

/// Central finite differences of the full output moments with respect to φ
/// at `phi0`, with C held at its ω = 0 value.
pub fn phase_derivatives(
    input: &GaussianState,
    ch: &ChannelAtTime,
    phi0: f64,
    step: f64,
) -> Result<ParamDerivatives> {
    let h = step;
    let (p1, mu_p1) = output_at_phi(input, ch, phi0 + h)?;
    let (m1, mu_m1) = output_at_phi(input, ch, phi0 - h)?;
    let (p2, mu_p2) = output_at_phi(input, ch, phi0 + 0.5 * h)?;
    let (m2, mu_m2) = output_at_phi(input, ch, phi0 - 0.5 * h)?;
    Ok(ParamDerivatives {
        d_dbar: [
            richardson(p1.dbar[0], m1.dbar[0], p2.dbar[0], m2.dbar[0], h),
            richardson(p1.dbar[1], m1.dbar[1], p2.dbar[1], m2.dbar[1], h),
        ],
        d_sigma: CovMatrix::new(
            richardson(p1.sigma.xx, m1.sigma.xx, p2.sigma.xx, m2.sigma.xx, h),
            richardson(p1.sigma.xp, m1.sigma.xp, p2.sigma.xp, m2.sigma.xp, h),
            richardson(p1.sigma.pp, m1.sigma.pp, p2.sigma.pp, m2.sigma.pp, h),
        ),
        d_mu: richardson(mu_p1, mu_m1, mu_p2, mu_m2, h),
        step: h,
    })
}

/// Phase QFI of the channel output for a given input state, at operating
/// point `phi0` (0 unless overridden).
pub fn qfi_phase(input: &GaussianState, ch: &ChannelAtTime, phi0: f64) -> Result<QfiResult> {
    let out = apply_channel(input, &ch.with_phi(phi0))?;
    let deriv = phase_derivatives(input, ch, phi0, FD_STEP)?;
    Ok(QfiResult {
        value: qfi_gaussian(&out, &deriv)?,
        parameter: Parameter::Phase,
        at_point: phi0,
        method: Method::GaussianFormula,
    })
}

/// Frequency QFI via the reparametrization F_ω = t²·F_φ, with φ₀ = 0 and
/// η = η(t).
pub fn qfi_frequency(
    input: &GaussianState,
    coeffs: ReservoirCoeffs,
    profile: &DissipationProfile,
    t: f64,
) -> Result<QfiResult> {
    if t <= 0.0 {
        return Ok(QfiResult {
            value: 0.0,
            parameter: Parameter::Frequency,
            at_point: 0.0,
            method: Method::GaussianFormula,
        });
    }
    let ch = ChannelAtTime::at_omega_zero(profile, t, coeffs, 0.0);
    let phase = qfi_phase(input, &ch, 0.0)?;
    Ok(QfiResult {
        value: t * t * phase.value,
        parameter: Parameter::Frequency,
        at_point: 0.0,
        method: Method::GaussianFormula,
    })
}

/// Precomputed ω-derivative data of the channel at one interrogation time,
/// shared by every input state.
///
/// The ω-dependence of the output moments has three sources: the rotation
/// R(ωt) of the input moments, the explicit e^{-2iωt} on the reservoir
/// correlation, and the reservoir integral C(ω) itself. All three are
/// differentiated analytically here; only one quadrature,
/// K = ∫₀ᵗ exp[-(∫ₛᵗΓ)] Γ(s)·s·e^{2iωs} ds with d(ηC)/dω = 2iK, is needed.
#[derive(Debug, Clone, Copy)]
pub struct FrequencyContext {
    pub t: f64,
    ch: ChannelAtTime,
    /// dζ/dω of the reservoir correlation ζ(ω) = M·ηC(ω)·e^{-2iωt}.
    zeta_deriv: Complex64,
}

impl FrequencyContext {
    pub fn new(
        coeffs: ReservoirCoeffs,
        profile: &DissipationProfile,
        t: f64,
        omega0: f64,
    ) -> Result<Self> {
        if t <= 0.0 {
            return Err(Error::DomainError(format!("t = {t} must be > 0")));
        }
        let ch = ChannelAtTime::at_omega(profile, t, omega0, coeffs)?;
        let k_int = if profile.gamma == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            let g_total = profile.damping_exponent(t);
            quad::integrate(
                |s| {
                    Complex64::new(0.0, 2.0 * omega0 * s).exp()
                        * ((profile.damping_exponent(s) - g_total).exp()
                            * profile.coupling(s)
                            * s)
                },
                0.0,
                t,
                C_INTEGRAL_TOL,
            )?
        };
        let two_i = Complex64::new(0.0, 2.0);
        let zeta_deriv = coeffs.m_big
            * Complex64::from_polar(1.0, -2.0 * omega0 * t)
            * (two_i * k_int - two_i * t * ch.eta_c());
        Ok(Self { t, ch, zeta_deriv })
    }

    /// The channel snapshot at the operating point.
    pub fn channel(&self) -> &ChannelAtTime {
        &self.ch
    }

    /// Direct frequency QFI of the channel output for `input`: Eq.-style
    /// Gaussian formula with analytic ω-derivatives of all moments.
    pub fn qfi_omega(&self, input: &GaussianState) -> Result<f64> {
        let out = apply_channel(input, &self.ch)?;
        let t = self.t;
        // Rotating parts: d̄ = √η R(ωt) d̄₀ and ηΣ_φ rotate together, so
        // d/dω = t·J acting on the output values, J = [[0,1],[-1,0]].
        let d_dbar = [t * out.dbar[1], -t * out.dbar[0]];
        let n_half = self.ch.coeffs.n_big + 0.5;
        let zeta = self.ch.coeffs.m_big
            * self.ch.eta_c()
            * Complex64::from_polar(1.0, -2.0 * self.ch.phi);
        // ηΣ_φ = Σ_out - (1-η)(N+½)I - Σ_M; its ω-derivative is t(JΣ - ΣJ).
        let rot_xx = out.sigma.xx - (1.0 - self.ch.eta) * n_half - zeta.re;
        let rot_xp = out.sigma.xp - zeta.im;
        let rot_pp = out.sigma.pp - (1.0 - self.ch.eta) * n_half + zeta.re;
        let d_sigma = CovMatrix::new(
            t * 2.0 * rot_xp + self.zeta_deriv.re,
            t * (rot_pp - rot_xx) + self.zeta_deriv.im,
            -t * 2.0 * rot_xp - self.zeta_deriv.re,
        );
        let mu = purity(&out)?;
        // μ' = -½ μ tr(Σ⁻¹Σ').
        let inv = out.sigma.inverse()?;
        let tr = inv.xx * d_sigma.xx + 2.0 * inv.xp * d_sigma.xp + inv.pp * d_sigma.pp;
        let d_mu = -0.5 * mu * tr;
        let deriv = ParamDerivatives { d_dbar, d_sigma, d_mu, step: 0.0 };
        qfi_gaussian(&out, &deriv)
    }
}

/// Direct frequency QFI at operating point ω₀ (0 unless overridden): the
/// full ω-derivative including C(ω), under which the reservoir correlation
/// stays pinned in the lab frame instead of co-rotating with the probe.
pub fn qfi_frequency_direct(
    input: &GaussianState,
    coeffs: ReservoirCoeffs,
    profile: &DissipationProfile,
    t: f64,
    omega0: f64,
) -> Result<QfiResult> {
    let ctx = FrequencyContext::new(coeffs, profile, t, omega0)?;
    Ok(QfiResult {
        value: ctx.qfi_omega(input)?,
        parameter: Parameter::Frequency,
        at_point: omega0,
        method: Method::GaussianFormula,
    })
}

/// Reparametrized and direct frequency QFI side by side.
#[derive(Debug, Clone, Copy)]
pub struct FrequencyDiagnostic {
    /// t²·F_φ with C pinned at ω = 0.
    pub reparametrized: f64,
    /// Direct finite differences in ω, including the ω-dependence of C.
    pub direct: f64,
}

impl FrequencyDiagnostic {
    pub fn relative_deviation(&self) -> f64 {
        (self.direct - self.reparametrized).abs() / self.reparametrized.abs().max(f64::MIN_POSITIVE)
    }
}

/// Diagnostic mode: computes F_ω both ways. The direct route differentiates
/// the full ω-dependence, where the reservoir's C(ω) does not co-rotate with
/// the probe, quantifying how much the two parametrizations differ.
pub fn qfi_frequency_diagnostic(
    input: &GaussianState,
    coeffs: ReservoirCoeffs,
    profile: &DissipationProfile,
    t: f64,
    omega0: f64,
) -> Result<FrequencyDiagnostic> {
    let reparam = qfi_frequency(input, coeffs, profile, t)?.value;
    let h = FD_STEP / t;
    let sample = |omega: f64| -> Result<(GaussianState, f64)> {
        let ch = ChannelAtTime::at_omega(profile, t, omega, coeffs)?;
        let out = apply_channel(input, &ch)?;
        let mu = purity(&out)?;
        Ok((out, mu))
    };
    let (p1, mu_p1) = sample(omega0 + h)?;
    let (m1, mu_m1) = sample(omega0 - h)?;
    let (p2, mu_p2) = sample(omega0 + 0.5 * h)?;
    let (m2, mu_m2) = sample(omega0 - 0.5 * h)?;
    let deriv = ParamDerivatives {
        d_dbar: [
            richardson(p1.dbar[0], m1.dbar[0], p2.dbar[0], m2.dbar[0], h),
            richardson(p1.dbar[1], m1.dbar[1], p2.dbar[1], m2.dbar[1], h),
        ],
        d_sigma: CovMatrix::new(
            richardson(p1.sigma.xx, m1.sigma.xx, p2.sigma.xx, m2.sigma.xx, h),
            richardson(p1.sigma.xp, m1.sigma.xp, p2.sigma.xp, m2.sigma.xp, h),
            richardson(p1.sigma.pp, m1.sigma.pp, p2.sigma.pp, m2.sigma.pp, h),
        ),
        d_mu: richardson(mu_p1, mu_m1, mu_p2, mu_m2, h),
        step: h,
    };
    let at_omega0 = apply_channel(input, &ChannelAtTime::at_omega(profile, t, omega0, coeffs)?)?;
    let direct = qfi_gaussian(&at_omega0, &deriv)?;
    Ok(FrequencyDiagnostic { reparametrized: reparam, direct })
}

/// Closed-form phase QFI for a pure displaced-squeezed input (n̄ squeezed
/// photons out of N̄ total, squeezing and displacement aligned with a ξ = 0
/// reservoir, operating point φ₀ = 0):
///
///   F = 4v²/(1 + u² - v²) + 4η(N̄ - n̄)/(u - v),
///
/// where u = 1 + 2(1-η)N + 2ηn̄ and v = 2(1-η)|M| + 2η√(n̄(n̄+1)). The two
/// denominators are the output variances 2A·2B and 2B, and the formula
/// reduces to 8N̄(N̄+1) at η = 1 and to 4ηN̄/(u-v) for coherent inputs.
pub fn qfi_exact_pure(
    nbar_total: f64,
    nbar_sq: f64,
    eta: f64,
    n_big: f64,
    m_abs: f64,
) -> Result<QfiResult> {
    if nbar_sq > nbar_total {
        return Err(Error::DomainError(format!(
            "squeezed photons {nbar_sq} exceed total {nbar_total}"
        )));
    }
    if nbar_sq < 0.0 {
        return Err(Error::DomainError(format!("nbar_sq = {nbar_sq} must be >= 0")));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::DomainError(format!("eta = {eta} must be in (0, 1]")));
    }
    if m_abs * m_abs > n_big * (n_big + 1.0) * (1.0 + 1e-12) {
        return Err(Error::DomainError(format!(
            "|M|² = {} above N(N+1) = {}",
            m_abs * m_abs,
            n_big * (n_big + 1.0)
        )));
    }
    let w = 1.0 - eta;
    let s_bar = (nbar_sq * (nbar_sq + 1.0)).sqrt();
    let u = 1.0 + 2.0 * w * n_big + 2.0 * eta * nbar_sq;
    let v = 2.0 * w * m_abs + 2.0 * eta * s_bar;
    // u - v loses precision as a direct difference for large n̄; use
    // √(n̄(n̄+1)) - n̄ = n̄/(s̄ + n̄).
    let u_minus_v = if nbar_sq > 0.0 {
        1.0 + 2.0 * w * (n_big - m_abs) - 2.0 * eta * nbar_sq / (s_bar + nbar_sq)
    } else {
        1.0 + 2.0 * w * (n_big - m_abs)
    };
    let denom1 = 1.0 + u_minus_v * (u + v);
    let squeezing_term = 4.0 * v * v / denom1;
    let displacement_term = 4.0 * eta * (nbar_total - nbar_sq) / u_minus_v;
    Ok(QfiResult {
        value: squeezing_term + displacement_term,
        parameter: Parameter::Phase,
        at_point: 0.0,
        method: Method::ExactPure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reservoir::{derive_coeffs, ReservoirSpec};
    use crate::state::{build_state, StateParams};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use num_complex::Complex64;

    fn lossless() -> ChannelAtTime {
        ChannelAtTime::from_eta(1.0, ReservoirCoeffs::vacuum(), 0.0).unwrap()
    }

    #[test]
    fn coherent_lossless_rotation() {
        // F_φ = 4N̄ for a coherent probe under noiseless rotation.
        for &nbar in &[0.5, 1.0, 25.0] {
            let st = build_state(&StateParams::coherent(nbar)).unwrap();
            let f = qfi_phase(&st, &lossless(), 0.0).unwrap();
            assert_relative_eq!(f.value, 4.0 * nbar, max_relative = 1e-10);
        }
    }

    #[test]
    fn squeezed_vacuum_lossless() {
        // F_φ = 8N̄(N̄+1).
        for &nbar in &[1.0, 3.0, 40.0] {
            let st = build_state(&StateParams::squeezed_vacuum(nbar)).unwrap();
            let f = qfi_phase(&st, &lossless(), 0.0).unwrap();
            assert_relative_eq!(f.value, 8.0 * nbar * (nbar + 1.0), max_relative = 1e-9);
        }
    }

    #[test]
    fn zero_derivatives_zero_qfi() {
        let st = GaussianState::vacuum();
        let deriv = ParamDerivatives {
            d_dbar: [0.0, 0.0],
            d_sigma: CovMatrix::new(0.0, 0.0, 0.0),
            d_mu: 0.0,
            step: FD_STEP,
        };
        assert_eq!(qfi_gaussian(&st, &deriv).unwrap(), 0.0);
    }

    #[test]
    fn vacuum_input_is_rotation_invariant_without_loss() {
        let st = GaussianState::vacuum();
        let d = phase_derivatives(&st, &lossless(), 0.0, FD_STEP).unwrap();
        assert_abs_diff_eq!(d.d_dbar[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.d_dbar[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.d_sigma.xx, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.d_sigma.xp, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.d_mu, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn coherent_first_moment_derivative() {
        // d̄' = (0, -√(2N̄η)) for d̄₀ = (√(2N̄), 0) at φ₀ = 0.
        let nbar = 3.0;
        let eta = 0.7;
        let st = build_state(&StateParams::coherent(nbar)).unwrap();
        let ch = ChannelAtTime::from_eta(eta, ReservoirCoeffs::vacuum(), 0.0).unwrap();
        let d = phase_derivatives(&st, &ch, 0.0, FD_STEP).unwrap();
        assert_abs_diff_eq!(d.d_dbar[0], 0.0, epsilon = 1e-11);
        assert_relative_eq!(d.d_dbar[1], -(2.0 * nbar * eta).sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn covariant_sigma_derivative_matches_rotation_generator() {
        // With M = 0 the covariance derivative is the pure rotation
        // generator result η(JΣ₀ - Σ₀J) at φ₀ = 0.
        let params = StateParams::new(Complex64::new(0.0, 0.0), 0.6, 0.0, 0.4).unwrap();
        let st = build_state(&params).unwrap();
        let eta = 0.8;
        let coeffs = derive_coeffs(&ReservoirSpec::new(1.5, 0.0, 0.0).unwrap());
        let ch = ChannelAtTime::from_eta(eta, coeffs, 0.0).unwrap();
        let d = phase_derivatives(&st, &ch, 0.0, FD_STEP).unwrap();
        let gen = eta * (st.sigma.pp - st.sigma.xx);
        assert_abs_diff_eq!(d.d_sigma.xx, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(d.d_sigma.pp, 0.0, epsilon = 1e-9);
        assert_relative_eq!(d.d_sigma.xp, gen, max_relative = 1e-8);
    }

    #[test]
    fn exact_pure_trivial_and_limits() {
        assert_eq!(qfi_exact_pure(0.0, 0.0, 0.5, 0.0, 0.0).unwrap().value, 0.0);
        for &nbar in &[0.5, 2.0, 77.0] {
            let f = qfi_exact_pure(nbar, nbar, 1.0, 0.0, 0.0).unwrap().value;
            assert_relative_eq!(f, 8.0 * nbar * (nbar + 1.0), max_relative = 1e-10);
        }
        assert!(matches!(
            qfi_exact_pure(1.0, 2.0, 0.5, 0.0, 0.0),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn exact_pure_matches_gaussian_route_on_grid() {
        // The closed form and the finite-difference moment route are
        // independent computations of the same quantity.
        let mut worst: f64 = 0.0;
        for &eta in &[0.3, 0.5, 0.9] {
            for &n_sq in &[0.0, 1.0, 10.0] {
                for &n_th in &[0.0, 0.5] {
                    let coeffs = derive_coeffs(&ReservoirSpec::new(n_th, n_sq, 0.0).unwrap());
                    for &nbar in &[1.0f64, 10.0, 100.0] {
                        for &frac in &[0.0f64, 0.5, 1.0] {
                            let n_squeezed = frac * nbar;
                            let r0 = (n_squeezed).sqrt().asinh();
                            let disp = (nbar - n_squeezed).sqrt();
                            let params = StateParams::new(
                                Complex64::new(disp, 0.0),
                                r0,
                                0.0,
                                0.0,
                            )
                            .unwrap();
                            let st = build_state(&params).unwrap();
                            let ch = ChannelAtTime::from_eta(eta, coeffs, 0.0).unwrap();
                            let f_fd = qfi_phase(&st, &ch, 0.0).unwrap().value;
                            let f_cf = qfi_exact_pure(
                                nbar,
                                n_squeezed,
                                eta,
                                coeffs.n_big,
                                coeffs.m_big.norm(),
                            )
                            .unwrap()
                            .value;
                            worst = worst.max((f_fd - f_cf).abs() / f_cf.max(1e-300));
                        }
                    }
                }
            }
        }
        assert!(worst < 1e-6, "max relative deviation {worst:.3e}");
    }

    #[test]
    fn purity_derivative_singularity_detected() {
        let st = GaussianState::vacuum(); // pure: 1 - μ⁴ = 0
        let deriv = ParamDerivatives {
            d_dbar: [0.0, 0.0],
            d_sigma: CovMatrix::new(0.0, 0.0, 0.0),
            d_mu: 1e-3,
            step: FD_STEP,
        };
        assert!(matches!(
            qfi_gaussian(&st, &deriv),
            Err(Error::PurityDerivativeSingular { .. })
        ));
    }

    #[test]
    fn global_rotation_invariance() {
        // ψ → ψ+δ, displacement phase → +δ, ξ → ξ+2δ leaves F unchanged.
        let nbar = 4.0;
        let delta = 0.37;
        let base_psi = 0.4;
        let base_xi = 0.25;
        let alpha = Complex64::from_polar((0.3f64 * nbar).sqrt(), 0.7);
        let r0 = (0.7f64 * nbar).sqrt().asinh();
        let f = |shift: f64| -> f64 {
            let params = StateParams::new(
                alpha * Complex64::from_polar(1.0, shift),
                r0,
                base_psi + shift,
                0.0,
            )
            .unwrap();
            let coeffs =
                derive_coeffs(&ReservoirSpec::new(0.0, 5.0, base_xi + 2.0 * shift).unwrap());
            let ch = ChannelAtTime::from_eta(0.8, coeffs, 0.0).unwrap();
            qfi_phase(&build_state(&params).unwrap(), &ch, 0.0).unwrap().value
        };
        assert_relative_eq!(f(0.0), f(delta), max_relative = 1e-8);
    }

    #[test]
    fn finite_difference_step_converged() {
        let st = build_state(
            &StateParams::new(Complex64::new(1.2, 0.3), 0.8, 0.2, 0.1).unwrap(),
        )
        .unwrap();
        let coeffs = derive_coeffs(&ReservoirSpec::new(0.3, 6.0, 0.4).unwrap());
        let ch = ChannelAtTime::from_eta(0.6, coeffs, 0.0).unwrap();
        let out = apply_channel(&st, &ch).unwrap();
        let f_h = qfi_gaussian(&out, &phase_derivatives(&st, &ch, 0.0, FD_STEP).unwrap()).unwrap();
        let f_h2 =
            qfi_gaussian(&out, &phase_derivatives(&st, &ch, 0.0, 0.5 * FD_STEP).unwrap()).unwrap();
        assert_relative_eq!(f_h, f_h2, max_relative = 1e-6);
    }

    #[test]
    fn frequency_reparametrization_basics() {
        let profile = DissipationProfile::markovian(1.0).unwrap();
        let st = build_state(&StateParams::coherent(2.0)).unwrap();
        // t → 0 gives no accumulated rotation.
        let f0 = qfi_frequency(&st, ReservoirCoeffs::vacuum(), &profile, 0.0).unwrap();
        assert_eq!(f0.value, 0.0);
        // Coherent + pure loss: F_ω = t²·4N̄η(t).
        let t = 0.8;
        let f = qfi_frequency(&st, ReservoirCoeffs::vacuum(), &profile, t).unwrap();
        assert_relative_eq!(f.value, t * t * 4.0 * 2.0 * (-t as f64).exp(), max_relative = 1e-9);
    }

    #[test]
    fn gamma_rescaling_leaves_phase_qfi_invariant() {
        // Γ → 2Γ with t → t·2^{-1/(β+1)} keeps η and hence F_φ fixed.
        let st = build_state(&StateParams::squeezed_vacuum(3.0)).unwrap();
        let coeffs = derive_coeffs(&ReservoirSpec::squeezed(4.0));
        for beta in 0..3u32 {
            let t = 0.9;
            let p1 = DissipationProfile::new(1.3, beta).unwrap();
            let p2 = DissipationProfile::new(2.6, beta).unwrap();
            let t2 = t * 2.0f64.powf(-1.0 / (beta as f64 + 1.0));
            let ch1 = ChannelAtTime::at_omega_zero(&p1, t, coeffs, 0.0);
            let ch2 = ChannelAtTime::at_omega_zero(&p2, t2, coeffs, 0.0);
            let f1 = qfi_phase(&st, &ch1, 0.0).unwrap().value;
            let f2 = qfi_phase(&st, &ch2, 0.0).unwrap().value;
            assert_relative_eq!(f1, f2, max_relative = 1e-10);
        }
    }

    #[test]
    fn frequency_diagnostic_runs_and_reports_both() {
        let st = build_state(&StateParams::squeezed_vacuum(2.0)).unwrap();
        let coeffs = derive_coeffs(&ReservoirSpec::squeezed(3.0));
        let profile = DissipationProfile::markovian(1.0).unwrap();
        let d = qfi_frequency_diagnostic(&st, coeffs, &profile, 0.5, 0.0).unwrap();
        assert!(d.reparametrized > 0.0);
        assert!(d.direct > 0.0);
        // The two parametrizations agree exactly only when M = 0.
        let d0 = qfi_frequency_diagnostic(&st, ReservoirCoeffs::vacuum(), &profile, 0.5, 0.0)
            .unwrap();
        assert_relative_eq!(d0.reparametrized, d0.direct, max_relative = 1e-7);
    }

    #[test]
    fn direct_frequency_analytic_matches_finite_differences() {
        // The analytic ω-derivative route against the independent
        // quadrature + finite-difference route.
        let profile = DissipationProfile::new(0.8, 1).unwrap();
        for (nbar_sq, nbar_disp, n_sq, t) in
            [(2.0, 0.0, 3.0, 0.7), (1.0, 4.0, 10.0, 1.4), (0.0, 2.0, 0.5, 2.5)]
        {
            let params = StateParams::new(
                Complex64::new(nbar_disp.sqrt(), 0.0),
                (nbar_sq as f64).sqrt().asinh(),
                0.3,
                0.1,
            )
            .unwrap();
            let st = build_state(&params).unwrap();
            let coeffs = derive_coeffs(&ReservoirSpec::new(0.2, n_sq, 0.5).unwrap());
            let analytic = qfi_frequency_direct(&st, coeffs, &profile, t, 0.0).unwrap().value;
            let fd = qfi_frequency_diagnostic(&st, coeffs, &profile, t, 0.0).unwrap().direct;
            assert_relative_eq!(analytic, fd, max_relative = 1e-6);
        }
    }

    #[test]
    fn direct_equals_reparametrized_without_reservoir_correlations() {
        // M = 0 makes C irrelevant; the two routes are then the same
        // function exactly.
        let profile = DissipationProfile::markovian(0.6).unwrap();
        let coeffs = derive_coeffs(&ReservoirSpec::new(1.2, 0.0, 0.0).unwrap());
        let st = build_state(
            &StateParams::new(Complex64::new(1.0, -0.5), 0.7, 0.9, 0.3).unwrap(),
        )
        .unwrap();
        for &t in &[0.2, 1.0, 4.0] {
            let direct = qfi_frequency_direct(&st, coeffs, &profile, t, 0.0).unwrap().value;
            let reparam = qfi_frequency(&st, coeffs, &profile, t).unwrap().value;
            assert_relative_eq!(direct, reparam, max_relative = 1e-8);
        }
    }

    #[test]
    fn direct_frequency_saturates_at_long_times() {
        // With a squeezed reservoir the direct F_ω approaches a constant, so
        // F_ω/t decays and a finite optimal interrogation time exists.
        let profile = DissipationProfile::markovian(1.0).unwrap();
        let coeffs = derive_coeffs(&ReservoirSpec::squeezed(10.0));
        let st = build_state(&StateParams::squeezed_vacuum(20.0)).unwrap();
        let f10 = qfi_frequency_direct(&st, coeffs, &profile, 10.0, 0.0).unwrap().value;
        let f40 = qfi_frequency_direct(&st, coeffs, &profile, 40.0, 0.0).unwrap().value;
        assert_relative_eq!(f10, f40, max_relative = 1e-3);
        assert!(f40 / 40.0 < f10 / 10.0);
    }
}
