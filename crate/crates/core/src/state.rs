//! Single-mode Gaussian states as first and second moments.
//!
//! A state is the pair (d̄, Σ) with d̄ = (x̄, p̄) and Σ the 2×2 covariance
//! matrix of the quadratures x̂ = (a + a†)/√2, p̂ = -i(a - a†)/√2. The vacuum
//! has d̄ = 0 and Σ = ½·I.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance on det Σ - ¼ for physicality checks. Double-precision
/// closed forms stay within ~1e-13 of the exact value.
pub const PHYSICALITY_TOL: f64 = 1e-12;

/// Symmetric 2×2 covariance matrix stored as its three independent entries,
/// so symmetry cannot be broken by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovMatrix {
    pub xx: f64,
    pub xp: f64,
    pub pp: f64,
}

impl CovMatrix {
    pub fn new(xx: f64, xp: f64, pp: f64) -> Self {
        Self { xx, xp, pp }
    }

    /// ½·I, the vacuum covariance.
    pub fn vacuum() -> Self {
        Self::new(0.5, 0.0, 0.5)
    }

    /// c·I
    pub fn isotropic(c: f64) -> Self {
        Self::new(c, 0.0, c)
    }

    pub fn det(&self) -> f64 {
        self.xx * self.pp - self.xp * self.xp
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.pp
    }

    /// Smaller eigenvalue (both are real since the matrix is symmetric).
    pub fn min_eigenvalue(&self) -> f64 {
        let half_tr = 0.5 * self.trace();
        let disc = (0.5 * (self.xx - self.pp)).powi(2) + self.xp * self.xp;
        half_tr - disc.sqrt()
    }

    /// Inverse as a symmetric matrix. Fails on singular input.
    pub fn inverse(&self) -> Result<CovMatrix> {
        let d = self.det();
        if d <= 0.0 {
            return Err(Error::NonPhysicalState { det: d });
        }
        Ok(CovMatrix::new(self.pp / d, -self.xp / d, self.xx / d))
    }

    /// R(θ) Σ R(θ)ᵀ with R(θ) = [[cos θ, sin θ], [-sin θ, cos θ]], the moment
    /// rotation induced by free evolution through phase θ (α → α e^{-iθ}).
    pub fn rotate(&self, theta: f64) -> CovMatrix {
        let (s, c) = theta.sin_cos();
        let (a, b, d) = (self.xx, self.xp, self.pp);
        CovMatrix::new(
            c * c * a + 2.0 * c * s * b + s * s * d,
            c * s * (d - a) + (c * c - s * s) * b,
            s * s * a - 2.0 * c * s * b + c * c * d,
        )
    }

    /// v ᵀ Σ⁻¹ v without forming the inverse explicitly.
    pub fn inv_quadratic_form(&self, v: [f64; 2]) -> f64 {
        let d = self.det();
        (self.pp * v[0] * v[0] - 2.0 * self.xp * v[0] * v[1] + self.xx * v[1] * v[1]) / d
    }

    /// tr[(Σ⁻¹ A)²] for a symmetric A.
    pub fn tr_inv_product_squared(&self, a: &CovMatrix) -> f64 {
        let d = self.det();
        // T = Σ⁻¹ A, a general 2×2 matrix.
        let t00 = (self.pp * a.xx - self.xp * a.xp) / d;
        let t01 = (self.pp * a.xp - self.xp * a.pp) / d;
        let t10 = (-self.xp * a.xx + self.xx * a.xp) / d;
        let t11 = (-self.xp * a.xp + self.xx * a.pp) / d;
        t00 * t00 + 2.0 * t01 * t10 + t11 * t11
    }
}

/// Preparation parameters of a general single-mode Gaussian state: displaced,
/// squeezed thermal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateParams {
    /// Complex displacement α₀ (dimensionless).
    pub alpha0: Complex64,
    /// Squeezing magnitude r₀ ≥ 0 handled through `psi`; sign is allowed and
    /// equivalent to psi → psi + π/2.
    pub r0: f64,
    /// Squeezing-axis angle, reduced to [0, π) (the ellipse has period π).
    pub psi: f64,
    /// Mean thermal occupation N₀ ≥ 0.
    pub n0: f64,
}

impl StateParams {
    pub fn new(alpha0: Complex64, r0: f64, psi: f64, n0: f64) -> Result<Self> {
        if n0 < 0.0 || !n0.is_finite() {
            return Err(Error::InvalidParams(format!("n0 = {n0} must be >= 0")));
        }
        if !r0.is_finite() {
            return Err(Error::InvalidParams(format!("r0 = {r0} must be finite")));
        }
        if !psi.is_finite() {
            return Err(Error::InvalidParams(format!("psi = {psi} must be finite")));
        }
        if !(alpha0.re.is_finite() && alpha0.im.is_finite()) {
            return Err(Error::InvalidParams("alpha0 must be finite".into()));
        }
        Ok(Self { alpha0, r0, psi: psi.rem_euclid(std::f64::consts::PI), n0 })
    }

    pub fn vacuum() -> Self {
        Self { alpha0: Complex64::new(0.0, 0.0), r0: 0.0, psi: 0.0, n0: 0.0 }
    }

    /// Coherent state with `nbar` mean photons, displaced along x̂.
    pub fn coherent(nbar: f64) -> Self {
        Self { alpha0: Complex64::new(nbar.sqrt(), 0.0), r0: 0.0, psi: 0.0, n0: 0.0 }
    }

    /// Squeezed vacuum with `nbar` mean photons (sinh² r₀ = nbar), axis ψ = 0.
    pub fn squeezed_vacuum(nbar: f64) -> Self {
        Self {
            alpha0: Complex64::new(0.0, 0.0),
            r0: nbar.sqrt().asinh(),
            psi: 0.0,
            n0: 0.0,
        }
    }
}

/// A single-mode Gaussian state: first-moment vector and covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub dbar: [f64; 2],
    pub sigma: CovMatrix,
}

impl GaussianState {
    /// Validates symmetry-free invariants: Heisenberg bound and positive
    /// definiteness.
    pub fn new(dbar: [f64; 2], sigma: CovMatrix) -> Result<Self> {
        let det = sigma.det();
        if det < 0.25 - PHYSICALITY_TOL {
            return Err(Error::NonPhysicalState { det });
        }
        if sigma.min_eigenvalue() <= 0.0 {
            return Err(Error::NonPhysicalState { det });
        }
        Ok(Self { dbar, sigma })
    }

    pub fn vacuum() -> Self {
        Self { dbar: [0.0, 0.0], sigma: CovMatrix::vacuum() }
    }
}

/// Builds the moments of D(α₀) S(r₀ e^{2iψ}) ρ_{N₀} S† D†:
/// d̄ = √2 (Re α₀, Im α₀) and Σ = R(ψ)·diag((N₀+½)e^{2r₀}, (N₀+½)e^{-2r₀})·R(ψ)ᵀ,
/// with R(ψ) the counterclockwise rotation by ψ.
pub fn build_state(params: &StateParams) -> Result<GaussianState> {
    if params.n0 < 0.0 {
        return Err(Error::InvalidParams(format!("n0 = {} must be >= 0", params.n0)));
    }
    let half = params.n0 + 0.5;
    let a = half * (2.0 * params.r0).exp();
    let b = half * (-2.0 * params.r0).exp();
    // Counterclockwise rotation of the ellipse by ψ is the free-evolution
    // rotation by -ψ in the `CovMatrix::rotate` convention.
    let sigma = CovMatrix::new(a, 0.0, b).rotate(-params.psi);
    let dbar = [
        std::f64::consts::SQRT_2 * params.alpha0.re,
        std::f64::consts::SQRT_2 * params.alpha0.im,
    ];
    GaussianState::new(dbar, sigma)
}

/// Mean boson number N̄ = ½ tr Σ + ½|d̄|² - ½, basis-free.
pub fn mean_photons(state: &GaussianState) -> f64 {
    0.5 * state.sigma.trace() + 0.5 * (state.dbar[0].powi(2) + state.dbar[1].powi(2)) - 0.5
}

/// Purity μ = ½ (det Σ)^{-1/2} ∈ (0, 1].
pub fn purity(state: &GaussianState) -> Result<f64> {
    let det = state.sigma.det();
    if det < 0.25 - PHYSICALITY_TOL {
        return Err(Error::NonPhysicalState { det });
    }
    Ok(0.5 / det.sqrt())
}

/// Wigner function W(d) = exp[-½ (d-d̄)ᵀ Σ⁻¹ (d-d̄)] / (2π √det Σ).
pub fn wigner_at(state: &GaussianState, point: [f64; 2]) -> f64 {
    let delta = [point[0] - state.dbar[0], point[1] - state.dbar[1]];
    let q = state.sigma.inv_quadratic_form(delta);
    (-0.5 * q).exp() / (2.0 * std::f64::consts::PI * state.sigma.det().sqrt())
}
