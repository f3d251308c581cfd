//! Exact (non-asymptotic) precision bounds: maximization of the QFI over all
//! single-mode Gaussian inputs at fixed mean photon number, and minimization
//! of the frequency-estimation error over the interrogation time.
//!
//! The state search runs in an energy-split parametrization (s, n₀, ψ, δ)
//! where the photon budget N̄ is satisfied by construction: a fraction s of
//! N̄ sits in the squeezed-thermal part, the rest in displacement. The search
//! itself is a deterministic coarse grid followed by Nelder–Mead refinement
//! from the best grid points; no randomized restarts, so identical inputs
//! give bit-identical results.
//!
//! Frequency runs maximize the direct-ω QFI over the interrogation time.
//! The reparametrized t²·F_φ form is not usable as a time objective: with
//! the reservoir correlation co-rotating, F_φ stays bounded away from zero
//! for squeezed reservoirs and t²·F_φ grows without limit, whereas the
//! direct ω-derivative (reservoir pinned through C(ω)) saturates and yields
//! the finite optimum the asymptotic formulas describe.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qfi::{qfi_phase, FrequencyContext};
use crate::reservoir::{ChannelAtTime, DissipationProfile, ReservoirCoeffs};
use crate::state::{build_state, GaussianState, StateParams};

/// Which parameter an estimation run targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Phase,
    Frequency,
}

/// How the channel strength is specified for phase estimation.
#[derive(Debug, Clone, Copy)]
pub enum ChannelSetting {
    /// Dissipation coefficient η given directly.
    Eta(f64),
    /// Power-law profile evaluated at interrogation time t.
    Profile { profile: DissipationProfile, t: f64 },
}

impl ChannelSetting {
    pub fn channel(&self, coeffs: ReservoirCoeffs, phi: f64) -> Result<ChannelAtTime> {
        match *self {
            ChannelSetting::Eta(eta) => ChannelAtTime::from_eta(eta, coeffs, phi),
            ChannelSetting::Profile { profile, t } => {
                Ok(ChannelAtTime::at_omega_zero(&profile, t, coeffs, phi))
            }
        }
    }
}

/// A point of the energy-split search space at fixed N̄.
#[derive(Debug, Clone, Copy)]
pub struct EnergyBudgetPoint {
    pub nbar: f64,
    /// Fraction of N̄ in the squeezed-thermal part, s ∈ [0, 1].
    pub s: f64,
    /// Thermal occupation n₀ ∈ [0, s·N̄].
    pub n0: f64,
    /// Squeezing-axis angle.
    pub psi: f64,
    /// Displacement direction angle.
    pub delta: f64,
}

impl EnergyBudgetPoint {
    /// State parameters meeting the budget: (n₀+½)cosh 2r₀ - ½ = s·N̄ and
    /// |α₀|² = (1-s)·N̄.
    pub fn to_state_params(&self) -> Result<StateParams> {
        let sq_photons = self.s * self.nbar;
        if self.n0 > sq_photons + 1e-12 {
            return Err(Error::InvalidParams(format!(
                "n0 = {} exceeds squeezed-part budget {sq_photons}",
                self.n0
            )));
        }
        let cosh2r = ((sq_photons + 0.5) / (self.n0 + 0.5)).max(1.0);
        let r0 = 0.5 * cosh2r.acosh();
        let disp = ((1.0 - self.s) * self.nbar).max(0.0).sqrt();
        StateParams::new(Complex64::from_polar(disp, self.delta), r0, self.psi, self.n0)
    }
}

/// Search diagnostics; deterministic for identical inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptTrace {
    /// Coarse grid shape over (s, n₀ fraction, ψ, δ).
    pub grid_shape: [usize; 4],
    pub grid_evaluations: usize,
    pub simplex_starts: usize,
    pub simplex_iterations: usize,
    pub simplex_evaluations: usize,
    pub converged: bool,
}

/// Result of a precision optimization.
#[derive(Debug, Clone)]
pub struct Optimum {
    pub best: EnergyBudgetPoint,
    pub params: StateParams,
    /// Maximal phase QFI (frequency runs store the direct F_ω).
    pub qfi: f64,
    /// Δφ = 1/√F for phase; Δω²·T for frequency.
    pub bound: f64,
    /// Optimal interrogation time (frequency only).
    pub t_opt: Option<f64>,
    /// Set when the time minimizer hit the t = T boundary.
    pub boundary: bool,
    pub trace: OptTrace,
}

const GRID_S: usize = 21;
const GRID_N0: usize = 5;
const GRID_PSI: usize = 8;
const GRID_DELTA: usize = 8;
const SIMPLEX_TOL: f64 = 1e-8;
const SIMPLEX_MAX_ITER: usize = 600;

/// Normalized coordinates (s, n₀-fraction, ψ/π, δ/2π) → budget point.
fn point_from_coords(nbar: f64, x: &[f64; 4]) -> EnergyBudgetPoint {
    let s = x[0].clamp(0.0, 1.0);
    let frac = x[1].clamp(0.0, 1.0);
    EnergyBudgetPoint {
        nbar,
        s,
        n0: frac * s * nbar,
        psi: x[2].rem_euclid(1.0) * std::f64::consts::PI,
        delta: x[3].rem_euclid(1.0) * std::f64::consts::TAU,
    }
}

struct SearchObjective<'a> {
    nbar: f64,
    qfi_of_state: &'a dyn Fn(&GaussianState) -> Result<f64>,
    evaluations: std::cell::Cell<usize>,
}

impl SearchObjective<'_> {
    /// Negated QFI (the simplex minimizes). Non-physical corner cases, which
    /// valid channels cannot reach, are pushed to +∞.
    fn eval(&self, x: &[f64; 4]) -> f64 {
        self.evaluations.set(self.evaluations.get() + 1);
        let point = point_from_coords(self.nbar, x);
        let Ok(params) = point.to_state_params() else { return f64::INFINITY };
        let Ok(state) = build_state(&params) else { return f64::INFINITY };
        match (self.qfi_of_state)(&state) {
            Ok(value) => -value,
            Err(_) => f64::INFINITY,
        }
    }
}

/// Standard Nelder–Mead on the 4 normalized coordinates, converged when the
/// simplex diameter drops below `SIMPLEX_TOL`.
fn nelder_mead(
    objective: &SearchObjective<'_>,
    start: [f64; 4],
    step: f64,
) -> ([f64; 4], f64, usize, bool) {
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let mut simplex: Vec<([f64; 4], f64)> = Vec::with_capacity(5);
    simplex.push((start, objective.eval(&start)));
    for i in 0..4 {
        let mut v = start;
        v[i] += step;
        simplex.push((v, objective.eval(&v)));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < SIMPLEX_MAX_ITER {
        iterations += 1;
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| {
                v.iter()
                    .zip(simplex[0].0.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < SIMPLEX_TOL {
            converged = true;
            break;
        }

        let worst = simplex[4];
        let mut centroid = [0.0; 4];
        for (v, _) in &simplex[..4] {
            for (c, x) in centroid.iter_mut().zip(v.iter()) {
                *c += x / 4.0;
            }
        }
        let shifted = |t: f64| {
            let mut v = [0.0; 4];
            for i in 0..4 {
                v[i] = centroid[i] + t * (centroid[i] - worst.0[i]);
            }
            v
        };

        let reflected = shifted(ALPHA);
        let f_reflected = objective.eval(&reflected);
        if f_reflected < simplex[0].1 {
            let expanded = shifted(GAMMA);
            let f_expanded = objective.eval(&expanded);
            simplex[4] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
            continue;
        }
        if f_reflected < simplex[3].1 {
            simplex[4] = (reflected, f_reflected);
            continue;
        }
        let contracted = if f_reflected < worst.1 { shifted(RHO) } else { shifted(-RHO) };
        let f_contracted = objective.eval(&contracted);
        if f_contracted < worst.1.min(f_reflected) {
            simplex[4] = (contracted, f_contracted);
            continue;
        }
        // Shrink toward the best vertex.
        let best = simplex[0].0;
        for entry in simplex.iter_mut().skip(1) {
            for i in 0..4 {
                entry.0[i] = best[i] + SIGMA * (entry.0[i] - best[i]);
            }
            entry.1 = objective.eval(&entry.0);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    (simplex[0].0, simplex[0].1, iterations, converged)
}

/// Two-stage deterministic search shared by the phase and frequency paths.
fn two_stage_search(
    nbar: f64,
    qfi_of_state: &dyn Fn(&GaussianState) -> Result<f64>,
) -> Result<(EnergyBudgetPoint, f64, OptTrace)> {
    if nbar <= 0.0 {
        return Err(Error::InvalidParams(format!("nbar = {nbar} must be > 0")));
    }
    let objective =
        SearchObjective { nbar, qfi_of_state, evaluations: std::cell::Cell::new(0) };

    // Stage 1: coarse grid.
    let mut evaluated: Vec<([f64; 4], f64)> =
        Vec::with_capacity(GRID_S * GRID_N0 * GRID_PSI * GRID_DELTA);
    for i in 0..GRID_S {
        let s = i as f64 / (GRID_S - 1) as f64;
        for j in 0..GRID_N0 {
            let frac = j as f64 / (GRID_N0 - 1) as f64;
            for k in 0..GRID_PSI {
                let psi = k as f64 / GRID_PSI as f64;
                for l in 0..GRID_DELTA {
                    let delta = l as f64 / GRID_DELTA as f64;
                    let x = [s, frac, psi, delta];
                    evaluated.push((x, objective.eval(&x)));
                }
            }
        }
    }
    let grid_evaluations = objective.evaluations.get();
    evaluated.sort_by(|a, b| a.1.total_cmp(&b.1));

    // Stage 2: simplex refinement from the best three grid points.
    let mut candidates: Vec<([f64; 4], f64, usize, bool)> = Vec::new();
    for start in evaluated.iter().take(3) {
        candidates.push(nelder_mead(&objective, start.0, 0.04));
    }
    let mut total_iters = 0;
    let mut all_converged = true;
    for c in &candidates {
        total_iters += c.2;
        all_converged &= c.3;
    }

    // Best candidate; ties within 1e-12 relative prefer smaller s, then
    // smaller n₀ (simpler states).
    let mut best = &candidates[0];
    for c in &candidates[1..] {
        let tie = (c.1 - best.1).abs() <= 1e-12 * best.1.abs();
        if tie {
            let (pc, pb) = (point_from_coords(nbar, &c.0), point_from_coords(nbar, &best.0));
            if pc.s < pb.s - 1e-15 || (pc.s == pb.s && pc.n0 < pb.n0) {
                best = c;
            }
        } else if c.1 < best.1 {
            best = c;
        }
    }

    let best_point = point_from_coords(nbar, &best.0);
    Ok((
        best_point,
        -best.1,
        OptTrace {
            grid_shape: [GRID_S, GRID_N0, GRID_PSI, GRID_DELTA],
            grid_evaluations,
            simplex_starts: candidates.len(),
            simplex_iterations: total_iters,
            simplex_evaluations: objective.evaluations.get() - grid_evaluations,
            converged: all_converged,
        },
    ))
}

/// Maximizes the phase QFI over all single-mode Gaussian inputs with mean
/// photon number `nbar`. Returns the maximizing point and Δφ = 1/√F (single
/// repetition).
pub fn optimize_state_phase(
    nbar: f64,
    coeffs: ReservoirCoeffs,
    setting: &ChannelSetting,
    phi0: f64,
) -> Result<Optimum> {
    let ch = setting.channel(coeffs, phi0)?;
    let (best_point, qfi, trace) =
        two_stage_search(nbar, &|state| qfi_phase(state, &ch, phi0).map(|r| r.value))?;
    let params = best_point.to_state_params()?;
    Ok(Optimum {
        best: best_point,
        params,
        qfi,
        bound: 1.0 / qfi.sqrt(),
        t_opt: None,
        boundary: false,
        trace,
    })
}

/// Maximizes the direct frequency QFI at fixed interrogation time.
pub fn optimize_state_frequency_at(nbar: f64, ctx: &FrequencyContext) -> Result<Optimum> {
    let (best_point, qfi, trace) = two_stage_search(nbar, &|state| ctx.qfi_omega(state))?;
    let params = best_point.to_state_params()?;
    Ok(Optimum {
        best: best_point,
        params,
        qfi,
        bound: ctx.t / qfi, // Δω²·T at this t
        t_opt: Some(ctx.t),
        boundary: false,
        trace,
    })
}

/// Input-state policy for the frequency optimization.
#[derive(Debug, Clone, Copy)]
pub enum StateChoice {
    Fixed(StateParams),
    Optimize,
}

fn omega_qfi_for_choice(
    nbar: f64,
    coeffs: ReservoirCoeffs,
    profile: &DissipationProfile,
    t: f64,
    choice: &StateChoice,
) -> Result<(f64, Option<Optimum>)> {
    let ctx = FrequencyContext::new(coeffs, profile, t, 0.0)?;
    match choice {
        StateChoice::Fixed(params) => Ok((ctx.qfi_omega(&build_state(params)?)?, None)),
        StateChoice::Optimize => {
            let opt = optimize_state_frequency_at(nbar, &ctx)?;
            Ok((opt.qfi, Some(opt)))
        }
    }
}

const TIME_SCAN_POINTS: usize = 64;
const GOLDEN_REL_TOL: f64 = 1e-10;

/// Minimizes Δω² = t/(T·F_ω(t)) over the interrogation time 0 < t ≤ T with
/// k = T/t repetitions. A log-spaced bracket scan around the asymptotic
/// optimal-time guess is refined by golden-section search.
pub fn optimize_time_frequency(
    nbar: f64,
    coeffs: ReservoirCoeffs,
    profile: &DissipationProfile,
    total_time: f64,
    state: &StateChoice,
) -> Result<Optimum> {
    if total_time <= 0.0 {
        return Err(Error::InvalidParams(format!("total_time = {total_time} must be > 0")));
    }
    if nbar <= 0.0 {
        return Err(Error::InvalidParams(format!("nbar = {nbar} must be > 0")));
    }

    // Γ = 0: no decoherence, the optimum is the full duration.
    if profile.gamma == 0.0 {
        return finish_frequency(nbar, coeffs, profile, state, total_time, true);
    }

    // Objective: maximize h(t) = F_ω(t)/t  ⇔  minimize Δω² = t/(T·F_ω).
    let h = |t: f64| -> Result<f64> {
        Ok(omega_qfi_for_choice(nbar, coeffs, profile, t, state)?.0 / t)
    };

    let guess = crate::bounds::freq_bound_optimal(
        &crate::bounds::BoundInputs::new(nbar, coeffs)?,
        profile.gamma,
        profile.beta,
    )?
    .t_opt;
    let lo = 1e-4 * guess;
    let hi = (1e4 * guess).min(total_time);
    let lo = if lo >= hi { hi * 1e-8 } else { lo };

    let ratio = (hi / lo).ln() / (TIME_SCAN_POINTS - 1) as f64;
    let mut best_idx = 0;
    let mut best_val = f64::NEG_INFINITY;
    let mut ts = Vec::with_capacity(TIME_SCAN_POINTS);
    for i in 0..TIME_SCAN_POINTS {
        let t = lo * (ratio * i as f64).exp();
        let v = h(t)?;
        if v > best_val {
            best_val = v;
            best_idx = i;
        }
        ts.push(t);
    }

    // Golden-section refinement on the bracketing interval.
    let mut a = ts[best_idx.saturating_sub(1)];
    let mut b = ts[(best_idx + 1).min(TIME_SCAN_POINTS - 1)];
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = h(x1)?;
    let mut f2 = h(x2)?;
    for _ in 0..300 {
        if b - a <= GOLDEN_REL_TOL * b {
            break;
        }
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = h(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = h(x2)?;
        }
    }
    let t_opt = if f1 > f2 { x1 } else { x2 };
    let boundary = t_opt >= total_time * (1.0 - 1e-8);
    let t_opt = if boundary { total_time } else { t_opt };
    finish_frequency(nbar, coeffs, profile, state, t_opt, boundary)
}

fn finish_frequency(
    nbar: f64,
    coeffs: ReservoirCoeffs,
    profile: &DissipationProfile,
    state: &StateChoice,
    t_opt: f64,
    boundary: bool,
) -> Result<Optimum> {
    let (f_omega, inner) = omega_qfi_for_choice(nbar, coeffs, profile, t_opt, state)?;
    let var_t = t_opt / f_omega; // Δω²·T = t/F_ω
    let (best, params, trace) = match (inner, state) {
        (Some(opt), _) => (opt.best, opt.params, opt.trace),
        (None, StateChoice::Fixed(p)) => (
            EnergyBudgetPoint { nbar, s: f64::NAN, n0: p.n0, psi: p.psi, delta: 0.0 },
            *p,
            OptTrace {
                grid_shape: [0; 4],
                grid_evaluations: 0,
                simplex_starts: 0,
                simplex_iterations: 0,
                simplex_evaluations: 0,
                converged: true,
            },
        ),
        (None, StateChoice::Optimize) => unreachable!(),
    };
    Ok(Optimum {
        best,
        params,
        qfi: f_omega,
        bound: var_t,
        t_opt: Some(t_opt),
        boundary,
        trace,
    })
}

/// One row of an exact-bound curve.
#[derive(Debug, Clone)]
pub struct CurveRow {
    pub nbar: f64,
    /// Δφ for phase tasks, Δω²·T for frequency tasks.
    pub bound: f64,
    pub qfi: f64,
    pub s: f64,
    pub n0: f64,
    pub t_opt: Option<f64>,
}

/// Sweeps the optimizer over a photon-number grid. Rows keep the input
/// order; points are evaluated in parallel but the result is deterministic.
pub fn exact_curve(
    task: Task,
    nbar_list: &[f64],
    coeffs: ReservoirCoeffs,
    setting: &ChannelSetting,
    total_time: f64,
) -> Result<Vec<CurveRow>> {
    nbar_list
        .par_iter()
        .map(|&nbar| match task {
            Task::Phase => {
                let opt = optimize_state_phase(nbar, coeffs, setting, 0.0)?;
                Ok(CurveRow {
                    nbar,
                    bound: opt.bound,
                    qfi: opt.qfi,
                    s: opt.best.s,
                    n0: opt.best.n0,
                    t_opt: None,
                })
            }
            Task::Frequency => {
                let ChannelSetting::Profile { profile, .. } = setting else {
                    return Err(Error::InvalidParams(
                        "frequency curves need a dissipation profile".into(),
                    ));
                };
                let opt = optimize_time_frequency(
                    nbar,
                    coeffs,
                    profile,
                    total_time,
                    &StateChoice::Optimize,
                )?;
                Ok(CurveRow {
                    nbar,
                    bound: opt.bound,
                    qfi: opt.qfi,
                    s: opt.best.s,
                    n0: opt.best.n0,
                    t_opt: opt.t_opt,
                })
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfi::qfi_frequency_direct;
    use crate::reservoir::{derive_coeffs, ReservoirSpec};
    use approx::assert_relative_eq;

    #[test]
    fn noiseless_optimum_is_squeezed_vacuum() {
        let nbar = 5.0;
        let opt = optimize_state_phase(
            nbar,
            ReservoirCoeffs::vacuum(),
            &ChannelSetting::Eta(1.0),
            0.0,
        )
        .unwrap();
        assert_relative_eq!(opt.qfi, 8.0 * nbar * (nbar + 1.0), max_relative = 1e-6);
        assert!(opt.best.s > 1.0 - 1e-6);
        assert!(opt.best.n0 < 1e-6 * nbar);
        assert!(opt.trace.converged);
    }

    #[test]
    fn optimum_dominates_closed_form_baselines() {
        let coeffs = derive_coeffs(&ReservoirSpec::squeezed(10.0));
        let setting = ChannelSetting::Eta(0.9);
        for &nbar in &[0.5, 5.0, 66.0] {
            let opt = optimize_state_phase(nbar, coeffs, &setting, 0.0).unwrap();
            let ch = setting.channel(coeffs, 0.0).unwrap();
            for params in [
                StateParams::coherent(nbar),
                StateParams::squeezed_vacuum(nbar),
                StateParams::vacuum(),
            ] {
                let f = qfi_phase(&build_state(&params).unwrap(), &ch, 0.0).unwrap().value;
                assert!(
                    opt.qfi >= f * (1.0 - 1e-9),
                    "optimizer {} below baseline {} at nbar = {nbar}",
                    opt.qfi,
                    f
                );
            }
        }
    }

    #[test]
    fn vanishing_budget_still_sees_reservoir_information() {
        // N̄ → 0 leaves the reservoir-induced covariance information.
        let coeffs = derive_coeffs(&ReservoirSpec::squeezed(10.0));
        let opt = optimize_state_phase(1e-9, coeffs, &ChannelSetting::Eta(0.9), 0.0).unwrap();
        let ch = ChannelSetting::Eta(0.9).channel(coeffs, 0.0).unwrap();
        let f_vac = qfi_phase(&crate::state::GaussianState::vacuum(), &ch, 0.0).unwrap().value;
        assert!(f_vac > 0.0);
        assert_relative_eq!(opt.qfi, f_vac, max_relative = 1e-4);
    }

    #[test]
    fn determinism_bitwise() {
        let coeffs = derive_coeffs(&ReservoirSpec::squeezed(10.0));
        let a = optimize_state_phase(7.0, coeffs, &ChannelSetting::Eta(0.9), 0.0).unwrap();
        let b = optimize_state_phase(7.0, coeffs, &ChannelSetting::Eta(0.9), 0.0).unwrap();
        assert_eq!(a.qfi.to_bits(), b.qfi.to_bits());
        assert_eq!(a.best.s.to_bits(), b.best.s.to_bits());
        assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn no_dissipation_uses_full_duration() {
        let nbar = 2.0;
        let t_total = 5.0;
        let profile = DissipationProfile::markovian(0.0).unwrap();
        let opt = optimize_time_frequency(
            nbar,
            ReservoirCoeffs::vacuum(),
            &profile,
            t_total,
            &StateChoice::Optimize,
        )
        .unwrap();
        assert!(opt.boundary);
        assert_eq!(opt.t_opt, Some(t_total));
        // Δω²T = 1/(8TN̄(N̄+1)) for optimal states.
        assert_relative_eq!(
            opt.bound,
            1.0 / (8.0 * t_total * nbar * (nbar + 1.0)),
            max_relative = 1e-6
        );
    }

    #[test]
    fn coherent_markovian_time_optimum() {
        // t_opt → 1/Γ, Δω²T → eΓ/(4N̄).
        let nbar = 1e3;
        let gamma = 2.0;
        let profile = DissipationProfile::markovian(gamma).unwrap();
        let opt = optimize_time_frequency(
            nbar,
            ReservoirCoeffs::vacuum(),
            &profile,
            1e3,
            &StateChoice::Fixed(StateParams::coherent(nbar)),
        )
        .unwrap();
        let t_opt = opt.t_opt.unwrap();
        assert!((t_opt - 1.0 / gamma).abs() < 0.01 / gamma);
        let target = std::f64::consts::E * gamma / (4.0 * nbar);
        assert!((opt.bound - target).abs() < 0.01 * target);
        assert!(!opt.boundary);
    }

    #[test]
    fn golden_section_stationarity() {
        let nbar = 50.0;
        let coeffs = derive_coeffs(&ReservoirSpec::squeezed(4.0));
        let profile = DissipationProfile::markovian(1.0).unwrap();
        let state = StateChoice::Fixed(StateParams::squeezed_vacuum(nbar));
        let opt = optimize_time_frequency(nbar, coeffs, &profile, 1e4, &state).unwrap();
        assert!(!opt.boundary);
        let t = opt.t_opt.unwrap();
        // Centered-difference stationarity of q(t) = t/F_ω.
        let q = |t: f64| {
            let st = build_state(&StateParams::squeezed_vacuum(nbar)).unwrap();
            let f = qfi_frequency_direct(&st, coeffs, &profile, t, 0.0).unwrap().value;
            t / f
        };
        let h = 1e-5 * t;
        let slope = (q(t + h) - q(t - h)) / (2.0 * h);
        let rel_slope = slope.abs() * t / q(t);
        assert!(rel_slope < 1e-5, "relative slope {rel_slope:e}");
    }

    #[test]
    fn frequency_ratio_independent_of_gamma() {
        // Δω²₀/Δω²_sq identical for Γ ∈ {0.1, 1, 10}.
        let nbar = 20.0;
        let sq = derive_coeffs(&ReservoirSpec::squeezed(10.0));
        let ratios: Vec<f64> = [0.1, 1.0, 10.0]
            .iter()
            .map(|&gamma| {
                let profile = DissipationProfile::markovian(gamma).unwrap();
                let lossy = optimize_time_frequency(
                    nbar,
                    ReservoirCoeffs::vacuum(),
                    &profile,
                    1e7 / gamma,
                    &StateChoice::Optimize,
                )
                .unwrap();
                let squeezed = optimize_time_frequency(
                    nbar,
                    sq,
                    &profile,
                    1e7 / gamma,
                    &StateChoice::Optimize,
                )
                .unwrap();
                lossy.bound / squeezed.bound
            })
            .collect();
        assert_relative_eq!(ratios[0], ratios[1], max_relative = 1e-6);
        assert_relative_eq!(ratios[2], ratios[1], max_relative = 1e-6);
    }

    #[test]
    fn exact_curve_monotone_in_nbar() {
        let coeffs = derive_coeffs(&ReservoirSpec::squeezed(10.0));
        let nbars: Vec<f64> = (0..8).map(|i| 10f64.powf(i as f64 / 3.0)).collect();
        let rows =
            exact_curve(Task::Phase, &nbars, coeffs, &ChannelSetting::Eta(0.9), 0.0).unwrap();
        for pair in rows.windows(2) {
            assert!(
                pair[1].bound <= pair[0].bound * (1.0 + 1e-9),
                "bound not decreasing: {} -> {}",
                pair[0].bound,
                pair[1].bound
            );
        }
    }
}
