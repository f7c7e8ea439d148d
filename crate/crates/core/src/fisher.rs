//! Model-agnostic Fisher information and Cramer-Rao bookkeeping.
//!
//! These routines only see outcome probabilities (or densities) as functions
//! of the delay, so they serve as the independent check on every closed form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{fringe_breakpoints, integrate, QuadSpec};
use crate::types::{FisherMethod, FisherResult, Interferometer, OutcomeTriple, SpectralOutcomeTriple, SpectralParams};
use crate::{hom, noon};

/// Probabilities below this with derivatives below [`NEGLIGIBLE_SLOPE`] are exact zeros.
const NEGLIGIBLE_PROB: f64 = 1e-300;
const NEGLIGIBLE_SLOPE: f64 = 1e-150;

/// A spectrally resolved outcome model: densities over a detected frequency.
pub trait SpectralModel: Sync {
    fn density(&self, tau: f64, omega: f64) -> SpectralOutcomeTriple;

    /// Analytic `d/dtau` of the three densities, when available.
    fn density_tau_derivative(&self, _tau: f64, _omega: f64) -> Option<[f64; 3]> {
        None
    }

    /// Integration window over the detected frequency.
    fn window(&self) -> (f64, f64);

    /// Center and standard deviation of the (delay-independent) frequency marginal.
    fn envelope_center_std(&self) -> (f64, f64);

    fn omega_p(&self) -> f64;

    /// Finite-difference step in the delay.
    fn fd_step(&self) -> f64;
}

/// Finite-difference step for the non-resolved models: `1e-4` over the fastest rate.
pub fn default_step(interferometer: Interferometer, spectral: &SpectralParams) -> f64 {
    match interferometer {
        Interferometer::Hom => 1e-4 / spectral.sigma_minus,
        Interferometer::Noon => 1e-4 / spectral.sigma_plus.max(spectral.omega_p),
    }
}

fn fisher_term(p: f64, slope: f64) -> Option<f64> {
    if p < NEGLIGIBLE_PROB && slope.abs() < NEGLIGIBLE_SLOPE {
        None
    } else {
        Some(slope * slope / p)
    }
}

/// `sum_i (d p_i / d tau)^2 / p_i` by central differences with one level of
/// Richardson extrapolation. `omega_p` only sets [`FisherResult::value_scaled`].
pub fn fi_from_triple<F>(model: F, tau: f64, step: f64, omega_p: f64) -> Result<FisherResult>
where
    F: Fn(f64) -> OutcomeTriple,
{
    if !(step > 0.0) {
        return Err(Error::invalid("step", "finite-difference step must be positive"));
    }
    let centre = model(tau).as_array();
    let coarse_plus = model(tau + step).as_array();
    let coarse_minus = model(tau - step).as_array();
    let fine_plus = model(tau + 0.5 * step).as_array();
    let fine_minus = model(tau - 0.5 * step).as_array();

    let mut value = 0.0;
    let mut err = 0.0;
    for i in 0..3 {
        let p = centre[i];
        if p < 0.0 {
            return Err(Error::NegativeProbability { index: i, value: p });
        }
        let coarse = (coarse_plus[i] - coarse_minus[i]) / (2.0 * step);
        let fine = (fine_plus[i] - fine_minus[i]) / step;
        let slope = (4.0 * fine - coarse) / 3.0;
        if !slope.is_finite() {
            return Err(Error::NonFiniteDerivative { index: i, tau });
        }
        if let Some(term) = fisher_term(p, slope) {
            if !term.is_finite() {
                return Err(Error::NonFiniteDerivative { index: i, tau });
            }
            value += term;
            err += 2.0 * slope.abs() * (slope - fine).abs() / p;
        }
    }
    Ok(FisherResult::new(value, omega_p, FisherMethod::FiniteDifference, err))
}

fn spectral_integrand<M: SpectralModel + ?Sized>(model: &M, tau: f64, omega: f64) -> f64 {
    let d = model.density(tau, omega).as_array();
    let slopes = model.density_tau_derivative(tau, omega).unwrap_or_else(|| {
        let h = model.fd_step();
        let plus = model.density(tau + h, omega).as_array();
        let minus = model.density(tau - h, omega).as_array();
        [0, 1, 2].map(|i| (plus[i] - minus[i]) / (2.0 * h))
    });
    d.iter()
        .zip(slopes)
        .filter_map(|(&p, s)| fisher_term(p, s))
        .sum()
}

/// `int sum_i (d_tau d_i)^2 / d_i d omega` by adaptive quadrature over the model window.
pub fn fi_from_spectral_triple<M: SpectralModel + ?Sized>(model: &M, tau: f64, quad: &QuadSpec) -> Result<FisherResult> {
    let (lo, hi) = model.window();
    let points = fringe_breakpoints(lo, hi, tau, 20_000);
    let r = integrate(|w| spectral_integrand(model, tau, w), &points, quad)?;
    if !r.value.is_finite() {
        return Err(Error::NonFiniteDerivative { index: 0, tau });
    }
    Ok(FisherResult::new(r.value, model.omega_p(), FisherMethod::FreqQuadrature, r.abs_err))
}

/// Cramer-Rao summary for `n` independent repetitions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrbReport {
    pub fisher: FisherResult,
    pub n_repetitions: u64,
    /// `1 / sqrt(N F)`; infinite when the Fisher information vanishes.
    pub delta_tau_crb: f64,
    pub infinite_bound: bool,
    pub qcrb_value: f64,
    /// `F / QCRB`.
    pub saturation: f64,
}

pub fn crb(fisher: FisherResult, n: u64, interferometer: Interferometer, spectral: &SpectralParams) -> Result<CrbReport> {
    if n == 0 {
        return Err(Error::invalid("n_repetitions", "n_repetitions must be at least 1"));
    }
    if !(fisher.value >= 0.0) {
        return Err(Error::invalid("fisher", "Fisher information must be non-negative"));
    }
    let qcrb_value = interferometer.qcrb(spectral);
    let infinite_bound = fisher.value == 0.0;
    let delta_tau_crb = if infinite_bound {
        f64::INFINITY
    } else {
        1.0 / (n as f64 * fisher.value).sqrt()
    };
    Ok(CrbReport {
        fisher,
        n_repetitions: n,
        delta_tau_crb,
        infinite_bound,
        qcrb_value,
        saturation: fisher.value / qcrb_value,
    })
}

/// Fisher information of the configured interferometer and detection mode.
pub fn fisher_information(config: &crate::types::ExperimentConfig, tau: f64) -> Result<FisherResult> {
    use crate::types::Detection::*;
    use crate::types::Interferometer::*;
    let (ch, sp, no) = (&config.channel, &config.spectral, &config.noise);
    match (config.interferometer, config.detection) {
        (Hom, NonResolved) => Ok(hom::hom_fi_nonresolved(tau, ch, sp, no)),
        (Hom, Resolved) => hom::hom_fi_resolved(tau, ch, sp, no),
        (Noon, NonResolved) => Ok(noon::noon_fi_nonresolved(tau, ch, sp, no)),
        (Noon, Resolved) => noon::noon_fi_resolved(tau, ch, sp, no),
    }
}
