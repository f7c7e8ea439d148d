//! Parameter and result types shared by every model.
//!
//! Units: frequencies in rad/s, times in seconds, phases in radians. The
//! models themselves only require a consistent unit system; the usual choice
//! (and the one used by the CLI) is the dimensionless frame with `omega_p = 1`,
//! see [`DimensionlessView`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaussian biphoton spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParams {
    /// RMS bandwidth of the frequency-difference envelope.
    pub sigma_minus: f64,
    /// RMS bandwidth of the frequency-sum (pump) envelope.
    pub sigma_plus: f64,
    /// Pump center frequency.
    pub omega_p: f64,
}

impl SpectralParams {
    /// Figure presets: `omega_p = 100 sigma_minus = 100 sigma_plus`.
    pub fn preset(omega_p: f64) -> Self {
        Self {
            sigma_minus: omega_p / 100.0,
            sigma_plus: omega_p / 100.0,
            omega_p,
        }
    }
}

/// Photon loss and interference visibility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub gamma: f64,
    pub visibility: f64,
}

impl ChannelParams {
    pub const IDEAL: ChannelParams = ChannelParams {
        gamma: 0.0,
        visibility: 1.0,
    };

    pub fn new(gamma: f64, visibility: f64) -> Self {
        Self { gamma, visibility }
    }

    /// `(1 + 3 gamma) / (1 - gamma)`, the single-click baseline.
    pub fn single_click_ratio(&self) -> f64 {
        (1.0 + 3.0 * self.gamma) / (1.0 - self.gamma)
    }

    /// `(1 + 3 gamma) / (1 - gamma) - 1 = 4 gamma / (1 - gamma)`, exact for small gamma.
    pub(crate) fn single_click_excess(&self) -> f64 {
        4.0 * self.gamma / (1.0 - self.gamma)
    }
}

/// Strengths of the Gaussian phase noise.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseParams {
    /// RMS of the frequency-dependent phase shift (a time, seconds).
    pub eta_eps: f64,
    /// RMS of the frequency-independent phase (radians).
    pub eta_theta: f64,
}

impl NoiseParams {
    pub const NONE: NoiseParams = NoiseParams {
        eta_eps: 0.0,
        eta_theta: 0.0,
    };

    pub fn new(eta_eps: f64, eta_theta: f64) -> Self {
        Self { eta_eps, eta_theta }
    }

    pub fn is_noiseless(&self) -> bool {
        self.eta_eps == 0.0 && self.eta_theta == 0.0
    }
}

/// One draw of the noise variables.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseRealization {
    pub eps: f64,
    pub theta: f64,
}

impl NoiseRealization {
    pub const ZERO: NoiseRealization = NoiseRealization {
        eps: 0.0,
        theta: 0.0,
    };

    pub fn new(eps: f64, theta: f64) -> Self {
        Self { eps, theta }
    }
}

/// Probabilities of zero, one and two detector clicks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeTriple {
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
}

impl OutcomeTriple {
    pub fn new(p0: f64, p1: f64, p2: f64) -> Self {
        Self { p0, p1, p2 }
    }

    /// Components indexed by the number of clicks.
    pub fn as_array(&self) -> [f64; 3] {
        [self.p0, self.p1, self.p2]
    }

    pub fn sum(&self) -> f64 {
        self.p0 + self.p1 + self.p2
    }
}

/// Outcome densities per unit detected frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralOutcomeTriple {
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
    /// The detected frequency variable (difference for HOM, sum for N00N).
    pub freq: f64,
}

impl SpectralOutcomeTriple {
    pub fn as_array(&self) -> [f64; 3] {
        [self.d0, self.d1, self.d2]
    }

    pub fn total(&self) -> f64 {
        self.d0 + self.d1 + self.d2
    }

    pub(crate) fn scaled(self, factor: f64) -> Self {
        Self {
            d0: self.d0 * factor,
            d1: self.d1 * factor,
            d2: self.d2 * factor,
            freq: self.freq,
        }
    }
}

/// How a Fisher information value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FisherMethod {
    ClosedForm,
    FreqQuadrature,
    NoiseQuadrature,
    FiniteDifference,
}

impl FisherMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            FisherMethod::ClosedForm => "closed_form",
            FisherMethod::FreqQuadrature => "freq_quadrature",
            FisherMethod::NoiseQuadrature => "noise_quadrature",
            FisherMethod::FiniteDifference => "finite_difference",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherResult {
    /// Fisher information in inverse squared time units.
    pub value: f64,
    /// `value / omega_p^2`.
    pub value_scaled: f64,
    pub method: FisherMethod,
    /// Absolute error bound reported by the numerical method (0 for closed forms).
    pub err_estimate: f64,
}

impl FisherResult {
    pub fn new(value: f64, omega_p: f64, method: FisherMethod, err_estimate: f64) -> Self {
        Self {
            value,
            value_scaled: value / (omega_p * omega_p),
            method,
            err_estimate,
        }
    }

    pub fn closed_form(value: f64, omega_p: f64) -> Self {
        Self::new(value, omega_p, FisherMethod::ClosedForm, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interferometer {
    Hom,
    Noon,
}

impl Interferometer {
    /// Quantum Cramer-Rao bound on the Fisher information per photon pair.
    pub fn qcrb(&self, spectral: &SpectralParams) -> f64 {
        match self {
            Interferometer::Hom => 4.0 * spectral.sigma_minus * spectral.sigma_minus,
            Interferometer::Noon => {
                4.0 * spectral.sigma_plus * spectral.sigma_plus + spectral.omega_p * spectral.omega_p
            }
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Interferometer::Hom => "hom",
            Interferometer::Noon => "noon",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Detection {
    NonResolved,
    Resolved,
}

impl Detection {
    pub fn as_str(&self) -> &'static str {
        match self {
            Detection::NonResolved => "nonresolved",
            Detection::Resolved => "resolved",
        }
    }
}

/// Full description of one sensing scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub spectral: SpectralParams,
    pub channel: ChannelParams,
    pub noise: NoiseParams,
    pub interferometer: Interferometer,
    pub detection: Detection,
}

/// An [`ExperimentConfig`] whose invariants have been checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidatedConfig(ExperimentConfig);

impl ValidatedConfig {
    pub fn get(&self) -> &ExperimentConfig {
        &self.0
    }

    pub fn into_inner(self) -> ExperimentConfig {
        self.0
    }
}

impl std::ops::Deref for ValidatedConfig {
    type Target = ExperimentConfig;

    fn deref(&self) -> &ExperimentConfig {
        &self.0
    }
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("{field} must be positive and finite")))
    }
}

fn non_negative(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("{field} must be non-negative and finite")))
    }
}

impl SpectralParams {
    pub fn validate(&self) -> Result<()> {
        positive("sigma_minus", self.sigma_minus)?;
        positive("sigma_plus", self.sigma_plus)?;
        positive("omega_p", self.omega_p)
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        // gamma = 1 would divide by zero in the single-click baseline.
        if !(self.gamma >= 0.0 && self.gamma < 1.0) {
            return Err(Error::invalid("gamma", "gamma must lie in [0,1)"));
        }
        if !(0.0..=1.0).contains(&self.visibility) {
            return Err(Error::invalid("visibility", "visibility must lie in [0,1]"));
        }
        Ok(())
    }
}

impl NoiseParams {
    pub fn validate(&self) -> Result<()> {
        non_negative("eta_eps", self.eta_eps)?;
        non_negative("eta_theta", self.eta_theta)
    }
}

/// Checks every component invariant and returns the config unchanged.
pub fn validate(config: ExperimentConfig) -> Result<ValidatedConfig> {
    config.spectral.validate()?;
    config.channel.validate()?;
    config.noise.validate()?;
    Ok(ValidatedConfig(config))
}

/// Parameters rescaled to the frame `omega_p = 1`.
///
/// Times become `x = omega_p tau`, bandwidths `sigma / omega_p`, the
/// frequency-dependent noise `eta_eps omega_p`, and Fisher information
/// `F / omega_p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessView {
    /// The absolute pump frequency the view was taken at.
    pub omega_p: f64,
    pub sigma_minus: f64,
    pub sigma_plus: f64,
    pub eta_eps: f64,
    pub eta_theta: f64,
    pub channel: ChannelParams,
}

impl DimensionlessView {
    pub fn of(spectral: &SpectralParams, channel: &ChannelParams, noise: &NoiseParams) -> Self {
        let wp = spectral.omega_p;
        Self {
            omega_p: wp,
            sigma_minus: spectral.sigma_minus / wp,
            sigma_plus: spectral.sigma_plus / wp,
            eta_eps: noise.eta_eps * wp,
            eta_theta: noise.eta_theta,
            channel: *channel,
        }
    }

    pub fn spectral(&self) -> SpectralParams {
        SpectralParams {
            sigma_minus: self.sigma_minus,
            sigma_plus: self.sigma_plus,
            omega_p: 1.0,
        }
    }

    pub fn noise(&self) -> NoiseParams {
        NoiseParams::new(self.eta_eps, self.eta_theta)
    }

    /// Inverse of [`DimensionlessView::of`].
    pub fn to_absolute(&self) -> (SpectralParams, ChannelParams, NoiseParams) {
        let wp = self.omega_p;
        (
            SpectralParams {
                sigma_minus: self.sigma_minus * wp,
                sigma_plus: self.sigma_plus * wp,
                omega_p: wp,
            },
            self.channel,
            NoiseParams::new(self.eta_eps / wp, self.eta_theta),
        )
    }

    pub fn tau_to_scaled(&self, tau: f64) -> f64 {
        tau * self.omega_p
    }

    pub fn tau_from_scaled(&self, x: f64) -> f64 {
        x / self.omega_p
    }

    pub fn fisher_to_scaled(&self, fisher: f64) -> f64 {
        fisher / (self.omega_p * self.omega_p)
    }

    pub fn fisher_from_scaled(&self, scaled: f64) -> f64 {
        scaled * self.omega_p * self.omega_p
    }
}

impl ExperimentConfig {
    pub fn dimensionless_view(&self) -> DimensionlessView {
        DimensionlessView::of(&self.spectral, &self.channel, &self.noise)
    }

    /// The same scenario expressed with `omega_p = 1`.
    pub fn to_dimensionless(&self) -> ExperimentConfig {
        let view = self.dimensionless_view();
        ExperimentConfig {
            spectral: view.spectral(),
            channel: self.channel,
            noise: view.noise(),
            ..*self
        }
    }
}
