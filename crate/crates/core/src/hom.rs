//! Hong-Ou-Mandel interferometer: outcome probabilities and Fisher information.
//!
//! The coincidence dip depends on the biphoton frequency difference, so the
//! interference only sees the frequency-dependent noise `eps`; the constant
//! phase `theta` drops out of every expression here.

use std::f64::consts::PI;

use crate::error::Result;
use crate::fisher::SpectralModel;
use crate::fringe::{fringe_information, fringe_weights, one_minus_scaled_gauss, one_minus_vexp, FringeSign};
use crate::quadrature::{fringe_breakpoints, integrate, QuadSpec};
use crate::types::{
    ChannelParams, FisherMethod, FisherResult, NoiseParams, NoiseRealization, OutcomeTriple, SpectralOutcomeTriple,
    SpectralParams,
};

/// Resolved-frequency window half-width in envelope standard deviations.
pub const WINDOW_STDS: f64 = 8.0;

/// Visibility degradation `A = 1 + 4 sigma_-^2 eta_eps^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomNoiseFactor {
    pub a_factor: f64,
}

impl HomNoiseFactor {
    pub fn new(spectral: &SpectralParams, noise: &NoiseParams) -> Self {
        Self {
            a_factor: 1.0 + Self::excess(spectral, noise),
        }
    }

    /// `A - 1`, kept separately since it can be far below machine epsilon.
    pub fn excess(spectral: &SpectralParams, noise: &NoiseParams) -> f64 {
        let s = spectral.sigma_minus * noise.eta_eps;
        4.0 * s * s
    }
}

/// Non-resolved probabilities for a fixed noise realization. `theta` is ignored.
pub fn hom_probs_noiseless(
    tau: f64,
    noise: NoiseRealization,
    channel: &ChannelParams,
    spectral: &SpectralParams,
) -> OutcomeTriple {
    let d = spectral.sigma_minus * (tau - noise.eps);
    let y = 2.0 * d * d;
    triple_from_dip(
        channel,
        one_minus_scaled_gauss(channel.visibility, 0.0, y),
        channel.visibility * (-y).exp(),
    )
}

/// Non-resolved probabilities averaged over `eps ~ N(0, eta_eps^2)`.
pub fn hom_probs_noisy(tau: f64, channel: &ChannelParams, spectral: &SpectralParams, noise: &NoiseParams) -> OutcomeTriple {
    let a = HomNoiseFactor::new(spectral, noise).a_factor;
    let s = spectral.sigma_minus;
    let y = 2.0 * s * s * tau * tau / a;
    let contrast = channel.visibility / a.sqrt() * (-y).exp();
    let excess = HomNoiseFactor::excess(spectral, noise);
    triple_from_dip(channel, one_minus_scaled_gauss(channel.visibility, excess, y), contrast)
}

/// `R2 = (1-g)^2/2 (1 - D)`, `R1 = (1-g)^2/2 (b + D)`, `R0 = g^2`.
fn triple_from_dip(channel: &ChannelParams, one_minus_d: f64, d: f64) -> OutcomeTriple {
    let g = channel.gamma;
    let half_transmitted = 0.5 * (1.0 - g) * (1.0 - g);
    OutcomeTriple {
        p0: g * g,
        // b (1-g)^2 / 2 = (1 + 3g)(1 - g) / 2
        p1: 0.5 * (1.0 + 3.0 * g) * (1.0 - g) + half_transmitted * d,
        p2: half_transmitted * one_minus_d,
    }
}

fn envelope(omega_minus: f64, sigma: f64) -> f64 {
    (-omega_minus * omega_minus / (8.0 * sigma * sigma)).exp()
}

/// Resolved densities for a fixed noise realization, in the convention where
/// the three densities integrate to 2 over the frequency difference.
pub fn hom_resolved_density(
    tau: f64,
    omega_minus: f64,
    noise: NoiseRealization,
    channel: &ChannelParams,
    spectral: &SpectralParams,
) -> SpectralOutcomeTriple {
    resolved(omega_minus, omega_minus * (tau - noise.eps), 0.0, channel, spectral)
}

/// Noise-averaged resolved densities (same convention as [`hom_resolved_density`]).
///
/// Averaging the fringe over `eps` multiplies the visibility by
/// `exp(-omega_-^2 eta_eps^2 / 2)`; the envelope is unchanged.
pub fn hom_resolved_density_noisy(
    tau: f64,
    omega_minus: f64,
    channel: &ChannelParams,
    spectral: &SpectralParams,
    noise: &NoiseParams,
) -> SpectralOutcomeTriple {
    let u = omega_minus * noise.eta_eps;
    resolved(omega_minus, omega_minus * tau, 0.5 * u * u, channel, spectral)
}

/// `damping` is the exponent of the visibility loss, `V' = V exp(-damping)`.
fn resolved(omega: f64, phi: f64, damping: f64, channel: &ChannelParams, spectral: &SpectralParams) -> SpectralOutcomeTriple {
    let g = channel.gamma;
    let sigma = spectral.sigma_minus;
    let norm = (2.0 * PI * sigma * sigma).sqrt();
    let env = envelope(omega, sigma) / norm;
    let v_eff = channel.visibility * (-damping).exp();
    let one_minus_v = one_minus_vexp(channel.visibility, damping);
    let (w2, w1) = fringe_weights(FringeSign::Dip, v_eff, one_minus_v, channel.single_click_excess(), phi);
    let k = 0.5 * (1.0 - g) * (1.0 - g) * env;
    SpectralOutcomeTriple {
        d0: g * g * env,
        d1: k * w1,
        d2: k * w2,
        freq: omega,
    }
}

fn tau_derivative(omega: f64, phi: f64, v_eff: f64, channel: &ChannelParams, spectral: &SpectralParams) -> [f64; 3] {
    let g = channel.gamma;
    let sigma = spectral.sigma_minus;
    let env = envelope(omega, sigma) / (2.0 * PI * sigma * sigma).sqrt();
    let k = 0.5 * (1.0 - g) * (1.0 - g) * env;
    let slope = k * v_eff * omega * phi.sin();
    [0.0, -slope, slope]
}

/// Normalization of the resolved HOM densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomDensityConvention {
    /// Densities integrate to 2 (each pair appears at `+omega_-` and `-omega_-`).
    PairSymmetric,
    /// Densities integrate to 1; the per-pair likelihood.
    PerPair,
}

/// Noise-averaged resolved HOM model for the generic Fisher and sampling code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomSpectralModel {
    pub channel: ChannelParams,
    pub spectral: SpectralParams,
    pub noise: NoiseParams,
    pub convention: HomDensityConvention,
}

impl HomSpectralModel {
    pub fn per_pair(channel: ChannelParams, spectral: SpectralParams, noise: NoiseParams) -> Self {
        Self {
            channel,
            spectral,
            noise,
            convention: HomDensityConvention::PerPair,
        }
    }

    fn scale(&self) -> f64 {
        match self.convention {
            HomDensityConvention::PairSymmetric => 1.0,
            HomDensityConvention::PerPair => 0.5,
        }
    }

    fn v_eff(&self, omega: f64) -> f64 {
        let u = omega * self.noise.eta_eps;
        self.channel.visibility * (-0.5 * u * u).exp()
    }
}

impl SpectralModel for HomSpectralModel {
    fn density(&self, tau: f64, omega: f64) -> SpectralOutcomeTriple {
        hom_resolved_density_noisy(tau, omega, &self.channel, &self.spectral, &self.noise).scaled(self.scale())
    }

    fn density_tau_derivative(&self, tau: f64, omega: f64) -> Option<[f64; 3]> {
        let d = tau_derivative(omega, omega * tau, self.v_eff(omega), &self.channel, &self.spectral);
        Some(d.map(|x| x * self.scale()))
    }

    fn window(&self) -> (f64, f64) {
        let half = WINDOW_STDS * 2.0 * self.spectral.sigma_minus;
        (-half, half)
    }

    fn envelope_center_std(&self) -> (f64, f64) {
        (0.0, 2.0 * self.spectral.sigma_minus)
    }

    fn omega_p(&self) -> f64 {
        self.spectral.omega_p
    }

    fn fd_step(&self) -> f64 {
        1e-4 / self.spectral.sigma_minus
    }
}

/// Closed-form non-resolved Fisher information of the noise-averaged probabilities.
///
/// At `tau = 0` with `V = 1` and no noise the expression is 0/0; the limit
/// `4 sigma_-^2 (1 - gamma)^2` is returned.
pub fn hom_fi_nonresolved(tau: f64, channel: &ChannelParams, spectral: &SpectralParams, noise: &NoiseParams) -> FisherResult {
    let wp = spectral.omega_p;
    let v = channel.visibility;
    if v == 0.0 {
        return FisherResult::closed_form(0.0, wp);
    }
    let g = channel.gamma;
    let a = HomNoiseFactor::new(spectral, noise).a_factor;
    let s2 = spectral.sigma_minus * spectral.sigma_minus;
    let y = 2.0 * s2 * tau * tau / a;
    let contrast = v / a.sqrt() * (-y).exp();
    let one_minus_d = one_minus_scaled_gauss(v, HomNoiseFactor::excess(spectral, noise), y);
    let b = channel.single_click_ratio();

    // 8 V^2 tau^2 s^4 (1-g)^2 e^{-4 s^2 tau^2 / A} / A^3 = 8 s^4 (1-g)^2 tau^2 D^2 / A^2
    let prefactor = 8.0 * s2 * s2 * (1.0 - g) * (1.0 - g) * contrast * contrast / (a * a);
    let dip_term = if one_minus_d > 0.0 {
        tau * tau / one_minus_d
    } else {
        // 1 - D = 2 s^2 tau^2 + O(tau^4) when V = A = 1.
        1.0 / (2.0 * s2)
    };
    let value = prefactor * (dip_term + tau * tau / (b + contrast));
    FisherResult::closed_form(value, wp)
}

/// Integrand of the resolved Fisher information at frequency difference `omega`,
/// for the per-pair normalized densities.
pub fn hom_fi_resolved_integrand(
    tau: f64,
    omega: f64,
    channel: &ChannelParams,
    spectral: &SpectralParams,
    noise: &NoiseParams,
) -> f64 {
    let g = channel.gamma;
    let sigma = spectral.sigma_minus;
    let u = omega * noise.eta_eps;
    let v_eff = channel.visibility * (-0.5 * u * u).exp();
    let one_minus_v = one_minus_vexp(channel.visibility, 0.5 * u * u);
    let env = envelope(omega, sigma) / (2.0 * PI * sigma * sigma).sqrt();
    // Per-pair prefactor (1-g)^2 / 4 times the envelope density.
    let k = 0.25 * (1.0 - g) * (1.0 - g) * env;
    k * omega * omega * fringe_information(FringeSign::Dip, v_eff, one_minus_v, channel.single_click_excess(), omega * tau)
}

/// Resolved Fisher information per photon pair, by adaptive quadrature over
/// the frequency difference.
pub fn hom_fi_resolved(
    tau: f64,
    channel: &ChannelParams,
    spectral: &SpectralParams,
    noise: &NoiseParams,
) -> Result<FisherResult> {
    hom_fi_resolved_with(tau, channel, spectral, noise, &QuadSpec::default())
}

pub fn hom_fi_resolved_with(
    tau: f64,
    channel: &ChannelParams,
    spectral: &SpectralParams,
    noise: &NoiseParams,
    quad: &QuadSpec,
) -> Result<FisherResult> {
    let wp = spectral.omega_p;
    if channel.visibility == 0.0 {
        return Ok(FisherResult::new(0.0, wp, FisherMethod::FreqQuadrature, 0.0));
    }
    let half = WINDOW_STDS * 2.0 * spectral.sigma_minus;
    let points = fringe_breakpoints(-half, half, tau, 20_000);
    let r = integrate(|w| hom_fi_resolved_integrand(tau, w, channel, spectral, noise), &points, quad)?;
    Ok(FisherResult::new(r.value, wp, FisherMethod::FreqQuadrature, r.abs_err))
}

#[cfg(test)]
mod tests {
    use super::*;

    const IDEAL: ChannelParams = ChannelParams::IDEAL;

    fn spectral() -> SpectralParams {
        SpectralParams {
            sigma_minus: 1.0,
            sigma_plus: 1.0,
            omega_p: 100.0,
        }
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn perfect_bunching_at_zero_delay() {
        let t = hom_probs_noiseless(0.0, NoiseRealization::ZERO, &IDEAL, &spectral());
        assert_eq!((t.p2, t.p1, t.p0), (0.0, 1.0, 0.0));
    }

    #[test]
    fn distinguishable_limit() {
        let t = hom_probs_noiseless(50.0, NoiseRealization::ZERO, &IDEAL, &spectral());
        assert!(close(t.p2, 0.5, 1e-15) && close(t.p1, 0.5, 1e-15) && t.p0 == 0.0);
    }

    #[test]
    fn lossy_zero_delay_values() {
        let ch = ChannelParams::new(0.4, 0.9);
        let t = hom_probs_noiseless(0.0, NoiseRealization::ZERO, &ch, &spectral());
        // 0.18 (1 - 0.9) = 0.018; 0.18 (3.666.. + 0.9) = 0.822; 0.4^2 = 0.16
        assert!(close(t.p2, 0.018, 1e-15));
        assert!(close(t.p1, 0.822, 1e-15));
        assert!(close(t.p0, 0.16, 1e-15));
        assert!(close(t.sum(), 1.0, 1e-15));
    }

    #[test]
    fn theta_is_ignored() {
        let ch = ChannelParams::new(0.2, 0.8);
        let a = hom_probs_noiseless(0.3, NoiseRealization::new(0.1, 0.0), &ch, &spectral());
        let b = hom_probs_noiseless(0.3, NoiseRealization::new(0.1, 2.7), &ch, &spectral());
        assert_eq!(a, b);
        let a = hom_resolved_density(0.3, 1.2, NoiseRealization::new(0.1, 0.0), &ch, &spectral());
        let b = hom_resolved_density(0.3, 1.2, NoiseRealization::new(0.1, -4.0), &ch, &spectral());
        assert_eq!(a, b);
    }

    #[test]
    fn noisy_reduces_to_noiseless_without_noise() {
        let ch = ChannelParams::new(0.3, 0.85);
        for tau in [-2.0, 0.0, 0.1, 0.7, 3.0] {
            let a = hom_probs_noisy(tau, &ch, &spectral(), &NoiseParams::NONE);
            let b = hom_probs_noiseless(tau, NoiseRealization::ZERO, &ch, &spectral());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn strong_noise_washes_out_interference() {
        let t = hom_probs_noisy(0.0, &IDEAL, &spectral(), &NoiseParams::new(1e6, 0.0));
        assert!(close(t.p2, 0.5, 1e-6) && close(t.p1, 0.5, 1e-6));
    }

    #[test]
    fn resolved_density_special_points() {
        let ch = ChannelParams::new(0.4, 0.9);
        let s = spectral();
        let d = hom_resolved_density(1.7, 0.0, NoiseRealization::ZERO, &ch, &s);
        let expect = 0.5 * 0.36 * 0.1 / (2.0 * PI).sqrt();
        assert!(close(d.d2, expect, 1e-16));

        for w in [-3.0, -0.2, 0.0, 0.9, 5.0] {
            let d = hom_resolved_density(0.4, w, NoiseRealization::new(0.4, 0.0), &IDEAL, &s);
            assert_eq!(d.d2, 0.0);
        }
    }

    #[test]
    fn resolved_noise_suppresses_fringe() {
        let s = spectral();
        let eta = 0.5;
        let w = 1.0 / eta;
        let noisy = hom_resolved_density_noisy(0.0, w, &IDEAL, &s, &NoiseParams::new(eta, 0.0));
        let clean = hom_resolved_density_noisy(0.0, w, &IDEAL, &s, &NoiseParams::NONE);
        // Fringe term is (d1 - d2) / 2 for gamma = 0.
        let ratio = (noisy.d1 - noisy.d2) / (clean.d1 - clean.d2);
        assert!(close(ratio, (-0.5f64).exp(), 1e-14));
        assert!(close(ratio, 0.6065306597, 1e-10));
    }

    #[test]
    fn resolved_noisy_reduces_to_noiseless() {
        let ch = ChannelParams::new(0.1, 0.7);
        for (tau, w) in [(0.0, 0.3), (1.3, -2.0), (4.0, 0.01)] {
            let a = hom_resolved_density_noisy(tau, w, &ch, &spectral(), &NoiseParams::NONE);
            let b = hom_resolved_density(tau, w, NoiseRealization::ZERO, &ch, &spectral());
            assert!(close(a.d1, b.d1, 1e-17) && close(a.d2, b.d2, 1e-17) && a.d0 == b.d0);
        }
    }

    #[test]
    fn nonresolved_fi_ideal_values() {
        let s = spectral();
        let at0 = hom_fi_nonresolved(0.0, &IDEAL, &s, &NoiseParams::NONE).value;
        assert!(close(at0, 4.0, 1e-15));
        let small = hom_fi_nonresolved(1e-5, &IDEAL, &s, &NoiseParams::NONE).value;
        assert!(close(small, 4.0, 1e-8));
        let half = hom_fi_nonresolved(0.5, &IDEAL, &s, &NoiseParams::NONE).value;
        assert!(close(half, 4.0 / (std::f64::consts::E - 1.0), 1e-14));
        // Any noise turns the zero-delay maximum into a zero.
        let noisy = hom_fi_nonresolved(0.0, &IDEAL, &s, &NoiseParams::new(0.01, 0.0)).value;
        assert_eq!(noisy, 0.0);
    }

    #[test]
    fn nonresolved_fi_matches_ideal_noisy_simplification() {
        let s = spectral();
        let eta = 0.3;
        let a: f64 = 1.0 + 4.0 * eta * eta;
        for tau in [0.2, 0.9, 2.0] {
            let f = hom_fi_nonresolved(tau, &IDEAL, &s, &NoiseParams::new(eta, 0.0)).value;
            let expect = 16.0 * tau * tau / (a * a * (a * (4.0 * tau * tau / a).exp() - 1.0));
            assert!(close(f, expect, 1e-14 * expect), "{tau}");
        }
    }

    #[test]
    fn visibility_zero_gives_no_information() {
        let ch = ChannelParams::new(0.2, 0.0);
        assert_eq!(hom_fi_nonresolved(0.4, &ch, &spectral(), &NoiseParams::NONE).value, 0.0);
        assert_eq!(hom_fi_resolved(0.4, &ch, &spectral(), &NoiseParams::NONE).unwrap().value, 0.0);
    }

    #[test]
    fn resolved_fi_reaches_qcrb_at_any_delay() {
        let s = spectral();
        for tau in [0.0, 0.37, 1.0, 2.5, 5.0] {
            let f = hom_fi_resolved(tau, &IDEAL, &s, &NoiseParams::NONE).unwrap();
            assert!(((f.value - 4.0) / 4.0).abs() < 1e-9, "{tau}: {}", f.value);
            assert_eq!(f.method, FisherMethod::FreqQuadrature);
        }
    }

    #[test]
    fn noise_factor() {
        assert_eq!(HomNoiseFactor::new(&spectral(), &NoiseParams::NONE).a_factor, 1.0);
        let a = HomNoiseFactor::new(&SpectralParams::preset(1.0), &NoiseParams::new(3.0, 0.0)).a_factor;
        assert!(close(a, 1.0036, 1e-15));
    }
}
