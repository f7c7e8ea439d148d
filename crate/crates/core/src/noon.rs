//! Two-photon N00N interferometer: outcome probabilities and Fisher information.
//!
//! The fringe oscillates at the pump frequency (frequency-sum dependence), so
//! both the frequency-dependent shift `eps` and the constant phase `theta`
//! enter, with `theta` doubled by the two-photon state.

use std::f64::consts::PI;

use crate::error::Result;
use crate::fisher::SpectralModel;
use crate::fringe::{fringe_information, fringe_weights, one_minus_scaled_gauss, one_minus_vexp, FringeSign};
use crate::hom::WINDOW_STDS;
use crate::quadrature::{fringe_breakpoints, integrate, QuadSpec};
use crate::types::{
    ChannelParams, FisherMethod, FisherResult, NoiseParams, NoiseRealization, OutcomeTriple, SpectralOutcomeTriple,
    SpectralParams,
};

/// `A' = 1 + 4 sigma_+^2 eta_eps^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoonNoiseFactor {
    pub a_prime: f64,
}

impl NoonNoiseFactor {
    pub fn new(spectral: &SpectralParams, noise: &NoiseParams) -> Self {
        Self {
            a_prime: 1.0 + Self::excess(spectral, noise),
        }
    }

    /// `A' - 1`.
    pub fn excess(spectral: &SpectralParams, noise: &NoiseParams) -> f64 {
        let s = spectral.sigma_plus * noise.eta_eps;
        4.0 * s * s
    }
}

/// `R2 = (1-g)^2/2 (1 + F)`, `R1 = (1-g)^2/2 (b - F)`, `R0 = g^2`, from the
/// compensated weights `1 + F` and `b - F`.
fn triple_from_weights(channel: &ChannelParams, w2: f64, w1: f64) -> OutcomeTriple {
    let g = channel.gamma;
    let half_transmitted = 0.5 * (1.0 - g) * (1.0 - g);
    OutcomeTriple {
        p0: g * g,
        p1: half_transmitted * w1,
        p2: half_transmitted * w2,
    }
}

/// Non-resolved probabilities for a fixed noise realization.
pub fn noon_probs_noiseless(
    tau: f64,
    noise: NoiseRealization,
    channel: &ChannelParams,
    spectral: &SpectralParams,
) -> OutcomeTriple {
    let shifted = tau - noise.eps;
    let d = spectral.sigma_plus * shifted;
    let u = 2.0 * d * d;
    let v = channel.visibility;
    let contrast = v * (-u).exp();
    let phi = spectral.omega_p * shifted + 2.0 * noise.theta;
    let (w2, w1) = fringe_weights(
        FringeSign::Peak,
        contrast,
        one_minus_vexp(v, u),
        channel.single_click_excess(),
        phi,
    );
    triple_from_weights(channel, w2, w1)
}

/// Exponent `Q` of the noise-averaged fringe amplitude
/// `(V / sqrt(A')) exp(-Q)`, `Q = 2 eta_theta^2 + (2 sigma_+^2 tau^2 + eta_eps^2 omega_p^2 / 2) / A'`.
fn averaged_exponent(tau: f64, spectral: &SpectralParams, noise: &NoiseParams, a_prime: f64) -> f64 {
    let s = spectral.sigma_plus * tau;
    let e = noise.eta_eps * spectral.omega_p;
    2.0 * noise.eta_theta * noise.eta_theta + (2.0 * s * s + 0.5 * e * e) / a_prime
}

/// Non-resolved probabilities averaged over both noise processes.
///
/// The Gaussian average over `eps` also rescales the fringe phase to
/// `omega_p tau / A'`.
pub fn noon_probs_noisy(tau: f64, channel: &ChannelParams, spectral: &SpectralParams, noise: &NoiseParams) -> OutcomeTriple {
    let a = NoonNoiseFactor::new(spectral, noise).a_prime;
    let q = averaged_exponent(tau, spectral, noise, a);
    let v = channel.visibility;
    let contrast = v / a.sqrt() * (-q).exp();
    let phi = spectral.omega_p * tau / a;
    let (w2, w1) = fringe_weights(
        FringeSign::Peak,
        contrast,
        one_minus_scaled_gauss(v, NoonNoiseFactor::excess(spectral, noise), q),
        channel.single_click_excess(),
        phi,
    );
    triple_from_weights(channel, w2, w1)
}

fn envelope(omega_plus: f64, spectral: &SpectralParams) -> f64 {
    let d = omega_plus - spectral.omega_p;
    let s = spectral.sigma_plus;
    (-d * d / (8.0 * s * s)).exp()
}

fn resolved(omega: f64, phi: f64, damping: f64, channel: &ChannelParams, spectral: &SpectralParams) -> SpectralOutcomeTriple {
    let g = channel.gamma;
    let s = spectral.sigma_plus;
    let env = envelope(omega, spectral) / (2.0 * PI * s * s).sqrt();
    let v = channel.visibility;
    let (w2, w1) = fringe_weights(
        FringeSign::Peak,
        v * (-damping).exp(),
        one_minus_vexp(v, damping),
        channel.single_click_excess(),
        phi,
    );
    let k = 0.25 * (1.0 - g) * (1.0 - g) * env;
    SpectralOutcomeTriple {
        d0: 0.5 * g * g * env,
        d1: k * w1,
        d2: k * w2,
        freq: omega,
    }
}

/// Resolved densities for a fixed noise realization; they integrate to 1 over
/// the frequency sum.
pub fn noon_resolved_density(
    tau: f64,
    omega_plus: f64,
    noise: NoiseRealization,
    channel: &ChannelParams,
    spectral: &SpectralParams,
) -> SpectralOutcomeTriple {
    resolved(omega_plus, omega_plus * (tau - noise.eps) + 2.0 * noise.theta, 0.0, channel, spectral)
}

/// Visibility damping exponent `2 eta_theta^2 + eta_eps^2 omega_+^2 / 2`.
fn resolved_damping(omega_plus: f64, noise: &NoiseParams) -> f64 {
    let u = omega_plus * noise.eta_eps;
    2.0 * noise.eta_theta * noise.eta_theta + 0.5 * u * u
}

/// Noise-averaged resolved densities.
pub fn noon_resolved_density_noisy(
    tau: f64,
    omega_plus: f64,
    channel: &ChannelParams,
    spectral: &SpectralParams,
    noise: &NoiseParams,
) -> SpectralOutcomeTriple {
    resolved(omega_plus, omega_plus * tau, resolved_damping(omega_plus, noise), channel, spectral)
}

/// Noise-averaged resolved N00N model for the generic Fisher and sampling code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoonSpectralModel {
    pub channel: ChannelParams,
    pub spectral: SpectralParams,
    pub noise: NoiseParams,
}

impl NoonSpectralModel {
    pub fn new(channel: ChannelParams, spectral: SpectralParams, noise: NoiseParams) -> Self {
        Self {
            channel,
            spectral,
            noise,
        }
    }
}

impl SpectralModel for NoonSpectralModel {
    fn density(&self, tau: f64, omega: f64) -> SpectralOutcomeTriple {
        noon_resolved_density_noisy(tau, omega, &self.channel, &self.spectral, &self.noise)
    }

    fn density_tau_derivative(&self, tau: f64, omega: f64) -> Option<[f64; 3]> {
        let g = self.channel.gamma;
        let s = self.spectral.sigma_plus;
        let env = envelope(omega, &self.spectral) / (2.0 * PI * s * s).sqrt();
        let v_eff = self.channel.visibility * (-resolved_damping(omega, &self.noise)).exp();
        let slope = 0.25 * (1.0 - g) * (1.0 - g) * env * v_eff * omega * (omega * tau).sin();
        Some([0.0, slope, -slope])
    }

    fn window(&self) -> (f64, f64) {
        let half = WINDOW_STDS * 2.0 * self.spectral.sigma_plus;
        (self.spectral.omega_p - half, self.spectral.omega_p + half)
    }

    fn envelope_center_std(&self) -> (f64, f64) {
        (self.spectral.omega_p, 2.0 * self.spectral.sigma_plus)
    }

    fn omega_p(&self) -> f64 {
        self.spectral.omega_p
    }

    fn fd_step(&self) -> f64 {
        1e-4 / self.spectral.sigma_plus.max(self.spectral.omega_p)
    }
}

/// Closed-form non-resolved Fisher information of [`noon_probs_noisy`].
///
/// Written as `(1 - g^2) V^2 e^{-2Q} (4 s^2 tau c + omega_p s)^2 / A'^2 / den`
/// with every exponential decaying, so nothing overflows for strong noise.
/// The denominator is assembled from non-negative parts; it vanishes only at
/// the ideal zero-delay point, where the limit `4 sigma_+^2 + omega_p^2` is
/// returned.
pub fn noon_fi_nonresolved(tau: f64, channel: &ChannelParams, spectral: &SpectralParams, noise: &NoiseParams) -> FisherResult {
    let wp = spectral.omega_p;
    let v = channel.visibility;
    if v == 0.0 {
        return FisherResult::closed_form(0.0, wp);
    }
    let g = channel.gamma;
    let a = NoonNoiseFactor::new(spectral, noise).a_prime;
    let root_a = a.sqrt();
    let q = averaged_exponent(tau, spectral, noise, a);
    let decay = (-q).exp();
    let s2 = spectral.sigma_plus * spectral.sigma_plus;
    let (sin, cos) = (wp * tau / a).sin_cos();

    let slope = 4.0 * s2 * tau * cos + wp * sin;
    let numerator = (1.0 - g * g) * v * v * decay * decay * slope * slope / (a * a);

    // den = b A' + (b - 1) V sqrt(A') c e^{-Q} - V^2 c^2 e^{-2Q}
    //     = (b - 1) sqrt(A') (sqrt(A') + V c e^{-Q}) + (A' - 1) + (1 - V^2)
    //       + V^2 (1 - e^{-2Q} + e^{-2Q} s^2)
    let excess = channel.single_click_excess();
    let a_minus_1 = NoonNoiseFactor::excess(spectral, noise);
    let denominator = excess * root_a * (root_a + v * cos * decay)
        + a_minus_1
        + (1.0 - v) * (1.0 + v)
        + v * v * (-(-2.0 * q).exp_m1() + decay * decay * sin * sin);

    let value = if denominator > 0.0 {
        numerator / denominator
    } else {
        4.0 * s2 + wp * wp
    };
    FisherResult::closed_form(value, wp)
}

/// Resolved Fisher-information integrand at frequency sum `omega`.
pub fn noon_fi_resolved_integrand(
    tau: f64,
    omega: f64,
    channel: &ChannelParams,
    spectral: &SpectralParams,
    noise: &NoiseParams,
) -> f64 {
    let g = channel.gamma;
    let s = spectral.sigma_plus;
    let env = envelope(omega, spectral) / (2.0 * PI * s * s).sqrt();
    let damping = resolved_damping(omega, noise);
    let v = channel.visibility;
    let k = 0.25 * (1.0 - g) * (1.0 - g) * env;
    k * omega
        * omega
        * fringe_information(
            FringeSign::Peak,
            v * (-damping).exp(),
            one_minus_vexp(v, damping),
            channel.single_click_excess(),
            omega * tau,
        )
}

/// Resolved Fisher information by adaptive quadrature over the frequency sum.
pub fn noon_fi_resolved(
    tau: f64,
    channel: &ChannelParams,
    spectral: &SpectralParams,
    noise: &NoiseParams,
) -> Result<FisherResult> {
    noon_fi_resolved_with(tau, channel, spectral, noise, &QuadSpec::default())
}

pub fn noon_fi_resolved_with(
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
    let half = WINDOW_STDS * 2.0 * spectral.sigma_plus;
    let points = fringe_breakpoints(wp - half, wp + half, tau, 20_000);
    let r = integrate(|w| noon_fi_resolved_integrand(tau, w, channel, spectral, noise), &points, quad)?;
    Ok(FisherResult::new(r.value, wp, FisherMethod::FreqQuadrature, r.abs_err))
}

#[cfg(test)]
mod tests {
    use super::*;

    const IDEAL: ChannelParams = ChannelParams::IDEAL;

    fn spectral() -> SpectralParams {
        SpectralParams::preset(1.0)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn constructive_peak_and_flip() {
        let t = noon_probs_noiseless(0.0, NoiseRealization::ZERO, &IDEAL, &spectral());
        assert_eq!((t.p2, t.p1, t.p0), (1.0, 0.0, 0.0));
        let t = noon_probs_noiseless(0.0, NoiseRealization::new(0.0, PI / 2.0), &IDEAL, &spectral());
        assert!(close(t.p2, 0.0, 1e-16) && close(t.p1, 1.0, 1e-16));
    }

    #[test]
    fn envelope_kills_fringe_far_from_zero_delay() {
        let ch = ChannelParams::new(0.3, 0.8);
        let t = noon_probs_noiseless(1e4, NoiseRealization::ZERO, &ch, &spectral());
        let h = 0.5 * 0.7 * 0.7;
        assert!(close(t.p2, h, 1e-15));
        assert!(close(t.p1, h * 1.9 / 0.7, 1e-15));
        assert!(close(t.p0, 0.09, 1e-16));
    }

    #[test]
    fn noisy_reduces_to_noiseless_without_noise() {
        let ch = ChannelParams::new(0.25, 0.9);
        for tau in [-30.0, 0.0, 1.3, 77.0] {
            let a = noon_probs_noisy(tau, &ch, &spectral(), &NoiseParams::NONE);
            let b = noon_probs_noiseless(tau, NoiseRealization::ZERO, &ch, &spectral());
            assert!(close(a.p2, b.p2, 1e-16) && close(a.p1, b.p1, 1e-16) && a.p0 == b.p0, "{tau}");
        }
    }

    #[test]
    fn constant_phase_noise_attenuation() {
        let et = 0.6;
        let t = noon_probs_noisy(0.0, &IDEAL, &spectral(), &NoiseParams::new(0.0, et));
        assert!(close(t.p2, 0.5 * (1.0 + (-2.0 * et * et).exp()), 1e-15));
    }

    #[test]
    fn resolved_special_points() {
        let s = spectral();
        let d = noon_resolved_density(0.0, s.omega_p, NoiseRealization::ZERO, &IDEAL, &s);
        let fringe_free = 0.25 / (2.0 * PI * s.sigma_plus * s.sigma_plus).sqrt();
        assert!(close(d.d2, 2.0 * fringe_free, 1e-12));
        assert_eq!(d.d1, 0.0);
        for w in [0.9, 1.0, 1.05] {
            let d = noon_resolved_density_noisy(3.0, w, &IDEAL, &s, &NoiseParams::new(0.5, 0.2));
            assert_eq!(d.d0, 0.0);
        }
    }

    #[test]
    fn resolved_noise_attenuation() {
        let s = spectral();
        let fringe = |noise: NoiseParams| {
            let d = noon_resolved_density_noisy(0.0, s.omega_p, &IDEAL, &s, &noise);
            d.d2 - d.d1
        };
        let clean = fringe(NoiseParams::NONE);
        assert!(close(fringe(NoiseParams::new(1.0, 0.0)) / clean, (-0.5f64).exp(), 1e-14));
        assert!(close(fringe(NoiseParams::new(0.0, 1.0)) / clean, (-2.0f64).exp(), 1e-14));
    }

    #[test]
    fn nonresolved_fi_anchor_and_limit() {
        let s = spectral();
        let qcrb = 4.0 * s.sigma_plus * s.sigma_plus + 1.0;
        assert_eq!(noon_fi_nonresolved(0.0, &IDEAL, &s, &NoiseParams::NONE).value, qcrb);
        let near = noon_fi_nonresolved(1e-6, &IDEAL, &s, &NoiseParams::NONE).value;
        assert!(close(near, qcrb, 1e-9));
    }

    #[test]
    fn nonresolved_fi_ideal_noiseless_form() {
        let s = spectral();
        let s2 = s.sigma_plus * s.sigma_plus;
        for tau in [PI / 2.0, 0.3, 5.0, 40.0] {
            let f = noon_fi_nonresolved(tau, &IDEAL, &s, &NoiseParams::NONE).value;
            let num = (4.0 * s2 * tau * tau.cos() + tau.sin()).powi(2);
            let expect = num / ((4.0 * s2 * tau * tau).exp() - tau.cos().powi(2));
            assert!(close(f, expect, 1e-13 * expect), "{tau}: {f} vs {expect}");
        }
    }

    #[test]
    fn strong_noise_does_not_overflow() {
        let s = spectral();
        let f = noon_fi_nonresolved(0.7, &ChannelParams::new(0.4, 0.9), &s, &NoiseParams::new(40.0, 3.0));
        assert!(f.value.is_finite() && f.value >= 0.0 && f.value < 1e-300);
    }

    #[test]
    fn resolved_fi_reaches_qcrb_at_any_delay() {
        let s = spectral();
        let qcrb = 4.0 * s.sigma_plus * s.sigma_plus + 1.0;
        for tau in [0.0, 3.3, 100.0, 499.0] {
            let f = noon_fi_resolved(tau, &IDEAL, &s, &NoiseParams::NONE).unwrap().value;
            assert!(((f - qcrb) / qcrb).abs() < 1e-9, "{tau}: {f}");
        }
    }

    #[test]
    fn visibility_zero_gives_no_information() {
        let ch = ChannelParams::new(0.1, 0.0);
        assert_eq!(noon_fi_nonresolved(0.4, &ch, &spectral(), &NoiseParams::NONE).value, 0.0);
        assert_eq!(noon_fi_resolved(0.4, &ch, &spectral(), &NoiseParams::NONE).unwrap().value, 0.0);
    }
}
