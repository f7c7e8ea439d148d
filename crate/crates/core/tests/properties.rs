//! Invariants of the models checked on random scenarios.

use approx::assert_relative_eq;
use proptest::prelude::*;

use biphoton::fisher::{default_step, fi_from_triple, fisher_information};
use biphoton::hom::{hom_fi_nonresolved, hom_fi_resolved, hom_probs_noiseless, hom_probs_noisy};
use biphoton::noise_oracle::average_over_noise;
use biphoton::noon::{noon_fi_nonresolved, noon_fi_resolved, noon_probs_noiseless, noon_probs_noisy};
use biphoton::simulation::{sample_counts, stream_rng, sample_counts_with};
use biphoton::strategy::{peak_fisher, tau_grid};
use biphoton::{
    ChannelParams, Detection, ExperimentConfig, Interferometer, NoiseParams, NoiseRealization, OutcomeTriple,
    SpectralParams,
};

#[derive(Debug, Clone, Copy)]
struct Scenario {
    spectral: SpectralParams,
    channel: ChannelParams,
    noise: NoiseParams,
    /// Delay in units of `1 / omega_p`.
    x: f64,
}

impl Scenario {
    fn tau(&self) -> f64 {
        self.x / self.spectral.omega_p
    }

    fn config(&self, interferometer: Interferometer, detection: Detection) -> ExperimentConfig {
        ExperimentConfig {
            spectral: self.spectral,
            channel: self.channel,
            noise: self.noise,
            interferometer,
            detection,
        }
    }
}

fn scenario() -> impl Strategy<Value = Scenario> {
    (
        0.5f64..2.0,
        0.005f64..0.05,
        0.005f64..0.05,
        0.0f64..0.9,
        0.0f64..=1.0,
        0.0f64..4.0,
        0.0f64..1.5,
        -300.0f64..300.0,
    )
        .prop_map(|(wp, sm, sp, gamma, v, ee, et, x)| Scenario {
            spectral: SpectralParams {
                sigma_minus: sm * wp,
                sigma_plus: sp * wp,
                omega_p: wp,
            },
            channel: ChannelParams::new(gamma, v),
            noise: NoiseParams::new(ee / wp, et),
            x,
        })
}

fn probs(interferometer: Interferometer, s: &Scenario, tau: f64) -> OutcomeTriple {
    match interferometer {
        Interferometer::Hom => hom_probs_noisy(tau, &s.channel, &s.spectral, &s.noise),
        Interferometer::Noon => noon_probs_noisy(tau, &s.channel, &s.spectral, &s.noise),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn triples_are_distributions(s in scenario()) {
        for i in [Interferometer::Hom, Interferometer::Noon] {
            let t = probs(i, &s, s.tau());
            prop_assert!(t.as_array().iter().all(|&p| (0.0..=1.0).contains(&p)));
            prop_assert!((t.sum() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn hom_ignores_constant_phase(s in scenario(), theta in -3.0f64..3.0, other in 0.0f64..2.0) {
        let a = hom_probs_noiseless(s.tau(), NoiseRealization::new(0.0, 0.0), &s.channel, &s.spectral);
        let b = hom_probs_noiseless(s.tau(), NoiseRealization::new(0.0, theta), &s.channel, &s.spectral);
        prop_assert_eq!(a, b);
        let shifted = NoiseParams::new(s.noise.eta_eps, other);
        prop_assert_eq!(
            hom_probs_noisy(s.tau(), &s.channel, &s.spectral, &s.noise),
            hom_probs_noisy(s.tau(), &s.channel, &s.spectral, &shifted)
        );
        prop_assert_eq!(
            hom_fi_nonresolved(s.tau(), &s.channel, &s.spectral, &s.noise).value,
            hom_fi_nonresolved(s.tau(), &s.channel, &s.spectral, &shifted).value
        );
    }

    #[test]
    fn closed_forms_match_noise_average(s in scenario()) {
        let tau = s.tau();
        for order in [64, 96] {
            let hom = average_over_noise(|r| hom_probs_noiseless(tau, r, &s.channel, &s.spectral).p2, &s.noise, order).unwrap();
            let noon = average_over_noise(|r| noon_probs_noiseless(tau, r, &s.channel, &s.spectral).p2, &s.noise, order).unwrap();
            let hom_ref = hom_probs_noisy(tau, &s.channel, &s.spectral, &s.noise).p2;
            let noon_ref = noon_probs_noisy(tau, &s.channel, &s.spectral, &s.noise).p2;
            prop_assert!((hom - hom_ref).abs() <= 1e-8 * hom_ref.abs().max(1e-12), "hom {hom} vs {hom_ref}");
            prop_assert!((noon - noon_ref).abs() <= 1e-8 * noon_ref.abs().max(1e-12), "noon {noon} vs {noon_ref}");
        }
    }

    #[test]
    fn closed_fisher_matches_finite_differences(s in scenario()) {
        let tau = s.tau();
        let wp = s.spectral.omega_p;
        let cases = [
            (Interferometer::Hom, hom_fi_nonresolved(tau, &s.channel, &s.spectral, &s.noise).value),
            (Interferometer::Noon, noon_fi_nonresolved(tau, &s.channel, &s.spectral, &s.noise).value),
        ];
        for (i, closed) in cases {
            if closed <= 1e-8 * i.qcrb(&s.spectral) {
                continue;
            }
            let fd = fi_from_triple(|t| probs(i, &s, t), tau, default_step(i, &s.spectral), wp).unwrap().value;
            prop_assert!((fd - closed).abs() <= 1e-6 * closed, "{i:?}: fd {fd} vs closed {closed}");
        }
    }

    #[test]
    fn sampling_is_deterministic(p1 in 0.0f64..1.0, split in 0.0f64..1.0, n in 0u64..100_000, seed in any::<u64>()) {
        let p2 = (1.0 - p1) * split;
        let t = OutcomeTriple::new(1.0 - p1 - p2, p1, p2);
        let a = sample_counts(&t, n, seed).unwrap();
        let b = sample_counts(&t, n, seed).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(a.n0 + a.n1 + a.n2, n);
        let c = sample_counts_with(&t, n, &mut stream_rng(seed, 7)).unwrap();
        let d = sample_counts_with(&t, n, &mut stream_rng(seed, 7)).unwrap();
        prop_assert_eq!(c, d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fisher_is_bounded_and_resolution_helps(s in scenario()) {
        let tau = s.tau();
        let pairs = [
            (
                Interferometer::Hom,
                hom_fi_nonresolved(tau, &s.channel, &s.spectral, &s.noise),
                hom_fi_resolved(tau, &s.channel, &s.spectral, &s.noise).unwrap(),
            ),
            (
                Interferometer::Noon,
                noon_fi_nonresolved(tau, &s.channel, &s.spectral, &s.noise),
                noon_fi_resolved(tau, &s.channel, &s.spectral, &s.noise).unwrap(),
            ),
        ];
        for (i, nonres, res) in pairs {
            let q = i.qcrb(&s.spectral);
            prop_assert!(nonres.value >= 0.0 && res.value >= 0.0);
            prop_assert!(nonres.value <= q * (1.0 + 1e-9), "{i:?} non-resolved {} > {q}", nonres.value);
            prop_assert!(res.value <= q * (1.0 + 1e-9) + res.err_estimate, "{i:?} resolved {} > {q}", res.value);
            prop_assert!(
                res.value + res.err_estimate >= nonres.value * (1.0 - 1e-9),
                "{i:?} resolved {} < non-resolved {}", res.value, nonres.value
            );
        }
    }

    #[test]
    fn dimensionless_round_trip(s in scenario()) {
        for i in [Interferometer::Hom, Interferometer::Noon] {
            for d in [Detection::NonResolved, Detection::Resolved] {
                let cfg = s.config(i, d);
                let view = cfg.dimensionless_view();
                let (sp, ch, no) = view.to_absolute();
                assert_relative_eq!(sp.sigma_minus, s.spectral.sigma_minus, max_relative = 1e-14);
                assert_relative_eq!(sp.sigma_plus, s.spectral.sigma_plus, max_relative = 1e-14);
                assert_relative_eq!(no.eta_eps, s.noise.eta_eps, max_relative = 1e-14);
                prop_assert_eq!(ch, s.channel);
                assert_relative_eq!(view.tau_from_scaled(view.tau_to_scaled(s.tau())), s.tau(), max_relative = 1e-14);

                let absolute = fisher_information(&cfg, s.tau()).unwrap().value;
                let scaled = fisher_information(&cfg.to_dimensionless(), view.tau_to_scaled(s.tau())).unwrap().value;
                let back = view.fisher_from_scaled(scaled);
                prop_assert!(
                    (back - absolute).abs() <= 1e-6 * absolute.max(1e-12 * i.qcrb(&s.spectral)),
                    "{i:?} {d:?}: {back} vs {absolute}"
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn noon_peak_falls_with_noise(gamma in 0.0f64..0.9, v in 0.05f64..=1.0, et in 0.0f64..1.0, e1 in 0.0f64..3.0, de in 0.05f64..1.0) {
        let spectral = SpectralParams::preset(1.0);
        let grid = tau_grid(1.0, 0.0, 60.0, 601).unwrap();
        let peak = |eta: f64| {
            let cfg = ExperimentConfig {
                spectral,
                channel: ChannelParams::new(gamma, v),
                noise: NoiseParams::new(eta, et),
                interferometer: Interferometer::Noon,
                detection: Detection::NonResolved,
            };
            peak_fisher(&cfg, &grid).unwrap().0
        };
        let (lo, hi) = (peak(e1), peak(e1 + de));
        prop_assert!(hi <= lo * (1.0 + 1e-12), "peak rose from {lo} to {hi}");
    }
}
