//! Synthetic measurement records and maximum-likelihood delay estimation.
//!
//! Every random draw comes from a ChaCha stream keyed by `(seed, trial)`, so a
//! campaign is reproducible no matter how its trials are scheduled.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::fisher::{fisher_information, SpectralModel};
use crate::hom::{hom_probs_noisy, HomSpectralModel};
use crate::noon::{noon_probs_noisy, NoonSpectralModel};
use crate::types::{Detection, ExperimentConfig, Interferometer, OutcomeTriple};

/// Tolerance on `p0 + p1 + p2 = 1` accepted by [`sample_counts`].
const NORMALIZATION_TOL: f64 = 1e-9;

/// Coarse-grid density of the likelihood search.
const POINTS_PER_SCALE: f64 = 40.0;
const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub n0: u64,
    pub n1: u64,
    pub n2: u64,
    pub n_total: u64,
}

impl OutcomeCounts {
    pub fn new(n0: u64, n1: u64, n2: u64) -> Self {
        Self {
            n0,
            n1,
            n2,
            n_total: n0 + n1 + n2,
        }
    }

    pub fn as_array(&self) -> [u64; 3] {
        [self.n0, self.n1, self.n2]
    }
}

/// Detected frequency and outcome (number of clicks) for each pair.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SpectralRecord {
    pub events: Vec<(f64, u8)>,
}

impl SpectralRecord {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn outcome_counts(&self) -> OutcomeCounts {
        let mut n = [0u64; 3];
        for &(_, o) in &self.events {
            n[o as usize] += 1;
        }
        OutcomeCounts::new(n[0], n[1], n[2])
    }
}

/// Data handed to [`mle_tau`].
#[derive(Debug, Clone, Copy)]
pub enum Measurement<'a> {
    Counts(&'a OutcomeCounts),
    Spectral(&'a SpectralRecord),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    pub tau_true: f64,
    pub tau_hat_mean: f64,
    pub tau_hat_std: f64,
    pub crb_std: f64,
    /// `tau_hat_std / crb_std`.
    pub saturation_ratio: f64,
    pub n_trials: usize,
    pub n_pairs_per_trial: u64,
    pub seed: u64,
    pub fisher: f64,
    /// Set when the Fisher information at `tau_true` vanishes.
    pub infinite_crb: bool,
    /// Trials whose likelihood peaked on the search-window boundary.
    pub n_unidentifiable: usize,
    pub window: (f64, f64),
}

/// Generator for one stream of a campaign.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn check_triple(triple: &OutcomeTriple) -> Result<()> {
    for (index, &value) in triple.as_array().iter().enumerate() {
        if !(value >= 0.0) {
            return Err(Error::NegativeProbability { index, value });
        }
    }
    let sum = triple.sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Unnormalized { sum });
    }
    Ok(())
}

/// Multinomial draw of `n_pairs` outcomes, as two chained binomials.
pub fn sample_counts_with<R: Rng + ?Sized>(triple: &OutcomeTriple, n_pairs: u64, rng: &mut R) -> Result<OutcomeCounts> {
    check_triple(triple)?;
    let binomial = |n: u64, p: f64, rng: &mut R| -> u64 {
        if n == 0 || p <= 0.0 {
            0
        } else if p >= 1.0 {
            n
        } else {
            Binomial::new(n, p).expect("probability in (0, 1)").sample(rng)
        }
    };
    let sum = triple.sum();
    let n2 = binomial(n_pairs, triple.p2 / sum, rng);
    let rest = triple.p0 + triple.p1;
    let n1 = if rest > 0.0 {
        binomial(n_pairs - n2, triple.p1 / rest, rng)
    } else {
        n_pairs - n2
    };
    Ok(OutcomeCounts::new(n_pairs - n2 - n1, n1, n2))
}

pub fn sample_counts(triple: &OutcomeTriple, n_pairs: u64, rng_seed: u64) -> Result<OutcomeCounts> {
    sample_counts_with(triple, n_pairs, &mut stream_rng(rng_seed, 0))
}

/// Draws the detected frequency from the delay-independent Gaussian marginal
/// by inverse CDF, then the outcome from the conditional densities.
pub fn sample_spectral_with<M: SpectralModel + ?Sized, R: Rng + ?Sized>(
    model: &M,
    tau: f64,
    n_pairs: u64,
    rng: &mut R,
) -> Result<SpectralRecord> {
    let (center, std) = model.envelope_center_std();
    let marginal = Normal::new(center, std).map_err(|e| Error::invalid("spectral", e.to_string()))?;
    let mut events = Vec::with_capacity(n_pairs as usize);
    for _ in 0..n_pairs {
        let omega = marginal.inverse_cdf(rng.sample(Open01));
        let d = model.density(tau, omega).as_array();
        let total: f64 = d.iter().sum();
        for (index, &value) in d.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(Error::NegativeProbability { index, value });
            }
        }
        let u: f64 = rng.random::<f64>() * total;
        let outcome = if u < d[2] {
            2
        } else if u < d[2] + d[1] {
            1
        } else {
            0
        };
        events.push((omega, outcome));
    }
    Ok(SpectralRecord { events })
}

pub fn sample_spectral<M: SpectralModel + ?Sized>(model: &M, tau: f64, n_pairs: u64, rng_seed: u64) -> Result<SpectralRecord> {
    sample_spectral_with(model, tau, n_pairs, &mut stream_rng(rng_seed, 0))
}

/// Non-resolved outcome probabilities of the configured interferometer.
pub fn probabilities(config: &ExperimentConfig, tau: f64) -> OutcomeTriple {
    match config.interferometer {
        Interferometer::Hom => hom_probs_noisy(tau, &config.channel, &config.spectral, &config.noise),
        Interferometer::Noon => noon_probs_noisy(tau, &config.channel, &config.spectral, &config.noise),
    }
}

/// Per-pair resolved model of the configured interferometer.
pub fn spectral_model(config: &ExperimentConfig) -> Box<dyn SpectralModel> {
    match config.interferometer {
        Interferometer::Hom => Box::new(HomSpectralModel::per_pair(config.channel, config.spectral, config.noise)),
        Interferometer::Noon => Box::new(NoonSpectralModel::new(config.channel, config.spectral, config.noise)),
    }
}

fn log_term(n: u64, p: f64) -> f64 {
    if n == 0 {
        0.0
    } else if p > 0.0 {
        n as f64 * p.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Log-likelihood of the data at delay `tau`, up to a delay-independent constant.
pub fn log_likelihood(data: Measurement<'_>, config: &ExperimentConfig, tau: f64) -> f64 {
    match data {
        Measurement::Counts(c) => {
            let p = probabilities(config, tau);
            log_term(c.n0, p.p0) + log_term(c.n1, p.p1) + log_term(c.n2, p.p2)
        }
        Measurement::Spectral(r) => {
            let model = spectral_model(config);
            r.events
                .iter()
                .map(|&(omega, o)| log_term(1, model.density(tau, omega).as_array()[o as usize]))
                .sum()
        }
    }
}

/// Spacing of the coarse search grid: a fortieth of the fringe period (N00N)
/// or of `1 / sigma_-` (HOM).
pub fn grid_spacing(config: &ExperimentConfig) -> f64 {
    match config.interferometer {
        Interferometer::Hom => 1.0 / (POINTS_PER_SCALE * config.spectral.sigma_minus),
        Interferometer::Noon => 2.0 * std::f64::consts::PI / (POINTS_PER_SCALE * config.spectral.omega_p),
    }
}

fn search_grid(config: &ExperimentConfig, window: (f64, f64)) -> Result<Vec<f64>> {
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::InvalidGrid(format!("search window ({lo}, {hi}) is empty")));
    }
    let intervals = ((hi - lo) / grid_spacing(config)).ceil().max(2.0);
    if intervals >= MAX_GRID_POINTS as f64 {
        return Err(Error::InvalidGrid(format!(
            "search window ({lo}, {hi}) needs more than {MAX_GRID_POINTS} grid points"
        )));
    }
    let n = intervals as usize;
    Ok((0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect())
}

/// Golden-section maximization on `[a, b]` down to `tol`.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// The HOM likelihood is even in the delay, so `tau = 0` is a stationary
/// point rather than an artificial edge.
fn is_symmetry_point(config: &ExperimentConfig, tau: f64) -> bool {
    config.interferometer == Interferometer::Hom && tau == 0.0
}

fn refine(data: Measurement<'_>, config: &ExperimentConfig, grid: &[f64], k: usize, tol: f64) -> f64 {
    let a = grid[k.saturating_sub(1)];
    let b = grid[(k + 1).min(grid.len() - 1)];
    let f = |t: f64| log_likelihood(data, config, t);
    let t = golden_max(f, a, b, tol);
    // Keep the grid point if refinement drifted to something worse.
    if f(t) >= f(grid[k]) {
        t
    } else {
        grid[k]
    }
}

/// Maximum-likelihood delay within `window`: coarse grid, then golden-section
/// refinement to `1e-10` of the window width.
///
/// HOM data only determine `|tau|`; windows on `tau >= 0` are the convention.
pub fn mle_tau(data: Measurement<'_>, config: &ExperimentConfig, window: (f64, f64)) -> Result<f64> {
    let grid = search_grid(config, window)?;
    let values: Vec<f64> = grid.iter().map(|&t| log_likelihood(data, config, t)).collect();
    let mut k = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[k] {
            k = i;
        }
    }
    if !values[k].is_finite() {
        return Err(Error::Unidentifiable { tau: grid[k] });
    }
    let last = grid.len() - 1;
    if (k == 0 || k == last) && !is_symmetry_point(config, grid[k]) {
        return Err(Error::Unidentifiable { tau: grid[k] });
    }
    let tol = 1e-10 * (window.1 - window.0);
    let t = refine(data, config, &grid, k, tol);
    if is_symmetry_point(config, grid[k]) && k == 0 {
        return Ok(t.max(0.0));
    }
    Ok(t)
}

/// A local likelihood maximum found by [`mle_tau_multistart`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub tau: f64,
    pub log_likelihood: f64,
}

/// Refines every interior local maximum of the coarse grid and returns them
/// sorted by decreasing likelihood. Meant for windows spanning many N00N fringes.
pub fn mle_tau_multistart(data: Measurement<'_>, config: &ExperimentConfig, window: (f64, f64)) -> Result<Vec<Candidate>> {
    let grid = search_grid(config, window)?;
    let values: Vec<f64> = grid.par_iter().map(|&t| log_likelihood(data, config, t)).collect();
    let tol = 1e-10 * (window.1 - window.0);
    let peaks: Vec<usize> = (1..grid.len() - 1)
        .filter(|&k| values[k].is_finite() && values[k] >= values[k - 1] && values[k] > values[k + 1])
        .collect();
    let mut out: Vec<Candidate> = peaks
        .par_iter()
        .map(|&k| {
            let tau = refine(data, config, &grid, k, tol);
            Candidate {
                tau,
                log_likelihood: log_likelihood(data, config, tau),
            }
        })
        .collect();
    out.sort_by(|a, b| b.log_likelihood.total_cmp(&a.log_likelihood).then(a.tau.total_cmp(&b.tau)));
    Ok(out)
}

/// Default campaign window: `[0, tau_true + 5 / sigma_-]` for HOM; for N00N
/// the half fringe `[k pi / omega_p, (k + 1) pi / omega_p]` holding `tau_true`,
/// on which the fringe is monotone.
pub fn default_window(config: &ExperimentConfig, tau_true: f64) -> (f64, f64) {
    match config.interferometer {
        Interferometer::Hom => (0.0, tau_true.abs() + 5.0 / config.spectral.sigma_minus),
        Interferometer::Noon => {
            let half = std::f64::consts::PI / config.spectral.omega_p;
            let k = (tau_true / half).floor();
            (k * half, (k + 1.0) * half)
        }
    }
}

/// Samples one record and estimates the delay; `None` when unidentifiable.
fn draw(config: &ExperimentConfig, tau: f64, n_pairs: u64, rng: &mut ChaCha20Rng, window: (f64, f64)) -> Result<Option<f64>> {
    let estimate = match config.detection {
        Detection::NonResolved => {
            let counts = sample_counts_with(&probabilities(config, tau), n_pairs, rng)?;
            mle_tau(Measurement::Counts(&counts), config, window)
        }
        Detection::Resolved => {
            let record = sample_spectral_with(spectral_model(config).as_ref(), tau, n_pairs, rng)?;
            mle_tau(Measurement::Spectral(&record), config, window)
        }
    };
    match estimate {
        Ok(t) => Ok(Some(t)),
        Err(Error::Unidentifiable { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Repeats sampling and estimation `n_trials` times in the default window.
pub fn run_campaign(config: &ExperimentConfig, tau_true: f64, n_trials: usize, n_pairs: u64, rng_seed: u64) -> Result<EstimationReport> {
    run_campaign_in(config, tau_true, n_trials, n_pairs, rng_seed, default_window(config, tau_true))
}

pub fn run_campaign_in(
    config: &ExperimentConfig,
    tau_true: f64,
    n_trials: usize,
    n_pairs: u64,
    rng_seed: u64,
    window: (f64, f64),
) -> Result<EstimationReport> {
    if n_trials < 2 {
        return Err(Error::invalid("n_trials", "n_trials must be at least 2"));
    }
    if n_pairs == 0 {
        return Err(Error::invalid("n_pairs", "n_pairs must be at least 1"));
    }
    let fisher = fisher_information(config, tau_true)?.value;
    let estimates: Vec<Option<f64>> = (0..n_trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(rng_seed, trial);
            draw(config, tau_true, n_pairs, &mut rng, window)
        })
        .collect::<Result<_>>()?;

    // Fixed-order reduction keeps the report bit-identical across thread counts.
    let found: Vec<f64> = estimates.iter().flatten().copied().collect();
    let n = found.len() as f64;
    let mean = found.iter().sum::<f64>() / n;
    let var = found.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (n - 1.0);
    let std = var.sqrt();
    let infinite_crb = fisher == 0.0;
    let crb_std = if infinite_crb {
        f64::INFINITY
    } else {
        1.0 / (n_pairs as f64 * fisher).sqrt()
    };
    Ok(EstimationReport {
        tau_true,
        tau_hat_mean: mean,
        tau_hat_std: std,
        crb_std,
        saturation_ratio: std / crb_std,
        n_trials,
        n_pairs_per_trial: n_pairs,
        seed: rng_seed,
        fisher,
        infinite_crb,
        n_unidentifiable: n_trials - found.len(),
        window,
    })
}

/// One trial of a campaign, exposed for tests of the per-trial streams.
pub fn single_trial(config: &ExperimentConfig, tau_true: f64, n_pairs: u64, rng_seed: u64, trial: u64) -> Result<Option<f64>> {
    draw(config, tau_true, n_pairs, &mut stream_rng(rng_seed, trial), default_window(config, tau_true))
}
