//! Ranking of the four interferometer and detection combinations by the peak
//! Fisher information they reach over a delay grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::fisher_information;
use crate::types::{ChannelParams, Detection, ExperimentConfig, Interferometer, NoiseParams, SpectralParams};

/// Default delay grid: `omega_p tau` in `[0, 400]`.
pub const DEFAULT_GRID_POINTS: usize = 2001;
pub const DEFAULT_GRID_STOP: f64 = 400.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    NoonResolved,
    NoonNonresolved,
    HomResolved,
    HomNonresolved,
}

impl Strategy {
    /// Also the tie-break order.
    pub const ALL: [Strategy; 4] = [
        Strategy::NoonResolved,
        Strategy::NoonNonresolved,
        Strategy::HomResolved,
        Strategy::HomNonresolved,
    ];

    pub fn interferometer(self) -> Interferometer {
        match self {
            Strategy::NoonResolved | Strategy::NoonNonresolved => Interferometer::Noon,
            Strategy::HomResolved | Strategy::HomNonresolved => Interferometer::Hom,
        }
    }

    pub fn detection(self) -> Detection {
        match self {
            Strategy::NoonResolved | Strategy::HomResolved => Detection::Resolved,
            Strategy::NoonNonresolved | Strategy::HomNonresolved => Detection::NonResolved,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::NoonResolved => "noon_resolved",
            Strategy::NoonNonresolved => "noon_nonresolved",
            Strategy::HomResolved => "hom_resolved",
            Strategy::HomNonresolved => "hom_nonresolved",
        }
    }

    fn config(self, channel: ChannelParams, spectral: SpectralParams, noise: NoiseParams) -> ExperimentConfig {
        ExperimentConfig {
            spectral,
            channel,
            noise,
            interferometer: self.interferometer(),
            detection: self.detection(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyScore {
    pub strategy: Strategy,
    pub peak_fi: f64,
    pub argmax_tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    /// Best first.
    pub entries: Vec<StrategyScore>,
    /// Every strategy has zero information; the order is the fixed fallback.
    pub no_information: bool,
}

impl Ranking {
    pub fn top(&self) -> StrategyScore {
        self.entries[0]
    }
}

/// `points` delays evenly spaced in `omega_p tau` over `[start, stop]`.
pub fn tau_grid(omega_p: f64, start: f64, stop: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidGrid("a grid needs at least 2 points".into()));
    }
    if !(start.is_finite() && stop.is_finite() && stop > start) {
        return Err(Error::InvalidGrid(format!("grid stop {stop} must exceed start {start}")));
    }
    let step = (stop - start) / (points - 1) as f64;
    Ok((0..points).map(|i| (start + step * i as f64) / omega_p).collect())
}

pub fn default_tau_grid(omega_p: f64) -> Vec<f64> {
    tau_grid(omega_p, 0.0, DEFAULT_GRID_STOP, DEFAULT_GRID_POINTS).expect("default grid is valid")
}

/// Largest Fisher information on the grid and the first delay attaining it.
pub fn peak_fisher(config: &ExperimentConfig, tau_grid: &[f64]) -> Result<(f64, f64)> {
    if tau_grid.is_empty() {
        return Err(Error::InvalidGrid("delay grid is empty".into()));
    }
    let values: Vec<f64> = tau_grid
        .par_iter()
        .map(|&t| fisher_information(config, t).map(|f| f.value))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    Ok((values[best], tau_grid[best]))
}

pub fn rank_strategies(channel: &ChannelParams, spectral: &SpectralParams, noise: &NoiseParams, tau_grid: &[f64]) -> Result<Ranking> {
    let mut entries = Strategy::ALL
        .iter()
        .map(|&s| {
            let (peak_fi, argmax_tau) = peak_fisher(&s.config(*channel, *spectral, *noise), tau_grid)?;
            Ok(StrategyScore {
                strategy: s,
                peak_fi,
                argmax_tau,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    // Stable sort keeps the fixed order among ties.
    entries.sort_by(|a, b| b.peak_fi.total_cmp(&a.peak_fi));
    let no_information = entries.iter().all(|e| e.peak_fi == 0.0);
    Ok(Ranking { entries, no_information })
}

/// Best peak Fisher information of each interferometer at one noise level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub eta_eps: f64,
    pub noon_peak: f64,
    pub hom_peak: f64,
}

impl CurvePoint {
    pub fn top(&self) -> Interferometer {
        // Ties go to N00N, following the fixed strategy order.
        if self.noon_peak >= self.hom_peak {
            Interferometer::Noon
        } else {
            Interferometer::Hom
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossover {
    /// Switch point, or `None` when the top interferometer is the same at both ends.
    pub eta_star: Option<f64>,
    /// Number of top-interferometer changes seen along the scan.
    pub switches: usize,
    /// Scan of both curves over the noise range.
    pub curve: Vec<CurvePoint>,
}

/// Relative width at which the bisection stops.
pub const CROSSOVER_REL_TOL: f64 = 1e-3;
pub const CROSSOVER_SCAN_POINTS: usize = 16;

fn curve_point(channel: &ChannelParams, spectral: &SpectralParams, eta_theta: f64, tau_grid: &[f64], eta: f64) -> Result<CurvePoint> {
    let noise = NoiseParams::new(eta, eta_theta);
    let peak = |s: Strategy| peak_fisher(&s.config(*channel, *spectral, noise), tau_grid).map(|p| p.0);
    Ok(CurvePoint {
        eta_eps: eta,
        noon_peak: peak(Strategy::NoonResolved)?.max(peak(Strategy::NoonNonresolved)?),
        hom_peak: peak(Strategy::HomResolved)?.max(peak(Strategy::HomNonresolved)?),
    })
}

/// Noise strength `eta_eps` in `eta_range` at which the top-ranked
/// interferometer switches, by a scan followed by bisection on the first
/// change. Reports "no crossover" as `eta_star = None`.
pub fn crossover_noise(
    channel: &ChannelParams,
    spectral: &SpectralParams,
    eta_theta: f64,
    tau_grid: &[f64],
    eta_range: (f64, f64),
) -> Result<Crossover> {
    let (lo, hi) = eta_range;
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::invalid("eta_range", "noise range must satisfy 0 <= lo < hi"));
    }
    let n = CROSSOVER_SCAN_POINTS;
    let curve = (0..n)
        .map(|i| curve_point(channel, spectral, eta_theta, tau_grid, lo + (hi - lo) * i as f64 / (n - 1) as f64))
        .collect::<Result<Vec<_>>>()?;
    let switches = curve.windows(2).filter(|w| w[0].top() != w[1].top()).count();
    let first = curve.windows(2).position(|w| w[0].top() != w[1].top());
    let eta_star = match first {
        None => None,
        Some(i) => {
            let (mut a, mut b) = (curve[i].eta_eps, curve[i + 1].eta_eps);
            let top_a = curve[i].top();
            while b - a > CROSSOVER_REL_TOL * b {
                let m = 0.5 * (a + b);
                if curve_point(channel, spectral, eta_theta, tau_grid, m)?.top() == top_a {
                    a = m;
                } else {
                    b = m;
                }
            }
            Some(0.5 * (a + b))
        }
    };
    Ok(Crossover {
        eta_star,
        switches,
        curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn preset() -> SpectralParams {
        SpectralParams::preset(1.0)
    }

    fn coarse() -> Vec<f64> {
        tau_grid(1.0, 0.0, 400.0, 201).unwrap()
    }

    #[test]
    fn grid_is_in_scaled_delay() {
        let g = tau_grid(100.0, 0.0, 400.0, 5).unwrap();
        assert_eq!(g, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(tau_grid(1.0, 0.0, 1.0, 1).is_err());
        assert!(tau_grid(1.0, 1.0, 1.0, 3).is_err());
        assert_eq!(default_tau_grid(1.0).len(), DEFAULT_GRID_POINTS);
    }

    #[test]
    fn noon_resolved_wins_without_noise() {
        let r = rank_strategies(&ChannelParams::new(0.4, 0.9), &preset(), &NoiseParams::NONE, &coarse()).unwrap();
        assert_eq!(r.top().strategy, Strategy::NoonResolved);
        assert!(!r.no_information);
    }

    #[test]
    fn hom_wins_under_strong_noise() {
        let r = rank_strategies(&ChannelParams::new(0.4, 0.9), &preset(), &NoiseParams::new(3.0, 0.0), &coarse()).unwrap();
        assert_eq!(r.top().strategy.interferometer(), Interferometer::Hom);
    }

    #[test]
    fn zero_visibility_falls_back_to_fixed_order() {
        let r = rank_strategies(&ChannelParams::new(0.2, 0.0), &preset(), &NoiseParams::NONE, &coarse()).unwrap();
        assert!(r.no_information);
        let order: Vec<_> = r.entries.iter().map(|e| e.strategy).collect();
        assert_eq!(order, Strategy::ALL.to_vec());
    }

    #[test]
    fn no_crossover_is_reported() {
        let c = crossover_noise(&ChannelParams::IDEAL, &preset(), 0.0, &coarse(), (0.0, 0.5)).unwrap();
        assert_eq!(c.eta_star, None);
        assert_eq!(c.switches, 0);
        assert_eq!(c.curve.len(), CROSSOVER_SCAN_POINTS);
    }

    #[test]
    fn empty_grid_is_rejected() {
        let cfg = Strategy::HomResolved.config(ChannelParams::IDEAL, preset(), NoiseParams::NONE);
        assert!(peak_fisher(&cfg, &[]).is_err());
    }
}
