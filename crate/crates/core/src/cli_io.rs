//! Configuration loading, figure presets, delay sweeps and table output.
//!
//! Delays and the frequency-dependent noise strength are exchanged in units
//! of the pump frequency (`omega_p tau`, `eta_eps omega_p`); Fisher
//! information columns are divided by `omega_p^2`.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::fisher_information;
use crate::strategy::tau_grid;
use crate::types::{ChannelParams, Detection, ExperimentConfig, Interferometer, NoiseParams, SpectralParams};

/// Significant digits of every printed number.
pub const SIG_DIGITS: usize = 12;

/// `%g`-style rendering with `digits` significant digits; trailing zeros dropped.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt12(x: f64) -> String {
    format_sig(x, SIG_DIGITS)
}

/// Rounds to [`SIG_DIGITS`] significant digits; non-finite values map to `None`.
pub fn round_sig(x: f64) -> Option<f64> {
    if x.is_finite() {
        Some(format!("{:.*e}", SIG_DIGITS - 1, x).parse().expect("valid float"))
    } else {
        None
    }
}

/// Rounds every number in a JSON tree to [`SIG_DIGITS`] significant digits.
pub fn round_json(value: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match value {
        Value::Number(n) if !n.is_i64() && !n.is_u64() => n
            .as_f64()
            .and_then(round_sig)
            .and_then(serde_json::Number::from_f64)
            .map_or(Value::Null, Value::Number),
        Value::Array(items) => Value::Array(items.into_iter().map(round_json).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

/// Pretty JSON of `value` with rounded numbers and a trailing newline.
pub fn to_rounded_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("value serializes");
    let mut s = serde_json::to_string_pretty(&round_json(v)).expect("json renders");
    s.push('\n');
    s
}

/// Parses `key = value` lines; `#` starts a comment. Keys use `_` or `-`.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::invalid("config", format!("line {}: expected `key = value`", i + 1)))?;
        let key = k.trim().replace('-', "_");
        if key.is_empty() {
            return Err(Error::invalid("config", format!("line {}: empty key", i + 1)));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig2,
}

impl Preset {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fig1a" => Ok(Preset::Fig1a),
            "fig1b" => Ok(Preset::Fig1b),
            "fig1c" => Ok(Preset::Fig1c),
            "fig2" => Ok(Preset::Fig2),
            _ => Err(Error::invalid("preset", format!("unknown preset `{s}` (fig1a, fig1b, fig1c, fig2)"))),
        }
    }

    /// Constant-phase noise of the extra fig2 columns.
    pub const FIG2_ETA_THETA: f64 = 0.1;

    pub fn settings(self) -> Settings {
        let (gamma, visibility, interferometer) = match self {
            Preset::Fig1a => (0.0, 1.0, Interferometer::Hom),
            Preset::Fig1b => (0.0, 0.9, Interferometer::Hom),
            Preset::Fig1c => (0.4, 0.9, Interferometer::Hom),
            Preset::Fig2 => (0.0, 1.0, Interferometer::Noon),
        };
        let eta_theta = match self {
            Preset::Fig2 => vec![0.0, Self::FIG2_ETA_THETA],
            _ => vec![0.0],
        };
        Settings {
            gamma: Some(gamma),
            visibility: Some(visibility),
            omega_p: Some(1.0),
            sigma_minus: Some(0.01),
            sigma_plus: Some(0.01),
            eta_eps_wp: Some(vec![0.0, 1.0, 3.0]),
            eta_theta: Some(eta_theta),
            interferometer: Some(interferometer),
            ..Settings::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Every user-settable value; unset fields fall back to presets or defaults.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Settings {
    pub gamma: Option<f64>,
    pub visibility: Option<f64>,
    pub sigma_minus: Option<f64>,
    pub sigma_plus: Option<f64>,
    pub omega_p: Option<f64>,
    pub eta_eps_wp: Option<Vec<f64>>,
    pub eta_theta: Option<Vec<f64>>,
    pub interferometer: Option<Interferometer>,
    pub detection: Option<Detection>,
    pub preset: Option<Preset>,
    pub tau_start: Option<f64>,
    pub tau_stop: Option<f64>,
    pub tau_points: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

fn number(key: &str, v: &str) -> Result<f64> {
    v.parse()
        .map_err(|_| Error::invalid("config", format!("{key}: `{v}` is not a number")))
}

fn list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|x| number(key, x.trim())).collect()
}

pub fn parse_interferometer(v: &str) -> Result<Interferometer> {
    match v {
        "hom" => Ok(Interferometer::Hom),
        "noon" => Ok(Interferometer::Noon),
        _ => Err(Error::invalid("interferometer", format!("unknown interferometer `{v}` (hom, noon)"))),
    }
}

pub fn parse_detection(v: &str) -> Result<Detection> {
    match v {
        "resolved" => Ok(Detection::Resolved),
        "nonresolved" => Ok(Detection::NonResolved),
        _ => Err(Error::invalid("detection", format!("unknown detection `{v}` (resolved, nonresolved)"))),
    }
}

pub fn parse_format(v: &str) -> Result<OutputFormat> {
    match v {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        _ => Err(Error::invalid("format", format!("unknown format `{v}` (csv, json)"))),
    }
}

impl Settings {
    pub fn from_config_text(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (key, v) in parse_key_values(text)? {
            let v = v.as_str();
            match key.as_str() {
                "gamma" => s.gamma = Some(number(&key, v)?),
                "visibility" => s.visibility = Some(number(&key, v)?),
                "sigma_minus" => s.sigma_minus = Some(number(&key, v)?),
                "sigma_plus" => s.sigma_plus = Some(number(&key, v)?),
                "omega_p" => s.omega_p = Some(number(&key, v)?),
                "eta_eps_wp" => s.eta_eps_wp = Some(list(&key, v)?),
                "eta_theta" => s.eta_theta = Some(list(&key, v)?),
                "interferometer" => s.interferometer = Some(parse_interferometer(v)?),
                "detection" => s.detection = Some(parse_detection(v)?),
                "preset" => s.preset = Some(Preset::parse(v)?),
                "tau_start" => s.tau_start = Some(number(&key, v)?),
                "tau_stop" => s.tau_stop = Some(number(&key, v)?),
                "tau_points" => {
                    s.tau_points = Some(
                        v.parse()
                            .map_err(|_| Error::invalid("config", format!("tau_points: `{v}` is not a count")))?,
                    )
                }
                "seed" => {
                    s.seed = Some(
                        v.parse()
                            .map_err(|_| Error::invalid("config", format!("seed: `{v}` is not an integer")))?,
                    )
                }
                "out" => s.out = Some(PathBuf::from(v)),
                "format" => s.format = Some(parse_format(v)?),
                other => return Err(Error::invalid("config", format!("unknown key `{other}`"))),
            }
        }
        Ok(s)
    }

    /// Fields set in `over` win.
    pub fn overridden_by(self, over: Settings) -> Settings {
        Settings {
            gamma: over.gamma.or(self.gamma),
            visibility: over.visibility.or(self.visibility),
            sigma_minus: over.sigma_minus.or(self.sigma_minus),
            sigma_plus: over.sigma_plus.or(self.sigma_plus),
            omega_p: over.omega_p.or(self.omega_p),
            eta_eps_wp: over.eta_eps_wp.or(self.eta_eps_wp),
            eta_theta: over.eta_theta.or(self.eta_theta),
            interferometer: over.interferometer.or(self.interferometer),
            detection: over.detection.or(self.detection),
            preset: over.preset.or(self.preset),
            tau_start: over.tau_start.or(self.tau_start),
            tau_stop: over.tau_stop.or(self.tau_stop),
            tau_points: over.tau_points.or(self.tau_points),
            seed: over.seed.or(self.seed),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
        }
    }

    /// Layers: preset, then file values, then flags.
    pub fn layered(file: Settings, flags: Settings) -> Settings {
        let merged = file.overridden_by(flags);
        match merged.preset {
            Some(p) => p.settings().overridden_by(merged),
            None => merged,
        }
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p.unwrap_or(1.0)
    }

    pub fn spectral(&self) -> SpectralParams {
        let wp = self.omega_p();
        SpectralParams {
            sigma_minus: self.sigma_minus.unwrap_or(wp / 100.0),
            sigma_plus: self.sigma_plus.unwrap_or(wp / 100.0),
            omega_p: wp,
        }
    }

    pub fn channel(&self) -> ChannelParams {
        ChannelParams::new(self.gamma.unwrap_or(0.0), self.visibility.unwrap_or(1.0))
    }

    /// All `(eta_eps omega_p, eta_theta)` combinations, `eta_theta` outermost.
    pub fn noise_levels(&self) -> Vec<NoiseLevel> {
        let eps = self.eta_eps_wp.clone().unwrap_or_else(|| vec![0.0]);
        let theta = self.eta_theta.clone().unwrap_or_else(|| vec![0.0]);
        theta
            .iter()
            .flat_map(|&t| eps.iter().map(move |&e| NoiseLevel { eta_eps_wp: e, eta_theta: t }))
            .collect()
    }

    /// The single noise level of a point computation.
    pub fn noise(&self) -> Result<NoiseParams> {
        match self.noise_levels().as_slice() {
            [level] => Ok(level.to_noise(self.omega_p())),
            _ => Err(Error::invalid("eta_eps_wp", "this command takes a single noise level")),
        }
    }

    pub fn config(&self) -> Result<ExperimentConfig> {
        let config = ExperimentConfig {
            spectral: self.spectral(),
            channel: self.channel(),
            noise: self.noise()?,
            interferometer: self.interferometer.unwrap_or(Interferometer::Hom),
            detection: self.detection.unwrap_or(Detection::NonResolved),
        };
        crate::types::validate(config).map(|c| c.into_inner())
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let noise_levels = self.noise_levels();
        let base = ExperimentConfig {
            spectral: self.spectral(),
            channel: self.channel(),
            noise: NoiseParams::NONE,
            interferometer: self.interferometer.unwrap_or(Interferometer::Hom),
            detection: self.detection.unwrap_or(Detection::NonResolved),
        };
        let config = crate::types::validate(base)?.into_inner();
        for level in &noise_levels {
            level.to_noise(base.spectral.omega_p).validate()?;
        }
        let spec = SweepSpec {
            config,
            tau_axis: TauAxis {
                start: self.tau_start.unwrap_or(0.0),
                stop: self.tau_stop.unwrap_or(400.0),
                points: self.tau_points.unwrap_or(2001),
            },
            noise_levels,
            detections: match self.detection {
                Some(d) => vec![d],
                None => vec![Detection::NonResolved, Detection::Resolved],
            },
            output_path: self.out.clone(),
            format: self.format.unwrap_or(OutputFormat::Csv),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseLevel {
    pub eta_eps_wp: f64,
    pub eta_theta: f64,
}

impl NoiseLevel {
    pub fn to_noise(self, omega_p: f64) -> NoiseParams {
        NoiseParams::new(self.eta_eps_wp / omega_p, self.eta_theta)
    }

    fn label(self) -> String {
        let mut s = format!("ee{}", format_sig(self.eta_eps_wp, 6));
        if self.eta_theta != 0.0 {
            let _ = write!(s, "_et{}", format_sig(self.eta_theta, 6));
        }
        s
    }
}

/// Delay axis in units of `omega_p tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauAxis {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Interferometer, spectra and channel; its noise is replaced per level.
    pub config: ExperimentConfig,
    pub tau_axis: TauAxis,
    pub noise_levels: Vec<NoiseLevel>,
    pub detections: Vec<Detection>,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let TauAxis { start, stop, points } = self.tau_axis;
        if points < 2 {
            return Err(Error::InvalidGrid("tau_points must be at least 2".into()));
        }
        if !(stop > start) {
            return Err(Error::InvalidGrid("tau_stop must exceed tau_start".into()));
        }
        if self.noise_levels.is_empty() || self.detections.is_empty() {
            return Err(Error::InvalidGrid("a sweep needs at least one noise level and detection".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMeta {
    pub interferometer: Interferometer,
    pub gamma: f64,
    pub visibility: f64,
    pub sigma_minus: f64,
    pub sigma_plus: f64,
    pub omega_p: f64,
    pub noise_levels: Vec<NoiseLevel>,
}

/// Rows of `omega_p_tau`, Fisher columns and `qcrb`, all scaled by `omega_p^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub meta: SweepMeta,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let c = spec.config;
    let wp = c.spectral.omega_p;
    let TauAxis { start, stop, points } = spec.tau_axis;
    let taus = tau_grid(wp, start, stop, points)?;
    let qcrb = c.interferometer.qcrb(&c.spectral) / (wp * wp);

    let mut columns = vec!["omega_p_tau".to_string()];
    for &det in &spec.detections {
        for level in &spec.noise_levels {
            columns.push(format!("fi_{}_{}", det.as_str(), level.label()));
            if det == Detection::Resolved {
                columns.push(format!("err_{}_{}", det.as_str(), level.label()));
            }
        }
    }
    columns.push("qcrb".into());

    let rows = taus
        .par_iter()
        .map(|&tau| {
            let mut row = vec![tau * wp];
            for &detection in &spec.detections {
                for level in &spec.noise_levels {
                    let cfg = ExperimentConfig {
                        noise: level.to_noise(wp),
                        detection,
                        ..c
                    };
                    let f = fisher_information(&cfg, tau)?;
                    row.push(f.value_scaled);
                    if detection == Detection::Resolved {
                        row.push(f.err_estimate / (wp * wp));
                    }
                }
            }
            row.push(qcrb);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepTable {
        meta: SweepMeta {
            interferometer: c.interferometer,
            gamma: c.channel.gamma,
            visibility: c.channel.visibility,
            sigma_minus: c.spectral.sigma_minus,
            sigma_plus: c.spectral.sigma_plus,
            omega_p: wp,
            noise_levels: spec.noise_levels.clone(),
        },
        columns,
        rows,
    })
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| fmt12(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        to_rounded_json(self)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt12(0.0), "0");
        assert_eq!(fmt12(1.0), "1");
        assert_eq!(fmt12(0.16), "0.16");
        assert_eq!(fmt12(0.1 + 0.2), "0.3");
        assert_eq!(fmt12(1.0004), "1.0004");
        assert_eq!(fmt12(4e-4), "0.0004");
        assert_eq!(fmt12(3.5e-5), "3.5e-5");
        assert_eq!(fmt12(1.23456789012345e-7), "1.23456789012e-7");
        assert_eq!(fmt12(-2.5e15), "-2.5e15");
        assert_eq!(fmt12(123456.0), "123456");
        assert_eq!(fmt12(f64::INFINITY), "inf");
        assert_eq!(round_sig(0.1 + 0.2), Some(0.3));
        assert_eq!(round_sig(f64::NAN), None);
        let v = round_json(serde_json::json!({"a": [0.1 + 0.2, 3], "b": 1.0 / 3.0}));
        assert_eq!(v.to_string(), r#"{"a":[0.3,3],"b":0.333333333333}"#);
    }

    #[test]
    fn key_values_with_comments() {
        let kv = parse_key_values("# header\ngamma = 0.4  # loss\n\nsigma-minus=0.02\n").unwrap();
        assert_eq!(
            kv,
            vec![("gamma".into(), "0.4".into()), ("sigma_minus".into(), "0.02".into())]
        );
        assert!(parse_key_values("gamma 0.4").is_err());
    }

    #[test]
    fn flags_override_file_and_preset() {
        let file = Settings::from_config_text("preset = fig1c\nvisibility = 0.8\ngamma = 0.1").unwrap();
        let flags = Settings {
            gamma: Some(0.2),
            ..Settings::default()
        };
        let s = Settings::layered(file, flags);
        assert_eq!(s.channel(), ChannelParams::new(0.2, 0.8));
        assert_eq!(s.interferometer, Some(Interferometer::Hom));
        assert_eq!(s.noise_levels().len(), 3);
        assert!(Settings::from_config_text("colour = red").is_err());
    }

    #[test]
    fn fig1a_column_at_zero_delay() {
        let mut s = Preset::Fig1a.settings();
        s.tau_points = Some(11);
        s.tau_stop = Some(10.0);
        let t = run_sweep(&s.sweep_spec().unwrap()).unwrap();
        let f = t.column("fi_nonresolved_ee0").unwrap();
        assert!((f[0] - 4e-4).abs() < 1e-15);
        assert!(t.column("err_resolved_ee3").is_some());
        assert_eq!(t.column("qcrb").unwrap()[5], 4e-4);
        let csv = t.to_csv();
        assert!(csv.starts_with("omega_p_tau,fi_nonresolved_ee0,fi_nonresolved_ee1,"));
        assert_eq!(csv.lines().count(), 12);
    }

    #[test]
    fn fig2_resolved_ideal_is_flat() {
        let mut s = Preset::Fig2.settings();
        s.tau_points = Some(9);
        s.detection = Some(Detection::Resolved);
        let t = run_sweep(&s.sweep_spec().unwrap()).unwrap();
        assert!(t.columns.contains(&"fi_resolved_ee1_et0.1".to_string()));
        for v in t.column("fi_resolved_ee0").unwrap() {
            assert!((v / 1.0004 - 1.0).abs() < 1e-6, "{v}");
        }
        let json: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(json["columns"][0], "omega_p_tau");
    }

    #[test]
    fn point_commands_need_one_noise_level() {
        assert!(Preset::Fig1a.settings().config().is_err());
        let s = Settings {
            gamma: Some(1.5),
            ..Settings::default()
        };
        assert!(s.config().is_err());
        assert!(Settings::default().config().is_ok());
    }
}
