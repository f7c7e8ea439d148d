//! Adaptive 21-point Gauss-Kronrod integration for the frequency integrals.
//!
//! The resolved-detection integrands oscillate in the detected frequency at
//! rate `tau`, so the driver accepts breakpoints (typically the fringe extrema,
//! where the ideal integrand has its sharpest features) and then bisects the
//! worst panel until the global error estimate meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the number of panels, breakpoint panels included.
    pub max_panels: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_panels: 50_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub panels: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One Gauss-Kronrod 10/21 panel: `(value, error estimate)`.
pub fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_kronrod = WGK[10] * f_center;
    let mut res_gauss = 0.0;
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        // Gauss nodes sit at the odd Kronrod indices.
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = (res_kronrod - res_gauss) * half;
    let scale = half.abs();
    (
        res_kronrod * half,
        rescale_error(err, res_abs * scale, res_asc * scale),
    )
}

/// Integrates `f` over `[points[0], points[last]]`, starting from the panels
/// delimited by `points` (sorted ascending, at least two entries).
pub fn integrate<F: Fn(f64) -> f64>(f: F, points: &[f64], spec: &QuadSpec) -> Result<QuadResult> {
    if points.len() < 2 {
        return Err(Error::InvalidGrid("integration needs at least two points".into()));
    }
    if points.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid("integration points must be strictly increasing".into()));
    }

    let mut heap = BinaryHeap::with_capacity(points.len() * 2);
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in points.windows(2) {
        let (value, err) = gk21(&f, w[0], w[1]);
        total += value;
        total_err += err;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            err,
        });
    }
    let mut evaluations = 21 * heap.len();

    let target = |total: f64| spec.abs_tol.max(spec.rel_tol * total.abs());
    while total_err > target(total) {
        if heap.len() >= spec.max_panels {
            return Err(Error::QuadratureNonConvergence {
                achieved: total_err,
                requested: target(total),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel can no longer be split in floating point.
            return Err(Error::QuadratureNonConvergence {
                achieved: total_err,
                requested: target(total),
            });
        }
        let (v1, e1) = gk21(&f, worst.a, mid);
        let (v2, e2) = gk21(&f, mid, worst.b);
        evaluations += 42;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
    }

    // Re-sum to shed the drift of the running updates.
    let panels = heap.into_vec();
    let value = panels.iter().map(|p| p.value).sum();
    let abs_err = panels.iter().map(|p| p.err).sum();
    Ok(QuadResult {
        value,
        abs_err,
        panels: panels.len(),
        evaluations,
    })
}

/// Breakpoints for a fringe `cos(omega tau)` on `[lo, hi]`: the endpoints plus
/// every `omega = k pi / tau` inside, capped at `max_inner` interior points
/// (evenly spaced panels are used beyond the cap).
pub fn fringe_breakpoints(lo: f64, hi: f64, tau: f64, max_inner: usize) -> Vec<f64> {
    let rate = tau.abs();
    let mut points = vec![lo];
    if rate > 0.0 {
        let step = std::f64::consts::PI / rate;
        let k_lo = (lo / step).floor() as i64 + 1;
        let k_hi = (hi / step).ceil() as i64 - 1;
        let count = (k_hi - k_lo + 1).max(0) as usize;
        if count <= max_inner {
            for k in k_lo..=k_hi {
                let x = k as f64 * step;
                if x > lo && x < hi {
                    points.push(x);
                }
            }
        } else {
            let n = max_inner + 1;
            for i in 1..n {
                points.push(lo + (hi - lo) * i as f64 / n as f64);
            }
        }
    }
    points.push(hi);
    points.dedup_by(|a, b| !(*a > *b));
    points
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn integrates_polynomials_exactly() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x + 1.0, &[-1.0, 2.0], &QuadSpec::default()).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0) + 3.0;
        assert!((r.value - exact).abs() < 1e-13);
    }

    #[test]
    fn gaussian_second_moment() {
        let s = 0.02;
        let f = |w: f64| (-w * w / (8.0 * s * s)).exp() * w * w;
        let r = integrate(f, &[-16.0 * s, 16.0 * s], &QuadSpec::default()).unwrap();
        let exact = 4.0 * s * s * (8.0 * PI * s * s).sqrt();
        assert!(((r.value - exact) / exact).abs() < 1e-11);
    }

    #[test]
    fn oscillatory_integrand_with_breakpoints() {
        // int_0^{10} sin^2(40 x) dx = 5 - sin(800)/160
        let tau = 40.0;
        let pts = fringe_breakpoints(0.0, 10.0, tau, 10_000);
        let r = integrate(|x| (tau * x).sin().powi(2), &pts, &QuadSpec::default()).unwrap();
        let exact = 5.0 - (800.0f64).sin() / 160.0;
        assert!((r.value - exact).abs() < 1e-9);
        assert!(r.abs_err <= 1e-10 * exact.abs() * 1.0001);
    }

    #[test]
    fn breakpoints_are_fringe_extrema() {
        let pts = fringe_breakpoints(-1.0, 1.0, PI, 100);
        assert_eq!(pts, vec![-1.0, 0.0, 1.0]);
        let pts = fringe_breakpoints(0.0, 1.0, 0.0, 100);
        assert_eq!(pts, vec![0.0, 1.0]);
        let pts = fringe_breakpoints(0.0, 1.0, 1e6, 3);
        assert_eq!(pts.len(), 5);
    }

    #[test]
    fn reports_non_convergence() {
        let spec = QuadSpec {
            rel_tol: 1e-15,
            abs_tol: 0.0,
            max_panels: 4,
        };
        let err = integrate(|x: f64| (x + 1e-9).sqrt().recip(), &[0.0, 1.0], &spec).unwrap_err();
        assert!(matches!(err, Error::QuadratureNonConvergence { .. }));
    }

    #[test]
    fn rejects_bad_points() {
        assert!(integrate(|x| x, &[1.0], &QuadSpec::default()).is_err());
        assert!(integrate(|x| x, &[1.0, 0.0], &QuadSpec::default()).is_err());
    }
}
