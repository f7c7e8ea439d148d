//! Cancellation-free pieces shared by the HOM and N00N expressions.
//!
//! Both interferometers produce outcome weights of the form
//! `base -/+ V' cos(phi)`. Near the ideal operating points these differences
//! vanish quadratically, so they are rebuilt from non-negative parts
//! (`1 - cos = 2 sin^2(phi/2)`, `1 - V e^{-u} = (1 - V) - V expm1(-u)`).

/// `1 - (v / sqrt(a)) exp(-y)` with `a = 1 + a_minus_1`, for `0 <= v <= 1`,
/// `a_minus_1 >= 0`, `y >= 0`.
pub(crate) fn one_minus_scaled_gauss(v: f64, a_minus_1: f64, y: f64) -> f64 {
    let root = (1.0 + a_minus_1).sqrt();
    let contrast_loss = (a_minus_1 / (root + 1.0) + (1.0 - v)) / root;
    contrast_loss - (v / root) * (-y).exp_m1()
}

/// `1 - v exp(-u)`.
pub(crate) fn one_minus_vexp(v: f64, u: f64) -> f64 {
    (1.0 - v) - v * (-u).exp_m1()
}

/// Whether the interference term lowers or raises the coincidence weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum FringeSign {
    /// `R2 ∝ 1 - V' cos(phi)` (HOM dip).
    Dip,
    /// `R2 ∝ 1 + V' cos(phi)` (N00N peak).
    Peak,
}

/// Weights `(w2, w1)` with `w2 = 1 ∓ v cos(phi)` and `w1 = b ± v cos(phi)`,
/// given `one_minus_v = 1 - v` and `b_minus_1 = b - 1`.
pub(crate) fn fringe_weights(sign: FringeSign, v: f64, one_minus_v: f64, b_minus_1: f64, phi: f64) -> (f64, f64) {
    let (s, c) = (0.5 * phi).sin_cos();
    let (lower, raise) = (2.0 * v * s * s, 2.0 * v * c * c);
    match sign {
        FringeSign::Dip => (one_minus_v + lower, b_minus_1 + one_minus_v + raise),
        FringeSign::Peak => (one_minus_v + raise, b_minus_1 + one_minus_v + lower),
    }
}

/// `v^2 sin^2(phi) [1 / w2 + 1 / w1]` with the weights of [`fringe_weights`].
///
/// When a weight's constant part vanishes (`v = 1`, no loss term), the
/// removable singularity at the fringe extremum is cancelled analytically.
pub(crate) fn fringe_information(sign: FringeSign, v: f64, one_minus_v: f64, b_minus_1: f64, phi: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let (s, c) = (0.5 * phi).sin_cos();
    let (s2, c2) = (s * s, c * c);
    // sin^2(phi) = 4 s2 c2; each weight is offset + 2 v t^2 with t^2 in {s2, c2}.
    let term = |offset: f64, t2: f64, other2: f64| -> f64 {
        if offset == 0.0 {
            2.0 * v * other2
        } else {
            let den = offset + 2.0 * v * t2;
            if den == 0.0 {
                0.0
            } else {
                4.0 * v * v * t2 * other2 / den
            }
        }
    };
    let (w2_offset, w1_offset) = (one_minus_v, b_minus_1 + one_minus_v);
    match sign {
        FringeSign::Dip => term(w2_offset, s2, c2) + term(w1_offset, c2, s2),
        FringeSign::Peak => term(w2_offset, c2, s2) + term(w1_offset, s2, c2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_differences_match_naive_away_from_cancellation() {
        let (v, a, y): (f64, f64, f64) = (0.8, 1.3, 0.7);
        let naive = 1.0 - v / a.sqrt() * (-y).exp();
        assert!((one_minus_scaled_gauss(v, a - 1.0, y) - naive).abs() < 1e-15);
        assert!((one_minus_vexp(v, y) - (1.0 - v * (-y).exp())).abs() < 1e-15);
    }

    #[test]
    fn compensated_difference_keeps_tiny_values() {
        let y = 1e-20;
        assert!((one_minus_scaled_gauss(1.0, 0.0, y) - y).abs() < 1e-35);
        let t = 4e-22;
        assert!((one_minus_scaled_gauss(1.0, t, 0.0) - t / 2.0).abs() < 1e-36);
    }

    #[test]
    fn information_matches_naive_formula() {
        let (v, b) = (0.7, 1.9);
        for sign in [FringeSign::Dip, FringeSign::Peak] {
            for phi in [0.3f64, 1.7, 2.9, -4.0] {
                let c = phi.cos();
                let sg = if sign == FringeSign::Dip { -1.0 } else { 1.0 };
                let naive = v * v * phi.sin().powi(2) * (1.0 / (1.0 + sg * v * c) + 1.0 / (b - sg * v * c));
                let got = fringe_information(sign, v, 1.0 - v, b - 1.0, phi);
                assert!((got - naive).abs() < 1e-14, "{sign:?} {phi}: {got} vs {naive}");
                let (w2, w1) = fringe_weights(sign, v, 1.0 - v, b - 1.0, phi);
                assert!((w2 - (1.0 + sg * v * c)).abs() < 1e-15);
                assert!((w1 - (b - sg * v * c)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn ideal_information_is_two() {
        // v = 1, b = 1: sin^2 / (1 - cos) + sin^2 / (1 + cos) = 2 for every phase.
        for sign in [FringeSign::Dip, FringeSign::Peak] {
            for phi in [0.0, 1e-9, 0.5, std::f64::consts::PI, 7.0] {
                let got = fringe_information(sign, 1.0, 0.0, 0.0, phi);
                assert!((got - 2.0).abs() < 1e-15, "{sign:?} {phi}: {got}");
            }
        }
    }
}
