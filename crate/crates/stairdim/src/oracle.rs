//! Closed-form reference values for affine two-letter systems.
//!
//! These are the quantities the test suite uses as independent ground
//! truth. They are deliberately one-liners over log sums and share no code
//! with the enumeration or solver paths; they only exist where a closed
//! form exists, i.e. for affine systems.

use crate::error::{Error, Result};

/// Pressure of `t*phi` for an affine system: `ln Σ ratio_a^t`.
pub fn affine_pressure(ratios: &[f64], t: f64) -> Result<f64> {
    check_ratios(ratios)?;
    Ok(ratios.iter().map(|r| r.powf(t)).sum::<f64>().ln())
}

/// Dimension of the non-differentiability set in the Ahlfors regular
/// case: `delta^2 / alpha`, valid for `alpha > delta`.
pub fn falconer_dimension(delta: f64, alpha: f64) -> Result<f64> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::input(format!("delta must be positive, got {delta}")));
    }
    if alpha.is_nan() || alpha <= delta {
        return Err(Error::input(format!(
            "the closed form needs alpha > delta, got alpha = {alpha}, delta = {delta}"
        )));
    }
    Ok(delta * delta / alpha)
}

/// Dimension of a Bernoulli measure: entropy over Lyapunov exponent,
/// `(Σ p ln p) / (Σ p ln ratio)`.
pub fn bernoulli_dimension(probabilities: &[f64], ratios: &[f64]) -> Result<f64> {
    check_ratios(ratios)?;
    if probabilities.len() != ratios.len() {
        return Err(Error::input(format!(
            "{} probabilities against {} ratios",
            probabilities.len(),
            ratios.len()
        )));
    }
    if probabilities.iter().any(|&p| p.is_nan() || p <= 0.0) {
        return Err(Error::input("probabilities must be strictly positive"));
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::input(format!("probabilities sum to {total}, not 1")));
    }
    let entropy: f64 = probabilities.iter().map(|&p| p * p.ln()).sum();
    let lyapunov: f64 = probabilities
        .iter()
        .zip(ratios)
        .map(|(&p, &r)| p * r.ln())
        .sum();
    Ok(entropy / lyapunov)
}

/// The self-similar identity `beta_1(s) = P(s*phi) / P(phi)` for a
/// two-map affine system with the shifted geometric potential.
pub fn darst_beta_closed_form(ratios: &[f64], s: f64) -> Result<f64> {
    if ratios.len() != 2 {
        return Err(Error::input(format!(
            "the closed form is for two ratios, got {}",
            ratios.len()
        )));
    }
    let denom = affine_pressure(ratios, 1.0)?;
    if denom.abs() < 1e-12 {
        return Err(Error::input(
            "ratios sum to 1: P(phi) = 0 degenerates the normalization",
        ));
    }
    Ok(affine_pressure(ratios, s)? / denom)
}

fn check_ratios(ratios: &[f64]) -> Result<()> {
    if ratios.is_empty() {
        return Err(Error::input("at least one ratio required"));
    }
    match ratios.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
        Some(&r) => Err(Error::input(format!("ratio {r} outside (0, 1)"))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pressure_vanishes_at_cantor_dimension() {
        let delta = 2f64.ln() / 3f64.ln();
        let p = affine_pressure(&[1.0 / 3.0, 1.0 / 3.0], delta).unwrap();
        assert!(p.abs() < 1e-14);
    }

    #[test]
    fn pressure_counts_maps_at_zero() {
        let p = affine_pressure(&[0.2, 0.3, 0.1], 0.0).unwrap();
        assert!((p - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn pressure_direct_sum() {
        let p = affine_pressure(&[0.1, 0.5], 1.0).unwrap();
        assert!((p - 0.6f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn falconer_values() {
        let delta = 2f64.ln() / 3f64.ln();
        let v = falconer_dimension(delta, 1.0).unwrap();
        assert!((v - delta * delta).abs() < 1e-15);
        assert!((falconer_dimension(0.5, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!(falconer_dimension(0.5, 0.5).is_err());
    }

    #[test]
    fn bernoulli_symmetric_case() {
        let delta = 2f64.ln() / 3f64.ln();
        let p = 0.5;
        let v = bernoulli_dimension(&[p, p], &[1.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert!((v - delta).abs() < 1e-14);
    }

    #[test]
    fn bernoulli_rejects_degenerate() {
        assert!(bernoulli_dimension(&[1.0, 0.0], &[0.3, 0.3]).is_err());
        assert!(bernoulli_dimension(&[0.6, 0.6], &[0.3, 0.3]).is_err());
    }

    #[test]
    fn darst_identity_anchors() {
        let ratios = [0.1, 0.5];
        assert!((darst_beta_closed_form(&ratios, 1.0).unwrap() - 1.0).abs() < 1e-15);
        // At s = delta the numerator vanishes.
        let mut lo = 0.0;
        let mut hi = 1.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if affine_pressure(&ratios, mid).unwrap() > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let delta = 0.5 * (lo + hi);
        assert!(darst_beta_closed_form(&ratios, delta).unwrap().abs() < 1e-10);
    }

    #[test]
    fn darst_identity_sample_value() {
        let v = darst_beta_closed_form(&[0.1, 0.5], 0.3).unwrap();
        let expect = (0.1f64.powf(0.3) + 0.5f64.powf(0.3)).ln() / 0.6f64.ln();
        assert!((v - expect).abs() < 1e-15);
    }

    #[test]
    fn darst_rejects_summing_to_one() {
        assert!(darst_beta_closed_form(&[0.5, 0.5], 0.3).is_err());
    }
}
