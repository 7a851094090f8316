//! Waiting-time distributions of filtered two-photon bundles and of thermal
//! light, with the multiphoton-peak averages.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::exact::{ratio, Rational};
use crate::kernel::amplitude;
use crate::moments::mean_time_exact;
use crate::rates::{ExactRates, RateSet};
use crate::thermal::ThermalParams;

fn check_delay(tau: f64) -> Result<()> {
    if !(tau >= 0.0) {
        return invalid(format!("delay must be nonnegative, got {tau}"));
    }
    Ok(())
}

/// Density of the gap between the two detections of a fully detected
/// two-photon bundle.
pub fn wtd_biphoton(r: &RateSet, tau: f64) -> Result<f64> {
    check_delay(tau)?;
    let gamma = r.gamma_a();
    let Some(bw) = r.bandwidth() else {
        return Ok(gamma * (-gamma * tau).exp());
    };
    let a = amplitude(gamma, bw, tau);
    let e = (-0.5 * gamma * tau).exp();
    let bracket = 3.0 * e * e + 6.0 * gamma * e * a + (4.0 * gamma * gamma + gamma * (bw - gamma)) * a * a;
    Ok(bw * gamma * (gamma + bw) * bracket / ((3.0 * bw + gamma) * (bw + 3.0 * gamma)))
}

/// `⟨τ⟩₂ = 1/Γ + 1/γ + 2/(γ+Γ) − 9/(4(3Γ+γ)) − 9/(4(Γ+3γ))`.
pub fn mean_wtd_biphoton(r: &RateSet) -> f64 {
    let gamma = r.gamma_a();
    match r.bandwidth() {
        None => 1.0 / gamma,
        Some(bw) => {
            1.0 / bw + 1.0 / gamma + 2.0 / (gamma + bw)
                - 9.0 / (4.0 * (3.0 * bw + gamma))
                - 9.0 / (4.0 * (bw + 3.0 * gamma))
        }
    }
}

/// Rational `⟨τ⟩₂` from the closed form.
pub fn mean_wtd_biphoton_exact(r: &ExactRates) -> Rational {
    let gamma = r.gamma_a();
    match r.bandwidth() {
        None => Rational::from_integer(1.into()) / gamma,
        Some(bw) => {
            let one = ratio(1, 1);
            let nine_quarters = ratio(9, 4);
            &one / bw + &one / gamma + ratio(2, 1) / (gamma + bw)
                - &nine_quarters / (ratio(3, 1) * bw + gamma)
                - &nine_quarters / (bw + ratio(3, 1) * gamma)
        }
    }
}

/// `⟨t₂⟩ − ⟨t₁⟩` of the two-photon marginals.
pub fn mean_wtd_biphoton_difference(r: &ExactRates) -> Result<Rational> {
    let late = mean_time_exact(r, 2, 2)?;
    let early = mean_time_exact(r, 2, 1)?;
    Ok(late.exact().expect("exact pipeline") - early.exact().expect("exact pipeline"))
}

fn thermal_rates(p: &ThermalParams) -> Result<(f64, f64, f64)> {
    if p.pump() == 0.0 {
        return invalid("thermal waiting times need a nonzero pump");
    }
    let (pump, gamma, kappa, q) = (p.pump(), p.gamma_a(), p.kappa(), p.q());
    let slow = (gamma * gamma + pump * pump - q) / (2.0 * kappa);
    let fast = (gamma * gamma + pump * pump + q) / (2.0 * kappa);
    Ok((slow, fast, q))
}

/// Waiting-time density of the unfiltered thermal field.
pub fn wtd_thermal(p: &ThermalParams, tau: f64) -> Result<f64> {
    check_delay(tau)?;
    let (slow, fast, q) = thermal_rates(p)?;
    let pg = p.pump() * p.gamma_a();
    let (es, ef) = ((-slow * tau).exp(), (-fast * tau).exp());
    Ok(2.0 * pg / (q * p.kappa()) * (0.5 * q * (es + ef) - pg * (es - ef)))
}

/// The two closed-form multiphoton-peak averages of thermal light.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalPeakAverage {
    /// `⟨τ∞⟩ = (γ − P)/(P² + γ² + Q)`, the unfiltered value.
    pub wide: f64,
    /// Small-Γ asymptote `⟨τ∞⟩ γ(1 − θ)/Γ`, when a filter is set.
    pub narrow: Option<f64>,
}

pub fn thermal_peak_average(p: &ThermalParams) -> ThermalPeakAverage {
    let (pump, gamma) = (p.pump(), p.gamma_a());
    let wide = p.kappa() / (pump * pump + gamma * gamma + p.q());
    let narrow = p.bandwidth().map(|g| wide * gamma * (1.0 - p.theta()) / g);
    ThermalPeakAverage { wide, narrow }
}
