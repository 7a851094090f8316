//! Thermal light from an incoherently pumped lossy mode, seen through a
//! Lorentzian filter: spectrum, g², temperature and intensity.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::kernel::amplitude;
use crate::rates::Filter;

/// Pump rate `P_a`, decay rate `γ_a` and detector filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalParams {
    pump: f64,
    gamma_a: f64,
    filter: Filter,
}

impl ThermalParams {
    pub fn new(pump: f64, gamma_a: f64, filter: Filter) -> Result<Self> {
        if !(gamma_a.is_finite() && gamma_a > 0.0) {
            return invalid(format!("gamma_a must be positive, got {gamma_a}"));
        }
        if !(pump >= 0.0 && pump < gamma_a) {
            return invalid(format!("pump must lie in [0, gamma_a), got {pump}"));
        }
        if let Filter::Bandwidth(g) = filter {
            if !(g.is_finite() && g > 0.0) {
                return invalid(format!("filter bandwidth must be positive, got {g}"));
            }
        }
        Ok(ThermalParams {
            pump,
            gamma_a,
            filter,
        })
    }

    /// Parameters at temperature `θ = P_a/γ_a`.
    pub fn from_theta(theta: f64, gamma_a: f64, filter: Filter) -> Result<Self> {
        Self::new(theta * gamma_a, gamma_a, filter)
    }

    pub fn pump(&self) -> f64 {
        self.pump
    }

    pub fn gamma_a(&self) -> f64 {
        self.gamma_a
    }

    pub fn filter(&self) -> Filter {
        self.filter
    }

    pub fn bandwidth(&self) -> Option<f64> {
        match self.filter {
            Filter::Bandwidth(g) => Some(g),
            Filter::Unfiltered => None,
        }
    }

    pub fn theta(&self) -> f64 {
        self.pump / self.gamma_a
    }

    /// Field decay rate `γ_a − P_a`.
    pub fn kappa(&self) -> f64 {
        self.gamma_a - self.pump
    }

    /// `Q_a = √(P⁴ − 4P³γ + 10P²γ² − 4Pγ³ + γ⁴)`.
    pub fn q(&self) -> f64 {
        let (p, g) = (self.pump, self.gamma_a);
        (p.powi(4) - 4.0 * p.powi(3) * g + 10.0 * p * p * g * g - 4.0 * p * g.powi(3) + g.powi(4))
            .sqrt()
    }

    /// Mean photon number `P/(γ − P)`.
    pub fn mean_photons(&self) -> f64 {
        self.pump / self.kappa()
    }

    /// Unfiltered emission rate `γP/(γ − P)`.
    pub fn intensity(&self) -> f64 {
        self.gamma_a * self.mean_photons()
    }
}

/// Normalized Lorentzian of half width `half_width`.
pub fn lorentzian(half_width: f64, omega: f64) -> f64 {
    half_width / (PI * (half_width * half_width + omega * omega))
}

/// Normalized power spectrum at detuning `ω` from the mode.
pub fn spectrum_thermal(p: &ThermalParams, omega: f64) -> f64 {
    let kappa = p.kappa();
    let bare = lorentzian(0.5 * kappa, omega);
    match p.bandwidth() {
        None => bare,
        Some(g) => 0.5 * PI * bare * lorentzian(0.5 * g, omega) * (g + kappa),
    }
}

/// `g²(τ)` of the filtered thermal field; exactly 2 at `τ = 0`.
pub fn g2_thermal_filtered(p: &ThermalParams, tau: f64) -> Result<f64> {
    if !(tau >= 0.0) {
        return invalid(format!("delay must be nonnegative, got {tau}"));
    }
    let kappa = p.kappa();
    Ok(match p.bandwidth() {
        None => 1.0 + (-kappa * tau).exp(),
        Some(g) => {
            let field = g * amplitude(kappa, g, tau) + (-0.5 * g * tau).exp();
            1.0 + field * field
        }
    })
}

/// Steady-state photon-number law `(1 − θ)θⁿ`.
pub fn thermal_number_distribution(p: &ThermalParams, n: u32) -> f64 {
    let theta = p.theta();
    if n == 0 {
        return 1.0 - theta;
    }
    (1.0 - theta) * theta.powi(n as i32)
}

/// Population-ratio temperature `Pγ/(P² + (γ + Γ)(γ − P))` of the filtered
/// field.
pub fn filtered_temperature(p: &ThermalParams) -> Result<f64> {
    let g = p.bandwidth().ok_or(Error::RequiresFilter)?;
    let (pump, gamma) = (p.pump, p.gamma_a);
    Ok(pump * gamma / (pump * pump + (gamma + g) * p.kappa()))
}

/// Emission rate `γPΓ/((γ − P + Γ)(γ − P))` of the filtered field.
pub fn filtered_intensity(p: &ThermalParams) -> f64 {
    match p.bandwidth() {
        None => p.intensity(),
        Some(g) => p.intensity() * g / (p.kappa() + g),
    }
}

/// Best single-Lorentzian fit `A·L_w(ω)` of the filtered spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianFit {
    pub amplitude: f64,
    pub half_width: f64,
    /// `‖S − fit‖₂ / ‖S‖₂` on the fit grid.
    pub relative_residual: f64,
}

/// Least-squares Lorentzian fit on a uniform grid spanning twenty total
/// linewidths on each side.
pub fn lorentzian_fit(p: &ThermalParams) -> LorentzianFit {
    let scale = 0.5 * (p.kappa() + p.bandwidth().unwrap_or(0.0));
    let points = 4001;
    let span = 20.0 * scale;
    let grid: Vec<f64> = (0..points)
        .map(|i| -span + 2.0 * span * i as f64 / (points - 1) as f64)
        .collect();
    let target: Vec<f64> = grid.iter().map(|&w| spectrum_thermal(p, w)).collect();
    let norm: f64 = target.iter().map(|s| s * s).sum::<f64>().sqrt();
    let fit_at = |log_w: f64| {
        let w = log_w.exp();
        let shape: Vec<f64> = grid.iter().map(|&x| lorentzian(w, x)).collect();
        let amp = shape.iter().zip(&target).map(|(a, b)| a * b).sum::<f64>()
            / shape.iter().map(|a| a * a).sum::<f64>();
        let res = shape
            .iter()
            .zip(&target)
            .map(|(a, b)| (amp * a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        (res / norm, amp, w)
    };
    // golden-section search on log width
    let (mut lo, mut hi) = ((scale * 1e-2).ln(), (scale * 1e2).ln());
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (fit_at(x1).0, fit_at(x2).0);
    for _ in 0..100 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = fit_at(x1).0;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = fit_at(x2).0;
        }
    }
    let (relative_residual, amplitude, half_width) = fit_at(0.5 * (lo + hi));
    LorentzianFit {
        amplitude,
        half_width,
        relative_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, integrate_to_inf};
    use approx::assert_relative_eq;

    fn params(theta: f64, g: f64) -> ThermalParams {
        ThermalParams::from_theta(theta, 1.0, Filter::Bandwidth(g)).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ThermalParams::new(1.0, 1.0, Filter::Unfiltered).is_err());
        assert!(ThermalParams::new(-0.1, 1.0, Filter::Unfiltered).is_err());
        assert!(ThermalParams::new(0.2, 1.0, Filter::Bandwidth(0.0)).is_err());
    }

    #[test]
    fn spectrum_is_normalized() {
        for &(theta, g) in &[(0.25, 0.5), (0.1, 3.0), (0.6, 0.4), (0.25, 0.75)] {
            let p = params(theta, g);
            let mass = 2.0 * integrate_to_inf(|w| spectrum_thermal(&p, w), 1e-12).unwrap();
            assert!((mass - 1.0).abs() < 1e-8, "θ={theta} Γ={g}: {mass}");
        }
        let bare = ThermalParams::from_theta(0.3, 1.0, Filter::Unfiltered).unwrap();
        let mass = 2.0 * integrate_to_inf(|w| spectrum_thermal(&bare, w), 1e-12).unwrap();
        assert!((mass - 1.0).abs() < 1e-8);
    }

    #[test]
    fn narrow_filter_concentrates_the_line() {
        let g = 1e-3;
        let p = params(0.25, g);
        let inner = 2.0 * integrate(|w| spectrum_thermal(&p, w), 0.0, g, 1e-13).unwrap();
        assert!((inner - 2.0 / PI * 2f64.atan()).abs() < 1e-3);
        let wider = 2.0 * integrate(|w| spectrum_thermal(&p, w), 0.0, 10.0 * g, 1e-13).unwrap();
        assert!(wider > 0.9);
    }

    #[test]
    fn filtered_line_is_not_lorentzian() {
        let fit = lorentzian_fit(&params(0.25, 0.5));
        assert!(fit.relative_residual > 0.01, "{fit:?}");
        let bare = lorentzian_fit(&ThermalParams::from_theta(0.25, 1.0, Filter::Unfiltered).unwrap());
        assert!(bare.relative_residual < 1e-6);
        assert_relative_eq!(bare.half_width, 0.375, max_relative = 1e-5);
    }

    #[test]
    fn spectrum_fourier_transform_is_real_even_positive() {
        let p = params(0.25, 0.5);
        for &tau in &[0.0, 0.5, 2.0, 6.0] {
            let re = 2.0 * integrate_to_inf(|w| spectrum_thermal(&p, w) * (w * tau).cos(), 1e-11).unwrap();
            assert!(re > 0.0);
            let a = 0.375;
            let b = 0.25;
            let expected = (a * (-b * tau).exp() - b * (-a * tau).exp()) / (a - b);
            assert!((re - expected).abs() < 1e-6, "τ={tau}: {re} vs {expected}");
        }
    }

    #[test]
    fn g2_at_zero_delay_is_two() {
        for theta in [0.0, 0.1, 0.25, 0.5, 0.9] {
            let kappa = 1.0 - theta;
            for g in [0.01, 0.5, kappa, kappa * (1.0 + 1e-9), kappa * (1.0 - 1e-6), 3.0, 1e4] {
                let v = g2_thermal_filtered(&params(theta, g), 0.0).unwrap();
                assert!((v - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn g2_matches_closed_form_and_limits() {
        let p = params(0.25, 0.5);
        let (g, k) = (0.5f64, 0.75f64);
        for &tau in &[0.3, 1.0, 4.0] {
            let reference = 1.0
                + (g * g * (-k * tau).exp() + k * k * (-g * tau).exp()
                    - 2.0 * g * k * (-(g + k) * tau / 2.0).exp())
                    / (g - k).powi(2);
            assert_relative_eq!(g2_thermal_filtered(&p, tau).unwrap(), reference, max_relative = 1e-12);
            let wide = g2_thermal_filtered(&params(0.25, 1e7), tau).unwrap();
            assert!((wide - 1.0 - (-k * tau).exp()).abs() < 1e-6);
            let narrow = g2_thermal_filtered(&params(0.25, 1e-9), tau).unwrap();
            assert!((narrow - 2.0).abs() < 1e-8);
        }
        let confluent = params(0.25, 0.75);
        let tau = 2.0f64;
        let limit = 1.0 + ((1.0 + 0.375 * tau) * (-0.375 * tau).exp()).powi(2);
        assert_relative_eq!(g2_thermal_filtered(&confluent, tau).unwrap(), limit, max_relative = 1e-12);
    }

    #[test]
    fn number_distribution() {
        let p = ThermalParams::from_theta(0.5, 1.0, Filter::Unfiltered).unwrap();
        assert_relative_eq!(thermal_number_distribution(&p, 2), 0.125);
        let total: f64 = (0..200).map(|n| thermal_number_distribution(&p, n)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let mean: f64 = (0..200).map(|n| n as f64 * thermal_number_distribution(&p, n)).sum();
        assert_relative_eq!(mean, p.mean_photons(), max_relative = 1e-12);
        let cold = ThermalParams::new(0.0, 1.0, Filter::Unfiltered).unwrap();
        assert_eq!(thermal_number_distribution(&cold, 0), 1.0);
        assert_eq!(thermal_number_distribution(&cold, 3), 0.0);
    }

    #[test]
    fn temperature_and_intensity() {
        for theta in [0.1, 0.25, 0.5] {
            let p = params(theta, theta);
            assert_eq!(filtered_temperature(&p).unwrap(), theta);
            let mut last = f64::INFINITY;
            for i in 1..400 {
                let g = i as f64 * 0.01;
                let q = params(theta, g);
                let t = filtered_temperature(&q).unwrap();
                assert!(t < last);
                last = t;
                assert_eq!(t > theta, g < theta);
                assert!(filtered_intensity(&q) < q.intensity());
            }
            let tiny = params(theta, 1e-6);
            let ratio = filtered_intensity(&tiny) / (tiny.intensity() * 1e-6 / tiny.kappa());
            assert!((ratio - 1.0).abs() < 1e-5);
        }
        let bare = ThermalParams::from_theta(0.3, 1.0, Filter::Unfiltered).unwrap();
        assert!(filtered_temperature(&bare).is_err());
    }
}
