//! Physical parameters shared by every spontaneous-emission formula.
//!
//! Times are in units of `1/γ_a` when `γ_a = 1` (the default); dimensional
//! rates can be passed directly and every formula stays homogeneous.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::exact::{rational_from_f64, to_f64, Rational};

/// Detector bandwidth: a Lorentzian filter of width Γ, or no filter at all.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Filter {
    Unfiltered,
    Bandwidth(f64),
}

/// Floating-point parameter set `(γ_a, Γ, ξ, ω_a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSet {
    gamma_a: f64,
    filter: Filter,
    xi: f64,
    omega_a: f64,
}

impl RateSet {
    pub fn new(gamma_a: f64, filter: Filter, xi: f64, omega_a: f64) -> Result<Self> {
        if !(gamma_a.is_finite() && gamma_a > 0.0) {
            return invalid(format!("gamma_a must be positive, got {gamma_a}"));
        }
        if let Filter::Bandwidth(g) = filter {
            if !(g.is_finite() && g > 0.0) {
                return invalid(format!("filter bandwidth must be positive, got {g}"));
            }
        }
        if !(0.0..=1.0).contains(&xi) {
            return invalid(format!("detector efficiency must lie in [0, 1], got {xi}"));
        }
        if !omega_a.is_finite() {
            return invalid("omega_a must be finite");
        }
        Ok(RateSet {
            gamma_a,
            filter,
            xi,
            omega_a,
        })
    }

    /// Perfect detector, `ω_a = 0`, filter of width `bandwidth`.
    pub fn filtered(gamma_a: f64, bandwidth: f64) -> Result<Self> {
        Self::new(gamma_a, Filter::Bandwidth(bandwidth), 1.0, 0.0)
    }

    pub fn unfiltered(gamma_a: f64) -> Result<Self> {
        Self::new(gamma_a, Filter::Unfiltered, 1.0, 0.0)
    }

    pub fn with_xi(self, xi: f64) -> Result<Self> {
        Self::new(self.gamma_a, self.filter, xi, self.omega_a)
    }

    pub fn with_omega(self, omega_a: f64) -> Result<Self> {
        Self::new(self.gamma_a, self.filter, self.xi, omega_a)
    }

    pub fn gamma_a(&self) -> f64 {
        self.gamma_a
    }

    pub fn filter(&self) -> Filter {
        self.filter
    }

    /// Γ, or `None` when unfiltered.
    pub fn bandwidth(&self) -> Option<f64> {
        match self.filter {
            Filter::Bandwidth(g) => Some(g),
            Filter::Unfiltered => None,
        }
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn omega_a(&self) -> f64 {
        self.omega_a
    }

    /// Γ₊ = Γ + γ_a
    pub fn gamma_plus(&self) -> Option<f64> {
        self.bandwidth().map(|g| g + self.gamma_a)
    }

    /// Γ₋ = Γ − γ_a
    pub fn gamma_minus(&self) -> Option<f64> {
        self.bandwidth().map(|g| g - self.gamma_a)
    }

    /// Probability that a single photon of the bundle is ever detected:
    /// `ξΓ/Γ₊`, or `ξ` without filter.
    pub fn single_detection(&self) -> f64 {
        match self.filter {
            Filter::Bandwidth(g) => self.xi * g / (g + self.gamma_a),
            Filter::Unfiltered => self.xi,
        }
    }
}

/// Exact-rational counterpart of [`RateSet`] (ω_a does not enter any
/// probability, so it is not carried).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactRates {
    gamma_a: Rational,
    filter: Option<Rational>,
    xi: Rational,
}

impl ExactRates {
    pub fn new(gamma_a: Rational, filter: Option<Rational>, xi: Rational) -> Result<Self> {
        if !gamma_a.is_positive() {
            return invalid(format!("gamma_a must be positive, got {gamma_a}"));
        }
        if let Some(g) = &filter {
            if !g.is_positive() {
                return invalid(format!("filter bandwidth must be positive, got {g}"));
            }
        }
        if xi.is_negative() || xi > Rational::one() {
            return invalid(format!("detector efficiency must lie in [0, 1], got {xi}"));
        }
        Ok(ExactRates {
            gamma_a,
            filter,
            xi,
        })
    }

    pub fn filtered(gamma_a: Rational, bandwidth: Rational) -> Result<Self> {
        Self::new(gamma_a, Some(bandwidth), Rational::one())
    }

    pub fn unfiltered(gamma_a: Rational) -> Result<Self> {
        Self::new(gamma_a, None, Rational::one())
    }

    /// Exact image of a floating-point parameter set (doubles are dyadic
    /// rationals, so the conversion loses nothing).
    pub fn from_rate_set(r: &RateSet) -> Result<Self> {
        let filter = match r.bandwidth() {
            Some(g) => Some(rational_from_f64(g)?),
            None => None,
        };
        Self::new(rational_from_f64(r.gamma_a())?, filter, rational_from_f64(r.xi())?)
    }

    pub fn to_rate_set(&self) -> RateSet {
        let filter = match &self.filter {
            Some(g) => Filter::Bandwidth(to_f64(g)),
            None => Filter::Unfiltered,
        };
        RateSet::new(to_f64(&self.gamma_a), filter, to_f64(&self.xi), 0.0)
            .expect("validated exact rates map to valid floats")
    }

    pub fn gamma_a(&self) -> &Rational {
        &self.gamma_a
    }

    pub fn bandwidth(&self) -> Option<&Rational> {
        self.filter.as_ref()
    }

    pub fn xi(&self) -> &Rational {
        &self.xi
    }

    pub fn gamma_plus(&self) -> Option<Rational> {
        self.filter.as_ref().map(|g| g + &self.gamma_a)
    }

    pub fn gamma_minus(&self) -> Option<Rational> {
        self.filter.as_ref().map(|g| g - &self.gamma_a)
    }

    /// `Γ = γ_a`, where the closed forms have a removable singularity.
    pub fn is_confluent(&self) -> bool {
        self.filter.as_ref().is_some_and(|g| g == &self.gamma_a)
    }

    pub fn single_detection(&self) -> Rational {
        match &self.filter {
            Some(g) => &self.xi * g / (g + &self.gamma_a),
            None => self.xi.clone(),
        }
    }
}

/// Photon number of the initial Fock state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleSpec {
    n: u32,
}

impl BundleSpec {
    pub const DEFAULT_CAP: u32 = 10;

    pub fn new(n: u32) -> Result<Self> {
        Self::with_cap(n, Self::DEFAULT_CAP)
    }

    pub fn with_cap(n: u32, cap: u32) -> Result<Self> {
        if n == 0 || n > cap {
            return invalid(format!("photon number must lie in 1..={cap}, got {n}"));
        }
        Ok(BundleSpec { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

/// Nondecreasing list of nonnegative detection times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeVector(Vec<f64>);

impl TimeVector {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return invalid("times must be finite and nonnegative");
        }
        if times.windows(2).any(|w| w[1] < w[0]) {
            return invalid("times must be nondecreasing");
        }
        Ok(TimeVector(times))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn validation() {
        assert!(RateSet::filtered(0.0, 1.0).is_err());
        assert!(RateSet::filtered(1.0, -1.0).is_err());
        assert!(RateSet::filtered(1.0, 1.0).unwrap().with_xi(1.5).is_err());
        assert!(BundleSpec::new(0).is_err());
        assert!(BundleSpec::new(11).is_err());
        assert!(BundleSpec::with_cap(12, 20).is_ok());
        assert!(TimeVector::new(vec![1.0, 0.5]).is_err());
        assert!(TimeVector::new(vec![0.0, 0.5, 0.5]).is_ok());
    }

    #[test]
    fn derived_rates_follow_bandwidth() {
        let r = RateSet::filtered(2.0, 3.0).unwrap();
        assert_eq!(r.gamma_plus(), Some(5.0));
        assert_eq!(r.gamma_minus(), Some(1.0));
        let u = RateSet::unfiltered(2.0).unwrap();
        assert_eq!(u.gamma_plus(), None);
        assert_eq!(u.single_detection(), 1.0);
    }

    #[test]
    fn exact_round_trip() {
        let e = ExactRates::filtered(ratio(1, 1), ratio(1, 4)).unwrap();
        let f = e.to_rate_set();
        assert_eq!(f.bandwidth(), Some(0.25));
        assert_eq!(ExactRates::from_rate_set(&f).unwrap(), e);
        assert!(ExactRates::filtered(ratio(2, 1), ratio(2, 1)).unwrap().is_confluent());
        assert_eq!(e.single_detection(), ratio(1, 5));
    }
}
