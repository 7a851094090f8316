//! Single-photon detection kernel of filtered spontaneous emission.
//!
//! Every multiphoton quantity factorizes over the unnormalized density
//! `ρ(t) = ξγ_a|Ξ(t)|²` and its survival `S(t) = ∫_t^∞ ρ`, whose total
//! `S(0)` is the single-photon detection probability `ξΓ/Γ₊`.
//!
//! The floating-point forms avoid the `Γ − γ_a` cancellation by writing the
//! filter amplitude through `A(t) = (e^{-γt/2} − e^{-Γt/2})/Γ₋`, evaluated
//! with `expm1` when `Γ₋t` is small, so `Γ = γ_a` needs no special branch.

use num_traits::One;

use crate::exact::{ratio, ExpPolynomial, Rational};
use crate::rates::{ExactRates, Filter, RateSet};

/// `(e^{-γt/2} − e^{-Γt/2}) / (Γ − γ)`, continuous through `Γ = γ`.
pub(crate) fn amplitude(gamma: f64, bandwidth: f64, t: f64) -> f64 {
    let d = bandwidth - gamma;
    let x = 0.5 * d * t;
    let half_decay = (-0.5 * gamma * t).exp();
    if x.abs() < 1e-5 {
        // (1 − e^{-x})/x series, truncation error below x³/24
        half_decay * 0.5 * t * (1.0 - 0.5 * x + x * x / 6.0)
    } else if x.abs() < 1.0 {
        half_decay * (-(-x).exp_m1()) / d
    } else {
        (half_decay - (-0.5 * bandwidth * t).exp()) / d
    }
}

/// Floating-point kernel bound to a [`RateSet`].
#[derive(Debug, Clone, Copy)]
pub struct Kernel {
    gamma: f64,
    bandwidth: Option<f64>,
    xi: f64,
}

impl Kernel {
    pub fn new(r: &RateSet) -> Self {
        Kernel {
            gamma: r.gamma_a(),
            bandwidth: match r.filter() {
                Filter::Bandwidth(g) => Some(g),
                Filter::Unfiltered => None,
            },
            xi: r.xi(),
        }
    }

    /// `S(0)`: probability that one photon is ever detected.
    pub fn total(&self) -> f64 {
        match self.bandwidth {
            Some(g) => self.xi * g / (g + self.gamma),
            None => self.xi,
        }
    }

    pub fn density(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match self.bandwidth {
            Some(g) => {
                let a = amplitude(self.gamma, g, t);
                self.xi * self.gamma * g * g * a * a
            }
            None => self.xi * self.gamma * (-self.gamma * t).exp(),
        }
    }

    /// `S(t) = ∫_t^∞ ρ`.
    pub fn survival(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.total();
        }
        if t.is_infinite() {
            return 0.0;
        }
        let gm = self.gamma;
        match self.bandwidth {
            Some(g) => {
                let a = amplitude(gm, g, t);
                let d = g - gm;
                let half = (-0.5 * gm * t).exp();
                let inner = 2.0 * gm * gm * a * a + gm * a * (2.0 * half + d * a) + half * half;
                self.xi * g / (g + gm) * inner
            }
            None => self.xi * (-gm * t).exp(),
        }
    }

    /// `∫_0^t ρ`.
    pub fn cumulative(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self.bandwidth {
            None => -self.xi * (-self.gamma * t).exp_m1(),
            Some(_) => (self.total() - self.survival(t)).max(0.0),
        }
    }
}

/// Exact kernel: density, survival and total as exponential polynomials.
#[derive(Debug, Clone)]
pub struct ExactKernel {
    pub density: ExpPolynomial,
    pub survival: ExpPolynomial,
    pub total: Rational,
}

impl ExactKernel {
    pub fn new(r: &ExactRates) -> Self {
        let gamma = r.gamma_a().clone();
        let half = ratio(1, 2);
        let density = match r.bandwidth() {
            None => ExpPolynomial::term(r.xi() * &gamma, 0, gamma.clone()),
            Some(g) => {
                let amplitude = if g == &gamma {
                    // Γ(e^{-γt/2} − e^{-Γt/2})/Γ₋ → γ (t/2) e^{-γt/2}
                    ExpPolynomial::term(&gamma * &half, 1, &gamma * &half)
                } else {
                    let lead = g / (g - &gamma);
                    &ExpPolynomial::term(lead.clone(), 0, &gamma * &half)
                        - &ExpPolynomial::term(lead, 0, g * &half)
                };
                amplitude.pow(2).scale(&(r.xi() * &gamma))
            }
        };
        let survival = density
            .tail_integral()
            .expect("kernel rates are strictly positive");
        let total = survival.value_at_zero();
        ExactKernel {
            density,
            survival,
            total,
        }
    }

    /// `S(0) − S(t) = ∫_0^t ρ`
    pub fn cumulative(&self) -> ExpPolynomial {
        &ExpPolynomial::constant(self.total.clone()) - &self.survival
    }

    /// Density of one photon conditioned on its detection.
    pub fn normalized_density(&self) -> ExpPolynomial {
        self.density.scale(&(Rational::one() / &self.total))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::to_f64;
    use crate::quadrature::integrate_to_inf;

    #[test]
    fn amplitude_is_continuous_through_confluence() {
        for &t in &[0.0, 1e-3, 0.7, 3.0, 25.0] {
            let at = amplitude(1.0, 1.0, t);
            let expected = 0.5 * t * (-0.5 * t).exp();
            assert!((at - expected).abs() <= 1e-15 * (1.0 + expected));
            for eps in [1e-9, 1e-6, 1e-3] {
                let near = amplitude(1.0, 1.0 + eps, t);
                assert!((near - at).abs() <= 2.0 * eps * t * t + 1e-15, "t={t} eps={eps}");
            }
        }
        // far from confluence the direct difference is used
        let a = amplitude(1.0, 5.0, 2.0);
        assert!((a - ((-1.0f64).exp() - (-5.0f64).exp()) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn survival_derivative_is_minus_density() {
        for &(gamma, bw) in &[(1.0, 0.2), (1.0, 1.0), (1.0, 1.0 + 1e-7), (2.0, 30.0)] {
            let k = Kernel::new(&RateSet::filtered(gamma, bw).unwrap());
            for &t in &[0.1, 0.9, 2.5, 7.0] {
                let h = 1e-5;
                let fd = (k.survival(t + h) - k.survival(t - h)) / (2.0 * h);
                assert!((fd + k.density(t)).abs() < 1e-8, "Γ={bw} t={t}");
            }
        }
    }

    #[test]
    fn float_and_exact_kernels_agree() {
        for (g, bw) in [(1, 1), (1, 3), (2, 1)] {
            let exact = ExactKernel::new(&ExactRates::filtered(ratio(g, 1), ratio(bw, 1)).unwrap());
            let float = Kernel::new(&RateSet::filtered(g as f64, bw as f64).unwrap());
            assert!((to_f64(&exact.total) - float.total()).abs() < 1e-15);
            for &t in &[0.3, 1.0, 4.0] {
                assert!((exact.density.eval(t) - float.density(t)).abs() < 1e-13);
                assert!((exact.survival.eval(t) - float.survival(t)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn confluent_total_is_one_half() {
        let exact = ExactKernel::new(&ExactRates::filtered(ratio(1, 1), ratio(1, 1)).unwrap());
        assert_eq!(exact.total, ratio(1, 2));
        let k = Kernel::new(&RateSet::filtered(1.0, 1.0).unwrap());
        let mass = integrate_to_inf(|t| k.density(t), 1e-12).unwrap();
        assert!((mass - 0.5).abs() < 1e-12);
        // mean of the normalized confluent density γ³t²e^{-γt}/4 is 3/γ
        let mean = exact.normalized_density().moment(1).unwrap();
        assert_eq!(mean, ratio(3, 1));
    }
}
