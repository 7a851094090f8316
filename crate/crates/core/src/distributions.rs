//! Efficiencies, counting laws, joint and marginal densities of detection
//! times for a spontaneously emitted N-photon Fock state.
//!
//! Densities are unnormalized: the full-bundle quantities integrate to the
//! probability `P(N,N)` of detecting all N photons, and the broken-bundle
//! marginals to `𝒩(n,N)`.

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::exact::{
    binomial, factorial, hyp2f1_terminating, Compositions, ExpPolynomial, Rational,
};
use crate::kernel::{amplitude, ExactKernel, Kernel};
use crate::rates::{BundleSpec, ExactRates, Filter, RateSet};

/// Probability vector over the number `k = 0..=N` of detected photons.
#[derive(Debug, Clone, PartialEq)]
pub struct CountingDistribution<T = f64> {
    pub probabilities: Vec<T>,
}

impl<T> CountingDistribution<T> {
    pub fn get(&self, k: usize) -> Option<&T> {
        self.probabilities.get(k)
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

impl CountingDistribution<f64> {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

impl CountingDistribution<Rational> {
    pub fn total(&self) -> Rational {
        self.probabilities.iter().sum()
    }

    pub fn to_f64(&self) -> CountingDistribution<f64> {
        CountingDistribution {
            probabilities: self.probabilities.iter().map(crate::exact::to_f64).collect(),
        }
    }
}

fn check_window(window: f64) -> Result<()> {
    if window.is_nan() || window < 0.0 {
        return invalid(format!("detection window must be nonnegative, got {window}"));
    }
    Ok(())
}

fn bigint_f64(x: &num_bigint::BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// `ξ(1 − e^{-γ_a T})`, ignoring any filter carried by `r`.
pub fn efficiency_unfiltered(r: &RateSet, window: f64) -> Result<f64> {
    check_window(window)?;
    Ok(-r.xi() * (-r.gamma_a() * window).exp_m1())
}

/// Detection probability of one photon within `[0, T]` behind the filter.
pub fn efficiency_filtered(r: &RateSet, window: f64) -> Result<f64> {
    check_window(window)?;
    if r.bandwidth().is_none() {
        return Err(Error::RequiresFilter);
    }
    Ok(Kernel::new(r).cumulative(window))
}

/// Filtered or unfiltered efficiency according to `r`.
pub fn efficiency(r: &RateSet, window: f64) -> Result<f64> {
    match r.filter() {
        Filter::Unfiltered => efficiency_unfiltered(r, window),
        Filter::Bandwidth(_) => efficiency_filtered(r, window),
    }
}

/// Binomial law of detected photons within the window `T` (`T = ∞`
/// accepted).
pub fn counting_probability(
    r: &RateSet,
    spec: BundleSpec,
    window: f64,
) -> Result<CountingDistribution> {
    let eff = efficiency(r, window)?;
    let n = spec.n();
    let probabilities = (0..=n)
        .map(|k| {
            bigint_f64(&binomial(n, k))
                * eff.powi(k as i32)
                * (1.0 - eff).powi((n - k) as i32)
        })
        .collect();
    Ok(CountingDistribution { probabilities })
}

/// Exact binomial law for a rational single-photon efficiency.
pub fn counting_probability_exact(
    efficiency: &Rational,
    spec: BundleSpec,
) -> Result<CountingDistribution<Rational>> {
    if efficiency < &Rational::zero() || efficiency > &Rational::one() {
        return invalid(format!("efficiency must lie in [0, 1], got {efficiency}"));
    }
    let n = spec.n();
    let miss = Rational::one() - efficiency;
    let probabilities = (0..=n)
        .map(|k| {
            Rational::from_integer(binomial(n, k))
                * crate::exact::rpow(efficiency, k)
                * crate::exact::rpow(&miss, n - k)
        })
        .collect();
    Ok(CountingDistribution { probabilities })
}

/// Alternating factorial-moment series for the probability of `n` counts.
pub fn counting_via_mandel_series(
    r: &RateSet,
    spec: BundleSpec,
    window: f64,
    n: u32,
) -> Result<f64> {
    let big_n = spec.n();
    if n > big_n {
        return invalid(format!("count {n} exceeds photon number {big_n}"));
    }
    let eff = efficiency(r, window)?;
    let nf = bigint_f64(&factorial(n));
    let mut sum = 0.0;
    for k in n..=big_n {
        let moment = eff.powi(k as i32) * bigint_f64(&factorial(big_n))
            / bigint_f64(&factorial(big_n - k));
        let sign = if (n + k) % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * moment / (nf * bigint_f64(&factorial(k - n)));
    }
    Ok(sum)
}

/// `P(k,N) = C(N,k) s^k (1−s)^{N−k}` with `s` the single-photon detection
/// probability (`Γ/Γ₊` for a perfect detector).
pub fn detect_probability_exact(r: &ExactRates, spec: BundleSpec, k: u32) -> Result<Rational> {
    let n = spec.n();
    if k > n {
        return invalid(format!("k = {k} exceeds photon number {n}"));
    }
    let s = r.single_detection();
    let miss = Rational::one() - &s;
    Ok(Rational::from_integer(binomial(n, k))
        * crate::exact::rpow(&s, k)
        * crate::exact::rpow(&miss, n - k))
}

pub fn detect_probability(r: &RateSet, spec: BundleSpec, k: u32) -> Result<f64> {
    let exact = detect_probability_exact(&ExactRates::from_rate_set(r)?, spec, k)?;
    Ok(crate::exact::to_f64(&exact))
}

/// `𝒩(n,N)` through the terminating hypergeometric closed form.
pub fn detected_fraction_hypergeometric(
    r: &ExactRates,
    spec: BundleSpec,
    n: u32,
) -> Result<Rational> {
    let big_n = spec.n();
    if n == 0 || n > big_n {
        return invalid(format!("n must lie in 1..={big_n}, got {n}"));
    }
    let s = r.single_detection();
    let miss = Rational::one() - &s;
    if miss.is_zero() {
        return Ok(Rational::one());
    }
    let x = -(&s / &miss);
    let series = hyp2f1_terminating(n as i64 - big_n as i64, n as i64 + 1, &x)?;
    Ok(Rational::from_integer(binomial(big_n, n))
        * crate::exact::rpow(&s, n)
        * crate::exact::rpow(&miss, big_n - n)
        * series)
}

/// Probability `𝒩(n,N) = Σ_{k≥n} P(k,N)` that at least `n` photons are
/// detected; the direct sum and the hypergeometric form must agree exactly.
pub fn detected_fraction_exact(r: &ExactRates, spec: BundleSpec, n: u32) -> Result<Rational> {
    let closed = detected_fraction_hypergeometric(r, spec, n)?;
    let mut direct = Rational::zero();
    for k in n..=spec.n() {
        direct += detect_probability_exact(r, spec, k)?;
    }
    if closed != direct {
        return Err(Error::Inconsistent(format!(
            "hypergeometric {closed} differs from direct sum {direct}"
        )));
    }
    Ok(direct)
}

pub fn detected_fraction(r: &RateSet, spec: BundleSpec, n: u32) -> Result<f64> {
    let exact = detected_fraction_exact(&ExactRates::from_rate_set(r)?, spec, n)?;
    Ok(crate::exact::to_f64(&exact))
}

/// `(g(t), g'(t))` with `g = e^{-γt}/γ + e^{-Γt}/Γ − 4e^{-Γ₊t/2}/Γ₊`.
///
/// At `Γ = γ_a` exactly, where `g` vanishes identically, the pair is the
/// confluent kernel: survival `e^{-γt}(γ²t²/4 + γt/2 + 1/2)` and minus the
/// density `γ³t²e^{-γt}/4`.
pub fn g_pair(r: &RateSet, t: f64) -> Result<(f64, f64)> {
    let bw = r.bandwidth().ok_or(Error::RequiresFilter)?;
    if !(t >= 0.0) {
        return invalid(format!("time must be nonnegative, got {t}"));
    }
    let gm = r.gamma_a();
    let kernel = Kernel::new(&RateSet::filtered(gm, bw)?);
    if bw == gm {
        return Ok((kernel.survival(t), -kernel.density(t)));
    }
    let d = bw - gm;
    let a = amplitude(gm, bw, t);
    let half = (-0.5 * gm * t).exp();
    let g = d * d * (2.0 * gm * gm * a * a + gm * a * (2.0 * half + d * a) + half * half)
        / (gm * bw * (bw + gm));
    Ok((g, -d * d * a * a))
}

fn check_spec_index(spec: BundleSpec, k: u32) -> Result<()> {
    if k == 0 || k > spec.n() {
        return invalid(format!("index must lie in 1..={}, got {k}", spec.n()));
    }
    Ok(())
}

/// `N! Π ρ(t_i)` on the ordered cone `0 ≤ t₁ ≤ … ≤ t_N`, zero outside.
pub fn joint_pdf(r: &RateSet, spec: BundleSpec, times: &[f64]) -> Result<f64> {
    if times.len() != spec.n() as usize {
        return invalid(format!(
            "expected {} detection times, got {}",
            spec.n(),
            times.len()
        ));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return invalid("times must be finite");
    }
    if times.first().is_some_and(|t| *t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Ok(0.0);
    }
    let kernel = Kernel::new(r);
    let product: f64 = times.iter().map(|&t| kernel.density(t)).product();
    Ok(bigint_f64(&factorial(spec.n())) * product)
}

fn marginal_with(kernel: &Kernel, n: u32, k: u32, t: f64) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    let s = kernel.survival(t);
    let c = kernel.cumulative(t);
    k as f64
        * bigint_f64(&binomial(n, k))
        * kernel.density(t)
        * s.powi((n - k) as i32)
        * c.powi(k as i32 - 1)
}

/// Density of the k-th detection time of a fully detected bundle.
pub fn marginal_full(r: &RateSet, spec: BundleSpec, k: u32, t: f64) -> Result<f64> {
    check_spec_index(spec, k)?;
    Ok(marginal_with(&Kernel::new(r), spec.n(), k, t))
}

/// Density of the n-th detection time over all bundles with at least n
/// detected photons.
pub fn marginal_broken(r: &RateSet, spec: BundleSpec, n: u32, t: f64) -> Result<f64> {
    check_spec_index(spec, n)?;
    let kernel = Kernel::new(r);
    let lost = 1.0 - kernel.total();
    let big_n = spec.n();
    Ok((n..=big_n)
        .map(|k| {
            bigint_f64(&binomial(big_n, k))
                * lost.powi((big_n - k) as i32)
                * marginal_with(&kernel, k, n, t)
        })
        .sum())
}

/// Exact `φ_k^{(N)}(t) = k C(N,k) ρ S^{N−k} (p − S)^{k−1}`.
pub fn marginal_full_exact(kernel: &ExactKernel, n: u32, k: u32) -> ExpPolynomial {
    let coeff = Rational::from_integer(binomial(n, k) * k);
    (&(&kernel.density * &kernel.survival.pow(n - k)) * &kernel.cumulative().pow(k - 1))
        .scale(&coeff)
}

/// Exact broken-bundle marginal of the n-th detection.
pub fn marginal_broken_exact(r: &ExactRates, spec: BundleSpec, n: u32) -> Result<ExpPolynomial> {
    check_spec_index(spec, n)?;
    let kernel = ExactKernel::new(r);
    let lost = Rational::one() - &kernel.total;
    let big_n = spec.n();
    let mut out = ExpPolynomial::zero();
    for k in n..=big_n {
        let weight = Rational::from_integer(binomial(big_n, k))
            * crate::exact::rpow(&lost, big_n - k);
        out = &out + &marginal_full_exact(&kernel, k, n).scale(&weight);
    }
    Ok(out)
}

/// Joint density of the first and last detections of a full bundle,
/// `N(N−1) ρ(t₁) ρ(t_N) (S(t₁) − S(t_N))^{N−2}` for `t₁ ≤ t_N`.
pub fn joint_first_last(r: &RateSet, spec: BundleSpec, t1: f64, tn: f64) -> Result<f64> {
    let n = spec.n();
    if n < 2 {
        return invalid("first-last density needs at least two photons");
    }
    if t1 < 0.0 || tn < t1 {
        return Ok(0.0);
    }
    let kernel = Kernel::new(r);
    let between = (kernel.survival(t1) - kernel.survival(tn)).max(0.0);
    Ok((n * (n - 1)) as f64
        * kernel.density(t1)
        * kernel.density(tn)
        * between.powi(n as i32 - 2))
}

/// The same density written as the ten-index multinomial sum over
/// exponentials; valid for `Γ ≠ γ_a` and kept as an independent check.
pub fn joint_first_last_sum(r: &RateSet, spec: BundleSpec, t1: f64, tn: f64) -> Result<f64> {
    let n = spec.n();
    if n < 2 {
        return invalid("first-last density needs at least two photons");
    }
    let bw = r.bandwidth().ok_or(Error::RequiresFilter)?;
    let gm = r.gamma_a();
    if bw == gm {
        return invalid("the multinomial form is singular at Γ = γ_a");
    }
    if t1 < 0.0 || tn < t1 {
        return Ok(0.0);
    }
    let gp = bw + gm;
    let fact = |k: u32| bigint_f64(&factorial(k));
    let prefactor = 2.0 * fact(n) * (bw / (bw - gm)).powi(2 * n as i32) * (-gm).powi(n as i32);
    let mut sum = 0.0;
    for outer in Compositions::new(n - 2, 6) {
        let [k1, k2, k3, k4, k5, k6] = [outer[0], outer[1], outer[2], outer[3], outer[4], outer[5]];
        for inner in Compositions::new(2, 4) {
            let [k7, k8, k9, k10] = [inner[0], inner[1], inner[2], inner[3]];
            let ks = [k1, k2, k3, k4, k5, k6, k7, k8, k9, k10];
            let inv_fact: f64 = ks.iter().map(|&k| 1.0 / fact(k)).product();
            let rate_n = gm * (2 * k1 + k7 + k8) as f64
                + bw * (2 * k2 + k9 + k10) as f64
                + gp * k3 as f64;
            let rate_1 = gm * (2 * k4 + k7 + k9) as f64
                + bw * (2 * k5 + k8 + k10) as f64
                + gp * k6 as f64;
            let sign = if (k3 + k4 + k5 + k8 + k9) % 2 == 0 { 1.0 } else { -1.0 };
            let denom = gm.powi((k1 + k4) as i32)
                * bw.powi((k2 + k5) as i32)
                * (gp / 4.0).powi((k3 + k6) as i32);
            sum += sign * inv_fact * (-0.5 * tn * rate_n - 0.5 * t1 * rate_1).exp() / denom;
        }
    }
    Ok(r.xi().powi(n as i32) * prefactor * sum)
}

/// Filter response `Ξ(t) = (Γ/Γ₋) e^{-iω_a t}(e^{-γ_a t/2} − e^{-Γt/2}) θ(t)`.
pub fn filter_response(r: &RateSet, t: f64) -> Result<Complex64> {
    let bw = r.bandwidth().ok_or(Error::RequiresFilter)?;
    if t < 0.0 {
        return Ok(Complex64::zero());
    }
    let modulus = bw * amplitude(r.gamma_a(), bw, t);
    Ok(Complex64::from_polar(modulus, -r.omega_a() * t))
}

/// Normally ordered multi-time correlator of the emitted field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockCorrelator {
    pub value: Complex64,
    /// Set when more photons are annihilated than the state holds.
    pub vanishes: bool,
}

/// `⟨a†(t'₁)…a†(t'_m) a(t_m)…a(t₁)⟩` for the initial Fock state `|N⟩`.
pub fn fock_correlator(
    r: &RateSet,
    spec: BundleSpec,
    primed: &[f64],
    unprimed: &[f64],
) -> Result<FockCorrelator> {
    if primed.len() != unprimed.len() {
        return invalid("primed and unprimed time lists must have equal length");
    }
    let m = primed.len() as u32;
    let n = spec.n();
    if m > n {
        return Ok(FockCorrelator {
            value: Complex64::zero(),
            vanishes: true,
        });
    }
    let falling = bigint_f64(&factorial(n)) / bigint_f64(&factorial(n - m));
    let half = 0.5 * r.gamma_a();
    let w = r.omega_a();
    let mut value = Complex64::new(falling, 0.0);
    for &t in primed {
        value *= (Complex64::new(-half, w) * t).exp();
    }
    for &t in unprimed {
        value *= (Complex64::new(-half, -w) * t).exp();
    }
    Ok(FockCorrelator {
        value,
        vanishes: false,
    })
}
