//! Moments of the detection times: the multinomial sums, the exact
//! exponential-polynomial pipeline, quadrature, correlations between the
//! first and last photons, and bundle-length statistics.
//!
//! All moments are normalized to fully detected bundles, i.e. divided by
//! `P(N,N)`, and are independent of the detector efficiency.

mod coefficients;
mod sums;
mod unfiltered;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use coefficients::{std_dev_coefficients, StdDevCoefficients};
pub use sums::{CrossSumPlan, MomentSumPlan, Scalar};
pub use unfiltered::{
    length_asymptotes, unfiltered_cross, unfiltered_length, unfiltered_mean,
    unfiltered_moment_alternating, unfiltered_second, unfiltered_std, unfiltered_variance,
};

use crate::distributions::{detect_probability_exact, marginal_full, marginal_full_exact};
use crate::error::{invalid, Error, Result};
use crate::exact::{binomial, rpow, to_f64, ExpPolynomial, Rational};
use crate::kernel::ExactKernel;
use crate::quadrature::integrate_to_inf;
use crate::rates::{BundleSpec, ExactRates, RateSet};

/// Which independent route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Pipeline {
    CombinatorialSum,
    ExppolyExact,
    Quadrature,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MomentValue {
    Exact(Rational),
    Float(f64),
}

impl MomentValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            MomentValue::Exact(r) => to_f64(r),
            MomentValue::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            MomentValue::Exact(r) => Some(r),
            MomentValue::Float(_) => None,
        }
    }
}

/// Photon (or photon pair) a moment refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentIndex {
    Photon(u32),
    FirstLast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentResult {
    pub value: MomentValue,
    pub pipeline: Pipeline,
    pub n: u32,
    pub index: MomentIndex,
    pub order: u32,
    pub rates: RateSet,
}

impl MomentResult {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn exact(&self) -> Option<&Rational> {
        self.value.exact()
    }

    fn exact_value(&self) -> Result<Rational> {
        self.exact()
            .cloned()
            .ok_or_else(|| Error::Inconsistent("expected an exact moment".into()))
    }
}

fn check_index(n: u32, k: u32) -> Result<()> {
    BundleSpec::new(n)?;
    if k == 0 || k > n {
        return invalid(format!("photon index must lie in 1..={n}, got {k}"));
    }
    Ok(())
}

fn full_detection(kernel: &ExactKernel, n: u32) -> Result<Rational> {
    if kernel.total.is_zero() {
        return invalid("detector efficiency is zero: no bundle is ever detected");
    }
    Ok(rpow(&kernel.total, n))
}

fn exact_result(r: &ExactRates, value: Rational, pipeline: Pipeline, n: u32, index: MomentIndex, order: u32) -> MomentResult {
    MomentResult {
        value: MomentValue::Exact(value),
        pipeline,
        n,
        index,
        order,
        rates: r.to_rate_set(),
    }
}

/// `⟨(t_k^{(N)})^j⟩` by exact integration of the marginal.
pub fn moment(r: &ExactRates, n: u32, k: u32, order: u32) -> Result<MomentResult> {
    check_index(n, k)?;
    let kernel = ExactKernel::new(r);
    let norm = full_detection(&kernel, n)?;
    let value = marginal_full_exact(&kernel, n, k).moment(order)? / norm;
    Ok(exact_result(r, value, Pipeline::ExppolyExact, n, MomentIndex::Photon(k), order))
}

/// `⟨(t_k^{(N)})^j⟩` from the multinomial sum; `Γ = γ_a` and the unfiltered
/// case, where the sum is singular or undefined, go through [`moment`].
pub fn moment_sum(r: &ExactRates, n: u32, k: u32, order: u32) -> Result<MomentResult> {
    check_index(n, k)?;
    match r.bandwidth() {
        Some(bw) if !r.is_confluent() => {
            let value = MomentSumPlan::new(n, k).evaluate(r.gamma_a(), bw, order);
            Ok(exact_result(r, value, Pipeline::CombinatorialSum, n, MomentIndex::Photon(k), order))
        }
        _ => moment(r, n, k, order),
    }
}

pub fn mean_time_exact(r: &ExactRates, n: u32, k: u32) -> Result<MomentResult> {
    moment(r, n, k, 1)
}

pub fn mean_time_sum(r: &ExactRates, n: u32, k: u32) -> Result<MomentResult> {
    moment_sum(r, n, k, 1)
}

pub fn second_moment(r: &ExactRates, n: u32, k: u32) -> Result<MomentResult> {
    moment(r, n, k, 2)
}

pub fn second_moment_sum(r: &ExactRates, n: u32, k: u32) -> Result<MomentResult> {
    moment_sum(r, n, k, 2)
}

/// `∫ t^j φ_k / P(N,N)` by adaptive quadrature.
pub fn moment_quadrature(r: &RateSet, n: u32, k: u32, order: u32) -> Result<MomentResult> {
    check_index(n, k)?;
    let spec = BundleSpec::new(n)?;
    let norm = r.single_detection().powi(n as i32);
    if norm == 0.0 {
        return invalid("detector efficiency is zero: no bundle is ever detected");
    }
    let integral = integrate_to_inf(
        |t| t.powi(order as i32) * marginal_full(r, spec, k, t).unwrap_or(0.0),
        1e-13,
    )?;
    Ok(MomentResult {
        value: MomentValue::Float(integral / norm),
        pipeline: Pipeline::Quadrature,
        n,
        index: MomentIndex::Photon(k),
        order,
        rates: *r,
    })
}

/// Exact variance of `t_k^{(N)}`.
pub fn variance(r: &ExactRates, n: u32, k: u32) -> Result<Rational> {
    let mean = mean_time_exact(r, n, k)?.exact_value()?;
    let second = second_moment(r, n, k)?.exact_value()?;
    let var = second - &mean * &mean;
    if var.is_negative() {
        return Err(Error::Inconsistent(format!("negative variance {var}")));
    }
    Ok(var)
}

/// Standard deviation of `t_k^{(N)}`.
pub fn std_dev(r: &ExactRates, n: u32, k: u32) -> Result<f64> {
    Ok(to_f64(&variance(r, n, k)?).sqrt())
}

fn check_pair(n: u32) -> Result<()> {
    BundleSpec::new(n)?;
    if n < 2 {
        return invalid("first-last statistics need at least two photons");
    }
    Ok(())
}

/// `⟨t₁^{(N)} t_N^{(N)}⟩` by exact nested integration of the first-last
/// density `N(N−1)ρ(t₁)ρ(t_N)(S(t₁) − S(t_N))^{N−2}`.
pub fn cross_moment_first_last(r: &ExactRates, n: u32) -> Result<MomentResult> {
    check_pair(n)?;
    let kernel = ExactKernel::new(r);
    let norm = full_detection(&kernel, n)?;
    let t = ExpPolynomial::term(Rational::one(), 1, Rational::zero());
    let weighted = &t * &kernel.density;
    let mut total = Rational::zero();
    for j in 0..=n - 2 {
        let inner = (&weighted * &kernel.survival.pow(j)).tail_integral()?;
        let outer = &(&weighted * &kernel.survival.pow(n - 2 - j)) * &inner;
        let term = Rational::from_integer(binomial(n - 2, j)) * outer.integral_to_inf()?;
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    let value = total * Rational::from_integer((n * (n - 1)).into()) / norm;
    Ok(exact_result(r, value, Pipeline::ExppolyExact, n, MomentIndex::FirstLast, 2))
}

/// `⟨t₁^{(N)} t_N^{(N)}⟩` from the ten-index multinomial sum, routed to
/// [`cross_moment_first_last`] where the sum is singular.
pub fn cross_moment_first_last_sum(r: &ExactRates, n: u32) -> Result<MomentResult> {
    check_pair(n)?;
    match r.bandwidth() {
        Some(bw) if !r.is_confluent() => {
            let value = CrossSumPlan::new(n).evaluate(r.gamma_a(), bw);
            Ok(exact_result(r, value, Pipeline::CombinatorialSum, n, MomentIndex::FirstLast, 2))
        }
        _ => cross_moment_first_last(r, n),
    }
}

/// `⟨t₁ t_N⟩` by two-dimensional quadrature of the first-last density.
pub fn cross_moment_quadrature(r: &RateSet, n: u32) -> Result<MomentResult> {
    check_pair(n)?;
    let spec = BundleSpec::new(n)?;
    let norm = r.single_detection().powi(n as i32);
    let tol = 1e-12;
    let failure = std::cell::RefCell::new(None);
    let integral = integrate_to_inf(
        |t1| {
            let inner = crate::quadrature::integrate_tail(
                |tn| tn * crate::distributions::joint_first_last(r, spec, t1, tn).unwrap_or(0.0),
                t1,
                1.0 / r.gamma_a(),
                tol,
            );
            match inner {
                Ok(v) => t1 * v,
                Err(e) => {
                    *failure.borrow_mut() = Some(e);
                    0.0
                }
            }
        },
        tol,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(MomentResult {
        value: MomentValue::Float(integral / norm),
        pipeline: Pipeline::Quadrature,
        n,
        index: MomentIndex::FirstLast,
        order: 2,
        rates: *r,
    })
}

/// Exact first and second moments of `t₁`, `t_N` and their cross moment.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstLastMoments {
    pub mean_first: Rational,
    pub mean_last: Rational,
    pub second_first: Rational,
    pub second_last: Rational,
    pub cross: Rational,
}

impl FirstLastMoments {
    pub fn new(r: &ExactRates, n: u32) -> Result<Self> {
        check_pair(n)?;
        Ok(FirstLastMoments {
            mean_first: mean_time_exact(r, n, 1)?.exact_value()?,
            mean_last: mean_time_exact(r, n, n)?.exact_value()?,
            second_first: second_moment(r, n, 1)?.exact_value()?,
            second_last: second_moment(r, n, n)?.exact_value()?,
            cross: cross_moment_first_last(r, n)?.exact_value()?,
        })
    }

    pub fn covariance(&self) -> Rational {
        &self.cross - &self.mean_first * &self.mean_last
    }

    pub fn variance_first(&self) -> Rational {
        &self.second_first - &self.mean_first * &self.mean_first
    }

    pub fn variance_last(&self) -> Rational {
        &self.second_last - &self.mean_last * &self.mean_last
    }

    /// Squared Pearson coefficient, exact.
    pub fn pearson_squared(&self) -> Rational {
        let cov = self.covariance();
        &cov * &cov / (self.variance_first() * self.variance_last())
    }

    /// Squared reflective coefficient, exact.
    pub fn reflective_squared(&self) -> Rational {
        &self.cross * &self.cross / (&self.second_first * &self.second_last)
    }

    pub fn pearson(&self) -> f64 {
        let sign = if self.covariance().is_negative() { -1.0 } else { 1.0 };
        sign * to_f64(&self.pearson_squared()).sqrt()
    }

    pub fn reflective(&self) -> f64 {
        to_f64(&self.reflective_squared()).sqrt()
    }

    /// `(⟨τ_N⟩, σ²_{τ_N})` for `τ_N = t_N − t₁`.
    pub fn bundle_length(&self) -> Result<BundleLength> {
        let mean = &self.mean_last - &self.mean_first;
        let variance = self.variance_first() + self.variance_last()
            - Rational::from_integer(2.into()) * self.covariance();
        if variance.is_negative() {
            return Err(Error::Inconsistent(format!("negative length variance {variance}")));
        }
        Ok(BundleLength { mean, variance })
    }
}

/// Pearson correlation coefficient of `t₁` and `t_N`.
pub fn pearson(r: &ExactRates, n: u32) -> Result<f64> {
    Ok(FirstLastMoments::new(r, n)?.pearson())
}

/// Reflective correlation coefficient `⟨t₁t_N⟩/√(⟨t₁²⟩⟨t_N²⟩)`.
pub fn reflective(r: &ExactRates, n: u32) -> Result<f64> {
    Ok(FirstLastMoments::new(r, n)?.reflective())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BundleLength {
    pub mean: Rational,
    pub variance: Rational,
}

impl BundleLength {
    pub fn std(&self) -> f64 {
        to_f64(&self.variance).sqrt()
    }
}

pub fn bundle_length_stats(r: &ExactRates, n: u32) -> Result<BundleLength> {
    FirstLastMoments::new(r, n)?.bundle_length()
}

/// Multiphoton-peak average `Σ_k (⟨t_k⟩ − ⟨t_1⟩)/(k−1) P(k,N) / Σ_k P(k,N)`
/// over sub-bundles of `k ≥ 2` detected photons, each mean taken over the
/// fully detected `k`-photon bundle.
pub fn peak_average_weighted(r: &ExactRates, n: u32) -> Result<Rational> {
    peak_average_with(r, n, |k| {
        Ok(mean_time_exact(r, k, k)?.exact_value()? - mean_time_exact(r, k, 1)?.exact_value()?)
    })
}

/// Variant in which every spacing is taken inside the emitted N-photon
/// bundle, `⟨t_k^{(N)}⟩ − ⟨t_1^{(N)}⟩`.
pub fn peak_average_weighted_literal(r: &ExactRates, n: u32) -> Result<Rational> {
    let first = mean_time_exact(r, n, 1)?.exact_value()?;
    peak_average_with(r, n, |k| Ok(mean_time_exact(r, n, k)?.exact_value()? - &first))
}

fn peak_average_with(
    r: &ExactRates,
    n: u32,
    spread: impl Fn(u32) -> Result<Rational>,
) -> Result<Rational> {
    check_pair(n)?;
    if r.bandwidth().is_none() {
        return Err(Error::RequiresFilter);
    }
    let spec = BundleSpec::new(n)?;
    let mut num = Rational::zero();
    let mut den = Rational::zero();
    for k in 2..=n {
        let weight = detect_probability_exact(r, spec, k)?;
        num += spread(k)? / Rational::from_integer((k - 1).into()) * &weight;
        den += weight;
    }
    if den.is_zero() {
        return invalid("no multiphoton sub-bundle is ever detected");
    }
    Ok(num / den)
}
