//! Multinomial expansions of the detection-time moments.
//!
//! A plan enumerates the index compositions once for a given `(N, k)` and
//! merges every composition sharing the same exponent signature, so sweeping
//! over rates only re-evaluates a short list of rational terms.

use std::collections::BTreeMap;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{Num, One, Zero};

use crate::exact::{factorial, to_f64, Compositions, Rational};

/// Field in which a plan can be evaluated: exact rationals or doubles.
pub trait Scalar: Clone + Num + Neg<Output = Self> {
    fn from_rational(r: &Rational) -> Self;

    fn from_u64(n: u64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn powu(&self, exp: u32) -> Self {
        num_traits::pow(self.clone(), exp as usize)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }

    fn from_u64(n: u64) -> Self {
        n as f64
    }

    fn powu(&self, exp: u32) -> Self {
        self.powi(exp as i32)
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

fn inverse_factorials(ks: &[u32]) -> Rational {
    let den: BigInt = ks.iter().map(|&k| factorial(k)).product();
    Rational::new(BigInt::one(), den)
}

fn signed(odd: bool, value: Rational) -> Rational {
    if odd {
        -value
    } else {
        value
    }
}

/// Linear combination `γ·a + Γ·b + Γ₊·c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct RateForm {
    a: u32,
    b: u32,
    c: u32,
}

impl RateForm {
    fn eval<T: Scalar>(&self, gamma: &T, bw: &T, gp: &T) -> T {
        gamma.clone() * T::from_u64(self.a as u64)
            + bw.clone() * T::from_u64(self.b as u64)
            + gp.clone() * T::from_u64(self.c as u64)
    }

    fn add(self, o: RateForm) -> RateForm {
        RateForm {
            a: self.a + o.a,
            b: self.b + o.b,
            c: self.c + o.c,
        }
    }

    fn scale(self, s: u32) -> RateForm {
        RateForm {
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
        }
    }
}

/// Powers of `γ`, `Γ` and `Γ₊/4` in a term denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Powers {
    gamma: u32,
    bw: u32,
    quarter_plus: u32,
}

impl Powers {
    fn eval<T: Scalar>(&self, gamma: &T, bw: &T, gp: &T) -> T {
        let quarter = gp.clone() / T::from_u64(4);
        gamma.powu(self.gamma) * bw.powu(self.bw) * quarter.powu(self.quarter_plus)
    }
}

fn reduced_prefactor<T: Scalar>(gamma: &T, bw: &T, n: u32) -> T {
    let gp = gamma.clone() + bw.clone();
    let gm = bw.clone() - gamma.clone();
    (gamma.clone() * bw.clone() * gp / (gm.clone() * gm)).powu(n)
}

/// Expansion of `⟨(t_k^{(N)})^j⟩` over the eleven composition indices.
#[derive(Debug, Clone)]
pub struct MomentSumPlan {
    n: u32,
    k: u32,
    terms: Vec<(Powers, RateForm, Rational)>,
}

impl MomentSumPlan {
    pub fn new(n: u32, k: u32) -> Self {
        assert!(k >= 1 && k <= n, "photon index out of range");
        let mut merged: BTreeMap<(Powers, RateForm), Rational> = BTreeMap::new();
        for outer in Compositions::new(n - k, 3) {
            let [k1, k2, k3] = [outer[0], outer[1], outer[2]];
            for middle in Compositions::new(k - 1, 6) {
                let [k4, k5, k6, k7, k8, k9] =
                    [middle[0], middle[1], middle[2], middle[3], middle[4], middle[5]];
                for inner in Compositions::new(2, 2) {
                    let [k10, k11] = [inner[0], inner[1]];
                    let ks = [k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11];
                    let powers = Powers {
                        gamma: k1 + k4 + k7,
                        bw: k2 + k5 + k8,
                        quarter_plus: k3 + k6 + k9,
                    };
                    // twice the decay rate, so every coefficient stays integral
                    let rate = RateForm {
                        a: 2 * (k1 + k7) + k11,
                        b: 2 * (k2 + k8) + k10,
                        c: k3 + k9,
                    };
                    let odd = (k3 + k6 + k7 + k8 + k11) % 2 == 1;
                    *merged.entry((powers, rate)).or_insert_with(Rational::zero) +=
                        signed(odd, inverse_factorials(&ks));
                }
            }
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((p, r), c)| (p, r, c))
            .collect();
        MomentSumPlan { n, k, terms }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of distinct terms after merging.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `j`-th moment at rates `(γ, Γ)`, which must differ.
    pub fn evaluate<T: Scalar>(&self, gamma: &T, bw: &T, order: u32) -> T {
        let gp = gamma.clone() + bw.clone();
        let two = T::from_u64(2);
        let mut sum = T::zero();
        for (powers, rate, coeff) in &self.terms {
            let r = rate.eval(gamma, bw, &gp) / two.clone();
            let den = powers.eval(gamma, bw, &gp) * r.powu(order + 1);
            sum = sum + T::from_rational(coeff) / den;
        }
        let front = T::from_rational(&Rational::from_integer(
            factorial(order) * factorial(self.n) * 2u32,
        ));
        front * reduced_prefactor(gamma, bw, self.n) * sum
    }
}

/// Expansion of `⟨t₁^{(N)} t_N^{(N)}⟩` over the ten composition indices.
#[derive(Debug, Clone)]
pub struct CrossSumPlan {
    n: u32,
    terms: Vec<(Powers, RateForm, RateForm, Rational)>,
}

impl CrossSumPlan {
    pub fn new(n: u32) -> Self {
        assert!(n >= 2, "cross moment needs two photons");
        let mut merged: BTreeMap<(Powers, RateForm, RateForm), Rational> = BTreeMap::new();
        for outer in Compositions::new(n - 2, 6) {
            let [k1, k2, k3, k4, k5, k6] =
                [outer[0], outer[1], outer[2], outer[3], outer[4], outer[5]];
            for inner in Compositions::new(2, 4) {
                let [k7, k8, k9, k10] = [inner[0], inner[1], inner[2], inner[3]];
                let ks = [k1, k2, k3, k4, k5, k6, k7, k8, k9, k10];
                let powers = Powers {
                    gamma: k1 + k4,
                    bw: k2 + k5,
                    quarter_plus: k3 + k6,
                };
                let last = RateForm {
                    a: 2 * k1 + k7 + k8,
                    b: 2 * k2 + k9 + k10,
                    c: k3,
                };
                let first = RateForm {
                    a: 2 * k4 + k7 + k9,
                    b: 2 * k5 + k8 + k10,
                    c: k6,
                };
                let odd = (k3 + k4 + k5 + k8 + k9) % 2 == 1;
                *merged.entry((powers, last, first)).or_insert_with(Rational::zero) +=
                    signed(odd, inverse_factorials(&ks));
            }
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((p, a, b), c)| (p, a, b, c))
            .collect();
        CrossSumPlan { n, terms }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn evaluate<T: Scalar>(&self, gamma: &T, bw: &T) -> T {
        let gp = gamma.clone() + bw.clone();
        let mut sum = T::zero();
        for (powers, last, first, coeff) in &self.terms {
            let a = last.eval(gamma, bw, &gp);
            let ab = last.add(*first).eval(gamma, bw, &gp);
            let num = last.scale(3).add(*first).eval(gamma, bw, &gp);
            let den = powers.eval(gamma, bw, &gp) * a.powu(2) * ab.powu(3);
            sum = sum + T::from_rational(coeff) * num / den;
        }
        let sign = if self.n % 2 == 1 { -T::one() } else { T::one() };
        let front = T::from_rational(&Rational::from_integer(factorial(self.n) * 32u32));
        sign * front * reduced_prefactor(gamma, bw, self.n) * sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn single_photon_mean_and_second_moment() {
        let plan = MomentSumPlan::new(1, 1);
        for (g, bw) in [(1, 2), (3, 1), (2, 7)] {
            let (g, bw) = (ratio(g, 1), ratio(bw, 1));
            let gp = &g + &bw;
            let mean = (&g * &g + ratio(4, 1) * &g * &bw + &bw * &bw) / (&bw * &g * &gp);
            assert_eq!(plan.evaluate(&g, &bw, 1), mean);
            let second = ratio(2, 1)
                * (rpow4(&g) + ratio(5, 1) * &g * &bw * &bw * &bw
                    + ratio(12, 1) * &g * &g * &bw * &bw
                    + ratio(5, 1) * &g * &g * &g * &bw
                    + rpow4(&bw))
                / (&g * &g * &bw * &bw * &gp * &gp);
            assert_eq!(plan.evaluate(&g, &bw, 2), second);
        }
    }

    fn rpow4(x: &Rational) -> Rational {
        x * x * x * x
    }

    #[test]
    fn float_and_exact_evaluations_agree() {
        let plan = MomentSumPlan::new(4, 2);
        let exact = plan.evaluate(&ratio(1, 1), &ratio(5, 2), 1);
        let float = plan.evaluate(&1.0, &2.5, 1);
        assert!((to_f64(&exact) - float).abs() < 1e-10);
    }

    #[test]
    fn two_photon_cross_moment_closed_form() {
        let plan = CrossSumPlan::new(2);
        for (g, bw) in [(1, 2), (2, 5)] {
            let (g, bw) = (ratio(g, 1), ratio(bw, 1));
            let gp = &g + &bw;
            let top = &bw * &bw + ratio(4, 1) * &bw * &g + &g * &g;
            let expected = &top * &top / (&bw * &bw * &gp * &gp * &g * &g);
            assert_eq!(plan.evaluate(&g, &bw), expected);
        }
    }

    #[test]
    fn merging_shrinks_the_plan() {
        let plan = MomentSumPlan::new(6, 3);
        let raw = 10 * 21 * 3;
        assert!(plan.len() < raw);
        assert!(!plan.is_empty());
    }
}
