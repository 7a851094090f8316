//! Adaptive Gauss–Kronrod (7/15) quadrature, the independent numeric oracle
//! for every closed form in the crate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_SEGMENTS: usize = 4000;

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_value = fc.abs() * WGK[7];
    for (j, &x) in XGK.iter().take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs_value += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        abs_value: abs_value * half.abs(),
    }
}

/// `∫_a^b f` to relative tolerance `tol` (measured against `∫|f|`).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut heap = BinaryHeap::new();
    // Start from a few panels so that narrow features are not missed.
    let panels = 8;
    let width = (b - a) / panels as f64;
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == panels { b } else { lo + width };
        heap.push(kronrod(&f, lo, hi));
    }
    loop {
        let (value, error, abs_value) = heap.iter().fold((0.0, 0.0, 0.0), |acc, s| {
            (acc.0 + s.value, acc.1 + s.error, acc.2 + s.abs_value)
        });
        if !value.is_finite() {
            return Err(Error::Quadrature("non-finite integrand".into()));
        }
        if error <= tol * abs_value || error <= f64::MIN_POSITIVE {
            return Ok(value);
        }
        if heap.len() >= MAX_SEGMENTS {
            if error <= 1e3 * tol * abs_value {
                return Ok(value);
            }
            return Err(Error::Quadrature(format!(
                "error estimate {error:e} above target after {MAX_SEGMENTS} segments"
            )));
        }
        let worst = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval below machine resolution; accept what we have.
            heap.push(worst);
            let value: f64 = heap.iter().map(|s| s.value).sum();
            return Ok(value);
        }
        heap.push(kronrod(&f, worst.a, mid));
        heap.push(kronrod(&f, mid, worst.b));
    }
}

/// `∫_0^∞ f` through the map `t = x/(1-x)`.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<f64> {
    integrate_tail(f, 0.0, 1.0, tol)
}

/// `∫_a^∞ f` through `t = a + scale·x/(1-x)`; `scale` should be of the
/// order of the slowest decay time of `f`.
pub fn integrate_tail<F: Fn(f64) -> f64>(f: F, a: f64, scale: f64, tol: f64) -> Result<f64> {
    integrate(
        |x: f64| {
            if x >= 1.0 {
                return 0.0;
            }
            let one_minus = 1.0 - x;
            let t = a + scale * x / one_minus;
            let v = f(t);
            if v == 0.0 {
                0.0
            } else {
                v * scale / (one_minus * one_minus)
            }
        },
        0.0,
        1.0,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_exponential() {
        let v = integrate(|x| x * x, 0.0, 3.0, 1e-12).unwrap();
        assert!((v - 9.0).abs() < 1e-12);
        let v = integrate_to_inf(|t| (-t).exp(), 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let v = integrate_to_inf(|t| t * t * (-2.0 * t).exp(), 1e-12).unwrap();
        assert!((v - 0.25).abs() < 1e-12);
    }

    #[test]
    fn widely_separated_scales() {
        let v = integrate_tail(|t| 1e4 * (-1e4 * t).exp() + 1e-3 * (-1e-3 * t).exp(), 0.0, 1.0, 1e-12)
            .unwrap();
        assert!((v - 2.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn lorentzian_on_the_real_line() {
        let v = integrate_tail(|w| 1.0 / (1.0 + w * w), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }
}
