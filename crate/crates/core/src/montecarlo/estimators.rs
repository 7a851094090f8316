use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{StreamEvent, TrajectoryRecord};
use crate::error::{invalid, Error, Result};

/// Point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    /// `|value − target|` in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.value - target).abs() / self.std_error
    }
}

fn insufficient<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InsufficientData(msg.into()))
}

/// Success fraction of Bernoulli trials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proportion {
    pub successes: u64,
    pub trials: u64,
}

impl Proportion {
    pub fn merge(self, other: Self) -> Self {
        Proportion {
            successes: self.successes + other.successes,
            trials: self.trials + other.trials,
        }
    }

    pub fn estimate(&self) -> Result<Estimate> {
        if self.trials == 0 {
            return insufficient("no trials");
        }
        let n = self.trials as f64;
        let p = self.successes as f64 / n;
        Ok(Estimate {
            value: p,
            std_error: (p * (1.0 - p) / n).sqrt(),
        })
    }
}

/// Running sums for a sample mean.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanAccumulator {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl MeanAccumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(self, other: Self) -> Self {
        MeanAccumulator {
            count: self.count + other.count,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }

    pub fn variance(&self) -> Result<f64> {
        if self.count < 2 {
            return insufficient("variance needs at least two samples");
        }
        let n = self.count as f64;
        let mean = self.sum / n;
        Ok(((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0))
    }

    pub fn estimate(&self) -> Result<Estimate> {
        let var = self.variance()?;
        Ok(Estimate {
            value: self.sum / self.count as f64,
            std_error: (var / self.count as f64).sqrt(),
        })
    }
}

impl FromIterator<f64> for MeanAccumulator {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = MeanAccumulator::default();
        for x in iter {
            acc.push(x);
        }
        acc
    }
}

/// Running sums for the correlation of paired samples.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PairAccumulator {
    pub count: u64,
    pub sx: f64,
    pub sy: f64,
    pub sxx: f64,
    pub syy: f64,
    pub sxy: f64,
}

impl PairAccumulator {
    pub fn push(&mut self, x: f64, y: f64) {
        self.count += 1;
        self.sx += x;
        self.sy += y;
        self.sxx += x * x;
        self.syy += y * y;
        self.sxy += x * y;
    }

    pub fn merge(self, o: Self) -> Self {
        PairAccumulator {
            count: self.count + o.count,
            sx: self.sx + o.sx,
            sy: self.sy + o.sy,
            sxx: self.sxx + o.sxx,
            syy: self.syy + o.syy,
            sxy: self.sxy + o.sxy,
        }
    }

    /// Pearson coefficient; the error is the large-sample `(1 − r²)/√n`.
    pub fn pearson(&self) -> Result<Estimate> {
        if self.count < 3 {
            return insufficient("pearson needs at least three pairs");
        }
        let n = self.count as f64;
        let cov = self.sxy / n - self.sx * self.sy / (n * n);
        let vx = self.sxx / n - (self.sx / n).powi(2);
        let vy = self.syy / n - (self.sy / n).powi(2);
        let r = cov / (vx * vy).sqrt();
        Ok(Estimate {
            value: r,
            std_error: (1.0 - r * r) / n.sqrt(),
        })
    }

    /// `⟨xy⟩/√(⟨x²⟩⟨y²⟩)`.
    pub fn reflective(&self) -> Result<f64> {
        if self.count == 0 {
            return insufficient("reflective correlator needs data");
        }
        Ok(self.sxy / (self.sxx * self.syy).sqrt())
    }
}

/// Histogram of detected photon counts per bundle, `0..=N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountHistogram {
    pub counts: Vec<u64>,
}

impl CountHistogram {
    pub fn new(n: usize) -> Self {
        CountHistogram {
            counts: vec![0; n + 1],
        }
    }

    pub fn from_records(n: usize, records: &[TrajectoryRecord]) -> Self {
        let mut h = Self::new(n);
        for r in records {
            h.counts[r.detected_count()] += 1;
        }
        h
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn merge(mut self, other: &Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self
    }

    /// Deviation of each bin from `total·p_k` in binomial standard errors.
    pub fn z_scores(&self, expected: &[f64]) -> Vec<f64> {
        let total = self.total() as f64;
        self.counts
            .iter()
            .zip(expected)
            .map(|(&c, &p)| {
                let sd = (total * p * (1.0 - p)).sqrt();
                if sd == 0.0 {
                    if c as f64 == total * p { 0.0 } else { f64::INFINITY }
                } else {
                    (c as f64 - total * p).abs() / sd
                }
            })
            .collect()
    }
}

/// Fraction of bundles detected in full.
pub fn purity(records: &[TrajectoryRecord]) -> Proportion {
    Proportion {
        successes: records.iter().filter(|r| r.is_full()).count() as u64,
        trials: records.len() as u64,
    }
}

/// Sample of the `k`-th detection time, over fully detected bundles when
/// `full_only`, otherwise over every bundle with at least `k` detections.
pub fn detection_times(records: &[TrajectoryRecord], k: usize, full_only: bool) -> Vec<f64> {
    records
        .iter()
        .filter(|r| if full_only { r.is_full() } else { r.detected_count() >= k })
        .map(|r| r.detection_times[k - 1])
        .collect()
}

pub fn mean_time(records: &[TrajectoryRecord], k: usize, full_only: bool) -> Result<Estimate> {
    if k == 0 {
        return invalid("photon index starts at 1");
    }
    detection_times(records, k, full_only)
        .into_iter()
        .collect::<MeanAccumulator>()
        .estimate()
}

/// First and last detection times of the fully detected bundles.
pub fn first_last(records: &[TrajectoryRecord]) -> Result<PairAccumulator> {
    let mut acc = PairAccumulator::default();
    for r in records.iter().filter(|r| r.is_full()) {
        if r.n() < 2 {
            return insufficient("first/last pairs need at least two photons");
        }
        acc.push(r.detection_times[0], r.detection_times[r.n() - 1]);
    }
    Ok(acc)
}

/// `t_N − t₁` over the fully detected bundles.
pub fn bundle_length(records: &[TrajectoryRecord]) -> Result<MeanAccumulator> {
    Ok(records
        .iter()
        .filter(|r| r.is_full() && r.n() >= 2)
        .map(|r| r.detection_times[r.n() - 1] - r.detection_times[0])
        .collect())
}

/// Fixed-bin histogram on `[lo, hi)` with an overflow count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if !(lo < hi) || bins == 0 {
            return invalid("histogram needs lo < hi and at least one bin");
        }
        Ok(Histogram {
            lo,
            hi,
            counts: vec![0; bins],
            underflow: 0,
            overflow: 0,
        })
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn edge(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.width()
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.width()
    }

    pub fn push(&mut self, x: f64) {
        if x < self.lo {
            self.underflow += 1;
        } else if x >= self.hi {
            self.overflow += 1;
        } else {
            let last = self.counts.len() - 1;
            let i = ((x - self.lo) / self.width()) as usize;
            self.counts[i.min(last)] += 1;
        }
    }

    pub fn extend(&mut self, xs: impl IntoIterator<Item = f64>) {
        for x in xs {
            self.push(x);
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.underflow + self.overflow
    }

    pub fn merge(mut self, other: &Self) -> Result<Self> {
        if self.lo != other.lo || self.hi != other.hi || self.counts.len() != other.counts.len() {
            return invalid("histograms with different binning cannot be merged");
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.underflow += other.underflow;
        self.overflow += other.overflow;
        Ok(self)
    }

    /// Probability density estimate per bin.
    pub fn density(&self) -> Vec<f64> {
        let norm = self.total() as f64 * self.width();
        self.counts.iter().map(|&c| c as f64 / norm).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson χ² of a histogram against bin probabilities from `cdf`; the
/// under- and overflow act as extra bins and neighbours are pooled until
/// each expects at least five counts.
pub fn chi_square<F: Fn(f64) -> f64>(h: &Histogram, cdf: F) -> Result<ChiSquareTest> {
    let total = h.total() as f64;
    if total == 0.0 {
        return insufficient("empty histogram");
    }
    let bins = h.counts.len();
    let mut cells: Vec<(f64, f64)> = Vec::with_capacity(bins + 2);
    cells.push((h.underflow as f64, cdf(h.lo)));
    let mut prev = cdf(h.lo);
    for i in 0..bins {
        let next = cdf(h.edge(i + 1));
        cells.push((h.counts[i] as f64, next - prev));
        prev = next;
    }
    cells.push((h.overflow as f64, 1.0 - prev));
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (obs, p) in cells {
        acc.0 += obs;
        acc.1 += p;
        if acc.1 * total >= 5.0 {
            pooled.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 > 0.0 || acc.1 > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => pooled.push(acc),
        }
    }
    if pooled.len() < 2 {
        return insufficient("too few populated cells for a χ² test");
    }
    let statistic = pooled
        .iter()
        .map(|&(obs, p)| {
            let e = p * total;
            (obs - e).powi(2) / e
        })
        .sum();
    let dof = pooled.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Inconsistent(e.to_string()))?;
    Ok(ChiSquareTest {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    })
}

/// Gaps between successive detections of a sorted stream.
pub fn waiting_times(events: &[StreamEvent]) -> Vec<f64> {
    events
        .windows(2)
        .map(|w| w[1].absolute_time - w[0].absolute_time)
        .collect()
}

/// Gaps between successive detections inside each fully detected bundle.
pub fn intra_bundle_gaps(records: &[TrajectoryRecord]) -> Vec<f64> {
    records
        .iter()
        .filter(|r| r.is_full())
        .flat_map(|r| r.detection_times.windows(2).map(|w| w[1] - w[0]).collect::<Vec<_>>())
        .collect()
}

/// Multiphoton peak left after removing the uncorrelated background.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakExtraction {
    /// Mean delay of the excess over the background.
    pub average: f64,
    /// Fraction of all waiting times in the excess.
    pub weight: f64,
    pub background_amplitude: f64,
    pub background_rate: f64,
}

/// Fit `A e^{−λτ}` to the histogram density on `fit_range` by weighted
/// log-linear least squares, subtract it below the fit range, and average
/// `τ` over the nonnegative residual.
pub fn extract_peak(h: &Histogram, fit_range: (f64, f64)) -> Result<PeakExtraction> {
    let density = h.density();
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, (&c, &d)) in h.counts.iter().zip(&density).enumerate() {
        let x = h.center(i);
        if x < fit_range.0 || x > fit_range.1 || c == 0 {
            continue;
        }
        let w = c as f64;
        let y = d.ln();
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    let det = sw * sxx - sx * sx;
    if sw < 10.0 || det <= 0.0 {
        return insufficient("too few waiting times in the background fit range");
    }
    let slope = (sw * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / sw;
    let (amp, rate) = (intercept.exp(), -slope);
    let mut mass = 0.0;
    let mut first = 0.0;
    for (i, &d) in density.iter().enumerate() {
        let x = h.center(i);
        if x >= fit_range.0 {
            break;
        }
        let excess = (d - amp * (-rate * x).exp()).max(0.0) * h.width();
        mass += excess;
        first += excess * x;
    }
    if mass <= 0.0 {
        return insufficient("no excess over the background");
    }
    Ok(PeakExtraction {
        average: first / mass,
        weight: mass,
        background_amplitude: amp,
        background_rate: rate,
    })
}
