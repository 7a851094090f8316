//! Monte Carlo oracle: sampled bundle detections, continuous-wave emission
//! streams, and mergeable estimators over them.

mod estimators;

pub use estimators::*;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::kernel::Kernel;
use crate::rates::{BundleSpec, Filter, RateSet};

/// Reproducible random stream keyed by `(seed, stream_id)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngSpec { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// One sampled bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub bundle_id: u64,
    /// Arrival times of all `N` candidate photons, sorted.
    pub emitted: Vec<f64>,
    /// Whether each entry of `emitted` was detected.
    pub detected: Vec<bool>,
    pub detection_times: Vec<f64>,
}

impl TrajectoryRecord {
    fn from_candidates(bundle_id: u64, mut photons: Vec<(f64, bool)>) -> Self {
        photons.sort_by(|a, b| a.0.total_cmp(&b.0));
        let emitted = photons.iter().map(|p| p.0).collect();
        let detected = photons.iter().map(|p| p.1).collect();
        let detection_times = photons.iter().filter(|p| p.1).map(|p| p.0).collect();
        TrajectoryRecord {
            bundle_id,
            emitted,
            detected,
            detection_times,
        }
    }

    pub fn n(&self) -> usize {
        self.emitted.len()
    }

    pub fn detected_count(&self) -> usize {
        self.detection_times.len()
    }

    pub fn is_full(&self) -> bool {
        self.detected_count() == self.n()
    }
}

/// Quantile of the normalized single-photon detection density.
pub fn inverse_cdf_single(r: &RateSet, u: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&u) {
        return invalid(format!("quantile level must lie in [0, 1), got {u}"));
    }
    Ok(quantile(&Kernel::new(r), r, u))
}

fn quantile(kernel: &Kernel, r: &RateSet, u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let gamma = r.gamma_a();
    let bw = match r.filter() {
        Filter::Unfiltered => return -(-u).ln_1p() / gamma,
        Filter::Bandwidth(g) => g,
    };
    let total = kernel.total();
    let upper = u > 0.5;
    let h = |t: f64| {
        if upper {
            (1.0 - u) - kernel.survival(t) / total
        } else {
            kernel.cumulative(t) / total - u
        }
    };
    let (mut lo, mut hi) = (0.0, 1.0 / gamma.min(bw));
    while h(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = h(t);
        if f < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let slope = kernel.density(t) / total;
        let mut next = t - f / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-13 * next || hi - lo <= 1e-13 * hi {
            return next;
        }
        t = next;
    }
    t
}

/// Bundle sampled as `N` independent photons, each kept with the
/// single-photon detection probability.
pub fn sample_bundle(r: &RateSet, spec: BundleSpec, rng: RngSpec) -> TrajectoryRecord {
    let kernel = Kernel::new(r);
    sample_with(&kernel, r, spec, rng.stream_id, &mut rng.rng())
}

fn sample_with<R: Rng>(kernel: &Kernel, r: &RateSet, spec: BundleSpec, id: u64, rng: &mut R) -> TrajectoryRecord {
    let keep = kernel.total();
    let photons = (0..spec.n())
        .map(|_| {
            let detected = rng.random::<f64>() < keep;
            (quantile(kernel, r, rng.random::<f64>()), detected)
        })
        .collect();
    TrajectoryRecord::from_candidates(id, photons)
}

/// `count` bundles with stream ids `first_id..first_id + count`, in
/// parallel; the output does not depend on the worker count.
pub fn sample_bundles(r: &RateSet, spec: BundleSpec, seed: u64, first_id: u64, count: u64) -> Vec<TrajectoryRecord> {
    let kernel = Kernel::new(r);
    (first_id..first_id + count)
        .into_par_iter()
        .map(|id| sample_with(&kernel, r, spec, id, &mut RngSpec::new(seed, id).rng()))
        .collect()
}

/// Unfiltered bundle sampled as a sequential cascade with exponential
/// waits at rates `Nγ, (N−1)γ, …, γ`, each photon kept with probability ξ.
pub fn sample_cascade(r: &RateSet, spec: BundleSpec, rng: RngSpec) -> Result<TrajectoryRecord> {
    if r.bandwidth().is_some() {
        return invalid("the cascade oracle samples unfiltered emission only");
    }
    let mut g = rng.rng();
    let mut t = 0.0;
    let photons = (0..spec.n())
        .map(|i| {
            let rate = (spec.n() - i) as f64 * r.gamma_a();
            t += -(-g.random::<f64>()).ln_1p() / rate;
            (t, g.random::<f64>() < r.xi())
        })
        .collect();
    Ok(TrajectoryRecord::from_candidates(rng.stream_id, photons))
}

/// One detection in a continuous-wave stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StreamEvent {
    pub absolute_time: f64,
    pub bundle_id: u64,
    /// 1-based position among the detected photons of its bundle.
    pub index_within_bundle: u32,
}

/// Sampled stream together with the bundles that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CwseStream {
    pub events: Vec<StreamEvent>,
    pub trigger_times: Vec<f64>,
    pub bundles: Vec<TrajectoryRecord>,
}

/// Rates with the radiative rate halved, the effective spontaneous-emission
/// rate that matches the driven bundler.
pub fn effective_bundler_rates(r: &RateSet) -> Result<RateSet> {
    RateSet::new(0.5 * r.gamma_a(), r.filter(), r.xi(), r.omega_a())
}

/// Poisson-triggered spontaneous emission of `N`-photon bundles over
/// `[0, duration]`.
pub fn sample_cwse_stream(
    r: &RateSet,
    spec: BundleSpec,
    trigger_rate: f64,
    duration: f64,
    rng: RngSpec,
) -> Result<CwseStream> {
    if !(trigger_rate > 0.0 && trigger_rate.is_finite()) {
        return invalid(format!("trigger rate must be positive, got {trigger_rate}"));
    }
    if !(duration >= 0.0 && duration.is_finite()) {
        return invalid(format!("duration must be nonnegative, got {duration}"));
    }
    let kernel = Kernel::new(r);
    let mut g = rng.rng();
    let mut trigger_times = Vec::new();
    let mut bundles = Vec::new();
    let mut events = Vec::new();
    let mut clock = 0.0;
    loop {
        clock += -(-g.random::<f64>()).ln_1p() / trigger_rate;
        if clock > duration {
            break;
        }
        let id = trigger_times.len() as u64;
        let record = sample_with(&kernel, r, spec, id, &mut g);
        for (i, &t) in record.detection_times.iter().enumerate() {
            if clock + t <= duration {
                events.push(StreamEvent {
                    absolute_time: clock + t,
                    bundle_id: id,
                    index_within_bundle: i as u32 + 1,
                });
            }
        }
        trigger_times.push(clock);
        bundles.push(record);
    }
    events.sort_by(|a, b| a.absolute_time.total_cmp(&b.absolute_time));
    Ok(CwseStream {
        events,
        trigger_times,
        bundles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn quantile_edges() {
        let r = RateSet::filtered(1.0, 2.0).unwrap();
        assert_eq!(inverse_cdf_single(&r, 0.0).unwrap(), 0.0);
        assert!(inverse_cdf_single(&r, 1.0).is_err());
        let bare = RateSet::unfiltered(2.0).unwrap();
        let q = inverse_cdf_single(&bare, 1.0 - (-1.0f64).exp()).unwrap();
        assert_relative_eq!(q, 0.5, max_relative = 1e-14);
    }

    #[test]
    fn quantile_inverts_the_cdf() {
        for bw in [0.01, 0.5, 1.0, 1.0 + 1e-9, 3.0, 1e3] {
            let r = RateSet::filtered(1.0, bw).unwrap();
            let k = Kernel::new(&r);
            for u in [1e-9, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9] {
                let t = inverse_cdf_single(&r, u).unwrap();
                let back = if u > 0.5 {
                    1.0 - k.survival(t) / k.total()
                } else {
                    k.cumulative(t) / k.total()
                };
                assert!((back - u).abs() < 1e-11 * u.max(1e-3), "Γ={bw} u={u}: {back}");
            }
        }
    }

    #[test]
    fn determinism_and_worker_independence() {
        let r = RateSet::filtered(1.0, 1.0).unwrap();
        let spec = BundleSpec::new(3).unwrap();
        let a = sample_bundle(&r, spec, RngSpec::new(7, 11));
        let b = sample_bundle(&r, spec, RngSpec::new(7, 11));
        assert_eq!(a, b);
        let batch = sample_bundles(&r, spec, 7, 0, 20);
        assert_eq!(batch[11], a);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        assert_eq!(pool.install(|| sample_bundles(&r, spec, 7, 0, 20)), batch);
    }

    #[test]
    fn record_invariants() {
        let r = RateSet::filtered(1.0, 0.7).unwrap();
        for rec in sample_bundles(&r, BundleSpec::new(5).unwrap(), 3, 0, 200) {
            assert_eq!(rec.emitted.len(), 5);
            assert!(rec.emitted.windows(2).all(|w| w[0] <= w[1]));
            assert!(rec.detection_times.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(rec.detected.iter().filter(|d| **d).count(), rec.detected_count());
            assert!(rec.emitted.iter().all(|t| *t >= 0.0));
        }
        let bare = RateSet::unfiltered(1.0).unwrap();
        assert!(sample_bundles(&bare, BundleSpec::new(4).unwrap(), 1, 0, 50).iter().all(|r| r.is_full()));
    }

    #[test]
    fn stream_is_sorted_and_empty_for_zero_duration() {
        let r = RateSet::filtered(1.0, 1.0).unwrap();
        let spec = BundleSpec::new(2).unwrap();
        let s = sample_cwse_stream(&r, spec, 0.5, 200.0, RngSpec::new(1, 0)).unwrap();
        assert!(s.events.windows(2).all(|w| w[0].absolute_time <= w[1].absolute_time));
        assert!(s.events.iter().all(|e| e.absolute_time <= 200.0));
        let empty = sample_cwse_stream(&r, spec, 0.5, 0.0, RngSpec::new(1, 0)).unwrap();
        assert!(empty.events.is_empty());
        assert!(sample_cwse_stream(&r, spec, 0.0, 1.0, RngSpec::new(1, 0)).is_err());
        let eff = effective_bundler_rates(&r).unwrap();
        assert_eq!(eff.gamma_a(), 0.5);
    }
}
