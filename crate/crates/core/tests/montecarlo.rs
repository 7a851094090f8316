use std::time::Instant;

use multiphoton::distributions::{detect_probability, detected_fraction, marginal_broken, marginal_full};
use multiphoton::exact::{ratio, to_f64};
use multiphoton::moments::{mean_time_exact, unfiltered_mean};
use multiphoton::montecarlo::*;
use multiphoton::quadrature::integrate;
use multiphoton::wtd::{mean_wtd_biphoton, wtd_biphoton};
use multiphoton::{BundleSpec, ExactRates, RateSet};
use proptest::prelude::*;
use rand::Rng;

fn cdf_of<F: Fn(f64) -> f64 + Copy>(density: F, norm: f64) -> impl Fn(f64) -> f64 {
    move |t| {
        if t <= 0.0 {
            0.0
        } else {
            integrate(density, 0.0, t, 1e-12).unwrap() / norm
        }
    }
}

#[test]
fn confluent_single_photon_mean() {
    let r = RateSet::filtered(1.0, 1.0).unwrap();
    let mut rng = RngSpec::new(5, 0).rng();
    let acc: MeanAccumulator = (0..1_000_000)
        .map(|_| inverse_cdf_single(&r, rng.random::<f64>()).unwrap())
        .collect();
    let est = acc.estimate().unwrap();
    assert!(est.z_score(3.0) < 3.0, "{est:?}");
}

#[test]
fn unfiltered_single_photon_mean() {
    let r = RateSet::unfiltered(1.0).unwrap();
    let records = sample_bundles(&r, BundleSpec::new(1).unwrap(), 9, 0, 1_000_000);
    let est = mean_time(&records, 1, true).unwrap();
    assert!(est.z_score(1.0) < 3.0, "{est:?}");
}

#[test]
fn large_sample_counts_and_marginals() {
    let r = RateSet::filtered(1.0, 1.0).unwrap();
    let spec = BundleSpec::new(5).unwrap();
    let start = Instant::now();
    let records = sample_bundles(&r, spec, 42, 0, 400_000);
    assert!(start.elapsed().as_secs_f64() < 60.0);

    let hist = CountHistogram::from_records(5, &records);
    let expected: Vec<f64> = (0..=5).map(|k| detect_probability(&r, spec, k).unwrap()).collect();
    let want = [12_500.0, 62_500.0, 125_000.0, 125_000.0, 62_500.0, 12_500.0];
    for (p, w) in expected.iter().zip(want) {
        assert!((p * 400_000.0 - w).abs() < 1e-6);
    }
    for z in hist.z_scores(&expected) {
        assert!(z < 4.0, "{hist:?}");
    }

    for k in 1..=5u32 {
        let norm = detected_fraction(&r, spec, k).unwrap();
        let cdf = cdf_of(|t| marginal_broken(&r, spec, k, t).unwrap(), norm);
        let mut h = Histogram::new(0.0, 16.0, 64).unwrap();
        h.extend(detection_times(&records, k as usize, false));
        let test = chi_square(&h, cdf).unwrap();
        assert!(test.p_value > 0.001, "broken k={k}: {test:?}");

        let full = detect_probability(&r, spec, 5).unwrap();
        let cdf = cdf_of(|t| marginal_full(&r, spec, k, t).unwrap(), full);
        let mut h = Histogram::new(0.0, 16.0, 64).unwrap();
        h.extend(detection_times(&records, k as usize, true));
        let test = chi_square(&h, cdf).unwrap();
        assert!(test.p_value > 0.001, "full k={k}: {test:?}");
    }
}

#[test]
fn counts_match_for_several_widths() {
    for (n, bw) in [(2, 0.5), (3, 2.0), (4, 0.2), (5, 5.0)] {
        let r = RateSet::filtered(1.0, bw).unwrap();
        let spec = BundleSpec::new(n).unwrap();
        let records = sample_bundles(&r, spec, 17, 0, 100_000);
        let hist = CountHistogram::from_records(n as usize, &records);
        let expected: Vec<f64> = (0..=n).map(|k| detect_probability(&r, spec, k).unwrap()).collect();
        assert!(hist.z_scores(&expected).iter().all(|z| *z < 4.0), "N={n} Γ={bw}: {hist:?}");
    }
}

#[test]
fn purity_of_two_photon_bundles() {
    for (i, bw) in [0.5f64, 1.0, 2.0].into_iter().enumerate() {
        let r = RateSet::filtered(1.0, bw).unwrap();
        let records = sample_bundles(&r, BundleSpec::new(2).unwrap(), 100 + i as u64, 0, 200_000);
        let est = purity(&records).estimate().unwrap();
        assert!(est.z_score((bw / (1.0 + bw)).powi(2)) < 3.0, "Γ={bw}: {est:?}");
    }
}

#[test]
fn pearson_at_confluence() {
    let r = RateSet::filtered(1.0, 1.0).unwrap();
    let records = sample_bundles(&r, BundleSpec::new(2).unwrap(), 2024, 0, 400_000);
    let pairs = first_last(&records).unwrap();
    assert!(pairs.count > 95_000);
    let est = pairs.pearson().unwrap();
    assert!(est.z_score(25.0 / 2929f64.sqrt()) < 3.0, "{est:?}");
}

#[test]
fn filtered_means_match_exact_pipeline() {
    let r = RateSet::filtered(1.0, 2.0).unwrap();
    let exact = ExactRates::filtered(ratio(1, 1), ratio(2, 1)).unwrap();
    let records = sample_bundles(&r, BundleSpec::new(3).unwrap(), 8, 0, 200_000);
    for k in 1..=3 {
        let want = mean_time_exact(&exact, 3, k).unwrap().to_f64();
        let est = mean_time(&records, k as usize, true).unwrap();
        assert!(est.z_score(want) < 4.0, "k={k}: {est:?} vs {want}");
    }
    let length = bundle_length(&records).unwrap().estimate().unwrap();
    let want = mean_time_exact(&exact, 3, 3).unwrap().to_f64() - mean_time_exact(&exact, 3, 1).unwrap().to_f64();
    assert!(length.z_score(want) < 4.0);
}

#[test]
fn cascade_and_independent_draws_agree() {
    let r = RateSet::unfiltered(1.0).unwrap();
    let spec = BundleSpec::new(4).unwrap();
    let iid = sample_bundles(&r, spec, 1, 0, 100_000);
    let cascade: Vec<TrajectoryRecord> = (0..100_000)
        .map(|i| sample_cascade(&r, spec, RngSpec::new(2, i)).unwrap())
        .collect();
    for k in 1..=4usize {
        let want = to_f64(&unfiltered_mean(4, k as u32).unwrap());
        let a = mean_time(&iid, k, true).unwrap();
        let b = mean_time(&cascade, k, true).unwrap();
        assert!(a.z_score(want) < 4.0 && b.z_score(want) < 4.0, "k={k}");
        let mut h = Histogram::new(0.0, 10.0, 50).unwrap();
        h.extend(detection_times(&cascade, k, true));
        let cdf = cdf_of(|t| marginal_full(&r, spec, k as u32, t).unwrap(), 1.0);
        assert!(chi_square(&h, cdf).unwrap().p_value > 0.001, "k={k}");
    }
    assert!(sample_cascade(&RateSet::filtered(1.0, 1.0).unwrap(), spec, RngSpec::new(0, 0)).is_err());
}

#[test]
fn lossy_detector_cascade() {
    let r = RateSet::unfiltered(1.0).unwrap().with_xi(0.6).unwrap();
    let spec = BundleSpec::new(3).unwrap();
    let cascade: Vec<TrajectoryRecord> = (0..100_000)
        .map(|i| sample_cascade(&r, spec, RngSpec::new(4, i)).unwrap())
        .collect();
    let iid = sample_bundles(&r, spec, 4, 0, 100_000);
    let expected: Vec<f64> = (0..=3).map(|k| detect_probability(&r, spec, k).unwrap()).collect();
    assert!(CountHistogram::from_records(3, &cascade).z_scores(&expected).iter().all(|z| *z < 4.0));
    assert!(CountHistogram::from_records(3, &iid).z_scores(&expected).iter().all(|z| *z < 4.0));
}

#[test]
fn intra_bundle_gaps_follow_biphoton_wtd() {
    for bw in [0.5, 1.0, 4.0] {
        let r = RateSet::filtered(1.0, bw).unwrap();
        let records = sample_bundles(&r, BundleSpec::new(2).unwrap(), 77, 0, 200_000);
        let mut h = Histogram::new(0.0, 12.0, 48).unwrap();
        h.extend(intra_bundle_gaps(&records));
        let cdf = cdf_of(|t| wtd_biphoton(&r, t).unwrap(), 1.0);
        let test = chi_square(&h, cdf).unwrap();
        assert!(test.p_value > 0.001, "Γ={bw}: {test:?}");
    }
}

#[test]
fn low_rate_stream_recovers_the_bundle() {
    let r = RateSet::filtered(1.0, 1.0).unwrap();
    let spec = BundleSpec::new(2).unwrap();
    let stream = sample_cwse_stream(&r, spec, 0.01, 4.0e6, RngSpec::new(3, 0)).unwrap();
    let est = purity(&stream.bundles).estimate().unwrap();
    assert!(est.z_score(0.25) < 3.0, "{est:?}");
    let within: Vec<f64> = stream
        .events
        .windows(2)
        .filter(|w| w[0].bundle_id == w[1].bundle_id)
        .map(|w| w[1].absolute_time - w[0].absolute_time)
        .collect();
    let gaps = waiting_times(&stream.events);
    assert!(within.len() as f64 > 0.98 * stream.bundles.iter().filter(|b| b.is_full()).count() as f64);
    let mean: MeanAccumulator = within.iter().copied().collect();
    assert!(mean.estimate().unwrap().z_score(mean_wtd_biphoton(&r)) < 4.0);

    let mut h = Histogram::new(0.0, 400.0, 1600).unwrap();
    h.extend(gaps);
    let peak = extract_peak(&h, (20.0, 300.0)).unwrap();
    assert!((peak.average - mean_wtd_biphoton(&r)).abs() < 0.1 * mean_wtd_biphoton(&r), "{peak:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn estimators_merge_over_partitions(split in 1usize..999, seed in 0u64..1000) {
        let r = RateSet::filtered(1.0, 0.8).unwrap();
        let records = sample_bundles(&r, BundleSpec::new(3).unwrap(), seed, 0, 1000);
        let (a, b) = records.split_at(split);
        prop_assert_eq!(purity(&records), purity(a).merge(purity(b)));
        prop_assert_eq!(
            CountHistogram::from_records(3, &records),
            CountHistogram::from_records(3, a).merge(&CountHistogram::from_records(3, b))
        );
        let mut whole = Histogram::new(0.0, 10.0, 20).unwrap();
        whole.extend(detection_times(&records, 1, false));
        let mut left = Histogram::new(0.0, 10.0, 20).unwrap();
        left.extend(detection_times(a, 1, false));
        let mut right = Histogram::new(0.0, 10.0, 20).unwrap();
        right.extend(detection_times(b, 1, false));
        prop_assert_eq!(whole, left.merge(&right).unwrap());
        let joined = first_last(a).unwrap().merge(first_last(b).unwrap());
        prop_assert_eq!(joined.count, first_last(&records).unwrap().count);
    }
}
