use dpsublinear::avg_degree::{bucketize, estimate_average_degree, noisy_degree_sample, AvgDegreeParams, Branch};
use dpsublinear::graph::Family;
use dpsublinear::{NoiseSource, Oracle};
use proptest::prelude::*;

proptest! {
    #[test]
    fn schedule_is_consistent(n in 2usize..10_000_000, rho in 0.01f64..=0.25, bfrac in 0.05f64..=1.0, eps in 0.05f64..20.0) {
        let beta = rho / 8.0 * bfrac;
        let p = AvgDegreeParams::new(n, rho, beta, eps).unwrap();
        prop_assert!((1.0 + beta).powi(p.t as i32) >= n as f64 * (1.0 - 1e-12));
        prop_assert!(p.t == 1 || (1.0 + beta).powi(p.t as i32 - 1) < n as f64);
        prop_assert!(p.sample_size >= 1 && p.sample_size <= n);
        prop_assert!(p.merged_cutoff >= 1);
        prop_assert!(p.big_threshold > 0.0 && p.noise_bound > 0.0);
        prop_assert!((p.degree_cap() - 6.0 * p.noise_bound * (3.0 + beta + 1.0 / beta)).abs() < 1e-9 * p.degree_cap());
    }

    #[test]
    fn bucket_intervals(x in 1.0001f64..1e6, beta in 0.001f64..0.5) {
        let p = AvgDegreeParams::unchecked(10_000_000, 0.2, beta, 1.0);
        let i = p.bucket_index(x);
        prop_assume!(i < p.t);
        prop_assert!(x <= p.bucket_upper(i) * (1.0 + 1e-12));
        prop_assert!(x > p.bucket_upper(i - 1) * (1.0 - 1e-12));
    }

    #[test]
    fn queries_match_facade_counts(seed in any::<u64>(), eps in prop_oneof![Just(f64::INFINITY), 0.5f64..4.0]) {
        let g = Family::Gnp { n: 3000, p: 0.004 }.generate(seed % 5).unwrap();
        let p = AvgDegreeParams::new(3000, 0.2, 0.025, eps).unwrap().with_sample_size(300);
        let mut h = Oracle::new(&g);
        let r = estimate_average_degree(&mut h, &p, &NoiseSource::new(seed)).unwrap();
        prop_assert_eq!(r.queries, h.counts());
        prop_assert!(r.queries.neighbor_queries <= 300);
        prop_assert!(r.estimate >= 0.0);
    }
}

#[test]
fn buckets_partition_the_sample() {
    let g = Family::Gnp { n: 5000, p: 0.003 }.generate(3).unwrap();
    let p = AvgDegreeParams::new(5000, 0.2, 0.025, 1.0).unwrap().with_sample_size(1000);
    let mut h = Oracle::new(&g);
    let tbl = noisy_degree_sample(&mut h, &p, &NoiseSource::new(1)).unwrap();
    let part = bucketize(&tbl, &p);
    let total: usize = part.buckets.iter().map(Vec::len).sum();
    assert_eq!(total, 1000);
    let low: usize = part.buckets[..p.merged_cutoff.min(p.t)].iter().map(Vec::len).sum();
    assert_eq!(low, part.merged.len());
    assert!(part.big.iter().all(|&i| i > p.merged_cutoff));
}

#[test]
fn regular_graph_baseline_is_accurate() {
    let g = Family::DRegular { n: 20_000, d: 12 }.generate(2).unwrap();
    let p = AvgDegreeParams::new(20_000, 0.2, 0.025, f64::INFINITY).unwrap();
    for seed in 0..5 {
        let r = estimate_average_degree(&mut Oracle::new(&g), &p, &NoiseSource::new(seed)).unwrap();
        assert!((r.estimate - 12.0).abs() <= 0.2 * 12.0, "{}", r.estimate);
        assert_eq!(r.branch, Branch::SmallMerged);
    }
}
