use std::f64::consts::PI;

use rhg_core::sampling::{radial_cdf, sample_radius};
use rhg_core::{sample_coordinates, Params, SeededStream};

const DRAWS: usize = 1_000_000;
/// 99% quantile of the chi-square distribution with 99 degrees of freedom.
const CHI2_99_DF99: f64 = 134.641_6;

fn ks_statistic(mut sample: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[test]
fn radius_passes_kolmogorov_smirnov() {
    for (alpha, seed) in [(0.6, 101), (0.75, 102), (1.0, 103)] {
        let params = Params::new(alpha, 0.0, 10_000).unwrap();
        let mut stream = SeededStream::new(seed);
        let radii: Vec<f64> = (0..DRAWS).map(|_| sample_radius(stream.next_unit(), &params)).collect();
        let d = ks_statistic(radii, |r| radial_cdf(r, &params).unwrap());
        assert!(d <= 1.63 / (DRAWS as f64).sqrt(), "alpha = {alpha}: D = {d}");
    }
}

#[test]
fn angle_passes_chi_square() {
    for (alpha, seed) in [(0.6, 201), (0.75, 202), (1.0, 203)] {
        let params = Params::new(alpha, 0.0, DRAWS).unwrap();
        let coords = sample_coordinates(&params, &mut SeededStream::new(seed));
        let mut bins = [0usize; 100];
        for p in &coords {
            assert!(p.theta > -PI && p.theta <= PI);
            assert!((0.0..=params.radius()).contains(&p.r));
            let b = ((p.theta + PI) / (2.0 * PI) * 100.0) as usize;
            bins[b.min(99)] += 1;
        }
        let expected = DRAWS as f64 / 100.0;
        let chi2: f64 = bins.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 <= CHI2_99_DF99, "alpha = {alpha}: chi2 = {chi2}");
    }
}

#[test]
fn coordinates_follow_the_documented_stream_layout() {
    let params = Params::new(0.75, 0.0, 50).unwrap();
    let coords = sample_coordinates(&params, &mut SeededStream::new(8));
    let mut stream = SeededStream::new(8);
    for p in coords {
        let r = sample_radius(stream.next_unit(), &params);
        let u = stream.next_unit();
        assert_eq!(p.r, r);
        assert!((p.theta - PI * (2.0 * u - 1.0)).abs() < 1e-15 || (p.theta - PI).abs() < 1e-15);
    }
}
