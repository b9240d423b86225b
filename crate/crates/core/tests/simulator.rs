use std::f64::consts::PI;

use svdmimo::bounds::{bounds_for, cached_table};
use svdmimo::numerics::SirModel;
use svdmimo::simulator::{
    empirical_eigen_means, estimate_se, sample_drop, substream, Purpose, SimConfig,
};

fn config(n: usize, m: usize, alpha: f64, drops: usize) -> SimConfig {
    let mut c = SimConfig::new(SirModel::new(n, m, alpha).unwrap());
    c.drops = drops;
    c
}

#[test]
fn single_antenna_estimate_inside_bounds() {
    let est = estimate_se(&config(1, 1, 4.0, 100_000)).unwrap();
    let b = bounds_for(1, 1, 4.0).unwrap();
    let ci = est.ci95.unwrap();
    assert!(est.se_mean >= b.lower - 3.0 * ci, "{est:?} {b:?}");
    assert!(est.se_mean <= b.upper + 3.0 * ci, "{est:?} {b:?}");
}

#[test]
fn point_counts_in_disk_are_poisson() {
    // Points of the process (serving plus interferers) within radius R,
    // with λπR² = 5 and K large enough that the disk is never exhausted.
    let mut c = config(1, 1, 4.0, 1);
    c.lambda = 2.0;
    c.interferer_count = 60;
    let mean: f64 = 5.0;
    let radius = (mean / (c.lambda * PI)).sqrt();
    let drops = 10_000;
    let top = 13;
    let mut observed = vec![0usize; top + 1];
    for i in 0..drops {
        let d = sample_drop(&c, &mut substream(11, i, Purpose::Geometry));
        assert!(*d.interferer_distances.last().unwrap() > radius);
        let count = std::iter::once(d.serving_distance)
            .chain(d.interferer_distances)
            .filter(|&r| r <= radius)
            .count();
        observed[count.min(top)] += 1;
    }
    let mut pmf = vec![0.0; top + 1];
    let mut p = (-mean).exp();
    for (k, slot) in pmf.iter_mut().enumerate().take(top) {
        *slot = p;
        p *= mean / (k + 1) as f64;
    }
    pmf[top] = 1.0 - pmf[..top].iter().sum::<f64>();
    let chi2: f64 = observed
        .iter()
        .zip(&pmf)
        .map(|(&o, &p)| {
            let e = p * drops as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    // 95th percentile of chi-squared with 13 degrees of freedom.
    assert!(chi2 < 22.362, "chi2 = {chi2}, counts {observed:?}");
}

#[test]
fn truncation_is_negligible_at_heaviest_tail() {
    let mut c = config(4, 4, 3.0, 10_000);
    c.interferer_count = 200;
    let short = estimate_se(&c).unwrap();
    c.interferer_count = 1000;
    let long = estimate_se(&c).unwrap();
    let ci = short.ci95.unwrap().min(long.ci95.unwrap());
    assert!((short.se_mean - long.se_mean).abs() < ci, "{short:?} {long:?}");
}

#[test]
fn intensity_cancels() {
    let mut c = config(2, 2, 4.0, 5_000);
    let a = estimate_se(&c).unwrap();
    c.lambda = 4.0;
    let b = estimate_se(&c).unwrap();
    let combined = a.ci95.unwrap().hypot(b.ci95.unwrap());
    assert!((a.se_mean - b.se_mean).abs() <= 3.0 * combined);
    assert!((a.se_mean - b.se_mean).abs() < 1e-9);
}

#[test]
fn pathloss_raises_spectral_efficiency() {
    let low = estimate_se(&config(4, 4, 3.0, 10_000)).unwrap();
    let high = estimate_se(&config(4, 4, 5.0, 10_000)).unwrap();
    let combined = low.ci95.unwrap().hypot(high.ci95.unwrap());
    assert!(high.se_mean - low.se_mean > 3.0 * combined);
}

#[test]
fn interval_shrinks_with_drops() {
    let small = estimate_se(&config(2, 1, 4.0, 2_000)).unwrap();
    let large = estimate_se(&config(2, 1, 4.0, 8_000)).unwrap();
    let ratio = small.ci95.unwrap() / large.ci95.unwrap();
    assert!((ratio - 2.0).abs() < 0.4, "ratio {ratio}");
    assert!(small.per_stream_sir_db_mean.len() == 1);
}

#[test]
fn largest_eigenvalue_matches_table_at_32() {
    let emp = empirical_eigen_means(32, 2_000, 42).unwrap();
    let table = cached_table(32).unwrap();
    assert!((emp.means[0] - table.u()[0] / 32.0).abs() < 0.2);
    let trace: f64 = emp.means.iter().sum();
    // E[tr HᴴH] / N = N
    assert!((trace - 32.0).abs() < 0.2, "{trace}");
}
