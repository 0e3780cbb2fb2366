//! Criterion suite comparing the rayon build against the sequential
//! fallback. Run `cargo bench` for the parallel numbers and
//! `cargo bench --no-default-features` for the sequential baseline; the
//! group names carry the mode so the two reports line up.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use ddsim::coherence::{coherence_curve, mc_coherence, T1Envelope};
use ddsim::filter::sample_filter;
use ddsim::noise::{calibrated, CompositePsd, PowerLawPsd, PsdTerm, TWO_PI};
use ddsim::optimizer::grid_search_sym5;
use ddsim::sequences::PulseSequence;

fn mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}

fn moderate_band() -> CompositePsd {
    CompositePsd::new(vec![PsdTerm::PowerLaw(
        PowerLawPsd::new(800.0, 1.0, TWO_PI * 1e3, TWO_PI * 10.0, TWO_PI * 50e3).unwrap(),
    )])
}

fn bench_curve(c: &mut Criterion) {
    let model = calibrated::model();
    let seq = PulseSequence::pdd(5).unwrap();
    let taus: Vec<f64> = (1..=48).map(|i| 30e-6 * i as f64).collect();
    c.bench_function(&format!("coherence_curve_48pts/{}", mode()), |b| {
        b.iter_batched(
            || (),
            |_| {
                coherence_curve(&seq, &taus, &model, &T1Envelope::disabled(), 0.837, None, 1e-6)
                    .unwrap()
            },
            BatchSize::SmallInput,
        )
    });
}

fn bench_grid_search(c: &mut Criterion) {
    let model = calibrated::model();
    c.bench_function(&format!("grid_search_sym5_step0.02/{}", mode()), |b| {
        b.iter(|| grid_search_sym5(500e-6, &model, 0.02).unwrap())
    });
}

fn bench_mc(c: &mut Criterion) {
    let model = moderate_band();
    let seq = PulseSequence::cpmg(3).unwrap();
    c.bench_function(&format!("mc_coherence_500traj/{}", mode()), |b| {
        b.iter(|| mc_coherence(&seq, 400e-6, &model, 500, 128, 7).unwrap())
    });
}

fn bench_filter_sampling(c: &mut Criterion) {
    let seq = PulseSequence::udd(13).unwrap();
    let tau = 1e-3;
    c.bench_function(&format!("sample_filter_200k/{}", mode()), |b| {
        b.iter(|| {
            sample_filter(&seq, tau, 0.0, 16.0 * std::f64::consts::PI / tau, 200_001).unwrap()
        })
    });
}

criterion_group!(benches, bench_curve, bench_grid_search, bench_mc, bench_filter_sampling);
criterion_main!(benches);
