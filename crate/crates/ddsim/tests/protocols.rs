//! Protocol comparison and further coherence behavior on the calibrated
//! model.

use ddsim::coherence::{chi, T1Envelope, T2Extraction};
use ddsim::noise::{calibrated, CompositePsd, PowerLawPsd, PsdTerm, TWO_PI};
use ddsim::optimizer::compare_protocols;
use ddsim::sequences::{PulseSequence, SequenceKind};

#[test]
fn udd_outlives_pdd_on_the_calibrated_model() {
    let model = calibrated::model();
    // the N = 3 crossings sit between 700 and 1000 us
    let taus: Vec<f64> = (0..110).map(|i| 400e-6 * (1.4e-3f64 / 4e-4).powf(i as f64 / 109.0)).collect();
    let out = compare_protocols(3, &taus, &model, &T1Envelope::disabled()).unwrap();
    let t2 = |kind: SequenceKind| -> f64 {
        match out.iter().find(|p| p.protocol == kind).unwrap().t2 {
            T2Extraction::Crossed(t) => t,
            T2Extraction::NotReached { .. } => panic!("{kind}: no crossing in scan range"),
        }
    };
    let (pdd, udd, cpmg) = (t2(SequenceKind::Pdd), t2(SequenceKind::Udd), t2(SequenceKind::Cpmg));
    assert!(udd > pdd, "UDD {udd} vs PDD {pdd}");
    assert!(cpmg > pdd, "CPMG {cpmg} vs PDD {pdd}");
    let ratio = udd / pdd;
    assert!((1.05..=1.45).contains(&ratio), "UDD/PDD ratio {ratio}");
}

#[test]
fn coherence_is_monotone_in_noise_scale() {
    // scaling S uniformly can only decay the coherence further
    let base = calibrated::model();
    let seq = PulseSequence::cpmg(3).unwrap();
    let tau = 600e-6;
    let scaled = |k: f64| -> CompositePsd {
        let terms: Vec<PsdTerm> = base
            .terms()
            .iter()
            .map(|t| match t {
                PsdTerm::PowerLaw(p) => PsdTerm::PowerLaw(
                    PowerLawPsd::new(k * p.amplitude, p.alpha, p.omega_ref, p.omega_lo, p.omega_hi)
                        .unwrap(),
                ),
                PsdTerm::Gaussian(g) => PsdTerm::Gaussian(ddsim::noise::GaussianPsd::new(
                    g.center,
                    g.width,
                    k * g.amplitude,
                ).unwrap()),
            })
            .collect();
        CompositePsd::new(terms)
    };
    let mut prev_w = f64::INFINITY;
    for k in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let c = chi(&seq, tau, &scaled(k), 1e-7).unwrap();
        assert!(c >= 0.0);
        let w = (-c).exp();
        assert!(w < prev_w, "W not decreasing at scale {k}");
        prev_w = w;
    }
}

#[test]
fn white_noise_chi_scales_linearly_with_s0() {
    let flat = |s0: f64| {
        CompositePsd::new(vec![PsdTerm::PowerLaw(
            PowerLawPsd::new(s0, 0.0, TWO_PI * 1e3, TWO_PI * 1.0, TWO_PI * 1e6).unwrap(),
        )])
    };
    let seq = PulseSequence::udd(3).unwrap();
    let c1 = chi(&seq, 2e-4, &flat(100.0), 1e-8).unwrap();
    let c5 = chi(&seq, 2e-4, &flat(500.0), 1e-8).unwrap();
    assert!((c5 / c1 - 5.0).abs() < 1e-9);
}
