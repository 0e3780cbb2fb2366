//! Property tests for the sequence constructors, the filter function and
//! the spectral densities.

use ddsim::filter::FilterEvaluator;
use ddsim::noise::{
    field_noise_to_psd, psd_eval, CompositePsd, GaussianPsd, PowerLawPsd, PsdTerm, TWO_PI,
};
use ddsim::coherence::population;
use ddsim::sequences::{PulseSequence, SequenceKind, SymmetricFiveTiming};
use proptest::prelude::*;

fn constructor(kind: SequenceKind, n: usize) -> PulseSequence {
    PulseSequence::build(kind, n).unwrap()
}

proptest! {
    #[test]
    fn family_constructors_satisfy_timing_invariants(
        n in 1usize..=30,
        kind_idx in 0usize..3,
    ) {
        let kind = [SequenceKind::Pdd, SequenceKind::Udd, SequenceKind::Cpmg][kind_idx];
        let seq = constructor(kind, n);
        let fr = seq.fractions();
        prop_assert_eq!(fr.len(), n);
        for w in fr.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        prop_assert!(fr.iter().all(|&d| d > 0.0 && d < 1.0));
        let sum: f64 = seq.intervals().iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        prop_assert!(seq.is_mirror_symmetric(1e-12));
    }

    #[test]
    fn symmetric5_valid_region_produces_valid_sequences(
        t1 in 0.01f64..0.45,
        t2 in 0.01f64..0.45,
    ) {
        prop_assume!(0.5 - t1 - t2 > 0.01);
        let timing = SymmetricFiveTiming::from_tau12(t1, t2).unwrap();
        let seq = PulseSequence::symmetric5(timing).unwrap();
        prop_assert_eq!(seq.n_pulses(), 5);
        prop_assert!(seq.is_mirror_symmetric(1e-12));
        let sum: f64 = seq.intervals().iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn filter_is_nonnegative_and_reversal_invariant(
        raw in proptest::collection::vec(0.02f64..0.98, 1..8),
        theta in 0.0f64..300.0,
    ) {
        let mut fr = raw;
        fr.sort_by(f64::total_cmp);
        fr.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        let seq = PulseSequence::custom(fr).unwrap();
        let ev = FilterEvaluator::new(&seq);
        let g = ev.g_theta(theta);
        prop_assert!(g >= 0.0);
        let rev = FilterEvaluator::new(&seq.reversed());
        let gr = rev.g_theta(theta);
        prop_assert!((g - gr).abs() <= 1e-12 * g.max(gr).max(1e-30));
    }

    #[test]
    fn composite_psd_is_nonnegative(
        amp1 in 0.0f64..1e5,
        alpha in 0.0f64..2.5,
        amp2 in 0.0f64..1e5,
        center_khz in 0.5f64..50.0,
        width_khz in 0.05f64..5.0,
        omega in 0.0f64..1e7,
    ) {
        let model = CompositePsd::new(vec![
            PsdTerm::PowerLaw(PowerLawPsd::new(amp1, alpha, TWO_PI * 1e3, TWO_PI * 10.0, TWO_PI * 1e6).unwrap()),
            PsdTerm::Gaussian(GaussianPsd::new(TWO_PI * center_khz * 1e3, TWO_PI * width_khz * 1e3, amp2).unwrap()),
        ]);
        prop_assert!(psd_eval(&model, omega) >= 0.0);
    }

    #[test]
    fn population_stays_in_physical_range(w in 0.0f64..=1.0, v in 0.0f64..=1.0) {
        let p = population(w, v);
        prop_assert!((0.5..=1.0).contains(&p));
    }

    #[test]
    fn field_noise_is_homogeneous_of_degree_two(b in 1e-12f64..1e-6, k in 0.1f64..10.0) {
        let s1 = field_noise_to_psd(b, 21e9);
        let sk = field_noise_to_psd(k * b, 21e9);
        prop_assert!((sk - k * k * s1).abs() <= 1e-12 * sk.abs().max(s1.abs()));
    }
}
