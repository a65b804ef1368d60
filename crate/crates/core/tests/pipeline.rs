//! Chains the public modules the way an experiment would: choose a weak value,
//! prepare the path state, run the interferometer, read out, fit, and check
//! the two-photon visibility at the restoration angle.

use weakval_core::hom::{pair_visibility, symmetric_angle_report, PhotonPairConfig};
use weakval_core::optics::{
    postselection_state, preselection_from_weak_value, run_interferometer, PATHS,
};
use weakval_core::weakmeas::{fit_weak_value, readout_curve, synthesize_counts};
use weakval_core::{MeasurementStrength, Operator, PrePostSelection};

const WEAK_VALUES: [f64; 6] = [-1.14, -0.87, -0.57, -0.27, 0.5, 2.0];

fn st(g: f64) -> MeasurementStrength {
    MeasurementStrength::from_g(g).unwrap()
}

#[test]
fn prepared_state_has_requested_weak_value() {
    let a = Operator::basis_projector(PATHS, "A").unwrap();
    for p in WEAK_VALUES {
        let pp = PrePostSelection::new(&preselection_from_weak_value(p), &postselection_state())
            .unwrap();
        let w = pp.weak_value(&a).unwrap().value;
        assert!(
            (w.re - p).abs() < 1e-12 && w.im.abs() < 1e-12,
            "p={p} w={w}"
        );
    }
}

#[test]
fn readout_fit_returns_the_prepared_weak_value() {
    let grid: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    for p in WEAK_VALUES {
        let fit = fit_weak_value(&readout_curve(p, &grid).unwrap().points).unwrap();
        assert!((fit.p_a - p).abs() < 1e-6, "p={p} fit={}", fit.p_a);
    }
}

#[test]
fn restoration_angle_gives_unit_visibility() {
    let s = st(0.29);
    for p in WEAK_VALUES {
        let exact = symmetric_angle_report(p, s).unwrap().exact;
        let v = pair_visibility(&PhotonPairConfig::new(p, s).with_hwp5(exact)).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "p={p} v={v}");
    }
}

#[test]
fn counts_are_reproducible_and_bounded() {
    let s = st(0.4);
    let a = synthesize_counts(-0.57, s, 50_000, 3, 0.02).unwrap();
    let b = synthesize_counts(-0.57, s, 50_000, 3, 0.02).unwrap();
    assert_eq!(a, b);
    assert!(a.counts_h + a.counts_v <= a.trials);
    // Without noise, detections track the postselection probability.
    let clean = synthesize_counts(-0.57, s, 50_000, 3, 0.0).unwrap();
    let expected = run_interferometer(-0.57, s).unwrap().postselect_prob * 50_000.0;
    let sigma = (expected * (1.0 - expected / 50_000.0)).sqrt();
    assert!((clean.detected() as f64 - expected).abs() < 5.0 * sigma);
}
