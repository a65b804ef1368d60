//! Hong-Ou-Mandel visibility between two corrected photons.
//!
//! Photon 1 runs through an interferometer with `p = 1` and is turned back by
//! HWP4; photon 2 runs with some `p ≤ 0` and is turned back by HWP5. The two
//! meet at a 50/50 beam splitter at zero delay with perfect spectral overlap,
//! so the coincidence probability is `(1 − V)/2` with `V = |⟨s₁|s₂⟩|²`.
//! Accidental coincidences at ratio `r` to the signal scale the measured
//! visibility to `V/(1 + r)`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;
#[allow(unused_imports)] // shadowed by std's inherent methods whenever std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::optics::{
    delta_theta, hwp, restoration_hwp_angle, run_interferometer, MeasurementStrength, POLARIZATIONS,
};
use crate::qcore::{StateVector, EXACT_TOL};

/// Default HWP5 sweep step, 0.05°.
pub const DEFAULT_SWEEP_STEP: f64 = 0.05 * core::f64::consts::PI / 180.0;

/// `|⟨s₁|s₂⟩|²` for two normalized polarization states.
pub fn overlap_visibility(s1: &StateVector, s2: &StateVector) -> Result<f64> {
    for s in [s1, s2] {
        if s.labels() != POLARIZATIONS {
            return Err(Error::LabelMismatch {
                expected: POLARIZATIONS.join(","),
                found: s.labels().join(","),
            });
        }
        if !s.is_normalized() {
            return Err(Error::NotNormalized { norm: s.norm() });
        }
    }
    Ok(s1.fidelity(s2)?.clamp(0.0, 1.0))
}

/// Probability that the two photons leave through different ports.
pub fn coincidence_probability(s1: &StateVector, s2: &StateVector) -> Result<f64> {
    Ok((1.0 - overlap_visibility(s1, s2)?) / 2.0)
}

/// Both arms of the two-photon experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonPairConfig {
    pub p_a1: f64,
    pub p_a2: f64,
    /// Shared by both interferometers.
    pub strength: MeasurementStrength,
    pub hwp4_angle: f64,
    pub hwp5_angle: f64,
    /// Accidental-to-signal coincidence ratio, ≥ 0.
    pub background_ratio: f64,
}

impl PhotonPairConfig {
    /// Photon 1 at `p = 1` with HWP4 at π/4, HWP5 aligned with `|L⟩`, no background.
    pub fn new(p_a2: f64, strength: MeasurementStrength) -> Self {
        PhotonPairConfig {
            p_a1: 1.0,
            p_a2,
            strength,
            hwp4_angle: FRAC_PI_4,
            hwp5_angle: strength.theta(),
            background_ratio: 0.0,
        }
    }

    pub fn with_hwp5(mut self, angle: f64) -> Self {
        self.hwp5_angle = angle;
        self
    }

    pub fn with_background(mut self, ratio: f64) -> Self {
        self.background_ratio = ratio;
        self
    }
}

/// Background ratio `κ / P_post(p₂)`: fixed accidentals over a signal that
/// shrinks with the postselection probability of photon 2.
pub fn background_ratio_from_postselection(
    kappa: f64,
    p_a2: f64,
    strength: MeasurementStrength,
) -> Result<f64> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::OutOfRange {
            what: "background constant kappa",
            value: kappa,
        });
    }
    Ok(kappa / run_interferometer(p_a2, strength)?.postselect_prob)
}

/// Polarizations of photons 1 and 2 after their correcting plates.
pub fn corrected_photons(cfg: &PhotonPairConfig) -> Result<(StateVector, StateVector)> {
    let one = run_interferometer(cfg.p_a1, cfg.strength)?;
    let two = run_interferometer(cfg.p_a2, cfg.strength)?;
    Ok((
        hwp(cfg.hwp4_angle).apply(&one.output_polarization)?,
        hwp(cfg.hwp5_angle).apply(&two.output_polarization)?,
    ))
}

/// Measured visibility `|⟨s₁|s₂⟩|² / (1 + r)`.
pub fn pair_visibility(cfg: &PhotonPairConfig) -> Result<f64> {
    if !(cfg.background_ratio >= 0.0 && cfg.background_ratio.is_finite()) {
        return Err(Error::OutOfRange {
            what: "background ratio",
            value: cfg.background_ratio,
        });
    }
    let (s1, s2) = corrected_photons(cfg)?;
    Ok(overlap_visibility(&s1, &s2)? / (1.0 + cfg.background_ratio))
}

/// Visibility against HWP5 angle, with the peak read off the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct VisibilitySweep {
    pub hwp5_angles: Vec<f64>,
    /// HWP5 angle minus θ, the setting that leaves `|L⟩` unchanged.
    pub relative_angles: Vec<f64>,
    pub visibilities: Vec<f64>,
    pub argmax_index: usize,
    /// Relative angle of the largest sampled visibility.
    pub argmax_angle: f64,
    pub max_visibility: f64,
}

/// Evaluates [`pair_visibility`] at every HWP5 angle of `hwp5_grid`.
///
/// No interpolation: the peak is the best sample, ties going to the smaller angle.
pub fn visibility_sweep(template: &PhotonPairConfig, hwp5_grid: &[f64]) -> Result<VisibilitySweep> {
    if hwp5_grid.is_empty() {
        return Err(Error::DegenerateSamples("empty HWP5 grid"));
    }
    let theta = template.strength.theta();
    let visibilities = hwp5_grid
        .iter()
        .map(|&a| pair_visibility(&template.with_hwp5(a)))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, &v) in visibilities.iter().enumerate().skip(1) {
        let b = visibilities[best];
        if v > b || (v == b && hwp5_grid[i] < hwp5_grid[best]) {
            best = i;
        }
    }
    let relative_angles: Vec<f64> = hwp5_grid.iter().map(|a| a - theta).collect();
    Ok(VisibilitySweep {
        argmax_index: best,
        argmax_angle: relative_angles[best],
        max_visibility: visibilities[best],
        hwp5_angles: hwp5_grid.to_vec(),
        relative_angles,
        visibilities,
    })
}

/// HWP5 angles from `θ + rel_lo` to `θ + rel_hi` (inclusive when on the lattice) in steps of `step`.
pub fn hwp5_grid(
    strength: MeasurementStrength,
    rel_lo: f64,
    rel_hi: f64,
    step: f64,
) -> Result<Vec<f64>> {
    let ordered = step > 0.0 && rel_hi >= rel_lo;
    if !ordered {
        return Err(Error::DegenerateSamples("grid needs step > 0 and lo <= hi"));
    }
    let n = ((rel_hi - rel_lo) / step + 1e-9).floor() as usize;
    let theta = strength.theta();
    Ok((0..=n).map(|i| theta + rel_lo + step * i as f64).collect())
}

/// Candidate HWP5 settings for a given photon-2 weak value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricAngles {
    /// Plate angle that restores `|L⟩` exactly.
    pub exact: f64,
    /// `θ + p·Δθ/2`, the mirror image of HWP4 for `p = −1`.
    pub symmetric_mark: f64,
    /// `θ + p·G/2`, the small-G prediction.
    pub small_g_mark: f64,
}

pub fn symmetric_angle_report(p_a2: f64, strength: MeasurementStrength) -> Result<SymmetricAngles> {
    let theta = strength.theta();
    let run = run_interferometer(p_a2, strength)?;
    Ok(SymmetricAngles {
        exact: restoration_hwp_angle(&run, theta),
        symmetric_mark: theta + p_a2 * delta_theta(strength) / 2.0,
        small_g_mark: theta + p_a2 * strength.g() / 2.0,
    })
}

/// Restoration angle for photon 2 relative to θ.
pub fn restoration_relative(p_a2: f64, strength: MeasurementStrength) -> Result<f64> {
    Ok(symmetric_angle_report(p_a2, strength)?.exact - strength.theta())
}

/// True when the visibility is 1 within tolerance.
pub fn is_indistinguishable(v: f64) -> bool {
    (1.0 - v).abs() <= EXACT_TOL
}
