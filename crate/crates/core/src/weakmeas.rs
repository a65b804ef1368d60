//! Normalized polarization readout and weak-value extrapolation.
//!
//! The output polarization of the interferometer carries which-path
//! information with strength `G`. Rescaling the conditional probability of a
//! V detection,
//!
//! ```text
//! R = (P(V|φ) − sin²θ) / (cos²θ − sin²θ)
//! ```
//!
//! gives a readout that is 1 for a photon certainly on path A at every `G`,
//! equals the ABL probability at `G = 1`, and tends to `Re⟨|A⟩⟨A|⟩_w` as
//! `G → 0`. The closed form used here and as the fit model is
//!
//! ```text
//! R(G; p) = (p² − p(p−1)c) / (p² + (p−1)² − 2p(p−1)c),   c = √(1 − G²)
//! ```

use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by std's inherent methods whenever std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::optics::{run_interferometer, MeasurementStrength};

/// Bracket searched by [`fit_weak_value`].
pub const FIT_RANGE: (f64, f64) = (-10.0, 10.0);
/// Absolute tolerance on the fitted weak value.
pub const FIT_TOL: f64 = 1e-9;
/// Coarse scan points laid over [`FIT_RANGE`] before golden-section refinement.
const FIT_SCAN_POINTS: usize = 4001;

/// One sample of a readout-versus-strength curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutPoint {
    pub g: f64,
    pub p_v: f64,
    pub r: f64,
}

impl ReadoutPoint {
    /// Builds the point from `P(V|φ)`, computing `R`.
    pub fn new(strength: MeasurementStrength, p_v: f64) -> Result<Self> {
        Ok(ReadoutPoint {
            g: strength.g(),
            p_v,
            r: readout(p_v, strength)?,
        })
    }
}

/// Seeded photon-count tally at one value of `G`.
///
/// `counts_h + counts_v ≤ trials`; the remainder are trials in which the
/// photon left through the other port and no noise click occurred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountRecord {
    pub g: f64,
    pub counts_v: u64,
    pub counts_h: u64,
    pub trials: u64,
    pub seed: u64,
}

impl CountRecord {
    pub fn detected(&self) -> u64 {
        self.counts_h + self.counts_v
    }

    /// Empirical `P(V|φ)` from the counting ratio.
    pub fn p_v(&self) -> Result<f64> {
        match self.detected() {
            0 => Err(Error::NoCounts),
            n => Ok(self.counts_v as f64 / n as f64),
        }
    }

    pub fn strength(&self) -> Result<MeasurementStrength> {
        MeasurementStrength::from_g(self.g)
    }

    pub fn readout_point(&self) -> Result<ReadoutPoint> {
        ReadoutPoint::new(self.strength()?, self.p_v()?)
    }

    /// Binomial standard error of the readout, `√(P(1−P)/N) / G`.
    pub fn readout_std_error(&self) -> Result<f64> {
        let p = self.p_v()?;
        if self.g <= 0.0 {
            return Err(Error::ZeroStrengthReadout);
        }
        Ok((p * (1.0 - p) / self.detected() as f64).sqrt() / self.g)
    }
}

/// `P(V|φ) = α_V² / (α_H² + α_V²)` for the postselected photon.
pub fn conditional_prob_v(p_a: f64, strength: MeasurementStrength) -> Result<f64> {
    let run = run_interferometer(p_a, strength)?;
    let v = run.output_polarization.amplitudes()[1];
    Ok(v.norm_sqr())
}

/// Normalized readout `(P_V − sin²θ)/G`. Values outside [0, 1] are kept.
pub fn readout(p_v: f64, strength: MeasurementStrength) -> Result<f64> {
    let g = strength.g();
    if g <= 0.0 {
        return Err(Error::ZeroStrengthReadout);
    }
    let sin_sq = (1.0 - g) / 2.0;
    Ok((p_v - sin_sq) / g)
}

/// Closed-form `R(G; p)`. Continuous at `G = 0`, where it equals `p`.
pub fn readout_model(p_a: f64, g: f64) -> f64 {
    let c = (1.0 - g * g).max(0.0).sqrt();
    let q = p_a - 1.0;
    let cross = p_a * q * c;
    (p_a * p_a - cross) / (p_a * p_a + q * q - 2.0 * cross)
}

/// Readout samples for one nominal weak value.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutCurve {
    pub p_a_nominal: f64,
    pub points: Vec<ReadoutPoint>,
}

/// Exact readout at each `G` of `grid`, in grid order. Every `G` must lie in (0, 1].
pub fn readout_curve(p_a: f64, grid: &[f64]) -> Result<ReadoutCurve> {
    let points = grid
        .iter()
        .map(|&g| {
            if !(g > 0.0 && g <= 1.0) {
                return Err(Error::OutOfRange {
                    what: "readout strength G",
                    value: g,
                });
            }
            let st = MeasurementStrength::from_g(g)?;
            ReadoutPoint::new(st, conditional_prob_v(p_a, st)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReadoutCurve {
        p_a_nominal: p_a,
        points,
    })
}

/// Monte-Carlo photon counts for `trials` photons through the interferometer.
///
/// Each trial first draws postselection success with the exact probability,
/// then H or V from the exact `P(V|φ)`. A trial whose photon is not
/// postselected registers a noise click with probability `background_rate`,
/// split evenly between H and V. With a fixed per-trial rate the noise to
/// signal ratio therefore grows as the postselection probability falls.
///
/// The generator is ChaCha8 seeded from `seed`, so the record is a pure
/// function of the arguments.
pub fn synthesize_counts(
    p_a: f64,
    strength: MeasurementStrength,
    trials: u64,
    seed: u64,
    background_rate: f64,
) -> Result<CountRecord> {
    if trials == 0 {
        return Err(Error::InvalidTrials);
    }
    if !(0.0..=1.0).contains(&background_rate) {
        return Err(Error::OutOfRange {
            what: "background rate",
            value: background_rate,
        });
    }
    let run = run_interferometer(p_a, strength)?;
    let p_post = run.postselect_prob;
    let p_v = run.output_polarization.amplitudes()[1].norm_sqr();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut counts_h, mut counts_v) = (0u64, 0u64);
    for _ in 0..trials {
        if rng.gen::<f64>() < p_post {
            if rng.gen::<f64>() < p_v {
                counts_v += 1;
            } else {
                counts_h += 1;
            }
        } else if background_rate > 0.0 && rng.gen::<f64>() < background_rate {
            if rng.gen::<bool>() {
                counts_v += 1;
            } else {
                counts_h += 1;
            }
        }
    }
    Ok(CountRecord {
        g: strength.g(),
        counts_v,
        counts_h,
        trials,
        seed,
    })
}

/// Affine re-calibration from reference runs with `p = 1` and `p = 0`.
///
/// The readout becomes `(P_V − P_V⁰)/(P_V¹ − P_V⁰)`, so the references read
/// exactly 1 and 0. For ideal data this coincides with [`readout`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub g: f64,
    pub p_v_one: f64,
    pub p_v_zero: f64,
}

impl Calibration {
    pub fn from_probabilities(g: f64, p_v_one: f64, p_v_zero: f64) -> Result<Self> {
        if (p_v_one - p_v_zero).abs() <= 1e-12 {
            return Err(Error::ZeroStrengthReadout);
        }
        Ok(Calibration {
            g,
            p_v_one,
            p_v_zero,
        })
    }

    pub fn from_records(one: &CountRecord, zero: &CountRecord) -> Result<Self> {
        if one.g != zero.g {
            return Err(Error::OutOfRange {
                what: "calibration reference G mismatch",
                value: zero.g,
            });
        }
        Self::from_probabilities(one.g, one.p_v()?, zero.p_v()?)
    }

    /// Calibrated readout point; `g` is taken from the record.
    pub fn apply(&self, record: &CountRecord) -> Result<ReadoutPoint> {
        if record.g != self.g {
            return Err(Error::OutOfRange {
                what: "record G differs from calibration G",
                value: record.g,
            });
        }
        let p_v = record.p_v()?;
        Ok(ReadoutPoint {
            g: record.g,
            p_v,
            r: (p_v - self.p_v_zero) / (self.p_v_one - self.p_v_zero),
        })
    }
}

/// Result of extrapolating a readout curve to `G = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValueFit {
    pub p_a: f64,
    /// Root-mean-square residual of the readouts.
    pub residual: f64,
    /// Binomial standard error of `p_a`, available when fitting counts.
    pub std_error: Option<f64>,
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
pub fn golden_section_minimize(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = (a + b) / 2.0;
    [(a, f(a)), (mid, f(mid)), (b, f(b))]
        .into_iter()
        .fold((mid, f64::INFINITY), |best, cand| {
            if cand.1 < best.1 {
                cand
            } else {
                best
            }
        })
        .0
}

fn check_samples(points: &[ReadoutPoint]) -> Result<()> {
    let first = points
        .first()
        .ok_or(Error::DegenerateSamples("no samples"))?;
    if points
        .iter()
        .any(|p| !(p.g > 0.0 && p.g <= 1.0) || !p.r.is_finite())
    {
        return Err(Error::DegenerateSamples("sample outside 0 < G <= 1"));
    }
    if points.iter().all(|p| p.g == first.g) {
        return Err(Error::DegenerateSamples("need at least two distinct G"));
    }
    Ok(())
}

fn sum_sq(points: &[ReadoutPoint], p_a: f64) -> f64 {
    points
        .iter()
        .map(|pt| {
            let d = pt.r - readout_model(p_a, pt.g);
            d * d
        })
        .sum()
}

/// Least-squares fit of [`readout_model`] to the samples over `p ∈` [`FIT_RANGE`].
///
/// A coarse scan locates the basin, then golden-section search refines it to
/// [`FIT_TOL`].
pub fn fit_weak_value(points: &[ReadoutPoint]) -> Result<WeakValueFit> {
    check_samples(points)?;
    let (lo, hi) = FIT_RANGE;
    let step = (hi - lo) / (FIT_SCAN_POINTS - 1) as f64;
    let best = (0..FIT_SCAN_POINTS)
        .map(|i| lo + step * i as f64)
        .map(|p| (p, sum_sq(points, p)))
        .fold((lo, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b })
        .0;
    let p_a = golden_section_minimize(
        |p| sum_sq(points, p),
        (best - step).max(lo),
        (best + step).min(hi),
        FIT_TOL,
    );
    Ok(WeakValueFit {
        p_a,
        residual: (sum_sq(points, p_a) / points.len() as f64).sqrt(),
        std_error: None,
    })
}

/// [`fit_weak_value`] on count records, with the binomial standard error of
/// the estimate propagated through the model sensitivity `∂R/∂p`.
pub fn fit_weak_value_counts(records: &[CountRecord]) -> Result<WeakValueFit> {
    let points = records
        .iter()
        .map(CountRecord::readout_point)
        .collect::<Result<Vec<_>>>()?;
    let mut fit = fit_weak_value(&points)?;
    let h = 1e-6;
    let (mut jj, mut jsj) = (0.0, 0.0);
    for rec in records {
        let j = (readout_model(fit.p_a + h, rec.g) - readout_model(fit.p_a - h, rec.g)) / (2.0 * h);
        let sigma = rec.readout_std_error()?;
        jj += j * j;
        jsj += j * j * sigma * sigma;
    }
    fit.std_error = (jj > 0.0).then(|| jsj.sqrt() / jj);
    Ok(fit)
}
